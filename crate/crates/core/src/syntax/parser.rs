use thiserror::Error;

use super::critical::{CriticalFormula, CriticalFormulaSet};
use super::expr::{Conn, Expr, Fun, Hint, Rel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("{line}:{col}: free variable `{name}` is not the distinguished variable `{var}`")]
    OpenVariable {
        line: usize,
        col: usize,
        name: String,
        var: String,
    },
    #[error("{line}:{col}: witness term contains free variable `{name}`")]
    OpenWitness {
        line: usize,
        col: usize,
        name: String,
    },
}

const RESERVED: &[&str] = &[
    "eps", "crit", "not", "and", "or", "imp", "true", "false", "monus", "+", "*", "=", "<",
];

pub(crate) fn is_reserved(word: &str) -> bool {
    RESERVED.contains(&word)
}

/// Words usable as variable names.
pub(crate) fn is_symbol(word: &str) -> bool {
    !word.is_empty()
        && !is_reserved(word)
        && !word.bytes().all(|b| b.is_ascii_digit())
        && !word
            .chars()
            .any(|c| c.is_whitespace() || c == '(' || c == ')' || c == ';')
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Word(String),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            ';' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '(' | ')' => {
                chars.next();
                out.push(Token {
                    tok: if c == '(' { Tok::Open } else { Tok::Close },
                    line,
                    col,
                });
                col += 1;
            }
            _ => {
                let (l, c0) = (line, col);
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    word.push(c);
                    chars.next();
                    col += 1;
                }
                out.push(Token {
                    tok: Tok::Word(word),
                    line: l,
                    col: c0,
                });
            }
        }
    }
    out
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
    scope: Vec<String>,
}

impl Parser {
    fn new(text: &str) -> Self {
        let toks = tokenize(text);
        let lines: Vec<&str> = text.split('\n').collect();
        let end = (
            lines.len(),
            lines.last().map(|l| l.chars().count()).unwrap_or(0) + 1,
        );
        Parser {
            toks,
            pos: 0,
            end,
            scope: Vec::new(),
        }
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|t| (t.line, t.col))
            .unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError::Syntax {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_head(&self) -> Option<&str> {
        match (self.toks.get(self.pos), self.toks.get(self.pos + 1)) {
            (
                Some(Token { tok: Tok::Open, .. }),
                Some(Token {
                    tok: Tok::Word(w), ..
                }),
            ) => Some(w.as_str()),
            _ => None,
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn expect_open(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Open) => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err("expected `(`"),
        }
    }

    fn expect_close(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Close) => {
                self.pos += 1;
                Ok(())
            }
            Some(_) => self.err("expected `)`"),
            None => self.err("unexpected end of input, expected `)`"),
        }
    }

    fn word(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            Some(_) => self.err("expected a word"),
            None => self.err("unexpected end of input"),
        }
    }

    fn binder_name(&mut self) -> Result<String, ParseError> {
        let at = self.pos;
        let name = self.word()?;
        if !is_symbol(&name) {
            self.pos = at;
            return self.err(format!("`{name}` cannot be used as a variable"));
        }
        Ok(name)
    }

    fn variable(&self, name: &str) -> Expr {
        match self.scope.iter().rev().position(|s| s == name) {
            Some(i) => Expr::Bound(i as u32),
            None => Expr::Free(name.to_string()),
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Tok::Word(_)) => {
                let at = self.pos;
                let w = self.word()?;
                if w.bytes().all(|b| b.is_ascii_digit()) {
                    return match w.parse::<u64>() {
                        Ok(n) => Ok(Expr::Num(n)),
                        Err(_) => {
                            self.pos = at;
                            self.err(format!("numeral `{w}` out of range"))
                        }
                    };
                }
                if !is_symbol(&w) {
                    self.pos = at;
                    return self.err(format!("expected a term, found `{w}`"));
                }
                Ok(self.variable(&w))
            }
            Some(Tok::Open) => {
                let head = self.peek_head().map(str::to_string);
                match head.as_deref() {
                    Some("eps") => self.epsilon(),
                    Some(op @ ("+" | "*" | "monus")) => {
                        let f = match op {
                            "+" => Fun::Plus,
                            "*" => Fun::Times,
                            _ => Fun::Monus,
                        };
                        self.pos += 2;
                        let a = self.term()?;
                        let b = self.term()?;
                        self.expect_close()?;
                        Ok(Expr::app(f, a, b))
                    }
                    _ => {
                        self.pos += 1;
                        self.err("expected a term")
                    }
                }
            }
            Some(Tok::Close) => self.err("unexpected `)`, expected a term"),
            None => self.err("unexpected end of input, expected a term"),
        }
    }

    fn epsilon(&mut self) -> Result<Expr, ParseError> {
        self.expect_open()?;
        self.pos += 1; // eps
        let name = self.binder_name()?;
        self.scope.push(name.clone());
        let body = self.formula();
        self.scope.pop();
        let body = body?;
        self.expect_close()?;
        Ok(Expr::Eps(Hint(name), Box::new(body)))
    }

    fn formula(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Tok::Word(w)) if w == "true" || w == "false" => {
                let b = w == "true";
                self.pos += 1;
                Ok(Expr::Bool(b))
            }
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.err(format!("expected a formula, found `{w}`"))
            }
            Some(Tok::Open) => {
                let head = self.peek_head().map(str::to_string);
                match head.as_deref() {
                    Some(r @ ("=" | "<")) => {
                        let rel = if r == "=" { Rel::Eq } else { Rel::Lt };
                        self.pos += 2;
                        let a = self.term()?;
                        let b = self.term()?;
                        self.expect_close()?;
                        Ok(Expr::atom(rel, a, b))
                    }
                    Some("not") => {
                        self.pos += 2;
                        let a = self.formula()?;
                        self.expect_close()?;
                        Ok(Expr::negate(a))
                    }
                    Some(c @ ("and" | "or" | "imp")) => {
                        let conn = match c {
                            "and" => Conn::And,
                            "or" => Conn::Or,
                            _ => Conn::Imp,
                        };
                        self.pos += 2;
                        let a = self.formula()?;
                        let b = self.formula()?;
                        self.expect_close()?;
                        Ok(Expr::conn(conn, a, b))
                    }
                    _ => {
                        self.pos += 1;
                        self.err("expected a formula")
                    }
                }
            }
            Some(Tok::Close) => self.err("unexpected `)`, expected a formula"),
            None => self.err("unexpected end of input, expected a formula"),
        }
    }

    fn expression(&mut self) -> Result<Expr, ParseError> {
        let formula_head = matches!(
            self.peek_head(),
            Some("=" | "<" | "not" | "and" | "or" | "imp")
        ) || matches!(self.peek(), Some(Tok::Word(w)) if w == "true" || w == "false");
        if formula_head {
            self.formula()
        } else {
            self.term()
        }
    }

    fn critical(&mut self) -> Result<CriticalFormula, ParseError> {
        if self.peek_head() != Some("crit") {
            return self.err("expected `(crit ...)`");
        }
        self.pos += 2;
        let var = self.binder_name()?;
        let (fl, fc) = self.here();
        self.scope.push(var.clone());
        let matrix = self.formula();
        self.scope.pop();
        let matrix = matrix?;
        if let Some(name) = matrix.free_names().into_iter().next() {
            return Err(ParseError::OpenVariable {
                line: fl,
                col: fc,
                name,
                var,
            });
        }
        let (tl, tc) = self.here();
        let witness = self.term()?;
        if let Some(name) = witness.free_names().into_iter().next() {
            return Err(ParseError::OpenWitness {
                line: tl,
                col: tc,
                name,
            });
        }
        self.expect_close()?;
        Ok(CriticalFormula::new(var, matrix, witness))
    }
}

/// Parses a single term or formula. Unbound names become free variables.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text);
    let e = p.expression()?;
    if !p.at_end() {
        return p.err("trailing input after expression");
    }
    Ok(e)
}

/// Parses one `(crit x F t)` form.
pub fn parse_critical(text: &str) -> Result<CriticalFormula, ParseError> {
    let mut p = Parser::new(text);
    let c = p.critical()?;
    if !p.at_end() {
        return p.err("trailing input after critical formula");
    }
    Ok(c)
}

/// Parses a file of critical formulas; the axiom index is the position.
pub fn parse_critical_set(text: &str) -> Result<CriticalFormulaSet, ParseError> {
    let mut p = Parser::new(text);
    let mut axioms = Vec::new();
    while !p.at_end() {
        axioms.push(p.critical()?);
    }
    Ok(CriticalFormulaSet::new(axioms))
}
