use std::fmt::{self, Write};

use super::expr::Expr;
use super::parser::is_symbol;

/// Prints `e` in the s-expression syntax.
///
/// Binder names come from the hints; a hint is replaced by a fresh one when
/// it would capture or be captured, so `parse(print(e)) == e` always holds.
pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    let reserved = e.free_names();
    let mut env = Vec::new();
    write_expr(&mut out, e, &mut env, &reserved).expect("writing to a String");
    out
}

/// Prints an expression whose loose index 0 is named `var`.
pub(crate) fn print_open(e: &Expr, var: &str) -> String {
    let mut out = String::new();
    let reserved = e.free_names();
    let mut env = vec![var.to_string()];
    write_expr(&mut out, e, &mut env, &reserved).expect("writing to a String");
    out
}

pub(crate) fn binder_name(hint: &str) -> String {
    fresh(hint, &[], &[])
}

fn fresh(hint: &str, env: &[String], reserved: &[String]) -> String {
    let base = if is_symbol(hint) { hint } else { "x" };
    let taken = |n: &str| env.iter().any(|s| s == n) || reserved.iter().any(|s| s == n);
    if !taken(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}_{i}"))
        .find(|n| !taken(n))
        .expect("unbounded name supply")
}

fn write_expr(
    out: &mut String,
    e: &Expr,
    env: &mut Vec<String>,
    reserved: &[String],
) -> fmt::Result {
    match e {
        Expr::Num(n) => write!(out, "{n}"),
        Expr::Bool(b) => out.write_str(if *b { "true" } else { "false" }),
        Expr::Free(name) => out.write_str(name),
        Expr::Bound(i) => {
            let idx = env.len().checked_sub(1 + *i as usize);
            match idx {
                Some(idx) => out.write_str(&env[idx]),
                // dangling index: not parseable, but keep Display total
                None => write!(out, "#{i}"),
            }
        }
        Expr::App(f, a, b) => {
            write!(out, "({} ", f.symbol())?;
            write_expr(out, a, env, reserved)?;
            out.write_char(' ')?;
            write_expr(out, b, env, reserved)?;
            out.write_char(')')
        }
        Expr::Atom(r, a, b) => {
            write!(out, "({} ", r.symbol())?;
            write_expr(out, a, env, reserved)?;
            out.write_char(' ')?;
            write_expr(out, b, env, reserved)?;
            out.write_char(')')
        }
        Expr::Conn(c, a, b) => {
            write!(out, "({} ", c.symbol())?;
            write_expr(out, a, env, reserved)?;
            out.write_char(' ')?;
            write_expr(out, b, env, reserved)?;
            out.write_char(')')
        }
        Expr::Not(a) => {
            out.write_str("(not ")?;
            write_expr(out, a, env, reserved)?;
            out.write_char(')')
        }
        Expr::Eps(hint, body) => {
            let name = fresh(hint.as_str(), env, reserved);
            write!(out, "(eps {name} ")?;
            env.push(name);
            let r = write_expr(out, body, env, reserved);
            env.pop();
            r?;
            out.write_char(')')
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_expr(self))
    }
}
