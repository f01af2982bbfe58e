//! Abstract syntax, concrete syntax and syntactic measures of the epsilon
//! calculus over first-order arithmetic.

mod critical;
mod expr;
mod parser;
mod printer;

pub use critical::{enumerate_closed_epsilon_terms, CriticalFormula, CriticalFormulaSet};
pub use expr::{Conn, Expr, Fun, Hint, Rel};
pub use parser::{parse_critical, parse_critical_set, parse_expr, ParseError};
pub use printer::print_expr;
