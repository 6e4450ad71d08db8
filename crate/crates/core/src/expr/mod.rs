//! The input language: a small expression grammar over `x`, rational
//! literals, `zeta(N)` and `root(c, n)`.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' ['-'] INT)?
//! atom  := INT | 'x' | 'zeta' '(' INT ')' | 'root' '(' INT ['/' INT] ',' INT ')' | '(' expr ')'
//! ```

mod eval;
mod parse;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::field::render_rational;

pub use eval::{evaluate, parse_function};
pub use parse::parse;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputExpr {
    Int(BigInt),
    X,
    Zeta(u64),
    /// The positive real `c^(1/n)`.
    Root(BigRational, u64),
    Neg(Box<InputExpr>),
    Add(Box<InputExpr>, Box<InputExpr>),
    Sub(Box<InputExpr>, Box<InputExpr>),
    Mul(Box<InputExpr>, Box<InputExpr>),
    Div(Box<InputExpr>, Box<InputExpr>),
    Pow(Box<InputExpr>, i64),
}

impl InputExpr {
    fn precedence(&self) -> u8 {
        match self {
            InputExpr::Add(..) | InputExpr::Sub(..) => 1,
            InputExpr::Mul(..) | InputExpr::Div(..) => 2,
            InputExpr::Neg(_) => 3,
            InputExpr::Pow(..) => 4,
            _ => 5,
        }
    }

    /// Source text that parses back to the same tree.
    pub fn render(&self) -> String {
        let wrap = |e: &InputExpr, min: u8| {
            if e.precedence() >= min {
                e.render()
            } else {
                format!("({})", e.render())
            }
        };
        match self {
            InputExpr::Int(n) => n.to_string(),
            InputExpr::X => "x".into(),
            InputExpr::Zeta(n) => format!("zeta({n})"),
            InputExpr::Root(c, n) => format!("root({},{n})", render_rational(c)),
            InputExpr::Neg(a) => format!("-{}", wrap(a, 3)),
            InputExpr::Add(a, b) => format!("{} + {}", wrap(a, 1), wrap(b, 2)),
            InputExpr::Sub(a, b) => format!("{} - {}", wrap(a, 1), wrap(b, 2)),
            InputExpr::Mul(a, b) => format!("{}*{}", wrap(a, 2), wrap(b, 3)),
            InputExpr::Div(a, b) => format!("{}/{}", wrap(a, 2), wrap(b, 3)),
            InputExpr::Pow(a, k) => format!("{}^{k}", wrap(a, 5)),
        }
    }
}

impl fmt::Display for InputExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}
