use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::InputExpr;
use crate::error::{Error, Result};
use crate::field::arith::divides_p_power;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax { offset, message: message.into() }
}

fn unsupported(offset: usize, message: impl Into<String>) -> Error {
    Error::UnsupportedConstruct { offset, message: message.into() }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
        } else if c.is_ascii_digit() {
            let mut end = i;
            while let Some(&(j, d)) = it.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = j + 1;
                it.next();
            }
            out.push((Tok::Int(src[i..end].parse().unwrap()), i));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut end = i;
            while let Some(&(j, d)) = it.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_') {
                    break;
                }
                end = j + 1;
                it.next();
            }
            out.push((Tok::Ident(src[i..end].to_string()), i));
        } else if "+-*/^(),".contains(c) {
            out.push((Tok::Sym(c), i));
            it.next();
        } else {
            return Err(syntax(i, format!("unexpected character '{c}'")));
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

impl Lexer {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn next(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(syntax(self.offset(), format!("expected '{c}'")))
        }
    }

    fn int(&mut self) -> Result<(BigInt, usize)> {
        match self.next() {
            (Tok::Int(n), at) => Ok((n, at)),
            (_, at) => Err(syntax(at, "expected an integer")),
        }
    }
}

fn infix(t: &Tok) -> Option<(u8, char)> {
    match t {
        Tok::Sym(c @ ('+' | '-')) => Some((1, *c)),
        Tok::Sym(c @ ('*' | '/')) => Some((2, *c)),
        _ => None,
    }
}

struct Parser {
    lx: Lexer,
    p: u64,
}

impl Parser {
    fn expr(&mut self, min: u8) -> Result<InputExpr> {
        let mut lhs = self.unary()?;
        while let Some((bp, op)) = infix(self.lx.peek()) {
            if bp < min {
                break;
            }
            self.lx.next();
            let rhs = self.expr(bp + 1)?;
            let (a, b) = (Box::new(lhs), Box::new(rhs));
            lhs = match op {
                '+' => InputExpr::Add(a, b),
                '-' => InputExpr::Sub(a, b),
                '*' => InputExpr::Mul(a, b),
                _ => InputExpr::Div(a, b),
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<InputExpr> {
        if self.lx.eat('-') {
            return Ok(InputExpr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if !self.lx.eat('^') {
            return Ok(base);
        }
        let neg = self.lx.eat('-');
        let (k, at) = self.lx.int()?;
        let k = k.to_i64().filter(|k| *k <= u32::MAX as i64).ok_or_else(|| unsupported(at, "exponent too large"))?;
        if *self.lx.peek() == Tok::Sym('^') {
            return Err(syntax(self.lx.offset(), "chained exponents need parentheses"));
        }
        Ok(InputExpr::Pow(Box::new(base), if neg { -k } else { k }))
    }

    fn atom(&mut self) -> Result<InputExpr> {
        match self.lx.next() {
            (Tok::Int(n), _) => Ok(InputExpr::Int(n)),
            (Tok::Sym('('), _) => {
                let e = self.expr(1)?;
                self.lx.expect(')')?;
                Ok(e)
            }
            (Tok::Ident(name), at) => match name.as_str() {
                "x" => Ok(InputExpr::X),
                "zeta" => {
                    self.lx.expect('(')?;
                    let (n, nat) = self.lx.int()?;
                    self.lx.expect(')')?;
                    match n.to_u64() {
                        Some(n) if n >= 1 && n <= 1 << 20 => Ok(InputExpr::Zeta(n)),
                        _ => Err(unsupported(nat, "zeta order must be between 1 and 2^20")),
                    }
                }
                "root" => self.root(at),
                _ => Err(syntax(at, format!("unknown identifier '{name}'"))),
            },
            (Tok::End, at) => Err(syntax(at, "unexpected end of input")),
            (_, at) => Err(syntax(at, "expected an operand")),
        }
    }

    fn root(&mut self, at: usize) -> Result<InputExpr> {
        self.lx.expect('(')?;
        let (num, cat) = self.lx.int()?;
        let den = if self.lx.eat('/') { self.lx.int()?.0 } else { BigInt::from(1) };
        self.lx.expect(',')?;
        let (n, nat) = self.lx.int()?;
        self.lx.expect(')')?;
        if den.is_zero() {
            return Err(unsupported(cat, "zero denominator in root base"));
        }
        let c = BigRational::new(num, den);
        if !c.is_positive() {
            return Err(unsupported(cat, "root base must be positive"));
        }
        let n = n.to_u64().filter(|n| *n >= 1).ok_or_else(|| unsupported(nat, "root index must be a positive integer"))?;
        if !divides_p_power(n, self.p) {
            return Err(unsupported(at, format!("root index {n} does not divide a power of p = {}", self.p)));
        }
        Ok(InputExpr::Root(c, n))
    }
}

/// Parses `src`; `p` decides which radicals are admissible.
pub fn parse(src: &str, p: u64) -> Result<InputExpr> {
    let mut ps = Parser { lx: Lexer { toks: lex(src)?, pos: 0 }, p };
    let e = ps.expr(1)?;
    match ps.lx.peek() {
        Tok::End => Ok(e),
        _ => Err(syntax(ps.lx.offset(), "unexpected token")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(e: InputExpr) -> Box<InputExpr> {
        Box::new(e)
    }

    fn int(n: i64) -> InputExpr {
        InputExpr::Int(BigInt::from(n))
    }

    #[test]
    fn precedence() {
        let e = parse("1/(x^6+1)", 3).unwrap();
        assert_eq!(e, InputExpr::Div(b(int(1)), b(InputExpr::Add(b(InputExpr::Pow(b(InputExpr::X), 6)), b(int(1))))));
        assert_eq!(parse("-x^2", 2).unwrap(), InputExpr::Neg(b(InputExpr::Pow(b(InputExpr::X), 2))));
        assert_eq!(
            parse("1 - 2 - 3", 2).unwrap(),
            InputExpr::Sub(b(InputExpr::Sub(b(int(1)), b(int(2)))), b(int(3)))
        );
        assert_eq!(parse("x^-2", 2).unwrap(), InputExpr::Pow(b(InputExpr::X), -2));
        assert!(parse("(-x^6+4*x^3+x^2-4*x)/((x-2)^2*(x^3-2)^2)", 3).is_ok());
        assert!(parse("zeta(4)/(x - zeta(12))", 3).is_ok());
    }

    #[test]
    fn errors_carry_offsets() {
        assert!(matches!(parse("root(2, 5)", 3), Err(Error::UnsupportedConstruct { offset: 0, .. })));
        assert!(parse("root(2, 9)", 3).is_ok());
        assert!(matches!(parse("x + * 2", 2), Err(Error::Syntax { offset: 4, .. })));
        assert!(matches!(parse("(x + 1", 2), Err(Error::Syntax { offset: 6, .. })));
        assert!(matches!(parse("x $ 1", 2), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse("y", 2), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse("x^2^3", 2), Err(Error::Syntax { offset: 3, .. })));
    }

    #[test]
    fn render_round_trips() {
        for src in [
            "-x^6 + 4*x^3 + x^2 - 4*x",
            "1/(x - 2)^2",
            "(-x)^2",
            "-(x + 1)",
            "x - (1 - x)",
            "x/(2*x)",
            "1/4*zeta(12)^7/(x - zeta(12))",
            "root(3/2,9)*x^-3",
            "--x",
            "x*-2",
        ] {
            let e = parse(src, 3).unwrap();
            assert_eq!(e.render(), src);
            assert_eq!(parse(&e.render(), 3).unwrap(), e);
        }
    }
}
