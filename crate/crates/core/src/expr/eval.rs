use std::collections::BTreeSet;

use num_rational::BigRational;

use super::{parse, InputExpr};
use crate::error::Result;
use crate::field::{Field, Radical, RadicalMonomial};
use crate::ratfun::RationalFunction;
use crate::Scalar;

/// The rational function denoted by `e`.
///
/// Every subexpression of the shape `x^n ± c` with `c` a monomial contributes
/// its roots as pole hints, so denominators written in factored form need no
/// factorization later.
pub fn evaluate(e: &InputExpr, p: u64) -> Result<RationalFunction> {
    let out = match e {
        InputExpr::Int(n) => RationalFunction::constant(Scalar::rational(BigRational::from_integer(n.clone()))),
        InputExpr::X => RationalFunction::x(),
        InputExpr::Zeta(n) => RationalFunction::constant(Scalar::zeta_pow(*n, 1)),
        InputExpr::Root(c, n) => RationalFunction::constant(Radical::root_of(c, *n)),
        InputExpr::Neg(a) => evaluate(a, p)?.neg(),
        InputExpr::Add(a, b) | InputExpr::Sub(a, b) | InputExpr::Mul(a, b) | InputExpr::Div(a, b) => {
            let (a, b) = (evaluate(a, p)?, evaluate(b, p)?);
            a.radical_compatible(&b)?;
            let mut r = match e {
                InputExpr::Add(..) => a.add(&b)?,
                InputExpr::Sub(..) => a.sub(&b)?,
                InputExpr::Mul(..) => a.mul(&b)?,
                _ => a.div(&b)?,
            };
            let hints = binomial_roots(&r, p);
            r.add_hints(hints);
            r
        }
        InputExpr::Pow(a, k) => evaluate(a, p)?.pow(*k)?,
    };
    Ok(out)
}

/// Parses and evaluates `src`.
pub fn parse_function(src: &str, p: u64) -> Result<RationalFunction> {
    evaluate(&parse(src, p)?, p)
}

fn binomial_roots(f: &RationalFunction, p: u64) -> BTreeSet<RadicalMonomial> {
    let mut out = BTreeSet::new();
    if !f.is_polynomial() {
        return out;
    }
    let cs = f.num().coeffs();
    let n = cs.len().saturating_sub(1);
    if n == 0 || cs[1..n].iter().any(|c| !num_traits::Zero::is_zero(c)) || num_traits::Zero::is_zero(&cs[0]) {
        return out;
    }
    let Ok(c) = cs[0].try_div(&cs[n]) else { return out };
    let Some(m) = RadicalMonomial::from_element(&c.neg_ref()) else { return out };
    for r in m.roots(n as u64) {
        if r.is_p_adic(p) {
            out.insert(r);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat_int;
    use crate::ratfun::find_poles;

    #[test]
    fn evaluates_worked_examples() {
        let f = parse_function("(-x^6+4*x^3+x^2-4*x)/((x-2)^2*(x^3-2)^2)", 3).unwrap();
        assert_eq!(f.den().deg0(), 8);
        assert_eq!(f.hints().len(), 4);
        let poles = find_poles(f.den(), f.hints()).unwrap();
        assert_eq!(poles.iter().map(|(_, m)| m).sum::<u32>(), 8);

        let f = parse_function("zeta(4)/(x - zeta(12))", 3).unwrap();
        assert_eq!(f.hints().iter().next().unwrap(), &RadicalMonomial::root_of_unity(12, 1));

        let g = parse_function("1/(x - root(2,3))^2", 3).unwrap();
        let expect = RationalFunction::pole_power(&RadicalMonomial::from_rational(&rat_int(2)).principal_root(3), 2);
        assert_eq!(g, expect);
    }

    #[test]
    fn render_echo_is_stable() {
        for src in ["1/(x^6+1)", "x^-2 + 3*x - 1/(x + 1/2)", "zeta(4)/(x - zeta(12))", "root(4,9)*x/(x^3 - 2)"] {
            let f = parse_function(src, 3).unwrap();
            let back = parse_function(&f.render(), 3).unwrap();
            assert_eq!(back, f, "{src}");
        }
    }

    #[test]
    fn incompatible_radicals_are_errors() {
        assert!(parse_function("root(2,3) + root(3,3)", 3).is_err());
        assert!(parse_function("1/0", 3).is_err());
    }
}
