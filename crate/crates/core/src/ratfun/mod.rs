//! Rational functions over the tower field, the Laurent/proper split, σ and Δ.

mod laurent;
mod partial;
mod recognize;

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::FieldError;
use crate::field::{Field, Radical, RadicalMonomial};
use crate::poly::Poly;
use crate::series::inv_trunc;
use crate::Scalar;

pub use laurent::{trajectory_components, trajectory_of, LaurentPoly};
pub use partial::{partial_fractions, recombine, PartialFraction};
pub use recognize::{find_poles, joint_radical};

pub type ScalarPoly = Poly<Scalar>;

/// `num/den` with `gcd(num, den) = 1` and `den` monic.
///
/// `hints` is a set of monomials that may be roots of the denominator. It is
/// carried through arithmetic so that pole recognition does not need to
/// factor over number fields; it never affects equality.
#[derive(Clone)]
pub struct RationalFunction {
    num: ScalarPoly,
    den: ScalarPoly,
    hints: BTreeSet<RadicalMonomial>,
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl RationalFunction {
    pub fn new(num: ScalarPoly, den: ScalarPoly) -> Result<Self, FieldError> {
        Self::with_hints(num, den, BTreeSet::new())
    }

    pub fn with_hints(num: ScalarPoly, den: ScalarPoly, hints: BTreeSet<RadicalMonomial>) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den)?;
        let (mut num, mut den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_rem(&g)?.0, den.div_rem(&g)?.0)
        };
        let lc = den.lead().unwrap().clone();
        if !lc.is_one() {
            let inv = lc.try_inv()?;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RationalFunction { num, den, hints })
    }

    /// Trusted constructor: the caller guarantees coprimality and a monic denominator.
    pub(crate) fn from_reduced(num: ScalarPoly, den: ScalarPoly, hints: BTreeSet<RadicalMonomial>) -> Self {
        debug_assert!(den.is_monic());
        if num.is_zero() {
            return Self::zero();
        }
        RationalFunction { num, den, hints }
    }

    pub fn zero() -> Self {
        RationalFunction { num: Poly::zero(), den: Poly::one(), hints: BTreeSet::new() }
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::polynomial(Poly::constant(c))
    }

    pub fn x() -> Self {
        Self::polynomial(Poly::x())
    }

    pub fn polynomial(p: ScalarPoly) -> Self {
        RationalFunction { num: p, den: Poly::one(), hints: BTreeSet::new() }
    }

    /// `1/(x − α)^k`.
    pub fn pole_power(alpha: &RadicalMonomial, k: u32) -> Self {
        let den = Poly::linear(&alpha.value()).pow(k);
        let mut hints = BTreeSet::new();
        hints.insert(alpha.clone());
        RationalFunction { num: Poly::one(), den, hints }
    }

    pub fn num(&self) -> &ScalarPoly {
        &self.num
    }

    pub fn den(&self) -> &ScalarPoly {
        &self.den
    }

    pub fn hints(&self) -> &BTreeSet<RadicalMonomial> {
        &self.hints
    }

    pub fn add_hints(&mut self, more: impl IntoIterator<Item = RadicalMonomial>) {
        self.hints.extend(more);
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Common radical of the coefficients.
    pub fn radical(&self) -> Result<Option<Radical>, FieldError> {
        joint_radical(self.num.coeffs().iter().chain(self.den.coeffs()).map(|c| c.radical()))
    }

    /// Common radical of both functions; arithmetic between them is defined
    /// only when this succeeds.
    pub fn radical_compatible(&self, other: &Self) -> Result<Option<Radical>, FieldError> {
        joint_radical([self.radical()?.as_ref(), other.radical()?.as_ref()])
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        (self.den.is_constant() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    fn merged_hints(&self, other: &Self) -> BTreeSet<RadicalMonomial> {
        let mut h = self.hints.clone();
        h.extend(other.hints.iter().cloned());
        h
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        let hints = self.merged_hints(other);
        if self.is_zero() {
            return Ok(RationalFunction { hints, ..other.clone() });
        }
        if other.is_zero() {
            return Ok(RationalFunction { hints, ..self.clone() });
        }
        if self.den == other.den {
            return Self::with_hints(self.num.add(&other.num), self.den.clone(), hints);
        }
        if other.is_polynomial() {
            let num = self.num.add(&other.num.mul(&self.den));
            return Ok(Self::from_reduced(num, self.den.clone(), hints));
        }
        if self.is_polynomial() {
            let num = other.num.add(&self.num.mul(&other.den));
            return Ok(Self::from_reduced(num, other.den.clone(), hints));
        }
        let g = self.den.gcd(&other.den)?;
        let bd = self.den.div_rem(&g)?.0;
        let dd = other.den.div_rem(&g)?.0;
        let num = self.num.mul(&dd).add(&other.num.mul(&bd));
        let den = bd.mul(&other.den);
        if g.is_constant() {
            return Ok(Self::from_reduced(num, den, hints));
        }
        Self::with_hints(num, den, hints)
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone(), hints: self.hints.clone() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FieldError> {
        let hints = self.merged_hints(other);
        if self.is_zero() || other.is_zero() {
            return Ok(RationalFunction { hints, ..Self::zero() });
        }
        let g1 = self.num.gcd(&other.den)?;
        let g2 = other.num.gcd(&self.den)?;
        let n1 = if g1.is_constant() { self.num.clone() } else { self.num.div_rem(&g1)?.0 };
        let d2 = if g1.is_constant() { other.den.clone() } else { other.den.div_rem(&g1)?.0 };
        let n2 = if g2.is_constant() { other.num.clone() } else { other.num.div_rem(&g2)?.0 };
        let d1 = if g2.is_constant() { self.den.clone() } else { self.den.div_rem(&g2)?.0 };
        let den = d1.mul(&d2);
        let lc = den.lead().unwrap().clone();
        let (num, den) = if lc.is_one() {
            (n1.mul(&n2), den)
        } else {
            let inv = lc.try_inv()?;
            (n1.mul(&n2).scale(&inv), den.scale(&inv))
        };
        Ok(Self::from_reduced(num, den, hints))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone(), hints: self.hints.clone() }
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let lc = self.num.lead().unwrap().try_inv()?;
        Ok(Self::from_reduced(self.den.scale(&lc), self.num.scale(&lc), self.hints.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self, FieldError> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self, FieldError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Ok(RationalFunction { num: base.num.pow(k), den: base.den.pow(k), hints: base.hints })
    }

    /// `f(x^p)`.
    pub fn sigma(&self, p: u64) -> Self {
        let hints = self.hints.iter().flat_map(|a| a.roots(p)).collect();
        RationalFunction { num: self.num.compose_pow(p as usize), den: self.den.compose_pow(p as usize), hints }
    }

    /// `σ(f) − f`.
    pub fn delta(&self, p: u64) -> Result<Self, FieldError> {
        self.sigma(p).sub(self)
    }

    pub fn eval(&self, a: &Scalar) -> Result<Scalar, FieldError> {
        self.num.eval(a).try_div(&self.den.eval(a))
    }

    pub fn render(&self) -> String {
        if self.den.is_constant() {
            return render_poly(&self.num);
        }
        let n = render_poly(&self.num);
        let n = if self.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 || needs_parens(&n) {
            format!("({n})")
        } else {
            n
        };
        format!("{n}/({})", render_poly(&self.den))
    }
}

fn needs_parens(s: &str) -> bool {
    s.contains(' ') || s.contains('/')
}

/// Renders a scalar coefficient for use as a factor.
pub(crate) fn factor_string(c: &Scalar) -> String {
    let s = c.render();
    if s.contains(' ') {
        format!("({s})")
    } else {
        s
    }
}

/// Renders `Σ c_k x^k` (highest degree first) as a parseable expression.
pub fn render_poly(p: &ScalarPoly) -> String {
    render_terms(p.coeffs().iter().enumerate().rev().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k as i64, c)))
}

pub(crate) fn render_terms<'a>(terms: impl Iterator<Item = (i64, &'a Scalar)>) -> String {
    let mut out = String::new();
    for (k, c) in terms {
        let xs = match k {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{k}"),
        };
        let cs = factor_string(c);
        let (neg, body) = match cs.strip_prefix('-') {
            Some(rest) if !cs.starts_with("-(") => (true, rest.to_string()),
            _ => (false, cs.clone()),
        };
        let term = if xs.is_empty() {
            body
        } else if body == "1" {
            xs
        } else {
            format!("{body}*{xs}")
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
            out.push_str(&term);
        } else {
            out.push_str(if neg { " - " } else { " + " });
            out.push_str(&term);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// `f = f_L + f_T` with `f_L` a Laurent polynomial and `f_T` proper with
/// denominator coprime to `x`.
pub fn split_lt(f: &RationalFunction) -> Result<(LaurentPoly, RationalFunction), FieldError> {
    let (q, r) = f.num.div_rem(&f.den)?;
    let s = f.den.valuation().unwrap_or(0);
    let b1 = Poly::new(f.den.coeffs()[s..].to_vec());
    let mut laurent = LaurentPoly::from_poly(&q);
    if s == 0 {
        let hints = f.hints.clone();
        return Ok((laurent, RationalFunction::from_reduced(r, b1, hints)));
    }
    // r = b1·u + x^s·a2 with deg u < s
    let inv = inv_trunc(b1.coeffs(), s)?;
    let u = crate::series::mul_trunc(r.coeffs(), &inv, s);
    let up = Poly::new(u.clone());
    let rest = r.sub(&b1.mul(&up));
    debug_assert!(rest.coeffs().iter().take(s).all(Zero::is_zero));
    let a2 = Poly::new(rest.coeffs().get(s..).map(<[_]>::to_vec).unwrap_or_default());
    for (i, c) in u.into_iter().enumerate() {
        laurent.add_term(i as i64 - s as i64, &c);
    }
    let hints = f.hints.clone();
    let ft = if a2.is_zero() { RationalFunction::zero() } else { RationalFunction::from_reduced(a2, b1, hints) };
    Ok((laurent, ft))
}

/// `f_L + f_T` as a single rational function.
pub fn join_lt(fl: &LaurentPoly, ft: &RationalFunction) -> Result<RationalFunction, FieldError> {
    fl.to_rational_function()?.add(ft)
}
