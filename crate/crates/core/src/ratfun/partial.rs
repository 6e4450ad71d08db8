use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;

use super::recognize::joint_radical;
use super::{factor_string, RationalFunction};
use crate::error::{Error, FieldError};
use crate::field::{Field, RadicalMonomial};
use crate::poly::Poly;
use crate::series::div_trunc;
use crate::Scalar;

/// `Σ_α Σ_k c_{α,k} / (x − α)^k`, stored as `α ↦ [c_{α,1}, c_{α,2}, …]`.
///
/// Entries are trimmed: every stored vector has a nonzero last element.
#[derive(Clone, PartialEq, Default)]
pub struct PartialFraction {
    terms: BTreeMap<RadicalMonomial, Vec<Scalar>>,
}

impl fmt::Debug for PartialFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl PartialFraction {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Adds `c / (x − α)^k` (k ≥ 1).
    pub fn add_term(&mut self, alpha: &RadicalMonomial, k: usize, c: &Scalar) {
        assert!(k >= 1);
        if c.is_zero() {
            return;
        }
        let v = self.terms.entry(alpha.clone()).or_default();
        if v.len() < k {
            v.resize(k, Scalar::zero());
        }
        v[k - 1] = v[k - 1].add_ref(c);
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        if v.is_empty() {
            self.terms.remove(alpha);
        }
    }

    pub fn coeff(&self, alpha: &RadicalMonomial, k: usize) -> Scalar {
        self.terms.get(alpha).and_then(|v| v.get(k.wrapping_sub(1))).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> &BTreeMap<RadicalMonomial, Vec<Scalar>> {
        &self.terms
    }

    pub fn poles(&self) -> impl Iterator<Item = &RadicalMonomial> {
        self.terms.keys()
    }

    pub fn order_at(&self, alpha: &RadicalMonomial) -> usize {
        self.terms.get(alpha).map_or(0, Vec::len)
    }

    pub fn max_order(&self) -> usize {
        self.terms.values().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (a, v) in &other.terms {
            for (k, c) in v.iter().enumerate() {
                r.add_term(a, k + 1, c);
            }
        }
        r
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut r = Self::zero();
        for (a, v) in &self.terms {
            for (k, x) in v.iter().enumerate() {
                r.add_term(a, k + 1, &x.mul_ref(c));
            }
        }
        r
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// The part supported on poles satisfying `keep`.
    pub fn restrict(&self, keep: impl Fn(&RadicalMonomial) -> bool) -> Self {
        PartialFraction { terms: self.terms.iter().filter(|(a, _)| keep(a)).map(|(a, v)| (a.clone(), v.clone())).collect() }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (a, v) in &self.terms {
            let lin = match a.render().strip_prefix('-') {
                Some(rest) => format!("x + {rest}"),
                None => format!("x - {}", a.render()),
            };
            for (k, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let den = if k == 0 { format!("({lin})") } else { format!("({lin})^{}", k + 1) };
                let cs = factor_string(c);
                let (neg, body) = match cs.strip_prefix('-') {
                    Some(rest) if !cs.starts_with("-(") => (true, rest.to_string()),
                    _ => (false, cs.clone()),
                };
                if out.is_empty() {
                    if neg {
                        out.push('-');
                    }
                } else {
                    out.push_str(if neg { " - " } else { " + " });
                }
                out.push_str(&format!("{body}/{den}"));
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

fn incompatible(e: FieldError) -> Error {
    Error::Field(e)
}

/// Partial-fraction coefficients of a proper `f` whose denominator factors as
/// `Π (x − α)^m` over the given poles.
pub fn partial_fractions(f: &RationalFunction, poles: &[(RadicalMonomial, u32)]) -> Result<PartialFraction, Error> {
    let total: u32 = poles.iter().map(|(_, m)| m).sum();
    if total as usize != f.den().deg0() {
        return Err(Error::FactorMismatch(format!(
            "pole multiplicities sum to {total}, denominator has degree {}",
            f.den().deg0()
        )));
    }
    let distinct: BTreeSet<_> = poles.iter().map(|(a, _)| a).collect();
    if distinct.len() != poles.len() {
        return Err(Error::FactorMismatch("repeated pole".into()));
    }
    if f.num().deg0() >= f.den().deg0() && !f.is_zero() {
        return Err(Error::InvalidArgument("partial fractions need a proper rational function".into()));
    }
    let coeff_radical = joint_radical(f.num().coeffs().iter().chain(f.den().coeffs()).map(|c| c.radical()))
        .map_err(incompatible)?;
    let mut pf = PartialFraction::zero();
    for (alpha, m) in poles {
        let m = *m as usize;
        let rad = joint_radical([coeff_radical.as_ref(), alpha.natural_radical().as_ref()]).map_err(incompatible)?;
        let av = alpha.value_with(rad.as_ref())?;
        let bt = f.den().taylor(&av, 2 * m);
        if bt[..m].iter().any(|c| !c.is_zero()) || bt[m].is_zero() {
            return Err(Error::FactorMismatch(format!(
                "{alpha} is not a root of multiplicity {m} of {}",
                super::render_poly(f.den())
            )));
        }
        let at = f.num().taylor(&av, m);
        let s = div_trunc(&at, &bt[m..], m)?;
        for k in 1..=m {
            pf.add_term(alpha, k, &s[m - k]);
        }
    }
    Ok(pf)
}

/// Rebuilds the rational function `Σ c/(x − α)^k`.
pub fn recombine(pf: &PartialFraction) -> Result<RationalFunction, FieldError> {
    if pf.is_zero() {
        return Ok(RationalFunction::zero());
    }
    let rad = joint_radical(
        pf.terms()
            .keys()
            .map(|a| a.natural_radical())
            .chain(pf.terms().values().flatten().map(|c| c.radical().cloned()))
            .collect::<Vec<_>>()
            .iter()
            .map(Option::as_ref),
    )?;
    let factors: Vec<(Poly<Scalar>, &Vec<Scalar>)> = pf
        .terms()
        .iter()
        .map(|(a, v)| Ok((Poly::linear(&a.value_with(rad.as_ref())?), v)))
        .collect::<Result<_, FieldError>>()?;
    let mut den = Poly::one();
    for (lin, v) in &factors {
        den = den.mul(&lin.pow(v.len() as u32));
    }
    let mut num = Poly::zero();
    for (i, (lin, v)) in factors.iter().enumerate() {
        let mut cof = Poly::one();
        for (j, (l2, v2)) in factors.iter().enumerate() {
            if i != j {
                cof = cof.mul(&l2.pow(v2.len() as u32));
            }
        }
        let m = v.len();
        // Σ_k c_k (x − α)^(m − k)
        let mut local = Poly::zero();
        let mut pw = Poly::one();
        for k in (1..=m).rev() {
            local = local.add(&pw.scale(&v[k - 1]));
            pw = pw.mul(lin);
        }
        num = num.add(&cof.mul(&local));
    }
    let hints = pf.terms().keys().cloned().collect();
    RationalFunction::with_hints(num, den, hints)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;
    use num_traits::One;

    #[test]
    fn cube_roots_of_unity_squared() {
        // 9/(x^3 - 1)^2
        let den = Poly::new(vec![Scalar::from_int(-1), Scalar::zero(), Scalar::zero(), Scalar::one()]).pow(2);
        let f = RationalFunction::new(Poly::constant(Scalar::from_int(9)), den).unwrap();
        let poles: Vec<_> = (0..3).map(|j| (RadicalMonomial::root_of_unity(3, j), 2)).collect();
        let pf = partial_fractions(&f, &poles).unwrap();
        let z = |a| Scalar::zeta_pow(3, a);
        let one = RadicalMonomial::one();
        assert_eq!(pf.coeff(&one, 2), Scalar::one());
        assert_eq!(pf.coeff(&one, 1), Scalar::from_int(-2));
        let w = RadicalMonomial::root_of_unity(3, 1);
        assert_eq!(pf.coeff(&w, 2), z(2));
        assert_eq!(pf.coeff(&w, 1), z(1).scale_rational(&rat(-2, 1)));
        let w2 = RadicalMonomial::root_of_unity(3, 2);
        assert_eq!(pf.coeff(&w2, 2), z(1));
        assert_eq!(pf.coeff(&w2, 1), z(2).scale_rational(&rat(-2, 1)));
        assert_eq!(recombine(&pf).unwrap(), f);
    }

    #[test]
    fn mismatch_detected() {
        let f = RationalFunction::new(Poly::one(), Poly::new(vec![Scalar::from_int(-2), Scalar::one()])).unwrap();
        let r = partial_fractions(&f, &[(RadicalMonomial::from_rational(&rat(3, 1)), 1)]);
        assert!(matches!(r, Err(Error::FactorMismatch(_))));
    }
}
