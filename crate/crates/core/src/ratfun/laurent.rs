use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{render_terms, RationalFunction, ScalarPoly};
use crate::error::FieldError;
use crate::field::Field;
use crate::poly::Poly;
use crate::Scalar;

/// A Laurent polynomial `Σ c_i x^i` with finitely many nonzero terms.
#[derive(Clone, PartialEq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Scalar>,
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Scalar)>) -> Self {
        let mut l = Self::zero();
        for (i, c) in terms {
            l.add_term(i, &c);
        }
        l
    }

    pub fn from_poly(p: &ScalarPoly) -> Self {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(i, c)| (i as i64, c.clone())))
    }

    pub fn add_term(&mut self, i: i64, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.entry(i).or_insert_with(Scalar::zero);
        *v = v.add_ref(c);
        if v.is_zero() {
            self.terms.remove(&i);
        }
    }

    pub fn terms(&self) -> &BTreeMap<i64, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, i: i64) -> Scalar {
        self.terms.get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (i, c) in &other.terms {
            r.add_term(*i, c);
        }
        r
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(i, c)| (*i, c.neg_ref())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(i, v)| (*i, v.mul_ref(c))).collect() }
    }

    pub fn sigma(&self, p: u64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(i, c)| (i * p as i64, c.clone())).collect() }
    }

    pub fn delta(&self, p: u64) -> Self {
        self.sigma(p).sub(self)
    }

    pub fn to_rational_function(&self) -> Result<RationalFunction, FieldError> {
        let lo = self.terms.keys().next().copied().unwrap_or(0).min(0);
        let coeffs: Vec<Scalar> = match self.terms.keys().last() {
            None => return Ok(RationalFunction::zero()),
            Some(&hi) => (lo..=hi).map(|i| self.coeff(i)).collect(),
        };
        let num = Poly::new(coeffs);
        let den = Poly::monomial(Scalar::one(), lo.unsigned_abs() as usize);
        RationalFunction::new(num, den)
    }

    pub fn render(&self) -> String {
        render_terms(self.terms.iter().rev().map(|(i, c)| (*i, c)))
    }
}

/// The trajectory representative of an exponent: `i` with all factors of
/// `p` removed (sign kept), or `0` for the constant term.
pub fn trajectory_of(i: i64, p: u64) -> i64 {
    if i == 0 {
        return 0;
    }
    let p = p as i64;
    let mut j = i;
    while j % p == 0 {
        j /= p;
    }
    j
}

/// Splits `f_L` into its components supported on the trajectories `{i·p^n}`.
pub fn trajectory_components(fl: &LaurentPoly, p: u64) -> BTreeMap<i64, LaurentPoly> {
    let mut out: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
    for (i, c) in fl.terms() {
        out.entry(trajectory_of(*i, p)).or_default().add_term(*i, c);
    }
    out
}
