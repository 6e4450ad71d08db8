use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::arith::{divides_p_power, factor_bigint, lcm, p_power_cover, pow_u64};
use super::tower::{join_radicals, Radical, TowerElement};
use super::render_rational;
use crate::error::FieldError;

/// The ambient field Q(ζ_N)(c^(1/p^h)) of one computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldDescriptor {
    pub n: u64,
    pub c: Option<BigRational>,
    pub h: u32,
    pub p: u64,
}

fn is_perfect_power(c: &BigRational, k: u64) -> bool {
    factor_bigint(c.numer())
        .into_iter()
        .chain(factor_bigint(c.denom()))
        .all(|(_, e)| e.unsigned_abs() % k == 0)
}

impl FieldDescriptor {
    pub fn new(n: u64, c: Option<BigRational>, h: u32, p: u64) -> Result<Self, FieldError> {
        if n == 0 || p < 2 {
            return Err(FieldError::Incompatible(format!("invalid descriptor N={n}, p={p}")));
        }
        match &c {
            None if h != 0 => {
                return Err(FieldError::Incompatible("radical depth without a radicand".into()));
            }
            Some(c) if !c.is_positive() || c.is_one() => {
                return Err(FieldError::Incompatible(format!(
                    "radicand {} must be positive and different from 1",
                    render_rational(c)
                )));
            }
            Some(c) if is_perfect_power(c, p) => {
                return Err(FieldError::Incompatible(format!(
                    "radicand {} is a {p}-th power",
                    render_rational(c)
                )));
            }
            Some(_) if h == 0 => {
                return Err(FieldError::Incompatible("radicand given with depth 0".into()));
            }
            _ => {}
        }
        Ok(FieldDescriptor { n, c, h, p })
    }

    pub fn cyclotomic(n: u64, p: u64) -> Self {
        FieldDescriptor { n, c: None, h: 0, p }
    }

    /// The distinguished generator c^(1/p^h), or 1.
    pub fn generator(&self) -> TowerElement {
        match &self.c {
            None => TowerElement::from_int(1),
            Some(c) => Radical::root_of(c, pow_u64(self.p, self.h)),
        }
    }

    pub fn radical(&self) -> Option<Radical> {
        self.generator().radical().cloned()
    }

    fn from_parts(n: u64, radical: Option<Radical>, p: u64) -> Result<Self, FieldError> {
        match radical {
            None => Ok(Self::cyclotomic(n, p)),
            Some(r) => {
                if !divides_p_power(r.degree, p) {
                    return Err(FieldError::Incompatible(format!(
                        "radical {} is not a p-power root for p = {p}",
                        r.render()
                    )));
                }
                let h = p_power_cover(r.degree, p);
                Ok(FieldDescriptor { n, c: Some(r.base), h, p })
            }
        }
    }

    /// Smallest descriptor containing both.
    pub fn join(&self, other: &Self) -> Result<Self, FieldError> {
        if self.p != other.p {
            return Err(FieldError::Incompatible("descriptors over different p".into()));
        }
        let r = join_radicals(self.radical().as_ref(), other.radical().as_ref())?;
        Self::from_parts(lcm(self.n, other.n), r, self.p)
    }

    /// Smallest descriptor containing `x`.
    pub fn of_element(x: &TowerElement, p: u64) -> Result<Self, FieldError> {
        Self::from_parts(x.cyclo_order(), x.radical().cloned(), p)
    }

    pub fn contains(&self, x: &TowerElement) -> bool {
        self.embed(x).is_ok()
    }

    /// Value-preserving inclusion of `x` into this field.
    pub fn embed(&self, x: &TowerElement) -> Result<TowerElement, FieldError> {
        x.embed_raw(self.n, self.radical().as_ref())
            .map_err(|e| FieldError::TargetTooSmall(format!("{} does not lie in {self}: {e}", x.render())))
    }
}

/// Value-preserving inclusion of `x` into `target`.
pub fn embed(x: &TowerElement, target: &FieldDescriptor) -> Result<TowerElement, FieldError> {
    target.embed(x)
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.c {
            None => write!(f, "Q(zeta({}))", self.n),
            Some(c) => write!(f, "Q(zeta({}))(root({},{}))", self.n, render_rational(c), pow_u64(self.p, self.h)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, rat_int, CycloElement, Field};

    #[test]
    fn validation() {
        assert!(FieldDescriptor::new(1, Some(rat_int(8)), 1, 3).is_err());
        assert!(FieldDescriptor::new(1, Some(rat_int(1)), 1, 3).is_err());
        assert!(FieldDescriptor::new(1, Some(rat_int(4)), 1, 3).is_ok());
        assert!(FieldDescriptor::new(1, None, 2, 3).is_err());
    }

    #[test]
    fn embeddings() {
        let q12 = FieldDescriptor::cyclotomic(12, 3);
        let half = TowerElement::rational(rat(1, 2));
        let e = q12.embed(&half).unwrap();
        assert_eq!(e, half);
        let z4 = TowerElement::zeta_pow(4, 1);
        assert_eq!(q12.embed(&z4).unwrap(), TowerElement::zeta_pow(12, 3));

        let small = FieldDescriptor::new(1, Some(rat_int(2)), 1, 3).unwrap();
        let big = FieldDescriptor::new(9, Some(rat_int(2)), 2, 3).unwrap();
        let cbrt2 = small.generator();
        let img = big.embed(&cbrt2).unwrap();
        assert_eq!(img.coeffs().len(), 9);
        assert_eq!(img, big.generator().pow_u(3));
        assert!(small.embed(&big.generator()).is_err());
        assert!(FieldDescriptor::cyclotomic(4, 3).embed(&TowerElement::cyclo(CycloElement::zeta(3))).is_err());
    }

    #[test]
    fn joins() {
        let a = FieldDescriptor::new(4, Some(rat_int(2)), 1, 3).unwrap();
        let b = FieldDescriptor::new(3, Some(rat_int(4)), 2, 3).unwrap();
        let j = a.join(&b).unwrap();
        assert_eq!((j.n, j.h), (12, 2));
        let c = FieldDescriptor::new(1, Some(rat_int(3)), 1, 3).unwrap();
        assert!(a.join(&c).is_err());
    }
}
