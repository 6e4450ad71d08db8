//! Exact scalar fields: rationals, cyclotomic fields and radical towers over them.

pub mod arith;
pub mod cyclotomic;
pub mod descriptor;
pub mod monomial;
pub mod tower;

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::FieldError;

pub use cyclotomic::CycloElement;
pub use descriptor::FieldDescriptor;
pub use monomial::RadicalMonomial;
pub use tower::{Radical, TowerElement};

/// The arithmetic the polynomial, series and linear-algebra layers need.
///
/// Implemented by [`BigRational`], [`CycloElement`] and [`TowerElement`].
/// Floating-point types are deliberately not implementors: every algorithm
/// downstream decides equalities to zero exactly.
pub trait Field: Clone + PartialEq + Debug + Zero + One + Send + Sync + 'static {
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn try_inv(&self) -> Result<Self, FieldError>;
    fn from_rational(q: &BigRational) -> Self;

    /// Rough bit size, used to pick small pivots.
    fn size(&self) -> usize;

    fn from_int(v: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(v)))
    }

    fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        Ok(self.mul_ref(&other.try_inv()?))
    }

    fn pow_u(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    fn pow_i(&self, e: i64) -> Result<Self, FieldError> {
        if e >= 0 {
            Ok(self.pow_u(e as u64))
        } else {
            Ok(self.try_inv()?.pow_u(e.unsigned_abs()))
        }
    }
}

pub(crate) fn rational_bits(q: &BigRational) -> usize {
    (q.numer().bits() + q.denom().bits()) as usize
}

impl Field for BigRational {
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn try_inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn size(&self) -> usize {
        rational_bits(self)
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Renders a rational as `a` or `a/b`.
pub fn render_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_field_ops() {
        let a = rat(3, 4);
        assert_eq!(a.try_inv().unwrap(), rat(4, 3));
        assert_eq!(rat_int(0).try_inv(), Err(FieldError::DivisionByZero));
        assert_eq!(a.pow_i(-2).unwrap(), rat(16, 9));
        assert_eq!(render_rational(&rat(-6, 4)), "-3/2");
    }
}
