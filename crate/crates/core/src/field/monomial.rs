//! Multiplicative normal form ζ_N^a · Π q^(e_q) for pole values.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::arith::{divides_p_power, factor_bigint, lcm, pow_mod, pow_u64};
use super::cyclotomic::{reduce_root, CycloElement};
use super::descriptor::FieldDescriptor;
use super::tower::{Radical, TowerElement};
use super::{render_rational, Field};
use crate::error::FieldError;

/// A nonzero algebraic number ζ_order^exp · Π q^(e_q), with `exp` coprime to
/// `order` (or `order = 1`) and no zero exponents. The derived ordering is
/// the lexicographic order on (order, exp, exponent map).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RadicalMonomial {
    order: u64,
    exp: u64,
    radical: BTreeMap<u64, BigRational>,
}

fn big(q: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(q))
}

fn rational_pow(q: u64, e: &BigInt) -> BigRational {
    let b = big(q);
    let k = e.abs().to_usize().expect("exponent too large");
    let v = num_traits::pow(b, k);
    if e.is_negative() {
        v.recip()
    } else {
        v
    }
}

impl RadicalMonomial {
    pub fn one() -> Self {
        RadicalMonomial { order: 1, exp: 0, radical: BTreeMap::new() }
    }

    /// ζ_n^a in normal form.
    pub fn root_of_unity(n: u64, a: i64) -> Self {
        assert!(n >= 1);
        let (order, exp) = reduce_root(n, a);
        RadicalMonomial { order, exp, radical: BTreeMap::new() }
    }

    /// A nonzero rational, with its sign carried by ζ_2.
    pub fn from_rational(q: &BigRational) -> Self {
        assert!(!q.is_zero(), "zero has no multiplicative normal form");
        let mut radical = BTreeMap::new();
        for (pr, e) in factor_bigint(q.numer()) {
            radical.insert(pr, BigRational::from_integer(e.into()));
        }
        for (pr, e) in factor_bigint(q.denom()) {
            radical.insert(pr, BigRational::from_integer((-e).into()));
        }
        let (order, exp) = if q.is_negative() { (2, 1) } else { (1, 0) };
        RadicalMonomial { order, exp, radical }
    }

    /// The positive real number c^e for positive rational c.
    pub fn rational_power(c: &BigRational, e: &BigRational) -> Self {
        assert!(c.is_positive());
        Self::from_rational(c).pow_rational(e)
    }

    pub fn from_parts(order: u64, exp: i64, radical: BTreeMap<u64, BigRational>) -> Self {
        let mut m = Self::root_of_unity(order, exp);
        m.radical = radical.into_iter().filter(|(_, e)| !e.is_zero()).collect();
        m
    }

    pub fn torsion_order(&self) -> u64 {
        self.order
    }

    pub fn torsion_exp(&self) -> u64 {
        self.exp
    }

    pub fn radical_exponents(&self) -> &BTreeMap<u64, BigRational> {
        &self.radical
    }

    pub fn is_torsion(&self) -> bool {
        self.radical.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.radical.is_empty()
    }

    /// The root-of-unity factor.
    pub fn torsion_part(&self) -> Self {
        RadicalMonomial { order: self.order, exp: self.exp, radical: BTreeMap::new() }
    }

    /// The positive real factor.
    pub fn radical_part(&self) -> Self {
        RadicalMonomial { order: 1, exp: 0, radical: self.radical.clone() }
    }

    /// lcm of the exponent denominators (1 when all exponents are integers).
    pub fn radical_denominator(&self) -> u64 {
        self.radical
            .values()
            .fold(1, |acc, e| lcm(acc, e.denom().to_u64().expect("exponent denominator too large")))
    }

    /// True when every exponent denominator divides a power of `p`.
    pub fn is_p_adic(&self, p: u64) -> bool {
        divides_p_power(self.radical_denominator(), p)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = lcm(self.order, other.order);
        let a = self.exp * (n / self.order) + other.exp * (n / other.order);
        let mut radical = self.radical.clone();
        for (q, e) in &other.radical {
            let v = radical.entry(*q).or_insert_with(BigRational::zero);
            *v += e;
            if v.is_zero() {
                radical.remove(q);
            }
        }
        let (order, exp) = reduce_root(n, (a % n) as i64);
        RadicalMonomial { order, exp, radical }
    }

    pub fn inv(&self) -> Self {
        let (order, exp) = reduce_root(self.order, -(self.exp as i64));
        RadicalMonomial { order, exp, radical: self.radical.iter().map(|(q, e)| (*q, -e)).collect() }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn pow(&self, k: i64) -> Self {
        if k == 0 {
            return Self::one();
        }
        let base = if k < 0 { self.inv() } else { self.clone() };
        let k = k.unsigned_abs();
        let exp = pow_mod_mul(base.exp, k, base.order);
        let (order, exp) = reduce_root(base.order, exp as i64);
        let kk = BigRational::from_integer(BigInt::from(k));
        RadicalMonomial { order, exp, radical: base.radical.iter().map(|(q, e)| (*q, e * &kk)).collect() }
    }

    /// α^(p^t).
    pub fn pow_p(&self, p: u64, t: u32) -> Self {
        let (order, exp) = if self.order == 1 {
            (1, 0)
        } else {
            let m = pow_mod(p, t as u64, self.order);
            reduce_root(self.order, ((self.exp as u128 * m as u128) % self.order as u128) as i64)
        };
        let scale = BigRational::from_integer(num_traits::pow(BigInt::from(p), t as usize));
        RadicalMonomial { order, exp, radical: self.radical.iter().map(|(q, e)| (*q, e * &scale)).collect() }
    }

    /// Raises to a rational power along the principal branch (torsion part
    /// ζ_N^a ↦ ζ_{N·den}^{a·num}).
    pub fn pow_rational(&self, e: &BigRational) -> Self {
        let num = e.numer().to_i64().expect("exponent too large");
        let den = e.denom().to_u64().expect("exponent too large");
        let torsion = RadicalMonomial::root_of_unity(self.order * den, self.exp as i64).pow(num);
        let radical = self.radical.iter().map(|(q, x)| (*q, x * e)).collect();
        RadicalMonomial { radical, ..torsion }
    }

    /// The principal k-th root.
    pub fn principal_root(&self, k: u64) -> Self {
        self.pow_rational(&BigRational::new(BigInt::one(), BigInt::from(k)))
    }

    /// All k-th roots, principal root first.
    pub fn roots(&self, k: u64) -> Vec<Self> {
        let r = self.principal_root(k);
        (0..k).map(|j| r.mul(&RadicalMonomial::root_of_unity(k, j as i64))).collect()
    }

    /// Value over the given radical, if the monomial is expressible there as
    /// a cyclotomic number times a power of ρ.
    pub fn value_with(&self, radical: Option<&Radical>) -> Result<TowerElement, FieldError> {
        let torsion = CycloElement::zeta_pow(self.order, self.exp as i64);
        if self.radical.is_empty() {
            return Ok(TowerElement::cyclo(torsion));
        }
        let integral = self.radical.values().all(|e| e.is_integer());
        if integral {
            let mut r = BigRational::one();
            for (q, e) in &self.radical {
                r *= rational_pow(*q, e.numer());
            }
            return Ok(TowerElement::cyclo(torsion.scale(&r)));
        }
        let Some(rad) = radical else {
            return Err(FieldError::TargetTooSmall(format!("{self} needs a radical extension")));
        };
        let base = RadicalMonomial::from_rational(&rad.base);
        let d = rad.degree;
        let dd = BigRational::from_integer(BigInt::from(d));
        for j in 0..d {
            let jj = BigRational::new(BigInt::from(j), BigInt::one()) / &dd;
            let rest = self.radical_part().div(&base.pow_rational(&jj));
            if rest.radical.values().all(|e| e.is_integer()) {
                let mut r = BigRational::one();
                for (q, e) in &rest.radical {
                    r *= rational_pow(*q, e.numer());
                }
                return Ok(TowerElement::radical_term(rad.clone(), j, torsion.scale(&r)));
            }
        }
        Err(FieldError::TargetTooSmall(format!("{self} is not a power of {} times a rational", rad.render())))
    }

    /// The radical generated by the exponent direction of this monomial.
    pub fn natural_radical(&self) -> Option<Radical> {
        if self.radical.values().all(|e| e.is_integer()) {
            return None;
        }
        let l = self.radical_denominator();
        let ints: Vec<(u64, BigInt)> = self
            .radical
            .iter()
            .map(|(q, e)| (*q, (e * BigRational::from_integer(BigInt::from(l))).to_integer()))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, (_, e)| acc.gcd(e));
        let flip = ints[0].1.is_negative();
        let mut base = BigRational::one();
        for (q, e) in &ints {
            let e = if flip { -(e / &g) } else { e / &g };
            base *= rational_pow(*q, &e);
        }
        Some(Radical { base, degree: l })
    }

    /// The value in its own natural field.
    pub fn value(&self) -> TowerElement {
        self.value_with(self.natural_radical().as_ref()).expect("natural radical contains the monomial")
    }

    /// The value inside `target`.
    pub fn value_in(&self, target: &FieldDescriptor) -> Result<TowerElement, FieldError> {
        if target.n % self.order != 0 {
            return Err(FieldError::TargetTooSmall(format!("{self} needs zeta({})", self.order)));
        }
        let v = self.value_with(target.radical().as_ref())?;
        target.embed(&v)
    }

    /// Recognizes `x` as a monomial when it is a single ρ-power term whose
    /// coefficient is a rational times a root of unity.
    pub fn from_element(x: &TowerElement) -> Option<Self> {
        if x.is_zero() {
            return None;
        }
        let mut term = None;
        for (j, c) in x.coeffs().iter().enumerate() {
            if !c.is_zero() {
                if term.is_some() {
                    return None;
                }
                term = Some((j, c));
            }
        }
        let (j, c) = term?;
        let (q, zeta) = split_cyclo_monomial(c)?;
        let mut m = RadicalMonomial::from_rational(&q).mul(&zeta);
        if j > 0 {
            let r = x.radical().unwrap();
            let e = BigRational::new(BigInt::from(j), BigInt::from(r.degree));
            m = m.mul(&RadicalMonomial::rational_power(&r.base, &e));
        }
        Some(m)
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        let neg = self.order == 2;
        if self.order > 2 {
            if self.exp == 1 {
                parts.push(format!("zeta({})", self.order));
            } else {
                parts.push(format!("zeta({})^{}", self.order, self.exp));
            }
        }
        let mut rational = BigRational::one();
        let mut frac: Vec<(u64, BigRational)> = Vec::new();
        for (q, e) in &self.radical {
            let fl = e.floor();
            rational *= rational_pow(*q, fl.numer());
            let f = e - fl;
            if !f.is_zero() {
                frac.push((*q, f));
            }
        }
        if !rational.is_one() {
            parts.insert(0, render_rational(&rational));
        }
        if !frac.is_empty() {
            let l = frac.iter().fold(1u64, |acc, (_, f)| lcm(acc, f.denom().to_u64().unwrap()));
            let mut c = BigRational::one();
            for (q, f) in &frac {
                let k = (f * BigRational::from_integer(BigInt::from(l))).to_integer();
                c *= rational_pow(*q, &k);
            }
            parts.push(format!("root({},{})", render_rational(&c), l));
        }
        let body = if parts.is_empty() { "1".to_string() } else { parts.join("*") };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }
}

fn pow_mod_mul(a: u64, k: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    ((a as u128 * (k % n) as u128) % n as u128) as u64
}

/// Writes a cyclotomic number as `q·ζ` with `q` rational, if possible.
fn split_cyclo_monomial(c: &CycloElement) -> Option<(BigRational, RadicalMonomial)> {
    if let Some(q) = c.as_rational() {
        return Some((q.clone(), RadicalMonomial::one()));
    }
    let n = c.order();
    let nonzero: Vec<usize> = (0..c.coeffs().len()).filter(|&i| !c.coeffs()[i].is_zero()).collect();
    if nonzero.len() == 1 {
        let k = nonzero[0];
        return Some((c.coeffs()[k].clone(), RadicalMonomial::root_of_unity(n, k as i64)));
    }
    let zinv = CycloElement::zeta_pow(n, -1);
    let mut t = c.clone();
    for k in 1..n {
        t = t.mul_ref(&zinv);
        if let Some(q) = t.as_rational() {
            return Some((q.clone(), RadicalMonomial::root_of_unity(n, k as i64)));
        }
    }
    None
}

impl fmt::Display for RadicalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Debug for RadicalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// ζ_n^a as a monomial.
pub fn root_of_unity(n: u64, a: i64) -> RadicalMonomial {
    RadicalMonomial::root_of_unity(n, a)
}

/// α^(p^t).
pub fn monomial_pow_p(alpha: &RadicalMonomial, p: u64, t: u32) -> RadicalMonomial {
    alpha.pow_p(p, t)
}

/// Equality as algebraic numbers; normal forms make this structural.
pub fn monomial_eq(a: &RadicalMonomial, b: &RadicalMonomial) -> bool {
    a == b
}

/// The value of `alpha` inside `target`.
pub fn monomial_value(alpha: &RadicalMonomial, target: &FieldDescriptor) -> Result<TowerElement, FieldError> {
    alpha.value_in(target)
}

/// ζ_{p^n}, the compatible-system generator.
pub fn zeta_p_power(p: u64, n: u32) -> RadicalMonomial {
    RadicalMonomial::root_of_unity(pow_u64(p, n), 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, rat_int};

    fn r(q: i64, n: i64, d: i64) -> RadicalMonomial {
        RadicalMonomial::rational_power(&rat_int(q), &rat(n, d))
    }

    #[test]
    fn roots_of_unity_normalize() {
        let z = root_of_unity(4, 1);
        assert_eq!((z.torsion_order(), z.torsion_exp()), (4, 1));
        let m = root_of_unity(4, 2);
        assert_eq!((m.torsion_order(), m.torsion_exp()), (2, 1));
        let w = root_of_unity(12, 7);
        assert_eq!((w.torsion_order(), w.torsion_exp()), (12, 7));
        assert!(monomial_eq(&root_of_unity(4, 5), &root_of_unity(4, 1)));
    }

    #[test]
    fn p_power_action() {
        assert_eq!(monomial_pow_p(&r(2, 1, 3), 3, 1), RadicalMonomial::from_rational(&rat_int(2)));
        assert_eq!(monomial_pow_p(&root_of_unity(4, 1), 3, 2), root_of_unity(4, 1));
        assert_eq!(monomial_pow_p(&RadicalMonomial::one(), 5, 7), RadicalMonomial::one());
        let a = r(2, 1, 9).mul(&root_of_unity(12, 5));
        assert_eq!(a.pow_p(3, 1).pow_p(3, 2), a.pow_p(3, 3));
    }

    #[test]
    fn equality_via_factorization() {
        assert_ne!(r(2, 1, 3).mul(&root_of_unity(3, 1)), r(2, 1, 3));
        assert_eq!(r(4, 1, 2), RadicalMonomial::from_rational(&rat_int(2)));
    }

    #[test]
    fn values_and_recognition() {
        let target = FieldDescriptor::new(9, Some(rat_int(2)), 2, 3).unwrap();
        let a = root_of_unity(3, 1).mul(&r(2, 1, 9));
        let v = monomial_value(&a, &target).unwrap();
        let expect = TowerElement::zeta_pow(9, 3).mul_ref(&target.generator());
        assert_eq!(v, expect);
        assert_eq!(RadicalMonomial::from_element(&v).unwrap(), a);
        assert!(monomial_value(&RadicalMonomial::one(), &target).unwrap().is_one());
        let eight = RadicalMonomial::from_rational(&rat_int(8));
        assert_eq!(monomial_value(&eight, &FieldDescriptor::cyclotomic(1, 3)).unwrap(), TowerElement::from_int(8));
        let neg = TowerElement::from_int(-6).mul_ref(&TowerElement::zeta_pow(12, 7));
        let m = RadicalMonomial::from_element(&neg).unwrap();
        assert_eq!(m.value(), neg);
    }

    #[test]
    fn cross_radical_values() {
        // 2·3^(1/3) lives over the radical of 3.
        let a = RadicalMonomial::from_rational(&rat_int(2)).mul(&r(3, 1, 3));
        let rad = Radical { base: rat_int(3), degree: 3 };
        let v = a.value_with(Some(&rad)).unwrap();
        assert_eq!(v.pow_u(3), TowerElement::from_int(24));
        assert_eq!(a.natural_radical().unwrap().base, rat_int(24));
    }

    #[test]
    fn rendering() {
        assert_eq!(root_of_unity(12, 7).render(), "zeta(12)^7");
        assert_eq!(RadicalMonomial::from_rational(&rat_int(-2)).render(), "-2");
        assert_eq!(r(2, 4, 3).render(), "2*root(2,3)");
        assert_eq!(r(3, -1, 3).render(), "1/3*root(9,3)");
    }
}
