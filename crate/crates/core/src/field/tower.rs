//! Radical towers Q(ζ_N)[ρ]/(ρ^D − c) over cyclotomic fields.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::arith::{factor_bigint, gcd, lcm};
use super::cyclotomic::{forward_ops, CycloElement};
use super::{render_rational, Field};
use crate::error::FieldError;
use crate::poly::Poly;

/// The generator ρ = base^(1/degree), taken as the positive real root.
///
/// `base` is primitive: its prime-exponent vector has gcd 1 and a positive
/// first entry, so two radicals over the same multiplicative direction always
/// share the same base.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Radical {
    pub base: BigRational,
    pub degree: u64,
}

/// Splits a positive rational `c ≠ 1` as `sign·base^g` with `base` primitive.
/// Returns `(base, g, flipped)` where `flipped` means `c = base^(-g)`.
pub fn primitive_base(c: &BigRational) -> (BigRational, u64, bool) {
    assert!(c.is_positive() && !c.is_one(), "radicand must be positive and not 1");
    let mut exps: Vec<(u64, i64)> = factor_bigint(c.numer());
    exps.extend(factor_bigint(c.denom()).into_iter().map(|(q, e)| (q, -e)));
    exps.sort();
    let g = exps.iter().fold(0u64, |acc, &(_, e)| gcd(acc, e.unsigned_abs()));
    let flipped = exps[0].1 < 0;
    let mut base = BigRational::one();
    for (q, e) in exps {
        let e = e / g as i64 * if flipped { -1 } else { 1 };
        let qq = BigRational::from_integer(BigInt::from(q));
        if e >= 0 {
            base *= num_traits::pow(qq, e as usize);
        } else {
            base /= num_traits::pow(qq, (-e) as usize);
        }
    }
    (base, g, flipped)
}

impl Radical {
    /// The positive real root `c^(1/degree)` as an element over the primitive
    /// base of `c`.
    pub fn root_of(c: &BigRational, degree: u64) -> TowerElement {
        let (base, g, flipped) = primitive_base(c);
        // c^(1/degree) = base^(±g/degree)
        let k = gcd(g, degree);
        let d = degree / k;
        let up = TowerElement::radical_term(Radical { base, degree: d }, g / k, CycloElement::one());
        if flipped {
            up.try_inv().expect("radical term is invertible")
        } else {
            up
        }
    }

    pub fn render(&self) -> String {
        format!("root({},{})", render_rational(&self.base), self.degree)
    }
}

/// An element `Σ_j a_j ρ^j` with coefficients in cyclotomic fields.
///
/// Without a radical the element is a single cyclotomic coefficient. The
/// representation is normalized so that the degree is as small as the
/// nonzero exponents allow.
#[derive(Clone)]
pub struct TowerElement {
    radical: Option<Radical>,
    coeffs: Vec<CycloElement>,
}

fn incompatible(a: &Radical, b: &Radical) -> ! {
    panic!(
        "incompatible radicals {} and {}; callers must join field descriptors first",
        a.render(),
        b.render()
    )
}

/// Joint radical of two optional radicals, if one exists.
pub fn join_radicals(a: Option<&Radical>, b: Option<&Radical>) -> Result<Option<Radical>, FieldError> {
    match (a, b) {
        (None, None) => Ok(None),
        (Some(r), None) | (None, Some(r)) => Ok(Some(r.clone())),
        (Some(x), Some(y)) => {
            if x.base != y.base {
                return Err(FieldError::Incompatible(format!(
                    "radicals {} and {} do not lie in a common single-radical tower",
                    x.render(),
                    y.render()
                )));
            }
            Ok(Some(Radical { base: x.base.clone(), degree: lcm(x.degree, y.degree) }))
        }
    }
}

impl TowerElement {
    pub fn rational(q: BigRational) -> Self {
        TowerElement { radical: None, coeffs: vec![CycloElement::rational(q)] }
    }

    pub fn from_int(v: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn cyclo(c: CycloElement) -> Self {
        TowerElement { radical: None, coeffs: vec![c] }
    }

    pub fn zeta_pow(n: u64, a: i64) -> Self {
        Self::cyclo(CycloElement::zeta_pow(n, a))
    }

    /// `coeff · ρ^j` for the given radical.
    pub fn radical_term(radical: Radical, j: u64, coeff: CycloElement) -> Self {
        let mut coeffs = vec![CycloElement::zero(); radical.degree as usize];
        let d = radical.degree;
        let wraps = j / d;
        let mut c = coeff;
        if wraps > 0 {
            c = c.scale(&num_traits::pow(radical.base.clone(), wraps as usize));
        }
        coeffs[(j % d) as usize] = c;
        TowerElement { radical: Some(radical), coeffs }.normalize()
    }

    /// Builds from raw coefficients; `coeffs.len()` must equal the degree.
    pub fn from_parts(radical: Option<Radical>, coeffs: Vec<CycloElement>) -> Self {
        match &radical {
            None => assert_eq!(coeffs.len(), 1),
            Some(r) => assert_eq!(coeffs.len() as u64, r.degree),
        }
        TowerElement { radical, coeffs }.normalize()
    }

    pub fn radical(&self) -> Option<&Radical> {
        self.radical.as_ref()
    }

    pub fn coeffs(&self) -> &[CycloElement] {
        &self.coeffs
    }

    /// lcm of the cyclotomic orders of the coefficients.
    pub fn cyclo_order(&self) -> u64 {
        self.coeffs.iter().filter(|c| !c.is_zero()).fold(1, |acc, c| lcm(acc, c.order()))
    }

    pub fn as_cyclo(&self) -> Option<&CycloElement> {
        self.radical.is_none().then(|| &self.coeffs[0])
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.as_cyclo().and_then(CycloElement::as_rational)
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    fn normalize(mut self) -> Self {
        let Some(r) = &self.radical else { return self };
        let mut g = r.degree;
        let mut any = false;
        for (j, c) in self.coeffs.iter().enumerate() {
            if j > 0 && !c.is_zero() {
                g = gcd(g, j as u64);
                any = true;
            }
        }
        if !any {
            self.coeffs.truncate(1);
            self.radical = None;
            return self;
        }
        if g > 1 {
            let d = r.degree / g;
            let coeffs = (0..d as usize).map(|j| self.coeffs[j * g as usize].clone()).collect();
            self.coeffs = coeffs;
            self.radical = Some(Radical { base: r.base.clone(), degree: d });
        }
        self
    }

    /// Raw coefficients over the radical `target` (same base, degree multiple).
    fn spread(&self, target: &Radical) -> Vec<CycloElement> {
        let mut out = vec![CycloElement::zero(); target.degree as usize];
        match &self.radical {
            None => out[0] = self.coeffs[0].clone(),
            Some(r) => {
                let step = (target.degree / r.degree) as usize;
                for (j, c) in self.coeffs.iter().enumerate() {
                    out[j * step] = c.clone();
                }
            }
        }
        out
    }

    fn aligned(&self, other: &Self) -> (Option<Radical>, Vec<CycloElement>, Vec<CycloElement>) {
        match (&self.radical, &other.radical) {
            (None, None) => (None, self.coeffs.clone(), other.coeffs.clone()),
            _ => {
                let joint = join_radicals(self.radical.as_ref(), other.radical.as_ref())
                    .unwrap_or_else(|_| incompatible(self.radical.as_ref().unwrap(), other.radical.as_ref().unwrap()))
                    .unwrap();
                let a = self.spread(&joint);
                let b = other.spread(&joint);
                (Some(joint), a, b)
            }
        }
    }

    pub fn scale_rational(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        TowerElement { radical: self.radical.clone(), coeffs: self.coeffs.iter().map(|c| c.scale(q)).collect() }
    }

    fn scale_cyclo(&self, c: &CycloElement) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        TowerElement { radical: self.radical.clone(), coeffs: self.coeffs.iter().map(|a| a.mul_ref(c)).collect() }
    }

    /// Single nonzero term `(j, a_j)`, if any.
    fn single_term(&self) -> Option<(usize, &CycloElement)> {
        let mut found = None;
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                if found.is_some() {
                    return None;
                }
                found = Some((j, c));
            }
        }
        found
    }

    /// Re-expresses this element over the given cyclotomic order and radical,
    /// without renormalizing.
    pub fn embed_raw(&self, n: u64, radical: Option<&Radical>) -> Result<Self, FieldError> {
        if n % self.cyclo_order() != 0 {
            return Err(FieldError::Incompatible(format!(
                "cyclotomic order {} does not divide {}",
                self.cyclo_order(),
                n
            )));
        }
        let joint = join_radicals(self.radical.as_ref(), radical)?;
        let ok = match (&self.radical, radical) {
            (Some(_), None) => false,
            (Some(a), Some(b)) => b.degree % a.degree == 0 && joint.as_ref() == Some(b),
            _ => true,
        };
        if !ok {
            return Err(FieldError::Incompatible("target radical does not contain the element".into()));
        }
        let raw = match radical {
            None => self.coeffs.clone(),
            Some(r) => self.spread(r),
        };
        let coeffs = raw
            .iter()
            .map(|c| c.embed(n))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TowerElement { radical: radical.cloned(), coeffs })
    }

    pub fn render(&self) -> String {
        let Some(r) = &self.radical else { return self.coeffs[0].render() };
        let root = r.render();
        let mut parts: Vec<String> = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if j == 0 {
                parts.push(c.render());
                continue;
            }
            let rho = if j == 1 { root.clone() } else { format!("{root}^{j}") };
            let cs = c.render();
            if c.is_one() {
                parts.push(rho);
            } else if (-c).is_one() {
                parts.push(format!("-{rho}"));
            } else if c.is_single_term() {
                parts.push(format!("{cs}*{rho}"));
            } else {
                parts.push(format!("({cs})*{rho}"));
            }
        }
        let mut s = parts[0].clone();
        for t in &parts[1..] {
            if let Some(rest) = t.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(t);
            }
        }
        s
    }

    /// Same value with each coefficient moved to its smallest cyclotomic field.
    pub fn canonical(&self) -> Self {
        TowerElement {
            radical: self.radical.clone(),
            coeffs: self.coeffs.iter().map(CycloElement::canonical).collect(),
        }
    }
}

impl fmt::Debug for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl PartialEq for TowerElement {
    fn eq(&self, other: &Self) -> bool {
        if self.radical == other.radical {
            return self.coeffs == other.coeffs;
        }
        match join_radicals(self.radical.as_ref(), other.radical.as_ref()) {
            Ok(Some(j)) => self.spread(&j) == other.spread(&j),
            _ => false,
        }
    }
}

impl Eq for TowerElement {}

impl Zero for TowerElement {
    fn zero() -> Self {
        TowerElement { radical: None, coeffs: vec![CycloElement::zero()] }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl One for TowerElement {
    fn one() -> Self {
        TowerElement { radical: None, coeffs: vec![CycloElement::one()] }
    }
}

impl Field for TowerElement {
    fn add_ref(&self, other: &Self) -> Self {
        let (radical, a, b) = self.aligned(other);
        let coeffs = a.iter().zip(&b).map(|(x, y)| x.add_ref(y)).collect();
        TowerElement { radical, coeffs }.normalize()
    }

    fn sub_ref(&self, other: &Self) -> Self {
        let (radical, a, b) = self.aligned(other);
        let coeffs = a.iter().zip(&b).map(|(x, y)| x.sub_ref(y)).collect();
        TowerElement { radical, coeffs }.normalize()
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if let Some(c) = self.as_cyclo() {
            return other.scale_cyclo(c).normalize();
        }
        if let Some(c) = other.as_cyclo() {
            return self.scale_cyclo(c).normalize();
        }
        let (radical, a, b) = self.aligned(other);
        let r = radical.unwrap();
        let d = r.degree as usize;
        let mut out = vec![CycloElement::zero(); d];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let t = x.mul_ref(y);
                if i + j >= d {
                    out[i + j - d] = out[i + j - d].add_ref(&t.scale(&r.base));
                } else {
                    out[i + j] = out[i + j].add_ref(&t);
                }
            }
        }
        TowerElement { radical: Some(r), coeffs: out }.normalize()
    }

    fn neg_ref(&self) -> Self {
        TowerElement { radical: self.radical.clone(), coeffs: self.coeffs.iter().map(|c| c.neg_ref()).collect() }
    }

    fn try_inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let Some(r) = &self.radical else {
            return Ok(Self::cyclo(self.coeffs[0].try_inv()?));
        };
        if let Some((j, c)) = self.single_term() {
            // (c ρ^j)^{-1} = c^{-1} ρ^{D-j} / base
            let inv = c.try_inv()?.scale(&r.base.recip());
            return Ok(Self::radical_term(r.clone(), r.degree - j as u64, inv));
        }
        let a = Poly::new(self.coeffs.clone());
        let mut m = vec![CycloElement::zero(); r.degree as usize + 1];
        m[0] = CycloElement::rational(-r.base.clone());
        m[r.degree as usize] = CycloElement::one();
        let m = Poly::new(m);
        let (g, s, _) = a.ext_gcd(&m)?;
        if !g.is_constant() {
            let factor = g.map(|c| TowerElement::cyclo(c.clone()));
            return Err(FieldError::ZeroDivisor { factor: render_y_poly(&factor) });
        }
        let mut coeffs = s.into_coeffs();
        coeffs.resize(r.degree as usize, CycloElement::zero());
        Ok(TowerElement { radical: Some(r.clone()), coeffs }.normalize())
    }

    fn from_rational(q: &BigRational) -> Self {
        Self::rational(q.clone())
    }

    fn size(&self) -> usize {
        self.coeffs.iter().map(Field::size).sum()
    }
}

fn render_y_poly(p: &Poly<TowerElement>) -> String {
    let mut terms = Vec::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let y = match i {
            0 => String::new(),
            1 => "y".into(),
            _ => format!("y^{i}"),
        };
        if y.is_empty() {
            terms.push(format!("({})", c.render()));
        } else if c.is_one() {
            terms.push(y);
        } else {
            terms.push(format!("({})*{y}", c.render()));
        }
    }
    terms.join(" + ")
}

forward_ops!(TowerElement);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, rat_int};

    fn cbrt2() -> TowerElement {
        TowerElement::radical_term(Radical { base: rat_int(2), degree: 3 }, 1, CycloElement::one())
    }

    #[test]
    fn primitive_bases() {
        assert_eq!(primitive_base(&rat_int(8)), (rat_int(2), 3, false));
        assert_eq!(primitive_base(&rat(1, 4)), (rat_int(2), 2, true));
        assert_eq!(primitive_base(&rat(2, 3)), (rat(2, 3), 1, false));
        assert_eq!(Radical::root_of(&rat_int(4), 3), cbrt2().pow_u(2));
        assert_eq!(Radical::root_of(&rat(1, 2), 3), cbrt2().pow_u(2).scale_rational(&rat(1, 2)));
        assert_eq!(Radical::root_of(&rat_int(8), 3), TowerElement::from_int(2));
    }

    #[test]
    fn cube_root_arithmetic() {
        let r = cbrt2();
        assert_eq!(r.pow_u(3), TowerElement::from_int(2));
        let inv = r.try_inv().unwrap();
        assert_eq!(inv, r.pow_u(2).scale_rational(&rat(1, 2)));
        let a = r.add_ref(&TowerElement::from_int(1));
        assert!(a.mul_ref(&a.try_inv().unwrap()).is_one());
    }

    #[test]
    fn mixed_degrees_join() {
        let r9 = TowerElement::radical_term(Radical { base: rat_int(2), degree: 9 }, 1, CycloElement::one());
        assert_eq!(r9.pow_u(3), cbrt2());
        let s = r9.add_ref(&cbrt2());
        assert_eq!(s.radical().unwrap().degree, 9);
        assert_eq!(s.sub_ref(&r9), cbrt2());
    }

    #[test]
    fn reducible_modulus_reports_zero_divisor() {
        // sqrt(2) lies in Q(zeta_8), so y^2 - 2 splits there.
        let sqrt2 = TowerElement::radical_term(Radical { base: rat_int(2), degree: 2 }, 1, CycloElement::one());
        let z8 = TowerElement::zeta_pow(8, 1);
        let s = z8.add_ref(&z8.pow_u(7)); // = sqrt(2) as a cyclotomic number
        let x = sqrt2.sub_ref(&s);
        assert!(!x.is_zero());
        assert!(matches!(x.try_inv(), Err(FieldError::ZeroDivisor { .. })));
    }
}
