//! Dense univariate polynomials over an exact field.

use std::fmt;

use crate::error::FieldError;
use crate::field::Field;

/// Coefficients stored lowest degree first, with no trailing zeros.
#[derive(Clone, PartialEq)]
pub struct Poly<F: Field> {
    coeffs: Vec<F>,
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::monomial(F::one(), 1)
    }

    pub fn monomial(c: F, deg: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut v = vec![F::zero(); deg + 1];
        v[deg] = c;
        Poly { coeffs: v }
    }

    /// `x - a`.
    pub fn linear(a: &F) -> Self {
        Poly { coeffs: vec![a.neg_ref(), F::one()] }
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn lead(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(|c| c.is_one())
    }

    /// Lowest index with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add_ref(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::new(v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.sub_ref(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.neg_ref(),
                (None, None) => unreachable!(),
            });
        }
        Self::new(v)
    }

    pub fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(F::neg_ref).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![F::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                v[i + j] = v[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Self::new(v)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|a| a.mul_ref(c)).collect())
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![F::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn monic(&self) -> Result<Self, FieldError> {
        match self.lead() {
            None => Ok(Self::zero()),
            Some(l) if l.is_one() => Ok(self.clone()),
            Some(l) => Ok(self.scale(&l.try_inv()?)),
        }
    }

    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), FieldError> {
        let dd = d.degree().ok_or(FieldError::DivisionByZero)?;
        if self.coeffs.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let lead = d.lead().unwrap();
        let inv = if lead.is_one() { None } else { Some(lead.try_inv()?) };
        let mut r = self.coeffs.clone();
        let mut q = vec![F::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let top = &r[i + dd];
            if top.is_zero() {
                continue;
            }
            let c = match &inv {
                Some(inv) => top.mul_ref(inv),
                None => top.clone(),
            };
            for (j, dj) in d.coeffs.iter().enumerate() {
                if !dj.is_zero() {
                    r[i + j] = r[i + j].sub_ref(&c.mul_ref(dj));
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        Ok((Self::new(q), Self::new(r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self, FieldError> {
        Ok(self.div_rem(d)?.1)
    }

    /// Quotient when `d` divides `self`, `None` otherwise.
    pub fn exact_div(&self, d: &Self) -> Result<Option<Self>, FieldError> {
        let (q, r) = self.div_rem(d)?;
        Ok(r.is_zero().then_some(q))
    }

    /// Monic gcd (zero when both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Result<Self, FieldError> {
        let mut a = self.monic()?;
        let mut b = other.monic()?;
        while !b.is_zero() {
            let r = a.rem(&b)?.monic()?;
            a = b;
            b = r;
        }
        Ok(a)
    }

    /// Returns `(g, s, t)` with `s·self + t·other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> Result<(Self, Self, Self), FieldError> {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lead() {
            None => Ok((r0, s0, t0)),
            Some(l) => {
                let inv = l.try_inv()?;
                Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
            }
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul_ref(&F::from_int(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, a: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(a).add_ref(c);
        }
        acc
    }

    /// `self(x^p)`.
    pub fn compose_pow(&self, p: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![F::zero(); (self.coeffs.len() - 1) * p + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * p] = c.clone();
        }
        Poly { coeffs: v }
    }

    /// Quotient by `x - a` and the remainder `self(a)`.
    pub fn synthetic_div(&self, a: &F) -> (Self, F) {
        if self.is_zero() {
            return (Self::zero(), F::zero());
        }
        let n = self.coeffs.len();
        let mut q = vec![F::zero(); n - 1];
        let mut acc = F::zero();
        for i in (0..n).rev() {
            acc = acc.mul_ref(a).add_ref(&self.coeffs[i]);
            if i > 0 {
                q[i - 1] = acc.clone();
            }
        }
        (Self::new(q), acc)
    }

    /// The first `count` Taylor coefficients at `a`, i.e. the coefficients of
    /// `self(a + t)` in `t`, by repeated synthetic division.
    pub fn taylor(&self, a: &F, count: usize) -> Vec<F> {
        let mut out = Vec::with_capacity(count);
        let mut cur = self.clone();
        for _ in 0..count {
            let (q, r) = cur.synthetic_div(a);
            out.push(r);
            cur = q;
        }
        out
    }

    /// Multiplicity of the root `a` and the cofactor.
    pub fn root_multiplicity(&self, a: &F) -> (u32, Self) {
        let mut m = 0;
        let mut cur = self.clone();
        while !cur.is_zero() {
            let (q, r) = cur.synthetic_div(a);
            if !r.is_zero() {
                break;
            }
            cur = q;
            m += 1;
        }
        (m, cur)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Squarefree factorization (Yun): pairs `(s_i, i)` with `self = lc · Π s_i^i`.
    pub fn squarefree(&self) -> Result<Vec<(Self, u32)>, FieldError> {
        let mut out = Vec::new();
        if self.is_constant() {
            return Ok(out);
        }
        let f = self.monic()?;
        let d = f.derivative();
        let mut a = f.gcd(&d)?;
        let mut b = f.div_rem(&a)?.0;
        let mut c = d.div_rem(&a)?.0.sub(&b.derivative());
        let mut i = 1;
        while !b.is_constant() {
            a = b.gcd(&c)?;
            if !a.is_constant() {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a)?.0;
            c = c.div_rem(&a)?.0.sub(&b.derivative());
            i += 1;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat_int;
    use num_rational::BigRational;

    fn p(v: &[i64]) -> Poly<BigRational> {
        Poly::new(v.iter().map(|&c| rat_int(c)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[-1, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, p(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&p(&[1, 2, 1])).unwrap(), p(&[1, 1]));
        let (g, s, t) = p(&[1, 0, 1]).ext_gcd(&p(&[0, 1])).unwrap();
        assert_eq!(g, p(&[1]));
        assert_eq!(s.mul(&p(&[1, 0, 1])).add(&t.mul(&p(&[0, 1]))), g);
    }

    #[test]
    fn taylor_and_roots() {
        // (x - 2)^2 (x + 1) at 2: t^2 (3 + t)
        let f = p(&[-2, 1]).pow(2).mul(&p(&[1, 1]));
        let tc = f.taylor(&rat_int(2), 4);
        assert_eq!(tc, vec![rat_int(0), rat_int(0), rat_int(3), rat_int(1)]);
        assert_eq!(f.root_multiplicity(&rat_int(2)).0, 2);
        let sf = f.squarefree().unwrap();
        assert_eq!(sf, vec![(p(&[1, 1]), 1), (p(&[-2, 1]), 2)]);
    }

    #[test]
    fn compose_pow_substitutes() {
        assert_eq!(p(&[-2, 1]).compose_pow(3), p(&[-2, 0, 0, 1]));
    }
}
