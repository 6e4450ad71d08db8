//! Elements of Q(ζ_N), reduced modulo the N-th cyclotomic polynomial.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use super::arith::{euler_phi, gcd, lcm};
use super::{rational_bits, render_rational, Field};
use crate::error::FieldError;

/// Per-order data: Φ_N and the reductions of x^k mod Φ_N for 0 ≤ k < N.
#[derive(Debug)]
pub(crate) struct CycloData {
    pub phi: usize,
    pub modulus: Vec<i64>,
    powers: Vec<Vec<i64>>,
}

static CACHE: Lazy<RwLock<HashMap<u64, Arc<CycloData>>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

fn poly_div_exact_i64(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den is monic
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0i64; num.len() - dd];
    for i in (0..q.len()).rev() {
        let c = r[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, dj) in den.iter().enumerate() {
                r[i + j] = r[i + j]
                    .checked_sub(c.checked_mul(*dj).expect("cyclotomic overflow"))
                    .expect("cyclotomic overflow");
            }
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0));
    q
}

/// Coefficients of Φ_n, lowest degree first.
pub fn cyclotomic_poly(n: u64) -> Vec<i64> {
    data(n).modulus.clone()
}

fn compute(n: u64) -> CycloData {
    let mut modulus = vec![0i64; n as usize + 1];
    modulus[0] = -1;
    modulus[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let phi_d = data(d);
            modulus = poly_div_exact_i64(&modulus, &phi_d.modulus);
        }
    }
    let phi = euler_phi(n) as usize;
    debug_assert_eq!(modulus.len(), phi + 1);
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by x and reduce
        let top = cur[phi - 1];
        let mut next = vec![0i64; phi];
        for i in (1..phi).rev() {
            next[i] = cur[i - 1];
        }
        if top != 0 {
            for i in 0..phi {
                next[i] -= top * modulus[i];
            }
        }
        cur = next;
    }
    CycloData { phi, modulus, powers }
}

pub(crate) fn data(n: u64) -> Arc<CycloData> {
    assert!(n >= 1, "cyclotomic order must be positive");
    if let Some(d) = CACHE.read().unwrap().get(&n) {
        return d.clone();
    }
    if n == 1 {
        let d = Arc::new(CycloData { phi: 1, modulus: vec![-1, 1], powers: vec![vec![1]] });
        CACHE.write().unwrap().insert(1, d.clone());
        return d;
    }
    let d = Arc::new(compute(n));
    CACHE.write().unwrap().entry(n).or_insert(d).clone()
}

/// An element of Q(ζ_n) in the power basis 1, ζ_n, …, ζ_n^{φ(n)-1}.
///
/// Operations between elements of different orders move both into the
/// lcm order. Results that are rational fall back to order 1.
#[derive(Clone)]
pub struct CycloElement {
    n: u64,
    coeffs: Vec<BigRational>,
}

impl CycloElement {
    pub fn rational(q: BigRational) -> Self {
        CycloElement { n: 1, coeffs: vec![q] }
    }

    pub fn zero_in(n: u64) -> Self {
        CycloElement { n, coeffs: vec![BigRational::zero(); data(n).phi] }
    }

    /// ζ_n^a.
    pub fn zeta_pow(n: u64, a: i64) -> Self {
        let k = a.rem_euclid(n as i64) as usize;
        let d = data(n);
        let coeffs = d.powers[k].iter().map(|&c| BigRational::from_integer(c.into())).collect();
        CycloElement { n, coeffs }.shrink()
    }

    pub fn zeta(n: u64) -> Self {
        Self::zeta_pow(n, 1)
    }

    /// Builds `Σ c_j ζ_n^j` for arbitrary-length input, reducing as needed.
    pub fn from_poly_coeffs(n: u64, c: &[BigRational]) -> Self {
        let d = data(n);
        let mut out = vec![BigRational::zero(); d.phi];
        for (j, cj) in c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            for (i, &w) in d.powers[j % n as usize].iter().enumerate() {
                if w != 0 {
                    out[i] += cj * BigRational::from_integer(w.into());
                }
            }
        }
        CycloElement { n, coeffs: out }.shrink()
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then(|| &self.coeffs[0])
    }

    fn shrink(mut self) -> Self {
        if self.n != 1 && self.is_rational() {
            self.coeffs.truncate(1);
            self.n = 1;
        }
        self
    }

    /// Re-expresses this element in Q(ζ_m); `m` must be a multiple of the order.
    pub fn embed(&self, m: u64) -> Result<Self, FieldError> {
        if m % self.n != 0 {
            return Err(FieldError::Incompatible(format!(
                "Q(zeta({})) is not a subfield of Q(zeta({}))",
                self.n, m
            )));
        }
        Ok(self.embed_unchecked(m))
    }

    fn embed_unchecked(&self, m: u64) -> Self {
        if m == self.n {
            return self.clone();
        }
        let d = data(m);
        let step = (m / self.n) as usize;
        let mut out = vec![BigRational::zero(); d.phi];
        for (j, cj) in self.coeffs.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            for (i, &w) in d.powers[(j * step) % m as usize].iter().enumerate() {
                if w != 0 {
                    out[i] += cj * BigRational::from_integer(w.into());
                }
            }
        }
        CycloElement { n: m, coeffs: out }
    }

    /// Coefficient vector in Q(ζ_m) without shrinking (m a multiple of the order).
    pub fn coeffs_in(&self, m: u64) -> Vec<BigRational> {
        self.embed_unchecked(m).coeffs
    }

    fn aligned(&self, other: &Self) -> (Self, Self, u64) {
        if self.n == other.n {
            return (self.clone(), other.clone(), self.n);
        }
        let m = lcm(self.n, other.n);
        (self.embed_unchecked(m), other.embed_unchecked(m), m)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        CycloElement { n: self.n, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Single-term elements `q·ζ_n^k` in the power basis.
    fn single_term(&self) -> Option<(usize, &BigRational)> {
        let mut found = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                if found.is_some() {
                    return None;
                }
                found = Some((i, c));
            }
        }
        found
    }

    /// The smallest order whose field contains this element, probing divisors.
    pub fn minimal_order(&self) -> u64 {
        if self.is_rational() {
            return 1;
        }
        for d in super::arith::divisors(self.n) {
            if d == self.n {
                break;
            }
            if self.try_descend(d).is_some() {
                return d;
            }
        }
        self.n
    }

    /// Attempts to write this element in Q(ζ_d), d | n, by linear solve over the
    /// images of the basis of Q(ζ_d).
    fn try_descend(&self, d: u64) -> Option<Self> {
        let dd = data(d);
        let step = (self.n / d) as usize;
        let target = data(self.n);
        // Columns: images of ζ_d^j, j < φ(d).
        let cols: Vec<&Vec<i64>> = (0..dd.phi).map(|j| &target.powers[(j * step) % self.n as usize]).collect();
        let rows = target.phi;
        let mut m: Vec<Vec<BigRational>> = (0..rows)
            .map(|r| {
                let mut row: Vec<BigRational> =
                    cols.iter().map(|c| BigRational::from_integer(c[r].into())).collect();
                row.push(self.coeffs[r].clone());
                row
            })
            .collect();
        let sol = crate::linalg::solve_augmented(&mut m, dd.phi).ok()??;
        Some(CycloElement { n: d, coeffs: sol })
    }

    /// Returns the same value in the smallest cyclotomic field containing it.
    pub fn canonical(&self) -> Self {
        let d = self.minimal_order();
        if d == self.n {
            self.clone()
        } else {
            self.try_descend(d).unwrap().shrink()
        }
    }

    pub fn render(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k == 0 {
                parts.push(render_rational(c));
                continue;
            }
            let z = if k == 1 { format!("zeta({})", self.n) } else { format!("zeta({})^{}", self.n, k) };
            if c.is_one() {
                parts.push(z);
            } else if (-c).is_one() {
                parts.push(format!("-{z}"));
            } else {
                parts.push(format!("{}*{z}", render_rational(c)));
            }
        }
        if parts.is_empty() {
            return "0".into();
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

    pub fn is_single_term(&self) -> bool {
        self.single_term().is_some()
    }
}

impl fmt::Debug for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl PartialEq for CycloElement {
    fn eq(&self, other: &Self) -> bool {
        if self.n == other.n {
            return self.coeffs == other.coeffs;
        }
        let (a, b, _) = self.aligned(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycloElement {}

impl Zero for CycloElement {
    fn zero() -> Self {
        CycloElement::rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl One for CycloElement {
    fn one() -> Self {
        CycloElement::rational(BigRational::one())
    }
}

/// `(A, d)` with `c = A / d` and `A` integral.
fn integral(c: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let d = c.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let a = c.iter().map(|q| q.numer() * (&d / q.denom())).collect();
    (a, d)
}

fn reduce_int(n: u64, mut prod: Vec<BigInt>) -> Vec<BigInt> {
    let d = data(n);
    let phi = d.phi;
    if prod.len() <= phi {
        prod.resize(phi, BigInt::zero());
        return prod;
    }
    let high = prod.split_off(phi);
    for (k, c) in high.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (i, &w) in d.powers[(k + phi) % n as usize].iter().enumerate() {
            if w != 0 {
                prod[i] += c * w;
            }
        }
    }
    prod
}

/// Inverse of the nonzero integral element `a` of Q(ζ_n): solves
/// `M s = e_0` for the multiplication matrix of `a` by fraction-free
/// elimination over Z, then back-substitutes over Q.
fn inverse_integral(n: u64, a: Vec<BigInt>) -> Vec<BigRational> {
    let d = data(n);
    let phi = d.phi;
    // columns a·ζ^j
    let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(phi);
    let mut cur = a;
    for _ in 0..phi {
        let top = cur[phi - 1].clone();
        let mut next = vec![BigInt::zero(); phi];
        next[1..phi].clone_from_slice(&cur[..phi - 1]);
        if !top.is_zero() {
            for (x, &w) in next.iter_mut().zip(&d.modulus) {
                if w != 0 {
                    *x -= &top * w;
                }
            }
        }
        cols.push(std::mem::replace(&mut cur, next));
    }
    let mut m: Vec<Vec<BigInt>> = (0..phi)
        .map(|i| {
            let mut row: Vec<BigInt> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(if i == 0 { BigInt::one() } else { BigInt::zero() });
            row
        })
        .collect();
    let mut prev = BigInt::one();
    for k in 0..phi {
        let piv = (k..phi).filter(|&i| !m[i][k].is_zero()).min_by_key(|&i| m[i][k].bits()).expect("cyclotomic polynomial is irreducible");
        m.swap(k, piv);
        let (head, tail) = m.split_at_mut(k + 1);
        let prow = &head[k];
        for row in tail.iter_mut() {
            for j in k + 1..=phi {
                row[j] = (&prow[k] * &row[j] - &row[k] * &prow[j]) / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = prow[k].clone();
    }
    let mut s = vec![BigRational::zero(); phi];
    for i in (0..phi).rev() {
        let mut acc = BigRational::from_integer(m[i][phi].clone());
        for k in i + 1..phi {
            if !m[i][k].is_zero() {
                acc -= &s[k] * BigRational::from_integer(m[i][k].clone());
            }
        }
        s[i] = acc / BigRational::from_integer(m[i][i].clone());
    }
    s
}

impl Field for CycloElement {
    fn add_ref(&self, other: &Self) -> Self {
        if self.n == 1 && other.n != 1 {
            let mut c = other.coeffs.clone();
            c[0] += &self.coeffs[0];
            return CycloElement { n: other.n, coeffs: c }.shrink();
        }
        if other.n == 1 {
            let mut c = self.coeffs.clone();
            c[0] += &other.coeffs[0];
            return CycloElement { n: self.n, coeffs: c }.shrink();
        }
        let (a, b, m) = self.aligned(other);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        CycloElement { n: m, coeffs }.shrink()
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.n == 1 {
            return other.scale(&self.coeffs[0]).shrink();
        }
        if other.n == 1 {
            return self.scale(&other.coeffs[0]).shrink();
        }
        let (a, b, m) = self.aligned(other);
        let (ai, da) = integral(&a.coeffs);
        let (bi, db) = integral(&b.coeffs);
        let phi = ai.len();
        let mut prod = vec![BigInt::zero(); 2 * phi - 1];
        for (i, x) in ai.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in bi.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let den = da * db;
        let coeffs = reduce_int(m, prod).into_iter().map(|c| BigRational::new(c, den.clone())).collect();
        CycloElement { n: m, coeffs }.shrink()
    }

    fn neg_ref(&self) -> Self {
        CycloElement { n: self.n, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    fn try_inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if self.n == 1 {
            return Ok(CycloElement::rational(self.coeffs[0].recip()));
        }
        if let Some((k, c)) = self.single_term() {
            let inv = CycloElement::zeta_pow(self.n, -(k as i64));
            return Ok(inv.scale(&c.recip()));
        }
        let (ai, d) = integral(&self.coeffs);
        let s = inverse_integral(self.n, ai);
        Ok(CycloElement { n: self.n, coeffs: s.into_iter().map(|c| c * &d).collect() }.shrink())
    }

    fn from_rational(q: &BigRational) -> Self {
        CycloElement::rational(q.clone())
    }

    fn size(&self) -> usize {
        self.coeffs.iter().map(rational_bits).sum()
    }
}

macro_rules! forward_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                Field::add_ref(&self, &o)
            }
        }
        impl<'a> Add<&'a $t> for &'a $t {
            type Output = $t;
            fn add(self, o: &$t) -> $t {
                Field::add_ref(self, o)
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                Field::sub_ref(&self, &o)
            }
        }
        impl<'a> Sub<&'a $t> for &'a $t {
            type Output = $t;
            fn sub(self, o: &$t) -> $t {
                Field::sub_ref(self, o)
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                Field::mul_ref(&self, &o)
            }
        }
        impl<'a> Mul<&'a $t> for &'a $t {
            type Output = $t;
            fn mul(self, o: &$t) -> $t {
                Field::mul_ref(self, o)
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                Field::neg_ref(&self)
            }
        }
        impl<'a> Neg for &'a $t {
            type Output = $t;
            fn neg(self) -> $t {
                Field::neg_ref(self)
            }
        }
    };
}
pub(crate) use forward_ops;

forward_ops!(CycloElement);

/// Reduced exponent pair: ζ_n^a equals ζ_{n/g}^{a/g} with g = gcd(a, n).
pub fn reduce_root(n: u64, a: i64) -> (u64, u64) {
    let a = a.rem_euclid(n as i64) as u64;
    if a == 0 {
        return (1, 0);
    }
    let g = gcd(a, n);
    (n / g, a / g)
}
