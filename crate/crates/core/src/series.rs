//! Truncated power series `Σ a_i t^i mod t^n`.

use crate::error::FieldError;
use crate::field::Field;

pub fn mul_trunc<F: Field>(a: &[F], b: &[F], n: usize) -> Vec<F> {
    let mut out = vec![F::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            if !y.is_zero() {
                out[i + j] = out[i + j].add_ref(&x.mul_ref(y));
            }
        }
    }
    out
}

/// `1/a mod t^n`; requires `a[0] ≠ 0`.
pub fn inv_trunc<F: Field>(a: &[F], n: usize) -> Result<Vec<F>, FieldError> {
    let a0 = a.first().ok_or(FieldError::DivisionByZero)?;
    let inv0 = a0.try_inv()?;
    let mut out: Vec<F> = Vec::with_capacity(n);
    if n == 0 {
        return Ok(out);
    }
    out.push(inv0.clone());
    for k in 1..n {
        let mut acc = F::zero();
        for j in 1..=k.min(a.len().saturating_sub(1)) {
            if !a[j].is_zero() {
                acc = acc.add_ref(&a[j].mul_ref(&out[k - j]));
            }
        }
        out.push(acc.neg_ref().mul_ref(&inv0));
    }
    Ok(out)
}

pub fn div_trunc<F: Field>(a: &[F], b: &[F], n: usize) -> Result<Vec<F>, FieldError> {
    Ok(mul_trunc(a, &inv_trunc(b, n)?, n))
}

/// `a^k mod t^n` for any integer k (negative powers need `a[0] ≠ 0`).
pub fn pow_trunc<F: Field>(a: &[F], k: i64, n: usize) -> Result<Vec<F>, FieldError> {
    let base = if k < 0 { inv_trunc(a, n)? } else { a.iter().take(n).cloned().collect() };
    let mut e = k.unsigned_abs();
    let mut acc = vec![F::zero(); n];
    if n > 0 {
        acc[0] = F::one();
    }
    let mut b = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_trunc(&acc, &b, n);
        }
        e >>= 1;
        if e > 0 {
            b = mul_trunc(&b, &b, n);
        }
    }
    Ok(acc)
}
