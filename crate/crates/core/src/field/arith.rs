//! Small-integer number theory used by the cyclotomic and monomial layers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Prime factorization by trial division, ascending primes.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Prime factorization of a nonzero big integer's absolute value.
///
/// Inputs here are the numerators and denominators of user-supplied radicands
/// and pole moduli, so trial division is adequate.
pub fn factor_bigint(n: &BigInt) -> Vec<(u64, i64)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut d = 2u64;
    loop {
        let dd = BigInt::from(d);
        if &dd * &dd > n {
            break;
        }
        let mut e = 0i64;
        while (&n % &dd).is_zero() {
            n /= &dd;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        let q = n.to_u64().expect("prime factor exceeds u64");
        out.push((q, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factor_u64(n)
        .into_iter()
        .fold(n, |acc, (q, _)| acc / q * (q - 1))
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    out.sort_unstable();
    out
}

/// `p^k`, panicking on overflow.
pub fn pow_u64(p: u64, k: u32) -> u64 {
    p.checked_pow(k).expect("p-power overflow")
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m = m as u128;
    let mut acc = 1u128;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Multiplicative order of `p` modulo `r` (requires `gcd(p, r) = 1`); 1 for `r = 1`.
pub fn multiplicative_order(p: u64, r: u64) -> u64 {
    if r == 1 {
        return 1;
    }
    debug_assert_eq!(gcd(p, r), 1);
    let mut acc = p % r;
    let mut e = 1;
    while acc != 1 {
        acc = (acc as u128 * p as u128 % r as u128) as u64;
        e += 1;
    }
    e
}

/// Splits `r` into `(s, r')` where every prime of `s` divides `p` and `gcd(r', p) = 1`.
pub fn split_p_part(r: u64, p: u64) -> (u64, u64) {
    let mut s = 1;
    let mut rest = r;
    for (q, _) in factor_u64(p) {
        while rest % q == 0 {
            rest /= q;
            s *= q;
        }
    }
    (s, rest)
}

/// Smallest `t` with `s | p^t`, where every prime of `s` divides `p`.
pub fn p_power_cover(s: u64, p: u64) -> u32 {
    let mut t = 0;
    let mut acc = 1u64;
    while acc % s != 0 {
        acc = (acc % s) * p;
        t += 1;
    }
    t
}

/// True when every prime factor of `d` divides `p`.
pub fn divides_p_power(d: u64, p: u64) -> bool {
    split_p_part(d, p).1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_phi() {
        assert_eq!(multiplicative_order(2, 7), 3);
        assert_eq!(multiplicative_order(3, 4), 2);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(mod_inverse(3, 4), Some(3));
    }

    #[test]
    fn p_parts() {
        assert_eq!(split_p_part(12, 3), (3, 4));
        assert_eq!(split_p_part(36, 6), (36, 1));
        assert_eq!(p_power_cover(9, 3), 2);
        assert_eq!(p_power_cover(8, 4), 2);
        assert_eq!(p_power_cover(1, 3), 0);
        assert!(divides_p_power(2, 4));
        assert!(!divides_p_power(3, 4));
    }

    #[test]
    fn big_factorization() {
        assert_eq!(factor_bigint(&BigInt::from(-360)), vec![(2, 3), (3, 2), (5, 1)]);
    }
}
