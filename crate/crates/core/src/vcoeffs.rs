//! Universal Mahler coefficients 𝕍^m_k and their evaluations V^m_k(α) = 𝕍^m_k·α^(k−pm).

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use once_cell::sync::Lazy;

use crate::error::FieldError;
use crate::field::{Field, Radical, RadicalMonomial, TowerElement};
use crate::series::pow_trunc;

/// 𝕍^s_k for `1 ≤ k ≤ s ≤ m_max`.
#[derive(Clone, Debug)]
pub struct UniversalVTable {
    pub p: u64,
    pub m_max: usize,
    entries: Vec<Vec<BigRational>>,
}

impl UniversalVTable {
    /// 𝕍^s_k; panics outside `1 ≤ k ≤ s ≤ m_max`.
    pub fn get(&self, s: usize, k: usize) -> &BigRational {
        assert!(1 <= k && k <= s && s <= self.m_max, "V^{s}_{k} outside table");
        &self.entries[s - 1][k - 1]
    }
}

/// Builds the table from the expansion of `q(1+t)^(-m)` with `q(x) = 1 + x + … + x^(p-1)`.
pub fn universal_v(p: u64, m_max: usize) -> UniversalVTable {
    assert!(p >= 2 && m_max >= 1);
    let n = m_max;
    // q(1+t) = Σ_{j<p} (1+t)^j = Σ_i C(p, i+1) t^i
    let q: Vec<BigRational> = (0..n)
        .map(|i| BigRational::from_integer(binomial(BigInt::from(p), BigInt::from(i + 1))))
        .collect();
    let entries = (1..=m_max)
        .map(|m| {
            let s = pow_trunc(&q, -(m as i64), m).expect("q(1) = p is invertible");
            (1..=m).map(|k| s[m - k].clone()).collect()
        })
        .collect();
    UniversalVTable { p, m_max, entries }
}

static TABLES: Lazy<RwLock<HashMap<u64, Arc<UniversalVTable>>>> = Lazy::new(|| RwLock::new(HashMap::new()));

/// Cached table for `p` covering at least `m_max`.
pub fn table(p: u64, m_max: usize) -> Arc<UniversalVTable> {
    if let Some(t) = TABLES.read().unwrap().get(&p) {
        if t.m_max >= m_max {
            return t.clone();
        }
    }
    let t = Arc::new(universal_v(p, m_max.max(4)));
    let mut w = TABLES.write().unwrap();
    let e = w.entry(p).or_insert_with(|| t.clone());
    if e.m_max < t.m_max {
        *e = t;
    }
    e.clone()
}

/// V^s_k(α) = 𝕍^s_k · α^(k − p·s).
pub fn v_coeff(table: &UniversalVTable, alpha: &TowerElement, s: usize, k: usize) -> Result<TowerElement, FieldError> {
    let e = k as i64 - (table.p as i64) * (s as i64);
    Ok(alpha.pow_i(e)?.scale_rational(table.get(s, k)))
}

/// V^s_k(α) for a monomial α, evaluated over `radical`.
pub fn v_coeff_monomial(
    table: &UniversalVTable,
    alpha: &RadicalMonomial,
    s: usize,
    k: usize,
    radical: Option<&Radical>,
) -> Result<TowerElement, FieldError> {
    let e = k as i64 - (table.p as i64) * (s as i64);
    Ok(alpha.pow(e).value_with(radical)?.scale_rational(table.get(s, k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;
    use num_traits::One;

    #[test]
    fn small_tables() {
        let t = universal_v(3, 2);
        assert_eq!(t.get(2, 2), &rat(1, 9));
        assert_eq!(t.get(2, 1), &rat(-2, 9));
        let t2 = universal_v(2, 3);
        assert_eq!(t2.get(1, 1), &rat(1, 2));
        assert_eq!(t2.get(3, 3), &rat(1, 8));
        assert_eq!(t2.get(3, 2), &rat(-3, 16));
        assert_eq!(t2.get(3, 1), &rat(3, 16));
    }

    #[test]
    fn top_entries_are_inverse_powers() {
        for p in 2..6u64 {
            let t = table(p, 5);
            for s in 1..=5 {
                assert_eq!(t.get(s, s), &BigRational::new(1.into(), BigInt::from(p).pow(s as u32)));
            }
        }
    }

    #[test]
    fn evaluated_coefficients() {
        let t = table(3, 2);
        let z4 = TowerElement::zeta_pow(4, 1);
        assert_eq!(v_coeff(&t, &z4, 1, 1).unwrap(), TowerElement::rational(rat(-1, 3)));
        let z3 = RadicalMonomial::root_of_unity(3, 1);
        let v = v_coeff_monomial(&t, &z3, 2, 2, None).unwrap();
        assert_eq!(v, TowerElement::zeta_pow(3, 2).scale_rational(&rat(1, 9)));
        assert_eq!(v_coeff(&t, &TowerElement::one(), 1, 1).unwrap(), TowerElement::rational(rat(1, 3)));
    }
}
