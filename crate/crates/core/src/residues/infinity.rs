use std::collections::BTreeMap;

use num_traits::Zero;

use crate::field::Field;
use crate::ratfun::{trajectory_components, LaurentPoly};
use crate::Scalar;

/// `dres(f, ∞)`: trajectory representative ↦ sum of the coefficients on it.
pub type ResidueAtInfinity = BTreeMap<i64, Scalar>;

pub fn dres_infinity(fl: &LaurentPoly, p: u64) -> ResidueAtInfinity {
    let mut out = BTreeMap::new();
    for (theta, comp) in trajectory_components(fl, p) {
        let s = comp.terms().values().fold(Scalar::zero(), |acc, c| acc.add_ref(c));
        if !s.is_zero() {
            out.insert(theta, s);
        }
    }
    out
}

/// Largest `n` with `i·p^n` in the support of a trajectory component.
pub fn trajectory_height(comp: &LaurentPoly, theta: i64, p: u64) -> u32 {
    if theta == 0 {
        return 0;
    }
    comp.terms()
        .keys()
        .map(|&j| {
            let mut n = 0;
            let mut v = j;
            while v != theta {
                v /= p as i64;
                n += 1;
            }
            n
        })
        .max()
        .unwrap_or(0)
}

/// `(f̄_L, g_L)` with `f̄_L = f_L + Δ(g_L)`; each trajectory collapses onto its
/// top exponent and the constant term passes through.
pub fn reduce_infinity(fl: &LaurentPoly, p: u64) -> (LaurentPoly, LaurentPoly) {
    let mut fbar = LaurentPoly::zero();
    let mut g = LaurentPoly::zero();
    for (theta, comp) in trajectory_components(fl, p) {
        if theta == 0 {
            fbar.add_term(0, &comp.coeff(0));
            continue;
        }
        let h = trajectory_height(&comp, theta, p);
        let mut partial = Scalar::zero();
        let mut j = theta;
        for k in 0..=h {
            partial = partial.add_ref(&comp.coeff(j));
            if k < h {
                g.add_term(j, &partial);
                j *= p as i64;
            }
        }
        fbar.add_term(j, &partial);
    }
    (fbar, g)
}
