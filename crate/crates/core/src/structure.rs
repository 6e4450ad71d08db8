//! Mahler trees, cycles, dispersion, height, bouquets and pole addresses.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::arith::{mod_inverse, multiplicative_order, p_power_cover, pow_u64, split_p_part};
use crate::field::tower::join_radicals;
use crate::field::{Radical, RadicalMonomial};
use crate::ratfun::{LaurentPoly, PartialFraction};
use crate::Scalar;

/// Identifies the Mahler tree of a pole.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TreeId {
    /// Roots of unity; the cycle consists of the `r`-th roots `ζ_r^(orbit·p^t)`.
    Torsion { r: u64, orbit: u64 },
    /// Everything else, keyed by a p-power-stable monomial.
    NonTorsion { core: RadicalMonomial },
}

impl TreeId {
    pub fn is_torsion(&self) -> bool {
        matches!(self, TreeId::Torsion { .. })
    }

    pub fn render(&self) -> String {
        match self {
            TreeId::Torsion { r, orbit } => format!("torsion(r={r}, orbit={orbit})"),
            TreeId::NonTorsion { core } => format!("core({})", core.render()),
        }
    }
}

impl fmt::Debug for TreeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for TreeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleInfo {
    pub gamma: RadicalMonomial,
    pub e: u64,
}

/// `Dispersion::Finite(d) < Dispersion::Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Dispersion {
    Finite(u32),
    Infinite,
}

fn is_p_power_of(q: &BigRational, p: u64) -> Option<u32> {
    if !q.is_integer() {
        return None;
    }
    let mut v = q.to_integer();
    let pb = BigInt::from(p);
    let mut s = 0;
    while v > BigInt::from(1) {
        if !(&v % &pb).is_zero() {
            return None;
        }
        v /= &pb;
        s += 1;
    }
    (v == BigInt::from(1)).then_some(s)
}

/// Canonical tree key.
pub fn tree_of(alpha: &RadicalMonomial, p: u64) -> TreeId {
    let (s, r) = split_p_part(alpha.torsion_order(), p);
    if alpha.is_torsion() {
        if r == 1 {
            return TreeId::Torsion { r: 1, orbit: 0 };
        }
        let y0 = alpha.torsion_exp() % r * mod_inverse(s % r, r).expect("coprime") % r;
        return TreeId::Torsion { r, orbit: orbit_min(y0, p, r) };
    }
    let (ds, _) = split_p_part(alpha.radical_denominator(), p);
    let t = p_power_cover(s, p).max(p_power_cover(ds, p));
    let a = alpha.pow_p(p, t);
    let mut w: BTreeMap<u64, BigRational> = a.radical_exponents().clone();
    let pq = BigRational::from_integer(BigInt::from(p));
    let mut k = 0u32;
    while w.values().all(|e| (e.numer() % BigInt::from(p)).is_zero()) {
        for e in w.values_mut() {
            *e /= &pq;
        }
        k += 1;
    }
    let r = a.torsion_order();
    let b = if r == 1 {
        0
    } else {
        let pinv = mod_inverse(p % r, r).expect("coprime");
        (0..k).fold(a.torsion_exp() % r, |acc, _| acc * pinv % r)
    };
    TreeId::NonTorsion { core: RadicalMonomial::from_parts(r, b as i64, w) }
}

fn orbit_min(y0: u64, p: u64, r: u64) -> u64 {
    let mut best = y0;
    let mut y = y0 * (p % r) % r;
    while y != y0 {
        best = best.min(y);
        y = y * (p % r) % r;
    }
    best
}

pub fn cycle_of(id: &TreeId, p: u64) -> Result<CycleInfo> {
    match id {
        TreeId::Torsion { r: 1, .. } => Ok(CycleInfo { gamma: RadicalMonomial::one(), e: 1 }),
        TreeId::Torsion { r, orbit } => Ok(CycleInfo {
            gamma: RadicalMonomial::root_of_unity(*r, *orbit as i64),
            e: multiplicative_order(p % r, *r),
        }),
        TreeId::NonTorsion { .. } => Err(Error::InvalidArgument(format!("{id} has no cycle"))),
    }
}

/// The smallest `s ≥ 0` with `xi^(p^s) = a`, if any.
fn p_orbit_index(a: &RadicalMonomial, xi: &RadicalMonomial, p: u64, cap: u32) -> Option<u32> {
    let s = match xi.radical_exponents().iter().next() {
        Some((q, e)) => is_p_power_of(&(a.radical_exponents().get(q)? / e), p)?,
        None => {
            return (0..=cap).find(|&s| xi.pow_p(p, s) == *a);
        }
    };
    (xi.pow_p(p, s) == *a).then_some(s)
}

/// Cap on p-power probing; trees met in practice need far fewer steps.
const PROBE_CAP: u32 = 64;

/// `h(α)`: minimal `t` with `α^(p^t)` in every `ξ^(p^N)`.
fn h_alpha(alpha: &RadicalMonomial, set: &[RadicalMonomial], p: u64) -> Result<u32> {
    for t in 0..=PROBE_CAP {
        let a = alpha.pow_p(p, t);
        if set.iter().all(|xi| p_orbit_index(&a, xi, p, PROBE_CAP).is_some()) {
            return Ok(t);
        }
    }
    Err(Error::AddressFailure(format!("{alpha}: no common p-power within {PROBE_CAP} steps")))
}

/// Poles of `pf` lying in tree `id`, in increasing order.
pub fn tree_poles(pf: &PartialFraction, id: &TreeId, p: u64) -> Vec<RadicalMonomial> {
    pf.poles().filter(|a| tree_of(a, p) == *id).cloned().collect()
}

/// Groups the partial fraction by tree.
pub fn split_by_tree(pf: &PartialFraction, p: u64) -> BTreeMap<TreeId, PartialFraction> {
    let mut out: BTreeMap<TreeId, PartialFraction> = BTreeMap::new();
    for (a, v) in pf.terms() {
        let part = out.entry(tree_of(a, p)).or_default();
        for (k, c) in v.iter().enumerate() {
            part.add_term(a, k + 1, c);
        }
    }
    out
}

fn support(pf: &PartialFraction, id: &TreeId, p: u64) -> Result<Vec<RadicalMonomial>> {
    let s = tree_poles(pf, id, p);
    if s.is_empty() {
        return Err(Error::TreeNotInSupport(id.render()));
    }
    Ok(s)
}

/// `(h(f, τ), γ)`.
pub fn height(pf: &PartialFraction, id: &TreeId, p: u64) -> Result<(u32, RadicalMonomial)> {
    let poles = support(pf, id, p)?;
    height_of_set(&poles, id, p)
}

pub fn height_of_set(poles: &[RadicalMonomial], id: &TreeId, p: u64) -> Result<(u32, RadicalMonomial)> {
    if id.is_torsion() {
        let gamma = cycle_of(id, p)?.gamma;
        let h = poles.iter().map(|a| p_power_cover(split_p_part(a.torsion_order(), p).0, p)).max().unwrap_or(0);
        return Ok((h, gamma));
    }
    let mut best: Option<(u32, RadicalMonomial)> = None;
    for a in poles {
        let h = h_alpha(a, poles, p)?;
        // ties go to the least monomial; poles are visited in increasing order
        if best.as_ref().is_none_or(|(bh, _)| h > *bh) {
            best = Some((h, a.clone()));
        }
    }
    best.ok_or(Error::EmptySupport)
}

pub fn dispersion(pf: &PartialFraction, id: &TreeId, p: u64) -> Result<Dispersion> {
    let poles = support(pf, id, p)?;
    if id.is_torsion() && poles.iter().any(|a| split_p_part(a.torsion_order(), p).0 == 1) {
        return Ok(Dispersion::Infinite);
    }
    let (h, _) = height_of_set(&poles, id, p)?;
    let set: BTreeSet<&RadicalMonomial> = poles.iter().collect();
    let mut d = 0;
    for a in &poles {
        for t in (d + 1)..=h {
            if set.contains(&a.pow_p(p, t)) {
                d = t;
            }
        }
    }
    Ok(Dispersion::Finite(d))
}

pub fn dispersion_at_infinity(fl: &LaurentPoly, p: u64) -> Result<u32> {
    if fl.is_zero() {
        return Err(Error::EmptySupport);
    }
    let mut d = 0;
    for &i in fl.terms().keys() {
        if i == 0 {
            continue;
        }
        let mut j = i;
        let mut t = 0;
        while let Some(next) = j.checked_mul(p as i64) {
            if next.unsigned_abs() > fl.terms().keys().map(|k| k.unsigned_abs()).max().unwrap() {
                break;
            }
            j = next;
            t += 1;
            if fl.terms().contains_key(&j) {
                d = d.max(t);
            }
        }
    }
    Ok(d)
}

/// `β_h(γ)` listed by increasing `n`, then `i`, duplicates removed.
pub fn bouquet(gamma: &RadicalMonomial, h: u32, p: u64) -> Vec<RadicalMonomial> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for n in 0..=h {
        let base = gamma.pow_p(p, h - n);
        let q = pow_u64(p, n);
        for i in 0..q {
            let a = RadicalMonomial::root_of_unity(q, i as i64).mul(&base);
            if seen.insert(a.clone()) {
                out.push(a);
            }
        }
    }
    out
}

/// Coefficients of one tree, addressed relative to `γ`.
///
/// `coeffs[k-1][n][i][ℓ]` holds `c_γ(k,n,i)` (non-torsion, `ℓ = 0` only) or
/// `d_γ(k,n,i,ℓ)` (torsion); unused slots are zero.
#[derive(Clone, Debug)]
pub struct TreeData {
    pub id: TreeId,
    pub gamma: RadicalMonomial,
    pub h: u32,
    pub m: usize,
    /// Cycle length; 0 for non-torsion trees.
    pub e: u64,
    pub p: u64,
    pub coeffs: Vec<Vec<Vec<Vec<Scalar>>>>,
    /// Radical of the working field.
    pub radical: Option<Radical>,
}

/// A pole position `(n, i, ℓ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Address {
    pub n: u32,
    pub i: u64,
    pub l: u64,
}

impl TreeData {
    pub fn is_torsion(&self) -> bool {
        self.e > 0
    }

    /// Number of `ℓ` slots.
    pub fn cycle_slots(&self) -> usize {
        self.e.max(1) as usize
    }

    /// `ζ_{p^n}^i γ^{p^{h−n}}` or `ζ_{p^n}^i γ^{p^{(ℓ−n) mod e}}`.
    pub fn pole(&self, a: Address) -> RadicalMonomial {
        pole_at(&self.gamma, self.h, self.e, self.p, a)
    }

    /// Valid addresses at level `n`.
    pub fn addresses(&self, n: u32) -> Vec<Address> {
        level_addresses(self.e, self.p, n)
    }

    pub fn coeff(&self, k: usize, a: Address) -> &Scalar {
        &self.coeffs[k - 1][a.n as usize][a.i as usize][a.l as usize]
    }

    pub fn address_of(&self, alpha: &RadicalMonomial) -> Result<Address> {
        address(alpha, &self.gamma, self.h, self.e, self.p)
    }

    /// The partial fraction encoded by the table.
    pub fn to_partial_fraction(&self) -> PartialFraction {
        let mut pf = PartialFraction::zero();
        for n in 0..=self.h {
            for a in self.addresses(n) {
                let alpha = self.pole(a);
                for k in 1..=self.m {
                    pf.add_term(&alpha, k, self.coeff(k, a));
                }
            }
        }
        pf
    }
}

pub(crate) fn pole_at(gamma: &RadicalMonomial, h: u32, e: u64, p: u64, a: Address) -> RadicalMonomial {
    let q = pow_u64(p, a.n);
    let z = RadicalMonomial::root_of_unity(q, a.i as i64);
    if e == 0 {
        z.mul(&gamma.pow_p(p, h - a.n))
    } else {
        let t = (a.l as i64 - a.n as i64).rem_euclid(e as i64) as u32;
        z.mul(&gamma.pow_p(p, t))
    }
}

pub(crate) fn level_addresses(e: u64, p: u64, n: u32) -> Vec<Address> {
    let q = pow_u64(p, n);
    let mut out = Vec::new();
    if e == 0 {
        for i in 0..q {
            out.push(Address { n, i, l: 0 });
        }
    } else {
        for i in 0..q {
            if n > 0 && i % p == 0 {
                continue;
            }
            for l in 0..e {
                out.push(Address { n, i, l });
            }
        }
    }
    out
}

fn address_failure(alpha: &RadicalMonomial, gamma: &RadicalMonomial) -> Error {
    Error::AddressFailure(format!("{alpha} relative to {gamma}"))
}

/// The unique address of `α` relative to `(γ, h, e)`.
pub fn address(alpha: &RadicalMonomial, gamma: &RadicalMonomial, h: u32, e: u64, p: u64) -> Result<Address> {
    if e == 0 {
        let top = gamma.pow_p(p, h);
        let n = (0..=h).find(|&n| alpha.pow_p(p, n) == top).ok_or_else(|| address_failure(alpha, gamma))?;
        let q = alpha.div(&gamma.pow_p(p, h - n));
        let i = zeta_index(&q, pow_u64(p, n)).ok_or_else(|| address_failure(alpha, gamma))?;
        return Ok(Address { n, i, l: 0 });
    }
    if !alpha.is_torsion() {
        return Err(address_failure(alpha, gamma));
    }
    let n = p_power_cover(split_p_part(alpha.torsion_order(), p).0, p);
    let top = alpha.pow_p(p, n);
    let l = (0..e).find(|&l| gamma.pow_p(p, l as u32) == top).ok_or_else(|| address_failure(alpha, gamma))?;
    let t = (l as i64 - n as i64).rem_euclid(e as i64) as u32;
    let q = alpha.div(&gamma.pow_p(p, t));
    let i = zeta_index(&q, pow_u64(p, n)).ok_or_else(|| address_failure(alpha, gamma))?;
    if n > 0 && i % p == 0 {
        return Err(address_failure(alpha, gamma));
    }
    Ok(Address { n, i, l })
}

/// `i` with `q = ζ_Q^i`, if `q` is such a root of unity.
fn zeta_index(q: &RadicalMonomial, big_q: u64) -> Option<u64> {
    if !q.is_torsion() || big_q % q.torsion_order() != 0 {
        return None;
    }
    Some(q.torsion_exp() * (big_q / q.torsion_order()))
}

/// Builds the coefficient table of tree `id` from the partial fraction of `f`.
pub fn address_poles(pf: &PartialFraction, id: &TreeId, gamma: &RadicalMonomial, h: u32, e: u64, p: u64) -> Result<TreeData> {
    let poles = support(pf, id, p)?;
    let m = poles.iter().map(|a| pf.order_at(a)).max().unwrap_or(0);
    let slots = e.max(1) as usize;
    let mut coeffs = vec![
        (0..=h).map(|n| vec![vec![Scalar::zero(); slots]; pow_u64(p, n) as usize]).collect::<Vec<_>>();
        m
    ];
    let mut radical = gamma.natural_radical();
    for a in &poles {
        let addr = address(a, gamma, h, e, p)?;
        for k in 1..=pf.order_at(a) {
            let c = pf.coeff(a, k);
            radical = join_radicals(radical.as_ref(), c.radical())?;
            coeffs[k - 1][addr.n as usize][addr.i as usize][addr.l as usize] = c;
        }
    }
    Ok(TreeData { id: id.clone(), gamma: gamma.clone(), h, m, e, p, coeffs, radical })
}

/// Height, γ and addressing in one step.
pub fn tree_data(pf: &PartialFraction, id: &TreeId, p: u64) -> Result<TreeData> {
    let (h, gamma) = height(pf, id, p)?;
    let e = if id.is_torsion() { cycle_of(id, p)?.e } else { 0 };
    address_poles(pf, id, &gamma, h, e, p)
}

/// Checks that every radical exponent denominator of `α` divides a power of `p`.
pub fn check_p_adic(alpha: &RadicalMonomial, p: u64) -> Result<()> {
    if alpha.is_p_adic(p) {
        Ok(())
    } else {
        Err(Error::UnsupportedDenominator(format!(
            "pole {alpha} involves a root of index {} that does not divide a power of p = {p}",
            alpha.radical_denominator().to_u64().unwrap_or(0)
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat_int;

    fn q(v: i64) -> RadicalMonomial {
        RadicalMonomial::from_rational(&rat_int(v))
    }

    fn z(n: u64, a: i64) -> RadicalMonomial {
        RadicalMonomial::root_of_unity(n, a)
    }

    #[test]
    fn tree_ids() {
        let cbrt2 = q(2).principal_root(3);
        assert_eq!(tree_of(&q(8), 3), tree_of(&q(2), 3));
        assert_eq!(tree_of(&z(3, 1).mul(&cbrt2), 3), tree_of(&q(2), 3));
        assert_ne!(tree_of(&q(2), 3), tree_of(&q(3), 3));
        assert_eq!(tree_of(&z(12, 1), 3), tree_of(&z(4, 1), 3));
        assert_eq!(tree_of(&z(4, 3), 3), tree_of(&z(4, 1), 3));
        assert_eq!(tree_of(&q(-2), 3), tree_of(&q(-8), 3));
        assert_eq!(tree_of(&q(4), 2), tree_of(&q(2), 2));
        assert_eq!(tree_of(&q(-2), 2), tree_of(&q(4), 2));
        for t in 0..4 {
            let a = z(7, 3).mul(&q(5).principal_root(9));
            assert_eq!(tree_of(&a.pow_p(3, t), 3), tree_of(&a, 3));
        }
    }

    #[test]
    fn cycles() {
        let c = cycle_of(&tree_of(&z(4, 1), 3), 3).unwrap();
        assert_eq!((c.e, c.gamma.clone()), (2, z(4, 1)));
        let c = cycle_of(&tree_of(&q(1), 5), 5).unwrap();
        assert_eq!((c.e, c.gamma.is_one()), (1, true));
        let c = cycle_of(&tree_of(&z(7, 2), 2), 2).unwrap();
        assert_eq!((c.e, c.gamma.clone()), (3, z(7, 1)));
    }

    fn pf_of(poles: &[RadicalMonomial]) -> PartialFraction {
        let mut pf = PartialFraction::zero();
        for a in poles {
            pf.add_term(a, 1, &Scalar::from_int(1));
        }
        pf
    }

    #[test]
    fn heights_and_dispersion() {
        let cbrt2 = q(2).principal_root(3);
        let sing: Vec<_> = (0..3).map(|i| z(3, i).mul(&cbrt2)).chain([q(2)]).collect();
        let pf = pf_of(&sing);
        let id = tree_of(&q(2), 3);
        assert_eq!(height(&pf, &id, 3).unwrap(), (1, cbrt2.clone()));
        assert_eq!(dispersion(&pf, &id, 3).unwrap(), Dispersion::Finite(1));
        assert_eq!(height(&pf_of(&[q(2)]), &id, 3).unwrap(), (0, q(2)));
        assert_eq!(dispersion(&pf_of(&[q(2), q(8)]), &id, 3).unwrap(), Dispersion::Finite(1));
        assert_eq!(dispersion(&pf_of(&[q(2)]), &id, 3).unwrap(), Dispersion::Finite(0));
        assert!(matches!(dispersion(&pf_of(&[q(3)]), &id, 3), Err(Error::TreeNotInSupport(_))));

        let sing: Vec<_> = [z(4, 1), z(4, 3), z(12, 1), z(12, 5), z(12, 7), z(12, 11)].into();
        let tid = tree_of(&z(4, 1), 3);
        assert_eq!(height(&pf_of(&sing), &tid, 3).unwrap().0, 1);
        assert_eq!(dispersion(&pf_of(&sing), &tid, 3).unwrap(), Dispersion::Infinite);
    }

    #[test]
    fn infinity_dispersion() {
        let c = |v| Scalar::from_int(v);
        assert_eq!(dispersion_at_infinity(&LaurentPoly::from_terms([(0, c(5))]), 3).unwrap(), 0);
        assert_eq!(dispersion_at_infinity(&LaurentPoly::from_terms([(2, c(1)), (1, c(-1))]), 2).unwrap(), 1);
        assert_eq!(dispersion_at_infinity(&LaurentPoly::from_terms([(1, c(1)), (5, c(1))]), 3).unwrap(), 0);
        assert_eq!(dispersion_at_infinity(&LaurentPoly::from_terms([(-1, c(1)), (-9, c(1))]), 3).unwrap(), 2);
        assert!(dispersion_at_infinity(&LaurentPoly::zero(), 3).is_err());
    }

    #[test]
    fn bouquets_and_addresses() {
        let cbrt2 = q(2).principal_root(3);
        let b = bouquet(&cbrt2, 1, 3);
        assert_eq!(b.len(), 4);
        assert_eq!(b[0], q(2));
        assert_eq!(bouquet(&q(5), 0, 2), vec![q(5)]);
        assert_eq!(bouquet(&z(4, 1), 1, 3).len(), 4);
        assert_eq!(address(&q(2), &cbrt2, 1, 0, 3).unwrap(), Address { n: 0, i: 0, l: 0 });
        assert_eq!(address(&z(3, 2).mul(&cbrt2), &cbrt2, 1, 0, 3).unwrap(), Address { n: 1, i: 2, l: 0 });

        let g = z(4, 1);
        for a in [z(12, 1), z(12, 5), z(12, 7), z(12, 11), z(4, 1), z(4, 3)] {
            let ad = address(&a, &g, 1, 2, 3).unwrap();
            assert_eq!(pole_at(&g, 1, 2, 3, ad), a);
        }
        let ad = address(&z(12, 7), &g, 1, 2, 3).unwrap();
        assert_eq!(ad.n, 1);
        assert_eq!(address(&g, &g, 0, 2, 3).unwrap(), Address { n: 0, i: 0, l: 0 });
    }

    #[test]
    fn table_round_trip() {
        let cbrt2 = q(2).principal_root(3);
        let sing: Vec<_> = (0..3).map(|i| z(3, i).mul(&cbrt2)).chain([q(2)]).collect();
        let pf = pf_of(&sing);
        let td = tree_data(&pf, &tree_of(&q(2), 3), 3).unwrap();
        assert_eq!(td.to_partial_fraction(), pf);
    }
}
