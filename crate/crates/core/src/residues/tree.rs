use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::Result;
use crate::field::arith::pow_u64;
use crate::field::{Field, Radical, RadicalMonomial};
use crate::ratfun::PartialFraction;
use crate::structure::{level_addresses, pole_at, Address, TreeData, TreeId};
use crate::vcoeffs::{v_coeff_monomial, UniversalVTable};
use crate::Scalar;

/// Dense `[k-1][n][i][ℓ]` coefficient table.
pub type Table = Vec<Vec<Vec<Vec<Scalar>>>>;

/// An `m × e` table indexed `[k-1][ℓ]`.
pub type CyclicTable = Vec<Vec<Scalar>>;

fn zero_table(data: &TreeData) -> Table {
    let slots = data.cycle_slots();
    vec![(0..=data.h).map(|n| vec![vec![Scalar::zero(); slots]; pow_u64(data.p, n) as usize]).collect(); data.m]
}

fn v(table: &UniversalVTable, alpha: &RadicalMonomial, s: usize, k: usize, radical: Option<&Radical>) -> Result<Scalar> {
    Ok(v_coeff_monomial(table, alpha, s, k, radical)?)
}

/// One step of the recursion: `out(k,n,i,ℓ) = c(k,n,i,ℓ) + Σ_s V^s_k(pole)·prev(s,n−1,i mod p^{n−1},ℓ)`.
fn propagate(data: &TreeData, vt: &UniversalVTable, out: &mut Table, n: u32) -> Result<()> {
    let below = pow_u64(data.p, n - 1);
    for a in level_addresses(data.e, data.p, n) {
        let pole = pole_at(&data.gamma, data.h, data.e, data.p, a);
        let (ni, ii, li) = (a.n as usize, a.i as usize, a.l as usize);
        let prev = (ii as u64 % below) as usize;
        for k in 1..=data.m {
            let mut acc = data.coeffs[k - 1][ni][ii][li].clone();
            for s in k..=data.m {
                let below_c = &out[s - 1][ni - 1][prev][li];
                if !below_c.is_zero() {
                    acc = acc.add_ref(&v(vt, &pole, s, k, data.radical.as_ref())?.mul_ref(below_c));
                }
            }
            out[k - 1][ni][ii][li] = acc;
        }
    }
    Ok(())
}

/// `ĉ_γ(k,n,i)` for a non-torsion tree, `0 ≤ n ≤ h`.
pub fn hat_c(data: &TreeData, vt: &UniversalVTable) -> Result<Table> {
    assert!(!data.is_torsion());
    let mut out = zero_table(data);
    for k in 0..data.m {
        out[k][0] = data.coeffs[k][0].clone();
    }
    for n in 1..=data.h {
        propagate(data, vt, &mut out, n)?;
    }
    Ok(out)
}

fn cycle_point(gamma: &RadicalMonomial, p: u64, l: usize) -> RadicalMonomial {
    gamma.pow_p(p, l as u32)
}

/// `𝒟_γ^(m)`: `d_{k,ℓ} = c_{k,ℓ} − Σ_{s≥k} V^s_k(γ^{p^ℓ})·c_{s,ℓ+1}`.
pub fn cyclic_d(gamma: &RadicalMonomial, e: usize, vt: &UniversalVTable, c: &CyclicTable, radical: Option<&Radical>) -> Result<CyclicTable> {
    let m = c.len();
    let p = vt.p;
    let mut d = c.clone();
    for l in 0..e {
        let g = cycle_point(gamma, p, l);
        for k in 1..=m {
            for s in k..=m {
                let next = &c[s - 1][(l + 1) % e];
                if !next.is_zero() {
                    d[k - 1][l] = d[k - 1][l].sub_ref(&v(vt, &g, s, k, radical)?.mul_ref(next));
                }
            }
        }
    }
    Ok(d)
}

/// `𝓛_γ^(m) = (𝒟_γ^(m))^{-1}`, solved from the top order down; each order is
/// a cyclic system `c_ℓ − a_ℓ c_{ℓ+1} = rhs_ℓ` with `Π a_ℓ = p^{−ek} ≠ 1`.
pub fn cyclic_l(gamma: &RadicalMonomial, e: usize, vt: &UniversalVTable, d: &CyclicTable, radical: Option<&Radical>) -> Result<CyclicTable> {
    let m = d.len();
    let p = vt.p;
    let points: Vec<RadicalMonomial> = (0..e).map(|l| cycle_point(gamma, p, l)).collect();
    let mut c = vec![vec![Scalar::zero(); e]; m];
    for k in (1..=m).rev() {
        let mut rhs = Vec::with_capacity(e);
        let mut a = Vec::with_capacity(e);
        for l in 0..e {
            let mut r = d[k - 1][l].clone();
            for s in (k + 1)..=m {
                let next = &c[s - 1][(l + 1) % e];
                if !next.is_zero() {
                    r = r.add_ref(&v(vt, &points[l], s, k, radical)?.mul_ref(next));
                }
            }
            rhs.push(r);
            a.push(v(vt, &points[l], k, k, radical)?);
        }
        let mut weight = Scalar::one();
        let mut acc = Scalar::zero();
        for l in 0..e {
            acc = acc.add_ref(&weight.mul_ref(&rhs[l]));
            weight = weight.mul_ref(&a[l]);
        }
        let c0 = acc.try_div(&Scalar::one().sub_ref(&weight))?;
        c[k - 1][0] = c0;
        for l in (1..e).rev() {
            let next = c[k - 1][(l + 1) % e].clone();
            c[k - 1][l] = rhs[l].add_ref(&a[l].mul_ref(&next));
        }
    }
    Ok(c)
}

fn cyclic_slice(t: &Table, n: usize, i: usize) -> CyclicTable {
    t.iter().map(|per_k| per_k[n][i].clone()).collect()
}

/// `d̂_γ(k,n,i,ℓ)` for a torsion tree; level 0 is the 𝓛-image of the cycle coefficients.
pub fn hat_d(data: &TreeData, vt: &UniversalVTable) -> Result<Table> {
    assert!(data.is_torsion());
    let mut out = zero_table(data);
    let e = data.e as usize;
    let base = cyclic_l(&data.gamma, e, vt, &cyclic_slice(&data.coeffs, 0, 0), data.radical.as_ref())?;
    for k in 0..data.m {
        out[k][0][0] = base[k].clone();
    }
    for n in 1..=data.h {
        propagate(data, vt, &mut out, n)?;
    }
    Ok(out)
}

/// `dres(f, τ, k)` for one tree, with the data used to locate it.
#[derive(Clone, Debug)]
pub struct TreeResidues {
    pub id: TreeId,
    pub gamma: RadicalMonomial,
    pub h: u32,
    pub e: u64,
    pub m: usize,
    /// `k ↦ (pole ↦ residue)`, nonzero entries only.
    pub residues: BTreeMap<usize, BTreeMap<RadicalMonomial, Scalar>>,
    /// `c_γ(k,ℓ) = 𝓛(d_γ(k,0,0,ℓ))` for torsion trees.
    pub cycle_image: Option<CyclicTable>,
    /// The diagnostic `ǧ` of a torsion tree of height 0.
    pub check_certificate: Option<PartialFraction>,
}

impl TreeResidues {
    pub fn is_zero(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn get(&self, k: usize, alpha: &RadicalMonomial) -> Scalar {
        self.residues.get(&k).and_then(|r| r.get(alpha)).cloned().unwrap_or_else(Scalar::zero)
    }

    /// True when every nonzero residue sits where the residue definitions allow.
    pub fn respects_height_restriction(&self, p: u64) -> bool {
        self.residues.values().flat_map(|r| r.keys()).all(|alpha| {
            match crate::structure::address(alpha, &self.gamma, self.h, self.e, p) {
                Ok(a) => a.n == self.h && (self.e == 0 || self.h == 0 || a.i % p != 0),
                Err(_) => false,
            }
        })
    }
}

/// Result of reducing one tree component.
#[derive(Clone, Debug)]
pub struct TreeReduction {
    pub remainder: PartialFraction,
    pub certificate: PartialFraction,
    pub residues: TreeResidues,
}

fn pf_from_level(data: &TreeData, t: &Table, n: u32, pf: &mut PartialFraction) {
    for a in level_addresses(data.e, data.p, n) {
        let alpha = data.pole(a);
        for k in 1..=data.m {
            pf.add_term(&alpha, k, &t[k - 1][a.n as usize][a.i as usize][a.l as usize]);
        }
    }
}

/// `(f̄_τ, g_τ)` with `f̄_τ = f_τ + Δ(g_τ)` and the residues of `f` at `τ`.
pub fn reduce_tree(data: &TreeData, vt: &UniversalVTable) -> Result<TreeReduction> {
    let mut remainder = PartialFraction::zero();
    let mut certificate = PartialFraction::zero();
    let mut cycle_image = None;
    let mut check_certificate = None;
    if data.is_torsion() && data.h == 0 {
        let e = data.e as usize;
        let c = cyclic_l(&data.gamma, e, vt, &cyclic_slice(&data.coeffs, 0, 0), data.radical.as_ref())?;
        let mut g = PartialFraction::zero();
        for (k, row) in c.iter().enumerate() {
            for (l, x) in row.iter().enumerate() {
                g.add_term(&data.pole(Address { n: 0, i: 0, l: l as u64 }), k + 1, x);
            }
        }
        cycle_image = Some(c);
        check_certificate = Some(g);
        pf_from_level(data, &data.coeffs, 0, &mut remainder);
    } else {
        let t = if data.is_torsion() { hat_d(data, vt)? } else { hat_c(data, vt)? };
        if data.is_torsion() {
            cycle_image = Some(cyclic_slice(&t, 0, 0));
        }
        for n in 0..data.h {
            pf_from_level(data, &t, n, &mut certificate);
        }
        pf_from_level(data, &t, data.h, &mut remainder);
    }
    let mut residues: BTreeMap<usize, BTreeMap<RadicalMonomial, Scalar>> = BTreeMap::new();
    for (alpha, v) in remainder.terms() {
        for (k, c) in v.iter().enumerate() {
            if !c.is_zero() {
                residues.entry(k + 1).or_default().insert(alpha.clone(), c.clone());
            }
        }
    }
    let residues = TreeResidues {
        id: data.id.clone(),
        gamma: data.gamma.clone(),
        h: data.h,
        e: data.e,
        m: data.m,
        residues,
        cycle_image,
        check_certificate,
    };
    Ok(TreeReduction { remainder, certificate, residues })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, rat_int};
    use crate::vcoeffs::table;

    fn z(n: u64, a: i64) -> Scalar {
        Scalar::zeta_pow(n, a)
    }

    #[test]
    fn paper_cyclic_step() {
        let vt = table(3, 2);
        let g = RadicalMonomial::root_of_unity(4, 1);
        let d = vec![vec![z(4, 3).scale_rational(&rat(1, 6)), z(4, 1).scale_rational(&rat(1, 6))]];
        let c = cyclic_l(&g, 2, &vt, &d, None).unwrap();
        assert_eq!(c, vec![vec![z(4, 3).scale_rational(&rat(1, 4)), z(4, 1).scale_rational(&rat(1, 4))]]);
        assert_eq!(cyclic_d(&g, 2, &vt, &c, None).unwrap(), d);
    }

    #[test]
    fn trivial_cycle() {
        let vt = table(5, 1);
        let one = RadicalMonomial::one();
        let c = vec![vec![Scalar::from_int(7)]];
        let d = cyclic_d(&one, 1, &vt, &c, None).unwrap();
        assert_eq!(d[0][0], Scalar::rational(rat(28, 5)));
        assert_eq!(cyclic_l(&one, 1, &vt, &d, None).unwrap(), c);
        let zero = vec![vec![Scalar::zero(); 3]; 2];
        assert_eq!(cyclic_l(&one, 3, &vt, &zero, None).unwrap(), zero);
        let _ = rat_int(0);
    }
}
