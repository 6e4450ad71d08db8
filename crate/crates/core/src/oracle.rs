//! An independent summability decision: solve `Δ(g) = f` for `g` in a finite
//! ansatz by exact linear algebra.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{Field, Radical, RadicalMonomial};
use crate::linalg::solve;
use crate::ratfun::{find_poles, joint_radical, partial_fractions, split_lt, trajectory_components, LaurentPoly, PartialFraction, RationalFunction};
use crate::residues::{delta_pf, trajectory_height, Decomposition};
use crate::structure::{bouquet, check_p_adic, cycle_of, height, level_addresses, pole_at, split_by_tree, TreeId};
use crate::vcoeffs::{table, v_coeff_monomial};
use crate::Scalar;

/// Overrides for the ansatz; `None` means the bound derived from `f`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AnsatzBounds {
    /// Largest pole height of `g` inside each tree (default `h(f,τ) − 1`, floor 0).
    pub max_height: Option<u32>,
    /// Largest pole order of `g` (default: the largest order in the tree).
    pub max_order: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct OracleOutcome {
    /// `g` with `Δ(g) = f`, when one exists within the ansatz.
    pub solution: Option<Decomposition>,
    pub unknowns: usize,
    pub equations: usize,
}

/// Solution of `Δ(g) = f` within the ansatz, if any.
pub fn oracle_summable(f: &RationalFunction, p: u64, bounds: &AnsatzBounds) -> Result<Option<Decomposition>> {
    Ok(oracle(f, p, bounds)?.solution)
}

pub fn oracle(f: &RationalFunction, p: u64, bounds: &AnsatzBounds) -> Result<OracleOutcome> {
    if p < 2 {
        return Err(Error::InvalidArgument("p must be ≥ 2".into()));
    }
    let (fl, ft) = split_lt(f)?;
    let mut unknowns = 0;
    let mut equations = 0;
    let mut solvable = true;

    let mut gl = LaurentPoly::zero();
    for (theta, comp) in trajectory_components(&fl, p) {
        if theta == 0 {
            solvable = false;
            continue;
        }
        let h = trajectory_height(&comp, theta, p);
        let exps: Vec<i64> = (0..=h).map(|k| theta * (p as i64).pow(k)).collect();
        // Δ(x^{e_k}) = x^{e_{k+1}} − x^{e_k}
        let cols = h as usize;
        let a: Vec<Vec<Scalar>> = (0..=cols)
            .map(|row| {
                (0..cols)
                    .map(|col| {
                        if row == col + 1 {
                            Scalar::from_int(1)
                        } else if row == col {
                            Scalar::from_int(-1)
                        } else {
                            Scalar::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let b: Vec<Scalar> = exps.iter().map(|&e| comp.coeff(e)).collect();
        unknowns += cols;
        equations += cols + 1;
        match solve(&a, &b)? {
            Some(x) => {
                for (k, c) in x.iter().enumerate() {
                    gl.add_term(exps[k], c);
                }
            }
            None => solvable = false,
        }
    }

    let mut trees = BTreeMap::new();
    if !ft.is_zero() {
        let poles = find_poles(ft.den(), ft.hints())?;
        for (a, _) in &poles {
            check_p_adic(a, p)?;
        }
        let pf = partial_fractions(&ft, &poles)?;
        for (id, part) in split_by_tree(&pf, p) {
            let (sol, u, e) = solve_tree(&part, &id, p, bounds)?;
            unknowns += u;
            equations += e;
            match sol {
                Some(g) => {
                    trees.insert(id, g);
                }
                None => solvable = false,
            }
        }
    }
    let solution = solvable.then_some(Decomposition { laurent: gl, trees });
    if let Some(g) = &solution {
        witness_check(f, g, p)?;
    }
    Ok(OracleOutcome { solution, unknowns, equations })
}

fn ansatz_poles(part: &PartialFraction, id: &TreeId, p: u64, bounds: &AnsatzBounds) -> Result<Vec<RadicalMonomial>> {
    let (h, gamma) = height(part, id, p)?;
    let hh = bounds.max_height.unwrap_or(h.saturating_sub(1));
    if id.is_torsion() {
        let e = cycle_of(id, p)?.e;
        let mut out = Vec::new();
        for n in 0..=hh {
            for a in level_addresses(e, p, n) {
                out.push(pole_at(&gamma, hh, e, p, a));
            }
        }
        Ok(out)
    } else {
        Ok(bouquet(&gamma.pow_p(p, 1), hh, p))
    }
}

type Solved = (Option<PartialFraction>, usize, usize);

fn solve_tree(part: &PartialFraction, id: &TreeId, p: u64, bounds: &AnsatzBounds) -> Result<Solved> {
    let m = bounds.max_order.unwrap_or(part.max_order()).max(1);
    let betas = ansatz_poles(part, id, p, bounds)?;
    let vt = table(p, m);
    let rads: Vec<Option<Radical>> = betas
        .iter()
        .map(|b| b.natural_radical())
        .chain(part.terms().values().flatten().map(|c| c.radical().cloned()))
        .collect();
    let radical = joint_radical(rads.iter().map(Option::as_ref))?;

    let cols: Vec<(RadicalMonomial, usize)> = betas.iter().flat_map(|b| (1..=m).map(move |s| (b.clone(), s))).collect();
    // column images: Δ(1/(x−β)^s) = Σ_{α^p=β} Σ_{k≤s} V^s_k(α)/(x−α)^k − 1/(x−β)^s
    let mut rows: BTreeMap<(RadicalMonomial, usize), usize> = BTreeMap::new();
    let mut entries: Vec<Vec<((RadicalMonomial, usize), Scalar)>> = Vec::new();
    for (beta, s) in &cols {
        let mut col = Vec::new();
        for alpha in beta.roots(p) {
            let alpha_rad = joint_radical([radical.as_ref(), alpha.natural_radical().as_ref()])?;
            for k in 1..=*s {
                col.push(((alpha.clone(), k), v_coeff_monomial(&vt, &alpha, *s, k, alpha_rad.as_ref())?));
            }
        }
        col.push(((beta.clone(), *s), Scalar::from_int(-1)));
        for (key, _) in &col {
            let n = rows.len();
            rows.entry(key.clone()).or_insert(n);
        }
        entries.push(col);
    }
    let known: BTreeSet<&(RadicalMonomial, usize)> = rows.keys().collect();
    for (alpha, v) in part.terms() {
        for (k, c) in v.iter().enumerate() {
            if !c.is_zero() && !known.contains(&(alpha.clone(), k + 1)) {
                return Ok((None, cols.len(), rows.len()));
            }
        }
    }
    let mut a = vec![vec![Scalar::zero(); cols.len()]; rows.len()];
    for (j, col) in entries.iter().enumerate() {
        for (key, v) in col {
            let r = rows[key];
            a[r][j] = a[r][j].add_ref(v);
        }
    }
    let mut b = vec![Scalar::zero(); rows.len()];
    for ((alpha, k), &r) in &rows {
        b[r] = part.coeff(alpha, *k);
    }
    let sol = solve(&a, &b)?;
    let g = sol.map(|x| {
        let mut g = PartialFraction::zero();
        for ((beta, s), c) in cols.iter().zip(&x) {
            g.add_term(beta, *s, c);
        }
        g
    });
    Ok((g, cols.len(), rows.len()))
}

fn witness_check(f: &RationalFunction, g: &Decomposition, p: u64) -> Result<()> {
    let (fl, ft) = split_lt(f)?;
    if g.laurent.delta(p) != fl {
        return Err(Error::Verification("oracle witness: Δ(g_L) ≠ f_L".into()));
    }
    let mut dg = PartialFraction::zero();
    for part in g.trees.values() {
        dg = dg.add(&delta_pf(part, p)?);
    }
    let fpf = if ft.is_zero() {
        PartialFraction::zero()
    } else {
        let fp = find_poles(ft.den(), ft.hints())?;
        partial_fractions(&ft, &fp)?
    };
    if dg != fpf {
        return Err(Error::Verification("oracle witness: Δ(g_T) ≠ f_T".into()));
    }
    Ok(())
}
