use std::collections::BTreeMap;

use super::infinity::{dres_infinity, reduce_infinity, ResidueAtInfinity};
use super::tree::{reduce_tree, TreeResidues};
use super::verify::delta_pf;
use crate::error::{Error, FieldError, Result};
use crate::field::Radical;
use crate::ratfun::{find_poles, join_lt, joint_radical, partial_fractions, recombine, split_lt, LaurentPoly, PartialFraction, RationalFunction};
use crate::structure::{check_p_adic, split_by_tree, tree_data, TreeData, TreeId};
use crate::vcoeffs::table;
use crate::Scalar;

/// A Laurent polynomial plus per-tree partial fractions.
///
/// Trees may live over different radicals, so the sum is only collapsed into
/// a single rational function on request.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Decomposition {
    pub laurent: LaurentPoly,
    pub trees: BTreeMap<TreeId, PartialFraction>,
}

impl Decomposition {
    pub fn is_zero(&self) -> bool {
        self.laurent.is_zero() && self.trees.values().all(PartialFraction::is_zero)
    }

    pub fn proper_part(&self) -> PartialFraction {
        self.trees.values().fold(PartialFraction::zero(), |acc, pf| acc.add(pf))
    }

    pub fn neg(&self) -> Self {
        Decomposition {
            laurent: self.laurent.neg(),
            trees: self.trees.iter().map(|(k, v)| (k.clone(), v.neg())).collect(),
        }
    }

    /// Common radical of all coefficients and poles.
    pub fn radical(&self) -> std::result::Result<Option<Radical>, FieldError> {
        let pf = self.proper_part();
        let rads: Vec<Option<Radical>> = self
            .laurent
            .terms()
            .values()
            .map(|c| c.radical().cloned())
            .chain(pf.terms().keys().map(|a| a.natural_radical()))
            .chain(pf.terms().values().flatten().map(|c| c.radical().cloned()))
            .collect();
        joint_radical(rads.iter().map(Option::as_ref))
    }

    pub fn to_rational_function(&self) -> std::result::Result<RationalFunction, FieldError> {
        self.radical()?;
        join_lt(&self.laurent, &recombine(&self.proper_part())?)
    }

    /// A parseable rendering: the Laurent part followed by the partial
    /// fractions of each tree.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        if !self.laurent.is_zero() {
            parts.push(self.laurent.render());
        }
        for pf in self.trees.values().filter(|pf| !pf.is_zero()) {
            parts.push(pf.render());
        }
        let mut out = String::new();
        for part in parts {
            match part.strip_prefix('-') {
                Some(rest) if !out.is_empty() => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                _ if !out.is_empty() => {
                    out.push_str(" + ");
                    out.push_str(&part);
                }
                _ => out.push_str(&part),
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

/// How the identity `f̄ = f + Δ(g)` was checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerificationRoute {
    /// As single rational functions.
    Rational,
    /// Tree by tree in partial-fraction coordinates (parts not in one field).
    PerTree,
}

#[derive(Clone, Debug)]
pub struct MahlerReport {
    pub p: u64,
    pub input: RationalFunction,
    pub laurent_part: LaurentPoly,
    /// Partial fraction of the proper part, grouped by tree.
    pub proper_part: BTreeMap<TreeId, PartialFraction>,
    pub summable: bool,
    pub residues_at_infinity: ResidueAtInfinity,
    pub tree_residues: Vec<TreeResidues>,
    pub tree_data: BTreeMap<TreeId, TreeData>,
    /// `f̄`.
    pub remainder: Decomposition,
    /// `g` with `f̄ = f + Δ(g)`.
    pub certificate: Decomposition,
    /// `−g` when `f` is summable, so that `f = Δ(−g)`.
    pub solution: Option<Decomposition>,
}

fn verification(msg: String) -> Error {
    Error::Verification(msg)
}

/// Runs the full reduction of `f` and decides summability.
pub fn mahler_report(f: &RationalFunction, p: u64) -> Result<MahlerReport> {
    if p < 2 {
        return Err(Error::InvalidArgument("p must be ≥ 2".into()));
    }
    let (fl, ft) = split_lt(f)?;
    let residues_at_infinity = dres_infinity(&fl, p);
    let (fl_bar, gl) = reduce_infinity(&fl, p);

    let pf = if ft.is_zero() {
        PartialFraction::zero()
    } else {
        let poles = find_poles(ft.den(), ft.hints())?;
        for (a, _) in &poles {
            check_p_adic(a, p)?;
        }
        partial_fractions(&ft, &poles)?
    };
    let proper_part = split_by_tree(&pf, p);
    let vt = table(p, pf.max_order().max(1));

    let mut remainder = Decomposition { laurent: fl_bar, trees: BTreeMap::new() };
    let mut certificate = Decomposition { laurent: gl, trees: BTreeMap::new() };
    let mut tree_residues = Vec::new();
    let mut datas = BTreeMap::new();
    for (id, part) in &proper_part {
        let data = tree_data(part, id, p)?;
        let red = reduce_tree(&data, &vt)?;
        remainder.trees.insert(id.clone(), red.remainder);
        certificate.trees.insert(id.clone(), red.certificate);
        tree_residues.push(red.residues);
        datas.insert(id.clone(), data);
    }
    let summable = remainder.is_zero();
    let report = MahlerReport {
        p,
        input: f.clone(),
        laurent_part: fl,
        proper_part,
        summable,
        residues_at_infinity,
        tree_residues,
        tree_data: datas,
        solution: summable.then(|| certificate.neg()),
        remainder,
        certificate,
    };
    report.verify_per_tree()?;
    Ok(report)
}

impl MahlerReport {
    /// `f_L + Δ(g_L) = f̄_L` and `f_τ + Δ(g_τ) = f̄_τ` for every tree.
    pub fn verify_per_tree(&self) -> Result<()> {
        let lhs = self.laurent_part.add(&self.certificate.laurent.delta(self.p));
        if lhs != self.remainder.laurent {
            return Err(verification("Laurent part: f̄_L ≠ f_L + Δ(g_L)".into()));
        }
        for (id, ftau) in &self.proper_part {
            let g = self.certificate.trees.get(id).cloned().unwrap_or_default();
            let fbar = self.remainder.trees.get(id).cloned().unwrap_or_default();
            let lhs = ftau.add(&delta_pf(&g, self.p)?);
            if lhs != fbar {
                return Err(verification(format!("tree {id}: f̄_τ ≠ f_τ + Δ(g_τ)")));
            }
        }
        Ok(())
    }

    /// Rechecks `f̄ = f + Δ(g)` (and `f = Δ(solution)` when summable) on whole
    /// rational functions when all parts share one field, else tree by tree.
    pub fn verify_exact(&self) -> Result<VerificationRoute> {
        let (fbar, g) = match (self.remainder.to_rational_function(), self.certificate.to_rational_function()) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(FieldError::Incompatible(_)), _) | (_, Err(FieldError::Incompatible(_))) => {
                self.verify_per_tree()?;
                return Ok(VerificationRoute::PerTree);
            }
            (Err(e), _) | (_, Err(e)) => return Err(e.into()),
        };
        if g.radical_compatible(&self.input).is_err() || fbar.radical_compatible(&self.input).is_err() {
            self.verify_per_tree()?;
            return Ok(VerificationRoute::PerTree);
        }
        let rhs = self.input.add(&g.delta(self.p)?)?;
        if rhs != fbar {
            return Err(verification("f̄ ≠ f + Δ(g)".into()));
        }
        if let Some(sol) = &self.solution {
            let s = sol.to_rational_function()?;
            if s.delta(self.p)? != self.input {
                return Err(verification("Δ(solution) ≠ f".into()));
            }
        }
        Ok(VerificationRoute::Rational)
    }

    /// Residue data by tree.
    pub fn residues_for(&self, id: &TreeId) -> Option<&TreeResidues> {
        self.tree_residues.iter().find(|r| &r.id == id)
    }

    /// All residues vanish.
    pub fn residues_vanish(&self) -> bool {
        self.residues_at_infinity.is_empty() && self.tree_residues.iter().all(TreeResidues::is_zero)
    }

    /// Every tree remainder is supported where the residue definitions allow.
    pub fn respects_height_restriction(&self) -> bool {
        self.tree_residues.iter().all(|r| r.respects_height_restriction(self.p))
    }
}

/// Convenience: a scalar residue at infinity for trajectory `theta`.
pub fn residue_at_infinity(r: &ResidueAtInfinity, theta: i64) -> Scalar {
    r.get(&theta).cloned().unwrap_or_else(|| Scalar::from_int(0))
}
