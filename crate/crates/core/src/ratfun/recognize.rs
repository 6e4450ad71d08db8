//! Locating the poles of a denominator as radical monomials.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{render_poly, ScalarPoly};
use crate::error::{Error, FieldError};
use crate::field::arith::{divisors, euler_phi, factor_u64, gcd};
use crate::field::{Field, Radical, RadicalMonomial};
use crate::poly::Poly;
use crate::Scalar;

/// Common radical of a family of elements, or `Incompatible`.
pub fn joint_radical<'a>(radicals: impl IntoIterator<Item = Option<&'a Radical>>) -> Result<Option<Radical>, FieldError> {
    let mut acc: Option<Radical> = None;
    for r in radicals {
        acc = crate::field::tower::join_radicals(acc.as_ref(), r)?;
    }
    Ok(acc)
}

fn poly_radical(p: &ScalarPoly) -> Result<Option<Radical>, FieldError> {
    joint_radical(p.coeffs().iter().map(|c| c.radical()))
}

/// Roots of `den` with multiplicities, as monomials.
///
/// Candidates come first from `hints`, then from binomial, cyclotomic and
/// rational factors peeled off `den`. Multiplicities are always measured on
/// `den` itself, so a candidate over a larger radical never drags the
/// working polynomial out of its coefficient field.
pub fn find_poles(den: &ScalarPoly, hints: &BTreeSet<RadicalMonomial>) -> Result<Vec<(RadicalMonomial, u32)>, Error> {
    let deg = den.deg0() as u32;
    let base = poly_radical(den)?;
    let mut found: BTreeMap<RadicalMonomial, u32> = BTreeMap::new();
    let try_root = |alpha: RadicalMonomial, found: &mut BTreeMap<RadicalMonomial, u32>| {
        if found.contains_key(&alpha) {
            return;
        }
        let Ok(rad) = joint_radical([base.as_ref(), alpha.natural_radical().as_ref()]) else { return };
        let Ok(v) = alpha.value_with(rad.as_ref()) else { return };
        let (m, _) = den.root_multiplicity(&v);
        if m > 0 {
            found.insert(alpha, m);
        }
    };
    for alpha in hints {
        try_root(alpha.clone(), &mut found);
    }
    let mut rest = den.clone();
    let mut count = found.values().sum::<u32>();
    while count < deg {
        let cands = peel(&mut rest)?;
        if cands.is_empty() {
            break;
        }
        for alpha in cands {
            try_root(alpha, &mut found);
        }
        count = found.values().sum();
    }
    if count != deg {
        return Err(Error::UnsupportedDenominator(format!(
            "cannot locate the roots of {} as roots of unity times radicals",
            render_poly(&rest)
        )));
    }
    Ok(found.into_iter().collect())
}

fn divide_out(rest: &mut ScalarPoly, phi: &ScalarPoly) -> Result<(), Error> {
    while let Some(q) = rest.exact_div(phi)? {
        *rest = q;
    }
    Ok(())
}

/// Candidate roots from the recognizable factors of `rest`; each factor is
/// divided out, which keeps `rest` over its own coefficient field.
fn peel(rest: &mut ScalarPoly) -> Result<Vec<RadicalMonomial>, Error> {
    let mut out = Vec::new();
    if rest.is_constant() {
        return Ok(out);
    }
    for (s, _) in rest.squarefree()? {
        for (phi, roots) in factors(&s)? {
            divide_out(rest, &phi)?;
            out.extend(roots);
        }
    }
    Ok(out)
}

/// Binomial, rational-linear and cyclotomic factors of a squarefree `s`,
/// each with its roots. If none is visible and `s = t(x^d)`, the factors of
/// `t` are pulled back along `x ↦ x^d`.
fn factors(s: &ScalarPoly) -> Result<Vec<(ScalarPoly, Vec<RadicalMonomial>)>, Error> {
    let nz: Vec<usize> = (0..s.coeffs().len()).filter(|&i| !s.coeffs()[i].is_zero()).collect();
    if nz[0] > 0 {
        return Err(Error::UnsupportedDenominator("pole at 0 in a proper part".into()));
    }
    let mut out = Vec::new();
    if nz.len() == 2 {
        // x^d + c0 (monic)
        if let Some(beta) = RadicalMonomial::from_element(&s.coeff(0).neg_ref()) {
            out.push((s.clone(), beta.roots(s.deg0() as u64)));
            return Ok(out);
        }
    }
    if let Some(q) = rational_poly(s) {
        for r in rational_roots(&q) {
            out.push((Poly::linear(&r.value()), vec![r]));
        }
        for (d, roots) in cyclotomic_roots(&q) {
            out.push((Poly::new(cyclotomic_coeffs(d).into_iter().map(Scalar::from_int).collect()), roots));
        }
    }
    let d = nz.iter().fold(0, |g, &i| gcd(g as u64, i as u64) as usize);
    if out.is_empty() && d > 1 {
        let t = Poly::new(s.coeffs().iter().step_by(d).cloned().collect());
        for (phi, roots) in factors(&t)? {
            out.push((phi.compose_pow(d), roots.iter().flat_map(|b| b.roots(d as u64)).collect()));
        }
    }
    Ok(out)
}

fn rational_poly(s: &ScalarPoly) -> Option<Vec<BigRational>> {
    s.coeffs().iter().map(|c| c.as_rational().cloned()).collect()
}

fn int_poly_eval_zero(coeffs: &[BigRational], phi: &[i64]) -> bool {
    let p: Poly<BigRational> = Poly::new(coeffs.to_vec());
    let d: Poly<BigRational> = Poly::new(phi.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect());
    p.rem(&d).map(|r| r.is_zero()).unwrap_or(false)
}

/// Φ_d via `Π_{e | d} (1 − x^e)^{μ(d/e)}` truncated at degree φ(d).
fn cyclotomic_coeffs(d: u64) -> Vec<i64> {
    if d == 1 {
        return vec![-1, 1];
    }
    let n = euler_phi(d) as usize;
    let mut c = vec![0i64; n + 1];
    c[0] = 1;
    for e in divisors(d) {
        let mu = mobius(d / e);
        let e = e as usize;
        if mu == 1 {
            for i in (e..=n).rev() {
                c[i] -= c[i - e];
            }
        } else if mu == -1 {
            for i in e..=n {
                c[i] += c[i - e];
            }
        }
    }
    c
}

fn mobius(n: u64) -> i32 {
    let f = factor_u64(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

fn cyclotomic_roots(q: &[BigRational]) -> Vec<(u64, Vec<RadicalMonomial>)> {
    let deg = q.len() as u64 - 1;
    let mut out = Vec::new();
    let bound = (2 * deg * deg).clamp(2, 5000);
    for d in 1..=bound {
        if euler_phi(d) > deg {
            continue;
        }
        if int_poly_eval_zero(q, &cyclotomic_coeffs(d)) {
            out.push((d, (0..d).filter(|&j| gcd(j, d) == 1).map(|j| RadicalMonomial::root_of_unity(d, j as i64)).collect()));
        }
    }
    out
}

fn small_divisors(n: &BigInt) -> Option<Vec<u64>> {
    let v = n.abs().to_u64()?;
    (v != 0 && v < 1_000_000_000_000).then(|| divisors(v))
}

fn rational_roots(q: &[BigRational]) -> Vec<RadicalMonomial> {
    let l = q.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = q.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
    let (Some(num), Some(den)) = (small_divisors(&ints[0]), small_divisors(ints.last().unwrap())) else {
        return Vec::new();
    };
    let p: Poly<BigRational> = Poly::new(q.to_vec());
    let mut out = Vec::new();
    for a in &num {
        for b in &den {
            if gcd(*a, *b) != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                let r = BigRational::new(BigInt::from(*a) * sign, BigInt::from(*b));
                if p.eval(&r).is_zero() {
                    out.push(RadicalMonomial::from_rational(&r));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat_int;
    use crate::Scalar;

    fn poly(v: &[i64]) -> ScalarPoly {
        Poly::new(v.iter().map(|&x| Scalar::from_int(x)).collect())
    }

    #[test]
    fn cyclotomic_table() {
        assert_eq!(cyclotomic_coeffs(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_coeffs(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_coeffs(9), vec![1, 0, 0, 1, 0, 0, 1]);
    }

    #[test]
    fn finds_binomial_and_mixed_roots() {
        // (x^6 + 1)
        let poles = find_poles(&poly(&[1, 0, 0, 0, 0, 0, 1]), &BTreeSet::new()).unwrap();
        assert_eq!(poles.len(), 6);
        assert!(poles.iter().all(|(a, m)| *m == 1 && [4, 12].contains(&a.torsion_order())));
        // (x - 7)(x^3 - 7) expanded
        let den = poly(&[-7, 1]).mul(&poly(&[-7, 0, 0, 1]));
        let poles = find_poles(&den, &BTreeSet::new()).unwrap();
        assert_eq!(poles.len(), 4);
        // (x-2)^2 (x^3-2)^2 via hints
        let den = poly(&[-2, 1]).pow(2).mul(&poly(&[-2, 0, 0, 1]).pow(2));
        let two = RadicalMonomial::from_rational(&rat_int(2));
        let hints: BTreeSet<_> = std::iter::once(two.clone()).chain(two.roots(3)).collect();
        let poles = find_poles(&den, &hints).unwrap();
        assert_eq!(poles.iter().map(|(_, m)| m).sum::<u32>(), 8);
        assert!(find_poles(&poly(&[-1, -1, 1]), &BTreeSet::new()).is_err());
        // (x^3 - 7)^3 (x^3 - 2)^3: a trinomial in x^3 after squarefree splitting
        let den = poly(&[-7, 0, 0, 1]).pow(3).mul(&poly(&[-2, 0, 0, 1]).pow(3));
        let poles = find_poles(&den, &BTreeSet::new()).unwrap();
        assert_eq!(poles.len(), 6);
        assert!(poles.iter().all(|(_, m)| *m == 3));
        // (x^4 - 3)(x^2 - 5)(x - 3)
        let den = poly(&[-3, 0, 0, 0, 1]).mul(&poly(&[-5, 0, 1])).mul(&poly(&[-3, 1]));
        assert_eq!(find_poles(&den, &BTreeSet::new()).unwrap().len(), 7);
    }
}
