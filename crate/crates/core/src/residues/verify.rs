use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::Result;
use crate::field::Field;
use crate::ratfun::{joint_radical, PartialFraction};
use crate::series::pow_trunc;
use crate::Scalar;

/// `σ` applied to a partial fraction, expanded directly at the `p`-th roots
/// of each pole.
///
/// At a root `α` of `x^p = β`, `x^p − β = t·S(t)` with `t = x − α` and
/// `S(t) = Σ_{j≥1} C(p,j) α^{p−j} t^{j−1}`, so the coefficient of `t^{-k}` in
/// `(x^p − β)^{-s}` is `[t^{s−k}] S(t)^{-s}`.
pub fn sigma_pf(pf: &PartialFraction, p: u64) -> Result<PartialFraction> {
    let mut out = PartialFraction::zero();
    for (beta, cs) in pf.terms() {
        let m = cs.len();
        for alpha in beta.roots(p) {
            let rad = joint_radical(
                std::iter::once(alpha.natural_radical())
                    .chain(cs.iter().map(|c| c.radical().cloned()))
                    .collect::<Vec<_>>()
                    .iter()
                    .map(Option::as_ref),
            )?;
            let av = alpha.value_with(rad.as_ref())?;
            let series: Vec<Scalar> = (0..m)
                .map(|j| {
                    if j + 1 > p as usize {
                        return Scalar::from_int(0);
                    }
                    let binom = BigRational::from_integer(binomial(BigInt::from(p), BigInt::from(j + 1)));
                    av.pow_u(p - 1 - j as u64).scale_rational(&binom)
                })
                .collect();
            for (s_idx, c) in cs.iter().enumerate() {
                let s = s_idx + 1;
                if c.is_zero() {
                    continue;
                }
                let inv = pow_trunc(&series, -(s as i64), s)?;
                for k in 1..=s {
                    out.add_term(&alpha, k, &c.mul_ref(&inv[s - k]));
                }
            }
        }
    }
    Ok(out)
}

/// `Δ` on a partial fraction.
pub fn delta_pf(pf: &PartialFraction, p: u64) -> Result<PartialFraction> {
    Ok(sigma_pf(pf, p)?.sub(pf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat_int, RadicalMonomial};
    use crate::ratfun::{find_poles, partial_fractions, recombine};

    #[test]
    fn matches_substitution() {
        let two = RadicalMonomial::from_rational(&rat_int(2));
        let mut pf = PartialFraction::zero();
        pf.add_term(&two, 2, &Scalar::from_int(1));
        pf.add_term(&two, 1, &Scalar::from_int(3));
        for p in [2u64, 3] {
            let f = recombine(&pf).unwrap();
            let s = f.sigma(p);
            let poles = find_poles(s.den(), s.hints()).unwrap();
            let expect = partial_fractions(&s, &poles).unwrap();
            assert_eq!(sigma_pf(&pf, p).unwrap(), expect);
        }
    }
}
