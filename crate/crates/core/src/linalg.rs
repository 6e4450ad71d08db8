//! Fraction-free (Bareiss) elimination for rectangular systems over an exact field.

use crate::error::FieldError;
use crate::field::Field;

/// Solves `A x = b` for a possibly rectangular `A`.
///
/// Returns `Ok(None)` when the system is inconsistent; free variables are set
/// to zero otherwise.
pub fn solve<F: Field>(a: &[Vec<F>], b: &[F]) -> Result<Option<Vec<F>>, FieldError> {
    let ncols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    solve_augmented(&mut m, ncols)
}

/// Same as [`solve`] on an augmented matrix whose last column is the right-hand side.
pub fn solve_augmented<F: Field>(m: &mut [Vec<F>], ncols: usize) -> Result<Option<Vec<F>>, FieldError> {
    let rows = m.len();
    let mut prev = F::one();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows {
            break;
        }
        let best = (r..rows)
            .filter(|&i| !m[i][col].is_zero())
            .min_by_key(|&i| m[i][col].size());
        let Some(best) = best else { continue };
        m.swap(r, best);
        let prev_inv = prev.try_inv()?;
        let (head, tail) = m.split_at_mut(r + 1);
        let prow = &head[r];
        let piv = &prow[col];
        for row in tail.iter_mut() {
            let factor = row[col].clone();
            if factor.is_zero() {
                for j in col + 1..=ncols {
                    if !row[j].is_zero() {
                        row[j] = piv.mul_ref(&row[j]).mul_ref(&prev_inv);
                    }
                }
                continue;
            }
            for j in col + 1..=ncols {
                let v = piv.mul_ref(&row[j]).sub_ref(&factor.mul_ref(&prow[j]));
                row[j] = v.mul_ref(&prev_inv);
            }
            row[col] = F::zero();
        }
        prev = piv.clone();
        pivots.push(col);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[ncols].is_zero()) {
        return Ok(None);
    }
    let mut x = vec![F::zero(); ncols];
    for (k, &pc) in pivots.iter().enumerate().rev() {
        let mut acc = m[k][ncols].clone();
        for &j in &pivots[k + 1..] {
            if !m[k][j].is_zero() {
                acc = acc.sub_ref(&m[k][j].mul_ref(&x[j]));
            }
        }
        x[pc] = acc.try_div(&m[k][pc])?;
    }
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, rat_int};
    use num_rational::BigRational;

    fn r(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&c| rat_int(c)).collect()
    }

    #[test]
    fn square_system() {
        let a = vec![r(&[2, 1]), r(&[1, 3])];
        let x = solve(&a, &r(&[3, 5])).unwrap().unwrap();
        assert_eq!(x, vec![rat(4, 5), rat(7, 5)]);
    }

    #[test]
    fn overdetermined_and_inconsistent() {
        let a = vec![r(&[1, 1]), r(&[1, -1]), r(&[2, 0])];
        assert_eq!(solve(&a, &r(&[2, 0, 2])).unwrap().unwrap(), r(&[1, 1]));
        assert!(solve(&a, &r(&[2, 0, 3])).unwrap().is_none());
    }

    #[test]
    fn free_variables_zero() {
        let a = vec![r(&[1, 2, 0]), r(&[2, 4, 1])];
        let x = solve(&a, &r(&[2, 5])).unwrap().unwrap();
        assert_eq!(x, r(&[2, 0, 1]));
    }
}
