//! Exact simplex method over ℚ for problems `max cᵀx` subject to `Ax ≤ b`,
//! `x ≥ 0`, with `b ≥ 0` so that the slack basis is feasible.

use num_traits::{One, Signed, Zero};

use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Q, point: Vec<Q> },
    Unbounded,
}

/// Dense tableau simplex with Bland's rule (no cycling).
pub fn maximize(a: &[Vec<Q>], b: &[Q], c: &[Q]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    assert!(b.iter().all(|x| !x.is_negative()), "origin must be feasible");
    // columns: n structural, m slack, then rhs
    let width = n + m + 1;
    let mut t: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(r, (row, rhs))| {
            let mut line = vec![Q::zero(); width];
            line[..n].clone_from_slice(row);
            line[n + r] = Q::one();
            line[width - 1] = rhs.clone();
            line
        })
        .collect();
    // reduced costs of the objective row: z - cᵀx = 0
    let mut z: Vec<Q> = vec![Q::zero(); width];
    for (j, cj) in c.iter().enumerate() {
        z[j] = -cj.clone();
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    while let Some(enter) = (0..width - 1).find(|&j| z[j].is_negative()) {
        let mut leave: Option<(usize, Q)> = None;
        for (r, row) in t.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[width - 1] / &row[enter];
            let better = match &leave {
                None => true,
                Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        let Some((pivot_row, _)) = leave else {
            return LpOutcome::Unbounded;
        };
        let inv = Q::one() / &t[pivot_row][enter];
        for x in t[pivot_row].iter_mut() {
            *x *= &inv;
        }
        let pivot = t[pivot_row].clone();
        for (r, row) in t.iter_mut().enumerate() {
            if r == pivot_row || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (x, p) in row.iter_mut().zip(&pivot) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        if !z[enter].is_zero() {
            let f = z[enter].clone();
            for (x, p) in z.iter_mut().zip(&pivot) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        basis[pivot_row] = enter;
    }
    let mut point = vec![Q::zero(); n];
    for (r, &var) in basis.iter().enumerate() {
        if var < n {
            point[var] = t[r][width - 1].clone();
        }
    }
    LpOutcome::Optimal {
        value: z[width - 1].clone(),
        point,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};

    fn rows(v: &[&[i64]]) -> Vec<Vec<Q>> {
        v.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → 36 at (2, 6)
        let a = rows(&[&[1, 0], &[0, 2], &[3, 2]]);
        let b = vec![q(4), q(12), q(18)];
        let c = vec![q(3), q(5)];
        assert_eq!(
            maximize(&a, &b, &c),
            LpOutcome::Optimal {
                value: q(36),
                point: vec![q(2), q(6)]
            }
        );
    }

    #[test]
    fn fractional_optimum_and_unbounded() {
        // max x + y, 2x + y ≤ 1, x + 2y ≤ 1 → 2/3 at (1/3, 1/3)
        let a = rows(&[&[2, 1], &[1, 2]]);
        let out = maximize(&a, &[q(1), q(1)], &[q(1), q(1)]);
        assert_eq!(
            out,
            LpOutcome::Optimal {
                value: q_frac(2, 3),
                point: vec![q_frac(1, 3), q_frac(1, 3)]
            }
        );
        let a = rows(&[&[1, -1]]);
        assert_eq!(maximize(&a, &[q(1)], &[q(0), q(1)]), LpOutcome::Unbounded);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // classic cycling example for the largest-coefficient rule
        let a = vec![
            vec![q_frac(1, 4), q(-8), q(-1), q(9)],
            vec![q_frac(1, 2), q(-12), q_frac(-1, 2), q(3)],
            vec![q(0), q(0), q(1), q(0)],
        ];
        let b = vec![q(0), q(0), q(1)];
        let c = vec![q_frac(3, 4), q(-20), q_frac(1, 2), q(-6)];
        match maximize(&a, &b, &c) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, q_frac(5, 4)),
            other => panic!("{other:?}"),
        }
    }
}
