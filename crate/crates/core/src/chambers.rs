//! Chambers of a real arrangement as realizable sign vectors.
//!
//! Enumeration is breadth-first over wall crossings from the chamber of a
//! generic point. A candidate sign vector is accepted only with an exact
//! interior point, found by maximizing a slack ε in
//! `s_h ⟨a_h, x⟩ ≥ ε`, `‖x‖_∞ ≤ 1`.

use std::collections::HashSet;
use std::fmt;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::arrangement::GroundSet;
use crate::error::{Error, Result};
use crate::lp::{maximize, LpOutcome};
use crate::rational::{q, Q};
use crate::symmetric::Permutation;

/// Sign vectors are stored in one machine word.
pub const DEFAULT_CHAMBER_LIMIT: usize = 63;

/// Bit `h` set means the chamber lies on the negative side of hyperplane `h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector {
    negative: u64,
    len: usize,
}

impl SignVector {
    pub fn sign(&self, h: usize) -> i8 {
        if self.negative >> h & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn flipped(&self, h: usize) -> SignVector {
        SignVector {
            negative: self.negative ^ 1 << h,
            len: self.len,
        }
    }

    fn of_point(ground: &GroundSet, x: &[Q]) -> Option<SignVector> {
        let mut negative = 0u64;
        for (h, a) in ground.normals().enumerate() {
            let v: Q = a.iter().zip(x).map(|(&ai, xi)| q(ai) * xi).sum();
            if v.is_zero() {
                return None;
            }
            if v.is_negative() {
                negative |= 1 << h;
            }
        }
        Some(SignVector {
            negative,
            len: ground.len(),
        })
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for h in 0..self.len {
            f.write_str(if self.sign(h) > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// An exact point strictly inside the region with the given signs, if the
/// region is nonempty.
pub fn interior_point(ground: &GroundSet, signs: &SignVector) -> Option<Vec<Q>> {
    let n = ground.dim();
    // variables p (n), m (n), ε; x = p - m
    let vars = 2 * n + 1;
    let mut a = Vec::with_capacity(ground.len() + vars);
    let mut b = Vec::with_capacity(ground.len() + vars);
    for (h, normal) in ground.normals().enumerate() {
        let s = signs.sign(h) as i64;
        let mut row = vec![Q::zero(); vars];
        for (k, &ak) in normal.iter().enumerate() {
            row[k] = q(-s * ak);
            row[n + k] = q(s * ak);
        }
        row[2 * n] = q(1);
        a.push(row);
        b.push(Q::zero());
    }
    for k in 0..vars {
        let mut row = vec![Q::zero(); vars];
        row[k] = q(1);
        a.push(row);
        b.push(q(1));
    }
    let mut c = vec![Q::zero(); vars];
    c[2 * n] = q(1);
    match maximize(&a, &b, &c) {
        LpOutcome::Optimal { value, point } if value.is_positive() => {
            let x: Vec<Q> = (0..n).map(|k| &point[k] - &point[n + k]).collect();
            let check = SignVector::of_point(ground, &x);
            assert_eq!(check, Some(*signs), "LP returned a point outside the region");
            Some(x)
        }
        LpOutcome::Optimal { .. } => None,
        LpOutcome::Unbounded => unreachable!("the slack is bounded by 1"),
    }
}

/// A point on no hyperplane: `(1, t, t², ..)` with `t` above every entry.
pub fn generic_point(ground: &GroundSet) -> (Vec<Q>, SignVector) {
    let bound = ground
        .normals()
        .flat_map(|a| a.iter().map(|x| x.unsigned_abs()))
        .max()
        .unwrap_or(0);
    let mut t = bound as i64 + 2;
    loop {
        let x: Vec<Q> = (0..ground.dim() as u32).map(|k| q(t).pow(k as i32)).collect();
        if let Some(s) = SignVector::of_point(ground, &x) {
            return (x, s);
        }
        t += 1;
    }
}

pub fn enumerate_chambers(ground: &GroundSet) -> Result<Vec<SignVector>> {
    enumerate_chambers_with_limit(ground, DEFAULT_CHAMBER_LIMIT)
}

/// All chambers, sorted. Each BFS level tests its candidates in parallel.
pub fn enumerate_chambers_with_limit(ground: &GroundSet, limit: usize) -> Result<Vec<SignVector>> {
    if ground.len() > limit.min(DEFAULT_CHAMBER_LIMIT) {
        return Err(Error::LimitExceeded {
            hyperplanes: ground.len(),
            limit: limit.min(DEFAULT_CHAMBER_LIMIT),
        });
    }
    let (_, start) = generic_point(ground);
    let mut seen: HashSet<SignVector> = HashSet::from([start]);
    let mut chambers = vec![start];
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let mut candidates: Vec<SignVector> = Vec::new();
        for c in &frontier {
            for h in 0..ground.len() {
                let next = c.flipped(h);
                if seen.insert(next) {
                    candidates.push(next);
                }
            }
        }
        frontier = candidates
            .into_par_iter()
            .filter(|s| interior_point(ground, s).is_some())
            .collect();
        chambers.extend_from_slice(&frontier);
    }
    chambers.sort();
    Ok(chambers)
}

/// Number of chambers `C` with `σ·C = C`. With `σ·a_h = ε a_{h'}`, the image
/// of a chamber with signs `s` has signs `s(h') = ε s(h)`.
pub fn fixed_chambers(ground: &GroundSet, chambers: &[SignVector], sigma: &Permutation) -> usize {
    let images = ground.signed_permutation(sigma);
    chambers
        .iter()
        .filter(|c| {
            images
                .iter()
                .enumerate()
                .all(|(h, &(target, eps))| c.sign(target) == eps * c.sign(h))
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{ArrangementSpec, CoefficientSet};
    use crate::charpoly::{chamber_count, char_poly_nbc};
    use num_bigint::BigInt;

    fn build(s: &[i64], n: usize) -> GroundSet {
        let spec = ArrangementSpec::new(CoefficientSet::from_integers(s).unwrap(), n).unwrap();
        GroundSet::build(&spec).unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_chambers(&build(&[0, 1], 1)).unwrap().len(), 2);
        assert_eq!(enumerate_chambers(&build(&[0, 1], 2)).unwrap().len(), 6);
        assert_eq!(enumerate_chambers(&build(&[-1, 1], 2)).unwrap().len(), 4);
    }

    /// Oracle: sign vectors of a grid of rational points hit every chamber of
    /// these small arrangements.
    #[test]
    fn matches_grid_sampling_in_the_plane() {
        for s in [&[0, 1][..], &[-1, 1], &[-1, 0, 1], &[0, 1, 2]] {
            let g = build(s, 2);
            let mut sampled = HashSet::new();
            for i in -40..=40 {
                for j in -40..=40 {
                    if let Some(v) = SignVector::of_point(&g, &[q(i), q(j)]) {
                        sampled.insert(v);
                    }
                }
            }
            let found: HashSet<SignVector> =
                enumerate_chambers(&g).unwrap().into_iter().collect();
            assert_eq!(found, sampled, "S = {s:?}");
        }
    }

    #[test]
    fn counts_agree_with_characteristic_polynomial() {
        for (s, n) in [(&[0, 1][..], 3), (&[0, 1], 4), (&[-1, 1], 3), (&[-1, 1], 4), (&[-1, 0, 1], 3)] {
            let g = build(s, n);
            let chi = char_poly_nbc(&g);
            assert_eq!(
                BigInt::from(enumerate_chambers(&g).unwrap().len()),
                chamber_count(&chi),
                "S = {s:?}, n = {n}"
            );
        }
    }

    #[test]
    fn fixed_chamber_counts() {
        let g = build(&[0, 1], 2);
        let ch = enumerate_chambers(&g).unwrap();
        assert_eq!(fixed_chambers(&g, &ch, &Permutation::identity(2)), 6);
        assert_eq!(fixed_chambers(&g, &ch, &Permutation::new(vec![1, 0]).unwrap()), 2);
        let g = build(&[0, 1], 3);
        let ch = enumerate_chambers(&g).unwrap();
        let a = Permutation::new(vec![1, 0, 2]).unwrap();
        let b = Permutation::new(vec![0, 2, 1]).unwrap();
        assert_eq!(fixed_chambers(&g, &ch, &a), fixed_chambers(&g, &ch, &b));
    }

    #[test]
    fn sign_strings_and_limit() {
        let g = build(&[0, 1], 2);
        let ch = enumerate_chambers(&g).unwrap();
        assert_eq!(ch[0].to_string(), "+++");
        assert!(ch.iter().all(|c| c.to_string() != "++-" || interior_point(&g, c).is_some()));
        // x > 0, y > 0 forces x + y > 0
        assert!(!ch.iter().any(|c| c.to_string() == "++-"));
        assert!(matches!(
            enumerate_chambers_with_limit(&g, 2),
            Err(Error::LimitExceeded { .. })
        ));
    }
}
