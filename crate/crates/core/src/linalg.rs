//! Exact linear algebra: fraction-free integer echelon forms for matroid
//! ranks, the same over a prime field, and sparse rational elimination for
//! the algebra-level rank and quotient computations.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Q;

fn gcd_normalize(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |acc, &x| acc.gcd(&x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

fn narrow(v: &[i128]) -> Vec<i64> {
    v.iter()
        .map(|&x| i64::try_from(x).expect("integer echelon entry overflowed i64"))
        .collect()
}

/// Row echelon form of integer vectors, built incrementally.
///
/// Rows are kept in insertion order; each row is zero in the pivot columns of
/// all earlier rows, so reducing against the rows in order leaves a residual
/// that vanishes exactly when the vector lies in the span.
#[derive(Clone, Debug)]
pub struct IntEchelon {
    dim: usize,
    rows: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl IntEchelon {
    pub fn new(dim: usize) -> Self {
        IntEchelon {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Residual of `v` after elimination, divided by its content. All zeros iff
    /// `v` is in the span.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        debug_assert_eq!(v.len(), self.dim);
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = w[p];
            if c == 0 {
                continue;
            }
            let lead = row[p] as i128;
            for (x, &r) in w.iter_mut().zip(row) {
                *x = *x * lead - c * r as i128;
            }
            gcd_normalize(&mut w);
        }
        narrow(&w)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns false (leaving the form unchanged) when `v` is already
    /// in the span.
    pub fn insert(&mut self, v: &[i64]) -> bool {
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        if w[p] < 0 {
            for x in w.iter_mut() {
                *x = -*x;
            }
        }
        self.rows.push(w);
        self.pivots.push(p);
        true
    }
}

/// Rank of a list of integer vectors of common length `dim`.
pub fn integer_rank<'a>(dim: usize, vectors: impl IntoIterator<Item = &'a [i64]>) -> usize {
    let mut ech = IntEchelon::new(dim);
    for v in vectors {
        ech.insert(v);
        if ech.rank() == dim {
            break;
        }
    }
    ech.rank()
}

pub fn mod_inverse(a: u64, p: u64) -> u64 {
    // p is prime, so a^(p-2) is the inverse.
    pow_mod(a % p, p - 2, p)
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn to_mod_p(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

/// Reduced echelon form over the prime field F_p.
#[derive(Clone, Debug)]
pub struct ModPEchelon {
    prime: u64,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl ModPEchelon {
    pub fn new(prime: u64) -> Self {
        ModPEchelon {
            prime,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residual scaled so that its first nonzero entry is 1.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let p = self.prime;
        let mut w: Vec<u64> = v.iter().map(|&x| x % p).collect();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = w[piv];
            if c == 0 {
                continue;
            }
            for (x, &r) in w.iter_mut().zip(row) {
                *x = (*x + p - mul_mod(c, r, p)) % p;
            }
        }
        if let Some(first) = w.iter().position(|&x| x != 0) {
            let inv = mod_inverse(w[first], p);
            for x in w.iter_mut() {
                *x = mul_mod(*x, inv, p);
            }
        }
        w
    }

    pub fn insert(&mut self, v: &[u64]) -> bool {
        let w = self.reduce(v);
        match w.iter().position(|&x| x != 0) {
            Some(piv) => {
                self.rows.push(w);
                self.pivots.push(piv);
                true
            }
            None => false,
        }
    }
}

pub type SparseVec = BTreeMap<usize, Q>;

/// Incremental row echelon form for sparse rational vectors.
///
/// Rows are normalized to a leading 1 and stored in insertion order; as with
/// [`IntEchelon`], reducing in order clears every pivot column.
#[derive(Clone, Debug, Default)]
pub struct RationalEchelon {
    rows: Vec<(usize, SparseVec)>,
}

impl RationalEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|(p, _)| *p)
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut w = v.clone();
        w.retain(|_, x| !x.is_zero());
        for (piv, row) in &self.rows {
            let Some(c) = w.get(piv).cloned() else {
                continue;
            };
            for (col, r) in row {
                let entry = w.entry(*col).or_insert_with(Q::zero);
                *entry -= &c * r;
                if entry.is_zero() {
                    w.remove(col);
                }
            }
        }
        w
    }

    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let w = self.reduce(v);
        let Some((&piv, lead)) = w.iter().next() else {
            return false;
        };
        let inv = Q::one() / lead;
        let row: SparseVec = w.iter().map(|(c, x)| (*c, x * &inv)).collect();
        self.rows.push((piv, row));
        true
    }
}

/// Column-sparse exact matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub columns: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            columns: vec![SparseVec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for (k, col) in m.columns.iter_mut().enumerate() {
            col.insert(k, Q::one());
        }
        m
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn get(&self, row: usize, col: usize) -> Q {
        self.columns[col].get(&row).cloned().unwrap_or_else(Q::zero)
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols(), rhs.rows, "dimension mismatch in matrix product");
        let columns = rhs
            .columns
            .iter()
            .map(|rcol| {
                let mut out = SparseVec::new();
                for (k, a) in rcol {
                    for (i, b) in &self.columns[*k] {
                        let e = out.entry(*i).or_insert_with(Q::zero);
                        *e += a * b;
                    }
                }
                out.retain(|_, x| !x.is_zero());
                out
            })
            .collect();
        SparseMatrix {
            rows: self.rows,
            columns,
        }
    }

    pub fn trace(&self) -> Q {
        let mut t = Q::zero();
        for (k, col) in self.columns.iter().enumerate() {
            if let Some(x) = col.get(&k) {
                t += x;
            }
        }
        t
    }

    pub fn rank(&self) -> usize {
        let mut ech = RationalEchelon::new();
        for col in &self.columns {
            ech.insert(col);
        }
        ech.rank()
    }
}

/// Solves `a x = b` exactly. Returns `None` when the system is inconsistent;
/// free variables are set to zero.
pub fn solve_exact(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(r, rhs)| {
            let mut row = r.clone();
            row.push(rhs.clone());
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = Q::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot = m[r].clone();
                for (x, p) in m[i][c..=cols].iter_mut().zip(&pivot[c..=cols]) {
                    *x -= &f * p;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (i, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn integer_rank_of_dependent_triple() {
        let vs: Vec<Vec<i64>> = vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]];
        assert_eq!(integer_rank(3, vs.iter().map(|v| v.as_slice())), 2);
    }

    #[test]
    fn residual_detects_membership() {
        let mut e = IntEchelon::new(3);
        assert!(e.insert(&[2, 4, 0]));
        assert!(!e.insert(&[1, 2, 0]));
        assert!(e.insert(&[0, 1, 1]));
        assert!(e.contains(&[1, 3, 1]));
        assert!(!e.contains(&[0, 0, 1]));
    }

    #[test]
    fn mod_p_rank_can_drop() {
        let mut e = ModPEchelon::new(2);
        assert!(e.insert(&[1, 1]));
        // (1,-1) reduces to (1,1) mod 2
        assert!(!e.insert(&[1, to_mod_p(-1, 2)]));
        let mut e = ModPEchelon::new(3);
        assert!(e.insert(&[1, 1]));
        assert!(e.insert(&[1, 2]));
    }

    #[test]
    fn solves_and_detects_inconsistency() {
        let a = vec![vec![q(1), q(1)], vec![q(1), q(-1)], vec![q(2), q(0)]];
        let x = solve_exact(&a, &[q(3), q(1), q(4)]).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        assert!(solve_exact(&a, &[q(3), q(1), q(5)]).is_none());
    }

    #[test]
    fn sparse_product_and_rank() {
        let mut a = SparseMatrix::zero(2, 2);
        a.columns[0].insert(0, q(1));
        a.columns[0].insert(1, q(1));
        a.columns[1].insert(1, q(2));
        let i = SparseMatrix::identity(2);
        assert_eq!(a.mul(&i), a);
        assert_eq!(a.rank(), 2);
        assert_eq!(a.trace(), q(3));
    }
}
