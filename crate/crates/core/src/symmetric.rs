//! Permutations, partitions and irreducible characters of Σ_n.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// A permutation of `{0, .., n-1}` stored by images: `σ(k) = images[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::InvalidPermutation(images));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(rng);
        Permutation { images }
    }

    /// The standard representative of a cycle type: cycles on consecutive
    /// blocks, longest first.
    pub fn from_cycle_type(shape: &Partition) -> Self {
        let mut images = Vec::with_capacity(shape.size());
        let mut start = 0;
        for &len in shape.parts() {
            for k in 0..len {
                images.push(start + (k + 1) % len);
            }
            start += len;
        }
        Permutation { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, k: usize) -> usize {
        self.images[k]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Permutation {
            images: other.images.iter().map(|&k| self.images[k]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.len()];
        for (k, &i) in self.images.iter().enumerate() {
            images[i] = k;
        }
        Permutation { images }
    }

    pub fn cycle_type(&self) -> Partition {
        let mut seen = vec![false; self.len()];
        let mut parts = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = self.images[k];
                len += 1;
            }
            parts.push(len);
        }
        Partition::new(parts)
    }
}

/// An integer partition, parts stored in non-increasing order without zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of rows of the Young diagram.
    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    pub fn first_row(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    /// `λ(n)`: prepend a row of length `n - |λ|`.
    pub fn padded(&self, n: usize) -> Result<Partition> {
        let needed = self.size() + self.first_row();
        if n < needed {
            return Err(Error::PadTooSmall { n, needed });
        }
        let mut parts = vec![n - self.size()];
        parts.extend_from_slice(&self.parts);
        Ok(Partition { parts })
    }

    /// z_λ = Π_i i^{m_i} m_i!, the centralizer order of the cycle type.
    pub fn centralizer_order(&self) -> BigInt {
        let mut counts: HashMap<usize, u32> = HashMap::new();
        for &p in &self.parts {
            *counts.entry(p).or_default() += 1;
        }
        let mut z = BigInt::one();
        for (&part, &mult) in &counts {
            for k in 1..=mult {
                z *= BigInt::from(part) * BigInt::from(k);
            }
        }
        z
    }

    /// Hook length formula for dim V_λ.
    pub fn dimension(&self) -> BigInt {
        let n = self.size();
        let mut num = BigInt::one();
        for k in 2..=n {
            num *= k;
        }
        let conj = self.conjugate();
        let mut den = BigInt::one();
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                let hook = (row - j - 1) + (conj.parts[j] - i - 1) + 1;
                den *= hook;
            }
        }
        num / den
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.first_row();
        let parts = (0..cols)
            .map(|j| self.parts.iter().filter(|&&p| p > j).count())
            .collect();
        Partition { parts }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join("+"))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `"3+1"`, `"2,1,1"`, or `"0"`/empty for the empty partition.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "0" {
            return Ok(Partition::empty());
        }
        let parts = text
            .split(['+', ','])
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidPartition(text.to_string()))?;
        Ok(Partition::new(parts))
    }
}

/// All partitions of `n`, in reverse lexicographic order (`(n)` first).
pub fn partitions(n: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn factorial(n: usize) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Irreducible character values χ_λ(μ) via the Murnaghan–Nakayama rule,
/// memoized across calls.
#[derive(Default)]
pub struct CharacterTable {
    memo: HashMap<(Vec<usize>, Vec<usize>), BigInt>,
}

impl CharacterTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn value(&mut self, lambda: &Partition, mu: &Partition) -> BigInt {
        assert_eq!(lambda.size(), mu.size(), "shapes of different sizes");
        self.mn(lambda.parts.clone(), &mu.parts)
    }

    fn mn(&mut self, lambda: Vec<usize>, mu: &[usize]) -> BigInt {
        if mu.is_empty() {
            return BigInt::one();
        }
        let key = (lambda.clone(), mu.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let strip = mu[0];
        let rest = &mu[1..];
        // Beta-set of λ: β_i = λ_i + (L - 1 - i). Removing a border strip of
        // length r moves one bead from β to β - r onto an empty position; the
        // sign counts the beads jumped over.
        let len = lambda.len();
        let beta: Vec<usize> = lambda
            .iter()
            .enumerate()
            .map(|(i, &p)| p + len - 1 - i)
            .collect();
        let mut total = BigInt::from(0);
        for (i, &b) in beta.iter().enumerate() {
            if b < strip || beta.contains(&(b - strip)) {
                continue;
            }
            let target = b - strip;
            let jumped = beta.iter().filter(|&&x| x > target && x < b).count();
            let mut next = beta.clone();
            next[i] = target;
            next.sort_unstable_by(|a, b| b.cmp(a));
            let shape: Vec<usize> = next
                .iter()
                .enumerate()
                .map(|(k, &x)| x - (len - 1 - k))
                .filter(|&p| p > 0)
                .collect();
            let v = self.mn(shape, rest);
            if jumped % 2 == 0 {
                total += v;
            } else {
                total -= v;
            }
        }
        self.memo.insert(key, total.clone());
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=8).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
        assert_eq!(partitions(3), vec![p(&[3]), p(&[2, 1]), p(&[1, 1, 1])]);
    }

    #[test]
    fn s3_character_table() {
        let mut t = CharacterTable::new();
        let rows: Vec<Vec<i64>> = partitions(3)
            .iter()
            .map(|l| {
                partitions(3)
                    .iter()
                    .map(|m| i64::try_from(t.value(l, m)).unwrap())
                    .collect()
            })
            .collect();
        // columns: (3), (2,1), (1,1,1)
        assert_eq!(rows, vec![vec![1, 1, 1], vec![-1, 0, 2], vec![1, -1, 1]]);
    }

    #[test]
    fn s4_known_values() {
        let mut t = CharacterTable::new();
        assert_eq!(t.value(&p(&[2, 2]), &p(&[2, 2])), BigInt::from(2));
        assert_eq!(t.value(&p(&[3, 1]), &p(&[2, 1, 1])), BigInt::from(1));
        assert_eq!(t.value(&p(&[2, 1, 1]), &p(&[4])), BigInt::from(1));
        assert_eq!(t.value(&p(&[2, 2]), &p(&[3, 1])), BigInt::from(-1));
    }

    #[test]
    fn identity_column_is_hook_dimension_and_rows_are_orthonormal() {
        for n in 1..=6 {
            let mut t = CharacterTable::new();
            let ps = partitions(n);
            let id = p(&vec![1; n]);
            let fact = factorial(n);
            for l in &ps {
                assert_eq!(t.value(l, &id), l.dimension());
                for m in &ps {
                    // Σ_μ χ_λ(μ) χ_ν(μ) n!/z_μ = n! δ
                    let mut s = BigInt::from(0);
                    for mu in &ps {
                        s += t.value(l, mu) * t.value(m, mu) * (&fact / mu.centralizer_order());
                    }
                    let expect = if l == m { fact.clone() } else { BigInt::from(0) };
                    assert_eq!(s, expect, "{l} vs {m}");
                }
            }
        }
    }

    #[test]
    fn permutation_algebra() {
        let s = Permutation::new(vec![1, 2, 0]).unwrap();
        let t = Permutation::new(vec![1, 0, 2]).unwrap();
        assert_eq!(s.compose(&s.inverse()), Permutation::identity(3));
        assert_eq!(s.compose(&t).apply(0), 2);
        assert_eq!(s.cycle_type(), p(&[3]));
        assert_eq!(Permutation::from_cycle_type(&p(&[2, 1, 1])).cycle_type(), p(&[2, 1, 1]));
        assert!(Permutation::new(vec![0, 0]).is_err());
    }

    #[test]
    fn padding_and_parsing() {
        assert_eq!(p(&[1]).padded(3).unwrap(), p(&[2, 1]));
        assert!(matches!(p(&[2]).padded(3), Err(Error::PadTooSmall { needed: 4, .. })));
        assert_eq!("3+1".parse::<Partition>().unwrap(), p(&[3, 1]));
        assert_eq!(p(&[2, 1, 1]).to_string(), "2+1+1");
        assert_eq!(Partition::empty().padded(2).unwrap(), p(&[2]));
        assert_eq!(p(&[2, 1, 1]).centralizer_order(), BigInt::from(4));
    }
}
