//! The matroid of a ground set: ranks, circuits, broken circuits, and
//! no-broken-circuit (nbc) sets.
//!
//! nbc sets are enumerated through flats. For `T = {t_1 < .. < t_k}`
//! independent, `T` contains no broken circuit iff every tail
//! `{t_j, .., t_k}` spans a flat whose smallest element is `t_j`. Growing `T`
//! downward from its largest element therefore only needs the parallel
//! classes of the contraction by the current flat: the flat spanned by `F ∪ t`
//! is `F` plus the class of `t`, and `t` is admissible iff it is the smallest
//! member of its class and smaller than everything in `F`.

use std::collections::{HashMap, HashSet};

use fixedbitset::FixedBitSet;

use crate::arrangement::GroundSet;
use crate::linalg::{integer_rank, to_mod_p, IntEchelon, ModPEchelon};

/// A minimal dependent set of hyperplanes, as sorted ground-set indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Circuit {
    pub elements: Vec<usize>,
}

impl Circuit {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn min(&self) -> usize {
        self.elements[0]
    }

    /// The circuit minus its smallest element.
    pub fn broken(&self) -> Vec<usize> {
        self.elements[1..].to_vec()
    }
}

/// Dimension of the span of the selected normals.
pub fn rank(ground: &GroundSet, subset: &[usize]) -> usize {
    integer_rank(ground.dim(), subset.iter().map(|&i| ground.normal(i)))
}

pub fn is_independent(ground: &GroundSet, subset: &[usize]) -> bool {
    rank(ground, subset) == subset.len()
}

/// All circuits with at most `max_size` elements, sorted by size and then
/// lexicographically.
///
/// Depth-first over independent sets in increasing index order; a set that
/// becomes dependent when `e` is appended is reported if it is minimal and is
/// never extended.
pub fn circuits(ground: &GroundSet, max_size: usize) -> Vec<Circuit> {
    fn go(
        ground: &GroundSet,
        max_size: usize,
        current: &mut Vec<usize>,
        ech: &IntEchelon,
        out: &mut Vec<Circuit>,
    ) {
        let start = current.last().map_or(0, |&x| x + 1);
        for e in start..ground.len() {
            if ech.contains(ground.normal(e)) {
                current.push(e);
                let minimal = (0..current.len() - 1).all(|skip| {
                    let rest: Vec<usize> = current
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != skip)
                        .map(|(_, &x)| x)
                        .collect();
                    is_independent(ground, &rest)
                });
                if minimal {
                    out.push(Circuit {
                        elements: current.clone(),
                    });
                }
                current.pop();
            } else if current.len() + 1 < max_size {
                let mut next = ech.clone();
                next.insert(ground.normal(e));
                current.push(e);
                go(ground, max_size, current, &next, out);
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    if max_size >= 2 {
        go(ground, max_size, &mut Vec::new(), &IntEchelon::new(ground.dim()), &mut out);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Broken circuits of size at most `max_size` (from circuits of size at most
/// `max_size + 1`), deduplicated and sorted.
pub fn broken_circuits(ground: &GroundSet, max_size: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = circuits(ground, max_size + 1)
        .iter()
        .map(Circuit::broken)
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out.dedup();
    out
}

/// A vector configuration over some field, seen through its span closure.
pub trait LinearMatroid: Sync {
    type Basis: Clone + Send;

    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn empty_basis(&self) -> Self::Basis;

    /// Appends `element`; false if it was already in the span.
    fn extend(&self, basis: &mut Self::Basis, element: usize) -> bool;

    /// Projective class of `element` in the quotient by the span of `basis`,
    /// or `None` when it lies in that span.
    fn residual_class(&self, basis: &Self::Basis, element: usize) -> Option<Vec<u64>>;
}

/// Integer normals, exact over ℚ.
pub struct RationalConfiguration<'a> {
    ground: &'a GroundSet,
}

impl<'a> RationalConfiguration<'a> {
    pub fn new(ground: &'a GroundSet) -> Self {
        RationalConfiguration { ground }
    }
}

impl LinearMatroid for RationalConfiguration<'_> {
    type Basis = IntEchelon;

    fn len(&self) -> usize {
        self.ground.len()
    }

    fn empty_basis(&self) -> IntEchelon {
        IntEchelon::new(self.ground.dim())
    }

    fn extend(&self, basis: &mut IntEchelon, element: usize) -> bool {
        basis.insert(self.ground.normal(element))
    }

    fn residual_class(&self, basis: &IntEchelon, element: usize) -> Option<Vec<u64>> {
        let mut r = basis.reduce(self.ground.normal(element));
        let first = r.iter().position(|&x| x != 0)?;
        if r[first] < 0 {
            for x in r.iter_mut() {
                *x = -*x;
            }
        }
        // bit-cast is a faithful hash key
        Some(r.into_iter().map(|x| x as u64).collect())
    }
}

/// Vectors over the prime field F_p.
pub struct ModPConfiguration {
    prime: u64,
    vectors: Vec<Vec<u64>>,
}

impl ModPConfiguration {
    pub fn new(prime: u64, vectors: Vec<Vec<u64>>) -> Self {
        ModPConfiguration { prime, vectors }
    }

    /// Reduction of an integer ground set modulo `prime`.
    pub fn reduction(ground: &GroundSet, prime: u64) -> Self {
        let vectors = ground
            .normals()
            .map(|v| v.iter().map(|&x| to_mod_p(x, prime)).collect())
            .collect();
        Self::new(prime, vectors)
    }

    /// One normal per hyperplane of F_p^n: the nonzero vectors whose first
    /// nonzero entry is 1.
    pub fn all_hyperplanes(prime: u64, n: usize) -> Self {
        let mut vectors = Vec::new();
        let total = prime.pow(n as u32);
        for code in 1..total {
            let mut v = Vec::with_capacity(n);
            let mut c = code;
            for _ in 0..n {
                v.push(c % prime);
                c /= prime;
            }
            v.reverse();
            if v.iter().find(|&&x| x != 0) == Some(&1) {
                vectors.push(v);
            }
        }
        Self::new(prime, vectors)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn vector(&self, i: usize) -> &[u64] {
        &self.vectors[i]
    }
}

impl LinearMatroid for ModPConfiguration {
    type Basis = ModPEchelon;

    fn len(&self) -> usize {
        self.vectors.len()
    }

    fn empty_basis(&self) -> ModPEchelon {
        ModPEchelon::new(self.prime)
    }

    fn extend(&self, basis: &mut ModPEchelon, element: usize) -> bool {
        basis.insert(&self.vectors[element])
    }

    fn residual_class(&self, basis: &ModPEchelon, element: usize) -> Option<Vec<u64>> {
        let r = basis.reduce(&self.vectors[element]);
        r.iter().any(|&x| x != 0).then_some(r)
    }
}

/// Parallel classes of `M / F` for the elements outside `flat`, each sorted
/// ascending; classes ordered by their smallest element.
pub fn contraction_classes<M: LinearMatroid>(
    matroid: &M,
    flat: &FixedBitSet,
    basis: &M::Basis,
) -> Vec<Vec<usize>> {
    let mut by_key: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for e in 0..matroid.len() {
        if flat.contains(e) {
            continue;
        }
        let key = matroid
            .residual_class(basis, e)
            .expect("element outside a flat cannot lie in its span");
        match by_key.get(&key) {
            Some(&c) => classes[c].push(e),
            None => {
                by_key.insert(key, classes.len());
                classes.push(vec![e]);
            }
        }
    }
    classes
}

/// Number of nbc sets of each size, computed by a depth-first search over
/// flats memoized on the flat.
pub fn nbc_counts<M: LinearMatroid>(matroid: &M) -> Vec<u128> {
    struct Search<'m, M: LinearMatroid> {
        matroid: &'m M,
        memo: HashMap<FixedBitSet, Vec<u128>>,
    }

    impl<M: LinearMatroid> Search<'_, M> {
        // counts[k] = number of ways to add k more (smaller) elements
        fn visit(&mut self, flat: &FixedBitSet, basis: &M::Basis, min: usize) -> Vec<u128> {
            if let Some(c) = self.memo.get(flat) {
                return c.clone();
            }
            let mut counts = vec![1u128];
            for class in contraction_classes(self.matroid, flat, basis) {
                let t = class[0];
                if t >= min {
                    continue;
                }
                let mut child = flat.clone();
                for &e in &class {
                    child.insert(e);
                }
                let mut child_basis = basis.clone();
                self.matroid.extend(&mut child_basis, t);
                let sub = self.visit(&child, &child_basis, t);
                if counts.len() < sub.len() + 1 {
                    counts.resize(sub.len() + 1, 0);
                }
                for (k, c) in sub.iter().enumerate() {
                    counts[k + 1] += c;
                }
            }
            self.memo.insert(flat.clone(), counts.clone());
            counts
        }
    }

    let mut search = Search {
        matroid,
        memo: HashMap::new(),
    };
    let empty = FixedBitSet::with_capacity(matroid.len());
    search.visit(&empty, &matroid.empty_basis(), matroid.len())
}

/// All nbc sets of exactly `size` elements, each sorted ascending; the list is
/// sorted lexicographically.
pub fn nbc_sets<M: LinearMatroid>(matroid: &M, size: usize) -> Vec<Vec<usize>> {
    fn go<M: LinearMatroid>(
        matroid: &M,
        size: usize,
        flat: &FixedBitSet,
        basis: &M::Basis,
        min: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if chosen.len() == size {
            let mut s = chosen.clone();
            s.reverse();
            out.push(s);
            return;
        }
        for class in contraction_classes(matroid, flat, basis) {
            let t = class[0];
            if t >= min {
                continue;
            }
            let mut child = flat.clone();
            for &e in &class {
                child.insert(e);
            }
            let mut child_basis = basis.clone();
            matroid.extend(&mut child_basis, t);
            chosen.push(t);
            go(matroid, size, &child, &child_basis, t, chosen, out);
            chosen.pop();
        }
    }
    let mut out = Vec::new();
    let empty = FixedBitSet::with_capacity(matroid.len());
    go(
        matroid,
        size,
        &empty,
        &matroid.empty_basis(),
        matroid.len(),
        &mut Vec::new(),
        &mut out,
    );
    out.sort();
    out
}

/// Visits every flat exactly once, passing the flat, a basis of it as ground
/// indices, and the parallel classes of the contraction by it. The callback
/// returns false to stop early; the return value reports whether the walk
/// completed.
pub fn for_each_flat<M: LinearMatroid>(
    matroid: &M,
    mut visit: impl FnMut(&FixedBitSet, &[usize], &[Vec<usize>]) -> bool,
) -> bool {
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let empty = FixedBitSet::with_capacity(matroid.len());
    let mut stack = vec![(empty.clone(), matroid.empty_basis(), Vec::new())];
    seen.insert(empty);
    while let Some((flat, basis, spanning)) = stack.pop() {
        let classes = contraction_classes(matroid, &flat, &basis);
        if !visit(&flat, &spanning, &classes) {
            return false;
        }
        for class in &classes {
            let mut child = flat.clone();
            for &e in class {
                child.insert(e);
            }
            if !seen.insert(child.clone()) {
                continue;
            }
            let mut child_basis = basis.clone();
            matroid.extend(&mut child_basis, class[0]);
            let mut child_spanning = spanning.clone();
            child_spanning.push(class[0]);
            stack.push((child, child_basis, child_spanning));
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{ArrangementSpec, CoefficientSet};

    fn resonance(n: usize) -> GroundSet {
        GroundSet::build(&ArrangementSpec::resonance(n).unwrap()).unwrap()
    }

    fn threshold(n: usize) -> GroundSet {
        GroundSet::build(&ArrangementSpec::threshold(n).unwrap()).unwrap()
    }

    fn subsets(len: usize) -> impl Iterator<Item = Vec<usize>> {
        (0u32..(1 << len)).map(move |mask| (0..len).filter(|&i| mask >> i & 1 == 1).collect())
    }

    /// Exhaustive: dependent sets all of whose one-element deletions are
    /// independent.
    fn brute_circuits(g: &GroundSet, max_size: usize) -> Vec<Circuit> {
        let mut out: Vec<Circuit> = subsets(g.len())
            .filter(|s| s.len() <= max_size && !s.is_empty())
            .filter(|s| {
                !is_independent(g, s)
                    && (0..s.len()).all(|k| {
                        let mut t = s.clone();
                        t.remove(k);
                        is_independent(g, &t)
                    })
            })
            .map(|elements| Circuit { elements })
            .collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    fn brute_nbc(g: &GroundSet, size: usize) -> Vec<Vec<usize>> {
        let broken: Vec<Vec<usize>> = brute_circuits(g, g.len())
            .iter()
            .map(Circuit::broken)
            .collect();
        let mut out: Vec<Vec<usize>> = subsets(g.len())
            .filter(|s| s.len() == size)
            .filter(|s| !broken.iter().any(|b| b.iter().all(|x| s.contains(x))))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn rank_examples() {
        let g = resonance(2);
        assert_eq!(rank(&g, &[0, 1, 2]), 2);
        assert_eq!(rank(&g, &[2]), 1);
        assert_eq!(rank(&g, &[]), 0);
        let g = resonance(3);
        // e1, e2, e1+e2
        assert_eq!(rank(&g, &[0, 1, 2]), 2);
    }

    #[test]
    fn circuits_of_small_arrangements() {
        assert_eq!(
            circuits(&resonance(2), 3),
            vec![Circuit {
                elements: vec![0, 1, 2]
            }]
        );
        assert!(circuits(&resonance(3), 1).is_empty());
        assert!(circuits(&threshold(2), 2).is_empty());
        for g in [resonance(3), threshold(3), resonance(4)] {
            for max in 1..=5 {
                assert_eq!(circuits(&g, max), brute_circuits(&g, max));
            }
        }
    }

    #[test]
    fn broken_circuits_examples() {
        assert_eq!(broken_circuits(&resonance(2), 2), vec![vec![1, 2]]);
        assert!(broken_circuits(&threshold(2), 3).is_empty());
        // e1=0, e2=1, e1+e2=2
        assert!(broken_circuits(&resonance(3), 2).contains(&vec![1, 2]));
    }

    #[test]
    fn nbc_sets_match_brute_force() {
        let g3 = GroundSet::build(
            &ArrangementSpec::new(CoefficientSet::from_integers(&[-1, 0, 1]).unwrap(), 2).unwrap(),
        )
        .unwrap();
        for g in [resonance(2), resonance(3), threshold(3), g3, resonance(4)] {
            let m = RationalConfiguration::new(&g);
            let counts = nbc_counts(&m);
            for size in 0..=g.dim() {
                let brute = brute_nbc(&g, size);
                assert_eq!(nbc_sets(&m, size), brute, "size {size}");
                assert_eq!(counts.get(size).copied().unwrap_or(0), brute.len() as u128);
            }
        }
    }

    #[test]
    fn rank_is_monotone_and_submodular() {
        for g in [resonance(3), threshold(4), resonance(2)] {
            let all: Vec<Vec<usize>> = subsets(g.len()).collect();
            let r: Vec<usize> = all.iter().map(|s| rank(&g, s)).collect();
            let n = g.len();
            for a in 0..(1usize << n) {
                for b in 0..(1usize << n) {
                    let ra = r[a];
                    let rb = r[b];
                    if a & b == a {
                        assert!(ra <= rb);
                    }
                    assert!(r[a | b] + r[a & b] <= ra + rb);
                }
            }
        }
    }

    #[test]
    fn every_flat_visited_once() {
        let g = resonance(3);
        let m = RationalConfiguration::new(&g);
        let mut flats = Vec::new();
        for_each_flat(&m, |flat, basis, _| {
            flats.push((flat.clone(), basis.len()));
            true
        });
        let distinct: std::collections::HashSet<_> = flats.iter().map(|f| f.0.clone()).collect();
        assert_eq!(distinct.len(), flats.len());
        // brute force: closures of all subsets
        let mut brute = std::collections::HashSet::new();
        for s in subsets(g.len()) {
            let r = rank(&g, &s);
            let mut f = FixedBitSet::with_capacity(g.len());
            for e in 0..g.len() {
                let mut t = s.clone();
                t.push(e);
                if rank(&g, &t) == r {
                    f.insert(e);
                }
            }
            brute.insert(f);
        }
        assert_eq!(distinct, brute);
    }

    #[test]
    fn all_hyperplanes_over_f2() {
        let m = ModPConfiguration::all_hyperplanes(2, 3);
        assert_eq!(m.len(), 7);
        assert_eq!(nbc_counts(&m), vec![1, 7, 14, 8]);
    }
}
