//! Degree-i piece of the algebra computed directly: all squarefree monomials
//! modulo the span of `x_A · r_C` over all circuits `C` and monomials `A`.
//!
//! Shares nothing with the nbc machinery except the generator substitution.
//! Circuits are found by exhaustive subset search and the Cordovil signs by
//! solving for the dependency, so this is only practical for small ground sets.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use crate::algebra::{merge_sign, AlgebraElement, Convention, Monomial};
use crate::arrangement::GroundSet;
use crate::error::{Error, Result};
use crate::linalg::{solve_exact, RationalEchelon, SparseVec};
use crate::matroid::rank;
use crate::rational::{q, Q};
use crate::symmetric::Permutation;

/// Exhaustive search grows as 2^|ground|.
pub const ORACLE_LIMIT: usize = 16;

pub struct QuotientOracle {
    ground: GroundSet,
    convention: Convention,
    degree: usize,
    monomials: Vec<u128>,
    index: HashMap<u128, usize>,
    relations: RationalEchelon,
    basis: Vec<usize>,
}

fn subsets_of_size(len: usize, size: usize) -> Vec<u128> {
    (0u128..1 << len)
        .filter(|m| m.count_ones() as usize == size)
        .collect()
}

fn members(m: u128) -> Vec<usize> {
    Monomial(m).indices()
}

/// Minimal dependent sets by brute force.
fn brute_circuits(ground: &GroundSet, max_size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 2..=max_size {
        for m in subsets_of_size(ground.len(), size) {
            let c = members(m);
            if rank(ground, &c) == size - 1
                && (0..size).all(|skip| {
                    let rest: Vec<usize> = (0..size).filter(|&k| k != skip).map(|k| c[k]).collect();
                    rank(ground, &rest) == size - 1
                })
            {
                out.push(c);
            }
        }
    }
    out
}

/// `Σ_j s_j x_{C∖c_j}` with `s_j = (-1)^j` (OS) or `sign λ_j` (Cordovil).
fn relation(ground: &GroundSet, convention: Convention, c: &[usize]) -> AlgebraElement {
    let mask = Monomial::from_indices(c).0;
    let signs: Vec<i64> = match convention {
        Convention::OrlikSolomon => (0..c.len()).map(|j| if j % 2 == 0 { 1 } else { -1 }).collect(),
        Convention::Cordovil => {
            let n = ground.dim();
            let a: Vec<Vec<Q>> = (0..n)
                .map(|r| c[1..].iter().map(|&e| q(ground.normal(e)[r])).collect())
                .collect();
            let b: Vec<Q> = (0..n).map(|r| q(-ground.normal(c[0])[r])).collect();
            let lambda = solve_exact(&a, &b).expect("circuit is dependent");
            std::iter::once(1)
                .chain(lambda.iter().map(|l| if l.is_positive() { 1 } else { -1 }))
                .collect()
        }
    };
    let mut r = AlgebraElement::zero(convention, c.len() - 1);
    for (j, s) in signs.iter().enumerate() {
        r.add_term(Monomial(mask & !(1u128 << c[j])), q(*s));
    }
    r
}

impl QuotientOracle {
    pub fn new(ground: &GroundSet, convention: Convention, degree: usize) -> Result<Self> {
        if ground.len() > ORACLE_LIMIT {
            return Err(Error::LimitExceeded {
                hyperplanes: ground.len(),
                limit: ORACLE_LIMIT,
            });
        }
        let monomials = subsets_of_size(ground.len(), degree);
        let index: HashMap<u128, usize> =
            monomials.iter().enumerate().map(|(k, &m)| (m, k)).collect();
        let mut relations = RationalEchelon::new();
        for c in brute_circuits(ground, degree + 1) {
            let r = relation(ground, convention, &c);
            for a in subsets_of_size(ground.len(), degree + 1 - c.len()) {
                let mut vec = SparseVec::new();
                for (m, coeff) in r.terms() {
                    if a & m.0 != 0 {
                        continue;
                    }
                    let sign = match convention {
                        Convention::OrlikSolomon => merge_sign(a, m.0),
                        Convention::Cordovil => 1,
                    };
                    let e = vec.entry(index[&(a | m.0)]).or_insert_with(Q::zero);
                    *e += coeff * q(sign as i64);
                }
                relations.insert(&vec);
            }
        }
        let pivots: Vec<usize> = relations.pivots().collect();
        let basis = (0..monomials.len()).filter(|k| !pivots.contains(k)).collect();
        Ok(QuotientOracle {
            ground: ground.clone(),
            convention,
            degree,
            monomials,
            index,
            relations,
            basis,
        })
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Trace of σ, computed on the non-pivot monomials.
    pub fn trace(&self, sigma: &Permutation) -> Q {
        let images = self.ground.signed_permutation(sigma);
        let mut total = Q::zero();
        for &k in &self.basis {
            let m = self.monomials[k];
            let mut e = AlgebraElement::zero(self.convention, self.degree);
            e.add_term(Monomial(m), q(1));
            let image = e.substitute(&images);
            let vec: SparseVec = image
                .terms()
                .iter()
                .map(|(mm, c)| (self.index[&mm.0], c.clone()))
                .collect();
            if let Some(c) = self.relations.reduce(&vec).get(&k) {
                total += c;
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GradedAlgebra;
    use crate::arrangement::ArrangementSpec;
    use crate::matroid::circuits;

    #[test]
    fn brute_circuits_agree_with_search() {
        let g = GroundSet::build(&ArrangementSpec::resonance(3).unwrap()).unwrap();
        let fast: Vec<Vec<usize>> = circuits(&g, 4).into_iter().map(|c| c.elements).collect();
        let mut slow = brute_circuits(&g, 4);
        slow.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        assert_eq!(fast, slow);
    }

    #[test]
    fn resonance_plane_matches() {
        let g = GroundSet::build(&ArrangementSpec::resonance(2).unwrap()).unwrap();
        let swap = Permutation::new(vec![1, 0]).unwrap();
        for conv in Convention::ALL {
            let alg = GradedAlgebra::new(&g, conv, 2).unwrap();
            for i in 0..=2 {
                let o = QuotientOracle::new(&g, conv, i).unwrap();
                assert_eq!(o.dimension(), alg.dimension(i));
                assert_eq!(o.trace(&swap), alg.trace(&swap, i).unwrap());
            }
        }
    }
}
