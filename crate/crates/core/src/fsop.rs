//! FS^op-modules: surjections, principal projectives, the pointwise tensor
//! product of two of them, and the module `E ↦ H^i` of the arrangement
//! complements with pullbacks `x_v ↦ x_{v∘φ}`.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{Convention, GradedAlgebra};
use crate::arrangement::{ArrangementSpec, CoefficientSet, GroundSet};
use crate::error::{Error, Result};
use crate::linalg::{RationalEchelon, SparseMatrix};
use crate::symmetric::Permutation;

/// A surjection `[source] ↠ [target]`, as the list of images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Surjection {
    map: Vec<usize>,
    target: usize,
}

impl Surjection {
    pub fn new(map: Vec<usize>, target: usize) -> Result<Self> {
        let mut hit = vec![false; target];
        for &x in &map {
            if x >= target {
                return Err(Error::InvalidSurjection { map, target });
            }
            hit[x] = true;
        }
        if target == 0 || hit.contains(&false) {
            return Err(Error::InvalidSurjection { map, target });
        }
        Ok(Surjection { map, target })
    }

    pub fn identity(n: usize) -> Self {
        Surjection {
            map: (0..n).collect(),
            target: n,
        }
    }

    pub fn from_permutation(sigma: &Permutation) -> Self {
        Surjection {
            map: sigma.images().to_vec(),
            target: sigma.len(),
        }
    }

    pub fn source(&self) -> usize {
        self.map.len()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn apply(&self, k: usize) -> usize {
        self.map[k]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Surjection) -> Surjection {
        assert_eq!(first.target, self.source(), "surjections are not composable");
        Surjection {
            map: first.map.iter().map(|&k| self.map[k]).collect(),
            target: self.target,
        }
    }

    /// Fibers, each sorted, in order of the target.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.target];
        for (k, &x) in self.map.iter().enumerate() {
            out[x].push(k);
        }
        out
    }
}

/// All surjections `[e] ↠ [f]`, lexicographic in the image list.
pub fn enumerate_surjections(e: usize, f: usize) -> Vec<Surjection> {
    let mut out = Vec::new();
    if f == 0 || e < f {
        return out;
    }
    let mut map = vec![0usize; e];
    loop {
        if let Ok(s) = Surjection::new(map.clone(), f) {
            out.push(s);
        }
        let mut k = e;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            map[k] += 1;
            if map[k] < f {
                break;
            }
            map[k] = 0;
        }
    }
}

/// `Σ_k (-1)^k C(f,k) (f-k)^e`.
pub fn surjection_count(e: usize, f: usize) -> BigInt {
    let mut total = BigInt::zero();
    let mut binom = BigInt::from(1);
    for k in 0..=f {
        let term = &binom * BigInt::from(f - k).pow(e as u32);
        if k % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
        binom = binom * (f - k) / (k + 1);
    }
    total
}

/// One surjection `[e] ↠ [f]` per set partition of `[e]` into `f` blocks
/// (restricted growth strings: blocks numbered by first appearance).
pub fn set_partition_surjections(e: usize, f: usize) -> Vec<Surjection> {
    fn go(e: usize, f: usize, map: &mut Vec<usize>, used: usize, out: &mut Vec<Surjection>) {
        if map.len() == e {
            if used == f {
                out.push(Surjection {
                    map: map.clone(),
                    target: f,
                });
            }
            return;
        }
        // not enough positions left to open the remaining blocks
        if f - used > e - map.len() {
            return;
        }
        for b in 0..=used.min(f - 1) {
            map.push(b);
            go(e, f, map, used.max(b + 1), out);
            map.pop();
        }
    }
    let mut out = Vec::new();
    if f >= 1 && e >= f {
        go(e, f, &mut Vec::new(), 0, &mut out);
    }
    out
}

/// `P_F`: at `E` the vector space with basis `Hom_FS(E, F)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrincipalProjective {
    pub base: usize,
}

impl PrincipalProjective {
    pub fn basis(&self, e: usize) -> Vec<Surjection> {
        enumerate_surjections(e, self.base)
    }

    pub fn dimension(&self, e: usize) -> BigInt {
        surjection_count(e, self.base)
    }

    /// `φ^*(e_ψ) = e_{ψ∘φ}`.
    pub fn pullback(&self, phi: &Surjection, basis_element: &Surjection) -> Surjection {
        assert_eq!(basis_element.target, self.base);
        basis_element.after(phi)
    }
}

/// The factorization of one basis element `e_{φ1} ⊗ e_{φ2}` of
/// `(P_{[m1]} ⊗ P_{[m2]})(E)` through `F = image(φ1 × φ2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorCertificate {
    pub phi1: Surjection,
    pub phi2: Surjection,
    /// Elements of `F ⊆ [m1] × [m2]`, sorted; `phi` maps into their positions.
    pub image: Vec<(usize, usize)>,
    pub phi: Surjection,
    pub psi1: Surjection,
    pub psi2: Surjection,
    pub verified: bool,
}

pub fn tensor_generators(m1: usize, m2: usize, e: usize) -> Vec<TensorCertificate> {
    let p1 = PrincipalProjective { base: m1 };
    let p2 = PrincipalProjective { base: m2 };
    let basis1 = p1.basis(e);
    let basis2 = p2.basis(e);
    let index1: HashMap<&Surjection, usize> = basis1.iter().enumerate().map(|(k, s)| (s, k)).collect();
    let index2: HashMap<&Surjection, usize> = basis2.iter().enumerate().map(|(k, s)| (s, k)).collect();
    let mut out = Vec::with_capacity(basis1.len() * basis2.len());
    for phi1 in &basis1 {
        for phi2 in &basis2 {
            let pairs: Vec<(usize, usize)> = (0..e).map(|k| (phi1.apply(k), phi2.apply(k))).collect();
            let image: Vec<(usize, usize)> = pairs.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
            let position: HashMap<(usize, usize), usize> =
                image.iter().enumerate().map(|(k, &p)| (p, k)).collect();
            let phi = Surjection::new(pairs.iter().map(|p| position[p]).collect(), image.len())
                .expect("φ1 × φ2 is onto its image");
            let psi1 = Surjection::new(image.iter().map(|p| p.0).collect(), m1)
                .expect("φ1 is onto, so its coordinate projection is");
            let psi2 = Surjection::new(image.iter().map(|p| p.1).collect(), m2)
                .expect("φ2 is onto, so its coordinate projection is");
            // expand φ^*(e_{ψ1} ⊗ e_{ψ2}) in the basis and compare indices
            let lhs = (index1[phi1], index2[phi2]);
            let rhs = (
                index1[&p1.pullback(&phi, &psi1)],
                index2[&p2.pullback(&phi, &psi2)],
            );
            let verified = lhs == rhs && image.len() <= m1 * m2;
            out.push(TensorCertificate {
                phi1: phi1.clone(),
                phi2: phi2.clone(),
                image,
                phi,
                psi1,
                psi2,
                verified,
            });
        }
    }
    out
}

/// `E ↦` the degree-`degree` piece of the algebra of `A_S(E)`, with
/// pullbacks along surjections.
pub struct BettiModule {
    coefficients: CoefficientSet,
    convention: Convention,
    degree: usize,
    cache: Mutex<HashMap<usize, Arc<GradedAlgebra>>>,
}

impl BettiModule {
    pub fn new(coefficients: CoefficientSet, convention: Convention, degree: usize) -> Self {
        BettiModule {
            coefficients,
            convention,
            degree,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn coefficients(&self) -> &CoefficientSet {
        &self.coefficients
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `|S|^i`.
    pub fn bound(&self) -> usize {
        self.coefficients.generation_bound(self.degree)
    }

    pub fn algebra(&self, size: usize) -> Result<Arc<GradedAlgebra>> {
        if let Some(a) = self.cache.lock().expect("cache poisoned").get(&size) {
            return Ok(a.clone());
        }
        let spec = ArrangementSpec::new(self.coefficients.clone(), size)?;
        let alg = Arc::new(GradedAlgebra::new(
            &GroundSet::build(&spec)?,
            self.convention,
            self.degree,
        )?);
        self.cache
            .lock()
            .expect("cache poisoned")
            .insert(size, alg.clone());
        Ok(alg)
    }

    pub fn dimension(&self, size: usize) -> Result<usize> {
        Ok(self.algebra(size)?.dimension(self.degree))
    }

    /// Generator images of `φ^*`: the hyperplane with normal `a` at `F` goes
    /// to the one containing `a∘φ` at `E`, with the re-canonicalization sign.
    pub fn generator_images(source: &GroundSet, target: &GroundSet, phi: &Surjection) -> Vec<(usize, i8)> {
        source
            .normals()
            .map(|a| {
                let pulled: Vec<i64> = (0..phi.source()).map(|k| a[phi.apply(k)]).collect();
                target
                    .locate_int(&pulled)
                    .expect("pulling back an S-vector along a surjection gives an S-vector")
            })
            .collect()
    }

    /// Matrix of `φ^*` from the nbc basis at `F` to the nbc basis at `E`.
    pub fn pullback_matrix(&self, phi: &Surjection) -> Result<SparseMatrix> {
        let at_f = self.algebra(phi.target())?;
        let at_e = self.algebra(phi.source())?;
        let images = Self::generator_images(at_f.ground(), at_e.ground(), phi);
        at_e.substitution_matrix(&at_f, &images, self.degree)
    }

    /// Whether pullbacks from all `|F| ≤ m` span the value at `[e]`; returns
    /// the rank deficit (0 when generated).
    pub fn certify_generation(&self, e: usize, m: usize) -> Result<usize> {
        let dim = self.dimension(e)?;
        let mut span = RationalEchelon::new();
        for f in 1..=m.min(e) {
            for phi in set_partition_surjections(e, f) {
                if span.rank() == dim {
                    return Ok(0);
                }
                for col in &self.pullback_matrix(&phi)?.columns {
                    span.insert(col);
                }
            }
        }
        Ok(dim - span.rank())
    }

    /// Smallest `m` for which pullbacks from `|F| ≤ m` span the value at `[e]`.
    pub fn minimal_generation_degree(&self, e: usize) -> Result<usize> {
        for m in 1..=e {
            if self.certify_generation(e, m)? == 0 {
                return Ok(m);
            }
        }
        unreachable!("the identity of [e] generates everything")
    }

    pub fn generation_report(&self, e: usize) -> Result<GenerationReport> {
        let bound = self.bound();
        let minimal = self.minimal_generation_degree(e)?;
        let deficit = self.certify_generation(e, bound)?;
        Ok(GenerationReport {
            e,
            i: self.degree,
            bound,
            minimal,
            status: if deficit == 0 {
                GenerationStatus::Generated
            } else {
                GenerationStatus::Deficit
            },
            deficit,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenerationStatus {
    Generated,
    Deficit,
}

/// `{"E": 4, "i": 1, "bound": 2, "minimal": 2, "status": "generated", "deficit": 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationReport {
    #[serde(rename = "E")]
    pub e: usize,
    pub i: usize,
    pub bound: usize,
    pub minimal: usize,
    pub status: GenerationStatus,
    pub deficit: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraElement, Monomial};
    use crate::rational::q;

    fn resonance_module(conv: Convention, degree: usize) -> BettiModule {
        BettiModule::new(CoefficientSet::resonance(), conv, degree)
    }

    #[test]
    fn surjection_counts() {
        assert_eq!(enumerate_surjections(3, 2).len(), 6);
        assert_eq!(enumerate_surjections(4, 4).len(), 24);
        assert!(enumerate_surjections(2, 3).is_empty());
        for e in 1..=7 {
            for f in 1..=5 {
                assert_eq!(BigInt::from(enumerate_surjections(e, f).len()), surjection_count(e, f));
            }
        }
    }

    #[test]
    fn set_partitions_are_stirling_numbers() {
        // S(5, k) for k = 1..5
        let counts: Vec<usize> = (1..=5).map(|f| set_partition_surjections(5, f).len()).collect();
        assert_eq!(counts, vec![1, 15, 25, 10, 1]);
    }

    #[test]
    fn invalid_surjections() {
        assert!(Surjection::new(vec![0, 0], 2).is_err());
        assert!(Surjection::new(vec![0, 2], 2).is_err());
        assert!(Surjection::new(vec![], 0).is_err());
    }

    #[test]
    fn pullback_of_a_generator() {
        // fibers {1,2}, {3}: x_{(1,0)} ↦ x_{(1,1,0)}
        let m = resonance_module(Convention::Cordovil, 1);
        let phi = Surjection::new(vec![0, 0, 1], 2).unwrap();
        let at_f = m.algebra(2).unwrap();
        let at_e = m.algebra(3).unwrap();
        let images = BettiModule::generator_images(at_f.ground(), at_e.ground(), &phi);
        let source = at_f.ground().position(&[1, 0]).unwrap();
        let target = at_e.ground().position(&[1, 1, 0]).unwrap();
        assert_eq!(images[source], (target, 1));
        let x = AlgebraElement::monomial(Convention::Cordovil, &[source]);
        let mut expected = AlgebraElement::zero(Convention::Cordovil, 1);
        expected.add_term(Monomial::from_indices(&[target]), q(1));
        assert_eq!(at_e.straighten(&x.substitute(&images)).unwrap(), expected);
    }

    #[test]
    fn identity_pulls_back_to_identity() {
        for conv in Convention::ALL {
            let m = resonance_module(conv, 2);
            let mat = m.pullback_matrix(&Surjection::identity(3)).unwrap();
            assert_eq!(mat, SparseMatrix::identity(m.dimension(3).unwrap()));
        }
    }

    #[test]
    fn generation_examples() {
        let m = resonance_module(Convention::OrlikSolomon, 1);
        assert_eq!(m.certify_generation(5, 2).unwrap(), 0);
        assert_eq!(m.certify_generation(4, 1).unwrap(), 14);
        assert_eq!(m.minimal_generation_degree(4).unwrap(), 2);
        let m0 = resonance_module(Convention::Cordovil, 0);
        assert_eq!(m0.minimal_generation_degree(4).unwrap(), 1);
        let report = m.generation_report(4).unwrap();
        assert_eq!(
            serde_json::to_string(&report).unwrap(),
            r#"{"E":4,"i":1,"bound":2,"minimal":2,"status":"generated","deficit":0}"#
        );
    }

    #[test]
    fn tensor_example() {
        let certs = tensor_generators(2, 2, 3);
        let c = certs
            .iter()
            .find(|c| c.phi1.map() == [0, 0, 1] && c.phi2.map() == [0, 1, 1])
            .unwrap();
        assert_eq!(c.image, vec![(0, 0), (0, 1), (1, 1)]);
        assert!(certs.iter().all(|c| c.verified));
        assert!(tensor_generators(1, 1, 4).iter().all(|c| c.image.len() == 1));
    }
}
