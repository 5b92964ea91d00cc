//! Construction of the arrangement A_S(n): every hyperplane of ℝ^n whose
//! normal is a nonzero vector with entries in a finite coefficient set S.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Q};
use crate::symmetric::Permutation;

/// The finite coefficient set S, sorted ascending with no repeats.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoefficientSet {
    values: Vec<Q>,
}

impl CoefficientSet {
    pub fn new(mut values: Vec<Q>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyCoefficientSet);
        }
        values.sort();
        if let Some(w) = values.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateCoefficient(format_rational(&w[0])));
        }
        Ok(CoefficientSet { values })
    }

    pub fn from_integers(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Q::from_integer(v.into())).collect())
    }

    /// Parses a comma-separated list such as `"0,1"` or `"-1,1/2"`.
    pub fn parse(text: &str) -> Result<Self> {
        let values = text
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }

    /// S = {0, 1}.
    pub fn resonance() -> Self {
        Self::from_integers(&[0, 1]).unwrap()
    }

    /// S = {-1, 1}.
    pub fn threshold() -> Self {
        Self::from_integers(&[-1, 1]).unwrap()
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn has_nonzero(&self) -> bool {
        self.values.iter().any(|v| !v.is_zero())
    }

    /// |S|^i, the degree bound for generation of the degree-i piece.
    pub fn generation_bound(&self, degree: usize) -> usize {
        self.len().pow(degree as u32)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.values.iter().map(format_rational).collect()
    }
}

impl fmt::Display for CoefficientSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_strings().join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArrangementSpec {
    pub coefficients: CoefficientSet,
    pub rank: usize,
}

impl ArrangementSpec {
    pub fn new(coefficients: CoefficientSet, rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        if !coefficients.has_nonzero() {
            return Err(Error::ZeroOnlyCoefficientSet);
        }
        Ok(ArrangementSpec { coefficients, rank })
    }

    pub fn resonance(n: usize) -> Result<Self> {
        Self::new(CoefficientSet::resonance(), n)
    }

    pub fn threshold(n: usize) -> Result<Self> {
        Self::new(CoefficientSet::threshold(), n)
    }
}

/// Primitive integer normal with first nonzero entry positive, together with
/// the sign relating `v` to it. Returns `None` for the zero vector.
pub fn canonicalize(v: &[Q]) -> Option<(Vec<i64>, i8)> {
    let first = v.iter().find(|x| !x.is_zero())?;
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign: i8 = if first.is_positive() { 1 } else { -1 };
    let normal = ints
        .iter()
        .map(|x| {
            let y = x / &g * BigInt::from(sign);
            y.to_i64().expect("canonical normal entry exceeds i64")
        })
        .collect();
    Some((normal, sign))
}

/// Canonical form of an integer vector (used when permuting or pulling back
/// normals that are already integral).
pub fn canonicalize_int(v: &[i64]) -> Option<(Vec<i64>, i8)> {
    let first = *v.iter().find(|&&x| x != 0)?;
    let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    let sign: i8 = if first > 0 { 1 } else { -1 };
    Some((v.iter().map(|&x| x / g * sign as i64).collect(), sign))
}

/// Canonical ground-set order: compare coordinates starting from the last
/// one. For S = {0,1} this lists e_1, e_2, e_1+e_2, e_3, ... i.e. normals in
/// the order of the binary numbers they spell with x_1 as the low bit.
pub fn canonical_order(a: &[i64], b: &[i64]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    pub normal: Vec<i64>,
    /// An S-vector whose canonical normal is `normal`.
    pub representative: Vec<Q>,
    /// `representative` is a positive (+1) or negative (-1) multiple of `normal`.
    pub orientation: i8,
}

/// The deduplicated hyperplanes of A_S(n). Index order is the order used by
/// every broken-circuit computation.
#[derive(Clone, Debug)]
pub struct GroundSet {
    spec: ArrangementSpec,
    hyperplanes: Vec<Hyperplane>,
    index: HashMap<Vec<i64>, usize>,
}

impl GroundSet {
    pub fn build(spec: &ArrangementSpec) -> Result<Self> {
        let n = spec.rank;
        let s = spec.coefficients.values();
        let mut found: HashMap<Vec<i64>, Hyperplane> = HashMap::new();
        let mut digits = vec![0usize; n];
        loop {
            let v: Vec<Q> = digits.iter().map(|&d| s[d].clone()).collect();
            if let Some((normal, orientation)) = canonicalize(&v) {
                let better = |h: &Hyperplane| h.orientation < 0 && orientation > 0;
                match found.get_mut(&normal) {
                    Some(h) if better(h) => {
                        h.representative = v;
                        h.orientation = orientation;
                    }
                    Some(_) => {}
                    None => {
                        found.insert(
                            normal.clone(),
                            Hyperplane {
                                normal,
                                representative: v,
                                orientation,
                            },
                        );
                    }
                }
            }
            // odometer over S^n
            let mut k = 0;
            while k < n {
                digits[k] += 1;
                if digits[k] < s.len() {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
        let mut hyperplanes: Vec<Hyperplane> = found.into_values().collect();
        hyperplanes.sort_by(|a, b| canonical_order(&a.normal, &b.normal));
        Ok(Self::from_parts(spec.clone(), hyperplanes))
    }

    fn from_parts(spec: ArrangementSpec, hyperplanes: Vec<Hyperplane>) -> Self {
        let index = hyperplanes
            .iter()
            .enumerate()
            .map(|(i, h)| (h.normal.clone(), i))
            .collect();
        GroundSet {
            spec,
            hyperplanes,
            index,
        }
    }

    /// The same hyperplanes listed as `order[0], order[1], ...` (indices into
    /// the current order). Used to check order independence.
    pub fn reordered(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.len());
        let hyperplanes = order.iter().map(|&i| self.hyperplanes[i].clone()).collect();
        Self::from_parts(self.spec.clone(), hyperplanes)
    }

    pub fn reversed(&self) -> Self {
        let order: Vec<usize> = (0..self.len()).rev().collect();
        self.reordered(&order)
    }

    pub fn spec(&self) -> &ArrangementSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.rank
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn hyperplane(&self, i: usize) -> &Hyperplane {
        &self.hyperplanes[i]
    }

    pub fn normal(&self, i: usize) -> &[i64] {
        &self.hyperplanes[i].normal
    }

    pub fn normals(&self) -> impl Iterator<Item = &[i64]> {
        self.hyperplanes.iter().map(|h| h.normal.as_slice())
    }

    pub fn position(&self, normal: &[i64]) -> Option<usize> {
        self.index.get(normal).copied()
    }

    /// Hyperplane of an arbitrary nonzero integer vector, with the sign
    /// relating the vector to the canonical normal.
    pub fn locate_int(&self, v: &[i64]) -> Option<(usize, i8)> {
        let (normal, sign) = canonicalize_int(v)?;
        Some((self.position(&normal)?, sign))
    }

    pub fn locate(&self, v: &[Q]) -> Option<(usize, i8)> {
        let (normal, sign) = canonicalize(v)?;
        Some((self.position(&normal)?, sign))
    }

    /// Signed permutation of the ground set induced by permuting coordinates:
    /// `(σ·a)_{σ(k)} = a_k`. Entry `h` is `(h', ε)` with `σ·a_h = ε·a_{h'}`.
    pub fn signed_permutation(&self, sigma: &Permutation) -> Vec<(usize, i8)> {
        assert_eq!(sigma.len(), self.dim());
        self.hyperplanes
            .iter()
            .map(|h| {
                let mut moved = vec![0i64; self.dim()];
                for (k, &a) in h.normal.iter().enumerate() {
                    moved[sigma.apply(k)] = a;
                }
                self.locate_int(&moved)
                    .expect("coordinate permutations preserve A_S(n)")
            })
            .collect()
    }

    pub fn to_json(&self) -> ArrangementJson {
        ArrangementJson {
            s: self.spec.coefficients.to_strings(),
            n: self.spec.rank,
            hyperplanes: self.hyperplanes.iter().map(|h| h.normal.clone()).collect(),
        }
    }
}

/// Wire form `{"S": ["0","1"], "n": 2, "hyperplanes": [[1,0],[0,1],[1,1]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementJson {
    #[serde(rename = "S")]
    pub s: Vec<String>,
    pub n: usize,
    pub hyperplanes: Vec<Vec<i64>>,
}

impl ArrangementJson {
    /// Rebuilds the arrangement and checks that the stored hyperplanes match.
    pub fn rebuild(&self) -> Result<GroundSet> {
        let values = self
            .s
            .iter()
            .map(|x| parse_rational(x))
            .collect::<Result<Vec<_>>>()?;
        let spec = ArrangementSpec::new(CoefficientSet::new(values)?, self.n)?;
        let ground = GroundSet::build(&spec)?;
        let normals: Vec<Vec<i64>> = ground.normals().map(|v| v.to_vec()).collect();
        if normals != self.hyperplanes {
            return Err(Error::Json(serde::de::Error::custom(
                "hyperplane list does not match the arrangement",
            )));
        }
        Ok(ground)
    }
}
