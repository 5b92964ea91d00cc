//! Σ_n-characters of the graded pieces, their decomposition into
//! irreducibles, and the derived row-bound and padded-multiplicity reports.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Convention, GradedAlgebra};
use crate::arrangement::{ArrangementSpec, CoefficientSet, GroundSet};
use crate::chambers::{fixed_chambers, SignVector};
use crate::error::{Error, Result};
use crate::linalg::solve_exact;
use crate::rational::{format_rational, pow_q, q, Q};
use crate::symmetric::{partitions, CharacterTable, Partition, Permutation};

/// A class function on Σ_n, one value per cycle type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterVector {
    n: usize,
    values: BTreeMap<Partition, Q>,
}

impl CharacterVector {
    /// Evaluates `f` on every cycle type of `n`.
    pub fn from_fn(n: usize, f: impl Fn(&Partition) -> Q) -> Self {
        let values = partitions(n).into_iter().map(|mu| {
            let v = f(&mu);
            (mu, v)
        });
        CharacterVector {
            n,
            values: values.collect(),
        }
    }

    pub fn try_from_fn(n: usize, f: impl Fn(&Partition) -> Result<Q> + Sync) -> Result<Self> {
        let values = partitions(n)
            .into_par_iter()
            .map(|mu| f(&mu).map(|v| (mu, v)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(CharacterVector { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, cycle_type: &Partition) -> &Q {
        &self.values[cycle_type]
    }

    pub fn values(&self) -> &BTreeMap<Partition, Q> {
        &self.values
    }

    /// Value at the identity.
    pub fn dimension(&self) -> &Q {
        self.value(&Partition::new(vec![1; self.n]))
    }

    pub fn add(&self, other: &CharacterVector) -> CharacterVector {
        assert_eq!(self.n, other.n);
        CharacterVector {
            n: self.n,
            values: self
                .values
                .iter()
                .map(|(mu, v)| (mu.clone(), v + other.value(mu)))
                .collect(),
        }
    }

    /// `⟨χ, ψ⟩ = Σ_μ χ(μ) ψ(μ) / z_μ` (characters are real).
    pub fn inner_product(&self, other: &CharacterVector) -> Q {
        self.values
            .iter()
            .map(|(mu, v)| v * other.value(mu) / Q::from_integer(mu.centralizer_order()))
            .sum()
    }

    pub fn irreducible(lambda: &Partition, table: &mut CharacterTable) -> Self {
        let n = lambda.size();
        let mut values = BTreeMap::new();
        for mu in partitions(n) {
            let v = Q::from_integer(table.value(lambda, &mu));
            values.insert(mu, v);
        }
        CharacterVector { n, values }
    }

    /// `{"2+1+1": "0", ...}`.
    pub fn to_json(&self) -> BTreeMap<String, String> {
        self.values
            .iter()
            .map(|(mu, v)| (mu.to_string(), format_rational(v)))
            .collect()
    }
}

/// Character of the degree-`degree` piece.
pub fn character(alg: &GradedAlgebra, degree: usize) -> Result<CharacterVector> {
    CharacterVector::try_from_fn(alg.ground().dim(), |mu| {
        alg.trace(&Permutation::from_cycle_type(mu), degree)
    })
}

/// Sum of the characters of all graded pieces.
pub fn total_character(alg: &GradedAlgebra) -> Result<CharacterVector> {
    CharacterVector::try_from_fn(alg.ground().dim(), |mu| {
        let sigma = Permutation::from_cycle_type(mu);
        let mut t = Q::zero();
        for i in 0..=alg.max_degree() {
            t += alg.trace(&sigma, i)?;
        }
        Ok(t)
    })
}

/// Permutation character of the chambers.
pub fn chamber_character(ground: &GroundSet, chambers: &[SignVector]) -> CharacterVector {
    CharacterVector::from_fn(ground.dim(), |mu| {
        q(fixed_chambers(ground, chambers, &Permutation::from_cycle_type(mu)) as i64)
    })
}

/// Multiplicity of every irreducible. Fails unless all multiplicities are
/// nonnegative integers and `Σ mult · dim` equals the dimension.
pub fn decompose(chi: &CharacterVector) -> Result<BTreeMap<Partition, BigInt>> {
    let mut table = CharacterTable::new();
    let mut out = BTreeMap::new();
    let mut total = BigInt::zero();
    for lambda in partitions(chi.n) {
        let m = chi.inner_product(&CharacterVector::irreducible(&lambda, &mut table));
        if m.is_negative() || !m.is_integer() {
            return Err(Error::NonCharacter {
                partition: lambda.to_string(),
                value: format_rational(&m),
            });
        }
        let m = m.to_integer();
        total += &m * lambda.dimension();
        if !m.is_zero() {
            out.insert(lambda, m);
        }
    }
    if Q::from_integer(total.clone()) != *chi.dimension() {
        return Err(Error::NonCharacter {
            partition: "dimension".into(),
            value: total.to_string(),
        });
    }
    Ok(out)
}

/// `{"3+1": 2, ...}` with integer multiplicities.
pub fn decomposition_json(d: &BTreeMap<Partition, BigInt>) -> BTreeMap<String, serde_json::Value> {
    d.iter()
        .map(|(l, m)| {
            let v = match i64::try_from(m) {
                Ok(x) => serde_json::Value::from(x),
                Err(_) => serde_json::Value::from(m.to_string()),
            };
            (l.to_string(), v)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowBoundReport {
    pub bound: usize,
    pub holds: bool,
    pub violators: Vec<String>,
    pub multiplicities: BTreeMap<String, serde_json::Value>,
}

/// Checks that every constituent of the degree-`degree` piece has at most
/// `|S|^degree` rows.
pub fn row_bound_report(alg: &GradedAlgebra, degree: usize) -> Result<RowBoundReport> {
    let bound = alg.ground().spec().coefficients.generation_bound(degree);
    let d = decompose(&character(alg, degree)?)?;
    let violators: Vec<String> = d
        .keys()
        .filter(|l| l.rows() > bound)
        .map(|l| l.to_string())
        .collect();
    Ok(RowBoundReport {
        bound,
        holds: violators.is_empty(),
        violators,
        multiplicities: decomposition_json(&d),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaddedRow {
    pub n: usize,
    pub partition: String,
    pub multiplicity: String,
    pub residual: String,
}

/// Multiplicities of `V_{λ(n)}` over a range of `n`, with an exact
/// least-squares polynomial fit (coefficients of `n^0, n^1, ..`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaddedTable {
    pub core: String,
    pub degree: usize,
    pub fit_degree: usize,
    pub fit: Vec<String>,
    pub rows: Vec<PaddedRow>,
}

pub fn padded_multiplicity(
    s: &CoefficientSet,
    convention: Convention,
    degree: usize,
    core: &Partition,
    n: usize,
) -> Result<BigInt> {
    let target = core.padded(n)?;
    let ground = GroundSet::build(&ArrangementSpec::new(s.clone(), n)?)?;
    let alg = GradedAlgebra::new(&ground, convention, degree)?;
    let chi = character(&alg, degree)?;
    let mut table = CharacterTable::new();
    let m = chi.inner_product(&CharacterVector::irreducible(&target, &mut table));
    if m.is_negative() || !m.is_integer() {
        return Err(Error::NonCharacter {
            partition: target.to_string(),
            value: format_rational(&m),
        });
    }
    Ok(m.to_integer())
}

pub fn padded_multiplicity_table(
    s: &CoefficientSet,
    convention: Convention,
    degree: usize,
    core: &Partition,
    n_range: impl IntoIterator<Item = usize>,
    fit_degree: usize,
) -> Result<PaddedTable> {
    let ns: Vec<usize> = n_range.into_iter().collect();
    let needed = core.size() + core.first_row();
    if let Some(&n) = ns.iter().find(|&&n| n < needed) {
        return Err(Error::PadTooSmall { n, needed });
    }
    let mults = ns
        .iter()
        .map(|&n| padded_multiplicity(s, convention, degree, core, n))
        .collect::<Result<Vec<_>>>()?;
    let ys: Vec<Q> = mults.iter().map(|m| Q::from_integer(m.clone())).collect();
    let fit = least_squares_polynomial(&ns, &ys, fit_degree);
    let rows = ns
        .iter()
        .zip(&ys)
        .map(|(&n, y)| {
            let predicted: Q = fit
                .iter()
                .enumerate()
                .map(|(k, c)| c * pow_q(&q(n as i64), k))
                .sum();
            PaddedRow {
                n,
                partition: core.padded(n).expect("checked above").to_string(),
                multiplicity: format_rational(y),
                residual: format_rational(&(y - predicted)),
            }
        })
        .collect();
    Ok(PaddedTable {
        core: core.to_string(),
        degree,
        fit_degree,
        fit: fit.iter().map(format_rational).collect(),
        rows,
    })
}

/// Exact least squares via the normal equations; the degree is lowered to
/// fit the number of points.
fn least_squares_polynomial(xs: &[usize], ys: &[Q], degree: usize) -> Vec<Q> {
    if xs.is_empty() {
        return Vec::new();
    }
    let d = degree.min(xs.len() - 1);
    let powers: Vec<Vec<Q>> = xs
        .iter()
        .map(|&x| (0..=d).map(|k| pow_q(&q(x as i64), k)).collect())
        .collect();
    let gram: Vec<Vec<Q>> = (0..=d)
        .map(|r| {
            (0..=d)
                .map(|c| powers.iter().map(|p| &p[r] * &p[c]).sum())
                .collect()
        })
        .collect();
    let rhs: Vec<Q> = (0..=d)
        .map(|r| powers.iter().zip(ys).map(|(p, y)| &p[r] * y).sum())
        .collect();
    solve_exact(&gram, &rhs).expect("distinct sample points give an invertible Gram matrix")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chambers::enumerate_chambers;
    use crate::symmetric::factorial;

    fn resonance(n: usize) -> GroundSet {
        GroundSet::build(&ArrangementSpec::resonance(n).unwrap()).unwrap()
    }

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn degree_one_resonance_is_a_permutation_module() {
        let alg = GradedAlgebra::new(&resonance(3), Convention::OrlikSolomon, 1).unwrap();
        let chi = character(&alg, 1).unwrap();
        assert_eq!(*chi.dimension(), q(7));
        // orbits of sizes 3, 3, 1: a transposition fixes 1 + 1 + 1
        assert_eq!(*chi.value(&p("2+1")), q(3));
        assert_eq!(*chi.value(&p("3")), q(1));
        let d = decompose(&chi).unwrap();
        assert_eq!(d, BTreeMap::from([(p("3"), BigInt::from(3)), (p("2+1"), BigInt::from(2))]));
    }

    #[test]
    fn trivial_and_regular_characters() {
        for n in 1..=5 {
            let trivial = CharacterVector::from_fn(n, |_| q(1));
            assert_eq!(decompose(&trivial).unwrap(), BTreeMap::from([(Partition::new(vec![n]), BigInt::from(1))]));
            let regular = CharacterVector::from_fn(n, |mu| {
                if mu.parts().iter().all(|&x| x == 1) {
                    Q::from_integer(factorial(n))
                } else {
                    q(0)
                }
            });
            for (l, m) in decompose(&regular).unwrap() {
                assert_eq!(m, l.dimension());
            }
        }
    }

    #[test]
    fn non_characters_are_rejected() {
        let half = CharacterVector::from_fn(3, |_| crate::rational::q_frac(1, 2));
        assert!(matches!(decompose(&half), Err(Error::NonCharacter { .. })));
        let negative = CharacterVector::from_fn(2, |_| q(-1));
        assert!(matches!(decompose(&negative), Err(Error::NonCharacter { .. })));
    }

    #[test]
    fn cordovil_total_character_in_the_plane() {
        let g = resonance(2);
        let alg = GradedAlgebra::new(&g, Convention::Cordovil, 2).unwrap();
        let swap = p("2");
        let per_degree: Vec<Q> = (0..=2)
            .map(|i| character(&alg, i).unwrap().value(&swap).clone())
            .collect();
        assert_eq!(per_degree, vec![q(1), q(1), q(0)]);
        let total = total_character(&alg).unwrap();
        let ch = enumerate_chambers(&g).unwrap();
        assert_eq!(total, chamber_character(&g, &ch));
    }

    #[test]
    fn row_bound_small_cases() {
        let alg = GradedAlgebra::new(&resonance(3), Convention::OrlikSolomon, 1).unwrap();
        let r = row_bound_report(&alg, 1).unwrap();
        assert!(r.holds);
        assert_eq!(r.bound, 2);
    }

    #[test]
    fn padded_tables() {
        let s = CoefficientSet::resonance();
        let t = padded_multiplicity_table(&s, Convention::OrlikSolomon, 0, &Partition::empty(), 1..=4, 1)
            .unwrap();
        assert!(t.rows.iter().all(|r| r.multiplicity == "1" && r.residual == "0"));
        assert_eq!(t.fit, vec!["1", "0"]);
        let t = padded_multiplicity_table(&s, Convention::OrlikSolomon, 1, &Partition::empty(), 1..=5, 1)
            .unwrap();
        let m: Vec<&str> = t.rows.iter().map(|r| r.multiplicity.as_str()).collect();
        assert_eq!(m, vec!["1", "2", "3", "4", "5"]);
        assert!(matches!(
            padded_multiplicity_table(&s, Convention::OrlikSolomon, 1, &p("2+1"), 4..=5, 1),
            Err(Error::PadTooSmall { n: 4, needed: 5 })
        ));
    }
}
