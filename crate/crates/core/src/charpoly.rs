//! Characteristic polynomial of A_S(n), computed two independent ways:
//! Whitney's nbc count, and point counts over finite fields followed by
//! interpolation.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangement::GroundSet;
use crate::error::{Error, Result};
use crate::linalg::{mod_inverse, mul_mod, to_mod_p};
use crate::matroid::{
    for_each_flat, nbc_counts, LinearMatroid, ModPConfiguration, RationalConfiguration,
};
use crate::rational::{format_rational, parse_rational, pow_q, q, Q};

/// Monic polynomial of degree n, coefficients listed from t^n down to t^0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    coefficients: Vec<Q>,
}

impl CharPoly {
    pub fn new(coefficients: Vec<Q>) -> Self {
        assert!(!coefficients.is_empty());
        CharPoly { coefficients }
    }

    /// Σ_i (-1)^i counts[i] t^{n-i}.
    pub fn from_counts(n: usize, counts: &[u128]) -> Self {
        let coefficients = (0..=n)
            .map(|i| {
                let c = Q::from_integer(BigInt::from(counts.get(i).copied().unwrap_or(0)));
                if i % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect();
        CharPoly { coefficients }
    }

    /// (t-1)(t-q)...(t-q^{n-1}).
    pub fn q_product(q_value: u64, n: usize) -> Self {
        let mut coeffs = vec![Q::one()]; // descending powers
        let mut root = Q::one();
        let base = q(q_value as i64);
        for _ in 0..n {
            let mut next = coeffs.clone();
            next.push(Q::zero());
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] -= c * &root;
            }
            coeffs = next;
            root *= &base;
        }
        CharPoly::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[Q] {
        &self.coefficients
    }

    /// Coefficient of t^{n-i}.
    pub fn coefficient(&self, i: usize) -> &Q {
        &self.coefficients[i]
    }

    pub fn evaluate(&self, t: &Q) -> Q {
        self.coefficients
            .iter()
            .fold(Q::zero(), |acc, c| acc * t + c)
    }

    pub fn to_json(&self) -> CharPolyJson {
        CharPolyJson {
            coeffs: self.coefficients.iter().map(format_rational).collect(),
        }
    }
}

/// Wire form `{"coeffs": ["1","-7","15","-9"]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharPolyJson {
    pub coeffs: Vec<String>,
}

impl CharPolyJson {
    pub fn parse(&self) -> Result<CharPoly> {
        let c = self
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(CharPoly::new(c))
    }
}

pub fn char_poly_nbc(ground: &GroundSet) -> CharPoly {
    let counts = nbc_counts(&RationalConfiguration::new(ground));
    CharPoly::from_counts(ground.dim(), &counts)
}

/// b^i = (-1)^i · [t^{n-i}]χ.
pub fn betti_numbers(chi: &CharPoly) -> Result<Vec<BigInt>> {
    chi.coefficients
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let b = if i % 2 == 0 { c.clone() } else { -c.clone() };
            if b.is_negative() || !b.is_integer() || (i == 0 && !b.is_one()) {
                return Err(Error::NonAlternating {
                    exponent: chi.degree() - i,
                });
            }
            Ok(b.to_integer())
        })
        .collect()
}

/// Σ |coefficients| = (-1)^n χ(-1).
pub fn chamber_count(chi: &CharPoly) -> BigInt {
    let v = chi.evaluate(&q(-1));
    let v = if chi.degree().is_multiple_of(2) { v } else { -v };
    v.to_integer()
}

/// Upper bound on |det| of any square submatrix of the normals (Hadamard).
/// Any prime above it reduces every rank exactly.
pub fn minor_bound(ground: &GroundSet) -> u128 {
    let max_sq = ground
        .normals()
        .map(|v| v.iter().map(|&x| (x as i128 * x as i128) as u128).sum::<u128>())
        .max()
        .unwrap_or(1)
        .max(1);
    // every k x k minor with k <= n is at most max_norm^k <= sqrt(max_sq^n)
    max_sq.saturating_pow(ground.dim() as u32).sqrt()
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The `count` smallest primes exceeding [`minor_bound`].
pub fn certified_primes(ground: &GroundSet, count: usize) -> Vec<u64> {
    let bound = minor_bound(ground);
    let mut p = u64::try_from(bound).expect("minor bound exceeds u64") + 1;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        if is_prime(p) {
            out.push(p);
        }
        p += 1;
    }
    out
}

/// Checks that reduction mod `prime` preserves the lattice of flats: for
/// every flat over ℚ, its basis stays independent mod p and the parallel
/// classes of the contraction are exactly the same.
pub fn validate_prime(ground: &GroundSet, prime: u64) -> Result<()> {
    if !is_prime(prime) {
        return Err(Error::BadPrime {
            prime,
            reason: "not a prime".into(),
        });
    }
    if u128::from(prime) > minor_bound(ground) {
        return Ok(());
    }
    let reduced = ModPConfiguration::reduction(ground, prime);
    let exact = RationalConfiguration::new(ground);
    let mut failure = None;
    for_each_flat(&exact, |_, spanning, classes| {
        let mut basis = reduced.empty_basis();
        for &e in spanning {
            if !reduced.extend(&mut basis, e) {
                failure = Some(format!("rank drop on {spanning:?}"));
                return false;
            }
        }
        for class in classes {
            let Some(key) = reduced.residual_class(&basis, class[0]) else {
                failure = Some(format!("hyperplane {} collapses into {spanning:?}", class[0]));
                return false;
            };
            for &e in &class[1..] {
                if reduced.residual_class(&basis, e).as_ref() != Some(&key) {
                    failure = Some(format!("class {class:?} splits modulo {prime}"));
                    return false;
                }
            }
        }
        let mut keys: Vec<Vec<u64>> = classes
            .iter()
            .filter_map(|c| reduced.residual_class(&basis, c[0]))
            .collect();
        keys.sort();
        keys.dedup();
        if keys.len() != classes.len() {
            failure = Some(format!("distinct classes merge over {spanning:?}"));
            return false;
        }
        true
    });
    match failure {
        Some(reason) => Err(Error::BadPrime { prime, reason }),
        None => Ok(()),
    }
}

/// Number of points of F_q^n on none of the hyperplanes reduced mod `q`.
///
/// The complement is stable under F_q^* scaling, so only points whose first
/// nonzero coordinate is 1 are enumerated. Hyperplanes are tested as soon as
/// their last nonzero coordinate is fixed, and the final coordinate is counted
/// rather than enumerated: each hyperplane involving it excludes one value.
pub fn count_complement_points(ground: &GroundSet, q_value: u64) -> u128 {
    let n = ground.dim();
    let normals: Vec<Vec<u64>> = ground
        .normals()
        .map(|v| v.iter().map(|&x| to_mod_p(x, q_value)).collect())
        .collect();
    if normals.iter().any(|v| v.iter().all(|&x| x == 0)) {
        return 0;
    }
    let last_support: Vec<usize> = normals
        .iter()
        .map(|v| v.iter().rposition(|&x| x != 0).unwrap())
        .collect();
    let counter = PointCounter {
        q: q_value,
        n,
        normals,
        closing: (0..n)
            .map(|k| {
                (0..last_support.len())
                    .filter(|&h| last_support[h] == k)
                    .collect()
            })
            .collect(),
    };
    let projective: u128 = (0..n)
        .into_par_iter()
        .map(|lead| counter.count_with_lead(lead))
        .sum();
    projective * u128::from(q_value - 1)
}

struct PointCounter {
    q: u64,
    n: usize,
    normals: Vec<Vec<u64>>,
    /// hyperplanes grouped by their last nonzero coordinate
    closing: Vec<Vec<usize>>,
}

impl PointCounter {
    fn count_with_lead(&self, lead: usize) -> u128 {
        // Coordinates before `lead` are zero, so any hyperplane supported
        // there contains every such point.
        if self.closing[..lead].iter().any(|c| !c.is_empty()) {
            return 0;
        }
        let mut partial = vec![0u64; self.normals.len()];
        self.assign(lead, 1, &mut partial);
        if !self.survives(lead, &partial) {
            return 0;
        }
        if lead + 1 == self.n {
            return 1;
        }
        if lead + 2 == self.n {
            return self.count_last(&partial);
        }
        (0..self.q)
            .into_par_iter()
            .map(|x| {
                let mut p = partial.clone();
                self.assign(lead + 1, x, &mut p);
                if self.survives(lead + 1, &p) {
                    self.descend(lead + 2, &mut p)
                } else {
                    0
                }
            })
            .sum()
    }

    fn assign(&self, k: usize, x: u64, partial: &mut [u64]) {
        if x == 0 {
            return;
        }
        for (p, v) in partial.iter_mut().zip(&self.normals) {
            if v[k] != 0 {
                *p = (*p + mul_mod(v[k], x, self.q)) % self.q;
            }
        }
    }

    fn unassign(&self, k: usize, x: u64, partial: &mut [u64]) {
        if x == 0 {
            return;
        }
        for (p, v) in partial.iter_mut().zip(&self.normals) {
            if v[k] != 0 {
                *p = (*p + self.q - mul_mod(v[k], x, self.q)) % self.q;
            }
        }
    }

    fn survives(&self, k: usize, partial: &[u64]) -> bool {
        self.closing[k].iter().all(|&h| partial[h] != 0)
    }

    fn descend(&self, k: usize, partial: &mut [u64]) -> u128 {
        if k + 1 == self.n {
            return self.count_last(partial);
        }
        let mut total = 0;
        for x in 0..self.q {
            self.assign(k, x, partial);
            if self.survives(k, partial) {
                total += self.descend(k + 1, partial);
            }
            self.unassign(k, x, partial);
        }
        total
    }

    fn count_last(&self, partial: &[u64]) -> u128 {
        let k = self.n - 1;
        let mut excluded: Vec<u64> = self.closing[k]
            .iter()
            .map(|&h| {
                let a = self.normals[h][k];
                // a·x + partial = 0  =>  x = -partial / a
                mul_mod((self.q - partial[h]) % self.q, mod_inverse(a, self.q), self.q)
            })
            .collect();
        excluded.sort_unstable();
        excluded.dedup();
        u128::from(self.q) - excluded.len() as u128
    }
}

/// Lagrange interpolation through `(x, y)` pairs; coefficients descending.
fn interpolate(points: &[(Q, Q)]) -> Vec<Q> {
    let d = points.len();
    let mut result = vec![Q::zero(); d]; // ascending
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut basis = vec![Q::one()]; // ascending
        let mut denom = Q::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![Q::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * xj;
            }
            basis = next;
            denom *= xi - xj;
        }
        let scale = yi / denom;
        for (r, b) in result.iter_mut().zip(&basis) {
            *r += b * &scale;
        }
    }
    result.reverse();
    result
}

/// Characteristic polynomial from point counts over F_p for the given primes.
/// Needs at least n + 2 primes: n + 1 determine the polynomial and the rest
/// must lie on it.
pub fn char_poly_finite_field(ground: &GroundSet, primes: &[u64]) -> Result<CharPoly> {
    let n = ground.dim();
    if primes.len() < n + 2 {
        return Err(Error::NotEnoughPrimes {
            needed: n + 2,
            supplied: primes.len(),
        });
    }
    for &p in primes {
        validate_prime(ground, p)?;
    }
    let samples: Vec<(Q, Q)> = primes
        .par_iter()
        .map(|&p| {
            let count = count_complement_points(ground, p);
            (q(p as i64), Q::from_integer(BigInt::from(count)))
        })
        .collect();
    let coeffs = interpolate(&samples[..n + 1]);
    let poly = CharPoly::new(coeffs);
    for ((x, y), &p) in samples.iter().zip(primes).skip(n + 1) {
        let expected = poly.evaluate(x);
        if &expected != y {
            return Err(Error::InterpolationMismatch {
                prime: p,
                count: format_rational(y),
                expected: format_rational(&expected),
            });
        }
    }
    Ok(poly)
}

/// [`char_poly_finite_field`] with the n + 2 smallest certified primes.
pub fn char_poly_finite_field_auto(ground: &GroundSet) -> Result<CharPoly> {
    let primes = certified_primes(ground, ground.dim() + 2);
    char_poly_finite_field(ground, &primes)
}

/// Characteristic polynomial of the arrangement of all hyperplanes of F_p^n,
/// by nbc counting in the matroid of projective points.
pub fn all_hyperplanes_char_poly(prime: u64, n: usize) -> CharPoly {
    let m = ModPConfiguration::all_hyperplanes(prime, n);
    CharPoly::from_counts(n, &nbc_counts(&m))
}

/// Evaluates `chi` at q^k for a small sanity check against point counts.
pub fn evaluate_at_power(chi: &CharPoly, base: u64, k: usize) -> BigInt {
    chi.evaluate(&pow_q(&q(base as i64), k)).to_integer()
}

pub fn to_u128(b: &BigInt) -> Option<u128> {
    b.to_u128()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{ArrangementSpec, CoefficientSet};

    fn ground(s: &[i64], n: usize) -> GroundSet {
        let spec = ArrangementSpec::new(CoefficientSet::from_integers(s).unwrap(), n).unwrap();
        GroundSet::build(&spec).unwrap()
    }

    fn coeffs(c: &CharPoly) -> Vec<i64> {
        c.coefficients()
            .iter()
            .map(|x| x.to_integer().try_into().unwrap())
            .collect()
    }

    /// Direct enumeration of F_q^n.
    fn brute_point_count(g: &GroundSet, q_value: i64) -> u128 {
        let n = g.dim();
        let total = (q_value as u64).pow(n as u32);
        let mut count = 0;
        for code in 0..total {
            let mut x = Vec::with_capacity(n);
            let mut c = code as i64;
            for _ in 0..n {
                x.push(c % q_value);
                c /= q_value;
            }
            let off = g.normals().all(|a| {
                let dot: i64 = a.iter().zip(&x).map(|(u, v)| u * v).sum();
                dot.rem_euclid(q_value) != 0
            });
            if off {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn nbc_examples() {
        assert_eq!(coeffs(&char_poly_nbc(&ground(&[0, 1], 2))), vec![1, -3, 2]);
        assert_eq!(coeffs(&char_poly_nbc(&ground(&[-1, 1], 2))), vec![1, -2, 1]);
        assert_eq!(coeffs(&char_poly_nbc(&ground(&[0, 1], 3))), vec![1, -7, 15, -9]);
    }

    #[test]
    fn point_count_resonance_plane_mod_5() {
        let g = ground(&[0, 1], 2);
        assert_eq!(count_complement_points(&g, 5), 12);
        assert_eq!(brute_point_count(&g, 5), 12);
        assert_eq!(char_poly_nbc(&g).evaluate(&q(5)), q(12));
    }

    #[test]
    fn fast_point_count_matches_enumeration() {
        for (s, n) in [(vec![0, 1], 3), (vec![-1, 1], 3), (vec![-1, 0, 1], 3), (vec![0, 1], 4)] {
            let g = ground(&s, n);
            for p in [2u64, 3, 5, 7, 11] {
                assert_eq!(count_complement_points(&g, p), brute_point_count(&g, p as i64));
            }
        }
    }

    #[test]
    fn finite_field_route_agrees_on_small_cases() {
        for (s, n) in [(vec![0, 1], 3), (vec![-1, 1], 4), (vec![-1, 0, 1], 3), (vec![0, 1], 4)] {
            let g = ground(&s, n);
            assert_eq!(char_poly_finite_field_auto(&g).unwrap(), char_poly_nbc(&g));
        }
    }

    #[test]
    fn bad_primes_are_rejected() {
        let g = ground(&[-1, 1], 2);
        // mod 2 the normals (1,1) and (1,-1) coincide
        assert!(matches!(validate_prime(&g, 2), Err(Error::BadPrime { prime: 2, .. })));
        assert!(validate_prime(&g, 3).is_ok());
        let g = ground(&[0, 1], 3);
        let res = char_poly_finite_field(&g, &[2, 5, 7, 11, 13]);
        assert!(matches!(res, Err(Error::BadPrime { prime: 2, .. })));
        assert!(matches!(
            char_poly_finite_field(&g, &[5, 7]),
            Err(Error::NotEnoughPrimes { needed: 5, .. })
        ));
        // 5, 7 are fine for resonance n = 3 even though they are below the bound
        assert_eq!(
            char_poly_finite_field(&g, &[5, 7, 11, 13, 17]).unwrap(),
            char_poly_nbc(&g)
        );
    }

    #[test]
    fn betti_and_chambers() {
        let chi = char_poly_nbc(&ground(&[0, 1], 3));
        let b: Vec<i64> = betti_numbers(&chi)
            .unwrap()
            .iter()
            .map(|x| x.try_into().unwrap())
            .collect();
        assert_eq!(b, vec![1, 7, 15, 9]);
        assert_eq!(chamber_count(&chi), BigInt::from(32));
        assert_eq!(chamber_count(&char_poly_nbc(&ground(&[0, 1], 2))), BigInt::from(6));
        assert_eq!(chamber_count(&char_poly_nbc(&ground(&[0, 1], 4))), BigInt::from(370));
        let bad = CharPoly::new(vec![q(1), q(3), q(2)]);
        assert!(matches!(betti_numbers(&bad), Err(Error::NonAlternating { exponent: 1 })));
    }

    #[test]
    fn first_betti_is_hyperplane_count() {
        for (s, n) in [(vec![0, 1], 4), (vec![-1, 1], 4), (vec![-1, 0, 1], 3), (vec![1, 2], 3)] {
            let g = ground(&s, n);
            let b = betti_numbers(&char_poly_nbc(&g)).unwrap();
            assert_eq!(b[1], BigInt::from(g.len()));
        }
    }

    #[test]
    fn order_independence() {
        for (s, n) in [(vec![0, 1], 4), (vec![-1, 0, 1], 3)] {
            let g = ground(&s, n);
            assert_eq!(char_poly_nbc(&g), char_poly_nbc(&g.reversed()));
        }
    }

    #[test]
    fn all_hyperplanes_over_small_fields() {
        for (p, n) in [(2u64, 1usize), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (5, 3)] {
            assert_eq!(all_hyperplanes_char_poly(p, n), CharPoly::q_product(p, n), "q={p} n={n}");
        }
    }

    #[test]
    fn json_shape() {
        let chi = char_poly_nbc(&ground(&[0, 1], 3));
        let s = serde_json::to_string(&chi.to_json()).unwrap();
        assert_eq!(s, r#"{"coeffs":["1","-7","15","-9"]}"#);
        let back: CharPolyJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back.parse().unwrap(), chi);
    }
}
