//! Exponential-polynomial closed forms b(n) = Σ_j c_j(n) j^n for Betti
//! sequences, their rational generating functions, and the closed forms for
//! the arrangement of all hyperplanes over F_q.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::solve_exact;
use crate::rational::{format_rational, pow_q, q, Q};

/// b(n) = Σ_{j=1}^{J} c_j(n) j^n for n ≥ `valid_from`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpPolyForm {
    pole_bound: usize,
    /// `coefficients[j-1][k]` is the coefficient of n^k in c_j.
    coefficients: Vec<Vec<Q>>,
    valid_from: usize,
    /// Data points with n < `valid_from`, kept so the generating function can
    /// be rebuilt exactly.
    initial_terms: BTreeMap<usize, Q>,
}

impl ExpPolyForm {
    pub fn new(pole_bound: usize, coefficients: Vec<Vec<Q>>, valid_from: usize) -> Self {
        assert_eq!(coefficients.len(), pole_bound);
        ExpPolyForm {
            pole_bound,
            coefficients,
            valid_from,
            initial_terms: BTreeMap::new(),
        }
    }

    pub fn pole_bound(&self) -> usize {
        self.pole_bound
    }

    pub fn valid_from(&self) -> usize {
        self.valid_from
    }

    /// Coefficients of c_j, lowest degree first.
    pub fn coefficient(&self, j: usize) -> &[Q] {
        &self.coefficients[j - 1]
    }

    /// Degree of c_j, or `None` when c_j = 0.
    pub fn poly_degree(&self, j: usize) -> Option<usize> {
        self.coefficients[j - 1].iter().rposition(|c| !c.is_zero())
    }

    pub fn leading_is_constant(&self) -> bool {
        self.poly_degree(self.pole_bound).unwrap_or(0) == 0
    }

    pub fn all_constant(&self) -> bool {
        (1..=self.pole_bound).all(|j| self.poly_degree(j).unwrap_or(0) == 0)
    }

    /// Value of the closed form at n (ignores `valid_from`).
    pub fn evaluate(&self, n: usize) -> Q {
        let nq = q(n as i64);
        let mut total = Q::zero();
        for (idx, poly) in self.coefficients.iter().enumerate() {
            if poly.iter().all(Zero::is_zero) {
                continue;
            }
            let c = poly.iter().rev().fold(Q::zero(), |acc, a| acc * &nq + a);
            total += c * pow_q(&q(idx as i64 + 1), n);
        }
        total
    }

    /// The sequence value: stored data below `valid_from`, the form above.
    pub fn term(&self, n: usize) -> Q {
        match self.initial_terms.get(&n) {
            Some(v) if n < self.valid_from => v.clone(),
            _ => self.evaluate(n),
        }
    }

    pub fn to_json(&self) -> FitJson {
        FitJson {
            pole_bound: self.pole_bound,
            c: self
                .coefficients
                .iter()
                .enumerate()
                .map(|(i, p)| ((i + 1).to_string(), p.iter().map(format_rational).collect()))
                .collect(),
            n0: self.valid_from,
            held_out_verified: true,
        }
    }
}

/// Wire form `{"J": 2, "c": {"1": ["-1"], "2": ["1"]}, "n0": 1, "heldOutVerified": true}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitJson {
    #[serde(rename = "J")]
    pub pole_bound: usize,
    pub c: BTreeMap<String, Vec<String>>,
    pub n0: usize,
    #[serde(rename = "heldOutVerified")]
    pub held_out_verified: bool,
}

const HELD_OUT: usize = 2;

/// Fits b(n) = Σ_{j ≤ J} c_j(n) j^n to `sequence` exactly.
///
/// The last two entries are held out. For each uniform degree d = 0, 1, ..,
/// `max_degree` and each starting offset, the training window is solved
/// exactly; the first solution that also predicts the held-out entries wins.
pub fn fit_exp_poly(sequence: &[(usize, Q)], pole_bound: usize, max_degree: usize) -> Result<ExpPolyForm> {
    let needed = pole_bound * (max_degree + 1) + HELD_OUT;
    if sequence.len() < pole_bound + HELD_OUT {
        return Err(Error::InsufficientData {
            additional: needed - sequence.len(),
        });
    }
    let (train, held) = sequence.split_at(sequence.len() - HELD_OUT);
    for degree in 0..=max_degree {
        let unknowns = pole_bound * (degree + 1);
        if train.len() < unknowns {
            break;
        }
        for start in 0..=train.len() - unknowns {
            let window = &train[start..];
            let rows: Vec<Vec<Q>> = window
                .iter()
                .map(|(n, _)| design_row(*n, pole_bound, degree))
                .collect();
            let rhs: Vec<Q> = window.iter().map(|(_, v)| v.clone()).collect();
            let Some(x) = solve_exact(&rows, &rhs) else {
                continue;
            };
            let coefficients: Vec<Vec<Q>> = x.chunks(degree + 1).map(|c| c.to_vec()).collect();
            let mut form = ExpPolyForm::new(pole_bound, coefficients, 0);
            if held.iter().any(|(n, v)| &form.evaluate(*n) != v) {
                continue;
            }
            let mut from = sequence.len();
            while from > 0 && form.evaluate(sequence[from - 1].0) == sequence[from - 1].1 {
                from -= 1;
            }
            form.valid_from = sequence[from].0;
            form.initial_terms = sequence[..from].iter().cloned().collect();
            if !form.leading_is_constant() {
                return Err(Error::LeadingNotConstant {
                    pole_bound,
                    degree: form.poly_degree(pole_bound).unwrap_or(0),
                    form: Box::new(form),
                });
            }
            return Ok(form);
        }
    }
    Err(Error::InsufficientData {
        additional: needed.saturating_sub(sequence.len()).max(1),
    })
}

fn design_row(n: usize, pole_bound: usize, degree: usize) -> Vec<Q> {
    let nq = q(n as i64);
    let mut row = Vec::with_capacity(pole_bound * (degree + 1));
    for j in 1..=pole_bound {
        let base = pow_q(&q(j as i64), n);
        let mut power = Q::one();
        for _ in 0..=degree {
            row.push(&base * &power);
            power *= &nq;
        }
    }
    row
}

/// A reduced quotient of polynomials (coefficients lowest degree first) whose
/// denominator is a product of factors (1 - j t)^e.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub numerator: Vec<Q>,
    /// `(j, e)` for each factor (1 - j t)^e, e > 0, sorted by j.
    pub factors: Vec<(usize, usize)>,
}

impl RationalFunction {
    pub fn denominator(&self) -> Vec<Q> {
        let mut d = vec![Q::one()];
        for &(j, e) in &self.factors {
            for _ in 0..e {
                d = mul_linear(&d, j);
            }
        }
        d
    }

    pub fn numerator_degree(&self) -> Option<usize> {
        self.numerator.iter().rposition(|c| !c.is_zero())
    }

    pub fn denominator_degree(&self) -> usize {
        self.factors.iter().map(|f| f.1).sum()
    }

    /// Pole order at t = 1/j.
    pub fn pole_order(&self, j: usize) -> usize {
        self.factors.iter().find(|f| f.0 == j).map_or(0, |f| f.1)
    }

    /// deg N < deg D, i.e. the function tends to 0 as t → ∞.
    pub fn vanishes_at_infinity(&self) -> bool {
        self.numerator_degree().is_none_or(|d| d < self.denominator_degree())
    }

    /// Whether the denominator divides Π_{j ≤ J} (1 - j t)^{d+1}.
    pub fn within_pole_envelope(&self, pole_bound: usize, max_degree: usize) -> bool {
        self.factors
            .iter()
            .all(|&(j, e)| j >= 1 && j <= pole_bound && e <= max_degree + 1)
    }

    /// Power series coefficients t^0..t^len.
    pub fn series(&self, len: usize) -> Vec<Q> {
        let mut s: Vec<Q> = (0..=len)
            .map(|k| self.numerator.get(k).cloned().unwrap_or_else(Q::zero))
            .collect();
        for &(j, e) in &self.factors {
            for _ in 0..e {
                // divide by (1 - j t): s_k += j s_{k-1}
                for k in 1..=len {
                    let prev = s[k - 1].clone();
                    s[k] += prev * q(j as i64);
                }
            }
        }
        s
    }
}

fn mul_linear(p: &[Q], j: usize) -> Vec<Q> {
    let jq = q(j as i64);
    let mut out = vec![Q::zero(); p.len() + 1];
    for (k, c) in p.iter().enumerate() {
        out[k] += c;
        out[k + 1] -= c * &jq;
    }
    out
}

/// Exact division by (1 - j t), if it divides.
fn div_linear(p: &[Q], j: usize) -> Option<Vec<Q>> {
    if p.is_empty() {
        return Some(Vec::new());
    }
    let jq = q(j as i64);
    let mut out = vec![Q::zero(); p.len() - 1];
    let mut carry = Q::zero();
    for k in 0..p.len() - 1 {
        let v = &p[k] + &carry * &jq;
        out[k] = v.clone();
        carry = v;
    }
    let last = &p[p.len() - 1] + carry * &jq;
    last.is_zero().then_some(out)
}

/// G(t) = Σ_{n ≥ 1} b(n) t^n as a reduced rational function.
pub fn to_rational_function(form: &ExpPolyForm) -> RationalFunction {
    let mut factors: Vec<(usize, usize)> = (1..=form.pole_bound)
        .filter_map(|j| form.poly_degree(j).map(|d| (j, d + 1)))
        .collect();
    let denominator = {
        let mut d = vec![Q::one()];
        for &(j, e) in &factors {
            for _ in 0..e {
                d = mul_linear(&d, j);
            }
        }
        d
    };
    let deg_d = denominator.len() - 1;
    // D·G vanishes from degree n0 + deg D on (and from deg D + 1 when n0 = 1,
    // since the form is only used for n ≥ 1); compute a margin past that and
    // check it.
    let top = form.valid_from.max(1) + deg_d;
    let span = top + deg_d + 2;
    let series: Vec<Q> = (0..=span)
        .map(|n| if n == 0 { Q::zero() } else { form.term(n) })
        .collect();
    let mut product = vec![Q::zero(); span + 1];
    for (k, dk) in denominator.iter().enumerate() {
        for n in 0..=span - k {
            product[n + k] += dk * &series[n];
        }
    }
    assert!(
        product[top..].iter().all(Zero::is_zero),
        "series does not satisfy the recurrence of its own closed form"
    );
    let mut numerator: Vec<Q> = product[..top].to_vec();
    while numerator.last().is_some_and(Zero::is_zero) {
        numerator.pop();
    }
    for (j, e) in factors.iter_mut() {
        while *e > 0 {
            match div_linear(&numerator, *j) {
                Some(reduced) if !numerator.is_empty() => {
                    numerator = reduced;
                    *e -= 1;
                }
                _ => break,
            }
        }
    }
    factors.retain(|f| f.1 > 0);
    RationalFunction { numerator, factors }
}

/// e_i(x_1, ..)
pub fn elementary_symmetric(values: &[BigInt], i: usize) -> BigInt {
    let mut e = vec![BigInt::zero(); i + 1];
    e[0] = BigInt::one();
    for x in values {
        for k in (1..=i).rev() {
            let add = &e[k - 1] * x;
            e[k] += add;
        }
    }
    e[i].clone()
}

/// Gaussian binomial [n, k]_q = Π_{m=1}^{k} (q^{n-k+m} - 1) / (q^m - 1).
pub fn gaussian_binomial(n: usize, k: usize, q_value: &BigInt) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for m in 1..=k {
        num *= q_value.pow((n - k + m) as u32) - 1;
        den *= q_value.pow(m as u32) - 1;
    }
    num / den
}

/// i-th Betti number of the complement of all hyperplanes in F_q^n:
/// e_i(1, q, .., q^{n-1}). Also checked against q^{C(i,2)} [n, i]_q.
pub fn fq_betti(q_value: u64, n: usize, i: usize) -> BigInt {
    let qb = BigInt::from(q_value);
    let powers: Vec<BigInt> = (0..n).map(|k| qb.pow(k as u32)).collect();
    let e = elementary_symmetric(&powers, i);
    let closed = qb.pow((i * i.saturating_sub(1) / 2) as u32) * gaussian_binomial(n, i, &qb);
    assert_eq!(e, closed, "q-binomial identity failed for q={q_value} n={n} i={i}");
    e
}

/// Coefficients t^0..t^N of q^{C(i,2)} t^i Π_{j=0}^{i} 1/(1 - q^j t).
pub fn fq_hilbert_series(q_value: u64, i: usize, truncation: usize) -> Vec<BigInt> {
    let qb = BigInt::from(q_value);
    let mut s = vec![BigInt::zero(); truncation + 1];
    if i <= truncation {
        s[i] = qb.pow((i * i.saturating_sub(1) / 2) as u32);
    }
    for j in 0..=i {
        let r = qb.pow(j as u32);
        for k in 1..=truncation {
            let prev = &s[k - 1] * &r;
            s[k] += prev;
        }
    }
    s
}
