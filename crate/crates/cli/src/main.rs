//! `resonance`: exact invariants of S-resonance arrangements from the command
//! line. Every command prints one JSON (or CSV) document on stdout; failures
//! print `{"error": ...}` and exit 1, usage errors exit 2.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use resonance_core::algebra::{Convention, GradedAlgebra};
use resonance_core::arrangement::{ArrangementSpec, CoefficientSet, GroundSet};
use resonance_core::chambers::enumerate_chambers;
use resonance_core::character::{character, decompose, decomposition_json, padded_multiplicity_table, row_bound_report};
use resonance_core::charpoly::{betti_numbers, chamber_count, char_poly_finite_field_auto, char_poly_nbc, CharPoly};
use resonance_core::fsop::{tensor_generators, BettiModule};
use resonance_core::genfun::{fit_exp_poly, fq_hilbert_series};
use resonance_core::rational::q;
use resonance_core::store::{InvariantRecord, Provenance, RecordKey, Store};
use resonance_core::symmetric::Partition;
use resonance_core::verify::{verify_all, VerifyLimits};

use output::Format;

#[derive(Parser)]
#[command(name = "resonance", version, about = "Exact invariants of S-resonance hyperplane arrangements")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Append results to this newline-delimited JSON store.
    #[arg(long, global = true, env = "STORE_PATH")]
    store: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Args, Clone)]
struct Family {
    /// Coefficient set as comma-separated rationals, e.g. 0,1 or -1,1.
    #[arg(long = "S", value_name = "S", allow_hyphen_values = true, value_parser = parse_set)]
    s: CoefficientSet,

    /// Ambient dimension.
    #[arg(long)]
    n: usize,
}

#[derive(Args, Clone)]
struct Graded {
    #[command(flatten)]
    family: Family,

    /// Degree of the graded piece.
    #[arg(long)]
    i: usize,

    /// os (even d) or cordovil (odd d).
    #[arg(long, default_value = "os")]
    parity: Convention,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChiMethod {
    Nbc,
    FiniteField,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChamberMethod {
    Zaslavsky,
    Enumerate,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Characteristic polynomial, coefficients from t^n down to t^0.
    Chi {
        #[command(flatten)]
        family: Family,
        #[arg(long, value_enum, default_value_t = ChiMethod::Nbc)]
        method: ChiMethod,
    },
    /// Betti numbers b^0..b^n, or only b^i with --i.
    Betti {
        #[command(flatten)]
        family: Family,
        #[arg(long)]
        i: Option<usize>,
    },
    /// Number of chambers.
    Chambers {
        #[command(flatten)]
        family: Family,
        #[arg(long, value_enum, default_value_t = ChamberMethod::Zaslavsky)]
        method: ChamberMethod,
    },
    /// Σ_n-character of the degree-i piece, by cycle type.
    Character(Graded),
    /// Multiplicities of the irreducibles in the degree-i piece.
    Decompose(Graded),
    /// Checks that every constituent has at most |S|^i rows.
    Rowbound(Graded),
    /// Multiplicity of the padded partition λ(n) for n in a range.
    Padded {
        #[arg(long = "S", value_name = "S", allow_hyphen_values = true, value_parser = parse_set)]
        s: CoefficientSet,
        #[arg(long)]
        i: usize,
        #[arg(long, default_value = "os")]
        parity: Convention,
        /// Core partition, e.g. 1 or 2+1.
        #[arg(long)]
        partition: Partition,
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        /// Degree of the least-squares polynomial fit.
        #[arg(long, default_value_t = 1)]
        fit_degree: usize,
    },
    /// Certifies generation in degrees ≤ |S|^i at one set size.
    Fsgen {
        #[arg(long = "S", value_name = "S", allow_hyphen_values = true, value_parser = parse_set)]
        s: CoefficientSet,
        #[arg(long)]
        i: usize,
        #[arg(long = "E", value_name = "E")]
        e: usize,
        #[arg(long, default_value = "os")]
        parity: Convention,
    },
    /// Factorizations showing P_[m1] ⊗ P_[m2] is generated in degrees ≤ m1·m2.
    Tensorlemma {
        #[arg(long)]
        m1: usize,
        #[arg(long)]
        m2: usize,
        #[arg(long = "E", value_name = "E")]
        e: usize,
        /// Include every certificate in the output.
        #[arg(long)]
        list: bool,
    },
    /// Fits b^i(n) = Σ_{j ≤ |S|^i} c_j(n) j^n for n = 1..n-max.
    Fit {
        #[arg(long = "S", value_name = "S", allow_hyphen_values = true, value_parser = parse_set)]
        s: CoefficientSet,
        #[arg(long)]
        i: usize,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        max_degree: usize,
    },
    /// Hilbert series of the F_q analog, coefficients of t^0..t^n.
    Fqseries {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        n: usize,
    },
    /// Runs every acceptance criterion and prints a pass/fail table.
    VerifyAll {
        /// Caps every rank bound, for a quick partial run.
        #[arg(long)]
        max_n: Option<usize>,
    },
}

fn parse_set(text: &str) -> Result<CoefficientSet, String> {
    CoefficientSet::parse(text).map_err(|e| e.to_string())
}

/// An error from the computation itself, reported as JSON with exit code 1.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<(Value, bool), Failure>;

struct Context {
    store: Option<Store>,
}

impl Context {
    fn record(&mut self, key: RecordKey, value: &Value, provenance: Provenance) -> Result<(), Failure> {
        if let Some(store) = self.store.as_mut() {
            store.put(InvariantRecord::new(key, value.clone(), provenance))?;
        }
        Ok(())
    }
}

fn ground(family: &Family) -> Result<GroundSet, Failure> {
    Ok(GroundSet::build(&ArrangementSpec::new(family.s.clone(), family.n)?)?)
}

fn key(family: &Family, quantity: &str) -> RecordKey {
    RecordKey::new(family.s.to_strings(), family.n, quantity)
}

fn graded_key(g: &Graded, quantity: &str) -> RecordKey {
    key(&g.family, quantity).degree(g.i).parity(g.parity)
}

fn chi_value(chi: &CharPoly) -> Value {
    json!(chi.to_json())
}

fn algebra(g: &Graded) -> Result<GradedAlgebra, Failure> {
    Ok(GradedAlgebra::new(&ground(&g.family)?, g.parity, g.i)?)
}

fn run(command: Command, ctx: &mut Context) -> Outcome {
    match command {
        Command::Chi { family, method } => {
            let g = ground(&family)?;
            let k = key(&family, "chi");
            let nbc = matches!(method, ChiMethod::Nbc | ChiMethod::Both).then(|| char_poly_nbc(&g));
            let ff = match method {
                ChiMethod::FiniteField | ChiMethod::Both => Some(char_poly_finite_field_auto(&g)?),
                ChiMethod::Nbc => None,
            };
            if let Some(chi) = &nbc {
                ctx.record(k.clone(), &chi_value(chi), Provenance::Nbc)?;
            }
            if let Some(chi) = &ff {
                ctx.record(k, &chi_value(chi), Provenance::FiniteField)?;
            }
            match (nbc, ff) {
                (Some(a), Some(b)) if a != b => Err(Failure(format!(
                    "nbc {:?} and finite-field {:?} disagree",
                    a.to_json().coeffs,
                    b.to_json().coeffs
                ))),
                (Some(chi), _) | (None, Some(chi)) => Ok((chi_value(&chi), true)),
                (None, None) => unreachable!("some method is selected"),
            }
        }
        Command::Betti { family, i } => {
            let betti = betti_numbers(&char_poly_nbc(&ground(&family)?))?;
            let all: Vec<String> = betti.iter().map(ToString::to_string).collect();
            ctx.record(key(&family, "betti"), &json!(all), Provenance::Nbc)?;
            let value = match i {
                None => json!({ "betti": all }),
                Some(i) => {
                    let b = all.get(i).ok_or_else(|| Failure(format!("i = {i} exceeds n = {}", family.n)))?;
                    json!({ "i": i, "betti": b })
                }
            };
            Ok((value, true))
        }
        Command::Chambers { family, method } => {
            let g = ground(&family)?;
            let k = key(&family, "chambers");
            let mut counts = Vec::new();
            if matches!(method, ChamberMethod::Zaslavsky | ChamberMethod::Both) {
                let c = chamber_count(&char_poly_nbc(&g));
                ctx.record(k.clone(), &json!(c.to_string()), Provenance::Nbc)?;
                counts.push(c);
            }
            if matches!(method, ChamberMethod::Enumerate | ChamberMethod::Both) {
                let c = num_bigint::BigInt::from(enumerate_chambers(&g)?.len());
                ctx.record(k, &json!(c.to_string()), Provenance::Oracle)?;
                counts.push(c);
            }
            let agree = counts.windows(2).all(|w| w[0] == w[1]);
            let count = output::integer(&counts[0]);
            let value = match method {
                ChamberMethod::Both => json!({ "count": count, "agree": agree }),
                _ => json!({ "count": count }),
            };
            Ok((value, agree))
        }
        Command::Character(g) => {
            let chi = character(&algebra(&g)?, g.i)?;
            let value = json!(chi.to_json());
            ctx.record(graded_key(&g, "character"), &value, Provenance::Nbc)?;
            Ok((json!({ "character": value }), true))
        }
        Command::Decompose(g) => {
            let d = decompose(&character(&algebra(&g)?, g.i)?)?;
            let value = json!(decomposition_json(&d));
            ctx.record(graded_key(&g, "decomposition"), &value, Provenance::Nbc)?;
            Ok((json!({ "multiplicities": value }), true))
        }
        Command::Rowbound(g) => {
            let report = row_bound_report(&algebra(&g)?, g.i)?;
            let holds = report.holds;
            Ok((json!(report), holds))
        }
        Command::Padded {
            s,
            i,
            parity,
            partition,
            n_min,
            n_max,
            fit_degree,
        } => {
            let table = padded_multiplicity_table(&s, parity, i, &partition, n_min..=n_max, fit_degree)?;
            for row in &table.rows {
                let k = RecordKey::new(s.to_strings(), row.n, "multiplicity")
                    .degree(i)
                    .parity(parity)
                    .partition(&row.partition);
                ctx.record(k, &json!(row.multiplicity), Provenance::Nbc)?;
            }
            Ok((json!(table), true))
        }
        Command::Fsgen { s, i, e, parity } => {
            let report = BettiModule::new(s.clone(), parity, i).generation_report(e)?;
            let value = json!({ "bound": report.bound, "minimal": report.minimal, "status": report.status });
            let k = RecordKey::new(s.to_strings(), e, "generation").degree(i).parity(parity);
            ctx.record(k, &value, Provenance::Nbc)?;
            Ok((value, report.deficit == 0))
        }
        Command::Tensorlemma { m1, m2, e, list } => {
            let certs = tensor_generators(m1, m2, e);
            let verified = certs.iter().all(|c| c.verified && c.image.len() <= m1 * m2);
            let max_image = certs.iter().map(|c| c.image.len()).max().unwrap_or(0);
            let mut value = json!({
                "m1": m1,
                "m2": m2,
                "E": e,
                "count": certs.len(),
                "maxImage": max_image,
                "verified": verified,
            });
            if list {
                value["certificates"] = json!(certs);
            }
            Ok((value, verified))
        }
        Command::Fit { s, i, n_max, max_degree } => {
            let sequence = (1..=n_max)
                .map(|n| {
                    let g = GroundSet::build(&ArrangementSpec::new(s.clone(), n)?)?;
                    // b^1 is the number of hyperplanes; skip the χ computation.
                    let b = if i == 1 {
                        q(g.len() as i64)
                    } else {
                        let betti = betti_numbers(&char_poly_nbc(&g))?;
                        betti.get(i).map_or(q(0), |b| b.clone().into())
                    };
                    Ok((n, b))
                })
                .collect::<resonance_core::Result<Vec<_>>>()?;
            let form = fit_exp_poly(&sequence, s.generation_bound(i), max_degree)?;
            let value = json!(form.to_json());
            let k = RecordKey::new(s.to_strings(), n_max, "fit").degree(i);
            ctx.record(k, &value, Provenance::Fit)?;
            Ok((value, true))
        }
        Command::Fqseries { q, i, n } => {
            if q < 2 {
                return Err(Failure(format!("q = {q} is not a prime power")));
            }
            let series: Vec<String> = fq_hilbert_series(q, i, n).iter().map(ToString::to_string).collect();
            Ok((json!({ "q": q, "i": i, "series": series }), true))
        }
        Command::VerifyAll { max_n } => {
            let limits = max_n.map_or_else(VerifyLimits::default, VerifyLimits::capped);
            let reports = verify_all(&limits);
            for r in &reports {
                eprintln!("{}", r.line());
            }
            let passed = reports.iter().all(|r| r.passed);
            Ok((json!(reports), passed))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            return output::fail(&e.to_string());
        }
    }
    let store = match cli.store.as_ref().map(Store::open).transpose() {
        Ok(s) => s,
        Err(e) => return output::fail(&e.to_string()),
    };
    let mut ctx = Context { store };
    match run(cli.command, &mut ctx) {
        Ok((value, ok)) => {
            if let Err(e) = output::emit(&value, cli.format) {
                return output::fail(&e.to_string());
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure(msg)) => output::fail(&msg),
    }
}
