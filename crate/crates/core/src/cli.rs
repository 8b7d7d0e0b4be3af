//! Batch command-line front end.
//!
//! Jobs arrive as a JSON file naming a ring, a matrix, and optionally a
//! variable, an ideal, and a search budget; results leave as a JSON document
//! with the result matrices in canonical string form, a certificate section
//! that makes every answer independently checkable, and a stats section.
//! Identical inputs and flags produce byte-identical output; wall-clock
//! timing is only emitted under `--timings`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::driver;
use crate::elim;
use crate::error::Error;
use crate::groebner::{self, gb_pairs_processed_total, groebner, one_certificate};
use crate::horrocks::horrocks;
use crate::local::{get_max_ideal, MaxIdeal, SearchBudget};
use crate::matrix::PolyMatrix;
use crate::poly::{MonomialOrder, Poly};
use crate::ring::{Coeff, CoeffKind, RingDesc};
use crate::snf;

/// Exit codes: 0 success, 1 contract failure, 2 parse or format error,
/// 3 search budget exhausted, 4 internal invariant violation.
fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::InvalidRing(_) | Error::RingMismatch(_) | Error::ShapeError(_) => 2,
        Error::SearchExhausted(_)
        | Error::ResourceExceeded(_)
        | Error::NormalizationExhausted(_) => 3,
        Error::Internal(_) => 4,
        _ => 1,
    }
}

#[derive(Debug)]
struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn format(code: i32, message: impl Into<String>) -> Self {
        CliError { code, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError { code: exit_code_for(&e), message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Deserialize)]
struct JobRing {
    coeff: String,
    #[serde(default)]
    p: Option<u64>,
    vars: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobFile {
    ring: JobRing,
    #[serde(default)]
    matrix: Option<Vec<Vec<String>>>,
    #[serde(default)]
    var: Option<String>,
    #[serde(default)]
    ideal: Option<Vec<String>>,
    #[serde(default)]
    budget: Option<u64>,
}

#[derive(Parser, Debug)]
#[command(
    name = "qs",
    about = "Exact solver for unimodular rows and matrices over polynomial rings",
    disable_version_flag = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Option<Cmd>,
    /// Input job file (JSON).
    #[arg(long = "in", global = true, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Output file (default: standard output).
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Point allowance for maximal-ideal searches (overrides the job file).
    #[arg(long, global = true, value_name = "N")]
    budget: Option<u64>,
    /// Seed echoed into the stats section; all computations are deterministic.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Also emit wall-clock timing (breaks byte-for-byte reproducibility).
    #[arg(long, global = true)]
    timings: bool,
    /// Run the built-in regression suite and print a pass/fail table.
    #[arg(long)]
    fixtures: bool,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Cmd {
    /// Do the maximal minors generate the unit ideal?
    IsUnimodular,
    /// Solve M * V = [I | 0] for a square invertible V.
    Qs,
    /// Complete a unimodular matrix to an invertible square matrix.
    Complete,
    /// Free basis for the kernel of a unimodular matrix.
    FreeBasis,
    /// Kernel basis plus its left inverse, as a certificate pair.
    Iso,
    /// Is the cokernel of the presentation matrix projective?
    IsProjective,
    /// Solve a row locally at a maximal ideal of the base ring.
    Horrocks,
    /// Patch local solutions into one polynomial transform.
    Patch,
    /// Normalize a row so its first entry is monic in the last variable.
    ChangeVar,
    /// Find a maximal ideal containing the given ideal.
    MaxIdeal,
    /// Smith normal form of an integer matrix.
    Snf,
    /// Groebner basis of an ideal, with cofactors.
    Gb,
}

/// Entry point for the binary; returns the process exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap prints its own message; usage problems are format errors.
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match std::panic::catch_unwind(|| dispatch(&cli)) {
        Ok(code) => code,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            eprintln!("internal error: {msg}");
            4
        }
    }
}

fn dispatch(cli: &Cli) -> i32 {
    if cli.fixtures {
        return run_fixtures(cli);
    }
    let Some(cmd) = cli.cmd else {
        eprintln!("error: a subcommand or --fixtures is required");
        return 2;
    };
    let started = Instant::now();
    let pairs_before = gb_pairs_processed_total();
    let rounds_before = elim::rounds_run_total();
    match run_command(cli, cmd) {
        Ok((result, certificate)) => {
            let mut stats = BTreeMap::new();
            stats.insert(
                "gb_pairs".to_string(),
                json!(gb_pairs_processed_total() - pairs_before),
            );
            stats.insert(
                "rounds".to_string(),
                json!(elim::rounds_run_total() - rounds_before),
            );
            if let Some(seed) = cli.seed {
                stats.insert("seed".to_string(), json!(seed));
            }
            if cli.timings {
                stats.insert(
                    "elapsed_ms".to_string(),
                    json!(started.elapsed().as_millis() as u64),
                );
            }
            let doc = json!({
                "result": result,
                "certificate": certificate,
                "stats": stats,
            });
            match write_out(&doc, cli.out.as_deref()) {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn write_out(doc: &Value, out: Option<&std::path::Path>) -> std::io::Result<()> {
    let text = format!("{}\n", serde_json::to_string_pretty(doc)?);
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn load_job(cli: &Cli) -> CliResult<JobFile> {
    let path = cli
        .input
        .as_ref()
        .ok_or_else(|| CliError::format(2, "missing --in <FILE>"))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::format(2, format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::format(2, format!("malformed job file: {e}")))
}

fn parse_ring(jr: &JobRing) -> CliResult<RingDesc> {
    let kind = match jr.coeff.as_str() {
        "QQ" => CoeffKind::Q,
        "ZZ" => CoeffKind::Z,
        "Zp" => {
            let p = jr
                .p
                .ok_or_else(|| CliError::format(2, "coeff \"Zp\" needs a field \"p\""))?;
            CoeffKind::Zp(p)
        }
        other => {
            return Err(CliError::format(
                2,
                format!("unknown coeff {other:?}; expected \"QQ\", \"ZZ\", or \"Zp\""),
            ))
        }
    };
    RingDesc::new(kind, jr.vars.clone()).map_err(CliError::from)
}

fn parse_matrix(ring: &RingDesc, job: &JobFile) -> CliResult<PolyMatrix> {
    let rows = job
        .matrix
        .as_ref()
        .ok_or_else(|| CliError::format(2, "job file has no \"matrix\""))?;
    if rows.is_empty() || rows[0].is_empty() {
        return Err(CliError::format(2, "matrix must have at least one row and column"));
    }
    let width = rows[0].len();
    let mut entries = Vec::with_capacity(rows.len() * width);
    for row in rows {
        if row.len() != width {
            return Err(CliError::format(2, "matrix rows have unequal lengths"));
        }
        for s in row {
            entries.push(Poly::parse(ring, s).map_err(CliError::from)?);
        }
    }
    Ok(PolyMatrix::new(ring, rows.len(), width, entries))
}

fn parse_ideal(ring: &RingDesc, job: &JobFile) -> CliResult<Vec<Poly>> {
    let gens = job.ideal.as_deref().unwrap_or(&[]);
    gens.iter()
        .map(|s| Poly::parse(ring, s).map_err(CliError::from))
        .collect()
}

fn require_var(ring: &RingDesc, job: &JobFile) -> CliResult<usize> {
    let name = job
        .var
        .as_ref()
        .ok_or_else(|| CliError::format(2, "this command needs a \"var\" field"))?;
    ring.var_index(name)
        .ok_or_else(|| CliError::format(2, format!("variable {name:?} is not in the ring")))
}

fn resolve_budget(cli: &Cli, job: &JobFile) -> SearchBudget {
    match cli.budget.or(job.budget) {
        Some(max_points) => SearchBudget { max_points },
        None => SearchBudget::default(),
    }
}

fn run_command(cli: &Cli, cmd: Cmd) -> CliResult<(Value, Value)> {
    let job = load_job(cli)?;
    let ring = parse_ring(&job.ring)?;
    let budget = resolve_budget(cli, &job);
    match cmd {
        Cmd::IsUnimodular => {
            let m = parse_matrix(&ring, &job)?;
            let minors: Vec<Poly> = groebner::maximal_minors(&m)
                .map_err(CliError::from)?
                .into_iter()
                .map(|(_, d)| d)
                .collect();
            let gb = groebner(&minors, MonomialOrder::Grevlex).map_err(CliError::from)?;
            match gb.express(&Poly::one(&ring)).map_err(CliError::from)? {
                Some(cofactors) => Ok((
                    json!({ "unimodular": true }),
                    json!({
                        "minors": strings(&minors),
                        "unit_cofactors": strings(&cofactors),
                    }),
                )),
                None => Err(CliError::from(Error::NotUnimodular {
                    minors_basis: gb.gens_strings(),
                })),
            }
        }
        Cmd::Qs => {
            let m = parse_matrix(&ring, &job)?;
            let sol = if m.nrows() == 1 {
                driver::qs_row_with_budget(&m.row(0), &budget)
            } else {
                driver::qs_matrix_with_budget(&m, &budget)
            }
            .map_err(CliError::from)?;
            Ok((
                json!({ "v": sol.v.to_strings() }),
                json!({
                    "product": sol.certificate.to_strings(),
                    "det": sol.det_v.to_canonical_string(),
                }),
            ))
        }
        Cmd::Complete => {
            let m = parse_matrix(&ring, &job)?;
            let c = driver::complete_matrix_with_budget(&m, &budget).map_err(CliError::from)?;
            let det = c.det().map_err(CliError::from)?;
            Ok((
                json!({ "completion": c.to_strings() }),
                json!({ "det": det.to_canonical_string() }),
            ))
        }
        Cmd::FreeBasis => {
            let m = parse_matrix(&ring, &job)?;
            let (b, w) = driver::qs_isomorphism_with_budget(&m, &budget).map_err(CliError::from)?;
            Ok((
                json!({ "basis": b.to_strings() }),
                json!({
                    "annihilation": m.mul(&b).to_strings(),
                    "left_inverse": w.to_strings(),
                    "left_product": w.mul(&b).to_strings(),
                }),
            ))
        }
        Cmd::Iso => {
            let m = parse_matrix(&ring, &job)?;
            let (b, w) = driver::qs_isomorphism_with_budget(&m, &budget).map_err(CliError::from)?;
            Ok((
                json!({ "basis": b.to_strings(), "left_inverse": w.to_strings() }),
                json!({
                    "annihilation": m.mul(&b).to_strings(),
                    "left_product": w.mul(&b).to_strings(),
                }),
            ))
        }
        Cmd::IsProjective => {
            let m = parse_matrix(&ring, &job)?;
            let answer = driver::is_projective(&m).map_err(CliError::from)?;
            let witness = projective_witness(&m).map_err(CliError::from)?;
            Ok((
                json!({ "projective": answer }),
                json!({ "rank": witness }),
            ))
        }
        Cmd::Horrocks => {
            let m = parse_matrix(&ring, &job)?;
            if m.nrows() != 1 {
                return Err(CliError::format(2, "horrocks expects a single-row matrix"));
            }
            let y = require_var(&ring, &job)?;
            let base = ring.without_var(&ring.vars()[y].clone()).map_err(CliError::from)?;
            let gens_full = parse_ideal(&ring, &job)?;
            let mut gens = Vec::with_capacity(gens_full.len());
            for g in &gens_full {
                gens.push(g.restrict(&base).map_err(|_| {
                    CliError::format(2, "ideal generators must not involve the local variable")
                })?);
            }
            let mi = MaxIdeal::from_point_gens(&base, gens).map_err(CliError::from)?;
            let row = m.row(0);
            let sol = horrocks(&row, y, &mi).map_err(CliError::from)?;
            let expected = scaled_unit_row(&sol.den, row.len());
            Ok((
                json!({
                    "matrix": sol.mat_num.to_strings(),
                    "denominator": sol.den.to_canonical_string(),
                    "denominator_factors": strings(&sol.den_factors),
                }),
                json!({
                    "product": m.mul(&sol.mat_num).to_strings(),
                    "expected": expected.to_strings(),
                }),
            ))
        }
        Cmd::Patch => {
            let m = parse_matrix(&ring, &job)?;
            if m.nrows() != 1 {
                return Err(CliError::format(2, "patch expects a single-row matrix"));
            }
            let y = require_var(&ring, &job)?;
            let row = m.row(0);
            let sols = elim::local_loop(&row, y, &budget).map_err(CliError::from)?;
            let u = elim::patch(&sols, y).map_err(CliError::from)?;
            let det = u.det().map_err(CliError::from)?;
            let dens: Vec<String> = sols.iter().map(|s| s.den.to_canonical_string()).collect();
            Ok((
                json!({ "u": u.to_strings(), "denominators": dens }),
                json!({
                    "product": m.mul(&u).to_strings(),
                    "expected": m.eval_at_zero(y).to_strings(),
                    "det": det.to_canonical_string(),
                }),
            ))
        }
        Cmd::ChangeVar => {
            let m = parse_matrix(&ring, &job)?;
            if m.nrows() != 1 {
                return Err(CliError::format(2, "change-var expects a single-row matrix"));
            }
            let row = m.row(0);
            let (u1, subst) = elim::change_var(&row).map_err(CliError::from)?;
            let normalized: Vec<Poly> = m
                .mul(&u1)
                .row(0)
                .iter()
                .map(|f| subst.apply(f))
                .collect();
            let images: BTreeMap<String, String> = subst
                .forward_images()
                .map(|(v, p)| (ring.vars()[v].clone(), p.to_canonical_string()))
                .collect();
            let last = ring.vars()[ring.nvars() - 1].clone();
            Ok((
                json!({ "u1": u1.to_strings(), "substitution": images }),
                json!({
                    "normalized": strings(&normalized),
                    "monic_in": last,
                    "det_u1": u1.det().map_err(CliError::from)?.to_canonical_string(),
                }),
            ))
        }
        Cmd::MaxIdeal => {
            let gens = parse_ideal(&ring, &job)?;
            let mi = get_max_ideal(&ring, &gens, &budget).map_err(CliError::from)?;
            let contains: Vec<bool> = gens.iter().map(|g| mi.contains(g)).collect();
            Ok((
                json!({ "generators": mi.gens_strings() }),
                json!({ "contains_input": contains }),
            ))
        }
        Cmd::Snf => {
            let m = parse_matrix(&ring, &job)?;
            let ints = int_entries(&m)?;
            let a = snf::DMat::new(m.nrows(), m.ncols(), ints);
            let res = snf::smith_normal_form(&a);
            let product = res.u.mul(&a).mul(&res.w);
            if product != res.d {
                return Err(CliError::from(Error::Internal(
                    "normal form fails its product identity".into(),
                )));
            }
            Ok((
                json!({
                    "d": dmat_strings(&res.d),
                    "u": dmat_strings(&res.u),
                    "w": dmat_strings(&res.w),
                }),
                json!({
                    "u_a_w": dmat_strings(&product),
                    "det_u": res.u.det().to_string(),
                    "det_w": res.w.det().to_string(),
                }),
            ))
        }
        Cmd::Gb => {
            let gens = parse_ideal(&ring, &job)?;
            let gb = groebner(&gens, MonomialOrder::Grevlex).map_err(CliError::from)?;
            let cofactors: Vec<Vec<String>> = gb
                .cofactor_rows()
                .iter()
                .map(|row| strings(row))
                .collect();
            Ok((
                json!({ "basis": gb.gens_strings() }),
                json!({ "cofactors": cofactors }),
            ))
        }
    }
}

fn strings(polys: &[Poly]) -> Vec<String> {
    polys.iter().map(|p| p.to_canonical_string()).collect()
}

fn dmat_strings(m: &snf::DMat<num_bigint::BigInt>) -> Vec<Vec<String>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m.get(i, j).to_string()).collect())
        .collect()
}

fn int_entries(m: &PolyMatrix) -> CliResult<Vec<num_bigint::BigInt>> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            match m.get(i, j).as_constant() {
                Some(Coeff::Int(n)) => out.push(n),
                _ => {
                    return Err(CliError::format(
                        2,
                        "snf needs constant integer entries over coeff \"ZZ\"",
                    ))
                }
            }
        }
    }
    Ok(out)
}

/// den * e1 as a row, for checking a local solution's product identity.
fn scaled_unit_row(den: &Poly, n: usize) -> PolyMatrix {
    let ring = den.ring().clone();
    let mut row = vec![Poly::zero(&ring); n];
    row[0] = den.clone();
    PolyMatrix::row_vector(&ring, row)
}

/// The constant rank of the cokernel when it is projective: the r with
/// Fitting ideal r the unit ideal and Fitting ideal r-1 zero.
fn projective_witness(p: &PolyMatrix) -> crate::error::Result<Option<usize>> {
    for r in 0..=p.nrows() {
        let at = groebner::fitting_ideal(p, r)?;
        if one_certificate(&at)?.is_none() {
            continue;
        }
        let below_zero = match r {
            0 => true,
            _ => groebner::fitting_ideal(p, r - 1)?.iter().all(|g| g.is_zero()),
        };
        if below_zero {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

struct Fixture {
    name: &'static str,
    run: fn() -> std::result::Result<(), String>,
}

fn check(cond: bool, msg: &str) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn fx_ring() -> RingDesc {
    RingDesc::new(CoeffKind::Z, vec!["x".into(), "y".into()]).unwrap()
}

fn fx_base() -> RingDesc {
    RingDesc::new(CoeffKind::Z, vec!["x".into()]).unwrap()
}

fn fx_row(ring: &RingDesc) -> Vec<Poly> {
    ["x^2", "2*y+1", "x^5*y^2+y"]
        .iter()
        .map(|s| Poly::parse(ring, s).unwrap())
        .collect()
}

fn fx_normalized(ring: &RingDesc) -> Vec<Poly> {
    ["y^2", "2*x+1", "x^2*y^5+x"]
        .iter()
        .map(|s| Poly::parse(ring, s).unwrap())
        .collect()
}

fn fx_max_ideal(gens: &[&str]) -> MaxIdeal {
    let base = fx_base();
    let polys = gens.iter().map(|s| Poly::parse(&base, s).unwrap()).collect();
    MaxIdeal::from_point_gens(&base, polys).unwrap()
}

fn fixtures() -> Vec<Fixture> {
    vec![
        Fixture {
            name: "reference row is unimodular",
            run: || {
                let r = fx_ring();
                let m = PolyMatrix::row_vector(&r, fx_row(&r));
                let ok = groebner::is_unimodular(&m).map_err(|e| e.to_string())?;
                check(ok, "expected the unit ideal")
            },
        },
        Fixture {
            name: "maximal ideal over the zero ideal of Z[x]",
            run: || {
                let base = fx_base();
                let mi = get_max_ideal(&base, &[], &SearchBudget::default())
                    .map_err(|e| e.to_string())?;
                let expected =
                    [Poly::parse(&base, "2").unwrap(), Poly::parse(&base, "x").unwrap()];
                check(mi.gens() == expected, "expected generators 2, x")
            },
        },
        Fixture {
            name: "maximal ideal avoiding the first denominator",
            run: || {
                let base = fx_base();
                let d = Poly::parse(&base, "2*x+1").unwrap();
                let mi = get_max_ideal(&base, &[d.clone()], &SearchBudget::default())
                    .map_err(|e| e.to_string())?;
                let expected =
                    [Poly::parse(&base, "3").unwrap(), Poly::parse(&base, "x-1").unwrap()];
                check(mi.gens() == expected, "expected generators 3, x-1")?;
                check(mi.contains(&d), "the ideal must contain its input")
            },
        },
        Fixture {
            name: "normalization swaps the variables with identity transform",
            run: || {
                let r = fx_ring();
                let row = fx_row(&r);
                let (u1, s) = elim::change_var(&row).map_err(|e| e.to_string())?;
                check(u1.is_identity(), "expected the identity column transform")?;
                let normalized: Vec<Poly> = row.iter().map(|f| s.apply(f)).collect();
                check(normalized == fx_normalized(&r), "unexpected normalized row")
            },
        },
        Fixture {
            name: "local solution at the ideal (2, x)",
            run: || {
                let r = fx_ring();
                let sol = horrocks(&fx_normalized(&r), 1, &fx_max_ideal(&["2", "x"]))
                    .map_err(|e| e.to_string())?;
                sol.verify().map_err(|e| e.to_string())?;
                check(
                    sol.den == Poly::parse(&r, "2*x+1").unwrap(),
                    "expected denominator 2*x+1",
                )
            },
        },
        Fixture {
            name: "local solution at the ideal (3, x-1)",
            run: || {
                let r = fx_ring();
                let sol = horrocks(&fx_normalized(&r), 1, &fx_max_ideal(&["3", "x-1"]))
                    .map_err(|e| e.to_string())?;
                sol.verify().map_err(|e| e.to_string())?;
                check(sol.den == Poly::parse(&r, "x").unwrap(), "expected denominator x")
            },
        },
        Fixture {
            name: "the two denominators are comaximal in Z[x]",
            run: || {
                let base = fx_base();
                let d1 = Poly::parse(&base, "2*x+1").unwrap();
                let d2 = Poly::parse(&base, "x").unwrap();
                let cert = one_certificate(&[d1, d2]).map_err(|e| e.to_string())?;
                check(cert.is_some(), "expected a certificate of comaximality")
            },
        },
        Fixture {
            name: "patching eliminates the last variable",
            run: || {
                let r = fx_ring();
                let row = fx_normalized(&r);
                let sols = elim::local_loop(&row, 1, &SearchBudget::default())
                    .map_err(|e| e.to_string())?;
                let u = elim::patch(&sols, 1).map_err(|e| e.to_string())?;
                let m = PolyMatrix::row_vector(&r, row);
                let expected: Vec<Poly> = ["0", "2*x+1", "x"]
                    .iter()
                    .map(|s| Poly::parse(&r, s).unwrap())
                    .collect();
                check(m.mul(&u).row(0) == expected, "expected the row at y = 0")?;
                let det = u.det().map_err(|e| e.to_string())?;
                check(det.is_one(), "expected determinant 1")
            },
        },
        Fixture {
            name: "row solution with unit determinant",
            run: || {
                let r = fx_ring();
                let sol = driver::qs_row(&fx_row(&r)).map_err(|e| e.to_string())?;
                let d = sol.det_v.to_canonical_string();
                check(d == "1" || d == "-1", "expected determinant +-1")
            },
        },
        Fixture {
            name: "completion extends the row invertibly",
            run: || {
                let r = fx_ring();
                let m = PolyMatrix::row_vector(&r, fx_row(&r));
                let c = driver::complete_matrix(&m).map_err(|e| e.to_string())?;
                check(c.row(0) == m.row(0), "first row must be the input")?;
                let d = c.det().map_err(|e| e.to_string())?.to_canonical_string();
                check(d == "1" || d == "-1", "expected determinant +-1")
            },
        },
        Fixture {
            name: "kernel presentation is projective",
            run: || {
                let r = fx_ring();
                let col = PolyMatrix::new(
                    &r,
                    3,
                    1,
                    fx_row(&r),
                );
                let ok = driver::is_projective(&col).map_err(|e| e.to_string())?;
                check(ok, "expected a projective cokernel")
            },
        },
        Fixture {
            name: "kernel isomorphism certificate verifies",
            run: || {
                let r = fx_ring();
                let m = PolyMatrix::row_vector(&r, fx_row(&r));
                let (b, w) = driver::qs_isomorphism(&m).map_err(|e| e.to_string())?;
                check(w.mul(&b).is_identity(), "left inverse must verify")?;
                check(m.mul(&b).is_zero(), "basis must annihilate the row")
            },
        },
        Fixture {
            name: "free kernel basis with left inverse",
            run: || {
                let r = fx_ring();
                let m = PolyMatrix::row_vector(&r, fx_row(&r));
                let b = driver::compute_free_basis(&m).map_err(|e| e.to_string())?;
                check(
                    b.nrows() == 3 && b.ncols() == 2,
                    "expected a 3 x 2 kernel basis",
                )?;
                check(m.mul(&b).is_zero(), "basis must annihilate the row")
            },
        },
    ]
}

fn run_fixtures(cli: &Cli) -> i32 {
    let mut lines = Vec::new();
    let mut failed = 0usize;
    let list = fixtures();
    let total = list.len();
    for fx in list {
        match (fx.run)() {
            Ok(()) => lines.push(format!("PASS {}", fx.name)),
            Err(msg) => {
                failed += 1;
                lines.push(format!("FAIL {}: {msg}", fx.name));
            }
        }
    }
    lines.push(format!("{} passed, {failed} failed", total - failed));
    let text = format!("{}\n", lines.join("\n"));
    let write = match cli.out.as_deref() {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = write {
        eprintln!("error: {e}");
        return 2;
    }
    if failed == 0 {
        0
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_partition_the_error_space() {
        assert_eq!(exit_code_for(&Error::NotUnimodular { minors_basis: vec![] }), 1);
        assert_eq!(exit_code_for(&Error::NotUnimodularLocally), 1);
        assert_eq!(exit_code_for(&Error::DenominatorsNotComaximal), 1);
        assert_eq!(exit_code_for(&Error::RowTooShort("".into())), 1);
        assert_eq!(exit_code_for(&Error::Parse("".into())), 2);
        assert_eq!(exit_code_for(&Error::ShapeError("".into())), 2);
        assert_eq!(exit_code_for(&Error::InvalidRing("".into())), 2);
        assert_eq!(exit_code_for(&Error::SearchExhausted("".into())), 3);
        assert_eq!(exit_code_for(&Error::NormalizationExhausted("".into())), 3);
        assert_eq!(exit_code_for(&Error::ResourceExceeded("".into())), 3);
        assert_eq!(exit_code_for(&Error::Internal("".into())), 4);
    }

    #[test]
    fn ring_parsing_accepts_the_three_coefficient_kinds() {
        let q = parse_ring(&JobRing { coeff: "QQ".into(), p: None, vars: vec!["x".into()] });
        assert!(q.is_ok());
        let z = parse_ring(&JobRing { coeff: "ZZ".into(), p: None, vars: vec![] });
        assert!(z.is_ok());
        let zp = parse_ring(&JobRing {
            coeff: "Zp".into(),
            p: Some(101),
            vars: vec!["x".into(), "y".into()],
        });
        assert!(zp.is_ok());
        let bad = parse_ring(&JobRing { coeff: "GF".into(), p: None, vars: vec![] });
        assert_eq!(bad.unwrap_err().code, 2);
        let missing = parse_ring(&JobRing { coeff: "Zp".into(), p: None, vars: vec![] });
        assert_eq!(missing.unwrap_err().code, 2);
    }

    #[test]
    fn builtin_fixture_suite_is_all_green() {
        for fx in fixtures() {
            if let Err(msg) = (fx.run)() {
                panic!("fixture {:?} failed: {msg}", fx.name);
            }
        }
    }
}
