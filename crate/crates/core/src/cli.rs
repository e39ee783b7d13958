//! JSON job runner behind the `simclass` binary.
//!
//! A job is a JSON object with a `command`, a `ring` and a command-specific
//! payload. The result is a JSON object with sorted keys. Exit codes: 0 on
//! success (boolean answers included), 2 on malformed input, 3 when a library
//! precondition fails.

use std::path::PathBuf;

use clap::Parser;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::classify::{self, ClassNumber};
use crate::dedekind::{self, Freeness, LElem, QuadBase};
use crate::error::Error;
use crate::linalg::Matrix;
use crate::lm::{self, IdealBasis, LmRing};
use crate::oracle::{self, DEFAULT_BUDGET};
use crate::parse::{parse_elem, parse_poly};
use crate::rings::{Ramification, RingDesc, ScalarField};

pub const COMMANDS: [&str; 9] =
    ["classify", "similar", "witness", "class-list", "class-number", "lm-to-ideal", "lm-to-matrix", "lattice-free", "cross-check"];

#[derive(Parser, Debug, Clone, Default)]
#[command(name = "simclass", about = "Similarity classes of 2x2 matrices over DVRs, matrix/ideal correspondence and lattice freeness")]
pub struct Args {
    /// Command; overrides the `command` field of the job.
    pub command: Option<String>,
    /// Ring as JSON text or a path to a JSON file; overrides the job's `ring`.
    #[arg(long)]
    pub ring: Option<String>,
    /// Job file, or `-` for stdin.
    #[arg(long = "in", default_value = "-")]
    pub input: String,
    /// Output file, or `-` for stdout.
    #[arg(long = "out", default_value = "-")]
    pub output: String,
    /// Enumeration bound for inseparable and repeated-root polynomials.
    #[arg(long)]
    pub insep_bound: Option<u32>,
    /// Candidate budget for the residue search.
    #[arg(long)]
    pub oracle_budget: Option<u64>,
    /// Also run the residue search on `similar` and `witness` jobs.
    #[arg(long)]
    pub cross_check: bool,
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => CliError::Input(m),
            e => CliError::Lib(e),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Lib(_) => 3,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Input(m) => json!({"error": "Parse", "message": m}),
            CliError::Lib(e) => json!({"error": e.name(), "message": e.to_string()}),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn input_err(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

#[derive(Clone, Debug)]
pub struct Options {
    pub insep_bound: Option<u32>,
    pub budget: u64,
    pub cross_check: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { insep_bound: None, budget: DEFAULT_BUDGET, cross_check: false }
    }
}

/// The ring of a job.
#[derive(Clone, Debug)]
pub enum JobRing {
    Dvr(RingDesc),
    Integers,
    Quad(QuadBase),
}

fn get<'a>(v: &'a Value, key: &str) -> CliResult<&'a Value> {
    v.get(key).ok_or_else(|| input_err(format!("missing field {key:?}")))
}

fn get_str<'a>(v: &'a Value, key: &str) -> CliResult<&'a str> {
    get(v, key)?.as_str().ok_or_else(|| input_err(format!("field {key:?} must be a string")))
}

fn get_u64(v: &Value, key: &str) -> CliResult<u64> {
    get(v, key)?.as_u64().ok_or_else(|| input_err(format!("field {key:?} must be a non-negative integer")))
}

pub fn parse_ring_desc(v: &Value) -> CliResult<RingDesc> {
    match parse_ring(v)? {
        JobRing::Dvr(r) => Ok(r),
        _ => Err(input_err("expected a DVR (ZLoc, FpTLoc or QuadExt)")),
    }
}

pub fn parse_ring(v: &Value) -> CliResult<JobRing> {
    Ok(match get_str(v, "kind")? {
        "ZLoc" => JobRing::Dvr(RingDesc::zloc(get_u64(v, "p")?)?),
        "FpTLoc" => JobRing::Dvr(RingDesc::fptloc(get_u64(v, "p")?)?),
        "QuadExt" => {
            let base = parse_ring_desc(get(v, "base")?)?;
            let f = parse_poly(&base, get_str(v, "minpoly")?)?;
            if f.degree() != 2 {
                return Err(input_err("minpoly must be quadratic"));
            }
            let (a, b) = f.quad_ab(&base)?;
            let ram = match v.get("ramification").and_then(Value::as_str).unwrap_or("unramified") {
                "unramified" => Ramification::Unramified,
                "eisenstein" => Ramification::Eisenstein,
                other => return Err(input_err(format!("unknown ramification {other:?}"))),
            };
            JobRing::Dvr(RingDesc::quad_ext(base, a, b, ram)?)
        }
        "Integers" => JobRing::Integers,
        "QuadBase" => {
            let d = get(v, "d")?.as_i64().ok_or_else(|| input_err("field \"d\" must be an integer"))?;
            JobRing::Quad(QuadBase::new(d)?)
        }
        other => return Err(input_err(format!("unknown ring kind {other:?}"))),
    })
}

fn elem_text(v: &Value) -> CliResult<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(input_err("elements must be strings or numbers")),
    }
}

fn read_matrix<F: ScalarField>(field: &F, v: &Value) -> CliResult<Matrix> {
    let rows = v.as_array().ok_or_else(|| input_err("matrix must be an array of rows"))?;
    let mut out = Vec::new();
    for r in rows {
        let r = r.as_array().ok_or_else(|| input_err("matrix rows must be arrays"))?;
        out.push(r.iter().map(|x| Ok(parse_elem(field, &elem_text(x)?)?)).collect::<CliResult<Vec<_>>>()?);
    }
    Ok(Matrix::new(out)?)
}

fn read_matrices<F: ScalarField>(field: &F, job: &Value, n: usize) -> CliResult<Vec<Matrix>> {
    let ms = get(job, "matrices")?.as_array().ok_or_else(|| input_err("\"matrices\" must be an array"))?;
    if ms.len() != n {
        return Err(input_err(format!("expected {n} matrices, got {}", ms.len())));
    }
    ms.iter().map(|m| read_matrix(field, m)).collect()
}

fn read_rational(v: &Value) -> CliResult<BigRational> {
    let s = elem_text(v)?;
    let s = s.trim();
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let p = |t: &str| t.trim().parse::<BigInt>().map_err(|_| input_err(format!("bad rational {s:?}")));
    let d = p(d)?;
    if d == BigInt::from(0) {
        return Err(input_err("zero denominator"));
    }
    Ok(BigRational::new(p(n)?, d))
}

pub fn matrix_json(m: &Matrix) -> Value {
    Value::Array(m.rows().iter().map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect())).collect())
}

/// `U A = B U` with `det U` a unit, recomputed from scratch.
fn recheck(ring: &RingDesc, u: &Matrix, a: &Matrix, b: &Matrix) -> bool {
    let lhs = u.mul(ring, a);
    let rhs = b.mul(ring, u);
    let det = ring.sub(&ring.mul(u.get(0, 0), u.get(1, 1)), &ring.mul(u.get(0, 1), u.get(1, 0)));
    lhs == rhs && u.entries().all(|x| ring.is_integral(x)) && ring.is_unit(&det)
}

fn class_number_json(c: ClassNumber) -> Value {
    match c {
        ClassNumber::Finite(n) => json!({"class_number": n}),
        ClassNumber::LowerBound(n) => json!({"class_number": n, "lower_bound": true}),
    }
}

fn oracle_json(ring: &RingDesc, a: &Matrix, b: &Matrix, n: u32, budget: u64) -> CliResult<Value> {
    let w = oracle::conj_search_mod(ring, a, b, n, budget)?;
    Ok(match w {
        Some(w) => json!({"modulus_exponent": n, "found": true, "witness": matrix_json(&w.u)}),
        None => json!({"modulus_exponent": n, "found": false}),
    })
}

fn dvr_job(cmd: &str, ring: &RingDesc, job: &Value, opts: &Options) -> CliResult<Value> {
    let n_mod = job.get("n").and_then(Value::as_u64).unwrap_or(2) as u32;
    let bound = opts.insep_bound.or_else(|| job.get("insep_bound").and_then(Value::as_u64).map(|b| b as u32));
    Ok(match cmd {
        "classify" => {
            let a = read_matrices(ring, job, 1)?.remove(0);
            let (form, w) = classify::to_canonical(ring, &a)?;
            let c = classify::canonical_matrix(&form)?;
            let ok = recheck(ring, &w.u, &a, &c);
            json!({"form": form.to_string(), "canonical": matrix_json(&c), "witness": matrix_json(&w.u), "verified": ok})
        }
        "similar" | "witness" => {
            let ms = read_matrices(ring, job, 2)?;
            let (a, b) = (&ms[0], &ms[1]);
            let fa = classify::classify(ring, a)?;
            let fb = classify::classify(ring, b)?;
            let mut out = Map::new();
            let sim = classify::similar(ring, a, b)?;
            out.insert("similar".into(), json!(sim));
            out.insert("forms".into(), json!([fa.to_string(), fb.to_string()]));
            if cmd == "witness" {
                match classify::witness(ring, a, b)? {
                    Some(w) => {
                        out.insert("witness".into(), matrix_json(&w.u));
                        out.insert("verified".into(), json!(recheck(ring, &w.u, a, b)));
                    }
                    None => {
                        out.insert("witness".into(), Value::Null);
                    }
                }
            }
            if opts.cross_check {
                let o = oracle_json(ring, a, b, n_mod, opts.budget)?;
                let consistent = o["found"].as_bool() == Some(true) || !sim;
                out.insert("cross_check".into(), o);
                out.insert("consistent".into(), json!(consistent));
            }
            Value::Object(out)
        }
        "class-list" => {
            let f = parse_poly(ring, get_str(job, "poly")?)?;
            let forms = classify::class_list(ring, &f, bound)?;
            let classes = forms
                .iter()
                .map(|x| Ok(json!({"form": x.to_string(), "matrix": matrix_json(&classify::canonical_matrix(x)?)})))
                .collect::<CliResult<Vec<_>>>()?;
            json!({"classes": classes, "count": forms.len()})
        }
        "class-number" => {
            let f = parse_poly(ring, get_str(job, "poly")?)?;
            class_number_json(classify::class_number(ring, &f, bound)?)
        }
        "cross-check" => {
            let ms = read_matrices(ring, job, 2)?;
            let sim = classify::similar(ring, &ms[0], &ms[1])?;
            let o = oracle_json(ring, &ms[0], &ms[1], n_mod, opts.budget)?;
            let consistent = o["found"].as_bool() == Some(true) || !sim;
            json!({"similar": sim, "cross_check": o, "consistent": consistent})
        }
        _ => unreachable!(),
    })
}

fn lm_job(cmd: &str, field: &LmRing, job: &Value) -> CliResult<Value> {
    let f = parse_poly(field, get_str(job, "poly")?)?;
    Ok(match cmd {
        "lm-to-ideal" => {
            let a = read_matrices(field, job, 1)?.remove(0);
            let j = lm::matrix_to_ideal(field, &f, &a)?;
            let back = lm::ideal_to_matrix(field, &j)?;
            let mut out = Map::new();
            out.insert("ideal".into(), json!(j.display_elems()));
            out.insert("basis".into(), matrix_json(&j.coords()?));
            out.insert("verified".into(), json!(back == a));
            if matches!(field, LmRing::Integers) && f.degree() == 2 {
                if let Ok(form) = lm::ideal_to_form(&j) {
                    let r = lm::reduce_form(&form)?;
                    out.insert("form".into(), json!([r.a.to_string(), r.b.to_string(), r.c.to_string()]));
                }
            }
            Value::Object(out)
        }
        "lm-to-matrix" => {
            let m = read_matrix(field, get(job, "ideal")?)?;
            let j = IdealBasis::new(f, m.rows().to_vec());
            let a = lm::ideal_to_matrix(field, &j)?;
            json!({"matrix": matrix_json(&a)})
        }
        _ => unreachable!(),
    })
}

fn lattice_job(base: &QuadBase, job: &Value) -> CliResult<Value> {
    let f = parse_poly(base, get_str(job, "poly")?)?;
    let gens = get(job, "generators")?.as_array().ok_or_else(|| input_err("\"generators\" must be an array"))?;
    let mut elems = Vec::new();
    for g in gens {
        let c = g.as_array().filter(|c| c.len() == 4).ok_or_else(|| input_err("generators are 4-vectors"))?;
        let c: Vec<BigRational> = c.iter().map(read_rational).collect::<CliResult<_>>()?;
        elems.push(LElem::from_coords(base, &[c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()]));
    }
    let j = dedekind::lattice_from_generators(base, &f, &elems)?;
    let x0 = dedekind::default_x0(&j);
    let mut out = Map::new();
    out.insert("intersection".into(), json!(dedekind::intersect_base(&j).to_string()));
    out.insert("coefficient_ideal".into(), json!(dedekind::coefficient_ideal(&j, &x0)?.to_string()));
    out.insert("x0".into(), json!(x0.to_string()));
    match dedekind::is_free(&j) {
        Freeness::Free(b) => {
            let a = dedekind::mult_matrix(&j, &b)?;
            let st = dedekind::steinitz(&j, &x0)?;
            out.insert("free".into(), json!(true));
            out.insert("steinitz".into(), json!(st.to_string()));
            out.insert("basis".into(), json!([b.b1.to_string(), b.b2.to_string()]));
            out.insert("matrix".into(), matrix_json(&a));
            let spans = dedekind::r_span(base, &[b.b1, b.b2]) == j.hnf();
            out.insert("verified".into(), json!(spans && a.char_poly(base) == f));
        }
        Freeness::NotFree { steinitz } => {
            out.insert("free".into(), json!(false));
            out.insert("steinitz".into(), json!(steinitz.to_string()));
        }
    }
    Ok(Value::Object(out))
}

/// Runs one job.
pub fn run_job(job: &Value, command: Option<&str>, ring: Option<&Value>, opts: &Options) -> CliResult<Value> {
    let cmd = match command {
        Some(c) => c,
        None => get_str(job, "command")?,
    };
    if !COMMANDS.contains(&cmd) {
        return Err(input_err(format!("unknown command {cmd:?}")));
    }
    let ring = parse_ring(match ring {
        Some(r) => r,
        None => get(job, "ring")?,
    })?;
    match (cmd, ring) {
        ("lm-to-ideal" | "lm-to-matrix", JobRing::Integers) => lm_job(cmd, &LmRing::Integers, job),
        ("lm-to-ideal" | "lm-to-matrix", JobRing::Dvr(r)) => lm_job(cmd, &LmRing::Dvr(r), job),
        ("lattice-free", JobRing::Quad(b)) => lattice_job(&b, job),
        ("lattice-free", _) => Err(CliError::Lib(Error::UnsupportedRing)),
        (_, JobRing::Dvr(r)) => dvr_job(cmd, &r, job, opts),
        _ => Err(CliError::Lib(Error::UnsupportedRing)),
    }
}

fn read_source(s: &str) -> std::io::Result<String> {
    if s == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(PathBuf::from(s))
    }
}

/// Parses `text` as JSON, or reads it as a file path when it is not JSON.
fn json_or_file(text: &str) -> CliResult<Value> {
    if let Ok(v) = serde_json::from_str(text) {
        return Ok(v);
    }
    let body = std::fs::read_to_string(text).map_err(|e| input_err(format!("{text}: {e}")))?;
    serde_json::from_str(&body).map_err(|e| input_err(format!("{text}: {e}")))
}

/// Executes a full invocation and returns the output document and exit code.
pub fn execute(args: &Args) -> (Value, i32) {
    let opts = Options {
        insep_bound: args.insep_bound,
        budget: args.oracle_budget.unwrap_or(DEFAULT_BUDGET),
        cross_check: args.cross_check,
    };
    let res = (|| {
        let text = read_source(&args.input).map_err(|e| input_err(format!("{}: {e}", args.input)))?;
        let job: Value = serde_json::from_str(&text).map_err(|e| input_err(format!("invalid JSON: {e}")))?;
        let ring = args.ring.as_deref().map(json_or_file).transpose()?;
        run_job(&job, args.command.as_deref(), ring.as_ref(), &opts)
    })();
    match res {
        Ok(v) => (v, 0),
        Err(e) => (e.to_json(), e.exit_code()),
    }
}

/// Entry point of the binary.
pub fn main() -> i32 {
    let args = Args::parse();
    let (doc, code) = execute(&args);
    let text = format!("{}\n", serde_json::to_string(&doc).expect("serializable"));
    let written = if args.output == "-" {
        print!("{text}");
        Ok(())
    } else {
        std::fs::write(&args.output, text)
    };
    match written {
        Ok(()) => code,
        Err(e) => {
            eprintln!("{}: {e}", args.output);
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(job: Value) -> CliResult<Value> {
        run_job(&job, None, None, &Options::default())
    }

    #[test]
    fn similar_job() {
        let v = run(json!({"command": "similar", "ring": {"kind": "ZLoc", "p": 2},
            "matrices": [[["0", "1"], ["5", "0"]], [["-1", "2"], ["2", "1"]]]}))
        .unwrap();
        assert_eq!(v, json!({"similar": false, "forms": ["Case22Main{n=0}", "Case22Extra{r=1,i=1}"]}));
    }

    #[test]
    fn class_number_job() {
        let v = run(json!({"command": "class-number", "ring": {"kind": "ZLoc", "p": 2}, "poly": "x^2-5"})).unwrap();
        assert_eq!(v, json!({"class_number": 2}));
    }

    #[test]
    fn lattice_job_output() {
        let v = run(json!({"command": "lattice-free", "ring": {"kind": "QuadBase", "d": -5}, "poly": "x^2-2",
            "generators": [["2", "0", "0", "0"], ["1", "0", "-1/2", "1/2"]]}))
        .unwrap();
        assert_eq!(v["free"], json!(false));
        assert_eq!(v["steinitz"], json!("(4, 2+2*w)"));
    }

    #[test]
    fn error_codes() {
        let e = run(json!({"command": "similar", "ring": {"kind": "ZLoc", "p": 4}, "matrices": []})).unwrap_err();
        assert_eq!(e.exit_code(), 3);
        let e = run(json!({"command": "frobnicate", "ring": {"kind": "ZLoc", "p": 2}})).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = run(json!({"command": "classify", "ring": {"kind": "ZLoc", "p": 2}, "matrices": [[["1/2", "0"], ["0", "1"]]]}))
            .unwrap_err();
        assert_eq!(e.to_json()["error"], json!("NotIntegral"));
    }
}
