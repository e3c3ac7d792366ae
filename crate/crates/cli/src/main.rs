use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use grasscode::bounds::{
    bound_ratio, bound_row, closed_form, gaussian_binomial, packing_bound, ClosedForm,
};
use grasscode::cyclic::{cyclic_greedy_search, CyclicSpace};
use grasscode::designs::{
    certify_code, code_to_covering, covering_to_code, dual_code, lift_covering, spread_construct,
    turan_dual, verify_code, verify_covering, verify_turan, CoveringDesign, Design, TuranDesign,
};
use grasscode::matcher::{
    greedy_matching, matching_to_code, nibble_matching, trivial_code, IncidenceIndex,
};
use grasscode::subspace::DEFAULT_ENUMERATION_CAP;
use grasscode::{FieldSpec, Space, SubspaceCode};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

const SCHEMA_VERSION: u32 = 1;
const CAP_ENV: &str = "GRASSCODE_CAP";

/// Bounds, constructions and verification for Grassmannian codes and
/// q-covering designs.
#[derive(Parser, Debug)]
#[command(name = "grasscode", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum Command {
    /// Bound tables over a parameter grid, or a closed-form value
    Bounds(BoundsArgs),
    /// Enumerate a Grassmannian and compare with the Gaussian binomial
    Enumerate(EnumerateArgs),
    /// Construct a spread of k-subspaces (k must divide n)
    Spread(SpreadArgs),
    /// Build a code as a matching in the incidence hypergraph
    Match(MatchArgs),
    /// Verify a code file as a code, covering or Turán design
    Verify(VerifyArgs),
    /// Convert between codes and coverings
    Convert(ConvertArgs),
    /// Replace every codeword by its orthogonal complement
    Dual(DualArgs),
    /// Lift a covering of F_q^n to F_q^(n+1)
    Lift(LiftArgs),
    /// Complement a covering into a Turán design or back
    TuranDual(TuranDualArgs),
    /// Greedy search for a cyclic code
    CyclicSearch(CyclicArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Serialize)]
struct BoundsArgs {
    /// Field sizes: `2`, `2,3` or `2..5`
    #[arg(long)]
    q: Option<String>,
    /// Ambient dimensions
    #[arg(long)]
    n: Option<String>,
    /// Codeword dimensions
    #[arg(long)]
    k: Option<String>,
    /// Distance parameters (minimum distance is 2*delta + 2)
    #[arg(long)]
    delta: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Evaluate a closed form instead of a grid
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(ClosedForm::NAMES))]
    closed_form: Option<String>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    v: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct FieldArgs {
    /// Field order, e.g. `2`, `4` or `2^2`
    #[arg(long)]
    q: String,
    #[arg(long)]
    n: usize,
}

#[derive(Args, Debug, Serialize)]
struct EnumerateArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    k: usize,
    /// Write every k-subspace as a code file
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct SpreadArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Algo {
    Greedy,
    Nibble,
}

#[derive(Args, Debug, Serialize)]
struct MatchArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    delta: usize,
    #[arg(long, value_enum, default_value_t = Algo::Greedy)]
    algo: Algo,
    #[arg(long)]
    seed: u64,
    /// Nibble bite size relative to the average degree
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    /// Maximum nibble rounds before the greedy finish
    #[arg(long, default_value_t = 50)]
    rounds: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write run statistics as JSON
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(long)]
    file: PathBuf,
    /// Check pairwise subspace distance at least this
    #[arg(long)]
    min_distance: Option<usize>,
    /// Check that every r-subspace lies in a member
    #[arg(long)]
    covering: Option<usize>,
    /// Check that every k-subspace contains a member
    #[arg(long)]
    turan: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Target {
    Covering,
    Code,
}

#[derive(Args, Debug, Serialize)]
struct ConvertArgs {
    #[arg(long)]
    file: PathBuf,
    #[arg(long, value_enum)]
    to: Target,
    /// Distance of the input code (for `--to covering`)
    #[arg(long)]
    min_distance: Option<usize>,
    /// Covered dimension of the input covering (for `--to code`)
    #[arg(long)]
    covering: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct DualArgs {
    #[arg(long)]
    file: PathBuf,
    #[arg(long)]
    min_distance: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct LiftArgs {
    #[arg(long)]
    file: PathBuf,
    /// Covered dimension of the input covering
    #[arg(long)]
    covering: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct TuranDualArgs {
    #[arg(long)]
    file: PathBuf,
    /// Treat the input as a covering of r-subspaces
    #[arg(long, conflicts_with = "turan", required_unless_present = "turan")]
    covering: Option<usize>,
    /// Treat the input as a Turán design for k-subspaces
    #[arg(long)]
    turan: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct CyclicArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Orbit summary JSON; defaults to `<out>.orbits.json`
    #[arg(long)]
    orbits: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Cap(String),
    Verification(String),
    Io(String),
}

impl From<grasscode::Error> for Failure {
    fn from(e: grasscode::Error) -> Self {
        use grasscode::Error as E;
        match e {
            E::CapExceeded { .. } => Failure::Cap(e.to_string()),
            E::VerificationFailed(_) | E::Unverified(_) => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome<T = ()> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (2, m),
                Failure::Cap(m) => (3, m),
                Failure::Verification(m) => (4, m),
                Failure::Io(m) => (1, m),
            };
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cmd: &Command) -> Outcome {
    let config = serde_json::to_value(cmd).expect("arguments serialize");
    match cmd {
        Command::Bounds(a) => bounds(a, &config),
        Command::Enumerate(a) => enumerate(a, &config),
        Command::Spread(a) => spread(a, &config),
        Command::Match(a) => matching(a, &config),
        Command::Verify(a) => verify(a, &config),
        Command::Convert(a) => convert(a, &config),
        Command::Dual(a) => dual(a, &config),
        Command::Lift(a) => lift(a, &config),
        Command::TuranDual(a) => turan(a, &config),
        Command::CyclicSearch(a) => cyclic(a, &config),
    }
}

fn cap() -> Outcome<u64> {
    match std::env::var(CAP_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{CAP_ENV}={s} is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_ENUMERATION_CAP),
    }
}

fn space(f: &FieldArgs) -> Outcome<Space> {
    let field = FieldSpec::from_order_str(&f.q, None)?;
    Ok(Space::new(field, f.n).with_cap(cap()?))
}

fn read_code(path: &Path) -> Outcome<SubspaceCode> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(SubspaceCode::parse_with_cap(&text, cap()?)?)
}

fn config_line(config: &Value) -> String {
    format!("config {config}")
}

/// Writes a code file to `out`, or to stdout when absent.
fn emit_code(code: &SubspaceCode, config: &Value, out: Option<&Path>) -> Outcome {
    let mut code = code.clone();
    code.push_comment(config_line(config));
    let text = code.to_file_string()?;
    match out {
        Some(p) => write_file(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn print_json(v: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("json values serialize")
    );
}

/// Summary printed when a code went to a file.
fn summarize(code: &SubspaceCode, config: &Value, out: Option<&Path>, extra: Value) {
    if out.is_none() {
        return;
    }
    let mut v = json!({
        "schema_version": SCHEMA_VERSION,
        "config": config,
        "q": code.q(),
        "n": code.n(),
        "k": code.k(),
        "size": code.len(),
    });
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
        m.extend(e);
    }
    print_json(&v);
}

/// Parses `5`, `2,3,7` or the inclusive range `4..8`.
fn parse_list(flag: &str, s: &str) -> Outcome<Vec<u64>> {
    let bad = || {
        Failure::Usage(format!(
            "--{flag}: `{s}` is not a number, list or a..b range"
        ))
    };
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    Ok(out)
}

fn required<'a>(flag: &str, v: &'a Option<String>) -> Outcome<&'a str> {
    v.as_deref()
        .ok_or_else(|| Failure::Usage(format!("--{flag} is required")))
}

fn single(flag: &str, v: &Option<String>) -> Outcome<u64> {
    let xs = parse_list(flag, required(flag, v)?)?;
    match xs[..] {
        [x] => Ok(x),
        _ => Err(Failure::Usage(format!(
            "--{flag} takes a single value here"
        ))),
    }
}

fn need<T: Copy>(flag: &str, v: Option<T>) -> Outcome<T> {
    v.ok_or_else(|| Failure::Usage(format!("--{flag} is required")))
}

fn bounds(a: &BoundsArgs, config: &Value) -> Outcome {
    if let Some(name) = &a.closed_form {
        if a.format != Format::Json {
            return Err(Failure::Usage(
                "closed forms are reported as JSON only".into(),
            ));
        }
        let q = single("q", &a.q)?;
        let form = match name.as_str() {
            "spread-even" => ClosedForm::SpreadEven {
                q,
                n: single("n", &a.n)? as usize,
            },
            "spread-odd" => ClosedForm::SpreadOdd {
                q,
                n: single("n", &a.n)? as usize,
            },
            "turan-normal-spread" => ClosedForm::TuranNormalSpread {
                q,
                v: need("v", a.v)?,
                m: need("m", a.m)?,
                delta: single("delta", &a.delta)? as usize,
            },
            "covering-divisible" => ClosedForm::CoveringDivisible {
                q,
                n: single("n", &a.n)? as usize,
                r: need("r", a.r)?,
            },
            "covering-large-n" => ClosedForm::CoveringLargeN {
                q,
                t: need("t", a.t)?,
                r: need("r", a.r)?,
            },
            other => return Err(Failure::Usage(format!("unknown closed form {other}"))),
        };
        let report = closed_form(form)?;
        let mut v = serde_json::to_value(&report).expect("reports serialize");
        v["schema_version"] = json!(SCHEMA_VERSION);
        v["config"] = config.clone();
        print_json(&v);
        return Ok(());
    }

    let qs = parse_list("q", required("q", &a.q)?)?;
    let ns = parse_list("n", required("n", &a.n)?)?;
    let ks = parse_list("k", required("k", &a.k)?)?;
    let ds = parse_list("delta", required("delta", &a.delta)?)?;
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &q in &qs {
        for &n in &ns {
            for &k in &ks {
                for &d in &ds {
                    match bound_row(q, n as usize, k as usize, d as usize) {
                        Ok(row) => rows.push(row),
                        Err(e) => {
                            eprintln!("skipping q={q} n={n} k={k} delta={d}: {e}");
                            skipped.push(json!({"q": q, "n": n, "k": k, "delta": d, "reason": e.to_string()}));
                        }
                    }
                }
            }
        }
    }
    match a.format {
        Format::Csv => {
            println!("q,n,k,delta,packing,iterated_johnson,covering,iterated_schonheim");
            for r in &rows {
                let schonheim = r
                    .iterated_schonheim
                    .as_ref()
                    .map(|x| x.to_string())
                    .unwrap_or_default();
                println!(
                    "{},{},{},{},{},{},{},{}",
                    r.q, r.n, r.k, r.delta, r.packing, r.iterated_johnson, r.covering, schonheim
                );
            }
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "q": r.q, "n": r.n, "k": r.k, "delta": r.delta,
                        "packing": r.packing.to_string(),
                        "iterated_johnson": r.iterated_johnson.to_string(),
                        "covering": r.covering.to_string(),
                        "iterated_schonheim": r.iterated_schonheim.as_ref().map(|x| x.to_string()),
                    })
                })
                .collect();
            print_json(&json!({
                "schema_version": SCHEMA_VERSION,
                "config": config,
                "rows": rows,
                "skipped": skipped,
            }));
        }
    }
    Ok(())
}

fn enumerate(a: &EnumerateArgs, config: &Value) -> Outcome {
    let space = space(&a.field)?;
    if a.k > space.n() {
        return Err(Failure::Usage(format!(
            "k = {} exceeds n = {}",
            a.k,
            space.n()
        )));
    }
    let formula = gaussian_binomial(space.q(), space.n(), a.k)?;
    let all: Vec<_> = space.enumerate(a.k)?.collect();
    let matches = formula == all.len().into();
    if let Some(out) = &a.out {
        let code = SubspaceCode::new(&space, a.k, all.iter().cloned())?;
        emit_code(&code, config, Some(out))?;
    }
    print_json(&json!({
        "schema_version": SCHEMA_VERSION,
        "config": config,
        "count": all.len(),
        "gaussian_binomial": formula.to_string(),
        "matches": matches,
    }));
    if !matches {
        return Err(Failure::Verification(format!(
            "enumerated {} subspaces but the Gaussian binomial is {formula}",
            all.len()
        )));
    }
    Ok(())
}

fn ratio_to_packing(code: &SubspaceCode, delta: usize) -> Outcome<Value> {
    let bound = packing_bound(code.q(), code.n(), code.k(), delta)?;
    let r = bound_ratio(
        &code.len().into(),
        &BigRational::from_integer(bound.clone().into()),
    )?;
    Ok(json!({"packing_bound": bound.to_string(), "ratio_to_packing": r}))
}

fn spread(a: &SpreadArgs, config: &Value) -> Outcome {
    let space = space(&a.field)?;
    let code = spread_construct(&space, a.k)?;
    emit_code(&code, config, a.out.as_deref())?;
    let extra = ratio_to_packing(&code, a.k - 1)?;
    summarize(
        &code,
        config,
        a.out.as_deref(),
        json!({"min_distance": 2 * a.k, "bounds": extra}),
    );
    Ok(())
}

fn matching(a: &MatchArgs, config: &Value) -> Outcome {
    let space = space(&a.field)?;
    if a.k <= space.n() && (a.delta == 0 || a.delta == a.k) {
        let code = trivial_code(&space, a.k, a.delta)?;
        emit_code(&code, config, a.out.as_deref())?;
        let ratio = ratio_to_packing(&code, a.delta)?;
        summarize(
            &code,
            config,
            a.out.as_deref(),
            json!({"trivial": true, "bounds": ratio}),
        );
        return Ok(());
    }
    let idx = IncidenceIndex::build(&space, a.k, a.delta)?;
    let result = match a.algo {
        Algo::Greedy => greedy_matching(&idx, a.seed)?,
        Algo::Nibble => nibble_matching(&idx, a.seed, a.epsilon, a.rounds)?,
    };
    let code = matching_to_code(&result, &space)?;
    emit_code(&code, config, a.out.as_deref())?;
    let ratio = ratio_to_packing(&code, a.delta)?;
    let stats = json!({
        "schema_version": SCHEMA_VERSION,
        "config": config,
        "algorithm": result.algorithm,
        "seed": result.seed,
        "rng": grasscode::rng::RNG_NAME,
        "size": result.len(),
        "vertex_count": result.vertex_count,
        "uniformity": idx.uniformity(),
        "uncovered": result.uncovered,
        "packing_bound": ratio["packing_bound"],
        "ratio_to_packing": ratio["ratio_to_packing"],
        "rounds": result.rounds,
    });
    if let Some(p) = &a.stats {
        write_file(
            p,
            &format!("{}\n", serde_json::to_string_pretty(&stats).unwrap()),
        )?;
    } else if a.out.is_some() {
        print_json(&stats);
    }
    Ok(())
}

fn verify(a: &VerifyArgs, config: &Value) -> Outcome {
    let code = read_code(&a.file)?;
    if a.min_distance.is_none() && a.covering.is_none() && a.turan.is_none() {
        return Err(Failure::Usage(
            "give at least one of --min-distance, --covering, --turan".into(),
        ));
    }
    let mut ok = true;
    let mut report = json!({
        "schema_version": SCHEMA_VERSION,
        "config": config,
        "q": code.q(), "n": code.n(), "k": code.k(), "size": code.len(),
    });
    if let Some(d) = a.min_distance {
        let r = verify_code(&code, d)?;
        ok &= r.valid;
        report["min_distance"] = json!({
            "required": d,
            "valid": r.valid,
            "observed": r.min_distance,
            "violating_pair": r.violating_pair.map(|(u, v)| [u.digits().to_vec(), v.digits().to_vec()]),
        });
    }
    if let Some(r) = a.covering {
        let rep = verify_covering(&code, r)?;
        ok &= rep.valid;
        report["covering"] = json!({
            "r": r,
            "valid": rep.valid,
            "stats": rep.stats,
            "witness": rep.witness.map(|w| w.digits().to_vec()),
        });
    }
    if let Some(k) = a.turan {
        let rep = verify_turan(&code, k)?;
        ok &= rep.valid;
        report["turan"] = json!({
            "k": k,
            "valid": rep.valid,
            "checked": rep.checked,
            "witness": rep.witness.map(|w| w.digits().to_vec()),
        });
    }
    report["valid"] = json!(ok);
    print_json(&report);
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "{} failed verification",
            a.file.display()
        )))
    }
}

fn convert(a: &ConvertArgs, config: &Value) -> Outcome {
    let code = read_code(&a.file)?;
    let out = match a.to {
        Target::Covering => {
            let d = need("min-distance", a.min_distance)?;
            code_to_covering(&certify_code(code, d)?)?.into_code()
        }
        Target::Code => {
            let r = need("covering", a.covering)?;
            covering_to_code(&CoveringDesign::certify(code, r)?)?
        }
    };
    emit_code(&out, config, a.out.as_deref())?;
    summarize(&out, config, a.out.as_deref(), json!({}));
    Ok(())
}

fn dual(a: &DualArgs, config: &Value) -> Outcome {
    let code = certify_code(read_code(&a.file)?, a.min_distance)?;
    let out = dual_code(&code)?;
    emit_code(&out, config, a.out.as_deref())?;
    summarize(
        &out,
        config,
        a.out.as_deref(),
        json!({"min_distance": a.min_distance}),
    );
    Ok(())
}

fn lift(a: &LiftArgs, config: &Value) -> Outcome {
    let cov = CoveringDesign::certify(read_code(&a.file)?, a.covering)?;
    let out = lift_covering(&cov)?;
    emit_code(out.code(), config, a.out.as_deref())?;
    summarize(
        out.code(),
        config,
        a.out.as_deref(),
        json!({"covering": out.r()}),
    );
    Ok(())
}

fn turan(a: &TuranDualArgs, config: &Value) -> Outcome {
    let code = read_code(&a.file)?;
    let design = match (a.covering, a.turan) {
        (Some(r), None) => Design::Covering(CoveringDesign::certify(code, r)?),
        (None, Some(k)) => Design::Turan(TuranDesign::certify(code, k)?),
        _ => {
            return Err(Failure::Usage(
                "give exactly one of --covering, --turan".into(),
            ))
        }
    };
    let out = turan_dual(&design)?;
    let extra = match &out {
        Design::Covering(c) => json!({"covering": c.r()}),
        Design::Turan(t) => json!({"turan": t.k()}),
    };
    emit_code(out.code(), config, a.out.as_deref())?;
    summarize(out.code(), config, a.out.as_deref(), extra);
    Ok(())
}

fn cyclic(a: &CyclicArgs, config: &Value) -> Outcome {
    let space = space(&a.field)?;
    let cs = CyclicSpace::new(&space)?;
    let found = cyclic_greedy_search(&cs, a.k, a.d, a.seed)?;
    emit_code(&found.code, config, a.out.as_deref())?;
    let sidecar = json!({
        "schema_version": SCHEMA_VERSION,
        "config": config,
        "size": found.code.len(),
        "orbits_examined": found.orbits_examined,
        "accepted_orbits": found.accepted,
        "ratio_to_packing": found.ratio,
    });
    let orbit_path = a.orbits.clone().or_else(|| {
        a.out.as_ref().map(|o| {
            let mut s = o.clone().into_os_string();
            s.push(".orbits.json");
            PathBuf::from(s)
        })
    });
    match orbit_path {
        Some(p) => write_file(
            &p,
            &format!("{}\n", serde_json::to_string_pretty(&sidecar).unwrap()),
        )?,
        None => eprintln!("{}", serde_json::to_string(&sidecar).unwrap()),
    }
    Ok(())
}
