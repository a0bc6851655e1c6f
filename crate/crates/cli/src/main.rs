use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use milnor_core::arrangement::{
    self, generate, parse_arrangement, write_arrangement, Arrangement, Family, SectionOptions,
};
use milnor_core::criteria::{self, Analysis, Certificate, CheckOptions, Status};
use milnor_core::cyclo::{nonvanishing_guaranteed, sum_roots};
use milnor_core::monodromy::{build_diagram, milnor_dim, DiagramRoute, MilnorOptions};
use milnor_core::oracle::{fox_h1, presentation_from_diagram};
use milnor_core::Error;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "milnor",
    version,
    about = "Milnor fiber eigenspaces of hyperplane arrangements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Theorem checks and dual-graph tables for every relevant eigenvalue order.
    Analyze(AnalyzeArgs),
    /// Eigenspace dimension of a line arrangement by monodromy and/or Fox calculus.
    Dim(DimArgs),
    /// Write an arrangement from one of the built-in families.
    Generate(GenerateArgs),
    /// Restrict an arrangement in P^(n-1), n > 3, to a generic plane.
    Section(SectionArgs),
    /// Exact sum of powers of a primitive m-th root of unity.
    SumRoots(SumRootsArgs),
    /// Replay a certificate (or every certificate in an analyze report).
    VerifyCert(VerifyArgs),
}

#[derive(Args)]
struct Common {
    /// Seed for every random choice; recorded in the output.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Suppress the summary on standard error.
    #[arg(short, long)]
    quiet: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AnalyzeMethod {
    Criteria,
    All,
}

#[derive(Args)]
struct AnalyzeArgs {
    input: PathBuf,
    /// Eigenvalue orders (default: every divisor of d, plus 2..=6).
    #[arg(long = "m")]
    m: Vec<u32>,
    /// `all` also computes the dimension by both routes and cross-checks vanishing claims.
    #[arg(long, value_enum, default_value = "criteria")]
    method: AnalyzeMethod,
    /// Exit with status 3 if some order is certified by neither theorem.
    #[arg(long)]
    strict: bool,
    /// Allow n > 3 by working with the rank-2 flats directly.
    #[arg(long)]
    lattice_only: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DimMethod {
    Monodromy,
    Fox,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    Auto,
    Real,
    Tracked,
}

#[derive(Args)]
struct DimArgs {
    input: PathBuf,
    /// Eigenvalue orders (default: every divisor of d that is at least 2).
    #[arg(long = "m")]
    m: Vec<u32>,
    #[arg(long, value_enum, default_value = "both")]
    method: DimMethod,
    #[arg(long, value_enum, default_value = "auto")]
    route: Route,
    /// Index of the line through the pencil center (default: the last).
    #[arg(long)]
    removed: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyName {
    Hessian,
    Remark26i,
    Remark26ii,
    Remark26iii,
    Generic,
    RandomReal,
    Braid,
    BraidSpace,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    family: FamilyName,
    #[arg(long, default_value_t = 3)]
    b: u32,
    #[arg(long = "m", default_value_t = 4)]
    m: usize,
    #[arg(long, default_value_t = 2)]
    a: usize,
    #[arg(long, default_value_t = 6)]
    d: usize,
    /// Write the arrangement here; the JSON summary then goes to standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    quiet: bool,
}

#[derive(Args)]
struct SectionArgs {
    input: PathBuf,
    /// Write the sectioned arrangement here; the JSON summary then goes to standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    quiet: bool,
}

#[derive(Args)]
struct SumRootsArgs {
    #[arg(long = "m")]
    m: u32,
    /// Residues, e.g. `0 3 4 8 9`.
    #[arg(allow_negative_numbers = true)]
    residues: Vec<i64>,
    #[arg(short, long)]
    quiet: bool,
}

#[derive(Args)]
struct VerifyArgs {
    input: PathBuf,
    certificate: PathBuf,
    #[arg(short, long)]
    quiet: bool,
}

/// Failure with its exit status.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::InvalidInput(_) => 2,
            _ => 1,
        };
        Failure(code, e.to_string())
    }
}

type Outcome = Result<(Value, u8), Failure>;

fn read_arrangement(path: &PathBuf) -> Result<Arrangement, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure(2, format!("{}: {e}", path.display())))?;
    parse_arrangement(&text).map_err(|e| Failure(2, format!("{}: {e}", path.display())))
}

fn envelope(command: &str, seed: Option<u64>, hash: Option<String>, result: Value) -> Value {
    json!({
        "tool": "milnor",
        "version": VERSION,
        "command": command,
        "seed": seed,
        "arrangement_hash": hash,
        "result": result,
    })
}

fn emit(report: &Value, output: Option<&PathBuf>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(report).expect("serializable report") + "\n";
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure(1, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

macro_rules! note {
    ($quiet:expr, $($t:tt)*) => {
        if !$quiet {
            eprintln!($($t)*);
        }
    };
}

fn divisors(d: usize) -> Vec<u32> {
    (2..=d as u32).filter(|&m| d.is_multiple_of(m as usize)).collect()
}

fn describe(c: &Certificate) -> String {
    match (c.status, c.theorem) {
        (Status::Vanishes, Some(t)) => match c.removed_index {
            Some(r) => format!("Vanishes ({}, removed {r})", t.tag()),
            None => format!("Vanishes ({})", t.tag()),
        },
        _ => "Inconclusive".into(),
    }
}

struct DimReport {
    value: Value,
    monodromy: Option<usize>,
    fox: Option<usize>,
}

fn compute_dim(arr: &Arrangement, m: u32, method: DimMethod, opts: &MilnorOptions) -> Result<DimReport, Failure> {
    let d = arr.degree();
    if !d.is_multiple_of(m as usize) {
        return Ok(DimReport {
            value: json!({"m": m, "dim": 0, "trivial_order": true}),
            monodromy: Some(0),
            fox: Some(0),
        });
    }
    let flats = arrangement::rank2_flats(arr);
    let (monodromy, diagram) = if method == DimMethod::Fox {
        (None, build_diagram(arr, &flats, opts)?.0)
    } else {
        let r = milnor_dim(arr, m, opts)?;
        (Some(r.dim), r.diagram.expect("m divides d"))
    };
    let mut pres = None;
    let fox = if method == DimMethod::Monodromy {
        None
    } else {
        let p = presentation_from_diagram(&diagram)?;
        // ρ(meridian) = ζ_m, the inverse of the monodromy route's t = ζ_m^{-1}.
        let h = fox_h1(&p, m, (d / m as usize) as i64)?;
        pres = Some(json!({"generators": p.generators, "relators": p.relators.len(), "length": p.total_length()}));
        Some(h)
    };
    let dim = monodromy.or(fox);
    let value = json!({
        "m": m,
        "dim": dim,
        "monodromy": monodromy,
        "fox": fox,
        "agree": monodromy.zip(fox).map(|(a, b)| a == b),
        "diagram": {
            "source": diagram.source,
            "removed": diagram.removed,
            "center": diagram.center,
            "events": diagram.events.len(),
            "braid_letters": diagram.braid_letter_count(),
        },
        "presentation": pres,
    });
    Ok(DimReport { value, monodromy, fox })
}

fn milnor_options(seed: u64, route: Route, removed: Option<usize>) -> MilnorOptions {
    MilnorOptions {
        seed,
        removed,
        route: match route {
            Route::Auto => DiagramRoute::Auto,
            Route::Real => DiagramRoute::Real,
            Route::Tracked => DiagramRoute::Tracked,
        },
        ..Default::default()
    }
}

fn analyze(args: AnalyzeArgs) -> Outcome {
    let arr = read_arrangement(&args.input)?;
    let opts = CheckOptions {
        lattice_only: args.lattice_only,
        ..Default::default()
    };
    let ctx = criteria::Context::new(&arr, opts)?;
    let analysis: Analysis = if args.m.is_empty() {
        ctx.analyze_all()?
    } else {
        ctx.analyze_orders(&args.m)?
    };
    let quiet = args.common.quiet;
    note!(
        quiet,
        "d={} n={} census {:?}",
        analysis.degree,
        analysis.ambient_dim,
        analysis.census
    );
    let mut code = 0;
    let mut dims = Vec::new();
    for o in &analysis.orders {
        let certified = o.theorem1.vanishes() || o.theorem2.vanishes();
        note!(
            quiet,
            "m={}: r={} r'={}  T1 {}  T2 {}",
            o.m,
            o.r.map_or("-".into(), |r| r.to_string()),
            o.r_prime_default.map_or("-".into(), |r| r.to_string()),
            describe(&o.theorem1),
            describe(&o.theorem2)
        );
        if args.strict && !certified {
            code = code.max(3);
        }
        if args.method == AnalyzeMethod::All && arr.degree() % o.m as usize == 0 {
            if !arr.is_line_arrangement() {
                return Err(Failure(
                    2,
                    "--method all needs a line arrangement; take a section first".into(),
                ));
            }
            let r = compute_dim(
                &arr,
                o.m,
                DimMethod::Both,
                &milnor_options(args.common.seed, Route::Auto, None),
            )?;
            let consistent = r.monodromy == r.fox && (!certified || r.monodromy == Some(0));
            note!(
                quiet,
                "m={}: dim monodromy={:?} fox={:?}{}",
                o.m,
                r.monodromy,
                r.fox,
                if consistent { "" } else { "  DISAGREE" }
            );
            if !consistent {
                code = 4;
            }
            dims.push(r.value);
        }
    }
    let mut result = serde_json::to_value(&analysis).expect("serializable analysis");
    if args.method == AnalyzeMethod::All {
        result["dimensions"] = Value::Array(dims);
    }
    let report = envelope("analyze", Some(args.common.seed), Some(arr.content_hash()), result);
    emit(&report, args.common.output.as_ref())?;
    Ok((report, code))
}

fn dim(args: DimArgs) -> Outcome {
    let arr = read_arrangement(&args.input)?;
    if !arr.is_line_arrangement() {
        return Err(Failure(
            2,
            "dim needs a line arrangement (n = 3); run `section` first".into(),
        ));
    }
    let orders = if args.m.is_empty() {
        divisors(arr.degree())
    } else {
        args.m.clone()
    };
    let opts = milnor_options(args.common.seed, args.route, args.removed);
    let mut code = 0;
    let mut entries = Vec::new();
    for &m in &orders {
        if m < 2 {
            return Err(Failure(2, format!("eigenvalue order must be at least 2, got {m}")));
        }
        let r = compute_dim(&arr, m, args.method, &opts)?;
        let disagree = args.method == DimMethod::Both && r.monodromy != r.fox;
        note!(
            args.common.quiet,
            "m={m}: monodromy={:?} fox={:?}{}",
            r.monodromy,
            r.fox,
            if disagree { "  DISAGREE" } else { "" }
        );
        if disagree {
            code = 4;
        }
        entries.push(r.value);
    }
    let report = envelope(
        "dim",
        Some(args.common.seed),
        Some(arr.content_hash()),
        json!({"degree": arr.degree(), "orders": entries}),
    );
    emit(&report, args.common.output.as_ref())?;
    Ok((report, code))
}

fn family(args: &GenerateArgs) -> Family {
    match args.family {
        FamilyName::Hessian => Family::Hessian { b: args.b },
        FamilyName::Remark26i => Family::Remark26i { m: args.m, a: args.a },
        FamilyName::Remark26ii => Family::Remark26ii(Default::default()),
        FamilyName::Remark26iii => Family::Remark26iii(Default::default()),
        FamilyName::Generic => Family::Generic { d: args.d },
        FamilyName::RandomReal => Family::RandomReal { d: args.d },
        FamilyName::Braid => Family::Braid,
        FamilyName::BraidSpace => Family::BraidSpace,
    }
}

/// Writes an arrangement file, or prints it when no output path is given.
fn write_or_print(arr: &Arrangement, output: Option<&PathBuf>, command: &str, seed: u64, extra: Value) -> Outcome {
    let text = write_arrangement(arr, false);
    let flats = arrangement::rank2_flats(arr);
    let mut result = json!({
        "degree": arr.degree(),
        "ambient_dim": arr.ambient_dim(),
        "field_order": arr.field_order(),
        "census": arrangement::census(&flats),
    });
    if let (Value::Object(r), Value::Object(e)) = (&mut result, extra) {
        r.extend(e);
    }
    let report = envelope(command, Some(seed), Some(arr.content_hash()), result);
    match output {
        Some(p) => {
            std::fs::write(p, &text).map_err(|e| Failure(1, format!("{}: {e}", p.display())))?;
            emit(&report, None)?;
        }
        None => print!("{text}"),
    }
    Ok((report, 0))
}

fn generate_cmd(args: GenerateArgs) -> Outcome {
    let arr = generate(&family(&args), args.seed)?;
    note!(args.quiet, "generated d={} n={}", arr.degree(), arr.ambient_dim());
    write_or_print(&arr, args.output.as_ref(), "generate", args.seed, json!({}))
}

fn section(args: SectionArgs) -> Outcome {
    let arr = read_arrangement(&args.input)?;
    let opts = SectionOptions {
        seed: args.seed,
        ..Default::default()
    };
    let s = arrangement::generic_section(&arr, &opts)?;
    note!(
        args.quiet,
        "section of d={} in P^{} after {} attempt(s)",
        arr.degree(),
        arr.ambient_dim() - 1,
        s.attempts
    );
    let basis: Vec<Vec<String>> = s
        .basis
        .iter()
        .map(|v| v.iter().map(|c| c.to_string()).collect())
        .collect();
    let extra = json!({"source_hash": arr.content_hash(), "basis": basis, "attempts": s.attempts});
    write_or_print(&s.arrangement, args.output.as_ref(), "section", args.seed, extra)
}

fn sum_roots_cmd(args: SumRootsArgs) -> Outcome {
    let v = sum_roots(args.m, &args.residues)?;
    let distinct = {
        let mut r: Vec<i64> = args.residues.iter().map(|j| j.rem_euclid(args.m as i64)).collect();
        r.sort_unstable();
        r.dedup();
        r.len()
    };
    note!(args.quiet, "sum = {v}{}", if v.is_zero() { " (zero)" } else { "" });
    let result = json!({
        "m": args.m,
        "residues": args.residues,
        "value": v.to_string(),
        "is_zero": v.is_zero(),
        "nonvanishing_guaranteed": (distinct == args.residues.len()).then(|| nonvanishing_guaranteed(args.m, distinct)),
    });
    let report = envelope("sum-roots", None, None, result);
    emit(&report, None)?;
    Ok((report, 0))
}

fn certificates_in(v: &Value) -> Result<Vec<Certificate>, Failure> {
    if let Ok(c) = serde_json::from_value::<Certificate>(v.clone()) {
        return Ok(vec![c]);
    }
    let orders = v
        .pointer("/result/orders")
        .and_then(Value::as_array)
        .ok_or_else(|| Failure(2, "neither a certificate nor an analyze report".into()))?;
    let mut out = Vec::new();
    for o in orders {
        for key in ["theorem1", "theorem2"] {
            let c = o
                .get(key)
                .ok_or_else(|| Failure(2, format!("order entry without {key}")))?;
            out.push(serde_json::from_value(c.clone()).map_err(|e| Failure(2, format!("malformed certificate: {e}")))?);
        }
    }
    Ok(out)
}

fn verify(args: VerifyArgs) -> Outcome {
    let arr = read_arrangement(&args.input)?;
    let text = std::fs::read_to_string(&args.certificate)
        .map_err(|e| Failure(2, format!("{}: {e}", args.certificate.display())))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| Failure(2, format!("{}: {e}", args.certificate.display())))?;
    let certs = certificates_in(&value)?;
    let mut results = Vec::new();
    for c in &certs {
        let ok = criteria::verify_certificate(&arr, c)?;
        note!(
            args.quiet,
            "m={} {:?}: {} -> {}",
            c.m,
            c.checker,
            describe(c),
            if ok { "valid" } else { "REJECTED" }
        );
        results.push(json!({"m": c.m, "checker": c.checker, "status": c.status, "theorem": c.theorem, "valid": ok}));
    }
    let all = results.iter().all(|r| r["valid"] == true);
    let report = envelope(
        "verify-cert",
        None,
        Some(arr.content_hash()),
        json!({"valid": all, "certificates": results}),
    );
    emit(&report, None)?;
    Ok((report, if all { 0 } else { 1 }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Dim(a) => dim(a),
        Command::Generate(a) => generate_cmd(a),
        Command::Section(a) => section(a),
        Command::SumRoots(a) => sum_roots_cmd(a),
        Command::VerifyCert(a) => verify(a),
    };
    match outcome {
        Ok((_, code)) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
