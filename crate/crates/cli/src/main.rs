mod json;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use realform::decide::{coordinate_report, decide, verify_certificate, Condition, Decision, Method, Test, Verdict};
use realform::linalg::CMat;
use realform::oracle::{self, GeneratorType, InstanceSpec, Perturbation, Scramble, TypeMix};
use realform::par::{self, Exec};
use realform::projlin::{eig, ComplexMatrix};
use realform::rform::Multiplicity;
use realform::spectrum::{classify_eigenvalues, EigenLabel, SpectralKind};
use realform::{Error, Tolerances};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::json::{complex, matrix, real, render, Rows};

const EXIT_NO: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_SPECTRAL: u8 = 3;
const EXIT_GENERICITY: u8 = 4;

/// Decide whether complex projective transformations are simultaneously
/// conjugate into PGL(k, R).
///
/// Exit codes: 0 yes or success, 1 no, 2 parse or specification error,
/// 3 spectral precondition failure, 4 genericity failure.
#[derive(Parser)]
#[command(name = "realform", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    tol: TolFlags,
    /// JSON file of tolerance overrides. Flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Run batch work on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Report the spectral class of every matrix.
    Classify { input: PathBuf },
    /// Decide the collection and print the certificate.
    Decide {
        /// Input document, or a directory of them with `--batch`.
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Treat `input` as a directory and decide every `*.json` in it,
        /// skipping `*.truth.json` sidecars.
        #[arg(long)]
        batch: bool,
    },
    /// Dump the cross and triple ratios read from the eigenflags.
    Coords { input: PathBuf },
    /// Generate an instance with known answer.
    Generate(GenerateArgs),
    /// Check a conjugating matrix against a collection.
    Verify { input: PathBuf, gamma: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Dim2,
    Dim3,
    Fg,
    Cross,
    Direct,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Dim2 => Method::Dim2,
            MethodArg::Dim3 => Method::Dim3,
            MethodArg::Fg => Method::Fg,
            MethodArg::Cross => Method::Cross,
            MethodArg::Direct => Method::Direct,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, env = "REALFORM_SEED", default_value_t = 0)]
    seed: u64,
    /// Number of hyperbolic generators. Without any of the three counts a
    /// random mix of 2 to 6 generators is drawn from the seed.
    #[arg(long)]
    hyperbolic: Option<usize>,
    #[arg(long)]
    elliptic: Option<usize>,
    #[arg(long)]
    mixed: Option<usize>,
    /// Perturb one eigendirection by this amount, making the answer no.
    #[arg(long)]
    perturb: Option<f64>,
    #[arg(long)]
    perturb_generator: Option<usize>,
    /// Leave the generators real instead of conjugating by a random matrix.
    #[arg(long)]
    no_scramble: bool,
    /// Write the document here and the ground truth next to it as
    /// `<stem>.truth.json`. Without it the document goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct TolFlags {
    #[arg(long = "tol-deg", global = true)]
    #[serde(rename = "deg_tol")]
    deg: Option<f64>,
    #[arg(long = "tol-eig", global = true)]
    #[serde(rename = "eig_tol")]
    eig: Option<f64>,
    #[arg(long = "tol-sep", global = true)]
    #[serde(rename = "sep_tol")]
    sep: Option<f64>,
    #[arg(long = "tol-angle", global = true)]
    #[serde(rename = "angle_tol")]
    angle: Option<f64>,
    #[arg(long = "tol-rank", global = true)]
    #[serde(rename = "rank_tol")]
    rank: Option<f64>,
    #[arg(long = "tol-cr", global = true)]
    #[serde(rename = "cr_tol")]
    cr: Option<f64>,
    #[arg(long = "tol-cert", global = true)]
    #[serde(rename = "cert_tol")]
    cert: Option<f64>,
}

impl TolFlags {
    fn apply(&self, t: &mut Tolerances) {
        let pairs = [
            (self.deg, &mut t.deg_tol),
            (self.eig, &mut t.eig_tol),
            (self.sep, &mut t.sep_tol),
            (self.angle, &mut t.angle_tol),
            (self.rank, &mut t.rank_tol),
            (self.cr, &mut t.cr_tol),
            (self.cert, &mut t.cert_tol),
        ];
        for (v, slot) in pairs {
            if let Some(v) = v {
                *slot = v;
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InputDocument {
    k: usize,
    matrices: Vec<Rows>,
    #[serde(default)]
    options: Option<TolFlags>,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_spectral() {
            EXIT_SPECTRAL
        } else if e.is_genericity() {
            EXIT_GENERICITY
        } else {
            EXIT_INPUT
        };
        Failure { code, message: e.to_string() }
    }
}

type Outcome = Result<(String, u8), Failure>;

struct Context {
    flags: TolFlags,
    config: Option<TolFlags>,
    exec: Exec,
}

impl Context {
    /// Defaults, then the config file, then the document's options, then flags.
    fn tolerances(&self, doc: Option<&TolFlags>) -> Tolerances {
        let mut t = Tolerances::default();
        for layer in [self.config.as_ref(), doc, Some(&self.flags)].into_iter().flatten() {
            layer.apply(&mut t);
        }
        t
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load(path: &Path, ctx: &Context) -> Result<(Vec<ComplexMatrix>, Tolerances), Failure> {
    let doc: InputDocument = parse(path)?;
    let tol = ctx.tolerances(doc.options.as_ref());
    if doc.matrices.is_empty() {
        return Err(Failure::input("no matrices given"));
    }
    let mut ms = Vec::with_capacity(doc.matrices.len());
    for (i, rows) in doc.matrices.iter().enumerate() {
        let rows = json::to_rows(rows);
        if rows.len() != doc.k || rows.iter().any(|r| r.len() != doc.k) {
            return Err(Failure::input(format!("matrix {i} is not {k}x{k}", k = doc.k)));
        }
        let m = ComplexMatrix::from_rows(&rows, &tol).map_err(|e| Failure::input(format!("matrix {i}: {e}")))?;
        ms.push(m);
    }
    Ok((ms, tol))
}

fn kind_name(k: SpectralKind) -> &'static str {
    match k {
        SpectralKind::StrictlyHyperbolic => "strictly_hyperbolic",
        SpectralKind::StrictlyElliptic => "strictly_elliptic",
        SpectralKind::Mixed => "mixed",
        SpectralKind::Incompatible => "incompatible",
    }
}

fn classify(path: &Path, ctx: &Context) -> Outcome {
    let (ms, tol) = load(path, ctx)?;
    let mut reports = Vec::new();
    for (index, m) in ms.iter().enumerate() {
        let es = eig(m, &tol).map_err(|e| Failure::from(e.at_matrix(index)))?;
        let class = classify_eigenvalues(&es.values, &tol);
        let lines: Vec<Value> = class
            .lines
            .iter()
            .map(|l| {
                let labels: Vec<Value> = l
                    .labels
                    .iter()
                    .map(|lab| match *lab {
                        EigenLabel::Hyperbolic => json!({ "role": "hyperbolic" }),
                        EigenLabel::Elliptic { partner } => json!({ "role": "elliptic", "partner": partner }),
                    })
                    .collect();
                json!({ "theta": real(l.theta), "labels": labels })
            })
            .collect();
        reports.push(json!({
            "index": index,
            "eigenvalues": es.values.iter().map(|&z| complex(z)).collect::<Vec<_>>(),
            "compatible": class.is_compatible(),
            "kind": kind_name(class.kind),
            "generic": class.generic,
            "lines": lines,
        }));
    }
    Ok((render(&json!({ "matrices": reports })), 0))
}

fn test_name(t: Test) -> &'static str {
    match t {
        Test::Real => "real",
        Test::PositiveReal => "positive_real",
        Test::UnitCircle => "unit_circle",
        Test::Conjugate => "conjugate",
        Test::Equal => "equal",
        Test::ArgumentSum => "argument_sum",
    }
}

fn cross(c: &realform::coords::CrossRatio) -> Value {
    c.value().map_or(Value::Null, complex)
}

fn condition(c: &Condition) -> Value {
    let mut v = json!({
        "name": c.label,
        "generator": c.generator,
        "requirement": test_name(c.test),
        "value": cross(&c.values[0]),
        "pass": c.passed,
    });
    if let Some(r) = c.values.get(1) {
        v["reference"] = cross(r);
    }
    v
}

fn decision_doc(d: &Decision) -> Value {
    let multiplicity = d.multiplicity.map(|m| match m {
        Multiplicity::Zero => "zero",
        Multiplicity::One => "one",
        Multiplicity::Infinite => "infinite",
    });
    json!({
        "verdict": match d.verdict { Verdict::Yes => "yes", Verdict::No => "no" },
        "method": d.method.to_string(),
        "multiplicity": multiplicity,
        "residual": d.certificate.as_ref().map(|c| real(c.residual)),
        "gamma": d.certificate.as_ref().map(|c| matrix(&c.gamma)),
        "conditions": d.conditions.iter().map(condition).collect::<Vec<_>>(),
        "diagnostics": d.diagnostics,
    })
}

fn decide_one(path: &Path, method: Method, ctx: &Context) -> Result<(Value, u8), Failure> {
    let (ms, tol) = load(path, ctx)?;
    let d = decide(&ms, method, &tol)?;
    let code = if d.is_yes() { 0 } else { EXIT_NO };
    Ok((decision_doc(&d), code))
}

fn decide_cmd(path: &Path, method: Method, batch: bool, ctx: &Context) -> Outcome {
    if !batch {
        let (doc, code) = decide_one(path, method, ctx)?;
        return Ok((render(&doc), code));
    }
    let mut files: Vec<PathBuf> = fs::read_dir(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .filter(|p| !p.to_string_lossy().ends_with(".truth.json"))
        .collect();
    files.sort();
    let results = par::map(&files, ctx.exec, |f| decide_one(f, method, ctx));
    let mut worst = 0;
    let entries: Vec<Value> = files
        .iter()
        .zip(results)
        .map(|(f, r)| {
            let name = f.file_name().map(|n| n.to_string_lossy().into_owned());
            let (body, code) = match r {
                Ok((doc, code)) => (json!({ "file": name, "exit": code, "result": doc }), code),
                Err(e) => (json!({ "file": name, "exit": e.code, "error": e.message }), e.code),
            };
            worst = worst.max(code);
            body
        })
        .collect();
    Ok((render(&json!({ "results": entries })), worst))
}

fn coords(path: &Path, ctx: &Context) -> Outcome {
    let (ms, tol) = load(path, ctx)?;
    let report = coordinate_report(&ms, &tol)?;
    let flags: Vec<Value> = report
        .flags
        .iter()
        .map(|f| {
            let crosses = |cs: &[realform::coords::IndexedCrossRatio]| {
                cs.iter().map(|c| json!({ "i": c.i, "j": c.j, "value": cross(&c.value) })).collect::<Vec<_>>()
            };
            json!({
                "generator": f.generator,
                "flag": f.flag,
                "cross": crosses(&f.cross),
                "fg_cross": crosses(&f.fg_cross),
                "triple": f.triple.iter().map(|t| json!({ "i": t.i, "j": t.j, "l": t.l, "value": complex(t.value) })).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok((render(&json!({ "reference": report.reference, "flags": flags })), 0))
}

fn type_name(t: GeneratorType) -> &'static str {
    match t {
        GeneratorType::Hyperbolic => "hyperbolic",
        GeneratorType::Elliptic => "elliptic",
        GeneratorType::Mixed => "mixed",
    }
}

fn generate(a: &GenerateArgs, ctx: &Context) -> Outcome {
    let tol = ctx.tolerances(None);
    let mut spec = if a.hyperbolic.is_none() && a.elliptic.is_none() && a.mixed.is_none() {
        oracle::random_spec(a.k, a.seed)
    } else {
        let mix = TypeMix {
            hyperbolic: a.hyperbolic.unwrap_or(0),
            elliptic: a.elliptic.unwrap_or(0),
            mixed: a.mixed.unwrap_or(0),
        };
        InstanceSpec { k: a.k, n_generators: mix.total(), mix, seed: a.seed, scramble: Scramble::RandomGamma, perturbation: None }
    };
    if a.no_scramble {
        spec.scramble = Scramble::None;
    }
    if let Some(magnitude) = a.perturb {
        spec = oracle::perturbed(&spec, magnitude);
        if let (Some(g), Some(p)) = (a.perturb_generator, spec.perturbation.as_mut()) {
            p.generator = g;
        }
    } else if a.perturb_generator.is_some() {
        return Err(Failure::input("--perturb-generator needs --perturb"));
    }
    let inst = oracle::generate(&spec, &tol)?;
    let doc = json!({
        "k": spec.k,
        "matrices": inst.matrices.iter().map(|m| matrix(m.matrix())).collect::<Vec<_>>(),
    });
    let spec_doc = json!({
        "k": spec.k,
        "seed": spec.seed,
        "mix": { "hyperbolic": spec.mix.hyperbolic, "elliptic": spec.mix.elliptic, "mixed": spec.mix.mixed },
        "scramble": if spec.scramble == Scramble::None { "none" } else { "random_gamma" },
        "perturbation": spec.perturbation.map(|Perturbation { generator, magnitude }| json!({ "generator": generator, "magnitude": magnitude })),
    });
    let truth = json!({
        "truth": match inst.truth { Verdict::Yes => "yes", Verdict::No => "no" },
        "gamma": matrix(&inst.gamma),
        "residual": real(oracle::truth_residual(&inst)),
        "types": inst.types.iter().map(|&t| type_name(t)).collect::<Vec<_>>(),
        "spec": spec_doc,
    });
    let Some(out) = &a.out else {
        return Ok((render(&doc), 0));
    };
    let sidecar = out.with_extension("truth.json");
    let write = |p: &Path, v: &Value| fs::write(p, render(v)).map_err(|e| Failure::input(format!("{}: {e}", p.display())));
    write(out, &doc)?;
    write(&sidecar, &truth)?;
    Ok((String::new(), 0))
}

/// Accepts a bare matrix or any document with a `gamma` field.
fn load_gamma(path: &Path) -> Result<CMat, Failure> {
    let v: Value = parse(path)?;
    let rows = match v {
        Value::Object(mut o) => o.remove("gamma").ok_or_else(|| Failure::input(format!("{}: no gamma field", path.display())))?,
        other => other,
    };
    let rows: Rows = serde_json::from_value(rows).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    json::to_cmat(&rows).ok_or_else(|| Failure::input(format!("{}: ragged matrix", path.display())))
}

fn verify(input: &Path, gamma: &Path, ctx: &Context) -> Outcome {
    let (ms, tol) = load(input, ctx)?;
    let g = load_gamma(gamma)?;
    let k = ms[0].dim();
    if g.nrows() != k || g.ncols() != k {
        return Err(Failure::input(format!("gamma is {}x{} but the matrices are {k}x{k}", g.nrows(), g.ncols())));
    }
    let residual = verify_certificate(&ms, &g);
    let pass = residual < tol.cert_tol;
    let doc = json!({ "residual": real(residual), "cert_tol": tol.cert_tol, "pass": pass });
    Ok((render(&doc), if pass { 0 } else { EXIT_NO }))
}

fn run(cli: Cli) -> Outcome {
    let config = cli.config.as_deref().map(parse::<TolFlags>).transpose()?;
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    let ctx = Context { flags: cli.tol, config, exec };
    match &cli.command {
        Command::Classify { input } => classify(input, &ctx),
        Command::Decide { input, method, batch } => decide_cmd(input, (*method).into(), *batch, &ctx),
        Command::Coords { input } => coords(input, &ctx),
        Command::Generate(a) => generate(a, &ctx),
        Command::Verify { input, gamma } => verify(input, gamma, &ctx),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    match run(cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
