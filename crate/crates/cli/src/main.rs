//! `delcech`: build radius-function complexes, gradients, collapses and
//! barcodes from point files.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use delcech::collapse::{collapse_between, verify_collapse};
use delcech::complexes::{
    build_cech, build_delaunay, build_delaunay_cech, build_selective_delaunay, parse_vertex_list,
    ComplexKind, FilteredComplex,
};
use delcech::format::parse_cap;
use delcech::geometry::{check_general_position, perturb, WeightedPoint, WeightedPointSet};
use delcech::morse::{critical_simplices, gradient_to_string, radius_gradient};
use delcech::persistence::{compare_barcodes, compute_barcode};
use delcech::wrap::wrap_complex;
use delcech::{Error, Tolerances};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Parser, Debug)]
#[command(
    name = "delcech",
    version,
    about = "Radius-function complexes of weighted point sets"
)]
struct Cli {
    /// Worker threads for library-internal parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a filtered complex file.
    Build {
        #[arg(long = "type", value_enum)]
        kind: KindArg,
        #[command(flatten)]
        common: Common,
    },
    /// Write the generalized gradient of the radius function for E on Del(X, E).
    Gradient {
        #[command(flatten)]
        common: Common,
    },
    /// Write and verify a collapse sequence between two complex types.
    Collapse {
        #[arg(long, value_enum)]
        from: KindArg,
        #[arg(long, value_enum)]
        to: KindArg,
        #[command(flatten)]
        common: Common,
    },
    /// Barcode CSV of a complex file, or of a complex built from a point file.
    Persistence {
        #[arg(long = "type", value_enum, default_value = "cech")]
        kind: KindArg,
        #[command(flatten)]
        common: Common,
    },
    /// Compare barcodes of complex files, or of several types built from one point file.
    Compare {
        /// Comma-separated complex types built from a single point file.
        #[arg(long, value_enum, value_delimiter = ',')]
        types: Vec<KindArg>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        cap: Option<String>,
        #[command(flatten)]
        tols: TolArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// List general-position violations.
    Checkgp {
        #[command(flatten)]
        tols: TolArgs,
        input: PathBuf,
    },
    /// Jitter coordinates uniformly by at most `magnitude`.
    Perturb {
        #[arg(long, default_value_t = 1e-6)]
        magnitude: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
        input: PathBuf,
    },
    /// Write a random point file in general position.
    Random {
        #[arg(long, default_value_t = 6)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Weights are drawn uniformly from [0, max-weight); zero means unweighted.
        #[arg(long, default_value_t = 0.0)]
        max_weight: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        tols: TolArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Selective set: a vertex list such as `0,2`, `all`, or `empty`.
    #[arg(long = "E")]
    e: Option<String>,
    /// Squared-radius cap: a decimal or `inf`.
    #[arg(long, default_value = "inf")]
    cap: String,
    #[arg(long)]
    max_dim: Option<usize>,
    #[command(flatten)]
    tols: TolArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
    input: PathBuf,
}

#[derive(Args, Debug)]
struct TolArgs {
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    eps_gp: Option<f64>,
}

impl TolArgs {
    fn tolerances(&self) -> Tolerances {
        let mut t = Tolerances::default();
        if let Some(e) = self.eps {
            t.eps = e;
        }
        if let Some(e) = self.eps_gp {
            t.eps_gp = e;
        }
        t
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum KindArg {
    Cech,
    Delaunay,
    Delcech,
    Selective,
    Wrap,
}

impl KindArg {
    fn kind(self) -> ComplexKind {
        match self {
            KindArg::Cech => ComplexKind::Cech,
            KindArg::Delaunay => ComplexKind::Delaunay,
            KindArg::Delcech => ComplexKind::DelaunayCech,
            KindArg::Selective => ComplexKind::Selective,
            KindArg::Wrap => ComplexKind::Wrap,
        }
    }
}

/// Failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn verification(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::DegenerateInput(_) => Failure {
                code: 3,
                message: format!(
                    "{e}; try `delcech perturb` to move the points into general position"
                ),
            },
            other => Failure::usage(other.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> CmdResult {
    match cmd {
        Command::Build { kind, common } => cmd_build(kind, &common),
        Command::Gradient { common } => cmd_gradient(&common),
        Command::Collapse { from, to, common } => cmd_collapse(from, to, &common),
        Command::Persistence { kind, common } => cmd_persistence(kind, &common),
        Command::Compare {
            types,
            tol,
            cap,
            tols,
            output,
            inputs,
        } => cmd_compare(
            &types,
            tol,
            cap.as_deref(),
            &tols,
            output.as_deref(),
            &inputs,
        ),
        Command::Checkgp { tols, input } => cmd_checkgp(&tols, &input),
        Command::Perturb {
            magnitude,
            seed,
            output,
            input,
        } => {
            let x = read_points(&input)?;
            let y = perturb(&x, magnitude, seed)?;
            emit(output.as_deref(), &y.to_file_string())
        }
        Command::Random {
            count,
            dim,
            max_weight,
            seed,
            tols,
            output,
        } => {
            let x = random_points(count, dim, max_weight, seed, &tols.tolerances())?;
            emit(output.as_deref(), &x.to_file_string())
        }
    }
}

fn emit(path: Option<&Path>, text: &str) -> CmdResult {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| Failure::usage(format!("cannot write output: {e}")))
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn read_points(path: &Path) -> Result<WeightedPointSet, Failure> {
    WeightedPointSet::parse(&read_text(path)?)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

/// `all`, `empty`, or a vertex list, checked against the point count.
fn parse_e(s: &str, m: usize) -> Result<Vec<usize>, Failure> {
    let e = match s.trim() {
        "all" => (0..m).collect(),
        "empty" => Vec::new(),
        t => parse_vertex_list(t).map_err(|e| Failure::usage(format!("--E: {e}")))?,
    };
    if let Some(&v) = e.iter().find(|&&v| v >= m) {
        return Err(Failure::usage(format!(
            "--E: vertex {v} out of range for {m} points"
        )));
    }
    Ok(e)
}

fn parse_cap_arg(s: &str) -> Result<f64, Failure> {
    parse_cap(s)
        .map_err(|_| Failure::usage(format!("--cap: expected a decimal or `inf`, got `{s}`")))
}

fn build(
    kind: KindArg,
    x: &WeightedPointSet,
    e: Option<&str>,
    cap: f64,
    max_dim: Option<usize>,
    tol: &Tolerances,
) -> Result<FilteredComplex, Failure> {
    if kind != KindArg::Selective && e.is_some() {
        return Err(Failure::usage("--E is only accepted with --type selective"));
    }
    if max_dim.is_some() && !matches!(kind, KindArg::Cech | KindArg::Selective) {
        return Err(Failure::usage(
            "--max-dim is only accepted with cech and selective",
        ));
    }
    Ok(match kind {
        KindArg::Cech => build_cech(x, cap, max_dim, tol)?,
        KindArg::Delaunay => build_delaunay(x, cap, tol)?,
        KindArg::Delcech => build_delaunay_cech(x, cap, tol)?,
        KindArg::Wrap => wrap_complex(x, cap, tol)?,
        KindArg::Selective => {
            let e = e.ok_or_else(|| Failure::usage("--type selective requires --E"))?;
            build_selective_delaunay(x, &parse_e(e, x.len())?, cap, max_dim, tol)?
        }
    })
}

fn cmd_build(kind: KindArg, c: &Common) -> CmdResult {
    let x = read_points(&c.input)?;
    let cap = parse_cap_arg(&c.cap)?;
    let k = build(
        kind,
        &x,
        c.e.as_deref(),
        cap,
        c.max_dim,
        &c.tols.tolerances(),
    )?;
    eprintln!("{} simplices, f-vector {:?}", k.len(), k.f_vector());
    emit(c.output.as_deref(), &k.to_file_string())
}

fn cmd_gradient(c: &Common) -> CmdResult {
    let x = read_points(&c.input)?;
    let tol = c.tols.tolerances();
    let label = c.e.as_deref().unwrap_or("all").trim().to_string();
    let e = parse_e(&label, x.len())?;
    let cap = parse_cap_arg(&c.cap)?;
    let k = build_selective_delaunay(&x, &e, cap, c.max_dim, &tol)?;
    let w = radius_gradient(&x, &e, &k, &tol)?;
    let critical = critical_simplices(&w).len();
    eprintln!("{} intervals, {critical} critical", w.len());
    emit(c.output.as_deref(), &gradient_to_string(&w, &label))
}

fn cmd_collapse(from: KindArg, to: KindArg, c: &Common) -> CmdResult {
    if c.e.is_some() || c.max_dim.is_some() {
        return Err(Failure::usage("collapse accepts neither --E nor --max-dim"));
    }
    let x = read_points(&c.input)?;
    let cap = parse_cap_arg(&c.cap)?;
    let (seq, target) = collapse_between(&x, from.kind(), to.kind(), cap, &c.tols.tolerances())?;
    emit(c.output.as_deref(), &seq.to_file_string())?;
    match verify_collapse(&seq.start, &seq.steps, &target) {
        Ok(()) => {
            eprintln!("verified {} steps", seq.len());
            Ok(())
        }
        Err(f) => Err(Failure::verification(format!(
            "collapse replay failed: {f}"
        ))),
    }
}

/// Complex files start with a `complex` or `wrap` header; anything else is
/// read as a point file.
fn is_complex_file(text: &str) -> bool {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .and_then(|l| l.split_whitespace().next())
        .is_some_and(|w| w == "complex" || w == "wrap")
}

fn load_complex(path: &Path, kind: KindArg, c: &Common) -> Result<FilteredComplex, Failure> {
    let text = read_text(path)?;
    if is_complex_file(&text) {
        return FilteredComplex::parse(&text)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())));
    }
    let x = WeightedPointSet::parse(&text)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    build(
        kind,
        &x,
        c.e.as_deref(),
        parse_cap_arg(&c.cap)?,
        c.max_dim,
        &c.tols.tolerances(),
    )
}

fn cmd_persistence(kind: KindArg, c: &Common) -> CmdResult {
    let k = load_complex(&c.input, kind, c)?;
    emit(c.output.as_deref(), &compute_barcode(&k).to_csv())
}

fn cmd_compare(
    types: &[KindArg],
    tol: f64,
    cap: Option<&str>,
    tols: &TolArgs,
    output: Option<&Path>,
    inputs: &[PathBuf],
) -> CmdResult {
    let complexes: Vec<FilteredComplex> = if types.is_empty() {
        if inputs.len() < 2 || cap.is_some() {
            return Err(Failure::usage(
                "compare needs two or more complex files, or --types with one point file",
            ));
        }
        inputs
            .iter()
            .map(|p| {
                FilteredComplex::parse(&read_text(p)?)
                    .map_err(|e| Failure::usage(format!("{}: {e}", p.display())))
            })
            .collect::<Result<_, _>>()?
    } else {
        if inputs.len() != 1 || types.contains(&KindArg::Selective) {
            return Err(Failure::usage(
                "--types takes one point file and non-selective types",
            ));
        }
        let x = read_points(&inputs[0])?;
        let cap = parse_cap_arg(cap.unwrap_or("inf"))?;
        let t = tols.tolerances();
        types
            .iter()
            .map(|&k| build(k, &x, None, cap, None, &t))
            .collect::<Result<_, _>>()?
    };
    let report = compare_barcodes(&complexes, tol)?;
    let mut text = String::from(if report.equal {
        "EQUAL\n"
    } else {
        "DIFFERENT\n"
    });
    for line in &report.diff {
        text.push_str(line);
        text.push('\n');
    }
    emit(output, &text)?;
    if report.equal {
        Ok(())
    } else {
        Err(Failure::verification("barcodes differ"))
    }
}

fn cmd_checkgp(tols: &TolArgs, input: &Path) -> CmdResult {
    let x = read_points(input)?;
    let report = check_general_position(&x, &tols.tolerances());
    let mut text = String::new();
    for v in &report.violations {
        text.push_str(&v.to_string());
        text.push('\n');
    }
    if report.is_ok() {
        text.push_str("general position: ok\n");
    }
    if !report.exhaustive {
        text.push_str("note: sampled subsets only\n");
    }
    emit(None, &text)?;
    if report.is_ok() {
        Ok(())
    } else {
        Err(Failure {
            code: 3,
            message: format!("{} general-position violations", report.violations.len()),
        })
    }
}

/// Uniform points in `[0, 10)^dim`, redrawn until in general position.
fn random_points(
    count: usize,
    dim: usize,
    max_weight: f64,
    seed: u64,
    tol: &Tolerances,
) -> Result<WeightedPointSet, Failure> {
    if dim == 0 || !(max_weight >= 0.0 && max_weight.is_finite()) {
        return Err(Failure::usage(
            "--dim must be positive and --max-weight finite and non-negative",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let points = (0..count)
            .map(|_| WeightedPoint {
                coords: (0..dim).map(|_| rng.random_range(0.0..10.0)).collect(),
                weight: if max_weight > 0.0 {
                    rng.random_range(0.0..max_weight)
                } else {
                    0.0
                },
            })
            .collect();
        let x = WeightedPointSet::new(dim, points)?;
        if check_general_position(&x, tol).is_ok() {
            return Ok(x);
        }
    }
    Err(Failure {
        code: 3,
        message: "no general-position sample found".into(),
    })
}
