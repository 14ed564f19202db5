use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sasaki_core::geometry::base_scalar_expected;
use sasaki_core::models::{build_alekseevsky, build_symmetric, example_model, ModelError, SasakiModel, SymmetricFamily, Variant};
use sasaki_core::scalars::{Backend, QSqrt2, Scalar, ScalarError, Tolerance};
use sasaki_core::serial::{self, SerialError};
use sasaki_core::suite::{run_suite, SuiteConfig};

/// Output directory used by `build` when `-o` is not given.
const OUT_DIR_VAR: &str = "SASAKI_OUT_DIR";

#[derive(Parser)]
#[command(name = "sasaki", version, about = "Build and verify homogeneous 3-(alpha,delta)-Sasaki models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Sp,
    Su,
    So,
    Alekseevsky,
    AloffWallach,
    Su21,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Compact,
    Noncompact,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Exact,
    Float,
}

#[derive(Subcommand)]
enum Command {
    /// Build a model and write it as JSON.
    Build {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[arg(long, default_value_t = 1)]
        l: usize,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        #[arg(long, value_enum, default_value = "compact")]
        variant: VariantArg,
        #[arg(long, value_enum, default_value = "exact")]
        backend: BackendArg,
        /// Output file; defaults to a generated name in $SASAKI_OUT_DIR or the current directory.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Run the verification suite on a model file.
    Verify {
        file: PathBuf,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write tensor dumps into this directory.
        #[arg(long)]
        dump_tensors: Option<PathBuf>,
        /// Relative tolerance for the float backend.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Backend to load the file with; defaults to the one recorded in the file.
        #[arg(long, value_enum)]
        backend: Option<BackendArg>,
    },
    /// Dimensions, parameters and predicted invariants of a model file.
    Info { file: PathBuf },
    /// Families the builder implements.
    Catalog,
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

impl From<SerialError> for Failure {
    fn from(e: SerialError) -> Self {
        usage(e.to_string())
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        let name = match &e {
            ModelError::ParameterSignMismatch(_) => "ParameterSignMismatch",
            ModelError::InvalidParameters(_) => "InvalidParameters",
            ModelError::Scalar(ScalarError::NotRepresentable(_)) => "NotRepresentable",
            _ => "BuildError",
        };
        usage(format!("{name}: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build { family, n, q, l, alpha, delta, variant, backend, output } => {
            let spec = BuildSpec { family, n, q, l, alpha, delta, variant };
            match backend {
                BackendArg::Exact => build::<QSqrt2>(&spec, output),
                BackendArg::Float => build::<f64>(&spec, output),
            }
        }
        Command::Verify { file, report, dump_tensors, tolerance, backend } => {
            let opts = VerifyOptions { report, dump_tensors, tolerance };
            load_backend(&file, backend).and_then(|(text, b)| match b {
                Backend::Exact => verify::<QSqrt2>(&text, &opts),
                Backend::Float => verify::<f64>(&text, &opts),
            })
        }
        Command::Info { file } => load_backend(&file, None).and_then(|(text, b)| match b {
            Backend::Exact => info::<QSqrt2>(&text),
            Backend::Float => info::<f64>(&text),
        }),
        Command::Catalog => {
            print!("{}", catalog());
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

struct BuildSpec {
    family: Family,
    n: usize,
    q: usize,
    l: usize,
    alpha: String,
    delta: String,
    variant: VariantArg,
}

impl BuildSpec {
    fn default_name(&self) -> String {
        let v = match self.variant {
            VariantArg::Compact => "compact",
            VariantArg::Noncompact => "noncompact",
        };
        let params = format!("a{}-d{}", self.alpha, self.delta).replace(['/', '*', '+'], "_");
        match self.family {
            Family::Sp | Family::Su | Family::So => {
                let f = match self.family {
                    Family::Sp => "sp",
                    Family::Su => "su",
                    _ => "so",
                };
                format!("{f}-n{}-{v}-{params}.json", self.n)
            }
            Family::Alekseevsky => format!("alekseevsky-q{}-l{}-{params}.json", self.q, self.l),
            Family::AloffWallach => format!("aloff-wallach-{params}.json"),
            Family::Su21 => format!("su21-{params}.json"),
        }
    }
}

fn parse_scalar<S: Scalar>(what: &str, text: &str) -> Result<S, Failure> {
    S::parse_text(text).map_err(|e| usage(format!("--{what}: {e}")))
}

fn build<S: Scalar>(spec: &BuildSpec, output: Option<PathBuf>) -> Result<(), Failure> {
    let alpha: S = parse_scalar("alpha", &spec.alpha)?;
    let delta: S = parse_scalar("delta", &spec.delta)?;
    let variant = match spec.variant {
        VariantArg::Compact => Variant::Compact,
        VariantArg::Noncompact => Variant::Noncompact,
    };
    let m: SasakiModel<S> = match spec.family {
        Family::Sp => build_symmetric(SymmetricFamily::Sp, spec.n, variant, alpha, delta)?,
        Family::Su => build_symmetric(SymmetricFamily::Su, spec.n, variant, alpha, delta)?,
        Family::So => build_symmetric(SymmetricFamily::So, spec.n, variant, alpha, delta)?,
        Family::Alekseevsky => build_alekseevsky(spec.q, spec.l, alpha, delta)?,
        Family::AloffWallach => example_model("aloff-wallach", alpha, delta)?,
        Family::Su21 => example_model("su21", alpha, delta)?,
    };
    let path = match output {
        Some(p) => p,
        None => {
            let dir = std::env::var_os(OUT_DIR_VAR).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
            dir.join(spec.default_name())
        }
    };
    write(&path, &serial::to_json(&m))?;
    println!("wrote {} (dim g = {}, dim m = {}, n = {})", path.display(), m.algebra.dim(), m.dim_m(), m.n());
    Ok(())
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_backend(file: &Path, requested: Option<BackendArg>) -> Result<(String, Backend), Failure> {
    let text = fs::read_to_string(file).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let value = serial::parse_json(&text)?;
    let recorded = serial::backend_of(&value)?;
    let backend = match requested {
        None => recorded,
        Some(BackendArg::Float) => Backend::Float,
        Some(BackendArg::Exact) => Backend::Exact,
    };
    Ok((text, backend))
}

struct VerifyOptions {
    report: Option<PathBuf>,
    dump_tensors: Option<PathBuf>,
    tolerance: Option<f64>,
}

fn verify<S: Scalar>(text: &str, opts: &VerifyOptions) -> Result<(), Failure> {
    let m: SasakiModel<S> = serial::from_json(text)?;
    let mut config = SuiteConfig::default();
    if let Some(t) = opts.tolerance {
        if !(t.is_finite() && t >= 0.0) {
            return Err(usage("--tolerance must be a nonnegative number"));
        }
        config.tolerance = Tolerance { rel: t };
    }
    let report = run_suite(&m, &config);
    print!("{}", report.render_text());
    if let Some(path) = &opts.report {
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        write(path, &json)?;
    }
    if let Some(dir) = &opts.dump_tensors {
        match serial::tensor_dumps(&m) {
            Ok(dumps) => {
                for (name, v) in dumps {
                    write(&dir.join(format!("{name}.json")), &v.to_string())?;
                }
            }
            Err(e) => eprintln!("tensor dumps skipped: {e}"),
        }
    }
    if report.all_pass() {
        Ok(())
    } else {
        Err(Failure { code: 1, message: String::new() })
    }
}

fn info<S: Scalar>(text: &str) -> Result<(), Failure> {
    let m: SasakiModel<S> = serial::from_json(text)?;
    let p = &m.provenance;
    let n = m.n();
    println!("family: {}", p.family);
    if let (Some(q), Some(l)) = (p.q, p.l) {
        println!("q = {q}, l = {l}");
    }
    println!("variant: {:?}", p.variant);
    println!("backend: {}", S::BACKEND);
    println!("alpha = {}, delta = {}, beta = {}", m.alpha.to_text(), m.delta.to_text(), m.beta().to_text());
    println!("dim g = {}, dim h = {}, dim M = {}, n = {n}", m.algebra.dim(), m.grading.h.len(), m.dim_m());
    let ad = m.alpha.clone() * m.delta.clone();
    let class = match ad.signum() {
        1 => "positive",
        -1 => "negative",
        _ => "degenerate",
    };
    println!("class: {class}{}", if m.beta().is_zero() { ", parallel" } else { "" });
    println!("predicted scal_N = 16 n (n+2) alpha delta = {}", base_scalar_expected(&m).to_text());
    let a2 = S::from_i64(12 * n as i64) * m.alpha.clone() * m.alpha.clone();
    println!("predicted sum |A|^2 = 12 n alpha^2 = {}", a2.to_text());
    Ok(())
}

fn catalog() -> String {
    let mut s = String::new();
    s.push_str("symmetric bases (G/H over G/G0 and the dual G*/H over G*/G0), dim 4n+3\n");
    let rows = [
        ("sp", "Sp(n+1)", "Sp(n,1)", "Sp(n)", "n >= 0", true),
        ("su", "SU(n+2)", "SU(n,2)", "S(U(n) x U(1))", "n >= 1", true),
        ("so", "SO(n+4)", "SO(n,4)", "SO(n) x Sp(1)", "n >= 3", true),
        ("", "G2", "G2(2)", "Sp(1)", "dim 11", false),
        ("", "F4", "F4(-20)", "Sp(3)", "dim 31", false),
        ("", "E6", "E6(2)", "SU(6)", "dim 43", false),
        ("", "E7", "E7(-5)", "Spin(12)", "dim 67", false),
        ("", "E8", "E8(-24)", "E7", "dim 115", false),
    ];
    for (flag, g, gs, h, range, done) in rows {
        let how = if done { format!("--family {flag} [--variant noncompact]") } else { "not implemented".into() };
        s.push_str(&format!("  {g:<8} {gs:<9} H = {h:<15} {range:<7}  {how}\n"));
    }
    s.push_str("explicit examples\n");
    s.push_str("  SU(3)/S^1 (Aloff-Wallach), dim 7, positive     --family aloff-wallach\n");
    s.push_str("  SU(2,1)/S^1, dim 7, negative                   --family su21\n");
    s.push_str("Alekseevsky bases (negative), dim 4(q+l)+7\n");
    let alek = [
        (0, 0, 7, "Sp(1,1)/Sp(1)", true),
        (0, 1, 11, "Sp(2,1)/Sp(2)", true),
        (1, 0, 11, "SU(2,2)/S(U(2) x U(1))", true),
        (0, 2, 15, "Sp(3,1)/Sp(3)", false),
        (1, 1, 15, "SU(3,2)/S(U(3) x U(1))", true),
        (2, 0, 15, "SO0(3,4)/SO(3) x SO(3)", true),
        (0, 3, 19, "Sp(4,1)/Sp(4)", false),
        (1, 2, 19, "SU(4,2)/S(U(4) x U(1))", false),
        (2, 1, 19, "T(1), non-symmetric base", true),
        (3, 0, 19, "SO0(4,4)/SO(4) x SO(3)", false),
    ];
    for (q, l, dim, alt, done) in alek {
        let how = if done { format!("--family alekseevsky --q {q} --l {l}") } else { "not implemented".into() };
        s.push_str(&format!("  q={q} l={l} dim {dim:<3} {alt:<26}  {how}\n"));
    }
    s
}
