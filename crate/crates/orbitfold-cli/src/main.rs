//! Command-line front end: constructs the orbit-space structures, runs the
//! verification suites, and prints the dual-pipeline and hierarchy reports.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use orbitfold::dual::{
    self, metric_bridge, nls_kappa, residual_is_zero, vector_potential, DualSetup,
};
use orbitfold::frobenius::{
    christoffel_ledger, match_prepotential, reference_f_n2, reference_f_n3, reference_f_n4,
    structure_constants, verify_axioms, verify_r_operator, Frobenius,
};
use orbitfold::hierarchy::{flow_matrix, flows_commute, hierarchy_fields};
use orbitfold::pencil::{
    build_pencil, contravariant_christoffel, eta_closed_form, generating_identity_check,
    verify_flat_pencil, verify_quasihomogeneity, FlatnessMode, Normalization,
};
use orbitfold::saito::{flat_coordinates, FlatChart};
use orbitfold::scalar::{format_rational, parse_rational, qi, ExactScalar};

#[derive(Parser)]
#[command(
    name = "orbitfold",
    version,
    about = "Exact construction and verification of the flat pencil, flat \
             coordinates, Frobenius structure, dual products and hierarchy \
             flows on the B_n orbit space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the structures for a given rank and write JSON artifacts.
    Construct(ConstructArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Print the Frobenius structure (structure constants, prepotential).
    Frobenius(FrobeniusArgs),
    /// Rank-2 dual-product pipeline report.
    Dual(DualArgs),
    /// Print principal-hierarchy flows.
    Hierarchy(HierarchyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NormArg {
    Raw,
    Saito,
}

impl From<NormArg> for Normalization {
    fn from(v: NormArg) -> Normalization {
        match v {
            NormArg::Raw => Normalization::Raw,
            NormArg::Saito => Normalization::Saito,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Args)]
struct ConstructArgs {
    /// Rank of the group (n ≥ 2).
    #[arg(long)]
    n: usize,
    /// Scaling convention for the pencil artifact.
    #[arg(long, value_enum, default_value = "saito")]
    normalization: NormArg,
    /// Output format of the status report.
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Cache directory (content-addressed); ORBITFOLD_CACHE overrides.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Directory receiving pencil.json, flatchart.json, frobenius.json, F.json.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Rank of the group (n ≥ 2).
    #[arg(long)]
    n: usize,
    /// Comma-separated check suites: pencil, quasihomogeneity, axioms,
    /// ledger, wdvv, dual, hierarchy. Default: every suite valid for n.
    #[arg(long)]
    checks: Option<String>,
    /// Scaling convention used by the pencil suite.
    #[arg(long, value_enum, default_value = "saito")]
    normalization: NormArg,
    /// Dual-pipeline mirror weights "x,y" (orbit I, orbit II).
    #[arg(long)]
    weights: Option<String>,
    /// Dual-pipeline invariant-basis parameter c (rational).
    #[arg(long, value_name = "RATIONAL")]
    invariant_c: Option<String>,
    /// Hierarchy depth.
    #[arg(long, default_value_t = 2)]
    level: usize,
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Args)]
struct FrobeniusArgs {
    /// Rank of the group (n ≥ 2).
    #[arg(long)]
    n: usize,
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Args)]
struct DualArgs {
    /// Group (only B2 supports the full pipeline).
    #[arg(long, default_value = "B2")]
    group: String,
    /// Mirror weights "x,y" (orbit I, orbit II); symbolic when omitted.
    #[arg(long)]
    weights: Option<String>,
    /// Invariant-basis parameter c (rational); symbolic when omitted.
    #[arg(long, value_name = "RATIONAL")]
    invariant_c: Option<String>,
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Args)]
struct HierarchyArgs {
    /// Rank of the group (n ≥ 2).
    #[arg(long)]
    n: usize,
    /// Highest hierarchy level to generate.
    #[arg(long, default_value_t = 2)]
    level: usize,
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

/// One verification line of a report.
struct CheckResult {
    name: String,
    pass: bool,
    detail: String,
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("usage error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Construct(args) => cmd_construct(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Frobenius(args) => cmd_frobenius(&args),
        Command::Dual(args) => cmd_dual(&args),
        Command::Hierarchy(args) => cmd_hierarchy(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

// ---------------------------------------------------------------------------
// construct
// ---------------------------------------------------------------------------

fn cache_dir(flag: &Option<PathBuf>) -> Option<PathBuf> {
    std::env::var_os("ORBITFOLD_CACHE")
        .map(PathBuf::from)
        .or_else(|| flag.clone())
}

const ARTIFACTS: [&str; 4] = ["pencil.json", "flatchart.json", "frobenius.json", "F.json"];

fn cmd_construct(args: &ConstructArgs) -> anyhow::Result<ExitCode> {
    if args.n < 2 {
        return Ok(usage_error("--n must be at least 2"));
    }
    let key = {
        let mut h = Sha256::new();
        h.update(format!(
            "construct;n={};normalization={}",
            args.n,
            match args.normalization {
                NormArg::Raw => "raw",
                NormArg::Saito => "saito",
            }
        ));
        hex(&h.finalize())
    };
    let cache = cache_dir(&args.cache).map(|d| d.join(&key));
    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating output directory {}", args.out.display()))?;

    let mut cached = false;
    if let Some(dir) = &cache {
        if ARTIFACTS.iter().all(|f| dir.join(f).is_file()) {
            for f in ARTIFACTS {
                fs::copy(dir.join(f), args.out.join(f))
                    .with_context(|| format!("copying cached {f}"))?;
            }
            cached = true;
        }
    }

    if !cached {
        let files = build_artifacts(args.n, args.normalization.into())?;
        if let Some(dir) = &cache {
            fs::create_dir_all(dir)
                .with_context(|| format!("creating cache directory {}", dir.display()))?;
            for (name, body) in &files {
                fs::write(dir.join(name), body)?;
            }
        }
        for (name, body) in &files {
            fs::write(args.out.join(name), body)?;
        }
    }

    let report = json!({
        "cache_hit": cached,
        "cache_key": key,
        "command": "construct",
        "files": ARTIFACTS,
        "n": args.n,
        "out": args.out.display().to_string(),
    });
    match args.format {
        FormatArg::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        FormatArg::Text => {
            println!(
                "constructed n={} artifacts in {}{}",
                args.n,
                args.out.display(),
                if cached { " (from cache)" } else { "" }
            );
            for f in ARTIFACTS {
                println!("  {f}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn build_artifacts(n: usize, norm: Normalization) -> anyhow::Result<Vec<(&'static str, String)>> {
    let pencil = build_pencil(n, norm)?;
    let fc = flat_coordinates(n)?;
    let frob = structure_constants(&fc)?;

    let polys = |v: &[orbitfold::poly::MultiPoly]| -> Value {
        Value::Array(v.iter().map(|p| p.to_json()).collect())
    };
    let rats = |v: &[orbitfold::ratfun::RatFun]| -> Value {
        Value::Array(v.iter().map(|p| p.to_json()).collect())
    };

    let pencil_json = json!({
        "chart": pencil.u_chart.name,
        "eta": polys(&pencil.eta),
        "g": polys(&pencil.g),
        "n": n,
        "normalization": match norm { Normalization::Raw => "raw", Normalization::Saito => "saito" },
    });
    let flat_json = json!({
        "chart": fc.t_chart.name,
        "e_t": polys(&fc.e_t),
        "eta_t": polys(&fc.eta_t),
        "g_t": polys(&fc.g_t),
        "n": n,
        "scales": fc.scales.iter().map(|s| format_rational(s)).collect::<Vec<_>>(),
        "t_of_u": polys(&fc.t_of_u),
        "u_of_t": polys(&fc.u_of_t),
    });
    let frob_json = json!({
        "c": rats(&frob.c),
        "chart": fc.t_chart.name,
        "euler": polys(&frob.euler),
        "kappa": format_rational(&frob.kappa),
        "n": n,
    });
    let f_json = json!({
        "chart": fc.t_chart.name,
        "f_poly": frob.f_poly.to_json(),
        "kappa": format_rational(&frob.kappa),
        "n": n,
        "note": "F = f_poly + kappa * t_n^2 * ln(t_n)",
    });
    let render = |v: &Value| -> anyhow::Result<String> {
        Ok(format!("{}\n", serde_json::to_string_pretty(v)?))
    };
    Ok(vec![
        ("pencil.json", render(&pencil_json)?),
        ("flatchart.json", render(&flat_json)?),
        ("frobenius.json", render(&frob_json)?),
        ("F.json", render(&f_json)?),
    ])
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Check {
    Pencil,
    Quasihomogeneity,
    Axioms,
    Ledger,
    Wdvv,
    Dual,
    Hierarchy,
}

fn parse_checks(s: &str) -> Result<Vec<Check>, String> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| match t {
            "pencil" => Ok(Check::Pencil),
            "quasihomogeneity" => Ok(Check::Quasihomogeneity),
            "axioms" => Ok(Check::Axioms),
            "ledger" => Ok(Check::Ledger),
            "wdvv" => Ok(Check::Wdvv),
            "dual" => Ok(Check::Dual),
            "hierarchy" => Ok(Check::Hierarchy),
            other => Err(format!("unknown check `{other}`")),
        })
        .collect()
}

/// Lazily shared flat chart + Frobenius structure across suites.
struct Lazy {
    n: usize,
    fc: Option<FlatChart>,
    frob: Option<Frobenius>,
}

impl Lazy {
    fn fc(&mut self) -> anyhow::Result<&FlatChart> {
        if self.fc.is_none() {
            self.fc = Some(flat_coordinates(self.n)?);
        }
        Ok(self.fc.as_ref().unwrap())
    }

    fn frob(&mut self) -> anyhow::Result<&Frobenius> {
        if self.frob.is_none() {
            let fc = self.fc()?.clone();
            self.frob = Some(structure_constants(&fc)?);
        }
        Ok(self.frob.as_ref().unwrap())
    }
}

fn cmd_verify(args: &VerifyArgs) -> anyhow::Result<ExitCode> {
    if args.n < 2 {
        return Ok(usage_error("--n must be at least 2"));
    }
    let checks = match &args.checks {
        Some(s) => match parse_checks(s) {
            Ok(c) => c,
            Err(e) => return Ok(usage_error(&e)),
        },
        None => {
            let mut c = vec![
                Check::Pencil,
                Check::Quasihomogeneity,
                Check::Axioms,
                Check::Ledger,
                Check::Wdvv,
                Check::Hierarchy,
            ];
            if args.n == 2 {
                c.push(Check::Dual);
            }
            c
        }
    };
    if checks.contains(&Check::Dual) && args.n != 2 {
        return Ok(usage_error("the dual suite is only available for --n 2"));
    }
    let dual_params = match parse_dual_params(&args.weights, &args.invariant_c) {
        Ok(p) => p,
        Err(e) => return Ok(usage_error(&e)),
    };

    let mut lazy = Lazy {
        n: args.n,
        fc: None,
        frob: None,
    };
    let mut results = Vec::new();
    for check in checks {
        let r = match check {
            Check::Pencil => check_pencil(args.n, args.normalization.into()),
            Check::Quasihomogeneity => check_quasihomogeneity(args.n),
            Check::Axioms => check_axioms(&mut lazy),
            Check::Ledger => check_ledger(&mut lazy),
            Check::Wdvv => check_wdvv(&mut lazy),
            Check::Dual => check_dual(&dual_params),
            Check::Hierarchy => check_hierarchy(&mut lazy, args.level),
        };
        match r {
            Ok(cr) => results.push(cr),
            Err(e) => results.push(CheckResult {
                name: format!("{check:?}").to_lowercase(),
                pass: false,
                detail: format!("{e:#}"),
            }),
        }
    }

    let all_pass = results.iter().all(|r| r.pass);
    match args.format {
        FormatArg::Json => {
            let report = json!({
                "command": "verify",
                "n": args.n,
                "pass": all_pass,
                "results": results.iter().map(|r| json!({
                    "check": r.name,
                    "detail": r.detail,
                    "pass": r.pass,
                })).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        FormatArg::Text => {
            for r in &results {
                println!(
                    "[{}] {}: {}",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.name,
                    r.detail
                );
            }
            println!("overall: {}", if all_pass { "PASS" } else { "FAIL" });
        }
    }
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn check_pencil(n: usize, norm: Normalization) -> anyhow::Result<CheckResult> {
    let pencil = build_pencil(n, norm)?;
    let closed = eta_closed_form(n, norm);
    if pencil.eta != closed {
        bail!("η does not match the closed form");
    }
    let g11 = pencil
        .g(0, 0)
        .as_constant()
        .context("g^{11} is not constant")?;
    let expect = &qi(4 * (n as i64) * (n as i64 - 1)) * &norm.factor(n);
    if g11 != expect {
        bail!("g^{{11}} = {} ≠ {}", format_rational(&g11), format_rational(&expect));
    }
    let gamma = contravariant_christoffel(n, norm)?;
    let mode = if n <= 4 {
        FlatnessMode::Symbolic
    } else {
        FlatnessMode::Points { count: 10, seed: 0xB2 }
    };
    if !verify_flat_pencil(&pencil, &gamma, mode)? {
        bail!("flat-pencil conditions fail");
    }
    if !generating_identity_check(n)? {
        bail!("generating identity fails");
    }
    Ok(CheckResult {
        name: "pencil".into(),
        pass: true,
        detail: format!(
            "η closed form, g^{{11}}, flatness of g−λη ({}), generating identity",
            if n <= 4 { "symbolic" } else { "10 sample points" }
        ),
    })
}

fn check_quasihomogeneity(n: usize) -> anyhow::Result<CheckResult> {
    let pencil = build_pencil(n, Normalization::Saito)?;
    if !verify_quasihomogeneity(&pencil) {
        bail!("quasihomogeneity relations fail");
    }
    Ok(CheckResult {
        name: "quasihomogeneity".into(),
        pass: true,
        detail: "L_e g = η, L_e η = 0, Euler scaling, Egorov potential".into(),
    })
}

fn check_axioms(lazy: &mut Lazy) -> anyhow::Result<CheckResult> {
    let fc = lazy.fc()?;
    if !verify_r_operator(fc) {
        bail!("grading operator identity fails");
    }
    let fc = lazy.fc()?.clone();
    let frob = lazy.frob()?;
    if !verify_axioms(&fc, frob)? {
        bail!("Frobenius axioms fail");
    }
    Ok(CheckResult {
        name: "axioms".into(),
        pass: true,
        detail: "unit, commutativity, invariance, ∇c symmetry, associativity, homogeneity".into(),
    })
}

fn check_ledger(lazy: &mut Lazy) -> anyhow::Result<CheckResult> {
    let fc = lazy.fc()?.clone();
    let frob = lazy.frob()?;
    if !christoffel_ledger(&fc, frob) {
        bail!("contravariant Christoffel ledger fails");
    }
    Ok(CheckResult {
        name: "ledger".into(),
        pass: true,
        detail: "Γ^{ij}_k(t) matches the structure-constant ledger".into(),
    })
}

fn check_wdvv(lazy: &mut Lazy) -> anyhow::Result<CheckResult> {
    let n = lazy.n;
    let frob = lazy.frob()?;
    let (f_poly, kappa) = (frob.f_poly.clone(), frob.kappa.clone());
    if !orbitfold::frobenius::wdvv_check(n, &f_poly, &kappa)? {
        bail!("WDVV equations fail");
    }
    let mut detail = "WDVV associativity".to_string();
    let reference = match n {
        2 => Some(reference_f_n2()),
        3 => Some(reference_f_n3()),
        4 => Some(reference_f_n4()),
        _ => None,
    };
    if let Some((f_ref, kappa_ref)) = reference {
        let mu = match_prepotential(n, &f_poly, &kappa, &f_ref, &kappa_ref)
            .context("prepotential does not match the reference")?;
        detail.push_str(&format!(
            "; prepotential matches reference (scale {})",
            format_rational(&mu)
        ));
    }
    Ok(CheckResult {
        name: "wdvv".into(),
        pass: true,
        detail,
    })
}

fn check_hierarchy(lazy: &mut Lazy, level: usize) -> anyhow::Result<CheckResult> {
    let n = lazy.n;
    let fc = lazy.fc()?.clone();
    let frob = lazy.frob()?;
    let level = level.max(2);
    let fields = hierarchy_fields(frob, &fc.e_t, level)?;
    let flows: Vec<_> = fields.iter().map(|x| flow_matrix(frob, x)).collect();
    for a in 0..flows.len() {
        for b in (a + 1)..flows.len() {
            if !flows_commute(n, &flows[a], &flows[b]) {
                bail!("levels {a} and {b} do not commute");
            }
        }
    }
    Ok(CheckResult {
        name: "hierarchy".into(),
        pass: true,
        detail: format!("levels 0..={level} generated; all flows commute"),
    })
}

// ---------------------------------------------------------------------------
// dual pipeline
// ---------------------------------------------------------------------------

struct DualParams {
    weights: Option<(ExactScalar, ExactScalar)>,
    c: Option<ExactScalar>,
}

fn parse_dual_params(
    weights: &Option<String>,
    invariant_c: &Option<String>,
) -> Result<DualParams, String> {
    let weights = match weights {
        None => None,
        Some(s) => {
            let parts: Vec<_> = s.split(',').map(|t| t.trim()).collect();
            if parts.len() != 2 {
                return Err("--weights expects two rationals `x,y`".into());
            }
            let x = parse_rational(parts[0])
                .ok_or_else(|| format!("invalid rational `{}`", parts[0]))?;
            let y = parse_rational(parts[1])
                .ok_or_else(|| format!("invalid rational `{}`", parts[1]))?;
            Some((x, y))
        }
    };
    let c = match invariant_c {
        None => None,
        Some(s) => Some(parse_rational(s).ok_or_else(|| format!("invalid rational `{s}`"))?),
    };
    Ok(DualParams { weights, c })
}

/// Default invariant parameter for a requested weight point: the value that
/// completes the admissible family when one orbit weight vanishes.
fn default_family_c(x: &ExactScalar, y: &ExactScalar) -> ExactScalar {
    if *y == qi(0) && *x != qi(0) {
        orbitfold::scalar::q(-1, 4)
    } else {
        qi(0)
    }
}

/// The full fixed verification battery for the rank-2 dual pipeline, plus a
/// report on the requested weight/parameter point if one was given.
fn check_dual(params: &DualParams) -> anyhow::Result<CheckResult> {
    // The three admissible families (symbolic c for the first).
    if !residual_is_zero(&DualSetup::family1()?)? {
        bail!("family 1 (x=y, e¹=0) residual does not vanish");
    }
    if !residual_is_zero(&DualSetup::family2())? {
        bail!("family 2 (x=0, c=0, e²=0) residual does not vanish");
    }
    if !residual_is_zero(&DualSetup::family3())? {
        bail!("family 3 (y=0, c=−1/4, e²=0) residual does not vanish");
    }
    // Off-family falsification points.
    for (x, y, c, e1, e2) in [
        (1, 2, 1, 0, 1),
        (1, 3, 2, 0, 1),
        (2, 1, -1, 0, 1),
        (1, 2, 0, 1, 1),
        (3, 1, 1, 1, 0),
    ] {
        let setup = DualSetup::numeric(qi(x), qi(y), qi(c), qi(e1), qi(e2));
        if residual_is_zero(&setup)? {
            bail!("off-family point ({x},{y},{c},{e1},{e2}) has vanishing residual");
        }
    }
    // Dual connection at the self-dual parameter.
    let family1 = DualSetup::family1()?;
    let b = dual::dual_connection(&family1)?;
    let cstar = family1.dual_product()?;
    let ch = family1.chart.clone();
    let special = orbitfold::ratfun::RatFun::constant(&ch, orbitfold::scalar::q(-1, 8));
    for idx in 0..8 {
        let bs = b[idx].substitute(&[("c", special.clone())])?;
        let cs = cstar[idx].substitute(&[("c", special.clone())])?;
        if bs != -&cs {
            bail!("b ≠ −c* at c = −1/8");
        }
    }
    // Vector potential and branch constants.
    let (_, f) = vector_potential(&family1)?;
    let _ = f;
    let k2 = nls_kappa(&DualSetup::family2())?;
    let k3 = nls_kappa(&DualSetup::family3())?;
    if k2 != qi(1) || k3 != qi(-1) {
        bail!("unexpected branch constants κ₂ = {k2}, κ₃ = {k3}");
    }
    for n in 2..=4 {
        metric_bridge(n)?;
    }

    let mut detail =
        "families 1–3 compatible, 5 off-family points falsified, b=−c* at c=−1/8, \
         vector potential integrates, branch κ: family2 → +1 (defocusing), \
         family3 → −1 (focusing), intersection-form bridge n=2..4"
            .to_string();
    if let Some((x, y)) = &params.weights {
        let c = params
            .c
            .clone()
            .unwrap_or_else(|| default_family_c(x, y));
        let (e1, e2) = if *x == qi(0) || *y == qi(0) {
            (qi(1), qi(0))
        } else {
            (qi(0), qi(1))
        };
        let setup = DualSetup::numeric(x.clone(), y.clone(), c.clone(), e1, e2);
        let compatible = residual_is_zero(&setup)?;
        detail.push_str(&format!(
            "; requested point (x={}, y={}, c={}): {}",
            format_rational(x),
            format_rational(y),
            format_rational(&c),
            if compatible {
                match nls_kappa(&setup) {
                    Ok(k) if k > qi(0) => "compatible, defocusing branch".to_string(),
                    Ok(_) => "compatible, focusing branch".to_string(),
                    Err(_) => "compatible".to_string(),
                }
            } else {
                "not compatible".to_string()
            }
        ));
    }
    Ok(CheckResult {
        name: "dual".into(),
        pass: true,
        detail,
    })
}

fn cmd_dual(args: &DualArgs) -> anyhow::Result<ExitCode> {
    if args.group != "B2" {
        return Ok(usage_error("only --group B2 supports the full dual pipeline"));
    }
    let params = match parse_dual_params(&args.weights, &args.invariant_c) {
        Ok(p) => p,
        Err(e) => return Ok(usage_error(&e)),
    };
    // Symbolic display unless a numeric point is requested.
    let setup = match (&params.weights, &params.c) {
        (None, None) => DualSetup::symbolic()?,
        (Some((x, y)), c) => {
            let c = c.clone().unwrap_or_else(|| default_family_c(x, y));
            let (e1, e2) = if *x == qi(0) || *y == qi(0) {
                (qi(1), qi(0))
            } else {
                (qi(0), qi(1))
            };
            DualSetup::numeric(x.clone(), y.clone(), c, e1, e2)
        }
        (None, Some(_)) => {
            return Ok(usage_error("--invariant-c requires --weights"));
        }
    };
    let cstar = setup.dual_product()?;
    let gamma = dual::natural_connection(&setup)?;
    let e = dual::unit_in_p(&setup)?;
    let cdot = dual::product_from_dual(&cstar, &e)?;
    let residual_zero = residual_is_zero(&setup)?;
    let potential = if residual_zero {
        vector_potential(&setup).ok()
    } else {
        None
    };
    let branch = if residual_zero {
        nls_kappa(&setup).ok()
    } else {
        None
    };

    let named3 = |v: &[orbitfold::ratfun::RatFun], prefix: &str| -> Vec<(String, String)> {
        let mut out = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    out.push((
                        format!("{prefix}^{}_{}{}", i + 1, j + 1, k + 1),
                        format!("{}", v[i * 4 + j * 2 + k]),
                    ));
                }
            }
        }
        out
    };
    let gamma_named = {
        let mut out = Vec::new();
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    out.push((
                        format!("Γ^{}_{}{}", k + 1, i + 1, j + 1),
                        format!("{}", gamma[k * 4 + i * 2 + j]),
                    ));
                }
            }
        }
        out
    };

    match args.format {
        FormatArg::Json => {
            let to_obj = |v: Vec<(String, String)>| -> Value {
                Value::Object(v.into_iter().map(|(k, val)| (k, Value::String(val))).collect())
            };
            let report = json!({
                "c_dual": to_obj(named3(&cstar, "c*")),
                "c_product": to_obj(named3(&cdot, "c")),
                "command": "dual",
                "connection": to_obj(gamma_named),
                "group": "B2",
                "potential": potential.as_ref().map(|(_, f)| json!({
                    "F1": format!("{}", f[0]),
                    "F2": format!("{}", f[1]),
                })),
                "residual_zero": residual_zero,
                "branch": branch.as_ref().map(|k| {
                    if *k > qi(0) { "defocusing" } else { "focusing" }
                }),
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        FormatArg::Text => {
            println!("dual pipeline, group B2");
            println!("-- dual product c* --");
            for (k, v) in named3(&cstar, "c*") {
                println!("  {k} = {v}");
            }
            println!("-- natural connection --");
            for (k, v) in gamma_named {
                println!("  {k} = {v}");
            }
            println!("-- induced product c∘ --");
            for (k, v) in named3(&cdot, "c") {
                println!("  {k} = {v}");
            }
            println!(
                "compatibility residual: {}",
                if residual_zero { "vanishes identically" } else { "nonzero" }
            );
            if let Some((_, f)) = &potential {
                println!("vector potential:");
                println!("  F^1 = {}", f[0]);
                println!("  F^2 = {}", f[1]);
            }
            if let Some(k) = &branch {
                println!(
                    "branch: {} (κ = {})",
                    if *k > qi(0) { "defocusing" } else { "focusing" },
                    format_rational(k)
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// frobenius / hierarchy
// ---------------------------------------------------------------------------

fn cmd_frobenius(args: &FrobeniusArgs) -> anyhow::Result<ExitCode> {
    if args.n < 2 {
        return Ok(usage_error("--n must be at least 2"));
    }
    let fc = flat_coordinates(args.n)?;
    let frob = structure_constants(&fc)?;
    match args.format {
        FormatArg::Json => {
            let mut cs = serde_json::Map::new();
            for i in 0..args.n {
                for j in 0..args.n {
                    for k in 0..args.n {
                        cs.insert(
                            format!("c^{}_{}{}", i + 1, j + 1, k + 1),
                            Value::String(format!("{}", frob.c(i, j, k))),
                        );
                    }
                }
            }
            let report = json!({
                "c": cs,
                "command": "frobenius",
                "f_poly": format!("{}", frob.f_poly),
                "kappa": format_rational(&frob.kappa),
                "n": args.n,
                "note": "F = f_poly + kappa * t_n^2 * ln(t_n)",
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        FormatArg::Text => {
            println!("Frobenius structure, n = {}", args.n);
            for i in 0..args.n {
                for j in 0..args.n {
                    for k in 0..args.n {
                        let c = frob.c(i, j, k);
                        if !c.is_zero() {
                            println!("  c^{}_{}{} = {}", i + 1, j + 1, k + 1, c);
                        }
                    }
                }
            }
            println!("  F = {} + {}·t{}²·ln t{}", frob.f_poly, format_rational(&frob.kappa), args.n, args.n);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_hierarchy(args: &HierarchyArgs) -> anyhow::Result<ExitCode> {
    if args.n < 2 {
        return Ok(usage_error("--n must be at least 2"));
    }
    let fc = flat_coordinates(args.n)?;
    let frob = structure_constants(&fc)?;
    let fields = hierarchy_fields(&frob, &fc.e_t, args.level)?;
    let mut levels = Vec::new();
    for (alpha, x) in fields.iter().enumerate() {
        let a = flow_matrix(&frob, x);
        let mut eqs = Vec::new();
        for i in 0..args.n {
            let rhs: Vec<String> = (0..args.n)
                .filter(|&j| !a[i * args.n + j].is_zero())
                .map(|j| format!("({})·∂t{}/∂x", a[i * args.n + j], j + 1))
                .collect();
            eqs.push(format!("∂t{}/∂T_{alpha} = {}", i + 1, rhs.join(" + ")));
        }
        levels.push(eqs);
    }
    match args.format {
        FormatArg::Json => {
            let report = json!({
                "command": "hierarchy",
                "levels": levels,
                "n": args.n,
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        FormatArg::Text => {
            println!("principal hierarchy flows, n = {}", args.n);
            for (alpha, eqs) in levels.iter().enumerate() {
                println!("level {alpha}:");
                for e in eqs {
                    println!("  {e}");
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
