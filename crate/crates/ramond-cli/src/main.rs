//! `ramond` — command-line verification harness.
//!
//! Every subcommand runs one exact check from the library and prints a
//! deterministic JSON report body followed by a single timing footer line
//! (`# wall-time-ms: N`). The body is byte-identical across runs with the
//! same configuration; only the footer varies.
//!
//! Exit codes: `0` all checks passed, `1` at least one check failed,
//! `2` configuration or schema violation, `3` internal invariant breach.
//!
//! Configuration comes from flags, optionally layered over a TOML file
//! (`--config`); explicit flags override file keys. Unknown file keys are
//! rejected. The only environment variable read is `RAMOND_THREADS`, which
//! sets the worker-thread count for `report-all` section execution and
//! never changes the output bytes.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use ramond::carriers::{FamilySpec, TPoly, WindowSpec};
use ramond::intertwiners::{
    check_intertwiner, check_intertwiner_space_trivial, phi_half, psi_presentation,
    psi_quotient, witness_non_isomorphism_t,
};
use ramond::modules::{
    check_action_matches_twist, check_module_axiom, check_restriction_consistency,
};
use ramond::probes::{
    candidate_alpha_line, candidate_cyclic_span, candidate_even_part,
    candidate_even_plus_dt_odd, check_k_identities, cyclic_vector, orbit_report,
    restricted_contrast, submodule_closure, CandidateSpec,
};
use ramond::report::{aggregate_to_json, reports_to_json, timing_footer};
use ramond::scalars::rat;
use ramond::superalgebras::{
    check_mutation_sensitivity, check_phi_homomorphism, check_realization, check_super_jacobi,
    StructureTable,
};
use ramond::text::{parse_rational, parse_tpoly, parse_vector};
use ramond::{ActionConfig, Algebra, ParamRing, Report, SymScalar, Vector};

// ---------------------------------------------------------------------------
// Command line
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "ramond",
    version,
    about = "Exact verification harness for two superconformal algebras and their non-weight modules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check graded antisymmetry and the super-Jacobi identity.
    VerifyAlgebra(CommonArgs),
    /// Check the module axioms on carrier families.
    VerifyModule(CommonArgs),
    /// Check the weight-shift twist of the derivation realization.
    VerifyTwist(CommonArgs),
    /// Check the embedding homomorphism and restriction consistency.
    VerifyPhi(CommonArgs),
    /// Grow a generator orbit from a seed and test inner-window fill.
    ProbeOrbit(CommonArgs),
    /// Test a candidate subspace for generator stability.
    ProbeSubmodule(CommonArgs),
    /// Check the composite-action coefficient identities.
    ProbeIdentities(CommonArgs),
    /// Check intertwining maps and window Hom dimensions.
    CheckIso(CommonArgs),
    /// Run the full verification suite and emit one aggregate report.
    ReportAll(CommonArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::VerifyAlgebra(_) => "verify-algebra",
            Command::VerifyModule(_) => "verify-module",
            Command::VerifyTwist(_) => "verify-twist",
            Command::VerifyPhi(_) => "verify-phi",
            Command::ProbeOrbit(_) => "probe-orbit",
            Command::ProbeSubmodule(_) => "probe-submodule",
            Command::ProbeIdentities(_) => "probe-identities",
            Command::CheckIso(_) => "check-iso",
            Command::ReportAll(_) => "report-all",
        }
    }

    fn args(self) -> CommonArgs {
        match self {
            Command::VerifyAlgebra(a)
            | Command::VerifyModule(a)
            | Command::VerifyTwist(a)
            | Command::VerifyPhi(a)
            | Command::ProbeOrbit(a)
            | Command::ProbeSubmodule(a)
            | Command::ProbeIdentities(a)
            | Command::CheckIso(a)
            | Command::ReportAll(a) => a,
        }
    }
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// TOML config file; explicit flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Algebra tag: R or T (default: both where both apply).
    #[arg(long)]
    algebra: Option<String>,
    /// Carrier family: laurent | omega | degree-two | degree-n | fraction.
    #[arg(long)]
    family: Option<String>,
    /// Laurent-family polynomial α(t) in the text grammar, or "symbolic".
    #[arg(long)]
    alpha: Option<String>,
    /// Rank-two-family parameter λ: nonzero rational, or "symbolic".
    #[arg(long)]
    lambda: Option<String>,
    /// Degree-two-family polynomial f(t) in the text grammar, or "symbolic".
    #[arg(long)]
    f: Option<String>,
    /// Higher-derivation-family order n ≥ 2.
    #[arg(long)]
    n: Option<u32>,
    /// Fraction-family poles, comma-separated rationals starting with 0.
    #[arg(long, value_delimiter = ',')]
    poles: Option<Vec<String>>,
    /// Fraction-family residues, comma-separated rationals.
    #[arg(long, value_delimiter = ',')]
    residues: Option<Vec<String>>,
    /// Weight parameter b: a rational, or "symbolic".
    #[arg(long)]
    b: Option<String>,
    /// Window bound on |t-power|.
    #[arg(long)]
    t_bound: Option<i64>,
    /// Window bound on the auxiliary exponent.
    #[arg(long)]
    aux_bound: Option<u32>,
    /// Window bound on total pole order.
    #[arg(long)]
    pole_bound: Option<u32>,
    /// Bound on |generator mode|.
    #[arg(long)]
    mode_bound: Option<i64>,
    /// Seed vector in the text grammar (probe-orbit; default: cyclic vector).
    #[arg(long)]
    seed: Option<String>,
    /// Candidate subspace: cyclic | alpha-line | even | even-dt-odd.
    #[arg(long)]
    candidate: Option<String>,
    /// Intertwiner selection: phi | psi | psi-quotient | space | witness | all.
    #[arg(long)]
    map: Option<String>,
    /// Also write the report (body + footer) to this file.
    #[arg(long)]
    output: Option<PathBuf>,
}

/// TOML mirror of the flag set; unknown keys are rejected.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    command: Option<String>,
    algebra: Option<String>,
    family: Option<String>,
    alpha: Option<String>,
    lambda: Option<String>,
    f: Option<String>,
    n: Option<u32>,
    poles: Option<Vec<String>>,
    residues: Option<Vec<String>>,
    b: Option<String>,
    t_bound: Option<i64>,
    aux_bound: Option<u32>,
    pole_bound: Option<u32>,
    mode_bound: Option<i64>,
    seed: Option<String>,
    candidate: Option<String>,
    map: Option<String>,
    output: Option<PathBuf>,
}

// ---------------------------------------------------------------------------
// Error-to-exit-code mapping
// ---------------------------------------------------------------------------

enum CliError {
    /// Configuration or schema violation → exit 2.
    Schema(String),
    /// Internal invariant breach → exit 3.
    Internal(String),
}

impl From<ramond::Error> for CliError {
    fn from(e: ramond::Error) -> CliError {
        match e {
            ramond::Error::Config(_) | ramond::Error::Parse(_) => CliError::Schema(e.to_string()),
            ramond::Error::RingMismatch(_) | ramond::Error::ScalarDomain(_) => {
                CliError::Internal(e.to_string())
            }
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn schema_err<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Schema(msg.into()))
}

// ---------------------------------------------------------------------------
// Resolved run configuration
// ---------------------------------------------------------------------------

/// Flag/file merge result: every field still optional; command handlers
/// apply their own defaults.
struct RunConfig {
    command: &'static str,
    algebra: Option<String>,
    family: Option<String>,
    alpha: Option<String>,
    lambda: Option<String>,
    f: Option<String>,
    n: Option<u32>,
    poles: Option<Vec<String>>,
    residues: Option<Vec<String>>,
    b: Option<String>,
    t_bound: Option<i64>,
    aux_bound: Option<u32>,
    pole_bound: Option<u32>,
    mode_bound: Option<i64>,
    seed: Option<String>,
    candidate: Option<String>,
    map: Option<String>,
    output: Option<PathBuf>,
}

fn merge(command: &'static str, args: CommonArgs) -> CliResult<RunConfig> {
    let file = match &args.config {
        None => FileConfig::default(),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Schema(format!("cannot read config file {}: {e}", path.display()))
            })?;
            toml::from_str::<FileConfig>(&text)
                .map_err(|e| CliError::Schema(format!("config file: {e}")))?
        }
    };
    if let Some(named) = &file.command {
        if named != command {
            return schema_err(format!(
                "config file names command {named:?} but {command:?} was invoked"
            ));
        }
    }
    Ok(RunConfig {
        command,
        algebra: args.algebra.or(file.algebra),
        family: args.family.or(file.family),
        alpha: args.alpha.or(file.alpha),
        lambda: args.lambda.or(file.lambda),
        f: args.f.or(file.f),
        n: args.n.or(file.n),
        poles: args.poles.or(file.poles),
        residues: args.residues.or(file.residues),
        b: args.b.or(file.b),
        t_bound: args.t_bound.or(file.t_bound),
        aux_bound: args.aux_bound.or(file.aux_bound),
        pole_bound: args.pole_bound.or(file.pole_bound),
        mode_bound: args.mode_bound.or(file.mode_bound),
        seed: args.seed.or(file.seed),
        candidate: args.candidate.or(file.candidate),
        map: args.map.or(file.map),
        output: args.output.or(file.output),
    })
}

// ---------------------------------------------------------------------------
// Payload parsing
// ---------------------------------------------------------------------------

/// One parameter ring for everything the CLI builds; numeric payloads are
/// constants over it.
fn cli_ring() -> Arc<ParamRing> {
    ParamRing::new(&["alpha", "b", "f", "lambda"]).expect("CLI parameter ring")
}

fn parse_b(ring: &Arc<ParamRing>, text: &str) -> CliResult<SymScalar> {
    if text == "symbolic" {
        return Ok(SymScalar::param(ring, "b").expect("b is declared"));
    }
    Ok(SymScalar::from_rational(ring, parse_rational(text)?))
}

fn parse_alpha(ring: &Arc<ParamRing>, text: &str) -> CliResult<TPoly> {
    if text == "symbolic" {
        return Ok(TPoly::constant(SymScalar::param(ring, "alpha").expect("alpha is declared")));
    }
    Ok(parse_tpoly(ring, text)?)
}

fn parse_f(ring: &Arc<ParamRing>, text: &str) -> CliResult<TPoly> {
    if text == "symbolic" {
        return Ok(TPoly::monomial(1, SymScalar::param(ring, "f").expect("f is declared")));
    }
    Ok(parse_tpoly(ring, text)?)
}

fn parse_lambda(ring: &Arc<ParamRing>, text: &str) -> CliResult<SymScalar> {
    if text == "symbolic" {
        return Ok(SymScalar::param(ring, "lambda").expect("lambda is declared"));
    }
    Ok(SymScalar::from_rational(ring, parse_rational(text)?))
}

fn parse_rational_list(texts: &[String]) -> CliResult<Vec<ramond::Rational>> {
    texts.iter().map(|t| Ok(parse_rational(t)?)).collect()
}

fn parse_algebra(text: &str) -> CliResult<Algebra> {
    match text {
        "R" | "r" => Ok(Algebra::R),
        "T" | "t" => Ok(Algebra::T),
        other => schema_err(format!("unknown algebra tag {other:?} (expected R or T)")),
    }
}

/// Algebras selected by `--algebra`, defaulting to both.
fn selected_algebras(cfg: &RunConfig) -> CliResult<Vec<Algebra>> {
    match &cfg.algebra {
        None => Ok(vec![Algebra::R, Algebra::T]),
        Some(tag) => Ok(vec![parse_algebra(tag)?]),
    }
}

/// Builds the family named by the config. `symbolic_defaults` picks the
/// fallback payloads: symbolic parameters for the verifiers, the concrete
/// reference payloads for the numeric probes.
fn build_family(
    ring: &Arc<ParamRing>,
    cfg: &RunConfig,
    symbolic_defaults: bool,
) -> CliResult<Arc<FamilySpec>> {
    let tag = cfg.family.as_deref().unwrap_or("laurent");
    let default = |sym: &str, num: &str| -> String {
        if symbolic_defaults { sym.to_string() } else { num.to_string() }
    };
    let spec = match tag {
        "laurent" => {
            let text = cfg.alpha.clone().unwrap_or_else(|| default("symbolic", "1/2"));
            FamilySpec::laurent(parse_alpha(ring, &text)?)
        }
        "omega" => {
            let text = cfg.lambda.clone().unwrap_or_else(|| default("symbolic", "2"));
            FamilySpec::omega(parse_lambda(ring, &text)?)?
        }
        "degree-two" => {
            let text = cfg.f.clone().unwrap_or_else(|| default("symbolic", "t"));
            FamilySpec::degree_two(parse_f(ring, &text)?)
        }
        "degree-n" => FamilySpec::degree_n(cfg.n.unwrap_or(2))?,
        "fraction" => {
            let poles = match &cfg.poles {
                Some(p) => parse_rational_list(p)?,
                None => vec![rat(0, 1), rat(1, 1)],
            };
            let residues = match &cfg.residues {
                Some(r) => parse_rational_list(r)?,
                None => vec![rat(1, 2), rat(1, 2)],
            };
            FamilySpec::fraction(poles, residues)?
        }
        other => return schema_err(format!("unknown family {other:?}")),
    };
    Ok(Arc::new(spec))
}

/// The five reference families with the stated default payloads.
fn all_families(ring: &Arc<ParamRing>, symbolic_defaults: bool) -> CliResult<Vec<Arc<FamilySpec>>> {
    ["laurent", "omega", "degree-two", "degree-n", "fraction"]
        .iter()
        .map(|tag| {
            let mut one = RunConfig::empty("internal");
            one.family = Some(tag.to_string());
            build_family(ring, &one, symbolic_defaults)
        })
        .collect()
}

/// Families selected by `--family`, defaulting to all five.
fn selected_families(
    ring: &Arc<ParamRing>,
    cfg: &RunConfig,
    symbolic_defaults: bool,
) -> CliResult<Vec<Arc<FamilySpec>>> {
    match cfg.family {
        None => all_families(ring, symbolic_defaults),
        Some(_) => Ok(vec![build_family(ring, cfg, symbolic_defaults)?]),
    }
}

impl RunConfig {
    fn empty(command: &'static str) -> RunConfig {
        RunConfig {
            command,
            algebra: None,
            family: None,
            alpha: None,
            lambda: None,
            f: None,
            n: None,
            poles: None,
            residues: None,
            b: None,
            t_bound: None,
            aux_bound: None,
            pole_bound: None,
            mode_bound: None,
            seed: None,
            candidate: None,
            map: None,
            output: None,
        }
    }

    fn window(&self, t: i64, aux: u32, pole: u32, mode: i64) -> CliResult<WindowSpec> {
        let mode = self.mode_bound.unwrap_or(mode);
        Ok(WindowSpec::new(
            self.t_bound.unwrap_or(t.max(mode + 1)),
            self.aux_bound.unwrap_or(aux),
            self.pole_bound.unwrap_or(pole),
            mode,
        )?)
    }

    fn b_or(&self, ring: &Arc<ParamRing>, default: &str) -> CliResult<SymScalar> {
        parse_b(ring, self.b.as_deref().unwrap_or(default))
    }
}

// ---------------------------------------------------------------------------
// Command handlers
// ---------------------------------------------------------------------------

fn run_verify_algebra(cfg: &RunConfig) -> CliResult<Vec<Report>> {
    let mode = cfg.mode_bound.unwrap_or(4);
    let table = StructureTable::standard();
    let mut reports = Vec::new();
    for algebra in selected_algebras(cfg)? {
        reports.push(check_super_jacobi(algebra, mode, &table)?);
    }
    Ok(reports)
}

fn run_verify_module(cfg: &RunConfig) -> CliResult<Vec<Report>> {
    let ring = cli_ring();
    let mode = cfg.mode_bound.unwrap_or(3);
    let window = cfg.window(4, 3, 2, mode)?;
    let b = cfg.b_or(&ring, "symbolic")?;
    let mut reports = Vec::new();
    for family in selected_families(&ring, cfg, true)? {
        for algebra in selected_algebras(cfg)? {
            let action = ActionConfig::new(algebra, family.clone(), b.clone())?;
            reports.push(check_module_axiom(&action, mode, &window)?);
        }
    }
    Ok(reports)
}

fn run_verify_twist(cfg: &RunConfig) -> CliResult<Vec<Report>> {
    let ring = cli_ring();
    let mode = cfg.mode_bound.unwrap_or(3);
    let window = cfg.window(4, 3, 2, mode)?;
    let b = cfg.b_or(&ring, "symbolic")?;
    let family = build_family(&ring, cfg, true)?;
    let mut reports = vec![ramond::superalgebras::check_twist(&b, &family, mode, &window)?];
    let action = ActionConfig::new(Algebra::T, family, b)?;
    reports.push(check_action_matches_twist(&action, mode, &window)?);
    Ok(reports)
}

fn run_verify_phi(cfg: &RunConfig) -> CliResult<Vec<Report>> {
    let ring = cli_ring();
    let mode = cfg.mode_bound.unwrap_or(3);
    let window = cfg.window(mode + 1, 3, 2, mode)?;
    let b = cfg.b_or(&ring, "symbolic")?;
    let mut reports = vec![check_phi_homomorphism(mode)?];
    for family in selected_families(&ring, cfg, true)? {
        let action = ActionConfig::new(Algebra::T, family, b.clone())?;
        reports.push(check_restriction_consistency(&action, mode, &window)?);
    }
    Ok(reports)
}

fn orbit_action(cfg: &RunConfig) -> CliResult<(ActionConfig, Vector)> {
    let ring = cli_ring();
    let family = build_family(&ring, cfg, false)?;
    let b = cfg.b_or(&ring, "1/3")?;
    let algebra = match &cfg.algebra {
        None => Algebra::R,
        Some(tag) => parse_algebra(tag)?,
    };
    let action = ActionConfig::new(algebra, family.clone(), b)?;
    let seed = match &cfg.seed {
        None => cyclic_vector(&action),
        Some(text) => parse_vector(&family, &ring, text)?,
    };
    Ok((action, seed))
}

fn run_probe_orbit(cfg: &RunConfig) -> CliResult<Vec<Report>> {
    let window = cfg.window(6, 5, 3, 2)?;
    let (action, seed) = orbit_action(cfg)?;
    Ok(vec![orbit_report(&action, &seed, &window, 32)?])
}

fn run_probe_submodule(cfg: &RunConfig) -> CliResult<Vec<Report>> {
    let ring = cli_ring();
    let family = build_family(&ring, cfg, false)?;
    let algebra = match &cfg.algebra {
        None => Algebra::R,
        Some(tag) => parse_algebra(tag)?,
    };
    let default_b = if cfg.candidate.as_deref() == Some("cyclic") { "0" } else { "1/2" };
    let b = cfg.b_or(&ring, default_b)?;
    let action = ActionConfig::new(algebra, family, b)?;
    let window = cfg.window(4, 6, 2, 2)?;
    let candidate: CandidateSpec = match cfg.candidate.as_deref().unwrap_or("cyclic") {
        "cyclic" => candidate_cyclic_span(&action),
        "alpha-line" => candidate_alpha_line(&action, &window)?,
        "even" => candidate_even_part(),
        "even-dt-odd" => candidate_even_plus_dt_odd(),
        other => return schema_err(format!("unknown candidate {other:?}")),
    };
    Ok(vec![submodule_closure(&action, &candidate, &window)?])
}

fn run_probe_identities(cfg: &RunConfig) -> CliResult<Vec<Report>> {
    let ring = cli_ring();
    let mode = cfg.mode_bound.unwrap_or(3);
    let window = cfg.window(4, 0, 0, mode)?;
    let algebra = match &cfg.algebra {
        None => Algebra::R,
        Some(tag) => parse_algebra(tag)?,
    };
    let family = build_family(&ring, cfg, true)?;
    let b = cfg.b_or(&ring, "symbolic")?;
    let action = ActionConfig::new(algebra, family, b)?;
    Ok(vec![check_k_identities(&action, mode, &window)?])
}

fn run_check_iso(cfg: &RunConfig) -> CliResult<Vec<Report>> {
    let mode = cfg.mode_bound.unwrap_or(3);
    let map_window = cfg.window(4, 5, 0, mode)?;
    let which = cfg.map.as_deref().unwrap_or("all");
    let mut reports = Vec::new();
    if matches!(which, "phi" | "all") {
        reports.push(check_intertwiner(&phi_half()?, mode, &map_window)?);
    }
    if matches!(which, "psi" | "all") {
        reports.push(check_intertwiner(&psi_presentation()?, mode, &map_window)?);
    }
    if matches!(which, "psi-quotient" | "all") {
        reports.push(check_intertwiner(&psi_quotient()?, mode, &map_window)?);
    }
    if matches!(which, "space" | "all") {
        let w = WindowSpec::new(4, 5, 0, 2)?;
        reports.push(check_intertwiner_space_trivial(2, &w)?);
    }
    if matches!(which, "witness" | "all") {
        let w = WindowSpec::new(4, 0, 0, 2)?;
        reports.push(witness_non_isomorphism_t(2, &w)?);
    }
    if reports.is_empty() {
        return schema_err(format!(
            "unknown map {which:?} (expected phi, psi, psi-quotient, space, witness, or all)"
        ));
    }
    Ok(reports)
}

// ---------------------------------------------------------------------------
// report-all: the full suite, one section per claim anchor
// ---------------------------------------------------------------------------

type SectionTask = fn() -> CliResult<Vec<Report>>;

fn sec_jacobi() -> CliResult<Vec<Report>> {
    run_verify_algebra(&RunConfig::empty("report-all"))
}

fn sec_realization() -> CliResult<Vec<Report>> {
    let ring = cli_ring();
    let family = Arc::new(FamilySpec::laurent(TPoly::zero()));
    let window = WindowSpec::new(4, 0, 0, 3)?;
    Ok(vec![check_realization(&family, &ring, 3, &window)?])
}

fn sec_module_axioms() -> CliResult<Vec<Report>> {
    run_verify_module(&RunConfig::empty("report-all"))
}

fn sec_twist() -> CliResult<Vec<Report>> {
    run_verify_twist(&RunConfig::empty("report-all"))
}

fn sec_phi() -> CliResult<Vec<Report>> {
    let ring = cli_ring();
    let mut reports = vec![check_phi_homomorphism(3)?];
    let window = WindowSpec::new(5, 3, 2, 4)?;
    let b = SymScalar::param(&ring, "b").expect("b is declared");
    for family in all_families(&ring, true)? {
        let action = ActionConfig::new(Algebra::T, family, b.clone())?;
        reports.push(check_restriction_consistency(&action, 4, &window)?);
    }
    Ok(reports)
}

fn sec_k_identity() -> CliResult<Vec<Report>> {
    run_probe_identities(&RunConfig::empty("report-all"))
}

fn sec_submodule() -> CliResult<Vec<Report>> {
    let mut a = RunConfig::empty("report-all");
    a.candidate = Some("cyclic".into());
    a.alpha = Some("0".into());
    a.b = Some("0".into());

    let mut b = RunConfig::empty("report-all");
    b.candidate = Some("alpha-line".into());
    b.alpha = Some("t".into());
    b.b = Some("1/2".into());
    b.t_bound = Some(6);

    let mut c = RunConfig::empty("report-all");
    c.family = Some("omega".into());
    c.candidate = Some("even-dt-odd".into());
    c.b = Some("1/2".into());

    let mut reports = run_probe_submodule(&a)?;
    reports.extend(run_probe_submodule(&b)?);
    reports.extend(run_probe_submodule(&c)?);
    Ok(reports)
}

fn sec_orbit() -> CliResult<Vec<Report>> {
    let ring = cli_ring();
    let window = WindowSpec::new(6, 5, 3, 2)?;
    let mut reports = Vec::new();
    for family in all_families(&ring, false)? {
        for algebra in [Algebra::R, Algebra::T] {
            for b in ["1/3", "2", "-1"] {
                let action =
                    ActionConfig::new(algebra, family.clone(), parse_b(&ring, b)?)?;
                let seed = cyclic_vector(&action);
                reports.push(orbit_report(&action, &seed, &window, 32)?);
            }
        }
    }
    Ok(reports)
}

fn sec_restricted() -> CliResult<Vec<Report>> {
    let ring = cli_ring();
    let mut cfg = RunConfig::empty("report-all");
    cfg.alpha = Some("1/2".into());
    let family = build_family(&ring, &cfg, false)?;
    let action = ActionConfig::new(Algebra::R, family.clone(), parse_b(&ring, "1/3")?)?;
    let seed = cyclic_vector(&action);
    Ok(vec![restricted_contrast(&action, &seed, 2)?])
}

fn sec_intertwiner_maps() -> CliResult<Vec<Report>> {
    let mut cfg = RunConfig::empty("report-all");
    cfg.map = Some("phi".into());
    let mut reports = run_check_iso(&cfg)?;
    cfg.map = Some("psi".into());
    reports.extend(run_check_iso(&cfg)?);
    cfg.map = Some("psi-quotient".into());
    reports.extend(run_check_iso(&cfg)?);
    Ok(reports)
}

fn sec_intertwiner_space() -> CliResult<Vec<Report>> {
    let mut cfg = RunConfig::empty("report-all");
    cfg.map = Some("space".into());
    run_check_iso(&cfg)
}

fn sec_witness() -> CliResult<Vec<Report>> {
    let mut cfg = RunConfig::empty("report-all");
    cfg.map = Some("witness".into());
    run_check_iso(&cfg)
}

fn sec_mutation() -> CliResult<Vec<Report>> {
    Ok(vec![check_mutation_sensitivity(2)?])
}

fn suite() -> Vec<SectionTask> {
    vec![
        sec_jacobi,
        sec_realization,
        sec_module_axioms,
        sec_twist,
        sec_phi,
        sec_k_identity,
        sec_submodule,
        sec_orbit,
        sec_restricted,
        sec_intertwiner_maps,
        sec_intertwiner_space,
        sec_witness,
        sec_mutation,
    ]
}

/// Runs the suite sections on `threads` workers; the output order is the
/// section order regardless of scheduling, so the report bytes do not
/// depend on the thread count.
fn run_sections(tasks: &[SectionTask], threads: usize) -> CliResult<Vec<Report>> {
    let next = AtomicUsize::new(0);
    let cells: Vec<Mutex<Option<CliResult<Vec<Report>>>>> =
        tasks.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..threads.clamp(1, tasks.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= tasks.len() {
                    break;
                }
                let outcome = (tasks[i])();
                *cells[i].lock().expect("section cell") = Some(outcome);
            });
        }
    });
    let mut all = Vec::new();
    for cell in cells {
        let outcome = cell
            .into_inner()
            .expect("section cell")
            .expect("every section was executed");
        all.extend(outcome?);
    }
    Ok(all)
}

fn thread_count() -> CliResult<usize> {
    match std::env::var("RAMOND_THREADS") {
        Err(std::env::VarError::NotPresent) => Ok(1),
        Err(e) => schema_err(format!("RAMOND_THREADS: {e}")),
        Ok(text) => match text.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => schema_err(format!(
                "RAMOND_THREADS must be a positive integer, got {text:?}"
            )),
        },
    }
}

fn run_report_all(_cfg: &RunConfig) -> CliResult<Vec<Report>> {
    run_sections(&suite(), thread_count()?)
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

fn dispatch(cfg: &RunConfig) -> CliResult<Vec<Report>> {
    match cfg.command {
        "verify-algebra" => run_verify_algebra(cfg),
        "verify-module" => run_verify_module(cfg),
        "verify-twist" => run_verify_twist(cfg),
        "verify-phi" => run_verify_phi(cfg),
        "probe-orbit" => run_probe_orbit(cfg),
        "probe-submodule" => run_probe_submodule(cfg),
        "probe-identities" => run_probe_identities(cfg),
        "check-iso" => run_check_iso(cfg),
        "report-all" => run_report_all(cfg),
        other => schema_err(format!("unknown command {other:?}")),
    }
}

fn main() -> ExitCode {
    let started = Instant::now();
    let cli = Cli::parse();
    let command = cli.command.name();
    let cfg = match merge(command, cli.command.args()) {
        Ok(cfg) => cfg,
        Err(e) => return report_error(e),
    };
    let reports = match dispatch(&cfg) {
        Ok(reports) => reports,
        Err(e) => return report_error(e),
    };
    let body = if cfg.command == "report-all" {
        aggregate_to_json(&reports)
    } else {
        reports_to_json(&reports)
    };
    let footer = timing_footer(started.elapsed().as_millis());
    {
        // A closed downstream pipe (e.g. `ramond … | head`) must not panic;
        // the exit code and any --output file still carry the result.
        use std::io::Write as _;
        let mut out = std::io::stdout().lock();
        let _ = out
            .write_all(body.as_bytes())
            .and_then(|_| out.write_all(footer.as_bytes()));
    }
    if let Some(path) = &cfg.output {
        if let Err(e) = std::fs::write(path, format!("{body}{footer}")) {
            eprintln!("error: cannot write report to {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if reports.iter().all(Report::is_pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn report_error(e: CliError) -> ExitCode {
    match e {
        CliError::Schema(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        CliError::Internal(msg) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
