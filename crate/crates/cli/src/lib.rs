//! Command-line front end for `rank1lab`.
//!
//! [`parse_args`] turns argv into a [`Cli`], [`run`] dispatches it and returns
//! the rendered output together with the process exit code: 0 on success,
//! 1 when a construction stalls, a hypothesis fails or a check comes back
//! negative, 2 for usage and input errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use rank1lab::dynamics::{dynamical_conservative_seq, weak_distance, WeakDistance};
use rank1lab::multipliers::{
    build_avoiding_family, build_avoiding_iei, build_avoiding_rigid, build_avoiding_skyscraper, build_ergodic_heights,
    build_thm41, spec_window, verify_certificate, GapOracle, MultiplierCertificate, Style, Target, VerificationReport,
};
use rank1lab::tower::{self, ConditionKind, ConditionRow};
use rank1lab::zd::{self, GridSpec, LatticeSet, ZdCertificate};
use rank1lab::{CutSpacerSpec, Int, LevelId, SortedIntSet};

#[derive(Parser, Debug)]
#[command(name = "rank1lab", version, about = "Conservative sequences and skyscraper multipliers of rank-one maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format; `build` defaults to json, everything else to text.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Where the transformations come from. Presets are listed before files.
#[derive(Args, Clone, Debug, Default)]
pub struct SpecArgs {
    /// Named preset (hajian_kakutani, infinite_chacon); repeatable.
    #[arg(long)]
    pub preset: Vec<String>,
    /// Spec JSON file; repeatable.
    #[arg(long)]
    pub spec: Vec<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Column heights h_0..h_n.
    Heights {
        #[command(flatten)]
        specs: SpecArgs,
        #[arg(long)]
        stages: usize,
    },
    /// Truncated conservative sequence C^m of a level.
    Consets {
        #[command(flatten)]
        specs: SpecArgs,
        /// Truncation stage m.
        #[arg(long)]
        stages: Option<usize>,
        /// Restrict to [-w, w], choosing the stage automatically.
        #[arg(long)]
        window: Option<Int>,
        /// Level as `stage:height`; base of C_1 by default.
        #[arg(long, value_parser = parse_level)]
        level: Option<LevelId>,
    },
    /// Return times of the base of C_1 computed dynamically, compared with
    /// the combinatorial set.
    Oracle {
        #[command(flatten)]
        specs: SpecArgs,
        #[arg(long)]
        window: Int,
    },
    /// Least ℓ >= min-l with every k·ℓ window (k in the multipliers) empty.
    Gaps {
        #[command(flatten)]
        specs: SpecArgs,
        /// Half-width of each window.
        #[arg(long)]
        window: Int,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        multipliers: Vec<Int>,
        #[arg(long, default_value_t = 1)]
        min_l: Int,
    },
    /// Per-stage evaluation of a sufficient condition.
    VerifyCondition {
        #[command(flatten)]
        specs: SpecArgs,
        #[arg(long)]
        kind: String,
        #[arg(long)]
        upto: usize,
    },
    /// Build a multiplier and its certificate.
    Build {
        #[command(flatten)]
        specs: SpecArgs,
        #[arg(long)]
        style: String,
        #[arg(long)]
        depth: usize,
        /// Pair budget for the ergodic style.
        #[arg(long, default_value_t = 6)]
        budget: usize,
        /// Initial certified window of the target sets.
        #[arg(long, default_value_t = 64)]
        window: Int,
        /// Also write the certificate JSON here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Recheck every fact of a certificate.
    VerifyCert {
        #[arg(long)]
        cert: PathBuf,
        #[command(flatten)]
        specs: SpecArgs,
        /// Target lattice set for a Z^d certificate; the origin by default.
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// Z^d product sets (with --stages) or the Z^d builder (with --depth).
    Zd {
        #[arg(long, value_delimiter = ',')]
        a: Vec<Int>,
        #[arg(long, value_delimiter = ',')]
        heights: Vec<Int>,
        /// Grid JSON file, in place of --a and --heights.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        stages: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
        /// Target lattice set JSON; the origin by default.
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// Enclosure of the truncated weak distance between two maps.
    Distance {
        #[command(flatten)]
        specs: SpecArgs,
        /// Deepest dyadic resolution j.
        #[arg(long, default_value_t = 3)]
        depth: u32,
        /// Number of terms K.
        #[arg(long, default_value_t = 8)]
        terms: usize,
        /// Column depth used for preimages.
        #[arg(long, default_value_t = 8)]
        orbit_depth: usize,
    },
}

fn parse_level(s: &str) -> Result<LevelId, String> {
    let (a, b) = s.split_once(':').ok_or("expected `stage:height`")?;
    let stage = a.trim().parse().map_err(|e| format!("stage: {e}"))?;
    let h = b.trim().parse().map_err(|e| format!("height: {e}"))?;
    Ok(LevelId::new(stage, h))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Input { path: String, source: rank1lab::Error },
    #[error(transparent)]
    Compute(#[from] rank1lab::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Input { .. } => 2,
            CliError::Compute(rank1lab::Error::UnknownPreset(_)) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

/// Rendered output of one invocation.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

pub fn parse_args<I, T>(argv: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(argv)
}

/// Either kind of spec file.
#[derive(Debug)]
pub enum LoadedSpec {
    Tower(CutSpacerSpec),
    Grid(GridSpec),
}

/// Reads a spec file; grid files are recognised by their `a` field.
pub fn load_spec(path: &Path) -> Result<LoadedSpec, CliError> {
    let input = |source| CliError::Input { path: path.display().to_string(), source };
    let text = std::fs::read_to_string(path).map_err(|e| input(rank1lab::Error::Parse(e.to_string())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| input(rank1lab::Error::Parse(e.to_string())))?;
    if value.get("a").is_some() {
        GridSpec::from_json(&text).map(LoadedSpec::Grid).map_err(input)
    } else {
        CutSpacerSpec::from_json(&text).map(LoadedSpec::Tower).map_err(input)
    }
}

fn load_tower(path: &Path) -> Result<CutSpacerSpec, CliError> {
    match load_spec(path)? {
        LoadedSpec::Tower(s) => Ok(s),
        LoadedSpec::Grid(_) => Err(CliError::Usage(format!("{}: expected a cut/spacer spec", path.display()))),
    }
}

fn resolve(specs: &SpecArgs) -> Result<Vec<CutSpacerSpec>, CliError> {
    let mut out = Vec::new();
    for p in &specs.preset {
        out.push(tower::preset(p).map_err(|e| CliError::Usage(e.to_string()))?);
    }
    for path in &specs.spec {
        out.push(load_tower(path)?);
    }
    Ok(out)
}

fn single(specs: &SpecArgs) -> Result<CutSpacerSpec, CliError> {
    let mut all = resolve(specs)?;
    if all.len() != 1 {
        return Err(CliError::Usage(format!("expected exactly one --preset or --spec, got {}", all.len())));
    }
    Ok(all.pop().unwrap())
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serialises");
    s.push('\n');
    s
}

fn ints(xs: &[Int]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Dispatches a parsed command.
pub fn run(cli: &Cli) -> Outcome {
    let mut out = Outcome::default();
    let result = match &cli.command {
        Command::Heights { specs, stages } => heights(specs, *stages, cli.format),
        Command::Consets { specs, stages, window, level } => consets(specs, *stages, *window, *level, cli.format),
        Command::Oracle { specs, window } => oracle(specs, *window, cli.format),
        Command::Gaps { specs, window, multipliers, min_l } => gaps(specs, *window, multipliers, *min_l, cli.format),
        Command::VerifyCondition { specs, kind, upto } => verify_condition(specs, kind, *upto, cli.format),
        Command::Build { specs, style, depth, budget, window, output } => {
            build(specs, style, *depth, *budget, *window, output.as_deref(), cli.format, &mut out)
        }
        Command::VerifyCert { cert, specs, target } => verify_cert(cert, specs, target.as_deref(), cli.format),
        Command::Zd { a, heights, spec, stages, depth, target } => {
            zd_verb(a, heights, spec.as_deref(), *stages, *depth, target.as_deref(), cli.format)
        }
        Command::Distance { specs, depth, terms, orbit_depth } => {
            distance(specs, *depth, *terms, *orbit_depth, cli.format)
        }
    };
    match result {
        Ok((text, code)) => {
            out.stdout.push_str(&text);
            out.code = code;
        }
        Err(e) => {
            let _ = writeln!(out.stderr, "error: {e}");
            out.code = e.exit_code();
        }
    }
    out
}

type Verb = Result<(String, u8), CliError>;

fn heights(specs: &SpecArgs, stages: usize, format: Option<Format>) -> Verb {
    let spec = single(specs)?;
    let hs = tower::heights(&spec, stages)?;
    #[derive(Serialize)]
    struct Out<'a> {
        spec: &'a str,
        heights: &'a [Int],
    }
    let text = match format.unwrap_or(Format::Text) {
        Format::Json => json(&Out { spec: spec.name(), heights: &hs }),
        Format::Csv => {
            let mut s = "n,h\n".to_string();
            for (n, h) in hs.iter().enumerate() {
                let _ = writeln!(s, "{n},{h}");
            }
            s
        }
        Format::Text => hs.iter().enumerate().map(|(n, h)| format!("h_{n} = {h}\n")).collect(),
    };
    Ok((text, 0))
}

fn render_set(label: &str, spec: &str, set: &SortedIntSet, format: Option<Format>) -> String {
    #[derive(Serialize)]
    struct Out<'a> {
        spec: &'a str,
        set: &'a SortedIntSet,
    }
    match format.unwrap_or(Format::Text) {
        Format::Json => json(&Out { spec, set }),
        Format::Csv => format!("n\n{}", set.to_csv()),
        Format::Text => {
            let bound = set.certified_bound().map_or("exact".to_string(), |b| format!("certified on [-{b}, {b}]"));
            format!("{label} ({} elements, {bound})\n{set}\n", set.len())
        }
    }
}

fn consets(
    specs: &SpecArgs,
    stages: Option<usize>,
    window: Option<Int>,
    level: Option<LevelId>,
    format: Option<Format>,
) -> Verb {
    let spec = single(specs)?;
    let level = level.unwrap_or_else(LevelId::base_of_c1);
    level.validate(&spec)?;
    let (set, label) = match (stages, window) {
        (Some(m), None) => (tower::conservative_set_trunc(&spec, level, m)?, format!("C^{m}")),
        (None, Some(w)) => (spec_window(&spec, level, w)?, format!("C ∩ [-{w}, {w}]")),
        (Some(m), Some(w)) => {
            (tower::conservative_set_window(&spec, level, m, w)?.restrict(w), format!("C^{m} ∩ [-{w}, {w}]"))
        }
        (None, None) => return Err(CliError::Usage("consets needs --stages or --window".into())),
    };
    Ok((render_set(&label, spec.name(), &set, format), 0))
}

fn oracle(specs: &SpecArgs, window: Int, format: Option<Format>) -> Verb {
    let spec = single(specs)?;
    let level = LevelId::base_of_c1();
    let dynamical = dynamical_conservative_seq(&spec, level, window)?;
    let combinatorial = spec_window(&spec, level, window)?;
    let matched = dynamical.elements() == combinatorial.elements();
    #[derive(Serialize)]
    struct Out<'a> {
        spec: &'a str,
        window: Int,
        dynamical: &'a [Int],
        combinatorial: &'a [Int],
        #[serde(rename = "match")]
        matched: bool,
    }
    let text = match format.unwrap_or(Format::Text) {
        Format::Json => json(&Out {
            spec: spec.name(),
            window,
            dynamical: dynamical.elements(),
            combinatorial: combinatorial.elements(),
            matched,
        }),
        Format::Csv => {
            let mut s = "n,dynamical,combinatorial\n".to_string();
            for n in dynamical.union(&combinatorial).elements() {
                let _ = writeln!(s, "{n},{},{}", dynamical.contains_stored(*n), combinatorial.contains_stored(*n));
            }
            s
        }
        Format::Text => format!("dynamical:     {dynamical}\ncombinatorial: {combinatorial}\nmatch: {matched}\n"),
    };
    Ok((text, if matched { 0 } else { 1 }))
}

fn gaps(specs: &SpecArgs, half_width: Int, multipliers: &[Int], min_l: Int, format: Option<Format>) -> Verb {
    let spec = single(specs)?;
    let name = spec.name().to_string();
    let start = multipliers.iter().max().copied().unwrap_or(1).saturating_mul(min_l).saturating_add(half_width);
    let mut o = GapOracle::new(Target::spec(name.clone(), spec, LevelId::base_of_c1()), start.max(1))?;
    let l = o.query(half_width, multipliers, min_l)?;
    #[derive(Serialize)]
    struct Out<'a> {
        spec: &'a str,
        half_width: Int,
        multipliers: &'a [Int],
        min_l: Int,
        l: Int,
        certified_window: Int,
    }
    let text = match format.unwrap_or(Format::Text) {
        Format::Json => json(&Out { spec: &name, half_width, multipliers, min_l, l, certified_window: o.window() }),
        Format::Csv => format!("half_width,multipliers,min_l,l\n{half_width},\"{}\",{min_l},{l}\n", ints(multipliers)),
        Format::Text => {
            let mut s = format!("l = {l}\n");
            for k in multipliers {
                let _ = writeln!(s, "  [{}, {}] is empty", k * l - half_width, k * l + half_width);
            }
            s
        }
    };
    Ok((text, 0))
}

fn verify_condition(specs: &SpecArgs, kind: &str, upto: usize, format: Option<Format>) -> Verb {
    let kind: ConditionKind = kind.parse().map_err(|e: rank1lab::Error| CliError::Usage(e.to_string()))?;
    let all = resolve(specs)?;
    if all.is_empty() {
        return Err(CliError::Usage("verify-condition needs --preset or --spec".into()));
    }
    let mut reports = Vec::new();
    for spec in &all {
        reports.push((spec.name().to_string(), tower::check_condition(spec, kind, upto)?));
    }
    let holds = reports.iter().all(|(_, rows)| rows.iter().all(|r| r.holds));
    #[derive(Serialize)]
    struct Out<'a> {
        spec: &'a str,
        kind: ConditionKind,
        rows: &'a [ConditionRow],
        all_hold: bool,
    }
    let text = match format.unwrap_or(Format::Text) {
        Format::Json => {
            let docs: Vec<_> = reports
                .iter()
                .map(|(n, rows)| Out { spec: n, kind, rows, all_hold: rows.iter().all(|r| r.holds) })
                .collect();
            json(&docs)
        }
        Format::Csv => {
            let mut s = "spec,stage,lhs,rhs,holds\n".to_string();
            for (n, rows) in &reports {
                for r in rows {
                    let _ = writeln!(s, "{n},{},{},{},{}", r.stage, r.lhs, r.rhs, r.holds);
                }
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (n, rows) in &reports {
                let _ = writeln!(s, "{n}\n  stage          lhs          rhs  holds");
                for r in rows {
                    let _ = writeln!(s, "  {:>5} {:>12} {:>12}  {}", r.stage, r.lhs, r.rhs, r.holds);
                }
            }
            s
        }
    };
    Ok((text, if holds { 0 } else { 1 }))
}

fn render_cert(cert: &MultiplierCertificate, format: Option<Format>) -> String {
    match format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut s = cert.to_json();
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = "index,kind,verified,claim\n".to_string();
            for (i, f) in cert.facts.iter().enumerate() {
                let _ = writeln!(s, "{i},{},{},\"{}\"", f.body.kind(), f.verified, f.claim.replace('"', "\"\""));
            }
            s
        }
        Format::Text => {
            let mut s = format!("style: {:?}\nheights: {}\n", cert.style, ints(&cert.heights));
            for (n, b) in cert.blocks.iter().enumerate() {
                let _ = writeln!(s, "blocks {n}: {}", ints(b));
            }
            for f in &cert.facts {
                let _ = writeln!(s, "[{}] {}", if f.verified { "ok" } else { "??" }, f.claim);
            }
            s
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn build(
    specs: &SpecArgs,
    style: &str,
    depth: usize,
    budget: usize,
    window: Int,
    output: Option<&Path>,
    format: Option<Format>,
    out: &mut Outcome,
) -> Verb {
    let style: Style = style.parse().map_err(|e: rank1lab::Error| CliError::Usage(e.to_string()))?;
    if depth == 0 {
        return Err(CliError::Usage("--depth must be positive".into()));
    }
    let all = resolve(specs)?;
    let oracles = |all: Vec<CutSpacerSpec>| -> Result<Vec<GapOracle>, CliError> {
        all.into_iter()
            .map(|s| {
                let id = s.name().to_string();
                Ok(GapOracle::new(Target::spec(id, s, LevelId::base_of_c1()), window.max(1))?)
            })
            .collect()
    };
    let built = match style {
        Style::Family => {
            if all.is_empty() {
                return Err(CliError::Usage("family needs at least one target".into()));
            }
            build_avoiding_family(&mut oracles(all)?, depth)
        }
        _ => {
            if all.len() != 1 {
                return Err(CliError::Usage(format!("style needs exactly one target, got {}", all.len())));
            }
            let spec = all.into_iter().next().unwrap();
            match style {
                Style::Thm41 => build_thm41(&spec, depth),
                Style::Ergodic => build_ergodic_heights(&spec, budget, depth),
                _ => {
                    let mut o = oracles(vec![spec])?.pop().unwrap();
                    match style {
                        Style::Plain => build_avoiding_skyscraper(&mut o, depth),
                        Style::Rigid => build_avoiding_rigid(&mut o, depth),
                        _ => build_avoiding_iei(&mut o, depth),
                    }
                }
            }
        }
    };
    let save = |cert: &MultiplierCertificate| -> Result<(), CliError> {
        if let Some(p) = output {
            std::fs::write(p, cert.to_json()).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
        }
        Ok(())
    };
    match built {
        Ok(cert) => {
            save(&cert)?;
            Ok((render_cert(&cert, format), 0))
        }
        Err(e) => {
            if let Some(partial) = e.partial_certificate() {
                save(partial)?;
                out.stdout.push_str(&render_cert(partial, format));
            }
            Err(e.into())
        }
    }
}

fn render_report(report: &VerificationReport, format: Option<Format>) -> String {
    match format.unwrap_or(Format::Text) {
        Format::Json => json(report),
        Format::Csv => {
            let mut s = "index,kind,passed,detail\n".to_string();
            for c in &report.checks {
                let _ = writeln!(s, "{},{},{},\"{}\"", c.index, c.kind, c.passed, c.detail.replace('"', "\"\""));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for w in &report.warnings {
                let _ = writeln!(s, "warning: {w}");
            }
            for c in &report.checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                let _ = write!(s, "{status} #{} {}: {}", c.index, c.kind, c.claim);
                if !c.passed {
                    let _ = write!(s, " ({})", c.detail);
                }
                s.push('\n');
            }
            let failed = report.failures().count();
            let _ = writeln!(s, "{} of {} facts passed", report.checks.len() - failed, report.checks.len());
            s
        }
    }
}

fn load_lattice(path: Option<&Path>, d: usize) -> Result<LatticeSet, CliError> {
    match path {
        None => Ok(LatticeSet::origin(d)),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
            LatticeSet::from_json(&text).map_err(|source| CliError::Input { path: p.display().to_string(), source })
        }
    }
}

fn verify_cert(path: &Path, specs: &SpecArgs, target: Option<&Path>, format: Option<Format>) -> Verb {
    let input = |source| CliError::Input { path: path.display().to_string(), source };
    let text = std::fs::read_to_string(path).map_err(|e| input(rank1lab::Error::Parse(e.to_string())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| input(rank1lab::Error::Parse(e.to_string())))?;
    let report = if value.get("grid").is_some() {
        let cert = ZdCertificate::from_json(&text).map_err(input)?;
        let lattice = load_lattice(target, cert.grid.d)?;
        zd::verify_zd_certificate(&cert, &lattice)
    } else {
        let cert = MultiplierCertificate::from_json(&text).map_err(input)?;
        let mut targets: Vec<Target> = resolve(specs)?
            .into_iter()
            .map(|s| Target::spec(s.name().to_string(), s, LevelId::base_of_c1()))
            .collect();
        for id in &cert.target_ids {
            if !targets.iter().any(|t| &t.id == id) {
                if let Ok(s) = tower::preset(id) {
                    targets.push(Target::spec(id.clone(), s, LevelId::base_of_c1()));
                }
            }
        }
        verify_certificate(&cert, &targets)
    };
    Ok((render_report(&report, format), if report.all_passed() { 0 } else { 1 }))
}

fn zd_verb(
    a: &[Int],
    heights: &[Int],
    spec: Option<&Path>,
    stages: Option<usize>,
    depth: Option<usize>,
    target: Option<&Path>,
    format: Option<Format>,
) -> Verb {
    let grid = match spec {
        Some(p) => match load_spec(p)? {
            LoadedSpec::Grid(g) => g,
            LoadedSpec::Tower(_) => return Err(CliError::Usage(format!("{}: expected a grid spec", p.display()))),
        },
        None => {
            if a.is_empty() {
                return Err(CliError::Usage("zd needs --a or --spec".into()));
            }
            GridSpec::new(a.to_vec(), heights.to_vec()).map_err(|e| CliError::Usage(e.to_string()))?
        }
    };
    match (stages, depth) {
        (Some(m), None) => {
            let set = zd::zd_conservative_set(&grid, m)?;
            let points = set.points()?;
            let text = match format.unwrap_or(Format::Text) {
                Format::Json => json(&points),
                Format::Csv => {
                    let mut s = (0..grid.d).map(|i| format!("x{}", i + 1)).collect::<Vec<_>>().join(",");
                    s.push('\n');
                    for p in &points {
                        let _ = writeln!(s, "{}", ints(p));
                    }
                    s
                }
                Format::Text => {
                    let mut s = format!("C^{m}: {} points\n", points.len());
                    for i in 0..grid.d {
                        let _ = writeln!(s, "  factor {}: {}", i + 1, set.projection(i));
                    }
                    s
                }
            };
            Ok((text, 0))
        }
        (None, Some(m)) => {
            let lattice = load_lattice(target, grid.d)?;
            let id = target.map_or("origin".to_string(), |p| p.display().to_string());
            let (built, cert) = zd::build_zd_skyscraper(&lattice, &id, &grid.a, m)?;
            let text = match format.unwrap_or(Format::Json) {
                Format::Json => {
                    let mut s = cert.to_json();
                    s.push('\n');
                    s
                }
                Format::Csv => {
                    let mut s = "stage,radius,verified\n".to_string();
                    for f in &cert.facts {
                        let _ = writeln!(s, "{},{},{}", f.stage, f.radius, f.verified);
                    }
                    s
                }
                Format::Text => {
                    let mut s = format!("heights: {}\n", ints(&built.heights));
                    for f in &cert.facts {
                        let _ = writeln!(s, "[{}] {}", if f.verified { "ok" } else { "??" }, f.claim);
                    }
                    s
                }
            };
            Ok((text, 0))
        }
        _ => Err(CliError::Usage("zd needs exactly one of --stages or --depth".into())),
    }
}

fn distance(specs: &SpecArgs, depth: u32, terms: usize, orbit_depth: usize, format: Option<Format>) -> Verb {
    let all = resolve(specs)?;
    let [t, s] = <[CutSpacerSpec; 2]>::try_from(all)
        .map_err(|v| CliError::Usage(format!("distance needs two maps, got {}", v.len())))?;
    let d: WeakDistance = weak_distance(&t, &s, depth, terms, orbit_depth)?;
    let (lo, hi) = (rank1lab::rational::to_text(&d.lower), rank1lab::rational::to_text(&d.upper));
    let text = match format.unwrap_or(Format::Text) {
        Format::Json => json(&d),
        Format::Csv => format!("lower,upper,terms\n{lo},{hi},{}\n", d.terms),
        Format::Text => format!(
            "d({}, {}) in [{lo}, {hi}] over {} terms\nenumeration: {}\n",
            t.name(),
            s.name(),
            d.terms,
            d.enumeration
        ),
    };
    Ok((text, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_documented_forms() {
        let c = parse_args(["rank1lab", "heights", "--preset", "hajian_kakutani", "--stages", "3"]).unwrap();
        assert!(matches!(c.command, Command::Heights { stages: 3, .. }));
        let c = parse_args(["rank1lab", "build", "--style", "thm41", "--spec", "hk.json", "--depth", "4"]).unwrap();
        assert!(matches!(c.command, Command::Build { depth: 4, .. }));
    }

    #[test]
    fn missing_value_is_a_usage_error() {
        let e = parse_args(["rank1lab", "heights", "--stages"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = parse_args(["rank1lab", "heights", "--bogus", "1"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn level_syntax() {
        assert_eq!(parse_level("2:5").unwrap(), LevelId::new(2, 5));
        assert!(parse_level("2").is_err());
    }

    #[test]
    fn heights_text() {
        let c = parse_args(["rank1lab", "heights", "--preset", "hajian_kakutani", "--stages", "2"]).unwrap();
        let o = run(&c);
        assert_eq!(o.code, 0);
        assert_eq!(o.stdout, "h_0 = 1\nh_1 = 4\nh_2 = 16\n");
    }

    #[test]
    fn wrong_number_of_targets() {
        let c = parse_args(["rank1lab", "heights", "--stages", "2"]).unwrap();
        assert_eq!(run(&c).code, 2);
    }
}
