//! Command-line front end. Flags override values from `--config`.
//!
//! Exit codes: 0 when every non-informational verdict passes, 1 for failed
//! verdicts and computation errors, 2 for usage and configuration errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::darboux::{
    component_vs_determinant, iterate_chain, iterated_v, max_relative_difference, nfold_v, onefold_v, residual_family,
    DarbouxChain, FormulaVariant, IterationRule, SpectralPoint,
};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::lax::{gauge_laurent, lax_a_dense, lax_b_dense, split_residual, term_scale, zero_curvature_residual_at, LaxFrame, PiiParams};
use crate::pauli::{conjugate, pauli, pauli_decompose, GaugeDirection, C64, ONE, ZERO};
use crate::potential::{Potential, SmoothPotential};
use crate::report::{report_csv, write_text, write_verdicts_json, ChainRecord, RunManifest, VerdictRecord};
use crate::seeds::{
    pii_residual, rational_pii_solution, residual_from_samples, riccati_airy_solution, ResidualReport, SeedDescriptor,
};
use crate::selftest;
use crate::wronskian::RowLayout;

#[derive(Debug, Parser)]
#[command(name = "piilab", version, about = "Painlevé II verification laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Zero-curvature Laurent residual of a seed over a grid.
    VerifyZc(RunArgs),
    /// Both gauge conjugation directions and frame invariance of the residual.
    GaugeCheck(RunArgs),
    /// One-fold or N-fold Darboux candidates and their PII residuals.
    Darboux(RunArgs),
    /// PII residual of a seed.
    Residual(RunArgs),
    /// Samples of a ground-truth solution with its residual.
    Oracle(OracleArgs),
    /// The full acceptance suite.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// TOML file with any of the keys below; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// zero, rational:n, airy or file:path.
    #[arg(long)]
    pub seed: Option<String>,
    /// `re` or `re,im`. Defaults to the seed's own α.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Cubic coefficient of the residual.
    #[arg(long, allow_hyphen_values = true)]
    pub cubic: Option<f64>,
    /// `x0:x1:n`, endpoints included.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Spectral value `re,im`; repeat for a chain.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Vec<String>,
    /// `X0,Y0` or `reX0,imX0,reY0,imY0`; once for all λ or once per λ.
    #[arg(long, allow_hyphen_values = true)]
    pub ic: Vec<String>,
    /// Extra spectral value for component diagnostics, `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub generic: Option<String>,
    /// ratio, logderiv, remark or nfold.
    #[arg(long)]
    pub variant: Option<String>,
    /// old or gauged.
    #[arg(long)]
    pub frame: Option<String>,
    /// Directory for CSV and JSON artifacts. Without it the CSV goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[arg(long, conflicts_with = "airy")]
    pub rational: Option<usize>,
    /// Riccati/Airy solution at α = 1/2; `--ic` sets `(φ, φ′)` at the left end.
    #[arg(long)]
    pub airy: bool,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value = "selftest-out")]
    pub out: PathBuf,
}

/// Keys accepted in a `--config` file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<String>,
    pub alpha: Option<String>,
    pub cubic: Option<f64>,
    pub grid: Option<String>,
    pub lambda: Option<Vec<String>>,
    pub ic: Option<Vec<String>>,
    pub generic: Option<String>,
    pub variant: Option<String>,
    pub frame: Option<String>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Error::Parse(format!("config {}: {e}", path.display())))
    }
}

/// Fully resolved inputs of one run. The output directory is left out so
/// the digest only depends on what is computed.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub seed: SeedDescriptor,
    pub params: PiiParams,
    pub grid: Grid,
    pub points: Vec<SpectralPoint>,
    pub generic: Option<SpectralPoint>,
    pub variant: Option<String>,
    pub frame: LaxFrame,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

fn parse_numbers(text: &str, what: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad {what} {text:?}: {e}")))
        })
        .collect()
}

/// `re` or `re,im`.
pub fn parse_complex(text: &str) -> Result<C64> {
    match parse_numbers(text, "complex number")?.as_slice() {
        [re] => Ok(C64::new(*re, 0.0)),
        [re, im] => Ok(C64::new(*re, *im)),
        _ => Err(Error::Parse(format!("complex numbers are re or re,im, got {text:?}"))),
    }
}

/// `a,b` (real pair) or `a,b,c,d` (two complex numbers).
pub fn parse_ic(text: &str) -> Result<[C64; 2]> {
    match parse_numbers(text, "initial condition")?.as_slice() {
        [a, b] => Ok([C64::new(*a, 0.0), C64::new(*b, 0.0)]),
        [a, b, c, d] => Ok([C64::new(*a, *b), C64::new(*c, *d)]),
        _ => Err(Error::Parse(format!("initial conditions take 2 or 4 numbers, got {text:?}"))),
    }
}

const DEFAULT_IC: [C64; 2] = [ONE, ONE];

fn seed_alpha(seed: &SeedDescriptor) -> C64 {
    match seed {
        SeedDescriptor::Zero => ZERO,
        SeedDescriptor::Rational { n } => C64::new(*n as f64, 0.0),
        SeedDescriptor::Airy { .. } => C64::new(0.5, 0.0),
    }
}

impl RunConfig {
    pub fn resolve(command: &str, args: &RunArgs, default_grid: &str) -> Result<RunConfig> {
        let file = match &args.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let seed_text = args.seed.clone().or(file.seed).unwrap_or_else(|| "zero".into());
        let seed = SeedDescriptor::parse(&seed_text)?;
        let alpha = match args.alpha.clone().or(file.alpha) {
            Some(a) => parse_complex(&a)?,
            None => seed_alpha(&seed),
        };
        let cubic = args.cubic.or(file.cubic).unwrap_or(PiiParams::DERIVED_CUBIC);
        if !cubic.is_finite() {
            return Err(Error::Argument("cubic coefficient must be finite".into()));
        }
        let params = PiiParams::new(alpha).with_cubic(cubic);
        let grid = Grid::parse(&args.grid.clone().or(file.grid).unwrap_or_else(|| default_grid.into()))?;
        let lambdas = if args.lambda.is_empty() { file.lambda.unwrap_or_default() } else { args.lambda.clone() };
        let ics = if args.ic.is_empty() { file.ic.unwrap_or_default() } else { args.ic.clone() };
        let lambdas = lambdas.iter().map(|l| parse_complex(l)).collect::<Result<Vec<_>>>()?;
        let ics = ics.iter().map(|s| parse_ic(s)).collect::<Result<Vec<_>>>()?;
        let ic_for = |k: usize| -> Result<[C64; 2]> {
            match ics.len() {
                0 => Ok(DEFAULT_IC),
                1 => Ok(ics[0]),
                n if n == lambdas.len() => Ok(ics[k]),
                n => Err(Error::Argument(format!("{n} initial conditions given for {} spectral values", lambdas.len()))),
            }
        };
        let points = (0..lambdas.len())
            .map(|k| Ok(SpectralPoint::new(lambdas[k], ic_for(k)?)))
            .collect::<Result<Vec<_>>>()?;
        let generic = match args.generic.clone().or(file.generic) {
            Some(g) => Some(SpectralPoint::new(parse_complex(&g)?, DEFAULT_IC)),
            None => None,
        };
        if alpha != ZERO && points.iter().chain(&generic).any(|p| p.lambda == ZERO) {
            return Err(Error::Argument("α ≠ 0 requires every λ to be nonzero".into()));
        }
        let variant = args.variant.clone().or(file.variant);
        let frame = args.frame.clone().or(file.frame).map(|f| f.parse()).transpose()?.unwrap_or(LaxFrame::Gauged);
        Ok(RunConfig {
            command: command.into(),
            seed,
            params,
            grid,
            points,
            generic,
            variant,
            frame,
            out: args.out.clone().or(file.out),
        })
    }

    fn manifest(&self) -> RunManifest {
        let mut m = RunManifest::new(&self.command, self)
            .with_grid(&self.grid)
            .with_params(&self.params)
            .with_seed(self.seed.to_json());
        if !self.points.is_empty() {
            m = m.with_chain(ChainRecord {
                lambda: self.points.iter().map(|p| [p.lambda.re, p.lambda.im]).collect(),
                ic: self
                    .points
                    .iter()
                    .map(|p| [[p.ic[0].re, p.ic[0].im], [p.ic[1].re, p.ic[1].im]])
                    .collect(),
                variant: self.variant.clone().unwrap_or_default(),
            });
        }
        m
    }
}

/// What a command produced: its CSV (if any), verdicts and free text.
struct Outcome {
    csv: Option<String>,
    verdicts: Vec<VerdictRecord>,
    text: String,
}

fn emit(cfg: &RunConfig, outcome: &Outcome) -> Result<()> {
    let stderr = &mut std::io::stderr().lock();
    for v in &outcome.verdicts {
        let _ = writeln!(stderr, "{}", v.summary_line());
    }
    match &cfg.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            if let Some(csv) = &outcome.csv {
                write_text(&dir.join(format!("{}.csv", cfg.command)), csv)?;
            }
            write_verdicts_json(&dir.join("verdicts.json"), &cfg.manifest(), &outcome.verdicts)?;
            if !outcome.text.is_empty() {
                print!("{}", outcome.text);
            }
        }
        None => {
            let stdout = &mut std::io::stdout().lock();
            let _ = stdout.write_all(outcome.text.as_bytes());
            if let Some(csv) = &outcome.csv {
                let _ = stdout.write_all(csv.as_bytes());
            }
        }
    }
    Ok(())
}

fn build_seed(cfg: &RunConfig) -> Result<Box<dyn SmoothPotential>> {
    cfg.seed.build(&cfg.grid)
}

fn residual_verdict(name: &str, rep: &ResidualReport, threshold: f64) -> VerdictRecord {
    VerdictRecord::below(name, rep.sup_norm, threshold).with_masked_fraction(rep.masked_fraction)
}

fn verify_zc(cfg: &RunConfig) -> Result<Outcome> {
    let seed = build_seed(cfg)?;
    let (mut off, mut leak, mut coeff, mut sup) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let n = cfg.grid.len();
    let mut implied = Vec::with_capacity(n);
    let mut masked = Vec::with_capacity(n);
    let mut vs = Vec::with_capacity(n);
    for x in cfg.grid.points() {
        let jet = seed.jet(x);
        vs.push(jet.v);
        if seed.is_masked(x) {
            implied.push(ZERO);
            masked.push(true);
            continue;
        }
        let res = zero_curvature_residual_at(&jet, x, &cfg.params, cfg.frame)?;
        let s = split_residual(&res, &jet, x, &cfg.params, cfg.frame);
        let r = cfg.params.residual(x, jet.v, jet.d2v.unwrap_or(ZERO));
        let scale = s.scale.max(f64::MIN_POSITIVE);
        off = off.max(s.off_power / scale);
        leak = leak.max(s.leakage / scale);
        coeff = coeff.max((s.direction_coeff + r * 2.0).norm() / (r.norm() * 2.0).max(s.scale).max(f64::MIN_POSITIVE));
        sup = sup.max(s.implied_residual().norm());
        implied.push(s.implied_residual());
        masked.push(false);
    }
    let unmasked = masked.iter().filter(|m| !**m).count();
    if unmasked == 0 {
        return Err(Error::EmptyDomain("seed is masked on the whole grid".into()));
    }
    let fraction = 1.0 - unmasked as f64 / n as f64;
    let report = ResidualReport {
        grid: cfg.grid,
        params: cfg.params,
        v: vs,
        residual: implied,
        masked,
        sup_norm: sup,
        l2_norm: f64::NAN,
        masked_fraction: fraction,
        d2v_analytic: true,
    };
    let verdicts = vec![
        VerdictRecord::below("zero-curvature-off-power", off, 1e-12).with_masked_fraction(fraction),
        VerdictRecord::below("zero-curvature-direction-leakage", leak, 1e-12),
        VerdictRecord::below("power0-equals-minus-two-residual", coeff, 1e-10),
        VerdictRecord::informational("implied-pii-residual-sup", Some(sup)),
    ];
    Ok(Outcome {
        csv: Some(report_csv(&report)),
        verdicts,
        text: String::new(),
    })
}

fn gauge_check(cfg: &RunConfig) -> Result<Outcome> {
    let seed = build_seed(cfg)?;
    let mut text = String::new();
    for (dir, name) in [(GaugeDirection::Inverse, "G⁻¹·σ·G"), (GaugeDirection::Forward, "G·σ·G⁻¹")] {
        text.push_str(name);
        for k in 1..=3 {
            let c = pauli_decompose(&conjugate(&pauli(k)?, dir)).as_array();
            let image = (1..=3).find(|j| c[*j] == ONE).map_or("?".to_string(), |j| format!("σ{j}"));
            text.push_str(&format!("  σ{k}→{image}"));
        }
        text.push('\n');
    }
    let lambdas: Vec<C64> = if cfg.points.is_empty() {
        vec![C64::new(1.0, 0.0), C64::new(0.5, 0.3)]
    } else {
        cfg.points.iter().map(|p| p.lambda).collect()
    };
    let (mut inverse, mut forward, mut invariance) = (0.0f64, f64::INFINITY, 0.0f64);
    for x in cfg.grid.points() {
        if seed.is_masked(x) {
            continue;
        }
        let jet = seed.jet(x);
        for &l in &lambdas {
            if l == ZERO {
                continue;
            }
            let old_a = lax_a_dense(&jet, x, &cfg.params, LaxFrame::Old, l)?;
            let new_a = lax_a_dense(&jet, x, &cfg.params, LaxFrame::Gauged, l)?;
            let old_b = lax_b_dense(&jet, LaxFrame::Old, l);
            let new_b = lax_b_dense(&jet, LaxFrame::Gauged, l);
            let scale = 1.0 + new_a.max_abs();
            let err = |d| (conjugate(&old_a, d).max_abs_diff(&new_a) / scale).max(conjugate(&old_b, d).max_abs_diff(&new_b) / scale);
            inverse = inverse.max(err(GaugeDirection::Inverse));
            forward = forward.min(err(GaugeDirection::Forward));
        }
        if jet.d2v.is_some() {
            let old = zero_curvature_residual_at(&jet, x, &cfg.params, LaxFrame::Old)?;
            let new = zero_curvature_residual_at(&jet, x, &cfg.params, LaxFrame::Gauged)?;
            let d = (&gauge_laurent(&old) - &new).max_abs() / term_scale(&jet, x, &cfg.params).max(f64::MIN_POSITIVE);
            invariance = invariance.max(d);
        }
    }
    let verdicts = vec![
        VerdictRecord::below("inverse-conjugation-matches-gauged-pair", inverse, 1e-13),
        VerdictRecord::above("forward-conjugation-mismatch", forward, 1e-3),
        VerdictRecord::below("residual-frame-invariance", invariance, 1e-12),
    ];
    Ok(Outcome {
        csv: None,
        verdicts,
        text,
    })
}

fn darboux(cfg: &RunConfig) -> Result<Outcome> {
    if cfg.points.is_empty() {
        return Err(Error::Argument("darboux needs at least one --lambda".into()));
    }
    let n = cfg.points.len();
    let variant = cfg.variant.clone().unwrap_or_else(|| if n > 1 { "nfold".into() } else { "logderiv".into() });
    let onefold = match variant.as_str() {
        "nfold" => None,
        v => Some(v.parse::<FormulaVariant>()?),
    };
    let seed = build_seed(cfg)?;
    let chain = DarbouxChain::new(seed.as_ref(), cfg.params, cfg.points.clone(), cfg.generic, &cfg.grid)?;
    let cand = match onefold {
        Some(v) => onefold_v(&chain, v)?,
        None => nfold_v(&chain, n)?,
    };
    let [minus, at, plus] = residual_family(cand.samples(), &cfg.params)?;
    let mut verdicts = vec![
        VerdictRecord::informational("pii-residual-sup", Some(at.sup_norm)).with_masked_fraction(at.masked_fraction),
        VerdictRecord::informational("pii-residual-sup-alpha-minus-1", Some(minus.sup_norm)),
        VerdictRecord::informational("pii-residual-sup-alpha-plus-1", Some(plus.sup_norm)),
    ];
    let zero_seed = cfg.seed == SeedDescriptor::Zero && cfg.params.alpha == ZERO && cfg.params.cubic_coeff == 2.0;
    if let (true, Some(v)) = (zero_seed, onefold) {
        if v == FormulaVariant::Remark {
            let zero = cand.samples().v.iter().all(|z| *z == ZERO);
            verdicts.push(VerdictRecord::boolean("remark-variant-vanishes", zero));
        } else {
            let (dev, _) = selftest::closed_form_deviation(&chain, v)?;
            verdicts.push(
                VerdictRecord::below("residual-matches-closed-form", dev, 1e-8)
                    .with_note("the candidate's nonzero residual is the expected profile"),
            );
        }
    }
    if onefold.is_none() && n >= 2 {
        let levels = iterate_chain(&chain)?;
        let acc = iterated_v(&chain, &levels, n, IterationRule::Accumulated)?;
        let lit = iterated_v(&chain, &levels, n, IterationRule::Literal)?;
        let d_acc = max_relative_difference(cand.samples(), acc.samples()).unwrap_or(f64::INFINITY);
        let d_lit = max_relative_difference(cand.samples(), lit.samples()).unwrap_or(f64::INFINITY);
        verdicts.push(VerdictRecord::informational("nfold-vs-accumulated-iteration", Some(d_acc)));
        verdicts.push(VerdictRecord::informational("nfold-vs-literal-iteration", Some(d_lit)));
        if chain.generic().is_some() {
            for (layout, name) in [(RowLayout::Displayed, "displayed"), (RowLayout::Alternating, "alternating")] {
                for k in 1..=n {
                    let c = component_vs_determinant(&chain, &levels, k, layout)?;
                    verdicts.push(VerdictRecord::informational(
                        format!("components-{name}-level-{k}"),
                        Some(c.x_error.max(c.y_error)),
                    ));
                }
            }
        }
    }
    Ok(Outcome {
        csv: Some(report_csv(&at)),
        verdicts,
        text: String::new(),
    })
}

fn residual(cfg: &RunConfig) -> Result<Outcome> {
    let seed = build_seed(cfg)?;
    let rep = pii_residual(seed.as_ref(), &cfg.params, &cfg.grid)?;
    Ok(Outcome {
        verdicts: vec![residual_verdict("pii-residual", &rep, 1e-8)],
        csv: Some(report_csv(&rep)),
        text: String::new(),
    })
}

fn oracle(args: &OracleArgs, cfg: &mut RunConfig) -> Result<Outcome> {
    let explicit_alpha = args.run.alpha.is_some()
        || args
            .run
            .config
            .as_ref()
            .map(|p| FileConfig::load(p).map(|f| f.alpha.is_some()))
            .transpose()?
            .unwrap_or(false);
    let (pot, alpha, seed): (Box<dyn Potential>, f64, SeedDescriptor) = match (args.rational, args.airy) {
        (Some(n), false) => (Box::new(rational_pii_solution(n)?), n as f64, SeedDescriptor::Rational { n }),
        (None, true) => {
            let ic = match args.run.ic.first() {
                Some(text) => parse_ic(text)?,
                None => [ONE, ZERO],
            };
            let desc = SeedDescriptor::Airy {
                ic: [[ic[0].re, ic[0].im], [ic[1].re, ic[1].im]],
            };
            (Box::new(riccati_airy_solution(ic, &cfg.grid)?), 0.5, desc)
        }
        _ => return Err(Error::Argument("oracle needs exactly one of --rational n or --airy".into())),
    };
    cfg.seed = seed;
    if !explicit_alpha {
        cfg.params.alpha = C64::new(alpha, 0.0);
    }
    let rep = residual_from_samples(&pot.sample(&cfg.grid)?, &cfg.params)?;
    Ok(Outcome {
        verdicts: vec![residual_verdict("oracle-residual", &rep, 1e-8)],
        csv: Some(report_csv(&rep)),
        text: String::new(),
    })
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Argument(_) | Error::Parse(_) => 2,
        _ => 1,
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    let (cfg, outcome) = match &cli.command {
        Command::Selftest(a) => {
            let criteria = selftest::run_selftest_with_determinism(&a.out)?;
            print!("{}", selftest::summary(&criteria));
            return Ok(if criteria.iter().all(|c| c.passed()) { 0 } else { 1 });
        }
        Command::VerifyZc(a) => {
            let cfg = RunConfig::resolve("verify-zc", a, "-5:5:1001")?;
            let o = verify_zc(&cfg)?;
            (cfg, o)
        }
        Command::GaugeCheck(a) => {
            let cfg = RunConfig::resolve("gauge-check", a, "-5:5:101")?;
            let o = gauge_check(&cfg)?;
            (cfg, o)
        }
        Command::Darboux(a) => {
            let cfg = RunConfig::resolve("darboux", a, "0.1:3:2901")?;
            let o = darboux(&cfg)?;
            (cfg, o)
        }
        Command::Residual(a) => {
            let cfg = RunConfig::resolve("residual", a, "-5:5:1001")?;
            let o = residual(&cfg)?;
            (cfg, o)
        }
        Command::Oracle(a) => {
            let mut cfg = RunConfig::resolve("oracle", &a.run, "-5:5:1001")?;
            let o = oracle(a, &mut cfg)?;
            (cfg, o)
        }
    };
    emit(&cfg, &outcome)?;
    Ok(if outcome.verdicts.iter().any(|v| v.failed()) { 1 } else { 0 })
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("piilab: {e}");
            exit_code_for(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_parsing() {
        assert_eq!(parse_complex("1,-2").unwrap(), C64::new(1.0, -2.0));
        assert_eq!(parse_complex("0.5").unwrap(), C64::new(0.5, 0.0));
        assert!(parse_complex("1,2,3").is_err());
        assert_eq!(parse_ic("1,0").unwrap(), [ONE, ZERO]);
        assert_eq!(parse_ic("1,2,3,4").unwrap(), [C64::new(1.0, 2.0), C64::new(3.0, 4.0)]);
        assert!(parse_ic("1").is_err());
    }

    #[test]
    fn flags_override_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "seed = \"rational:2\"\ngrid = \"1:2:11\"\nlambda = [\"1,0\"]\n").unwrap();
        let args = RunArgs {
            config: Some(path.clone()),
            grid: Some("1:3:21".into()),
            ..RunArgs::default()
        };
        let cfg = RunConfig::resolve("residual", &args, "-5:5:11").unwrap();
        assert_eq!(cfg.seed, SeedDescriptor::Rational { n: 2 });
        assert_eq!(cfg.grid.len(), 21);
        assert_eq!(cfg.params.alpha, C64::new(2.0, 0.0));
        assert_eq!(cfg.points.len(), 1);
        std::fs::write(&path, "sead = \"zero\"\n").unwrap();
        assert!(matches!(RunConfig::resolve("residual", &args, "-5:5:11"), Err(Error::Parse(_))));
    }

    #[test]
    fn zero_lambda_needs_zero_alpha() {
        let args = RunArgs {
            alpha: Some("1".into()),
            lambda: vec!["0,0".into()],
            ..RunArgs::default()
        };
        assert!(matches!(RunConfig::resolve("darboux", &args, "0:1:11"), Err(Error::Argument(_))));
    }

    #[test]
    fn digest_ignores_output_directory() {
        let a = RunArgs {
            out: Some("a".into()),
            ..RunArgs::default()
        };
        let b = RunArgs {
            out: Some("b".into()),
            ..RunArgs::default()
        };
        let ca = RunConfig::resolve("residual", &a, "0:1:11").unwrap();
        let cb = RunConfig::resolve("residual", &b, "0:1:11").unwrap();
        assert_eq!(ca.manifest().config_digest, cb.manifest().config_digest);
    }
}
