//! The `stci` command line.
//!
//! Every subcommand is backed by a report builder (`run_delta`, `run_glue`,
//! `run_extend`, `run_verify`, `run_sweep`) returning a [`Report`], which is
//! rendered either as text or as JSON. The builders do no I/O and never read
//! the clock, so the browser demo calls them directly.
//!
//! Exit codes: 0 success, 2 usage or domain error, 3 construction
//! precondition failure, 4 verification failure.

use std::fmt::Write as _;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_integer::Integer;
use serde::Serialize;
use serde_json::{json, Value};

use crate::curves::{
    affine_g, base_equations, build_fstar, default_family, make_extension, projective_f,
    shape_rules, BaseEquations, BaseFamily, ExtensionKind, ExtensionSpec, FStarResult,
    MonomialCurve, Parameterization, ShapeForm,
};
use crate::error::{Error, Result};
use crate::gluing::{bad_extension_gluing, check_all_splits, GluingReport, SplitKind};
use crate::mpoly::{RewriteRule, SparsePoly};
use crate::numsg::{self, SemigroupGens};
use crate::oracle::{
    self, default_primes, toric_binomials, vanishes_on, zero_set_compare, FiniteFieldConfig,
    ZeroSetMode, ZeroSetReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "stci",
    version,
    about = "Extensions of projective monomial curves: semigroup degrees, gluing, explicit equations and their verification"
)]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree delta(m) of m in a numerical semigroup.
    Delta(DeltaArgs),
    /// Gluing verdicts for every split of a curve's semigroup.
    Glue(GlueArgs),
    /// Build and check the equations of C(l*m_1, ..., l*m_n, m).
    Extend(ExtendArgs),
    /// Run the oracle suite on a curve or an extension.
    Verify(VerifyArgs),
    /// Run a named family of extensions.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DeltaArgs {
    /// Semigroup generators, ascending, e.g. 3,4,6.
    #[arg(long, value_delimiter = ',', required = true)]
    pub gens: Vec<u64>,
    #[arg(long)]
    pub m: u64,
    /// Also list every minimal representation.
    #[arg(long)]
    pub all: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GlueArgs {
    /// Curve exponents, e.g. 2,3,4,8.
    #[arg(long, value_delimiter = ',', required = true)]
    pub curve: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeChoice {
    /// x_i^a -> x0^(a-b)*x_n^b
    Xn,
    /// x_i^a -> x0^(a-b)*x_(i+1)^b
    Chain,
    /// Pick from the base equations.
    Auto,
    /// No rewrite rules; F* = F.
    #[value(name = "none")]
    #[serde(rename = "none")]
    Trivial,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExtendArgs {
    /// Base curve exponents m_1 < ... < m_n.
    #[arg(long, value_delimiter = ',', required = true)]
    pub base: Vec<u64>,
    #[arg(long)]
    pub ell: u64,
    #[arg(long)]
    pub m: u64,
    #[arg(long, value_enum, default_value_t = ShapeChoice::Auto)]
    pub shape: ShapeChoice,
    /// Base equations in x0..xn, separated by ';'.
    #[arg(long)]
    pub equations: Option<String>,
    /// Field sizes for the zero-set comparison (default: filtered {5,7,11}).
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<u64>,
    /// Skip the finite-field zero-set comparison.
    #[arg(long)]
    pub no_zero_set: bool,
}

impl ExtendArgs {
    pub fn new(base: Vec<u64>, ell: u64, m: u64) -> Self {
        Self {
            base,
            ell,
            m,
            shape: ShapeChoice::Auto,
            equations: None,
            q: Vec::new(),
            no_zero_set: false,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    /// Curve exponents (curve mode).
    #[arg(long, value_delimiter = ',', required_unless_present = "base", conflicts_with = "base")]
    pub curve: Option<Vec<u64>>,
    /// Base curve exponents (extension mode, with --ell and --m).
    #[arg(long, value_delimiter = ',', requires_all = ["ell", "m"])]
    pub base: Option<Vec<u64>>,
    #[arg(long, requires = "base")]
    pub ell: Option<u64>,
    #[arg(long, requires = "base")]
    pub m: Option<u64>,
    #[arg(long, value_enum, default_value_t = ShapeChoice::Auto)]
    pub shape: ShapeChoice,
    /// Enumerate toric binomials up to this degree (curve mode, at most 12).
    #[arg(long, conflicts_with = "base")]
    pub toric_bound: Option<u32>,
    /// Polynomials that must appear among the toric binomials, ';'-separated.
    #[arg(long, requires = "toric_bound")]
    pub contains: Option<String>,
    /// Equations to check, ';'-separated.
    #[arg(long)]
    pub equations: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<u64>,
    #[arg(long)]
    pub no_zero_set: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Base (3,4,6), l = 1, m = 6s + 7.
    Ex45,
    /// Base (1,2,4), m = 4s.
    Ex56,
    /// Base (1,...,n), m = s*n.
    RationalNormal,
}

/// Inclusive range `a..b` (or a single value `a`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Span {
    pub start: u64,
    pub end: u64,
}

impl Span {
    pub fn iter(self) -> impl Iterator<Item = u64> {
        self.start..=self.end
    }
}

pub fn parse_span(s: &str) -> std::result::Result<Span, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| format!("{t:?} is not a non-negative integer"))
    };
    let span = match s.split_once("..") {
        Some((a, b)) => Span {
            start: num(a)?,
            end: num(b.trim_start_matches('='))?,
        },
        None => {
            let v = num(s)?;
            Span { start: v, end: v }
        }
    };
    if span.start > span.end {
        return Err(format!("empty range {s}"));
    }
    Ok(span)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long, value_parser = parse_span)]
    pub s: Option<Span>,
    #[arg(long, value_parser = parse_span)]
    pub ell: Option<Span>,
    #[arg(long, value_parser = parse_span)]
    pub n: Option<Span>,
    /// Also compare zero sets over these fields.
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<u64>,
}

/// A classification result; not pass/fail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub subject: String,
    pub verdict: String,
    pub detail: String,
}

/// A pass/fail check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Equation {
    pub name: String,
    pub poly: SparsePoly,
    /// Parameterization the vanishing check used: `projective` or `affine`.
    pub on: &'static str,
    pub vanishes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZeroSetSummary {
    pub label: &'static str,
    pub q: u64,
    pub mode: ZeroSetMode,
    pub hypersurface_points: usize,
    pub curve_points: usize,
    pub excluded_points: usize,
    pub extras: Vec<Vec<u64>>,
    pub missing: Vec<Vec<u64>>,
}

impl From<&ZeroSetReport> for ZeroSetSummary {
    fn from(r: &ZeroSetReport) -> Self {
        Self {
            label: r.label,
            q: r.q,
            mode: r.mode.clone(),
            hypersurface_points: r.hypersurface_points.len(),
            curve_points: r.curve_points.len(),
            excluded_points: r.excluded_points.len(),
            extras: r.extras.iter().cloned().collect(),
            missing: r.missing.iter().cloned().collect(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct OracleSummary {
    pub vanishing: Option<bool>,
    pub eq1: Option<bool>,
    pub zero_set: Vec<ZeroSetSummary>,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub job: Value,
    pub summary: Vec<String>,
    pub verdicts: Vec<Verdict>,
    pub equations: Vec<Equation>,
    pub oracle: OracleSummary,
    pub details: Value,
    pub timing_ms: u64,
    pub exit_code: i32,
}

impl Report {
    fn new(command: &'static str, job: &impl Serialize) -> Self {
        Self {
            command,
            job: serde_json::to_value(job).unwrap_or(Value::Null),
            summary: Vec::new(),
            verdicts: Vec::new(),
            equations: Vec::new(),
            oracle: OracleSummary::default(),
            details: Value::Null,
            timing_ms: 0,
            exit_code: EXIT_OK,
        }
    }

    fn verdict(&mut self, subject: impl Into<String>, verdict: impl Into<String>, detail: impl Into<String>) {
        self.verdicts.push(Verdict {
            subject: subject.into(),
            verdict: verdict.into(),
            detail: detail.into(),
        });
    }

    fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.oracle.checks.push(Check {
            name: name.into(),
            ok,
            detail: detail.into(),
        });
    }

    fn equation(&mut self, name: &str, poly: SparsePoly, param: &Parameterization, on: &'static str) -> Result<()> {
        let vanishes = vanishes_on(&poly, param)?;
        self.equations.push(Equation {
            name: name.into(),
            poly,
            on,
            vanishes,
        });
        let all = self.equations.iter().all(|e| e.vanishes);
        self.oracle.vanishing = Some(all);
        Ok(())
    }

    /// `true` when no check failed and no emitted equation failed to vanish.
    pub fn passed(&self) -> bool {
        self.oracle.checks.iter().all(|c| c.ok)
            && self.oracle.vanishing != Some(false)
            && self.oracle.eq1 != Some(false)
    }

    /// Exit code: the recorded precondition code if any, else 4 on a failed
    /// check, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.exit_code != EXIT_OK {
            self.exit_code
        } else if !self.passed() {
            EXIT_VERIFY
        } else {
            EXIT_OK
        }
    }

    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["exit_code"] = json!(self.exit_code());
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for line in &self.summary {
            let _ = writeln!(out, "{line}");
        }
        if !self.verdicts.is_empty() {
            let _ = writeln!(out, "verdicts:");
            for v in &self.verdicts {
                if v.detail.is_empty() {
                    let _ = writeln!(out, "  {}: {}", v.subject, v.verdict);
                } else {
                    let _ = writeln!(out, "  {}: {} ({})", v.subject, v.verdict, v.detail);
                }
            }
        }
        if !self.equations.is_empty() {
            let _ = writeln!(out, "equations:");
            for e in &self.equations {
                let mark = if e.vanishes { "vanishes" } else { "DOES NOT VANISH" };
                let _ = writeln!(out, "  {} = {}  [{} on the {} curve]", e.name, e.poly, mark, e.on);
            }
        }
        if let Some(ok) = self.oracle.eq1 {
            let _ = writeln!(out, "F^p = x0^gamma * F* modulo the base binomials: {}", pass(ok));
        }
        if !self.oracle.zero_set.is_empty() {
            let _ = writeln!(
                out,
                "zero sets over F_q ({}: characteristic q only, not a proof):",
                oracle::EVIDENCE
            );
            for z in &self.oracle.zero_set {
                let _ = writeln!(
                    out,
                    "  q={}: {} common zeros, {} curve points, {} on the excluded line, extras {}, missing {}",
                    z.q,
                    z.hypersurface_points,
                    z.curve_points,
                    z.excluded_points,
                    z.extras.len(),
                    z.missing.len()
                );
                for p in z.extras.iter().take(5) {
                    let _ = writeln!(out, "    extra {}", tuple(p));
                }
                for p in z.missing.iter().take(5) {
                    let _ = writeln!(out, "    missing {}", tuple(p));
                }
            }
        }
        if !self.oracle.checks.is_empty() {
            let _ = writeln!(out, "checks:");
            for c in &self.oracle.checks {
                let _ = writeln!(out, "  [{}] {}: {}", pass(c.ok), c.name, c.detail);
            }
        }
        out
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn tuple<T: std::fmt::Display>(values: &[T]) -> String {
    let inner: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("({})", inner.join(","))
}

fn parse_list(text: &str, nvars: usize) -> Result<Vec<SparsePoly>> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| SparsePoly::parse(s, nvars))
        .collect()
}

pub fn run_delta(args: &DeltaArgs) -> Result<Report> {
    let gens = SemigroupGens::new(args.gens.clone())?;
    let rep = numsg::degree(args.m, &gens)?;
    let mut r = Report::new("delta", args);
    r.summary.push(format!("delta({}) = {}", args.m, rep.weight));
    r.summary.push(format!("representation {}", tuple(&rep.coeffs)));
    r.verdict("delta", rep.weight.to_string(), format!("representation {}", tuple(&rep.coeffs)));
    let mut details = json!({ "delta": rep.weight, "representation": rep.coeffs });
    if args.all {
        let all = numsg::minimal_representations(args.m, &gens, 1000)?;
        let listed: Vec<String> = all.iter().map(|x| tuple(&x.coeffs)).collect();
        r.summary.push(format!("minimal representations ({}): {}", all.len(), listed.join(" ")));
        details["all"] = json!(all.iter().map(|x| &x.coeffs).collect::<Vec<_>>());
    }
    r.details = details;
    Ok(r)
}

fn describe_split(g: &GluingReport, kind: &SplitKind) -> String {
    match kind {
        SplitKind::Singleton(i) => format!("T1 = {{e{i} = {}}}", g.exponents[i - 1]),
        SplitKind::Endpoint(e) => format!("T1 = {{{}}}", serde_json::to_value(e).unwrap().as_str().unwrap_or("")),
        SplitKind::NonSingleton(_) => "|T1| >= 2".into(),
    }
}

fn gluing_headline(g: &GluingReport) -> String {
    match g.glue_index {
        Some(i) => {
            let d = g.decisions.iter().find(|d| d.split == SplitKind::Singleton(i));
            let w = d.and_then(|d| d.witness.as_ref()).map(|w| tuple(&w.values()));
            format!("GLUES at i0={i}, witness d={}", w.unwrap_or_default())
        }
        None => "NO GLUING (all splits fail)".into(),
    }
}

fn push_gluing(r: &mut Report, g: &GluingReport) {
    for d in &g.decisions {
        let verdict = if d.glues() { "glues" } else { "no gluing" };
        let mut detail = Vec::new();
        if let Some(delta) = d.delta {
            detail.push(format!("Delta = {delta}"));
        }
        if let Some(reason) = d.reason {
            detail.push(serde_json::to_value(reason).unwrap().as_str().unwrap_or("").to_string());
        }
        if let Some(w) = &d.witness {
            detail.push(format!("d = {}, slack {}", tuple(&w.values()), w.slack));
        }
        r.verdict(describe_split(g, &d.split), verdict, detail.join(", "));
    }
}

pub fn run_glue(args: &GlueArgs) -> Result<Report> {
    if args.curve.len() < 3 {
        return Err(Error::InvalidGenerators(format!(
            "{:?}: need at least 3 exponents",
            args.curve
        )));
    }
    let g = check_all_splits(&args.curve)?;
    let mut r = Report::new("glue", args);
    r.summary.push(gluing_headline(&g));
    push_gluing(&mut r, &g);
    r.details = json!({ "gluing": g });
    Ok(r)
}

/// Base equations and the rewrite rules offered to the `F*` builder.
struct BaseSetup {
    base: BaseEquations,
    rules: Option<Vec<RewriteRule>>,
    explicit: bool,
}

fn base_setup(spec: &ExtensionSpec, shape: ShapeChoice, equations: Option<&str>) -> Result<BaseSetup> {
    let curve = spec.base();
    let nv = curve.nvars();
    let trivial_ok = spec.rep().coeffs[..curve.n() - 1].iter().all(|&s| s == 0);
    let custom = match equations {
        Some(text) => Some(base_equations(&BaseFamily::Custom {
            curve: curve.clone(),
            equations: parse_list(text, nv)?,
        })?),
        None => None,
    };
    let with_form = |form: ShapeForm| -> Result<BaseSetup> {
        let base = match &custom {
            Some(b) => b.clone(),
            None => base_equations(&BaseFamily::Binomials {
                curve: curve.clone(),
                form,
            })?,
        };
        Ok(BaseSetup {
            base,
            rules: Some(shape_rules(curve, form, nv)?),
            explicit: true,
        })
    };
    match shape {
        ShapeChoice::Xn => with_form(ShapeForm::TopVariable),
        ShapeChoice::Chain => with_form(ShapeForm::Chain),
        ShapeChoice::Trivial => Ok(BaseSetup {
            base: match custom {
                Some(b) => b,
                None => base_equations(&default_family(curve))?,
            },
            rules: Some(Vec::new()),
            explicit: true,
        }),
        ShapeChoice::Auto => {
            if let Some(base) = custom {
                let from_eqs: Result<Vec<RewriteRule>> =
                    base.equations.iter().map(RewriteRule::from_binomial).collect();
                let rules = match from_eqs {
                    Ok(rules) if rules.len() == curve.n() - 1 => Some(rules),
                    _ if trivial_ok => Some(Vec::new()),
                    _ => None,
                };
                return Ok(BaseSetup {
                    base,
                    rules,
                    explicit: false,
                });
            }
            let family = default_family(curve);
            let rules = match &family {
                _ if trivial_ok => Some(Vec::new()),
                BaseFamily::Binomials { form, .. } => Some(shape_rules(curve, *form, nv)?),
                _ => Some(shape_rules(curve, ShapeForm::TopVariable, nv)?),
            };
            Ok(BaseSetup {
                base: base_equations(&family)?,
                rules,
                explicit: false,
            })
        }
    }
}

fn primes_for(explicit: &[u64], exponents: &[u64]) -> Result<Vec<FiniteFieldConfig>> {
    let qs = if explicit.is_empty() {
        default_primes(exponents)
    } else {
        explicit.to_vec()
    };
    qs.into_iter().map(|q| FiniteFieldConfig::new(q, true)).collect()
}

fn run_zero_sets(
    r: &mut Report,
    equations: &[SparsePoly],
    param: &Parameterization,
    fields: &[FiniteFieldConfig],
    mode: ZeroSetMode,
) -> Result<()> {
    for &cfg in fields {
        match zero_set_compare(equations, param, cfg, mode.clone()) {
            Ok(z) => {
                let detail = format!(
                    "{} q={}: extras {}, missing {}",
                    z.label,
                    z.q,
                    z.extras.len(),
                    z.missing.len()
                );
                r.check(format!("zero set over F_{}", z.q), z.agrees(), detail);
                r.oracle.zero_set.push(ZeroSetSummary::from(&z));
            }
            Err(e @ Error::TooLarge { .. }) => {
                r.verdict(format!("zero set over F_{}", cfg.q()), "skipped", e.to_string());
            }
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

fn fstar_details(f: &FStarResult) -> Value {
    json!({
        "form": f.form,
        "rules": f.rules,
        "p": f.p,
        "weights": f.partials,
        "gamma": f.gamma,
        "alpha": f.alpha,
        "beta": f.beta,
        "gate_margin": f.gate_margin,
        "theorem_bound_holds": f.theorem_bound_holds(),
    })
}

pub fn run_extend(args: &ExtendArgs) -> Result<Report> {
    extension_report("extend", args)
}

fn extension_report(command: &'static str, args: &ExtendArgs) -> Result<Report> {
    let base = MonomialCurve::new(args.base.clone())?;
    let spec = make_extension(&base, args.ell, args.m)?;
    let n = base.n();
    let nv = spec.nvars();
    let exps = spec.exponents();
    let param = spec.parameterization()?;
    let affine = spec.affine_parameterization()?;
    let mut r = Report::new(command, args);
    let mut details = serde_json::Map::new();

    let kind = match spec.kind() {
        ExtensionKind::Nice => "NICE",
        ExtensionKind::Bad => "BAD",
    };
    r.summary.push(format!(
        "extension C{} of C{} with l = {}, m = {}",
        tuple(&exps),
        tuple(base.exponents()),
        args.ell,
        args.m
    ));
    r.summary.push(format!(
        "delta(m) = {}, representation {}: {kind}",
        spec.delta(),
        tuple(&spec.rep().coeffs)
    ));
    r.verdict("extension", kind.to_lowercase(), format!("delta(m) = {}, l = {}", spec.delta(), args.ell));
    details.insert("exponents".into(), json!(exps));
    details.insert("delta".into(), json!(spec.delta()));
    details.insert("representation".into(), json!(spec.rep().coeffs));
    details.insert("kind".into(), json!(spec.kind()));

    if exps.len() >= 3 {
        let g = check_all_splits(&exps)?;
        r.summary.push(format!("semigroup: {}", gluing_headline(&g)));
        if g.glues {
            r.verdict("gluing", "glues", gluing_headline(&g));
        } else {
            r.verdict("gluing", "no gluing", "all splits fail");
        }
        details.insert("gluing".into(), json!(g));
    }

    let setup = base_setup(&spec, args.shape, args.equations.as_deref())?;
    details.insert("base_sufficiency".into(), json!(setup.base.sufficiency));
    let lifted: Vec<SparsePoly> = setup
        .base
        .equations
        .iter()
        .map(|f| f.with_nvars(nv))
        .collect::<Result<_>>()?;
    for (i, f) in lifted.iter().enumerate() {
        r.equation(&format!("f{}", i + 1), f.clone(), &param, "projective")?;
    }
    r.equation("G", affine_g(&spec)?, &affine, "affine")?;

    let mut zero_eqs = lifted.clone();
    let mut mode = ZeroSetMode::Exact;
    match spec.kind() {
        ExtensionKind::Bad => {
            let b = bad_extension_gluing(&spec)?;
            let w = b.decision.witness.as_ref().expect("bad extensions carry a witness");
            r.summary.push(format!(
                "glues along e{} = {} with Delta = {}, witness d = {}",
                n + 1,
                args.m,
                b.decision.delta.unwrap_or(0),
                tuple(&w.values())
            ));
            r.verdict("bad-extension gluing", "glues", format!("d = {}, slack {}", tuple(&w.values()), w.slack));
            r.equation("F", b.f.clone(), &param, "projective")?;
            zero_eqs.push(b.f);
        }
        ExtensionKind::Nice => {
            let f = projective_f(&spec)?;
            r.equation("F", f.clone(), &param, "projective")?;
            let built = match &setup.rules {
                None => {
                    r.verdict("F*", "not built", "base equations are not binomials of a supported shape");
                    None
                }
                Some(rules) => match build_fstar(&spec, rules) {
                    Ok(fs) => Some(fs),
                    Err(e @ Error::ConditionFails(_)) => {
                        r.verdict("F*", "ConditionFails", e.to_string());
                        r.summary.push(format!("error: {e}"));
                        r.exit_code = EXIT_PRECONDITION;
                        None
                    }
                    Err(e @ (Error::ShapeMismatch(_) | Error::RuleConflict { .. })) if !setup.explicit => {
                        r.verdict("F*", "not built", e.to_string());
                        None
                    }
                    Err(e) => return Err(e),
                },
            };
            match built {
                Some(fs) => {
                    let rules: Vec<String> = fs.rules.iter().map(|x| x.to_string()).collect();
                    r.summary.push(format!(
                        "F* via {} rules [{}]: p = {}, gamma = {}, alpha = {}, beta = {}",
                        fs.form,
                        rules.join(", "),
                        fs.p,
                        fs.gamma,
                        fs.alpha,
                        fs.beta
                    ));
                    r.verdict(
                        "F*",
                        "built",
                        format!(
                            "{} terms; strict theorem bound {}",
                            fs.fstar.len(),
                            if fs.theorem_bound_holds() { "holds" } else { "does not hold" }
                        ),
                    );
                    let eq1 = oracle::check_eq1(&spec, &fs)?;
                    r.oracle.eq1 = Some(eq1);
                    r.equation("F*", fs.fstar.clone(), &param, "projective")?;
                    details.insert("fstar".into(), fstar_details(&fs));
                    zero_eqs.push(fs.fstar);
                }
                None => {
                    zero_eqs.push(f);
                    mode = ZeroSetMode::ExcludeLine((0..n).collect());
                }
            }
        }
    }

    if !args.no_zero_set {
        let fields = primes_for(&args.q, &exps)?;
        run_zero_sets(&mut r, &zero_eqs, &param, &fields, mode)?;
    }
    r.details = Value::Object(details);
    Ok(r)
}

pub fn run_verify(args: &VerifyArgs) -> Result<Report> {
    if let Some(base) = &args.base {
        let (Some(ell), Some(m)) = (args.ell, args.m) else {
            return Err(Error::InvalidGenerators("--base needs --ell and --m".into()));
        };
        let ext = ExtendArgs {
            base: base.clone(),
            ell,
            m,
            shape: args.shape,
            equations: args.equations.clone(),
            q: args.q.clone(),
            no_zero_set: args.no_zero_set,
        };
        return extension_report("verify", &ext);
    }
    let exps = args
        .curve
        .clone()
        .ok_or_else(|| Error::InvalidGenerators("give --curve or --base".into()))?;
    let curve = MonomialCurve::new(exps.clone())?;
    let param = curve.parameterization()?;
    let nv = curve.nvars();
    let mut r = Report::new("verify", args);
    r.summary.push(format!("curve C{} in P^{}", tuple(&exps), curve.n()));
    let mut details = serde_json::Map::new();

    if let Some(bound) = args.toric_bound {
        let toric = toric_binomials(&exps, bound)?;
        let mut all_vanish = true;
        for b in &toric {
            all_vanish &= vanishes_on(b, &param)?;
        }
        r.summary.push(format!("toric binomials of degree <= {bound}: {}", toric.len()));
        r.check("toric binomials vanish", all_vanish, format!("{} binomials", toric.len()));
        let mut found = Vec::new();
        if let Some(text) = &args.contains {
            for p in parse_list(text, nv)? {
                let neg = -&p;
                let hit = toric.iter().any(|b| *b == p || *b == neg);
                r.check(format!("toric contains {p}"), hit, if hit { "found" } else { "not found" });
                found.push(json!({ "poly": p, "found": hit }));
            }
        }
        details.insert(
            "toric".into(),
            json!({ "bound": bound, "count": toric.len(), "contains": found }),
        );
    }

    if let Some(text) = &args.equations {
        let eqs = parse_list(text, nv)?;
        for (i, f) in eqs.iter().enumerate() {
            r.equation(&format!("f{}", i + 1), f.clone(), &param, "projective")?;
        }
        if !args.no_zero_set {
            let fields = primes_for(&args.q, &exps)?;
            run_zero_sets(&mut r, &eqs, &param, &fields, ZeroSetMode::Exact)?;
        }
    }
    r.details = Value::Object(details);
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepInstance {
    pub params: Value,
    pub exponents: Vec<u64>,
    pub gluing: Option<String>,
    pub ok: bool,
    pub summary: String,
    pub error: Option<String>,
}

fn sweep_instances(args: &SweepArgs) -> Vec<(Value, ExtendArgs)> {
    let span = |s: Option<Span>, a, b| s.unwrap_or(Span { start: a, end: b });
    let mk = |base: Vec<u64>, ell: u64, m: u64, shape: ShapeChoice| ExtendArgs {
        base,
        ell,
        m,
        shape,
        equations: None,
        q: args.q.clone(),
        no_zero_set: args.q.is_empty(),
    };
    let mut out = Vec::new();
    match args.family {
        Family::Ex45 => {
            for s in span(args.s, 3, 10).iter() {
                out.push((json!({ "s": s }), mk(vec![3, 4, 6], 1, 6 * s + 7, ShapeChoice::Xn)));
            }
        }
        Family::Ex56 => {
            for ell in span(args.ell, 1, 3).iter() {
                for s in span(args.s, 2, 5).iter() {
                    if ell.gcd(&(4 * s)) == 1 && s > ell {
                        out.push((json!({ "ell": ell, "s": s }), mk(vec![1, 2, 4], ell, 4 * s, ShapeChoice::Trivial)));
                    }
                }
            }
        }
        Family::RationalNormal => {
            for n in span(args.n, 2, 4).iter() {
                for ell in span(args.ell, 1, 2).iter() {
                    for s in span(args.s, 2, 4).iter() {
                        if ell.gcd(&(s * n)) == 1 && s > ell {
                            let base = (1..=n).collect();
                            out.push((
                                json!({ "n": n, "ell": ell, "s": s }),
                                mk(base, ell, s * n, ShapeChoice::Trivial),
                            ));
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn run_sweep(args: &SweepArgs) -> Result<Report> {
    let mut r = Report::new("sweep", args);
    let mut instances = Vec::new();
    for (params, ext) in sweep_instances(args) {
        let label = params
            .as_object()
            .map(|o| o.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" "))
            .unwrap_or_default();
        let inst = match extension_report("extend", &ext) {
            Ok(rep) => {
                let gluing = rep
                    .verdicts
                    .iter()
                    .find(|v| v.subject == "gluing")
                    .map(|v| v.verdict.clone());
                let fstar_built = rep.equations.iter().any(|e| e.name == "F*");
                let expectation = match args.family {
                    Family::Ex45 => gluing.as_deref() == Some("no gluing") && fstar_built,
                    _ => fstar_built,
                };
                let ok = rep.exit_code() == EXIT_OK && expectation;
                let summary = format!(
                    "{}, {}, {} equations vanish{}",
                    gluing.clone().unwrap_or_else(|| "gluing n/a".into()),
                    if fstar_built { "F* verified" } else { "F* not built" },
                    rep.equations.len(),
                    if rep.oracle.zero_set.is_empty() {
                        String::new()
                    } else {
                        format!(", {} zero sets compared", rep.oracle.zero_set.len())
                    }
                );
                SweepInstance {
                    params,
                    exponents: rep.details["exponents"]
                        .as_array()
                        .map(|a| a.iter().filter_map(Value::as_u64).collect())
                        .unwrap_or_default(),
                    gluing,
                    ok,
                    summary,
                    error: None,
                }
            }
            Err(e) => SweepInstance {
                params,
                exponents: Vec::new(),
                gluing: None,
                ok: false,
                summary: "error".into(),
                error: Some(e.to_string()),
            },
        };
        let line = match &inst.error {
            Some(e) => format!("{label}: ERROR {e}"),
            None => format!("{label}: C{} {}", tuple(&inst.exponents), inst.summary),
        };
        r.summary.push(line.clone());
        r.check(label, inst.ok, inst.error.clone().unwrap_or_else(|| inst.summary.clone()));
        instances.push(inst);
    }
    let passed = instances.iter().filter(|i| i.ok).count();
    r.summary.push(format!("{passed}/{} instances verified", instances.len()));
    r.details = json!({ "instances": instances });
    Ok(r)
}

/// Captured output of one `stci` invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn run(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let result = match &cli.command {
        Command::Delta(a) => run_delta(a),
        Command::Glue(a) => run_glue(a),
        Command::Extend(a) => run_extend(a),
        Command::Verify(a) => run_verify(a),
        Command::Sweep(a) => run_sweep(a),
    };
    match result {
        Ok(mut report) => {
            report.timing_ms = start.elapsed().as_millis() as u64;
            let code = report.exit_code();
            let stdout = if cli.json {
                report.to_json() + "\n"
            } else {
                report.to_text()
            };
            let stderr = match code {
                EXIT_PRECONDITION => "construction precondition failed\n".to_string(),
                EXIT_VERIFY => "verification failed\n".to_string(),
                _ => String::new(),
            };
            Outcome { stdout, stderr, code }
        }
        Err(e) => {
            let code = e.exit_code();
            let stdout = if cli.json {
                serde_json::to_string_pretty(&json!({ "error": e.to_string(), "exit_code": code }))
                    .expect("error serializes")
                    + "\n"
            } else {
                String::new()
            };
            Outcome {
                stdout,
                stderr: format!("error: {e}\n"),
                code,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        let mut v = vec!["stci"];
        v.extend_from_slice(args);
        Cli::try_parse_from(v).unwrap()
    }

    #[test]
    fn spans() {
        assert_eq!(parse_span("3..10"), Ok(Span { start: 3, end: 10 }));
        assert_eq!(parse_span("4"), Ok(Span { start: 4, end: 4 }));
        assert_eq!(parse_span("2..=5"), Ok(Span { start: 2, end: 5 }));
        assert!(parse_span("5..2").is_err());
        assert!(parse_span("a..2").is_err());
    }

    #[test]
    fn delta_text() {
        let o = run(&cli(&["delta", "--gens", "3,4,6", "--m", "25"]));
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("delta(25) = 5"));
        assert!(o.stdout.contains("representation (1,1,3)"));
        let o = run(&cli(&["delta", "--gens", "3,4,6", "--m", "1"]));
        assert_eq!(o.code, 2);
        assert!(o.stderr.contains("not in the numerical semigroup"));
    }

    #[test]
    fn glue_text() {
        let o = run(&cli(&["glue", "--curve", "2,3,4,8"]));
        assert!(o.stdout.starts_with("GLUES at i0=2, witness d=(1,1,0)"));
        let o = run(&cli(&["glue", "--curve", "2,4,7,8"]));
        assert!(o.stdout.starts_with("NO GLUING (all splits fail)"));
        assert_eq!(o.code, 0);
        let o = run(&cli(&["glue", "--curve", "1,2"]));
        assert_eq!(o.code, 2);
        assert!(o.stderr.contains("need at least 3 exponents"));
    }

    #[test]
    fn extend_condition_fails() {
        let o = run(&cli(&["extend", "--base", "3,4,6", "--ell", "1", "--m", "19", "--shape", "xn"]));
        assert_eq!(o.code, 3);
        assert!(o.stdout.contains("ConditionFails"));
    }

    #[test]
    fn trivial_family_sweep_is_clean() {
        let args = SweepArgs {
            family: Family::RationalNormal,
            s: Some(Span { start: 3, end: 3 }),
            ell: Some(Span { start: 1, end: 2 }),
            n: Some(Span { start: 2, end: 3 }),
            q: Vec::new(),
        };
        let r = run_sweep(&args).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        // (n, l, s) = (2, 2, 3) has gcd(2, 6) = 2 and is skipped.
        assert_eq!(r.oracle.checks.len(), 3);
    }
}
