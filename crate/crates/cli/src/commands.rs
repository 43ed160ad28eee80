//! Command bodies. Each builds a serializable report that embeds its input,
//! then renders it in the requested format.

use serde::Serialize;

use moricone::certificate::{parse_certificates, ZariskiCert};
use moricone::cone_geometry::{slice_export, SliceInput};
use moricone::document::Problem;
use moricone::fixtures;
use moricone::segre::{segre_bounds, segre_report, SegreBounds, SegreReport};
use moricone::strict_inclusion::{strict_inclusion_report, StrictReport};
use moricone::thresholds::{
    check_conditions, default_delta_cap, main_theorem_check, ray_certificate_with_cap, ConditionReport,
    MainTheoremReport, ThresholdError,
};
use moricone::zariski::{list_decomposition_check, zariski_decompose, ListCheckReport};
use moricone::{verify_certificate, BlowupModel, Certificate, NegativeCurveRecord, Rational, Scalar, ThresholdContext};

use crate::render;
use crate::{Cli, Command, Failure, Format, Outcome};

pub fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Analyze => analyze(cli),
        Command::Thresholds => thresholds(cli),
        Command::CertifyRay { delta_cap } => certify_ray(cli, delta_cap.as_ref()),
        Command::Zariski { divisor } => zariski(cli, divisor.as_deref()),
        Command::SegreCheck => segre_check(cli),
        Command::StrictInclusion => strict_inclusion(cli),
        Command::Slice { normal } => slice(cli, normal.as_deref()),
        Command::Verify { certificate } => verify(cli, certificate.as_deref()),
    }
}

/// Fields shared by every report.
#[derive(Debug, Serialize)]
pub struct Header {
    pub command: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub samples: usize,
    pub input: Problem,
}

struct Loaded {
    problem: Problem,
    model: BlowupModel,
    curves: Vec<NegativeCurveRecord>,
}

fn read_input(cli: &Cli) -> Result<String, Failure> {
    match (&cli.input, &cli.fixture) {
        (Some(path), _) => std::fs::read_to_string(path)
            .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display()))),
        (None, Some(name)) => fixtures::bundled_text(name).map(str::to_string).ok_or_else(|| {
            let known: Vec<&str> = fixtures::names().collect();
            Failure::input(format!("unknown fixture {name:?}; bundled: {}", known.join(", ")))
        }),
        (None, None) => Err(Failure::input("no surface given; pass --input FILE or --fixture NAME")),
    }
}

fn load(cli: &Cli) -> Result<Loaded, Failure> {
    let text = read_input(cli)?;
    let problem = Problem::parse(&text).map_err(|e| Failure::input(e.to_string()))?;
    let model = problem
        .model()
        .map_err(|e| Failure::input(format!("invalid surface description: {e}")))?;
    let curves = problem.curve_records(&model).map_err(|e| Failure::input(e.to_string()))?;
    Ok(Loaded { problem, model, curves })
}

fn header(cli: &Cli, command: &'static str, samples: usize, problem: &Problem) -> Header {
    Header {
        command,
        version: env!("CARGO_PKG_VERSION"),
        seed: cli.seed,
        samples,
        input: problem.clone(),
    }
}

fn format_or(cli: &Cli, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let f = cli.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Failure::input(format!("--format {f:?} is not available for this command").to_lowercase()))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn threshold_failure(e: ThresholdError) -> Failure {
    if e.is_infeasible() {
        Failure::infeasible(e.to_string())
    } else {
        Failure::input(e.to_string())
    }
}

/// Where ν and π came from.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundsSource {
    CommandLine,
    Document,
    Chi,
}

/// `(ν, π)`: flags first, then the document, then `χ(O_Y)`. The
/// exceptional-only case uses `(1, 0)`, which every `(−1)`-curve meets.
fn list_bounds(cli: &Cli, loaded: &Loaded) -> Result<(SegreBounds, i64, i64, BoundsSource), Failure> {
    let bounds = segre_bounds(&loaded.model.base().chi).map_err(|e| Failure::input(format!("chi: {e}")))?;
    let (nu0, pi0) = match bounds {
        SegreBounds::List { nu, pi } => (nu, pi),
        SegreBounds::ExceptionalOnly => (1, 0),
    };
    let mut source = BoundsSource::Chi;
    let mut nu = nu0;
    let mut pi = pi0;
    if let (Some(n), Some(p)) = (loaded.problem.nu, loaded.problem.pi) {
        (nu, pi, source) = (n, p, BoundsSource::Document);
    }
    if cli.nu.is_some() || cli.pi.is_some() {
        nu = cli.nu.unwrap_or(nu);
        pi = cli.pi.unwrap_or(pi);
        source = BoundsSource::CommandLine;
    }
    if nu < 1 || pi < 0 {
        return Err(Failure::input(format!("need ν ≥ 1 and π ≥ 0, got ν = {nu}, π = {pi}")));
    }
    Ok((bounds, nu, pi, source))
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    #[serde(flatten)]
    pub header: Header,
    pub segre_bounds: SegreBounds,
    pub nu: i64,
    pub pi: i64,
    pub bounds_source: BoundsSource,
    pub conditions: ConditionReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<Scalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub main_theorem: Option<MainTheoremReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub main_theorem_failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strict_inclusion: Option<StrictReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strict_inclusion_failure: Option<String>,
    pub status: String,
}

fn analyze(cli: &Cli) -> Result<Outcome, Failure> {
    let format = format_or(cli, Format::Json, &[Format::Json, Format::Text])?;
    let loaded = load(cli)?;
    let samples = cli.samples.unwrap_or(1000);
    let (bounds, nu, pi, source) = list_bounds(cli, &loaded)?;
    let ctx = ThresholdContext::from_model(&loaded.model);
    let conditions = check_conditions(&ctx, nu, pi).map_err(threshold_failure)?;

    let mut s = None;
    let mut main_theorem = None;
    let mut main_theorem_failure = None;
    let mut code = 0u8;
    let mut message = None;
    if !conditions.satisfied {
        code = 2;
        message = Some(format!("conditions on r fail: {}", conditions.binding_inequality));
    } else {
        let nu_u = u32::try_from(nu).map_err(|_| Failure::input("ν out of range"))?;
        match ctx.s_threshold(nu_u) {
            Ok(v) => s = Some(v),
            Err(e) => {
                code = if e.is_infeasible() { 2 } else { 1 };
                message = Some(e.to_string());
            }
        }
        if s.is_some() {
            match main_theorem_check(&loaded.model, &loaded.curves, nu, pi, samples, cli.seed) {
                Ok(rep) => {
                    if !rep.ok() {
                        code = 3;
                        message = Some(format!("counterexamples found: {}", rep.counterexamples.join("; ")));
                    }
                    main_theorem = Some(rep);
                }
                Err(e) => {
                    code = if e.is_infeasible() || matches!(e, ThresholdError::Precondition(_)) { 2 } else { 1 };
                    message = Some(e.to_string());
                    main_theorem_failure = Some(e.to_string());
                }
            }
        }
    }
    let (strict_inclusion, strict_inclusion_failure) = match strict_inclusion_report(&loaded.model) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let status = match code {
        0 => "ok",
        2 => "infeasible",
        3 => "counterexample",
        _ => "error",
    };
    let report = AnalyzeReport {
        header: header(cli, "analyze", samples, &loaded.problem),
        segre_bounds: bounds,
        nu,
        pi,
        bounds_source: source,
        conditions,
        s,
        main_theorem,
        main_theorem_failure,
        strict_inclusion,
        strict_inclusion_failure,
        status: status.into(),
    };
    let body = match format {
        Format::Text => render::analyze(&report),
        _ => to_json(&report),
    };
    Ok(Outcome { body, code, message })
}

#[derive(Debug, Serialize)]
pub struct ThresholdRow {
    pub n: u32,
    pub delta_quarter: Rational,
    pub s: Scalar,
    pub approx: f64,
}

#[derive(Debug, Serialize)]
pub struct ThresholdsReport {
    #[serde(flatten)]
    pub header: Header,
    pub a_sq: Rational,
    pub ak: Rational,
    pub ky_sq: Rational,
    pub r: Rational,
    pub nu: i64,
    pub pi: i64,
    pub thresholds: Vec<ThresholdRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conditions: Option<ConditionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    pub status: String,
}

fn thresholds(cli: &Cli) -> Result<Outcome, Failure> {
    let format = format_or(cli, Format::Json, &[Format::Json, Format::Text])?;
    let loaded = load(cli)?;
    let (_, nu, pi, _) = list_bounds(cli, &loaded)?;
    let ctx = ThresholdContext::from_model(&loaded.model);
    let nu_u = u32::try_from(nu).map_err(|_| Failure::input("ν out of range"))?;

    let mut rows = Vec::new();
    let mut failure = None;
    // s_1 first: its radicand is the existence condition itself.
    for n in 1..=nu_u {
        match ctx.s_threshold(n) {
            Ok(s) => rows.push(ThresholdRow {
                n,
                delta_quarter: ctx.delta_quarter(n),
                approx: s.to_f64(),
                s,
            }),
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
    }
    let conditions = if failure.is_none() {
        Some(check_conditions(&ctx, nu, pi).map_err(threshold_failure)?)
    } else {
        None
    };
    let (code, message) = match (&failure, &conditions) {
        (Some(e), _) => (if e.is_infeasible() { 2 } else { 1 }, Some(e.to_string())),
        (None, Some(c)) if !c.satisfied => (2, Some(format!("conditions on r fail: {}", c.binding_inequality))),
        _ => (0, None),
    };
    let report = ThresholdsReport {
        header: header(cli, "thresholds", 0, &loaded.problem),
        a_sq: ctx.a_sq.clone(),
        ak: ctx.ak.clone(),
        ky_sq: ctx.ky_sq.clone(),
        r: ctx.r.clone(),
        nu,
        pi,
        thresholds: rows,
        conditions,
        failure: failure.map(|e| e.to_string()),
        status: if code == 0 { "ok" } else { "infeasible" }.into(),
    };
    let body = match format {
        Format::Text => render::thresholds(&report),
        _ => to_json(&report),
    };
    Ok(Outcome { body, code, message })
}

fn certify_ray(cli: &Cli, delta_cap: Option<&Rational>) -> Result<Outcome, Failure> {
    let format = format_or(cli, Format::Json, &[Format::Json, Format::Text])?;
    let loaded = load(cli)?;
    if loaded.curves.is_empty() {
        return Err(Failure::input("the document lists no curves"));
    }
    let (_, nu, _, _) = list_bounds(cli, &loaded)?;
    let ctx = ThresholdContext::from_model(&loaded.model);
    let nu_u = u32::try_from(nu).map_err(|_| Failure::input("ν out of range"))?;
    let s = ctx.s_threshold(nu_u).map_err(threshold_failure)?;
    let default_cap = default_delta_cap(loaded.model.r());
    let cap = delta_cap.cloned().unwrap_or_else(|| default_cap.clone());
    if !cap.is_positive() {
        return Err(Failure::input(format!("δ cap must be positive, got {cap}")));
    }
    let mut certs = Vec::with_capacity(loaded.curves.len());
    for c in &loaded.curves {
        let cert = ray_certificate_with_cap(&loaded.model, c, &s, &cap).map_err(threshold_failure)?;
        certs.push(Certificate::RayContainment(cert));
    }
    let message = (cap != default_cap).then(|| {
        format!("note: δ cap {cap} differs from the default {default_cap}; non-certified mode")
    });
    let body = match format {
        Format::Text => render::certificates(&certs),
        _ => to_json(&certs),
    };
    Ok(Outcome { body, code: 0, message })
}

#[derive(Debug, Serialize)]
pub struct ListReport {
    #[serde(flatten)]
    pub header: Header,
    pub curves: Vec<String>,
    pub check: ListCheckReport,
}

fn zariski(cli: &Cli, divisor: Option<&[Rational]>) -> Result<Outcome, Failure> {
    let format = format_or(cli, Format::Json, &[Format::Json, Format::Text])?;
    let loaded = load(cli)?;
    if let Some(d) = divisor {
        let cls = loaded
            .model
            .rational_class(d)
            .map_err(|e| Failure::input(format!("--divisor: {e}")))?;
        let z = zariski_decompose(&loaded.model, &cls, &loaded.curves).map_err(|e| Failure::input(e.to_string()))?;
        let cert = Certificate::ZariskiDecomposition(ZariskiCert::new(&loaded.model, &loaded.curves, d, &z));
        let body = match format {
            Format::Text => render::certificates(std::slice::from_ref(&cert)),
            _ => to_json(&cert),
        };
        return Ok(Outcome::ok(body));
    }
    let samples = cli.samples.unwrap_or(200);
    let check = list_decomposition_check(&loaded.model, &loaded.curves, samples, cli.seed);
    let ok = check.ok();
    let report = ListReport {
        header: header(cli, "zariski", samples, &loaded.problem),
        curves: loaded.curves.iter().map(NegativeCurveRecord::name).collect(),
        check,
    };
    let body = match format {
        Format::Text => render::list_check(&report),
        _ => to_json(&report),
    };
    Ok(if ok {
        Outcome::ok(body)
    } else {
        Outcome::with_status(body, 3, "decomposition check failed")
    })
}

#[derive(Debug, Serialize)]
pub struct SegreCheckReport {
    #[serde(flatten)]
    pub header: Header,
    pub report: SegreReport,
    pub counterexample: bool,
}

fn segre_check(cli: &Cli) -> Result<Outcome, Failure> {
    let format = format_or(cli, Format::Json, &[Format::Json, Format::Text])?;
    let loaded = load(cli)?;
    let report = segre_report(&loaded.model, &loaded.problem).map_err(|e| Failure::input(e.to_string()))?;
    let report = SegreCheckReport {
        header: header(cli, "segre-check", 0, &loaded.problem),
        counterexample: report.has_counterexample(),
        report,
    };
    let body = match format {
        Format::Text => render::segre(&report),
        _ => to_json(&report),
    };
    Ok(Outcome::ok(body))
}

#[derive(Debug, Serialize)]
pub struct StrictCommandReport {
    #[serde(flatten)]
    pub header: Header,
    pub witness_found: bool,
    pub report: StrictReport,
}

fn strict_inclusion(cli: &Cli) -> Result<Outcome, Failure> {
    let format = format_or(cli, Format::Json, &[Format::Json, Format::Text])?;
    let loaded = load(cli)?;
    let report = strict_inclusion_report(&loaded.model).map_err(|e| Failure::input(e.to_string()))?;
    let report = StrictCommandReport {
        header: header(cli, "strict-inclusion", 0, &loaded.problem),
        witness_found: report.witness_found(),
        report,
    };
    let body = match format {
        Format::Text => render::strict(&report),
        _ => to_json(&report),
    };
    Ok(if report.witness_found {
        Outcome::ok(body)
    } else {
        Outcome::with_status(body, 2, "no strict-inclusion witness: the conditions on s fail")
    })
}

fn slice(cli: &Cli, normal: Option<&[Rational]>) -> Result<Outcome, Failure> {
    format_or(cli, Format::Csv, &[Format::Csv])?;
    let loaded = load(cli)?;
    let model = &loaded.model;
    let l = model.polarization();
    let n = match normal {
        Some(v) => model.rational_class(v).map_err(|e| Failure::input(format!("--normal: {e}")))?,
        None => l.clone(),
    };
    let mut inputs: Vec<SliceInput> = loaded
        .curves
        .iter()
        .map(|c| SliceInput {
            label: c.name(),
            class: c.cls.clone(),
        })
        .collect();
    inputs.push(SliceInput {
        label: "L".into(),
        class: l,
    });
    let samples = cli.samples.unwrap_or(64);
    let csv = slice_export(model, &inputs, &n, samples).map_err(|e| Failure::input(e.to_string()))?;
    Ok(Outcome::ok(csv))
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub command: &'static str,
    pub version: &'static str,
    pub verified: usize,
    pub kinds: Vec<&'static str>,
}

fn verify(cli: &Cli, path: Option<&std::path::Path>) -> Result<Outcome, Failure> {
    let format = format_or(cli, Format::Text, &[Format::Json, Format::Text])?;
    let path = path
        .or(cli.input.as_deref())
        .ok_or_else(|| Failure::input("no certificate file given"))?;
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let certs = parse_certificates(&text).map_err(|e| Failure::input(e.to_string()))?;
    if certs.is_empty() {
        return Err(Failure::input("no certificates in file"));
    }
    verify_certificate(&certs).map_err(|(i, e)| Failure::check(format!("certificate {i} ({}): {e}", certs[i].kind())))?;
    let report = VerifyReport {
        command: "verify",
        version: env!("CARGO_PKG_VERSION"),
        verified: certs.len(),
        kinds: certs.iter().map(Certificate::kind).collect(),
    };
    let body = match format {
        Format::Json => to_json(&report),
        _ => format!("ok: {} certificate(s) verified\n", report.verified),
    };
    Ok(Outcome::ok(body))
}
