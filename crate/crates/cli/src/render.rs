//! Plain-text renderings of the reports.

use std::fmt::Write;

use moricone::segre::SegreBounds;
use moricone::zariski::SerializedCurve;
use moricone::{Certificate, Rational};

use crate::commands::{AnalyzeReport, ListReport, SegreCheckReport, StrictCommandReport, ThresholdsReport};

fn coords(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(Rational::to_string).collect();
    format!("({})", parts.join(", "))
}

fn curve_name(c: &SerializedCurve) -> String {
    c.label.clone().unwrap_or_else(|| coords(&c.coords))
}

fn surface_line(out: &mut String, r: &crate::commands::Header) {
    let s = &r.input.surface;
    let name = s.name.as_deref().unwrap_or("unnamed surface");
    let _ = writeln!(out, "surface: {name} ({:?}, r = {})", s.class, s.r);
}

pub fn analyze(r: &AnalyzeReport) -> String {
    let mut out = String::new();
    surface_line(&mut out, &r.header);
    let bounds = match r.segre_bounds {
        SegreBounds::List { nu, pi } => format!("ν = {nu}, π = {pi}"),
        SegreBounds::ExceptionalOnly => "exceptional curves only".into(),
    };
    let _ = writeln!(out, "list bounds from χ: {bounds}");
    let _ = writeln!(out, "using ν = {}, π = {} ({:?})", r.nu, r.pi, r.bounds_source);
    let c = &r.conditions;
    let _ = writeln!(
        out,
        "conditions: {} [{}] slack {}",
        c.binding_inequality,
        if c.satisfied { "holds" } else { "fails" },
        c.slack
    );
    if let Some(s) = &r.s {
        let _ = writeln!(out, "s_{} = {s} ≈ {:.9}", r.nu, s.to_f64());
    }
    if let Some(m) = &r.main_theorem {
        let valid = m.certificates.iter().filter(|c| c.valid()).count();
        let _ = writeln!(out, "ray certificates: {valid}/{} valid", m.certificates.len());
        let _ = writeln!(
            out,
            "sampling: {} samples (seed {}), {} active, {} counterexamples",
            m.samples,
            m.seed,
            m.active,
            m.counterexamples.len()
        );
        for ce in &m.counterexamples {
            let _ = writeln!(out, "  counterexample: {ce}");
        }
    }
    if let Some(f) = &r.main_theorem_failure {
        let _ = writeln!(out, "containment check: {f}");
    }
    match (&r.strict_inclusion, &r.strict_inclusion_failure) {
        (Some(s), _) => {
            let sets: Vec<String> = s.condition_sets.iter().map(|c| format!("{c:?}")).collect();
            let _ = writeln!(
                out,
                "strict inclusion: sets {{{}}}, s-route {}, uniruled route {}",
                sets.join(", "),
                if s.from_s.is_some() { "found" } else { "none" },
                if s.uniruled.is_some() { "found" } else { "none" }
            );
        }
        (None, Some(f)) => {
            let _ = writeln!(out, "strict inclusion: {f}");
        }
        _ => {}
    }
    let _ = writeln!(out, "status: {}", r.status);
    out
}

pub fn thresholds(r: &ThresholdsReport) -> String {
    let mut out = String::new();
    surface_line(&mut out, &r.header);
    let _ = writeln!(out, "A² = {}, A·K_Y = {}, K_Y² = {}, r = {}", r.a_sq, r.ak, r.ky_sq, r.r);
    for row in &r.thresholds {
        let _ = writeln!(
            out,
            "n = {}  Δ/4 = {}  s = {}  ≈ {:.9}",
            row.n, row.delta_quarter, row.s, row.approx
        );
    }
    if let Some(c) = &r.conditions {
        let _ = writeln!(
            out,
            "conditions (ν = {}, π = {}): {} [{}]",
            c.nu,
            c.pi,
            c.binding_inequality,
            if c.satisfied { "holds" } else { "fails" }
        );
    }
    if let Some(f) = &r.failure {
        let _ = writeln!(out, "failure: {f}");
    }
    let _ = writeln!(out, "status: {}", r.status);
    out
}

pub fn certificates(certs: &[Certificate]) -> String {
    let mut out = String::new();
    for c in certs {
        match c {
            Certificate::RayContainment(r) => {
                let _ = writeln!(
                    out,
                    "ray_containment  {}  (−{}, {})  s = {}  t0 = {}  δ = {}  {}",
                    curve_name(&r.curve),
                    r.n,
                    r.p,
                    r.s,
                    r.t0,
                    r.delta,
                    if r.valid() { "valid" } else { "INVALID" }
                );
            }
            Certificate::ZariskiDecomposition(z) => {
                let n: Vec<String> = z
                    .coeffs
                    .iter()
                    .map(|k| format!("{}·{}", k.value, curve_name(&z.curves[k.curve])))
                    .collect();
                let _ = writeln!(
                    out,
                    "zariski_decomposition  D = {}  P = {}  N = {}",
                    coords(&z.d),
                    coords(&z.p),
                    if n.is_empty() { "0".into() } else { n.join(" + ") }
                );
            }
            Certificate::StrictInclusion(w) => {
                let _ = writeln!(out, "strict_inclusion  {:?}  C = E_{}  δ = {}", w.construction, w.curve, w.delta);
            }
        }
    }
    out
}

pub fn list_check(r: &ListReport) -> String {
    let mut out = String::new();
    surface_line(&mut out, &r.header);
    let c = &r.check;
    let _ = writeln!(out, "curves: {}", r.curves.len());
    let _ = writeln!(out, "decompositions: {}/{} passed (seed {})", c.passed, c.samples, c.seed);
    for f in &c.failures {
        let _ = writeln!(out, "  {f}");
    }
    for (name, ok) in r.curves.iter().zip(&c.extremal) {
        if !ok {
            let _ = writeln!(out, "  not extremal: {name}");
        }
    }
    let _ = writeln!(out, "status: {}", if c.ok() { "ok" } else { "failed" });
    out
}

/// Left-aligned columns padded to the widest cell.
fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|j| rows.iter().filter_map(|r| r.get(j)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (j, cell) in row.iter().enumerate() {
            if j + 1 == row.len() {
                line.push_str(cell);
            } else {
                let pad = widths[j] - cell.chars().count();
                let _ = write!(line, "{cell}{}  ", " ".repeat(pad));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

pub fn segre(r: &SegreCheckReport) -> String {
    let mut out = String::new();
    surface_line(&mut out, &r.header);
    let s = &r.report;
    let bounds = match s.bounds {
        SegreBounds::List { nu, pi } => format!("ν = {nu}, π = {pi}"),
        SegreBounds::ExceptionalOnly => "exceptional curves only".into(),
    };
    let _ = writeln!(out, "χ = {}; bounds: {bounds}", s.chi);
    let mut rows = vec![vec!["kind".to_string(), "item".into(), "data".into(), "verdict".into()]];
    for c in &s.curves {
        let mut verdict = if c.exceptional {
            "exceptional".to_string()
        } else if c.bound_holds {
            "bound holds".into()
        } else {
            "bound fails".into()
        };
        if let Some(k) = c.k3_kind {
            let _ = write!(verdict, ", {k:?}");
        }
        rows.push(vec![
            "curve".into(),
            c.curve.clone(),
            format!("C² = {}, p_a = {}", c.self_int, c.genus),
            verdict,
        ]);
    }
    for v in &s.systems {
        let known = v.known_dim.as_ref().map_or("?".to_string(), Rational::to_string);
        rows.push(vec![
            "system".into(),
            v.system.clone(),
            format!("v = {}, e = {}, dim = {known}", v.virtual_dim, v.expected_dim),
            if v.segre_counterexample {
                format!("{:?}, counterexample", v.speciality)
            } else {
                format!("{:?}", v.speciality)
            },
        ]);
    }
    for (i, p) in s.pencils.iter().enumerate() {
        rows.push(vec![
            "pencil".into(),
            format!("pencils[{i}]"),
            format!("g = {}, dim = {}, forced χ = {}", p.g, p.dim, p.forced_chi),
            format!("{:?}", p.verdict),
        ]);
    }
    out.push_str(&table(&rows));
    let _ = writeln!(out, "counterexample: {}", if r.counterexample { "yes" } else { "no" });
    out
}

pub fn strict(r: &StrictCommandReport) -> String {
    let mut out = String::new();
    surface_line(&mut out, &r.header);
    let s = &r.report;
    let sets: Vec<String> = s.condition_sets.iter().map(|c| format!("{c:?}")).collect();
    let _ = writeln!(out, "condition sets: {{{}}}", sets.join(", "));
    for iv in &s.intervals {
        let lo = iv.lower.as_ref().map_or("-∞".to_string(), ToString::to_string);
        let hi = iv.upper.as_ref().map_or("+∞".to_string(), ToString::to_string);
        let _ = writeln!(
            out,
            "s ∈ {}{lo}, {hi}{}",
            if iv.lower_closed { '[' } else { '(' },
            if iv.upper_closed { ']' } else { ')' }
        );
    }
    for (name, w, fail) in [
        ("s-route", &s.from_s, &s.from_s_failure),
        ("uniruled route", &s.uniruled, &s.uniruled_failure),
    ] {
        match (w, fail) {
            (Some(w), _) => {
                let lambda = w.lambda.as_ref().map_or("?".to_string(), ToString::to_string);
                let _ = writeln!(out, "{name}: witness with C = E_{}, λ = {lambda}", w.curve);
            }
            (None, Some(f)) => {
                let _ = writeln!(out, "{name}: {f}");
            }
            _ => {}
        }
    }
    let _ = writeln!(out, "witness found: {}", if r.witness_found { "yes" } else { "no" });
    out
}
