//! Speciality of linear systems and the numerical consequences of a positive
//! answer to the Segre problem: curve bounds, pencil obstructions, K3 kinds,
//! and the Nagata-type inequalities.

use serde::Serialize;

use crate::document::{DocumentError, Problem};
use crate::scalar::Rational;
use crate::surface_lattice::{BlowupModel, DimensionReport, DivisorClass, LatticeError, SurfaceClass};
use crate::zariski::NegativeCurveRecord;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SegreError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("C·K = {ck} is inconsistent with adjunction: 2p − 2 − C² = {expected}")]
    Adjunction { ck: Rational, expected: Rational },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A linear system `|L|` with the facts the lattice cannot decide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystemRecord {
    pub label: Option<String>,
    pub cls: DivisorClass,
    pub known_dim: Option<Rational>,
    pub reduced: bool,
    pub exceptional_support: bool,
    pub h2_zero_assumed: bool,
}

impl LinearSystemRecord {
    pub fn new(
        model: &BlowupModel,
        cls: DivisorClass,
        known_dim: Option<Rational>,
        reduced: bool,
        exceptional_support: bool,
        h2_zero_assumed: bool,
    ) -> Result<LinearSystemRecord, SegreError> {
        if !cls.is_integral() {
            return Err(SegreError::Precondition(format!("linear system class {cls} is not integral")));
        }
        let m = model.ns_rank();
        if exceptional_support && cls.coords()[..m].iter().any(|c| !c.is_zero()) {
            return Err(SegreError::Precondition(format!(
                "{cls} is marked as supported on exceptional curves but has a non-zero pullback part"
            )));
        }
        Ok(LinearSystemRecord {
            label: None,
            cls,
            known_dim,
            reduced,
            exceptional_support,
            h2_zero_assumed,
        })
    }

    pub fn name(&self) -> String {
        self.label.clone().unwrap_or_else(|| self.cls.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Speciality {
    Special,
    NonSpecial,
    Undetermined,
}

/// Compares the supplied dimension with `e(L)`; needs the h²-vanishing flag.
pub fn speciality(model: &BlowupModel, rec: &LinearSystemRecord) -> Result<(Speciality, DimensionReport), SegreError> {
    let dims = model.virtual_and_expected_dim(&rec.cls, rec.h2_zero_assumed)?;
    let verdict = match (&rec.known_dim, rec.h2_zero_assumed) {
        (Some(d), true) if d > &dims.expected_dim => Speciality::Special,
        (Some(_), true) => Speciality::NonSpecial,
        _ => Speciality::Undetermined,
    };
    Ok((verdict, dims))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SegreBounds {
    /// Negative non-exceptional curves satisfy `C² ≥ −ν`, `p_a ≤ π`.
    List { nu: i64, pi: i64 },
    /// `χ(O_Y) ≤ 0`: every integral negative curve is exceptional.
    ExceptionalOnly,
}

/// `(ν, π) = (χ, χ − 1)`.
pub fn segre_bounds(chi: &Rational) -> Result<SegreBounds, SegreError> {
    if !chi.is_integer() {
        return Err(SegreError::Precondition(format!("χ(O_Y) must be an integer, got {chi}")));
    }
    if !chi.is_positive() {
        return Ok(SegreBounds::ExceptionalOnly);
    }
    let nu = i64::try_from(chi.floor()).map_err(|_| SegreError::Precondition("χ(O_Y) too large".into()))?;
    Ok(SegreBounds::List { nu, pi: nu - 1 })
}

/// `−1 ≥ C² ≥ p_a − χ ≥ −χ`.
pub fn curve_bound_holds(self_int: &Rational, genus: &Rational, chi: &Rational) -> bool {
    let mid = genus - chi;
    self_int <= &Rational::from(-1) && self_int >= &mid && mid >= -chi
}

pub fn curve_bound_check(c: &NegativeCurveRecord, chi: &Rational) -> bool {
    curve_bound_holds(&c.self_int, &c.genus, chi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PencilVerdict {
    Consistent,
    SegreFails,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PencilReport {
    pub chi: Rational,
    pub g: Rational,
    pub dim: Rational,
    pub verdict: PencilVerdict,
    /// `dim|C̃| + g + 1`, the value a positive answer forces on `χ(O_Y)`.
    pub forced_chi: Rational,
    /// `χ(O_Y) ≥ g + 1`.
    pub chi_bound_holds: bool,
    /// For `p_g = 0`: whether `g > 0` or `q = 1 − χ > 0`.
    pub pg_zero_failure: Option<bool>,
    /// Whether `C̃ = φ*C − E_1` (a `(−1, g)`-curve) passes the curve bound.
    pub curve_bound_holds: bool,
}

/// Tests a base-point-free genus-`g` pencil whose strict transform through one
/// blown-up point moves in a system of dimension `dim`.
pub fn pencil_counterexample(
    chi: &Rational,
    g: &Rational,
    dim: &Rational,
    pg: Option<&Rational>,
) -> Result<PencilReport, SegreError> {
    if dim.is_negative() {
        return Err(SegreError::Precondition(format!("the system must be non-empty, got dim = {dim}")));
    }
    if g.is_negative() {
        return Err(SegreError::Precondition(format!("genus must be non-negative, got {g}")));
    }
    let forced_chi = dim + g + Rational::one();
    let verdict = if &forced_chi == chi {
        PencilVerdict::Consistent
    } else {
        PencilVerdict::SegreFails
    };
    let pg_zero_failure = pg
        .filter(|p| p.is_zero())
        .map(|_| g.is_positive() || (Rational::one() - chi).is_positive());
    Ok(PencilReport {
        chi: chi.clone(),
        g: g.clone(),
        dim: dim.clone(),
        verdict,
        forced_chi,
        chi_bound_holds: chi >= &(g + Rational::one()),
        pg_zero_failure,
        curve_bound_holds: curve_bound_holds(&Rational::from(-1), g, chi),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum K3Kind {
    KindI,
    KindII,
    KindIII,
    Violates,
}

/// Table lookup on `(C², p_a, C·K)`.
pub fn classify_k3_triple(self_int: &Rational, genus: &Rational, ck: &Rational) -> Result<K3Kind, SegreError> {
    let expected = Rational::from(2) * genus - Rational::from(2) - self_int;
    if ck != &expected {
        return Err(SegreError::Adjunction {
            ck: ck.clone(),
            expected,
        });
    }
    let key = |a: i64, b: i64| self_int == &Rational::from(a) && genus == &Rational::from(b);
    Ok(if key(-1, 0) {
        K3Kind::KindI
    } else if key(-2, 0) {
        K3Kind::KindII
    } else if key(-1, 1) {
        K3Kind::KindIII
    } else {
        K3Kind::Violates
    })
}

pub fn classify_k3_curve(model: &BlowupModel, c: &NegativeCurveRecord) -> Result<K3Kind, SegreError> {
    if model.spec().class != SurfaceClass::K3 {
        return Err(SegreError::Precondition(format!(
            "kind classification needs a K3 base, got {:?}",
            model.spec().class
        )));
    }
    let ck = model
        .intersect(&c.cls, &model.canonical())?
        .as_rational()
        .cloned()
        .ok_or(LatticeError::IrrationalClass)?;
    classify_k3_triple(&c.self_int, &c.genus, &ck)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NagataVariant {
    /// `deg ≥ (Σ m_i)/√r`.
    Nagata,
    /// `deg² ≥ Σ m_i²`.
    Strong,
}

pub fn nagata_checks(deg: &Rational, mults: &[Rational], variant: NagataVariant) -> Result<bool, SegreError> {
    if mults.is_empty() {
        return Err(SegreError::Precondition("need at least one point".into()));
    }
    if !deg.is_positive() || mults.iter().any(Rational::is_negative) {
        return Err(SegreError::Precondition("degree must be positive and multiplicities non-negative".into()));
    }
    let d2 = deg * deg;
    Ok(match variant {
        NagataVariant::Nagata => {
            let sum: Rational = mults.iter().sum();
            d2 * Rational::from(mults.len()) >= &sum * &sum
        }
        NagataVariant::Strong => d2 >= mults.iter().map(|m| m * m).sum::<Rational>(),
    })
}

/// `min{−2, E_1², …, E_s²}` over the components of an effective anticanonical divisor.
pub fn negativity_bound_anticanonical(component_self_ints: &[Rational]) -> Rational {
    component_self_ints
        .iter()
        .cloned()
        .fold(Rational::from(-2), Rational::min)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveVerdict {
    pub curve: String,
    pub self_int: Rational,
    pub genus: Rational,
    pub exceptional: bool,
    pub bound_holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k3_kind: Option<K3Kind>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemVerdict {
    pub system: String,
    pub virtual_dim: Rational,
    pub expected_dim: Rational,
    pub known_dim: Option<Rational>,
    pub speciality: Speciality,
    /// Non-exceptional, non-empty, reduced and special.
    pub segre_counterexample: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SegreReport {
    pub chi: Rational,
    pub bounds: SegreBounds,
    pub curves: Vec<CurveVerdict>,
    pub systems: Vec<SystemVerdict>,
    pub pencils: Vec<PencilReport>,
}

impl SegreReport {
    /// True when some listed datum contradicts a positive answer.
    pub fn has_counterexample(&self) -> bool {
        self.systems.iter().any(|s| s.segre_counterexample)
            || self.pencils.iter().any(|p| p.verdict == PencilVerdict::SegreFails)
            || self.curves.iter().any(|c| !c.exceptional && !c.bound_holds)
            || self.curves.iter().any(|c| c.k3_kind == Some(K3Kind::Violates))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SegreReportError {
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error("{path}: {source}")]
    Item { path: String, source: SegreError },
}

/// Runs every checker on the curves, systems and pencils of a document.
pub fn segre_report(model: &BlowupModel, problem: &Problem) -> Result<SegreReport, SegreReportError> {
    let chi = model.base().chi.clone();
    let item = |path: String| move |source: SegreError| SegreReportError::Item { path, source };
    let bounds = segre_bounds(&chi).map_err(item("chi".into()))?;
    let is_k3 = model.spec().class == SurfaceClass::K3;
    let mut curves = Vec::new();
    for (i, c) in problem.curve_records(model)?.iter().enumerate() {
        let k3_kind = if is_k3 {
            Some(classify_k3_curve(model, c).map_err(item(format!("curves[{i}]")))?)
        } else {
            None
        };
        curves.push(CurveVerdict {
            curve: c.name(),
            self_int: c.self_int.clone(),
            genus: c.genus.clone(),
            exceptional: c.is_exceptional,
            bound_holds: curve_bound_check(c, &chi),
            k3_kind,
        });
    }
    let mut systems = Vec::new();
    for (i, s) in problem.systems.iter().enumerate() {
        let path = format!("systems[{i}]");
        let cls = model
            .rational_class(&s.coords)
            .map_err(|e| item(path.clone())(e.into()))?;
        let mut rec = LinearSystemRecord::new(
            model,
            cls,
            s.known_dim.clone(),
            s.reduced,
            s.exceptional_support,
            s.h2_zero_assumed,
        )
        .map_err(item(path.clone()))?;
        rec.label = s.label.clone();
        let (verdict, dims) = speciality(model, &rec).map_err(item(path))?;
        let nonempty = rec.known_dim.as_ref().is_some_and(|d| !d.is_negative());
        systems.push(SystemVerdict {
            system: rec.name(),
            virtual_dim: dims.virtual_dim,
            expected_dim: dims.expected_dim,
            known_dim: rec.known_dim.clone(),
            speciality: verdict,
            segre_counterexample: verdict == Speciality::Special && nonempty && rec.reduced && !rec.exceptional_support,
        });
    }
    let pg = model.spec().pg.clone();
    let mut pencils = Vec::new();
    for (i, p) in problem.pencils.iter().enumerate() {
        pencils.push(pencil_counterexample(&chi, &p.g, &p.dim, pg.as_ref()).map_err(item(format!("pencils[{i}]")))?);
    }
    Ok(SegreReport {
        chi,
        bounds,
        curves,
        systems,
        pencils,
    })
}
