//! Witnesses that the positive cone is strictly smaller than the Mori cone on
//! the half-space `K ≥ 0`.
//!
//! A witness is an isotropic `α` in the closed positive cone with
//! `α·C ≤ 0` and `α·K > 0` for an exceptional curve `C`; then
//! `γ = C + λα` is effective, has `γ² < 0` and `γ·K > 0`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::certificate::VerifyError;
use crate::scalar::{Rational, Scalar, ScalarError};
use crate::surface_lattice::{BlowupModel, DivisorClass, LatticeError, SurfaceSpec};
use crate::thresholds::{default_delta_cap, select_delta, ThresholdContext, ThresholdError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StrictError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{check} fails at s = {s}: {detail}")]
    CheckFailed { check: String, s: String, detail: String },
    #[error("inequality not satisfied: A·K_Y + √(A²(r−1)) = {0} ≤ 0")]
    InequalityNotSatisfied(Scalar),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Threshold(#[from] ThresholdError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ConditionSet {
    A,
    B,
    C,
    D,
}

/// Exact evaluation of the four sufficient systems on `(r, K_Y², A·K_Y, A²)`.
pub fn condition_sets(ctx: &ThresholdContext) -> Vec<ConditionSet> {
    let ThresholdContext { a_sq: y, ak: x, ky_sq: k2, r } = ctx;
    let z = k2 + Rational::one();
    let bound = &z - x * x / y;
    let mut out = Vec::new();
    if r <= &bound && x.is_positive() && y < &(x * x) {
        out.push(ConditionSet::A);
    }
    if r > &bound && r <= &z && x.is_positive() {
        out.push(ConditionSet::B);
    }
    if r.is_positive() && k2.is_negative() {
        out.push(ConditionSet::C);
    }
    if r > &z && !k2.is_negative() {
        out.push(ConditionSet::D);
    }
    out
}

/// `a s² + b s + c`.
#[derive(Debug, Clone)]
struct Quadratic {
    a: Rational,
    b: Rational,
    c: Rational,
}

impl Quadratic {
    fn eval(&self, s: &Scalar) -> Scalar {
        s.square()
            .mul_rational(&self.a)
            .checked_add(&s.mul_rational(&self.b))
            .expect("same field")
            .add_rational(&self.c)
    }

    fn real_roots(&self) -> Result<Vec<Scalar>, ScalarError> {
        if self.a.is_zero() {
            if self.b.is_zero() {
                return Ok(Vec::new());
            }
            return Ok(vec![Scalar::from(-&self.c / &self.b)]);
        }
        let disc = &self.b * &self.b - Rational::from(4) * &self.a * &self.c;
        if disc.is_negative() {
            return Ok(Vec::new());
        }
        let root = Scalar::sqrt_rational(&disc)?;
        let inv = (Rational::from(2) * &self.a).recip();
        let minus_b = Scalar::from(-&self.b);
        Ok(vec![
            minus_b.checked_sub(&root)?.mul_rational(&inv),
            minus_b.checked_add(&root)?.mul_rational(&inv),
        ])
    }
}

/// The polynomials of the system in `s`, with `x = A·K_Y`, `y = A²`,
/// `u = r − K_Y² − 1`:
/// `f = Δ_t = ys² − 2xs − u`, `g = u + xs`, and `h = g² − f`.
struct SSystem {
    lower: Rational,
    f: Quadratic,
    g: Quadratic,
    h: Quadratic,
    r_positive: bool,
}

impl SSystem {
    fn new(ctx: &ThresholdContext) -> SSystem {
        let x = &ctx.ak;
        let y = &ctx.a_sq;
        let u = &ctx.r - &ctx.ky_sq - Rational::one();
        let two = Rational::from(2);
        SSystem {
            lower: x / y,
            f: Quadratic {
                a: y.clone(),
                b: -(&two * x),
                c: -u.clone(),
            },
            g: Quadratic {
                a: Rational::zero(),
                b: x.clone(),
                c: u.clone(),
            },
            h: Quadratic {
                a: x * x - y,
                b: &two * x * (&u + Rational::one()),
                c: &u * (&u + Rational::one()),
            },
            r_positive: ctx.r.is_positive(),
        }
    }

    /// `s > x/y`, `Δ_t ≥ 0` and `u + xs > √Δ_t`.
    fn feasible(&self, s: &Scalar) -> bool {
        self.r_positive
            && s.cmp_exact(&Scalar::from(self.lower.clone())) == Ordering::Greater
            && self.f.eval(s).sign() >= 0
            && self.g.eval(s).is_positive()
            && self.h.eval(s).is_positive()
    }

    fn critical_points(&self) -> Result<Vec<Scalar>, ScalarError> {
        let mut pts = vec![Scalar::from(self.lower.clone())];
        for q in [&self.f, &self.g, &self.h] {
            pts.extend(q.real_roots()?);
        }
        pts.sort_by(|a, b| a.cmp_exact(b));
        pts.dedup_by(|a, b| a.cmp_exact(b) == Ordering::Equal);
        Ok(pts)
    }
}

/// A maximal interval of feasible `s`; `None` bounds are infinite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SInterval {
    pub lower: Option<Scalar>,
    pub lower_closed: bool,
    pub upper: Option<Scalar>,
    pub upper_closed: bool,
    /// A rational strictly inside, when the interval is not a single irrational point.
    pub sample: Option<Rational>,
}

impl SInterval {
    pub fn contains(&self, s: &Scalar) -> bool {
        let above = match &self.lower {
            None => true,
            Some(l) => match s.cmp_exact(l) {
                Ordering::Greater => true,
                Ordering::Equal => self.lower_closed,
                Ordering::Less => false,
            },
        };
        let below = match &self.upper {
            None => true,
            Some(u) => match s.cmp_exact(u) {
                Ordering::Less => true,
                Ordering::Equal => self.upper_closed,
                Ordering::Greater => false,
            },
        };
        above && below
    }
}

enum Piece<'a> {
    Open(Option<&'a Scalar>, Option<&'a Scalar>),
    Point(&'a Scalar),
}

fn open_sample(lo: Option<&Scalar>, hi: Option<&Scalar>) -> Rational {
    match (lo, hi) {
        (Some(l), Some(h)) => Scalar::rational_between(l, h).expect("distinct critical points"),
        (Some(l), None) => Rational::from(l.floor() + 1),
        (None, Some(h)) => Rational::from(h.floor() - 1),
        (None, None) => Rational::zero(),
    }
}

/// Feasible `s` as exact intervals, by a sign sweep over all critical points.
pub fn solve_s_system(ctx: &ThresholdContext) -> Result<Vec<SInterval>, StrictError> {
    let sys = SSystem::new(ctx);
    let pts = sys.critical_points()?;
    let mut pieces = vec![Piece::Open(None, pts.first())];
    for (i, p) in pts.iter().enumerate() {
        pieces.push(Piece::Point(p));
        pieces.push(Piece::Open(Some(p), pts.get(i + 1)));
    }
    let mut out: Vec<SInterval> = Vec::new();
    let mut current: Option<SInterval> = None;
    let mut open_sampled = false;
    for piece in &pieces {
        let (member, sample) = match piece {
            Piece::Open(lo, hi) => {
                let q = open_sample(*lo, *hi);
                (sys.feasible(&Scalar::from(q.clone())), Some(q))
            }
            Piece::Point(p) => (sys.feasible(p), p.as_rational().cloned()),
        };
        if member {
            if current.is_none() {
                open_sampled = false;
            }
            let cur = current.get_or_insert_with(|| match piece {
                Piece::Open(lo, _) => SInterval {
                    lower: lo.cloned(),
                    lower_closed: false,
                    upper: None,
                    upper_closed: false,
                    sample: None,
                },
                Piece::Point(p) => SInterval {
                    lower: Some((*p).clone()),
                    lower_closed: true,
                    upper: None,
                    upper_closed: false,
                    sample: None,
                },
            });
            // interior points of open pieces are preferred over endpoints
            let is_open = matches!(piece, Piece::Open(..));
            if cur.sample.is_none() || (is_open && !open_sampled) {
                cur.sample = sample;
                open_sampled |= is_open;
            }
            match piece {
                Piece::Open(_, hi) => {
                    cur.upper = hi.cloned();
                    cur.upper_closed = false;
                }
                Piece::Point(p) => {
                    cur.upper = Some((*p).clone());
                    cur.upper_closed = true;
                }
            }
        } else if let Some(done) = current.take() {
            out.push(done);
        }
    }
    out.extend(current);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    FromS,
    Uniruled,
}

/// `α`, the witness curve `C = E_i`, and once completed, `λ` and `γ = C + λα`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrictInclusionWitness {
    pub surface: SurfaceSpec,
    pub construction: Construction,
    /// Index `i` of `C = E_i`.
    pub curve: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Scalar>,
    pub alpha: Vec<Scalar>,
    pub delta: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<Scalar>>,
}

fn fail(check: &str, detail: impl Into<String>) -> VerifyError {
    VerifyError::new(check, detail)
}

impl StrictInclusionWitness {
    /// Re-checks every invariant from the serialized data alone.
    pub fn verify(&self) -> Result<(), VerifyError> {
        let model = BlowupModel::from_spec(&self.surface).map_err(|e| fail("surface", e.to_string()))?;
        let lat = |e: LatticeError| fail("lattice", e.to_string());
        let alpha = model.class(self.alpha.clone()).map_err(lat)?;
        let c = model.exceptional(self.curve).map_err(lat)?;
        let k = model.canonical();
        if !model.square(&alpha).map_err(lat)?.is_zero() {
            return Err(fail("alpha_sq_zero", format!("α = {alpha}")));
        }
        if !self.delta.is_positive() {
            return Err(fail("delta_positive", format!("δ = {}", self.delta)));
        }
        let h = model.ample_h(&self.delta).map_err(lat)?;
        let ah = model.intersect(&alpha, &h).map_err(lat)?;
        if ah.is_negative() {
            return Err(fail("alpha_dot_h_nonneg", format!("α·h = {ah}")));
        }
        let ac = model.intersect(&alpha, &c).map_err(lat)?;
        if ac.is_positive() {
            return Err(fail("alpha_dot_c_nonpos", format!("α·C = {ac}")));
        }
        let ak = model.intersect(&alpha, &k).map_err(lat)?;
        if !ak.is_positive() {
            return Err(fail("alpha_dot_k_positive", format!("α·K = {ak}")));
        }
        if let (Some(s), Some(t)) = (&self.s, &self.t) {
            let rebuilt = c
                .scale(t)
                .and_then(|tc| tc.sub(&k.sub(&model.polarization().scale(s)?)?))
                .map_err(lat)?;
            if rebuilt != alpha {
                return Err(fail("alpha_identity", format!("tC − (K − sL) = {rebuilt} ≠ α")));
            }
        }
        if let (Some(lambda), Some(gamma)) = (&self.lambda, &self.gamma) {
            let gamma = model.class(gamma.clone()).map_err(lat)?;
            let rebuilt = alpha.scale(lambda).and_then(|la| c.add(&la)).map_err(lat)?;
            if rebuilt != gamma {
                return Err(fail("gamma_identity", format!("C + λα = {rebuilt} ≠ γ")));
            }
            if !lambda.is_positive() {
                return Err(fail("lambda_positive", format!("λ = {lambda}")));
            }
            let g2 = model.square(&gamma).map_err(lat)?;
            if !g2.is_negative() {
                return Err(fail("gamma_sq_negative", format!("γ² = {g2}")));
            }
            let gk = model.intersect(&gamma, &k).map_err(lat)?;
            if !gk.is_positive() {
                return Err(fail("gamma_dot_k_positive", format!("γ·K = {gk}")));
            }
        }
        Ok(())
    }
}

fn check_alpha(
    model: &BlowupModel,
    alpha: &DivisorClass,
    c: &DivisorClass,
    delta: &Rational,
    s_text: &str,
) -> Result<(), StrictError> {
    let failed = |check: &str, detail: String| StrictError::CheckFailed {
        check: check.into(),
        s: s_text.into(),
        detail,
    };
    let sq = model.square(alpha)?;
    if !sq.is_zero() {
        return Err(failed("alpha_sq_zero", format!("α² = {sq}")));
    }
    let ah = model.intersect(alpha, &model.ample_h(delta)?)?;
    if ah.is_negative() {
        return Err(failed("alpha_dot_h_nonneg", format!("α·h = {ah}")));
    }
    let ac = model.intersect(alpha, c)?;
    if ac.is_positive() {
        return Err(failed("alpha_dot_c_nonpos", format!("α·C = {ac}")));
    }
    let ak = model.intersect(alpha, &model.canonical())?;
    if !ak.is_positive() {
        return Err(failed("alpha_dot_k_positive", format!("α·K = {ak}")));
    }
    Ok(())
}

/// `α = tE_i − (K − sL)` with `t = 1 + √Δ_t`, `Δ_t = (E_i·(K − sL))² + (K − sL)²`.
pub fn alpha_from_s(model: &BlowupModel, s: &Scalar, i: usize) -> Result<StrictInclusionWitness, StrictError> {
    if model.r() == 0 {
        return Err(StrictError::Precondition("needs at least one blown-up point".into()));
    }
    let c = model.exceptional(i)?;
    let d = model.canonical().sub(&model.polarization().scale(s)?)?;
    let cd = model.intersect(&c, &d)?;
    let delta_t = cd.square().checked_add(&model.square(&d)?)?;
    if delta_t.is_negative() {
        return Err(StrictError::CheckFailed {
            check: "delta_t_nonneg".into(),
            s: s.to_string(),
            detail: format!("Δ_t = {delta_t}"),
        });
    }
    let root = delta_t.sqrt().map_err(|e| match e {
        ScalarError::NotASquare(_) => StrictError::Precondition(format!(
            "√Δ_t is a nested radical at s = {s}; pass a rational s"
        )),
        other => other.into(),
    })?;
    let t = root.add_rational(&Rational::one());
    let alpha = c.scale(&t)?.sub(&d)?;
    let delta = select_delta(model, &alpha, &default_delta_cap(model.r()))?;
    check_alpha(model, &alpha, &c, &delta, &s.to_string())?;
    Ok(StrictInclusionWitness {
        surface: model.spec().clone(),
        construction: Construction::FromS,
        curve: i,
        s: Some(s.clone()),
        t: Some(t),
        alpha: alpha.into_coords(),
        delta,
        lambda: None,
        gamma: None,
    })
}

/// `α = π*A − √(A²/(r−1))·Σ_{i<r} E_i`, paired with `C = E_r`.
pub fn uniruled_witness(model: &BlowupModel) -> Result<StrictInclusionWitness, StrictError> {
    let r = model.r();
    if r < 2 {
        return Err(StrictError::Precondition(format!("needs r ≥ 2, got {r}")));
    }
    let a_sq = model.base().a_sq();
    let coef = Scalar::sqrt_rational(&(&a_sq / Rational::from(r - 1)))?;
    let mut coords = model.polarization().into_coords();
    let m = model.ns_rank();
    for slot in coords.iter_mut().skip(m).take(r - 1) {
        *slot = -&coef;
    }
    let alpha = model.class(coords)?;
    let ak = model.intersect(&alpha, &model.canonical())?;
    let expected = Scalar::sqrt_rational(&(&a_sq * Rational::from(r - 1)))?.add_rational(&model.base().a_dot_k());
    if ak != expected {
        return Err(StrictError::Precondition(format!("α·K = {ak} disagrees with A·K_Y + √(A²(r−1)) = {expected}")));
    }
    if !ak.is_positive() {
        return Err(StrictError::InequalityNotSatisfied(ak));
    }
    let c = model.exceptional(r)?;
    let delta = select_delta(model, &alpha, &default_delta_cap(r))?;
    check_alpha(model, &alpha, &c, &delta, "n/a")?;
    Ok(StrictInclusionWitness {
        surface: model.spec().clone(),
        construction: Construction::Uniruled,
        curve: r,
        s: None,
        t: None,
        alpha: alpha.into_coords(),
        delta,
        lambda: None,
        gamma: None,
    })
}

/// Completes a witness with `λ = (2 + |C·K|)/(α·K)` and `γ = C + λα`.
pub fn gamma_witness(mut w: StrictInclusionWitness) -> Result<StrictInclusionWitness, StrictError> {
    let model = BlowupModel::from_spec(&w.surface).map_err(LatticeError::from)?;
    let alpha = model.class(w.alpha.clone())?;
    let c = model.exceptional(w.curve)?;
    let k = model.canonical();
    let ak = model.intersect(&alpha, &k)?;
    if !ak.is_positive() {
        return Err(StrictError::Precondition(format!("need α·K > 0, got {ak}")));
    }
    let ac = model.intersect(&alpha, &c)?;
    if ac.is_positive() {
        return Err(StrictError::Precondition(format!("need α·C ≤ 0, got {ac}")));
    }
    let ck = model.intersect(&c, &k)?;
    let lambda = ck.abs().add_rational(&Rational::from(2)).checked_div(&ak)?;
    let gamma = c.add(&alpha.scale(&lambda)?)?;
    let g2 = model.square(&gamma)?;
    let gk = model.intersect(&gamma, &k)?;
    if !g2.is_negative() || !gk.is_positive() {
        return Err(StrictError::CheckFailed {
            check: "gamma".into(),
            s: w.s.as_ref().map_or("n/a".into(), ToString::to_string),
            detail: format!("γ² = {g2}, γ·K = {gk}"),
        });
    }
    w.lambda = Some(lambda);
    w.gamma = Some(gamma.into_coords());
    Ok(w)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrictReport {
    pub condition_sets: Vec<ConditionSet>,
    pub intervals: Vec<SInterval>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub from_s: Option<StrictInclusionWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub from_s_failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uniruled: Option<StrictInclusionWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uniruled_failure: Option<String>,
}

impl StrictReport {
    pub fn witness_found(&self) -> bool {
        self.from_s.is_some() || self.uniruled.is_some()
    }
}

/// Runs both constructions and completes every `α` found to a `γ`.
pub fn strict_inclusion_report(model: &BlowupModel) -> Result<StrictReport, StrictError> {
    let ctx = ThresholdContext::from_model(model);
    let condition_sets = condition_sets(&ctx);
    let intervals = solve_s_system(&ctx)?;
    let (from_s, from_s_failure) = match intervals.iter().find_map(|iv| iv.sample.clone()) {
        None => (None, Some("no feasible s".to_string())),
        Some(_) if model.r() == 0 => (None, Some("r = 0".to_string())),
        Some(s) => match alpha_from_s(model, &Scalar::from(s), 1).and_then(gamma_witness) {
            Ok(w) => (Some(w), None),
            Err(e) => (None, Some(e.to_string())),
        },
    };
    let (uniruled, uniruled_failure) = match uniruled_witness(model).and_then(gamma_witness) {
        Ok(w) => (Some(w), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(StrictReport {
        condition_sets,
        intervals,
        from_s,
        from_s_failure,
        uniruled,
        uniruled_failure,
    })
}
