//! Thresholds `s_n`, the conditions on `r`, ray-containment certificates
//! `R(C) ⊂ Pos + R(K − sL)`, and the sampled cone-equality check.

use std::cmp::Ordering;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::certificate::VerifyError;
use crate::cone_geometry::{in_positive_cone, ConeMembership};
use crate::scalar::{Rational, Scalar, ScalarError};
use crate::surface_lattice::{BlowupModel, DivisorClass, LatticeError, SurfaceSpec};
use crate::zariski::{
    isotropic_seed, random_boundary_element, random_positive_element, sample_rng, NegativeCurveRecord, SerializedCurve,
};

/// Largest dyadic exponent tried when `t0` would otherwise be a nested radical.
const MAX_DYADIC_BITS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ThresholdError {
    #[error("n must be a positive integer, got {0}")]
    InvalidN(Rational),
    #[error("r too small for n = {n}: Δ_n/4 = {delta_quarter} (binding inequality {binding})")]
    RadicandNegative {
        n: u32,
        delta_quarter: Rational,
        binding: String,
    },
    #[error("conditions on r fail: {}", .0.binding_inequality)]
    ConditionsUnmet(Box<ConditionReport>),
    #[error("curve {curve} violates {}", failures.join("; "))]
    CurveConditions { curve: String, failures: Vec<String> },
    #[error("curve {0} is contracted by L but not exceptional; general points rule this out")]
    ContractedNonExceptional(String),
    #[error("certificate for {curve} failed check {check}")]
    CertificateFailed { curve: String, check: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

impl ThresholdError {
    /// True for mathematical infeasibility, as opposed to bad input.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            ThresholdError::RadicandNegative { .. }
                | ThresholdError::ConditionsUnmet(_)
                | ThresholdError::CurveConditions { .. }
        )
    }
}

/// The numbers `A²`, `A·K_Y`, `K_Y²`, `r` that all thresholds depend on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThresholdContext {
    pub a_sq: Rational,
    pub ak: Rational,
    pub ky_sq: Rational,
    pub r: Rational,
}

fn positive_n(n: &Rational) -> Result<u32, ThresholdError> {
    if !n.is_integer() || !n.is_positive() {
        return Err(ThresholdError::InvalidN(n.clone()));
    }
    u32::try_from(n.floor()).map_err(|_| ThresholdError::InvalidN(n.clone()))
}

impl ThresholdContext {
    pub fn new(a_sq: Rational, ak: Rational, ky_sq: Rational, r: Rational) -> Result<ThresholdContext, ThresholdError> {
        if !a_sq.is_positive() {
            return Err(ThresholdError::Precondition(format!("A² must be positive, got {a_sq}")));
        }
        Ok(ThresholdContext { a_sq, ak, ky_sq, r })
    }

    pub fn from_model(model: &BlowupModel) -> ThresholdContext {
        ThresholdContext {
            a_sq: model.base().a_sq(),
            ak: model.base().a_dot_k(),
            ky_sq: model.base().ky_sq.clone(),
            r: Rational::from(model.r()),
        }
    }

    /// `Δ_n/4 = (A·K_Y)² − A²K_Y² + A²r − A²/n`.
    pub fn delta_quarter(&self, n: u32) -> Rational {
        &self.ak * &self.ak - &self.a_sq * &self.ky_sq + &self.a_sq * &self.r
            - &self.a_sq / Rational::from(i64::from(n))
    }

    /// `K_Y² + 1/n − (A·K_Y)²/A²`, the value `r` must exceed (n = 1) or reach.
    pub fn existence_bound(&self, n: u32) -> Rational {
        &self.ky_sq + Rational::one() / Rational::from(i64::from(n)) - &self.ak * &self.ak / &self.a_sq
    }

    /// `s_n = (A·K_Y + √(Δ_n/4))/A²`.
    pub fn s_threshold(&self, n: u32) -> Result<Scalar, ThresholdError> {
        if n == 0 {
            return Err(ThresholdError::InvalidN(Rational::zero()));
        }
        let dq = self.delta_quarter(n);
        let ok = if n == 1 { dq.is_positive() } else { !dq.is_negative() };
        if !ok {
            let rel = if n == 1 { ">" } else { "≥" };
            let nterm = if n == 1 { "1".to_string() } else { format!("1/{n}") };
            return Err(ThresholdError::RadicandNegative {
                n,
                delta_quarter: dq,
                binding: format!(
                    "r {rel} K_Y²+{nterm}−(A·K_Y)²/A² = {}",
                    self.existence_bound(n)
                ),
            });
        }
        let root = Scalar::sqrt_rational(&dq)?;
        Ok(root.add_rational(&self.ak).mul_rational(&self.a_sq.recip()))
    }

    /// `(K − sL)²` for a rational or quadratic `s`.
    pub fn k_minus_sl_sq(&self, s: &Scalar) -> Result<Scalar, ScalarError> {
        // K_Y² − r − 2s·A·K_Y + s²A²
        let lin = s.mul_rational(&(Rational::from(-2) * &self.ak));
        let quad = s.square().mul_rational(&self.a_sq);
        Ok(lin.checked_add(&quad)?.add_rational(&(&self.ky_sq - &self.r)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionBranch {
    /// `q ≤ A·K_Y/A²`: only `r > K_Y²+1−(A·K_Y)²/A²` is needed.
    Existence,
    /// `q > A·K_Y/A²`: `r ≥ K_Y²+1+A²q²−2(A·K_Y)q`.
    Genus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub nu: i64,
    pub pi: i64,
    pub q: i64,
    pub branch: ConditionBranch,
    pub bound: Rational,
    pub strict: bool,
    pub satisfied: bool,
    /// `r − bound`.
    pub slack: Rational,
    pub binding_inequality: String,
}

/// The summarized conditions with `q = 2π + ν − 1`.
pub fn check_conditions(ctx: &ThresholdContext, nu: i64, pi: i64) -> Result<ConditionReport, ThresholdError> {
    if nu < 1 || pi < 0 {
        return Err(ThresholdError::Precondition(format!("need ν ≥ 1 and π ≥ 0, got ν = {nu}, π = {pi}")));
    }
    let q = 2 * pi + nu - 1;
    let qr = Rational::from(q);
    let ratio = &ctx.ak / &ctx.a_sq;
    let (branch, bound, strict, text) = if qr <= ratio {
        let b = ctx.existence_bound(1);
        (ConditionBranch::Existence, b.clone(), true, format!("r > K_Y²+1−(A·K_Y)²/A² = {b}"))
    } else {
        let b = &ctx.ky_sq + Rational::one() + &ctx.a_sq * &qr * &qr - Rational::from(2) * &ctx.ak * &qr;
        (
            ConditionBranch::Genus,
            b.clone(),
            false,
            format!("r ≥ K_Y²+1+A²q²−2(A·K_Y)q = {b} (q = {q})"),
        )
    };
    let slack = &ctx.r - &bound;
    let satisfied = if strict { slack.is_positive() } else { !slack.is_negative() };
    Ok(ConditionReport {
        nu,
        pi,
        q,
        branch,
        bound,
        strict,
        satisfied,
        slack,
        binding_inequality: text,
    })
}

/// The per-curve hypotheses for an `(−n, p)`-curve; returns the violated ones.
pub fn curve_condition_failures(ctx: &ThresholdContext, n: u32, p: i64, contracted: bool) -> Vec<String> {
    let mut out = Vec::new();
    let b1 = ctx.existence_bound(n);
    let ok1 = if n == 1 { ctx.r > b1 } else { ctx.r >= b1 };
    if !ok1 {
        let rel = if n == 1 { ">" } else { "≥" };
        out.push(format!("r {rel} K_Y²+1/n−(A·K_Y)²/A² = {b1}"));
    }
    let q = 2 * p + i64::from(n) - 1;
    let qr = Rational::from(q);
    if !contracted && qr > &ctx.ak / &ctx.a_sq {
        let b2 = &ctx.ky_sq + Rational::one() / Rational::from(i64::from(n)) + &ctx.a_sq * &qr * &qr
            - Rational::from(2) * &ctx.ak * &qr;
        if ctx.r < b2 {
            out.push(format!("r ≥ K_Y²+1/n+A²q²−2(A·K_Y)q = {b2} (q = {q})"));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertChecks {
    pub alpha_sq_zero: bool,
    pub alpha_dot_h_nonneg: bool,
    pub t0_positive: bool,
}

/// Witness for `R(C) ⊂ Pos + R(K − sL)`.
///
/// `α = t0·C − (K − base_s·L)` is isotropic and `α·(L − δΣE_i) ≥ 0`, so `α`
/// lies in the closed positive cone. When `s ≥ base_s`, the identity
/// `t0·C = α + (s − base_s)L + (K − sL)` transfers containment to `s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayContainmentCert {
    pub surface: SurfaceSpec,
    pub curve: SerializedCurve,
    pub n: i64,
    pub p: i64,
    pub base_s: Scalar,
    pub s: Scalar,
    pub t0: Scalar,
    pub alpha: Vec<Scalar>,
    pub delta: Rational,
    pub checks: CertChecks,
}

impl RayContainmentCert {
    pub fn valid(&self) -> bool {
        self.checks.alpha_sq_zero && self.checks.alpha_dot_h_nonneg && self.checks.t0_positive
    }

    /// Re-checks the witness from its serialized form alone.
    pub fn verify(&self) -> Result<(), VerifyError> {
        let model = BlowupModel::from_spec(&self.surface).map_err(|e| VerifyError::new("surface", e.to_string()))?;
        let lat = |e: LatticeError| VerifyError::new("lattice", e.to_string());
        let curve = NegativeCurveRecord::from_serialized(&model, &self.curve)
            .map_err(|e| VerifyError::new("curve_record", e.to_string()))?;
        if curve.n() != Rational::from(self.n) || curve.genus != Rational::from(self.p) {
            return Err(VerifyError::new(
                "curve_type",
                format!("declared (−{}, {}) but the curve is (−{}, {})", self.n, self.p, curve.n(), curve.genus),
            ));
        }
        let alpha = model.class(self.alpha.clone()).map_err(lat)?;
        let sq = model.square(&alpha).map_err(lat)?;
        if !sq.is_zero() || !self.checks.alpha_sq_zero {
            return Err(VerifyError::new("alpha_sq_zero", format!("α² = {sq}")));
        }
        if !self.delta.is_positive() {
            return Err(VerifyError::new("delta_positive", format!("δ = {}", self.delta)));
        }
        let ah = alpha_h(&model, &alpha, &self.delta).map_err(lat)?;
        if ah.is_negative() || !self.checks.alpha_dot_h_nonneg {
            return Err(VerifyError::new("alpha_dot_h_nonneg", format!("α·h = {ah}")));
        }
        let inv_n = Scalar::from(Rational::one() / Rational::from(self.n));
        if !self.t0.is_positive() || self.t0.cmp_exact(&inv_n) == Ordering::Less || !self.checks.t0_positive {
            return Err(VerifyError::new("t0_positive", format!("t0 = {}, need t0 ≥ 1/{}", self.t0, self.n)));
        }
        let rebuilt = curve
            .cls
            .scale(&self.t0)
            .and_then(|tc| tc.sub(&model.canonical().sub(&model.polarization().scale(&self.base_s)?)?))
            .map_err(lat)?;
        if rebuilt != alpha {
            return Err(VerifyError::new("alpha_identity", format!("t0·C − (K − sL) = {rebuilt} ≠ α")));
        }
        if self.s.cmp_exact(&self.base_s) == Ordering::Less {
            return Err(VerifyError::new(
                "threshold_monotone",
                format!("target s = {} is below the witness threshold {}", self.s, self.base_s),
            ));
        }
        Ok(())
    }

    /// The same witness, read at a larger threshold.
    pub fn shift_to(&self, s: &Scalar) -> Option<RayContainmentCert> {
        (s.cmp_exact(&self.s) != Ordering::Less).then(|| RayContainmentCert {
            s: s.clone(),
            ..self.clone()
        })
    }
}

/// Default `δ` cap `1/(2r)`.
pub fn default_delta_cap(r: usize) -> Rational {
    Rational::one() / Rational::from(2 * r.max(1))
}

/// `δ = min(cap, lower(α·L) / (2r·max|α_E|))` when `α·ΣE_i > 0`, else `cap`.
///
/// Since `|α·ΣE_i| ≤ r·max|α_E|`, this keeps `δ·(α·ΣE_i) ≤ (α·L)/2`.
pub fn select_delta(model: &BlowupModel, alpha: &DivisorClass, cap: &Rational) -> Result<Rational, ThresholdError> {
    let r = model.r();
    if r == 0 {
        return Ok(cap.clone());
    }
    let b = model.intersect(alpha, &sum_exceptional(model)?)?;
    if b.sign() <= 0 {
        return Ok(cap.clone());
    }
    let a = model.intersect(alpha, &model.polarization())?;
    let Some(lower) = a.positive_rational_below() else {
        return Ok(cap.clone());
    };
    let m = model.ns_rank();
    let max_coef = alpha.coords()[m..]
        .iter()
        .map(|c| c.abs().dyadic_ceil(16))
        .max()
        .unwrap_or_else(Rational::one)
        .max(Rational::new(1, 1 << 16));
    let rule = lower / (Rational::from(2 * r) * max_coef);
    Ok(rule.min(cap.clone()))
}

fn sum_exceptional(model: &BlowupModel) -> Result<DivisorClass, LatticeError> {
    (1..=model.r()).try_fold(model.zero_class(), |acc, i| acc.add(&model.exceptional(i)?))
}

struct Attempt {
    base_s: Scalar,
    t0: Scalar,
    alpha: DivisorClass,
    delta: Rational,
    checks: CertChecks,
}

fn attempt(
    model: &BlowupModel,
    curve: &NegativeCurveRecord,
    n: u32,
    s: &Scalar,
    t0: Scalar,
    cap: &Rational,
) -> Result<Attempt, ThresholdError> {
    let d = model.canonical().sub(&model.polarization().scale(s)?)?;
    let alpha = curve.cls.scale(&t0)?.sub(&d)?;
    let delta = select_delta(model, &alpha, cap)?;
    let h = model.ample_h(&delta)?;
    let inv_n = Rational::one() / Rational::from(i64::from(n));
    let checks = CertChecks {
        alpha_sq_zero: model.square(&alpha)?.is_zero(),
        alpha_dot_h_nonneg: model.intersect(&alpha, &h)?.sign() >= 0,
        t0_positive: t0.is_positive() && t0.cmp_exact(&Scalar::from(inv_n)) != Ordering::Less,
    };
    Ok(Attempt {
        base_s: s.clone(),
        t0,
        alpha,
        delta,
        checks,
    })
}

/// `t0 = (−c + √(c² + n·D²))/n` with `c = C·D`, `D = K − sL`; `None` when
/// the root would leave the field of `s`.
fn t0_at(
    model: &BlowupModel,
    curve: &NegativeCurveRecord,
    n: u32,
    s: &Scalar,
) -> Result<Option<Scalar>, ThresholdError> {
    let d = model.canonical().sub(&model.polarization().scale(s)?)?;
    let c = model.intersect(&curve.cls, &d)?;
    let d_sq = model.square(&d)?;
    let disc = c.square().checked_add(&d_sq.mul_rational(&Rational::from(i64::from(n))))?;
    if disc.is_negative() {
        return Ok(None);
    }
    match disc.sqrt() {
        Ok(root) => Ok(Some(
            root.checked_sub(&c)?
                .mul_rational(&(Rational::one() / Rational::from(i64::from(n)))),
        )),
        Err(ScalarError::NotASquare(_)) | Err(ScalarError::MixedRadicals { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Builds the containment certificate for `curve` with target threshold `s`.
pub fn ray_certificate(
    model: &BlowupModel,
    curve: &NegativeCurveRecord,
    s: &Scalar,
) -> Result<RayContainmentCert, ThresholdError> {
    ray_certificate_with_cap(model, curve, s, &default_delta_cap(model.r()))
}

pub fn ray_certificate_with_cap(
    model: &BlowupModel,
    curve: &NegativeCurveRecord,
    s: &Scalar,
    delta_cap: &Rational,
) -> Result<RayContainmentCert, ThresholdError> {
    let n = positive_n(&curve.n())?;
    if !curve.genus.is_integer() {
        return Err(ThresholdError::Precondition(format!("genus of {} is not an integer", curve.name())));
    }
    let p = i64::try_from(curve.genus.floor()).map_err(|_| ThresholdError::Precondition("genus too large".into()))?;
    let ctx = ThresholdContext::from_model(model);
    let cl = model.intersect(&curve.cls, &model.polarization())?;
    let contracted = cl.is_zero();
    if contracted && !curve.is_exceptional {
        return Err(ThresholdError::ContractedNonExceptional(curve.name()));
    }
    let failures = curve_condition_failures(&ctx, n, p, contracted);
    if !failures.is_empty() {
        return Err(ThresholdError::CurveConditions {
            curve: curve.name(),
            failures,
        });
    }
    let s_n = ctx.s_threshold(n)?;
    if s.cmp_exact(&s_n) == Ordering::Less {
        return Err(ThresholdError::Precondition(format!(
            "target threshold {s} is below s_{n} = {s_n}"
        )));
    }

    let mut chosen = None;
    if let Some(t0) = t0_at(model, curve, n, &s_n)? {
        let a = attempt(model, curve, n, &s_n, t0, delta_cap)?;
        chosen = Some(a);
    } else {
        // t0 is a nested radical at s_n; move to a rational s' just below it.
        for bits in 1..=MAX_DYADIC_BITS {
            let s_low = Scalar::from(s_n.dyadic_floor(bits));
            let Some(t0) = t0_at(model, curve, n, &s_low)? else { continue };
            let a = attempt(model, curve, n, &s_low, t0, delta_cap)?;
            if a.checks.alpha_sq_zero && a.checks.alpha_dot_h_nonneg && a.checks.t0_positive {
                chosen = Some(a);
                break;
            }
        }
    }
    let a = chosen.ok_or_else(|| ThresholdError::CertificateFailed {
        curve: curve.name(),
        check: "no rational threshold below s_n yields a witness".into(),
    })?;
    Ok(RayContainmentCert {
        surface: model.spec().clone(),
        curve: curve.to_serialized(),
        n: i64::from(n),
        p,
        base_s: a.base_s,
        s: s.clone(),
        t0: a.t0,
        alpha: a.alpha.into_coords(),
        delta: a.delta,
        checks: a.checks,
    })
}

/// `s_1 < s_2 < … < s_ν`, verified exactly.
pub fn s_monotonicity(ctx: &ThresholdContext, nu: u32) -> Result<Vec<Scalar>, ThresholdError> {
    if nu == 0 {
        return Err(ThresholdError::InvalidN(Rational::zero()));
    }
    let list: Vec<Scalar> = (1..=nu).map(|n| ctx.s_threshold(n)).collect::<Result<_, _>>()?;
    for w in list.windows(2) {
        if w[0].cmp_exact(&w[1]) != Ordering::Less {
            return Err(ThresholdError::Internal(format!("thresholds not increasing: {} ≥ {}", w[0], w[1])));
        }
    }
    Ok(list)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NegativityReport {
    pub s: Scalar,
    pub delta: Rational,
    /// `(K − sL)·(L − δΣE_i)` computed from the lattice.
    pub value: Scalar,
    /// `−√(Δ_n/4) + rδ`.
    pub closed_form: Scalar,
    pub negative: bool,
}

/// Evaluates `(K − s_n L)·h` for `h = L − δΣE_i` both directly and through
/// the closed form, and fails if they disagree.
pub fn k_minus_sl_h_negative(model: &BlowupModel, n: u32, delta: &Rational) -> Result<NegativityReport, ThresholdError> {
    if delta.is_negative() {
        return Err(ThresholdError::Precondition(format!("δ must be non-negative, got {delta}")));
    }
    let ctx = ThresholdContext::from_model(model);
    let s = ctx.s_threshold(n)?;
    let h = model.ample_h_unchecked(delta);
    let d = model.canonical().sub(&model.polarization().scale(&s)?)?;
    let value = model.intersect(&d, &h)?;
    let closed_form = Scalar::sqrt_rational(&ctx.delta_quarter(n))?
        .mul_rational(&Rational::from(-1))
        .add_rational(&(delta * Rational::from(model.r())));
    if value != closed_form {
        return Err(ThresholdError::Internal(format!(
            "(K − sL)·h = {value} but closed form gives {closed_form}"
        )));
    }
    Ok(NegativityReport {
        negative: value.is_negative(),
        s,
        delta: delta.clone(),
        value,
        closed_form,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MainTheoremReport {
    pub seed: u64,
    pub samples: usize,
    pub nu: i64,
    pub pi: i64,
    pub s: Scalar,
    pub conditions: ConditionReport,
    pub certificates: Vec<RayContainmentCert>,
    /// Samples with `γ·(K − sL) ≥ 0`.
    pub active: usize,
    pub counterexamples: Vec<String>,
}

impl MainTheoremReport {
    pub fn ok(&self) -> bool {
        self.counterexamples.is_empty() && self.certificates.iter().all(RayContainmentCert::valid)
    }
}

/// Certifies every listed curve at `s = s_ν`, then samples classes
/// `γ = (boundary element) + Σ c_i C_i` and checks that each with
/// `γ·(K − sL) ≥ 0` lies in the positive cone.
pub fn main_theorem_check(
    model: &BlowupModel,
    curves: &[NegativeCurveRecord],
    nu: i64,
    pi: i64,
    samples: usize,
    seed: u64,
) -> Result<MainTheoremReport, ThresholdError> {
    let ctx = ThresholdContext::from_model(model);
    let conditions = check_conditions(&ctx, nu, pi)?;
    if !conditions.satisfied {
        return Err(ThresholdError::ConditionsUnmet(Box::new(conditions)));
    }
    for c in curves {
        let n = c.n();
        if !(n >= Rational::one() && n <= Rational::from(nu) && !c.genus.is_negative() && c.genus <= Rational::from(pi)) {
            return Err(ThresholdError::Precondition(format!(
                "curve {} is a (−{}, {})-curve, outside the list bounds ν = {nu}, π = {pi}",
                c.name(),
                n,
                c.genus
            )));
        }
    }
    let nu_u = u32::try_from(nu).map_err(|_| ThresholdError::InvalidN(Rational::from(nu)))?;
    let s = ctx.s_threshold(nu_u)?;

    let mut certificates = Vec::with_capacity(curves.len());
    for c in curves {
        let cert = ray_certificate(model, c, &s)?;
        if !cert.valid() {
            let check = if !cert.checks.alpha_sq_zero {
                "alpha_sq_zero"
            } else if !cert.checks.alpha_dot_h_nonneg {
                "alpha_dot_h_nonneg"
            } else {
                "t0_positive"
            };
            return Err(ThresholdError::CertificateFailed {
                curve: c.name(),
                check: check.into(),
            });
        }
        certificates.push(cert);
    }

    let d = model.canonical().sub(&model.polarization().scale(&s)?)?;
    let iso = isotropic_seed(model);
    let mut active = 0;
    let mut counterexamples = Vec::new();
    for i in 0..samples {
        let mut rng = sample_rng(seed, i as u64);
        let mut gamma = match &iso {
            Some(f) => random_boundary_element(model, f, &mut rng),
            None => random_positive_element(model, &mut rng),
        };
        // reflecting in the negative vector D keeps the positive nappe and makes γ·D ≥ 0
        let gd = model.intersect(&gamma, &d)?;
        if gd.is_negative() {
            let k = gd.mul_rational(&Rational::from(2 * nu));
            gamma = gamma.add(&d.scale(&k)?)?;
        }
        if !curves.is_empty() {
            let k = rng.gen_range(1..=3usize).min(curves.len());
            for idx in sample(&mut rng, curves.len(), k) {
                let coef: i64 = rng.gen_range(0..=10);
                gamma = gamma.add(&curves[idx].cls.scale_rational(&Rational::from(coef)))?;
            }
        }
        if model.intersect(&gamma, &d)?.sign() >= 0 {
            active += 1;
            if in_positive_cone(model, &gamma)? == ConeMembership::Outside {
                counterexamples.push(format!("sample {i}: γ = {gamma}"));
            }
        }
    }
    Ok(MainTheoremReport {
        seed,
        samples,
        nu,
        pi,
        s,
        conditions,
        certificates,
        active,
        counterexamples,
    })
}

/// `α·(L − δΣE_i)`.
fn alpha_h(model: &BlowupModel, alpha: &DivisorClass, delta: &Rational) -> Result<Scalar, LatticeError> {
    let h = model.polarization().sub(&sum_exceptional(model)?.scale_rational(delta))?;
    model.intersect(alpha, &h)
}
