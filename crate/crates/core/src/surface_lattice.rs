//! Numerical model of a surface `Y` and its blow-up `X = Bl_r Y`.
//!
//! Classes on `X` are coordinate vectors in the basis
//! `{pullback of the NS(Y) basis, E_1, …, E_r}`. The intersection form of `X`
//! is `gram_Y ⊕ (−Id_r)`, the canonical class is `π*K_Y + ΣE_i`, and the
//! polarization `L` is the pullback of the chosen ample class `A`.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::cone_geometry::congruence_diagonalize;
use crate::scalar::{Rational, Scalar, ScalarError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SurfaceClass {
    P2,
    K3,
    Abelian,
    Enriques,
    Bielliptic,
    GeneralType,
    Other,
}

/// Serialized description of `Y` together with the number of blown-up points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub chi: Rational,
    #[serde(rename = "kY_sq")]
    pub ky_sq: Rational,
    #[serde(rename = "gram_Y")]
    pub gram_y: Vec<Vec<Rational>>,
    #[serde(rename = "k_Y")]
    pub k_y: Vec<Rational>,
    #[serde(rename = "a_Y")]
    pub a_y: Vec<Rational>,
    pub class: SurfaceClass,
    pub r: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pg: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Rational>,
}

/// A validation failure pinned to a field path such as `gram_Y[0][1]`.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct SchemaError {
    pub path: String,
    pub message: String,
}

impl SchemaError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        SchemaError {
            path: path.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("invalid surface description: {0}")]
    Schema(#[from] SchemaError),
    #[error("classes belong to different models")]
    ModelMismatch,
    #[error("class has {got} coordinates, model rank is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("exceptional index {index} out of range 1..={r}")]
    IndexOutOfRange { index: usize, r: usize },
    #[error("delta must be positive, got {0}")]
    NonPositiveDelta(Rational),
    #[error("non-integral class for adjunction: C² + C·K = {0}")]
    NonIntegralAdjunction(String),
    #[error("operation requires rational coordinates")]
    IrrationalClass,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Validated numerical data of the base surface `Y`.
#[derive(Debug, Clone)]
pub struct SurfaceModel {
    pub chi: Rational,
    pub ky_sq: Rational,
    pub gram_y: Vec<Vec<Rational>>,
    pub k_y: Vec<Rational>,
    pub a_y: Vec<Rational>,
    pub class: SurfaceClass,
    pub pg: Option<Rational>,
    pub q_irr: Option<Rational>,
}

fn form(gram: &[Vec<Rational>], x: &[Rational], y: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (i, row) in gram.iter().enumerate() {
        if x[i].is_zero() {
            continue;
        }
        let mut inner = Rational::zero();
        for (j, g) in row.iter().enumerate() {
            if !g.is_zero() && !y[j].is_zero() {
                inner += g * &y[j];
            }
        }
        acc += &x[i] * inner;
    }
    acc
}

impl SurfaceModel {
    pub fn from_spec(spec: &SurfaceSpec) -> Result<SurfaceModel, SchemaError> {
        let m = spec.gram_y.len();
        if m == 0 {
            return Err(SchemaError::new("gram_Y", "Néron–Severi rank must be positive"));
        }
        for (i, row) in spec.gram_y.iter().enumerate() {
            if row.len() != m {
                return Err(SchemaError::new(
                    format!("gram_Y[{i}]"),
                    format!("row has {} entries, expected {m}", row.len()),
                ));
            }
        }
        for i in 0..m {
            for j in (i + 1)..m {
                if spec.gram_y[i][j] != spec.gram_y[j][i] {
                    return Err(SchemaError::new(
                        format!("gram_Y[{i}][{j}]"),
                        format!(
                            "matrix is not symmetric: {} != gram_Y[{j}][{i}] = {}",
                            spec.gram_y[i][j], spec.gram_y[j][i]
                        ),
                    ));
                }
            }
        }
        if spec.k_y.len() != m {
            return Err(SchemaError::new("k_Y", format!("expected {m} coordinates, got {}", spec.k_y.len())));
        }
        if spec.a_y.len() != m {
            return Err(SchemaError::new("a_Y", format!("expected {m} coordinates, got {}", spec.a_y.len())));
        }
        let (diag, _) = congruence_diagonalize(&spec.gram_y);
        let plus = diag.iter().filter(|d| d.is_positive()).count();
        let minus = diag.iter().filter(|d| d.is_negative()).count();
        if plus != 1 || minus != m - 1 {
            return Err(SchemaError::new(
                "gram_Y",
                format!(
                    "signature ({plus}, {minus}, {}) violates the Hodge index theorem; expected (1, {}, 0)",
                    m - plus - minus,
                    m - 1
                ),
            ));
        }
        let a_sq = form(&spec.gram_y, &spec.a_y, &spec.a_y);
        if !a_sq.is_positive() {
            return Err(SchemaError::new("a_Y", format!("ample class must have A² > 0, got {a_sq}")));
        }
        let k_sq = form(&spec.gram_y, &spec.k_y, &spec.k_y);
        if k_sq != spec.ky_sq {
            return Err(SchemaError::new(
                "kY_sq",
                format!("declared K_Y² = {} but k_Y·k_Y = {k_sq}", spec.ky_sq),
            ));
        }
        if matches!(spec.class, SurfaceClass::K3 | SurfaceClass::Abelian) && spec.k_y.iter().any(|k| !k.is_zero()) {
            return Err(SchemaError::new("k_Y", "K3 and abelian surfaces have numerically trivial K_Y"));
        }
        if let (Some(pg), Some(q)) = (&spec.pg, &spec.q) {
            let expected = Rational::one() - q + pg;
            if expected != spec.chi {
                return Err(SchemaError::new(
                    "chi",
                    format!("chi = {} but 1 − q + p_g = {expected}", spec.chi),
                ));
            }
        }
        // Adjunction parity: y² + y·K_Y even for every integral y.
        for (i, row) in spec.gram_y.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                if !g.is_integer() {
                    return Err(SchemaError::new(format!("gram_Y[{i}][{j}]"), "intersection numbers must be integers"));
                }
            }
            if !spec.k_y[i].is_integer() {
                return Err(SchemaError::new(format!("k_Y[{i}]"), "canonical class coordinates must be integers"));
            }
        }
        for i in 0..m {
            let gk: Rational = (0..m).map(|j| &spec.gram_y[i][j] * &spec.k_y[j]).sum();
            let parity = &spec.gram_y[i][i] + gk;
            if !(parity / Rational::from(2)).is_integer() {
                return Err(SchemaError::new(
                    "gram_Y",
                    format!("adjunction parity fails on basis vector {i}: e_{i}² + e_{i}·K_Y is odd"),
                ));
            }
        }
        Ok(SurfaceModel {
            chi: spec.chi.clone(),
            ky_sq: spec.ky_sq.clone(),
            gram_y: spec.gram_y.clone(),
            k_y: spec.k_y.clone(),
            a_y: spec.a_y.clone(),
            class: spec.class,
            pg: spec.pg.clone(),
            q_irr: spec.q.clone(),
        })
    }

    pub fn rank(&self) -> usize {
        self.gram_y.len()
    }

    pub fn a_sq(&self) -> Rational {
        form(&self.gram_y, &self.a_y, &self.a_y)
    }

    pub fn a_dot_k(&self) -> Rational {
        form(&self.gram_y, &self.a_y, &self.k_y)
    }

    pub fn pair(&self, x: &[Rational], y: &[Rational]) -> Rational {
        form(&self.gram_y, x, y)
    }
}

/// Identity tag tying classes to the model they were built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModelId(u64);

/// `X = Bl_r Y` with its block-diagonal intersection form.
#[derive(Debug, Clone)]
pub struct BlowupModel {
    base: SurfaceModel,
    r: usize,
    spec: SurfaceSpec,
    id: ModelId,
}

/// A class in `N(X)` with exact coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct DivisorClass {
    coords: Vec<Scalar>,
    model: ModelId,
}

/// Virtual and expected dimension of a linear system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub virtual_dim: Rational,
    pub expected_dim: Rational,
    /// The h²-vanishing hypothesis is an input, never verified here.
    pub h2_zero_assumed: bool,
}

impl BlowupModel {
    pub fn from_spec(spec: &SurfaceSpec) -> Result<BlowupModel, SchemaError> {
        let base = SurfaceModel::from_spec(spec)?;
        let mut hasher = DefaultHasher::new();
        spec.hash(&mut hasher);
        Ok(BlowupModel {
            base,
            r: spec.r,
            spec: spec.clone(),
            id: ModelId(hasher.finish()),
        })
    }

    pub fn base(&self) -> &SurfaceModel {
        &self.base
    }

    pub fn spec(&self) -> &SurfaceSpec {
        &self.spec
    }

    pub fn id(&self) -> ModelId {
        self.id
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn ns_rank(&self) -> usize {
        self.base.rank()
    }

    /// Picard number `ρ = m + r` of `X`.
    pub fn rank(&self) -> usize {
        self.base.rank() + self.r
    }

    /// Full Gram matrix `gram_Y ⊕ (−Id_r)`.
    pub fn gram(&self) -> Vec<Vec<Rational>> {
        let m = self.ns_rank();
        let rho = self.rank();
        let mut g = vec![vec![Rational::zero(); rho]; rho];
        for i in 0..m {
            for j in 0..m {
                g[i][j] = self.base.gram_y[i][j].clone();
            }
        }
        for (k, row) in g.iter_mut().enumerate().skip(m) {
            row[k] = Rational::from(-1);
        }
        g
    }

    pub fn class(&self, coords: Vec<Scalar>) -> Result<DivisorClass, LatticeError> {
        if coords.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                got: coords.len(),
            });
        }
        let first_radical = coords.iter().find(|c| !c.is_rational());
        if let Some(f) = first_radical {
            for c in &coords {
                if !c.compatible(f) {
                    return Err(ScalarError::MixedRadicals {
                        left: f.radicand().clone(),
                        right: c.radicand().clone(),
                    }
                    .into());
                }
            }
        }
        Ok(DivisorClass { coords, model: self.id })
    }

    pub fn rational_class(&self, coords: &[Rational]) -> Result<DivisorClass, LatticeError> {
        self.class(coords.iter().cloned().map(Scalar::from).collect())
    }

    pub fn int_class(&self, coords: &[i64]) -> Result<DivisorClass, LatticeError> {
        self.class(coords.iter().map(|&c| Scalar::from(c)).collect())
    }

    pub fn zero_class(&self) -> DivisorClass {
        DivisorClass {
            coords: vec![Scalar::zero(); self.rank()],
            model: self.id,
        }
    }

    /// `π*y` for `y` given in the NS(Y) basis.
    pub fn pullback(&self, y_coords: &[Rational]) -> Result<DivisorClass, LatticeError> {
        if y_coords.len() != self.ns_rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.ns_rank(),
                got: y_coords.len(),
            });
        }
        let mut coords: Vec<Scalar> = y_coords.iter().cloned().map(Scalar::from).collect();
        coords.resize(self.rank(), Scalar::zero());
        Ok(DivisorClass { coords, model: self.id })
    }

    /// `E_i`, 1-based.
    pub fn exceptional(&self, i: usize) -> Result<DivisorClass, LatticeError> {
        if i == 0 || i > self.r {
            return Err(LatticeError::IndexOutOfRange { index: i, r: self.r });
        }
        let mut c = self.zero_class();
        c.coords[self.ns_rank() + i - 1] = Scalar::one();
        Ok(c)
    }

    /// `K_X = π*K_Y + ΣE_i`.
    pub fn canonical(&self) -> DivisorClass {
        let mut coords: Vec<Scalar> = self.base.k_y.iter().cloned().map(Scalar::from).collect();
        coords.extend(std::iter::repeat_n(Scalar::one(), self.r));
        DivisorClass { coords, model: self.id }
    }

    /// The nef class `L = π*A`.
    pub fn polarization(&self) -> DivisorClass {
        self.pullback(&self.base.a_y).expect("a_Y has NS rank length")
    }

    /// `h = L − δ·ΣE_i`, ample for small `δ > 0`.
    pub fn ample_h(&self, delta: &Rational) -> Result<DivisorClass, LatticeError> {
        if !delta.is_positive() {
            return Err(LatticeError::NonPositiveDelta(delta.clone()));
        }
        Ok(self.ample_h_unchecked(delta))
    }

    pub(crate) fn ample_h_unchecked(&self, delta: &Rational) -> DivisorClass {
        let mut h = self.polarization();
        let m = self.ns_rank();
        for k in 0..self.r {
            h.coords[m + k] = Scalar::from(-delta);
        }
        h
    }

    fn check_owned(&self, x: &DivisorClass) -> Result<(), LatticeError> {
        if x.model != self.id {
            return Err(LatticeError::ModelMismatch);
        }
        Ok(())
    }

    /// `xᵀ·Gram·y`.
    pub fn intersect(&self, x: &DivisorClass, y: &DivisorClass) -> Result<Scalar, LatticeError> {
        self.check_owned(x)?;
        self.check_owned(y)?;
        let m = self.ns_rank();
        if let (Some(xr), Some(yr)) = (x.rational_coords(), y.rational_coords()) {
            let mut acc = self.base.pair(&xr[..m], &yr[..m]);
            for k in m..self.rank() {
                acc -= &xr[k] * &yr[k];
            }
            return Ok(Scalar::from(acc));
        }
        let mut acc = Scalar::zero();
        for i in 0..m {
            if x.coords[i].is_zero() {
                continue;
            }
            for j in 0..m {
                let g = &self.base.gram_y[i][j];
                if g.is_zero() || y.coords[j].is_zero() {
                    continue;
                }
                let term = x.coords[i].checked_mul(&y.coords[j])?.mul_rational(g);
                acc = acc.checked_add(&term)?;
            }
        }
        for k in m..self.rank() {
            if x.coords[k].is_zero() || y.coords[k].is_zero() {
                continue;
            }
            acc = acc.checked_sub(&x.coords[k].checked_mul(&y.coords[k])?)?;
        }
        Ok(acc)
    }

    pub fn square(&self, x: &DivisorClass) -> Result<Scalar, LatticeError> {
        self.intersect(x, x)
    }

    /// `p_a(C) = 1 + (C² + C·K_X)/2`.
    pub fn arithmetic_genus(&self, c: &DivisorClass) -> Result<Rational, LatticeError> {
        let total = self
            .square(c)?
            .checked_add(&self.intersect(c, &self.canonical())?)?;
        match total.as_rational() {
            Some(t) if (t / Rational::from(2)).is_integer() => Ok(Rational::one() + t / Rational::from(2)),
            _ => Err(LatticeError::NonIntegralAdjunction(total.to_string())),
        }
    }

    /// `χ(L) = χ(O_Y) + (L² − L·K_X)/2`.
    pub fn riemann_roch_chi(&self, lb: &DivisorClass) -> Result<Rational, LatticeError> {
        if !lb.is_rational() {
            return Err(LatticeError::IrrationalClass);
        }
        let l2 = self.square(lb)?;
        let lk = self.intersect(lb, &self.canonical())?;
        let diff = l2.checked_sub(&lk)?;
        let diff = diff.as_rational().expect("rational class pairs rationally");
        Ok(&self.base.chi + diff / Rational::from(2))
    }

    /// `(v, e)` with `v = χ(L) − 1`, `e = max(v, −1)`, under the caller's
    /// h²-vanishing hypothesis.
    pub fn virtual_and_expected_dim(
        &self,
        lb: &DivisorClass,
        h2_zero_assumed: bool,
    ) -> Result<DimensionReport, LatticeError> {
        let v = self.riemann_roch_chi(lb)? - Rational::one();
        let e = v.clone().max(Rational::from(-1));
        Ok(DimensionReport {
            virtual_dim: v,
            expected_dim: e,
            h2_zero_assumed,
        })
    }
}

impl DivisorClass {
    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.coords
    }

    pub fn model_id(&self) -> ModelId {
        self.model
    }

    pub fn is_rational(&self) -> bool {
        self.coords.iter().all(Scalar::is_rational)
    }

    pub fn rational_coords(&self) -> Option<Vec<Rational>> {
        self.coords.iter().map(|c| c.as_rational().cloned()).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.coords
            .iter()
            .all(|c| c.as_rational().is_some_and(Rational::is_integer))
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    fn zip_with(
        &self,
        other: &DivisorClass,
        f: impl Fn(&Scalar, &Scalar) -> Result<Scalar, ScalarError>,
    ) -> Result<DivisorClass, LatticeError> {
        if self.model != other.model {
            return Err(LatticeError::ModelMismatch);
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| f(a, b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DivisorClass { coords, model: self.model })
    }

    pub fn add(&self, other: &DivisorClass) -> Result<DivisorClass, LatticeError> {
        self.zip_with(other, Scalar::checked_add)
    }

    pub fn sub(&self, other: &DivisorClass) -> Result<DivisorClass, LatticeError> {
        self.zip_with(other, Scalar::checked_sub)
    }

    pub fn scale(&self, k: &Scalar) -> Result<DivisorClass, LatticeError> {
        let coords = self
            .coords
            .iter()
            .map(|c| c.checked_mul(k))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DivisorClass { coords, model: self.model })
    }

    pub fn scale_rational(&self, k: &Rational) -> DivisorClass {
        DivisorClass {
            coords: self.coords.iter().map(|c| c.mul_rational(k)).collect(),
            model: self.model,
        }
    }

    pub fn neg(&self) -> DivisorClass {
        DivisorClass {
            coords: self.coords.iter().map(|c| -c).collect(),
            model: self.model,
        }
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DivisorClass{self}")
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.coords.serialize(serializer)
    }
}
