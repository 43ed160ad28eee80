//! Positive cone of `X`: membership, pairings, the tangency and
//! orthogonal-slice lemmas, signature, and affine slices for plotting.

use std::fmt::Write as _;

use serde::Serialize;

use crate::scalar::Rational;
use crate::surface_lattice::{BlowupModel, DivisorClass, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConeError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

fn precondition(msg: impl Into<String>) -> ConeError {
    ConeError::Precondition(msg.into())
}

/// Symmetric Gaussian elimination over `Q`.
///
/// Returns `(diag, p)` with `p · gram · pᵀ = diag(diag)`. A zero pivot is
/// replaced by a later nonzero diagonal entry, or failing that by adding a
/// row with a nonzero off-diagonal entry.
pub fn congruence_diagonalize(gram: &[Vec<Rational>]) -> (Vec<Rational>, Vec<Vec<Rational>>) {
    let n = gram.len();
    let mut a: Vec<Vec<Rational>> = gram.to_vec();
    let mut p: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| Rational::from(i64::from(i == j))).collect())
        .collect();
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
                p.swap(k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // row_k += row_j, col_k += col_j; the new pivot is 2·a[k][j]
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[k][c] += v;
                }
                for row in a.iter_mut() {
                    let v = row[j].clone();
                    row[k] += v;
                }
                for c in 0..n {
                    let v = p[j][c].clone();
                    p[k][c] += v;
                }
            } else {
                continue;
            }
        }
        let pivot = a[k][k].clone();
        for i in (k + 1)..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for c in 0..n {
                let v = &f * &a[k][c];
                a[i][c] -= v;
            }
            for row in a.iter_mut() {
                let v = &f * &row[k];
                row[i] -= v;
            }
            for c in 0..n {
                let v = &f * &p[k][c];
                p[i][c] -= v;
            }
        }
    }
    ((0..n).map(|i| a[i][i].clone()).collect(), p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignatureReport {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
    pub diagonal: Vec<Rational>,
    /// Rows are the new basis vectors: `congruence · Gram · congruenceᵀ` is diagonal.
    pub congruence: Vec<Vec<Rational>>,
}

pub fn diagonalize(model: &BlowupModel) -> SignatureReport {
    signature_of(&model.gram())
}

pub fn signature_of(gram: &[Vec<Rational>]) -> SignatureReport {
    let (diagonal, congruence) = congruence_diagonalize(gram);
    let n_plus = diagonal.iter().filter(|d| d.is_positive()).count();
    let n_minus = diagonal.iter().filter(|d| d.is_negative()).count();
    SignatureReport {
        n_plus,
        n_minus,
        n_zero: diagonal.len() - n_plus - n_minus,
        diagonal,
        congruence,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConeMembership {
    Interior,
    Boundary,
    Outside,
}

/// Membership in the closed positive cone, tested against `L`.
pub fn in_positive_cone(model: &BlowupModel, x: &DivisorClass) -> Result<ConeMembership, LatticeError> {
    let sq = model.square(x)?.sign();
    let xl = model.intersect(x, &model.polarization())?.sign();
    Ok(match (sq, xl) {
        (1, 1) => ConeMembership::Interior,
        (0, 1) => ConeMembership::Boundary,
        (0, _) if x.is_zero() => ConeMembership::Boundary,
        _ => ConeMembership::Outside,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingOutcome {
    pub value: crate::scalar::Scalar,
    pub nonneg: bool,
    /// Set when one class is interior and the other nonzero, so `x·y > 0` is expected.
    pub strict_expected: bool,
    pub strict: bool,
}

pub fn pairing_nonneg_check(
    model: &BlowupModel,
    x: &DivisorClass,
    y: &DivisorClass,
) -> Result<PairingOutcome, ConeError> {
    let mx = in_positive_cone(model, x)?;
    let my = in_positive_cone(model, y)?;
    if mx == ConeMembership::Outside {
        return Err(precondition(format!("first class {x} lies outside the positive cone")));
    }
    if my == ConeMembership::Outside {
        return Err(precondition(format!("second class {y} lies outside the positive cone")));
    }
    let value = model.intersect(x, y)?;
    let strict_expected = (mx == ConeMembership::Interior && !y.is_zero())
        || (my == ConeMembership::Interior && !x.is_zero());
    Ok(PairingOutcome {
        nonneg: value.sign() >= 0,
        strict: value.is_positive(),
        strict_expected,
        value,
    })
}

/// True iff the line through `α` and `γ` touches the closed cone only at `α`.
pub fn tangency_test(model: &BlowupModel, gamma: &DivisorClass, alpha: &DivisorClass) -> Result<bool, ConeError> {
    if model.rank() < 3 {
        return Err(precondition(format!("Picard number {} is below 3", model.rank())));
    }
    if alpha.is_zero() {
        return Err(precondition("alpha is zero"));
    }
    if !model.square(gamma)?.is_negative() {
        return Err(precondition("gamma must have negative square"));
    }
    if model.intersect(gamma, &model.polarization())?.is_negative() {
        return Err(precondition("gamma must pair nonnegatively with L"));
    }
    if in_positive_cone(model, alpha)? == ConeMembership::Outside {
        return Err(precondition("alpha lies outside the positive cone"));
    }
    Ok(model.square(alpha)?.is_zero() && model.intersect(alpha, gamma)?.is_zero())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrthogonalSlice {
    /// `γ^⊥` meets the closed cone only at the origin.
    Zero,
    /// `γ^⊥` meets the closed cone along the ray of `γ`.
    Ray(DivisorClass),
    /// `γ^⊥` cuts a full-dimensional subcone of the hyperplane.
    Full,
}

pub fn orthogonal_slice(model: &BlowupModel, gamma: &DivisorClass) -> Result<OrthogonalSlice, ConeError> {
    if gamma.is_zero() {
        return Err(precondition("gamma is zero"));
    }
    if model.intersect(gamma, &model.polarization())?.is_negative() {
        return Err(precondition("gamma must pair nonnegatively with L"));
    }
    Ok(match model.square(gamma)?.sign() {
        1 => OrthogonalSlice::Zero,
        0 => OrthogonalSlice::Ray(gamma.clone()),
        _ => OrthogonalSlice::Full,
    })
}

/// A labelled class for [`slice_export`].
#[derive(Debug, Clone)]
pub struct SliceInput {
    pub label: String,
    pub class: DivisorClass,
}

/// Projects classes into the affine slice `{y · n = 1}` and writes CSV.
///
/// Coordinates are taken in an orthonormal basis of `n^⊥` for the form `−x·y`
/// (definite there because `n² > 0`), truncated to three axes. Classes with
/// `x · n = 0` are flagged `at_infinity` and reported by direction; classes
/// with `x · n < 0` are flagged `antipodal`. When the class list is non-empty,
/// `boundary_samples` points of the cone boundary sphere are appended.
pub fn slice_export(
    model: &BlowupModel,
    classes: &[SliceInput],
    plane_normal: &DivisorClass,
    boundary_samples: usize,
) -> Result<String, ConeError> {
    let nl = model.intersect(plane_normal, &model.polarization())?;
    if nl.is_zero() {
        return Err(precondition("plane normal is orthogonal to L"));
    }
    let n_sq = model.square(plane_normal)?;
    if !n_sq.is_positive() {
        return Err(precondition("plane normal must have positive square"));
    }
    let gram: Vec<Vec<f64>> = model
        .gram()
        .iter()
        .map(|row| row.iter().map(Rational::to_f64).collect())
        .collect();
    let rho = gram.len();
    let pair = |x: &[f64], y: &[f64]| -> f64 {
        let mut acc = 0.0;
        for i in 0..rho {
            for j in 0..rho {
                acc += x[i] * gram[i][j] * y[j];
            }
        }
        acc
    };
    let normal: Vec<f64> = plane_normal.coords().iter().map(|c| c.to_f64()).collect();
    let nn = n_sq.to_f64();

    let dims = (rho - 1).min(3);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for k in 0..rho {
        if basis.len() == dims {
            break;
        }
        let mut v: Vec<f64> = (0..rho).map(|i| f64::from(u8::from(i == k))).collect();
        let f = pair(&v, &normal) / nn;
        for i in 0..rho {
            v[i] -= f * normal[i];
        }
        for b in &basis {
            let f = -pair(&v, b);
            for i in 0..rho {
                v[i] -= f * b[i];
            }
        }
        let norm_sq = -pair(&v, &v);
        if norm_sq > 1e-12 {
            let s = norm_sq.sqrt();
            basis.push(v.into_iter().map(|x| x / s).collect());
        }
    }
    let coords_of = |y: &[f64]| -> Vec<f64> { basis.iter().map(|b| -pair(y, b)).collect() };

    let mut out = String::from("label");
    for k in 1..=dims {
        let _ = write!(out, ",x{k}");
    }
    out.push_str(",flag\n");
    let mut push_row = |label: &str, coords: &[f64], flag: &str| {
        out.push_str(label);
        for c in coords {
            let c = if c.abs() < 1e-12 { 0.0 } else { *c };
            let _ = write!(out, ",{c:.9}");
        }
        let _ = writeln!(out, ",{flag}");
    };

    for input in classes {
        let xn = model.intersect(&input.class, plane_normal)?;
        let x: Vec<f64> = input.class.coords().iter().map(|c| c.to_f64()).collect();
        if xn.is_zero() {
            push_row(&input.label, &coords_of(&x), "at_infinity");
            continue;
        }
        let scale = 1.0 / xn.to_f64();
        let y: Vec<f64> = (0..rho).map(|i| x[i] * scale - normal[i] / nn).collect();
        let flag = if xn.is_positive() { "finite" } else { "antipodal" };
        push_row(&input.label, &coords_of(&y), flag);
    }

    if !classes.is_empty() {
        // boundary of the slice: |w| = 1/√(n²) inside n^⊥
        let radius = 1.0 / nn.sqrt();
        for k in 0..boundary_samples {
            let point: Vec<f64> = match dims {
                0 => vec![],
                1 => vec![if k % 2 == 0 { radius } else { -radius }],
                2 => {
                    let th = std::f64::consts::TAU * k as f64 / boundary_samples as f64;
                    vec![radius * th.cos(), radius * th.sin()]
                }
                _ => {
                    // Fibonacci lattice on the sphere
                    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / boundary_samples as f64;
                    let rxy = (1.0 - z * z).sqrt();
                    let th = golden * k as f64;
                    vec![radius * rxy * th.cos(), radius * rxy * th.sin(), radius * z]
                }
            };
            push_row(&format!("boundary_{k}"), &point, "boundary");
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::Scalar;
    use crate::surface_lattice::SurfaceSpec;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn membership_examples() {
        let x = fixtures::p2(1);
        assert_eq!(in_positive_cone(&x, &x.polarization()).unwrap(), ConeMembership::Interior);
        assert_eq!(in_positive_cone(&x, &x.exceptional(1).unwrap()).unwrap(), ConeMembership::Outside);
        let f = x.int_class(&[1, -1]).unwrap();
        assert_eq!(in_positive_cone(&x, &f).unwrap(), ConeMembership::Boundary);
        assert_eq!(in_positive_cone(&x, &f.neg()).unwrap(), ConeMembership::Outside);
        assert_eq!(in_positive_cone(&x, &x.zero_class()).unwrap(), ConeMembership::Boundary);
    }

    #[test]
    fn pairing_examples() {
        let x = fixtures::p2(2);
        let l = x.polarization();
        let out = pairing_nonneg_check(&x, &l, &l).unwrap();
        assert!(out.nonneg && out.strict && out.strict_expected);
        let f1 = x.int_class(&[1, -1, 0]).unwrap();
        let f2 = x.int_class(&[1, 0, -1]).unwrap();
        let out = pairing_nonneg_check(&x, &f1, &f2).unwrap();
        assert_eq!(out.value, Scalar::from(1));
        assert!(out.nonneg);
        assert!(matches!(
            pairing_nonneg_check(&x, &x.exceptional(1).unwrap(), &l),
            Err(ConeError::Precondition(_))
        ));
    }

    #[test]
    fn tangency_examples() {
        let x = fixtures::p2(3);
        // found by enumerating coordinates in −3..=3 on Bl_3 P²
        let gamma = x.int_class(&[0, 1, -1, 0]).unwrap();
        let alpha = x.int_class(&[1, 0, 0, -1]).unwrap();
        assert!(tangency_test(&x, &gamma, &alpha).unwrap());

        let e1 = x.exceptional(1).unwrap();
        assert!(!tangency_test(&x, &e1, &x.polarization()).unwrap());
        let f1 = x.int_class(&[1, -1, 0, 0]).unwrap();
        assert!(!tangency_test(&x, &e1, &f1).unwrap());
        assert!(matches!(tangency_test(&x, &e1, &x.zero_class()), Err(ConeError::Precondition(_))));
        let small = fixtures::p2(1);
        assert!(matches!(
            tangency_test(&small, &small.exceptional(1).unwrap(), &small.int_class(&[1, -1]).unwrap()),
            Err(ConeError::Precondition(_))
        ));
    }

    /// Brute-force sanity check of the tangency characterization: the line
    /// `(1 − t)α + tγ` meets the cone only at `t = 0` exactly when the test
    /// says so.
    #[test]
    fn tangency_agrees_with_line_sampling() {
        let x = fixtures::p2(3);
        let range = -2i64..=2;
        let mut checked = 0;
        for a in itertools_product(&range) {
            let alpha = x.int_class(&a).unwrap();
            if alpha.is_zero() || !model_sq(&x, &alpha).is_zero() || in_positive_cone(&x, &alpha).unwrap() == ConeMembership::Outside {
                continue;
            }
            for g in [[0, 1, -1, 0], [0, 0, 1, -1], [1, -1, -1, -1], [0, 1, 0, 0]] {
                let gamma = x.int_class(&g).unwrap();
                let verdict = tangency_test(&x, &gamma, &alpha).unwrap();
                let touches_elsewhere = (1i64..=40).any(|k| {
                    [Rational::from(1) / Rational::from(k), Rational::from(-1) / Rational::from(k)]
                        .iter()
                        .any(|t| {
                            let p = alpha
                                .scale_rational(&(Rational::one() - t))
                                .add(&gamma.scale_rational(t))
                                .unwrap();
                            in_positive_cone(&x, &p).unwrap() != ConeMembership::Outside
                        })
                });
                assert_eq!(verdict, !touches_elsewhere, "alpha {alpha}, gamma {gamma}");
                checked += 1;
            }
        }
        assert!(checked > 0);
    }

    fn model_sq(x: &BlowupModel, c: &DivisorClass) -> Scalar {
        x.square(c).unwrap()
    }

    fn itertools_product(range: &std::ops::RangeInclusive<i64>) -> Vec<[i64; 4]> {
        let vals: Vec<i64> = range.clone().collect();
        let mut out = Vec::new();
        for &a in &vals {
            for &b in &vals {
                for &c in &vals {
                    for &d in &vals {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn orthogonal_slice_examples() {
        let x = fixtures::p2(1);
        assert_eq!(orthogonal_slice(&x, &x.polarization()).unwrap(), OrthogonalSlice::Zero);
        let f = x.int_class(&[1, -1]).unwrap();
        assert_eq!(orthogonal_slice(&x, &f).unwrap(), OrthogonalSlice::Ray(f.clone()));
        assert_eq!(orthogonal_slice(&x, &x.exceptional(1).unwrap()).unwrap(), OrthogonalSlice::Full);
        assert!(matches!(orthogonal_slice(&x, &x.zero_class()), Err(ConeError::Precondition(_))));
    }

    #[test]
    fn signature_examples() {
        let x = fixtures::p2(3);
        let rep = diagonalize(&x);
        assert_eq!((rep.n_plus, rep.n_minus, rep.n_zero), (1, 3, 0));

        let spec = SurfaceSpec {
            name: None,
            chi: q("1"),
            ky_sq: q("0"),
            gram_y: vec![vec![q("2"), q("1")], vec![q("1"), q("-1")]],
            k_y: vec![q("0"), q("0")],
            a_y: vec![q("1"), q("0")],
            class: crate::surface_lattice::SurfaceClass::Other,
            r: 0,
            pg: None,
            q: None,
        };
        let rep = signature_of(&spec.gram_y);
        assert_eq!((rep.n_plus, rep.n_minus, rep.n_zero), (1, 1, 0));

        let hyperbolic = vec![vec![q("0"), q("1")], vec![q("1"), q("0")]];
        let rep = signature_of(&hyperbolic);
        assert_eq!((rep.n_plus, rep.n_minus, rep.n_zero), (1, 1, 0));
        assert_congruence(&hyperbolic, &rep);

        let degenerate = vec![vec![q("0"), q("0")], vec![q("0"), q("0")]];
        assert_eq!(signature_of(&degenerate).n_zero, 2);
    }

    fn assert_congruence(g: &[Vec<Rational>], rep: &SignatureReport) {
        let n = g.len();
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rational::zero();
                for a in 0..n {
                    for b in 0..n {
                        acc += &rep.congruence[i][a] * &g[a][b] * &rep.congruence[j][b];
                    }
                }
                let expected = if i == j { rep.diagonal[i].clone() } else { Rational::zero() };
                assert_eq!(acc, expected);
            }
        }
    }

    #[test]
    fn slice_examples() {
        let x = fixtures::p2(2);
        let l = x.polarization();
        let csv = slice_export(&x, &[SliceInput { label: "L".into(), class: l.clone() }], &l, 0).unwrap();
        assert_eq!(csv, "label,x1,x2,flag\nL,0.000000000,0.000000000,finite\n");

        let s = Scalar::from(q("1/2"));
        let k_minus_sl = x.canonical().sub(&l.scale(&s).unwrap()).unwrap();
        let inputs = vec![
            SliceInput { label: "E1".into(), class: x.exceptional(1).unwrap() },
            SliceInput { label: "E2".into(), class: x.exceptional(2).unwrap() },
            SliceInput { label: "H-E1-E2".into(), class: x.int_class(&[1, -1, -1]).unwrap() },
            SliceInput { label: "K-sL".into(), class: k_minus_sl },
        ];
        let csv = slice_export(&x, &inputs, &l, 4).unwrap();
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows.len(), 1 + 4 + 4);
        assert!(rows[1].ends_with("at_infinity"));
        assert!(rows[2].ends_with("at_infinity"));
        assert!(rows[3].ends_with("finite"));
        assert!(rows[4].ends_with("antipodal"));
        assert!(rows[5].starts_with("boundary_0"));

        let empty = slice_export(&x, &[], &l, 16).unwrap();
        assert_eq!(empty, "label,x1,x2,flag\n");
        assert!(slice_export(&x, &[], &x.exceptional(1).unwrap(), 0).is_err());
    }

    #[test]
    fn boundary_class_lands_on_unit_circle() {
        let x = fixtures::p2(2);
        let l = x.polarization();
        let f = x.int_class(&[1, -1, 0]).unwrap();
        let csv = slice_export(&x, &[SliceInput { label: "f".into(), class: f }], &l, 0).unwrap();
        let row = csv.lines().nth(1).unwrap();
        let vals: Vec<f64> = row.split(',').skip(1).take(2).map(|v| v.parse().unwrap()).collect();
        assert!((vals[0].hypot(vals[1]) - 1.0).abs() < 1e-9);
    }
}
