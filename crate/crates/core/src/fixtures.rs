//! Bundled example surfaces and quick model builders.

use crate::document::Problem;
use crate::scalar::Rational;
use crate::surface_lattice::{BlowupModel, SurfaceClass, SurfaceSpec};

const BUNDLED: &[(&str, &str)] = &[
    ("p2-r9", include_str!("../fixtures/p2-r9.json")),
    ("p2-r10", include_str!("../fixtures/p2-r10.json")),
    ("p2-r11", include_str!("../fixtures/p2-r11.json")),
    ("p2-r12", include_str!("../fixtures/p2-r12.json")),
    ("p2-r17", include_str!("../fixtures/p2-r17.json")),
    ("k3", include_str!("../fixtures/k3.json")),
    ("abelian", include_str!("../fixtures/abelian.json")),
    ("enriques", include_str!("../fixtures/enriques.json")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}

pub fn bundled_text(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn bundled(name: &str) -> Option<Problem> {
    bundled_text(name).map(|t| Problem::parse(t).expect("bundled fixtures parse"))
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from(x)).collect()
}

fn spec(
    class: SurfaceClass,
    chi: i64,
    gram: &[&[i64]],
    k: &[i64],
    a: &[i64],
    r: usize,
) -> SurfaceSpec {
    let gram_y: Vec<Vec<Rational>> = gram.iter().map(|row| ints(row)).collect();
    let k_y = ints(k);
    let mut ky_sq = Rational::zero();
    for (i, row) in gram_y.iter().enumerate() {
        for (j, g) in row.iter().enumerate() {
            ky_sq += &k_y[i] * g * &k_y[j];
        }
    }
    SurfaceSpec {
        name: None,
        chi: Rational::from(chi),
        ky_sq,
        gram_y,
        k_y,
        a_y: ints(a),
        class,
        r,
        pg: None,
        q: None,
    }
}

pub fn p2_spec(r: usize) -> SurfaceSpec {
    spec(SurfaceClass::P2, 1, &[&[1]], &[-3], &[1], r)
}

/// `Bl_r P²` with `A = H`.
pub fn p2(r: usize) -> BlowupModel {
    BlowupModel::from_spec(&p2_spec(r)).expect("valid")
}

/// A K3 with `NS = ⟨2⟩`.
pub fn k3(r: usize) -> BlowupModel {
    BlowupModel::from_spec(&spec(SurfaceClass::K3, 2, &[&[2]], &[0], &[1], r)).expect("valid")
}

/// An abelian surface with `NS = ⟨2⟩`.
pub fn abelian(r: usize) -> BlowupModel {
    BlowupModel::from_spec(&spec(SurfaceClass::Abelian, 0, &[&[2]], &[0], &[1], r)).expect("valid")
}

/// A product of elliptic curves, `NS ⊇ ⟨f₁, f₂⟩` with `f₁·f₂ = 1`.
pub fn abelian_product(r: usize) -> BlowupModel {
    BlowupModel::from_spec(&spec(SurfaceClass::Abelian, 0, &[&[0, 1], &[1, 0]], &[0, 0], &[1, 1], r)).expect("valid")
}

/// An Enriques surface seen through the hyperbolic plane spanned by two half-fibres.
pub fn enriques(r: usize) -> BlowupModel {
    BlowupModel::from_spec(&spec(SurfaceClass::Enriques, 1, &[&[0, 1], &[1, 0]], &[0, 0], &[1, 1], r)).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_bundled_fixtures_validate() {
        for name in names() {
            let p = bundled(name).unwrap();
            let x = p.model().unwrap_or_else(|e| panic!("{name}: {e}"));
            p.curve_records(&x).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert!(bundled("nope").is_none());
    }
}
