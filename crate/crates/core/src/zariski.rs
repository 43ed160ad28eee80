//! Zariski decomposition against a declared list of negative curves, and the
//! induced decomposition of the Mori cone into `Pos + Σ R(C)`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cone_geometry::{in_positive_cone, signature_of, ConeMembership};
use crate::scalar::Rational;
use crate::surface_lattice::{BlowupModel, DivisorClass, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ZariskiError {
    #[error("curve {0} must have integer coordinates")]
    NotIntegral(String),
    #[error("curve {class} has C² = {self_int}, expected at most −1")]
    NotNegative { class: String, self_int: Rational },
    #[error("curve {class} has negative arithmetic genus {genus}")]
    NegativeGenus { class: String, genus: Rational },
    #[error("curve {0} is marked exceptional but is not some E_i")]
    NotExceptional(String),
    #[error("curve list violates Hodge index: {0}")]
    HodgeViolation(String),
    #[error("class is not pseudoeffective against the list: coefficient {value} on curve {curve}")]
    NegativeCoefficient { curve: usize, value: Rational },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("list incomplete: P not in positive cone (P = {p}, P² = {p_sq})")]
    ListIncomplete { p: String, p_sq: Rational },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A declared integral curve with negative self-intersection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegativeCurveRecord {
    pub label: Option<String>,
    pub cls: DivisorClass,
    pub self_int: Rational,
    pub genus: Rational,
    pub is_exceptional: bool,
}

impl NegativeCurveRecord {
    pub fn new(
        model: &BlowupModel,
        cls: DivisorClass,
        is_exceptional: bool,
        label: Option<String>,
    ) -> Result<NegativeCurveRecord, ZariskiError> {
        if !cls.is_integral() {
            return Err(ZariskiError::NotIntegral(cls.to_string()));
        }
        let self_int = model
            .square(&cls)?
            .as_rational()
            .cloned()
            .expect("integral class has rational square");
        if self_int > Rational::from(-1) {
            return Err(ZariskiError::NotNegative {
                class: cls.to_string(),
                self_int,
            });
        }
        let genus = model.arithmetic_genus(&cls)?;
        if genus.is_negative() {
            return Err(ZariskiError::NegativeGenus {
                class: cls.to_string(),
                genus,
            });
        }
        if is_exceptional && !(1..=model.r()).any(|i| model.exceptional(i).is_ok_and(|e| e == cls)) {
            return Err(ZariskiError::NotExceptional(cls.to_string()));
        }
        Ok(NegativeCurveRecord {
            label,
            cls,
            self_int,
            genus,
            is_exceptional,
        })
    }

    /// `E_i` as a record.
    pub fn exceptional(model: &BlowupModel, i: usize) -> Result<NegativeCurveRecord, ZariskiError> {
        NegativeCurveRecord::new(model, model.exceptional(i)?, true, Some(format!("E{i}")))
    }

    /// `n` with `C² = −n`.
    pub fn n(&self) -> Rational {
        -&self.self_int
    }

    pub fn name(&self) -> String {
        self.label.clone().unwrap_or_else(|| self.cls.to_string())
    }

    pub fn to_serialized(&self) -> SerializedCurve {
        SerializedCurve {
            label: self.label.clone(),
            coords: self.cls.rational_coords().expect("records are integral"),
            self_int: self.self_int.clone(),
            genus: self.genus.clone(),
            exceptional: self.is_exceptional,
        }
    }

    pub fn from_serialized(model: &BlowupModel, s: &SerializedCurve) -> Result<NegativeCurveRecord, ZariskiError> {
        let rec = NegativeCurveRecord::new(model, model.rational_class(&s.coords)?, s.exceptional, s.label.clone())?;
        if rec.self_int != s.self_int || rec.genus != s.genus {
            return Err(ZariskiError::Precondition(format!(
                "curve {} declares (C², p_a) = ({}, {}) but the lattice gives ({}, {})",
                rec.name(),
                s.self_int,
                s.genus,
                rec.self_int,
                rec.genus
            )));
        }
        Ok(rec)
    }
}

/// JSON form of a [`NegativeCurveRecord`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerializedCurve {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub coords: Vec<Rational>,
    pub self_int: Rational,
    pub genus: Rational,
    pub exceptional: bool,
}

/// `D = P + Σ a_i C_i` over the support indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZariskiDecomposition {
    pub p: DivisorClass,
    pub n_coeffs: BTreeMap<usize, Rational>,
    pub support: Vec<usize>,
}

impl ZariskiDecomposition {
    /// Negative part `N = Σ a_i C_i`.
    pub fn negative_part(&self, model: &BlowupModel, curves: &[NegativeCurveRecord]) -> DivisorClass {
        let mut n = model.zero_class();
        for (&i, a) in &self.n_coeffs {
            n = n.add(&curves[i].cls.scale_rational(a)).expect("same model");
        }
        n
    }

    /// Drops zero coefficients; the canonical form compared by the oracle.
    pub fn normalized(&self) -> (Vec<Rational>, BTreeMap<usize, Rational>) {
        let p = self.p.rational_coords().expect("decompositions are rational");
        let coeffs = self
            .n_coeffs
            .iter()
            .filter(|(_, a)| !a.is_zero())
            .map(|(&i, a)| (i, a.clone()))
            .collect();
        (p, coeffs)
    }
}

fn rational_pairing(model: &BlowupModel, x: &DivisorClass, y: &DivisorClass) -> Result<Rational, ZariskiError> {
    model
        .intersect(x, y)?
        .as_rational()
        .cloned()
        .ok_or(ZariskiError::Lattice(LatticeError::IrrationalClass))
}

/// Solves `m·x = b` exactly; `None` if `m` is singular.
pub(crate) fn solve_linear(m: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rational>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, piv);
        let pv = aug[col][col].clone();
        for c in col..=n {
            aug[col][c] = &aug[col][c] / &pv;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in col..=n {
                    let v = &f * &aug[col][c];
                    aug[r][c] -= v;
                }
            }
        }
    }
    Some(aug.into_iter().map(|mut r| r.pop().expect("augmented")).collect())
}

struct Pairings {
    curve_gram: Vec<Vec<Rational>>,
    d_dot: Vec<Rational>,
}

impl Pairings {
    fn new(model: &BlowupModel, d: &DivisorClass, curves: &[NegativeCurveRecord]) -> Result<Pairings, ZariskiError> {
        let mut curve_gram = vec![vec![Rational::zero(); curves.len()]; curves.len()];
        for i in 0..curves.len() {
            for j in i..curves.len() {
                let v = rational_pairing(model, &curves[i].cls, &curves[j].cls)?;
                curve_gram[i][j] = v.clone();
                curve_gram[j][i] = v;
            }
        }
        let d_dot = curves
            .iter()
            .map(|c| rational_pairing(model, d, &c.cls))
            .collect::<Result<_, _>>()?;
        Ok(Pairings { curve_gram, d_dot })
    }

    fn sub_gram(&self, support: &[usize]) -> Vec<Vec<Rational>> {
        support
            .iter()
            .map(|&i| support.iter().map(|&j| self.curve_gram[i][j].clone()).collect())
            .collect()
    }

    fn negative_definite(&self, support: &[usize]) -> bool {
        let sig = signature_of(&self.sub_gram(support));
        sig.n_minus == support.len()
    }

    /// Coefficients on `support` and the pairings `P·C_j` for every curve.
    fn solve(&self, support: &[usize]) -> Option<(Vec<Rational>, Vec<Rational>)> {
        let rhs: Vec<Rational> = support.iter().map(|&j| self.d_dot[j].clone()).collect();
        let a = solve_linear(&self.sub_gram(support), &rhs)?;
        let p_dot = (0..self.d_dot.len())
            .map(|j| {
                let mut v = self.d_dot[j].clone();
                for (k, &i) in support.iter().enumerate() {
                    v -= &a[k] * &self.curve_gram[i][j];
                }
                v
            })
            .collect();
        Some((a, p_dot))
    }
}

fn assemble(
    d: &DivisorClass,
    curves: &[NegativeCurveRecord],
    support: Vec<usize>,
    coeffs: &[Rational],
) -> ZariskiDecomposition {
    let mut p = d.clone();
    let mut n_coeffs = BTreeMap::new();
    for (&i, a) in support.iter().zip(coeffs) {
        p = p.sub(&curves[i].cls.scale_rational(a)).expect("same model");
        n_coeffs.insert(i, a.clone());
    }
    ZariskiDecomposition { p, n_coeffs, support }
}

fn check_input(model: &BlowupModel, d: &DivisorClass) -> Result<(), ZariskiError> {
    if !d.is_rational() {
        return Err(ZariskiError::Lattice(LatticeError::IrrationalClass));
    }
    if model.intersect(d, &model.polarization())?.is_negative() {
        return Err(ZariskiError::Precondition(format!("D·L < 0 for D = {d}")));
    }
    Ok(())
}

/// Iterative support enlargement: every round adds all curves that pair
/// negatively with the current candidate `P`.
pub fn zariski_decompose(
    model: &BlowupModel,
    d: &DivisorClass,
    curves: &[NegativeCurveRecord],
) -> Result<ZariskiDecomposition, ZariskiError> {
    check_input(model, d)?;
    let pairings = Pairings::new(model, d, curves)?;
    let mut support: Vec<usize> = (0..curves.len()).filter(|&i| pairings.d_dot[i].is_negative()).collect();
    loop {
        if !pairings.negative_definite(&support) {
            let names: Vec<String> = support.iter().map(|&i| curves[i].name()).collect();
            return Err(ZariskiError::HodgeViolation(format!(
                "support {{{}}} has a Gram matrix that is not negative definite",
                names.join(", ")
            )));
        }
        let (a, p_dot) = pairings
            .solve(&support)
            .ok_or_else(|| ZariskiError::HodgeViolation("singular support system".into()))?;
        if let Some((k, v)) = a.iter().enumerate().find(|(_, v)| v.is_negative()) {
            return Err(ZariskiError::NegativeCoefficient {
                curve: support[k],
                value: v.clone(),
            });
        }
        let extra: Vec<usize> = (0..curves.len())
            .filter(|j| !support.contains(j) && p_dot[*j].is_negative())
            .collect();
        if extra.is_empty() {
            return Ok(assemble(d, curves, support, &a));
        }
        support.extend(extra);
        support.sort_unstable();
    }
}

/// Exhaustive oracle: tries every support subset and returns the first one
/// with non-negative coefficients and `P` nef against the list.
pub fn zariski_bruteforce(
    model: &BlowupModel,
    d: &DivisorClass,
    curves: &[NegativeCurveRecord],
) -> Result<Option<ZariskiDecomposition>, ZariskiError> {
    check_input(model, d)?;
    let pairings = Pairings::new(model, d, curves)?;
    let k = curves.len();
    assert!(k < 16, "subset enumeration is exponential");
    for mask in 0u32..(1 << k) {
        let support: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        if !pairings.negative_definite(&support) {
            continue;
        }
        let Some((a, p_dot)) = pairings.solve(&support) else { continue };
        if a.iter().any(Rational::is_negative) || p_dot.iter().any(Rational::is_negative) {
            continue;
        }
        return Ok(Some(assemble(d, curves, support, &a)));
    }
    Ok(None)
}

/// Re-checks every invariant of a decomposition of `d`; returns the first
/// violated one.
pub fn check_decomposition(
    model: &BlowupModel,
    d: &DivisorClass,
    curves: &[NegativeCurveRecord],
    z: &ZariskiDecomposition,
) -> Result<(), String> {
    let err = |e: LatticeError| e.to_string();
    let n = z.negative_part(model, curves);
    if z.p.add(&n).map_err(err)? != *d {
        return Err("reconstruction D = P + N violated".into());
    }
    if z.n_coeffs.values().any(Rational::is_negative) {
        return Err("nonnegative coefficients violated".into());
    }
    for (j, c) in curves.iter().enumerate() {
        let v = model.intersect(&z.p, &c.cls).map_err(err)?;
        if z.support.contains(&j) && !v.is_zero() {
            return Err(format!("P·C = 0 on support violated for {}", c.name()));
        }
        if v.is_negative() {
            return Err(format!("P nef against the list violated for {}", c.name()));
        }
    }
    let support_gram: Vec<Vec<Rational>> = z
        .support
        .iter()
        .map(|&i| {
            z.support
                .iter()
                .map(|&j| {
                    model
                        .intersect(&curves[i].cls, &curves[j].cls)
                        .ok()
                        .and_then(|v| v.as_rational().cloned())
                        .unwrap_or_default()
                })
                .collect()
        })
        .collect();
    if signature_of(&support_gram).n_minus != z.support.len() {
        return Err("negative-definite support violated".into());
    }
    if !model.intersect(&z.p, &n).map_err(err)?.is_zero() {
        return Err("P·N = 0 violated".into());
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeDecomposition {
    pub pos_part: DivisorClass,
    pub neg_coeffs: BTreeMap<usize, Rational>,
    pub membership: ConeMembership,
}

/// Writes `y` as an element of `Pos + Σ R(C_i)` via its Zariski decomposition.
pub fn ne_decompose(
    model: &BlowupModel,
    y: &DivisorClass,
    curves: &[NegativeCurveRecord],
) -> Result<NeDecomposition, ZariskiError> {
    let z = zariski_decompose(model, y, curves)?;
    let membership = in_positive_cone(model, &z.p)?;
    if membership == ConeMembership::Outside {
        let p_sq = rational_pairing(model, &z.p, &z.p)?;
        return Err(ZariskiError::ListIncomplete {
            p: z.p.to_string(),
            p_sq,
        });
    }
    Ok(NeDecomposition {
        pos_part: z.p,
        neg_coeffs: z.n_coeffs,
        membership,
    })
}

/// Derives an independent generator for sample `index`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A rational class of the closed positive cone: `m·π*A + π*(noise) − Σ e_i E_i`,
/// drawn by rejection.
pub fn random_positive_element(model: &BlowupModel, rng: &mut impl Rng) -> DivisorClass {
    let m_rank = model.ns_rank();
    let l = model.polarization();
    loop {
        let m: i64 = rng.gen_range(1..=6);
        let mut coords: Vec<Rational> = model
            .base()
            .a_y
            .iter()
            .map(|a| a * Rational::from(m) + Rational::from(rng.gen_range(-1i64..=1)))
            .collect();
        let spread = rng.gen_range(0..=model.r());
        for k in 0..model.r() {
            let e = if k < spread { rng.gen_range(0..=m) } else { 0 };
            coords.push(Rational::from(-e));
        }
        debug_assert_eq!(coords.len(), m_rank + model.r());
        let x = model.rational_class(&coords).expect("rank matches");
        let sq = model.square(&x).expect("same model");
        if sq.sign() >= 0 && model.intersect(&x, &l).expect("same model").is_positive() {
            return x;
        }
    }
}

/// Finds an integral isotropic class `π*(kA) − Σ e_i E_i` with positive
/// `L`-degree, if one exists with small coefficients.
pub fn isotropic_seed(model: &BlowupModel) -> Option<DivisorClass> {
    let a_sq = model.base().a_sq();
    if !a_sq.is_integer() {
        return None;
    }
    for k in 1i64..=6 {
        let target = (a_sq.clone() * Rational::from(k * k)).floor();
        let target: i64 = i64::try_from(target).ok()?;
        if let Some(parts) = squares_summing_to(target, model.r()) {
            let mut coords: Vec<Rational> = model.base().a_y.iter().map(|a| a * Rational::from(k)).collect();
            coords.extend((0..model.r()).map(|i| Rational::from(-parts.get(i).copied().unwrap_or(0))));
            let x = model.rational_class(&coords).ok()?;
            if model.square(&x).ok()?.is_zero() {
                return Some(x);
            }
        }
    }
    // pullbacks of isotropic classes on Y
    let m = model.ns_rank();
    if m > 4 {
        return None;
    }
    let l = model.polarization();
    let total = 7usize.pow(m as u32);
    (0..total).find_map(|code| {
        let mut c = code;
        let y: Vec<Rational> = (0..m)
            .map(|_| {
                let v = (c % 7) as i64 - 3;
                c /= 7;
                Rational::from(v)
            })
            .collect();
        let x = model.pullback(&y).ok()?;
        let isotropic = model.square(&x).ok()?.is_zero();
        let positive = model.intersect(&x, &l).ok()?.is_positive();
        (isotropic && positive).then_some(x)
    })
}

/// Non-negative integers, at most `slots` of them, whose squares sum to `n`.
fn squares_summing_to(n: i64, slots: usize) -> Option<Vec<i64>> {
    fn go(n: i64, slots: usize, max: i64, acc: &mut Vec<i64>) -> bool {
        if n == 0 {
            return true;
        }
        if slots == 0 {
            return false;
        }
        let mut x = max.min((n as f64).sqrt() as i64 + 1);
        while x >= 1 {
            if x * x <= n {
                acc.push(x);
                if go(n - x * x, slots - 1, x, acc) {
                    return true;
                }
                acc.pop();
            }
            x -= 1;
        }
        false
    }
    let mut acc = Vec::new();
    go(n, slots.min(8), n, &mut acc).then_some(acc)
}

/// A random point of the cone boundary, obtained by stereographic projection
/// from an isotropic seed `f`: `v = u²·f − 2(u·f)·u` satisfies `v² = 0`.
pub fn random_boundary_element(model: &BlowupModel, seed: &DivisorClass, rng: &mut impl Rng) -> DivisorClass {
    let l = model.polarization();
    loop {
        let u_coords: Vec<Rational> = (0..model.rank()).map(|_| Rational::from(rng.gen_range(-3i64..=3))).collect();
        let u = model.rational_class(&u_coords).expect("rank matches");
        let uu = model.square(&u).expect("same model");
        let uf = model.intersect(&u, seed).expect("same model");
        let uu = uu.as_rational().expect("rational").clone();
        let uf = uf.as_rational().expect("rational").clone();
        let v = seed
            .scale_rational(&uu)
            .sub(&u.scale_rational(&(Rational::from(2) * uf)))
            .expect("same model");
        if v.is_zero() {
            continue;
        }
        let vl = model.intersect(&v, &l).expect("same model");
        if vl.is_positive() {
            return v;
        }
        if vl.is_negative() {
            return v.neg();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ListCheckReport {
    pub seed: u64,
    pub samples: usize,
    pub passed: usize,
    pub failures: Vec<String>,
    /// Per list curve: pairs nonnegatively with every other list curve and
    /// decomposes as `0 + 1·C`.
    pub extremal: Vec<bool>,
}

impl ListCheckReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.extremal.iter().all(|&e| e)
    }
}

/// Samples `pos + Σ c_i C_i`, decomposes, and checks the reconstruction; then
/// checks that each list curve spans an extremal ray of the generated cone.
pub fn list_decomposition_check(
    model: &BlowupModel,
    curves: &[NegativeCurveRecord],
    samples: usize,
    seed: u64,
) -> ListCheckReport {
    let mut failures = Vec::new();
    let mut passed = 0;
    for s in 0..samples {
        let mut rng = sample_rng(seed, s as u64);
        let mut y = random_positive_element(model, &mut rng);
        for c in curves {
            let k: i64 = rng.gen_range(0..=10);
            y = y.add(&c.cls.scale_rational(&Rational::from(k))).expect("same model");
        }
        let outcome = ne_decompose(model, &y, curves).map_err(|e| e.to_string()).and_then(|dec| {
            let z = ZariskiDecomposition {
                support: dec.neg_coeffs.keys().copied().collect(),
                n_coeffs: dec.neg_coeffs,
                p: dec.pos_part,
            };
            check_decomposition(model, &y, curves, &z)
        });
        match outcome {
            Ok(()) => passed += 1,
            Err(e) => failures.push(format!("sample {s}: y = {y}: {e}")),
        }
    }
    let extremal = curves
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let pairs_ok = curves.iter().enumerate().all(|(j, other)| {
                i == j || other.cls == c.cls || model.intersect(&c.cls, &other.cls).is_ok_and(|v| v.sign() >= 0)
            });
            let dec_ok = zariski_decompose(model, &c.cls, curves).is_ok_and(|z| {
                z.p.is_zero() && z.normalized().1.values().all(|a| *a == Rational::one()) && z.normalized().1.len() == 1
            });
            pairs_ok && dec_ok
        })
        .collect();
    ListCheckReport {
        seed,
        samples,
        passed,
        failures,
        extremal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn records(x: &BlowupModel, list: &[&[i64]]) -> Vec<NegativeCurveRecord> {
        list.iter()
            .map(|c| NegativeCurveRecord::new(x, x.int_class(c).unwrap(), false, None).unwrap())
            .collect()
    }

    #[test]
    fn decompose_examples() {
        let x = fixtures::p2(1);
        let curves = vec![NegativeCurveRecord::exceptional(&x, 1).unwrap()];
        let d = x.int_class(&[1, 1]).unwrap();
        let z = zariski_decompose(&x, &d, &curves).unwrap();
        assert_eq!(z.p, x.int_class(&[1, 0]).unwrap());
        assert_eq!(z.n_coeffs.get(&0), Some(&q("1")));

        let z = zariski_decompose(&x, &x.polarization(), &curves).unwrap();
        assert_eq!(z.p, x.polarization());
        assert!(z.n_coeffs.is_empty());

        let e = x.exceptional(1).unwrap();
        let z = zariski_decompose(&x, &e, &curves).unwrap();
        assert!(z.p.is_zero());
        assert_eq!(z.n_coeffs.get(&0), Some(&q("1")));
        check_decomposition(&x, &e, &curves, &z).unwrap();
    }

    #[test]
    fn hodge_violation_is_reported() {
        let x = fixtures::p2(2);
        // two copies of the same (−1)-curve give a singular support Gram
        let curves = records(&x, &[&[0, 1, 0], &[0, 1, 0]]);
        let d = x.int_class(&[0, 1, 0]).unwrap();
        let err = zariski_decompose(&x, &d, &curves).unwrap_err();
        assert!(err.to_string().contains("curve list violates Hodge index"), "{err}");
    }

    #[test]
    fn ne_decompose_examples() {
        let x = fixtures::p2(1);
        let curves = records(&x, &[&[0, 1]]);
        let y = x.int_class(&[2, -1]).unwrap();
        let dec = ne_decompose(&x, &y, &curves).unwrap();
        assert_eq!(dec.pos_part, y);
        assert!(dec.neg_coeffs.is_empty());

        let e = x.exceptional(1).unwrap();
        let dec = ne_decompose(&x, &e, &curves).unwrap();
        assert!(dec.pos_part.is_zero());
        assert_eq!(dec.neg_coeffs.get(&0), Some(&q("1")));

        let bad = x.int_class(&[-1, 0]).unwrap();
        assert!(matches!(ne_decompose(&x, &bad, &curves), Err(ZariskiError::Precondition(_))));

        // without E_2 in the list, 3H − 4E_1 − 4E_2 is not certified
        let x2 = fixtures::p2(2);
        let only_e1 = records(&x2, &[&[0, 1, 0]]);
        let y = x2.int_class(&[3, -1, -4]).unwrap();
        assert!(matches!(ne_decompose(&x2, &y, &only_e1), Err(ZariskiError::ListIncomplete { .. })));
    }

    #[test]
    fn fake_records_are_rejected() {
        let x = fixtures::p2(2);
        let not_negative = x.int_class(&[1, -1, 0]).unwrap();
        assert!(matches!(
            NegativeCurveRecord::new(&x, not_negative, false, None),
            Err(ZariskiError::NotNegative { .. })
        ));
        let half = x.rational_class(&[q("1/2"), q("0"), q("0")]).unwrap();
        assert!(matches!(NegativeCurveRecord::new(&x, half, false, None), Err(ZariskiError::NotIntegral(_))));
        let line = x.int_class(&[1, -1, -1]).unwrap();
        assert!(matches!(
            NegativeCurveRecord::new(&x, line, true, None),
            Err(ZariskiError::NotExceptional(_))
        ));
    }

    #[test]
    fn list_check_on_bl2_p2() {
        let x = fixtures::p2(2);
        let curves = records(&x, &[&[0, 1, 0], &[0, 0, 1], &[1, -1, -1]]);
        let rep = list_decomposition_check(&x, &curves, 100, 7);
        assert_eq!(rep.passed, 100, "{:?}", rep.failures);
        assert!(rep.ok());

        let rep = list_decomposition_check(&x, &[], 50, 7);
        assert_eq!(rep.passed, 50);
    }

    #[test]
    fn isotropic_seed_exists_on_fixtures() {
        for x in [fixtures::p2(3), fixtures::k3(2), fixtures::abelian(2), fixtures::enriques(1)] {
            let f = isotropic_seed(&x).expect("seed");
            assert!(x.square(&f).unwrap().is_zero());
            let mut rng = sample_rng(1, 0);
            for _ in 0..20 {
                let v = random_boundary_element(&x, &f, &mut rng);
                assert_eq!(in_positive_cone(&x, &v).unwrap(), ConeMembership::Boundary);
            }
        }
    }

    #[test]
    fn solver_handles_pivoting() {
        let m = vec![vec![q("0"), q("1")], vec![q("1"), q("0")]];
        assert_eq!(solve_linear(&m, &[q("2"), q("3")]), Some(vec![q("3"), q("2")]));
        let singular = vec![vec![q("1"), q("1")], vec![q("1"), q("1")]];
        assert_eq!(solve_linear(&singular, &[q("1"), q("1")]), None);
    }
}
