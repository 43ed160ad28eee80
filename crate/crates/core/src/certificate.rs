//! Self-contained certificates. Each one embeds the surface description, so
//! a verifier needs nothing but the JSON.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::document::{parse_json, DocumentError};
use crate::scalar::Rational;
use crate::strict_inclusion::StrictInclusionWitness;
use crate::surface_lattice::{BlowupModel, SurfaceSpec};
use crate::thresholds::RayContainmentCert;
use crate::zariski::{check_decomposition, NegativeCurveRecord, SerializedCurve, ZariskiDecomposition};

/// The first invariant a certificate fails.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{invariant} violated: {detail}")]
pub struct VerifyError {
    pub invariant: String,
    pub detail: String,
}

impl VerifyError {
    pub fn new(invariant: &str, detail: impl Into<String>) -> VerifyError {
        VerifyError {
            invariant: invariant.to_string(),
            detail: detail.into(),
        }
    }
}

/// `D = P + Σ a_i C_i` relative to a curve list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZariskiCert {
    pub surface: SurfaceSpec,
    pub curves: Vec<SerializedCurve>,
    pub d: Vec<Rational>,
    pub p: Vec<Rational>,
    pub coeffs: Vec<Coefficient>,
    pub support: Vec<usize>,
}

/// `a_i` for the curve at index `curve` in the certificate's list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coefficient {
    pub curve: usize,
    pub value: Rational,
}

impl ZariskiCert {
    pub fn new(
        model: &BlowupModel,
        curves: &[NegativeCurveRecord],
        d: &[Rational],
        z: &ZariskiDecomposition,
    ) -> ZariskiCert {
        ZariskiCert {
            surface: model.spec().clone(),
            curves: curves.iter().map(NegativeCurveRecord::to_serialized).collect(),
            d: d.to_vec(),
            p: z.p.rational_coords().expect("decompositions are rational"),
            coeffs: z
                .n_coeffs
                .iter()
                .map(|(&curve, value)| Coefficient {
                    curve,
                    value: value.clone(),
                })
                .collect(),
            support: z.support.clone(),
        }
    }

    pub fn verify(&self) -> Result<(), VerifyError> {
        let model = BlowupModel::from_spec(&self.surface).map_err(|e| VerifyError::new("surface", e.to_string()))?;
        let curves = self
            .curves
            .iter()
            .enumerate()
            .map(|(i, c)| {
                NegativeCurveRecord::from_serialized(&model, c)
                    .map_err(|e| VerifyError::new("curve_record", format!("curves[{i}]: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let k = curves.len();
        let coeffs: BTreeMap<usize, Rational> = self.coeffs.iter().map(|c| (c.curve, c.value.clone())).collect();
        if coeffs.len() != self.coeffs.len() {
            return Err(VerifyError::new("support_consistent", "a curve has two coefficients"));
        }
        if let Some(i) = self.support.iter().chain(coeffs.keys()).find(|&&i| i >= k) {
            return Err(VerifyError::new("support_index", format!("index {i} but only {k} curves")));
        }
        let mut sorted = self.support.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.support.len() || coeffs.keys().any(|i| !self.support.contains(i)) {
            return Err(VerifyError::new("support_consistent", "coefficients must be indexed by a duplicate-free support"));
        }
        let lat = |e: crate::surface_lattice::LatticeError| VerifyError::new("lattice", e.to_string());
        let d = model.rational_class(&self.d).map_err(lat)?;
        let z = ZariskiDecomposition {
            p: model.rational_class(&self.p).map_err(lat)?,
            n_coeffs: coeffs,
            support: self.support.clone(),
        };
        check_decomposition(&model, &d, &curves, &z).map_err(|msg| {
            let name = msg.split(" violated").next().unwrap_or(&msg).to_string();
            VerifyError::new(&name, msg)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    RayContainment(RayContainmentCert),
    ZariskiDecomposition(ZariskiCert),
    StrictInclusion(StrictInclusionWitness),
}

impl Certificate {
    pub fn verify(&self) -> Result<(), VerifyError> {
        match self {
            Certificate::RayContainment(c) => c.verify(),
            Certificate::ZariskiDecomposition(c) => c.verify(),
            Certificate::StrictInclusion(c) => c.verify(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::RayContainment(_) => "ray_containment",
            Certificate::ZariskiDecomposition(_) => "zariski_decomposition",
            Certificate::StrictInclusion(_) => "strict_inclusion",
        }
    }
}

/// Parses one certificate or an array of them.
pub fn parse_certificates(text: &str) -> Result<Vec<Certificate>, DocumentError> {
    let value: serde_json::Value = parse_json(text)?;
    if value.is_array() {
        parse_json::<Vec<Certificate>>(text)
    } else {
        parse_json::<Certificate>(text).map(|c| vec![c])
    }
}

/// Verifies every certificate; the error carries the index of the first failure.
pub fn verify_certificate(certs: &[Certificate]) -> Result<(), (usize, VerifyError)> {
    for (i, c) in certs.iter().enumerate() {
        c.verify().map_err(|e| (i, e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::strict_inclusion::strict_inclusion_report;
    use crate::thresholds::{ray_certificate, ThresholdContext};
    use crate::zariski::zariski_decompose;

    fn ray(r: usize, curve: usize) -> Certificate {
        let p = fixtures::bundled(&format!("p2-r{r}")).unwrap();
        let x = p.model().unwrap();
        let curves = p.curve_records(&x).unwrap();
        let s = ThresholdContext::from_model(&x).s_threshold(1).unwrap();
        Certificate::RayContainment(ray_certificate(&x, &curves[curve], &s).unwrap())
    }

    #[test]
    fn ray_certificates_round_trip() {
        for (r, i) in [(10, 0), (12, 12), (12, 40), (17, 20)] {
            let c = ray(r, i);
            let text = serde_json::to_string_pretty(&c).unwrap();
            let back = parse_certificates(&text).unwrap();
            assert_eq!(back, vec![c.clone()]);
            verify_certificate(&back).unwrap();
        }
    }

    #[test]
    fn tampered_alpha_names_the_invariant() {
        let Certificate::RayContainment(mut c) = ray(12, 0) else { unreachable!() };
        c.alpha[0] = c.alpha[0].add_rational(&Rational::new(1, 3));
        let err = Certificate::RayContainment(c).verify().unwrap_err();
        assert_eq!(err.invariant, "alpha_sq_zero");
        assert!(err.to_string().starts_with("alpha_sq_zero violated"));
    }

    #[test]
    fn tampered_threshold_is_caught() {
        let Certificate::RayContainment(mut c) = ray(12, 20) else { unreachable!() };
        c.s = c.base_s.add_rational(&Rational::new(-1, 1000));
        assert_eq!(Certificate::RayContainment(c).verify().unwrap_err().invariant, "threshold_monotone");
    }

    #[test]
    fn zariski_certificate_round_trip_and_tamper() {
        let x = fixtures::p2(3);
        let curves: Vec<_> = (1..=3).map(|i| NegativeCurveRecord::exceptional(&x, i).unwrap()).collect();
        let d: Vec<Rational> = [1, 2, 0, 0].iter().map(|&v| Rational::from(v)).collect();
        let z = zariski_decompose(&x, &x.rational_class(&d).unwrap(), &curves).unwrap();
        let cert = Certificate::ZariskiDecomposition(ZariskiCert::new(&x, &curves, &d, &z));
        let text = serde_json::to_string(&vec![cert.clone()]).unwrap();
        let back = parse_certificates(&text).unwrap();
        verify_certificate(&back).unwrap();

        let Certificate::ZariskiDecomposition(mut bad) = cert else { unreachable!() };
        bad.p[1] = Rational::from(1);
        let err = Certificate::ZariskiDecomposition(bad.clone()).verify().unwrap_err();
        assert!(err.invariant.starts_with("reconstruction"), "{err}");
        bad.support.push(9);
        assert_eq!(Certificate::ZariskiDecomposition(bad).verify().unwrap_err().invariant, "support_index");
    }

    #[test]
    fn strict_certificate_round_trip() {
        let w = strict_inclusion_report(&fixtures::p2(11)).unwrap().uniruled.unwrap();
        let cert = Certificate::StrictInclusion(w);
        let text = serde_json::to_string(&cert).unwrap();
        assert!(text.contains("\"kind\":\"strict_inclusion\""));
        verify_certificate(&parse_certificates(&text).unwrap()).unwrap();
    }

    #[test]
    fn malformed_input_is_rejected() {
        assert!(parse_certificates("{\"kind\": \"nope\"}").is_err());
        assert!(parse_certificates("[1, 2]").is_err());
    }
}
