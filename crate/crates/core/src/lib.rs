//! Exact computations in the Néron–Severi lattice of a blown-up surface
//! `X = Bl_r Y`, with re-checkable certificates for cone statements.
//!
//! The crate is organised bottom-up:
//!
//! - [`scalar`]: exact rationals and real quadratic numbers;
//! - [`surface_lattice`]: the intersection form of `X`, adjunction, Riemann–Roch;
//! - [`cone_geometry`]: the positive cone and its slices;
//! - [`zariski`]: Zariski decomposition relative to a curve list;
//! - [`thresholds`]: the values `s_n` and ray-containment certificates;
//! - [`segre`]: speciality bookkeeping and counterexample detectors;
//! - [`strict_inclusion`]: witnesses that `Pos` is strictly smaller than `NE` on `K ≥ 0`;
//! - [`certificate`]: the serialized certificate family and its verifier.

pub mod certificate;
pub mod cone_geometry;
pub mod document;
pub mod fixtures;
pub mod scalar;
pub mod segre;
pub mod strict_inclusion;
pub mod surface_lattice;
pub mod thresholds;
pub mod zariski;

pub use certificate::{verify_certificate, Certificate, VerifyError};
pub use cone_geometry::{ConeMembership, SignatureReport};
pub use document::Problem;
pub use scalar::{Rational, Scalar, ScalarError};
pub use surface_lattice::{BlowupModel, DivisorClass, LatticeError, SchemaError, SurfaceClass, SurfaceModel, SurfaceSpec};
pub use thresholds::{RayContainmentCert, ThresholdContext};
pub use zariski::{NegativeCurveRecord, ZariskiDecomposition};
pub use strict_inclusion::StrictInclusionWitness;
