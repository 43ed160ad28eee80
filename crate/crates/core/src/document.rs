//! Input documents: a surface description plus optional curve lists, linear
//! systems and pencils, as read by the command-line tool.

use serde::{Deserialize, Serialize};

use crate::scalar::Rational;
use crate::surface_lattice::{BlowupModel, SchemaError, SurfaceSpec};
use crate::zariski::{NegativeCurveRecord, ZariskiError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub coords: Vec<Rational>,
    #[serde(default)]
    pub exceptional: bool,
}

/// Generated curve lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveFamily {
    /// `E_1, …, E_r`.
    Exceptional,
    /// `H − E_i − E_j` on a plane blow-up.
    P2Lines,
    /// `2H − E_i − E_j − E_k − E_l − E_m` on a plane blow-up.
    P2Conics,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub coords: Vec<Rational>,
    #[serde(default)]
    pub known_dim: Option<Rational>,
    #[serde(default)]
    pub reduced: bool,
    #[serde(default)]
    pub exceptional_support: bool,
    #[serde(default = "yes")]
    pub h2_zero_assumed: bool,
}

fn yes() -> bool {
    true
}

/// A pencil-type system `|C̃|` of genus-`g` curves with known dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub g: Rational,
    pub dim: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Problem {
    #[serde(flatten)]
    pub surface: SurfaceSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curves: Vec<CurveSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curve_families: Vec<CurveFamily>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub systems: Vec<SystemSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pencils: Vec<PencilSpec>,
}

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("malformed JSON at {path}: {message}")]
    Json { path: String, message: String },
    #[error("invalid surface description: {0}")]
    Schema(#[from] SchemaError),
    #[error("invalid curve list at {path}: {source}")]
    Curve { path: String, source: ZariskiError },
}

/// Deserializes with field-path diagnostics.
pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, DocumentError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = match e.path().to_string().as_str() {
            "." | "?" => "document root".to_string(),
            p => p.to_string(),
        };
        DocumentError::Json {
            path,
            message: e.inner().to_string(),
        }
    })
}

impl Problem {
    pub fn parse(text: &str) -> Result<Problem, DocumentError> {
        parse_json(text).map_err(|e| match e {
            // the flattened surface fields lose their path; re-read them alone
            DocumentError::Json { .. } => parse_json::<SurfaceSpec>(text).err().unwrap_or(e),
            other => other,
        })
    }

    pub fn model(&self) -> Result<BlowupModel, SchemaError> {
        BlowupModel::from_spec(&self.surface)
    }

    /// Expands families and explicit curves, in that order, without duplicates.
    pub fn curve_records(&self, model: &BlowupModel) -> Result<Vec<NegativeCurveRecord>, DocumentError> {
        let mut out: Vec<NegativeCurveRecord> = Vec::new();
        let r = model.r();
        let m = model.ns_rank();
        let wrap = |path: String| move |source: ZariskiError| DocumentError::Curve { path, source };
        for (fi, family) in self.curve_families.iter().enumerate() {
            let path = format!("curve_families[{fi}]");
            if *family != CurveFamily::Exceptional && m != 1 {
                return Err(DocumentError::Schema(SchemaError::new(
                    path,
                    "plane curve families need a rank-one base lattice",
                )));
            }
            match family {
                CurveFamily::Exceptional => {
                    for i in 1..=r {
                        out.push(NegativeCurveRecord::exceptional(model, i).map_err(wrap(path.clone()))?);
                    }
                }
                CurveFamily::P2Lines => {
                    for i in 1..=r {
                        for j in (i + 1)..=r {
                            let mut c = vec![0i64; m + r];
                            c[0] = 1;
                            c[i] = -1;
                            c[j] = -1;
                            let cls = model.int_class(&c).map_err(|e| wrap(path.clone())(e.into()))?;
                            out.push(
                                NegativeCurveRecord::new(model, cls, false, Some(format!("H-E{i}-E{j}")))
                                    .map_err(wrap(path.clone()))?,
                            );
                        }
                    }
                }
                CurveFamily::P2Conics => {
                    for subset in combinations(r, 5) {
                        let mut c = vec![0i64; m + r];
                        c[0] = 2;
                        for &i in &subset {
                            c[i] = -1;
                        }
                        let cls = model.int_class(&c).map_err(|e| wrap(path.clone())(e.into()))?;
                        let name: Vec<String> = subset.iter().map(|i| format!("E{i}")).collect();
                        out.push(
                            NegativeCurveRecord::new(model, cls, false, Some(format!("2H-{}", name.join("-"))))
                                .map_err(wrap(path.clone()))?,
                        );
                    }
                }
            }
        }
        for (ci, spec) in self.curves.iter().enumerate() {
            let path = format!("curves[{ci}]");
            let cls = model
                .rational_class(&spec.coords)
                .map_err(|e| wrap(path.clone())(e.into()))?;
            let rec = NegativeCurveRecord::new(model, cls, spec.exceptional, spec.label.clone()).map_err(wrap(path))?;
            if !out.iter().any(|o| o.cls == rec.cls) {
                out.push(rec);
            }
        }
        Ok(out)
    }
}

/// `k`-subsets of `{1, …, n}` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(1, n, k, &mut cur, &mut out);
    out
}
