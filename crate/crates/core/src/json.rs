//! JSON schemas for walks and symmetry representations.
//!
//! Matrices are stored as separate real and imaginary parts (row-major
//! nested arrays) so documents stay readable and language-neutral.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat::CMat;
use crate::symmetry::{SymOp, SymmetryRep, SymmetryType};
use crate::walk::LaurentMatrix;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_mat(m: &CMat) -> MatrixJson {
        let rows = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        MatrixJson { re: rows(|z| z.re), im: rows(|z| z.im) }
    }

    pub fn to_mat(&self) -> Result<CMat> {
        let n = self.re.len();
        if n == 0
            || self.im.len() != n
            || self.re.iter().any(|r| r.len() != self.re[0].len())
            || self.im.iter().any(|r| r.len() != self.re[0].len())
        {
            return Err(Error::Invalid("ragged or mismatched matrix arrays".into()));
        }
        let m = self.re[0].len();
        Ok(Array2::from_shape_fn((n, m), |(i, j)| {
            Complex64::new(self.re[i][j], self.im[i][j])
        }))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientJson {
    pub x: i64,
    #[serde(flatten)]
    pub matrix: MatrixJson,
}

/// `{"dim": d, "coeffs": [{"x": ..., "re": ..., "im": ...}, ...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WalkJson {
    pub dim: usize,
    pub coeffs: Vec<CoefficientJson>,
}

impl WalkJson {
    pub fn from_walk(w: &LaurentMatrix) -> WalkJson {
        WalkJson {
            dim: w.dim(),
            coeffs: w
                .blocks()
                .map(|(x, b)| CoefficientJson { x, matrix: MatrixJson::from_mat(b) })
                .collect(),
        }
    }

    pub fn to_walk(&self) -> Result<LaurentMatrix> {
        let mut blocks = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let m = c.matrix.to_mat()?;
            if m.nrows() != self.dim || m.ncols() != self.dim {
                return Err(Error::DimensionMismatch(self.dim, m.nrows()));
            }
            blocks.push((c.x, m));
        }
        LaurentMatrix::from_blocks(self.dim, &blocks)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymOpJson {
    #[serde(flatten)]
    pub matrix: MatrixJson,
    pub antiunitary: bool,
}

impl SymOpJson {
    pub fn from_op(op: &SymOp) -> SymOpJson {
        SymOpJson { matrix: MatrixJson::from_mat(&op.matrix), antiunitary: op.antiunitary }
    }

    pub fn to_op(&self) -> Result<SymOp> {
        Ok(SymOp { matrix: self.matrix.to_mat()?, antiunitary: self.antiunitary })
    }
}

/// `{"type": "BDI", "eta": {...}, "tau": {...}, "gamma": {...}}` with
/// absent operators omitted. Deserialized representations are validated.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetryJson {
    #[serde(rename = "type")]
    pub stype: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<SymOpJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<SymOpJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<SymOpJson>,
}

impl SymmetryJson {
    pub fn from_rep(rep: &SymmetryRep) -> SymmetryJson {
        SymmetryJson {
            stype: rep.stype.to_string(),
            eta: rep.eta.as_ref().map(SymOpJson::from_op),
            tau: rep.tau.as_ref().map(SymOpJson::from_op),
            gamma: rep.gamma.as_ref().map(SymOpJson::from_op),
        }
    }

    pub fn to_rep(&self) -> Result<SymmetryRep> {
        let stype = SymmetryType::parse(&self.stype)?;
        let rep = SymmetryRep {
            stype,
            eta: self.eta.as_ref().map(|o| o.to_op()).transpose()?,
            tau: self.tau.as_ref().map(|o| o.to_op()).transpose()?,
            gamma: self.gamma.as_ref().map(|o| o.to_op()).transpose()?,
        };
        if !crate::symmetry::check_rep(&rep) {
            return Err(Error::InvalidRep);
        }
        Ok(rep)
    }
}

/// Serialize a walk to a JSON string.
pub fn walk_to_json(w: &LaurentMatrix) -> Result<String> {
    Ok(serde_json::to_string_pretty(&WalkJson::from_walk(w))?)
}

/// Parse a walk from a JSON string.
pub fn walk_from_json(s: &str) -> Result<LaurentMatrix> {
    let parsed: WalkJson = serde_json::from_str(s)?;
    parsed.to_walk()
}

/// Serialize a representation to a JSON string.
pub fn rep_to_json(rep: &SymmetryRep) -> Result<String> {
    Ok(serde_json::to_string_pretty(&SymmetryJson::from_rep(rep))?)
}

/// Parse and validate a representation from a JSON string.
pub fn rep_from_json(s: &str) -> Result<SymmetryRep> {
    let parsed: SymmetryJson = serde_json::from_str(s)?;
    parsed.to_rep()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::symmetry::reps;

    #[test]
    fn walk_round_trip() {
        let (w, _) = models::split_step(models::SplitStepParams { theta1: 0.3, theta2: -0.7 });
        let s = walk_to_json(&w).unwrap();
        let back = walk_from_json(&s).unwrap();
        assert!(w.approx_eq(&back, 1e-15));
    }

    #[test]
    fn rep_round_trip_all_types() {
        for rep in [
            reps::d_rep(2),
            reps::aiii_rep(2),
            reps::bdi_rep(2),
            reps::cii_rep(4),
            reps::diii_rep(4),
        ] {
            let s = rep_to_json(&rep).unwrap();
            let back = rep_from_json(&s).unwrap();
            assert_eq!(back.stype, rep.stype);
            assert!(match (&rep.eta, &back.eta) {
                (Some(a), Some(b)) => a.approx_eq(b, 0.0),
                (None, None) => true,
                _ => false,
            });
        }
    }

    #[test]
    fn invalid_documents_are_rejected() {
        assert!(walk_from_json("{\"dim\": 2, \"coeffs\": []}").is_ok());
        assert!(walk_from_json("not json").is_err());
        // Ragged matrix.
        let bad = r#"{"dim":2,"coeffs":[{"x":0,"re":[[1,0]],"im":[[0,0],[0,0]]}]}"#;
        assert!(walk_from_json(bad).is_err());
        // Invalid squares: an AIII rep whose γ is not an involution.
        let bad_rep = r#"{"type":"AIII","gamma":{"re":[[2,0],[0,2]],"im":[[0,0],[0,0]],"antiunitary":false}}"#;
        assert!(rep_from_json(bad_rep).is_err());
    }
}
