//! Tenfold-way symmetry types with nontrivial index group, admissibility of
//! walks, and symmetry indices of finite unitaries.
//!
//! A symmetry representation consists of cellwise (anti)unitary involutions:
//! particle-hole `η` and time reversal `τ` (antiunitary) and the chiral
//! symmetry `γ` (unitary). Antiunitaries are stored as a unitary matrix plus
//! a conjugation flag; conjugation is always entrywise in the canonical
//! basis, which turns all relations into concrete matrix identities.
//!
//! A walk `W` is admissible when `ηWη⁻¹ = W`, `τWτ⁻¹ = W*` and `γWγ⁻¹ = W*`
//! (adjoints on the right). At coefficient level these read
//! `η_u conj(W(x)) η_u† = W(x)`, `τ_u conj(W(x)) τ_u† = W(-x)†` and
//! `γ W(x) γ† = W(-x)†`.

use ndarray::Array1;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat::{self, CMat, CVec};
use crate::walk::LaurentMatrix;

/// The five symmetry types with a nontrivial index group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymmetryType {
    D,
    AIII,
    BDI,
    CII,
    DIII,
}

impl SymmetryType {
    /// Parse a tenfold-way label, rejecting the five trivial classes.
    pub fn parse(s: &str) -> Result<SymmetryType> {
        match s {
            "D" => Ok(SymmetryType::D),
            "AIII" => Ok(SymmetryType::AIII),
            "BDI" => Ok(SymmetryType::BDI),
            "CII" => Ok(SymmetryType::CII),
            "DIII" => Ok(SymmetryType::DIII),
            other => Err(Error::UnsupportedSymmetry(other.to_string())),
        }
    }

    /// The index group attached to the type.
    pub fn group(&self) -> IndexGroup {
        match self {
            SymmetryType::D => IndexGroup::Z2,
            SymmetryType::AIII | SymmetryType::BDI => IndexGroup::Z,
            SymmetryType::CII => IndexGroup::TwoZ,
            SymmetryType::DIII => IndexGroup::TwoZ4,
        }
    }

    /// Required squares `(η², τ², γ²)` as `±1` (None = operator absent).
    fn squares(&self) -> (Option<f64>, Option<f64>, Option<f64>) {
        match self {
            SymmetryType::D => (Some(1.0), None, None),
            SymmetryType::AIII => (None, None, Some(1.0)),
            SymmetryType::BDI => (Some(1.0), Some(1.0), Some(1.0)),
            SymmetryType::CII => (Some(-1.0), Some(-1.0), Some(1.0)),
            SymmetryType::DIII => (Some(1.0), Some(-1.0), Some(-1.0)),
        }
    }
}

impl std::fmt::Display for SymmetryType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SymmetryType::D => "D",
            SymmetryType::AIII => "AIII",
            SymmetryType::BDI => "BDI",
            SymmetryType::CII => "CII",
            SymmetryType::DIII => "DIII",
        };
        write!(f, "{s}")
    }
}

/// One (anti)unitary symmetry operator.
#[derive(Debug, Clone)]
pub struct SymOp {
    /// Unitary part in the canonical basis.
    pub matrix: CMat,
    /// Whether the operator composes with entrywise complex conjugation.
    pub antiunitary: bool,
}

impl SymOp {
    /// Unitary operator.
    pub fn unitary(matrix: CMat) -> SymOp {
        SymOp { matrix, antiunitary: false }
    }

    /// Antiunitary operator `matrix · K`.
    pub fn antiunitary(matrix: CMat) -> SymOp {
        SymOp { matrix, antiunitary: true }
    }

    /// Dimension of the cell the operator acts on.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Apply to a vector.
    pub fn apply(&self, v: &CVec) -> CVec {
        let v = if self.antiunitary { v.mapv(|z| z.conj()) } else { v.clone() };
        self.matrix.dot(&v)
    }

    /// Conjugate a matrix: `op · X · op⁻¹`.
    pub fn conjugate(&self, x: &CMat) -> CMat {
        let x = if self.antiunitary { mat::conj_mat(x) } else { x.clone() };
        self.matrix.dot(&x).dot(&mat::dagger(&self.matrix))
    }

    /// The square of the operator as a matrix
    /// (`matrix · conj(matrix)` when antiunitary, `matrix²` otherwise).
    pub fn square(&self) -> CMat {
        if self.antiunitary {
            self.matrix.dot(&mat::conj_mat(&self.matrix))
        } else {
            self.matrix.dot(&self.matrix)
        }
    }

    /// Sign of the square, if it is `±𝟙` within `tol`.
    pub fn square_sign(&self, tol: f64) -> Option<f64> {
        let sq = self.square();
        let d = self.dim();
        if mat::max_diff(&sq, &mat::eye(d)) <= tol {
            Some(1.0)
        } else if mat::max_abs(&(&sq + &mat::eye(d))) <= tol {
            Some(-1.0)
        } else {
            None
        }
    }

    /// Composition `self ∘ other` as a new SymOp.
    pub fn compose(&self, other: &SymOp) -> SymOp {
        // (U_a K^a)(U_b K^b): unitary part U_a · U_b (conjugated if a is
        // antiunitary), conjugation flag is the XOR.
        let right = if self.antiunitary { mat::conj_mat(&other.matrix) } else { other.matrix.clone() };
        SymOp {
            matrix: self.matrix.dot(&right),
            antiunitary: self.antiunitary != other.antiunitary,
        }
    }

    /// Whether two operators commute as real-linear maps.
    pub fn commutes_with(&self, other: &SymOp, tol: f64) -> bool {
        let ab = self.compose(other);
        let ba = other.compose(self);
        ab.antiunitary == ba.antiunitary && mat::max_diff(&ab.matrix, &ba.matrix) <= tol
    }

    /// Whether two operators are equal as real-linear maps.
    pub fn approx_eq(&self, other: &SymOp, tol: f64) -> bool {
        self.antiunitary == other.antiunitary && mat::max_diff(&self.matrix, &other.matrix) <= tol
    }

    /// The same operator on a doubled cell (block-diagonal copy), as used
    /// after regrouping or under direct sums with itself.
    pub fn block_double(&self) -> SymOp {
        SymOp {
            matrix: mat::block_diag(&self.matrix, &self.matrix),
            antiunitary: self.antiunitary,
        }
    }

    /// Block-diagonal stack with another operator of the same kind.
    pub fn direct_sum(&self, other: &SymOp) -> SymOp {
        assert_eq!(self.antiunitary, other.antiunitary);
        SymOp {
            matrix: mat::block_diag(&self.matrix, &other.matrix),
            antiunitary: self.antiunitary,
        }
    }
}

/// A concrete symmetry representation on one cell.
#[derive(Debug, Clone)]
pub struct SymmetryRep {
    pub stype: SymmetryType,
    pub eta: Option<SymOp>,
    pub tau: Option<SymOp>,
    pub gamma: Option<SymOp>,
}

impl SymmetryRep {
    /// Cell dimension.
    pub fn dim(&self) -> usize {
        self.eta
            .as_ref()
            .or(self.tau.as_ref())
            .or(self.gamma.as_ref())
            .map(|op| op.dim())
            .unwrap_or(0)
    }

    /// Representation on the pair-regrouped cell (each operator doubled).
    pub fn regroup(&self) -> SymmetryRep {
        SymmetryRep {
            stype: self.stype,
            eta: self.eta.as_ref().map(SymOp::block_double),
            tau: self.tau.as_ref().map(SymOp::block_double),
            gamma: self.gamma.as_ref().map(SymOp::block_double),
        }
    }

    /// Representation on a direct-sum cell (same symmetry type required).
    pub fn direct_sum(&self, other: &SymmetryRep) -> Result<SymmetryRep> {
        if self.stype != other.stype {
            return Err(Error::Invalid(format!(
                "cannot direct-sum reps of types {} and {}",
                self.stype, other.stype
            )));
        }
        let pair = |a: &Option<SymOp>, b: &Option<SymOp>| -> Result<Option<SymOp>> {
            match (a, b) {
                (Some(x), Some(y)) => Ok(Some(x.direct_sum(y))),
                (None, None) => Ok(None),
                _ => Err(Error::InvalidRep),
            }
        };
        Ok(SymmetryRep {
            stype: self.stype,
            eta: pair(&self.eta, &other.eta)?,
            tau: pair(&self.tau, &other.tau)?,
            gamma: pair(&self.gamma, &other.gamma)?,
        })
    }
}

const REP_TOL: f64 = 1e-10;

/// Check all representation invariants: unitarity of the matrix parts,
/// presence pattern and squares per symmetry type, pairwise commutation,
/// and (when two of η, τ, γ are present) that the third is their product.
pub fn check_rep(rep: &SymmetryRep) -> bool {
    let ops: Vec<(&Option<SymOp>, Option<f64>, bool)> = {
        let (se, st, sg) = rep.stype.squares();
        vec![
            (&rep.eta, se, true),
            (&rep.tau, st, true),
            (&rep.gamma, sg, false),
        ]
    };
    for (op, want_sq, want_anti) in &ops {
        match (op, want_sq) {
            (Some(op), Some(sq)) => {
                if op.antiunitary != *want_anti
                    || !mat::is_unitary_mat(&op.matrix, REP_TOL)
                    || op.square_sign(REP_TOL) != Some(*sq)
                {
                    return false;
                }
            }
            (None, Some(_)) => return false,
            (Some(_), None) => return false,
            (None, None) => {}
        }
    }
    let present: Vec<&SymOp> = [&rep.eta, &rep.tau, &rep.gamma]
        .iter()
        .filter_map(|o| o.as_ref())
        .collect();
    if present.iter().any(|op| op.dim() != rep.dim()) {
        return false;
    }
    for i in 0..present.len() {
        for j in (i + 1)..present.len() {
            if !present[i].commutes_with(present[j], REP_TOL) {
                return false;
            }
        }
    }
    // With all three present, γ must equal τ∘η (trivial phases).
    if let (Some(eta), Some(tau), Some(gamma)) = (&rep.eta, &rep.tau, &rep.gamma) {
        if !tau.compose(eta).approx_eq(gamma, REP_TOL) {
            return false;
        }
    }
    true
}

/// Coefficient-level admissibility of a walk under a representation:
/// `η_u conj(W(x)) η_u† = W(x)`, `τ_u conj(W(x)) τ_u† = W(-x)†`,
/// `γ W(x) γ† = W(-x)†`, each to `tol`. The spectral gap is *not* checked
/// here.
pub fn is_admissible(w: &LaurentMatrix, rep: &SymmetryRep, tol: f64) -> Result<bool> {
    if w.dim() != rep.dim() {
        return Err(Error::DimensionMismatch(w.dim(), rep.dim()));
    }
    for x in w.lo()..=w.hi() {
        let wx = w.coeff(x);
        let wmxd = mat::dagger(&w.coeff(-x));
        if let Some(eta) = &rep.eta {
            if mat::max_diff(&eta.conjugate(&wx), &wx) > tol {
                return Ok(false);
            }
        }
        if let Some(tau) = &rep.tau {
            if mat::max_diff(&tau.conjugate(&wx), &wmxd) > tol {
                return Ok(false);
            }
        }
        if let Some(gamma) = &rep.gamma {
            if mat::max_diff(&gamma.conjugate(&wx), &wmxd) > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Index groups of the nontrivial symmetry types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IndexGroup {
    /// ℤ
    #[serde(rename = "Z")]
    Z,
    /// ℤ₂ (values 0, 1)
    #[serde(rename = "Z2")]
    Z2,
    /// 2ℤ (even integers)
    #[serde(rename = "2Z")]
    TwoZ,
    /// 2ℤ₄ (values 0, 2 mod 4)
    #[serde(rename = "2Z4")]
    TwoZ4,
}

/// An element of an index group, stored as a reduced integer representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexValue {
    pub group: IndexGroup,
    pub value: i64,
}

impl IndexValue {
    /// Build and reduce a representative into its group's canonical range.
    pub fn new(group: IndexGroup, value: i64) -> Result<IndexValue> {
        let value = match group {
            IndexGroup::Z => value,
            IndexGroup::Z2 => value.rem_euclid(2),
            IndexGroup::TwoZ => {
                if value % 2 != 0 {
                    return Err(Error::Invalid(format!("odd value {value} in group 2Z")));
                }
                value
            }
            IndexGroup::TwoZ4 => {
                if value % 2 != 0 {
                    return Err(Error::Invalid(format!("odd value {value} in group 2Z4")));
                }
                value.rem_euclid(4)
            }
        };
        Ok(IndexValue { group, value })
    }

    /// Group addition.
    pub fn add(&self, other: &IndexValue) -> Result<IndexValue> {
        if self.group != other.group {
            return Err(Error::Invalid("index group mismatch".into()));
        }
        IndexValue::new(self.group, self.value + other.value)
    }
}

impl std::fmt::Display for IndexValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Symmetry index of a finite-dimensional admissible unitary: the index of
/// the symmetry representation restricted to `N = ker(U - U*)`, i.e. the
/// eigenspaces of `U` at `±1`.
///
/// Returns `dim N mod 2` (type D), `tr γ|_N` (AIII, BDI; CII with evenness),
/// or `dim N mod 4` (DIII). Kernel vectors are detected as eigenvectors of
/// the Hermitian matrix `(U - U†)/(2i)` with eigenvalue magnitude ≤ `tol`;
/// magnitudes inside `(tol, 10·tol)` are reported as ambiguous.
pub fn finite_si(u: &CMat, rep: &SymmetryRep, tol: f64) -> Result<IndexValue> {
    if !mat::is_unitary_mat(u, 1e-8) {
        return Err(Error::NotUnitary);
    }
    let d = u.nrows();
    let im_part = (u - &mat::dagger(u)).mapv(|z| z * mat::c(0.0, -0.5));
    let (w, v) = mat::eigh_c(&im_part)?;
    let mut kernel: Vec<CVec> = Vec::new();
    for j in 0..d {
        let a = w[j].abs();
        if a <= tol {
            kernel.push(v.column(j).to_owned());
        } else if a < 10.0 * tol {
            return Err(Error::KernelAmbiguous { sigma: a, tol, high: 10.0 * tol });
        }
    }
    let dim_n = kernel.len() as i64;
    match rep.stype {
        SymmetryType::D => IndexValue::new(IndexGroup::Z2, dim_n),
        SymmetryType::DIII => IndexValue::new(IndexGroup::TwoZ4, dim_n),
        SymmetryType::AIII | SymmetryType::BDI | SymmetryType::CII => {
            let gamma = rep.gamma.as_ref().ok_or(Error::InvalidRep)?;
            let tr: Complex64 = kernel
                .iter()
                .map(|phi| {
                    let gphi = gamma.matrix.dot(phi);
                    mat::inner(phi, &gphi)
                })
                .sum();
            let rounded = tr.re.round();
            if (tr.re - rounded).abs() > 1e-6 || tr.im.abs() > 1e-6 {
                return Err(Error::FormulaMismatch(format!(
                    "tr γ|_N = {tr} is not close to an integer"
                )));
            }
            IndexValue::new(rep.stype.group(), rounded as i64)
        }
    }
}

/// Minimal distance of the sampled spectrum of `Ŵ(k)` to the symmetry
/// invariant points `±1`, over `n_samples` momenta.
pub fn gap_min(w: &LaurentMatrix, n_samples: usize) -> Result<f64> {
    assert!(n_samples >= 16, "need at least 16 samples");
    let mut gap = f64::INFINITY;
    for j in 0..n_samples {
        let k = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * j as f64 / n_samples as f64;
        let vals: Array1<Complex64> = mat::eig_values(&w.evaluate(k))?;
        for z in vals.iter() {
            gap = gap.min((z - mat::cr(1.0)).norm());
            gap = gap.min((z + mat::cr(1.0)).norm());
        }
    }
    Ok(gap)
}

/// Standard representations used by the model constructors and tests.
pub mod reps {
    use super::*;

    /// Type D: `η = K` (complex conjugation) on a `d`-dimensional cell.
    pub fn d_rep(d: usize) -> SymmetryRep {
        SymmetryRep {
            stype: SymmetryType::D,
            eta: Some(SymOp::antiunitary(mat::eye(d))),
            tau: None,
            gamma: None,
        }
    }

    /// Type AIII with `γ = diag(𝟙, -𝟙)` on an even-dimensional cell.
    pub fn aiii_rep(d: usize) -> SymmetryRep {
        assert!(d % 2 == 0);
        let mut g = mat::czeros(d);
        for i in 0..d {
            g[(i, i)] = mat::cr(if i < d / 2 { 1.0 } else { -1.0 });
        }
        SymmetryRep {
            stype: SymmetryType::AIII,
            eta: None,
            tau: None,
            gamma: Some(SymOp::unitary(g)),
        }
    }

    /// Type BDI with `η = K`, `γ = σ₁ ⊗ 𝟙` and `τ = γ∘η` (split-step form).
    pub fn bdi_rep(d: usize) -> SymmetryRep {
        assert!(d % 2 == 0);
        let g = mat::kron(&mat::sigma_x(), &mat::eye(d / 2));
        SymmetryRep {
            stype: SymmetryType::BDI,
            eta: Some(SymOp::antiunitary(mat::eye(d))),
            tau: Some(SymOp::antiunitary(g.clone())),
            gamma: Some(SymOp::unitary(g)),
        }
    }

    /// Type CII on `d = 4m`: `γ = diag(𝟙, -𝟙)` over two `2m` blocks,
    /// `η = (iσ₂ ⊗ 𝟙) ⊕ (iσ₂ ⊗ 𝟙) · K` acting blockwise, `τ = γ∘η`.
    pub fn cii_rep(d: usize) -> SymmetryRep {
        assert!(d % 4 == 0);
        let m = d / 4;
        let j2 = mat::sigma_y().mapv(|z| mat::c(0.0, 1.0) * z); // iσ₂, real
        let eta_block = mat::kron(&j2, &mat::eye(m));
        let eta_u = mat::block_diag(&eta_block, &eta_block);
        let mut g = mat::czeros(d);
        for i in 0..d {
            g[(i, i)] = mat::cr(if i < d / 2 { 1.0 } else { -1.0 });
        }
        // τ = γ∘η⁻¹, whose antiunitary matrix part is γ_u · η_uᵀ.
        let tau_u = g.dot(&eta_u.t().to_owned());
        SymmetryRep {
            stype: SymmetryType::CII,
            eta: Some(SymOp::antiunitary(eta_u)),
            tau: Some(SymOp::antiunitary(tau_u)),
            gamma: Some(SymOp::unitary(g)),
        }
    }

    /// Type DIII on `d = 4m`: `γ = i·diag(𝟙, -𝟙)`, `η = (σ₁ ⊗ 𝟙)·K`
    /// swapping the two chiral blocks, `τ = γ∘η`.
    pub fn diii_rep(d: usize) -> SymmetryRep {
        assert!(d % 4 == 0);
        let half = d / 2;
        let mut g = mat::czeros(d);
        for i in 0..d {
            g[(i, i)] = mat::c(0.0, if i < half { 1.0 } else { -1.0 });
        }
        let eta_u = mat::kron(&mat::sigma_x(), &mat::eye(half));
        // τ = γ∘η⁻¹ = γ∘η here since η² = 𝟙 and η_u is symmetric.
        let tau_u = g.dot(&eta_u);
        SymmetryRep {
            stype: SymmetryType::DIII,
            eta: Some(SymOp::antiunitary(eta_u)),
            tau: Some(SymOp::antiunitary(tau_u)),
            gamma: Some(SymOp::unitary(g)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{c, cr};

    #[test]
    fn bdi_split_step_rep_is_valid() {
        assert!(check_rep(&reps::bdi_rep(2)));
    }

    #[test]
    fn d_rep_is_valid() {
        assert!(check_rep(&reps::d_rep(3)));
    }

    #[test]
    fn diii_with_unit_square_gamma_is_rejected() {
        let mut rep = reps::diii_rep(4);
        // Replace γ by a unitary squaring to +𝟙: violates the DIII row.
        rep.gamma = Some(SymOp::unitary(mat::kron(&mat::sigma_z(), &mat::eye(2))));
        assert!(!check_rep(&rep));
    }

    #[test]
    fn cii_and_diii_standard_reps_are_valid() {
        assert!(check_rep(&reps::cii_rep(4)));
        assert!(check_rep(&reps::diii_rep(4)));
        assert!(check_rep(&reps::cii_rep(8)));
        assert!(check_rep(&reps::diii_rep(8)));
        assert!(check_rep(&reps::aiii_rep(2)));
    }

    #[test]
    fn shift_is_eta_admissible() {
        let w = LaurentMatrix::from_blocks(1, &[(1, mat::eye(1))]).unwrap();
        let rep = reps::d_rep(1);
        assert!(is_admissible(&w, &rep, 1e-12).unwrap());
    }

    #[test]
    fn rotation_coin_satisfies_gamma_relation() {
        // γ R(θ) γ = R(-θ) = R(θ)†, so the cellwise coin walk is admissible
        // for the γ-relation with γ = σ₁.
        let th = 0.63_f64;
        let r = mat::rmat(&[&[th.cos(), -th.sin()], &[th.sin(), th.cos()]]);
        let w = LaurentMatrix::from_blocks(2, &[(0, r)]).unwrap();
        let rep = reps::bdi_rep(2);
        assert!(is_admissible(&w, &rep, 1e-12).unwrap());
    }

    #[test]
    fn finite_si_empty_kernel_for_i_sigma2() {
        let u = mat::sigma_y().mapv(|z| c(0.0, 1.0) * z);
        let si = finite_si(&u, &reps::d_rep(2), 1e-8).unwrap();
        assert_eq!(si.value, 0);
    }

    #[test]
    fn finite_si_full_kernel_traces_gamma() {
        // U = σ₁ is Hermitian: N is the whole space; with γ = σ₃ the trace
        // vanishes.
        let rep = SymmetryRep {
            stype: SymmetryType::AIII,
            eta: None,
            tau: None,
            gamma: Some(SymOp::unitary(mat::sigma_z())),
        };
        let si = finite_si(&mat::sigma_x(), &rep, 1e-8).unwrap();
        assert_eq!(si.value, 0);
    }

    #[test]
    fn finite_si_splitting_coin_chirality_split() {
        // ±σ₁ as a BDI cell unitary: the kernel N is the whole 2-dim space
        // and si = tr γ|_N = tr σ₁ = 0, even though the ±1 eigenspaces
        // individually contribute chirality +1 and -1.
        let rep = reps::bdi_rep(2);
        let si = finite_si(&mat::sigma_x(), &rep, 1e-8).unwrap();
        assert_eq!(si.value, 0);
    }

    #[test]
    fn gap_of_flat_coin_is_sqrt_two() {
        let w = LaurentMatrix::from_blocks(2, &[(0, mat::sigma_y().mapv(|z| c(0.0, -1.0) * z))])
            .unwrap();
        let g = gap_min(&w, 32).unwrap();
        assert!((g - 2.0_f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn gap_of_shift_antishift_closes() {
        let s = LaurentMatrix::from_blocks(1, &[(1, mat::eye(1))]).unwrap();
        let a = LaurentMatrix::from_blocks(1, &[(-1, mat::eye(1))]).unwrap();
        let g = gap_min(&s.direct_sum(&a), 64).unwrap();
        assert!(g < 0.2);
    }

    #[test]
    fn index_value_reduction() {
        assert_eq!(IndexValue::new(IndexGroup::Z2, 5).unwrap().value, 1);
        assert_eq!(IndexValue::new(IndexGroup::TwoZ4, 6).unwrap().value, 2);
        assert!(IndexValue::new(IndexGroup::TwoZ, 3).is_err());
        let a = IndexValue::new(IndexGroup::TwoZ4, 2).unwrap();
        assert_eq!(a.add(&a).unwrap().value, 0);
        assert_eq!(cr(1.0).re, 1.0);
    }
}
