//! Matrix-valued Laurent polynomials for strictly local, translation
//! invariant walks on `ℓ²(ℤ) ⊗ ℂᵈ`.
//!
//! A walk acts by `(Wψ)(x) = Σ_y W(y) ψ(x - y)` with finitely many nonzero
//! `d × d` coefficient blocks `W(y)`. Its momentum-space symbol under the
//! Fourier convention `(Fψ)(k) = Σ_x e^{ikx} ψ(x)` is
//! `Ŵ(k) = Σ_x e^{ikx} W(x)`, so the translation-by-one shift has symbol
//! `e^{ik}`. Flipping that convention negates every winding number computed
//! downstream.
//!
//! The analytic continuation off the unit circle is
//! `W̃(λ) = Σ_y W(y) λ^{-y}` with `Ŵ(k) = W̃(e^{-ik})`.

use ndarray::{s, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat::{self, CMat};

/// Threshold below which boundary coefficient blocks are trimmed, making
/// equality of walks decidable.
pub const TRIM_TOL: f64 = 1e-14;

/// A banded translation-invariant operator stored as the finite list of its
/// coefficient blocks `W(lo), …, W(hi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentMatrix {
    dim: usize,
    lo: i64,
    coeffs: Vec<CMat>,
}

impl LaurentMatrix {
    /// Build from coefficient blocks `coeffs[i] = W(lo + i)`.
    ///
    /// All blocks must be `dim × dim`. Zero boundary blocks (max entry below
    /// [`TRIM_TOL`]) are trimmed; the all-zero walk is stored as a single
    /// zero block at offset 0.
    pub fn from_coeffs(dim: usize, lo: i64, coeffs: Vec<CMat>) -> Result<Self> {
        assert!(dim > 0, "cell dimension must be positive");
        assert!(!coeffs.is_empty(), "at least one coefficient block required");
        for c in &coeffs {
            if c.nrows() != dim || c.ncols() != dim {
                return Err(Error::DimensionMismatch(c.nrows(), dim));
            }
        }
        let mut lo = lo;
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && mat::max_abs(coeffs.last().unwrap()) <= TRIM_TOL {
            coeffs.pop();
        }
        while coeffs.len() > 1 && mat::max_abs(&coeffs[0]) <= TRIM_TOL {
            coeffs.remove(0);
            lo += 1;
        }
        if coeffs.len() == 1 && mat::max_abs(&coeffs[0]) <= TRIM_TOL {
            lo = 0;
        }
        Ok(LaurentMatrix { dim, lo, coeffs })
    }

    /// Build from a list of `(offset, block)` pairs (absent offsets are zero).
    pub fn from_blocks(dim: usize, blocks: &[(i64, CMat)]) -> Result<Self> {
        if blocks.is_empty() {
            return Self::from_coeffs(dim, 0, vec![mat::czeros(dim)]);
        }
        let lo = blocks.iter().map(|(x, _)| *x).min().unwrap();
        let hi = blocks.iter().map(|(x, _)| *x).max().unwrap();
        let n = (hi - lo + 1) as usize;
        let mut coeffs = vec![mat::czeros(dim); n];
        for (x, b) in blocks {
            if b.nrows() != dim || b.ncols() != dim {
                return Err(Error::DimensionMismatch(b.nrows(), dim));
            }
            coeffs[(x - lo) as usize] = &coeffs[(x - lo) as usize] + b;
        }
        Self::from_coeffs(dim, lo, coeffs)
    }

    /// Cell dimension `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Lowest stored jump offset.
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest stored jump offset.
    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    /// Coefficient block `W(x)` (zero outside the stored band).
    pub fn coeff(&self, x: i64) -> CMat {
        if x < self.lo || x > self.hi() {
            mat::czeros(self.dim)
        } else {
            self.coeffs[(x - self.lo) as usize].clone()
        }
    }

    /// Stored `(offset, block)` pairs in ascending offset order.
    pub fn blocks(&self) -> impl Iterator<Item = (i64, &CMat)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, b)| (self.lo + i as i64, b))
    }

    /// The symbol `Ŵ(k) = Σ_x e^{ikx} W(x)`.
    pub fn evaluate(&self, k: f64) -> CMat {
        let mut out = mat::czeros(self.dim);
        for (x, b) in self.blocks() {
            let phase = Complex64::from_polar(1.0, k * x as f64);
            out = out + b.mapv(|z| z * phase);
        }
        out
    }

    /// The analytic symbol `W̃(λ) = Σ_y W(y) λ^{-y}`; agrees with
    /// [`evaluate`](Self::evaluate) at `λ = e^{-ik}`.
    pub fn evaluate_analytic(&self, lambda: Complex64) -> Result<CMat> {
        if lambda.norm() == 0.0 {
            return Err(Error::ZeroArgument);
        }
        let mut out = mat::czeros(self.dim);
        for (y, b) in self.blocks() {
            let w = lambda.powi(-(y as i32));
            out = out + b.mapv(|z| z * w);
        }
        Ok(out)
    }

    /// Adjoint walk: `(W*)(x) = W(-x)†`, so `evaluate(W*, k) = Ŵ(k)†`.
    pub fn adjoint(&self) -> LaurentMatrix {
        let coeffs: Vec<CMat> = self.coeffs.iter().rev().map(mat::dagger).collect();
        LaurentMatrix::from_coeffs(self.dim, -self.hi(), coeffs).expect("adjoint keeps dimensions")
    }

    /// Coefficient-level product (convolution):
    /// `(W₁·W₂)(x) = Σ_y W₁(y) W₂(x - y)`.
    pub fn multiply(&self, other: &LaurentMatrix) -> Result<LaurentMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let lo = self.lo + other.lo;
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![mat::czeros(self.dim); n];
        for (x1, b1) in self.blocks() {
            for (x2, b2) in other.blocks() {
                let idx = (x1 + x2 - lo) as usize;
                coeffs[idx] = &coeffs[idx] + &b1.dot(b2);
            }
        }
        LaurentMatrix::from_coeffs(self.dim, lo, coeffs)
    }

    /// Unitarity as an exact Laurent identity: all coefficient blocks of
    /// `W*·W - 𝟙` and `W·W* - 𝟙` bounded by `tol`. Checking the convolution
    /// (rather than sampled symbols) cannot miss high-frequency violations.
    pub fn is_unitary(&self, tol: f64) -> bool {
        assert!(tol > 0.0);
        let adj = self.adjoint();
        for prod in [adj.multiply(self), self.multiply(&adj)] {
            let prod = prod.expect("dims match");
            // The identity block at offset 0 must be present.
            if prod.lo() > 0 || prod.hi() < 0 {
                return false;
            }
            for (x, b) in prod.blocks() {
                let target = if x == 0 { mat::eye(self.dim) } else { mat::czeros(self.dim) };
                if mat::max_diff(b, &target) > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Identity walk (single coefficient `𝟙` at offset 0).
    pub fn identity(dim: usize) -> LaurentMatrix {
        LaurentMatrix {
            dim,
            lo: 0,
            coeffs: vec![mat::eye(dim)],
        }
    }

    /// Pair-regrouped walk on doubled cells:
    /// `W_r(x) = [[W(2x), W(2x-1)], [W(2x+1), W(2x)]]`.
    ///
    /// Its symbol satisfies
    /// `Ŵ_r(k) = H(k/2) · diag(Ŵ(k/2), Ŵ(k/2+π)) · H(k/2)†` with
    /// `H(k) = (1/√2) [[𝟙, 𝟙], [e^{-ik}𝟙, -e^{-ik}𝟙]]`.
    pub fn regroup(&self) -> LaurentMatrix {
        let d = self.dim;
        // Offsets x with any of 2x-1, 2x, 2x+1 inside [lo, hi].
        let rlo = (self.lo - 1).div_euclid(2);
        let rhi = (self.hi() + 1).div_euclid(2);
        let mut coeffs = Vec::new();
        for x in rlo..=rhi {
            let mut b: CMat = Array2::zeros((2 * d, 2 * d));
            b.slice_mut(s![..d, ..d]).assign(&self.coeff(2 * x));
            b.slice_mut(s![..d, d..]).assign(&self.coeff(2 * x - 1));
            b.slice_mut(s![d.., ..d]).assign(&self.coeff(2 * x + 1));
            b.slice_mut(s![d.., d..]).assign(&self.coeff(2 * x));
            coeffs.push(b);
        }
        LaurentMatrix::from_coeffs(2 * d, rlo, coeffs).expect("regrouped blocks square")
    }

    /// Cellwise block sum: `dim = d₁ + d₂`, each coefficient the
    /// block-diagonal stack of `W₁(x)` and `W₂(x)` (zero-padded).
    pub fn direct_sum(&self, other: &LaurentMatrix) -> LaurentMatrix {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let mut coeffs = Vec::new();
        for x in lo..=hi {
            coeffs.push(mat::block_diag(&self.coeff(x), &other.coeff(x)));
        }
        LaurentMatrix::from_coeffs(self.dim + other.dim, lo, coeffs).expect("block sums square")
    }

    /// Entrywise comparison of two walks (over the union of their bands).
    pub fn approx_eq(&self, other: &LaurentMatrix, tol: f64) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        (lo..=hi).all(|x| mat::max_diff(&self.coeff(x), &other.coeff(x)) <= tol)
    }
}
