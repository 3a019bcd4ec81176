//! Band structure, gap-resolved upper projections, flat-band deformation and
//! the chiral reduction to the upper-right block.
//!
//! For a gapped walk the *upper projection* `Q(k)` sums the spectral
//! projections of `Ŵ(k)` with eigenphase in `(0, π)`. The flat-band walk
//! replaces `Ŵ(k)` by `iQ(k) - i(𝟙 - Q(k))`, which squares to `-𝟙` and
//! carries the same index. In a chiral eigenbasis (`γ = i^s diag(𝟙, -𝟙)`)
//! the walk takes the block form `[[A, B], [-B†, D]]`; the classification
//! lives in the block `B`.

use ndarray::s;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat::{self, CMat};
use crate::symmetry::SymmetryRep;
use crate::walk::LaurentMatrix;

/// Tolerance below which an eigenphase counts as sitting on `±1`.
pub const GAP_TOL: f64 = 1e-8;

/// A unitary-matrix-valued function stored on a momentum grid.
#[derive(Debug, Clone)]
pub struct SampledUnitary {
    /// Cell dimension.
    pub d: usize,
    /// Strictly increasing grid in `[-π, π]`, both endpoints included.
    pub ks: Vec<f64>,
    /// One unitary value per grid point.
    pub values: Vec<CMat>,
}

impl SampledUnitary {
    /// Validate the type invariants (unitarity, periodic endpoints).
    pub fn validate(&self, tol: f64) -> Result<()> {
        if self.ks.len() != self.values.len() || self.ks.len() < 2 {
            return Err(Error::Invalid("grid/value length mismatch".into()));
        }
        for v in &self.values {
            if !mat::is_unitary_mat(v, tol) {
                return Err(Error::NotUnitary);
            }
        }
        let last = self.values.len() - 1;
        if mat::max_diff(&self.values[0], &self.values[last]) > tol {
            return Err(Error::Invalid("sampled unitary is not periodic".into()));
        }
        Ok(())
    }

    /// Pointwise direct sum on matching grids.
    pub fn direct_sum(&self, other: &SampledUnitary) -> Result<SampledUnitary> {
        if self.ks.len() != other.ks.len() {
            return Err(Error::Invalid("grid mismatch in direct sum".into()));
        }
        let values = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| mat::block_diag(a, b))
            .collect();
        Ok(SampledUnitary { d: self.d + other.d, ks: self.ks.clone(), values })
    }
}

/// Eigen-data of `Ŵ(k)` at one momentum: phases in `(-π, π]` and the
/// corresponding spectral projections.
#[derive(Debug, Clone)]
pub struct BandPoint {
    pub k: f64,
    pub eigenphases: Vec<f64>,
    pub projections: Vec<CMat>,
}

/// Diagonalize the symbol at one momentum into a [`BandPoint`].
pub fn band_point(w: &LaurentMatrix, k: f64) -> Result<BandPoint> {
    let u = w.evaluate(k);
    let (phases, v) = mat::unitary_eig(&u)?;
    let d = w.dim();
    let projections = (0..d)
        .map(|j| {
            let col = v.column(j);
            let mut p = mat::czeros(d);
            for r in 0..d {
                for c in 0..d {
                    p[(r, c)] = col[r] * col[c].conj();
                }
            }
            p
        })
        .collect();
    Ok(BandPoint { k, eigenphases: phases, projections })
}

/// Upper projection from an explicit unitary matrix: the spectral projection
/// onto eigenphases in `(0, π)`, computed as the positive eigenspace of the
/// Hermitian matrix `(u - u†)/(2i)`. Errors when an eigenvalue of `u` sits
/// within [`GAP_TOL`] of `±1`.
pub fn upper_projection_of(u: &CMat, k: f64) -> Result<CMat> {
    let d = u.nrows();
    let (phases, _) = mat::unitary_eig(u)?;
    for p in &phases {
        if (Complex64::from_polar(1.0, *p) - mat::cr(1.0)).norm() < GAP_TOL
            || (Complex64::from_polar(1.0, *p) + mat::cr(1.0)).norm() < GAP_TOL
        {
            return Err(Error::GapViolation { k });
        }
    }
    let im_part = (u - &mat::dagger(u)).mapv(|z| z * mat::c(0.0, -0.5));
    let (w, v) = mat::eigh_c(&im_part)?;
    let mut q = mat::czeros(d);
    for j in 0..d {
        if w[j] > 0.0 {
            let col = v.column(j);
            for r in 0..d {
                for c in 0..d {
                    q[(r, c)] += col[r] * col[c].conj();
                }
            }
        }
    }
    Ok(q)
}

/// Upper projection `Q(k)` of a walk at momentum `k`.
pub fn upper_projection(w: &LaurentMatrix, k: f64) -> Result<CMat> {
    upper_projection_of(&w.evaluate(k), k)
}

/// Flat-band value at a single momentum: `iQ(k) - i(𝟙 - Q(k))`.
pub fn flatten_at(w: &LaurentMatrix, k: f64) -> Result<CMat> {
    let q = upper_projection(w, k)?;
    let d = w.dim();
    Ok(q.mapv(|z| mat::c(0.0, 2.0) * z) - mat::eye(d).mapv(|z| mat::c(0.0, 1.0) * z))
}

/// Uniform grid on `[-π, π]` with both endpoints, `n` points.
pub fn momentum_grid(n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n)
        .map(|j| -std::f64::consts::PI + 2.0 * std::f64::consts::PI * j as f64 / (n - 1) as f64)
        .collect()
}

/// Flat-band walk of Lemma-TIflat form sampled on an `n_samples`-point grid.
///
/// The output is a [`SampledUnitary`] rather than a Laurent polynomial: the
/// flattening destroys strict locality, and the downstream index formulas
/// only need sampled values.
pub fn flatten(w: &LaurentMatrix, n_samples: usize) -> Result<SampledUnitary> {
    let ks = momentum_grid(n_samples);
    let mut values = Vec::with_capacity(ks.len());
    for &k in &ks {
        values.push(flatten_at(w, k)?);
    }
    Ok(SampledUnitary { d: w.dim(), ks, values })
}

/// Change of basis into the chiral eigenbasis.
#[derive(Debug, Clone)]
pub struct ChiralFrame {
    /// Unitary with the `+` eigenvectors of `i^{-s}γ` first, then the `-`.
    pub v: CMat,
    /// Dimension of the `+` eigenspace (equals the `-` dimension).
    pub plus_dim: usize,
    /// `s ∈ {0, 1}`: γ² = (+𝟙)/(-𝟙), i.e. γ = i^s · (projector difference).
    pub s: usize,
}

/// Build the deterministic chiral frame for a representation with γ.
///
/// `H = i^{-s}γ` is Hermitian with eigenvalues ±1; the frame columns are
/// column-pivoted orthonormalizations of the projections `(𝟙 ± H)/2`, which
/// makes the result reproducible across runs.
pub fn chiral_frame(rep: &SymmetryRep) -> Result<ChiralFrame> {
    let gamma = rep.gamma.as_ref().ok_or(Error::InvalidRep)?;
    let d = gamma.dim();
    let s = match gamma.square_sign(1e-8) {
        Some(1.0) => 0usize,
        Some(_) => 1usize,
        None => return Err(Error::InvalidRep),
    };
    let h = if s == 0 {
        gamma.matrix.clone()
    } else {
        gamma.matrix.mapv(|z| mat::c(0.0, -1.0) * z)
    };
    let half = mat::eye(d).mapv(|z| z * mat::cr(0.5));
    let p_plus = &half + &h.mapv(|z| z * mat::cr(0.5));
    let p_minus = &half - &h.mapv(|z| z * mat::cr(0.5));
    let bp = mat::orthonormal_column_span(&p_plus, 1e-10);
    let bm = mat::orthonormal_column_span(&p_minus, 1e-10);
    if bp.ncols() != bm.ncols() {
        return Err(Error::UnbalancedCell { plus: bp.ncols(), minus: bm.ncols() });
    }
    let mut v = mat::czeros(d);
    v.slice_mut(s![.., ..bp.ncols()]).assign(&bp);
    v.slice_mut(s![.., bp.ncols()..]).assign(&bm);
    Ok(ChiralFrame { v, plus_dim: bp.ncols(), s })
}

/// Upper-right block of `V† u V` in a chiral frame.
pub fn chiral_block_of(u: &CMat, frame: &ChiralFrame) -> CMat {
    let t = mat::dagger(&frame.v).dot(u).dot(&frame.v);
    let p = frame.plus_dim;
    t.slice(s![..p, p..]).to_owned()
}

/// All four blocks `[[A, B], [C, D]]` of `V† u V`.
pub fn chiral_blocks_of(u: &CMat, frame: &ChiralFrame) -> (CMat, CMat, CMat, CMat) {
    let t = mat::dagger(&frame.v).dot(u).dot(&frame.v);
    let p = frame.plus_dim;
    (
        t.slice(s![..p, ..p]).to_owned(),
        t.slice(s![..p, p..]).to_owned(),
        t.slice(s![p.., ..p]).to_owned(),
        t.slice(s![p.., p..]).to_owned(),
    )
}

/// Chiral block `B̂(k)` of a walk at momentum `k`; for gapped walks this
/// block is invertible, and singularity (smallest singular value below
/// `1e-10`) is reported as a gap failure.
pub fn chiral_block_b(w: &LaurentMatrix, rep: &SymmetryRep, k: f64) -> Result<CMat> {
    let frame = chiral_frame(rep)?;
    let b = chiral_block_of(&w.evaluate(k), &frame);
    let d = mat::det(&b)?;
    if d.norm() < 1e-10 {
        return Err(Error::SingularBlock);
    }
    Ok(b)
}

/// The chiral block of the *flat-band* walk at momentum `k`, computed as the
/// unitary polar factor of the raw block (equivalent to flattening the band
/// structure first).
pub fn chiral_block_b_flat(w: &LaurentMatrix, frame: &ChiralFrame, k: f64) -> Result<CMat> {
    let b = chiral_block_of(&w.evaluate(k), frame);
    mat::polar_unitary(&b).map_err(|_| Error::SingularBlock)
}

/// The chiral block `B̂(k)` of a Laurent walk as a Laurent matrix block
/// (sub-block of every coefficient after the frame rotation). Used by the
/// root-counting winding oracle.
pub fn chiral_block_laurent(w: &LaurentMatrix, rep: &SymmetryRep) -> Result<LaurentMatrix> {
    let frame = chiral_frame(rep)?;
    let p = frame.plus_dim;
    let vd = mat::dagger(&frame.v);
    let blocks: Vec<(i64, CMat)> = w
        .blocks()
        .map(|(x, b)| {
            let t = vd.dot(b).dot(&frame.v);
            (x, t.slice(s![..p, p..]).to_owned())
        })
        .collect();
    LaurentMatrix::from_blocks(p, &blocks)
}
