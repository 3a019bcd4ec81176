//! Finite walks with a decoupling cut, exponentially localized boundary
//! eigenvectors at eigenvalues ±1, and the boundary-mode oracle for the
//! bulk index.

use ndarray::s;
use ndarray_linalg::SVD;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat::{self, CMat, CVec};
use crate::symmetry::{IndexGroup, IndexValue, SymmetryRep, SymmetryType};
use crate::walk::LaurentMatrix;

/// A decaying solution of `(W̃(λ) - s)φ = 0` with `0 < |λ| < 1`.
#[derive(Debug, Clone)]
pub struct DecayMode {
    pub lambda: Complex64,
    pub multiplicity: usize,
    pub vector: CVec,
}

/// Decay modes of `W` at `s ∈ {+1, -1}`: roots of `det(W̃(λ) - s𝟙)` inside
/// the open unit disk (excluding `λ = 0`), with null vectors of the symbol.
/// Roots within `1e-6` of the unit circle abort (gap failure at `s`).
pub fn decay_roots(w: &LaurentMatrix, s: f64) -> Result<Vec<DecayMode>> {
    assert!(s == 1.0 || s == -1.0);
    // W̃(λ) = Σ_y W(y) λ^{-y}: a Laurent matrix in λ with block W(-p) at
    // power p; subtract s at power 0.
    let mut blocks: Vec<(i64, CMat)> = w.blocks().map(|(y, b)| (-y, b.clone())).collect();
    let d = w.dim();
    let mut found = false;
    for (p, b) in blocks.iter_mut() {
        if *p == 0 {
            *b = b.clone() - mat::eye(d).mapv(|z| z * mat::cr(s));
            found = true;
        }
    }
    if !found {
        blocks.push((0, mat::eye(d).mapv(|z| z * mat::cr(-s))));
    }
    let symbol = LaurentMatrix::from_blocks(d, &blocks)?;
    let (_, coeffs) = crate::invariants::symbol_det_poly(&symbol)?;
    let roots = mat::poly_roots(&coeffs)?;
    // Cluster roots inside the disk and extract null vectors.
    let mut inside: Vec<Complex64> = Vec::new();
    for r in roots {
        let a = r.norm();
        if (a - 1.0).abs() < 1e-6 {
            return Err(Error::RootOnCircle);
        }
        if a > 1e-9 && a < 1.0 {
            inside.push(r);
        }
    }
    inside.sort_by(|a, b| (a.norm(), a.arg()).partial_cmp(&(b.norm(), b.arg())).unwrap());
    let mut modes: Vec<DecayMode> = Vec::new();
    let mut i = 0;
    while i < inside.len() {
        let mut j = i + 1;
        while j < inside.len() && (inside[j] - inside[i]).norm() < 1e-6 {
            j += 1;
        }
        let lambda = inside[i..j].iter().sum::<Complex64>() / mat::cr((j - i) as f64);
        let m = w.evaluate_analytic(lambda)? - mat::eye(d).mapv(|z| z * mat::cr(s));
        let (_, sv, vt) = m.svd(false, true).map_err(|e| Error::Linalg(e.to_string()))?;
        let vt = vt.unwrap();
        let smallest = vt.row(d - 1).mapv(|z| z.conj());
        let residual = m.dot(&smallest).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if sv[d - 1] > 1e-6 || residual > 1e-8 {
            return Err(Error::FormulaMismatch(format!(
                "no null vector at claimed decay root λ = {lambda} (σ_min = {})",
                sv[d - 1]
            )));
        }
        modes.push(DecayMode { lambda, multiplicity: j - i, vector: smallest });
        i = j;
    }
    if modes.is_empty() {
        return Err(Error::NoDecayModes);
    }
    Ok(modes)
}

/// Predicted slowest decay rate at `s`: the largest `|λ|` among the decay
/// roots. Boundary eigenvectors at `s` cannot decay slower than this.
pub fn predict_decay(w: &LaurentMatrix, s: f64) -> Result<f64> {
    Ok(decay_roots(w, s)?
        .iter()
        .map(|m| m.lambda.norm())
        .fold(0.0, f64::max))
}

/// A walk on a ring of `n_cells` cells (total dimension `n_cells · d`),
/// optionally decoupled across one or more cuts. Position index layout:
/// component `i` of cell `x` sits at `x·d + i`.
#[derive(Debug, Clone)]
pub struct FiniteWalk {
    pub n_cells: usize,
    pub d: usize,
    pub u: CMat,
    /// Cells immediately to the right of each decoupling cut (empty for a
    /// plain ring).
    pub cut_positions: Vec<usize>,
}

impl FiniteWalk {
    pub fn dim(&self) -> usize {
        self.n_cells * self.d
    }

    /// Per-cell probability weights of a vector.
    pub fn cell_weights(&self, v: &CVec) -> Vec<f64> {
        (0..self.n_cells)
            .map(|x| {
                (0..self.d)
                    .map(|i| v[x * self.d + i].norm_sqr())
                    .sum::<f64>()
            })
            .collect()
    }
}

/// How to cut the ring open.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decoupler {
    /// No cut: the translation-invariant walk on the ring.
    Ring,
    /// Zero every matrix element crossing the seam between cell `n-1` and
    /// cell `0`, then restore unitarity by the polar decomposition.
    Polar,
}

/// Roll `W` out on a ring of `n_cells` cells and optionally decouple it at
/// the seam. Requires `n_cells ≥ max(2·bandwidth + 1, 8)` so that the two
/// boundaries created by a cut do not talk to each other through the bulk.
pub fn build_finite(w: &LaurentMatrix, n_cells: usize, decoupler: Decoupler) -> Result<FiniteWalk> {
    let d = w.dim();
    let band = (w.hi().max(-w.lo())).max(0) as usize;
    let min_cells = (2 * band + 1).max(8);
    if n_cells < min_cells {
        return Err(Error::Invalid(format!(
            "need at least {min_cells} cells for bandwidth {band}"
        )));
    }
    let n = n_cells * d;
    let mut u = mat::czeros(n);
    for (y, b) in w.blocks() {
        // ⟨x+y| W |x⟩ = W(y).
        for x in 0..n_cells {
            let xt = (x as i64 + y).rem_euclid(n_cells as i64) as usize;
            let mut view = u.slice_mut(s![xt * d..(xt + 1) * d, x * d..(x + 1) * d]);
            view += b;
        }
    }
    if !mat::is_unitary_mat(&u, 1e-8) {
        return Err(Error::NotUnitary);
    }
    match decoupler {
        Decoupler::Ring => Ok(FiniteWalk { n_cells, d, u, cut_positions: vec![] }),
        Decoupler::Polar => {
            // Zero every element connecting the two sides of the seam
            // (cells within `band` of the seam on opposite sides).
            for xl in (n_cells - band)..n_cells {
                for xr in 0..band {
                    u.slice_mut(s![xr * d..(xr + 1) * d, xl * d..(xl + 1) * d])
                        .fill(mat::cr(0.0));
                    u.slice_mut(s![xl * d..(xl + 1) * d, xr * d..(xr + 1) * d])
                        .fill(mat::cr(0.0));
                }
            }
            let u = mat::polar_unitary(&u)?;
            Ok(FiniteWalk { n_cells, d, u, cut_positions: vec![0] })
        }
    }
}

/// Which side of a cut a boundary mode lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A normalized eigenvector of a finite walk at eigenvalue `s = ±1`,
/// exponentially localized on one side of a cut.
#[derive(Debug, Clone)]
pub struct BoundaryMode {
    pub s: f64,
    pub side: Side,
    /// `⟨φ, i^{-s'} γ φ⟩` for chiral representations (`s' = 1` iff
    /// `γ² = -𝟙`); zero when no chiral symmetry is supplied.
    pub chirality: f64,
    /// Decay rate fitted to the tail of the cell-weight profile.
    pub fitted_lambda: f64,
    pub vector: CVec,
}

/// Eigenvectors of a decoupled finite walk with eigenvalue within `tol` of
/// ±1, sorted out by side of the cut and (for chiral representations) by
/// chirality. Each returned vector is an exact-to-`tol` eigenvector, is at
/// least 90% supported on its side, and carries a fitted decay rate.
pub fn boundary_modes(
    fw: &FiniteWalk,
    rep: Option<&SymmetryRep>,
    tol: f64,
) -> Result<Vec<BoundaryMode>> {
    if fw.cut_positions.len() != 1 {
        return Err(Error::Invalid("boundary modes require exactly one cut".into()));
    }
    let cut = fw.cut_positions[0];
    let n = fw.n_cells;
    let (phases, vectors) = mat::unitary_eig(&fw.u)?;
    // Total chiral operator (Hermitian form) on the ring, if available.
    let gamma_h: Option<CMat> = rep.and_then(|r| r.gamma.as_ref()).map(|g| {
        let sflag = matches!(rep.unwrap().stype, SymmetryType::DIII);
        let gh = if sflag {
            g.matrix.mapv(|z| mat::c(0.0, -1.0) * z)
        } else {
            g.matrix.clone()
        };
        let mut total = mat::czeros(fw.dim());
        for x in 0..n {
            total
                .slice_mut(s![x * fw.d..(x + 1) * fw.d, x * fw.d..(x + 1) * fw.d])
                .assign(&gh);
        }
        total
    });
    // Right-side weight projector: cells cut .. cut + n/2 - 1.
    let right_window: Vec<bool> = (0..n)
        .map(|x| {
            let rel = (x + n - cut) % n;
            rel < n / 2
        })
        .collect();
    let p_right = {
        let mut p = mat::czeros(fw.dim());
        for (x, &r) in right_window.iter().enumerate() {
            if r {
                for i in 0..fw.d {
                    p[(x * fw.d + i, x * fw.d + i)] = mat::cr(1.0);
                }
            }
        }
        p
    };
    let mut out: Vec<BoundaryMode> = Vec::new();
    for &s in &[1.0f64, -1.0] {
        // Collect the near-degenerate subspace at s.
        let mut cols: Vec<usize> = Vec::new();
        for (j, &phi) in phases.iter().enumerate() {
            if (Complex64::from_polar(1.0, phi) - mat::cr(s)).norm() <= tol {
                cols.push(j);
            }
        }
        if cols.is_empty() {
            continue;
        }
        let mut basis: CMat = ndarray::Array2::zeros((fw.dim(), cols.len()));
        for (c, &j) in cols.iter().enumerate() {
            basis.column_mut(c).assign(&vectors.column(j));
        }
        // Split the subspace by side, then by chirality, by successively
        // diagonalizing the restricted Hermitian operators (both commute
        // with the walk on this subspace up to the decoupling accuracy).
        let basis = split_by_hermitian(&basis, &p_right)?;
        let basis = match &gamma_h {
            Some(g) => split_by_hermitian(&basis, g)?,
            None => basis,
        };
        for c in 0..basis.ncols() {
            let v = basis.column(c).to_owned();
            let weights = fw.cell_weights(&v);
            let wr: f64 = weights
                .iter()
                .zip(&right_window)
                .filter(|(_, &r)| r)
                .map(|(w, _)| w)
                .sum();
            let side = if wr > 0.9 {
                Side::Right
            } else if wr < 0.1 {
                Side::Left
            } else {
                return Err(Error::AmbiguousLocalization(wr));
            };
            let chirality = match &gamma_h {
                Some(g) => {
                    let gv = g.dot(&v);
                    mat::inner(&v, &gv).re
                }
                None => 0.0,
            };
            let fitted_lambda = fit_decay(fw, &weights, cut, side);
            out.push(BoundaryMode { s, side, chirality, fitted_lambda, vector: v });
        }
    }
    Ok(out)
}

/// Rotate an orthonormal column basis so that the restriction of a
/// Hermitian operator to its span is diagonal.
fn split_by_hermitian(basis: &CMat, op: &CMat) -> Result<CMat> {
    if basis.ncols() <= 1 {
        return Ok(basis.clone());
    }
    let restricted = mat::dagger(basis).dot(op).dot(basis);
    let herm = (&restricted + &mat::dagger(&restricted)).mapv(|z| z * mat::cr(0.5));
    let (_, vecs) = mat::eigh_c(&herm)?;
    Ok(basis.dot(&vecs))
}

/// Fit `log w(x) ≈ const + 2·log|λ|·dist(x)` on the decaying tail of the
/// cell-weight profile, skipping the first two cells next to the cut and
/// weights below `1e-12` of the maximum.
fn fit_decay(fw: &FiniteWalk, weights: &[f64], cut: usize, side: Side) -> f64 {
    let n = fw.n_cells;
    let wmax = weights.iter().cloned().fold(0.0, f64::max);
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for dist in 2..n / 2 {
        let x = match side {
            Side::Right => (cut + dist) % n,
            Side::Left => (cut + n - 1 - dist) % n,
        };
        let w = weights[x];
        if w > 1e-12 * wmax {
            xs.push(dist as f64);
            ys.push(w.ln());
        }
    }
    if xs.len() < 3 {
        return f64::NAN;
    }
    let m = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    (slope / 2.0).exp()
}

/// Bulk index read off from the boundary: the modes to the right of the cut
/// of a decoupled finite walk, combined per symmetry type (summed
/// chiralities for the chiral types, counts mod 2 / mod 4 for D / DIII).
pub fn six_oracle(fw: &FiniteWalk, rep: &SymmetryRep, tol: f64) -> Result<IndexValue> {
    let modes = boundary_modes(fw, Some(rep), tol)?;
    let right: Vec<&BoundaryMode> = modes.iter().filter(|m| m.side == Side::Right).collect();
    match rep.stype {
        SymmetryType::AIII | SymmetryType::BDI | SymmetryType::CII => {
            let mut total = 0i64;
            for m in &right {
                let c = m.chirality;
                if (c - c.round()).abs() > 1e-6 {
                    return Err(Error::FormulaMismatch(format!(
                        "boundary mode chirality {c} is not integral"
                    )));
                }
                total += c.round() as i64;
            }
            let group = if rep.stype == SymmetryType::CII {
                IndexGroup::TwoZ
            } else {
                IndexGroup::Z
            };
            IndexValue::new(group, total)
        }
        SymmetryType::D => IndexValue::new(IndexGroup::Z2, right.len() as i64 % 2),
        SymmetryType::DIII => IndexValue::new(IndexGroup::TwoZ4, (right.len() as i64) % 4),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn decay_roots_split_step() {
        let (w, _) = models::split_step(models::SplitStepParams {
            theta1: std::f64::consts::PI / 8.0,
            theta2: -std::f64::consts::PI / 4.0,
        });
        for s in [1.0, -1.0] {
            let modes = decay_roots(&w, s).unwrap();
            assert!(!modes.is_empty());
            for m in &modes {
                let lam = m.lambda;
                assert!(lam.norm() > 1e-9 && lam.norm() < 1.0 - 1e-6);
                let sym = {
                    let val = w
                        .blocks()
                        .fold(mat::czeros(2), |acc, (y, b)| acc + b.mapv(|z| z * lam.powi(-y as i32)));
                    val - mat::eye(2).mapv(|z| z * mat::cr(s))
                };
                let residual: f64 = sym.dot(&m.vector).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                assert!(residual < 1e-8, "residual {residual}");
            }
            let rate = predict_decay(&w, s).unwrap();
            assert!(rate > 0.0 && rate < 1.0);
        }
    }

    #[test]
    fn decay_roots_flat_coin_has_none() {
        // W = -iσ₂ constant: W̃(λ) - s is invertible for all λ ≠ 0.
        let w = models::trivial_walk(&models::minus_i_sigma2()).unwrap();
        assert!(matches!(decay_roots(&w, 1.0), Err(Error::NoDecayModes)));
    }

    #[test]
    fn ring_walk_is_translation_of_symbol() {
        let (w, _) = models::split_step(models::SplitStepParams { theta1: 0.3, theta2: 0.8 });
        let fw = build_finite(&w, 16, Decoupler::Ring).unwrap();
        assert!(mat::is_unitary_mat(&fw.u, 1e-10));
        // Plane-wave eigenvector check at a commensurate momentum.
        let k = 2.0 * std::f64::consts::PI * 3.0 / 16.0;
        let wk = w.evaluate(k);
        let (_, vecs) = mat::unitary_eig(&wk).unwrap();
        let chi = vecs.column(0).to_owned();
        let mut psi = CVec::zeros(32);
        for x in 0..16 {
            // (F⁻¹ψ)(x) picks up e^{-ikx} with the e^{ikx} transform.
            let phase = Complex64::from_polar(1.0, -k * x as f64);
            for i in 0..2 {
                psi[2 * x + i] = phase * chi[i];
            }
        }
        let lhs = fw.u.dot(&psi);
        let (eigs, _) = mat::unitary_eig(&wk).unwrap();
        let rhs = psi.mapv(|z| z * Complex64::from_polar(1.0, eigs[0]));
        let diff: f64 = (&lhs - &rhs).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(diff < 1e-8 * 16.0, "plane wave residual {diff}");
    }

    #[test]
    fn polar_cut_stays_unitary_and_local() {
        let (w, _) = models::split_step(models::SplitStepParams { theta1: 0.3, theta2: 0.8 });
        let fw = build_finite(&w, 24, Decoupler::Polar).unwrap();
        assert!(mat::is_unitary_mat(&fw.u, 1e-10));
        // No matrix element crosses the seam.
        for xl in [23usize] {
            for xr in [0usize] {
                for i in 0..2 {
                    for j in 0..2 {
                        assert!(fw.u[(xr * 2 + i, xl * 2 + j)].norm() < 1e-10);
                        assert!(fw.u[(xl * 2 + i, xr * 2 + j)].norm() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn too_small_ring_is_rejected() {
        let (w, _) = models::split_step(models::SplitStepParams { theta1: 0.3, theta2: 0.8 });
        assert!(build_finite(&w, 4, Decoupler::Ring).is_err());
    }

    #[test]
    fn split_step_boundary_modes_match_index() {
        // (θ1, θ2) = (π/8, -π/4): six = 1, so one net-positive-chirality
        // mode on each side at one of s = ±1.
        let pi = std::f64::consts::PI;
        for (theta1, theta2) in [(pi / 8.0, -pi / 4.0), (pi / 2.5, pi / 8.0), (-pi / 4.0, pi / 8.0)] {
            let (w, rep) = models::split_step(models::SplitStepParams { theta1, theta2 });
            let six = crate::invariants::index_chiral(&w, &rep).unwrap();
            let fw = build_finite(&w, 40, Decoupler::Polar).unwrap();
            let oracle = six_oracle(&fw, &rep, 1e-6).unwrap();
            assert_eq!(oracle.value, six.value, "oracle {} vs bulk {}", oracle.value, six.value);
        }
    }

    #[test]
    fn boundary_mode_decay_matches_prediction() {
        // A point with six = 1, so boundary modes are guaranteed.
        let p = models::SplitStepParams {
            theta1: std::f64::consts::PI / 2.5,
            theta2: std::f64::consts::PI / 8.0,
        };
        let (w, rep) = models::split_step(p);
        let fw = build_finite(&w, 48, Decoupler::Polar).unwrap();
        let modes = boundary_modes(&fw, Some(&rep), 1e-6).unwrap();
        assert!(!modes.is_empty());
        for m in &modes {
            let bound = predict_decay(&w, m.s).unwrap();
            assert!(
                (m.fitted_lambda - bound).abs() < 1e-3,
                "fitted {} vs slowest bulk rate {}",
                m.fitted_lambda,
                bound
            );
        }
    }

}
