//! Dense complex matrix helpers shared by all modules.
//!
//! Everything here operates on [`CMat`] (= `ndarray::Array2<Complex64>`).
//! LAPACK (via `ndarray-linalg`) backs the eigen- and singular-value
//! decompositions; the thin wrappers below add the conventions the rest of
//! the crate relies on (eigenphase branch `(-π, π]`, deterministic
//! orthonormalization, robust eigenvectors of unitaries).

use ndarray::{s, Array1, Array2};
use ndarray_linalg::{Determinant, Eig, Eigh, SVD, UPLO};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense square complex matrix.
pub type CMat = Array2<Complex64>;
/// Dense complex vector.
pub type CVec = Array1<Complex64>;

/// Shorthand complex constructor.
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Real number as a complex scalar.
pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `d × d` identity.
pub fn eye(d: usize) -> CMat {
    Array2::eye(d)
}

/// `d × d` zero matrix.
pub fn czeros(d: usize) -> CMat {
    Array2::zeros((d, d))
}

/// Build a matrix from a nested slice of complex entries.
pub fn cmat(rows: &[&[Complex64]]) -> CMat {
    let n = rows.len();
    let m = rows[0].len();
    let mut a = Array2::zeros((n, m));
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), m, "ragged matrix literal");
        for (j, v) in row.iter().enumerate() {
            a[(i, j)] = *v;
        }
    }
    a
}

/// Build a matrix from real entries.
pub fn rmat(rows: &[&[f64]]) -> CMat {
    let n = rows.len();
    let m = rows[0].len();
    let mut a = Array2::zeros((n, m));
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), m, "ragged matrix literal");
        for (j, v) in row.iter().enumerate() {
            a[(i, j)] = cr(*v);
        }
    }
    a
}

/// Pauli σ₁.
pub fn sigma_x() -> CMat {
    rmat(&[&[0.0, 1.0], &[1.0, 0.0]])
}

/// Pauli σ₂.
pub fn sigma_y() -> CMat {
    cmat(&[&[cr(0.0), c(0.0, -1.0)], &[c(0.0, 1.0), cr(0.0)]])
}

/// Pauli σ₃.
pub fn sigma_z() -> CMat {
    rmat(&[&[1.0, 0.0], &[0.0, -1.0]])
}

/// Conjugate transpose.
pub fn dagger(a: &CMat) -> CMat {
    a.t().mapv(|z| z.conj())
}

/// Entrywise complex conjugate.
pub fn conj_mat(a: &CMat) -> CMat {
    a.mapv(|z| z.conj())
}

/// Largest entry magnitude.
pub fn max_abs(a: &CMat) -> f64 {
    a.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
}

/// `max |a - b|` entrywise.
pub fn max_diff(a: &CMat, b: &CMat) -> f64 {
    max_abs(&(a - b))
}

/// Whether `a` is unitary to `tol` (both products checked).
pub fn is_unitary_mat(a: &CMat, tol: f64) -> bool {
    let d = a.nrows();
    if a.ncols() != d {
        return false;
    }
    let id = eye(d);
    max_diff(&dagger(a).dot(a), &id) <= tol && max_diff(&a.dot(&dagger(a)), &id) <= tol
}

/// Whether `a` is Hermitian to `tol`.
pub fn is_hermitian_mat(a: &CMat, tol: f64) -> bool {
    max_diff(a, &dagger(a)) <= tol
}

/// Whether `a` is antisymmetric (`aᵀ = -a`) to `tol`.
pub fn is_antisymmetric_mat(a: &CMat, tol: f64) -> bool {
    max_abs(&(a.t().to_owned() + a)) <= tol
}

/// Determinant via LAPACK LU.
pub fn det(a: &CMat) -> Result<Complex64> {
    a.det().map_err(|e| Error::Linalg(e.to_string()))
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            let mut block = out.slice_mut(s![i * br..(i + 1) * br, j * bc..(j + 1) * bc]);
            block.assign(&b.mapv(|z| aij * z));
        }
    }
    out
}

/// Block-diagonal stack of two square matrices.
pub fn block_diag(a: &CMat, b: &CMat) -> CMat {
    let (da, db) = (a.nrows(), b.nrows());
    let mut out = Array2::zeros((da + db, da + db));
    out.slice_mut(s![..da, ..da]).assign(a);
    out.slice_mut(s![da.., da..]).assign(b);
    out
}

/// Hermitian eigendecomposition; eigenvalues ascending, orthonormal
/// eigenvector columns with `a·v_j = w_j·v_j`.
///
/// LAPACK works column-major, so on ndarray's row-major layout `zheev`
/// effectively diagonalizes `aᵀ = conj(a)`; conjugating its output restores
/// the column-eigenvector convention.
pub fn eigh_c(a: &CMat) -> Result<(Array1<f64>, CMat)> {
    let (w, v) = a.eigh(UPLO::Lower).map_err(|e| Error::Linalg(e.to_string()))?;
    Ok((w, v.mapv(|z| z.conj())))
}

/// General (non-symmetric) eigenvalues via LAPACK `zgeev`.
pub fn eig_values(a: &CMat) -> Result<CVec> {
    let (vals, _) = a.eig().map_err(|e| Error::Linalg(e.to_string()))?;
    Ok(vals)
}

/// Unitary polar factor of an invertible matrix: `a = P·H` with `P` unitary.
///
/// Computed as `U·V†` from the SVD `a = U Σ V†`. Fails when a singular value
/// drops below `1e-10 · σ_max` (the polar isometry would be ill-defined).
pub fn polar_unitary(a: &CMat) -> Result<CMat> {
    let (u, sig, vt) = a
        .svd(true, true)
        .map_err(|e| Error::Linalg(e.to_string()))?;
    let u = u.expect("svd with u requested");
    let vt = vt.expect("svd with vt requested");
    let smax = sig.iter().cloned().fold(0.0_f64, f64::max);
    if sig.iter().any(|&s| s < 1e-10 * smax.max(1e-300)) {
        return Err(Error::SingularMatrix);
    }
    Ok(u.dot(&vt))
}

/// Orthonormal basis of the column span of `a`, by column-pivoted
/// Gram-Schmidt. Deterministic: at each step the residual column of largest
/// norm is selected. Columns with residual norm below `tol` are dropped.
pub fn orthonormal_column_span(a: &CMat, tol: f64) -> CMat {
    let (n, m) = a.dim();
    let mut cols: Vec<CVec> = (0..m).map(|j| a.column(j).to_owned()).collect();
    let mut basis: Vec<CVec> = Vec::new();
    loop {
        // Pick the residual column with the largest norm.
        let (best, norm) = cols
            .iter()
            .enumerate()
            .map(|(j, v)| (j, v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()))
            .fold((usize::MAX, -1.0), |acc, it| if it.1 > acc.1 { it } else { acc });
        if best == usize::MAX || norm <= tol {
            break;
        }
        let q = cols[best].mapv(|z| z / cr(norm));
        // Deflate all remaining candidates.
        for v in cols.iter_mut() {
            let coeff: Complex64 = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            *v = &*v - &q.mapv(|z| z * coeff);
        }
        basis.push(q);
    }
    let mut out = Array2::zeros((n, basis.len()));
    for (j, q) in basis.iter().enumerate() {
        out.column_mut(j).assign(q);
    }
    out
}

/// Inner product `⟨a, b⟩` (conjugate-linear in the first argument).
pub fn inner(a: &CVec, b: &CVec) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigendecomposition of a unitary matrix: phases in `(-π, π]` and an
/// orthonormal eigenvector matrix `V` with `u·V = V·diag(e^{iθ})`.
///
/// Works through the commuting Hermitian pair `C = (u+u†)/2`,
/// `S = (u-u†)/(2i)`: eigenvectors of `C` are grouped into clusters (which
/// may merge ±θ pairs) and each cluster is split by diagonalizing the
/// restriction of `S`. This keeps everything inside Hermitian LAPACK
/// routines, so degenerate subspaces come out orthonormal.
pub fn unitary_eig(u: &CMat) -> Result<(Vec<f64>, CMat)> {
    let d = u.nrows();
    let ud = dagger(u);
    let cpart = (u + &ud).mapv(|z| z * cr(0.5));
    let spart = (u - &ud).mapv(|z| z * c(0.0, -0.5));
    let (cw, cv) = eigh_c(&cpart)?;
    let mut phases = vec![0.0_f64; d];
    let mut vecs: CMat = Array2::zeros((d, d));
    let mut start = 0usize;
    while start < d {
        let mut end = start + 1;
        while end < d && (cw[end] - cw[end - 1]).abs() < 1e-8 {
            end += 1;
        }
        let basis = cv.slice(s![.., start..end]).to_owned();
        let s_sub = dagger(&basis).dot(&spart).dot(&basis);
        let (sw, sv) = eigh_c(&s_sub)?;
        let rotated = basis.dot(&sv);
        for (off, idx) in (start..end).enumerate() {
            let mut theta = sw[off].atan2(cw[idx]);
            if theta <= -std::f64::consts::PI {
                theta += 2.0 * std::f64::consts::PI;
            }
            phases[idx] = theta;
            vecs.column_mut(idx).assign(&rotated.column(off));
        }
        start = end;
    }
    // Verify: u V = V diag(e^{iθ}).
    let mut recon: CMat = Array2::zeros((d, d));
    for j in 0..d {
        let col = vecs.column(j).mapv(|z| z * Complex64::from_polar(1.0, phases[j]));
        recon.column_mut(j).assign(&col);
    }
    if max_diff(&u.dot(&vecs), &recon) > 1e-6 {
        return Err(Error::NotUnitary);
    }
    Ok((phases, vecs))
}

/// Matrix exponential `exp(iH)` of a Hermitian `H`.
pub fn exp_i_hermitian(h: &CMat) -> Result<CMat> {
    let (w, v) = eigh_c(h)?;
    let d = h.nrows();
    let mut out = czeros(d);
    for j in 0..d {
        let col = v.column(j);
        let phase = Complex64::from_polar(1.0, w[j]);
        for r in 0..d {
            for ccol in 0..d {
                out[(r, ccol)] += phase * col[r] * col[ccol].conj();
            }
        }
    }
    Ok(out)
}

/// Principal logarithm of a unitary matrix: Hermitian `H` with
/// `u = exp(iH)` and eigenphases in `(-π, π]`. Fails when an eigenphase is
/// within `branch_tol` of the cut at π.
pub fn log_unitary(u: &CMat, branch_tol: f64) -> Result<CMat> {
    let (phases, v) = unitary_eig(u)?;
    if phases
        .iter()
        .any(|&p| (std::f64::consts::PI - p.abs()) < branch_tol)
    {
        return Err(Error::LogBranchCut);
    }
    let d = u.nrows();
    let mut h = czeros(d);
    for j in 0..d {
        let col = v.column(j);
        for r in 0..d {
            for cc in 0..d {
                h[(r, cc)] += cr(phases[j]) * col[r] * col[cc].conj();
            }
        }
    }
    Ok(h)
}

/// Roots of the polynomial `c₀ + c₁ z + … + c_n zⁿ` via the companion
/// matrix. Leading coefficients below `1e-12 · max|c|` are trimmed.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let maxc = coeffs.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    if maxc == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    let mut cs: Vec<Complex64> = coeffs.to_vec();
    while let Some(last) = cs.last() {
        if last.norm() <= 1e-12 * maxc && cs.len() > 1 {
            cs.pop();
        } else {
            break;
        }
    }
    let n = cs.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = cs[n];
    let mut comp: CMat = Array2::zeros((n, n));
    for i in 1..n {
        comp[(i, i - 1)] = cr(1.0);
    }
    for i in 0..n {
        comp[(i, n - 1)] = -cs[i] / lead;
    }
    let vals = eig_values(&comp)?;
    Ok(vals.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_eig_recovers_pauli_x_phases() {
        let (phases, v) = unitary_eig(&sigma_x()).unwrap();
        let mut sorted = phases.clone();
        sorted.sort_by(f64::total_cmp);
        assert!((sorted[0] - std::f64::consts::PI).abs() < 1e-12 || sorted[0].abs() < 1e-12);
        assert!(is_unitary_mat(&v, 1e-10));
    }

    #[test]
    fn unitary_eig_handles_degenerate_spectrum() {
        // iσ₂ ⊕ iσ₂ has doubly degenerate eigenvalues ±i.
        let b = sigma_y().mapv(|z| c(0.0, 1.0) * z);
        let u = block_diag(&b, &b);
        let (phases, v) = unitary_eig(&u).unwrap();
        assert!(is_unitary_mat(&v, 1e-9));
        let half_pi = std::f64::consts::FRAC_PI_2;
        for p in phases {
            assert!((p.abs() - half_pi).abs() < 1e-9);
        }
    }

    #[test]
    fn polar_of_scaled_unitary_is_the_unitary() {
        let a = sigma_y().mapv(|z| cr(3.0) * z);
        let p = polar_unitary(&a).unwrap();
        assert!(max_diff(&p, &sigma_y()) < 1e-12);
    }

    #[test]
    fn poly_roots_quadratic() {
        // z² - 3z + 2 = (z-1)(z-2)
        let mut roots = poly_roots(&[cr(2.0), cr(-3.0), cr(1.0)]).unwrap();
        roots.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((roots[0] - cr(1.0)).norm() < 1e-10);
        assert!((roots[1] - cr(2.0)).norm() < 1e-10);
    }

    #[test]
    fn log_exp_roundtrip() {
        let h = sigma_z().mapv(|z| cr(0.7) * z);
        let u = exp_i_hermitian(&h).unwrap();
        let h2 = log_unitary(&u, 1e-8).unwrap();
        assert!(max_diff(&h, &h2) < 1e-10);
    }

    #[test]
    fn orthonormal_span_of_projection() {
        // Projection onto (1, i)/√2.
        let q = cmat(&[
            &[cr(0.5), c(0.0, 0.5)],
            &[c(0.0, -0.5), cr(0.5)],
        ]);
        let b = orthonormal_column_span(&q, 1e-10);
        assert_eq!(b.ncols(), 1);
        let qb = q.dot(&b);
        assert!(max_diff(&qb, &b) < 1e-12);
    }
}
