//! Index formulas: winding numbers with a root-counting cross oracle, the
//! η-flipped sign `s(Q, Q')`, Pfaffians, Wilson-loop Berry phases, the
//! antisymmetric closure for type DIII, and the per-type dispatch.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat::{self, CMat, CVec};
use crate::spectral::{self, ChiralFrame};
use crate::symmetry::{IndexGroup, IndexValue, SymOp, SymmetryRep, SymmetryType};
use crate::walk::LaurentMatrix;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

// ---------------------------------------------------------------------------
// Winding numbers
// ---------------------------------------------------------------------------

/// Total continuous phase change of `f` along `[a, b]`, tracked by adaptive
/// bisection: each segment's phase increment must stay below π/2 in
/// magnitude, bisecting up to 20 levels. Values with `|f| ≤ 1e-10` or
/// refinement exhaustion signal an origin crossing (gap failure).
pub fn total_phase<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, n0: usize) -> Result<f64> {
    assert!(n0 >= 2 && b > a);
    fn segment<F: Fn(f64) -> Complex64>(
        f: &F,
        k1: f64,
        z1: Complex64,
        k2: f64,
        z2: Complex64,
        depth: usize,
    ) -> Result<f64> {
        if z1.norm() <= 1e-10 {
            return Err(Error::CurveNearZero(z1.norm()));
        }
        if z2.norm() <= 1e-10 {
            return Err(Error::CurveNearZero(z2.norm()));
        }
        let dphi = (z2 / z1).arg();
        if dphi.abs() < std::f64::consts::FRAC_PI_2 {
            return Ok(dphi);
        }
        if depth >= 20 {
            return Err(Error::WindingRefinement);
        }
        let km = 0.5 * (k1 + k2);
        let zm = f(km);
        Ok(segment(f, k1, z1, km, zm, depth + 1)? + segment(f, km, zm, k2, z2, depth + 1)?)
    }
    let mut total = 0.0;
    let mut kprev = a;
    let mut zprev = f(a);
    for j in 1..=n0 {
        let k = a + (b - a) * j as f64 / n0 as f64;
        let z = f(k);
        total += segment(f, kprev, zprev, k, z, 0)?;
        kprev = k;
        zprev = z;
    }
    Ok(total)
}

/// Winding number of a closed curve given as a resampleable function on
/// `[a, b]` with `f(a) = f(b)`. The total phase is asserted to be within
/// `1e-3 · 2π` of an integer multiple of 2π before rounding.
pub fn winding_fn<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, n0: usize) -> Result<i64> {
    let total = total_phase(f, a, b, n0)? / TWO_PI;
    let rounded = total.round();
    if (total - rounded).abs() > 1e-3 {
        return Err(Error::WindingNotInteger(total));
    }
    Ok(rounded as i64)
}

/// A sampled origin-avoiding closed phase curve on `[-π, π]`, retaining its
/// sampler so the winding computation can refine adaptively.
pub struct PhaseCurve<'a> {
    pub ks: Vec<f64>,
    pub values: Vec<Complex64>,
    f: Box<dyn Fn(f64) -> Complex64 + 'a>,
}

impl<'a> PhaseCurve<'a> {
    /// Sample a curve on `[-π, π]` (`n0 + 1` points, endpoints included) and
    /// validate the type invariants: `min |c| > 1e-10` and closure
    /// `c(-π) = c(π)` to `1e-8` relative.
    pub fn from_fn<F: Fn(f64) -> Complex64 + 'a>(f: F, n0: usize) -> Result<PhaseCurve<'a>> {
        let ks: Vec<f64> = (0..=n0)
            .map(|j| -std::f64::consts::PI + TWO_PI * j as f64 / n0 as f64)
            .collect();
        let values: Vec<Complex64> = ks.iter().map(|&k| f(k)).collect();
        let min = values.iter().fold(f64::INFINITY, |m, z| m.min(z.norm()));
        if min <= 1e-10 {
            return Err(Error::CurveNearZero(min));
        }
        let gap = (values[0] - values[n0]).norm() / values[0].norm();
        if gap > 1e-8 {
            return Err(Error::Invalid("phase curve is not closed".into()));
        }
        Ok(PhaseCurve { ks, values, f: Box::new(f) })
    }

    /// Winding number of the curve.
    pub fn winding(&self) -> Result<i64> {
        winding_fn(&self.f, -std::f64::consts::PI, std::f64::consts::PI, self.ks.len() - 1)
    }

    /// Pointwise product with another curve.
    pub fn product<'b: 'a>(self, other: PhaseCurve<'b>) -> Result<PhaseCurve<'a>>
    where
        'a: 'b,
    {
        let n0 = self.ks.len() - 1;
        let f1 = self.f;
        let f2 = other.f;
        PhaseCurve::from_fn(move |k| f1(k) * f2(k), n0)
    }
}

/// Winding of `k ↦ det Ŵ(k)`: the index `ind(W)`, which vanishes for every
/// gapped walk.
pub fn index_ind(w: &LaurentMatrix) -> Result<i64> {
    let n0 = 32 + 8 * (w.hi() - w.lo()).unsigned_abs() as usize;
    let f = |k: f64| mat::det(&w.evaluate(k)).unwrap_or(mat::cr(0.0));
    winding_fn(&f, -std::f64::consts::PI, std::f64::consts::PI, n0)
}

// ---------------------------------------------------------------------------
// Root-counting winding oracle
// ---------------------------------------------------------------------------

/// Determinant of the symbol `Σ_x B(x) z^x` as a (trimmed) polynomial:
/// returns `(m, coeffs)` with `det = z^m · Σ_j coeffs[j] z^j` and
/// `coeffs[0] ≠ 0`. Extracted by evaluating at roots of unity and inverting
/// the DFT exactly (the exponent range `[d·lo, d·hi]` is finite).
pub fn symbol_det_poly(b: &LaurentMatrix) -> Result<(i64, Vec<Complex64>)> {
    let d = b.dim() as i64;
    let lo = d * b.lo();
    let hi = d * b.hi();
    let m = (hi - lo + 1) as usize;
    let mut samples = Vec::with_capacity(m);
    for j in 0..m {
        let z = Complex64::from_polar(1.0, TWO_PI * j as f64 / m as f64);
        let mut val = mat::czeros(b.dim());
        for (x, blk) in b.blocks() {
            let w = z.powi(x as i32);
            val = val + blk.mapv(|e| e * w);
        }
        samples.push(mat::det(&val)?);
    }
    // c_p for exponent p = lo + i: inverse DFT with exponents taken mod m.
    let mut coeffs = vec![mat::cr(0.0); m];
    for (i, c) in coeffs.iter_mut().enumerate() {
        let p = lo + i as i64;
        for (j, s) in samples.iter().enumerate() {
            let w = Complex64::from_polar(1.0, -TWO_PI * (j as f64) * (p.rem_euclid(m as i64) as f64) / m as f64);
            *c += s * w;
        }
        *c /= mat::cr(m as f64);
    }
    let maxc = coeffs.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()));
    if maxc <= 1e-12 {
        return Err(Error::ZeroPolynomial);
    }
    let mut lo = lo;
    while coeffs.len() > 1 && coeffs.last().unwrap().norm() <= 1e-12 * maxc {
        coeffs.pop();
    }
    while coeffs.len() > 1 && coeffs[0].norm() <= 1e-12 * maxc {
        coeffs.remove(0);
        lo += 1;
    }
    Ok((lo, coeffs))
}

/// Winding of `det B̂(k)` by the argument principle: the number of zeros of
/// the cleared-denominator polynomial inside the open unit disk (with
/// multiplicity, via companion-matrix eigenvalues) plus the lowest exponent
/// of the Laurent expansion. Exact integer output; roots within `1e-6` of
/// the unit circle abort (gap failure).
pub fn winding_oracle_roots(b: &LaurentMatrix) -> Result<i64> {
    let (lo, coeffs) = symbol_det_poly(b)?;
    let roots = mat::poly_roots(&coeffs)?;
    let mut count = 0i64;
    for r in &roots {
        let a = r.norm();
        if (a - 1.0).abs() < 1e-6 {
            return Err(Error::RootOnCircle);
        }
        if a < 1.0 {
            count += 1;
        }
    }
    Ok(count + lo)
}

// ---------------------------------------------------------------------------
// η-flipped projections and the sign s(Q, Q')
// ---------------------------------------------------------------------------

/// A projection `Q` with `ηQη⁻¹ + Q = 𝟙` (η-flipped), e.g. the upper band
/// projections of a type-D walk at `k = 0, π`.
#[derive(Debug, Clone)]
pub struct FlippedProjection {
    pub q: CMat,
    pub eta: SymOp,
}

impl FlippedProjection {
    /// Validate hermiticity, idempotency, the flip relation and half rank.
    pub fn new(q: CMat, eta: SymOp) -> Result<FlippedProjection> {
        let d = q.nrows();
        if !mat::is_hermitian_mat(&q, 1e-8) || mat::max_diff(&q.dot(&q), &q) > 1e-8 {
            return Err(Error::NotEtaFlipped);
        }
        let flipped = eta.conjugate(&q) + &q;
        if mat::max_diff(&flipped, &mat::eye(d)) > 1e-8 {
            return Err(Error::NotEtaFlipped);
        }
        Ok(FlippedProjection { q, eta })
    }

    /// Orthonormal frame of the range (columns), `d/2` of them.
    pub fn frame(&self) -> Result<CMat> {
        let d = self.q.nrows();
        if d % 2 != 0 {
            return Err(Error::OddDimension(d));
        }
        let f = mat::orthonormal_column_span(&self.q, 1e-8);
        if f.ncols() != d / 2 {
            return Err(Error::NotEtaFlipped);
        }
        Ok(f)
    }
}

/// `s(Q, Q') = det M` from explicit range frames: the frames are extended by
/// `φ_{α+d} = ηφ_α` to bases of the whole space and `M_{αβ} = ⟨φ_α, φ'_β⟩`.
/// The determinant must be ±1 (up to `1e-6`); the rounded sign is returned.
pub fn flip_sign_frames(f1: &CMat, f2: &CMat, eta: &SymOp) -> Result<f64> {
    let d = f1.nrows();
    let half = f1.ncols();
    let extend = |f: &CMat| -> CMat {
        let mut e = mat::czeros(d);
        for j in 0..half {
            e.column_mut(j).assign(&f.column(j));
            let flipped = eta.apply(&f.column(j).to_owned());
            e.column_mut(j + half).assign(&flipped);
        }
        e
    };
    let e1 = extend(f1);
    let e2 = extend(f2);
    let m = mat::dagger(&e1).dot(&e2);
    let det = mat::det(&m)?;
    if (det.norm() - 1.0).abs() > 1e-6 || det.im.abs() > 1e-6 {
        return Err(Error::FlipSignNotUnimodular(det.norm()));
    }
    Ok(det.re.signum())
}

/// The relative sign `s(Q₁, Q₂) ∈ {±1}` of two η-flipped projections with
/// the same η, built from deterministic column-pivoted range frames.
pub fn flip_sign(q1: &FlippedProjection, q2: &FlippedProjection) -> Result<f64> {
    if mat::max_diff(&q1.eta.matrix, &q2.eta.matrix) > 1e-10 {
        return Err(Error::Invalid("flip_sign requires a common η".into()));
    }
    flip_sign_frames(&q1.frame()?, &q2.frame()?, &q1.eta)
}

// ---------------------------------------------------------------------------
// Pfaffian (Parlett–Reid with complete pivoting)
// ---------------------------------------------------------------------------

/// Pfaffian of an antisymmetric matrix by skew Gaussian elimination with
/// complete pivoting. Satisfies `pf(A)² = det(A)` and
/// `pf(RARᵀ) = det(R)·pf(A)`.
pub fn pfaffian(a: &CMat) -> Result<Complex64> {
    let n = a.nrows();
    if n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    if !mat::is_antisymmetric_mat(a, 1e-10) {
        return Err(Error::NotAntisymmetric);
    }
    let mut m = a.clone();
    let mut pf = mat::cr(1.0);
    let swap = |m: &mut CMat, p: usize, q: usize| {
        if p == q {
            return;
        }
        for j in 0..m.ncols() {
            let t = m[(p, j)];
            m[(p, j)] = m[(q, j)];
            m[(q, j)] = t;
        }
        for i in 0..m.nrows() {
            let t = m[(i, p)];
            m[(i, p)] = m[(i, q)];
            m[(i, q)] = t;
        }
    };
    let mut k = 0usize;
    while k + 1 < n {
        // Complete pivoting: largest remaining entry below the diagonal.
        let mut best = (k + 1, k);
        let mut best_val = 0.0;
        for j in k..n {
            for i in (j + 1)..n {
                let v = m[(i, j)].norm();
                if v > best_val {
                    best_val = v;
                    best = (i, j);
                }
            }
        }
        if best_val < 1e-14 {
            return Ok(mat::cr(0.0));
        }
        let (bi, bj) = best;
        // Bring the pivot entry to position (k+1, k).
        if bj != k {
            swap(&mut m, bj, k);
            pf = -pf;
        }
        // The row index may have been moved by the column swap.
        let bi = if bi == k { bj } else { bi };
        if bi != k + 1 {
            swap(&mut m, bi, k + 1);
            pf = -pf;
        }
        pf *= m[(k, k + 1)];
        // Eliminate rows/columns below the 2×2 pivot block with unit-det
        // Gauss transforms (they leave the Pfaffian unchanged).
        let p10 = m[(k + 1, k)];
        let p01 = m[(k, k + 1)];
        for i in (k + 2)..n {
            let c1 = m[(i, k)] / p10;
            let c2 = m[(i, k + 1)] / p01;
            for j in 0..n {
                let delta = c1 * m[(k + 1, j)] + c2 * m[(k, j)];
                m[(i, j)] -= delta;
            }
            for j in 0..n {
                let delta = c1 * m[(j, k + 1)] + c2 * m[(j, k)];
                m[(j, i)] -= delta;
            }
        }
        k += 2;
    }
    Ok(pf)
}

// ---------------------------------------------------------------------------
// η-real basis and type D
// ---------------------------------------------------------------------------

/// Orthonormal basis of η-fixed vectors (`ηψ = ψ`) for an antiunitary η
/// with `η² = 𝟙`, assembled from the candidates `e_j + ηe_j` and
/// `i(e_j - ηe_j)`. Returned as the unitary matrix with those columns.
pub fn eta_real_basis(eta: &SymOp) -> Result<CMat> {
    let d = eta.dim();
    let mut chosen: Vec<CVec> = Vec::new();
    let mut candidates: Vec<CVec> = Vec::new();
    for j in 0..d {
        let mut e = CVec::zeros(d);
        e[j] = mat::cr(1.0);
        let ee = eta.apply(&e);
        candidates.push(&e + &ee);
        candidates.push((&e - &ee).mapv(|z| mat::c(0.0, 1.0) * z));
    }
    for cand in candidates {
        let mut v = cand;
        for q in &chosen {
            let coeff = mat::inner(q, &v);
            v = &v - &q.mapv(|z| z * coeff);
        }
        let norm = mat::vec_norm(&v);
        if norm > 1e-6 {
            chosen.push(v.mapv(|z| z / mat::cr(norm)));
        }
        if chosen.len() == d {
            break;
        }
    }
    if chosen.len() != d {
        return Err(Error::Invalid("could not build an η-real basis".into()));
    }
    let mut r = mat::czeros(d);
    for (j, q) in chosen.iter().enumerate() {
        r.column_mut(j).assign(q);
    }
    Ok(r)
}

/// Detailed output of the type-D index: the index, the flip sign, and the
/// two Pfaffian values of the flat-band walk at `k = 0, π` in one fixed
/// η-real basis.
#[derive(Debug, Clone)]
pub struct TypeDDetails {
    pub six: IndexValue,
    pub flip: f64,
    pub pf_0: f64,
    pub pf_pi: f64,
}

/// Type-D index with internal cross-check: `(-1)^six = s(Q(0), Q(π))`,
/// verified against the Pfaffian ratio `pf(W♭(0)) / pf(W♭(π))` expressed in
/// an η-real basis. A disagreement is reported as an error.
pub fn index_d_details(w: &LaurentMatrix, rep: &SymmetryRep) -> Result<TypeDDetails> {
    let eta = rep.eta.as_ref().ok_or(Error::InvalidRep)?;
    let q0 = spectral::upper_projection(w, 0.0)?;
    let qpi = spectral::upper_projection(w, std::f64::consts::PI)?;
    let f0 = FlippedProjection::new(q0.clone(), eta.clone())?;
    let fpi = FlippedProjection::new(qpi.clone(), eta.clone())?;
    let s = flip_sign(&f0, &fpi)?;
    // Pfaffian route: U_Q = i(2Q - 𝟙) is real antisymmetric in an η-real
    // basis; the ratio of Pfaffians reproduces s(Q(0), Q(π)).
    let r = eta_real_basis(eta)?;
    let d = w.dim();
    let uq = |q: &CMat| -> CMat {
        q.mapv(|z| mat::c(0.0, 2.0) * z) - mat::eye(d).mapv(|z| mat::c(0.0, 1.0) * z)
    };
    let t0 = mat::dagger(&r).dot(&uq(&q0)).dot(&r);
    let tpi = mat::dagger(&r).dot(&uq(&qpi)).dot(&r);
    for t in [&t0, &tpi] {
        if !mat::is_antisymmetric_mat(t, 1e-8) || t.iter().any(|z| z.im.abs() > 1e-8) {
            return Err(Error::FormulaMismatch(
                "flat walk is not real antisymmetric in the η-real basis".into(),
            ));
        }
    }
    let pf0 = pfaffian(&t0)?;
    let pfpi = pfaffian(&tpi)?;
    let ratio = (pf0 / pfpi).re.signum();
    if (ratio - s).abs() > 1e-6 {
        return Err(Error::FormulaMismatch(format!(
            "flip sign {s} vs Pfaffian ratio {ratio}"
        )));
    }
    let six = IndexValue::new(IndexGroup::Z2, if s > 0.0 { 0 } else { 1 })?;
    Ok(TypeDDetails { six, flip: s, pf_0: pf0.re, pf_pi: pfpi.re })
}

/// Type-D index `six ∈ ℤ₂` from `(-1)^six = s(Q(0), Q(π))`.
pub fn index_d(w: &LaurentMatrix, rep: &SymmetryRep) -> Result<IndexValue> {
    Ok(index_d_details(w, rep)?.six)
}

// ---------------------------------------------------------------------------
// Chiral types
// ---------------------------------------------------------------------------

/// Chiral index `six = wind(k ↦ det B̂(k))` for AIII, BDI (ℤ) and CII (2ℤ,
/// evenness asserted).
pub fn index_chiral(w: &LaurentMatrix, rep: &SymmetryRep) -> Result<IndexValue> {
    let frame = spectral::chiral_frame(rep)?;
    let n0 = 32 + 8 * (w.hi() - w.lo()).unsigned_abs() as usize;
    let f = |k: f64| {
        let b = spectral::chiral_block_of(&w.evaluate(k), &frame);
        mat::det(&b).unwrap_or(mat::cr(0.0))
    };
    let wind = winding_fn(&f, -std::f64::consts::PI, std::f64::consts::PI, n0)?;
    match rep.stype {
        SymmetryType::AIII | SymmetryType::BDI => IndexValue::new(IndexGroup::Z, wind),
        SymmetryType::CII => IndexValue::new(IndexGroup::TwoZ, wind)
            .map_err(|_| Error::FormulaMismatch("odd winding for a CII walk".into())),
        _ => Err(Error::Invalid("index_chiral requires a chiral type".into())),
    }
}

/// The secondary BDI invariant `sign(det B̂(0))`; `det B̂(0)` is real for
/// BDI walks.
pub fn sign_c0(w: &LaurentMatrix, rep: &SymmetryRep) -> Result<f64> {
    let frame = spectral::chiral_frame(rep)?;
    let c0 = mat::det(&spectral::chiral_block_of(&w.evaluate(0.0), &frame))?;
    if c0.im.abs() > 1e-8 * c0.norm().max(1.0) {
        return Err(Error::FormulaMismatch("det B̂(0) is not real".into()));
    }
    Ok(c0.re.signum())
}

// ---------------------------------------------------------------------------
// Berry phase (Wilson loop)
// ---------------------------------------------------------------------------

/// Wilson-loop Berry phase of the upper band, in units of π: orthonormal
/// frames of `Q(k)` are computed on an `n_samples` grid over `[-π, π]` (the
/// frame at `-π` is reused at `π` to close the loop) and the arguments of
/// the overlap determinants are accumulated.
///
/// For chiral flat-band walks this equals the winding of `det B̂`; for type
/// D its value mod 2 is the index.
pub fn berry_upper(w: &LaurentMatrix, n_samples: usize) -> Result<f64> {
    assert!(n_samples >= 128);
    let ks = spectral::momentum_grid(n_samples);
    let mut frames: Vec<CMat> = Vec::with_capacity(ks.len());
    for &k in &ks {
        let q = spectral::upper_projection(w, k)?;
        frames.push(mat::orthonormal_column_span(&q, 1e-10));
    }
    let last = frames.len() - 1;
    frames[last] = frames[0].clone();
    let mut total = 0.0;
    for j in 0..last {
        let overlap = mat::dagger(&frames[j]).dot(&frames[j + 1]);
        let det = mat::det(&overlap)?;
        if det.norm() < 1e-8 {
            return Err(Error::Invalid("singular frame overlap (grid too coarse)".into()));
        }
        total += det.arg();
    }
    Ok(total / std::f64::consts::PI)
}

// ---------------------------------------------------------------------------
// DIII: antisymmetric closure and index
// ---------------------------------------------------------------------------

/// Hua-type factorization `A = U J Uᵀ` of an antisymmetric unitary, with
/// `J = ⊕ [[0, 1], [-1, 0]]`. The columns of `U` are Kramers pairs
/// `(θe, e)` of the quaternionic structure `θ(x) = A·conj(x)` (which
/// satisfies `θ² = -𝟙` exactly because `A` is antisymmetric unitary).
fn hua_factor(a: &CMat) -> Result<CMat> {
    let n = a.nrows();
    if n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    if !mat::is_antisymmetric_mat(a, 1e-8) || !mat::is_unitary_mat(a, 1e-8) {
        return Err(Error::ClosureFailure("endpoint not antisymmetric unitary".into()));
    }
    let theta = |x: &CVec| -> CVec { a.dot(&x.mapv(|z| z.conj())) };
    let mut chosen: Vec<CVec> = Vec::new();
    for j in 0..n {
        if chosen.len() == n {
            break;
        }
        let mut v = CVec::zeros(n);
        v[j] = mat::cr(1.0);
        for q in &chosen {
            let coeff = mat::inner(q, &v);
            v = &v - &q.mapv(|z| z * coeff);
        }
        let norm = mat::vec_norm(&v);
        if norm < 1e-6 {
            continue;
        }
        let e = v.mapv(|z| z / mat::cr(norm));
        let f = theta(&e);
        chosen.push(f);
        chosen.push(e);
    }
    if chosen.len() != n {
        return Err(Error::ClosureFailure("Kramers pairing incomplete".into()));
    }
    let mut u = mat::czeros(n);
    for (j, q) in chosen.iter().enumerate() {
        u.column_mut(j).assign(q);
    }
    // Verify A = U J Uᵀ.
    let j = std_j(n);
    let recon = u.dot(&j).dot(&u.t().to_owned());
    if mat::max_diff(&recon, a) > 1e-8 {
        return Err(Error::ClosureFailure("Hua factorization residual too large".into()));
    }
    Ok(u)
}

/// `J = ⊕ [[0, 1], [-1, 0]]`.
fn std_j(n: usize) -> CMat {
    let mut j = mat::czeros(n);
    for b in 0..n / 2 {
        j[(2 * b, 2 * b + 1)] = mat::cr(1.0);
        j[(2 * b + 1, 2 * b)] = mat::cr(-1.0);
    }
    j
}

/// A continuously evaluable path of antisymmetric unitaries between two
/// antisymmetric unitary endpoints: `A(t) = U(t) J U(t)ᵀ` with
/// `U(t) = U₀ exp(t · log(U₀†U₁))`.
pub struct AntisymmetricPath {
    u0: CMat,
    gen: CMat,
    j: CMat,
}

impl AntisymmetricPath {
    /// Build the path; eigenphases of `U₀†U₁` on the branch cut are taken
    /// at `+π` (any closure differs from any other by an even winding, so
    /// the branch choice does not affect the mod-4 index downstream).
    pub fn new(a0: &CMat, a1: &CMat) -> Result<AntisymmetricPath> {
        let u0 = hua_factor(a0)?;
        let u1 = hua_factor(a1)?;
        let m = mat::dagger(&u0).dot(&u1);
        let gen = mat::log_unitary(&m, 0.0).map_err(|e| Error::ClosureFailure(e.to_string()))?;
        Ok(AntisymmetricPath { u0, gen, j: std_j(a0.nrows()) })
    }

    /// Path value at `t ∈ [0, 1]`.
    pub fn at(&self, t: f64) -> Result<CMat> {
        let step = mat::exp_i_hermitian(&self.gen.mapv(|z| z * mat::cr(t)))?;
        let u = self.u0.dot(&step);
        Ok(u.dot(&self.j).dot(&u.t().to_owned()))
    }
}

/// Discrete antisymmetric closure from `A0` to `A1`: `steps + 1` matrices
/// along the Hua-interpolated path, each antisymmetric to `1e-8` with
/// `|det| ≥ 1e-6`.
pub fn antisymmetric_closure(a0: &CMat, a1: &CMat, steps: usize) -> Result<Vec<CMat>> {
    assert!(steps >= 1);
    let path = AntisymmetricPath::new(a0, a1)?;
    let mut out = Vec::with_capacity(steps + 1);
    for j in 0..=steps {
        let a = path.at(j as f64 / steps as f64)?;
        if !mat::is_antisymmetric_mat(&a, 1e-8) {
            return Err(Error::ClosureFailure("path left the antisymmetric matrices".into()));
        }
        if mat::det(&a)?.norm() < 1e-6 {
            return Err(Error::ClosureFailure("path determinant collapsed".into()));
        }
        out.push(a);
    }
    Ok(out)
}

/// DIII chiral frame adapted to η: the `H₋` basis is the η-image of the
/// deterministic `H₊` basis, so the reduced particle-hole symmetry acts as
/// plain conjugation and `B̂(k)ᵀ = -B̂(-k)` holds on the nose (antisymmetric
/// at `k = 0, π`).
pub fn chiral_frame_diii(rep: &SymmetryRep) -> Result<ChiralFrame> {
    let base = spectral::chiral_frame(rep)?;
    let eta = rep.eta.as_ref().ok_or(Error::InvalidRep)?;
    let d = base.v.nrows();
    let p = base.plus_dim;
    let mut v = mat::czeros(d);
    for j in 0..p {
        let col = base.v.column(j).to_owned();
        let image = eta.apply(&col);
        v.column_mut(j).assign(&col);
        v.column_mut(j + p).assign(&image);
    }
    if !mat::is_unitary_mat(&v, 1e-8) {
        return Err(Error::InvalidRep);
    }
    Ok(ChiralFrame { v, plus_dim: p, s: base.s })
}

/// DIII index `six ∈ {0, 2} ⊂ 2ℤ₄`: winding of `c(k) = det B̂♭(k)` over
/// `[0, π]` continued by the determinant of the antisymmetric closure from
/// `B̂♭(π)` back to `B̂♭(0)`; `six = 2·wind(c) mod 4`.
pub fn index_diii(w: &LaurentMatrix, rep: &SymmetryRep) -> Result<IndexValue> {
    let frame = chiral_frame_diii(rep)?;
    let bflat = |k: f64| spectral::chiral_block_b_flat(w, &frame, k);
    let a_pi = bflat(std::f64::consts::PI)?;
    let a_0 = bflat(0.0)?;
    let path = AntisymmetricPath::new(&a_pi, &a_0)?;
    // Parametrize the closed curve by s ∈ [0, 2π]: the physical half on
    // [0, π], the closure on [π, 2π].
    let f = |s: f64| -> Complex64 {
        let m = if s <= std::f64::consts::PI {
            bflat(s).ok()
        } else {
            path.at((s - std::f64::consts::PI) / std::f64::consts::PI).ok()
        };
        m.and_then(|m| mat::det(&m).ok()).unwrap_or(mat::cr(0.0))
    };
    let n0 = 64 + 8 * (w.hi() - w.lo()).unsigned_abs() as usize;
    let wind = winding_fn(&f, 0.0, TWO_PI, n0)?;
    IndexValue::new(IndexGroup::TwoZ4, (2 * wind).rem_euclid(4))
}

/// Berry-plus-Pfaffian evaluation of the DIII index (mod 4): the continuous
/// phase change of `det B̂♭` over `[0, π]` combined with the argument of
/// `pf(B̂♭(π)) / pf(B̂♭(0))`.
pub fn index_diii_berry(w: &LaurentMatrix, rep: &SymmetryRep) -> Result<IndexValue> {
    let frame = chiral_frame_diii(rep)?;
    let bflat = |k: f64| spectral::chiral_block_b_flat(w, &frame, k);
    let f = |k: f64| -> Complex64 {
        bflat(k).and_then(|m| mat::det(&m)).unwrap_or(mat::cr(0.0))
    };
    let n0 = 64 + 8 * (w.hi() - w.lo()).unsigned_abs() as usize;
    let dtheta = total_phase(&f, 0.0, std::f64::consts::PI, n0)?;
    let pf_pi = pfaffian(&bflat(std::f64::consts::PI)?)?;
    let pf_0 = pfaffian(&bflat(0.0)?)?;
    let val = dtheta / std::f64::consts::PI - 2.0 * (pf_pi / pf_0).arg() / std::f64::consts::PI;
    let rounded = val.round();
    if (val - rounded).abs() > 1e-4 {
        return Err(Error::FormulaMismatch(format!(
            "DIII Berry/Pfaffian value {val} is not close to an integer"
        )));
    }
    IndexValue::new(IndexGroup::TwoZ4, (rounded as i64).rem_euclid(4))
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

/// Winding of a closed discrete sample sequence (first = last value); every
/// step must advance the phase by less than π/2, otherwise the grid is too
/// coarse to track the curve.
fn discrete_winding_steps(values: &[Complex64]) -> Result<f64> {
    let mut total = 0.0;
    for pair in values.windows(2) {
        if pair[0].norm() <= 1e-10 || pair[1].norm() <= 1e-10 {
            return Err(Error::CurveNearZero(pair[0].norm().min(pair[1].norm())));
        }
        let step = (pair[1] / pair[0]).arg();
        if step.abs() >= std::f64::consts::FRAC_PI_2 {
            return Err(Error::Invalid("sample grid too coarse to track the phase".into()));
        }
        total += step;
    }
    Ok(total)
}

/// The invariant computed from a sampled (e.g. flattened) walk instead of a
/// Laurent polynomial. The grid must be the closed uniform grid on `[-π, π]`
/// produced by [`spectral::momentum_grid`], with an even number of segments
/// so that `k = 0` is a sample point.
pub fn index_sampled(su: &spectral::SampledUnitary, rep: &SymmetryRep) -> Result<IndexValue> {
    let n = su.ks.len() - 1;
    let j0 = su
        .ks
        .iter()
        .position(|&k| k.abs() < 1e-12)
        .ok_or_else(|| Error::Invalid("sample grid must contain k = 0".into()))?;
    match rep.stype {
        SymmetryType::D => {
            let eta = rep.eta.as_ref().ok_or(Error::InvalidRep)?;
            let q0 = spectral::upper_projection_of(&su.values[j0], 0.0)?;
            let qpi = spectral::upper_projection_of(&su.values[0], -std::f64::consts::PI)?;
            let f0 = FlippedProjection::new(q0, eta.clone())?;
            let fpi = FlippedProjection::new(qpi, eta.clone())?;
            let s = flip_sign(&f0, &fpi)?;
            IndexValue::new(IndexGroup::Z2, if s > 0.0 { 0 } else { 1 })
        }
        SymmetryType::AIII | SymmetryType::BDI | SymmetryType::CII => {
            let frame = spectral::chiral_frame(rep)?;
            let dets: Vec<Complex64> = su
                .values
                .iter()
                .map(|u| mat::det(&spectral::chiral_block_of(u, &frame)))
                .collect::<Result<_>>()?;
            let total = discrete_winding_steps(&dets)? / TWO_PI;
            let wind = total.round();
            if (total - wind).abs() > 1e-3 {
                return Err(Error::WindingNotInteger(total));
            }
            let group = match rep.stype {
                SymmetryType::CII => IndexGroup::TwoZ,
                _ => IndexGroup::Z,
            };
            IndexValue::new(group, wind as i64)
        }
        SymmetryType::DIII => {
            let frame = chiral_frame_diii(rep)?;
            // Flat chiral blocks on the sampled half [0, π] (grid runs -π..π,
            // so that is samples j0..=n).
            let mut dets: Vec<Complex64> = Vec::with_capacity(n - j0 + 1);
            let mut b_first = None;
            let mut b_last = None;
            for j in j0..=n {
                let b = mat::polar_unitary(&spectral::chiral_block_of(&su.values[j], &frame))?;
                dets.push(mat::det(&b)?);
                if j == j0 {
                    b_first = Some(b.clone());
                }
                if j == n {
                    b_last = Some(b);
                }
            }
            let half = discrete_winding_steps(&dets)?;
            let path = AntisymmetricPath::new(&b_last.unwrap(), &b_first.unwrap())?;
            let f = |t: f64| -> Complex64 {
                path.at(t).and_then(|m| mat::det(&m)).unwrap_or(mat::cr(0.0))
            };
            let closure = total_phase(&f, 0.0, 1.0, 32)?;
            let total = (half + closure) / TWO_PI;
            let wind = total.round();
            if (total - wind).abs() > 1e-3 {
                return Err(Error::WindingNotInteger(total));
            }
            IndexValue::new(IndexGroup::TwoZ4, (2 * wind as i64).rem_euclid(4))
        }
    }
}

/// The complete invariant `six(W)`, dispatched on the symmetry type.
pub fn index(w: &LaurentMatrix, rep: &SymmetryRep) -> Result<IndexValue> {
    match rep.stype {
        SymmetryType::D => index_d(w, rep),
        SymmetryType::AIII | SymmetryType::BDI | SymmetryType::CII => index_chiral(w, rep),
        SymmetryType::DIII => index_diii(w, rep),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{c, cr};
    use crate::models;
    use crate::symmetry::reps;

    #[test]
    fn winding_examples() {
        let f0 = |_: f64| cr(2.5);
        assert_eq!(winding_fn(&f0, -std::f64::consts::PI, std::f64::consts::PI, 16).unwrap(), 0);
        let f1 = |k: f64| Complex64::from_polar(1.0, k);
        assert_eq!(winding_fn(&f1, -std::f64::consts::PI, std::f64::consts::PI, 16).unwrap(), 1);
        // e^{2ik}(2 + e^{ik}): inner factor has no zeros in the disk.
        let f2 = |k: f64| {
            Complex64::from_polar(1.0, 2.0 * k) * (cr(2.0) + Complex64::from_polar(1.0, k))
        };
        assert_eq!(winding_fn(&f2, -std::f64::consts::PI, std::f64::consts::PI, 16).unwrap(), 2);
    }

    #[test]
    fn phase_curve_validation_and_product() {
        let c1 = PhaseCurve::from_fn(|k| Complex64::from_polar(1.0, k), 64).unwrap();
        let c2 = PhaseCurve::from_fn(|k| Complex64::from_polar(2.0, 2.0 * k), 64).unwrap();
        assert_eq!(c1.winding().unwrap(), 1);
        assert_eq!(c2.winding().unwrap(), 2);
        let prod = c1.product(c2).unwrap();
        assert_eq!(prod.winding().unwrap(), 3);
        assert!(PhaseCurve::from_fn(|k| cr(k), 64).is_err()); // passes through 0
    }

    #[test]
    fn index_ind_examples() {
        assert_eq!(index_ind(&models::shift_walk(1, 1)).unwrap(), 1);
        let (w, _) = models::split_step(models::SplitStepParams { theta1: 0.4, theta2: 0.9 });
        assert_eq!(index_ind(&w).unwrap(), 0);
        let sum = models::shift_walk(1, 1).direct_sum(&models::shift_walk(1, -1));
        assert_eq!(index_ind(&sum).unwrap(), 0);
    }

    #[test]
    fn winding_oracle_examples() {
        // B̂(k) = e^{ik}.
        let b = models::shift_walk(1, 1);
        assert_eq!(winding_oracle_roots(&b).unwrap(), 1);
        let const_b = models::trivial_walk(&mat::sigma_x()).unwrap();
        assert_eq!(winding_oracle_roots(&const_b).unwrap(), 0);
        // e^{2ik}(2 + e^{ik}) as a d=1 Laurent poly: 2 z² + z³.
        let mixed = LaurentMatrix::from_blocks(
            1,
            &[(2, mat::eye(1).mapv(|z| z * cr(2.0))), (3, mat::eye(1))],
        )
        .unwrap();
        assert_eq!(winding_oracle_roots(&mixed).unwrap(), 2);
    }

    #[test]
    fn pfaffian_examples() {
        let a = mat::cmat(&[&[cr(0.0), c(1.5, 0.5)], &[c(-1.5, -0.5), cr(0.0)]]);
        assert!((pfaffian(&a).unwrap() - c(1.5, 0.5)).norm() < 1e-12);
        let b = mat::block_diag(
            &mat::rmat(&[&[0.0, 2.0], &[-2.0, 0.0]]),
            &mat::rmat(&[&[0.0, -3.0], &[3.0, 0.0]]),
        );
        assert!((pfaffian(&b).unwrap() - cr(-6.0)).norm() < 1e-10);
        assert!(pfaffian(&mat::eye(2)).is_err());
        assert!(pfaffian(&mat::czeros(3)).is_err());
    }

    #[test]
    fn pfaffian_squares_to_determinant() {
        // A structured 4×4 antisymmetric matrix.
        let a = mat::rmat(&[
            &[0.0, 1.0, 2.0, 3.0],
            &[-1.0, 0.0, -0.5, 0.7],
            &[-2.0, 0.5, 0.0, 1.1],
            &[-3.0, -0.7, -1.1, 0.0],
        ]);
        let pf = pfaffian(&a).unwrap();
        let d = mat::det(&a).unwrap();
        assert!((pf * pf - d).norm() < 1e-8 * d.norm().max(1.0));
    }

    #[test]
    fn pfaffian_transforms_with_determinant() {
        let a = mat::rmat(&[
            &[0.0, 1.0, 2.0, 3.0],
            &[-1.0, 0.0, -0.5, 0.7],
            &[-2.0, 0.5, 0.0, 1.1],
            &[-3.0, -0.7, -1.1, 0.0],
        ]);
        // Orthogonal with det -1: a permutation swapping two axes.
        let mut r = mat::czeros(4);
        r[(0, 1)] = cr(1.0);
        r[(1, 0)] = cr(1.0);
        r[(2, 2)] = cr(1.0);
        r[(3, 3)] = cr(1.0);
        let rar = r.dot(&a).dot(&r.t().to_owned());
        let lhs = pfaffian(&rar).unwrap();
        let rhs = -pfaffian(&a).unwrap();
        assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn flip_sign_basic_properties() {
        // Q = ½(𝟙 + iσ₂-like) is η-flipped for η = K.
        let eta = SymOp::antiunitary(mat::eye(2));
        let q = mat::cmat(&[&[cr(0.5), c(0.0, 0.5)], &[c(0.0, -0.5), cr(0.5)]]);
        let fp = FlippedProjection::new(q.clone(), eta.clone()).unwrap();
        assert_eq!(flip_sign(&fp, &fp).unwrap(), 1.0);
        // N = σ₃ is real orthogonal (η-commuting) with det -1.
        let n = mat::sigma_z();
        let q2 = n.dot(&q).dot(&mat::dagger(&n));
        let fp2 = FlippedProjection::new(q2, eta.clone()).unwrap();
        assert_eq!(flip_sign(&fp, &fp2).unwrap(), -1.0);
    }

    #[test]
    fn index_d_trivial_and_flat_coin() {
        let w = models::trivial_walk(&models::minus_i_sigma2()).unwrap();
        let rep = reps::d_rep(2);
        let details = index_d_details(&w, &rep).unwrap();
        assert_eq!(details.six.value, 0);
        assert_eq!(details.flip, 1.0);
    }

    #[test]
    fn index_chiral_flat_coins_are_trivial() {
        let (w, rep) = models::split_step(models::SplitStepParams {
            theta1: 0.0,
            theta2: std::f64::consts::FRAC_PI_2,
        });
        assert_eq!(index_chiral(&w, &rep).unwrap().value, 0);
        let coin = models::trivial_walk(&models::minus_i_sigma2()).unwrap();
        assert_eq!(index_chiral(&coin, &rep).unwrap().value, 0);
    }

    #[test]
    fn berry_constant_projection_vanishes() {
        let w = models::trivial_walk(&models::minus_i_sigma2()).unwrap();
        let b = berry_upper(&w, 256).unwrap();
        assert!(b.abs() < 1e-10);
    }

    #[test]
    fn berry_matches_chiral_index_on_flat_split_step() {
        // Split-step at a nontrivial parameter point; compare on the raw
        // walk (Berry phase only sees the upper projection, which the
        // flattening leaves untouched).
        let (w, rep) = models::split_step(models::SplitStepParams {
            theta1: std::f64::consts::PI / 8.0,
            theta2: -std::f64::consts::PI / 4.0,
        });
        let six = index_chiral(&w, &rep).unwrap().value;
        let berry = berry_upper(&w, 2048).unwrap();
        assert!(
            (berry - six as f64).abs() < 1e-4,
            "berry {berry} vs six {six}"
        );
    }

    #[test]
    fn closure_between_equal_endpoints_is_constant() {
        let j = std_j(4);
        let path = antisymmetric_closure(&j, &j, 8).unwrap();
        for a in &path {
            assert!(mat::max_diff(a, &j) < 1e-9);
        }
    }

    #[test]
    fn closure_between_opposite_endpoints() {
        // A0 = -i e^{iπ} σ₂ = iσ₂, A1 = -iσ₂.
        let a0 = mat::sigma_y().mapv(|z| c(0.0, 1.0) * z);
        let a1 = mat::sigma_y().mapv(|z| c(0.0, -1.0) * z);
        let path = antisymmetric_closure(&a0, &a1, 32).unwrap();
        for a in &path {
            assert!(mat::is_antisymmetric_mat(a, 1e-8));
            assert!(mat::is_unitary_mat(a, 1e-8));
        }
        assert!(mat::max_diff(&path[0], &a0) < 1e-9);
        assert!(mat::max_diff(&path[32], &a1) < 1e-9);
    }

    #[test]
    fn diii_generator_index_is_two() {
        let (w, rep) = models::diii_generator();
        assert_eq!(index_diii(&w, &rep).unwrap().value, 2);
        assert_eq!(index_diii_berry(&w, &rep).unwrap().value, 2);
    }

    #[test]
    fn diii_generator_sum_is_trivial() {
        let (w, rep) = models::diii_generator();
        let w2 = w.direct_sum(&w);
        let rep2 = rep.direct_sum(&rep).unwrap();
        assert_eq!(index_diii(&w2, &rep2).unwrap().value, 0);
    }

    #[test]
    fn diii_trivial_walk_is_zero() {
        // Flat DIII walk with constant B̂ = J (antisymmetric unitary).
        let mut u = mat::czeros(4);
        let j = std_j(2);
        for i in 0..2 {
            for jj in 0..2 {
                u[(i, jj + 2)] = j[(i, jj)];
                u[(i + 2, jj)] = -j[(jj, i)].conj();
            }
        }
        let w = models::trivial_walk(&u).unwrap();
        let rep = reps::diii_rep(4);
        assert!(crate::symmetry::is_admissible(&w, &rep, 1e-10).unwrap());
        assert_eq!(index_diii(&w, &rep).unwrap().value, 0);
    }

    #[test]
    fn dispatch_routes_by_type() {
        let (w, rep) = models::split_step(models::SplitStepParams { theta1: 0.3, theta2: 0.7 });
        assert_eq!(index(&w, &rep).unwrap().group, IndexGroup::Z);
        let coin = models::trivial_walk(&models::minus_i_sigma2()).unwrap();
        assert_eq!(index(&coin, &reps::d_rep(2)).unwrap().group, IndexGroup::Z2);
    }
}
