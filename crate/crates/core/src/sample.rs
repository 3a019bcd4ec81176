//! Seeded random generators of admissible walks, invertible symbols and
//! η-flipped projections, used by property tests and the acceptance suite.

use ndarray::Array2;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mat::{self, CMat};
use crate::symmetry::{self, reps, SymOp, SymmetryRep, SymmetryType};
use crate::walk::LaurentMatrix;

/// Minimum spectral gap (distance of the eigenvalues from ±1) required of a
/// sampled walk before it is returned.
const MIN_GAP: f64 = 0.1;

fn random_hermitian(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> CMat {
    let a = Array2::from_shape_fn((d, d), |_| {
        mat::c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * mat::cr(scale)
    });
    (&a + &mat::dagger(&a)).mapv(|z| z * mat::cr(0.5))
}

/// Random coin satisfying `η_u · conj(U) · η_u† = U`: a Hermitian generator
/// is projected onto `η_u H̄ η_u† = -H` and exponentiated.
fn random_eta_coin(rng: &mut ChaCha8Rng, eta: &SymOp, scale: f64) -> Result<CMat> {
    let h = random_hermitian(rng, eta.dim(), scale);
    let flipped = eta.matrix.dot(&mat::conj_mat(&h)).dot(&mat::dagger(&eta.matrix));
    let proj = (&h - &flipped).mapv(|z| z * mat::cr(0.5));
    mat::exp_i_hermitian(&proj)
}

fn random_unitary(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> Result<CMat> {
    mat::exp_i_hermitian(&random_hermitian(rng, d, scale))
}

/// Partial shift `diag over components`: component `i` is translated by
/// `steps[i]` cells.
fn partial_shift(steps: &[i64]) -> LaurentMatrix {
    let d = steps.len();
    let mut blocks: Vec<(i64, CMat)> = Vec::new();
    for (i, &s) in steps.iter().enumerate() {
        let mut b = mat::czeros(d);
        b[(i, i)] = mat::cr(1.0);
        match blocks.iter_mut().find(|(y, _)| *y == s) {
            Some((_, acc)) => *acc = acc.clone() + b,
            None => blocks.push((s, b)),
        }
    }
    LaurentMatrix::from_blocks(d, &blocks).unwrap()
}

/// The γ-mirror `F ↦ (γ F γ†)^*`; a product `F · C · mirror(F)` inherits
/// the γ-relation from `C`, and the mirror preserves η-admissibility.
fn gamma_mirror(f: &LaurentMatrix, gamma: &SymOp) -> LaurentMatrix {
    let blocks: Vec<(i64, CMat)> = f
        .blocks()
        .map(|(y, b)| {
            let g = gamma.matrix.dot(b).dot(&mat::dagger(&gamma.matrix));
            (-y, mat::dagger(&g))
        })
        .collect();
    LaurentMatrix::from_blocks(f.dim(), &blocks).unwrap()
}

/// Per-type shift pattern that is η-admissible in the standard
/// representations (real coefficients in the η-basis, compatible with the
/// quaternionic block structure for CII/DIII).
fn shift_pattern(stype: SymmetryType, d: usize) -> Vec<i64> {
    match stype {
        SymmetryType::D | SymmetryType::AIII | SymmetryType::BDI => {
            (0..d).map(|i| if i % 2 == 0 { 1 } else { 0 }).collect()
        }
        // γ = diag(𝟙, -𝟙): shift the + block as a whole (η pairs within it).
        SymmetryType::CII => (0..d).map(|i| if i < d / 2 { 1 } else { 0 }).collect(),
        // η = σ₁⊗𝟙 pairs component i with i + d/2: shift both or neither.
        SymmetryType::DIII => (0..d).map(|i| if i % 2 == 0 { 1 } else { 0 }).collect(),
    }
}

/// Nontrivial admissible core walks per type, used to vary the sampled
/// index class.
fn core_walk(stype: SymmetryType, d: usize, variant: usize) -> (LaurentMatrix, SymmetryRep) {
    match stype {
        SymmetryType::D => {
            let rep = reps::d_rep(d);
            (crate::models::shift_walk(d, 0), rep)
        }
        SymmetryType::AIII | SymmetryType::BDI => {
            let rep = if stype == SymmetryType::AIII {
                reps::aiii_rep(d)
            } else {
                reps::bdi_rep(d)
            };
            (crate::models::shift_walk(d, 0), rep)
        }
        SymmetryType::CII => {
            let rep = reps::cii_rep(d);
            if variant % 2 == 0 {
                (crate::models::shift_walk(d, 0), rep)
            } else {
                // Flat chiral walk with B̂(k) = e^{ik}𝟙: index 2 per 4 dims.
                let h = d / 2;
                let mut w1 = mat::czeros(d);
                let mut wm1 = mat::czeros(d);
                for i in 0..h {
                    w1[(i, h + i)] = mat::cr(1.0);
                    wm1[(h + i, i)] = mat::cr(-1.0);
                }
                let w = LaurentMatrix::from_blocks(d, &[(1, w1), (-1, wm1)]).unwrap();
                (w, rep)
            }
        }
        SymmetryType::DIII => {
            let rep = reps::diii_rep(d);
            if variant % 2 == 0 || d != 4 {
                // Constant antisymmetric chiral block B̂ = J.
                let h = d / 2;
                let mut j = mat::czeros(h);
                for b in 0..h / 2 {
                    j[(2 * b, 2 * b + 1)] = mat::cr(1.0);
                    j[(2 * b + 1, 2 * b)] = mat::cr(-1.0);
                }
                let mut u = mat::czeros(d);
                for i in 0..h {
                    for jj in 0..h {
                        u[(i, h + jj)] = j[(i, jj)];
                        u[(h + i, jj)] = -j[(jj, i)].conj();
                    }
                }
                (crate::models::trivial_walk(&u).unwrap(), rep)
            } else {
                crate::models::diii_generator()
            }
        }
    }
}

/// A random gapped admissible walk of the given type and cell dimension,
/// together with its (standard) representation. Deterministic in the seed.
///
/// Construction: a palindromic product `F₁…F_m · core · F_m^γ…F₁^γ` where
/// each factor is an η-admissible coin followed by an optional partial
/// shift and `F^γ = (γFγ†)^*`; the γ-relation of the core then propagates
/// to the whole product, and η-admissibility holds factor by factor. Type D
/// (no γ) is a plain product of η-admissible factors. Resamples until the
/// spectral gap at ±1 exceeds 0.1.
pub fn random_walk(
    stype: SymmetryType,
    d: usize,
    depth: usize,
    seed: u64,
) -> Result<(LaurentMatrix, SymmetryRep)> {
    match stype {
        SymmetryType::CII | SymmetryType::DIII => {
            if d % 4 != 0 {
                return Err(Error::Invalid("CII/DIII need d divisible by 4".into()));
            }
        }
        _ => {
            if d % 2 != 0 {
                return Err(Error::Invalid("need even cell dimension".into()));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..64 {
        let variant = rng.gen_range(0..4usize);
        let (core, rep) = core_walk(stype, d, variant);
        let mut w = core;
        for _ in 0..depth {
            let coin = match (&rep.eta, &rep.gamma) {
                (Some(eta), _) => random_eta_coin(&mut rng, eta, 0.8)?,
                (None, Some(_)) => random_unitary(&mut rng, d, 0.8)?,
                _ => unreachable!(),
            };
            let mut f = crate::models::trivial_walk(&coin)?;
            let dir = rng.gen_range(0..3i64) - 1;
            if dir != 0 {
                let steps: Vec<i64> = shift_pattern(stype, d).iter().map(|s| s * dir).collect();
                f = f.multiply(&partial_shift(&steps))?;
            }
            match &rep.gamma {
                Some(g) => {
                    let m = gamma_mirror(&f, g);
                    w = f.multiply(&w)?.multiply(&m)?;
                }
                None => {
                    w = f.multiply(&w)?;
                }
            }
        }
        debug_assert!(w.is_unitary(1e-8));
        if !symmetry::is_admissible(&w, &rep, 1e-8)? {
            return Err(Error::Inadmissible);
        }
        if symmetry::gap_min(&w, 64)? > MIN_GAP {
            return Ok((w, rep));
        }
        let _ = attempt;
    }
    Err(Error::Gapless { gap: MIN_GAP })
}

/// A random Laurent matrix whose symbol is invertible on the whole circle
/// (`min_k |det B̂(k)| > 1e-2` checked on a fine grid). Deterministic in the
/// seed.
pub fn random_invertible_symbol(d: usize, radius: i64, seed: u64) -> Result<LaurentMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    assert!(radius >= 0);
    for _ in 0..256 {
        let mut blocks: Vec<(i64, CMat)> = Vec::new();
        for y in -radius..=radius {
            let scale = if y == 0 { 1.0 } else { 0.45 / radius.max(1) as f64 };
            let b = Array2::from_shape_fn((d, d), |_| {
                mat::c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * mat::cr(scale)
            });
            blocks.push((y, b));
        }
        // Push the diagonal away from singularity.
        for (y, b) in blocks.iter_mut() {
            if *y == 0 {
                *b = b.clone() + mat::eye(d).mapv(|z| z * mat::cr(1.5));
            }
        }
        let cand = LaurentMatrix::from_blocks(d, &blocks)?;
        let mut ok = true;
        for j in 0..512 {
            let k = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * j as f64 / 512.0;
            if mat::det(&cand.evaluate(k))?.norm() <= 1e-2 {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(cand);
        }
    }
    Err(Error::Invalid("could not sample an invertible symbol".into()))
}

/// A random η-flipped projection (`ηQη⁻¹ = 𝟙 - Q`) for `η = K` in dimension
/// `d` (even): a fixed flipped projection `½(𝟙 - iJ)` rotated by a random
/// real orthogonal matrix. Deterministic in the seed.
pub fn random_flipped_projection(d: usize, seed: u64) -> Result<CMat> {
    if d % 2 != 0 {
        return Err(Error::OddDimension(d));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q0 = mat::eye(d).mapv(|z| z * mat::cr(0.5));
    for b in 0..d / 2 {
        q0[(2 * b, 2 * b + 1)] = mat::c(0.0, -0.5);
        q0[(2 * b + 1, 2 * b)] = mat::c(0.0, 0.5);
    }
    let o = random_real_orthogonal(&mut rng, d);
    Ok(o.dot(&q0).dot(&o.t().to_owned()))
}

/// Random real orthogonal matrix `exp(G)` with `G` real antisymmetric;
/// these commute with `η = K`.
pub fn random_real_orthogonal(rng: &mut ChaCha8Rng, d: usize) -> CMat {
    let g = Array2::from_shape_fn((d, d), |_| rng.gen_range(-1.0_f64..1.0));
    let ga = (&g - &g.t()).mapv(|x| x * 0.5);
    // exp(G) = exp(i·(-iG)) with -iG Hermitian.
    let h = ga.mapv(|x| mat::c(0.0, -x));
    mat::exp_i_hermitian(&h).expect("orthogonal exponential")
}

/// Convenience: a fresh ChaCha stream for tests.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_walks_are_admissible_and_gapped() {
        for (stype, d) in [
            (SymmetryType::D, 2),
            (SymmetryType::AIII, 2),
            (SymmetryType::BDI, 2),
            (SymmetryType::CII, 4),
            (SymmetryType::DIII, 4),
        ] {
            let (w, rep) = random_walk(stype, d, 2, 7).unwrap();
            assert!(w.is_unitary(1e-8), "{stype:?} not unitary");
            assert!(symmetry::is_admissible(&w, &rep, 1e-8).unwrap(), "{stype:?} inadmissible");
            assert!(symmetry::gap_min(&w, 64).unwrap() > MIN_GAP);
        }
    }

    #[test]
    fn sampling_is_deterministic_in_the_seed() {
        let (w1, _) = random_walk(SymmetryType::BDI, 2, 3, 42).unwrap();
        let (w2, _) = random_walk(SymmetryType::BDI, 2, 3, 42).unwrap();
        assert!(w1.approx_eq(&w2, 0.0));
        let (w3, _) = random_walk(SymmetryType::BDI, 2, 3, 43).unwrap();
        assert!(!w1.approx_eq(&w3, 1e-12));
    }

    #[test]
    fn invertible_symbols_avoid_the_origin() {
        let b = random_invertible_symbol(3, 2, 5).unwrap();
        for j in 0..64 {
            let k = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * j as f64 / 64.0;
            assert!(mat::det(&b.evaluate(k)).unwrap().norm() > 1e-2);
        }
    }

    #[test]
    fn flipped_projections_satisfy_the_relation() {
        let q = random_flipped_projection(4, 11).unwrap();
        assert!(mat::is_hermitian_mat(&q, 1e-10));
        assert!(mat::max_diff(&q.dot(&q), &q) < 1e-10);
        let flipped = mat::conj_mat(&q) + &q;
        assert!(mat::max_diff(&flipped, &mat::eye(4)) < 1e-10);
    }
}
