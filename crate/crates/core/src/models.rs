//! Concrete walk families: the split-step walk, its splitting-coin
//! decouplings, the bridge path between the two flat coins, the nontrivial
//! DIII generator, shifts and trivial (cellwise) walks.


use crate::boundary::FiniteWalk;
use crate::error::{Error, Result};
use crate::mat::{self, CMat};
use crate::symmetry::{reps, SymmetryRep};
use crate::walk::LaurentMatrix;

/// Real rotation `R(θ) = [[cos θ, -sin θ], [sin θ, cos θ]]`.
pub fn rotation(theta: f64) -> CMat {
    mat::rmat(&[
        &[theta.cos(), -theta.sin()],
        &[theta.sin(), theta.cos()],
    ])
}

/// Parameters of the split-step walk `W = B S↓ A S↑ B` with `B = R(θ₁/2)`
/// and `A = R(θ₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitStepParams {
    pub theta1: f64,
    pub theta2: f64,
}

/// The split-step walk as a `d = 2` Laurent polynomial with offsets in
/// `{-1, 0, 1}`, together with its BDI representation (`η = K`, `γ = σ₁`).
///
/// Shift conventions under the `e^{ikx}` Fourier transform: `S↑` has symbol
/// `diag(e^{ik}, 1)` and `S↓` has symbol `diag(1, e^{-ik})`, so
/// `Ŵ(k) = R(θ₁/2) · diag(1, e^{-ik}) · R(θ₂) · diag(e^{ik}, 1) · R(θ₁/2)`.
pub fn split_step(p: SplitStepParams) -> (LaurentMatrix, SymmetryRep) {
    let b = rotation(p.theta1 / 2.0);
    let a = rotation(p.theta2);
    // S↑ = E₀ + E₊ e^{ik}, S↓ = D₀ + D₋ e^{-ik}.
    let e_plus = mat::rmat(&[&[1.0, 0.0], &[0.0, 0.0]]);
    let e_zero = mat::rmat(&[&[0.0, 0.0], &[0.0, 1.0]]);
    let d_zero = e_plus.clone();
    let d_minus = e_zero.clone();
    let w1 = b.dot(&d_zero).dot(&a).dot(&e_plus).dot(&b);
    let w0 = b.dot(&(d_zero.dot(&a).dot(&e_zero) + d_minus.dot(&a).dot(&e_plus))).dot(&b);
    let wm1 = b.dot(&d_minus).dot(&a).dot(&e_zero).dot(&b);
    let w = LaurentMatrix::from_blocks(2, &[(-1, wm1), (0, w0), (1, w1)])
        .expect("split-step blocks are 2x2");
    (w, reps::bdi_rep(2))
}

/// Check that a 2×2 coin is a valid BDI splitting coin: real orthogonal,
/// `σ₁ c σ₁ = cᵀ`, and antidiagonal (so that transitions across the cut
/// cell are blocked). The admissible set is `{±σ₁, ±iσ₂}`; note
/// `R(±π/2) = ∓iσ₂`.
fn check_splitting_coin(coin: &CMat) -> Result<()> {
    if coin.nrows() != 2 || coin.ncols() != 2 {
        return Err(Error::InadmissibleCoin("coin must be 2x2".into()));
    }
    if !mat::is_unitary_mat(coin, 1e-10) {
        return Err(Error::InadmissibleCoin("coin is not unitary".into()));
    }
    if coin.iter().any(|z| z.im.abs() > 1e-10) {
        return Err(Error::InadmissibleCoin("coin must be real (BDI admissible)".into()));
    }
    let sx = mat::sigma_x();
    if mat::max_diff(&sx.dot(coin).dot(&sx), &coin.t().to_owned()) > 1e-10 {
        return Err(Error::InadmissibleCoin("coin violates the chiral relation".into()));
    }
    if coin[(0, 0)].norm() > 1e-10 || coin[(1, 1)].norm() > 1e-10 {
        return Err(Error::InadmissibleCoin(
            "coin does not block transitions across the cut (diagonal entries nonzero)".into(),
        ));
    }
    Ok(())
}

/// Finite split-step walk on a ring of `n_cells` cells with the coin `A`
/// replaced by a splitting coin at cell 0, which decouples the ring into a
/// single chain with both boundaries at the cut.
pub fn split_step_decoupled(
    p: SplitStepParams,
    coin: &CMat,
    n_cells: usize,
) -> Result<FiniteWalk> {
    assert!(n_cells >= 8);
    check_splitting_coin(coin)?;
    let n = n_cells;
    let dim = 2 * n;
    let idx = |cell: usize, spin: usize| 2 * cell + spin;
    let mut b_tot = mat::czeros(dim);
    let mut a_tot = mat::czeros(dim);
    let b = rotation(p.theta1 / 2.0);
    let a = rotation(p.theta2);
    for x in 0..n {
        let ax = if x == 0 { coin } else { &a };
        for i in 0..2 {
            for j in 0..2 {
                b_tot[(idx(x, i), idx(x, j))] = b[(i, j)];
                a_tot[(idx(x, i), idx(x, j))] = ax[(i, j)];
            }
        }
    }
    // S↑ moves the spin-up component one cell to the right; S↓ moves the
    // spin-down component one cell to the left (periodically).
    let mut s_up = mat::czeros(dim);
    let mut s_down = mat::czeros(dim);
    for x in 0..n {
        s_up[(idx((x + 1) % n, 0), idx(x, 0))] = mat::cr(1.0);
        s_up[(idx(x, 1), idx(x, 1))] = mat::cr(1.0);
        s_down[(idx((x + n - 1) % n, 1), idx(x, 1))] = mat::cr(1.0);
        s_down[(idx(x, 0), idx(x, 0))] = mat::cr(1.0);
    }
    let u = b_tot.dot(&s_down).dot(&a_tot).dot(&s_up).dot(&b_tot);
    if !mat::is_unitary_mat(&u, 1e-10) {
        return Err(Error::NotUnitary);
    }
    Ok(FiniteWalk {
        n_cells: n,
        d: 2,
        u,
        cut_positions: vec![0],
    })
}

/// The explicit 4×4 bridge matrix: an antisymmetric orthogonal cellwise walk
/// interpolating between the regrouped flat coins at `t = 0` and `t = 1`.
pub fn bridge_walk(t: f64) -> CMat {
    assert!((0.0..=1.0).contains(&t));
    let c = (std::f64::consts::PI * t).cos();
    let s = (std::f64::consts::PI * t).sin();
    mat::rmat(&[
        &[0.0, -c, -s, 0.0],
        &[c, 0.0, 0.0, s],
        &[s, 0.0, 0.0, -c],
        &[0.0, -s, c, 0.0],
    ])
}

/// The nontrivial DIII generator: a flat-band `d = 4` walk with offsets
/// `{-1, 1}` whose chiral block is `B̂(k) = [[0, -e^{-ik}], [e^{ik}, 0]]`,
/// returned with the standard DIII representation.
pub fn diii_generator() -> (LaurentMatrix, SymmetryRep) {
    // In the chiral eigenbasis (which for the standard DIII rep is the
    // canonical basis) the walk is [[0, B̂], [-B̂†, 0]].
    let b_m1 = mat::rmat(&[&[0.0, -1.0], &[0.0, 0.0]]); // coefficient of e^{-ik}
    let b_p1 = mat::rmat(&[&[0.0, 0.0], &[1.0, 0.0]]); // coefficient of e^{ik}
    // -B̂† has coefficients C(x) = -B(-x)†.
    let c_m1 = mat::dagger(&b_p1).mapv(|z| -z);
    let c_p1 = mat::dagger(&b_m1).mapv(|z| -z);
    let assemble = |b: &CMat, c: &CMat| -> CMat {
        let mut m = mat::czeros(4);
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j + 2)] = b[(i, j)];
                m[(i + 2, j)] = c[(i, j)];
            }
        }
        m
    };
    let w = LaurentMatrix::from_blocks(
        4,
        &[(-1, assemble(&b_m1, &c_m1)), (1, assemble(&b_p1, &c_p1))],
    )
    .expect("generator blocks are 4x4");
    (w, reps::diii_rep(4))
}

/// Pure shift: single coefficient `𝟙_d` at offset `n`.
pub fn shift_walk(d: usize, n: i64) -> LaurentMatrix {
    LaurentMatrix::from_blocks(d, &[(n, mat::eye(d))]).expect("identity block")
}

/// Trivial (cellwise) walk with unitary coin `u0`.
pub fn trivial_walk(u0: &CMat) -> Result<LaurentMatrix> {
    if !mat::is_unitary_mat(u0, 1e-10) {
        return Err(Error::NotUnitary);
    }
    LaurentMatrix::from_blocks(u0.nrows(), &[(0, u0.clone())])
}

/// `-iσ₂ = R(π/2)`, the gentle splitting coin.
pub fn minus_i_sigma2() -> CMat {
    mat::rmat(&[&[0.0, -1.0], &[1.0, 0.0]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral;
    use crate::symmetry::{gap_min, is_admissible};
    use num_complex::Complex64;

    #[test]
    fn split_step_flat_points() {
        let (w0, _) = split_step(SplitStepParams { theta1: 0.0, theta2: std::f64::consts::FRAC_PI_2 });
        let minus_i_sy = mat::rmat(&[&[0.0, -1.0], &[1.0, 0.0]]);
        assert!(w0.approx_eq(&trivial_walk(&minus_i_sy).unwrap(), 1e-12));
        let (w1, _) = split_step(SplitStepParams { theta1: 0.0, theta2: -std::f64::consts::FRAC_PI_2 });
        let plus_i_sy = mat::rmat(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        assert!(w1.approx_eq(&trivial_walk(&plus_i_sy).unwrap(), 1e-12));
    }

    #[test]
    fn split_step_symbol_matches_factor_product() {
        let p = SplitStepParams { theta1: std::f64::consts::PI / 8.0, theta2: -std::f64::consts::PI / 4.0 };
        let (w, _) = split_step(p);
        for j in 0..17 {
            let k = -std::f64::consts::PI + j as f64 * (2.0 * std::f64::consts::PI / 16.0);
            let sdown = mat::cmat(&[
                &[mat::cr(1.0), mat::cr(0.0)],
                &[mat::cr(0.0), Complex64::from_polar(1.0, -k)],
            ]);
            let sup = mat::cmat(&[
                &[Complex64::from_polar(1.0, k), mat::cr(0.0)],
                &[mat::cr(0.0), mat::cr(1.0)],
            ]);
            let b = rotation(p.theta1 / 2.0);
            let expect = b.dot(&sdown).dot(&rotation(p.theta2)).dot(&sup).dot(&b);
            assert!(mat::max_diff(&w.evaluate(k), &expect) < 1e-12);
        }
        let u0 = w.evaluate(0.0);
        assert!(mat::is_unitary_mat(&u0, 1e-12));
        assert!((mat::det(&u0).unwrap() - mat::cr(1.0)).norm() < 1e-12);
    }

    #[test]
    fn split_step_unitary_admissible_gapped_on_grid() {
        for i in 0..6 {
            for j in 0..6 {
                let p = SplitStepParams {
                    theta1: -3.0 + i as f64,
                    theta2: -3.0 + j as f64 + 0.21,
                };
                let (w, rep) = split_step(p);
                assert!(w.is_unitary(1e-11), "not unitary at {p:?}");
                assert!(is_admissible(&w, &rep, 1e-10).unwrap(), "inadmissible at {p:?}");
            }
        }
        let (w, _) = split_step(SplitStepParams { theta1: std::f64::consts::PI / 8.0, theta2: -std::f64::consts::PI / 4.0 });
        assert!(gap_min(&w, 64).unwrap() > 0.3);
    }

    #[test]
    fn regroup_symbol_identity() {
        // Ŵ_r(k) = H(k/2) diag(Ŵ(k/2), Ŵ(k/2+π)) H(k/2)†,
        // H(k) = (1/√2) [[𝟙, 𝟙], [e^{-ik}𝟙, -e^{-ik}𝟙]].
        let p = SplitStepParams { theta1: 0.9, theta2: -0.4 };
        let (w, _) = split_step(p);
        let wr = w.regroup();
        for j in 0..9 {
            let k = -std::f64::consts::PI + j as f64 * (std::f64::consts::PI / 4.0);
            let h = k / 2.0;
            let ph = Complex64::from_polar(1.0, -h) / mat::cr(2.0_f64.sqrt());
            let rt = mat::cr(1.0 / 2.0_f64.sqrt());
            let mut hmat = mat::czeros(4);
            for i in 0..2 {
                hmat[(i, i)] = rt;
                hmat[(i, i + 2)] = rt;
                hmat[(i + 2, i)] = ph;
                hmat[(i + 2, i + 2)] = -ph;
            }
            let inner = mat::block_diag(
                &w.evaluate(h),
                &w.evaluate(h + std::f64::consts::PI),
            );
            let expect = hmat.dot(&inner).dot(&mat::dagger(&hmat));
            assert!(mat::max_diff(&wr.evaluate(k), &expect) < 1e-8);
        }
    }

    #[test]
    fn bridge_endpoints_match_regrouped_trivial_walks() {
        let w0 = trivial_walk(&mat::rmat(&[&[0.0, -1.0], &[1.0, 0.0]])).unwrap().regroup();
        let w1 = trivial_walk(&mat::rmat(&[&[0.0, 1.0], &[-1.0, 0.0]])).unwrap().regroup();
        assert!(mat::max_diff(&bridge_walk(0.0), &w0.coeff(0)) < 1e-12);
        assert!(mat::max_diff(&bridge_walk(1.0), &w1.coeff(0)) < 1e-12);
    }

    #[test]
    fn bridge_is_antisymmetric_orthogonal_admissible() {
        let rep = reps::bdi_rep(2).regroup();
        for j in 0..21 {
            let t = j as f64 / 20.0;
            let b = bridge_walk(t);
            assert!(mat::is_antisymmetric_mat(&b, 1e-12));
            assert!(mat::is_unitary_mat(&b, 1e-12));
            // W² = -𝟙, so the spectrum is {±i}.
            assert!(mat::max_abs(&(b.dot(&b) + mat::eye(4))) < 1e-12);
            let w = trivial_walk(&b).unwrap();
            assert!(is_admissible(&w, &rep, 1e-10).unwrap());
        }
    }

    #[test]
    fn diii_generator_block_and_flatness() {
        let (w, rep) = diii_generator();
        assert!(w.is_unitary(1e-12));
        assert!(is_admissible(&w, &rep, 1e-10).unwrap());
        let frame = spectral::chiral_frame(&rep).unwrap();
        for j in 0..9 {
            let k = -std::f64::consts::PI + j as f64 * (std::f64::consts::PI / 4.0);
            let u = w.evaluate(k);
            assert!(mat::max_abs(&(u.dot(&u) + mat::eye(4))) < 1e-12);
            let b = spectral::chiral_block_of(&u, &frame);
            let expect = mat::cmat(&[
                &[mat::cr(0.0), -Complex64::from_polar(1.0, -k)],
                &[Complex64::from_polar(1.0, k), mat::cr(0.0)],
            ]);
            assert!(mat::max_diff(&b, &expect) < 1e-10);
        }
    }

    #[test]
    fn splitting_coin_validation() {
        assert!(check_splitting_coin(&minus_i_sigma2()).is_ok());
        assert!(check_splitting_coin(&mat::sigma_x()).is_ok());
        assert!(check_splitting_coin(&mat::sigma_x().mapv(|z| -z)).is_ok());
        assert!(check_splitting_coin(&mat::rmat(&[&[1.0, 0.0], &[0.0, 2.0]])).is_err());
        assert!(check_splitting_coin(&mat::eye(2)).is_err());
    }

    #[test]
    fn decoupled_walk_is_unitary() {
        let p = SplitStepParams { theta1: std::f64::consts::PI / 8.0, theta2: -std::f64::consts::PI / 4.0 };
        let f = split_step_decoupled(p, &minus_i_sigma2(), 32).unwrap();
        assert!(mat::is_unitary_mat(&f.u, 1e-10));
    }

    #[test]
    fn shift_and_trivial_constructors() {
        let s = shift_walk(1, 1);
        assert_eq!((s.lo(), s.hi()), (1, 1));
        assert!(trivial_walk(&mat::rmat(&[&[1.0, 0.0], &[0.0, 2.0]])).is_err());
    }
}
