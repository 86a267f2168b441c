//! Exact supersymmetric-sector checks on the two-level para-Grassmann space
//! tensored with a truncated boson space.
//!
//! All matrices live over Q(i, sqrt(n)) so the boson ladder entries sqrt(n)
//! stay exact; identities are verified identically zero away from the
//! truncation boundary.

use crate::exact::Matrix;
use crate::qscalar::quad::QuadGauss;
use crate::report::Report;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Biorthonormal frame data over the quadratic-radical field.
struct QuadFrame {
    psi: Matrix<QuadGauss>,
    dual: Matrix<QuadGauss>,
    eta: Matrix<QuadGauss>,
    eta_inv: Matrix<QuadGauss>,
}

impl QuadFrame {
    fn build(psi: Matrix<QuadGauss>) -> Option<Self> {
        let dual = psi.try_inverse()?;
        let phi = dual.conj_t();
        let eta = phi.matmul(&phi.conj_t());
        let eta_inv = psi.matmul(&psi.conj_t());
        Some(QuadFrame { psi, dual, eta, eta_inv })
    }

    fn identity(n: usize) -> Self {
        Self::build(Matrix::identity(n, &QuadGauss::one())).unwrap()
    }
}

/// Unit-triangular rational frame with small seeded numerators.
pub fn random_quad_psi(n: usize, seed: u64) -> Matrix<QuadGauss> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Matrix::from_fn(n, n, |r, c| {
        if r == c {
            QuadGauss::one()
        } else if r < c {
            QuadGauss::from_ratio(rng.gen_range(-2..=2), rng.gen_range(1..=3))
        } else {
            QuadGauss::zero()
        }
    })
}

pub struct SusyConfig {
    pub m_trunc: usize,
    pub boson_psi: Option<Matrix<QuadGauss>>,
    pub pg_psi: Option<Matrix<QuadGauss>>,
}

impl SusyConfig {
    pub fn identity(m_trunc: usize) -> Self {
        SusyConfig { m_trunc, boson_psi: None, pg_psi: None }
    }
}

fn boson_lowering_label(dim: usize) -> Matrix<QuadGauss> {
    Matrix::from_fn(dim, dim, |r, c| {
        if c >= 1 && r == c - 1 {
            QuadGauss::sqrt_nat(c as u64)
        } else {
            QuadGauss::zero()
        }
    })
}

/// Two-level lowering operator in label space: entries 0/1 since \[1\] = 1.
fn pg_lowering_label() -> Matrix<QuadGauss> {
    Matrix::from_fn(2, 2, |r, c| {
        if r == 0 && c == 1 {
            QuadGauss::one()
        } else {
            QuadGauss::zero()
        }
    })
}

/// q^-N on two levels at q = i: diag(1, -i).
fn pg_qn_neg_label() -> Matrix<QuadGauss> {
    Matrix::from_fn(2, 2, |r, c| {
        if r != c {
            QuadGauss::zero()
        } else if r == 0 {
            QuadGauss::one()
        } else {
            &QuadGauss::zero() - &QuadGauss::i()
        }
    })
}

/// Zero out every row and column touching the top boson level.
fn project_off_boundary(m: &Matrix<QuadGauss>, boson_dim: usize, pg_dim: usize) -> Matrix<QuadGauss> {
    let cut = (boson_dim - 1) * pg_dim;
    Matrix::from_fn(m.rows(), m.cols(), |r, c| {
        if r >= cut || c >= cut {
            QuadGauss::zero()
        } else {
            m.at(r, c).clone()
        }
    })
}

/// Verify the supersymmetric-sector identities for the two-level system.
pub fn susy_check(cfg: &SusyConfig) -> Report {
    let mut report = Report::new("supersymmetric sector (exact, two-level)");
    let bdim = cfg.m_trunc + 1;
    let bframe = match &cfg.boson_psi {
        Some(psi) => QuadFrame::build(psi.clone()).expect("boson frame invertible"),
        None => QuadFrame::identity(bdim),
    };
    let pgframe = match &cfg.pg_psi {
        Some(psi) => QuadFrame::build(psi.clone()).expect("pg frame invertible"),
        None => QuadFrame::identity(2),
    };

    // concrete operators: X_F = Psi X_label Psi^-1
    let conj_frame = |f: &QuadFrame, label: &Matrix<QuadGauss>| f.psi.matmul(label).matmul(&f.dual);
    let a_low = conj_frame(&bframe, &boson_lowering_label(bdim));
    let a_sharp = bframe.eta_inv.matmul(&a_low.conj_t()).matmul(&bframe.eta);
    let b = conj_frame(&pgframe, &pg_lowering_label());
    let b_sharp = pgframe.eta_inv.matmul(&b.conj_t()).matmul(&pgframe.eta);

    // pseudo-fermion relation b b# + b# b = 1
    let id2 = Matrix::identity(2, &QuadGauss::one());
    let pf = b.matmul(&b_sharp).add(&b_sharp.matmul(&b)).sub(&id2);
    report.push("b b# + b# b = 1", pf.is_zero(), pf.max_abs());

    // b# equals b_bar q^-N (two-level b_bar is the transpose ladder)
    let b_bar = conj_frame(&pgframe, &pg_lowering_label().transpose());
    let qn = conj_frame(&pgframe, &pg_qn_neg_label());
    let bs = b_sharp.sub(&b_bar.matmul(&qn));
    report.push("b# = b_bar q^-N", bs.is_zero(), bs.max_abs());

    // supercharges and Hamiltonian
    let idb = Matrix::identity(bdim, &QuadGauss::one());
    let q_op = a_sharp.kron(&b);
    let q_sharp = a_low.kron(&b_sharp);
    let h1 = a_sharp.matmul(&a_low).kron(&id2).add(&idb.kron(&b_sharp.matmul(&b)));

    // Q# is the (eta' (x) eta)-pseudo-adjoint of Q
    let eta_t = bframe.eta.kron(&pgframe.eta);
    let eta_t_inv = bframe.eta_inv.kron(&pgframe.eta_inv);
    let qs_check = q_sharp.sub(&eta_t_inv.matmul(&q_op.conj_t()).matmul(&eta_t));
    report.push("Q# = (eta' x eta)^-1 Q^dag (eta' x eta)", qs_check.is_zero(), qs_check.max_abs());

    // H1 = Q Q# + Q# Q away from the truncation boundary
    let anticom = q_op.matmul(&q_sharp).add(&q_sharp.matmul(&q_op));
    let h_res = project_off_boundary(&anticom.sub(&h1), bdim, 2);
    report.push("H1 = Q Q# + Q# Q (off boundary)", h_res.is_zero(), h_res.max_abs());

    // [Q, H1] = 0 away from the truncation boundary
    let comm = q_op.matmul(&h1).sub(&h1.matmul(&q_op));
    let c_res = project_off_boundary(&comm, bdim, 2);
    report.push("[Q, H1] = 0 (off boundary)", c_res.is_zero(), c_res.max_abs());

    // H1 is (eta' x eta)-pseudo-Hermitian
    let ph = eta_t_inv.matmul(&h1.conj_t()).matmul(&eta_t).sub(&h1);
    report.push("H1 pseudo-hermitian wrt eta' x eta", ph.is_zero(), ph.max_abs());

    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_metrics_all_pass() {
        let report = susy_check(&SusyConfig::identity(10));
        assert!(report.all_passed(), "{:?}", report.failed_relations());
    }

    #[test]
    fn nonidentity_metrics_all_pass() {
        let cfg = SusyConfig {
            m_trunc: 6,
            boson_psi: Some(random_quad_psi(7, 11)),
            pg_psi: Some(random_quad_psi(2, 5)),
        };
        let report = susy_check(&cfg);
        assert!(report.all_passed(), "{:?}", report.failed_relations());
    }

    #[test]
    fn projection_handles_any_truncation() {
        for m in [1, 2, 4] {
            let report = susy_check(&SusyConfig::identity(m));
            assert!(report.all_passed(), "m={m}: {:?}", report.failed_relations());
        }
    }

    #[test]
    fn anticommutator_defect_sits_on_the_boundary() {
        // without the projection, Q Q# + Q# Q misses H1 exactly at the top
        // boson level, where a a# loses its n+1 diagonal entry
        let bdim = 5;
        let a = boson_lowering_label(bdim);
        let raise = a.transpose();
        let prod = a.matmul(&raise);
        for n in 0..bdim - 1 {
            assert_eq!(*prod.at(n, n), QuadGauss::from_int(n as i64 + 1));
        }
        assert!(prod.at(bdim - 1, bdim - 1).is_zero());
    }
}
