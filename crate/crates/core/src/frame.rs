//! Biorthonormal frames and the pseudo-Hermitian ladder-operator set.
//!
//! A frame is a pair of bases {|psi_n>}, {|phi_n>} with <phi_m|psi_n> =
//! delta_mn and metric eta = sum |phi_n><phi_n|.  Ladder operators are built
//! as outer-product sums in the computational basis, so every relation check
//! exercises the frame itself and not just the level labels.

use crate::exact::{Matrix, RingScalar};
use crate::floatmat::{max_abs, CMat, C64};
use crate::qscalar::{DeformParams, QScalar};
use crate::report::Report;
use num::rational::BigRational;
use num::{FromPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("frame not invertible")]
    Singular,
    #[error("frame dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

/// Exact biorthonormal frame.
#[derive(Clone)]
pub struct Frame {
    params: DeformParams,
    /// Columns are |psi_n>.
    psi: Matrix<QScalar>,
    /// Rows are <phi_n| (the inverse of psi).
    dual: Matrix<QScalar>,
    /// Columns are |phi_n> (conjugate transpose of `dual`).
    phi: Matrix<QScalar>,
    eta: Matrix<QScalar>,
    eta_inv: Matrix<QScalar>,
}

impl Frame {
    /// Build from the psi-basis matrix; fails when it is singular.
    pub fn build(params: DeformParams, psi: Matrix<QScalar>) -> Result<Self, FrameError> {
        let dim = params.dim();
        if psi.rows() != dim || psi.cols() != dim {
            return Err(FrameError::Dimension { expected: dim, got: psi.rows() });
        }
        let dual = psi.try_inverse().ok_or(FrameError::Singular)?;
        let phi = dual.conj_t();
        let eta = phi.matmul(&phi.conj_t());
        let eta_inv = psi.matmul(&psi.conj_t());
        Ok(Frame { params, psi, dual, phi, eta, eta_inv })
    }

    pub fn identity(params: DeformParams) -> Self {
        let one = QScalar::one(params);
        Self::build(params, Matrix::identity(params.dim(), &one)).unwrap()
    }

    /// Seeded random frame: identity plus a strictly upper-triangular
    /// Gaussian-rational perturbation with small numerators.  Unit
    /// triangular, hence always exactly invertible.
    pub fn random(params: DeformParams, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = params.dim();
        let i_unit = QScalar::i(params);
        let psi = Matrix::from_fn(dim, dim, |r, c| {
            if r == c {
                QScalar::one(params)
            } else if r < c {
                let re = QScalar::from_ratio(params, rng.gen_range(-2..=2), rng.gen_range(1..=3));
                let im = QScalar::from_ratio(params, rng.gen_range(-2..=2), rng.gen_range(1..=3));
                &re + &(&im * &i_unit)
            } else {
                QScalar::zero(params)
            }
        });
        Self::build(params, psi).expect("unit-triangular frame is invertible")
    }

    pub fn params(&self) -> DeformParams {
        self.params
    }

    pub fn dim(&self) -> usize {
        self.params.dim()
    }

    pub fn psi(&self) -> &Matrix<QScalar> {
        &self.psi
    }

    pub fn phi(&self) -> &Matrix<QScalar> {
        &self.phi
    }

    pub fn eta(&self) -> &Matrix<QScalar> {
        &self.eta
    }

    pub fn eta_inv(&self) -> &Matrix<QScalar> {
        &self.eta_inv
    }

    pub fn psi_ket(&self, n: usize) -> Vec<QScalar> {
        self.psi.col(n)
    }

    pub fn phi_bra(&self, n: usize) -> Vec<QScalar> {
        self.dual.row(n)
    }

    pub fn phi_ket(&self, n: usize) -> Vec<QScalar> {
        self.phi.col(n)
    }

    pub fn psi_bra(&self, n: usize) -> Vec<QScalar> {
        self.psi.col(n).iter().map(RingScalar::conj).collect()
    }

    /// Exact checks of biorthonormality, completeness, and the metric sums.
    pub fn verify_invariants(&self) -> Report {
        let mut report = Report::new("frame invariants");
        let id = Matrix::identity(self.dim(), &QScalar::one(self.params));
        let bi = self.dual.matmul(&self.psi).sub(&id);
        report.push("<phi_m|psi_n> = delta_mn", bi.is_zero(), bi.max_abs());
        let comp = self.psi.matmul(&self.dual).sub(&id);
        report.push("sum |psi_n><phi_n| = 1", comp.is_zero(), comp.max_abs());
        let eta_sum = self.phi.matmul(&self.phi.conj_t()).sub(&self.eta);
        report.push("eta = sum |phi_n><phi_n|", eta_sum.is_zero(), eta_sum.max_abs());
        let prod = self.eta.matmul(&self.eta_inv).sub(&id);
        report.push("eta * eta^-1 = 1", prod.is_zero(), prod.max_abs());
        let herm = self.eta.conj_t().sub(&self.eta);
        report.push("eta hermitian", herm.is_zero(), herm.max_abs());
        report
    }

    pub fn to_float(&self) -> FloatFrame {
        FloatFrame::from_psi(
            self.params,
            CMat::from_fn(self.dim(), self.dim(), |r, c| self.psi.at(r, c).eval()),
        )
        .expect("exact frame evaluates to an invertible float frame")
    }
}

/// Float frame, used by the floating-point backend and for file input.
#[derive(Clone)]
pub struct FloatFrame {
    pub params: DeformParams,
    pub psi: CMat,
    pub dual: CMat,
    pub phi: CMat,
    pub eta: CMat,
    pub eta_inv: CMat,
}

impl FloatFrame {
    pub fn from_psi(params: DeformParams, psi: CMat) -> Result<Self, FrameError> {
        let dim = params.dim();
        if psi.nrows() != dim || psi.ncols() != dim {
            return Err(FrameError::Dimension { expected: dim, got: psi.nrows() });
        }
        let dual = psi.clone().try_inverse().ok_or(FrameError::Singular)?;
        let phi = dual.adjoint();
        let eta = &phi * phi.adjoint();
        let eta_inv = &psi * psi.adjoint();
        Ok(FloatFrame { params, psi, dual, phi, eta, eta_inv })
    }

    pub fn identity(params: DeformParams) -> Self {
        Self::from_psi(params, CMat::identity(params.dim(), params.dim())).unwrap()
    }
}

// ---------------------------------------------------------------------------
// Frame file format.

#[derive(Serialize, Deserialize)]
pub struct FrameFile {
    pub p: u32,
    /// Row-major matrix of \[re, im\] entries whose columns are |psi_n>.
    pub psi: Vec<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<Vec<[f64; 2]>>>,
}

impl FrameFile {
    pub fn to_float_frame(&self) -> Result<FloatFrame, FrameError> {
        let params = DeformParams::new(self.p);
        let dim = params.dim();
        if self.psi.len() != dim || self.psi.iter().any(|row| row.len() != dim) {
            return Err(FrameError::Dimension { expected: dim, got: self.psi.len() });
        }
        let psi = CMat::from_fn(dim, dim, |r, c| C64::new(self.psi[r][c][0], self.psi[r][c][1]));
        FloatFrame::from_psi(params, psi)
    }

    /// Exact frame: every finite f64 is a dyadic rational, so the conversion
    /// is exact.
    pub fn to_exact_frame(&self) -> Result<Frame, FrameError> {
        let params = DeformParams::new(self.p);
        let dim = params.dim();
        if self.psi.len() != dim || self.psi.iter().any(|row| row.len() != dim) {
            return Err(FrameError::Dimension { expected: dim, got: self.psi.len() });
        }
        let i_unit = QScalar::i(params);
        let psi = Matrix::from_fn(dim, dim, |r, c| {
            let re = BigRational::from_f64(self.psi[r][c][0]).unwrap_or_else(BigRational::zero);
            let im = BigRational::from_f64(self.psi[r][c][1]).unwrap_or_else(BigRational::zero);
            let re = QScalar::from_rational(params, re);
            let im = QScalar::from_rational(params, im);
            &re + &(&im * &i_unit)
        });
        Frame::build(params, psi)
    }

    pub fn from_frame(frame: &Frame) -> Self {
        let dim = frame.dim();
        let grab = |m: &Matrix<QScalar>| -> Vec<Vec<[f64; 2]>> {
            (0..dim)
                .map(|r| {
                    (0..dim)
                        .map(|c| {
                            let v = m.at(r, c).eval();
                            [v.re, v.im]
                        })
                        .collect()
                })
                .collect()
        };
        FrameFile {
            p: frame.params().p(),
            psi: grab(frame.psi()),
            phi: Some(grab(frame.phi())),
            eta: Some(grab(frame.eta())),
        }
    }
}

// ---------------------------------------------------------------------------
// Operator bundles (exact and float share one relation list).

/// Matrix interface the relation list is written against.
pub trait RelMat: Clone {
    type S: Clone;
    fn mm(&self, o: &Self) -> Self;
    fn madd(&self, o: &Self) -> Self;
    fn msub(&self, o: &Self) -> Self;
    fn mscale(&self, s: &Self::S) -> Self;
    fn mconj_t(&self) -> Self;
    fn residual_max(&self) -> f64;
    fn residual_exact_zero(&self) -> Option<bool>;
}

impl RelMat for Matrix<QScalar> {
    type S = QScalar;
    fn mm(&self, o: &Self) -> Self {
        self.matmul(o)
    }
    fn madd(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn msub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn mscale(&self, s: &Self::S) -> Self {
        self.scale(s)
    }
    fn mconj_t(&self) -> Self {
        self.conj_t()
    }
    fn residual_max(&self) -> f64 {
        self.max_abs()
    }
    fn residual_exact_zero(&self) -> Option<bool> {
        Some(self.is_zero())
    }
}

impl RelMat for CMat {
    type S = C64;
    fn mm(&self, o: &Self) -> Self {
        self * o
    }
    fn madd(&self, o: &Self) -> Self {
        self + o
    }
    fn msub(&self, o: &Self) -> Self {
        self - o
    }
    fn mscale(&self, s: &Self::S) -> Self {
        self.map(|c| c * s)
    }
    fn mconj_t(&self) -> Self {
        self.adjoint()
    }
    fn residual_max(&self) -> f64 {
        max_abs(self)
    }
    fn residual_exact_zero(&self) -> Option<bool> {
        None
    }
}

/// The full ladder-operator set over one frame, plus the diagonal q-power and
/// bracket matrices the relations need.
#[derive(Clone)]
pub struct OperatorBundle<M: RelMat> {
    pub a: M,
    pub a_sharp: M,
    pub a_tilde: M,
    pub a_dagger: M,
    pub b: M,
    pub b_bar: M,
    pub c: M,
    pub c_bar: M,
    pub n_psi: M,
    pub n_phi: M,
    pub eta: M,
    pub eta_inv: M,
    pub id: M,
    pub q_n_neg: M,
    pub q_n_pos: M,
    pub q_2n: M,
    pub q_np_neg: M,
    pub q_np_pos: M,
    pub q_2np: M,
    pub qq_diag_psi: M,
    pub qq_diag_phi: M,
    pub br_diag_psi: M,
    pub br_diag_phi: M,
    pub q: M::S,
    pub q_inv: M::S,
    pub q2: M::S,
}

pub type OperatorSet = OperatorBundle<Matrix<QScalar>>;
pub type FloatOperatorSet = OperatorBundle<CMat>;

fn add_outer(acc: &mut Matrix<QScalar>, coeff: &QScalar, col: &[QScalar], row: &[QScalar]) {
    let term = Matrix::outer(col, row).scale(coeff);
    *acc = acc.add(&term);
}

/// Construct every ladder operator over the frame.
pub fn ladder_ops(frame: &Frame) -> OperatorSet {
    let params = frame.params();
    let p = params.p();
    let dim = frame.dim();
    let zero = QScalar::zero(params);
    let zmat = || Matrix::zero(dim, dim, &zero);

    let mut a = zmat();
    let mut a_sharp = zmat();
    let mut a_tilde = zmat();
    let mut a_dagger = zmat();
    let mut b = zmat();
    let mut b_bar = zmat();
    let mut c = zmat();
    let mut c_bar = zmat();
    for n in 0..p as usize {
        let sq = QScalar::sqrt_qq_bracket(params, n as u32 + 1);
        add_outer(&mut a, &sq, &frame.psi_ket(n), &frame.phi_bra(n + 1));
        add_outer(&mut a_sharp, &sq, &frame.psi_ket(n + 1), &frame.phi_bra(n));
        add_outer(&mut a_tilde, &sq, &frame.phi_ket(n), &frame.psi_bra(n + 1));
        add_outer(&mut a_dagger, &sq, &frame.phi_ket(n + 1), &frame.psi_bra(n));
        let sb = QScalar::sqrt_bracket(params, n as u32 + 1);
        add_outer(&mut b, &sb, &frame.psi_ket(n), &frame.phi_bra(n + 1));
        add_outer(&mut b_bar, &sb, &frame.psi_ket(n + 1), &frame.phi_bra(n));
        add_outer(&mut c, &sb, &frame.phi_ket(n), &frame.psi_bra(n + 1));
        add_outer(&mut c_bar, &sb, &frame.phi_ket(n + 1), &frame.psi_bra(n));
    }

    let diag_psi = |f: &dyn Fn(u32) -> QScalar| {
        let mut m = zmat();
        for n in 0..dim {
            add_outer(&mut m, &f(n as u32), &frame.psi_ket(n), &frame.phi_bra(n));
        }
        m
    };
    let diag_phi = |f: &dyn Fn(u32) -> QScalar| {
        let mut m = zmat();
        for n in 0..dim {
            add_outer(&mut m, &f(n as u32), &frame.phi_ket(n), &frame.psi_bra(n));
        }
        m
    };

    OperatorBundle {
        a,
        a_sharp,
        a_tilde,
        a_dagger,
        b,
        b_bar,
        c,
        c_bar,
        n_psi: diag_psi(&|n| QScalar::from_int(params, n as i64)),
        n_phi: diag_phi(&|n| QScalar::from_int(params, n as i64)),
        eta: frame.eta().clone(),
        eta_inv: frame.eta_inv().clone(),
        id: Matrix::identity(dim, &QScalar::one(params)),
        q_n_neg: diag_psi(&|n| QScalar::q_pow(params, -(n as i64))),
        q_n_pos: diag_psi(&|n| QScalar::q_pow(params, n as i64)),
        q_2n: diag_psi(&|n| QScalar::q_pow(params, 2 * n as i64)),
        q_np_neg: diag_phi(&|n| QScalar::q_pow(params, -(n as i64))),
        q_np_pos: diag_phi(&|n| QScalar::q_pow(params, n as i64)),
        q_2np: diag_phi(&|n| QScalar::q_pow(params, 2 * n as i64)),
        qq_diag_psi: diag_psi(&|n| QScalar::qq_bracket(params, n)),
        qq_diag_phi: diag_phi(&|n| QScalar::qq_bracket(params, n)),
        br_diag_psi: diag_psi(&|n| QScalar::bracket(params, n)),
        br_diag_phi: diag_phi(&|n| QScalar::bracket(params, n)),
        q: params.q(),
        q_inv: QScalar::q_pow(params, -1),
        q2: QScalar::q_pow(params, 2),
    }
}

/// Float twin of `ladder_ops`.
pub fn ladder_ops_float(frame: &FloatFrame) -> FloatOperatorSet {
    let params = frame.params;
    let p = params.p();
    let dim = params.dim();
    let q = params.q().eval();
    let zmat = || CMat::zeros(dim, dim);

    let col_of = |m: &CMat, n: usize| m.column(n).into_owned();
    let row_of = |m: &CMat, n: usize| m.row(n).into_owned();

    let mut a = zmat();
    let mut a_sharp = zmat();
    let mut a_tilde = zmat();
    let mut a_dagger = zmat();
    let mut b = zmat();
    let mut b_bar = zmat();
    let mut c = zmat();
    let mut c_bar = zmat();
    let psi_bra = frame.psi.adjoint();
    for n in 0..p as usize {
        let sq = QScalar::sqrt_qq_bracket(params, n as u32 + 1).eval();
        a += col_of(&frame.psi, n) * row_of(&frame.dual, n + 1) * sq;
        a_sharp += col_of(&frame.psi, n + 1) * row_of(&frame.dual, n) * sq;
        a_tilde += col_of(&frame.phi, n) * row_of(&psi_bra, n + 1) * sq;
        a_dagger += col_of(&frame.phi, n + 1) * row_of(&psi_bra, n) * sq;
        let sb = QScalar::sqrt_bracket(params, n as u32 + 1).eval();
        b += col_of(&frame.psi, n) * row_of(&frame.dual, n + 1) * sb;
        b_bar += col_of(&frame.psi, n + 1) * row_of(&frame.dual, n) * sb;
        c += col_of(&frame.phi, n) * row_of(&psi_bra, n + 1) * sb;
        c_bar += col_of(&frame.phi, n + 1) * row_of(&psi_bra, n) * sb;
    }

    let diag_psi = |f: &dyn Fn(u32) -> C64| {
        let mut m = zmat();
        for n in 0..dim {
            m += col_of(&frame.psi, n) * row_of(&frame.dual, n) * f(n as u32);
        }
        m
    };
    let diag_phi = |f: &dyn Fn(u32) -> C64| {
        let mut m = zmat();
        for n in 0..dim {
            m += col_of(&frame.phi, n) * row_of(&psi_bra, n) * f(n as u32);
        }
        m
    };

    OperatorBundle {
        a,
        a_sharp,
        a_tilde,
        a_dagger,
        b,
        b_bar,
        c,
        c_bar,
        n_psi: diag_psi(&|n| C64::new(n as f64, 0.0)),
        n_phi: diag_phi(&|n| C64::new(n as f64, 0.0)),
        eta: frame.eta.clone(),
        eta_inv: frame.eta_inv.clone(),
        id: CMat::identity(dim, dim),
        q_n_neg: diag_psi(&|n| q.powi(-(n as i32))),
        q_n_pos: diag_psi(&|n| q.powi(n as i32)),
        q_2n: diag_psi(&|n| q.powi(2 * n as i32)),
        q_np_neg: diag_phi(&|n| q.powi(-(n as i32))),
        q_np_pos: diag_phi(&|n| q.powi(n as i32)),
        q_2np: diag_phi(&|n| q.powi(2 * n as i32)),
        qq_diag_psi: diag_psi(&|n| QScalar::qq_bracket(params, n).eval()),
        qq_diag_phi: diag_phi(&|n| QScalar::qq_bracket(params, n).eval()),
        br_diag_psi: diag_psi(&|n| QScalar::bracket(params, n).eval()),
        br_diag_phi: diag_phi(&|n| QScalar::bracket(params, n).eval()),
        q,
        q_inv: q.powi(-1),
        q2: q * q,
    }
}

/// Residual matrices for every oscillator relation; zero means the relation
/// holds.
#[allow(clippy::vec_init_then_push)]
pub fn oscillator_residuals<M: RelMat>(ops: &OperatorBundle<M>) -> Vec<(String, M)> {
    let comm = |x: &M, y: &M| x.mm(y).msub(&y.mm(x));
    let mut out: Vec<(String, M)> = Vec::new();

    out.push((
        "a_dagger = conj_transpose(a)".into(),
        ops.a_dagger.msub(&ops.a.mconj_t()),
    ));
    out.push((
        "a_sharp = eta^-1 a_dagger eta".into(),
        ops.a_sharp.msub(&ops.eta_inv.mm(&ops.a_dagger).mm(&ops.eta)),
    ));
    out.push((
        "a_tilde = eta a eta^-1".into(),
        ops.a_tilde.msub(&ops.eta.mm(&ops.a).mm(&ops.eta_inv)),
    ));
    out.push((
        "a a_sharp - q a_sharp a = q^-N".into(),
        ops.a
            .mm(&ops.a_sharp)
            .msub(&ops.a_sharp.mm(&ops.a).mscale(&ops.q))
            .msub(&ops.q_n_neg),
    ));
    out.push((
        "a a_sharp - q^-1 a_sharp a = q^N".into(),
        ops.a
            .mm(&ops.a_sharp)
            .msub(&ops.a_sharp.mm(&ops.a).mscale(&ops.q_inv))
            .msub(&ops.q_n_pos),
    ));
    out.push((
        "a_tilde a_dagger - q a_dagger a_tilde = q^-N'".into(),
        ops.a_tilde
            .mm(&ops.a_dagger)
            .msub(&ops.a_dagger.mm(&ops.a_tilde).mscale(&ops.q))
            .msub(&ops.q_np_neg),
    ));
    out.push((
        "a_tilde a_dagger - q^-1 a_dagger a_tilde = q^N'".into(),
        ops.a_tilde
            .mm(&ops.a_dagger)
            .msub(&ops.a_dagger.mm(&ops.a_tilde).mscale(&ops.q_inv))
            .msub(&ops.q_np_pos),
    ));
    out.push((
        "a_sharp a = [[N]]".into(),
        ops.a_sharp.mm(&ops.a).msub(&ops.qq_diag_psi),
    ));
    out.push((
        "a_dagger a_tilde = [[N']]".into(),
        ops.a_dagger.mm(&ops.a_tilde).msub(&ops.qq_diag_phi),
    ));
    out.push((
        "b b_bar - q^2 b_bar b = 1".into(),
        ops.b
            .mm(&ops.b_bar)
            .msub(&ops.b_bar.mm(&ops.b).mscale(&ops.q2))
            .msub(&ops.id),
    ));
    // the difference of the orderings is q^2N with the lowering product
    // first; this is the orientation forced by b b_bar - q^2 b_bar b = 1
    // together with b_bar b = [N]
    out.push((
        "b b_bar - b_bar b = q^2N".into(),
        ops.b
            .mm(&ops.b_bar)
            .msub(&ops.b_bar.mm(&ops.b))
            .msub(&ops.q_2n),
    ));
    out.push(("b_bar b = [N]".into(), ops.b_bar.mm(&ops.b).msub(&ops.br_diag_psi)));
    out.push((
        "c c_bar - q^2 c_bar c = 1".into(),
        ops.c
            .mm(&ops.c_bar)
            .msub(&ops.c_bar.mm(&ops.c).mscale(&ops.q2))
            .msub(&ops.id),
    ));
    out.push((
        "c c_bar - c_bar c = q^2N'".into(),
        ops.c
            .mm(&ops.c_bar)
            .msub(&ops.c_bar.mm(&ops.c))
            .msub(&ops.q_2np),
    ));
    out.push(("c_bar c = [N']".into(), ops.c_bar.mm(&ops.c).msub(&ops.br_diag_phi)));
    out.push(("[N, a] = -a".into(), comm(&ops.n_psi, &ops.a).madd(&ops.a)));
    out.push((
        "[N, a_sharp] = a_sharp".into(),
        comm(&ops.n_psi, &ops.a_sharp).msub(&ops.a_sharp),
    ));
    out.push(("[N, b] = -b".into(), comm(&ops.n_psi, &ops.b).madd(&ops.b)));
    out.push((
        "[N, b_bar] = b_bar".into(),
        comm(&ops.n_psi, &ops.b_bar).msub(&ops.b_bar),
    ));
    out.push(("[N', c] = -c".into(), comm(&ops.n_phi, &ops.c).madd(&ops.c)));
    out.push((
        "[N', c_bar] = c_bar".into(),
        comm(&ops.n_phi, &ops.c_bar).msub(&ops.c_bar),
    ));
    out.push((
        "b_sharp = b_bar q^-N".into(),
        ops.eta_inv
            .mm(&ops.b.mconj_t())
            .mm(&ops.eta)
            .msub(&ops.b_bar.mm(&ops.q_n_neg)),
    ));
    out
}

/// Exact verification: every residual must vanish identically.
pub fn verify_oscillator_relations(ops: &OperatorSet) -> Report {
    let mut report = Report::new("oscillator relations (exact)");
    for (name, residual) in oscillator_residuals(ops) {
        let pass = residual.residual_exact_zero().unwrap();
        report.push(name, pass, residual.residual_max());
    }
    report
}

/// Float verification at the given tolerance.
pub fn verify_oscillator_relations_float(ops: &FloatOperatorSet, tol: f64) -> Report {
    let mut report = Report::new("oscillator relations (float)");
    for (name, residual) in oscillator_residuals(ops) {
        let max = residual.residual_max();
        report.push(name, max <= tol, max);
    }
    report
}

/// Float frame invariants at the given tolerance.
pub fn verify_frame_invariants_float(frame: &FloatFrame, tol: f64) -> Report {
    let dim = frame.params.dim();
    let id = CMat::identity(dim, dim);
    let mut report = Report::new("frame invariants (float)");
    let mut check = |name: &str, m: CMat| {
        let r = max_abs(&m);
        report.push(name, r <= tol, r);
    };
    check("<phi_m|psi_n> = delta_mn", &frame.dual * &frame.psi - &id);
    check("sum |psi_n><phi_n| = 1", &frame.psi * &frame.dual - &id);
    check("eta * eta^-1 = 1", &frame.eta * &frame.eta_inv - &id);
    check("eta hermitian", frame.eta.adjoint() - &frame.eta);
    report
}
