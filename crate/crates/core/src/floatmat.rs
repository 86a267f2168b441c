//! Complex floating-point backend: thin helpers over nalgebra.

use nalgebra::DMatrix;
use num::Complex;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;

pub fn czero() -> C64 {
    C64::new(0.0, 0.0)
}

pub fn cone() -> C64 {
    C64::new(1.0, 0.0)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    max_abs(&(a - b))
}

/// Matrix exponential by scaling-and-squaring with a Taylor series.
pub fn expm(m: &CMat) -> CMat {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "exp of non-square matrix");
    let norm = max_abs(m) * n as f64;
    let mut s = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        s += 1;
        scale *= 0.5;
    }
    let a = m.map(|c| c * scale);
    let mut acc = CMat::identity(n, n);
    let mut term = CMat::identity(n, n);
    for k in 1..=24 {
        term = (&term * &a).map(|c| c / k as f64);
        acc += &term;
        if max_abs(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..s {
        acc = &acc * &acc;
    }
    acc
}

/// Number of singular values above a relative threshold.
pub fn rank_by_svd(m: &CMat, rel_tol: f64) -> usize {
    let svd = m.clone().svd(false, false);
    let max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    svd.singular_values.iter().filter(|s| **s > rel_tol * max).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expm_of_nilpotent() {
        let mut m = CMat::zeros(3, 3);
        m[(0, 1)] = cone();
        m[(1, 2)] = cone();
        let e = expm(&m);
        // exp = I + m + m^2/2
        let expected = CMat::identity(3, 3) + &m + (&m * &m).map(|c| c * 0.5);
        assert!(max_abs_diff(&e, &expected) < 1e-14);
    }

    #[test]
    fn svd_rank() {
        let mut m = CMat::zeros(3, 3);
        m[(0, 0)] = cone();
        m[(2, 2)] = cone();
        assert_eq!(rank_by_svd(&m, 1e-10), 2);
    }
}
