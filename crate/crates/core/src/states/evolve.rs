//! Time evolution of level-expanded states and the spectrum-linearity
//! stability test.
//!
//! Exact states keep their coefficients; evolution attaches per-level phase
//! data (E_n, t) that only the floating-point view evaluates.

use super::PGState;
use crate::pgalg::{PGMono, PGVar};
use crate::qscalar::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumModel {
    Energies(Vec<f64>),
    Linear { e0: f64, c: f64 },
}

impl SpectrumModel {
    pub fn energy(&self, k: usize) -> f64 {
        match self {
            SpectrumModel::Energies(es) => es[k],
            SpectrumModel::Linear { e0, c } => (k as f64 * c + 1.0) * e0,
        }
    }

    pub fn energies(&self, dim: usize) -> Vec<f64> {
        (0..dim).map(|k| self.energy(k)).collect()
    }
}

/// A state with formal evolution phases attached per level.
#[derive(Clone)]
pub struct Evolved {
    pub base: PGState,
    pub energies: Vec<f64>,
    pub t: f64,
}

pub fn evolve(state: &PGState, spectrum: &SpectrumModel, t: f64) -> Evolved {
    assert_eq!(state.slots().len(), 1, "evolution acts on single-system states");
    Evolved { base: state.clone(), energies: spectrum.energies(state.params().dim()), t }
}

impl Evolved {
    /// Numeric coefficient table with the phases applied.
    pub fn coefficients(&self) -> BTreeMap<(Vec<u8>, PGMono), Complex64> {
        let mut out = self.base.eval_coeffs();
        for ((idx, _), v) in out.iter_mut() {
            let e = self.energies[idx[0] as usize];
            *v *= Complex64::from_polar(1.0, -e * self.t);
        }
        out
    }
}

/// Numeric coefficients of a state with each variable rescaled,
/// var -> scale * var (barred partners scale by the conjugate when listed).
pub fn eval_with_scaled_vars(
    state: &PGState,
    scales: &[(PGVar, Complex64)],
) -> BTreeMap<(Vec<u8>, PGMono), Complex64> {
    let mut out = state.eval_coeffs();
    for ((_, mono), v) in out.iter_mut() {
        for &(var, s) in scales {
            let e = mono.exponent_of(var) as i32;
            if e > 0 {
                *v *= s.powi(e);
            }
        }
    }
    out
}

pub fn coeff_table_distance(
    a: &BTreeMap<(Vec<u8>, PGMono), Complex64>,
    b: &BTreeMap<(Vec<u8>, PGMono), Complex64>,
) -> f64 {
    let mut keys: Vec<_> = a.keys().collect();
    for k in b.keys() {
        if !a.contains_key(k) {
            keys.push(k);
        }
    }
    let zero = Complex64::new(0.0, 0.0);
    keys.iter()
        .map(|k| {
            let va = a.get(*k).copied().unwrap_or(zero);
            let vb = b.get(*k).copied().unwrap_or(zero);
            (va - vb).norm()
        })
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityWitness {
    pub stable: bool,
    /// The constant c with E_k = (k c + 1) E_0, when it exists.
    pub c: Option<f64>,
}

/// A spectrum keeps coherent states coherent iff E_k - E_0 is linear in k.
pub fn stability_check(spectrum: &SpectrumModel, dim: usize) -> StabilityWitness {
    let es = spectrum.energies(dim);
    let e0 = es[0];
    let scale = es.iter().map(|e| e.abs()).fold(1.0, f64::max);
    let tol = 1e-12 * scale;
    if es.iter().all(|e| (e - e0).abs() <= tol) {
        return StabilityWitness { stable: true, c: Some(0.0) };
    }
    if e0.abs() <= tol {
        // E_k = (k c + 1) E_0 forces every energy to vanish with E_0
        return StabilityWitness { stable: false, c: None };
    }
    let c = (es[1] - e0) / e0;
    for (k, e) in es.iter().enumerate() {
        let predicted = (k as f64 * c + 1.0) * e0;
        if (e - predicted).abs() > tol {
            return StabilityWitness { stable: false, c: None };
        }
    }
    StabilityWitness { stable: true, c: Some(c) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::coherent;
    use crate::qscalar::DeformParams;

    #[test]
    fn stability_examples() {
        let w = stability_check(&SpectrumModel::Energies(vec![1.0, 2.0, 3.0]), 3);
        assert!(w.stable);
        assert!((w.c.unwrap() - 1.0).abs() < 1e-12);
        let w = stability_check(&SpectrumModel::Energies(vec![1.0, 2.0, 5.0]), 3);
        assert!(!w.stable);
        let w = stability_check(&SpectrumModel::Energies(vec![0.7, 0.7, 0.7]), 3);
        assert!(w.stable);
        assert_eq!(w.c.unwrap(), 0.0);
    }

    #[test]
    fn zero_time_is_identity() {
        let params = DeformParams::new(2);
        let s = coherent(params, PGVar::theta(0), false);
        let ev = evolve(&s, &SpectrumModel::Linear { e0: 1.3, c: 0.5 }, 0.0);
        assert!(coeff_table_distance(&ev.coefficients(), &s.eval_coeffs()) < 1e-15);
    }

    #[test]
    fn linear_spectrum_keeps_coherence() {
        // e^{-i E_0 t} |theta(t)> with theta(t) = e^{-i c E_0 t} theta
        let params = DeformParams::new(3);
        let theta = PGVar::theta(0);
        let s = coherent(params, theta, false);
        let spectrum = SpectrumModel::Linear { e0: 0.9, c: 1.7 };
        for step in 0..10 {
            let t = 0.3 * step as f64;
            let evolved = evolve(&s, &spectrum, t).coefficients();
            let lambda = Complex64::from_polar(1.0, -1.7 * 0.9 * t);
            let mut reference = eval_with_scaled_vars(&s, &[(theta, lambda)]);
            let global = Complex64::from_polar(1.0, -0.9 * t);
            for v in reference.values_mut() {
                *v *= global;
            }
            assert!(coeff_table_distance(&evolved, &reference) <= 1e-10, "t={t}");
        }
    }
}
