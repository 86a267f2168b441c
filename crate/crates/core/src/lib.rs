//! Exact symbolic kernel for pseudo-Hermitian q-oscillators over
//! para-Grassmann variables: biorthonormal frames and their ladder algebras,
//! coherent / squeezed / supercoherent states, resolution-of-identity weight
//! solving, deformed su(2)/su(1,1) structure verification, and
//! weighted-integral synthesis of entangled states.
//!
//! Arithmetic is exact (cyclotomic field plus formal bracket radicals) with a
//! complex floating-point backend for evaluation and cross-checks.

pub mod deformed;
pub mod entangle;
pub mod exact;
pub mod floatmat;
pub mod frame;
pub mod pgalg;
pub mod qscalar;
pub mod report;
pub mod states;

pub use qscalar::{DeformParams, QScalar};
