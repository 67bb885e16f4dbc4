//! Spectra of parametrized families of finite-dimensional self-adjoint operators.
//!
//! The crate tracks how the full eigenvalue sequence of a symmetric matrix
//! family `t ∈ [0,1] → T(t)` moves: ordered spectral windows and their
//! alignment under integer index shifts (the arsinh metric), spectral flow,
//! interval eigenprojectors (direct and via resolvent contour quadrature),
//! orientability signs of loops of spectral subspaces, real Clifford algebra
//! and Spin-group arithmetic with the explicit rotation lift, exact
//! round-sphere reference spectra, and the linear-algebraic identification
//! maps between two inner products.
//!
//! Everything here is pure computation on owned values; the crate is
//! `no_std` (with `alloc`). File formats and the command-line front end live
//! in the companion `spectraflow` crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod bundle;
pub mod clifford;
pub mod error;
pub mod family;
pub mod identify;
pub mod linalg;
pub mod math;
pub mod models;
pub mod projection;
pub mod rng;
pub mod spectrum;

pub use error::{Error, Result};
pub use linalg::Mat;
