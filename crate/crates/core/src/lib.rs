//! Certified lower bounds on the dimensionality of genuine multipartite
//! entanglement (GME) for mixed `n`-partite qudit states.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of density-matrix elements:
//!
//! * [`tensor`] — system shapes, basis labels, pure states, dense density
//!   matrices and the [`ElementProvider`](tensor::ElementProvider) backends.
//! * [`states`] — GHZ, Dicke, W and the other named states, white-noise
//!   mixing and seeded random samplers.
//! * [`combinatorics`] — bipartitions, `m`-subsets, the ordered pair set
//!   and the swap sets the criteria sum over.
//! * [`criteria`] — the `Q_0` / `Q_m` quantities, fidelity witnesses and
//!   the certification rule `Q_m > f - 2`.
//! * [`oracle`] — slow reference evaluations (explicit two-copy swap
//!   operators, Schmidt ranks of pure states).
//! * [`scan`] — noise-threshold bisection, threshold tables and the
//!   GHZ/W mixture region scan.
#![no_std]

extern crate alloc;

pub mod combinatorics;
pub mod criteria;
mod error;
pub mod linalg;
pub mod oracle;
pub mod rng;
pub mod scan;
pub mod states;
pub mod tensor;

pub use error::{Error, Result};
pub use num_complex::Complex64;
