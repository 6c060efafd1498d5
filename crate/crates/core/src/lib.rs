//! s-parameterized ordering of a single boson mode.
//!
//! * [`hermite2d`]: incomplete 2-D Hermite and Laguerre polynomials.
//! * [`ordered`]: polynomials and exponentials under an ordering symbol,
//!   ordering conversion, ladder sandwiches, Fock and coherent projectors.
//! * [`fock`]: truncated Fock-space matrices used as a brute-force oracle.
//! * [`phase_space`]: quasiprobability symbols and trace pairing by
//!   quadrature over the complex plane.
//!
//! The crate is `no_std` with `alloc`; enable the `std` feature to route
//! float intrinsics through the platform libm.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod fock;
pub mod hermite2d;
pub mod ordered;
pub mod phase_space;
pub mod scalar;

pub use error::{Error, Result};
pub use fock::{FockMatrix, basis_projector, coherent_vector, eval_poly, ladder, matrix_distance};
pub use ordered::{
    OrderParameter, OrderedExp, OrderedPoly, coherent_projector, convert_monomial, convert_poly,
    exp_reorder, exp_to_poly, number_op_power, projector, sandwich,
};
pub use phase_space::{
    ComplexGrid, IntegrationCheck, QuadratureGrid, classical_symbol, sample_grid, trace_pair,
    verify_integration_formula, w_coherent, w_projector,
};
pub use scalar::{Cdd, Cx, Real, TwoFloat};
