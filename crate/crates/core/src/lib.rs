//! Minimum output entropies of single-mode bosonic noise channels.
//!
//! The crate works in a truncated Fock space and covers:
//!
//! * [`fock`]: pure and mixed states, displacement operators, partial traces.
//! * [`channels`]: the classical-noise channel `N_n`, the thermal-noise channel
//!   `E_eta^N` and Gaussian covariance propagation.
//! * [`entropies`]: Rényi and von Neumann entropies, Husimi functions, Wehrl and
//!   Rényi–Wehrl entropies with grid-doubling error estimates.
//! * [`theta_multimode`]: the circulant multimode factorisation behind the
//!   integer-order purity bound, with independent numerical cross-checks.
//! * [`bounds`]: closed-form upper and lower bounds on the minimum Rényi output
//!   entropy and their transfer to the thermal channel.
//! * [`minimizer`]: multi-start searches over truncated pure inputs and the
//!   Gaussian-input minimum.
//! * [`cli`]: the `bosonic-minent` command-line front end.
//!
//! Fallible operations return [`Result`]; truncation is never silent, every
//! state and channel output carries the probability mass lost to the cutoff.
//!
//! ```
//! use bosonic_minent::channels::{apply_classical_noise, ClassicalNoiseSpec};
//! use bosonic_minent::entropies::renyi_entropy;
//! use bosonic_minent::fock::fock_state;
//! use bosonic_minent::quadrature::QuadratureRule;
//!
//! let vacuum = fock_state(0, 60).unwrap().to_density();
//! let out = apply_classical_noise(&vacuum, ClassicalNoiseSpec::new(1.0).unwrap(), &QuadratureRule::default()).unwrap();
//! assert!((renyi_entropy(&out, 2.0).unwrap() - 3f64.ln()).abs() < 1e-9);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod channels;
pub mod cli;
pub mod entropies;
pub mod error;
pub mod fock;
pub mod minimizer;
pub mod quadrature;
pub mod theta_multimode;

pub use error::{Error, Result};
