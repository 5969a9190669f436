//! Classical simulation of Floquet dynamics for a 1D cluster ("SPT") spin chain.
//!
//! The chain is governed by `H = H0 + H1`, where `H0` is a sum of three-site
//! stabilizers `K_m = Z_{m-1} X_m Z_{m+1}` with strengths `J_e` (even centers)
//! and `J_o` (odd centers), and `H1` adds a transverse field `h_x` and
//! nearest-neighbour `V_xx X_i X_{i+1}` interactions. Time evolution is the
//! first-order Trotter cycle `U(dt) = exp(-i H1 dt) exp(-i H0 dt)`.
//!
//! The crate provides:
//!
//! - [`pauli`]: exact bitmask algebra of Pauli strings and Hermitian Pauli sums;
//! - [`model`]: construction of `H0`, `H1`, stabilizers, edge logical operators,
//!   symmetry generators, and disordered coupling tables;
//! - [`statevec`]: a dense statevector backend with the Trotter-step circuit,
//!   initial-state preparation, exact-evolution oracle, echo circuits, logical
//!   Bell encoding and tomography;
//! - [`freefermion`]: a Majorana single-particle backend for the `V_xx = 0`
//!   integrable limit, plus quasi-energy extraction;
//! - [`spectroscopy`]: FFT spectra, peak extraction and gap estimators;
//! - [`prethermal`]: first-order prethermal strong zero modes and their
//!   diagnostics;
//! - [`magnus`]: the Floquet-Magnus effective Hamiltonian terms and BCH
//!   residual scans;
//! - [`observables`]: excitation counting, edge-mode lifetimes and gap fits;
//! - [`scenario`]: declarative experiment configs and the run pipeline behind
//!   the command-line interface;
//! - [`hardware`]: small utilities for single-qubit gate folding (`U3`) and
//!   three-level readout correction.
//!
//! Sites are numbered `1..=N` externally. In dense amplitudes site 1 is the
//! most significant bit of the basis index.

pub mod dense;
pub mod error;
pub mod freefermion;
pub mod gates;
pub mod hardware;
pub mod magnus;
pub mod model;
pub mod observables;
pub mod pauli;
pub mod prethermal;
pub mod scenario;
pub mod spectroscopy;
pub mod statevec;

pub use error::{Error, Result};
pub use model::ModelParams;
pub use pauli::{PauliString, PauliSum};
pub use statevec::Statevector;
