//! Spatial entanglement of an average thermal boson pair in a 1D harmonic
//! trap, split into left/right halves at a point.
//!
//! The cheap route evaluates a closed-form lower bound on the negativity of
//! the pair state at the balanced cut: lambda(T) = sqrt(<chi|chi>) / M, where
//! chi collects the coherent same-side bunching amplitudes of the thermal
//! mode mixture and M normalizes the average-pair weights. The expensive
//! route ([`oracle`]) rebuilds everything from explicit truncated Fock bases
//! and exact diagonalization, and certifies the cheap route where the two
//! can meet.
//!
//! Layers, bottom up:
//!
//! - [`hermite`]: trap eigenfunctions by stable recurrence
//! - [`quad`]: adaptive Gauss-Kronrod quadrature
//! - [`linalg`]: dense symmetric eigensolver and gram orthonormalization
//! - [`regions`]: residence probabilities and region-restricted overlaps
//! - [`thermo`]: occupations, chemical potential, certified truncation
//! - [`entanglement`]: the bound itself plus pure-pair entropies
//! - [`oracle`]: exact small-truncation cross-checks and certificates
//!
//! The crate is no_std (with `alloc`) unless the default `std` feature is on;
//! nothing here does IO.

#![cfg_attr(not(any(test, feature = "std")), no_std)]
// index loops here tie several structures to one mode index, parity tests
// stay written as `% 2`, and frozen reference constants keep their full
// decimal expansions
#![allow(
    clippy::needless_range_loop,
    clippy::manual_is_multiple_of,
    clippy::excessive_precision
)]

extern crate alloc;

pub mod entanglement;
pub mod hermite;
pub mod linalg;
pub mod oracle;
pub mod quad;
pub mod regions;
pub mod thermo;

pub use entanglement::{lambda_lower_bound, lambda_lower_bound_at, NegativityReport, PairWeighting};
pub use regions::{OverlapTable, RegionSplit};
pub use thermo::ThermalState;
