//! Symmetric matrices with prescribed spectra and prescribed graph sparsity
//! patterns.
//!
//! The crate constructs and certifies matrices in `S(G)` — real symmetric
//! matrices whose off-diagonal support is exactly the edge set of a graph
//! `G` — with prescribed eigenvalues, and assembles join and partial-join
//! matrices achieving few distinct eigenvalues. Every construction returns a
//! [`cert::RealizationCertificate`] whose residuals, margins and SSP status
//! are recomputed from the final matrix, never trusted from intermediate
//! state.
//!
//! Capabilities, each with a runnable example under `examples/`:
//!
//! - `jacobi_reconstruction` — tridiagonal (path) matrices from a spectrum
//! - `tree_homotopy` — Newton solves on the isospectral tree manifolds
//! - `decay_rates` — eigenvector decay-rate table for injective schedules
//! - `ssp_perturbation` — spectrum-preserving edge addition under the SSP
//! - `generic_realization` — certified nowhere-zero realizations
//! - `cycle_spectra` — the alternating-pattern cycle IEP and realizations
//! - `compatibility_search` — compatible 0-1 multiplicity matrix search
//! - `two_eigenvalue_join` — join matrices with exactly two eigenvalues
//! - `partial_join` — spectrum-extending partial-join assembly
//! - `wheel` — wheel-graph multiplicity list via cycle doubling
//!
//! The `iepg` binary exposes the same operations as subcommands with JSON
//! input/output and reproducible seeds.

pub mod cert;
pub mod cli;
pub mod error;
pub mod graph;
pub mod joinbuild;
pub mod multiplicity;
pub mod realize;
pub mod ssp;
pub mod symmat;

pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
pub use symmat::{Spectrum, SymMatrix};
