//! Sampling and reconstruction of band-limited signals on weighted graphs
//! from their averages over vertex clusters.
//!
//! A signal is band-limited (in the Paley-Wiener space `PW_ω`) when it lies
//! in the span of the Laplacian eigenvectors with eigenvalue at most `ω`.
//! Given a disjoint cover of the vertex set by connected clusters, the
//! normalised cluster sums `⟨f, ξ_j⟩` form a frame on `PW_ω` as soon as
//! `γ = ((1+α)/α)(ω/Λ_Ξ) < 1`, where `Λ_Ξ` is the smallest first nonzero
//! eigenvalue over the induced clusters. The crate provides:
//!
//! - [`graph`]: weighted graphs, validation, induced subgraphs, gradient norm
//! - [`spectral`]: Laplacian, Jacobi eigendecomposition, `PW_ω` projection
//! - [`partition`]: cluster covers, average functionals, Poincaré checks
//! - [`frame`]: frame bounds of the averages on `PW_ω`
//! - [`reconstruct`]: frame iteration and canonical dual reconstruction
//! - [`splines`]: variational average splines and their convergence
//! - [`generate`], [`io`], [`experiment`]: inputs, file formats and reports

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod error;
pub mod experiment;
pub mod frame;
pub mod generate;
pub mod graph;
pub mod io;
pub mod jacobi;
pub mod partition;
pub mod reconstruct;
pub mod spectral;
pub mod splines;

pub use error::{Error, Result};
pub use frame::FrameSystem;
pub use graph::{GraphSignal, WeightedGraph};
pub use partition::ClusterPartition;
pub use spectral::{Laplacian, PwSpace, SpectralDecomposition};
