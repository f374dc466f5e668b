//! Measures, bounds, and extremal search for large-distance graphs.
//!
//! The large-distance graph of a measurable set `A` in d-dimensional
//! Euclidean space has the points of `A` as vertices and an edge between
//! every pair of points at distance strictly greater than 2. This crate
//! provides:
//!
//! - exact and sampled measures of planar regions built from disks,
//!   annulus clips, and half-plane clips ([`geom`]);
//! - Monte Carlo and grid estimators for the edge measure of such a
//!   graph, clique witnesses and certificates, and step-graphon
//!   densities ([`graph`]);
//! - the closed-form bound ledger on the annulus diameter range
//!   `[2*sqrt(2), 4]`, with identity and monotonicity verifiers
//!   ([`bounds`]);
//! - circular and axis symmetrization of rasterized sets with
//!   diameter-contraction checks ([`symmetry`]);
//! - extremal constructions and stochastic search: the closed-form
//!   annulus cap, simulated annealing over polar rasters, and
//!   parametric families of clique-free configurations ([`search`]);
//! - the end-to-end verification suite used by the CLI ([`verify`]).
//!
//! All randomized routines take an explicit `u64` seed and are
//! deterministic for a fixed (seed, samples, stream count) triple.

pub mod bounds;
pub mod error;
pub mod geom;
pub mod graph;
pub mod raster;
pub mod search;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};
