//! Homology-changing edge percolation on finite surface graphs.
//!
//! The crate is `no_std` (with `alloc`) and carries every algorithm: surface
//! graphs and their duals, bit-packed GF(2) linear algebra, coset enumeration
//! of van Dyck quotients, dual-pair Newman-Ziff sweeps, binomial convolution
//! into the grand-canonical ensemble, and threshold estimators.
//!
//! File formats, threading and the command-line driver live in the `homperc`
//! companion crate.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` deliberately rejects NaN; numeric kernels index by position.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod bitmatrix;
pub mod coset;
pub mod ensemble;
mod error;
pub mod estimators;
pub mod graph;
pub mod homology;
mod linalg;
mod math;
pub mod quotient;
pub mod sweep;
pub mod unionfind;

pub use bitmatrix::BitMatrix;
pub use coset::{todd_coxeter, CosetTable, GroupPresentation, Letter, Word};
pub use ensemble::{
    binomial_weights, convolve, BinomialWindow, GrandCanonicalCurve, PGrid, DEFAULT_M,
};
pub use error::{Error, Result};
pub use estimators::{
    combine_replicates, crossing_fit, degree_scan, rate_deviation_report, size_scaling_extrapolate,
    slope_scaling, FitCurve, FitResult, ScalingResult, ShiftMode, SlopeScaling,
};
pub use graph::{
    build_dual, build_torus, incidence_matrices, DualPair, IncidencePair, SurfaceGraph, Violation,
};
pub use homology::{
    code_params, covering_set_distance, cycle_distance, duality_check, gf2_rank, peierls_bound,
    peierls_bound_dual, restricted_rank, CodeParams, CoveringReport, CoveringSearch,
    DistanceOptions,
};
pub use quotient::{
    build_quotient_graph, generate_family, random_relator, FamilyMember, FamilyReport, FamilySearch,
};
pub use sweep::{
    aggregate, run_sweep, sweep_rng, Accumulator, CanonicalSeries, Observable, SweepRecord, Sweeper,
};
pub use unionfind::UnionFind;
