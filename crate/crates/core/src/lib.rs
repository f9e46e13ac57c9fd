//! Exact toolkit for half-dependent sets on the tile-adjacency graphs of the
//! eleven edge-to-edge regular and semi-regular plane tessellations.
//!
//! A set `S` of tiles is *half-dependent* when every tile in `S` shares an
//! edge with at most `floor(d/2)` other tiles of `S`, `d` being its degree in
//! the adjacency graph. The crate builds finite quotients of the infinite
//! adjacency graphs (open patches, tori and a Klein-bottle quotient of the
//! triangular tiling), solves the maximum half-dependent set problem exactly,
//! and derives rational upper bounds on the limiting density.
//!
//! Everything that ends up in a report is an exact fraction; floating point
//! is used only for drawing.

pub mod bounds;
pub mod error;
pub mod halfdom;
pub mod io;
pub mod lp;
pub mod quotient;
pub mod rational;
pub mod render;
pub mod solver;
pub mod tables;
pub mod tessellation;

pub use bounds::{aggregated_lp_bound, class_incidence, BoundReport, ClassIncidence, Granularity};
pub use error::{Error, Result};
pub use halfdom::{
    constraint_system, deficiency, density, is_half_dependent, DeficiencyReport, Selection,
};
pub use lp::{lp_optimum, LinearSystem, LpSolution};
pub use quotient::{build_klein_3_6, build_open, build_torus, degree_histogram, Quotient, QuotientGraph, VertexRecord};
pub use rational::Rational;
pub use solver::{
    density_table, pinned_density_bound, solve_exact, weighted_density_bound, Method, OptResult,
    SolveOptions, Status,
};
pub use tessellation::{catalog, cluster_spec, validate_cluster, ClusterSpec, TessKind};
pub use tables::{reproduce_table, TableId, TableReport, TableSpec};
pub use render::{render_svg, RenderSpec};
