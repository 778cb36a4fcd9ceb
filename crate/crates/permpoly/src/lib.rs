//! Bivariate permanent polynomials of small simple graphs.
//!
//! For a graph `G` on `n` vertices with adjacency matrix `A` and complement
//! adjacency `Ā`, the bivariate permanent polynomial is
//!
//! ```text
//! P(G; x, λ) = per(x·I_n + λ·A + Ā)
//! ```
//!
//! This crate computes `P` exactly with 64-bit checked coefficient
//! arithmetic, enumerates all simple graphs up to a size bound one
//! isomorphism class at a time, and surveys entire orders for *copermanent
//! mates*: pairs of non-isomorphic graphs sharing the same polynomial. The
//! smallest mates live on 8 vertices, where exactly two of the 12,346
//! isomorphism classes collide pairwise.
//!
//! Modules:
//! - [`graph`]: bitset graphs and the graph6 codec,
//! - [`bipoly`]: dense triangular polynomials, fingerprints, text form,
//! - [`engine`]: Ryser inclusion–exclusion plus two independent oracles,
//! - [`enumerate`]: canonical forms, isomorph-free generation, ingestion,
//! - [`survey`]: fingerprint grouping, statistics, checkpoints.
//!
//! Built with the `parallel` feature (default), surveys and generation
//! fan out across graphs with rayon; without it everything runs
//! sequentially. Worker count never changes any output byte.

pub mod bipoly;
pub mod engine;
pub mod enumerate;
pub mod graph;
pub mod survey;

pub use bipoly::{BiPoly, Fingerprint, PolyError};
pub use engine::{bivariate_permanent, bivariate_permanent_naive, integer_permanent, EngineError};
pub use enumerate::{canonical_form, generate_all, read_graph6_stream, CanonicalGraph};
pub use graph::{Graph, Graph6Error};
pub use survey::{run_survey, CopermanentFamily, SurveyError, SurveyReport};
