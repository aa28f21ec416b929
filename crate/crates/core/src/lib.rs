//! Counting 3-colorings of triangle-free plane graphs: embeddings,
//! exact counting, laminar pentagon families, color transition matrices
//! and lower-bound verification.

pub mod bounds;
pub mod coloring;
pub mod generators;
pub mod laminar;
pub mod plane_graph;
pub mod transition;

pub use bounds::{verify, BoundReport, Verdict, VerifyOptions};
pub use coloring::{count_3_colorings, Coloring, CountOptions, CountResult};
pub use generators::{Family, GeneratorSpec};
pub use laminar::{extract, CycleFamily, LaminarOutcome};
pub use plane_graph::{Cycle, GraphError, PlaneGraph};
pub use transition::{Matrix5, TransitionMatrix};
