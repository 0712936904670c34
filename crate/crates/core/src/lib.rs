//! Exact self-avoiding walk enumeration on periodic graphs, trees and Cayley
//! graphs, with rigorous bounds on the connective constant.

pub mod cayley;
pub mod enumerate;
pub mod error;
pub mod estimate;
pub mod graph;
pub mod report;
pub mod select;
pub mod transforms;

pub use enumerate::{
    count_bridges, count_k_extendable, count_saws, count_saws_for_bounds, count_saws_from, count_saws_two_point,
    generating_function_partial, mean_square_displacement, BridgeSeries, DisplacementSeries, EnumOptions, SawSeries,
    SeriesScope, TwoPointSeries,
};
pub use error::{EnumError, EstimateError, GraphError, GroupError, SelectError};
pub use graph::{builtin, builtin_spec, GraphOracle, PeriodicGraph, PeriodicGraphSpec, VertexKey};
pub use select::{resolve_graph, AnyGraph};
