//! Exact-arithmetic coordinate charts on spaces of based rational maps to
//! flag varieties: the Poisson bivector and symplectic form in chart
//! coordinates, a divided-difference oracle recomputing the brackets from
//! polynomial data, integrable flows of symmetric x-functions, and the
//! combinatorics of symplectic leaves for the parabolic spaces.
//!
//! All identity checks run over arbitrary-precision rationals; the flow
//! integrator is the one deliberately floating-point component. Batch
//! verification parallelizes over sample points with rayon under the
//! `parallel` feature (enabled by default) and falls back to sequential
//! iteration without it.

pub mod cartan;
pub mod chart;
pub mod flows;
pub mod leaves;
pub mod mpoly;
pub mod oracle;
pub mod par;
pub mod poisson;
pub mod poly;
pub mod rat;
pub mod sample;
pub mod verify;

pub use cartan::{CartanDatum, CartanError, CartanSpec, Degree};
pub use chart::{from_polys, ChartError, ChartPoint, PolyChart};
pub use poisson::{
    bivector_matrix, bracket_coords, bracket_functions, jacobiator, rank, symplectic_matrix,
    ChartLayout, CoordIndex, CoordKind,
};
pub use rat::Rat;
