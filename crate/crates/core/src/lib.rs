//! Exact computations on discriminantal arrangements of generic hyperplane
//! arrangements: characteristic polynomials, cone counts, chamber catalogs
//! and isomorphism classes.
//!
//! All arithmetic is exact. Rationals are arbitrary precision and feasibility
//! questions are settled by an integer simplex method.

pub mod affine;
pub mod chambers;
pub mod charpoly;
pub mod concurrency;
pub mod discriminantal;
pub mod error;
pub mod linalg;
pub mod normal_system;
pub mod subsets;

pub use affine::{
    are_isomorphic_trivial, cross_check, region_census, simplex_signature, special_point,
    swap_check, vertex_orders, RegionCensus, VertexOrderTable,
};
pub use chambers::{
    adjacency, antipodal_classes, classify_b, enumerate_chambers, ChamberCatalog,
    Classification, SignVector,
};
pub use charpoly::{
    combinatorial_charpoly, iso_class_count, poset_charpoly, whitney_charpoly, zaslavsky_regions,
    CharPolynomial,
};
pub use concurrency::{
    base_collection, combinatorial_rank, concurrency_closure, concurrency_orders,
    enumerate_closed_collections, is_concurrency_free, ConcurrencyVerdict, SubsetCollection,
};
pub use discriminantal::DiscriminantalArrangement;
pub use error::{Error, Result};
pub use linalg::{Rational, RationalMatrix, Sign};
pub use normal_system::{random_normal_system, Arrangement, NormalSystem};
