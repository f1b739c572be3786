//! The twin buildings at infinity of a tree atlas.
//!
//! Chambers at infinity are ends of the window, taken with a sign. Faces of
//! sectors are compared through their ends, and a facet at infinity of type
//! `J` has a façade whose apartments are the quotients `A / V_J`.

pub mod distance;
pub mod facade;
pub mod parallel;
pub mod quotient;

use masure_atlas::AtlasError;
use thiserror::Error;
use tits_cone::Sign;

pub use distance::{
    check_distance_table, check_opposite_distance, check_opposite_distances, check_twin_tables, check_twinning, check_w_distance, d_minus, d_plus, d_star, distance, germs,
    OppositeDistance, SectorGerm, TwinTables, TwinningReport,
};
pub use facade::{compare, window_graph, Facade, GraphComparison};
pub use parallel::{
    check_apartments_at_infinity, check_wall_coherence, face_toward, parallel, unique_face_at, Ends, FacetAtInfinity,
};
pub use quotient::QuotientApartment;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InfinityError {
    #[error(transparent)]
    Atlas(#[from] AtlasError),
    #[error(transparent)]
    Apartment(#[from] apartment::ApartmentError),
    #[error("germs of signs {0:?} and {1:?} do not fit this distance")]
    Signs(Sign, Sign),
    #[error("{0:?} is not an end of the window")]
    BadEnd(Vec<usize>),
    #[error("{0:?} does not describe a facet at infinity")]
    BadFacet(Vec<Option<usize>>),
    #[error("type {0:?} has no quotient apartment")]
    BadType(Vec<usize>),
    #[error("the germs are not opposite in the given chart")]
    NotOpposite,
    #[error("charts disagree on the face")]
    NotUnique,
}
