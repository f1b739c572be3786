//! The model apartment: walls `M(α, k)` over value groups `Γ_α = d·Z`,
//! enclosures, special points, the affine Weyl group action, sector faces and
//! chimneys with their germs.
//!
//! Everything is computed on the finite root set `Δ_H` of roots of height at
//! most `H`; results carry the truncation they were computed at.

pub mod chimney;
pub mod enclosure;
pub mod model;

pub use chimney::{Chimney, ChimneyClass, LocalFacet, SectorFace};
pub use enclosure::{AffineMap, EnclosureRep, HalfSpace, SpecialReport};
pub use model::{ApartmentError, ApartmentModel, ModelConfig, ModelRoot, DEFAULT_HEIGHT};
