//! Masures as finite atlases of model apartments.
//!
//! [`TreeAtlas`] covers products of windows in regular trees, where every
//! geodesic through the window is a chart and transitions are computed from
//! the combinatorics of the trees. [`GluedAtlas`] holds explicit charts and
//! gluing maps read from a file. Axiom checkers return reports that are
//! verdicts within the window and truncation, not proofs.

pub mod atlas;
pub mod checks;
pub mod glued;
pub mod retract;
pub mod tree;

pub use atlas::{AtlasError, End, Gluing, Location, MasurePoint, TreeAtlas, DEFAULT_CHART_LIMIT};
pub use checks::{AxiomReport, CheckBounds, ThicknessReport};
pub use glued::{parse_config, GluedAtlas, GluedChart, GluingEntry, LoadError};
pub use retract::{Center, Fold, FoldedSegment};
pub use tree::{TreeLoc, TreeWindow};
