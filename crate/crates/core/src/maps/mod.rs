//! Constellations as rotation systems, their duals, and the half-edge maps
//! shared with nebulas.

mod arborescence;
mod constellation;
pub mod dot;
mod halfedge;
mod trees;

pub use arborescence::Arborescence;
pub use constellation::{is_transitive, product, Constellation};
pub use halfedge::{key, unkey, HalfEdge, HalfEdgeMap, VertexColor};
pub use trees::{TreePointedConstellation, TreeRootedConstellation};
