//! Flip distances between triangulations of a convex polygon, and minimal
//! tetrahedral decompositions of the sphere obtained by gluing two such
//! triangulations along the polygon boundary.

pub mod family;
pub mod lpbound;
pub mod flipdist;
pub mod polygon;
pub mod sphere;
pub mod tetdecomp;

pub use polygon::{crosses, Diagonal, Flip, FlipPath, PolygonError, PolygonTriangulation, VertexId};
