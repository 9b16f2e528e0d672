//! Piecewise-linear cone constructions for spherical soap-film partitions.

pub mod geom;
pub mod ansatz;
pub mod cells;
pub mod convex;
pub mod evolver;
pub mod graph;
pub mod io;
pub mod lattice;
pub mod mass;
pub mod partition;
pub mod polytopes;
pub mod sphere_trig;
pub mod verify;

pub use geom::{S3Point, Vec3, Vec4};
pub use sphere_trig::{alpha, regular_side, Angle, GeodesicLength, IsogonalPolygon, PinnedSide};
