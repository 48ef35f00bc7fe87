//! Exact shadows of sparse polytopes.
//!
//! Builds boxes and Klee-Minty cubes in inequality form, projects them to the
//! plane spanned by two objective vectors, and runs the parametric (shadow
//! vertex) simplex sweep over them. All arithmetic is exact rational.

pub mod cli;
pub mod km_cube;
pub mod linalg;
pub mod parametric;
pub mod polytope;
pub mod render;
pub mod shadow;
pub mod verify;

pub use km_cube::{KmParams, VertexCode};
pub use linalg::{RatMatrix, Rational};
pub use parametric::{gass_saaty_path, shadow_vertex_solve, ParametricPath};
pub use polytope::{make_box, make_klee_minty, Basis, BoxBounds, HPolytope};
pub use shadow::{hull2d, shadow_of_vertices, Point2, ProjectionPair, ShadowPolygon};
