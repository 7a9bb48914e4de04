//! Exact tools for studying `K_k`-factors in balanced `k`-partite graphs:
//! graph primitives, generators, an exact clique-factor solver, the
//! absorbing-set machinery and extremal-structure detection.

pub mod bounds;
pub mod constructions;
pub mod extremal;
pub mod graph;
pub mod params;
pub mod solver;
pub mod absorber;
