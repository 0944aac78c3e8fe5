//! Classification of finite point sets in R^3 for the Borsuk partition and
//! Vazsonyi diameter problems, together with generation, certification and
//! numerical realization of involutive polyhedral graphs (the combinatorial
//! skeletons of Reuleaux polyhedra).

pub mod borsuk;
pub mod error;
pub mod generator;
pub mod io;
pub mod geometry;
pub mod graph;
pub mod realize;

pub use error::{Error, Result};
