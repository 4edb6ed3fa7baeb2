//! Exact-arithmetic toolkit for symmetric Sperner labelings and envy-free
//! division of an interval cake among players who may prefer an empty piece.
//!
//! The pipeline: subdivide the simplex of cut vectors ([`triangulation`]),
//! read each vertex as a division and ask its owner which pieces they accept
//! ([`preferences`], [`labeling`]), find a simplex whose label sets admit
//! distinct representatives ([`sperner_engine`]), and turn it into an
//! assignment of pieces ([`solver`]).

pub mod error;
pub mod io;
pub mod labeling;
pub mod preferences;
pub mod rational_geometry;
pub mod solver;
pub mod sperner_engine;
pub mod triangulation;
pub mod verify;

pub use error::{Error, Result};
pub use rational_geometry::{LabelSet, Permutation, Point, Rational};
pub use triangulation::Triangulation;
