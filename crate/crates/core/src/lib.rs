//! List colorings of Kneser graphs: constructions, colorings, bounds on the
//! choice number, and exact oracles that check them on small instances.

pub mod adversary;
pub mod arith;
pub mod choosability;
pub mod coloring;
pub mod cover;
pub mod error;
pub mod experiment;
pub mod random_map;
pub mod setfam;
pub mod turan;

pub use error::{Error, Result};
pub use setfam::{build_kneser, GroundParams, KSet, KneserGraph, SetFamily};
