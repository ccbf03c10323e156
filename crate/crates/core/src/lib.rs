//! Minimum cost polygon overlay with rectangular stock panels.
//!
//! The problem is solved in two phases. [`overlay`] tiles each polygon region
//! with a grid of whole stock panels anchored at a point of origin and emits
//! the irregular off-cuts where the grid meets the region boundary. [`nesting`]
//! then packs those off-cuts into as few extra panels as possible, driven by
//! one of the solvers in [`optimizers`]: a deterministic greedy search, a
//! Monte Carlo bit-flip search, or a generational genetic algorithm. The two
//! stochastic solvers share the cluster-ID chromosome from [`encoding`].
//!
//! The crate is `no_std` and only needs `alloc`. Enable the `serde` feature to
//! derive `Serialize`/`Deserialize` on the data types.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod encoding;
pub mod error;
pub mod geometry;
pub mod nesting;
pub mod optimizers;
pub mod overlay;

pub use crate::error::{Error, Result};
