#![no_std]
#![doc = "Finite Ramsey machinery for creature-forcing pure candidates: arrow\ncertification, product and product-tree homogenizers, Hales-Jewett search,\nthe three FP creature spaces and their executable pigeonhole reductions."]

extern crate alloc;

pub mod arrow;
pub mod axioms;
pub mod bits;
pub mod creature;
pub mod error;
pub mod hj;
pub mod pigeonhole;
pub mod product;
pub mod sample;
pub mod subset;
pub mod tree;

pub use error::{Error, Result};
