//! Supporting computations for the Lawrence-Bigelow family of homological
//! representations of surface mapping class groups: group-ring arithmetic,
//! composition-indexed bases, intersection pairings, quantum-factorial
//! embeddings, genericity checks, completed group rings, and explicit braid
//! group matrices (reduced Burau and Lawrence-Krammer-Bigelow).

pub mod braid;
pub mod combinatorics;
pub mod completion;
pub mod embeddings;
pub mod error;
pub mod homology;
pub mod linalg;
pub mod pairing;
pub mod ring;
pub mod surface;
pub mod verify;

pub use error::{Error, Result};
