//! Finite potent endomorphisms, their traces and determinants, and the
//! residues and local symbols built from them.

pub mod arith;
pub mod ast;
pub mod det;
pub mod error;
pub mod expo;
pub mod gen;
pub mod loops;
pub mod operator;
pub mod residue;
pub mod selftest;
pub mod wire;

pub use error::{Error, Result};
