//! Category rings `R^{C_k}` of the equivariant bootstrap generators for
//! cyclic group actions, and homological algebra in graded modules over them.
//!
//! The pipeline is: [`presentation`] builds generators and relations from the
//! Mackey, multiplication and Frobenius relations; [`normalform`] completes a
//! presentation into a ring with a finite Z-basis and a structure-constant
//! table; [`homalg`] works with Z/2-graded finitely presented right modules
//! over that ring (Hom, resolutions, Ext, projective dimension, UCT terms).

pub mod error;
pub mod group;
pub mod homalg;
pub mod intmat;
pub mod normalform;
pub mod presentation;
pub mod serial;

pub use error::{Error, Result};
