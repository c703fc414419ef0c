//! Exact Gauss decomposition in elementary Chevalley groups over commutative
//! rings of stable rank 1.
//!
//! The crate builds root systems of every type, a Chevalley basis with its
//! structure constants, a word-rewriting kernel (collection, Levi splitting)
//! and matrix representations that serve as independent verification oracles.

pub mod constants;
pub mod error;
pub mod gauss;
pub mod group;
pub mod json;
pub mod repr;
pub mod ring;
pub mod roots;
pub mod words;

pub use error::{Error, Result};
pub use gauss::{conjugate_to_uhv, decompose_rank1, gauss_decompose, unitriangular5, GaussForm, UhvForm, Unitri5Form};
pub use group::Group;
pub use repr::{Oracle, RepKind, Representation};
pub use ring::{Elem, Ring};
pub use roots::{CartanType, RootId, RootSystem};
pub use words::{GenKind, Generator, TorusParams, UnipotentParams, Word};
