//! Exact Ringel–Hall algebra computations for quiver representations over
//! finite fields.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is pure
//! computation: finite-field arithmetic, enumeration and classification of
//! representations, Hall numbers, the Hopf structure on the Hall algebra,
//! identity checkers and the Frobenius-orbit counts. IO, timing, threads and
//! file formats live in the `hallforge` companion crate.
//!
//! With the default `std` feature the memo tables inside [`hall::HallAlgebra`]
//! are guarded by `std::sync::RwLock`, so one algebra can be shared between
//! worker threads. Without it they fall back to `RefCell`.

#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod census;
pub mod coef;
mod error;
pub mod gf;
pub mod hall;
pub mod linalg;
mod memo;
pub mod quiver;
pub mod rep;
pub mod verify;

pub use coef::HallCoef;
pub use error::{Error, Result};
pub use gf::{FieldElement, FieldSpec, GaloisField};
pub use census::{CensusRow, KacCounter};
pub use hall::{AntipodeConvention, HallAlgebra, HallElement, TensorElement, Twist};
pub use verify::IdentityReport;
pub use quiver::{DimVector, Quiver};
pub use rep::{ClassId, Guards, IsoClass, OrbitCensus, RepCategory, Representation};
