//! State-dependent values of quantum observables.
//!
//! Two notions of value are computed for observables of arbitrary
//! finite-dimensional composite systems:
//!
//! * Deutsch-Hayden matrix values `U_phi^dag B U_phi` ([`dhvalue`]),
//! * noncommutative values `{ f ; V_n }` built from the expectation
//!   function and its coordinate derivatives ([`ncvalue`]).
//!
//! [`twoqubit`] reproduces the closed forms for an entangled qubit pair and
//! [`continuum`] carries the two-particle EPR construction onto a periodic
//! grid. The guide under `book/` walks through each part; its code listings
//! are compiled and run as doctests of this crate.

pub mod continuum;
pub mod dhvalue;
pub mod error;
pub mod hilbert;
pub mod ncvalue;
pub mod trials;
pub mod twoqubit;

pub use error::{Error, Result};
pub use hilbert::{Matrix, Observable, Operator, StateVector, Unitary, C64};
pub use ncvalue::NCValue;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/spaces.md")]
    mod spaces {}
    #[doc = include_str!("../../../book/src/nc-values.md")]
    mod nc_values {}
    #[doc = include_str!("../../../book/src/dh-values.md")]
    mod dh_values {}
    #[doc = include_str!("../../../book/src/qubit-pair.md")]
    mod qubit_pair {}
    #[doc = include_str!("../../../book/src/grid.md")]
    mod grid {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
