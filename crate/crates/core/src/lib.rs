//! Zeta functions of cubic threefolds over finite fields of odd characteristic,
//! of their Fano surfaces of lines, and of their intermediate Jacobians.
//!
//! The pipeline is: find a rational line on the cubic ([`cubic`]), move it to
//! `{x1 = x2 = x3 = 0}` and read off the conic bundle ([`cubic::normalize`]), count
//! the signed difference `N_r(C_L) - N_r(Gamma_L)` on the discriminant quintic for
//! r = 1..5 ([`counting`]), and rebuild the Weil polynomials with exact integer
//! algebra ([`weil`]). [`oracle`] holds brute-force counts for cross-checking.
//!
//! The crate is `no_std` (it needs `alloc`); parallel drivers, file formats and the
//! command line live in the `fanozeta` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod counting;
pub mod cubic;
pub mod error;
pub mod field;
pub mod form;
mod fp_poly;
pub mod oracle;
pub mod presets;
pub mod projective;
pub mod weil;

pub use counting::{count_all, count_difference, CountKernel, CountReport, CountRow, Tally};
pub use cubic::{contains_line, find_rational_line, normalize, CubicForm, Line, LineFrame};
pub use error::{CountError, FieldError, GeometryError, WeilError};
pub use field::{FieldDesc, FqElem, Squareness};
pub use weil::{RationalValue, WeilData, WeilPolynomial};
