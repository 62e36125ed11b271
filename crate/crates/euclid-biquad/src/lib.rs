//! Verification toolkit for Euclidean ideal classes in real biquadratic
//! fields K = Q(√q, √(kr)).
//!
//! The crate mechanically checks every desk-checkable ingredient of the
//! construction: subfield class numbers (by two independent routes), the
//! Kubota unit index, the Hilbert class field and its conductor,
//! unramifiedness, quadratic-residue witness primes, the CRT-assembled
//! integer u with its certificate, prime splitting profiles, and empirical
//! Chebotarev densities.
//!
//! See the `book/` directory for a guided tour; the code snippets there run
//! as doc-tests.

pub mod arith;
pub mod biquad;
pub mod error;
pub mod kelement;
pub mod quadfield;
pub mod report;
pub mod splitting;
pub mod witness;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }
    chapter!(quadratic_fields, "../../../book/src/quadratic-fields.md");
    chapter!(class_numbers, "../../../book/src/class-numbers.md");
    chapter!(biquadratic, "../../../book/src/biquadratic.md");
    chapter!(splitting, "../../../book/src/splitting.md");
    chapter!(witness, "../../../book/src/witness.md");
}
