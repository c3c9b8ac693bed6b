//! Geometric-progression-free subsets of F_q[x].
//!
//! The crate builds finite fields and the polynomial ring over them, factors
//! polynomials, constructs the greedy progression-free set and checks it, and
//! evaluates the densities and density bounds attached to these sets as exact
//! rational enclosures.
//!
//! ```
//! use gpfree::{factorize, field_of_order, parse_poly};
//! use gpfree::density::greedy_density;
//! use gpfree::progfree::greedy_member;
//!
//! let f3 = field_of_order(3)?;
//! let f = parse_poly(&f3, "x^4+2*x^3+x^2")?; // x^2 (x+1)^2
//! assert_eq!(factorize(&f)?.exponents().collect::<Vec<_>>(), [2, 2]);
//! assert!(!greedy_member(&f)?);
//!
//! assert_eq!(greedy_density(3, 6)?.rendered, "0.747027");
//! # Ok::<(), gpfree::Error>(())
//! ```

pub mod density;
pub mod error;
pub mod factor;
pub mod ff;
pub mod numeric;
pub mod polyring;
pub mod progfree;
pub mod tables;

pub use error::{Error, Result};
pub use factor::{factorize, is_irreducible, Factorization};
pub use ff::{field_of_order, make_field, FieldElem, FieldSpec};
pub use numeric::{render_decimal, Interval, Rat};
pub use polyring::{parse_poly, NormValue, Poly};
