//! Welded Milnor invariants of string links and links given as Gauss codes.
//!
//! The pipeline runs from Gauss codes ([`gauss`]) through a Wirtinger
//! presentation to longitudes expanded in exact truncated power series
//! ([`magnus`]), and from there to Milnor invariants, the three equivalent
//! `k`-reduced comparisons, and the `k`-reduced free action ([`invariants`],
//! [`action`]). Basic commutators ([`hall`]) and the sorted arrow-presentation
//! realizer ([`arrows`]) act as independent cross-checks and instance
//! generators.
//!
//! ```
//! use welded_milnor::gauss::StringLinkCode;
//! use welded_milnor::invariants::{k_equal, milnor_table, Mode};
//!
//! let code: StringLinkCode = "1: U1+ / 2: O1+".parse().unwrap();
//! let table = milnor_table(&code, 1, 2).unwrap();
//! assert_eq!(table.to_string(), "mu(2,1) = 1\n");
//! let trivial = StringLinkCode::trivial(2);
//! assert!(!k_equal(&code, &trivial, 1, Mode::Action).unwrap().equal);
//! ```

pub mod action;
pub mod arrows;
pub mod exec;
pub mod gauss;
pub mod hall;
pub mod integer;
pub mod invariants;
pub mod magnus;
pub mod words;

pub use exec::Execution;
pub use integer::Integer;
pub use magnus::{expand, Monomial, TruncatedSeries, TruncationPolicy};
pub use words::{Sign, Word};
