//! Comparator networks built from k-sorters.
//!
//! - [`netcore`]: comparators, networks, application to key sequences and the
//!   `knet` text format.
//! - [`construct`]: triangle and stooge-style network generators.
//! - [`verify`]: 0-1 principle verification and minimal-pass search.
//! - [`parallel`]: disjoint-round merge schedules.
//! - [`bounds`]: comparison-count bounds and a merge-insertion sorter.
//! - [`cli`]: the `knet` command-line front end.

pub mod bounds;
pub mod cli;
pub mod construct;
pub mod error;
pub mod netcore;
pub mod parallel;
pub mod verify;

pub use error::{Error, Result};
