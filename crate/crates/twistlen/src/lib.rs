//! Key-length estimation for Vigenère ciphertexts.
//!
//! The crate centers on the twist index T(M,m): split a text into m cosets by
//! position mod m, sort each coset's 26 relative letter frequencies, and
//! average (top-half mass minus bottom-half mass) over the cosets, scaled to
//! [0, 100]. Under the true key length the cosets are monoalphabetic and the
//! index spikes. Two refinements locate that spike more reliably than the raw
//! index: T+ subtracts the running mean of all shorter-m values, and T++
//! subtracts the mean of the two neighboring values.
//!
//! Alongside the twist family the crate implements the classical baselines:
//! index of coincidence with the Friedman length estimate, and Kasiski
//! repeated-n-gram distance analysis. A deterministic Monte-Carlo harness
//! compares the estimators' accuracy over corpus samples, and an
//! exact-arithmetic checker verifies the refinement monotonicity inequality
//! T(M,m) <= T(M,λm) when λ divides every m-coset size.
//!
//! Modules:
//! - [`text`]: normalization, encryption, coset partitions
//! - [`metrics`]: twist family, IC, Friedman, argmax estimation
//! - [`kasiski`]: repeated-n-gram distances and divisor census
//! - [`experiments`]: Monte-Carlo grids, failure breakdowns, monotonicity runs
//! - [`report`]: CSV export and terminal tables
//!
//! With the default `parallel` feature, grid and monotonicity runs fan out
//! over rayon; disabling it keeps the same APIs single-threaded with
//! bit-identical results.

pub mod error;
pub mod experiments;
pub mod kasiski;
pub mod metrics;
pub mod report;
pub mod text;

pub use error::{Error, Result};
