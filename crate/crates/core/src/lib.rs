//! Flat conformal metrics on the punctured disk.
//!
//! A developing map `f(w) = w^alpha psi(w)` or `f(w) = c log w + psi(w)` with
//! a truncated Laurent series `psi` defines the flat metric `|f'(w)|^2 |dw|^2`.
//! This crate reduces such a metric to one of three normal forms (a cone, a
//! cylinder, or a log pole), builds the normalizing coordinate change as a
//! series, measures area growth near the puncture and realizes the symmetry
//! group of each normal form.
//!
//! ```
//! use flatsing::{classify::classify, devmap::DevelopingMap, LaurentSeries};
//!
//! let map = DevelopingMap::with_holonomy(0.5, LaurentSeries::one(16))?;
//! let (form, _change) = classify(&map, 16)?;
//! assert_eq!(form.to_string(), "conical(beta = -0.5)");
//! # Ok::<(), flatsing::Error>(())
//! ```
//!
//! Runnable examples, one per capability:
//!
//! - `classify_developing_maps`: normal forms and normalizing changes
//! - `third_form_recursion`: the log-pole coefficient recursion and root choice
//! - `area_growth`: area of shrinking annuli and the fitted growth law
//! - `symmetry_groups`: elements, group laws and invariance of each family
//! - `flatness_check`: curvature residual of model and random metrics
//! - `roundtrip_uniqueness`: invariants under random coordinate changes
//!
//! The `flatsing` binary exposes the same operations on JSON files.

pub mod area;
pub mod classify;
pub mod cli;
pub mod devmap;
pub mod error;
pub mod sampling;
pub mod series;
pub mod symmetry;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use series::{LaurentSeries, Tolerance};
