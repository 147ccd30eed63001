//! Steady states, emission observables, resonance-fluorescence spectra and
//! distance-estimation bounds for two coupled, coherently driven two-level
//! emitters.
//!
//! Rates are plain `f64` in a common unit, usually the local decay rate.
//! The exact route goes through the 16x16 Liouvillian in [`lindblad`];
//! [`effective`] holds the closed-form perturbative models that are accurate
//! when the single-excitation splitting dominates.
//!
//! ```
//! use dimer_fluorescence::{lindblad, observables, SystemParams};
//!
//! let p = SystemParams::from_mixing(1000.0, std::f64::consts::FRAC_PI_4)
//!     .unwrap()
//!     .with_gamma12(0.999)
//!     .with_omega(100.0);
//! let rho = lindblad::exact_steady_state(&p).unwrap();
//! let g2 = observables::g2_zero(&rho).unwrap();
//! assert!(g2 > 1.0);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod effective;
pub mod error;
pub mod estimation;
pub mod exec;
pub mod linalg;
pub mod lindblad;
pub mod observables;
pub mod params;
pub mod spectrum;

pub use effective::{combined_steady, EffectiveRates, EffectiveSteadyState};
pub use error::{Error, Result};
pub use estimation::{fisher_information, fisher_map, DetuningFrame, FisherOptions, FisherReport};
pub use exec::Exec;
pub use lindblad::{exact_steady_state, Basis, DensityMatrix, Liouvillian};
pub use observables::EmissionObservables;
pub use params::{Geometry, GeometryMode, SystemParams};
pub use spectrum::{rf_spectrum, DressedLadder, SpectralSeries};
