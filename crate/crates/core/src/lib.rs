//! Numerical toolkit for the mean curvature flow of sphere slices inside
//! rotationally symmetric submanifolds of C^n generated by a plane profile
//! curve w(s).
//!
//! The crate has three layers that deliberately overlap:
//!
//! * closed forms — the slice mean curvature `-G(s) d/ds`, the round-sphere
//!   formula, and the small-s limits ([`curvature`]);
//! * an independent oracle — the same quantities recomputed from the raw
//!   embedding by central differences and orthogonal projection ([`oracle`]);
//! * dynamics — the reduced flow ODE df/dt = -G(f) with extinction and
//!   convergence detection ([`flow`]).
//!
//! Everything numerical is generic over the scalar type through [`Real`]
//! (`f32` or `f64`); the aliases at the crate root fix `f64`, which is what
//! the bundled verification suite ([`verify`]) and the CLI run at.

pub mod curvature;
pub mod error;
pub mod flow;
pub mod oracle;
pub mod profile;
pub mod quad;
pub mod scalar;
pub mod spline;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

pub use num_complex::Complex;

/// Carrier for profile values w and w'.
pub type ComplexValue<T> = Complex<T>;

pub use curvature::{AmbientVector, CurvatureSample, SpherePoint};
pub use flow::{DecayRate, FlowConfig, FlowTrace, Termination};
pub use oracle::{EmbeddingChart, FrameAtPoint};
pub use profile::{ExpanderParams, ProfileCurve};

// Concrete f64 aliases.
pub type ExpanderParams64 = ExpanderParams<f64>;
pub type ProfileCurve64 = ProfileCurve<f64>;
pub type SpherePoint64 = SpherePoint<f64>;
pub type AmbientVector64 = AmbientVector<f64>;
pub type CurvatureSample64 = CurvatureSample<f64>;
pub type EmbeddingChart64 = EmbeddingChart<f64>;
pub type FlowConfig64 = FlowConfig<f64>;
pub type FlowTrace64 = FlowTrace<f64>;
