#![allow(clippy::needless_range_loop)]

//! Numerical toolkit for the zero sets of trigonometric polynomials:
//! positivity witnesses and sign-change certificates on circle and torus,
//! Caratheodory decompositions of moment curves, closed-form radius bounds,
//! and exact cubature rules.

pub mod acceptance;
pub mod bounds;
pub mod caratheodory;
pub mod cubature;
mod error;
pub mod linprog;
pub mod rng;
pub mod sweep;
pub mod trig;
pub mod witness;

pub use bounds::BoundReport;
pub use caratheodory::{ConvexPositionReport, CurveDecomposition, OrbitPoints};
pub use cubature::{CubatureRule, ExactnessEntry};
pub use error::{Error, Result};

pub use linprog::{HullCertificate, LpOutcome, LpProblem, PivotRule, Sense, SolverOptions};
pub use trig::{
    circle_distance, curve_point, torus_diameter, torus_distance, Frequency, GeodesicBall,
    Interval, Region, Spectrum, TorusPoint, TrigPoly,
};
pub use witness::{
    DiameterSearch, PositivityOutcome, PositivityWitness, SignChangeCertificate, ThresholdRecord,
    WitnessOptions,
};
