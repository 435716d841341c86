//! Variable step-size BDF2 time discretization for parabolic problems.
//!
//! The crate is organised around four pieces:
//!
//! * [`mesh`] builds prescribed nonuniform time meshes (uniform, graded,
//!   geometric, or user-supplied node lists) and the ratio statistics the
//!   stability theory consumes.
//! * [`stepper`] holds the variable-coefficient BDF2 difference, the
//!   trapezoidal and backward Euler starting steps, the implicit linear and
//!   semilinear steps and the [`integrate`](stepper::integrate) driver.
//! * [`problems`] defines the [`ParabolicProblem`](problems::ParabolicProblem)
//!   interface together with a 1D finite-difference heat problem, a 2D
//!   periodic semilinear (Allen–Cahn type) problem and scalar test equations.
//! * [`norms`], [`stability`] and [`harness`] measure errors, evaluate the
//!   step-size conditions and run whole convergence / stability studies.
//!
//! ```
//! use vsbdf2::mesh::TimeMesh;
//! use vsbdf2::problems::Heat1d;
//! use vsbdf2::stepper::{integrate, Mode, SolverConfig, StartScheme};
//! use vsbdf2::norms::error_report;
//!
//! let problem = Heat1d::new(20, 1.0).unwrap();
//! let mesh = TimeMesh::graded(1.0, 40, 3.0).unwrap();
//! let traj = integrate(&problem, &mesh, StartScheme::BackwardEuler, Mode::Linear,
//!                      &SolverConfig::default()).unwrap();
//! let report = error_report(&traj, &problem, "VSBDF2-BE").unwrap();
//! assert!(report.linf_h < 1e-3);
//! ```

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod harness;
pub mod mesh;
pub mod norms;
pub mod problems;
pub mod stability;
pub mod state;
pub mod stepper;
pub mod tridiag;

pub use error::{Error, Result};
pub use mesh::{MeshStats, TimeMesh};
pub use problems::ParabolicProblem;
pub use state::{Grid, StateVector};
pub use stepper::{integrate, Mode, SolverConfig, StartScheme, Trajectory};
