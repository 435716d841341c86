//! Configuration-driven convergence, stability and error-evolution studies.

mod config;
mod study;
mod tables;

pub use config::{OutputFormat, ProblemKind, SchemeKind, StudyConfig};
pub use study::{
    build_mesh, build_problem, error_evolution_csv, mode_for, run_convergence_study,
    run_error_evolution, run_single, run_stability_sweep, stability_csv, stability_summary,
    ConvergenceStudy, ErrorSeries, StabilitySeries, StudyRow, BOUNDEDNESS_THRESHOLD,
};
pub use tables::{emit_table, sci, ConvergenceTable, TableRow, FUNCTIONALS};
