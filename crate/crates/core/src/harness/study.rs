use rayon::prelude::*;

use super::config::{ProblemKind, SchemeKind, StudyConfig};
use super::tables::{sci, ConvergenceTable, FUNCTIONALS};
use crate::error::Result;
use crate::mesh::TimeMesh;
use crate::norms::{error_report, observed_order, ErrorReport};
use crate::problems::{Heat1d, ParabolicProblem, Semilinear2d};
use crate::stability::{stability_certificate, Certificate};
use crate::stepper::{integrate, Mode, Trajectory};

/// Growth `max_n |U^n| / |U^0|` above which a series is not called bounded.
pub const BOUNDEDNESS_THRESHOLD: f64 = 1.5;

pub fn build_problem(config: &StudyConfig) -> Result<Box<dyn ParabolicProblem>> {
    Ok(match config.problem {
        ProblemKind::Heat1d => Box::new(Heat1d::new(config.cells(), config.b)?),
        ProblemKind::Semilinear2d => Box::new(Semilinear2d::new(config.cells(), config.epsilon)?),
    })
}

pub fn mode_for(config: &StudyConfig) -> Mode {
    match config.problem {
        ProblemKind::Heat1d => Mode::Linear,
        ProblemKind::Semilinear2d => Mode::Semilinear,
    }
}

fn ratio_mesh(horizon: f64, n_steps: usize, ratio: f64) -> Result<TimeMesh> {
    if ratio == 1.0 {
        TimeMesh::uniform(horizon, n_steps)
    } else {
        TimeMesh::geometric(horizon, n_steps, ratio)
    }
}

/// Uniform for `csbdf2`; geometric if a ratio is set, otherwise graded, for `vsbdf2`.
pub fn build_mesh(config: &StudyConfig, n_steps: usize) -> Result<TimeMesh> {
    let horizon = config.horizon();
    match (config.scheme, config.ratio) {
        (SchemeKind::Csbdf2, _) => TimeMesh::uniform(horizon, n_steps),
        (SchemeKind::Vsbdf2, Some(r)) => ratio_mesh(horizon, n_steps, r),
        (SchemeKind::Vsbdf2, None) => TimeMesh::graded(horizon, n_steps, config.grading),
    }
}

/// Integrate one configured run.
pub fn run_single(
    config: &StudyConfig,
    problem: &dyn ParabolicProblem,
    n_steps: usize,
) -> Result<Trajectory> {
    let mesh = build_mesh(config, n_steps)?;
    integrate(
        problem,
        &mesh,
        config.start,
        mode_for(config),
        &config.solver,
    )
}

#[derive(Clone, Debug)]
pub struct StudyRow {
    pub n_steps: usize,
    pub outcome: std::result::Result<(ErrorReport, Certificate), String>,
}

impl StudyRow {
    pub fn report(&self) -> Option<&ErrorReport> {
        self.outcome.as_ref().ok().map(|(r, _)| r)
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        self.outcome.as_ref().ok().map(|(_, c)| c)
    }
}

/// Results of one scheme over a list of `N`.
#[derive(Clone, Debug)]
pub struct ConvergenceStudy {
    pub label: String,
    pub rows: Vec<StudyRow>,
}

impl ConvergenceStudy {
    pub fn any_failed(&self) -> bool {
        self.rows.iter().any(|r| r.outcome.is_err())
    }

    fn errors(&self, which: usize) -> Vec<(usize, Option<f64>)> {
        self.rows
            .iter()
            .map(|r| (r.n_steps, r.report().map(|rep| rep.functionals()[which])))
            .collect()
    }

    /// One table per functional, in the order of [`FUNCTIONALS`].
    pub fn tables(&self) -> Vec<ConvergenceTable> {
        FUNCTIONALS
            .iter()
            .enumerate()
            .map(|(i, name)| {
                ConvergenceTable::from_errors(format!("{name}, {}", self.label), &self.errors(i))
            })
            .collect()
    }

    /// Orders of the four functionals at the last doubling.
    pub fn final_orders(&self) -> Option<[f64; 4]> {
        let n = self.rows.len();
        if n < 2 {
            return None;
        }
        let (a, b) = (self.rows[n - 2].report()?, self.rows[n - 1].report()?);
        let (ea, eb) = (a.functionals(), b.functionals());
        let mut out = [0.0; 4];
        for i in 0..4 {
            out[i] = observed_order(ea[i], eb[i]).ok()?;
        }
        Some(out)
    }

    pub const CSV_HEADER: &'static str = "scheme,N,E_linf_V,E_l2_HH,E_linf_H,E_l2_V,\
ord_linf_V,ord_l2_HH,ord_linf_H,ord_l2_V,certificate,lhs,rhs";

    /// Convergence CSV, one row per `N`; failed runs leave the numeric cells empty.
    pub fn csv(&self) -> String {
        let mut out = format!("{}\n", Self::CSV_HEADER);
        let tables = self.tables();
        for (i, row) in self.rows.iter().enumerate() {
            let mut cells = vec![self.label.clone(), row.n_steps.to_string()];
            match row.report() {
                Some(rep) => cells.extend(rep.functionals().iter().map(|e| format!("{e:e}"))),
                None => cells.extend(std::iter::repeat_n(String::new(), 4)),
            }
            for t in &tables {
                cells.push(
                    t.rows[i]
                        .order
                        .map(|o| format!("{o:.4}"))
                        .unwrap_or_default(),
                );
            }
            match &row.outcome {
                Ok((_, Certificate::Checked(c))) => {
                    cells.push(if c.holds { "holds" } else { "fails" }.into());
                    cells.push(format!("{:e}", c.lhs));
                    cells.push(format!("{:e}", c.rhs));
                }
                Ok((_, Certificate::NotApplicable(_))) => {
                    cells.extend(["n/a".to_string(), String::new(), String::new()]);
                }
                Err(_) => cells.extend(["failed".to_string(), String::new(), String::new()]),
            }
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Markdown: four `| N | Error | Order |` tables.
    pub fn markdown(&self) -> String {
        let tables = self.tables();
        let parts: Vec<String> = tables
            .iter()
            .map(|t| super::tables::emit_table(t, super::config::OutputFormat::Markdown))
            .collect();
        parts.join("\n")
    }
}

/// Integrate for every `N` (in parallel), measure errors and certify.
pub fn run_convergence_study(config: &StudyConfig) -> Result<ConvergenceStudy> {
    config.validate()?;
    let problem = build_problem(config)?;
    let label = config.label();
    let rows = config
        .n_list
        .par_iter()
        .map(|&n_steps| {
            let outcome = run_single(config, problem.as_ref(), n_steps)
                .and_then(|traj| {
                    let report = error_report(&traj, problem.as_ref(), &label)?;
                    let cert = stability_certificate(&traj, problem.as_ref(), config.c1)?;
                    Ok((report, cert))
                })
                .map_err(|e| e.to_string());
            StudyRow { n_steps, outcome }
        })
        .collect();
    Ok(ConvergenceStudy { label, rows })
}

/// `|U^n|` over one mesh of the stability sweep.
#[derive(Clone, Debug)]
pub struct StabilitySeries {
    pub id: String,
    pub ratio: f64,
    pub n_steps: usize,
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
    /// Set when the run stopped early; the series then holds the states reached.
    pub failure: Option<String>,
}

impl StabilitySeries {
    /// `max_n |U^n| / |U^0|`.
    pub fn growth(&self) -> f64 {
        let first = self.norms.first().copied().unwrap_or(0.0);
        let max = self.norms.iter().copied().fold(0.0, f64::max);
        if first > 0.0 {
            max / first
        } else if max == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    }

    pub fn bounded(&self) -> bool {
        self.failure.is_none() && self.growth() <= BOUNDEDNESS_THRESHOLD
    }

    pub fn decays(&self) -> bool {
        match (self.norms.first(), self.norms.last()) {
            (Some(a), Some(b)) => self.failure.is_none() && b < a,
            _ => false,
        }
    }
}

/// Geometric meshes for each sweep ratio (default: the configured ratio, or 2.4)
/// and each `N`; `r = 1` takes the uniform mesh.
pub fn run_stability_sweep(config: &StudyConfig) -> Result<Vec<StabilitySeries>> {
    config.validate()?;
    let problem = build_problem(config)?;
    let ratios = if config.ratios.is_empty() {
        vec![config.ratio.unwrap_or(2.4)]
    } else {
        config.ratios.clone()
    };
    let jobs: Vec<(f64, usize)> = ratios
        .iter()
        .flat_map(|&r| config.n_list.iter().map(move |&n| (r, n)))
        .collect();
    jobs.par_iter()
        .map(|&(ratio, n_steps)| {
            let mesh = ratio_mesh(config.horizon(), n_steps, ratio)?;
            let id = format!("r{ratio}_N{n_steps}");
            let (states, failure) = match integrate(
                problem.as_ref(),
                &mesh,
                config.start,
                mode_for(config),
                &config.solver,
            ) {
                Ok(traj) => (traj.states, None),
                Err(e) => (vec![problem.initial_state()], Some(e.to_string())),
            };
            let norms: Vec<f64> = states.iter().map(|u| problem.h_norm(u)).collect();
            Ok(StabilitySeries {
                id,
                ratio,
                n_steps,
                times: mesh.node_times()[..norms.len()].to_vec(),
                norms,
                failure,
            })
        })
        .collect()
}

/// `series_id,n,t,value` rows.
pub fn stability_csv(series: &[StabilitySeries]) -> String {
    let mut out = String::from("series_id,n,t,value\n");
    for s in series {
        for (n, (t, v)) in s.times.iter().zip(&s.norms).enumerate() {
            out.push_str(&format!("{},{n},{t:e},{v:e}\n", s.id));
        }
    }
    out
}

/// One line per series with the boundedness verdict.
pub fn stability_summary(series: &[StabilitySeries]) -> String {
    let mut out = String::from("| series | r | N | max/initial | final/initial | verdict |\n|---|---:|---:|---:|---:|---|\n");
    for s in series {
        let first = s.norms.first().copied().unwrap_or(0.0);
        let last = s.norms.last().copied().unwrap_or(0.0);
        let verdict = match (&s.failure, s.bounded()) {
            (Some(_), _) => "failed",
            (None, true) => "bounded",
            (None, false) => "growing",
        };
        out.push_str(&format!(
            "| {} | {} | {} | {:.4} | {} | {} |\n",
            s.id,
            s.ratio,
            s.n_steps,
            s.growth(),
            sci(if first > 0.0 { last / first } else { 0.0 }),
            verdict
        ));
    }
    out
}

/// Per-step errors of one run.
#[derive(Clone, Debug)]
pub struct ErrorSeries {
    pub id: String,
    pub times: Vec<f64>,
    pub l2: Vec<f64>,
    pub h1: Vec<f64>,
}

/// Error evolution for every `N` of the configuration.
pub fn run_error_evolution(config: &StudyConfig) -> Result<Vec<ErrorSeries>> {
    config.validate()?;
    let problem = build_problem(config)?;
    let label = config.label();
    config
        .n_list
        .par_iter()
        .map(|&n_steps| {
            let traj = run_single(config, problem.as_ref(), n_steps)?;
            let report = error_report(&traj, problem.as_ref(), &label)?;
            Ok(ErrorSeries {
                id: format!("{label}_N{n_steps}"),
                times: traj.mesh.node_times().to_vec(),
                l2: report.h_errors,
                h1: report.v_errors,
            })
        })
        .collect()
}

/// `series_id,n,t,l2_error,h1_error` rows.
pub fn error_evolution_csv(series: &[ErrorSeries]) -> String {
    let mut out = String::from("series_id,n,t,l2_error,h1_error\n");
    for s in series {
        for n in 0..s.times.len() {
            out.push_str(&format!(
                "{},{n},{:e},{:e},{:e}\n",
                s.id, s.times[n], s.l2[n], s.h1[n]
            ));
        }
    }
    out
}
