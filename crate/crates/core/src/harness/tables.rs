use super::config::OutputFormat;
use crate::norms::observed_order;

/// Names of the four error functionals, in report order.
pub const FUNCTIONALS: [&str; 4] = ["E_linf_V", "E_l2_HH", "E_linf_H", "E_l2_V"];

/// `1.2345E-03`: four decimals in the mantissa and a signed two-digit exponent.
pub fn sci(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.4E}");
    let (mantissa, exp) = s.split_once('E').expect("E format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}E{sign}{:02}", exp.abs())
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub n_steps: usize,
    /// `None` for a failed run.
    pub error: Option<f64>,
    /// `None` on the first row or next to a failed run.
    pub order: Option<f64>,
}

/// One error functional over a sequence of `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceTable {
    pub caption: String,
    pub rows: Vec<TableRow>,
}

impl ConvergenceTable {
    /// Rows from `(N, error)` pairs; orders compare consecutive rows.
    pub fn from_errors(caption: impl Into<String>, errors: &[(usize, Option<f64>)]) -> Self {
        let mut rows: Vec<TableRow> = Vec::with_capacity(errors.len());
        for (i, &(n_steps, error)) in errors.iter().enumerate() {
            let order = if i == 0 {
                None
            } else {
                match (errors[i - 1].1, error) {
                    (Some(c), Some(f)) => observed_order(c, f).ok(),
                    _ => None,
                }
            };
            rows.push(TableRow {
                n_steps,
                error,
                order,
            });
        }
        Self {
            caption: caption.into(),
            rows,
        }
    }

    pub fn last_order(&self) -> Option<f64> {
        self.rows.last().and_then(|r| r.order)
    }
}

fn cell(x: Option<f64>, f: impl Fn(f64) -> String) -> String {
    x.map(f).unwrap_or_default()
}

/// Render a table as CSV (`N,error,order`) or as a Markdown pipe table.
pub fn emit_table(table: &ConvergenceTable, format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Csv => {
            out.push_str("N,error,order\n");
            for r in &table.rows {
                out.push_str(&format!(
                    "{},{},{}\n",
                    r.n_steps,
                    cell(r.error, |e| format!("{e:e}")),
                    cell(r.order, |o| format!("{o:.4}"))
                ));
            }
        }
        OutputFormat::Markdown => {
            if !table.caption.is_empty() {
                out.push_str(&format!("**{}**\n\n", table.caption));
            }
            out.push_str("| N | Error | Order |\n|---:|---:|---:|\n");
            for r in &table.rows {
                let error = match r.error {
                    Some(e) => sci(e),
                    None => "failed".into(),
                };
                out.push_str(&format!(
                    "| {} | {} | {} |\n",
                    r.n_steps,
                    error,
                    cell(r.order, |o| format!("{o:.4}"))
                ));
            }
        }
    }
    out
}
