use clap::ValueEnum;
use serde::Serialize;

use cqrac::analysis::tables::{write_mub_table, write_success_curves};
use cqrac::analysis::{
    application_report, crossovers, epsilon_star, expected_success, mub_table, TieRule, ASYMPTOTIC_N,
};

use crate::run::{emit, json_with_run, usage, CliResult, Format, RunConfig};
use crate::AnalyzeArgs;

/// Curves stop here; the selection outgrows the catalog well before 1/2.
const CURVE_MAX_TOLERANCE: f64 = 0.3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TieArg {
    Failure,
    HalfCredit,
}

impl From<TieArg> for TieRule {
    fn from(t: TieArg) -> TieRule {
        match t {
            TieArg::Failure => TieRule::Failure,
            TieArg::HalfCredit => TieRule::HalfCredit,
        }
    }
}

fn csv_rows<T: Serialize>(rows: &[T]) -> CliResult<String> {
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        let value = serde_json::to_value(row).map_err(cqrac::Error::from)?;
        let map = value.as_object().ok_or_else(|| usage("row is not a record"))?;
        if i == 0 {
            out.push_str(&map.keys().cloned().collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        let cells: Vec<String> = map
            .values()
            .map(|v| match v {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

fn render<T: Serialize>(run: &RunConfig, key: &str, rows: &[T]) -> CliResult<String> {
    match run.format {
        Format::Json => json_with_run(run, serde_json::json!({ key: rows })),
        Format::Csv => Ok(run.comment("#") + &csv_rows(rows)?),
    }
}

pub fn run(args: AnalyzeArgs) -> CliResult {
    let mut run = RunConfig::new("analyze", args.format);
    run.target = Some(args.target);
    run.output("table", args.out.as_ref());
    let tie: TieRule = args.tie.into();
    if !(args.target > 0.5 && args.target < 1.0) {
        return Err(usage(format!("target {} must lie in (1/2, 1)", args.target)));
    }
    let epsilon = || -> CliResult<f64> {
        match args.epsilon {
            Some(e) => Ok(e),
            None => Ok(epsilon_star(ASYMPTOTIC_N, args.target, tie)?.epsilon),
        }
    };

    let text = if args.curves {
        if args.step.is_nan() || args.step <= 0.0 {
            return Err(usage("curve step must be positive"));
        }
        match args.format {
            Format::Csv => {
                let mut buf = run.comment("#").into_bytes();
                write_success_curves(&args.sizes, args.step, CURVE_MAX_TOLERANCE, tie, &mut buf)?;
                String::from_utf8(buf).expect("ascii output")
            }
            Format::Json => {
                let points = (CURVE_MAX_TOLERANCE / args.step + 1e-9).floor() as usize;
                let mut rows = Vec::new();
                for &n in &args.sizes {
                    for i in 0..=points {
                        rows.push(expected_success(n, i as f64 * args.step, tie)?);
                    }
                }
                render(&run, "curves", &rows)?
            }
        }
    } else if args.crossovers {
        let c = crossovers(epsilon()?, args.target, ASYMPTOTIC_N, tie)?;
        render(&run, "crossovers", &[c])?
    } else if let Some(sizes) = &args.apps {
        let sizes = if sizes.is_empty() { vec![44, 100] } else { sizes.clone() };
        let e = epsilon()?;
        let rows = sizes
            .iter()
            .map(|&n| application_report(n, e, args.target, ASYMPTOTIC_N, tie))
            .collect::<Result<Vec<_>, _>>()?;
        render(&run, "applications", &rows)?
    } else if args.table2 {
        let rows = mub_table();
        match args.format {
            Format::Csv => {
                let mut buf = run.comment("#").into_bytes();
                write_mub_table(&rows, &mut buf)?;
                String::from_utf8(buf).expect("ascii output")
            }
            Format::Json => render(&run, "mub", &rows)?,
        }
    } else {
        let sizes = match &args.epsilon_star {
            Some(s) if !s.is_empty() => s.clone(),
            _ => vec![16, 20],
        };
        let rows = sizes
            .iter()
            .map(|&n| epsilon_star(n, args.target, tie))
            .collect::<Result<Vec<_>, _>>()?;
        render(&run, "optima", &rows)?
    };
    emit(args.out.as_ref(), &text)
}
