//! CSV writers for the analysis artifacts.

use std::io::Write;

use crate::error::Result;

use super::compare::MubRow;
use super::tolerance::{expected_success, TieRule};

/// Bit success against tolerance for each register size, one row per
/// `(n, epsilon)`.
pub fn write_success_curves(
    sizes: &[usize],
    step: f64,
    max_epsilon: f64,
    tie: TieRule,
    mut out: impl Write,
) -> Result<()> {
    writeln!(out, "n,epsilon,n_states,mean_well_defined,f_e,f_bar")?;
    let points = (max_epsilon / step + 1e-9).floor() as usize;
    for &n in sizes {
        for i in 0..=points {
            let e = i as f64 * step;
            if e >= 0.5 {
                break;
            }
            let s = expected_success(n, e, tie)?;
            writeln!(
                out,
                "{},{:.4},{:.6},{:.6},{:.6},{:.6}",
                n, e, s.n_states, s.mean_well_defined, s.f_e, s.f_bar
            )?;
        }
    }
    Ok(())
}

pub fn write_mub_table(rows: &[MubRow], mut out: impl Write) -> Result<()> {
    writeln!(out, "d,f_dit,f_bit")?;
    for r in rows {
        writeln!(out, "{},{},{:.4}", r.d, r.f_dit, r.f_bit)?;
    }
    Ok(())
}
