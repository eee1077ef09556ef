//! Assertions run when a real landmark dataset is supplied.

use clique_match::experiment::ReportRow;

/// 20° rotation applied to 20% of the frames.
pub const REFERENCE_TRANSFORM_CELL: &str = "rotation:20|impurity=0.2";

/// Mean error ceiling for the reference transform cell, in percent.
pub const TRANSFORM_MAX_ERROR: f64 = 2.0;

pub fn transform_ok(row: &ReportRow) -> Result<(), String> {
    match row.mean_error {
        Some(e) if e <= TRANSFORM_MAX_ERROR => Ok(()),
        Some(e) => Err(format!("{} mean error {e:.4}% > {TRANSFORM_MAX_ERROR}%", row.cell)),
        None => Err(format!("{} has no scorable pairs", row.cell)),
    }
}

/// Error must not drop between consecutive missing counts by more than three
/// standard errors of the difference.
pub fn occlusion_monotone(rows: &[ReportRow], repetitions: usize) -> Result<(), String> {
    let reps = repetitions.max(1) as f64;
    let scored: Vec<(&str, f64, f64)> = rows
        .iter()
        .filter_map(|r| r.mean_error.map(|m| (r.cell.as_str(), m, r.std_error.unwrap_or(0.0))))
        .collect();
    for w in scored.windows(2) {
        let (c0, m0, s0) = w[0];
        let (c1, m1, s1) = w[1];
        let slack = 3.0 * ((s0 * s0 + s1 * s1) / reps).sqrt();
        if m1 < m0 - slack {
            return Err(format!("error falls from {m0:.3}% ({c0}) to {m1:.3}% ({c1}), slack {slack:.3}"));
        }
    }
    Ok(())
}
