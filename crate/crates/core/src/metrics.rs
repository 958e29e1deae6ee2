//! The obfuscation-quality scorecard: S_LOC, S_pot, S_storage, S_runtime,
//! S_cst, and S_quality.
//!
//! Scores compose from display-rounded intermediates: S_LOC and S_storage
//! are rounded half-up to two decimals before weighting, S_cst combines
//! two-decimal-rounded inputs and displays at three decimals, S_pot and
//! S_quality display at two. Full-precision values are kept alongside the
//! rounded renderings.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Potency weight X in `S_pot = X * S_LOC`.
pub const DEFAULT_POTENCY_WEIGHT: f64 = 12.50;
/// Storage weight y2 in `S_cst = y2 * S_storage + z2 * S_runtime`.
pub const DEFAULT_STORAGE_WEIGHT: f64 = 0.15;
/// Runtime weight z2 in `S_cst = y2 * S_storage + z2 * S_runtime`.
pub const DEFAULT_RUNTIME_WEIGHT: f64 = 0.45;

/// Inputs for a full scorecard.
///
/// Timings are unit-agnostic (any consistent unit); when either is absent
/// the runtime score is 0 and the report is flagged unmeasured.
#[derive(Debug, Clone)]
pub struct MetricsInput {
    pub loc_orig: u64,
    pub loc_obf: u64,
    pub size_orig: u64,
    pub size_obf: u64,
    pub t_orig: Option<f64>,
    pub t_obf: Option<f64>,
    pub x_weight: f64,
    pub y2: f64,
    pub z2: f64,
}

impl MetricsInput {
    pub fn new(loc_orig: u64, loc_obf: u64, size_orig: u64, size_obf: u64) -> Self {
        MetricsInput {
            loc_orig,
            loc_obf,
            size_orig,
            size_obf,
            t_orig: None,
            t_obf: None,
            x_weight: DEFAULT_POTENCY_WEIGHT,
            y2: DEFAULT_STORAGE_WEIGHT,
            z2: DEFAULT_RUNTIME_WEIGHT,
        }
    }
}

/// The computed scorecard. Fields hold full-precision values; the
/// `*_display` accessors and [`MetricsReport::render`] apply the rounding
/// policy.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub s_loc: f64,
    pub s_pot: f64,
    pub s_storage: f64,
    pub s_runtime: f64,
    pub s_cst: f64,
    pub s_quality: f64,
    pub runtime_measured: bool,
}

/// Composite statement count of an obfuscated program: its own source
/// statements, the per-call expansion of the distinct hiding calls, and
/// the generated class bodies.
pub fn composite_loc(
    source_stmts: u64,
    class_stmts: u64,
    distinct_call_count: u64,
    stmts_per_call: u64,
) -> Result<u64> {
    let total = source_stmts + distinct_call_count * stmts_per_call + class_stmts;
    if total == 0 {
        return Err(Error::EmptyProgram);
    }
    Ok(total)
}

/// Relative LOC growth `(loc_obf - loc_orig) / loc_orig`.
pub fn s_loc(loc_orig: u64, loc_obf: u64) -> Result<f64> {
    if loc_orig == 0 {
        return Err(Error::ZeroBaseline { what: "original LOC" });
    }
    Ok((loc_obf as f64 - loc_orig as f64) / loc_orig as f64)
}

/// Weighted potency from an already display-rounded S_LOC.
pub fn s_pot(s_loc_displayed: f64, x_weight: f64) -> f64 {
    x_weight * s_loc_displayed
}

/// Relative file-size growth `(size_obf - size_orig) / size_orig`.
pub fn s_storage(size_orig: u64, size_obf: u64) -> Result<f64> {
    if size_orig == 0 {
        return Err(Error::ZeroBaseline { what: "original file size" });
    }
    Ok((size_obf as f64 - size_orig as f64) / size_orig as f64)
}

/// Relative runtime growth `(t_obf - t_orig) / t_orig`.
pub fn s_runtime(t_orig: f64, t_obf: f64) -> Result<f64> {
    if t_orig <= 0.0 {
        return Err(Error::ZeroBaseline { what: "original runtime" });
    }
    Ok((t_obf - t_orig) / t_orig)
}

/// Cost of obfuscation from two-decimal-rounded storage and runtime
/// scores.
pub fn s_cst(s_storage_in: f64, s_runtime_in: f64, y2: f64, z2: f64) -> f64 {
    y2 * round_display(s_storage_in, 2) + z2 * round_display(s_runtime_in, 2)
}

/// Quality on the 100-point scale: `0.4 * S_pot - S_cst`.
pub fn s_quality(s_pot_in: f64, s_cst_in: f64) -> f64 {
    0.4 * s_pot_in - s_cst_in
}

/// Rounds half-up (away from zero) at `decimals` places.
///
/// A nudge epsilon absorbs binary-float noise so decimal inputs that land
/// exactly on a .5 boundary (e.g. 12.50 * 12.45 = 155.625) round up the
/// way exact decimal arithmetic would.
pub fn round_display(value: f64, decimals: u32) -> f64 {
    let (q, scale) = quantize(value, decimals);
    if q == 0 {
        0.0
    } else {
        q as f64 / scale
    }
}

/// Exact decimal rendering of the half-up rounded value, e.g. "54.00".
pub fn format_display(value: f64, decimals: u32) -> String {
    let (q, _) = quantize(value, decimals);
    let scale = 10i64.pow(decimals);
    let sign = if q < 0 { "-" } else { "" };
    let mag = q.abs();
    if decimals == 0 {
        format!("{sign}{mag}")
    } else {
        format!(
            "{sign}{}.{:0width$}",
            mag / scale,
            mag % scale,
            width = decimals as usize
        )
    }
}

fn quantize(value: f64, decimals: u32) -> (i64, f64) {
    let scale = 10f64.powi(decimals as i32);
    let scaled = value.abs() * scale;
    let nudge = 1e-9 + scaled * 1e-12;
    let q = (scaled + 0.5 + nudge).floor() as i64;
    (if value < 0.0 { -q } else { q }, scale)
}

/// Composes the full scorecard.
pub fn build_report(input: &MetricsInput) -> Result<MetricsReport> {
    let s_loc_v = s_loc(input.loc_orig, input.loc_obf)?;
    let s_pot_v = s_pot(round_display(s_loc_v, 2), input.x_weight);
    let s_storage_v = s_storage(input.size_orig, input.size_obf)?;
    let (s_runtime_v, runtime_measured) = match (input.t_orig, input.t_obf) {
        (Some(orig), Some(obf)) => (s_runtime(orig, obf)?, true),
        _ => (0.0, false),
    };
    let s_cst_v = s_cst(s_storage_v, s_runtime_v, input.y2, input.z2);
    let s_quality_v = s_quality(s_pot_v, s_cst_v);
    Ok(MetricsReport {
        s_loc: s_loc_v,
        s_pot: s_pot_v,
        s_storage: s_storage_v,
        s_runtime: s_runtime_v,
        s_cst: s_cst_v,
        s_quality: s_quality_v,
        runtime_measured,
    })
}

impl MetricsReport {
    pub fn s_loc_display(&self) -> String {
        format_display(self.s_loc, 2)
    }

    pub fn s_pot_display(&self) -> String {
        format_display(self.s_pot, 2)
    }

    pub fn s_storage_display(&self) -> String {
        format_display(self.s_storage, 2)
    }

    pub fn s_runtime_display(&self) -> String {
        format_display(self.s_runtime, 2)
    }

    pub fn s_cst_display(&self) -> String {
        format_display(self.s_cst, 3)
    }

    pub fn s_quality_display(&self) -> String {
        format_display(self.s_quality, 2)
    }

    /// Line-oriented `key=value` rendering, stable key order, full
    /// precision alongside the rounded displays.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "s_loc={}", self.s_loc);
        let _ = writeln!(out, "s_loc_display={}", self.s_loc_display());
        let _ = writeln!(out, "s_pot={}", self.s_pot);
        let _ = writeln!(out, "s_pot_display={}", self.s_pot_display());
        let _ = writeln!(out, "s_storage={}", self.s_storage);
        let _ = writeln!(out, "s_storage_display={}", self.s_storage_display());
        let _ = writeln!(out, "s_runtime={}", self.s_runtime);
        let _ = writeln!(out, "s_runtime_display={}", self.s_runtime_display());
        let _ = writeln!(out, "s_cst={}", self.s_cst);
        let _ = writeln!(out, "s_cst_display={}", self.s_cst_display());
        let _ = writeln!(out, "s_quality={}", self.s_quality);
        let _ = writeln!(out, "s_quality_display={}", self.s_quality_display());
        let _ = writeln!(out, "runtime_measured={}", self.runtime_measured);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composite_loc_accounting() {
        assert_eq!(composite_loc(22, 76, 9, 22).unwrap(), 296);
        assert_eq!(composite_loc(22, 0, 0, 0).unwrap(), 22);
        assert_eq!(composite_loc(22, 32, 5, 22).unwrap(), 164);
        assert!(matches!(composite_loc(0, 0, 0, 0), Err(Error::EmptyProgram)));
    }

    #[test]
    fn loc_growth_rows() {
        assert_eq!(format_display(s_loc(22, 296).unwrap(), 2), "12.45");
        assert_eq!(s_loc(22, 22).unwrap(), 0.0);
        assert_eq!(format_display(s_loc(22, 117).unwrap(), 2), "4.32");
        assert_eq!(format_display(s_loc(22, 164).unwrap(), 2), "6.45");
        assert!(matches!(s_loc(0, 5), Err(Error::ZeroBaseline { .. })));
    }

    #[test]
    fn potency_weights_the_rounded_ratio() {
        // 12.50 * 12.45 = 155.625, half-up at two decimals -> 155.63.
        assert_eq!(format_display(s_pot(12.45, 12.50), 2), "155.63");
        assert_eq!(format_display(s_pot(6.45, 12.50), 2), "80.63");
        assert_eq!(format_display(s_pot(4.32, 12.50), 2), "54.00");
        assert_eq!(s_pot(0.0, 12.50), 0.0);
    }

    #[test]
    fn storage_ratio_rows() {
        assert_eq!(format_display(s_storage(704, 1135).unwrap(), 2), "0.61");
        assert_eq!(format_display(s_storage(704, 1136).unwrap(), 2), "0.61");
        // The published 0.75 disagrees with its own sizes; the ratio is 0.74.
        assert_eq!(format_display(s_storage(704, 1223).unwrap(), 2), "0.74");
        assert_eq!(s_storage(500, 500).unwrap(), 0.0);
    }

    #[test]
    fn runtime_ratio() {
        assert!((s_runtime(5.0, 6.0).unwrap() - 0.2).abs() < 1e-12);
        assert_eq!(s_runtime(7.0, 7.0).unwrap(), 0.0);
        assert_eq!(s_runtime(4.0, 4.0).unwrap(), 0.0);
        assert!(matches!(s_runtime(0.0, 1.0), Err(Error::ZeroBaseline { .. })));
    }

    #[test]
    fn cost_rows_at_three_decimals() {
        let (y2, z2) = (DEFAULT_STORAGE_WEIGHT, DEFAULT_RUNTIME_WEIGHT);
        assert_eq!(format_display(s_cst(0.61, 0.2, y2, z2), 3), "0.182");
        assert_eq!(format_display(s_cst(0.61, 0.0, y2, z2), 3), "0.092");
        assert_eq!(format_display(s_cst(0.75, 0.0, y2, z2), 3), "0.113");
        assert_eq!(s_cst(0.0, 0.0, y2, z2), 0.0);
    }

    #[test]
    fn quality_rows() {
        assert_eq!(format_display(s_quality(155.625, 0.1815), 2), "62.07");
        assert_eq!(format_display(s_quality(54.00, 0.1125), 2), "21.49");
        assert_eq!(s_quality(0.0, 0.0), 0.0);
    }

    #[test]
    fn report_reproduces_the_split_row() {
        let mut input = MetricsInput::new(22, 296, 704, 1135);
        input.t_orig = Some(5.0);
        input.t_obf = Some(6.0);
        let report = build_report(&input).unwrap();
        assert_eq!(report.s_loc_display(), "12.45");
        assert_eq!(report.s_pot_display(), "155.63");
        assert_eq!(report.s_storage_display(), "0.61");
        assert_eq!(report.s_runtime_display(), "0.20");
        assert_eq!(report.s_cst_display(), "0.182");
        assert_eq!(report.s_quality_display(), "62.07");
        assert!(report.runtime_measured);
        // Full-precision identity behind the displays.
        assert!((report.s_quality - (0.4 * report.s_pot - report.s_cst)).abs() < 1e-12);
    }

    #[test]
    fn report_reproduces_the_fold_row() {
        let mut input = MetricsInput::new(22, 164, 704, 1136);
        input.t_orig = Some(7.0);
        input.t_obf = Some(7.0);
        let report = build_report(&input).unwrap();
        assert_eq!(report.s_pot_display(), "80.63");
        assert_eq!(report.s_cst_display(), "0.092");
        assert_eq!(report.s_quality_display(), "32.16");
    }

    #[test]
    fn identity_transform_scores_zero() {
        let report = build_report(&MetricsInput::new(22, 22, 704, 704)).unwrap();
        assert_eq!(report.s_loc, 0.0);
        assert_eq!(report.s_pot, 0.0);
        assert_eq!(report.s_storage, 0.0);
        assert_eq!(report.s_runtime, 0.0);
        assert_eq!(report.s_cst, 0.0);
        assert_eq!(report.s_quality, 0.0);
        assert!(!report.runtime_measured);
    }

    #[test]
    fn render_is_line_oriented_and_stable() {
        let report = build_report(&MetricsInput::new(22, 296, 704, 1135)).unwrap();
        let text = report.render();
        let keys: Vec<&str> = text.lines().map(|l| l.split('=').next().unwrap()).collect();
        assert_eq!(
            keys,
            vec![
                "s_loc",
                "s_loc_display",
                "s_pot",
                "s_pot_display",
                "s_storage",
                "s_storage_display",
                "s_runtime",
                "s_runtime_display",
                "s_cst",
                "s_cst_display",
                "s_quality",
                "s_quality_display",
                "runtime_measured",
            ]
        );
        assert_eq!(report.render(), text);
    }

    #[test]
    fn rounding_is_half_up_and_noise_tolerant() {
        assert_eq!(format_display(0.005, 2), "0.01");
        assert_eq!(format_display(0.004999, 2), "0.00");
        assert_eq!(format_display(-0.125, 2), "-0.13");
        assert_eq!(format_display(2.0, 2), "2.00");
        assert_eq!(format_display(0.15 * 0.61, 3), "0.092");
        assert_eq!(format_display(0.15 * 0.75, 3), "0.113");
        assert_eq!(format_display(12.50 * 12.45, 2), "155.63");
        assert_eq!(round_display(12.50 * 12.45, 2), 155.63);
        assert_eq!(round_display(-0.0, 2), 0.0);
    }
}
