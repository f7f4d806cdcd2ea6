//! Output files. Every writer is byte-deterministic: floats use the shortest
//! decimal that round-trips, rows keep their input order.

use serde::Serialize;

use crate::config::OutputFormat;
use crate::error::Result;
use crate::game::{ParadoxKind, ParadoxVerdict, ProbabilityTrace};
use crate::operators::CoinParams;
use crate::oracle::ParityReport;
use crate::scan::{SweepRow, SweepSpec, SymmetryReport, TheoremReport};
use crate::state::Measure;

/// Shortest round-trip decimal (at most 17 significant digits).
pub fn format_float(x: f64) -> String {
    format!("{x:?}")
}

fn writer(format: OutputFormat) -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .delimiter(format.delimiter())
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>> {
    w.into_inner().map_err(|e| e.into_error().into())
}

/// `t,p_t,running_mean`, one row per block.
pub fn trace_table(trace: &ProbabilityTrace, format: OutputFormat) -> Result<Vec<u8>> {
    let mut w = writer(format);
    w.write_record(["t", "p_t", "running_mean"])?;
    for (t, (p, m)) in trace.per_block.iter().zip(&trace.running_mean).enumerate() {
        w.write_record([t.to_string(), format_float(*p), format_float(*m)])?;
    }
    finish(w)
}

/// `theta,p10,p01,p_combo,verdict`, one row per grid point.
pub fn sweep_table(rows: &[SweepRow], format: OutputFormat) -> Result<Vec<u8>> {
    let mut w = writer(format);
    w.write_record(["theta", "p10", "p01", "p_combo", "verdict"])?;
    for r in rows {
        w.write_record([
            format_float(r.theta),
            format_float(r.p10),
            format_float(r.p01),
            format_float(r.p_combo),
            r.verdict.kind.to_string(),
        ])?;
    }
    finish(w)
}

pub fn to_json(value: &impl Serialize) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulateSummary {
    pub dim: usize,
    pub side: usize,
    pub marked: Vec<usize>,
    pub measure: Measure,
    pub coin1: CoinParams,
    pub coin2: CoinParams,
    pub schedule: (usize, usize),
    pub horizon: usize,
    pub p10: f64,
    pub p01: f64,
    #[serde(rename = "pCombo")]
    pub p_combo: f64,
    pub baseline: f64,
    pub guard: f64,
    pub verdict: ParadoxKind,
    pub axes_homogeneous: bool,
}

impl SimulateSummary {
    pub fn verdict(&self) -> ParadoxVerdict {
        ParadoxVerdict {
            kind: self.verdict,
            p10: self.p10,
            p01: self.p01,
            p_combo: self.p_combo,
            baseline: self.baseline,
            guard: self.guard,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    pub spec: SweepSpec,
    pub n_positive: usize,
    pub n_negative: usize,
    pub n_none: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<SymmetryReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_theorem_violation: Option<f64>,
}

impl SweepSummary {
    pub fn new(spec: SweepSpec, rows: &[SweepRow]) -> Self {
        let count = |k: ParadoxKind| rows.iter().filter(|r| r.verdict.kind == k).count();
        Self {
            spec,
            n_positive: count(ParadoxKind::Positive),
            n_negative: count(ParadoxKind::Negative),
            n_none: count(ParadoxKind::None),
            symmetry: None,
            max_theorem_violation: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub theorem: TheoremReport,
    /// Only computed for `d = 1`.
    pub parity: Option<ParityReport>,
    pub threshold: f64,
    pub parity_threshold: f64,
    pub passed: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::classify;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 0.0, 0.09288401095628349, 1.0] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_float(0.1), "0.1");
    }

    #[test]
    fn trace_layout() {
        let tr = ProbabilityTrace {
            per_block: vec![0.1, 0.3],
            running_mean: vec![0.1, 0.2],
            horizon: 2,
            substeps: None,
        };
        let text = String::from_utf8(trace_table(&tr, OutputFormat::Csv).unwrap()).unwrap();
        assert_eq!(text, "t,p_t,running_mean\n0,0.1,0.1\n1,0.3,0.2\n");
        let text = String::from_utf8(trace_table(&tr, OutputFormat::Tsv).unwrap()).unwrap();
        assert!(text.starts_with("t\tp_t\trunning_mean\n"));
    }

    #[test]
    fn sweep_layout() {
        let row = SweepRow {
            theta: 0.5,
            p10: 0.08,
            p01: 0.09,
            p_combo: 0.12,
            verdict: classify(0.08, 0.09, 0.12, 0.1, 0.0),
        };
        let text = String::from_utf8(sweep_table(&[row], OutputFormat::Csv).unwrap()).unwrap();
        assert_eq!(
            text,
            "theta,p10,p01,p_combo,verdict\n0.5,0.08,0.09,0.12,positive\n"
        );
    }
}
