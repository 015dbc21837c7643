//! The `invert` command: round trip through the transform at `q = 1 + epsilon`.

use super::config::InvertRequest;
use super::sweep::format_e;
use crate::error::Result;
use crate::inversion::{roundtrip_check, RoundtripReport};

pub const CSV_HEADER: [&str; 5] = ["t", "recovered", "exact", "error", "est_error"];

pub fn run_invert(req: &InvertRequest) -> Result<RoundtripReport> {
    roundtrip_check(&req.function, &req.t_grid.points(), req.epsilon, &req.inversion, &req.quadrature)
}

pub fn render_csv(report: &RoundtripReport) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for s in &report.samples {
        w.write_record([format_e(s.t), format_e(s.recovered), format_e(s.exact), format_e(s.error), format_e(s.est_error)])?;
    }
    let bytes = w.into_inner().map_err(|e| crate::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("ascii output"))
}

/// Summary line printed after the samples are written.
pub fn summary_line(report: &RoundtripReport) -> String {
    format!("sup_error {} (epsilon {}, {} points)", format_e(report.sup_error), format_e(report.epsilon), report.samples.len())
}
