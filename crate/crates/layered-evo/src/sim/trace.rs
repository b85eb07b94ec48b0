//! Step-by-step trajectory records for the replay tooling.

use std::io::Write;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub step: u32,
    pub x: f64,
    pub y: f64,
    pub heading: f64,
    pub wheel_l: f64,
    pub wheel_r: f64,
    pub feedback: f64,
}

pub const TRACE_HEADER: &str = "step,x,y,heading,wheel_l,wheel_r,feedback";

pub fn write_trace(mut out: impl Write, rows: &[TraceRow]) -> Result<()> {
    let ctx = "writing trace";
    writeln!(out, "{TRACE_HEADER}").map_err(|e| Error::io(ctx, e))?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.step, r.x, r.y, r.heading, r.wheel_l, r.wheel_r, r.feedback
        )
        .map_err(|e| Error::io(ctx, e))?;
    }
    Ok(())
}
