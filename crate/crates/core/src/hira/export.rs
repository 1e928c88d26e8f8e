use std::io::Write;

use crate::error::{Error, Result};

use super::pipeline::EigenvectorResult;

/// Writes `index, mantissa, exponent_shift, value, region_tag`, where
/// `X_j = mantissa · 2^exponent_shift` and `value` is its binary64 rounding.
pub fn write_eigenvector_csv<W: Write>(res: &EigenvectorResult<f64>, w: W) -> Result<()> {
    let mut out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    out.write_record(["index", "mantissa", "exponent_shift", "value", "region_tag"])
        .map_err(io)?;
    for (i, v) in res.raw.iter().enumerate() {
        let mant = v.mantissa / res.d.mantissa;
        let shift = v.exp - res.d.exp;
        out.write_record([
            (i + 1).to_string(),
            format!("{mant:.16e}"),
            shift.to_string(),
            format!("{:.16e}", res.x[i]),
            res.partition.tag(i + 1).as_str().to_string(),
        ])
        .map_err(io)?;
    }
    out.flush()?;
    Ok(())
}
