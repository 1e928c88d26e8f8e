//! CSV output. Floats are written as `{:.16e}`, which round-trips binary64
//! exactly; lines end in LF.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};

use crate::experiments::{EigenCase, ExperimentRecord, MethodTag, PartitionSummary};
use crate::stats::ErrorStats;

pub const RECORD_HEADER: [&str; 27] = [
    "experiment",
    "a",
    "c",
    "n",
    "big_n",
    "k",
    "lambda",
    "method",
    "index",
    "value",
    "rel_value",
    "rel_first",
    "max_abs",
    "max_rel",
    "avg_abs",
    "avg_rel",
    "excluded",
    "residual",
    "agreement_digits",
    "paired_digits",
    "oracle_gap",
    "part_k",
    "part_l",
    "part_p",
    "part_m",
    "part_r",
    "trusted",
];

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn record_fields(r: &ExperimentRecord) -> Vec<String> {
    let p = r.partition;
    vec![
        r.experiment.to_string(),
        fmt_f64(r.a),
        fmt_f64(r.c),
        r.n.to_string(),
        opt(r.big_n, |v| v.to_string()),
        opt(r.k, |v| v.to_string()),
        fmt_f64(r.lambda),
        r.method.as_str().to_string(),
        r.index.to_string(),
        fmt_f64(r.value),
        fmt_f64(r.rel_value),
        fmt_f64(r.stats.rel_first),
        fmt_f64(r.stats.max_abs),
        fmt_f64(r.stats.max_rel),
        fmt_f64(r.stats.avg_abs),
        fmt_f64(r.stats.avg_rel),
        r.stats.excluded.to_string(),
        opt(r.residual, fmt_f64),
        opt(r.agreement_digits, fmt_f64),
        opt(r.paired_digits, fmt_f64),
        fmt_f64(r.oracle_gap),
        opt(p, |p| p.k.to_string()),
        opt(p, |p| p.l.to_string()),
        opt(p, |p| p.p.to_string()),
        opt(p, |p| p.m.to_string()),
        opt(p, |p| p.r.to_string()),
        (r.oracle_gap <= tridiag_hira::oracle::TRUST_TOL).to_string(),
    ]
}

pub fn write_records<W: Write>(records: &[ExperimentRecord], w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(RECORD_HEADER)?;
    for r in records {
        out.write_record(record_fields(r))?;
    }
    out.flush()?;
    Ok(())
}

/// Writes `records` to `path`.
pub fn csv_emit(records: &[ExperimentRecord], path: &Path) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    write_records(records, file).with_context(|| format!("writing {}", path.display()))
}

fn parse_method(s: &str) -> Result<MethodTag> {
    Ok(match s {
        "hira" => MethodTag::Hira,
        "simplified" => MethodTag::Simplified,
        "invpow" => MethodTag::InversePower,
        "backward" => MethodTag::Backward,
        _ => bail!("unknown method {s:?}"),
    })
}

/// Reads records written by [`write_records`]. `wall_seconds` is not stored
/// and comes back as zero.
pub fn read_records<R: Read>(r: R) -> Result<Vec<ExperimentRecord>> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(r);
    let header = rdr.headers()?.clone();
    if header.iter().ne(RECORD_HEADER) {
        bail!("unexpected header {header:?}");
    }
    let mut out = Vec::new();
    for (line, row) in rdr.records().enumerate() {
        let row = row?;
        let ctx = || format!("record {}", line + 1);
        let field = |i: usize| {
            row.get(i)
                .ok_or_else(|| anyhow!("missing field {}", RECORD_HEADER[i]))
        };
        let f = |i: usize| -> Result<f64> { Ok(field(i)?.parse()?) };
        let u = |i: usize| -> Result<usize> { Ok(field(i)?.parse()?) };
        let ou = |i: usize| -> Result<Option<usize>> {
            let s = field(i)?;
            Ok(if s.is_empty() { None } else { Some(s.parse()?) })
        };
        let of = |i: usize| -> Result<Option<f64>> {
            let s = field(i)?;
            Ok(if s.is_empty() { None } else { Some(s.parse()?) })
        };
        let partition = match (ou(21)?, ou(22)?, ou(23)?, ou(24)?, ou(25)?) {
            (Some(k), Some(l), Some(p), Some(m), Some(r)) => {
                Some(PartitionSummary { k, l, p, m, r })
            }
            _ => None,
        };
        let rec = (|| -> Result<ExperimentRecord> {
            Ok(ExperimentRecord {
                experiment: field(0)?.parse()?,
                a: f(1)?,
                c: f(2)?,
                n: u(3)?,
                big_n: ou(4)?,
                k: ou(5)?,
                lambda: f(6)?,
                method: parse_method(field(7)?)?,
                index: u(8)?,
                value: f(9)?,
                rel_value: f(10)?,
                stats: ErrorStats {
                    rel_first: f(11)?,
                    max_abs: f(12)?,
                    max_rel: f(13)?,
                    avg_abs: f(14)?,
                    avg_rel: f(15)?,
                    excluded: u(16)?,
                },
                residual: of(17)?,
                agreement_digits: of(18)?,
                paired_digits: of(19)?,
                oracle_gap: f(20)?,
                partition,
                wall_seconds: 0.0,
            })
        })()
        .with_context(ctx)?;
        out.push(rec);
    }
    Ok(out)
}

/// Per-coordinate comparison of every method with the reference.
pub fn write_coordinates<W: Write>(case: &EigenCase, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record([
        "index",
        "region",
        "reference",
        "hira",
        "simplified",
        "invpow",
        "rel_hira",
        "rel_simplified",
        "rel_invpow",
    ])?;
    for (i, r) in case.reference.iter().enumerate() {
        let rel = |y: f64| {
            if *r == tridiag_hira::DDReal::ZERO {
                f64::NAN
            } else {
                ((tridiag_hira::DDReal::from_f64(y) - *r) / *r)
                    .abs()
                    .to_f64()
            }
        };
        let (h, s, v) = (case.hira[i], case.simplified[i], case.inverse[i]);
        out.write_record([
            (i + 1).to_string(),
            case.partition.tag(i + 1).as_str().to_string(),
            fmt_f64(r.to_f64()),
            fmt_f64(h),
            fmt_f64(s),
            fmt_f64(v),
            fmt_f64(rel(h)),
            fmt_f64(rel(s)),
            fmt_f64(rel(v)),
        ])?;
    }
    out.flush()?;
    Ok(())
}
