use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 25] = [
    "s", "er11", "er22", "er33", "er23", "er13", "er12", "enf11", "enf22", "enf33", "enf23", "enf13",
    "enf12", "eTnf11", "eTnf22", "eTnf33", "eTnf23", "eTnf13", "eTnf12", "ef11", "ef22", "ef33",
    "ef23", "ef13", "ef12",
];

/// Shortest text that parses back to the same `f64`; exponent form for very small
/// or very large magnitudes.
pub fn format_float(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !a.is_finite() {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

/// Tensor components in the order 11, 22, 33, 23, 13, 12 (no shear factors).
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub s: f64,
    /// Resolved reference strain.
    pub er: Option<[f64; 6]>,
    /// Strain without the fiber term.
    pub enf: [f64; 6],
    /// Transfer operator applied to `enf`.
    pub etnf: [f64; 6],
    /// Extended recovery.
    pub ef: [f64; 6],
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SensorTrace {
    pub rows: Vec<TraceRow>,
}

impl SensorTrace {
    /// Writes the trace with shortest round-trip float formatting.
    pub fn write_to<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(CSV_HEADER)?;
        for row in &self.rows {
            let mut rec = Vec::with_capacity(25);
            rec.push(format_float(row.s));
            match &row.er {
                Some(er) => rec.extend(er.iter().copied().map(format_float)),
                None => rec.extend(std::iter::repeat_n(String::new(), 6)),
            }
            for block in [&row.enf, &row.etnf, &row.ef] {
                rec.extend(block.iter().copied().map(format_float));
            }
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_to(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is ASCII"))
    }

    pub fn read_from<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        if rdr.headers()?.iter().ne(CSV_HEADER) {
            return Err(Error::Config("unexpected trace header".into()));
        }
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let num = |i: usize| -> Result<f64> {
                rec[i]
                    .parse()
                    .map_err(|_| Error::Config(format!("bad number {:?} in column {}", &rec[i], CSV_HEADER[i])))
            };
            let block = |start: usize| -> Result<[f64; 6]> {
                let mut b = [0.0; 6];
                for (k, v) in b.iter_mut().enumerate() {
                    *v = num(start + k)?;
                }
                Ok(b)
            };
            let er = if (1..7).all(|i| rec[i].is_empty()) {
                None
            } else {
                Some(block(1)?)
            };
            rows.push(TraceRow {
                s: num(0)?,
                er,
                enf: block(7)?,
                etnf: block(13)?,
                ef: block(19)?,
            });
        }
        Ok(Self { rows })
    }
}

pub fn write_csv(trace: &SensorTrace, path: &Path) -> Result<()> {
    trace.write_to(std::io::BufWriter::new(std::fs::File::create(path)?))
}

pub fn read_csv(path: &Path) -> Result<SensorTrace> {
    SensorTrace::read_from(std::fs::File::open(path)?)
}
