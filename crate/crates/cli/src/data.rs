//! Delimited data files with `#` header comments.
//!
//! Header lines are either config entries (`# key = value`, parsed strictly
//! as a [`RunConfig`]) or metadata (`# key: value`). Numbers are written
//! with 17 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use qdeconv_core::{FieldData, KernelSpectrum, ModeStatus, PhaseMatrix};

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Header {
    pub command: String,
    pub config: RunConfig,
    pub meta: Vec<(String, String)>,
}

impl Header {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        Self {
            command: command.to_string(),
            config: config.clone(),
            meta: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn write(&self, out: &mut String) {
        let _ = writeln!(out, "# qdeconv {}", self.command);
        for line in self.config.to_text().lines() {
            let _ = writeln!(out, "# {line}");
        }
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k}: {v}");
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut command = String::new();
        let mut config = String::new();
        let mut meta = Vec::new();
        for line in text.lines() {
            let Some(body) = line.strip_prefix('#') else {
                break;
            };
            let body = body.trim();
            if let Some(cmd) = body.strip_prefix("qdeconv ") {
                command = cmd.trim().to_string();
            } else if body.contains(" = ") {
                config.push_str(body);
                config.push('\n');
            } else if let Some((k, v)) = body.split_once(": ") {
                meta.push((k.trim().to_string(), v.trim().to_string()));
            }
        }
        Ok(Self {
            command,
            config: RunConfig::parse(&config)?,
            meta,
        })
    }
}

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn finish_csv(out: String, rows: csv::Writer<Vec<u8>>) -> String {
    let bytes = rows.into_inner().expect("in-memory csv writer");
    out + &String::from_utf8(bytes).expect("csv output is utf-8")
}

pub fn write_field_data(header: &Header, data: &FieldData) -> String {
    let mut out = String::new();
    header.write(&mut out);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "q", "p"]).expect("in-memory write");
    for (i, x) in data.positions().iter().enumerate() {
        w.write_record([num(*x), num(data.q[i]), num(data.p[i])])
            .expect("in-memory write");
    }
    finish_csv(out, w)
}

pub fn read_field_data(path: &Path, text: &str) -> Result<(Option<Header>, FieldData), CliError> {
    let data_err = |msg: String| CliError::Data {
        path: path.to_path_buf(),
        msg,
    };
    let header = if text.starts_with("# qdeconv ") {
        Some(Header::parse(text)?)
    } else {
        None
    };
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let cols = rdr.headers().map_err(|e| data_err(e.to_string()))?.clone();
    let idx = |name: &str| {
        cols.iter()
            .position(|c| c == name)
            .ok_or_else(|| data_err(format!("missing column {name:?}")))
    };
    let (ix, iq, ip) = (idx("x")?, idx("q")?, idx("p")?);
    let mut xs = Vec::new();
    let mut q = Vec::new();
    let mut p = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| data_err(e.to_string()))?;
        let get = |i: usize| -> Result<f64, CliError> {
            let raw = rec.get(i).unwrap_or("");
            raw.parse()
                .map_err(|_| data_err(format!("row {}: cannot parse {raw:?}", row + 1)))
        };
        xs.push(get(ix)?);
        q.push(get(iq)?);
        p.push(get(ip)?);
    }
    let lattice_spacing = match (xs.first(), xs.get(1)) {
        (Some(a), Some(b)) => b - a,
        _ => header
            .as_ref()
            .map_or(1.0, |h| h.config.model.lattice_spacing),
    };
    Ok((
        header,
        FieldData {
            q,
            p,
            lattice_spacing,
        },
    ))
}

pub const SPECTRUM_COLUMNS: [&str; 9] = [
    "k",
    "omega",
    "x",
    "eig_q_sqrt",
    "eig_p_sqrt",
    "eig_q_bures",
    "eig_p_bures",
    "naive_inverse",
    "status",
];

/// One row per mode in ascending `k`. The status is the worse of the two
/// metrics, which in practice is the square-root one.
pub fn write_spectrum(header: &Header, sqrt: &KernelSpectrum, bures: &KernelSpectrum) -> String {
    let mut out = String::new();
    header.write(&mut out);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SPECTRUM_COLUMNS).expect("in-memory write");
    for (s, b) in sqrt.rows.iter().zip(&bures.rows) {
        debug_assert_eq!(s.j, b.j);
        let status = if s.status != ModeStatus::Ok {
            s.status
        } else {
            b.status
        };
        w.write_record([
            num(s.k),
            num(s.omega),
            num(s.x),
            num(s.eig_q),
            num(s.eig_p),
            num(b.eig_q),
            num(b.eig_p),
            num(s.naive_inverse),
            status.as_str().to_string(),
        ])
        .expect("in-memory write");
    }
    finish_csv(out, w)
}

/// Parsed spectrum file, for tests and downstream scripts.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    pub header: Header,
    pub rows: Vec<[f64; 8]>,
    pub status: Vec<ModeStatus>,
}

pub fn read_spectrum(path: &Path, text: &str) -> Result<SpectrumTable, CliError> {
    let data_err = |msg: String| CliError::Data {
        path: path.to_path_buf(),
        msg,
    };
    let header = Header::parse(text)?;
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let cols = rdr.headers().map_err(|e| data_err(e.to_string()))?.clone();
    if cols.iter().ne(SPECTRUM_COLUMNS) {
        return Err(data_err(format!("unexpected columns {cols:?}")));
    }
    let mut rows = Vec::new();
    let mut status = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| data_err(e.to_string()))?;
        let mut r = [0.0; 8];
        for (i, v) in r.iter_mut().enumerate() {
            *v = rec[i]
                .parse()
                .map_err(|_| data_err(format!("bad number {:?}", &rec[i])))?;
        }
        rows.push(r);
        status.push(
            rec[8]
                .parse()
                .map_err(|e: qdeconv_core::Error| data_err(e.to_string()))?,
        );
    }
    Ok(SpectrumTable {
        header,
        rows,
        status,
    })
}

/// Text block with the matrices of a failing model, for replay.
pub fn write_matrices(title: &str, blocks: &[(&str, &PhaseMatrix)]) -> String {
    let mut out = format!("# {title}\n");
    for (name, m) in blocks {
        let _ = writeln!(out, "[{name}] {}x{}", m.nrows(), m.ncols());
        for r in 0..m.nrows() {
            let row: Vec<String> = (0..m.ncols()).map(|c| num(m[(r, c)])).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
    }
    out
}

/// Inverse of [`write_matrices`].
pub fn read_matrices(text: &str) -> Result<Vec<(String, PhaseMatrix)>, String> {
    let mut out = Vec::new();
    let mut lines = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    while let Some(head) = lines.next() {
        let (name, shape) = head
            .strip_prefix('[')
            .and_then(|h| h.split_once("] "))
            .ok_or_else(|| format!("bad block header {head:?}"))?;
        let (r, c) = shape
            .split_once('x')
            .ok_or_else(|| format!("bad shape {shape:?}"))?;
        let (r, c): (usize, usize) = (
            r.parse().map_err(|_| format!("bad shape {shape:?}"))?,
            c.parse().map_err(|_| format!("bad shape {shape:?}"))?,
        );
        let mut vals = Vec::with_capacity(r * c);
        for _ in 0..r {
            let row = lines.next().ok_or("truncated matrix")?;
            for v in row.split(',') {
                vals.push(
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| format!("bad number {v:?}"))?,
                );
            }
        }
        if vals.len() != r * c {
            return Err(format!(
                "block {name} has {} entries, expected {}",
                vals.len(),
                r * c
            ));
        }
        out.push((name.to_string(), PhaseMatrix::from_row_slice(r, c, &vals)));
    }
    Ok(out)
}
