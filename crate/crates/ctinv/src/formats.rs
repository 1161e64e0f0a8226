//! File formats: phase-shift input, and CSV with a `#` metadata header.
//!
//! Every CSV written here starts with `# key = value` lines, then a header
//! row, then data. Numbers carry 12 significant digits, so reading a file and
//! writing it again reproduces it byte for byte.

use std::collections::HashSet;
use std::f64::consts::FRAC_PI_2;
use std::io::Write;
use std::path::Path;

use ctinv_core::consistency::{AdmissibilityMap, CellStatus};
use ctinv_core::ctcore::InputSet;
use ctinv_core::forward::{GridPotential, PhaseShiftTable};
use ctinv_core::glm::{PotentialProfile, TailFit};

use crate::error::CliError;

/// Name and version written into every output.
pub const TOOL: &str = concat!("ctinv ", env!("CARGO_PKG_VERSION"));

/// 12 significant digits in scientific notation.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.11e}")
}

/// Comma-joined [`fmt_num`] values.
pub fn fmt_list(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join(",")
}

fn parse_num(field: &str) -> Result<f64, String> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| format!("`{field}` is not a number"))
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Parses phase-shift input: one `l delta` pair per line, blank lines and
/// `#` comments ignored. `l` must be a distinct integer `>= 0` and `delta`
/// lie in `(-pi/2, pi/2]`.
pub fn read_phases(text: &str) -> Result<InputSet, CliError> {
    let mut pairs = Vec::new();
    let mut seen = HashSet::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: String| CliError::parse(n + 1, m);
        let fields: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|f| !f.is_empty())
            .collect();
        let [l, d] = fields[..] else {
            return Err(err(format!(
                "expected `l delta`, found {} fields",
                fields.len()
            )));
        };
        let ell: u32 = l
            .parse()
            .map_err(|_| err(format!("`{l}` is not a non-negative integer")))?;
        let delta = parse_num(d).map_err(err)?;
        if !(delta > -FRAC_PI_2 && delta <= FRAC_PI_2) {
            return Err(err(format!("phase shift {delta} is outside (-pi/2, pi/2]")));
        }
        if !seen.insert(ell) {
            return Err(err(format!("l = {ell} appears twice")));
        }
        pairs.push((ell, delta));
    }
    if pairs.is_empty() {
        return Err(CliError::Usage("the phase-shift file holds no data".into()));
    }
    Ok(InputSet::new(pairs)?)
}

pub fn read_phase_file(path: &Path) -> Result<InputSet, CliError> {
    read_phases(&read_text(path)?).map_err(|e| e.in_file(path))
}

/// Ordered `# key = value` header lines.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Metadata(Vec<(String, String)>);

impl Metadata {
    /// Starts with the tool version.
    pub fn new() -> Self {
        let mut m = Self::default();
        m.push("tool", TOOL);
        m
    }

    pub fn push(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.0.push((key.to_owned(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.0
    }

    /// Collects the `# key = value` lines of a file; other comments are skipped.
    pub fn parse(text: &str) -> Self {
        let entries = text
            .lines()
            .filter_map(|l| l.strip_prefix('#'))
            .filter_map(|l| l.split_once('='))
            .map(|(k, v)| (k.trim().to_owned(), v.trim().to_owned()))
            .collect();
        Self(entries)
    }
}

/// A CSV document: metadata, header row, rows of already formatted fields.
#[derive(Clone, Debug)]
pub struct Csv {
    pub meta: Metadata,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Source lines of the header and of each row, when parsed.
    lines: Vec<usize>,
}

impl Csv {
    pub fn new(meta: Metadata, header: &[&str]) -> Self {
        Self {
            meta,
            header: header.iter().map(|s| (*s).to_owned()).collect(),
            rows: Vec::new(),
            lines: Vec::new(),
        }
    }

    pub fn write_to(&self, out: &mut impl Write) -> Result<(), csv::Error> {
        for (k, v) in self.meta.entries() {
            writeln!(out, "# {k} = {v}")?;
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV output is UTF-8")
    }

    /// Reads a document written by [`write_to`](Self::write_to). Errors carry
    /// the line number.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut r = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = r.headers().map_err(|e| csv_error(&e))?;
        let header = headers.iter().map(str::to_owned).collect();
        let header_line = text
            .lines()
            .position(|l| !l.trim().is_empty() && !l.starts_with('#'))
            .map_or(0, |i| i + 1);
        let mut lines = vec![header_line];
        let mut rows = Vec::new();
        for record in r.records() {
            let record = record.map_err(|e| csv_error(&e))?;
            lines.push(record.position().map_or(0, |p| p.line() as usize));
            rows.push(record.iter().map(str::to_owned).collect());
        }
        Ok(Self {
            meta: Metadata::parse(text),
            header,
            rows,
            lines,
        })
    }

    /// Parses the numeric columns named in `columns`, in that order.
    pub fn numeric_columns(&self, columns: &[&str]) -> Result<Vec<Vec<f64>>, CliError> {
        let idx = columns
            .iter()
            .map(|c| {
                self.header
                    .iter()
                    .position(|h| h == c)
                    .ok_or_else(|| CliError::parse(self.line(0), format!("missing column `{c}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut out = vec![Vec::with_capacity(self.rows.len()); columns.len()];
        for (n, row) in self.rows.iter().enumerate() {
            for (col, &i) in out.iter_mut().zip(&idx) {
                let field = row.get(i).map(String::as_str).unwrap_or("");
                col.push(parse_num(field).map_err(|m| CliError::parse(self.line(n + 1), m))?);
            }
        }
        Ok(out)
    }

    /// Source line of the header (`0`) or of row `k - 1`; zero when unknown.
    fn line(&self, k: usize) -> usize {
        self.lines.get(k).copied().unwrap_or(0)
    }
}

fn csv_error(e: &csv::Error) -> CliError {
    let line = e.position().map_or(0, |p| p.line() as usize);
    CliError::parse(line, e.to_string())
}

/// `r,q` samples with `S`, `T`, the grid and the fitted tail as metadata.
pub fn potential_csv(profile: &PotentialProfile, s: &[f64], t: &[f64], lambda: f64) -> Csv {
    let mut meta = Metadata::new();
    meta.push("S", fmt_list(s))
        .push("T", fmt_list(t))
        .push("lambda", fmt_num(lambda));
    meta.push("h", fmt_num(profile.grid.step()))
        .push("q0", fmt_num(profile.q0));
    if let Some(tail) = &profile.tail {
        push_tail(&mut meta, tail);
    }
    let mut csv = Csv::new(meta, &["r", "q"]);
    csv.rows
        .extend(profile.samples().map(|(r, q)| vec![fmt_num(r), fmt_num(q)]));
    csv
}

/// The `q = 0` answer for vanishing phase shifts, on the same grid layout.
pub fn zero_potential_csv(s: &[f64], h: f64, lambda: f64) -> Csv {
    let mut meta = Metadata::new();
    meta.push("S", fmt_list(s))
        .push("T", "none")
        .push("lambda", fmt_num(lambda));
    meta.push("h", fmt_num(h)).push("q0", fmt_num(0.0));
    let mut csv = Csv::new(meta, &["r", "q"]);
    let n = (lambda / h).round() as usize;
    csv.rows
        .extend((1..=n).map(|i| vec![fmt_num(i as f64 * h), fmt_num(0.0)]));
    csv
}

const TAIL_KEYS: [&str; 6] = [
    "tail_alpha",
    "tail_beta",
    "tail_gamma",
    "tail_rms",
    "tail_from",
    "tail_to",
];

fn push_tail(meta: &mut Metadata, t: &TailFit) {
    for (k, v) in TAIL_KEYS
        .iter()
        .zip([t.alpha, t.beta, t.gamma, t.rms, t.r_from, t.r_to])
    {
        meta.push(k, fmt_num(v));
    }
}

fn read_tail(meta: &Metadata) -> Result<Option<TailFit>, CliError> {
    let values: Vec<Option<&str>> = TAIL_KEYS.iter().map(|k| meta.get(k)).collect();
    if values.iter().all(Option::is_none) {
        return Ok(None);
    }
    let v = values
        .iter()
        .zip(TAIL_KEYS)
        .map(|(v, k)| {
            let v = v.ok_or_else(|| CliError::parse(0, format!("metadata lacks `{k}`")))?;
            parse_num(v).map_err(|m| CliError::parse(0, format!("{k}: {m}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Some(TailFit {
        alpha: v[0],
        beta: v[1],
        gamma: v[2],
        rms: v[3],
        r_from: v[4],
        r_to: v[5],
    }))
}

/// Reads an `r,q` potential. `q0` and the tail are taken from the metadata
/// when present; the metadata is returned alongside.
pub fn read_potential(text: &str) -> Result<(GridPotential, Metadata), CliError> {
    let csv = Csv::parse(text)?;
    let mut cols = csv.numeric_columns(&["r", "q"])?;
    let q = cols.pop().expect("two columns");
    let r = cols.pop().expect("two columns");
    let origin = csv
        .meta
        .get("q0")
        .map(parse_num)
        .transpose()
        .map_err(|m| CliError::parse(0, format!("q0: {m}")))?;
    let tail = read_tail(&csv.meta)?;
    if tail.is_none() && q.last().is_some_and(|q| q.abs() > 1e-8) {
        log::warn!(
            "potential has no fitted tail and q = {:e} at the last sample; it is cut off there",
            q[q.len() - 1]
        );
    }
    Ok((GridPotential::new(r, q, origin, tail)?, csv.meta))
}

pub fn read_potential_file(path: &Path) -> Result<(GridPotential, Metadata), CliError> {
    read_potential(&read_text(path)?).map_err(|e| e.in_file(path))
}

/// `l,delta,B,residual`; partial waves that failed are listed as comments.
pub fn phase_table_csv(table: &PhaseShiftTable, mut meta: Metadata) -> Csv {
    for (ell, e) in &table.failures {
        meta.push(&format!("failed_l{ell}"), e.to_string());
    }
    let mut csv = Csv::new(meta, &["l", "delta", "B", "residual"]);
    csv.rows.extend(table.entries.iter().map(|e| {
        vec![
            e.ell.to_string(),
            fmt_num(e.delta),
            fmt_num(e.b),
            fmt_num(e.residual),
        ]
    }));
    csv
}

/// One row per cell, `L1` outer: `L1,L2,admissible,status`.
pub fn map_csv(map: &AdmissibilityMap, mut meta: Metadata) -> Csv {
    meta.push("S", fmt_list(map.s.values()));
    let mut csv = Csv::new(meta, &["L1", "L2", "admissible", "status"]);
    for (i, &l1) in map.axis1.iter().enumerate() {
        for (j, &l2) in map.axis2.iter().enumerate() {
            let c = map.cell(i, j);
            csv.rows.push(vec![
                fmt_num(l1),
                fmt_num(l2),
                u8::from(c.is_admissible()).to_string(),
                status_name(c).into(),
            ]);
        }
    }
    csv
}

pub fn status_name(c: CellStatus) -> &'static str {
    match c {
        CellStatus::Admissible => "admissible",
        CellStatus::Zero => "zero",
        CellStatus::Unsettled => "unsettled",
        CellStatus::Excluded => "excluded",
        CellStatus::Failed => "failed",
    }
}
