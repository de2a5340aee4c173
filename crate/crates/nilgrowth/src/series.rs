//! Sequence-level analysis: asymptotic model selection between `n^d` and
//! `n^d log n`, and export of growth sequences as series coefficients.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::ball::loglog_slope;
use crate::error::{NilError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelFamily {
    #[serde(rename = "poly_d")]
    Poly,
    #[serde(rename = "poly_d_log")]
    PolyLog,
}

impl ModelFamily {
    fn shape(self, degree: u32, n: f64) -> f64 {
        let p = n.powi(degree as i32);
        match self {
            ModelFamily::Poly => p,
            ModelFamily::PolyLog => p * n.ln(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticModel {
    pub family: ModelFamily,
    pub degree: u32,
    pub constant: f64,
    /// Largest relative deviation `|v / (a m(n)) - 1|` on the window.
    pub residual: f64,
    pub window: (u64, u64),
}

fn fit(points: &[(f64, f64)], family: ModelFamily, degree: u32, window: (u64, u64)) -> AsymptoticModel {
    let logs: Vec<f64> = points
        .iter()
        .map(|&(n, v)| v.ln() - family.shape(degree, n).ln())
        .collect();
    let log_a = logs.iter().sum::<f64>() / logs.len() as f64;
    let constant = log_a.exp();
    let residual = points
        .iter()
        .map(|&(n, v)| (v / (constant * family.shape(degree, n)) - 1.0).abs())
        .fold(0.0, f64::max);
    AsymptoticModel {
        family,
        degree,
        constant,
        residual,
        window,
    }
}

/// Fits both families for integer degrees around the log-log slope and
/// keeps the smallest residual; near-ties go to `poly_d`.
pub fn select_asymptotic_model(values: &[f64], window: (u64, u64)) -> Result<AsymptoticModel> {
    let (lo, hi) = window;
    if lo < 2 || hi as usize >= values.len() || hi < lo || hi - lo + 1 < 6 {
        return Err(NilError::Usage(format!(
            "model window {lo}:{hi} needs at least 6 points with 2 <= n < {}",
            values.len()
        )));
    }
    let points: Vec<(f64, f64)> = (lo..=hi).map(|n| (n as f64, values[n as usize])).collect();
    if points.iter().any(|&(_, v)| !(v > 0.0) || !v.is_finite()) {
        return Err(NilError::Usage("model selection needs positive values".into()));
    }
    let slope = loglog_slope(&points);
    let first = (slope.floor() as i64 - 1).max(0) as u32;
    let last = (slope.ceil() as i64 + 1).max(0) as u32;
    let mut best: Option<AsymptoticModel> = None;
    for degree in first..=last {
        for family in [ModelFamily::Poly, ModelFamily::PolyLog] {
            let cand = fit(&points, family, degree, window);
            let better = match &best {
                None => true,
                Some(b) => cand.residual < b.residual * (1.0 - 1e-9),
            };
            if better {
                best = Some(cand);
            }
        }
    }
    Ok(best.expect("at least one candidate"))
}

/// A growth sequence packaged as the coefficients of its series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTable {
    pub group: String,
    pub generating_set: String,
    pub kind: String,
    pub values: Vec<u128>,
}

impl SeriesTable {
    pub fn new(group: impl Into<String>, generating_set: impl Into<String>, kind: impl Into<String>, values: Vec<u128>) -> Self {
        Self {
            group: group.into(),
            generating_set: generating_set.into(),
            kind: kind.into(),
            values,
        }
    }

    pub fn to_table(&self, manifest: Option<&str>) -> Table {
        let mut comments = Vec::new();
        if let Some(m) = manifest {
            comments.push(("manifest".to_string(), m.to_string()));
        }
        comments.push(("group".into(), self.group.clone()));
        comments.push(("generating_set".into(), self.generating_set.clone()));
        comments.push(("kind".into(), self.kind.clone()));
        Table {
            comments,
            headers: vec!["n".into(), "value".into()],
            rows: self
                .values
                .iter()
                .enumerate()
                .map(|(n, v)| vec![n.to_string(), v.to_string()])
                .collect(),
        }
    }

    /// CSV with `#` metadata lines followed by `n,value` rows.
    pub fn write_csv<W: Write>(&self, out: W, manifest: Option<&str>) -> Result<()> {
        self.to_table(manifest).write_csv(out)
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let table = read_table(input)?;
        let mut series = SeriesTable::new(
            table.meta("group").unwrap_or_default(),
            table.meta("generating_set").unwrap_or_default(),
            table.meta("kind").unwrap_or_default(),
            Vec::new(),
        );
        let col = table.column_index("value").unwrap_or(1);
        for (i, row) in table.rows.iter().enumerate() {
            let n: usize = parse_cell(&row[0])?;
            if n != i {
                return Err(NilError::Usage(format!("series rows must start at n = 0 and be consecutive; row {i} has n = {n}")));
            }
            series.values.push(parse_cell(&row[col])?);
        }
        Ok(series)
    }
}

fn parse_cell<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| NilError::Usage(format!("cannot parse CSV cell {s:?}")))
}

/// A CSV table with its `# key: value` comment lines.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub comments: Vec<(String, String)>,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn meta(&self, key: &str) -> Option<String> {
        self.comments.iter().find(|(k, _)| k == key).map(|(_, v)| v.clone())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    /// `# key: value` lines, the header and the rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let io = |e| NilError::io("<csv>", e);
        for (k, v) in &self.comments {
            writeln!(out, "# {k}: {v}").map_err(io)?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.headers)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush().map_err(io)?;
        Ok(())
    }

    /// The sequence in column `name` (default `value`, else the last
    /// column), indexed by the first column, which must run `0, 1, 2, ..`.
    pub fn sequence<T: std::str::FromStr>(&self, name: Option<&str>) -> Result<Vec<T>> {
        let col = match name {
            Some(c) => self
                .column_index(c)
                .ok_or_else(|| NilError::Usage(format!("no column {c:?} in table")))?,
            None => self
                .column_index("value")
                .unwrap_or(self.headers.len().saturating_sub(1)),
        };
        self.rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let n: usize = parse_cell(&row[0])?;
                if n != i {
                    return Err(NilError::Usage(format!("row {i} has n = {n}; expected consecutive n from 0")));
                }
                parse_cell(&row[col])
            })
            .collect()
    }
}

pub fn read_table<R: BufRead>(input: R) -> Result<Table> {
    let mut comments = Vec::new();
    let mut body = String::new();
    for line in input.lines() {
        let line = line.map_err(|e| NilError::io("<table>", e))?;
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.split_once(':') {
                comments.push((k.trim().to_string(), v.trim().to_string()));
            }
        } else if !line.trim().is_empty() {
            body.push_str(&line);
            body.push('\n');
        }
    }
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let headers = reader.headers()?.iter().map(str::to_string).collect();
    let rows = reader
        .records()
        .map(|r| r.map(|rec| rec.iter().map(str::to_string).collect()))
        .collect::<std::result::Result<_, _>>()?;
    Ok(Table { comments, headers, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(f: impl Fn(f64) -> f64, len: usize) -> Vec<f64> {
        (0..len).map(|n| f(n as f64)).collect()
    }

    #[test]
    fn pure_quartic() {
        let values = seq(|n| 7.0 * n.powi(4), 60);
        let m = select_asymptotic_model(&values, (10, 50)).unwrap();
        assert_eq!((m.family, m.degree), (ModelFamily::Poly, 4));
        assert!(m.residual < 1e-9);
        assert!((m.constant - 7.0).abs() < 1e-6);
    }

    #[test]
    fn log_family_detected() {
        let values = seq(|n| 3.0 * n * n * n.max(1.0).ln(), 200);
        let m = select_asymptotic_model(&values, (20, 150)).unwrap();
        assert_eq!((m.family, m.degree), (ModelFamily::PolyLog, 2));
    }

    #[test]
    fn rejects_bad_windows() {
        let values = seq(|n| n + 1.0, 20);
        assert!(select_asymptotic_model(&values, (5, 8)).is_err());
        assert!(select_asymptotic_model(&values, (1, 10)).is_err());
        assert!(select_asymptotic_model(&values, (5, 25)).is_err());
        let zeros = vec![0.0; 20];
        assert!(select_asymptotic_model(&zeros, (3, 15)).is_err());
    }

    #[test]
    fn series_round_trip() {
        let s = SeriesTable::new("H_1", "standard", "conjugacy", vec![1, 5, 17, 1 << 70]);
        let mut buf = Vec::new();
        s.write_csv(&mut buf, Some("x.manifest.json")).unwrap();
        let back = SeriesTable::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, s);
        let ones = SeriesTable::new("Z", "standard", "constant", vec![1; 5]);
        let mut buf = Vec::new();
        ones.write_csv(&mut buf, None).unwrap();
        assert_eq!(SeriesTable::read_csv(buf.as_slice()).unwrap().values, vec![1; 5]);
    }
}
