//! Observed count data as a value/frequency table.

use crate::error::{Error, Result};
use serde::Serialize;

/// Count data aggregated as (value, frequency) pairs with cached power sums.
///
/// Values are strictly increasing and the total frequency is at least one.
/// A table loaded from a CSV whose last row is labelled `>=k` remembers that
/// the final cell is open-ended; the likelihood treats such observations as
/// exactly `k` while goodness-of-fit cells treat the cell as a tail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrequencyTable {
    rows: Vec<(u64, u64)>,
    n: u64,
    open_tail: Option<u64>,
}

impl FrequencyTable {
    pub fn from_rows(rows: Vec<(u64, u64)>) -> Result<Self> {
        Self::with_open_tail(rows, None)
    }

    pub fn with_open_tail(rows: Vec<(u64, u64)>, open_tail: Option<u64>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Data("frequency table has no rows".into()));
        }
        for pair in rows.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(Error::Data(format!(
                    "values must be strictly increasing, saw {} after {}",
                    pair[1].0, pair[0].0
                )));
            }
        }
        let n: u64 = rows.iter().map(|&(_, f)| f).sum();
        if n == 0 {
            return Err(Error::Data("total frequency must be at least one".into()));
        }
        if let Some(k) = open_tail {
            if rows.last().unwrap().0 != k {
                return Err(Error::Data(format!(
                    "open tail marker >= {k} must label the last row"
                )));
            }
        }
        Ok(Self { rows, n, open_tail })
    }

    pub fn from_observations(values: &[u64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Data("no observations provided".into()));
        }
        let mut sorted = values.to_vec();
        sorted.sort_unstable();
        let mut rows: Vec<(u64, u64)> = Vec::new();
        for v in sorted {
            match rows.last_mut() {
                Some((value, freq)) if *value == v => *freq += 1,
                _ => rows.push((v, 1)),
            }
        }
        Self::from_rows(rows)
    }

    /// Parses CSV content. Two layouts are accepted:
    ///
    /// * header `count,frequency` followed by aggregated rows, where the
    ///   final count may be written `>=k` for an open-ended cell;
    /// * header `x` followed by one raw observation per line.
    ///
    /// `#`-prefixed lines and blank lines are ignored.
    pub fn from_csv_str(content: &str) -> Result<Self> {
        let mut lines = content
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Data("CSV file is empty".into()))?;
        let header_norm = header.replace(' ', "").to_ascii_lowercase();
        match header_norm.as_str() {
            "count,frequency" => {
                let mut rows = Vec::new();
                let mut open_tail = None;
                for (line_no, line) in lines {
                    if open_tail.is_some() {
                        return Err(Error::Data(format!(
                            "line {line_no}: rows after an open-ended >= row"
                        )));
                    }
                    let mut parts = line.split(',');
                    let count_field = parts.next().unwrap_or("").trim();
                    let freq_field = parts.next().unwrap_or("").trim();
                    if parts.next().is_some() {
                        return Err(Error::Data(format!(
                            "line {line_no}: expected two fields, got more"
                        )));
                    }
                    let (value, open) = if let Some(rest) = count_field.strip_prefix(">=") {
                        (parse_u64(rest.trim(), line_no, "count")?, true)
                    } else {
                        (parse_u64(count_field, line_no, "count")?, false)
                    };
                    let freq = parse_u64(freq_field, line_no, "frequency")?;
                    if open {
                        open_tail = Some(value);
                    }
                    rows.push((value, freq));
                }
                Self::with_open_tail(rows, open_tail)
            }
            "x" => {
                let mut values = Vec::new();
                for (line_no, line) in lines {
                    values.push(parse_u64(line, line_no, "observation")?);
                }
                Self::from_observations(&values)
            }
            other => Err(Error::Data(format!(
                "unrecognized CSV header '{other}'; expected 'count,frequency' or 'x'"
            ))),
        }
    }

    pub fn from_csv_path(path: &std::path::Path) -> Result<Self> {
        let content = std::fs::read_to_string(path)
            .map_err(|e| Error::Data(format!("cannot read {}: {e}", path.display())))?;
        Self::from_csv_str(&content)
    }

    pub fn rows(&self) -> &[(u64, u64)] {
        &self.rows
    }

    /// Total number of observations.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Value of the open-ended final cell, when the source data had one.
    pub fn open_tail(&self) -> Option<u64> {
        self.open_tail
    }

    pub fn zero_count(&self) -> u64 {
        self.rows
            .first()
            .filter(|&&(v, _)| v == 0)
            .map_or(0, |&(_, f)| f)
    }

    pub fn max_value(&self) -> u64 {
        self.rows.last().map_or(0, |&(v, _)| v)
    }

    pub fn distinct_values(&self) -> usize {
        self.rows.iter().filter(|&&(_, f)| f > 0).count()
    }

    /// Σ f·x, exact.
    pub fn sum_x(&self) -> u64 {
        self.rows.iter().map(|&(v, f)| v * f).sum()
    }

    /// Σ f·x^r as f64.
    pub fn power_sum(&self, r: u32) -> f64 {
        self.rows
            .iter()
            .map(|&(v, f)| f as f64 * (v as f64).powi(r as i32))
            .sum()
    }

    /// r-th raw sample moment Σ f·x^r / n.
    pub fn raw_moment(&self, r: u32) -> f64 {
        self.power_sum(r) / self.n as f64
    }

    pub fn mean(&self) -> f64 {
        self.raw_moment(1)
    }

    /// Unbiased sample variance (n − 1 denominator).
    pub fn sample_variance(&self) -> f64 {
        let n = self.n as f64;
        if self.n < 2 {
            return 0.0;
        }
        let sx = self.power_sum(1);
        (self.power_sum(2) - sx * sx / n) / (n - 1.0)
    }

    /// Sample variance-to-mean ratio.
    pub fn dispersion_index(&self) -> f64 {
        self.sample_variance() / self.mean()
    }
}

fn parse_u64(field: &str, line_no: usize, what: &str) -> Result<u64> {
    field.parse::<u64>().map_err(|_| {
        Error::Data(format!(
            "line {line_no}: cannot parse {what} '{field}' as a nonnegative integer"
        ))
    })
}
