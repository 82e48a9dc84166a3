//! Data ingestion: delimited and LIBSVM-format parsing, label mapping to
//! {-1, +1}, min-max scaling into the basis domain, and seeded train/test
//! splits (ChaCha8 generator, reproducible across platforms).

use std::io::BufRead;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::basis::BasisKind;
use crate::error::{Error, Result};

/// A labeled data matrix. Rows are points, labels are +1/-1.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    m: usize,
    d: usize,
    x: Vec<f64>,
    y: Vec<f64>,
    names: Option<Vec<String>>,
}

impl Dataset {
    pub fn new(x: Vec<f64>, d: usize, y: Vec<f64>, names: Option<Vec<String>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("dataset needs at least one feature"));
        }
        if y.is_empty() || x.len() != y.len() * d {
            return Err(Error::invalid(format!(
                "feature buffer of {} entries does not match {} labels x {d} dims",
                x.len(),
                y.len()
            )));
        }
        if let Some(n) = &names {
            if n.len() != d {
                return Err(Error::invalid("feature name count does not match d"));
            }
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("dataset contains non-finite feature values"));
        }
        for &v in &y {
            if v != 1.0 && v != -1.0 {
                return Err(Error::invalid(format!("label {v} is not +1 or -1")));
            }
        }
        Ok(Self {
            m: y.len(),
            d,
            x,
            y,
            names,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.x[i * self.d..(i + 1) * self.d]
    }

    pub fn positives(&self) -> usize {
        self.y.iter().filter(|&&v| v == 1.0).count()
    }

    /// Writes rows as `label<delim>x1<delim>...` with full float precision.
    pub fn write_delimited(&self, w: &mut impl std::io::Write, delimiter: char) -> Result<()> {
        for i in 0..self.m {
            write!(w, "{}", self.y[i])?;
            for v in self.row(i) {
                write!(w, "{delimiter}{v}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Options for [`parse_delimited`].
#[derive(Debug, Clone)]
pub struct DelimitedOptions {
    pub delimiter: char,
    pub label_column: usize,
    pub header: bool,
}

impl Default for DelimitedOptions {
    fn default() -> Self {
        Self {
            delimiter: ',',
            label_column: 0,
            header: false,
        }
    }
}

/// Raw labels found in a source; {0,1} maps to {-1,+1}, {-1,+1} stays.
fn map_labels(raw: Vec<(usize, f64)>) -> Result<Vec<f64>> {
    let mut saw_zero_line = None;
    let mut saw_neg_line = None;
    for &(line, v) in &raw {
        if v == 0.0 {
            saw_zero_line = saw_zero_line.or(Some(line));
        } else if v == -1.0 {
            saw_neg_line = saw_neg_line.or(Some(line));
        } else if v != 1.0 {
            return Err(Error::parse(
                line,
                format!("label {v} not in the {{0,1}} or {{-1,+1}} alphabet"),
            ));
        }
    }
    if let (Some(zl), Some(_)) = (saw_zero_line, saw_neg_line) {
        return Err(Error::parse(
            zl,
            "labels mix 0 and -1; use a single alphabet".to_string(),
        ));
    }
    Ok(raw
        .into_iter()
        .map(|(_, v)| if v <= 0.0 { -1.0 } else { 1.0 })
        .collect())
}

/// Parses delimiter-separated numeric rows with one label column.
pub fn parse_delimited(reader: impl BufRead, opts: &DelimitedOptions) -> Result<Dataset> {
    let mut names: Option<Vec<String>> = None;
    let mut raw_labels: Vec<(usize, f64)> = Vec::new();
    let mut x: Vec<f64> = Vec::new();
    let mut d: Option<usize> = None;

    let mut lineno = 0usize;
    for line in reader.lines() {
        lineno += 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(opts.delimiter).map(str::trim).collect();
        if opts.header && names.is_none() && raw_labels.is_empty() {
            names = Some(
                fields
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != opts.label_column)
                    .map(|(_, s)| s.to_string())
                    .collect(),
            );
            continue;
        }
        if opts.label_column >= fields.len() {
            return Err(Error::parse(
                lineno,
                format!(
                    "label column {} out of range for {} fields",
                    opts.label_column,
                    fields.len()
                ),
            ));
        }
        let row_d = fields.len() - 1;
        match d {
            None => {
                if row_d == 0 {
                    return Err(Error::parse(lineno, "row has no feature columns"));
                }
                d = Some(row_d);
            }
            Some(expect) if expect != row_d => {
                return Err(Error::parse(
                    lineno,
                    format!("ragged row: {row_d} features, expected {expect}"),
                ))
            }
            _ => {}
        }
        for (i, f) in fields.iter().enumerate() {
            let v: f64 = f
                .parse()
                .map_err(|_| Error::parse(lineno, format!("non-numeric field {f:?}")))?;
            if i == opts.label_column {
                raw_labels.push((lineno, v));
            } else {
                if !v.is_finite() {
                    return Err(Error::parse(lineno, format!("non-finite value {f:?}")));
                }
                x.push(v);
            }
        }
    }
    let d = d.ok_or_else(|| Error::parse(lineno, "no data rows"))?;
    let y = map_labels(raw_labels)?;
    Dataset::new(x, d, y, names)
}

/// Parses sparse LIBSVM text: `label idx:val ...` with 1-based strictly
/// increasing indices. Absent entries are zero; `d` is the largest index.
pub fn parse_libsvm(reader: impl BufRead) -> Result<Dataset> {
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut raw_labels: Vec<(usize, f64)> = Vec::new();
    let mut d = 0usize;

    let mut lineno = 0usize;
    for line in reader.lines() {
        lineno += 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut parts = trimmed.split_whitespace();
        let label_str = parts.next().expect("nonempty line has a first token");
        let label: f64 = label_str
            .parse()
            .map_err(|_| Error::parse(lineno, format!("bad label {label_str:?}")))?;
        raw_labels.push((lineno, label));
        let mut row = Vec::new();
        let mut prev_idx = 0usize;
        for pair in parts {
            let (idx_str, val_str) = pair
                .split_once(':')
                .ok_or_else(|| Error::parse(lineno, format!("malformed pair {pair:?}")))?;
            let idx: usize = idx_str
                .parse()
                .ok()
                .filter(|&i| i >= 1)
                .ok_or_else(|| Error::parse(lineno, format!("bad feature index {idx_str:?}")))?;
            if idx <= prev_idx {
                return Err(Error::parse(
                    lineno,
                    format!("feature indices must be strictly increasing, got {idx} after {prev_idx}"),
                ));
            }
            prev_idx = idx;
            let val: f64 = val_str
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad feature value {val_str:?}")))?;
            if !val.is_finite() {
                return Err(Error::parse(lineno, format!("non-finite value {val_str:?}")));
            }
            d = d.max(idx);
            row.push((idx, val));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::parse(lineno, "no data rows"));
    }
    // a file whose rows carry no features at all still needs d >= 1
    let d = d.max(1);
    let mut x = vec![0.0; rows.len() * d];
    for (r, row) in rows.iter().enumerate() {
        for &(idx, val) in row {
            x[r * d + idx - 1] = val;
        }
    }
    let y = map_labels(raw_labels)?;
    Dataset::new(x, d, y, None)
}

/// Per-dimension min-max record that maps data into a basis domain.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRecord {
    basis: BasisKind,
    per_dim: Vec<(f64, f64)>,
}

impl ScalingRecord {
    pub fn basis(&self) -> BasisKind {
        self.basis
    }

    pub fn per_dim(&self) -> &[(f64, f64)] {
        &self.per_dim
    }

    pub fn from_parts(basis: BasisKind, per_dim: Vec<(f64, f64)>) -> Result<Self> {
        for &(lo, hi) in &per_dim {
            if !(lo.is_finite() && hi.is_finite() && hi >= lo) {
                return Err(Error::invalid(format!("bad scaling range [{lo}, {hi}]")));
            }
        }
        Ok(Self { basis, per_dim })
    }

    pub fn is_constant(&self, dim: usize) -> bool {
        let (lo, hi) = self.per_dim[dim];
        lo == hi
    }
}

/// Fits per-dimension (min, max) on `data` for the given target domain.
pub fn fit_scaling(data: &Dataset, basis: BasisKind) -> ScalingRecord {
    let d = data.d();
    let mut per_dim = vec![(f64::INFINITY, f64::NEG_INFINITY); d];
    for i in 0..data.m() {
        for (j, &v) in data.row(i).iter().enumerate() {
            let (lo, hi) = &mut per_dim[j];
            *lo = lo.min(v);
            *hi = hi.max(v);
        }
    }
    ScalingRecord { basis, per_dim }
}

/// Applies a fitted record, clamping unseen values into the fitted range.
/// Returns the scaled data and the number of clamped entries.
pub fn apply_scaling(record: &ScalingRecord, data: &Dataset) -> Result<(Dataset, usize)> {
    if record.per_dim.len() != data.d() {
        return Err(Error::invalid(format!(
            "scaling record has {} dims, data has {}",
            record.per_dim.len(),
            data.d()
        )));
    }
    let (t_lo, t_hi) = record.basis.domain(data.d()).scaling_target();
    let mid = record.basis.domain(data.d()).midpoint();
    let span = t_hi - t_lo;
    let mut clamped = 0usize;
    let mut x = Vec::with_capacity(data.x().len());
    for i in 0..data.m() {
        for (j, &v) in data.row(i).iter().enumerate() {
            let (lo, hi) = record.per_dim[j];
            if lo == hi {
                x.push(mid);
                continue;
            }
            let mut v = v;
            if v < lo {
                v = lo;
                clamped += 1;
            } else if v > hi {
                v = hi;
                clamped += 1;
            }
            x.push(t_lo + (v - lo) / (hi - lo) * span);
        }
    }
    let scaled = Dataset::new(
        x,
        data.d(),
        data.y().to_vec(),
        data.names().map(|n| n.to_vec()),
    )?;
    Ok((scaled, clamped))
}

/// How to size the training part of a split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplitSpec {
    Count(usize),
    Ratio(f64),
}

/// Splits into disjoint, exhaustive (train, test) parts via a seeded
/// Fisher-Yates permutation. Identical seeds give identical partitions.
pub fn split(data: &Dataset, spec: SplitSpec, seed: u64) -> Result<(Dataset, Dataset)> {
    let m = data.m();
    let train_count = match spec {
        SplitSpec::Count(c) => c,
        SplitSpec::Ratio(r) => {
            if !(r > 0.0 && r < 1.0) {
                return Err(Error::invalid(format!(
                    "train ratio must lie in (0, 1), got {r}"
                )));
            }
            (r * m as f64).round() as usize
        }
    };
    if train_count == 0 || train_count >= m {
        return Err(Error::invalid(format!(
            "train count {train_count} must satisfy 1 <= count < {m}"
        )));
    }
    let mut order: Vec<usize> = (0..m).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in (1..m).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }
    let take = |idx: &[usize]| -> Dataset {
        let mut x = Vec::with_capacity(idx.len() * data.d());
        let mut y = Vec::with_capacity(idx.len());
        for &i in idx {
            x.extend_from_slice(data.row(i));
            y.push(data.y()[i]);
        }
        Dataset::new(x, data.d(), y, data.names().map(|n| n.to_vec()))
            .expect("rows of a valid dataset stay valid")
    };
    Ok((take(&order[..train_count]), take(&order[train_count..])))
}
