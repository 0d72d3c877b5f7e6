//! Numeric containers shared by every algorithm: a dense row-major matrix,
//! labelled datasets, finalized partitions, and CSV ingestion.

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Builds a matrix from equally sized rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn iter_rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.iter_rows().map(<[f64]>::to_vec).collect()
    }

    /// Keeps only the listed rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Matrix {
            rows: indices.len(),
            cols: self.cols,
            data,
        }
    }
}

/// Euclidean distance between two equally long vectors.
pub fn euclidean_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(squared_distance(a, b).sqrt())
}

/// Squared Euclidean distance; callers guarantee equal lengths.
#[inline]
pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    squared_distance(a, b).sqrt()
}

/// Coordinate-wise mean of a nonempty set of points.
pub fn centroid_of<R: AsRef<[f64]>>(points: &[R]) -> Result<Vec<f64>> {
    let first = points.first().ok_or(Error::EmptyCluster)?.as_ref();
    let mut sum = vec![0.0; first.len()];
    for p in points {
        let p = p.as_ref();
        if p.len() != sum.len() {
            return Err(Error::DimensionMismatch {
                expected: sum.len(),
                got: p.len(),
            });
        }
        for (s, v) in sum.iter_mut().zip(p) {
            *s += v;
        }
    }
    let count = points.len() as f64;
    sum.iter_mut().for_each(|s| *s /= count);
    Ok(sum)
}

/// The universe of `m` points with `n` features and optional reference classes.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    points: Matrix,
    labels: Option<Vec<usize>>,
}

impl Dataset {
    /// Validates the points and re-indexes labels to `0..C` in order of first
    /// appearance.
    pub fn new(name: impl Into<String>, points: Matrix, labels: Option<Vec<usize>>) -> Result<Self> {
        if points.rows() < 2 {
            return Err(Error::TooFewPoints {
                min: 2,
                got: points.rows(),
            });
        }
        if points.cols() == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        for (row, r) in points.iter_rows().enumerate() {
            if let Some(col) = r.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { row, col });
            }
        }
        let labels = match labels {
            Some(l) if l.len() != points.rows() => {
                return Err(Error::LengthMismatch {
                    left: points.rows(),
                    right: l.len(),
                })
            }
            Some(l) => Some(reindex(&l)),
            None => None,
        };
        Ok(Self {
            name: name.into(),
            points,
            labels,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn points(&self) -> &Matrix {
        &self.points
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    /// Labels, or [`Error::MissingLabels`] when the dataset is unlabelled.
    pub fn require_labels(&self) -> Result<&[usize]> {
        self.labels()
            .ok_or_else(|| Error::MissingLabels(self.name.clone()))
    }

    /// Number of points, `m`.
    pub fn len(&self) -> usize {
        self.points.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.points.rows() == 0
    }

    /// Number of features, `n`.
    pub fn dim(&self) -> usize {
        self.points.cols()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        self.points.row(i)
    }

    /// Number of reference classes, if labelled.
    pub fn class_count(&self) -> Option<usize> {
        self.labels
            .as_ref()
            .map(|l| l.iter().max().map_or(0, |&c| c + 1))
    }

    /// Copy with each feature centered and scaled to unit (population)
    /// variance. Constant features are only centered.
    pub fn zscored(&self) -> Dataset {
        let (m, n) = (self.len(), self.dim());
        let mut mean = vec![0.0; n];
        for r in self.points.iter_rows() {
            for (acc, v) in mean.iter_mut().zip(r) {
                *acc += v;
            }
        }
        mean.iter_mut().for_each(|v| *v /= m as f64);
        let mut var = vec![0.0; n];
        for r in self.points.iter_rows() {
            for j in 0..n {
                var[j] += (r[j] - mean[j]).powi(2);
            }
        }
        let std: Vec<f64> = var.iter().map(|v| (v / m as f64).sqrt()).collect();
        let mut data = Vec::with_capacity(m * n);
        for r in self.points.iter_rows() {
            for j in 0..n {
                let c = r[j] - mean[j];
                data.push(if std[j] > 0.0 { c / std[j] } else { c });
            }
        }
        Dataset {
            name: self.name.clone(),
            points: Matrix { rows: m, cols: n, data },
            labels: self.labels.clone(),
        }
    }
}

fn reindex<T: Eq + std::hash::Hash + Clone>(raw: &[T]) -> Vec<usize> {
    let mut seen = HashMap::new();
    raw.iter()
        .map(|l| {
            let next = seen.len();
            *seen.entry(l.clone()).or_insert(next)
        })
        .collect()
}

/// Assignment of every point to one of `k` clusters with per-cluster means.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    assignments: Vec<usize>,
    centroids: Matrix,
}

impl Partition {
    /// Builds a finalized partition, computing each centroid as the mean of
    /// its members. Ids must cover `0..k` with no empty cluster.
    pub fn from_assignments(points: &Matrix, assignments: Vec<usize>) -> Result<Self> {
        if assignments.len() != points.rows() {
            return Err(Error::LengthMismatch {
                left: points.rows(),
                right: assignments.len(),
            });
        }
        let k = assignments.iter().max().map_or(0, |&c| c + 1);
        let (centroids, counts) = cluster_means(points, &assignments, k);
        if counts.contains(&0) {
            return Err(Error::EmptyCluster);
        }
        Ok(Self {
            assignments,
            centroids,
        })
    }

    pub(crate) fn from_parts(assignments: Vec<usize>, centroids: Matrix) -> Self {
        Self {
            assignments,
            centroids,
        }
    }

    pub fn assignments(&self) -> &[usize] {
        &self.assignments
    }

    pub fn centroids(&self) -> &Matrix {
        &self.centroids
    }

    pub fn centroid(&self, j: usize) -> &[f64] {
        self.centroids.row(j)
    }

    /// Cluster count.
    pub fn k(&self) -> usize {
        self.centroids.rows()
    }

    /// Member count of every cluster.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k()];
        for &c in &self.assignments {
            sizes[c] += 1;
        }
        sizes
    }

    /// Row indices of the members of cluster `j`, ascending.
    pub fn members(&self, j: usize) -> Vec<usize> {
        self.assignments
            .iter()
            .enumerate()
            .filter_map(|(i, &c)| (c == j).then_some(i))
            .collect()
    }

    /// Within-cluster sum of squared distances to the centroids.
    pub fn sse(&self, points: &Matrix) -> f64 {
        self.assignments
            .iter()
            .enumerate()
            .map(|(i, &c)| squared_distance(points.row(i), self.centroids.row(c)))
            .sum()
    }
}

/// Per-cluster coordinate means and member counts. Empty clusters get a zero row.
pub(crate) fn cluster_means(points: &Matrix, assignments: &[usize], k: usize) -> (Matrix, Vec<usize>) {
    let mut sums = Matrix::zeros(k, points.cols());
    let mut counts = vec![0usize; k];
    for (i, &c) in assignments.iter().enumerate() {
        counts[c] += 1;
        for (s, v) in sums.row_mut(c).iter_mut().zip(points.row(i)) {
            *s += v;
        }
    }
    for (j, &count) in counts.iter().enumerate() {
        if count > 0 {
            sums.row_mut(j).iter_mut().for_each(|s| *s /= count as f64);
        }
    }
    (sums, counts)
}

/// Which CSV column, if any, holds the reference class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelColumn {
    #[default]
    None,
    Last,
    /// Zero-based column index.
    Index(usize),
}

impl std::str::FromStr for LabelColumn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "last" => Ok(LabelColumn::Last),
            "none" => Ok(LabelColumn::None),
            _ => s
                .parse()
                .map(LabelColumn::Index)
                .map_err(|_| Error::InvalidSpec(format!("bad label column `{s}`: expected `last`, `none` or an index"))),
        }
    }
}

/// Reads a comma-separated dataset.
///
/// A first row with a non-numeric cell outside the label column is taken as a
/// header. Labels may be arbitrary strings; they are re-indexed to `0..C` in
/// order of first appearance. Reported row and column numbers are 1-based.
pub fn load_csv(path: impl AsRef<Path>, label_column: LabelColumn) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let name = path
        .file_stem()
        .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
    read_csv(file, &name, label_column).map_err(|e| match e {
        Error::Ingest { row, col, message, .. } => Error::Ingest {
            path: path.to_path_buf(),
            row,
            col,
            message,
        },
        Error::Io { source, .. } => Error::Io {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })
}

/// [`load_csv`] over any reader; error paths are left empty.
pub fn read_csv<R: io::Read>(reader: R, name: &str, label_column: LabelColumn) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let ingest = |row: usize, col: usize, message: String| Error::Ingest {
        path: Default::default(),
        row,
        col,
        message,
    };

    let mut arity = None;
    let mut label_idx = None;
    let mut features = Vec::new();
    let mut raw_labels = Vec::new();
    let mut first = true;

    for (record_no, record) in rdr.records().enumerate() {
        let line = record_no + 1;
        let record = record.map_err(|e| {
            let line = e.position().map_or(line as u64, |p| p.line()) as usize;
            ingest(line, 0, e.to_string())
        })?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let width = *arity.get_or_insert(record.len());
        if record.len() != width {
            return Err(ingest(
                line,
                record.len().min(width) + 1,
                format!("expected {width} columns, found {}", record.len()),
            ));
        }
        let lbl = *label_idx.get_or_insert(match label_column {
            LabelColumn::None => None,
            LabelColumn::Last => Some(width - 1),
            LabelColumn::Index(i) => Some(i),
        });
        if let Some(i) = lbl {
            if i >= width {
                return Err(ingest(line, i + 1, format!("label column {i} out of range for {width} columns")));
            }
        }

        let is_feature = |j: &usize| Some(*j) != lbl;
        // Only the first row may be a header.
        if std::mem::take(&mut first)
            && (0..width)
                .filter(is_feature)
                .any(|j| record[j].parse::<f64>().is_err())
        {
            continue;
        }
        for j in (0..width).filter(is_feature) {
            let cell = &record[j];
            let v: f64 = cell
                .parse()
                .map_err(|_| ingest(line, j + 1, format!("cannot parse `{cell}` as a number")))?;
            if !v.is_finite() {
                return Err(ingest(line, j + 1, format!("non-finite value `{cell}`")));
            }
            features.push(v);
        }
        if let Some(i) = lbl {
            raw_labels.push(record[i].to_string());
        }
    }

    let Some(width) = arity else {
        return Err(Error::EmptyDataset);
    };
    let n = width - usize::from(label_idx.flatten().is_some());
    if features.is_empty() || n == 0 {
        return Err(Error::EmptyDataset);
    }
    let m = features.len() / n;
    let labels = label_idx.flatten().map(|_| reindex(&raw_labels));
    Dataset::new(name, Matrix::new(m, n, features)?, labels)
}

/// Writes features (shortest round-trip decimal form) followed by the label,
/// if any, as the last column. No header row.
pub fn write_csv<W: Write>(dataset: &Dataset, writer: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut record = Vec::with_capacity(dataset.dim() + 1);
    for (i, row) in dataset.points().iter_rows().enumerate() {
        record.clear();
        record.extend(row.iter().map(f64::to_string));
        if let Some(labels) = dataset.labels() {
            record.push(labels[i].to_string());
        }
        w.write_record(&record)?;
    }
    w.flush()
}

pub fn save_csv(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    write_csv(dataset, io::BufWriter::new(file)).map_err(io_err)
}
