//! Datasets: synthetic hypercube-Gaussian generation, the bundled Iris data,
//! balanced subsetting and CSV I/O.
//!
//! CSV layout: a header `x0,...,x{d-1}` optionally followed by `,label`, then
//! one row per point. Coordinates are written with Rust's shortest
//! round-trip float formatting, so `read_csv(write_csv(ds)) == ds` exactly.

use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

const IRIS_CSV: &str = include_str!("../data/iris.csv");

/// `N` points in `d` dimensions, stored row-major, with optional class labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    name: String,
    n_points: usize,
    n_features: usize,
    points: Vec<f64>,
    labels: Option<Vec<usize>>,
}

impl Dataset {
    /// Build a dataset from row vectors, validating every invariant.
    pub fn new(
        name: impl Into<String>,
        rows: Vec<Vec<f64>>,
        labels: Option<Vec<usize>>,
    ) -> Result<Self> {
        let d = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::dataset("rows have differing dimensions"));
        }
        let n = rows.len();
        Self::from_flat(name, n, d, rows.into_iter().flatten().collect(), labels)
    }

    pub fn from_flat(
        name: impl Into<String>,
        n_points: usize,
        n_features: usize,
        points: Vec<f64>,
        labels: Option<Vec<usize>>,
    ) -> Result<Self> {
        if n_points < 2 {
            return Err(Error::dataset(format!(
                "need at least 2 points, got {n_points}"
            )));
        }
        if n_features < 1 {
            return Err(Error::dataset("need at least 1 feature"));
        }
        if points.len() != n_points * n_features {
            return Err(Error::LengthMismatch {
                expected: n_points * n_features,
                actual: points.len(),
            });
        }
        if let Some(i) = points.iter().position(|v| !v.is_finite()) {
            return Err(Error::dataset(format!(
                "non-finite coordinate at point {}",
                i / n_features
            )));
        }
        if let Some(labels) = &labels {
            if labels.len() != n_points {
                return Err(Error::LengthMismatch {
                    expected: n_points,
                    actual: labels.len(),
                });
            }
            let k = labels.iter().max().map_or(0, |m| m + 1);
            let mut seen = vec![false; k];
            labels.iter().for_each(|&l| seen[l] = true);
            if let Some(c) = seen.iter().position(|s| !s) {
                return Err(Error::dataset(format!("class {c} of {k} has no points")));
            }
        }
        Ok(Self {
            name: name.into(),
            n_points,
            n_features,
            points,
            labels,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        self.n_points == 0
    }

    pub fn dim(&self) -> usize {
        self.n_features
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.n_features)
    }

    /// Row-major coordinate buffer.
    pub fn as_flat(&self) -> &[f64] {
        &self.points
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    /// Number of ground-truth classes, if labelled.
    pub fn n_classes(&self) -> Option<usize> {
        self.labels
            .as_ref()
            .map(|l| l.iter().max().map_or(0, |m| m + 1))
    }

    /// Apply `f` to every coordinate row, keeping labels.
    pub fn map_points(&self, mut f: impl FnMut(&mut [f64])) -> Result<Self> {
        let mut points = self.points.clone();
        points.chunks_exact_mut(self.n_features).for_each(&mut f);
        Self::from_flat(
            self.name.clone(),
            self.n_points,
            self.n_features,
            points,
            self.labels.clone(),
        )
    }

    /// Reorder points so that output row `i` is input row `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.n_points {
            return Err(Error::LengthMismatch {
                expected: self.n_points,
                actual: order.len(),
            });
        }
        let points = order
            .iter()
            .flat_map(|&i| self.point(i).iter().copied())
            .collect();
        let labels = self
            .labels
            .as_ref()
            .map(|l| order.iter().map(|&i| l[i]).collect());
        Self::from_flat(
            self.name.clone(),
            self.n_points,
            self.n_features,
            points,
            labels,
        )
    }
}

/// Parameters for [`generate_synthetic`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n_points: usize,
    pub n_clusters: usize,
    pub n_features: usize,
    pub side_length: f64,
    pub std_dev: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(n_points: usize, n_clusters: usize, n_features: usize, seed: u64) -> Self {
        Self {
            n_points,
            n_clusters,
            n_features,
            side_length: 2.0,
            std_dev: 1.0,
            seed,
        }
    }

    pub fn with_side_length(mut self, side_length: f64) -> Self {
        self.side_length = side_length;
        self
    }

    pub fn with_std_dev(mut self, std_dev: f64) -> Self {
        self.std_dev = std_dev;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_points == 0 || self.n_clusters == 0 || self.n_features == 0 {
            return Err(Error::param(
                "n_points, n_clusters and n_features must be positive",
            ));
        }
        if !self.n_points.is_multiple_of(self.n_clusters) {
            return Err(Error::param(format!(
                "n_points ({}) must be divisible by n_clusters ({})",
                self.n_points, self.n_clusters
            )));
        }
        let vertices_exceeded =
            self.n_features < usize::BITS as usize && self.n_clusters > 1usize << self.n_features;
        if vertices_exceeded {
            return Err(Error::param(format!(
                "{} clusters do not fit on the {} vertices of a {}-cube",
                self.n_clusters,
                1u128 << self.n_features,
                self.n_features
            )));
        }
        if !(self.side_length.is_finite() && self.side_length > 0.0) {
            return Err(Error::param("side_length must be positive"));
        }
        if !(self.std_dev.is_finite() && self.std_dev >= 0.0) {
            return Err(Error::param("std_dev must be non-negative"));
        }
        Ok(())
    }
}

/// Number of leading coordinates that take part in Gray-code vertex
/// enumeration; the remaining coordinates stay at `-side/2`.
const GRAY_BITS_MAX: usize = 63;

fn gray(i: u64) -> u64 {
    i ^ (i >> 1)
}

/// Class centers: `k` consecutive hypercube vertices in Gray-code order,
/// starting from a seed-derived rotation.
pub fn hypercube_centers(spec: &SyntheticSpec) -> Result<Vec<Vec<f64>>> {
    spec.validate()?;
    let bits = spec.n_features.min(GRAY_BITS_MAX);
    let n_vertices = 1u64 << bits;
    let rotation = crate::rng::splitmix64(spec.seed) % n_vertices;
    let half = spec.side_length / 2.0;
    Ok((0..spec.n_clusters as u64)
        .map(|c| {
            let code = gray((rotation + c) % n_vertices);
            (0..spec.n_features)
                .map(|j| {
                    if j < bits && (code >> j) & 1 == 1 {
                        half
                    } else {
                        -half
                    }
                })
                .collect()
        })
        .collect())
}

/// Isotropic Gaussian blobs around distinct hypercube vertices, exactly
/// `N/k` points per class, with the point order shuffled.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Dataset> {
    let centers = hypercube_centers(spec)?;
    let per_class = spec.n_points / spec.n_clusters;
    let mut rng = rng_from_seed(spec.seed);

    let mut labels: Vec<usize> = (0..spec.n_clusters)
        .flat_map(|c| std::iter::repeat_n(c, per_class))
        .collect();
    labels.shuffle(&mut rng);

    let mut points = Vec::with_capacity(spec.n_points * spec.n_features);
    for &c in &labels {
        for &coord in &centers[c] {
            let z: f64 = StandardNormal.sample(&mut rng);
            points.push(coord + spec.std_dev * z);
        }
    }
    Dataset::from_flat(
        format!(
            "synthetic-n{}-k{}-d{}-s{}",
            spec.n_points, spec.n_clusters, spec.n_features, spec.seed
        ),
        spec.n_points,
        spec.n_features,
        points,
        Some(labels),
    )
}

/// Fisher's Iris data: 150 points, 4 features, 3 classes of 50.
pub fn load_iris() -> Dataset {
    parse_csv(IRIS_CSV.as_bytes(), "iris").expect("bundled iris.csv is valid")
}

/// Sample `n_points / k` points without replacement from each of the first
/// `k` classes. The result is shuffled.
pub fn subset_balanced(ds: &Dataset, n_points: usize, k: usize, seed: u64) -> Result<Dataset> {
    let labels = ds
        .labels()
        .ok_or_else(|| Error::dataset("balanced subsetting needs a labelled dataset"))?;
    let n_classes = ds.n_classes().unwrap_or(0);
    if k == 0 || k > n_classes {
        return Err(Error::param(format!(
            "k={k} must be in [1, {n_classes}] (number of classes)"
        )));
    }
    if n_points == 0 || !n_points.is_multiple_of(k) {
        return Err(Error::param(format!(
            "n_points ({n_points}) must be a positive multiple of k ({k})"
        )));
    }
    let per_class = n_points / k;
    let mut rng = rng_from_seed(seed);
    let mut chosen = Vec::with_capacity(n_points);
    for class in 0..k {
        let mut members: Vec<usize> = (0..ds.len()).filter(|&i| labels[i] == class).collect();
        if members.len() < per_class {
            return Err(Error::param(format!(
                "class {class} has {} points, {per_class} requested",
                members.len()
            )));
        }
        members.shuffle(&mut rng);
        chosen.extend_from_slice(&members[..per_class]);
    }
    chosen.shuffle(&mut rng);

    let points = chosen
        .iter()
        .flat_map(|&i| ds.point(i).iter().copied())
        .collect();
    let sub_labels = chosen.iter().map(|&i| labels[i]).collect();
    Dataset::from_flat(
        format!("{}-subset-n{n_points}-k{k}-s{seed}", ds.name()),
        n_points,
        ds.dim(),
        points,
        Some(sub_labels),
    )
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_owned());
    parse_csv(file, name)
}

pub fn write_csv(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    to_csv_writer(ds, std::io::BufWriter::new(file))
}

/// Parse the CSV layout described in the module docs.
pub fn parse_csv(reader: impl Read, name: impl Into<String>) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let header = rdr.headers().map_err(|e| csv_error(e, 1))?.clone();
    let has_label = header.iter().next_back() == Some("label");
    let n_features = header.len() - usize::from(has_label);
    for (j, field) in header.iter().take(n_features).enumerate() {
        if field != format!("x{j}") {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header column `x{j}`, found `{field}`"),
            });
        }
    }

    let mut points = Vec::new();
    let mut labels = Vec::new();
    let mut n_points = 0;
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(e, 0))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != header.len() {
            return Err(Error::Parse {
                line,
                message: format!("expected {} fields, found {}", header.len(), record.len()),
            });
        }
        for (j, field) in record.iter().take(n_features).enumerate() {
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                line,
                message: format!("column x{j}: `{field}` is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    message: format!("column x{j}: non-finite value `{field}`"),
                });
            }
            points.push(v);
        }
        if has_label {
            let field = &record[n_features];
            let label: usize = field.parse().map_err(|_| Error::Parse {
                line,
                message: format!("label `{field}` is not a non-negative integer"),
            })?;
            labels.push(label);
        }
        n_points += 1;
    }
    Dataset::from_flat(
        name,
        n_points,
        n_features,
        points,
        has_label.then_some(labels),
    )
}

pub fn to_csv_writer(ds: &Dataset, mut w: impl Write) -> Result<()> {
    let mut header: Vec<String> = (0..ds.dim()).map(|j| format!("x{j}")).collect();
    if ds.labels().is_some() {
        header.push("label".to_owned());
    }
    writeln!(w, "{}", header.join(","))?;
    for (i, p) in ds.points().enumerate() {
        let mut row: Vec<String> = p.iter().map(|v| format!("{v:?}")).collect();
        if let Some(labels) = ds.labels() {
            row.push(labels[i].to_string());
        }
        writeln!(w, "{}", row.join(","))?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error, fallback_line: u64) -> Error {
    let line = e.position().map_or(fallback_line, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        kind => Error::Parse {
            line,
            message: format!("{kind:?}"),
        },
    }
}
