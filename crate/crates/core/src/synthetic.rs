//! Multivariate-normal mixtures used as reproducible benchmark datasets.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Matrix};
use crate::error::{Error, Result};

const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// One `N(mean, covariance)` component and how many points to draw from it.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianComponent {
    mean: Vec<f64>,
    covariance: Matrix,
    chol: Matrix,
    count: usize,
}

impl GaussianComponent {
    /// Validates symmetry and positive definiteness and caches the Cholesky factor.
    pub fn new(mean: Vec<f64>, covariance: Matrix, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidConfig("component count must be at least 1".into()));
        }
        let n = mean.len();
        if covariance.rows() != n || covariance.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: covariance.rows(),
            });
        }
        let chol = cholesky(&covariance)?;
        Ok(Self {
            mean,
            covariance,
            chol,
            count,
        })
    }

    /// Component from the upper triangle of its covariance, listed row by row.
    fn from_upper(mean: &[f64], upper: &[f64], count: usize) -> Result<Self> {
        let n = mean.len();
        let mut cov = Matrix::zeros(n, n);
        let mut it = upper.iter();
        for i in 0..n {
            for j in i..n {
                let v = *it.next().expect("upper triangle too short");
                cov.row_mut(i)[j] = v;
                cov.row_mut(j)[i] = v;
            }
        }
        Self::new(mean.to_vec(), cov, count)
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn covariance(&self) -> &Matrix {
        &self.covariance
    }

    /// Lower-triangular `L` with `L·Lᵀ = Σ`.
    pub fn cholesky_factor(&self) -> &Matrix {
        &self.chol
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }
}

/// Lower Cholesky factor of a symmetric positive-definite matrix.
pub fn cholesky(a: &Matrix) -> Result<Matrix> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.cols(),
        });
    }
    for i in 0..n {
        for j in 0..i {
            let (x, y) = (a.get(i, j), a.get(j, i));
            if (x - y).abs() > SYMMETRY_TOLERANCE * x.abs().max(y.abs()).max(1.0) {
                return Err(Error::NotSymmetric { row: i, col: j });
            }
        }
    }
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut diag = a.get(j, j);
        for k in 0..j {
            diag -= l.get(j, k).powi(2);
        }
        if diag <= 0.0 || !diag.is_finite() {
            return Err(Error::NotPositiveDefinite { pivot: j, value: diag });
        }
        let d = diag.sqrt();
        l.row_mut(j)[j] = d;
        for i in j + 1..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k);
            }
            l.row_mut(i)[j] = s / d;
        }
    }
    Ok(l)
}

/// Draws `component.count()` i.i.d. rows `μ + L·z`, `z ~ N(0, I)`.
pub fn sample_mvn<R: Rng + ?Sized>(component: &GaussianComponent, rng: &mut R) -> Matrix {
    let n = component.dim();
    let l = &component.chol;
    let mut data = Vec::with_capacity(component.count * n);
    let mut z = vec![0.0; n];
    for _ in 0..component.count {
        z.iter_mut().for_each(|v| *v = rng.sample(StandardNormal));
        for i in 0..n {
            let lz: f64 = (0..=i).map(|k| l.get(i, k) * z[k]).sum();
            data.push(component.mean[i] + lz);
        }
    }
    Matrix::new(component.count, n, data).expect("shape is exact")
}

/// Ordered list of components sharing one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureSpec {
    name: String,
    components: Vec<GaussianComponent>,
}

impl MixtureSpec {
    pub fn new(name: impl Into<String>, components: Vec<GaussianComponent>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidConfig("mixture needs at least one component".into()))?;
        let n = first.dim();
        if let Some(bad) = components.iter().find(|c| c.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.dim(),
            });
        }
        Ok(Self {
            name: name.into(),
            components,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn components(&self) -> &[GaussianComponent] {
        &self.components
    }

    /// Total point count `m`.
    pub fn total(&self) -> usize {
        self.components.iter().map(|c| c.count).sum()
    }

    pub fn dim(&self) -> usize {
        self.components[0].dim()
    }

    pub fn means(&self) -> Vec<Vec<f64>> {
        self.components.iter().map(|c| c.mean.clone()).collect()
    }

    /// Realizes the mixture: rows grouped by component, in draw order, labelled
    /// with the component index.
    pub fn generate(&self, seed: u64) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut data = Vec::with_capacity(self.total() * self.dim());
        let mut labels = Vec::with_capacity(self.total());
        for (idx, component) in self.components.iter().enumerate() {
            let rows = sample_mvn(component, &mut rng);
            data.extend_from_slice(rows.as_slice());
            labels.extend(std::iter::repeat_n(idx, component.count));
        }
        let points = Matrix::new(self.total(), self.dim(), data).expect("shape is exact");
        Dataset::new(format!("{}-s{seed}", self.name), points, Some(labels))
            .expect("gaussian draws are finite and m >= 2")
    }
}

/// Free-function form of [`MixtureSpec::generate`].
pub fn generate(spec: &MixtureSpec, seed: u64) -> Dataset {
    spec.generate(seed)
}

/// The four builtin benchmark mixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BuiltinMixture {
    Synthetic1,
    Synthetic2,
    Synthetic3,
    Synthetic4,
}

impl BuiltinMixture {
    pub const ALL: [BuiltinMixture; 4] = [
        BuiltinMixture::Synthetic1,
        BuiltinMixture::Synthetic2,
        BuiltinMixture::Synthetic3,
        BuiltinMixture::Synthetic4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinMixture::Synthetic1 => "synthetic1",
            BuiltinMixture::Synthetic2 => "synthetic2",
            BuiltinMixture::Synthetic3 => "synthetic3",
            BuiltinMixture::Synthetic4 => "synthetic4",
        }
    }

    pub fn spec(self) -> MixtureSpec {
        builtin_mixture(self)
    }
}

impl fmt::Display for BuiltinMixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuiltinMixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BuiltinMixture::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::UnknownDataset(s.to_string()))
    }
}

/// Splits `total` as evenly as possible over `parts`, remainder to the front.
fn equal_split(total: usize, parts: usize) -> impl Iterator<Item = usize> {
    (0..parts).map(move |i| total / parts + usize::from(i < total % parts))
}

type ComponentTable = &'static [(&'static [f64], &'static [f64])];

// (mean, upper triangle of covariance)
const SYNTHETIC1: ComponentTable = &[
    (&[2.0, 3.0, 4.0], &[1.0, 0.50, 0.3333, 1.0, 0.6667, 1.0]),
    (&[7.0, 6.0, 9.0], &[1.0, 1.0, 1.0, 2.0, 2.0, 3.0]),
];

// Two-dimensional means even though the dataset is sometimes described as n = 3.
const SYNTHETIC2: ComponentTable = &[
    (&[-1.0, -1.0], &[0.65, 0.0, 0.65]),
    (&[2.0, 2.0], &[1.0, 0.7, 1.0]),
    (&[-3.0, 3.0], &[0.78, 0.0, 0.78]),
    (&[-6.0, 4.0], &[0.5, 0.0, 0.5]),
];

const SYNTHETIC3: ComponentTable = &[
    (&[-1.0, -1.0], &[1.0, 0.0, 1.0]),
    (&[2.0, 2.0], &[1.0, 0.0, 1.0]),
    (&[-3.0, 3.0], &[0.7, 0.0, 0.7]),
];

const SYNTHETIC4: ComponentTable = &[
    (&[-1.0, -1.0], &[0.65, 0.0, 0.65]),
    (&[-8.0, -6.0], &[1.0, 0.7, 1.0]),
    (&[-3.0, 6.0], &[0.2, 0.0, 0.2]),
    (&[-8.0, 14.0], &[0.5, 0.0, 0.5]),
    (&[10.0, 12.0], &[0.3, 0.0, 0.3]),
    (&[14.0, -14.0], &[0.1, 0.0, 0.1]),
];

/// Mean/covariance tables of the builtin mixtures with equal per-component counts.
pub fn builtin_mixture(id: BuiltinMixture) -> MixtureSpec {
    let (table, total) = match id {
        BuiltinMixture::Synthetic1 => (SYNTHETIC1, 350),
        BuiltinMixture::Synthetic2 => (SYNTHETIC2, 400),
        BuiltinMixture::Synthetic3 => (SYNTHETIC3, 300),
        BuiltinMixture::Synthetic4 => (SYNTHETIC4, 800),
    };
    let components = table
        .iter()
        .zip(equal_split(total, table.len()))
        .map(|((mean, upper), count)| GaussianComponent::from_upper(mean, upper, count))
        .collect::<Result<Vec<_>>>()
        .expect("builtin covariances are positive definite");
    MixtureSpec::new(id.name(), components).expect("builtin components share a dimension")
}
