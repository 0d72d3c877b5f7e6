//! Benchmark protocol: run an algorithm repeatedly on one dataset, score
//! every run and summarize the runs as JSON, CSV or Markdown tables.
//!
//! Run `r` of a spec with master seed `s` draws its randomness from
//! [`derive_seed`]`(s, r)`, so any single row of a report can be re-executed
//! on its own. Builtin mixtures are generated once per spec from the master
//! seed itself.

use std::fmt;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::amsos::{amsos, AmsosConfig, AmsosTrace};
use crate::data::{load_csv, Dataset, LabelColumn, Matrix, Partition};
use crate::error::{Error, Result};
use crate::kmeans::{lloyd, KmeansConfig};
use crate::metrics::{full_report, Better, MetricReport};
use crate::seeding::{self, SeedMethod};
use crate::synthetic::BuiltinMixture;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DatasetSource {
    Builtin(BuiltinMixture),
    Csv { path: PathBuf, label_column: LabelColumn },
}

impl DatasetSource {
    /// Builtin mixture name, or a path to a CSV file.
    ///
    /// A bare word that names neither a builtin nor an existing file is
    /// rejected as an unknown dataset rather than treated as a path.
    pub fn parse(id: &str, label_column: LabelColumn) -> Result<Self> {
        if let Ok(builtin) = id.parse::<BuiltinMixture>() {
            return Ok(DatasetSource::Builtin(builtin));
        }
        let path = Path::new(id);
        let looks_like_path = id.contains(['/', '\\', '.']);
        if !path.exists() && !looks_like_path {
            return Err(Error::UnknownDataset(id.to_string()));
        }
        Ok(DatasetSource::Csv {
            path: path.to_path_buf(),
            label_column,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Amsos,
    Kmeans(SeedMethod),
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::Amsos => f.write_str("amsos"),
            Algorithm::Kmeans(method) => write!(f, "kmeans+{method}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            _ => Err(Error::InvalidSpec(format!("unknown output format `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub dataset: DatasetSource,
    pub algorithm: Algorithm,
    /// Cluster count for fixed-k baselines; must be absent for AMSOS.
    pub k: Option<usize>,
    pub seed: u64,
    pub repeats: usize,
    pub output: OutputFormat,
    /// Standardize every feature before clustering.
    pub zscore: bool,
    pub kmeans: KmeansConfig,
}

impl RunSpec {
    pub fn new(dataset: DatasetSource, algorithm: Algorithm, k: Option<usize>, seed: u64, repeats: usize) -> Self {
        Self {
            dataset,
            algorithm,
            k,
            seed,
            repeats,
            output: OutputFormat::default(),
            zscore: false,
            kmeans: KmeansConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match (self.algorithm, self.k) {
            (Algorithm::Amsos, Some(_)) => {
                return Err(Error::InvalidSpec("amsos chooses k itself; drop --k".into()));
            }
            (Algorithm::Kmeans(_), None) => {
                return Err(Error::InvalidSpec("k-means needs --k".into()));
            }
            (Algorithm::Kmeans(_), Some(k)) if k < 2 => {
                return Err(Error::InvalidSpec(format!("k must be at least 2, got {k}")));
            }
            _ => {}
        }
        if self.repeats == 0 {
            return Err(Error::InvalidSpec("repeats must be at least 1".into()));
        }
        if let DatasetSource::Csv {
            label_column: LabelColumn::None,
            ..
        } = self.dataset
        {
            return Err(Error::InvalidSpec("external indices need a label column".into()));
        }
        self.kmeans.validate()
    }

    /// Loads or generates the dataset, applying `zscore` when set.
    pub fn load(&self) -> Result<Dataset> {
        let data = match &self.dataset {
            DatasetSource::Builtin(id) => id.spec().generate(self.seed),
            DatasetSource::Csv { path, label_column } => load_csv(path, *label_column)?,
        };
        Ok(if self.zscore { data.zscored() } else { data })
    }

    /// True component means, when they are known in the clustered coordinates.
    pub fn reference_means(&self) -> Option<Vec<Vec<f64>>> {
        match self.dataset {
            DatasetSource::Builtin(id) if !self.zscore => Some(id.spec().means()),
            _ => None,
        }
    }
}

/// Seed for run `run`: output number `run + 1` of a splitmix64 generator
/// started at `seed`.
pub fn derive_seed(seed: u64, run: usize) -> u64 {
    let mut z = seed.wrapping_add((run as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    /// Starting cluster count: kmax for AMSOS, k for the baselines.
    pub input_k: usize,
    pub metrics: MetricReport,
}

/// The seven indices without a cluster count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricValues {
    pub ari: f64,
    pub ri: f64,
    pub hi: f64,
    pub silhouette: f64,
    pub db: f64,
    pub cs: f64,
    pub error_rate_percent: f64,
}

impl MetricValues {
    pub fn from_values(v: [f64; 7]) -> Self {
        let r = MetricReport::from_values(0, v);
        Self {
            ari: r.ari,
            ri: r.ri,
            hi: r.hi,
            silhouette: r.silhouette,
            db: r.db,
            cs: r.cs,
            error_rate_percent: r.error_rate_percent,
        }
    }

    pub fn values(&self) -> [f64; 7] {
        [self.ari, self.ri, self.hi, self.silhouette, self.db, self.cs, self.error_rate_percent]
    }
}

/// Per-index mean, best and worst over all runs. Best and worst follow each
/// index's own direction, so `best.db` is the smallest DB seen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean_k: f64,
    pub mean: MetricValues,
    pub best: MetricValues,
    pub worst: MetricValues,
}

impl Aggregate {
    pub fn from_reports(reports: &[MetricReport]) -> Result<Self> {
        if reports.is_empty() {
            return Err(Error::InvalidSpec("no runs to aggregate".into()));
        }
        let n = reports.len() as f64;
        let mut mean = [0.0; 7];
        let mut best = reports[0].values();
        let mut worst = best;
        for r in reports {
            for (i, v) in r.values().into_iter().enumerate() {
                mean[i] += v;
                let (hi, lo) = match MetricReport::DIRECTIONS[i] {
                    Better::Higher => (&mut best[i], &mut worst[i]),
                    Better::Lower => (&mut worst[i], &mut best[i]),
                };
                *hi = hi.max(v);
                *lo = lo.min(v);
            }
        }
        mean.iter_mut().for_each(|v| *v /= n);
        Ok(Self {
            mean_k: reports.iter().map(|r| r.k as f64).sum::<f64>() / n,
            mean: MetricValues::from_values(mean),
            best: MetricValues::from_values(best),
            worst: MetricValues::from_values(worst),
        })
    }
}

/// One line of the centroid comparison. A row with only one side filled is
/// an unpaired cluster or an unmatched reference mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentroidRow {
    pub cluster: Option<usize>,
    pub reference: Option<usize>,
    pub obtained: Option<Vec<f64>>,
    pub reference_mean: Option<Vec<f64>>,
    /// Largest per-coordinate absolute difference of a pair.
    pub deviation: Option<f64>,
}

impl CentroidRow {
    pub fn is_paired(&self) -> bool {
        self.cluster.is_some() && self.reference.is_some()
    }
}

/// Pairs obtained centroids with reference means, closest pair first, each
/// side used at most once.
///
/// Paired rows come in reference order, followed by unpaired clusters and then
/// unmatched references. Without references every cluster is listed unpaired.
pub fn centroid_table(centroids: &Matrix, reference_means: &[Vec<f64>]) -> Vec<CentroidRow> {
    let mut candidates = Vec::with_capacity(centroids.rows() * reference_means.len());
    for (c, obtained) in centroids.iter_rows().enumerate() {
        for (r, mean) in reference_means.iter().enumerate() {
            let d: f64 = obtained.iter().zip(mean).map(|(a, b)| (a - b) * (a - b)).sum();
            candidates.push((d, c, r));
        }
    }
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));

    let mut cluster_of = vec![None; reference_means.len()];
    let mut used = vec![false; centroids.rows()];
    for (_, c, r) in candidates {
        if !used[c] && cluster_of[r].is_none() {
            used[c] = true;
            cluster_of[r] = Some(c);
        }
    }

    let mut rows = Vec::new();
    for (r, mean) in reference_means.iter().enumerate() {
        if let Some(c) = cluster_of[r] {
            let obtained = centroids.row(c);
            let deviation = obtained.iter().zip(mean).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            rows.push(CentroidRow {
                cluster: Some(c),
                reference: Some(r),
                obtained: Some(obtained.to_vec()),
                reference_mean: Some(mean.clone()),
                deviation: Some(deviation),
            });
        }
    }
    for c in (0..centroids.rows()).filter(|&c| !used[c]) {
        rows.push(CentroidRow {
            cluster: Some(c),
            reference: None,
            obtained: Some(centroids.row(c).to_vec()),
            reference_mean: None,
            deviation: None,
        });
    }
    for (r, mean) in reference_means.iter().enumerate().filter(|(r, _)| cluster_of[*r].is_none()) {
        rows.push(CentroidRow {
            cluster: None,
            reference: Some(r),
            obtained: None,
            reference_mean: Some(mean.clone()),
            deviation: None,
        });
    }
    rows
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub dataset: String,
    pub algorithm: String,
    pub seed: u64,
    pub repeats: usize,
    /// Every run produced the same partition and indices.
    pub identical_runs: bool,
    pub runs: Vec<RunRecord>,
    pub aggregate: Aggregate,
    /// Centroids of run 0 against the reference means, if known.
    pub centroids: Vec<CentroidRow>,
}

/// A report plus the AMSOS trace of run 0.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub report: BenchReport,
    pub trace: Option<AmsosTrace>,
}

pub fn run(spec: &RunSpec) -> Result<BenchReport> {
    execute(spec).map(|out| out.report)
}

pub fn execute(spec: &RunSpec) -> Result<RunOutput> {
    spec.validate()?;
    let data = spec.load()?;
    let truth = data.require_labels()?;

    let mut runs = Vec::with_capacity(spec.repeats);
    let mut partitions: Vec<Partition> = Vec::with_capacity(spec.repeats);
    let mut trace = None;
    for r in 0..spec.repeats {
        let seed = derive_seed(spec.seed, r);
        let (partition, input_k) = match spec.algorithm {
            Algorithm::Amsos => {
                let config = AmsosConfig {
                    kmeans: spec.kmeans,
                    ..AmsosConfig::default()
                };
                let result = amsos(&data, &config)?;
                trace.get_or_insert(result.trace);
                (result.partition, result.kmax)
            }
            Algorithm::Kmeans(method) => {
                let k = spec.k.expect("validated");
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let seeds = seeding::seed(method, &data, k, &mut rng)?;
                (lloyd(&data, &seeds, &spec.kmeans)?.partition, k)
            }
        };
        runs.push(RunRecord {
            run: r,
            seed,
            input_k,
            metrics: full_report(&data, &partition, truth)?,
        });
        partitions.push(partition);
    }

    let identical_runs = partitions.iter().zip(&runs).all(|(p, row)| {
        p.assignments() == partitions[0].assignments() && row.metrics == runs[0].metrics
    });
    let reports: Vec<MetricReport> = runs.iter().map(|r| r.metrics).collect();
    let centroids = centroid_table(partitions[0].centroids(), &spec.reference_means().unwrap_or_default());
    let report = BenchReport {
        dataset: data.name().to_string(),
        algorithm: spec.algorithm.to_string(),
        seed: spec.seed,
        repeats: spec.repeats,
        identical_runs,
        aggregate: Aggregate::from_reports(&reports)?,
        runs,
        centroids,
    };
    Ok(RunOutput { report, trace })
}

impl BenchReport {
    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Markdown => Ok(self.to_markdown()),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::MalformedReport(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedReport(e.to_string()))
    }

    /// Flat CSV with a `section` column (`meta`, `run`, `aggregate`,
    /// `centroid`); vectors are space-separated inside one field.
    pub fn to_csv(&self) -> Result<String> {
        let mut records = Vec::new();
        let meta = [
            ("dataset", self.dataset.clone()),
            ("algorithm", self.algorithm.clone()),
            ("seed", self.seed.to_string()),
            ("repeats", self.repeats.to_string()),
            ("identical_runs", self.identical_runs.to_string()),
            ("mean_k", self.aggregate.mean_k.to_string()),
        ];
        for (key, value) in meta {
            records.push(CsvRecord {
                section: "meta".into(),
                key: Some(key.into()),
                value: Some(value),
                ..CsvRecord::default()
            });
        }
        for r in &self.runs {
            let mut rec = CsvRecord::with_values("run", r.metrics.values());
            rec.run = Some(r.run);
            rec.seed = Some(r.seed);
            rec.input_k = Some(r.input_k);
            rec.k = Some(r.metrics.k);
            records.push(rec);
        }
        let a = &self.aggregate;
        for (key, v) in [("mean", &a.mean), ("best", &a.best), ("worst", &a.worst)] {
            let mut rec = CsvRecord::with_values("aggregate", v.values());
            rec.key = Some(key.into());
            records.push(rec);
        }
        for c in &self.centroids {
            records.push(CsvRecord {
                section: "centroid".into(),
                cluster: c.cluster,
                reference: c.reference,
                obtained: c.obtained.as_deref().map(join_vector),
                reference_mean: c.reference_mean.as_deref().map(join_vector),
                deviation: c.deviation,
                ..CsvRecord::default()
            });
        }

        let mut writer = csv::Writer::from_writer(Vec::new());
        for rec in &records {
            writer.serialize(rec).map_err(|e| Error::MalformedReport(e.to_string()))?;
        }
        let bytes = writer.into_inner().map_err(|e| Error::MalformedReport(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::MalformedReport(e.to_string()))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |msg: String| Error::MalformedReport(msg);
        let mut meta = std::collections::HashMap::new();
        let mut runs = Vec::new();
        let mut stats = std::collections::HashMap::new();
        let mut centroids = Vec::new();
        for rec in csv::Reader::from_reader(text.as_bytes()).deserialize::<CsvRecord>() {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            match rec.section.as_str() {
                "meta" => {
                    let key = rec.key.ok_or_else(|| bad("meta row without key".into()))?;
                    meta.insert(key, rec.value.unwrap_or_default());
                }
                "run" => {
                    let values = rec.values()?;
                    let field = |v: Option<usize>, name: &str| v.ok_or_else(|| bad(format!("run row without {name}")));
                    runs.push(RunRecord {
                        run: field(rec.run, "run")?,
                        seed: rec.seed.ok_or_else(|| bad("run row without seed".into()))?,
                        input_k: field(rec.input_k, "input_k")?,
                        metrics: MetricReport::from_values(field(rec.k, "k")?, values),
                    });
                }
                "aggregate" => {
                    let values = MetricValues::from_values(rec.values()?);
                    let key = rec.key.ok_or_else(|| bad("aggregate row without key".into()))?;
                    stats.insert(key, values);
                }
                "centroid" => centroids.push(CentroidRow {
                    cluster: rec.cluster,
                    reference: rec.reference,
                    obtained: rec.obtained.as_deref().map(split_vector).transpose()?,
                    reference_mean: rec.reference_mean.as_deref().map(split_vector).transpose()?,
                    deviation: rec.deviation,
                }),
                other => return Err(bad(format!("unknown section `{other}`"))),
            }
        }

        fn take<T: FromStr>(meta: &mut std::collections::HashMap<String, String>, key: &str) -> Result<T> {
            meta.remove(key)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| Error::MalformedReport(format!("missing or invalid meta `{key}`")))
        }
        let mut stat = |key: &str| stats.remove(key).ok_or_else(|| bad(format!("missing aggregate `{key}`")));
        let aggregate = Aggregate {
            mean_k: take(&mut meta, "mean_k")?,
            mean: stat("mean")?,
            best: stat("best")?,
            worst: stat("worst")?,
        };
        Ok(Self {
            dataset: take(&mut meta, "dataset")?,
            algorithm: take(&mut meta, "algorithm")?,
            seed: take(&mut meta, "seed")?,
            repeats: take(&mut meta, "repeats")?,
            identical_runs: take(&mut meta, "identical_runs")?,
            runs,
            aggregate,
            centroids,
        })
    }

    /// Metric table in the column order Data set, Algorithm, i/p k, o/p k,
    /// ARI, RI, HI, SIL, DB, CS, err, followed by the centroid comparison.
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "| Data set | Algorithm | Run | i/p k | o/p k | {} |",
            MetricReport::COLUMNS.join(" | ")
        );
        let _ = writeln!(out, "|{}", "---|".repeat(5 + MetricReport::COLUMNS.len()));
        for r in &self.runs {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} |",
                self.dataset,
                self.algorithm,
                r.run,
                r.input_k,
                r.metrics.k,
                format_values(&r.metrics.values())
            );
        }
        let a = &self.aggregate;
        for (name, v) in [("mean", &a.mean), ("best", &a.best), ("worst", &a.worst)] {
            let k = if name == "mean" { format!("{:.2}", a.mean_k) } else { String::new() };
            let _ = writeln!(
                out,
                "| {} | {} | {name} | | {k} | {} |",
                self.dataset,
                self.algorithm,
                format_values(&v.values())
            );
        }
        if self.repeats > 1 {
            let verdict = if self.identical_runs { "identical" } else { "not identical" };
            let _ = writeln!(out, "\nRuns were {verdict} across {} repeats.", self.repeats);
        }
        if !self.centroids.is_empty() {
            out.push_str("\n| Cluster | Obtained | Reference | Max deviation |\n|---|---|---|---|\n");
            let show = |v: &Option<Vec<f64>>| {
                v.as_ref()
                    .map(|v| v.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(" "))
                    .unwrap_or_else(|| "unpaired".into())
            };
            for c in &self.centroids {
                let cluster = c.cluster.map_or("-".into(), |c| c.to_string());
                let deviation = c.deviation.map_or("-".into(), |d| format!("{d:.4}"));
                let _ = writeln!(
                    out,
                    "| {cluster} | {} | {} | {deviation} |",
                    show(&c.obtained),
                    show(&c.reference_mean)
                );
            }
        }
        out
    }
}

fn format_values(v: &[f64; 7]) -> String {
    let mut cells: Vec<String> = v[..6].iter().map(|x| format!("{x:.4}")).collect();
    cells.push(format!("{:.2}", v[6]));
    cells.join(" | ")
}

fn join_vector(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(" ")
}

fn split_vector(s: &str) -> Result<Vec<f64>> {
    s.split_whitespace()
        .map(|x| x.parse().map_err(|_| Error::MalformedReport(format!("bad number `{x}`"))))
        .collect()
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct CsvRecord {
    section: String,
    key: Option<String>,
    value: Option<String>,
    run: Option<usize>,
    seed: Option<u64>,
    input_k: Option<usize>,
    k: Option<usize>,
    #[serde(rename = "ARI")]
    ari: Option<f64>,
    #[serde(rename = "RI")]
    ri: Option<f64>,
    #[serde(rename = "HI")]
    hi: Option<f64>,
    #[serde(rename = "SIL")]
    sil: Option<f64>,
    #[serde(rename = "DB")]
    db: Option<f64>,
    #[serde(rename = "CS")]
    cs: Option<f64>,
    err: Option<f64>,
    cluster: Option<usize>,
    reference: Option<usize>,
    obtained: Option<String>,
    reference_mean: Option<String>,
    deviation: Option<f64>,
}

impl CsvRecord {
    fn with_values(section: &str, v: [f64; 7]) -> Self {
        Self {
            section: section.into(),
            ari: Some(v[0]),
            ri: Some(v[1]),
            hi: Some(v[2]),
            sil: Some(v[3]),
            db: Some(v[4]),
            cs: Some(v[5]),
            err: Some(v[6]),
            ..Self::default()
        }
    }

    fn values(&self) -> Result<[f64; 7]> {
        let cells = [self.ari, self.ri, self.hi, self.sil, self.db, self.cs, self.err];
        let mut out = [0.0; 7];
        for (i, cell) in cells.into_iter().enumerate() {
            out[i] = cell.ok_or_else(|| {
                Error::MalformedReport(format!("{} row missing {}", self.section, MetricReport::COLUMNS[i]))
            })?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_seed_is_splitmix64() {
        // first three outputs of splitmix64 seeded with 0
        assert_eq!(derive_seed(0, 0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(derive_seed(0, 1), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(derive_seed(0, 2), 0x06C4_5D18_8009_454F);
        assert_ne!(derive_seed(1, 0), derive_seed(0, 0));
    }

    #[test]
    fn spec_validation() {
        let builtin = DatasetSource::Builtin(BuiltinMixture::Synthetic3);
        let ok = RunSpec::new(builtin.clone(), Algorithm::Amsos, None, 1, 1);
        assert!(ok.validate().is_ok());
        let cases = [
            RunSpec::new(builtin.clone(), Algorithm::Amsos, Some(3), 1, 1),
            RunSpec::new(builtin.clone(), Algorithm::Kmeans(SeedMethod::Random), None, 1, 1),
            RunSpec::new(builtin.clone(), Algorithm::Kmeans(SeedMethod::Random), Some(1), 1, 1),
            RunSpec::new(builtin, Algorithm::Kmeans(SeedMethod::Random), Some(3), 1, 0),
        ];
        for spec in cases {
            assert!(matches!(spec.validate(), Err(Error::InvalidSpec(_))), "{spec:?}");
        }
        let unlabeled = DatasetSource::Csv {
            path: "x.csv".into(),
            label_column: LabelColumn::None,
        };
        let spec = RunSpec::new(unlabeled, Algorithm::Amsos, None, 1, 1);
        assert!(matches!(spec.validate(), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn dataset_source_parsing() {
        assert_eq!(
            DatasetSource::parse("synthetic2", LabelColumn::Last).unwrap(),
            DatasetSource::Builtin(BuiltinMixture::Synthetic2)
        );
        assert!(matches!(DatasetSource::parse("iris", LabelColumn::Last), Err(Error::UnknownDataset(_))));
        assert!(matches!(
            DatasetSource::parse("data/iris.csv", LabelColumn::Last),
            Ok(DatasetSource::Csv { .. })
        ));
    }

    fn report(k: usize, v: [f64; 7]) -> MetricReport {
        MetricReport::from_values(k, v)
    }

    #[test]
    fn aggregate_follows_directions() {
        let runs = [
            report(2, [0.5, 0.8, 0.6, 0.3, 1.0, 2.0, 10.0]),
            report(4, [0.7, 0.9, 0.8, 0.1, 0.5, 3.0, 30.0]),
        ];
        let a = Aggregate::from_reports(&runs).unwrap();
        assert_eq!(a.mean_k, 3.0);
        assert_eq!(a.best.values(), [0.7, 0.9, 0.8, 0.3, 0.5, 2.0, 10.0]);
        assert_eq!(a.worst.values(), [0.5, 0.8, 0.6, 0.1, 1.0, 3.0, 30.0]);
        assert!((a.mean.ari - 0.6).abs() < 1e-15);
        assert_eq!(a.mean.error_rate_percent, 20.0);
        assert!(Aggregate::from_reports(&[]).is_err());
    }

    #[test]
    fn centroid_pairing() {
        let obtained = Matrix::from_rows(&[[10.1, 0.0], [0.0, 0.2], [50.0, 50.0]]).unwrap();
        let refs = vec![vec![0.0, 0.0], vec![10.0, 0.0]];
        let rows = centroid_table(&obtained, &refs);
        assert_eq!(rows.len(), 3);
        assert_eq!((rows[0].cluster, rows[0].reference), (Some(1), Some(0)));
        assert!((rows[0].deviation.unwrap() - 0.2).abs() < 1e-12);
        assert_eq!((rows[1].cluster, rows[1].reference), (Some(0), Some(1)));
        assert!(!rows[2].is_paired() && rows[2].cluster == Some(2));

        let exact = Matrix::from_rows(&refs).unwrap();
        assert!(centroid_table(&exact, &refs).iter().all(|r| r.deviation == Some(0.0)));

        let one = Matrix::from_rows(&[[9.0, 0.0]]).unwrap();
        let rows = centroid_table(&one, &refs);
        assert_eq!((rows[0].cluster, rows[0].reference), (Some(0), Some(1)));
        assert_eq!((rows[1].cluster, rows[1].reference), (None, Some(0)));
    }

    #[test]
    fn centroid_pairing_is_global_not_per_cluster() {
        // cluster 0 is nearest reference 1, but cluster 1 sits on top of it
        let obtained = Matrix::from_rows(&[[4.0], [5.0]]).unwrap();
        let refs = vec![vec![0.0], vec![5.0]];
        let rows = centroid_table(&obtained, &refs);
        assert_eq!((rows[0].cluster, rows[0].reference), (Some(0), Some(0)));
        assert_eq!((rows[1].cluster, rows[1].reference), (Some(1), Some(1)));
    }
}
