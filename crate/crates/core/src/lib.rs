//! Automatic clustering with a single, reproducible solution.
//!
//! The crate provides the AMSOS driver ([`amsos::amsos`]) together with the
//! pieces it is built from and measured with: deterministic SPSS seeding and
//! randomized baselines ([`seeding`]), Lloyd's k-means ([`kmeans`]), cluster
//! validity indices ([`metrics`]), Gaussian-mixture benchmark data
//! ([`synthetic`]) and a benchmark harness ([`harness`]).

pub mod amsos;
pub mod data;
pub mod error;
pub mod harness;
pub mod kmeans;
pub mod metrics;
pub mod seeding;
pub mod synthetic;

pub use amsos::{amsos, AmsosConfig, AmsosResult, AmsosTrace};
pub use data::{load_csv, Dataset, LabelColumn, Matrix, Partition};
pub use error::{Error, Result};
pub use kmeans::{lloyd, KmeansConfig, KmeansResult};
pub use metrics::{full_report, MetricReport};
pub use seeding::{SeedMethod, SeedSet};
pub use synthetic::{BuiltinMixture, MixtureSpec};
