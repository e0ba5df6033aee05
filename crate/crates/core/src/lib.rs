//! Subword segmentation and gender-bias diagnostics.

pub mod corpus;
pub mod metrics;
pub mod report;
pub mod segmenters;

pub use corpus::{Benchmark, Category, Corpus, FrequencyTable, TokenizeMode};
pub use metrics::{AccuracyReport, AsymmetryReport, DiversityReport, IncrementReport, IsolationReport};
pub use report::{ExportFormat, ReportBundle};
pub use segmenters::{Method, SegmentationModel};
