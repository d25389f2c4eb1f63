//! Scoring of model outputs and plot-ready analysis tables.

mod angles;
mod curves;
mod histogram;
mod metrics;

pub use angles::{embedding_angles, read_embeddings, round_tenth, AngleReport, TriangleReport, TRIANGLES};
pub use curves::{curves_to_text, epoch_files, epoch_of, relation_curves, relation_rates, CurveRow};
pub use histogram::{magnitude_histogram, Histogram, DEFAULT_BIN_WIDTH};
pub use metrics::{confidence_interval, score_predictions, Metrics};
