//! File formats: symbols, archive manifests and ingestion, predictions.

mod archive;
mod predictions;
mod symbol_text;

pub use archive::{
    fetch_archive, ingest, quarantine_path, sha256_file, ArchiveManifest, FetchOutcome, Fetcher,
    HttpFetcher, IngestReport, ManifestEntry, RetryPolicy, DATA_DIR_ENV,
};
pub use predictions::{
    parse_prediction, read_ids, read_predictions, read_truth, Prediction, Predictions, Truth,
};
pub use symbol_text::{read_symbol, read_symbol_file, write_symbol, write_symbol_file, SymbolFormat};
