use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::io::{read_predictions, Prediction, Predictions};
use crate::relations::{score_instances, RelationInstance};
use crate::symbol::Symbol;

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub epoch: u64,
    pub relation: &'static str,
    pub rates: [f64; 4],
}

/// Epoch number of a prediction file: the last run of digits in its stem.
pub fn epoch_of(path: &Path) -> Option<u64> {
    let stem = path.file_stem()?.to_str()?;
    let end = stem.rfind(|c: char| c.is_ascii_digit())? + 1;
    let start = stem[..end]
        .rfind(|c: char| !c.is_ascii_digit())
        .map_or(0, |i| i + 1);
    stem[start..end].parse().ok()
}

/// Prediction files in `dir` keyed by epoch. Gaps in the epoch sequence
/// are logged and left out.
pub fn epoch_files(dir: &Path) -> Result<BTreeMap<u64, PathBuf>> {
    let mut files = BTreeMap::new();
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if !path.is_file() {
            continue;
        }
        let Some(epoch) = epoch_of(&path) else {
            log::debug!("ignoring {}", path.display());
            continue;
        };
        if let Some(previous) = files.insert(epoch, path.clone()) {
            return Err(Error::InvalidArgument(format!(
                "epoch {epoch} appears in both {} and {}",
                previous.display(),
                path.display()
            )));
        }
    }
    if files.is_empty() {
        return Err(Error::Empty("epoch prediction files"));
    }
    let epochs: Vec<u64> = files.keys().copied().collect();
    for w in epochs.windows(2) {
        if w[1] > w[0] + 1 {
            log::warn!("epochs {}..{} are missing", w[0] + 1, w[1] - 1);
        }
    }
    Ok(files)
}

/// Four relation rates for one set of key-indexed predictions. Keys without
/// a prediction count as zero.
pub fn relation_rates(
    instances: &[RelationInstance],
    truth: &Symbol,
    predictions: &Predictions,
    force_trivial_zeros: bool,
) -> Result<Vec<(&'static str, [f64; 4])>> {
    let mut groups: BTreeMap<&'static str, Vec<RelationInstance>> = BTreeMap::new();
    for inst in instances {
        groups.entry(inst.relation().name()).or_default().push(inst.clone());
    }
    let predict = |k: &crate::key::Key| match predictions.get(&k.to_string()) {
        None => Some(Coefficient::zero()),
        Some(Prediction::Value(c)) => Some(c.clone()),
        Some(Prediction::Invalid(_)) => None,
    };
    groups
        .into_par_iter()
        .map(|(name, group)| Ok((name, score_instances(&group, truth, predict, force_trivial_zeros)?.rates())))
        .collect()
}

/// One row per (epoch, relation), epochs ascending.
pub fn relation_curves(
    dir: &Path,
    instances: &[RelationInstance],
    truth: &Symbol,
    force_trivial_zeros: bool,
) -> Result<Vec<CurveRow>> {
    if instances.is_empty() {
        return Err(Error::Empty("relation instances"));
    }
    let files: Vec<(u64, PathBuf)> = epoch_files(dir)?.into_iter().collect();
    let per_epoch: Vec<Vec<CurveRow>> = files
        .par_iter()
        .map(|(epoch, path)| {
            let predictions = read_predictions(BufReader::new(File::open(path)?))?;
            Ok(relation_rates(instances, truth, &predictions, force_trivial_zeros)?
                .into_iter()
                .map(|(relation, rates)| CurveRow {
                    epoch: *epoch,
                    relation,
                    rates,
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_epoch.into_iter().flatten().collect())
}

pub fn curves_to_text(rows: &[CurveRow]) -> String {
    let mut out = String::from("epoch\trelation\trate1\trate2\trate3\trate4\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\n",
            r.epoch, r.relation, r.rates[0], r.rates[1], r.rates[2], r.rates[3]
        ));
    }
    out
}
