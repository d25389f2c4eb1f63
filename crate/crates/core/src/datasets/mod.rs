//! Dataset construction for every training task, plus the canonical
//! dataset file writer.

mod coeff;
mod mixed;
mod sampling;
mod strikeout;
mod zero_nonzero;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::tokens::{format_tokens, Token};

pub use coeff::{make_coeff_from_key, Representation, TargetKind};
pub use mixed::{make_mixed_loop, MixedLoopDatasets};
pub use sampling::{sample_zeros, ZeroPolicy, TRIVIAL_ZERO_PERCENT};
pub use strikeout::{
    dedup_examples, make_strikeout, parent_count, strike_parents, ParentOrder, StrikeDistance,
    StrikeVariant, ValueTransform,
};
pub use zero_nonzero::make_zero_nonzero;

/// One input/target pair. `id` is unique within a dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example {
    pub id: String,
    pub loop_order: usize,
    pub input: Vec<Token>,
    pub target: Vec<Token>,
    /// Target value, written to the truth file.
    pub value: Coefficient,
}

/// Sizes of the held-out and training splits. `train = None` takes every
/// example not used for testing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSpec {
    pub train: Option<usize>,
    pub test: usize,
}

impl SplitSpec {
    pub fn new(train: Option<usize>, test: usize) -> SplitSpec {
        SplitSpec { train, test }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub task: String,
    /// Loop order, or a label such as `5+6` for mixed data.
    pub loop_label: String,
    pub seed: u64,
    pub variant: String,
    pub train: Vec<Example>,
    pub test: Vec<Example>,
}

impl Dataset {
    pub fn header(&self) -> String {
        format!(
            "#task={} loop={} seed={} variant={}",
            self.task, self.loop_label, self.seed, self.variant
        )
    }

    pub fn len(&self) -> usize {
        self.train.len() + self.test.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Writes `<stem>.<split>.tsv`, `.ids` and `.truth` for both splits and
    /// returns the paths written.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for (split, examples) in [("train", &self.train), ("test", &self.test)] {
            let tsv = dir.join(format!("{stem}.{split}.tsv"));
            let ids = dir.join(format!("{stem}.{split}.ids"));
            let truth = dir.join(format!("{stem}.{split}.truth"));
            let mut w = BufWriter::new(File::create(&tsv)?);
            self.write_examples(&mut w, examples)?;
            w.flush()?;
            let mut w = BufWriter::new(File::create(&ids)?);
            for e in examples {
                writeln!(w, "{}", e.id)?;
            }
            w.flush()?;
            let mut w = BufWriter::new(File::create(&truth)?);
            for e in examples {
                writeln!(w, "{}\t{}", e.id, e.value)?;
            }
            w.flush()?;
            written.extend([tsv, ids, truth]);
        }
        Ok(written)
    }

    /// Header line followed by `<input>\t<target>` lines.
    pub fn write_examples<W: Write>(&self, mut w: W, examples: &[Example]) -> Result<()> {
        writeln!(w, "{}", self.header())?;
        for e in examples {
            writeln!(w, "{}\t{}", format_tokens(&e.input), format_tokens(&e.target))?;
        }
        Ok(())
    }
}

fn sort_by_id(examples: &mut [Example]) {
    examples.sort_by(|a, b| a.id.cmp(&b.id));
}

/// Shuffles, takes the test split first, then the training split; both
/// splits come back sorted by id.
pub(crate) fn split<R: Rng>(
    mut examples: Vec<Example>,
    spec: SplitSpec,
    rng: &mut R,
) -> Result<(Vec<Example>, Vec<Example>)> {
    let train_len = spec.train.unwrap_or(examples.len().saturating_sub(spec.test));
    let needed = spec.test + train_len;
    if needed > examples.len() {
        return Err(Error::InsufficientPool {
            requested: needed,
            available: examples.len(),
        });
    }
    sort_by_id(&mut examples);
    examples.shuffle(rng);
    let mut test: Vec<Example> = examples.drain(..spec.test).collect();
    let mut train: Vec<Example> = examples.drain(..train_len).collect();
    sort_by_id(&mut test);
    sort_by_id(&mut train);
    Ok((train, test))
}

/// Splits two classes so each split holds them in equal numbers; an odd
/// split size gives the extra example to the first class.
pub(crate) fn split_balanced<R: Rng>(
    first: Vec<Example>,
    second: Vec<Example>,
    spec: SplitSpec,
    rng: &mut R,
) -> Result<(Vec<Example>, Vec<Example>)> {
    let half = |n: usize| (n.div_ceil(2), n / 2);
    let (t1, t2) = half(spec.test);
    let (r1, r2) = match spec.train {
        Some(n) => half(n),
        None => (
            first.len().saturating_sub(t1),
            second.len().saturating_sub(t2),
        ),
    };
    let total = spec.test + r1 + r2;
    if t1 + r1 > first.len() || t2 + r2 > second.len() {
        return Err(Error::InsufficientPool {
            requested: total,
            available: first.len() + second.len(),
        });
    }
    let (train1, test1) = split(first, SplitSpec::new(Some(r1), t1), rng)?;
    let (train2, test2) = split(second, SplitSpec::new(Some(r2), t2), rng)?;
    let mut train = [train1, train2].concat();
    let mut test = [test1, test2].concat();
    sort_by_id(&mut train);
    sort_by_id(&mut test);
    Ok((train, test))
}
