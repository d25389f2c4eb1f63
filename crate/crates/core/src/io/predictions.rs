use std::collections::BTreeMap;
use std::io::BufRead;

use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::tokens::{decode_coefficient, parse_tokens};

/// A model output for one example. Sequences that do not decode to an
/// integer are kept as `Invalid` and count as wrong everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Prediction {
    Value(Coefficient),
    Invalid(String),
}

impl Prediction {
    pub fn value(&self) -> Option<&Coefficient> {
        match self {
            Prediction::Value(c) => Some(c),
            Prediction::Invalid(_) => None,
        }
    }
}

/// Accepts a plain decimal integer or a token sequence such as `+ 12 334`
/// (commas allowed).
pub fn parse_prediction(text: &str) -> Prediction {
    let text = text.trim();
    if let Ok(c) = Coefficient::parse_lenient(text) {
        return Prediction::Value(c);
    }
    parse_tokens(text)
        .and_then(|t| decode_coefficient(&t))
        .map_or_else(|_| Prediction::Invalid(text.to_string()), Prediction::Value)
}

pub type Predictions = BTreeMap<String, Prediction>;
pub type Truth = BTreeMap<String, Coefficient>;

fn data_lines<R: BufRead>(r: R) -> impl Iterator<Item = Result<(usize, String)>> {
    r.lines().enumerate().filter_map(|(i, line)| match line {
        Err(e) => Some(Err(e.into())),
        Ok(l) => {
            let l = l.trim_end_matches('\r').to_string();
            if l.trim().is_empty() || l.starts_with('#') {
                None
            } else {
                Some(Ok((i + 1, l)))
            }
        }
    })
}

/// Reads `<id>\t<prediction>` lines. A line with an id but no prediction
/// yields an invalid marker.
pub fn read_predictions<R: BufRead>(r: R) -> Result<Predictions> {
    let mut out = Predictions::new();
    for line in data_lines(r) {
        let (_, line) = line?;
        let (id, text) = line.split_once('\t').unwrap_or((line.as_str(), ""));
        let id = id.trim();
        if out.insert(id.to_string(), parse_prediction(text)).is_some() {
            return Err(Error::DuplicateId(id.to_string()));
        }
    }
    Ok(out)
}

/// Reads `<id>\t<integer>` lines. Dataset truth files and canonical symbol
/// files both have this shape.
pub fn read_truth<R: BufRead>(r: R) -> Result<Truth> {
    let mut out = Truth::new();
    for line in data_lines(r) {
        let (line_no, line) = line?;
        let (id, value) = line.split_once('\t').ok_or_else(|| Error::Parse {
            line: line_no,
            message: "expected <id>\\t<integer>".into(),
        })?;
        let value = Coefficient::parse_lenient(value).map_err(|_| Error::Parse {
            line: line_no,
            message: format!("{value:?} is not an integer"),
        })?;
        if out.insert(id.trim().to_string(), value).is_some() {
            return Err(Error::DuplicateId(id.to_string()));
        }
    }
    Ok(out)
}

/// One id per line, in file order.
pub fn read_ids<R: BufRead>(r: R) -> Result<Vec<String>> {
    data_lines(r)
        .map(|l| l.map(|(_, l)| l.trim().to_string()))
        .collect()
}
