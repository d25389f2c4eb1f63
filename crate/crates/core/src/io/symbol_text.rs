use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::key::{parse_letters, Key};
use crate::symbol::{BuildReport, Symbol, SymbolBuilder};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum SymbolFormat {
    /// Sorted `<key>\t<coefficient>` lines, nonzero, strict integers.
    Canonical,
    /// Any whitespace or comma delimiters, `#` comments, unsorted lines,
    /// zeros and repeated identical lines tolerated. Letters of a key may be
    /// separated too.
    #[default]
    Permissive,
}

/// Writes the canonical text form.
pub fn write_symbol<W: Write>(mut w: W, symbol: &Symbol) -> Result<()> {
    for (k, c) in symbol.iter() {
        writeln!(w, "{k}\t{c}")?;
    }
    Ok(())
}

pub fn write_symbol_file(path: &Path, symbol: &Symbol) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_symbol(&mut w, symbol)?;
    w.flush()?;
    Ok(())
}

/// Reads a symbol. The loop order is taken from `loop_order` or else from
/// the first key.
pub fn read_symbol<R: BufRead>(
    r: R,
    format: SymbolFormat,
    loop_order: Option<usize>,
) -> Result<(Symbol, BuildReport)> {
    let mut builder: Option<SymbolBuilder> = match loop_order {
        Some(l) => Some(SymbolBuilder::new(l)?),
        None => None,
    };
    let mut previous: Option<Key> = None;
    for (i, line) in r.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let parsed = match format {
            SymbolFormat::Canonical => Some(parse_canonical(&line, line_no)?),
            SymbolFormat::Permissive => parse_permissive(&line, line_no)?,
        };
        let Some((key, c)) = parsed else { continue };
        if format == SymbolFormat::Canonical {
            if let Some(p) = previous {
                if p >= key {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("{key} is not in ascending order after {p}"),
                    });
                }
            }
            previous = Some(key);
        }
        let b = match &mut builder {
            Some(b) => b,
            None => builder.insert(SymbolBuilder::new(key.loop_order())?),
        };
        b.insert(key, c).map_err(|e| match e {
            Error::KeyLength { .. } => Error::Parse {
                line: line_no,
                message: format!("{key} has length {} but the symbol has loop {}", key.len(), b.loop_order()),
            },
            e => e,
        })?;
    }
    let builder = builder.ok_or(Error::Empty("symbol file has no elements"))?;
    let (symbol, report) = builder.build()?;
    if report.zeros_dropped > 0 {
        log::warn!("dropped {} zero coefficients", report.zeros_dropped);
    }
    Ok((symbol, report))
}

pub fn read_symbol_file(
    path: &Path,
    format: SymbolFormat,
    loop_order: Option<usize>,
) -> Result<(Symbol, BuildReport)> {
    read_symbol(BufReader::new(File::open(path)?), format, loop_order)
}

fn parse_canonical(line: &str, line_no: usize) -> Result<(Key, Coefficient)> {
    let bad = |message: String| Error::Parse {
        line: line_no,
        message,
    };
    let (key, coef) = line
        .split_once('\t')
        .ok_or_else(|| bad("expected <key>\\t<coefficient>".into()))?;
    let key: Key = key.parse()?;
    let c: Coefficient = coef
        .parse()
        .map_err(|_| bad(format!("{coef:?} is not a canonical integer")))?;
    if c.is_zero() {
        return Err(bad("zero coefficients are not written in canonical form".into()));
    }
    Ok((key, c))
}

fn parse_permissive(line: &str, line_no: usize) -> Result<Option<(Key, Coefficient)>> {
    let line = line.split('#').next().unwrap_or("");
    let fields: Vec<&str> = line
        .split(|c: char| c.is_whitespace() || c == ',' || c == ';')
        .filter(|f| !f.is_empty())
        .collect();
    let Some((coef, key_parts)) = fields.split_last() else {
        return Ok(None);
    };
    let bad = |message: String| Error::Parse {
        line: line_no,
        message,
    };
    if key_parts.is_empty() {
        return Err(bad("missing coefficient".into()));
    }
    let mut letters = Vec::new();
    for part in key_parts {
        letters.extend(parse_letters(part)?);
    }
    let key = Key::from_letters(&letters)?;
    let c = Coefficient::parse_lenient(coef).map_err(|_| bad(format!("{coef:?} is not an integer")))?;
    Ok(Some((key, c)))
}
