use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use ffsym_core::io::{read_symbol, SymbolFormat};
use ffsym_core::{Result, Symbol};

static STDIN: OnceLock<Vec<u8>> = OnceLock::new();

/// Contents of a file, or of standard input for `-`. Standard input is read
/// once and shared by every `-` argument.
pub fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    if path == Path::new("-") {
        if let Some(b) = STDIN.get() {
            return Ok(b.clone());
        }
        let mut buf = Vec::new();
        io::stdin().lock().read_to_end(&mut buf)?;
        return Ok(STDIN.get_or_init(|| buf).clone());
    }
    Ok(std::fs::read(path)?)
}

pub fn read_symbol_arg(path: &Path, loop_order: Option<usize>) -> Result<Symbol> {
    let bytes = read_bytes(path)?;
    let (symbol, report) = read_symbol(bytes.as_slice(), SymbolFormat::Permissive, loop_order)?;
    log::info!(
        "{}: {} elements, {} zeros dropped",
        path.display(),
        symbol.len(),
        report.zeros_dropped
    );
    Ok(symbol)
}

pub fn output(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}
