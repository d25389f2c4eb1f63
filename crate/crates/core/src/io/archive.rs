use std::fs::{self, File};
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};
use std::time::Duration;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::symbol_text::{read_symbol_file, SymbolFormat};
use crate::error::{Error, Result};
use crate::key::Key;
use crate::symbol::Symbol;

/// Environment variable naming the local data directory.
pub const DATA_DIR_ENV: &str = "FFSYM_DATA_DIR";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    /// Path relative to the data directory, also appended to the base URL.
    pub path: String,
    /// Lowercase SHA-256 hex digest.
    pub sha256: String,
    pub loop_order: usize,
    pub expected_count: Option<usize>,
}

/// Per-file checksums and expectations for a symbol archive.
///
/// Text form: one `<relative-path>\t<sha256>\t<loop>\t<expected-count|?>`
/// line per file. Blank lines and `#` comments are ignored, except a
/// `#base-url <url>` line giving the download location.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ArchiveManifest {
    pub base_url: Option<String>,
    pub entries: Vec<ManifestEntry>,
}

impl ArchiveManifest {
    pub fn parse<R: BufRead>(r: R) -> Result<ArchiveManifest> {
        let mut manifest = ArchiveManifest::default();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim_end_matches('\r');
            let bad = |message: String| Error::Parse {
                line: i + 1,
                message,
            };
            if let Some(rest) = line.strip_prefix("#base-url") {
                let url = rest.trim();
                if url.is_empty() {
                    return Err(bad("#base-url needs a value".into()));
                }
                manifest.base_url = Some(url.trim_end_matches('/').to_string());
                continue;
            }
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [path, sha, loop_order, count] = fields[..] else {
                return Err(bad(format!("expected 4 tab-separated fields, found {}", fields.len())));
            };
            if path.is_empty() || Path::new(path).is_absolute() || path.split('/').any(|c| c == "..") {
                return Err(bad(format!("{path:?} is not a relative path inside the data directory")));
            }
            let sha = sha.to_ascii_lowercase();
            if sha.len() != 64 || !sha.bytes().all(|b| b.is_ascii_hexdigit()) {
                return Err(bad(format!("{sha:?} is not a SHA-256 hex digest")));
            }
            let loop_order: usize = loop_order
                .parse()
                .map_err(|_| bad(format!("bad loop order {loop_order:?}")))?;
            let expected_count = match count {
                "?" => None,
                c => Some(c.parse().map_err(|_| bad(format!("bad count {c:?}")))?),
            };
            manifest.entries.push(ManifestEntry {
                path: path.to_string(),
                sha256: sha,
                loop_order,
                expected_count,
            });
        }
        Ok(manifest)
    }

    pub fn from_file(path: &Path) -> Result<ArchiveManifest> {
        ArchiveManifest::parse(BufReader::new(File::open(path)?))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(url) = &self.base_url {
            out.push_str(&format!("#base-url {url}\n"));
        }
        for e in &self.entries {
            let count = e.expected_count.map_or("?".to_string(), |c| c.to_string());
            out.push_str(&format!("{}\t{}\t{}\t{}\n", e.path, e.sha256, e.loop_order, count));
        }
        out
    }
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let mut f = File::open(path)?;
    let mut hasher = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let n = f.read(&mut buf)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hex::encode(hasher.finalize()))
}

/// Downloads one URL to a local file.
pub trait Fetcher: Sync {
    fn fetch(&self, url: &str, dest: &Path) -> std::result::Result<(), String>;
}

pub struct HttpFetcher {
    agent: ureq::Agent,
}

impl HttpFetcher {
    pub fn new() -> HttpFetcher {
        let config = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(3600)))
            .build();
        HttpFetcher {
            agent: config.into(),
        }
    }
}

impl Default for HttpFetcher {
    fn default() -> Self {
        HttpFetcher::new()
    }
}

impl Fetcher for HttpFetcher {
    fn fetch(&self, url: &str, dest: &Path) -> std::result::Result<(), String> {
        let mut response = self.agent.get(url).call().map_err(|e| e.to_string())?;
        let mut out = File::create(dest).map_err(|e| e.to_string())?;
        std::io::copy(&mut response.body_mut().as_reader(), &mut out).map_err(|e| e.to_string())?;
        out.sync_all().map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub attempts: u32,
    pub initial_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            attempts: 5,
            initial_delay: Duration::from_secs(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FetchOutcome {
    AlreadyVerified,
    Downloaded,
}

pub fn quarantine_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".quarantine");
    path.with_file_name(name)
}

fn quarantine(path: &Path) -> Result<PathBuf> {
    let q = quarantine_path(path);
    fs::rename(path, &q)?;
    log::warn!("moved {} to {}", path.display(), q.display());
    Ok(q)
}

/// Makes every manifest file present under `data_dir` with a verified
/// checksum. Files that already verify are left alone. A file that fails
/// verification is moved aside with a `.quarantine` suffix; a download that
/// fails verification is a hard error.
pub fn fetch_archive(
    manifest: &ArchiveManifest,
    data_dir: &Path,
    fetcher: &dyn Fetcher,
    retry: RetryPolicy,
) -> Result<Vec<(PathBuf, FetchOutcome)>> {
    let mut out = Vec::with_capacity(manifest.entries.len());
    for entry in &manifest.entries {
        let path = data_dir.join(&entry.path);
        if path.exists() {
            let actual = sha256_file(&path)?;
            if actual == entry.sha256 {
                out.push((path, FetchOutcome::AlreadyVerified));
                continue;
            }
            quarantine(&path)?;
            if manifest.base_url.is_none() {
                return Err(Error::ChecksumMismatch {
                    path,
                    expected: entry.sha256.clone(),
                    actual,
                });
            }
        }
        let Some(base) = &manifest.base_url else {
            return Err(Error::Io(std::io::Error::new(
                std::io::ErrorKind::NotFound,
                format!("{} is missing and the manifest has no #base-url", path.display()),
            )));
        };
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let url = format!("{base}/{}", entry.path);
        let mut partial = path.clone().into_os_string();
        partial.push(".partial");
        let partial = PathBuf::from(partial);
        download_with_retry(fetcher, &url, &partial, retry)?;
        let actual = sha256_file(&partial)?;
        if actual != entry.sha256 {
            fs::rename(&partial, quarantine_path(&path))?;
            return Err(Error::ChecksumMismatch {
                path,
                expected: entry.sha256.clone(),
                actual,
            });
        }
        fs::rename(&partial, &path)?;
        out.push((path, FetchOutcome::Downloaded));
    }
    Ok(out)
}

fn download_with_retry(fetcher: &dyn Fetcher, url: &str, dest: &Path, retry: RetryPolicy) -> Result<()> {
    let attempts = retry.attempts.max(1);
    let mut delay = retry.initial_delay;
    let mut last = String::new();
    for attempt in 1..=attempts {
        match fetcher.fetch(url, dest) {
            Ok(()) => return Ok(()),
            Err(e) => {
                log::warn!("download {url} attempt {attempt}/{attempts} failed: {e}");
                last = e;
                let _ = fs::remove_file(dest);
                if attempt < attempts {
                    std::thread::sleep(delay);
                    delay *= 2;
                }
            }
        }
    }
    Err(Error::Download {
        url: url.to_string(),
        attempts,
        message: last,
    })
}

#[derive(Debug, Clone)]
pub struct IngestReport {
    pub path: PathBuf,
    pub loop_order: usize,
    pub nonzero: usize,
    pub zeros_dropped: usize,
    pub duplicates_merged: usize,
    pub dihedral_violation: Option<Key>,
    pub trivial_zero_violation: Option<Key>,
}

/// Verifies checksums, parses every file in parallel with the permissive
/// reader and checks the expected counts.
pub fn ingest(manifest: &ArchiveManifest, data_dir: &Path) -> Result<Vec<(Symbol, IngestReport)>> {
    manifest
        .entries
        .par_iter()
        .map(|entry| {
            let path = data_dir.join(&entry.path);
            let actual = sha256_file(&path)?;
            if actual != entry.sha256 {
                quarantine(&path)?;
                return Err(Error::ChecksumMismatch {
                    path,
                    expected: entry.sha256.clone(),
                    actual,
                });
            }
            let (symbol, build) = read_symbol_file(&path, SymbolFormat::Permissive, Some(entry.loop_order))?;
            if let Some(expected) = entry.expected_count {
                if symbol.len() != expected {
                    return Err(Error::CountMismatch {
                        path,
                        expected,
                        actual: symbol.len(),
                    });
                }
            }
            let report = IngestReport {
                path,
                loop_order: entry.loop_order,
                nonzero: symbol.len(),
                zeros_dropped: build.zeros_dropped,
                duplicates_merged: build.duplicates_merged,
                dihedral_violation: symbol.dihedral_violation(),
                trivial_zero_violation: symbol.trivial_zero_violation(),
            };
            Ok((symbol, report))
        })
        .collect()
}
