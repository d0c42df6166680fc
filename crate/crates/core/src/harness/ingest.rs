//! Stream files: one token per line, little-endian u64 binary, or `src,dst`
//! address pairs.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hashing::mix64;
use crate::params::ItemId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StreamFormat {
    /// One UTF-8 token per line; blank lines are skipped.
    Text,
    /// Consecutive little-endian 8-byte unsigned ids.
    Binary,
    /// `src,dst` per line, the pair hashed to one id.
    IpCsv,
}

impl fmt::Display for StreamFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StreamFormat::Text => "text",
            StreamFormat::Binary => "binary",
            StreamFormat::IpCsv => "ipcsv",
        })
    }
}

impl FromStr for StreamFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "text" | "txt" => Ok(StreamFormat::Text),
            "binary" | "bin" => Ok(StreamFormat::Binary),
            "ipcsv" | "ip-csv" | "csv" => Ok(StreamFormat::IpCsv),
            _ => Err(Error::InvalidParameter(format!(
                "unknown stream format `{s}`"
            ))),
        }
    }
}

/// Stable 64-bit id for a token (FNV-1a, then a finalizer).
pub fn token_id(token: &str) -> ItemId {
    bytes_id(token.as_bytes())
}

fn bytes_id(bytes: &[u8]) -> ItemId {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    ItemId(mix64(h))
}

/// Id for a source/destination address pair.
pub fn pair_id(src: &str, dst: &str) -> ItemId {
    let mut buf = Vec::with_capacity(src.len() + dst.len() + 1);
    buf.extend_from_slice(src.trim().as_bytes());
    buf.push(0);
    buf.extend_from_slice(dst.trim().as_bytes());
    bytes_id(&buf)
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn malformed(path: &Path, detail: String) -> Error {
    Error::Malformed {
        path: path.to_path_buf(),
        detail,
    }
}

pub fn read_stream(path: impl AsRef<Path>, format: StreamFormat) -> Result<Vec<ItemId>> {
    let path = path.as_ref();
    match format {
        StreamFormat::Binary => {
            let mut bytes = Vec::new();
            open(path)?
                .read_to_end(&mut bytes)
                .map_err(|source| Error::Io {
                    path: path.to_path_buf(),
                    source,
                })?;
            if bytes.len() % 8 != 0 {
                return Err(malformed(
                    path,
                    format!(
                        "length {} is not a multiple of 8; trailing record at byte offset {}",
                        bytes.len(),
                        bytes.len() - bytes.len() % 8
                    ),
                ));
            }
            Ok(bytes
                .chunks_exact(8)
                .map(|c| ItemId(u64::from_le_bytes(c.try_into().unwrap())))
                .collect())
        }
        StreamFormat::Text | StreamFormat::IpCsv => {
            let reader = BufReader::new(open(path)?);
            let mut out = Vec::new();
            for (i, line) in reader.lines().enumerate() {
                let line = line.map_err(|e| malformed(path, format!("line {}: {e}", i + 1)))?;
                let line = line.trim_end_matches('\r');
                if line.is_empty() {
                    continue;
                }
                if format == StreamFormat::Text {
                    out.push(token_id(line));
                    continue;
                }
                let (src, dst) = line.split_once(',').ok_or_else(|| {
                    malformed(path, format!("line {}: expected `src,dst`", i + 1))
                })?;
                if i == 0 && src.trim() == "src" && dst.trim() == "dst" {
                    continue;
                }
                if dst.contains(',') {
                    return Err(malformed(path, format!("line {}: too many fields", i + 1)));
                }
                out.push(pair_id(src, dst));
            }
            Ok(out)
        }
    }
}

/// Write ids back out. Text streams hold the decimal id per line, which
/// re-reads as a different (but one-to-one) id.
pub fn write_stream(path: impl AsRef<Path>, format: StreamFormat, items: &[ItemId]) -> Result<()> {
    let path = path.as_ref();
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io)?;
    let mut w = BufWriter::new(file);
    match format {
        StreamFormat::Binary => {
            for x in items {
                w.write_all(&x.0.to_le_bytes()).map_err(io)?;
            }
        }
        StreamFormat::Text => {
            for x in items {
                writeln!(w, "{}", x.0).map_err(io)?;
            }
        }
        StreamFormat::IpCsv => {
            return Err(Error::InvalidParameter(
                "address-pair streams are input-only".into(),
            ))
        }
    }
    w.flush().map_err(io)
}
