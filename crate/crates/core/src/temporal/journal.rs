//! Append-only journal, one file per table (`<table>.journal`).
//!
//! Layout:
//!
//! ```text
//! file    := MAGIC record*
//! MAGIC   := "MTJ1"                       (4 bytes)
//! record  := len:u32-le crc:u32-le body   (body is `len` bytes)
//! body    := UTF-8 JSON of one JournalEntry
//! ```
//!
//! `crc` is the CRC-32 (IEEE) of `body`. The first record of every file is a
//! `create_table` entry. A record cut short at the end of the file is treated
//! as a torn write and truncated on open; a complete record whose checksum
//! does not match is reported as corruption.

use std::fs::{File, OpenOptions};
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::store::{Payload, RecordId, Schema};
use super::Instant;

pub const JOURNAL_MAGIC: &[u8; 4] = b"MTJ1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum JournalEntry {
    CreateTable { name: String, schema: Schema },
    Insert { id: RecordId, key: String, payload: Payload, valid_start: Instant, tt: Instant },
    Update { id: RecordId, key: String, payload: Payload, valid_from: Instant, tt: Instant },
    Delete { key: String, at: Instant, tt: Instant },
}

#[derive(Debug, thiserror::Error)]
pub enum JournalError {
    #[error("journal {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("journal {path} corrupt at byte {offset}: {reason}")]
    Corrupt { path: PathBuf, offset: u64, reason: String },
}

pub(crate) struct JournalWriter {
    path: PathBuf,
    file: File,
    sync: bool,
}

impl JournalWriter {
    pub(crate) fn create(path: &Path, sync: bool) -> Result<Self, JournalError> {
        let io_err = |source| JournalError::Io { path: path.to_owned(), source };
        let mut file = OpenOptions::new().create_new(true).append(true).open(path).map_err(io_err)?;
        file.write_all(JOURNAL_MAGIC).map_err(io_err)?;
        Ok(JournalWriter { path: path.to_owned(), file, sync })
    }

    pub(crate) fn open_append(path: &Path, sync: bool) -> Result<Self, JournalError> {
        let file = OpenOptions::new()
            .append(true)
            .open(path)
            .map_err(|source| JournalError::Io { path: path.to_owned(), source })?;
        Ok(JournalWriter { path: path.to_owned(), file, sync })
    }

    pub(crate) fn append(&mut self, entry: &JournalEntry) -> Result<(), JournalError> {
        let body = serde_json::to_vec(entry).expect("journal entries serialize");
        let mut frame = Vec::with_capacity(body.len() + 8);
        frame.extend_from_slice(&(body.len() as u32).to_le_bytes());
        frame.extend_from_slice(&crc32fast::hash(&body).to_le_bytes());
        frame.extend_from_slice(&body);
        let io_err = |source| JournalError::Io { path: self.path.clone(), source };
        self.file.write_all(&frame).map_err(io_err)?;
        if self.sync {
            self.file.sync_data().map_err(io_err)?;
        }
        Ok(())
    }
}

/// Reads every complete record. A torn trailing record is cut off the file.
pub(crate) fn read_journal(path: &Path) -> Result<Vec<JournalEntry>, JournalError> {
    let io_err = |source| JournalError::Io { path: path.to_owned(), source };
    let mut bytes = Vec::new();
    File::open(path).and_then(|mut f| f.read_to_end(&mut bytes)).map_err(io_err)?;
    let corrupt =
        |offset: usize, reason: String| JournalError::Corrupt { path: path.to_owned(), offset: offset as u64, reason };
    if bytes.len() < JOURNAL_MAGIC.len() || &bytes[..4] != JOURNAL_MAGIC {
        return Err(corrupt(0, "missing journal header".into()));
    }

    let mut entries = Vec::new();
    let mut pos = JOURNAL_MAGIC.len();
    while pos < bytes.len() {
        if bytes.len() - pos < 8 {
            break;
        }
        let len = u32::from_le_bytes(bytes[pos..pos + 4].try_into().unwrap()) as usize;
        let crc = u32::from_le_bytes(bytes[pos + 4..pos + 8].try_into().unwrap());
        let body_start = pos + 8;
        if bytes.len() - body_start < len {
            break;
        }
        let body = &bytes[body_start..body_start + len];
        if crc32fast::hash(body) != crc {
            return Err(corrupt(pos, "checksum mismatch".into()));
        }
        let entry = serde_json::from_slice(body).map_err(|e| corrupt(pos, e.to_string()))?;
        entries.push(entry);
        pos = body_start + len;
    }

    if pos < bytes.len() {
        let file = OpenOptions::new().write(true).open(path).map_err(io_err)?;
        file.set_len(pos as u64).map_err(io_err)?;
        file.sync_data().map_err(io_err)?;
    }
    Ok(entries)
}
