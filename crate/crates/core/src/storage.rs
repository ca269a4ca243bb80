//! Durable on-disk representation of a replica.
//!
//! Layout, rooted at the replica directory:
//!
//! ```text
//! genesis.json                      {"network_id":"...","block":{...}}
//! chains/<hex scope key>/subroot.json   {"scope":{"members":[...]},"block":{...}}
//! chains/<hex scope key>/blocks.jsonl   one block per line, ascending height
//! deletion_journal.jsonl            one decision record per line
//! ```
//!
//! Rows are compact JSON in declared field order with no insignificant
//! whitespace, so a saved replica is byte-reproducible. Saving rewrites the
//! layout from scratch: a deleted chain's directory is removed, which is
//! what makes deletion physically remove bytes rather than orphan them.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::block::Block;
use crate::consensus::JournalEntry;
use crate::digest::Digest;
use crate::error::{LedgerError, Result};
use crate::scope::Scope;
use crate::tree::{ContextChain, LedgerTree};
use crate::verify::verify_tree;

#[derive(Serialize, Deserialize)]
struct GenesisFile {
    network_id: String,
    block: Block,
}

#[derive(Serialize, Deserialize)]
struct SubrootFile {
    scope: Scope,
    block: Block,
}

/// Writes the replica to `dir`, replacing whatever layout was there. The
/// journal is written in full alongside the tree.
pub fn save_replica(tree: &LedgerTree, journal: &[JournalEntry], dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;

    let chains_dir = dir.join("chains");
    if chains_dir.exists() {
        fs::remove_dir_all(&chains_dir).map_err(|e| io_err(&chains_dir, e))?;
    }
    fs::create_dir_all(&chains_dir).map_err(|e| io_err(&chains_dir, e))?;

    let genesis = GenesisFile {
        network_id: tree.network_id.clone(),
        block: tree.genesis.clone(),
    };
    write_json_line(&dir.join("genesis.json"), &genesis)?;

    for (key, chain) in &tree.chains {
        let chain_dir = chains_dir.join(key.to_hex());
        fs::create_dir_all(&chain_dir).map_err(|e| io_err(&chain_dir, e))?;
        let subroot = SubrootFile {
            scope: chain.scope.clone(),
            block: chain.subroot.clone(),
        };
        write_json_line(&chain_dir.join("subroot.json"), &subroot)?;
        write_jsonl(&chain_dir.join("blocks.jsonl"), &chain.blocks)?;
    }

    write_jsonl(&dir.join("deletion_journal.jsonl"), journal)?;
    Ok(())
}

/// Loads and verifies a replica. Missing or unparseable files are reported
/// as corrupt layout with the offending path; a tree that loads but fails
/// verification is reported as an integrity failure carrying the full
/// report.
pub fn load_replica(dir: &Path) -> Result<(LedgerTree, Vec<JournalEntry>)> {
    let genesis: GenesisFile = read_json_file(&dir.join("genesis.json"))?;

    let chains_dir = dir.join("chains");
    if !chains_dir.is_dir() {
        return Err(LedgerError::CorruptLayout {
            path: chains_dir.display().to_string(),
            detail: "missing chains directory".into(),
        });
    }

    let mut chain_dirs: Vec<PathBuf> = fs::read_dir(&chains_dir)
        .map_err(|e| io_err(&chains_dir, e))?
        .map(|entry| entry.map(|e| e.path()))
        .collect::<std::io::Result<_>>()
        .map_err(|e| io_err(&chains_dir, e))?;
    chain_dirs.sort();

    let mut tree = LedgerTree {
        network_id: genesis.network_id,
        genesis: genesis.block,
        chains: Default::default(),
    };

    for chain_dir in chain_dirs {
        let name = chain_dir
            .file_name()
            .map(|n| n.to_string_lossy().to_string())
            .unwrap_or_default();
        let key = Digest::from_hex(&name).ok_or_else(|| LedgerError::CorruptLayout {
            path: chain_dir.display().to_string(),
            detail: "directory name is not a 64-char hex scope key".into(),
        })?;

        let subroot: SubrootFile = read_json_file(&chain_dir.join("subroot.json"))?;
        if subroot.scope.key != key {
            return Err(LedgerError::CorruptLayout {
                path: chain_dir.display().to_string(),
                detail: format!(
                    "directory key {} does not match stored scope key {}",
                    key, subroot.scope.key
                ),
            });
        }

        let blocks: Vec<Block> = read_jsonl(&chain_dir.join("blocks.jsonl"))?;
        tree.chains.insert(
            key,
            ContextChain {
                scope: subroot.scope,
                subroot: subroot.block,
                blocks,
            },
        );
    }

    let journal: Vec<JournalEntry> = read_jsonl(&dir.join("deletion_journal.jsonl"))?;

    let report = verify_tree(&tree);
    if !report.ok {
        return Err(LedgerError::IntegrityFailure { report });
    }
    Ok((tree, journal))
}

fn io_err(path: &Path, source: std::io::Error) -> LedgerError {
    LedgerError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn write_json_line<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut line = serde_json::to_string(value).expect("value serializes");
    line.push('\n');
    fs::write(path, line).map_err(|e| io_err(path, e))
}

fn write_jsonl<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut out = String::new();
    for row in rows {
        out.push_str(&serde_json::to_string(row).expect("row serializes"));
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

fn read_json_file<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|_| LedgerError::CorruptLayout {
        path: path.display().to_string(),
        detail: "missing or unreadable file".into(),
    })?;
    serde_json::from_str(&text).map_err(|e| LedgerError::CorruptLayout {
        path: path.display().to_string(),
        detail: format!("parse error: {e}"),
    })
}

fn read_jsonl<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let text = fs::read_to_string(path).map_err(|_| LedgerError::CorruptLayout {
        path: path.display().to_string(),
        detail: "missing or unreadable file".into(),
    })?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let row = serde_json::from_str(line).map_err(|e| LedgerError::CorruptLayout {
            path: path.display().to_string(),
            detail: format!("row {}: parse error: {e}", i + 1),
        })?;
        rows.push(row);
    }
    Ok(rows)
}
