//! Blocks, transactions and the canonical hashing layout.
//!
//! Hash input layout (bytes, in order):
//!   1. chain_key as 32 raw bytes
//!   2. height as 8-byte little-endian
//!   3. prev_hash as 32 raw bytes
//!   4. created_at as 8-byte little-endian
//!   5. transaction count as 8-byte little-endian
//!   6. per transaction, in list order:
//!      a. tx_id length as 8-byte little-endian, then tx_id UTF-8 bytes
//!      b. SHA-256 of the payload as 32 raw bytes
//!
//! Every field that contributes to a block's hash is listed above so nothing
//! is accidentally omitted; `block_hash` itself is never part of the input.

use serde::{Deserialize, Serialize};

use crate::digest::{Digest, Hasher};
use crate::scope::Scope;

/// Logical time. The engine never reads a wall clock.
pub type Tick = u64;

/// A submitted transaction. The scope is declared by the submitter, never
/// inferred from the payload.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Transaction {
    pub tx_id: String,
    #[serde(with = "hex_bytes")]
    pub payload: Vec<u8>,
    pub declared_scope: Scope,
    pub submitted_at: Tick,
}

/// One block in a context chain. Height-0 blocks (genesis and subroots) are
/// structural and carry no transactions.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Block {
    pub chain_key: Digest,
    pub height: u64,
    pub prev_hash: Digest,
    pub transactions: Vec<Transaction>,
    pub block_hash: Digest,
    pub created_at: Tick,
}

impl Block {
    /// Builds a block and seals it with its canonical hash.
    pub fn sealed(
        chain_key: Digest,
        height: u64,
        prev_hash: Digest,
        transactions: Vec<Transaction>,
        created_at: Tick,
    ) -> Block {
        let block_hash = hash_block_fields(chain_key, height, prev_hash, &transactions, created_at);
        Block {
            chain_key,
            height,
            prev_hash,
            transactions,
            block_hash,
            created_at,
        }
    }
}

/// Recomputes the canonical hash of a block from everything except the
/// stored `block_hash`. Total and deterministic.
pub fn hash_block(block: &Block) -> Digest {
    hash_block_fields(
        block.chain_key,
        block.height,
        block.prev_hash,
        &block.transactions,
        block.created_at,
    )
}

pub fn hash_block_fields(
    chain_key: Digest,
    height: u64,
    prev_hash: Digest,
    transactions: &[Transaction],
    created_at: Tick,
) -> Digest {
    let mut hasher = Hasher::new();
    hasher.raw(chain_key.as_bytes());
    hasher.u64(height);
    hasher.raw(prev_hash.as_bytes());
    hasher.u64(created_at);
    hasher.u64(transactions.len() as u64);
    for tx in transactions {
        hasher.var(tx.tx_id.as_bytes());
        hasher.raw(Digest::of(&tx.payload).as_bytes());
    }
    hasher.finish()
}

mod hex_bytes {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        bytes: &[u8],
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&hex::encode(bytes))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Vec<u8>, D::Error> {
        let s = String::deserialize(deserializer)?;
        hex::decode(&s).map_err(|e| D::Error::custom(format!("invalid hex payload: {e}")))
    }
}
