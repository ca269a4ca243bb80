use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::block::{Block, Tick, Transaction};
use crate::digest::Digest;
use crate::error::{LedgerError, Result};
use crate::scope::Scope;

/// A linear hash-chained subchain holding exactly the transactions whose
/// declared scope equals the chain's scope.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ContextChain {
    pub scope: Scope,
    /// Height-0 anchor; links to the genesis block and carries no
    /// transactions, only the scope definition.
    pub subroot: Block,
    /// Transaction blocks, heights 1..=n in order.
    pub blocks: Vec<Block>,
}

impl ContextChain {
    /// The hash a new block must link to: the last block, or the subroot.
    pub fn head_hash(&self) -> Digest {
        self.blocks
            .last()
            .map(|b| b.block_hash)
            .unwrap_or(self.subroot.block_hash)
    }

    pub fn next_height(&self) -> u64 {
        self.blocks.len() as u64 + 1
    }

    /// All transactions in the chain, in block order.
    pub fn transactions(&self) -> impl Iterator<Item = &Transaction> {
        self.blocks.iter().flat_map(|b| b.transactions.iter())
    }
}

/// The whole ledger: one genesis block and one context chain per scope in
/// use, keyed by scope key. Chains share no hash dependencies except the
/// genesis hash, which is what makes whole-chain deletion side-effect free.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LedgerTree {
    pub network_id: String,
    pub genesis: Block,
    pub chains: BTreeMap<Digest, ContextChain>,
}

impl LedgerTree {
    pub fn chain(&self, key: &Digest) -> Option<&ContextChain> {
        self.chains.get(key)
    }

    /// True if any block anywhere in the tree contains this transaction id.
    pub fn contains_tx_id(&self, tx_id: &str) -> bool {
        self.chains
            .values()
            .flat_map(|c| c.transactions())
            .any(|tx| tx.tx_id == tx_id)
    }

    /// Canonical byte serialization of the whole tree; replicas are
    /// convergent exactly when these bytes are equal.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("ledger tree serializes")
    }
}

/// Creates a tree containing only the genesis block. No subroots are
/// pre-created; chains appear on demand when their first transaction is
/// placed.
///
/// The genesis block's chain key is the SHA-256 of the network id, so two
/// networks with different ids have different genesis hashes. Its prev_hash
/// is the 32-zero-byte sentinel.
pub fn make_genesis(network_id: &str, created_at: Tick) -> Result<LedgerTree> {
    if network_id.is_empty() {
        return Err(LedgerError::InvalidArgument(
            "network_id must be non-empty".into(),
        ));
    }
    let genesis = Block::sealed(
        Digest::of(network_id.as_bytes()),
        0,
        Digest::ZERO,
        Vec::new(),
        created_at,
    );
    Ok(LedgerTree {
        network_id: network_id.to_string(),
        genesis,
        chains: BTreeMap::new(),
    })
}
