use std::fmt;

use serde::{Deserialize, Serialize};

use crate::block::hash_block;
use crate::digest::Digest;
use crate::tree::LedgerTree;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// Stored block hash does not match the recomputed canonical hash.
    HashMismatch,
    /// A block's prev_hash does not link to its predecessor's recomputed hash.
    LinkBreak,
    /// Heights are not contiguous from 1, or a structural block is not at 0.
    BadHeight,
    /// A transaction's declared scope key differs from the chain key.
    ScopeMismatch,
    /// A chain's stored scope is not canonical or disagrees with its map key.
    ChainKeyMismatch,
    /// Structural rule broken: genesis/subroot with transactions, or a
    /// transaction block without any.
    Structural,
    /// The genesis block fails its own recomputation or sentinel rules.
    GenesisMismatch,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Violation {
    /// Chain the violation belongs to; `None` for tree-level findings.
    pub chain_key: Option<Digest>,
    pub height: u64,
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.chain_key {
            Some(key) => write!(
                f,
                "chain {} height {}: {:?}: {}",
                &key.to_hex()[..12],
                self.height,
                self.kind,
                self.detail
            ),
            None => write!(f, "tree: {:?}: {}", self.kind, self.detail),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    fn from_violations(violations: Vec<Violation>) -> VerificationReport {
        VerificationReport {
            ok: violations.is_empty(),
            violations,
        }
    }
}

/// Checks the full tree and returns every violation found, never just the
/// first. A damaged tree yields `ok == false`; this function cannot fail.
///
/// Link checks compare each block's `prev_hash` against the *recomputed*
/// hash of its predecessor, so tampering with a block's contents surfaces
/// both as a hash mismatch at that block and a link break at its successor.
pub fn verify_tree(tree: &LedgerTree) -> VerificationReport {
    let mut violations = Vec::new();

    // Genesis checks.
    let genesis_hash = hash_block(&tree.genesis);
    if tree.genesis.block_hash != genesis_hash {
        violations.push(Violation {
            chain_key: None,
            height: 0,
            kind: ViolationKind::GenesisMismatch,
            detail: "stored genesis hash does not match recomputation".into(),
        });
    }
    if tree.genesis.height != 0 || tree.genesis.prev_hash != Digest::ZERO {
        violations.push(Violation {
            chain_key: None,
            height: tree.genesis.height,
            kind: ViolationKind::GenesisMismatch,
            detail: "genesis must have height 0 and zero prev_hash".into(),
        });
    }
    if !tree.genesis.transactions.is_empty() {
        violations.push(Violation {
            chain_key: None,
            height: 0,
            kind: ViolationKind::Structural,
            detail: "genesis block must carry no transactions".into(),
        });
    }

    for (map_key, chain) in &tree.chains {
        let key = *map_key;

        // Scope canonicality and key agreement. The chains map makes keys
        // unique by construction; what can still go wrong is a stored scope
        // that disagrees with the key it is filed under.
        if !chain.scope.is_canonical() {
            violations.push(Violation {
                chain_key: Some(key),
                height: 0,
                kind: ViolationKind::ChainKeyMismatch,
                detail: format!("scope {} is not canonical", chain.scope.label()),
            });
        }
        if chain.scope.key != key {
            violations.push(Violation {
                chain_key: Some(key),
                height: 0,
                kind: ViolationKind::ChainKeyMismatch,
                detail: format!(
                    "scope key {} filed under chain key {}",
                    chain.scope.key, key
                ),
            });
        }

        // Subroot checks.
        let subroot_hash = hash_block(&chain.subroot);
        if chain.subroot.block_hash != subroot_hash {
            violations.push(Violation {
                chain_key: Some(key),
                height: 0,
                kind: ViolationKind::HashMismatch,
                detail: "stored subroot hash does not match recomputation".into(),
            });
        }
        if chain.subroot.height != 0 {
            violations.push(Violation {
                chain_key: Some(key),
                height: chain.subroot.height,
                kind: ViolationKind::BadHeight,
                detail: "subroot must be at height 0".into(),
            });
        }
        if !chain.subroot.transactions.is_empty() {
            violations.push(Violation {
                chain_key: Some(key),
                height: 0,
                kind: ViolationKind::Structural,
                detail: "subroot must carry no transactions".into(),
            });
        }
        if chain.subroot.chain_key != key {
            violations.push(Violation {
                chain_key: Some(key),
                height: 0,
                kind: ViolationKind::ChainKeyMismatch,
                detail: "subroot chain_key differs from chain key".into(),
            });
        }
        if chain.subroot.prev_hash != genesis_hash {
            violations.push(Violation {
                chain_key: Some(key),
                height: 0,
                kind: ViolationKind::LinkBreak,
                detail: "subroot does not link to the genesis block".into(),
            });
        }

        // Transaction blocks: contiguous heights, links against recomputed
        // predecessor hashes, per-block hash recomputation, scope agreement.
        let mut prev_recomputed = subroot_hash;
        for (i, block) in chain.blocks.iter().enumerate() {
            let expected_height = i as u64 + 1;
            if block.height != expected_height {
                violations.push(Violation {
                    chain_key: Some(key),
                    height: block.height,
                    kind: ViolationKind::BadHeight,
                    detail: format!("expected height {expected_height}, found {}", block.height),
                });
            }
            if block.chain_key != key {
                violations.push(Violation {
                    chain_key: Some(key),
                    height: block.height,
                    kind: ViolationKind::ChainKeyMismatch,
                    detail: "block chain_key differs from chain key".into(),
                });
            }
            if block.transactions.is_empty() {
                violations.push(Violation {
                    chain_key: Some(key),
                    height: block.height,
                    kind: ViolationKind::Structural,
                    detail: "transaction block must carry at least one transaction".into(),
                });
            }
            if block.prev_hash != prev_recomputed {
                violations.push(Violation {
                    chain_key: Some(key),
                    height: block.height,
                    kind: ViolationKind::LinkBreak,
                    detail: "prev_hash does not match predecessor recomputation".into(),
                });
            }
            let recomputed = hash_block(block);
            if block.block_hash != recomputed {
                violations.push(Violation {
                    chain_key: Some(key),
                    height: block.height,
                    kind: ViolationKind::HashMismatch,
                    detail: "stored block hash does not match recomputation".into(),
                });
            }
            for tx in &block.transactions {
                if tx.declared_scope.key != key {
                    violations.push(Violation {
                        chain_key: Some(key),
                        height: block.height,
                        kind: ViolationKind::ScopeMismatch,
                        detail: format!(
                            "transaction {} declares scope {} but lives in chain {}",
                            tx.tx_id, tx.declared_scope.key, key
                        ),
                    });
                }
            }
            prev_recomputed = recomputed;
        }
    }

    VerificationReport::from_violations(violations)
}
