//! Deterministic routing of transactions into context chains.
//!
//! Placement is by *precise* scope match: a transaction lands in the chain
//! whose scope equals its declared scope exactly, never in a superset or
//! subset chain. Subroots are created lazily, on the first transaction for
//! a scope.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::block::{Block, Tick, Transaction};
use crate::digest::Digest;
use crate::error::{LedgerError, Result};
use crate::identity::Identity;
use crate::scope::Scope;
use crate::tree::{ContextChain, LedgerTree};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlacementResult {
    pub chain_key: Digest,
    /// True iff the chain did not exist before this placement.
    pub created_chain: bool,
    pub block: Block,
}

/// How existing chains relate to one identity's erasure request: chains not
/// mentioning the identity are untouched, the single-member chain is
/// deletable unilaterally, everything else needs deletion consensus.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ErasureImpact {
    pub unaffected: Vec<Digest>,
    pub unilateral: Vec<Digest>,
    pub consensus_required: Vec<Digest>,
}

/// Deduplicates, sorts and keys a member list. Idempotent.
pub fn canonicalize_scope(identities: &[Identity]) -> Result<Scope> {
    for identity in identities {
        if identity.validate().is_err() {
            return Err(LedgerError::InvalidArgument(format!(
                "malformed identifier in scope: {:?}",
                identity.id
            )));
        }
    }
    let members: BTreeSet<Identity> = identities.iter().cloned().collect();
    Scope::from_sorted_members(members.into_iter().collect())
}

/// Appends `tx` as a new single-transaction block at the head of the chain
/// whose scope equals the declared scope exactly, creating the subroot first
/// when the chain does not exist yet. No other chain changes.
pub fn place_transaction(
    tree: &LedgerTree,
    tx: Transaction,
    now: Tick,
) -> Result<(LedgerTree, PlacementResult)> {
    if !tx.declared_scope.is_canonical() {
        return Err(LedgerError::InvalidArgument(format!(
            "declared scope of {} is not canonical",
            tx.tx_id
        )));
    }
    if tree.contains_tx_id(&tx.tx_id) {
        return Err(LedgerError::DuplicateTransaction {
            tx_id: tx.tx_id.clone(),
        });
    }

    let key = tx.declared_scope.key;
    let mut next = tree.clone();
    let created_chain = !next.chains.contains_key(&key);
    if created_chain {
        let subroot = Block::sealed(key, 0, tree.genesis.block_hash, Vec::new(), now);
        next.chains.insert(
            key,
            ContextChain {
                scope: tx.declared_scope.clone(),
                subroot,
                blocks: Vec::new(),
            },
        );
    }

    let chain = next.chains.get_mut(&key).expect("chain exists");
    let block = Block::sealed(key, chain.next_height(), chain.head_hash(), vec![tx], now);
    chain.blocks.push(block.clone());

    Ok((
        next,
        PlacementResult {
            chain_key: key,
            created_chain,
            block,
        },
    ))
}

/// The chain with exactly this scope, if one exists. Never a superset or
/// subset match.
pub fn find_chain<'a>(tree: &'a LedgerTree, scope: &Scope) -> Option<&'a ContextChain> {
    tree.chains.get(&scope.key)
}

/// Partitions every existing chain by how deleting `who`'s data would touch
/// it. The three lists are disjoint and cover all chains; `unilateral` holds
/// at most the single chain whose scope is exactly `{who}`.
pub fn chains_affected_by(tree: &LedgerTree, who: &Identity) -> ErasureImpact {
    let mut impact = ErasureImpact::default();
    for (key, chain) in &tree.chains {
        if !chain.scope.contains(who) {
            impact.unaffected.push(*key);
        } else if chain.scope.members.len() == 1 {
            impact.unilateral.push(*key);
        } else {
            impact.consensus_required.push(*key);
        }
    }
    impact
}

/// Upper bound for the number of branches given `k` organizations and `m`
/// persons: `2^(k+m)`, i.e. the number of subsets of the identity universe.
pub fn max_branch_count(k: u32, m: u32) -> Result<u64> {
    let n = k as u64 + m as u64;
    if n > 62 {
        return Err(LedgerError::OutOfRange(format!(
            "k + m = {n} exceeds 62, branch count would overflow"
        )));
    }
    Ok(1u64 << n)
}
