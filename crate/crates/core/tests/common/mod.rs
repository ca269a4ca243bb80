//! Shared helpers for integration and property tests: a small identity
//! universe and tree builders driven by scope bitmasks.

#![allow(dead_code)]

use erasable_ledger::placement::{canonicalize_scope, place_transaction};
use erasable_ledger::{Identity, LedgerTree, Scope, Transaction};

/// Six identities: two organizations and four persons.
pub fn universe() -> Vec<Identity> {
    vec![
        Identity::organization("did:org:x").unwrap(),
        Identity::organization("did:org:y").unwrap(),
        Identity::person("did:person:a").unwrap(),
        Identity::person("did:person:b").unwrap(),
        Identity::person("did:person:c").unwrap(),
        Identity::person("did:person:d").unwrap(),
    ]
}

pub fn scope_from_mask(universe: &[Identity], mask: u8) -> Scope {
    let members: Vec<Identity> = universe
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, id)| id.clone())
        .collect();
    canonicalize_scope(&members).unwrap()
}

/// Builds a tree by placing one transaction per mask, in order. Masks wider
/// than the universe are truncated.
pub fn tree_from_masks(masks: &[u8]) -> LedgerTree {
    let ids = universe();
    let width_mask = (1u8 << ids.len().min(7)) - 1;
    let mut tree = erasable_ledger::make_genesis("demo", 0).unwrap();
    for (i, mask) in masks.iter().enumerate() {
        let scope = scope_from_mask(&ids, mask & width_mask);
        let tx = Transaction {
            tx_id: format!("t-{i}"),
            payload: format!("payload {i} mask {mask}").into_bytes(),
            declared_scope: scope,
            submitted_at: i as u64 + 1,
        };
        let (next, _) = place_transaction(&tree, tx, i as u64 + 1).unwrap();
        tree = next;
    }
    tree
}
