//! Property tests: hash determinism, tamper evidence, placement laws and
//! the consensus truth rules under randomized inputs.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::{scope_from_mask, tree_from_masks, universe};
use erasable_ledger::block::hash_block_fields;
use erasable_ledger::consensus::{
    apply_deletion, evaluate, DeletionRequest, EndorsementPolicy, EndorserStrategy, SilencePolicy,
    Verdict, Vote, VoteChoice,
};
use erasable_ledger::placement::{chains_affected_by, place_transaction};
use erasable_ledger::{verify_tree, Digest, Identity, Transaction};

fn arb_masks() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(any::<u8>(), 1..40)
}

proptest! {
    /// Serialize→hash is a pure function of the inputs.
    #[test]
    fn hash_determinism(
        chain_key in any::<[u8; 32]>(),
        height in any::<u64>(),
        prev in any::<[u8; 32]>(),
        created_at in any::<u64>(),
        tx_id in "[a-z0-9-]{1,16}",
        payload in prop::collection::vec(any::<u8>(), 0..64),
    ) {
        let scope = scope_from_mask(&universe(), 0b11);
        let tx = Transaction {
            tx_id,
            payload,
            declared_scope: scope,
            submitted_at: created_at,
        };
        let a = hash_block_fields(Digest(chain_key), height, Digest(prev), std::slice::from_ref(&tx), created_at);
        let b = hash_block_fields(Digest(chain_key), height, Digest(prev), std::slice::from_ref(&tx), created_at);
        prop_assert_eq!(a, b);
    }

    /// Mutating any single payload byte anywhere in a valid tree is caught.
    #[test]
    fn tamper_evidence_payload(masks in arb_masks(), pick in any::<prop::sample::Index>(), byte in any::<prop::sample::Index>()) {
        let mut tree = tree_from_masks(&masks);
        prop_assert!(verify_tree(&tree).ok);

        let positions: Vec<(Digest, usize)> = tree
            .chains
            .iter()
            .flat_map(|(key, chain)| (0..chain.blocks.len()).map(move |i| (*key, i)))
            .collect();
        let (key, block_idx) = positions[pick.index(positions.len())];
        let chain = tree.chains.get_mut(&key).unwrap();
        let payload = &mut chain.blocks[block_idx].transactions[0].payload;
        let byte_idx = byte.index(payload.len());
        payload[byte_idx] ^= 0x01;

        prop_assert!(!verify_tree(&tree).ok);
    }

    /// Mutating any stored hash (block hashes, prev links, subroots) is caught.
    #[test]
    fn tamper_evidence_stored_hash(masks in arb_masks(), pick in any::<prop::sample::Index>(), flip_prev in any::<bool>()) {
        let mut tree = tree_from_masks(&masks);

        let positions: Vec<(Digest, usize)> = tree
            .chains
            .iter()
            .flat_map(|(key, chain)| (0..=chain.blocks.len()).map(move |i| (*key, i)))
            .collect();
        let (key, slot) = positions[pick.index(positions.len())];
        let chain = tree.chains.get_mut(&key).unwrap();
        let block = if slot == 0 { &mut chain.subroot } else { &mut chain.blocks[slot - 1] };
        let target = if flip_prev { &mut block.prev_hash } else { &mut block.block_hash };
        let mut raw = *target.as_bytes();
        raw[0] ^= 0x80;
        *target = Digest(raw);

        prop_assert!(!verify_tree(&tree).ok);
    }

    /// Placing the same transaction from the same starting tree twice gives
    /// byte-identical results.
    #[test]
    fn placement_determinism(masks in arb_masks(), mask in any::<u8>()) {
        let tree = tree_from_masks(&masks);
        let scope = scope_from_mask(&universe(), mask & 0x3f);
        let tx = Transaction {
            tx_id: "fresh".into(),
            payload: b"fresh payload".to_vec(),
            declared_scope: scope,
            submitted_at: 99,
        };
        let (a, _) = place_transaction(&tree, tx.clone(), 99).unwrap();
        let (b, _) = place_transaction(&tree, tx, 99).unwrap();
        prop_assert_eq!(a.canonical_bytes(), b.canonical_bytes());
    }

    /// Every transaction lives in exactly one chain and that chain's scope
    /// equals its declared scope; chain count equals distinct scopes placed.
    #[test]
    fn exact_match_exclusivity_and_lazy_creation(masks in arb_masks()) {
        let ids = universe();
        let tree = tree_from_masks(&masks);

        let distinct: BTreeSet<Digest> = masks
            .iter()
            .map(|m| scope_from_mask(&ids, m & 0x3f).key)
            .collect();
        prop_assert_eq!(tree.chains.len(), distinct.len());

        let mut seen = BTreeSet::new();
        for (key, chain) in &tree.chains {
            for tx in chain.transactions() {
                prop_assert_eq!(tx.declared_scope.key, *key);
                prop_assert!(seen.insert(tx.tx_id.clone()), "tx in more than one chain");
            }
        }
        prop_assert_eq!(seen.len(), masks.len());
    }

    /// The three affected-chain lists are disjoint, cover every chain, and
    /// at most one chain is unilateral.
    #[test]
    fn affected_partition_is_a_partition(masks in arb_masks(), who_idx in 0usize..6) {
        let ids = universe();
        let tree = tree_from_masks(&masks);
        let impact = chains_affected_by(&tree, &ids[who_idx]);

        let mut all: Vec<Digest> = impact
            .unaffected
            .iter()
            .chain(&impact.unilateral)
            .chain(&impact.consensus_required)
            .copied()
            .collect();
        all.sort();
        let chains: Vec<Digest> = tree.chains.keys().copied().collect();
        prop_assert_eq!(all.len(), chains.len());
        let dedup: BTreeSet<Digest> = all.iter().copied().collect();
        prop_assert_eq!(dedup.len(), chains.len(), "lists overlap");
        prop_assert!(impact.unilateral.len() <= 1);
    }

    /// Deleting any one chain leaves every other chain's blocks bit-identical
    /// and the tree verifying, with or without the subroot retained.
    #[test]
    fn deletion_isolation(masks in arb_masks(), pick in any::<prop::sample::Index>(), keep in any::<bool>()) {
        let tree = tree_from_masks(&masks);
        let keys: Vec<Digest> = tree.chains.keys().copied().collect();
        let victim = keys[pick.index(keys.len())];

        let after = apply_deletion(&tree, victim, keep).unwrap();
        prop_assert!(verify_tree(&after).ok);
        for (key, chain) in &tree.chains {
            if *key == victim {
                continue;
            }
            let surviving = after.chains.get(key).expect("chain survived");
            prop_assert_eq!(
                serde_json::to_vec(chain).unwrap(),
                serde_json::to_vec(surviving).unwrap()
            );
        }
    }
}

fn org(name: &str) -> Identity {
    Identity::organization(format!("did:org:{name}")).unwrap()
}

fn request(mode: SilencePolicy, endorsers: &[Identity]) -> DeletionRequest {
    DeletionRequest {
        request_id: "req-1".into(),
        requester: Identity::person("did:person:a").unwrap(),
        target_chain: Digest::of(b"chain"),
        keep_subroot: false,
        strategy: EndorserStrategy::AllOrganizations,
        policy: EndorsementPolicy::new(mode, 10).unwrap(),
        endorsers: endorsers.iter().cloned().collect(),
        created_at: 0,
    }
}

fn endorser_pool() -> Vec<Identity> {
    (0..5).map(|i| org(&format!("e{i}"))).collect()
}

proptest! {
    /// Any vote set containing a veto evaluates to vetoed under both policy
    /// modes at every tick.
    #[test]
    fn veto_absorption(
        mode_flag in any::<bool>(),
        n_endorsers in 1usize..5,
        approvals in prop::collection::vec(any::<prop::sample::Index>(), 0..4),
        veto_idx in any::<prop::sample::Index>(),
        now in 0u64..40,
    ) {
        let pool = endorser_pool();
        let endorsers = &pool[..n_endorsers];
        let mode = if mode_flag { SilencePolicy::SilenceIsVeto } else { SilencePolicy::SilenceIsAgreement };
        let req = request(mode, endorsers);

        let vetoer = endorsers[veto_idx.index(n_endorsers)].clone();
        let mut votes = vec![Vote { voter: vetoer.clone(), request_id: "req-1".into(), decision: VoteChoice::Veto, at: 1 }];
        let mut voted: BTreeSet<Identity> = BTreeSet::from([vetoer]);
        for idx in approvals {
            let voter = endorsers[idx.index(n_endorsers)].clone();
            if voted.insert(voter.clone()) {
                votes.push(Vote { voter, request_id: "req-1".into(), decision: VoteChoice::Approve, at: 2 });
            }
        }

        let decision = evaluate(&req, &votes, now).unwrap();
        prop_assert_eq!(decision.verdict, Verdict::Vetoed);
    }

    /// Scanning growing prefixes of an all-approve vote sequence before the
    /// deadline, the verdict never regresses: pending until complete, then
    /// approved, and never vetoed.
    #[test]
    fn approval_is_monotone_over_prefixes(
        mode_flag in any::<bool>(),
        n_endorsers in 1usize..5,
        seed in any::<u64>(),
    ) {
        let pool = endorser_pool();
        let endorsers = &pool[..n_endorsers];
        let mode = if mode_flag { SilencePolicy::SilenceIsVeto } else { SilencePolicy::SilenceIsAgreement };
        let req = request(mode, endorsers);

        // Deterministic shuffle of the voting order.
        let mut order: Vec<Identity> = endorsers.to_vec();
        let mut state = seed | 1;
        for i in (1..order.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (state % (i as u64 + 1)) as usize);
        }

        let mut votes = Vec::new();
        let mut reached_approved = false;
        for (i, voter) in order.into_iter().enumerate() {
            votes.push(Vote { voter, request_id: "req-1".into(), decision: VoteChoice::Approve, at: i as u64 + 1 });
            let decision = evaluate(&req, &votes, i as u64 + 1).unwrap();
            prop_assert_ne!(decision.verdict, Verdict::Vetoed);
            if reached_approved {
                prop_assert_eq!(decision.verdict, Verdict::Approved);
            }
            reached_approved = decision.verdict == Verdict::Approved;
        }
        prop_assert!(reached_approved, "all endorsers approved in time");
    }

    /// With every endorser silent and the deadline passed, the two policy
    /// modes resolve the same situation in opposite directions.
    #[test]
    fn silence_duality(n_endorsers in 1usize..5, after in 11u64..60) {
        let pool = endorser_pool();
        let endorsers = &pool[..n_endorsers];

        let veto_mode = request(SilencePolicy::SilenceIsVeto, endorsers);
        let agree_mode = request(SilencePolicy::SilenceIsAgreement, endorsers);

        prop_assert_eq!(evaluate(&veto_mode, &[], after).unwrap().verdict, Verdict::Vetoed);
        prop_assert_eq!(evaluate(&agree_mode, &[], after).unwrap().verdict, Verdict::Approved);
    }
}

proptest! {
    /// Plan completeness: the plan's per-chain entries plus the unaffected
    /// chains cover every chain exactly once.
    #[test]
    fn plan_covers_affected_chains_exactly_once(masks in arb_masks(), subject_idx in 2usize..6) {
        use erasable_ledger::consensus::{
            plan_erasure, ErasureMode, GuardianRegistry, Membership, RequestIdAllocator,
        };

        let ids = universe();
        let subject = ids[subject_idx].clone();
        let tree = tree_from_masks(&masks);
        let membership = Membership::with_organizations([ids[0].clone(), ids[1].clone()]);
        let mut guardians = GuardianRegistry::new();
        for person in &ids[2..] {
            guardians.assign(person.clone(), ids[0].clone()).unwrap();
        }
        let mut alloc = RequestIdAllocator::new();

        let plan = plan_erasure(
            &tree,
            &subject,
            ErasureMode::DataOnly,
            EndorserStrategy::ScopePlusGuardians,
            EndorsementPolicy::new(SilencePolicy::SilenceIsVeto, 5).unwrap(),
            &membership,
            &guardians,
            1,
            &mut alloc,
        )
        .unwrap();

        let impact = chains_affected_by(&tree, &subject);
        let planned: BTreeSet<Digest> = plan.per_chain.iter().map(|p| p.chain_key).collect();
        prop_assert_eq!(planned.len(), plan.per_chain.len(), "no chain planned twice");

        let unaffected: BTreeSet<Digest> = impact.unaffected.iter().copied().collect();
        prop_assert!(planned.is_disjoint(&unaffected));
        let all: BTreeSet<Digest> = planned.union(&unaffected).copied().collect();
        let chains: BTreeSet<Digest> = tree.chains.keys().copied().collect();
        prop_assert_eq!(all, chains);
    }
}
