//! End-to-end simulator runs over the scenario corpus in `scenarios/`.

use std::collections::BTreeSet;
use std::path::PathBuf;

use erasable_ledger::consensus::Verdict;
use erasable_ledger::placement::canonicalize_scope;
use erasable_ledger::scenario::Scenario;
use erasable_ledger::simnet::{check_convergence, run_scenario, SimOutcome};
use erasable_ledger::{verify_tree, Digest, Identity};

fn load(name: &str) -> Scenario {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name);
    let json = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path:?}: {e}"));
    Scenario::from_json(&json).expect("corpus scenario validates")
}

fn person_a() -> Identity {
    Identity::person("did:person:a").unwrap()
}

/// Scope keys of all 16 subsets of {org x, org y, person a, person b},
/// split into those containing person a and those not.
fn paper_universe_keys() -> (BTreeSet<Digest>, BTreeSet<Digest>) {
    let ids = [
        Identity::organization("did:org:x").unwrap(),
        Identity::organization("did:org:y").unwrap(),
        Identity::person("did:person:a").unwrap(),
        Identity::person("did:person:b").unwrap(),
    ];
    let mut with_a = BTreeSet::new();
    let mut without_a = BTreeSet::new();
    for mask in 0u32..16 {
        let members: Vec<Identity> = (0..4)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| ids[i as usize].clone())
            .collect();
        let key = canonicalize_scope(&members).unwrap().key;
        if members.contains(&person_a()) {
            with_a.insert(key);
        } else {
            without_a.insert(key);
        }
    }
    (with_a, without_a)
}

fn assert_replicas_identical(outcome: &SimOutcome) {
    let reference = outcome.nodes[0].replica.canonical_bytes();
    for node in &outcome.nodes {
        assert_eq!(
            node.replica.canonical_bytes(),
            reference,
            "replica {} diverged",
            node.node_id
        );
        assert!(
            verify_tree(&node.replica).ok,
            "replica {} invalid",
            node.node_id
        );
    }
}

#[test]
fn appends_replicate_to_identical_replicas() {
    let outcome = run_scenario(&load("append_only.json")).unwrap();
    assert!(check_convergence(&outcome.nodes));
    assert_replicas_identical(&outcome);

    let tx_count: usize = outcome.nodes[0]
        .replica
        .chains
        .values()
        .map(|c| c.blocks.len())
        .sum();
    assert_eq!(tx_count, 10);
}

#[test]
fn approved_erasure_removes_every_subject_chain_everywhere() {
    let outcome = run_scenario(&load("erase_approved.json")).unwrap();
    assert!(check_convergence(&outcome.nodes));
    assert_replicas_identical(&outcome);

    let (with_a, without_a) = paper_universe_keys();
    for node in &outcome.nodes {
        for key in &with_a {
            assert!(
                node.replica.chain(key).is_none(),
                "replica {} still holds a chain about person a",
                node.node_id
            );
        }
        for key in &without_a {
            assert!(node.replica.chain(key).is_some());
        }
        let approved = node
            .journal
            .iter()
            .filter(|e| e.verdict == Verdict::Approved)
            .count();
        assert_eq!(approved, 8, "1 unilateral + 7 consensus deletions");
    }
}

#[test]
fn one_veto_all_endorser_preserves_all_consensus_chains() {
    let outcome = run_scenario(&load("erase_vetoed.json")).unwrap();
    assert!(check_convergence(&outcome.nodes));
    assert_replicas_identical(&outcome);

    let (with_a, without_a) = paper_universe_keys();
    let unilateral = canonicalize_scope(&[person_a()]).unwrap().key;
    for node in &outcome.nodes {
        assert!(node.replica.chain(&unilateral).is_none());
        for key in with_a.iter().filter(|k| **k != unilateral) {
            assert!(
                node.replica.chain(key).is_some(),
                "vetoed chain was deleted on {}",
                node.node_id
            );
        }
        for key in &without_a {
            assert!(node.replica.chain(key).is_some());
        }
        let vetoed = node
            .journal
            .iter()
            .filter(|e| e.verdict == Verdict::Vetoed)
            .count();
        assert_eq!(vetoed, 7);
    }
}

#[test]
fn silent_endorsers_approve_after_timeout_keeping_subroots() {
    let outcome = run_scenario(&load("erase_timeout_agreement.json")).unwrap();
    assert!(check_convergence(&outcome.nodes));

    let (with_a, without_a) = paper_universe_keys();
    let replica = &outcome.nodes[0].replica;
    assert_eq!(
        replica.chains.len(),
        16,
        "data_only keeps scope definitions"
    );
    for key in &with_a {
        let chain = replica.chain(key).expect("subroot retained");
        assert!(chain.blocks.is_empty(), "data gone, subroot kept");
    }
    for key in &without_a {
        assert!(!replica.chain(key).unwrap().blocks.is_empty());
    }
    assert!(outcome
        .trace
        .records
        .iter()
        .any(|r| r.action == "decision" && r.detail.contains("silence is agreement")));
}

#[test]
fn scripted_behavior_vetoes_the_scripted_request_only() {
    let outcome = run_scenario(&load("scripted_veto.json")).unwrap();
    assert!(check_convergence(&outcome.nodes));

    let decisions: Vec<&str> = outcome
        .trace
        .records
        .iter()
        .filter(|r| r.action == "decision")
        .map(|r| r.detail.as_str())
        .collect();
    assert_eq!(decisions.len(), 8);
    let vetoed: Vec<&&str> = decisions.iter().filter(|d| d.contains("Vetoed")).collect();
    assert_eq!(vetoed.len(), 1);
    assert!(vetoed[0].starts_with("req-2 "));
}

/// No node ever deletes a chain without a broadcast approved decision: every
/// apply_deletion in the trace names a request that was decided Approved.
#[test]
fn deletions_only_follow_approved_decisions() {
    for name in [
        "erase_approved.json",
        "erase_vetoed.json",
        "scripted_veto.json",
    ] {
        let outcome = run_scenario(&load(name)).unwrap();
        let approved: BTreeSet<String> = outcome
            .trace
            .records
            .iter()
            .filter(|r| r.action == "decision" && r.detail.contains("Approved"))
            .map(|r| r.detail.split_whitespace().next().unwrap().to_string())
            .collect();
        for record in outcome
            .trace
            .records
            .iter()
            .filter(|r| r.action == "apply_deletion")
        {
            let request_id = record.detail.split_whitespace().next().unwrap();
            assert!(
                approved.contains(request_id),
                "{name}: {} deleted without approved decision",
                record.detail
            );
        }
    }
}

#[test]
fn lossy_network_shows_drops_and_converges_only_without_op_loss() {
    let outcome = run_scenario(&load("lossy_appends.json")).unwrap();
    let drops: Vec<_> = outcome
        .trace
        .records
        .iter()
        .filter(|r| r.action == "drop_message")
        .collect();
    assert!(!drops.is_empty(), "seed must produce at least one drop");

    let op_dropped = drops.iter().any(|r| r.detail.starts_with("op from"));
    assert_eq!(
        check_convergence(&outcome.nodes),
        !op_dropped,
        "replicas diverge exactly when a replicated operation is lost"
    );
}

#[test]
fn identical_seed_gives_byte_identical_traces() {
    for name in ["erase_approved.json", "lossy_appends.json"] {
        let scenario = load(name);
        let a = run_scenario(&scenario).unwrap();
        let b = run_scenario(&scenario).unwrap();
        assert_eq!(a.trace.to_jsonl(), b.trace.to_jsonl(), "{name}");
    }
}

#[test]
fn convergence_check_spots_a_tampered_replica() {
    let outcome = run_scenario(&load("append_only.json")).unwrap();
    assert!(check_convergence(&outcome.nodes));

    let mut tampered = outcome.nodes.clone();
    let replica = &mut tampered[1].replica;
    let key = *replica.chains.keys().next().unwrap();
    replica.chains.get_mut(&key).unwrap().blocks[0].transactions[0]
        .payload
        .push(b'!');
    assert!(!check_convergence(&tampered));
}

#[test]
fn explicit_cast_vote_events_drive_consensus_and_bad_votes_bounce() {
    let outcome = run_scenario(&load("manual_votes.json")).unwrap();
    assert!(check_convergence(&outcome.nodes));

    // All eight requests approved: the subject's own chain plus seven
    // consensus chains voted through by org x and org y.
    let approved = outcome.nodes[0]
        .journal
        .iter()
        .filter(|e| e.verdict == Verdict::Approved)
        .count();
    assert_eq!(approved, 8);

    let rejected: Vec<&str> = outcome
        .trace
        .records
        .iter()
        .filter(|r| r.action == "vote_rejected")
        .map(|r| r.detail.as_str())
        .collect();
    assert!(
        rejected.iter().any(|d| d.contains("duplicate vote")),
        "duplicate vote must be rejected: {rejected:?}"
    );
    assert!(
        rejected.iter().any(|d| d.contains("not an endorser")),
        "non-endorser vote must be rejected: {rejected:?}"
    );

    // data_only: affected chains shrink to their subroot but stay present.
    let subject = person_a();
    let replica = &outcome.nodes[0].replica;
    assert_eq!(replica.chains.len(), 16);
    for chain in replica.chains.values() {
        assert_eq!(chain.scope.contains(&subject), chain.blocks.is_empty());
    }
}

#[test]
fn vetoed_erasure_can_be_resubmitted_with_fresh_request_ids() {
    let outcome = run_scenario(&load("resubmit_after_veto.json")).unwrap();
    assert!(check_convergence(&outcome.nodes));

    let (with_a, without_a) = paper_universe_keys();
    for node in &outcome.nodes {
        for key in &with_a {
            assert!(node.replica.chain(key).is_none(), "second round deletes it");
        }
        for key in &without_a {
            assert!(node.replica.chain(key).is_some());
        }
        let vetoed = node
            .journal
            .iter()
            .filter(|e| e.verdict == Verdict::Vetoed)
            .count();
        let approved = node
            .journal
            .iter()
            .filter(|e| e.verdict == Verdict::Approved)
            .count();
        assert_eq!(vetoed, 7, "first round vetoed");
        assert_eq!(approved, 8, "own chain plus seven re-submissions");
    }
}
