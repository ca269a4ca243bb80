//! The two-organization / two-person walk-through: materializes all 16
//! scopes, classifies them for an erasure request by person a, and runs the
//! deletion consensus under one or both non-response policies.

use std::process::ExitCode;

use erasable_ledger::consensus::{
    apply_deletion, evaluate, plan_erasure, EndorsementPolicy, EndorserStrategy, ErasureMode,
    GuardianRegistry, Membership, PlanOutcome, RequestIdAllocator, SilencePolicy, Verdict, Vote,
    VoteChoice,
};
use erasable_ledger::placement::{canonicalize_scope, chains_affected_by, place_transaction};
use erasable_ledger::{make_genesis, verify_tree, Identity, LedgerTree, Transaction};

use crate::PolicyArg;

const TIMEOUT: u64 = 10;

pub fn cmd_demo(policy: Option<PolicyArg>) -> ExitCode {
    match run_demo(policy) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: demo failed: {e}");
            ExitCode::from(2)
        }
    }
}

fn run_demo(policy: Option<PolicyArg>) -> erasable_ledger::Result<()> {
    let org_x = Identity::organization("did:org:x")?;
    let org_y = Identity::organization("did:org:y")?;
    let p_a = Identity::person("did:person:a")?;
    let p_b = Identity::person("did:person:b")?;
    let universe = [org_x.clone(), org_y.clone(), p_a.clone(), p_b.clone()];

    let mut guardians = GuardianRegistry::new();
    guardians.assign(p_a.clone(), org_x.clone())?;
    guardians.assign(p_b.clone(), org_y.clone())?;
    let membership = Membership::with_organizations([org_x.clone(), org_y.clone()]);

    // Materialize every one of the 16 possible scopes. The {p_a, p_b} chain
    // holds B_1, the person-to-person transfer.
    let transfer_scope = canonicalize_scope(&[p_a.clone(), p_b.clone()])?;
    let mut tree = make_genesis("demo", 0)?;
    let mut tick = 0;
    for mask in 0u8..16 {
        tick += 1;
        let members: Vec<Identity> = (0..4)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| universe[i as usize].clone())
            .collect();
        let scope = canonicalize_scope(&members)?;
        let tx = if scope == transfer_scope {
            Transaction {
                tx_id: "b1".into(),
                payload: b"transfer of 10 units from did:person:a to did:person:b".to_vec(),
                declared_scope: scope,
                submitted_at: tick,
            }
        } else {
            Transaction {
                tx_id: format!("t-{mask:02}"),
                payload: format!("statement about {{{}}}", scope.label()).into_bytes(),
                declared_scope: scope,
                submitted_at: tick,
            }
        };
        let (next, _) = place_transaction(&tree, tx, tick)?;
        tree = next;
    }

    println!("network \"demo\": all 16 scopes over {{did:org:x, did:org:y, did:person:a, did:person:b}} materialized");
    println!("guardians: did:person:a -> did:org:x, did:person:b -> did:org:y");
    println!(
        "B_1 = transaction b1, the did:person:a -> did:person:b transfer, placed in chain {{{}}}",
        transfer_scope.label()
    );
    println!("deleting B_1's chain requires agreement concerning did:person:b: guardian did:org:y must not veto");
    println!();

    let impact = chains_affected_by(&tree, &p_a);
    println!(
        "erasing did:person:a: unaffected={} unilateral={} consensus_required={}",
        impact.unaffected.len(),
        impact.unilateral.len(),
        impact.consensus_required.len()
    );
    println!();

    let modes: Vec<SilencePolicy> = match policy {
        Some(PolicyArg::SilenceVeto) => vec![SilencePolicy::SilenceIsVeto],
        Some(PolicyArg::SilenceAgree) => vec![SilencePolicy::SilenceIsAgreement],
        None => vec![
            SilencePolicy::SilenceIsVeto,
            SilencePolicy::SilenceIsAgreement,
        ],
    };
    for mode in modes {
        run_policy(&tree, mode, &p_a, &org_x, &membership, &guardians)?;
    }
    Ok(())
}

/// Plans the erasure, has org x approve every request while org y stays
/// silent, resolves at the deadline and prints what survives.
fn run_policy(
    tree: &LedgerTree,
    mode: SilencePolicy,
    subject: &Identity,
    approver: &Identity,
    membership: &Membership,
    guardians: &GuardianRegistry,
) -> erasable_ledger::Result<()> {
    println!(
        "--- policy {:?}: did:org:x approves, did:org:y stays silent ---",
        mode
    );
    let now = 20;
    let policy = EndorsementPolicy::new(mode, TIMEOUT)?;
    let mut ids = RequestIdAllocator::new();
    let plan = plan_erasure(
        tree,
        subject,
        ErasureMode::DeleteAccount,
        EndorserStrategy::ScopePlusGuardians,
        policy,
        membership,
        guardians,
        now,
        &mut ids,
    )?;

    let mut result = tree.clone();
    let resolve_at = now + TIMEOUT + 1;
    for planned in &plan.per_chain {
        let request = match &planned.outcome {
            PlanOutcome::Request(request) => request,
            PlanOutcome::Unguarded { detail } => {
                println!("  (unguarded) {detail}");
                continue;
            }
        };
        let scope_label = tree
            .chain(&planned.chain_key)
            .map(|c| c.scope.label())
            .unwrap_or_default();

        let votes: Vec<Vote> = if request.endorsers.contains(approver) {
            vec![Vote {
                voter: approver.clone(),
                request_id: request.request_id.clone(),
                decision: VoteChoice::Approve,
                at: now + 1,
            }]
        } else {
            Vec::new()
        };
        let decision = evaluate(request, &votes, resolve_at)?;
        let endorsers = request
            .endorsers
            .iter()
            .map(|e| e.id.as_str())
            .collect::<Vec<_>>()
            .join(", ");
        println!(
            "  {} chain {{{}}} endorsers [{}] -> {:?} ({})",
            request.request_id, scope_label, endorsers, decision.verdict, decision.reason
        );
        if decision.verdict == Verdict::Approved {
            result = apply_deletion(&result, planned.chain_key, request.keep_subroot)?;
        }
    }

    let report = verify_tree(&result);
    println!(
        "  surviving chains: {} of {}; verification: {}",
        result.chains.len(),
        tree.chains.len(),
        if report.ok { "ok" } else { "FAILED" }
    );
    let mut labels: Vec<String> = result.chains.values().map(|c| c.scope.label()).collect();
    labels.sort();
    for label in labels {
        println!("    {{{label}}}");
    }
    println!();
    Ok(())
}
