//! The deletion-consensus state machine.
//!
//! Deleting a chain whose scope names more than one party requires the
//! agreement of every endorser: any endorser may veto, and non-response is
//! resolved by the endorsement policy (silence counts as a veto, or as
//! agreement once the timeout passes). The chain whose scope is exactly the
//! requesting person is the one exception: its owner deletes it without
//! consensus, modeled as a request with a frozen empty endorser set.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::block::Tick;
use crate::digest::Digest;
use crate::error::{LedgerError, Result};
use crate::identity::Identity;
use crate::placement::chains_affected_by;
use crate::scope::Scope;
use crate::tree::LedgerTree;

/// Organizations designated to represent persons who operate no nodes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuardianRegistry {
    map: BTreeMap<Identity, BTreeSet<Identity>>,
}

impl GuardianRegistry {
    pub fn new() -> GuardianRegistry {
        GuardianRegistry::default()
    }

    pub fn assign(&mut self, person: Identity, guardian: Identity) -> Result<()> {
        if !person.is_person() {
            return Err(LedgerError::InvalidArgument(format!(
                "guardian registry keys must be persons, got {}",
                person.id
            )));
        }
        if !guardian.is_organization() {
            return Err(LedgerError::InvalidArgument(format!(
                "guardians must be organizations, got {}",
                guardian.id
            )));
        }
        self.map.entry(person).or_default().insert(guardian);
        Ok(())
    }

    pub fn guardians_of(&self, person: &Identity) -> impl Iterator<Item = &Identity> {
        self.map.get(person).into_iter().flatten()
    }

    pub fn is_guardian_of(&self, org: &Identity, person: &Identity) -> bool {
        self.map.get(person).is_some_and(|set| set.contains(org))
    }
}

/// Network membership plus the per-chain record of which organizations
/// acknowledged appends — the input to the historical-endorsers strategy.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub current: BTreeSet<Identity>,
    pub endorsement_history: BTreeMap<Digest, BTreeSet<Identity>>,
}

impl Membership {
    pub fn with_organizations(orgs: impl IntoIterator<Item = Identity>) -> Membership {
        Membership {
            current: orgs.into_iter().collect(),
            endorsement_history: BTreeMap::new(),
        }
    }

    pub fn join(&mut self, org: Identity) {
        self.current.insert(org);
    }

    pub fn leave(&mut self, org: &Identity) {
        self.current.remove(org);
    }

    /// Records that `org` acknowledged an append to `chain_key`. History is
    /// never pruned when an organization leaves; departure is applied at
    /// endorser-selection time instead.
    pub fn record_endorsement(&mut self, chain_key: Digest, org: Identity) {
        self.endorsement_history
            .entry(chain_key)
            .or_default()
            .insert(org);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndorserStrategy {
    /// Organizations that endorsed appends to the chain, minus departures.
    HistoricalEndorsers,
    /// Organizations in the scope plus named guardians of persons in it.
    ScopePlusGuardians,
    /// Every current organization in the network.
    AllOrganizations,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SilencePolicy {
    /// An endorser with no timely response counts as a veto.
    SilenceIsVeto,
    /// No response by the deadline counts as agreement.
    SilenceIsAgreement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndorsementPolicy {
    pub mode: SilencePolicy,
    /// Response deadline, in ticks after request creation. Must be > 0 so
    /// every request terminates.
    pub timeout: Tick,
}

impl EndorsementPolicy {
    pub fn new(mode: SilencePolicy, timeout: Tick) -> Result<EndorsementPolicy> {
        if timeout == 0 {
            return Err(LedgerError::InvalidArgument(
                "endorsement policy timeout must be > 0".into(),
            ));
        }
        Ok(EndorsementPolicy { mode, timeout })
    }
}

/// A pending chain-deletion request with its endorser set frozen at
/// creation time.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeletionRequest {
    pub request_id: String,
    pub requester: Identity,
    pub target_chain: Digest,
    pub keep_subroot: bool,
    pub strategy: EndorserStrategy,
    pub policy: EndorsementPolicy,
    pub endorsers: BTreeSet<Identity>,
    pub created_at: Tick,
}

impl DeletionRequest {
    pub fn deadline(&self) -> Tick {
        self.created_at + self.policy.timeout
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VoteChoice {
    Approve,
    Veto,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vote {
    pub voter: Identity,
    pub request_id: String,
    pub decision: VoteChoice,
    pub at: Tick,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pending,
    Approved,
    Vetoed,
}

/// Outcome of evaluating a request against its votes at a point in time.
/// Approved and vetoed are terminal; callers freeze the first terminal
/// verdict and ignore later votes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub verdict: Verdict,
    pub reason: String,
}

impl Decision {
    fn pending() -> Decision {
        Decision {
            verdict: Verdict::Pending,
            reason: "awaiting endorsers".into(),
        }
    }

    pub fn is_terminal(&self) -> bool {
        self.verdict != Verdict::Pending
    }
}

/// One row of the off-tree deletion journal: the decided outcome of a
/// deletion request. Deliberately stores only the scope key and decision
/// metadata — never the requester or any member identity — so the journal
/// cannot defeat erasure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JournalEntry {
    pub request_id: String,
    pub chain_key: Digest,
    pub keep_subroot: bool,
    pub verdict: Verdict,
    pub reason: String,
    pub decided_at: Tick,
}

impl JournalEntry {
    pub fn from_decision(
        request: &DeletionRequest,
        decision: &Decision,
        decided_at: Tick,
    ) -> JournalEntry {
        JournalEntry {
            request_id: request.request_id.clone(),
            chain_key: request.target_chain,
            keep_subroot: request.keep_subroot,
            verdict: decision.verdict,
            reason: decision.reason.clone(),
            decided_at,
        }
    }
}

/// Mints sequential request ids (`req-1`, `req-2`, ...). One allocator per
/// run keeps ids deterministic and predictable for scripted scenarios.
#[derive(Debug, Default)]
pub struct RequestIdAllocator(u64);

impl RequestIdAllocator {
    pub fn new() -> RequestIdAllocator {
        RequestIdAllocator(0)
    }

    pub fn next_id(&mut self) -> String {
        self.0 += 1;
        format!("req-{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErasureMode {
    /// Remove the data but keep the subroot, i.e. the scope definition.
    DataOnly,
    /// Remove the whole chain, subroot included.
    DeleteAccount,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Unilateral,
    ConsensusRequired,
}

/// What the plan decided for one affected chain: a deletion request (with an
/// empty endorser set when no consensus is needed), or a record of why no
/// request could be formed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanOutcome {
    Request(DeletionRequest),
    Unguarded { detail: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlannedDeletion {
    pub chain_key: Digest,
    pub classification: Classification,
    pub outcome: PlanOutcome,
}

/// The per-chain deletion requests generated when a person asks for all of
/// their data to be removed. Covers exactly the unilateral and
/// consensus-required chains; unaffected chains never appear.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErasurePlan {
    pub subject: Identity,
    pub mode: ErasureMode,
    pub per_chain: Vec<PlannedDeletion>,
}

/// Computes the endorser set for deleting the chain with `scope`.
///
/// All strategies intersect with current membership. An empty result is
/// legal only for a single-person scope (its owner needs no representative);
/// for any other scope it means a concerned party has no voice, so the
/// request cannot be formed.
pub fn select_endorsers(
    tree: &LedgerTree,
    scope: &Scope,
    membership: &Membership,
    guardians: &GuardianRegistry,
    strategy: EndorserStrategy,
) -> Result<BTreeSet<Identity>> {
    debug_assert!(
        tree.chain(&scope.key).is_some(),
        "scope must exist as a chain"
    );
    let candidates: BTreeSet<Identity> = match strategy {
        EndorserStrategy::HistoricalEndorsers => membership
            .endorsement_history
            .get(&scope.key)
            .cloned()
            .unwrap_or_default(),
        EndorserStrategy::ScopePlusGuardians => {
            let mut set = BTreeSet::new();
            for member in &scope.members {
                if member.is_organization() {
                    set.insert(member.clone());
                } else {
                    set.extend(guardians.guardians_of(member).cloned());
                }
            }
            set
        }
        EndorserStrategy::AllOrganizations => membership.current.clone(),
    };
    let endorsers: BTreeSet<Identity> = candidates
        .intersection(&membership.current)
        .cloned()
        .collect();

    let single_person = scope.members.len() == 1 && scope.members[0].is_person();
    if endorsers.is_empty() && !single_person {
        return Err(LedgerError::UnguardedScope(format!(
            "no endorser available for scope {{{}}} under {:?}",
            scope.label(),
            strategy
        )));
    }
    Ok(endorsers)
}

/// Opens a deletion request for one chain and freezes its endorser set.
///
/// The requester must be in the chain's scope or a guardian of a person in
/// it. When the requester is the sole member of the scope the endorser set
/// is frozen empty — self-erasure of a person's own chain concerns nobody
/// else, so it needs no consensus regardless of strategy.
#[allow(clippy::too_many_arguments)]
pub fn open_deletion_request(
    tree: &LedgerTree,
    chain_key: Digest,
    requester: &Identity,
    keep_subroot: bool,
    strategy: EndorserStrategy,
    policy: EndorsementPolicy,
    membership: &Membership,
    guardians: &GuardianRegistry,
    now: Tick,
    ids: &mut RequestIdAllocator,
) -> Result<DeletionRequest> {
    let chain = tree
        .chain(&chain_key)
        .ok_or_else(|| LedgerError::NotFound(format!("no chain with key {chain_key}")))?;

    let in_scope = chain.scope.contains(requester);
    let guards_someone = chain
        .scope
        .members
        .iter()
        .any(|m| m.is_person() && guardians.is_guardian_of(requester, m));
    if !in_scope && !guards_someone {
        return Err(LedgerError::Forbidden(format!(
            "{} is neither in scope {{{}}} nor a guardian of a person in it",
            requester.id,
            chain.scope.label()
        )));
    }

    let sole_member = chain.scope.members.len() == 1 && chain.scope.members[0] == *requester;
    let endorsers = if sole_member {
        BTreeSet::new()
    } else {
        select_endorsers(tree, &chain.scope, membership, guardians, strategy)?
    };

    Ok(DeletionRequest {
        request_id: ids.next_id(),
        requester: requester.clone(),
        target_chain: chain_key,
        keep_subroot,
        strategy,
        policy,
        endorsers,
        created_at: now,
    })
}

/// Evaluates a request against its votes at tick `now`.
///
/// A veto vote is absorbing under both policies. With silence-is-veto, the
/// request approves only if every endorser approved by the deadline, and a
/// passed deadline with a silent endorser vetoes it. With
/// silence-is-agreement, a passed deadline without a veto approves it. An
/// empty endorser set approves vacuously.
pub fn evaluate(request: &DeletionRequest, votes: &[Vote], now: Tick) -> Result<Decision> {
    let mut seen: BTreeSet<&Identity> = BTreeSet::new();
    for vote in votes {
        if !request.endorsers.contains(&vote.voter) {
            return Err(LedgerError::NotAnEndorser {
                voter: vote.voter.id.clone(),
            });
        }
        if !seen.insert(&vote.voter) {
            return Err(LedgerError::DuplicateVote {
                voter: vote.voter.id.clone(),
            });
        }
        if let VoteChoice::Veto = vote.decision {
            return Ok(Decision {
                verdict: Verdict::Vetoed,
                reason: format!("vetoed by {}", vote.voter.id),
            });
        }
    }

    let deadline = request.deadline();
    let timely_approvals: BTreeSet<&Identity> = votes
        .iter()
        .filter(|v| v.decision == VoteChoice::Approve && v.at <= deadline)
        .map(|v| &v.voter)
        .collect();
    let all_approved = request
        .endorsers
        .iter()
        .all(|e| timely_approvals.contains(e));

    match request.policy.mode {
        SilencePolicy::SilenceIsVeto => {
            if all_approved {
                Ok(Decision {
                    verdict: Verdict::Approved,
                    reason: "all endorsers approved".into(),
                })
            } else if now > deadline {
                Ok(Decision {
                    verdict: Verdict::Vetoed,
                    reason: "silent endorser".into(),
                })
            } else {
                Ok(Decision::pending())
            }
        }
        SilencePolicy::SilenceIsAgreement => {
            let all_approved_any_time = {
                let approvals: BTreeSet<&Identity> = votes
                    .iter()
                    .filter(|v| v.decision == VoteChoice::Approve)
                    .map(|v| &v.voter)
                    .collect();
                request.endorsers.iter().all(|e| approvals.contains(e))
            };
            if all_approved_any_time {
                Ok(Decision {
                    verdict: Verdict::Approved,
                    reason: "all endorsers approved".into(),
                })
            } else if now > deadline {
                Ok(Decision {
                    verdict: Verdict::Approved,
                    reason: "timeout, silence is agreement".into(),
                })
            } else {
                Ok(Decision::pending())
            }
        }
    }
}

/// Removes a chain's data. With `keep_subroot` the chain shrinks to its
/// height-0 anchor so the scope definition stays in place; without it the
/// chain disappears from the map entirely. Every other chain is untouched,
/// byte for byte.
///
/// The caller is responsible for only invoking this once a corresponding
/// approved decision exists; the operation itself is mechanical.
pub fn apply_deletion(
    tree: &LedgerTree,
    chain_key: Digest,
    keep_subroot: bool,
) -> Result<LedgerTree> {
    if !tree.chains.contains_key(&chain_key) {
        return Err(LedgerError::NotFound(format!(
            "no chain with key {chain_key}"
        )));
    }
    let mut next = tree.clone();
    if keep_subroot {
        let chain = next.chains.get_mut(&chain_key).expect("chain exists");
        chain.blocks.clear();
    } else {
        next.chains.remove(&chain_key);
    }
    Ok(next)
}

/// Builds the per-chain deletion plan for erasing everything about
/// `subject`. The subject's own single-person chain gets a consensus-free
/// request; every other affected chain gets a consensus request, or an
/// unguarded marker when no endorser set can be formed (other chains still
/// proceed).
#[allow(clippy::too_many_arguments)]
pub fn plan_erasure(
    tree: &LedgerTree,
    subject: &Identity,
    mode: ErasureMode,
    strategy: EndorserStrategy,
    policy: EndorsementPolicy,
    membership: &Membership,
    guardians: &GuardianRegistry,
    now: Tick,
    ids: &mut RequestIdAllocator,
) -> Result<ErasurePlan> {
    if !subject.is_person() {
        return Err(LedgerError::InvalidArgument(format!(
            "erasure subjects must be persons, got organization {}",
            subject.id
        )));
    }
    let keep_subroot = mode == ErasureMode::DataOnly;
    let impact = chains_affected_by(tree, subject);

    let mut per_chain = Vec::new();
    let classified = impact
        .unilateral
        .iter()
        .map(|k| (*k, Classification::Unilateral))
        .chain(
            impact
                .consensus_required
                .iter()
                .map(|k| (*k, Classification::ConsensusRequired)),
        );
    for (chain_key, classification) in classified {
        let outcome = match open_deletion_request(
            tree,
            chain_key,
            subject,
            keep_subroot,
            strategy,
            policy,
            membership,
            guardians,
            now,
            ids,
        ) {
            Ok(request) => PlanOutcome::Request(request),
            Err(LedgerError::UnguardedScope(detail)) => PlanOutcome::Unguarded { detail },
            Err(other) => return Err(other),
        };
        per_chain.push(PlannedDeletion {
            chain_key,
            classification,
            outcome,
        });
    }

    Ok(ErasurePlan {
        subject: subject.clone(),
        mode,
        per_chain,
    })
}
