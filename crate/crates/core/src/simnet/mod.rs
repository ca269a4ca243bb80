//! Deterministic discrete-event simulation of a permissioned network.
//!
//! The node with the lowest node_id acts as coordinator: it orders appends
//! into a single sequenced operation stream, runs the deletion consensus and
//! broadcasts decided outcomes. Replicas apply operations strictly in
//! sequence order, buffering anything that arrives early, so random message
//! delays cannot reorder state transitions. Dropped messages are never
//! retried; a replica behind a dropped operation stays behind, visibly, in
//! the trace and in the final convergence check.
//!
//! Everything is single-threaded and driven by one event queue ordered by
//! `(tick, insertion sequence)`. Randomness comes exclusively from the
//! seeded [`rng::SimRng`] stream; per unicast message the engine draws the
//! delay first, then the drop decision. Self-addressed messages bypass the
//! network and consume no draws.

mod rng;
mod trace;

pub use rng::SimRng;
pub use trace::{Trace, TraceRecord};

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use crate::block::{Tick, Transaction};
use crate::consensus::{
    evaluate, plan_erasure, Decision, DeletionRequest, EndorsementPolicy, GuardianRegistry,
    JournalEntry, Membership, PlanOutcome, RequestIdAllocator, Verdict, Vote, VoteChoice,
};
use crate::digest::Digest;
use crate::error::{LedgerError, Result};
use crate::identity::Identity;
use crate::placement::{canonicalize_scope, chains_affected_by, place_transaction};
use crate::scenario::{
    BehaviorSpec, CastVoteSpec, Directive, EraseSpec, MembershipChangeKind, MembershipChangeSpec,
    Scenario, SubmitTxSpec,
};
use crate::tree::{make_genesis, LedgerTree};
use crate::verify::verify_tree;

/// One simulated node: an organization-operated replica of the ledger plus
/// its deletion journal and its vote behavior.
#[derive(Clone, Debug)]
pub struct NodeState {
    pub node_id: String,
    pub operator: Identity,
    pub replica: LedgerTree,
    pub journal: Vec<JournalEntry>,
    pub behavior: BehaviorSpec,
    next_op: u64,
    pending_ops: BTreeMap<u64, Op>,
}

/// Result of a full simulation run.
#[derive(Clone, Debug)]
pub struct SimOutcome {
    pub trace: Trace,
    pub nodes: Vec<NodeState>,
}

/// True iff all replicas serialize to identical bytes and every one of them
/// passes verification.
pub fn check_convergence(nodes: &[NodeState]) -> bool {
    if nodes.is_empty() {
        return true;
    }
    let reference = nodes[0].replica.canonical_bytes();
    nodes
        .iter()
        .all(|n| n.replica.canonical_bytes() == reference && verify_tree(&n.replica).ok)
}

/// Runs a scenario to quiescence with the seed it declares.
pub fn run_scenario(scenario: &Scenario) -> Result<SimOutcome> {
    run_scenario_with_seed(scenario, scenario.seed)
}

/// Runs a scenario to quiescence with an explicit seed override.
pub fn run_scenario_with_seed(scenario: &Scenario, seed: u64) -> Result<SimOutcome> {
    scenario.validate()?;
    let mut engine = Engine::new(scenario, seed)?;
    engine.run()?;
    Ok(SimOutcome {
        trace: engine.trace,
        nodes: engine.nodes,
    })
}

/// A replicated operation in the coordinator's sequenced stream.
#[derive(Clone, Debug)]
enum Op {
    Append { tx: Transaction, placed_at: Tick },
    Decision { entry: JournalEntry },
}

#[derive(Clone, Debug)]
enum Message {
    Op {
        seq: u64,
        op: Op,
    },
    AckAppend {
        chain_key: Digest,
        operator: Identity,
    },
    SolicitVote {
        request: DeletionRequest,
    },
    CastVote {
        vote: Vote,
    },
}

impl Message {
    fn kind(&self) -> &'static str {
        match self {
            Message::Op { .. } => "op",
            Message::AckAppend { .. } => "ack_append",
            Message::SolicitVote { .. } => "solicit_vote",
            Message::CastVote { .. } => "cast_vote",
        }
    }
}

#[derive(Clone, Debug)]
enum EngineEvent {
    Directive(Directive),
    Deliver {
        src: String,
        dst: String,
        message: Message,
    },
    Deadline {
        request_id: String,
    },
}

#[derive(Clone, Debug)]
struct Queued {
    at: Tick,
    seq: u64,
    event: EngineEvent,
}

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        (self.at, self.seq) == (other.at, other.seq)
    }
}
impl Eq for Queued {}
impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Queued {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.at, self.seq).cmp(&(other.at, other.seq))
    }
}

struct OpenRequest {
    request: DeletionRequest,
    votes: Vec<Vote>,
    frozen: Option<Decision>,
}

struct Engine<'a> {
    scenario: &'a Scenario,
    rng: SimRng,
    queue: BinaryHeap<Reverse<Queued>>,
    queue_seq: u64,
    nodes: Vec<NodeState>,
    coordinator: usize,
    membership: Membership,
    guardians: GuardianRegistry,
    requests: BTreeMap<String, OpenRequest>,
    request_ids: RequestIdAllocator,
    next_op_seq: u64,
    trace: Trace,
}

impl<'a> Engine<'a> {
    fn new(scenario: &'a Scenario, seed: u64) -> Result<Engine<'a>> {
        let mut nodes = Vec::new();
        for spec in &scenario.nodes {
            nodes.push(NodeState {
                node_id: spec.node_id.clone(),
                operator: scenario.identity(&spec.operator)?,
                replica: make_genesis(&scenario.network_id, 0)?,
                journal: Vec::new(),
                behavior: spec.behavior.clone(),
                next_op: 1,
                pending_ops: BTreeMap::new(),
            });
        }
        nodes.sort_by(|a, b| a.node_id.cmp(&b.node_id));

        let mut membership = Membership::default();
        for org in &scenario.organizations {
            membership.join(scenario.identity(org)?);
        }
        let mut guardians = GuardianRegistry::new();
        for (person, orgs) in &scenario.guardians {
            for org in orgs {
                guardians.assign(scenario.identity(person)?, scenario.identity(org)?)?;
            }
        }

        let mut engine = Engine {
            scenario,
            rng: SimRng::new(seed),
            queue: BinaryHeap::new(),
            queue_seq: 0,
            nodes,
            coordinator: 0,
            membership,
            guardians,
            requests: BTreeMap::new(),
            request_ids: RequestIdAllocator::new(),
            next_op_seq: 1,
            trace: Trace::default(),
        };
        for event in &scenario.events {
            engine.schedule(event.at, EngineEvent::Directive(event.directive.clone()));
        }
        Ok(engine)
    }

    fn schedule(&mut self, at: Tick, event: EngineEvent) {
        let seq = self.queue_seq;
        self.queue_seq += 1;
        self.queue.push(Reverse(Queued { at, seq, event }));
    }

    fn coordinator_id(&self) -> String {
        self.nodes[self.coordinator].node_id.clone()
    }

    /// Lowest node id operated by `org`, if the org runs any node.
    fn node_of(&self, org: &Identity) -> Option<usize> {
        self.nodes.iter().position(|n| &n.operator == org)
    }

    fn node_index(&self, node_id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.node_id == node_id)
    }

    /// Sends a message from `src` to `dst`. Per message the engine draws the
    /// delay, then the drop decision; a dropped message is recorded in the
    /// trace and never retried. A self-addressed message is delivered at the
    /// current tick without touching the random stream.
    fn unicast(&mut self, now: Tick, src: &str, dst: &str, message: Message) {
        if src == dst {
            self.schedule(
                now,
                EngineEvent::Deliver {
                    src: src.to_string(),
                    dst: dst.to_string(),
                    message,
                },
            );
            return;
        }
        let delay = self.rng.range(
            self.scenario.network.delay_min,
            self.scenario.network.delay_max,
        );
        let dropped = self.rng.chance(self.scenario.network.drop_probability);
        if dropped {
            self.trace.push(
                now,
                dst,
                "drop_message",
                format!("{} from {} dropped in transit", message.kind(), src),
            );
            return;
        }
        self.schedule(
            now + delay,
            EngineEvent::Deliver {
                src: src.to_string(),
                dst: dst.to_string(),
                message,
            },
        );
    }

    fn run(&mut self) -> Result<()> {
        while let Some(Reverse(queued)) = self.queue.pop() {
            let now = queued.at;
            match queued.event {
                EngineEvent::Directive(directive) => self.handle_directive(now, &directive)?,
                EngineEvent::Deliver { src, dst, message } => {
                    self.handle_delivery(now, &src, &dst, message)?
                }
                EngineEvent::Deadline { request_id } => self.handle_deadline(now, &request_id)?,
            }
        }
        let convergent = check_convergence(&self.nodes);
        let last_tick = self.trace.records.last().map(|r| r.tick).unwrap_or(0);
        self.trace.push(
            last_tick,
            &self.coordinator_id(),
            "quiescent",
            format!("nodes={} convergent={}", self.nodes.len(), convergent),
        );
        Ok(())
    }

    fn handle_directive(&mut self, now: Tick, directive: &Directive) -> Result<()> {
        match directive {
            Directive::SubmitTx(spec) => self.handle_submit(now, spec),
            Directive::Erase(spec) => self.handle_erase(now, spec),
            Directive::MembershipChange(spec) => self.handle_membership(now, spec),
            Directive::CastVote(spec) => self.handle_scenario_vote(now, spec),
        }
    }

    fn handle_submit(&mut self, now: Tick, spec: &SubmitTxSpec) -> Result<()> {
        let mut members = Vec::new();
        for id in &spec.scope {
            members.push(self.scenario.identity(id)?);
        }
        let declared_scope = canonicalize_scope(&members)?;
        let tx = Transaction {
            tx_id: spec.tx_id.clone(),
            payload: spec.payload.clone().into_bytes(),
            declared_scope,
            submitted_at: now,
        };

        // The coordinator validates the append against its own replica
        // before the operation earns a sequence number; a rejected
        // transaction is never broadcast.
        let coord = &self.nodes[self.coordinator];
        if let Err(e) = place_transaction(&coord.replica, tx.clone(), now) {
            let id = self.coordinator_id();
            self.trace
                .push(now, &id, "reject_tx", format!("{}: {e}", spec.tx_id));
            return Ok(());
        }

        let seq = self.next_op_seq;
        self.next_op_seq += 1;
        let op = Op::Append { tx, placed_at: now };
        self.apply_op(now, self.coordinator, seq, &op)?;
        self.broadcast_op(now, seq, op);
        Ok(())
    }

    fn broadcast_op(&mut self, now: Tick, seq: u64, op: Op) {
        let src = self.coordinator_id();
        let targets: Vec<String> = self
            .nodes
            .iter()
            .filter(|n| n.node_id != src)
            .map(|n| n.node_id.clone())
            .collect();
        for dst in targets {
            self.unicast(
                now,
                &src,
                &dst,
                Message::Op {
                    seq,
                    op: op.clone(),
                },
            );
        }
    }

    /// Installs an operation at a node, honoring sequence order. Operations
    /// arriving early sit in the pending buffer until the gap closes.
    fn apply_op(&mut self, now: Tick, node_idx: usize, seq: u64, op: &Op) -> Result<()> {
        {
            let node = &mut self.nodes[node_idx];
            if seq < node.next_op {
                return Ok(()); // duplicate, already applied
            }
            node.pending_ops.insert(seq, op.clone());
        }
        loop {
            let next = self.nodes[node_idx].next_op;
            let Some(op) = self.nodes[node_idx].pending_ops.remove(&next) else {
                break;
            };
            self.apply_op_now(now, node_idx, &op)?;
            self.nodes[node_idx].next_op += 1;
        }
        Ok(())
    }

    fn apply_op_now(&mut self, now: Tick, node_idx: usize, op: &Op) -> Result<()> {
        let node_id = self.nodes[node_idx].node_id.clone();
        let is_coordinator = node_idx == self.coordinator;
        match op {
            Op::Append { tx, placed_at } => {
                let result =
                    place_transaction(&self.nodes[node_idx].replica, tx.clone(), *placed_at);
                match result {
                    Ok((next, placed)) => {
                        self.nodes[node_idx].replica = next;
                        self.trace.push(
                            now,
                            &node_id,
                            "apply_append",
                            format!(
                                "tx {} chain {} height {}{}",
                                tx.tx_id,
                                short(&placed.chain_key),
                                placed.block.height,
                                if placed.created_chain {
                                    " new-chain"
                                } else {
                                    ""
                                }
                            ),
                        );
                        if is_coordinator {
                            let operator = self.nodes[node_idx].operator.clone();
                            self.membership
                                .record_endorsement(placed.chain_key, operator);
                        } else {
                            let operator = self.nodes[node_idx].operator.clone();
                            let coord = self.coordinator_id();
                            self.unicast(
                                now,
                                &node_id,
                                &coord,
                                Message::AckAppend {
                                    chain_key: placed.chain_key,
                                    operator,
                                },
                            );
                        }
                    }
                    Err(e) => {
                        // Replicas apply the same stream the coordinator
                        // validated, so this indicates real divergence.
                        self.trace.push(
                            now,
                            &node_id,
                            "replication_error",
                            format!("tx {}: {e}", tx.tx_id),
                        );
                    }
                }
            }
            Op::Decision { entry } => {
                if entry.verdict == Verdict::Approved {
                    match crate::consensus::apply_deletion(
                        &self.nodes[node_idx].replica,
                        entry.chain_key,
                        entry.keep_subroot,
                    ) {
                        Ok(next) => {
                            self.nodes[node_idx].replica = next;
                            self.trace.push(
                                now,
                                &node_id,
                                "apply_deletion",
                                format!(
                                    "{} chain {} keep_subroot={}",
                                    entry.request_id,
                                    short(&entry.chain_key),
                                    entry.keep_subroot
                                ),
                            );
                        }
                        Err(LedgerError::NotFound(_)) => {
                            self.trace.push(
                                now,
                                &node_id,
                                "deletion_noop",
                                format!(
                                    "{} chain {} already absent",
                                    entry.request_id,
                                    short(&entry.chain_key)
                                ),
                            );
                        }
                        Err(e) => return Err(e),
                    }
                } else {
                    self.trace.push(
                        now,
                        &node_id,
                        "record_decision",
                        format!("{} vetoed: {}", entry.request_id, entry.reason),
                    );
                }
                self.nodes[node_idx].journal.push(entry.clone());
            }
        }
        #[cfg(debug_assertions)]
        {
            let report = verify_tree(&self.nodes[node_idx].replica);
            debug_assert!(
                report.ok,
                "replica {} invalid after op: {:?}",
                node_id, report.violations
            );
        }
        Ok(())
    }

    fn handle_erase(&mut self, now: Tick, spec: &EraseSpec) -> Result<()> {
        let subject = self.scenario.identity(&spec.subject)?;
        let policy = EndorsementPolicy::new(spec.policy.mode, spec.policy.timeout)?;
        let coord_id = self.coordinator_id();

        let impact = chains_affected_by(&self.nodes[self.coordinator].replica, &subject);
        let plan = match plan_erasure(
            &self.nodes[self.coordinator].replica,
            &subject,
            spec.mode,
            spec.strategy,
            policy,
            &self.membership,
            &self.guardians,
            now,
            &mut self.request_ids,
        ) {
            Ok(plan) => plan,
            Err(e) => {
                self.trace
                    .push(now, &coord_id, "erase_rejected", e.to_string());
                return Ok(());
            }
        };
        self.trace.push(
            now,
            &coord_id,
            "erase_plan",
            format!(
                "subject {} unaffected={} unilateral={} consensus={}",
                subject.id,
                impact.unaffected.len(),
                impact.unilateral.len(),
                impact.consensus_required.len()
            ),
        );

        for planned in plan.per_chain {
            match planned.outcome {
                PlanOutcome::Unguarded { detail } => {
                    self.trace.push(now, &coord_id, "unguarded_scope", detail);
                }
                PlanOutcome::Request(request) => {
                    let decision = evaluate(&request, &[], now)?;
                    if decision.verdict == Verdict::Approved {
                        // Consensus-free (empty endorser set): decide now.
                        self.requests.insert(
                            request.request_id.clone(),
                            OpenRequest {
                                request: request.clone(),
                                votes: Vec::new(),
                                frozen: None,
                            },
                        );
                        self.finalize_request(now, &request.request_id, decision)?;
                    } else {
                        self.open_request(now, request)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn open_request(&mut self, now: Tick, request: DeletionRequest) -> Result<()> {
        let coord_id = self.coordinator_id();
        let endorser_list = request
            .endorsers
            .iter()
            .map(|e| e.id.as_str())
            .collect::<Vec<_>>()
            .join(",");
        self.trace.push(
            now,
            &coord_id,
            "open_request",
            format!(
                "{} chain {} endorsers [{}] mode {:?} deadline {}",
                request.request_id,
                short(&request.target_chain),
                endorser_list,
                request.policy.mode,
                request.deadline()
            ),
        );
        // Decide strictly after the deadline so timely votes at the deadline
        // tick still count.
        self.schedule(
            request.deadline() + 1,
            EngineEvent::Deadline {
                request_id: request.request_id.clone(),
            },
        );

        let endorsers: Vec<Identity> = request.endorsers.iter().cloned().collect();
        for endorser in endorsers {
            match self.node_of(&endorser) {
                Some(idx) => {
                    let dst = self.nodes[idx].node_id.clone();
                    self.unicast(
                        now,
                        &coord_id,
                        &dst,
                        Message::SolicitVote {
                            request: request.clone(),
                        },
                    );
                }
                None => {
                    self.trace.push(
                        now,
                        &coord_id,
                        "no_node_for_endorser",
                        format!("{} has no node; it stays silent", endorser.id),
                    );
                }
            }
        }
        self.requests.insert(
            request.request_id.clone(),
            OpenRequest {
                request,
                votes: Vec::new(),
                frozen: None,
            },
        );
        Ok(())
    }

    fn handle_membership(&mut self, now: Tick, spec: &MembershipChangeSpec) -> Result<()> {
        let org = self.scenario.identity(&spec.org)?;
        let coord_id = self.coordinator_id();
        match spec.change {
            MembershipChangeKind::Join => {
                self.membership.join(org.clone());
                self.trace.push(
                    now,
                    &coord_id,
                    "membership_change",
                    format!("{} joined", org.id),
                );
            }
            MembershipChangeKind::Leave => {
                self.membership.leave(&org);
                self.trace.push(
                    now,
                    &coord_id,
                    "membership_change",
                    format!("{} left", org.id),
                );
            }
        }
        Ok(())
    }

    fn handle_scenario_vote(&mut self, now: Tick, spec: &CastVoteSpec) -> Result<()> {
        let voter = self.scenario.identity(&spec.voter)?;
        let Some(idx) = self.node_of(&voter) else {
            let coord_id = self.coordinator_id();
            self.trace.push(
                now,
                &coord_id,
                "vote_unrouted",
                format!("{} operates no node", voter.id),
            );
            return Ok(());
        };
        let vote = Vote {
            voter,
            request_id: spec.request_id.clone(),
            decision: spec.decision,
            at: now,
        };
        self.send_vote(now, idx, vote);
        Ok(())
    }

    fn send_vote(&mut self, now: Tick, node_idx: usize, vote: Vote) {
        let node_id = self.nodes[node_idx].node_id.clone();
        let coord_id = self.coordinator_id();
        self.trace.push(
            now,
            &node_id,
            "cast_vote",
            format!(
                "{} {:?} by {}",
                vote.request_id, vote.decision, vote.voter.id
            ),
        );
        self.unicast(now, &node_id, &coord_id, Message::CastVote { vote });
    }

    fn handle_delivery(
        &mut self,
        now: Tick,
        _src: &str,
        dst: &str,
        message: Message,
    ) -> Result<()> {
        let Some(node_idx) = self.node_index(dst) else {
            return Ok(());
        };
        match message {
            Message::Op { seq, op } => self.apply_op(now, node_idx, seq, &op),
            Message::AckAppend {
                chain_key,
                operator,
            } => {
                // Acknowledgments feed the endorsement history used by the
                // historical-endorsers strategy.
                self.membership
                    .record_endorsement(chain_key, operator.clone());
                self.trace.push(
                    now,
                    dst,
                    "ack_append",
                    format!(
                        "chain {} acknowledged by {}",
                        short(&chain_key),
                        operator.id
                    ),
                );
                Ok(())
            }
            Message::SolicitVote { request } => {
                self.respond_to_solicitation(now, node_idx, request)
            }
            Message::CastVote { vote } => self.receive_vote(now, vote),
        }
    }

    fn respond_to_solicitation(
        &mut self,
        now: Tick,
        node_idx: usize,
        request: DeletionRequest,
    ) -> Result<()> {
        let node_id = self.nodes[node_idx].node_id.clone();
        let choice = match &self.nodes[node_idx].behavior {
            BehaviorSpec::ApproveAll => Some(VoteChoice::Approve),
            BehaviorSpec::VetoAll => Some(VoteChoice::Veto),
            BehaviorSpec::Silent => None,
            BehaviorSpec::Scripted(script) => script
                .iter()
                .find(|s| s.request_id == request.request_id)
                .map(|s| s.decision),
        };
        match choice {
            Some(decision) => {
                let vote = Vote {
                    voter: self.nodes[node_idx].operator.clone(),
                    request_id: request.request_id.clone(),
                    decision,
                    at: now,
                };
                self.send_vote(now, node_idx, vote);
            }
            None => {
                self.trace.push(
                    now,
                    &node_id,
                    "stay_silent",
                    format!("{} solicited, no response", request.request_id),
                );
            }
        }
        Ok(())
    }

    fn receive_vote(&mut self, now: Tick, vote: Vote) -> Result<()> {
        let coord_id = self.coordinator_id();
        let Some(open) = self.requests.get_mut(&vote.request_id) else {
            self.trace.push(
                now,
                &coord_id,
                "vote_ignored",
                format!("{} unknown request", vote.request_id),
            );
            return Ok(());
        };
        if open.frozen.is_some() {
            self.trace.push(
                now,
                &coord_id,
                "late_vote_ignored",
                format!("{} already decided", vote.request_id),
            );
            return Ok(());
        }
        open.votes.push(vote.clone());
        match evaluate(&open.request, &open.votes, now) {
            Err(e) => {
                open.votes.pop();
                self.trace.push(
                    now,
                    &coord_id,
                    "vote_rejected",
                    format!("{}: {e}", vote.request_id),
                );
                Ok(())
            }
            Ok(decision) if decision.is_terminal() => {
                let request_id = vote.request_id.clone();
                self.trace.push(
                    now,
                    &coord_id,
                    "vote_recorded",
                    format!(
                        "{} {:?} by {}",
                        vote.request_id, vote.decision, vote.voter.id
                    ),
                );
                self.finalize_request(now, &request_id, decision)
            }
            Ok(_) => {
                self.trace.push(
                    now,
                    &coord_id,
                    "vote_recorded",
                    format!(
                        "{} {:?} by {}",
                        vote.request_id, vote.decision, vote.voter.id
                    ),
                );
                Ok(())
            }
        }
    }

    fn handle_deadline(&mut self, now: Tick, request_id: &str) -> Result<()> {
        let coord_id = self.coordinator_id();
        let Some(open) = self.requests.get(request_id) else {
            return Ok(());
        };
        if open.frozen.is_some() {
            return Ok(());
        }
        self.trace
            .push(now, &coord_id, "deadline", request_id.to_string());
        let decision = evaluate(&open.request, &open.votes, now)?;
        debug_assert!(
            decision.is_terminal(),
            "past-deadline evaluation must decide"
        );
        self.finalize_request(now, request_id, decision)
    }

    /// Freezes a terminal decision, journals it and broadcasts it as a
    /// sequenced operation so every replica applies it at the same point in
    /// the stream. Terminal decisions never revert; later votes bounce off
    /// the frozen state.
    fn finalize_request(&mut self, now: Tick, request_id: &str, decision: Decision) -> Result<()> {
        let coord_id = self.coordinator_id();
        let open = self
            .requests
            .get_mut(request_id)
            .expect("finalize only for tracked requests");
        let entry = JournalEntry::from_decision(&open.request, &decision, now);
        open.frozen = Some(decision.clone());
        self.trace.push(
            now,
            &coord_id,
            "decision",
            format!(
                "{} {:?} ({}) chain {}",
                request_id,
                decision.verdict,
                decision.reason,
                short(&entry.chain_key)
            ),
        );

        let seq = self.next_op_seq;
        self.next_op_seq += 1;
        let op = Op::Decision { entry };
        self.apply_op(now, self.coordinator, seq, &op)?;
        self.broadcast_op(now, seq, op);
        Ok(())
    }
}

fn short(digest: &Digest) -> String {
    digest.to_hex()[..12].to_string()
}
