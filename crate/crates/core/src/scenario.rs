//! Declarative scenario files: the input format of the simulator.
//!
//! Scenarios are JSON with strict unknown-field rejection. Every identity
//! referenced by nodes, guardians or events must be declared up front in
//! `organizations` or `persons`; validation fails fast with the offending
//! field named.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::block::Tick;
use crate::consensus::{EndorserStrategy, ErasureMode, SilencePolicy, VoteChoice};
use crate::error::{LedgerError, Result};
use crate::identity::{Identity, IdentityKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub network_id: String,
    /// Organization DIDs. All of them are network members from tick 0.
    pub organizations: Vec<String>,
    /// Person DIDs. Persons never operate nodes.
    pub persons: Vec<String>,
    /// Person DID → guardian organization DIDs.
    #[serde(default)]
    pub guardians: BTreeMap<String, Vec<String>>,
    pub nodes: Vec<NodeSpec>,
    pub network: NetworkConfig,
    /// Seed for the simulation's deterministic random stream.
    pub seed: u64,
    pub events: Vec<ScenarioEvent>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSpec {
    pub node_id: String,
    /// Operator organization DID.
    pub operator: String,
    pub behavior: BehaviorSpec,
}

/// How a node answers vote solicitations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BehaviorSpec {
    ApproveAll,
    VetoAll,
    Silent,
    Scripted(Vec<ScriptedVote>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScriptedVote {
    /// Request ids are minted sequentially per run: `req-1`, `req-2`, ...
    pub request_id: String,
    pub decision: VoteChoice,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    pub delay_min: Tick,
    pub delay_max: Tick,
    /// Probability in [0, 1] that a unicast message is lost in transit.
    pub drop_probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioEvent {
    pub at: Tick,
    #[serde(flatten)]
    pub directive: Directive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Directive {
    SubmitTx(SubmitTxSpec),
    Erase(EraseSpec),
    MembershipChange(MembershipChangeSpec),
    CastVote(CastVoteSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubmitTxSpec {
    pub tx_id: String,
    /// Payload text; stored as its UTF-8 bytes.
    pub payload: String,
    /// Scope member DIDs, in any order; canonicalized at submission.
    pub scope: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EraseSpec {
    /// Person DID requesting erasure of all their data.
    pub subject: String,
    pub mode: ErasureMode,
    pub strategy: EndorserStrategy,
    pub policy: PolicySpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySpec {
    pub mode: SilencePolicy,
    pub timeout: Tick,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MembershipChangeSpec {
    pub org: String,
    pub change: MembershipChangeKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MembershipChangeKind {
    Join,
    Leave,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CastVoteSpec {
    pub request_id: String,
    /// Organization DID casting the vote through its node.
    pub voter: String,
    pub decision: VoteChoice,
}

impl Scenario {
    pub fn from_json(json: &str) -> Result<Scenario> {
        let scenario: Scenario = serde_json::from_str(json)
            .map_err(|e| LedgerError::InvalidArgument(format!("scenario parse error: {e}")))?;
        scenario.validate()?;
        Ok(scenario)
    }

    /// Looks up a declared identity by DID, with its declared kind.
    pub fn identity(&self, id: &str) -> Result<Identity> {
        if self.organizations.iter().any(|o| o == id) {
            return Identity::new(IdentityKind::Organization, id);
        }
        if self.persons.iter().any(|p| p == id) {
            return Identity::new(IdentityKind::Person, id);
        }
        Err(LedgerError::InvalidArgument(format!(
            "identity {id:?} is not declared in organizations or persons"
        )))
    }

    pub fn validate(&self) -> Result<()> {
        if self.network_id.is_empty() {
            return Err(LedgerError::InvalidArgument(
                "network_id must be non-empty".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        let declared = self
            .organizations
            .iter()
            .map(|id| (IdentityKind::Organization, id))
            .chain(self.persons.iter().map(|id| (IdentityKind::Person, id)));
        for (kind, id) in declared {
            Identity::new(kind, id.clone())?;
            if !seen.insert(id) {
                return Err(LedgerError::InvalidArgument(format!(
                    "identity {id:?} declared twice"
                )));
            }
        }

        for (person, orgs) in &self.guardians {
            let p = self.identity(person)?;
            if !p.is_person() {
                return Err(LedgerError::InvalidArgument(format!(
                    "guardian key {person:?} is not a declared person"
                )));
            }
            if orgs.is_empty() {
                return Err(LedgerError::InvalidArgument(format!(
                    "guardian list for {person:?} is empty"
                )));
            }
            for org in orgs {
                let o = self.identity(org)?;
                if !o.is_organization() {
                    return Err(LedgerError::InvalidArgument(format!(
                        "guardian {org:?} of {person:?} is not a declared organization"
                    )));
                }
            }
        }

        if self.nodes.is_empty() {
            return Err(LedgerError::InvalidArgument(
                "scenario needs at least one node".into(),
            ));
        }
        let mut node_ids = BTreeSet::new();
        for node in &self.nodes {
            if node.node_id.is_empty() {
                return Err(LedgerError::InvalidArgument("empty node_id".into()));
            }
            if !node_ids.insert(&node.node_id) {
                return Err(LedgerError::InvalidArgument(format!(
                    "node_id {:?} declared twice",
                    node.node_id
                )));
            }
            let op = self.identity(&node.operator)?;
            if !op.is_organization() {
                return Err(LedgerError::InvalidArgument(format!(
                    "node {:?} operator {:?} is not an organization",
                    node.node_id, node.operator
                )));
            }
        }

        if self.network.delay_min > self.network.delay_max {
            return Err(LedgerError::InvalidArgument(format!(
                "delay_min {} exceeds delay_max {}",
                self.network.delay_min, self.network.delay_max
            )));
        }
        if !(0.0..=1.0).contains(&self.network.drop_probability) {
            return Err(LedgerError::InvalidArgument(format!(
                "drop_probability {} is not in [0, 1]",
                self.network.drop_probability
            )));
        }

        for (i, event) in self.events.iter().enumerate() {
            let context = |what: &str| format!("event #{i} (tick {}): {what}", event.at);
            match &event.directive {
                Directive::SubmitTx(spec) => {
                    if spec.tx_id.is_empty() {
                        return Err(LedgerError::InvalidArgument(context("empty tx_id")));
                    }
                    for member in &spec.scope {
                        self.identity(member)
                            .map_err(|e| LedgerError::InvalidArgument(context(&e.to_string())))?;
                    }
                }
                Directive::Erase(spec) => {
                    let subject = self
                        .identity(&spec.subject)
                        .map_err(|e| LedgerError::InvalidArgument(context(&e.to_string())))?;
                    if !subject.is_person() {
                        return Err(LedgerError::InvalidArgument(context(&format!(
                            "erase subject {:?} is not a person",
                            spec.subject
                        ))));
                    }
                    if spec.policy.timeout == 0 {
                        return Err(LedgerError::InvalidArgument(context(
                            "policy timeout must be > 0",
                        )));
                    }
                }
                Directive::MembershipChange(spec) => {
                    let org = self
                        .identity(&spec.org)
                        .map_err(|e| LedgerError::InvalidArgument(context(&e.to_string())))?;
                    if !org.is_organization() {
                        return Err(LedgerError::InvalidArgument(context(&format!(
                            "membership change target {:?} is not an organization",
                            spec.org
                        ))));
                    }
                }
                Directive::CastVote(spec) => {
                    let voter = self
                        .identity(&spec.voter)
                        .map_err(|e| LedgerError::InvalidArgument(context(&e.to_string())))?;
                    if !voter.is_organization() {
                        return Err(LedgerError::InvalidArgument(context(&format!(
                            "voter {:?} is not an organization",
                            spec.voter
                        ))));
                    }
                }
            }
        }

        Ok(())
    }
}
