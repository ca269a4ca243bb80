use serde::{Deserialize, Serialize};

use crate::digest::Digest;
use crate::error::{LedgerError, Result};
use crate::identity::Identity;

/// The canonical set of identities a transaction is about.
///
/// Members are strictly ascending (sorted, deduplicated); the scope key is
/// the SHA-256 of the member ids joined with a single `0x0A` byte. The empty
/// scope is legal and hashes the empty string.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "ScopeRepr", into = "ScopeRepr")]
pub struct Scope {
    pub members: Vec<Identity>,
    pub key: Digest,
}

/// Wire form: members only; the key is recomputed on deserialization so a
/// stored scope can never disagree with its own key.
#[derive(Serialize, Deserialize)]
struct ScopeRepr {
    members: Vec<Identity>,
}

impl From<Scope> for ScopeRepr {
    fn from(scope: Scope) -> ScopeRepr {
        ScopeRepr {
            members: scope.members,
        }
    }
}

impl TryFrom<ScopeRepr> for Scope {
    type Error = LedgerError;

    fn try_from(repr: ScopeRepr) -> Result<Scope> {
        let scope = Scope::from_sorted_members(repr.members)?;
        Ok(scope)
    }
}

impl Scope {
    /// The empty (∅) scope, holder of payloads that reference nobody.
    pub fn empty() -> Scope {
        Scope {
            members: Vec::new(),
            key: scope_key(&[]),
        }
    }

    /// Builds a scope from members that must already be strictly ascending.
    /// Used on load paths where silent re-sorting would mask corruption;
    /// fresh scopes go through `placement::canonicalize_scope`.
    pub fn from_sorted_members(members: Vec<Identity>) -> Result<Scope> {
        for member in &members {
            member.validate()?;
        }
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LedgerError::InvalidArgument(
                "scope members must be strictly ascending".into(),
            ));
        }
        let key = scope_key(&members);
        Ok(Scope { members, key })
    }

    /// True when the member list is strictly ascending and the key matches
    /// the canonical serialization.
    pub fn is_canonical(&self) -> bool {
        self.members.iter().all(|m| m.validate().is_ok())
            && self.members.windows(2).all(|w| w[0] < w[1])
            && self.key == scope_key(&self.members)
    }

    pub fn contains(&self, who: &Identity) -> bool {
        self.members.binary_search(who).is_ok()
    }

    /// Human-readable label: sorted member ids joined with `,`, or `∅`.
    pub fn label(&self) -> String {
        if self.members.is_empty() {
            "∅".to_string()
        } else {
            self.members
                .iter()
                .map(|m| m.id.as_str())
                .collect::<Vec<_>>()
                .join(",")
        }
    }
}

/// Key derivation: SHA-256 over the member ids joined with `0x0A`.
pub fn scope_key(members: &[Identity]) -> Digest {
    let joined = members
        .iter()
        .map(|m| m.id.as_str())
        .collect::<Vec<_>>()
        .join("\n");
    Digest::of(joined.as_bytes())
}
