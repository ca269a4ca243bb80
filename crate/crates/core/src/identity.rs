use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{LedgerError, Result};

/// Whether an identity is a blockchain-participating organization or a
/// physical person. Persons never operate nodes; organizations may.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityKind {
    Organization,
    Person,
}

/// A participant identifier in three-section form `did:<method>:<specific>`.
///
/// Identities are totally ordered byte-lexicographically on the id string,
/// which makes scope canonicalization a plain sort.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Identity {
    pub kind: IdentityKind,
    pub id: String,
}

impl Identity {
    pub fn new(kind: IdentityKind, id: impl Into<String>) -> Result<Identity> {
        let identity = Identity {
            kind,
            id: id.into(),
        };
        identity.validate()?;
        Ok(identity)
    }

    pub fn organization(id: impl Into<String>) -> Result<Identity> {
        Identity::new(IdentityKind::Organization, id)
    }

    pub fn person(id: impl Into<String>) -> Result<Identity> {
        Identity::new(IdentityKind::Person, id)
    }

    /// Checks the three-section grammar: exactly three non-empty segments
    /// separated by two colons, the first segment literally `did`.
    pub fn validate(&self) -> Result<()> {
        let segments: Vec<&str> = self.id.split(':').collect();
        if segments.len() != 3 || segments.iter().any(|s| s.is_empty()) || segments[0] != "did" {
            return Err(LedgerError::InvalidArgument(format!(
                "malformed identifier {:?}: expected did:<method>:<specific>",
                self.id
            )));
        }
        Ok(())
    }

    pub fn is_organization(&self) -> bool {
        self.kind == IdentityKind::Organization
    }

    pub fn is_person(&self) -> bool {
        self.kind == IdentityKind::Person
    }
}

impl Ord for Identity {
    fn cmp(&self, other: &Self) -> Ordering {
        // Byte-lexicographic on the id; kind only breaks ties between
        // identically named identities so Ord stays consistent with Eq.
        self.id
            .as_bytes()
            .cmp(other.id.as_bytes())
            .then(self.kind.cmp(&other.kind))
    }
}

impl PartialOrd for Identity {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

impl fmt::Debug for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({})", self.kind, self.id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_three_section_ids() {
        assert!(Identity::organization("did:org:x").is_ok());
        assert!(Identity::person("did:person:alice").is_ok());
        assert!(Identity::person("did:example:123456789abcdefghi").is_ok());
    }

    #[test]
    fn rejects_malformed_ids() {
        for bad in [
            "",
            "did",
            "did:org",
            "did::x",
            "did:org:",
            ":org:x",
            "did:org:x:extra",
            "DID:org:x",
            "foo:org:x",
        ] {
            assert!(
                Identity::organization(bad).is_err(),
                "{bad:?} should be rejected"
            );
        }
    }

    #[test]
    fn ordering_is_byte_lexicographic_on_id() {
        let a = Identity::organization("did:org:x").unwrap();
        let b = Identity::organization("did:org:y").unwrap();
        let c = Identity::person("did:person:a").unwrap();
        assert!(a < b);
        assert!(b < c); // 'o' < 'p'
        let mut v = vec![c.clone(), a.clone(), b.clone()];
        v.sort();
        assert_eq!(v, vec![a, b, c]);
    }
}
