//! Context-chain ledger engine with consensus-governed deletion.
//!
//! The ledger is a tree: one genesis block, and below it one linear
//! hash-chained context chain per scope in use. A transaction's scope — the
//! canonical set of organizations and persons it is about — is declared by
//! the submitter and routes the transaction into exactly one chain by
//! precise scope match. Chains share no hash state except the genesis hash,
//! so a whole chain can be deleted without breaking the integrity of any
//! surviving chain.
//!
//! Deletion is governed: the chain whose scope is exactly the requesting
//! person is theirs to delete, while every other affected chain requires the
//! unanimous agreement of its endorsers, each of whom can veto. The
//! [`simnet`] module replays this protocol over a deterministic simulated
//! network; [`storage`] persists replicas in an inspectable on-disk layout
//! in which deletion physically removes bytes.

pub mod block;
pub mod consensus;
pub mod digest;
pub mod error;
pub mod identity;
pub mod placement;
pub mod scenario;
pub mod scope;
pub mod simnet;
pub mod storage;
pub mod tree;
pub mod verify;

pub use block::{hash_block, Block, Tick, Transaction};
pub use digest::Digest;
pub use error::{LedgerError, Result};
pub use identity::{Identity, IdentityKind};
pub use scope::Scope;
pub use tree::{make_genesis, ContextChain, LedgerTree};
pub use verify::{verify_tree, VerificationReport};
