//! Inductive-invariant synthesis for finite instances of distributed-protocol
//! specifications.
//!
//! The pipeline: a small TLA+-flavoured spec language is parsed and grounded
//! over concrete sort elements; an explicit-state explorer computes the exact
//! reachable set once per run; a frame controller runs a property-directed
//! loop (frontier blocking, predecessor descent, clause learning, clause
//! push, fixpoint detection) on top of an exact one-step witness engine; and
//! pluggable proposers (template enumeration, remote chat endpoint, replay,
//! null) supply candidate blocking clauses.

pub mod diag;
pub mod evaluator;
pub mod instance;
pub mod spec_lang;

pub use diag::{Diagnostic, DiagnosticKind, Span};
pub use instance::{GroundInstance, InstanceConfig};
pub use spec_lang::ast::{Expr, ExprKind, ProtocolSpec, VarType};
