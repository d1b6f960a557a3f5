//! Protocol spec language: parsing, type checking, normalization, grounding
//! support, and quantifier-template extraction.
//!
//! The surface language is a small TLA+-styled notation (see
//! `docs/spec-language.md` for the grammar): `SORT`/`CONST`/`VAR`
//! declarations, one `INIT` predicate, parameterized `ACTION` blocks with
//! `REQUIRE` guards and per-variable primed updates or `UNCHANGED` markers,
//! and one `SAFETY` predicate.

pub mod ast;
pub mod lexer;
pub mod normal;
pub mod parser;
pub mod pretty;
pub mod resolve;
pub mod template;
pub mod token;

use crate::diag::Diagnostic;

use ast::{Expr, ProtocolSpec};
use parser::Parser;

pub use normal::{cmp_expr, normal_form_key, Repair};
pub use pretty::pretty;
pub use resolve::ElemTable;
pub use template::extract_quantifier_templates;

/// Parse and type-check a protocol specification.
pub fn parse_spec(text: &str) -> Result<ProtocolSpec, Vec<Diagnostic>> {
    parse_spec_named(text, "protocol")
}

/// Parse and type-check a protocol specification with an explicit name
/// (callers usually pass the file stem).
pub fn parse_spec_named(text: &str, name: &str) -> Result<ProtocolSpec, Vec<Diagnostic>> {
    let mut p = Parser::new(text).map_err(|d| vec![d])?;
    let raw = p.parse_raw_spec().map_err(|d| vec![d])?;
    resolve::resolve_spec(raw, name.to_string())
}

/// Parse a standalone clause: a boolean, closed, unprimed expression over the
/// spec's variables and constants.
pub fn parse_clause(text: &str, spec: &ProtocolSpec) -> Result<Expr, Vec<Diagnostic>> {
    parse_clause_inner(text, spec, None)
}

/// Like [`parse_clause`], additionally resolving concrete element names (used
/// when clause text mentions instance elements, e.g. re-read invariant files
/// containing aggregate clauses).
pub fn parse_clause_with_elements(
    text: &str,
    spec: &ProtocolSpec,
    elements: &ElemTable,
) -> Result<Expr, Vec<Diagnostic>> {
    parse_clause_inner(text, spec, Some(elements))
}

fn parse_clause_inner(
    text: &str,
    spec: &ProtocolSpec,
    elements: Option<&ElemTable>,
) -> Result<Expr, Vec<Diagnostic>> {
    let mut p = Parser::new(text).map_err(|d| vec![d])?;
    let mut e = p.parse_standalone_expr().map_err(|d| vec![d])?;
    resolve::resolve_clause_expr(&mut e, spec, elements)?;
    Ok(e)
}

/// Normalize a clause to its canonical form (see [`normal`]).
pub fn normalize_clause(expr: Expr, spec: &ProtocolSpec) -> Result<Expr, Vec<Diagnostic>> {
    normal::normalize_with_repairs(expr, spec, None).map(|(e, _)| e)
}

/// Normalize and report any binder-collision repairs that were applied.
pub fn normalize_clause_with_repairs(
    expr: Expr,
    spec: &ProtocolSpec,
    elements: Option<&ElemTable>,
) -> Result<(Expr, Vec<Repair>), Vec<Diagnostic>> {
    normal::normalize_with_repairs(expr, spec, elements)
}
