//! Clause normalization: canonical operand ordering for commutative
//! operators, adjacent-duplicate removal, and canonical binder renaming.
//!
//! Two alpha-equivalent or commutation-equivalent clauses normalize to
//! structurally identical ASTs, so the pretty-printed normal form serves as a
//! clause identity key. Binders that reuse a spec-level name (a common mistake
//! in machine-produced clauses) are renamed apart and the repair is recorded.

use std::cmp::Ordering;

use crate::diag::Diagnostic;

use super::ast::{Expr, ExprKind, ProtocolSpec, QuantKind};
use super::pretty::pretty;
use super::resolve::{resolve_clause_expr, ElemTable};

/// Record of one scope repair performed during normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Repair {
    /// The binder name as written (collides with a spec-level name).
    pub original: String,
    /// The canonical name it was rewritten to.
    pub renamed: String,
}

/// Normalize a clause expression. Accepts raw (just-parsed) or already
/// resolved input; raw input is resolved against `spec` first.
pub fn normalize_with_repairs(
    mut expr: Expr,
    spec: &ProtocolSpec,
    elements: Option<&ElemTable>,
) -> Result<(Expr, Vec<Repair>), Vec<Diagnostic>> {
    if expr.has_unresolved() {
        resolve_clause_expr(&mut expr, spec, elements)?;
    }
    canonicalize(&mut expr);
    let mut repairs = Vec::new();
    let mut counter = 0u32;
    rename_binders(&mut expr, spec, &mut Vec::new(), &mut counter, &mut repairs);
    Ok((expr, repairs))
}

/// The printed normal form, used as the identity key for clause deduplication.
pub fn normal_form_key(expr: &Expr) -> String {
    pretty(expr)
}

// ---------------------------------------------------------------------------
// Canonical structure.
// ---------------------------------------------------------------------------

fn canonicalize(e: &mut Expr) {
    // Children first so comparisons see canonical subtrees.
    match &mut e.kind {
        ExprKind::And(xs) | ExprKind::Or(xs) => {
            for x in xs.iter_mut() {
                canonicalize(x);
            }
        }
        ExprKind::SetLit { elems, .. } => {
            for x in elems.iter_mut() {
                canonicalize(x);
            }
        }
        ExprKind::Not(a) => canonicalize(a),
        ExprKind::Quant { body, .. } => canonicalize(body),
        ExprKind::Implies(a, b)
        | ExprKind::Iff(a, b)
        | ExprKind::Eq(a, b)
        | ExprKind::In(a, b)
        | ExprKind::Subseteq(a, b)
        | ExprKind::Union(a, b)
        | ExprKind::Inter(a, b)
        | ExprKind::Diff(a, b) => {
            canonicalize(a);
            canonicalize(b);
        }
        ExprKind::MapApp { map, key } => {
            canonicalize(map);
            canonicalize(key);
        }
        ExprKind::MapUpdate { map, key, val } => {
            canonicalize(map);
            canonicalize(key);
            canonicalize(val);
        }
        _ => {}
    }

    let is_and = matches!(e.kind, ExprKind::And(_));
    match &mut e.kind {
        ExprKind::And(xs) | ExprKind::Or(xs) => {
            // Flatten nested chains of the same connective.
            let mut flat: Vec<Expr> = Vec::with_capacity(xs.len());
            for x in std::mem::take(xs) {
                match (is_and, x.kind) {
                    (true, ExprKind::And(inner)) => flat.extend(inner),
                    (false, ExprKind::Or(inner)) => flat.extend(inner),
                    (_, k) => flat.push(Expr { kind: k, span: x.span }),
                }
            }
            flat.sort_by(cmp_expr);
            flat.dedup_by(|a, b| cmp_expr(a, b) == Ordering::Equal);
            if flat.len() == 1 {
                *e = flat.pop().unwrap();
            } else {
                *xs = flat;
            }
        }
        ExprKind::SetLit { elems, .. } => {
            elems.sort_by(cmp_expr);
            elems.dedup_by(|a, b| cmp_expr(a, b) == Ordering::Equal);
        }
        ExprKind::Eq(a, b) | ExprKind::Iff(a, b) | ExprKind::Union(a, b) | ExprKind::Inter(a, b) => {
            if cmp_expr(a, b) == Ordering::Greater {
                std::mem::swap(a, b);
            }
        }
        _ => {}
    }
}

/// Total structural order on canonical ASTs. Binder and reference names are
/// ignored: bound variables compare by de Bruijn index, variables and
/// constants by declaration id, so alpha-variants compare equal.
pub fn cmp_expr(a: &Expr, b: &Expr) -> Ordering {
    fn rank(k: &ExprKind) -> u8 {
        match k {
            ExprKind::True => 0,
            ExprKind::False => 1,
            ExprKind::Ident(_) => 2,
            ExprKind::Var(..) => 3,
            ExprKind::Const(..) => 4,
            ExprKind::Bound(..) => 5,
            ExprKind::ElemLit { .. } => 6,
            ExprKind::SortSet(..) => 7,
            ExprKind::Not(_) => 8,
            ExprKind::And(_) => 9,
            ExprKind::Or(_) => 10,
            ExprKind::Implies(..) => 11,
            ExprKind::Iff(..) => 12,
            ExprKind::Quant { .. } => 13,
            ExprKind::Eq(..) => 14,
            ExprKind::In(..) => 15,
            ExprKind::Subseteq(..) => 16,
            ExprKind::Union(..) => 17,
            ExprKind::Inter(..) => 18,
            ExprKind::Diff(..) => 19,
            ExprKind::SetLit { .. } => 20,
            ExprKind::MapApp { .. } => 21,
            ExprKind::MapUpdate { .. } => 22,
        }
    }

    fn cmp_list(xs: &[Expr], ys: &[Expr]) -> Ordering {
        for (x, y) in xs.iter().zip(ys.iter()) {
            let o = cmp_expr(x, y);
            if o != Ordering::Equal {
                return o;
            }
        }
        xs.len().cmp(&ys.len())
    }

    let (ra, rb) = (rank(&a.kind), rank(&b.kind));
    if ra != rb {
        return ra.cmp(&rb);
    }
    match (&a.kind, &b.kind) {
        (ExprKind::True, _) | (ExprKind::False, _) => Ordering::Equal,
        (ExprKind::Ident(x), ExprKind::Ident(y)) => x.cmp(y),
        (ExprKind::Var(x, _), ExprKind::Var(y, _)) => x.cmp(y),
        (ExprKind::Const(x, _), ExprKind::Const(y, _)) => x.cmp(y),
        (ExprKind::Bound(x, _), ExprKind::Bound(y, _)) => x.cmp(y),
        (
            ExprKind::ElemLit { sort: s1, index: i1, .. },
            ExprKind::ElemLit { sort: s2, index: i2, .. },
        ) => (s1, i1).cmp(&(s2, i2)),
        (ExprKind::SortSet(x, _), ExprKind::SortSet(y, _)) => x.cmp(y),
        (ExprKind::Not(x), ExprKind::Not(y)) => cmp_expr(x, y),
        (ExprKind::And(xs), ExprKind::And(ys)) | (ExprKind::Or(xs), ExprKind::Or(ys)) => {
            cmp_list(xs, ys)
        }
        (
            ExprKind::Quant { kind: k1, sort: s1, body: b1, .. },
            ExprKind::Quant { kind: k2, sort: s2, body: b2, .. },
        ) => {
            let qk = |k: &QuantKind| match k {
                QuantKind::Forall => 0u8,
                QuantKind::Exists => 1u8,
            };
            qk(k1)
                .cmp(&qk(k2))
                .then_with(|| s1.cmp(s2))
                .then_with(|| cmp_expr(b1, b2))
        }
        (ExprKind::Implies(a1, b1), ExprKind::Implies(a2, b2))
        | (ExprKind::Iff(a1, b1), ExprKind::Iff(a2, b2))
        | (ExprKind::Eq(a1, b1), ExprKind::Eq(a2, b2))
        | (ExprKind::In(a1, b1), ExprKind::In(a2, b2))
        | (ExprKind::Subseteq(a1, b1), ExprKind::Subseteq(a2, b2))
        | (ExprKind::Union(a1, b1), ExprKind::Union(a2, b2))
        | (ExprKind::Inter(a1, b1), ExprKind::Inter(a2, b2))
        | (ExprKind::Diff(a1, b1), ExprKind::Diff(a2, b2)) => {
            cmp_expr(a1, a2).then_with(|| cmp_expr(b1, b2))
        }
        (ExprKind::SetLit { elems: xs, .. }, ExprKind::SetLit { elems: ys, .. }) => {
            cmp_list(xs, ys)
        }
        (ExprKind::MapApp { map: m1, key: k1 }, ExprKind::MapApp { map: m2, key: k2 }) => {
            cmp_expr(m1, m2).then_with(|| cmp_expr(k1, k2))
        }
        (
            ExprKind::MapUpdate { map: m1, key: k1, val: v1 },
            ExprKind::MapUpdate { map: m2, key: k2, val: v2 },
        ) => cmp_expr(m1, m2)
            .then_with(|| cmp_expr(k1, k2))
            .then_with(|| cmp_expr(v1, v2)),
        _ => unreachable!("rank() separates differing kinds"),
    }
}

// ---------------------------------------------------------------------------
// Canonical binder names.
// ---------------------------------------------------------------------------

fn rename_binders(
    e: &mut Expr,
    spec: &ProtocolSpec,
    stack: &mut Vec<String>,
    counter: &mut u32,
    repairs: &mut Vec<Repair>,
) {
    match &mut e.kind {
        ExprKind::Quant { var, body, .. } => {
            *counter += 1;
            let fresh = format!("v{counter}");
            if spec.is_spec_name(var) {
                repairs.push(Repair { original: var.clone(), renamed: fresh.clone() });
            }
            *var = fresh.clone();
            stack.push(fresh);
            rename_binders(body, spec, stack, counter, repairs);
            stack.pop();
        }
        ExprKind::Bound(idx, name) => {
            let pos = stack.len() - 1 - *idx as usize;
            *name = stack[pos].clone();
        }
        _ => {
            // Recurse into all children uniformly.
            let mut visit = |c: &mut Expr| rename_binders(c, spec, stack, counter, repairs);
            match &mut e.kind {
                ExprKind::Not(a) => visit(a),
                ExprKind::And(xs) | ExprKind::Or(xs) => xs.iter_mut().for_each(visit),
                ExprKind::Implies(a, b)
                | ExprKind::Iff(a, b)
                | ExprKind::Eq(a, b)
                | ExprKind::In(a, b)
                | ExprKind::Subseteq(a, b)
                | ExprKind::Union(a, b)
                | ExprKind::Inter(a, b)
                | ExprKind::Diff(a, b) => {
                    visit(a);
                    visit(b);
                }
                ExprKind::SetLit { elems, .. } => elems.iter_mut().for_each(visit),
                ExprKind::MapApp { map, key } => {
                    visit(map);
                    visit(key);
                }
                ExprKind::MapUpdate { map, key, val } => {
                    visit(map);
                    visit(key);
                    visit(val);
                }
                _ => {}
            }
        }
    }
}
