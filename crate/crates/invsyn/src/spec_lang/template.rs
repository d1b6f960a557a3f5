//! Quantifier-template extraction: collect every quantifier prefix used in a
//! spec, canonicalized and deduplicated modulo bound-variable renaming.

use std::collections::HashSet;

use super::ast::{Expr, ExprKind, ProtocolSpec, QuantKind, QuantifierTemplate, SortId};

/// Every quantifier prefix occurring in init, the actions (guards then
/// updates, declaration order), and safety — first occurrence order, no two
/// alpha-equivalent.
pub fn extract_quantifier_templates(spec: &ProtocolSpec) -> Vec<QuantifierTemplate> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    walk(&spec.init, &mut out, &mut seen);
    for a in &spec.actions {
        walk(&a.guard, &mut out, &mut seen);
        for u in a.updates.iter().flatten() {
            walk(u, &mut out, &mut seen);
        }
    }
    walk(&spec.safety, &mut out, &mut seen);
    out
}

fn walk(
    e: &Expr,
    out: &mut Vec<QuantifierTemplate>,
    seen: &mut HashSet<Vec<(QuantKind, SortId)>>,
) {
    if let ExprKind::Quant { .. } = e.kind {
        // Collect the maximal quantifier chain starting here. Binder names are
        // irrelevant: the prefix is (quantifier kind, sort) pairs only, which
        // makes deduplication alpha-insensitive by construction.
        let mut prefix = Vec::new();
        let mut cur = e;
        while let ExprKind::Quant { kind, sort, body, .. } = &cur.kind {
            let s = sort.expect("templates are extracted from resolved specs");
            prefix.push((*kind, s));
            cur = body;
        }
        if seen.insert(prefix.clone()) {
            out.push(QuantifierTemplate { prefix });
        }
        walk(cur, out, seen);
    } else {
        e.for_each_child(|c| walk(c, out, seen));
    }
}
