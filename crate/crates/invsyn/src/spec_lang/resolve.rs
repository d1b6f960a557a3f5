//! Name resolution and bidirectional type checking.
//!
//! Resolution rewrites `Ident` nodes into variable/constant/bound/sort/element
//! references and checks types in one pass. A quantifier binder shadows any
//! spec-level name; such collisions are tolerated here (clause normalization
//! renames the binder and records the repair) unless a shadowed occurrence
//! only type-checks under the spec-level reading — that role ambiguity is an
//! unrepairable scope error.

use std::collections::BTreeMap;

use crate::diag::{Diagnostic, DiagnosticKind, Span};

use super::ast::{
    Action, Expr, ExprKind, MapCod, ProtocolSpec, SortId, VarId, VarType,
};
use super::parser::{RawSpec, RawStmt, RawType};

/// Concrete element names in scope when clauses are parsed against a ground
/// instance (aggregate blocking clauses mention literal elements).
#[derive(Debug, Clone, Default)]
pub struct ElemTable {
    by_name: BTreeMap<String, (SortId, u8)>,
}

impl ElemTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: String, sort: SortId, index: u8) {
        self.by_name.insert(name, (sort, index));
    }

    pub fn lookup(&self, name: &str) -> Option<(SortId, u8)> {
        self.by_name.get(name).copied()
    }
}

pub(super) enum RErr {
    /// An empty set literal whose element sort the context did not determine.
    Ambiguous(Span),
    Diag(Diagnostic),
}

impl From<Diagnostic> for RErr {
    fn from(d: Diagnostic) -> Self {
        RErr::Diag(d)
    }
}

fn ambiguous_to_diag(e: RErr) -> Diagnostic {
    match e {
        RErr::Ambiguous(sp) => Diagnostic::type_err(
            sp,
            "cannot infer the element sort of {} in this context".to_string(),
        ),
        RErr::Diag(d) => d,
    }
}

struct Binder {
    name: String,
    sort: SortId,
    /// Binder name collides with a spec-level name (repairable by renaming).
    collides: bool,
}

pub(super) struct Resolver<'a> {
    sorts: &'a [String],
    consts: &'a [(String, VarType)],
    vars: &'a [(String, VarType)],
    action_names: &'a [String],
    elements: Option<&'a ElemTable>,
    binders: Vec<Binder>,
}

impl<'a> Resolver<'a> {
    pub fn for_spec_parts(
        sorts: &'a [String],
        consts: &'a [(String, VarType)],
        vars: &'a [(String, VarType)],
        action_names: &'a [String],
    ) -> Self {
        Resolver { sorts, consts, vars, action_names, elements: None, binders: Vec::new() }
    }

    pub fn for_clause(
        spec: &'a ProtocolSpec,
        action_names: &'a [String],
        elements: Option<&'a ElemTable>,
    ) -> Self {
        Resolver {
            sorts: &spec.sorts,
            consts: &spec.constants,
            vars: &spec.variables,
            action_names,
            elements,
            binders: Vec::new(),
        }
    }

    fn display_ty(&self, t: VarType) -> String {
        match t {
            VarType::Bool => "BOOL".to_string(),
            VarType::Elem(s) => self.sorts[s.idx()].clone(),
            VarType::SetOf(s) => format!("SET {}", self.sorts[s.idx()]),
            VarType::Map { key, cod } => {
                let c = match cod {
                    MapCod::Bool => "BOOL".to_string(),
                    MapCod::Elem(s) => self.sorts[s.idx()].clone(),
                };
                format!("MAP {} {}", self.sorts[key.idx()], c)
            }
        }
    }

    fn sort_id(&self, name: &str) -> Option<SortId> {
        self.sorts.iter().position(|s| s == name).map(|i| SortId(i as u32))
    }

    /// Type of the spec-level reading of `name`, if it has one.
    fn entity_type(&self, name: &str) -> Option<VarType> {
        if let Some(i) = self.vars.iter().position(|(n, _)| n == name) {
            return Some(self.vars[i].1);
        }
        if let Some(i) = self.consts.iter().position(|(n, _)| n == name) {
            return Some(self.consts[i].1);
        }
        if let Some(s) = self.sort_id(name) {
            return Some(VarType::SetOf(s));
        }
        if let Some((s, _)) = self.elements.and_then(|t| t.lookup(name)) {
            return Some(VarType::Elem(s));
        }
        None
    }

    fn is_spec_name(&self, name: &str) -> bool {
        self.entity_type(name).is_some() || self.action_names.iter().any(|a| a == name)
    }

    fn check(
        &self,
        span: Span,
        actual: VarType,
        exp: Option<VarType>,
        collision_alt: Option<(&str, VarType)>,
    ) -> Result<VarType, RErr> {
        match exp {
            None => Ok(actual),
            Some(x) if x == actual => Ok(actual),
            Some(x) => {
                if let Some((name, alt_ty)) = collision_alt {
                    if alt_ty == x {
                        return Err(Diagnostic::new(
                            DiagnosticKind::UnrepairableScope,
                            Some(span),
                            format!(
                                "'{name}' is bound by an enclosing quantifier (type {}) but this \
                                 occurrence only type-checks as the spec-level '{name}' (type {}); \
                                 cannot disambiguate its role",
                                self.display_ty(actual),
                                self.display_ty(alt_ty)
                            ),
                        )
                        .into());
                    }
                }
                Err(Diagnostic::type_err(
                    span,
                    format!("expected {}, found {}", self.display_ty(x), self.display_ty(actual)),
                )
                .into())
            }
        }
    }

    /// If `e` is a bound-variable occurrence whose binder collides with a
    /// spec-level name, return that spec-level reading's type.
    fn collision_root_alt(&self, e: &Expr) -> Option<(String, VarType)> {
        if let ExprKind::Bound(idx, name) = &e.kind {
            let pos = self.binders.len().checked_sub(1 + *idx as usize)?;
            if self.binders[pos].collides {
                return self.entity_type(name).map(|t| (name.clone(), t));
            }
        }
        None
    }

    fn unrepairable(&self, span: Span, name: &str, bound_ty: VarType, alt_ty: VarType) -> RErr {
        Diagnostic::new(
            DiagnosticKind::UnrepairableScope,
            Some(span),
            format!(
                "'{name}' is bound by an enclosing quantifier (type {}) but this occurrence \
                 only type-checks as the spec-level '{name}' (type {}); cannot disambiguate \
                 its role",
                self.display_ty(bound_ty),
                self.display_ty(alt_ty)
            ),
        )
        .into()
    }

    /// Require a set type from an already-resolved operand, detecting the
    /// bound-vs-free ambiguity when the operand is a colliding binder use.
    fn require_set_for(&self, e: &Expr, t: VarType) -> Result<SortId, RErr> {
        match t {
            VarType::SetOf(s) => Ok(s),
            other => {
                if let Some((name, alt)) = self.collision_root_alt(e) {
                    if matches!(alt, VarType::SetOf(_)) {
                        return Err(self.unrepairable(e.span, &name, other, alt));
                    }
                }
                Err(Diagnostic::type_err(
                    e.span,
                    format!("expected a set, found {}", self.display_ty(other)),
                )
                .into())
            }
        }
    }

    fn require_elem(&self, t: VarType, span: Span) -> Result<SortId, RErr> {
        match t {
            VarType::Elem(s) => Ok(s),
            other => Err(Diagnostic::type_err(
                span,
                format!("expected a sort element, found {}", self.display_ty(other)),
            )
            .into()),
        }
    }

    /// Resolve both operands of a same-sort set operator, inferring the sort
    /// from whichever side determines it.
    fn two_phase_set(
        &mut self,
        a: &mut Expr,
        b: &mut Expr,
        hint: Option<VarType>,
    ) -> Result<SortId, RErr> {
        match self.resolve(a, hint) {
            Ok(t) => {
                let s = self.require_set_for(a, t)?;
                self.resolve(b, Some(VarType::SetOf(s)))?;
                Ok(s)
            }
            Err(RErr::Ambiguous(sp)) => match self.resolve(b, hint) {
                Ok(t) => {
                    let s = self.require_set_for(b, t)?;
                    self.resolve(a, Some(VarType::SetOf(s)))?;
                    Ok(s)
                }
                Err(RErr::Ambiguous(_)) => Err(RErr::Ambiguous(sp)),
                Err(d) => Err(d),
            },
            Err(d) => Err(d),
        }
    }

    /// Resolve both sides of an equality: infer one side, check the other.
    /// When checking fails and the inferred side was a colliding binder use,
    /// retry under its spec-level reading to detect role ambiguity.
    fn two_phase_eq(&mut self, a: &mut Expr, b: &mut Expr) -> Result<(), RErr> {
        match self.resolve(a, None) {
            Ok(t) => {
                if let Err(e1) = self.resolve(b, Some(t)) {
                    if let RErr::Diag(_) = &e1 {
                        if let Some((name, alt)) = self.collision_root_alt(a) {
                            if alt != t && self.resolve(b, Some(alt)).is_ok() {
                                return Err(self.unrepairable(a.span, &name, t, alt));
                            }
                        }
                    }
                    return Err(e1);
                }
                Ok(())
            }
            Err(RErr::Ambiguous(_)) => {
                let t = self.resolve(b, None).map_err(|er| RErr::Diag(ambiguous_to_diag(er)))?;
                if let Err(e1) = self.resolve(a, Some(t)) {
                    if let RErr::Diag(_) = &e1 {
                        if let Some((name, alt)) = self.collision_root_alt(b) {
                            if alt != t && self.resolve(a, Some(alt)).is_ok() {
                                return Err(self.unrepairable(b.span, &name, t, alt));
                            }
                        }
                    }
                    return Err(e1);
                }
                Ok(())
            }
            Err(d) => Err(d),
        }
    }

    fn lookup_ident(&self, name: &str, span: Span) -> Result<(ExprKind, VarType, bool), RErr> {
        if let Some(pos) = self.binders.iter().rposition(|b| b.name == name) {
            let idx = (self.binders.len() - 1 - pos) as u32;
            let b = &self.binders[pos];
            return Ok((ExprKind::Bound(idx, name.to_string()), VarType::Elem(b.sort), b.collides));
        }
        if let Some(i) = self.vars.iter().position(|(n, _)| n == name) {
            return Ok((ExprKind::Var(VarId(i as u32), name.to_string()), self.vars[i].1, false));
        }
        if let Some(i) = self.consts.iter().position(|(n, _)| n == name) {
            return Ok((
                ExprKind::Const(super::ast::ConstId(i as u32), name.to_string()),
                self.consts[i].1,
                false,
            ));
        }
        if let Some(s) = self.sort_id(name) {
            return Ok((ExprKind::SortSet(s, name.to_string()), VarType::SetOf(s), false));
        }
        if let Some((s, i)) = self.elements.and_then(|t| t.lookup(name)) {
            return Ok((
                ExprKind::ElemLit { sort: s, index: i, name: name.to_string() },
                VarType::Elem(s),
                false,
            ));
        }
        if self.action_names.iter().any(|a| a == name) {
            return Err(Diagnostic::name_err(
                span,
                format!("action name '{name}' cannot be used in an expression"),
            )
            .into());
        }
        Err(Diagnostic::name_err(span, format!("unresolved identifier '{name}'")).into())
    }

    pub(super) fn resolve(&mut self, e: &mut Expr, exp: Option<VarType>) -> Result<VarType, RErr> {
        let span = e.span;
        // Rewrite unresolved identifiers first; the rewrite must end the
        // borrow of the old kind before the dispatch below.
        if matches!(e.kind, ExprKind::Ident(_)) {
            let name = match &e.kind {
                ExprKind::Ident(n) => n.clone(),
                _ => unreachable!(),
            };
            let (new_kind, actual, collides) = self.lookup_ident(&name, span)?;
            e.kind = new_kind;
            let alt =
                if collides { self.entity_type(&name).map(|t| (name.as_str(), t)) } else { None };
            return self.check(span, actual, exp, alt);
        }
        let mut collision_alt_name: Option<String> = None;
        let actual: VarType = match &mut e.kind {
            ExprKind::True | ExprKind::False => VarType::Bool,
            ExprKind::Ident(_) => unreachable!("handled above"),
            ExprKind::Var(id, _) => self.vars[id.idx()].1,
            ExprKind::Const(id, _) => self.consts[id.idx()].1,
            ExprKind::Bound(idx, name) => {
                let pos = self
                    .binders
                    .len()
                    .checked_sub(1 + *idx as usize)
                    .ok_or_else(|| Diagnostic::name_err(span, "dangling bound variable"))?;
                let b = &self.binders[pos];
                if b.collides {
                    collision_alt_name = Some(name.clone());
                }
                VarType::Elem(b.sort)
            }
            ExprKind::ElemLit { sort, .. } => VarType::Elem(*sort),
            ExprKind::SortSet(s, _) => VarType::SetOf(*s),
            ExprKind::Not(a) => {
                self.resolve(a, Some(VarType::Bool))?;
                VarType::Bool
            }
            ExprKind::And(xs) | ExprKind::Or(xs) => {
                for x in xs {
                    self.resolve(x, Some(VarType::Bool))?;
                }
                VarType::Bool
            }
            ExprKind::Implies(a, b) | ExprKind::Iff(a, b) => {
                self.resolve(a, Some(VarType::Bool))?;
                self.resolve(b, Some(VarType::Bool))?;
                VarType::Bool
            }
            ExprKind::Quant { var, sort, sort_name, body, .. } => {
                let sid = self.sort_id(sort_name).ok_or_else(|| {
                    Diagnostic::name_err(
                        span,
                        format!("quantifier domain '{sort_name}' is not a declared sort"),
                    )
                })?;
                *sort = Some(sid);
                let collides = self.is_spec_name(var);
                self.binders.push(Binder { name: var.clone(), sort: sid, collides });
                let r = self.resolve(body, Some(VarType::Bool));
                self.binders.pop();
                r?;
                VarType::Bool
            }
            ExprKind::Eq(a, b) => {
                self.two_phase_eq(a, b)?;
                VarType::Bool
            }
            ExprKind::In(a, b) => {
                match self.resolve(b, None) {
                    Ok(t) => {
                        let s = self.require_set_for(b, t)?;
                        self.resolve(a, Some(VarType::Elem(s)))?;
                    }
                    Err(RErr::Ambiguous(_)) => {
                        let t = self.resolve(a, None).map_err(|er| ambiguous_to_diag(er))?;
                        let s = self.require_elem(t, a.span)?;
                        self.resolve(b, Some(VarType::SetOf(s)))?;
                    }
                    Err(d) => return Err(d),
                }
                VarType::Bool
            }
            ExprKind::Subseteq(a, b) => {
                self.two_phase_set(a, b, None)?;
                VarType::Bool
            }
            ExprKind::Union(a, b) | ExprKind::Inter(a, b) | ExprKind::Diff(a, b) => {
                let hint = match exp {
                    Some(VarType::SetOf(s)) => Some(VarType::SetOf(s)),
                    _ => None,
                };
                let s = self.two_phase_set(a, b, hint)?;
                VarType::SetOf(s)
            }
            ExprKind::SetLit { sort, elems } => {
                if let Some(s) = *sort {
                    for x in elems {
                        self.resolve(x, Some(VarType::Elem(s)))?;
                    }
                    VarType::SetOf(s)
                } else if elems.is_empty() {
                    match exp {
                        Some(VarType::SetOf(s)) => {
                            *sort = Some(s);
                            VarType::SetOf(s)
                        }
                        Some(other) => {
                            return Err(Diagnostic::type_err(
                                span,
                                format!(
                                    "expected {}, found a set literal",
                                    self.display_ty(other)
                                ),
                            )
                            .into())
                        }
                        None => return Err(RErr::Ambiguous(span)),
                    }
                } else {
                    let hint = match exp {
                        Some(VarType::SetOf(s)) => Some(VarType::Elem(s)),
                        _ => None,
                    };
                    let t0 = self.resolve(&mut elems[0], hint)?;
                    let first_span = elems[0].span;
                    let s = self.require_elem(t0, first_span)?;
                    for x in elems.iter_mut().skip(1) {
                        self.resolve(x, Some(VarType::Elem(s)))?;
                    }
                    *sort = Some(s);
                    VarType::SetOf(s)
                }
            }
            ExprKind::MapApp { map, key } => {
                let tm = self.resolve(map, None).map_err(ambiguous_to_diag)?;
                let (k, cod) = match tm {
                    VarType::Map { key, cod } => (key, cod),
                    other => {
                        return Err(Diagnostic::type_err(
                            map.span,
                            format!("cannot index a value of type {}", self.display_ty(other)),
                        )
                        .into())
                    }
                };
                self.resolve(key, Some(VarType::Elem(k)))?;
                cod.as_var_type()
            }
            ExprKind::MapUpdate { map, key, val } => {
                let tm = self.resolve(map, None).map_err(ambiguous_to_diag)?;
                let (k, cod) = match tm {
                    VarType::Map { key, cod } => (key, cod),
                    other => {
                        return Err(Diagnostic::type_err(
                            map.span,
                            format!(
                                "EXCEPT requires a map, found {}",
                                self.display_ty(other)
                            ),
                        )
                        .into())
                    }
                };
                self.resolve(key, Some(VarType::Elem(k)))?;
                self.resolve(val, Some(cod.as_var_type()))?;
                tm
            }
        };
        let alt = collision_alt_name
            .as_deref()
            .and_then(|n| self.entity_type(n).map(|t| (n, t)));
        self.check(span, actual, exp, alt)
    }
}

// ---------------------------------------------------------------------------
// Spec assembly.
// ---------------------------------------------------------------------------

fn resolve_raw_type(rt: &RawType, sorts: &[String]) -> Result<VarType, Diagnostic> {
    let lookup = |name: &str, span: Span| -> Result<SortId, Diagnostic> {
        sorts
            .iter()
            .position(|s| s == name)
            .map(|i| SortId(i as u32))
            .ok_or_else(|| Diagnostic::name_err(span, format!("unknown sort '{name}'")))
    };
    Ok(match rt {
        RawType::Bool => VarType::Bool,
        RawType::Named(n, sp) => VarType::Elem(lookup(n, *sp)?),
        RawType::SetOf(n, sp) => VarType::SetOf(lookup(n, *sp)?),
        RawType::Map { key, key_span, cod } => {
            let k = lookup(key, *key_span)?;
            let c = match cod.as_ref() {
                RawType::Bool => MapCod::Bool,
                RawType::Named(n, sp) => MapCod::Elem(lookup(n, *sp)?),
                _ => unreachable!("parser restricts map codomain to BOOL or sort"),
            };
            VarType::Map { key: k, cod: c }
        }
    })
}

fn mk_conjunction(mut parts: Vec<Expr>, span: Span) -> Expr {
    match parts.len() {
        0 => Expr::new(ExprKind::True, span),
        1 => parts.pop().unwrap(),
        _ => {
            let mut flat = Vec::new();
            for p in parts {
                match p.kind {
                    ExprKind::And(xs) => flat.extend(xs),
                    _ => flat.push(p),
                }
            }
            Expr::new(ExprKind::And(flat), span)
        }
    }
}

pub(super) fn resolve_spec(raw: RawSpec, name: String) -> Result<ProtocolSpec, Vec<Diagnostic>> {
    let mut diags: Vec<Diagnostic> = Vec::new();

    // Sorts.
    let mut sorts: Vec<String> = Vec::new();
    for (s, sp) in &raw.sorts {
        if sorts.contains(s) {
            diags.push(Diagnostic::name_err(*sp, format!("duplicate sort '{s}'")));
        } else {
            sorts.push(s.clone());
        }
    }

    // Constants and variables, with pairwise-disjoint names.
    let mut constants: Vec<(String, VarType)> = Vec::new();
    let mut variables: Vec<(String, VarType)> = Vec::new();
    let claim = |name: &str,
                     span: Span,
                     what: &str,
                     sorts: &[String],
                     constants: &[(String, VarType)],
                     variables: &[(String, VarType)],
                     diags: &mut Vec<Diagnostic>|
     -> bool {
        let taken = sorts.iter().any(|s| s == name)
            || constants.iter().any(|(n, _)| n == name)
            || variables.iter().any(|(n, _)| n == name);
        if taken {
            diags.push(Diagnostic::name_err(
                span,
                format!("{what} '{name}' collides with another declared name"),
            ));
            false
        } else {
            true
        }
    };
    for (n, rt, sp) in &raw.consts {
        let ok = claim(n, *sp, "constant", &sorts, &constants, &variables, &mut diags);
        match resolve_raw_type(rt, &sorts) {
            Ok(t) => {
                if ok {
                    constants.push((n.clone(), t));
                }
            }
            Err(d) => diags.push(d),
        }
    }
    for (n, rt, sp) in &raw.vars {
        let ok = claim(n, *sp, "variable", &sorts, &constants, &variables, &mut diags);
        match resolve_raw_type(rt, &sorts) {
            Ok(t) => {
                if ok {
                    variables.push((n.clone(), t));
                }
            }
            Err(d) => diags.push(d),
        }
    }

    // Action name table (disjoint from the value namespace).
    let mut action_names: Vec<String> = Vec::new();
    for a in &raw.actions {
        if action_names.contains(&a.name) {
            diags.push(Diagnostic::name_err(a.span, format!("duplicate action '{}'", a.name)));
        } else if sorts.iter().any(|s| s == &a.name)
            || constants.iter().any(|(n, _)| n == &a.name)
            || variables.iter().any(|(n, _)| n == &a.name)
        {
            diags.push(Diagnostic::name_err(
                a.span,
                format!("action '{}' collides with another declared name", a.name),
            ));
        } else {
            action_names.push(a.name.clone());
        }
    }

    let dummy_true = Expr::new(ExprKind::True, Span::new(1, 1));

    // INIT and SAFETY.
    let mut init = match raw.init {
        Some(e) => e,
        None => {
            diags.push(Diagnostic::new(DiagnosticKind::Syntax, None, "missing INIT section"));
            dummy_true.clone()
        }
    };
    let mut safety = match raw.safety {
        Some(e) => e,
        None => {
            diags.push(Diagnostic::new(DiagnosticKind::Syntax, None, "missing SAFETY section"));
            dummy_true.clone()
        }
    };
    {
        let mut r = Resolver::for_spec_parts(&sorts, &constants, &variables, &action_names);
        if let Err(e) = r.resolve(&mut init, Some(VarType::Bool)) {
            diags.push(ambiguous_to_diag(e));
        }
        let mut r = Resolver::for_spec_parts(&sorts, &constants, &variables, &action_names);
        if let Err(e) = r.resolve(&mut safety, Some(VarType::Bool)) {
            diags.push(ambiguous_to_diag(e));
        }
    }

    // Actions.
    let mut actions: Vec<Action> = Vec::new();
    for ra in raw.actions {
        let mut params: Vec<(String, SortId)> = Vec::new();
        let mut param_ok = true;
        for (pname, psort, psp) in &ra.params {
            let sid = match sorts.iter().position(|s| s == psort) {
                Some(i) => SortId(i as u32),
                None => {
                    diags.push(Diagnostic::name_err(*psp, format!("unknown sort '{psort}'")));
                    param_ok = false;
                    continue;
                }
            };
            if params.iter().any(|(n, _)| n == pname) {
                diags.push(Diagnostic::name_err(
                    *psp,
                    format!("duplicate parameter '{pname}' in action '{}'", ra.name),
                ));
                param_ok = false;
                continue;
            }
            if sorts.iter().any(|s| s == pname)
                || constants.iter().any(|(n, _)| n == pname)
                || variables.iter().any(|(n, _)| n == pname)
                || action_names.iter().any(|n| n == pname)
            {
                diags.push(Diagnostic::name_err(
                    *psp,
                    format!("parameter '{pname}' collides with a declared name"),
                ));
                param_ok = false;
                continue;
            }
            params.push((pname.clone(), sid));
        }
        if !param_ok {
            continue;
        }

        let mut requires: Vec<Expr> = Vec::new();
        let mut updates: Vec<Option<Expr>> = vec![None; variables.len()];
        let mut seen: Vec<Option<Span>> = vec![None; variables.len()];
        let mut body_ok = true;

        let mark = |var: &str, span: Span, seen: &mut Vec<Option<Span>>, diags: &mut Vec<Diagnostic>| -> Option<usize> {
            let Some(i) = variables.iter().position(|(n, _)| n == var) else {
                diags.push(Diagnostic::name_err(
                    span,
                    format!("'{var}' is not a state variable"),
                ));
                return None;
            };
            if seen[i].is_some() {
                diags.push(Diagnostic::type_err(
                    span,
                    format!("variable '{var}' has more than one update/UNCHANGED entry in action '{}'", ra.name),
                ));
                return None;
            }
            seen[i] = Some(span);
            Some(i)
        };

        for stmt in ra.stmts {
            match stmt {
                RawStmt::Require(e) => requires.push(e),
                RawStmt::Update { var, span, rhs } => {
                    if let Some(i) = mark(&var, span, &mut seen, &mut diags) {
                        updates[i] = Some(rhs);
                    } else {
                        body_ok = false;
                    }
                }
                RawStmt::Unchanged(names) => {
                    for (var, span) in names {
                        if mark(&var, span, &mut seen, &mut diags).is_none() {
                            body_ok = false;
                        }
                        // UNCHANGED leaves updates[i] = None.
                    }
                }
            }
        }

        for (i, s) in seen.iter().enumerate() {
            if s.is_none() {
                diags.push(Diagnostic::type_err(
                    ra.span,
                    format!(
                        "action '{}' must update or list UNCHANGED for variable '{}'",
                        ra.name, variables[i].0
                    ),
                ));
                body_ok = false;
            }
        }

        let mut guard = mk_conjunction(requires, ra.span);
        {
            let mut r = Resolver::for_spec_parts(&sorts, &constants, &variables, &action_names);
            for (pname, sid) in &params {
                r.binders.push(Binder { name: pname.clone(), sort: *sid, collides: false });
            }
            if let Err(e) = r.resolve(&mut guard, Some(VarType::Bool)) {
                diags.push(ambiguous_to_diag(e));
                body_ok = false;
            }
            for (i, u) in updates.iter_mut().enumerate() {
                if let Some(rhs) = u {
                    let want = variables[i].1;
                    if let Err(e) = r.resolve(rhs, Some(want)) {
                        diags.push(ambiguous_to_diag(e));
                        body_ok = false;
                    }
                }
            }
        }

        if body_ok {
            actions.push(Action { name: ra.name, params, guard, updates, span: ra.span });
        }
    }

    if diags.is_empty() {
        Ok(ProtocolSpec { name, sorts, constants, variables, init, actions, safety })
    } else {
        Err(diags)
    }
}

/// Resolve and type-check a standalone clause expression against a spec.
pub(super) fn resolve_clause_expr(
    e: &mut Expr,
    spec: &ProtocolSpec,
    elements: Option<&ElemTable>,
) -> Result<(), Vec<Diagnostic>> {
    let action_names: Vec<String> = spec.actions.iter().map(|a| a.name.clone()).collect();
    let mut r = Resolver::for_clause(spec, &action_names, elements);
    match r.resolve(e, Some(VarType::Bool)) {
        Ok(_) => Ok(()),
        Err(err) => Err(vec![ambiguous_to_diag(err)]),
    }
}
