//! Expression and action evaluation over concrete packed states.

use crate::instance::{mask_width, GroundInstance};
use crate::spec_lang::ast::{Expr, ExprKind, QuantKind};

use super::state::State;
use super::value::Value;

/// Evaluate `expr` on `state`. `bindings` is the bound-variable environment:
/// values pushed outermost-first, so a de Bruijn index `i` reads
/// `bindings[len-1-i]`. Callers evaluating closed expressions pass an empty
/// (reusable) vector.
pub fn eval(expr: &Expr, state: State, inst: &GroundInstance, bindings: &mut Vec<Value>) -> Value {
    match &expr.kind {
        ExprKind::True => Value::Bool(true),
        ExprKind::False => Value::Bool(false),
        ExprKind::Var(v, _) => state.get(inst, *v),
        ExprKind::Const(c, _) => inst.consts[c.idx()],
        ExprKind::Bound(idx, _) => bindings[bindings.len() - 1 - *idx as usize],
        ExprKind::ElemLit { sort, index, .. } => Value::Elem(*sort, *index),
        ExprKind::SortSet(s, _) => inst.full_set(*s),
        ExprKind::Not(a) => Value::Bool(!eval(a, state, inst, bindings).as_bool()),
        ExprKind::And(xs) => {
            Value::Bool(xs.iter().all(|x| eval(x, state, inst, bindings).as_bool()))
        }
        ExprKind::Or(xs) => {
            Value::Bool(xs.iter().any(|x| eval(x, state, inst, bindings).as_bool()))
        }
        ExprKind::Implies(a, b) => Value::Bool(
            !eval(a, state, inst, bindings).as_bool() || eval(b, state, inst, bindings).as_bool(),
        ),
        ExprKind::Iff(a, b) => Value::Bool(
            eval(a, state, inst, bindings).as_bool() == eval(b, state, inst, bindings).as_bool(),
        ),
        ExprKind::Quant { kind, sort, body, .. } => {
            let s = sort.expect("evaluation requires a resolved expression");
            let n = inst.sort(s).len() as u8;
            let forall = matches!(kind, QuantKind::Forall);
            for i in 0..n {
                bindings.push(Value::Elem(s, i));
                let holds = eval(body, state, inst, bindings).as_bool();
                bindings.pop();
                if holds != forall {
                    return Value::Bool(!forall);
                }
            }
            Value::Bool(forall)
        }
        ExprKind::Eq(a, b) => {
            Value::Bool(eval(a, state, inst, bindings) == eval(b, state, inst, bindings))
        }
        ExprKind::In(a, b) => {
            let (_, i) = eval(a, state, inst, bindings).as_elem();
            let m = eval(b, state, inst, bindings).as_set_mask();
            Value::Bool(m & (1 << i) != 0)
        }
        ExprKind::Subseteq(a, b) => {
            let ma = eval(a, state, inst, bindings).as_set_mask();
            let mb = eval(b, state, inst, bindings).as_set_mask();
            Value::Bool(ma & !mb == 0)
        }
        ExprKind::Union(a, b) => set_op(a, b, state, inst, bindings, |x, y| x | y),
        ExprKind::Inter(a, b) => set_op(a, b, state, inst, bindings, |x, y| x & y),
        ExprKind::Diff(a, b) => set_op(a, b, state, inst, bindings, |x, y| x & !y),
        ExprKind::SetLit { sort, elems } => {
            let s = sort.expect("evaluation requires a resolved expression");
            let mut mask = 0u64;
            for e in elems {
                let (_, i) = eval(e, state, inst, bindings).as_elem();
                mask |= 1 << i;
            }
            Value::Set(s, mask)
        }
        ExprKind::MapApp { map, key } => {
            let m = eval(map, state, inst, bindings);
            let (_, k) = eval(key, state, inst, bindings).as_elem();
            m.map_get(k)
        }
        ExprKind::MapUpdate { map, key, val } => {
            let m = eval(map, state, inst, bindings);
            let (_, k) = eval(key, state, inst, bindings).as_elem();
            let v = eval(val, state, inst, bindings);
            m.map_set(k, v)
        }
        ExprKind::Ident(n) => unreachable!("unresolved identifier '{n}' reached evaluation"),
    }
}

fn set_op(
    a: &Expr,
    b: &Expr,
    state: State,
    inst: &GroundInstance,
    bindings: &mut Vec<Value>,
    f: impl Fn(u64, u64) -> u64,
) -> Value {
    let va = eval(a, state, inst, bindings);
    let mb = eval(b, state, inst, bindings).as_set_mask();
    match va {
        Value::Set(s, ma) => {
            // Intersection/difference results stay within the sort's universe.
            let n = inst.sort(s).len() as u32;
            Value::Set(s, f(ma, mb) & mask_width(n))
        }
        other => panic!("expected a set value, got {other:?}"),
    }
}

pub fn eval_bool(expr: &Expr, state: State, inst: &GroundInstance, bindings: &mut Vec<Value>) -> bool {
    eval(expr, state, inst, bindings).as_bool()
}

/// Evaluate a closed expression (no free bound variables).
pub fn eval_closed(expr: &Expr, state: State, inst: &GroundInstance) -> Value {
    eval(expr, state, inst, &mut Vec::new())
}

pub fn eval_closed_bool(expr: &Expr, state: State, inst: &GroundInstance) -> bool {
    eval_closed(expr, state, inst).as_bool()
}

/// Apply one action under a parameter binding: `Some(successor)` when the
/// guard holds on `pre`, otherwise `None`. Updates are evaluated on `pre`;
/// `UNCHANGED` variables carry over.
pub fn eval_action(
    inst: &GroundInstance,
    action_idx: usize,
    binding: &[u8],
    pre: State,
) -> Option<State> {
    let action = &inst.spec.actions[action_idx];
    debug_assert_eq!(binding.len(), action.params.len());
    let mut env: Vec<Value> = action
        .params
        .iter()
        .zip(binding)
        .map(|((_, s), &i)| Value::Elem(*s, i))
        .collect();
    if !eval_bool(&action.guard, pre, inst, &mut env) {
        return None;
    }
    let mut post = pre;
    for (vi, upd) in action.updates.iter().enumerate() {
        if let Some(rhs) = upd {
            let v = eval(rhs, pre, inst, &mut env);
            post = post.with(inst, crate::spec_lang::ast::VarId(vi as u32), v);
        }
    }
    Some(post)
}

/// All states of the grounded universe satisfying Init, canonical order.
/// An empty result means Init is unsatisfiable (callers report it).
pub fn init_states(inst: &GroundInstance) -> Vec<State> {
    let mut out = Vec::new();
    let mut env = Vec::new();
    for st in inst.universe() {
        if eval_bool(&inst.spec.init, st, inst, &mut env) {
            out.push(st);
        }
    }
    out
}

/// All enabled (action index, binding index, successor) triples from `state`,
/// in canonical order: action declaration order, then binding order.
/// Stuttering successors (equal to `state`) are excluded.
pub fn successors(inst: &GroundInstance, state: State) -> Vec<(usize, u32, State)> {
    let mut out = Vec::new();
    for (ai, bindings) in inst.bindings.iter().enumerate() {
        for (bi, b) in bindings.iter().enumerate() {
            if let Some(post) = eval_action(inst, ai, b, state) {
                if post != state {
                    out.push((ai, bi as u32, post));
                }
            }
        }
    }
    out
}

/// Human-readable action label with its binding, e.g. `Abort(n1)`.
pub fn action_label(inst: &GroundInstance, action_idx: usize, binding_idx: u32) -> String {
    let action = &inst.spec.actions[action_idx];
    let binding = &inst.bindings[action_idx][binding_idx as usize];
    if binding.is_empty() {
        return action.name.clone();
    }
    let args: Vec<&str> = action
        .params
        .iter()
        .zip(binding)
        .map(|((_, s), &i)| inst.elem_name(*s, i))
        .collect();
    format!("{}({})", action.name, args.join(", "))
}
