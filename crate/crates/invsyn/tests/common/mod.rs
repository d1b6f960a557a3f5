//! Brute-force oracles shared by the integration suites.
//!
//! Everything in this module is deliberately naive: straight enumeration over
//! the full grounded universe with no caching, no update inversion, and no
//! ordering shortcuts. The only code shared with the main engines is the
//! parser/evaluator base layer, so engine verdicts can be checked against an
//! independent computation path.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use invsyn::evaluator::{eval_closed_bool, init_states, successors, State};
use invsyn::instance::{ground, GroundInstance, InstanceConfig};
use invsyn::spec_lang::parse_spec_named;
use invsyn::Expr;

/// Directory holding the bundled benchmark corpus.
pub fn benchmarks_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../benchmarks")
        .canonicalize()
        .expect("benchmarks directory exists")
}

/// Load and ground a bundled benchmark (`spec_file` + `cfg_file` are names
/// inside the benchmarks directory).
pub fn load_instance(spec_file: &str, cfg_file: &str) -> GroundInstance {
    let dir = benchmarks_dir();
    let text = std::fs::read_to_string(dir.join(spec_file))
        .unwrap_or_else(|e| panic!("read {spec_file}: {e}"));
    let name = spec_file.trim_end_matches(".spec");
    let spec = parse_spec_named(&text, name)
        .unwrap_or_else(|d| panic!("parse {spec_file}: {:?}", d));
    let cfg_text = std::fs::read_to_string(dir.join(cfg_file))
        .unwrap_or_else(|e| panic!("read {cfg_file}: {e}"));
    let cfg = InstanceConfig::from_json(&cfg_text)
        .unwrap_or_else(|d| panic!("parse {cfg_file}: {:?}", d));
    ground(&spec, &cfg).unwrap_or_else(|d| panic!("ground {spec_file}: {:?}", d))
}

/// Parse, resolve, and normalize a clause against an instance's spec and
/// element names.
pub fn clause(inst: &GroundInstance, text: &str) -> Expr {
    invsyn::spec_lang::parse_clause_with_elements(text, &inst.spec, &inst.elem_table())
        .unwrap_or_else(|d| panic!("parse clause {text:?}: {:?}", d))
}

/// Build a state from a full JSON object (every variable present).
pub fn state_of(inst: &GroundInstance, json: serde_json::Value) -> State {
    invsyn::evaluator::state_from_json(&json, inst)
        .unwrap_or_else(|d| panic!("state from json: {:?}", d))
}

/// A frame as the oracles see it: either exactly the initial states (level 0)
/// or a conjunction of formulas (Safety plus zero or more clauses).
pub enum OracleFrame<'a> {
    Init,
    Formula(Vec<&'a Expr>),
}

impl OracleFrame<'_> {
    pub fn holds(&self, s: State, inst: &GroundInstance) -> bool {
        match self {
            OracleFrame::Init => eval_closed_bool(&inst.spec.init, s, inst),
            OracleFrame::Formula(parts) => parts.iter().all(|e| eval_closed_bool(e, s, inst)),
        }
    }
}

/// Safety-plus-clauses frame formula.
pub fn frame_formula<'a>(inst: &'a GroundInstance, clauses: &'a [Expr]) -> OracleFrame<'a> {
    let mut parts: Vec<&'a Expr> = vec![&inst.spec.safety];
    parts.extend(clauses.iter());
    OracleFrame::Formula(parts)
}

/// Naive reachability: repeated full passes over the accumulated set until no
/// new state appears.
pub fn oracle_reachable(inst: &GroundInstance) -> BTreeSet<State> {
    let mut reach: BTreeSet<State> = init_states(inst).into_iter().collect();
    loop {
        let mut fresh: Vec<State> = Vec::new();
        for &s in &reach {
            for (_, _, t) in successors(inst, s) {
                if !reach.contains(&t) {
                    fresh.push(t);
                }
            }
        }
        if fresh.is_empty() {
            return reach;
        }
        reach.extend(fresh);
    }
}

/// Breadth-first depth map (state -> least step count from an initial state);
/// independent of the explorer's implementation.
pub fn oracle_depths(inst: &GroundInstance) -> BTreeMap<State, u32> {
    let mut depth: BTreeMap<State, u32> = BTreeMap::new();
    let mut level: Vec<State> = init_states(inst);
    for &s in &level {
        depth.insert(s, 0);
    }
    let mut d = 0;
    while !level.is_empty() {
        d += 1;
        let mut next: Vec<State> = Vec::new();
        for &s in &level {
            for (_, _, t) in successors(inst, s) {
                if !depth.contains_key(&t) {
                    depth.insert(t, d);
                    next.push(t);
                }
            }
        }
        level = next;
    }
    depth
}

/// Full one-step transition relation, edge by edge over the whole universe.
pub struct EdgeMap {
    pub succ: BTreeMap<State, Vec<State>>,
    pub pred: BTreeMap<State, Vec<State>>,
}

pub fn oracle_edges(inst: &GroundInstance) -> EdgeMap {
    assert!(
        inst.universe_size <= 200_000,
        "oracle edge map is only meant for small universes"
    );
    let mut succ: BTreeMap<State, Vec<State>> = BTreeMap::new();
    let mut pred: BTreeMap<State, Vec<State>> = BTreeMap::new();
    for s in inst.universe() {
        let mut ts: Vec<State> = successors(inst, s).into_iter().map(|(_, _, t)| t).collect();
        ts.sort();
        ts.dedup();
        for &t in &ts {
            pred.entry(t).or_default().push(s);
        }
        succ.insert(s, ts);
    }
    // Universe iteration is ascending, so predecessor lists arrive sorted.
    EdgeMap { succ, pred }
}

/// Smallest non-excluded frame state with a Safety-violating successor.
pub fn oracle_frontier(
    inst: &GroundInstance,
    frame: &OracleFrame,
    excluded: &BTreeSet<State>,
) -> Option<State> {
    for s in inst.universe() {
        if excluded.contains(&s) || !frame.holds(s, inst) {
            continue;
        }
        if successors(inst, s)
            .iter()
            .any(|&(_, _, t)| !eval_closed_bool(&inst.spec.safety, t, inst))
        {
            return Some(s);
        }
    }
    None
}

/// Smallest frame state with `bad` among its successors, by straight scan.
pub fn oracle_predecessor_scan(
    inst: &GroundInstance,
    bad: State,
    below: &OracleFrame,
) -> Option<State> {
    for s in inst.universe() {
        if !below.holds(s, inst) {
            continue;
        }
        if successors(inst, s).iter().any(|&(_, _, t)| t == bad) {
            return Some(s);
        }
    }
    None
}

/// Same verdict as `oracle_predecessor_scan` but via a prebuilt edge map
/// (for high-volume randomized agreement runs).
pub fn oracle_predecessor_edges(
    inst: &GroundInstance,
    bad: State,
    below: &OracleFrame,
    edges: &EdgeMap,
) -> Option<State> {
    edges
        .pred
        .get(&bad)?
        .iter()
        .copied()
        .find(|&p| below.holds(p, inst))
}

pub enum OracleAdmission {
    Pass,
    InitViolation(State),
    ConsecutionViolation(State, State),
}

/// Admission check: every initial state satisfies the clause, and no
/// transition from a (frame-below AND clause) state reaches a state violating
/// the clause. Violations are reported canonically smallest first, initial
/// violations taking precedence.
pub fn oracle_admission(
    inst: &GroundInstance,
    clause: &Expr,
    below: &OracleFrame,
) -> OracleAdmission {
    for s in init_states(inst) {
        if !eval_closed_bool(clause, s, inst) {
            return OracleAdmission::InitViolation(s);
        }
    }
    for s in inst.universe() {
        if !below.holds(s, inst) || !eval_closed_bool(clause, s, inst) {
            continue;
        }
        let mut worst: Option<State> = None;
        for (_, _, t) in successors(inst, s) {
            if !eval_closed_bool(clause, t, inst) {
                worst = Some(match worst {
                    Some(w) if w <= t => w,
                    _ => t,
                });
            }
        }
        if let Some(t) = worst {
            return OracleAdmission::ConsecutionViolation(s, t);
        }
    }
    OracleAdmission::Pass
}

/// Push check: smallest frame state with a successor violating the clause.
/// The caller includes the clause itself in the frame formula, mirroring the
/// fact that a pushed clause is already a member of its frame.
pub fn oracle_push(inst: &GroundInstance, clause: &Expr, frame: &OracleFrame) -> Option<State> {
    for s in inst.universe() {
        if !frame.holds(s, inst) {
            continue;
        }
        if successors(inst, s)
            .iter()
            .any(|&(_, _, t)| !eval_closed_bool(clause, t, inst))
        {
            return Some(s);
        }
    }
    None
}

/// Three-condition inductive-invariant verdict over the full universe.
pub struct InvariantVerdict {
    pub init_ok: bool,
    pub consecution_ok: bool,
    pub implies_safety_ok: bool,
    pub init_witness: Option<State>,
    pub consecution_witness: Option<(State, State)>,
    pub safety_witness: Option<State>,
}

impl InvariantVerdict {
    pub fn all_ok(&self) -> bool {
        self.init_ok && self.consecution_ok && self.implies_safety_ok
    }
}

pub fn oracle_invariant(inst: &GroundInstance, clauses: &[Expr]) -> InvariantVerdict {
    let holds = |s: State| clauses.iter().all(|c| eval_closed_bool(c, s, inst));
    let mut v = InvariantVerdict {
        init_ok: true,
        consecution_ok: true,
        implies_safety_ok: true,
        init_witness: None,
        consecution_witness: None,
        safety_witness: None,
    };
    for s in init_states(inst) {
        if !holds(s) {
            v.init_ok = false;
            v.init_witness = Some(s);
            break;
        }
    }
    for s in inst.universe() {
        if !holds(s) {
            continue;
        }
        if v.implies_safety_ok && !eval_closed_bool(&inst.spec.safety, s, inst) {
            v.implies_safety_ok = false;
            v.safety_witness = Some(s);
        }
        if v.consecution_ok {
            for (_, _, t) in successors(inst, s) {
                if !holds(t) {
                    v.consecution_ok = false;
                    v.consecution_witness = Some((s, t));
                    break;
                }
            }
        }
        if !v.consecution_ok && !v.implies_safety_ok {
            break;
        }
    }
    v
}

/// True iff the clause list is an inductive invariant for the instance.
pub fn oracle_is_inductive(inst: &GroundInstance, clauses: &[Expr]) -> bool {
    oracle_invariant(inst, clauses).all_ok()
}

/// Smallest consecution counterexample whose post-state violates one
/// particular clause of the invariant: pre satisfies the whole invariant,
/// post fails `target`.
pub fn oracle_consecution_for_clause(
    inst: &GroundInstance,
    inv: &[Expr],
    target: &Expr,
) -> Option<(State, State)> {
    for s in inst.universe() {
        if !inv.iter().all(|c| eval_closed_bool(c, s, inst)) {
            continue;
        }
        let mut worst: Option<State> = None;
        for (_, _, t) in successors(inst, s) {
            if !eval_closed_bool(target, t, inst) {
                worst = Some(match worst {
                    Some(w) if w <= t => w,
                    _ => t,
                });
            }
        }
        if let Some(t) = worst {
            return Some((s, t));
        }
    }
    None
}

/// First Safety-violating reachable state, if any, with its BFS depth.
pub fn oracle_violation(inst: &GroundInstance) -> Option<(State, u32)> {
    let depths = oracle_depths(inst);
    depths
        .iter()
        .filter(|(s, _)| !eval_closed_bool(&inst.spec.safety, **s, inst))
        .map(|(s, d)| (*s, *d))
        .min_by_key(|&(s, d)| (d, s))
}
