//! Explicit-state exploration: full reachable-set computation, candidate
//! screening against reachable states, bad-state coverage ranking, and trace
//! reconstruction.

use std::collections::HashMap;

use crate::evaluator::{action_label, eval_closed_bool, init_states, successors, State};
use crate::instance::GroundInstance;
use crate::spec_lang::ast::Expr;

/// Caps for [`reachable`]. Exceeding either cap stops exploration and flags
/// the result as truncated instead of failing.
#[derive(Debug, Clone, Copy)]
pub struct ExploreLimits {
    pub max_states: usize,
    pub max_depth: u32,
}

impl Default for ExploreLimits {
    fn default() -> Self {
        ExploreLimits { max_states: 50_000_000, max_depth: 100_000 }
    }
}

/// How a reachable state was first discovered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParentLink {
    pub pred: State,
    pub action: usize,
    pub binding: u32,
}

/// The reachable state set with BFS bookkeeping.
///
/// `states` is sorted in canonical order. Initial states carry no parent
/// link. `diameter` is the deepest BFS level reached; `truncated` is set when
/// a cap stopped exploration before the fixpoint.
#[derive(Debug, Clone)]
pub struct ReachSet {
    pub states: Vec<State>,
    parent: HashMap<State, ParentLink>,
    depth: HashMap<State, u32>,
    pub diameter: u32,
    pub truncated: bool,
}

/// Raised by [`trace_to`] for states outside the reachable set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateNotReachable(pub State);

impl std::fmt::Display for StateNotReachable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "state {} is not in the reachable set", self.0 .0)
    }
}

impl std::error::Error for StateNotReachable {}

impl ReachSet {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn contains(&self, s: State) -> bool {
        self.depth.contains_key(&s)
    }

    /// BFS depth of a reachable state.
    pub fn depth_of(&self, s: State) -> Option<u32> {
        self.depth.get(&s).copied()
    }

    pub fn parent_of(&self, s: State) -> Option<ParentLink> {
        self.parent.get(&s).copied()
    }
}

/// One step of a reconstructed trace: the state reached, and the action that
/// produced it from the previous step (`None` for the leading initial state).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceStep {
    pub state: State,
    pub action: Option<(usize, u32)>,
}

impl TraceStep {
    pub fn label(&self, inst: &GroundInstance) -> Option<String> {
        self.action.map(|(a, b)| action_label(inst, a, b))
    }
}

/// Breadth-first reachability from the initial states, expanding each level
/// in canonical state order so discovery order, parent links, and therefore
/// traces are deterministic.
pub fn reachable(inst: &GroundInstance, limits: &ExploreLimits) -> ReachSet {
    let mut parent: HashMap<State, ParentLink> = HashMap::new();
    let mut depth: HashMap<State, u32> = HashMap::new();
    let mut states: Vec<State> = Vec::new();
    let mut truncated = false;

    let mut level: Vec<State> = init_states(inst); // canonical order
    if level.len() > limits.max_states {
        level.truncate(limits.max_states);
        truncated = true;
    }
    for &s in &level {
        depth.insert(s, 0);
        states.push(s);
    }

    let mut d = 0;
    let mut diameter = 0;
    while !level.is_empty() {
        if d >= limits.max_depth {
            truncated = true;
            break;
        }
        d += 1;
        let mut next: Vec<State> = Vec::new();
        'expand: for &s in &level {
            for (ai, bi, t) in successors(inst, s) {
                if depth.contains_key(&t) {
                    continue;
                }
                if states.len() >= limits.max_states {
                    truncated = true;
                    break 'expand;
                }
                depth.insert(t, d);
                parent.insert(t, ParentLink { pred: s, action: ai, binding: bi });
                states.push(t);
                next.push(t);
                diameter = d;
            }
        }
        next.sort();
        level = next;
        if truncated {
            break;
        }
    }

    states.sort();
    ReachSet { states, parent, depth, diameter, truncated }
}

/// Verdict of screening candidate expressions against the reachable set:
/// indices into the input, partitioned into kept and falsified (with the
/// canonically smallest falsifying reachable state).
#[derive(Debug, Clone)]
pub struct ScreenReport {
    pub kept: Vec<usize>,
    pub falsified: Vec<(usize, State)>,
}

/// Evaluate all candidates in one pass over the reachable states. `states`
/// iterates in ascending canonical order, so the recorded witness per
/// falsified candidate is the canonical minimum.
pub fn screen_clauses(cands: &[&Expr], reach: &ReachSet, inst: &GroundInstance) -> ScreenReport {
    let mut verdict: Vec<Option<State>> = vec![None; cands.len()];
    let mut undecided = cands.len();
    'scan: for &s in &reach.states {
        for (i, cand) in cands.iter().enumerate() {
            if verdict[i].is_none() && !eval_closed_bool(cand, s, inst) {
                verdict[i] = Some(s);
                undecided -= 1;
                if undecided == 0 {
                    break 'scan;
                }
            }
        }
    }
    let mut report = ScreenReport { kept: Vec::new(), falsified: Vec::new() };
    for (i, v) in verdict.into_iter().enumerate() {
        match v {
            None => report.kept.push(i),
            Some(w) => report.falsified.push((i, w)),
        }
    }
    report
}

/// A candidate for coverage ranking: its expression and its canonical
/// normal-form text (the final tie-break).
#[derive(Debug, Clone, Copy)]
pub struct RankItem<'a> {
    pub expr: &'a Expr,
    pub key: &'a str,
}

/// Rank candidates by how many bad states they block (evaluate to FALSE on).
/// Candidates blocking none are dropped. Order: covered count descending,
/// expression node count ascending, canonical text ascending. Returns
/// `(input index, covered count)` pairs.
pub fn coverage_rank(
    items: &[RankItem<'_>],
    bad: &[State],
    inst: &GroundInstance,
) -> Vec<(usize, usize)> {
    let mut ranked: Vec<(usize, usize, usize)> = Vec::new(); // (idx, covered, size)
    for (i, it) in items.iter().enumerate() {
        let covered = bad
            .iter()
            .filter(|&&s| !eval_closed_bool(it.expr, s, inst))
            .count();
        if covered > 0 {
            ranked.push((i, covered, it.expr.node_count()));
        }
    }
    ranked.sort_by(|a, b| {
        b.1.cmp(&a.1)
            .then(a.2.cmp(&b.2))
            .then_with(|| items[a.0].key.cmp(items[b.0].key))
    });
    ranked.into_iter().map(|(i, c, _)| (i, c)).collect()
}

/// Reconstruct the init-to-state path recorded by BFS parent links.
pub fn trace_to(state: State, reach: &ReachSet) -> Result<Vec<TraceStep>, StateNotReachable> {
    if !reach.contains(state) {
        return Err(StateNotReachable(state));
    }
    let mut rev: Vec<TraceStep> = Vec::new();
    let mut cur = state;
    loop {
        match reach.parent_of(cur) {
            Some(link) => {
                rev.push(TraceStep { state: cur, action: Some((link.action, link.binding)) });
                cur = link.pred;
            }
            None => {
                rev.push(TraceStep { state: cur, action: None });
                break;
            }
        }
    }
    rev.reverse();
    Ok(rev)
}
