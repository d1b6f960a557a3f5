//! Finite grounding of a protocol spec: concrete sort elements, constant
//! values, a packed 64-bit state layout, and enumeration of the state
//! universe and action-parameter bindings.
//!
//! Packing discipline (the canonical value encoding):
//!   * variables are packed in ascending name order, the first name in the
//!     most significant bits;
//!   * booleans are one bit (FALSE=0), elements their index, sets a bitmask
//!     with element `i` at bit `i`, maps one fixed-width entry per key with
//!     key 0 in the entry's most significant position;
//! so the numeric order of packed states equals the canonical state order
//! (lexicographic by variable name, then by value encoding).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::diag::Diagnostic;
use crate::evaluator::value::Value;
use crate::spec_lang::ast::{MapCod, ProtocolSpec, SortId, VarId, VarType};
use crate::spec_lang::ElemTable;

/// Finite instance description: concrete elements per sort and concrete
/// values for declared constants.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct InstanceConfig {
    #[serde(default)]
    pub sorts: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub constants: BTreeMap<String, serde_json::Value>,
}

impl InstanceConfig {
    pub fn from_json(text: &str) -> Result<Self, Diagnostic> {
        serde_json::from_str(text)
            .map_err(|e| Diagnostic::config(format!("invalid instance config JSON: {e}")))
    }
}

/// Concrete elements of one sort; element index = position in `elems`.
#[derive(Debug, Clone)]
pub struct SortInfo {
    pub name: String,
    pub elems: Vec<String>,
}

impl SortInfo {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Bool,
    Elem(SortId),
    Set(SortId),
    Map { key: SortId, cod: MapCod },
}

/// One packed field (one state variable).
#[derive(Debug, Clone, Copy)]
pub struct FieldInfo {
    pub var: VarId,
    pub kind: FieldKind,
    /// Bit position of the field's least significant bit.
    pub offset: u32,
    pub width: u32,
    /// Number of valid packed values of this field.
    pub domain: u128,
    /// Map fields: bits per entry and number of entries; zero otherwise.
    pub entry_width: u32,
    pub entry_count: u32,
}

/// Packed-state layout for all variables.
#[derive(Debug, Clone)]
pub struct StateLayout {
    /// Indexed by `VarId`.
    pub fields: Vec<FieldInfo>,
    pub total_bits: u32,
    /// Odometer digits in ascending bit position (least significant first):
    /// (offset, width, domain). Map fields contribute one digit per entry.
    digits: Vec<(u32, u32, u64)>,
}

impl StateLayout {
    pub fn field(&self, v: VarId) -> &FieldInfo {
        &self.fields[v.idx()]
    }

    /// Bitmask covering the field of `v`.
    pub fn var_mask(&self, v: VarId) -> u64 {
        let f = &self.fields[v.idx()];
        mask_width(f.width) << f.offset
    }

    /// True when `packed` encodes a state inside the grounded universe
    /// (every field value within its domain).
    pub fn valid(&self, packed: u64) -> bool {
        if self.total_bits < 64 && (packed >> self.total_bits) != 0 {
            return false;
        }
        self.digits.iter().all(|&(off, w, dom)| ((packed >> off) & mask_width(w)) < dom)
    }

    /// The packed state at `rank` in canonical (ascending) order.
    pub fn state_at_rank(&self, mut rank: u128) -> u64 {
        let mut packed = 0u64;
        for &(off, _w, dom) in &self.digits {
            let d = (rank % dom as u128) as u64;
            rank /= dom as u128;
            packed |= d << off;
        }
        debug_assert_eq!(rank, 0, "rank out of range");
        packed
    }

    /// Inverse of [`state_at_rank`].
    pub fn rank_of(&self, packed: u64) -> u128 {
        let mut rank = 0u128;
        let mut scale = 1u128;
        for &(off, w, dom) in &self.digits {
            let d = (packed >> off) & mask_width(w);
            rank += d as u128 * scale;
            scale *= dom as u128;
        }
        rank
    }
}

pub fn mask_width(w: u32) -> u64 {
    if w >= 64 {
        u64::MAX
    } else {
        (1u64 << w) - 1
    }
}

fn ceil_log2(n: u64) -> u32 {
    debug_assert!(n >= 1);
    64 - (n - 1).leading_zeros().min(64)
}

/// A fully grounded finite instance.
#[derive(Debug, Clone)]
pub struct GroundInstance {
    pub spec: ProtocolSpec,
    /// Indexed by `SortId`.
    pub sorts: Vec<SortInfo>,
    /// Indexed by `ConstId`.
    pub consts: Vec<Value>,
    pub layout: StateLayout,
    /// Product of all per-variable domain sizes.
    pub universe_size: u128,
    /// Per action (declaration order): all parameter bindings in canonical
    /// order (first parameter varies slowest); a binding is one element index
    /// per parameter.
    pub bindings: Vec<Vec<Vec<u8>>>,
    /// Per action: bitmask of the packed fields the action writes
    /// (variables with an update expression).
    pub write_masks: Vec<u64>,
}

impl GroundInstance {
    pub fn sort(&self, s: SortId) -> &SortInfo {
        &self.sorts[s.idx()]
    }

    pub fn elem_name(&self, s: SortId, index: u8) -> &str {
        &self.sorts[s.idx()].elems[index as usize]
    }

    /// Full-sort set value.
    pub fn full_set(&self, s: SortId) -> Value {
        Value::Set(s, mask_width(self.sorts[s.idx()].len() as u32))
    }

    /// Element table for clause parsing at instance scope.
    pub fn elem_table(&self) -> ElemTable {
        let mut t = ElemTable::new();
        for (si, info) in self.sorts.iter().enumerate() {
            for (ei, name) in info.elems.iter().enumerate() {
                t.insert(name.clone(), SortId(si as u32), ei as u8);
            }
        }
        t
    }

    /// Iterate the full grounded universe in canonical (ascending) order.
    pub fn universe(&self) -> UniverseIter<'_> {
        UniverseIter { layout: &self.layout, next: Some(0), remaining: self.universe_size }
    }

    /// (variable name, domain size) pairs in declaration order.
    pub fn domain_report(&self) -> Vec<(String, u128)> {
        self.spec
            .variables
            .iter()
            .zip(&self.layout.fields)
            .map(|((n, _), f)| (n.clone(), f.domain))
            .collect()
    }
}

/// Odometer over the packed-state universe; amortized O(1) per step.
pub struct UniverseIter<'a> {
    layout: &'a StateLayout,
    next: Option<u64>,
    remaining: u128,
}

impl Iterator for UniverseIter<'_> {
    type Item = crate::evaluator::State;

    fn next(&mut self) -> Option<crate::evaluator::State> {
        let cur = self.next?;
        if self.remaining == 0 {
            self.next = None;
            return None;
        }
        self.remaining -= 1;
        // Advance the odometer: bump the least significant digit, carrying.
        let mut s = cur;
        let mut advanced = false;
        for &(off, _w, dom) in &self.layout.digits {
            let d = (s >> off) & mask_width(_w);
            if d + 1 < dom {
                s += 1 << off;
                advanced = true;
                break;
            }
            s -= d << off; // reset digit to zero, carry on
        }
        self.next = if advanced { Some(s) } else { None };
        Some(crate::evaluator::State(cur))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (n, Some(n))
    }
}

// ---------------------------------------------------------------------------
// Grounding.
// ---------------------------------------------------------------------------

fn is_valid_elem_name(s: &str) -> bool {
    let mut chars = s.chars();
    let Some(c0) = chars.next() else { return false };
    if !(c0.is_ascii_alphabetic() || c0 == '_') {
        return false;
    }
    if !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return false;
    }
    // Keywords cannot be element names (they would not re-parse).
    !matches!(
        s,
        "SORT"
            | "CONST"
            | "VAR"
            | "INIT"
            | "ACTION"
            | "SAFETY"
            | "REQUIRE"
            | "UNCHANGED"
            | "SET"
            | "MAP"
            | "BOOL"
            | "TRUE"
            | "FALSE"
            | "EXCEPT"
    )
}

/// Ground `spec` with the concrete instance `cfg`.
pub fn ground(spec: &ProtocolSpec, cfg: &InstanceConfig) -> Result<GroundInstance, Vec<Diagnostic>> {
    let mut diags: Vec<Diagnostic> = Vec::new();

    // Sorts.
    let mut sorts: Vec<SortInfo> = Vec::with_capacity(spec.sorts.len());
    let mut seen_elems: BTreeMap<&str, &str> = BTreeMap::new(); // elem -> sort
    for name in &spec.sorts {
        match cfg.sorts.get(name) {
            None => diags.push(Diagnostic::config(format!(
                "missing sort '{name}' in instance config"
            ))),
            Some(elems) if elems.is_empty() => diags.push(Diagnostic::config(format!(
                "sort '{name}' has no elements in instance config"
            ))),
            Some(elems) => {
                if elems.len() > 64 {
                    diags.push(Diagnostic::config(format!(
                        "sort '{name}' has {} elements; at most 64 are supported",
                        elems.len()
                    )));
                    continue;
                }
                let mut ok = true;
                for e in elems {
                    if !is_valid_elem_name(e) {
                        diags.push(Diagnostic::config(format!(
                            "element name '{e}' of sort '{name}' is not a valid identifier"
                        )));
                        ok = false;
                    } else if elems.iter().filter(|x| *x == e).count() > 1 {
                        diags.push(Diagnostic::config(format!(
                            "duplicate element '{e}' in sort '{name}'"
                        )));
                        ok = false;
                        break;
                    } else if let Some(other) = seen_elems.insert(e, name) {
                        diags.push(Diagnostic::config(format!(
                            "element '{e}' appears in both sort '{other}' and sort '{name}'"
                        )));
                        ok = false;
                    } else if spec.is_spec_name(e) {
                        diags.push(Diagnostic::config(format!(
                            "element name '{e}' collides with a declared spec name"
                        )));
                        ok = false;
                    }
                }
                if ok {
                    sorts.push(SortInfo { name: name.clone(), elems: elems.clone() });
                }
            }
        }
    }
    for extra in cfg.sorts.keys() {
        if !spec.sorts.contains(extra) {
            diags.push(Diagnostic::config(format!(
                "instance config mentions unknown sort '{extra}'"
            )));
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }

    let sort_len = |s: SortId| sorts[s.idx()].len() as u64;
    let elem_index = |s: SortId, name: &str| -> Option<u8> {
        sorts[s.idx()].elems.iter().position(|e| e == name).map(|i| i as u8)
    };

    // Constants.
    let mut consts: Vec<Value> = Vec::with_capacity(spec.constants.len());
    for (cname, cty) in &spec.constants {
        let Some(raw) = cfg.constants.get(cname) else {
            diags.push(Diagnostic::config(format!(
                "missing constant '{cname}' in instance config"
            )));
            continue;
        };
        match json_to_value(raw, *cty, &sorts, &elem_index) {
            Ok(v) => consts.push(v),
            Err(msg) => diags.push(Diagnostic::config(format!("constant '{cname}': {msg}"))),
        }
    }
    for extra in cfg.constants.keys() {
        if spec.const_id(extra).is_none() {
            diags.push(Diagnostic::config(format!(
                "instance config mentions unknown constant '{extra}'"
            )));
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }

    // Packed layout: name-sorted variables, first name most significant.
    let mut by_name: Vec<usize> = (0..spec.variables.len()).collect();
    by_name.sort_by(|&a, &b| spec.variables[a].0.cmp(&spec.variables[b].0));

    let mut fields: Vec<Option<FieldInfo>> = vec![None; spec.variables.len()];
    let mut offset = 0u32;
    for &vi in by_name.iter().rev() {
        let (_, ty) = &spec.variables[vi];
        let (kind, width, domain, entry_width, entry_count) = match *ty {
            VarType::Bool => (FieldKind::Bool, 1, 2u128, 0, 0),
            VarType::Elem(s) => {
                let n = sort_len(s);
                (FieldKind::Elem(s), ceil_log2(n), n as u128, 0, 0)
            }
            VarType::SetOf(s) => {
                let n = sort_len(s) as u32;
                (FieldKind::Set(s), n, 1u128 << n, 0, 0)
            }
            VarType::Map { key, cod } => {
                let klen = sort_len(key) as u32;
                let cod_dom = match cod {
                    MapCod::Bool => 2u64,
                    MapCod::Elem(s) => sort_len(s),
                };
                let per = ceil_log2(cod_dom);
                let domain = (cod_dom as u128).pow(klen);
                (FieldKind::Map { key, cod }, per * klen, domain, per, klen)
            }
        };
        fields[vi] = Some(FieldInfo {
            var: VarId(vi as u32),
            kind,
            offset,
            width,
            domain,
            entry_width,
            entry_count,
        });
        offset += width;
    }
    let total_bits = offset;
    if total_bits > 64 {
        return Err(vec![Diagnostic::config(format!(
            "instance needs {total_bits} bits of packed state; the engine supports at most 64 \
             (choose smaller sorts)"
        ))]);
    }
    let fields: Vec<FieldInfo> = fields.into_iter().map(|f| f.unwrap()).collect();

    // Odometer digits, ascending bit position.
    let mut digits: Vec<(u32, u32, u64)> = Vec::new();
    for f in &fields {
        match f.kind {
            FieldKind::Map { cod, .. } => {
                // One digit per entry; entry for key k sits at
                // offset + (entry_count-1-k)*entry_width. Ascending-offset
                // order means descending key index, which is fine: digits
                // only need to cover the field, not mirror key order.
                let cod_dom = match cod {
                    MapCod::Bool => 2,
                    MapCod::Elem(s) => sort_len(s),
                };
                for e in 0..f.entry_count {
                    digits.push((f.offset + e * f.entry_width, f.entry_width, cod_dom));
                }
            }
            _ => digits.push((f.offset, f.width, f.domain as u64)),
        }
    }
    digits.sort_by_key(|&(off, _, _)| off);
    // Fields of width zero (1-element domains) contribute nothing to
    // enumeration; drop them from the digit list.
    digits.retain(|&(_, w, _)| w > 0);

    let layout = StateLayout { fields, total_bits, digits };
    let universe_size: u128 = layout.fields.iter().map(|f| f.domain).product();

    // Action bindings (first parameter varies slowest) and write masks.
    let mut bindings: Vec<Vec<Vec<u8>>> = Vec::with_capacity(spec.actions.len());
    let mut write_masks: Vec<u64> = Vec::with_capacity(spec.actions.len());
    for a in &spec.actions {
        let mut combos: Vec<Vec<u8>> = vec![Vec::new()];
        for (_, s) in &a.params {
            let n = sort_len(*s) as u8;
            let mut next = Vec::with_capacity(combos.len() * n as usize);
            for c in &combos {
                for e in 0..n {
                    let mut c2 = c.clone();
                    c2.push(e);
                    next.push(c2);
                }
            }
            combos = next;
        }
        bindings.push(combos);
        let mut mask = 0u64;
        for (vi, u) in a.updates.iter().enumerate() {
            if u.is_some() {
                mask |= layout.var_mask(VarId(vi as u32));
            }
        }
        write_masks.push(mask);
    }

    Ok(GroundInstance {
        spec: spec.clone(),
        sorts,
        consts,
        layout,
        universe_size,
        bindings,
        write_masks,
    })
}

pub(crate) fn json_to_value(
    raw: &serde_json::Value,
    ty: VarType,
    sorts: &[SortInfo],
    elem_index: &dyn Fn(SortId, &str) -> Option<u8>,
) -> Result<Value, String> {
    use serde_json::Value as J;
    match ty {
        VarType::Bool => match raw {
            J::Bool(b) => Ok(Value::Bool(*b)),
            _ => Err("expected true or false".into()),
        },
        VarType::Elem(s) => match raw {
            J::String(name) => elem_index(s, name)
                .map(|i| Value::Elem(s, i))
                .ok_or_else(|| format!("'{name}' is not an element of sort {}", sorts[s.idx()].name)),
            _ => Err(format!("expected an element name of sort {}", sorts[s.idx()].name)),
        },
        VarType::SetOf(s) => match raw {
            J::Array(items) => {
                let mut mask = 0u64;
                for it in items {
                    let J::String(name) = it else {
                        return Err("expected an array of element names".into());
                    };
                    let i = elem_index(s, name).ok_or_else(|| {
                        format!("'{name}' is not an element of sort {}", sorts[s.idx()].name)
                    })?;
                    if mask & (1 << i) != 0 {
                        return Err(format!("duplicate element '{name}'"));
                    }
                    mask |= 1 << i;
                }
                Ok(Value::Set(s, mask))
            }
            _ => Err("expected an array of element names".into()),
        },
        VarType::Map { key, cod } => match raw {
            J::Object(entries) => {
                let klen = sorts[key.idx()].len() as u32;
                let cod_dom = match cod {
                    MapCod::Bool => 2u64,
                    MapCod::Elem(s) => sorts[s.idx()].len() as u64,
                };
                let per = ceil_log2(cod_dom);
                let mut packed = 0u64;
                let mut covered = vec![false; klen as usize];
                for (kname, v) in entries {
                    let ki = elem_index(key, kname).ok_or_else(|| {
                        format!("'{kname}' is not an element of sort {}", sorts[key.idx()].name)
                    })?;
                    if covered[ki as usize] {
                        return Err(format!("duplicate key '{kname}'"));
                    }
                    covered[ki as usize] = true;
                    let enc = match (cod, v) {
                        (MapCod::Bool, J::Bool(b)) => *b as u64,
                        (MapCod::Elem(s), J::String(n)) => elem_index(s, n).ok_or_else(|| {
                            format!("'{n}' is not an element of sort {}", sorts[s.idx()].name)
                        })? as u64,
                        _ => return Err(format!("bad value for key '{kname}'")),
                    };
                    packed |= enc << ((klen - 1 - ki as u32) * per);
                }
                if let Some(missing) = covered.iter().position(|c| !c) {
                    return Err(format!(
                        "map must be total: missing key '{}'",
                        sorts[key.idx()].elems[missing]
                    ));
                }
                Ok(Value::Map { key, cod, packed, entry_width: per, entry_count: klen })
            }
            _ => Err("expected an object mapping keys to values".into()),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec_lang::parse_spec;

    fn spec_2var() -> ProtocolSpec {
        parse_spec(
            r"
            SORT Node
            VAR beta : SET Node
            VAR alpha : BOOL
            INIT beta = {} /\ ~alpha
            SAFETY TRUE
        ",
        )
        .unwrap()
    }

    fn cfg(json: &str) -> InstanceConfig {
        InstanceConfig::from_json(json).unwrap()
    }

    #[test]
    fn packing_is_name_sorted_first_name_most_significant() {
        let spec = spec_2var();
        let inst = ground(&spec, &cfg(r#"{"sorts": {"Node": ["n1", "n2"]}}"#)).unwrap();
        // alpha < beta, so alpha occupies the most significant bit.
        let alpha = inst.layout.field(spec.var_id("alpha").unwrap());
        let beta = inst.layout.field(spec.var_id("beta").unwrap());
        assert_eq!(beta.offset, 0);
        assert_eq!(beta.width, 2);
        assert_eq!(alpha.offset, 2);
        assert_eq!(inst.layout.total_bits, 3);
        assert_eq!(inst.universe_size, 8);
    }

    #[test]
    fn universe_iterates_in_ascending_order_and_ranks_round_trip() {
        let spec = spec_2var();
        let inst = ground(&spec, &cfg(r#"{"sorts": {"Node": ["n1", "n2", "n3"]}}"#)).unwrap();
        let states: Vec<u64> = inst.universe().map(|s| s.0).collect();
        assert_eq!(states.len(), 16);
        assert!(states.windows(2).all(|w| w[0] < w[1]));
        for (i, s) in states.iter().enumerate() {
            assert_eq!(inst.layout.rank_of(*s), i as u128);
            assert_eq!(inst.layout.state_at_rank(i as u128), *s);
            assert!(inst.layout.valid(*s));
        }
    }

    #[test]
    fn elem_variable_with_non_power_of_two_domain() {
        let spec = parse_spec(
            r"
            SORT Node
            VAR leader : Node
            INIT TRUE
            SAFETY TRUE
        ",
        )
        .unwrap();
        let inst = ground(&spec, &cfg(r#"{"sorts": {"Node": ["a", "b", "c"]}}"#)).unwrap();
        assert_eq!(inst.universe_size, 3);
        let states: Vec<u64> = inst.universe().map(|s| s.0).collect();
        assert_eq!(states, vec![0, 1, 2]);
        assert!(!inst.layout.valid(3)); // index 3 out of the 3-element domain
    }

    #[test]
    fn map_field_packs_key_zero_most_significant() {
        let spec = parse_spec(
            r"
            SORT Node
            SORT Value
            VAR vote : MAP Node Value
            INIT TRUE
            SAFETY TRUE
        ",
        )
        .unwrap();
        let inst = ground(
            &spec,
            &cfg(r#"{"sorts": {"Node": ["n1", "n2"], "Value": ["v0", "v1"]}}"#),
        )
        .unwrap();
        assert_eq!(inst.universe_size, 4);
        let f = inst.layout.field(spec.var_id("vote").unwrap());
        assert_eq!(f.entry_width, 1);
        assert_eq!(f.entry_count, 2);
        // vote[n1]=v1, vote[n2]=v0 packs as binary 10.
        let states: Vec<u64> = inst.universe().map(|s| s.0).collect();
        assert_eq!(states, vec![0b00, 0b01, 0b10, 0b11]);
    }

    #[test]
    fn validation_errors() {
        let spec = spec_2var();
        let err = ground(&spec, &cfg(r#"{"sorts": {}}"#)).unwrap_err();
        assert!(err[0].message.contains("missing sort 'Node'"));

        let err = ground(&spec, &cfg(r#"{"sorts": {"Node": []}}"#)).unwrap_err();
        assert!(err[0].message.contains("no elements"));

        let err = ground(&spec, &cfg(r#"{"sorts": {"Node": ["n1", "n1"]}}"#)).unwrap_err();
        assert!(err[0].message.contains("duplicate element"));

        let err = ground(&spec, &cfg(r#"{"sorts": {"Node": ["alpha"]}}"#)).unwrap_err();
        assert!(err[0].message.contains("collides"));

        let err = ground(&spec, &cfg(r#"{"sorts": {"Node": ["n 1"]}}"#)).unwrap_err();
        assert!(err[0].message.contains("not a valid identifier"));
    }

    #[test]
    fn constants_are_grounded() {
        let spec = parse_spec(
            r"
            SORT Node
            CONST quorum : SET Node
            CONST primary : Node
            VAR up : SET Node
            INIT up = quorum
            SAFETY primary \in up => TRUE
        ",
        )
        .unwrap();
        let inst = ground(
            &spec,
            &cfg(
                r#"{"sorts": {"Node": ["n1", "n2", "n3"]},
                    "constants": {"quorum": ["n1", "n3"], "primary": "n2"}}"#,
            ),
        )
        .unwrap();
        assert_eq!(inst.consts.len(), 2);
        assert_eq!(inst.consts[0], Value::Set(SortId(0), 0b101));
        assert_eq!(inst.consts[1], Value::Elem(SortId(0), 1));

        let err = ground(&spec, &cfg(r#"{"sorts": {"Node": ["n1"]}}"#)).unwrap_err();
        assert!(err.iter().any(|d| d.message.contains("missing constant 'quorum'")));
    }
}
