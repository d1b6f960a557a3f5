//! Packed protocol states and their canonical JSON form.

use crate::instance::{mask_width, FieldKind, GroundInstance};
use crate::spec_lang::ast::VarId;

use super::value::Value;

/// A total assignment to all state variables, packed into 64 bits according
/// to the instance's [`crate::instance::StateLayout`]. Numeric order equals
/// the canonical state order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct State(pub u64);

impl State {
    pub fn get(self, inst: &GroundInstance, v: VarId) -> Value {
        let f = inst.layout.field(v);
        let raw = (self.0 >> f.offset) & mask_width(f.width);
        match f.kind {
            FieldKind::Bool => Value::Bool(raw == 1),
            FieldKind::Elem(s) => Value::Elem(s, raw as u8),
            FieldKind::Set(s) => Value::Set(s, raw),
            FieldKind::Map { key, cod } => Value::Map {
                key,
                cod,
                packed: raw,
                entry_width: f.entry_width,
                entry_count: f.entry_count,
            },
        }
    }

    pub fn with(self, inst: &GroundInstance, v: VarId, val: Value) -> State {
        let f = inst.layout.field(v);
        let mask = mask_width(f.width) << f.offset;
        State((self.0 & !mask) | (val.encode() << f.offset))
    }

    /// Canonical JSON object: variable names as keys (serde_json sorts object
    /// keys), set values as arrays in element order, maps as objects.
    pub fn to_json(self, inst: &GroundInstance) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        for (vi, (name, _)) in inst.spec.variables.iter().enumerate() {
            let val = self.get(inst, VarId(vi as u32));
            obj.insert(name.clone(), value_to_json(val, inst));
        }
        serde_json::Value::Object(obj)
    }

    /// Compact single-line rendering used in human-facing logs.
    pub fn render(self, inst: &GroundInstance) -> String {
        serde_json::to_string(&self.to_json(inst)).expect("state JSON serializes")
    }
}

pub fn value_to_json(val: Value, inst: &GroundInstance) -> serde_json::Value {
    use serde_json::Value as J;
    match val {
        Value::Bool(b) => J::Bool(b),
        Value::Elem(s, i) => J::String(inst.elem_name(s, i).to_string()),
        Value::Set(s, mask) => {
            let mut items = Vec::new();
            for i in 0..inst.sort(s).len() as u8 {
                if mask & (1 << i) != 0 {
                    items.push(J::String(inst.elem_name(s, i).to_string()));
                }
            }
            J::Array(items)
        }
        Value::Map { key, entry_count, .. } => {
            let mut obj = serde_json::Map::new();
            for k in 0..entry_count as u8 {
                obj.insert(
                    inst.elem_name(key, k).to_string(),
                    value_to_json(val.map_get(k), inst),
                );
            }
            J::Object(obj)
        }
    }
}

/// Parse a state back from its canonical JSON object (used by replay checks
/// and tests).
pub fn state_from_json(
    j: &serde_json::Value,
    inst: &GroundInstance,
) -> Result<State, String> {
    let obj = j.as_object().ok_or("state JSON must be an object")?;
    let mut st = State(0);
    for (vi, (name, ty)) in inst.spec.variables.iter().enumerate() {
        let raw = obj.get(name).ok_or_else(|| format!("missing variable '{name}'"))?;
        let sorts = &inst.sorts;
        let elem_index = |s: crate::spec_lang::ast::SortId, n: &str| -> Option<u8> {
            sorts[s.idx()].elems.iter().position(|e| e == n).map(|i| i as u8)
        };
        let val = crate::instance::json_to_value(raw, *ty, sorts, &elem_index)?;
        st = st.with(inst, VarId(vi as u32), val);
    }
    if obj.len() != inst.spec.variables.len() {
        return Err("state JSON mentions unknown variables".into());
    }
    Ok(st)
}
