//! Concrete runtime values. `Value` is `Copy`; sets are bitmasks (element `i`
//! at bit `i`) and maps pack one fixed-width entry per key with key 0 in the
//! most significant position. The derived order therefore coincides with the
//! canonical value order used for packed states.

use crate::spec_lang::ast::{MapCod, SortId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Bool(bool),
    Elem(SortId, u8),
    Set(SortId, u64),
    Map { key: SortId, cod: MapCod, packed: u64, entry_width: u32, entry_count: u32 },
}

impl Value {
    pub fn as_bool(self) -> bool {
        match self {
            Value::Bool(b) => b,
            other => panic!("expected a boolean value, got {other:?}"),
        }
    }

    pub fn as_elem(self) -> (SortId, u8) {
        match self {
            Value::Elem(s, i) => (s, i),
            other => panic!("expected an element value, got {other:?}"),
        }
    }

    pub fn as_set_mask(self) -> u64 {
        match self {
            Value::Set(_, m) => m,
            other => panic!("expected a set value, got {other:?}"),
        }
    }

    /// The packed field encoding of this value.
    pub fn encode(self) -> u64 {
        match self {
            Value::Bool(b) => b as u64,
            Value::Elem(_, i) => i as u64,
            Value::Set(_, m) => m,
            Value::Map { packed, .. } => packed,
        }
    }

    /// Map entry for key index `k`.
    pub fn map_get(self, k: u8) -> Value {
        match self {
            Value::Map { cod, packed, entry_width, entry_count, .. } => {
                let shift = (entry_count - 1 - k as u32) * entry_width;
                let raw = (packed >> shift) & crate::instance::mask_width(entry_width);
                match cod {
                    MapCod::Bool => Value::Bool(raw == 1),
                    MapCod::Elem(s) => Value::Elem(s, raw as u8),
                }
            }
            other => panic!("expected a map value, got {other:?}"),
        }
    }

    /// Copy of this map with key index `k` set to `v`.
    pub fn map_set(self, k: u8, v: Value) -> Value {
        match self {
            Value::Map { key, cod, packed, entry_width, entry_count } => {
                let shift = (entry_count - 1 - k as u32) * entry_width;
                let mask = crate::instance::mask_width(entry_width) << shift;
                let enc = v.encode() << shift;
                Value::Map { key, cod, packed: (packed & !mask) | enc, entry_width, entry_count }
            }
            other => panic!("expected a map value, got {other:?}"),
        }
    }
}
