//! Concrete-state evaluation: values, packed states, expression semantics,
//! initial-state enumeration, and one-step successors.

pub mod eval;
pub mod state;
pub mod value;

pub use eval::{
    action_label, eval, eval_action, eval_bool, eval_closed, eval_closed_bool, init_states,
    successors,
};
pub use state::{state_from_json, value_to_json, State};
pub use value::Value;
