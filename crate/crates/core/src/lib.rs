//! Fair division of indivisible items when agents care about who receives
//! the items they do not get (externalities).
//!
//! Valuations are exact rationals ([`Value`]); an instance stores
//! `V_i(j, a)`, the value agent `i` derives from item `a` when agent `j`
//! owns it.

pub mod error;
pub mod exec;
pub mod fairness;
pub mod maxmin_rr;
pub mod model;
pub mod oracle;
pub mod three_binary;
pub mod two_agent;
pub mod value;

pub use error::{Error, Result};
pub use exec::Execution;
pub use model::{Allocation, Instance, PdmInstance, PdmOutcome};
pub use value::Value;
