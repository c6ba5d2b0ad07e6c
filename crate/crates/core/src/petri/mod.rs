//! Condition/event nets: data model, structural predicates, complete-subnet
//! closure and labeled isomorphism.

mod classify;
mod closure;
mod iso;
mod net;

pub use classify::{adjacency, validate_and_classify, SubclassReport};
pub(crate) use closure::closure_by_position;
pub use closure::{complete_closure, is_complete_subnet};
pub use iso::{invariant_key, labeled_isomorphic, labeled_isomorphic_with_limit, ISO_EVENT_LIMIT};
pub use net::{Arc, Capacity, ConditionNode, EventNode, Net, NetError, NetIndex, NodeRef};
