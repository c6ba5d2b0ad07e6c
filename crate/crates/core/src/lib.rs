//! Frequent complete subnet mining over pure condition/event nets.
//!
//! Nets are encoded as net graphs ([`netgraph`]), canonicalized with minimal
//! DFS codes ([`dfscode`]) and mined by pattern growth ([`miner`]). The
//! [`generator`] builds seeded random reservoirs and planting experiments;
//! [`oracle`] is an exhaustive reference miner for small inputs, and
//! [`extensions`] covers place/transition and inhibitor-arc nets.

pub mod dfscode;
pub mod extensions;
pub mod fixtures;
pub mod generator;
pub mod io;
pub mod label;
pub mod miner;
pub mod netgraph;
pub mod oracle;
pub mod par;
pub mod petri;

pub use label::Label;
