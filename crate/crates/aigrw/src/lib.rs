//! Q-learning guided DAG-aware AIG rewriting.
//!
//! A mutable And-Inverter Graph with structural hashing, 4-feasible cut
//! enumeration with truth tables, a rewrite engine that treats the cut
//! choice as an external action, a tabular Q-learning agent that learns
//! which cut to pick at each node, and the greedy/random/no-rewrite
//! baselines it is compared against.

pub mod aig;
pub mod cli;
pub mod cost;
pub mod cuts;
pub mod equiv;
pub mod error;
pub mod gen;
pub mod io;
pub mod literal;
pub mod rewrite;
pub mod rl;
pub mod sim;
pub mod tt;

pub use aig::{Aig, AigNode, NodeId, NodeKind};
pub use error::{Error, Result};
pub use literal::Literal;
