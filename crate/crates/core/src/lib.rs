//! Rigorous first-order round-off error analysis for straight-line
//! floating-point programs.
//!
//! The pipeline: parse a program into a deduplicated expression DAG,
//! attach a symbolic local error term at every operator site, run one
//! reverse sweep of symbolic differentiation to get each site's
//! effective path strength, assemble the mixed symbolic/concrete error
//! objective, and maximize it over the input box with an interval
//! branch-and-bound search. Large DAGs are handled incrementally by
//! abstracting internal nodes into free variables carrying concrete
//! range and error intervals. Bounds are validated empirically against
//! high-precision shadow evaluation.

pub mod interval;
pub mod ir;
pub mod abstraction;
pub mod analysis;
pub mod benchgen;
pub mod hp;
pub mod opt;
pub mod parse;
pub mod shadow;
pub mod sym;

pub use interval::{Interval, IntervalError};
pub use ir::{ExprDag, InputVar, NodeId, Op, Precision, RoundingModel};
pub use parse::{parse_program, unparse, ParseError};
