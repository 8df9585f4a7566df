//! First-order round-off error analysis over the expression DAG.
//!
//! Forward pass: every operator site generates a local error bounded by
//! |value| * factor * u. Backward pass: one reverse sweep of symbolic
//! differentiation gives each site's effective path strength (the sum
//! over all DAG paths to the output), computed per node, never per
//! path. The assembled objective is a sum of |path_strength * value|
//! terms — the absolute value goes around the canonicalized product,
//! never distributed across it — plus concrete interval contributions
//! from abstracted nodes and declared input errors.

use crate::interval::Interval;
use crate::ir::{ExprDag, NodeId, Op, Precision, RoundingModel};
use crate::opt::{self, Objective, OptConfig, OptResult};
use crate::sym::{self, build_value_exprs, Atom, SymExpr};
use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("internal: missing adjoint for node {0:?}")]
    MissingAdjoint(NodeId),
}

#[derive(Debug, Clone)]
pub struct AnalysisConfig {
    pub abstraction_enabled: bool,
    pub min_depth: u32,
    pub max_depth: u32,
    pub force_depth: Option<u32>,
    /// Canonicalization gate: expressions stay partially factored once
    /// their direct-evaluation cost passes this.
    pub max_opcount: u64,
    pub opt: OptConfig,
    /// Model inputs as carrying one rounding of their own (|x| * u).
    pub input_rounding: bool,
    pub rounding: RoundingModel,
    pub rng_seed: u64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            abstraction_enabled: false,
            min_depth: 10,
            max_depth: 20,
            force_depth: None,
            max_opcount: 8000,
            opt: OptConfig::default(),
            input_rounding: false,
            rounding: RoundingModel::default(),
            rng_seed: 0,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<(), AnalysisError> {
        if self.abstraction_enabled && !(0 < self.min_depth && self.min_depth <= self.max_depth) {
            return Err(AnalysisError::Config(format!(
                "abstraction window ({}, {}) must satisfy 0 < min <= max",
                self.min_depth, self.max_depth
            )));
        }
        if self.max_opcount == 0 {
            return Err(AnalysisError::Config("max_opcount must be positive".into()));
        }
        Ok(())
    }
}

/// Round-off generated at one operator site: magnitude |value| * factor * u.
#[derive(Debug, Clone)]
pub struct LocalError {
    pub value_expr: SymExpr,
    pub rounding_factor: f64,
    pub precision: Precision,
}

impl LocalError {
    pub fn scale(&self) -> f64 {
        self.rounding_factor * self.precision.unit_roundoff()
    }
}

/// Effective path strengths: node id -> d(output)/d(node).
pub struct AdjointMap {
    adj: Vec<Option<SymExpr>>,
    /// Local-partial accumulations performed (O(edges), not O(paths)).
    pub accumulations: u64,
}

impl AdjointMap {
    pub fn get(&self, id: NodeId) -> Option<&SymExpr> {
        self.adj.get(id.index()).and_then(|a| a.as_ref())
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct OptStats {
    pub boxes_processed: u64,
    pub queries: u64,
}

/// The maximization problem for one output: sum of |product| terms plus
/// a concrete envelope, over the input box.
pub struct ErrorObjective {
    pub terms: Vec<(f64, SymExpr)>,
    pub concrete_part: f64,
    pub env: HashMap<Atom, Interval>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputBound {
    pub name: String,
    pub abs_error_bound: f64,
    pub converged: bool,
    pub range_lo: f64,
    pub range_hi: f64,
    pub op_count: usize,
    pub stats: OptStats,
}

pub fn local_error(
    dag: &ExprDag,
    id: NodeId,
    values: &[Option<SymExpr>],
    model: &RoundingModel,
) -> LocalError {
    let node = dag.node(id);
    LocalError {
        value_expr: values[id.index()]
            .clone()
            .expect("value expression built for node"),
        rounding_factor: model.factor(node.op),
        precision: node.precision,
    }
}

/// One reverse topological sweep. `adj(output) = 1`; each node pushes
/// `adj * d(node)/d(child)` into its children, with every accumulation
/// canonicalized (and size-capped) under the gate.
pub fn reverse_adjoints(
    dag: &ExprDag,
    output: NodeId,
    values: &[Option<SymExpr>],
    gate: u64,
) -> AdjointMap {
    let mut adj: Vec<Option<SymExpr>> = vec![None; dag.nodes.len()];
    adj[output.index()] = Some(SymExpr::one());
    let mut accumulations = 0u64;
    let order = dag.reachable(output);
    for &id in order.iter().rev() {
        let Some(a) = adj[id.index()].clone() else {
            continue;
        };
        if a.is_zero() {
            continue;
        }
        let node = dag.node(id);
        for (k, &child) in node.children.iter().enumerate() {
            let partial = local_partial(node.op, k, node, values, gate);
            let contribution = a.mul(&partial, gate);
            accumulations += 1;
            let cur = adj[child.index()].take().unwrap_or_else(SymExpr::zero);
            adj[child.index()] = Some(cur.add(&contribution).capped(gate));
        }
    }
    AdjointMap { adj, accumulations }
}

fn local_partial(
    op: Op,
    child_idx: usize,
    node: &crate::ir::Node,
    values: &[Option<SymExpr>],
    gate: u64,
) -> SymExpr {
    let val = |i: usize| values[node.children[i].index()].as_ref().unwrap();
    match (op, child_idx) {
        (Op::Add, _) => SymExpr::one(),
        (Op::Sub, 0) => SymExpr::one(),
        (Op::Sub, 1) => SymExpr::one().neg(),
        (Op::Mul, 0) => val(1).clone(),
        (Op::Mul, 1) => val(0).clone(),
        (Op::Div, 0) => val(1).powi(-1, gate),
        (Op::Div, 1) => val(0).mul(&val(1).powi(-2, gate), gate).neg(),
        (Op::Neg, _) => SymExpr::one().neg(),
        (Op::Sqrt, _) => SymExpr::func(sym::FuncKind::Sqrt, val(0).clone())
            .powi(-1, gate)
            .scale(&num_rational::BigRational::new(1.into(), 2.into())),
        (Op::Exp, _) => SymExpr::func(sym::FuncKind::Exp, val(0).clone()),
        (Op::Log, _) => val(0).powi(-1, gate),
        (Op::Sin, _) => SymExpr::func(sym::FuncKind::Cos, val(0).clone()),
        (Op::Cos, _) => SymExpr::func(sym::FuncKind::Sin, val(0).clone()).neg(),
        _ => unreachable!("no partial for {op:?}"),
    }
}

/// Box environment of the program inputs (and abstraction variables).
pub fn input_env(dag: &ExprDag) -> HashMap<Atom, Interval> {
    dag.inputs
        .iter()
        .map(|v| {
            let atom = if v.is_abstract {
                sym::abs_var(&v.name)
            } else {
                sym::var(&v.name)
            };
            (atom, v.range)
        })
        .collect()
}

pub fn assemble_objective(
    dag: &ExprDag,
    output: NodeId,
    values: &[Option<SymExpr>],
    adjoints: &AdjointMap,
    cfg: &AnalysisConfig,
) -> ErrorObjective {
    let gate = cfg.max_opcount;
    let env = input_env(dag);
    let mut terms = Vec::new();
    let mut concrete = 0.0f64;
    for id in dag.reachable(output) {
        let node = dag.node(id);
        let Some(adj) = adjoints.get(id) else {
            continue;
        };
        if adj.is_zero() {
            continue;
        }
        if node.op.is_arith() {
            let le = local_error(dag, id, values, &cfg.rounding);
            if le.rounding_factor == 0.0 {
                continue;
            }
            // Canonicalize the product first, take |.| around the result.
            let product = adj.mul(&le.value_expr, gate);
            if product.is_zero() {
                continue;
            }
            terms.push((le.scale(), product));
        } else if node.op == Op::Input {
            let var = &dag.inputs[node.input_idx.unwrap()];
            let mut incoming = var.incoming_error;
            if cfg.input_rounding && !var.is_abstract {
                // One initial rounding of the input value itself.
                let sym_term = adj.mul(&values[id.index()].clone().unwrap(), gate);
                if !sym_term.is_zero() {
                    terms.push((var.precision.unit_roundoff(), sym_term));
                }
            }
            if incoming > 0.0 {
                let adj_mag = bound_abs(adj, &env, &cfg.opt);
                incoming *= adj_mag;
                concrete = (concrete + incoming).next_up();
            }
        }
    }
    ErrorObjective {
        terms,
        concrete_part: concrete,
        env,
    }
}

/// Sound bound on max |e| over the box; interval evaluation first, a
/// branch-and-bound query if the plain evaluation hits a domain hole.
fn bound_abs(e: &SymExpr, env: &HashMap<Atom, Interval>, cfg: &OptConfig) -> f64 {
    match sym::eval_interval(e, env) {
        Ok(iv) => iv.mag(),
        Err(_) => {
            let terms = [(1.0, e.clone())];
            opt::maximize(
                &Objective::AbsSum {
                    terms: &terms,
                    constant: 0.0,
                },
                env,
                cfg,
            )
            .upper
        }
    }
}

/// Full single-output pipeline on the DAG as given (no abstraction):
/// symbolic values, adjoints, objective, then two optimizer queries for
/// the range and one for the error maximum.
pub fn bound_total_error(
    dag: &ExprDag,
    output: NodeId,
    cfg: &AnalysisConfig,
) -> Result<(OutputBound, ErrorObjective), AnalysisError> {
    cfg.validate()?;
    let values = build_value_exprs(dag, &[output], cfg.max_opcount);
    bound_with_values(dag, output, &values, cfg)
}

pub fn bound_with_values(
    dag: &ExprDag,
    output: NodeId,
    values: &[Option<SymExpr>],
    cfg: &AnalysisConfig,
) -> Result<(OutputBound, ErrorObjective), AnalysisError> {
    let adjoints = reverse_adjoints(dag, output, values, cfg.max_opcount);
    if adjoints.get(output).is_none() {
        return Err(AnalysisError::MissingAdjoint(output));
    }
    let objective = assemble_objective(dag, output, values, &adjoints, cfg);
    let err = opt::maximize(
        &Objective::AbsSum {
            terms: &objective.terms,
            constant: objective.concrete_part,
        },
        &objective.env,
        &cfg.opt,
    );
    let value_expr = values[output.index()].as_ref().unwrap();
    let (range, range_converged) = opt::range(value_expr, &objective.env, &cfg.opt);
    let name = dag
        .outputs
        .iter()
        .find(|(_, id)| *id == output)
        .map(|(n, _)| n.clone())
        .unwrap_or_else(|| format!("node{}", output.0));
    Ok((
        OutputBound {
            name,
            abs_error_bound: err.upper,
            converged: err.converged && range_converged,
            range_lo: range.lo,
            range_hi: range.hi,
            op_count: dag.op_count(output),
            stats: OptStats {
                boxes_processed: err.boxes_processed,
                queries: 3,
            },
        },
        objective,
    ))
}

/// Convenience for tests and the validator: maximize |expr| over the box.
pub fn max_abs_over_box(
    e: &SymExpr,
    env: &HashMap<Atom, Interval>,
    cfg: &OptConfig,
) -> OptResult {
    let terms = [(1.0, e.clone())];
    opt::maximize(
        &Objective::AbsSum {
            terms: &terms,
            constant: 0.0,
        },
        env,
        cfg,
    )
}
