//! Cost-guided incremental abstraction.
//!
//! When the DAG is deeper than the configured window, whole depth
//! levels are cut: each node at the chosen depth is solved in isolation
//! for its value range and total error, then replaced by a fresh free
//! variable carrying that range and a concrete error envelope. The
//! residual (shallower) DAG is re-analyzed, repeating until a direct
//! solve fits the window.

use crate::analysis::{bound_with_values, AnalysisConfig, AnalysisError, OutputBound};
use crate::ir::{ExprDag, InputVar, Node, NodeId, Op};
use crate::sym::build_value_exprs;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;

/// Entropy-style depth weight times subexpression size times fanout.
/// Depth 0 (leaves) and depth D (outputs) both score zero, pushing cuts
/// toward the middle of the graph where reuse is the densest.
pub fn cut_cost(depth: u32, total_depth: u32, subtree_ops: f64, fanout: u32) -> f64 {
    if total_depth == 0 {
        return 0.0;
    }
    let rel = f64::from(depth) / f64::from(total_depth);
    if rel <= 0.0 || rel >= 1.0 {
        return 0.0;
    }
    let depth_info = -rel * rel.log2();
    depth_info * subtree_ops * f64::from(fanout)
}

/// Arithmetic-op count of each node's expression tree (shared nodes
/// counted per occurrence, matching the size of the node's symbolic
/// form before collection). Saturating, single bottom-up pass.
pub fn tree_op_sizes(dag: &ExprDag) -> Vec<f64> {
    let mut size = vec![0.0f64; dag.nodes.len()];
    for (i, node) in dag.nodes.iter().enumerate() {
        let mut s = if node.op.is_arith() { 1.0 } else { 0.0 };
        for c in &node.children {
            s += size[c.index()];
        }
        size[i] = s.min(1e15);
    }
    size
}

#[derive(Debug, Clone, Serialize)]
pub struct CutInfo {
    pub free_var: String,
    pub node: u32,
    pub range_lo: f64,
    pub range_hi: f64,
    pub error_bound: f64,
    pub boxes_processed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CutRound {
    pub depth_chosen: u32,
    pub dag_depth_before: u32,
    pub dag_depth_after: u32,
    pub cuts: Vec<CutInfo>,
    pub skipped: u32,
}

/// All on-path internal nodes at one depth: the level with the highest
/// mean cost in the window, or exactly `force_depth` when set.
pub fn select_cut_set(dag: &ExprDag, cfg: &AnalysisConfig) -> Option<(u32, Vec<NodeId>)> {
    let outputs = dag.output_ids();
    let on_path = dag.reachable_from(&outputs);
    let is_output = |id: NodeId| outputs.contains(&id);
    let level_nodes = |d: u32| -> Vec<NodeId> {
        on_path
            .iter()
            .copied()
            .filter(|&id| dag.depth(id) == d && dag.node(id).op.is_arith() && !is_output(id))
            .collect()
    };
    if let Some(fd) = cfg.force_depth {
        let nodes = level_nodes(fd);
        return if nodes.is_empty() { None } else { Some((fd, nodes)) };
    }
    let total_depth = dag.max_output_depth();
    let sizes = tree_op_sizes(dag);
    let mut best: Option<(f64, u32, Vec<NodeId>)> = None;
    for d in cfg.min_depth..=cfg.max_depth.min(total_depth.saturating_sub(1)) {
        let nodes = level_nodes(d);
        if nodes.is_empty() {
            continue;
        }
        let mean = nodes
            .iter()
            .map(|&id| cut_cost(d, total_depth, sizes[id.index()], dag.fanout(id)))
            .sum::<f64>()
            / nodes.len() as f64;
        // Strict `>` keeps the tie at the smaller depth.
        if best.as_ref().map_or(true, |(m, _, _)| mean > *m) {
            best = Some((mean, d, nodes));
        }
    }
    best.map(|(_, d, nodes)| (d, nodes))
}

/// Solve each cut node for its range and error, then rebuild the graph
/// with those nodes replaced by abstract inputs. Cuts whose solve comes
/// back non-finite are skipped (soundly: they stay symbolic).
pub fn abstract_round(
    dag: &ExprDag,
    depth: u32,
    cuts: &[NodeId],
    round_no: usize,
    cfg: &AnalysisConfig,
) -> Result<(ExprDag, CutRound), AnalysisError> {
    assert!(!cuts.is_empty());
    let values = build_value_exprs(dag, cuts, cfg.max_opcount);
    let direct = AnalysisConfig {
        abstraction_enabled: false,
        ..cfg.clone()
    };
    let solved: Vec<(NodeId, Result<OutputBound, AnalysisError>)> = cuts
        .par_iter()
        .map(|&v| (v, bound_with_values(dag, v, &values, &direct).map(|(b, _)| b)))
        .collect();

    let mut report = CutRound {
        depth_chosen: depth,
        dag_depth_before: dag.max_output_depth(),
        dag_depth_after: 0,
        cuts: Vec::new(),
        skipped: 0,
    };
    let mut replacements: HashMap<NodeId, InputVar> = HashMap::new();
    for (v, result) in solved {
        match result {
            Ok(b)
                if b.range_lo.is_finite()
                    && b.range_hi.is_finite()
                    && b.abs_error_bound.is_finite() =>
            {
                let name = format!("__fv{}_{}", round_no, v.0);
                report.cuts.push(CutInfo {
                    free_var: name.clone(),
                    node: v.0,
                    range_lo: b.range_lo,
                    range_hi: b.range_hi,
                    error_bound: b.abs_error_bound,
                    boxes_processed: b.stats.boxes_processed,
                });
                replacements.insert(
                    v,
                    InputVar {
                        name,
                        range: crate::interval::Interval::new(b.range_lo, b.range_hi),
                        precision: dag.node(v).precision,
                        incoming_error: b.abs_error_bound,
                        is_abstract: true,
                    },
                );
            }
            _ => {
                report.skipped += 1;
            }
        }
    }
    if replacements.is_empty() {
        // Nothing cut; signal the caller to fall back to direct solve.
        report.dag_depth_after = report.dag_depth_before;
        return Ok((dag.clone(), report));
    }

    let rebuilt = rebuild(dag, &replacements);
    report.dag_depth_after = rebuilt.max_output_depth();
    Ok((rebuilt, report))
}

fn rebuild(dag: &ExprDag, replacements: &HashMap<NodeId, InputVar>) -> ExprDag {
    let mut out = ExprDag::new();
    let mut map: HashMap<NodeId, NodeId> = HashMap::new();
    // Post-order walk from the outputs that does not descend past a
    // replaced node: everything strictly below a cut is dropped.
    let mut stack: Vec<(NodeId, bool)> =
        dag.output_ids().into_iter().rev().map(|id| (id, false)).collect();
    while let Some((id, expanded)) = stack.pop() {
        if map.contains_key(&id) {
            continue;
        }
        if let Some(var) = replacements.get(&id) {
            let new = out.add_input(var.clone());
            map.insert(id, new);
            continue;
        }
        let node: &Node = dag.node(id);
        if !expanded && !node.children.is_empty() {
            stack.push((id, true));
            for &c in node.children.iter().rev() {
                stack.push((c, false));
            }
            continue;
        }
        let new = match node.op {
            Op::Input => out.add_input(dag.inputs[node.input_idx.unwrap()].clone()),
            Op::Const => out.add_const(node.literal.unwrap(), node.precision),
            op => {
                let children = node.children.iter().map(|c| map[c]).collect();
                out.add_op(op, children, node.precision)
            }
        };
        map.insert(id, new);
    }
    out.set_outputs(
        dag.outputs
            .iter()
            .map(|(n, id)| (n.clone(), map[id]))
            .collect(),
    );
    out.finalize();
    out
}

#[derive(Debug, Serialize)]
pub struct RunResult {
    pub bounds: Vec<OutputBound>,
    pub rounds: Vec<CutRound>,
    pub fallback_direct: bool,
}

/// The incremental driver: abstract level by level while the graph is
/// deeper than the window, then solve the residual directly. With
/// abstraction disabled this is a plain direct solve.
pub fn run_incremental(dag: &ExprDag, cfg: &AnalysisConfig) -> Result<RunResult, AnalysisError> {
    cfg.validate()?;
    let mut current = dag.clone();
    let mut rounds = Vec::new();
    let mut fallback = false;
    if cfg.abstraction_enabled {
        let max_rounds = (dag.max_output_depth() / cfg.min_depth.max(1) + 2) as usize;
        for round_no in 0..max_rounds {
            if current.max_output_depth() <= cfg.max_depth {
                break;
            }
            let Some((depth, cuts)) = select_cut_set(&current, cfg) else {
                fallback = true;
                break;
            };
            let (next, report) = abstract_round(&current, depth, &cuts, round_no, cfg)?;
            let stuck = report.dag_depth_after >= report.dag_depth_before;
            rounds.push(report);
            if stuck {
                fallback = true;
                break;
            }
            current = next;
        }
    }
    let outputs = current.output_ids();
    let values = build_value_exprs(&current, &outputs, cfg.max_opcount);
    let bounds = outputs
        .par_iter()
        .map(|&out| bound_with_values(&current, out, &values, cfg).map(|(b, _)| b))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RunResult {
        bounds,
        rounds,
        fallback_direct: fallback,
    })
}
