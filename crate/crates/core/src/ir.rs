//! Deduplicated expression DAG for straight-line programs.
//!
//! Nodes are hash-consed on construction, so structurally identical
//! subexpressions share one node and fanout reflects true path
//! reconvergence. Children always have smaller indices than their
//! parents, which gives a topological order for free.

use crate::interval::{Interval, IntervalError};
use serde::Serialize;
use std::collections::HashMap;

/// Floating-point format of a node: field width picks the unit round-off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Precision {
    Fl32,
    Fl64,
}

impl Precision {
    pub fn mantissa_bits(self) -> u32 {
        match self {
            Precision::Fl32 => 24,
            Precision::Fl64 => 53,
        }
    }

    /// Half an ulp at 1: 2^(1 - p) / 2.
    pub fn unit_roundoff(self) -> f64 {
        (2f64).powi(1 - self.mantissa_bits() as i32) / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Sqrt,
    Exp,
    Log,
    Sin,
    Cos,
    Const,
    Input,
}

impl Op {
    pub fn is_arith(self) -> bool {
        !matches!(self, Op::Const | Op::Input)
    }

    pub fn arity(self) -> usize {
        match self {
            Op::Add | Op::Sub | Op::Mul | Op::Div => 2,
            Op::Neg | Op::Sqrt | Op::Exp | Op::Log | Op::Sin | Op::Cos => 1,
            Op::Const | Op::Input => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Op::Add => "add",
            Op::Sub => "sub",
            Op::Mul => "mul",
            Op::Div => "div",
            Op::Neg => "neg",
            Op::Sqrt => "sqrt",
            Op::Exp => "exp",
            Op::Log => "log",
            Op::Sin => "sin",
            Op::Cos => "cos",
            Op::Const => "const",
            Op::Input => "input",
        }
    }
}

/// Per-operator multiples of the unit round-off. Elementary arithmetic
/// and sqrt are correctly rounded (factor 1); negation, constants and
/// inputs are exact. Library transcendentals are typically within 1 ulp
/// rather than half an ulp, hence the factor-2 default; it can be raised
/// to model sloppier math libraries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundingModel {
    pub transcendental_factor: f64,
}

impl Default for RoundingModel {
    fn default() -> Self {
        RoundingModel {
            transcendental_factor: 2.0,
        }
    }
}

impl RoundingModel {
    pub fn factor(&self, op: Op) -> f64 {
        match op {
            Op::Add | Op::Sub | Op::Mul | Op::Div | Op::Sqrt => 1.0,
            Op::Neg | Op::Const | Op::Input => 0.0,
            Op::Exp | Op::Log | Op::Sin | Op::Cos => self.transcendental_factor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputVar {
    pub name: String,
    pub range: Interval,
    pub precision: Precision,
    /// Magnitude bound on error already present in the input, as a
    /// symmetric [0, b] envelope. Zero for exact inputs.
    pub incoming_error: f64,
    /// True for free variables introduced by abstraction.
    pub is_abstract: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub op: Op,
    pub children: Vec<NodeId>,
    pub precision: Precision,
    pub literal: Option<f64>,
    /// Index into `inputs` for `Op::Input` nodes.
    pub input_idx: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct ConsKey {
    op: Op,
    a: Option<NodeId>,
    b: Option<NodeId>,
    precision: Precision,
    literal_bits: Option<u64>,
    input_idx: Option<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct ExprDag {
    pub nodes: Vec<Node>,
    pub inputs: Vec<InputVar>,
    /// Output nodes in declaration order, with their program names.
    pub outputs: Vec<(String, NodeId)>,
    cons: HashMap<ConsKey, NodeId>,
    depth: Vec<u32>,
    fanout: Vec<u32>,
}

impl ExprDag {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn add_input(&mut self, var: InputVar) -> NodeId {
        let idx = self.inputs.len();
        self.inputs.push(var);
        let prec = self.inputs[idx].precision;
        self.intern(Node {
            op: Op::Input,
            children: vec![],
            precision: prec,
            literal: None,
            input_idx: Some(idx),
        })
    }

    pub fn add_const(&mut self, value: f64, precision: Precision) -> NodeId {
        self.intern(Node {
            op: Op::Const,
            children: vec![],
            precision,
            literal: Some(value),
            input_idx: None,
        })
    }

    pub fn add_op(&mut self, op: Op, children: Vec<NodeId>, precision: Precision) -> NodeId {
        debug_assert_eq!(children.len(), op.arity());
        debug_assert!(children.iter().all(|c| c.index() < self.nodes.len()));
        self.intern(Node {
            op,
            children,
            precision,
            literal: None,
            input_idx: None,
        })
    }

    fn intern(&mut self, node: Node) -> NodeId {
        let key = ConsKey {
            op: node.op,
            a: node.children.first().copied(),
            b: node.children.get(1).copied(),
            precision: node.precision,
            literal_bits: node.literal.map(f64::to_bits),
            input_idx: node.input_idx,
        };
        if let Some(&id) = self.cons.get(&key) {
            return id;
        }
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(node);
        self.cons.insert(key, id);
        self.depth.clear(); // metrics are stale
        id
    }

    pub fn set_outputs(&mut self, outputs: Vec<(String, NodeId)>) {
        self.outputs = outputs;
        self.depth.clear();
    }

    pub fn output_ids(&self) -> Vec<NodeId> {
        self.outputs.iter().map(|(_, id)| *id).collect()
    }

    fn ensure_metrics(&mut self) {
        if self.depth.len() == self.nodes.len() {
            return;
        }
        self.depth = vec![0; self.nodes.len()];
        self.fanout = vec![0; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            let mut d = 0;
            for &c in &node.children {
                d = d.max(self.depth[c.index()] + 1);
                self.fanout[c.index()] += 1;
            }
            self.depth[i] = d;
        }
    }

    /// Make sure depth/fanout caches exist; cheap if already current.
    pub fn finalize(&mut self) {
        self.ensure_metrics();
    }

    pub fn depth(&self, id: NodeId) -> u32 {
        debug_assert_eq!(self.depth.len(), self.nodes.len(), "finalize() first");
        self.depth[id.index()]
    }

    pub fn fanout(&self, id: NodeId) -> u32 {
        debug_assert_eq!(self.fanout.len(), self.nodes.len(), "finalize() first");
        self.fanout[id.index()]
    }

    pub fn max_output_depth(&self) -> u32 {
        self.outputs
            .iter()
            .map(|&(_, id)| self.depth(id))
            .max()
            .unwrap_or(0)
    }

    /// Nodes reachable from `root`, ascending order.
    pub fn reachable(&self, root: NodeId) -> Vec<NodeId> {
        self.reachable_from(&[root])
    }

    pub fn reachable_from(&self, roots: &[NodeId]) -> Vec<NodeId> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack: Vec<NodeId> = roots.to_vec();
        while let Some(id) = stack.pop() {
            if seen[id.index()] {
                continue;
            }
            seen[id.index()] = true;
            stack.extend(self.node(id).children.iter().copied());
        }
        (0..self.nodes.len() as u32)
            .map(NodeId)
            .filter(|id| seen[id.index()])
            .collect()
    }

    /// Arithmetic nodes reachable from `root`, each shared node once.
    pub fn op_count(&self, root: NodeId) -> usize {
        self.reachable(root)
            .iter()
            .filter(|&&id| self.node(id).op.is_arith())
            .count()
    }

    /// Arithmetic nodes in the whole program, shared nodes once.
    pub fn total_op_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.op.is_arith()).count()
    }

    /// Forward interval evaluation, one interval per node, no symbolic
    /// rewriting. This is the correlation-losing baseline.
    pub fn eval_interval(&self) -> Result<Vec<Interval>, IntervalError> {
        let mut out: Vec<Interval> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let iv = match node.op {
                Op::Input => self.inputs[node.input_idx.unwrap()].range,
                Op::Const => Interval::point(node.literal.unwrap()),
                op => {
                    let a = out[node.children[0].index()];
                    let b = node.children.get(1).map(|c| out[c.index()]);
                    Interval::apply(op, &a, b.as_ref())?
                }
            };
            out.push(iv);
        }
        Ok(out)
    }

    /// Structural fingerprint ignoring node numbering and intermediate
    /// names; equal fingerprints mean structurally identical DAGs.
    pub fn fingerprint(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut hasher = std::collections::hash_map::DefaultHasher::new();
        // Canonical renumber: walk outputs depth-first.
        let mut order: HashMap<NodeId, usize> = HashMap::new();
        fn visit(
            dag: &ExprDag,
            id: NodeId,
            order: &mut HashMap<NodeId, usize>,
            hasher: &mut impl Hasher,
        ) -> usize {
            if let Some(&n) = order.get(&id) {
                return n;
            }
            let node = dag.node(id);
            let mut child_nums = Vec::new();
            for &c in &node.children {
                child_nums.push(visit(dag, c, order, hasher));
            }
            let n = order.len();
            order.insert(id, n);
            node.op.hash(hasher);
            node.precision.hash(hasher);
            node.literal.map(f64::to_bits).hash(hasher);
            if let Some(i) = node.input_idx {
                let v = &dag.inputs[i];
                v.name.hash(hasher);
                v.range.lo.to_bits().hash(hasher);
                v.range.hi.to_bits().hash(hasher);
                v.precision.hash(hasher);
                v.incoming_error.to_bits().hash(hasher);
            }
            child_nums.hash(hasher);
            n
        }
        for (name, id) in &self.outputs {
            name.hash(&mut hasher);
            let n = visit(self, *id, &mut order, &mut hasher);
            n.hash(&mut hasher);
        }
        hasher.finish()
    }
}
