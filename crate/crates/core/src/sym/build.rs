//! Symbolic value expressions for DAG nodes.

use super::{abs_var, var, FuncKind, SymExpr};
use crate::ir::{ExprDag, NodeId, Op};

/// Builds the canonical real-valued expression of every node reachable
/// from `roots` (indexed by node id; unreachable slots are `None`).
/// Canonicalization is throttled by `gate`.
pub fn build_value_exprs(dag: &ExprDag, roots: &[NodeId], gate: u64) -> Vec<Option<SymExpr>> {
    let mut out: Vec<Option<SymExpr>> = vec![None; dag.nodes.len()];
    let reachable = dag.reachable_from(roots);
    for id in reachable {
        let node = dag.node(id);
        let expr = match node.op {
            Op::Input => {
                let v = &dag.inputs[node.input_idx.unwrap()];
                if v.is_abstract {
                    SymExpr::from_atom(abs_var(&v.name))
                } else {
                    SymExpr::from_atom(var(&v.name))
                }
            }
            Op::Const => SymExpr::from_f64(node.literal.unwrap()),
            op => {
                let a = out[node.children[0].index()].as_ref().unwrap();
                match op {
                    Op::Neg => a.neg(),
                    Op::Sqrt => SymExpr::func(FuncKind::Sqrt, a.clone()),
                    Op::Exp => SymExpr::func(FuncKind::Exp, a.clone()),
                    Op::Log => SymExpr::func(FuncKind::Log, a.clone()),
                    Op::Sin => SymExpr::func(FuncKind::Sin, a.clone()),
                    Op::Cos => SymExpr::func(FuncKind::Cos, a.clone()),
                    _ => {
                        let b = out[node.children[1].index()].as_ref().unwrap();
                        match op {
                            Op::Add => a.add(b),
                            Op::Sub => a.sub(b),
                            Op::Mul => a.mul(b, gate),
                            Op::Div => a.div(b, gate),
                            _ => unreachable!(),
                        }
                    }
                }
            }
        };
        out[id.index()] = Some(expr);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_program;

    #[test]
    fn dqmom_canonical_form() {
        // The deeply bracketed source collapses to 3 a^2 m / w terms.
        let src = "
INPUTS {
  m0 fl64 : (-1.0, 1.0); m1 fl64 : (-1.0, 1.0); m2 fl64 : (-1.0, 1.0);
  w0 fl64 : (0.00001, 1.0); w1 fl64 : (0.00001, 1.0); w2 fl64 : (0.00001, 1.0);
  a0 fl64 : (0.00001, 1.0); a1 fl64 : (0.00001, 1.0); a2 fl64 : (0.00001, 1.0);
}
OUTPUTS { r; }
EXPRS {
  r = 0.0 + ((((w2 * (0.0 - m2)) * (-3.0 * ((1.0 * (a2/w2)) * (a2/w2)))) * 1.0)
    + ((((w1 * (0.0 - m1)) * (-3.0 * ((1.0 * (a1/w1)) * (a1/w1)))) * 1.0)
    + ((((w0 * (0.0 - m0)) * (-3.0 * ((1.0 * (a0/w0)) * (a0/w0)))) * 1.0) + 0.0)));
}
";
        let dag = parse_program(src).unwrap();
        let (_, root) = dag.outputs[0].clone();
        let exprs = build_value_exprs(&dag, &[root], 8000);
        let e = exprs[root.index()].as_ref().unwrap();
        assert_eq!(
            e.to_string(),
            "3*a0^2*m0*w0^-1 + 3*a1^2*m1*w1^-1 + 3*a2^2*m2*w2^-1"
        );
    }

    #[test]
    fn passthrough_and_triple_product() {
        let dag = parse_program(
            "INPUTS { x fl64 : (0.0, 1.0); } OUTPUTS { s; } EXPRS { s = x * x * x; }",
        )
        .unwrap();
        let (_, root) = dag.outputs[0].clone();
        let exprs = build_value_exprs(&dag, &[root], 8000);
        assert_eq!(exprs[root.index()].as_ref().unwrap().to_string(), "x^3");
    }
}
