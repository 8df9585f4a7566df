//! Exact symbolic differentiation of canonical expressions.

use super::{Atom, AtomData, FuncKind, SymExpr};
use num_rational::BigRational;
use std::collections::HashMap;

/// d e / d wrt for a free-variable atom, canonicalized under the gate.
/// Opaque atoms are chained through their arguments.
pub fn diff(e: &SymExpr, wrt: &Atom, gate: u64) -> SymExpr {
    let mut memo = HashMap::new();
    diff_memo(e, wrt, gate, &mut memo)
}

fn diff_memo(
    e: &SymExpr,
    wrt: &Atom,
    gate: u64,
    memo: &mut HashMap<usize, SymExpr>,
) -> SymExpr {
    let mut out = SymExpr::zero();
    for m in e.terms() {
        for (i, f) in m.factors.iter().enumerate() {
            let df = atom_diff(&f.atom, wrt, gate, memo);
            if df.is_zero() {
                continue;
            }
            // c * p * f^(p-1) * (other factors) * df
            let mut rest = smallvec::SmallVec::new();
            for (j, g) in m.factors.iter().enumerate() {
                if j == i {
                    if f.pow != 1 {
                        rest.push(super::Factor {
                            atom: g.atom.clone(),
                            pow: f.pow - 1,
                        });
                    }
                } else {
                    rest.push(g.clone());
                }
            }
            let coeff = &m.coeff * BigRational::from_integer(f.pow.into());
            let part =
                SymExpr::from_sorted(vec![super::Monomial::new(coeff, rest)]).mul(&df, gate);
            out = out.add(&part);
        }
    }
    out
}

fn atom_diff(atom: &Atom, wrt: &Atom, gate: u64, memo: &mut HashMap<usize, SymExpr>) -> SymExpr {
    let key = atom.data() as *const AtomData as usize;
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let d = match atom.data() {
        AtomData::Var(_) | AtomData::AbsVar(_) => {
            if atom == wrt {
                SymExpr::one()
            } else {
                SymExpr::zero()
            }
        }
        AtomData::Func(kind, arg) => {
            let inner = diff_memo(arg, wrt, gate, memo);
            if inner.is_zero() {
                SymExpr::zero()
            } else {
                let outer = match kind {
                    FuncKind::Sqrt => {
                        // 1 / (2 sqrt(arg))
                        SymExpr::func(FuncKind::Sqrt, arg.clone())
                            .powi(-1, gate)
                            .scale(&BigRational::new(1.into(), 2.into()))
                    }
                    FuncKind::Exp => SymExpr::func(FuncKind::Exp, arg.clone()),
                    FuncKind::Log => arg.powi(-1, gate),
                    FuncKind::Sin => SymExpr::func(FuncKind::Cos, arg.clone()),
                    FuncKind::Cos => SymExpr::func(FuncKind::Sin, arg.clone()).neg(),
                };
                outer.mul(&inner, gate)
            }
        }
        AtomData::Poly(p) => diff_memo(p, wrt, gate, memo),
    };
    memo.insert(key, d.clone());
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sym::{var, FuncKind};

    const G: u64 = 8000;

    fn x() -> SymExpr {
        SymExpr::from_atom(var("x"))
    }
    fn y() -> SymExpr {
        SymExpr::from_atom(var("y"))
    }

    #[test]
    fn product_rule() {
        // d/dx [x (x + y)] = 2x + y
        let e = x().mul(&x().add(&y()), G);
        assert_eq!(diff(&e, &var("x"), G).to_string(), "2*x + y");
    }

    #[test]
    fn constants_vanish() {
        assert!(diff(&SymExpr::from_f64(3.5), &var("x"), G).is_zero());
        assert!(diff(&y(), &var("x"), G).is_zero());
    }

    #[test]
    fn chain_rule_through_kernels() {
        let s = SymExpr::func(FuncKind::Sin, x().clone());
        assert_eq!(diff(&s, &var("x"), G).to_string(), "cos(x)");

        let q = SymExpr::func(FuncKind::Sqrt, x().mul(&x(), G).add(&y()));
        // d/dx sqrt(x^2+y) = x / sqrt(x^2+y)
        let d = diff(&q, &var("x"), G);
        assert_eq!(d.to_string(), "x*sqrt(x^2 + y)^-1");
    }

    #[test]
    fn quotient_partial() {
        // d/db (a/b) = -a/b^2
        let a = SymExpr::from_atom(var("a"));
        let b = SymExpr::from_atom(var("b"));
        let q = a.div(&b, G);
        assert_eq!(diff(&q, &var("b"), G).to_string(), "-a*b^-2");
    }

    #[test]
    fn derivative_linearity() {
        // d(3 e1 + e2) = 3 d(e1) + d(e2) structurally
        let e1 = x().mul(&y(), G).mul(&x(), G);
        let e2 = SymExpr::func(FuncKind::Exp, x().clone());
        let three = BigRational::from_integer(3.into());
        let lhs = diff(&e1.scale(&three).add(&e2), &var("x"), G);
        let rhs = diff(&e1, &var("x"), G)
            .scale(&three)
            .add(&diff(&e2, &var("x"), G));
        assert_eq!(lhs, rhs);
    }

    /// Central finite differences at random points agree to 1e-6.
    #[test]
    fn finite_difference_cross_check() {
        use crate::hp::HpFloat;
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let e = SymExpr::func(FuncKind::Sin, x().clone())
            .mul(&x().add(&y()), G)
            .add(&x().powi(3, G));
        let dx = diff(&e, &var("x"), G);
        for _ in 0..10 {
            let px = rng.gen_range(-2.0..2.0f64);
            let py = rng.gen_range(-2.0..2.0f64);
            let h = 1e-6;
            let eval = |vx: f64, vy: f64| {
                let mut env = std::collections::HashMap::new();
                env.insert(var("x"), HpFloat::from_f64(vx));
                env.insert(var("y"), HpFloat::from_f64(vy));
                super::super::eval_hp(&e, &env).unwrap().to_f64()
            };
            let fd = (eval(px + h, py) - eval(px - h, py)) / (2.0 * h);
            let mut env = std::collections::HashMap::new();
            env.insert(var("x"), HpFloat::from_f64(px));
            env.insert(var("y"), HpFloat::from_f64(py));
            let sym = super::super::eval_hp(&dx, &env).unwrap().to_f64();
            let denom = sym.abs().max(1.0);
            assert!(
                ((fd - sym) / denom).abs() < 1e-6,
                "at ({px},{py}): fd {fd} sym {sym}"
            );
        }
    }
}
