//! Capture-free substitution with re-canonicalization.

use super::{Atom, AtomData, SymExpr};
use std::collections::HashMap;

/// Replace free-variable atoms by expressions, rebuilding opaque atoms
/// whose arguments change. Returns `e` itself when nothing applies.
pub fn subst(e: &SymExpr, bindings: &HashMap<Atom, SymExpr>, gate: u64) -> SymExpr {
    if bindings.is_empty() {
        return e.clone();
    }
    let mut memo = HashMap::new();
    subst_inner(e, bindings, gate, &mut memo).unwrap_or_else(|| e.clone())
}

/// None = unchanged.
fn subst_inner(
    e: &SymExpr,
    bindings: &HashMap<Atom, SymExpr>,
    gate: u64,
    memo: &mut HashMap<usize, Option<SymExpr>>,
) -> Option<SymExpr> {
    let mut changed = false;
    let mut out = SymExpr::zero();
    for m in e.terms() {
        let mut term = SymExpr::constant(m.coeff.clone());
        for f in &m.factors {
            let base = match subst_atom(&f.atom, bindings, gate, memo) {
                Some(new) => {
                    changed = true;
                    new
                }
                None => SymExpr::from_atom(f.atom.clone()),
            };
            term = term.mul(&base.powi(f.pow, gate), gate);
        }
        out = out.add(&term);
    }
    if changed {
        Some(out)
    } else {
        None
    }
}

fn subst_atom(
    atom: &Atom,
    bindings: &HashMap<Atom, SymExpr>,
    gate: u64,
    memo: &mut HashMap<usize, Option<SymExpr>>,
) -> Option<SymExpr> {
    let key = atom.data() as *const AtomData as usize;
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let r = match atom.data() {
        AtomData::Var(_) | AtomData::AbsVar(_) => bindings.get(atom).cloned(),
        AtomData::Func(kind, arg) => {
            subst_inner(arg, bindings, gate, memo).map(|new| SymExpr::func(*kind, new))
        }
        AtomData::Poly(p) => subst_inner(p, bindings, gate, memo),
    };
    memo.insert(key, r.clone());
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sym::{abs_var, var};

    const G: u64 = 8000;

    #[test]
    fn var_to_free_var() {
        let x = SymExpr::from_atom(var("x"));
        let y = SymExpr::from_atom(var("y"));
        let e = x.add(&y);
        let mut b = HashMap::new();
        b.insert(var("x"), SymExpr::from_atom(abs_var("FV2")));
        assert_eq!(subst(&e, &b, G).to_string(), "y + FV2");
    }

    #[test]
    fn expansion_after_substitution() {
        let x = SymExpr::from_atom(var("x"));
        let e = x.powi(2, G);
        let a = SymExpr::from_atom(var("a"));
        let bv = SymExpr::from_atom(var("b"));
        let mut b = HashMap::new();
        b.insert(var("x"), a.add(&bv));
        assert_eq!(subst(&e, &b, G).to_string(), "a^2 + 2*a*b + b^2");
    }

    #[test]
    fn empty_bindings_identity() {
        let x = SymExpr::from_atom(var("x"));
        let e = x.powi(3, G);
        let r = subst(&e, &HashMap::new(), G);
        assert_eq!(e, r);
    }
}
