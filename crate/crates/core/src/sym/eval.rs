//! Interval and high-precision evaluation of canonical expressions.

use super::{Atom, AtomData, FuncKind, SymExpr};
use crate::hp::HpFloat;
use crate::interval::{Interval, IntervalError};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("unbound atom `{0}`")]
    Unbound(String),
    #[error(transparent)]
    Domain(#[from] IntervalError),
}

/// Per-box memo for shared opaque atoms, keyed by interned identity.
pub type Memo = HashMap<usize, Result<Interval, EvalError>>;

/// Containment-sound enclosure of `e` over the atom environment.
/// Monomial powers go through the dependency-aware interval power.
pub fn eval_interval(e: &SymExpr, env: &HashMap<Atom, Interval>) -> Result<Interval, EvalError> {
    let mut memo = Memo::new();
    eval_interval_memo(e, env, &mut memo)
}

pub fn eval_interval_memo(
    e: &SymExpr,
    env: &HashMap<Atom, Interval>,
    memo: &mut Memo,
) -> Result<Interval, EvalError> {
    let mut sum = Interval::zero();
    for m in e.terms() {
        let mut term = m.coeff_iv;
        for f in &m.factors {
            let base = atom_interval(&f.atom, env, memo)?;
            term = term.mul(&base.powi(f.pow)?);
        }
        sum = sum.add(&term);
    }
    Ok(sum)
}

fn atom_interval(
    atom: &Atom,
    env: &HashMap<Atom, Interval>,
    memo: &mut Memo,
) -> Result<Interval, EvalError> {
    if let Some(hit) = memo.get(&atom_key(atom)) {
        return hit.clone();
    }
    let computed: Result<Interval, EvalError> = match atom.data() {
        AtomData::Var(name) | AtomData::AbsVar(name) => env
            .get(atom)
            .copied()
            .ok_or_else(|| EvalError::Unbound(name.clone())),
        AtomData::Func(kind, arg) => eval_interval_memo(arg, env, memo).and_then(|iv| {
            Ok(match kind {
                FuncKind::Sqrt => iv.sqrt()?,
                FuncKind::Exp => iv.exp(),
                FuncKind::Log => iv.log()?,
                FuncKind::Sin => iv.sin(),
                FuncKind::Cos => iv.cos(),
            })
        }),
        AtomData::Poly(p) => eval_interval_memo(p, env, memo),
    };
    memo.insert(atom_key(atom), computed.clone());
    computed
}

fn atom_key(atom: &Atom) -> usize {
    atom_identity(atom)
}

fn atom_identity(atom: &Atom) -> usize {
    // Interned atoms are pointer-unique per content.
    atom.data() as *const AtomData as usize
}

/// High-precision point evaluation; used by oracles and semantic tests.
pub fn eval_hp(e: &SymExpr, env: &HashMap<Atom, HpFloat>) -> Result<HpFloat, EvalError> {
    let mut memo: HashMap<usize, Result<HpFloat, EvalError>> = HashMap::new();
    eval_hp_memo(e, env, &mut memo)
}

fn eval_hp_memo(
    e: &SymExpr,
    env: &HashMap<Atom, HpFloat>,
    memo: &mut HashMap<usize, Result<HpFloat, EvalError>>,
) -> Result<HpFloat, EvalError> {
    let mut sum = HpFloat::ZERO;
    for m in e.terms() {
        let mut term = super::ratio::rational_to_hp(&m.coeff);
        for f in &m.factors {
            let base = atom_hp(&f.atom, env, memo)?;
            term = term.mul(&hp_powi(&base, f.pow));
        }
        sum = sum.add(&term);
    }
    Ok(sum)
}

fn hp_powi(x: &HpFloat, n: i32) -> HpFloat {
    if n == 0 {
        return HpFloat::ONE;
    }
    let mut acc = HpFloat::ONE;
    let mut base = *x;
    let mut k = n.unsigned_abs();
    loop {
        if k & 1 == 1 {
            acc = acc.mul(&base);
        }
        k >>= 1;
        if k == 0 {
            break;
        }
        base = base.mul(&base);
    }
    if n < 0 {
        HpFloat::ONE.div(&acc)
    } else {
        acc
    }
}

fn atom_hp(
    atom: &Atom,
    env: &HashMap<Atom, HpFloat>,
    memo: &mut HashMap<usize, Result<HpFloat, EvalError>>,
) -> Result<HpFloat, EvalError> {
    if let Some(hit) = memo.get(&atom_identity(atom)) {
        return hit.clone();
    }
    let computed = match atom.data() {
        AtomData::Var(name) | AtomData::AbsVar(name) => env
            .get(atom)
            .copied()
            .ok_or_else(|| EvalError::Unbound(name.clone())),
        AtomData::Func(kind, arg) => eval_hp_memo(arg, env, memo).map(|v| match kind {
            FuncKind::Sqrt => v.sqrt(),
            FuncKind::Exp => v.exp(),
            FuncKind::Log => v.ln(),
            FuncKind::Sin => v.sin(),
            FuncKind::Cos => v.cos(),
        }),
        AtomData::Poly(p) => eval_hp_memo(p, env, memo),
    };
    memo.insert(atom_identity(atom), computed.clone());
    computed
}
