//! Canonical symbolic expressions: flattened sums of monomials over
//! atoms, with exact rational coefficients.
//!
//! The normal form keeps every variable occurrence merged — `x*x` is
//! the factor `(x, 2)`, `a/w * a/w * w` collapses to `a^2/w` — which is
//! what lets the interval back end retain correlation. Division and the
//! transcendentals become opaque atoms over canonical arguments;
//! expansion is throttled by an operation-count gate, past which
//! factors stay wrapped instead of being multiplied out.

mod build;
mod diff;
mod eval;
pub mod ratio;
mod subst;

pub use build::build_value_exprs;
pub use diff::diff;
pub use eval::{eval_hp, eval_interval, eval_interval_memo, EvalError, Memo};
pub use subst::subst;

use crate::interval::Interval;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::{Lazy, OnceCell};
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FuncKind {
    Sqrt,
    Exp,
    Log,
    Sin,
    Cos,
}

impl FuncKind {
    pub fn name(self) -> &'static str {
        match self {
            FuncKind::Sqrt => "sqrt",
            FuncKind::Exp => "exp",
            FuncKind::Log => "log",
            FuncKind::Sin => "sin",
            FuncKind::Cos => "cos",
        }
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
pub enum AtomData {
    /// Program input.
    Var(String),
    /// Free variable introduced by abstraction.
    AbsVar(String),
    /// Non-polynomial kernel over a canonical argument.
    Func(FuncKind, SymExpr),
    /// Unexpanded polynomial factor (kept when past the gate).
    Poly(SymExpr),
}

impl AtomData {
    fn rank(&self) -> u8 {
        match self {
            AtomData::Var(_) => 0,
            AtomData::AbsVar(_) => 1,
            AtomData::Func(..) => 2,
            AtomData::Poly(_) => 3,
        }
    }
}

/// Interned atom: content-equal atoms are pointer-equal, and ordering is
/// by content so canonical forms do not depend on interning order.
#[derive(Debug, Clone)]
pub struct Atom(Arc<AtomData>);

impl Atom {
    pub fn data(&self) -> &AtomData {
        &self.0
    }

    pub fn is_free_var(&self) -> bool {
        matches!(*self.0, AtomData::Var(_) | AtomData::AbsVar(_))
    }

    pub fn name(&self) -> Option<&str> {
        match &*self.0 {
            AtomData::Var(n) | AtomData::AbsVar(n) => Some(n),
            _ => None,
        }
    }

    fn key(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }
}

impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}
impl Eq for Atom {}

impl Hash for Atom {
    fn hash<H: Hasher>(&self, state: &mut H) {
        // Content hash, not pointer: stable across runs.
        self.0.hash(state)
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        let r = self.0.rank().cmp(&other.0.rank());
        if r != Ordering::Equal {
            return r;
        }
        match (&*self.0, &*other.0) {
            (AtomData::Var(a), AtomData::Var(b)) => a.cmp(b),
            (AtomData::AbsVar(a), AtomData::AbsVar(b)) => a.cmp(b),
            (AtomData::Func(ka, ea), AtomData::Func(kb, eb)) => {
                ka.cmp(kb).then_with(|| ea.cmp_structural(eb))
            }
            (AtomData::Poly(a), AtomData::Poly(b)) => a.cmp_structural(b),
            _ => unreachable!("rank disambiguates"),
        }
    }
}

static INTERNER: Lazy<Mutex<HashMap<u64, Vec<Atom>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn intern(data: AtomData) -> Atom {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    data.hash(&mut h);
    let hv = h.finish();
    let mut table = INTERNER.lock().unwrap();
    let bucket = table.entry(hv).or_default();
    for a in bucket.iter() {
        if *a.0 == data {
            return a.clone();
        }
    }
    let atom = Atom(Arc::new(data));
    bucket.push(atom.clone());
    atom
}

pub fn var(name: &str) -> Atom {
    intern(AtomData::Var(name.to_string()))
}

pub fn abs_var(name: &str) -> Atom {
    intern(AtomData::AbsVar(name.to_string()))
}

pub fn func_atom(kind: FuncKind, arg: SymExpr) -> Atom {
    intern(AtomData::Func(kind, arg))
}

pub fn poly_atom(e: SymExpr) -> Atom {
    intern(AtomData::Poly(e))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factor {
    pub atom: Atom,
    pub pow: i32,
}

#[derive(Debug, Clone)]
pub struct Monomial {
    pub coeff: BigRational,
    /// Outward enclosure of `coeff`, cached at construction.
    pub coeff_iv: Interval,
    /// Sorted by atom; powers nonzero; at most one factor per atom.
    pub factors: SmallVec<[Factor; 2]>,
}

impl Monomial {
    fn new(coeff: BigRational, factors: SmallVec<[Factor; 2]>) -> Monomial {
        debug_assert!(!coeff.is_zero());
        debug_assert!(factors.iter().all(|f| f.pow != 0));
        debug_assert!(factors.windows(2).all(|w| w[0].atom < w[1].atom));
        let coeff_iv = ratio::rational_to_interval(&coeff);
        Monomial {
            coeff,
            coeff_iv,
            factors,
        }
    }

    fn constant(coeff: BigRational) -> Monomial {
        Monomial::new(coeff, SmallVec::new())
    }

    fn key_cmp(&self, other: &Monomial) -> Ordering {
        let mut i = 0;
        loop {
            match (self.factors.get(i), other.factors.get(i)) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(a), Some(b)) => {
                    let c = a.atom.cmp(&b.atom).then(b.pow.cmp(&a.pow));
                    if c != Ordering::Equal {
                        return c;
                    }
                }
            }
            i += 1;
        }
    }

    fn mul(&self, other: &Monomial) -> Option<Monomial> {
        let coeff = &self.coeff * &other.coeff;
        if coeff.is_zero() {
            return None;
        }
        let mut factors: SmallVec<[Factor; 2]> = SmallVec::new();
        let (a, b) = (&self.factors, &other.factors);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(fa), Some(fb)) => match fa.atom.cmp(&fb.atom) {
                    Ordering::Less => {
                        factors.push(fa.clone());
                        i += 1;
                    }
                    Ordering::Greater => {
                        factors.push(fb.clone());
                        j += 1;
                    }
                    Ordering::Equal => {
                        let pow = fa.pow + fb.pow;
                        if pow != 0 {
                            factors.push(Factor {
                                atom: fa.atom.clone(),
                                pow,
                            });
                        }
                        i += 1;
                        j += 1;
                    }
                },
                (Some(fa), None) => {
                    factors.push(fa.clone());
                    i += 1;
                }
                (None, Some(fb)) => {
                    factors.push(fb.clone());
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Some(Monomial::new(coeff, factors))
    }

    fn powi(&self, n: i32) -> Monomial {
        debug_assert!(n != 0);
        let coeff = if n >= 0 {
            num_traits::pow::pow(self.coeff.clone(), n as usize)
        } else {
            num_traits::pow::pow(self.coeff.clone().recip(), (-n) as usize)
        };
        let factors = self
            .factors
            .iter()
            .map(|f| Factor {
                atom: f.atom.clone(),
                pow: f.pow * n,
            })
            .collect();
        Monomial::new(coeff, factors)
    }

    /// Direct-evaluation cost: multiply chains for the numerator and the
    /// denominator (one unit per power application, plus the coefficient
    /// when it is not +-1), and, if a denominator exists, one division.
    fn op_units(&self) -> u64 {
        let plus_minus_one =
            self.coeff.is_integer() && num_traits::One::is_one(&self.coeff.numer().abs());
        let mut num_units: u64 = if plus_minus_one { 0 } else { 1 };
        let mut den_units: u64 = 0;
        for f in &self.factors {
            if f.pow > 0 {
                num_units += f.pow as u64;
            } else {
                den_units += f.pow.unsigned_abs() as u64;
            }
        }
        let num_ops = num_units.max(1) - 1;
        if den_units > 0 {
            num_ops + (den_units - 1) + 1
        } else {
            num_ops
        }
    }
}

#[derive(Debug)]
struct ExprData {
    terms: Vec<Monomial>,
    hash: u64,
    op_count: OnceCell<u64>,
}

/// Immutable canonical expression; cloning is cheap.
#[derive(Debug, Clone)]
pub struct SymExpr {
    data: Arc<ExprData>,
}

impl PartialEq for SymExpr {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.data, &other.data) {
            return true;
        }
        self.data.hash == other.data.hash && self.cmp_structural(other) == Ordering::Equal
    }
}
impl Eq for SymExpr {}

impl Hash for SymExpr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.data.hash);
    }
}

impl SymExpr {
    fn from_terms(mut terms: Vec<Monomial>) -> SymExpr {
        terms.retain(|m| !m.coeff.is_zero());
        terms.sort_by(|a, b| a.key_cmp(b));
        // Merge duplicate keys (callers mostly pre-merge; this is the
        // invariant of record).
        let mut merged: Vec<Monomial> = Vec::with_capacity(terms.len());
        for m in terms {
            match merged.last_mut() {
                Some(last) if last.key_cmp(&m) == Ordering::Equal => {
                    let coeff = &last.coeff + &m.coeff;
                    if coeff.is_zero() {
                        merged.pop();
                    } else {
                        *last = Monomial::new(coeff, m.factors);
                    }
                }
                _ => merged.push(m),
            }
        }
        Self::from_sorted(merged)
    }

    fn from_sorted(terms: Vec<Monomial>) -> SymExpr {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        for m in &terms {
            m.coeff.hash(&mut h);
            for f in &m.factors {
                // Content-stable: hash the atom data, not the pointer.
                f.atom.0.hash(&mut h);
                f.pow.hash(&mut h);
            }
        }
        SymExpr {
            data: Arc::new(ExprData {
                terms,
                hash: h.finish(),
                op_count: OnceCell::new(),
            }),
        }
    }

    pub fn zero() -> SymExpr {
        Self::from_sorted(vec![])
    }

    pub fn one() -> SymExpr {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> SymExpr {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_sorted(vec![Monomial::constant(c)])
    }

    pub fn from_f64(x: f64) -> SymExpr {
        Self::constant(ratio::rational_from_f64(x))
    }

    pub fn from_atom(atom: Atom) -> SymExpr {
        Self::from_sorted(vec![Monomial::new(
            BigRational::one(),
            smallvec::smallvec![Factor { atom, pow: 1 }],
        )])
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.data.terms
    }

    pub fn is_zero(&self) -> bool {
        self.data.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<&BigRational> {
        match self.data.terms.as_slice() {
            [] => None, // zero handled by caller via is_zero
            [m] if m.factors.is_empty() => Some(&m.coeff),
            _ => None,
        }
    }

    pub fn is_single_monomial(&self) -> bool {
        self.data.terms.len() == 1
    }

    fn cmp_structural(&self, other: &SymExpr) -> Ordering {
        if Arc::ptr_eq(&self.data, &other.data) {
            return Ordering::Equal;
        }
        let (a, b) = (&self.data.terms, &other.data.terms);
        for i in 0..a.len().min(b.len()) {
            let c = a[i].key_cmp(&b[i]).then_with(|| a[i].coeff.cmp(&b[i].coeff));
            if c != Ordering::Equal {
                return c;
            }
        }
        a.len().cmp(&b.len())
    }

    pub fn add(&self, other: &SymExpr) -> SymExpr {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.data.terms, &other.data.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(ma), Some(mb)) => match ma.key_cmp(mb) {
                    Ordering::Less => {
                        out.push(ma.clone());
                        i += 1;
                    }
                    Ordering::Greater => {
                        out.push(mb.clone());
                        j += 1;
                    }
                    Ordering::Equal => {
                        let coeff = &ma.coeff + &mb.coeff;
                        if !coeff.is_zero() {
                            out.push(Monomial::new(coeff, ma.factors.clone()));
                        }
                        i += 1;
                        j += 1;
                    }
                },
                (Some(ma), None) => {
                    out.push(ma.clone());
                    i += 1;
                }
                (None, Some(mb)) => {
                    out.push(mb.clone());
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Self::from_sorted(out)
    }

    pub fn neg(&self) -> SymExpr {
        self.scale(&-BigRational::one())
    }

    pub fn sub(&self, other: &SymExpr) -> SymExpr {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigRational) -> SymExpr {
        if k.is_zero() || self.is_zero() {
            return Self::zero();
        }
        if k.is_one() {
            return self.clone();
        }
        // Scaling keeps keys and key order.
        let terms = self
            .data
            .terms
            .iter()
            .map(|m| Monomial::new(&m.coeff * k, m.factors.clone()))
            .collect();
        Self::from_sorted(terms)
    }

    /// Product under the canonicalization gate: fully expand and collect
    /// while the projected size stays within `gate` operations, else keep
    /// the factors opaque.
    pub fn mul(&self, other: &SymExpr, gate: u64) -> SymExpr {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(c);
        }
        let (na, nb) = (self.data.terms.len() as u64, other.data.terms.len() as u64);
        // Distributing a lone monomial grows nothing; a general product
        // is only expanded while the term count stays gate-sized.
        let projected = na.saturating_mul(nb);
        if na == 1 || nb == 1 || projected <= gate.max(16) {
            let mut out = Vec::with_capacity(projected as usize);
            for ma in &self.data.terms {
                for mb in &other.data.terms {
                    if let Some(m) = ma.mul(mb) {
                        out.push(m);
                    }
                }
            }
            let expanded = Self::from_terms(out);
            if expanded.count_ops() <= gate.max(16) {
                return expanded;
            }
            return expanded.capped(gate);
        }
        match self.wrap().mul(&other.wrap()) {
            Some(m) => Self::from_sorted(vec![m]),
            None => Self::zero(),
        }
    }

    /// Integer power under the gate.
    pub fn powi(&self, n: i32, gate: u64) -> SymExpr {
        if n == 0 {
            return Self::one();
        }
        if self.is_zero() {
            if n < 0 {
                // 1/0: keep symbolically; interval evaluation reports the
                // domain error.
                let a = poly_atom(self.clone());
                return Self::from_sorted(vec![Monomial::new(
                    BigRational::one(),
                    smallvec::smallvec![Factor { atom: a, pow: n }],
                )]);
            }
            return Self::zero();
        }
        if self.data.terms.len() == 1 {
            return Self::from_sorted(vec![self.data.terms[0].powi(n)]);
        }
        if n < 0 {
            let a = poly_atom(self.clone());
            return Self::from_sorted(vec![Monomial::new(
                BigRational::one(),
                smallvec::smallvec![Factor { atom: a, pow: n }],
            )]);
        }
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = n as u32;
        loop {
            if k & 1 == 1 {
                acc = acc.mul(&base, gate);
            }
            k >>= 1;
            if k == 0 {
                return acc;
            }
            base = base.mul(&base, gate);
        }
    }

    /// Quotient: exact when the divisor is a lone monomial, otherwise a
    /// reciprocal factor over the canonical divisor.
    pub fn div(&self, other: &SymExpr, gate: u64) -> SymExpr {
        self.mul(&other.powi(-1, gate), gate)
    }

    pub fn func(kind: FuncKind, arg: SymExpr) -> SymExpr {
        Self::from_atom(func_atom(kind, arg))
    }

    /// Wrap into a single opaque factor if not already one.
    fn wrap(&self) -> Monomial {
        if self.data.terms.len() == 1 {
            return self.data.terms[0].clone();
        }
        Monomial::new(
            BigRational::one(),
            smallvec::smallvec![Factor {
                atom: poly_atom(self.clone()),
                pow: 1,
            }],
        )
    }

    /// Fold into an opaque factor once past the gate: callers use this to
    /// stop additive blowup in accumulation loops.
    pub fn capped(&self, gate: u64) -> SymExpr {
        if self.count_ops() <= gate.max(16) || self.data.terms.len() <= 1 {
            return self.clone();
        }
        Self::from_atom(poly_atom(self.clone()))
    }

    /// Operations in a direct evaluation of the canonical form: adds
    /// between monomials, multiplies within them, and the contents of
    /// each distinct opaque atom (counted once).
    pub fn count_ops(&self) -> u64 {
        *self.data.op_count.get_or_init(|| {
            let mut seen = std::collections::HashSet::new();
            self.count_ops_inner(&mut seen)
        })
    }

    fn count_ops_inner(&self, seen: &mut std::collections::HashSet<usize>) -> u64 {
        let terms = &self.data.terms;
        if terms.is_empty() {
            return 0;
        }
        let mut n = terms.len() as u64 - 1;
        for m in terms {
            n += m.op_units();
            for f in &m.factors {
                if seen.insert(f.atom.key()) {
                    n += match &*f.atom.0 {
                        AtomData::Var(_) | AtomData::AbsVar(_) => 0,
                        AtomData::Func(_, arg) => 1 + arg.count_ops_inner(seen),
                        AtomData::Poly(p) => p.count_ops_inner(seen),
                    };
                }
            }
        }
        n
    }

    /// Free variables (Var and AbsVar atoms) of the expression,
    /// including those inside opaque atoms, in content order.
    pub fn free_vars(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        let mut seen_atoms = std::collections::HashSet::new();
        self.collect_free_vars(&mut out, &mut seen_atoms);
        out.sort();
        out.dedup();
        out
    }

    fn collect_free_vars(
        &self,
        out: &mut Vec<Atom>,
        seen: &mut std::collections::HashSet<usize>,
    ) {
        for m in &self.data.terms {
            for f in &m.factors {
                if !seen.insert(f.atom.key()) {
                    continue;
                }
                match &*f.atom.0 {
                    AtomData::Var(_) | AtomData::AbsVar(_) => out.push(f.atom.clone()),
                    AtomData::Func(_, arg) => arg.collect_free_vars(out, seen),
                    AtomData::Poly(p) => p.collect_free_vars(out, seen),
                }
            }
        }
    }
}

impl fmt::Display for SymExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, m) in self.data.terms.iter().enumerate() {
            let neg = m.coeff.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let c = m.coeff.abs();
            let show_coeff = !c.is_one() || m.factors.is_empty();
            if show_coeff {
                if c.is_integer() {
                    write!(f, "{}", c.numer())?;
                } else {
                    write!(f, "{}/{}", c.numer(), c.denom())?;
                }
            }
            for (j, fac) in m.factors.iter().enumerate() {
                if show_coeff || j > 0 {
                    write!(f, "*")?;
                }
                match &*fac.atom.0 {
                    AtomData::Var(n) | AtomData::AbsVar(n) => write!(f, "{n}")?,
                    AtomData::Func(k, arg) => write!(f, "{}({arg})", k.name())?,
                    AtomData::Poly(p) => write!(f, "({p})")?,
                }
                if fac.pow != 1 {
                    write!(f, "^{}", fac.pow)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> SymExpr {
        SymExpr::from_atom(var("x"))
    }
    fn y() -> SymExpr {
        SymExpr::from_atom(var("y"))
    }
    const G: u64 = 8000;

    #[test]
    fn power_collection() {
        // x*x*x is a single cubed factor, never three occurrences.
        let e = x().mul(&x(), G).mul(&x(), G);
        assert_eq!(e.terms().len(), 1);
        assert_eq!(e.terms()[0].factors[0].pow, 3);
        assert_eq!(e.to_string(), "x^3");
    }

    #[test]
    fn binomial_expansion() {
        let e = x().add(&y());
        let sq = e.mul(&e, G);
        assert_eq!(sq.to_string(), "x^2 + 2*x*y + y^2");
    }

    #[test]
    fn structural_cancellation() {
        let e = x().sub(&x());
        assert!(e.is_zero());
        let z = e.mul(&y(), G);
        assert!(z.is_zero());
    }

    #[test]
    fn reciprocal_powers_cancel() {
        // w * (a/w)^2 -> a^2 / w
        let a = SymExpr::from_atom(var("a"));
        let w = SymExpr::from_atom(var("w"));
        let q = a.div(&w, G);
        let e = w.mul(&q.mul(&q, G), G);
        assert_eq!(e.to_string(), "a^2*w^-1");
    }

    #[test]
    fn idempotent_and_deterministic() {
        let e = x().add(&y()).mul(&x().add(&y()), G);
        let e2 = x().add(&y()).mul(&y().add(&x()), G);
        assert_eq!(e, e2);
        assert_eq!(e.to_string(), e2.to_string());
        // A second canonicalization pass is the identity.
        let again = e.add(&SymExpr::zero()).mul(&SymExpr::one(), G);
        assert_eq!(e, again);
    }

    #[test]
    fn count_ops_convention() {
        assert_eq!(SymExpr::zero().count_ops(), 0);
        assert_eq!(x().add(&y()).count_ops(), 1);
        let sq = x().add(&y()).powi(2, G);
        // x^2 (1 mul) + 2xy (2) + y^2 (1) + 2 adds
        assert_eq!(sq.count_ops(), 6);
        let d = x().div(&y(), G);
        assert_eq!(d.count_ops(), 1); // one division
    }

    #[test]
    fn gate_keeps_products_factored() {
        // Two 9-term polynomials with a gate too small to expand.
        let mut a = SymExpr::zero();
        let mut b = SymExpr::zero();
        for i in 0..9 {
            let v = SymExpr::from_atom(var(&format!("a{i}")));
            let w = SymExpr::from_atom(var(&format!("b{i}")));
            a = a.add(&v);
            b = b.add(&w);
        }
        let tight = a.mul(&b, 20);
        assert_eq!(tight.terms().len(), 1, "stays factored: {tight}");
        let loose = a.mul(&b, 8000);
        assert_eq!(loose.terms().len(), 81);
    }

    #[test]
    fn func_atoms_dedup() {
        let s1 = SymExpr::func(FuncKind::Sqrt, x().add(&y()));
        let s2 = SymExpr::func(FuncKind::Sqrt, y().add(&x()));
        assert_eq!(s1, s2);
        let f1 = &s1.terms()[0].factors[0].atom;
        let f2 = &s2.terms()[0].factors[0].atom;
        assert!(f1 == f2);
    }

    #[test]
    fn display_forms() {
        let e = x().powi(2, G).scale(&BigRational::new(3.into(), 1.into()));
        assert_eq!(e.to_string(), "3*x^2");
        let e = SymExpr::from_f64(0.5).mul(&x(), G);
        assert_eq!(e.to_string(), "1/2*x");
        assert_eq!(SymExpr::zero().to_string(), "0");
    }
}
