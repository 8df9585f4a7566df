//! Interval branch-and-bound maximization over input boxes.
//!
//! Best-first search: pop the box with the largest interval upper bound,
//! bisect its widest (relative) dimension, re-bound the halves, and keep
//! a certified lower bound from point probes. The reported upper bound
//! is sound whether or not the search converges: every box is either
//! refined, settled at width, or pruned against the certified lower
//! bound, and its bound is folded into the result.

use crate::interval::Interval;
use crate::sym::{eval_interval_memo, Atom, EvalError, Memo, SymExpr};
use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

#[derive(Debug, Clone)]
pub struct OptConfig {
    /// Absolute convergence tolerance on the objective.
    pub abs_tol: f64,
    /// Relative convergence tolerance.
    pub rel_tol: f64,
    /// Budget on boxes popped from the queue.
    pub max_boxes: u64,
    /// Relative width below which a box is settled, not split.
    pub min_box_width: f64,
    /// Serialize queue order (the only mode implemented; kept as a
    /// config point for parallel pops later).
    pub deterministic: bool,
    /// Pops without meaningful upper-bound improvement before giving up.
    pub stall_limit: u32,
    /// Record (upper, lower) after every pop.
    pub record_trace: bool,
}

impl Default for OptConfig {
    fn default() -> Self {
        OptConfig {
            abs_tol: 1e-6,
            rel_tol: 1e-3,
            max_boxes: 50_000,
            min_box_width: 1e-12,
            deterministic: true,
            stall_limit: 512,
            record_trace: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptResult {
    /// Certified achievable value (for maximize: max >= lower).
    pub lower: f64,
    /// Sound global bound (for maximize: max <= upper).
    pub upper: f64,
    pub boxes_processed: u64,
    pub converged: bool,
    pub trace: Vec<(f64, f64)>,
}

/// What gets maximized: a plain expression value, or an error objective
/// `sum_i scale_i * |term_i(x)| + constant`.
pub enum Objective<'a> {
    Value(&'a SymExpr),
    AbsSum {
        terms: &'a [(f64, SymExpr)],
        constant: f64,
    },
}

impl<'a> Objective<'a> {
    fn free_vars(&self) -> Vec<Atom> {
        match self {
            Objective::Value(e) => e.free_vars(),
            Objective::AbsSum { terms, .. } => {
                let mut vars = Vec::new();
                for (_, t) in terms.iter() {
                    vars.extend(t.free_vars());
                }
                vars.sort();
                vars.dedup();
                vars
            }
        }
    }

    /// Sound upper bound of the objective over the box.
    fn upper(&self, env: &HashMap<Atom, Interval>) -> Result<f64, EvalError> {
        let mut memo = Memo::new();
        match self {
            Objective::Value(e) => Ok(eval_interval_memo(e, env, &mut memo)?.hi),
            Objective::AbsSum { terms, constant } => {
                let mut sum = *constant;
                for (scale, t) in terms.iter() {
                    let iv = eval_interval_memo(t, env, &mut memo)?;
                    sum += scale * iv.mag();
                    // One outward step per accumulation keeps the f64 sum
                    // itself an upper bound.
                    sum = sum.next_up();
                }
                Ok(sum)
            }
        }
    }

    /// Certified achievable value at a point (degenerate box).
    fn lower_at(&self, env: &HashMap<Atom, Interval>) -> Result<f64, EvalError> {
        let mut memo = Memo::new();
        match self {
            Objective::Value(e) => Ok(eval_interval_memo(e, env, &mut memo)?.lo),
            Objective::AbsSum { terms, constant } => {
                let mut sum = *constant;
                for (scale, t) in terms.iter() {
                    let iv = eval_interval_memo(t, env, &mut memo)?;
                    sum += scale * iv.mig();
                    sum = sum.next_down();
                }
                Ok(sum)
            }
        }
    }
}

struct Entry {
    ub: f64,
    seq: u64,
    dims: Vec<Interval>,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.ub == other.ub && self.seq == other.seq
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ub
            .total_cmp(&other.ub)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

pub fn maximize(obj: &Objective, box_env: &HashMap<Atom, Interval>, cfg: &OptConfig) -> OptResult {
    let atoms = obj.free_vars();
    let dims: Vec<Interval> = atoms
        .iter()
        .map(|a| {
            *box_env
                .get(a)
                .unwrap_or_else(|| panic!("atom `{:?}` missing from box", a.name()))
        })
        .collect();

    let env_of = |ivs: &[Interval]| -> HashMap<Atom, Interval> {
        atoms.iter().cloned().zip(ivs.iter().copied()).collect()
    };

    let mut best_lb = f64::NEG_INFINITY;
    let mut settled_ub = f64::NEG_INFINITY;
    let mut trace = Vec::new();
    let mut heap = BinaryHeap::new();
    let mut seq: u64 = 0;

    let probe = |ivs: &[Interval], obj: &Objective, best_lb: &mut f64| {
        let mut points: Vec<Vec<Interval>> = Vec::with_capacity(3);
        points.push(ivs.iter().map(|iv| Interval::point(iv.midpoint())).collect());
        points.push(ivs.iter().map(|iv| Interval::point(iv.lo)).collect());
        points.push(ivs.iter().map(|iv| Interval::point(iv.hi)).collect());
        for p in points {
            let env: HashMap<Atom, Interval> =
                atoms.iter().cloned().zip(p.into_iter()).collect();
            if let Ok(lb) = obj.lower_at(&env) {
                if lb > *best_lb {
                    *best_lb = lb;
                }
            }
        }
    };

    let root_ub = obj.upper(&env_of(&dims)).unwrap_or(f64::MAX);
    probe(&dims, obj, &mut best_lb);
    heap.push(Entry {
        ub: root_ub,
        seq,
        dims,
    });

    let mut boxes: u64 = 0;
    let mut stall: u32 = 0;
    let mut stall_anchor = f64::INFINITY;
    let mut converged = false;

    let splittable = |iv: &Interval| iv.width() > cfg.min_box_width * iv.mag().max(1.0);

    while let Some(top) = heap.pop() {
        let upper_now = top.ub.max(settled_ub).max(best_lb);
        if cfg.record_trace {
            trace.push((upper_now, best_lb));
        }
        // Convergence: everything remaining is below the certified value
        // plus tolerance.
        if upper_now - best_lb <= cfg.abs_tol || upper_now - best_lb <= cfg.rel_tol * upper_now.abs()
        {
            converged = true;
            settled_ub = settled_ub.max(top.ub);
            break;
        }
        if boxes >= cfg.max_boxes {
            settled_ub = settled_ub.max(top.ub);
            break;
        }
        boxes += 1;

        // Stall detection: the upper bound refuses to move.
        if upper_now >= stall_anchor - (cfg.abs_tol + 1e-6 * stall_anchor.abs()) * 0.125 {
            stall += 1;
            if stall >= cfg.stall_limit {
                settled_ub = settled_ub.max(top.ub);
                break;
            }
        } else {
            stall = 0;
            stall_anchor = upper_now;
        }

        // Widest relative dimension; ties go to the first (atom order).
        let mut split_dim = None;
        let mut best_w = 0.0;
        for (i, iv) in top.dims.iter().enumerate() {
            if !splittable(iv) {
                continue;
            }
            let w = iv.width() / iv.mag().max(1.0);
            if w > best_w {
                best_w = w;
                split_dim = Some(i);
            }
        }
        let Some(d) = split_dim else {
            // Box at minimum width: settle it, keep its bound.
            settled_ub = settled_ub.max(top.ub);
            continue;
        };

        let mid = top.dims[d].midpoint();
        for half in [
            Interval::new(top.dims[d].lo, mid),
            Interval::new(mid, top.dims[d].hi),
        ] {
            let mut dims = top.dims.clone();
            dims[d] = half;
            let ub = match obj.upper(&env_of(&dims)) {
                // Monotonicity can only shrink the parent bound; guard
                // against outward-rounding jitter.
                Ok(u) => u.min(top.ub),
                // Unevaluable half: keep the parent's bound, never drop.
                Err(_) => top.ub,
            };
            if ub <= best_lb + cfg.abs_tol {
                settled_ub = settled_ub.max(ub.min(best_lb + cfg.abs_tol));
                continue; // pruned
            }
            probe(&dims, obj, &mut best_lb);
            seq += 1;
            heap.push(Entry { ub, seq, dims });
        }
    }

    let remaining = heap.peek().map(|e| e.ub).unwrap_or(f64::NEG_INFINITY);
    let upper = settled_ub.max(remaining).max(best_lb);
    let lower = best_lb;
    let gap_ok = upper - lower <= cfg.abs_tol || upper - lower <= cfg.rel_tol * upper.abs();
    OptResult {
        lower,
        upper,
        boxes_processed: boxes,
        converged: converged || gap_ok,
        trace,
    }
}

/// Minimize by maximizing the negation. In the result, `lower` is the
/// sound global lower bound and `upper` the certified achievable value.
pub fn minimize(expr: &SymExpr, box_env: &HashMap<Atom, Interval>, cfg: &OptConfig) -> OptResult {
    let neg = expr.neg();
    let r = maximize(&Objective::Value(&neg), box_env, cfg);
    OptResult {
        lower: -r.upper,
        upper: -r.lower,
        boxes_processed: r.boxes_processed,
        converged: r.converged,
        trace: r.trace.iter().map(|&(u, l)| (-u, -l)).collect(),
    }
}

/// Sound enclosure of an expression's range over the box.
pub fn range(expr: &SymExpr, box_env: &HashMap<Atom, Interval>, cfg: &OptConfig) -> (Interval, bool) {
    let hi = maximize(&Objective::Value(expr), box_env, cfg);
    let lo = minimize(expr, box_env, cfg);
    (
        Interval::new(lo.lower.min(hi.upper), hi.upper),
        hi.converged && lo.converged,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sym::var;

    const G: u64 = 8000;

    fn env1(name: &str, lo: f64, hi: f64) -> HashMap<Atom, Interval> {
        let mut m = HashMap::new();
        m.insert(var(name), Interval::new(lo, hi));
        m
    }

    #[test]
    fn square_converges_to_one() {
        let x = SymExpr::from_atom(var("x"));
        let e = x.powi(2, G);
        let cfg = OptConfig::default();
        let r = maximize(&Objective::Value(&e), &env1("x", -1.0, 1.0), &cfg);
        assert!(r.converged);
        assert!(r.upper >= 1.0 && r.upper <= 1.0 + 1e-3);
        assert!(r.lower >= 1.0 - 1e-3);
    }

    #[test]
    fn parabola_peak_interior() {
        // max x(1-x) on [0,1] = 0.25
        let x = SymExpr::from_atom(var("x"));
        let e = x.sub(&x.powi(2, G));
        let r = maximize(&Objective::Value(&e), &env1("x", 0.0, 1.0), &OptConfig::default());
        assert!(r.upper >= 0.25 && r.upper <= 0.2503, "upper {}", r.upper);
        assert!(r.lower >= 0.2497);
    }

    #[test]
    fn minimize_endpoints_and_linear() {
        let x = SymExpr::from_atom(var("x"));
        let r = minimize(&x, &env1("x", 2.0, 3.0), &OptConfig::default());
        assert!(r.lower <= 2.0 && r.lower >= 2.0 - 1e-9);
        assert!(r.upper <= 2.0 + 1e-9);

        let s = SymExpr::func(crate::sym::FuncKind::Sin, x.clone());
        let r = minimize(&s, &env1("x", 0.0, std::f64::consts::PI), &OptConfig::default());
        assert!(r.lower <= 0.0 && r.lower >= -1e-6, "lower {}", r.lower);
        assert!(r.upper <= 1e-6, "upper {}", r.upper);
    }

    #[test]
    fn abs_sum_objective() {
        // |x| + |1 - x| on [-1, 1]: max is 3 at x = -1.
        let x = SymExpr::from_atom(var("x"));
        let one_minus = SymExpr::one().sub(&x);
        let terms = vec![(1.0, x.clone()), (1.0, one_minus)];
        let r = maximize(
            &Objective::AbsSum {
                terms: &terms,
                constant: 0.0,
            },
            &env1("x", -1.0, 1.0),
            &OptConfig::default(),
        );
        assert!(r.upper >= 3.0 - 1e-9 && r.upper <= 3.0 + 1e-3, "{}", r.upper);
        assert!(r.lower >= 3.0 - 1e-3);
    }

    #[test]
    fn domain_holes_keep_sound_upper() {
        // 1/x over [-1, 2]: unevaluable near 0; the sound upper must
        // still dominate values at probe-able points.
        let x = SymExpr::from_atom(var("x"));
        let e = SymExpr::one().div(&x, G);
        let mut cfg = OptConfig::default();
        cfg.max_boxes = 2000;
        let r = maximize(&Objective::Value(&e), &env1("x", -1.0, 2.0), &cfg);
        assert!(r.upper >= 1e6, "upper {} should blow up near 0+", r.upper);
        assert!(!r.converged);
    }

    #[test]
    fn monotone_refinement_trace() {
        let x = SymExpr::from_atom(var("x"));
        let y = SymExpr::from_atom(var("y"));
        // Correlated nonlinear objective over two dims.
        let e = x.mul(&y, G).sub(&x.powi(2, G)).add(&y.powi(2, G));
        let mut env = HashMap::new();
        env.insert(var("x"), Interval::new(-1.0, 2.0));
        env.insert(var("y"), Interval::new(-2.0, 1.0));
        let mut cfg = OptConfig::default();
        cfg.record_trace = true;
        let r = maximize(&Objective::Value(&e), &env, &cfg);
        for w in r.trace.windows(2) {
            assert!(w[1].0 <= w[0].0 + 1e-12, "upper not monotone: {w:?}");
            assert!(w[1].1 >= w[0].1 - 1e-12, "lower not monotone: {w:?}");
        }
        assert!(r.converged);
    }

    #[test]
    fn deterministic_repeats() {
        let x = SymExpr::from_atom(var("x"));
        let y = SymExpr::from_atom(var("y"));
        let e = x.mul(&y, G).add(&x.powi(3, G)).sub(&y.powi(2, G));
        let mut env = HashMap::new();
        env.insert(var("x"), Interval::new(-1.5, 1.5));
        env.insert(var("y"), Interval::new(-1.0, 3.0));
        let cfg = OptConfig::default();
        let a = maximize(&Objective::Value(&e), &env, &cfg);
        let b = maximize(&Objective::Value(&e), &env, &cfg);
        assert_eq!(a.upper.to_bits(), b.upper.to_bits());
        assert_eq!(a.lower.to_bits(), b.lower.to_bits());
        assert_eq!(a.boxes_processed, b.boxes_processed);
    }

    /// Soundness fuzz on random polynomials: sampled values never exceed
    /// the reported upper bound.
    #[test]
    fn random_polynomials_sound() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..60 {
            let nvars = rng.gen_range(1..4usize);
            let vars: Vec<Atom> = (0..nvars).map(|i| var(&format!("v{i}"))).collect();
            let mut e = SymExpr::zero();
            for _ in 0..rng.gen_range(1..6) {
                let mut m = SymExpr::from_f64(rng.gen_range(-3.0..3.0f64));
                for v in &vars {
                    let p = rng.gen_range(0..3);
                    if p > 0 {
                        m = m.mul(&SymExpr::from_atom(v.clone()).powi(p, G), G);
                    }
                }
                e = e.add(&m);
            }
            let mut env = HashMap::new();
            let mut ranges = Vec::new();
            for v in &vars {
                let lo = rng.gen_range(-2.0..1.0f64);
                let hi = lo + rng.gen_range(0.1..2.0f64);
                env.insert(v.clone(), Interval::new(lo, hi));
                ranges.push((lo, hi));
            }
            let mut cfg = OptConfig::default();
            cfg.max_boxes = 500;
            let r = maximize(&Objective::Value(&e), &env, &cfg);
            for _ in 0..2000 {
                let mut penv = HashMap::new();
                for (v, (lo, hi)) in vars.iter().zip(&ranges) {
                    penv.insert(v.clone(), Interval::point(rng.gen_range(*lo..=*hi)));
                }
                let val = crate::sym::eval_interval(&e, &penv).unwrap();
                assert!(
                    val.lo <= r.upper,
                    "sample {} beats upper {} on {e}",
                    val.lo,
                    r.upper
                );
            }
        }
    }
}
