//! Closed floating-point intervals with outward rounding.
//!
//! Every operation returns an enclosure of the exact real-valued result:
//! endpoints are computed in round-to-nearest and then stepped one ulp
//! outward, so containment holds without touching the FPU rounding mode.
//! Overflowing endpoints saturate at `f64::MAX` and set a sticky
//! `overflowed` flag instead of going infinite.

use crate::ir::Op;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntervalError {
    /// Division by an interval containing zero; the caller may bisect.
    #[error("division by an interval containing zero")]
    DomainSplit,
    /// Operand entirely outside the operator's domain (sqrt/log).
    #[error("{op} applied to interval outside its domain")]
    DomainError { op: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub overflowed: bool,
}

fn down(x: f64) -> f64 {
    if x.is_finite() {
        x.next_down()
    } else {
        x
    }
}

fn up(x: f64) -> f64 {
    if x.is_finite() {
        x.next_up()
    } else {
        x
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "reversed interval [{lo}, {hi}]");
        assert!(!lo.is_nan() && !hi.is_nan(), "NaN interval endpoint");
        Interval {
            lo,
            hi,
            overflowed: false,
        }
        .saturate()
    }

    pub fn point(x: f64) -> Self {
        Self::new(x, x)
    }

    pub fn zero() -> Self {
        Self::point(0.0)
    }

    /// `[lo, hi]` after rounding both endpoints one ulp outward.
    pub fn outward(lo: f64, hi: f64) -> Self {
        Self::raw(down(lo), up(hi))
    }

    fn raw(lo: f64, hi: f64) -> Self {
        debug_assert!(!lo.is_nan() && !hi.is_nan());
        Interval {
            lo,
            hi,
            overflowed: false,
        }
        .saturate()
    }

    fn saturate(mut self) -> Self {
        if self.lo == f64::NEG_INFINITY {
            self.lo = f64::MIN;
            self.overflowed = true;
        }
        if self.hi == f64::INFINITY {
            self.hi = f64::MAX;
            self.overflowed = true;
        }
        self
    }

    fn carry(mut self, a: &Interval, b: Option<&Interval>) -> Self {
        self.overflowed |= a.overflowed || b.map_or(false, |b| b.overflowed);
        self
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        let m = self.lo * 0.5 + self.hi * 0.5;
        if m.is_finite() {
            m.clamp(self.lo, self.hi)
        } else {
            self.lo
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Magnitude: max(|lo|, |hi|).
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Mignitude: min |v| over v in the interval (0 if it straddles 0).
    pub fn mig(&self) -> f64 {
        if self.lo > 0.0 {
            self.lo
        } else if self.hi < 0.0 {
            -self.hi
        } else {
            0.0
        }
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
            overflowed: self.overflowed || other.overflowed,
        }
    }

    pub fn add(&self, rhs: &Interval) -> Interval {
        Interval::outward(self.lo + rhs.lo, self.hi + rhs.hi).carry(self, Some(rhs))
    }

    pub fn sub(&self, rhs: &Interval) -> Interval {
        Interval::outward(self.lo - rhs.hi, self.hi - rhs.lo).carry(self, Some(rhs))
    }

    pub fn neg(&self) -> Interval {
        // Sign flips are exact; no outward step.
        Interval {
            lo: -self.hi,
            hi: -self.lo,
            overflowed: self.overflowed,
        }
    }

    pub fn mul(&self, rhs: &Interval) -> Interval {
        let cands = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for c in cands {
            // 0 * inf never occurs: endpoints are finite by construction.
            lo = lo.min(c);
            hi = hi.max(c);
        }
        Interval::outward(lo, hi).carry(self, Some(rhs))
    }

    pub fn scale(&self, k: f64) -> Interval {
        self.mul(&Interval::point(k))
    }

    pub fn div(&self, rhs: &Interval) -> Result<Interval, IntervalError> {
        if rhs.lo <= 0.0 && rhs.hi >= 0.0 {
            return Err(IntervalError::DomainSplit);
        }
        let cands = [
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for c in cands {
            lo = lo.min(c);
            hi = hi.max(c);
        }
        Ok(Interval::outward(lo, hi).carry(self, Some(rhs)))
    }

    pub fn recip(&self) -> Result<Interval, IntervalError> {
        Interval::point(1.0).div(self)
    }

    /// Dependency-aware integer power. Even exponents stay non-negative,
    /// which is what plain repeated multiplication loses.
    pub fn powi(&self, n: i32) -> Result<Interval, IntervalError> {
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        if n == 0 {
            return Ok(Interval::point(1.0));
        }
        if n == 1 {
            return Ok(*self);
        }
        let lo_p = powi_round(self.lo, n);
        let hi_p = powi_round(self.hi, n);
        let iv = if n % 2 == 1 {
            Interval::outward(lo_p, hi_p)
        } else if self.lo >= 0.0 {
            Interval::outward(lo_p, hi_p)
        } else if self.hi <= 0.0 {
            Interval::outward(hi_p, lo_p)
        } else {
            Interval::outward(0.0, lo_p.max(hi_p)).with_exact_lo(0.0)
        };
        Ok(iv.carry(self, None))
    }

    fn with_exact_lo(mut self, lo: f64) -> Self {
        self.lo = lo;
        self
    }

    pub fn sqrt(&self) -> Result<Interval, IntervalError> {
        if self.hi < 0.0 {
            return Err(IntervalError::DomainError { op: "sqrt" });
        }
        let lo = self.lo.max(0.0);
        // IEEE sqrt is correctly rounded; 1 ulp outward is still applied
        // for uniformity, clamped at zero.
        let r = Interval::outward(lo.sqrt(), self.hi.sqrt());
        Ok(Interval::raw(r.lo.max(0.0), r.hi).carry(self, None))
    }

    pub fn exp(&self) -> Interval {
        let r = transcendental_outward(self.lo.exp(), self.hi.exp());
        Interval::raw(r.0.max(0.0), r.1).carry(self, None)
    }

    pub fn log(&self) -> Result<Interval, IntervalError> {
        if self.hi <= 0.0 {
            return Err(IntervalError::DomainError { op: "log" });
        }
        let lo = if self.lo <= 0.0 {
            f64::NEG_INFINITY
        } else {
            transcendental_outward(self.lo.ln(), self.lo.ln()).0
        };
        let hi = transcendental_outward(self.hi.ln(), self.hi.ln()).1;
        Ok(Interval::raw(lo, hi).carry(self, None))
    }

    pub fn sin(&self) -> Interval {
        trig(self, false)
    }

    pub fn cos(&self) -> Interval {
        trig(self, true)
    }

    /// Applies `op` with interval semantics; the second operand is
    /// required exactly for the binary operators.
    pub fn apply(op: Op, a: &Interval, b: Option<&Interval>) -> Result<Interval, IntervalError> {
        let b2 = || b.expect("binary operator expects two operands");
        Ok(match op {
            Op::Add => a.add(b2()),
            Op::Sub => a.sub(b2()),
            Op::Mul => a.mul(b2()),
            Op::Div => a.div(b2())?,
            Op::Neg => a.neg(),
            Op::Sqrt => a.sqrt()?,
            Op::Exp => a.exp(),
            Op::Log => a.log()?,
            Op::Sin => a.sin(),
            Op::Cos => a.cos(),
            Op::Const | Op::Input => *a,
        })
    }
}

/// x^n in rounds-to-nearest; used only as a seed for outward rounding.
fn powi_round(x: f64, n: i32) -> f64 {
    x.powi(n)
}

/// Library transcendentals are not correctly rounded; widen by 2 ulp on
/// each side instead of 1.
fn transcendental_outward(lo: f64, hi: f64) -> (f64, f64) {
    (down(down(lo)), up(up(hi)))
}

/// Enclosure of sin (or cos) over the interval: locate the critical
/// points k*pi/2 inside the range by integer analysis, take endpoint
/// values on monotonic pieces, widen 2 ulp.
fn trig(iv: &Interval, is_cos: bool) -> Interval {
    let f = |x: f64| if is_cos { x.cos() } else { x.sin() };
    // Past this width (or magnitude) argument reduction in f64 is not
    // trustworthy enough to localize extrema; fall back to [-1, 1].
    const SAFE: f64 = 1e15;
    if iv.width() >= 2.0 * std::f64::consts::PI || iv.lo.abs() > SAFE || iv.hi.abs() > SAFE {
        return Interval::raw(-1.0, 1.0).carry(iv, None);
    }
    let (mut lo, mut hi) = {
        let (a, b) = (f(iv.lo), f(iv.hi));
        (a.min(b), a.max(b))
    };
    // Quarter-period indices overlapping the interval. The +-1 slack
    // absorbs rounding in the division.
    let k_lo = (iv.lo / std::f64::consts::FRAC_PI_2).floor() as i64 - 1;
    let k_hi = (iv.hi / std::f64::consts::FRAC_PI_2).ceil() as i64 + 1;
    for k in k_lo..=k_hi {
        // sin peaks at k ≡ 1 (mod 4), bottoms at k ≡ 3; cos at 0 and 2.
        let m = k.rem_euclid(4);
        let peak = if is_cos { m == 0 } else { m == 1 };
        let trough = if is_cos { m == 2 } else { m == 3 };
        if !peak && !trough {
            continue;
        }
        let x = k as f64 * std::f64::consts::FRAC_PI_2;
        // Conservative membership test: pad by one ulp of the boundary.
        if x >= down(iv.lo) && x <= up(iv.hi) {
            if peak {
                hi = 1.0;
            } else {
                lo = -1.0;
            }
        }
    }
    let (lo, hi) = transcendental_outward(lo, hi);
    Interval::raw(lo.max(-1.0), hi.min(1.0)).carry(iv, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn add_contains_and_is_tight() {
        let r = Interval::new(1.0, 2.0).add(&Interval::new(3.0, 4.0));
        assert!(r.lo <= 4.0 && r.hi >= 6.0);
        assert!(4.0 - r.lo <= 4.0 * f64::EPSILON);
        assert!(r.hi - 6.0 <= 8.0 * f64::EPSILON);
    }

    #[test]
    fn mul_endpoint_products() {
        let r = Interval::new(-1.0, 5.0).mul(&Interval::new(-1.0, 5.0));
        assert!(r.contains(-5.0) && r.contains(25.0));
        assert!(r.lo >= -5.0 - 1e-12 && r.hi <= 25.0 + 1e-12);
    }

    #[test]
    fn pow_is_dependency_aware() {
        let x = Interval::new(-1.0, 5.0);
        let p3 = x.powi(3).unwrap();
        assert!(p3.contains(-1.0) && p3.contains(125.0));
        assert!(p3.lo >= -1.0 - 1e-12, "lo {} not near -1", p3.lo);
        assert!(p3.hi <= 125.0 + 1e-10);

        let p2 = Interval::new(-1.0, 1.0).powi(2).unwrap();
        assert_eq!(p2.lo, 0.0);
        assert!(p2.hi >= 1.0 && p2.hi <= 1.0 + 1e-15);

        assert_eq!(Interval::new(2.0, 3.0).powi(0).unwrap(), Interval::point(1.0));
    }

    #[test]
    fn pow_tighter_than_repeated_mul() {
        let x = Interval::new(-1.0, 5.0);
        let rep = x.mul(&x).mul(&x);
        let pow = x.powi(3).unwrap();
        assert!(rep.contains_interval(&pow));
        assert!(rep.lo < pow.lo); // [-25,125] vs [-1,125]
    }

    #[test]
    fn div_by_zero_straddle_is_split_error() {
        let e = Interval::new(1.0, 2.0).div(&Interval::new(-1.0, 1.0));
        assert_eq!(e.unwrap_err(), IntervalError::DomainSplit);
    }

    #[test]
    fn sqrt_log_domains() {
        assert!(Interval::new(-4.0, -1.0).sqrt().is_err());
        // Partial overlap intersects with the validity set first.
        let r = Interval::new(-1.0, 4.0).sqrt().unwrap();
        assert!(r.lo <= 0.0 && r.hi >= 2.0);
        assert!(Interval::new(-2.0, 0.0).log().is_err());
    }

    #[test]
    fn trig_critical_points() {
        let s = Interval::new(0.0, std::f64::consts::PI).sin();
        assert!(s.hi >= 1.0 && s.lo <= 0.0 && s.lo >= -1e-10);
        let c = Interval::new(0.0, std::f64::consts::PI).cos();
        assert!(c.lo <= -1.0 + 1e-15 && c.hi >= 1.0 - 1e-15);
        let wide = Interval::new(-100.0, 100.0).sin();
        assert_eq!((wide.lo, wide.hi), (-1.0, 1.0));
    }

    #[test]
    fn mag_mig() {
        assert_eq!(Interval::new(-3.0, 2.0).mag(), 3.0);
        assert_eq!(Interval::zero().mag(), 0.0);
        assert_eq!(Interval::new(1e-16, 2e-16).mag(), 2e-16);
        assert_eq!(Interval::new(-3.0, 2.0).mig(), 0.0);
        assert_eq!(Interval::new(2.0, 3.0).mig(), 2.0);
        assert_eq!(Interval::new(-3.0, -2.0).mig(), 2.0);
    }

    #[test]
    fn overflow_saturates() {
        let big = Interval::point(f64::MAX);
        let r = big.mul(&Interval::point(2.0));
        assert!(r.overflowed);
        assert_eq!(r.hi, f64::MAX);
        // The flag is sticky through later ops.
        assert!(r.add(&Interval::point(1.0)).overflowed);
    }

    /// Containment fuzz: exact results of point ops lie inside the
    /// degenerate-interval op result.
    #[test]
    fn containment_fuzz() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xC0FFEE);
        for _ in 0..100_000 {
            let a = rng.gen_range(-1e6..1e6f64);
            let b = rng.gen_range(-1e6..1e6f64);
            let ia = Interval::point(a);
            let ib = Interval::point(b);
            let checks: [(f64, Interval); 3] = [
                (a + b, ia.add(&ib)),
                (a - b, ia.sub(&ib)),
                (a * b, ia.mul(&ib)),
            ];
            for (exact, iv) in checks {
                assert!(
                    iv.contains(exact),
                    "{exact} not in [{}, {}]",
                    iv.lo,
                    iv.hi
                );
            }
            if b != 0.0 {
                assert!(ia.div(&ib).unwrap().contains(a / b));
            }
            if a > 0.0 {
                assert!(ia.sqrt().unwrap().contains(a.sqrt()));
                assert!(ia.log().unwrap().contains(a.ln()));
            }
            let small = a / 1e4;
            let isml = Interval::point(small);
            assert!(isml.exp().contains(small.exp()));
            assert!(isml.sin().contains(small.sin()));
            assert!(isml.cos().contains(small.cos()));
        }
    }

    /// Inclusion monotonicity, the branch-and-bound prerequisite.
    #[test]
    fn monotonicity_fuzz() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let sub = |outer: &Interval, rng: &mut rand_chacha::ChaCha8Rng| {
            let a = rng.gen_range(outer.lo..=outer.hi);
            let b = rng.gen_range(outer.lo..=outer.hi);
            Interval::new(a.min(b), a.max(b))
        };
        for _ in 0..20_000 {
            let a0 = rng.gen_range(-100.0..100.0f64);
            let a1 = rng.gen_range(0.0..10.0f64);
            let outer_a = Interval::new(a0, a0 + a1);
            let b0 = rng.gen_range(-100.0..100.0f64);
            let b1 = rng.gen_range(0.0..10.0f64);
            let outer_b = Interval::new(b0, b0 + b1);
            let inner_a = sub(&outer_a, &mut rng);
            let inner_b = sub(&outer_b, &mut rng);

            assert!(outer_a.add(&outer_b).contains_interval(&inner_a.add(&inner_b)));
            assert!(outer_a.sub(&outer_b).contains_interval(&inner_a.sub(&inner_b)));
            assert!(outer_a.mul(&outer_b).contains_interval(&inner_a.mul(&inner_b)));
            if let (Ok(o), Ok(i)) = (outer_a.div(&outer_b), inner_a.div(&inner_b)) {
                assert!(o.contains_interval(&i));
            }
            for n in [2, 3, 4, 5] {
                assert!(outer_a
                    .powi(n)
                    .unwrap()
                    .contains_interval(&inner_a.powi(n).unwrap()));
            }
            assert!(outer_a.sin().contains_interval(&inner_a.sin()));
            assert!(outer_a.cos().contains_interval(&inner_a.cos()));
            let ea = Interval::new(outer_a.lo / 100.0, outer_a.hi / 100.0);
            let ia = Interval::new(
                (inner_a.lo / 100.0).max(ea.lo),
                (inner_a.hi / 100.0).min(ea.hi),
            );
            assert!(ea.exp().contains_interval(&ia.exp()));
        }
    }
}
