//! Software high-precision float for shadow evaluation.
//!
//! 113 mantissa bits (binary128-equivalent), round-to-nearest-even.
//! Add, sub, mul, div and sqrt are correctly rounded; the elementary
//! functions use argument reduction plus series evaluation carried out
//! in this same arithmetic and are accurate to a few ulps, which is
//! vastly below anything the double-precision comparisons can see.

use std::cmp::Ordering;

const P: u32 = 113;
const MANT_MSB: u128 = 1 << (P - 1); // bit 112
const MANT_LIM: u128 = 1 << P;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Finite,
    Inf,
    Nan,
}

#[derive(Debug, Clone, Copy)]
pub struct HpFloat {
    neg: bool,
    /// Unbiased exponent; the value is `mant * 2^(exp - 112)`.
    exp: i32,
    /// Zero, or normalized into [2^112, 2^113).
    mant: u128,
    kind: Kind,
}

// 256-bit scratch value, hi * 2^128 + lo.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct U256 {
    hi: u128,
    lo: u128,
}

impl U256 {
    const ZERO: U256 = U256 { hi: 0, lo: 0 };

    fn from_hi(hi: u128) -> U256 {
        U256 { hi, lo: 0 }
    }

    fn is_zero(self) -> bool {
        self.hi == 0 && self.lo == 0
    }

    fn top_bit(self) -> u32 {
        // Index of the most significant set bit; caller checks nonzero.
        if self.hi != 0 {
            255 - self.hi.leading_zeros()
        } else {
            127 - self.lo.leading_zeros()
        }
    }

    fn add(self, rhs: U256) -> U256 {
        let (lo, c) = self.lo.overflowing_add(rhs.lo);
        U256 {
            hi: self.hi + rhs.hi + c as u128,
            lo,
        }
    }

    fn sub(self, rhs: U256) -> U256 {
        let (lo, b) = self.lo.overflowing_sub(rhs.lo);
        U256 {
            hi: self.hi - rhs.hi - b as u128,
            lo,
        }
    }

    fn sub_one(self) -> U256 {
        self.sub(U256 { hi: 0, lo: 1 })
    }

    /// Logical right shift reporting whether any set bit was discarded.
    fn shr_sticky(self, n: u32) -> (U256, bool) {
        if n == 0 {
            return (self, false);
        }
        if n >= 256 {
            return (U256::ZERO, !self.is_zero());
        }
        let lost = if n >= 128 {
            self.lo != 0 || (n > 128 && self.hi & ((1 << (n - 128)) - 1) != 0)
        } else {
            self.lo & ((1u128 << n) - 1) != 0
        };
        let shifted = if n >= 128 {
            U256 {
                hi: 0,
                lo: self.hi >> (n - 128),
            }
        } else {
            U256 {
                hi: self.hi >> n,
                lo: (self.lo >> n) | (self.hi << (128 - n)),
            }
        };
        (shifted, lost)
    }

    fn shl(self, n: u32) -> U256 {
        if n == 0 {
            return self;
        }
        if n >= 128 {
            U256 {
                hi: self.lo << (n - 128),
                lo: 0,
            }
        } else {
            U256 {
                hi: (self.hi << n) | (self.lo >> (128 - n)),
                lo: self.lo << n,
            }
        }
    }

    fn bit_pair(self, i: u32) -> u128 {
        // Bits (2i+1, 2i).
        let (s, _) = self.shr_sticky(2 * i);
        s.lo & 3
    }
}

fn mul_u128(a: u128, b: u128) -> U256 {
    let (ah, al) = (a >> 64, a & u128::from(u64::MAX));
    let (bh, bl) = (b >> 64, b & u128::from(u64::MAX));
    let ll = al * bl;
    let lh = al * bh;
    let hl = ah * bl;
    let hh = ah * bh;
    let mid = (ll >> 64) + (lh & u128::from(u64::MAX)) + (hl & u128::from(u64::MAX));
    U256 {
        hi: hh + (lh >> 64) + (hl >> 64) + (mid >> 64),
        lo: (mid << 64) | (ll & u128::from(u64::MAX)),
    }
}

/// Round a normalized wide value: keep 113 bits below `top`, round to
/// nearest-even folding `sticky` into the discarded part. Returns the
/// mantissa and the exponent bump from a rounding carry.
fn round_wide(r: U256, top: u32, sticky: bool) -> (u128, i32) {
    debug_assert!(top >= P - 1);
    let shift = top - (P - 1);
    let (kept, lost_low) = r.shr_sticky(shift);
    let mut mant = kept.lo;
    debug_assert!(kept.hi == 0 && mant >= MANT_MSB && mant < MANT_LIM);
    let guard = if shift == 0 {
        false
    } else {
        let (g, _) = r.shr_sticky(shift - 1);
        g.lo & 1 == 1
    };
    let below_guard = if shift <= 1 {
        sticky
    } else {
        let mask_bits = shift - 1;
        let (_, l) = r.shr_sticky(mask_bits);
        // l reports bits below mask_bits
        l || sticky
    };
    let _ = lost_low;
    if guard && (below_guard || mant & 1 == 1) {
        mant += 1;
        if mant == MANT_LIM {
            return (MANT_MSB, 1);
        }
    }
    (mant, 0)
}

impl HpFloat {
    pub const ZERO: HpFloat = HpFloat {
        neg: false,
        exp: 0,
        mant: 0,
        kind: Kind::Finite,
    };

    pub const ONE: HpFloat = HpFloat {
        neg: false,
        exp: 0,
        mant: MANT_MSB,
        kind: Kind::Finite,
    };

    const LN2: HpFloat = HpFloat {
        neg: false,
        exp: -1,
        mant: 7198051856247353947080814903691238,
        kind: Kind::Finite,
    };

    const FRAC_PI_2: HpFloat = HpFloat {
        neg: false,
        exp: 0,
        mant: 8156040833015188200833743081374136,
        kind: Kind::Finite,
    };

    const SQRT2_MANT: u128 = 7343016637207168931428032607349397;

    fn nan() -> HpFloat {
        HpFloat {
            neg: false,
            exp: 0,
            mant: 0,
            kind: Kind::Nan,
        }
    }

    fn inf(neg: bool) -> HpFloat {
        HpFloat {
            neg,
            exp: 0,
            mant: 0,
            kind: Kind::Inf,
        }
    }

    fn finite(neg: bool, exp: i64, mant: u128) -> HpFloat {
        debug_assert!(mant == 0 || (mant >= MANT_MSB && mant < MANT_LIM));
        if mant == 0 {
            return HpFloat {
                neg,
                ..HpFloat::ZERO
            };
        }
        // The exponent range is astronomically wider than anything a
        // straight-line double-precision program can reach; clamp to
        // keep i32 arithmetic safe.
        if exp > i64::from(i32::MAX / 2) {
            return HpFloat::inf(neg);
        }
        if exp < i64::from(i32::MIN / 2) {
            return HpFloat {
                neg,
                ..HpFloat::ZERO
            };
        }
        HpFloat {
            neg,
            exp: exp as i32,
            mant,
            kind: Kind::Finite,
        }
    }

    pub fn is_nan(&self) -> bool {
        self.kind == Kind::Nan
    }

    pub fn is_infinite(&self) -> bool {
        self.kind == Kind::Inf
    }

    pub fn is_finite(&self) -> bool {
        self.kind == Kind::Finite
    }

    pub fn is_zero(&self) -> bool {
        self.kind == Kind::Finite && self.mant == 0
    }

    pub fn is_sign_negative(&self) -> bool {
        self.neg
    }

    pub fn from_f64(x: f64) -> HpFloat {
        if x.is_nan() {
            return HpFloat::nan();
        }
        if x.is_infinite() {
            return HpFloat::inf(x < 0.0);
        }
        let bits = x.to_bits();
        let neg = bits >> 63 == 1;
        let ebits = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        if ebits == 0 {
            if frac == 0 {
                return HpFloat {
                    neg,
                    ..HpFloat::ZERO
                };
            }
            // Subnormal: value = frac * 2^-1074.
            let t = 63 - frac.leading_zeros();
            let mant = (frac as u128) << (112 - t);
            return HpFloat::finite(neg, i64::from(t) - 1074, mant);
        }
        let mant53 = (1u64 << 52) | frac;
        HpFloat::finite(neg, ebits - 1023, (mant53 as u128) << 60)
    }

    pub fn from_i64(n: i64) -> HpFloat {
        if n == 0 {
            return HpFloat::ZERO;
        }
        let neg = n < 0;
        let mag = n.unsigned_abs() as u128;
        let t = 127 - mag.leading_zeros();
        let mant = if t <= 112 {
            mag << (112 - t)
        } else {
            mag >> (t - 112) // i64 never needs this branch to round
        };
        HpFloat::finite(neg, i64::from(t), mant)
    }

    pub fn to_f64(&self) -> f64 {
        match self.kind {
            Kind::Nan => f64::NAN,
            Kind::Inf => {
                if self.neg {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            }
            Kind::Finite => {
                if self.mant == 0 {
                    return if self.neg { -0.0 } else { 0.0 };
                }
                // Round 113 -> 53 bits.
                let mut m53 = self.mant >> 60;
                let guard = (self.mant >> 59) & 1 == 1;
                let sticky = self.mant & ((1 << 59) - 1) != 0;
                let mut exp = i64::from(self.exp);
                if guard && (sticky || m53 & 1 == 1) {
                    m53 += 1;
                    if m53 == 1 << 53 {
                        m53 >>= 1;
                        exp += 1;
                    }
                }
                let mut v = m53 as f64;
                let mut k = exp - 52;
                // Scale in exact power-of-two steps to stay in range.
                while k > 0 {
                    let step = k.min(1000);
                    v *= (2f64).powi(step as i32);
                    if v.is_infinite() {
                        break;
                    }
                    k -= step;
                }
                while k < 0 {
                    let step = (-k).min(1000);
                    v *= (2f64).powi(-(step as i32));
                    if v == 0.0 {
                        break;
                    }
                    k -= -step;
                }
                if self.neg {
                    -v
                } else {
                    v
                }
            }
        }
    }

    pub fn neg(&self) -> HpFloat {
        let mut r = *self;
        if !r.is_nan() {
            r.neg = !r.neg;
        }
        r
    }

    pub fn abs(&self) -> HpFloat {
        let mut r = *self;
        if !r.is_nan() {
            r.neg = false;
        }
        r
    }

    fn cmp_mag(&self, other: &HpFloat) -> Ordering {
        // Finite, nonzero magnitudes.
        (self.exp, self.mant).cmp(&(other.exp, other.mant))
    }

    pub fn add(&self, rhs: &HpFloat) -> HpFloat {
        match (self.kind, rhs.kind) {
            (Kind::Nan, _) | (_, Kind::Nan) => HpFloat::nan(),
            (Kind::Inf, Kind::Inf) => {
                if self.neg == rhs.neg {
                    *self
                } else {
                    HpFloat::nan()
                }
            }
            (Kind::Inf, _) => *self,
            (_, Kind::Inf) => *rhs,
            (Kind::Finite, Kind::Finite) => {
                if self.is_zero() {
                    return if rhs.is_zero() {
                        HpFloat {
                            neg: self.neg && rhs.neg,
                            ..HpFloat::ZERO
                        }
                    } else {
                        *rhs
                    };
                }
                if rhs.is_zero() {
                    return *self;
                }
                let (big, small) = if self.cmp_mag(rhs) == Ordering::Less {
                    (rhs, self)
                } else {
                    (self, rhs)
                };
                let shift = (i64::from(big.exp) - i64::from(small.exp)).min(300) as u32;
                let a = U256::from_hi(big.mant);
                let (b, sticky) = U256::from_hi(small.mant).shr_sticky(shift);
                if big.neg == small.neg {
                    let r = a.add(b);
                    let top = r.top_bit();
                    let (mant, bump) = round_wide(r, top, sticky);
                    HpFloat::finite(
                        big.neg,
                        i64::from(big.exp) - 240 + i64::from(top) + i64::from(bump),
                        mant,
                    )
                } else {
                    let mut r = a.sub(b);
                    if sticky {
                        debug_assert!(!r.is_zero());
                        r = r.sub_one();
                    }
                    if r.is_zero() {
                        return HpFloat::ZERO;
                    }
                    let top = r.top_bit();
                    if top < P - 1 {
                        // Heavy cancellation is exact: no lost bits.
                        debug_assert!(!sticky);
                        let mant = r.lo << (P - 1 - top);
                        return HpFloat::finite(
                            big.neg,
                            i64::from(big.exp) - 240 + i64::from(top),
                            mant,
                        );
                    }
                    let (mant, bump) = round_wide(r, top, sticky);
                    HpFloat::finite(
                        big.neg,
                        i64::from(big.exp) - 240 + i64::from(top) + i64::from(bump),
                        mant,
                    )
                }
            }
        }
    }

    pub fn sub(&self, rhs: &HpFloat) -> HpFloat {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &HpFloat) -> HpFloat {
        let neg = self.neg != rhs.neg;
        match (self.kind, rhs.kind) {
            (Kind::Nan, _) | (_, Kind::Nan) => HpFloat::nan(),
            (Kind::Inf, _) => {
                if rhs.is_zero() {
                    HpFloat::nan()
                } else {
                    HpFloat::inf(neg)
                }
            }
            (_, Kind::Inf) => {
                if self.is_zero() {
                    HpFloat::nan()
                } else {
                    HpFloat::inf(neg)
                }
            }
            (Kind::Finite, Kind::Finite) => {
                if self.is_zero() || rhs.is_zero() {
                    return HpFloat {
                        neg,
                        ..HpFloat::ZERO
                    };
                }
                let p = mul_u128(self.mant, rhs.mant);
                let top = p.top_bit();
                let (mant, bump) = round_wide(p, top, false);
                HpFloat::finite(
                    neg,
                    i64::from(self.exp) + i64::from(rhs.exp) - 224 + i64::from(top)
                        + i64::from(bump),
                    mant,
                )
            }
        }
    }

    pub fn div(&self, rhs: &HpFloat) -> HpFloat {
        let neg = self.neg != rhs.neg;
        match (self.kind, rhs.kind) {
            (Kind::Nan, _) | (_, Kind::Nan) => HpFloat::nan(),
            (Kind::Inf, Kind::Inf) => HpFloat::nan(),
            (Kind::Inf, _) => HpFloat::inf(neg),
            (_, Kind::Inf) => HpFloat {
                neg,
                ..HpFloat::ZERO
            },
            (Kind::Finite, Kind::Finite) => {
                if rhs.is_zero() {
                    return if self.is_zero() {
                        HpFloat::nan()
                    } else {
                        HpFloat::inf(neg)
                    };
                }
                if self.is_zero() {
                    return HpFloat {
                        neg,
                        ..HpFloat::ZERO
                    };
                }
                // 8 rounds of 15 quotient bits: Q = floor(a << 120 / b).
                let mut q: u128 = 0;
                let mut rem = self.mant;
                for _ in 0..8 {
                    let n = rem << 15;
                    q = (q << 15) | (n / rhs.mant);
                    rem = n % rhs.mant;
                }
                let sticky = rem != 0;
                let top = 127 - q.leading_zeros();
                let (mant, bump) = round_wide(U256 { hi: 0, lo: q }, top, sticky);
                HpFloat::finite(
                    neg,
                    i64::from(self.exp) - i64::from(rhs.exp) - 120 + i64::from(top)
                        + i64::from(bump),
                    mant,
                )
            }
        }
    }

    pub fn sqrt(&self) -> HpFloat {
        match self.kind {
            Kind::Nan => HpFloat::nan(),
            Kind::Inf => {
                if self.neg {
                    HpFloat::nan()
                } else {
                    *self
                }
            }
            Kind::Finite => {
                if self.is_zero() {
                    return *self;
                }
                if self.neg {
                    return HpFloat::nan();
                }
                let (m, e) = if self.exp.rem_euclid(2) == 1 {
                    (U256::from_hi(self.mant).shl(1), i64::from(self.exp) - 1)
                } else {
                    (U256::from_hi(self.mant), i64::from(self.exp))
                };
                // m now holds mant (possibly doubled) at bits [240/241..128];
                // shift down so N = mant' << 114.
                let (n, z) = m.shr_sticky(14);
                debug_assert!(!z);
                let (root, rem_nonzero) = isqrt_u256(n);
                let top = 127 - root.leading_zeros();
                let (mant, bump) =
                    round_wide(U256 { hi: 0, lo: root }, top, rem_nonzero);
                HpFloat::finite(false, e / 2 - 113 + i64::from(top) + i64::from(bump), mant)
            }
        }
    }

    /// exp(x) via r = x - k ln2, |r| <= ln2/2, then the Taylor series.
    pub fn exp(&self) -> HpFloat {
        match self.kind {
            Kind::Nan => HpFloat::nan(),
            Kind::Inf => {
                if self.neg {
                    HpFloat::ZERO
                } else {
                    *self
                }
            }
            Kind::Finite => {
                let xf = self.to_f64();
                if xf > 1e9 {
                    return HpFloat::inf(false);
                }
                if xf < -1e9 {
                    return HpFloat::ZERO;
                }
                let k = (xf / std::f64::consts::LN_2).round() as i64;
                let r = self.sub(&HpFloat::from_i64(k).mul(&HpFloat::LN2));
                let mut sum = HpFloat::ONE;
                let mut term = HpFloat::ONE;
                for n in 1..60 {
                    term = term.mul(&r).div(&HpFloat::from_i64(n));
                    if term.is_zero() || term.exp < sum.exp - 130 {
                        break;
                    }
                    sum = sum.add(&term);
                }
                let mut out = sum;
                if out.is_finite() && !out.is_zero() {
                    out = HpFloat::finite(out.neg, i64::from(out.exp) + k, out.mant);
                }
                out
            }
        }
    }

    /// Natural log via atanh series after mantissa reduction to
    /// [sqrt(1/2), sqrt(2)).
    pub fn ln(&self) -> HpFloat {
        match self.kind {
            Kind::Nan => HpFloat::nan(),
            Kind::Inf => {
                if self.neg {
                    HpFloat::nan()
                } else {
                    *self
                }
            }
            Kind::Finite => {
                if self.is_zero() {
                    return HpFloat::inf(true);
                }
                if self.neg {
                    return HpFloat::nan();
                }
                let mut e = i64::from(self.exp);
                let mut m = HpFloat::finite(false, 0, self.mant);
                if m.mant >= HpFloat::SQRT2_MANT {
                    m = HpFloat::finite(false, -1, m.mant);
                    e += 1;
                }
                let t = m.sub(&HpFloat::ONE).div(&m.add(&HpFloat::ONE));
                let t2 = t.mul(&t);
                let mut term = t;
                let mut sum = t;
                for n in 1..80 {
                    term = term.mul(&t2);
                    let add = term.div(&HpFloat::from_i64(2 * n + 1));
                    if add.is_zero() || (!sum.is_zero() && add.exp < sum.exp - 130) {
                        break;
                    }
                    sum = sum.add(&add);
                }
                let ln_m = sum.add(&sum); // 2 * atanh(t)
                HpFloat::from_i64(e).mul(&HpFloat::LN2).add(&ln_m)
            }
        }
    }

    pub fn sin(&self) -> HpFloat {
        self.sin_cos(false)
    }

    pub fn cos(&self) -> HpFloat {
        self.sin_cos(true)
    }

    fn sin_cos(&self, is_cos: bool) -> HpFloat {
        match self.kind {
            Kind::Nan | Kind::Inf => HpFloat::nan(),
            Kind::Finite => {
                let xf = self.to_f64();
                if xf.abs() > 1e15 {
                    // Reduction error would dominate; mirror the interval
                    // code's refusal to localize at this scale.
                    return HpFloat::from_f64(if is_cos { xf.cos() } else { xf.sin() });
                }
                let k = (xf / std::f64::consts::FRAC_PI_2).round() as i64;
                let r = self.sub(&HpFloat::from_i64(k).mul(&HpFloat::FRAC_PI_2));
                let quadrant = (k.rem_euclid(4) + if is_cos { 1 } else { 0 }) % 4;
                let val = match quadrant {
                    0 => sin_series(&r),
                    1 => cos_series(&r),
                    2 => sin_series(&r).neg(),
                    _ => cos_series(&r).neg(),
                };
                val
            }
        }
    }

    pub fn partial_cmp_hp(&self, other: &HpFloat) -> Option<Ordering> {
        if self.is_nan() || other.is_nan() {
            return None;
        }
        let rank = |x: &HpFloat| -> i32 {
            match x.kind {
                Kind::Inf => {
                    if x.neg {
                        -2
                    } else {
                        2
                    }
                }
                _ => 0,
                // NaN excluded above
            }
        };
        let (ra, rb) = (rank(self), rank(other));
        if ra != rb {
            return Some(ra.cmp(&rb));
        }
        if ra != 0 {
            return Some(Ordering::Equal);
        }
        if self.is_zero() && other.is_zero() {
            return Some(Ordering::Equal);
        }
        if self.is_zero() {
            return Some(if other.neg {
                Ordering::Greater
            } else {
                Ordering::Less
            });
        }
        if other.is_zero() {
            return Some(if self.neg {
                Ordering::Less
            } else {
                Ordering::Greater
            });
        }
        match (self.neg, other.neg) {
            (false, true) => Some(Ordering::Greater),
            (true, false) => Some(Ordering::Less),
            (false, false) => Some(self.cmp_mag(other)),
            (true, true) => Some(other.cmp_mag(self)),
        }
    }

    /// (sign, exponent, mantissa) view; used by rational conversion and
    /// the oracle tests.
    pub(crate) fn parts(&self) -> (bool, i32, u128) {
        (self.neg, self.exp, self.mant)
    }

    pub(crate) fn from_parts(neg: bool, exp: i32, mant: u128) -> HpFloat {
        HpFloat::finite(neg, i64::from(exp), mant)
    }
}

fn sin_series(r: &HpFloat) -> HpFloat {
    // r - r^3/3! + r^5/5! - ...
    let r2 = r.mul(r);
    let mut term = *r;
    let mut sum = *r;
    for n in 1..40 {
        let d = HpFloat::from_i64((2 * n) * (2 * n + 1));
        term = term.mul(&r2).div(&d).neg();
        if term.is_zero() || (!sum.is_zero() && term.exp < sum.exp - 130) {
            break;
        }
        sum = sum.add(&term);
    }
    sum
}

fn cos_series(r: &HpFloat) -> HpFloat {
    let r2 = r.mul(r);
    let mut term = HpFloat::ONE;
    let mut sum = HpFloat::ONE;
    for n in 1..40 {
        let d = HpFloat::from_i64((2 * n - 1) * (2 * n));
        term = term.mul(&r2).div(&d).neg();
        if term.is_zero() || term.exp < sum.exp - 130 {
            break;
        }
        sum = sum.add(&term);
    }
    sum
}

/// Integer square root of a 256-bit value by binary digit recurrence;
/// also reports whether a remainder was left.
fn isqrt_u256(n: U256) -> (u128, bool) {
    let mut rem: u128 = 0;
    let mut root: u128 = 0;
    for i in (0..128).rev() {
        rem = (rem << 2) | n.bit_pair(i);
        let cand = (root << 2) | 1;
        root <<= 1;
        if rem >= cand {
            rem -= cand;
            root |= 1;
        }
    }
    (root, rem != 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Signed, Zero};
    use rand::Rng;
    use rand::SeedableRng;

    fn to_rational(x: &HpFloat) -> BigRational {
        assert!(x.is_finite());
        let (neg, exp, mant) = x.parts();
        if mant == 0 {
            return BigRational::zero();
        }
        let m = BigInt::from(mant);
        let e = exp - 112;
        let r = if e >= 0 {
            BigRational::from_integer(m << e as usize)
        } else {
            BigRational::new(m, BigInt::one() << (-e) as usize)
        };
        if neg {
            -r
        } else {
            r
        }
    }

    /// Round an exact rational to 113 bits, nearest-even. Independent
    /// of the implementation path: pure BigInt arithmetic.
    fn round_rational(r: &BigRational) -> HpFloat {
        if r.is_zero() {
            return HpFloat::ZERO;
        }
        let neg = r.is_negative();
        let mag = r.abs();
        // Find e with 2^e <= mag < 2^(e+1).
        let mut e: i32 = 0;
        let two = BigRational::from_integer(BigInt::from(2));
        let one = BigRational::one();
        let mut m = mag.clone();
        while m >= two {
            m /= &two;
            e += 1;
        }
        while m < one {
            m *= &two;
            e -= 1;
        }
        // mant = round_ne(mag * 2^(112 - e))
        let scaled = mag * pow2_rat(112 - e);
        let floor = scaled.floor().to_integer();
        let frac = &scaled - BigRational::from_integer(floor.clone());
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut m_int = floor.clone();
        if frac > half || (frac == half && (&floor % 2) == BigInt::one()) {
            m_int += 1;
        }
        let mut mant: u128 = m_int.to_string().parse().unwrap();
        let mut exp = e;
        if mant == MANT_LIM {
            mant = MANT_MSB;
            exp += 1;
        }
        HpFloat::from_parts(neg, exp, mant)
    }

    fn pow2_rat(k: i32) -> BigRational {
        if k >= 0 {
            BigRational::from_integer(BigInt::one() << k as usize)
        } else {
            BigRational::new(BigInt::one(), BigInt::one() << (-k) as usize)
        }
    }

    fn assert_same(a: &HpFloat, b: &HpFloat, what: &str) {
        assert!(
            a.parts() == b.parts() || (a.is_zero() && b.is_zero()),
            "{what}: {:?} vs {:?}",
            a.parts(),
            b.parts()
        );
    }

    #[test]
    fn f64_roundtrip_exact() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10_000 {
            let x = f64::from_bits(rng.gen::<u64>());
            if !x.is_finite() {
                continue;
            }
            assert_eq!(HpFloat::from_f64(x).to_f64(), x, "{x}");
        }
        assert_eq!(HpFloat::from_f64(5e-324).to_f64(), 5e-324);
        assert_eq!(HpFloat::from_f64(-0.0).to_f64(), -0.0);
    }

    /// Arithmetic is correctly rounded: compare against exact rational
    /// arithmetic rounded by an independent BigInt path.
    #[test]
    fn arithmetic_matches_exact_rational_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for i in 0..1000 {
            let a = rng.gen_range(-1e12..1e12f64) * (10f64).powi(rng.gen_range(-12..12));
            let b = rng.gen_range(-1e12..1e12f64) * (10f64).powi(rng.gen_range(-12..12));
            if b == 0.0 {
                continue;
            }
            let (ha, hb) = (HpFloat::from_f64(a), HpFloat::from_f64(b));
            let (ra, rb) = (to_rational(&ha), to_rational(&hb));
            assert_same(&ha.add(&hb), &round_rational(&(&ra + &rb)), "add");
            assert_same(&ha.sub(&hb), &round_rational(&(&ra - &rb)), "sub");
            assert_same(&ha.mul(&hb), &round_rational(&(&ra * &rb)), "mul");
            assert_same(&ha.div(&hb), &round_rational(&(&ra / &rb)), "div");
            let _ = i;
        }
    }

    /// Near-cancellation subtraction paths.
    #[test]
    fn cancellation_is_exact() {
        let a = HpFloat::from_f64(1e16);
        let one = HpFloat::ONE;
        let s = a.add(&one); // exact in 113 bits
        let back = s.sub(&a);
        assert_eq!(back.to_f64(), 1.0);

        let x = HpFloat::from_f64(1.0000000001);
        assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn sqrt_correctly_rounded_against_bigint() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..500 {
            let x = rng.gen_range(1e-10..1e10f64);
            let hx = HpFloat::from_f64(x);
            let got = hx.sqrt();
            // Oracle: isqrt of mant << (226 - 112) with explicit rounding,
            // done through num-bigint's independent sqrt.
            let r = to_rational(&hx);
            // scaled = x * 2^k with k even and large; sqrt then rounds.
            let k = 300 - 2 * hx.parts().1; // make exponent ~300
            let k = if k % 2 == 0 { k } else { k + 1 };
            let scaled = (&r * pow2_rat(k)).to_integer().to_biguint().unwrap();
            let s = scaled.sqrt();
            // sqrt(x) ~ s * 2^(-k/2) with error < 2^(-k/2): 150 bits down,
            // far below the 113-bit rounding granularity except for ties;
            // compare at 1 ulp.
            let approx = BigRational::new(BigInt::from(s), BigInt::one()) * pow2_rat(-k / 2);
            let oracle = round_rational(&approx);
            let (gn, ge, gm) = got.parts();
            let (on, oe, om) = oracle.parts();
            assert_eq!((gn, ge), (on, oe), "sqrt({x})");
            assert!(gm.abs_diff(om) <= 1, "sqrt({x}): {gm} vs {om}");
        }
        assert_eq!(HpFloat::from_f64(4.0).sqrt().to_f64(), 2.0);
        assert!(HpFloat::from_f64(-1.0).sqrt().is_nan());
    }

    #[test]
    fn elementary_functions_track_libm() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let x = rng.gen_range(-30.0..30.0f64);
            let hx = HpFloat::from_f64(x);
            let cases = [
                (hx.exp().to_f64(), x.exp(), "exp"),
                (hx.sin().to_f64(), x.sin(), "sin"),
                (hx.cos().to_f64(), x.cos(), "cos"),
            ];
            for (got, want, what) in cases {
                let tol = want.abs().max(1e-300) * 1e-13 + 1e-280;
                assert!(
                    (got - want).abs() <= tol,
                    "{what}({x}) = {got}, libm {want}"
                );
            }
            if x > 0.0 {
                let got = hx.ln().to_f64();
                let want = x.ln();
                assert!((got - want).abs() <= want.abs().max(1.0) * 1e-13, "ln({x})");
            }
        }
    }

    #[test]
    fn elementary_self_consistency_at_high_precision() {
        // exp/ln and sin/cos identities hold far beyond double precision.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let x = rng.gen_range(0.01..100.0f64);
            let hx = HpFloat::from_f64(x);
            let roundtrip = hx.ln().exp();
            let rel = roundtrip.sub(&hx).div(&hx).abs().to_f64();
            assert!(rel < 1e-31, "exp(ln({x})) rel err {rel}");

            let t = rng.gen_range(-6.0..6.0f64);
            let ht = HpFloat::from_f64(t);
            let s = ht.sin();
            let c = ht.cos();
            let norm = s.mul(&s).add(&c.mul(&c));
            let dev = norm.sub(&HpFloat::ONE).abs().to_f64();
            assert!(dev < 1e-31, "sin^2+cos^2 at {t}: dev {dev}");
        }
    }

    #[test]
    fn comparisons() {
        let a = HpFloat::from_f64(1.5);
        let b = HpFloat::from_f64(-2.5);
        assert_eq!(a.partial_cmp_hp(&b), Some(Ordering::Greater));
        assert_eq!(b.partial_cmp_hp(&a), Some(Ordering::Less));
        assert_eq!(a.partial_cmp_hp(&a), Some(Ordering::Equal));
        assert!(HpFloat::from_f64(f64::NAN).partial_cmp_hp(&a).is_none());
    }
}
