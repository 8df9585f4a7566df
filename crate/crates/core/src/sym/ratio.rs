//! Conversions between exact rationals and the float domains.

use crate::hp::HpFloat;
use crate::interval::Interval;
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact rational of a finite f64.
pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite literal")
}

/// Nearest-one-can-tell f64 of a rational via a 130-bit intermediate.
fn to_f64_near(r: &BigRational) -> f64 {
    rational_to_hp(r).to_f64()
}

/// Tight outward enclosure of an exact rational. The seed conversion is
/// within an ulp; the correction loops below make the enclosure
/// unconditional.
pub fn rational_to_interval(r: &BigRational) -> Interval {
    if r.is_zero() {
        return Interval::zero();
    }
    let small = |x: &BigInt| x.abs() < BigInt::from(1u64 << 53);
    let f = if small(r.numer()) && small(r.denom()) {
        r.to_f64().unwrap()
    } else {
        to_f64_near(r)
    };
    if !f.is_finite() {
        let v = if r.is_negative() { f64::MIN } else { f64::MAX };
        return Interval::new(v, v); // saturated; overflow flag set by ops
    }
    let below = |x: f64| match BigRational::from_float(x) {
        Some(rx) => rx <= *r,
        None => x < 0.0, // stepped past the finite range
    };
    let above = |x: f64| match BigRational::from_float(x) {
        Some(rx) => rx >= *r,
        None => x > 0.0,
    };
    let mut lo = f;
    let mut hi = f;
    for _ in 0..64 {
        if below(lo) {
            break;
        }
        lo = lo.next_down();
    }
    for _ in 0..64 {
        if above(hi) {
            break;
        }
        hi = hi.next_up();
    }
    debug_assert!(below(lo) && above(hi));
    Interval::new(lo, hi)
}

/// Round a rational into the 113-bit shadow format (error < 2^-129
/// relative, well under an hp ulp).
pub fn rational_to_hp(r: &BigRational) -> HpFloat {
    if r.is_zero() {
        return HpFloat::ZERO;
    }
    let neg = r.is_negative();
    let num = r.numer().abs().to_biguint().unwrap();
    let den = r.denom().abs().to_biguint().unwrap();
    let nbits = num.bits() as i64;
    let dbits = den.bits() as i64;
    // Scale so the integer quotient has ~130 bits.
    let shift = 130 - (nbits - dbits);
    let q = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let qbits = q.bits() as i64;
    let digits = q.to_u64_digits();
    let mut mant: u128 = 0;
    for (i, d) in digits.iter().enumerate().rev().take(2) {
        mant |= (*d as u128) << (64 * (i - (digits.len().saturating_sub(2))));
    }
    // mant now holds the top <=128 bits of q; position of q's msb inside mant:
    let kept_bits = (qbits - 64 * (digits.len() as i64 - 2).max(0)) as u32;
    let drop = kept_bits.saturating_sub(113);
    let mant113 = mant >> drop;
    let exp = qbits - 1 - shift;
    let final_exp = exp;
    HpFloat::from_parts(neg, final_exp.clamp(i32::MIN as i64, i32::MAX as i64) as i32, {
        // normalize in case kept_bits < 113 (small q)
        let top = 127 - mant113.leading_zeros();
        if top >= 112 {
            mant113 >> (top - 112)
        } else {
            mant113 << (112 - top)
        }
    })
}

/// True if the rational is an integer power of two times +-1, i.e. the
/// f64 conversion is exact and multiplication by it is error-free.
pub fn is_pow2(r: &BigRational) -> bool {
    let n = r.numer().abs();
    let d = r.denom().abs();
    let pow2 = |x: &BigInt| {
        let (sign, bytes) = x.to_bytes_le();
        sign != Sign::Minus && bytes.iter().map(|b| b.count_ones()).sum::<u32>() == 1
    };
    pow2(&n) && pow2(&d)
}

pub fn rational_to_f64_approx(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| to_f64_near(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn interval_encloses_rational() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5000 {
            let a: i64 = rng.gen_range(-1_000_000_000..1_000_000_000);
            let b: i64 = rng.gen_range(1..1_000_000_000);
            let r = BigRational::new(BigInt::from(a), BigInt::from(b));
            let iv = rational_to_interval(&r);
            let lo = BigRational::from_float(iv.lo).unwrap();
            let hi = BigRational::from_float(iv.hi).unwrap();
            assert!(lo <= r && r <= hi, "{a}/{b} not in [{}, {}]", iv.lo, iv.hi);
            assert!(iv.hi - iv.lo <= 2.0 * f64::EPSILON * iv.mag() + f64::MIN_POSITIVE);
        }
    }

    #[test]
    fn exact_dyadics_become_points() {
        for x in [0.5f64, 3.5, -0.125, 1.0, 1024.0, 0.1] {
            let iv = rational_to_interval(&rational_from_f64(x));
            assert_eq!((iv.lo, iv.hi), (x, x));
        }
        let third = BigRational::new(BigInt::one(), BigInt::from(3));
        let iv = rational_to_interval(&third);
        assert!(iv.lo < iv.hi);
    }

    #[test]
    fn hp_conversion_close() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        for _ in 0..2000 {
            let a: i64 = rng.gen_range(-1_000_000_000..1_000_000_000);
            let b: i64 = rng.gen_range(1..1_000_000_000);
            if a == 0 {
                continue;
            }
            let r = BigRational::new(BigInt::from(a), BigInt::from(b));
            let hp = rational_to_hp(&r);
            let back = hp.to_f64();
            let exact = (a as f64) / (b as f64);
            assert!(
                ((back - exact) / exact).abs() < 1e-14,
                "{a}/{b}: {back} vs {exact}"
            );
        }
    }

    #[test]
    fn pow2_detection() {
        assert!(is_pow2(&rational_from_f64(0.5)));
        assert!(is_pow2(&rational_from_f64(-4.0)));
        assert!(is_pow2(&rational_from_f64(1.0)));
        assert!(!is_pow2(&rational_from_f64(3.5)));
        assert!(!is_pow2(&rational_from_f64(0.1)));
    }
}
