//! Configurable-precision real arithmetic.
//!
//! Thin wrapper around `astro-float` binding every operation to a context
//! that fixes the working precision (mantissa bits, default 128). Agreement
//! tolerances between quadrature and closed-form evaluation are stated
//! against this precision, so it is a single global knob rather than a
//! per-call argument.

use std::cell::RefCell;
use std::cmp::Ordering;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use crate::algebra::Rat;

/// Default mantissa precision in bits.
pub const DEFAULT_PRECISION: u32 = 128;

const RM: RoundingMode = RoundingMode::ToEven;

/// A real number at some context's working precision.
#[derive(Clone, Debug)]
pub struct Real(BigFloat);

/// Arithmetic context: precision plus a cache of computed constants.
/// Construct one per thread; operations take `&self`.
pub struct RealCtx {
    bits: usize,
    consts: RefCell<Consts>,
}

impl RealCtx {
    pub fn new(bits: u32) -> Self {
        RealCtx {
            bits: bits.max(64) as usize,
            consts: RefCell::new(Consts::new().expect("constants cache")),
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits as u32
    }

    /// Context with `extra` more mantissa bits (guard digits for inner
    /// loops). Shares no cache; cheap to create.
    pub fn widened(&self, extra: u32) -> RealCtx {
        RealCtx::new(self.bits as u32 + extra)
    }

    pub fn zero(&self) -> Real {
        Real(BigFloat::from_i64(0, self.bits))
    }

    pub fn from_i64(&self, v: i64) -> Real {
        Real(BigFloat::from_i64(v, self.bits))
    }

    pub fn from_f64(&self, v: f64) -> Real {
        Real(BigFloat::from_f64(v, self.bits))
    }

    /// Exactly rounded conversion of an arbitrary-precision rational.
    pub fn from_rat(&self, r: &Rat) -> Real {
        let p = self.bits + 32;
        let mut cc = self.consts.borrow_mut();
        let num = BigFloat::parse(&r.numer().to_string(), Radix::Dec, p, RM, &mut cc);
        let den = BigFloat::parse(&r.denom().to_string(), Radix::Dec, p, RM, &mut cc);
        Real(round_to(&num.div(&den, p, RM), self.bits))
    }

    /// Re-round a value (possibly from another context) to this precision.
    pub fn promote(&self, x: &Real) -> Real {
        Real(round_to(&x.0, self.bits))
    }

    pub fn pi(&self) -> Real {
        Real(self.consts.borrow_mut().pi(self.bits, RM))
    }

    pub fn add(&self, a: &Real, b: &Real) -> Real {
        Real(a.0.add(&b.0, self.bits, RM))
    }

    pub fn sub(&self, a: &Real, b: &Real) -> Real {
        Real(a.0.sub(&b.0, self.bits, RM))
    }

    pub fn mul(&self, a: &Real, b: &Real) -> Real {
        Real(a.0.mul(&b.0, self.bits, RM))
    }

    pub fn div(&self, a: &Real, b: &Real) -> Real {
        Real(a.0.div(&b.0, self.bits, RM))
    }

    pub fn sqrt(&self, a: &Real) -> Real {
        Real(a.0.sqrt(self.bits, RM))
    }

    pub fn sin(&self, a: &Real) -> Real {
        Real(a.0.sin(self.bits, RM, &mut self.consts.borrow_mut()))
    }

    pub fn cos(&self, a: &Real) -> Real {
        Real(a.0.cos(self.bits, RM, &mut self.consts.borrow_mut()))
    }
}

fn round_to(v: &BigFloat, bits: usize) -> BigFloat {
    let mut out = v.clone();
    out.set_precision(bits, RM).expect("set precision");
    out
}

impl Real {
    pub fn neg(&self) -> Real {
        Real(self.0.neg())
    }

    pub fn abs(&self) -> Real {
        Real(self.0.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn signum(&self) -> i32 {
        if self.0.is_zero() {
            0
        } else if self.0.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn cmp(&self, other: &Real) -> Ordering {
        match self.0.cmp(&other.0) {
            Some(v) => v.cmp(&0),
            None => Ordering::Equal,
        }
    }

    /// Correctly rounded f64 (decimal round trip through a full-precision
    /// string; Rust's float parser rounds correctly).
    pub fn to_f64(&self) -> f64 {
        if self.0.is_zero() {
            return 0.0;
        }
        if self.0.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.0.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        format!("{}", self.0).parse().unwrap_or(f64::NAN)
    }
}

impl std::fmt::Display for Real {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_conversion_is_faithful() {
        let ctx = RealCtx::new(128);
        let r = Rat::new(1, 3);
        let x = ctx.from_rat(&r);
        // 1/3 to 128 bits, error below 2^-127 relative
        let three = ctx.from_i64(3);
        let back = ctx.mul(&x, &three);
        let err = ctx.sub(&back, &ctx.from_i64(1)).abs();
        assert!(err.to_f64() < 1e-37);
    }

    #[test]
    fn huge_rational_roundtrip() {
        let ctx = RealCtx::new(192);
        let big: Rat = "123456789012345678901234567890123456789/987654321098765432109876543210"
            .parse()
            .unwrap();
        let x = ctx.from_rat(&big);
        let approx = x.to_f64();
        assert!((approx - big.to_f64()).abs() / big.to_f64().abs() < 1e-15);
    }

    #[test]
    fn trig_and_pi() {
        let ctx = RealCtx::new(128);
        let pi = ctx.pi();
        assert!((pi.to_f64() - std::f64::consts::PI).abs() < 1e-15);
        let half = ctx.div(&pi, &ctx.from_i64(2));
        assert!((ctx.sin(&half).to_f64() - 1.0).abs() < 1e-30);
        assert!(ctx.cos(&half).to_f64().abs() < 1e-30);
    }

    #[test]
    fn f64_roundtrip_exact() {
        let ctx = RealCtx::new(128);
        for &v in &[0.1, -3.75, 1e-200, 123456.789, 0.0] {
            assert_eq!(ctx.from_f64(v).to_f64(), v);
        }
    }
}
