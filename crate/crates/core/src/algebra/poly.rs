use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rat;
use crate::real::{Real, RealCtx};

/// Dense univariate polynomial with exact rational coefficients, lowest
/// degree first. The trailing coefficient is nonzero unless the polynomial
/// is zero (empty coefficient vector); `degree()` of the zero polynomial is
/// −1 by convention.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// `c·x^k`.
    pub fn monomial(c: Rat, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    /// Builds from a coefficient vector, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with deg(0) = −1.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplication by `x^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![Rat::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * &Rat::from(k as i64))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    /// `p(−x)`: flips the sign of odd-degree coefficients.
    pub fn compose_neg_x(&self) -> Poly {
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    /// Exact Horner evaluation at a rational point.
    pub fn eval_rat(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Horner evaluation at the context's working precision. Runs with
    /// guard bits internally so the result is correct to within 2 ulp.
    pub fn eval_real(&self, x: &Real, ctx: &RealCtx) -> Real {
        let inner = ctx.widened(16);
        let xi = inner.promote(x);
        let mut acc = inner.zero();
        for c in self.coeffs.iter().rev() {
            acc = inner.add(&inner.mul(&acc, &xi), &inner.from_rat(c));
        }
        ctx.promote(&acc)
    }

    /// f64 Horner evaluation (grid scans; prefer `eval_rat`/`eval_real`
    /// when the result feeds a tolerance check).
    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64();
        }
        acc
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})·x")?,
                _ => write!(f, "({c})·x^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Poly::from_coeffs(Vec::<Rat>::deserialize(d)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly {
        Poly::from_coeffs(cs.iter().map(|&c| Rat::from(c)).collect())
    }

    #[test]
    fn degree_conventions() {
        assert_eq!(Poly::zero().degree(), -1);
        assert_eq!(Poly::one().degree(), 0);
        assert_eq!(p(&[0, 0, 3]).degree(), 2);
        assert_eq!(p(&[1, 0, 0]).degree(), 0); // trailing zeros trimmed
    }

    #[test]
    fn product_of_conjugates() {
        // (1+ρ)(1−ρ) = 1−ρ²
        assert_eq!(p(&[1, 1]).mul(&p(&[1, -1])), p(&[1, 0, -1]));
    }

    #[test]
    fn multiply_by_zero() {
        let q = p(&[3, 1, 4]);
        assert_eq!(q.mul(&Poly::zero()), Poly::zero());
        assert_eq!(q.mul(&Poly::zero()).degree(), -1);
    }

    #[test]
    fn addition_cancels_leading_term() {
        // (ρ²+1) + (−ρ²) = 1
        assert_eq!(p(&[1, 0, 1]).add(&p(&[0, 0, -1])), Poly::one());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p(&[1, -1]).eval_rat(&Rat::from(1)), Rat::zero());
        assert_eq!(p(&[0, 0, 1]).eval_rat(&Rat::new(3, 2)), Rat::new(9, 4));
    }

    #[test]
    fn derivative_and_shift() {
        assert_eq!(p(&[5, 3, 2]).derivative(), p(&[3, 4]));
        assert_eq!(p(&[1, 2]).shift_up(2), p(&[0, 0, 1, 2]));
    }

    #[test]
    fn compose_neg() {
        assert_eq!(p(&[1, 2, 3, 4]).compose_neg_x(), p(&[1, -2, 3, -4]));
    }

    #[test]
    fn serde_roundtrip() {
        let q = Poly::from_coeffs(vec![Rat::new(1, 2), Rat::zero(), Rat::from(-3)]);
        let js = serde_json::to_string(&q).unwrap();
        assert_eq!(js, "[\"1/2\",\"0\",\"-3\"]");
        assert_eq!(serde_json::from_str::<Poly>(&js).unwrap(), q);
    }
}
