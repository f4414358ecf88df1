//! Exact arithmetic foundation: arbitrary-precision rationals, univariate
//! polynomials (dense, in `ρ = r²` or `x`), bivariate polynomials (sparse,
//! in `x, y`), and partial-fraction coefficients for products of distinct
//! linear factors.
//!
//! Everything here is immutable after construction and exact; coefficient
//! growth in the derivation-division pipeline is factorial-like in the step
//! count, so fixed-width integers are not an option.

mod bipoly;
mod poly;
mod rat;

pub use bipoly::BiPoly;
pub use poly::Poly;
pub use rat::Rat;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("duplicate root {0} in partial-fraction basis")]
    DuplicateRoot(Rat),
    #[error("cannot parse rational from {0:?}: expected \"p\" or \"p/q\"")]
    ParseRat(String),
    #[error("zero denominator in rational literal")]
    ZeroDenominator,
}

/// Partial-fraction coefficients for `1/∏ⱼ(x−aⱼ)` over distinct roots:
/// returns `d` with `1/∏(x−aₗ) = Σⱼ dⱼ/(x−aⱼ)` where
/// `dⱼ = 1/∏_{ℓ≠j}(aⱼ−aₗ)`.
pub fn lagrange_pf_coeffs(roots: &[Rat]) -> Result<Vec<Rat>, AlgebraError> {
    for (i, a) in roots.iter().enumerate() {
        if roots[i + 1..].contains(a) {
            return Err(AlgebraError::DuplicateRoot(a.clone()));
        }
    }
    let mut coeffs = Vec::with_capacity(roots.len());
    for (j, aj) in roots.iter().enumerate() {
        let mut prod = Rat::one();
        for (l, al) in roots.iter().enumerate() {
            if l != j {
                prod = prod * (aj.clone() - al.clone());
            }
        }
        coeffs.push(prod.recip());
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn pf_two_roots() {
        // 1/((x-1)(x-2)) = -1/(x-1) + 1/(x-2)
        let d = lagrange_pf_coeffs(&[Rat::from(1), Rat::from(2)]).unwrap();
        assert_eq!(d, vec![Rat::from(-1), Rat::from(1)]);
    }

    #[test]
    fn pf_single_root() {
        let d = lagrange_pf_coeffs(&[r(7, 3)]).unwrap();
        assert_eq!(d, vec![Rat::one()]);
    }

    #[test]
    fn pf_three_roots() {
        // roots (0, 1, -1): d = (-1, 1/2, 1/2)
        let d = lagrange_pf_coeffs(&[Rat::from(0), Rat::from(1), Rat::from(-1)]).unwrap();
        assert_eq!(d, vec![Rat::from(-1), r(1, 2), r(1, 2)]);
    }

    #[test]
    fn pf_duplicate_rejected() {
        let err = lagrange_pf_coeffs(&[Rat::from(2), Rat::from(2)]).unwrap_err();
        assert_eq!(err, AlgebraError::DuplicateRoot(Rat::from(2)));
    }

    /// Symbolic recombination: Σⱼ dⱼ·∏_{ℓ≠j}(x−aₗ) must equal the constant 1
    /// after clearing the common denominator ∏(x−aₗ).
    #[test]
    fn pf_recombination_is_identity() {
        let root_sets: Vec<Vec<Rat>> = vec![
            vec![Rat::from(1), Rat::from(2)],
            vec![Rat::from(0), Rat::from(1), Rat::from(-1)],
            vec![r(1, 2), r(-3, 4), Rat::from(5), r(7, 3)],
            vec![r(1, 5), r(2, 5), r(3, 5), r(4, 5), Rat::from(1)],
        ];
        for roots in root_sets {
            let d = lagrange_pf_coeffs(&roots).unwrap();
            let mut sum = Poly::zero();
            for (j, dj) in d.iter().enumerate() {
                let mut prod = Poly::constant(dj.clone());
                for (l, al) in roots.iter().enumerate() {
                    if l != j {
                        // (x - a_l)
                        prod = prod.mul(&Poly::from_coeffs(vec![-al.clone(), Rat::one()]));
                    }
                }
                sum = sum.add(&prod);
            }
            assert_eq!(sum, Poly::one(), "recombination failed for {roots:?}");
        }
    }
}
