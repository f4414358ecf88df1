//! Zero bounds for radical functions `F(x) = P⁰(x) + Σⱼ Pʲ(x)/√(x+cⱼ)` via
//! the derivation-division procedure.
//!
//! The procedure alternates blocks of symbolic differentiation with exact
//! "divisions" that factor a nonvanishing radical term out of the current
//! function. Differentiation of a generalized term `p(x)·∏(x+cᵢ)^{αᵢ}`
//! collapses into a single generalized term again, so each stage of the
//! pipeline is a short sum of [`GenTerm`]s whose shape is asserted, not
//! assumed. After `(K−1)(n+1) + n₀ + 1` derivatives only a polynomial of
//! degree ≤ n remains, and counting zeros through Rolle's theorem gives
//! `Z(F) ≤ K(n+1) + n₀`.
//!
//! Divisions never evaluate anything: they subtract exponents on the
//! designated factors, which keeps every stage exact and the shape
//! assertions decidable.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Poly, Rat};
use crate::real::{Real, RealCtx};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RadicalError {
    #[error("duplicate radicand offset {0}; the radical basis requires distinct offsets")]
    DuplicateRadicand(Rat),
    #[error("factor exponent {0} is not a half-integer")]
    InvalidExponent(Rat),
    #[error("gamma-ratio argument {0} is a nonpositive integer")]
    GammaPole(Rat),
    #[error("pipeline needs at least one radical term")]
    EmptyRadicalPart,
    #[error("derivation-division shape violation at round {round}: {detail}")]
    ShapeViolation { round: usize, detail: String },
}

/// `F(x) = P⁰(x) + Σⱼ Pʲ(x)/√(x+cⱼ)` with distinct offsets `cⱼ`, sorted
/// ascending. Zero numerators are dropped at construction, so `K` is the
/// number of genuinely present radical terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadicalFunction {
    p0: Poly,
    terms: Vec<(Poly, Rat)>,
}

impl RadicalFunction {
    pub fn new(p0: Poly, terms: Vec<(Poly, Rat)>) -> Result<Self, RadicalError> {
        let mut terms: Vec<(Poly, Rat)> =
            terms.into_iter().filter(|(p, _)| !p.is_zero()).collect();
        terms.sort_by(|(_, c1), (_, c2)| c1.cmp(c2));
        for w in terms.windows(2) {
            if w[0].1 == w[1].1 {
                return Err(RadicalError::DuplicateRadicand(w[0].1.clone()));
            }
        }
        Ok(RadicalFunction { p0, terms })
    }

    pub fn p0(&self) -> &Poly {
        &self.p0
    }

    pub fn terms(&self) -> &[(Poly, Rat)] {
        &self.terms
    }

    pub fn k(&self) -> usize {
        self.terms.len()
    }

    /// `n = maxⱼ deg Pʲ`; −1 when there are no radical terms.
    pub fn max_term_degree(&self) -> i64 {
        self.terms.iter().map(|(p, _)| p.degree()).max().unwrap_or(-1)
    }

    /// `n₀ = deg P⁰`, −1 for zero.
    pub fn p0_degree(&self) -> i64 {
        self.p0.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.p0.is_zero() && self.terms.is_empty()
    }

    /// Infimum of the natural domain: `−min cⱼ` (`None` for a plain
    /// polynomial, defined everywhere).
    pub fn domain_inf(&self) -> Option<Rat> {
        self.terms.first().map(|(_, c)| -c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = self.p0.eval_f64(x);
        for (p, c) in &self.terms {
            acc += p.eval_f64(x) / (x + c.to_f64()).sqrt();
        }
        acc
    }

    /// Full-precision evaluation at a rational point: numerators exact,
    /// only roots and divisions round.
    pub fn eval_real(&self, x: &Rat, ctx: &RealCtx) -> Real {
        let inner = ctx.widened(16);
        let mut acc = inner.from_rat(&self.p0.eval_rat(x));
        for (p, c) in &self.terms {
            let num = inner.from_rat(&p.eval_rat(x));
            let root = inner.sqrt(&inner.from_rat(&(x + c)));
            acc = inner.add(&acc, &inner.div(&num, &root));
        }
        ctx.promote(&acc)
    }
}

/// The zero-count bound `Z(F) ≤ K·(max deg Pʲ + 1) + deg P⁰`, with
/// `deg 0 = −1`. For `K = 0` this is the degree of the plain polynomial.
pub fn zero_bound(f: &RadicalFunction) -> i64 {
    let k = f.k() as i64;
    k * (f.max_term_degree() + 1) + f.p0_degree()
}

/// Generalized term `p(x)·∏ᵢ(x+cᵢ)^{αᵢ}` with distinct offsets and
/// half-integer exponents. Nonnegative integer exponents are folded into
/// the polynomial at construction, so the factor list is canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenTerm {
    poly: Poly,
    factors: Vec<(Rat, Rat)>,
}

impl GenTerm {
    pub fn new(poly: Poly, factors: Vec<(Rat, Rat)>) -> Result<Self, RadicalError> {
        let mut merged: Vec<(Rat, Rat)> = Vec::new();
        for (c, alpha) in factors {
            if !(Rat::from(2) * &alpha).is_integer() {
                return Err(RadicalError::InvalidExponent(alpha));
            }
            match merged.iter_mut().find(|(c2, _)| *c2 == c) {
                Some((_, a2)) => *a2 = a2.clone() + alpha,
                None => merged.push((c, alpha)),
            }
        }
        let mut poly = poly;
        let mut kept = Vec::new();
        for (c, alpha) in merged {
            if alpha.is_zero() {
                continue;
            }
            if alpha.is_integer() && alpha.signum() > 0 {
                // fold (x+c)^alpha into the polynomial
                let lin = Poly::from_coeffs(vec![c.clone(), Rat::one()]);
                let mut n: i64 = 0;
                while Rat::from(n) < alpha {
                    poly = poly.mul(&lin);
                    n += 1;
                }
            } else {
                kept.push((c, alpha));
            }
        }
        if poly.is_zero() {
            kept.clear();
        }
        kept.sort_by(|(c1, _), (c2, _)| c1.cmp(c2));
        Ok(GenTerm {
            poly,
            factors: kept,
        })
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn factors(&self) -> &[(Rat, Rat)] {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Exact derivative, as a single generalized term:
    ///
    /// `D[p·∏(x+cᵢ)^{αᵢ}] = [p'·∏(x+cᵢ) + p·Σᵢ αᵢ·∏_{k≠i}(x+cₖ)] · ∏(x+cᵢ)^{αᵢ−1}`
    pub fn diff(&self) -> GenTerm {
        let lin = |c: &Rat| Poly::from_coeffs(vec![c.clone(), Rat::one()]);
        let mut lead = self.poly.derivative();
        for (c, _) in &self.factors {
            lead = lead.mul(&lin(c));
        }
        let mut tail = Poly::zero();
        for (i, (_, alpha)) in self.factors.iter().enumerate() {
            let mut prod = self.poly.scale(alpha);
            for (k, (ck, _)) in self.factors.iter().enumerate() {
                if k != i {
                    prod = prod.mul(&lin(ck));
                }
            }
            tail = tail.add(&prod);
        }
        let factors = self
            .factors
            .iter()
            .map(|(c, a)| (c.clone(), a - &Rat::one()))
            .collect();
        GenTerm::new(lead.add(&tail), factors).expect("derivative keeps half-integer exponents")
    }

    /// Multiplies by `∏(x+c)^β` for the given `(c, β)` pairs (a "division"
    /// when the β are negated divisor exponents).
    pub fn mul_factors(&self, extra: &[(Rat, Rat)]) -> Result<GenTerm, RadicalError> {
        let mut factors = self.factors.clone();
        factors.extend(extra.iter().cloned());
        GenTerm::new(self.poly.clone(), factors)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = self.poly.eval_f64(x);
        for (c, a) in &self.factors {
            acc *= (x + c.to_f64()).powf(a.to_f64());
        }
        acc
    }
}

impl std::fmt::Display for GenTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}]", self.poly)?;
        for (c, a) in &self.factors {
            write!(f, "·(x+{c})^({a})")?;
        }
        Ok(())
    }
}

/// Iterated-derivative coefficients: with `g = (x+a)^{α+n}·(x+b)^{−α}`,
///
/// `D^j g = (x+a)^{α+n−j}·(x+b)^{−α−j} · Σ_ℓ C_{j,ℓ}·(x+a)^ℓ`
///
/// and this returns `C_{j,0..=j}` where
/// `C_{j,ℓ} = (−1)^{j+ℓ}(a−b)^{j−ℓ}·binom(j,ℓ)·Γ(α+n+1)/Γ(α+n−(j−ℓ)+1)·∏_{m=1}^{ℓ}(n−j+m)`.
///
/// The Γ ratios are computed as telescoping rational products, never by a
/// transcendental Γ evaluation.
pub fn iterated_diff_coeffs(
    j: u32,
    n: u32,
    alpha: &Rat,
    a: &Rat,
    b: &Rat,
) -> Result<Vec<Rat>, RadicalError> {
    // Γ arguments along the ratios: α+n+1−k for k = 0..=j
    for k in 0..=j {
        let arg = alpha + &Rat::from(n as i64) + &Rat::from(1 - k as i64);
        if arg.is_integer() && arg.signum() <= 0 {
            return Err(RadicalError::GammaPole(arg));
        }
    }
    let mut out = Vec::with_capacity(j as usize + 1);
    for l in 0..=j {
        let k = j - l; // j − ℓ
        let mut gamma_ratio = Rat::one();
        for t in 0..k {
            gamma_ratio = gamma_ratio * (alpha + &Rat::from(n as i64) - &Rat::from(t as i64));
        }
        let mut tail = Rat::one();
        for m in 1..=l {
            tail = tail * Rat::from(n as i64 - j as i64 + m as i64);
        }
        let sign = if (j + l) % 2 == 0 { 1 } else { -1 };
        let binom = Rat::from(num_integer::binomial(
            num_bigint::BigInt::from(j),
            num_bigint::BigInt::from(l),
        ));
        out.push(Rat::from(sign) * (a - b).pow(k as i32) * binom * gamma_ratio * tail);
    }
    Ok(out)
}

/// One derivative-then-divide round of the pipeline.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineStep {
    pub round: usize,
    pub derivatives: u32,
    pub divisor: String,
    pub degrees_before: Vec<i64>,
    pub degrees_after: Vec<i64>,
}

/// Audit record of a derivation-division run: certifies that the procedure
/// terminated in a plain polynomial after the predicted number of
/// derivatives. `implied_bound = total_derivatives + final_degree` is the
/// Rolle-argument zero bound certified by this very run; it never exceeds
/// [`zero_bound`] and equals it generically.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineTrace {
    pub steps: Vec<PipelineStep>,
    pub total_derivatives: u32,
    pub final_degree: i64,
    pub implied_bound: i64,
    pub zero_bound: i64,
}

/// Executes the derivation-division procedure on `F` symbolically:
/// differentiate `n₀+1` times and divide by `(x+c₁)^{−1/2−(n₀+1)}`, then
/// `K−1` rounds of `n+1` derivatives each followed by division by the
/// freshly produced radical factor. The claimed intermediate shape
/// `Fᵢ = P^{i,i} + Σ_{j>i} P^{j,i}·((x+cⱼ)/(x+cᵢ))^{αᵢ}` is asserted after
/// every round.
pub fn derivation_division(f: &RadicalFunction) -> Result<PipelineTrace, RadicalError> {
    if f.k() == 0 {
        return Err(RadicalError::EmptyRadicalPart);
    }
    let offsets: Vec<Rat> = f.terms.iter().map(|(_, c)| c.clone()).collect();
    let k = offsets.len();
    let n = f.max_term_degree();
    let n0 = f.p0_degree();
    let minus_half = Rat::new(-1, 2);

    let mut state: Vec<GenTerm> = Vec::new();
    if !f.p0.is_zero() {
        state.push(GenTerm::new(f.p0.clone(), vec![])?);
    }
    for (p, c) in &f.terms {
        state.push(GenTerm::new(p.clone(), vec![(c.clone(), minus_half.clone())])?);
    }

    let mut steps = Vec::with_capacity(k);
    let mut total: u32 = 0;
    let mut alpha = minus_half.clone();

    for round in 1..=k {
        let derivatives = if round == 1 { (n0 + 1) as u32 } else { (n + 1) as u32 };
        let degrees_before: Vec<i64> = state.iter().map(|t| t.poly.degree()).collect();
        for _ in 0..derivatives {
            state = diff_state(&state);
        }
        total += derivatives;

        // division step: restore the quotient pattern around c_round
        let ci = &offsets[round - 1];
        let (divisor, multiplier): (String, Vec<(Rat, Rat)>) = if round == 1 {
            let a1 = &minus_half - &Rat::from(n0 + 1);
            alpha = a1.clone();
            (
                format!("(x+{ci})^({a1})"),
                vec![(ci.clone(), -&a1)],
            )
        } else {
            let prev = &offsets[round - 2];
            let a_old = alpha.clone();
            let a_new = &a_old - &Rat::from(n + 1);
            alpha = a_new.clone();
            (
                format!(
                    "(x+{ci})^({a_new}) / (x+{prev})^({})",
                    -&a_new
                ),
                vec![
                    (ci.clone(), -&a_new),
                    (prev.clone(), &a_old + &Rat::from(n + 1)),
                ],
            )
        };
        state = state
            .iter()
            .map(|t| t.mul_factors(&multiplier))
            .collect::<Result<Vec<_>, _>>()?;
        state = merge_terms(state);

        assert_shape(&state, &offsets, round, &alpha, n)?;

        steps.push(PipelineStep {
            round,
            derivatives,
            divisor,
            degrees_before,
            degrees_after: state.iter().map(|t| t.poly.degree()).collect(),
        });
    }

    debug_assert_eq!(total as i64, (k as i64 - 1) * (n + 1) + n0 + 1);
    let final_degree = match state.as_slice() {
        [last] if last.factors.is_empty() => last.poly.degree(),
        [] => {
            return Err(RadicalError::ShapeViolation {
                round: k,
                detail: "function vanished mid-pipeline; Rolle chain cannot certify".into(),
            })
        }
        other => {
            return Err(RadicalError::ShapeViolation {
                round: k,
                detail: format!("expected a single polynomial, got {} terms", other.len()),
            })
        }
    };
    if final_degree > n {
        return Err(RadicalError::ShapeViolation {
            round: k,
            detail: format!("final degree {final_degree} exceeds n = {n}"),
        });
    }
    Ok(PipelineTrace {
        steps,
        total_derivatives: total,
        final_degree,
        implied_bound: total as i64 + final_degree,
        zero_bound: zero_bound(f),
    })
}

fn diff_state(state: &[GenTerm]) -> Vec<GenTerm> {
    merge_terms(state.iter().map(GenTerm::diff).collect())
}

/// Merges terms with identical factor signatures and drops exact zeros.
fn merge_terms(terms: Vec<GenTerm>) -> Vec<GenTerm> {
    let mut out: Vec<GenTerm> = Vec::with_capacity(terms.len());
    for t in terms {
        if t.is_zero() {
            continue;
        }
        match out.iter_mut().find(|u| u.factors == t.factors) {
            Some(u) => u.poly = u.poly.add(&t.poly),
            None => out.push(t),
        }
    }
    out.retain(|t| !t.is_zero());
    out
}

fn assert_shape(
    state: &[GenTerm],
    offsets: &[Rat],
    round: usize,
    alpha: &Rat,
    n: i64,
) -> Result<(), RadicalError> {
    let fail = |detail: String| RadicalError::ShapeViolation { round, detail };
    let ci = &offsets[round - 1];
    let mut seen_poly = false;
    let mut seen: Vec<&Rat> = Vec::new();
    for t in state {
        if t.poly.degree() > n {
            return Err(fail(format!(
                "term {t} has degree {} > n = {n}",
                t.poly.degree()
            )));
        }
        match t.factors.as_slice() {
            [] => {
                if seen_poly {
                    return Err(fail("two distinct polynomial parts".into()));
                }
                seen_poly = true;
            }
            fs => {
                if fs.len() != 2 {
                    return Err(fail(format!("term {t} does not have two factors")));
                }
                let anchor = fs.iter().find(|(c, _)| c == ci).ok_or_else(|| {
                    fail(format!("term {t} missing the (x+{ci}) anchor factor"))
                })?;
                if &anchor.1 != &(-alpha) {
                    return Err(fail(format!(
                        "anchor exponent {} instead of {}",
                        anchor.1, -alpha
                    )));
                }
                let other = fs.iter().find(|(c, _)| c != ci).expect("two factors");
                if &other.1 != alpha {
                    return Err(fail(format!(
                        "radical exponent {} instead of {alpha}",
                        other.1
                    )));
                }
                let pos = offsets.iter().position(|c| c == &other.0);
                match pos {
                    Some(p) if p >= round => {}
                    _ => {
                        return Err(fail(format!(
                            "unexpected radical offset {} at round {round}",
                            other.0
                        )))
                    }
                }
                if seen.contains(&&other.0) {
                    return Err(fail(format!("offset {} appears twice", other.0)));
                }
                seen.push(&other.0);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn poly(cs: &[i64]) -> Poly {
        Poly::from_coeffs(cs.iter().map(|&c| Rat::from(c)).collect())
    }

    #[test]
    fn power_rule() {
        // D[(x+a)^α] = α(x+a)^{α−1}
        let a = r(5, 2);
        let alpha = r(-1, 2);
        let t = GenTerm::new(Poly::one(), vec![(a.clone(), alpha.clone())]).unwrap();
        let d = t.diff();
        assert_eq!(d.poly(), &Poly::constant(alpha.clone()));
        assert_eq!(d.factors(), &[(a, alpha - Rat::one())]);
    }

    #[test]
    fn quotient_collapse() {
        // D[((x+a)/(x+b))^α] = α(b−a)·(x+a)^{α−1}(x+b)^{−α−1}
        let (a, b) = (Rat::from(1), Rat::from(3));
        let alpha = r(-3, 2);
        let t = GenTerm::new(
            Poly::one(),
            vec![(a.clone(), alpha.clone()), (b.clone(), -&alpha)],
        )
        .unwrap();
        let d = t.diff();
        assert_eq!(d.poly(), &Poly::constant(&alpha * &(&b - &a)));
        assert_eq!(
            d.factors(),
            &[
                (a, &alpha - &Rat::one()),
                (b, -&alpha - Rat::one())
            ]
        );
    }

    /// After n+1 derivatives of p_n·((x+a)/(x+b))^α the polynomial factor
    /// drops back to degree exactly n (the intermediate degrees are n+k).
    #[test]
    fn degree_drop_after_n_plus_one() {
        let mut state = 0xabcdef12u64;
        let mut rnd = |lo: i64, hi: i64| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            lo + (state % (hi - lo + 1) as u64) as i64
        };
        for n in 0..=6usize {
            for alpha in [r(1, 2), r(-1, 2), r(-3, 2), r(-5, 2)] {
                let a = Rat::from(rnd(1, 6));
                let b = &a + &Rat::from(rnd(1, 5)); // distinct
                let mut cs: Vec<Rat> = (0..n).map(|_| Rat::from(rnd(-4, 4))).collect();
                cs.push(Rat::one()); // monic
                let mut t = GenTerm::new(
                    Poly::from_coeffs(cs),
                    vec![(a.clone(), alpha.clone()), (b.clone(), -&alpha)],
                )
                .unwrap();
                for k in 1..=n {
                    t = t.diff();
                    assert_eq!(t.poly().degree(), (n + k) as i64, "n={n} k={k}");
                }
                t = t.diff();
                assert_eq!(t.poly().degree(), n as i64, "drop failed for n={n} α={alpha}");
                let want_a = &alpha - &Rat::from(n as i64 + 1);
                let want_b = -&alpha - Rat::from(n as i64 + 1);
                assert_eq!(t.factors(), &[(a, want_a), (b, want_b)]);
            }
        }
    }

    #[test]
    fn iterated_coeffs_base_cases() {
        // j = 0: the zeroth derivative is the function itself
        let c = iterated_diff_coeffs(0, 3, &r(-1, 2), &Rat::from(2), &Rat::from(5)).unwrap();
        assert_eq!(c, vec![Rat::one()]);
        // j = n+1: terms ℓ ≥ 1 vanish through the ∏(n−j+m) factor
        let n = 3u32;
        let c = iterated_diff_coeffs(n + 1, n, &r(-1, 2), &Rat::from(2), &Rat::from(5)).unwrap();
        for l in 1..=(n + 1) as usize {
            assert!(c[l].is_zero(), "l={l}");
        }
        assert!(!c[0].is_zero());
        // integer α on a Γ pole is rejected
        let err = iterated_diff_coeffs(4, 1, &Rat::from(-3), &Rat::one(), &Rat::from(2));
        assert!(matches!(err, Err(RadicalError::GammaPole(_))));
    }

    /// `Σ_ℓ C_{j,ℓ}(x+a)^ℓ` must reproduce the polynomial factor of
    /// `D^j[(x+a)^{α+n}(x+b)^{−α}]` exactly, for all j ≤ 7.
    #[test]
    fn iterated_coeffs_match_direct_differentiation() {
        for (n, alpha, a, b) in [
            (0u32, r(-1, 2), Rat::from(1), Rat::from(4)),
            (2, r(-1, 2), r(3, 2), Rat::from(-2)),
            (3, r(-5, 2), Rat::from(2), r(1, 3)),
            (4, r(1, 2), Rat::from(-1), Rat::from(3)),
        ] {
            let mut t = GenTerm::new(
                Poly::one(),
                vec![
                    (a.clone(), &alpha + &Rat::from(n as i64)),
                    (b.clone(), -&alpha),
                ],
            )
            .unwrap();
            for j in 1..=7u32 {
                t = t.diff();
                let coeffs = iterated_diff_coeffs(j, n, &alpha, &a, &b).unwrap();
                let lin = Poly::from_coeffs(vec![a.clone(), Rat::one()]);
                let mut expect = Poly::zero();
                let mut pow = Poly::one();
                for c in &coeffs {
                    expect = expect.add(&pow.scale(c));
                    pow = pow.mul(&lin);
                }
                assert_eq!(t.poly(), &expect, "j={j} n={n} α={alpha}");
                // factor exponents follow (α+n−j, −α−j); factors are kept
                // sorted by offset, so compare as sets
                let mut want = vec![
                    (a.clone(), &alpha + &Rat::from(n as i64 - j as i64)),
                    (b.clone(), -&alpha - Rat::from(j as i64)),
                ];
                want.sort_by(|(c1, _), (c2, _)| c1.cmp(c2));
                assert_eq!(t.factors(), want.as_slice());
            }
        }
    }

    #[test]
    fn pipeline_single_pure_radical() {
        // F = 1/√(x+1): zero differentiations, bound 0
        let f = RadicalFunction::new(
            Poly::zero(),
            vec![(Poly::one(), Rat::one())],
        )
        .unwrap();
        let trace = derivation_division(&f).unwrap();
        assert_eq!(trace.total_derivatives, 0);
        assert_eq!(trace.final_degree, 0);
        assert_eq!(trace.zero_bound, 0);
        assert_eq!(trace.implied_bound, 0);
        assert_eq!(zero_bound(&f), 0);
    }

    #[test]
    fn pipeline_forced_single_zero() {
        // F = 1 − 2/√(x+1): one derivative kills P⁰; bound 1; F(3) = 0
        let f = RadicalFunction::new(
            Poly::one(),
            vec![(Poly::constant(Rat::from(-2)), Rat::one())],
        )
        .unwrap();
        let trace = derivation_division(&f).unwrap();
        assert_eq!(trace.total_derivatives, 1);
        assert_eq!(trace.final_degree, 0);
        assert_eq!(trace.zero_bound, 1);
        assert!(f.eval_f64(3.0).abs() < 1e-15);
    }

    #[test]
    fn pipeline_counts_derivatives() {
        // K = 3, degrees (2,2,2), n₀ = 1 → total = 2·3 + 1 + 1 = 8
        let f = RadicalFunction::new(
            poly(&[1, 2]),
            vec![
                (poly(&[1, -1, 3]), Rat::one()),
                (poly(&[2, 0, 1]), Rat::from(2)),
                (poly(&[-1, 1, 1]), r(7, 2)),
            ],
        )
        .unwrap();
        let trace = derivation_division(&f).unwrap();
        assert_eq!(trace.total_derivatives, 8);
        assert!(trace.final_degree <= 2);
        assert_eq!(trace.zero_bound, 3 * 3 + 1);
        assert_eq!(trace.steps.len(), 3);
    }

    #[test]
    fn pipeline_random_instances() {
        let mut state = 0x77777777u64;
        let mut rnd = |lo: i64, hi: i64| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            lo + (state % (hi - lo + 1) as u64) as i64
        };
        for _ in 0..60 {
            let k = rnd(1, 4) as usize;
            let n = rnd(0, 6);
            let n0 = rnd(-1, 6);
            let p0 = if n0 < 0 {
                Poly::zero()
            } else {
                let mut cs: Vec<Rat> = (0..n0).map(|_| Rat::new(rnd(-5, 5), rnd(1, 3))).collect();
                cs.push(Rat::new(rnd(1, 5), 1));
                Poly::from_coeffs(cs)
            };
            let mut cs_used = Vec::new();
            let mut terms = Vec::new();
            for _ in 0..k {
                let mut c = Rat::new(rnd(1, 10), rnd(1, 2));
                while cs_used.contains(&c) {
                    c = Rat::new(rnd(1, 20), rnd(1, 2));
                }
                cs_used.push(c.clone());
                let mut cs: Vec<Rat> = (0..n).map(|_| Rat::new(rnd(-5, 5), rnd(1, 3))).collect();
                cs.push(Rat::new(rnd(1, 5), 1)); // degree exactly n
                terms.push((Poly::from_coeffs(cs), c));
            }
            let f = RadicalFunction::new(p0, terms).unwrap();
            let trace = derivation_division(&f).unwrap();
            let expect = (k as i64 - 1) * (n + 1) + n0 + 1;
            assert_eq!(trace.total_derivatives as i64, expect);
            assert!(trace.final_degree <= n);
            assert!(trace.implied_bound <= trace.zero_bound);
        }
    }

    #[test]
    fn zero_bound_examples() {
        let f = RadicalFunction::new(
            Poly::one(),
            vec![
                (poly(&[1, 1]), Rat::one()),
                (poly(&[0, 2]), Rat::from(2)),
            ],
        )
        .unwrap();
        assert_eq!(zero_bound(&f), 2 * 2 + 0);

        let f = RadicalFunction::new(Poly::zero(), vec![(Poly::one(), Rat::one())]).unwrap();
        assert_eq!(zero_bound(&f), 0);

        let f = RadicalFunction::new(poly(&[1, 0, 0, 2]), vec![]).unwrap();
        assert_eq!(zero_bound(&f), 3);
    }

    #[test]
    fn duplicate_radicands_rejected() {
        let err = RadicalFunction::new(
            Poly::zero(),
            vec![
                (Poly::one(), Rat::one()),
                (poly(&[2]), Rat::one()),
            ],
        );
        assert!(matches!(err, Err(RadicalError::DuplicateRadicand(_))));
        // a zero numerator does not conflict
        let ok = RadicalFunction::new(
            Poly::zero(),
            vec![
                (Poly::one(), Rat::one()),
                (Poly::zero(), Rat::one()),
            ],
        )
        .unwrap();
        assert_eq!(ok.k(), 1);
    }

    #[test]
    fn pipeline_requires_radical_term() {
        let f = RadicalFunction::new(poly(&[1, 2]), vec![]).unwrap();
        assert!(matches!(
            derivation_division(&f),
            Err(RadicalError::EmptyRadicalPart)
        ));
    }

    #[test]
    fn trace_serializes() {
        let f = RadicalFunction::new(
            poly(&[3]),
            vec![(poly(&[1, 1]), Rat::one()), (poly(&[2]), Rat::from(3))],
        )
        .unwrap();
        let trace = derivation_division(&f).unwrap();
        let js = serde_json::to_string_pretty(&trace).unwrap();
        assert!(js.contains("total_derivatives"));
        let back: PipelineTrace = serde_json::from_str(&js).unwrap();
        assert_eq!(back.total_derivatives, trace.total_derivatives);
    }
}
