//! Assembly of the full closed form of the Abelian integral
//!
//! `I(r) = ∮_{x²+y²=r²} (Q dx − P dy) / (∏ⱼ(x−aⱼ) ∏ₗ(y−bₗ))`
//!
//! for a configuration of singular lines and a polynomial perturbation
//! `(P, Q)`: build the trigonometric integrand, split the line product by
//! partial fractions, sum the one- or two-line integrals, and optionally
//! clear the pole factors by multiplying with `H(ρ) = ∏(d−ρ)` over the
//! distinct offsets `d = aⱼ²+bₖ²`.
//!
//! Radical terms are keyed by the squared line offsets, so terms belonging
//! to equal absolute values (`a` and `−a`) merge automatically and the
//! radical basis always uses the distinct `|a|` values.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{lagrange_pf_coeffs, AlgebraError, BiPoly, Poly, Rat};
use crate::radical::{RadicalError, RadicalFunction};
use crate::trig::{line_integral, Denominator, RadVal, TrigError, TrigPoly};

#[derive(Debug, Error)]
pub enum AbelianError {
    #[error("invalid line configuration: {0}")]
    InvalidConfig(String),
    #[error("perturbation degree {actual} exceeds declared bound {declared}")]
    DegreeBound { actual: i64, declared: u32 },
    #[error("closed form is already pole-free")]
    NotApplicable,
    #[error("closed form still carries pole factors; clear them first")]
    PolesRemain,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Trig(#[from] TrigError),
    #[error(transparent)]
    Radical(#[from] RadicalError),
}

/// The singular-line sets `{aⱼ}` (vertical, `x = aⱼ`) and `{bₗ}`
/// (horizontal, `y = bₗ`). All offsets are nonzero (no line through the
/// origin) and distinct per axis; at least one line exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineConfig {
    a_lines: Vec<Rat>,
    b_lines: Vec<Rat>,
}

impl LineConfig {
    pub fn new(a_lines: Vec<Rat>, b_lines: Vec<Rat>) -> Result<Self, AbelianError> {
        if a_lines.is_empty() && b_lines.is_empty() {
            return Err(AbelianError::InvalidConfig("no singular lines".into()));
        }
        for (axis, lines) in [("x", &a_lines), ("y", &b_lines)] {
            for (i, v) in lines.iter().enumerate() {
                if v.is_zero() {
                    return Err(AbelianError::InvalidConfig(format!(
                        "{axis}-line through the origin"
                    )));
                }
                if lines[i + 1..].contains(v) {
                    return Err(AbelianError::InvalidConfig(format!(
                        "duplicate {axis}-line {v}"
                    )));
                }
            }
        }
        Ok(LineConfig { a_lines, b_lines })
    }

    pub fn a_lines(&self) -> &[Rat] {
        &self.a_lines
    }

    pub fn b_lines(&self) -> &[Rat] {
        &self.b_lines
    }

    pub fn k1(&self) -> usize {
        self.a_lines.len()
    }

    pub fn k2(&self) -> usize {
        self.b_lines.len()
    }

    /// Inner radius of the period annulus: `min |offset|` over all lines.
    pub fn rho_min(&self) -> Rat {
        self.a_lines
            .iter()
            .chain(&self.b_lines)
            .map(Rat::abs)
            .min()
            .expect("nonempty config")
    }

    /// The `(x, y) → (y, x)` mirror configuration.
    pub fn swapped(&self) -> LineConfig {
        LineConfig {
            a_lines: self.b_lines.clone(),
            b_lines: self.a_lines.clone(),
        }
    }

    /// Sign of `G = ∏(x−aⱼ)∏(y−bₗ)` anywhere inside the annulus (each
    /// factor keeps the sign of `−line offset` there).
    pub fn g_sign(&self) -> i32 {
        let mut s = 1i32;
        for v in self.a_lines.iter().chain(&self.b_lines) {
            s *= -v.signum();
        }
        s
    }

    /// `G(x, y)` evaluated in f64.
    pub fn g_f64(&self, x: f64, y: f64) -> f64 {
        let mut g = 1.0;
        for a in &self.a_lines {
            g *= x - a.to_f64();
        }
        for b in &self.b_lines {
            g *= y - b.to_f64();
        }
        g
    }
}

/// Polynomial perturbation `(P, Q)` of declared degree bound `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Perturbation {
    p: BiPoly,
    q: BiPoly,
    degree: u32,
}

impl Perturbation {
    pub fn new(p: BiPoly, q: BiPoly, degree: u32) -> Result<Self, AbelianError> {
        let actual = p.total_degree().max(q.total_degree());
        if actual > degree as i64 {
            return Err(AbelianError::DegreeBound {
                actual,
                declared: degree,
            });
        }
        Ok(Perturbation { p, q, degree })
    }

    pub fn p(&self) -> &BiPoly {
        &self.p
    }

    pub fn q(&self) -> &BiPoly {
        &self.q
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// The mirrored perturbation matching [`LineConfig::swapped`]:
    /// `P'(x,y) = Q(y,x)`, `Q'(x,y) = P(y,x)`.
    pub fn swapped(&self) -> Perturbation {
        let flip = |poly: &BiPoly| BiPoly::from_terms(poly.terms().map(|(i, j, c)| (j, i, c.clone())));
        Perturbation {
            p: flip(&self.q),
            q: flip(&self.p),
            degree: self.degree,
        }
    }
}

/// Closed form of the Abelian integral together with its provenance.
/// `value` is π-scaled like every [`RadVal`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClosedForm {
    pub value: RadVal,
    pub config: LineConfig,
    pub perturbation: Perturbation,
    pub pole_free: bool,
}

impl ClosedForm {
    /// Evaluate `I(r)` at `r² = rho` in f64 via exact numerators.
    pub fn eval_rho(&self, rho: &Rat, ctx: &crate::real::RealCtx) -> crate::real::Real {
        self.value.eval_real(rho, ctx)
    }
}

/// Numerator of the polar-form integrand: substituting `x = r cosθ`,
/// `y = r sinθ` into `−r·Q·sinθ − r·P·cosθ` (degree n+1 when `deg(P,Q)=n`).
pub fn integrand(pert: &Perturbation) -> TrigPoly {
    let mut t = TrigPoly::zero();
    // x^i y^j ↦ r^{i+j} cos^iθ sin^jθ
    for (i, j, c) in pert.q.terms() {
        t.add_term(j + 1, i, i + j + 1, -c.clone());
    }
    for (i, j, c) in pert.p.terms() {
        t.add_term(j, i + 1, i + j + 1, -c.clone());
    }
    t
}

/// Exact closed form of the Abelian integral for a full configuration.
///
/// Structure of the result: for a single-axis configuration the value is
/// `Σⱼ Sʲ(ρ)/√(ãⱼ²−ρ) + T(ρ)` with `deg Sʲ ≤ [(n−1)/2]+1`, `deg T ≤ [n/2]`;
/// for a mixed configuration it carries pole terms over the offsets
/// `d = aⱼ²+bₖ²` with numerator degrees ≤ `[n/2]+1` and polynomial part of
/// degree ≤ `[(n−1)/2]`. Radical keys are the distinct squared offsets.
pub fn closed_form(
    config: &LineConfig,
    pert: &Perturbation,
) -> Result<ClosedForm, AbelianError> {
    let t = integrand(pert);
    let value = match (config.k1(), config.k2()) {
        (_, 0) => one_axis_sum(&t, config.a_lines())?,
        (0, _) => one_axis_sum(&t.swap_axes(), config.b_lines())?,
        _ => {
            let da = lagrange_pf_coeffs(config.a_lines())?;
            let db = lagrange_pf_coeffs(config.b_lines())?;
            let mut acc = RadVal::zero();
            for (a, wa) in config.a_lines().iter().zip(&da) {
                for (b, wb) in config.b_lines().iter().zip(&db) {
                    let den = Denominator::TwoLine(a.clone(), b.clone());
                    acc = acc.add(&line_integral(&t, &den)?.scale(&(wa * wb)));
                }
            }
            acc
        }
    };
    let pole_free = !value.has_poles();
    Ok(ClosedForm {
        value,
        config: config.clone(),
        perturbation: pert.clone(),
        pole_free,
    })
}

fn one_axis_sum(t: &TrigPoly, lines: &[Rat]) -> Result<RadVal, AbelianError> {
    let weights = lagrange_pf_coeffs(lines)?;
    let mut acc = RadVal::zero();
    for (a, w) in lines.iter().zip(&weights) {
        acc = acc.add(&line_integral(t, &Denominator::OneLine(a.clone()))?.scale(w));
    }
    Ok(acc)
}

/// The pole-clearing factor `H(ρ) = ∏(d−ρ)` over the distinct pole offsets
/// of the closed form (`1` if there are none).
pub fn pole_clearing_factor(cf: &ClosedForm) -> Poly {
    let mut h = Poly::one();
    for d in cf.value.pole_offsets() {
        h = h.mul(&Poly::from_coeffs(vec![d, Rat::from(-1)]));
    }
    h
}

/// Multiplies the closed form by `H(ρ)` so that no pole factors remain.
/// `H` has no roots in `(0, ρ_min²)` (every offset satisfies
/// `d = a²+b² ≥ 2·ρ_min²`, checked per instance), so zeros of `H·I` there
/// are exactly the zeros of `I`.
pub fn clear_poles(cf: &ClosedForm) -> Result<ClosedForm, AbelianError> {
    if cf.pole_free {
        return Err(AbelianError::NotApplicable);
    }
    let rho_min_sq = cf.config.rho_min().square();
    for d in cf.value.pole_offsets() {
        assert!(
            d > rho_min_sq,
            "pole offset {d} inside the annulus radius² {rho_min_sq}"
        );
    }
    let offsets = cf.value.pole_offsets();
    let mut value = RadVal::from_poly(cf.value.poly_part().clone());
    for (c, s) in cf.value.radicals() {
        value.add_radical(c.clone(), s.clone());
    }
    // H·(poly + radicals), then each pole term picks up H/(d−ρ)
    let h = pole_clearing_factor(cf);
    value = value.mul_poly(&h);
    for (d, c, s) in cf.value.poles() {
        let mut cof = Poly::one();
        for d2 in &offsets {
            if d2 != d {
                cof = cof.mul(&Poly::from_coeffs(vec![d2.clone(), Rat::from(-1)]));
            }
        }
        value.add_radical(c.clone(), s.mul(&cof));
    }
    Ok(ClosedForm {
        value,
        config: cf.config.clone(),
        perturbation: cf.perturbation.clone(),
        pole_free: true,
    })
}

/// Applies [`clear_poles`] when needed, otherwise passes through.
pub fn ensure_pole_free(cf: ClosedForm) -> Result<ClosedForm, AbelianError> {
    if cf.pole_free {
        Ok(cf)
    } else {
        clear_poles(&cf)
    }
}

/// Rewrites a pole-free closed form as a radical function by substituting
/// `x = −ρ`: each `1/√(c−ρ)` becomes `1/√(x+c)`. Returns the function and
/// the interval `(−ρ_min², 0)` on which its zeros correspond one-to-one to
/// zeros of `I(r)` for `r ∈ (0, ρ_min)`.
pub fn to_radical_function(
    cf: &ClosedForm,
) -> Result<(RadicalFunction, (Rat, Rat)), AbelianError> {
    if !cf.pole_free {
        return Err(AbelianError::PolesRemain);
    }
    let p0 = cf.value.poly_part().compose_neg_x();
    let terms: Vec<(Poly, Rat)> = cf
        .value
        .radicals()
        .map(|(c, s)| (s.compose_neg_x(), c.clone()))
        .collect();
    let f = RadicalFunction::new(p0, terms)?;
    let lo = -cf.config.rho_min().square();
    Ok((f, (lo, Rat::zero())))
}
