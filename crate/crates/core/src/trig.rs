//! Exact evaluation of `∫₀^{2π} (trig monomial)/(line factors) dθ`.
//!
//! Integrands are trigonometric polynomials in `sinθ, cosθ, r`; denominators
//! are one line factor `(r cosθ − a)` or a product of two orthogonal ones
//! `(r cosθ − a)(r sinθ − b)`. Values come out as [`RadVal`]s: a polynomial
//! in `ρ = r²` plus radical terms `S(ρ)/√(c−ρ)` and, in the two-line case,
//! pole terms `S(ρ)/((d−ρ)√(c−ρ))` with `d = a²+b²`.
//!
//! Every stored value is a coefficient of π: the represented number is
//! π·(stored data). Carrying π symbolically keeps all identities exact.
//!
//! Reductions: powers of `cosθ` are peeled with `r cosθ = (r cosθ − a) + a`,
//! powers of `sinθ` with `r sinθ = (r sinθ − b) + b`; the recursion bottoms
//! out at the base integrals of an empty numerator and at plain cosine
//! moments. Only integer powers of ρ survive; a term whose radial power
//! cannot reduce that way is rejected rather than silently approximated.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{Poly, Rat};
use crate::real::{Real, RealCtx};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TrigError {
    #[error("singular line offset must be nonzero")]
    ZeroLine,
    #[error(
        "term sin^{i}·cos^{j}·r^{m} cannot reduce to integer powers of r²: \
         need m ≥ i+j with m−i−j even"
    )]
    OddRadialPower { i: u32, j: u32, m: u32 },
}

/// Denominator of a line integral: one vertical line `(r cosθ − a)` or a
/// vertical-horizontal pair `(r cosθ − a)(r sinθ − b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Denominator {
    OneLine(Rat),
    TwoLine(Rat, Rat),
}

/// Trigonometric polynomial: map from `(i, j, m)` to the coefficient of
/// `sin^iθ · cos^jθ · r^m`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TrigPoly {
    terms: BTreeMap<(u32, u32, u32), Rat>,
}

impl TrigPoly {
    pub fn zero() -> Self {
        TrigPoly::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u32, u32, Rat)>) -> Self {
        let mut t = TrigPoly::zero();
        for (i, j, m, c) in terms {
            t.add_term(i, j, m, c);
        }
        t
    }

    /// Adds `c·sin^iθ·cos^jθ·r^m`, merging and dropping exact zeros.
    pub fn add_term(&mut self, i: u32, j: u32, m: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((i, j, m)).or_insert_with(Rat::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&(i, j, m));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, u32, &Rat)> {
        self.terms.iter().map(|(&(i, j, m), c)| (i, j, m, c))
    }

    pub fn add(&self, other: &TrigPoly) -> TrigPoly {
        let mut out = self.clone();
        for (i, j, m, c) in other.terms() {
            out.add_term(i, j, m, c.clone());
        }
        out
    }

    /// Swaps the roles of `sinθ` and `cosθ` (the `(x,y) → (y,x)` symmetry).
    pub fn swap_axes(&self) -> TrigPoly {
        TrigPoly::from_terms(self.terms().map(|(i, j, m, c)| (j, i, m, c.clone())))
    }

    /// True when every sine power is 0 or 1.
    pub fn is_sin_normalized(&self) -> bool {
        self.terms.keys().all(|&(i, _, _)| i <= 1)
    }

    /// Rewrites `sin^{2t}θ = (1 − cos²θ)^t` so all sine powers are 0 or 1.
    /// The result is the same function of θ.
    pub fn normalize_sin(&self) -> TrigPoly {
        let mut out = TrigPoly::zero();
        for (i, j, m, c) in self.terms() {
            let t = i / 2;
            let rem = i % 2;
            for k in 0..=t {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                let coeff = c * &Rat::from(sign) * &binom_rat(t, k);
                out.add_term(rem, j + 2 * k, m, coeff);
            }
        }
        out
    }

    /// Sample the trig polynomial as a function of θ at fixed r.
    pub fn eval_f64(&self, theta: f64, r: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        self.terms()
            .map(|(i, j, m, coeff)| {
                coeff.to_f64() * s.powi(i as i32) * c.powi(j as i32) * r.powi(m as i32)
            })
            .sum()
    }
}

fn binom_rat(n: u32, k: u32) -> Rat {
    Rat::from(num_integer::binomial(BigInt::from(n), BigInt::from(k)))
}

/// `∫₀^{2π} cos^kθ dθ` as a multiple of π: `binom(k, k/2)/2^{k−1}` for even
/// k, zero for odd k.
pub fn cos_moment(k: u32) -> Rat {
    if k % 2 == 1 {
        return Rat::zero();
    }
    binom_rat(k, k / 2) * Rat::from(2).pow(1 - k as i32)
}

/// Closed-form value of a line integral, as a multiple of π:
///
/// `value(ρ)/π = T(ρ) + Σ_c S_c(ρ)/√(c−ρ) + Σ_{d,c} S_{d,c}(ρ)/((d−ρ)√(c−ρ))`
///
/// Radicands `c` and pole offsets `d` are positive; the value is finite for
/// `0 ≤ ρ < min(c)`. Zero polynomials are never stored, so the key sets are
/// canonical.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RadVal {
    poly: Poly,
    radicals: BTreeMap<Rat, Poly>,
    poles: BTreeMap<(Rat, Rat), Poly>,
}

impl RadVal {
    pub fn zero() -> Self {
        RadVal::default()
    }

    pub fn from_poly(poly: Poly) -> Self {
        RadVal {
            poly,
            ..RadVal::default()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero() && self.radicals.is_empty() && self.poles.is_empty()
    }

    pub fn poly_part(&self) -> &Poly {
        &self.poly
    }

    pub fn radicals(&self) -> impl Iterator<Item = (&Rat, &Poly)> {
        self.radicals.iter()
    }

    pub fn poles(&self) -> impl Iterator<Item = (&Rat, &Rat, &Poly)> {
        self.poles.iter().map(|((d, c), s)| (d, c, s))
    }

    pub fn has_poles(&self) -> bool {
        !self.poles.is_empty()
    }

    pub fn radical_keys(&self) -> Vec<Rat> {
        self.radicals.keys().cloned().collect()
    }

    /// Distinct pole offsets `d`, ascending.
    pub fn pole_offsets(&self) -> Vec<Rat> {
        let mut out: Vec<Rat> = self.poles.keys().map(|(d, _)| d.clone()).collect();
        out.dedup();
        out
    }

    pub fn add_radical(&mut self, c: Rat, s: Poly) {
        if s.is_zero() {
            return;
        }
        debug_assert!(c.signum() > 0);
        let entry = self.radicals.entry(c).or_insert_with(Poly::zero);
        *entry = entry.add(&s);
        self.radicals.retain(|_, p| !p.is_zero());
    }

    pub fn add_pole(&mut self, d: Rat, c: Rat, s: Poly) {
        if s.is_zero() {
            return;
        }
        debug_assert!(d.signum() > 0 && c.signum() > 0);
        let entry = self.poles.entry((d, c)).or_insert_with(Poly::zero);
        *entry = entry.add(&s);
        self.poles.retain(|_, p| !p.is_zero());
    }

    pub fn add(&self, other: &RadVal) -> RadVal {
        let mut out = self.clone();
        out.poly = out.poly.add(&other.poly);
        for (c, s) in &other.radicals {
            out.add_radical(c.clone(), s.clone());
        }
        for ((d, c), s) in &other.poles {
            out.add_pole(d.clone(), c.clone(), s.clone());
        }
        out
    }

    pub fn scale(&self, k: &Rat) -> RadVal {
        if k.is_zero() {
            return RadVal::zero();
        }
        RadVal {
            poly: self.poly.scale(k),
            radicals: self
                .radicals
                .iter()
                .map(|(c, s)| (c.clone(), s.scale(k)))
                .collect(),
            poles: self
                .poles
                .iter()
                .map(|(k2, s)| (k2.clone(), s.scale(k)))
                .collect(),
        }
    }

    /// Multiplies every part by a polynomial in ρ.
    pub fn mul_poly(&self, p: &Poly) -> RadVal {
        if p.is_zero() {
            return RadVal::zero();
        }
        RadVal {
            poly: self.poly.mul(p),
            radicals: self
                .radicals
                .iter()
                .map(|(c, s)| (c.clone(), s.mul(p)))
                .collect(),
            poles: self
                .poles
                .iter()
                .map(|(k2, s)| (k2.clone(), s.mul(p)))
                .collect(),
        }
    }

    /// Multiplies by `ρ^k`.
    pub fn shift_rho(&self, k: u32) -> RadVal {
        self.mul_poly(&Poly::monomial(Rat::one(), k as usize))
    }

    /// Folds every bare radical term into the pole structure at offset `d`:
    /// `S/√(c−ρ) = S·(d−ρ)/((d−ρ)√(c−ρ))`. Used to put two-line values in
    /// their canonical pole form.
    pub fn absorb_radicals_into_pole(mut self, d: &Rat) -> RadVal {
        let radicals = std::mem::take(&mut self.radicals);
        let pole_factor = Poly::from_coeffs(vec![d.clone(), Rat::from(-1)]);
        for (c, s) in radicals {
            self.add_pole(d.clone(), c, s.mul(&pole_factor));
        }
        self
    }

    /// Minimal radicand, the square of the value's radius of validity.
    pub fn min_radicand(&self) -> Option<Rat> {
        let rad_min = self.radicals.keys().min();
        let pole_min = self.poles.keys().map(|(_, c)| c).min();
        match (rad_min, pole_min) {
            (Some(a), Some(b)) => Some(a.min(b).clone()),
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (None, None) => None,
        }
    }

    /// Full-precision evaluation at rational `ρ`. Numerators are evaluated
    /// exactly; only the final square roots, divisions and the π factor
    /// round.
    pub fn eval_real(&self, rho: &Rat, ctx: &RealCtx) -> Real {
        let inner = ctx.widened(16);
        let mut acc = inner.from_rat(&self.poly.eval_rat(rho));
        for (c, s) in &self.radicals {
            let num = inner.from_rat(&s.eval_rat(rho));
            let rad = inner.sqrt(&inner.from_rat(&(c - rho)));
            acc = inner.add(&acc, &inner.div(&num, &rad));
        }
        for ((d, c), s) in &self.poles {
            let num = inner.from_rat(&s.eval_rat(rho));
            let rad = inner.sqrt(&inner.from_rat(&(c - rho)));
            let den = inner.mul(&inner.from_rat(&(d - rho)), &rad);
            acc = inner.add(&acc, &inner.div(&num, &den));
        }
        ctx.promote(&inner.mul(&acc, &inner.pi()))
    }

    /// Exact value divided by π, when every `√(c−ρ)` happens to be
    /// rational; `None` otherwise.
    pub fn eval_over_pi_exact(&self, rho: &Rat) -> Option<Rat> {
        let mut acc = self.poly.eval_rat(rho);
        for (c, s) in &self.radicals {
            let root = (c - rho).sqrt_exact()?;
            acc = acc + s.eval_rat(rho) / root;
        }
        for ((d, c), s) in &self.poles {
            let root = (c - rho).sqrt_exact()?;
            acc = acc + s.eval_rat(rho) / ((d - rho) * root);
        }
        Some(acc)
    }

    /// Precompiled f64 evaluator for grid scans.
    pub fn compile_f64(&self) -> RadValEval {
        RadValEval {
            poly: self.poly.coeffs().iter().map(Rat::to_f64).collect(),
            radicals: self
                .radicals
                .iter()
                .map(|(c, s)| (c.to_f64(), s.coeffs().iter().map(Rat::to_f64).collect()))
                .collect(),
            poles: self
                .poles
                .iter()
                .map(|((d, c), s)| {
                    (
                        d.to_f64(),
                        c.to_f64(),
                        s.coeffs().iter().map(Rat::to_f64).collect(),
                    )
                })
                .collect(),
        }
    }

    /// Largest degree among radical numerators; −1 when there are none.
    pub fn max_radical_degree(&self) -> i64 {
        self.radicals.values().map(Poly::degree).max().unwrap_or(-1)
    }

    /// Largest degree among pole numerators; −1 when there are none.
    pub fn max_pole_degree(&self) -> i64 {
        self.poles.values().map(Poly::degree).max().unwrap_or(-1)
    }
}

/// f64 evaluator produced by [`RadVal::compile_f64`].
pub struct RadValEval {
    poly: Vec<f64>,
    radicals: Vec<(f64, Vec<f64>)>,
    poles: Vec<(f64, f64, Vec<f64>)>,
}

impl RadValEval {
    pub fn eval(&self, rho: f64) -> f64 {
        let horner = |cs: &[f64]| {
            let mut acc = 0.0;
            for c in cs.iter().rev() {
                acc = acc * rho + c;
            }
            acc
        };
        let mut acc = horner(&self.poly);
        for (c, s) in &self.radicals {
            acc += horner(s) / (c - rho).sqrt();
        }
        for (d, c, s) in &self.poles {
            acc += horner(s) / ((d - rho) * (c - rho).sqrt());
        }
        acc * std::f64::consts::PI
    }
}

impl fmt::Display for RadVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if !self.poly.is_zero() {
            parts.push(format!("{}", self.poly));
        }
        for (c, s) in &self.radicals {
            parts.push(format!("[{s}]/sqrt({c}-p)"));
        }
        for ((d, c), s) in &self.poles {
            parts.push(format!("[{s}]/(({d}-p)·sqrt({c}-p))"));
        }
        write!(f, "pi·( {} )", parts.join(" + "))
    }
}

impl fmt::Debug for RadVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct RadicalTermJson {
    c: Rat,
    #[serde(rename = "S")]
    s: Poly,
}

#[derive(Serialize, Deserialize)]
struct PoleTermJson {
    d: Rat,
    c: Rat,
    #[serde(rename = "S")]
    s: Poly,
}

impl Serialize for RadVal {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut st = ser.serialize_struct("RadVal", 3)?;
        st.serialize_field("poly", &self.poly)?;
        let rads: Vec<RadicalTermJson> = self
            .radicals
            .iter()
            .map(|(c, s)| RadicalTermJson {
                c: c.clone(),
                s: s.clone(),
            })
            .collect();
        st.serialize_field("radicals", &rads)?;
        let poles: Vec<PoleTermJson> = self
            .poles
            .iter()
            .map(|((d, c), s)| PoleTermJson {
                d: d.clone(),
                c: c.clone(),
                s: s.clone(),
            })
            .collect();
        st.serialize_field("poles", &poles)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for RadVal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            poly: Poly,
            radicals: Vec<RadicalTermJson>,
            poles: Vec<PoleTermJson>,
        }
        let raw = Raw::deserialize(d)?;
        let mut out = RadVal::from_poly(raw.poly);
        for t in raw.radicals {
            out.add_radical(t.c, t.s);
        }
        for t in raw.poles {
            out.add_pole(t.d, t.c, t.s);
        }
        Ok(out)
    }
}

/// `∫₀^{2π} dθ/(r cosθ − a) = −2π·sign(a)/√(a²−r²)`, valid for `r² < a²`.
pub fn base_one_line(a: &Rat) -> Result<RadVal, TrigError> {
    if a.is_zero() {
        return Err(TrigError::ZeroLine);
    }
    let mut out = RadVal::zero();
    out.add_radical(a.square(), Poly::constant(Rat::from(-2 * a.signum() as i64)));
    Ok(out)
}

/// `∫₀^{2π} dθ/((r cosθ − a)(r sinθ − b))`, valid for `r² < min(a², b²)`:
///
/// `2π/(a²+b²−r²) · ( sign(a)·b/√(a²−r²) + sign(b)·a/√(b²−r²) )`
///
/// The sign factors make the formula correct in all four quadrants of
/// `(a, b)`; at `r = 0` it reduces to `2π/(ab)`. Validated against
/// quadrature before adoption (see the module tests).
pub fn base_two_line(a: &Rat, b: &Rat) -> Result<RadVal, TrigError> {
    if a.is_zero() || b.is_zero() {
        return Err(TrigError::ZeroLine);
    }
    let d = a.square() + b.square();
    let mut out = RadVal::zero();
    out.add_pole(
        d.clone(),
        a.square(),
        Poly::constant(Rat::from(2 * a.signum() as i64) * b),
    );
    out.add_pole(
        d,
        b.square(),
        Poly::constant(Rat::from(2 * b.signum() as i64) * a),
    );
    Ok(out)
}

/// `∫₀^{2π} t(θ, r)/den dθ` as an exact [`RadVal`].
///
/// The integrand is normalized internally, so any sine powers are accepted.
/// Terms with an odd sine power over a single vertical line vanish by
/// symmetry. Each term must satisfy `m ≥ i+j` with `m−i−j` even, which is
/// automatic for integrands coming from polynomial perturbations.
pub fn line_integral(t: &TrigPoly, den: &Denominator) -> Result<RadVal, TrigError> {
    let t = if t.is_sin_normalized() {
        t.clone()
    } else {
        t.normalize_sin()
    };
    for (i, j, m, _) in t.terms() {
        if m < i + j || (m - i - j) % 2 != 0 {
            return Err(TrigError::OddRadialPower { i, j, m });
        }
    }
    match den {
        Denominator::OneLine(a) => {
            if a.is_zero() {
                return Err(TrigError::ZeroLine);
            }
            let mut ctx = OneLineCtx::new(a.clone());
            let mut acc = RadVal::zero();
            for (i, j, m, coeff) in t.terms() {
                if i == 1 {
                    continue; // odd in θ over a full period
                }
                acc = acc.add(&ctx.value(j, m).scale(coeff));
            }
            Ok(acc)
        }
        Denominator::TwoLine(a, b) => {
            if a.is_zero() || b.is_zero() {
                return Err(TrigError::ZeroLine);
            }
            let mut ctx = TwoLineCtx::new(a.clone(), b.clone());
            let mut acc = RadVal::zero();
            for (i, j, m, coeff) in t.terms() {
                acc = acc.add(&ctx.value(i, j, m).scale(coeff));
            }
            let d = a.square() + b.square();
            Ok(acc.absorb_radicals_into_pole(&d))
        }
    }
}

/// Reduction state for `∫ cos^jθ r^m/(r cosθ − a) dθ`.
struct OneLineCtx {
    a: Rat,
    base: RadVal,
    memo: HashMap<(u32, u32), RadVal>,
}

impl OneLineCtx {
    fn new(a: Rat) -> Self {
        let base = base_one_line(&a).expect("nonzero line");
        OneLineCtx {
            a,
            base,
            memo: HashMap::new(),
        }
    }

    /// Value of `∫ cos^jθ r^m/(r cosθ − a) dθ`; caller guarantees
    /// `m ≥ j` and `m − j` even.
    fn value(&mut self, j: u32, m: u32) -> RadVal {
        if let Some(v) = self.memo.get(&(j, m)) {
            return v.clone();
        }
        let out = if j == 0 {
            debug_assert!(m % 2 == 0);
            self.base.shift_rho(m / 2)
        } else {
            // cos^jθ·r^m = cos^{j−1}θ·r^{m−1}·((r cosθ − a) + a)
            let a = self.a.clone();
            let mut v = self.value(j - 1, m - 1).scale(&a);
            let moment = cos_moment(j - 1);
            if !moment.is_zero() {
                debug_assert!((m - 1) % 2 == 0);
                v = v.add(&RadVal::from_poly(Poly::monomial(
                    moment,
                    ((m - 1) / 2) as usize,
                )));
            }
            v
        };
        self.memo.insert((j, m), out.clone());
        out
    }
}

/// Reduction state for `∫ sin^iθ cos^jθ r^m/((r cosθ − a)(r sinθ − b)) dθ`
/// with `i ∈ {0, 1}`.
struct TwoLineCtx {
    a: Rat,
    b: Rat,
    one_a: OneLineCtx,
    one_b: OneLineCtx,
    base: RadVal,
    memo: HashMap<(u32, u32, u32), RadVal>,
}

impl TwoLineCtx {
    fn new(a: Rat, b: Rat) -> Self {
        let base = base_two_line(&a, &b).expect("nonzero lines");
        TwoLineCtx {
            one_a: OneLineCtx::new(a.clone()),
            one_b: OneLineCtx::new(b.clone()),
            a,
            b,
            base,
            memo: HashMap::new(),
        }
    }

    fn value(&mut self, i: u32, j: u32, m: u32) -> RadVal {
        debug_assert!(i <= 1);
        if let Some(v) = self.memo.get(&(i, j, m)) {
            return v.clone();
        }
        let out = if i == 1 {
            // r sinθ = (r sinθ − b) + b
            let b = self.b.clone();
            let one = self.one_a.value(j, m - 1);
            let rest = self.value(0, j, m - 1).scale(&b);
            one.add(&rest)
        } else if j >= 1 {
            // r cosθ = (r cosθ − a) + a
            let a = self.a.clone();
            let phi = self.cos_over_sin_line(j - 1, m - 1);
            let rest = self.value(0, j - 1, m - 1).scale(&a);
            phi.add(&rest)
        } else {
            debug_assert!(m % 2 == 0);
            self.base.shift_rho(m / 2)
        };
        self.memo.insert((i, j, m), out.clone());
        out
    }

    /// `∫ cos^kθ r^m/(r sinθ − b) dθ`. Substituting `θ = φ + π/2` turns it
    /// into `(−1)^k ∫ sin^kφ r^m/(r cosφ − b) dφ`; odd k vanishes, even k
    /// expands through `sin^k = (1−cos²)^{k/2}`.
    fn cos_over_sin_line(&mut self, k: u32, m: u32) -> RadVal {
        if k % 2 == 1 {
            return RadVal::zero();
        }
        let t = k / 2;
        let mut acc = RadVal::zero();
        for l in 0..=t {
            let sign = if l % 2 == 0 { 1 } else { -1 };
            let coeff = Rat::from(sign) * binom_rat(t, l);
            acc = acc.add(&self.one_b.value(2 * l, m).scale(&coeff));
        }
        acc
    }
}
