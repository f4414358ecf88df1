use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Rat;

/// Sparse bivariate polynomial in `(x, y)` with exact rational
/// coefficients. No zero coefficients are stored; the key is the exponent
/// pair `(i, j)` for `x^i·y^j`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Rat>,
}

/// One monomial `c·x^i·y^j` as it appears in configuration files.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BiTerm {
    pub i: u32,
    pub j: u32,
    pub c: Rat,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(0, 0, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u32, Rat)>) -> Self {
        let mut p = BiPoly::zero();
        for (i, j, c) in terms {
            p.add_term(i, j, c);
        }
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert_with(Rat::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; −1 for the zero polynomial.
    pub fn total_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|&(i, j)| (i + j) as i64)
            .max()
            .unwrap_or(-1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &Rat)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn eval_rat(&self, x: &Rat, y: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (&(i, j), c) in &self.terms {
            acc = acc + c * &x.pow(i as i32) * &y.pow(j as i32);
        }
        acc
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.rows_f64().eval(x, y)
    }

    /// Dense row form for repeated float evaluation: `rows[i][j]` is the
    /// coefficient of `x^i·y^j`, evaluated by nested Horner.
    pub fn rows_f64(&self) -> BiPolyRows {
        let ni = self.terms.keys().map(|&(i, _)| i).max().map_or(0, |v| v + 1);
        let mut rows = vec![Vec::new(); ni as usize];
        for (&(i, j), c) in &self.terms {
            let row = &mut rows[i as usize];
            if row.len() <= j as usize {
                row.resize(j as usize + 1, 0.0);
            }
            row[j as usize] = c.to_f64();
        }
        BiPolyRows { rows }
    }

    pub fn to_terms(&self) -> Vec<BiTerm> {
        self.terms
            .iter()
            .map(|(&(i, j), c)| BiTerm { i, j, c: c.clone() })
            .collect()
    }
}

/// Precompiled f64 evaluator for a [`BiPoly`].
pub struct BiPolyRows {
    rows: Vec<Vec<f64>>,
}

impl BiPolyRows {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for row in self.rows.iter().rev() {
            let mut inner = 0.0;
            for c in row.iter().rev() {
                inner = inner * y + c;
            }
            acc = acc * x + inner;
        }
        acc
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(i, j), c)| {
                let mut s = format!("({c})");
                if i > 0 {
                    s += &format!("·x^{i}");
                }
                if j > 0 {
                    s += &format!("·y^{j}");
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for BiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_terms().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<BiTerm>::deserialize(d)?;
        Ok(BiPoly::from_terms(terms.into_iter().map(|t| (t.i, t.j, t.c))))
    }
}
