//! Multivariate polynomials with matrix coefficients.
//!
//! These hold the operator families D_j(s): the coefficient of the monomial
//! s^α is a rational matrix, the support is finite, and evaluation at any
//! lattice point is exact. Coefficients are keyed by graded-lex multi-index,
//! so iteration order (and serialization) is canonical.

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::multiindex::{multiindex_binomial, LatticeVector, MultiIndex};
use crate::scalar::Rat;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixPoly {
    vars: usize,
    rows: usize,
    cols: usize,
    coeffs: BTreeMap<MultiIndex, RatMatrix>,
}

impl MatrixPoly {
    pub fn zero(vars: usize, rows: usize, cols: usize) -> Self {
        MatrixPoly {
            vars,
            rows,
            cols,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, m: RatMatrix) -> Self {
        let mut p = MatrixPoly::zero(vars, m.rows(), m.cols());
        p.add_term(MultiIndex::zero(vars), m);
        p
    }

    /// A one-variable polynomial from coefficients by ascending power.
    pub fn from_univariate(coeffs: Vec<RatMatrix>) -> Self {
        assert!(!coeffs.is_empty());
        let (rows, cols) = (coeffs[0].rows(), coeffs[0].cols());
        let mut p = MatrixPoly::zero(1, rows, cols);
        for (e, m) in coeffs.into_iter().enumerate() {
            p.add_term(MultiIndex::new(vec![e as u32]), m);
        }
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Adds `m` to the coefficient of s^α. Zero coefficients are not stored.
    pub fn add_term(&mut self, alpha: MultiIndex, m: RatMatrix) {
        assert_eq!(alpha.len(), self.vars, "multi-index arity mismatch");
        assert_eq!(
            (m.rows(), m.cols()),
            (self.rows, self.cols),
            "coefficient shape mismatch"
        );
        match self.coeffs.remove(&alpha) {
            None => {
                if !m.is_zero() {
                    self.coeffs.insert(alpha, m);
                }
            }
            Some(old) => {
                let sum = &old + &m;
                if !sum.is_zero() {
                    self.coeffs.insert(alpha, sum);
                }
            }
        }
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Option<&RatMatrix> {
        self.coeffs.get(alpha)
    }

    pub fn coeff_or_zero(&self, alpha: &MultiIndex) -> RatMatrix {
        self.coeffs
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| RatMatrix::zeros(self.rows, self.cols))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &RatMatrix)> {
        self.coeffs.iter()
    }

    /// Σ_α s^α · coeff(α), exact.
    pub fn evaluate(&self, s: &LatticeVector) -> Result<RatMatrix> {
        if s.len() != self.vars {
            return Err(Error::DimensionMismatch(format!(
                "evaluating a {}-variable polynomial at a point of dimension {}",
                self.vars,
                s.len()
            )));
        }
        let mut out = RatMatrix::zeros(self.rows, self.cols);
        for (alpha, m) in &self.coeffs {
            let p = Rat::from_integer(s.pow(alpha));
            if !p.is_zero() {
                out = &out + &m.scale(&p);
            }
        }
        Ok(out)
    }

    /// Max total degree over the support; −1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs
            .keys()
            .map(|a| a.degree() as i64)
            .max()
            .unwrap_or(-1)
    }

    pub fn add(&self, other: &MatrixPoly) -> MatrixPoly {
        assert_eq!(self.vars, other.vars);
        let mut out = self.clone();
        for (a, m) in &other.coeffs {
            out.add_term(a.clone(), m.clone());
        }
        out
    }

    pub fn sub(&self, other: &MatrixPoly) -> MatrixPoly {
        self.add(&other.scale(&-Rat::from_integer(1.into())))
    }

    pub fn scale(&self, c: &Rat) -> MatrixPoly {
        if c.is_zero() {
            return MatrixPoly::zero(self.vars, self.rows, self.cols);
        }
        MatrixPoly {
            vars: self.vars,
            rows: self.rows,
            cols: self.cols,
            coeffs: self
                .coeffs
                .iter()
                .map(|(a, m)| (a.clone(), m.scale(c)))
                .collect(),
        }
    }

    /// Product of two matrix polynomials (matrix product on coefficients).
    pub fn mul(&self, other: &MatrixPoly) -> MatrixPoly {
        assert_eq!(self.vars, other.vars, "variable count mismatch in ×");
        assert_eq!(self.cols, other.rows, "shape mismatch in ×");
        let mut out = MatrixPoly::zero(self.vars, self.rows, other.cols);
        for (a, m) in &self.coeffs {
            for (b, k) in &other.coeffs {
                out.add_term(a.add(b), m * k);
            }
        }
        out
    }

    /// [P, Q] = PQ − QP.
    pub fn commutator(&self, other: &MatrixPoly) -> MatrixPoly {
        self.mul(other).sub(&other.mul(self))
    }

    /// Substitute s_k ↦ s_k + delta (1-based k), by binomial expansion.
    pub fn shift_var(&self, k: usize, delta: &Rat) -> MatrixPoly {
        assert!(k >= 1 && k <= self.vars);
        let mut out = MatrixPoly::zero(self.vars, self.rows, self.cols);
        for (alpha, m) in &self.coeffs {
            let e = alpha.entry(k);
            for low in 0..=e {
                // s^e ↦ Σ_low binom(e,low) delta^(e−low) s^low
                let binom =
                    multiindex_binomial(&MultiIndex::new(vec![e]), &MultiIndex::new(vec![low]))
                        .expect("0 ≤ low ≤ e");
                let factor = Rat::from_integer(binom) * delta.pow((e - low) as i32);
                if factor.is_zero() {
                    continue;
                }
                let mut entries = alpha.entries().to_vec();
                entries[k - 1] = low;
                out.add_term(MultiIndex::new(entries), m.scale(&factor));
            }
        }
        out
    }

    /// Exact division by the variable s_k: every monomial must contain s_k.
    pub fn div_var_exact(&self, k: usize) -> Result<MatrixPoly> {
        assert!(k >= 1 && k <= self.vars);
        let mut out = MatrixPoly::zero(self.vars, self.rows, self.cols);
        for (alpha, m) in &self.coeffs {
            if alpha.entry(k) == 0 {
                return Err(Error::InvalidInput(format!(
                    "polynomial is not divisible by variable {k}: monomial {alpha} survives"
                )));
            }
            let mut entries = alpha.entries().to_vec();
            entries[k - 1] -= 1;
            out.add_term(MultiIndex::new(entries), m.clone());
        }
        Ok(out)
    }

    /// Reinterpret a one-variable polynomial as an n-variable one in s_k.
    pub fn embed_univariate(&self, n: usize, k: usize) -> MatrixPoly {
        assert_eq!(self.vars, 1);
        assert!(k >= 1 && k <= n);
        let mut out = MatrixPoly::zero(n, self.rows, self.cols);
        for (alpha, m) in &self.coeffs {
            let mut entries = vec![0u32; n];
            entries[k - 1] = alpha.entry(1);
            out.add_term(MultiIndex::new(entries), m.clone());
        }
        out
    }
}

/// Serialized form: shape plus the support ordered graded-lexicographically.
#[derive(Serialize, Deserialize)]
struct MatrixPolyWire {
    vars: usize,
    rows: usize,
    cols: usize,
    terms: Vec<TermWire>,
}

#[derive(Serialize, Deserialize)]
struct TermWire {
    alpha: MultiIndex,
    matrix: RatMatrix,
}

impl Serialize for MatrixPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixPolyWire {
            vars: self.vars,
            rows: self.rows,
            cols: self.cols,
            terms: self
                .coeffs
                .iter()
                .map(|(a, m)| TermWire {
                    alpha: a.clone(),
                    matrix: m.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = MatrixPolyWire::deserialize(d)?;
        let mut p = MatrixPoly::zero(wire.vars, wire.rows, wire.cols);
        for t in wire.terms {
            if t.alpha.len() != wire.vars {
                return Err(serde::de::Error::custom("term arity mismatch"));
            }
            if (t.matrix.rows(), t.matrix.cols()) != (wire.rows, wire.cols) {
                return Err(serde::de::Error::custom("term shape mismatch"));
            }
            p.add_term(t.alpha, t.matrix);
        }
        Ok(p)
    }
}
