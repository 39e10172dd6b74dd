//! Multi-indices (exponent vectors) and lattice vectors (Fourier degrees).

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// An exponent vector in Z_+^n.
///
/// Ordered graded-lexicographically: first by total degree, then within a
/// degree so that larger leading exponents come first. This is the one basis
/// order used everywhere, so serialized matrices are reproducible.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The standard basis vector ε_j, 1-based.
    pub fn unit(n: usize, j: usize) -> Self {
        assert!(j >= 1 && j <= n, "unit index out of range");
        let mut e = vec![0; n];
        e[j - 1] = 1;
        MultiIndex(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// Entry with 1-based index.
    pub fn entry(&self, j: usize) -> u32 {
        self.0[j - 1]
    }

    /// Total degree |α|.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise partial order: self ≥ other iff self − other ∈ Z_+^n.
    pub fn dominates(&self, other: &MultiIndex) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        assert_eq!(self.0.len(), other.0.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// self − other, or `None` if the result would leave Z_+^n.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if !self.dominates(other) {
            return None;
        }
        Some(MultiIndex(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    /// α! = α_1! ⋯ α_n!
    pub fn factorial(&self) -> BigInt {
        let mut f = BigInt::one();
        for &e in &self.0 {
            for k in 2..=e {
                f *= k;
            }
        }
        f
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// binom(α, β) = Π binom(α_i, β_i). Errors unless β ≤ α componentwise.
pub fn multiindex_binomial(alpha: &MultiIndex, beta: &MultiIndex) -> Result<BigInt> {
    if !alpha.dominates(beta) {
        return Err(Error::BinomialDomain(format!("binom({alpha}, {beta})")));
    }
    let mut b = BigInt::one();
    for (&a, &c) in alpha.entries().iter().zip(beta.entries()) {
        b *= scalar_binomial(a, c);
    }
    Ok(b)
}

fn scalar_binomial(n: u32, k: u32) -> BigInt {
    let k = k.min(n - k);
    let mut b = BigInt::one();
    for i in 0..k {
        b = b * (n - i) / (i + 1);
    }
    b
}

/// All α ∈ Z_+^n with |α| ≤ max_degree, in graded-lexicographic order.
/// The count is binom(n + max_degree, n).
pub fn enumerate_multiindices(n: usize, max_degree: u32) -> Vec<MultiIndex> {
    assert!(n >= 1, "dimension must be positive");
    let mut out = Vec::new();
    for d in 0..=max_degree {
        emit_degree(n, d, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// All α with |α| = d, lexicographically with the leading entry largest first.
pub fn multiindices_of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    emit_degree(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

fn emit_degree(n: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if prefix.len() == n - 1 {
        prefix.push(remaining);
        out.push(MultiIndex(prefix.clone()));
        prefix.pop();
        return;
    }
    for e in (0..=remaining).rev() {
        prefix.push(e);
        emit_degree(n, remaining - e, prefix, out);
        prefix.pop();
    }
}

/// A Fourier degree in Z^n.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(Vec<i64>);

impl LatticeVector {
    pub fn new(entries: Vec<i64>) -> Self {
        LatticeVector(entries)
    }

    pub fn zero(n: usize) -> Self {
        LatticeVector(vec![0; n])
    }

    /// ε_j, 1-based.
    pub fn unit(n: usize, j: usize) -> Self {
        assert!(j >= 1 && j <= n);
        let mut e = vec![0; n];
        e[j - 1] = 1;
        LatticeVector(e)
    }

    pub fn scaled_unit(n: usize, j: usize, value: i64) -> Self {
        let mut e = vec![0; n];
        e[j - 1] = value;
        LatticeVector(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    /// Entry with 1-based index.
    pub fn entry(&self, j: usize) -> i64 {
        self.0[j - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        assert_eq!(self.0.len(), other.0.len());
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatticeVector) -> LatticeVector {
        assert_eq!(self.0.len(), other.0.len());
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn linf(&self) -> i64 {
        self.0.iter().map(|a| a.abs()).max().unwrap_or(0)
    }

    /// s^α = Π s_i^{α_i} as an exact integer.
    pub fn pow(&self, alpha: &MultiIndex) -> BigInt {
        assert_eq!(self.0.len(), alpha.len());
        let mut p = BigInt::one();
        for (&s, &e) in self.0.iter().zip(alpha.entries()) {
            if e > 0 {
                p *= BigInt::from(s).pow(e);
            }
        }
        p
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// All s ∈ Z^n with |s|_∞ ≤ radius, in lexicographic order.
pub fn lattice_window(n: usize, radius: i64) -> Vec<LatticeVector> {
    assert!(radius >= 0);
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fill_window(n, radius, &mut cur, &mut out);
    out
}

fn fill_window(n: usize, radius: i64, cur: &mut Vec<i64>, out: &mut Vec<LatticeVector>) {
    if cur.len() == n {
        out.push(LatticeVector(cur.clone()));
        return;
    }
    for v in -radius..=radius {
        cur.push(v);
        fill_window(n, radius, cur, out);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn binomial_examples() {
        // binom((2,1),(1,1)) = 2·1 = 2
        let a = MultiIndex::new(vec![2, 1]);
        let b = MultiIndex::new(vec![1, 1]);
        assert_eq!(multiindex_binomial(&a, &b).unwrap(), BigInt::from(2));
        // choose-zero case
        let a = MultiIndex::new(vec![3]);
        assert_eq!(
            multiindex_binomial(&a, &MultiIndex::zero(1)).unwrap(),
            BigInt::from(1)
        );
        // scalar binomial table: binom(4,2) = 6
        assert_eq!(
            multiindex_binomial(&MultiIndex::new(vec![4]), &MultiIndex::new(vec![2])).unwrap(),
            BigInt::from(6)
        );
        // β ≰ α is a domain error
        assert!(
            multiindex_binomial(&MultiIndex::new(vec![1, 2]), &MultiIndex::new(vec![2, 0]))
                .is_err()
        );
    }

    #[test]
    fn enumeration_order_and_count() {
        let e = enumerate_multiindices(1, 2);
        assert_eq!(
            e,
            vec![
                MultiIndex::new(vec![0]),
                MultiIndex::new(vec![1]),
                MultiIndex::new(vec![2])
            ]
        );
        let e = enumerate_multiindices(2, 1);
        assert_eq!(
            e,
            vec![
                MultiIndex::new(vec![0, 0]),
                MultiIndex::new(vec![1, 0]),
                MultiIndex::new(vec![0, 1])
            ]
        );
        assert_eq!(enumerate_multiindices(3, 0), vec![MultiIndex::zero(3)]);
    }

    #[test]
    fn enumeration_matches_binomial_count() {
        for n in 1..=4usize {
            for max_degree in 0..=5u32 {
                let count = enumerate_multiindices(n, max_degree).len();
                let expect = multiindex_binomial(
                    &MultiIndex::new(vec![n as u32 + max_degree]),
                    &MultiIndex::new(vec![n as u32]),
                )
                .unwrap();
                assert_eq!(BigInt::from(count), expect, "n={n} N={max_degree}");
            }
        }
    }

    #[test]
    fn graded_lex_matches_enumeration() {
        let e = enumerate_multiindices(3, 4);
        for w in e.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn factorials_and_powers() {
        assert_eq!(
            MultiIndex::new(vec![3, 2]).factorial(),
            BigInt::from(12) // 3!·2!
        );
        let s = LatticeVector::new(vec![-2, 3]);
        assert_eq!(
            s.pow(&MultiIndex::new(vec![2, 1])),
            BigInt::from(12) // (−2)²·3
        );
        assert_eq!(s.pow(&MultiIndex::zero(2)), BigInt::from(1));
    }

    #[test]
    fn pascal_recurrence() {
        // binom(α,β) = binom(α−ε1,β) + binom(α−ε1,β−ε1) whenever defined
        for a1 in 1..6u32 {
            for a2 in 0..5u32 {
                for b1 in 1..=a1 {
                    for b2 in 0..=a2 {
                        let alpha = MultiIndex::new(vec![a1, a2]);
                        let beta = MultiIndex::new(vec![b1, b2]);
                        let e1 = MultiIndex::unit(2, 1);
                        let lhs = multiindex_binomial(&alpha, &beta).unwrap();
                        let alpha1 = alpha.checked_sub(&e1).unwrap();
                        let t1 = if alpha1.dominates(&beta) {
                            multiindex_binomial(&alpha1, &beta).unwrap()
                        } else {
                            BigInt::from(0)
                        };
                        let beta1 = beta.checked_sub(&e1).unwrap();
                        let t2 = multiindex_binomial(&alpha1, &beta1).unwrap();
                        assert_eq!(lhs, t1 + t2);
                    }
                }
            }
        }
    }

    #[test]
    fn window_enumeration() {
        assert_eq!(lattice_window(1, 2).len(), 5);
        assert_eq!(lattice_window(2, 1).len(), 9);
        assert!(lattice_window(3, 2).iter().all(|s| s.linf() <= 2));
        assert_eq!(lattice_window(3, 2).len(), 125);
    }
}
