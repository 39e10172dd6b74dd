//! Basis symbols and exact brackets for the Lie algebras in play.
//!
//! Five families of basis symbols share one enum: the vector fields d_j(s)
//! on the torus, the positive derivations z^α ∂_j of the polynomial algebra,
//! the elementary matrices E^p_q, and the loop-algebra elements e^s ⊗ g and
//! z^β ⊗ g over a finite-dimensional Lie algebra ġ given by structure
//! constants. Formal linear combinations carry rational coefficients, and
//! every bracket is computed exactly.

use crate::error::{Error, Result};
use crate::multiindex::{LatticeVector, MultiIndex};
use crate::report::CheckReport;
use crate::scalar::{parse_rat, rat_int, Rat};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// One basis element of the ambient algebras.
///
/// Directions `j`, `p`, `q` are 1-based (they name the coordinate); the ġ
/// index `g` is 0-based (it indexes the structure-constant table).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisSymbol {
    /// d_j(s), the Fourier basis of vector fields on the torus.
    Wn { j: usize, s: LatticeVector },
    /// z^α ∂/∂z_j. In the positive algebra α ≠ 0; α = 0 is allowed when
    /// working over the full derivation algebra of polynomials.
    WnPlus { j: usize, alpha: MultiIndex },
    /// Elementary matrix E^p_q.
    Gln { p: usize, q: usize },
    /// e^s ⊗ g, a loop element over ġ.
    Loop { s: LatticeVector, g: usize },
    /// z^β ⊗ g, a polynomial loop element over ġ.
    PolyLoop { beta: MultiIndex, g: usize },
}

impl BasisSymbol {
    pub fn wn(j: usize, s: LatticeVector) -> Self {
        assert!(j >= 1 && j <= s.len(), "direction out of range");
        BasisSymbol::Wn { j, s }
    }

    pub fn wn_plus(j: usize, alpha: MultiIndex) -> Self {
        assert!(j >= 1 && j <= alpha.len(), "direction out of range");
        assert!(!alpha.is_zero(), "the positive algebra has |α| ≥ 1");
        BasisSymbol::WnPlus { j, alpha }
    }

    /// z^α ∂_j with α = 0 permitted (full derivation algebra).
    pub fn der_poly(j: usize, alpha: MultiIndex) -> Self {
        assert!(j >= 1 && j <= alpha.len(), "direction out of range");
        BasisSymbol::WnPlus { j, alpha }
    }

    pub fn gln(p: usize, q: usize) -> Self {
        assert!(p >= 1 && q >= 1);
        BasisSymbol::Gln { p, q }
    }

    pub fn loop_elem(s: LatticeVector, g: usize) -> Self {
        BasisSymbol::Loop { s, g }
    }

    pub fn poly_loop(beta: MultiIndex, g: usize) -> Self {
        BasisSymbol::PolyLoop { beta, g }
    }
}

impl fmt::Display for BasisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisSymbol::Wn { j, s } => write!(f, "d_{j}{s}"),
            BasisSymbol::WnPlus { j, alpha } => write!(f, "z^{alpha}∂_{j}"),
            BasisSymbol::Gln { p, q } => write!(f, "E^{p}_{q}"),
            BasisSymbol::Loop { s, g } => write!(f, "e^{s}⊗g{g}"),
            BasisSymbol::PolyLoop { beta, g } => write!(f, "z^{beta}⊗g{g}"),
        }
    }
}

/// A finitely-supported rational linear combination of basis symbols.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LieElement {
    terms: BTreeMap<BasisSymbol, Rat>,
}

impl LieElement {
    pub fn zero() -> Self {
        LieElement::default()
    }

    pub fn from_symbol(sym: BasisSymbol) -> Self {
        let mut e = LieElement::zero();
        e.add_term(sym, rat_int(1));
        e
    }

    pub fn add_term(&mut self, sym: BasisSymbol, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&sym) {
            None => {
                self.terms.insert(sym, coeff);
            }
            Some(old) => {
                let sum = old + coeff;
                if !sum.is_zero() {
                    self.terms.insert(sym, sum);
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisSymbol, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, sym: &BasisSymbol) -> Rat {
        self.terms.get(sym).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn scale(&self, c: &Rat) -> LieElement {
        if c.is_zero() {
            return LieElement::zero();
        }
        LieElement {
            terms: self.terms.iter().map(|(s, v)| (s.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LieElement) -> LieElement {
        self.add(&other.scale(&rat_int(-1)))
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}·{s}")?;
        }
        Ok(())
    }
}

/// A finite-dimensional Lie algebra presented by structure constants,
/// antisymmetry and the Jacobi identity checked exactly at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLieAlgebra {
    dim: usize,
    // c[(i*dim + j)*dim + k] = coefficient of g_k in [g_i, g_j]
    c: Vec<Rat>,
}

impl FiniteLieAlgebra {
    /// Build from sparse bracket data: entries (i, j, coefficients of [g_i, g_j]).
    /// Omitted pairs default to zero; (j, i) entries are filled by antisymmetry.
    pub fn new(dim: usize, brackets: &[(usize, usize, Vec<Rat>)]) -> Result<Self> {
        let mut c = vec![Rat::zero(); dim * dim * dim];
        for (i, j, coeffs) in brackets {
            if *i >= dim || *j >= dim || coeffs.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "bracket entry ({i},{j}) out of range for dim {dim}"
                )));
            }
            for (k, v) in coeffs.iter().enumerate() {
                let idx = (i * dim + j) * dim + k;
                if !c[idx].is_zero() && c[idx] != *v {
                    return Err(Error::InvalidInput(format!(
                        "conflicting structure constants for ({i},{j})"
                    )));
                }
                c[idx] = v.clone();
                let mirror = (j * dim + i) * dim + k;
                c[mirror] = -v.clone();
            }
        }
        let alg = FiniteLieAlgebra { dim, c };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim;
        for i in 0..d {
            for k in 0..d {
                if !self.c[(i * d + i) * d + k].is_zero() {
                    return Err(Error::InvalidInput(format!("[g{i}, g{i}] ≠ 0")));
                }
            }
        }
        // Jacobi: Σ_m (c_{jk}^m c_{im}^l + c_{ki}^m c_{jm}^l + c_{ij}^m c_{km}^l) = 0
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let mut acc = Rat::zero();
                        for m in 0..d {
                            acc += &self.c[(j * d + k) * d + m] * &self.c[(i * d + m) * d + l];
                            acc += &self.c[(k * d + i) * d + m] * &self.c[(j * d + m) * d + l];
                            acc += &self.c[(i * d + j) * d + m] * &self.c[(k * d + m) * d + l];
                        }
                        if !acc.is_zero() {
                            return Err(Error::InvalidInput(format!(
                                "Jacobi fails on (g{i}, g{j}, g{k})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The abelian algebra C^k.
    pub fn abelian(dim: usize) -> Self {
        FiniteLieAlgebra {
            dim,
            c: vec![Rat::zero(); dim * dim * dim],
        }
    }

    /// sl2 with ordered basis (e, h, f): `[e,f] = h`, `[h,e] = 2e`, `[h,f] = −2f`.
    pub fn sl2() -> Self {
        let two = rat_int(2);
        FiniteLieAlgebra::new(
            3,
            &[
                (0, 2, vec![Rat::zero(), rat_int(1), Rat::zero()]),
                (1, 0, vec![two.clone(), Rat::zero(), Rat::zero()]),
                (1, 2, vec![Rat::zero(), Rat::zero(), -two]),
            ],
        )
        .expect("sl2 structure constants are consistent")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coefficient of g_k in [g_i, g_j].
    pub fn bracket_coeff(&self, i: usize, j: usize, k: usize) -> &Rat {
        &self.c[(i * self.dim + j) * self.dim + k]
    }
}

#[derive(Serialize, Deserialize)]
struct AlgebraWire {
    dim: usize,
    brackets: Vec<BracketWire>,
}

#[derive(Serialize, Deserialize)]
struct BracketWire {
    i: usize,
    j: usize,
    coeffs: Vec<String>,
}

impl Serialize for FiniteLieAlgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut brackets = Vec::new();
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let coeffs: Vec<&Rat> =
                    (0..self.dim).map(|k| self.bracket_coeff(i, j, k)).collect();
                if coeffs.iter().any(|c| !c.is_zero()) {
                    brackets.push(BracketWire {
                        i,
                        j,
                        coeffs: coeffs.iter().map(|c| c.to_string()).collect(),
                    });
                }
            }
        }
        AlgebraWire {
            dim: self.dim,
            brackets,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteLieAlgebra {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = AlgebraWire::deserialize(d)?;
        let mut brackets = Vec::new();
        for b in &wire.brackets {
            let coeffs: Vec<Rat> = b
                .coeffs
                .iter()
                .map(|s| parse_rat(s).map_err(serde::de::Error::custom))
                .collect::<std::result::Result<_, _>>()?;
            brackets.push((b.i, b.j, coeffs));
        }
        FiniteLieAlgebra::new(wire.dim, &brackets).map_err(serde::de::Error::custom)
    }
}

/// Which bracket to use, and over which ġ for the loop parts.
#[derive(Debug, Clone, Copy)]
pub enum BracketContext<'a> {
    /// Vector fields on the torus, Fourier basis.
    Wn,
    /// Derivations z^α ∂_j of the polynomial algebra.
    WnPlus,
    /// Elementary matrices.
    Gln,
    /// W_n ⊕ (functions ⊗ ġ), the semidirect product.
    Semidirect(&'a FiniteLieAlgebra),
    /// W_n⁺ ⊕ (polynomials ⊗ ġ).
    GPlus(&'a FiniteLieAlgebra),
}

/// `[d_j(s), d_k(m)] = m_j d_k(s+m) − s_k d_j(s+m)`, emitted term by term.
///
/// Shared by the general bracket and the exhaustive Jacobi scan, so the scan
/// exercises the same kernel the public bracket uses.
#[inline]
fn wn_basis_bracket(
    j: usize,
    s: &LatticeVector,
    k: usize,
    m: &LatticeVector,
    mut emit: impl FnMut(usize, i64),
) {
    let mj = m.entry(j);
    if mj != 0 {
        emit(k, mj);
    }
    let sk = s.entry(k);
    if sk != 0 {
        emit(j, -sk);
    }
}

fn pair_bracket(ctx: &BracketContext, a: &BasisSymbol, b: &BasisSymbol) -> Result<LieElement> {
    use BasisSymbol::*;
    let mut out = LieElement::zero();
    match (ctx, a, b) {
        (BracketContext::Wn | BracketContext::Semidirect(_), Wn { j, s }, Wn { j: k, s: m }) => {
            if s.len() != m.len() {
                return Err(Error::DimensionMismatch("bracket of mixed ranks".into()));
            }
            let degree = s.add(m);
            wn_basis_bracket(*j, s, *k, m, |dir, c| {
                out.add_term(BasisSymbol::wn(dir, degree.clone()), rat_int(c));
            });
        }
        (
            BracketContext::WnPlus | BracketContext::GPlus(_),
            WnPlus { j, alpha },
            WnPlus { j: k, alpha: beta },
        ) => {
            if alpha.len() != beta.len() {
                return Err(Error::DimensionMismatch("bracket of mixed ranks".into()));
            }
            // [z^α ∂_j, z^β ∂_k] = β_j z^{α+β−ε_j} ∂_k − α_k z^{α+β−ε_k} ∂_j
            let n = alpha.len();
            let sum = alpha.add(beta);
            let bj = beta.entry(*j);
            if bj != 0 {
                let gamma = sum
                    .checked_sub(&MultiIndex::unit(n, *j))
                    .expect("β_j ≥ 1 keeps the exponent non-negative");
                out.add_term(BasisSymbol::der_poly(*k, gamma), rat_int(bj as i64));
            }
            let ak = alpha.entry(*k);
            if ak != 0 {
                let gamma = sum
                    .checked_sub(&MultiIndex::unit(n, *k))
                    .expect("α_k ≥ 1 keeps the exponent non-negative");
                out.add_term(BasisSymbol::der_poly(*j, gamma), rat_int(-(ak as i64)));
            }
        }
        (BracketContext::Gln, Gln { p, q }, Gln { p: r, q: t }) => {
            // [E^p_q, E^r_t] = δ_qr E^p_t − δ_tp E^r_q
            if q == r {
                out.add_term(BasisSymbol::gln(*p, *t), rat_int(1));
            }
            if t == p {
                out.add_term(BasisSymbol::gln(*r, *q), rat_int(-1));
            }
        }
        (BracketContext::Semidirect(_), Wn { j, s }, Loop { s: m, g }) => {
            // [d_j(s), e^m ⊗ g] = m_j e^{s+m} ⊗ g
            let mj = m.entry(*j);
            if mj != 0 {
                out.add_term(BasisSymbol::loop_elem(s.add(m), *g), rat_int(mj));
            }
        }
        (BracketContext::Semidirect(_), Loop { .. }, Wn { .. }) => {
            let flipped = pair_bracket(ctx, b, a)?;
            out = flipped.scale(&rat_int(-1));
        }
        (BracketContext::Semidirect(alg), Loop { s, g }, Loop { s: m, g: h }) => {
            // [e^s ⊗ g, e^m ⊗ h] = e^{s+m} ⊗ [g, h]_ġ
            let degree = s.add(m);
            for k in 0..alg.dim() {
                let c = alg.bracket_coeff(*g, *h, k);
                if !c.is_zero() {
                    out.add_term(BasisSymbol::loop_elem(degree.clone(), k), c.clone());
                }
            }
        }
        (BracketContext::GPlus(_), WnPlus { j, alpha }, PolyLoop { beta, g }) => {
            // [z^α ∂_j, z^β ⊗ g] = β_j z^{α+β−ε_j} ⊗ g
            let bj = beta.entry(*j);
            if bj != 0 {
                let gamma = alpha
                    .add(beta)
                    .checked_sub(&MultiIndex::unit(alpha.len(), *j))
                    .expect("β_j ≥ 1 keeps the exponent non-negative");
                out.add_term(BasisSymbol::poly_loop(gamma, *g), rat_int(bj as i64));
            }
        }
        (BracketContext::GPlus(_), PolyLoop { .. }, WnPlus { .. }) => {
            let flipped = pair_bracket(ctx, b, a)?;
            out = flipped.scale(&rat_int(-1));
        }
        (BracketContext::GPlus(alg), PolyLoop { beta, g }, PolyLoop { beta: gamma, g: h }) => {
            let degree = beta.add(gamma);
            for k in 0..alg.dim() {
                let c = alg.bracket_coeff(*g, *h, k);
                if !c.is_zero() {
                    out.add_term(BasisSymbol::poly_loop(degree.clone(), k), c.clone());
                }
            }
        }
        _ => {
            return Err(Error::MixedSymbols(format!(
                "cannot bracket {a} with {b} in this algebra"
            )))
        }
    }
    Ok(out)
}

/// Bilinear bracket of two formal elements in the given algebra.
pub fn bracket(ctx: &BracketContext, a: &LieElement, b: &LieElement) -> Result<LieElement> {
    let mut out = LieElement::zero();
    for (xa, ca) in a.terms() {
        for (xb, cb) in b.terms() {
            let pb = pair_bracket(ctx, xa, xb)?;
            let factor = ca * cb;
            for (sym, c) in pb.terms() {
                out.add_term(sym.clone(), c * &factor);
            }
        }
    }
    Ok(out)
}

/// Bracket in W_n.
pub fn bracket_wn(a: &LieElement, b: &LieElement) -> Result<LieElement> {
    bracket(&BracketContext::Wn, a, b)
}

/// Bracket in the positive derivation algebra (and the full `Der C[z]`).
pub fn bracket_wnplus(a: &LieElement, b: &LieElement) -> Result<LieElement> {
    bracket(&BracketContext::WnPlus, a, b)
}

/// Bracket of elementary matrices.
pub fn bracket_gln(a: &LieElement, b: &LieElement) -> Result<LieElement> {
    bracket(&BracketContext::Gln, a, b)
}

/// Bracket in W_n ⊕ (functions ⊗ ġ).
pub fn bracket_semidirect(
    gdot: &FiniteLieAlgebra,
    a: &LieElement,
    b: &LieElement,
) -> Result<LieElement> {
    bracket(&BracketContext::Semidirect(gdot), a, b)
}

/// Checks `[x,[y,z]] + [y,[z,x]] + [z,[x,y]] = 0` for every distinct triple of
/// the given symbols. Pure W_n symbol sets take an integer fast path; the
/// result is the same exact check either way.
pub fn jacobi_check(ctx: &BracketContext, symbols: &[BasisSymbol]) -> Result<CheckReport> {
    let all_wn = symbols.iter().all(|s| matches!(s, BasisSymbol::Wn { .. }));
    if all_wn && matches!(ctx, BracketContext::Wn) {
        return Ok(jacobi_scan_wn(symbols));
    }
    let mut report = CheckReport::new("jacobi");
    let elems: Vec<LieElement> = symbols
        .iter()
        .map(|s| LieElement::from_symbol(s.clone()))
        .collect();
    for i in 0..elems.len() {
        for j in (i + 1)..elems.len() {
            let ij = bracket(ctx, &elems[i], &elems[j])?;
            for k in (j + 1)..elems.len() {
                let jk = bracket(ctx, &elems[j], &elems[k])?;
                let ik = bracket(ctx, &elems[i], &elems[k])?;
                let mut acc = bracket(ctx, &elems[i], &jk)?;
                acc = acc.sub(&bracket(ctx, &elems[j], &ik)?);
                acc = acc.add(&bracket(ctx, &elems[k], &ij)?);
                report.tick();
                if !acc.is_zero() {
                    report.record(
                        format!("({}, {}, {})", symbols[i], symbols[j], symbols[k]),
                        format!("jacobiator = {acc}"),
                    );
                }
            }
        }
    }
    Ok(report)
}

/// Integer-arithmetic Jacobi scan over W_n basis symbols. Every symbol in a
/// double bracket of d_·(s), d_·(m), d_·(r) has Fourier degree s+m+r, so the
/// accumulator is one integer per direction.
fn jacobi_scan_wn(symbols: &[BasisSymbol]) -> CheckReport {
    let mut report = CheckReport::new("jacobi");
    let syms: Vec<(usize, &LatticeVector)> = symbols
        .iter()
        .map(|s| match s {
            BasisSymbol::Wn { j, s } => (*j, s),
            _ => unreachable!("caller checked"),
        })
        .collect();
    let Some((_, first)) = syms.first() else {
        return report;
    };
    let n = first.len();
    // pair table: inner bracket terms and their common degree, i < j
    let count = syms.len();
    let mut pair: Vec<(LatticeVector, Vec<(usize, i64)>)> = Vec::with_capacity(count * count / 2);
    let idx = |i: usize, j: usize| i * count - i * (i + 1) / 2 + (j - i - 1);
    for i in 0..count {
        for j in (i + 1)..count {
            let (ji, si) = syms[i];
            let (jj, sj) = syms[j];
            let degree = si.add(sj);
            let mut terms = Vec::with_capacity(2);
            wn_basis_bracket(ji, si, jj, sj, |dir, c| terms.push((dir, c)));
            pair.push((degree, terms));
        }
    }
    let mut acc = vec![0i128; n];
    for i in 0..count {
        for j in (i + 1)..count {
            let p_ij = &pair[idx(i, j)];
            for k in (j + 1)..count {
                let p_jk = &pair[idx(j, k)];
                let p_ik = &pair[idx(i, k)];
                acc.iter_mut().for_each(|a| *a = 0);
                // [x_i, [x_j, x_k]]
                outer_into(&syms[i], p_jk, 1, &mut acc);
                // [x_j, [x_k, x_i]] = −[x_j, [x_i, x_k]]
                outer_into(&syms[j], p_ik, -1, &mut acc);
                // [x_k, [x_i, x_j]]
                outer_into(&syms[k], p_ij, 1, &mut acc);
                report.tick();
                if acc.iter().any(|&a| a != 0) {
                    report.record(
                        format!("({}, {}, {})", symbols[i], symbols[j], symbols[k]),
                        "jacobiator ≠ 0",
                    );
                }
            }
        }
    }
    report
}

#[inline]
fn outer_into(
    x: &(usize, &LatticeVector),
    inner: &(LatticeVector, Vec<(usize, i64)>),
    sign: i128,
    acc: &mut [i128],
) {
    let (p, s) = *x;
    let (u, terms) = inner;
    for &(a, c) in terms {
        // [d_p(s), d_a(u)] = u_p d_a(s+u) − s_a d_p(s+u)
        let up = u.entry(p);
        if up != 0 {
            acc[a - 1] += sign * c as i128 * up as i128;
        }
        let sa = s.entry(a);
        if sa != 0 {
            acc[p - 1] -= sign * c as i128 * sa as i128;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::lattice_window;

    fn d(s: i64) -> LieElement {
        LieElement::from_symbol(BasisSymbol::wn(1, LatticeVector::new(vec![s])))
    }

    #[test]
    fn witt_bracket_rank_one() {
        // [d(1), d(2)] = (2−1)·d(3)
        let b = bracket_wn(&d(1), &d(2)).unwrap();
        assert_eq!(b, d(3));
        // antisymmetry on the nose
        assert!(bracket_wn(&d(2), &d(2)).unwrap().is_zero());
    }

    #[test]
    fn witt_bracket_rank_two() {
        // [d_1((0,1)), d_2((1,0))] = d_2((1,1)) − d_1((1,1))
        let a = LieElement::from_symbol(BasisSymbol::wn(1, LatticeVector::new(vec![0, 1])));
        let b = LieElement::from_symbol(BasisSymbol::wn(2, LatticeVector::new(vec![1, 0])));
        let got = bracket_wn(&a, &b).unwrap();
        let mut expect = LieElement::zero();
        expect.add_term(
            BasisSymbol::wn(2, LatticeVector::new(vec![1, 1])),
            rat_int(1),
        );
        expect.add_term(
            BasisSymbol::wn(1, LatticeVector::new(vec![1, 1])),
            rat_int(-1),
        );
        assert_eq!(got, expect);
    }

    #[test]
    fn cartan_span_is_abelian() {
        for n in 1..=3 {
            for j in 1..=n {
                for k in 1..=n {
                    let a = LieElement::from_symbol(BasisSymbol::wn(j, LatticeVector::zero(n)));
                    let b = LieElement::from_symbol(BasisSymbol::wn(k, LatticeVector::zero(n)));
                    assert!(bracket_wn(&a, &b).unwrap().is_zero());
                }
            }
        }
    }

    fn zd(j: usize, alpha: Vec<u32>) -> LieElement {
        LieElement::from_symbol(BasisSymbol::wn_plus(j, MultiIndex::new(alpha)))
    }

    #[test]
    fn wnplus_bracket_examples() {
        // [z∂, z²∂] = (2−1)·z²∂
        assert_eq!(
            bracket_wnplus(&zd(1, vec![1]), &zd(1, vec![2])).unwrap(),
            zd(1, vec![2])
        );
        // [z1∂1, z2∂2] = 0
        assert!(bracket_wnplus(&zd(1, vec![1, 0]), &zd(2, vec![0, 1]))
            .unwrap()
            .is_zero());
        // antisymmetry
        let x = zd(2, vec![1, 2]);
        assert!(bracket_wnplus(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn wnplus_never_outputs_negative_exponents() {
        // exhaustive over a small window: every output exponent stays in Z_+ⁿ
        let n = 2;
        let mut syms = Vec::new();
        for alpha in crate::multiindex::enumerate_multiindices(n, 3) {
            if alpha.is_zero() {
                continue;
            }
            for j in 1..=n {
                syms.push(BasisSymbol::wn_plus(j, alpha.clone()));
            }
        }
        for a in &syms {
            for b in &syms {
                let r = bracket_wnplus(
                    &LieElement::from_symbol(a.clone()),
                    &LieElement::from_symbol(b.clone()),
                )
                .unwrap();
                for (sym, _) in r.terms() {
                    match sym {
                        BasisSymbol::WnPlus { alpha, .. } => assert!(!alpha.is_zero()),
                        _ => panic!("foreign symbol from a W_n⁺ bracket"),
                    }
                }
            }
        }
    }

    #[test]
    fn gln_bracket_examples() {
        let e = |p, q| LieElement::from_symbol(BasisSymbol::gln(p, q));
        // [E¹₂, E²₁] = E¹₁ − E²₂
        let got = bracket_gln(&e(1, 2), &e(2, 1)).unwrap();
        let expect = e(1, 1).sub(&e(2, 2));
        assert_eq!(got, expect);
        // [E¹₁, E¹₁] = 0
        assert!(bracket_gln(&e(1, 1), &e(1, 1)).unwrap().is_zero());
        // [E¹₂, E²₃] = E¹₃
        assert_eq!(bracket_gln(&e(1, 2), &e(2, 3)).unwrap(), e(1, 3));
    }

    #[test]
    fn semidirect_examples() {
        let sl2 = FiniteLieAlgebra::sl2();
        // [d(1), e^{2}⊗g] = 2 e^{3}⊗g
        let a = d(1);
        let b = LieElement::from_symbol(BasisSymbol::loop_elem(LatticeVector::new(vec![2]), 0));
        let got = bracket_semidirect(&sl2, &a, &b).unwrap();
        let mut expect = LieElement::zero();
        expect.add_term(
            BasisSymbol::loop_elem(LatticeVector::new(vec![3]), 0),
            rat_int(2),
        );
        assert_eq!(got, expect);
        // abelian ġ: loops commute
        let ab = FiniteLieAlgebra::abelian(1);
        let x = LieElement::from_symbol(BasisSymbol::loop_elem(LatticeVector::new(vec![1]), 0));
        let y = LieElement::from_symbol(BasisSymbol::loop_elem(LatticeVector::new(vec![2]), 0));
        assert!(bracket_semidirect(&ab, &x, &y).unwrap().is_zero());
        // sl2: [e^{1}⊗e, e^{1}⊗f] = e^{2}⊗h
        let xe = LieElement::from_symbol(BasisSymbol::loop_elem(LatticeVector::new(vec![1]), 0));
        let xf = LieElement::from_symbol(BasisSymbol::loop_elem(LatticeVector::new(vec![1]), 2));
        let got = bracket_semidirect(&sl2, &xe, &xf).unwrap();
        let mut expect = LieElement::zero();
        expect.add_term(
            BasisSymbol::loop_elem(LatticeVector::new(vec![2]), 1),
            rat_int(1),
        );
        assert_eq!(got, expect);
    }

    #[test]
    fn mixed_symbols_are_domain_errors() {
        let a = d(1);
        let b = LieElement::from_symbol(BasisSymbol::gln(1, 1));
        assert!(bracket_wn(&a, &b).is_err());
    }

    #[test]
    fn jacobi_scan_matches_generic_on_small_windows() {
        // the semidirect context over a dummy abelian ġ forces the generic
        // path on the same symbols, so the integer scan can be cross-checked
        let ab = FiniteLieAlgebra::abelian(1);
        for n in 1..=2usize {
            let symbols: Vec<BasisSymbol> = (1..=n)
                .flat_map(|j| {
                    lattice_window(n, 2 - n as i64 + 1)
                        .into_iter()
                        .map(move |s| BasisSymbol::wn(j, s))
                })
                .collect();
            let fast = jacobi_check(&BracketContext::Wn, &symbols).unwrap();
            let generic = jacobi_check(&BracketContext::Semidirect(&ab), &symbols).unwrap();
            assert!(fast.passed() && generic.passed());
            assert_eq!(fast.checked, generic.checked, "rank {n}");
        }
    }

    #[test]
    fn polynomial_loop_brackets() {
        let sl2 = FiniteLieAlgebra::sl2();
        let ctx = BracketContext::GPlus(&sl2);
        // [z^α ∂_j, z^β ⊗ g] = β_j z^{α+β−ε_j} ⊗ g
        let x = LieElement::from_symbol(BasisSymbol::wn_plus(1, MultiIndex::new(vec![2])));
        let y = LieElement::from_symbol(BasisSymbol::poly_loop(MultiIndex::new(vec![1]), 0));
        let got = bracket(&ctx, &x, &y).unwrap();
        let mut expect = LieElement::zero();
        expect.add_term(
            BasisSymbol::poly_loop(MultiIndex::new(vec![2]), 0),
            rat_int(1),
        );
        assert_eq!(got, expect);
        // β_j = 0 kills the bracket entirely
        let x2 = LieElement::from_symbol(BasisSymbol::wn_plus(2, MultiIndex::new(vec![1, 0])));
        let y2 = LieElement::from_symbol(BasisSymbol::poly_loop(MultiIndex::new(vec![1, 0]), 1));
        assert!(bracket(&BracketContext::GPlus(&sl2), &x2, &y2)
            .unwrap()
            .is_zero());
        // [z^α ⊗ e, z^β ⊗ f] = z^{α+β} ⊗ h
        let le = LieElement::from_symbol(BasisSymbol::poly_loop(MultiIndex::new(vec![1]), 0));
        let lf = LieElement::from_symbol(BasisSymbol::poly_loop(MultiIndex::new(vec![2]), 2));
        let got = bracket(&ctx, &le, &lf).unwrap();
        let mut expect = LieElement::zero();
        expect.add_term(
            BasisSymbol::poly_loop(MultiIndex::new(vec![3]), 1),
            rat_int(1),
        );
        assert_eq!(got, expect);
        // Jacobi over a small mixed window of the extended algebra
        let mut symbols = Vec::new();
        for alpha in crate::multiindex::enumerate_multiindices(1, 2) {
            if !alpha.is_zero() {
                symbols.push(BasisSymbol::wn_plus(1, alpha.clone()));
            }
            for g in 0..3 {
                symbols.push(BasisSymbol::poly_loop(alpha.clone(), g));
            }
        }
        let report = jacobi_check(&ctx, &symbols).unwrap();
        assert!(report.passed());
        assert!(report.checked > 100);
    }

    #[test]
    fn sl2_loaded_from_json_roundtrip() {
        let sl2 = FiniteLieAlgebra::sl2();
        let js = serde_json::to_string(&sl2).unwrap();
        let back: FiniteLieAlgebra = serde_json::from_str(&js).unwrap();
        assert_eq!(back, sl2);
        // a broken Jacobi table is rejected: the cyclic sum over (g0,g1,g2)
        // of [g0,g1]=g1, [g1,g2]=g2, [g2,g0]=g0 is −(g0+g1+g2) ≠ 0
        let bad = r#"{"dim":3,"brackets":[
            {"i":0,"j":1,"coeffs":["0","1","0"]},
            {"i":1,"j":2,"coeffs":["0","0","1"]},
            {"i":2,"j":0,"coeffs":["1","0","0"]}]}"#;
        assert!(serde_json::from_str::<FiniteLieAlgebra>(bad).is_err());
    }

    #[test]
    fn antisymmetry_on_window_pairs() {
        let sl2 = FiniteLieAlgebra::sl2();
        let ctx = BracketContext::Semidirect(&sl2);
        let mut syms = Vec::new();
        for s in lattice_window(1, 2) {
            syms.push(BasisSymbol::wn(1, s.clone()));
            for g in 0..3 {
                syms.push(BasisSymbol::loop_elem(s.clone(), g));
            }
        }
        for a in &syms {
            for b in &syms {
                let xa = LieElement::from_symbol(a.clone());
                let xb = LieElement::from_symbol(b.clone());
                let ab = bracket(&ctx, &xa, &xb).unwrap();
                let ba = bracket(&ctx, &xb, &xa).unwrap();
                assert!(ab.add(&ba).is_zero(), "[{a},{b}] + [{b},{a}] ≠ 0");
            }
        }
    }
}
