//! Finite-dimensional representations: gl_n tensor fibers, inflation to the
//! positive derivation algebra, truncated tensor modules, representation
//! checking, the grading by the Euler operator, the eigenvalue-count bound,
//! and a commutant-based indecomposability probe.

use crate::error::{Error, Result};
use crate::lie::{bracket, BasisSymbol, BracketContext, FiniteLieAlgebra, LieElement};
use crate::matrix::{matrix_kernel, RatMatrix};
use crate::multiindex::{enumerate_multiindices, MultiIndex};
use crate::report::CheckReport;
use crate::scalar::{rat_int, Rat};
use crate::unipoly::{char_poly, min_poly, rational_roots, spectral_idempotent};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraTag {
    Gln,
    WnPlus,
    GPlus,
}

/// A finite-dimensional representation given by its generator matrices.
/// Symbols outside the support act as zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteRep {
    algebra: AlgebraTag,
    n: usize,
    dim: usize,
    matrices: BTreeMap<BasisSymbol, RatMatrix>,
}

impl FiniteRep {
    pub fn new(algebra: AlgebraTag, n: usize, dim: usize) -> Self {
        FiniteRep {
            algebra,
            n,
            dim,
            matrices: BTreeMap::new(),
        }
    }

    /// The one-dimensional gl_n representation on which everything acts as 0.
    pub fn trivial_gln(n: usize) -> Self {
        FiniteRep::new(AlgebraTag::Gln, n, 1)
    }

    pub fn algebra(&self) -> AlgebraTag {
        self.algebra
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn symbol_fits(&self, sym: &BasisSymbol) -> bool {
        match (self.algebra, sym) {
            (AlgebraTag::Gln, BasisSymbol::Gln { p, q }) => {
                (1..=self.n).contains(p) && (1..=self.n).contains(q)
            }
            (AlgebraTag::WnPlus | AlgebraTag::GPlus, BasisSymbol::WnPlus { j, alpha }) => {
                (1..=self.n).contains(j) && alpha.len() == self.n && !alpha.is_zero()
            }
            _ => false,
        }
    }

    /// Declare ρ(sym) = m. Zero matrices are dropped from the support.
    pub fn set_generator(&mut self, sym: BasisSymbol, m: RatMatrix) -> Result<()> {
        if !self.symbol_fits(&sym) {
            return Err(Error::InvalidInput(format!(
                "symbol {sym} does not belong to this algebra"
            )));
        }
        if (m.rows(), m.cols()) != (self.dim, self.dim) {
            return Err(Error::ShapeMismatch(format!(
                "generator {sym} has shape {}×{}, expected {}×{}",
                m.rows(),
                m.cols(),
                self.dim,
                self.dim
            )));
        }
        if m.is_zero() {
            self.matrices.remove(&sym);
        } else {
            self.matrices.insert(sym, m);
        }
        Ok(())
    }

    pub fn support(&self) -> impl Iterator<Item = (&BasisSymbol, &RatMatrix)> {
        self.matrices.iter()
    }

    pub fn support_len(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrix_ref(&self, sym: &BasisSymbol) -> Option<&RatMatrix> {
        self.matrices.get(sym)
    }

    pub fn matrix_of(&self, sym: &BasisSymbol) -> RatMatrix {
        self.matrices
            .get(sym)
            .cloned()
            .unwrap_or_else(|| RatMatrix::zeros(self.dim, self.dim))
    }

    /// Linear extension of ρ to formal elements.
    pub fn apply(&self, x: &LieElement) -> RatMatrix {
        let mut out = RatMatrix::zeros(self.dim, self.dim);
        for (sym, c) in x.terms() {
            if let Some(m) = self.matrices.get(sym) {
                out = &out + &m.scale(c);
            }
        }
        out
    }

    fn bracket_context(&self) -> Result<BracketContext<'static>> {
        match self.algebra {
            AlgebraTag::Gln => Ok(BracketContext::Gln),
            AlgebraTag::WnPlus => Ok(BracketContext::WnPlus),
            AlgebraTag::GPlus => Err(Error::InvalidInput(
                "checking a g⁺ representation needs the loop part; use GPlusRep".into(),
            )),
        }
    }

    /// Verifies `ρ([x,y]) = ρ(x)ρ(y) − ρ(y)ρ(x)` for the given symbol pairs.
    pub fn rep_check_pairs(&self, pairs: &[(BasisSymbol, BasisSymbol)]) -> Result<CheckReport> {
        let ctx = self.bracket_context()?;
        let mut report = CheckReport::new("rep");
        for (x, y) in pairs {
            let ex = LieElement::from_symbol(x.clone());
            let ey = LieElement::from_symbol(y.clone());
            let lie = bracket(&ctx, &ex, &ey)?;
            let lhs = self.apply(&lie);
            let rhs = self.matrix_of(x).commutator(&self.matrix_of(y));
            report.tick();
            if lhs != rhs {
                report.record(format!("({x}, {y})"), "ρ([x,y]) ≠ [ρ(x), ρ(y)]");
            }
        }
        Ok(report)
    }

    /// `rep_check_pairs` over every ordered pair of supported symbols.
    pub fn rep_check_support(&self) -> Result<CheckReport> {
        let syms: Vec<BasisSymbol> = self.matrices.keys().cloned().collect();
        let mut pairs = Vec::with_capacity(syms.len() * syms.len());
        for x in &syms {
            for y in &syms {
                pairs.push((x.clone(), y.clone()));
            }
        }
        self.rep_check_pairs(&pairs)
    }

    /// Kronecker-sum tensor product: ρ(x) = ρ₁(x)⊗Id + Id⊗ρ₂(x).
    pub fn tensor(&self, other: &FiniteRep) -> Result<FiniteRep> {
        if self.algebra != other.algebra || self.n != other.n {
            return Err(Error::MixedSymbols(
                "tensor product needs matching algebras".into(),
            ));
        }
        let mut out = FiniteRep::new(self.algebra, self.n, self.dim * other.dim);
        let id1 = RatMatrix::identity(self.dim);
        let id2 = RatMatrix::identity(other.dim);
        let mut syms: Vec<BasisSymbol> = self.matrices.keys().cloned().collect();
        for s in other.matrices.keys() {
            if !syms.contains(s) {
                syms.push(s.clone());
            }
        }
        for sym in syms {
            let m = &self.matrix_of(&sym).kronecker(&id2) + &id1.kronecker(&other.matrix_of(&sym));
            out.set_generator(sym, m)?;
        }
        Ok(out)
    }
}

/// The natural gl_n-module on the basis {dx^1, …, dx^n}: E^p_q dx^i = δ_q^i dx^p.
pub fn gln_natural(n: usize) -> FiniteRep {
    let mut rep = FiniteRep::new(AlgebraTag::Gln, n, n);
    for p in 1..=n {
        for q in 1..=n {
            let mut m = RatMatrix::zeros(n, n);
            m.set(p - 1, q - 1, rat_int(1));
            rep.set_generator(BasisSymbol::gln(p, q), m).unwrap();
        }
    }
    rep
}

/// The conatural gl_n-module on {∂/∂x^1, …, ∂/∂x^n}: E^p_q ∂_i = −δ^p_i ∂_q.
pub fn gln_conatural(n: usize) -> FiniteRep {
    let mut rep = FiniteRep::new(AlgebraTag::Gln, n, n);
    for p in 1..=n {
        for q in 1..=n {
            let mut m = RatMatrix::zeros(n, n);
            m.set(q - 1, p - 1, rat_int(-1));
            rep.set_generator(BasisSymbol::gln(p, q), m).unwrap();
        }
    }
    rep
}

/// The fiber of the (s,k) tensor bundle: s conatural factors then k natural ones.
pub fn tensor_fiber(n: usize, s: usize, k: usize) -> FiniteRep {
    let mut fiber = FiniteRep::trivial_gln(n);
    for _ in 0..s {
        fiber = fiber.tensor(&gln_conatural(n)).unwrap();
    }
    for _ in 0..k {
        fiber = fiber.tensor(&gln_natural(n)).unwrap();
    }
    fiber
}

/// Pull a gl_n representation back along the degree-one quotient of the
/// positive derivation algebra: z^{ε_p} ∂_q acts as E^p_q, everything of
/// higher degree acts as zero.
pub fn inflate_gln_to_wnplus(r: &FiniteRep) -> Result<FiniteRep> {
    if r.algebra != AlgebraTag::Gln {
        return Err(Error::MixedSymbols(
            "inflation expects a gl_n module".into(),
        ));
    }
    let n = r.n;
    let mut out = FiniteRep::new(AlgebraTag::WnPlus, n, r.dim);
    for p in 1..=n {
        for q in 1..=n {
            out.set_generator(
                BasisSymbol::wn_plus(q, MultiIndex::unit(n, p)),
                r.matrix_of(&BasisSymbol::gln(p, q)),
            )?;
        }
    }
    Ok(out)
}

/// The truncated tensor module V^(N) over the positive derivation algebra.
///
/// Basis: z^α ⊗ v by graded-lex α (|α| ≤ N) then the fiber basis. Action of
/// z^β ∂_j on z^α v is α_j z^{α+β−ε_j} v + Σ_k β_k z^{α+β−ε_k} (E^k_j v),
/// with every target of degree > N dropped; generators with |β| > N+1 act
/// as zero.
pub fn tensor_module_truncated(v: &FiniteRep, max_jet_order: u32) -> Result<FiniteRep> {
    if v.algebra != AlgebraTag::Gln {
        return Err(Error::MixedSymbols(
            "tensor module fiber must be a gl_n module".into(),
        ));
    }
    let n = v.n;
    let fiber_dim = v.dim;
    let alphas = enumerate_multiindices(n, max_jet_order);
    let pos: BTreeMap<MultiIndex, usize> = alphas
        .iter()
        .enumerate()
        .map(|(i, a)| (a.clone(), i))
        .collect();
    let dim = alphas.len() * fiber_dim;
    let index = |alpha_pos: usize, fiber: usize| alpha_pos * fiber_dim + fiber;
    let mut out = FiniteRep::new(AlgebraTag::WnPlus, n, dim);
    for beta in enumerate_multiindices(n, max_jet_order + 1) {
        if beta.is_zero() {
            continue;
        }
        for j in 1..=n {
            let mut m = RatMatrix::zeros(dim, dim);
            for (src, alpha) in alphas.iter().enumerate() {
                // first term: α_j z^{α+β−ε_j} v
                let aj = alpha.entry(j);
                if aj > 0 {
                    let target = alpha
                        .add(&beta)
                        .checked_sub(&MultiIndex::unit(n, j))
                        .expect("α_j ≥ 1");
                    if let Some(&tpos) = pos.get(&target) {
                        for f in 0..fiber_dim {
                            let cur = m.get(index(tpos, f), index(src, f)) + &rat_int(aj as i64);
                            m.set(index(tpos, f), index(src, f), cur);
                        }
                    }
                }
                // second term: Σ_k β_k z^{α+β−ε_k} (E^k_j v)
                for k in 1..=n {
                    let bk = beta.entry(k);
                    if bk == 0 {
                        continue;
                    }
                    let target = alpha
                        .add(&beta)
                        .checked_sub(&MultiIndex::unit(n, k))
                        .expect("β_k ≥ 1");
                    let Some(&tpos) = pos.get(&target) else {
                        continue;
                    };
                    let e = v.matrix_of(&BasisSymbol::gln(k, j));
                    if e.is_zero() {
                        continue;
                    }
                    let factor = rat_int(bk as i64);
                    for fsrc in 0..fiber_dim {
                        for frow in 0..fiber_dim {
                            let c = e.get(frow, fsrc);
                            if c.is_zero() {
                                continue;
                            }
                            let cur = m.get(index(tpos, frow), index(src, fsrc)) + &(c * &factor);
                            m.set(index(tpos, frow), index(src, fsrc), cur);
                        }
                    }
                }
            }
            out.set_generator(BasisSymbol::wn_plus(j, beta.clone()), m)?;
        }
    }
    Ok(out)
}

/// Grading of a representation of the positive algebra by the Euler element
/// E = z_1 ∂_1 + … + z_n ∂_n.
pub enum EGrading {
    Graded {
        /// (eigenvalue, eigenspace basis), ascending by eigenvalue.
        levels: Vec<(Rat, Vec<Vec<Rat>>)>,
        /// Verification that ρ(z^α ∂_j) shifts level ν into level ν+|α|−1.
        shift: CheckReport,
    },
    /// ρ(E) is not diagonalizable over the rationals; reported, not a failure.
    Indeterminate { reason: String },
}

pub fn e_grading(r: &FiniteRep) -> Result<EGrading> {
    if r.algebra != AlgebraTag::WnPlus {
        return Err(Error::MixedSymbols(
            "the Euler grading needs a module over the positive algebra".into(),
        ));
    }
    let n = r.n;
    let mut euler = RatMatrix::zeros(r.dim, r.dim);
    for j in 1..=n {
        euler = &euler + &r.matrix_of(&BasisSymbol::wn_plus(j, MultiIndex::unit(n, j)));
    }
    let cp = char_poly(&euler);
    let Some(roots) = rational_roots(&cp) else {
        return Ok(EGrading::Indeterminate {
            reason: "characteristic polynomial resisted rational root extraction".into(),
        });
    };
    let alg_mult: usize = roots.iter().map(|(_, m)| m).sum();
    if alg_mult < r.dim {
        return Ok(EGrading::Indeterminate {
            reason: "ρ(E) has irrational eigenvalues".into(),
        });
    }
    let mut levels = Vec::new();
    let mut geometric = 0usize;
    for (root, _) in &roots {
        let shifted = &euler - &RatMatrix::scalar(r.dim, root);
        let basis = matrix_kernel(&shifted);
        geometric += basis.len();
        levels.push((root.clone(), basis));
    }
    if geometric < r.dim {
        return Ok(EGrading::Indeterminate {
            reason: "ρ(E) is not diagonalizable over the rationals".into(),
        });
    }
    // shift law: ρ(z^α ∂_j) maps the ν-eigenspace into the (ν+|α|−1)-eigenspace
    let mut shift = CheckReport::new("euler-shift");
    for (sym, mat) in r.support() {
        let BasisSymbol::WnPlus { alpha, .. } = sym else {
            continue;
        };
        let jump = rat_int(alpha.degree() as i64 - 1);
        for (nu, basis) in &levels {
            let target = nu + &jump;
            for v in basis {
                let w = mat.mul_vec(v);
                shift.tick();
                let ew = euler.mul_vec(&w);
                let scaled: Vec<Rat> = w.iter().map(|x| x * &target).collect();
                if ew != scaled {
                    shift.record(
                        format!("{sym} on level {nu}"),
                        format!("image leaves the level {target} eigenspace"),
                    );
                }
            }
        }
    }
    Ok(EGrading::Graded { levels, shift })
}

/// Outcome of `lemma2_bound_check`.
#[derive(Debug, Serialize)]
pub struct EigenvalueCountReport {
    pub bound: usize,
    pub distinct_nonzero: usize,
    pub report: CheckReport,
}

/// Given ad-eigenvectors [x, y_k] = ν_k y_k, counts the distinct eigenvalues
/// whose eigenvector acts nonzero and checks the count against
/// (dim U)² − dim U + 1. The eigenvector relations are verified first; a pair
/// failing them is a domain error naming the pair.
pub fn lemma2_bound_check(
    r: &FiniteRep,
    x: &LieElement,
    family: &[(LieElement, Rat)],
) -> Result<EigenvalueCountReport> {
    let ctx = r.bracket_context()?;
    for (idx, (y, nu)) in family.iter().enumerate() {
        let lie = bracket(&ctx, x, y)?;
        if lie != y.scale(nu) {
            return Err(Error::AdEigenPrecondition(format!(
                "pair #{idx}: [x, y] ≠ {nu}·y for y = {y}"
            )));
        }
    }
    let mut seen: Vec<Rat> = Vec::new();
    for (y, nu) in family {
        if !r.apply(y).is_zero() && !seen.contains(nu) {
            seen.push(nu.clone());
        }
    }
    let bound = r.dim * r.dim - r.dim + 1;
    let mut report = CheckReport::new("eigenvalue-count");
    report.tick();
    if seen.len() > bound {
        report.record(
            "family",
            format!(
                "{} distinct eigenvalues exceed the bound {bound}",
                seen.len()
            ),
        );
    }
    Ok(EigenvalueCountReport {
        bound,
        distinct_nonzero: seen.len(),
        report,
    })
}

/// Exact basis of { C : C ρ(x) = ρ(x) C for every supported x }.
/// Always contains the identity.
pub fn commutant(r: &FiniteRep) -> Vec<RatMatrix> {
    let mats: Vec<&RatMatrix> = r.matrices.values().collect();
    commutant_of(&mats, r.dim)
}

/// Commutant of an explicit list of d×d matrices.
pub fn commutant_of(mats: &[&RatMatrix], dim: usize) -> Vec<RatMatrix> {
    let d = dim;
    let sys_rows = mats.len() * d * d;
    let mut sys = RatMatrix::zeros(sys_rows.max(1), d * d);
    for (g, a) in mats.iter().enumerate() {
        for i in 0..d {
            for jj in 0..d {
                let row = (g * d + i) * d + jj;
                // coefficient of C_{kl} in (AC − CA)_{i,jj}
                for k in 0..d {
                    // A_{ik} C_{k,jj}
                    let cur = sys.get(row, k * d + jj) + a.get(i, k);
                    sys.set(row, k * d + jj, cur);
                }
                for l in 0..d {
                    // − C_{il} A_{l,jj}
                    let cur = sys.get(row, i * d + l) - a.get(l, jj);
                    sys.set(row, i * d + l, cur);
                }
            }
        }
    }
    matrix_kernel(&sys)
        .into_iter()
        .map(|v| RatMatrix::from_fn(d, d, |r, c| v[r * d + c].clone()))
        .collect()
}

/// Verdict of the indecomposability probe.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Indecomposability {
    Indecomposable,
    Decomposes { projection: RatMatrix },
    Indeterminate { reason: String },
}

/// Decide indecomposability as far as rational splitting allows.
///
/// Commutant of dimension one forces indecomposability. Otherwise every
/// commutant basis element is searched for a spectral idempotent over the
/// rationals; finding a proper one exhibits a decomposition. When no element
/// splits, a commutative commutant all of whose basis elements are scalar
/// plus nilpotent also forces indecomposability (sums of commuting nilpotents
/// are nilpotent, so no nontrivial idempotent can exist). Anything else is
/// reported indeterminate rather than guessed.
pub fn indecomposability_probe(r: &FiniteRep) -> Indecomposability {
    let basis = commutant(r);
    probe_commutant(&basis, r.dim)
}

/// The same probe on an explicit commutant basis, as produced by
/// `commutant_of`.
pub fn probe_commutant(basis: &[RatMatrix], dim: usize) -> Indecomposability {
    if basis.len() == 1 {
        return Indecomposability::Indecomposable;
    }
    let identity = RatMatrix::identity(dim);
    let mut all_scalar_plus_nilpotent = true;
    for c in basis {
        let mp = min_poly(c);
        let Some(roots) = rational_roots(&mp) else {
            return Indecomposability::Indeterminate {
                reason: "minimal polynomial of a commutant element resisted factoring".into(),
            };
        };
        for (root, _) in &roots {
            if let Some(e) = spectral_idempotent(c, &mp, root) {
                if !e.is_zero() && e != identity {
                    return Indecomposability::Decomposes { projection: e };
                }
            }
        }
        let pure_power = roots.len() == 1 && Some(roots[0].1) == mp.degree();
        if !pure_power {
            all_scalar_plus_nilpotent = false;
        }
    }
    if all_scalar_plus_nilpotent {
        let commutative = basis
            .iter()
            .enumerate()
            .all(|(i, a)| basis[i + 1..].iter().all(|b| a.commutator(b).is_zero()));
        if commutative {
            return Indecomposability::Indecomposable;
        }
    }
    Indecomposability::Indeterminate {
        reason: "commutant admits no rational splitting but is not visibly local".into(),
    }
}

// ---- serde ----

#[derive(Serialize, Deserialize)]
struct RepWire {
    algebra: AlgebraTag,
    n: usize,
    dim: usize,
    generators: Vec<GeneratorWire>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct GeneratorWire {
    pub symbol: BasisSymbol,
    pub matrix: RatMatrix,
}

impl Serialize for FiniteRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RepWire {
            algebra: self.algebra,
            n: self.n,
            dim: self.dim,
            generators: self
                .matrices
                .iter()
                .map(|(sym, m)| GeneratorWire {
                    symbol: sym.clone(),
                    matrix: m.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteRep {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = RepWire::deserialize(d)?;
        let mut rep = FiniteRep::new(wire.algebra, wire.n, wire.dim);
        for g in wire.generators {
            rep.set_generator(g.symbol, g.matrix)
                .map_err(serde::de::Error::custom)?;
        }
        Ok(rep)
    }
}

/// A representation of a finite-dimensional Lie algebra ġ by matrices for
/// each basis element, checked against the structure constants.
#[derive(Debug, Clone)]
pub struct GdotRep {
    pub algebra: FiniteLieAlgebra,
    pub matrices: Vec<RatMatrix>,
    pub dim: usize,
}

impl GdotRep {
    pub fn new(algebra: FiniteLieAlgebra, matrices: Vec<RatMatrix>) -> Result<Self> {
        if matrices.len() != algebra.dim() {
            return Err(Error::InvalidInput(
                "one matrix per ġ basis element required".into(),
            ));
        }
        let dim = matrices.first().map(|m| m.rows()).unwrap_or(0);
        for m in &matrices {
            if (m.rows(), m.cols()) != (dim, dim) {
                return Err(Error::ShapeMismatch("ragged ġ representation".into()));
            }
        }
        let rep = GdotRep {
            algebra,
            matrices,
            dim,
        };
        let check = rep.check();
        if !check.passed() {
            return Err(Error::NotARepresentation(format!(
                "ġ structure constants are not respected: {}",
                check.violations[0].at
            )));
        }
        Ok(rep)
    }

    /// The adjoint representation of ġ on itself.
    pub fn adjoint(algebra: FiniteLieAlgebra) -> Self {
        let d = algebra.dim();
        let matrices: Vec<RatMatrix> = (0..d)
            .map(|i| {
                RatMatrix::from_fn(d, d, |row, col| algebra.bracket_coeff(i, col, row).clone())
            })
            .collect();
        GdotRep::new(algebra, matrices).expect("adjoint action satisfies the brackets")
    }

    pub fn check(&self) -> CheckReport {
        let d = self.algebra.dim();
        let mut report = CheckReport::new("gdot-rep");
        for i in 0..d {
            for j in 0..d {
                let mut rhs = RatMatrix::zeros(self.dim, self.dim);
                for k in 0..d {
                    let c = self.algebra.bracket_coeff(i, j, k);
                    if !c.is_zero() {
                        rhs = &rhs + &self.matrices[k].scale(c);
                    }
                }
                report.tick();
                if self.matrices[i].commutator(&self.matrices[j]) != rhs {
                    report.record(format!("(g{i}, g{j})"), "ρ([g,h]) ≠ [ρ(g), ρ(h)]");
                }
            }
        }
        report
    }
}
