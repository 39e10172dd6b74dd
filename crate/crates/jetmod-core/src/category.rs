//! Weight modules that are free of finite rank over the functions on the
//! torus, presented as a weight coset λ + Zⁿ together with a representation
//! of the positive derivation algebra on the distinguished weight space U.
//!
//! The action of d_j(s) on e^m ⊗ v is e^{m+s} (m_j·Id + D_j(s)) v, where the
//! operator family D_j is stored symbolically as a matrix polynomial with
//! constant term λ_j·Id and higher coefficients ρ(z^α ∂_j)/α!. Everything
//! else (Leibniz compatibility, bracket compatibility, the commutator
//! relations of the operator family, degree reports) is derived from that
//! one polynomial family and checked against independently computed routes.

use crate::error::{Error, Result};
use crate::lie::BasisSymbol;
use crate::matpoly::MatrixPoly;
use crate::matrix::RatMatrix;
use crate::multiindex::{lattice_window, LatticeVector, MultiIndex};
use crate::polyfit::OperatorFamilyWindow;
use crate::rep::{AlgebraTag, FiniteRep};
use crate::report::CheckReport;
use crate::scalar::{rat_vec_serde, Rat};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A chosen rational representative of a weight coset λ + Zⁿ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightCoset {
    #[serde(with = "rat_vec_serde")]
    lambda: Vec<Rat>,
}

impl WeightCoset {
    pub fn new(lambda: Vec<Rat>) -> Self {
        WeightCoset { lambda }
    }

    pub fn zero(n: usize) -> Self {
        WeightCoset {
            lambda: vec![Rat::zero(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    /// 1-based component.
    pub fn entry(&self, j: usize) -> &Rat {
        &self.lambda[j - 1]
    }

    pub fn entries(&self) -> &[Rat] {
        &self.lambda
    }

    pub fn shift(&self, t: &LatticeVector) -> WeightCoset {
        assert_eq!(self.n(), t.len());
        WeightCoset {
            lambda: self
                .lambda
                .iter()
                .zip(t.entries())
                .map(|(l, &k)| l + Rat::from_integer(k.into()))
                .collect(),
        }
    }

    /// Representatives of the same coset differ by a lattice vector.
    pub fn same_coset(&self, other: &WeightCoset) -> bool {
        self.n() == other.n()
            && self
                .lambda
                .iter()
                .zip(&other.lambda)
                .all(|(a, b)| (a - b).is_integer())
    }
}

/// e^m ⊗ v, a vector sitting in the weight space λ + m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    pub m: LatticeVector,
    pub v: Vec<Rat>,
}

impl WeightVector {
    pub fn basis(dim: usize, m: LatticeVector, i: usize) -> Self {
        let mut v = vec![Rat::zero(); dim];
        v[i] = Rat::from_integer(1.into());
        WeightVector { m, v }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryJModule {
    n: usize,
    lambda: WeightCoset,
    rep: FiniteRep,
    dpoly: Vec<MatrixPoly>,
}

impl CategoryJModule {
    /// Build the module attached to (λ, ρ): D_j(s) = λ_j·Id + Σ_α (s^α/α!) ρ(z^α ∂_j).
    /// The representation is verified exhaustively on its support first.
    pub fn from_wnplus_rep(lambda: WeightCoset, rep: FiniteRep) -> Result<Self> {
        if rep.algebra() != AlgebraTag::WnPlus {
            return Err(Error::MixedSymbols(
                "the module construction needs a representation of the positive algebra".into(),
            ));
        }
        if lambda.n() != rep.n() {
            return Err(Error::DimensionMismatch(
                "weight representative and representation rank differ".into(),
            ));
        }
        let check = rep.rep_check_support()?;
        if !check.passed() {
            return Err(Error::NotARepresentation(format!(
                "input fails the representation property at {}",
                check.violations[0].at
            )));
        }
        Ok(Self::from_wnplus_rep_unchecked(lambda, rep))
    }

    /// Same construction without the representation check; violations then
    /// surface in the verification suites instead of at build time.
    pub fn from_wnplus_rep_unchecked(lambda: WeightCoset, rep: FiniteRep) -> Self {
        let n = rep.n();
        let dim = rep.dim();
        let mut dpoly = Vec::with_capacity(n);
        for j in 1..=n {
            let mut p = MatrixPoly::constant(n, RatMatrix::scalar(dim, lambda.entry(j)));
            for (sym, mat) in rep.support() {
                let BasisSymbol::WnPlus { j: ja, alpha } = sym else {
                    continue;
                };
                if *ja != j {
                    continue;
                }
                let inv_fact = Rat::from_integer(1.into()) / Rat::from_integer(alpha.factorial());
                p.add_term(alpha.clone(), mat.scale(&inv_fact));
            }
            dpoly.push(p);
        }
        CategoryJModule {
            n,
            lambda,
            rep,
            dpoly,
        }
    }

    /// Assemble a module from explicitly given operator polynomials, with no
    /// consistency checks at all. Exists so corrupted families can be built
    /// as negative controls and run through the verification suites.
    pub fn from_raw_parts(lambda: WeightCoset, rep: FiniteRep, dpoly: Vec<MatrixPoly>) -> Self {
        CategoryJModule {
            n: rep.n(),
            lambda,
            rep,
            dpoly,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim_u(&self) -> usize {
        self.rep.dim()
    }

    pub fn lambda(&self) -> &WeightCoset {
        &self.lambda
    }

    pub fn rep(&self) -> &FiniteRep {
        &self.rep
    }

    pub fn dpoly(&self, j: usize) -> &MatrixPoly {
        &self.dpoly[j - 1]
    }

    /// D_j(s) evaluated from the stored polynomial.
    pub fn d_at(&self, j: usize, s: &LatticeVector) -> Result<RatMatrix> {
        self.dpoly(j).evaluate(s)
    }

    /// d_j(s) (e^m ⊗ v) = e^{m+s} (m_j·Id + D_j(s)) v.
    pub fn act_vector_field(
        &self,
        j: usize,
        s: &LatticeVector,
        w: &WeightVector,
    ) -> Result<WeightVector> {
        if w.v.len() != self.dim_u() {
            return Err(Error::DimensionMismatch(
                "weight vector has wrong rank".into(),
            ));
        }
        let d = self.d_at(j, s)?;
        let mj = Rat::from_integer(w.m.entry(j).into());
        let mut out = d.mul_vec(&w.v);
        for (o, x) in out.iter_mut().zip(&w.v) {
            *o += &mj * x;
        }
        Ok(WeightVector {
            m: w.m.add(s),
            v: out,
        })
    }

    /// The same action computed straight from the representation matrices:
    /// (m_j + λ_j) v + Σ_α (s^α/α!) ρ(z^α ∂_j) v. Independent of the stored
    /// polynomial; the two routes are compared by `leibniz_check`.
    pub fn act_from_rep(&self, j: usize, s: &LatticeVector, w: &WeightVector) -> WeightVector {
        let mut coeff = self.rep_route_matrix(j, s);
        let mj = Rat::from_integer(w.m.entry(j).into());
        for i in 0..self.dim_u() {
            let cur = coeff.get(i, i) + &mj;
            coeff.set(i, i, cur);
        }
        WeightVector {
            m: w.m.add(s),
            v: coeff.mul_vec(&w.v),
        }
    }

    /// λ_j·Id + Σ_α (s^α/α!) ρ(z^α ∂_j), bypassing the stored polynomial.
    fn rep_route_matrix(&self, j: usize, s: &LatticeVector) -> RatMatrix {
        let dim = self.dim_u();
        let mut out = RatMatrix::scalar(dim, self.lambda.entry(j));
        for (sym, mat) in self.rep.support() {
            let BasisSymbol::WnPlus { j: ja, alpha } = sym else {
                continue;
            };
            if *ja != j {
                continue;
            }
            let c = Rat::from_integer(s.pow(alpha)) / Rat::from_integer(alpha.factorial());
            if !c.is_zero() {
                out = &out + &mat.scale(&c);
            }
        }
        out
    }

    /// Multiplication by the function e^{m'}.
    pub fn act_function(&self, mprime: &LatticeVector, w: &WeightVector) -> WeightVector {
        WeightVector {
            m: w.m.add(mprime),
            v: w.v.clone(),
        }
    }

    /// e^m ⊗ v is a d_j(0)-eigenvector with eigenvalue λ_j + m_j.
    pub fn j1_check(&self, radius: i64) -> CheckReport {
        let mut report = CheckReport::new("weight-eigenvalue");
        for j in 1..=self.n {
            for m in lattice_window(self.n, radius) {
                for i in 0..self.dim_u() {
                    let w = WeightVector::basis(self.dim_u(), m.clone(), i);
                    let out = self
                        .act_vector_field(j, &LatticeVector::zero(self.n), &w)
                        .expect("dimensions agree");
                    report.tick();
                    let expected: Vec<Rat> = w
                        .v
                        .iter()
                        .map(|x| x * &(self.lambda.entry(j) + Rat::from_integer(m.entry(j).into())))
                        .collect();
                    if out.m != m || out.v != expected {
                        report.record(format!("d_{j}(0) on e^{m}⊗e_{i}"), "not an eigenvector");
                    }
                }
            }
        }
        report
    }

    /// Leibniz compatibility of the two module structures, with the two sides
    /// computed along independent routes: the stored polynomial family on the
    /// left, the raw representation sum on the right. The dependence on the
    /// Fourier degrees of the function and the vector cancels identically, so
    /// one comparison per (j, s) quantifies over all of them; a spot check
    /// through the concrete action code exercises the degree bookkeeping too.
    pub fn leibniz_check(&self, radius: i64) -> CheckReport {
        let mut report = CheckReport::new("leibniz");
        let dim = self.dim_u();
        for j in 1..=self.n {
            for s in lattice_window(self.n, radius) {
                report.tick();
                let poly_route = match self.d_at(j, &s) {
                    Ok(m) => m,
                    Err(e) => {
                        report.record(format!("d_{j}({s})"), e.to_string());
                        continue;
                    }
                };
                let rep_route = self.rep_route_matrix(j, &s);
                if poly_route != rep_route {
                    report.record(
                        format!("d_{j}({s})"),
                        "operator family disagrees with the representation route",
                    );
                    continue;
                }
                // spot check with explicit degrees through the action code
                let mprime = LatticeVector::unit(self.n, 1);
                let m = LatticeVector::zero(self.n);
                for i in 0..dim {
                    let w = WeightVector::basis(dim, m.clone(), i);
                    let fw = self.act_function(&mprime, &w);
                    let lhs = self.act_vector_field(j, &s, &fw).expect("shapes agree");
                    // (d_j(s) e^{m'}) w = m'_j e^{m'+s} w
                    let mut rhs = self.act_function(
                        &mprime.add(&s),
                        &WeightVector {
                            m: w.m.clone(),
                            v: w.v
                                .iter()
                                .map(|x| x * Rat::from_integer(mprime.entry(j).into()))
                                .collect(),
                        },
                    );
                    let uw = self.act_from_rep(j, &s, &w);
                    let rhs2 = self.act_function(&mprime, &uw);
                    rhs.v = rhs.v.iter().zip(&rhs2.v).map(|(a, b)| a + b).collect();
                    if lhs.m != rhs.m || lhs.m != rhs2.m || lhs.v != rhs.v {
                        report.record(format!("d_{j}({s}) spot"), "Leibniz identity fails");
                    }
                }
            }
        }
        report
    }

    /// Action of the bracket equals the commutator of actions, on every
    /// weight space at once (the weight dependence is affine, so the zero
    /// weight and the unit weights cover all of them).
    pub fn bracket_compat_check(&self, radius: i64) -> CheckReport {
        let mut report = CheckReport::new("bracket-compat");
        let window = lattice_window(self.n, radius);
        let mut cache: BTreeMap<(usize, LatticeVector), RatMatrix> = BTreeMap::new();
        let d = |j: usize,
                 s: &LatticeVector,
                 cache: &mut BTreeMap<(usize, LatticeVector), RatMatrix>| {
            cache
                .entry((j, s.clone()))
                .or_insert_with(|| self.d_at(j, s).expect("dimension is fixed"))
                .clone()
        };
        let mut weights = vec![LatticeVector::zero(self.n)];
        for j in 1..=self.n {
            weights.push(LatticeVector::unit(self.n, j));
        }
        let id = RatMatrix::identity(self.dim_u());
        for j in 1..=self.n {
            for k in 1..=self.n {
                for s in &window {
                    for m in &window {
                        let dsj = d(j, s, &mut cache);
                        let dmk = d(k, m, &mut cache);
                        let sm = s.add(m);
                        let dsm_k = d(k, &sm, &mut cache);
                        let dsm_j = d(j, &sm, &mut cache);
                        for m0 in &weights {
                            // act(j,s) ∘ act(k,m) on weight m0, minus the reverse
                            let a1 =
                                &dsj + &id.scale(&Rat::from_integer(m0.add(m).entry(j).into()));
                            let b1 = &dmk + &id.scale(&Rat::from_integer(m0.entry(k).into()));
                            let a2 =
                                &dmk + &id.scale(&Rat::from_integer(m0.add(s).entry(k).into()));
                            let b2 = &dsj + &id.scale(&Rat::from_integer(m0.entry(j).into()));
                            let lhs = &(&a1 * &b1) - &(&a2 * &b2);
                            // action of m_j d_k(s+m) − s_k d_j(s+m) on weight m0
                            let t1 = &dsm_k + &id.scale(&Rat::from_integer(m0.entry(k).into()));
                            let t2 = &dsm_j + &id.scale(&Rat::from_integer(m0.entry(j).into()));
                            let rhs = &t1.scale(&Rat::from_integer(m.entry(j).into()))
                                - &t2.scale(&Rat::from_integer(s.entry(k).into()));
                            report.tick();
                            if lhs != rhs {
                                report.record(
                                    format!("(j,k,s,m,μ) = ({j},{k},{s},{m},{m0})"),
                                    "bracket compatibility fails",
                                );
                            }
                        }
                    }
                }
            }
        }
        report
    }

    /// Sample D_j on a window by routing basis vectors of the λ weight space
    /// through the action.
    pub fn extract_d(&self, j: usize, points: &[LatticeVector]) -> Result<OperatorFamilyWindow> {
        let dim = self.dim_u();
        let mut out = OperatorFamilyWindow::new(self.n, dim);
        for s in points {
            let mut mat = RatMatrix::zeros(dim, dim);
            for col in 0..dim {
                let w = WeightVector::basis(dim, LatticeVector::zero(self.n), col);
                let img = self.act_vector_field(j, s, &w)?;
                for row in 0..dim {
                    mat.set(row, col, img.v[row].clone());
                }
            }
            out.insert(s.clone(), mat)?;
        }
        Ok(out)
    }

    /// The expansion coefficients D_j^(α) = α!·coeff_α(D_j), α ≠ 0.
    pub fn expand_d(&self, j: usize) -> Vec<(MultiIndex, RatMatrix)> {
        self.dpoly(j)
            .terms()
            .filter(|(alpha, _)| !alpha.is_zero())
            .map(|(alpha, m)| {
                (
                    alpha.clone(),
                    m.scale(&Rat::from_integer(alpha.factorial())),
                )
            })
            .collect()
    }

    /// Max total degree in s over the operator polynomials.
    pub fn degree_report(&self) -> i64 {
        (1..=self.n)
            .map(|j| self.dpoly(j).degree())
            .max()
            .unwrap_or(-1)
    }

    /// Structure polynomials as matrix polynomials in (s, m): variables
    /// 1..n are s, variables n+1..2n are m, and the entry (ℓ, r) of the j-th
    /// polynomial is f_{jrℓ}(s, m).
    pub fn structure_polynomials(&self) -> Vec<MatrixPoly> {
        let dim = self.dim_u();
        (1..=self.n)
            .map(|j| {
                let mut p = MatrixPoly::zero(2 * self.n, dim, dim);
                for (alpha, mat) in self.dpoly(j).terms() {
                    let mut exps = alpha.entries().to_vec();
                    exps.extend(std::iter::repeat_n(0, self.n));
                    p.add_term(MultiIndex::new(exps), mat.clone());
                }
                p.add_term(
                    MultiIndex::unit(2 * self.n, self.n + j),
                    RatMatrix::identity(dim),
                );
                p
            })
            .collect()
    }

    /// Re-pick the coset representative as λ + t and verify the degree-shift
    /// map e^m ⊗ v ↦ e^{m−t} ⊗ v intertwines the two actions on a window.
    pub fn weight_shift_iso(&self, t: &LatticeVector, radius: i64) -> Result<CheckReport> {
        let shifted =
            CategoryJModule::from_wnplus_rep_unchecked(self.lambda.shift(t), self.rep.clone());
        let mut report = CheckReport::new("weight-shift");
        if !shifted.lambda.same_coset(&self.lambda) {
            report.record("coset", "shifted representative left the coset");
        }
        let dim = self.dim_u();
        for j in 1..=self.n {
            for s in lattice_window(self.n, radius) {
                for m in lattice_window(self.n, radius) {
                    for i in 0..dim {
                        let w = WeightVector::basis(dim, m.clone(), i);
                        let lhs = self.act_vector_field(j, &s, &w)?;
                        let mapped_lhs = WeightVector {
                            m: lhs.m.sub(t),
                            v: lhs.v,
                        };
                        let mapped_w = WeightVector {
                            m: w.m.sub(t),
                            v: w.v,
                        };
                        let rhs = shifted.act_vector_field(j, &s, &mapped_w)?;
                        report.tick();
                        if mapped_lhs != rhs {
                            report.record(
                                format!("d_{j}({s}) on e^{m}⊗e_{i}"),
                                "map fails to intertwine",
                            );
                        }
                    }
                }
            }
        }
        Ok(report)
    }

    /// Commutator relations of the operator family, sampled on a window via
    /// the stored polynomials.
    pub fn lemma1_check(&self, radius: i64) -> CheckReport {
        let window = lattice_window(self.n, radius);
        let mut report = CheckReport::new("operator-commutators");
        let mut cache: BTreeMap<(usize, LatticeVector), RatMatrix> = BTreeMap::new();
        let d = |j: usize,
                 s: &LatticeVector,
                 cache: &mut BTreeMap<(usize, LatticeVector), RatMatrix>| {
            cache
                .entry((j, s.clone()))
                .or_insert_with(|| self.d_at(j, s).expect("dimension is fixed"))
                .clone()
        };
        for j in 1..=self.n {
            for k in 1..=self.n {
                for s in &window {
                    for m in &window {
                        let lhs = d(j, s, &mut cache).commutator(&d(k, m, &mut cache));
                        let sm = s.add(m);
                        let term1 = &d(k, &sm, &mut cache) - &d(k, m, &mut cache);
                        let term2 = &d(j, &sm, &mut cache) - &d(j, s, &mut cache);
                        let rhs = &term1.scale(&Rat::from_integer(m.entry(j).into()))
                            - &term2.scale(&Rat::from_integer(s.entry(k).into()));
                        report.tick();
                        if lhs != rhs {
                            report.record(
                                format!("(j,k,s,m) = ({j},{k},{s},{m})"),
                                "commutator relation fails",
                            );
                        }
                    }
                }
            }
        }
        report
    }
}

/// Commutator relations checked on explicitly sampled windows; evaluating
/// outside the window is a domain error.
pub fn lemma1_check_windows(
    family: &[OperatorFamilyWindow],
    samples: &[(usize, usize, LatticeVector, LatticeVector)],
) -> Result<CheckReport> {
    let mut report = CheckReport::new("operator-commutators");
    let fetch = |j: usize, s: &LatticeVector| -> Result<RatMatrix> {
        family
            .get(j - 1)
            .ok_or_else(|| Error::MissingSample(format!("no family for direction {j}")))?
            .get(s)
            .cloned()
            .ok_or_else(|| Error::MissingSample(format!("D_{j}({s})")))
    };
    for (j, k, s, m) in samples {
        let sm = s.add(m);
        let lhs = fetch(*j, s)?.commutator(&fetch(*k, m)?);
        let term1 = &fetch(*k, &sm)? - &fetch(*k, m)?;
        let term2 = &fetch(*j, &sm)? - &fetch(*j, s)?;
        let rhs = &term1.scale(&Rat::from_integer(m.entry(*j).into()))
            - &term2.scale(&Rat::from_integer(s.entry(*k).into()));
        report.tick();
        if lhs != rhs {
            report.record(
                format!("(j,k,s,m) = ({j},{k},{s},{m})"),
                "commutator relation fails",
            );
        }
    }
    Ok(report)
}

/// Verifies `[D_j^(α), D_k^(β)] = β_j D_k^(α+β−ε_j) − α_k D_j^(α+β−ε_k)` on the
/// full finite support. `terms[j-1]` lists the (α, D_j^(α)) pairs for d_j.
pub fn check_relations_37(terms: &[Vec<(MultiIndex, RatMatrix)>]) -> CheckReport {
    let n = terms.len();
    let mut report = CheckReport::new("expansion-commutators");
    let lookup = |j: usize, gamma: Option<MultiIndex>| -> Option<RatMatrix> {
        let gamma = gamma?;
        Some(
            terms[j - 1]
                .iter()
                .find(|(a, _)| *a == gamma)
                .map(|(_, m)| m.clone())
                .unwrap_or_else(|| {
                    let dim = terms
                        .iter()
                        .flat_map(|t| t.iter())
                        .next()
                        .map(|(_, m)| m.rows())
                        .unwrap_or(0);
                    RatMatrix::zeros(dim, dim)
                }),
        )
    };
    for j in 1..=n {
        for (alpha, da) in &terms[j - 1] {
            for k in 1..=n {
                for (beta, db) in &terms[k - 1] {
                    let lhs = da.commutator(db);
                    let dim = da.rows();
                    let mut rhs = RatMatrix::zeros(dim, dim);
                    let bj = beta.entry(j);
                    if bj > 0 {
                        let gamma = alpha.add(beta).checked_sub(&MultiIndex::unit(n, j));
                        if let Some(m) = lookup(k, gamma) {
                            rhs = &rhs + &m.scale(&Rat::from_integer((bj as i64).into()));
                        }
                    }
                    let ak = alpha.entry(k);
                    if ak > 0 {
                        let gamma = alpha.add(beta).checked_sub(&MultiIndex::unit(n, k));
                        if let Some(m) = lookup(j, gamma) {
                            rhs = &rhs - &m.scale(&Rat::from_integer((ak as i64).into()));
                        }
                    }
                    report.tick();
                    if lhs != rhs {
                        report.record(
                            format!("(z^{alpha}∂_{j}, z^{beta}∂_{k})"),
                            "expansion commutator fails",
                        );
                    }
                }
            }
        }
    }
    report
}

// Module files carry (n, λ, rep); the operator polynomials are rebuilt on
// load without validation so that corrupted files can still be inspected by
// the verification suites.
#[derive(Serialize, Deserialize)]
struct ModuleWire {
    n: usize,
    lambda: WeightCoset,
    rep: FiniteRep,
}

impl Serialize for CategoryJModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ModuleWire {
            n: self.n,
            lambda: self.lambda.clone(),
            rep: self.rep.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CategoryJModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = ModuleWire::deserialize(d)?;
        if wire.lambda.n() != wire.n || wire.rep.n() != wire.n {
            return Err(serde::de::Error::custom("rank fields disagree"));
        }
        Ok(CategoryJModule::from_wnplus_rep_unchecked(
            wire.lambda,
            wire.rep,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::{gln_natural, inflate_gln_to_wnplus, tensor_module_truncated};
    use crate::scalar::{rat, rat_int};

    fn rank1_jet_module(lambda: Rat, order: u32) -> CategoryJModule {
        let rep = tensor_module_truncated(&FiniteRep::trivial_gln(1), order).unwrap();
        CategoryJModule::from_wnplus_rep(WeightCoset::new(vec![lambda]), rep).unwrap()
    }

    #[test]
    fn zero_rep_module_acts_by_degree() {
        let m = CategoryJModule::from_wnplus_rep(
            WeightCoset::zero(1),
            FiniteRep::new(AlgebraTag::WnPlus, 1, 1),
        )
        .unwrap();
        assert!(m.dpoly(1).is_zero());
        // d(s)(e^m ⊗ v) = m e^{m+s} ⊗ v
        let w = WeightVector::basis(1, LatticeVector::new(vec![3]), 0);
        let out = m
            .act_vector_field(1, &LatticeVector::new(vec![2]), &w)
            .unwrap();
        assert_eq!(out.m, LatticeVector::new(vec![5]));
        assert_eq!(out.v, vec![rat_int(3)]);
    }

    #[test]
    fn half_weight_module_operator_family() {
        // D(s) = 1/2·Id + s·diag(0,1)
        let m = rank1_jet_module(rat(1, 2), 1);
        let d = m.d_at(1, &LatticeVector::new(vec![1])).unwrap();
        let expect =
            &RatMatrix::scalar(2, &rat(1, 2)) + &RatMatrix::from_i64_rows(&[&[0, 0], &[0, 1]]);
        assert_eq!(d, expect);
        // action coefficient on the second basis vector at s=2, m=1: 1 + 1/2 + 2
        let w = WeightVector::basis(2, LatticeVector::new(vec![1]), 1);
        let out = m
            .act_vector_field(1, &LatticeVector::new(vec![2]), &w)
            .unwrap();
        assert_eq!(out.v[1], rat(7, 2));
        assert_eq!(out.m, LatticeVector::new(vec![3]));
    }

    #[test]
    fn inflated_module_matches_linear_form() {
        // D_j(s) = Σ_p s_p ρ(E^p_j) for modules inflated from gl_n
        let v = gln_natural(2);
        let m = CategoryJModule::from_wnplus_rep(
            WeightCoset::zero(2),
            inflate_gln_to_wnplus(&v).unwrap(),
        )
        .unwrap();
        for j in 1..=2usize {
            assert_eq!(m.dpoly(j).degree(), 1);
            for s in lattice_window(2, 2) {
                let mut expect = RatMatrix::zeros(2, 2);
                for p in 1..=2usize {
                    expect = &expect
                        + &v.matrix_of(&BasisSymbol::gln(p, j))
                            .scale(&rat_int(s.entry(p)));
                }
                assert_eq!(m.d_at(j, &s).unwrap(), expect);
            }
        }
    }

    #[test]
    fn action_at_zero_gives_weights() {
        let m = rank1_jet_module(rat(1, 2), 2);
        assert!(m.j1_check(2).passed());
        // D(0) = λ·Id
        let d0 = m.d_at(1, &LatticeVector::zero(1)).unwrap();
        assert_eq!(d0, RatMatrix::scalar(3, &rat(1, 2)));
    }

    #[test]
    fn function_action_is_a_group_action() {
        let m = rank1_jet_module(rat_int(0), 1);
        let w = WeightVector::basis(2, LatticeVector::new(vec![-1]), 1);
        let a = m.act_function(&LatticeVector::new(vec![2]), &w);
        let b = m.act_function(&LatticeVector::new(vec![3]), &a);
        let c = m.act_function(&LatticeVector::new(vec![5]), &w);
        assert_eq!(b, c);
        let id = m.act_function(&LatticeVector::zero(1), &w);
        assert_eq!(id, w);
    }

    #[test]
    fn leibniz_and_bracket_checks_pass_on_modules() {
        let m = rank1_jet_module(rat(1, 2), 2);
        assert!(m.leibniz_check(2).passed());
        assert!(m.bracket_compat_check(2).passed());
        assert!(m.lemma1_check(2).passed());
        // zero representation: everything reduces to scalar identities
        let z = CategoryJModule::from_wnplus_rep(
            WeightCoset::zero(2),
            FiniteRep::new(AlgebraTag::WnPlus, 2, 1),
        )
        .unwrap();
        assert!(z.leibniz_check(1).passed());
        assert!(z.bracket_compat_check(1).passed());
    }

    #[test]
    fn non_representation_input_is_rejected() {
        let mut broken = FiniteRep::new(AlgebraTag::WnPlus, 1, 2);
        broken
            .set_generator(
                BasisSymbol::wn_plus(1, MultiIndex::new(vec![1])),
                RatMatrix::from_i64_rows(&[&[0, 1], &[0, 0]]),
            )
            .unwrap();
        // [z∂, z²∂] = z²∂ cannot hold with these two matrices
        broken
            .set_generator(
                BasisSymbol::wn_plus(1, MultiIndex::new(vec![2])),
                RatMatrix::from_i64_rows(&[&[0, 0], &[1, 0]]),
            )
            .unwrap();
        assert!(matches!(
            CategoryJModule::from_wnplus_rep(WeightCoset::zero(1), broken),
            Err(crate::error::Error::NotARepresentation(_))
        ));
    }

    #[test]
    fn corrupted_constant_term_breaks_leibniz() {
        let good = rank1_jet_module(rat(1, 2), 1);
        let mut dp = good.dpoly(1).clone();
        dp.add_term(MultiIndex::zero(1), RatMatrix::identity(2)); // constant now (3/2)·Id
        let bad =
            CategoryJModule::from_raw_parts(good.lambda().clone(), good.rep().clone(), vec![dp]);
        let report = bad.leibniz_check(1);
        assert!(!report.passed());
    }

    #[test]
    fn corrupted_family_breaks_lemma1() {
        // D(s) = s²·A with a non-commuting pair violates the relation
        let a = RatMatrix::from_i64_rows(&[&[0, 1], &[0, 0]]);
        let b = RatMatrix::from_i64_rows(&[&[0, 0], &[1, 0]]);
        let mut dp = MatrixPoly::zero(1, 2, 2);
        dp.add_term(MultiIndex::new(vec![1]), a);
        dp.add_term(MultiIndex::new(vec![2]), b);
        let bad = CategoryJModule::from_raw_parts(
            WeightCoset::zero(1),
            FiniteRep::new(AlgebraTag::WnPlus, 1, 2),
            vec![dp],
        );
        assert!(!bad.lemma1_check(2).passed());
        // the same corruption surfaces through the action commutators
        assert!(!bad.bracket_compat_check(2).passed());
    }

    #[test]
    fn expansion_roundtrip() {
        let rep = tensor_module_truncated(&gln_natural(2), 1).unwrap();
        let m = CategoryJModule::from_wnplus_rep(WeightCoset::zero(2), rep.clone()).unwrap();
        for j in 1..=2usize {
            for (alpha, mat) in m.expand_d(j) {
                assert_eq!(
                    mat,
                    rep.matrix_of(&BasisSymbol::wn_plus(j, alpha.clone())),
                    "coefficient at {alpha}"
                );
            }
            // and every supported generator is recovered
            for (sym, mat) in rep.support() {
                let BasisSymbol::WnPlus { j: ja, alpha } = sym else {
                    continue;
                };
                if *ja == j {
                    let found = m
                        .expand_d(j)
                        .into_iter()
                        .find(|(a, _)| a == alpha)
                        .map(|(_, m)| m);
                    assert_eq!(found.as_ref(), Some(mat));
                }
            }
        }
        // zero rep: empty expansion
        let z = CategoryJModule::from_wnplus_rep(
            WeightCoset::zero(1),
            FiniteRep::new(AlgebraTag::WnPlus, 1, 2),
        )
        .unwrap();
        assert!(z.expand_d(1).is_empty());
    }

    #[test]
    fn relations_37_on_expansions() {
        let rep = tensor_module_truncated(&gln_natural(2), 1).unwrap();
        let m = CategoryJModule::from_wnplus_rep(WeightCoset::zero(2), rep).unwrap();
        let terms: Vec<_> = (1..=2).map(|j| m.expand_d(j)).collect();
        assert!(check_relations_37(&terms).passed());
        // single-term family: [D^{(1)}, D^{(1)}] = 0 matches (1−1)·D^{(1)}
        let single = vec![vec![(
            MultiIndex::new(vec![1]),
            RatMatrix::from_i64_rows(&[&[0, 0], &[0, 1]]),
        )]];
        assert!(check_relations_37(&single).passed());
        // non-representation terms violate the relations
        let broken = vec![vec![
            (
                MultiIndex::new(vec![1]),
                RatMatrix::from_i64_rows(&[&[0, 1], &[0, 0]]),
            ),
            (
                MultiIndex::new(vec![2]),
                RatMatrix::from_i64_rows(&[&[0, 0], &[1, 0]]),
            ),
        ]];
        assert!(!check_relations_37(&broken).passed());
    }

    #[test]
    fn extraction_matches_polynomials() {
        let m = rank1_jet_module(rat(1, 2), 1);
        let points: Vec<LatticeVector> = (-3..=3).map(|s| LatticeVector::new(vec![s])).collect();
        let w = m.extract_d(1, &points).unwrap();
        for s in &points {
            assert_eq!(w.get(s).unwrap(), &m.d_at(1, s).unwrap());
        }
        // s = 0 sample is λ·Id
        assert_eq!(
            w.get(&LatticeVector::zero(1)).unwrap(),
            &RatMatrix::scalar(2, &rat(1, 2))
        );
    }

    #[test]
    fn structure_polynomial_entries() {
        let m = rank1_jet_module(rat(1, 2), 1);
        let f = m.structure_polynomials();
        // f_{1,2,2} = m + 1/2 + s: entry (2,2) picks up the weight monomial,
        // the constant λ and the linear s-term
        let p = &f[0];
        assert_eq!(p.vars(), 2);
        let const_term = p.coeff_or_zero(&MultiIndex::zero(2));
        assert_eq!(const_term.get(1, 1), &rat(1, 2));
        let s_term = p.coeff_or_zero(&MultiIndex::new(vec![1, 0]));
        assert_eq!(s_term.get(1, 1), &rat_int(1));
        let m_term = p.coeff_or_zero(&MultiIndex::new(vec![0, 1]));
        assert_eq!(m_term, RatMatrix::identity(2));
        // degree in the weight variable is ≤ 1
        for (alpha, _) in p.terms() {
            assert!(alpha.entry(2) <= 1);
        }
        // zero rep: f_{jrℓ} = m_j δ_{rℓ}
        let z = CategoryJModule::from_wnplus_rep(
            WeightCoset::zero(1),
            FiniteRep::new(AlgebraTag::WnPlus, 1, 1),
        )
        .unwrap();
        let fz = z.structure_polynomials();
        assert_eq!(fz[0].degree(), 1);
        assert_eq!(
            fz[0].coeff_or_zero(&MultiIndex::new(vec![0, 1])),
            RatMatrix::identity(1)
        );
    }

    #[test]
    fn weight_shift_isomorphism() {
        let m = rank1_jet_module(rat_int(0), 1);
        assert!(m
            .weight_shift_iso(&LatticeVector::zero(1), 1)
            .unwrap()
            .passed());
        assert!(m
            .weight_shift_iso(&LatticeVector::new(vec![2]), 2)
            .unwrap()
            .passed());
        // negative control: mapping without the degree shift fails
        let shifted =
            CategoryJModule::from_wnplus_rep(WeightCoset::new(vec![rat_int(1)]), m.rep().clone())
                .unwrap();
        let w = WeightVector::basis(2, LatticeVector::new(vec![1]), 1);
        let s = LatticeVector::new(vec![1]);
        let lhs = m.act_vector_field(1, &s, &w).unwrap();
        let rhs = shifted.act_vector_field(1, &s, &w).unwrap();
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn windowed_commutator_check_needs_all_samples() {
        let m = rank1_jet_module(rat(1, 2), 1);
        let points: Vec<LatticeVector> = (-2..=4).map(|s| LatticeVector::new(vec![s])).collect();
        let family = vec![m.extract_d(1, &points).unwrap()];
        let samples = vec![(
            1usize,
            1usize,
            LatticeVector::new(vec![1]),
            LatticeVector::new(vec![2]),
        )];
        assert!(lemma1_check_windows(&family, &samples).unwrap().passed());
        // s + m outside the window is a domain error, not a silent pass
        let out_of_range = vec![(
            1usize,
            1usize,
            LatticeVector::new(vec![3]),
            LatticeVector::new(vec![4]),
        )];
        assert!(matches!(
            lemma1_check_windows(&family, &out_of_range),
            Err(crate::error::Error::MissingSample(_))
        ));
    }

    #[test]
    fn module_serde_roundtrip_rebuilds_polynomials() {
        let m = rank1_jet_module(rat(1, 2), 2);
        let js = serde_json::to_string(&m).unwrap();
        let back: CategoryJModule = serde_json::from_str(&js).unwrap();
        assert_eq!(back, m);
    }
}
