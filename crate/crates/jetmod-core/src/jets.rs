//! Jets of functions and tensor fields on the torus, with the prolonged
//! action of vector fields.
//!
//! The fiber of the order-N jet bundle of a tensor bundle with gl_n-fiber V
//! is spanned by v^(α) ⊗ v for |α| ≤ N. All computations happen in the
//! rescaled basis w^(α) = (2πi)^{|α|} v^(α), in which every structure
//! constant of the prolonged action is rational: writing u = d_dir(s) and
//! working over the Fourier basis e^m,
//!
//!   u (e^m ⊗ w^(α) ⊗ v) = e^{m+s} [ m_dir · w^(α) ⊗ v
//!       + α_dir Σ_{β>0} (s^β/β!) w^(α−ε_dir+β) ⊗ v
//!       + Σ_j Σ_{β≥0} (s^{β+ε_j}/β!) w^(α+β) ⊗ (E^j_dir v) ],
//!
//! truncated at jet order N. In the unscaled basis the three terms carry
//! (2πi)^0, (2πi)^{|β|−1} and (2πi)^{|β|} respectively; an explicit rational
//! stand-in for that factor is kept available so the necessity of the
//! rescaling can be demonstrated rather than asserted.

use crate::category::{CategoryJModule, WeightCoset, WeightVector};
use crate::error::{Error, Result};
use crate::lie::BasisSymbol;
use crate::matrix::RatMatrix;
use crate::multiindex::{enumerate_multiindices, lattice_window, LatticeVector, MultiIndex};
use crate::rep::{tensor_fiber, tensor_module_truncated, AlgebraTag, FiniteRep};
use crate::report::CheckReport;
use crate::scalar::Rat;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// An order-N jet module over a gl_n fiber.
#[derive(Debug, Clone)]
pub struct JetModuleSpec {
    n: usize,
    order: u32,
    fiber: FiniteRep,
    alphas: Vec<MultiIndex>,
    pos: BTreeMap<MultiIndex, usize>,
}

impl JetModuleSpec {
    pub fn new(n: usize, order: u32, fiber: FiniteRep) -> Result<Self> {
        if fiber.algebra() != AlgebraTag::Gln || fiber.n() != n {
            return Err(Error::MixedSymbols(
                "jet fiber must be a gl_n module of matching rank".into(),
            ));
        }
        let alphas = enumerate_multiindices(n, order);
        let pos = alphas
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        Ok(JetModuleSpec {
            n,
            order,
            fiber,
            alphas,
            pos,
        })
    }

    /// Jets of plain functions: the trivial one-dimensional fiber.
    pub fn functions(n: usize, order: u32) -> Self {
        Self::new(n, order, FiniteRep::trivial_gln(n)).expect("trivial fiber always fits")
    }

    /// Jets of (s,k) tensor fields.
    pub fn tensor_type(n: usize, order: u32, s: usize, k: usize) -> Self {
        Self::new(n, order, tensor_fiber(n, s, k)).expect("tensor fiber always fits")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn fiber(&self) -> &FiniteRep {
        &self.fiber
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber.dim()
    }

    /// Dimension of the jet fiber: one copy of V per multi-index of degree ≤ N.
    pub fn jet_dim(&self) -> usize {
        self.alphas.len() * self.fiber.dim()
    }

    pub fn alphas(&self) -> &[MultiIndex] {
        &self.alphas
    }

    /// Position of w^(α) ⊗ (fiber basis element) in the jet fiber basis:
    /// multi-indices graded-lex, then the fiber basis, matching the basis
    /// order of the truncated tensor module.
    pub fn index(&self, alpha: &MultiIndex, fiber: usize) -> Option<usize> {
        Some(self.pos.get(alpha)? * self.fiber.dim() + fiber)
    }

    /// Action of d_dir(s) on e^m ⊗ w^(α) ⊗ e_fiber, as a weight vector over
    /// the jet fiber basis at Fourier degree m+s.
    pub fn jet_action(
        &self,
        dir: usize,
        s: &LatticeVector,
        m: &LatticeVector,
        alpha: &MultiIndex,
        fiber: usize,
    ) -> Result<WeightVector> {
        if alpha.degree() > self.order {
            return Err(Error::InvalidInput(format!(
                "jet index {alpha} exceeds order {}",
                self.order
            )));
        }
        let col = self
            .index(alpha, fiber)
            .ok_or_else(|| Error::InvalidInput(format!("basis index ({alpha}, {fiber})")))?;
        let table = self.action_matrix_with(dir, s, m, None)?;
        let v = (0..self.jet_dim())
            .map(|row| table.get(row, col).clone())
            .collect();
        Ok(WeightVector { m: m.add(s), v })
    }

    /// Full coefficient table of d_dir(s) on e^m ⊗ (jet fiber), rescaled basis.
    pub fn action_matrix(
        &self,
        dir: usize,
        s: &LatticeVector,
        m: &LatticeVector,
    ) -> Result<RatMatrix> {
        self.action_matrix_with(dir, s, m, None)
    }

    /// Coefficient table in the unscaled basis v^(α), with `omega` standing
    /// in for the transcendental factor. `omega = 1` collapses to the
    /// rescaled table; any other value exhibits how the identification
    /// without rescaling fails.
    pub fn action_matrix_unscaled(
        &self,
        dir: usize,
        s: &LatticeVector,
        m: &LatticeVector,
        omega: &Rat,
    ) -> Result<RatMatrix> {
        self.action_matrix_with(dir, s, m, Some(omega))
    }

    fn action_matrix_with(
        &self,
        dir: usize,
        s: &LatticeVector,
        m: &LatticeVector,
        omega: Option<&Rat>,
    ) -> Result<RatMatrix> {
        if dir < 1 || dir > self.n || s.len() != self.n || m.len() != self.n {
            return Err(Error::DimensionMismatch(
                "direction or degree does not match the rank".into(),
            ));
        }
        let fdim = self.fiber.dim();
        let dim = self.jet_dim();
        let mut out = RatMatrix::zeros(dim, dim);
        let omega_pow = |k: i64| -> Rat {
            match omega {
                None => Rat::one(),
                Some(w) => w.pow(k as i32),
            }
        };
        let m_dir = Rat::from_integer(m.entry(dir).into());
        for (apos, alpha) in self.alphas.iter().enumerate() {
            // multiplication term
            if !m_dir.is_zero() {
                for f in 0..fdim {
                    let col = apos * fdim + f;
                    let cur = out.get(col, col) + &m_dir;
                    out.set(col, col, cur);
                }
            }
            // jet-lowering term: α_dir Σ_{β>0} (s^β/β!) w^(α−ε_dir+β)
            let a_dir = alpha.entry(dir);
            if a_dir > 0 {
                let base = alpha
                    .checked_sub(&MultiIndex::unit(self.n, dir))
                    .expect("α_dir ≥ 1");
                for beta in enumerate_multiindices(self.n, self.order - alpha.degree() + 1) {
                    if beta.is_zero() {
                        continue;
                    }
                    let target = base.add(&beta);
                    let Some(&tpos) = self.pos.get(&target) else {
                        continue;
                    };
                    let c = Rat::from_integer(s.pow(&beta) * a_dir)
                        / Rat::from_integer(beta.factorial());
                    let c = c * omega_pow(beta.degree() as i64 - 1);
                    if c.is_zero() {
                        continue;
                    }
                    for f in 0..fdim {
                        let cur = out.get(tpos * fdim + f, apos * fdim + f) + &c;
                        out.set(tpos * fdim + f, apos * fdim + f, cur);
                    }
                }
            }
            // fiber term: Σ_j Σ_{β≥0} (s^{β+ε_j}/β!) w^(α+β) ⊗ E^j_dir v
            for jj in 1..=self.n {
                let e = self.fiber.matrix_of(&BasisSymbol::gln(jj, dir));
                if e.is_zero() {
                    continue;
                }
                for beta in enumerate_multiindices(self.n, self.order - alpha.degree()) {
                    let target = alpha.add(&beta);
                    let Some(&tpos) = self.pos.get(&target) else {
                        continue;
                    };
                    let exp = beta.add(&MultiIndex::unit(self.n, jj));
                    let c = Rat::from_integer(s.pow(&exp)) / Rat::from_integer(beta.factorial());
                    let c = c * omega_pow(beta.degree() as i64);
                    if c.is_zero() {
                        continue;
                    }
                    for fs in 0..fdim {
                        for fr in 0..fdim {
                            let ec = e.get(fr, fs);
                            if ec.is_zero() {
                                continue;
                            }
                            let cur = out.get(tpos * fdim + fr, apos * fdim + fs) + &(ec * &c);
                            out.set(tpos * fdim + fr, apos * fdim + fs, cur);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// The module the jet space corresponds to: weight zero over the
    /// truncated tensor module on the same fiber.
    pub fn to_module(&self) -> Result<CategoryJModule> {
        let rep = tensor_module_truncated(&self.fiber, self.order)?;
        CategoryJModule::from_wnplus_rep(WeightCoset::zero(self.n), rep)
    }

    /// Structure-constant comparison between the geometric action on jets
    /// and the algebraic action of the corresponding module, over a window
    /// of vector-field degrees and a few function degrees. Both sides are
    /// computed by independent code paths; the tables must agree entry for
    /// entry.
    pub fn iso_check(&self, radius: i64) -> Result<CheckReport> {
        let module = self.to_module()?;
        let mut report = CheckReport::new("jet-vs-tensor");
        let id = RatMatrix::identity(self.jet_dim());
        let mut weights = vec![LatticeVector::zero(self.n)];
        for j in 1..=self.n {
            weights.push(LatticeVector::unit(self.n, j));
        }
        for dir in 1..=self.n {
            for s in lattice_window(self.n, radius) {
                let d = module.d_at(dir, &s)?;
                for m in &weights {
                    let geometric = self.action_matrix(dir, &s, m)?;
                    let algebraic = &d + &id.scale(&Rat::from_integer(m.entry(dir).into()));
                    report.tick();
                    if geometric != algebraic {
                        report.record(
                            format!("d_{dir}({s}) at e^{m}"),
                            "jet table differs from the module table",
                        );
                    }
                }
            }
        }
        Ok(report)
    }

    /// Invariance of the high-order span and the identification of the
    /// quotient with the lower-order jet module.
    pub fn filtration_check(&self, ell: u32, radius: i64) -> Result<FiltrationReport> {
        if ell > self.order {
            return Err(Error::InvalidInput(format!(
                "filtration level {ell} exceeds the jet order {}",
                self.order
            )));
        }
        let fdim = self.fiber.dim();
        let submodule: Vec<(MultiIndex, usize)> = self
            .alphas
            .iter()
            .filter(|a| a.degree() > ell)
            .flat_map(|a| (0..fdim).map(move |f| (a.clone(), f)))
            .collect();
        let quotient_spec = JetModuleSpec::new(self.n, ell, self.fiber.clone())?;
        let mut invariance = CheckReport::new("filtration-invariance");
        let mut quotient = CheckReport::new("quotient-structure-constants");
        let zero_m = LatticeVector::zero(self.n);
        for dir in 1..=self.n {
            for s in lattice_window(self.n, radius) {
                let table = self.action_matrix(dir, &s, &zero_m)?;
                // the action never lowers |α| below ℓ+1 on the high span
                for (alpha, f) in &submodule {
                    let col = self.index(alpha, *f).expect("submodule index");
                    invariance.tick();
                    for (row_a, row_alpha) in self.alphas.iter().enumerate() {
                        if row_alpha.degree() > ell {
                            continue;
                        }
                        for rf in 0..fdim {
                            if !table.get(row_a * fdim + rf, col).is_zero() {
                                invariance.record(
                                    format!("d_{dir}({s}) on ({alpha}, {f})"),
                                    format!("leaks into ({row_alpha}, {rf})"),
                                );
                            }
                        }
                    }
                }
                // the quotient table equals the order-ℓ jet table
                let small = quotient_spec.action_matrix(dir, &s, &zero_m)?;
                for (alpha, f) in quotient_spec
                    .alphas()
                    .iter()
                    .flat_map(|a| (0..fdim).map(move |f| (a.clone(), f)))
                {
                    let big_col = self.index(&alpha, f).expect("low index in big module");
                    let small_col = quotient_spec.index(&alpha, f).expect("low index");
                    quotient.tick();
                    let mut same = true;
                    for (row_a, row_alpha) in quotient_spec.alphas().iter().enumerate() {
                        let big_row = self.index(row_alpha, 0).expect("low index in big module");
                        for rf in 0..fdim {
                            if table.get(big_row + rf, big_col)
                                != small.get(row_a * fdim + rf, small_col)
                            {
                                same = false;
                            }
                        }
                    }
                    if !same {
                        quotient.record(
                            format!("d_{dir}({s}) on ({alpha}, {f})"),
                            "quotient table differs from the lower-order module",
                        );
                    }
                }
            }
        }
        Ok(FiltrationReport {
            submodule_basis: submodule,
            invariance,
            quotient_matches: quotient,
        })
    }
}

/// Result of `filtration_check`.
#[derive(Debug)]
pub struct FiltrationReport {
    /// Basis of the invariant span: jets with all coordinates of degree ≤ ℓ
    /// vanishing.
    pub submodule_basis: Vec<(MultiIndex, usize)>,
    pub invariance: CheckReport,
    pub quotient_matches: CheckReport,
}

impl FiltrationReport {
    pub fn passed(&self) -> bool {
        self.invariance.passed() && self.quotient_matches.passed()
    }
}

/// Prolonged action on jets of plain functions, written out directly from
/// the two-term formula (no fiber part). Kept independent of `jet_action`
/// so the two can be compared.
pub fn function_jet_action(
    n: usize,
    order: u32,
    dir: usize,
    s: &LatticeVector,
    m: &LatticeVector,
    alpha: &MultiIndex,
) -> Result<WeightVector> {
    if alpha.degree() > order {
        return Err(Error::InvalidInput(format!(
            "jet index {alpha} exceeds order {order}"
        )));
    }
    let alphas = enumerate_multiindices(n, order);
    let pos: BTreeMap<MultiIndex, usize> = alphas
        .iter()
        .enumerate()
        .map(|(i, a)| (a.clone(), i))
        .collect();
    let mut v = vec![Rat::zero(); alphas.len()];
    v[pos[alpha]] += Rat::from_integer(m.entry(dir).into());
    let a_dir = alpha.entry(dir);
    if a_dir > 0 {
        let base = alpha
            .checked_sub(&MultiIndex::unit(n, dir))
            .expect("α_dir ≥ 1");
        for beta in enumerate_multiindices(n, order - alpha.degree() + 1) {
            if beta.is_zero() {
                continue;
            }
            let target = base.add(&beta);
            let Some(&tpos) = pos.get(&target) else {
                continue;
            };
            v[tpos] +=
                Rat::from_integer(s.pow(&beta) * a_dir) / Rat::from_integer(beta.factorial());
        }
    }
    Ok(WeightVector { m: m.add(s), v })
}

#[derive(Serialize, Deserialize)]
struct JetSpecWire {
    n: usize,
    #[serde(rename = "N")]
    order: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    tensor_type: Option<TensorTypeWire>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fiber_rep: Option<FiniteRep>,
}

#[derive(Serialize, Deserialize)]
struct TensorTypeWire {
    s: usize,
    k: usize,
}

impl Serialize for JetModuleSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        JetSpecWire {
            n: self.n,
            order: self.order,
            tensor_type: None,
            fiber_rep: Some(self.fiber.clone()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for JetModuleSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = JetSpecWire::deserialize(d)?;
        let fiber = match (wire.tensor_type, wire.fiber_rep) {
            (Some(t), None) => tensor_fiber(wire.n, t.s, t.k),
            (None, Some(f)) => f,
            (None, None) => FiniteRep::trivial_gln(wire.n),
            (Some(_), Some(_)) => {
                return Err(serde::de::Error::custom(
                    "give either a tensor type or an explicit fiber, not both",
                ))
            }
        };
        JetModuleSpec::new(wire.n, wire.order, fiber).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn degree_zero_action_is_multiplication() {
        // s = 0: only the m_dir term survives
        let spec = JetModuleSpec::functions(1, 2);
        let m = LatticeVector::new(vec![4]);
        for alpha in spec.alphas().to_vec() {
            let out = spec
                .jet_action(1, &LatticeVector::zero(1), &m, &alpha, 0)
                .unwrap();
            assert_eq!(out.m, m);
            let idx = spec.index(&alpha, 0).unwrap();
            for (i, c) in out.v.iter().enumerate() {
                assert_eq!(c, &rat_int(if i == idx { 4 } else { 0 }));
            }
        }
    }

    #[test]
    fn order_zero_truncates_everything() {
        let spec = JetModuleSpec::functions(1, 0);
        let out = spec
            .jet_action(
                1,
                &LatticeVector::new(vec![3]),
                &LatticeVector::new(vec![2]),
                &MultiIndex::zero(1),
                0,
            )
            .unwrap();
        assert_eq!(out.v, vec![rat_int(2)]);
    }

    #[test]
    fn rank_one_first_order_coefficients() {
        // order 1, trivial fiber, action on w^(1): diagonal s from β=(1)
        let spec = JetModuleSpec::functions(1, 1);
        let out = spec
            .jet_action(
                1,
                &LatticeVector::new(vec![1]),
                &LatticeVector::zero(1),
                &MultiIndex::new(vec![1]),
                0,
            )
            .unwrap();
        // coefficient table matches the tensor-module action
        assert_eq!(out.v, vec![rat_int(0), rat_int(1)]);
        // overly deep jet index is a domain error
        assert!(spec
            .jet_action(
                1,
                &LatticeVector::zero(1),
                &LatticeVector::zero(1),
                &MultiIndex::new(vec![2]),
                0
            )
            .is_err());
    }

    #[test]
    fn function_jets_agree_with_trivial_fiber() {
        for (n, order) in [(1usize, 2u32), (2, 1)] {
            let spec = JetModuleSpec::functions(n, order);
            for dir in 1..=n {
                for s in lattice_window(n, 2) {
                    for m in [LatticeVector::zero(n), LatticeVector::unit(n, 1)] {
                        for alpha in spec.alphas().to_vec() {
                            let a = spec.jet_action(dir, &s, &m, &alpha, 0).unwrap();
                            let b = function_jet_action(n, order, dir, &s, &m, &alpha).unwrap();
                            assert_eq!(a, b, "n={n} N={order} dir={dir} s={s} α={alpha}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn two_dim_lowering_term_vanishes_off_direction() {
        // n=2, N=1, s=(1,0), α=(0,1): the lowering term for dir=1 needs α₁ ≥ 1
        let spec = JetModuleSpec::functions(2, 1);
        let out = spec
            .jet_action(
                1,
                &LatticeVector::new(vec![1, 0]),
                &LatticeVector::zero(2),
                &MultiIndex::new(vec![0, 1]),
                0,
            )
            .unwrap();
        // no way back down to w^(0,0); only m-term (zero here) could hit (0,1)
        let low = spec.index(&MultiIndex::zero(2), 0).unwrap();
        assert!(out.v[low].is_zero());
        assert!(out.v.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn iso_with_tensor_module_small_cases() {
        for spec in [
            JetModuleSpec::functions(1, 1),
            JetModuleSpec::functions(1, 3),
            JetModuleSpec::new(1, 2, crate::rep::gln_natural(1)).unwrap(),
            JetModuleSpec::new(2, 1, crate::rep::gln_natural(2)).unwrap(),
        ] {
            let report = spec.iso_check(2).unwrap();
            assert!(report.passed(), "{}×order-{}", spec.n(), spec.order());
        }
    }

    #[test]
    fn unscaled_table_differs_without_rescaling() {
        // with ω a stand-in ≠ 1 the v-basis table disagrees with the module
        // table as soon as second-order lowering terms appear
        let spec = JetModuleSpec::functions(1, 2);
        let module = spec.to_module().unwrap();
        let s = LatticeVector::new(vec![2]);
        let zero = LatticeVector::zero(1);
        let scaled = spec.action_matrix(1, &s, &zero).unwrap();
        let unscaled = spec
            .action_matrix_unscaled(1, &s, &zero, &rat_int(2))
            .unwrap();
        let algebraic = module.d_at(1, &s).unwrap();
        assert_eq!(scaled, algebraic);
        assert_ne!(unscaled, algebraic);
        // ω = 1 collapses back to the rescaled table
        assert_eq!(
            spec.action_matrix_unscaled(1, &s, &zero, &rat_int(1))
                .unwrap(),
            scaled
        );
        // a fractional stand-in exhibits the same mismatch
        let unscaled_frac = spec
            .action_matrix_unscaled(1, &s, &zero, &rat(1, 3))
            .unwrap();
        assert_ne!(unscaled_frac, algebraic);
    }

    #[test]
    fn filtration_small_cases() {
        // ℓ = N: zero submodule, quotient is everything
        let spec = JetModuleSpec::functions(1, 2);
        let r = spec.filtration_check(2, 2).unwrap();
        assert!(r.submodule_basis.is_empty());
        assert!(r.passed());
        // n=1, N=2, ℓ=0: span{w^(1), w^(2)} invariant, quotient ≅ functions
        let r = spec.filtration_check(0, 2).unwrap();
        assert_eq!(r.submodule_basis.len(), 2);
        assert!(r.passed());
        // ℓ > N is a domain error
        assert!(spec.filtration_check(3, 1).is_err());
    }

    #[test]
    fn jet_spec_serde() {
        let js = r#"{"n":2,"N":1,"tensor_type":{"s":1,"k":0}}"#;
        let spec: JetModuleSpec = serde_json::from_str(js).unwrap();
        assert_eq!(spec.fiber_dim(), 2);
        assert_eq!(spec.jet_dim(), 6);
        let round = serde_json::to_string(&spec).unwrap();
        let back: JetModuleSpec = serde_json::from_str(&round).unwrap();
        assert_eq!(back.jet_dim(), spec.jet_dim());
    }
}
