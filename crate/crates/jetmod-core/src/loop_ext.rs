//! Modules over the semidirect product of vector fields on the torus with a
//! multi-loop algebra: functions ⊗ ġ for a finite-dimensional ġ.
//!
//! The finite-dimensional side pairs a representation of the positive
//! derivation algebra with loop generators ρ(z^β g); the relations tying the
//! two together are checked exhaustively on a degree window. The module side
//! adds one operator polynomial per ġ basis element, g(s) = Σ_β (s^β/β!)
//! ρ(z^β g), acting by (e^s g)(e^m ⊗ v) = e^{m+s} g(s) v.

use crate::category::{CategoryJModule, WeightCoset, WeightVector};
use crate::error::{Error, Result};
use crate::lie::{BasisSymbol, FiniteLieAlgebra};
use crate::matpoly::MatrixPoly;
use crate::matrix::RatMatrix;
use crate::multiindex::{enumerate_multiindices, lattice_window, LatticeVector, MultiIndex};
use crate::polyfit::OperatorFamilyWindow;
use crate::rep::{inflate_gln_to_wnplus, AlgebraTag, FiniteRep, GdotRep, GeneratorWire};
use crate::report::CheckReport;
use crate::scalar::Rat;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A finite-dimensional module for the semidirect product of the positive
/// derivation algebra with polynomials ⊗ ġ.
#[derive(Debug, Clone, PartialEq)]
pub struct GPlusRep {
    gdot: FiniteLieAlgebra,
    wnplus: FiniteRep,
    loops: BTreeMap<(MultiIndex, usize), RatMatrix>,
}

impl GPlusRep {
    pub fn new(gdot: FiniteLieAlgebra, wnplus: FiniteRep) -> Result<Self> {
        if wnplus.algebra() != AlgebraTag::WnPlus {
            return Err(Error::MixedSymbols(
                "the derivation part must be a module over the positive algebra".into(),
            ));
        }
        Ok(GPlusRep {
            gdot,
            wnplus,
            loops: BTreeMap::new(),
        })
    }

    /// Declare ρ(z^β g) = m.
    pub fn set_loop_generator(&mut self, beta: MultiIndex, g: usize, m: RatMatrix) -> Result<()> {
        if g >= self.gdot.dim() {
            return Err(Error::InvalidInput(format!("ġ index {g} out of range")));
        }
        if beta.len() != self.n() {
            return Err(Error::DimensionMismatch("loop exponent arity".into()));
        }
        if (m.rows(), m.cols()) != (self.dim(), self.dim()) {
            return Err(Error::ShapeMismatch(format!(
                "loop generator (β={beta}, g={g})"
            )));
        }
        if m.is_zero() {
            self.loops.remove(&(beta, g));
        } else {
            self.loops.insert((beta, g), m);
        }
        Ok(())
    }

    /// Theorem-of-section-five construction from a commuting pair on one
    /// space: inflate the gl_n part, let ġ act through degree zero only.
    pub fn from_commuting_pair(gl_part: &FiniteRep, gdot_part: &GdotRep) -> Result<Self> {
        if gl_part.dim() != gdot_part.dim {
            return Err(Error::DimensionMismatch(
                "the two actions must share one space".into(),
            ));
        }
        for (sym, m) in gl_part.support() {
            for (idx, g) in gdot_part.matrices.iter().enumerate() {
                if !m.commutator(g).is_zero() {
                    return Err(Error::InvalidInput(format!(
                        "actions do not commute: {sym} against g{idx}"
                    )));
                }
            }
        }
        let mut out = GPlusRep::new(gdot_part.algebra.clone(), inflate_gln_to_wnplus(gl_part)?)?;
        let n = gl_part.n();
        for (idx, g) in gdot_part.matrices.iter().enumerate() {
            out.set_loop_generator(MultiIndex::zero(n), idx, g.clone())?;
        }
        Ok(out)
    }

    /// Put a gl_n module and a ġ module on the product space, gl_n on the
    /// left factor and ġ on the right, giving a commuting pair.
    pub fn product_pair(gl: &FiniteRep, gw: &GdotRep) -> (FiniteRep, GdotRep) {
        let id_g = RatMatrix::identity(gw.dim);
        let id_v = RatMatrix::identity(gl.dim());
        let mut gl_prod = FiniteRep::new(AlgebraTag::Gln, gl.n(), gl.dim() * gw.dim);
        for (sym, m) in gl.support() {
            gl_prod
                .set_generator(sym.clone(), m.kronecker(&id_g))
                .expect("shapes agree by construction");
        }
        let gdot_prod = GdotRep::new(
            gw.algebra.clone(),
            gw.matrices.iter().map(|m| id_v.kronecker(m)).collect(),
        )
        .expect("tensoring with the identity preserves the brackets");
        (gl_prod, gdot_prod)
    }

    pub fn n(&self) -> usize {
        self.wnplus.n()
    }

    pub fn dim(&self) -> usize {
        self.wnplus.dim()
    }

    pub fn gdot(&self) -> &FiniteLieAlgebra {
        &self.gdot
    }

    pub fn wnplus(&self) -> &FiniteRep {
        &self.wnplus
    }

    pub fn loop_support(&self) -> impl Iterator<Item = (&(MultiIndex, usize), &RatMatrix)> {
        self.loops.iter()
    }

    pub fn loop_matrix(&self, beta: &MultiIndex, g: usize) -> RatMatrix {
        self.loops
            .get(&(beta.clone(), g))
            .cloned()
            .unwrap_or_else(|| RatMatrix::zeros(self.dim(), self.dim()))
    }

    /// The two families of expansion relations, checked on a degree window
    /// wide enough to cover every potentially nonzero instance:
    /// `[g^(α), h^(β)] = [g,h]^(α+β)` and `[D_j^(α), g^(β)] = β_j g^(α+β−ε_j)`.
    pub fn check_54_55(&self) -> CheckReport {
        let n = self.n();
        let lmax = self
            .loops
            .keys()
            .map(|(b, _)| b.degree())
            .max()
            .unwrap_or(0);
        let wmax = self
            .wnplus
            .support()
            .map(|(sym, _)| match sym {
                BasisSymbol::WnPlus { alpha, .. } => alpha.degree(),
                _ => 0,
            })
            .max()
            .unwrap_or(1);
        let mut report = CheckReport::new("loop-relations");
        // [g^(α), h^(β)] = Σ_c c^c_{gh} ρ(z^{α+β} g_c)
        let loop_exps = enumerate_multiindices(n, lmax);
        for a in &loop_exps {
            for b in &loop_exps {
                for ga in 0..self.gdot.dim() {
                    for gb in 0..self.gdot.dim() {
                        let lhs = self.loop_matrix(a, ga).commutator(&self.loop_matrix(b, gb));
                        let mut rhs = RatMatrix::zeros(self.dim(), self.dim());
                        let sum = a.add(b);
                        for c in 0..self.gdot.dim() {
                            let coeff = self.gdot.bracket_coeff(ga, gb, c);
                            if !coeff.is_zero() {
                                rhs = &rhs + &self.loop_matrix(&sum, c).scale(coeff);
                            }
                        }
                        report.tick();
                        if lhs != rhs {
                            report.record(
                                format!("(z^{a}⊗g{ga}, z^{b}⊗g{gb})"),
                                "loop–loop relation fails",
                            );
                        }
                    }
                }
            }
        }
        // [D_j^(α), g^(β)] = β_j g^(α+β−ε_j)
        for alpha in enumerate_multiindices(n, wmax.max(lmax + 1)) {
            if alpha.is_zero() {
                continue;
            }
            for j in 1..=n {
                let d = self
                    .wnplus
                    .matrix_of(&BasisSymbol::wn_plus(j, alpha.clone()));
                for beta in &loop_exps {
                    for g in 0..self.gdot.dim() {
                        let lhs = d.commutator(&self.loop_matrix(beta, g));
                        let bj = beta.entry(j);
                        let rhs = if bj > 0 {
                            let gamma = alpha
                                .add(beta)
                                .checked_sub(&MultiIndex::unit(n, j))
                                .expect("β_j ≥ 1");
                            self.loop_matrix(&gamma, g)
                                .scale(&Rat::from_integer((bj as i64).into()))
                        } else {
                            RatMatrix::zeros(self.dim(), self.dim())
                        };
                        report.tick();
                        if lhs != rhs {
                            report.record(
                                format!("(z^{alpha}∂_{j}, z^{beta}⊗g{g})"),
                                "mixed relation fails",
                            );
                        }
                    }
                }
            }
        }
        report
    }

    /// For modules coming from the irreducible construction, the whole
    /// higher-degree part must act as zero: ρ(z^α ∂_j) = 0 for |α| > 1 and
    /// ρ(z^β g) = 0 for |β| ≥ 1.
    pub fn gpp_annihilation_check(&self) -> CheckReport {
        let mut report = CheckReport::new("ideal-annihilation");
        for (sym, _) in self.wnplus.support() {
            let BasisSymbol::WnPlus { alpha, .. } = sym else {
                continue;
            };
            report.tick();
            if alpha.degree() > 1 {
                report.record(sym.to_string(), "acts nonzero though |α| > 1");
            }
        }
        for (beta, g) in self.loops.keys() {
            report.tick();
            if beta.degree() >= 1 {
                report.record(format!("z^{beta}⊗g{g}"), "acts nonzero though |β| ≥ 1");
            }
        }
        report
    }
}

/// A weight module for the semidirect product: the vector-field part plus
/// one operator polynomial per ġ basis element.
#[derive(Debug, Clone)]
pub struct GModule {
    jmod: CategoryJModule,
    gplus: GPlusRep,
    gpoly: Vec<MatrixPoly>,
}

impl GModule {
    /// Builds the module and validates the relation families on the way:
    /// first the loop relations, then the representation property of the
    /// derivation part (inside the module construction).
    pub fn from_gplus_rep(lambda: WeightCoset, rep: GPlusRep) -> Result<Self> {
        let relations = rep.check_54_55();
        if !relations.passed() {
            return Err(Error::NotARepresentation(format!(
                "loop relations fail at {}",
                relations.violations[0].at
            )));
        }
        let jmod = CategoryJModule::from_wnplus_rep(lambda, rep.wnplus.clone())?;
        let gpoly = build_gpoly(&rep);
        Ok(GModule {
            jmod,
            gplus: rep,
            gpoly,
        })
    }

    /// No validation; for negative controls.
    pub fn from_raw_parts(lambda: WeightCoset, rep: GPlusRep, gpoly: Vec<MatrixPoly>) -> Self {
        let jmod = CategoryJModule::from_wnplus_rep_unchecked(lambda, rep.wnplus.clone());
        GModule {
            jmod,
            gplus: rep,
            gpoly,
        }
    }

    pub fn module(&self) -> &CategoryJModule {
        &self.jmod
    }

    pub fn gplus(&self) -> &GPlusRep {
        &self.gplus
    }

    pub fn n(&self) -> usize {
        self.jmod.n()
    }

    pub fn dim_u(&self) -> usize {
        self.jmod.dim_u()
    }

    pub fn gpoly(&self, g: usize) -> &MatrixPoly {
        &self.gpoly[g]
    }

    pub fn g_at(&self, g: usize, s: &LatticeVector) -> Result<RatMatrix> {
        self.gpoly[g].evaluate(s)
    }

    /// (e^s g)(e^m ⊗ v) = e^{m+s} g(s) v, through the stored polynomial.
    pub fn act_loop(&self, g: usize, s: &LatticeVector, w: &WeightVector) -> Result<WeightVector> {
        let mat = self.g_at(g, s)?;
        Ok(WeightVector {
            m: w.m.add(s),
            v: mat.mul_vec(&w.v),
        })
    }

    /// The same action summed directly from the loop generators.
    pub fn act_loop_raw(&self, g: usize, s: &LatticeVector, w: &WeightVector) -> WeightVector {
        WeightVector {
            m: w.m.add(s),
            v: self.raw_loop_matrix(g, s).mul_vec(&w.v),
        }
    }

    fn raw_loop_matrix(&self, g: usize, s: &LatticeVector) -> RatMatrix {
        let mut mat = RatMatrix::zeros(self.dim_u(), self.dim_u());
        for ((beta, gi), m) in self.gplus.loop_support() {
            if *gi != g {
                continue;
            }
            let c = Rat::from_integer(s.pow(beta)) / Rat::from_integer(beta.factorial());
            if !c.is_zero() {
                mat = &mat + &m.scale(&c);
            }
        }
        mat
    }

    /// The loop action commutes with multiplication by functions, with the
    /// two sides computed along the polynomial and the raw generator routes.
    pub fn j4_check(&self, radius: i64) -> CheckReport {
        let mut report = CheckReport::new("loop-function-compat");
        let dim = self.dim_u();
        for g in 0..self.gplus.gdot.dim() {
            for s in lattice_window(self.n(), radius) {
                report.tick();
                let poly_route = match self.g_at(g, &s) {
                    Ok(m) => m,
                    Err(e) => {
                        report.record(format!("g{g}({s})"), e.to_string());
                        continue;
                    }
                };
                if poly_route != self.raw_loop_matrix(g, &s) {
                    report.record(
                        format!("g{g}({s})"),
                        "loop polynomial disagrees with the generator route",
                    );
                    continue;
                }
                // degree bookkeeping through the concrete actions
                let mprime = LatticeVector::unit(self.n(), 1);
                for i in 0..dim {
                    let w = WeightVector::basis(dim, LatticeVector::zero(self.n()), i);
                    let lhs = self
                        .act_loop(g, &s, &self.jmod.act_function(&mprime, &w))
                        .expect("shapes agree");
                    let rhs = self
                        .jmod
                        .act_function(&mprime, &self.act_loop_raw(g, &s, &w));
                    if lhs != rhs {
                        report.record(format!("g{g}({s}) spot"), "loop action fails to commute");
                    }
                }
            }
        }
        report
    }

    /// [D_j(s), g(m)] = m_j (g(s+m) − g(m)) on a window.
    pub fn check_53(&self, radius: i64) -> CheckReport {
        let mut report = CheckReport::new("mixed-commutator");
        let window = lattice_window(self.n(), radius);
        for j in 1..=self.n() {
            for g in 0..self.gplus.gdot.dim() {
                for s in &window {
                    for m in &window {
                        let (Ok(d), Ok(gm), Ok(gsm)) = (
                            self.jmod.d_at(j, s),
                            self.g_at(g, m),
                            self.g_at(g, &s.add(m)),
                        ) else {
                            report.record(format!("(d_{j}({s}), g{g}({m}))"), "evaluation failed");
                            continue;
                        };
                        let lhs = d.commutator(&gm);
                        let rhs = (&gsm - &gm).scale(&Rat::from_integer(m.entry(j).into()));
                        report.tick();
                        if lhs != rhs {
                            report.record(
                                format!("(d_{j}({s}), g{g}({m}))"),
                                "mixed commutator fails",
                            );
                        }
                    }
                }
            }
        }
        report
    }

    /// Action of the semidirect bracket `[d_j(s), e^m ⊗ g] = m_j e^{s+m} ⊗ g`
    /// versus the commutator of the two actions, over representative weights.
    pub fn mixed_bracket_compat(&self, radius: i64) -> CheckReport {
        let mut report = CheckReport::new("mixed-bracket-compat");
        let window = lattice_window(self.n(), radius);
        let id = RatMatrix::identity(self.dim_u());
        let mut weights = vec![LatticeVector::zero(self.n())];
        for j in 1..=self.n() {
            weights.push(LatticeVector::unit(self.n(), j));
        }
        for j in 1..=self.n() {
            for g in 0..self.gplus.gdot.dim() {
                for s in &window {
                    for m in &window {
                        let (Ok(ds), Ok(gm), Ok(gsm)) = (
                            self.jmod.d_at(j, s),
                            self.g_at(g, m),
                            self.g_at(g, &s.add(m)),
                        ) else {
                            report.record("evaluation", "failed");
                            continue;
                        };
                        for mu in &weights {
                            // d on weight mu+m after g, minus g after d on mu
                            let a = &ds + &id.scale(&Rat::from_integer(mu.add(m).entry(j).into()));
                            let b = &ds + &id.scale(&Rat::from_integer(mu.entry(j).into()));
                            let lhs = &(&a * &gm) - &(&gm * &b);
                            let rhs = gsm.scale(&Rat::from_integer(m.entry(j).into()));
                            report.tick();
                            if lhs != rhs {
                                report.record(
                                    format!("(j,g,s,m,μ) = ({j},{g},{s},{m},{mu})"),
                                    "mixed bracket compatibility fails",
                                );
                            }
                        }
                    }
                }
            }
        }
        report
    }

    /// Sample the loop family g(s) through the action.
    pub fn extract_g(&self, g: usize, points: &[LatticeVector]) -> Result<OperatorFamilyWindow> {
        let dim = self.dim_u();
        let mut out = OperatorFamilyWindow::new(self.n(), dim);
        for s in points {
            let mut mat = RatMatrix::zeros(dim, dim);
            for col in 0..dim {
                let w = WeightVector::basis(dim, LatticeVector::zero(self.n()), col);
                let img = self.act_loop(g, s, &w)?;
                for row in 0..dim {
                    mat.set(row, col, img.v[row].clone());
                }
            }
            out.insert(s.clone(), mat)?;
        }
        Ok(out)
    }

    /// Coefficient extraction: β!·coeff_β(gpoly), the exact inverse of the
    /// construction.
    pub fn expand_g(&self, g: usize) -> Vec<(MultiIndex, RatMatrix)> {
        self.gpoly[g]
            .terms()
            .map(|(beta, m)| (beta.clone(), m.scale(&Rat::from_integer(beta.factorial()))))
            .collect()
    }
}

fn build_gpoly(rep: &GPlusRep) -> Vec<MatrixPoly> {
    let n = rep.n();
    let dim = rep.dim();
    let mut gpoly = vec![MatrixPoly::zero(n, dim, dim); rep.gdot.dim()];
    for ((beta, g), m) in rep.loop_support() {
        let inv_fact = Rat::from_integer(1.into()) / Rat::from_integer(beta.factorial());
        gpoly[*g].add_term(beta.clone(), m.scale(&inv_fact));
    }
    gpoly
}

// ---- serde: the g⁺ wire format extends the representation format ----

#[derive(Serialize, Deserialize)]
struct GPlusWire {
    algebra: AlgebraTag,
    n: usize,
    dim: usize,
    generators: Vec<GeneratorWire>,
    g_algebra: FiniteLieAlgebra,
    loop_generators: Vec<LoopWire>,
}

#[derive(Serialize, Deserialize)]
struct LoopWire {
    beta: MultiIndex,
    g: usize,
    matrix: RatMatrix,
}

impl Serialize for GPlusRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GPlusWire {
            algebra: AlgebraTag::GPlus,
            n: self.n(),
            dim: self.dim(),
            generators: self
                .wnplus
                .support()
                .map(|(sym, m)| GeneratorWire {
                    symbol: sym.clone(),
                    matrix: m.clone(),
                })
                .collect(),
            g_algebra: self.gdot.clone(),
            loop_generators: self
                .loops
                .iter()
                .map(|((beta, g), m)| LoopWire {
                    beta: beta.clone(),
                    g: *g,
                    matrix: m.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GPlusRep {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = GPlusWire::deserialize(d)?;
        if wire.algebra != AlgebraTag::GPlus {
            return Err(serde::de::Error::custom("expected a g_plus representation"));
        }
        let mut wnplus = FiniteRep::new(AlgebraTag::WnPlus, wire.n, wire.dim);
        for g in wire.generators {
            wnplus
                .set_generator(g.symbol, g.matrix)
                .map_err(serde::de::Error::custom)?;
        }
        let mut rep = GPlusRep::new(wire.g_algebra, wnplus).map_err(serde::de::Error::custom)?;
        for l in wire.loop_generators {
            rep.set_loop_generator(l.beta, l.g, l.matrix)
                .map_err(serde::de::Error::custom)?;
        }
        Ok(rep)
    }
}

#[derive(Serialize, Deserialize)]
struct GModuleWire {
    n: usize,
    lambda: WeightCoset,
    rep: GPlusRep,
}

impl Serialize for GModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GModuleWire {
            n: self.n(),
            lambda: self.jmod.lambda().clone(),
            rep: self.gplus.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = GModuleWire::deserialize(d)?;
        let gpoly = build_gpoly(&wire.rep);
        Ok(GModule::from_raw_parts(wire.lambda, wire.rep, gpoly))
    }
}
