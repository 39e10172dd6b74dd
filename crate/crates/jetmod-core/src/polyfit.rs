//! Difference derivatives, Newton interpolation, and the detector that
//! certifies polynomial dependence of a sampled operator family on its
//! Fourier degree, first in one variable and then in several via the
//! commutator-chain reconstruction.

use crate::error::{Error, Result};
use crate::matpoly::MatrixPoly;
use crate::matrix::RatMatrix;
use crate::multiindex::{multiindex_binomial, LatticeVector, MultiIndex};
use crate::report::CheckReport;
use crate::scalar::{rat_int, Rat};
use crate::unipoly::RatPoly;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A family s ↦ D(s) ∈ End U sampled on a finite set of lattice points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorFamilyWindow {
    vars: usize,
    dim: usize,
    samples: BTreeMap<LatticeVector, RatMatrix>,
}

impl OperatorFamilyWindow {
    pub fn new(vars: usize, dim: usize) -> Self {
        OperatorFamilyWindow {
            vars,
            dim,
            samples: BTreeMap::new(),
        }
    }

    /// Sample a one-variable family on the integer interval [lo, hi].
    pub fn from_interval(
        dim: usize,
        lo: i64,
        hi: i64,
        mut f: impl FnMut(i64) -> RatMatrix,
    ) -> Self {
        let mut w = OperatorFamilyWindow::new(1, dim);
        for s in lo..=hi {
            w.insert(LatticeVector::new(vec![s]), f(s))
                .expect("sampling closure produced a consistent shape");
        }
        w
    }

    pub fn insert(&mut self, s: LatticeVector, m: RatMatrix) -> Result<()> {
        if s.len() != self.vars {
            return Err(Error::DimensionMismatch(format!(
                "sample point {s} has the wrong arity"
            )));
        }
        if (m.rows(), m.cols()) != (self.dim, self.dim) {
            return Err(Error::ShapeMismatch(format!("sample at {s}")));
        }
        self.samples.insert(s, m);
        Ok(())
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, s: &LatticeVector) -> Option<&RatMatrix> {
        self.samples.get(s)
    }

    pub fn points(&self) -> impl Iterator<Item = (&LatticeVector, &RatMatrix)> {
        self.samples.iter()
    }

    /// One-variable access with a missing-sample error.
    pub fn at(&self, s: i64) -> Result<&RatMatrix> {
        assert_eq!(self.vars, 1, "integer access is for one-variable families");
        self.samples
            .get(&LatticeVector::new(vec![s]))
            .ok_or_else(|| Error::MissingSample(format!("s = {s}")))
    }

    /// The interval [lo, hi] covered by a one-variable family, provided the
    /// samples are contiguous.
    pub fn interval(&self) -> Result<(i64, i64)> {
        assert_eq!(self.vars, 1);
        let points: Vec<i64> = self.samples.keys().map(|s| s.entry(1)).collect();
        let (Some(&lo), Some(&hi)) = (points.iter().min(), points.iter().max()) else {
            return Err(Error::WindowTooSmall("empty window".into()));
        };
        if points.len() as i64 != hi - lo + 1 {
            return Err(Error::WindowTooSmall(format!(
                "window [{lo}, {hi}] has gaps"
            )));
        }
        Ok((lo, hi))
    }
}

#[derive(Serialize, Deserialize)]
struct WindowWire {
    dim_u: usize,
    points: Vec<PointWire>,
}

#[derive(Serialize, Deserialize)]
struct PointWire {
    s: LatticeVector,
    matrix: RatMatrix,
}

impl Serialize for OperatorFamilyWindow {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WindowWire {
            dim_u: self.dim,
            points: self
                .samples
                .iter()
                .map(|(p, m)| PointWire {
                    s: p.clone(),
                    matrix: m.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OperatorFamilyWindow {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = WindowWire::deserialize(d)?;
        let vars =
            wire.points.first().map(|p| p.s.len()).ok_or_else(|| {
                serde::de::Error::custom("family window needs at least one point")
            })?;
        let mut w = OperatorFamilyWindow::new(vars, wire.dim_u);
        for p in wire.points {
            w.insert(p.s, p.matrix).map_err(serde::de::Error::custom)?;
        }
        Ok(w)
    }
}

fn binom(m: u32, k: u32) -> BigInt {
    multiindex_binomial(&MultiIndex::new(vec![m]), &MultiIndex::new(vec![k]))
        .expect("k ≤ m by construction")
}

/// ∂^m f(s) = Σ_k (−1)^{m−k} binom(m,k) f(s+k); order 1 is f(s+1) − f(s).
pub fn difference_derivative(f: &OperatorFamilyWindow, order: u32, at: i64) -> Result<RatMatrix> {
    let mut out = RatMatrix::zeros(f.dim(), f.dim());
    for k in 0..=order {
        let sample = f.at(at + k as i64)?;
        let mut c = Rat::from_integer(binom(order, k));
        if (order - k) % 2 == 1 {
            c = -c;
        }
        out = &out + &sample.scale(&c);
    }
    Ok(out)
}

/// Newton forward interpolation through the samples at s, s+1, …, s+degree.
/// The result has degree ≤ `degree` and reproduces those samples exactly.
pub fn newton_interpolation(
    f: &OperatorFamilyWindow,
    start: i64,
    degree: u32,
) -> Result<MatrixPoly> {
    let dim = f.dim();
    let mut coeffs = vec![RatMatrix::zeros(dim, dim); degree as usize + 1];
    // basis polynomial Π_{i<k} (t − (start+i)), expanded as it grows
    let mut basis = RatPoly::one();
    let mut kfact = BigInt::one();
    for k in 0..=degree {
        if k > 0 {
            basis = basis.mul(&RatPoly::from_coeffs(vec![
                rat_int(-(start + k as i64 - 1)),
                Rat::one(),
            ]));
            kfact *= k;
        }
        let dk = difference_derivative(f, k, start)?;
        let lead = dk.scale(&(Rat::one() / Rat::from_integer(kfact.clone())));
        for (power, c) in basis.coeffs().iter().enumerate() {
            if !c.is_zero() {
                coeffs[power] = &coeffs[power] + &lead.scale(c);
            }
        }
    }
    Ok(MatrixPoly::from_univariate(coeffs))
}

/// Checks the two difference-derivative implications on the window: above
/// order `degree` the differences at `s` must vanish, and the interpolation
/// polynomial through s..s+degree must reproduce every windowed sample to the
/// right of s.
pub fn lemma3_check(f: &OperatorFamilyWindow, s: i64, degree: u32) -> Result<CheckReport> {
    let (lo, hi) = f.interval()?;
    if s < lo || s + degree as i64 > hi {
        return Err(Error::WindowTooSmall(format!(
            "need [{s}, {}] inside [{lo}, {hi}]",
            s + degree as i64
        )));
    }
    let mut report = CheckReport::new("difference-vanishing");
    for m in (degree + 1)..=((hi - s) as u32) {
        report.tick();
        if !difference_derivative(f, m, s)?.is_zero() {
            report.record(format!("∂^{m} at {s}"), "difference derivative ≠ 0");
        }
    }
    let g = newton_interpolation(f, s, degree)?;
    for r in s..=hi {
        report.tick();
        if &g.evaluate(&LatticeVector::new(vec![r]))? != f.at(r)? {
            report.record(format!("s = {r}"), "sample differs from the interpolant");
        }
    }
    Ok(report)
}

/// y_m = ∂^{m+1} f(−1) for every order the window supports.
pub fn build_y_family(f: &OperatorFamilyWindow) -> Result<Vec<RatMatrix>> {
    let (lo, hi) = f.interval()?;
    if lo > -1 || hi < 0 {
        return Err(Error::WindowTooSmall(
            "the eigenvector family needs samples from −1 upward".into(),
        ));
    }
    (0..=hi as u32)
        .map(|m| difference_derivative(f, m + 1, -1))
        .collect()
}

/// Outcome of `lemma4_check`: the commutator-relation precondition is
/// reported separately from the two eigenvector conclusions.
#[derive(Debug, Serialize)]
pub struct AdEigenvectorReport {
    pub relation: CheckReport,
    pub eigen: CheckReport,
    pub ladder: CheckReport,
}

impl AdEigenvectorReport {
    pub fn passed(&self) -> bool {
        self.relation.passed() && self.eigen.passed() && self.ladder.passed()
    }
}

/// Verifies, inside End U, that the difference derivatives y_m at −1 are
/// ad-eigenvectors of D(−1) with eigenvalue −m, and that they close into the
/// ladder `[y_k, y_m] = (m−k) y_{m+k}`. The sampled family must satisfy
/// `[D(s), D(m)] = (m−s) D(s+m) − m D(m) + s D(s)` on the window first.
pub fn lemma4_check(f: &OperatorFamilyWindow, max_order: u32) -> Result<AdEigenvectorReport> {
    let relation = eq42_check(f)?;
    let y = build_y_family(f)?;
    let d_minus_one = f.at(-1)?.clone();
    let mut eigen = CheckReport::new("ad-eigenvector");
    for m in 1..=max_order {
        let Some(ym1) = y.get(m as usize - 1) else {
            break;
        };
        eigen.tick();
        let lhs = d_minus_one.commutator(ym1);
        let rhs = ym1.scale(&rat_int(-(m as i64) + 1));
        if lhs != rhs {
            eigen.record(format!("m = {m}"), "ad D(−1) eigenvalue is not 1−m");
        }
    }
    let mut ladder = CheckReport::new("ladder");
    for k in 0..y.len() {
        for m in 0..y.len() {
            if k + m >= y.len() || (k + m) as u32 > max_order {
                continue;
            }
            ladder.tick();
            let lhs = y[k].commutator(&y[m]);
            let rhs = y[k + m].scale(&rat_int(m as i64 - k as i64));
            if lhs != rhs {
                ladder.record(format!("(k,m) = ({k},{m})"), "ladder relation fails");
            }
        }
    }
    Ok(AdEigenvectorReport {
        relation,
        eigen,
        ladder,
    })
}

/// The rank-one commutator relation on every windowed triple (s, m, s+m).
pub fn eq42_check(f: &OperatorFamilyWindow) -> Result<CheckReport> {
    let (lo, hi) = f.interval()?;
    let mut report = CheckReport::new("commutator-relation");
    for s in lo..=hi {
        for m in lo..=hi {
            if s + m < lo || s + m > hi {
                continue;
            }
            let ds = f.at(s)?;
            let dm = f.at(m)?;
            let dsm = f.at(s + m)?;
            let lhs = ds.commutator(dm);
            let rhs =
                &(&dsm.scale(&rat_int(m - s)) - &dm.scale(&rat_int(m))) + &ds.scale(&rat_int(s));
            report.tick();
            if lhs != rhs {
                report.record(format!("(s,m) = ({s},{m})"), "commutator relation fails");
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The family is reproduced exactly by the recovered polynomial on the
    /// whole window. The claim is literal: polynomial *on this window*.
    Polynomial,
    /// The windowed samples violate the commutator relation.
    PreconditionFailed,
    /// No vanishing tail of difference derivatives within the eigenvalue
    /// bound; the family cannot come from a module of this kind.
    NoVanishingTail,
    /// An interpolant exists but misses a windowed sample or a subsample
    /// cross-check.
    SampleMismatch,
}

/// Full record of a rank-one polynomiality detection. The verdict is a
/// statement about the sampled window recorded here, never an extrapolation.
#[derive(Debug, Serialize)]
pub struct DetectionReport {
    pub verdict: Verdict,
    pub window: (i64, i64),
    pub eq42: CheckReport,
    /// Least N with y_m = 0 for every windowed m ≥ N.
    pub vanishing_order: Option<u32>,
    /// (dim U)² − dim U + 1.
    pub eigenvalue_bound: usize,
    pub bound_honored: bool,
    pub recovered: Option<MatrixPoly>,
    pub samples_match: CheckReport,
    pub theta_checks: Vec<ThetaReport>,
}

impl DetectionReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Polynomial
    }
}

/// Cross-check of the recovered polynomial against a subsampled family.
#[derive(Debug, Serialize)]
pub struct ThetaReport {
    pub p: i64,
    /// Coefficient-wise equality of the two interpolants.
    pub polynomials_equal: bool,
    pub matches: CheckReport,
}

impl ThetaReport {
    pub fn passed(&self) -> bool {
        self.polynomials_equal && self.matches.passed()
    }
}

/// Rank-one detection pipeline.
///
/// The window must be a contiguous interval [−P, Q] with P ≥ 1 and
/// Q ≥ (dim U)² − dim U + 2. Steps: verify the commutator relation, build the
/// difference-derivative family at −1 and find its vanishing order within the
/// eigenvalue bound, interpolate, check the interpolant against every
/// windowed sample (negative arguments included), then cross-check through
/// the subsampled families for each p in `theta_ps`.
pub fn detect_polynomial_rank1(
    f: &OperatorFamilyWindow,
    theta_ps: &[i64],
) -> Result<DetectionReport> {
    let (lo, hi) = f.interval()?;
    let bound = f.dim() * f.dim() - f.dim() + 1;
    if lo > -1 {
        return Err(Error::WindowTooSmall("window must reach s = −1".into()));
    }
    if (hi as i128) < bound as i128 + 1 {
        return Err(Error::WindowTooSmall(format!(
            "right edge {hi} is below the required {}",
            bound + 1
        )));
    }
    let eq42 = eq42_check(f)?;
    let empty = CheckReport::new("interpolant-vs-samples");
    if !eq42.passed() {
        return Ok(DetectionReport {
            verdict: Verdict::PreconditionFailed,
            window: (lo, hi),
            eq42,
            vanishing_order: None,
            eigenvalue_bound: bound,
            bound_honored: false,
            recovered: None,
            samples_match: empty,
            theta_checks: Vec::new(),
        });
    }
    let y = build_y_family(f)?;
    let last_nonzero = y.iter().rposition(|m| !m.is_zero());
    let vanish = last_nonzero.map_or(0, |i| i + 1) as u32;
    if vanish as usize > bound {
        return Ok(DetectionReport {
            verdict: Verdict::NoVanishingTail,
            window: (lo, hi),
            eq42,
            vanishing_order: Some(vanish),
            eigenvalue_bound: bound,
            bound_honored: false,
            recovered: None,
            samples_match: empty,
            theta_checks: Vec::new(),
        });
    }
    let g = newton_interpolation(f, -1, vanish)?;
    let mut samples_match = CheckReport::new("interpolant-vs-samples");
    for s in lo..=hi {
        samples_match.tick();
        if &g.evaluate(&LatticeVector::new(vec![s]))? != f.at(s)? {
            samples_match.record(format!("s = {s}"), "recovered polynomial misses the sample");
        }
    }
    let mut theta_checks = Vec::new();
    for &p in theta_ps {
        theta_checks.push(theta_p_check(f, &g, p)?);
    }
    let ok = samples_match.passed() && theta_checks.iter().all(|t| t.passed());
    Ok(DetectionReport {
        verdict: if ok {
            Verdict::Polynomial
        } else {
            Verdict::SampleMismatch
        },
        window: (lo, hi),
        eq42,
        vanishing_order: Some(vanish),
        eigenvalue_bound: bound,
        bound_honored: true,
        recovered: Some(g),
        samples_match,
        theta_checks,
    })
}

/// Subsample the family at multiples of p, rescale by 1/p, interpolate with
/// the degree of `g`, and require the two polynomials to agree; in
/// particular this validates `g` at the negative argument −p.
pub fn theta_p_check(f: &OperatorFamilyWindow, g: &MatrixPoly, p: i64) -> Result<ThetaReport> {
    if p < 2 {
        return Err(Error::InvalidInput(format!(
            "subsampling stride must be at least 2, got {p}"
        )));
    }
    let (lo, hi) = f.interval()?;
    let degree = g.degree().max(0) as u32;
    let need_hi = p * (degree as i64 - 1).max(0);
    if lo > -p || hi < need_hi {
        return Err(Error::WindowTooSmall(format!(
            "p = {p} needs multiples from −{p} to {need_hi} in the window"
        )));
    }
    let inv_p = Rat::one() / rat_int(p);
    // rescaled subfamily C(k) = D(pk)/p on every windowed multiple
    let mut sub = OperatorFamilyWindow::new(1, f.dim());
    let mut ks = Vec::new();
    let mut k = -(lo.abs() / p);
    while k * p <= hi {
        let pk = k * p;
        if pk >= lo {
            sub.insert(LatticeVector::new(vec![k]), f.at(pk)?.scale(&inv_p))?;
            ks.push(k);
        }
        k += 1;
    }
    let g_sub = newton_interpolation(&sub, -1, degree)?;
    // reinflate: D(pk) = p·C(k), so ĝ(s) = p·g_sub(s/p) coefficient-wise
    let mut coeffs = Vec::with_capacity(degree as usize + 1);
    for power in 0..=degree {
        let c = g_sub.coeff_or_zero(&MultiIndex::new(vec![power]));
        let factor = rat_int(p) / rat_int(p).pow(power as i32);
        coeffs.push(c.scale(&factor));
    }
    let g_hat = MatrixPoly::from_univariate(coeffs);
    let mut matches = CheckReport::new("theta-subsample");
    for &k in &ks {
        let s = LatticeVector::new(vec![p * k]);
        matches.tick();
        if g_hat.evaluate(&s)? != g.evaluate(&s)? || &g.evaluate(&s)? != f.at(p * k)? {
            matches.record(format!("s = {}", p * k), "subsampled interpolant disagrees");
        }
    }
    Ok(ThetaReport {
        p,
        polynomials_equal: &g_hat == g,
        matches,
    })
}

/// Multivariate reconstruction along the commutator chain.
///
/// `sample(j, s)` must return D_j(s). Axis families are interpolated up to
/// `degree_bound` and validated on two extra points; the off-axis values are
/// then generated by the chain identities, starting from the single sample
/// D_t(1 − ε_t), and the variable shift s_k ↦ s_k − 1 is undone at the end.
pub fn detect_polynomial_rankn(
    n: usize,
    dim: usize,
    degree_bound: u32,
    target: usize,
    sample: &mut impl FnMut(usize, &LatticeVector) -> RatMatrix,
) -> Result<MatrixPoly> {
    assert!(target >= 1 && target <= n);
    // one-variable polynomials along each axis
    let mut axis = Vec::with_capacity(n);
    for j in 1..=n {
        let w = OperatorFamilyWindow::from_interval(dim, -1, degree_bound as i64 + 2, |s| {
            sample(j, &LatticeVector::scaled_unit(n, j, s))
        });
        let p = newton_interpolation(&w, -1, degree_bound)?;
        // the bound must be generous enough that two extra points confirm it
        for extra in [degree_bound as i64 + 1, degree_bound as i64 + 2] {
            if &p.evaluate(&LatticeVector::new(vec![extra]))? != w.at(extra)? {
                return Err(Error::InvalidInput(format!(
                    "axis {j} is not a polynomial of degree ≤ {degree_bound} on the sampled range"
                )));
            }
        }
        axis.push(p.embed_univariate(n, j));
    }
    // base: s_t·D_t(s_t, 1, …, 1) = s_t·p_t(s_t) − [p_t(s_t), D_t(1 − ε_t)]
    let mut ones_hole = vec![1i64; n];
    ones_hole[target - 1] = 0;
    let c = sample(target, &LatticeVector::new(ones_hole));
    let mut st_id = MatrixPoly::zero(n, dim, dim);
    st_id.add_term(MultiIndex::unit(n, target), RatMatrix::identity(dim));
    let p_t = &axis[target - 1];
    let rhs = st_id
        .mul(p_t)
        .sub(&p_t.commutator(&MatrixPoly::constant(n, c)));
    let mut current = rhs.div_var_exact(target).map_err(|_| {
        Error::InvalidInput("base identity has a nonzero constant term; not a module family".into())
    })?;
    // inductive steps over the remaining variables, ascending
    for k in 1..=n {
        if k == target {
            continue;
        }
        let p_k = &axis[k - 1];
        current = p_k.commutator(&current).add(&current);
    }
    // undo the substitution s_k = 1 + s_k' on every non-target variable
    let mut result = current;
    for k in 1..=n {
        if k != target {
            result = result.shift_var(k, &rat_int(-1));
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_family(f: impl Fn(i64) -> i64, lo: i64, hi: i64) -> OperatorFamilyWindow {
        OperatorFamilyWindow::from_interval(1, lo, hi, |s| RatMatrix::from_i64_rows(&[&[f(s)]]))
    }

    #[test]
    fn difference_derivative_examples() {
        // f(s) = s³: ∂f(2) = 27 − 8 = 19
        let f = scalar_family(|s| s * s * s, -2, 6);
        let d1 = difference_derivative(&f, 1, 2).unwrap();
        assert_eq!(d1, RatMatrix::from_i64_rows(&[&[19]]));
        // second difference of a linear family vanishes
        let lin = scalar_family(|s| 7 * s - 3, 0, 5);
        assert!(difference_derivative(&lin, 2, 0).unwrap().is_zero());
        assert!(difference_derivative(&lin, 3, 0).unwrap().is_zero());
        // ∂³ f at 0 for samples (0,1,8,27): −0 + 3·1 − 3·8 + 27 = 6
        let d3 = difference_derivative(&f, 3, 0).unwrap();
        assert_eq!(d3, RatMatrix::from_i64_rows(&[&[6]]));
        // missing sample is a domain error
        assert!(difference_derivative(&f, 3, 5).is_err());
    }

    #[test]
    fn newton_reproduces_and_detects_degree() {
        // two points: linear interpolation
        let f = scalar_family(|s| 4 * s + 1, 0, 1);
        let g = newton_interpolation(&f, 0, 1).unwrap();
        assert_eq!(g.degree(), 1);
        assert_eq!(
            g.evaluate(&LatticeVector::new(vec![10])).unwrap(),
            RatMatrix::from_i64_rows(&[&[41]])
        );
        // a degree-2 matrix family is recovered exactly by uniqueness
        let m = |s: i64| RatMatrix::from_i64_rows(&[&[s * s, s], &[0, 1 - s * s]]);
        let f = OperatorFamilyWindow::from_interval(2, 0, 2, m);
        let g = newton_interpolation(&f, 0, 2).unwrap();
        for s in [-3i64, 5, 11] {
            assert_eq!(g.evaluate(&LatticeVector::new(vec![s])).unwrap(), m(s));
        }
        // constant samples give the constant polynomial
        let c = scalar_family(|_| 9, -1, 4);
        let g = newton_interpolation(&c, -1, 0).unwrap();
        assert_eq!(g.degree(), 0);
    }

    #[test]
    fn high_differences_annihilate_low_degrees() {
        // ∂^{N+1} kills every polynomial of degree ≤ N (exhaustive N ≤ 5)
        let polys: [fn(i64) -> i64; 6] = [
            |_| 5,
            |s| 3 * s - 1,
            |s| s * s + 2 * s,
            |s| s * s * s - s,
            |s| s * s * s * s + 1,
            |s| s * s * s * s * s - 2 * s * s,
        ];
        for (deg, poly) in polys.iter().enumerate() {
            let f = scalar_family(*poly, -3, 9);
            for at in -3..=2 {
                let d = difference_derivative(&f, deg as u32 + 1, at).unwrap();
                assert!(d.is_zero(), "degree {deg} at {at}");
            }
        }
    }

    #[test]
    fn lemma3_report() {
        let zero = scalar_family(|_| 0, 0, 6);
        assert!(lemma3_check(&zero, 0, 0).unwrap().passed());
        let quad = scalar_family(|s| s * s - 4, -1, 7);
        assert!(lemma3_check(&quad, -1, 2).unwrap().passed());
        // corrupt one point: the mismatch is reported at that point
        let mut broken = quad.clone();
        broken
            .insert(
                LatticeVector::new(vec![6]),
                RatMatrix::from_i64_rows(&[&[999]]),
            )
            .unwrap();
        let report = lemma3_check(&broken, -1, 2).unwrap();
        assert!(!report.passed());
        assert!(report.violations.iter().any(|v| v.at == "s = 6"));
    }

    #[test]
    fn y_family_of_linear_family() {
        let a = RatMatrix::from_i64_rows(&[&[0, 1], &[2, 0]]);
        let f = OperatorFamilyWindow::from_interval(2, -2, 6, |s| a.scale(&rat_int(s)));
        let y = build_y_family(&f).unwrap();
        assert_eq!(y[0], a);
        assert!(y[1..].iter().all(|m| m.is_zero()));
        // constant family: every y vanishes
        let c = OperatorFamilyWindow::from_interval(2, -2, 6, |_| a.clone());
        assert!(build_y_family(&c).unwrap().iter().all(|m| m.is_zero()));
    }

    #[test]
    fn rankn_recovers_linear_and_constant_families() {
        // the linear family D_j(s) = Σ_p s_p E^p_j satisfies the chain
        // identities; here D_1(s) = s₁A + s₂B with A = E¹₁, B = E²₁
        let unit = |p: usize, q: usize| {
            let mut m = RatMatrix::zeros(2, 2);
            m.set(p - 1, q - 1, Rat::one());
            m
        };
        let mut sample = |j: usize, s: &LatticeVector| {
            &unit(1, j).scale(&rat_int(s.entry(1))) + &unit(2, j).scale(&rat_int(s.entry(2)))
        };
        for target in 1..=2usize {
            let p = detect_polynomial_rankn(2, 2, 2, target, &mut sample).unwrap();
            assert_eq!(p.degree(), 1);
            for s1 in -2..=2 {
                for s2 in -2..=2 {
                    let at = LatticeVector::new(vec![s1, s2]);
                    assert_eq!(p.evaluate(&at).unwrap(), sample(target, &at));
                }
            }
        }
        // constant family
        let a = RatMatrix::from_i64_rows(&[&[1, 0], &[0, 2]]);
        let mut constant = |_j: usize, _s: &LatticeVector| a.clone();
        let p = detect_polynomial_rankn(2, 2, 1, 1, &mut constant).unwrap();
        assert_eq!(p.degree(), 0);
        assert_eq!(p.evaluate(&LatticeVector::new(vec![7, -3])).unwrap(), a);
    }

    #[test]
    fn window_serde_roundtrip() {
        let f = scalar_family(|s| s * s, -2, 3);
        let js = serde_json::to_string(&f).unwrap();
        let back: OperatorFamilyWindow = serde_json::from_str(&js).unwrap();
        assert_eq!(back, f);
    }
}
