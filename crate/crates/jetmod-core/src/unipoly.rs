//! Univariate polynomials over the rationals, plus the exact linear-algebra
//! routines built on them: characteristic and minimal polynomials, rational
//! root extraction, and spectral idempotents of a single matrix.

use crate::matrix::{matrix_kernel, RatMatrix};
use crate::scalar::{rat_int, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A univariate polynomial, coefficients ascending; canonical form keeps the
/// last coefficient nonzero (the zero polynomial has no coefficients).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<Rat>,
}

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RatPoly {
            coeffs: vec![Rat::one()],
        }
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        let mut p = RatPoly { coeffs };
        p.normalize();
        p
    }

    /// The monic linear factor (t − r).
    pub fn linear_root(r: &Rat) -> Self {
        RatPoly {
            coeffs: vec![-r.clone(), Rat::one()],
        }
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut v = Rat::zero();
        for c in self.coeffs.iter().rev() {
            v = v * x + c;
        }
        v
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Rat::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] = out[i].clone() + c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] = out[i].clone() + c;
        }
        RatPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> RatPoly {
        RatPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a * b;
            }
        }
        RatPoly::from_coeffs(out)
    }

    /// Euclidean division: self = q·div + r with deg r < deg div.
    pub fn divmod(&self, div: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!div.is_zero(), "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let dn = div.coeffs.len();
        if rem.len() < dn {
            return (RatPoly::zero(), self.clone());
        }
        let lead = div.coeffs.last().unwrap().clone();
        let mut q = vec![Rat::zero(); rem.len() - dn + 1];
        for k in (0..q.len()).rev() {
            let c = &rem[k + dn - 1] / &lead;
            if c.is_zero() {
                continue;
            }
            q[k] = c.clone();
            for (i, d) in div.coeffs.iter().enumerate() {
                rem[k + i] = rem[k + i].clone() - &c * d;
            }
        }
        (RatPoly::from_coeffs(q), RatPoly::from_coeffs(rem))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        a.into_monic()
    }

    /// Extended gcd: returns (g, u, v) monic with u·self + v·other = g.
    pub fn ext_gcd(&self, other: &RatPoly) -> (RatPoly, RatPoly, RatPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut u0, mut u1) = (RatPoly::one(), RatPoly::zero());
        let (mut v0, mut v1) = (RatPoly::zero(), RatPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1);
            let u = u0.sub(&q.mul(&u1));
            let v = v0.sub(&q.mul(&v1));
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = u;
            v0 = v1;
            v1 = v;
        }
        if r0.is_zero() {
            return (RatPoly::zero(), RatPoly::zero(), RatPoly::zero());
        }
        let lead = r0.coeffs.last().unwrap().clone();
        let inv = Rat::one() / lead;
        (r0.scale(&inv), u0.scale(&inv), v0.scale(&inv))
    }

    pub fn into_monic(self) -> RatPoly {
        match self.coeffs.last() {
            None => self,
            Some(l) => {
                let inv = Rat::one() / l.clone();
                self.scale(&inv)
            }
        }
    }

    /// Evaluate at a square matrix (Horner).
    pub fn eval_matrix(&self, m: &RatMatrix) -> RatMatrix {
        assert!(m.is_square());
        let n = m.rows();
        let mut acc = RatMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * m) + &RatMatrix::scalar(n, c);
        }
        acc
    }
}

/// Characteristic polynomial det(tI − M) by the Faddeev–LeVerrier recursion.
pub fn char_poly(m: &RatMatrix) -> RatPoly {
    assert!(m.is_square());
    let n = m.rows();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut aux = RatMatrix::identity(n);
    for k in 1..=n {
        aux = m * &aux;
        let c = -(aux.trace() / rat_int(k as i64));
        coeffs[n - k] = c.clone();
        aux = &aux + &RatMatrix::scalar(n, &c);
    }
    RatPoly::from_coeffs(coeffs)
}

/// Minimal polynomial of a square matrix, found as the first linear
/// dependence among the powers I, M, M², …
pub fn min_poly(m: &RatMatrix) -> RatPoly {
    assert!(m.is_square());
    let n = m.rows();
    let mut powers: Vec<RatMatrix> = vec![RatMatrix::identity(n)];
    loop {
        let k = powers.len();
        let next = &powers[k - 1] * m;
        // rows of the system: one per matrix entry, columns are the powers
        // including the new one; a kernel vector with nonzero last entry is
        // the monic relation of least degree.
        let mut sys = RatMatrix::zeros(n * n, k + 1);
        for (col, p) in powers.iter().chain(std::iter::once(&next)).enumerate() {
            for r in 0..n {
                for c in 0..n {
                    sys.set(r * n + c, col, p.get(r, c).clone());
                }
            }
        }
        for v in matrix_kernel(&sys) {
            if !v[k].is_zero() {
                let inv = Rat::one() / v[k].clone();
                return RatPoly::from_coeffs(v.iter().map(|c| c * &inv).collect());
            }
        }
        powers.push(next);
        assert!(powers.len() <= n + 1, "minimal polynomial search ran away");
    }
}

/// All rational roots of `p` with multiplicities, or `None` when the integer
/// coefficients are too large to factor by trial division.
pub fn rational_roots(p: &RatPoly) -> Option<Vec<(Rat, usize)>> {
    if p.is_zero() {
        return Some(Vec::new());
    }
    // clear denominators to an integer polynomial
    let mut denlcm = BigInt::one();
    for c in p.coeffs() {
        denlcm = denlcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * &denlcm / c.denom())
        .collect();
    // strip powers of t
    let vanish = ints.iter().take_while(|c| c.is_zero()).count();
    let stripped = &ints[vanish..];
    let mut roots: Vec<(Rat, usize)> = Vec::new();
    if vanish > 0 {
        roots.push((Rat::zero(), vanish));
    }
    if stripped.len() > 1 {
        let a0 = stripped[0].abs();
        let lead = stripped.last().unwrap().abs();
        let num_divs = divisors(&a0)?;
        let den_divs = divisors(&lead)?;
        let mut candidates: Vec<Rat> = Vec::new();
        for nd in &num_divs {
            for dd in &den_divs {
                let c = Rat::new(nd.clone(), dd.clone());
                if !candidates.contains(&c) {
                    candidates.push(c);
                }
            }
        }
        let mut q = RatPoly::from_coeffs(
            stripped
                .iter()
                .map(|c| Rat::from_integer(c.clone()))
                .collect(),
        );
        for cand in candidates {
            for sign in [1i64, -1] {
                let r = &cand * rat_int(sign);
                let mut mult = 0usize;
                loop {
                    if q.degree().unwrap_or(0) == 0 {
                        break;
                    }
                    let (quot, rem) = q.divmod(&RatPoly::linear_root(&r));
                    if rem.is_zero() {
                        q = quot;
                        mult += 1;
                    } else {
                        break;
                    }
                }
                if mult > 0 {
                    roots.push((r, mult));
                }
            }
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Some(roots)
}

/// Positive divisors by trial division; gives up past a work cap so callers
/// can degrade to an "indeterminate" verdict instead of stalling.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    const CAP: u64 = 2_000_000;
    if n.is_zero() {
        // every integer divides 0; callers only hit this for the zero constant
        // term, which is handled by root-stripping above
        return Some(vec![BigInt::one()]);
    }
    let mut out = Vec::new();
    let mut i = BigInt::one();
    let mut steps = 0u64;
    while &i * &i <= *n {
        steps += 1;
        if steps > CAP {
            return None;
        }
        if (n % &i).is_zero() {
            out.push(i.clone());
            let j = n / &i;
            if j != i {
                out.push(j);
            }
        }
        i += 1;
    }
    out.sort();
    Some(out)
}

/// Spectral projection of `m` onto the generalized eigenspace of the rational
/// eigenvalue `r`, as a polynomial in `m`. Returns `None` when the minimal
/// polynomial is a pure power of (t − r), in which case no splitting exists.
pub fn spectral_idempotent(m: &RatMatrix, minimal: &RatPoly, r: &Rat) -> Option<RatMatrix> {
    let lin = RatPoly::linear_root(r);
    let mut q = minimal.clone();
    let mut power = RatPoly::one();
    loop {
        let (quot, rem) = q.divmod(&lin);
        if rem.is_zero() {
            q = quot;
            power = power.mul(&lin);
        } else {
            break;
        }
    }
    if power.degree() == Some(0) {
        return None; // r is not a root
    }
    if q.degree() == Some(0) {
        return None; // minimal polynomial is (t−r)^k: scalar plus nilpotent
    }
    // e ≡ 1 mod (t−r)^k and e ≡ 0 mod q, so e(m) is the projection
    let (g, _, v) = power.ext_gcd(&q);
    debug_assert_eq!(g.degree(), Some(0));
    let e = v.mul(&q);
    Some(e.eval_matrix(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn char_poly_of_diagonal() {
        let m = RatMatrix::from_i64_rows(&[&[2, 0], &[0, 3]]);
        let p = char_poly(&m);
        // (t−2)(t−3) = t² − 5t + 6
        assert_eq!(p.coeffs(), &[rat_int(6), rat_int(-5), rat_int(1)]);
    }

    #[test]
    fn min_poly_of_jordan_block() {
        let m = RatMatrix::from_i64_rows(&[&[0, 1], &[0, 0]]);
        let p = min_poly(&m);
        assert_eq!(p.coeffs(), &[rat_int(0), rat_int(0), rat_int(1)]); // t²
        let id = RatMatrix::identity(3);
        assert_eq!(min_poly(&id).coeffs(), &[rat_int(-1), rat_int(1)]); // t−1
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // t²(t−1/2)(t+3)
        let p = RatPoly::from_coeffs(vec![
            rat_int(0),
            rat_int(0),
            rat(-3, 2),
            rat(5, 2),
            rat_int(1),
        ]);
        let roots = rational_roots(&p).unwrap();
        assert_eq!(
            roots,
            vec![(rat_int(-3), 1), (rat_int(0), 2), (rat(1, 2), 1),]
        );
        // t² − 2 has no rational roots
        let p = RatPoly::from_coeffs(vec![rat_int(-2), rat_int(0), rat_int(1)]);
        assert!(rational_roots(&p).unwrap().is_empty());
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = RatPoly::from_coeffs(vec![rat_int(-1), rat_int(1)])
            .mul(&RatPoly::from_coeffs(vec![rat_int(2), rat_int(1)]));
        let b = RatPoly::from_coeffs(vec![rat_int(-1), rat_int(1)])
            .mul(&RatPoly::from_coeffs(vec![rat_int(5), rat_int(3)]));
        let (g, u, v) = a.ext_gcd(&b);
        assert_eq!(g.coeffs(), &[rat_int(-1), rat_int(1)]); // t − 1
        let lhs = u.mul(&a).add(&v.mul(&b));
        assert_eq!(lhs, g);
    }

    #[test]
    fn idempotent_splits_diag() {
        let m = RatMatrix::from_i64_rows(&[&[1, 0], &[0, 2]]);
        let mp = min_poly(&m);
        let e = spectral_idempotent(&m, &mp, &rat_int(1)).unwrap();
        assert_eq!(e, RatMatrix::from_i64_rows(&[&[1, 0], &[0, 0]]));
        assert_eq!(&e * &e, e);
        // Jordan block: no splitting
        let j = RatMatrix::from_i64_rows(&[&[5, 1], &[0, 5]]);
        let mp = min_poly(&j);
        assert!(spectral_idempotent(&j, &mp, &rat_int(5)).is_none());
    }
}
