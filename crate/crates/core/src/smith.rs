//! Determinants, local Smith data and multiplicity queries.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exactnum::{GaussianRational as C, NumError};
use crate::matrix::Matrix;
use crate::pencil::Pencil;
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmithError {
    #[error("pencil is not square")]
    NotSquare,
    #[error("pencil is singular (determinant vanishes identically)")]
    Singular,
    #[error("zero polynomial has no root count")]
    ZeroPolynomial,
    #[error("new eigenvalue multiplicity must be 1 or 2, got {0}")]
    BadMu(usize),
}

/// A finite eigenvalue or ∞.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EigenvalueRef {
    Finite(C),
    Infinity,
}

impl EigenvalueRef {
    pub fn finite(c: C) -> Self {
        EigenvalueRef::Finite(c)
    }

    pub fn int(n: i64) -> Self {
        EigenvalueRef::Finite(C::from_int(n))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, EigenvalueRef::Infinity)
    }

    pub fn as_finite(&self) -> Option<&C> {
        match self {
            EigenvalueRef::Finite(c) => Some(c),
            EigenvalueRef::Infinity => None,
        }
    }
}

impl fmt::Display for EigenvalueRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EigenvalueRef::Finite(c) => write!(f, "{c}"),
            EigenvalueRef::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for EigenvalueRef {
    type Err = NumError;
    fn from_str(s: &str) -> Result<Self, NumError> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(EigenvalueRef::Infinity),
            t => t.parse().map(EigenvalueRef::Finite),
        }
    }
}

impl Serialize for EigenvalueRef {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for EigenvalueRef {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            S(String),
            I(i64),
        }
        match Raw::deserialize(d)? {
            Raw::S(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::I(n) => Ok(EigenvalueRef::int(n)),
        }
    }
}

/// Non-increasing list of positive partial multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiplicityList(Vec<usize>);

impl MultiplicityList {
    /// Sorts non-increasing and drops zeros.
    pub fn new(mut v: Vec<usize>) -> Self {
        v.retain(|&x| x > 0);
        v.sort_unstable_by(|a, b| b.cmp(a));
        MultiplicityList(v)
    }

    pub fn empty() -> Self {
        MultiplicityList(Vec::new())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    /// 1-based access; 0 past the end.
    pub fn get(&self, j: usize) -> usize {
        if j == 0 {
            return 0;
        }
        self.0.get(j - 1).copied().unwrap_or(0)
    }

    /// (n_{r+1}, …, n_g)
    pub fn drop_largest(&self, r: usize) -> Self {
        MultiplicityList(self.0.iter().skip(r).copied().collect())
    }
}

impl From<Vec<usize>> for MultiplicityList {
    fn from(v: Vec<usize>) -> Self {
        MultiplicityList::new(v)
    }
}

impl fmt::Display for MultiplicityList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharData {
    pub det_poly: Poly,
    pub degree_deficiency: usize,
}

impl CharData {
    pub fn is_regular(&self) -> bool {
        !self.det_poly.is_zero()
    }

    /// Algebraic multiplicity of a finite point, or of ∞ via the degree deficiency.
    pub fn algebraic_multiplicity(&self, at: &EigenvalueRef) -> usize {
        match at {
            EigenvalueRef::Finite(c) => self.det_poly.root_multiplicity(c),
            EigenvalueRef::Infinity => self.degree_deficiency,
        }
    }
}

/// det(A + λB) from values at λ = 0, 1, …, n.
pub fn det_poly(p: &Pencil) -> Result<CharData, SmithError> {
    if !p.is_square() {
        return Err(SmithError::NotSquare);
    }
    let n = p.n();
    let xs: Vec<C> = (0..=n as i64).map(C::from_int).collect();
    let ys: Vec<C> = xs.iter().map(|x| p.evaluate(x).det()).collect();
    let det = Poly::interpolate(&xs, &ys);
    let deficiency = n - det.degree().unwrap_or(0).min(n);
    let deficiency = if det.is_zero() { n } else { deficiency };
    Ok(CharData { det_poly: det, degree_deficiency: deficiency })
}

pub fn is_regular(p: &Pencil) -> bool {
    det_poly(p).map(|c| c.is_regular()).unwrap_or(false)
}

pub fn partial_multiplicities(p: &Pencil, at: &EigenvalueRef) -> Result<MultiplicityList, SmithError> {
    let data = det_poly(p)?;
    partial_multiplicities_with(p, &data, at)
}

/// Same as [`partial_multiplicities`] with the determinant already at hand.
pub fn partial_multiplicities_with(
    p: &Pencil,
    data: &CharData,
    at: &EigenvalueRef,
) -> Result<MultiplicityList, SmithError> {
    if !data.is_regular() {
        return Err(SmithError::Singular);
    }
    let m = data.algebraic_multiplicity(at);
    if m == 0 {
        return Ok(MultiplicityList::empty());
    }
    // local entries c0 + c1·λ around the point
    let (c0, c1) = match at {
        EigenvalueRef::Finite(x) => (p.evaluate(x), p.b.clone()),
        EigenvalueRef::Infinity => (p.b.clone(), p.a.clone()),
    };
    Ok(MultiplicityList::new(local_smith_valuations(&c0, &c1, m)))
}

/// Truncated power series modulo λ^prec.
type Series = Vec<C>;

fn valuation(s: &Series) -> Option<usize> {
    s.iter().position(|c| !c.is_zero())
}

fn series_mul(a: &[C], b: &[C], prec: usize) -> Series {
    let mut out = vec![C::zero(); prec];
    for (i, x) in a.iter().enumerate().take(prec) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(prec - i) {
            if !y.is_zero() {
                out[i + j] += &(x * y);
            }
        }
    }
    out
}

fn series_inv(u: &[C], prec: usize) -> Series {
    let u0 = u[0].inv().expect("unit series");
    let mut out = vec![C::zero(); prec];
    out[0] = u0.clone();
    for k in 1..prec {
        let mut acc = C::zero();
        for j in 1..=k.min(u.len() - 1) {
            acc += &(&u[j] * &out[k - j]);
        }
        out[k] = -(&acc * &u0);
    }
    out
}

/// Valuations of the invariant factors of c0 + λc1 at λ = 0, given that
/// the determinant has valuation m.
///
/// Row and column operations bring c0 to diag(I, 0); with c1 becoming
/// [[X11, X12], [X21, X22]] the pencil is locally equivalent to
/// I ⊕ λ·S(λ), S(λ) = X22 − λ·X21(I + λX11)⁻¹X12, and only S needs the
/// series elimination.
fn local_smith_valuations(c0: &Matrix, c1: &Matrix, m: usize) -> Vec<usize> {
    let n = c0.rows();
    let (mut a0, mut a1) = (c0.clone(), c1.clone());
    let mut rho = 0;
    while rho < n {
        let Some((pi, pj)) = (rho..n).flat_map(|i| (rho..n).map(move |j| (i, j))).find(|&(i, j)| !a0[(i, j)].is_zero())
        else {
            break;
        };
        a0.swap_rows(rho, pi);
        a1.swap_rows(rho, pi);
        swap_cols(&mut a0, rho, pj);
        swap_cols(&mut a1, rho, pj);
        let inv = a0[(rho, rho)].inv().expect("nonzero pivot");
        for j in 0..n {
            a0[(rho, j)] = &a0[(rho, j)] * &inv;
            a1[(rho, j)] = &a1[(rho, j)] * &inv;
        }
        for i in 0..n {
            if i == rho || a0[(i, rho)].is_zero() {
                continue;
            }
            let f = a0[(i, rho)].clone();
            for j in 0..n {
                let t0 = &f * &a0[(rho, j)];
                a0[(i, j)] -= &t0;
                let t1 = &f * &a1[(rho, j)];
                a1[(i, j)] -= &t1;
            }
        }
        for j in rho + 1..n {
            if a0[(rho, j)].is_zero() {
                continue;
            }
            let f = a0[(rho, j)].clone();
            for i in 0..n {
                let t0 = &f * &a0[(i, rho)];
                a0[(i, j)] -= &t0;
                let t1 = &f * &a1[(i, rho)];
                a1[(i, j)] -= &t1;
            }
        }
        rho += 1;
    }
    let g = n - rho;
    if g == 0 {
        return vec![0; n];
    }
    // valuations of S sum to m − g
    let prec = m.saturating_sub(g) + 1;
    let (head, tail): (Vec<usize>, Vec<usize>) = ((0..rho).collect(), (rho..n).collect());
    let x11 = a1.submatrix(&head, &head);
    let x12 = a1.submatrix(&head, &tail);
    let x21 = a1.submatrix(&tail, &head);
    let x22 = a1.submatrix(&tail, &tail);
    let mut s: Vec<Vec<Series>> = (0..g)
        .map(|i| {
            (0..g)
                .map(|j| {
                    let mut v = vec![C::zero(); prec];
                    v[0] = x22[(i, j)].clone();
                    v
                })
                .collect()
        })
        .collect();
    if rho > 0 {
        // coefficient of λ^{k+1} is (−1)^{k+1}·X21·X11^k·X12
        let mut right = x12;
        for k in 0..prec.saturating_sub(1) {
            let t = &x21 * &right;
            let negate = k % 2 == 0;
            for i in 0..g {
                for j in 0..g {
                    s[i][j][k + 1] = if negate { -&t[(i, j)] } else { t[(i, j)].clone() };
                }
            }
            right = &x11 * &right;
        }
    }
    let mut vals = vec![0; rho];
    vals.extend(series_smith(s, prec).into_iter().map(|v| v + 1));
    vals
}

fn swap_cols(m: &mut Matrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows() {
        let t = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = t;
    }
}

/// Local Smith valuations of a square matrix of truncated series; entries
/// that vanish to the working precision report `prec`.
fn series_smith(mut a: Vec<Vec<Series>>, prec: usize) -> Vec<usize> {
    let n = a.len();
    let mut vals = Vec::with_capacity(n);
    for k in 0..n {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, e) in row.iter().enumerate().skip(k) {
                if let Some(v) = valuation(e) {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
            if best.is_some_and(|(bv, _, _)| bv == 0) {
                break;
            }
        }
        let Some((v, pi, pj)) = best else {
            vals.extend(std::iter::repeat_n(prec, n - k));
            break;
        };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        let unit: Series = a[k][k][v..].to_vec();
        let uinv = series_inv(&unit, prec - v);
        for i in k + 1..n {
            if valuation(&a[i][k]).is_none() {
                continue;
            }
            let f = series_mul(&a[i][k][v..], &uinv, prec - v);
            let (top, bottom) = a.split_at_mut(i);
            for (target, pivot) in bottom[0][k..].iter_mut().zip(&top[k][k..]) {
                let t = series_mul(&f, pivot, prec);
                for (x, y) in target.iter_mut().zip(&t) {
                    *x -= y;
                }
            }
        }
        vals.push(v);
    }
    vals
}

/// (algebraic, geometric) multiplicity.
pub fn alg_geo_multiplicity(p: &Pencil, at: &EigenvalueRef) -> Result<(usize, usize), SmithError> {
    let l = partial_multiplicities(p, at)?;
    Ok((l.sum(), l.len()))
}

/// Sylvester matrix of p (degree d) and q (degree e), of size (d+e)×(d+e).
pub fn sylvester_matrix(p: &Poly, q: &Poly) -> Matrix {
    let d = p.degree().unwrap_or(0);
    let e = q.degree().unwrap_or(0);
    let size = d + e;
    let mut s = Matrix::zeros(size, size);
    for r in 0..e {
        for k in 0..=d {
            s[(r, r + k)] = p.coeff(d - k);
        }
    }
    for r in 0..d {
        for k in 0..=e {
            s[(e + r, r + k)] = q.coeff(e - k);
        }
    }
    s
}

/// Number of distinct roots: deg p minus the rank deficiency of S(p, p′).
pub fn distinct_root_count(p: &Poly) -> Result<usize, SmithError> {
    let d = p.degree().ok_or(SmithError::ZeroPolynomial)?;
    if d == 0 {
        return Ok(0);
    }
    let s = sylvester_matrix(p, &p.derivative());
    let gcd_degree = s.rows() - s.rank();
    Ok(d - gcd_degree)
}

/// M dominates N when it is at least as long and entrywise at least as large.
pub fn dominates(m: &MultiplicityList, n: &MultiplicityList) -> bool {
    m.len() >= n.len() && n.as_slice().iter().zip(m.as_slice()).all(|(x, y)| y >= x)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewEigenProfile {
    pub mu: usize,
    /// Degree of the factor of χ left after removing every root shared with L.
    pub remaining_degree: usize,
    pub distinct_new_roots: usize,
    pub new_infinite_multiplicity: usize,
    pub pass: bool,
}

/// Checks that eigenvalues of `perturbed` not shared with `base` all have multiplicity `mu`.
pub fn new_eigenvalue_profile(base: &Pencil, perturbed: &Pencil, mu: usize) -> Result<NewEigenProfile, SmithError> {
    let cl = det_poly(base)?;
    let cp = det_poly(perturbed)?;
    new_eigenvalue_profile_with(&cl, &cp, mu)
}

pub fn new_eigenvalue_profile_with(base: &CharData, perturbed: &CharData, mu: usize) -> Result<NewEigenProfile, SmithError> {
    if mu != 1 && mu != 2 {
        return Err(SmithError::BadMu(mu));
    }
    if !base.is_regular() || !perturbed.is_regular() {
        return Err(SmithError::Singular);
    }
    let mut q = perturbed.det_poly.clone();
    loop {
        let g = Poly::gcd(&q, &base.det_poly);
        if g.degree() == Some(0) {
            break;
        }
        q = q.div_exact(&g).expect("gcd divides");
    }
    let inf = if base.degree_deficiency == 0 { perturbed.degree_deficiency } else { 0 };
    let deg = q.degree().unwrap_or(0);
    let distinct = distinct_root_count(&q)?;
    let pass = if mu == 1 {
        distinct == deg && inf <= 1
    } else {
        let g = Poly::gcd(&q, &q.derivative());
        let gd = g.degree().unwrap_or(0);
        let square_shape = deg == 2 * gd && q.div_exact(&(&g * &g)).is_some_and(|c| c.degree() == Some(0));
        square_shape && distinct_root_count(&g)? == gd && (inf == 0 || inf == 2)
    };
    let distinct_new_roots = distinct + usize::from(inf > 0);
    Ok(NewEigenProfile { mu, remaining_degree: deg, distinct_new_roots, new_infinite_multiplicity: inf, pass })
}
