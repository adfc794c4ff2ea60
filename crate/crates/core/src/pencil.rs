//! Matrix pencils A + λB, degree-one vector polynomials and the symmetry structures.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::GaussianRational as C;
use crate::matrix::Matrix;
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PencilError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("map {map:?} is not applicable to structure {tag}")]
    Transport { map: TransportMap, tag: StructureTag },
    #[error("malformed pencil document: {0}")]
    Document(String),
}

/// Which adjoint ⋆ a structure is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Star {
    Transpose,
    ConjugateTranspose,
}

/// How the adjoint of a structured pencil relates back to the pencil.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tau {
    Same,
    NegArg,
    Rev,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum StructureTag {
    Hermitian,
    Symmetric,
    SkewHermitian,
    SkewSymmetric,
    TEven,
    TOdd,
    TPalindromic,
    TAntiPalindromic,
    StarEven,
    StarOdd,
    StarPalindromic,
    StarAntiPalindromic,
    #[default]
    None,
}

impl StructureTag {
    /// The twelve symmetry structures (excluding `None`).
    pub const ALL: [StructureTag; 12] = [
        StructureTag::Hermitian,
        StructureTag::Symmetric,
        StructureTag::SkewHermitian,
        StructureTag::SkewSymmetric,
        StructureTag::TEven,
        StructureTag::TOdd,
        StructureTag::TPalindromic,
        StructureTag::TAntiPalindromic,
        StructureTag::StarEven,
        StructureTag::StarOdd,
        StructureTag::StarPalindromic,
        StructureTag::StarAntiPalindromic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StructureTag::Hermitian => "hermitian",
            StructureTag::Symmetric => "symmetric",
            StructureTag::SkewHermitian => "skew-hermitian",
            StructureTag::SkewSymmetric => "skew-symmetric",
            StructureTag::TEven => "t-even",
            StructureTag::TOdd => "t-odd",
            StructureTag::TPalindromic => "t-palindromic",
            StructureTag::TAntiPalindromic => "t-anti-palindromic",
            StructureTag::StarEven => "star-even",
            StructureTag::StarOdd => "star-odd",
            StructureTag::StarPalindromic => "star-palindromic",
            StructureTag::StarAntiPalindromic => "star-anti-palindromic",
            StructureTag::None => "none",
        }
    }

    pub fn parse(s: &str) -> Option<StructureTag> {
        StructureTag::ALL
            .iter()
            .chain(std::iter::once(&StructureTag::None))
            .copied()
            .find(|t| t.name() == s)
    }

    pub fn star(self) -> Star {
        use StructureTag::*;
        match self {
            Hermitian | SkewHermitian | StarEven | StarOdd | StarPalindromic | StarAntiPalindromic => {
                Star::ConjugateTranspose
            }
            _ => Star::Transpose,
        }
    }

    /// The defining identity P^⋆ = sign · τ(P), or `None` for unstructured pencils.
    pub fn identity(self) -> Option<(Star, Tau, bool)> {
        use StructureTag::*;
        let (tau, negative) = match self {
            Hermitian | Symmetric => (Tau::Same, false),
            SkewHermitian | SkewSymmetric => (Tau::Same, true),
            TEven | StarEven => (Tau::NegArg, false),
            TOdd | StarOdd => (Tau::NegArg, true),
            TPalindromic | StarPalindromic => (Tau::Rev, false),
            TAntiPalindromic | StarAntiPalindromic => (Tau::Rev, true),
            None => return Option::None,
        };
        Some((self.star(), tau, negative))
    }

    pub fn is_hermitian_family(self) -> bool {
        use StructureTag::*;
        matches!(
            self,
            Hermitian | SkewHermitian | StarEven | StarOdd | StarPalindromic | StarAntiPalindromic
        )
    }

    /// Structures whose parameterization forces s = ⌊r/2⌋.
    pub fn forces_half_rank(self) -> bool {
        use StructureTag::*;
        matches!(self, TEven | TOdd | TPalindromic | TAntiPalindromic | SkewSymmetric)
    }
}

impl fmt::Display for StructureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Pencil A + λB; A and B share a (possibly rectangular) shape.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pencil {
    pub a: Matrix,
    pub b: Matrix,
}

impl Pencil {
    pub fn new(a: Matrix, b: Matrix) -> Result<Self, PencilError> {
        if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
            return Err(PencilError::Shape(format!(
                "A is {}x{}, B is {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        Ok(Pencil { a, b })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Pencil { a: Matrix::zeros(rows, cols), b: Matrix::zeros(rows, cols) }
    }

    pub fn constant(a: Matrix) -> Self {
        let b = Matrix::zeros(a.rows(), a.cols());
        Pencil { a, b }
    }

    pub fn from_int_coeffs(a: &[&[i64]], b: &[&[i64]]) -> Self {
        Pencil::new(Matrix::from_ints(a), Matrix::from_ints(b)).expect("matching shapes")
    }

    /// Builds a pencil from entrywise (constant, λ-coefficient) pairs.
    pub fn from_entries(rows: usize, cols: usize, f: impl Fn(usize, usize) -> (C, C)) -> Self {
        let mut p = Pencil::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let (x, y) = f(i, j);
                p.a[(i, j)] = x;
                p.b[(i, j)] = y;
            }
        }
        p
    }

    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    /// Dimension of a square pencil.
    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn is_square(&self) -> bool {
        self.a.is_square()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn entry(&self, i: usize, j: usize) -> Poly {
        Poly::linear(self.a[(i, j)].clone(), self.b[(i, j)].clone())
    }

    pub fn scale(&self, c: &C) -> Self {
        Pencil { a: self.a.scale(c), b: self.b.scale(c) }
    }

    pub fn set_entry(&mut self, i: usize, j: usize, constant: C, slope: C) {
        self.a[(i, j)] = constant;
        self.b[(i, j)] = slope;
    }

    /// P(−λ)
    pub fn neg_arg(&self) -> Self {
        Pencil { a: self.a.clone(), b: -&self.b }
    }

    pub fn reversal(&self) -> Self {
        Pencil { a: self.b.clone(), b: self.a.clone() }
    }

    pub fn adjoint(&self, star: Star) -> Self {
        match star {
            Star::Transpose => Pencil { a: self.a.transpose(), b: self.b.transpose() },
            Star::ConjugateTranspose => Pencil { a: self.a.conj_transpose(), b: self.b.conj_transpose() },
        }
    }

    pub fn evaluate(&self, x: &C) -> Matrix {
        &self.a + &self.b.scale(x)
    }

    /// X · P · Y
    pub fn sandwich(&self, x: &Matrix, y: &Matrix) -> Self {
        Pencil { a: &(x * &self.a) * y, b: &(x * &self.b) * y }
    }

    /// Congruence P ↦ X P X^⋆.
    pub fn congruence(&self, x: &Matrix, star: Star) -> Self {
        let xs = match star {
            Star::Transpose => x.transpose(),
            Star::ConjugateTranspose => x.conj_transpose(),
        };
        self.sandwich(x, &xs)
    }

    pub fn direct_sum(blocks: &[Pencil]) -> Self {
        let a: Vec<Matrix> = blocks.iter().map(|p| p.a.clone()).collect();
        let b: Vec<Matrix> = blocks.iter().map(|p| p.b.clone()).collect();
        Pencil { a: Matrix::direct_sum(&a), b: Matrix::direct_sum(&b) }
    }

    /// Embeds `block` into an n×n zero frame at (offset, offset).
    pub fn embed(&self, n: usize, offset: usize) -> Result<Self, PencilError> {
        if offset + self.rows() > n || offset + self.cols() > n {
            return Err(PencilError::Shape(format!(
                "{}x{} block at offset {offset} does not fit in {n}x{n}",
                self.rows(),
                self.cols()
            )));
        }
        let mut p = Pencil::zero(n, n);
        p.a.set_block(offset, offset, &self.a);
        p.b.set_block(offset, offset, &self.b);
        Ok(p)
    }

    /// Entrywise polynomial matrix.
    pub fn poly_entries(&self) -> Vec<Vec<Poly>> {
        (0..self.rows()).map(|i| (0..self.cols()).map(|j| self.entry(i, j)).collect()).collect()
    }
}

impl Add for &Pencil {
    type Output = Pencil;
    fn add(self, o: &Pencil) -> Pencil {
        Pencil { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl Sub for &Pencil {
    type Output = Pencil;
    fn sub(self, o: &Pencil) -> Pencil {
        Pencil { a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl Neg for &Pencil {
    type Output = Pencil;
    fn neg(self) -> Pencil {
        Pencil { a: -&self.a, b: -&self.b }
    }
}

impl fmt::Debug for Pencil {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows() {
            let r: Vec<String> = (0..self.cols()).map(|j| self.entry(i, j).to_string()).collect();
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        write!(f, "]")
    }
}

pub fn reversal(p: &Pencil) -> Pencil {
    p.reversal()
}

pub fn adjoint(p: &Pencil, star: Star) -> Pencil {
    p.adjoint(star)
}

pub fn evaluate(p: &Pencil, x: &C) -> Matrix {
    p.evaluate(x)
}

/// True iff the coefficient identities of `tag` hold exactly.
pub fn check_structure(p: &Pencil, tag: StructureTag) -> bool {
    let Some((star, tau, negative)) = tag.identity() else {
        return true;
    };
    if !p.is_square() {
        return false;
    }
    let lhs = p.adjoint(star);
    let t = match tau {
        Tau::Same => p.clone(),
        Tau::NegArg => p.neg_arg(),
        Tau::Rev => p.reversal(),
    };
    let rhs = if negative { -&t } else { t };
    lhs == rhs
}

/// Cayley transforms on coefficients: C₋₁ (A,B) ↦ (A−B, A+B), C₊₁ (A,B) ↦ (A+B, −A+B).
pub fn cayley(p: &Pencil, plus: bool) -> Pencil {
    if plus {
        Pencil { a: &p.a + &p.b, b: &p.b - &p.a }
    } else {
        Pencil { a: &p.a - &p.b, b: &p.a + &p.b }
    }
}

/// Normal rank by fraction-free elimination over Q(i)[λ].
///
/// Pivots are taken as the first nonzero entry in row-major order of the
/// remaining submatrix.
pub fn normal_rank(p: &Pencil) -> usize {
    poly_matrix_rank(p.poly_entries())
}

pub fn poly_matrix_rank(mut m: Vec<Vec<Poly>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut prev = Poly::one();
    let mut k = 0;
    while k < rows.min(cols) {
        let pivot = (k..rows).flat_map(|i| (k..cols).map(move |j| (i, j))).find(|&(i, j)| !m[i][j].is_zero());
        let Some((pi, pj)) = pivot else { break };
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        for i in k + 1..rows {
            for j in k + 1..cols {
                let t = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = Poly::zero();
        }
        prev = m[k][k].clone();
        k += 1;
    }
    k
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransportMap {
    /// P ↦ 𝔦P
    TimesI,
    /// A + λB ↦ A + λ(𝔦B)
    LambdaTimesIB,
    Reversal,
    CayleyPlus,
    CayleyMinus,
}

/// Applies a documented structure-changing map and reports the target structure.
pub fn structure_transport(
    p: &Pencil,
    tag: StructureTag,
    map: TransportMap,
) -> Result<(Pencil, StructureTag), PencilError> {
    use StructureTag::*;
    let bad = || PencilError::Transport { map, tag };
    let i = C::i();
    match map {
        TransportMap::TimesI => {
            let target = match tag {
                SkewHermitian => Hermitian,
                Hermitian => SkewHermitian,
                StarEven => StarOdd,
                StarOdd => StarEven,
                StarPalindromic => StarAntiPalindromic,
                StarAntiPalindromic => StarPalindromic,
                _ => return Err(bad()),
            };
            Ok((p.scale(&i), target))
        }
        TransportMap::LambdaTimesIB => {
            let target = match tag {
                StarEven => Hermitian,
                Hermitian => StarEven,
                StarOdd => SkewHermitian,
                SkewHermitian => StarOdd,
                _ => return Err(bad()),
            };
            Ok((Pencil { a: p.a.clone(), b: p.b.scale(&i) }, target))
        }
        TransportMap::Reversal => {
            let target = match tag {
                TEven => TOdd,
                TOdd => TEven,
                StarEven => StarOdd,
                StarOdd => StarEven,
                other => other,
            };
            Ok((p.reversal(), target))
        }
        TransportMap::CayleyPlus => {
            let target = match tag {
                TPalindromic => TEven,
                TAntiPalindromic => TOdd,
                TEven => TAntiPalindromic,
                TOdd => TPalindromic,
                StarPalindromic => StarEven,
                StarAntiPalindromic => StarOdd,
                StarEven => StarAntiPalindromic,
                StarOdd => StarPalindromic,
                _ => return Err(bad()),
            };
            Ok((cayley(p, true), target))
        }
        TransportMap::CayleyMinus => {
            let target = match tag {
                TAntiPalindromic => TEven,
                TPalindromic => TOdd,
                TEven => TPalindromic,
                TOdd => TAntiPalindromic,
                StarAntiPalindromic => StarEven,
                StarPalindromic => StarOdd,
                StarEven => StarPalindromic,
                StarOdd => StarAntiPalindromic,
                _ => return Err(bad()),
            };
            Ok((cayley(p, false), target))
        }
    }
}

/// Column vector polynomial w_A + λ w_B of degree at most one.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolyVector {
    pub constant: Vec<C>,
    pub slope: Vec<C>,
}

impl PolyVector {
    pub fn new(constant: Vec<C>, slope: Vec<C>) -> Self {
        assert_eq!(constant.len(), slope.len(), "coefficient length mismatch");
        PolyVector { constant, slope }
    }

    pub fn constant(v: Vec<C>) -> Self {
        let n = v.len();
        PolyVector { constant: v, slope: vec![C::zero(); n] }
    }

    pub fn zero(n: usize) -> Self {
        PolyVector::constant(vec![C::zero(); n])
    }

    /// Unit vector e_k (1-based).
    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = vec![C::zero(); n];
        v[k - 1] = C::one();
        PolyVector::constant(v)
    }

    pub fn len(&self) -> usize {
        self.constant.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constant.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.slope.iter().any(|c| !c.is_zero()) {
            Some(1)
        } else if self.constant.iter().any(|c| !c.is_zero()) {
            Some(0)
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    pub fn entry(&self, k: usize) -> Poly {
        Poly::linear(self.constant[k].clone(), self.slope[k].clone())
    }

    pub fn scale(&self, c: &C) -> Self {
        PolyVector {
            constant: self.constant.iter().map(|x| x * c).collect(),
            slope: self.slope.iter().map(|x| x * c).collect(),
        }
    }

    /// (a + λb)·v for a constant vector v.
    pub fn times_linear(&self, a: &C, b: &C) -> Self {
        assert!(self.degree() != Some(1), "product would exceed degree one");
        PolyVector {
            constant: self.constant.iter().map(|x| x * a).collect(),
            slope: self.constant.iter().map(|x| x * b).collect(),
        }
    }

    pub fn neg_arg(&self) -> Self {
        PolyVector { constant: self.constant.clone(), slope: self.slope.iter().map(|x| -x).collect() }
    }

    /// rev(w) = λ·w(1/λ), treating w as a degree-one vector polynomial.
    pub fn rev(&self) -> Self {
        PolyVector { constant: self.slope.clone(), slope: self.constant.clone() }
    }

    pub fn conj(&self) -> Self {
        PolyVector {
            constant: self.constant.iter().map(|x| x.conj()).collect(),
            slope: self.slope.iter().map(|x| x.conj()).collect(),
        }
    }

    /// Left multiplication by a constant matrix.
    pub fn apply(&self, m: &Matrix) -> Self {
        let c = m * &Matrix::column(&self.constant);
        let s = m * &Matrix::column(&self.slope);
        PolyVector { constant: c.col(0), slope: s.col(0) }
    }

    pub fn tau(&self, tau: Tau) -> Self {
        match tau {
            Tau::Same => self.clone(),
            Tau::NegArg => self.neg_arg(),
            Tau::Rev => self.rev(),
        }
    }
}

impl Add for &PolyVector {
    type Output = PolyVector;
    fn add(self, o: &PolyVector) -> PolyVector {
        PolyVector {
            constant: self.constant.iter().zip(&o.constant).map(|(a, b)| a + b).collect(),
            slope: self.slope.iter().zip(&o.slope).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &PolyVector {
    type Output = PolyVector;
    fn sub(self, o: &PolyVector) -> PolyVector {
        PolyVector {
            constant: self.constant.iter().zip(&o.constant).map(|(a, b)| a - b).collect(),
            slope: self.slope.iter().zip(&o.slope).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for PolyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = (0..self.len()).map(|k| self.entry(k).to_string()).collect();
        write!(f, "[{}]", e.join(", "))
    }
}

/// x·y^⋆ for vector polynomials whose degrees add up to at most one.
pub fn outer(x: &PolyVector, y: &PolyVector, star: Star) -> Pencil {
    assert!(
        x.degree().unwrap_or(0) + y.degree().unwrap_or(0) <= 1,
        "outer product would exceed degree one"
    );
    let y = match star {
        Star::Transpose => y.clone(),
        Star::ConjugateTranspose => y.conj(),
    };
    let (n, m) = (x.len(), y.len());
    Pencil::from_entries(n, m, |i, j| {
        let a = &x.constant[i] * &y.constant[j];
        let b = &(&x.constant[i] * &y.slope[j]) + &(&x.slope[i] * &y.constant[j]);
        (a, b)
    })
}

/// Interchange document {"n", "A", "B", "structure"}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PencilDoc {
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<C>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<C>>,
    #[serde(default)]
    pub structure: StructureTag,
}

impl PencilDoc {
    pub fn from_pencil(p: &Pencil, structure: StructureTag) -> Self {
        PencilDoc { n: p.rows(), a: p.a.to_rows(), b: p.b.to_rows(), structure }
    }

    pub fn to_pencil(&self) -> Result<Pencil, PencilError> {
        let ok = |m: &Vec<Vec<C>>| m.len() == self.n && m.iter().all(|r| r.len() == self.n);
        if !ok(&self.a) || !ok(&self.b) {
            return Err(PencilError::Document(format!("A and B must be {0}x{0}", self.n)));
        }
        Pencil::new(Matrix::from_rows(self.a.clone()), Matrix::from_rows(self.b.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> Pencil {
        Pencil::from_int_coeffs(&[&[0, -1], &[-1, 0]], &[&[0, 1], &[1, 0]])
    }

    #[test]
    fn structure_checks() {
        assert!(check_structure(&example(), StructureTag::Hermitian));
        for t in StructureTag::ALL {
            assert!(check_structure(&Pencil::zero(3, 3), t));
        }
        let p = Pencil::from_int_coeffs(&[&[0, 0], &[0, 1]], &[&[1, 0], &[0, 0]]);
        assert!(!check_structure(&p, StructureTag::SkewSymmetric));
    }

    #[test]
    fn reversal_and_adjoint() {
        let p = Pencil::from_int_coeffs(&[&[0, 1], &[0, 0]], &[&[1, 0], &[0, 0]]);
        assert_eq!(p.reversal().reversal(), p);
        let t = p.adjoint(Star::Transpose);
        assert_eq!(t, Pencil::from_int_coeffs(&[&[0, 0], &[1, 0]], &[&[1, 0], &[0, 0]]));
        assert_eq!(t.adjoint(Star::Transpose), p);
        assert_eq!(example().adjoint(Star::ConjugateTranspose), example());
    }

    #[test]
    fn evaluation() {
        let p = Pencil::from_int_coeffs(&[&[0]], &[&[1]]);
        assert_eq!(p.evaluate(&C::from_int(3)), Matrix::from_ints(&[&[3]]));
        assert_eq!(example().evaluate(&C::zero()), example().a);
    }

    #[test]
    fn normal_ranks() {
        assert_eq!(normal_rank(&example()), 2);
        assert_eq!(normal_rank(&Pencil::zero(3, 3)), 0);
        let l1 = Pencil::from_int_coeffs(&[&[0, 1]], &[&[1, 0]]);
        assert_eq!(normal_rank(&l1), 1);
        // λ·I − λ·I style cancellation: rank of [[λ, λ], [1, 1]] is 1
        let p = Pencil::from_int_coeffs(&[&[0, 0], &[1, 1]], &[&[1, 1], &[0, 0]]);
        assert_eq!(normal_rank(&p), 1);
    }

    #[test]
    fn cayley_round_trip() {
        let p = Pencil::from_int_coeffs(&[&[0]], &[&[1]]);
        assert_eq!(cayley(&cayley(&p, true), false), p.scale(&C::from_int(2)));
        assert!(cayley(&Pencil::zero(2, 2), true).is_zero());
    }

    #[test]
    fn transport_examples() {
        let i = C::i();
        let p = Pencil::new(
            Matrix::from_rows(vec![vec![i.clone(), C::zero()], vec![C::zero(), C::zero()]]),
            Matrix::from_rows(vec![vec![C::zero(), C::zero()], vec![C::zero(), i.clone()]]),
        )
        .unwrap();
        assert!(check_structure(&p, StructureTag::SkewHermitian));
        let (q, t) = structure_transport(&p, StructureTag::SkewHermitian, TransportMap::TimesI).unwrap();
        assert_eq!(t, StructureTag::Hermitian);
        assert_eq!(q, Pencil::from_int_coeffs(&[&[-1, 0], &[0, 0]], &[&[0, 0], &[0, -1]]));
        assert!(structure_transport(&p, StructureTag::Symmetric, TransportMap::TimesI).is_err());
    }

    #[test]
    fn outer_products() {
        let v = PolyVector::unit(2, 1);
        let w = PolyVector::new(vec![C::one(), C::zero()], vec![C::zero(), C::one()]);
        let p = outer(&v, &w, Star::Transpose);
        assert_eq!(p, Pencil::from_int_coeffs(&[&[1, 0], &[0, 0]], &[&[0, 1], &[0, 0]]));
    }
}
