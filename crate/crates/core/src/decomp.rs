//! Structured rank-one decompositions.
//!
//! A decomposition for a structure with identity P^⋆ = ε·τ(P) is
//!
//!   Σ c_i(λ)·u_i u_i^⋆ + Σ [v_j w_j(λ)^⋆ + ε·τ(w_j)(λ) v_j^⋆]
//!
//! with constant u_i, v_j and w_j of degree at most one. The scalar c_i is
//! stored through two parameters (a_i, b_i) whose meaning depends on the
//! structure, see [`scalar_poly`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::{block_contributions, build_block, BlockKind, BlockSpec, CanonError, SpectralSpec};
use crate::exactnum::GaussianRational as C;
use crate::matrix::Matrix;
use crate::pencil::{outer, Pencil, PolyVector, Star, StructureTag};
use crate::smith::EigenvalueRef;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompError {
    #[error("spec carries a transform; decompose the canonical layout and conjugate afterwards")]
    NotCanonical,
    #[error("no structured decomposition for structure {0}")]
    Unsupported(StructureTag),
    #[error("operation needs a Hermitian-family spec, got {0}")]
    NotHermitian(StructureTag),
    #[error("terms cannot be merged: {0}")]
    NotMergeable(String),
    #[error("congruence matrix is singular or has the wrong size")]
    BadTransform,
    #[error("diagonal entry {0} has no scalar form for this structure")]
    NoScalarForm(String),
    #[error(transparent)]
    Canon(#[from] CanonError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarTerm {
    pub a: C,
    pub b: C,
    pub u: PolyVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairedTerm {
    pub v: PolyVector,
    pub w: PolyVector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankOneDecomposition {
    pub structure: StructureTag,
    pub n: usize,
    pub ell: usize,
    pub s: usize,
    pub scalar_terms: Vec<ScalarTerm>,
    pub paired_terms: Vec<PairedTerm>,
}

/// Matrix form (U, V, W_A, W_B, D_A, D_B) of a decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConciseForm {
    pub u: Matrix,
    pub v: Matrix,
    pub w_a: Matrix,
    pub w_b: Matrix,
    pub d_a: Vec<C>,
    pub d_b: Vec<C>,
}

impl RankOneDecomposition {
    pub fn new(structure: StructureTag, n: usize, scalar_terms: Vec<ScalarTerm>, paired_terms: Vec<PairedTerm>) -> Self {
        RankOneDecomposition {
            structure,
            n,
            ell: scalar_terms.len(),
            s: paired_terms.len(),
            scalar_terms,
            paired_terms,
        }
    }

    pub fn empty(structure: StructureTag, n: usize) -> Self {
        RankOneDecomposition::new(structure, n, Vec::new(), Vec::new())
    }

    pub fn rank_bound(&self) -> usize {
        self.ell + 2 * self.s
    }

    pub fn concise(&self) -> ConciseForm {
        let cols = |vs: Vec<&Vec<C>>| Matrix::from_fn(self.n, vs.len(), |i, j| vs[j][i].clone());
        ConciseForm {
            u: cols(self.scalar_terms.iter().map(|t| &t.u.constant).collect()),
            v: cols(self.paired_terms.iter().map(|t| &t.v.constant).collect()),
            w_a: cols(self.paired_terms.iter().map(|t| &t.w.constant).collect()),
            w_b: cols(self.paired_terms.iter().map(|t| &t.w.slope).collect()),
            d_a: self.scalar_terms.iter().map(|t| t.a.clone()).collect(),
            d_b: self.scalar_terms.iter().map(|t| t.b.clone()).collect(),
        }
    }

    /// Rank of the constant vectors u_1..u_ℓ, v_1..v_s.
    pub fn constant_vector_rank(&self) -> usize {
        let vs: Vec<&Vec<C>> = self
            .scalar_terms
            .iter()
            .map(|t| &t.u.constant)
            .chain(self.paired_terms.iter().map(|t| &t.v.constant))
            .collect();
        Matrix::from_fn(self.n, vs.len(), |i, j| vs[j][i].clone()).rank()
    }

    /// Degree constraints: u, v constant, w of degree at most one, real parameters where required.
    pub fn satisfies_shape_constraints(&self) -> bool {
        let real_params = self.structure.is_hermitian_family();
        self.scalar_terms
            .iter()
            .all(|t| t.u.degree().unwrap_or(0) == 0 && (!real_params || (t.a.is_real() && t.b.is_real())))
            && self.paired_terms.iter().all(|t| t.v.degree().unwrap_or(0) == 0)
    }
}

/// The scalar polynomial c(λ) = c₀ + λc₁ attached to parameters (a, b).
pub fn scalar_poly(tag: StructureTag, a: &C, b: &C) -> (C, C) {
    use StructureTag::*;
    let i = C::i();
    match tag {
        SkewHermitian => (&i * a, &i * b),
        StarEven => (a.clone(), &i * b),
        StarOdd => (&i * a, b.clone()),
        StarPalindromic => (a - &(&i * b), a + &(&i * b)),
        StarAntiPalindromic => (a + &(&i * b), &(-a) + &(&i * b)),
        TEven => (a.clone(), C::zero()),
        TOdd => (C::zero(), a.clone()),
        TPalindromic => (a.clone(), a.clone()),
        TAntiPalindromic => (a.clone(), -a),
        SkewSymmetric => (C::zero(), C::zero()),
        Hermitian | Symmetric | None => (a.clone(), b.clone()),
    }
}

/// Inverse of [`scalar_poly`]; `None` if c₀ + λc₁ has no admissible parameters.
pub fn scalar_params(tag: StructureTag, c0: &C, c1: &C) -> Option<(C, C)> {
    use StructureTag::*;
    let i = C::i();
    let mi = -&i;
    let half = C::from_ratio(1, 2);
    let (a, b) = match tag {
        SkewHermitian => (&mi * c0, &mi * c1),
        StarEven => (c0.clone(), &mi * c1),
        StarOdd => (&mi * c0, c1.clone()),
        StarPalindromic => (&half * &(c0 + c1), &(&half * &i) * &(c0 - c1)),
        StarAntiPalindromic => (&half * &(c0 - c1), &(&half * &mi) * &(c0 + c1)),
        TEven => (c0.clone(), C::zero()),
        TOdd => (c1.clone(), C::zero()),
        TPalindromic | TAntiPalindromic => (c0.clone(), C::zero()),
        SkewSymmetric => return (c0.is_zero() && c1.is_zero()).then(|| (C::zero(), C::zero())),
        Hermitian | Symmetric | None => (c0.clone(), c1.clone()),
    };
    if tag.is_hermitian_family() && !(a.is_real() && b.is_real()) {
        return Option::None;
    }
    (scalar_poly(tag, &a, &b) == (c0.clone(), c1.clone())).then_some((a, b))
}

fn star_of(tag: StructureTag) -> Star {
    tag.star()
}

/// (a + λb)·uu^⋆ for constant u.
fn scalar_term_pencil(tag: StructureTag, t: &ScalarTerm) -> Pencil {
    let (c0, c1) = scalar_poly(tag, &t.a, &t.b);
    let m = outer(&t.u, &t.u, star_of(tag)).a;
    Pencil { a: m.scale(&c0), b: m.scale(&c1) }
}

fn paired_term_pencil(tag: StructureTag, t: &PairedTerm) -> Pencil {
    let star = star_of(tag);
    let first = outer(&t.v, &t.w, star);
    match tag.identity() {
        Some((_, tau, negative)) => {
            let second = outer(&t.w.tau(tau), &t.v, star);
            if negative {
                &first - &second
            } else {
                &first + &second
            }
        }
        None => first,
    }
}

/// Sum of the terms according to the structure's combine rule.
pub fn reconstruct(dec: &RankOneDecomposition) -> Pencil {
    let mut acc = Pencil::zero(dec.n, dec.n);
    for t in &dec.scalar_terms {
        acc = &acc + &scalar_term_pencil(dec.structure, t);
    }
    for t in &dec.paired_terms {
        acc = &acc + &paired_term_pencil(dec.structure, t);
    }
    acc
}

/// Left-multiplies every vector by P, so the reconstruction becomes P·E·P^⋆.
pub fn conjugate_decomposition(dec: &RankOneDecomposition, p: &Matrix) -> Result<RankOneDecomposition, DecompError> {
    if !p.is_square() || p.rows() != dec.n || p.det().is_zero() {
        return Err(DecompError::BadTransform);
    }
    Ok(RankOneDecomposition {
        scalar_terms: dec
            .scalar_terms
            .iter()
            .map(|t| ScalarTerm { a: t.a.clone(), b: t.b.clone(), u: t.u.apply(p) })
            .collect(),
        paired_terms: dec.paired_terms.iter().map(|t| PairedTerm { v: t.v.apply(p), w: t.w.apply(p) }).collect(),
        ..dec.clone()
    })
}

/// 1-based pivot rows of a block of dimension `dim`.
fn pivot_rows(kind: BlockKind, size: usize, dim: usize) -> Vec<usize> {
    use BlockKind::*;
    match kind {
        SingularPair | TEvenSingularPair => (size + 2..=dim).collect(),
        ConjugatePair | SkewSymPair | TEvenInfEvenPair | TEvenZeroOddPair | TEvenNonzeroPair | TOddZeroEvenPair => {
            (size + 1..=dim).collect()
        }
        _ => (dim.div_ceil(2) + 1..=dim).collect(),
    }
}

fn star_entry(star: Star, c: &C) -> C {
    match star {
        Star::Transpose => c.clone(),
        Star::ConjugateTranspose => c.conj(),
    }
}

fn decompose_block(
    tag: StructureTag,
    spec: &BlockSpec,
    n: usize,
    offset: usize,
    scalars: &mut Vec<ScalarTerm>,
    pairs: &mut Vec<PairedTerm>,
) -> Result<(), DecompError> {
    let h = build_block(tag, spec)?;
    let dim = h.n();
    let star = tag.star();
    let pivots = pivot_rows(spec.kind, spec.size, dim);
    let in_s = |j: usize| pivots.contains(&j);
    let sigma = match spec.sign {
        Some(-1) => -C::one(),
        _ => C::one(),
    };
    let half = C::from_ratio(1, 2);
    for &p in &pivots {
        let mut w = PolyVector::zero(n);
        for j in 1..=dim {
            if in_s(j) && j < p {
                continue;
            }
            let mut c0 = star_entry(star, &h.a[(p - 1, j - 1)]);
            let mut c1 = star_entry(star, &h.b[(p - 1, j - 1)]);
            if j == p {
                c0 = &c0 * &half;
                c1 = &c1 * &half;
            }
            w.constant[offset + j - 1] = &sigma * &c0;
            w.slope[offset + j - 1] = &sigma * &c1;
        }
        let v = PolyVector::unit(n, offset + p).scale(&sigma);
        pairs.push(PairedTerm { v, w });
    }
    for i in (1..=dim).filter(|&i| !in_s(i)) {
        let (c0, c1) = (&h.a[(i - 1, i - 1)], &h.b[(i - 1, i - 1)]);
        if c0.is_zero() && c1.is_zero() {
            continue;
        }
        let (a, b) = scalar_params(tag, c0, c1).ok_or_else(|| DecompError::NoScalarForm(format!("{c0}+λ·{c1}")))?;
        scalars.push(ScalarTerm { a, b, u: PolyVector::unit(n, offset + i) });
    }
    Ok(())
}

/// Rank-one decomposition of a pencil given by a canonical-layout spec.
///
/// Under ⊤-even, ⊤-odd and the palindromic ⊤ structures the scalar terms are
/// merged pairwise so that ℓ = r mod 2.
pub fn decompose_canonical(spec: &SpectralSpec) -> Result<RankOneDecomposition, DecompError> {
    if !spec.is_canonical_layout() {
        return Err(DecompError::NotCanonical);
    }
    let tag = spec.structure;
    if tag == StructureTag::None {
        return Err(DecompError::Unsupported(tag));
    }
    let n = spec.dimension();
    let (mut scalars, mut pairs) = (Vec::new(), Vec::new());
    let mut offset = 0;
    for b in &spec.blocks {
        decompose_block(tag, b, n, offset, &mut scalars, &mut pairs)?;
        offset += b.dimension();
    }
    if tag.forces_half_rank() {
        let mut rest = Vec::new();
        let mut it = scalars.into_iter();
        while let Some(t1) = it.next() {
            match it.next() {
                Some(t2) => pairs.push(merge_opposite_signs(tag, &t1, &t2)?),
                None => rest.push(t1),
            }
        }
        scalars = rest;
    }
    Ok(RankOneDecomposition::new(tag, n, scalars, pairs))
}

/// Canonical decomposition followed by the spec's congruence, if any.
pub fn decompose_spec(spec: &SpectralSpec) -> Result<RankOneDecomposition, DecompError> {
    let canonical = SpectralSpec { transform: None, seed_transform: None, ..spec.clone() };
    let dec = decompose_canonical(&canonical)?;
    match spec.resolved_transform()? {
        Some(p) => conjugate_decomposition(&dec, &p),
        None => Ok(dec),
    }
}

fn poly_is_zero(p: &(C, C)) -> bool {
    p.0.is_zero() && p.1.is_zero()
}

/// Merges two scalar terms into one paired term.
///
/// Under ∗ structures the terms must be c·u₁u₁^⋆ and −c·u₂u₂^⋆; then
/// v = u₁ + 𝔦u₂ and w = ½·c̄·(u₁ − 𝔦u₂). Under ⊤ structures the terms must be
/// c·u₁u₁ᵀ and κc·u₂u₂ᵀ with κ a square d²; u₂ is replaced by d·u₂ and
/// v = u₁ + 𝔦u₂, w = ½·c·(u₁ − 𝔦u₂).
pub fn merge_opposite_signs(tag: StructureTag, t1: &ScalarTerm, t2: &ScalarTerm) -> Result<PairedTerm, DecompError> {
    let n = t1.u.len();
    if t1.u.is_zero() && t2.u.is_zero() {
        return Ok(PairedTerm { v: PolyVector::zero(n), w: PolyVector::zero(n) });
    }
    let p1 = scalar_poly(tag, &t1.a, &t1.b);
    let p2 = scalar_poly(tag, &t2.a, &t2.b);
    if poly_is_zero(&p1) {
        return Err(DecompError::NotMergeable("first scalar term vanishes".into()));
    }
    let i = C::i();
    let u1 = &t1.u;
    let (u2, coeff) = match tag.star() {
        Star::ConjugateTranspose => {
            if (-&p1.0, -&p1.1) != p2 {
                return Err(DecompError::NotMergeable("scalars are not opposite".into()));
            }
            (t2.u.clone(), (p1.0.conj(), p1.1.conj()))
        }
        Star::Transpose => {
            let k = if p1.0.is_zero() { 1 } else { 0 };
            let (num, den) = if k == 0 { (&p2.0, &p1.0) } else { (&p2.1, &p1.1) };
            let kappa = num.checked_div(den).unwrap();
            if (&kappa * &p1.0, &kappa * &p1.1) != p2 {
                return Err(DecompError::NotMergeable("scalars are not proportional".into()));
            }
            let d = kappa
                .sqrt_exact()
                .ok_or_else(|| DecompError::NotMergeable(format!("ratio {kappa} is not a square")))?;
            (t2.u.scale(&d), p1)
        }
    };
    let v = u1 + &u2.scale(&i);
    let ubar = u1 - &u2.scale(&i);
    let half = C::from_ratio(1, 2);
    let w = PolyVector::new(
        ubar.constant.iter().map(|x| &(x * &coeff.0) * &half).collect(),
        ubar.constant.iter().map(|x| &(x * &coeff.1) * &half).collect(),
    );
    Ok(PairedTerm { v, w })
}

/// signsum per real-axis eigenvalue of a ∗-structured spec.
pub type SignsumTable = Vec<(EigenvalueRef, i64)>;

/// Sum of the signs of odd-sized signed blocks at `at`.
pub fn signsum(spec: &SpectralSpec, at: &EigenvalueRef) -> Result<i64, DecompError> {
    Ok(signsum_table(spec)?.into_iter().find(|(e, _)| e == at).map_or(0, |(_, s)| s))
}

pub fn signsum_table(spec: &SpectralSpec) -> Result<SignsumTable, DecompError> {
    if !spec.structure.is_hermitian_family() {
        return Err(DecompError::NotHermitian(spec.structure));
    }
    let mut table: SignsumTable = Vec::new();
    for b in spec.blocks.iter().filter(|b| matches!(b.kind, BlockKind::RealEig | BlockKind::Infinity)) {
        for (eig, size) in block_contributions(spec.structure, b)? {
            let add = if size % 2 == 1 { i64::from(b.sign.unwrap_or(1)) } else { 0 };
            match table.iter_mut().find(|(e, _)| *e == eig) {
                Some((_, s)) => *s += add,
                None => table.push((eig, add)),
            }
        }
    }
    Ok(table)
}

/// ℓ = Σ|signsum| over the real-axis eigenvalues together with a decomposition
/// achieving it, obtained by merging opposite-sign odd blocks.
pub fn minimal_ell(spec: &SpectralSpec) -> Result<(usize, RankOneDecomposition), DecompError> {
    if spec.structure != StructureTag::Hermitian {
        return Err(DecompError::NotHermitian(spec.structure));
    }
    let ell: usize = signsum_table(spec)?.iter().map(|(_, s)| s.unsigned_abs() as usize).sum();
    let canonical = SpectralSpec { transform: None, seed_transform: None, ..spec.clone() };
    let dec = decompose_canonical(&canonical)?;
    let mut scalars: Vec<Option<ScalarTerm>> = dec.scalar_terms.into_iter().map(Some).collect();
    let mut pairs = dec.paired_terms;
    for i in 0..scalars.len() {
        let Some(t1) = scalars[i].clone() else { continue };
        let partner = (i + 1..scalars.len())
            .find(|&j| scalars[j].as_ref().is_some_and(|t2| t2.a == -&t1.a && t2.b == -&t1.b));
        if let Some(j) = partner {
            let t2 = scalars[j].take().unwrap();
            scalars[i] = None;
            pairs.push(merge_opposite_signs(spec.structure, &t1, &t2)?);
        }
    }
    let scalars: Vec<ScalarTerm> = scalars.into_iter().flatten().collect();
    let merged = RankOneDecomposition::new(spec.structure, dec.n, scalars, pairs);
    let merged = match spec.resolved_transform()? {
        Some(p) => conjugate_decomposition(&merged, &p)?,
        None => merged,
    };
    Ok((ell, merged))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::build_pencil;
    use crate::pencil::{check_structure, normal_rank};

    fn e(s: &str) -> EigenvalueRef {
        s.parse().unwrap()
    }

    fn example() -> Pencil {
        Pencil::from_int_coeffs(&[&[0, -1], &[-1, 0]], &[&[0, 1], &[1, 0]])
    }

    #[test]
    fn example_two_ways() {
        let h = C::from_ratio(1, 2);
        let u1 = PolyVector::constant(vec![C::one(), C::one()]);
        let u2 = PolyVector::constant(vec![-C::one(), C::one()]);
        let d1 = RankOneDecomposition::new(
            StructureTag::Hermitian,
            2,
            vec![
                ScalarTerm { a: -&h, b: h.clone(), u: u1 },
                ScalarTerm { a: h.clone(), b: -&h, u: u2 },
            ],
            vec![],
        );
        assert_eq!(reconstruct(&d1), example());
        let w = PolyVector::new(vec![C::zero(), -C::one()], vec![C::zero(), C::one()]);
        let d2 = RankOneDecomposition::new(StructureTag::Hermitian, 2, vec![], vec![PairedTerm { v: PolyVector::unit(2, 1), w }]);
        assert_eq!(reconstruct(&d2), example());
        assert!(reconstruct(&RankOneDecomposition::empty(StructureTag::Hermitian, 3)).is_zero());
    }

    #[test]
    fn even_hermitian_block_recipe() {
        let spec = SpectralSpec::new(StructureTag::Hermitian, vec![BlockSpec::real(e("3"), 2, -1)]);
        let dec = decompose_canonical(&spec).unwrap();
        assert_eq!((dec.ell, dec.s), (0, 1));
        let t = &dec.paired_terms[0];
        assert_eq!(t.v, PolyVector::unit(2, 2).scale(&-C::one()));
        assert_eq!(t.w.constant, vec![C::from_int(3), C::from_ratio(1, 2)]);
        assert_eq!(t.w.slope, vec![-C::one(), C::zero()]);
        assert_eq!(reconstruct(&dec), build_pencil(&spec).unwrap());
    }

    #[test]
    fn scalar_forms_round_trip() {
        let (a, b) = (C::from_ratio(2, 3), C::from_int(-5));
        for tag in StructureTag::ALL {
            if tag == StructureTag::SkewSymmetric {
                continue;
            }
            let (c0, c1) = scalar_poly(tag, &a, &b);
            let (a2, b2) = scalar_params(tag, &c0, &c1).unwrap();
            assert_eq!(scalar_poly(tag, &a2, &b2), (c0, c1), "{tag}");
        }
        assert!(scalar_params(StructureTag::Hermitian, &C::i(), &C::zero()).is_none());
    }

    #[test]
    fn merges() {
        let a = C::from_int(2);
        let t1 = ScalarTerm { a: a.clone(), b: -C::one(), u: PolyVector::unit(2, 1) };
        let t2 = ScalarTerm { a: -&a, b: C::one(), u: PolyVector::unit(2, 2) };
        let p = merge_opposite_signs(StructureTag::Hermitian, &t1, &t2).unwrap();
        let lhs = RankOneDecomposition::new(StructureTag::Hermitian, 2, vec![], vec![p]);
        let rhs = RankOneDecomposition::new(StructureTag::Hermitian, 2, vec![t1.clone(), t2], vec![]);
        assert_eq!(reconstruct(&lhs), reconstruct(&rhs));
        assert!(merge_opposite_signs(StructureTag::Hermitian, &t1, &t1).is_err());

        let s1 = ScalarTerm { a: C::one(), b: C::zero(), u: PolyVector::unit(2, 1) };
        let s2 = ScalarTerm { a: C::from_int(4), b: C::zero(), u: PolyVector::unit(2, 2) };
        let p = merge_opposite_signs(StructureTag::TEven, &s1, &s2).unwrap();
        let lhs = RankOneDecomposition::new(StructureTag::TEven, 2, vec![], vec![p]);
        let rhs = RankOneDecomposition::new(StructureTag::TEven, 2, vec![s1, s2], vec![]);
        assert_eq!(reconstruct(&lhs), reconstruct(&rhs));

        let z = ScalarTerm { a: C::one(), b: C::one(), u: PolyVector::zero(3) };
        let p = merge_opposite_signs(StructureTag::Hermitian, &z, &z).unwrap();
        assert!(p.v.is_zero() && p.w.is_zero());
    }

    #[test]
    fn signsums_of_small_examples() {
        let one = e("1");
        let e1 = SpectralSpec::new(StructureTag::Hermitian, vec![BlockSpec::real(one.clone(), 1, 1), BlockSpec::real(one.clone(), 3, 1)]);
        let e2 = SpectralSpec::new(StructureTag::Hermitian, vec![BlockSpec::real(one.clone(), 1, 1), BlockSpec::real(one.clone(), 1, -1)]);
        let e3 = SpectralSpec::new(StructureTag::Hermitian, vec![BlockSpec::real(one.clone(), 2, 1)]);
        assert_eq!(signsum(&e1, &one).unwrap(), 2);
        assert_eq!(signsum(&e2, &one).unwrap(), 0);
        assert_eq!(signsum(&e3, &one).unwrap(), 0);
        let (ell, dec) = minimal_ell(&e2).unwrap();
        assert_eq!((ell, dec.ell, dec.s), (0, 0, 1));
        assert_eq!(reconstruct(&dec), build_pencil(&e2).unwrap());
        let (ell, dec) = minimal_ell(&e1).unwrap();
        assert_eq!((ell, dec.ell), (2, 2));
        assert_eq!(reconstruct(&dec), build_pencil(&e1).unwrap());
    }

    #[test]
    fn every_structure_reconstructs() {
        use BlockKind::*;
        use StructureTag::*;
        let specs = vec![
            SpectralSpec::new(
                StarPalindromic,
                vec![
                    BlockSpec::real(e("3/5+4/5*i"), 3, -1),
                    BlockSpec::infinite(2, 1),
                    BlockSpec::at(ConjugatePair, e("2"), 2),
                    BlockSpec::plain(SingularPair, 1),
                ],
            ),
            SpectralSpec::new(Symmetric, vec![BlockSpec::at(SymBlock, e("1+2*i"), 3), BlockSpec::at(SymBlock, e("inf"), 1)]),
            SpectralSpec::new(SkewSymmetric, vec![BlockSpec::at(SkewSymPair, e("2"), 2), BlockSpec::plain(SingularPair, 1)]),
            SpectralSpec::new(
                TOdd,
                vec![
                    BlockSpec::plain(TOddBlock, 3),
                    BlockSpec::plain(TEvenInfOdd, 1),
                    BlockSpec::plain(TEvenInfOdd, 3),
                    BlockSpec::plain(TEvenZeroEven, 2),
                ],
            ),
            SpectralSpec::new(
                TAntiPalindromic,
                vec![BlockSpec::plain(TEvenInfOdd, 3), BlockSpec::plain(TEvenSingularPair, 2), BlockSpec::plain(TEvenZeroOddPair, 1)],
            ),
        ];
        for spec in specs {
            let dec = decompose_canonical(&spec).unwrap();
            let p = build_pencil(&spec).unwrap();
            assert_eq!(reconstruct(&dec), p, "{}", spec.structure);
            assert!(check_structure(&reconstruct(&dec), spec.structure));
            assert_eq!(dec.rank_bound(), normal_rank(&p), "{}", spec.structure);
            assert_eq!(dec.constant_vector_rank(), dec.ell + dec.s);
            if spec.structure.forces_half_rank() {
                assert_eq!(dec.ell, dec.rank_bound() % 2);
            }
        }
    }

    #[test]
    fn conjugation() {
        let spec = SpectralSpec::new(StructureTag::Hermitian, vec![BlockSpec::real(e("1"), 3, 1)]);
        let dec = decompose_canonical(&spec).unwrap();
        let two = Matrix::identity(3).scale(&C::from_int(2));
        let d2 = conjugate_decomposition(&dec, &two).unwrap();
        assert_eq!(reconstruct(&d2), reconstruct(&dec).scale(&C::from_int(4)));
        assert!(conjugate_decomposition(&dec, &Matrix::zeros(3, 3)).is_err());
        let seeded = spec.with_seed_transform(3);
        assert!(decompose_canonical(&seeded).is_err());
        assert_eq!(reconstruct(&decompose_spec(&seeded).unwrap()), build_pencil(&seeded).unwrap());
    }
}
