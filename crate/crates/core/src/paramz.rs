//! Parameterizations of low-rank (structured) pencils and named witness perturbations.
//!
//! Parameter vectors are laid out as segments α | β | γ | δ, each holding
//! length-n column vectors one after another:
//!
//! * unstructured: α (r vectors), β (r−s), γ (r), δ (s);
//!   v_i = α_i, w_i = γ_i + λδ_i for i ≤ s and v_j = α_j + λβ_j, w_j = γ_j for j > s.
//! * ∗ family: reals a_1, b_1, …, a_ℓ, b_ℓ with ℓ = r − 2s; then u from α (ℓ),
//!   v from β (s), w = γ + λδ (s each).
//! * symmetric: as the ∗ family, but (a_i, b_i) are the first 2ℓ complex entries.
//! * ⊤-even/odd/palindromic/anti-palindromic and skew-symmetric: s = ⌊r/2⌋,
//!   α holds r mod 2 vectors u with a fixed unit scalar, then β, γ, δ.

use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::decomp::{reconstruct, scalar_poly, PairedTerm, RankOneDecomposition, ScalarTerm};
use crate::exactnum::{random_nonzero, GaussianRational as C, Rational};
use crate::pencil::{outer, Pencil, PencilError, PolyVector, Star, StructureTag};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("inadmissible signature for {tag}: n={n}, r={r}, s={s} ({reason})")]
    Signature { tag: StructureTag, n: usize, r: usize, s: usize, reason: &'static str },
    #[error("parameter vector has {got_reals} reals and {got_complexes} complexes, expected {want_reals} and {want_complexes}")]
    Dimension { want_reals: usize, want_complexes: usize, got_reals: usize, got_complexes: usize },
    #[error("recipe parameter {0} must be real")]
    NotReal(&'static str),
    #[error("recipe parameter {0} is not a square in Q(i)")]
    NotSquare(String),
    #[error("recipe size parameters must be positive")]
    BadSize,
    #[error("decomposition cannot be written in this parameterization: {0}")]
    NotRepresentable(&'static str),
    #[error(transparent)]
    Pencil(#[from] PencilError),
}

mod rational_strings {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(|q| q.to_string()).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        strings
            .iter()
            .map(|s| Rational::from_str(s.trim()).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ParamVector {
    #[serde(with = "rational_strings", default)]
    pub reals: Vec<Rational>,
    #[serde(default)]
    pub complexes: Vec<C>,
}

impl ParamVector {
    pub fn zeros(p: usize, m: usize) -> Self {
        ParamVector { reals: vec![Rational::from_integer(0.into()); p], complexes: vec![C::zero(); m] }
    }

    pub fn is_zero(&self) -> bool {
        self.reals.iter().all(|q| *q == Rational::from_integer(0.into())) && self.complexes.iter().all(C::is_zero)
    }
}

/// (p_s, m_s) for a signature, validating admissibility.
pub fn dims(tag: StructureTag, n: usize, r: usize, s: usize) -> Result<(usize, usize), ParamError> {
    let bad = |reason| Err(ParamError::Signature { tag, n, r, s, reason });
    if r == 0 {
        return bad("rank must be positive");
    }
    if tag == StructureTag::None {
        if s > r {
            return bad("need s ≤ r");
        }
        return Ok((0, 3 * r * n));
    }
    if tag.forces_half_rank() {
        if s != r / 2 {
            return bad("s is forced to ⌊r/2⌋");
        }
        if tag == StructureTag::SkewSymmetric && r % 2 == 1 {
            return bad("skew-symmetric pencils have even rank");
        }
        return Ok((0, (3 * r / 2) * n));
    }
    if 2 * s > r {
        return bad("need s ≤ ⌊r/2⌋");
    }
    let ell = r - 2 * s;
    if tag.is_hermitian_family() {
        Ok((2 * ell, (r + s) * n))
    } else {
        Ok((0, 2 * ell + (r + s) * n))
    }
}

fn check_len(tag: StructureTag, n: usize, r: usize, s: usize, x: &ParamVector) -> Result<(), ParamError> {
    let (p, m) = dims(tag, n, r, s)?;
    if x.reals.len() != p || x.complexes.len() != m {
        return Err(ParamError::Dimension {
            want_reals: p,
            want_complexes: m,
            got_reals: x.reals.len(),
            got_complexes: x.complexes.len(),
        });
    }
    Ok(())
}

/// Cursor over consecutive length-n vectors.
struct Segments<'a> {
    data: &'a [C],
    pos: usize,
    n: usize,
}

impl Segments<'_> {
    fn scalar(&mut self) -> C {
        self.pos += 1;
        self.data[self.pos - 1].clone()
    }

    fn vector(&mut self) -> Vec<C> {
        self.pos += self.n;
        self.data[self.pos - self.n..self.pos].to_vec()
    }

    fn vectors(&mut self, count: usize) -> Vec<Vec<C>> {
        (0..count).map(|_| self.vector()).collect()
    }
}

/// Φ_s for unstructured pencils: Σ v_i(λ) w_i(λ)ᵀ.
pub fn phi_general(n: usize, r: usize, s: usize, x: &ParamVector) -> Result<Pencil, ParamError> {
    check_len(StructureTag::None, n, r, s, x)?;
    let mut seg = Segments { data: &x.complexes, pos: 0, n };
    let alpha = seg.vectors(r);
    let beta = seg.vectors(r - s);
    let gamma = seg.vectors(r);
    let delta = seg.vectors(s);
    let mut acc = Pencil::zero(n, n);
    for i in 0..r {
        let (v, w) = if i < s {
            (PolyVector::constant(alpha[i].clone()), PolyVector::new(gamma[i].clone(), delta[i].clone()))
        } else {
            (PolyVector::new(alpha[i].clone(), beta[i - s].clone()), PolyVector::constant(gamma[i].clone()))
        };
        acc = &acc + &outer(&v, &w, Star::Transpose);
    }
    Ok(acc)
}

/// The rank-one terms encoded by a parameter vector.
pub fn params_to_decomposition(
    tag: StructureTag,
    n: usize,
    r: usize,
    s: usize,
    x: &ParamVector,
) -> Result<RankOneDecomposition, ParamError> {
    if tag == StructureTag::None {
        return Err(ParamError::NotRepresentable("unstructured pencils use phi_general"));
    }
    check_len(tag, n, r, s, x)?;
    let mut seg = Segments { data: &x.complexes, pos: 0, n };
    let (ell, coeffs): (usize, Vec<(C, C)>) = if tag.forces_half_rank() {
        let ell = r % 2;
        (ell, vec![(C::one(), C::zero()); ell])
    } else if tag.is_hermitian_family() {
        let ell = r - 2 * s;
        let c = x.reals.chunks(2).map(|ab| (C::real(ab[0].clone()), C::real(ab[1].clone()))).collect();
        (ell, c)
    } else {
        let ell = r - 2 * s;
        let c = (0..ell).map(|_| (seg.scalar(), seg.scalar())).collect();
        (ell, c)
    };
    let us = seg.vectors(ell);
    let vs = seg.vectors(s);
    let gs = seg.vectors(s);
    let ds = seg.vectors(s);
    let scalars = coeffs
        .into_iter()
        .zip(us)
        .map(|((a, b), u)| ScalarTerm { a, b, u: PolyVector::constant(u) })
        .collect();
    let pairs = vs
        .into_iter()
        .zip(gs.into_iter().zip(ds))
        .map(|(v, (g, d))| PairedTerm { v: PolyVector::constant(v), w: PolyVector::new(g, d) })
        .collect();
    Ok(RankOneDecomposition::new(tag, n, scalars, pairs))
}

/// Inverse of [`params_to_decomposition`] for decompositions that fit the layout.
pub fn decomposition_to_params(dec: &RankOneDecomposition, r: usize) -> Result<ParamVector, ParamError> {
    let tag = dec.structure;
    let s = dec.s;
    let (p, m) = dims(tag, dec.n, r, s)?;
    if dec.ell + 2 * s != r {
        return Err(ParamError::NotRepresentable("ℓ + 2s differs from r"));
    }
    let mut reals = Vec::with_capacity(p);
    let mut complexes = Vec::with_capacity(m);
    for t in &dec.scalar_terms {
        if tag.forces_half_rank() {
            if scalar_poly(tag, &t.a, &t.b) != scalar_poly(tag, &C::one(), &C::zero()) {
                return Err(ParamError::NotRepresentable("scalar coefficient must be one"));
            }
        } else if tag.is_hermitian_family() {
            if !t.a.is_real() || !t.b.is_real() {
                return Err(ParamError::NotReal("a, b"));
            }
            reals.push(t.a.re.clone());
            reals.push(t.b.re.clone());
        } else {
            complexes.push(t.a.clone());
            complexes.push(t.b.clone());
        }
    }
    for t in &dec.scalar_terms {
        if t.u.degree() == Some(1) {
            return Err(ParamError::NotRepresentable("u must be constant"));
        }
        complexes.extend(t.u.constant.iter().cloned());
    }
    for t in &dec.paired_terms {
        if t.v.degree() == Some(1) {
            return Err(ParamError::NotRepresentable("v must be constant"));
        }
        complexes.extend(t.v.constant.iter().cloned());
    }
    for t in &dec.paired_terms {
        complexes.extend(t.w.constant.iter().cloned());
    }
    for t in &dec.paired_terms {
        complexes.extend(t.w.slope.iter().cloned());
    }
    Ok(ParamVector { reals, complexes })
}

/// Φ_s for a structure; unstructured pencils fall back to [`phi_general`].
pub fn phi_structured(tag: StructureTag, n: usize, r: usize, s: usize, x: &ParamVector) -> Result<Pencil, ParamError> {
    if tag == StructureTag::None {
        return phi_general(n, r, s, x);
    }
    Ok(reconstruct(&params_to_decomposition(tag, n, r, s, x)?))
}

/// Random parameters; real segments use real draws.
pub fn sample_params<R: Rng + ?Sized>(
    tag: StructureTag,
    n: usize,
    r: usize,
    s: usize,
    rng: &mut R,
    bound: u32,
) -> Result<ParamVector, ParamError> {
    let (p, m) = dims(tag, n, r, s)?;
    // zero coordinates sit on hyperplanes that often belong to the exceptional set
    let reals = (0..p).map(|_| random_nonzero(rng, bound, true).re).collect();
    let complexes = (0..m).map(|_| random_nonzero(rng, bound, false)).collect();
    Ok(ParamVector { reals, complexes })
}

/// The explicit perturbations used as witnesses in the genericity arguments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "recipe", rename_all = "kebab-case")]
pub enum PerturbationRecipe {
    /// ψ at (k, 1) of a k×k frame.
    Ek { k: usize, psi: C },
    /// α at (1, 1) of a ν×ν frame.
    F { nu: usize, alpha: C },
    /// β at (1, ν+1) and (ν+1, 1) of a (ν+ν̃)×(ν+ν̃) frame.
    G { nu: usize, nu_tilde: usize, beta: C },
    /// α·uu∗ with u = e₁ + e_{ν+1} in dimension 2ν.
    FTilde { nu: usize, alpha: C },
    /// β(vw∗ + wv∗) with v = e_{2ν+1} + e_{2ν+ν̃+1}, w = e₁ + e_{ν+1} in dimension 2(ν+ν̃).
    GTilde { nu: usize, nu_tilde: usize, beta: C },
    /// γ(e₁ + e_{nr+2})(e₁ + e_{nr+2})ᵀ in dimension 2·nr; e_{nr+2} is dropped when nr = 1.
    GammaPair { nr: usize, gamma: C },
    /// λ times [`PerturbationRecipe::GammaPair`].
    GammaPairLambda { nr: usize, gamma: C },
    /// (λ+α)e₁e_{2k+1}ᵀ + (λ−α)e_{2k+1}e₁ᵀ in dimension 4k.
    Mk { k: usize, alpha: C },
    /// β(e₁e_{2k₁+2}ᵀ − e_{2k₁+2}e₁ᵀ) in dimension 2(k₁+k₂+1).
    N { k1: usize, k2: usize, beta: C },
    /// γe₁e₁ᵀ.
    OddInfCorner { gamma: C },
    /// γλe₁e₁ᵀ.
    LambdaCorner { gamma: C },
}

impl PerturbationRecipe {
    /// Natural frame size of the recipe.
    pub fn dimension(&self) -> usize {
        use PerturbationRecipe::*;
        match self {
            Ek { k, .. } => *k,
            F { nu, .. } => *nu,
            G { nu, nu_tilde, .. } => nu + nu_tilde,
            FTilde { nu, .. } => 2 * nu,
            GTilde { nu, nu_tilde, .. } => 2 * (nu + nu_tilde),
            GammaPair { nr, .. } | GammaPairLambda { nr, .. } => 2 * nr,
            Mk { k, .. } => 4 * k,
            N { k1, k2, .. } => 2 * (k1 + k2 + 1),
            OddInfCorner { .. } | LambdaCorner { .. } => 1,
        }
    }

    pub fn structure(&self) -> StructureTag {
        use PerturbationRecipe::*;
        match self {
            Ek { .. } => StructureTag::None,
            F { .. } | G { .. } | FTilde { .. } | GTilde { .. } => StructureTag::Hermitian,
            GammaPair { .. } | OddInfCorner { .. } => StructureTag::TEven,
            GammaPairLambda { .. } | Mk { .. } | N { .. } | LambdaCorner { .. } => StructureTag::TOdd,
        }
    }

    fn validate(&self) -> Result<(), ParamError> {
        use PerturbationRecipe::*;
        let positive = match self {
            Ek { k, .. } => *k > 0,
            F { nu, .. } | FTilde { nu, .. } => *nu > 0,
            G { nu, nu_tilde, .. } | GTilde { nu, nu_tilde, .. } => *nu > 0 && *nu_tilde > 0,
            GammaPair { nr, .. } | GammaPairLambda { nr, .. } => *nr > 0,
            Mk { k, .. } => *k > 0,
            N { k1, k2, .. } => *k1 > 0 && *k2 > 0,
            OddInfCorner { .. } | LambdaCorner { .. } => true,
        };
        if !positive {
            return Err(ParamError::BadSize);
        }
        match self {
            F { alpha, .. } | FTilde { alpha, .. } if !alpha.is_real() => Err(ParamError::NotReal("alpha")),
            G { beta, .. } | GTilde { beta, .. } if !beta.is_real() => Err(ParamError::NotReal("beta")),
            _ => Ok(()),
        }
    }

    /// The recipe as a rank-one decomposition in its natural frame, with rank r.
    fn terms(&self) -> Result<(RankOneDecomposition, usize), ParamError> {
        use PerturbationRecipe::*;
        self.validate()?;
        let tag = self.structure();
        let dim = self.dimension();
        let e = |k: usize| PolyVector::unit(dim, k);
        let scalar = |a: &C, u: PolyVector| ScalarTerm { a: a.clone(), b: C::zero(), u };
        let unit_scalar = |u: PolyVector| ScalarTerm { a: C::one(), b: C::zero(), u };
        let root = |g: &C| g.sqrt_exact().ok_or_else(|| ParamError::NotSquare(g.to_string()));
        let gamma_vector = |nr: usize| if nr == 1 { e(1) } else { &e(1) + &e(nr + 2) };
        let dec = |scalars: Vec<ScalarTerm>, pairs: Vec<PairedTerm>| RankOneDecomposition::new(tag, dim, scalars, pairs);
        Ok(match self {
            Ek { k, psi } => {
                let pair = PairedTerm { v: e(*k).scale(psi), w: e(1) };
                (dec(vec![], vec![pair]), 1)
            }
            F { alpha, .. } => (dec(vec![scalar(alpha, e(1))], vec![]), 1),
            G { nu, beta, .. } => {
                let pair = PairedTerm { v: e(nu + 1), w: e(1).scale(&beta.conj()) };
                (dec(vec![], vec![pair]), 2)
            }
            FTilde { nu, alpha } => (dec(vec![scalar(alpha, &e(1) + &e(nu + 1))], vec![]), 1),
            GTilde { nu, nu_tilde, beta } => {
                let v = &e(2 * nu + 1) + &e(2 * nu + nu_tilde + 1);
                let w = (&e(1) + &e(nu + 1)).scale(&beta.conj());
                (dec(vec![], vec![PairedTerm { v, w }]), 2)
            }
            GammaPair { nr, gamma } | GammaPairLambda { nr, gamma } => {
                (dec(vec![unit_scalar(gamma_vector(*nr).scale(&root(gamma)?))], vec![]), 1)
            }
            OddInfCorner { gamma } | LambdaCorner { gamma } => (dec(vec![unit_scalar(e(1).scale(&root(gamma)?))], vec![]), 1),
            Mk { k, alpha } => {
                let w = e(2 * k + 1).times_linear(alpha, &C::one());
                (dec(vec![], vec![PairedTerm { v: e(1), w }]), 2)
            }
            N { k1, beta, .. } => (dec(vec![], vec![PairedTerm { v: e(1), w: e(2 * k1 + 2).scale(beta) }]), 2),
        })
    }

    /// The displayed matrix in its natural frame, built entry by entry.
    fn matrix(&self) -> Result<Pencil, ParamError> {
        use PerturbationRecipe::*;
        self.validate()?;
        let dim = self.dimension();
        let mut p = Pencil::zero(dim, dim);
        let put = |p: &mut Pencil, i: usize, j: usize, c0: &C, c1: &C| {
            p.a[(i - 1, j - 1)] = &p.a[(i - 1, j - 1)] + c0;
            p.b[(i - 1, j - 1)] = &p.b[(i - 1, j - 1)] + c1;
        };
        let z = C::zero();
        match self {
            Ek { k, psi } => put(&mut p, *k, 1, psi, &z),
            F { alpha, .. } => put(&mut p, 1, 1, alpha, &z),
            G { nu, beta, .. } => {
                put(&mut p, 1, nu + 1, beta, &z);
                put(&mut p, nu + 1, 1, beta, &z);
            }
            FTilde { nu, alpha } => {
                for i in [1, nu + 1] {
                    for j in [1, nu + 1] {
                        put(&mut p, i, j, alpha, &z);
                    }
                }
            }
            GTilde { nu, nu_tilde, beta } => {
                for i in [1, nu + 1] {
                    for j in [2 * nu + 1, 2 * nu + nu_tilde + 1] {
                        put(&mut p, i, j, beta, &z);
                        put(&mut p, j, i, beta, &z);
                    }
                }
            }
            GammaPair { nr, gamma } | GammaPairLambda { nr, gamma } => {
                let idx: Vec<usize> = if *nr == 1 { vec![1] } else { vec![1, nr + 2] };
                let lambda = matches!(self, GammaPairLambda { .. });
                for &i in &idx {
                    for &j in &idx {
                        if lambda {
                            put(&mut p, i, j, &z, gamma);
                        } else {
                            put(&mut p, i, j, gamma, &z);
                        }
                    }
                }
            }
            Mk { k, alpha } => {
                put(&mut p, 1, 2 * k + 1, alpha, &C::one());
                put(&mut p, 2 * k + 1, 1, &-alpha, &C::one());
            }
            N { k1, beta, .. } => {
                put(&mut p, 1, 2 * k1 + 2, beta, &z);
                put(&mut p, 2 * k1 + 2, 1, &-beta, &z);
            }
            OddInfCorner { gamma } => put(&mut p, 1, 1, gamma, &z),
            LambdaCorner { gamma } => put(&mut p, 1, 1, &z, gamma),
        }
        Ok(p)
    }
}

/// The recipe's matrix embedded into an n×n frame at (offset, offset).
pub fn named_perturbation(recipe: &PerturbationRecipe, n: usize, offset: usize) -> Result<Pencil, ParamError> {
    Ok(recipe.matrix()?.embed(n, offset)?)
}

fn embed_vector(v: &PolyVector, n: usize, offset: usize) -> PolyVector {
    let mut out = PolyVector::zero(n);
    for k in 0..v.len() {
        out.constant[offset + k] = v.constant[k].clone();
        out.slope[offset + k] = v.slope[k].clone();
    }
    out
}

/// An explicit (structure, r, s, x) with Φ_s(x) equal to the embedded recipe.
pub fn witness_params(
    recipe: &PerturbationRecipe,
    n: usize,
    offset: usize,
) -> Result<(StructureTag, usize, usize, ParamVector), ParamError> {
    let (dec, r) = recipe.terms()?;
    if offset + dec.n > n {
        return Err(ParamError::Pencil(PencilError::Shape(format!(
            "recipe of size {} does not fit at offset {offset} in {n}x{n}",
            dec.n
        ))));
    }
    let tag = dec.structure;
    let s = dec.s;
    if tag == StructureTag::None {
        // v_1 = α_1 constant, w_1 = γ_1 + λδ_1 with s = r = 1
        let t = &dec.paired_terms[0];
        let v = embed_vector(&t.v, n, offset);
        let w = embed_vector(&t.w, n, offset);
        let complexes = [v.constant, w.constant, w.slope].concat();
        return Ok((tag, r, s, ParamVector { reals: Vec::new(), complexes }));
    }
    let moved = RankOneDecomposition::new(
        tag,
        n,
        dec.scalar_terms
            .iter()
            .map(|t| ScalarTerm { u: embed_vector(&t.u, n, offset), ..t.clone() })
            .collect(),
        dec.paired_terms
            .iter()
            .map(|t| PairedTerm { v: embed_vector(&t.v, n, offset), w: embed_vector(&t.w, n, offset) })
            .collect(),
    );
    Ok((tag, r, s, decomposition_to_params(&moved, r)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::{build_block, BlockKind, BlockSpec};
    use crate::pencil::{check_structure, normal_rank};
    use crate::smith::det_poly;
    use crate::poly::Poly;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(n: i64) -> C {
        C::from_int(n)
    }

    #[test]
    fn dimension_table() {
        use StructureTag::*;
        assert_eq!(dims(Hermitian, 4, 2, 1).unwrap(), (0, 12));
        assert_eq!(dims(TEven, 4, 3, 1).unwrap(), (0, 16));
        assert_eq!(dims(None, 2, 1, 0).unwrap(), (0, 6));
        assert_eq!(dims(Symmetric, 3, 3, 1).unwrap(), (0, 2 + 12));
        assert!(dims(TEven, 4, 3, 0).is_err());
        assert!(dims(SkewSymmetric, 4, 3, 1).is_err());
        assert!(dims(Hermitian, 4, 2, 2).is_err());
    }

    #[test]
    fn zero_parameters_give_zero() {
        for tag in StructureTag::ALL {
            let (r, s) = (2, 1);
            let (p, m) = dims(tag, 3, r, s).unwrap();
            assert!(phi_structured(tag, 3, r, s, &ParamVector::zeros(p, m)).unwrap().is_zero());
        }
    }

    #[test]
    fn general_example() {
        // r = s = 1, v = e1, w = e1 + λe2
        let x = ParamVector { reals: vec![], complexes: vec![c(1), c(0), c(1), c(0), c(0), c(1)] };
        assert_eq!(phi_general(2, 1, 1, &x).unwrap(), Pencil::from_int_coeffs(&[&[1, 0], &[0, 0]], &[&[0, 1], &[0, 0]]));
    }

    #[test]
    fn skew_symmetric_shape() {
        // v = e1, w = e2
        let x = ParamVector { reals: vec![], complexes: vec![c(1), c(0), c(0), c(1), c(0), c(0)] };
        let p = phi_structured(StructureTag::SkewSymmetric, 2, 2, 1, &x).unwrap();
        assert_eq!(p, Pencil::from_int_coeffs(&[&[0, 1], &[-1, 0]], &[&[0, 0], &[0, 0]]));
    }

    #[test]
    fn random_draws_are_structured_with_bounded_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for tag in StructureTag::ALL {
            for r in 1..=3 {
                for s in 0..=r / 2 {
                    if dims(tag, 4, r, s).is_err() {
                        continue;
                    }
                    let x = sample_params(tag, 4, r, s, &mut rng, 5).unwrap();
                    let p = phi_structured(tag, 4, r, s, &x).unwrap();
                    assert!(check_structure(&p, tag), "{tag} r={r} s={s}");
                    assert!(normal_rank(&p) <= r);
                }
            }
        }
    }

    fn all_recipes() -> Vec<PerturbationRecipe> {
        use PerturbationRecipe::*;
        vec![
            Ek { k: 3, psi: c(2) },
            F { nu: 2, alpha: C::from_ratio(1, 3) },
            G { nu: 2, nu_tilde: 3, beta: c(-2) },
            FTilde { nu: 2, alpha: c(5) },
            GTilde { nu: 1, nu_tilde: 2, beta: c(3) },
            GammaPair { nr: 3, gamma: C::from_ratio(1, 4) },
            GammaPair { nr: 1, gamma: c(4) },
            GammaPairLambda { nr: 2, gamma: c(-1) },
            Mk { k: 1, alpha: c(2) },
            N { k1: 1, k2: 2, beta: c(3) },
            OddInfCorner { gamma: c(9) },
            LambdaCorner { gamma: C::from_parts((0, 1), (2, 1)) },
        ]
    }

    #[test]
    fn witnesses_reproduce_recipes() {
        for recipe in all_recipes() {
            let n = recipe.dimension() + 2;
            let target = named_perturbation(&recipe, n, 1).unwrap();
            assert!(check_structure(&target, recipe.structure()), "{recipe:?}");
            let (tag, r, s, x) = witness_params(&recipe, n, 1).unwrap();
            assert_eq!(tag, recipe.structure());
            assert_eq!(phi_structured(tag, n, r, s, &x).unwrap(), target, "{recipe:?}");
        }
        let bad = PerturbationRecipe::OddInfCorner { gamma: c(2) };
        assert!(witness_params(&bad, 2, 0).is_err());
        assert!(named_perturbation(&PerturbationRecipe::F { nu: 3, alpha: c(1) }, 2, 0).is_err());
    }

    #[test]
    fn ek_determinant() {
        let j = crate::canon::jordan_pencil(&c(0), 2).unwrap();
        let e = named_perturbation(&PerturbationRecipe::Ek { k: 2, psi: c(1) }, 2, 0).unwrap();
        assert_eq!(det_poly(&(&j + &e)).unwrap().det_poly, Poly::from_ints(&[-1, 0, 1]));
    }

    #[test]
    fn gamma_pair_determinant() {
        let gamma = C::from_ratio(1, 3);
        let l = build_block(StructureTag::TEven, &BlockSpec::plain(BlockKind::TEvenZeroOddPair, 3)).unwrap();
        let e = named_perturbation(&PerturbationRecipe::GammaPair { nr: 3, gamma: gamma.clone() }, 6, 0).unwrap();
        let want = &Poly::from_ints(&[0, 0, 0, 0, 1]) * &Poly::new(vec![-&(&gamma * &c(2)), C::zero(), C::one()]);
        assert_eq!(det_poly(&(&l + &e)).unwrap().det_poly, want);
    }
}
