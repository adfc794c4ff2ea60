//! Structured canonical blocks and the pencils assembled from them.
//!
//! Every structure has a base catalogue: Hermitian blocks for the ∗ family,
//! ⊤-even blocks (plus two native ⊤-odd blocks) for the ⊤ family, and direct
//! catalogues for symmetric, skew-symmetric and unstructured pencils. Blocks
//! for the other structures are obtained by the maps 𝔦·, A+λ(−𝔦B), reversal
//! and the Cayley transforms, and `eig` is always given in the coordinates of
//! the requested structure.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{random_scalar, GaussianRational as C};
use crate::matrix::Matrix;
use crate::pencil::{cayley, check_structure, Pencil, PencilError, StructureTag};
use crate::smith::{EigenvalueRef, MultiplicityList};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("block kind {kind:?} is not available for structure {tag}")]
    IllegalKind { tag: StructureTag, kind: BlockKind },
    #[error("invalid block size {size} for {kind:?}: {reason}")]
    BadSize { kind: BlockKind, size: usize, reason: &'static str },
    #[error("{kind:?} block needs a sign of +1 or -1")]
    MissingSign { kind: BlockKind },
    #[error("{kind:?} block does not take a sign")]
    UnexpectedSign { kind: BlockKind },
    #[error("bad eigenvalue for {kind:?}: {reason}")]
    BadEigenvalue { kind: BlockKind, reason: String },
    #[error("transform must be {0}x{0}")]
    TransformShape(usize),
    #[error("transform is not invertible")]
    SingularTransform,
    #[error("built pencil fails the {0} structure check")]
    StructureCheck(StructureTag),
    #[error(transparent)]
    Pencil(#[from] PencilError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockKind {
    /// σR·J_k(a−λ), a real (∗ family).
    RealEig,
    /// σR(−I+λN), eigenvalue ∞ (∗ family).
    Infinity,
    /// R·diag(J_k(μ̄−λ), J_k(μ−λ)), Im μ > 0 (∗ family).
    ConjugatePair,
    /// Right and left singular blocks of order α paired up.
    SingularPair,
    /// J_k(a−λ), unstructured.
    PlainJordan,
    /// R·J_k(a−λ), symmetric.
    SymBlock,
    /// [[0, D], [−D, 0]] with D = R·J_k(a−λ), skew-symmetric.
    SkewSymPair,
    /// Odd block at ∞ (⊤-even).
    TEvenInfOdd,
    /// Pair of equal even blocks at ∞ (⊤-even).
    TEvenInfEvenPair,
    /// Pair of equal odd blocks at 0 (⊤-even).
    TEvenZeroOddPair,
    /// Even block at 0 (⊤-even).
    TEvenZeroEven,
    /// Blocks at μ and −μ, μ ≠ 0 (⊤-even).
    TEvenNonzeroPair,
    /// Singular pair [[0, L(−λ)ᵀ], [L(λ), 0]] (⊤-even).
    TEvenSingularPair,
    /// Odd block at 0 (⊤-odd).
    TOddBlock,
    /// Pair of equal even blocks at 0 (⊤-odd).
    TOddZeroEvenPair,
}

impl BlockKind {
    pub fn is_singular(self) -> bool {
        matches!(self, BlockKind::SingularPair | BlockKind::TEvenSingularPair)
    }

    fn is_pair(self) -> bool {
        use BlockKind::*;
        matches!(
            self,
            ConjugatePair | SkewSymPair | TEvenInfEvenPair | TEvenZeroOddPair | TEvenNonzeroPair | TOddZeroEvenPair
        )
    }

    fn is_t_even(self) -> bool {
        use BlockKind::*;
        matches!(
            self,
            TEvenInfOdd | TEvenInfEvenPair | TEvenZeroOddPair | TEvenZeroEven | TEvenNonzeroPair | TEvenSingularPair
        )
    }

    fn takes_sign(self) -> bool {
        matches!(self, BlockKind::RealEig | BlockKind::Infinity)
    }

    /// Number of rows the block occupies.
    pub fn dimension(self, size: usize) -> usize {
        if self.is_singular() {
            2 * size + 1
        } else if self.is_pair() {
            2 * size
        } else {
            size
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub kind: BlockKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eig: Option<EigenvalueRef>,
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<i8>,
}

impl BlockSpec {
    pub fn new(kind: BlockKind, eig: Option<EigenvalueRef>, size: usize, sign: Option<i8>) -> Self {
        BlockSpec { kind, eig, size, sign }
    }

    /// Signed block at a real eigenvalue of a ∗-structured pencil.
    pub fn real(eig: EigenvalueRef, size: usize, sign: i8) -> Self {
        BlockSpec::new(BlockKind::RealEig, Some(eig), size, Some(sign))
    }

    pub fn infinite(size: usize, sign: i8) -> Self {
        BlockSpec::new(BlockKind::Infinity, None, size, Some(sign))
    }

    pub fn at(kind: BlockKind, eig: EigenvalueRef, size: usize) -> Self {
        BlockSpec::new(kind, Some(eig), size, None)
    }

    pub fn plain(kind: BlockKind, size: usize) -> Self {
        BlockSpec::new(kind, None, size, None)
    }

    pub fn dimension(&self) -> usize {
        self.kind.dimension(self.size)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralSpec {
    pub structure: StructureTag,
    pub blocks: Vec<BlockSpec>,
    #[serde(default)]
    pub transform: Option<Vec<Vec<C>>>,
    #[serde(default)]
    pub seed_transform: Option<u64>,
}

impl SpectralSpec {
    pub fn new(structure: StructureTag, blocks: Vec<BlockSpec>) -> Self {
        SpectralSpec { structure, blocks, transform: None, seed_transform: None }
    }

    pub fn with_transform(mut self, p: &Matrix) -> Self {
        self.transform = Some(p.to_rows());
        self
    }

    pub fn with_seed_transform(mut self, seed: u64) -> Self {
        self.seed_transform = Some(seed);
        self
    }

    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(BlockSpec::dimension).sum()
    }

    pub fn is_canonical_layout(&self) -> bool {
        self.transform.is_none() && self.seed_transform.is_none()
    }

    pub fn has_singular_blocks(&self) -> bool {
        self.blocks.iter().any(|b| b.kind.is_singular())
    }

    /// The congruence matrix requested by `transform` or `seed_transform`, if any.
    pub fn resolved_transform(&self) -> Result<Option<Matrix>, CanonError> {
        let n = self.dimension();
        if let Some(rows) = &self.transform {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(CanonError::TransformShape(n));
            }
            let m = Matrix::from_rows(rows.clone());
            if m.det().is_zero() {
                return Err(CanonError::SingularTransform);
            }
            return Ok(Some(m));
        }
        Ok(self.seed_transform.map(|seed| random_invertible(n, seed)))
    }

    /// Distinct eigenvalues in order of first appearance.
    pub fn eigenvalues(&self) -> Result<Vec<EigenvalueRef>, CanonError> {
        Ok(block_multiplicities(self)?.into_iter().map(|(e, _)| e).collect())
    }
}

/// Random invertible matrix with small Gaussian-rational entries.
pub fn random_invertible(n: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let entries: Vec<C> = (0..n * n).map(|_| random_scalar(&mut rng, 3, false)).collect();
        let m = Matrix::from_fn(n, n, |i, j| entries[i * n + j].clone());
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// Möbius map z ↦ (az+b)/(cz+d) on the extended plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mobius {
    pub a: C,
    pub b: C,
    pub c: C,
    pub d: C,
}

impl Mobius {
    fn from_ints(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> Self {
        let z = |(re, im): (i64, i64)| C::from_parts((re, 1), (im, 1));
        Mobius { a: z(a), b: z(b), c: z(c), d: z(d) }
    }

    pub fn identity() -> Self {
        Mobius::from_ints((1, 0), (0, 0), (0, 0), (1, 0))
    }

    pub fn inverse(&self) -> Self {
        Mobius { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    pub fn apply(&self, z: &EigenvalueRef) -> EigenvalueRef {
        match z {
            EigenvalueRef::Infinity => {
                if self.c.is_zero() {
                    EigenvalueRef::Infinity
                } else {
                    EigenvalueRef::Finite(self.a.checked_div(&self.c).unwrap())
                }
            }
            EigenvalueRef::Finite(z) => {
                let num = &(&self.a * z) + &self.b;
                let den = &(&self.c * z) + &self.d;
                match num.checked_div(&den) {
                    Ok(q) => EigenvalueRef::Finite(q),
                    Err(_) => EigenvalueRef::Infinity,
                }
            }
        }
    }
}

/// Map from target-structure eigenvalues to the eigenvalues of the base block.
pub fn base_map(tag: StructureTag, kind: BlockKind) -> Mobius {
    use StructureTag::*;
    let m = Mobius::from_ints;
    match tag {
        StarEven => m((0, -1), (0, 0), (0, 0), (1, 0)),
        StarOdd => m((0, 0), (0, -1), (1, 0), (0, 0)),
        StarPalindromic => m((0, -1), (0, 1), (1, 0), (1, 0)),
        StarAntiPalindromic => m((0, -1), (0, -1), (-1, 0), (1, 0)),
        TOdd if kind.is_t_even() => m((0, 0), (1, 0), (1, 0), (0, 0)),
        TPalindromic => m((1, 0), (-1, 0), (1, 0), (1, 0)),
        TAntiPalindromic => m((1, 0), (1, 0), (-1, 0), (1, 0)),
        _ => Mobius::identity(),
    }
}

fn kind_allowed(tag: StructureTag, kind: BlockKind) -> bool {
    use BlockKind::*;
    use StructureTag as T;
    match tag {
        _ if tag.is_hermitian_family() => matches!(kind, RealEig | Infinity | ConjugatePair | SingularPair),
        T::Symmetric => matches!(kind, SymBlock | SingularPair),
        T::SkewSymmetric => matches!(kind, SkewSymPair | SingularPair),
        T::TEven | T::TPalindromic | T::TAntiPalindromic => kind.is_t_even(),
        T::TOdd => kind.is_t_even() || matches!(kind, TOddBlock | TOddZeroEvenPair),
        _ => kind == PlainJordan,
    }
}

/// J_k(a−λ): a−λ on the diagonal, ones on the superdiagonal.
pub fn jordan_pencil(a: &C, k: usize) -> Result<Pencil, CanonError> {
    if k == 0 {
        return Err(CanonError::BadSize { kind: BlockKind::PlainJordan, size: k, reason: "must be positive" });
    }
    Ok(jordan(a, k))
}

fn jordan(a: &C, k: usize) -> Pencil {
    Pencil::from_entries(k, k, |i, j| {
        if i == j {
            (a.clone(), -C::one())
        } else if j == i + 1 {
            (C::one(), C::zero())
        } else {
            (C::zero(), C::zero())
        }
    })
}

/// J_k(λ) = λI + N.
pub(crate) fn jordan_at_lambda(k: usize, negate_lambda: bool) -> Pencil {
    let s = if negate_lambda { -C::one() } else { C::one() };
    Pencil::from_entries(k, k, |i, j| {
        if i == j {
            (C::zero(), s.clone())
        } else if j == i + 1 {
            (C::one(), C::zero())
        } else {
            (C::zero(), C::zero())
        }
    })
}

/// −I + λN, the size-k block at ∞.
fn infinite_jordan(k: usize) -> Pencil {
    nilpotent_shift(k, -C::one(), C::one())
}

/// c·I + λ·d·N
fn nilpotent_shift(k: usize, c: C, d: C) -> Pencil {
    Pencil::from_entries(k, k, |i, j| {
        if i == j {
            (c.clone(), C::zero())
        } else if j == i + 1 {
            (C::zero(), d.clone())
        } else {
            (C::zero(), C::zero())
        }
    })
}

/// L_α: λ on the diagonal, ones on the superdiagonal, α×(α+1).
pub fn singular_block(alpha: usize) -> Result<Pencil, CanonError> {
    if alpha == 0 {
        return Err(CanonError::BadSize { kind: BlockKind::SingularPair, size: 0, reason: "must be positive" });
    }
    Ok(singular(alpha, false))
}

fn singular(alpha: usize, negate_lambda: bool) -> Pencil {
    let s = if negate_lambda { -C::one() } else { C::one() };
    Pencil::from_entries(alpha, alpha + 1, |i, j| {
        if j == i {
            (C::zero(), s.clone())
        } else if j == i + 1 {
            (C::one(), C::zero())
        } else {
            (C::zero(), C::zero())
        }
    })
}

fn r_times(p: &Pencil) -> Pencil {
    let r = Matrix::reverse_identity(p.rows());
    Pencil { a: &r * &p.a, b: &r * &p.b }
}

/// [[0, R·Y], [R·X, 0]]
pub(crate) fn pair(x: &Pencil, y: &Pencil) -> Pencil {
    let q = x.rows();
    let mut p = Pencil::zero(2 * q, 2 * q);
    let (rx, ry) = (r_times(x), r_times(y));
    p.a.set_block(0, q, &ry.a);
    p.b.set_block(0, q, &ry.b);
    p.a.set_block(q, 0, &rx.a);
    p.b.set_block(q, 0, &rx.b);
    p
}

/// [[0, top], [bottom, 0]] for a (α+1)×α top and α×(α+1) bottom.
fn singular_frame(top: &Pencil, bottom: &Pencil) -> Pencil {
    let alpha = bottom.rows();
    let n = 2 * alpha + 1;
    let mut p = Pencil::zero(n, n);
    p.a.set_block(0, alpha + 1, &top.a);
    p.b.set_block(0, alpha + 1, &top.b);
    p.a.set_block(alpha + 1, 0, &bottom.a);
    p.b.set_block(alpha + 1, 0, &bottom.b);
    p
}

fn transpose(p: &Pencil) -> Pencil {
    Pencil { a: p.a.transpose(), b: p.b.transpose() }
}

/// Antidiagonal sign pattern of the odd ⊤ blocks: +1 on rows 2..=k+1, −1 below (1-based).
fn odd_antidiagonal_pair(k: usize, plain_on_b: bool) -> Pencil {
    let n = 2 * k + 1;
    let mut p = Pencil::zero(n, n);
    for i in 1..=n {
        let plain = &mut if plain_on_b { &mut p.b } else { &mut p.a }[(i - 1, n - i)];
        *plain = C::one();
    }
    for i in 2..=n {
        let v = if i <= k + 1 { C::one() } else { -C::one() };
        let m = if plain_on_b { &mut p.a } else { &mut p.b };
        m[(i - 1, n + 1 - i)] = v;
    }
    p
}

/// The ⊤-even block (d) of size 2k at eigenvalue 0.
fn zero_even_block(k: usize) -> Pencil {
    let n = 2 * k;
    let mut p = Pencil::zero(n, n);
    for i in 1..=n {
        p.b[(i - 1, n - i)] = if i <= k { C::one() } else { -C::one() };
        if i >= 2 {
            p.a[(i - 1, n + 1 - i)] = C::one();
        }
    }
    p
}

fn sign_of(spec: &BlockSpec) -> Result<C, CanonError> {
    match spec.sign {
        Some(1) => Ok(C::one()),
        Some(-1) => Ok(-C::one()),
        _ => Err(CanonError::MissingSign { kind: spec.kind }),
    }
}

struct Resolved {
    map: Mobius,
    base: Option<EigenvalueRef>,
}

fn resolve(tag: StructureTag, spec: &BlockSpec) -> Result<Resolved, CanonError> {
    let kind = spec.kind;
    if !kind_allowed(tag, kind) {
        return Err(CanonError::IllegalKind { tag, kind });
    }
    if spec.size == 0 {
        return Err(CanonError::BadSize { kind, size: 0, reason: "must be positive" });
    }
    let parity = |odd: bool| -> Result<(), CanonError> {
        if (spec.size % 2 == 1) != odd {
            let reason = if odd { "must be odd" } else { "must be even" };
            return Err(CanonError::BadSize { kind, size: spec.size, reason });
        }
        Ok(())
    };
    use BlockKind::*;
    match kind {
        TEvenInfOdd | TEvenZeroOddPair | TOddBlock => parity(true)?,
        TEvenInfEvenPair | TEvenZeroEven | TOddZeroEvenPair => parity(false)?,
        _ => {}
    }
    let signed = kind.takes_sign() && tag.is_hermitian_family();
    if signed {
        sign_of(spec)?;
    } else if spec.sign.is_some() {
        return Err(CanonError::UnexpectedSign { kind });
    }
    let map = base_map(tag, kind);
    let base = spec.eig.as_ref().map(|e| map.apply(e));
    let bad = |reason: &str| CanonError::BadEigenvalue { kind, reason: reason.to_string() };
    let fixed = |want: EigenvalueRef| -> Result<Option<EigenvalueRef>, CanonError> {
        match &base {
            Some(b) if *b != want => Err(bad("eigenvalue is fixed by the block kind")),
            _ => Ok(Some(want)),
        }
    };
    let base = match kind {
        SingularPair | TEvenSingularPair => {
            if base.is_some() {
                return Err(bad("singular blocks carry no eigenvalue"));
            }
            None
        }
        Infinity | TEvenInfOdd | TEvenInfEvenPair => fixed(EigenvalueRef::Infinity)?,
        TEvenZeroOddPair | TEvenZeroEven | TOddBlock | TOddZeroEvenPair => fixed(EigenvalueRef::int(0))?,
        RealEig => match base {
            Some(EigenvalueRef::Finite(ref a)) if !a.is_real() => {
                return Err(bad("not on the real axis of the structure"))
            }
            Some(b) => Some(b),
            None => return Err(bad("missing")),
        },
        ConjugatePair => match base {
            Some(EigenvalueRef::Finite(mu)) if !mu.is_real() => {
                Some(EigenvalueRef::Finite(if mu.im < num_traits::Zero::zero() { mu.conj() } else { mu }))
            }
            _ => return Err(bad("needs a finite eigenvalue off the real axis of the structure")),
        },
        TEvenNonzeroPair => match base {
            Some(EigenvalueRef::Finite(mu)) if !mu.is_zero() => Some(EigenvalueRef::Finite(mu)),
            _ => return Err(bad("needs a finite nonzero eigenvalue")),
        },
        PlainJordan | SymBlock | SkewSymPair => match base {
            Some(b) => Some(b),
            None => return Err(bad("missing")),
        },
    };
    Ok(Resolved { map, base })
}

fn finite_or_inf_block(base: &EigenvalueRef, k: usize) -> Pencil {
    match base {
        EigenvalueRef::Finite(a) => jordan(a, k),
        EigenvalueRef::Infinity => infinite_jordan(k),
    }
}

/// The block in its base structure (Hermitian, ⊤-even, ⊤-odd native, symmetric, skew-symmetric, plain).
fn base_block(spec: &BlockSpec, base: Option<&EigenvalueRef>) -> Result<Pencil, CanonError> {
    use BlockKind::*;
    let k = spec.size;
    Ok(match spec.kind {
        RealEig | Infinity => {
            let sigma = sign_of(spec)?;
            r_times(&finite_or_inf_block(base.unwrap(), k)).scale(&sigma)
        }
        ConjugatePair => {
            let mu = base.unwrap().as_finite().unwrap();
            pair(&jordan(&mu.conj(), k), &jordan(mu, k))
        }
        SingularPair => {
            let l = singular(k, false);
            singular_frame(&transpose(&l), &l)
        }
        PlainJordan => finite_or_inf_block(base.unwrap(), k),
        SymBlock => r_times(&finite_or_inf_block(base.unwrap(), k)),
        SkewSymPair => {
            let d = r_times(&finite_or_inf_block(base.unwrap(), k));
            let mut p = Pencil::zero(2 * k, 2 * k);
            let nd = -&d;
            p.a.set_block(0, k, &d.a);
            p.b.set_block(0, k, &d.b);
            p.a.set_block(k, 0, &nd.a);
            p.b.set_block(k, 0, &nd.b);
            p
        }
        TEvenInfOdd => odd_antidiagonal_pair(k / 2, false),
        TEvenInfEvenPair => pair(&nilpotent_shift(k, C::one(), -C::one()), &nilpotent_shift(k, C::one(), C::one())),
        TEvenZeroOddPair => pair(&jordan_at_lambda(k, true), &jordan_at_lambda(k, false)),
        TEvenZeroEven => zero_even_block(k / 2),
        TEvenNonzeroPair => {
            let mu = base.unwrap().as_finite().unwrap();
            // J_q(μ+λ) = J_q(μ−λ) at −λ, eigenvalue −μ
            pair(&jordan(mu, k), &jordan(mu, k).neg_arg())
        }
        TEvenSingularPair => singular_frame(&transpose(&singular(k, true)), &singular(k, false)),
        TOddBlock => odd_antidiagonal_pair(k / 2, true),
        TOddZeroEvenPair => pair(&jordan_at_lambda(k, false), &-&jordan_at_lambda(k, true)),
    })
}

/// Moves a base-structure block into the requested structure.
fn transport(tag: StructureTag, kind: BlockKind, p: Pencil) -> Pencil {
    use StructureTag::*;
    let i = C::i();
    let minus_i = -&i;
    let star_even = |p: &Pencil| Pencil { a: p.a.clone(), b: p.b.scale(&minus_i) };
    match tag {
        SkewHermitian => p.scale(&minus_i),
        StarEven => star_even(&p),
        StarOdd => star_even(&p).reversal(),
        StarPalindromic => cayley(&star_even(&p), false),
        StarAntiPalindromic => cayley(&star_even(&p), true),
        TOdd if kind.is_t_even() => p.reversal(),
        TPalindromic => cayley(&p, false),
        TAntiPalindromic => cayley(&p, true),
        _ => p,
    }
}

/// The displayed canonical block for `spec`, in the coordinates of `tag`.
pub fn build_block(tag: StructureTag, spec: &BlockSpec) -> Result<Pencil, CanonError> {
    let res = resolve(tag, spec)?;
    let mut p = base_block(spec, res.base.as_ref())?;
    if tag == StructureTag::SkewSymmetric && spec.kind == BlockKind::SingularPair {
        // [[0, −L_αᵀ], [L_α, 0]]
        let alpha = spec.size;
        let top = -&transpose(&singular(alpha, false));
        p.a.set_block(0, alpha + 1, &top.a);
        p.b.set_block(0, alpha + 1, &top.b);
    }
    Ok(transport(tag, spec.kind, p))
}

/// (eigenvalue, partial multiplicity) pieces contributed by one block, in target coordinates.
pub fn block_contributions(tag: StructureTag, spec: &BlockSpec) -> Result<Vec<(EigenvalueRef, usize)>, CanonError> {
    use BlockKind::*;
    let res = resolve(tag, spec)?;
    let inv = res.map.inverse();
    let k = spec.size;
    let Some(base) = res.base else {
        return Ok(Vec::new());
    };
    let bases: Vec<EigenvalueRef> = match spec.kind {
        ConjugatePair => {
            let mu = base.as_finite().unwrap().clone();
            vec![EigenvalueRef::Finite(mu.clone()), EigenvalueRef::Finite(mu.conj())]
        }
        TEvenNonzeroPair => {
            let mu = base.as_finite().unwrap().clone();
            vec![EigenvalueRef::Finite(mu.clone()), EigenvalueRef::Finite(-mu)]
        }
        SkewSymPair | TEvenInfEvenPair | TEvenZeroOddPair | TOddZeroEvenPair => vec![base.clone(), base],
        _ => vec![base],
    };
    Ok(bases.into_iter().map(|b| (inv.apply(&b), k)).collect())
}

/// Sorted partial multiplicities per distinct eigenvalue, in order of first appearance.
pub fn block_multiplicities(spec: &SpectralSpec) -> Result<Vec<(EigenvalueRef, MultiplicityList)>, CanonError> {
    let mut out: Vec<(EigenvalueRef, Vec<usize>)> = Vec::new();
    for b in &spec.blocks {
        for (e, k) in block_contributions(spec.structure, b)? {
            match out.iter_mut().find(|(x, _)| *x == e) {
                Some((_, v)) => v.push(k),
                None => out.push((e, vec![k])),
            }
        }
    }
    Ok(out.into_iter().map(|(e, v)| (e, MultiplicityList::new(v))).collect())
}

/// Direct sum of the blocks followed by the congruence P·K·P^⋆.
pub fn build_pencil(spec: &SpectralSpec) -> Result<Pencil, CanonError> {
    let blocks = spec
        .blocks
        .iter()
        .map(|b| build_block(spec.structure, b))
        .collect::<Result<Vec<_>, _>>()?;
    let k = Pencil::direct_sum(&blocks);
    let p = match spec.resolved_transform()? {
        Some(t) => k.congruence(&t, spec.structure.star()),
        None => k,
    };
    if !check_structure(&p, spec.structure) {
        return Err(CanonError::StructureCheck(spec.structure));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smith::{is_regular, partial_multiplicities};

    fn c(n: i64) -> C {
        C::from_int(n)
    }

    #[test]
    fn jordan_and_singular_shapes() {
        assert_eq!(jordan_pencil(&c(0), 2).unwrap(), Pencil::from_int_coeffs(&[&[0, 1], &[0, 0]], &[&[-1, 0], &[0, -1]]));
        assert_eq!(singular_block(2).unwrap(), Pencil::from_int_coeffs(&[&[0, 1, 0], &[0, 0, 1]], &[&[1, 0, 0], &[0, 1, 0]]));
        assert!(jordan_pencil(&c(1), 0).is_err());
        assert!(singular_block(0).is_err());
    }

    #[test]
    fn hermitian_blocks() {
        let b = build_block(StructureTag::Hermitian, &BlockSpec::real(EigenvalueRef::int(1), 2, 1)).unwrap();
        assert_eq!(b, Pencil::from_int_coeffs(&[&[0, 1], &[1, 1]], &[&[0, -1], &[-1, 0]]));
        let inf = build_block(StructureTag::Hermitian, &BlockSpec::infinite(1, 1)).unwrap();
        assert_eq!(inf, Pencil::from_int_coeffs(&[&[-1]], &[&[0]]));
        let s = build_block(StructureTag::Hermitian, &BlockSpec::plain(BlockKind::SingularPair, 1)).unwrap();
        assert_eq!(s.n(), 3);
        assert!(!is_regular(&s));
    }

    #[test]
    fn illegal_combinations() {
        let spec = BlockSpec::plain(BlockKind::TEvenInfOdd, 3);
        assert!(build_block(StructureTag::Hermitian, &spec).is_err());
        assert!(build_block(StructureTag::TEven, &BlockSpec::plain(BlockKind::TEvenInfOdd, 2)).is_err());
        let nonreal = BlockSpec::real(EigenvalueRef::Finite(C::i()), 1, 1);
        assert!(build_block(StructureTag::Hermitian, &nonreal).is_err());
    }

    fn all_kinds_specs() -> Vec<SpectralSpec> {
        use BlockKind::*;
        use StructureTag::*;
        let e = |s: &str| s.parse::<EigenvalueRef>().unwrap();
        let mut out = Vec::new();
        let herm_blocks = |t: StructureTag, real: &str, pair: &str| {
            SpectralSpec::new(
                t,
                vec![
                    BlockSpec::real(e(real), 3, -1),
                    BlockSpec::real(e(real), 1, 1),
                    BlockSpec::infinite(2, 1),
                    BlockSpec::at(ConjugatePair, e(pair), 2),
                ],
            )
        };
        out.push(herm_blocks(Hermitian, "2", "1+1*i"));
        out.push(herm_blocks(SkewHermitian, "-1/2", "3*i"));
        out.push(herm_blocks(StarEven, "3*i", "2"));
        out.push(herm_blocks(StarOdd, "-1*i", "1"));
        out.push(herm_blocks(StarPalindromic, "3/5+4/5*i", "2"));
        out.push(herm_blocks(StarAntiPalindromic, "3/5+4/5*i", "1/2"));
        out.push(SpectralSpec::new(Symmetric, vec![BlockSpec::at(SymBlock, e("1+1*i"), 3), BlockSpec::at(SymBlock, e("inf"), 2)]));
        out.push(SpectralSpec::new(
            SkewSymmetric,
            vec![BlockSpec::at(SkewSymPair, e("2"), 2), BlockSpec::at(SkewSymPair, e("inf"), 1)],
        ));
        let teven_blocks = vec![
            BlockSpec::plain(TEvenInfOdd, 3),
            BlockSpec::plain(TEvenInfEvenPair, 2),
            BlockSpec::plain(TEvenZeroOddPair, 1),
            BlockSpec::plain(TEvenZeroEven, 2),
        ];
        out.push(SpectralSpec::new(
            TEven,
            [teven_blocks.clone(), vec![BlockSpec::at(TEvenNonzeroPair, e("2"), 2)]].concat(),
        ));
        out.push(SpectralSpec::new(
            TOdd,
            [
                teven_blocks.clone(),
                vec![BlockSpec::plain(TOddBlock, 3), BlockSpec::plain(TOddZeroEvenPair, 2)],
            ]
            .concat(),
        ));
        out.push(SpectralSpec::new(
            TPalindromic,
            [teven_blocks.clone(), vec![BlockSpec::at(TEvenNonzeroPair, e("3"), 1)]].concat(),
        ));
        out.push(SpectralSpec::new(TAntiPalindromic, teven_blocks));
        out.push(SpectralSpec::new(StructureTag::None, vec![BlockSpec::at(PlainJordan, e("inf"), 2), BlockSpec::at(PlainJordan, e("1"), 1)]));
        out
    }

    #[test]
    fn every_kind_builds_structured_with_planted_multiplicities() {
        for spec in all_kinds_specs() {
            let p = build_pencil(&spec).unwrap_or_else(|e| panic!("{:?}: {e}", spec.structure));
            assert!(check_structure(&p, spec.structure));
            assert!(is_regular(&p), "{:?}", spec.structure);
            let mut total = 0;
            for (eig, list) in block_multiplicities(&spec).unwrap() {
                let got = partial_multiplicities(&p, &eig).unwrap();
                assert_eq!(got, list, "{:?} at {eig}", spec.structure);
                total += list.sum();
            }
            assert_eq!(total, p.n(), "{:?}", spec.structure);
        }
    }

    #[test]
    fn singular_pairs_are_structured() {
        use StructureTag::*;
        for (t, k) in [
            (Hermitian, BlockKind::SingularPair),
            (StarPalindromic, BlockKind::SingularPair),
            (Symmetric, BlockKind::SingularPair),
            (SkewSymmetric, BlockKind::SingularPair),
            (TEven, BlockKind::TEvenSingularPair),
            (TOdd, BlockKind::TEvenSingularPair),
            (TAntiPalindromic, BlockKind::TEvenSingularPair),
        ] {
            let p = build_pencil(&SpectralSpec::new(t, vec![BlockSpec::plain(k, 2)])).unwrap();
            assert!(check_structure(&p, t));
            assert!(!is_regular(&p));
        }
    }

    #[test]
    fn congruence_keeps_multiplicities() {
        let spec = SpectralSpec::new(
            StructureTag::Hermitian,
            vec![BlockSpec::real(EigenvalueRef::int(1), 2, 1), BlockSpec::real(EigenvalueRef::int(1), 1, -1)],
        )
        .with_seed_transform(7);
        let p = build_pencil(&spec).unwrap();
        assert_eq!(partial_multiplicities(&p, &EigenvalueRef::int(1)).unwrap().as_slice(), &[2, 1]);
        let singular = spec.clone().with_transform(&Matrix::zeros(3, 3));
        assert!(matches!(build_pencil(&singular), Err(CanonError::SingularTransform)));
    }
}
