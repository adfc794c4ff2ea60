//! Test-only helpers: an independent multiplicity oracle and random specs.
#![allow(dead_code, clippy::needless_range_loop)]

use pencil_core::canon::{BlockKind, BlockSpec, SpectralSpec};
use pencil_core::{EigenvalueRef, GaussianRational as C, Pencil, StructureTag};
use rand::seq::SliceRandom;
use rand::Rng;

type Mat = Vec<Vec<C>>;

fn dense(p: &Pencil, which_b: bool) -> Mat {
    let m = if which_b { &p.b } else { &p.a };
    (0..p.rows()).map(|i| (0..p.cols()).map(|j| m[(i, j)].clone()).collect()).collect()
}

fn combine(a: &Mat, b: &Mat, t: &C) -> Mat {
    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + &(t * y)).collect()).collect()
}

fn mul(x: &Mat, y: &Mat) -> Mat {
    let n = x.len();
    let m = y[0].len();
    let mut out = vec![vec![C::zero(); m]; n];
    for i in 0..n {
        for (k, xik) in x[i].iter().enumerate() {
            if xik.is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] = &out[i][j] + &(xik * &y[k][j]);
            }
        }
    }
    out
}

/// Rank by Gauss-Jordan elimination.
pub fn rank(m: &Mat) -> usize {
    let mut m = m.clone();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for j in c..cols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let d = &f * &m[r][j];
                    m[i][j] = &m[i][j] - &d;
                }
            }
        }
        r += 1;
    }
    r
}

/// Inverse by Gauss-Jordan on [Q | I]; None when singular.
pub fn inverse(q: &Mat) -> Option<Mat> {
    let n = q.len();
    let mut m: Mat = q
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { C::one() } else { C::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].inv().unwrap();
        for j in 0..2 * n {
            m[c][j] = &m[c][j] * &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..2 * n {
                    let d = &f * &m[c][j];
                    m[i][j] = &m[i][j] - &d;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Jordan block sizes at 0 of N from the rank sequence of its powers.
fn nilpotent_sizes(nm: &Mat) -> Vec<usize> {
    let n = nm.len();
    let mut ranks = vec![n];
    let mut pow = nm.clone();
    loop {
        let r = rank(&pow);
        let prev = *ranks.last().unwrap();
        ranks.push(r);
        if r == prev {
            break;
        }
        pow = mul(&pow, nm);
    }
    // w_k = number of blocks of size ≥ k
    let w: Vec<usize> = ranks.windows(2).map(|x| x[0] - x[1]).collect();
    let mut sizes = Vec::new();
    for k in 1..=w.len() {
        let next = w.get(k).copied().unwrap_or(0);
        for _ in 0..(w[k - 1] - next) {
            sizes.push(k);
        }
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// Partial multiplicities of a regular pencil A+λB at `eig` via Weyr characteristics
/// of (A+μB)⁻¹(A+λ₀B) for a regular point μ.
pub fn weyr_oracle(p: &Pencil, eig: &EigenvalueRef) -> Vec<usize> {
    let (a, b) = (dense(p, false), dense(p, true));
    let (a, b, l0) = match eig {
        EigenvalueRef::Finite(z) => (a, b, z.clone()),
        EigenvalueRef::Infinity => (b, a, C::zero()),
    };
    let m0 = combine(&a, &b, &l0);
    for shift in 1..200 {
        let mu = &l0 + &C::from_int(shift);
        if let Some(qinv) = inverse(&combine(&a, &b, &mu)) {
            return nilpotent_sizes(&mul(&qinv, &m0));
        }
    }
    panic!("no regular point found; pencil is singular");
}

fn e(s: &str) -> EigenvalueRef {
    s.parse().unwrap()
}

/// (eigenvalues on the structure's fixed axis, eigenvalues off it)
fn pools(tag: StructureTag) -> (Vec<&'static str>, Vec<&'static str>) {
    use StructureTag::*;
    match tag {
        Hermitian => (vec!["2", "-1"], vec!["1+1*i"]),
        SkewHermitian => (vec!["-1/2", "2"], vec!["3*i"]),
        StarEven => (vec!["3*i", "-1*i"], vec!["2"]),
        StarOdd => (vec!["-1*i", "2*i"], vec!["1"]),
        StarPalindromic => (vec!["3/5+4/5*i", "-1"], vec!["2"]),
        StarAntiPalindromic => (vec!["3/5+4/5*i", "1"], vec!["1/2"]),
        Symmetric => (vec!["1+1*i", "inf", "2"], vec![]),
        SkewSymmetric => (vec!["2", "inf", "-1"], vec![]),
        None => (vec!["1", "inf", "1/2"], vec![]),
        _ => (vec![], vec!["2", "1+1*i"]),
    }
}

fn menu(tag: StructureTag) -> Vec<BlockKind> {
    use BlockKind::*;
    use StructureTag::*;
    match tag {
        t if t.is_hermitian_family() => vec![RealEig, RealEig, Infinity, ConjugatePair],
        Symmetric => vec![SymBlock],
        SkewSymmetric => vec![SkewSymPair],
        TEven | TPalindromic | TAntiPalindromic => {
            vec![TEvenInfOdd, TEvenInfEvenPair, TEvenZeroOddPair, TEvenZeroEven, TEvenNonzeroPair]
        }
        TOdd => vec![TEvenInfOdd, TEvenInfEvenPair, TEvenZeroOddPair, TEvenZeroEven, TEvenNonzeroPair, TOddBlock, TOddZeroEvenPair],
        None => vec![PlainJordan],
        _ => unreachable!(),
    }
}

fn fix_parity(kind: BlockKind, size: usize) -> usize {
    use BlockKind::*;
    let want_odd = matches!(kind, TEvenInfOdd | TEvenZeroOddPair | TOddBlock);
    let want_even = matches!(kind, TEvenInfEvenPair | TEvenZeroEven | TOddZeroEvenPair);
    if (want_odd && size.is_multiple_of(2)) || (want_even && !size.is_multiple_of(2)) {
        if size == 1 {
            2
        } else {
            size - 1
        }
    } else {
        size
    }
}

/// A random regular spec of dimension in 1..=max_n, with a random congruence when `transform`.
pub fn random_spec<R: Rng>(tag: StructureTag, rng: &mut R, max_n: usize, transform: bool) -> SpectralSpec {
    use BlockKind::*;
    let (axis, off) = pools(tag);
    let kinds = menu(tag);
    let mut blocks = Vec::new();
    let mut used = 0;
    let target = rng.gen_range(2..=max_n);
    for _ in 0..20 {
        if used >= target {
            break;
        }
        let kind = *kinds.choose(rng).unwrap();
        let size = fix_parity(kind, rng.gen_range(1..=3));
        let dim = kind.dimension(size);
        if used + dim > max_n {
            continue;
        }
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let block = match kind {
            RealEig => BlockSpec::real(e(axis.choose(rng).unwrap()), size, sign),
            Infinity => BlockSpec::infinite(size, sign),
            ConjugatePair | TEvenNonzeroPair => BlockSpec::at(kind, e(off.choose(rng).unwrap()), size),
            SymBlock | SkewSymPair | PlainJordan => BlockSpec::at(kind, e(axis.choose(rng).unwrap()), size),
            _ => BlockSpec::plain(kind, size),
        };
        used += dim;
        blocks.push(block);
    }
    if blocks.is_empty() {
        let kind = kinds[0];
        let size = fix_parity(kind, 1);
        blocks.push(match kind {
            RealEig => BlockSpec::real(e(axis[0]), size, 1),
            SymBlock | SkewSymPair | PlainJordan => BlockSpec::at(kind, e(axis[0]), size),
            _ => BlockSpec::plain(kind, size),
        });
    }
    let spec = SpectralSpec::new(tag, blocks);
    if transform {
        spec.with_seed_transform(rng.gen())
    } else {
        spec
    }
}
