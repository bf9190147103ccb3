//! Basic commutators under the bracket `[x,y] = x ȳ x̄ y`, Hall factorization
//! `g = C₁^{e₁}⋯C_N^{e_N}·h` with `h ∈ Γ_{k+1}`, and principal parts.
//!
//! Within one length, basic commutators are ordered lexicographically by
//! `(left ordinal, right ordinal)`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::integer::Integer;
use crate::magnus::{expand, lcs_lower_bound, Monomial, SeriesError, TruncatedSeries, TruncationPolicy};
use crate::words::{Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HallError {
    #[error("length must be at least 1")]
    ZeroLength,
    #[error("degree {0}: residual is not in the span of the principal parts")]
    Inconsistent(usize),
    #[error("degree {0}: exponent solve produced a non-integer")]
    NonIntegral(usize),
    #[error("degree {0}: residual has a nonzero term below the current degree")]
    LowerTermSurvived(usize),
    #[error("exponent does not fit in 64 bits")]
    ExponentOverflow,
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Generator(usize),
    /// Ordinals of the left and right factor.
    Bracket(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicCommutator {
    pub ordinal: usize,
    pub length: usize,
    pub shape: Shape,
    /// Occurrences of each generator, indexed `0..rank`.
    pub multiplicities: Vec<usize>,
}

/// All basic commutators of rank `n` up to a given length, in order.
#[derive(Debug, Clone)]
pub struct HallBasis {
    rank: usize,
    max_len: usize,
    elements: Vec<BasicCommutator>,
    words: Vec<Word>,
}

pub fn generate_basic(rank: usize, max_len: usize) -> Result<HallBasis, HallError> {
    if max_len == 0 {
        return Err(HallError::ZeroLength);
    }
    let mut elements: Vec<BasicCommutator> = Vec::new();
    let mut words: Vec<Word> = Vec::new();
    for g in 1..=rank {
        let mut mult = vec![0; rank];
        mult[g - 1] = 1;
        elements.push(BasicCommutator { ordinal: g - 1, length: 1, shape: Shape::Generator(g), multiplicities: mult });
        words.push(Word::generator(rank, g)?);
    }
    for m in 2..=max_len {
        let mut pairs = Vec::new();
        for left in &elements {
            for right in &elements {
                if left.length + right.length != m || left.ordinal >= right.ordinal {
                    continue;
                }
                if let Shape::Bracket(k, _) = right.shape {
                    if k > left.ordinal {
                        continue;
                    }
                }
                pairs.push((left.ordinal, right.ordinal));
            }
        }
        pairs.sort_unstable();
        for (l, r) in pairs {
            let ordinal = elements.len();
            let multiplicities =
                elements[l].multiplicities.iter().zip(&elements[r].multiplicities).map(|(a, b)| a + b).collect();
            words.push(words[l].commutator(&words[r])?);
            elements.push(BasicCommutator { ordinal, length: m, shape: Shape::Bracket(l, r), multiplicities });
        }
    }
    Ok(HallBasis { rank, max_len, elements, words })
}

impl HallBasis {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn elements(&self) -> &[BasicCommutator] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Number of basic commutators of each length `1..=max_len`.
    pub fn counts_by_length(&self) -> Vec<usize> {
        let mut c = vec![0; self.max_len];
        for e in &self.elements {
            c[e.length - 1] += 1;
        }
        c
    }

    pub fn word(&self, ordinal: usize) -> &Word {
        &self.words[ordinal]
    }

    pub fn of_length(&self, d: usize) -> impl Iterator<Item = &BasicCommutator> {
        self.elements.iter().filter(move |e| e.length == d)
    }

    /// Bracket notation such as `[[a1,a2],a2]`.
    pub fn bracket_string(&self, ordinal: usize) -> String {
        match self.elements[ordinal].shape {
            Shape::Generator(g) => format!("a{g}"),
            Shape::Bracket(l, r) => format!("[{},{}]", self.bracket_string(l), self.bracket_string(r)),
        }
    }

    /// Homogeneous degree-`length` part of `E(C)`.
    pub fn principal_part(&self, ordinal: usize, policy: &TruncationPolicy) -> Result<TruncatedSeries, HallError> {
        let c = &self.elements[ordinal];
        let full = expand(&self.words[ordinal], policy)?;
        Ok(TruncatedSeries::from_terms(policy, full.homogeneous_part(c.length)))
    }
}

impl fmt::Display for HallBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.elements {
            writeln!(f, "{} {} {}", e.ordinal + 1, e.length, self.bracket_string(e.ordinal))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HallFactorization {
    /// One exponent per basic commutator of length `≤ k`, in basis order.
    pub exponents: Vec<i64>,
    /// Whether `w · (C₁^{e₁}⋯)⁻¹` was confirmed to lie in `Γ_{k+1}`.
    pub remainder_certified: bool,
}

impl HallFactorization {
    /// The product `C₁^{e₁}⋯C_N^{e_N}`.
    pub fn product(&self, basis: &HallBasis) -> Result<Word, HallError> {
        let mut p = Word::identity(basis.rank);
        for (j, &e) in self.exponents.iter().enumerate() {
            p = p.multiply(&basis.word(j).pow(e))?;
        }
        Ok(p)
    }
}

/// Computes the Hall exponents of `w` through length `k`, degree by degree.
pub fn hall_factorize(w: &Word, k: usize) -> Result<(HallBasis, HallFactorization), HallError> {
    let basis = generate_basic(w.rank(), k)?;
    let f = factorize_in(&basis, w)?;
    Ok((basis, f))
}

pub fn factorize_in(basis: &HallBasis, w: &Word) -> Result<HallFactorization, HallError> {
    let k = basis.max_len;
    if w.rank() != basis.rank {
        return Err(WordError::RankMismatch(w.rank(), basis.rank).into());
    }
    let policy = TruncationPolicy::total_degree(basis.rank, k);
    let mut exponents = vec![0i64; basis.len()];
    let mut partial = Word::identity(basis.rank);
    for d in 1..=k {
        let residual = expand(&partial.invert().multiply(w)?, &policy)?;
        if residual.min_positive_degree().is_some_and(|m| m < d) {
            return Err(HallError::LowerTermSurvived(d));
        }
        let rhs = residual.homogeneous_part(d);
        let ords: Vec<usize> = basis.of_length(d).map(|c| c.ordinal).collect();
        let cols: Vec<Vec<(Monomial, Integer)>> = ords
            .iter()
            .map(|&o| basis.principal_part(o, &policy).map(|s| s.terms().to_vec()))
            .collect::<Result<_, _>>()?;
        let sol = solve_exact(&cols, &rhs).ok_or(HallError::Inconsistent(d))?;
        for (&o, x) in ords.iter().zip(sol) {
            if !x.is_integer() {
                return Err(HallError::NonIntegral(d));
            }
            let e = x.to_integer().to_i64().ok_or(HallError::ExponentOverflow)?;
            exponents[o] = e;
            partial = partial.multiply(&basis.word(o).pow(e))?;
        }
    }
    let remainder_certified = lcs_lower_bound(&w.multiply(&partial.invert())?, k).is_none();
    Ok(HallFactorization { exponents, remainder_certified })
}

fn to_rational(c: &Integer) -> BigRational {
    BigRational::from_integer(c.to_big())
}

/// Row-reduces the matrix whose columns are `cols` (sparse over monomials),
/// augmented with `rhs`. Returns the unique solution, or `None` when the
/// system is inconsistent or underdetermined.
fn solve_exact(cols: &[Vec<(Monomial, Integer)>], rhs: &[(Monomial, Integer)]) -> Option<Vec<BigRational>> {
    let mut rows: Vec<Monomial> = cols.iter().flatten().chain(rhs).map(|(m, _)| m.clone()).collect();
    rows.sort();
    rows.dedup();
    let index = |m: &Monomial| rows.binary_search(m).expect("row present");
    let ncols = cols.len();
    let mut a = vec![vec![BigRational::zero(); ncols + 1]; rows.len()];
    for (j, col) in cols.iter().enumerate() {
        for (m, c) in col {
            a[index(m)][j] = to_rational(c);
        }
    }
    for (m, c) in rhs {
        a[index(m)][ncols] = to_rational(c);
    }
    let pivots = row_reduce(&mut a, ncols);
    if pivots.len() < ncols {
        return None;
    }
    // any nonzero right-hand side below the pivots means inconsistency
    if a.iter().skip(pivots.len()).any(|r| !r[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = a[r][ncols].clone();
    }
    Some(x)
}

/// Reduced row echelon form over the first `ncols` columns; returns the
/// pivot column of each leading row.
fn row_reduce(a: &mut [Vec<BigRational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = BigRational::one() / a[r][c].clone();
        for v in a[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let (top, bottom) = if i < r { a.split_at_mut(r) } else { a.split_at_mut(i) };
                let (src, dst) = if i < r { (&bottom[0], &mut top[i]) } else { (&top[r], &mut bottom[0]) };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d -= &f * s;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    pivots
}

/// Exact rank of a family of sparse integer vectors.
pub fn exact_rank(vectors: &[Vec<(Monomial, Integer)>]) -> usize {
    let mut rows: Vec<Monomial> = vectors.iter().flatten().map(|(m, _)| m.clone()).collect();
    rows.sort();
    rows.dedup();
    let mut a = vec![vec![BigRational::zero(); vectors.len()]; rows.len()];
    for (j, v) in vectors.iter().enumerate() {
        for (m, c) in v {
            let i = rows.binary_search(m).expect("row present");
            a[i][j] = to_rational(c);
        }
    }
    row_reduce(&mut a, vectors.len()).len()
}
