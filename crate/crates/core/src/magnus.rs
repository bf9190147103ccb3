//! Truncated noncommutative power series over the integers and the Magnus
//! expansion `α_i ↦ 1 + X_i`.
//!
//! A [`TruncationPolicy`] describes a monomial ideal: everything of total
//! degree above `max_degree`, plus (optionally) every monomial in which some
//! `X_j` occurs at least `caps[j]` times. Series live in the quotient by that
//! ideal, and reduction happens eagerly as products are formed.

use std::fmt;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;
use thiserror::Error;

use crate::exec::Execution;
use crate::integer::Integer;
use crate::words::{Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("truncation policies differ")]
    PolicyMismatch,
    #[error("constant term {0} is not a unit")]
    NonUnit(Integer),
    #[error("monomial {0} is killed by the truncation policy")]
    PolicyViolation(Monomial),
    #[error("invalid truncation policy: {0}")]
    InvalidPolicy(String),
    #[error("target policy is not a quotient of the source policy")]
    NotAQuotient,
    #[error("substituted series must have constant term 1")]
    BadSubstitution,
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A noncommutative monomial `X_{j₁}⋯X_{j_l}` (indices are 1-based).
///
/// Ordered by degree first, then lexicographically, which is also the
/// serialization order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[u8; 15]>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(SmallVec::new())
    }

    pub fn new(indices: &[usize]) -> Monomial {
        Monomial(indices.iter().map(|&i| i as u8).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&i| i as usize)
    }

    /// Occurrence count of every variable, indexed `0..rank`.
    pub fn multiplicities(&self, rank: usize) -> Vec<usize> {
        let mut c = vec![0; rank];
        for &i in &self.0 {
            c[i as usize - 1] += 1;
        }
        c
    }

    fn concat(&self, other: &Monomial) -> Monomial {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Monomial(v)
    }

    fn with_power(&self, var: u8, d: usize) -> Monomial {
        let mut v = self.0.clone();
        v.extend(std::iter::repeat_n(var, d));
        Monomial(v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (n, i) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, ".")?;
            }
            write!(f, "X{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The monomial ideal a series is reduced by.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncationPolicy {
    rank: usize,
    max_degree: usize,
    caps: Option<Vec<usize>>,
}

impl TruncationPolicy {
    /// Kill everything of total degree above `max_degree`.
    pub fn total_degree(rank: usize, max_degree: usize) -> TruncationPolicy {
        TruncationPolicy { rank, max_degree, caps: None }
    }

    /// Total-degree cap together with per-variable occurrence caps. A
    /// monomial survives iff every `X_j` occurs fewer than `caps[j-1]` times.
    /// The stored degree bound is tightened to what the caps allow, so equal
    /// ideals compare equal.
    pub fn with_caps(rank: usize, max_degree: usize, caps: Vec<usize>) -> Result<Self, SeriesError> {
        if caps.len() != rank {
            return Err(SeriesError::InvalidPolicy(format!(
                "{} caps for rank {rank}",
                caps.len()
            )));
        }
        if caps.contains(&0) {
            return Err(SeriesError::InvalidPolicy("caps must be positive".into()));
        }
        let bound: usize = caps.iter().map(|c| c - 1).sum();
        Ok(TruncationPolicy { rank, max_degree: max_degree.min(bound), caps: Some(caps) })
    }

    /// Caps alone; the degree bound is implied.
    pub fn from_caps(caps: Vec<usize>) -> Result<Self, SeriesError> {
        let rank = caps.len();
        Self::with_caps(rank, usize::MAX, caps)
    }

    /// The ideal `R^k`: at least `k+1` occurrences of some variable.
    pub fn reduced(rank: usize, k: usize) -> TruncationPolicy {
        Self::from_caps(vec![k + 1; rank]).expect("positive caps")
    }

    /// The ideal `R_i^k`: `k+1` occurrences of some variable or `k` of `X_i`.
    pub fn reduced_at(rank: usize, k: usize, i: usize) -> Result<Self, SeriesError> {
        if k == 0 || i == 0 || i > rank {
            return Err(SeriesError::InvalidPolicy(format!("R_{i}^{k} in rank {rank}")));
        }
        let mut caps = vec![k + 1; rank];
        caps[i - 1] = k;
        Self::from_caps(caps)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn caps(&self) -> Option<&[usize]> {
        self.caps.as_deref()
    }

    fn cap(&self, var: usize) -> usize {
        match &self.caps {
            Some(c) => c[var - 1],
            None => usize::MAX,
        }
    }

    pub fn admits(&self, m: &Monomial) -> bool {
        if m.degree() > self.max_degree || m.indices().any(|i| i == 0 || i > self.rank) {
            return false;
        }
        match &self.caps {
            None => true,
            Some(caps) => m
                .multiplicities(self.rank)
                .iter()
                .zip(caps)
                .all(|(&n, &c)| n < c),
        }
    }

    /// True when `self`'s ideal contains `finer`'s, so reducing a series
    /// from `finer` to `self` is a ring homomorphism.
    pub fn is_quotient_of(&self, finer: &TruncationPolicy) -> bool {
        self.rank == finer.rank
            && self.max_degree <= finer.max_degree
            && (1..=self.rank).all(|v| self.cap(v).min(self.max_degree.saturating_add(1))
                    <= finer.cap(v).min(finer.max_degree.saturating_add(1)))
    }

    /// Every surviving monomial, in serialization order.
    pub fn monomials(&self) -> Vec<Monomial> {
        let mut out = vec![Monomial::one()];
        let mut frontier = vec![Monomial::one()];
        for _ in 0..self.max_degree {
            let mut next = Vec::new();
            for m in &frontier {
                for v in 1..=self.rank {
                    let c = m.with_power(v as u8, 1);
                    if self.admits(&c) {
                        next.push(c);
                    }
                }
            }
            next.sort();
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

type Counts = SmallVec<[u16; 8]>;

/// An element of `Z⟨⟨X₁,…,X_n⟩⟩` modulo a [`TruncationPolicy`].
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    policy: TruncationPolicy,
    terms: Vec<(Monomial, Integer)>,
}

/// Products with more term pairs than this are split across threads.
const PARALLEL_PAIRS: usize = 1 << 15;

impl TruncatedSeries {
    pub fn zero(policy: &TruncationPolicy) -> Self {
        TruncatedSeries { policy: policy.clone(), terms: Vec::new() }
    }

    pub fn one(policy: &TruncationPolicy) -> Self {
        Self::constant(policy, Integer::ONE)
    }

    pub fn constant(policy: &TruncationPolicy, c: Integer) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(Monomial::one(), c)] };
        TruncatedSeries { policy: policy.clone(), terms }
    }

    /// `1 + X_i`, the image of the generator `α_i`.
    pub fn generator(policy: &TruncationPolicy, i: usize) -> Result<Self, SeriesError> {
        if i == 0 || i > policy.rank {
            return Err(WordError::GeneratorOutOfRange { generator: i, rank: policy.rank }.into());
        }
        Ok(Self::from_terms(
            policy,
            [(Monomial::one(), Integer::ONE), (Monomial::new(&[i]), Integer::ONE)],
        ))
    }

    /// Builds a series, dropping killed monomials and merging duplicates.
    pub fn from_terms<I>(policy: &TruncationPolicy, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Integer)>,
    {
        let mut acc: FxHashMap<Monomial, Integer> = FxHashMap::default();
        for (m, c) in terms {
            if policy.admits(&m) {
                acc.entry(m).or_default().add_assign_ref(&c);
            }
        }
        Self::from_map(policy, acc)
    }

    fn from_map(policy: &TruncationPolicy, acc: FxHashMap<Monomial, Integer>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        TruncatedSeries { policy: policy.clone(), terms }
    }

    pub fn policy(&self) -> &TruncationPolicy {
        &self.policy
    }

    pub fn terms(&self) -> &[(Monomial, Integer)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Integer {
        match self.terms.first() {
            Some((m, c)) if m.degree() == 0 => c.clone(),
            _ => Integer::ZERO,
        }
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.degree() == 0 && self.terms[0].1.is_one()
    }

    /// Coefficient of `m`; an error if `m` is killed by the policy.
    pub fn coefficient(&self, m: &Monomial) -> Result<Integer, SeriesError> {
        if !self.policy.admits(m) {
            return Err(SeriesError::PolicyViolation(m.clone()));
        }
        Ok(self
            .terms
            .binary_search_by(|(k, _)| k.cmp(m))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or(Integer::ZERO))
    }

    /// Degree-`d` homogeneous part.
    pub fn homogeneous_part(&self, d: usize) -> Vec<(Monomial, Integer)> {
        self.terms.iter().filter(|(m, _)| m.degree() == d).cloned().collect()
    }

    /// Smallest degree `≥ 1` carrying a nonzero coefficient.
    pub fn min_positive_degree(&self) -> Option<usize> {
        self.terms.iter().map(|(m, _)| m.degree()).find(|&d| d > 0)
    }

    fn check(&self, other: &Self) -> Result<(), SeriesError> {
        if self.policy != other.policy {
            return Err(SeriesError::PolicyMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        Ok(Self::from_terms(
            &self.policy,
            self.terms.iter().chain(other.terms.iter()).cloned(),
        ))
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            policy: self.policy.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.mul_with(other, Execution::default())
    }

    pub fn mul_with(&self, other: &Self, exec: Execution) -> Result<Self, SeriesError> {
        self.check(other)?;
        let rank = self.policy.rank;
        let caps = self.policy.caps.as_deref();
        let counts = |m: &Monomial| -> Counts {
            let mut c: Counts = SmallVec::from_elem(0, rank);
            for i in m.indices() {
                c[i - 1] += 1;
            }
            c
        };
        let right: Vec<(&Monomial, &Integer, Counts)> =
            other.terms.iter().map(|(m, c)| (m, c, counts(m))).collect();
        let q = self.policy.max_degree;

        let work = |lefts: &[(Monomial, Integer)]| {
            let mut acc: FxHashMap<Monomial, Integer> = FxHashMap::default();
            for (lm, lc) in lefts {
                let lcounts = counts(lm);
                for (rm, rc, rcounts) in &right {
                    if lm.degree() + rm.degree() > q {
                        // right terms are sorted by degree
                        break;
                    }
                    if let Some(caps) = caps {
                        if (0..rank).any(|v| (lcounts[v] + rcounts[v]) as usize >= caps[v]) {
                            continue;
                        }
                    }
                    acc.entry(lm.concat(rm)).or_default().add_product(lc, rc);
                }
            }
            acc
        };

        let pairs = self.terms.len() * other.terms.len();
        let acc = if exec.is_parallel() && pairs > PARALLEL_PAIRS {
            let chunk = (self.terms.len() / 64).max(1);
            let chunks: Vec<&[(Monomial, Integer)]> = self.terms.chunks(chunk).collect();
            let partial = exec.map(&chunks, |c| work(c));
            let mut total: FxHashMap<Monomial, Integer> = FxHashMap::default();
            for part in partial {
                for (m, c) in part {
                    total.entry(m).or_default().add_assign_ref(&c);
                }
            }
            total
        } else {
            work(&self.terms)
        };
        Ok(Self::from_map(&self.policy, acc))
    }

    /// Right multiplication by `(1 + X_g)^e`, for any integer `e`.
    pub fn mul_generator_power(&self, g: usize, e: i64) -> Result<Self, SeriesError> {
        if g == 0 || g > self.policy.rank {
            return Err(WordError::GeneratorOutOfRange { generator: g, rank: self.policy.rank }.into());
        }
        if e == 0 {
            return Ok(self.clone());
        }
        let top = self.policy.max_degree.min(self.policy.cap(g).saturating_sub(1));
        // binomial series of (1+X)^e, e possibly negative
        let n = e.unsigned_abs();
        let coeffs: Vec<Integer> = (0..=top as u64)
            .map(|d| {
                if e > 0 {
                    Integer::binomial(n, d)
                } else {
                    let c = Integer::binomial(n + d - 1, d);
                    if d % 2 == 1 {
                        -c
                    } else {
                        c
                    }
                }
            })
            .collect();
        let mut acc: FxHashMap<Monomial, Integer> = FxHashMap::default();
        for (m, c) in &self.terms {
            for (d, b) in coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let nm = m.with_power(g as u8, d);
                if !self.policy.admits(&nm) {
                    break;
                }
                acc.entry(nm).or_default().add_product(c, b);
            }
        }
        Ok(Self::from_map(&self.policy, acc))
    }

    /// Multiplicative inverse; the constant term must be `±1`.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let c0 = self.constant_term();
        let unit = match c0.to_i64() {
            Some(1) => Integer::ONE,
            Some(-1) => Integer::from(-1),
            _ => return Err(SeriesError::NonUnit(c0)),
        };
        // s = c0 (1 + v) with v = c0 * (s - c0)
        let v = TruncatedSeries {
            policy: self.policy.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() > 0)
                .map(|(m, c)| (m.clone(), c.mul_ref(&unit)))
                .collect(),
        };
        let one = Self::one(&self.policy);
        let mut inv = one.clone();
        for _ in 0..self.policy.max_degree {
            let next = one.sub(&v.mul(&inv)?)?;
            if next == inv {
                break;
            }
            inv = next;
        }
        Ok(inv.scale(&unit))
    }

    pub fn scale(&self, c: &Integer) -> Self {
        Self::from_terms(&self.policy, self.terms.iter().map(|(m, x)| (m.clone(), x.mul_ref(c))))
    }

    /// Integer power; negative exponents go through [`Self::inverse`].
    pub fn pow(&self, e: i64) -> Result<Self, SeriesError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut out = Self::one(&self.policy);
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base)?;
        }
        Ok(out)
    }

    /// Image under the quotient map to a coarser policy.
    pub fn reduce_to(&self, target: &TruncationPolicy) -> Result<Self, SeriesError> {
        if !target.is_quotient_of(&self.policy) {
            return Err(SeriesError::NotAQuotient);
        }
        Ok(TruncatedSeries {
            policy: target.clone(),
            terms: self.terms.iter().filter(|(m, _)| target.admits(m)).cloned().collect(),
        })
    }

    /// Reinterprets the series under a finer policy that admits every stored
    /// monomial. Used to lift canonical residues before further arithmetic.
    pub fn lift_to(&self, target: &TruncationPolicy) -> Result<Self, SeriesError> {
        if !self.policy.is_quotient_of(target) {
            return Err(SeriesError::NotAQuotient);
        }
        Ok(TruncatedSeries { policy: target.clone(), terms: self.terms.clone() })
    }

    /// The continuous ring endomorphism `X_j ↦ images[j-1] − 1`, evaluated in
    /// the policy of `images` (which must all agree and have constant term 1).
    /// When the images come from a group endomorphism `φ` and `self = E(g)`,
    /// the result is `E(φ(g))`.
    pub fn substitute(&self, images: &[TruncatedSeries]) -> Result<Self, SeriesError> {
        let target = images.first().map(|s| s.policy.clone()).ok_or(SeriesError::BadSubstitution)?;
        if images.len() != self.policy.rank || images.iter().any(|s| s.policy != target) {
            return Err(SeriesError::PolicyMismatch);
        }
        if images.iter().any(|s| !s.constant_term().is_one()) {
            return Err(SeriesError::BadSubstitution);
        }
        let one = Self::one(&target);
        let deltas: Vec<Self> = images.iter().map(|s| s.sub(&one)).collect::<Result<_, _>>()?;
        let mut cache: FxHashMap<Monomial, Self> = FxHashMap::default();
        cache.insert(Monomial::one(), one);
        let mut acc: FxHashMap<Monomial, Integer> = FxHashMap::default();
        for (m, c) in &self.terms {
            let prod = prefix_product(m, &deltas, &mut cache)?;
            for (pm, pc) in &prod.terms {
                acc.entry(pm.clone()).or_default().add_product(pc, c);
            }
        }
        Ok(Self::from_map(&target, acc))
    }
}

fn prefix_product(
    m: &Monomial,
    deltas: &[TruncatedSeries],
    cache: &mut FxHashMap<Monomial, TruncatedSeries>,
) -> Result<TruncatedSeries, SeriesError> {
    if let Some(p) = cache.get(m) {
        return Ok(p.clone());
    }
    let prefix = Monomial(m.0[..m.degree() - 1].into());
    let base = prefix_product(&prefix, deltas, cache)?;
    let last = *m.0.last().expect("nonconstant") as usize;
    let p = base.mul(&deltas[last - 1])?;
    cache.insert(m.clone(), p.clone());
    Ok(p)
}

impl fmt::Display for TruncatedSeries {
    /// One `monomial : coefficient` line per stored term, in degree-then-lex
    /// order; the constant term prints as `1 : c`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (m, c) in &self.terms {
            writeln!(f, "{m} : {c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{c}*{m}")).collect();
        write!(f, "[{}]", parts.join(" + "))
    }
}

/// The Magnus expansion of `w`, reduced by `policy`.
pub fn expand(w: &Word, policy: &TruncationPolicy) -> Result<TruncatedSeries, SeriesError> {
    if w.rank() != policy.rank {
        return Err(WordError::RankMismatch(w.rank(), policy.rank).into());
    }
    let mut s = TruncatedSeries::one(policy);
    for &(g, e) in w.runs() {
        s = s.mul_generator_power(g, e)?;
    }
    Ok(s)
}

/// Lowest degree of a nonconstant term of `E(w)` at total degree `q`, i.e.
/// the largest `k ≤ q` with `w ∈ Γ_k`. `None` means `w ∈ Γ_{q+1}`.
pub fn lcs_lower_bound(w: &Word, q: usize) -> Option<usize> {
    let s = expand(w, &TruncationPolicy::total_degree(w.rank(), q)).expect("matching rank");
    s.min_positive_degree()
}

/// Membership in `J^r`: `E(w) ≡ 1` modulo the per-variable cap ideal `caps`.
pub fn in_jr(w: &Word, caps: &[usize]) -> Result<bool, SeriesError> {
    if caps.len() != w.rank() {
        return Err(WordError::RankMismatch(w.rank(), caps.len()).into());
    }
    let policy = TruncationPolicy::from_caps(caps.to_vec())?;
    Ok(expand(w, &policy)?.is_one())
}
