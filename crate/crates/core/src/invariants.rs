//! Milnor invariants, `r(I)`-filtered tables and `k`-equality.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::action::{action_with, KReducedAction};
use crate::exec::Execution;
use crate::gauss::{GaussError, LinkCode, StringLinkCode};
use crate::integer::Integer;
use crate::magnus::{Monomial, SeriesError, TruncatedSeries, TruncationPolicy};
use crate::words::WordError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Gauss(#[from] GaussError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("index {index} outside 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("empty Milnor index")]
    EmptyIndex,
    #[error("component counts differ: {0} vs {1}")]
    ComponentMismatch(usize, usize),
    #[error("k must be at least 1")]
    InvalidK,
    #[error("actions have different parameters")]
    ParameterMismatch,
    #[error("inversion did not verify after {0} rounds")]
    InversionFailed(usize),
}

/// A sequence `I = j₁…j_l i`, ordered by length then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MilnorIndex(Vec<usize>);

impl MilnorIndex {
    pub fn new(indices: Vec<usize>, rank: usize) -> Result<Self, InvariantError> {
        if indices.is_empty() {
            return Err(InvariantError::EmptyIndex);
        }
        if let Some(&index) = indices.iter().find(|&&j| j == 0 || j > rank) {
            return Err(InvariantError::IndexOutOfRange { index, rank });
        }
        Ok(MilnorIndex(indices))
    }

    fn from_monomial(m: &Monomial, i: usize) -> Self {
        let mut v: Vec<usize> = m.indices().collect();
        v.push(i);
        MilnorIndex(v)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The last index, naming the longitude.
    pub fn component(&self) -> usize {
        *self.0.last().expect("nonempty")
    }

    pub fn monomial(&self) -> Monomial {
        Monomial::new(&self.0[..self.0.len() - 1])
    }

    /// Largest multiplicity of any index.
    pub fn r(&self) -> usize {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &j in &self.0 {
            *counts.entry(j).or_default() += 1;
        }
        counts.into_values().max().unwrap_or(0)
    }
}

impl Ord for MilnorIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.0.len(), &self.0).cmp(&(other.0.len(), &other.0))
    }
}

impl PartialOrd for MilnorIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MilnorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "mu({})", parts.join(","))
    }
}

impl std::str::FromStr for MilnorIndex {
    type Err = String;
    /// Accepts `2,3,1`, `2 3 1` or `231` (single-digit indices).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let parts: Vec<&str> = if s.contains([',', ' ']) {
            s.split([',', ' ']).filter(|p| !p.is_empty()).collect()
        } else {
            s.split("").filter(|p| !p.is_empty()).collect()
        };
        let v = parts
            .iter()
            .map(|p| p.parse::<usize>().map_err(|_| format!("bad index `{p}`")))
            .collect::<Result<Vec<_>, _>>()?;
        if v.is_empty() {
            return Err("empty index".into());
        }
        Ok(MilnorIndex(v))
    }
}

/// Every `μ(I)` with `r(I) ≤ k` and `|I| ≤ max_len`, zeros included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantTable {
    k: usize,
    max_len: usize,
    entries: BTreeMap<MilnorIndex, Integer>,
}

impl InvariantTable {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn entries(&self) -> &BTreeMap<MilnorIndex, Integer> {
        &self.entries
    }

    pub fn get(&self, i: &MilnorIndex) -> Option<&Integer> {
        self.entries.get(i)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (&MilnorIndex, &Integer)> {
        self.entries.iter().filter(|(_, v)| !v.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero().next().is_none()
    }

    /// First index where the tables differ.
    pub fn first_difference(&self, other: &InvariantTable) -> Option<MilnorIndex> {
        let keys: std::collections::BTreeSet<&MilnorIndex> = self.entries.keys().chain(other.entries.keys()).collect();
        keys.into_iter()
            .find(|key| self.entries.get(*key).unwrap_or(&Integer::ZERO) != other.entries.get(*key).unwrap_or(&Integer::ZERO))
            .cloned()
    }
}

impl fmt::Display for InvariantTable {
    /// Nonzero entries only.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.nonzero() {
            writeln!(f, "{i} = {v}")?;
        }
        Ok(())
    }
}

fn check_k(k: usize) -> Result<(), InvariantError> {
    if k == 0 {
        return Err(InvariantError::InvalidK);
    }
    Ok(())
}

/// `μ_L(I)` from the longitude series at degree `|I| - 1`.
pub fn milnor(code: &StringLinkCode, index: &MilnorIndex) -> Result<Integer, InvariantError> {
    let n = code.component_count();
    let index = MilnorIndex::new(index.0.clone(), n)?;
    if index.len() == 1 {
        return Ok(Integer::ZERO);
    }
    let lam = code.longitude_series(index.len() - 1)?;
    Ok(lam[index.component() - 1].coefficient(&index.monomial())?)
}

/// Quotient in which every longitude is computed for `r(I) ≤ k` questions:
/// at most `k` occurrences per variable, degree below `min(nk, max_len)`.
pub(crate) fn longitude_policy(n: usize, k: usize, max_len: usize) -> TruncationPolicy {
    TruncationPolicy::with_caps(n, (n * k).min(max_len).saturating_sub(1), vec![k + 1; n]).expect("positive caps")
}

pub fn milnor_table(code: &StringLinkCode, k: usize, max_len: usize) -> Result<InvariantTable, InvariantError> {
    milnor_table_with(code, k, max_len, Execution::default())
}

pub fn milnor_table_with(
    code: &StringLinkCode,
    k: usize,
    max_len: usize,
    exec: Execution,
) -> Result<InvariantTable, InvariantError> {
    check_k(k)?;
    let n = code.component_count();
    let lams = code.longitudes_in(&longitude_policy(n, k, max_len), exec)?;
    table_from_longitudes(&lams, k, max_len)
}

/// Reads all `r(I) ≤ k` coefficients off longitude series whose policy
/// admits every such monomial up to length `max_len`.
pub fn table_from_longitudes(
    lams: &[TruncatedSeries],
    k: usize,
    max_len: usize,
) -> Result<InvariantTable, InvariantError> {
    check_k(k)?;
    let n = lams.len();
    let max_len = max_len.min(n * k);
    let mut entries = BTreeMap::new();
    for (i0, lam) in lams.iter().enumerate() {
        let i = i0 + 1;
        let filter = TruncationPolicy::reduced_at(n, k, i)?;
        for m in filter.monomials() {
            if m.degree() + 1 > max_len {
                continue;
            }
            let c = if m.degree() == 0 { Integer::ZERO } else { lam.coefficient(&m)? };
            entries.insert(MilnorIndex::from_monomial(&m, i), c);
        }
    }
    Ok(InvariantTable { k, max_len, entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Table,
    Longitude,
    Action,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(Mode::Table),
            "longitude" => Ok(Mode::Longitude),
            "action" => Ok(Mode::Action),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub equal: bool,
    /// An index on which the invariants differ, when one was identified.
    pub witness: Option<MilnorIndex>,
}

/// Residues `λ_i mod R_i^k`.
pub fn residues(code: &StringLinkCode, k: usize, exec: Execution) -> Result<Vec<TruncatedSeries>, InvariantError> {
    check_k(k)?;
    let n = code.component_count();
    let lams = code.longitudes_in(&longitude_policy(n, k, n * k), exec)?;
    lams.iter()
        .enumerate()
        .map(|(i, l)| Ok(l.reduce_to(&TruncationPolicy::reduced_at(n, k, i + 1)?)?))
        .collect()
}

fn residue_witness(a: &[TruncatedSeries], b: &[TruncatedSeries]) -> Result<Option<MilnorIndex>, InvariantError> {
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        let d = x.sub(y)?;
        if let Some((m, _)) = d.terms().first() {
            return Ok(Some(MilnorIndex::from_monomial(m, i + 1)));
        }
    }
    Ok(None)
}

/// Whether `L` and `L′` share every `μ(I)` with `r(I) ≤ k`, decided through
/// the table, the `R_i^k` residues, or the `k`-reduced action.
pub fn k_equal(a: &StringLinkCode, b: &StringLinkCode, k: usize, mode: Mode) -> Result<Comparison, InvariantError> {
    k_equal_with(a, b, k, mode, Execution::default())
}

pub fn k_equal_with(
    a: &StringLinkCode,
    b: &StringLinkCode,
    k: usize,
    mode: Mode,
    exec: Execution,
) -> Result<Comparison, InvariantError> {
    check_k(k)?;
    let n = a.component_count();
    if n != b.component_count() {
        return Err(InvariantError::ComponentMismatch(n, b.component_count()));
    }
    match mode {
        Mode::Table => {
            let ta = milnor_table_with(a, k, n * k, exec)?;
            let tb = milnor_table_with(b, k, n * k, exec)?;
            let witness = ta.first_difference(&tb);
            Ok(Comparison { equal: witness.is_none(), witness })
        }
        Mode::Longitude => {
            let ra = residues(a, k, exec)?;
            let rb = residues(b, k, exec)?;
            let witness = residue_witness(&ra, &rb)?;
            Ok(Comparison { equal: witness.is_none(), witness })
        }
        Mode::Action => {
            let fa: KReducedAction = action_with(a, k, exec)?;
            let fb = action_with(b, k, exec)?;
            let equal = fa.images() == fb.images();
            let witness = if equal { None } else { residue_witness(fa.residues(), fb.residues())? };
            Ok(Comparison { equal, witness })
        }
    }
}

/// Whether every `μ(I)` with `r(I) ≤ k` of the closed link vanishes, read
/// off the string link cut at the first gap of each component.
pub fn link_vanishing(link: &LinkCode, k: usize) -> Result<bool, InvariantError> {
    link_vanishing_at(link, k, &vec![0; link.component_count()])
}

pub fn link_vanishing_at(link: &LinkCode, k: usize, basepoints: &[usize]) -> Result<bool, InvariantError> {
    let n = link.component_count();
    let cut = link.cut(basepoints)?;
    Ok(milnor_table(&cut, k, n * k)?.is_zero())
}
