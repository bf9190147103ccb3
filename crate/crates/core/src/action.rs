//! The `k`-reduced free action of a welded string link.
//!
//! An action is stored as its conjugator residues `λ_i mod R_i^k` together
//! with the generator images `λ̄_i (1+X_i) λ_i mod R^k`. Stacking `L` below
//! `L′` gives `compose(action(L), action(L′))`, whose residues are
//! `λ_L · φ_L(λ_{L′})` and whose images are `φ_L ∘ φ_{L′}`.

use crate::exec::Execution;
use crate::gauss::StringLinkCode;
use crate::invariants::{longitude_policy, InvariantError};
use crate::magnus::{expand, TruncatedSeries, TruncationPolicy};
use crate::words::{Word, WordError};

#[derive(Debug, Clone)]
pub struct KReducedAction {
    k: usize,
    rank: usize,
    residues: Vec<TruncatedSeries>,
    images: Vec<TruncatedSeries>,
}

/// Equality of residues, which determines the images.
impl PartialEq for KReducedAction {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.rank == other.rank && self.residues == other.residues
    }
}

impl Eq for KReducedAction {}

fn conjugated_generator(policy: &TruncationPolicy, i: usize, lam: &TruncatedSeries) -> Result<TruncatedSeries, InvariantError> {
    let g = TruncatedSeries::generator(policy, i)?;
    Ok(lam.inverse()?.mul(&g)?.mul(lam)?)
}

impl KReducedAction {
    pub fn identity(rank: usize, k: usize) -> Result<Self, InvariantError> {
        let residues = (1..=rank)
            .map(|i| Ok(TruncatedSeries::one(&TruncationPolicy::reduced_at(rank, k, i)?)))
            .collect::<Result<Vec<_>, InvariantError>>()?;
        Self::from_residues(k, residues)
    }

    /// Builds the action whose conjugators are the given residues, one per
    /// component, each under its `R_i^k` policy.
    pub fn from_residues(k: usize, residues: Vec<TruncatedSeries>) -> Result<Self, InvariantError> {
        if k == 0 {
            return Err(InvariantError::InvalidK);
        }
        let rank = residues.len();
        let big = TruncationPolicy::reduced(rank, k);
        let mut images = Vec::with_capacity(rank);
        for (i, r) in residues.iter().enumerate() {
            if r.policy() != &TruncationPolicy::reduced_at(rank, k, i + 1)? || !r.constant_term().is_one() {
                return Err(InvariantError::ParameterMismatch);
            }
            images.push(conjugated_generator(&big, i + 1, &r.lift_to(&big)?)?);
        }
        Ok(KReducedAction { k, rank, residues, images })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn residues(&self) -> &[TruncatedSeries] {
        &self.residues
    }

    pub fn images(&self) -> &[TruncatedSeries] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.residues.iter().all(TruncatedSeries::is_one)
    }

    fn check_same(&self, other: &Self) -> Result<(), InvariantError> {
        if self.k != other.k || self.rank != other.rank {
            return Err(InvariantError::ParameterMismatch);
        }
        Ok(())
    }

    /// `φ(s)` for a series `s` under any policy coarser than or equal to `R^k`.
    fn apply_series(&self, s: &TruncatedSeries) -> Result<TruncatedSeries, InvariantError> {
        let big = TruncationPolicy::reduced(self.rank, self.k);
        Ok(s.lift_to(&big)?.substitute(&self.images)?)
    }

    pub fn apply(&self, w: &Word) -> Result<TruncatedSeries, InvariantError> {
        if w.rank() != self.rank {
            return Err(WordError::RankMismatch(w.rank(), self.rank).into());
        }
        let big = TruncationPolicy::reduced(self.rank, self.k);
        Ok(expand(w, &big)?.substitute(&self.images)?)
    }

    /// `self` applied after `other` on generators; residues `λ_φ · φ(λ_ψ)`.
    pub fn compose(&self, other: &Self) -> Result<Self, InvariantError> {
        self.check_same(other)?;
        let residues = self
            .residues
            .iter()
            .zip(&other.residues)
            .map(|(a, b)| Ok(a.mul(&self.apply_series(b)?.reduce_to(a.policy())?)?))
            .collect::<Result<Vec<_>, InvariantError>>()?;
        let images = other.images.iter().map(|g| self.apply_series(g)).collect::<Result<Vec<_>, _>>()?;
        Ok(KReducedAction { k: self.k, rank: self.rank, residues, images })
    }

    /// Solves `λ_ψ = ψ(λ_φ⁻¹)` by iteration and checks both composites.
    pub fn invert(&self) -> Result<Self, InvariantError> {
        let inv: Vec<TruncatedSeries> = self.residues.iter().map(|r| r.inverse()).collect::<Result<_, _>>()?;
        let mut psi = Self::from_residues(self.k, inv.clone())?;
        let rounds = self.rank * self.k + 2;
        for _ in 0..rounds {
            let next = inv
                .iter()
                .map(|r| Ok(psi.apply_series(r)?.reduce_to(r.policy())?))
                .collect::<Result<Vec<_>, InvariantError>>()?;
            if next == psi.residues {
                break;
            }
            psi = Self::from_residues(self.k, next)?;
        }
        let id = Self::identity(self.rank, self.k)?;
        let left = self.compose(&psi)?;
        let right = psi.compose(self)?;
        if left != id || right != id || left.images != id.images || right.images != id.images {
            return Err(InvariantError::InversionFailed(rounds));
        }
        Ok(psi)
    }
}

pub fn action(code: &StringLinkCode, k: usize) -> Result<KReducedAction, InvariantError> {
    action_with(code, k, Execution::default())
}

/// Residues from the longitudes mod `R_i^k`; images straight from the
/// unreduced longitudes.
pub fn action_with(code: &StringLinkCode, k: usize, exec: Execution) -> Result<KReducedAction, InvariantError> {
    if k == 0 {
        return Err(InvariantError::InvalidK);
    }
    let n = code.component_count();
    let lams = code.longitudes_in(&longitude_policy(n, k, n * k), exec)?;
    let big = TruncationPolicy::reduced(n, k);
    let mut residues = Vec::with_capacity(n);
    let mut images = Vec::with_capacity(n);
    for (i, lam) in lams.iter().enumerate() {
        residues.push(lam.reduce_to(&TruncationPolicy::reduced_at(n, k, i + 1)?)?);
        images.push(conjugated_generator(&big, i + 1, &lam.lift_to(&big)?)?);
    }
    Ok(KReducedAction { k, rank: n, residues, images })
}

pub fn action_apply(phi: &KReducedAction, w: &Word) -> Result<TruncatedSeries, InvariantError> {
    phi.apply(w)
}

pub fn action_compose(phi: &KReducedAction, psi: &KReducedAction) -> Result<KReducedAction, InvariantError> {
    phi.compose(psi)
}

pub fn action_invert(phi: &KReducedAction) -> Result<KReducedAction, InvariantError> {
    phi.invert()
}
