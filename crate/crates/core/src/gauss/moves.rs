use std::fmt;

use super::{GaussError, Passage, Role, StringLinkCode};
use crate::words::Sign;

/// A 1-based component and a 0-based position: a passage index, or a gap
/// index for insertions (gap `p` sits before passage `p`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Site {
    pub component: usize,
    pub position: usize,
}

impl Site {
    pub fn new(component: usize, position: usize) -> Site {
        Site { component, position }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    /// Inserts `Oc Uc` (or `Uc Oc`) at a gap.
    R1Insert { at: Site, sign: Sign, over_first: bool },
    /// Removes the kink at passages `p`, `p + 1`.
    R1Delete { at: Site },
    /// Inserts `Oc^ε Od^-ε` at the `over` gap and `Uc^ε Ud^-ε` at the `under`
    /// gap, the latter in opposite order when `reversed`.
    R2Insert { over: Site, under: Site, sign: Sign, reversed: bool },
    /// Removes the bigon whose Overs start at `over` and Unders at `under`.
    R2Delete { over: Site, under: Site },
    /// Swaps the adjacent Overs at `p`, `p + 1`.
    OcSwap { at: Site },
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.component, self.position)
    }
}

fn sign_char(s: Sign) -> char {
    if s == Sign::Plus { '+' } else { '-' }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Move::R1Insert { at, sign, over_first } => {
                write!(f, "r1-insert {at} {}{}", sign_char(sign), if over_first { " over-first" } else { "" })
            }
            Move::R1Delete { at } => write!(f, "r1-delete {at}"),
            Move::R2Insert { over, under, sign, reversed } => write!(
                f,
                "r2-insert over {over} under {under} {}{}",
                sign_char(sign),
                if reversed { " reversed" } else { "" }
            ),
            Move::R2Delete { over, under } => write!(f, "r2-delete over {over} under {under}"),
            Move::OcSwap { at } => write!(f, "oc-swap {at}"),
        }
    }
}

impl StringLinkCode {
    fn component_mut(&mut self, i: usize) -> Result<&mut Vec<Passage>, GaussError> {
        self.components.get_mut(i.wrapping_sub(1)).ok_or(GaussError::ComponentOutOfRange(i))
    }

    fn pair_at(&self, site: Site) -> Option<(Passage, Passage)> {
        let comp = self.components.get(site.component.wrapping_sub(1))?;
        Some((*comp.get(site.position)?, *comp.get(site.position + 1)?))
    }

    fn check_gap(&self, site: Site) -> Result<(), GaussError> {
        let comp = self
            .components
            .get(site.component.wrapping_sub(1))
            .ok_or(GaussError::ComponentOutOfRange(site.component))?;
        if site.position > comp.len() {
            return Err(GaussError::Inapplicable(format!(
                "gap {} on component {} of length {}",
                site.position,
                site.component,
                comp.len()
            )));
        }
        Ok(())
    }

    /// Inserts blocks at gaps of the original code; at a shared gap earlier
    /// blocks end up first.
    fn insert_blocks(&mut self, mut blocks: Vec<(Site, Vec<Passage>)>) -> Result<(), GaussError> {
        blocks.reverse();
        blocks.sort_by(|a, b| (a.0.component, b.0.position).cmp(&(b.0.component, a.0.position)));
        for (site, block) in blocks {
            let comp = self.component_mut(site.component)?;
            comp.splice(site.position..site.position, block);
        }
        Ok(())
    }

    pub fn apply_move(&self, mv: &Move) -> Result<StringLinkCode, GaussError> {
        let mut out = self.clone();
        let fresh = self.max_crossing_id() + 1;
        match *mv {
            Move::R1Insert { at, sign, over_first } => {
                self.check_gap(at)?;
                let (o, u) = (Passage::over(fresh, sign), Passage::under(fresh, sign));
                let block = if over_first { vec![o, u] } else { vec![u, o] };
                out.insert_blocks(vec![(at, block)])?;
            }
            Move::R1Delete { at } => match self.pair_at(at) {
                Some((a, b)) if a.crossing == b.crossing => {
                    out.component_mut(at.component)?.drain(at.position..at.position + 2);
                }
                _ => return Err(GaussError::Inapplicable(format!("no kink at {at:?}"))),
            },
            Move::R2Insert { over, under, sign, reversed } => {
                self.check_gap(over)?;
                self.check_gap(under)?;
                let (c, d) = (fresh, fresh + 1);
                let overs = vec![Passage::over(c, sign), Passage::over(d, sign.flip())];
                let mut unders = vec![Passage::under(c, sign), Passage::under(d, sign.flip())];
                if reversed {
                    unders.reverse();
                }
                out.insert_blocks(vec![(over, overs), (under, unders)])?;
            }
            Move::R2Delete { over, under } => {
                let bigon = match (self.pair_at(over), self.pair_at(under)) {
                    (Some((o1, o2)), Some((u1, u2))) => {
                        o1.role == Role::Over
                            && o2.role == Role::Over
                            && u1.role == Role::Under
                            && u2.role == Role::Under
                            && o1.sign != o2.sign
                            && ((u1.crossing, u2.crossing) == (o1.crossing, o2.crossing)
                                || (u1.crossing, u2.crossing) == (o2.crossing, o1.crossing))
                    }
                    _ => false,
                };
                if !bigon {
                    return Err(GaussError::Inapplicable(format!("no bigon at {over:?}, {under:?}")));
                }
                let mut sites = [over, under];
                sites.sort_by(|a, b| (a.component, b.position).cmp(&(b.component, a.position)));
                for s in sites {
                    out.component_mut(s.component)?.drain(s.position..s.position + 2);
                }
            }
            Move::OcSwap { at } => match self.pair_at(at) {
                Some((a, b)) if a.role == Role::Over && b.role == Role::Over => {
                    out.component_mut(at.component)?.swap(at.position, at.position + 1);
                }
                _ => return Err(GaussError::Inapplicable(format!("no adjacent Overs at {at:?}"))),
            },
        }
        Ok(out)
    }
}

/// Every applicable R1Delete, R2Delete and OcSwap.
pub fn applicable_moves(code: &StringLinkCode) -> Vec<Move> {
    let mut moves = Vec::new();
    let mut over_pairs = Vec::new();
    let mut under_pairs = Vec::new();
    for (i, comp) in code.components.iter().enumerate() {
        for (p, w) in comp.windows(2).enumerate() {
            let at = Site::new(i + 1, p);
            if w[0].crossing == w[1].crossing {
                moves.push(Move::R1Delete { at });
            }
            match (w[0].role, w[1].role) {
                (Role::Over, Role::Over) => {
                    moves.push(Move::OcSwap { at });
                    if w[0].sign != w[1].sign {
                        over_pairs.push((at, w[0].crossing, w[1].crossing));
                    }
                }
                (Role::Under, Role::Under) => under_pairs.push((at, w[0].crossing, w[1].crossing)),
                _ => {}
            }
        }
    }
    for &(over, c, d) in &over_pairs {
        for &(under, x, y) in &under_pairs {
            if (x, y) == (c, d) || (x, y) == (d, c) {
                moves.push(Move::R2Delete { over, under });
            }
        }
    }
    moves
}
