//! Welded string links and links as Gauss codes.
//!
//! Only classical crossings are recorded. Each crossing appears exactly twice
//! in a code: once as an over-passage and once as an under-passage, both with
//! the crossing's sign. Arcs of a component are the maximal runs between
//! consecutive under-passages, so component `i` with `m` under-passages has
//! `m + 1` arcs and the first one carries the meridian `α_i`.

mod moves;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::exec::Execution;
use crate::magnus::{SeriesError, TruncatedSeries, TruncationPolicy};
use crate::words::Sign;

pub use moves::{applicable_moves, Move, Site};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaussError {
    #[error("line {line}: unexpected `{token}`, expected {expected}")]
    Syntax { line: usize, token: String, expected: &'static str },
    #[error("component numbering: {0}")]
    ComponentNumbering(String),
    #[error("crossing {0} has two passages with the same role")]
    DuplicateRole(u32),
    #[error("crossing {0} has passages with different signs")]
    SignMismatch(u32),
    #[error("crossing {0} appears only once")]
    Dangling(u32),
    #[error("component {0} out of range")]
    ComponentOutOfRange(usize),
    #[error("component counts differ: {0} vs {1}")]
    ComponentMismatch(usize, usize),
    #[error("basepoint {position} is not a gap of component {component}")]
    InvalidBasepoint { component: usize, position: usize },
    #[error("move not applicable: {0}")]
    Inapplicable(String),
    #[error("longitude iteration did not stabilize by pass {0}")]
    Stabilization(usize),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Over,
    Under,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Passage {
    pub crossing: u32,
    pub role: Role,
    pub sign: Sign,
}

impl Passage {
    pub fn over(crossing: u32, sign: Sign) -> Passage {
        Passage { crossing, role: Role::Over, sign }
    }

    pub fn under(crossing: u32, sign: Sign) -> Passage {
        Passage { crossing, role: Role::Under, sign }
    }
}

impl fmt::Display for Passage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = match self.role {
            Role::Over => 'O',
            Role::Under => 'U',
        };
        let s = match self.sign {
            Sign::Plus => '+',
            Sign::Minus => '-',
        };
        write!(f, "{r}{}{s}", self.crossing)
    }
}

/// Checks the two-passage condition; errors name the first offending crossing
/// in reading order.
fn validate(components: &[Vec<Passage>]) -> Result<(), GaussError> {
    let mut seen: BTreeMap<u32, (Option<Sign>, Option<Sign>)> = BTreeMap::new();
    let mut order = Vec::new();
    for p in components.iter().flatten() {
        let entry = seen.entry(p.crossing).or_insert_with(|| {
            order.push(p.crossing);
            (None, None)
        });
        let slot = match p.role {
            Role::Over => &mut entry.0,
            Role::Under => &mut entry.1,
        };
        if slot.is_some() {
            return Err(GaussError::DuplicateRole(p.crossing));
        }
        *slot = Some(p.sign);
    }
    for c in order {
        match seen[&c] {
            (Some(a), Some(b)) if a != b => return Err(GaussError::SignMismatch(c)),
            (Some(_), Some(_)) => {}
            _ => return Err(GaussError::Dangling(c)),
        }
    }
    Ok(())
}

fn write_components(f: &mut fmt::Formatter<'_>, components: &[Vec<Passage>]) -> fmt::Result {
    for (i, comp) in components.iter().enumerate() {
        write!(f, "{}:", i + 1)?;
        for p in comp {
            write!(f, " {p}")?;
        }
        writeln!(f)?;
    }
    Ok(())
}

/// A welded string link diagram: component `i` runs from bottom to top.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StringLinkCode {
    components: Vec<Vec<Passage>>,
}

/// A welded link diagram: components are read cyclically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinkCode {
    components: Vec<Vec<Passage>>,
}

/// Either kind of code, as produced by [`parse_code`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Code {
    StringLink(StringLinkCode),
    Link(LinkCode),
}

pub fn parse_code(text: &str, closed: bool) -> Result<Code, GaussError> {
    let components = parse::parse_components(text)?;
    validate(&components)?;
    Ok(if closed {
        Code::Link(LinkCode { components })
    } else {
        Code::StringLink(StringLinkCode { components })
    })
}

impl std::str::FromStr for StringLinkCode {
    type Err = GaussError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let components = parse::parse_components(s)?;
        StringLinkCode::new(components)
    }
}

impl std::str::FromStr for LinkCode {
    type Err = GaussError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let components = parse::parse_components(s)?;
        LinkCode::new(components)
    }
}

impl fmt::Display for StringLinkCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_components(f, &self.components)
    }
}

impl fmt::Display for LinkCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_components(f, &self.components)
    }
}

/// Arc `arc` (1-based) of component `component` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ArcRef {
    pub component: usize,
    pub arc: usize,
}

/// `a_{i,j+1} = a_{i,j}^{g^ε}` where `g` is the over-arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WirtingerRelation {
    pub component: usize,
    pub arc: usize,
    pub over: ArcRef,
    pub sign: Sign,
}

impl fmt::Display for WirtingerRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = if self.sign == Sign::Plus { "" } else { "^-1" };
        write!(
            f,
            "a{i},{j1} = a{i},{j}^(a{k},{l}{e})",
            i = self.component,
            j1 = self.arc + 1,
            j = self.arc,
            k = self.over.component,
            l = self.over.arc
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WirtingerPresentation {
    /// Arc count per component.
    pub arcs: Vec<usize>,
    pub relations: Vec<WirtingerRelation>,
}

impl fmt::Display for WirtingerPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.relations {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Per under-passage data: 0-based over component, 0-based over arc, sign.
type UnderData = Vec<Vec<(usize, usize, Sign)>>;

impl StringLinkCode {
    pub fn new(components: Vec<Vec<Passage>>) -> Result<Self, GaussError> {
        validate(&components)?;
        Ok(StringLinkCode { components })
    }

    pub fn trivial(n: usize) -> Self {
        StringLinkCode { components: vec![Vec::new(); n] }
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Vec<Passage>] {
        &self.components
    }

    pub fn crossing_count(&self) -> usize {
        self.components.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub(crate) fn max_crossing_id(&self) -> u32 {
        self.components.iter().flatten().map(|p| p.crossing).max().unwrap_or(0)
    }

    fn under_data(&self) -> UnderData {
        let mut over_at: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
        for (k, comp) in self.components.iter().enumerate() {
            let mut arc = 0;
            for p in comp {
                match p.role {
                    Role::Over => {
                        over_at.insert(p.crossing, (k, arc));
                    }
                    Role::Under => arc += 1,
                }
            }
        }
        self.components
            .iter()
            .map(|comp| {
                comp.iter()
                    .filter(|p| p.role == Role::Under)
                    .map(|p| {
                        let (k, a) = over_at[&p.crossing];
                        (k, a, p.sign)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn wirtinger(&self) -> WirtingerPresentation {
        let data = self.under_data();
        let arcs = data.iter().map(|u| u.len() + 1).collect();
        let relations = data
            .iter()
            .enumerate()
            .flat_map(|(i, us)| {
                us.iter().enumerate().map(move |(j, &(k, a, sign))| WirtingerRelation {
                    component: i + 1,
                    arc: j + 1,
                    over: ArcRef { component: k + 1, arc: a + 1 },
                    sign,
                })
            })
            .collect();
        WirtingerPresentation { arcs, relations }
    }

    /// Sum of signs of crossings with both passages on component `i`.
    pub fn self_writhe(&self, i: usize) -> Result<i64, GaussError> {
        if i == 0 || i > self.components.len() {
            return Err(GaussError::ComponentOutOfRange(i));
        }
        let data = self.under_data();
        Ok(data[i - 1].iter().filter(|&&(k, _, _)| k == i - 1).map(|&(_, _, s)| s.value()).sum())
    }

    /// Stacks `other` on top of `self`, relabelling `other`'s crossings.
    pub fn stack(&self, other: &StringLinkCode) -> Result<StringLinkCode, GaussError> {
        if self.components.len() != other.components.len() {
            return Err(GaussError::ComponentMismatch(self.components.len(), other.components.len()));
        }
        let shift = self.max_crossing_id();
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| {
                a.iter()
                    .copied()
                    .chain(b.iter().map(|p| Passage { crossing: p.crossing + shift, ..*p }))
                    .collect()
            })
            .collect();
        Ok(StringLinkCode { components })
    }

    /// The closure, read cyclically.
    pub fn closure(&self) -> LinkCode {
        LinkCode { components: self.components.clone() }
    }

    /// Longitude expansions `E(λ_i)` truncated above total degree `q`.
    pub fn longitude_series(&self, q: usize) -> Result<Vec<TruncatedSeries>, GaussError> {
        let policy = TruncationPolicy::total_degree(self.components.len(), q);
        self.longitudes_in(&policy, Execution::default())
    }

    /// Longitude expansions `E(λ_i)` in the quotient described by `policy`.
    ///
    /// Arc series are found by fixed-point iteration: every arc starts as
    /// `1 + X_i`, and each pass recomputes `A_{j+1} = B⁻¹ A_j B` from the
    /// previous pass's over-arcs. After pass `t` everything through degree
    /// `t` is final, which is checked on every pass; the run ends on the
    /// first pass that changes nothing.
    pub fn longitudes_in(&self, policy: &TruncationPolicy, exec: Execution) -> Result<Vec<TruncatedSeries>, GaussError> {
        let n = self.components.len();
        if policy.rank() != n {
            return Err(GaussError::ComponentMismatch(n, policy.rank()));
        }
        let data = self.under_data();
        let gens: Vec<TruncatedSeries> =
            (1..=n).map(|i| TruncatedSeries::generator(policy, i)).collect::<Result<_, _>>()?;
        let gen_invs: Vec<TruncatedSeries> = gens.iter().map(|g| g.inverse()).collect::<Result<_, _>>()?;

        // arcs[i][j] = (A, A⁻¹)
        let mut arcs: Vec<Vec<(TruncatedSeries, TruncatedSeries)>> = data
            .iter()
            .enumerate()
            .map(|(i, us)| vec![(gens[i].clone(), gen_invs[i].clone()); us.len() + 1])
            .collect();

        let limit = policy.max_degree() + 2;
        let mut pass = 0;
        loop {
            pass += 1;
            if pass > limit {
                return Err(GaussError::Stabilization(pass - 1));
            }
            let prev = &arcs;
            let next: Vec<Vec<(TruncatedSeries, TruncatedSeries)>> = exec
                .map_range(n, |i| -> Result<_, SeriesError> {
                    let mut out = Vec::with_capacity(data[i].len() + 1);
                    out.push((gens[i].clone(), gen_invs[i].clone()));
                    for &(k, a, sign) in &data[i] {
                        let (b, binv) = over_factor(&prev[k][a], sign);
                        let (cur, cur_inv) = out.last().expect("first arc");
                        let nxt = binv.mul(cur)?.mul(b)?;
                        let nxt_inv = binv.mul(cur_inv)?.mul(b)?;
                        out.push((nxt, nxt_inv));
                    }
                    Ok(out)
                })
                .into_iter()
                .collect::<Result<_, _>>()?;
            for (old, new) in arcs.iter().flatten().zip(next.iter().flatten()) {
                if !agree_through(&old.0, &new.0, pass) {
                    return Err(GaussError::Stabilization(pass));
                }
            }
            if next == arcs {
                break;
            }
            arcs = next;
        }

        let mut out = Vec::with_capacity(n);
        for (i, passes) in data.iter().enumerate() {
            let f = self.self_writhe(i + 1)?;
            let mut lam = TruncatedSeries::one(policy).mul_generator_power(i + 1, -f)?;
            for &(k, a, sign) in passes {
                let (b, _) = over_factor(&arcs[k][a], sign);
                lam = lam.mul(b)?;
            }
            out.push(lam);
        }
        Ok(out)
    }
}

fn over_factor(arc: &(TruncatedSeries, TruncatedSeries), sign: Sign) -> (&TruncatedSeries, &TruncatedSeries) {
    match sign {
        Sign::Plus => (&arc.0, &arc.1),
        Sign::Minus => (&arc.1, &arc.0),
    }
}

fn agree_through(a: &TruncatedSeries, b: &TruncatedSeries, d: usize) -> bool {
    let low = |s: &TruncatedSeries| s.terms().iter().take_while(|(m, _)| m.degree() <= d).count();
    let (la, lb) = (low(a), low(b));
    la == lb && a.terms()[..la] == b.terms()[..lb]
}

impl LinkCode {
    pub fn new(components: Vec<Vec<Passage>>) -> Result<Self, GaussError> {
        validate(&components)?;
        Ok(LinkCode { components })
    }

    pub fn unlink(n: usize) -> Self {
        LinkCode { components: vec![Vec::new(); n] }
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Vec<Passage>] {
        &self.components
    }

    /// Number of gaps (basepoint choices) on component `i` (1-based).
    pub fn gap_count(&self, i: usize) -> usize {
        self.components[i - 1].len().max(1)
    }

    /// Opens each component at the gap before passage `basepoints[i]`.
    pub fn cut(&self, basepoints: &[usize]) -> Result<StringLinkCode, GaussError> {
        if basepoints.len() != self.components.len() {
            return Err(GaussError::ComponentMismatch(self.components.len(), basepoints.len()));
        }
        let components = self
            .components
            .iter()
            .zip(basepoints)
            .enumerate()
            .map(|(i, (comp, &p))| {
                if p >= comp.len().max(1) {
                    return Err(GaussError::InvalidBasepoint { component: i + 1, position: p });
                }
                let mut c = comp.clone();
                c.rotate_left(p);
                Ok(c)
            })
            .collect::<Result<_, _>>()?;
        Ok(StringLinkCode { components })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integer::Integer;
    use crate::magnus::Monomial;

    fn code(s: &str) -> StringLinkCode {
        s.parse().unwrap()
    }

    fn series(q: usize, n: usize, terms: &[(&[usize], i64)]) -> TruncatedSeries {
        let p = TruncationPolicy::total_degree(n, q);
        TruncatedSeries::from_terms(&p, terms.iter().map(|(m, c)| (Monomial::new(m), Integer::from(*c))))
    }

    #[test]
    fn parse_examples() {
        let c = code("1: U1+ / 2: O1+");
        assert_eq!(c.component_count(), 2);
        assert_eq!(c.crossing_count(), 1);
        let k = code("1: O1+ U1+");
        assert_eq!(k.component_count(), 1);
        assert_eq!("1: U1+ / 2: O1-".parse::<StringLinkCode>(), Err(GaussError::SignMismatch(1)));
        assert_eq!("1: U1+ / 2: U1+".parse::<StringLinkCode>(), Err(GaussError::DuplicateRole(1)));
        assert_eq!("1: U1+ / 2:".parse::<StringLinkCode>(), Err(GaussError::Dangling(1)));
    }

    #[test]
    fn wirtinger_examples() {
        let t = StringLinkCode::trivial(2).wirtinger();
        assert_eq!(t.arcs, vec![1, 1]);
        assert!(t.relations.is_empty());

        let w = code("1: U1+ / 2: O1+").wirtinger();
        assert_eq!(w.arcs, vec![2, 1]);
        assert_eq!(
            w.relations,
            vec![WirtingerRelation {
                component: 1,
                arc: 1,
                over: ArcRef { component: 2, arc: 1 },
                sign: Sign::Plus
            }]
        );
        assert_eq!(w.relations[0].to_string(), "a1,2 = a1,1^(a2,1)");

        let k = code("1: O1+ U1+").wirtinger();
        assert_eq!(k.relations[0].over, ArcRef { component: 1, arc: 1 });
    }

    #[test]
    fn writhe_examples() {
        assert_eq!(StringLinkCode::trivial(2).self_writhe(1).unwrap(), 0);
        assert_eq!(code("1: O1+ U1+").self_writhe(1).unwrap(), 1);
        let c = code("1: U1+ / 2: O1+");
        assert_eq!(c.self_writhe(1).unwrap(), 0);
        assert_eq!(c.self_writhe(2).unwrap(), 0);
        assert!(c.self_writhe(3).is_err());
    }

    #[test]
    fn longitude_examples() {
        for l in StringLinkCode::trivial(3).longitude_series(4).unwrap() {
            assert!(l.is_one());
        }
        let l = code("1: U1+ / 2: O1+").longitude_series(4).unwrap();
        assert_eq!(l[0], series(4, 2, &[(&[], 1), (&[2], 1)]));
        assert!(l[1].is_one());
        for kink in ["1: O1+ U1+", "1: U1- O1-", "1: O1- U1-", "1: U1+ O1+"] {
            let l = code(kink).longitude_series(5).unwrap();
            assert!(l[0].is_one(), "{kink}");
        }
    }

    #[test]
    fn stacking() {
        let c = code("1: U1+ / 2: O1+");
        let t = StringLinkCode::trivial(2);
        assert_eq!(t.stack(&c).unwrap(), c);
        assert_eq!(c.stack(&t).unwrap(), c);
        let cc = c.stack(&c).unwrap();
        assert_eq!(cc.crossing_count(), 2);
        let l = cc.longitude_series(3).unwrap();
        // (1+X2)^2
        assert_eq!(l[0], series(3, 2, &[(&[], 1), (&[2], 2), (&[2, 2], 1)]));
        assert!(matches!(c.stack(&StringLinkCode::trivial(3)), Err(GaussError::ComponentMismatch(2, 3))));
    }

    #[test]
    fn cutting() {
        let u = LinkCode::unlink(1);
        assert_eq!(u.cut(&[0]).unwrap(), StringLinkCode::trivial(1));
        let hopf: LinkCode = "1: O1+ U2+ / 2: U1+ O2+".parse().unwrap();
        let a = hopf.cut(&[0, 0]).unwrap();
        let b = hopf.cut(&[1, 0]).unwrap();
        assert_eq!(a.crossing_count(), 2);
        assert_eq!(b.components()[0], vec![a.components()[0][1], a.components()[0][0]]);
        assert!(matches!(hopf.cut(&[2, 0]), Err(GaussError::InvalidBasepoint { component: 1, position: 2 })));
        assert!(matches!(u.cut(&[1]), Err(GaussError::InvalidBasepoint { .. })));
    }

    #[test]
    fn serialize_round_trip() {
        for s in ["1: U1+\n2: O1+\n", "1:\n2:\n", "1: O3- U3- O7+\n2: U7+\n"] {
            let c = code(s);
            assert_eq!(c.to_string(), s);
            assert_eq!(code(&c.to_string()), c);
        }
    }

    #[test]
    fn preferred_longitudes_have_no_pure_self_terms() {
        let c = code("1: O1+ U2- O3+ U4+ / 2: U1+ O2- U3+ O4+ O5+ / 3: U5+");
        let ls = c.longitude_series(4).unwrap();
        for (i, l) in ls.iter().enumerate() {
            let x = Monomial::new(&[i + 1]);
            assert!(l.coefficient(&x).unwrap().is_zero());
        }
    }

    #[test]
    fn parallel_and_sequential_longitudes_agree() {
        let c = code("1: O1+ U2- O3+ U4+ / 2: U1+ O2- U3+ O4+ O5+ / 3: U5+");
        let p = TruncationPolicy::total_degree(3, 5);
        assert_eq!(
            c.longitudes_in(&p, Execution::Sequential).unwrap(),
            c.longitudes_in(&p, Execution::Parallel).unwrap()
        );
    }
}
