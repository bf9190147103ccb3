//! Word-level w-tree presentations.
//!
//! Trees and arrow unions are modelled by their words. A sorted presentation
//! puts every tail on the initial segment of its component, ahead of all
//! heads, so surgery along it is a plain Gauss code whose `i`-th longitude is
//! the product of component `i`'s slot words.

use std::fmt;

use thiserror::Error;

use crate::gauss::{Passage, StringLinkCode};
use crate::words::{Sign, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrowError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("self tree on component {component} has a leaf labelled {found}")]
    LeafLabel { component: usize, found: usize },
    #[error("component {0} out of range")]
    ComponentOutOfRange(usize),
    #[error("slot position {position} exceeds {len} slots")]
    SlotPosition { position: usize, len: usize },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CommTree {
    Leaf { generator: usize, twisted: bool, conjugator: Option<Word> },
    Node { left: Box<CommTree>, right: Box<CommTree>, twisted: bool },
}

impl CommTree {
    pub fn leaf(generator: usize) -> CommTree {
        CommTree::Leaf { generator, twisted: false, conjugator: None }
    }

    pub fn node(left: CommTree, right: CommTree) -> CommTree {
        CommTree::Node { left: Box::new(left), right: Box::new(right), twisted: false }
    }

    pub fn twisted(self) -> CommTree {
        match self {
            CommTree::Leaf { generator, twisted, conjugator } => {
                CommTree::Leaf { generator, twisted: !twisted, conjugator }
            }
            CommTree::Node { left, right, twisted } => CommTree::Node { left, right, twisted: !twisted },
        }
    }

    /// Sets the conjugator of a leaf; nodes are returned unchanged.
    pub fn conjugated_by(self, w: Word) -> CommTree {
        match self {
            CommTree::Leaf { generator, twisted, .. } => CommTree::Leaf { generator, twisted, conjugator: Some(w) },
            node => node,
        }
    }

    /// Right-nested tree on the given generators.
    pub fn linear(generators: &[usize]) -> Option<CommTree> {
        let (last, init) = generators.split_last()?;
        Some(init.iter().rev().fold(CommTree::leaf(*last), |acc, &g| CommTree::node(CommTree::leaf(g), acc)))
    }

    pub fn degree(&self) -> usize {
        match self {
            CommTree::Leaf { .. } => 1,
            CommTree::Node { left, right, .. } => left.degree() + right.degree(),
        }
    }

    pub fn leaf_generators(&self) -> Vec<usize> {
        match self {
            CommTree::Leaf { generator, .. } => vec![*generator],
            CommTree::Node { left, right, .. } => {
                let mut v = left.leaf_generators();
                v.extend(right.leaf_generators());
                v
            }
        }
    }
}

pub fn tree_word(tree: &CommTree, rank: usize) -> Result<Word, ArrowError> {
    Ok(match tree {
        CommTree::Leaf { generator, twisted, conjugator } => {
            let e = if *twisted { -1 } else { 1 };
            let x = Word::power_of(rank, *generator, e)?;
            match conjugator {
                Some(c) => x.conjugate(c)?,
                None => x,
            }
        }
        CommTree::Node { left, right, twisted } => {
            let w = tree_word(left, rank)?.commutator(&tree_word(right, rank)?)?;
            if *twisted {
                w.invert()
            } else {
                w
            }
        }
    })
}

/// `α_generator^sign` conjugated by `conjugator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotLetter {
    pub generator: usize,
    pub sign: Sign,
    pub conjugator: Word,
}

/// A union of adjacent heads on one component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub component: usize,
    pub letters: Vec<SlotLetter>,
}

impl Slot {
    pub fn from_word(component: usize, w: &Word) -> Slot {
        Slot::from_letters(component, w.rank(), w.letters())
    }

    pub fn from_letters(component: usize, rank: usize, letters: impl IntoIterator<Item = (usize, Sign)>) -> Slot {
        let letters = letters
            .into_iter()
            .map(|(generator, sign)| SlotLetter { generator, sign, conjugator: Word::identity(rank) })
            .collect();
        Slot { component, letters }
    }

    /// Letters with conjugators written out, unreduced.
    pub fn raw_letters(&self) -> Vec<(usize, Sign)> {
        let mut out = Vec::new();
        for l in &self.letters {
            out.extend(l.conjugator.invert().letters());
            out.push((l.generator, l.sign));
            out.extend(l.conjugator.letters());
        }
        out
    }

    pub fn word(&self, rank: usize) -> Result<Word, ArrowError> {
        Ok(Word::from_letters(rank, &self.raw_letters())?)
    }
}

/// Reduced letters of the slot word, one elementary arrow each.
pub fn expand_letters(slot: &Slot, rank: usize) -> Result<Vec<(usize, Sign)>, ArrowError> {
    Ok(slot.word(rank)?.letters().collect())
}

/// Sorted presentation: the slots of each component, bottom to top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowPresentation {
    rank: usize,
    slots: Vec<Vec<Slot>>,
}

impl ArrowPresentation {
    pub fn empty(rank: usize) -> Self {
        ArrowPresentation { rank, slots: vec![Vec::new(); rank] }
    }

    /// One slot per component carrying `words[i]`.
    pub fn from_words(words: &[Word]) -> Result<Self, ArrowError> {
        let rank = words.len();
        let mut p = ArrowPresentation::empty(rank);
        for (i, w) in words.iter().enumerate() {
            if w.rank() != rank {
                return Err(WordError::RankMismatch(w.rank(), rank).into());
            }
            p.slots[i].push(Slot::from_word(i + 1, w));
        }
        Ok(p)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn slots(&self, component: usize) -> &[Slot] {
        &self.slots[component - 1]
    }

    pub fn push_slot(&mut self, slot: Slot) -> Result<(), ArrowError> {
        let len = self.slots(self.check_component(slot.component)?).len();
        self.insert_slot(slot, len)
    }

    pub fn insert_slot(&mut self, slot: Slot, position: usize) -> Result<(), ArrowError> {
        let i = self.check_component(slot.component)?;
        for l in &slot.letters {
            if l.generator == 0 || l.generator > self.rank {
                return Err(WordError::GeneratorOutOfRange { generator: l.generator, rank: self.rank }.into());
            }
            if l.conjugator.rank() != self.rank {
                return Err(WordError::RankMismatch(l.conjugator.rank(), self.rank).into());
            }
        }
        let list = &mut self.slots[i - 1];
        if position > list.len() {
            return Err(ArrowError::SlotPosition { position, len: list.len() });
        }
        list.insert(position, slot);
        Ok(())
    }

    fn check_component(&self, i: usize) -> Result<usize, ArrowError> {
        if i == 0 || i > self.rank {
            return Err(ArrowError::ComponentOutOfRange(i));
        }
        Ok(i)
    }

    /// Product of the slot words of component `i`.
    pub fn component_word(&self, i: usize) -> Result<Word, ArrowError> {
        let mut w = Word::identity(self.rank);
        for s in self.slots(self.check_component(i)?) {
            w = w.multiply(&s.word(self.rank)?)?;
        }
        Ok(w)
    }
}

/// Each written-out letter `(j, ε)` on component `i` becomes a crossing with
/// its Over on the tail zone of `j` and its Under on the head zone of `i`.
pub fn surgery(p: &ArrowPresentation) -> StringLinkCode {
    let n = p.rank;
    let mut tails: Vec<Vec<Passage>> = vec![Vec::new(); n];
    let mut heads: Vec<Vec<Passage>> = vec![Vec::new(); n];
    let mut id = 0u32;
    for (i, slots) in p.slots.iter().enumerate() {
        for slot in slots {
            for (j, sign) in slot.raw_letters() {
                id += 1;
                tails[j - 1].push(Passage::over(id, sign));
                heads[i].push(Passage::under(id, sign));
            }
        }
    }
    let components = tails
        .into_iter()
        .zip(heads)
        .map(|(mut t, h)| {
            t.extend(h);
            t
        })
        .collect();
    StringLinkCode::new(components).expect("surgery produces a valid code")
}

/// A sorted string link whose `i`-th longitude is `α_i^{-e_i} w_i`, with
/// `e_i` the exponent sum of `α_i` in `w_i`.
pub fn realize_sorted(words: &[Word]) -> Result<StringLinkCode, ArrowError> {
    Ok(surgery(&ArrowPresentation::from_words(words)?))
}

/// Inserts the word of a self tree on component `i` as a new slot.
pub fn insert_self_tree(
    p: &ArrowPresentation,
    i: usize,
    tree: &CommTree,
    position: usize,
) -> Result<ArrowPresentation, ArrowError> {
    p.check_component(i)?;
    if let Some(&found) = tree.leaf_generators().iter().find(|&&g| g != i) {
        return Err(ArrowError::LeafLabel { component: i, found });
    }
    let mut out = p.clone();
    out.insert_slot(Slot::from_word(i, &tree_word(tree, p.rank)?), position)?;
    Ok(out)
}

/// Parses `i: WORD` lines, numbered `1..n`, with `/` also separating lines;
/// the rank is the line count.
pub fn parse_realizer(text: &str) -> Result<Vec<Word>, ArrowError> {
    let mut entries = Vec::new();
    for (idx, line) in text.split(['\n', '/']).enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let syntax = |message: String| ArrowError::Syntax { line: idx + 1, message };
        let (num, body) = line.split_once(':').ok_or_else(|| syntax(format!("missing `:` in `{}`", line.trim())))?;
        let num: usize = num.trim().parse().map_err(|_| syntax(format!("bad component number `{}`", num.trim())))?;
        if num != entries.len() + 1 {
            return Err(syntax(format!("found component {num} where {} was expected", entries.len() + 1)));
        }
        entries.push((idx + 1, body.to_string()));
    }
    let n = entries.len();
    entries
        .into_iter()
        .map(|(line, body)| {
            Word::parse(n, &body).map_err(|e| ArrowError::Syntax { line, message: e.to_string() })
        })
        .collect()
}

pub fn write_realizer(words: &[Word]) -> String {
    words.iter().enumerate().map(|(i, w)| format!("{}: {w}\n", i + 1)).collect()
}

impl fmt::Display for ArrowPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, slots) in self.slots.iter().enumerate() {
            write!(f, "{}:", i + 1)?;
            for s in slots {
                match s.word(self.rank) {
                    Ok(w) => write!(f, " [{w}]")?,
                    Err(_) => write!(f, " [?]")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magnus::{expand, TruncationPolicy};

    fn w(rank: usize, s: &str) -> Word {
        Word::parse(rank, s).unwrap()
    }

    #[test]
    fn tree_words() {
        assert_eq!(tree_word(&CommTree::leaf(1), 5).unwrap(), w(5, "a1"));
        assert_eq!(tree_word(&CommTree::leaf(1).twisted(), 5).unwrap(), w(5, "A1"));

        let (a, b, d, e) = (CommTree::leaf(1), CommTree::leaf(2), CommTree::leaf(4), CommTree::leaf(5));
        let gen = |g| w(5, &format!("a{g}"));
        let plain = CommTree::node(CommTree::node(a.clone(), b.clone()), CommTree::node(d.clone(), e.clone()));
        let ab = gen(1).commutator(&gen(2)).unwrap();
        let de = gen(4).commutator(&gen(5)).unwrap();
        assert_eq!(tree_word(&plain, 5).unwrap(), ab.commutator(&de).unwrap());

        let conj = CommTree::node(
            CommTree::node(a.conjugated_by(w(5, "a2")), b.conjugated_by(w(5, "A3"))),
            CommTree::node(d.conjugated_by(w(5, "a5 a3")), e),
        );
        let l = gen(1).conjugate(&gen(2)).unwrap().commutator(&gen(2).conjugate(&w(5, "A3")).unwrap()).unwrap();
        let r = gen(4).conjugate(&w(5, "a5 a3")).unwrap().commutator(&gen(5)).unwrap();
        assert_eq!(tree_word(&conj, 5).unwrap(), l.commutator(&r).unwrap());

        let twisted = CommTree::node(CommTree::leaf(1), CommTree::leaf(2)).twisted();
        assert_eq!(tree_word(&twisted, 2).unwrap(), w(2, "a1 A2 A1 a2").invert());
    }

    #[test]
    fn linear_tree_is_linear_commutator() {
        let t = CommTree::linear(&[1, 2, 1, 3]).unwrap();
        assert_eq!(t.degree(), 4);
        let gens: Vec<Word> = [1, 2, 1, 3].iter().map(|&g| Word::generator(3, g).unwrap()).collect();
        assert_eq!(tree_word(&t, 3).unwrap(), crate::words::linear_commutator(&gens).unwrap());
        assert!(CommTree::linear(&[]).is_none());
    }

    #[test]
    fn letter_expansion() {
        let slot = Slot {
            component: 1,
            letters: vec![SlotLetter { generator: 2, sign: Sign::Plus, conjugator: w(3, "a3") }],
        };
        assert_eq!(
            expand_letters(&slot, 3).unwrap(),
            vec![(3, Sign::Minus), (2, Sign::Plus), (3, Sign::Plus)]
        );
        let c = Slot::from_word(1, &w(3, "a2").commutator(&w(3, "a3")).unwrap());
        assert_eq!(
            expand_letters(&c, 3).unwrap(),
            vec![(2, Sign::Plus), (3, Sign::Minus), (2, Sign::Minus), (3, Sign::Plus)]
        );
        assert!(expand_letters(&Slot::from_letters(1, 3, []), 3).unwrap().is_empty());
    }

    #[test]
    fn surgery_examples() {
        assert_eq!(surgery(&ArrowPresentation::empty(3)), StringLinkCode::trivial(3));
        let one = ArrowPresentation::from_words(&[w(2, "a2"), w(2, "")]).unwrap();
        assert_eq!(surgery(&one), "1: U1+ / 2: O1+".parse().unwrap());

        let comm = w(3, "a2").commutator(&w(3, "a3")).unwrap();
        let code = realize_sorted(&[comm.clone(), w(3, ""), w(3, "")]).unwrap();
        assert_eq!(code.crossing_count(), 4);
        let p = TruncationPolicy::total_degree(3, 4);
        let l = code.longitude_series(4).unwrap();
        assert_eq!(l[0], expand(&comm, &p).unwrap());
    }

    #[test]
    fn realizer_carries_framing_prefix() {
        let w1 = w(2, "a1 a2 a1");
        let code = realize_sorted(&[w1.clone(), w(2, "A1")]).unwrap();
        let p = TruncationPolicy::total_degree(2, 5);
        let l = code.longitude_series(5).unwrap();
        let want1 = Word::power_of(2, 1, -2).unwrap().multiply(&w1).unwrap();
        assert_eq!(l[0], expand(&want1, &p).unwrap());
        assert_eq!(l[1], expand(&w(2, "A1"), &p).unwrap());
    }

    #[test]
    fn cancelling_pair_is_invisible() {
        let base = [w(3, "a2 A3"), w(3, "a3 a1"), w(3, "")];
        let mut p = ArrowPresentation::from_words(&base).unwrap();
        let before = surgery(&p).longitude_series(4).unwrap();
        p.push_slot(Slot::from_letters(1, 3, [(3, Sign::Plus), (3, Sign::Minus)])).unwrap();
        let code = surgery(&p);
        assert_eq!(code.crossing_count(), 6);
        assert_eq!(code.longitude_series(4).unwrap(), before);
    }

    #[test]
    fn self_tree_insertion() {
        let p = ArrowPresentation::empty(2);
        let t = CommTree::node(CommTree::leaf(1).conjugated_by(w(2, "a2")), CommTree::leaf(1));
        let q = insert_self_tree(&p, 1, &t, 0).unwrap();
        assert_eq!(q.slots(1).len(), 1);
        assert_eq!(q.component_word(1).unwrap(), tree_word(&t, 2).unwrap());
        assert_eq!(
            insert_self_tree(&p, 1, &CommTree::leaf(2), 0),
            Err(ArrowError::LeafLabel { component: 1, found: 2 })
        );
        assert!(matches!(insert_self_tree(&p, 1, &t, 3), Err(ArrowError::SlotPosition { .. })));
    }

    #[test]
    fn realizer_file_round_trip() {
        let words = parse_realizer("1: a2 A3\n2: -\n3: a1 a2 A1 A2\n").unwrap();
        assert_eq!(words.len(), 3);
        assert!(words[1].is_identity());
        assert_eq!(parse_realizer(&write_realizer(&words)).unwrap(), words);
        assert_eq!(parse_realizer("1: a2 A3 / 2: - / 3: a1 a2 A1 A2").unwrap(), words);
        assert!(matches!(parse_realizer("1: a4"), Err(ArrowError::Syntax { line: 1, .. })));
        assert!(matches!(parse_realizer("2: a1"), Err(ArrowError::Syntax { .. })));
        assert!(matches!(parse_realizer("1 a1"), Err(ArrowError::Syntax { .. })));
    }
}
