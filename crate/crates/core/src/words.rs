//! Free-group words with the bracket conventions `[x,y] = x y⁻¹ x⁻¹ y` and
//! `x^y = y⁻¹ x y`.
//!
//! Words are always kept freely reduced and stored run-length compressed as
//! `(generator, multiplicity)` pairs with nonzero multiplicities and no two
//! adjacent runs on the same generator. Generators are numbered `1..=rank`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("generator {generator} outside rank {rank}")]
    GeneratorOutOfRange { generator: usize, rank: usize },
    #[error("linear commutator needs at least one entry")]
    EmptyCommutator,
    #[error("bad word token `{0}`")]
    BadToken(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Sign {
        if v < 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// A reduced element of the free group `F_rank`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    runs: Vec<(usize, i64)>,
}

impl Word {
    pub fn identity(rank: usize) -> Word {
        Word { rank, runs: Vec::new() }
    }

    /// `α_g^exp`.
    pub fn power_of(rank: usize, generator: usize, exp: i64) -> Result<Word, WordError> {
        check_generator(rank, generator)?;
        let mut w = Word::identity(rank);
        w.push_run(generator, exp);
        Ok(w)
    }

    pub fn generator(rank: usize, generator: usize) -> Result<Word, WordError> {
        Word::power_of(rank, generator, 1)
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters(rank: usize, letters: &[(usize, Sign)]) -> Result<Word, WordError> {
        let mut w = Word::identity(rank);
        for &(g, s) in letters {
            check_generator(rank, g)?;
            w.push_run(g, s.value());
        }
        Ok(w)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_identity(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn runs(&self) -> &[(usize, i64)] {
        &self.runs
    }

    /// Number of letters (sum of absolute run multiplicities).
    pub fn len(&self) -> usize {
        self.runs.iter().map(|&(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = (usize, Sign)> + '_ {
        self.runs.iter().flat_map(|&(g, e)| {
            std::iter::repeat_n((g, Sign::from_value(e)), e.unsigned_abs() as usize)
        })
    }

    fn push_run(&mut self, g: usize, e: i64) {
        if e == 0 {
            return;
        }
        if let Some(last) = self.runs.last_mut() {
            if last.0 == g {
                last.1 += e;
                if last.1 == 0 {
                    self.runs.pop();
                }
                return;
            }
        }
        self.runs.push((g, e));
    }

    fn same_rank(&self, other: &Word) -> Result<(), WordError> {
        if self.rank != other.rank {
            return Err(WordError::RankMismatch(self.rank, other.rank));
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Word) -> Result<Word, WordError> {
        self.same_rank(other)?;
        let mut out = self.clone();
        for &(g, e) in &other.runs {
            out.push_run(g, e);
        }
        Ok(out)
    }

    pub fn invert(&self) -> Word {
        Word {
            rank: self.rank,
            runs: self.runs.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.invert() } else { self.clone() };
        let mut out = Word::identity(self.rank);
        for _ in 0..e.unsigned_abs() {
            for &(g, m) in &base.runs {
                out.push_run(g, m);
            }
        }
        out
    }

    /// `x^y = ȳ x y`.
    pub fn conjugate(&self, by: &Word) -> Result<Word, WordError> {
        by.invert().multiply(self)?.multiply(by)
    }

    /// `[x,y] = x ȳ x̄ y`.
    pub fn commutator(&self, other: &Word) -> Result<Word, WordError> {
        self.multiply(&other.invert())?
            .multiply(&self.invert())?
            .multiply(other)
    }

    pub fn exponent_sum(&self, generator: usize) -> i64 {
        self.runs
            .iter()
            .filter(|&&(g, _)| g == generator)
            .map(|&(_, e)| e)
            .sum()
    }

    /// Parses `a1 A2 a1` style text; `-` or blank is the identity.
    pub fn parse(rank: usize, text: &str) -> Result<Word, WordError> {
        let mut w = Word::identity(rank);
        for tok in text.split_whitespace() {
            if tok == "-" {
                continue;
            }
            let (g, s) = parse_token(tok)?;
            check_generator(rank, g)?;
            w.push_run(g, s.value());
        }
        Ok(w)
    }

    /// Largest generator index mentioned in `text`, for rank inference.
    pub fn max_generator(text: &str) -> Result<usize, WordError> {
        let mut m = 0;
        for tok in text.split_whitespace() {
            if tok != "-" {
                m = m.max(parse_token(tok)?.0);
            }
        }
        Ok(m)
    }
}

fn parse_token(tok: &str) -> Result<(usize, Sign), WordError> {
    let bad = || WordError::BadToken(tok.to_string());
    let mut chars = tok.chars();
    let sign = match chars.next() {
        Some('a') => Sign::Plus,
        Some('A') => Sign::Minus,
        _ => return Err(bad()),
    };
    let rest = chars.as_str();
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let g: usize = rest.parse().map_err(|_| bad())?;
    if g == 0 {
        return Err(bad());
    }
    Ok((g, sign))
}

fn check_generator(rank: usize, generator: usize) -> Result<(), WordError> {
    if generator == 0 || generator > rank {
        return Err(WordError::GeneratorOutOfRange { generator, rank });
    }
    Ok(())
}

/// Right-nested `[x₁,[x₂,[…,[x_{k−1},x_k]…]]]`.
pub fn linear_commutator(entries: &[Word]) -> Result<Word, WordError> {
    let (last, init) = entries.split_last().ok_or(WordError::EmptyCommutator)?;
    let mut acc = last.clone();
    for x in init.iter().rev() {
        acc = x.commutator(&acc)?;
    }
    Ok(acc)
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return write!(f, "-");
        }
        let mut first = true;
        for (g, s) in self.letters() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            match s {
                Sign::Plus => write!(f, "a{g}")?,
                Sign::Minus => write!(f, "A{g}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word[{}]({self})", self.rank)
    }
}

/// The commutator identities (C0)–(C5) as `(lhs, rhs)` pairs of words that
/// must coincide in the free group.
pub mod identities {
    use super::{Word, WordError};

    type Pair = Result<(Word, Word), WordError>;

    fn c(x: &Word, y: &Word) -> Result<Word, WordError> {
        x.commutator(y)
    }

    /// `[a,b]⁻¹ = [b̄,ā]`
    pub fn inverse(a: &Word, b: &Word) -> Pair {
        Ok((c(a, b)?.invert(), c(&b.invert(), &a.invert())?))
    }

    /// `[a,b] = (b̄)^{ā} b`
    pub fn as_conjugate_left(a: &Word, b: &Word) -> Pair {
        Ok((c(a, b)?, b.invert().conjugate(&a.invert())?.multiply(b)?))
    }

    /// `[a,b] = a (ā)^b`
    pub fn as_conjugate_right(a: &Word, b: &Word) -> Pair {
        Ok((c(a, b)?, a.multiply(&a.invert().conjugate(b)?)?))
    }

    /// `[a,b]^c = [a^c, b^c]`
    pub fn conjugation(a: &Word, b: &Word, cc: &Word) -> Pair {
        Ok((c(a, b)?.conjugate(cc)?, c(&a.conjugate(cc)?, &b.conjugate(cc)?)?))
    }

    /// `[a,bc] = [a,c][a,b]^c`
    pub fn product_right(a: &Word, b: &Word, cc: &Word) -> Pair {
        let lhs = c(a, &b.multiply(cc)?)?;
        let rhs = c(a, cc)?.multiply(&c(a, b)?.conjugate(cc)?)?;
        Ok((lhs, rhs))
    }

    /// `[ab,c] = [b,c]^{ā}[a,c]`
    pub fn product_left(a: &Word, b: &Word, cc: &Word) -> Pair {
        let lhs = c(&a.multiply(b)?, cc)?;
        let rhs = c(b, cc)?.conjugate(&a.invert())?.multiply(&c(a, cc)?)?;
        Ok((lhs, rhs))
    }

    /// `[[a,b],c] = [ā,[c̄,b̄]]^{bā} [b̄,[ā,c̄]]^{cā}`
    pub fn nested(a: &Word, b: &Word, cc: &Word) -> Pair {
        let (ai, bi, ci) = (a.invert(), b.invert(), cc.invert());
        let lhs = c(&c(a, b)?, cc)?;
        let t1 = c(&ai, &c(&ci, &bi)?)?.conjugate(&b.multiply(&ai)?)?;
        let t2 = c(&bi, &c(&ai, &ci)?)?.conjugate(&cc.multiply(&ai)?)?;
        Ok((lhs, t1.multiply(&t2)?))
    }

    /// `[a,bc] = [a,c][a,b][[b̄,ā],c]`
    pub fn expanded_right(a: &Word, b: &Word, cc: &Word) -> Pair {
        let lhs = c(a, &b.multiply(cc)?)?;
        let rhs = c(a, cc)?
            .multiply(&c(a, b)?)?
            .multiply(&c(&c(&b.invert(), &a.invert())?, cc)?)?;
        Ok((lhs, rhs))
    }

    /// `[ab,c] = [a,[c̄,b̄]][b,c][a,c]`
    pub fn expanded_left(a: &Word, b: &Word, cc: &Word) -> Pair {
        let lhs = c(&a.multiply(b)?, cc)?;
        let rhs = c(a, &c(&cc.invert(), &b.invert())?)?
            .multiply(&c(b, cc)?)?
            .multiply(&c(a, cc)?)?;
        Ok((lhs, rhs))
    }

    /// Every identity instantiated at `(a, b, c)`, labelled.
    pub fn all(a: &Word, b: &Word, cc: &Word) -> Result<Vec<(&'static str, Word, Word)>, WordError> {
        let mut out = Vec::new();
        let mut push = |name, p: (Word, Word)| out.push((name, p.0, p.1));
        push("C0", inverse(a, b)?);
        push("C1a", as_conjugate_left(a, b)?);
        push("C1b", as_conjugate_right(a, b)?);
        push("C2", conjugation(a, b, cc)?);
        push("C3a", product_right(a, b, cc)?);
        push("C3b", product_left(a, b, cc)?);
        push("C4", nested(a, b, cc)?);
        push("C5a", expanded_right(a, b, cc)?);
        push("C5b", expanded_left(a, b, cc)?);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(rank: usize, s: &str) -> Word {
        Word::parse(rank, s).unwrap()
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(w(2, "a1 A1 a2"), w(2, "a2"));
        assert!(w(2, "").is_identity());
        assert!(w(2, "A2 a2 a1 A1").is_identity());
    }

    #[test]
    fn product_and_inverse_examples() {
        let a1 = w(3, "a1");
        assert!(a1.multiply(&a1.invert()).unwrap().is_identity());
        assert_eq!(w(3, "a1 a2").invert(), w(3, "A2 A1"));
        assert_eq!(w(3, "a1 a2").multiply(&w(3, "A2 a3")).unwrap(), w(3, "a1 a3"));
        assert_eq!(
            w(2, "a1").multiply(&w(3, "a1")),
            Err(WordError::RankMismatch(2, 3))
        );
    }

    #[test]
    fn conjugate_and_commutator_conventions() {
        let (a1, a2) = (w(2, "a1"), w(2, "a2"));
        let e = Word::identity(2);
        assert_eq!(a1.conjugate(&a2).unwrap(), w(2, "A2 a1 a2"));
        assert_eq!(a1.conjugate(&e).unwrap(), a1);
        assert_eq!(a1.conjugate(&a1).unwrap(), a1);
        assert_eq!(a1.commutator(&a2).unwrap(), w(2, "a1 A2 A1 a2"));
        assert!(a1.commutator(&a1).unwrap().is_identity());
        assert!(a1.commutator(&e).unwrap().is_identity());
    }

    #[test]
    fn linear_commutator_shapes() {
        let g: Vec<Word> = (1..=3).map(|i| Word::generator(3, i).unwrap()).collect();
        assert_eq!(linear_commutator(&g[..1]).unwrap(), g[0]);
        assert_eq!(linear_commutator(&g[..2]).unwrap(), g[0].commutator(&g[1]).unwrap());
        assert_eq!(
            linear_commutator(&g).unwrap(),
            g[0].commutator(&g[1].commutator(&g[2]).unwrap()).unwrap()
        );
        assert_eq!(linear_commutator(&[]), Err(WordError::EmptyCommutator));
    }

    #[test]
    fn exponent_sums() {
        assert_eq!(w(2, "a1 a2 A1 A1").exponent_sum(1), -1);
        assert_eq!(w(2, "").exponent_sum(2), 0);
        let c = w(3, "a1 a3").commutator(&w(3, "a2 a2 A3")).unwrap();
        for g in 1..=3 {
            assert_eq!(c.exponent_sum(g), 0);
        }
    }

    #[test]
    fn parse_errors_and_display() {
        assert_eq!(Word::parse(2, "a1 b2"), Err(WordError::BadToken("b2".into())));
        assert!(matches!(
            Word::parse(2, "a3"),
            Err(WordError::GeneratorOutOfRange { generator: 3, rank: 2 })
        ));
        assert_eq!(w(3, "a1 a1 A3").to_string(), "a1 a1 A3");
        assert_eq!(Word::identity(1).to_string(), "-");
        assert_eq!(Word::max_generator("a1 A7 -").unwrap(), 7);
    }

    fn arb_word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec((1..=rank, prop::bool::ANY), 0..=max_len).prop_map(move |ls| {
            let letters: Vec<_> = ls
                .into_iter()
                .map(|(g, b)| (g, if b { Sign::Plus } else { Sign::Minus }))
                .collect();
            Word::from_letters(rank, &letters).unwrap()
        })
    }

    proptest! {
        #[test]
        fn identities_hold(a in arb_word(4, 8), b in arb_word(4, 8), c in arb_word(4, 8)) {
            for (name, lhs, rhs) in identities::all(&a, &b, &c).unwrap() {
                prop_assert_eq!(lhs, rhs, "{} failed", name);
            }
        }

        #[test]
        fn conjugation_is_a_right_action(x in arb_word(3, 6), y in arb_word(3, 6), z in arb_word(3, 6)) {
            let lhs = x.conjugate(&y.multiply(&z).unwrap()).unwrap();
            let rhs = x.conjugate(&y).unwrap().conjugate(&z).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn exponent_sum_is_additive(u in arb_word(3, 8), v in arb_word(3, 8), g in 1usize..=3) {
            let uv = u.multiply(&v).unwrap();
            prop_assert_eq!(uv.exponent_sum(g), u.exponent_sum(g) + v.exponent_sum(g));
        }

        #[test]
        fn reduction_is_idempotent(u in arb_word(3, 10)) {
            let letters: Vec<_> = u.letters().collect();
            prop_assert_eq!(Word::from_letters(3, &letters).unwrap(), u.clone());
            prop_assert!(u.multiply(&u.invert()).unwrap().is_identity());
            prop_assert_eq!(Word::parse(3, &u.to_string()).unwrap(), u);
        }
    }
}
