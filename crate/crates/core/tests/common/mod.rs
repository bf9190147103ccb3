#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use welded_milnor::arrows::CommTree;
use welded_milnor::gauss::{applicable_moves, Move, Passage, Site, StringLinkCode};
use welded_milnor::{Sign, Word};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sign(rng: &mut ChaCha8Rng) -> Sign {
    if rng.gen() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Reduced word of length at most `max_len`.
pub fn word(rng: &mut ChaCha8Rng, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let letters: Vec<(usize, Sign)> = (0..len).map(|_| (rng.gen_range(1..=rank), sign(rng))).collect();
    Word::from_letters(rank, &letters).unwrap()
}

/// A product of one or two commutators of short words, at most `max_len`
/// letters long and with every exponent sum zero.
pub fn commutator_word(rng: &mut ChaCha8Rng, rank: usize, max_len: usize) -> Word {
    loop {
        let mut w = Word::identity(rank);
        for _ in 0..rng.gen_range(1..=2) {
            let u = word(rng, rank, 3);
            let v = word(rng, rank, 3);
            w = w.multiply(&u.commutator(&v).unwrap()).unwrap();
        }
        if w.len() <= max_len {
            return w;
        }
    }
}

/// Random welded string link code: each crossing joins random components at
/// random positions.
pub fn code(rng: &mut ChaCha8Rng, n: usize, max_crossings: usize) -> StringLinkCode {
    let mut comps: Vec<Vec<Passage>> = vec![Vec::new(); n];
    for id in 1..=rng.gen_range(0..=max_crossings) as u32 {
        let s = sign(rng);
        let o = rng.gen_range(0..n);
        let at = rng.gen_range(0..=comps[o].len());
        comps[o].insert(at, Passage::over(id, s));
        let u = rng.gen_range(0..n);
        let at = rng.gen_range(0..=comps[u].len());
        comps[u].insert(at, Passage::under(id, s));
    }
    StringLinkCode::new(comps).unwrap()
}

fn gap(rng: &mut ChaCha8Rng, c: &StringLinkCode) -> Site {
    let comp = rng.gen_range(1..=c.component_count());
    Site::new(comp, rng.gen_range(0..=c.components()[comp - 1].len()))
}

/// An applicable R1, R2 or OC move, inserting or deleting.
pub fn welded_move(rng: &mut ChaCha8Rng, c: &StringLinkCode) -> Move {
    let deletions = applicable_moves(c);
    match rng.gen_range(0..3) {
        0 if !deletions.is_empty() => *deletions.choose(rng).unwrap(),
        1 => Move::R1Insert { at: gap(rng, c), sign: sign(rng), over_first: rng.gen() },
        _ => Move::R2Insert { over: gap(rng, c), under: gap(rng, c), sign: sign(rng), reversed: rng.gen() },
    }
}

/// A random tree of the given degree with every leaf on `generator`,
/// random twists and short random leaf conjugators.
pub fn self_tree(rng: &mut ChaCha8Rng, generator: usize, rank: usize, degree: usize) -> CommTree {
    let mut t = if degree == 1 {
        let mut leaf = CommTree::leaf(generator);
        if rng.gen_bool(0.5) {
            leaf = leaf.conjugated_by(word(rng, rank, 2));
        }
        leaf
    } else {
        let left = rng.gen_range(1..degree);
        CommTree::node(self_tree(rng, generator, rank, left), self_tree(rng, generator, rank, degree - left))
    };
    if rng.gen_bool(0.3) {
        t = t.twisted();
    }
    t
}
