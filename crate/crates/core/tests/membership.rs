//! `J^r` membership through series caps, against concrete quotient groups of
//! `F₂ = ⟨a, b⟩`:
//!
//! * `F/J_1^1 ≅ Z`, the exponent sum of `b`;
//! * `F/J_1^2 ≅ Z[t^±]/(t−1)³ ⋊ Z`, since `F/[N_a,N_a]` is `Z ≀ Z` and the
//!   image of `Γ₃N_b` there is the ideal `(t−1)³`;
//! * `F/J^1` is the Heisenberg group.

use proptest::prelude::*;
use welded_milnor::magnus::in_jr;
use welded_milnor::{Sign, Word};

fn all_words(max_len: usize) -> Vec<Word> {
    let letters = [(1, Sign::Plus), (1, Sign::Minus), (2, Sign::Plus), (2, Sign::Minus)];
    let mut out = vec![Word::identity(2)];
    let mut frontier = vec![Word::identity(2)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &(g, s) in &letters {
                let x = w.multiply(&Word::power_of(2, g, s.value()).unwrap()).unwrap();
                if x.len() == w.len() + 1 {
                    next.push(x);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn exponent_oracle(w: &Word, other: usize) -> bool {
    w.exponent_sum(other) == 0
}

fn heisenberg_oracle(w: &Word) -> bool {
    let (mut x, mut y, mut z) = (0i64, 0i64, 0i64);
    for (g, s) in w.letters() {
        let e = s.value();
        if g == 1 {
            x += e;
        } else {
            z += x * e;
            y += e;
        }
    }
    (x, y, z) == (0, 0, 0)
}

/// `(p, m)` in `Z[s]/s³ ⋊ Z` with `t = 1 + s`; `light` generates the base.
fn metabelian_oracle(w: &Word, light: usize) -> bool {
    let mut p = [0i64; 3];
    let mut m = 0i64;
    for (g, s) in w.letters() {
        let e = s.value();
        if g == light {
            // p += t^m · e
            let c = [1, m, m * (m - 1) / 2];
            for d in 0..3 {
                p[d] += c[d] * e;
            }
        } else {
            m += e;
        }
    }
    p == [0, 0, 0] && m == 0
}

fn check_all(w: &Word) {
    assert_eq!(in_jr(w, &[1, 2]).unwrap(), exponent_oracle(w, 2), "J_1^1 {w}");
    assert_eq!(in_jr(w, &[2, 1]).unwrap(), exponent_oracle(w, 1), "J_2^1 {w}");
    assert_eq!(in_jr(w, &[2, 3]).unwrap(), metabelian_oracle(w, 1), "J_1^2 {w}");
    assert_eq!(in_jr(w, &[3, 2]).unwrap(), metabelian_oracle(w, 2), "J_2^2 {w}");
    assert_eq!(in_jr(w, &[2, 2]).unwrap(), heisenberg_oracle(w), "J^1 {w}");
}

#[test]
fn exhaustive_short_words() {
    let words = all_words(8);
    assert_eq!(words.len(), 1 + 4 * (3usize.pow(8) - 1) / 2);
    let mut members = [0usize; 3];
    for w in &words {
        check_all(w);
        members[0] += in_jr(w, &[2, 3]).unwrap() as usize;
        members[1] += in_jr(w, &[2, 2]).unwrap() as usize;
        members[2] += in_jr(w, &[1, 2]).unwrap() as usize;
    }
    // nontrivial members exist beyond the identity
    assert!(members.iter().all(|&c| c > 1), "{members:?}");
}

#[test]
fn known_members() {
    let w = |s: &str| Word::parse(2, s).unwrap();
    let a = w("a1");
    let b = w("a2");
    // [a, a^b] ∈ Γ₂N_a
    let x = a.commutator(&a.conjugate(&b).unwrap()).unwrap();
    assert!(in_jr(&x, &[2, 3]).unwrap());
    assert!(in_jr(&x, &[2, 2]).unwrap());
    // [b, b^a] ∈ Γ₂N_b \ Γ₃N_b
    let bb = b.commutator(&b.conjugate(&a).unwrap()).unwrap();
    assert!(!in_jr(&bb, &[2, 3]).unwrap());
    assert!(in_jr(&b.commutator(&bb).unwrap(), &[2, 3]).unwrap());
}

proptest! {
    #[test]
    fn longer_random_words(letters in prop::collection::vec((1usize..=2, any::<bool>()), 0..18)) {
        let ls: Vec<(usize, Sign)> = letters.iter().map(|&(g, p)| (g, if p { Sign::Plus } else { Sign::Minus })).collect();
        check_all(&Word::from_letters(2, &ls).unwrap());
    }

    #[test]
    fn commutators_of_random_words(u in prop::collection::vec((1usize..=2, any::<bool>()), 0..6),
                                   v in prop::collection::vec((1usize..=2, any::<bool>()), 0..6)) {
        let mk = |xs: &[(usize, bool)]| {
            let ls: Vec<(usize, Sign)> = xs.iter().map(|&(g, p)| (g, if p { Sign::Plus } else { Sign::Minus })).collect();
            Word::from_letters(2, &ls).unwrap()
        };
        check_all(&mk(&u).commutator(&mk(&v)).unwrap());
    }
}
