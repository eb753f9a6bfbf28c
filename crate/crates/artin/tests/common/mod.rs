//! Shared generators for the integration suites.
#![allow(dead_code)]

use artin::dihedral::{self, DihedralContext};
use artin::presentation::Presentation;
use artin::words::{Letter, Word};

use rand::rngs::StdRng;
use rand::Rng;

/// A random 3-free presentation on 2..=4 generators with at least one
/// finite exponent above 2.
pub fn random_presentation(rng: &mut StdRng) -> Presentation {
    loop {
        let n = rng.gen_range(2..=4usize);
        let names = ["a", "b", "c", "d"];
        let mut text = format!("generators {}", names[..n].join(" "));
        let mut finite_above_two = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let m = [2u32, 4, 5, 6, 0][rng.gen_range(0..5)];
                if m > 0 {
                    text.push_str(&format!("\nm {} {} {}", names[i], names[j], m));
                    if m > 2 {
                        finite_above_two = true;
                    }
                }
            }
        }
        if finite_above_two {
            return Presentation::parse(&text).unwrap();
        }
    }
}

pub fn random_reduced_word(p: &Presentation, rng: &mut StdRng, max_len: usize) -> Word {
    let gens: Vec<_> = p.generators().collect();
    let len = rng.gen_range(0..=max_len);
    let letters: Vec<Letter> = (0..len)
        .map(|_| Letter::new(gens[rng.gen_range(0..gens.len())], rng.gen()))
        .collect();
    Word::from_letters(letters).free_reduce()
}

pub fn random_letter(p: &Presentation, rng: &mut StdRng) -> Letter {
    let gens: Vec<_> = p.generators().collect();
    Letter::new(gens[rng.gen_range(0..gens.len())], rng.gen())
}

/// A word biased toward admitting sequences: a random critical word over a
/// finite pair, followed by the inverse of its produced letter, with a few
/// extra letters sprinkled in. Falls back to a plain random word.
pub fn provocative_word(p: &Presentation, rng: &mut StdRng) -> Word {
    let pairs: Vec<_> = p
        .finite_pairs()
        .into_iter()
        .filter(|&(_, _, m)| m >= 4)
        .collect();
    if pairs.is_empty() {
        return random_reduced_word(p, rng, 10);
    }
    let (x, y, m) = pairs[rng.gen_range(0..pairs.len())];
    let ctx = DihedralContext::from_parts(x, y, m).unwrap();
    let base = [
        Letter::positive(x),
        Letter::negative(x),
        Letter::positive(y),
        Letter::negative(y),
    ];
    let gens: Vec<_> = p.generators().collect();
    for _ in 0..120 {
        let len = (m as usize + rng.gen_range(0..=2)).min(7);
        let candidate: Word = (0..len).map(|_| base[rng.gen_range(0..4)]).collect();
        let Some(d) = dihedral::critical_decompose(&ctx, &candidate) else {
            continue;
        };
        let produced = d.tau(&ctx).last().unwrap();
        let mut letters = candidate.letters().to_vec();
        letters.push(produced.inverse());
        for _ in 0..rng.gen_range(0..=2) {
            let l = Letter::new(gens[rng.gen_range(0..gens.len())], rng.gen());
            letters.insert(rng.gen_range(0..=letters.len()), l);
        }
        let w = Word::from_letters(letters).free_reduce();
        if !w.is_empty() && w.len() <= 10 {
            return w;
        }
    }
    random_reduced_word(p, rng, 10)
}

pub fn mixed_word(p: &Presentation, rng: &mut StdRng) -> Word {
    if rng.gen() {
        provocative_word(p, rng)
    } else {
        random_reduced_word(p, rng, 10)
    }
}
