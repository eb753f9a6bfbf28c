//! Pseudo-2-generated words: recognition, the α·ρ·ŵ·β rearrangement and the
//! extended τ-move.
//!
//! Take two generators a, b with finite exponent m > 2 and write P for the
//! four letters over {a, b}. A word w starting and ending in P is *pseudo
//! 2-generated* (P2G) when every letter outside P can escape to one side by
//! commutations: split w = w_p · w_q · w_s where w_p stops just before the
//! first P-letter essentially different from the first letter and w_s is the
//! largest suffix with no P-letter essentially different from the last
//! letter. Then w is P2G iff every letter of w_p commutes with the first
//! letter, every non-P letter of w_q commutes with both a and b, and every
//! letter of w_s commutes with the last letter.
//!
//! A P2G word is equivalent to α·ρ·ŵ·β where ŵ keeps exactly the P-letters
//! and the internal letters are distributed by the rules implemented in
//! [`recognize`]. When ŵ is critical the word admits the extended move
//! τ(w) = α·ρ·τ(ŵ)·β, which *produces* the letter l[τ(ŵ)]; produced letters
//! are the handles the rightward reduction machinery chains on.

use thiserror::Error;

use crate::dihedral::{critical_decompose, CriticalDecomposition, DihedralContext};
use crate::presentation::{Exponent, Gen, Presentation};
use crate::words::{Letter, Word};

/// Destination of a letter in the α·ρ1·ρ2·ŵ·β rearrangement.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LetterBlock {
    Alpha,
    Rho1,
    Rho2,
    Hat,
    Beta,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum P2gError {
    #[error("word is not pseudo-2-generated critical")]
    NotCritical,
}

/// A P2G word taken apart. `w_p = w[..wp_end]`, `w_q = w[wp_end..ws_start]`,
/// `w_s = w[ws_start..]`; `position_map[i]` records where letter `i` lands.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct P2gDecomposition {
    pub a: Gen,
    pub b: Gen,
    pub m: u32,
    pub wp_end: usize,
    pub ws_start: usize,
    pub alpha: Word,
    pub rho1: Word,
    pub rho2: Word,
    pub hat: Word,
    pub beta: Word,
    pub position_map: Vec<LetterBlock>,
}

impl P2gDecomposition {
    pub fn rho(&self) -> Word {
        self.rho1.concat(&self.rho2)
    }

    /// The equivalent rearrangement α·ρ·ŵ·β.
    pub fn rearranged(&self) -> Word {
        self.alpha
            .concat(&self.rho())
            .concat(&self.hat)
            .concat(&self.beta)
    }

    pub fn context(&self) -> DihedralContext {
        DihedralContext::from_parts(self.a, self.b, self.m).expect("validated at construction")
    }
}

/// The pseudo-generator pair of a word, when it has one: the name of the
/// first letter together with the name of the first later letter that does
/// not commute with it, provided their exponent is finite and above 2.
pub fn pseudo_generators(p: &Presentation, w: &Word) -> Option<(Gen, Gen)> {
    let a = w.first()?.name();
    let b = w.iter().skip(1).find(|l| !p.commutes(a, l.name()))?.name();
    match p.exponent(a, b) {
        Exponent::Finite(m) if m > 2 => Some((a, b)),
        _ => None,
    }
}

/// Tests the P2G conditions for the given pseudo-generator pair and builds
/// the rearrangement. The split points are forced by the definition, so no
/// search happens here.
pub fn recognize(p: &Presentation, w: &Word, a: Gen, b: Gen) -> Option<P2gDecomposition> {
    let m = match p.exponent(a, b) {
        Exponent::Finite(m) if m > 2 => m,
        _ => return None,
    };
    let first = w.first()?;
    let last = w.last()?;
    let in_p = |l: Letter| l.name() == a || l.name() == b;
    if !in_p(first) || !in_p(last) {
        return None;
    }

    let other = |g: Gen| if g == a { b } else { a };
    let other_f = other(first.name());
    let other_l = other(last.name());
    // Both pseudo-generators must actually appear for the three-way split to
    // make sense.
    let wp_end = w.iter().position(|l| l.name() == other_f)?;
    let last_other = w
        .letters()
        .iter()
        .rposition(|l| l.name() == other_l)?;
    // The sharp definitions of w_p and w_s can overlap when all letters of
    // one name precede all of the other; keep the tiling by truncating w_s.
    // Critical words never hit this case.
    let ws_start = (last_other + 1).max(wp_end);

    let f_name = first.name();
    let l_name = last.name();
    for i in 0..wp_end {
        if !p.commutes(w.letter(i).name(), f_name) {
            return None;
        }
    }
    for i in wp_end..ws_start {
        let g = w.letter(i).name();
        if g != a && g != b && !(p.commutes(g, a) && p.commutes(g, b)) {
            return None;
        }
    }
    for i in ws_start..w.len() {
        if !p.commutes(w.letter(i).name(), l_name) {
            return None;
        }
    }

    let mut position_map = Vec::with_capacity(w.len());
    let mut beta_names: Vec<Gen> = Vec::new();
    for (i, l) in w.iter().enumerate() {
        let block = if in_p(l) {
            LetterBlock::Hat
        } else if i < wp_end {
            LetterBlock::Alpha
        } else if i < ws_start {
            LetterBlock::Rho1
        } else {
            // A trailing internal letter joins ρ2 iff it commutes with both
            // pseudo-generators and with every earlier trailing internal
            // letter left behind in β.
            let g = l.name();
            let escapes = p.commutes(g, a)
                && p.commutes(g, b)
                && beta_names.iter().all(|&h| p.commutes(g, h));
            if escapes {
                LetterBlock::Rho2
            } else {
                beta_names.push(g);
                LetterBlock::Beta
            }
        };
        position_map.push(block);
    }

    let collect = |block: LetterBlock| -> Word {
        w.iter()
            .zip(&position_map)
            .filter(|(_, &b)| b == block)
            .map(|(l, _)| l)
            .collect()
    };

    Some(P2gDecomposition {
        a,
        b,
        m,
        wp_end,
        ws_start,
        alpha: collect(LetterBlock::Alpha),
        rho1: collect(LetterBlock::Rho1),
        rho2: collect(LetterBlock::Rho2),
        hat: collect(LetterBlock::Hat),
        beta: collect(LetterBlock::Beta),
        position_map,
    })
}

/// Determines the pseudo-generators, recognizes the P2G split and tests the
/// core ŵ for criticality.
pub fn is_p2g_critical(
    p: &Presentation,
    w: &Word,
) -> Option<(P2gDecomposition, CriticalDecomposition)> {
    let (a, b) = pseudo_generators(p, w)?;
    let d = recognize(p, w, a, b)?;
    let c = critical_decompose(&d.context(), &d.hat)?;
    Some((d, c))
}

/// The extended τ-move α·ρ·τ(ŵ)·β on a P2G critical word, together with the
/// produced letter l[τ(ŵ)].
pub fn tau_move(p: &Presentation, w: &Word) -> Result<(Word, Letter), P2gError> {
    let (d, c) = is_p2g_critical(p, w).ok_or(P2gError::NotCritical)?;
    let tau_hat = c.tau(&d.context());
    let produced = tau_hat.last().expect("critical words are nonempty");
    let out = d
        .alpha
        .concat(&d.rho())
        .concat(&tau_hat)
        .concat(&d.beta);
    Ok((out, produced))
}
