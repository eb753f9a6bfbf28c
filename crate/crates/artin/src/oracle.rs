//! Independent verifiers used by the test suites.
//!
//! The main tool is a bounded search over the rewrite ball of a word: the
//! words reachable by inserting or cancelling adjacent inverse pairs,
//! swapping adjacent commuting letters, and flipping contiguous alternating
//! factors of a finite-exponent pair to their relation partners. These moves
//! generate exactly the group congruence, so any word the ball reaches is a
//! true representative of the same element, and any shorter witness it
//! finds is a genuine counterexample to the reduction engine. That is the
//! point: a disagreement here is a bug in one of the two.
//!
//! None of this module consults the reduction machinery; it is kept
//! deliberately naive.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use thiserror::Error;

use crate::presentation::{Exponent, Gen, Presentation};
use crate::words::{Letter, Word};

#[derive(Clone, Copy, Debug)]
pub struct BallConfig {
    /// How far above the input length the search may climb.
    pub slack: u32,
    /// Cap on distinct words tracked.
    pub node_cap: usize,
}

impl Default for BallConfig {
    fn default() -> Self {
        BallConfig {
            slack: 2,
            node_cap: 200_000,
        }
    }
}

/// Cap on queued pair insertions; exceeding it marks the search truncated.
const DEFERRED_CAP: usize = 2_000_000;

impl BallConfig {
    pub fn with_slack(slack: u32) -> Self {
        BallConfig {
            slack,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct BallResult {
    pub min_len: usize,
    pub witness: Word,
    /// True iff the bounded ball was explored completely.
    pub exhausted: bool,
    pub explored: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("word uses more than two generator names")]
    NotTwoGenerated,
    #[error("the pair has no finite relation")]
    InfiniteExponent,
    #[error("presentation has an exponent above 2")]
    NotCommutationOnly,
}

/// Searches the rewrite ball of `w` for the shortest reachable word.
///
/// States are expanded shortest-first. Pair insertions are deferred behind
/// the cheap moves and tried in order of how long an alternating run they
/// complete, since an insertion only ever helps by enabling a relation flip.
/// Exploration order affects only speed, not the set of reachable words.
/// Equal-length factor rewrites derived from one relation L = R: for every
/// split L = u₁u₂, R = v₁v₂ with |v₁| + |u₁| = m, the words v₁⁻¹u₁ and
/// v₂u₂⁻¹ represent the same element and have length m. The two plain flips
/// L ↔ R and L⁻¹ ↔ R⁻¹ are the end splits.
fn relation_windows(p: &Presentation) -> Vec<(Vec<Letter>, Vec<Letter>)> {
    let mut out = Vec::new();
    for (g, h, m) in p.finite_pairs() {
        let m = m as usize;
        let alt = |first: Gen, second: Gen| -> Vec<Letter> {
            (0..m)
                .map(|i| Letter::positive(if i % 2 == 0 { first } else { second }))
                .collect()
        };
        let sides = [(alt(g, h), alt(h, g)), (alt(h, g), alt(g, h))];
        for (left, right) in &sides {
            for s in 0..=m {
                let mut a: Vec<Letter> =
                    right[..m - s].iter().rev().map(|l| l.inverse()).collect();
                a.extend_from_slice(&left[..s]);
                let mut b: Vec<Letter> = right[m - s..].to_vec();
                b.extend(left[s..].iter().rev().map(|l| l.inverse()));
                if a != b {
                    out.push((a.clone(), b.clone()));
                    out.push((b, a));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

pub fn bfs_min_length(p: &Presentation, w: &Word, cfg: &BallConfig) -> BallResult {
    let bound = w.len() + cfg.slack as usize;
    let pairs = p.finite_pairs();
    let windows = relation_windows(p);
    let mut ball = Ball {
        bound,
        node_cap: cfg.node_cap,
        ids: HashMap::new(),
        arena: Vec::new(),
        expanded: Vec::new(),
        primary: BinaryHeap::new(),
        truncated: false,
    };
    // (score, oldest-first, parent, position, letter)
    let mut deferred: BinaryHeap<(u32, Reverse<u64>, u32, u16, Letter)> = BinaryHeap::new();
    let mut seq: u64 = 0;
    let mut explored = 0usize;
    let mut best_id: u32 = 0;
    let mut best_len = w.len();

    ball.offer(w.clone());

    let mut rounds = 0usize;
    while best_len > 0 {
        rounds += 1;
        // Interleave a scored insertion now and then; otherwise drain the
        // cheap moves shortest-first.
        let take_deferred =
            ball.primary.is_empty() || (rounds.is_multiple_of(16) && !deferred.is_empty());
        let id = if take_deferred {
            match deferred.pop() {
                Some((_, _, parent, pos, letter)) => {
                    let parent_word = &ball.arena[parent as usize];
                    let mut letters = parent_word.letters().to_vec();
                    letters.insert(pos as usize, letter.inverse());
                    letters.insert(pos as usize, letter);
                    match ball.admit(Word::from_letters(letters)) {
                        Some(id) => id,
                        None => continue,
                    }
                }
                None => match ball.primary.pop() {
                    Some(Reverse((_, id))) => id,
                    None => break,
                },
            }
        } else {
            match ball.primary.pop() {
                Some(Reverse((_, id))) => id,
                None => break,
            }
        };

        if ball.expanded[id as usize] {
            continue;
        }
        ball.expanded[id as usize] = true;
        explored += 1;

        let cur = ball.arena[id as usize].clone();
        let letters = cur.letters();
        let len = cur.len();
        if len < best_len {
            best_len = len;
            best_id = id;
            if best_len == 0 {
                break;
            }
        }

        // Cancellations and commuting swaps.
        for i in 0..len.saturating_sub(1) {
            let (x, y) = (letters[i], letters[i + 1]);
            if x == y.inverse() {
                let mut next = letters.to_vec();
                next.drain(i..i + 2);
                ball.offer(Word::from_letters(next));
            }
            if !x.same_name(y) && p.commutes(x.name(), y.name()) {
                let mut next = letters.to_vec();
                next.swap(i, i + 1);
                ball.offer(Word::from_letters(next));
            }
        }

        // Relation windows: equal-length factor rewrites from one relation
        // (plain flips included as the end splits).
        for (pattern, replacement) in &windows {
            if pattern.len() > len {
                continue;
            }
            for i in 0..=len - pattern.len() {
                if &letters[i..i + pattern.len()] == pattern.as_slice() {
                    let mut next = letters.to_vec();
                    next[i..i + pattern.len()].copy_from_slice(replacement);
                    ball.offer(Word::from_letters(next));
                }
            }
        }

        // Pair insertions, deferred with a usefulness score. An insertion
        // that completes a relation window is additionally expanded straight
        // through the flip (insert and flip are both plain moves; fusing
        // them only changes the exploration order, not the reachable set).
        if len + 2 <= bound {
            for pos in 0..=len {
                for gen in p.generators() {
                    for letter in [Letter::positive(gen), Letter::negative(gen)] {
                        if deferred.len() < DEFERRED_CAP {
                            let score = insertion_score(letters, pos, letter);
                            seq += 1;
                            deferred.push((score, Reverse(seq), id, pos as u16, letter));
                        } else {
                            ball.truncated = true;
                        }

                        let mut inserted: Vec<Letter> = Vec::with_capacity(len + 2);
                        inserted.extend_from_slice(&letters[..pos]);
                        inserted.push(letter);
                        inserted.push(letter.inverse());
                        inserted.extend_from_slice(&letters[pos..]);
                        for &(g, h, m) in &pairs {
                            let m = m as usize;
                            if m > inserted.len() || (letter.name() != g && letter.name() != h) {
                                continue;
                            }
                            let lo = pos.saturating_sub(m - 1);
                            let hi = (pos + 1).min(inserted.len() - m);
                            for i in lo..=hi {
                                let window = &inserted[i..i + m];
                                if is_alternating_over(window, g, h) {
                                    let mut next = inserted.clone();
                                    for l in &mut next[i..i + m] {
                                        let swapped = if l.name() == g { h } else { g };
                                        *l = Letter::new(swapped, l.is_positive());
                                    }
                                    ball.offer(Word::from_letters(next));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    let exhausted = !ball.truncated && ball.primary.is_empty() && deferred.is_empty();
    BallResult {
        min_len: best_len,
        witness: ball.arena[best_id as usize].clone(),
        exhausted,
        explored,
    }
}

struct Ball {
    bound: usize,
    node_cap: usize,
    ids: HashMap<Word, u32>,
    arena: Vec<Word>,
    expanded: Vec<bool>,
    primary: BinaryHeap<Reverse<(usize, u32)>>,
    truncated: bool,
}

impl Ball {
    /// Registers a word, returning its id unless the cap suppressed it.
    fn admit(&mut self, word: Word) -> Option<u32> {
        if let Some(&id) = self.ids.get(&word) {
            return Some(id);
        }
        if self.arena.len() >= self.node_cap {
            self.truncated = true;
            return None;
        }
        let id = self.arena.len() as u32;
        self.ids.insert(word.clone(), id);
        self.arena.push(word);
        self.expanded.push(false);
        Some(id)
    }

    /// Admits a word and its free reduction and queues whichever are new.
    fn offer(&mut self, word: Word) {
        let reduced = word.free_reduce();
        let both = if reduced == word {
            vec![word]
        } else {
            vec![word, reduced]
        };
        for cand in both {
            if cand.len() > self.bound {
                continue;
            }
            let len = cand.len();
            let known = self.ids.contains_key(&cand);
            if let Some(id) = self.admit(cand) {
                if !known {
                    self.primary.push(Reverse((len, id)));
                }
            }
        }
    }
}

fn is_alternating_over(window: &[Letter], g: Gen, h: Gen) -> bool {
    let positive = window[0].is_positive();
    window
        .iter()
        .all(|l| l.is_positive() == positive && (l.name() == g || l.name() == h))
        && window.windows(2).all(|w| !w[0].same_name(w[1]))
}

/// How long a same-sign alternating run would pass through a pair inserted
/// at `pos`; long runs mean the insertion is about to complete a relation
/// window.
fn insertion_score(letters: &[Letter], pos: usize, letter: Letter) -> u32 {
    let mut next: Vec<Letter> = Vec::with_capacity(letters.len() + 2);
    next.extend_from_slice(&letters[..pos]);
    next.push(letter);
    next.push(letter.inverse());
    next.extend_from_slice(&letters[pos..]);
    run_through(&next, pos).max(run_through(&next, pos + 1))
}

fn run_through(letters: &[Letter], at: usize) -> u32 {
    let sign = letters[at].is_positive();
    let ok = |i: usize, j: usize| -> bool {
        letters[j].is_positive() == sign && !letters[i].same_name(letters[j])
    };
    let mut lo = at;
    while lo > 0 && letters[lo - 1].is_positive() == sign && ok(lo, lo - 1) {
        lo -= 1;
    }
    let mut hi = at;
    while hi + 1 < letters.len() && ok(hi, hi + 1) {
        hi += 1;
    }
    (hi - lo + 1) as u32
}

/// Group equivalence via the ball of `u·v⁻¹`: equivalent iff the empty word
/// is reachable.
pub fn equivalence_ball(p: &Presentation, u: &Word, v: &Word, cfg: &BallConfig) -> BallResult {
    bfs_min_length(p, &u.concat(&v.inverse()), cfg)
}

/// Geodesic verdict for a 2-generated word by the run-length criterion,
/// applied to the freely reduced form. This is a from-scratch
/// re-implementation kept apart from the dihedral module: the factor maxima
/// are found by checking every factor.
pub fn dihedral_oracle(p: &Presentation, w: &Word) -> Result<bool, OracleError> {
    let reduced = w.free_reduce();
    let mut names: Vec<Gen> = reduced.iter().map(|l| l.name()).collect();
    names.sort();
    names.dedup();
    match names.len() {
        0 | 1 => Ok(true),
        2 => {
            let m = match p.exponent(names[0], names[1]) {
                Exponent::Finite(m) => m as usize,
                Exponent::Infinity => return Err(OracleError::InfiniteExponent),
            };
            let letters = reduced.letters();
            let mut r1 = 0usize;
            let mut r2 = 0usize;
            for i in 0..letters.len() {
                for j in (i + 1)..=letters.len() {
                    let factor = &letters[i..j];
                    let alternating = factor.windows(2).all(|p| !p[0].same_name(p[1]));
                    if !alternating {
                        break;
                    }
                    if factor.iter().all(|l| l.is_positive()) {
                        r1 = r1.max(j - i);
                    }
                    if factor.iter().all(|l| !l.is_positive()) {
                        r2 = r2.max(j - i);
                    }
                }
            }
            Ok(r1.min(m) + r2.min(m) <= m)
        }
        _ => Err(OracleError::NotTwoGenerated),
    }
}

/// Shortest representative in a presentation whose finite exponents are all
/// 2: repeatedly cancel an inverse pair whose gap commutes with its name.
pub fn commutation_oracle(p: &Presentation, w: &Word) -> Result<Word, OracleError> {
    if !p.is_commutation_only() {
        return Err(OracleError::NotCommutationOnly);
    }
    let mut letters = w.letters().to_vec();
    'scan: loop {
        for i in 0..letters.len() {
            for j in (i + 1)..letters.len() {
                if letters[j] == letters[i].inverse()
                    && letters[i + 1..j]
                        .iter()
                        .all(|l| p.commutes(l.name(), letters[i].name()))
                {
                    letters.remove(j);
                    letters.remove(i);
                    continue 'scan;
                }
                if !p.commutes(letters[j].name(), letters[i].name()) {
                    break;
                }
            }
        }
        break;
    }
    Ok(Word::from_letters(letters))
}
