//! Geodesic testing and reduction.
//!
//! The freely reduced words admitting no rightward reducing sequence are
//! exactly the geodesic words, so membership is decidable by search. The
//! reduction map folds a word letter by letter: starting from the empty
//! word, each new letter either cancels against the current last letter,
//! extends the word when the extension is still geodesic, or triggers the
//! unique optimal sequence whose replay (plus one free cancellation) lands
//! back on a geodesic. The emitted trace replays the whole history on the
//! input word.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::dihedral::{critical_decompose, DihedralContext};
use crate::presentation::{Exponent, Gen, Presentation};
use crate::rrs::{
    apply_rrs, check_structure, find_any_rrs, find_optimal_rrs, find_optimal_rrs_checked,
    ReductionTrace, TraceEvent,
};
use crate::words::Word;

/// Default state cap for [`geodesic_closure`].
pub const DEFAULT_CLOSURE_CAP: usize = 100_000;

/// True iff `w` is freely reduced and admits no rightward reducing
/// sequence; equivalently, iff `w` is geodesic.
pub fn is_geodesic(p: &Presentation, w: &Word) -> bool {
    w.is_freely_reduced() && find_any_rrs(p, w).is_none()
}

/// Reduces `w` to an equivalent geodesic word, with the replayable trace.
pub fn reduce(p: &Presentation, w: &Word) -> (Word, ReductionTrace) {
    let mut acc = Word::empty();
    let mut trace = ReductionTrace::default();
    for g in w.iter() {
        if acc.last() == Some(g.inverse()) {
            trace.events.push(TraceEvent::Cancel { at: acc.len() - 1 });
            acc = acc.drop_last().expect("nonempty");
            continue;
        }
        let extended = acc.push(g);
        match find_optimal_rrs(p, &extended) {
            None => acc = extended,
            Some(r) => {
                let (shorter, events) =
                    apply_rrs(p, &extended, &r).expect("searched sequences replay");
                trace.extend(events);
                acc = shorter;
            }
        }
    }
    (acc, trace)
}

/// Contract violations that [`reduce_verified`] checks for. Any of these
/// would indicate a bug in the search rather than a property of the input.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ContractViolation {
    #[error("optimal sequence is not unique ({candidates} candidates)")]
    AmbiguousOptimal { candidates: usize },
    #[error("structure lemma failed: {0}")]
    Structure(String),
    #[error("sequence output still admits a reduction")]
    NotGeodesicAfterRrs,
    #[error("trace does not replay to the result")]
    TraceMismatch,
}

/// Statistics from a verified reduction.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct ReductionAudit {
    pub rrs_applied: usize,
    pub free_cancellations: usize,
}

/// As [`reduce`], but re-checks the theorem-backed guarantees at every step:
/// the optimal sequence is unique, it satisfies the structural lemmas, and
/// its application lands back on a geodesic.
pub fn reduce_verified(
    p: &Presentation,
    w: &Word,
) -> Result<(Word, ReductionTrace, ReductionAudit), ContractViolation> {
    let mut acc = Word::empty();
    let mut trace = ReductionTrace::default();
    let mut audit = ReductionAudit::default();
    for g in w.iter() {
        if acc.last() == Some(g.inverse()) {
            trace.events.push(TraceEvent::Cancel { at: acc.len() - 1 });
            acc = acc.drop_last().expect("nonempty");
            audit.free_cancellations += 1;
            continue;
        }
        let extended = acc.push(g);
        match find_optimal_rrs_checked(p, &extended) {
            None => acc = extended,
            Some((r, candidates)) => {
                if candidates != 1 {
                    return Err(ContractViolation::AmbiguousOptimal { candidates });
                }
                check_structure(&r, &extended)
                    .map_err(|e| ContractViolation::Structure(e.to_string()))?;
                let (shorter, events) =
                    apply_rrs(p, &extended, &r).expect("searched sequences replay");
                if !is_geodesic(p, &shorter) {
                    return Err(ContractViolation::NotGeodesicAfterRrs);
                }
                trace.extend(events);
                acc = shorter;
                audit.rrs_applied += 1;
            }
        }
    }
    if trace.replay(w) != Ok(acc.clone()) {
        return Err(ContractViolation::TraceMismatch);
    }
    Ok((acc, trace, audit))
}

/// Decides the word problem: `w` and `v` represent the same element iff
/// `w·v⁻¹` reduces to the empty word.
pub fn equal(p: &Presentation, w: &Word, v: &Word) -> bool {
    reduce(p, &w.concat(&v.inverse())).0.is_empty()
}

/// The set of geodesic words reachable from a geodesic `w` by adjacent
/// commuting swaps and τ-moves on contiguous 2-generated critical factors:
/// the full geodesic class of the element when the search completes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeodesicClass {
    pub representative: Word,
    /// Discovery (breadth-first) order; the representative comes first.
    pub members: Vec<Word>,
    /// Indices into `members` for every move applied during the search.
    pub move_edges: Vec<(u32, u32)>,
    /// False when the cap cut the search short.
    pub complete: bool,
}

impl GeodesicClass {
    pub fn contains(&self, w: &Word) -> bool {
        self.members.contains(w)
    }
}

/// Breadth-first closure of `{w}` under length-preserving moves. Expects
/// `w` to be geodesic; the closure of a geodesic stays within its class.
pub fn geodesic_closure(p: &Presentation, w: &Word, cap: usize) -> GeodesicClass {
    debug_assert!(is_geodesic(p, w));
    let mut index: HashMap<Word, u32> = HashMap::new();
    let mut members: Vec<Word> = Vec::new();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut queue: VecDeque<u32> = VecDeque::new();
    let mut complete = true;

    index.insert(w.clone(), 0);
    members.push(w.clone());
    queue.push_back(0);

    while let Some(id) = queue.pop_front() {
        let cur = members[id as usize].clone();
        for next in closure_moves(p, &cur) {
            let next_id = match index.get(&next) {
                Some(&existing) => existing,
                None => {
                    if members.len() >= cap {
                        complete = false;
                        continue;
                    }
                    let new_id = members.len() as u32;
                    index.insert(next.clone(), new_id);
                    members.push(next);
                    queue.push_back(new_id);
                    new_id
                }
            };
            if id < next_id {
                edges.push((id, next_id));
            }
        }
    }

    GeodesicClass {
        representative: w.clone(),
        members,
        move_edges: edges,
        complete,
    }
}

/// Length-preserving neighbors: adjacent commuting swaps plus the τ image of
/// every contiguous critical factor.
fn closure_moves(p: &Presentation, w: &Word) -> Vec<Word> {
    let mut out = Vec::new();
    let letters = w.letters();
    for i in 0..w.len().saturating_sub(1) {
        let (x, y) = (letters[i], letters[i + 1]);
        if !x.same_name(y) && p.commutes(x.name(), y.name()) {
            let mut next = letters.to_vec();
            next.swap(i, i + 1);
            out.push(Word::from_letters(next));
        }
    }
    // Critical factors live over a pair with finite exponent at least 4;
    // commuting pairs are already covered by swaps.
    for (g, h, m) in p.finite_pairs() {
        if m < 4 {
            continue;
        }
        let ctx = DihedralContext::from_parts(g, h, m).expect("finite pair");
        for i in 0..w.len() {
            for j in (i + 2)..=w.len() {
                if !letters[i..j]
                    .iter()
                    .all(|l| l.name() == g || l.name() == h)
                {
                    break;
                }
                let factor = w.slice(i, j);
                if let Some(d) = critical_decompose(&ctx, &factor) {
                    let mut next = letters[..i].to_vec();
                    next.extend(d.tau(&ctx).letters());
                    next.extend(&letters[j..]);
                    out.push(Word::from_letters(next));
                }
            }
        }
    }
    out
}

/// Image of `w` in the abelianization: generators linked by a chain of odd
/// finite exponents share a coordinate, every other generator keeps its own.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbelianImage {
    /// Class index of each generator.
    pub class_of: Vec<usize>,
    /// Signed letter counts per class.
    pub sums: Vec<i64>,
}

pub fn abelianized_image(p: &Presentation, w: &Word) -> AbelianImage {
    let n = p.generator_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for g in p.generators() {
        for h in p.generators() {
            if g < h {
                if let Exponent::Finite(m) = p.exponent(g, h) {
                    if m % 2 == 1 {
                        let (rg, rh) = (root(&mut parent, g.index()), root(&mut parent, h.index()));
                        parent[rg.max(rh)] = rg.min(rh);
                    }
                }
            }
        }
    }
    let mut class_of = vec![0usize; n];
    let mut next = 0usize;
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for (i, slot) in class_of.iter_mut().enumerate() {
        let r = root(&mut parent, i);
        let id = *seen.entry(r).or_insert_with(|| {
            let id = next;
            next += 1;
            id
        });
        *slot = id;
    }
    let mut sums = vec![0i64; next];
    for l in w.iter() {
        sums[class_of[l.name().index()]] += if l.is_positive() { 1 } else { -1 };
    }
    AbelianImage { class_of, sums }
}

/// Convenience: the classes as generator groups, for display.
pub fn abelian_classes(p: &Presentation) -> Vec<Vec<Gen>> {
    let image = abelianized_image(p, &Word::empty());
    let count = image.sums.len();
    let mut classes = vec![Vec::new(); count];
    for g in p.generators() {
        classes[image.class_of[g.index()]].push(g);
    }
    classes
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1() -> Presentation {
        Presentation::parse(include_str!("../fixtures/p1.pres")).unwrap()
    }

    fn w(p: &Presentation, s: &str) -> Word {
        Word::parse(p, s).unwrap()
    }

    fn w18(p: &Presentation) -> Word {
        w(p, "a c b a b^2 c d a b^-1 c^-1 b^-1 d^5 c^-1")
    }

    #[test]
    fn geodesic_membership() {
        let p = p1();
        assert!(is_geodesic(&p, &w(&p, "a b a b^2 a")));
        assert!(!is_geodesic(&p, &w18(&p)));
        assert!(is_geodesic(&p, &Word::empty()));
        assert!(!is_geodesic(&p, &w(&p, "a a^-1")));
    }

    #[test]
    fn reduces_the_eighteen_letter_example() {
        let p = p1();
        let (out, trace) = reduce(&p, &w18(&p));
        assert_eq!(out, w(&p, "c d b a^2 b a c^-1 b^-1 c^-1 b d^5"));
        assert_eq!(out.len(), 16);
        assert_eq!(trace.replay(&w18(&p)).unwrap(), out);
    }

    #[test]
    fn reduce_small_cases() {
        let p = p1();
        assert_eq!(reduce(&p, &w(&p, "a a^-1")).0, Word::empty());
        assert_eq!(reduce(&p, &w(&p, "a b a b a^-1")).0, w(&p, "b a b"));
        assert_eq!(reduce(&p, &Word::empty()).0, Word::empty());
    }

    #[test]
    fn verified_reduction_agrees() {
        let p = p1();
        let (out, _, audit) = reduce_verified(&p, &w18(&p)).unwrap();
        assert_eq!(out.len(), 16);
        assert_eq!(audit.rrs_applied, 1);
    }

    #[test]
    fn equality_examples() {
        let p = p1();
        assert!(equal(
            &p,
            &w18(&p),
            &w(&p, "c d b a^2 b a c^-1 b^-1 c^-1 b d^5")
        ));
        assert!(equal(&p, &w(&p, "a c"), &w(&p, "c a")));
        assert!(!equal(&p, &w(&p, "a b"), &w(&p, "b a")));
    }

    #[test]
    fn closure_examples() {
        let p = p1();
        let class = geodesic_closure(&p, &w(&p, "a b a b"), DEFAULT_CLOSURE_CAP);
        assert!(class.complete);
        assert_eq!(class.members.len(), 2);
        assert!(class.contains(&w(&p, "b a b a")));

        let singleton = geodesic_closure(&p, &w(&p, "a b"), DEFAULT_CLOSURE_CAP);
        assert_eq!(singleton.members, vec![w(&p, "a b")]);

        let empty = geodesic_closure(&p, &Word::empty(), DEFAULT_CLOSURE_CAP);
        assert_eq!(empty.members, vec![Word::empty()]);
    }

    #[test]
    fn closure_cap_reports_incompleteness() {
        let p = p1();
        // d⁵ against four commuting partners has plenty of rearrangements.
        let class = geodesic_closure(&p, &w(&p, "d a d b d c d"), 3);
        assert!(!class.complete);
        assert!(class.members.len() <= 3);
    }

    #[test]
    fn abelianization_examples() {
        let p = p1();
        // b and c share a class through the odd exponent.
        let image = abelianized_image(&p, &w(&p, "a b"));
        assert_eq!(image.sums.len(), 3);
        let a_class = image.class_of[p.generator("a").unwrap().index()];
        let b_class = image.class_of[p.generator("b").unwrap().index()];
        let c_class = image.class_of[p.generator("c").unwrap().index()];
        let d_class = image.class_of[p.generator("d").unwrap().index()];
        assert_eq!(b_class, c_class);
        assert_ne!(a_class, b_class);
        assert_eq!(image.sums[a_class], 1);
        assert_eq!(image.sums[b_class], 1);
        assert_eq!(image.sums[d_class], 0);

        // A relator word maps to zero.
        let relator = w(&p, "a b a b").concat(&w(&p, "b a b a").inverse());
        assert!(abelianized_image(&p, &relator).sums.iter().all(|&s| s == 0));

        // Invariance along a reduction.
        let before = abelianized_image(&p, &w18(&p));
        let after = abelianized_image(&p, &reduce(&p, &w18(&p)).0);
        assert_eq!(before.sums, after.sums);
    }
}
