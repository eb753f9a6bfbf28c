//! Rightward reducing sequences: the certificates of non-geodesity.
//!
//! A freely reduced word w admits a rightward reducing sequence of length k
//! when it factors as w = μ·w₁·…·w_k·w_{k+1}·γ with every w_i (i ≤ k)
//! nonempty and a chain u₁, …, u_{k+1} such that
//!
//!  * u₁ = w₁ and each u_i with i ≤ k is pseudo-2-generated critical,
//!  * u_{i+1} = l[τ(û_i)]·β_i·w_{i+1}, that is, the produced letter and
//!    the β block left behind by the previous τ-move glued to the next
//!    chunk,
//!  * u_{k+1} = a·v where the letter a commutes with every letter of v and
//!    a is the inverse of the first letter of the tail γ (for k = 0 the
//!    pattern is just w₁ = a·v).
//!
//! Replaying the τ-moves left to right, then commuting the surviving letter
//! a through v, puts a·a⁻¹ adjacent: the word drops to length |w| − 2. The
//! search in this module enumerates such chains directly from the
//! definition, re-verifies every sequence it returns, and can select the
//! *optimal* sequence: head as long as possible, then no free reduction
//! before the final one, then no two consecutive links that share both
//! pseudo-generators while the later link's α would commute away entirely.

use thiserror::Error;

use crate::dihedral::CriticalDecomposition;
use crate::p2g::{is_p2g_critical, P2gDecomposition};
use crate::presentation::Presentation;
use crate::words::{Letter, Word};

/// Half-open index range into a word.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

/// One critical link u_i of a sequence, with everything needed to replay its
/// τ-move: the span it occupies when applied, the P2G split, the critical
/// shape of the core, τ(û_i) and the produced letter.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RrsStep {
    pub span: Span,
    pub decomposition: P2gDecomposition,
    pub critical: CriticalDecomposition,
    pub tau_hat: Word,
    pub produced: Letter,
}

impl RrsStep {
    /// The word this step rewrites to: α·ρ·τ(û)·β.
    pub fn tau_word(&self) -> Word {
        self.decomposition
            .alpha
            .concat(&self.decomposition.rho())
            .concat(&self.tau_hat)
            .concat(&self.decomposition.beta)
    }

    pub fn beta(&self) -> &Word {
        &self.decomposition.beta
    }

    /// The forced prefix of the next link: l[τ(û_i)]·β_i.
    fn chain_prefix(&self) -> Word {
        Word::from_letters(vec![self.produced]).concat(&self.decomposition.beta)
    }
}

/// A rightward reducing sequence over some word. `chunks` are the spans of
/// w₁ … w_{k+1} in the original word (the last chunk may be empty), `steps`
/// the k critical links, and `w[tail_start]` the letter that finally
/// cancels.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rrs {
    pub head_len: usize,
    pub chunks: Vec<Span>,
    pub tail_start: usize,
    pub steps: Vec<RrsStep>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RrsDefect {
    #[error("sequence shape is inconsistent: {0}")]
    Shape(String),
    #[error("link {index} fails to be P2G critical as recorded")]
    BadLink { index: usize },
    #[error("final letter does not commute through to the tail")]
    BadFinalCommute,
    #[error("tail letter is not the inverse of the moved letter")]
    BadCancellation,
    #[error("replay mismatch at position {at}")]
    Replay { at: usize },
}

impl Rrs {
    /// Number of critical links.
    pub fn k(&self) -> usize {
        self.steps.len()
    }

    /// The letter that travels into the cancellation: the last produced
    /// letter, or the head letter of w₁ when k = 0.
    pub fn final_letter(&self, w: &Word) -> Letter {
        match self.steps.last() {
            Some(step) => step.produced,
            None => w.letter(self.head_len),
        }
    }

    /// Re-checks the whole definition against `w`.
    pub fn verify(&self, p: &Presentation, w: &Word) -> Result<(), RrsDefect> {
        let k = self.steps.len();
        if self.chunks.len() != k + 1 {
            return Err(RrsDefect::Shape(format!(
                "{} chunks for {} links",
                self.chunks.len(),
                k
            )));
        }
        if self.chunks[0].start != self.head_len {
            return Err(RrsDefect::Shape("head length mismatch".to_string()));
        }
        for pair in self.chunks.windows(2) {
            if pair[0].end != pair[1].start {
                return Err(RrsDefect::Shape("chunks are not contiguous".to_string()));
            }
        }
        for (i, c) in self.chunks.iter().enumerate() {
            if c.end > w.len() || (c.is_empty() && !(k > 0 && i == k)) {
                return Err(RrsDefect::Shape(format!("chunk {i} is degenerate")));
            }
        }
        if self.tail_start != self.chunks[k].end || self.tail_start >= w.len() {
            return Err(RrsDefect::Shape("tail is missing".to_string()));
        }

        for (i, step) in self.steps.iter().enumerate() {
            let chunk = self.chunks[i];
            let link = if i == 0 {
                w.slice(chunk.start, chunk.end)
            } else {
                self.steps[i - 1]
                    .chain_prefix()
                    .concat(&w.slice(chunk.start, chunk.end))
            };
            let expected_start = if i == 0 {
                self.head_len
            } else {
                chunk.start - self.steps[i - 1].chain_prefix().len()
            };
            if step.span.start != expected_start || step.span.end != chunk.end {
                return Err(RrsDefect::Shape(format!("link {i} span mismatch")));
            }
            let Some((d, c)) = is_p2g_critical(p, &link) else {
                return Err(RrsDefect::BadLink { index: i });
            };
            let tau_hat = c.tau(&d.context());
            let produced = tau_hat.last().expect("critical cores are nonempty");
            if d != step.decomposition
                || c != step.critical
                || tau_hat != step.tau_hat
                || produced != step.produced
            {
                return Err(RrsDefect::BadLink { index: i });
            }
        }

        let a = self.final_letter(w);
        let tail_word = match self.steps.last() {
            Some(step) => step
                .beta()
                .concat(&w.slice(self.chunks[k].start, self.chunks[k].end)),
            None => w.slice(self.head_len + 1, self.chunks[0].end),
        };
        if !tail_word
            .iter()
            .all(|l| p.commutes(l.name(), a.name()))
        {
            return Err(RrsDefect::BadFinalCommute);
        }
        if w.letter(self.tail_start) != a.inverse() {
            return Err(RrsDefect::BadCancellation);
        }
        Ok(())
    }
}

/// Searches for any rightward reducing sequence of `w`. The result, if any,
/// has been re-verified against the definition.
pub fn find_any_rrs(p: &Presentation, w: &Word) -> Option<Rrs> {
    debug_assert!(w.is_freely_reduced());
    let mut search = Searcher {
        p,
        w,
        first_only: true,
        results: Vec::new(),
    };
    for start in 0..w.len() {
        search.run_at(start);
        if let Some(r) = search.results.pop() {
            debug_assert_eq!(r.verify(p, w), Ok(()));
            return Some(r);
        }
    }
    None
}

/// Every rightward reducing sequence of `w`, in deterministic order.
pub fn enumerate_rrs(p: &Presentation, w: &Word) -> Vec<Rrs> {
    let mut out = Vec::new();
    for start in 0..w.len() {
        out.extend(enumerate_rrs_at(p, w, start));
    }
    out
}

fn enumerate_rrs_at(p: &Presentation, w: &Word, start: usize) -> Vec<Rrs> {
    let mut search = Searcher {
        p,
        w,
        first_only: false,
        results: Vec::new(),
    };
    search.run_at(start);
    search.results
}

struct Searcher<'a> {
    p: &'a Presentation,
    w: &'a Word,
    first_only: bool,
    results: Vec<Rrs>,
}

impl Searcher<'_> {
    fn done(&self) -> bool {
        self.first_only && !self.results.is_empty()
    }

    fn run_at(&mut self, start: usize) {
        self.scan_plain_commute(start);
        if self.done() {
            return;
        }
        let n = self.w.len();
        // u₁ is a contiguous critical subword; it needs at least two letters
        // and must leave room for a tail.
        for end in (start + 2)..n {
            if self.done() {
                return;
            }
            let u1 = self.w.slice(start, end);
            if let Some((d, c)) = is_p2g_critical(self.p, &u1) {
                let tau_hat = c.tau(&d.context());
                let produced = tau_hat.last().expect("critical cores are nonempty");
                let step = RrsStep {
                    span: Span { start, end },
                    decomposition: d,
                    critical: c,
                    tau_hat,
                    produced,
                };
                self.extend(end, vec![step], vec![Span { start, end }]);
            }
        }
    }

    /// The k = 0 pattern: w₁ = a·v with a commuting past all of v into a
    /// cancellation.
    fn scan_plain_commute(&mut self, start: usize) {
        let a = self.w.letter(start);
        for j in (start + 1)..self.w.len() {
            if self.w.letter(j) == a.inverse() {
                self.results.push(Rrs {
                    head_len: start,
                    chunks: vec![Span { start, end: j }],
                    tail_start: j,
                    steps: Vec::new(),
                });
                if self.first_only {
                    return;
                }
            }
            if !self.p.commutes(self.w.letter(j).name(), a.name()) {
                return;
            }
        }
    }

    fn extend(&mut self, consumed: usize, steps: Vec<RrsStep>, chunks: Vec<Span>) {
        if self.done() {
            return;
        }
        let n = self.w.len();
        let last = steps.last().expect("chains carry at least one link");
        let a = last.produced;

        // Termination: β_k must commute through (for a valid sequence it is
        // empty) and some later letter must be a⁻¹ with only a-commuting
        // letters in between.
        if last
            .beta()
            .iter()
            .all(|l| self.p.commutes(l.name(), a.name()))
        {
            for j in consumed..n {
                if self.w.letter(j) == a.inverse() {
                    let mut cs = chunks.clone();
                    cs.push(Span {
                        start: consumed,
                        end: j,
                    });
                    self.results.push(Rrs {
                        head_len: chunks[0].start,
                        chunks: cs,
                        tail_start: j,
                        steps: steps.clone(),
                    });
                    if self.first_only {
                        return;
                    }
                }
                if !self.p.commutes(self.w.letter(j).name(), a.name()) {
                    break;
                }
            }
        }

        // Extension: the next link is the forced prefix glued to a fresh
        // nonempty chunk.
        let prefix = last.chain_prefix();
        for end in (consumed + 1)..n {
            if self.done() {
                return;
            }
            let link = prefix.concat(&self.w.slice(consumed, end));
            if let Some((d, c)) = is_p2g_critical(self.p, &link) {
                let tau_hat = c.tau(&d.context());
                let produced = tau_hat.last().expect("critical cores are nonempty");
                let step = RrsStep {
                    span: Span {
                        start: consumed - prefix.len(),
                        end,
                    },
                    decomposition: d,
                    critical: c,
                    tau_hat,
                    produced,
                };
                let mut next_steps = steps.clone();
                next_steps.push(step);
                let mut next_chunks = chunks.clone();
                next_chunks.push(Span {
                    start: consumed,
                    end,
                });
                self.extend(end, next_steps, next_chunks);
            }
        }
    }
}

/// Violations of the structural facts every found sequence is expected to
/// satisfy (the β lemma and the syntactic part of optimality condition 2).
#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureViolation {
    #[error("β of the last link is nonempty")]
    FinalBetaNonEmpty,
    #[error("link {index}: β nonempty but the next α is not")]
    AlphaAfterBeta { index: usize },
    #[error("link {index}: β mixes generator names")]
    BetaMixesNames { index: usize },
    #[error("link {index}: τ output cancels into the next chunk")]
    PrematureCancellation { index: usize },
    #[error("tail letter appears inside the final chunk")]
    TailLetterInFinalChunk,
}

/// Asserts the β-structure lemma and the syntactic form of optimality
/// condition 2 on a verified sequence.
pub fn check_structure(r: &Rrs, w: &Word) -> Result<(), StructureViolation> {
    let k = r.k();
    if k > 0 && !r.steps[k - 1].beta().is_empty() {
        return Err(StructureViolation::FinalBetaNonEmpty);
    }
    for i in 0..k.saturating_sub(1) {
        let beta = r.steps[i].beta();
        if !beta.is_empty() {
            if !r.steps[i + 1].decomposition.alpha.is_empty() {
                return Err(StructureViolation::AlphaAfterBeta { index: i });
            }
            let name = beta.letter(0).name();
            if !beta.iter().all(|l| l.name() == name) {
                return Err(StructureViolation::BetaMixesNames { index: i });
            }
        }
    }
    for i in 0..k {
        let next_chunk = r.chunks[i + 1];
        if next_chunk.is_empty() {
            continue;
        }
        let tau_last = match r.steps[i].beta().last() {
            Some(l) => l,
            None => r.steps[i].produced,
        };
        if w.letter(next_chunk.start) == tau_last.inverse() {
            return Err(StructureViolation::PrematureCancellation { index: i });
        }
    }
    let tail_letter = w.letter(r.tail_start);
    let final_chunk = if k > 0 {
        r.chunks[k]
    } else {
        // For k = 0 the guarded region is w₁ without its moving letter.
        Span {
            start: r.head_len + 1,
            end: r.chunks[0].end,
        }
    };
    for i in final_chunk.start..final_chunk.end {
        if w.letter(i).same_name(tail_letter) {
            return Err(StructureViolation::TailLetterInFinalChunk);
        }
    }
    Ok(())
}

/// Finds the unique optimal sequence: rightmost possible start, then the
/// conditions of [`check_structure`], with a deterministic tie-break kept as
/// a safety net.
pub fn find_optimal_rrs(p: &Presentation, w: &Word) -> Option<Rrs> {
    find_optimal_rrs_checked(p, w).map(|(r, _)| r)
}

/// As [`find_optimal_rrs`], also reporting how many candidates at the
/// rightmost start satisfied all optimality conditions (the uniqueness
/// statement predicts exactly one).
pub fn find_optimal_rrs_checked(p: &Presentation, w: &Word) -> Option<(Rrs, usize)> {
    debug_assert!(w.is_freely_reduced());
    for start in (0..w.len()).rev() {
        let all = enumerate_rrs_at(p, w, start);
        if all.is_empty() {
            continue;
        }
        let mut optimal: Vec<&Rrs> = all
            .iter()
            .filter(|r| check_structure(r, w).is_ok() && condition_three(p, r))
            .collect();
        let count = optimal.len();
        let pick = |rs: &mut Vec<&Rrs>| -> Rrs {
            rs.sort_by_key(|r| {
                (
                    r.tail_start,
                    r.k(),
                    r.chunks.iter().map(|c| c.end).collect::<Vec<_>>(),
                )
            });
            (*rs.first().expect("nonempty")).clone()
        };
        let best = if optimal.is_empty() {
            // The uniqueness lemma says this cannot happen; fall back to the
            // most optimal-looking candidate rather than failing.
            debug_assert!(false, "no candidate satisfied the optimality filter");
            let mut refs: Vec<&Rrs> = all.iter().collect();
            pick(&mut refs)
        } else {
            pick(&mut optimal)
        };
        debug_assert_eq!(best.verify(p, w), Ok(()));
        return Some((best, count));
    }
    None
}

/// Optimality condition 3: consecutive links may share both pseudo-
/// generators only if the later link's α is pinned by a letter that fails to
/// commute with one of them; otherwise the two links merge into one.
fn condition_three(p: &Presentation, r: &Rrs) -> bool {
    for pair in r.steps.windows(2) {
        let (prev, cur) = (&pair[0], &pair[1]);
        let same_pair = {
            let mut x = [prev.decomposition.a, prev.decomposition.b];
            let mut y = [cur.decomposition.a, cur.decomposition.b];
            x.sort();
            y.sort();
            x == y
        };
        let alpha_escapes = cur.decomposition.alpha.iter().all(|l| {
            p.commutes(l.name(), cur.decomposition.a) && p.commutes(l.name(), cur.decomposition.b)
        });
        if same_pair && alpha_escapes {
            return false;
        }
    }
    true
}

/// A replayable list of rewrite events. Tau events substitute an
/// equal-length block, swaps exchange adjacent commuting letters, and the
/// final cancellation removes an adjacent inverse pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TraceEvent {
    Tau {
        at: usize,
        len: usize,
        before: Word,
        after: Word,
    },
    Swap {
        at: usize,
    },
    Cancel {
        at: usize,
    },
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ReductionTrace {
    pub events: Vec<TraceEvent>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("event {index} is out of bounds")]
    OutOfBounds { index: usize },
    #[error("event {index} does not match the word")]
    Mismatch { index: usize },
}

impl ReductionTrace {
    pub fn extend(&mut self, other: ReductionTrace) {
        self.events.extend(other.events);
    }

    /// Applies the events to `source`, validating each one.
    pub fn replay(&self, source: &Word) -> Result<Word, ReplayError> {
        let mut cur: Vec<Letter> = source.letters().to_vec();
        for (index, ev) in self.events.iter().enumerate() {
            match ev {
                TraceEvent::Tau {
                    at,
                    len,
                    before,
                    after,
                } => {
                    if at + len > cur.len() || before.len() != *len || after.len() != *len {
                        return Err(ReplayError::OutOfBounds { index });
                    }
                    if cur[*at..at + len] != *before.letters() {
                        return Err(ReplayError::Mismatch { index });
                    }
                    cur[*at..at + len].copy_from_slice(after.letters());
                }
                TraceEvent::Swap { at } => {
                    if at + 1 >= cur.len() {
                        return Err(ReplayError::OutOfBounds { index });
                    }
                    cur.swap(*at, *at + 1);
                }
                TraceEvent::Cancel { at } => {
                    if at + 1 >= cur.len() {
                        return Err(ReplayError::OutOfBounds { index });
                    }
                    if cur[*at] != cur[*at + 1].inverse() {
                        return Err(ReplayError::Mismatch { index });
                    }
                    cur.drain(*at..at + 2);
                }
            }
        }
        Ok(Word::from_letters(cur))
    }

    /// Serialized form: `{"events":[{"kind":"tau",...},...]}` with words in
    /// the usual token grammar.
    pub fn to_json(&self, p: &Presentation) -> serde_json::Value {
        let events: Vec<serde_json::Value> = self
            .events
            .iter()
            .map(|ev| match ev {
                TraceEvent::Tau {
                    at,
                    len,
                    before,
                    after,
                } => serde_json::json!({
                    "kind": "tau",
                    "at": at,
                    "len": len,
                    "before": before.display(p).to_string(),
                    "after": after.display(p).to_string(),
                }),
                TraceEvent::Swap { at } => serde_json::json!({"kind": "swap", "at": at}),
                TraceEvent::Cancel { at } => serde_json::json!({"kind": "cancel", "at": at}),
            })
            .collect();
        serde_json::json!({ "events": events })
    }

    pub fn from_json(
        p: &Presentation,
        value: &serde_json::Value,
    ) -> Result<Self, String> {
        let events = value
            .get("events")
            .and_then(|e| e.as_array())
            .ok_or("missing events array")?;
        let mut out = Vec::with_capacity(events.len());
        for ev in events {
            let kind = ev.get("kind").and_then(|k| k.as_str()).ok_or("missing kind")?;
            let at = ev
                .get("at")
                .and_then(|a| a.as_u64())
                .ok_or("missing at")? as usize;
            match kind {
                "tau" => {
                    let len = ev
                        .get("len")
                        .and_then(|l| l.as_u64())
                        .ok_or("missing len")? as usize;
                    let before = ev
                        .get("before")
                        .and_then(|b| b.as_str())
                        .ok_or("missing before")?;
                    let after = ev
                        .get("after")
                        .and_then(|a| a.as_str())
                        .ok_or("missing after")?;
                    out.push(TraceEvent::Tau {
                        at,
                        len,
                        before: Word::parse(p, before).map_err(|e| e.to_string())?,
                        after: Word::parse(p, after).map_err(|e| e.to_string())?,
                    });
                }
                "swap" => out.push(TraceEvent::Swap { at }),
                "cancel" => out.push(TraceEvent::Cancel { at }),
                other => return Err(format!("unknown event kind `{other}`")),
            }
        }
        Ok(ReductionTrace { events: out })
    }
}

/// Replays a verified sequence on `w`: τ-moves in order, the commutation of
/// the moved letter, and the final cancellation. Returns the shortened word
/// with the full event trace.
pub fn apply_rrs(p: &Presentation, w: &Word, r: &Rrs) -> Result<(Word, ReductionTrace), RrsDefect> {
    r.verify(p, w)?;
    let mut cur: Vec<Letter> = w.letters().to_vec();
    let mut events = Vec::new();

    for step in &r.steps {
        let before = Word::from_letters(cur[step.span.start..step.span.end].to_vec());
        let after = step.tau_word();
        if after.len() != step.span.len() {
            return Err(RrsDefect::Replay {
                at: step.span.start,
            });
        }
        events.push(TraceEvent::Tau {
            at: step.span.start,
            len: step.span.len(),
            before,
            after: after.clone(),
        });
        cur[step.span.start..step.span.end].copy_from_slice(after.letters());
    }

    let a = r.final_letter(w);
    let a_pos = match r.steps.last() {
        // The produced letter sits just before β in the rewritten block
        // (and β is empty on the last link of any valid sequence).
        Some(step) => step.span.end - 1 - step.beta().len(),
        None => r.head_len,
    };
    debug_assert_eq!(cur[a_pos], a);
    for i in a_pos..r.tail_start.saturating_sub(1) {
        if !p.commutes(cur[i + 1].name(), a.name()) {
            return Err(RrsDefect::BadFinalCommute);
        }
        events.push(TraceEvent::Swap { at: i });
        cur.swap(i, i + 1);
    }
    let cancel_at = r.tail_start - 1;
    if cur[cancel_at] != cur[cancel_at + 1].inverse() {
        return Err(RrsDefect::BadCancellation);
    }
    events.push(TraceEvent::Cancel { at: cancel_at });
    cur.drain(cancel_at..cancel_at + 2);

    debug_assert_eq!(cur.len(), w.len() - 2);
    Ok((Word::from_letters(cur), ReductionTrace { events }))
}
