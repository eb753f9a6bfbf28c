//! The two-generator toolkit: alternating words, the p/n geodesic
//! criterion, critical words and the length-preserving involution τ.
//!
//! Fix generators x, y with a relation of finite length m. For a freely
//! reduced word w let r₁ be the length of the longest contiguous factor that
//! alternates between the two names with all letters positive, r₂ the same
//! for all-negative factors, and p = min(r₁, m), n = min(r₂, m). Then
//! p + n < m means w is the unique geodesic for its element, p + n = m means
//! w is geodesic but possibly not alone, and p + n > m means w is not
//! geodesic.
//!
//! A *critical* word is a freely reduced 2-generated word with p + n = m of
//! one of the shapes
//!
//! ```text
//!   ₚ(x,y) η (z⁻¹,t⁻¹)ₙ        or        ₙ(x⁻¹,y⁻¹) η (z,t)ₚ
//! ```
//!
//! where ₖ(u,v) is the alternating word of length k starting with u and
//! (u,v)ₖ the one ending with v, and {x,y} = {z,t} as generator sets. When
//! the word is entirely positive or entirely negative (n = 0 or p = 0) the
//! alternating factor of length m must be a prefix or a suffix and must be
//! the only factor of its kind. Critical words carry an involution τ that
//! preserves length and the represented group element while changing the
//! names of both end letters, which is what lets a reduction travel through
//! a word one overlapping block at a time.

use std::fmt;

use thiserror::Error;

use crate::presentation::{Exponent, Gen, Presentation};
use crate::words::{Letter, Word};

/// A two-generator context: an unordered pair with its finite exponent.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DihedralContext {
    x: Gen,
    y: Gen,
    m: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DihedralError {
    #[error("the pair has no finite relation")]
    InfiniteExponent,
    #[error("the two generators coincide")]
    DegeneratePair,
    #[error("word contains a generator outside the context")]
    ForeignGenerator,
    #[error("word is not freely reduced")]
    NotFreelyReduced,
    #[error("word is not critical")]
    NotCritical,
}

impl DihedralContext {
    pub fn new(p: &Presentation, x: Gen, y: Gen) -> Result<Self, DihedralError> {
        if x == y {
            return Err(DihedralError::DegeneratePair);
        }
        match p.exponent(x, y) {
            Exponent::Finite(m) => Ok(DihedralContext { x, y, m }),
            Exponent::Infinity => Err(DihedralError::InfiniteExponent),
        }
    }

    /// Builds a context directly from a pair and exponent (m ≥ 2).
    pub fn from_parts(x: Gen, y: Gen, m: u32) -> Result<Self, DihedralError> {
        if x == y {
            return Err(DihedralError::DegeneratePair);
        }
        if m < 2 {
            return Err(DihedralError::InfiniteExponent);
        }
        Ok(DihedralContext { x, y, m })
    }

    pub fn generators(&self) -> (Gen, Gen) {
        (self.x, self.y)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn contains(&self, g: Gen) -> bool {
        g == self.x || g == self.y
    }

    /// The generator of the pair that is not `g`.
    pub fn other(&self, g: Gen) -> Gen {
        if g == self.x {
            self.y
        } else {
            self.x
        }
    }

    fn check_supported(&self, w: &Word) -> Result<(), DihedralError> {
        if w.iter().all(|l| self.contains(l.name())) {
            Ok(())
        } else {
            Err(DihedralError::ForeignGenerator)
        }
    }
}

/// Alternating word of length `len` starting with `first`; the second letter
/// alternates to `second` and so on. Signs are taken from the letters.
pub fn left_alt(first: Letter, second: Letter, len: u32) -> Word {
    (0..len)
        .map(|i| if i % 2 == 0 { first } else { second })
        .collect()
}

/// Alternating word of length `len` ending with `last`; the letter before it
/// is `before_last` and so on leftwards.
pub fn right_alt(before_last: Letter, last: Letter, len: u32) -> Word {
    (0..len)
        .map(|i| {
            if (len - 1 - i).is_multiple_of(2) {
                last
            } else {
                before_last
            }
        })
        .collect()
}

/// The run statistics behind the geodesic criterion.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PnValues {
    pub r1: u32,
    pub r2: u32,
    pub p: u32,
    pub n: u32,
}

/// Scans the maximal same-sign alternating runs of `w` and caps them at m.
pub fn pn(ctx: &DihedralContext, w: &Word) -> Result<PnValues, DihedralError> {
    ctx.check_supported(w)?;
    let mut r1: u32 = 0;
    let mut r2: u32 = 0;
    let mut run: u32 = 0;
    let mut prev: Option<Letter> = None;
    for l in w.iter() {
        run = match prev {
            Some(q) if q.is_positive() == l.is_positive() && !q.same_name(l) => run + 1,
            _ => 1,
        };
        if l.is_positive() {
            r1 = r1.max(run);
        } else {
            r2 = r2.max(run);
        }
        prev = Some(l);
    }
    Ok(PnValues {
        r1,
        r2,
        p: r1.min(ctx.m),
        n: r2.min(ctx.m),
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Geodesity {
    UniqueGeodesic,
    Geodesic,
    NotGeodesic,
}

impl fmt::Display for Geodesity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Geodesity::UniqueGeodesic => write!(f, "unique-geodesic"),
            Geodesity::Geodesic => write!(f, "geodesic"),
            Geodesity::NotGeodesic => write!(f, "not-geodesic"),
        }
    }
}

/// The p/n classification of a freely reduced 2-generated word.
pub fn classify(ctx: &DihedralContext, w: &Word) -> Result<Geodesity, DihedralError> {
    if !w.is_freely_reduced() {
        return Err(DihedralError::NotFreelyReduced);
    }
    let v = pn(ctx, w)?;
    Ok(match (v.p + v.n).cmp(&ctx.m) {
        std::cmp::Ordering::Less => Geodesity::UniqueGeodesic,
        std::cmp::Ordering::Equal => Geodesity::Geodesic,
        std::cmp::Ordering::Greater => Geodesity::NotGeodesic,
    })
}

/// Which of the six critical shapes a word matches.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CriticalForm {
    /// all-positive, alternating-m factor is a prefix: ₘ(x,y) η⁺
    PositivePrefix,
    /// all-positive, alternating-m factor is a suffix: η⁺ (z,t)ₘ
    PositiveSuffix,
    /// all-negative, factor is a prefix: ₘ(x⁻¹,y⁻¹) η⁻
    NegativePrefix,
    /// all-negative, factor is a suffix: η⁻ (z⁻¹,t⁻¹)ₘ
    NegativeSuffix,
    /// mixed signs, positive head and negative tail: ₚ(x,y) η (z⁻¹,t⁻¹)ₙ
    UnsignedPn,
    /// mixed signs, negative head and positive tail: ₙ(x⁻¹,y⁻¹) η (z,t)ₚ
    UnsignedNp,
}

/// A critical word taken apart: the form, the capped run lengths, the four
/// generator assignments and the middle block η. Reassembling reproduces the
/// original word exactly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CriticalDecomposition {
    pub form: CriticalForm,
    pub p: u32,
    pub n: u32,
    pub x: Gen,
    pub y: Gen,
    pub z: Gen,
    pub t: Gen,
    pub eta: Word,
}

impl CriticalDecomposition {
    /// Rebuilds the word this decomposition was taken from.
    pub fn reassemble(&self, ctx: &DihedralContext) -> Word {
        let m = ctx.m;
        let pos = Letter::positive;
        let neg = Letter::negative;
        match self.form {
            CriticalForm::PositivePrefix => {
                left_alt(pos(self.x), pos(self.y), m).concat(&self.eta)
            }
            CriticalForm::PositiveSuffix => {
                self.eta.concat(&right_alt(pos(self.z), pos(self.t), m))
            }
            CriticalForm::NegativePrefix => {
                left_alt(neg(self.x), neg(self.y), m).concat(&self.eta)
            }
            CriticalForm::NegativeSuffix => {
                self.eta.concat(&right_alt(neg(self.z), neg(self.t), m))
            }
            CriticalForm::UnsignedPn => left_alt(pos(self.x), pos(self.y), self.p)
                .concat(&self.eta)
                .concat(&right_alt(neg(self.z), neg(self.t), self.n)),
            CriticalForm::UnsignedNp => left_alt(neg(self.x), neg(self.y), self.n)
                .concat(&self.eta)
                .concat(&right_alt(pos(self.z), pos(self.t), self.p)),
        }
    }

    /// The image under τ. The six cases mirror the six shapes; δ renames the
    /// middle block when m is odd.
    pub fn tau(&self, ctx: &DihedralContext) -> Word {
        let m = ctx.m;
        let pos = Letter::positive;
        let neg = Letter::negative;
        let mid = delta_unchecked(ctx, &self.eta);
        match self.form {
            // ₘ(x,y) η⁺ → δ(η⁺) (t,z)ₘ
            CriticalForm::PositivePrefix => mid.concat(&right_alt(pos(self.t), pos(self.z), m)),
            // η⁺ (z,t)ₘ → ₘ(y,x) δ(η⁺)
            CriticalForm::PositiveSuffix => left_alt(pos(self.y), pos(self.x), m).concat(&mid),
            // ₘ(x⁻¹,y⁻¹) η⁻ → δ(η⁻) (t⁻¹,z⁻¹)ₘ
            CriticalForm::NegativePrefix => mid.concat(&right_alt(neg(self.t), neg(self.z), m)),
            // η⁻ (z⁻¹,t⁻¹)ₘ → ₘ(y⁻¹,x⁻¹) δ(η⁻)
            CriticalForm::NegativeSuffix => left_alt(neg(self.y), neg(self.x), m).concat(&mid),
            // ₚ(x,y) η (z⁻¹,t⁻¹)ₙ → ₙ(y⁻¹,x⁻¹) δ(η) (t,z)ₚ
            CriticalForm::UnsignedPn => left_alt(neg(self.y), neg(self.x), self.n)
                .concat(&mid)
                .concat(&right_alt(pos(self.t), pos(self.z), self.p)),
            // ₙ(x⁻¹,y⁻¹) η (z,t)ₚ → ₚ(y,x) δ(η) (t⁻¹,z⁻¹)ₙ
            CriticalForm::UnsignedNp => left_alt(pos(self.y), pos(self.x), self.p)
                .concat(&mid)
                .concat(&right_alt(neg(self.t), neg(self.z), self.n)),
        }
    }
}

fn alternates(letters: &[Letter], positive: bool) -> bool {
    letters.iter().all(|l| l.is_positive() == positive)
        && letters.windows(2).all(|w| !w[0].same_name(w[1]))
}

/// Positions at which a same-sign alternating factor of length `m` starts.
fn alternation_starts(w: &Word, m: u32, positive: bool) -> Vec<usize> {
    let m = m as usize;
    if w.len() < m {
        return Vec::new();
    }
    (0..=w.len() - m)
        .filter(|&i| alternates(&w.letters()[i..i + m], positive))
        .collect()
}

/// Tests the critical shape and returns the decomposition when it matches.
/// Foreign letters, unreduced words and p + n ≠ m all yield `None`.
pub fn critical_decompose(ctx: &DihedralContext, w: &Word) -> Option<CriticalDecomposition> {
    if ctx.check_supported(w).is_err() || !w.is_freely_reduced() {
        return None;
    }
    let v = pn(ctx, w).ok()?;
    if v.p + v.n != ctx.m {
        return None;
    }
    let m = ctx.m as usize;
    let len = w.len();
    let all_positive = w.iter().all(|l| l.is_positive());
    let all_negative = w.iter().all(|l| !l.is_positive());

    if all_positive || all_negative {
        let starts = alternation_starts(w, ctx.m, all_positive);
        // A signed critical word contains its alternating-m factor exactly
        // once, as a prefix or as a suffix.
        if starts.len() != 1 {
            return None;
        }
        let at = starts[0];
        let sign = all_positive;
        if at == 0 {
            let x = w.letter(0).name();
            let y = ctx.other(x);
            let eta = w.slice(m, len);
            // τ appends (t,z) with l[τ(w)] = z; pick z away from the name of
            // the current last letter so the output stays critical and the
            // last letter changes name.
            let z = ctx.other(w.last().unwrap().name());
            let t = ctx.other(z);
            Some(CriticalDecomposition {
                form: if sign {
                    CriticalForm::PositivePrefix
                } else {
                    CriticalForm::NegativePrefix
                },
                p: if sign { ctx.m } else { 0 },
                n: if sign { 0 } else { ctx.m },
                x,
                y,
                z,
                t,
                eta,
            })
        } else if at == len - m {
            let t = w.last().unwrap().name();
            let z = ctx.other(t);
            let eta = w.slice(0, len - m);
            // Symmetric choice: τ prepends an alternation starting with y.
            let y = ctx.other(w.first().unwrap().name());
            let x = ctx.other(y);
            Some(CriticalDecomposition {
                form: if sign {
                    CriticalForm::PositiveSuffix
                } else {
                    CriticalForm::NegativeSuffix
                },
                p: if sign { ctx.m } else { 0 },
                n: if sign { 0 } else { ctx.m },
                x,
                y,
                z,
                t,
                eta,
            })
        } else {
            None
        }
    } else {
        let p = v.p as usize;
        let n = v.n as usize;
        debug_assert!(p >= 1 && n >= 1);
        if w.letter(0).is_positive() {
            if alternates(&w.letters()[..p], true) && alternates(&w.letters()[len - n..], false) {
                let x = w.letter(0).name();
                let t = w.last().unwrap().name();
                Some(CriticalDecomposition {
                    form: CriticalForm::UnsignedPn,
                    p: v.p,
                    n: v.n,
                    x,
                    y: ctx.other(x),
                    z: ctx.other(t),
                    t,
                    eta: w.slice(p, len - n),
                })
            } else {
                None
            }
        } else if alternates(&w.letters()[..n], false) && alternates(&w.letters()[len - p..], true)
        {
            let x = w.letter(0).name();
            let t = w.last().unwrap().name();
            Some(CriticalDecomposition {
                form: CriticalForm::UnsignedNp,
                p: v.p,
                n: v.n,
                x,
                y: ctx.other(x),
                z: ctx.other(t),
                t,
                eta: w.slice(n, len - p),
            })
        } else {
            None
        }
    }
}

pub fn is_critical(ctx: &DihedralContext, w: &Word) -> bool {
    critical_decompose(ctx, w).is_some()
}

fn delta_unchecked(ctx: &DihedralContext, w: &Word) -> Word {
    if ctx.m.is_multiple_of(2) {
        w.clone()
    } else {
        w.iter()
            .map(|l| Letter::new(ctx.other(l.name()), l.is_positive()))
            .collect()
    }
}

/// The letter-renaming homomorphism used inside τ: the identity for even m,
/// the name swap for odd m. Signs are preserved.
pub fn delta(ctx: &DihedralContext, w: &Word) -> Result<Word, DihedralError> {
    ctx.check_supported(w)?;
    Ok(delta_unchecked(ctx, w))
}

/// Applies τ to a critical word. Errors on non-critical input.
pub fn tau(ctx: &DihedralContext, w: &Word) -> Result<Word, DihedralError> {
    critical_decompose(ctx, w)
        .map(|d| d.tau(ctx))
        .ok_or(DihedralError::NotCritical)
}

/// Looks for a critical suffix of `w` whose τ ends in `target.inverse()`,
/// given that appending `target` to the geodesic word `w` breaks geodesity.
/// Returns the start index of the shortest such suffix with its
/// decomposition; `None` when `w·target` is still geodesic (or on any
/// unsupported input).
pub fn critical_suffix(
    ctx: &DihedralContext,
    w: &Word,
    target: Letter,
) -> Option<(usize, CriticalDecomposition)> {
    let extended = w.push(target);
    if !extended.is_freely_reduced() {
        return None;
    }
    match classify(ctx, &extended) {
        Ok(Geodesity::NotGeodesic) => {}
        _ => return None,
    }
    for start in (0..w.len()).rev() {
        let suffix = w.slice(start, w.len());
        if let Some(d) = critical_decompose(ctx, &suffix) {
            if d.tau(ctx).last() == Some(target.inverse()) {
                return Some((start, d));
            }
        }
    }
    None
}
