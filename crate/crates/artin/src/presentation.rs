//! Group presentations: a generator list plus a symmetric exponent table.
//!
//! A presentation assigns to every unordered pair of distinct generators an
//! exponent `m` in `{2, 4, 5, 6, ...} ∪ {∞}`: the pair then satisfies the
//! relation equating the two alternating products of length `m` (`m = 2` is a
//! plain commutation, `m = ∞` means no relation). Exponents 0, 1 and 3 are
//! rejected at ingestion; the reduction machinery in this crate is only
//! valid without length-3 relations.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// A generator, indexing into the owning [`Presentation`]'s name table.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Gen(pub(crate) u16);

impl Gen {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Relation length for a generator pair.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Exponent {
    Finite(u32),
    Infinity,
}

impl Exponent {
    pub fn is_finite(self) -> bool {
        matches!(self, Exponent::Finite(_))
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Exponent::Finite(m) => Some(m),
            Exponent::Infinity => None,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(m) => write!(f, "{m}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: duplicate generator `{name}`")]
    DuplicateGenerator { line: usize, name: String },
    #[error("line {line}: unknown generator `{name}`")]
    UnknownGenerator { line: usize, name: String },
    #[error("line {line}: exponent for `{g}`,`{h}` given twice")]
    DuplicatePair { line: usize, g: String, h: String },
    #[error("line {line}: not 3-free (exponent 3 for `{g}`,`{h}`)")]
    NotThreeFree { line: usize, g: String, h: String },
    #[error("line {line}: exponent {value} is below 2")]
    ExponentTooSmall { line: usize, value: u32 },
    #[error("line {line}: `{name}` paired with itself")]
    SelfPair { line: usize, name: String },
    #[error("generator `{name}` is not declared")]
    UndeclaredGenerator { name: String },
    #[error("exponent of a generator with itself is undefined")]
    DiagonalExponent,
}

/// A validated 3-free presentation. Immutable once built, so it can be
/// shared freely between concurrent readers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Presentation {
    names: Vec<String>,
    by_name: HashMap<String, Gen>,
    // Flattened strict upper triangle, row-major: entry for i < j lives at
    // i*(2n-i-1)/2 + (j-i-1).
    table: Vec<Exponent>,
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Presentation {
    /// Parses the presentation file format: a `generators` line followed by
    /// `m <g> <h> <k|inf>` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, PresentationError> {
        let mut names: Vec<String> = Vec::new();
        let mut by_name: HashMap<String, Gen> = HashMap::new();
        let mut table: Vec<Exponent> = Vec::new();
        let mut seen_pair: Vec<bool> = Vec::new();
        let mut header_done = false;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let mut tokens = content.split_whitespace();
            let Some(head) = tokens.next() else { continue };

            if !header_done {
                if head != "generators" {
                    return Err(PresentationError::Syntax {
                        line,
                        msg: format!("expected `generators`, found `{head}`"),
                    });
                }
                for tok in tokens {
                    if !valid_name(tok) {
                        return Err(PresentationError::Syntax {
                            line,
                            msg: format!("invalid generator name `{tok}`"),
                        });
                    }
                    if by_name.contains_key(tok) {
                        return Err(PresentationError::DuplicateGenerator {
                            line,
                            name: tok.to_string(),
                        });
                    }
                    by_name.insert(tok.to_string(), Gen(names.len() as u16));
                    names.push(tok.to_string());
                }
                if names.is_empty() {
                    return Err(PresentationError::Syntax {
                        line,
                        msg: "at least one generator is required".to_string(),
                    });
                }
                let n = names.len();
                table = vec![Exponent::Infinity; n * (n.saturating_sub(1)) / 2];
                seen_pair = vec![false; table.len()];
                header_done = true;
                continue;
            }

            if head != "m" {
                return Err(PresentationError::Syntax {
                    line,
                    msg: format!("expected `m`, found `{head}`"),
                });
            }
            let (g_tok, h_tok, val_tok) = match (tokens.next(), tokens.next(), tokens.next()) {
                (Some(g), Some(h), Some(v)) => (g, h, v),
                _ => {
                    return Err(PresentationError::Syntax {
                        line,
                        msg: "expected `m <g> <h> <exponent|inf>`".to_string(),
                    })
                }
            };
            if let Some(extra) = tokens.next() {
                return Err(PresentationError::Syntax {
                    line,
                    msg: format!("unexpected trailing token `{extra}`"),
                });
            }
            let g = *by_name
                .get(g_tok)
                .ok_or_else(|| PresentationError::UnknownGenerator {
                    line,
                    name: g_tok.to_string(),
                })?;
            let h = *by_name
                .get(h_tok)
                .ok_or_else(|| PresentationError::UnknownGenerator {
                    line,
                    name: h_tok.to_string(),
                })?;
            if g == h {
                return Err(PresentationError::SelfPair {
                    line,
                    name: g_tok.to_string(),
                });
            }
            let exp = if val_tok == "inf" {
                Exponent::Infinity
            } else {
                let value: u32 = val_tok.parse().map_err(|_| PresentationError::Syntax {
                    line,
                    msg: format!("invalid exponent `{val_tok}`"),
                })?;
                if value == 3 {
                    return Err(PresentationError::NotThreeFree {
                        line,
                        g: g_tok.to_string(),
                        h: h_tok.to_string(),
                    });
                }
                if value < 2 {
                    return Err(PresentationError::ExponentTooSmall { line, value });
                }
                Exponent::Finite(value)
            };
            let slot = pair_slot(names.len(), g, h);
            if seen_pair[slot] {
                return Err(PresentationError::DuplicatePair {
                    line,
                    g: g_tok.to_string(),
                    h: h_tok.to_string(),
                });
            }
            seen_pair[slot] = true;
            table[slot] = exp;
        }

        if !header_done {
            return Err(PresentationError::Syntax {
                line: 1,
                msg: "missing `generators` line".to_string(),
            });
        }
        Ok(Presentation {
            names,
            by_name,
            table,
        })
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn generators(&self) -> impl Iterator<Item = Gen> + '_ {
        (0..self.names.len()).map(|i| Gen(i as u16))
    }

    pub fn name(&self, g: Gen) -> &str {
        &self.names[g.index()]
    }

    pub fn generator(&self, name: &str) -> Option<Gen> {
        self.by_name.get(name).copied()
    }

    /// The symmetric exponent of a pair of distinct generators.
    ///
    /// Panics if `g == h`; the diagonal is undefined.
    pub fn exponent(&self, g: Gen, h: Gen) -> Exponent {
        assert_ne!(g, h, "exponent of a generator with itself is undefined");
        self.table[pair_slot(self.names.len(), g, h)]
    }

    /// Name-based variant of [`exponent`](Self::exponent) that reports
    /// usage errors instead of panicking.
    pub fn exponent_checked(&self, g: &str, h: &str) -> Result<Exponent, PresentationError> {
        let g = self
            .generator(g)
            .ok_or_else(|| PresentationError::UndeclaredGenerator {
                name: g.to_string(),
            })?;
        let h = self
            .generator(h)
            .ok_or_else(|| PresentationError::UndeclaredGenerator {
                name: h.to_string(),
            })?;
        if g == h {
            return Err(PresentationError::DiagonalExponent);
        }
        Ok(self.exponent(g, h))
    }

    /// True iff `g = h` or the pair commutes (`m = 2`). Powers of a single
    /// generator reorder freely, which is why the diagonal counts as
    /// commuting.
    pub fn commutes(&self, g: Gen, h: Gen) -> bool {
        g == h || self.exponent(g, h) == Exponent::Finite(2)
    }

    /// True iff every finite exponent equals 2.
    pub fn is_commutation_only(&self) -> bool {
        self.table
            .iter()
            .all(|e| matches!(e, Exponent::Infinity | Exponent::Finite(2)))
    }

    /// Finite-exponent pairs `(g, h, m)` with `g < h`.
    pub fn finite_pairs(&self) -> Vec<(Gen, Gen, u32)> {
        let mut out = Vec::new();
        for g in self.generators() {
            for h in self.generators() {
                if g < h {
                    if let Exponent::Finite(m) = self.exponent(g, h) {
                        out.push((g, h, m));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Presentation {
    /// Canonical file form: parsing it back yields an equal presentation.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "generators")?;
        for name in &self.names {
            write!(f, " {name}")?;
        }
        writeln!(f)?;
        for (g, h, m) in self.finite_pairs() {
            writeln!(f, "m {} {} {}", self.name(g), self.name(h), m)?;
        }
        Ok(())
    }
}

fn pair_slot(n: usize, g: Gen, h: Gen) -> usize {
    let (i, j) = if g.index() < h.index() {
        (g.index(), h.index())
    } else {
        (h.index(), g.index())
    };
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1() -> Presentation {
        Presentation::parse(include_str!("../fixtures/p1.pres")).unwrap()
    }

    #[test]
    fn parses_p1() {
        let p = p1();
        assert_eq!(p.generator_count(), 4);
        let a = p.generator("a").unwrap();
        let b = p.generator("b").unwrap();
        let c = p.generator("c").unwrap();
        let d = p.generator("d").unwrap();
        assert_eq!(p.exponent(a, b), Exponent::Finite(4));
        assert_eq!(p.exponent(b, a), Exponent::Finite(4));
        assert_eq!(p.exponent(b, c), Exponent::Finite(5));
        assert_eq!(p.exponent(c, d), Exponent::Finite(2));
    }

    #[test]
    fn unlisted_pair_is_free() {
        let p = Presentation::parse("generators a b").unwrap();
        let a = p.generator("a").unwrap();
        let b = p.generator("b").unwrap();
        assert_eq!(p.exponent(a, b), Exponent::Infinity);
    }

    #[test]
    fn rejects_braid_relation() {
        let err = Presentation::parse("generators a b\nm a b 3").unwrap_err();
        assert!(matches!(err, PresentationError::NotThreeFree { line: 2, .. }));
        assert!(err.to_string().contains("not 3-free"));
    }

    #[test]
    fn rejects_small_exponents() {
        for k in [0u32, 1] {
            let err = Presentation::parse(&format!("generators a b\nm a b {k}")).unwrap_err();
            assert!(matches!(err, PresentationError::ExponentTooSmall { .. }));
        }
    }

    #[test]
    fn rejects_duplicates_and_diagonal() {
        assert!(matches!(
            Presentation::parse("generators a a").unwrap_err(),
            PresentationError::DuplicateGenerator { .. }
        ));
        assert!(matches!(
            Presentation::parse("generators a b\nm a b 4\nm b a 4").unwrap_err(),
            PresentationError::DuplicatePair { .. }
        ));
        assert!(matches!(
            Presentation::parse("generators a b\nm a a 4").unwrap_err(),
            PresentationError::SelfPair { .. }
        ));
        assert!(matches!(
            Presentation::parse("generators a b\nm a e 4").unwrap_err(),
            PresentationError::UnknownGenerator { .. }
        ));
    }

    #[test]
    fn exponent_checked_reports_usage_errors() {
        let p = p1();
        assert_eq!(p.exponent_checked("a", "b"), Ok(Exponent::Finite(4)));
        assert_eq!(
            p.exponent_checked("a", "a"),
            Err(PresentationError::DiagonalExponent)
        );
        assert!(matches!(
            p.exponent_checked("a", "q"),
            Err(PresentationError::UndeclaredGenerator { .. })
        ));
    }

    #[test]
    fn commutes_follows_the_table_and_the_diagonal_convention() {
        let p = p1();
        let a = p.generator("a").unwrap();
        let b = p.generator("b").unwrap();
        let c = p.generator("c").unwrap();
        assert!(p.commutes(a, c));
        assert!(!p.commutes(a, b));
        assert!(p.commutes(a, a));
    }

    #[test]
    fn display_round_trips() {
        let p = p1();
        let again = Presentation::parse(&p.to_string()).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn explicit_inf_allowed() {
        let p = Presentation::parse("generators a b c\nm a b inf\nm b c 2").unwrap();
        let a = p.generator("a").unwrap();
        let b = p.generator("b").unwrap();
        assert_eq!(p.exponent(a, b), Exponent::Infinity);
    }
}
