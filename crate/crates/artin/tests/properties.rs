//! Property suites: algebraic identities of the word layer, the critical
//! word machinery checked on random instances, stability of sequence
//! existence under commutations and τ-moves, and cross-checks between the
//! reduction engine and the naive oracles.

use artin::dihedral::{self, DihedralContext};
use artin::oracle::{self, BallConfig};
use artin::p2g;
use artin::presentation::{Exponent, Presentation};
use artin::reducer;
use artin::rrs;
use artin::words::{Letter, Word};

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

mod common;
use common::{mixed_word, provocative_word, random_presentation, random_reduced_word};

fn p1() -> Presentation {
    Presentation::parse(include_str!("../fixtures/p1.pres")).unwrap()
}

fn letters_of(p: &Presentation) -> Vec<Letter> {
    p.generators()
        .flat_map(|g| [Letter::positive(g), Letter::negative(g)])
        .collect()
}

fn word_from_indices(p: &Presentation, idx: &[u8]) -> Word {
    let alphabet = letters_of(p);
    idx.iter()
        .map(|&i| alphabet[i as usize % alphabet.len()])
        .collect()
}

/// Cancels one adjacent inverse pair at a time in an arbitrary order.
fn cancel_in_order(w: &Word, mut order: Vec<usize>) -> Word {
    let mut letters = w.letters().to_vec();
    loop {
        let sites: Vec<usize> = (0..letters.len().saturating_sub(1))
            .filter(|&i| letters[i] == letters[i + 1].inverse())
            .collect();
        if sites.is_empty() {
            return Word::from_letters(letters);
        }
        let pick = match order.pop() {
            Some(r) => sites[r % sites.len()],
            None => sites[0],
        };
        letters.drain(pick..pick + 2);
    }
}

proptest! {
    #[test]
    fn free_reduce_is_idempotent_and_parity_preserving(idx in proptest::collection::vec(0u8..8, 0..24)) {
        let p = p1();
        let w = word_from_indices(&p, &idx);
        let r = w.free_reduce();
        prop_assert!(r.is_freely_reduced());
        prop_assert_eq!(r.free_reduce(), r.clone());
        prop_assert_eq!(r.len() % 2, w.len() % 2);
    }

    #[test]
    fn cancellation_order_does_not_matter(
        idx in proptest::collection::vec(0u8..8, 0..12),
        order in proptest::collection::vec(0usize..8, 0..12),
    ) {
        let p = p1();
        let w = word_from_indices(&p, &idx);
        prop_assert_eq!(cancel_in_order(&w, order), w.free_reduce());
    }

    #[test]
    fn inverse_involution_and_cancellation(idx in proptest::collection::vec(0u8..8, 0..16)) {
        let p = p1();
        let w = word_from_indices(&p, &idx);
        prop_assert_eq!(w.inverse().inverse(), w.clone());
        prop_assert!(w.concat(&w.inverse()).free_reduce().is_empty());
    }

    #[test]
    fn word_display_round_trips(idx in proptest::collection::vec(0u8..8, 0..16)) {
        let p = p1();
        let w = word_from_indices(&p, &idx);
        let printed = w.display(&p).to_string();
        prop_assert_eq!(Word::parse(&p, &printed).unwrap(), w);
    }

    #[test]
    fn presentation_round_trips_and_is_symmetric(choices in proptest::collection::vec(0u8..5, 6)) {
        let names = ["a", "b", "c", "d"];
        let mut text = "generators a b c d".to_string();
        let mut k = 0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                let m = [2u32, 4, 5, 6, 0][choices[k] as usize % 5];
                k += 1;
                if m > 0 {
                    text.push_str(&format!("\nm {} {} {}", names[i], names[j], m));
                }
            }
        }
        let p = Presentation::parse(&text).unwrap();
        prop_assert_eq!(Presentation::parse(&p.to_string()).unwrap(), p.clone());
        for g in p.generators() {
            for h in p.generators() {
                if g != h {
                    prop_assert_eq!(p.exponent(g, h), p.exponent(h, g));
                    prop_assert_eq!(p.commutes(g, h), p.commutes(h, g));
                }
            }
        }
    }

    #[test]
    fn rejected_exponents_are_exactly_0_1_3(m in 0u32..10) {
        let text = format!("generators a b\nm a b {m}");
        let result = Presentation::parse(&text);
        if m == 0 || m == 1 || m == 3 {
            prop_assert!(result.is_err());
        } else {
            prop_assert!(result.is_ok());
        }
    }

    /// Random 2-generated words that happen to be critical: the
    /// decomposition reproduces them and τ behaves as the involution it is.
    #[test]
    fn critical_words_round_trip_through_tau(
        idx in proptest::collection::vec(0u8..4, 2..9),
        odd in proptest::bool::ANY,
    ) {
        let m = if odd { 5 } else { 4 };
        let p = Presentation::parse(&format!("generators x y\nm x y {m}")).unwrap();
        let ctx = DihedralContext::new(
            &p,
            p.generator("x").unwrap(),
            p.generator("y").unwrap(),
        )
        .unwrap();
        let w = word_from_indices(&p, &idx);
        if let Some(d) = dihedral::critical_decompose(&ctx, &w) {
            prop_assert_eq!(d.reassemble(&ctx), w.clone());
            let t = d.tau(&ctx);
            prop_assert_eq!(dihedral::tau(&ctx, &t).unwrap(), w.clone());
            let cert = oracle::equivalence_ball(&p, &w, &t, &BallConfig {
                slack: 0,
                node_cap: 30_000,
            });
            prop_assert_eq!(cert.min_len, 0);
        }
    }
}

/// The two suffix lemmas: a critical word containing a critical subword has
/// a critical suffix with the same p and n (through the smallest suffix
/// containing the subword), and the same holds after replacing the subword
/// by its τ image.
#[test]
fn critical_subwords_yield_critical_suffixes() {
    let mut checked = 0usize;
    for m in [4u32, 5] {
        let p = Presentation::parse(&format!("generators x y\nm x y {m}")).unwrap();
        let ctx =
            DihedralContext::new(&p, p.generator("x").unwrap(), p.generator("y").unwrap())
                .unwrap();
        let alphabet = letters_of(&p);
        let mut rng = StdRng::seed_from_u64(71 + m as u64);
        for _ in 0..40_000 {
            let len = rng.gen_range(m as usize..=8);
            let w: Word = (0..len)
                .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
                .collect();
            let Some(outer) = dihedral::critical_decompose(&ctx, &w) else {
                continue;
            };
            for i in 0..w.len() {
                for j in (i + 1)..=w.len() {
                    if i == 0 && j == w.len() {
                        continue;
                    }
                    let sub = w.slice(i, j);
                    let Some(inner) = dihedral::critical_decompose(&ctx, &sub) else {
                        continue;
                    };
                    checked += 1;
                    // Smallest suffix containing the subword: starts at i.
                    let holder = w.slice(i, w.len());
                    let found = (i..w.len()).any(|s| {
                        dihedral::critical_decompose(&ctx, &holder.slice(s - i, holder.len()))
                            .is_some_and(|d| d.p == outer.p && d.n == outer.n)
                    });
                    assert!(
                        found,
                        "no critical suffix with matching p/n in {} (sub {})",
                        w.display(&p),
                        sub.display(&p)
                    );

                    // Replace the subword by its τ image and look again in
                    // the smallest suffix containing the replacement.
                    let replaced = w
                        .slice(0, i)
                        .concat(&inner.tau(&ctx))
                        .concat(&w.slice(j, w.len()));
                    let holder2 = replaced.slice(i, replaced.len());
                    let found2 = (0..holder2.len()).any(|s| {
                        dihedral::critical_decompose(&ctx, &holder2.slice(s, holder2.len()))
                            .is_some_and(|d| d.p == outer.p && d.n == outer.n)
                    });
                    assert!(
                        found2,
                        "no critical suffix after τ-replacement in {}",
                        replaced.display(&p)
                    );
                }
            }
        }
    }
    assert!(checked > 100, "too few instances exercised: {checked}");
}

/// Prefix/suffix coherence of the extended move: a P2G critical prefix in
/// the same pseudo-generators yields the same first letter of the core's τ
/// image; a P2G critical suffix yields the same β and produced letter.
#[test]
fn p2g_prefix_suffix_coherence() {
    let mut rng = StdRng::seed_from_u64(0xc0c0);
    let mut prefix_hits = 0usize;
    let mut suffix_hits = 0usize;
    for trial in 0..60_000 {
        let p = if trial % 2 == 0 { p1() } else {
            Presentation::parse(include_str!("../fixtures/p2.pres")).unwrap()
        };
        let w = mixed_word(&p, &mut rng);
        let Some((d, c)) = p2g::is_p2g_critical(&p, &w) else {
            continue;
        };
        let ctx = d.context();
        let tau_hat = c.tau(&ctx);
        for cut in 2..w.len() {
            let prefix = w.slice(0, cut);
            if let Some((pd, pc)) = p2g::is_p2g_critical(&p, &prefix) {
                if (pd.a, pd.b) == (d.a, d.b) {
                    prefix_hits += 1;
                    assert_eq!(
                        tau_hat.first(),
                        pc.tau(&ctx).first(),
                        "prefix coherence fails on {}",
                        w.display(&p)
                    );
                }
            }
            let suffix = w.slice(w.len() - cut, w.len());
            if let Some((sd, sc)) = p2g::is_p2g_critical(&p, &suffix) {
                if (sd.a, sd.b) == (d.a, d.b) {
                    suffix_hits += 1;
                    assert_eq!(sd.beta, d.beta, "β mismatch on {}", w.display(&p));
                    assert_eq!(
                        sc.tau(&ctx).last(),
                        tau_hat.last(),
                        "produced letter mismatch on {}",
                        w.display(&p)
                    );
                }
            }
        }
    }
    assert!(
        prefix_hits > 50 && suffix_hits > 50,
        "coherence corollary under-exercised: {prefix_hits}/{suffix_hits}"
    );
}

/// The rearrangement α·ρ·ŵ·β represents the same element as the word it
/// came from, and the extended move preserves both element and length.
#[test]
fn p2g_rearrangement_and_move_are_sound() {
    let mut rng = StdRng::seed_from_u64(0xa11a);
    let mut moves = 0usize;
    for _ in 0..4_000 {
        let p = random_presentation(&mut rng);
        let w = mixed_word(&p, &mut rng);
        let Some((a, b)) = p2g::pseudo_generators(&p, &w) else {
            continue;
        };
        let Some(d) = p2g::recognize(&p, &w, a, b) else {
            continue;
        };
        assert_eq!(d.position_map.len(), w.len());
        let rearranged = d.rearranged();
        assert_eq!(rearranged.len(), w.len());
        assert!(
            reducer::equal(&p, &w, &rearranged),
            "rearrangement changed the element of {}",
            w.display(&p)
        );
        if let Ok((out, produced)) = p2g::tau_move(&p, &w) {
            moves += 1;
            assert_eq!(out.len(), w.len());
            if d.beta.is_empty() {
                assert_eq!(out.last(), Some(produced));
            }
            assert!(
                produced.essentially_different(d.hat.last().unwrap()),
                "produced letter must change name"
            );
            assert!(reducer::equal(&p, &w, &out));
        }
    }
    assert!(moves > 100, "too few moves exercised: {moves}");
}

/// Applying a found sequence is sound: two letters shorter and the same
/// element, certified by the rewrite ball.
#[test]
fn rrs_application_is_sound() {
    let mut rng = StdRng::seed_from_u64(0x50da);
    let mut applied = 0usize;
    for _ in 0..4_000 {
        let p = random_presentation(&mut rng);
        let w = mixed_word(&p, &mut rng);
        let Some(r) = rrs::find_any_rrs(&p, &w) else {
            continue;
        };
        applied += 1;
        let (out, trace) = rrs::apply_rrs(&p, &w, &r).unwrap();
        assert_eq!(out.len() + 2, w.len());
        assert_eq!(trace.replay(&w).unwrap(), out);
        let cert = oracle::equivalence_ball(
            &p,
            &w,
            &out,
            &BallConfig {
                slack: 2,
                node_cap: 60_000,
            },
        );
        assert_eq!(cert.min_len, 0, "ball must certify {}", w.display(&p));
    }
    assert!(applied > 200, "too few sequences exercised: {applied}");
}

/// Swapping one adjacent commuting pair preserves sequence existence and
/// the reduced length.
#[test]
fn rrs_survives_commutation_swaps() {
    let mut rng = StdRng::seed_from_u64(0x5a9);
    let mut swapped = 0usize;
    for _ in 0..8_000 {
        let p = random_presentation(&mut rng);
        let w = mixed_word(&p, &mut rng);
        if rrs::find_any_rrs(&p, &w).is_none() {
            continue;
        }
        for i in 0..w.len() - 1 {
            let (x, y) = (w.letter(i), w.letter(i + 1));
            if x.same_name(y) || !p.commutes(x.name(), y.name()) {
                continue;
            }
            let mut letters = w.letters().to_vec();
            letters.swap(i, i + 1);
            let swapped_word = Word::from_letters(letters);
            if !swapped_word.is_freely_reduced() {
                continue;
            }
            swapped += 1;
            assert!(
                rrs::find_any_rrs(&p, &swapped_word).is_some(),
                "sequence lost after swapping {} at {i}",
                w.display(&p)
            );
            let (a, _) = reducer::reduce(&p, &w);
            let (b, _) = reducer::reduce(&p, &swapped_word);
            assert_eq!(a.len(), b.len());
            assert!(reducer::equal(&p, &a, &b));
        }
    }
    assert!(swapped > 200, "too few swaps exercised: {swapped}");
}

/// Replacing a 2-generated critical factor left of the tail by its τ image
/// preserves sequence existence and the reduced length.
#[test]
fn rrs_survives_tau_replacements() {
    let mut rng = StdRng::seed_from_u64(0x7a0);
    let mut replaced = 0usize;
    for _ in 0..3_000 {
        let p = random_presentation(&mut rng);
        let w = provocative_word(&p, &mut rng);
        let Some(r) = rrs::find_optimal_rrs(&p, &w) else {
            continue;
        };
        for (g, h, m) in p.finite_pairs() {
            if m < 4 {
                continue;
            }
            let ctx = DihedralContext::from_parts(g, h, m).unwrap();
            for i in 0..w.len() {
                // Factors disjoint from the tail.
                for j in (i + 2)..=r.tail_start {
                    let factor = w.slice(i, j);
                    let Some(d) = dihedral::critical_decompose(&ctx, &factor) else {
                        continue;
                    };
                    let replaced_word = w
                        .slice(0, i)
                        .concat(&d.tau(&ctx))
                        .concat(&w.slice(j, w.len()));
                    if !replaced_word.is_freely_reduced() {
                        continue;
                    }
                    replaced += 1;
                    assert!(
                        rrs::find_any_rrs(&p, &replaced_word).is_some(),
                        "sequence lost after τ on [{i},{j}) of {}",
                        w.display(&p)
                    );
                    let (a, _) = reducer::reduce(&p, &w);
                    let (b, _) = reducer::reduce(&p, &replaced_word);
                    assert_eq!(a.len(), b.len());
                    assert!(reducer::equal(&p, &a, &b));
                }
            }
        }
    }
    assert!(replaced > 100, "too few replacements exercised: {replaced}");
}

/// Reductions never lengthen: replaying the trace one event at a time stays
/// within the input length.
#[test]
fn reduction_traces_never_lengthen() {
    let mut rng = StdRng::seed_from_u64(0x10e);
    for _ in 0..2_000 {
        let p = random_presentation(&mut rng);
        let w = mixed_word(&p, &mut rng);
        let (out, trace) = reducer::reduce(&p, &w);
        let mut prefix = rrs::ReductionTrace::default();
        for ev in &trace.events {
            prefix.events.push(ev.clone());
            let stage = prefix.replay(&w).unwrap();
            assert!(stage.len() <= w.len(), "lengthened on {}", w.display(&p));
        }
        assert_eq!(prefix.replay(&w).unwrap(), out);
    }
}

/// The abelianized image is invariant under reduction, and reductions on
/// commutation-only presentations match the piling oracle's lengths.
#[test]
fn reduction_respects_abelianization_and_piling() {
    let mut rng = StdRng::seed_from_u64(0xab);
    for _ in 0..2_000 {
        let p = random_presentation(&mut rng);
        let w = random_reduced_word(&p, &mut rng, 10);
        let (out, _) = reducer::reduce(&p, &w);
        assert_eq!(
            reducer::abelianized_image(&p, &w).sums,
            reducer::abelianized_image(&p, &out).sums
        );
    }

    let raag = Presentation::parse(include_str!("../fixtures/raag.pres")).unwrap();
    for _ in 0..2_000 {
        let w = random_reduced_word(&raag, &mut rng, 10);
        let (out, _) = reducer::reduce(&raag, &w);
        let piled = oracle::commutation_oracle(&raag, &w).unwrap();
        assert_eq!(out.len(), piled.len(), "on {}", w.display(&raag));
        assert!(reducer::equal(&raag, &out, &piled));
    }
}

/// Closure members are pairwise equivalent geodesics of equal length, and
/// closures agree with reduction-based equality.
#[test]
fn closures_are_classes() {
    let mut rng = StdRng::seed_from_u64(0xc105);
    for _ in 0..300 {
        let p = random_presentation(&mut rng);
        let raw = mixed_word(&p, &mut rng);
        let (w, _) = reducer::reduce(&p, &raw);
        let class = reducer::geodesic_closure(&p, &w, 5_000);
        for member in class.members.iter().take(12) {
            assert_eq!(member.len(), w.len());
            assert!(reducer::is_geodesic(&p, member));
            assert!(reducer::equal(&p, member, &w));
        }
    }
}

/// Exhaustive self-consistency over a three-generator presentation mixing
/// exponents 4, 5 and 2: a freely reduced word passes the geodesic test
/// exactly when reduction cannot shorten it, reduction output always passes
/// the test, and lengths drop by even amounts only.
#[test]
fn geodesic_test_matches_reduction_exhaustively() {
    let p = Presentation::parse("generators a b c\nm a b 4\nm b c 5\nm a c 2").unwrap();
    let alphabet = letters_of(&p);
    let mut stack: Vec<Letter> = Vec::new();
    let mut count = 0usize;
    let mut shortened = 0usize;

    fn walk(
        p: &Presentation,
        alphabet: &[Letter],
        stack: &mut Vec<Letter>,
        max_len: usize,
        count: &mut usize,
        shortened: &mut usize,
    ) {
        if stack.len() >= max_len {
            return;
        }
        for &l in alphabet {
            if stack.last() == Some(&l.inverse()) {
                continue;
            }
            stack.push(l);
            let w = Word::from_letters(stack.clone());
            *count += 1;
            let geodesic = reducer::is_geodesic(p, &w);
            let (out, trace) = reducer::reduce(p, &w);
            assert_eq!(
                geodesic,
                out.len() == w.len(),
                "membership and reduction disagree on {}",
                w.display(p)
            );
            assert_eq!(out.len() % 2, w.len() % 2);
            assert!(reducer::is_geodesic(p, &out));
            assert_eq!(trace.replay(&w).unwrap(), out);
            if !geodesic {
                *shortened += 1;
            }
            walk(p, alphabet, stack, max_len, count, shortened);
            stack.pop();
        }
    }

    walk(&p, &alphabet, &mut stack, 7, &mut count, &mut shortened);
    let expected: usize = (0..7).map(|k| 6 * 5usize.pow(k)).sum();
    assert_eq!(count, expected);
    assert!(shortened > 500, "too few non-geodesics: {shortened}");
}

/// Ball searches on tiny free-group instances agree with free reduction.
#[test]
fn ball_matches_free_reduction_without_relations() {
    let p = Presentation::parse("generators a b").unwrap();
    let mut rng = StdRng::seed_from_u64(0xf4ee);
    for _ in 0..200 {
        let w = random_reduced_word(&p, &mut rng, 6);
        let ball = oracle::bfs_min_length(&p, &w, &BallConfig::default());
        // A freely reduced word in a free group is already geodesic.
        assert_eq!(ball.min_len, w.len());
        assert!(p.exponent(
            p.generator("a").unwrap(),
            p.generator("b").unwrap()
        ) == Exponent::Infinity);
    }
}
