use super::*;
use crate::base_relations::build_validity;
use proptest::prelude::*;

fn w1(bits: &str) -> Vec<Symbol> {
    bits.bytes().map(|b| Symbol::from(b - b'0')).collect()
}

fn pairs(spec: &[(u8, u8)]) -> Vec<Symbol> {
    spec.iter().map(|&(a, b)| pack_symbol(&[a, b])).collect()
}

fn single(word: &str) -> Dfa {
    regex_to_dfa(word, 1).unwrap()
}

#[test]
fn boolean_combine_examples() {
    let valid = build_validity(1);
    let both = Dfa::boolean_combine(BoolOp::And, &valid, &valid).unwrap();
    assert!(both.equivalent(&valid).unwrap());

    let rest = Dfa::boolean_combine(BoolOp::Minus, &Dfa::universal(1), &valid).unwrap();
    assert!(rest.accepts(&w1("11")));
    assert!(!rest.accepts(&w1("101")));

    let err = Dfa::boolean_combine(BoolOp::Or, &valid, &build_validity(2)).unwrap_err();
    assert_eq!(err, AutomatonError::TrackMismatch { left: 1, right: 2 });
}

#[test]
fn xor_of_equal_languages_is_empty() {
    let valid = build_validity(2);
    let x = Dfa::boolean_combine(BoolOp::Xor, &valid, &valid).unwrap();
    assert!(x.is_empty_language());
}

#[test]
fn complement_examples() {
    let valid = build_validity(1);
    assert!(valid.complement().complement().equivalent(&valid).unwrap());
    assert!(Dfa::empty(1).complement().accepts(&[]));
    assert!(valid.complement().accepts(&w1("0110")));
}

#[test]
fn minimize_is_idempotent_and_counts_the_sink() {
    let shift = regex_to_dfa("([0,0]|[0,1][1,1]*[1,0])*", 2).unwrap();
    let once = shift.minimize();
    assert_eq!(once.minimize(), once);
    assert_eq!(once.live_state_count(), 2);
    assert_eq!(once.num_states(), 3);
}

#[test]
fn concat_examples() {
    let a = single("101");
    let zeros = single("0*");
    let c = Dfa::concat(&a, &zeros).unwrap();
    assert!(c.accepts(&w1("10100")));
    assert!(c.accepts(&w1("101")));
    assert!(!c.accepts(&w1("0101")));

    let eps = single("()");
    assert!(Dfa::concat(&eps, &zeros).unwrap().equivalent(&zeros).unwrap());
    assert!(Dfa::concat(&a, &build_validity(2)).is_err());
}

#[test]
fn regex_examples() {
    let shift = regex_to_dfa("([0,0]|[0,1][1,1]*[1,0])*", 2).unwrap();
    assert!(shift.accepts(&pairs(&[(0, 1), (1, 0)])));
    let even0 = single("(00)*");
    assert!(even0.accepts(&w1("0000")));
    assert!(!even0.accepts(&w1("000")));
    assert!(single("0*").accepts(&[]));
}

#[test]
fn regex_errors_report_position() {
    match regex_to_dfa("([0,1]|[1,0]", 2) {
        Err(AutomatonError::Regex { pos, .. }) => assert_eq!(pos, 12),
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(regex_to_dfa("[0,1,1]", 2), Err(AutomatonError::Regex { .. })));
    assert!(matches!(regex_to_dfa("0 2", 1), Err(AutomatonError::Regex { pos: 2, .. })));
}

#[test]
fn equivalence_examples() {
    let v = build_validity(1);
    assert!(v.equivalent(&v).unwrap());
    assert!(!v.equivalent(&Dfa::universal(1)).unwrap());
    assert!(v.equivalent(&build_validity(2)).is_err());
}

#[test]
fn accepts_empty_word_iff_initial_final() {
    for d in [Dfa::universal(2), Dfa::empty(2), build_validity(3)] {
        assert_eq!(d.accepts(&[]), d.is_final(d.initial()));
    }
}

#[test]
fn normalize_examples() {
    let only = single("101");
    let norm = only.normalize_leading_zeros();
    for w in ["101", "0101", "00101"] {
        assert!(norm.accepts(&w1(w)), "{w}");
    }
    assert!(!norm.accepts(&w1("1010")));
    assert_eq!(norm.normalize_leading_zeros(), norm);
    assert!(Dfa::empty(1).normalize_leading_zeros().equivalent(&Dfa::empty(1)).unwrap());

    // stripping works too: a language holding only 00101 also gains 101
    let padded = single("00101").normalize_leading_zeros();
    assert!(padded.accepts(&w1("101")));
    assert!(padded.equivalent(&norm).unwrap());
}

#[test]
fn enumerate_examples() {
    let valid = build_validity(1);
    let words = valid.enumerate_accepted(2);
    let expected: Vec<Vec<Symbol>> =
        ["", "0", "1", "00", "01", "10"].iter().map(|w| w1(w)).collect();
    assert_eq!(words, expected);
    assert!(Dfa::empty(2).enumerate_accepted(5).is_empty());
}

#[test]
fn shift_projection_matches_brute_force() {
    let shift = regex_to_dfa("([0,0]|[0,1][1,1]*[1,0])*", 2)
        .unwrap()
        .intersect(&build_validity(2))
        .unwrap();
    // project away x: the remaining y are the shift images x0
    let ys = shift.project(0);
    for len in 0..=8usize {
        for bits in 0..1u32 << len {
            let y: Vec<u8> = (0..len).rev().map(|i| ((bits >> i) & 1) as u8).collect();
            let expected = crate::zeckendorf::is_valid(&y) && y.last().is_none_or(|&d| d == 0);
            let word: Vec<Symbol> = y.iter().map(|&d| Symbol::from(d)).collect();
            assert_eq!(ys.accepts(&word), expected, "{y:?}");
        }
    }
}

#[test]
fn text_format_round_trip_and_layout() {
    let shift = regex_to_dfa("([0,0]|[0,1][1,1]*[1,0])*", 2).unwrap();
    let text = shift.to_text();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("tracks 2"));
    assert_eq!(lines.next(), Some("states 3"));
    assert_eq!(lines.next(), Some("initial 0"));
    assert_eq!(lines.next(), Some("final 0"));
    assert_eq!(lines.next(), Some("t 0 00 0"));
    assert_eq!(lines.next(), Some("t 0 01 1"));
    assert_eq!(Dfa::from_text(&text).unwrap(), shift.without_labels());

    let zero_tracks = Dfa::universal(0);
    assert_eq!(Dfa::from_text(&zero_tracks.to_text()).unwrap(), zero_tracks);
}

#[test]
fn text_format_rejects_partial_tables() {
    let text = "tracks 1\nstates 1\ninitial 0\nfinal 0\nt 0 0 0\n";
    assert!(matches!(Dfa::from_text(text), Err(AutomatonError::Malformed(_))));
    let text = "tracks 1\nstates 1\ninitial 0\nfinal 3\n";
    assert!(matches!(Dfa::from_text(text), Err(AutomatonError::Parse { line: 4, .. })));
}

#[test]
fn dot_export_mentions_every_live_state() {
    let shift = regex_to_dfa("([0,0]|[0,1][1,1]*[1,0])*", 2).unwrap();
    let dot = shift.to_dot("shift");
    assert!(dot.contains("0 [shape=doublecircle]"));
    assert!(dot.contains("1 [shape=circle]"));
    assert!(dot.contains("0 -> 1 [label=\"[01]\"]"));
}

#[test]
fn permute_and_align_preserve_meaning() {
    let lt_like = regex_to_dfa("[0,0]*[0,1]([0,0]|[0,1]|[1,0]|[1,1])*", 2).unwrap().with_labels(["x", "y"]);
    let swapped = lt_like.permute_tracks(&[1, 0]);
    assert_eq!(swapped.labels().unwrap(), ["y", "x"]);
    assert!(swapped.accepts(&pairs(&[(1, 0)])));
    assert!(!swapped.accepts(&pairs(&[(0, 1)])));

    let wide = lt_like.align_to(&["a".into(), "x".into(), "y".into()]);
    assert!(wide.accepts(&[pack_symbol(&[1, 0, 1])]));
    assert!(!wide.accepts(&[pack_symbol(&[1, 1, 0])]));
}

fn arb_dfa(tracks: usize) -> impl Strategy<Value = Dfa> {
    (1usize..=6).prop_flat_map(move |n| {
        let sigma = 1usize << tracks;
        (
            proptest::collection::vec(0..n as u32, n * sigma),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(delta, finals)| Dfa::from_parts(tracks, 0, finals, delta).unwrap())
    })
}

/// Visit every word up to `max_len`, threading the current state of each
/// automaton, and check `pred` on the acceptance bits.
fn all_words(autos: &[&Dfa], max_len: usize, pred: &dyn Fn(&[bool]) -> bool) -> bool {
    fn rec(autos: &[&Dfa], states: &[State], left: usize, pred: &dyn Fn(&[bool]) -> bool) -> bool {
        let acc: Vec<bool> = autos.iter().zip(states).map(|(a, &q)| a.is_final(q)).collect();
        if !pred(&acc) {
            return false;
        }
        if left == 0 {
            return true;
        }
        (0..autos[0].symbol_count() as Symbol).all(|s| {
            let next: Vec<State> = autos.iter().zip(states).map(|(a, &q)| a.next(q, s)).collect();
            rec(autos, &next, left - 1, pred)
        })
    }
    let init: Vec<State> = autos.iter().map(|a| a.initial()).collect();
    rec(autos, &init, max_len, pred)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn intersection_matches_pointwise_and(a in arb_dfa(2), b in arb_dfa(2)) {
        let c = Dfa::boolean_combine(BoolOp::And, &a, &b).unwrap();
        prop_assert!(all_words(&[&a, &b, &c], 10, &|x| x[2] == (x[0] && x[1])));
    }

    #[test]
    fn union_and_minus_match_pointwise(a in arb_dfa(1), b in arb_dfa(1)) {
        let u = Dfa::boolean_combine(BoolOp::Or, &a, &b).unwrap();
        let m = Dfa::boolean_combine(BoolOp::Minus, &a, &b).unwrap();
        prop_assert!(all_words(&[&a, &b, &u, &m], 10, &|x| x[2] == (x[0] || x[1]) && x[3] == (x[0] && !x[1])));
    }

    #[test]
    fn minimization_preserves_language_and_is_idempotent(a in arb_dfa(2)) {
        let m = a.minimize();
        prop_assert!(m.num_states() <= a.num_states());
        prop_assert_eq!(m.minimize(), m.clone());
        prop_assert!(all_words(&[&a, &m], 8, &|x| x[0] == x[1]));
    }

    #[test]
    fn canonical_form_is_unique(a in arb_dfa(1)) {
        // a padded copy with an unreachable junk state has the same language
        let n = a.num_states();
        let sigma = a.symbol_count();
        let mut delta: Vec<State> =
            (0..n * sigma).map(|i| a.next((i / sigma) as State, (i % sigma) as Symbol)).collect();
        delta.extend(std::iter::repeat_n(0, sigma));
        let mut finals: Vec<bool> = (0..n).map(|q| a.is_final(q as State)).collect();
        finals.push(true);
        let b = Dfa::from_parts(1, a.initial(), finals, delta).unwrap();
        prop_assert_eq!(a.minimize().to_text(), b.minimize().to_text());
    }

    #[test]
    fn projection_matches_brute_force(a in arb_dfa(2)) {
        let p = a.project(1);
        for len in 0..=8usize {
            for bits in 0..1u32 << len {
                let w: Vec<u8> = (0..len).rev().map(|i| ((bits >> i) & 1) as u8).collect();
                let stripped: Vec<u8> = w.iter().copied().skip_while(|&d| d == 0).collect();
                // zero-reachable states are all reached within 6 zero steps
                let expected = (0..=6usize).any(|pad| {
                    let mut kept = vec![0u8; pad];
                    kept.extend(&stripped);
                    let l = kept.len();
                    (0..1u32 << l).any(|x| {
                        let word: Vec<Symbol> = (0..l)
                            .map(|i| pack_symbol(&[kept[i], ((x >> (l - 1 - i)) & 1) as u8]))
                            .collect();
                        a.accepts(&word)
                    })
                });
                let word: Vec<Symbol> = w.iter().map(|&d| Symbol::from(d)).collect();
                prop_assert_eq!(p.accepts(&word), expected, "word {:?}", w);
            }
        }
    }
}
