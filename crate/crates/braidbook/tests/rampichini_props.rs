use braidbook::braid::{cyclic_conjugates, BandLetter, BandWord};
use braidbook::rampichini::{
    script_valid, search_all_conjugates, search_braidable, synthesize_diagram, validate_diagram,
    SearchBounds, Status,
};
use proptest::prelude::*;

fn word(s: &str) -> BandWord {
    s.parse().unwrap()
}

#[test]
fn morton_word_and_conjugates_are_not_found() {
    let w = word("n=4; 1:3 2:3 2:4");
    for c in cyclic_conjugates(&w) {
        let v = search_braidable(&c, SearchBounds::default());
        assert_eq!(v.status, Status::NotFound, "{c}");
    }
    assert_eq!(
        search_all_conjugates(&w, SearchBounds::default()).status,
        Status::NotFound
    );
}

#[test]
fn three_letter_fixture_is_found_and_draws() {
    let w = word("n=4; 3:4 -1:2 2:3");
    let v = search_braidable(&w, SearchBounds::default());
    assert_eq!(v.status, Status::Found);
    let s = v.script.unwrap();
    assert!(script_valid(&s).valid);
    let d = synthesize_diagram(&s).unwrap();
    assert_eq!(d.edge_crossings.len(), 3);
    assert_eq!(d.letters, 3);
    let r = validate_diagram(&d);
    assert!(r.normative_ok, "{:?}", r.failures);
    assert_eq!(r.edge_crossings, 3);
}

#[test]
fn homogeneous_words_have_a_braided_conjugate() {
    for s in ["n=3; 1:2 2:3", "n=3; 1:2 -2:3"] {
        let r = search_all_conjugates(&word(s), SearchBounds::default());
        assert_eq!(r.status, Status::Found, "{s}");
    }
}

#[test]
fn search_is_deterministic() {
    let w = word("n=4; 3:4 -1:2 2:3");
    let a = search_braidable(&w, SearchBounds::default());
    let b = search_braidable(&w, SearchBounds::default());
    assert_eq!(a.status, b.status);
    assert_eq!(a.script, b.script);
    assert_eq!(a.states, b.states);
}

fn letter(n: usize) -> impl Strategy<Value = BandLetter> {
    (1..=n, 1..=n, prop::bool::ANY)
        .prop_filter("distinct strands", |(a, b, _)| a != b)
        .prop_map(|(a, b, s)| BandLetter::new(a, b, if s { 1 } else { -1 }).unwrap())
}

fn small_word() -> impl Strategy<Value = BandWord> {
    (2usize..=4).prop_flat_map(|n| {
        prop::collection::vec(letter(n), 1..=5).prop_map(move |l| BandWord::new(n, l).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn found_scripts_are_valid_and_draw(w in small_word()) {
        let v = search_braidable(&w, SearchBounds { max_states: Some(200_000) });
        if let Some(s) = v.script {
            prop_assert!(script_valid(&s).valid);
            let r = validate_diagram(&synthesize_diagram(&s).unwrap());
            prop_assert!(r.normative_ok, "{}: {:?}", w, r.failures);
        }
    }
}
