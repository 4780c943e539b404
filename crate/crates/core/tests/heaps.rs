mod common;

use parahecke::group::CoxeterGroup;
use parahecke::heaps::{between_counts, braid_closure, commutation_canonical, is_braid_closed, Limits, Pair};
use parahecke::Error;
use proptest::prelude::*;

use common::{check_heap_case, random_group, random_reduced_word};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]
    #[test]
    fn closure_partitions_into_classes(seed in prop::collection::vec(any::<u8>(), 12), letters in prop::collection::vec(any::<u8>(), 10..40)) {
        let g = random_group(&seed);
        let word = random_reduced_word(&g, &letters, 10);
        let checked = check_heap_case(&g, &word);
        prop_assert!(checked.is_ok(), "{}", checked.unwrap_err());
    }
}

#[test]
fn longest_element_of_a2_has_two_classes() {
    let g = CoxeterGroup::from_spec("A2").unwrap();
    let classes = braid_closure(&g, &[0, 1, 0], Limits::default()).unwrap();
    let words: Vec<String> = classes.iter().map(|c| g.diagram().format_word(&c.canonical_word)).collect();
    assert_eq!(words, ["1 2 1", "2 1 2"]);
    assert!(is_braid_closed(&g, &[vec![0, 1, 0], vec![1, 0, 1]]).unwrap());
    assert!(!is_braid_closed(&g, &[vec![0, 1, 0]]).unwrap());
}

#[test]
fn commuting_letters_share_a_class() {
    let g = CoxeterGroup::from_spec("A3").unwrap();
    let a = commutation_canonical(&g, &[2, 0, 1]).unwrap();
    let b = commutation_canonical(&g, &[0, 2, 1]).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.canonical_word, vec![0, 2, 1]);
}

#[test]
fn between_counts_on_a_chain() {
    // 1 2 1 3 in B3: the 2 is forced between the two 1s, the 3 may slide in
    let g = CoxeterGroup::from_spec("B3").unwrap();
    let c = commutation_canonical(&g, &[0, 1, 0, 2]).unwrap();
    let b = between_counts(&c, 0, Pair::FirstTwo, 1).unwrap();
    assert_eq!((b.forced, b.possible), (1, 1));
    let b = between_counts(&c, 0, Pair::FirstTwo, 2).unwrap();
    assert_eq!((b.forced, b.possible), (0, 1));
    assert_eq!(between_counts(&c, 2, Pair::FirstTwo, 0), Err(Error::TooFewOccurrences));
}

#[test]
fn non_reduced_words_are_rejected() {
    let g = CoxeterGroup::from_spec("A2").unwrap();
    assert!(matches!(braid_closure(&g, &[0, 0], Limits::default()), Err(Error::NotReduced(_))));
}

#[test]
fn limits_stop_the_search() {
    let g = CoxeterGroup::from_spec("A4").unwrap();
    let w0 = [0, 1, 0, 2, 1, 0, 3, 2, 1, 0];
    let limits = Limits { max_classes: 3, ..Limits::default() };
    assert!(matches!(braid_closure(&g, &w0, limits), Err(Error::LimitExceeded(_))));
}
