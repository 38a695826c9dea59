//! Free reduction confluence and automorphism laws on random inputs.

use plugpalf::freegroup::{FreeAutomorphism, Letter, Word};
use plugpalf::mcg::{artin_action, BraidLetter, BraidWord};
use proptest::prelude::*;

const RANK: usize = 4;

fn letters(max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((1..=RANK, any::<bool>()).prop_map(|(i, p)| Letter::signed(i, p)), 0..max_len)
}

/// Removes cancelling pairs one at a time, at positions chosen by `picks`.
fn reduce_in_any_order(mut w: Vec<Letter>, picks: &[usize]) -> Vec<Letter> {
    let mut k = 0;
    loop {
        let spots: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&i| w[i].invert() == w[i + 1]).collect();
        if spots.is_empty() {
            return w;
        }
        let at = spots[picks.get(k).copied().unwrap_or(0) % spots.len()];
        k += 1;
        w.drain(at..at + 2);
    }
}

fn automorphism() -> impl Strategy<Value = FreeAutomorphism> {
    prop::collection::vec((1..RANK, any::<bool>()), 0..6).prop_map(|ls| {
        let word = BraidWord::new(ls.into_iter().map(|(index, positive)| BraidLetter { index, positive }).collect());
        artin_action(RANK, &word).unwrap()
    })
}

fn word() -> impl Strategy<Value = Word> {
    letters(12).prop_map(|l| Word::reduce(RANK, l).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn free_reduction_is_confluent(w in letters(40), picks in prop::collection::vec(0usize..64, 0..40)) {
        let canonical = Word::reduce(RANK, w.clone()).unwrap();
        prop_assert_eq!(reduce_in_any_order(w, &picks), canonical.letters().to_vec());
    }

    #[test]
    fn word_inverse_cancels(w in word()) {
        prop_assert!(w.concat(&w.inverse()).unwrap().is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn apply_is_a_homomorphism(phi in automorphism(), u in word(), v in word()) {
        let lhs = phi.apply(&u.concat(&v).unwrap()).unwrap();
        let rhs = phi.apply(&u).unwrap().concat(&phi.apply(&v).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_is_associative(f in automorphism(), g in automorphism(), h in automorphism()) {
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn composition_applies_right_first(f in automorphism(), g in automorphism(), w in word()) {
        prop_assert_eq!(f.compose(&g).unwrap().apply(&w).unwrap(), f.apply(&g.apply(&w).unwrap()).unwrap());
    }

    #[test]
    fn inverse_round_trips(f in automorphism(), w in word()) {
        prop_assert!(f.check_round_trip().is_ok());
        prop_assert_eq!(f.inverse().apply(&f.apply(&w).unwrap()).unwrap(), w);
    }
}
