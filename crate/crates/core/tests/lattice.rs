use proptest::prelude::*;
use qboson_core::lattice::{
    inversion_set, shortest_to_dominant, LatticePoint, Permutation, Window,
};
use qboson_core::verify::lattice_properties;

fn point(max_k: usize) -> impl Strategy<Value = LatticePoint> {
    prop::collection::vec(-5i64..=5, 1..=max_k).prop_map(LatticePoint::new)
}

proptest! {
    #[test]
    fn shortest_element_is_minimal(x in point(5)) {
        let k = x.k();
        let form = shortest_to_dominant(&x);
        prop_assert!(form.dominant.is_dominant());
        prop_assert_eq!(form.sigma.act(&x), form.dominant.clone());
        prop_assert_eq!(form.word.len(), form.sigma.length());
        prop_assert!(form.word.is_reduced(k));
        let best = Permutation::all(k)
            .into_iter()
            .filter(|w| w.act(&x).is_dominant())
            .map(|w| w.length())
            .min()
            .unwrap();
        prop_assert_eq!(form.word.len(), best);
        prop_assert_eq!(best, inversion_set(&x).len());
    }

    #[test]
    fn sorting_preserves_the_multiset(x in point(6)) {
        let mut sorted = x.coords().to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let form = shortest_to_dominant(&x);
        prop_assert_eq!(form.dominant.coords(), &sorted[..]);
    }
}

#[test]
fn window_properties_for_four_particles() {
    let check = lattice_properties(4, Window::symmetric(2));
    assert!(check.passed(), "{check}");
    assert_eq!(Window::symmetric(2).points(4).len(), 625);
}
