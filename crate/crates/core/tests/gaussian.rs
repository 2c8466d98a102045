use kottsep_core::freeset::{is_free, max_free_subset, witness_difference};
use kottsep_core::gaussian_bridge::{
    delta_construction, embed_real, find_gaussian_difference_free, gaussian_cube, is_gaussian_free,
    max_gaussian_free_subset, random_gaussian_admissible,
};
use kottsep_core::{Budgets, FreeMode, GaussianSet, GaussianVector, SymmetricCubeSet};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gaussian_vector(dim: usize) -> impl Strategy<Value = GaussianVector> {
    let digit = prop_oneof![Just((1i8, 0i8)), Just((-1, 0)), Just((0, 0)), Just((0, 1)), Just((0, -1))];
    proptest::collection::vec(digit, dim).prop_map(|p| GaussianVector::from_parts(&p).unwrap())
}

#[test]
fn embedding_is_injective_on_small_cubes() {
    for dim in 1..=3 {
        let mut images: Vec<_> = gaussian_cube(dim).unwrap().iter().map(embed_real).collect();
        let total = images.len();
        images.sort();
        images.dedup();
        assert_eq!(images.len(), total);
    }
}

#[test]
fn reverse_difference_transfer_fails_for_one_and_i() {
    // the real images of 1 and i differ by (1, -1), which lies in the cube,
    // while 1 - i is not a Gaussian cube coordinate
    let one = GaussianVector::from_parts(&[(1, 0)]).unwrap();
    let i = GaussianVector::from_parts(&[(0, 1)]).unwrap();
    assert!(one.sub_in_cube(&i).is_none());
    assert!(embed_real(&one).sub_in_cube(&embed_real(&i)).is_some());
}

#[test]
fn delta_sets_have_maximum_free_size_two_n_plus_two() {
    let b = Budgets::default();
    for n in 1..=2 {
        let delta = delta_construction(&witness_difference(n + 2).unwrap()).unwrap();
        assert!(delta.is_i_closed());
        assert_eq!(max_gaussian_free_subset(&delta, &b).unwrap().0, 2 * n + 2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn embedding_commutes_with_differences_inside_the_cube(x in gaussian_vector(3), y in gaussian_vector(3)) {
        if let Some(d) = x.sub_in_cube(&y) {
            prop_assert_eq!(embed_real(&x).sub_in_cube(&embed_real(&y)), Some(embed_real(&d)));
        }
    }

    #[test]
    fn membership_transfers_through_the_embedding(seed in any::<u64>(), x in gaussian_vector(2)) {
        let a = random_gaussian_admissible(2, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(a.contains(&x), a.embed_real().contains(&embed_real(&x)));
    }

    #[test]
    fn real_free_sets_pull_back(seed in any::<u64>()) {
        let a = random_gaussian_admissible(2, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let real: SymmetricCubeSet = a.embed_real();
        let best = max_free_subset(&real, FreeMode::Difference, &Budgets::default()).unwrap();
        prop_assert!(is_free(&best.witness, &real, FreeMode::Difference).unwrap());
        let back: Vec<GaussianVector> = best.witness.iter().map(|x| GaussianVector::from_embedded(*x).unwrap()).collect();
        prop_assert!(is_gaussian_free(&back, &a).unwrap());
    }

    #[test]
    fn random_i_closed_sets_get_full_witnesses(dim in 1usize..=3, seed in any::<u64>()) {
        let a: GaussianSet = random_gaussian_admissible(dim, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert!(a.is_i_closed());
        let cert = find_gaussian_difference_free(&a, &Budgets::default()).unwrap();
        prop_assert_eq!(cert.size(), 2 * dim + 2);
        cert.verify().unwrap();
    }
}
