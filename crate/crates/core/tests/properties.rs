mod common;

use common::{complex, flipped_staircase, property_violations, twice_tetrahedron};
use patchwork_core::complex::Compactification;
use patchwork_core::gf2::{BitVector, Gf2Matrix, Subspace};
use patchwork_core::phase::{phase_from_signs, validate_phase, SignDistribution};
use proptest::prelude::*;

fn signs(bits: &[bool], len: usize) -> SignDistribution {
    SignDistribution {
        minus: bits.iter().cycle().take(len).copied().collect(),
    }
}

fn bitvec(len: usize) -> impl Strategy<Value = BitVector> {
    proptest::collection::vec(any::<bool>(), len).prop_map(BitVector::from_bits)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity(rows in proptest::collection::vec(proptest::collection::vec(0u8..2, 7), 1..6)) {
        let m = Gf2Matrix::from_rows(&rows);
        prop_assert_eq!(m.rank() + m.kernel().dim(), 7);
        for k in m.kernel().basis() {
            prop_assert!(m.mul_vec(k).is_zero());
        }
    }

    #[test]
    fn subspace_dimensions(a in proptest::collection::vec(bitvec(6), 0..5), b in proptest::collection::vec(bitvec(6), 0..5)) {
        let a = Subspace::from_generators(6, a);
        let b = Subspace::from_generators(6, b);
        let sum = a.sum(&b).unwrap();
        let meet = a.intersection(&b).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), a.dim() + b.dim());
        prop_assert!(a.contains_subspace(&meet) && b.contains_subspace(&meet));
        prop_assert!(sum.contains_subspace(&a) && sum.contains_subspace(&b));
    }

    #[test]
    fn echelon_form_is_canonical(gens in proptest::collection::vec(bitvec(8), 0..6), seed in any::<u64>()) {
        let mut shuffled = gens.clone();
        let len = shuffled.len();
        if len > 1 {
            shuffled.rotate_left(seed as usize % len);
            let first = shuffled[0].clone();
            shuffled[len - 1].xor_assign(&first);
        }
        prop_assert_eq!(Subspace::from_generators(8, gens), Subspace::from_generators(8, shuffled));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn curves_satisfy_structural_identities(
        d in 1i64..=4,
        flips in proptest::collection::vec(any::<usize>(), 0..16),
        bits in proptest::collection::vec(any::<bool>(), 15),
    ) {
        let x = complex(&flipped_staircase(d, &flips), Compactification::Newton);
        let e = phase_from_signs(&x, &signs(&bits, x.triangulation.points.len())).unwrap();
        prop_assert_eq!(validate_phase(&x, &e), Ok(()));
        let violations = property_violations(&x, &e);
        prop_assert!(violations.is_empty(), "{:?}", violations);
    }

    #[test]
    fn torus_curves_satisfy_structural_identities(
        d in 1i64..=3,
        flips in proptest::collection::vec(any::<usize>(), 0..8),
        bits in proptest::collection::vec(any::<bool>(), 10),
    ) {
        let x = complex(&flipped_staircase(d, &flips), Compactification::Torus);
        let e = phase_from_signs(&x, &signs(&bits, x.triangulation.points.len())).unwrap();
        let violations = property_violations(&x, &e);
        prop_assert!(violations.is_empty(), "{:?}", violations);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn surfaces_satisfy_structural_identities(
        d in 1usize..=2,
        diagonal in 0usize..3,
        bits in proptest::collection::vec(any::<bool>(), 10),
    ) {
        let t = if d == 1 {
            patchwork_core::lattice::Triangulation::new(
                patchwork_core::lattice::standard_simplex_points(3),
                vec![vec![0, 1, 2, 3]],
            )
        } else {
            twice_tetrahedron(diagonal)
        };
        let x = complex(&t, Compactification::Newton);
        let e = phase_from_signs(&x, &signs(&bits, x.triangulation.points.len())).unwrap();
        let violations = property_violations(&x, &e);
        prop_assert!(violations.is_empty(), "{:?}", violations);
    }
}
