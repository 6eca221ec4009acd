mod common;

use common::{flipped_staircase, twice_tetrahedron};
use patchwork_core::lattice::validate_primitive;

#[test]
fn flips_preserve_primitivity() {
    for d in 1..=4 {
        for seed in 0..20usize {
            let choices: Vec<usize> = (0..12).map(|i| seed * 7 + i * 13).collect();
            let t = flipped_staircase(d, &choices);
            assert_eq!(t.simplices.len(), (d * d) as usize);
            assert_eq!(validate_primitive(&t), Ok(()));
        }
    }
}

#[test]
fn octahedron_splits() {
    for k in 0..3 {
        let t = twice_tetrahedron(k);
        assert_eq!(t.simplices.len(), 8);
        assert_eq!(validate_primitive(&t), Ok(()));
    }
}
