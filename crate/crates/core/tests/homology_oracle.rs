mod common;

use common::{oracle_betti, random_complex, random_subcomplex};
use conley_core::cubical::{chain_complex, relative_complex, CubicalSet};
use conley_core::homology::homology;
use conley_core::Field;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn trimmed(mut v: Vec<usize>) -> Vec<usize> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Absolute homology of 100 random closed sets agrees with the integer oracle.
#[test]
fn absolute_dims_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for round in 0..100 {
        let x = random_complex(&mut rng, 200);
        let h = homology(&chain_complex(&x, Field::Rational).unwrap());
        let expected = oracle_betti(&x, &CubicalSet::empty(x.ambient()));
        assert_eq!(trimmed(h.dims()), trimmed(expected), "round {round}: {x:?}");
    }
}

/// Relative homology `H(X, A)` for random subcomplexes agrees with the oracle.
#[test]
fn relative_dims_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa11ce);
    for round in 0..50 {
        let x = random_complex(&mut rng, 200);
        let a = random_subcomplex(&mut rng, &x);
        let h = homology(&relative_complex(&x, &a, Field::Rational).unwrap());
        assert_eq!(trimmed(h.dims()), trimmed(oracle_betti(&x, &a)), "round {round}");
    }
}

/// Over ℤ/7 the Euler characteristic of the homology equals that of the
/// cells, and the ranks agree with ℚ on torsion-free cubical sets.
#[test]
fn prime_field_euler_characteristic() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..30 {
        let x = random_complex(&mut rng, 150);
        let cc = chain_complex(&x, Field::Prime(7)).unwrap();
        let h = homology(&cc);
        let chi: i64 = h.dims().iter().enumerate().map(|(q, &d)| if q % 2 == 0 { d as i64 } else { -(d as i64) }).sum();
        assert_eq!(chi, cc.euler_characteristic());
        let hq = homology(&chain_complex(&x, Field::Rational).unwrap());
        assert_eq!(h.dims(), hq.dims());
    }
}

#[test]
fn oracle_knows_a_circle() {
    use conley_core::cubical::Cube;
    let square = CubicalSet::box_cells(&[0, 0], &[1, 1]);
    let ring = square.difference(&CubicalSet::from_cubes(2, [Cube::unit(&[0, 0])]).unwrap());
    assert_eq!(trimmed(oracle_betti(&ring, &CubicalSet::empty(2))), vec![1, 1]);
    assert_eq!(trimmed(oracle_betti(&square, &CubicalSet::empty(2))), vec![1]);
}
