//! Inputs shared by the benchmarks.

use std::path::PathBuf;

use conley_core::cubical::{closure, Cube, CubicalSet};
use conley_core::system::System;
use conley_core::{Field, Matrix};

pub fn fixture(name: &str) -> System {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    System::from_path(&path).expect("shipped fixture parses")
}

/// A closed `side x side` square with its middle square removed.
pub fn annulus(side: i64) -> CubicalSet {
    let mid = side / 2;
    let tops = (0..side)
        .flat_map(|x| (0..side).map(move |y| (x, y)))
        .filter(|&(x, y)| (x, y) != (mid, mid))
        .map(|(x, y)| Cube::unit(&[x, y]));
    closure(&CubicalSet::from_cubes(2, tops).expect("planar cubes"))
}

/// An `n x n` matrix with an invertible diagonal block on the first half, a
/// nilpotent shift on the second, and a first row coupling the two.
pub fn mixed_endomorphism(field: Field, n: usize) -> Matrix {
    let half = n / 2;
    let mut m = Matrix::zeros(field, n, n);
    for i in 0..n {
        if i < half {
            m.set(i, i, field.from_i64(1 + i as i64));
        } else if i + 1 < n {
            m.set(i, i + 1, field.from_i64(1));
        }
        if i > 0 {
            m.set(0, i, field.from_i64(i as i64));
        }
    }
    m
}
