#![allow(dead_code)]

use std::path::PathBuf;

use conley_core::cubical::{closure, Cube, CubicalSet};
use conley_core::system::System;
use rand::Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn fixture(name: &str) -> System {
    System::from_path(&fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Rank over ℚ of an integer matrix, read off its Smith normal form.
pub fn snf_rank(mut m: Vec<Vec<i128>>) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut t = 0;
    while t < rows.min(cols) {
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| m[i][j] != 0)
            .min_by_key(|&(i, j)| m[i][j].abs());
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = m[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = m[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        m[i][j] -= q * m[t][j];
                    }
                }
                dirty |= m[i][t] != 0;
            }
            for j in t + 1..cols {
                let q = m[t][j] / p;
                if q != 0 {
                    for i in t..rows {
                        m[i][j] -= q * m[i][t];
                    }
                }
                dirty |= m[t][j] != 0;
            }
            if !dirty {
                break;
            }
            let (i, j) = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| (i == t || j == t) && m[i][j] != 0)
                .min_by_key(|&(i, j)| m[i][j].abs())
                .unwrap();
            m.swap(t, i);
            for row in m.iter_mut() {
                row.swap(t, j);
            }
        }
        t += 1;
    }
    t
}

fn faces_with_signs(c: &Cube) -> Vec<(Cube, i128)> {
    let b = c.bounds();
    let mut out = Vec::new();
    let mut seen = 0;
    for (i, [lo, hi]) in b.iter().enumerate() {
        if lo == hi {
            continue;
        }
        let sign = if seen % 2 == 0 { 1 } else { -1 };
        for (at, s) in [(*lo, -sign), (*hi, sign)] {
            let mut fb = b.clone();
            fb[i] = [at, at];
            out.push((Cube::from_bounds(&fb).unwrap(), s));
        }
        seen += 1;
    }
    out
}

/// Betti numbers of `H(X, A)` over ℚ; `A` may be empty.
pub fn oracle_betti(x: &CubicalSet, a: &CubicalSet) -> Vec<usize> {
    let top = x.iter().map(Cube::dim).max().unwrap_or(0);
    let cells: Vec<Vec<Cube>> = (0..=top)
        .map(|q| x.iter().filter(|c| c.dim() == q && !a.contains(c)).cloned().collect())
        .collect();
    let boundary = |q: usize| -> Vec<Vec<i128>> {
        let (src, dst) = (&cells[q], &cells[q - 1]);
        let mut m = vec![vec![0i128; src.len()]; dst.len()];
        for (j, c) in src.iter().enumerate() {
            for (f, s) in faces_with_signs(c) {
                if let Some(i) = dst.iter().position(|d| *d == f) {
                    m[i][j] += s;
                }
            }
        }
        m
    };
    let ranks: Vec<usize> = (0..=top + 1)
        .map(|q| if q == 0 || q > top { 0 } else { snf_rank(boundary(q)) })
        .collect();
    (0..=top).map(|q| cells[q].len() - ranks[q] - ranks[q + 1]).collect()
}

/// The closure of a few random cubes in a small box, with at most
/// `max_cells` cells.
pub fn random_complex<R: Rng>(rng: &mut R, max_cells: usize) -> CubicalSet {
    loop {
        let d = rng.gen_range(1..=3usize);
        let side = match d {
            1 => 12,
            2 => 5,
            _ => 3,
        };
        let picks = rng.gen_range(1..=side * d);
        let mut cubes = Vec::new();
        for _ in 0..picks {
            let axes: Vec<[i64; 2]> = (0..d)
                .map(|_| {
                    let k = rng.gen_range(0..side as i64);
                    if rng.gen_bool(0.7) { [k, k + 1] } else { [k, k] }
                })
                .collect();
            cubes.push(Cube::from_bounds(&axes).unwrap());
        }
        let x = closure(&CubicalSet::from_cubes(d, cubes).unwrap());
        if x.len() <= max_cells {
            return x;
        }
    }
}

/// A random closed subset of `x`.
pub fn random_subcomplex<R: Rng>(rng: &mut R, x: &CubicalSet) -> CubicalSet {
    let picked: Vec<Cube> = x.iter().filter(|_| rng.gen_bool(0.2)).cloned().collect();
    closure(&CubicalSet::from_cubes(x.ambient(), picked).unwrap())
}

pub fn pair(sys: &System, name: &str) -> conley_core::dynamics::FiltrationPair {
    let (n, l) = sys.pair(Some(name)).unwrap();
    conley_core::dynamics::FiltrationPair::new(&sys.map, &n, &l).unwrap()
}

pub fn decomposition(sys: &System) -> conley_core::connection::ARDecomposition {
    let (n0, n1, n2) = sys.triple(Some("main")).unwrap();
    let t = conley_core::dynamics::FiltrationTriple::new(&sys.map, &n0, &n1, &n2).unwrap();
    conley_core::connection::ar_decomposition(&sys.map, &t, sys.field, &sys.options).unwrap()
}

pub fn ints(m: &conley_core::Matrix) -> Vec<Vec<String>> {
    m.to_strings()
}
