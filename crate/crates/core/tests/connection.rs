mod common;

use common::{decomposition, fixture, ints};
use conley_core::connection::{
    enlarge_attractor_region, gamma_case2, gamma_case3, gamma_cross_validate, gamma_rank_bound,
    gamma_sum_decomposition, morse_equation_check, MorseRow,
};
use conley_core::cubical::Cube;

fn s(v: &[&[&str]]) -> Vec<Vec<String>> {
    v.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

/// On the bistable cubic, `Γ_1` sends the repeller class to `right - left`
/// and both constructions agree exactly.
#[test]
fn ar1d_gamma_both_ways() {
    let sys = fixture("ar1d.json");
    let d = decomposition(&sys);
    assert_eq!(d.sequence.a.dims(), vec![2, 0]);
    assert_eq!(d.sequence.r.dims(), vec![0, 1]);
    assert_eq!(d.sequence.s.dims(), vec![1, 0]);
    assert_eq!(ints(&d.gamma_les()[1]), s(&[&["-1"], &["1"]]));
    assert_eq!(d.gamma_fact, d.gamma_les());
    assert_eq!(d.witness.n, 0);
    let cv = gamma_cross_validate(&d).unwrap();
    assert_eq!(cv.ranks, vec![(0, 0), (1, 1)]);
}

/// The local unstable set reaches cells -8..7, so `F` is two blocks of four
/// cells lying inside `S`.
#[test]
fn ar1d_unstable_domain() {
    let sys = fixture("ar1d.json");
    let d = decomposition(&sys);
    let tops: Vec<i64> = d.triple.r.f_domain.tops().iter().map(|c| c.lo_corner()[0]).collect();
    assert_eq!(tops, vec![-8, -7, -6, -5, 4, 5, 6, 7]);
    assert_eq!(d.tau.z0, d.triple.r.f_domain.tops());
}

#[test]
fn ar1d_morse_rows() {
    let sys = fixture("ar1d.json");
    let rows = morse_equation_check(&decomposition(&sys).sequence);
    assert_eq!(
        rows,
        vec![
            MorseRow { q: 0, ch_a: 2, ch_r: 0, ch_s: 1, rank_q: 0, rank_q1: 1, holds: true },
            MorseRow { q: 1, ch_a: 0, ch_r: 1, ch_s: 0, rank_q: 1, rank_q1: 0, holds: true },
        ]
    );
    assert!(gamma_rank_bound(&decomposition(&sys)).iter().all(|r| r.holds));
}

/// Two connecting pieces, each of rank one, summing to `Γ`.
#[test]
fn ar1d_sum_decomposition() {
    let sys = fixture("ar1d.json");
    let d = decomposition(&sys);
    let sum = gamma_sum_decomposition(&sys.map, &d).unwrap();
    assert_eq!(sum.components.len(), 2);
    assert_eq!(ints(&sum.gammas[0][1]), s(&[&["-1"], &["0"]]));
    assert_eq!(ints(&sum.gammas[1][1]), s(&[&["0"], &["1"]]));
}

/// Enlarging the attractor region once adds cells 3 and -4.
#[test]
fn ar1d_case2() {
    let sys = fixture("ar1d.json");
    let d = decomposition(&sys);
    let n1k = enlarge_attractor_region(&sys.map, &d.triple, 1).unwrap();
    assert!(n1k.contains(&Cube::unit(&[3])) && n1k.contains(&Cube::unit(&[-4])));
    assert!(!n1k.contains(&Cube::unit(&[2])));
    let r = gamma_case2(&sys.map, &d, 1).unwrap();
    assert!(r.holds);
    assert_eq!(r.shift, 0);
}

#[test]
fn ar1d_case3() {
    let sys = fixture("ar1d.json");
    let d = decomposition(&sys);
    let g = |n: &str| sys.region(n).unwrap().clone();
    let r = gamma_case3(&sys.map, &d, (&g("NR"), &g("LR")), (&g("NA"), &g("N2"))).unwrap();
    assert!(r.holds);
    assert_eq!(r.ranks, vec![(0, 0), (1, 1)]);
}

/// No orbit joins the repeller to the attractor, so `Γ = 0` both ways.
#[test]
fn no_connection_gamma_vanishes() {
    let sys = fixture("no-connection.json");
    let d = decomposition(&sys);
    assert!(d.gamma_les().iter().all(conley_core::Matrix::is_zero));
    assert!(d.gamma_fact.iter().all(conley_core::Matrix::is_zero));
    assert!(morse_equation_check(&d.sequence).iter().all(|r| r.holds));
}

/// The left piece lies along the edge of the stable set and contributes 0;
/// the right piece contributes ±1.
#[test]
fn tangent_piece_contributes_zero() {
    let sys = fixture("tangent-table.json");
    let d = decomposition(&sys);
    gamma_cross_validate(&d).unwrap();
    let sum = gamma_sum_decomposition(&sys.map, &d).unwrap();
    assert_eq!(sum.gammas.len(), 2);
    assert!(sum.gammas[0][1].is_zero());
    assert_eq!(sum.gammas[1][1].rank(), 1);
    let x = sum.gammas[1][1].get(0, 0).clone();
    assert!(x == conley_core::Field::Rational.one() || x == conley_core::Field::Rational.from_i64(-1));
}

/// The 3D system built on the saddle's contracting directions.
#[test]
fn saddle_ar_case1() {
    let sys = fixture("saddle3d-ar.json");
    let d = decomposition(&sys);
    assert_eq!(d.sequence.r.dims(), vec![0, 1, 0, 0]);
    assert_eq!(d.sequence.a.dims(), vec![2, 0, 0, 0]);
    assert_eq!(d.gamma_fact, d.gamma_les());
    assert_eq!(d.gamma_les()[1].rank(), 1);
}
