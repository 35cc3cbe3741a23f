mod common;

use common::{fixture, pair};
use conley_core::dynamics::FiltrationPair;
use conley_core::emit_receive::{
    check_admissible, component_classes, emitter, receiver_Omega, receiver_omega, AdmissibleWitness,
};
use conley_core::index::conley_index;
use conley_core::{Error, Field, Matrix};

/// The saddle has index `𝕂` in degree one only, with `φ = Id`, over ℚ and ℤ/7.
#[test]
fn saddle_index_over_two_fields() {
    let sys = fixture("saddle3d.json");
    let p = pair(&sys, "main");
    for field in [Field::Rational, Field::Prime(7)] {
        let idx = conley_index(&sys.map, &p, field).unwrap();
        assert_eq!(idx.dims(), vec![0, 1, 0, 0]);
        assert_eq!(idx.phi(1), &Matrix::identity(field, 1));
    }
}

/// Reversing the unstable direction makes the index map `-Id`.
#[test]
fn flip_index_map_is_minus_identity() {
    let sys = fixture("flip3d.json");
    let idx = conley_index(&sys.map, &pair(&sys, "main"), Field::Rational).unwrap();
    assert_eq!(idx.dims(), vec![0, 1, 0, 0]);
    assert_eq!(idx.phi(1), &Matrix::from_i64(Field::Rational, &[vec![-1]]));
}

/// A pair whose exit set is not inside `L` is rejected with a witness cube.
#[test]
fn exit_set_outside_l_is_rejected() {
    let sys = fixture("saddle3d.json");
    let (n, l) = sys.pair(Some("top-only")).unwrap();
    match FiltrationPair::new(&sys.map, &n, &l) {
        Err(Error::InvalidPair(msg)) => assert!(msg.contains("[[-2,-1],[-2,-1],[-2,-1]]"), "{msg}"),
        other => panic!("expected InvalidPair, got {other:?}"),
    }
}

/// `∂_F` of the generator is the difference of the two end classes of the
/// local unstable manifold.
#[test]
fn saddle_emitter_is_signed_difference_of_ends() {
    let sys = fixture("saddle3d.json");
    let e = emitter(&sys.map, &pair(&sys, "main"), Field::Rational).unwrap();
    let ends = component_classes(&e.h_f, &e.index.pair.f_domain).unwrap();
    assert_eq!(ends.len(), 2);
    let column = e.emitter[1].column(0);
    let diff: Vec<_> = ends[0].iter().zip(&ends[1]).map(|(a, b)| Field::Rational.sub(b, a)).collect();
    let neg: Vec<_> = diff.iter().map(|x| Field::Rational.neg(x)).collect();
    assert!(column == diff || column == neg, "{column:?}");
}

/// With `Z = N` and `Z0 = W^s`, `Ω` reduces to `ω` and sends the generator
/// of `H(N, K)` to the generator of `CH`.
#[test]
fn omega_reduces_to_small_omega() {
    let sys = fixture("saddle3d.json");
    let p = pair(&sys, "main");
    let idx = conley_index(&sys.map, &p, Field::Rational).unwrap();
    let recv = receiver_omega(&sys.map, idx).unwrap();
    let w = check_admissible(&sys.map, &p, &p.n, &p.ws, 4, 4).unwrap();
    assert_eq!(w.n, 0);
    let big = receiver_Omega(&sys.map, &recv, &w).unwrap();
    for q in 0..4 {
        assert_eq!(big.blocks[q].rank(), recv.omega[q].rank());
    }
    assert_eq!(big.blocks[1].rank(), 1);
    let by_hand = AdmissibleWitness { u: p.n.clone(), ..w };
    assert_eq!(receiver_Omega(&sys.map, &recv, &by_hand).unwrap().blocks, big.blocks);
}

/// A set that misses the stable set is admissible with vacuous (A1) and has
/// `Ω = 0`.
#[test]
fn omega_vanishes_away_from_the_stable_set() {
    let sys = fixture("saddle3d.json");
    let p = pair(&sys, "main");
    let idx = conley_index(&sys.map, &p, Field::Rational).unwrap();
    let recv = receiver_omega(&sys.map, idx).unwrap();
    let z = conley_core::cubical::closure(&p.n.tops().difference(&p.ws).intersection(&p.l.tops()));
    let z0 = conley_core::cubical::CubicalSet::empty(3);
    let w = check_admissible(&sys.map, &p, &z, &z0, 4, 4).unwrap();
    let om = receiver_Omega(&sys.map, &recv, &w).unwrap();
    assert!(om.blocks.iter().all(Matrix::is_zero));
}
