//! One PASS/FAIL line per acceptance criterion.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};

use common::{decomposition, fixture, oracle_betti, pair, random_complex};
use conley_core::algebra::{algebraic_part, check_algebraic_exactness, EndoSpace};
use conley_core::connection::{gamma_cross_validate, gamma_sum_decomposition, morse_equation_check};
use conley_core::cubical::{chain_complex, CubicalSet};
use conley_core::emit_receive::{
    component_classes, emitter, emitter_naturality_check, omega_se_check, receiver_omega, Omega_independence_check,
};
use conley_core::homology::homology;
use conley_core::index::conley_index;
use conley_core::{Field, Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<(), String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn saddle_index() -> Result<(), String> {
    let sys = fixture("saddle3d.json");
    let p = pair(&sys, "main");
    for field in [Field::Rational, Field::Prime(7)] {
        let idx = conley_index(&sys.map, &p, field).map_err(|e| e.to_string())?;
        ensure(idx.dims() == vec![0, 1, 0, 0], format!("dims {:?} over {field:?}", idx.dims()))?;
        ensure(idx.phi(1) == &Matrix::identity(field, 1), "φ is not the identity")?;
    }
    Ok(())
}

fn flip_index() -> Result<(), String> {
    let sys = fixture("flip3d.json");
    let idx = conley_index(&sys.map, &pair(&sys, "main"), Field::Rational).map_err(|e| e.to_string())?;
    ensure(idx.phi(1) == &Matrix::from_i64(Field::Rational, &[vec![-1]]), format!("φ = {:?}", idx.phi(1).to_strings()))
}

fn emitter_ends() -> Result<(), String> {
    let sys = fixture("saddle3d.json");
    let e = emitter(&sys.map, &pair(&sys, "main"), Field::Rational).map_err(|e| e.to_string())?;
    let ends = component_classes(&e.h_f, &e.index.pair.f_domain).map_err(|e| e.to_string())?;
    ensure(ends.len() == 2, "F does not have two ends")?;
    let col = e.emitter[1].column(0);
    let q = Field::Rational;
    let diff: Vec<_> = ends[0].iter().zip(&ends[1]).map(|(a, b)| q.sub(b, a)).collect();
    let neg: Vec<_> = diff.iter().map(|x| q.neg(x)).collect();
    ensure(col == diff || col == neg, "∂_F is not the difference of the end classes")
}

fn no_connection() -> Result<(), String> {
    let d = decomposition(&fixture("no-connection.json"));
    ensure(d.gamma_les().iter().all(Matrix::is_zero), "Γ_les ≠ 0")?;
    ensure(d.gamma_fact.iter().all(Matrix::is_zero), "Γ_fact ≠ 0")
}

fn case1_equality() -> Result<(), String> {
    for file in ["ar1d.json", "saddle3d-ar.json"] {
        let d = decomposition(&fixture(file));
        gamma_cross_validate(&d).map_err(|e| format!("{file}: {e}"))?;
        ensure(d.gamma_les()[1].rank() == 1, format!("{file}: Γ_1 has rank {}", d.gamma_les()[1].rank()))?;
    }
    Ok(())
}

fn morse_equation() -> Result<(), String> {
    for file in ["ar1d.json", "no-connection.json", "tangent-table.json", "saddle3d-ar.json"] {
        let d = decomposition(&fixture(file));
        if let Some(r) = morse_equation_check(&d.sequence).into_iter().find(|r| !r.holds) {
            return Err(format!("{file}: {r:?}"));
        }
    }
    Ok(())
}

fn sum_decomposition() -> Result<(), String> {
    let sys = fixture("ar1d.json");
    let d = decomposition(&sys);
    let sum = gamma_sum_decomposition(&sys.map, &d).map_err(|e| e.to_string())?;
    ensure(sum.gammas.len() == 2, format!("{} pieces", sum.gammas.len()))?;
    ensure(sum.gammas.iter().all(|g| g[1].rank() == 1), "a piece does not have rank 1")
}

fn invariance() -> Result<(), String> {
    let cases = [
        ("saddle3d.json", "main", "wide"),
        ("flip3d.json", "main", "wide"),
        ("ar1d.json", "attractor", "wide_attractor"),
        ("ar1d.json", "shrunk_repeller", "repeller"),
    ];
    for (file, a, b) in cases {
        let sys = fixture(file);
        let (f, field, o) = (&sys.map, sys.field, &sys.options);
        let (p, q) = (pair(&sys, a), pair(&sys, b));
        let err = |e: conley_core::Error| format!("{file}: {e}");
        let (ip, iq) = (conley_index(f, &p, field).map_err(err)?, conley_index(f, &q, field).map_err(err)?);
        ensure(ip.dims() == iq.dims(), format!("{file}: dims differ"))?;
        ensure(emitter_naturality_check(f, &p, &q, field, o.n_max).map_err(err)?.holds, format!("{file}: emitter square"))?;
        let (rp, rq) = (receiver_omega(f, ip).map_err(err)?, receiver_omega(f, iq).map_err(err)?);
        ensure(omega_se_check(f, &rp, &rq, o.n_max).map_err(err)?.holds, format!("{file}: ω square"))?;
        for k in 0..=2 {
            let r = Omega_independence_check(f, &rp, &rq, k, &p.n, &p.ws, o.n_max, o.r_max).map_err(err)?;
            ensure(r.holds, format!("{file}: Ω identity at k = {k}"))?;
        }
    }
    Ok(())
}

fn algebra_suite() -> Result<(), String> {
    let start = std::time::Instant::now();
    let f5 = Field::Prime(5);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let random = |rows: usize, cols: usize, rng: &mut ChaCha8Rng| -> Matrix {
        let mut m = Matrix::zeros(f5, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f5.from_i64(rng.gen_range(0..5)));
            }
        }
        m
    };
    for _ in 0..500 {
        let n = rng.gen_range(0..=8);
        let phi = random(n, n, &mut rng);
        let d = algebraic_part(&EndoSpace::new(phi.clone()).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(d.algebraic_dim() + d.gker_basis.cols() == n, "dimensions do not add up")?;
        ensure(d.algebraic_basis.hstack(&d.gker_basis).unwrap().is_invertible(), "not a direct sum")?;
        ensure(d.omega.mul(&d.omega).unwrap() == d.omega, "ω is not idempotent")?;
        ensure(d.omega.mul(&phi).unwrap() == phi.mul(&d.omega).unwrap(), "ω is not equivariant")?;
        let (u, w) = (rng.gen_range(0..=4), rng.gen_range(0..=4));
        let (pu, pw, x) = (random(u, u, &mut rng), random(w, w, &mut rng), random(u, w, &mut rng));
        let pv = pu.hstack(&x).unwrap().vstack(&Matrix::zeros(f5, w, u).hstack(&pw).unwrap()).unwrap();
        let incl = Matrix::identity(f5, u).vstack(&Matrix::zeros(f5, w, u)).unwrap();
        let proj = Matrix::zeros(f5, w, u).hstack(&Matrix::identity(f5, w)).unwrap();
        let spaces = [pu, pv, pw].map(|m| EndoSpace::new(m).unwrap());
        check_algebraic_exactness(&spaces[0], &incl, &spaces[1], &proj, &spaces[2]).map_err(|e| e.to_string())?;
    }
    ensure(start.elapsed().as_secs_f64() < 5.0, format!("took {:?}", start.elapsed()))
}

fn homology_oracle() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for round in 0..100 {
        let x = random_complex(&mut rng, 200);
        let mut got = homology(&chain_complex(&x, Field::Rational).map_err(|e| e.to_string())?).dims();
        let mut want = oracle_betti(&x, &CubicalSet::empty(x.ambient()));
        for v in [&mut got, &mut want] {
            while v.last() == Some(&0) {
                v.pop();
            }
        }
        ensure(got == want, format!("round {round}: {got:?} vs oracle {want:?}"))?;
    }
    Ok(())
}

fn tangential() -> Result<(), String> {
    let sys = fixture("tangent-table.json");
    let d = decomposition(&sys);
    gamma_cross_validate(&d).map_err(|e| e.to_string())?;
    let sum = gamma_sum_decomposition(&sys.map, &d).map_err(|e| e.to_string())?;
    ensure(sum.gammas.len() == 2, "expected two pieces")?;
    ensure(sum.gammas[0][1].is_zero(), "tangential piece is not zero")?;
    let v = sum.gammas[1][1].get(0, 0).clone();
    let q = Field::Rational;
    ensure(v == q.one() || v == q.from_i64(-1), "transversal piece is not ±1")
}

fn main() {
    let criteria: [(&str, Check); 11] = [
        ("saddle index CH_1 = K, φ = Id over Q and Z/7", saddle_index),
        ("orientation flip φ = -Id", flip_index),
        ("emitter is the signed difference of the two ends", emitter_ends),
        ("no connection gives Γ_les = Γ_fact = 0", no_connection),
        ("Case-1 equality Γ_les = Ω τ ∂_F", case1_equality),
        ("Morse dimension equation in every degree", morse_equation),
        ("sum decomposition into two rank-one pieces", sum_decomposition),
        ("invariance under change of filtration pair", invariance),
        ("algebra property suite over Z/5", algebra_suite),
        ("homology agrees with the Smith normal form oracle", homology_oracle),
        ("tangential piece contributes 0, transversal ±1", tangential),
    ];
    let outcomes: Vec<Result<(), String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|(_, check)| {
                scope.spawn(move || {
                    catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
                        let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
                        Err(msg.unwrap_or_else(|| "panicked".into()))
                    })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = 0;
    for (i, ((name, _), outcome)) in criteria.iter().zip(&outcomes).enumerate() {
        match outcome {
            Ok(()) => println!("PASS {:>2} {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
