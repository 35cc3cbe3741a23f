use conley_core::algebra::{algebraic_part, check_algebraic_exactness, EndoSpace};
use conley_core::{Field, Matrix};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const F5: Field = Field::Prime(5);

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    if rows == 0 {
        return Matrix::zeros(F5, 0, cols);
    }
    let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(0..5)).collect()).collect();
    Matrix::from_i64(F5, &data)
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, n, n);
        if m.is_invertible() {
            return m;
        }
    }
}

/// A random endomorphism; half the time conjugate to an invertible block
/// plus a strictly upper triangular (nilpotent) block.
fn random_endo(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    if n == 0 || rng.gen_bool(0.5) {
        return random_matrix(rng, n, n);
    }
    let k = rng.gen_range(0..=n);
    let mut m = Matrix::zeros(F5, n, n);
    let inv = random_invertible(rng, k);
    for i in 0..k {
        for j in 0..k {
            m.set(i, j, inv.get(i, j).clone());
        }
    }
    for i in k..n {
        for j in i + 1..n {
            m.set(i, j, F5.from_i64(rng.gen_range(0..5)));
        }
    }
    let p = random_invertible(rng, n);
    p.mul(&m).unwrap().mul(&p.inverse().unwrap()).unwrap()
}

fn block(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Matrix {
    a.hstack(b).unwrap().vstack(&c.hstack(d).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    /// `V = AV ⊕ gker φ`, `ω` is an equivariant idempotent onto `AV`, and
    /// `φ` is invertible on `AV`.
    #[test]
    fn canonical_decomposition(n in 0usize..=8, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = random_endo(&mut rng, n);
        let d = algebraic_part(&EndoSpace::new(phi.clone()).unwrap()).unwrap();
        let a = &d.algebraic_basis;
        let g = &d.gker_basis;
        prop_assert_eq!(a.cols() + g.cols(), n);
        prop_assert!(a.hstack(g).unwrap().is_invertible());
        prop_assert_eq!(d.omega.mul(&d.omega).unwrap(), d.omega.clone());
        prop_assert_eq!(d.omega.mul(&phi).unwrap(), phi.mul(&d.omega).unwrap());
        prop_assert_eq!(d.omega.mul(a).unwrap(), a.clone());
        prop_assert!(d.omega.mul(g).unwrap().is_zero());
        prop_assert!(phi.pow(n).unwrap().mul(g).unwrap().is_zero());
        prop_assert!(d.phi_on_a.is_invertible());
        prop_assert_eq!(a.mul(&d.phi_on_a).unwrap(), phi.mul(a).unwrap());
    }

    /// `U -> V -> W` exact and equivariant stays exact on algebraic parts.
    #[test]
    fn exact_triples_restrict(u in 0usize..=4, w in 0usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (pu, pw) = (random_endo(&mut rng, u), random_endo(&mut rng, w));
        let x = random_matrix(&mut rng, u, w);
        let pv = block(&pu, &x, &Matrix::zeros(F5, w, u), &pw);
        let p = random_invertible(&mut rng, u + w);
        let p_inv = p.inverse().unwrap();
        let pv = p.mul(&pv).unwrap().mul(&p_inv).unwrap();
        let incl = Matrix::identity(F5, u).vstack(&Matrix::zeros(F5, w, u)).unwrap();
        let proj = Matrix::zeros(F5, w, u).hstack(&Matrix::identity(F5, w)).unwrap();
        let a1 = p.mul(&incl).unwrap();
        let a2 = proj.mul(&p_inv).unwrap();
        let ok = check_algebraic_exactness(
            &EndoSpace::new(pu).unwrap(), &a1, &EndoSpace::new(pv).unwrap(), &a2, &EndoSpace::new(pw).unwrap(),
        ).unwrap();
        prop_assert!(ok);
    }
}
