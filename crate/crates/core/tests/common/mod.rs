#![allow(dead_code)]

use eewt_core::codes::LinearCode;
use eewt_core::rng::{self, SeededRng};
use eewt_core::{Field, Gf, Matrix, NestedScheme};

pub fn field(p: u32, m: u32) -> Field {
    Field::with_default_modulus(p, m).unwrap()
}

pub fn rng_for(seed: u64) -> SeededRng {
    rng::seeded(seed, rng::stream::SAMPLING)
}

pub fn random_elem(f: &Field, rng: &mut SeededRng) -> Gf {
    f.random(rng)
}

pub fn random_matrix(f: &Field, rows: usize, cols: usize, rng: &mut SeededRng) -> Matrix {
    Matrix::from_fn(f, rows, cols, |_, _| random_elem(f, rng))
}

/// Random matrix of full row rank (rejection sampling).
pub fn random_full_rank(f: &Field, rows: usize, cols: usize, rng: &mut SeededRng) -> Matrix {
    assert!(rows <= cols);
    loop {
        let m = random_matrix(f, rows, cols, rng);
        if m.rank() == rows {
            return m;
        }
    }
}

/// Random nested pair with trivially intersecting C (dim k) and C* (dim ks),
/// nu = n and mu = n - k.
pub fn random_scheme(f: &Field, n: usize, k: usize, ks: usize, rng: &mut SeededRng) -> NestedScheme {
    let g = random_full_rank(f, k + ks, n, rng);
    let msg = LinearCode::new(g.select_rows(&(0..k).collect::<Vec<_>>())).unwrap();
    let rnd = LinearCode::new(g.select_rows(&(k..k + ks).collect::<Vec<_>>())).unwrap();
    NestedScheme::new(n, n, n - k, msg, rnd).unwrap()
}
