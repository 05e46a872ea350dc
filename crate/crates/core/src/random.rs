//! Random instances by rejection sampling: draw a small-integer operator and
//! keep it only if it passes the averaging axioms.

use alloc::vec::Vec;

use rand::Rng;

use crate::algebra::{verify_averaging_algebra, AveragingAlgebra};
use crate::catalog;
use crate::matrix::DenseMatrix;
use crate::scalar::{Field, Scalar};

/// Integer entry in `[-bound, bound]`, zero with probability about one half.
pub fn small_int<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> i64 {
    if rng.gen_bool(0.5) {
        0
    } else {
        rng.gen_range(-bound..=bound)
    }
}

pub fn scalars<R: Rng + ?Sized>(rng: &mut R, field: Field, n: usize, bound: i64) -> Vec<Scalar> {
    (0..n).map(|_| field.from_i64(small_int(rng, bound))).collect()
}

pub fn matrix<R: Rng + ?Sized>(rng: &mut R, field: Field, rows: usize, cols: usize, bound: i64) -> DenseMatrix {
    DenseMatrix::from_entries(field, rows, cols, scalars(rng, field, rows * cols, bound)).expect("shape")
}

/// Associative algebras of dimension at most 3 to draw operators on.
pub fn base_algebras(field: Field) -> Vec<AveragingAlgebra> {
    let mut out: Vec<_> = [
        catalog::field_identity(field),
        catalog::zero_product_line(field),
        catalog::k2_projection(field),
        catalog::dual_numbers_projection(field),
        catalog::triangular_diagonal(field),
    ]
    .into_iter()
    .collect();
    // k × k × k
    let d = 3;
    let mut mul = alloc::vec![field.zero(); d * d * d];
    for i in 0..d {
        mul[(i * d + i) * d + i] = field.one();
    }
    out.push(AveragingAlgebra::new(field, d, mul, DenseMatrix::zeros(field, d, d)).expect("shape"));
    // k[x]/(x³)
    let mut mul = alloc::vec![field.zero(); d * d * d];
    for i in 0..d {
        for j in 0..d - i {
            mul[(i * d + j) * d + i + j] = field.one();
        }
    }
    out.push(AveragingAlgebra::new(field, d, mul, DenseMatrix::zeros(field, d, d)).expect("shape"));
    out
}

/// Draw operators on `base` until one is averaging, giving up after `tries`.
pub fn averaging_operator_on<R: Rng + ?Sized>(rng: &mut R, base: &AveragingAlgebra, tries: usize) -> Option<AveragingAlgebra> {
    let d = base.dim();
    for _ in 0..tries {
        let op = matrix(rng, base.field(), d, d, 1);
        let alg = base.with_operator(op).expect("square");
        if verify_averaging_algebra(&alg).passed() {
            return Some(alg);
        }
    }
    None
}

/// A valid averaging algebra of dimension at most 3.
pub fn averaging_algebra<R: Rng + ?Sized>(rng: &mut R, field: Field) -> AveragingAlgebra {
    let bases = base_algebras(field);
    loop {
        let base = &bases[rng.gen_range(0..bases.len())];
        if let Some(alg) = averaging_operator_on(rng, base, 200) {
            return alg;
        }
    }
}
