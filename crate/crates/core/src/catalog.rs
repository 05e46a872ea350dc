//! Small named averaging algebras used as fixtures and CLI examples.

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::AveragingAlgebra;
use crate::matrix::DenseMatrix;
use crate::scalar::{Field, Scalar};

fn build(field: Field, dim: usize, products: &[(usize, usize, usize, i64)], op: &[&[i64]], unit: Option<&[i64]>) -> AveragingAlgebra {
    let mut mul = vec![field.zero(); dim * dim * dim];
    for &(i, j, k, v) in products {
        mul[(i * dim + j) * dim + k] = field.from_i64(v);
    }
    let avg = if dim == 0 { DenseMatrix::zeros(field, 0, 0) } else { DenseMatrix::from_i64(field, op) };
    let alg = AveragingAlgebra::new(field, dim, mul, avg).expect("catalog shapes");
    match unit {
        Some(u) => alg.with_unit(u.iter().map(|&x| field.from_i64(x)).collect()).expect("unit length"),
        None => alg,
    }
}

/// The 0-dimensional algebra.
pub fn empty(field: Field) -> AveragingAlgebra {
    build(field, 0, &[], &[], None)
}

/// One-dimensional algebra with zero product and zero operator.
pub fn zero_product_line(field: Field) -> AveragingAlgebra {
    build(field, 1, &[], &[&[0]], None)
}

/// The ground field with the identity operator.
pub fn field_identity(field: Field) -> AveragingAlgebra {
    build(field, 1, &[(0, 0, 0, 1)], &[&[1]], Some(&[1]))
}

/// The ground field with the scalar operator `2·id`.
pub fn field_scalar(field: Field) -> AveragingAlgebra {
    build(field, 1, &[(0, 0, 0, 1)], &[&[2]], Some(&[1]))
}

const K2: &[(usize, usize, usize, i64)] = &[(0, 0, 0, 1), (1, 1, 1, 1)];

/// `k × k` with `A = diag(1, 0)`.
pub fn k2_projection(field: Field) -> AveragingAlgebra {
    build(field, 2, K2, &[&[1, 0], &[0, 0]], Some(&[1, 1]))
}

/// `k × k` with `A = diag(0, 1)`.
pub fn k2_projection_second(field: Field) -> AveragingAlgebra {
    build(field, 2, K2, &[&[0, 0], &[0, 1]], Some(&[1, 1]))
}

/// `k × k` with `A(x) = (x1 + x2)/2 · (1, 1)`, the conditional expectation onto constants.
pub fn k2_expectation(field: Field) -> AveragingAlgebra {
    let half = field.fraction(1, 2).expect("odd characteristic");
    let avg = DenseMatrix::from_rows(field, vec![vec![half.clone(), half.clone()], vec![half.clone(), half]]).expect("2x2");
    build(field, 2, K2, &[&[0, 0], &[0, 0]], Some(&[1, 1])).with_operator(avg).expect("2x2")
}

const DUAL: &[(usize, usize, usize, i64)] = &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)];

/// `k[x]/(x²)` in the basis `(1, x)` with `A = diag(1, 0)`.
pub fn dual_numbers_projection(field: Field) -> AveragingAlgebra {
    build(field, 2, DUAL, &[&[1, 0], &[0, 0]], Some(&[1, 0]))
}

/// `k[x]/(x²)` with the nilpotent operator `A(1) = x, A(x) = 0`.
pub fn dual_numbers_nilpotent(field: Field) -> AveragingAlgebra {
    build(field, 2, DUAL, &[&[0, 0], &[1, 0]], Some(&[1, 0]))
}

/// Upper triangular 2×2 matrices in the basis `(E11, E12, E22)`.
const T2: &[(usize, usize, usize, i64)] = &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 2, 1, 1), (2, 2, 2, 1)];

/// Upper triangular matrices with the projection onto the diagonal.
pub fn triangular_diagonal(field: Field) -> AveragingAlgebra {
    build(field, 3, T2, &[&[1, 0, 0], &[0, 0, 0], &[0, 0, 1]], Some(&[1, 0, 1]))
}

/// Upper triangular matrices with an operator found by rejection sampling.
pub fn triangular_sampled_a(field: Field) -> AveragingAlgebra {
    build(field, 3, T2, &[&[-1, 0, 0], &[1, 0, 0], &[0, 0, 0]], Some(&[1, 0, 1]))
}

/// Upper triangular matrices with another sampled operator.
pub fn triangular_sampled_b(field: Field) -> AveragingAlgebra {
    build(field, 3, T2, &[&[0, 1, 0], &[0, 0, 0], &[0, 1, 0]], Some(&[1, 0, 1]))
}

pub struct CatalogEntry {
    pub name: &'static str,
    pub algebra: AveragingAlgebra,
}

/// Every catalog algebra, in a fixed order.
pub fn all(field: Field) -> Vec<CatalogEntry> {
    let entries: [(&'static str, fn(Field) -> AveragingAlgebra); 13] = [
        ("empty", empty),
        ("zero-line", zero_product_line),
        ("k-identity", field_identity),
        ("k-scalar", field_scalar),
        ("k2-proj", k2_projection),
        ("k2-proj-second", k2_projection_second),
        ("k2-expectation", k2_expectation),
        ("dual-proj", dual_numbers_projection),
        ("dual-nilpotent", dual_numbers_nilpotent),
        ("t2-diagonal", triangular_diagonal),
        ("t2-sampled-a", triangular_sampled_a),
        ("t2-sampled-b", triangular_sampled_b),
        ("k-zero-op", |f| field_identity(f).with_operator(DenseMatrix::zeros(f, 1, 1)).expect("1x1")),
    ];
    entries.into_iter().map(|(name, make)| CatalogEntry { name, algebra: make(field) }).collect()
}

/// Scalars helper for callers building vectors by hand.
pub fn ints(field: Field, xs: &[i64]) -> Vec<Scalar> {
    xs.iter().map(|&x| field.from_i64(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::verify_averaging_algebra;

    #[test]
    fn every_entry_is_valid() {
        for f in [Field::Rational, Field::Prime(7)] {
            for e in all(f) {
                let r = verify_averaging_algebra(&e.algebra);
                assert!(r.passed(), "{} failed: {:?}", e.name, r);
            }
        }
    }
}
