//! Abelian extensions `0 → M → R̂ → R → 0` realized on `R ⊕ M`, the
//! 2-cocycles they determine, and their classification.
//!
//! On `R ⊕ M` the basis lists `R` first, then `M`.

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{AlgebraError, AvBimodule, AveragingAlgebra};
use crate::complexes::{assemble_ava_complex, ava_differential, cochain_dim, cohomology_representatives, delta_matrix, phi_matrix, ComplexError};
use crate::matrix::{DenseMatrix, LinalgError};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExtensionError {
    #[error("datum shape mismatch: {0}")]
    Shape(&'static str),
    #[error("the marked ideal does not square to zero")]
    NotAbelian,
    #[error("the operator does not preserve the marked ideal")]
    NotStable,
    #[error("the maps do not form a short exact sequence of algebras: {0}")]
    NotExact(&'static str),
    #[error("the section is not right inverse to the projection")]
    NotASection,
    #[error("datum {0} is not a 2-cocycle")]
    NotACocycle(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `ψ: R ⊗ R → M` and `χ: R → M` in cochain layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionDatum {
    pub psi: Vec<Scalar>,
    pub chi: Vec<Scalar>,
}

impl ExtensionDatum {
    pub fn zero(m: &AvBimodule) -> Self {
        let f = m.field();
        ExtensionDatum { psi: vec![f.zero(); cochain_dim(m, 2)], chi: vec![f.zero(); cochain_dim(m, 1)] }
    }

    /// `(ψ, χ)` as a degree-2 cochain of the total complex.
    pub fn packaged(&self) -> Vec<Scalar> {
        let mut v = self.psi.clone();
        v.extend(self.chi.iter().cloned());
        v
    }

    pub fn from_packaged(m: &AvBimodule, v: &[Scalar]) -> Result<Self, ExtensionError> {
        let n = cochain_dim(m, 2);
        if v.len() != n + cochain_dim(m, 1) {
            return Err(ExtensionError::Shape("packaged length"));
        }
        Ok(ExtensionDatum { psi: v[..n].to_vec(), chi: v[n..].to_vec() })
    }

    fn check(&self, m: &AvBimodule) -> Result<(), ExtensionError> {
        if self.psi.len() != cochain_dim(m, 2) || self.chi.len() != cochain_dim(m, 1) {
            return Err(ExtensionError::Shape("psi needs dim R^2 * dim M and chi dim R * dim M coefficients"));
        }
        Ok(())
    }
}

pub fn is_cocycle(m: &AvBimodule, datum: &ExtensionDatum) -> Result<bool, ExtensionError> {
    datum.check(m)?;
    Ok(ava_differential(m, 2).mul_vec(&datum.packaged()).iter().all(Scalar::is_zero))
}

/// `R ⊕ M` with `(x,m)(y,n) = (xy, xn + my + ψ(x,y))` and
/// `A(x,m) = (A(x), χ(x) + A_M(m))`. Not necessarily an averaging algebra.
pub fn extension_from_cocycle(alg: &AveragingAlgebra, m: &AvBimodule, datum: &ExtensionDatum) -> Result<AveragingAlgebra, ExtensionError> {
    datum.check(m)?;
    let f = alg.field();
    let (dr, dm) = (alg.dim(), m.dim());
    let total = dr + dm;
    let product = |i: usize, j: usize| {
        let mut out = vec![f.zero(); total];
        match (i < dr, j < dr) {
            (true, true) => {
                for k in 0..dr {
                    out[k] = alg.c(i, j, k).clone();
                }
                for k in 0..dm {
                    out[dr + k] = datum.psi[(i * dr + j) * dm + k].clone();
                }
            }
            (true, false) => {
                for (k, x) in m.left(i).column(j - dr).into_iter().enumerate() {
                    out[dr + k] = x;
                }
            }
            (false, true) => {
                for (k, x) in m.right(j).column(i - dr).into_iter().enumerate() {
                    out[dr + k] = x;
                }
            }
            (false, false) => {}
        }
        out
    };
    let mut op = DenseMatrix::zeros(f, total, total);
    for i in 0..dr {
        for k in 0..dr {
            op.set(k, i, alg.operator().get(k, i).clone());
        }
        for k in 0..dm {
            op.set(dr + k, i, datum.chi[i * dm + k].clone());
        }
    }
    for a in 0..dm {
        for k in 0..dm {
            op.set(dr + k, dr + a, m.operator().get(k, a).clone());
        }
    }
    Ok(AveragingAlgebra::from_fn(f, total, product, op)?)
}

/// An algebra `total` with an injection `inclusion: M → total` and a
/// surjection `projection: total → R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedExtension {
    pub total: AveragingAlgebra,
    pub base: AveragingAlgebra,
    pub inclusion: DenseMatrix,
    pub projection: DenseMatrix,
}

impl MarkedExtension {
    /// The extension on `R ⊕ M` built from `datum`, with the coordinate maps.
    pub fn on_direct_sum(alg: &AveragingAlgebra, m: &AvBimodule, datum: &ExtensionDatum) -> Result<Self, ExtensionError> {
        let total = extension_from_cocycle(alg, m, datum)?;
        let f = alg.field();
        let (dr, dm) = (alg.dim(), m.dim());
        let mut inclusion = DenseMatrix::zeros(f, dr + dm, dm);
        let mut projection = DenseMatrix::zeros(f, dr, dr + dm);
        for a in 0..dm {
            inclusion.set(dr + a, a, f.one());
        }
        for i in 0..dr {
            projection.set(i, i, f.one());
        }
        Ok(MarkedExtension { total, base: alg.clone(), inclusion, projection })
    }

    /// `s(r) = (r, 0)` on a direct-sum extension.
    pub fn canonical_section(&self) -> DenseMatrix {
        let f = self.base.field();
        let dr = self.base.dim();
        let mut s = DenseMatrix::zeros(f, self.total.dim(), dr);
        for i in 0..dr {
            s.set(i, i, f.one());
        }
        s
    }
}

fn columns_of(m: &DenseMatrix) -> Vec<Vec<Scalar>> {
    (0..m.cols()).map(|j| m.column(j)).collect()
}

fn is_homomorphism(f: &DenseMatrix, src: &AveragingAlgebra, dst: &AveragingAlgebra) -> bool {
    let imgs = columns_of(f);
    for i in 0..src.dim() {
        for j in 0..src.dim() {
            let lhs = f.mul_vec(&src.product(&src.basis_vector(i), &src.basis_vector(j)));
            if lhs != dst.product(&imgs[i], &imgs[j]) {
                return false;
            }
        }
    }
    f.mul(src.operator()).ok() == dst.operator().mul(f).ok()
}

/// `f: src → dst` preserves product and operator.
pub fn is_morphism(f: &DenseMatrix, src: &AveragingAlgebra, dst: &AveragingAlgebra) -> bool {
    f.rows() == dst.dim() && f.cols() == src.dim() && is_homomorphism(f, src, dst)
}

/// `ψ(x,y) = s(x)s(y) − s(xy)`, `χ(x) = Â(s(x)) − s(A(x))` and the induced
/// bimodule `rm = s(r)m`, `mr = ms(r)`.
pub fn cocycle_from_section(ext: &MarkedExtension, section: &DenseMatrix) -> Result<(ExtensionDatum, AvBimodule), ExtensionError> {
    let (total, base) = (&ext.total, &ext.base);
    let f = base.field();
    let (dt, dr) = (total.dim(), base.dim());
    let dm = ext.inclusion.cols();
    if ext.inclusion.rows() != dt || ext.projection.rows() != dr || ext.projection.cols() != dt || dm + dr != dt {
        return Err(ExtensionError::Shape("inclusion and projection dimensions"));
    }
    if section.rows() != dt || section.cols() != dr {
        return Err(ExtensionError::Shape("section dimensions"));
    }
    if ext.inclusion.rank() != dm || !ext.projection.mul(&ext.inclusion)?.is_zero() {
        return Err(ExtensionError::NotExact("inclusion must be injective with image in the kernel"));
    }
    if ext.projection.mul(section)? != DenseMatrix::identity(f, dr) {
        return Err(ExtensionError::NotASection);
    }
    let incl = columns_of(&ext.inclusion);
    for u in &incl {
        for v in &incl {
            if !total.product(u, v).iter().all(Scalar::is_zero) {
                return Err(ExtensionError::NotAbelian);
            }
        }
    }
    let pull = |v: &[Scalar]| ext.inclusion.solve(v);
    let mut am = Vec::with_capacity(dm);
    for u in &incl {
        am.push(pull(&total.apply(u)).ok_or(ExtensionError::NotStable)?);
    }
    let am = DenseMatrix::from_columns(f, dm, &am);
    if !is_homomorphism(&ext.projection, total, base) {
        return Err(ExtensionError::NotExact("projection is not a morphism"));
    }

    let s = columns_of(section);
    let not_ideal = ExtensionError::NotExact("the marked subspace is not an ideal");
    let mut left = Vec::with_capacity(dr);
    let mut right = Vec::with_capacity(dr);
    for si in &s {
        let mut l = Vec::with_capacity(dm);
        let mut r = Vec::with_capacity(dm);
        for u in &incl {
            l.push(pull(&total.product(si, u)).ok_or(not_ideal.clone())?);
            r.push(pull(&total.product(u, si)).ok_or(not_ideal.clone())?);
        }
        left.push(DenseMatrix::from_columns(f, dm, &l));
        right.push(DenseMatrix::from_columns(f, dm, &r));
    }
    let module = AvBimodule::new(base.clone(), dm, left, right, am)?;

    let kernel = ExtensionError::NotExact("kernel of the projection exceeds the marked ideal");
    let mut psi = Vec::with_capacity(dr * dr * dm);
    for i in 0..dr {
        for j in 0..dr {
            let sxy = section.mul_vec(&base.product(&base.basis_vector(i), &base.basis_vector(j)));
            let diff: Vec<Scalar> = total.product(&s[i], &s[j]).iter().zip(&sxy).map(|(a, b)| a - b).collect();
            psi.extend(pull(&diff).ok_or(kernel.clone())?);
        }
    }
    let mut chi = Vec::with_capacity(dr * dm);
    for i in 0..dr {
        let sa = section.mul_vec(&base.apply(&base.basis_vector(i)));
        let diff: Vec<Scalar> = total.apply(&s[i]).iter().zip(&sa).map(|(a, b)| a - b).collect();
        chi.extend(pull(&diff).ok_or(kernel.clone())?);
    }
    Ok((ExtensionDatum { psi, chi }, module))
}

/// The total differential of `(γ, 0)`: `(δγ, −Φ^1 γ)`.
pub fn coboundary(m: &AvBimodule, gamma: &[Scalar]) -> Result<ExtensionDatum, ExtensionError> {
    if gamma.len() != cochain_dim(m, 1) {
        return Err(ExtensionError::Shape("gamma needs dim R * dim M coefficients"));
    }
    let psi = delta_matrix(m, 1).mul_vec(gamma);
    let chi = phi_matrix(m, 1).mul_vec(gamma).into_iter().map(|x| -x).collect();
    Ok(ExtensionDatum { psi, chi })
}

/// `γ` with `d1 − d2 = (δγ, −Φ^1 γ)`, if any; then `ζ(r, m) = (r, γ(r) + m)`
/// is an isomorphism from the extension of `d1` to that of `d2`.
pub fn extensions_isomorphic(m: &AvBimodule, d1: &ExtensionDatum, d2: &ExtensionDatum) -> Result<Option<Vec<Scalar>>, ExtensionError> {
    for (k, d) in [d1, d2].into_iter().enumerate() {
        if !is_cocycle(m, d)? {
            return Err(ExtensionError::NotACocycle(k + 1));
        }
    }
    let system = delta_matrix(m, 1).vstack(&phi_matrix(m, 1).neg())?;
    let rhs: Vec<Scalar> = d1.packaged().iter().zip(d2.packaged()).map(|(a, b)| a - &b).collect();
    Ok(system.solve(&rhs))
}

/// `ζ(r, m) = (r, γ(r) + m)` on `R ⊕ M`.
pub fn isomorphism_from(m: &AvBimodule, gamma: &[Scalar]) -> DenseMatrix {
    let f = m.field();
    let (dr, dm) = (m.base().dim(), m.dim());
    let mut z = DenseMatrix::identity(f, dr + dm);
    for i in 0..dr {
        for k in 0..dm {
            z.set(dr + k, i, gamma[i * dm + k].clone());
        }
    }
    z
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    /// `dim H^2` of the total complex with coefficients in `M`.
    pub dim: usize,
    /// Cocycles whose classes form a basis.
    pub representatives: Vec<ExtensionDatum>,
}

pub fn classify(m: &AvBimodule) -> Result<Classification, ExtensionError> {
    let c = assemble_ava_complex(m, 3)?;
    let representatives = cohomology_representatives(&c, 2)
        .into_iter()
        .map(|v| ExtensionDatum::from_packaged(m, &v))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Classification { dim: representatives.len(), representatives })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{regular_bimodule, semidirect_sum, verify_averaging_algebra};
    use crate::catalog;
    use crate::scalar::Field;

    const Q: Field = Field::Rational;

    #[test]
    fn zero_datum_is_the_semidirect_sum() {
        for e in catalog::all(Q) {
            let m = regular_bimodule(&e.algebra);
            let ext = extension_from_cocycle(&e.algebra, &m, &ExtensionDatum::zero(&m)).unwrap();
            assert_eq!(ext, semidirect_sum(&e.algebra, &m), "{}", e.name);
        }
    }

    #[test]
    fn zero_module_has_no_classes() {
        let alg = catalog::k2_projection(Q);
        let c = classify(&AvBimodule::zero(alg)).unwrap();
        assert_eq!(c.dim, 0);
    }

    #[test]
    fn line_with_identity() {
        // R = k, A = id, M = k: H^2 is spanned by (0, χ) with χ = 1.
        let m = regular_bimodule(&catalog::field_identity(Q));
        let c = classify(&m).unwrap();
        assert_eq!(c.dim, 1);
        let ext = extension_from_cocycle(m.base(), &m, &c.representatives[0]).unwrap();
        assert!(verify_averaging_algebra(&ext).passed());
    }

    #[test]
    fn section_must_split_projection() {
        let alg = catalog::field_identity(Q);
        let m = regular_bimodule(&alg);
        let ext = MarkedExtension::on_direct_sum(&alg, &m, &ExtensionDatum::zero(&m)).unwrap();
        let bad = DenseMatrix::from_i64(Q, &[&[2], &[0]]);
        assert_eq!(cocycle_from_section(&ext, &bad).unwrap_err(), ExtensionError::NotASection);
    }

    #[test]
    fn non_abelian_and_unstable_ideals() {
        // k² with M = second factor: M·M ≠ 0.
        let k2 = catalog::k2_projection(Q);
        let base = catalog::field_identity(Q);
        let ext = MarkedExtension {
            total: k2.clone(),
            base: base.clone(),
            inclusion: DenseMatrix::from_i64(Q, &[&[0], &[1]]),
            projection: DenseMatrix::from_i64(Q, &[&[1, 0]]),
        };
        assert_eq!(cocycle_from_section(&ext, &DenseMatrix::from_i64(Q, &[&[1], &[0]])).unwrap_err(), ExtensionError::NotAbelian);

        // Dual numbers, M = span(x), operator sending x to 1.
        let dual = catalog::dual_numbers_projection(Q).with_operator(DenseMatrix::from_i64(Q, &[&[0, 1], &[0, 0]])).unwrap();
        let base0 = catalog::field_identity(Q).with_operator(DenseMatrix::zeros(Q, 1, 1)).unwrap();
        let ext = MarkedExtension {
            total: dual,
            base: base0,
            inclusion: DenseMatrix::from_i64(Q, &[&[0], &[1]]),
            projection: DenseMatrix::from_i64(Q, &[&[1, 0]]),
        };
        assert_eq!(cocycle_from_section(&ext, &DenseMatrix::from_i64(Q, &[&[1], &[0]])).unwrap_err(), ExtensionError::NotStable);
    }
}
