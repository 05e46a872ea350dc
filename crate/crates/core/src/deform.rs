//! Truncated formal deformations `(μ_t, A_t)` of an averaging algebra,
//! their order-by-order residuals, transport along formal isomorphisms and
//! the search for a trivializing isomorphism.
//!
//! Bilinear maps on `R` are flat tensors in the structure-constant layout
//! `(i * d + j) * d + k`; trilinear residuals use `((i * d + j) * d + l) * d + k`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{regular_bimodule, AveragingAlgebra};
use crate::complexes::{assemble_ava_complex, cohomology_representatives, delta_matrix, phi_matrix, ComplexError};
use crate::matrix::DenseMatrix;
use crate::report::{Check, Report};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DeformError {
    #[error("order {order} exceeds the jet order {max}")]
    OrderOutOfRange { order: usize, max: usize },
    #[error("jet shape mismatch: {0}")]
    Shape(&'static str),
    #[error("leading coefficients differ from the base structure")]
    BaseMismatch,
    #[error("residuals do not vanish at order 1")]
    NotADeformationAtOrder1,
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationJet {
    base: AveragingAlgebra,
    mu: Vec<Vec<Scalar>>,
    a: Vec<DenseMatrix>,
}

impl DeformationJet {
    /// `mu[0]` and `a[0]` must equal the base product and operator.
    pub fn new(base: AveragingAlgebra, mu: Vec<Vec<Scalar>>, a: Vec<DenseMatrix>) -> Result<Self, DeformError> {
        let d = base.dim();
        if mu.is_empty() || mu.len() != a.len() {
            return Err(DeformError::Shape("need equally many product and operator coefficients"));
        }
        if mu.iter().any(|m| m.len() != d * d * d) {
            return Err(DeformError::Shape("product coefficient length is not dim^3"));
        }
        if a.iter().any(|m| m.rows() != d || m.cols() != d) {
            return Err(DeformError::Shape("operator coefficient is not dim x dim"));
        }
        if mu[0] != base.structure_constants() || a[0] != *base.operator() {
            return Err(DeformError::BaseMismatch);
        }
        Ok(DeformationJet { base, mu, a })
    }

    /// The jet with all higher coefficients zero.
    pub fn constant(base: &AveragingAlgebra, order: usize) -> Self {
        let f = base.field();
        let d = base.dim();
        let mut mu = vec![vec![f.zero(); d * d * d]; order + 1];
        mu[0] = base.structure_constants().to_vec();
        let mut a = vec![DenseMatrix::zeros(f, d, d); order + 1];
        a[0] = base.operator().clone();
        DeformationJet { base: base.clone(), mu, a }
    }

    /// Constant jet with `(μ_1, A_1)` replaced.
    pub fn first_order(base: &AveragingAlgebra, order: usize, mu1: Vec<Scalar>, a1: DenseMatrix) -> Result<Self, DeformError> {
        let mut jet = DeformationJet::constant(base, order.max(1));
        jet.mu[1] = mu1;
        jet.a[1] = a1;
        DeformationJet::new(jet.base, jet.mu, jet.a)
    }

    pub fn base(&self) -> &AveragingAlgebra {
        &self.base
    }

    pub fn order(&self) -> usize {
        self.mu.len() - 1
    }

    pub fn mu(&self, i: usize) -> &[Scalar] {
        &self.mu[i]
    }

    pub fn a(&self, i: usize) -> &DenseMatrix {
        &self.a[i]
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order()) + 1;
        DeformationJet { base: self.base.clone(), mu: self.mu[..n].to_vec(), a: self.a[..n].to_vec() }
    }

    fn is_constant(&self) -> bool {
        self.mu[1..].iter().all(|m| m.iter().all(Scalar::is_zero)) && self.a[1..].iter().all(DenseMatrix::is_zero)
    }
}

/// `φ_t = Σ φ_i t^i` with `φ_0 = id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalIso {
    phi: Vec<DenseMatrix>,
}

impl FormalIso {
    pub fn identity(field: Field, dim: usize, order: usize) -> Self {
        let mut phi = vec![DenseMatrix::zeros(field, dim, dim); order + 1];
        phi[0] = DenseMatrix::identity(field, dim);
        FormalIso { phi }
    }

    pub fn new(phi: Vec<DenseMatrix>) -> Result<Self, DeformError> {
        let first = phi.first().ok_or(DeformError::Shape("empty series"))?;
        let d = first.rows();
        if phi.iter().any(|m| m.rows() != d || m.cols() != d) {
            return Err(DeformError::Shape("series coefficients are not square of one size"));
        }
        if *first != DenseMatrix::identity(first.field(), d) {
            return Err(DeformError::Shape("constant term must be the identity"));
        }
        Ok(FormalIso { phi })
    }

    pub fn order(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn coefficients(&self) -> &[DenseMatrix] {
        &self.phi
    }

    /// Series product `self ∘ other`, truncated to the shorter order.
    pub fn compose(&self, other: &FormalIso) -> FormalIso {
        let n = self.order().min(other.order());
        FormalIso { phi: series_product(&self.phi[..=n], &other.phi[..=n]) }
    }

    /// Series inverse.
    pub fn inverse(&self) -> FormalIso {
        let field = self.phi[0].field();
        let d = self.phi[0].rows();
        let mut psi = vec![self.phi[0].clone()];
        for n in 1..self.phi.len() {
            let mut acc = DenseMatrix::zeros(field, d, d);
            for k in 1..=n {
                acc = acc.sub(&self.phi[k].mul(&psi[n - k]).expect("square")).expect("square");
            }
            psi.push(acc);
        }
        FormalIso { phi: psi }
    }
}

fn series_product(a: &[DenseMatrix], b: &[DenseMatrix]) -> Vec<DenseMatrix> {
    (0..a.len())
        .map(|n| {
            let mut acc = DenseMatrix::zeros(a[0].field(), a[0].rows(), b[0].cols());
            for k in 0..=n {
                acc = acc.add(&a[k].mul(&b[n - k]).expect("square")).expect("square");
            }
            acc
        })
        .collect()
}

fn bilinear(mu: &[Scalar], d: usize, x: &[Scalar], y: &[Scalar], field: Field) -> Vec<Scalar> {
    let mut out = vec![field.zero(); d];
    for i in 0..d {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..d {
            if y[j].is_zero() {
                continue;
            }
            let w = &x[i] * &y[j];
            for k in 0..d {
                out[k].add_product(&w, &mu[(i * d + j) * d + k]);
            }
        }
    }
    out
}

/// `h ∘ μ ∘ (f ⊗ g)` as a flat bilinear tensor.
fn sandwich(field: Field, d: usize, h: &DenseMatrix, mu: &[Scalar], f: &DenseMatrix, g: &DenseMatrix) -> Vec<Scalar> {
    let fs: Vec<Vec<Scalar>> = (0..d).map(|i| f.column(i)).collect();
    let gs: Vec<Vec<Scalar>> = (0..d).map(|j| g.column(j)).collect();
    let mut out = Vec::with_capacity(d * d * d);
    for fi in &fs {
        for gj in &gs {
            out.extend(h.mul_vec(&bilinear(mu, d, fi, gj, field)));
        }
    }
    out
}

/// `outer(inner(x, y), z)` when `left`, else `outer(x, inner(y, z))`.
fn nest(field: Field, d: usize, outer: &[Scalar], inner: &[Scalar], left: bool) -> Vec<Scalar> {
    let e = |i: usize| {
        let mut v = vec![field.zero(); d];
        v[i] = field.one();
        v
    };
    let mut out = Vec::with_capacity(d * d * d * d);
    for i in 0..d {
        for j in 0..d {
            for l in 0..d {
                let v = if left {
                    bilinear(outer, d, &bilinear(inner, d, &e(i), &e(j), field), &e(l), field)
                } else {
                    bilinear(outer, d, &e(i), &bilinear(inner, d, &e(j), &e(l), field), field)
                };
                out.extend(v);
            }
        }
    }
    out
}

fn add_into(acc: &mut [Scalar], v: &[Scalar]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += b;
    }
}

fn sub_into(acc: &mut [Scalar], v: &[Scalar]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a -= b;
    }
}

/// Coefficient of `t^n` in the three deformation equations, each as
/// left side minus right side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residuals {
    /// `Σ μ_i(μ_{n-i} ⊗ id) − μ_i(id ⊗ μ_{n-i})`, trilinear.
    pub associativity: Vec<Scalar>,
    /// `Σ μ_k(A_i ⊗ A_j) − A_k μ_j(A_i ⊗ id)`.
    pub averaging_left: Vec<Scalar>,
    /// `Σ μ_k(A_i ⊗ A_j) − A_k μ_j(id ⊗ A_i)`.
    pub averaging_right: Vec<Scalar>,
}

impl Residuals {
    pub fn vanish(&self) -> bool {
        [&self.associativity, &self.averaging_left, &self.averaging_right].iter().all(|v| v.iter().all(Scalar::is_zero))
    }
}

pub fn deformation_residuals(jet: &DeformationJet, n: usize) -> Result<Residuals, DeformError> {
    if n > jet.order() {
        return Err(DeformError::OrderOutOfRange { order: n, max: jet.order() });
    }
    let field = jet.base.field();
    let d = jet.base.dim();
    let id = DenseMatrix::identity(field, d);
    let mut assoc = vec![field.zero(); d * d * d * d];
    for i in 0..=n {
        add_into(&mut assoc, &nest(field, d, &jet.mu[i], &jet.mu[n - i], true));
        sub_into(&mut assoc, &nest(field, d, &jet.mu[i], &jet.mu[n - i], false));
    }
    let mut lhs = vec![field.zero(); d * d * d];
    let mut rl = vec![field.zero(); d * d * d];
    let mut rr = vec![field.zero(); d * d * d];
    for i in 0..=n {
        for j in 0..=n - i {
            let k = n - i - j;
            add_into(&mut lhs, &sandwich(field, d, &id, &jet.mu[k], &jet.a[i], &jet.a[j]));
            add_into(&mut rl, &sandwich(field, d, &jet.a[k], &jet.mu[j], &jet.a[i], &id));
            add_into(&mut rr, &sandwich(field, d, &jet.a[k], &jet.mu[j], &id, &jet.a[i]));
        }
    }
    let mut left = lhs.clone();
    sub_into(&mut left, &rl);
    let mut right = lhs;
    sub_into(&mut right, &rr);
    Ok(Residuals { associativity: assoc, averaging_left: left, averaging_right: right })
}

/// `Hom(R, R)` coordinates of a matrix in cochain layout (`i * d + out`).
pub fn matrix_to_cochain(m: &DenseMatrix) -> Vec<Scalar> {
    m.transpose().entries().to_vec()
}

pub fn cochain_to_matrix(field: Field, d: usize, coeffs: &[Scalar]) -> DenseMatrix {
    DenseMatrix::from_entries(field, d, d, coeffs.to_vec()).expect("d*d coefficients").transpose()
}

/// `(μ, A)` as a degree-2 cochain of the total complex: `C^2_Alg ⊕ Hom(R, R)`.
pub fn package_pair(mu: &[Scalar], a: &DenseMatrix) -> Vec<Scalar> {
    let mut v = mu.to_vec();
    v.extend(matrix_to_cochain(a));
    v
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Infinitesimal {
    /// `(μ_1, A_1)` packaged by [`package_pair`].
    pub packaged: Vec<Scalar>,
    /// The total differential of `packaged`.
    pub differential: Vec<Scalar>,
    pub is_cocycle: bool,
}

/// Packages `(μ_1, A_1)` and applies the degree-2 total differential.
pub fn infinitesimal(jet: &DeformationJet) -> Result<Infinitesimal, DeformError> {
    if jet.order() < 1 {
        return Err(DeformError::OrderOutOfRange { order: 1, max: jet.order() });
    }
    let m = regular_bimodule(&jet.base);
    let packaged = package_pair(&jet.mu[1], &jet.a[1]);
    let differential = crate::complexes::ava_differential(&m, 2).mul_vec(&packaged);
    let is_cocycle = differential.iter().all(Scalar::is_zero);
    Ok(Infinitesimal { packaged, differential, is_cocycle })
}

/// As [`infinitesimal`], but refuses jets whose order-1 residuals do not vanish.
pub fn infinitesimal_is_cocycle(jet: &DeformationJet) -> Result<Infinitesimal, DeformError> {
    if !deformation_residuals(jet, 1)?.vanish() {
        return Err(DeformError::NotADeformationAtOrder1);
    }
    infinitesimal(jet)
}

/// The jet `(φ^{-1} μ_t (φ ⊗ φ), φ^{-1} A_t φ)` truncated at the jet order.
pub fn apply_formal_iso(jet: &DeformationJet, iso: &FormalIso) -> Result<DeformationJet, DeformError> {
    let n = jet.order();
    if iso.order() < n {
        return Err(DeformError::OrderOutOfRange { order: n, max: iso.order() });
    }
    let d = jet.base.dim();
    if iso.phi[0].rows() != d {
        return Err(DeformError::Shape("isomorphism dimension differs from the algebra"));
    }
    let field = jet.base.field();
    let phi = &iso.phi[..=n];
    let psi = iso.inverse().phi;
    let mut mu = Vec::with_capacity(n + 1);
    let mut a = Vec::with_capacity(n + 1);
    for order in 0..=n {
        let mut acc = vec![field.zero(); d * d * d];
        let mut op = DenseMatrix::zeros(field, d, d);
        for p in 0..=order {
            for b in 0..=order - p {
                let rest = order - p - b;
                for c in 0..=rest {
                    add_into(&mut acc, &sandwich(field, d, &psi[p], &jet.mu[b], &phi[c], &phi[rest - c]));
                }
                let t = psi[p].mul(&jet.a[b]).and_then(|x| x.mul(&phi[rest])).expect("square");
                op = op.add(&t).expect("square");
            }
        }
        mu.push(acc);
        a.push(op);
    }
    Ok(DeformationJet { base: jet.base.clone(), mu, a })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Triviality {
    /// `iso` transports the jet to the constant jet.
    Trivial(FormalIso),
    /// After trivializing below `order`, the coefficient pair at `order`
    /// (packaged by [`package_pair`]) is not of the form `(−δφ, Φ^1 φ)`.
    Obstructed { order: usize, representative: Vec<Scalar> },
}

/// Solves order by order for `φ_t` carrying the jet to the constant one.
pub fn triviality_search(jet: &DeformationJet, order: usize) -> Result<Triviality, DeformError> {
    if order > jet.order() {
        return Err(DeformError::OrderOutOfRange { order, max: jet.order() });
    }
    let field = jet.base.field();
    let d = jet.base.dim();
    let m = regular_bimodule(&jet.base);
    let system = delta_matrix(&m, 1).vstack(&phi_matrix(&m, 1)).expect("same width");
    let mut current = jet.truncate(order);
    let mut iso = FormalIso::identity(field, d, order);
    for k in 1..=order {
        let rhs = package_pair(&current.mu[k].iter().map(|x| -x.clone()).collect::<Vec<_>>(), &current.a[k]);
        if rhs.iter().all(Scalar::is_zero) {
            continue;
        }
        let Some(sol) = system.solve(&rhs) else {
            return Ok(Triviality::Obstructed { order: k, representative: package_pair(&current.mu[k], &current.a[k]) });
        };
        let mut step = FormalIso::identity(field, d, order);
        step.phi[k] = cochain_to_matrix(field, d, &sol);
        current = apply_formal_iso(&current, &step)?;
        iso = iso.compose(&step);
    }
    debug_assert!(current.is_constant());
    Ok(Triviality::Trivial(iso))
}

/// Second total cohomology of the regular bimodule, with a non-trivial
/// cocycle when it is nonzero.
pub fn rigidity_certificate(alg: &AveragingAlgebra) -> Result<Report, DeformError> {
    let c = assemble_ava_complex(&regular_bimodule(alg), 3)?;
    let reps = cohomology_representatives(&c, 2);
    let mut check = Check::new("second-cohomology").fact("dim", format!("{}", reps.len()));
    match reps.first() {
        None => check = check.fact("verdict", "rigid"),
        Some(z) => {
            let text: Vec<String> = z.iter().map(|x| format!("{x}")).collect();
            check = check.fact("verdict", "not certified rigid").fact("sample-cocycle", text.join(" "));
        }
    }
    let mut report = Report::new("rigidity");
    report.push(check);
    Ok(report)
}
