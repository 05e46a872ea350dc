//! Averaging algebras, their bimodules, and the derived constructions.

use alloc::vec;
use alloc::vec::Vec;

use crate::matrix::DenseMatrix;
use crate::report::{Check, Counterexample, Report};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(&'static str),
    #[error("entry from a different field")]
    FieldMismatch,
    #[error("no unit supplied")]
    MissingUnit,
}

/// Associative algebra with a linear operator, given by structure constants.
/// The operator is not assumed to be averaging; see [`verify_averaging_algebra`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AveragingAlgebra {
    field: Field,
    dim: usize,
    /// `mul[(i*dim + j)*dim + k]` is the coefficient of `e_k` in `e_i e_j`.
    mul: Vec<Scalar>,
    /// Column `i` is `A(e_i)`.
    avg: DenseMatrix,
    unit: Option<Vec<Scalar>>,
}

impl AveragingAlgebra {
    pub fn new(field: Field, dim: usize, mul: Vec<Scalar>, avg: DenseMatrix) -> Result<Self, AlgebraError> {
        if mul.len() != dim * dim * dim {
            return Err(AlgebraError::DimensionMismatch("structure constants must have dim^3 entries"));
        }
        if avg.rows() != dim || avg.cols() != dim {
            return Err(AlgebraError::DimensionMismatch("operator must be dim x dim"));
        }
        if avg.field() != field || mul.iter().any(|x| x.field() != field) {
            return Err(AlgebraError::FieldMismatch);
        }
        Ok(AveragingAlgebra { field, dim, mul, avg, unit: None })
    }

    /// Build from a product function on basis indices returning coordinates.
    pub fn from_fn(field: Field, dim: usize, product: impl Fn(usize, usize) -> Vec<Scalar>, avg: DenseMatrix) -> Result<Self, AlgebraError> {
        let mut mul = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let p = product(i, j);
                if p.len() != dim {
                    return Err(AlgebraError::DimensionMismatch("product vector length"));
                }
                mul.extend(p);
            }
        }
        Self::new(field, dim, mul, avg)
    }

    pub fn with_unit(mut self, unit: Vec<Scalar>) -> Result<Self, AlgebraError> {
        if unit.len() != self.dim {
            return Err(AlgebraError::DimensionMismatch("unit vector length"));
        }
        self.unit = Some(unit);
        Ok(self)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure_constants(&self) -> &[Scalar] {
        &self.mul
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.mul[(i * self.dim + j) * self.dim + k]
    }

    pub fn operator(&self) -> &DenseMatrix {
        &self.avg
    }

    pub fn unit(&self) -> Option<&[Scalar]> {
        self.unit.as_deref()
    }

    pub fn with_operator(&self, avg: DenseMatrix) -> Result<Self, AlgebraError> {
        let mut out = Self::new(self.field, self.dim, self.mul.clone(), avg)?;
        out.unit = self.unit.clone();
        Ok(out)
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        basis(self.field, self.dim, i)
    }

    pub fn product(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let d = self.dim;
        let mut out = vec![self.field.zero(); d];
        for i in 0..d {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if y[j].is_zero() {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for k in 0..d {
                    out[k].add_product(&xy, self.c(i, j, k));
                }
            }
        }
        out
    }

    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.avg.mul_vec(x)
    }

    /// Matrix of `m ↦ e_i m`.
    pub fn left_mult(&self, i: usize) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.field, self.dim, self.dim);
        for j in 0..self.dim {
            for k in 0..self.dim {
                m.set(k, j, self.c(i, j, k).clone());
            }
        }
        m
    }

    /// Matrix of `m ↦ m e_i`.
    pub fn right_mult(&self, i: usize) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.field, self.dim, self.dim);
        for j in 0..self.dim {
            for k in 0..self.dim {
                m.set(k, j, self.c(j, i, k).clone());
            }
        }
        m
    }

    /// Same algebra with the product replaced by `(x, y) ↦ f(x, y)` on basis vectors.
    fn with_product(&self, f: impl Fn(&[Scalar], &[Scalar]) -> Vec<Scalar>) -> AveragingAlgebra {
        let d = self.dim;
        let mut mul = Vec::with_capacity(d * d * d);
        for i in 0..d {
            for j in 0..d {
                mul.extend(f(&self.basis_vector(i), &self.basis_vector(j)));
            }
        }
        AveragingAlgebra { field: self.field, dim: d, mul, avg: self.avg.clone(), unit: None }
    }
}

pub(crate) fn basis(field: Field, dim: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); dim];
    v[i] = field.one();
    v
}

/// Bimodule over an averaging algebra with a compatible operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvBimodule {
    base: AveragingAlgebra,
    dim: usize,
    /// `left[i]` is the matrix of `m ↦ e_i m`.
    left: Vec<DenseMatrix>,
    /// `right[i]` is the matrix of `m ↦ m e_i`.
    right: Vec<DenseMatrix>,
    avg: DenseMatrix,
}

impl AvBimodule {
    pub fn new(base: AveragingAlgebra, dim: usize, left: Vec<DenseMatrix>, right: Vec<DenseMatrix>, avg: DenseMatrix) -> Result<Self, AlgebraError> {
        let d = base.dim();
        let f = base.field();
        if left.len() != d || right.len() != d {
            return Err(AlgebraError::DimensionMismatch("one action matrix per algebra basis element"));
        }
        let square = |m: &DenseMatrix| m.rows() == dim && m.cols() == dim;
        if !left.iter().chain(&right).all(square) || !square(&avg) {
            return Err(AlgebraError::DimensionMismatch("module matrices must be dim x dim"));
        }
        if left.iter().chain(&right).chain([&avg]).any(|m| m.field() != f) {
            return Err(AlgebraError::FieldMismatch);
        }
        Ok(AvBimodule { base, dim, left, right, avg })
    }

    pub fn zero(base: AveragingAlgebra) -> Self {
        let f = base.field();
        let d = base.dim();
        let z = DenseMatrix::zeros(f, 0, 0);
        AvBimodule { base, dim: 0, left: vec![z.clone(); d], right: vec![z.clone(); d], avg: z }
    }

    pub fn base(&self) -> &AveragingAlgebra {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.base.field()
    }

    pub fn left(&self, i: usize) -> &DenseMatrix {
        &self.left[i]
    }

    pub fn right(&self, i: usize) -> &DenseMatrix {
        &self.right[i]
    }

    pub fn operator(&self) -> &DenseMatrix {
        &self.avg
    }

    /// Action matrix of an arbitrary algebra vector.
    pub fn left_of(&self, r: &[Scalar]) -> DenseMatrix {
        combine(self.field(), self.dim, &self.left, r)
    }

    pub fn right_of(&self, r: &[Scalar]) -> DenseMatrix {
        combine(self.field(), self.dim, &self.right, r)
    }

    pub fn act_left(&self, r: &[Scalar], m: &[Scalar]) -> Vec<Scalar> {
        self.left_of(r).mul_vec(m)
    }

    pub fn act_right(&self, m: &[Scalar], r: &[Scalar]) -> Vec<Scalar> {
        self.right_of(r).mul_vec(m)
    }

    pub fn apply(&self, m: &[Scalar]) -> Vec<Scalar> {
        self.avg.mul_vec(m)
    }
}

fn combine(field: Field, dim: usize, mats: &[DenseMatrix], coeffs: &[Scalar]) -> DenseMatrix {
    let mut out = DenseMatrix::zeros(field, dim, dim);
    for (m, c) in mats.iter().zip(coeffs) {
        if !c.is_zero() {
            out = out.add(&m.scale(c)).expect("same shape");
        }
    }
    out
}

fn check_pair(check: &mut Check, location: Vec<usize>, names: [&str; 2], lhs: Vec<Scalar>, rhs: Vec<Scalar>) {
    if lhs != rhs {
        check.fail_with(Counterexample { location, values: vec![(names[0].into(), lhs), (names[1].into(), rhs)] });
    }
}

/// Associativity, the two averaging identities, and the unit (when given).
pub fn verify_averaging_algebra(alg: &AveragingAlgebra) -> Report {
    let d = alg.dim();
    let mut report = Report::new("averaging algebra axioms");
    let e = |i| alg.basis_vector(i);

    let mut assoc = Check::new("associativity");
    for i in 0..d {
        for j in 0..d {
            let ij = alg.product(&e(i), &e(j));
            for k in 0..d {
                let lhs = alg.product(&ij, &e(k));
                let rhs = alg.product(&e(i), &alg.product(&e(j), &e(k)));
                check_pair(&mut assoc, vec![i, j, k], ["(xy)z", "x(yz)"], lhs, rhs);
            }
        }
    }

    let mut left = Check::new("averaging-left");
    let mut right = Check::new("averaging-right");
    for i in 0..d {
        let ai = alg.apply(&e(i));
        for j in 0..d {
            let aj = alg.apply(&e(j));
            let both = alg.product(&ai, &aj);
            let l = alg.apply(&alg.product(&ai, &e(j)));
            let r = alg.apply(&alg.product(&e(i), &aj));
            check_pair(&mut left, vec![i, j], ["A(x)A(y)", "A(A(x)y)"], both.clone(), l);
            check_pair(&mut right, vec![i, j], ["A(x)A(y)", "A(xA(y))"], both, r);
        }
    }
    report.push(assoc);
    report.push(left);
    report.push(right);

    if let Some(u) = alg.unit() {
        let mut unit = Check::new("unit");
        for i in 0..d {
            check_pair(&mut unit, vec![i], ["1x", "x"], alg.product(u, &e(i)), e(i));
            check_pair(&mut unit, vec![i], ["x1", "x"], alg.product(&e(i), u), e(i));
        }
        report.push(unit);
    }
    report
}

/// Ordinary bimodule axioms for actions `left[i]`, `right[i]` over `alg`'s product.
pub fn verify_bimodule_actions(alg: &AveragingAlgebra, left: &[DenseMatrix], right: &[DenseMatrix]) -> Report {
    let d = alg.dim();
    let f = alg.field();
    let n = left.first().map_or(0, DenseMatrix::rows);
    let act = |mats: &[DenseMatrix], r: &[Scalar]| combine(f, n, mats, r);
    let mut report = Report::new("bimodule axioms");
    let mut l = Check::new("left-action");
    let mut r = Check::new("right-action");
    let mut c = Check::new("actions-commute");
    for i in 0..d {
        for j in 0..d {
            let ij = alg.product(&alg.basis_vector(i), &alg.basis_vector(j));
            let lij = act(left, &ij);
            let rij = act(right, &ij);
            let ll = left[i].mul(&left[j]).expect("square");
            let rr = right[j].mul(&right[i]).expect("square");
            let lr = right[j].mul(&left[i]).expect("square");
            let rl = left[i].mul(&right[j]).expect("square");
            for m in 0..n {
                let e = basis(f, n, m);
                check_pair(&mut l, vec![i, j, m], ["(xy)m", "x(ym)"], lij.mul_vec(&e), ll.mul_vec(&e));
                check_pair(&mut r, vec![m, i, j], ["m(xy)", "(mx)y"], rij.mul_vec(&e), rr.mul_vec(&e));
                check_pair(&mut c, vec![i, m, j], ["(xm)y", "x(my)"], lr.mul_vec(&e), rl.mul_vec(&e));
            }
        }
    }
    report.push(l);
    report.push(r);
    report.push(c);
    report
}

/// Bimodule axioms plus the two operator compatibilities.
pub fn verify_av_bimodule(m: &AvBimodule) -> Report {
    let alg = m.base();
    let f = alg.field();
    let n = m.dim();
    let mut report = verify_bimodule_actions(alg, &m.left, &m.right);
    report.title = "averaging bimodule axioms".into();
    let mut ol = Check::new("operator-left");
    let mut or = Check::new("operator-right");
    for i in 0..alg.dim() {
        let ar = alg.apply(&alg.basis_vector(i));
        let l_ar = m.left_of(&ar);
        let r_ar = m.right_of(&ar);
        for a in 0..n {
            let e = basis(f, n, a);
            let am = m.apply(&e);
            // A(r)A_M(m) = A_M(A(r)m) = A_M(r A_M(m))
            let lhs = l_ar.mul_vec(&am);
            check_pair(&mut ol, vec![i, a], ["A(r)A(m)", "A(A(r)m)"], lhs.clone(), m.apply(&l_ar.mul_vec(&e)));
            check_pair(&mut ol, vec![i, a], ["A(r)A(m)", "A(rA(m))"], lhs, m.apply(&m.left[i].mul_vec(&am)));
            // A_M(m)A(r) = A_M(A_M(m)r) = A_M(mA(r))
            let rhs = r_ar.mul_vec(&am);
            check_pair(&mut or, vec![a, i], ["A(m)A(r)", "A(A(m)r)"], rhs.clone(), m.apply(&m.right[i].mul_vec(&am)));
            check_pair(&mut or, vec![a, i], ["A(m)A(r)", "A(mA(r))"], rhs, m.apply(&r_ar.mul_vec(&e)));
        }
    }
    report.push(ol);
    report.push(or);
    report
}

/// `(R, x⋆y = xA(y), A)`.
pub fn star_product(alg: &AveragingAlgebra) -> AveragingAlgebra {
    alg.with_product(|x, y| alg.product(x, &alg.apply(y)))
}

/// `(R, x⋄y = A(x)y, A)`.
pub fn diamond_product(alg: &AveragingAlgebra) -> AveragingAlgebra {
    alg.with_product(|x, y| alg.product(&alg.apply(x), y))
}

fn is_associative(alg: &AveragingAlgebra) -> bool {
    verify_averaging_algebra(alg).check("associativity").is_some_and(|c| c.passed)
}

/// Whether both derived products of a unital algebra with an arbitrary
/// operator are associative (which forces the operator to be averaging).
pub fn unital_converse_check(alg: &AveragingAlgebra) -> Result<bool, AlgebraError> {
    if alg.unit().is_none() {
        return Err(AlgebraError::MissingUnit);
    }
    Ok(is_associative(&star_product(alg)) && is_associative(&diamond_product(alg)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    /// Over `x⋆y = xA(y)`.
    Star,
    /// Over `x⋄y = A(x)y`.
    Diamond,
}

/// Ordinary bimodule over a derived product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedBimodule {
    pub flavor: Flavor,
    pub algebra: AveragingAlgebra,
    pub left: Vec<DenseMatrix>,
    pub right: Vec<DenseMatrix>,
}

impl DerivedBimodule {
    pub fn verify(&self) -> Report {
        verify_bimodule_actions(&self.algebra, &self.left, &self.right)
    }
}

/// Star: `a⊢m = A(a)m − A_M(am)`, `m⊣a = mA(a)`.
/// Diamond: `a▷m = A(a)m`, `m◁a = mA(a) − A_M(ma)`.
pub fn derived_bimodule(m: &AvBimodule, flavor: Flavor) -> DerivedBimodule {
    let alg = m.base();
    let d = alg.dim();
    let mut left = Vec::with_capacity(d);
    let mut right = Vec::with_capacity(d);
    for i in 0..d {
        let ai = alg.apply(&alg.basis_vector(i));
        let l_a = m.left_of(&ai);
        let r_a = m.right_of(&ai);
        match flavor {
            Flavor::Star => {
                left.push(l_a.sub(&m.avg.mul(&m.left[i]).expect("square")).expect("square"));
                right.push(r_a);
            }
            Flavor::Diamond => {
                left.push(l_a);
                right.push(r_a.sub(&m.avg.mul(&m.right[i]).expect("square")).expect("square"));
            }
        }
    }
    let algebra = match flavor {
        Flavor::Star => star_product(alg),
        Flavor::Diamond => diamond_product(alg),
    };
    DerivedBimodule { flavor, algebra, left, right }
}

/// `R ⊕ M` with `(a,m)(b,n) = (ab, an + mb)` and operator `A ⊕ A_M`.
/// The basis lists the algebra basis first, then the module basis.
pub fn semidirect_sum(alg: &AveragingAlgebra, m: &AvBimodule) -> AveragingAlgebra {
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
            }
            (true, false) => {
                for (k, x) in m.left[i].column(j - dr).into_iter().enumerate() {
                    out[dr + k] = x;
                }
            }
            (false, true) => {
                for (k, x) in m.right[j].column(i - dr).into_iter().enumerate() {
                    out[dr + k] = x;
                }
            }
            (false, false) => {}
        }
        out
    };
    let heights = [dr, dm];
    let op = DenseMatrix::from_blocks(f, &heights, &heights, &[vec![Some(alg.operator()), None], vec![None, Some(m.operator())]])
        .expect("block shapes");
    AveragingAlgebra::from_fn(f, total, product, op).expect("consistent shapes")
}

/// `R` acting on itself by multiplication, with `A_M = A`.
pub fn regular_bimodule(alg: &AveragingAlgebra) -> AvBimodule {
    let d = alg.dim();
    let left = (0..d).map(|i| alg.left_mult(i)).collect();
    let right = (0..d).map(|i| alg.right_mult(i)).collect();
    AvBimodule::new(alg.clone(), d, left, right, alg.operator().clone()).expect("consistent shapes")
}
