//! Homotopy averaging algebras: a product family `m_n`, an operator `A`, and
//! right/left homotopies `A_n^r`, `A_n^l`, together with the suspension
//! dictionary to Maurer–Cartan elements of the reduced L∞ algebra.
//!
//! Maps `V^{⊗n} → V` are stored as [`GradedMap`]s over the desuspension
//! `s⁻¹V` with output [`Space::SV`], so that their inputs and outputs carry
//! the degrees of `V` and composition produces the ordinary Koszul signs.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::algebra::AveragingAlgebra;
use crate::graded::{odd, sign, GradedError, GradedMap, GradedSpace, Space};
use crate::linfty::{build_brackets, mc_residual, Block, Element, LinftyError};
use crate::matrix::DenseMatrix;
use crate::report::{Check, Counterexample, Report};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HomotopyError {
    #[error("arity {n} exceeds the cap {cap}")]
    ArityCapExceeded { n: usize, cap: usize },
    #[error("element has a component outside the reduced complex")]
    UnreducedElement,
    #[error("{what} must have arity {arity} and degree {degree}")]
    Degree { what: String, arity: usize, degree: i64 },
    #[error("shape: {0}")]
    Shape(&'static str),
    #[error(transparent)]
    Linfty(#[from] LinftyError),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

/// One member of the operator family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Operation {
    /// `m_n`, degree `n − 2`.
    Product(usize),
    /// `A`, degree 0.
    Operator,
    /// `A_n^r` for `n ≥ 2`, degree `n − 1`.
    RightHomotopy(usize),
    /// `A_n^l` for `n ≥ 2`, degree `n − 1`.
    LeftHomotopy(usize),
}

impl Operation {
    pub fn arity(self) -> usize {
        match self {
            Operation::Product(n) | Operation::RightHomotopy(n) | Operation::LeftHomotopy(n) => n,
            Operation::Operator => 1,
        }
    }

    pub fn degree(self) -> i64 {
        match self {
            Operation::Product(n) => n as i64 - 2,
            Operation::Operator => 0,
            Operation::RightHomotopy(n) | Operation::LeftHomotopy(n) => n as i64 - 1,
        }
    }

    fn valid(self) -> bool {
        match self {
            Operation::Product(n) => n >= 1,
            Operation::Operator => true,
            Operation::RightHomotopy(n) | Operation::LeftHomotopy(n) => n >= 2,
        }
    }

    /// The right (or left) operator map of arity `n`, with `A` at arity 1.
    fn homotopy(n: usize, left: bool) -> Operation {
        match n {
            1 => Operation::Operator,
            _ if left => Operation::LeftHomotopy(n),
            _ => Operation::RightHomotopy(n),
        }
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operation::Product(n) => write!(f, "m_{}", n),
            Operation::Operator => write!(f, "A"),
            Operation::RightHomotopy(n) => write!(f, "A_{}^r", n),
            Operation::LeftHomotopy(n) => write!(f, "A_{}^l", n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slot {
    Id,
    Expr(Expr),
}

/// `head ∘ (slot_1 ⊗ ... ⊗ slot_k)`; no slots means the bare operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub head: Operation,
    pub args: Vec<Slot>,
}

impl Expr {
    pub fn bare(head: Operation) -> Self {
        Expr { head, args: Vec::new() }
    }

    /// Composition, collapsing `head ∘ (id ⊗ ... ⊗ id)` to `head`.
    pub fn compose(head: Operation, args: Vec<Slot>) -> Self {
        if args.iter().all(|s| *s == Slot::Id) {
            Expr::bare(head)
        } else {
            Expr { head, args }
        }
    }

    pub fn arity(&self) -> usize {
        if self.args.is_empty() {
            return self.head.arity();
        }
        self.args
            .iter()
            .map(|s| match s {
                Slot::Id => 1,
                Slot::Expr(e) => e.arity(),
            })
            .sum()
    }

    pub fn evaluate(&self, h: &HomotopyAveraging) -> GradedMap {
        let head = h.get(self.head);
        if self.args.is_empty() {
            return head.clone();
        }
        let inner: Vec<Option<GradedMap>> = self
            .args
            .iter()
            .map(|s| match s {
                Slot::Id => None,
                Slot::Expr(e) => Some(e.evaluate(h)),
            })
            .collect();
        let slots: Vec<Option<&GradedMap>> = inner.iter().map(Option::as_ref).collect();
        head.substitute(&h.view, &slots)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if self.args.is_empty() {
            return Ok(());
        }
        write!(f, "∘")?;
        if let [Slot::Expr(e)] = self.args.as_slice() {
            if e.args.is_empty() {
                return write!(f, "{}", e);
            }
        }
        write!(f, "(")?;
        for (i, s) in self.args.iter().enumerate() {
            if i > 0 {
                write!(f, "⊗")?;
            }
            match s {
                Slot::Id => write!(f, "id")?,
                Slot::Expr(e) => write!(f, "{}", e)?,
            }
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub negative: bool,
    pub expr: Expr,
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.negative { "-" } else { "+" }, self.expr)
    }
}

/// Which of the three defining identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    /// The A∞ relations among the `m_n`.
    Associativity,
    /// The right family against the products.
    Right,
    /// The left family against the products.
    Left,
}

fn ids(n: usize) -> impl Iterator<Item = Slot> {
    core::iter::repeat(Slot::Id).take(n)
}

/// Compositions of `n` into `k` positive parts, lexicographic.
fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            if n == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for first in 1..=n.saturating_sub(k - 1) {
            cur.push(first);
            rec(n - first, k - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, &mut Vec::new(), &mut out);
    out
}

/// The signed terms of the arity-`n` identity, in the order they are summed.
pub fn identity_terms(n: usize, which: Identity) -> Vec<Term> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    match which {
        Identity::Associativity => {
            // Σ (−1)^{i + j·t} m_{i+1+t}(id^i ⊗ m_j ⊗ id^t), i + j + t = n.
            for i in 0..n {
                for j in 1..=n - i {
                    let t = n - i - j;
                    let mut args: Vec<Slot> = ids(i).collect();
                    args.push(Slot::Expr(Expr::bare(Operation::Product(j))));
                    args.extend(ids(t));
                    out.push(Term {
                        negative: odd((i + j * t) as i64),
                        expr: Expr::compose(Operation::Product(i + 1 + t), args),
                    });
                }
            }
        }
        Identity::Right | Identity::Left => {
            let left = which == Identity::Left;
            for k in 1..=n {
                let ek = (n * (n - 1) / 2 + k * (k - 1) / 2) as i64;
                for ls in compositions(n, k) {
                    let eps = ek + ls.iter().enumerate().map(|(j, &l)| ((k - j) * l) as i64).sum::<i64>();
                    let outer = odd(eps);
                    let maps: Vec<Slot> =
                        ls.iter().map(|&l| Slot::Expr(Expr::bare(Operation::homotopy(l, left)))).collect();
                    out.push(Term { negative: outer, expr: Expr::compose(Operation::Product(k), maps.clone()) });

                    // The operator map that stays outside, and m_k with id in its place.
                    let (lo, mut inner_args) = if left {
                        (ls[k - 1], maps[..k - 1].to_vec())
                    } else {
                        (ls[0], maps[1..].to_vec())
                    };
                    if left {
                        inner_args.push(Slot::Id);
                    } else {
                        inner_args.insert(0, Slot::Id);
                    }
                    let inner = Expr::compose(Operation::Product(k), inner_args);
                    for p in 0..lo {
                        let q = lo - 1 - p;
                        let e = if left {
                            let before: usize = ls[..k - 1].iter().sum();
                            let shifted: usize = ls[..k - 1].iter().map(|l| l - 1).sum();
                            p * shifted + (lo - 1) * before + k * p + q
                        } else {
                            let shifted: usize = ls[1..].iter().map(|l| l - 1).sum();
                            q * shifted + k * p + q
                        };
                        let mut args: Vec<Slot> = ids(p).collect();
                        args.push(Slot::Expr(inner.clone()));
                        args.extend(ids(q));
                        out.push(Term {
                            negative: outer ^ !odd(e as i64),
                            expr: Expr::compose(Operation::homotopy(lo, left), args),
                        });
                    }
                }
            }
        }
    }
    out
}

/// The operator family of a homotopy averaging algebra, truncated at `cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyAveraging {
    space: GradedSpace,
    view: GradedSpace,
    cap: usize,
    maps: Vec<(Operation, GradedMap)>,
}

/// The desuspension of `v`, over which maps `V^{⊗n} → V` are stored.
pub fn storage_space(v: &GradedSpace) -> GradedSpace {
    GradedSpace::new(v.field(), (0..v.dim()).map(|b| v.degree(b) - 1).collect())
}

impl HomotopyAveraging {
    /// Every operation up to `cap`, in storage order.
    pub fn operations(cap: usize) -> Vec<Operation> {
        let mut ops: Vec<Operation> = (1..=cap).map(Operation::Product).collect();
        ops.push(Operation::Operator);
        ops.extend((2..=cap).map(Operation::RightHomotopy));
        ops.extend((2..=cap).map(Operation::LeftHomotopy));
        ops
    }

    pub fn zero(space: GradedSpace, cap: usize) -> Self {
        let view = storage_space(&space);
        let maps = Self::operations(cap)
            .into_iter()
            .map(|op| (op, GradedMap::zero(&view, op.arity(), op.degree(), Space::SV)))
            .collect();
        HomotopyAveraging { space, view, cap, maps }
    }

    /// Each operation filled with random coefficients of the right degree.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, space: GradedSpace, cap: usize, bound: i64) -> Self {
        let mut h = Self::zero(space, cap);
        for (op, map) in h.maps.iter_mut() {
            *map = GradedMap::random(rng, &h.view, op.arity(), op.degree(), Space::SV, bound);
        }
        h
    }

    /// A strict averaging algebra concentrated in degree 0: `m_2` is the
    /// product, `A` the operator, everything else zero.
    pub fn strict(alg: &AveragingAlgebra, cap: usize) -> Result<Self, HomotopyError> {
        if cap < 2 {
            return Err(HomotopyError::ArityCapExceeded { n: 2, cap });
        }
        let d = alg.dim();
        let mut h = Self::zero(GradedSpace::ungraded(alg.field(), d), cap);
        let product = GradedMap::from_coeffs(&h.view, 2, 0, Space::SV, alg.structure_constants().to_vec())?;
        let mut a = Vec::with_capacity(d * d);
        for i in 0..d {
            for k in 0..d {
                a.push(alg.operator().get(k, i).clone());
            }
        }
        let op = GradedMap::from_coeffs(&h.view, 1, 0, Space::SV, a)?;
        h.set(Operation::Product(2), product)?;
        h.set(Operation::Operator, op)?;
        Ok(h)
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    /// The desuspended space the maps are stored over.
    pub fn view(&self) -> &GradedSpace {
        &self.view
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn index(&self, op: Operation) -> Option<usize> {
        self.maps.iter().position(|(o, _)| *o == op)
    }

    /// The map of `op`; operations beyond the cap read as zero.
    pub fn get(&self, op: Operation) -> &GradedMap {
        let i = self.index(op).unwrap_or_else(|| panic!("{} is beyond the cap", op));
        &self.maps[i].1
    }

    pub fn set(&mut self, op: Operation, map: GradedMap) -> Result<(), HomotopyError> {
        if !op.valid() {
            return Err(HomotopyError::Shape("no such operation"));
        }
        let i = self.index(op).ok_or(HomotopyError::ArityCapExceeded { n: op.arity(), cap: self.cap })?;
        let shape = GradedMap::zero(&self.view, op.arity(), op.degree(), Space::SV);
        if !map.same_shape(&shape) || map.coeffs().len() != shape.coeffs().len() {
            return Err(HomotopyError::Degree { what: format!("{}", op), arity: op.arity(), degree: op.degree() });
        }
        self.maps[i].1 = map;
        Ok(())
    }

    pub fn maps(&self) -> impl Iterator<Item = (Operation, &GradedMap)> {
        self.maps.iter().map(|(o, m)| (*o, m))
    }
}

/// Sign of `s^{⊗n}` on a basis tuple: `Σ_i (n − 1 − i)|v_i|`.
fn suspension_negative(v: &GradedSpace, arity: usize, tuple: usize) -> bool {
    let d = v.dim();
    let mut t = tuple;
    let mut digits = vec![0usize; arity];
    for slot in (0..arity).rev() {
        digits[slot] = t % d;
        t /= d;
    }
    let e: i64 = digits.iter().enumerate().map(|(i, &b)| (arity - 1 - i) as i64 * v.degree(b)).sum();
    odd(e)
}

/// Multiplies each input tuple by the sign of `s^{⊗n}`; an involution.
fn twist_inputs(v: &GradedSpace, map: &GradedMap) -> Vec<Scalar> {
    let d = v.dim();
    if d == 0 {
        return map.coeffs().to_vec();
    }
    map.coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| if suspension_negative(v, map.arity, i / d) { -c.clone() } else { c.clone() })
        .collect()
}

fn block_of(op: Operation) -> Block {
    match op {
        Operation::Product(_) => Block::Hoch,
        Operation::Operator => Block::Op1,
        Operation::RightHomotopy(_) => Block::OpR,
        Operation::LeftHomotopy(_) => Block::OpL,
    }
}

/// The Maurer–Cartan element of the reduced complex: `b_n = s m_n (s⁻¹)^{⊗n}`,
/// `c = A s⁻¹`, `c_n = A_n (s⁻¹)^{⊗n}`.
pub fn to_mc_bar(h: &HomotopyAveraging) -> Element {
    let v = &h.space;
    let mut e = Element::zero();
    for (op, map) in h.maps() {
        let block = block_of(op);
        let coeffs = twist_inputs(v, map);
        let bar = GradedMap::from_coeffs(v, op.arity(), -1, block.output(), coeffs).expect("dictionary preserves shape");
        e.add_piece(block, &bar);
    }
    e
}

/// Inverse of [`to_mc_bar`]; operations absent from `alpha` are zero.
pub fn from_mc_bar(alpha: &Element, space: &GradedSpace, cap: usize) -> Result<HomotopyAveraging, HomotopyError> {
    let mut h = HomotopyAveraging::zero(space.clone(), cap);
    for p in alpha.pieces() {
        let n = p.map.arity;
        let op = match p.block {
            Block::Op0 => return Err(HomotopyError::UnreducedElement),
            Block::Hoch if n == 0 => return Err(HomotopyError::UnreducedElement),
            Block::Hoch => Operation::Product(n),
            Block::Op1 => Operation::Operator,
            Block::OpR => Operation::RightHomotopy(n),
            Block::OpL => Operation::LeftHomotopy(n),
        };
        if p.degree() != -1 {
            return Err(HomotopyError::Shape("a Maurer-Cartan element has degree -1"));
        }
        if n > cap {
            return Err(HomotopyError::ArityCapExceeded { n, cap });
        }
        if p.map.coeffs().len() != GradedMap::zero(space, n, -1, p.block.output()).coeffs().len() {
            return Err(HomotopyError::Shape("coefficient count does not match the space"));
        }
        let coeffs = twist_inputs(space, &p.map);
        h.set(op, GradedMap::from_coeffs(&h.view, n, op.degree(), Space::SV, coeffs)?)?;
    }
    Ok(h)
}

/// The full Maurer–Cartan residual of [`to_mc_bar`], through `l_{cap+1}`.
pub fn mc_bar_residual(h: &HomotopyAveraging) -> Result<Element, HomotopyError> {
    let cap = h.cap + 1;
    let l = build_brackets(h.space.clone(), cap.max(2))?;
    Ok(mc_residual(&l, &to_mc_bar(h), cap)?)
}

/// Reads the arity-`n` components of a bar residual back as unsuspended maps
/// over the storage space, one per identity.
pub fn residual_from_bar(h: &HomotopyAveraging, bar: &Element, n: usize, which: Identity) -> GradedMap {
    let v = &h.space;
    let (block, degree) = match which {
        Identity::Associativity => (Block::Hoch, n as i64 - 3),
        Identity::Right if n == 1 => (Block::Op1, -1),
        Identity::Left if n == 1 => (Block::Op1, -1),
        Identity::Right => (Block::OpR, n as i64 - 2),
        Identity::Left => (Block::OpL, n as i64 - 2),
    };
    match bar.get(block, n, -2) {
        None => GradedMap::zero(&h.view, n, degree, Space::SV),
        Some(m) => GradedMap::from_coeffs(&h.view, n, degree, Space::SV, twist_inputs(v, m)).expect("dictionary preserves shape"),
    }
}

/// Residual of the arity-`n` identity, evaluated term by term.
pub fn homotopy_identity_residual(h: &HomotopyAveraging, n: usize, which: Identity) -> Result<GradedMap, HomotopyError> {
    if n > h.cap {
        return Err(HomotopyError::ArityCapExceeded { n, cap: h.cap });
    }
    if n == 0 {
        return Err(HomotopyError::Shape("identities start at arity 1"));
    }
    let field = h.space.field();
    let degree = match which {
        Identity::Associativity => n as i64 - 3,
        _ => n as i64 - 2,
    };
    let mut out = GradedMap::zero(&h.view, n, degree, Space::SV);
    for t in identity_terms(n, which) {
        out.add_scaled(&sign(field, t.negative), &t.expr.evaluate(h));
    }
    Ok(out)
}

/// Whether every identity vanishes through the cap.
pub fn is_homotopy_averaging(h: &HomotopyAveraging) -> Result<bool, HomotopyError> {
    for n in 1..=h.cap {
        for which in [Identity::Associativity, Identity::Right, Identity::Left] {
            if !homotopy_identity_residual(h, n, which)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Chooses `A_2^r` (or `A_2^l`) so that the arity-2 right (left) identity
/// holds, keeping everything else fixed. The identity is affine in that map.
/// Returns `false`, leaving `h` unchanged, when no choice works.
pub fn solve_second_order_homotopy(h: &mut HomotopyAveraging, left: bool) -> Result<bool, HomotopyError> {
    if h.cap < 2 {
        return Err(HomotopyError::ArityCapExceeded { n: 2, cap: h.cap });
    }
    let op = Operation::homotopy(2, left);
    let which = if left { Identity::Left } else { Identity::Right };
    let field = h.space.field();
    let view = h.view.clone();
    let old = h.get(op).clone();
    let len = old.coeffs().len();
    let basis = |i: Option<usize>| {
        let mut c = vec![field.zero(); len];
        if let Some(i) = i {
            c[i] = field.one();
        }
        GradedMap::from_coeffs(&view, 2, op.degree(), Space::SV, c)
    };
    let mut unknowns = Vec::new();
    for i in 0..len {
        if !basis(Some(i))?.is_zero() {
            unknowns.push(i);
        }
    }
    h.set(op, basis(None)?)?;
    let constant = homotopy_identity_residual(h, 2, which)?;
    let rows = constant.coeffs().len();
    let mut m = DenseMatrix::zeros(field, rows, unknowns.len());
    for (col, &i) in unknowns.iter().enumerate() {
        h.set(op, basis(Some(i))?)?;
        let r = homotopy_identity_residual(h, 2, which)?;
        for (row, (a, b)) in r.coeffs().iter().zip(constant.coeffs()).enumerate() {
            m.set(row, col, a.clone() - b.clone());
        }
    }
    let rhs: Vec<Scalar> = constant.coeffs().iter().map(|x| -x.clone()).collect();
    let Some(x) = m.solve(&rhs) else {
        h.set(op, old)?;
        return Ok(false);
    };
    let mut c = vec![field.zero(); len];
    for (col, &i) in unknowns.iter().enumerate() {
        c[i] = x[col].clone();
    }
    h.set(op, GradedMap::from_coeffs(&view, 2, op.degree(), Space::SV, c)?)?;
    Ok(true)
}

/// Nonzero coefficients of `map` as counterexamples: location is the input
/// tuple followed by the output index.
fn localize(check: &mut Check, label: &str, v: &GradedSpace, map: &GradedMap) {
    let d = v.dim();
    for (i, c) in map.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut t = i / d;
        let mut location = vec![0usize; map.arity];
        for slot in (0..map.arity).rev() {
            location[slot] = t % d;
            t /= d;
        }
        location.push(i % d);
        check.fail_with(Counterexample { location, values: vec![(String::from(label), vec![c.clone()])] });
    }
}

/// Whether `A` is a chain map for `m_1`, and how the second-order homotopies
/// account for the failure of the averaging identities.
pub fn chain_homotopy_report(h: &HomotopyAveraging) -> Result<Report, HomotopyError> {
    let mut report = Report::new("homotopy averaging");
    let v = h.view.clone();
    let field = h.space.field();

    let mut diff = Check::new("differential").fact("arities", "1, 2");
    for n in 1..=h.cap.min(2) {
        let r = homotopy_identity_residual(h, n, Identity::Associativity)?;
        localize(&mut diff, "residual", &v, &r);
    }
    report.push(diff);

    let r1 = homotopy_identity_residual(h, 1, Identity::Right)?;
    let mut chain = Check::new("chain-map");
    localize(&mut chain, "residual", &v, &r1);
    report.push(chain);

    if h.cap >= 2 {
        for (name, which, left) in [("homotopy-right", Identity::Right, false), ("homotopy-left", Identity::Left, true)] {
            // The strict defect is the k = 2 part; the homotopy terms are the rest.
            let mut defect = GradedMap::zero(&v, 2, 0, Space::SV);
            let mut correction = GradedMap::zero(&v, 2, 0, Space::SV);
            for t in identity_terms(2, which) {
                let value = t.expr.evaluate(h);
                let target = if t.expr.head == Operation::Product(2) || t.expr.head == Operation::Operator {
                    &mut defect
                } else {
                    &mut correction
                };
                target.add_scaled(&sign(field, t.negative), &value);
            }
            let homotopy = h.get(Operation::homotopy(2, left));
            let mut check = Check::new(name)
                .fact("defect", if defect.is_zero() { "zero" } else { "nonzero" })
                .fact("homotopy", if homotopy.is_zero() { "zero" } else { "nonzero" });
            let mut residual = defect.clone();
            residual.add_assign(&correction);
            localize(&mut check, "residual", &v, &residual);
            report.push(check);
        }
    }
    Ok(report)
}
