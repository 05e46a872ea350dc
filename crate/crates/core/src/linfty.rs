//! The L∞ structure on `𝒞_A(V) ⊕ Hom(k,V) ⊕ Hom(sV,V) ⊕ 𝒞_r ⊕ 𝒞_l`,
//! Maurer–Cartan elements, twisting, and the correspondence with averaging
//! algebras.
//!
//! Degrees are map degrees: a Hochschild-type element lands in `sV`, an
//! operator-type element lands in `V`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use alloc::format;

use rand::Rng;

use crate::algebra::AveragingAlgebra;
use crate::complexes::pow;
use crate::graded::{chi_sign, odd, permutations, sign, GradedError, GradedMap, GradedSpace, Space};
use crate::matrix::DenseMatrix;
use crate::report::{Check, Counterexample, Report};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LinftyError {
    #[error("arity {n} exceeds the cap {cap}")]
    ArityCapExceeded { n: usize, cap: usize },
    #[error("requires a field of characteristic zero")]
    Characteristic,
    #[error("element is not Maurer-Cartan")]
    NotMaurerCartan,
    #[error("shape: {0}")]
    Shape(&'static str),
    #[error(transparent)]
    Graded(#[from] GradedError),
}

/// Summand of the underlying space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    /// `Hom((sV)^{⊗n}, sV)`, any arity.
    Hoch,
    /// `Hom(k, V)`.
    Op0,
    /// `Hom(sV, V)`.
    Op1,
    /// Right-flavored operator maps, arity ≥ 2.
    OpR,
    /// Left-flavored operator maps, arity ≥ 2.
    OpL,
}

impl Block {
    pub fn output(self) -> Space {
        match self {
            Block::Hoch => Space::SV,
            _ => Space::V,
        }
    }

    pub fn admits_arity(self, arity: usize) -> bool {
        match self {
            Block::Hoch => true,
            Block::Op0 => arity == 0,
            Block::Op1 => arity == 1,
            Block::OpR | Block::OpL => arity >= 2,
        }
    }

    /// Operator block for a result of the given arity and flavor.
    fn operator(arity: usize, left: bool) -> Block {
        match arity {
            0 => Block::Op0,
            1 => Block::Op1,
            _ if left => Block::OpL,
            _ => Block::OpR,
        }
    }
}

/// A homogeneous element of one block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub block: Block,
    pub map: GradedMap,
}

impl Piece {
    pub fn new(block: Block, map: GradedMap) -> Result<Self, LinftyError> {
        if !block.admits_arity(map.arity) {
            return Err(LinftyError::Shape("arity does not fit the block"));
        }
        if map.output != block.output() {
            return Err(LinftyError::Shape("output space does not fit the block"));
        }
        Ok(Piece { block, map })
    }

    pub fn degree(&self) -> i64 {
        self.map.degree
    }
}

/// A finite sum of homogeneous pieces, keyed by block, arity and degree.
/// Zero pieces are dropped, so equality is value equality.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Element {
    terms: BTreeMap<(Block, usize, i64), GradedMap>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn from_piece(p: Piece) -> Self {
        let mut e = Element::zero();
        e.add_piece(p.block, &p.map);
        e
    }

    pub fn from_pieces(ps: impl IntoIterator<Item = Piece>) -> Self {
        let mut e = Element::zero();
        for p in ps {
            e.add_piece(p.block, &p.map);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_piece(&mut self, block: Block, map: &GradedMap) {
        self.add_scaled_piece(block, None, map);
    }

    fn add_scaled_piece(&mut self, block: Block, c: Option<&Scalar>, map: &GradedMap) {
        if map.is_zero() {
            return;
        }
        let key = (block, map.arity, map.degree);
        match self.terms.get_mut(&key) {
            Some(existing) => {
                match c {
                    Some(c) => existing.add_scaled(c, map),
                    None => existing.add_assign(map),
                }
                if existing.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                let m = match c {
                    Some(c) => map.scale(c),
                    None => map.clone(),
                };
                if !m.is_zero() {
                    self.terms.insert(key, m);
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &Element) {
        for ((block, _, _), map) in &other.terms {
            self.add_scaled_piece(*block, Some(c), map);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        let mut out = Element::zero();
        out.add_scaled(c, self);
        out
    }

    pub fn pieces(&self) -> Vec<Piece> {
        self.terms.iter().map(|((block, _, _), map)| Piece { block: *block, map: map.clone() }).collect()
    }

    pub fn get(&self, block: Block, arity: usize, degree: i64) -> Option<&GradedMap> {
        self.terms.get(&(block, arity, degree))
    }

    /// Blocks with a nonzero component.
    pub fn blocks(&self) -> Vec<(Block, usize, i64)> {
        self.terms.keys().copied().collect()
    }
}

fn inverse_factorial(field: Field, n: usize) -> Result<Scalar, LinftyError> {
    let f: i64 = (1..=n as i64).product();
    field.fraction(1, f).ok_or(LinftyError::Characteristic)
}

/// A family of graded-symmetric brackets `l_n` of degree `n − 2`.
pub trait LInfty {
    fn space(&self) -> &GradedSpace;

    fn cap(&self) -> usize;

    /// `l_n` on homogeneous pieces, without the cap check.
    fn bracket(&self, xs: &[&Piece]) -> Element;

    /// `l_n` extended multilinearly.
    fn l(&self, xs: &[&Element]) -> Result<Element, LinftyError> {
        if xs.len() > self.cap() {
            return Err(LinftyError::ArityCapExceeded { n: xs.len(), cap: self.cap() });
        }
        let pieces: Vec<Vec<Piece>> = xs.iter().map(|e| e.pieces()).collect();
        let mut out = Element::zero();
        for_each_choice(&pieces, &mut |args| {
            let r = self.bracket(args);
            out.add_scaled(&self.space().field().one(), &r);
        });
        Ok(out)
    }
}

/// Calls `f` on every tuple picking one piece from each list.
fn for_each_choice(lists: &[Vec<Piece>], f: &mut dyn FnMut(&[&Piece])) {
    fn rec<'a>(lists: &'a [Vec<Piece>], cur: &mut Vec<&'a Piece>, f: &mut dyn FnMut(&[&Piece])) {
        if cur.len() == lists.len() {
            f(cur);
            return;
        }
        for p in &lists[cur.len()] {
            cur.push(p);
            rec(lists, cur, f);
            cur.pop();
        }
    }
    rec(lists, &mut Vec::with_capacity(lists.len()), f);
}

/// The brackets of the averaging L∞ structure.
#[derive(Clone, Debug)]
pub struct Brackets {
    space: GradedSpace,
    cap: usize,
}

pub fn build_brackets(space: GradedSpace, cap: usize) -> Result<Brackets, LinftyError> {
    if cap < 2 {
        return Err(LinftyError::ArityCapExceeded { n: 2, cap });
    }
    Ok(Brackets { space, cap })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Flavor {
    Right,
    Left,
}

impl Brackets {
    /// `l_{n+1}(sh, g_1, ..., g_n)` for one flavor, summed over `S_n`.
    fn flavored(&self, sh: &GradedMap, gs: &[&Piece], flavor: Flavor) -> GradedMap {
        let v = &self.space;
        let field = v.field();
        let n = gs.len();
        let big_f = sh.degree;
        let h = sh.desuspend();
        let degrees: Vec<i64> = gs.iter().map(|g| g.degree()).collect();
        let arity: usize = gs.iter().map(|g| g.map.arity).sum();
        let out_degree = big_f + degrees.iter().sum::<i64>() + n as i64 - 1;
        let mut acc = GradedMap::zero(v, arity, out_degree, Space::V);
        for perm in permutations(n) {
            let seq: Vec<&GradedMap> = perm.iter().map(|&k| &gs[k].map).collect();
            let mut partial = 0i64;
            let mut nested = 0i64;
            for g in seq.iter().take(n.saturating_sub(1)) {
                partial += g.degree;
                nested += partial;
            }
            let eps = chi_sign(&perm, &degrees).expect("lengths agree") ^ odd(n as i64 * big_f + nested);
            let all: Vec<Option<&GradedMap>> = seq.iter().map(|g| Some(*g)).collect();
            let t1 = h.substitute(v, &all);
            acc.add_scaled(&sign(field, eps), &t1);

            let slot = match flavor {
                Flavor::Right => seq.iter().position(|g| g.arity > 0),
                Flavor::Left => seq.iter().rposition(|g| g.arity > 0),
            };
            if let Some(p) = slot {
                let mut slots = all.clone();
                slots[p] = None;
                let x = sh.substitute(v, &slots);
                let before: i64 = seq[..p].iter().map(|g| g.degree + 1).sum();
                let k = odd((seq[p].degree + 1) * (big_f + before));
                let t2 = seq[p].bar_circ(v, &[&x]).expect("one argument");
                acc.add_scaled(&sign(field, !(eps ^ k)), &t2);
            }
        }
        acc
    }
}

impl LInfty for Brackets {
    fn space(&self) -> &GradedSpace {
        &self.space
    }

    fn cap(&self) -> usize {
        self.cap
    }

    fn bracket(&self, xs: &[&Piece]) -> Element {
        let v = &self.space;
        let n = xs.len();
        let hoch: Vec<usize> = (0..n).filter(|&i| xs[i].block == Block::Hoch).collect();
        let mut out = Element::zero();
        match (n, hoch.len()) {
            (1, 1) => {
                if xs[0].map.arity == 0 {
                    out.add_piece(Block::Op0, &xs[0].map.desuspend());
                }
            }
            (2, 2) => out.add_piece(Block::Hoch, &xs[0].map.gerstenhaber(v, &xs[1].map)),
            (n, 1) if n >= 2 => {
                let i = hoch[0];
                let sh = &xs[i].map;
                if sh.arity != n - 1 {
                    return out;
                }
                let gs: Vec<&Piece> = xs.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, p)| *p).collect();
                let before: i64 = gs[..i].iter().map(|g| g.degree()).sum();
                let c = sign(v.field(), odd(i as i64 + sh.degree * before));
                let has_r = gs.iter().any(|g| g.block == Block::OpR);
                let has_l = gs.iter().any(|g| g.block == Block::OpL);
                let arity: usize = gs.iter().map(|g| g.map.arity).sum();
                if arity <= 1 {
                    let r = self.flavored(sh, &gs, Flavor::Right);
                    out.add_piece(Block::operator(arity, false), &r.scale(&c));
                } else {
                    if !has_l {
                        out.add_piece(Block::OpR, &self.flavored(sh, &gs, Flavor::Right).scale(&c));
                    }
                    if !has_r {
                        out.add_piece(Block::OpL, &self.flavored(sh, &gs, Flavor::Left).scale(&c));
                    }
                }
            }
            _ => {}
        }
        out
    }
}

/// `Σ_i Σ_{σ ∈ Sh(i,n−i)} χ(σ)(−1)^{i(n−i)} l_{n−i+1}(l_i(x_σ(1..i)), x_σ(i+1..n))`.
pub fn linfty_identity_residual<L: LInfty + ?Sized>(l: &L, xs: &[Piece]) -> Result<Element, LinftyError> {
    let n = xs.len();
    if n > l.cap() {
        return Err(LinftyError::ArityCapExceeded { n, cap: l.cap() });
    }
    let field = l.space().field();
    let degrees: Vec<i64> = xs.iter().map(Piece::degree).collect();
    let mut out = Element::zero();
    for i in 1..=n {
        for sh in crate::graded::shuffles(i, n - i) {
            let negative = chi_sign(&sh, &degrees)? ^ odd((i * (n - i)) as i64);
            let c = sign(field, negative);
            let inner_args: Vec<&Piece> = sh[..i].iter().map(|&k| &xs[k]).collect();
            let inner = l.bracket(&inner_args);
            for p in inner.pieces() {
                let mut args: Vec<&Piece> = vec![&p];
                args.extend(sh[i..].iter().map(|&k| &xs[k]));
                out.add_scaled(&c, &l.bracket(&args));
            }
        }
    }
    Ok(out)
}

/// Largest Hochschild arity among the pieces.
fn max_hoch_arity(ps: &[&Piece]) -> Option<usize> {
    ps.iter().filter(|p| p.block == Block::Hoch).map(|p| p.map.arity).max()
}

/// `Σ_{n=1}^{cap} (1/n!)(−1)^{n(n−1)/2} l_n(α^{⊗n})`.
pub fn mc_residual<L: LInfty + ?Sized>(l: &L, alpha: &Element, cap: usize) -> Result<Element, LinftyError> {
    let field = l.space().field();
    if !field.is_characteristic_zero() {
        return Err(LinftyError::Characteristic);
    }
    let pieces = alpha.pieces();
    if pieces.iter().any(|p| p.degree() != -1) {
        return Err(LinftyError::Shape("a Maurer-Cartan element has degree -1"));
    }
    let mut out = Element::zero();
    for n in 1..=cap {
        let c = inverse_factorial(field, n)? * sign(field, odd((n * (n - 1) / 2) as i64));
        let lists = vec![pieces.clone(); n];
        let mut sum = Element::zero();
        for_each_choice(&lists, &mut |args| sum.add_scaled(&field.one(), &l.bracket(args)));
        out.add_scaled(&c, &sum);
    }
    Ok(out)
}

/// Every `(block, arity, degree)` on `v` with arity at most `max_arity`
/// whose degree lies within the range a nonzero map could have.
pub fn homogeneous_types(v: &GradedSpace, max_arity: usize) -> Vec<(Block, usize, i64)> {
    let mut out = Vec::new();
    if v.dim() == 0 {
        return out;
    }
    let degs: Vec<i64> = (0..v.dim()).map(|b| v.degree(b)).collect();
    let lo = *degs.iter().min().expect("nonempty");
    let hi = *degs.iter().max().expect("nonempty");
    for block in [Block::Hoch, Block::Op0, Block::Op1, Block::OpR, Block::OpL] {
        let shift = i64::from(block == Block::Hoch);
        for a in (0..=max_arity).filter(|&a| block.admits_arity(a)) {
            let ai = a as i64;
            for d in (lo + shift - (hi + 1) * ai)..=(hi + shift - (lo + 1) * ai) {
                out.push((block, a, d));
            }
        }
    }
    out
}

/// Calls `f` on every non-decreasing index tuple of length `n` below `count`.
fn for_each_multiset(count: usize, n: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(count: usize, n: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == n {
            f(cur);
            return;
        }
        for i in start..count {
            cur.push(i);
            rec(count, n, i, cur, f);
            cur.pop();
        }
    }
    rec(count, n, 0, &mut Vec::new(), f);
}

/// The L∞ identities on one random map of each type, for every multiset of
/// at most `max_inputs` homogeneous types of arity at most `max_arity`.
/// Types that admit only the zero map are skipped.
pub fn identity_sweep<R: Rng + ?Sized>(rng: &mut R, l: &Brackets, max_inputs: usize, max_arity: usize) -> Result<Report, LinftyError> {
    if max_inputs > l.cap() {
        return Err(LinftyError::ArityCapExceeded { n: max_inputs, cap: l.cap() });
    }
    let v = l.space().clone();
    let types: Vec<(Block, usize, i64)> = homogeneous_types(&v, max_arity)
        .into_iter()
        .filter(|&(block, arity, degree)| {
            let z = GradedMap::zero(&v, arity, degree, block.output());
            z.coeffs().len() > 0 && GradedMap::from_coeffs(&v, arity, degree, block.output(), vec![v.field().one(); z.coeffs().len()]).map(|m| !m.is_zero()).unwrap_or(false)
        })
        .collect();
    let mut check = Check::new("linfty-identities");
    let (mut tuples, mut nonzero) = (0usize, 0usize);
    let mut failure = None;
    for n in 1..=max_inputs {
        for_each_multiset(types.len(), n, &mut |idx| {
            if failure.is_some() {
                return;
            }
            let xs: Vec<Piece> = idx
                .iter()
                .map(|&i| {
                    let (block, arity, degree) = types[i];
                    loop {
                        let m = GradedMap::random(rng, &v, arity, degree, block.output(), 3);
                        if !m.is_zero() {
                            return Piece { block, map: m };
                        }
                    }
                })
                .collect();
            tuples += 1;
            if !l.bracket(&xs.iter().collect::<Vec<_>>()).is_zero() {
                nonzero += 1;
            }
            match linfty_identity_residual(l, &xs) {
                Ok(r) if r.is_zero() => {}
                Ok(r) => {
                    let values = r.pieces().into_iter().map(|p| (format!("{:?}/{}/{}", p.block, p.map.arity, p.degree()), p.map.coeffs().to_vec())).collect();
                    failure = Some(Counterexample { location: idx.to_vec(), values });
                }
                Err(e) => failure = Some(Counterexample { location: idx.to_vec(), values: vec![(format!("{e}"), Vec::new())] }),
            }
        });
    }
    if let Some(cx) = failure {
        check.fail_with(cx);
    }
    let mut report = Report::new("linfty identities");
    report.push(check.fact("types", format!("{}", types.len())).fact("tuples", format!("{tuples}")).fact("nonzero-brackets", format!("{nonzero}")));
    Ok(report)
}

/// The structure twisted by a Maurer–Cartan element.
#[derive(Clone, Debug)]
pub struct Twisted<L> {
    base: L,
    alpha: Vec<Piece>,
}

impl<L: LInfty> Twisted<L> {
    pub fn alpha(&self) -> Element {
        Element::from_pieces(self.alpha.clone())
    }
}

/// Twists `base` by `alpha`, which must satisfy the Maurer–Cartan equation up
/// to arity `base.cap()`.
pub fn twist<L: LInfty>(base: L, alpha: &Element) -> Result<Twisted<L>, LinftyError> {
    if !mc_residual(&base, alpha, base.cap())?.is_zero() {
        return Err(LinftyError::NotMaurerCartan);
    }
    Ok(Twisted { base, alpha: alpha.pieces() })
}

impl<L: LInfty> LInfty for Twisted<L> {
    fn space(&self) -> &GradedSpace {
        self.base.space()
    }

    fn cap(&self) -> usize {
        self.base.cap()
    }

    /// `l^α_n(x) = Σ_i (1/i!)(−1)^{in + i(i+1)/2} l_{n+i}(α^{⊗i}, x)`.
    fn bracket(&self, xs: &[&Piece]) -> Element {
        let field = self.space().field();
        let n = xs.len();
        let alpha_refs: Vec<&Piece> = self.alpha.iter().collect();
        let top = max_hoch_arity(&alpha_refs).max(max_hoch_arity(xs)).map_or(2, |a| (a + 1).max(2));
        let mut out = Element::zero();
        for i in 0..=top.saturating_sub(n) {
            let negative = odd((i * n + i * (i + 1) / 2) as i64);
            let c = inverse_factorial(field, i).expect("characteristic zero") * sign(field, negative);
            let mut lists = vec![self.alpha.clone(); i];
            lists.extend(xs.iter().map(|x| vec![(*x).clone()]));
            let mut sum = Element::zero();
            for_each_choice(&lists, &mut |args| sum.add_scaled(&field.one(), &self.base.bracket(args)));
            out.add_scaled(&c, &sum);
        }
        out
    }
}

/// `m(sa⊗sb) = sμ(a⊗b)` and `τ(sa) = A(a)` on `V = R` in degree 0.
pub fn mc_from_averaging(alg: &AveragingAlgebra) -> Element {
    let field = alg.field();
    let d = alg.dim();
    let v = GradedSpace::ungraded(field, d);
    let m = GradedMap::from_coeffs(&v, 2, -1, Space::SV, alg.structure_constants().to_vec()).expect("dim^3 constants");
    let mut tau = Vec::with_capacity(d * d);
    for i in 0..d {
        for k in 0..d {
            tau.push(alg.operator().get(k, i).clone());
        }
    }
    let tau = GradedMap::from_coeffs(&v, 1, -1, Space::V, tau).expect("dim^2 entries");
    Element::from_pieces([Piece { block: Block::Hoch, map: m }, Piece { block: Block::Op1, map: tau }])
}

/// Result of reading an averaging algebra off a degree −1 element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decoded {
    Algebra(AveragingAlgebra),
    /// The element is not Maurer–Cartan; the residual is returned.
    Defect(Element),
}

/// Inverse of [`mc_from_averaging`] for `V` of dimension `dim` in degree 0.
pub fn averaging_from_mc(alpha: &Element, field: Field, dim: usize) -> Result<Decoded, LinftyError> {
    for (block, arity, degree) in alpha.blocks() {
        if !matches!((block, arity, degree), (Block::Hoch, 2, -1) | (Block::Op1, 1, -1)) {
            return Err(LinftyError::Shape("only an arity-2 product and an arity-1 operator are allowed"));
        }
    }
    for p in alpha.pieces() {
        if p.map.coeffs().len() != pow(dim, p.map.arity) * dim {
            return Err(LinftyError::Shape("element does not live on a space of this dimension"));
        }
    }
    let v = GradedSpace::ungraded(field, dim);
    let residual = mc_residual(&build_brackets(v, 3)?, alpha, 3)?;
    if !residual.is_zero() {
        return Ok(Decoded::Defect(residual));
    }
    let mul = alpha.get(Block::Hoch, 2, -1).map_or_else(|| vec![field.zero(); dim * dim * dim], |m| m.coeffs().to_vec());
    let mut avg = DenseMatrix::zeros(field, dim, dim);
    if let Some(t) = alpha.get(Block::Op1, 1, -1) {
        for i in 0..dim {
            for k in 0..dim {
                avg.set(k, i, t.coeffs()[i * dim + k].clone());
            }
        }
    }
    let alg = AveragingAlgebra::new(field, dim, mul, avg).map_err(|_| LinftyError::Shape("algebra data"))?;
    Ok(Decoded::Algebra(alg))
}

/// Blocks of the total complex in degree `n`: Hochschild arity `n`, then
/// operator maps of arity `n − 1`.
fn total_blocks(n: usize) -> Vec<(Block, usize)> {
    let mut out = vec![(Block::Hoch, n)];
    match n {
        0 => {}
        1 => out.push((Block::Op0, 0)),
        2 => out.push((Block::Op1, 1)),
        _ => {
            out.push((Block::OpR, n - 1));
            out.push((Block::OpL, n - 1));
        }
    }
    out
}

fn block_degree(block: Block, arity: usize) -> i64 {
    match block {
        Block::Hoch => 1 - arity as i64,
        _ => -(arity as i64),
    }
}

/// Sign relating a cochain coordinate to the graded-map coefficient: an
/// arity-`a` cochain `f` corresponds to `(−1)^{a(a+1)/2} f`.
pub fn dictionary_sign(arity: usize) -> bool {
    odd((arity * (arity + 1) / 2) as i64)
}

fn operator_blocks(n: usize) -> Vec<(Block, usize)> {
    match n {
        0 => vec![(Block::Op0, 0)],
        1 => vec![(Block::Op1, 1)],
        _ => vec![(Block::OpR, n), (Block::OpL, n)],
    }
}

/// Matrix of `l_1` between block lists, in cochain coordinates.
fn render<L: LInfty>(l: &L, src: &[(Block, usize)], dst: &[(Block, usize)]) -> Result<DenseMatrix, LinftyError> {
    let v = l.space();
    let field = v.field();
    let d = v.dim();
    let size = |bs: &[(Block, usize)]| bs.iter().map(|&(_, a)| pow(d, a) * d).sum::<usize>();
    let mut out = DenseMatrix::zeros(field, size(dst), size(src));
    let mut col = 0;
    for &(block, arity) in src {
        let len = pow(d, arity) * d;
        for j in 0..len {
            let mut coeffs = vec![field.zero(); len];
            coeffs[j] = sign(field, dictionary_sign(arity));
            let map = GradedMap::from_coeffs(v, arity, block_degree(block, arity), block.output(), coeffs)?;
            let image = l.bracket(&[&Piece { block, map }]);
            let mut row = 0;
            for &(b2, a2) in dst {
                if let Some(m) = image.get(b2, a2, block_degree(b2, a2)) {
                    for (r, x) in m.coeffs().iter().enumerate() {
                        if !x.is_zero() {
                            out.set(row + r, col + j, if dictionary_sign(a2) { -x.clone() } else { x.clone() });
                        }
                    }
                }
                row += pow(d, a2) * d;
            }
        }
        col += len;
    }
    Ok(out)
}

/// The structure twisted by the element of an averaging algebra, on `V = R`.
pub fn twisted_by_algebra(alg: &AveragingAlgebra, cap: usize) -> Result<Twisted<Brackets>, LinftyError> {
    let v = GradedSpace::ungraded(alg.field(), alg.dim());
    twist(build_brackets(v, cap)?, &mc_from_averaging(alg))
}

/// Matrix of `l^α_1` from total degree `n` to `n + 1`, in the coordinates of
/// the averaging algebra cochain complex.
pub fn twisted_differential_matrix(alg: &AveragingAlgebra, n: usize) -> Result<DenseMatrix, LinftyError> {
    let l = twisted_by_algebra(alg, n.max(2) + 2)?;
    render(&l, &total_blocks(n), &total_blocks(n + 1))
}

/// The differential graded Lie algebra on operator cochains: `l^α_1` and
/// `l^α_2` restricted to the operator blocks.
#[derive(Clone, Debug)]
pub struct AvoDgla {
    twisted: Twisted<Brackets>,
}

pub fn avo_dgla(alg: &AveragingAlgebra) -> Result<AvoDgla, LinftyError> {
    Ok(AvoDgla { twisted: twisted_by_algebra(alg, 5)? })
}

impl AvoDgla {
    pub fn structure(&self) -> &Twisted<Brackets> {
        &self.twisted
    }

    pub fn differential(&self, x: &Element) -> Element {
        self.twisted.l(&[x]).expect("within cap")
    }

    pub fn bracket(&self, x: &Element, y: &Element) -> Element {
        self.twisted.l(&[x, y]).expect("within cap")
    }

    pub fn ternary(&self, x: &Element, y: &Element, z: &Element) -> Element {
        self.twisted.l(&[x, y, z]).expect("within cap")
    }

    /// Matrix of the differential from operator degree `n` to `n + 1`.
    pub fn differential_matrix(&self, n: usize) -> Result<DenseMatrix, LinftyError> {
        render(&self.twisted, &operator_blocks(n), &operator_blocks(n + 1))
    }
}
