//! Graded vector spaces, homogeneous multilinear maps on the suspension
//! `sV`, Koszul signs, shuffles and the brace (`∘̄`) and Gerstenhaber
//! operations.
//!
//! A map of arity `n` always takes its inputs in `sV`; its output is in
//! `V` or in `sV`. Coefficients are stored densely with flat index
//! `tuple * dim + out` (tuples lexicographic, first slot most significant).

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::complexes::{decode, pow};
use crate::random::small_int;
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GradedError {
    #[error("permutation and degree lists have different lengths")]
    LengthMismatch,
    #[error("{given} arguments for a map of arity {arity}")]
    TooManyArguments { given: usize, arity: usize },
    #[error("coefficient count does not match the arity")]
    Shape,
}

pub(crate) fn odd(x: i64) -> bool {
    x.rem_euclid(2) == 1
}

pub(crate) fn sign(field: Field, negative: bool) -> Scalar {
    if negative {
        -field.one()
    } else {
        field.one()
    }
}

/// A finite-dimensional graded space `V`, given by the degree of each basis
/// vector. The suspension `sV` has the same basis with every degree raised by one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    field: Field,
    degrees: Vec<i64>,
}

impl GradedSpace {
    pub fn new(field: Field, degrees: Vec<i64>) -> Self {
        GradedSpace { field, degrees }
    }

    /// `sizes` lists `(degree, number of basis vectors)`; the basis is ordered by that list.
    pub fn from_sizes(field: Field, sizes: &[(i64, usize)]) -> Self {
        let degrees = sizes.iter().flat_map(|&(d, n)| core::iter::repeat(d).take(n)).collect();
        GradedSpace { field, degrees }
    }

    /// `V` concentrated in degree 0.
    pub fn ungraded(field: Field, dim: usize) -> Self {
        GradedSpace { field, degrees: vec![0; dim] }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, b: usize) -> i64 {
        self.degrees[b]
    }

    /// Degree of basis vector `b` of `sV`.
    pub fn suspended_degree(&self, b: usize) -> i64 {
        self.degrees[b] + 1
    }

    fn out_degree(&self, b: usize, out: Space) -> i64 {
        match out {
            Space::V => self.degree(b),
            Space::SV => self.suspended_degree(b),
        }
    }
}

/// Where a map lands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Space {
    V,
    SV,
}

/// A homogeneous map `(sV)^{⊗n} → V` or `(sV)^{⊗n} → sV`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    pub arity: usize,
    pub degree: i64,
    pub output: Space,
    coeffs: Vec<Scalar>,
}

impl GradedMap {
    pub fn zero(v: &GradedSpace, arity: usize, degree: i64, output: Space) -> Self {
        GradedMap { arity, degree, output, coeffs: vec![v.field.zero(); pow(v.dim(), arity) * v.dim()] }
    }

    /// Coefficients whose degree bookkeeping does not match `degree` are ignored (set to zero).
    pub fn from_coeffs(v: &GradedSpace, arity: usize, degree: i64, output: Space, coeffs: Vec<Scalar>) -> Result<Self, GradedError> {
        if coeffs.len() != pow(v.dim(), arity) * v.dim() {
            return Err(GradedError::Shape);
        }
        let mut map = GradedMap { arity, degree, output, coeffs };
        for t in 0..pow(v.dim(), arity) {
            for o in 0..v.dim() {
                if !map.admissible(v, t, o) {
                    map.coeffs[t * v.dim() + o] = v.field.zero();
                }
            }
        }
        Ok(map)
    }

    /// Random homogeneous map with entries in `[-bound, bound]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, v: &GradedSpace, arity: usize, degree: i64, output: Space, bound: i64) -> Self {
        let mut map = GradedMap::zero(v, arity, degree, output);
        for t in 0..pow(v.dim(), arity) {
            for o in 0..v.dim() {
                if map.admissible(v, t, o) {
                    map.coeffs[t * v.dim() + o] = v.field.from_i64(small_int(rng, bound));
                }
            }
        }
        map
    }

    /// Whether basis tuple `t` may map to output basis vector `o` at this degree.
    fn admissible(&self, v: &GradedSpace, t: usize, o: usize) -> bool {
        let input: i64 = decode(t, v.dim(), self.arity).iter().map(|&b| v.suspended_degree(b)).sum();
        v.out_degree(o, self.output) - input == self.degree
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn get(&self, dim: usize, tuple: usize, out: usize) -> &Scalar {
        &self.coeffs[tuple * dim + out]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn same_shape(&self, other: &GradedMap) -> bool {
        self.arity == other.arity && self.degree == other.degree && self.output == other.output
    }

    /// Zero maps of another shape are absorbed; nonzero maps must match.
    pub fn add_assign(&mut self, other: &GradedMap) {
        if !self.reconcile(other) {
            return;
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &GradedMap) {
        if !self.reconcile(other) {
            return;
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            a.add_product(c, b);
        }
    }

    /// Brings `self` to the shape of `other` when one of them is zero.
    /// Returns whether there is anything to add.
    fn reconcile(&mut self, other: &GradedMap) -> bool {
        if self.same_shape(other) {
            return true;
        }
        if other.is_zero() {
            return false;
        }
        assert!(self.is_zero(), "adding maps of different shapes");
        *self = GradedMap { coeffs: vec![other.coeffs[0].field().zero(); other.coeffs.len()], ..other.clone() };
        true
    }

    pub fn scale(&self, c: &Scalar) -> GradedMap {
        GradedMap { coeffs: self.coeffs.iter().map(|x| x * c).collect(), ..self.clone() }
    }

    /// `s ∘ f`, same coefficients.
    pub fn suspend(&self) -> GradedMap {
        debug_assert_eq!(self.output, Space::V);
        GradedMap { output: Space::SV, degree: self.degree + 1, ..self.clone() }
    }

    /// `s^{-1} ∘ f`, same coefficients.
    pub fn desuspend(&self) -> GradedMap {
        debug_assert_eq!(self.output, Space::SV);
        GradedMap { output: Space::V, degree: self.degree - 1, ..self.clone() }
    }

    /// Degree of the map as landing in `sV` (`|s∘f|` when it lands in `V`).
    pub fn suspended_degree(&self) -> i64 {
        match self.output {
            Space::V => self.degree + 1,
            Space::SV => self.degree,
        }
    }

    /// `f ∘_i g`: `g` fills slot `i` of `self`, with sign
    /// `(-1)^{|g| Σ_{j<i} |w_j|}` over the raw inputs before the slot. A `g`
    /// landing in `V` is inserted as `s∘g`.
    pub fn insert(&self, v: &GradedSpace, i: usize, g: &GradedMap) -> GradedMap {
        assert!(i < self.arity, "slot out of range");
        let d = v.dim();
        let gd = g.suspended_degree();
        let arity = self.arity + g.arity - 1;
        let mut out = GradedMap::zero(v, arity, self.degree + gd, self.output);
        let post_len = self.arity - i - 1;
        let post_count = pow(d, post_len);
        let mid_count = pow(d, g.arity);
        for t in 0..pow(d, arity) {
            let digits = decode(t, d, arity);
            let pre = &digits[..i];
            let prefix_degree: i64 = pre.iter().map(|&b| v.suspended_degree(b)).sum();
            let negative = odd(gd * prefix_degree);
            let pre_index = pre.iter().fold(0, |acc, &b| acc * d + b);
            let mid_index = digits[i..i + g.arity].iter().fold(0, |acc, &b| acc * d + b);
            let post_index = digits[i + g.arity..].iter().fold(0, |acc, &b| acc * d + b);
            debug_assert!(mid_index < mid_count.max(1) && post_index < post_count.max(1));
            for u in 0..d {
                let c = &g.coeffs[mid_index * d + u];
                if c.is_zero() {
                    continue;
                }
                let c = if negative { -c.clone() } else { c.clone() };
                let f_tuple = (pre_index * d + u) * post_count + post_index;
                for o in 0..d {
                    let fc = &self.coeffs[f_tuple * d + o];
                    if !fc.is_zero() {
                        out.coeffs[t * d + o].add_product(&c, fc);
                    }
                }
            }
        }
        out
    }

    /// Fills every slot: `Some(g)` inserts `g`, `None` keeps the identity.
    /// Equivalent to composing with a tensor product of maps, Koszul signs included.
    pub fn substitute(&self, v: &GradedSpace, slots: &[Option<&GradedMap>]) -> GradedMap {
        assert_eq!(slots.len(), self.arity, "one entry per slot");
        let mut acc = self.clone();
        let mut pos = 0;
        for slot in slots {
            match slot {
                Some(g) => {
                    acc = acc.insert(v, pos, g);
                    pos += g.arity;
                }
                None => pos += 1,
            }
        }
        acc
    }

    /// `f ∘̄ (g_1, ..., g_m)`: sum over increasing slot choices, Koszul signed.
    pub fn bar_circ(&self, v: &GradedSpace, gs: &[&GradedMap]) -> Result<GradedMap, GradedError> {
        let m = gs.len();
        if m > self.arity {
            return Err(GradedError::TooManyArguments { given: m, arity: self.arity });
        }
        let arity = self.arity - m + gs.iter().map(|g| g.arity).sum::<usize>();
        let degree = self.degree + gs.iter().map(|g| g.suspended_degree()).sum::<i64>();
        let mut out = GradedMap::zero(v, arity, degree, self.output);
        for positions in increasing_choices(self.arity, m) {
            let mut slots: Vec<Option<&GradedMap>> = vec![None; self.arity];
            for (k, &p) in positions.iter().enumerate() {
                slots[p] = Some(gs[k]);
            }
            out.add_assign(&self.substitute(v, &slots));
        }
        Ok(out)
    }

    /// `[f, g] = f ∘̄ g − (−1)^{|f||g|} g ∘̄ f` for maps into `sV`.
    pub fn gerstenhaber(&self, v: &GradedSpace, g: &GradedMap) -> GradedMap {
        let fg = one_brace(v, self, g);
        let gf = one_brace(v, g, self);
        let mut out = fg;
        out.add_scaled(&sign(v.field, !odd(self.degree * g.degree)), &gf);
        out
    }
}

/// `f ∘̄ g`, or the zero map of the right shape when `f` has no slots.
pub(crate) fn one_brace(v: &GradedSpace, f: &GradedMap, g: &GradedMap) -> GradedMap {
    match f.bar_circ(v, &[g]) {
        Ok(x) => x,
        Err(_) => GradedMap::zero(v, (g.arity + f.arity).saturating_sub(1), f.degree + g.suspended_degree(), f.output),
    }
}

/// All `m`-element increasing sequences in `0..n`.
pub fn increasing_choices(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn rec(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for p in start..n {
            if n - p < m - cur.len() {
                break;
            }
            cur.push(p);
            rec(p + 1, n, m, cur, out);
            cur.pop();
        }
    }
    rec(0, n, m, &mut cur, &mut out);
    out
}

/// All permutations of `0..n` in lexicographic order, as image sequences.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // Next lexicographic permutation.
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// `(i, j)`-shuffles: permutations increasing on the first `i` and on the last
/// `j` positions, in lexicographic order.
pub fn shuffles(i: usize, j: usize) -> Vec<Vec<usize>> {
    increasing_choices(i + j, i)
        .into_iter()
        .map(|first| {
            let mut seq = first.clone();
            seq.extend((0..i + j).filter(|x| !first.contains(x)));
            seq
        })
        .collect()
}

/// Koszul sign `ε(σ; x)` with `x_1 ⋯ x_n = ε x_{σ(1)} ⋯ x_{σ(n)}`; `true` means −1.
pub fn koszul_sign(perm: &[usize], degrees: &[i64]) -> Result<bool, GradedError> {
    if perm.len() != degrees.len() {
        return Err(GradedError::LengthMismatch);
    }
    let mut negative = false;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] && odd(degrees[perm[a]] * degrees[perm[b]]) {
                negative = !negative;
            }
        }
    }
    Ok(negative)
}

/// `χ(σ; x) = sgn(σ) ε(σ; x)`; `true` means −1.
pub fn chi_sign(perm: &[usize], degrees: &[i64]) -> Result<bool, GradedError> {
    let eps = koszul_sign(perm, degrees)?;
    let zeros = vec![0; perm.len()];
    let _ = koszul_sign(perm, &zeros)?;
    let mut inversions = 0usize;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] {
                inversions += 1;
            }
        }
    }
    Ok(eps ^ (inversions % 2 == 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    #[test]
    fn sign_examples() {
        assert!(!koszul_sign(&[0, 1], &[1, 1]).unwrap());
        assert!(koszul_sign(&[1, 0], &[1, 1]).unwrap());
        assert!(!chi_sign(&[1, 0], &[1, 1]).unwrap());
        assert!(!koszul_sign(&[1, 0], &[1, 0]).unwrap());
        assert!(chi_sign(&[1, 0], &[1, 0]).unwrap());
        assert_eq!(koszul_sign(&[0], &[1, 2]), Err(GradedError::LengthMismatch));
    }

    #[test]
    fn shuffle_counts() {
        assert_eq!(shuffles(2, 1), vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 2, 0]]);
        assert_eq!(shuffles(0, 3), vec![vec![0, 1, 2]]);
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn identity_brace() {
        let v = GradedSpace::from_sizes(Q, &[(0, 1), (1, 1)]);
        let mut id = GradedMap::zero(&v, 1, 0, Space::SV);
        id.coeffs[0] = Q.one();
        id.coeffs[3] = Q.one();
        use rand::SeedableRng;
        let mut rng = rand::rngs::SmallRng::seed_from_u64(1);
        for arity in 0..3 {
            let f = GradedMap::random(&mut rng, &v, arity, -1, Space::SV, 3);
            // f ∘̄ id = arity · f.
            let got = one_brace(&v, &f, &id);
            if arity == 0 {
                assert!(got.is_zero());
            } else {
                assert_eq!(got, f.scale(&Q.from_i64(arity as i64)));
            }
            // id ∘̄ f = f.
            assert_eq!(one_brace(&v, &id, &f), f);
        }
    }
}
