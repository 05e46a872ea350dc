use std::collections::BTreeSet;

use avgcoh_core::complexes::{decode, pow};
use avgcoh_core::graded::*;
use avgcoh_core::{catalog, Field, Scalar};
use rand::rngs::SmallRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

const Q: Field = Field::Rational;

fn spaces() -> Vec<GradedSpace> {
    vec![GradedSpace::ungraded(Q, 1), GradedSpace::ungraded(Q, 2), GradedSpace::new(Q, vec![0, 1])]
}

/// Composite built from maps into `sV`, evaluated tuple by tuple.
enum Tree<'a> {
    Map(&'a GradedMap),
    Brace(Box<Tree<'a>>, Vec<Tree<'a>>),
}

impl Tree<'_> {
    fn arity(&self) -> usize {
        match self {
            Tree::Map(f) => f.arity,
            Tree::Brace(f, gs) => f.arity() - gs.len() + gs.iter().map(Tree::arity).sum::<usize>(),
        }
    }

    fn degree(&self) -> i64 {
        match self {
            Tree::Map(f) => f.degree,
            Tree::Brace(f, gs) => f.degree() + gs.iter().map(Tree::degree).sum::<i64>(),
        }
    }

    /// Output coordinates on the basis tuple `t` of `sV`.
    fn eval(&self, v: &GradedSpace, t: &[usize]) -> Vec<Scalar> {
        let d = v.dim();
        match self {
            Tree::Map(f) => {
                let idx = t.iter().fold(0, |a, &b| a * d + b);
                (0..d).map(|o| f.get(d, idx, o).clone()).collect()
            }
            Tree::Brace(f, gs) => {
                let mut out = vec![Q.zero(); d];
                for slots in increasing_choices(f.arity(), gs.len()) {
                    // Split t: free slots take one input, brace slots take arity(g) inputs.
                    let mut pos = 0;
                    let mut negative = false;
                    let mut parts: Vec<Vec<(usize, Scalar)>> = Vec::new();
                    let mut k = 0;
                    for s in 0..f.arity() {
                        if k < gs.len() && slots[k] == s {
                            let g = &gs[k];
                            let before: i64 = t[..pos].iter().map(|&b| v.suspended_degree(b)).sum();
                            negative ^= (g.degree() * before).rem_euclid(2) == 1;
                            let val = g.eval(v, &t[pos..pos + g.arity()]);
                            parts.push(val.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect());
                            pos += g.arity();
                            k += 1;
                        } else {
                            parts.push(vec![(t[pos], Q.one())]);
                            pos += 1;
                        }
                    }
                    // Expand multilinearly over the intermediate basis choices.
                    let mut combos: Vec<(Vec<usize>, Scalar)> = vec![(vec![], Q.one())];
                    for p in &parts {
                        combos = combos.iter().flat_map(|(u, c)| p.iter().map(move |(b, x)| {
                            let mut u = u.clone();
                            u.push(*b);
                            (u, c * x)
                        })).collect();
                    }
                    for (u, c) in combos {
                        let c = if negative { -c } else { c };
                        for (o, y) in f.eval(v, &u).iter().enumerate() {
                            out[o] += &(&c * y);
                        }
                    }
                }
                out
            }
        }
    }

    fn tabulate(&self, v: &GradedSpace) -> Vec<Scalar> {
        let n = self.arity();
        (0..pow(v.dim(), n)).flat_map(|t| self.eval(v, &decode(t, v.dim(), n))).collect()
    }
}

fn random_map(rng: &mut SmallRng, v: &GradedSpace, max_arity: usize) -> GradedMap {
    loop {
        let arity = rng.gen_range(0..=max_arity);
        let degree = rng.gen_range(-3..=2);
        let f = GradedMap::random(rng, v, arity, degree, Space::SV, 3);
        if !f.is_zero() {
            return f;
        }
    }
}

fn random_perm(rng: &mut SmallRng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

#[test]
fn koszul_sign_is_multiplicative() {
    let mut rng = SmallRng::seed_from_u64(1);
    for _ in 0..500 {
        let n = rng.gen_range(1..=6);
        let degrees: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let s = random_perm(&mut rng, n);
        let t = random_perm(&mut rng, n);
        let st: Vec<usize> = t.iter().map(|&k| s[k]).collect();
        let relabeled: Vec<i64> = s.iter().map(|&k| degrees[k]).collect();
        let lhs = koszul_sign(&st, &degrees).unwrap();
        assert_eq!(lhs, koszul_sign(&s, &degrees).unwrap() ^ koszul_sign(&t, &relabeled).unwrap());
        let lhs = chi_sign(&st, &degrees).unwrap();
        assert_eq!(lhs, chi_sign(&s, &degrees).unwrap() ^ chi_sign(&t, &relabeled).unwrap());
    }
    assert!(!koszul_sign(&[0, 1, 2], &[1, 1, 1]).unwrap());
    assert_eq!(chi_sign(&[0, 1], &[1]), Err(GradedError::LengthMismatch));
}

#[test]
fn shuffles_are_counted_and_ordered() {
    for i in 0..=4 {
        for j in 0..=4 {
            let sh = shuffles(i, j);
            let binom = (1..=i).fold(1usize, |acc, k| acc * (j + k) / k);
            assert_eq!(sh.len(), binom);
            let mut sorted = sh.clone();
            sorted.sort();
            assert_eq!(sorted, sh);
            for s in &sh {
                assert!(s[..i].windows(2).all(|w| w[0] < w[1]) && s[i..].windows(2).all(|w| w[0] < w[1]));
            }
        }
    }
}

#[test]
fn shuffle_factorization_is_a_bijection() {
    for n in 0..=5 {
        for i in 0..=n {
            let mut seen = BTreeSet::new();
            for sigma in shuffles(i, n - i) {
                for delta in permutations(i) {
                    for tau in permutations(n - i) {
                        let mut pi = Vec::with_capacity(n);
                        pi.extend(delta.iter().map(|&l| sigma[l]));
                        pi.extend(tau.iter().map(|&m| sigma[i + m]));
                        assert!(seen.insert(pi));
                    }
                }
            }
            assert_eq!(seen.len(), (1..=n).product::<usize>());
        }
    }
}

#[test]
fn bar_circ_matches_direct_evaluation() {
    let mut rng = SmallRng::seed_from_u64(2);
    for v in spaces() {
        for _ in 0..60 {
            let f = random_map(&mut rng, &v, 3);
            let m = rng.gen_range(0..=f.arity.min(2));
            let gs: Vec<GradedMap> = (0..m).map(|_| random_map(&mut rng, &v, 2)).collect();
            let refs: Vec<&GradedMap> = gs.iter().collect();
            let got = f.bar_circ(&v, &refs).unwrap();
            let tree = Tree::Brace(Box::new(Tree::Map(&f)), gs.iter().map(Tree::Map).collect());
            assert_eq!(got.arity, tree.arity());
            assert_eq!(got.degree, tree.degree());
            assert_eq!(got.coeffs(), &tree.tabulate(&v)[..]);
        }
    }
}

#[test]
fn bar_circ_of_binary_map_with_one_argument() {
    // f ∘̄ g = f(g ⊗ id) + f(id ⊗ g), the second with sign (−1)^{|g||a|}.
    let v = GradedSpace::new(Q, vec![0, 1]);
    let mut rng = SmallRng::seed_from_u64(3);
    for _ in 0..20 {
        let f = GradedMap::random(&mut rng, &v, 2, -1, Space::SV, 3);
        let gd = rng.gen_range(-1..=1);
        let g = GradedMap::random(&mut rng, &v, 1, gd, Space::SV, 3);
        let got = f.bar_circ(&v, &[&g]).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                for o in 0..2 {
                    let mut want = Q.zero();
                    for u in 0..2 {
                        want += &(g.get(2, a, u) * f.get(2, u * 2 + b, o));
                        let s = if (g.degree * v.suspended_degree(a)).rem_euclid(2) == 1 { -Q.one() } else { Q.one() };
                        want += &(&s * &(g.get(2, b, u) * f.get(2, a * 2 + u, o)));
                    }
                    assert_eq!(got.get(2, a * 2 + b, o), &want);
                }
            }
        }
    }
    let f = GradedMap::random(&mut rng, &v, 1, 0, Space::SV, 3);
    assert_eq!(f.bar_circ(&v, &[&f, &f]), Err(GradedError::TooManyArguments { given: 2, arity: 1 }));
}

/// Right side of the pre-Jacobi identity, by the displayed double sum.
fn pre_jacobi_rhs(v: &GradedSpace, f: &GradedMap, gs: &[GradedMap], hs: &[GradedMap]) -> Vec<Scalar> {
    let m = gs.len();
    let n = hs.len();
    let arity = f.arity - m + gs.iter().map(|g| g.arity).sum::<usize>() - n + hs.iter().map(|h| h.arity).sum::<usize>();
    let mut total = vec![Q.zero(); pow(v.dim(), arity) * v.dim()];
    // Cut h_1..h_n into 2m+1 consecutive segments: free, inside g_1, free, ..., free.
    for cuts in cut_points(n, 2 * m) {
        let bounds: Vec<usize> = std::iter::once(0).chain(cuts.iter().copied()).chain(std::iter::once(n)).collect();
        let mut args = Vec::new();
        let mut eta = 0i64;
        for k in 0..=m {
            for h in &hs[bounds[2 * k]..bounds[2 * k + 1]] {
                args.push(Tree::Map(h));
            }
            if k < m {
                let before: i64 = hs[..bounds[2 * k + 1]].iter().map(|h| h.degree).sum();
                eta += gs[k].degree * before;
                let inner: Vec<Tree> = hs[bounds[2 * k + 1]..bounds[2 * k + 2]].iter().map(Tree::Map).collect();
                args.push(Tree::Brace(Box::new(Tree::Map(&gs[k])), inner));
            }
        }
        if args.len() > f.arity || args.iter().any(|a| matches!(a, Tree::Brace(g, inner) if inner.len() > g.arity())) {
            continue;
        }
        let tree = Tree::Brace(Box::new(Tree::Map(f)), args);
        for (t, x) in total.iter_mut().zip(tree.tabulate(v)) {
            if eta.rem_euclid(2) == 1 {
                *t -= &x;
            } else {
                *t += &x;
            }
        }
    }
    total
}

/// Non-decreasing sequences of `k` cut positions in `0..=n`.
fn cut_points(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in cut_points(n, k - 1) {
        let lo = rest.last().copied().unwrap_or(0);
        for c in lo..=n {
            let mut r = rest.clone();
            r.push(c);
            out.push(r);
        }
    }
    out
}

#[test]
fn pre_jacobi_identity() {
    let mut rng = SmallRng::seed_from_u64(4);
    let spaces = spaces();
    let mut checked = 0;
    while checked < 200 {
        let v = &spaces[checked % spaces.len()];
        let f = random_map(&mut rng, v, 3);
        let m = rng.gen_range(1..=f.arity.clamp(1, 2));
        if m > f.arity {
            continue;
        }
        let gs: Vec<GradedMap> = (0..m).map(|_| random_map(&mut rng, v, 2)).collect();
        let grefs: Vec<&GradedMap> = gs.iter().collect();
        let fg = f.bar_circ(v, &grefs).unwrap();
        let n = rng.gen_range(1..=fg.arity.clamp(1, 2));
        if n > fg.arity {
            continue;
        }
        let hs: Vec<GradedMap> = (0..n).map(|_| random_map(&mut rng, v, 2)).collect();
        let hrefs: Vec<&GradedMap> = hs.iter().collect();
        let lhs = fg.bar_circ(v, &hrefs).unwrap();
        assert_eq!(lhs.coeffs(), &pre_jacobi_rhs(v, &f, &gs, &hs)[..]);
        checked += 1;
    }
}

#[test]
fn gerstenhaber_antisymmetry_and_jacobi() {
    let mut rng = SmallRng::seed_from_u64(5);
    let sgn = |x: i64| if x.rem_euclid(2) == 1 { -Q.one() } else { Q.one() };
    for v in spaces() {
        for _ in 0..40 {
            let f = random_map(&mut rng, &v, 2);
            let g = random_map(&mut rng, &v, 2);
            let h = random_map(&mut rng, &v, 2);
            let fg = f.gerstenhaber(&v, &g);
            let gf = g.gerstenhaber(&v, &f);
            let mut sum = fg.clone();
            sum.add_scaled(&sgn(f.degree * g.degree), &gf);
            assert!(sum.is_zero());

            let mut jac = f.gerstenhaber(&v, &g.gerstenhaber(&v, &h)).scale(&sgn(f.degree * h.degree));
            jac.add_scaled(&sgn(g.degree * f.degree), &g.gerstenhaber(&v, &h.gerstenhaber(&v, &f)));
            jac.add_scaled(&sgn(h.degree * g.degree), &h.gerstenhaber(&v, &f.gerstenhaber(&v, &g)));
            assert!(jac.is_zero());
        }
    }
}

#[test]
fn self_bracket_of_odd_map_is_twice_its_square() {
    let v = GradedSpace::ungraded(Q, 2);
    let mut rng = SmallRng::seed_from_u64(6);
    let f = GradedMap::random(&mut rng, &v, 2, -1, Space::SV, 3);
    let ff = f.bar_circ(&v, &[&f]).unwrap();
    assert_eq!(f.gerstenhaber(&v, &f), ff.scale(&Q.from_i64(2)));
    let e = GradedMap::random(&mut rng, &v, 1, 0, Space::SV, 3);
    assert!(e.gerstenhaber(&v, &e).is_zero());
}

#[test]
fn associative_products_have_vanishing_self_bracket() {
    for e in catalog::all(Q) {
        let v = GradedSpace::ungraded(Q, e.algebra.dim());
        let m = GradedMap::from_coeffs(&v, 2, -1, Space::SV, e.algebra.structure_constants().to_vec()).unwrap();
        assert!(m.gerstenhaber(&v, &m).is_zero(), "{}", e.name);
    }
    // A non-associative product is detected.
    let v = GradedSpace::ungraded(Q, 2);
    let mut c = vec![Q.zero(); 8];
    c[0b001] = Q.one(); // e0 e0 = e1
    c[0b100 + 0b000] = Q.one(); // e1 e0 = e0
    let m = GradedMap::from_coeffs(&v, 2, -1, Space::SV, c).unwrap();
    assert!(!m.gerstenhaber(&v, &m).is_zero());
}
