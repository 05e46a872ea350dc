use avgcoh_core::algebra::regular_bimodule;
use avgcoh_core::complexes::*;
use avgcoh_core::deform::*;
use avgcoh_core::{catalog, random, AveragingAlgebra, DenseMatrix, Field, Scalar};
use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

const Q: Field = Field::Rational;

fn neg(v: &[Scalar]) -> Vec<Scalar> {
    v.iter().map(|x| -x.clone()).collect()
}

fn add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn random_matrix(rng: &mut SmallRng, d: usize) -> DenseMatrix {
    DenseMatrix::from_entries(Q, d, d, random::scalars(rng, Q, d * d, 2)).unwrap()
}

fn random_iso(rng: &mut SmallRng, d: usize, order: usize) -> FormalIso {
    let mut phi = vec![DenseMatrix::identity(Q, d)];
    phi.extend((0..order).map(|_| random_matrix(rng, d)));
    FormalIso::new(phi).unwrap()
}

/// A random element of the degree-2 cocycles of the total complex.
fn random_cocycle(rng: &mut SmallRng, alg: &AveragingAlgebra) -> Vec<Scalar> {
    let m = regular_bimodule(alg);
    let basis = ava_differential(&m, 2).kernel_basis();
    let mut v = vec![Q.zero(); cochain_dim(&m, 2) + cochain_dim(&m, 1)];
    for b in basis {
        let c = Q.from_i64(rng.gen_range(-2..=2));
        v = v.iter().zip(&b).map(|(x, y)| x + &(&c * y)).collect();
    }
    v
}

fn split(alg: &AveragingAlgebra, v: &[Scalar]) -> (Vec<Scalar>, DenseMatrix) {
    let d = alg.dim();
    (v[..d * d * d].to_vec(), cochain_to_matrix(Q, d, &v[d * d * d..]))
}

fn algebras() -> Vec<(String, AveragingAlgebra)> {
    let mut out: Vec<_> = catalog::all(Q).into_iter().map(|e| (e.name.to_string(), e.algebra)).collect();
    let mut rng = SmallRng::seed_from_u64(3);
    for i in 0..4 {
        out.push((format!("random-{i}"), random::averaging_algebra(&mut rng, Q)));
    }
    out
}

#[test]
fn order_one_residuals_are_the_total_differential() {
    let mut rng = SmallRng::seed_from_u64(7);
    for (name, alg) in algebras() {
        let d = alg.dim();
        let m = regular_bimodule(&alg);
        for trial in 0..100 {
            let packed = if trial % 2 == 0 {
                let mut v = random::scalars(&mut rng, Q, d * d * d, 2);
                v.extend(random::scalars(&mut rng, Q, d * d, 2));
                v
            } else {
                random_cocycle(&mut rng, &alg)
            };
            let (mu1, a1) = split(&alg, &packed);
            let jet = DeformationJet::first_order(&alg, 1, mu1.clone(), a1.clone()).unwrap();
            let res = deformation_residuals(&jet, 1).unwrap();
            let inf = infinitesimal(&jet).unwrap();
            assert_eq!(res.vanish(), inf.is_cocycle, "{name}");
            assert_eq!(inf.packaged, packed);

            // Term by term: −δμ_1, ∂_l A_1 + Φ_l μ_1, ∂_r A_1 + Φ_r μ_1.
            assert_eq!(res.associativity, neg(&delta_matrix(&m, 2).mul_vec(&mu1)), "{name}");
            let a1c = matrix_to_cochain(&a1);
            let phi2 = phi_matrix(&m, 2).mul_vec(&mu1);
            let half = phi2.len() / 2;
            assert_eq!(res.averaging_right, add(&partial_r_matrix(&m, 1).mul_vec(&a1c), &phi2[..half]), "{name}");
            assert_eq!(res.averaging_left, add(&partial_l_matrix(&m, 1).mul_vec(&a1c), &phi2[half..]), "{name}");
            match infinitesimal_is_cocycle(&jet) {
                Ok(i) => assert!(i.is_cocycle),
                Err(e) => assert_eq!(e, DeformError::NotADeformationAtOrder1),
            }
        }
    }
}

#[test]
fn operator_only_deformations_give_operator_cocycles() {
    let mut rng = SmallRng::seed_from_u64(8);
    for (name, alg) in algebras() {
        let d = alg.dim();
        let m = regular_bimodule(&alg);
        // Solutions with μ_1 = 0: kernel of the order-1 averaging residuals in A_1 alone.
        let avo = avo_differential(&m, 1);
        for a1c in avo.kernel_basis() {
            let a1 = cochain_to_matrix(Q, d, &a1c);
            let jet = DeformationJet::first_order(&alg, 1, vec![Q.zero(); d * d * d], a1).unwrap();
            assert!(deformation_residuals(&jet, 1).unwrap().vanish(), "{name}");
        }
        for _ in 0..10 {
            let a1 = random_matrix(&mut rng, d);
            let jet = DeformationJet::first_order(&alg, 1, vec![Q.zero(); d * d * d], a1.clone()).unwrap();
            let closed = avo.mul_vec(&matrix_to_cochain(&a1)).iter().all(Scalar::is_zero);
            assert_eq!(deformation_residuals(&jet, 1).unwrap().vanish(), closed, "{name}");
        }
    }
}

#[test]
fn transport_first_order_formulas() {
    let mut rng = SmallRng::seed_from_u64(9);
    for (name, alg) in algebras() {
        let d = alg.dim();
        if d == 0 {
            continue;
        }
        let m = regular_bimodule(&alg);
        let (mu1, a1) = split(&alg, &random_cocycle(&mut rng, &alg));
        let jet = DeformationJet::first_order(&alg, 2, mu1.clone(), a1.clone()).unwrap();
        let iso = random_iso(&mut rng, d, 2);
        let moved = apply_formal_iso(&jet, &iso).unwrap();
        let phi1 = &iso.coefficients()[1];

        // μ'_1(x, y) = μ_1(x, y) + xφ_1(y) − φ_1(xy) + φ_1(x)y.
        for i in 0..d {
            for j in 0..d {
                let (x, y) = (alg.basis_vector(i), alg.basis_vector(j));
                let mut expect = moved.mu(1)[(i * d + j) * d..(i * d + j + 1) * d].to_vec();
                expect = add(&expect, &neg(&mu1[(i * d + j) * d..(i * d + j + 1) * d]));
                let rhs = add(
                    &add(&alg.product(&x, &phi1.mul_vec(&y)), &neg(&phi1.mul_vec(&alg.product(&x, &y)))),
                    &alg.product(&phi1.mul_vec(&x), &y),
                );
                assert_eq!(expect, rhs, "{name}");
            }
        }
        // A'_1 = A_1 + Aφ_1 − φ_1A.
        let a = alg.operator();
        let expect = a1.add(&a.mul(phi1).unwrap()).unwrap().sub(&phi1.mul(a).unwrap()).unwrap();
        assert_eq!(moved.a(1), &expect, "{name}");

        // Difference of infinitesimals is the total differential of (φ_1, 0).
        let diff = add(&infinitesimal(&moved).unwrap().packaged, &neg(&infinitesimal(&jet).unwrap().packaged));
        let mut pre = matrix_to_cochain(phi1);
        pre.extend(vec![Q.zero(); d]);
        assert_eq!(diff, ava_differential(&m, 1).mul_vec(&pre), "{name}");
    }
}

#[test]
fn transport_is_functorial_and_preserves_deformations() {
    let mut rng = SmallRng::seed_from_u64(10);
    for (name, alg) in algebras() {
        let d = alg.dim();
        if d == 0 {
            continue;
        }
        let jet = DeformationJet::constant(&alg, 3);
        let (p, q) = (random_iso(&mut rng, d, 3), random_iso(&mut rng, d, 3));
        let once = apply_formal_iso(&jet, &p).unwrap();
        for n in 0..=3 {
            assert!(deformation_residuals(&once, n).unwrap().vanish(), "{name} order {n}");
        }
        let twice = apply_formal_iso(&once, &q).unwrap();
        assert_eq!(twice, apply_formal_iso(&jet, &p.compose(&q)).unwrap(), "{name}");
        assert_eq!(apply_formal_iso(&jet, &FormalIso::identity(Q, d, 3)).unwrap(), jet);

        // Every transported constant jet is trivial, and the iso found undoes it.
        match triviality_search(&twice, 3).unwrap() {
            Triviality::Trivial(iso) => assert_eq!(apply_formal_iso(&twice, &iso).unwrap(), jet, "{name}"),
            other => panic!("{name}: {other:?}"),
        }
    }
}

#[test]
fn coboundary_infinitesimals() {
    let mut rng = SmallRng::seed_from_u64(12);
    for (name, alg) in algebras() {
        let d = alg.dim();
        let m = regular_bimodule(&alg);
        let phi = random::scalars(&mut rng, Q, d * d, 2);
        let mu1 = delta_matrix(&m, 1).mul_vec(&phi);
        let a1 = cochain_to_matrix(Q, d, &neg(&phi_matrix(&m, 1).mul_vec(&phi)));
        let mut jet = DeformationJet::first_order(&alg, 2, mu1, a1).unwrap();
        let inf = infinitesimal_is_cocycle(&jet).unwrap();
        assert!(inf.is_cocycle, "{name}");
        let mut pre = phi.clone();
        pre.extend(vec![Q.zero(); d]);
        assert_eq!(inf.packaged, ava_differential(&m, 1).mul_vec(&pre));
        // Completed arbitrarily at order 2: the first step still succeeds.
        jet = DeformationJet::new(
            alg.clone(),
            vec![alg.structure_constants().to_vec(), jet.mu(1).to_vec(), random::scalars(&mut rng, Q, d * d * d, 2)],
            vec![alg.operator().clone(), jet.a(1).clone(), random_matrix(&mut rng, d)],
        )
        .unwrap();
        match triviality_search(&jet, 2).unwrap() {
            Triviality::Trivial(_) => {}
            Triviality::Obstructed { order, .. } => assert_eq!(order, 2, "{name}"),
        }
    }
}

#[test]
fn non_coboundary_cocycles_are_obstructed_at_order_one() {
    let mut seen = 0;
    for (name, alg) in algebras() {
        let m = regular_bimodule(&alg);
        let c = assemble_ava_complex(&m, 3).unwrap();
        if cohomology_dims(&c)[2] == 0 {
            continue;
        }
        let prev = &c.differentials[1];
        let rank = prev.rank();
        for z in c.differentials[2].kernel_basis() {
            if prev.hstack(&DenseMatrix::from_columns(Q, z.len(), &[z.clone()])).unwrap().rank() == rank {
                continue;
            }
            let (mu1, a1) = split(&alg, &z);
            let jet = DeformationJet::first_order(&alg, 1, mu1, a1).unwrap();
            assert!(deformation_residuals(&jet, 1).unwrap().vanish());
            match triviality_search(&jet, 1).unwrap() {
                Triviality::Obstructed { order: 1, representative } => assert_eq!(representative, z),
                other => panic!("{name}: {other:?}"),
            }
            seen += 1;
            break;
        }
    }
    assert!(seen > 0);
}

#[test]
fn rigidity_certificates() {
    let mut rigid = 0;
    for (name, alg) in algebras() {
        let report = rigidity_certificate(&alg).unwrap();
        let check = report.check("second-cohomology").unwrap();
        let dim: usize = check.facts[0].1.parse().unwrap();
        let c = assemble_ava_complex(&regular_bimodule(&alg), 3).unwrap();
        assert_eq!(dim, cohomology_dims(&c)[2], "{name}");
        if dim == 0 {
            rigid += 1;
            assert_eq!(check.facts[1].1, "rigid");
        } else {
            assert!(check.facts.iter().any(|(k, _)| k == "sample-cocycle"));
        }
        println!("{name}: dim H2 = {dim}");
    }
    assert!(rigid > 0);
}

#[test]
fn rigid_instance_trivializes_to_order_three() {
    // Scans over dims 1..3 found no nonzero instance with vanishing second
    // cohomology; the 0-dimensional algebra is the rigid case exercised here.
    let mut rng = SmallRng::seed_from_u64(13);
    let mut rigid = 0;
    for (name, alg) in algebras() {
        let c = assemble_ava_complex(&regular_bimodule(&alg), 3).unwrap();
        if cohomology_dims(&c)[2] != 0 {
            continue;
        }
        rigid += 1;
        let d = alg.dim();
        let jet = apply_formal_iso(&DeformationJet::constant(&alg, 3), &random_iso(&mut rng, d, 3)).unwrap();
        match triviality_search(&jet, 3).unwrap() {
            Triviality::Trivial(iso) => assert_eq!(apply_formal_iso(&jet, &iso).unwrap(), DeformationJet::constant(&alg, 3)),
            other => panic!("{name}: {other:?}"),
        }
        // Every valid first-order jet is trivial there.
        for _ in 0..10 {
            let (mu1, a1) = split(&alg, &random_cocycle(&mut rng, &alg));
            let jet = DeformationJet::first_order(&alg, 1, mu1, a1).unwrap();
            assert!(matches!(triviality_search(&jet, 1).unwrap(), Triviality::Trivial(_)), "{name}");
        }
    }
    assert!(rigid > 0);
}

#[test]
fn scaling_the_operator_is_a_deformation() {
    // A_t = (1 + t)A solves the averaging equations exactly, so (0, A) is a cocycle.
    for (name, alg) in algebras() {
        let d = alg.dim();
        let jet = DeformationJet::first_order(&alg, 2, vec![Q.zero(); d * d * d], alg.operator().clone()).unwrap();
        for n in 0..=2 {
            assert!(deformation_residuals(&jet, n).unwrap().vanish(), "{name}");
        }
    }
}
