//! The bundled data files under `catalog/` are generated from the library
//! catalog. `cargo test -p avgcoh --test catalog -- --ignored` rewrites them.

use std::path::PathBuf;

use avgcoh::format::{self, AlgebraFile, Basis};
use avgcoh_core::algebra::{regular_bimodule, AvBimodule};
use avgcoh_core::catalog::{self, ints};
use avgcoh_core::deform::{apply_formal_iso, cochain_to_matrix, DeformationJet, FormalIso};
use avgcoh_core::extension::{classify, coboundary, is_cocycle, ExtensionDatum};
use avgcoh_core::graded::{GradedMap, GradedSpace, Space};
use avgcoh_core::homotopy::{solve_second_order_homotopy, HomotopyAveraging, Operation};
use avgcoh_core::{AveragingAlgebra, DenseMatrix, Field, Scalar};
use rand::rngs::SmallRng;
use rand::SeedableRng;

const Q: Field = Field::Rational;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("catalog")
}

fn basis_for(name: &str, dim: usize) -> Basis {
    let names: &[&str] = match name {
        "k2-proj" | "k2-proj-second" | "k2-expectation" => &["e", "f"],
        "dual-proj" | "dual-nilpotent" => &["one", "x"],
        "t2-diagonal" | "t2-sampled-a" | "t2-sampled-b" => &["e11", "e12", "e22"],
        _ => return Basis::numbered(dim),
    };
    Basis::named(names).expect("valid names")
}

fn plain(name: &str, algebra: AveragingAlgebra) -> AlgebraFile {
    let basis = basis_for(name, algebra.dim());
    AlgebraFile { algebra, basis, module: None, module_basis: None }
}

fn entry(name: &str) -> AveragingAlgebra {
    catalog::all(Q).into_iter().find(|e| e.name == name).expect("catalog name").algebra
}

fn with_product_entry(alg: &AveragingAlgebra, (i, j, k): (usize, usize, usize), v: i64) -> AveragingAlgebra {
    let d = alg.dim();
    let mut mul = alg.structure_constants().to_vec();
    mul[(i * d + j) * d + k] = Q.from_i64(v);
    AveragingAlgebra::new(Q, d, mul, alg.operator().clone()).expect("shape")
}

fn with_operator(alg: &AveragingAlgebra, rows: &[i64]) -> AveragingAlgebra {
    let d = alg.dim();
    alg.with_operator(DenseMatrix::from_entries(Q, d, d, ints(Q, rows)).expect("shape")).expect("shape")
}

fn module_file(name: &str, alg: AveragingAlgebra, m: AvBimodule) -> AlgebraFile {
    let basis = basis_for(name, alg.dim());
    AlgebraFile { algebra: alg, basis, module: Some(m), module_basis: None }
}

fn corrupted_module(m: &AvBimodule) -> AvBimodule {
    let mut op = m.operator().clone();
    op.set(1, 1, Q.one());
    let left = (0..m.base().dim()).map(|i| m.left(i).clone()).collect();
    let right = (0..m.base().dim()).map(|i| m.right(i).clone()).collect();
    AvBimodule::new(m.base().clone(), m.dim(), left, right, op).expect("shape")
}

/// A 2-term complex `k² ⊗ k[y]/y²` with `dy = 1`, operator `f ⊗ id`.
fn dg_with_operator(f: [[i64; 2]; 2]) -> HomotopyAveraging {
    let v = GradedSpace::new(Q, vec![0, 0, 1, 1]);
    let mut h = HomotopyAveraging::zero(v, 2);
    let view = h.view().clone();
    let d = 4;
    let mut m1 = vec![Q.zero(); d * d];
    let mut m2 = vec![Q.zero(); d * d * d];
    let mut a = vec![Q.zero(); d * d];
    for i in 0..2 {
        m1[(2 + i) * d + i] = Q.one();
        m2[(i * d + i) * d + i] = Q.one();
        m2[(i * d + 2 + i) * d + 2 + i] = Q.one();
        m2[((2 + i) * d + i) * d + 2 + i] = Q.one();
        for k in 0..2 {
            a[i * d + k] = Q.from_i64(f[k][i]);
            a[(2 + i) * d + 2 + k] = Q.from_i64(f[k][i]);
        }
    }
    h.set(Operation::Product(1), GradedMap::from_coeffs(&view, 1, -1, Space::SV, m1).unwrap()).unwrap();
    h.set(Operation::Product(2), GradedMap::from_coeffs(&view, 2, 0, Space::SV, m2).unwrap()).unwrap();
    h.set(Operation::Operator, GradedMap::from_coeffs(&view, 1, 0, Space::SV, a).unwrap()).unwrap();
    h
}

fn files() -> Vec<(String, String)> {
    let mut out = Vec::new();
    for e in catalog::all(Q) {
        out.push((format!("{}.avg", e.name), format::write_algebra(&plain(e.name, e.algebra))));
    }
    let k2 = entry("k2-proj");
    out.push(("k2-proj-regular.avg".into(), format::write_algebra(&module_file("k2-proj", k2.clone(), regular_bimodule(&k2)))));

    let corrupted = [
        ("k2-proj-product", plain("k2-proj", with_product_entry(&k2, (0, 1, 0), 1))),
        ("k2-expectation-operator", plain("k2-expectation", with_operator(&entry("k2-expectation"), &[1, 2, 0, 0]))),
        ("dual-proj-operator", plain("dual-proj", with_operator(&entry("dual-proj"), &[0, 0, 1, 1]))),
        ("t2-sampled-a-product", plain("t2-sampled-a", with_product_entry(&entry("t2-sampled-a"), (1, 2, 0), 2))),
        ("dual-nilpotent-operator", plain("dual-nilpotent", with_operator(&entry("dual-nilpotent"), &[0, 1, 1, 0]))),
        ("k2-proj-module", module_file("k2-proj", k2.clone(), corrupted_module(&regular_bimodule(&k2)))),
    ];
    for (name, f) in corrupted {
        out.push((format!("corrupted/{name}.avg"), format::write_algebra(&f)));
    }

    let k2e = entry("k2-expectation");
    let b = basis_for("k2-expectation", 2);
    out.push(("jets/constant.jet".into(), format::write_jet(&DeformationJet::constant(&k2e, 2), &b)));
    let phi = FormalIso::new(vec![
        DenseMatrix::identity(Q, 2),
        DenseMatrix::from_entries(Q, 2, 2, ints(Q, &[0, 1, 2, 0])).unwrap(),
        DenseMatrix::from_entries(Q, 2, 2, ints(Q, &[1, 0, 0, -1])).unwrap(),
    ])
    .unwrap();
    let moved = apply_formal_iso(&DeformationJet::constant(&k2e, 2), &phi).unwrap();
    out.push(("jets/coboundary.jet".into(), format::write_jet(&moved, &b)));
    let (obstructed_base, rep) = obstructed();
    let d = entry(obstructed_base).dim();
    let datum = ExtensionDatum::from_packaged(&regular_bimodule(&entry(obstructed_base)), &rep).unwrap();
    let jet = DeformationJet::first_order(&entry(obstructed_base), 1, datum.psi.clone(), cochain_to_matrix(Q, d, &datum.chi)).unwrap();
    out.push((format!("jets/obstructed-{obstructed_base}.jet"), format::write_jet(&jet, &basis_for(obstructed_base, d))));

    let t2 = plain("t2-diagonal", entry("t2-diagonal"));
    let m = regular_bimodule(&t2.algebra);
    let gamma = ints(Q, &[1, 0, -1, 2, 0, 1, 0, 3, 1]);
    let base = ExtensionDatum::zero(&m);
    let shifted = coboundary(&m, &gamma).unwrap();
    out.push(("extensions/t2-zero.ext".into(), format::write_extension(&base, &t2)));
    out.push(("extensions/t2-coboundary.ext".into(), format::write_extension(&shifted, &t2)));
    let broken = (0..m.dim())
        .map(|b| {
            let mut x = ExtensionDatum::zero(&m);
            x.chi[b] = Q.one();
            x
        })
        .find(|x| !is_cocycle(&m, x).unwrap())
        .expect("some unit datum is not a cocycle");
    out.push(("extensions/t2-not-cocycle.ext".into(), format::write_extension(&broken, &t2)));

    out.push(("homotopy/strict-k2-proj.hom".into(), format::write_homotopy(&HomotopyAveraging::strict(&k2, 2).unwrap())));
    let mut crafted = dg_with_operator([[1, 1], [0, 0]]);
    assert!(solve_second_order_homotopy(&mut crafted, false).unwrap());
    assert!(solve_second_order_homotopy(&mut crafted, true).unwrap());
    out.push(("homotopy/crafted.hom".into(), format::write_homotopy(&crafted)));
    let mut rng = SmallRng::seed_from_u64(5);
    let random = HomotopyAveraging::random(&mut rng, GradedSpace::new(Q, vec![0, 1]), 2, 2);
    out.push(("homotopy/random.hom".into(), format::write_homotopy(&random)));
    out
}

/// First catalog algebra with a non-trivial second cohomology class.
fn obstructed() -> (&'static str, Vec<Scalar>) {
    for e in catalog::all(Q) {
        let c = classify(&regular_bimodule(&e.algebra)).unwrap();
        if let Some(rep) = c.representatives.first() {
            return (e.name, rep.packaged());
        }
    }
    panic!("no catalog algebra has a second cohomology class");
}

#[test]
fn bundled_files_match_the_library_catalog() {
    for (rel, text) in files() {
        let path = root().join(&rel);
        let on_disk = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(on_disk, text, "{rel} is stale; rerun the ignored regenerate test");
    }
}

#[test]
fn catalog_files_parse_back_to_the_library_algebras() {
    for e in catalog::all(Q) {
        let text = std::fs::read_to_string(root().join(format!("{}.avg", e.name))).unwrap();
        let parsed = format::parse_algebra(&text).unwrap();
        assert_eq!(parsed.algebra, e.algebra, "{}", e.name);
        assert_eq!(format::write_algebra(&parsed), text);
    }
}

#[test]
#[ignore]
fn regenerate() {
    for (rel, text) in files() {
        let path = root().join(rel);
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(path, text).unwrap();
    }
}
