//! One function per subcommand. Each returns a [`Report`] whose pass/fail
//! status decides the exit code, or a [`CliError`] for bad input.

use std::path::Path;

use avgcoh_core::algebra::{regular_bimodule, verify_av_bimodule, verify_averaging_algebra};
use avgcoh_core::complexes::{assemble_ava_complex, assemble_avo_complex, assemble_hochschild_complex, ava_differential, cohomology_dims, les_check};
use avgcoh_core::deform::{deformation_residuals, infinitesimal, triviality_search, DeformationJet, Triviality};
use avgcoh_core::extension::{extension_from_cocycle, extensions_isomorphic, classify, is_cocycle, isomorphism_from};
use avgcoh_core::graded::GradedSpace;
use avgcoh_core::homotopy::{chain_homotopy_report, homotopy_identity_residual, mc_bar_residual, HomotopyAveraging, Identity};
use avgcoh_core::linfty::{build_brackets, identity_sweep, mc_from_averaging, mc_residual, twisted_differential_matrix, Block, Element};
use avgcoh_core::{Check, Counterexample, DenseMatrix, Field, Report, Scalar};
use rand::rngs::SmallRng;
use rand::SeedableRng;

use crate::format::{self, AlgebraFile, ParseError};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
}

/// Largest degree or arity accepted by the resource guards.
pub const DEGREE_LIMIT: usize = 6;
pub const ARITY_LIMIT: usize = 5;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn parsed<T>(path: &Path, r: Result<T, ParseError>) -> Result<T, CliError> {
    r.map_err(|source| CliError::Parse { path: path.display().to_string(), source })
}

pub fn load_algebra(path: &Path) -> Result<AlgebraFile, CliError> {
    let text = read(path)?;
    parsed(path, format::parse_algebra(&text))
}

fn compute<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Compute(e.to_string())
}

fn name(path: &Path) -> String {
    path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn guard(what: &str, value: usize, limit: usize) -> Result<(), CliError> {
    if value > limit {
        return Err(CliError::Usage(format!("{what} {value} exceeds the limit {limit}")));
    }
    Ok(())
}

/// Nonzero entries of `v` as counterexamples located by their multi-index.
fn nonzero_entries(check: &mut Check, label: &str, v: &[Scalar], shape: &[usize]) {
    for (flat, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let mut loc = vec![0; shape.len()];
        let mut rest = flat;
        for (slot, &d) in shape.iter().enumerate().rev() {
            loc[slot] = rest % d.max(1);
            rest /= d.max(1);
        }
        check.fail_with(Counterexample { location: loc, values: vec![(label.to_string(), vec![x.clone()])] });
    }
}

pub fn verify(path: &Path) -> Result<Report, CliError> {
    let f = load_algebra(path)?;
    let mut report = Report::new(format!("verify {}", name(path)));
    report.extend(verify_averaging_algebra(&f.algebra));
    if let Some(m) = &f.module {
        report.extend(verify_av_bimodule(m));
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ComplexKind {
    Avo,
    Ava,
    Hochschild,
}

pub fn cohomology(path: &Path, max_degree: usize, kind: ComplexKind) -> Result<Report, CliError> {
    guard("degree", max_degree, DEGREE_LIMIT)?;
    let f = load_algebra(path)?;
    let m = f.module_or_regular();
    let cap = max_degree + 1;
    let complex = match kind {
        ComplexKind::Avo => assemble_avo_complex(&m, cap),
        ComplexKind::Ava => assemble_ava_complex(&m, cap),
        ComplexKind::Hochschild => assemble_hochschild_complex(&m, cap),
    };
    let label = match kind {
        ComplexKind::Avo => "avo",
        ComplexKind::Ava => "ava",
        ComplexKind::Hochschild => "hochschild",
    };
    let mut report = Report::new(format!("cohomology {} {label}", name(path)));
    let mut check = Check::new("cohomology").fact("coefficients", if f.module.is_some() { "file bimodule" } else { "regular bimodule" });
    match complex {
        Ok(c) => {
            for (d, h) in cohomology_dims(&c).into_iter().enumerate() {
                check = check.fact(format!("H{d}"), h.to_string());
            }
            report.push(check);
        }
        Err(e) => {
            report.push(check.fact("error", e.to_string()).set_passed(false));
            return Ok(report);
        }
    }
    if kind == ComplexKind::Ava {
        let les = les_check(&m, (max_degree + 2).max(3)).map_err(compute)?;
        for c in les.checks {
            let degree = c.name.strip_prefix("les-exactness-deg").and_then(|r| r.split('-').next()).and_then(|n| n.parse::<usize>().ok());
            if degree.map_or(true, |n| n <= max_degree) {
                report.push(c);
            }
        }
    }
    Ok(report)
}

pub fn deform(path: &Path, jet_path: &Path, order: Option<usize>, search_trivial: bool) -> Result<Report, CliError> {
    let f = load_algebra(path)?;
    let jet: DeformationJet = parsed(jet_path, format::parse_jet(&read(jet_path)?, &f))?;
    let order = order.unwrap_or(jet.order());
    if order > jet.order() {
        return Err(CliError::Usage(format!("order {order} exceeds the jet order {}", jet.order())));
    }
    let d = f.algebra.dim();
    let mut report = Report::new(format!("deform {} {}", name(path), name(jet_path)));
    for n in 1..=order {
        let r = deformation_residuals(&jet, n).map_err(compute)?;
        let mut check = Check::new(format!("order-{n}"));
        nonzero_entries(&mut check, "associativity", &r.associativity, &[d, d, d, d]);
        nonzero_entries(&mut check, "averaging-left", &r.averaging_left, &[d, d, d]);
        nonzero_entries(&mut check, "averaging-right", &r.averaging_right, &[d, d, d]);
        report.push(check);
    }
    if jet.order() >= 1 {
        let inf = infinitesimal(&jet).map_err(compute)?;
        let check = Check::new("infinitesimal-cocycle").fact("verdict", if inf.is_cocycle { "cocycle" } else { "not a cocycle" });
        report.push(check.set_passed(inf.is_cocycle));
    }
    if search_trivial {
        let check = match triviality_search(&jet, order).map_err(compute)? {
            Triviality::Trivial(iso) => {
                let mut c = Check::new("triviality").fact("verdict", format!("trivial to order {order}"));
                for (k, phi) in iso.coefficients().iter().enumerate().skip(1) {
                    c = c.fact(format!("iso-{k}"), matrix_text(phi));
                }
                c
            }
            Triviality::Obstructed { order: k, representative } => {
                let text: Vec<String> = representative.iter().map(|x| x.to_string()).collect();
                Check::new("triviality")
                    .fact("verdict", format!("obstructed at order {k}"))
                    .fact("representative", text.join(" "))
                    .set_passed(false)
            }
        };
        report.push(check);
    }
    Ok(report)
}

fn matrix_text(m: &DenseMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|r| {
            let row: Vec<String> = (0..m.cols()).map(|c| m.get(r, c).to_string()).collect();
            row.join(" ")
        })
        .collect();
    rows.join(" / ")
}

pub enum ExtendMode<'a> {
    Classify,
    FromCocycle(&'a Path),
    Compare(&'a Path, &'a Path),
}

pub fn extend(path: &Path, mode: ExtendMode<'_>) -> Result<Report, CliError> {
    let f = load_algebra(path)?;
    let m = f.module_or_regular();
    let load = |p: &Path| -> Result<_, CliError> { parsed(p, format::parse_extension(&read(p)?, &f)) };
    let mut report = Report::new(format!("extend {}", name(path)));
    match mode {
        ExtendMode::Classify => {
            let c = classify(&m).map_err(compute)?;
            report.push(Check::new("classification").fact("dim-H2", c.dim.to_string()).fact("representatives", c.representatives.len().to_string()));
        }
        ExtendMode::FromCocycle(p) => {
            let datum = load(p)?;
            let mut check = Check::new("cocycle");
            if is_cocycle(&m, &datum).map_err(compute)? {
                let ext = extension_from_cocycle(&f.algebra, &m, &datum).map_err(compute)?;
                let verdict = verify_averaging_algebra(&ext);
                check = check.fact("extension-dim", ext.dim().to_string());
                report.push(check);
                let mut built = Check::new("extension-valid");
                for c in verdict.failures() {
                    for cx in &c.counterexamples {
                        built.fail_with(cx.clone());
                    }
                }
                report.push(built);
            } else {
                let d = f.algebra.dim();
                let image = ava_differential(&m, 2).mul_vec(&datum.packaged());
                let hoch = d * d * d * m.dim();
                nonzero_entries(&mut check, "hochschild", &image[..hoch], &[d, d, d, m.dim()]);
                // the operator part holds the right then the left averaging defect
                let half = d * d * m.dim();
                nonzero_entries(&mut check, "averaging-right", &image[hoch..hoch + half], &[d, d, m.dim()]);
                nonzero_entries(&mut check, "averaging-left", &image[hoch + half..], &[d, d, m.dim()]);
                report.push(check);
            }
        }
        ExtendMode::Compare(p1, p2) => {
            let (d1, d2) = (load(p1)?, load(p2)?);
            let check = match extensions_isomorphic(&m, &d1, &d2).map_err(compute)? {
                Some(gamma) => {
                    let text: Vec<String> = gamma.iter().map(|x| x.to_string()).collect();
                    Check::new("isomorphic")
                        .fact("verdict", "isomorphic")
                        .fact("gamma", text.join(" "))
                        .fact("isomorphism", matrix_text(&isomorphism_from(&m, &gamma)))
                }
                None => Check::new("isomorphic").fact("verdict", "not isomorphic").set_passed(false),
            };
            report.push(check);
        }
    }
    Ok(report)
}

pub enum LinftyMode {
    Mc,
    TwistCompare { max_degree: usize },
    CheckIdentities { degrees: Vec<i64>, arity_cap: usize, map_arity: usize, seed: u64 },
}

fn block_label(b: Block) -> &'static str {
    match b {
        Block::Hoch => "hochschild",
        Block::Op0 => "operator-0",
        Block::Op1 => "operator-1",
        Block::OpR => "averaging-right",
        Block::OpL => "averaging-left",
    }
}

fn mc_checks(report: &mut Report, residual: &Element, blocks: &[Block], d: usize) {
    for &b in blocks {
        let mut check = Check::new(format!("mc-{}", block_label(b)));
        for (block, arity, _) in residual.blocks() {
            if block == b {
                let map = residual.get(block, arity, -2).expect("listed block");
                nonzero_entries(&mut check, &format!("arity-{arity}"), map.coeffs(), &vec![d; arity + 1]);
            }
        }
        report.push(check);
    }
}

pub fn linfty(path: Option<&Path>, mode: LinftyMode) -> Result<Report, CliError> {
    let algebra = path.map(load_algebra).transpose()?;
    let need = || algebra.as_ref().ok_or_else(|| CliError::Usage("this mode needs an algebra file".into()));
    if let Some(f) = &algebra {
        if f.algebra.field() != Field::Rational {
            return Err(CliError::Usage("the L-infinity structure requires the field Q".into()));
        }
    }
    match mode {
        LinftyMode::Mc => {
            let f = need()?;
            let l = build_brackets(GradedSpace::ungraded(Field::Rational, f.algebra.dim()), 3).map_err(compute)?;
            let residual = mc_residual(&l, &mc_from_averaging(&f.algebra), 3).map_err(compute)?;
            let mut report = Report::new(format!("linfty mc {}", name(path.expect("checked"))));
            mc_checks(&mut report, &residual, &[Block::Hoch, Block::OpR, Block::OpL, Block::Op0, Block::Op1], f.algebra.dim());
            Ok(report)
        }
        LinftyMode::TwistCompare { max_degree } => {
            guard("degree", max_degree, 4)?;
            let f = need()?;
            let m = regular_bimodule(&f.algebra);
            let mut report = Report::new(format!("linfty twist-compare {}", name(path.expect("checked"))));
            for n in 0..=max_degree {
                let twisted = twisted_differential_matrix(&f.algebra, n).map_err(compute)?;
                let total = ava_differential(&m, n);
                let mut check = Check::new(format!("degree-{n}")).fact("shape", format!("{}x{}", total.rows(), total.cols()));
                if twisted.rows() != total.rows() || twisted.cols() != total.cols() {
                    check = check.fact("twisted-shape", format!("{}x{}", twisted.rows(), twisted.cols())).set_passed(false);
                } else {
                    for r in 0..total.rows() {
                        for c in 0..total.cols() {
                            if twisted.get(r, c) != total.get(r, c) {
                                check.fail_with(Counterexample {
                                    location: vec![r, c],
                                    values: vec![("twisted".into(), vec![twisted.get(r, c).clone()]), ("total".into(), vec![total.get(r, c).clone()])],
                                });
                            }
                        }
                    }
                }
                report.push(check);
            }
            Ok(report)
        }
        LinftyMode::CheckIdentities { degrees, arity_cap, map_arity, seed } => {
            guard("arity cap", arity_cap, ARITY_LIMIT)?;
            guard("map arity", map_arity, 3)?;
            if degrees.len() > 2 {
                return Err(CliError::Usage("graded spaces of dimension at most 2 are supported".into()));
            }
            let v = GradedSpace::new(Field::Rational, degrees.clone());
            let l = build_brackets(v, arity_cap.max(2)).map_err(compute)?;
            let mut rng = SmallRng::seed_from_u64(seed);
            let mut report = identity_sweep(&mut rng, &l, arity_cap, map_arity).map_err(compute)?;
            let degs: Vec<String> = degrees.iter().map(|d| d.to_string()).collect();
            report.title = format!("linfty identities [{}] cap {arity_cap}", degs.join(" "));
            Ok(report)
        }
    }
}

pub fn homotopy(path: &Path, arity_cap: Option<usize>) -> Result<Report, CliError> {
    let h: HomotopyAveraging = parsed(path, format::parse_homotopy(&read(path)?))?;
    let cap = arity_cap.unwrap_or(h.cap());
    guard("arity cap", cap, ARITY_LIMIT)?;
    if cap > h.cap() {
        return Err(CliError::Usage(format!("arity cap {cap} exceeds the structure's cap {}", h.cap())));
    }
    let d = h.space().dim();
    let mut report = Report::new(format!("homotopy {}", name(path)));
    let mut all_zero = true;
    for (which, label) in [(Identity::Associativity, "associativity"), (Identity::Right, "right"), (Identity::Left, "left")] {
        for n in 1..=cap {
            let r = homotopy_identity_residual(&h, n, which).map_err(compute)?;
            let mut check = Check::new(format!("identity-{label}-{n}"));
            nonzero_entries(&mut check, "residual", r.coeffs(), &vec![d; n + 1]);
            all_zero &= check.passed;
            report.push(check);
        }
    }
    if h.cap() >= 2 {
        let summary = chain_homotopy_report(&h).map_err(compute)?;
        for c in summary.checks {
            if c.name.starts_with("homotopy-") {
                let facts = c.facts.clone();
                let mut fact_only = Check::new(c.name.clone());
                fact_only.facts = facts;
                report.push(fact_only.set_passed(c.passed));
            }
        }
    }
    if h.space().field() == Field::Rational {
        let bar = mc_bar_residual(&h).map_err(compute)?;
        let bar_zero = bar.blocks().iter().all(|&(_, arity, _)| arity > cap);
        report.push(
            Check::new("maurer-cartan-agreement")
                .fact("identities", if all_zero { "hold" } else { "fail" })
                .fact("maurer-cartan", if bar_zero { "hold" } else { "fail" })
                .set_passed(bar_zero == all_zero),
        );
    }
    Ok(report)
}
