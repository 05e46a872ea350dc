//! The `.avg` text format.
//!
//! A file starts with a kind line (`algebra`, `jet`, `extension` or
//! `homotopy`), followed by `key value...` header lines and `[section]`
//! blocks. `#` starts a comment. Scalars are integers or `p/q`. Indices are
//! zero-based integers or basis names.
//!
//! ```text
//! algebra
//! field Q
//! dim 2
//! basis e f
//! [product]        # i j k value: e_i e_j has value at e_k
//! e e e 1
//! f f f 1
//! [operator]       # matrix rows; column i is A(e_i)
//! 1 0
//! 0 0
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use avgcoh_core::algebra::AvBimodule;
use avgcoh_core::deform::DeformationJet;
use avgcoh_core::extension::ExtensionDatum;
use avgcoh_core::graded::{GradedMap, GradedSpace, Space};
use avgcoh_core::homotopy::{HomotopyAveraging, Operation};
use avgcoh_core::{AveragingAlgebra, DenseMatrix, Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug)]
struct Token {
    text: String,
    line: usize,
    column: usize,
}

impl Token {
    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column: self.column, message: message.into() }
    }
}

#[derive(Clone, Debug)]
struct Section {
    name: Token,
    args: Vec<Token>,
    rows: Vec<Vec<Token>>,
}

#[derive(Clone, Debug)]
struct Raw {
    kind: Token,
    headers: Vec<Vec<Token>>,
    sections: Vec<Section>,
    end: usize,
}

fn at(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, column: 1, message: message.into() }
}

fn tokenize(line: &str, number: usize) -> Vec<Token> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (col, ch) in body.chars().chain([' ']).enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(col),
            (true, Some(s)) => {
                let text: String = body.chars().skip(s).take(col - s).collect();
                out.push(Token { text, line: number, column: s + 1 });
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn split(text: &str) -> Result<Raw, ParseError> {
    let mut kind = None;
    let mut headers = Vec::new();
    let mut sections: Vec<Section> = Vec::new();
    let mut end = 1;
    for (i, line) in text.lines().enumerate() {
        let number = i + 1;
        end = number;
        let toks = tokenize(line, number);
        let Some(first) = toks.first() else { continue };
        if kind.is_none() {
            if toks.len() != 1 {
                return Err(toks[1].err("the kind line takes no arguments"));
            }
            kind = Some(first.clone());
            continue;
        }
        if first.text.starts_with('[') {
            let joined: Vec<&str> = toks.iter().map(|t| t.text.as_str()).collect();
            let joined = joined.join(" ");
            let Some(inner) = joined.strip_prefix('[').and_then(|s| s.strip_suffix(']')) else {
                return Err(first.err("section header must look like [name args]"));
            };
            let mut parts = tokenize(inner, number);
            if parts.is_empty() {
                return Err(first.err("empty section name"));
            }
            for p in &mut parts {
                p.column += first.column;
            }
            let name = parts.remove(0);
            sections.push(Section { name, args: parts, rows: Vec::new() });
        } else if let Some(s) = sections.last_mut() {
            s.rows.push(toks);
        } else {
            headers.push(toks);
        }
    }
    let kind = kind.ok_or_else(|| at(1, "empty file"))?;
    Ok(Raw { kind, headers, sections, end })
}

impl Raw {
    fn expect_kind(&self, kind: &str) -> Result<(), ParseError> {
        if self.kind.text != kind {
            return Err(self.kind.err(format!("expected a {kind} file, found `{}`", self.kind.text)));
        }
        Ok(())
    }

    fn check_headers(&self, allowed: &[&str]) -> Result<(), ParseError> {
        let mut seen = BTreeSet::new();
        for h in &self.headers {
            if !allowed.contains(&h[0].text.as_str()) {
                return Err(h[0].err(format!("unknown key `{}`", h[0].text)));
            }
            if !seen.insert(h[0].text.clone()) {
                return Err(h[0].err(format!("duplicate key `{}`", h[0].text)));
            }
        }
        Ok(())
    }

    fn header(&self, key: &str) -> Option<&[Token]> {
        self.headers.iter().find(|h| h[0].text == key).map(|h| &h[1..])
    }

    fn check_sections(&self, allowed: &[&str]) -> Result<(), ParseError> {
        let mut seen = BTreeSet::new();
        for s in &self.sections {
            if !allowed.contains(&s.name.text.as_str()) {
                return Err(s.name.err(format!("unknown section `{}`", s.name.text)));
            }
            let key: Vec<&str> = std::iter::once(&s.name).chain(&s.args).map(|t| t.text.as_str()).collect();
            if !seen.insert(key.join(" ")) {
                return Err(s.name.err(format!("duplicate section `{}`", key.join(" "))));
            }
        }
        Ok(())
    }

    fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name.text == name)
    }
}

fn parse_count(t: &Token) -> Result<usize, ParseError> {
    t.text.parse().map_err(|_| t.err(format!("expected a count, found `{}`", t.text)))
}

fn parse_int(t: &Token) -> Result<i64, ParseError> {
    t.text.parse().map_err(|_| t.err(format!("expected an integer, found `{}`", t.text)))
}

fn parse_scalar(field: Field, t: &Token) -> Result<Scalar, ParseError> {
    Scalar::parse(field, &t.text).map_err(|_| t.err(format!("`{}` is not a scalar of {}", t.text, field)))
}

fn single<'a>(raw: &Raw, key: &str, toks: Option<&'a [Token]>) -> Result<Option<&'a Token>, ParseError> {
    match toks {
        None => Ok(None),
        Some([t]) => Ok(Some(t)),
        Some(_) => Err(at(raw.kind.line, format!("`{key}` takes exactly one value"))),
    }
}

fn parse_field(raw: &Raw) -> Result<Field, ParseError> {
    match raw.header("field") {
        None => Ok(Field::Rational),
        Some([q]) if q.text == "Q" => Ok(Field::Rational),
        Some([f, p]) if f.text == "Fp" => {
            let p: u64 = p.text.parse().map_err(|_| p.err("expected a prime"))?;
            Field::prime(p).map_err(|e| f.err(e.to_string()))
        }
        Some(toks) => Err(toks.first().map(|t| t.err("field must be `Q` or `Fp <p>`")).unwrap_or_else(|| at(raw.kind.line, "empty field"))),
    }
}

/// Basis names; `names[i]` labels index `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis {
    names: Vec<String>,
}

impl Basis {
    pub fn numbered(dim: usize) -> Self {
        Basis { names: (0..dim).map(|i| i.to_string()).collect() }
    }

    /// Named basis; `None` if a name repeats, contains whitespace or `#`,
    /// or is a number other than its own index.
    pub fn named(names: &[&str]) -> Option<Self> {
        let mut seen = BTreeSet::new();
        for (i, n) in names.iter().enumerate() {
            let bad = n.is_empty() || n.contains(|c: char| c.is_whitespace() || c == '#' || c == '[' || c == ']');
            if bad || !seen.insert(*n) || n.parse::<usize>().is_ok_and(|k| k != i) {
                return None;
            }
        }
        Some(Basis { names: names.iter().map(|n| n.to_string()).collect() })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    fn parse(toks: Option<&[Token]>, dim: usize, line: usize) -> Result<Self, ParseError> {
        let Some(toks) = toks else { return Ok(Basis::numbered(dim)) };
        if toks.len() != dim {
            return Err(at(line, format!("basis lists {} names for dimension {dim}", toks.len())));
        }
        let mut seen = BTreeSet::new();
        for (i, t) in toks.iter().enumerate() {
            if !seen.insert(t.text.as_str()) {
                return Err(t.err(format!("duplicate basis name `{}`", t.text)));
            }
            if t.text.parse::<usize>().is_ok_and(|n| n != i) {
                return Err(t.err("a numeric basis name must equal its own index"));
            }
        }
        Ok(Basis { names: toks.iter().map(|t| t.text.clone()).collect() })
    }

    fn index(&self, t: &Token) -> Result<usize, ParseError> {
        if let Some(i) = self.names.iter().position(|n| *n == t.text) {
            return Ok(i);
        }
        match t.text.parse::<usize>() {
            Ok(i) if i < self.dim() => Ok(i),
            _ => Err(t.err(format!("`{}` is not a basis index below {}", t.text, self.dim()))),
        }
    }
}

/// Reads `index... value` rows into a dense array laid out as nested
/// indices over the given bases; repeated index tuples are an error.
fn sparse(field: Field, section: &Section, bases: &[&Basis]) -> Result<Vec<Scalar>, ParseError> {
    let len: usize = bases.iter().map(|b| b.dim()).product();
    let mut out = vec![field.zero(); len];
    let mut seen = BTreeSet::new();
    for row in &section.rows {
        if row.len() != bases.len() + 1 {
            return Err(row[0].err(format!("expected {} indices and a value", bases.len())));
        }
        let mut flat = 0;
        for (t, b) in row.iter().zip(bases) {
            flat = flat * b.dim() + b.index(t)?;
        }
        if !seen.insert(flat) {
            return Err(row[0].err("duplicate entry"));
        }
        out[flat] = parse_scalar(field, &row[bases.len()])?;
    }
    Ok(out)
}

fn dense_matrix(field: Field, section: &Section, rows: usize, cols: usize) -> Result<DenseMatrix, ParseError> {
    if section.rows.len() != rows {
        return Err(section.name.err(format!("expected {rows} rows, found {}", section.rows.len())));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for row in &section.rows {
        if row.len() != cols {
            return Err(row[0].err(format!("expected {cols} entries, found {}", row.len())));
        }
        for t in row {
            entries.push(parse_scalar(field, t)?);
        }
    }
    Ok(DenseMatrix::from_entries(field, rows, cols, entries).expect("shape checked"))
}

fn no_args(section: &Section) -> Result<(), ParseError> {
    match section.args.first() {
        Some(t) => Err(t.err("this section takes no arguments")),
        None => Ok(()),
    }
}

/// An algebra with its basis names and optional bimodule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraFile {
    pub algebra: AveragingAlgebra,
    pub basis: Basis,
    pub module: Option<AvBimodule>,
    pub module_basis: Option<Basis>,
}

impl AlgebraFile {
    /// The file's bimodule, or the regular one.
    pub fn module_or_regular(&self) -> AvBimodule {
        self.module.clone().unwrap_or_else(|| avgcoh_core::algebra::regular_bimodule(&self.algebra))
    }
}

pub fn parse_algebra(text: &str) -> Result<AlgebraFile, ParseError> {
    let raw = split(text)?;
    raw.expect_kind("algebra")?;
    raw.check_headers(&["field", "dim", "basis"])?;
    raw.check_sections(&["product", "operator", "unit", "module", "left", "right", "module-operator"])?;
    for s in &raw.sections {
        no_args(s)?;
    }
    let field = parse_field(&raw)?;
    let dim_tok = single(&raw, "dim", raw.header("dim"))?.ok_or_else(|| raw.kind.err("missing `dim`"))?;
    let dim = parse_count(dim_tok)?;
    let basis = Basis::parse(raw.header("basis"), dim, dim_tok.line)?;

    let mul = match raw.section("product") {
        Some(s) => sparse(field, s, &[&basis, &basis, &basis])?,
        None => vec![field.zero(); dim * dim * dim],
    };
    let avg = match raw.section("operator") {
        Some(s) => dense_matrix(field, s, dim, dim)?,
        None if dim == 0 => DenseMatrix::zeros(field, 0, 0),
        None => return Err(at(raw.end, "missing [operator] section")),
    };
    let mut algebra = AveragingAlgebra::new(field, dim, mul, avg).map_err(|e| at(raw.kind.line, e.to_string()))?;
    if let Some(s) = raw.section("unit") {
        if s.rows.len() != 1 || s.rows[0].len() != dim {
            return Err(s.name.err(format!("unit is one row of {dim} entries")));
        }
        let unit = s.rows[0].iter().map(|t| parse_scalar(field, t)).collect::<Result<Vec<_>, _>>()?;
        algebra = algebra.with_unit(unit).map_err(|e| s.name.err(e.to_string()))?;
    }

    let module_parts = ["left", "right", "module-operator"];
    let (module, module_basis) = match raw.section("module") {
        None => {
            if let Some(s) = module_parts.iter().find_map(|p| raw.section(p)) {
                return Err(s.name.err("module data without a [module] section"));
            }
            (None, None)
        }
        Some(s) => {
            let mut mdim = None;
            let mut mnames = None;
            for row in &s.rows {
                match (row[0].text.as_str(), &row[1..]) {
                    ("dim", [t]) => mdim = Some(parse_count(t)?),
                    ("basis", rest) => mnames = Some(rest.to_vec()),
                    _ => return Err(row[0].err("expected `dim <n>` or `basis <names>`")),
                }
            }
            let mdim = mdim.ok_or_else(|| s.name.err("[module] needs `dim`"))?;
            let mbasis = Basis::parse(mnames.as_deref(), mdim, s.name.line)?;
            let actions = |name: &str| -> Result<Vec<DenseMatrix>, ParseError> {
                let values = match raw.section(name) {
                    Some(sec) => sparse(field, sec, &[&basis, &mbasis, &mbasis])?,
                    None => vec![field.zero(); dim * mdim * mdim],
                };
                // row i a b: e_i acting on m_a has value at m_b
                Ok((0..dim)
                    .map(|i| {
                        let mut m = DenseMatrix::zeros(field, mdim, mdim);
                        for a in 0..mdim {
                            for b in 0..mdim {
                                m.set(b, a, values[(i * mdim + a) * mdim + b].clone());
                            }
                        }
                        m
                    })
                    .collect())
            };
            let left = actions("left")?;
            let right = actions("right")?;
            let mavg = match raw.section("module-operator") {
                Some(sec) => dense_matrix(field, sec, mdim, mdim)?,
                None if mdim == 0 => DenseMatrix::zeros(field, 0, 0),
                None => return Err(s.name.err("missing [module-operator] section")),
            };
            let m = AvBimodule::new(algebra.clone(), mdim, left, right, mavg).map_err(|e| s.name.err(e.to_string()))?;
            (Some(m), Some(mbasis))
        }
    };
    Ok(AlgebraFile { algebra, basis, module, module_basis })
}

fn field_line(field: Field) -> String {
    match field {
        Field::Rational => "field Q".into(),
        Field::Prime(p) => format!("field Fp {p}"),
    }
}

fn write_sparse(out: &mut String, values: &[Scalar], bases: &[&Basis]) {
    for (flat, v) in values.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let mut idx = vec![0; bases.len()];
        let mut rest = flat;
        for (slot, b) in bases.iter().enumerate().rev() {
            idx[slot] = rest % b.dim();
            rest /= b.dim();
        }
        let names: Vec<&str> = idx.iter().zip(bases).map(|(&i, b)| b.name(i)).collect();
        let _ = writeln!(out, "{} {}", names.join(" "), v);
    }
}

fn write_matrix(out: &mut String, m: &DenseMatrix) {
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|c| m.get(r, c).to_string()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

pub fn write_algebra(file: &AlgebraFile) -> String {
    let alg = &file.algebra;
    let b = &file.basis;
    let mut out = String::from("algebra\n");
    let _ = writeln!(out, "{}", field_line(alg.field()));
    let _ = writeln!(out, "dim {}", alg.dim());
    if *b != Basis::numbered(alg.dim()) {
        let _ = writeln!(out, "basis {}", b.names.join(" "));
    }
    out.push_str("[product]\n");
    write_sparse(&mut out, alg.structure_constants(), &[b, b, b]);
    out.push_str("[operator]\n");
    write_matrix(&mut out, alg.operator());
    if let Some(u) = alg.unit() {
        out.push_str("[unit]\n");
        let row: Vec<String> = u.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    if let Some(m) = &file.module {
        let mb = file.module_basis.clone().unwrap_or_else(|| Basis::numbered(m.dim()));
        out.push_str("[module]\n");
        let _ = writeln!(out, "dim {}", m.dim());
        if mb != Basis::numbered(m.dim()) {
            let _ = writeln!(out, "basis {}", mb.names.join(" "));
        }
        for (name, get) in [("left", AvBimodule::left as fn(&AvBimodule, usize) -> &DenseMatrix), ("right", AvBimodule::right)] {
            let _ = writeln!(out, "[{name}]");
            let mut values = Vec::new();
            for i in 0..alg.dim() {
                for a in 0..m.dim() {
                    for bb in 0..m.dim() {
                        values.push(get(m, i).get(bb, a).clone());
                    }
                }
            }
            write_sparse(&mut out, &values, &[b, &mb, &mb]);
        }
        out.push_str("[module-operator]\n");
        write_matrix(&mut out, m.operator());
    }
    out
}

fn order_arg(s: &Section) -> Result<usize, ParseError> {
    match s.args.as_slice() {
        [t] => {
            let n = parse_count(t)?;
            if n == 0 {
                return Err(t.err("order 0 is the base structure"));
            }
            Ok(n)
        }
        _ => Err(s.name.err(format!("expected [{} <order>]", s.name.text))),
    }
}

/// Higher coefficients of a deformation of `base`; missing orders are zero.
pub fn parse_jet(text: &str, base: &AlgebraFile) -> Result<DeformationJet, ParseError> {
    let raw = split(text)?;
    raw.expect_kind("jet")?;
    raw.check_headers(&["order"])?;
    raw.check_sections(&["product", "operator"])?;
    let order_tok = single(&raw, "order", raw.header("order"))?.ok_or_else(|| raw.kind.err("missing `order`"))?;
    let order = parse_count(order_tok)?;
    let alg = &base.algebra;
    let (field, d, b) = (alg.field(), alg.dim(), &base.basis);
    let mut mu = vec![alg.structure_constants().to_vec()];
    let mut a = vec![alg.operator().clone()];
    for _ in 0..order {
        mu.push(vec![field.zero(); d * d * d]);
        a.push(DenseMatrix::zeros(field, d, d));
    }
    for s in &raw.sections {
        let k = order_arg(s)?;
        if k > order {
            return Err(s.args[0].err(format!("order {k} exceeds the jet order {order}")));
        }
        match s.name.text.as_str() {
            "product" => mu[k] = sparse(field, s, &[b, b, b])?,
            _ => a[k] = dense_matrix(field, s, d, d)?,
        }
    }
    DeformationJet::new(alg.clone(), mu, a).map_err(|e| at(raw.kind.line, e.to_string()))
}

pub fn write_jet(jet: &DeformationJet, basis: &Basis) -> String {
    let mut out = String::from("jet\n");
    let _ = writeln!(out, "order {}", jet.order());
    for k in 1..=jet.order() {
        if jet.mu(k).iter().any(|x| !x.is_zero()) {
            let _ = writeln!(out, "[product {k}]");
            write_sparse(&mut out, jet.mu(k), &[basis, basis, basis]);
        }
        if !jet.a(k).is_zero() {
            let _ = writeln!(out, "[operator {k}]");
            write_matrix(&mut out, jet.a(k));
        }
    }
    out
}

/// `ψ` rows are `i j b value` (ψ(e_i, e_j) at m_b); `χ` rows are `i b value`.
pub fn parse_extension(text: &str, base: &AlgebraFile) -> Result<ExtensionDatum, ParseError> {
    let raw = split(text)?;
    raw.expect_kind("extension")?;
    raw.check_headers(&[])?;
    raw.check_sections(&["psi", "chi"])?;
    let m = base.module_or_regular();
    let field = m.field();
    let b = &base.basis;
    let mb = base.module_basis.clone().unwrap_or_else(|| if base.module.is_some() { Basis::numbered(m.dim()) } else { b.clone() });
    let mut datum = ExtensionDatum::zero(&m);
    for s in &raw.sections {
        no_args(s)?;
        match s.name.text.as_str() {
            "psi" => datum.psi = sparse(field, s, &[b, b, &mb])?,
            _ => datum.chi = sparse(field, s, &[b, &mb])?,
        }
    }
    Ok(datum)
}

pub fn write_extension(datum: &ExtensionDatum, base: &AlgebraFile) -> String {
    let m = base.module_or_regular();
    let b = &base.basis;
    let mb = base.module_basis.clone().unwrap_or_else(|| if base.module.is_some() { Basis::numbered(m.dim()) } else { b.clone() });
    let mut out = String::from("extension\n[psi]\n");
    write_sparse(&mut out, &datum.psi, &[b, b, &mb]);
    out.push_str("[chi]\n");
    write_sparse(&mut out, &datum.chi, &[b, &mb]);
    out
}

fn operation_of(s: &Section) -> Result<Operation, ParseError> {
    let arity = || -> Result<usize, ParseError> {
        match s.args.as_slice() {
            [t] => parse_count(t),
            _ => Err(s.name.err(format!("expected [{} <arity>]", s.name.text))),
        }
    };
    let op = match s.name.text.as_str() {
        "product" => Operation::Product(arity()?),
        "operator" => {
            no_args(s)?;
            Operation::Operator
        }
        "right" => Operation::RightHomotopy(arity()?),
        _ => Operation::LeftHomotopy(arity()?),
    };
    let min = if matches!(op, Operation::Product(_) | Operation::Operator) { 1 } else { 2 };
    if op.arity() < min {
        return Err(s.args[0].err(format!("arity must be at least {min}")));
    }
    Ok(op)
}

/// Rows are `input... output value`; every entry must respect the degree of
/// the operation.
pub fn parse_homotopy(text: &str) -> Result<HomotopyAveraging, ParseError> {
    let raw = split(text)?;
    raw.expect_kind("homotopy")?;
    raw.check_headers(&["field", "degrees", "basis", "cap"])?;
    raw.check_sections(&["product", "operator", "right", "left"])?;
    let field = parse_field(&raw)?;
    let degrees: Vec<i64> = raw.header("degrees").ok_or_else(|| raw.kind.err("missing `degrees`"))?.iter().map(parse_int).collect::<Result<_, _>>()?;
    let cap_tok = single(&raw, "cap", raw.header("cap"))?.ok_or_else(|| raw.kind.err("missing `cap`"))?;
    let cap = parse_count(cap_tok)?;
    if cap == 0 {
        return Err(cap_tok.err("cap must be at least 1"));
    }
    let basis = Basis::parse(raw.header("basis"), degrees.len(), raw.kind.line)?;
    let space = GradedSpace::new(field, degrees.clone());
    let mut h = HomotopyAveraging::zero(space, cap);
    for s in &raw.sections {
        let op = operation_of(s)?;
        if op.arity() > cap {
            return Err(s.name.err(format!("arity {} exceeds the cap {cap}", op.arity())));
        }
        let bases = vec![&basis; op.arity() + 1];
        let values = sparse(field, s, &bases)?;
        for row in &s.rows {
            let idx: Vec<usize> = row[..op.arity() + 1].iter().map(|t| basis.index(t)).collect::<Result<_, _>>()?;
            let inputs: i64 = idx[..op.arity()].iter().map(|&i| degrees[i]).sum();
            if degrees[idx[op.arity()]] != inputs + op.degree() && !parse_scalar(field, &row[op.arity() + 1])?.is_zero() {
                return Err(row[0].err(format!("entry does not have degree {} ({op})", op.degree())));
            }
        }
        let map = GradedMap::from_coeffs(h.view(), op.arity(), op.degree(), Space::SV, values).map_err(|e| s.name.err(e.to_string()))?;
        h.set(op, map).map_err(|e| s.name.err(e.to_string()))?;
    }
    Ok(h)
}

pub fn write_homotopy(h: &HomotopyAveraging) -> String {
    let v = h.space();
    let mut out = String::from("homotopy\n");
    let _ = writeln!(out, "{}", field_line(v.field()));
    let degrees: Vec<String> = (0..v.dim()).map(|b| v.degree(b).to_string()).collect();
    let _ = writeln!(out, "degrees {}", degrees.join(" "));
    let _ = writeln!(out, "cap {}", h.cap());
    let basis = Basis::numbered(v.dim());
    for (op, map) in h.maps() {
        if map.is_zero() {
            continue;
        }
        let header = match op {
            Operation::Product(n) => format!("[product {n}]"),
            Operation::Operator => "[operator]".into(),
            Operation::RightHomotopy(n) => format!("[right {n}]"),
            Operation::LeftHomotopy(n) => format!("[left {n}]"),
        };
        let _ = writeln!(out, "{header}");
        write_sparse(&mut out, map.coeffs(), &vec![&basis; op.arity() + 1]);
    }
    out
}

/// The kind line of a document, for dispatch and error messages.
pub fn kind_of(text: &str) -> Option<String> {
    text.lines().map(|l| tokenize(l, 0)).find(|t| !t.is_empty()).map(|t| t[0].text.clone())
}
