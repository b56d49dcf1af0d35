//! The action of the quantum affine algebra of `sl2` on the shuffle
//! subalgebra `U`, and the submodule generated by the empty word.

use std::borrow::Cow;
use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::freeword::{Bidegree, FreeElement, IntElement, Letter, Word};
use crate::linalg::{
    clear_denominators, combine, graded_block, kernel_of_images, rank, CoordinateSystem, EchelonBasis, LinalgError,
    ListedBasis, Matrix,
};
use crate::operators::{
    apply, check_relation, eval, parse_relations, reach_one, Action, ExprError, LinExpr, NamedMaps, OperatorId,
    Relation, Side, Symbol,
};
use crate::qfield::{qint, LaurentPoly, RatFunc};
use crate::report::{CheckResult, Report};
use crate::series::expand_p;
use crate::subalgebra::{SubalgebraError, USubspaceCache};

#[derive(Debug, Error)]
pub enum RepError {
    #[error(transparent)]
    Subalgebra(#[from] SubalgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("{file}, line {line}: {reason}")]
    Fixture { file: String, line: usize, reason: String },
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("no action table for row {0}")]
    NoSuchRow(u8),
}

impl From<ExprError> for RepError {
    fn from(e: ExprError) -> Self {
        RepError::Fixture { file: "expression".into(), line: 0, reason: e.to_string() }
    }
}

// ---------------------------------------------------------------------------

/// Generators of the quantum affine algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeneratorId {
    E0,
    F0,
    K0,
    K0inv,
    E1,
    F1,
    K1,
    K1inv,
    D,
    Dinv,
}

impl GeneratorId {
    pub const ALL: [GeneratorId; 10] = [
        GeneratorId::E0,
        GeneratorId::F0,
        GeneratorId::K0,
        GeneratorId::K0inv,
        GeneratorId::E1,
        GeneratorId::F1,
        GeneratorId::K1,
        GeneratorId::K1inv,
        GeneratorId::D,
        GeneratorId::Dinv,
    ];

    /// The generators that move between components.
    pub const EF: [GeneratorId; 4] = [GeneratorId::E0, GeneratorId::E1, GeneratorId::F0, GeneratorId::F1];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorId::E0 => "E0",
            GeneratorId::F0 => "F0",
            GeneratorId::K0 => "K0",
            GeneratorId::K0inv => "K0inv",
            GeneratorId::E1 => "E1",
            GeneratorId::F1 => "F1",
            GeneratorId::K1 => "K1",
            GeneratorId::K1inv => "K1inv",
            GeneratorId::D => "D",
            GeneratorId::Dinv => "Dinv",
        }
    }

    /// Target component under the main action.
    pub fn shift(self, r: usize, s: usize) -> Option<(usize, usize)> {
        match self {
            GeneratorId::E0 => r.checked_sub(1).map(|r| (r, s)),
            GeneratorId::F0 => Some((r + 1, s)),
            GeneratorId::E1 => s.checked_sub(1).map(|s| (r, s)),
            GeneratorId::F1 => Some((r, s + 1)),
            _ => Some((r, s)),
        }
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorId {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, ExprError> {
        GeneratorId::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| ExprError::UnknownSymbol(s.to_string()))
    }
}

impl Symbol for GeneratorId {
    fn parse_symbol(s: &str) -> Option<Self> {
        s.parse().ok()
    }
}

// ---------------------------------------------------------------------------

pub const ACTION_TABLES: &str = include_str!("../fixtures/action_tables.txt");
pub const PRESENTATION: &str = include_str!("../fixtures/presentation.txt");
pub const BASIC_BASES: &str = include_str!("../fixtures/basic_bases.txt");
pub const GENERATOR_MATRICES: &str = include_str!("../fixtures/generator_matrices.txt");

/// Directory overriding the bundled basis and matrix fixtures.
pub const FIXTURE_DIR_ENV: &str = "QSHUFFLE_FIXTURE_DIR";

/// The text of a bundled fixture, or of the file with the same name in the
/// directory named by [`FIXTURE_DIR_ENV`] when that is set.
pub fn fixture_text(name: &str) -> Result<Cow<'static, str>, RepError> {
    if let Some(dir) = std::env::var_os(FIXTURE_DIR_ENV) {
        let path = std::path::Path::new(&dir).join(name);
        return std::fs::read_to_string(&path)
            .map(Cow::Owned)
            .map_err(|source| RepError::Io { path: path.display().to_string(), source });
    }
    Ok(Cow::Borrowed(match name {
        "basic_bases.txt" => BASIC_BASES,
        "generator_matrices.txt" => GENERATOR_MATRICES,
        "action_tables.txt" => ACTION_TABLES,
        "presentation.txt" => PRESENTATION,
        _ => {
            return Err(RepError::Fixture { file: name.into(), line: 0, reason: "no such bundled fixture".into() })
        }
    }))
}

fn content_lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// How each generator acts, as an expression in the named maps.
#[derive(Clone, Debug)]
pub struct ActionTable {
    pub row: u8,
    /// Symmetry carrying the main action to this one.
    pub intertwiner: Option<OperatorId>,
    exprs: BTreeMap<GeneratorId, LinExpr<OperatorId>>,
}

impl ActionTable {
    pub fn parse_all(src: &str) -> Result<Vec<ActionTable>, RepError> {
        let ferr = |line: usize, reason: String| RepError::Fixture { file: "action_tables.txt".into(), line, reason };
        let mut out: Vec<ActionTable> = Vec::new();
        for (ln, l) in content_lines(src) {
            if let Some(n) = l.strip_prefix("row ") {
                let row = n.trim().parse().map_err(|_| ferr(ln, format!("bad row number {n:?}")))?;
                out.push(ActionTable { row, intertwiner: None, exprs: BTreeMap::new() });
                continue;
            }
            let table = out.last_mut().ok_or_else(|| ferr(ln, "entry before the first row header".into()))?;
            if let Some(name) = l.strip_prefix("intertwiner ") {
                let name = name.trim();
                table.intertwiner = if name == "none" { None } else { Some(name.parse()?) };
                continue;
            }
            let (g, e) = l.split_once('=').ok_or_else(|| ferr(ln, "expected GEN = expression".into()))?;
            let g: GeneratorId = g.trim().parse()?;
            table.exprs.insert(g, e.parse()?);
        }
        for t in &out {
            if let Some(g) = GeneratorId::ALL.iter().find(|g| !t.exprs.contains_key(g)) {
                return Err(ferr(0, format!("row {} has no entry for {g}", t.row)));
            }
        }
        Ok(out)
    }

    /// The bundled table for `row` (0 is the main action).
    pub fn row(row: u8) -> Result<&'static ActionTable, RepError> {
        static TABLES: LazyLock<Vec<ActionTable>> =
            LazyLock::new(|| ActionTable::parse_all(ACTION_TABLES).expect("bundled action tables parse"));
        TABLES.iter().find(|t| t.row == row).ok_or(RepError::NoSuchRow(row))
    }

    pub fn main() -> &'static ActionTable {
        Self::row(0).expect("row 0 is bundled")
    }

    pub fn expr(&self, g: GeneratorId) -> &LinExpr<OperatorId> {
        &self.exprs[&g]
    }

    /// `g . v` as `num / den`.
    pub fn act_scaled(&self, g: GeneratorId, v: &IntElement) -> (LaurentPoly, IntElement) {
        let s = eval(&NamedMaps, self.expr(g), v);
        (s.den, s.num)
    }
}

impl Action<GeneratorId> for ActionTable {
    fn act(&self, g: &GeneratorId, v: &IntElement) -> (RatFunc, IntElement) {
        let (den, num) = self.act_scaled(*g, v);
        (RatFunc::new(LaurentPoly::one(), den).expect("nonzero denominator"), num)
    }
}

/// `g . e` under `table`.
pub fn act(table: &ActionTable, g: GeneratorId, e: &FreeElement) -> FreeElement {
    let (den, num) = clear_denominators(e);
    let (d2, img) = table.act_scaled(g, &num);
    let s = RatFunc::new(LaurentPoly::one(), &den * &d2).expect("nonzero denominator");
    img.to_ratfunc().scale(&s)
}

/// Basis vectors of every `U(r, s)` with `r + s <= window`, labelled.
pub fn u_vectors(cache: &USubspaceCache, window: usize) -> Result<Vec<(String, IntElement)>, RepError> {
    let mut out = Vec::new();
    for (r, s) in USubspaceCache::bidegrees(window) {
        for (i, v) in cache.component(r, s)?.int_vectors().into_iter().enumerate() {
            out.push((format!("U({r},{s})#{}", i + 1), v));
        }
    }
    Ok(out)
}

pub fn presentation_relations() -> Vec<Relation<GeneratorId>> {
    parse_relations(PRESENTATION).expect("bundled presentation parses")
}

/// Every defining relation, on the bases of `U(r, s)` for `r + s <= window`.
pub fn verify_presentation(cache: &USubspaceCache, window: usize, table: &ActionTable) -> Result<Report, RepError> {
    let vectors = u_vectors(cache, window)?;
    let mut rep = Report::new();
    for rel in presentation_relations() {
        rep.push(check_relation(table, &rel, &vectors));
    }
    Ok(rep.prefixed(&format!("row {}", table.row)))
}

// ---------------------------------------------------------------------------

/// Words allowed in the span that cuts out the basic module: those not
/// beginning with `y` or with `xx`.
pub fn allowed_word(w: Word) -> bool {
    match w.first() {
        None => true,
        Some(Letter::Y) => false,
        Some(Letter::X) => !(w.len() >= 2 && w.at(1) == Letter::X),
    }
}

pub fn bold_u_by_intersection(cache: &USubspaceCache, r: usize, s: usize) -> Result<EchelonBasis, RepError> {
    Ok(cache.component(r, s)?.intersect_with_predicate(allowed_word))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    Intersection,
    Generation,
}

/// Echelon bases of the components of the basic module.
#[derive(Clone, Debug)]
pub struct BoldUCache {
    pub window: usize,
    pub construction: Construction,
    pub spaces: BTreeMap<(usize, usize), EchelonBasis>,
}

impl BoldUCache {
    pub fn get(&self, r: usize, s: usize) -> Option<&EchelonBasis> {
        self.spaces.get(&(r, s))
    }

    pub fn dim(&self, r: usize, s: usize) -> usize {
        self.get(r, s).map_or(0, EchelonBasis::dim)
    }

    pub fn by_intersection(cache: &USubspaceCache, window: usize) -> Result<Self, RepError> {
        let mut spaces = BTreeMap::new();
        for (r, s) in USubspaceCache::bidegrees(window) {
            spaces.insert((r, s), bold_u_by_intersection(cache, r, s)?);
        }
        Ok(BoldUCache { window, construction: Construction::Intersection, spaces })
    }

    /// Closure of `span{1}` under `E0, E1, F0, F1`, computed on the region
    /// `r + s <= window + margin` and reported on `r + s <= window`.
    ///
    /// Every vector that enlarges a component is queued once, so the loop
    /// ends exactly when the region is closed.
    pub fn by_generation(window: usize, margin: usize) -> Result<Self, RepError> {
        let table = ActionTable::main();
        let limit = window + margin;
        let mut spaces: BTreeMap<(usize, usize), EchelonBasis> = BTreeMap::new();
        let mut queue = VecDeque::new();
        let mut one = EchelonBasis::empty(0, 0);
        one.insert(&IntElement::one())?;
        spaces.insert((0, 0), one);
        queue.push_back(IntElement::one());
        while let Some(v) = queue.pop_front() {
            for g in GeneratorId::EF {
                let (_, img) = table.act_scaled(g, &v);
                if img.is_zero() {
                    continue;
                }
                let Ok(Bidegree::Homogeneous(r, s)) = img.bidegree() else {
                    return Err(RepError::Fixture {
                        file: "generation".into(),
                        line: 0,
                        reason: format!("{g} produced an inhomogeneous image"),
                    });
                };
                if r + s > limit {
                    continue;
                }
                let space = spaces.entry((r, s)).or_insert_with(|| EchelonBasis::empty(r, s));
                if space.insert(&img)? {
                    queue.push_back(img);
                }
            }
        }
        for (r, s) in USubspaceCache::bidegrees(window) {
            spaces.entry((r, s)).or_insert_with(|| EchelonBasis::empty(r, s));
        }
        spaces.retain(|(r, s), _| r + s <= window);
        Ok(BoldUCache { window, construction: Construction::Generation, spaces })
    }
}

/// The predicted dimension of the `(r, s)` component of the basic module.
pub fn predicted_bold_dim(r: usize, s: usize, p: &[BigInt]) -> BigInt {
    let d = r as i64 - s as i64;
    let n = r as i64 - d * d;
    if n < 0 {
        BigInt::zero()
    } else {
        p[n as usize].clone()
    }
}

/// The two constructions agree: same canonical echelon bases.
pub fn check_generation_vs_intersection(gen: &BoldUCache, int: &BoldUCache) -> CheckResult {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (r, s) in USubspaceCache::bidegrees(gen.window.min(int.window)) {
        checked += 1;
        let a = gen.get(r, s).map(|b| b.rref().to_vec()).unwrap_or_default();
        let b = int.get(r, s).map(|b| b.rref().to_vec()).unwrap_or_default();
        if a != b {
            failures.push(format!("({r},{s}): generated dim {}, intersected dim {}", a.len(), b.len()));
        }
    }
    CheckResult::from_failures("intersection equals generation", checked, failures)
}

pub fn check_dimension_formula(bold: &BoldUCache) -> CheckResult {
    let p = expand_p(bold.window);
    let mut failures = Vec::new();
    let mut checked = 0;
    for (r, s) in USubspaceCache::bidegrees(bold.window) {
        checked += 1;
        let want = predicted_bold_dim(r, s, &p);
        let got = BigInt::from(bold.dim(r, s));
        if want != got {
            failures.push(format!("({r},{s}): dim {got}, predicted {want}"));
        }
    }
    CheckResult::from_failures("basic module dimensions", checked, failures)
}

// ---------------------------------------------------------------------------

fn expect_eq(failures: &mut Vec<String>, what: &str, got: &FreeElement, want: &FreeElement) {
    if got != want {
        failures.push(format!("{what}: got {got}, expected {want}"));
    }
}

/// The equations making `1` a highest weight vector of the basic module.
pub fn highest_weight_check(table: &ActionTable) -> CheckResult {
    use GeneratorId::*;
    let one = FreeElement::one();
    let zero = FreeElement::zero();
    let mut failures = Vec::new();
    expect_eq(&mut failures, "K0 1", &act(table, K0, &one), &one.mul_q_pow(1));
    expect_eq(&mut failures, "K1 1", &act(table, K1, &one), &one);
    expect_eq(&mut failures, "D 1", &act(table, D, &one), &one);
    expect_eq(&mut failures, "E0 1", &act(table, E0, &one), &zero);
    expect_eq(&mut failures, "F0^2 1", &act(table, F0, &act(table, F0, &one)), &zero);
    expect_eq(&mut failures, "E1 1", &act(table, E1, &one), &zero);
    expect_eq(&mut failures, "F1 1", &act(table, F1, &one), &zero);
    if act(table, F0, &one).is_zero() {
        failures.push("F0 1 vanishes".into());
    }
    CheckResult::from_failures("highest weight vector", 8, failures)
}

/// `K0, K1, D` act on the `(r, s)` component as `q^(2s-2r+1)`, `q^(2r-2s)`, `q^-r`.
pub fn weight_exponent(g: GeneratorId, r: usize, s: usize) -> Option<i32> {
    let (r, s) = (r as i32, s as i32);
    match g {
        GeneratorId::K0 => Some(2 * s - 2 * r + 1),
        GeneratorId::K0inv => Some(-(2 * s - 2 * r + 1)),
        GeneratorId::K1 => Some(2 * r - 2 * s),
        GeneratorId::K1inv => Some(2 * s - 2 * r),
        GeneratorId::D => Some(-r),
        GeneratorId::Dinv => Some(r),
        _ => None,
    }
}

fn eigen_and_shift(
    name: &str,
    window: usize,
    source: &dyn Fn(usize, usize) -> Result<Option<EchelonBasis>, RepError>,
) -> Result<Report, RepError> {
    let table = ActionTable::main();
    let mut rep = Report::new();
    let mut eig_fail = Vec::new();
    let mut shift_fail = Vec::new();
    let (mut eig_n, mut shift_n) = (0, 0);
    for (r, s) in USubspaceCache::bidegrees(window) {
        let Some(b) = source(r, s)? else { continue };
        for v in b.int_vectors() {
            for g in GeneratorId::ALL {
                let (den, img) = table.act_scaled(g, &v);
                if let Some(k) = weight_exponent(g, r, s) {
                    eig_n += 1;
                    if !den.is_one() || img != v.mul_q_pow(k) {
                        eig_fail.push(format!("{g} on ({r},{s})"));
                    }
                } else if r + s < window {
                    shift_n += 1;
                    if img.is_zero() {
                        continue;
                    }
                    let ok = match g.shift(r, s) {
                        Some((r2, s2)) => match source(r2, s2)? {
                            Some(t) => t.contains(&img)?,
                            None => true,
                        },
                        None => false,
                    };
                    if !ok {
                        shift_fail.push(format!("{g} on ({r},{s})"));
                    }
                }
            }
        }
    }
    rep.push(CheckResult::from_failures(format!("{name} weights"), eig_n, eig_fail));
    rep.push(CheckResult::from_failures(format!("{name} E/F targets"), shift_n, shift_fail));
    Ok(rep)
}

/// Weights on every basis vector of `U(r, s)` and of the basic module,
/// `r + s <= window`, and the components the `E`s and `F`s land in.
pub fn weight_eigenvalue_check(cache: &USubspaceCache, window: usize) -> Result<Report, RepError> {
    let mut rep = eigen_and_shift("U", window, &|r, s| Ok(Some((*cache.component(r, s)?).clone())))?;
    let w = window.min(cache.cap());
    rep.extend(eigen_and_shift("basic module", w, &|r, s| Ok(Some(bold_u_by_intersection(cache, r, s)?)))?);
    Ok(rep)
}

// ---------------------------------------------------------------------------

/// Listed basis vectors keyed by component, in listed order.
#[derive(Clone, Debug, Default)]
pub struct BasisFixture {
    pub entries: BTreeMap<(usize, usize), Vec<(usize, FreeElement)>>,
}

impl BasisFixture {
    pub fn parse(src: &str) -> Result<Self, RepError> {
        let ferr = |line: usize, reason: String| RepError::Fixture { file: "basic_bases.txt".into(), line, reason };
        let mut entries: BTreeMap<(usize, usize), Vec<(usize, FreeElement)>> = BTreeMap::new();
        for (ln, l) in content_lines(src) {
            let (head, vec) = l.split_once('|').ok_or_else(|| ferr(ln, "expected \"r s | vector\"".into()))?;
            let nums: Vec<usize> = head
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| ferr(ln, format!("bad degree {t:?}"))))
                .collect::<Result<_, _>>()?;
            let [r, s] = nums[..] else {
                return Err(ferr(ln, "expected two degrees".into()));
            };
            let v: FreeElement = vec.trim().parse().map_err(|e| ferr(ln, format!("{e}")))?;
            entries.entry((r, s)).or_default().push((ln, v));
        }
        Ok(BasisFixture { entries })
    }

    pub fn load() -> Result<Self, RepError> {
        Self::parse(&fixture_text("basic_bases.txt")?)
    }

    pub fn vectors(&self, r: usize, s: usize) -> Vec<FreeElement> {
        self.entries.get(&(r, s)).map(|v| v.iter().map(|(_, e)| e.clone()).collect()).unwrap_or_default()
    }

    pub fn listed_basis(&self, r: usize, s: usize) -> Result<ListedBasis, RepError> {
        Ok(ListedBasis::new(r, s, self.vectors(r, s))?)
    }
}

/// Each listed vector lies in `U(r, s)` and avoids the forbidden leading
/// patterns; each listed family is independent of the computed dimension;
/// and every nonzero component in the window is listed.
pub fn verify_listed_bases(cache: &USubspaceCache, fixture: &BasisFixture, window: usize) -> Result<Report, RepError> {
    let mut rep = Report::new();
    for (&(r, s), vecs) in &fixture.entries {
        if r + s > window {
            continue;
        }
        let u = cache.component(r, s)?;
        let mut failures = Vec::new();
        for (ln, v) in vecs {
            match v.bidegree() {
                Ok(Bidegree::Homogeneous(a, b)) if (a, b) == (r, s) => {}
                _ => {
                    failures.push(format!("line {ln}: not homogeneous of degree ({r},{s})"));
                    continue;
                }
            }
            if !u.contains_free(v)? {
                failures.push(format!("line {ln}: not in U({r},{s})"));
            }
            if let Some(w) = v.support().find(|w| !allowed_word(*w)) {
                failures.push(format!("line {ln}: word {w} has a forbidden start"));
            }
        }
        match ListedBasis::new(r, s, vecs.iter().map(|(_, v)| v.clone()).collect()) {
            Ok(_) => {}
            Err(_) => failures.push("listed vectors are dependent".into()),
        }
        let dim = bold_u_by_intersection(cache, r, s)?.dim();
        if dim != vecs.len() {
            failures.push(format!("{} vectors listed, dimension {dim}", vecs.len()));
        }
        rep.push(CheckResult::from_failures(format!("basis ({r},{s})"), vecs.len(), failures));
    }
    let mut missing = Vec::new();
    let mut checked = 0;
    for (r, s) in USubspaceCache::bidegrees(window) {
        checked += 1;
        let dim = bold_u_by_intersection(cache, r, s)?.dim();
        if dim > 0 && !fixture.entries.contains_key(&(r, s)) {
            missing.push(format!("({r},{s}) of dimension {dim}"));
        }
    }
    rep.push(CheckResult::from_failures("every nonzero component listed", checked, missing));
    Ok(rep)
}

/// One displayed matrix.
#[derive(Clone, Debug)]
pub struct MatrixBlock {
    pub line: usize,
    pub gen: GeneratorId,
    pub domain: Vec<(usize, usize)>,
    pub codomain: Vec<(usize, usize)>,
    pub matrix: Matrix,
}

fn parse_sum(src: &str) -> Option<Vec<(usize, usize)>> {
    src.split('+')
        .map(|p| {
            let (r, s) = p.trim().split_once(',')?;
            Some((r.trim().parse().ok()?, s.trim().parse().ok()?))
        })
        .collect()
}

pub fn format_sum(parts: &[(usize, usize)]) -> String {
    parts.iter().map(|(r, s)| format!("{r},{s}")).collect::<Vec<_>>().join("+")
}

impl MatrixBlock {
    pub fn label(&self) -> String {
        format!("{}: {} -> {}", self.gen, format_sum(&self.domain), format_sum(&self.codomain))
    }

    pub fn parse_all(src: &str) -> Result<Vec<MatrixBlock>, RepError> {
        let ferr = |line: usize, reason: String| RepError::Fixture { file: "generator_matrices.txt".into(), line, reason };
        let mut out = Vec::new();
        type Pending = (usize, GeneratorId, Vec<(usize, usize)>, Vec<(usize, usize)>, Vec<Vec<RatFunc>>);
        let mut cur: Option<Pending> = None;
        let parse_row = |ln: usize, l: &str| -> Result<Vec<RatFunc>, RepError> {
            l.split('&').map(|t| t.trim().parse::<RatFunc>().map_err(|e| ferr(ln, format!("{e}")))).collect()
        };
        let finish = |c: Pending| {
            let (line, gen, domain, codomain, rows) = c;
            let cols = rows.first().map_or(0, Vec::len);
            if rows.iter().any(|r| r.len() != cols) {
                return Err(ferr(line, "ragged matrix".into()));
            }
            Ok(MatrixBlock { line, gen, domain, codomain, matrix: Matrix { rows: rows.len(), cols, entries: rows } })
        };
        for (ln, l) in content_lines(src) {
            if let Some((g, rest)) = l.split_once(':') {
                if let Some(c) = cur.take() {
                    out.push(finish(c)?);
                }
                let gen: GeneratorId = g.trim().parse()?;
                let (d, c) = rest.split_once("->").ok_or_else(|| ferr(ln, "expected domain -> codomain".into()))?;
                let domain = parse_sum(d).ok_or_else(|| ferr(ln, format!("bad sum {d:?}")))?;
                let codomain = parse_sum(c).ok_or_else(|| ferr(ln, format!("bad sum {c:?}")))?;
                cur = Some((ln, gen, domain, codomain, Vec::new()));
            } else if let Some(d) = l.strip_prefix("diag") {
                let c = cur.as_mut().ok_or_else(|| ferr(ln, "matrix before header".into()))?;
                let diag = parse_row(ln, d)?;
                c.4 = Matrix::diagonal(&diag).entries;
            } else {
                let c = cur.as_mut().ok_or_else(|| ferr(ln, "matrix before header".into()))?;
                c.4.push(parse_row(ln, l)?);
            }
        }
        if let Some(c) = cur.take() {
            out.push(finish(c)?);
        }
        Ok(out)
    }

    pub fn load() -> Result<Vec<MatrixBlock>, RepError> {
        Self::parse_all(&fixture_text("generator_matrices.txt")?)
    }
}

/// The matrix of `g` from a direct sum of listed bases to another.
pub fn generator_block(
    fixture: &BasisFixture,
    g: GeneratorId,
    domain: &[(usize, usize)],
    codomain: &[(usize, usize)],
) -> Result<Matrix, RepError> {
    let table = ActionTable::main();
    let dom: Vec<ListedBasis> = domain.iter().map(|&(r, s)| fixture.listed_basis(r, s)).collect::<Result<_, _>>()?;
    let cod: Vec<ListedBasis> =
        codomain.iter().map(|&(r, s)| fixture.listed_basis(r, s)).collect::<Result<_, _>>()?;
    let dref: Vec<&dyn CoordinateSystem> = dom.iter().map(|b| b as &dyn CoordinateSystem).collect();
    let cref: Vec<&dyn CoordinateSystem> = cod.iter().map(|b| b as &dyn CoordinateSystem).collect();
    Ok(graded_block(&dref, &cref, |v| act(table, g, v))?)
}

/// Every displayed matrix, recomputed on the listed bases.
pub fn verify_matrices(fixture: &BasisFixture, blocks: &[MatrixBlock]) -> Result<Report, RepError> {
    let mut rep = Report::new();
    for b in blocks {
        let name = b.label();
        let got = match generator_block(fixture, b.gen, &b.domain, &b.codomain) {
            Ok(m) => m,
            Err(e) => {
                rep.push(CheckResult::fail(name, e.to_string()));
                continue;
            }
        };
        if (got.rows, got.cols) != (b.matrix.rows, b.matrix.cols) {
            rep.push(CheckResult::fail(
                name,
                format!("shape {}x{}, expected {}x{}", got.rows, got.cols, b.matrix.rows, b.matrix.cols),
            ));
            continue;
        }
        let mut failures = Vec::new();
        for i in 0..got.rows {
            for j in 0..got.cols {
                if got.entries[i][j] != b.matrix.entries[i][j] {
                    failures.push(format!(
                        "entry ({},{}) is {}, expected {}",
                        i + 1,
                        j + 1,
                        got.entries[i][j].pretty(),
                        b.matrix.entries[i][j].pretty()
                    ));
                }
            }
        }
        rep.push(CheckResult::from_failures(name, got.rows * got.cols, failures));
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------

fn same_scaled(a: &(LaurentPoly, IntElement), b: &(LaurentPoly, IntElement)) -> bool {
    // a.1 / a.0 == b.1 / b.0
    let mut l = a.1.clone();
    l = l.scale(&b.0);
    let r = b.1.scale(&a.0);
    l == r
}

/// A variant action satisfies the presentation, and its symmetry carries
/// the main action to it: `phi(g . v) = g .' phi(v)`.
pub fn variant_action_check(cache: &USubspaceCache, row: u8, window: usize) -> Result<Report, RepError> {
    let table = ActionTable::row(row)?;
    let mut rep = verify_presentation(cache, window, table)?;
    let Some(phi) = table.intertwiner else {
        return Ok(rep);
    };
    let main = ActionTable::main();
    let vectors = u_vectors(cache, window)?;
    for g in GeneratorId::ALL {
        let mut failures = Vec::new();
        for (label, v) in &vectors {
            let (d0, i0) = main.act_scaled(g, v);
            let lhs = (d0, apply(phi, &i0));
            let rhs = table.act_scaled(g, &apply(phi, v));
            if !same_scaled(&lhs, &rhs) {
                failures.push(label.clone());
            }
        }
        rep.push(CheckResult::from_failures(
            format!("row {row}/{phi} intertwines {g}"),
            vectors.len(),
            failures,
        ));
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------

fn lowered(op: OperatorId, r: usize, s: usize, k: usize) -> Option<(usize, usize)> {
    match op {
        OperatorId::AstarL => r.checked_sub(k).map(|r| (r, s)),
        _ => s.checked_sub(k).map(|s| (r, s)),
    }
}

fn raised(op: OperatorId, r: usize, s: usize) -> (usize, usize) {
    match op {
        OperatorId::Aell => (r + 1, s),
        _ => (r, s + 1),
    }
}

/// Kernel of `v -> f(v)` on the span of `basis` (images of bidegree `deg`,
/// or identically zero when `deg` is `None`), as an echelon basis in `(r, s)`.
fn kernel_on(
    r: usize,
    s: usize,
    basis: &[IntElement],
    deg: Option<(usize, usize)>,
    f: impl Fn(&IntElement) -> IntElement,
) -> Result<EchelonBasis, RepError> {
    let Some((r2, s2)) = deg else {
        return Ok(EchelonBasis::new(r, s, basis.iter())?);
    };
    let images: Vec<IntElement> = basis.iter().map(f).collect();
    let ker = kernel_of_images(r2, s2, &images)?;
    let vecs: Vec<IntElement> = ker.iter().map(|c| combine(basis, c)).collect();
    Ok(EchelonBasis::new(r, s, vecs.iter())?)
}

/// For `(S, T) = (A*_L, A_l)` and `(B*_L, B_l)` on `U`: `S` maps each
/// component onto the lowered one, `T` is injective, and on each component
/// `ker S^(n+1)` is the direct sum of the eigenspaces of `ST` for the
/// eigenvalues `q^k [k+1]_q`, `k <= n`.
pub fn check_kernel_decomposition(cache: &USubspaceCache, window: usize) -> Result<Report, RepError> {
    let mut rep = Report::new();
    for (sname, sop, top) in [("A", OperatorId::AstarL, OperatorId::Aell), ("B", OperatorId::BstarL, OperatorId::Bell)] {
        let (mut surj, mut inj, mut dec) = (Vec::new(), Vec::new(), Vec::new());
        let (mut n_surj, mut n_inj, mut n_dec) = (0, 0, 0);
        for (r, s) in USubspaceCache::bidegrees(window) {
            let basis = cache.component(r, s)?.int_vectors();
            if let Some((r2, s2)) = lowered(sop, r, s, 1) {
                n_surj += 1;
                let target = cache.component(r2, s2)?;
                let imgs: Vec<IntElement> = basis.iter().map(|v| apply(sop, v)).collect();
                let in_target = imgs.iter().all(|v| target.contains(v).unwrap_or(false));
                let rk = rank(r2, s2, &imgs)?;
                if !in_target || rk != target.dim() {
                    surj.push(format!("({r},{s}) -> ({r2},{s2}): rank {rk}, target dim {}", target.dim()));
                }
            }
            if r + s < cache.cap() {
                n_inj += 1;
                let (r2, s2) = raised(top, r, s);
                let imgs: Vec<IntElement> = basis.iter().map(|v| apply(top, v)).collect();
                let rk = rank(r2, s2, &imgs)?;
                if rk != basis.len() {
                    inj.push(format!("({r},{s}): rank {rk}, dim {}", basis.len()));
                }
                // Eigenspaces of ST.
                let level = if sop == OperatorId::AstarL { r } else { s };
                let mut eig = Vec::new();
                for k in 0..=level {
                    let c = &LaurentPoly::q_pow(k as i32) * &qint(k as u32 + 1);
                    let st = |v: &IntElement| {
                        let mut w = apply(sop, &apply(top, v));
                        w.add_scaled(&-c.clone(), v);
                        w
                    };
                    eig.push(kernel_on(r, s, &basis, Some((r, s)), st)?);
                }
                for n in 0..=level {
                    n_dec += 1;
                    let deg = lowered(sop, r, s, n + 1);
                    let ker = kernel_on(r, s, &basis, deg, |v| {
                        let mut w = v.clone();
                        for _ in 0..=n {
                            w = apply(sop, &w);
                        }
                        w
                    })?;
                    let mut sum = EchelonBasis::empty(r, s);
                    let mut total = 0;
                    for e in &eig[..=n] {
                        sum = sum.sum(e);
                        total += e.dim();
                    }
                    if sum != ker || total != sum.dim() {
                        dec.push(format!(
                            "({r},{s}) n={n}: kernel dim {}, eigenspace sum dim {} (sizes add to {total})",
                            ker.dim(),
                            sum.dim()
                        ));
                    }
                }
                if eig.iter().map(EchelonBasis::dim).sum::<usize>() != basis.len() {
                    dec.push(format!("({r},{s}): eigenspaces do not fill the component"));
                }
            }
        }
        rep.push(CheckResult::from_failures(format!("{sname}: S surjective"), n_surj, surj));
        rep.push(CheckResult::from_failures(format!("{sname}: T injective"), n_inj, inj));
        rep.push(CheckResult::from_failures(format!("{sname}: kernel decomposition"), n_dec, dec));
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------

/// `F0^k (xx)` and `F1^k (y)` are nonzero for `k <= n`.
pub fn nonnilpotence_witness(n: usize) -> CheckResult {
    let table = ActionTable::main();
    let mut failures = Vec::new();
    for (g, start) in [(GeneratorId::F0, "xx"), (GeneratorId::F1, "y")] {
        let mut cur = IntElement::word(start.parse().expect("word"));
        for k in 1..=n {
            cur = table.act_scaled(g, &cur).1;
            if cur.is_zero() {
                failures.push(format!("{g}^{k} {start} = 0"));
                break;
            }
        }
    }
    CheckResult::from_failures("F0^k xx and F1^k y nonzero", 2 * n, failures)
}

/// Each of `E0, E1, F0, F1` kills every basis vector of each component of
/// the basic module after finitely many steps; reports the largest order.
pub fn nilpotence_on_bold_u(bold: &BoldUCache, max_steps: usize) -> CheckResult {
    let table = ActionTable::main();
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut orders = BTreeMap::new();
    for ((r, s), b) in &bold.spaces {
        for v in b.int_vectors() {
            for g in GeneratorId::EF {
                checked += 1;
                let mut cur = v.clone();
                let mut k = 0;
                while !cur.is_zero() && k <= max_steps {
                    cur = table.act_scaled(g, &cur).1;
                    k += 1;
                }
                if !cur.is_zero() {
                    failures.push(format!("{g} on ({r},{s}) survives {max_steps} steps"));
                }
                let o = orders.entry(g).or_insert(0);
                *o = (*o).max(k);
            }
        }
    }
    let mut res = CheckResult::from_failures("E/F nilpotent on the basic module", checked, failures);
    let summary: Vec<String> = orders.iter().map(|(g, k)| format!("{g}:{k}")).collect();
    res.details = format!("{}; largest orders {}", res.details, summary.join(" "));
    res
}

/// Every nonzero vector of the basic module reaches `1` under the
/// right-hand deletions.
pub fn reach_one_check(bold: &BoldUCache) -> CheckResult {
    let mut failures = Vec::new();
    let mut checked = 0;
    for ((r, s), b) in &bold.spaces {
        for v in b.int_vectors() {
            checked += 1;
            match reach_one(&v, Side::Right) {
                Ok(path) => {
                    let mut cur = v.clone();
                    for op in &path {
                        cur = apply(*op, &cur);
                    }
                    if cur.max_len() != 0 || cur.is_zero() {
                        failures.push(format!("({r},{s}): path does not end at a multiple of 1"));
                    }
                }
                Err(e) => failures.push(format!("({r},{s}): {e}")),
            }
        }
    }
    CheckResult::from_failures("right deletions reach 1", checked, failures)
}

/// Allowed words are `1`, `x` or start with `xy`; and the main `F0`, `F1`
/// keep the span of allowed words, on every allowed word up to `maxlen`.
pub fn bold_v_check(maxlen: usize) -> Report {
    let table = ActionTable::main();
    let mut rep = Report::new();
    let mut shape = Vec::new();
    let mut closure = Vec::new();
    let (mut n_shape, mut n_closure) = (0, 0);
    for n in 0..=maxlen {
        for r in 0..=n {
            for w in crate::freeword::words_of_bidegree(r, n - r) {
                n_shape += 1;
                let s = w.to_string();
                let expected = n == 0 || s == "x" || s.starts_with("xy");
                if allowed_word(w) != expected {
                    shape.push(s);
                }
                if !allowed_word(w) {
                    continue;
                }
                for g in [GeneratorId::F0, GeneratorId::F1] {
                    n_closure += 1;
                    let (_, img) = table.act_scaled(g, &IntElement::word(w));
                    let bad = img.support().find(|u| !allowed_word(*u));
                    if let Some(bad) = bad {
                        closure.push(format!("{g} {w} contains {bad}"));
                    }
                }
            }
        }
    }
    rep.push(CheckResult::from_failures("allowed words are 1, x or xy...", n_shape, shape));
    rep.push(CheckResult::from_failures("F0, F1 keep allowed words", n_closure, closure));
    rep
}

/// Coefficients of `v` as rational functions; helper for rendering.
pub fn as_free(v: &IntElement) -> FreeElement {
    v.to_ratfunc()
}
