//! Named linear maps on the free algebra and formal linear combinations of
//! their composites.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::freeword::{Coeff, Element, FreeElement, IntElement, Letter, Word};
use crate::qfield::{LaurentPoly, RatFunc, ScalarError};
use crate::qshuffle::shuffle;
use crate::report::CheckResult;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("unknown operator symbol {0:?}")]
    UnknownSymbol(String),
    #[error("relation {0:?} has no '='")]
    NotARelation(String),
    #[error("bad power in {0:?}")]
    BadPower(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OperatorId {
    X,
    Xinv,
    Y,
    Yinv,
    K,
    Kinv,
    AstarL,
    BstarL,
    AstarR,
    BstarR,
    Aell,
    Bell,
    Ar,
    Br,
    Sigma,
    Dagger,
    Tau,
}

impl OperatorId {
    pub const ALL: [OperatorId; 17] = [
        OperatorId::X,
        OperatorId::Xinv,
        OperatorId::Y,
        OperatorId::Yinv,
        OperatorId::K,
        OperatorId::Kinv,
        OperatorId::AstarL,
        OperatorId::BstarL,
        OperatorId::AstarR,
        OperatorId::BstarR,
        OperatorId::Aell,
        OperatorId::Bell,
        OperatorId::Ar,
        OperatorId::Br,
        OperatorId::Sigma,
        OperatorId::Dagger,
        OperatorId::Tau,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OperatorId::X => "X",
            OperatorId::Xinv => "Xinv",
            OperatorId::Y => "Y",
            OperatorId::Yinv => "Yinv",
            OperatorId::K => "K",
            OperatorId::Kinv => "Kinv",
            OperatorId::AstarL => "AstarL",
            OperatorId::BstarL => "BstarL",
            OperatorId::AstarR => "AstarR",
            OperatorId::BstarR => "BstarR",
            OperatorId::Aell => "Aell",
            OperatorId::Bell => "Bell",
            OperatorId::Ar => "Ar",
            OperatorId::Br => "Br",
            OperatorId::Sigma => "Sigma",
            OperatorId::Dagger => "Dagger",
            OperatorId::Tau => "Tau",
        }
    }
}

impl fmt::Display for OperatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorId {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, ExprError> {
        OperatorId::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| ExprError::UnknownSymbol(s.to_string()))
    }
}

fn delete_first(w: Word, l: Letter) -> Option<Word> {
    (w.first() == Some(l)).then(|| w.tail())
}

fn delete_last(w: Word, l: Letter) -> Option<Word> {
    (w.last() == Some(l)).then(|| w.init())
}

fn starred<C: Coeff>(e: &Element<C>, f: impl Fn(Word) -> Option<Word>) -> Element<C> {
    let mut out = Element::zero();
    for (w, c) in e.iter() {
        if let Some(v) = f(*w) {
            out.add_term_ref(v, c);
        }
    }
    out
}

fn diagonal<C: Coeff>(e: &Element<C>, exp: impl Fn(Word) -> i32) -> Element<C> {
    Element::from_terms(e.iter().map(|(w, c)| (*w, c.mul_q_pow(exp(*w)))))
}

fn letter_elem<C: Coeff>(l: Letter) -> Element<C> {
    Element::word(Word::letter(l))
}

/// Applies a named map.
pub fn apply<C: Coeff>(op: OperatorId, e: &Element<C>) -> Element<C> {
    use OperatorId::*;
    match op {
        X => diagonal(e, |w| w.x_count() as i32),
        Xinv => diagonal(e, |w| -(w.x_count() as i32)),
        Y => diagonal(e, |w| w.y_count() as i32),
        Yinv => diagonal(e, |w| -(w.y_count() as i32)),
        K => diagonal(e, |w| 2 * w.x_count() as i32 - 2 * w.y_count() as i32),
        Kinv => diagonal(e, |w| 2 * w.y_count() as i32 - 2 * w.x_count() as i32),
        AstarL => starred(e, |w| delete_first(w, Letter::X)),
        BstarL => starred(e, |w| delete_first(w, Letter::Y)),
        AstarR => starred(e, |w| delete_last(w, Letter::X)),
        BstarR => starred(e, |w| delete_last(w, Letter::Y)),
        Aell => shuffle(&letter_elem(Letter::X), e),
        Bell => shuffle(&letter_elem(Letter::Y), e),
        Ar => shuffle(e, &letter_elem(Letter::X)),
        Br => shuffle(e, &letter_elem(Letter::Y)),
        Sigma => e.sigma(),
        Dagger => e.dagger(),
        Tau => e.tau(),
    }
}

/// Applies a composite `ops[0] ops[1] ... ops[n-1]`, rightmost first.
pub fn apply_product<C: Coeff>(ops: &[OperatorId], e: &Element<C>) -> Element<C> {
    let mut v = e.clone();
    for op in ops.iter().rev() {
        if v.is_zero() {
            break;
        }
        v = apply(*op, &v);
    }
    v
}

// ---------------------------------------------------------------------------

/// A symbol that can appear in a [`LinExpr`].
pub trait Symbol: Clone + PartialEq + fmt::Display {
    fn parse_symbol(s: &str) -> Option<Self>;
}

impl Symbol for OperatorId {
    fn parse_symbol(s: &str) -> Option<Self> {
        s.parse().ok()
    }
}

/// A linear combination of composites of symbols. A product `[a, b, c]`
/// means `a b c`, so `c` acts first; the empty product is the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct LinExpr<S> {
    pub terms: Vec<(RatFunc, Vec<S>)>,
}

impl<S: Symbol> LinExpr<S> {
    pub fn zero() -> Self {
        LinExpr { terms: Vec::new() }
    }

    pub fn identity() -> Self {
        LinExpr { terms: vec![(RatFunc::one(), Vec::new())] }
    }

    pub fn symbol(s: S) -> Self {
        LinExpr { terms: vec![(RatFunc::one(), vec![s])] }
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        LinExpr { terms: self.terms.iter().map(|(d, p)| (d * c, p.clone())).collect() }.simplified()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        LinExpr { terms }.simplified()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&RatFunc::from(-1)))
    }

    /// Composition `self other`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut terms = Vec::new();
        for (a, pa) in &self.terms {
            for (b, pb) in &other.terms {
                let mut p = pa.clone();
                p.extend(pb.iter().cloned());
                terms.push((a * b, p));
            }
        }
        LinExpr { terms }.simplified()
    }

    /// `[a, b]_c = c a b - c^-1 b a`.
    pub fn q_commutator(a: &Self, b: &Self, c: &RatFunc) -> Self {
        let cinv = c.inv().expect("nonzero parameter");
        a.compose(b).scale(c).sub(&b.compose(a).scale(&cinv))
    }

    /// Merges equal products and drops zero terms, keeping first-appearance order.
    pub fn simplified(self) -> Self {
        let mut out: Vec<(RatFunc, Vec<S>)> = Vec::new();
        for (c, p) in self.terms {
            if let Some(slot) = out.iter_mut().find(|(_, q)| *q == p) {
                slot.0 += &c;
            } else {
                out.push((c, p));
            }
        }
        out.retain(|(c, _)| !c.is_zero());
        LinExpr { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest number of factors in a term.
    pub fn degree(&self) -> usize {
        self.terms.iter().map(|(_, p)| p.len()).max().unwrap_or(0)
    }
}

impl<S: Symbol> fmt::Display for LinExpr<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, p)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let prod = if p.is_empty() {
                "I".to_string()
            } else {
                p.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
            };
            if c.is_one() {
                write!(f, "{prod}")?;
            } else {
                write!(f, "({}) {prod}", c.pretty())?;
            }
        }
        Ok(())
    }
}

fn split_signed_terms(s: &str) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    let mut prev: Option<char> = None;
    for c in s.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if depth == 0 && (c == '+' || c == '-') && prev != Some('^') {
            if !cur.trim().is_empty() {
                out.push((neg, std::mem::take(&mut cur)));
            }
            cur.clear();
            neg = c == '-';
            prev = Some(c);
            continue;
        }
        cur.push(c);
        if !c.is_whitespace() {
            prev = Some(c);
        }
    }
    if !cur.trim().is_empty() {
        out.push((neg, cur));
    }
    out
}

/// Parses `Name` or `Name^k` into a run of symbols.
fn parse_factor<S: Symbol>(tok: &str) -> Result<Option<Vec<S>>, ExprError> {
    let (base, pow) = match tok.split_once('^') {
        Some((b, p)) => (b, Some(p)),
        None => (tok, None),
    };
    if base == "I" && pow.is_none() {
        return Ok(Some(Vec::new()));
    }
    let Some(sym) = S::parse_symbol(base) else {
        return Ok(None);
    };
    let k = match pow {
        None => 1,
        Some(p) => p.parse::<usize>().map_err(|_| ExprError::BadPower(tok.to_string()))?,
    };
    Ok(Some(vec![sym; k]))
}

impl<S: Symbol> FromStr for LinExpr<S> {
    type Err = ExprError;

    /// Terms are `coefficient Sym1 Sym2^k ...` joined by `+`/`-`. The
    /// coefficient uses the scalar grammar and may be omitted; `I` is the
    /// identity and a lone `0` is the zero map.
    fn from_str(s: &str) -> Result<Self, ExprError> {
        let mut terms = Vec::new();
        for (neg, chunk) in split_signed_terms(s) {
            let toks: Vec<&str> = chunk.split_whitespace().collect();
            let mut prod: Vec<S> = Vec::new();
            let mut cut = toks.len();
            while cut > 0 {
                match parse_factor::<S>(toks[cut - 1])? {
                    Some(mut f) => {
                        f.extend(prod);
                        prod = f;
                        cut -= 1;
                    }
                    None => break,
                }
            }
            let coeff_src = toks[..cut].join(" ");
            let coeff_src = coeff_src.trim().trim_end_matches('*').trim();
            if cut == toks.len() {
                if coeff_src == "0" {
                    continue;
                }
                let last = toks.last().copied().unwrap_or("");
                if last.chars().next().is_some_and(|c| c.is_ascii_uppercase()) {
                    return Err(ExprError::UnknownSymbol(last.to_string()));
                }
            }
            let mut c: RatFunc = if coeff_src.is_empty() { RatFunc::one() } else { coeff_src.parse()? };
            if neg {
                c = -c;
            }
            terms.push((c, prod));
        }
        Ok(LinExpr { terms }.simplified())
    }
}

/// `lhs = rhs`, with the source line kept for reporting.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation<S> {
    pub text: String,
    pub lhs: LinExpr<S>,
    pub rhs: LinExpr<S>,
}

impl<S: Symbol> Relation<S> {
    /// `lhs - rhs`, which must act as zero.
    pub fn difference(&self) -> LinExpr<S> {
        self.lhs.sub(&self.rhs)
    }
}

impl<S: Symbol> FromStr for Relation<S> {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, ExprError> {
        let (l, r) = s.split_once('=').ok_or_else(|| ExprError::NotARelation(s.to_string()))?;
        Ok(Relation { text: s.trim().to_string(), lhs: l.parse()?, rhs: r.parse()? })
    }
}

/// Parses one relation per line; blank lines and `#` comments are skipped.
pub fn parse_relations<S: Symbol>(src: &str) -> Result<Vec<Relation<S>>, ExprError> {
    src.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::parse)
        .collect()
}

// ---------------------------------------------------------------------------

/// How symbols act on elements with Laurent coefficients. An action returns
/// `(c, w)` meaning the image is `c * w`, so that rational scalars stay out of
/// the element arithmetic.
pub trait Action<S> {
    fn act(&self, s: &S, v: &IntElement) -> (RatFunc, IntElement);
}

/// The named maps acting on the free algebra.
#[derive(Clone, Copy, Debug, Default)]
pub struct NamedMaps;

impl Action<OperatorId> for NamedMaps {
    fn act(&self, s: &OperatorId, v: &IntElement) -> (RatFunc, IntElement) {
        (RatFunc::one(), apply(*s, v))
    }
}

/// `num / den` with `num` an element with Laurent coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Scaled {
    pub den: LaurentPoly,
    pub num: IntElement,
}

impl Scaled {
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn to_free(&self) -> FreeElement {
        let inv = RatFunc::new(LaurentPoly::one(), self.den.clone()).expect("nonzero denominator");
        self.num.to_ratfunc().scale(&inv)
    }
}

fn lcm(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let g = a.gcd(b);
    (a * b).div_exact(&g)
}

/// Evaluates a product of symbols on `v`, returning the accumulated scalar.
pub fn eval_product<S, A: Action<S>>(action: &A, prod: &[S], v: &IntElement) -> (RatFunc, IntElement) {
    let mut scalar = RatFunc::one();
    let mut cur = v.clone();
    for s in prod.iter().rev() {
        if cur.is_zero() {
            return (RatFunc::zero(), cur);
        }
        let (c, next) = action.act(s, &cur);
        scalar = &scalar * &c;
        cur = next;
    }
    (scalar, cur)
}

/// Evaluates an expression on `v` exactly.
pub fn eval<S, A: Action<S>>(action: &A, expr: &LinExpr<S>, v: &IntElement) -> Scaled {
    let parts: Vec<(RatFunc, IntElement)> = expr
        .terms
        .iter()
        .map(|(c, p)| {
            let (s, img) = eval_product(action, p, v);
            (c * &s, img)
        })
        .filter(|(c, img)| !c.is_zero() && !img.is_zero())
        .collect();
    let mut den = LaurentPoly::one();
    for (c, _) in &parts {
        if !c.denom().is_one() {
            den = lcm(&den, c.denom());
        }
    }
    let mut num = IntElement::zero();
    for (c, img) in &parts {
        let factor = c.numer() * &den.div_exact(c.denom());
        num.add_scaled(&factor, img);
    }
    Scaled { den, num }
}

/// Checks a relation on each labelled vector.
pub fn check_relation<S: Symbol, A: Action<S>>(
    action: &A,
    rel: &Relation<S>,
    vectors: &[(String, IntElement)],
) -> CheckResult {
    let diff = rel.difference();
    let mut failures = Vec::new();
    for (label, v) in vectors {
        let r = eval(action, &diff, v);
        if !r.is_zero() {
            failures.push(format!("on {label}: lhs - rhs = {}", r.to_free()));
        }
    }
    CheckResult::from_failures(rel.text.clone(), vectors.len(), failures)
}

/// All words of length at most `maxlen`, labelled by themselves.
pub fn word_vectors(maxlen: usize) -> Vec<(String, IntElement)> {
    let mut out = Vec::new();
    for n in 0..=maxlen {
        for r in 0..=n {
            for w in crate::freeword::words_of_bidegree(r, n - r) {
                out.push((w.to_string(), IntElement::word(w)));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------

pub const GLOBAL_RELATIONS: &str = include_str!("../fixtures/relations_global.txt");
pub const RELATIONS_ON_U: &str = include_str!("../fixtures/relations_on_u.txt");
pub const GRADING_RELATIONS: &str = include_str!("../fixtures/relations_grading.txt");
pub const INTERTWINER_RELATIONS: &str = include_str!("../fixtures/intertwiners.txt");

fn check_fixture_on_words(src: &str, maxlen: usize) -> Vec<CheckResult> {
    let rels: Vec<Relation<OperatorId>> = parse_relations(src).expect("bundled relation fixture parses");
    let vectors = word_vectors(maxlen);
    rels.iter().map(|r| check_relation(&NamedMaps, r, &vectors)).collect()
}

/// Every relation that holds on the whole free algebra, on all words of
/// length at most `maxlen`.
pub fn check_operator_relations(maxlen: usize) -> Vec<CheckResult> {
    check_fixture_on_words(GLOBAL_RELATIONS, maxlen)
}

/// Commutation of the grading maps with the deletion and multiplication maps.
pub fn check_grading_relations(maxlen: usize) -> Vec<CheckResult> {
    check_fixture_on_words(GRADING_RELATIONS, maxlen)
}

/// The commuting squares between the symmetries and the named maps.
pub fn check_intertwiners(maxlen: usize) -> Vec<CheckResult> {
    check_fixture_on_words(INTERTWINER_RELATIONS, maxlen)
}

/// The relations that are only claimed on the shuffle subalgebra, checked on
/// the given vectors.
pub fn check_relations_on(vectors: &[(String, IntElement)]) -> Vec<CheckResult> {
    let rels: Vec<Relation<OperatorId>> = parse_relations(RELATIONS_ON_U).expect("bundled relation fixture parses");
    rels.iter().map(|r| check_relation(&NamedMaps, r, vectors)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReachError {
    #[error("the zero vector cannot reach 1")]
    Zero,
}

/// A sequence of deletion maps carrying `e` to a nonzero multiple of `1`.
///
/// At each step the first longest word of the support is shortened at the
/// chosen end. Distinct words sharing that end letter have distinct images,
/// so the longest word survives and the element never becomes zero.
pub fn reach_one<C: Coeff>(e: &Element<C>, side: Side) -> Result<Vec<OperatorId>, ReachError> {
    if e.is_zero() {
        return Err(ReachError::Zero);
    }
    let mut cur = e.clone();
    let mut steps = Vec::new();
    loop {
        let n = cur.max_len();
        if n == 0 {
            return Ok(steps);
        }
        let w = cur.support().find(|w| w.len() == n).expect("nonempty support");
        let op = match (side, side_letter(w, side)) {
            (Side::Left, Letter::X) => OperatorId::AstarL,
            (Side::Left, Letter::Y) => OperatorId::BstarL,
            (Side::Right, Letter::X) => OperatorId::AstarR,
            (Side::Right, Letter::Y) => OperatorId::BstarR,
        };
        cur = apply(op, &cur);
        debug_assert!(!cur.is_zero());
        steps.push(op);
    }
}

fn side_letter(w: Word, side: Side) -> Letter {
    match side {
        Side::Left => w.first().unwrap(),
        Side::Right => w.last().unwrap(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use OperatorId::*;

    fn e(s: &str) -> FreeElement {
        s.parse().unwrap()
    }

    fn ap(op: OperatorId, s: &str) -> FreeElement {
        apply(op, &e(s))
    }

    #[test]
    fn grading_maps() {
        assert_eq!(ap(K, "xxx"), e("q^6*xxx"));
        assert_eq!(ap(K, "xxyy"), e("xxyy"));
        assert_eq!(ap(X, "xyxxyy"), e("q^3*xyxxyy"));
        assert_eq!(ap(Y, "xyxxyy"), e("q^3*xyxxyy"));
        assert_eq!(ap(X, "xxx"), e("q^3*xxx"));
        assert_eq!(ap(Y, "xxx"), e("xxx"));
        assert_eq!(ap(Kinv, "xxx"), e("q^-6*xxx"));
    }

    #[test]
    fn deletion_table() {
        let cols = ["x", "y", "xx", "xy", "yx", "yy"];
        let rows: [(OperatorId, [&str; 6]); 4] = [
            (AstarL, ["1", "0", "x", "y", "0", "0"]),
            (BstarL, ["0", "1", "0", "0", "x", "y"]),
            (AstarR, ["1", "0", "x", "0", "y", "0"]),
            (BstarR, ["0", "1", "0", "x", "0", "y"]),
        ];
        for (op, expect) in rows {
            for (c, x) in cols.iter().zip(expect) {
                assert_eq!(ap(op, c), e(x), "{op} {c}");
            }
            assert!(ap(op, "1").is_zero());
        }
    }

    #[test]
    fn multiplication_table() {
        let cols = ["1", "x", "y", "xy"];
        let rows: [(OperatorId, [&str; 4]); 4] = [
            (Aell, ["x", "q*[2]_q*xx", "xy + q^-2*yx", "q*[2]_q*xxy + xyx"]),
            (Bell, ["y", "q^-2*xy + yx", "q*[2]_q*yy", "q^-1*[2]_q*xyy + yxy"]),
            (Ar, ["x", "q*[2]_q*xx", "q^-2*xy + yx", "q^-1*[2]_q*xxy + xyx"]),
            (Br, ["y", "xy + q^-2*yx", "q*[2]_q*yy", "q*[2]_q*xyy + yxy"]),
        ];
        for (op, expect) in rows {
            for (c, x) in cols.iter().zip(expect) {
                assert_eq!(ap(op, c), e(x), "{op} {c}");
            }
        }
    }

    #[test]
    fn relation_parsing() {
        let r: Relation<OperatorId> = "AstarL Aell - q^2 Aell AstarL = I".parse().unwrap();
        assert_eq!(r.lhs.terms.len(), 2);
        assert_eq!(r.rhs, LinExpr::identity());
        let s: Relation<OperatorId> =
            "AstarL^3 BstarL - [3]_q AstarL^2 BstarL AstarL + [3]_q AstarL BstarL AstarL^2 - BstarL AstarL^3 = 0"
                .parse()
                .unwrap();
        assert_eq!(s.lhs.degree(), 4);
        assert!(s.rhs.is_zero());
        let t: LinExpr<OperatorId> = "(q - q^-1)^-1 K - (q - q^-1)^-1 Kinv".parse().unwrap();
        assert_eq!(t.terms.len(), 2);
        assert!("Foo = 0".parse::<Relation<OperatorId>>().is_err());
        assert!("AstarL".parse::<Relation<OperatorId>>().is_err());
    }

    #[test]
    fn weyl_relation_on_one_and_xy() {
        let r: Relation<OperatorId> = "AstarL Aell - q^2 Aell AstarL = I".parse().unwrap();
        let lhs = eval(&NamedMaps, &r.lhs, &IntElement::one());
        assert_eq!(lhs.to_free(), e("1"));
        let k: Relation<OperatorId> = "AstarL Ar - Ar AstarL = K".parse().unwrap();
        let xy = IntElement::word("xy".parse().unwrap());
        assert_eq!(eval(&NamedMaps, &k.lhs, &xy).to_free(), e("xy"));
    }

    #[test]
    fn fixture_relations_hold_on_short_words() {
        for r in check_operator_relations(5)
            .into_iter()
            .chain(check_grading_relations(5))
            .chain(check_intertwiners(5))
        {
            assert_eq!(r.status, crate::report::Status::Pass, "{}: {}", r.name, r.details);
        }
    }

    #[test]
    fn fixture_counts() {
        assert_eq!(parse_relations::<OperatorId>(GLOBAL_RELATIONS).unwrap().len(), 36);
        assert_eq!(parse_relations::<OperatorId>(RELATIONS_ON_U).unwrap().len(), 4);
        assert_eq!(parse_relations::<OperatorId>(GRADING_RELATIONS).unwrap().len(), 16);
        assert_eq!(parse_relations::<OperatorId>(INTERTWINER_RELATIONS).unwrap().len(), 42);
    }

    #[test]
    fn starred_serre_fails_off_the_subalgebra() {
        // Diagnostic: on the word yx the first starred relation need not vanish.
        let rels: Vec<Relation<OperatorId>> = parse_relations(RELATIONS_ON_U).unwrap();
        let v = IntElement::word("yxxx".parse().unwrap());
        let r = eval(&NamedMaps, &rels[0].difference(), &v);
        assert!(!r.is_zero());
    }

    #[test]
    fn reach_one_examples() {
        assert_eq!(reach_one(&e("xy"), Side::Left).unwrap(), vec![AstarL, BstarL]);
        assert_eq!(reach_one(&e("xy + q^-2*yx"), Side::Right).unwrap(), vec![BstarR, AstarR]);
        assert!(reach_one(&e("1"), Side::Left).unwrap().is_empty());
        assert_eq!(reach_one(&FreeElement::zero(), Side::Left), Err(ReachError::Zero));
    }

    #[test]
    fn serre_nested_form_matches_expanded() {
        let a = LinExpr::symbol(Aell);
        let b = LinExpr::symbol(Bell);
        let q = RatFunc::q_pow(1);
        let inner = LinExpr::q_commutator(&a, &b, &q);
        let mid = LinExpr::q_commutator(&a, &inner, &RatFunc::q_pow(-1));
        let outer = LinExpr::q_commutator(&a, &mid, &RatFunc::one());
        let expanded: LinExpr<OperatorId> =
            "Aell^3 Bell - [3]_q Aell^2 Bell Aell + [3]_q Aell Bell Aell^2 - Bell Aell^3".parse().unwrap();
        assert!(outer.sub(&expanded).is_zero(), "{outer}");
    }
}
