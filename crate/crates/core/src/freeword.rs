//! Words in the letters `x`, `y` and finite linear combinations of them.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{AddAssign, Neg, SubAssign};

use thiserror::Error;

use crate::qfield::{LaurentPoly, RatFunc, ScalarError};

/// Longest word a [`Word`] can hold.
pub const MAX_WORD_LEN: usize = 63;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("invalid letter {0:?} (expected x or y)")]
    BadLetter(char),
    #[error("word longer than {MAX_WORD_LEN} letters")]
    TooLong,
    #[error("the zero element has no bidegree")]
    ZeroElement,
    #[error("cannot parse element {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    pub fn swap(self) -> Letter {
        match self {
            Letter::X => Letter::Y,
            Letter::Y => Letter::X,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::X => 'x',
            Letter::Y => 'y',
        }
    }

    fn bit(self) -> u64 {
        match self {
            Letter::X => 0,
            Letter::Y => 1,
        }
    }

    fn from_bit(b: u64) -> Letter {
        if b & 1 == 0 {
            Letter::X
        } else {
            Letter::Y
        }
    }
}

/// A word over `{x, y}`, packed one bit per letter (`x = 0`, `y = 1`) with the
/// first letter in the most significant position.
///
/// The derived order compares length first and then the bits, which is
/// lexicographic order with `x < y` among words of equal length.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    len: u8,
    bits: u64,
}

impl Word {
    pub const EMPTY: Word = Word { len: 0, bits: 0 };

    pub fn letter(l: Letter) -> Word {
        Word { len: 1, bits: l.bit() }
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut w = Word::EMPTY;
        for l in letters {
            w = w.push_back(l);
        }
        w
    }

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    /// Letter at position `i` (0-based from the left).
    pub fn at(self, i: usize) -> Letter {
        debug_assert!(i < self.len());
        Letter::from_bit(self.bits >> (self.len() - 1 - i))
    }

    pub fn first(self) -> Option<Letter> {
        (!self.is_empty()).then(|| self.at(0))
    }

    pub fn last(self) -> Option<Letter> {
        (!self.is_empty()).then(|| Letter::from_bit(self.bits))
    }

    pub fn letters(self) -> impl DoubleEndedIterator<Item = Letter> + ExactSizeIterator {
        (0..self.len()).map(move |i| self.at(i))
    }

    pub fn push_back(self, l: Letter) -> Word {
        assert!(self.len() < MAX_WORD_LEN, "word too long");
        Word { len: self.len + 1, bits: (self.bits << 1) | l.bit() }
    }

    pub fn push_front(self, l: Letter) -> Word {
        assert!(self.len() < MAX_WORD_LEN, "word too long");
        Word { len: self.len + 1, bits: (l.bit() << self.len) | self.bits }
    }

    /// The word with its first letter removed.
    pub fn tail(self) -> Word {
        assert!(!self.is_empty());
        let len = self.len - 1;
        Word { len, bits: self.bits & mask(len) }
    }

    /// The word with its last letter removed.
    pub fn init(self) -> Word {
        assert!(!self.is_empty());
        Word { len: self.len - 1, bits: self.bits >> 1 }
    }

    pub fn concat(self, other: Word) -> Word {
        assert!(self.len() + other.len() <= MAX_WORD_LEN, "word too long");
        Word { len: self.len + other.len, bits: (self.bits << other.len) | other.bits }
    }

    /// Prefix of length `n`.
    pub fn prefix(self, n: usize) -> Word {
        assert!(n <= self.len());
        Word { len: n as u8, bits: self.bits >> (self.len() - n) }
    }

    /// Suffix starting at position `n`.
    pub fn suffix_from(self, n: usize) -> Word {
        assert!(n <= self.len());
        let len = self.len - n as u8;
        Word { len, bits: self.bits & mask(len) }
    }

    pub fn starts_with(self, p: Word) -> bool {
        p.len() <= self.len() && self.prefix(p.len()) == p
    }

    /// Number of `y` letters.
    pub fn y_count(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn x_count(self) -> usize {
        self.len() - self.y_count()
    }

    /// `(number of x, number of y)`.
    pub fn bidegree(self) -> (usize, usize) {
        (self.x_count(), self.y_count())
    }

    /// Swaps `x` and `y` letterwise.
    pub fn sigma(self) -> Word {
        Word { len: self.len, bits: !self.bits & mask(self.len) }
    }

    /// Reverses the word.
    pub fn dagger(self) -> Word {
        let rev = self.bits.reverse_bits();
        Word { len: self.len, bits: if self.len == 0 { 0 } else { rev >> (64 - self.len as u32) } }
    }

    /// Reverses and swaps.
    pub fn tau(self) -> Word {
        self.sigma().dagger()
    }
}

fn mask(len: u8) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for l in self.letters() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Word, WordError> {
        let s = s.trim();
        if s == "1" {
            return Ok(Word::EMPTY);
        }
        if s.len() > MAX_WORD_LEN {
            return Err(WordError::TooLong);
        }
        let mut w = Word::EMPTY;
        for c in s.chars() {
            w = w.push_back(match c {
                'x' => Letter::X,
                'y' => Letter::Y,
                other => return Err(WordError::BadLetter(other)),
            });
        }
        Ok(w)
    }
}

/// All words with `r` x's and `s` y's, in canonical order.
pub fn words_of_bidegree(r: usize, s: usize) -> Vec<Word> {
    let n = r + s;
    assert!(n <= MAX_WORD_LEN);
    let mut out = Vec::with_capacity(binomial(n, r) as usize);
    // Enumerate y-position subsets as bit patterns in increasing numeric order.
    if s == 0 {
        out.push(Word { len: n as u8, bits: 0 });
        return out;
    }
    let mut v: u64 = (1u64 << s) - 1;
    let limit = 1u64 << n;
    while v < limit {
        out.push(Word { len: n as u8, bits: v });
        // Next integer with the same popcount.
        let t = v | (v - 1);
        let w = (t + 1) | (((!t & (t + 1)) - 1) >> (v.trailing_zeros() + 1));
        v = w;
    }
    out
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Position of `w` in [`words_of_bidegree`] for its own bidegree.
pub fn word_rank(w: Word) -> usize {
    // Count words of the same bidegree that are smaller: scan from the left;
    // whenever w has y at a position, all words with x there (and the same
    // prefix) are smaller.
    let mut rank = 0u64;
    let (mut xs, mut ys) = w.bidegree();
    for l in w.letters() {
        match l {
            Letter::X => xs -= 1,
            Letter::Y => {
                if xs > 0 {
                    rank += binomial(xs - 1 + ys, xs - 1);
                }
                ys -= 1;
            }
        }
    }
    rank as usize
}

// ---------------------------------------------------------------------------

/// Coefficient rings used for linear combinations of words.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, rhs: &Self);
    fn sub_assign_ref(&mut self, rhs: &Self);
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn mul_q_pow(&self, k: i32) -> Self;
    fn from_laurent(p: &LaurentPoly) -> Self;
    fn to_ratfunc(&self) -> RatFunc;
}

impl Coeff for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn one() -> Self {
        LaurentPoly::one()
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn sub_assign_ref(&mut self, rhs: &Self) {
        *self -= rhs;
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn mul_q_pow(&self, k: i32) -> Self {
        self.shift(k)
    }
    fn from_laurent(p: &LaurentPoly) -> Self {
        p.clone()
    }
    fn to_ratfunc(&self) -> RatFunc {
        self.clone().into()
    }
}

impl Coeff for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn sub_assign_ref(&mut self, rhs: &Self) {
        *self -= rhs;
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn mul_q_pow(&self, k: i32) -> Self {
        RatFunc::mul_q_pow(self, k)
    }
    fn from_laurent(p: &LaurentPoly) -> Self {
        p.clone().into()
    }
    fn to_ratfunc(&self) -> RatFunc {
        self.clone()
    }
}

/// A finite linear combination of words with no zero coefficients stored.
#[derive(Clone, PartialEq, Debug)]
pub struct Element<C: Coeff> {
    terms: BTreeMap<Word, C>,
}

/// An element of the free algebra with coefficients in `Q(q)`.
pub type FreeElement = Element<RatFunc>;
/// An element with coefficients in `Z[q, q^-1]`.
pub type IntElement = Element<LaurentPoly>;

/// Result of [`Element::bidegree`] on a nonzero element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bidegree {
    Homogeneous(usize, usize),
    Inhomogeneous,
}

impl<C: Coeff> Default for Element<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> Element<C> {
    pub fn zero() -> Self {
        Element { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::word(Word::EMPTY)
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, C::one())
    }

    pub fn term(w: Word, c: C) -> Self {
        let mut e = Self::zero();
        e.add_term(w, c);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, C)>>(it: I) -> Self {
        let mut e = Self::zero();
        for (w, c) in it {
            e.add_term(w, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical word order.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&Word, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Word, C)> {
        self.terms.into_iter()
    }

    pub fn support(&self) -> impl Iterator<Item = Word> + '_ {
        self.terms.keys().copied()
    }

    pub fn coeff(&self, w: &Word) -> C {
        self.terms.get(w).cloned().unwrap_or_else(C::zero)
    }

    pub fn get(&self, w: &Word) -> Option<&C> {
        self.terms.get(w)
    }

    pub fn add_term(&mut self, w: Word, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign_ref(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_term_ref(&mut self, w: Word, c: &C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(slot) => {
                slot.add_assign_ref(c);
                if slot.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &C, other: &Self) {
        if c.is_zero() {
            return;
        }
        for (w, d) in other.iter() {
            self.add_term(*w, c.mul_ref(d));
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Element { terms: self.terms.iter().map(|(w, d)| (*w, d.mul_ref(c))).filter(|(_, d)| !d.is_zero()).collect() }
    }

    pub fn mul_q_pow(&self, k: i32) -> Self {
        Element { terms: self.terms.iter().map(|(w, d)| (*w, d.mul_q_pow(k))).collect() }
    }

    /// Applies a word-to-word map and sums the results.
    pub fn map_words(&self, mut f: impl FnMut(Word) -> Word) -> Self {
        let mut out = Self::zero();
        for (w, c) in self.iter() {
            out.add_term(f(*w), c.clone());
        }
        out
    }

    /// Extends a map on words linearly.
    pub fn linear_extend(&self, mut f: impl FnMut(Word) -> Self) -> Self {
        let mut out = Self::zero();
        for (w, c) in self.iter() {
            out.add_scaled(c, &f(*w));
        }
        out
    }

    /// Concatenation product, extended bilinearly.
    pub fn concat_mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in self.iter() {
            for (b, cb) in other.iter() {
                out.add_term(a.concat(*b), ca.mul_ref(cb));
            }
        }
        out
    }

    /// Common bidegree of the support. Errors on the zero element.
    pub fn bidegree(&self) -> Result<Bidegree, WordError> {
        let mut it = self.support();
        let first = it.next().ok_or(WordError::ZeroElement)?.bidegree();
        if it.all(|w| w.bidegree() == first) {
            Ok(Bidegree::Homogeneous(first.0, first.1))
        } else {
            Ok(Bidegree::Inhomogeneous)
        }
    }

    /// Component of bidegree `(r, s)`.
    pub fn homogeneous_part(&self, r: usize, s: usize) -> Self {
        Element { terms: self.terms.iter().filter(|(w, _)| w.bidegree() == (r, s)).map(|(w, c)| (*w, c.clone())).collect() }
    }

    pub fn sigma(&self) -> Self {
        self.map_words(Word::sigma)
    }

    pub fn dagger(&self) -> Self {
        self.map_words(Word::dagger)
    }

    pub fn tau(&self) -> Self {
        self.map_words(Word::tau)
    }

    pub fn to_ratfunc(&self) -> FreeElement {
        Element { terms: self.terms.iter().map(|(w, c)| (*w, c.to_ratfunc())).collect() }
    }

    /// Longest word length in the support (0 for the zero element).
    pub fn max_len(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }
}

impl<C: Coeff> AddAssign<&Element<C>> for Element<C> {
    fn add_assign(&mut self, rhs: &Element<C>) {
        for (w, c) in rhs.iter() {
            self.add_term_ref(*w, c);
        }
    }
}

impl<C: Coeff> SubAssign<&Element<C>> for Element<C> {
    fn sub_assign(&mut self, rhs: &Element<C>) {
        for (w, c) in rhs.iter() {
            self.add_term(*w, c.neg_ref());
        }
    }
}

impl<C: Coeff> std::ops::Add for &Element<C> {
    type Output = Element<C>;
    fn add(self, rhs: &Element<C>) -> Element<C> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<C: Coeff> std::ops::Sub for &Element<C> {
    type Output = Element<C>;
    fn sub(self, rhs: &Element<C>) -> Element<C> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<C: Coeff> Neg for &Element<C> {
    type Output = Element<C>;
    fn neg(self) -> Element<C> {
        Element { terms: self.terms.iter().map(|(w, c)| (*w, c.neg_ref())).collect() }
    }
}

impl From<Word> for FreeElement {
    fn from(w: Word) -> Self {
        Element::word(w)
    }
}

impl fmt::Display for FreeElement {
    /// `coeff * word` terms joined by ` + `; unit coefficients are omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.is_one() {
                write!(f, "{w}")?;
                continue;
            }
            let s = c.pretty();
            let needs_parens = c.as_laurent().is_none_or(|p| p.term_count() > 1) && !s.starts_with('[');
            if needs_parens {
                write!(f, "({s}) * {w}")?;
            } else {
                write!(f, "{s} * {w}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for IntElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_ratfunc())
    }
}

/// Parses `coeff * word` terms joined by `+` or `-`.
///
/// The coefficient may be omitted (`xy + 2*yx`). A top-level `+`/`-` inside
/// parentheses or brackets belongs to the coefficient. The juxtaposed form
/// `[3]_q xyy` and `[2]_q^2xyy` are accepted too.
impl std::str::FromStr for FreeElement {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, WordError> {
        let perr = |reason: &str| WordError::Parse { input: s.to_string(), reason: reason.to_string() };
        let chunks = split_top_level_terms(s);
        if chunks.is_empty() {
            return Err(perr("empty input"));
        }
        let mut out = FreeElement::zero();
        for (neg, chunk) in chunks {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                return Err(perr("empty term"));
            }
            if chunk == "0" {
                continue;
            }
            let (coeff_src, word_src) = split_coeff_word(chunk).ok_or_else(|| perr("term has no word"))?;
            let word: Word = word_src.parse()?;
            let coeff: RatFunc = if coeff_src.trim().is_empty() {
                RatFunc::one()
            } else {
                coeff_src.trim().trim_end_matches('*').parse()?
            };
            out.add_term(word, if neg { -coeff } else { coeff });
        }
        Ok(out)
    }
}

/// Splits on `+`/`-` at nesting depth 0 that are not part of an exponent.
fn split_top_level_terms(s: &str) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut neg = false;
    let mut prev_sig: Option<char> = None;
    for c in s.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if depth == 0 && (c == '+' || c == '-') && prev_sig != Some('^') {
            if !cur.trim().is_empty() {
                out.push((neg, std::mem::take(&mut cur)));
            } else {
                cur.clear();
            }
            neg = c == '-';
            prev_sig = Some(c);
            continue;
        }
        cur.push(c);
        if !c.is_whitespace() {
            prev_sig = Some(c);
        }
    }
    if !cur.trim().is_empty() {
        out.push((neg, cur));
    }
    out
}

/// Splits a term into its coefficient and the trailing word. The word is the
/// maximal suffix made of `x`/`y`, or a lone `1` preceded by `*` or standing alone.
fn split_coeff_word(term: &str) -> Option<(&str, &str)> {
    let t = term.trim_end();
    let bytes = t.as_bytes();
    let mut i = bytes.len();
    while i > 0 && (bytes[i - 1] == b'x' || bytes[i - 1] == b'y') {
        i -= 1;
    }
    if i < bytes.len() {
        return Some((&t[..i], &t[i..]));
    }
    if t == "1" {
        return Some(("", "1"));
    }
    if let Some(stripped) = t.strip_suffix('1') {
        let head = stripped.trim_end();
        if head.ends_with('*') {
            return Some((head, "1"));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn e(s: &str) -> FreeElement {
        s.parse().unwrap()
    }

    #[test]
    fn symmetries_on_a_sample_word() {
        assert_eq!(w("xyxxyy").sigma(), w("yxyyxx"));
        assert_eq!(w("xyxxyy").dagger(), w("yyxxyx"));
        assert_eq!(w("xyxxyy").tau(), w("xxyyxy"));
        assert_eq!(Word::EMPTY.dagger(), Word::EMPTY);
    }

    #[test]
    fn words_of_bidegree_two_three() {
        let got: Vec<String> = words_of_bidegree(2, 3).iter().map(|w| w.to_string()).collect();
        assert_eq!(
            got,
            ["xxyyy", "xyxyy", "xyyxy", "xyyyx", "yxxyy", "yxyxy", "yxyyx", "yyxxy", "yyxyx", "yyyxx"]
        );
        assert_eq!(words_of_bidegree(0, 0), vec![Word::EMPTY]);
        assert_eq!(words_of_bidegree(1, 1), vec![w("xy"), w("yx")]);
        assert_eq!(words_of_bidegree(3, 0), vec![w("xxx")]);
    }

    #[test]
    fn counts_and_ranks() {
        for n in 0..=10 {
            for r in 0..=n {
                let ws = words_of_bidegree(r, n - r);
                assert_eq!(ws.len() as u64, binomial(n, r));
                assert!(ws.windows(2).all(|p| p[0] < p[1]));
                for (i, x) in ws.iter().enumerate() {
                    assert_eq!(word_rank(*x), i);
                    assert_eq!(x.bidegree(), (r, n - r));
                }
            }
        }
    }

    #[test]
    fn order_is_length_then_lex() {
        assert!(w("y") < w("xx"));
        assert!(w("xy") < w("yx"));
        assert!(Word::EMPTY < w("x"));
    }

    #[test]
    fn concatenation() {
        assert_eq!(e("xy").concat_mul(&e("x")), e("xyx"));
        assert_eq!(FreeElement::one().concat_mul(&e("xyy")), e("xyy"));
        assert_eq!(e("x + y").concat_mul(&e("y")), e("xy + yy"));
    }

    #[test]
    fn bidegrees() {
        assert_eq!(e("xyy").bidegree().unwrap(), Bidegree::Homogeneous(1, 2));
        assert_eq!(e("xyxxyy").bidegree().unwrap(), Bidegree::Homogeneous(3, 3));
        assert_eq!(e("x + xy").bidegree().unwrap(), Bidegree::Inhomogeneous);
        assert_eq!(FreeElement::zero().bidegree(), Err(WordError::ZeroElement));
    }

    #[test]
    fn element_parsing() {
        let a = e("[3]_q * xyy + 2 * yx - q^-2 * 1");
        assert_eq!(a.coeff(&w("xyy")), RatFunc::qint(3));
        assert_eq!(a.coeff(&w("yx")), RatFunc::from(2));
        assert_eq!(a.coeff(&Word::EMPTY), -RatFunc::q_pow(-2));
        assert_eq!(e("[2]_q^2xyyxxyxx"), e("(q^2 + 2 + q^-2) * xyyxxyxx"));
        assert_eq!(e("(q + 1)*x + (q^-1 - 1)*x"), e("(q + q^-1) * x"));
        assert!("xz".parse::<FreeElement>().is_err());
        assert!("3*q".parse::<FreeElement>().is_err());
    }

    #[test]
    fn element_display_roundtrip() {
        for s in ["[2]_q * xy", "x + q^-2 * yx", "(q^2 + 1) * xx", "1", "-3 * yy", "(1/(q + 1)) * x"] {
            let a = e(s);
            assert_eq!(e(&a.to_string()), a, "{s} -> {a}");
        }
        assert_eq!(e("(q + q^-1)*xy").to_string(), "[2]_q * xy");
    }

    fn arb_word(max: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec(prop::bool::ANY, 0..=max)
            .prop_map(|bs| Word::from_letters(bs.into_iter().map(|b| if b { Letter::Y } else { Letter::X })))
    }

    fn arb_elem() -> impl Strategy<Value = FreeElement> {
        prop::collection::vec((arb_word(6), -3i64..4, -3i32..4), 0..5).prop_map(|ts| {
            FreeElement::from_terms(ts.into_iter().map(|(w, c, k)| (w, RatFunc::from(c).mul_q_pow(k))))
        })
    }

    proptest! {
        #[test]
        fn involutions(a in arb_elem()) {
            prop_assert_eq!(a.sigma().sigma(), a.clone());
            prop_assert_eq!(a.dagger().dagger(), a.clone());
            prop_assert_eq!(a.tau().tau(), a.clone());
            prop_assert_eq!(a.sigma().dagger(), a.tau());
            prop_assert_eq!(a.dagger().sigma(), a.tau());
        }

        #[test]
        fn symmetries_and_concatenation(a in arb_word(6), b in arb_word(6)) {
            prop_assert_eq!(a.concat(b).sigma(), a.sigma().concat(b.sigma()));
            prop_assert_eq!(a.concat(b).dagger(), b.dagger().concat(a.dagger()));
        }

        #[test]
        fn word_slicing(a in arb_word(10), b in arb_word(10)) {
            let c = a.concat(b);
            prop_assert_eq!(c.prefix(a.len()), a);
            prop_assert_eq!(c.suffix_from(a.len()), b);
            if !c.is_empty() {
                prop_assert_eq!(c.tail().push_front(c.first().unwrap()), c);
                prop_assert_eq!(c.init().push_back(c.last().unwrap()), c);
            }
        }
    }
}
