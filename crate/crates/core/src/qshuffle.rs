//! The q-shuffle product on words in `x`, `y`.
//!
//! The primary product uses the left recursion
//! `u*v = u1((u2..ur)*v) + v1(u*(v2..vs)) q^{(u1,v1)+..+(ur,v1)}`
//! and is memoized. The right recursion and the single-letter insertion sums
//! are kept as independent implementations for cross-checking.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock};

use parking_lot::RwLock;

use crate::freeword::{Coeff, Element, FreeElement, IntElement, Letter, Word};
use crate::qfield::{LaurentPoly, RatFunc};
use crate::report::{CheckResult, Report};

/// The symmetric pairing on letters: 2 on equal letters, -2 otherwise.
pub fn pairing(a: Letter, b: Letter) -> i32 {
    if a == b {
        2
    } else {
        -2
    }
}

/// Sum of `(w_j, l)` over all letters `w_j` of `w`.
fn pairing_sum(w: Word, l: Letter) -> i32 {
    let same = match l {
        Letter::X => w.x_count(),
        Letter::Y => w.y_count(),
    } as i32;
    2 * same - 2 * (w.len() as i32 - same)
}

/// Default bound on `|u| + |v|` for memoized word products.
pub const DEFAULT_MEMO_CAP: usize = 12;

/// A memo table for word-by-word shuffle products.
///
/// Entries are only stored for pairs with total length at most `cap`; larger
/// products are recomputed on demand.
pub struct Shuffler {
    cap: usize,
    memo: RwLock<HashMap<(Word, Word), Arc<IntElement>>>,
}

impl Shuffler {
    pub fn new(cap: usize) -> Self {
        Shuffler { cap, memo: RwLock::new(HashMap::new()) }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// `u * v` for words.
    pub fn words(&self, u: Word, v: Word) -> Arc<IntElement> {
        if u.is_empty() {
            return Arc::new(IntElement::word(v));
        }
        if v.is_empty() {
            return Arc::new(IntElement::word(u));
        }
        let cached = u.len() + v.len() <= self.cap;
        if cached {
            if let Some(hit) = self.memo.read().get(&(u, v)) {
                return hit.clone();
            }
        }
        let u1 = u.first().unwrap();
        let v1 = v.first().unwrap();
        let mut out = IntElement::zero();
        for (w, c) in self.words(u.tail(), v).iter() {
            out.add_term_ref(w.push_front(u1), c);
        }
        let e = pairing_sum(u, v1);
        for (w, c) in self.words(u, v.tail()).iter() {
            out.add_term(w.push_front(v1), c.shift(e));
        }
        let out = Arc::new(out);
        if cached {
            self.memo.write().insert((u, v), out.clone());
        }
        out
    }

    pub fn memo_len(&self) -> usize {
        self.memo.read().len()
    }
}

static DEFAULT_SHUFFLER: LazyLock<Shuffler> = LazyLock::new(|| Shuffler::new(DEFAULT_MEMO_CAP));

/// `u * v` for words, through the shared memo table.
pub fn shuffle_words(u: Word, v: Word) -> Arc<IntElement> {
    DEFAULT_SHUFFLER.words(u, v)
}

/// `a * b`, extended bilinearly.
pub fn shuffle<C: Coeff>(a: &Element<C>, b: &Element<C>) -> Element<C> {
    let mut out = Element::zero();
    for (u, cu) in a.iter() {
        for (v, cv) in b.iter() {
            let c = cu.mul_ref(cv);
            for (w, d) in shuffle_words(*u, *v).iter() {
                out.add_term(*w, c.mul_ref(&C::from_laurent(d)));
            }
        }
    }
    out
}

/// Shuffle product of several elements, left to right.
pub fn shuffle_all<C: Coeff>(factors: &[Element<C>]) -> Element<C> {
    let mut acc = Element::one();
    for f in factors {
        acc = shuffle(&acc, f);
    }
    acc
}

/// `u * v` via the right recursion
/// `u*v = (u*(v1..v_{s-1}))vs + ((u1..u_{r-1})*v)ur q^{(ur,v1)+..+(ur,vs)}`.
pub fn shuffle_words_right(u: Word, v: Word) -> IntElement {
    fn go(u: Word, v: Word, memo: &mut HashMap<(Word, Word), IntElement>) -> IntElement {
        if u.is_empty() {
            return IntElement::word(v);
        }
        if v.is_empty() {
            return IntElement::word(u);
        }
        if let Some(hit) = memo.get(&(u, v)) {
            return hit.clone();
        }
        let ur = u.last().unwrap();
        let vs = v.last().unwrap();
        let mut out = IntElement::zero();
        for (w, c) in go(u, v.init(), memo).iter() {
            out.add_term_ref(w.push_back(vs), c);
        }
        let e = pairing_sum(v, ur);
        for (w, c) in go(u.init(), v, memo).iter() {
            out.add_term(w.push_back(ur), c.shift(e));
        }
        memo.insert((u, v), out.clone());
        out
    }
    go(u, v, &mut HashMap::new())
}

/// `u * v` for a letter `u`, as the insertion sum over positions of `v`.
pub fn insert_letter_left(u: Letter, v: Word) -> IntElement {
    let mut out = IntElement::zero();
    let mut e = 0;
    for i in 0..=v.len() {
        if i > 0 {
            e += pairing(v.at(i - 1), u);
        }
        let w = v.prefix(i).push_back(u).concat(v.suffix_from(i));
        out.add_term(w, LaurentPoly::q_pow(e));
    }
    out
}

/// `v * u` for a letter `u`, as the insertion sum over positions of `v`.
pub fn insert_letter_right(v: Word, u: Letter) -> IntElement {
    let mut out = IntElement::zero();
    let mut e = 0;
    for i in (0..=v.len()).rev() {
        if i < v.len() {
            e += pairing(v.at(i), u);
        }
        let w = v.prefix(i).push_back(u).concat(v.suffix_from(i));
        out.add_term(w, LaurentPoly::q_pow(e));
    }
    out
}

/// The six-term expansion of `(u1 u2) * (v1 v2)`.
pub fn two_by_two(u: Word, v: Word) -> IntElement {
    assert!(u.len() == 2 && v.len() == 2);
    let (u1, u2, v1, v2) = (u.at(0), u.at(1), v.at(0), v.at(1));
    let p = pairing;
    let w = |ls: [Letter; 4]| Word::from_letters(ls);
    IntElement::from_terms([
        (w([u1, u2, v1, v2]), LaurentPoly::one()),
        (w([u1, v1, u2, v2]), LaurentPoly::q_pow(p(u2, v1))),
        (w([u1, v1, v2, u2]), LaurentPoly::q_pow(p(u2, v1) + p(u2, v2))),
        (w([v1, u1, u2, v2]), LaurentPoly::q_pow(p(u1, v1) + p(u2, v1))),
        (w([v1, u1, v2, u2]), LaurentPoly::q_pow(p(u1, v1) + p(u2, v1) + p(u2, v2))),
        (w([v1, v2, u1, u2]), LaurentPoly::q_pow(p(u1, v1) + p(u1, v2) + p(u2, v1) + p(u2, v2))),
    ])
}

/// `a^3 b - [3] a^2 b a + [3] a b a^2 - b a^3` for a binary product `mul`.
pub fn qserre_expression<T, M, S>(a: &T, b: &T, mul: M, combine: S) -> T
where
    M: Fn(&T, &T) -> T,
    S: Fn(&[(RatFunc, T)]) -> T,
{
    let aa = mul(a, a);
    let aaa = mul(&aa, a);
    let three = RatFunc::qint(3);
    combine(&[
        (RatFunc::one(), mul(&aaa, b)),
        (-&three, mul(&mul(&aa, b), a)),
        (three, mul(&mul(a, b), &aa)),
        (-RatFunc::one(), mul(b, &aaa)),
    ])
}

fn combine_elements(terms: &[(RatFunc, FreeElement)]) -> FreeElement {
    let mut out = FreeElement::zero();
    for (c, e) in terms {
        out.add_scaled(c, e);
    }
    out
}

/// The two cubic relations between `x` and `y` in the shuffle algebra.
pub fn qserre_residuals() -> [FreeElement; 2] {
    let x = FreeElement::word(Word::letter(Letter::X));
    let y = FreeElement::word(Word::letter(Letter::Y));
    [
        qserre_expression(&x, &y, shuffle, combine_elements),
        qserre_expression(&y, &x, shuffle, combine_elements),
    ]
}

/// Checks that both cubic relations vanish and that `sigma` exchanges them
/// before cancellation.
pub fn check_qserre_shuffle() -> Report {
    let mut report = Report::new();
    for (name, res) in ["x-dominant", "y-dominant"].iter().zip(qserre_residuals()) {
        report.push(if res.is_zero() {
            CheckResult::pass(format!("shuffle q-Serre {name}"), "residual is 0")
        } else {
            CheckResult::fail(format!("shuffle q-Serre {name}"), format!("residual {res}"))
        });
    }
    // Term-by-term: sigma of each monomial of the first relation is the
    // matching monomial of the second.
    let x = FreeElement::word(Word::letter(Letter::X));
    let y = FreeElement::word(Word::letter(Letter::Y));
    let mono = |ls: &[&FreeElement]| shuffle_all(&ls.iter().map(|e| (*e).clone()).collect::<Vec<_>>());
    let first = [mono(&[&x, &x, &x, &y]), mono(&[&x, &x, &y, &x]), mono(&[&x, &y, &x, &x]), mono(&[&y, &x, &x, &x])];
    let second = [mono(&[&y, &y, &y, &x]), mono(&[&y, &y, &x, &y]), mono(&[&y, &x, &y, &y]), mono(&[&x, &y, &y, &y])];
    let ok = first.iter().zip(second.iter()).all(|(a, b)| &a.sigma() == b);
    report.push(if ok {
        CheckResult::pass("shuffle q-Serre sigma symmetry", "sigma maps each monomial to its mirror")
    } else {
        CheckResult::fail("shuffle q-Serre sigma symmetry", "sigma image mismatch")
    });
    report
}

/// `(u*v)*w = u*(v*w)` for every triple of words with `|u|+|v|+|w| <= maxlen`.
pub fn check_associativity(maxlen: usize) -> CheckResult {
    let words: Vec<Vec<Word>> =
        (0..=maxlen).map(|n| (0..=n).flat_map(|r| crate::freeword::words_of_bidegree(r, n - r)).collect()).collect();
    let mut failures = Vec::new();
    let mut checked = 0;
    for a in 0..=maxlen {
        for b in 0..=maxlen - a {
            for c in 0..=maxlen - a - b {
                for &u in &words[a] {
                    for &v in &words[b] {
                        let uv = shuffle_words(u, v);
                        for &w in &words[c] {
                            checked += 1;
                            let left = shuffle(&uv, &IntElement::word(w));
                            let right = shuffle(&IntElement::word(u), &shuffle_words(v, w));
                            if left != right {
                                failures.push(format!("({u}, {v}, {w})"));
                            }
                        }
                    }
                }
            }
        }
    }
    CheckResult::from_failures(format!("shuffle associativity, total length <= {maxlen}"), checked, failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freeword::words_of_bidegree;

    #[test]
    fn associative_small() {
        assert_eq!(check_associativity(6).status, crate::report::Status::Pass);
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn e(s: &str) -> FreeElement {
        s.parse().unwrap()
    }

    fn sh(a: &str, b: &str) -> FreeElement {
        shuffle(&e(a), &e(b))
    }

    #[test]
    fn small_products() {
        assert_eq!(sh("x", "y"), e("xy + q^-2*yx"));
        assert_eq!(sh("y", "x"), e("yx + q^-2*xy"));
        assert_eq!(sh("x", "x"), e("(1 + q^2)*xx"));
        assert_eq!(sh("y", "xxx"), e("yxxx + q^-2*xyxx + q^-4*xxyx + q^-6*xxxy"));
        assert_eq!(sh("xxx", "y"), e("q^-6*yxxx + q^-4*xyxx + q^-2*xxyx + xxxy"));
        assert_eq!(sh("1", "xyy"), e("xyy"));
        assert_eq!(sh("xyy", "1"), e("xyy"));
    }

    #[test]
    fn letter_insertion_examples() {
        let left = insert_letter_left(Letter::X, w("xyy")).to_ratfunc();
        assert_eq!(left, e("(1 + q^2)*xxyy + xyxy + q^-2*xyyx"));
        let right = insert_letter_right(w("xyy"), Letter::X).to_ratfunc();
        assert_eq!(right, e("xyyx + q^-2*xyxy + (q^-2 + q^-4)*xxyy"));
        assert_eq!(insert_letter_left(Letter::Y, Word::EMPTY).to_ratfunc(), e("y"));
    }

    #[test]
    fn qserre_relations_vanish() {
        let r = check_qserre_shuffle();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn six_term_expansion_matches() {
        let all = words_of_bidegree(2, 0)
            .into_iter()
            .chain(words_of_bidegree(1, 1))
            .chain(words_of_bidegree(0, 2))
            .collect::<Vec<_>>();
        assert_eq!(all.len(), 4);
        for &u in &all {
            for &v in &all {
                assert_eq!(*shuffle_words(u, v), two_by_two(u, v), "{u} * {v}");
            }
        }
    }

    #[test]
    fn grading_is_additive() {
        for (a, b) in [("xyx", "yy"), ("x", "yyy"), ("xxyy", "yx")] {
            let p = sh(a, b);
            let (ra, sa) = w(a).bidegree();
            let (rb, sb) = w(b).bidegree();
            assert_eq!(
                p.bidegree().unwrap(),
                crate::freeword::Bidegree::Homogeneous(ra + rb, sa + sb)
            );
        }
    }

    #[test]
    fn memo_respects_cap() {
        let s = Shuffler::new(3);
        s.words(w("xy"), w("yx"));
        s.words(w("x"), w("y"));
        assert!(s.memo_len() > 0);
        let before = s.memo_len();
        s.words(w("xyxy"), w("y"));
        // Only sub-products of total length <= 3 were added.
        assert!(s.memo_len() >= before);
        assert_eq!(*s.words(w("xyxy"), w("y")), *shuffle_words(w("xyxy"), w("y")));
    }
}
