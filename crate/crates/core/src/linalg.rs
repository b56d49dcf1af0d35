//! Exact linear algebra on homogeneous components of the free algebra.
//!
//! Elimination is fraction free: rows hold Laurent polynomials and are kept
//! primitive (the gcd of their entries is a unit). A reduced primitive row is
//! determined by its span up to a unit `+-q^k`, and normalizing the pivot
//! entry removes that ambiguity, so two echelon bases are equal exactly when
//! they span the same space.

use std::sync::OnceLock;

use thiserror::Error;

use crate::freeword::{word_rank, words_of_bidegree, FreeElement, IntElement, Word};
use crate::qfield::{LaurentPoly, RatFunc};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("element of bidegree {got:?} where {expected:?} was expected")]
    Bidegree { expected: (usize, usize), got: (usize, usize) },
    #[error("image of {what} is not in the span of the codomain")]
    EscapesCodomain { what: String },
    #[error("listed vectors are linearly dependent")]
    Dependent,
}

type Row = Vec<LaurentPoly>;

fn is_unit(p: &LaurentPoly) -> bool {
    p.is_monomial() && p.leading_coeff().is_some_and(|c| c.magnitude() == &num_bigint::BigUint::from(1u32))
}

/// `p / u` for a unit `u = +-q^k`.
fn div_unit(p: &LaurentPoly, u: &LaurentPoly) -> LaurentPoly {
    let shifted = p.shift(-u.low_exp());
    if u.leading_coeff().is_some_and(|c| c.sign() == num_bigint::Sign::Minus) {
        -shifted
    } else {
        shifted
    }
}

fn make_primitive(row: &mut Row) {
    let mut g = LaurentPoly::zero();
    for c in row.iter().filter(|c| !c.is_zero()) {
        g = if g.is_zero() { c.gcd(&LaurentPoly::zero()) } else { g.gcd(c) };
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for c in row.iter_mut() {
        if !c.is_zero() {
            *c = c.div_exact(&g);
        }
    }
}

/// Scales by a unit so that the entry at `col` has lowest exponent 0 and a
/// positive lowest coefficient.
fn normalize_at(row: &mut Row, col: usize) {
    let p = &row[col];
    let k = p.low_exp();
    let neg = p.coeff(k).sign() == num_bigint::Sign::Minus;
    if k == 0 && !neg {
        return;
    }
    for c in row.iter_mut() {
        if c.is_zero() {
            continue;
        }
        let s = c.shift(-k);
        *c = if neg { -s } else { s };
    }
}

/// `target <- a' target - b' row` where `a = row[col]`, `b = target[col]`,
/// and `a'/b'` is `a/b` in lowest terms. Clears `target[col]`.
fn eliminate(target: &mut Row, row: &Row, col: usize) {
    let b = target[col].clone();
    if b.is_zero() {
        return;
    }
    let a = &row[col];
    if is_unit(a) {
        let f = div_unit(&b, a);
        for (t, r) in target.iter_mut().zip(row.iter()) {
            if !r.is_zero() {
                *t -= &(&f * r);
            }
        }
    } else {
        let g = a.gcd(&b);
        let a1 = a.div_exact(&g);
        let b1 = b.div_exact(&g);
        for (t, r) in target.iter_mut().zip(row.iter()) {
            if !t.is_zero() {
                *t = &a1 * &*t;
            }
            if !r.is_zero() {
                *t -= &(&b1 * r);
            }
        }
    }
    debug_assert!(target[col].is_zero());
}

/// Size of a candidate pivot entry: units first, then fewer terms, then
/// smaller coefficients.
fn pivot_cost(p: &LaurentPoly) -> (bool, usize, u64) {
    let bits = p.terms().map(|(_, c)| c.bits()).max().unwrap_or(0);
    (!is_unit(p), p.term_count(), bits)
}

/// Incremental fraction-free elimination.
///
/// Columns carry a priority class; a new row takes its pivot in the lowest
/// class where it is nonzero, choosing the cheapest entry within that class
/// (ties broken by column). Giving every column its own class yields the
/// canonical reduced echelon form.
#[derive(Clone, Debug)]
struct Eliminator {
    class: Vec<usize>,
    /// In insertion order, paired with the pivot column.
    rows: Vec<(usize, Row)>,
    /// Keep every pivot column clear in all other rows.
    reduce: bool,
}

impl Eliminator {
    fn with_classes(class: Vec<usize>, reduce: bool) -> Self {
        Eliminator { class, rows: Vec::new(), reduce }
    }

    fn canonical(ncols: usize, reduce: bool) -> Self {
        Self::with_classes((0..ncols).collect(), reduce)
    }

    fn flexible(ncols: usize, reduce: bool) -> Self {
        Self::with_classes(vec![0; ncols], reduce)
    }

    fn pivot_of(&self, v: &Row) -> Option<usize> {
        v.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .min_by_key(|(i, c)| (self.class[*i], pivot_cost(c), *i))
            .map(|(i, _)| i)
    }

    /// Reduces `v` against the current rows and returns what is left, made
    /// primitive (zero when `v` lies in the span).
    fn reduce_vector(&self, mut v: Row) -> Row {
        // Insertion order suffices: a row is clear at the pivots of all
        // earlier rows.
        for (col, row) in &self.rows {
            if !v[*col].is_zero() {
                eliminate(&mut v, row, *col);
                if !is_unit(&row[*col]) {
                    make_primitive(&mut v);
                }
            }
        }
        make_primitive(&mut v);
        v
    }

    /// Adds `v`; returns false when it was already in the span.
    fn insert(&mut self, v: Row) -> bool {
        let mut v = self.reduce_vector(v);
        let Some(pc) = self.pivot_of(&v) else {
            return false;
        };
        normalize_at(&mut v, pc);
        if self.reduce {
            for (col, row) in self.rows.iter_mut() {
                if !row[pc].is_zero() {
                    eliminate(row, &v, pc);
                    make_primitive(row);
                    normalize_at(row, *col);
                }
            }
        }
        self.rows.push((pc, v));
        true
    }

    /// Rows sorted by pivot column.
    fn sorted_rows(mut self) -> Vec<(usize, Row)> {
        self.rows.sort_by_key(|(c, _)| *c);
        self.rows
    }
}

fn to_dense(r: usize, s: usize, e: &IntElement, ncols: usize) -> Result<Row, LinalgError> {
    let mut row = vec![LaurentPoly::zero(); ncols];
    for (w, c) in e.iter() {
        if w.bidegree() != (r, s) {
            return Err(LinalgError::Bidegree { expected: (r, s), got: w.bidegree() });
        }
        row[word_rank(*w)] = c.clone();
    }
    Ok(row)
}

fn from_dense(words: &[Word], row: &[LaurentPoly]) -> IntElement {
    IntElement::from_terms(words.iter().zip(row.iter()).filter(|(_, c)| !c.is_zero()).map(|(w, c)| (*w, c.clone())))
}

/// Writes `e = num / den` with `num` integral; `den` is the lcm of the denominators.
pub fn clear_denominators(e: &FreeElement) -> (LaurentPoly, IntElement) {
    let mut den = LaurentPoly::one();
    for (_, c) in e.iter() {
        if !c.denom().is_one() {
            let g = den.gcd(c.denom());
            den = (&den * c.denom()).div_exact(&g);
        }
    }
    let num = IntElement::from_terms(e.iter().map(|(w, c)| (*w, c.numer() * &den.div_exact(c.denom()))));
    (den, num)
}

// ---------------------------------------------------------------------------

/// A subspace of one homogeneous component, held as a reduced echelon basis.
///
/// The working basis uses cheap pivots (units where possible) to keep
/// coefficients small; the canonical reduced row echelon form, with pivots
/// at the earliest words, is derived from it on demand.
#[derive(Debug)]
pub struct EchelonBasis {
    r: usize,
    s: usize,
    words: Vec<Word>,
    /// Reduced primitive rows with normalized pivots, in insertion order.
    rows: Vec<(usize, Row)>,
    canonical: OnceLock<Vec<(usize, Row)>>,
    rref: OnceLock<Vec<FreeElement>>,
}

impl Clone for EchelonBasis {
    fn clone(&self) -> Self {
        EchelonBasis {
            r: self.r,
            s: self.s,
            words: self.words.clone(),
            rows: self.rows.clone(),
            canonical: self.canonical.clone(),
            rref: self.rref.clone(),
        }
    }
}

/// Equality of spans.
impl PartialEq for EchelonBasis {
    fn eq(&self, other: &Self) -> bool {
        self.bidegree() == other.bidegree() && self.dim() == other.dim() && self.is_subspace_of(other)
    }
}

impl EchelonBasis {
    /// The zero subspace of the component `(r, s)`.
    pub fn empty(r: usize, s: usize) -> Self {
        Self::from_rows(r, s, Vec::new())
    }

    fn from_rows(r: usize, s: usize, rows: Vec<(usize, Row)>) -> Self {
        EchelonBasis { r, s, words: words_of_bidegree(r, s), rows, canonical: OnceLock::new(), rref: OnceLock::new() }
    }

    /// Echelon basis of the span of `spanning`, all of bidegree `(r, s)`.
    pub fn new<'a, I>(r: usize, s: usize, spanning: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = &'a IntElement>,
    {
        let mut b = Self::empty(r, s);
        // Sparse vectors first: they tend to offer unit pivots, and the
        // intermediate spans then stay small. Stable, so deterministic.
        let mut input: Vec<&IntElement> = spanning.into_iter().collect();
        input.sort_by_cached_key(|v| (v.len(), v.iter().map(|(_, c)| c.term_count()).sum::<usize>()));
        let mut el = Eliminator::flexible(b.words.len(), true);
        for v in input {
            el.insert(to_dense(r, s, v, b.words.len())?);
        }
        b.rows = el.rows;
        Ok(b)
    }

    pub fn from_free(r: usize, s: usize, spanning: &[FreeElement]) -> Result<Self, LinalgError> {
        let ints: Vec<IntElement> = spanning.iter().map(|e| clear_denominators(e).1).collect();
        Self::new(r, s, ints.iter())
    }

    /// Adds a vector to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &IntElement) -> Result<bool, LinalgError> {
        let row = to_dense(self.r, self.s, v, self.words.len())?;
        let mut el = Eliminator { class: vec![0; self.words.len()], rows: std::mem::take(&mut self.rows), reduce: true };
        let grew = el.insert(row);
        self.rows = el.rows;
        if grew {
            self.canonical = OnceLock::new();
            self.rref = OnceLock::new();
        }
        Ok(grew)
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.r, self.s)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// All words of the ambient component, in column order.
    pub fn ambient_words(&self) -> &[Word] {
        &self.words
    }

    /// Basis vectors with Laurent coefficients, primitive, from the working
    /// echelon form.
    pub fn int_vectors(&self) -> Vec<IntElement> {
        self.rows.iter().map(|(_, r)| from_dense(&self.words, r)).collect()
    }

    fn canonical_rows(&self) -> &[(usize, Row)] {
        self.canonical.get_or_init(|| {
            let mut el = Eliminator::canonical(self.words.len(), true);
            for (_, row) in &self.rows {
                el.insert(row.clone());
            }
            el.sorted_rows()
        })
    }

    /// Pivot words of the canonical form, increasing.
    pub fn pivot_words(&self) -> Vec<Word> {
        self.canonical_rows().iter().map(|(c, _)| self.words[*c]).collect()
    }

    /// Canonical basis vectors with Laurent coefficients: the reduced row
    /// echelon vectors rescaled to be primitive.
    pub fn canonical_int_vectors(&self) -> Vec<IntElement> {
        self.canonical_rows().iter().map(|(_, r)| from_dense(&self.words, r)).collect()
    }

    /// The reduced row echelon basis over `Q(q)`: each vector has
    /// coefficient 1 at its pivot word and 0 at the other pivot words.
    pub fn rref(&self) -> &[FreeElement] {
        self.rref.get_or_init(|| {
            self.canonical_rows()
                .iter()
                .map(|(pc, row)| {
                    let piv = &row[*pc];
                    FreeElement::from_terms(
                        self.words
                            .iter()
                            .zip(row.iter())
                            .filter(|(_, c)| !c.is_zero())
                            .map(|(w, c)| (*w, RatFunc::new(c.clone(), piv.clone()).expect("nonzero pivot"))),
                    )
                })
                .collect()
        })
    }

    fn residual(&self, v: &IntElement) -> Result<Row, LinalgError> {
        let mut v = to_dense(self.r, self.s, v, self.words.len())?;
        for (col, r) in &self.rows {
            if !v[*col].is_zero() {
                eliminate(&mut v, r, *col);
            }
        }
        Ok(v)
    }

    /// Whether `v` lies in the span.
    pub fn contains(&self, v: &IntElement) -> Result<bool, LinalgError> {
        if v.is_zero() {
            return Ok(true);
        }
        Ok(self.residual(v)?.iter().all(LaurentPoly::is_zero))
    }

    pub fn contains_free(&self, v: &FreeElement) -> Result<bool, LinalgError> {
        self.contains(&clear_denominators(v).1)
    }

    /// Coordinates of `v` in the [`rref`](Self::rref) basis, or `None` when
    /// `v` is not in the span.
    pub fn coordinates(&self, v: &FreeElement) -> Result<Option<Vec<RatFunc>>, LinalgError> {
        if v.is_zero() {
            return Ok(Some(vec![RatFunc::zero(); self.dim()]));
        }
        if !self.contains_free(v)? {
            return Ok(None);
        }
        Ok(Some(self.pivot_words().iter().map(|w| v.coeff(w)).collect()))
    }

    /// The subspace of vectors supported on words satisfying `allowed`.
    ///
    /// Re-eliminates with pivots taken among the forbidden words first; rows
    /// left with an allowed pivot have no forbidden entries, and the other
    /// rows are independent on the forbidden coordinates, so the former span
    /// the intersection.
    pub fn intersect_with_predicate(&self, allowed: impl Fn(Word) -> bool) -> EchelonBasis {
        let class: Vec<usize> = self.words.iter().map(|w| usize::from(allowed(*w))).collect();
        let mut el = Eliminator::with_classes(class.clone(), true);
        for (_, row) in &self.rows {
            el.insert(row.clone());
        }
        let rows = el.rows.into_iter().filter(|(pc, _)| class[*pc] == 1).collect();
        Self::from_rows(self.r, self.s, rows)
    }

    /// Whether every vector of `self` lies in `other`.
    pub fn is_subspace_of(&self, other: &EchelonBasis) -> bool {
        self.bidegree() == other.bidegree()
            && self.rows.iter().all(|(_, row)| {
                let mut v = row.clone();
                for (col, r) in &other.rows {
                    if !v[*col].is_zero() {
                        eliminate(&mut v, r, *col);
                    }
                }
                v.iter().all(LaurentPoly::is_zero)
            })
    }

    /// The span of `self` and `other`.
    pub fn sum(&self, other: &EchelonBasis) -> EchelonBasis {
        let mut el = Eliminator { class: vec![0; self.words.len()], rows: self.rows.clone(), reduce: true };
        for (_, row) in &other.rows {
            el.insert(row.clone());
        }
        Self::from_rows(self.r, self.s, el.rows)
    }
}

/// Rank of a list of vectors of bidegree `(r, s)`.
pub fn rank(r: usize, s: usize, vectors: &[IntElement]) -> Result<usize, LinalgError> {
    let mut el = Eliminator::flexible(crate::freeword::binomial(r + s, r) as usize, false);
    let mut k = 0;
    for v in vectors {
        if el.insert(to_dense(r, s, v, el.class.len())?) {
            k += 1;
        }
    }
    Ok(k)
}

/// A basis of the relations among `images`: coefficient vectors `c` with
/// `sum c_j images[j] = 0`, each primitive.
pub fn kernel_of_images(r: usize, s: usize, images: &[IntElement]) -> Result<Vec<Vec<LaurentPoly>>, LinalgError> {
    let nw = crate::freeword::binomial(r + s, r) as usize;
    let k = images.len();
    let mut class = vec![0; nw + k];
    class[nw..].fill(1);
    let mut el = Eliminator::with_classes(class, true);
    for (j, v) in images.iter().enumerate() {
        let mut row = to_dense(r, s, v, nw)?;
        row.resize(nw + k, LaurentPoly::zero());
        row[nw + j] = LaurentPoly::one();
        el.insert(row);
    }
    Ok(el.rows.into_iter().filter(|(pc, _)| *pc >= nw).map(|(_, row)| row[nw..].to_vec()).collect())
}

/// Combines `vectors` with coefficients `coeffs`.
pub fn combine(vectors: &[IntElement], coeffs: &[LaurentPoly]) -> IntElement {
    let mut out = IntElement::zero();
    for (v, c) in vectors.iter().zip(coeffs) {
        out.add_scaled(c, v);
    }
    out
}

// ---------------------------------------------------------------------------

/// Anything that assigns coordinates to vectors of one homogeneous component.
pub trait CoordinateSystem {
    fn bidegree(&self) -> (usize, usize);
    fn dim(&self) -> usize;
    /// Basis vectors in coordinate order.
    fn basis(&self) -> Vec<FreeElement>;
    fn coordinates(&self, v: &FreeElement) -> Result<Option<Vec<RatFunc>>, LinalgError>;
}

impl CoordinateSystem for EchelonBasis {
    fn bidegree(&self) -> (usize, usize) {
        EchelonBasis::bidegree(self)
    }
    fn dim(&self) -> usize {
        EchelonBasis::dim(self)
    }
    fn basis(&self) -> Vec<FreeElement> {
        self.rref().to_vec()
    }
    fn coordinates(&self, v: &FreeElement) -> Result<Option<Vec<RatFunc>>, LinalgError> {
        EchelonBasis::coordinates(self, v)
    }
}

/// An explicitly listed, linearly independent family of vectors.
#[derive(Clone, Debug)]
pub struct ListedBasis {
    r: usize,
    s: usize,
    vectors: Vec<FreeElement>,
    /// `vectors[j] = ints[j] / dens[j]`.
    dens: Vec<LaurentPoly>,
    /// Echelon form of the rows `[ints[j] | e_j]`.
    el: Eliminator,
    nwords: usize,
}

impl ListedBasis {
    pub fn new(r: usize, s: usize, vectors: Vec<FreeElement>) -> Result<Self, LinalgError> {
        let nw = crate::freeword::binomial(r + s, r) as usize;
        let k = vectors.len();
        // One extra tag column records the multiple of a reduced vector.
        let mut class = vec![0; nw + k + 1];
        class[nw..].fill(1);
        let mut el = Eliminator::with_classes(class, true);
        let mut dens = Vec::with_capacity(k);
        for (j, v) in vectors.iter().enumerate() {
            let (den, num) = clear_denominators(v);
            let mut row = to_dense(r, s, &num, nw)?;
            row.resize(nw + k + 1, LaurentPoly::zero());
            row[nw + j] = LaurentPoly::one();
            el.insert(row);
            dens.push(den);
        }
        if el.rows.iter().any(|(pc, _)| *pc >= nw) {
            return Err(LinalgError::Dependent);
        }
        Ok(ListedBasis { r, s, vectors, dens, el, nwords: nw })
    }

    pub fn vectors(&self) -> &[FreeElement] {
        &self.vectors
    }
}

impl CoordinateSystem for ListedBasis {
    fn bidegree(&self) -> (usize, usize) {
        (self.r, self.s)
    }

    fn dim(&self) -> usize {
        self.vectors.len()
    }

    fn basis(&self) -> Vec<FreeElement> {
        self.vectors.clone()
    }

    fn coordinates(&self, v: &FreeElement) -> Result<Option<Vec<RatFunc>>, LinalgError> {
        let k = self.vectors.len();
        if v.is_zero() {
            return Ok(Some(vec![RatFunc::zero(); k]));
        }
        let nw = self.nwords;
        let (den, num) = clear_denominators(v);
        let mut row = to_dense(self.r, self.s, &num, nw)?;
        row.resize(nw + k + 1, LaurentPoly::zero());
        row[nw + k] = LaurentPoly::one();
        // Only reduce on the word columns, so the tags keep the bookkeeping.
        for (col, r) in &self.el.rows {
            if *col < nw && !row[*col].is_zero() {
                eliminate(&mut row, r, *col);
            }
        }
        if row[..nw].iter().any(|c| !c.is_zero()) {
            return Ok(None);
        }
        // Now alpha * num - sum beta_j ints_j = 0 with the tags holding
        // (-beta_j, alpha); so v = sum (beta_j den_j / (alpha den)) vectors_j.
        let alpha = row[nw + k].clone();
        let mut coords = Vec::with_capacity(k);
        for j in 0..k {
            let beta = -&row[nw + j];
            let numer = &beta * &self.dens[j];
            let denom = &alpha * &den;
            coords.push(RatFunc::new(numer, denom).expect("nonzero multiple"));
        }
        Ok(Some(coords))
    }
}

/// A matrix over `Q(q)` stored by rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<RatFunc>>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![vec![RatFunc::zero(); cols]; rows] }
    }

    pub fn diagonal(d: &[RatFunc]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.entries[i][i] = x.clone();
        }
        m
    }
}

/// The matrix of a linear map from a direct sum of components to another,
/// with column `j` holding the coordinates of the image of the `j`-th domain
/// basis vector. Images landing in a component missing from the codomain
/// list must vanish.
pub fn graded_block<F>(
    domain: &[&dyn CoordinateSystem],
    codomain: &[&dyn CoordinateSystem],
    mut action: F,
) -> Result<Matrix, LinalgError>
where
    F: FnMut(&FreeElement) -> FreeElement,
{
    let cols: usize = domain.iter().map(|d| d.dim()).sum();
    let rows: usize = codomain.iter().map(|c| c.dim()).sum();
    let mut m = Matrix::zeros(rows, cols);
    let mut j = 0;
    for d in domain {
        for b in d.basis() {
            let img = action(&b);
            let mut offset = 0;
            let mut covered = FreeElement::zero();
            for c in codomain {
                let (r, s) = c.bidegree();
                let part = img.homogeneous_part(r, s);
                let coords = c.coordinates(&part)?.ok_or_else(|| LinalgError::EscapesCodomain {
                    what: format!("basis vector {j} of the domain"),
                })?;
                for (i, x) in coords.into_iter().enumerate() {
                    m.entries[offset + i][j] = x;
                }
                covered += &part;
                offset += c.dim();
            }
            if covered != img {
                return Err(LinalgError::EscapesCodomain { what: format!("basis vector {j} of the domain") });
            }
            j += 1;
        }
    }
    Ok(m)
}
