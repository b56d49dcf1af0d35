//! The subalgebra generated by `x` and `y` under the q-shuffle product and
//! its homogeneous components.

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;
use thiserror::Error;

use crate::freeword::{words_of_bidegree, Element, FreeElement, IntElement, Letter, Word};
use crate::linalg::{EchelonBasis, LinalgError};
use crate::operators::{apply, OperatorId};
use crate::qshuffle::{shuffle, Shuffler};
use crate::report::{CheckResult, Report};

/// Default bound on the total degree `r + s`.
pub const DEFAULT_CAP: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubalgebraError {
    #[error("degree {deg} exceeds the cap {cap}")]
    CapExceeded { deg: usize, cap: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Lazily built echelon bases of the components `U(r, s)`.
pub struct USubspaceCache {
    cap: usize,
    shuffler: Shuffler,
    table: RwLock<HashMap<(usize, usize), Arc<EchelonBasis>>>,
}

impl USubspaceCache {
    pub fn new(cap: usize) -> Self {
        USubspaceCache { cap, shuffler: Shuffler::new(cap), table: RwLock::new(HashMap::new()) }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Echelon basis of `U(r, s)`.
    ///
    /// Built from `x * U(r-1, s) + y * U(r, s-1)`: every shuffle monomial in
    /// the letters starts with one letter followed by a shorter monomial.
    pub fn component(&self, r: usize, s: usize) -> Result<Arc<EchelonBasis>, SubalgebraError> {
        if r + s > self.cap {
            return Err(SubalgebraError::CapExceeded { deg: r + s, cap: self.cap });
        }
        if let Some(b) = self.table.read().get(&(r, s)) {
            return Ok(b.clone());
        }
        let basis = if r + s == 0 {
            EchelonBasis::new(0, 0, [&IntElement::one()])?
        } else {
            let mut spanning = Vec::new();
            if r > 0 {
                let lower = self.component(r - 1, s)?;
                spanning.extend(lower.int_vectors().iter().map(|v| self.left_mul(Letter::X, v)));
            }
            if s > 0 {
                let lower = self.component(r, s - 1)?;
                spanning.extend(lower.int_vectors().iter().map(|v| self.left_mul(Letter::Y, v)));
            }
            EchelonBasis::new(r, s, spanning.iter())?
        };
        let basis = Arc::new(basis);
        self.table.write().insert((r, s), basis.clone());
        Ok(basis)
    }

    fn left_mul(&self, l: Letter, v: &IntElement) -> IntElement {
        let mut out = IntElement::zero();
        let lw = Word::letter(l);
        for (w, c) in v.iter() {
            out.add_scaled(c, &self.shuffler.words(lw, *w));
        }
        out
    }

    /// Dimensions `dim U(r, s)` for `r + s <= maxdeg`, indexed `[r][s]`,
    /// with entries beyond the degree bound left at zero.
    pub fn dims_table(&self, maxdeg: usize) -> Result<Vec<Vec<usize>>, SubalgebraError> {
        let mut t = vec![vec![0; maxdeg + 1]; maxdeg + 1];
        for n in 0..=maxdeg {
            for r in 0..=n {
                t[r][n - r] = self.component(r, n - r)?.dim();
            }
        }
        Ok(t)
    }

    /// Every `(r, s)` with `r + s <= window`, ordered by total degree then `r`.
    pub fn bidegrees(window: usize) -> impl Iterator<Item = (usize, usize)> {
        (0..=window).flat_map(|n| (0..=n).rev().map(move |s| (n - s, s)))
    }
}

impl Default for USubspaceCache {
    fn default() -> Self {
        Self::new(DEFAULT_CAP)
    }
}

/// Echelon basis of `U(r, s)` from every shuffle monomial in `r` x's and `s`
/// y's. Exponential; used to cross-check the recursive construction.
pub fn component_from_monomials(r: usize, s: usize) -> Result<EchelonBasis, LinalgError> {
    let mut spanning = Vec::new();
    for w in words_of_bidegree(r, s) {
        let mut m = FreeElement::one();
        for l in w.letters() {
            m = shuffle(&m, &FreeElement::word(Word::letter(l)));
        }
        spanning.push(m);
    }
    EchelonBasis::from_free(r, s, &spanning)
}

/// Target bidegree of a lowering or raising map, when it is homogeneous.
pub fn shifted(op: OperatorId, r: usize, s: usize) -> Option<(usize, usize)> {
    use OperatorId::*;
    match op {
        AstarL | AstarR => r.checked_sub(1).map(|r| (r, s)),
        BstarL | BstarR => s.checked_sub(1).map(|s| (r, s)),
        Aell | Ar => Some((r + 1, s)),
        Bell | Br => Some((r, s + 1)),
        _ => Some((r, s)),
    }
}

fn membership_check(
    cache: &USubspaceCache,
    name: String,
    window: usize,
    ops: &[OperatorId],
) -> Result<CheckResult, SubalgebraError> {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (r, s) in USubspaceCache::bidegrees(window) {
        let src = cache.component(r, s)?;
        for op in ops {
            for v in src.int_vectors() {
                let img = apply(*op, &v);
                checked += 1;
                if img.is_zero() {
                    continue;
                }
                let ok = match shifted(*op, r, s) {
                    Some((r2, s2)) => cache.component(r2, s2)?.contains(&img).unwrap_or(false),
                    None => false,
                };
                if !ok {
                    failures.push(format!("{} on U({r},{s}) vector {}", op.name(), v.to_ratfunc()));
                }
            }
        }
    }
    Ok(CheckResult::from_failures(name, checked, failures))
}

/// The starred maps send each `U(r, s)` into the lowered component.
pub fn closure_check_starred(cache: &USubspaceCache, window: usize) -> Result<Report, SubalgebraError> {
    use OperatorId::*;
    let mut rep = Report::new();
    for op in [AstarL, AstarR, BstarL, BstarR] {
        rep.push(membership_check(cache, format!("starred closure {}", op.name()), window, &[op])?);
    }
    Ok(rep)
}

/// The maps `A_l, B_l, A_r, B_r` send each `U(r, s)` into the raised component.
pub fn closure_check_raising(cache: &USubspaceCache, window: usize) -> Result<Report, SubalgebraError> {
    use OperatorId::*;
    let mut rep = Report::new();
    for op in [Aell, Bell, Ar, Br] {
        rep.push(membership_check(cache, format!("raising closure {}", op.name()), window.min(cache.cap() - 1), &[op])?);
    }
    Ok(rep)
}

/// `X`, `Y`, `K` act on `U(r, s)` as `q^r`, `q^s`, `q^(2r-2s)`.
pub fn eigenvalue_check(cache: &USubspaceCache, window: usize) -> Result<Report, SubalgebraError> {
    use OperatorId::*;
    let mut rep = Report::new();
    for (op, exp) in [
        (X, Box::new(|r: i32, _s: i32| r) as Box<dyn Fn(i32, i32) -> i32>),
        (Y, Box::new(|_r, s| s)),
        (K, Box::new(|r, s| 2 * r - 2 * s)),
    ] {
        let mut failures = Vec::new();
        let mut checked = 0;
        for (r, s) in USubspaceCache::bidegrees(window) {
            let k = exp(r as i32, s as i32);
            for v in cache.component(r, s)?.int_vectors() {
                checked += 1;
                if apply(op, &v) != v.mul_q_pow(k) {
                    failures.push(format!("U({r},{s}) vector {}", v.to_ratfunc()));
                }
            }
        }
        rep.push(CheckResult::from_failures(format!("eigenvalue {}", op.name()), checked, failures));
    }
    Ok(rep)
}

/// `U` is stable under the symmetries: `sigma` swaps the bidegree, the
/// other two preserve it.
pub fn symmetry_check(cache: &USubspaceCache, window: usize) -> Result<Report, SubalgebraError> {
    let mut rep = Report::new();
    type Sym = fn(&IntElement) -> IntElement;
    let syms: [(&str, Sym, bool); 3] =
        [("sigma", Element::sigma, true), ("dagger", Element::dagger, false), ("tau", Element::tau, true)];
    for (name, f, swaps) in syms {
        let mut failures = Vec::new();
        let mut checked = 0;
        for (r, s) in USubspaceCache::bidegrees(window) {
            let (r2, s2) = if swaps { (s, r) } else { (r, s) };
            let target = cache.component(r2, s2)?;
            for v in cache.component(r, s)?.int_vectors() {
                checked += 1;
                if !target.contains(&f(&v))? {
                    failures.push(format!("U({r},{s}) vector {}", v.to_ratfunc()));
                }
            }
        }
        rep.push(CheckResult::from_failures(format!("invariance under {name}"), checked, failures));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_components() {
        let c = USubspaceCache::new(6);
        assert_eq!(c.component(0, 0).unwrap().rref(), &[FreeElement::one()]);
        assert_eq!(c.component(1, 1).unwrap().dim(), 2);
        assert_eq!(c.component(2, 2).unwrap().dim(), 6);
        assert!(c.component(4, 3).is_err());
    }

    #[test]
    fn recursive_matches_monomials() {
        let c = USubspaceCache::new(6);
        for (r, s) in USubspaceCache::bidegrees(5) {
            let a = c.component(r, s).unwrap();
            let b = component_from_monomials(r, s).unwrap();
            assert_eq!(*a, b, "U({r},{s})");
        }
    }

    #[test]
    fn closures_and_eigenvalues() {
        let c = USubspaceCache::new(6);
        assert!(closure_check_starred(&c, 5).unwrap().all_passed());
        assert!(closure_check_raising(&c, 5).unwrap().all_passed());
        assert!(eigenvalue_check(&c, 5).unwrap().all_passed());
        assert!(symmetry_check(&c, 5).unwrap().all_passed());
    }

    #[test]
    fn full_window_dims() {
        let c = USubspaceCache::new(10);
        let d = c.dims_table(10).unwrap();
        assert_eq!(d[6][..5], [1, 3, 9, 22, 48]);
        assert_eq!(d[5][..6], [1, 3, 9, 21, 42, 66]);
        assert_eq!(d[3][..8], [1, 3, 8, 14, 19, 21, 22, 22]);
        for r in 0..=10 {
            for s in 0..=10 - r {
                assert_eq!(d[r][s], d[s][r]);
            }
        }
    }

    #[test]
    fn starred_examples() {
        let y = IntElement::word("y".parse().unwrap());
        assert_eq!(apply(OperatorId::BstarL, &y), IntElement::one());
        let c = USubspaceCache::new(4);
        for v in c.component(0, 3).unwrap().int_vectors() {
            assert!(apply(OperatorId::AstarL, &v).is_zero());
        }
    }
}
