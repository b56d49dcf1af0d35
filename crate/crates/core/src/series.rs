//! Truncated power series in one and two variables with integer coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::report::{CheckResult, Report};

/// A power series in `t, u`, kept exactly for total degree `r + s <= cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries {
    cap: usize,
    // coeffs[r][s], s <= cap - r
    coeffs: Vec<Vec<BigInt>>,
}

impl BiSeries {
    pub fn zero(cap: usize) -> Self {
        BiSeries { cap, coeffs: (0..=cap).map(|r| vec![BigInt::zero(); cap - r + 1]).collect() }
    }

    pub fn one(cap: usize) -> Self {
        let mut s = Self::zero(cap);
        s.coeffs[0][0] = BigInt::one();
        s
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Coefficient of `t^r u^s`; zero beyond the cap.
    pub fn coeff(&self, r: usize, s: usize) -> BigInt {
        if r + s > self.cap {
            BigInt::zero()
        } else {
            self.coeffs[r][s].clone()
        }
    }

    pub fn set(&mut self, r: usize, s: usize, c: BigInt) {
        assert!(r + s <= self.cap, "({r},{s}) beyond cap {}", self.cap);
        self.coeffs[r][s] = c;
    }

    /// `(r, s, coefficient)` for every stored entry, by total degree then `r`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        (0..=self.cap).flat_map(move |n| (0..=n).rev().map(move |r| (r, n - r, &self.coeffs[r][n - r])))
    }

    /// Multiply by `1 / (1 - t^a u^b)`, with `(a, b) != (0, 0)`.
    pub fn div_one_minus(&mut self, a: usize, b: usize) {
        assert!(a + b > 0);
        for n in a + b..=self.cap {
            for r in a..=n {
                let s = n - r;
                if s < b {
                    continue;
                }
                let prev = self.coeffs[r - a][s - b].clone();
                self.coeffs[r][s] += prev;
            }
        }
    }

    /// Multiply by `1 - t^a u^b`.
    pub fn mul_one_minus(&mut self, a: usize, b: usize) {
        assert!(a + b > 0);
        for n in (a + b..=self.cap).rev() {
            for r in a..=n {
                let s = n - r;
                if s < b {
                    continue;
                }
                let prev = self.coeffs[r - a][s - b].clone();
                self.coeffs[r][s] -= prev;
            }
        }
    }

    pub fn mul(&self, other: &BiSeries) -> BiSeries {
        let cap = self.cap.min(other.cap);
        let mut out = Self::zero(cap);
        for (r1, s1, a) in self.entries() {
            if a.is_zero() || r1 + s1 > cap {
                continue;
            }
            for (r2, s2, b) in other.entries() {
                if r1 + s1 + r2 + s2 > cap {
                    break;
                }
                out.coeffs[r1 + r2][s1 + s2] += a * b;
            }
        }
        out
    }

    /// `f(u, t)`.
    pub fn swapped(&self) -> BiSeries {
        let mut out = Self::zero(self.cap);
        for (r, s, c) in self.entries() {
            out.coeffs[s][r] = c.clone();
        }
        out
    }

    pub fn truncate(&self, cap: usize) -> BiSeries {
        let cap = cap.min(self.cap);
        BiSeries { cap, coeffs: (0..=cap).map(|r| self.coeffs[r][..=cap - r].to_vec()).collect() }
    }

    /// `f(t, 1)` up to `t^n`, when every row `r <= n` is fully stored,
    /// i.e. when row `r` vanishes beyond `s = cap - r`.
    pub fn at_u_one(&self, n: usize) -> Vec<BigInt> {
        (0..=n.min(self.cap)).map(|r| self.coeffs[r].iter().sum()).collect()
    }

    /// The table `[r][s]` for `r, s <= side`, needing `2 * side <= cap`.
    pub fn square(&self, side: usize) -> Vec<Vec<BigInt>> {
        (0..=side).map(|r| (0..=side).map(|s| self.coeff(r, s)).collect()).collect()
    }
}

impl fmt::Display for BiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (r, s, c) in self.entries() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            if !first {
                f.write_str(" ")?;
            }
            f.write_str(sign)?;
            if !first {
                f.write_str(" ")?;
            }
            let a = c.abs();
            let mono = match (r, s) {
                (0, 0) => String::new(),
                _ => {
                    let part = |v: &str, e: usize| match e {
                        0 => String::new(),
                        1 => v.to_string(),
                        e => format!("{v}^{e}"),
                    };
                    [part("t", r), part("u", s)].into_iter().filter(|p| !p.is_empty()).collect::<Vec<_>>().join(" ")
                }
            };
            match (a.is_one(), mono.is_empty()) {
                (true, false) => write!(f, "{mono}")?,
                (_, true) => write!(f, "{a}")?,
                (false, false) => write!(f, "{a} {mono}")?,
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O({})", self.cap + 1)
    }
}

fn product_series(cap: usize, factors: impl Fn(usize) -> [(usize, usize); 3]) -> BiSeries {
    let mut out = BiSeries::one(cap);
    // factor n starts in total degree 2n - 1
    for n in 1..=cap.div_ceil(2).max(1) {
        for (a, b) in factors(n) {
            if a + b <= cap {
                out.div_one_minus(a, b);
            }
        }
    }
    out
}

/// `prod 1/((1 - t^n u^(n-1)) (1 - t^n u^n) (1 - t^(n-1) u^n))`.
pub fn expand_phi(cap: usize) -> BiSeries {
    product_series(cap, |n| [(n, n - 1), (n, n), (n - 1, n)])
}

/// `prod 1/((1 - t^n u^(n-1)) (1 - t^n u^n) (1 - t^n u^(n+1)))`.
pub fn expand_delta(cap: usize) -> BiSeries {
    product_series(cap, |n| [(n, n - 1), (n, n), (n, n + 1)])
}

/// `sum over n in Z of t^(n^2) u^(n^2 - n)`.
pub fn expand_phi_weight(cap: usize) -> BiSeries {
    let mut out = BiSeries::zero(cap);
    for n in -(cap as i64)..=(cap as i64) {
        let (r, s) = ((n * n) as usize, (n * n - n) as usize);
        if r + s <= cap {
            out.coeffs[r][s] += 1;
        }
    }
    out
}

/// `prod 1/(1 - t^n)` up to `t^n_max`.
pub fn expand_p(n_max: usize) -> Vec<BigInt> {
    power_of_euler(n_max, 1)
}

/// `prod 1/(1 - t^n)^3` up to `t^n_max`.
pub fn expand_mu(n_max: usize) -> Vec<BigInt> {
    power_of_euler(n_max, 3)
}

fn power_of_euler(n_max: usize, k: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); n_max + 1];
    c[0] = BigInt::one();
    for n in 1..=n_max {
        for _ in 0..k {
            for m in n..=n_max {
                let prev = c[m - n].clone();
                c[m] += prev;
            }
        }
    }
    c
}

pub fn mul_univariate(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().min(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `p(tu) phi(t, u)`.
pub fn bold_dimension_series(cap: usize) -> BiSeries {
    let p = expand_p(cap / 2);
    let mut ptu = BiSeries::zero(cap);
    for (n, c) in p.iter().enumerate() {
        ptu.coeffs[n][n] = c.clone();
    }
    ptu.mul(&expand_phi_weight(cap))
}

fn diff_entries(name: &str, got: &BiSeries, want: &BiSeries) -> CheckResult {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (r, s, c) in want.entries() {
        checked += 1;
        let g = got.coeff(r, s);
        if &g != c {
            failures.push(format!("t^{r} u^{s}: {g} vs {c}"));
        }
    }
    CheckResult::from_failures(name, checked, failures)
}

fn diff_seq(name: &str, got: &[BigInt], want: &[BigInt]) -> CheckResult {
    let mut failures = Vec::new();
    if got.len() != want.len() {
        failures.push(format!("lengths {} and {}", got.len(), want.len()));
    }
    for (n, (a, b)) in got.iter().zip(want).enumerate() {
        if a != b {
            failures.push(format!("t^{n}: {a} vs {b}"));
        }
    }
    CheckResult::from_failures(name, want.len(), failures)
}

/// Factorizations of `Delta` through `Phi`, nonnegativity of `Delta`,
/// monotonicity of the `d_{r,s}`, symmetry of `Phi`, and
/// `Delta(t, 1) = p(t)^3`, all to total degree `cap`.
pub fn check_delta_identities(cap: usize) -> Report {
    let phi = expand_phi(cap);
    let delta = expand_delta(cap);
    let mut rep = Report::new();
    rep.push(diff_entries("Phi(t,u) = Phi(u,t)", &phi.swapped(), &phi));
    let mut a = phi.clone();
    a.mul_one_minus(0, 1);
    rep.push(diff_entries("Delta(t,u) = Phi(t,u)(1-u)", &a, &delta));
    let mut b = phi.clone();
    b.mul_one_minus(1, 0);
    rep.push(diff_entries("Delta(u,t) = Phi(t,u)(1-t)", &b, &delta.swapped()));

    let negative: Vec<String> =
        delta.entries().filter(|(_, _, c)| c.is_negative()).map(|(r, s, c)| format!("t^{r} u^{s}: {c}")).collect();
    rep.push(CheckResult::from_failures("Delta coefficients nonnegative", delta.entries().count(), negative));

    let mut mono = Vec::new();
    for (r, s, c) in phi.entries() {
        if s > 0 && phi.coeff(r, s - 1) > *c {
            mono.push(format!("d({r},{}) > d({r},{s})", s - 1));
        }
        if r > 0 && phi.coeff(r - 1, s) > *c {
            mono.push(format!("d({},{s}) > d({r},{s})", r - 1));
        }
    }
    rep.push(CheckResult::from_failures("d monotone in r and s", phi.entries().count(), mono));

    // Every Delta factor has u-degree at most twice its t-degree, so rows
    // r <= cap are complete at total degree 3 * cap.
    let wide = expand_delta(3 * cap);
    let mu = expand_mu(cap);
    rep.push(diff_seq("Delta(t,1) = p(t)^3", &wide.at_u_one(cap), &mu));
    let p = expand_p(cap);
    rep.push(diff_seq("mu = p^3", &mul_univariate(&p, &mul_univariate(&p, &p)), &mu));
    rep
}

/// Outcome of the row-maximum comparison for one row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowMax {
    Verified { line: usize, value: BigInt },
    NotStabilized { line: usize },
}

/// For each row `r`, `max_s d_{r,s} = mu_r`, asserted only on rows whose
/// stabilization is visible inside total degree `cap`: the last three
/// in-window entries agree and the `Delta` row vanishes from the first of
/// them on. Columns are checked the same way.
pub fn check_max(cap: usize) -> (Report, Vec<RowMax>) {
    let phi = expand_phi(cap);
    let delta = expand_delta(cap);
    let mu = expand_mu(cap);
    let mut rep = Report::new();
    let mut rows = Vec::new();
    for (label, d, dl) in [("row", phi.clone(), delta.clone()), ("column", phi.swapped(), delta.clone())] {
        for r in 0..=cap {
            let last = cap - r;
            let name = format!("max of {label} {r} is mu_{r}");
            if last < 2 {
                if label == "row" {
                    rows.push(RowMax::NotStabilized { line: r });
                }
                rep.push(CheckResult::skip(name, "too few entries in the window"));
                continue;
            }
            let tail = [d.coeff(r, last - 2), d.coeff(r, last - 1), d.coeff(r, last)];
            let flat = tail[0] == tail[1] && tail[1] == tail[2];
            let quiet = (last - 1..=last).all(|s| dl.coeff(r, s).is_zero());
            if !(flat && quiet) {
                if label == "row" {
                    rows.push(RowMax::NotStabilized { line: r });
                }
                rep.push(CheckResult::skip(name, "not stabilized in the window"));
                continue;
            }
            let max = (0..=last).map(|s| d.coeff(r, s)).max().expect("nonempty row");
            if max == mu[r] {
                rep.push(CheckResult::pass(name, format!("stable value {max}")));
            } else {
                rep.push(CheckResult::fail(name, format!("max {max}, mu {}", mu[r])));
            }
            if label == "row" {
                rows.push(RowMax::Verified { line: r, value: max });
            }
        }
    }
    (rep, rows)
}

/// Computed dimensions `dims[(r, s)]` against `p(tu) phi(t, u)`.
pub fn check_bold_dimension_series(window: usize, dims: impl Fn(usize, usize) -> usize) -> CheckResult {
    let series = bold_dimension_series(window);
    let mut failures = Vec::new();
    for (r, s, c) in series.entries() {
        let d = BigInt::from(dims(r, s));
        if &d != c {
            failures.push(format!("({r},{s}): dim {d}, series {c}"));
        }
    }
    CheckResult::from_failures("dim U(r,s) = [t^r u^s] p(tu) phi(t,u)", series.entries().count(), failures)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn univariate_tables() {
        assert_eq!(ints(&expand_p(6)), [1, 1, 2, 3, 5, 7, 11]);
        assert_eq!(ints(&expand_mu(6)), [1, 3, 9, 22, 51, 108, 221]);
    }

    #[test]
    fn phi_corner() {
        let phi = expand_phi(12);
        let sq: Vec<Vec<i64>> = phi.square(6).iter().map(|r| ints(r)).collect();
        assert_eq!(sq[6], [1, 3, 9, 22, 48, 87, 134]);
        assert_eq!(sq[3], [1, 3, 8, 14, 19, 21, 22]);
        assert_eq!(phi.coeff(2, 3), BigInt::from(8));
    }

    #[test]
    fn weight_series() {
        let w = expand_phi_weight(12);
        let nonzero: Vec<(usize, usize)> =
            w.entries().filter(|(_, _, c)| !c.is_zero()).map(|(r, s, _)| (r, s)).collect();
        assert_eq!(nonzero, [(0, 0), (1, 0), (1, 2), (4, 2), (4, 6)]);
        let b = bold_dimension_series(12);
        assert_eq!(b.coeff(4, 4), BigInt::from(5));
        assert_eq!(b.coeff(1, 0), BigInt::one());
        assert_eq!(b.coeff(0, 1), BigInt::zero());
    }

    #[test]
    fn identities() {
        let rep = check_delta_identities(12);
        assert!(rep.all_passed(), "{rep}");
        let (rep, rows) = check_max(12);
        assert!(rep.all_passed(), "{rep}");
        assert!(rows.contains(&RowMax::Verified { line: 2, value: BigInt::from(9) }));
        assert!(rows.contains(&RowMax::Verified { line: 3, value: BigInt::from(22) }));
        assert!(rows.contains(&RowMax::Verified { line: 0, value: BigInt::one() }));
    }

    #[test]
    fn geometric_round_trip() {
        let mut s = expand_phi(8);
        s.div_one_minus(2, 1);
        s.mul_one_minus(2, 1);
        assert_eq!(s, expand_phi(8));
        assert_eq!(expand_phi(10).truncate(6), expand_phi(6));
    }
}
