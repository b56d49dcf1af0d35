//! Exact scalars: Laurent polynomials in `q` over the integers and their
//! field of fractions `Q(q)`.
//!
//! `q` is a formal indeterminate and is never evaluated. Every value is kept
//! in a canonical form so that structural equality is mathematical equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

// ---------------------------------------------------------------------------
// Dense integer polynomials (index = degree). Internal helpers.

fn trim(p: &mut Vec<BigInt>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn content(p: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        if !c.is_zero() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
    }
    g
}

fn primitive_part(p: &[BigInt]) -> Vec<BigInt> {
    let c = content(p);
    if c.is_zero() || c.is_one() {
        return p.to_vec();
    }
    p.iter().map(|x| x / &c).collect()
}

/// Pseudo-remainder of `a` by `b` (`b` nonzero).
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= &lr * bc;
        }
        trim(&mut r);
    }
    r
}

/// Greatest common divisor over `Z[q]`, with positive leading coefficient.
fn poly_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() {
        return normalize_sign(b.to_vec());
    }
    if b.is_empty() {
        return normalize_sign(a.to_vec());
    }
    let ca = content(a);
    let cb = content(b);
    let cg = ca.gcd(&cb);
    if a.len() == 1 || b.len() == 1 {
        return vec![cg];
    }
    let (mut u, mut v) = if a.len() >= b.len() {
        (primitive_part(a), primitive_part(b))
    } else {
        (primitive_part(b), primitive_part(a))
    };
    loop {
        let r = pseudo_rem(&u, &v);
        if r.is_empty() {
            break;
        }
        if r.len() == 1 {
            return vec![cg];
        }
        u = v;
        v = primitive_part(&r);
    }
    let mut g: Vec<BigInt> = v.into_iter().map(|c| c * &cg).collect();
    if g.last().is_some_and(|c| c.is_negative()) {
        for c in g.iter_mut() {
            *c = -&*c;
        }
    }
    g
}

fn normalize_sign(mut p: Vec<BigInt>) -> Vec<BigInt> {
    if p.last().is_some_and(|c| c.is_negative()) {
        for c in p.iter_mut() {
            *c = -&*c;
        }
    }
    p
}

/// Exact quotient `a / b` over `Z[q]`. Panics if `b` does not divide `a`.
fn poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() {
        return Vec::new();
    }
    if b.len() == 1 {
        return a.iter().map(|c| {
            let (qt, rm) = c.div_rem(&b[0]);
            assert!(rm.is_zero(), "inexact integer division");
            qt
        })
        .collect();
    }
    let mut r = a.to_vec();
    let db = b.len() - 1;
    assert!(r.len() > db, "inexact polynomial division");
    let mut quot = vec![BigInt::zero(); r.len() - db];
    let lb = &b[db];
    for k in (0..quot.len()).rev() {
        let top = &r[k + db];
        if top.is_zero() {
            continue;
        }
        let (qt, rm) = top.div_rem(lb);
        assert!(rm.is_zero(), "inexact polynomial division");
        for (i, bc) in b.iter().enumerate() {
            r[i + k] -= &qt * bc;
        }
        quot[k] = qt;
    }
    trim(&mut r);
    assert!(r.is_empty(), "inexact polynomial division");
    trim(&mut quot);
    quot
}

// ---------------------------------------------------------------------------

/// An element of `Z[q, q^-1]`.
///
/// Stored densely from the lowest nonzero exponent `low`; the first and last
/// stored coefficients are nonzero, and zero is the empty vector with `low = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LaurentPoly {
    low: i32,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c * q^e`.
    pub fn monomial(c: impl Into<BigInt>, e: i32) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { low: e, coeffs: vec![c] }
    }

    /// `q^e`.
    pub fn q_pow(e: i32) -> Self {
        Self::monomial(1, e)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, C)>,
        C: Into<BigInt>,
    {
        let mut acc = Self::zero();
        for (e, c) in terms {
            acc += &Self::monomial(c, e);
        }
        acc
    }

    fn from_dense(low: i32, mut coeffs: Vec<BigInt>) -> Self {
        trim(&mut coeffs);
        let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == coeffs.len() {
            return Self::zero();
        }
        if lead_zeros > 0 {
            coeffs.drain(..lead_zeros);
        }
        LaurentPoly { low: low + lead_zeros as i32, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// True for `c * q^e` with `c` nonzero.
    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// Lowest exponent carrying a nonzero coefficient (0 for the zero polynomial).
    pub fn low_exp(&self) -> i32 {
        self.low
    }

    /// Highest exponent carrying a nonzero coefficient (0 for the zero polynomial).
    pub fn high_exp(&self) -> i32 {
        if self.is_zero() {
            0
        } else {
            self.low + self.coeffs.len() as i32 - 1
        }
    }

    /// Coefficient of `q^e`.
    pub fn coeff(&self, e: i32) -> BigInt {
        let i = e - self.low;
        if i < 0 || i as usize >= self.coeffs.len() {
            BigInt::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i32, c))
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn shift_in_place(&mut self, k: i32) {
        if !self.is_zero() {
            self.low += k;
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Gcd of the integer coefficients (0 for the zero polynomial).
    pub fn integer_content(&self) -> BigInt {
        content(&self.coeffs)
    }

    /// Leading coefficient, i.e. the coefficient of the highest power.
    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    fn lowest_coeff(&self) -> Option<&BigInt> {
        self.coeffs.first()
    }

    /// Divides every coefficient by the integer `c`; panics when inexact.
    pub fn div_integer_exact(&self, c: &BigInt) -> Self {
        LaurentPoly {
            low: self.low,
            coeffs: self
                .coeffs
                .iter()
                .map(|x| {
                    let (qt, rm) = x.div_rem(c);
                    assert!(rm.is_zero(), "inexact integer division");
                    qt
                })
                .collect(),
        }
    }

    /// Gcd in `Z[q, q^-1]`, normalized to lowest exponent 0 and positive
    /// leading coefficient. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let g = poly_gcd(&self.coeffs, &other.coeffs);
        Self::from_dense(0, g)
    }

    /// Exact quotient `self / d` in `Z[q, q^-1]`. Panics when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Self {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Self::zero();
        }
        let quot = poly_div_exact(&self.coeffs, &d.coeffs);
        Self::from_dense(self.low - d.low, quot)
    }

    /// Checked exact quotient; `None` when `d` does not divide `self`.
    pub fn try_div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let den = &d.coeffs;
        let db = den.len() - 1;
        let lb = &den[db];
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return None;
        }
        let mut quot = vec![BigInt::zero(); r.len() - db];
        for k in (0..quot.len()).rev() {
            if r[k + db].is_zero() {
                continue;
            }
            let (qt, rm) = r[k + db].div_rem(lb);
            if !rm.is_zero() {
                return None;
            }
            for (i, bc) in den.iter().enumerate() {
                r[i + k] -= &qt * bc;
            }
            quot[k] = qt;
        }
        trim(&mut r);
        r.is_empty().then(|| Self::from_dense(self.low - d.low, quot))
    }

    /// Renders with the scalar grammar, highest power first: `q^2 + 1 + q^-2`.
    fn write_terms(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let e = self.low + i as i32;
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let mono = match e {
                0 => None,
                1 => Some("q".to_string()),
                _ => Some(format!("q^{e}")),
            };
            match (abs.is_one(), mono) {
                (_, None) => write!(f, "{abs}")?,
                (true, Some(m)) => write!(f, "{m}")?,
                (false, Some(m)) => write!(f, "{abs}*{m}")?,
            }
        }
        Ok(())
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_terms(f)
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        if rhs.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = rhs.clone();
            return;
        }
        let low = self.low.min(rhs.low);
        let high = self.high_exp().max(rhs.high_exp());
        if low < self.low || high > self.high_exp() {
            let mut v = vec![BigInt::zero(); (high - low + 1) as usize];
            let off = (self.low - low) as usize;
            for (i, c) in self.coeffs.drain(..).enumerate() {
                v[off + i] = c;
            }
            self.coeffs = v;
            self.low = low;
        }
        let off = (rhs.low - self.low) as usize;
        for (i, c) in rhs.coeffs.iter().enumerate() {
            self.coeffs[off + i] += c;
        }
        let (low, coeffs) = (self.low, std::mem::take(&mut self.coeffs));
        *self = Self::from_dense(low, coeffs);
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        *self += &(-rhs);
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for c in self.coeffs.iter_mut() {
            *c = -&*c;
        }
        self
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        if rhs.is_monomial() {
            let c = &rhs.coeffs[0];
            let mut out = if c.is_one() { self.clone() } else { self.scale(c) };
            out.low += rhs.low;
            return out;
        }
        if self.is_monomial() {
            return rhs * self;
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        LaurentPoly::from_dense(self.low + rhs.low, v)
    }
}

/// The q-integer `[n]_q = q^(n-1) + q^(n-3) + ... + q^(1-n)`; `[0]_q = 0`.
pub fn qint(n: u32) -> LaurentPoly {
    let n = n as i32;
    LaurentPoly::from_terms((0..n).map(|k| (n - 1 - 2 * k, 1)))
}

// ---------------------------------------------------------------------------

/// An element of `Q(q)` stored as a reduced fraction of Laurent polynomials.
///
/// Canonical form: the denominator has lowest exponent 0 and a positive
/// constant term, numerator and denominator share no common factor in
/// `Z[q, q^-1]` (including integer content).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<LaurentPoly> for RatFunc {
    fn from(num: LaurentPoly) -> Self {
        RatFunc { num, den: LaurentPoly::one() }
    }
}

impl From<i64> for RatFunc {
    fn from(c: i64) -> Self {
        LaurentPoly::constant(c).into()
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        RatFunc { num: LaurentPoly::one(), den: LaurentPoly::one() }
    }

    pub fn q_pow(e: i32) -> Self {
        LaurentPoly::q_pow(e).into()
    }

    pub fn qint(n: u32) -> Self {
        qint(n).into()
    }

    /// `num / den` in canonical form.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(mut num: LaurentPoly, mut den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        // q is a unit: move the denominator's q-power onto the numerator.
        num.shift_in_place(-den.low);
        den.low = 0;
        if den.is_monomial() {
            let d = den.coeffs[0].clone();
            if !d.is_one() {
                let g = num.integer_content().gcd(&d);
                let mut d = d / &g;
                num = num.div_integer_exact(&g);
                if d.is_negative() {
                    d = -d;
                    num = -num;
                }
                den = LaurentPoly::constant(d);
            }
            return RatFunc { num, den };
        }
        let g = num.gcd(&den);
        if !g.is_one() {
            num = num.div_exact(&g);
            den = den.div_exact(&g);
            num.shift_in_place(-den.low);
            den.low = 0;
        }
        if den.lowest_coeff().is_some_and(|c| c.is_negative()) {
            num = -num;
            den = -den;
        }
        RatFunc { num, den }
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denom(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is 1, i.e. the value lies in `Z[q, q^-1]`.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// The value as a Laurent polynomial when its denominator is 1.
    pub fn as_laurent(&self) -> Option<&LaurentPoly> {
        self.den.is_one().then_some(&self.num)
    }

    /// Multiplies by `q^k`; no renormalization needed.
    pub fn mul_q_pow(&self, k: i32) -> Self {
        RatFunc { num: self.num.shift(k), den: self.den.clone() }
    }

    pub fn mul_laurent(&self, p: &LaurentPoly) -> Self {
        if p.is_zero() || self.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() {
            return (&self.num * p).into();
        }
        if p.is_monomial() && p.coeffs[0].is_one() {
            return self.mul_q_pow(p.low);
        }
        Self::normalized(&self.num * p, self.den.clone())
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if rhs.den.is_one() && self.den.is_one() {
            return Ok(Self::normalized(self.num.clone(), rhs.num.clone()));
        }
        Ok(Self::normalized(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Renders q-integer-shaped values as `[n]_q` and falls back to the
    /// plain scalar grammar otherwise.
    pub fn pretty(&self) -> String {
        if let Some(p) = self.as_laurent() {
            if let Some(s) = pretty_qint(p) {
                return s;
            }
        }
        self.to_string()
    }
}

fn pretty_qint(p: &LaurentPoly) -> Option<String> {
    if p.term_count() < 2 {
        return None;
    }
    let sign = p.leading_coeff()?.signum();
    let abs = if sign.is_negative() { -p } else { p.clone() };
    let n = abs.term_count() as u32;
    if abs == qint(n) {
        return Some(if sign.is_negative() { format!("-[{n}]_q") } else { format!("[{n}]_q") });
    }
    None
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &LaurentPoly| {
            if p.term_count() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return (&self.num + &rhs.num).into();
        }
        if self.den == rhs.den {
            return RatFunc::normalized(&self.num + &rhs.num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::normalized(num, &self.den * &rhs.den)
    }
}

impl AddAssign<&RatFunc> for RatFunc {
    fn add_assign(&mut self, rhs: &RatFunc) {
        if rhs.is_zero() {
            return;
        }
        if self.den.is_one() && rhs.den.is_one() {
            self.num += &rhs.num;
            return;
        }
        *self = &*self + rhs;
    }
}

impl SubAssign<&RatFunc> for RatFunc {
    fn sub_assign(&mut self, rhs: &RatFunc) {
        if self.den.is_one() && rhs.den.is_one() {
            self.num -= &rhs.num;
            return;
        }
        *self = &*self - rhs;
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -self.num, den: self.den }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if rhs.den.is_one() {
            return self.mul_laurent(&rhs.num);
        }
        if self.den.is_one() {
            return rhs.mul_laurent(&self.num);
        }
        RatFunc::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

macro_rules! forward_owned {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(LaurentPoly, Add, add);
forward_owned!(LaurentPoly, Sub, sub);
forward_owned!(LaurentPoly, Mul, mul);
forward_owned!(RatFunc, Add, add);
forward_owned!(RatFunc, Sub, sub);
forward_owned!(RatFunc, Mul, mul);

// ---------------------------------------------------------------------------
// Parsing.
//
//   sum    := ['-'] term (('+' | '-') term)*
//   term   := factor (['*'] factor)* ('/' factor)*
//   factor := atom ['^' int]
//   atom   := integer | 'q' | '[' integer ']_q' | '(' sum ')'

struct ScalarParser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> ScalarParser<'a> {
    fn err(&self, reason: impl Into<String>) -> ScalarError {
        ScalarError::Parse { input: self.src.to_string(), reason: reason.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), ScalarError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}' at offset {}", self.pos)))
        }
    }

    fn integer(&mut self) -> Result<i64, ScalarError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err(format!("bad integer {s:?}")))
    }

    fn big_integer(&mut self) -> Result<BigInt, ScalarError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err(format!("bad integer {s:?}")))
    }

    fn sum(&mut self) -> Result<RatFunc, ScalarError> {
        let mut neg = false;
        if self.peek() == Some('-') {
            self.pos += 1;
            neg = true;
        }
        let mut acc = self.term()?;
        if neg {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc, ScalarError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some('/') => {
                    self.pos += 1;
                    let d = self.factor()?;
                    acc = acc.checked_div(&d)?;
                }
                Some(c) if c == 'q' || c == '[' || c == '(' || c.is_ascii_digit() => {
                    acc = &acc * &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RatFunc, ScalarError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.integer()?;
            if e >= 0 {
                return Ok(base.pow(e as u32));
            }
            return base.inv().map(|b| b.pow((-e) as u32));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFunc, ScalarError> {
        match self.peek() {
            Some('q') => {
                self.pos += 1;
                if self.peek() == Some('^') {
                    self.pos += 1;
                    let e = self.integer()?;
                    let e = i32::try_from(e).map_err(|_| self.err("exponent out of range"))?;
                    return Ok(RatFunc::q_pow(e));
                }
                Ok(RatFunc::q_pow(1))
            }
            Some('[') => {
                self.pos += 1;
                let n = self.integer()?;
                self.expect(']')?;
                self.expect('_')?;
                self.expect('q')?;
                let n = u32::try_from(n).map_err(|_| self.err("q-integer index must be >= 0"))?;
                Ok(RatFunc::qint(n))
            }
            Some('(') => {
                self.pos += 1;
                let v = self.sum()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.big_integer()?;
                Ok(LaurentPoly::constant(n).into())
            }
            Some(c) => Err(self.err(format!("unexpected '{c}'"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

impl std::str::FromStr for RatFunc {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = ScalarParser { src: s, chars: s.chars().collect(), pos: 0 };
        let v = p.sum()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(p.err(format!("trailing input at offset {}", p.pos)));
        }
        Ok(v)
    }
}

impl std::str::FromStr for LaurentPoly {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let r: RatFunc = s.parse()?;
        r.as_laurent().cloned().ok_or_else(|| ScalarError::Parse {
            input: s.to_string(),
            reason: "not a Laurent polynomial".into(),
        })
    }
}

impl PartialOrd for LaurentPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arbitrary but total order, used only to make outputs deterministic.
impl Ord for LaurentPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.low
            .cmp(&other.low)
            .then_with(|| self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

/// Small helper for tests and fixtures: the integer value of a constant.
pub fn as_small_integer(r: &RatFunc) -> Option<i64> {
    let p = r.as_laurent()?;
    if p.is_zero() {
        return Some(0);
    }
    if p.is_monomial() && p.low_exp() == 0 {
        return p.leading_coeff()?.to_i64();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rf(s: &str) -> RatFunc {
        s.parse().unwrap()
    }

    #[test]
    fn qint_small_values() {
        assert!(qint(0).is_zero());
        assert_eq!(qint(1), LaurentPoly::one());
        assert_eq!(qint(2), LaurentPoly::from_terms([(1, 1), (-1, 1)]));
        assert_eq!(qint(3), LaurentPoly::from_terms([(2, 1), (0, 1), (-2, 1)]));
    }

    #[test]
    fn qint_as_quotient() {
        let two = rf("(q^2 - q^-2)/(q - q^-1)");
        assert_eq!(two, RatFunc::qint(2));
        let three = rf("(q^3 - q^-3)/(q - q^-1)");
        assert_eq!(three, RatFunc::qint(3));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(RatFunc::one().checked_div(&RatFunc::zero()), Err(ScalarError::DivisionByZero));
        assert_eq!(RatFunc::zero().inv(), Err(ScalarError::DivisionByZero));
        assert!(RatFunc::new(LaurentPoly::one(), LaurentPoly::zero()).is_err());
        assert!("1/(q - q)".parse::<RatFunc>().is_err());
    }

    #[test]
    fn rendering() {
        assert_eq!(qint(3).to_string(), "q^2 + 1 + q^-2");
        assert_eq!(rf("-2*q + 3").to_string(), "-2*q + 3");
        assert_eq!(rf("1/(q^2+1)").to_string(), "1/(q^2 + 1)");
        assert_eq!(RatFunc::qint(4).pretty(), "[4]_q");
        assert_eq!(rf("q^-2").pretty(), "q^-2");
        assert_eq!(RatFunc::zero().to_string(), "0");
    }

    #[test]
    fn parse_roundtrip_of_rendering() {
        for s in ["q^2 + 1 + q^-2", "-3*q^-4 + q", "(q + 1)/(q^2 + 2*q^-1)", "[2]_q^2 [3]_q", "3*[2]_q"] {
            let v = rf(s);
            assert_eq!(rf(&v.to_string()), v, "{s}");
        }
    }

    #[test]
    fn normal_form_is_canonical() {
        let a = rf("(q^2 - 1)/(q - 1)");
        assert_eq!(a, rf("q + 1"));
        let b = rf("(2*q)/(-4*q^3)");
        assert_eq!(b.denom(), &LaurentPoly::constant(2));
        assert_eq!(b.numer(), &LaurentPoly::monomial(-1, -2));
        let c = rf("(6*q + 6)/(4*q^2 - 4)");
        assert_eq!(c, rf("3/(2*q - 2)"));
    }

    fn arb_laurent() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-4i32..5, -5i64..6), 0..5)
            .prop_map(LaurentPoly::from_terms)
    }

    fn arb_ratfunc() -> impl Strategy<Value = RatFunc> {
        (arb_laurent(), arb_laurent())
            .prop_filter_map("nonzero den", |(n, d)| RatFunc::new(n, d).ok())
    }

    proptest! {
        #[test]
        fn qint_sum_rule(m in 1u32..12, n in 1u32..12) {
            let lhs = qint(m + n);
            let rhs = &(&qint(m) * &LaurentPoly::q_pow(n as i32))
                + &(&qint(n) * &LaurentPoly::q_pow(-(m as i32)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn ring_axioms(a in arb_laurent(), b in arb_laurent(), c in arb_laurent()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn field_division(f in arb_ratfunc(), g in arb_ratfunc()) {
            prop_assume!(!g.is_zero());
            let h = &f * &g;
            prop_assert_eq!(h.checked_div(&g).unwrap(), f.clone());
            prop_assert_eq!(&f + &RatFunc::zero(), f.clone());
        }

        #[test]
        fn normalization_idempotent(f in arb_ratfunc()) {
            let again = RatFunc::new(f.numer().clone(), f.denom().clone()).unwrap();
            prop_assert_eq!(again, f);
        }

        #[test]
        fn gcd_divides_both(a in arb_laurent(), b in arb_laurent()) {
            let g = a.gcd(&b);
            prop_assume!(!g.is_zero());
            prop_assert!(a.try_div_exact(&g).is_some());
            prop_assert!(b.try_div_exact(&g).is_some());
        }
    }
}
