//! Truncated formal power series with exact integer coefficients.
//!
//! [`BiSeries`] is a bivariate series in `x`, `y` truncated to a rectangle
//! `d1 <= D1, d2 <= D2`. [`LaurentQP`] is a series in `q` (non-negative
//! exponents, truncated) whose coefficients are Laurent polynomials in `p`.
//!
//! Both keep a sparse canonical form: zero coefficients are never stored, so
//! structural equality is semantic equality.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

/// A fiber curve class `d1 [C1] + d2 [C2] + [C3]`. The `[C3]` coefficient is
/// always 1 and is not stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ClassVector {
    pub d1: u32,
    pub d2: u32,
}

impl ClassVector {
    pub const ZERO: ClassVector = ClassVector { d1: 0, d2: 0 };

    pub const fn new(d1: u32, d2: u32) -> Self {
        Self { d1, d2 }
    }

    pub const fn total(self) -> u32 {
        self.d1 + self.d2
    }

    /// Componentwise `self <= other`.
    pub const fn fits_in(self, other: ClassVector) -> bool {
        self.d1 <= other.d1 && self.d2 <= other.d2
    }

    pub fn checked_sub(self, other: ClassVector) -> Option<ClassVector> {
        Some(ClassVector {
            d1: self.d1.checked_sub(other.d1)?,
            d2: self.d2.checked_sub(other.d2)?,
        })
    }

    pub const fn swapped(self) -> Self {
        Self {
            d1: self.d2,
            d2: self.d1,
        }
    }

    /// All classes in the rectangle `[0, self.d1] x [0, self.d2]`, ordered by `(d1, d2)`.
    pub fn rectangle(self) -> impl Iterator<Item = ClassVector> {
        (0..=self.d1).flat_map(move |d1| (0..=self.d2).map(move |d2| ClassVector { d1, d2 }))
    }
}

impl fmt::Display for ClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.d1, self.d2)
    }
}

impl From<(u32, u32)> for ClassVector {
    fn from((d1, d2): (u32, u32)) -> Self {
        Self { d1, d2 }
    }
}

/// Rectangular truncation bound: exponents with `d1 <= D1` and `d2 <= D2`
/// are tracked exactly.
pub type Trunc = ClassVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("truncation bounds differ: {left} vs {right}")]
    TruncationMismatch { left: Trunc, right: Trunc },
    #[error("factor base monomial has exponent (0,0)")]
    ZeroExponent,
    #[error("power must be at least 1")]
    ZeroPower,
    #[error("coefficient {at} requested outside truncation {trunc}")]
    OutOfWindow { at: ClassVector, trunc: Trunc },
    #[error("factor {at} arrived after a factor of larger total degree {previous}")]
    UnorderedFactors { at: ClassVector, previous: u32 },
}

/// Truncated bivariate series over the integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries {
    coeffs: BTreeMap<(u32, u32), BigInt>,
    trunc: Trunc,
}

impl BiSeries {
    pub fn zero(trunc: Trunc) -> Self {
        Self {
            coeffs: BTreeMap::new(),
            trunc,
        }
    }

    /// The constant series 1.
    pub fn one(trunc: Trunc) -> Self {
        Self::monomial(BigInt::one(), ClassVector::ZERO, trunc)
    }

    /// `coeff * x^a y^b`; empty if the monomial falls outside the window.
    pub fn monomial(coeff: BigInt, at: ClassVector, trunc: Trunc) -> Self {
        let mut s = Self::zero(trunc);
        s.set(at, coeff);
        s
    }

    /// Builds a series from `(exponent, coefficient)` pairs, summing repeats
    /// and dropping anything outside the window.
    pub fn from_terms<I>(terms: I, trunc: Trunc) -> Self
    where
        I: IntoIterator<Item = (ClassVector, BigInt)>,
    {
        let mut s = Self::zero(trunc);
        for (at, c) in terms {
            s.add_at(at, &c);
        }
        s
    }

    pub fn trunc(&self) -> Trunc {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of stored (non-zero) terms.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exact coefficient at `at`. Asking outside the window is an error, since
    /// the coefficient there is unknown rather than zero.
    pub fn coeff(&self, at: ClassVector) -> Result<BigInt, SeriesError> {
        if !at.fits_in(self.trunc) {
            return Err(SeriesError::OutOfWindow {
                at,
                trunc: self.trunc,
            });
        }
        Ok(self
            .coeffs
            .get(&(at.d1, at.d2))
            .cloned()
            .unwrap_or_else(BigInt::zero))
    }

    /// Non-zero terms in lexicographic `(d1, d2)` order.
    pub fn terms(&self) -> impl Iterator<Item = (ClassVector, &BigInt)> {
        self.coeffs
            .iter()
            .map(|(&(d1, d2), c)| (ClassVector { d1, d2 }, c))
    }

    fn set(&mut self, at: ClassVector, c: BigInt) {
        if !at.fits_in(self.trunc) {
            return;
        }
        if c.is_zero() {
            self.coeffs.remove(&(at.d1, at.d2));
        } else {
            self.coeffs.insert((at.d1, at.d2), c);
        }
    }

    fn add_at(&mut self, at: ClassVector, c: &BigInt) {
        if !at.fits_in(self.trunc) || c.is_zero() {
            return;
        }
        let key = (at.d1, at.d2);
        let entry = self.coeffs.entry(key).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    fn check_trunc(&self, other: &BiSeries) -> Result<(), SeriesError> {
        if self.trunc != other.trunc {
            return Err(SeriesError::TruncationMismatch {
                left: self.trunc,
                right: other.trunc,
            });
        }
        Ok(())
    }

    /// Restricts to a smaller window. Bounds larger than the current ones are
    /// clamped, never extended.
    pub fn truncate(&self, trunc: Trunc) -> BiSeries {
        let trunc = ClassVector::new(trunc.d1.min(self.trunc.d1), trunc.d2.min(self.trunc.d2));
        BiSeries {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&(a, b), _)| a <= trunc.d1 && b <= trunc.d2)
                .map(|(&k, c)| (k, c.clone()))
                .collect(),
            trunc,
        }
    }

    pub fn try_add(&self, other: &BiSeries) -> Result<BiSeries, SeriesError> {
        self.check_trunc(other)?;
        let mut out = self.clone();
        for (at, c) in other.terms() {
            out.add_at(at, c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> BiSeries {
        BiSeries {
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, -c)).collect(),
            trunc: self.trunc,
        }
    }

    /// Product of two series sharing a truncation bound.
    pub fn try_mul(&self, other: &BiSeries) -> Result<BiSeries, SeriesError> {
        self.check_trunc(other)?;
        let t = self.trunc;
        let mut out = BiSeries::zero(t);
        for (&(a1, b1), c1) in &self.coeffs {
            for (&(a2, b2), c2) in &other.coeffs {
                let at = ClassVector::new(a1 + a2, b1 + b2);
                if at.fits_in(t) {
                    out.add_at(at, &(c1 * c2));
                }
            }
        }
        Ok(out)
    }

    /// Product after truncating both operands to the componentwise minimum bound.
    pub fn mul_reconciled(&self, other: &BiSeries) -> BiSeries {
        let t = ClassVector::new(
            self.trunc.d1.min(other.trunc.d1),
            self.trunc.d2.min(other.trunc.d2),
        );
        self.truncate(t)
            .try_mul(&other.truncate(t))
            .expect("operands share the reconciled bound")
    }

    /// `x -> -x, y -> -y`: the coefficient at `(d1, d2)` picks up `(-1)^(d1+d2)`.
    pub fn substitute_neg(&self) -> BiSeries {
        BiSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&(a, b), c)| ((a, b), if (a + b) % 2 == 1 { -c } else { c.clone() }))
                .collect(),
            trunc: self.trunc,
        }
    }

    /// `x <-> y`; the truncation bound is swapped with it.
    pub fn swap_variables(&self) -> BiSeries {
        BiSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&(a, b), c)| ((b, a), c.clone()))
                .collect(),
            trunc: self.trunc.swapped(),
        }
    }
}

impl Mul for &BiSeries {
    type Output = BiSeries;

    fn mul(self, rhs: &BiSeries) -> BiSeries {
        self.mul_reconciled(rhs)
    }
}

/// Stable text form: one `c * x^a y^b` term per line, sorted by `(a, b)`.
/// The zero series renders as `0`.
impl fmt::Display for BiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return writeln!(f, "0");
        }
        for (&(a, b), c) in &self.coeffs {
            writeln!(f, "{c} * x^{a} y^{b}")?;
        }
        Ok(())
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Expands `(1 - x^e1 y^e2)^(-power)` as `sum_k C(k+power-1, power-1) x^(k e1) y^(k e2)`.
pub fn geom_inverse(exp: ClassVector, power: u32, trunc: Trunc) -> Result<BiSeries, SeriesError> {
    if exp == ClassVector::ZERO {
        return Err(SeriesError::ZeroExponent);
    }
    if power == 0 {
        return Err(SeriesError::ZeroPower);
    }
    let mut out = BiSeries::zero(trunc);
    let p = u64::from(power);
    for k in 0u32.. {
        let at = ClassVector::new(k * exp.d1, k * exp.d2);
        if !at.fits_in(trunc) {
            break;
        }
        out.set(at, binomial(u64::from(k) + p - 1, p - 1));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// One factor `(1 ± x^a y^b)^multiplicity` of an infinite product. A negative
/// multiplicity is an inverse power.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Factor {
    pub sign: Sign,
    pub exp: ClassVector,
    pub multiplicity: i32,
}

impl Factor {
    pub const fn new(sign: Sign, exp: ClassVector, multiplicity: i32) -> Self {
        Self {
            sign,
            exp,
            multiplicity,
        }
    }
}

/// Expands `prod (1 ± x^a y^b)^c` exactly inside `trunc`.
///
/// The factors must arrive in non-decreasing order of `a + b`; expansion stops
/// at the first factor with `a + b > D1 + D2`, so infinite generators are fine.
/// Factors whose base monomial misses the window are skipped.
pub fn product_expand<I>(factors: I, trunc: Trunc) -> Result<BiSeries, SeriesError>
where
    I: IntoIterator<Item = Factor>,
{
    let rows = trunc.d1 as usize + 1;
    let cols = trunc.d2 as usize + 1;
    let mut dense = vec![BigInt::zero(); rows * cols];
    dense[0] = BigInt::one();

    let mut previous = 0u32;
    for factor in factors {
        let exp = factor.exp;
        if exp == ClassVector::ZERO {
            return Err(SeriesError::ZeroExponent);
        }
        if exp.total() < previous {
            return Err(SeriesError::UnorderedFactors { at: exp, previous });
        }
        previous = exp.total();
        if exp.total() > trunc.total() {
            break;
        }
        if !exp.fits_in(trunc) {
            continue;
        }
        let (da, db) = (exp.d1 as usize, exp.d2 as usize);
        let plus = factor.sign == Sign::Plus;
        for _ in 0..factor.multiplicity.unsigned_abs() {
            if factor.multiplicity > 0 {
                // multiply by (1 ± u): high to low so sources are still old values
                for i in (da..rows).rev() {
                    for j in (db..cols).rev() {
                        let src = dense[(i - da) * cols + (j - db)].clone();
                        apply(&mut dense[i * cols + j], &src, plus);
                    }
                }
            } else {
                // divide by (1 ± u): low to high so sources are already divided
                for i in da..rows {
                    for j in db..cols {
                        let src = dense[(i - da) * cols + (j - db)].clone();
                        apply(&mut dense[i * cols + j], &src, !plus);
                    }
                }
            }
        }
    }

    let mut out = BiSeries::zero(trunc);
    for (idx, c) in dense.into_iter().enumerate() {
        if !c.is_zero() {
            out.coeffs
                .insert(((idx / cols) as u32, (idx % cols) as u32), c);
        }
    }
    Ok(out)
}

fn apply(target: &mut BigInt, src: &BigInt, add: bool) {
    if src.is_zero() {
        return;
    }
    if add {
        *target += src;
    } else {
        *target -= src;
    }
}

/// The factors of `prod_m (1 ± x^m y^(m-1))^2 (1 ± x^(m-1) y^m)^2 (1 - x^m y^m)^(-4)`,
/// ordered by total degree. `Sign::Plus` gives the naive count, `Sign::Minus`
/// the signed invariants (before the overall factor 12).
pub fn banana_factors(sign: Sign) -> impl Iterator<Item = Factor> {
    (1u32..).flat_map(move |m| {
        [
            Factor::new(sign, ClassVector::new(m, m - 1), 2),
            Factor::new(sign, ClassVector::new(m - 1, m), 2),
            Factor::new(Sign::Minus, ClassVector::new(m, m), -4),
        ]
    })
}

/// Series in `q` (exponent `0..=qtrunc`) with Laurent-polynomial coefficients in `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentQP {
    coeffs: BTreeMap<(u32, i32), BigInt>,
    qtrunc: u32,
}

impl LaurentQP {
    pub fn zero(qtrunc: u32) -> Self {
        Self {
            coeffs: BTreeMap::new(),
            qtrunc,
        }
    }

    pub fn one(qtrunc: u32) -> Self {
        Self::monomial(BigInt::one(), 0, 0, qtrunc)
    }

    /// `coeff * q^n p^r`; empty if `n > qtrunc`.
    pub fn monomial(coeff: BigInt, n: u32, r: i32, qtrunc: u32) -> Self {
        let mut s = Self::zero(qtrunc);
        s.add_at(n, r, &coeff);
        s
    }

    pub fn from_terms<I>(terms: I, qtrunc: u32) -> Self
    where
        I: IntoIterator<Item = ((u32, i32), BigInt)>,
    {
        let mut s = Self::zero(qtrunc);
        for ((n, r), c) in terms {
            s.add_at(n, r, &c);
        }
        s
    }

    pub fn qtrunc(&self) -> u32 {
        self.qtrunc
    }

    fn add_at(&mut self, n: u32, r: i32, c: &BigInt) {
        if n > self.qtrunc || c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry((n, r)).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&(n, r));
        }
    }

    /// Coefficient of `q^n p^r`; `None` when `n` lies beyond the truncation.
    pub fn coeff(&self, n: u32, r: i32) -> Option<BigInt> {
        if n > self.qtrunc {
            return None;
        }
        Some(
            self.coeffs
                .get(&(n, r))
                .cloned()
                .unwrap_or_else(BigInt::zero),
        )
    }

    /// Non-zero `p`-terms of the `q^n` row, by increasing `r`.
    pub fn row(&self, n: u32) -> Vec<(i32, BigInt)> {
        self.coeffs
            .range((n, i32::MIN)..=(n, i32::MAX))
            .map(|(&(_, r), c)| (r, c.clone()))
            .collect()
    }

    /// Smallest and largest `p` exponent in the `q^n` row, if the row is non-zero.
    pub fn p_support(&self, n: u32) -> Option<(i32, i32)> {
        let mut it = self.coeffs.range((n, i32::MIN)..=(n, i32::MAX));
        let lo = it.next()?.0 .1;
        let hi = it.next_back().map_or(lo, |(k, _)| k.1);
        Some((lo, hi))
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, i32), &BigInt)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    /// Product truncated at the smaller of the two `q` bounds.
    pub fn mul(&self, other: &LaurentQP) -> LaurentQP {
        let qtrunc = self.qtrunc.min(other.qtrunc);
        let mut out = LaurentQP::zero(qtrunc);
        for (&(n1, r1), c1) in &self.coeffs {
            for (&(n2, r2), c2) in &other.coeffs {
                if n1 + n2 <= qtrunc {
                    out.add_at(n1 + n2, r1 + r2, &(c1 * c2));
                }
            }
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> LaurentQP {
        let mut out = LaurentQP::zero(self.qtrunc);
        for (&(n, r), c) in &self.coeffs {
            out.add_at(n, r, &(c * k));
        }
        out
    }
}
