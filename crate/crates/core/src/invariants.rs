//! Invariant tables and the identities they satisfy.
//!
//! The naive count of a class is 12 (one copy per singular fiber) times the
//! per-fiber count of `chi = 1` configurations; the Gopakumar-Vafa invariant
//! is the naive count with sign `(-1)^(d1+d2)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::oracle::count_chi_one;
use crate::partitions::count_opd_configs;
use crate::series::{
    banana_factors, product_expand, ClassVector, LaurentQP, SeriesError, Sign, Trunc,
};

/// Number of singular fibers, each contributing an identical count.
pub const SINGULAR_FIBERS: u32 = 12;

/// Coefficient of `[C3]` in every class handled here.
pub const C3_DEGREE: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("range {maxd} exceeds the brute-force cap d1 + d2 <= {cap}")]
    OracleCapExceeded { maxd: Trunc, cap: u32 },
    #[error("class {0} lies outside the table")]
    OutOfRange(ClassVector),
}

/// Which computation produced a table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Route {
    Product,
    Partitions,
    Oracle,
}

impl Route {
    pub const fn name(self) -> &'static str {
        match self {
            Route::Product => "product",
            Route::Partitions => "partitions",
            Route::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantEntry {
    pub naive: BigInt,
    pub signed: BigInt,
    pub route: Route,
}

/// Naive and signed invariants for every class in a rectangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantTable {
    maxd: Trunc,
    entries: BTreeMap<ClassVector, InvariantEntry>,
}

impl InvariantTable {
    pub fn maxd(&self) -> Trunc {
        self.maxd
    }

    pub fn get(&self, class: ClassVector) -> Option<&InvariantEntry> {
        self.entries.get(&class)
    }

    pub fn signed(&self, class: ClassVector) -> Option<&BigInt> {
        self.get(class).map(|e| &e.signed)
    }

    pub fn naive(&self, class: ClassVector) -> Option<&BigInt> {
        self.get(class).map(|e| &e.naive)
    }

    /// Entries ordered by `(d1, d2)`.
    pub fn entries(&self) -> impl Iterator<Item = (ClassVector, &InvariantEntry)> {
        self.entries.iter().map(|(&c, e)| (c, e))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Same values, ignoring which route produced them.
    pub fn same_values(&self, other: &InvariantTable) -> bool {
        self.maxd == other.maxd
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|((c1, e1), (c2, e2))| {
                    c1 == c2 && e1.naive == e2.naive && e1.signed == e2.signed
                })
    }
}

/// `(-1)^(d1+d2)`.
pub fn behrend_sign(class: ClassVector) -> i32 {
    if class.total().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn entry(class: ClassVector, per_fiber: BigInt, route: Route) -> InvariantEntry {
    let naive = per_fiber * SINGULAR_FIBERS;
    let signed = &naive * behrend_sign(class);
    InvariantEntry {
        naive,
        signed,
        route,
    }
}

/// Builds the table over `maxd` by the chosen route. The brute-force route
/// refuses ranges whose corner exceeds `oracle_cap`.
pub fn build_table(
    maxd: Trunc,
    route: Route,
    oracle_cap: u32,
) -> Result<InvariantTable, InvariantError> {
    let mut entries = BTreeMap::new();
    match route {
        Route::Product => {
            let g = product_expand(banana_factors(Sign::Plus), maxd)?;
            for class in maxd.rectangle() {
                entries.insert(class, entry(class, g.coeff(class)?, route));
            }
        }
        Route::Partitions => {
            for class in maxd.rectangle() {
                entries.insert(class, entry(class, count_opd_configs(class), route));
            }
        }
        Route::Oracle => {
            if maxd.total() > oracle_cap {
                return Err(InvariantError::OracleCapExceeded {
                    maxd,
                    cap: oracle_cap,
                });
            }
            for class in maxd.rectangle() {
                entries.insert(
                    class,
                    entry(class, BigInt::from(count_chi_one(class)), route),
                );
            }
        }
    }
    Ok(InvariantTable { maxd, entries })
}

/// Expansion of the weak Jacobi form of weight -2 and index 1, with
/// `q = e^(2πiτ)`, `p = e^(2πiz)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiExpansion {
    pub series: LaurentQP,
    pub weight: i32,
    pub index: u32,
}

impl JacobiExpansion {
    pub fn qtrunc(&self) -> u32 {
        self.series.qtrunc()
    }

    pub fn coeff(&self, n: u32, r: i32) -> Option<BigInt> {
        self.series.coeff(n, r)
    }

    /// `(c(n, r), c(n', r'))` pairs that break either `c(n, r) = c(n, -r)` or
    /// the index-1 elliptic shift `c(n, r) = c(n + r + 1, r + 2)`, for all
    /// indices inside the truncation.
    pub fn symmetry_violations(&self) -> Vec<((u32, i32), (u32, i32))> {
        let top = self.qtrunc();
        let mut bad = Vec::new();
        let span = top as i32 + 3;
        for n in 0..=top {
            for r in -span..=span {
                let here = self.coeff(n, r).expect("n within truncation");
                if self.coeff(n, -r) != Some(here.clone()) {
                    bad.push(((n, r), (n, -r)));
                }
                let shifted = i64::from(n) + i64::from(r) + 1;
                if (0..=i64::from(top)).contains(&shifted) {
                    let n2 = shifted as u32;
                    if self.coeff(n2, r + 2) != Some(here) {
                        bad.push(((n, r), (n2, r + 2)));
                    }
                }
            }
        }
        bad
    }
}

/// Jacobi index `(n, r) = (d1, d2 - d1 - 1)` of a class under `q = xy, p = y`.
pub fn jacobi_index(class: ClassVector) -> (u32, i32) {
    (class.d1, class.d2 as i32 - class.d1 as i32 - 1)
}

/// Inverse of [`jacobi_index`]; `None` if `d2` would be negative.
pub fn class_of_index(n: u32, r: i32) -> Option<ClassVector> {
    let d2 = i64::from(n) + i64::from(r) + 1;
    u32::try_from(d2).ok().map(|d2| ClassVector::new(n, d2))
}

/// `p^-1 (1-p)^2 prod_m (1 - q^m p^-1)^2 (1 - q^m p)^2 / (1 - q^m)^4` through `q^qtrunc`.
pub fn jacobi_phi(qtrunc: u32) -> JacobiExpansion {
    let int = BigInt::from;
    let mut phi = LaurentQP::from_terms(
        [((0, -1), int(1)), ((0, 0), int(-2)), ((0, 1), int(1))],
        qtrunc,
    );
    for m in 1..=qtrunc {
        let down = LaurentQP::from_terms([((0, 0), int(1)), ((m, -1), int(-1))], qtrunc);
        let up = LaurentQP::from_terms([((0, 0), int(1)), ((m, 1), int(-1))], qtrunc);
        // (1 - q^m)^-4 = sum_k C(k+3, 3) q^(mk)
        let inv = LaurentQP::from_terms(
            (0..=qtrunc / m).map(|k| {
                let k = i64::from(k);
                ((m * k as u32, 0), int((k + 1) * (k + 2) * (k + 3) / 6))
            }),
            qtrunc,
        );
        phi = phi.mul(&down).mul(&down).mul(&up).mul(&up).mul(&inv);
    }
    for n in 0..=qtrunc {
        if let Some((lo, hi)) = phi.p_support(n) {
            let bound = n as i32 + 1;
            assert!(
                -bound <= lo && hi <= bound,
                "q^{n} row has p-support [{lo}, {hi}] outside [-{bound}, {bound}]"
            );
        }
    }
    JacobiExpansion {
        series: phi,
        weight: -2,
        index: 1,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiMismatch {
    pub class: ClassVector,
    pub signed: BigInt,
    pub twelve_phi: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiReport {
    pub qtrunc: u32,
    pub compared: usize,
    pub mismatches: Vec<JacobiMismatch>,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Checks `n0(d1, d2) = 12 * c(d1, d2 - d1 - 1)` for every table entry with
/// `d1 <= qtrunc`. Coefficients of the form whose class falls outside the
/// table are not compared.
pub fn check_jacobi_identity(t: &InvariantTable, j: &JacobiExpansion) -> JacobiReport {
    let mut compared = 0;
    let mut mismatches = Vec::new();
    for (class, e) in t.entries() {
        if class.d1 > j.qtrunc() {
            continue;
        }
        let (n, r) = jacobi_index(class);
        let twelve_phi = j.coeff(n, r).expect("n within truncation") * SINGULAR_FIBERS;
        compared += 1;
        if twelve_phi != e.signed {
            mismatches.push(JacobiMismatch {
                class,
                signed: e.signed.clone(),
                twelve_phi,
            });
        }
    }
    JacobiReport {
        qtrunc: j.qtrunc(),
        compared,
        mismatches,
    }
}

/// `||β|| = 2 d1 + 2 d2 + 2 d1 d2 - d1^2 - d2^2 - 1`.
pub fn norm(c: ClassVector) -> i64 {
    let (a, b) = (i64::from(c.d1), i64::from(c.d2));
    2 * a + 2 * b + 2 * a * b - a * a - b * b - 1
}

/// `4n - r^2` at the Jacobi index of the class.
pub fn discriminant(c: ClassVector) -> i64 {
    let (n, r) = jacobi_index(c);
    4 * i64::from(n) - i64::from(r) * i64::from(r)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormViolation {
    /// Two classes of equal norm with different invariants.
    Value {
        norm: i64,
        first: ClassVector,
        first_value: BigInt,
        second: ClassVector,
        second_value: BigInt,
    },
    /// `4n - r^2` differs from the norm.
    Discriminant { class: ClassVector },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormGroup {
    pub value: BigInt,
    pub classes: Vec<ClassVector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormReport {
    pub groups: BTreeMap<i64, NormGroup>,
    pub violations: Vec<NormViolation>,
}

impl NormReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Groups the table by norm and checks each group carries a single invariant.
pub fn check_norm_invariance(t: &InvariantTable) -> NormReport {
    let mut groups: BTreeMap<i64, NormGroup> = BTreeMap::new();
    let mut violations = Vec::new();
    for (class, e) in t.entries() {
        let k = norm(class);
        if discriminant(class) != k {
            violations.push(NormViolation::Discriminant { class });
        }
        match groups.get_mut(&k) {
            None => {
                groups.insert(
                    k,
                    NormGroup {
                        value: e.signed.clone(),
                        classes: alloc::vec![class],
                    },
                );
            }
            Some(g) => {
                if g.value != e.signed {
                    violations.push(NormViolation::Value {
                        norm: k,
                        first: g.classes[0],
                        first_value: g.value.clone(),
                        second: class,
                        second_value: e.signed.clone(),
                    });
                }
                g.classes.push(class);
            }
        }
    }
    NormReport { groups, violations }
}

/// Genus-0 Gromov-Witten invariant `N = sum_{k | β} n(β/k) / k^3`.
///
/// `k` runs over the common divisors of `(d1, d2, 1)`; the `[C3]` coefficient
/// leaves only `k = 1`, so the sum is computed in general but always reduces to `n(β)`.
pub fn gw_from_gv(t: &InvariantTable, c: ClassVector) -> Result<BigRational, InvariantError> {
    if t.get(c).is_none() {
        return Err(InvariantError::OutOfRange(c));
    }
    let g = c.d1.gcd(&c.d2).gcd(&C3_DEGREE);
    let mut total = BigRational::zero();
    for k in (1..=g).filter(|k| g.is_multiple_of(*k)) {
        let sub = ClassVector::new(c.d1 / k, c.d2 / k);
        let n = t
            .signed(sub)
            .ok_or(InvariantError::OutOfRange(sub))?
            .clone();
        total += BigRational::new(n, BigInt::from(k).pow(3));
    }
    Ok(total)
}

/// `gw_from_gv` with denominator 1 unwrapped, for callers that expect an integer.
pub fn gw_integer(t: &InvariantTable, c: ClassVector) -> Result<Option<BigInt>, InvariantError> {
    let q = gw_from_gv(t, c)?;
    Ok(q.denom().is_one().then(|| q.numer().clone()))
}
