//! Brute-force enumeration of type Γ configurations.
//!
//! Branches are generated with arbitrary thickenings, not just admissible ones,
//! so the `chi = 1` count here is an independent check on both the partition
//! count and the infinite product.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::curveconfig::{
    config_euler_with, Branch, BranchKind, CurveClass, CurveConfig, Edge, MasterVertex,
    VertexCorrection,
};
use crate::partitions::{count_opd_configs, four_way_splits};
use crate::series::{banana_factors, product_expand, ClassVector, SeriesError, Sign, Trunc};

/// Default total-degree cap for the brute-force route.
pub const DEFAULT_ORACLE_CAP: u32 = 5;

/// Every branch of `kind` whose class is componentwise within `budget`, each
/// exactly once. Order is depth-first: a chain precedes its extensions, and
/// at each position the edge multiplicity and then the inside thickening increase.
///
/// Each edge uses at least one unit of budget, which bounds the search.
pub fn enumerate_branches(kind: BranchKind, budget: ClassVector) -> Vec<Branch> {
    let mut out = Vec::new();
    let mut chain = Vec::new();
    extend(kind, budget, &mut chain, &mut out);
    out
}

fn extend(kind: BranchKind, left: ClassVector, chain: &mut Vec<Edge>, out: &mut Vec<Branch>) {
    out.push(Branch::new(kind, chain.clone()).expect("generated edges are real"));
    let class = kind.class_at(chain.len());
    let available = match class {
        CurveClass::C1 => left.d1,
        CurveClass::C2 => left.d2,
    };
    for mult in 1..=available {
        let rest = match class {
            CurveClass::C1 => ClassVector::new(left.d1 - mult, left.d2),
            CurveClass::C2 => ClassVector::new(left.d1, left.d2 - mult),
        };
        for inside in 1..=mult {
            chain.push(Edge {
                inside,
                outside: mult + 1 - inside,
            });
            extend(kind, rest, chain, out);
            chain.pop();
        }
    }
}

fn branches_by_class(kind: BranchKind, budget: ClassVector) -> BTreeMap<ClassVector, Vec<Branch>> {
    let mut map: BTreeMap<ClassVector, Vec<Branch>> = BTreeMap::new();
    for b in enumerate_branches(kind, budget) {
        map.entry(b.class()).or_default().push(b);
    }
    map
}

/// Every configuration of class exactly `target`, thickenings unrestricted.
pub fn all_configs(target: ClassVector) -> Vec<CurveConfig> {
    let mut out = Vec::new();
    for_each_config(target, |c| out.push(c.clone()));
    out
}

fn for_each_config<F: FnMut(&CurveConfig)>(target: ClassVector, mut visit: F) {
    let pools: Vec<_> = BranchKind::ALL
        .into_iter()
        .map(|kind| branches_by_class(kind, target))
        .collect();
    let none = Vec::new();
    for split in four_way_splits(target) {
        let lists: Vec<&Vec<Branch>> = pools
            .iter()
            .zip(split)
            .map(|(pool, c)| pool.get(&c).unwrap_or(&none))
            .collect();
        for a in lists[0] {
            for b in lists[1] {
                for c in lists[2] {
                    for d in lists[3] {
                        let config = CurveConfig::from_branches([
                            a.clone(),
                            b.clone(),
                            c.clone(),
                            d.clone(),
                        ]);
                        visit(&config);
                    }
                }
            }
        }
    }
}

/// Configurations of class `target` with `chi(O_C) = 1` under `rule`.
pub fn configs_with_chi_one_with<V: VertexCorrection + ?Sized>(
    target: ClassVector,
    rule: &V,
) -> Vec<CurveConfig> {
    let mut out = Vec::new();
    for_each_config(target, |c| {
        if config_euler_with(c, rule) == 1 {
            out.push(c.clone());
        }
    });
    out
}

pub fn configs_with_chi_one(target: ClassVector) -> Vec<CurveConfig> {
    configs_with_chi_one_with(target, &MasterVertex)
}

/// Per-fiber naive count: configurations of class `target` with `chi = 1`.
pub fn count_chi_one(target: ClassVector) -> u64 {
    count_chi_one_with(target, &MasterVertex)
}

pub fn count_chi_one_with<V: VertexCorrection + ?Sized>(target: ClassVector, rule: &V) -> u64 {
    let mut n = 0;
    for_each_config(target, |c| {
        if config_euler_with(c, rule) == 1 {
            n += 1;
        }
    });
    n
}

/// Per-class counts from the three routes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeWayRow {
    pub class: ClassVector,
    /// Coefficient of the naive product.
    pub product: BigInt,
    /// Configurations assembled from four OPD partitions.
    pub partitions: BigInt,
    /// Brute-force `chi = 1` count; `None` above the oracle cap.
    pub oracle: Option<BigInt>,
}

impl ThreeWayRow {
    pub fn agrees(&self) -> bool {
        self.product == self.partitions && self.oracle.as_ref().is_none_or(|o| *o == self.product)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeWayReport {
    pub maxd: Trunc,
    pub oracle_cap: u32,
    pub rows: Vec<ThreeWayRow>,
}

impl ThreeWayReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(ThreeWayRow::agrees)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ThreeWayRow> {
        self.rows.iter().filter(|r| !r.agrees())
    }

    pub fn first_failure(&self) -> Option<&ThreeWayRow> {
        self.failures().next()
    }

    /// Number of classes checked by the brute-force route.
    pub fn oracle_checked(&self) -> usize {
        self.rows.iter().filter(|r| r.oracle.is_some()).count()
    }
}

/// Cross-checks product, partition and brute-force counts for every class in
/// `maxd`; the brute-force route only runs for classes with `d1 + d2 <= oracle_cap`.
pub fn verify_three_way(maxd: Trunc, oracle_cap: u32) -> Result<ThreeWayReport, SeriesError> {
    verify_three_way_with(maxd, oracle_cap, &MasterVertex)
}

pub fn verify_three_way_with<V: VertexCorrection + ?Sized>(
    maxd: Trunc,
    oracle_cap: u32,
    rule: &V,
) -> Result<ThreeWayReport, SeriesError> {
    let product = product_expand(banana_factors(Sign::Plus), maxd)?;
    let mut rows = Vec::new();
    for class in maxd.rectangle() {
        let oracle =
            (class.total() <= oracle_cap).then(|| BigInt::from(count_chi_one_with(class, rule)));
        rows.push(ThreeWayRow {
            class,
            product: product.coeff(class)?,
            partitions: count_opd_configs(class),
            oracle,
        });
    }
    Ok(ThreeWayReport {
        maxd,
        oracle_cap,
        rows,
    })
}
