//! Partitions with distinct odd parts (OPD) and their correspondence with
//! admissible branches.
//!
//! Draw an admissible branch as a Young diagram whose rows are the inside
//! thickenings of its edges. Rows alternate between the two curve classes
//! ("dark" rows 1, 3, 5, ... cover the class of the first edge). Read by
//! columns, the diagram is a partition whose odd parts are distinct, and every
//! OPD partition arises this way exactly once.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::curveconfig::{chain_is_admissible, Branch, BranchKind, CurveConfig, Edge};
use crate::series::{product_expand, BiSeries, ClassVector, Factor, Sign, Trunc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("partition {0} repeats an odd part")]
    NotOpd(Partition),
    #[error("partition parts must be positive")]
    ZeroPart,
}

/// Integer partition, parts stored weakly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts the parts into canonical order. Zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self, PartitionError> {
        if parts.contains(&0) {
            return Err(PartitionError::ZeroPart);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self(parts))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Number of odd parts.
    pub fn odd_parts(&self) -> u32 {
        self.0.iter().filter(|&&p| p % 2 == 1).count() as u32
    }

    pub fn is_opd(&self) -> bool {
        // parts are sorted, so a repeated odd value shows up as an adjacent pair
        !self.0.windows(2).any(|w| w[0] == w[1] && w[0] % 2 == 1)
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.0.first().copied().unwrap_or(0);
        Partition(
            (1..=width)
                .map(|k| self.0.iter().take_while(|&&p| p >= k).count() as u32)
                .collect(),
        )
    }

    /// `(dark, light) = ((|λ| + OP(λ)) / 2, (|λ| - OP(λ)) / 2)`.
    pub fn box_bidegree(&self) -> Result<(u32, u32), PartitionError> {
        if !self.is_opd() {
            return Err(PartitionError::NotOpd(self.clone()));
        }
        let (size, odd) = (self.size(), self.odd_parts());
        Ok(((size + odd) / 2, (size - odd) / 2))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// All OPD partitions with the given box bidegree, in lexicographically
/// descending order of their parts.
pub fn enumerate_opd(dark: u32, light: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    if light > dark {
        return out;
    }
    let size = dark + light;
    let odd = dark - light;
    let mut stack = Vec::new();
    fill(size, size, odd, &mut stack, &mut out);
    out
}

fn fill(
    remaining: u32,
    max_part: u32,
    odd_left: u32,
    parts: &mut Vec<u32>,
    out: &mut Vec<Partition>,
) {
    if remaining == 0 {
        if odd_left == 0 {
            out.push(Partition(parts.clone()));
        }
        return;
    }
    // each outstanding odd part needs at least one box
    if odd_left > remaining {
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        let odd = part % 2 == 1;
        if odd && (odd_left == 0 || parts.last() == Some(&part)) {
            continue;
        }
        parts.push(part);
        fill(
            remaining - part,
            part,
            odd_left - u32::from(odd),
            parts,
            out,
        );
        parts.pop();
    }
}

/// Branch whose edges have inside thickenings given by the rows of the Young
/// diagram with column heights `p`, all outside thickenings 1.
pub fn opd_to_branch(p: &Partition, kind: BranchKind) -> Result<Branch, PartitionError> {
    if !p.is_opd() {
        return Err(PartitionError::NotOpd(p.clone()));
    }
    let edges = p
        .conjugate()
        .0
        .into_iter()
        .map(|row| Edge {
            inside: row,
            outside: 1,
        })
        .collect();
    Ok(Branch::new(kind, edges).expect("rows of a Young diagram are positive"))
}

/// Inverse of [`opd_to_branch`]: the column heights of the Young diagram whose
/// rows are the inside thickenings. `None` unless the branch is admissible.
pub fn branch_to_opd(b: &Branch) -> Option<Partition> {
    if !chain_is_admissible(b.edges()) {
        return None;
    }
    let rows = b.edges().iter().map(|e| e.inside).collect();
    Some(Partition(rows).conjugate())
}

/// Per-branch generating function `prod_n (1 + x^n y^(n-1)) / (1 - x^n y^n)`
/// for a branch starting over `C1`, with `x` and `y` exchanged for `C2`.
pub fn gf_opd_branch(kind: BranchKind, trunc: Trunc) -> BiSeries {
    let factors = (1u32..).flat_map(move |n| {
        [
            Factor::new(Sign::Plus, kind.route(n, n - 1), 1),
            Factor::new(Sign::Minus, ClassVector::new(n, n), -1),
        ]
    });
    product_expand(factors, trunc).expect("factor stream is ordered and never (0,0)")
}

/// Number of OPD partitions for each `(dark, light)` with `dark, light <= bound`.
fn opd_counts(bound: u32) -> BTreeMap<(u32, u32), u64> {
    let mut counts = BTreeMap::new();
    for dark in 0..=bound {
        for light in 0..=bound {
            counts.insert((dark, light), enumerate_opd(dark, light).len() as u64);
        }
    }
    counts
}

/// Splits of `target` into four classes, one per [`BranchKind::ALL`] slot.
pub(crate) fn four_way_splits(target: ClassVector) -> impl Iterator<Item = [ClassVector; 4]> {
    target.rectangle().flat_map(move |a| {
        let rest = target.checked_sub(a).expect("inside rectangle");
        rest.rectangle().flat_map(move |b| {
            let rest = rest.checked_sub(b).expect("inside rectangle");
            rest.rectangle().map(move |c| {
                let d = rest.checked_sub(c).expect("inside rectangle");
                [a, b, c, d]
            })
        })
    })
}

fn unroute(kind: BranchKind, c: ClassVector) -> (u32, u32) {
    // routing either keeps or swaps the pair, so it is its own inverse
    let routed = kind.route(c.d1, c.d2);
    (routed.d1, routed.d2)
}

/// Number of configurations of class `target` whose four branches all come
/// from OPD partitions: the sum over four-way splits of the product of per-branch counts.
pub fn count_opd_configs(target: ClassVector) -> BigInt {
    let counts = opd_counts(target.d1.max(target.d2));
    let mut total = BigInt::zero();
    for split in four_way_splits(target) {
        let mut prod = BigInt::from(1u8);
        for (kind, c) in BranchKind::ALL.into_iter().zip(split) {
            let (dark, light) = unroute(kind, c);
            let k = counts[&(dark, light)];
            if k == 0 {
                prod = BigInt::zero();
                break;
            }
            prod *= k;
        }
        total += prod;
    }
    total
}

/// The configurations counted by [`count_opd_configs`], built branch by branch
/// with [`opd_to_branch`].
pub fn opd_configs(target: ClassVector) -> Vec<CurveConfig> {
    let mut out = Vec::new();
    for split in four_way_splits(target) {
        let per_kind: Vec<Vec<Branch>> = BranchKind::ALL
            .into_iter()
            .zip(split)
            .map(|(kind, c)| {
                let (dark, light) = unroute(kind, c);
                enumerate_opd(dark, light)
                    .iter()
                    .map(|p| opd_to_branch(p, kind).expect("enumerated partitions are OPD"))
                    .collect()
            })
            .collect();
        for a in &per_kind[0] {
            for b in &per_kind[1] {
                for c in &per_kind[2] {
                    for d in &per_kind[3] {
                        out.push(CurveConfig::from_branches([
                            a.clone(),
                            b.clone(),
                            c.clone(),
                            d.clone(),
                        ]));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curveconfig::{branch_euler_closed, branch_euler_master, chain_is_admissible};
    use alloc::vec;

    fn part(p: &[u32]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn opd_predicate() {
        assert!(part(&[3]).is_opd());
        assert!(part(&[2, 1]).is_opd());
        assert!(!part(&[1, 1, 1]).is_opd());
        assert!(Partition::empty().is_opd());
        assert!(part(&[4, 4, 2]).is_opd());
    }

    #[test]
    fn bidegrees() {
        assert_eq!(part(&[3]).box_bidegree(), Ok((2, 1)));
        assert_eq!(part(&[2, 1]).box_bidegree(), Ok((2, 1)));
        assert_eq!(Partition::empty().box_bidegree(), Ok((0, 0)));
        assert!(matches!(
            part(&[1, 1]).box_bidegree(),
            Err(PartitionError::NotOpd(_))
        ));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_opd(2, 1), vec![part(&[3]), part(&[2, 1])]);
        assert_eq!(enumerate_opd(1, 0), vec![part(&[1])]);
        assert_eq!(enumerate_opd(0, 0), vec![Partition::empty()]);
        assert!(enumerate_opd(2, 0).is_empty());
        assert!(enumerate_opd(0, 1).is_empty());
    }

    #[test]
    fn branch_images() {
        let b = opd_to_branch(&part(&[3]), BranchKind::UpperQ).unwrap();
        assert_eq!(b.edges(), &[Edge::REDUCED; 3]);
        let b = opd_to_branch(&part(&[2, 1]), BranchKind::UpperQ).unwrap();
        assert_eq!(
            b.edges(),
            &[
                Edge {
                    inside: 2,
                    outside: 1
                },
                Edge::REDUCED
            ]
        );
        assert_eq!(branch_euler_master(&b), 1);
        assert!(opd_to_branch(&Partition::empty(), BranchKind::UpperQ)
            .unwrap()
            .is_empty());
        assert!(opd_to_branch(&part(&[1, 1]), BranchKind::UpperQ).is_err());
    }

    #[test]
    fn generating_function_examples() {
        let t = ClassVector::new(4, 4);
        let g = gf_opd_branch(BranchKind::UpperQ, t);
        assert_eq!(g.coeff(ClassVector::new(2, 1)).unwrap(), BigInt::from(2));
        assert_eq!(g.coeff(ClassVector::ZERO).unwrap(), BigInt::from(1));
        let g2 = gf_opd_branch(BranchKind::LowerQ, t);
        assert_eq!(g2, g.swap_variables());
    }

    #[test]
    fn enumeration_matches_generating_function() {
        let t = ClassVector::new(8, 8);
        for kind in [BranchKind::UpperQ, BranchKind::UpperP] {
            let g = gf_opd_branch(kind, t);
            for c in t.rectangle().filter(|c| c.total() <= 8) {
                let (dark, light) = unroute(kind, c);
                let n = enumerate_opd(dark, light).len();
                assert_eq!(g.coeff(c).unwrap(), BigInt::from(n), "{kind:?} {c}");
            }
        }
    }

    #[test]
    fn witnesses_map_to_admissible_branches() {
        for dark in 0..=8u32 {
            for light in 0..=(8 - dark) {
                for p in enumerate_opd(dark, light) {
                    assert_eq!(p.box_bidegree(), Ok((dark, light)));
                    let b = opd_to_branch(&p, BranchKind::LowerP).unwrap();
                    assert!(chain_is_admissible(b.edges()), "{p}");
                    assert_eq!(branch_euler_master(&b), 1, "{p}");
                    assert_eq!(branch_euler_closed(&b), 1, "{p}");
                    assert_eq!(b.class(), ClassVector::new(dark, light));
                }
            }
        }
    }

    #[test]
    fn branch_round_trip() {
        for p in enumerate_opd(6, 3) {
            let b = opd_to_branch(&p, BranchKind::LowerQ).unwrap();
            assert_eq!(branch_to_opd(&b), Some(p));
        }
        let thick = Branch::from_pairs(BranchKind::UpperQ, &[(1, 2)]).unwrap();
        assert_eq!(branch_to_opd(&thick), None);
    }

    #[test]
    fn conjugation_is_an_involution() {
        for p in enumerate_opd(5, 3) {
            assert_eq!(p.conjugate().conjugate(), p);
            assert_eq!(p.conjugate().size(), p.size());
        }
    }

    #[test]
    fn config_count_matches_materialized_list() {
        for c in ClassVector::new(3, 3).rectangle() {
            assert_eq!(
                count_opd_configs(c),
                BigInt::from(opd_configs(c).len()),
                "{c}"
            );
        }
        assert_eq!(count_opd_configs(ClassVector::new(1, 1)), BigInt::from(8));
        assert_eq!(count_opd_configs(ClassVector::new(2, 1)), BigInt::from(12));
    }
}
