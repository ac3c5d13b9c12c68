//! Torus-fixed thickened curve configurations of type Γ and the Euler
//! characteristic of their structure sheaves.
//!
//! A configuration is the reduced edge `e0` (lying over `C3`) plus four
//! branches hanging off its two endpoints `q0` and `p0`. Each branch is a chain
//! of edges alternating between covers of `C1` and `C2`; every edge carries a
//! thickening `(inside, outside)`. Consecutive edges are grouped in pairs
//! `(e1, e2), (e3, e4), ...`; the inside direction of an edge is the plane it
//! shares with its pair partner.

use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::series::ClassVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("edge thickening ({inside},{outside}) is not a real edge")]
    NotARealEdge { inside: u32, outside: u32 },
}

/// Thickening lengths of one edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub inside: u32,
    pub outside: u32,
}

impl Edge {
    /// Placeholder completing an odd-length branch to whole pairs.
    pub const EMPTY: Edge = Edge {
        inside: 0,
        outside: 1,
    };

    pub const REDUCED: Edge = Edge {
        inside: 1,
        outside: 1,
    };

    /// A real edge; both lengths must be at least 1.
    pub fn new(inside: u32, outside: u32) -> Result<Self, ConfigError> {
        if inside == 0 || outside == 0 {
            return Err(ConfigError::NotARealEdge { inside, outside });
        }
        Ok(Self { inside, outside })
    }

    pub const fn is_empty(self) -> bool {
        self.inside == 0
    }

    /// Length of the generic stalk, i.e. the multiple of `[C_i]` this edge pushes forward to.
    pub const fn multiplicity(self) -> u32 {
        self.inside + self.outside - 1
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.inside, self.outside)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CurveClass {
    C1,
    C2,
}

impl CurveClass {
    pub const fn other(self) -> Self {
        match self {
            CurveClass::C1 => CurveClass::C2,
            CurveClass::C2 => CurveClass::C1,
        }
    }
}

/// Endpoint of `e0` a branch is attached to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Q,
    P,
}

/// Attachment type of a branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BranchKind {
    UpperQ,
    LowerQ,
    UpperP,
    LowerP,
}

impl BranchKind {
    pub const ALL: [BranchKind; 4] = [
        BranchKind::UpperQ,
        BranchKind::LowerQ,
        BranchKind::UpperP,
        BranchKind::LowerP,
    ];

    /// Class covered by the edge touching `e0`.
    pub const fn first_class(self) -> CurveClass {
        match self {
            BranchKind::UpperQ | BranchKind::LowerP => CurveClass::C1,
            BranchKind::LowerQ | BranchKind::UpperP => CurveClass::C2,
        }
    }

    pub const fn side(self) -> Side {
        match self {
            BranchKind::UpperQ | BranchKind::LowerQ => Side::Q,
            BranchKind::UpperP | BranchKind::LowerP => Side::P,
        }
    }

    pub const fn index(self) -> usize {
        self as usize
    }

    pub const fn label(self) -> &'static str {
        match self {
            BranchKind::UpperQ => "uq",
            BranchKind::LowerQ => "lq",
            BranchKind::UpperP => "up",
            BranchKind::LowerP => "lp",
        }
    }

    /// Class covered by the edge at 0-based position `i`.
    pub const fn class_at(self, i: usize) -> CurveClass {
        if i.is_multiple_of(2) {
            self.first_class()
        } else {
            self.first_class().other()
        }
    }

    /// Routes a `(first-class, second-class)` count pair to `(d1, d2)`.
    pub const fn route(self, first: u32, second: u32) -> ClassVector {
        match self.first_class() {
            CurveClass::C1 => ClassVector::new(first, second),
            CurveClass::C2 => ClassVector::new(second, first),
        }
    }
}

/// A chain of real edges; index 0 is the edge touching `e0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Branch {
    kind: BranchKind,
    edges: Vec<Edge>,
}

impl Branch {
    pub fn empty(kind: BranchKind) -> Self {
        Self {
            kind,
            edges: Vec::new(),
        }
    }

    pub fn new(kind: BranchKind, edges: Vec<Edge>) -> Result<Self, ConfigError> {
        if let Some(e) = edges.iter().find(|e| e.inside == 0 || e.outside == 0) {
            return Err(ConfigError::NotARealEdge {
                inside: e.inside,
                outside: e.outside,
            });
        }
        Ok(Self { kind, edges })
    }

    /// Convenience constructor from `(inside, outside)` pairs.
    pub fn from_pairs(kind: BranchKind, pairs: &[(u32, u32)]) -> Result<Self, ConfigError> {
        let edges = pairs
            .iter()
            .map(|&(m, n)| Edge::new(m, n))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { kind, edges })
    }

    pub fn kind(&self) -> BranchKind {
        self.kind
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn class(&self) -> ClassVector {
        branch_class(self.kind, &self.edges)
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.kind.label())?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

fn branch_class(kind: BranchKind, edges: &[Edge]) -> ClassVector {
    let (mut first, mut second) = (0, 0);
    for (i, e) in edges.iter().enumerate() {
        if i % 2 == 0 {
            first += e.multiplicity();
        } else {
            second += e.multiplicity();
        }
    }
    kind.route(first, second)
}

/// Four branches around `e0`, stored in [`BranchKind::ALL`] order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurveConfig {
    branches: [Branch; 4],
}

impl Default for CurveConfig {
    fn default() -> Self {
        Self::empty()
    }
}

impl CurveConfig {
    /// `e0` alone.
    pub fn empty() -> Self {
        Self {
            branches: BranchKind::ALL.map(Branch::empty),
        }
    }

    /// Builds a configuration; each branch goes to the slot of its kind, later
    /// branches of the same kind replace earlier ones.
    pub fn from_branches<I: IntoIterator<Item = Branch>>(branches: I) -> Self {
        let mut c = Self::empty();
        for b in branches {
            let i = b.kind.index();
            c.branches[i] = b;
        }
        c
    }

    pub fn branch(&self, kind: BranchKind) -> &Branch {
        &self.branches[kind.index()]
    }

    pub fn branches(&self) -> &[Branch; 4] {
        &self.branches
    }
}

/// Canonical text form: `uq[..] lq[..] up[..] lp[..]` with `(inside,outside)` edges.
impl fmt::Display for CurveConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.branches.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Thickening labels at a 3-valent vertex with edges along the x, y, z axes.
///
/// Each pair holds the thickenings of two edges in the coordinate plane they
/// span: `(m, r)` for the xy-plane (`m` from the x-edge, `r` from the y-edge),
/// `(s, a)` for the yz-plane and `(b, n)` for the zx-plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VertexLabels {
    pub m: u32,
    pub r: u32,
    pub s: u32,
    pub a: u32,
    pub b: u32,
    pub n: u32,
}

fn tri(k: u32) -> i64 {
    let k = i64::from(k);
    k * (k + 1) / 2
}

/// `E = C(m+1,2) + C(n+1,2) - 1`, the Euler characteristic of a thickened edge.
pub fn edge_euler(e: Edge) -> Result<i64, ConfigError> {
    if e.inside == 0 || e.outside == 0 {
        return Err(ConfigError::NotARealEdge {
            inside: e.inside,
            outside: e.outside,
        });
    }
    Ok(tri(e.inside) + tri(e.outside) - 1)
}

/// Vertex correction with three incident edges: sum over the coordinate planes
/// of the product of the two thickenings in that plane, minus 1.
pub fn vertex_euler_3(v: VertexLabels) -> i64 {
    let p = |x: u32, y: u32| i64::from(x) * i64::from(y);
    p(v.m, v.r) + p(v.s, v.a) + p(v.b, v.n) - 1
}

/// Vertex correction with two incident edges: `m, r` are their thickenings in
/// the shared plane, `n, s` the remaining ones.
pub fn vertex_euler_2(m: u32, r: u32, n: u32, s: u32) -> i64 {
    i64::from(m) * i64::from(r) + i64::from(n.min(s)) - 1
}

/// Correction subtracted at a 2-valent vertex between consecutive branch edges.
///
/// The Euler calculus is generic over this so that a deliberately wrong rule
/// can be fed through the whole pipeline in mutation tests.
pub trait VertexCorrection {
    fn two_valent(&self, shared_a: u32, shared_b: u32, other_a: u32, other_b: u32) -> i64;
}

/// The correct rule, [`vertex_euler_2`].
#[derive(Clone, Copy, Debug, Default)]
pub struct MasterVertex;

impl VertexCorrection for MasterVertex {
    fn two_valent(&self, m: u32, r: u32, n: u32, s: u32) -> i64 {
        vertex_euler_2(m, r, n, s)
    }
}

impl<F> VertexCorrection for F
where
    F: Fn(u32, u32, u32, u32) -> i64,
{
    fn two_valent(&self, m: u32, r: u32, n: u32, s: u32) -> i64 {
        self(m, r, n, s)
    }
}

/// Sum of vertex corrections between consecutive edges of a chain.
///
/// Within a pair (`p_i`, between edges `2i-1` and `2i`) the shared plane holds
/// the inside thickenings; across pairs (`q_i`) it holds the outside ones.
fn interior_corrections<V: VertexCorrection + ?Sized>(edges: &[Edge], rule: &V) -> i64 {
    edges
        .windows(2)
        .enumerate()
        .map(|(j, w)| {
            let (a, b) = (w[0], w[1]);
            if j % 2 == 0 {
                rule.two_valent(a.inside, b.inside, a.outside, b.outside)
            } else {
                rule.two_valent(a.outside, b.outside, a.inside, b.inside)
            }
        })
        .sum()
}

fn edge_sum(edges: &[Edge]) -> i64 {
    edges
        .iter()
        .map(|&e| tri(e.inside) + tri(e.outside) - 1)
        .sum()
}

/// `chi(O_{e0 ∪ branch})` by inclusion-exclusion over edges and vertices:
/// `1 + sum E - m1 - sum of interior vertex corrections`. Returns 1 for the
/// empty chain. Edges must be real.
pub fn master_euler_with<V: VertexCorrection + ?Sized>(edges: &[Edge], rule: &V) -> i64 {
    let Some(first) = edges.first() else {
        return 1;
    };
    1 + edge_sum(edges) - i64::from(first.inside) - interior_corrections(edges, rule)
}

pub fn master_euler(edges: &[Edge]) -> i64 {
    master_euler_with(edges, &MasterVertex)
}

/// `chi(O_{e0 ∪ branch})` via the half-square closed form. Odd chains are
/// completed with [`Edge::EMPTY`]. All terms are accumulated doubled.
pub fn closed_euler(edges: &[Edge]) -> i64 {
    if edges.is_empty() {
        return 1;
    }
    let pairs = edges.len().div_ceil(2);
    let get = |k: usize| edges.get(k).copied().unwrap_or(Edge::EMPTY);
    // pair i (0-based): (m_i, n_i) = edge 2i, (r_i, s_i) = edge 2i+1
    let m = |i: usize| i64::from(get(2 * i).inside);
    let n = |i: usize| i64::from(get(2 * i).outside);
    let r = |i: usize| i64::from(get(2 * i + 1).inside);
    let s = |i: usize| i64::from(get(2 * i + 1).outside);

    let mut twice = n(0) * n(0);
    for i in 0..pairs {
        let d = r(i) - m(i);
        twice += d * (d + 1);
        twice += n(i) + s(i) - 2 * n(i).min(s(i));
    }
    for i in 0..pairs - 1 {
        let d = n(i + 1) - s(i);
        twice += d * d;
        twice += 2 * (m(i + 1) - r(i).min(m(i + 1)));
    }
    let last = s(pairs - 1);
    twice += last * last;
    debug_assert!(twice % 2 == 0, "closed form must be integral");
    twice / 2
}

pub fn branch_euler_master(b: &Branch) -> i64 {
    master_euler(&b.edges)
}

pub fn branch_euler_closed(b: &Branch) -> i64 {
    closed_euler(&b.edges)
}

/// `chi` of the branch on its own, without `e0`: `sum E - sum interior V`.
/// Equals `branch_euler_master(b) - 1 + m1` for non-empty branches.
pub fn detached_branch_euler(b: &Branch) -> i64 {
    edge_sum(&b.edges) - interior_corrections(&b.edges, &MasterVertex)
}

fn side_euler<V: VertexCorrection + ?Sized>(a: &Branch, b: &Branch, rule: &V) -> i64 {
    let chi_a = master_euler_with(&a.edges, rule);
    let chi_b = master_euler_with(&b.edges, rule);
    // the two curves overlap in e0; with both branches present the 3-valent
    // vertex adds the product of the outside thickenings
    let overlap = match (a.edges.first(), b.edges.first()) {
        (Some(x), Some(y)) => i64::from(x.outside) * i64::from(y.outside),
        _ => 1,
    };
    chi_a + chi_b - overlap
}

/// `chi(O_C)` of the full configuration: glue the two branches at each endpoint
/// of `e0`, then glue the two sides along `e0`.
pub fn config_euler_with<V: VertexCorrection + ?Sized>(c: &CurveConfig, rule: &V) -> i64 {
    let q = side_euler(
        c.branch(BranchKind::UpperQ),
        c.branch(BranchKind::LowerQ),
        rule,
    );
    let p = side_euler(
        c.branch(BranchKind::UpperP),
        c.branch(BranchKind::LowerP),
        rule,
    );
    q + p - 1
}

pub fn config_euler(c: &CurveConfig) -> i64 {
    config_euler_with(c, &MasterVertex)
}

/// Pushforward class `(d1, d2)`; the `[C3]` coefficient is the implicit 1 from `e0`.
pub fn config_class(c: &CurveConfig) -> ClassVector {
    c.branches.iter().fold(ClassVector::ZERO, |acc, b| {
        let k = b.class();
        ClassVector::new(acc.d1 + k.d1, acc.d2 + k.d2)
    })
}

/// Whether a chain satisfies the constraints forced by `chi = 1`: every
/// outside thickening is 1, inside thickenings never increase, and inside each
/// pair (odd chains completed with an inside-0 placeholder) the second inside
/// thickening equals the first or is one less.
pub fn chain_is_admissible(edges: &[Edge]) -> bool {
    if edges.iter().any(|e| e.outside != 1) {
        return false;
    }
    if edges.windows(2).any(|w| w[1].inside > w[0].inside) {
        return false;
    }
    edges.chunks(2).all(|pair| {
        let first = pair[0].inside;
        let second = pair.get(1).map_or(0, |e| e.inside);
        second == first || second + 1 == first
    })
}

pub fn is_admissible(c: &CurveConfig) -> bool {
    c.branches.iter().all(|b| chain_is_admissible(&b.edges))
}
