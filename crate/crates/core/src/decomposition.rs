//! Network decomposition by level coloring.
//!
//! Every decomposition here colors level `p` (1-based) with `(p - 1) mod k`,
//! using the same rule at every transmitter and receiver. Each color class
//! induces an independent symmetric sub-network whose levels are indexed in
//! increasing original-level order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::NetworkParamsSym;

/// `(m, n)` sub-network with multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubModel {
    pub m: u32,
    pub n: u32,
    pub multiplicity: u32,
}

impl SubModel {
    pub fn q(&self) -> u32 {
        self.m.max(self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Node {
    Transmitter(usize),
    Receiver(usize),
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Transmitter(i) => write!(f, "tx{}", i + 1),
            Node::Receiver(i) => write!(f, "rx{}", i + 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LevelColor {
    pub color: usize,
    /// Zero-based level index inside the colored sub-network.
    pub sublevel: usize,
}

/// Color and sub-level of every level at every node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringMap {
    users: usize,
    levels: usize,
    /// Transmitters `0..L` followed by receivers `0..L`; one entry per level.
    nodes: Vec<Vec<LevelColor>>,
}

impl ColoringMap {
    /// Builds a map from explicit per-node assignments, transmitters first.
    pub fn from_nodes(users: usize, levels: usize, nodes: Vec<Vec<LevelColor>>) -> Result<Self> {
        if nodes.len() != 2 * users || nodes.iter().any(|n| n.len() != levels) {
            return Err(Error::InvalidColoring(format!(
                "expected {} nodes with {levels} levels each",
                2 * users
            )));
        }
        Ok(Self {
            users,
            levels,
            nodes,
        })
    }

    fn modular(users: usize, levels: usize, colors: usize) -> Self {
        let per_node: Vec<LevelColor> = (0..levels)
            .map(|p| LevelColor {
                color: p % colors,
                sublevel: p / colors,
            })
            .collect();
        Self {
            users,
            levels,
            nodes: vec![per_node; 2 * users],
        }
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    fn index(&self, node: Node) -> usize {
        match node {
            Node::Transmitter(i) => i,
            Node::Receiver(i) => self.users + i,
        }
    }

    /// Assignment of zero-based `level` at `node`.
    pub fn get(&self, node: Node, level: usize) -> LevelColor {
        self.nodes[self.index(node)][level]
    }

    /// Zero-based original level that carries `sublevel` of `color` at `node`.
    pub fn level_of(&self, node: Node, color: usize, sublevel: usize) -> Option<usize> {
        self.nodes[self.index(node)]
            .iter()
            .position(|lc| lc.color == color && lc.sublevel == sublevel)
    }

    /// Copy with colors `a` and `b` exchanged at a single node.
    pub fn with_swapped_colors(&self, node: Node, a: usize, b: usize) -> Self {
        let mut out = self.clone();
        let idx = out.index(node);
        for lc in &mut out.nodes[idx] {
            if lc.color == a {
                lc.color = b;
            } else if lc.color == b {
                lc.color = a;
            }
        }
        out
    }

    pub fn all_nodes(&self) -> impl Iterator<Item = Node> {
        let users = self.users;
        (0..users)
            .map(Node::Transmitter)
            .chain((0..users).map(Node::Receiver))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    network: NetworkParamsSym,
    /// Sub-network `(m, n)` per color, indexed by color.
    components: Vec<(u32, u32)>,
    coloring: ColoringMap,
}

impl Decomposition {
    pub fn network(&self) -> &NetworkParamsSym {
        &self.network
    }

    pub fn components(&self) -> &[(u32, u32)] {
        &self.components
    }

    pub fn coloring(&self) -> &ColoringMap {
        &self.coloring
    }

    pub fn with_coloring(&self, coloring: ColoringMap) -> Self {
        Self {
            coloring,
            ..self.clone()
        }
    }

    /// The multiset of sub-networks, ordered by `(min, max, m)`.
    pub fn parts(&self) -> Vec<SubModel> {
        let mut counts: BTreeMap<(u32, u32, u32), u32> = BTreeMap::new();
        for &(m, n) in &self.components {
            *counts.entry((m.min(n), m.max(n), m)).or_default() += 1;
        }
        counts
            .into_iter()
            .map(|((lo, hi, m), k)| SubModel {
                m,
                n: if m == lo { hi } else { lo },
                multiplicity: k,
            })
            .collect()
    }

    /// `(m, n)` recovered by summing the sub-networks.
    pub fn total(&self) -> (u32, u32) {
        self.components
            .iter()
            .fold((0, 0), |(a, b), &(m, n)| (a + m, b + n))
    }

    /// Rows of the coloring table: node, 1-based level, color, 1-based sublevel.
    pub fn coloring_rows(&self) -> Vec<(Node, usize, usize, usize)> {
        let c = &self.coloring;
        c.all_nodes()
            .flat_map(|node| {
                (0..c.levels).map(move |p| {
                    let lc = c.get(node, p);
                    (node, p + 1, lc.color, lc.sublevel + 1)
                })
            })
            .collect()
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.parts();
        for (i, p) in parts.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "({},{})^{}", p.m, p.n, p.multiplicity)?;
        }
        Ok(())
    }
}

/// Number of levels `p` in `1..=limit` with `(p - 1) mod k = color`.
fn levels_of_color(limit: u32, k: u32, color: u32) -> u32 {
    if limit <= color {
        0
    } else {
        (limit - color).div_ceil(k)
    }
}

fn modular_decomposition(m: u32, n: u32, users: usize, k: u32) -> Result<Decomposition> {
    let network = NetworkParamsSym::new(m, n, users)?;
    let q = m.max(n);
    let components = (0..k)
        .map(|c| (levels_of_color(m, k, c), levels_of_color(n, k, c)))
        .collect();
    Ok(Decomposition {
        network,
        components,
        coloring: ColoringMap::modular(users, q as usize, k as usize),
    })
}

/// `(km, kn) = (m, n)^k` with coloring `(p - 1) mod k`.
pub fn decompose_scale(m: u32, n: u32, k: u32, users: usize) -> Result<Decomposition> {
    if k == 0 {
        return Err(Error::Precondition("scale factor must be at least 1".into()));
    }
    modular_decomposition(k * m, k * n, users, k)
}

/// `(2m + 1, 2n + 1) = (m, n) x (m + 1, n + 1)`; odd levels form the larger
/// part.
pub fn decompose_odd(m_total: u32, n_total: u32, users: usize) -> Result<Decomposition> {
    if m_total.is_multiple_of(2) || n_total.is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "({m_total},{n_total}) is not of the form (2m+1, 2n+1)"
        )));
    }
    modular_decomposition(m_total, n_total, users, 2)
}

/// Decomposition into gap-1 sub-networks with `|n - m|` colors:
/// `(r, r+1)^(n-m-a) x (r+1, r+2)^a` for `m < n` (mirrored for `m > n`),
/// where `r = floor(min / |n - m|)` and `a = min mod |n - m|`.
pub fn full_decompose(m: u32, n: u32, users: usize) -> Result<Decomposition> {
    if m == n {
        return Err(Error::Precondition(format!(
            "m = n = {m} has no gap-1 decomposition"
        )));
    }
    modular_decomposition(m, n, users, m.abs_diff(n))
}

/// Edges `(tx, tx_level) -> (rx, rx_level)` of a symmetric network, zero-based.
fn edges(m: u32, n: u32, users: usize) -> Vec<(usize, usize, usize, usize)> {
    let q = m.max(n) as usize;
    let mut out = Vec::new();
    for tx in 0..users {
        for rx in 0..users {
            let link = if tx == rx { n } else { m } as usize;
            for p in 0..link {
                out.push((tx, p, rx, p + q - link));
            }
        }
    }
    out
}

/// Structural check of a decomposition against `params`: colors partition
/// the levels at every node, every channel edge stays inside one color and
/// lands on the matching edge of that color's declared sub-network, and the
/// sub-networks have no edges left over.
pub fn validate_coloring(params: &NetworkParamsSym, dec: &Decomposition) -> bool {
    let c = &dec.coloring;
    let users = params.users();
    let q = params.q() as usize;
    if c.users != users || c.levels != q || dec.network != *params {
        return false;
    }
    let colors = dec.components.len();
    // (i) partition: at each node, color classes are exactly the sublevel
    // ranges 0..q_c of the declared sub-network.
    for node in c.all_nodes() {
        let mut seen: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); colors];
        for p in 0..q {
            let lc = c.get(node, p);
            if lc.color >= colors || !seen[lc.color].insert(lc.sublevel) {
                return false;
            }
        }
        for (color, set) in seen.iter().enumerate() {
            let (sm, sn) = dec.components[color];
            let sq = sm.max(sn) as usize;
            if set.len() != sq || set.iter().next_back().is_some_and(|&s| s + 1 != sq) {
                return false;
            }
        }
    }
    // (ii)/(iii): edge-for-edge correspondence.
    let sub_edges: Vec<BTreeSet<(usize, usize, usize, usize)>> = dec
        .components
        .iter()
        .map(|&(sm, sn)| edges(sm, sn, users).into_iter().collect())
        .collect();
    let mut hit = 0usize;
    for (tx, p, rx, p2) in edges(params.m(), params.n(), users) {
        let a = c.get(Node::Transmitter(tx), p);
        let b = c.get(Node::Receiver(rx), p2);
        if a.color != b.color || !sub_edges[a.color].contains(&(tx, a.sublevel, rx, b.sublevel)) {
            return false;
        }
        hit += 1;
    }
    hit == sub_edges.iter().map(BTreeSet::len).sum::<usize>()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(m: u32, n: u32, l: usize) -> NetworkParamsSym {
        NetworkParamsSym::new(m, n, l).unwrap()
    }

    #[test]
    fn scale_examples() {
        let d = decompose_scale(3, 4, 3, 2).unwrap();
        assert_eq!(d.to_string(), "(3,4)^3");
        assert_eq!(d.total(), (9, 12));
        assert!(validate_coloring(&sym(9, 12, 2), &d));

        let d = decompose_scale(3, 4, 1, 2).unwrap();
        assert_eq!(d.to_string(), "(3,4)^1");
        assert!(d.coloring().nodes.iter().flatten().all(|lc| lc.color == 0));

        let d = decompose_scale(1, 2, 2, 3).unwrap();
        assert_eq!(d.to_string(), "(1,2)^2");
        assert!(validate_coloring(&sym(2, 4, 3), &d));
        assert!(decompose_scale(1, 2, 0, 2).is_err());
    }

    #[test]
    fn odd_examples() {
        let d = decompose_odd(3, 5, 2).unwrap();
        assert_eq!(d.to_string(), "(1,2)^1 x (2,3)^1");
        assert!(validate_coloring(&sym(3, 5, 2), &d));
        let d = decompose_odd(1, 1, 2).unwrap();
        assert_eq!(d.to_string(), "(0,0)^1 x (1,1)^1");
        assert!(validate_coloring(&sym(1, 1, 2), &d));
        let d = decompose_odd(5, 7, 3).unwrap();
        assert_eq!(d.to_string(), "(2,3)^1 x (3,4)^1");
        assert!(validate_coloring(&sym(5, 7, 3), &d));
        assert!(decompose_odd(4, 7, 2).is_err());
    }

    #[test]
    fn full_examples() {
        let d = full_decompose(2, 7, 2).unwrap();
        assert_eq!(d.to_string(), "(0,1)^3 x (1,2)^2");
        assert!(validate_coloring(&sym(2, 7, 2), &d));
        assert_eq!(full_decompose(3, 5, 2).unwrap().to_string(), "(1,2)^1 x (2,3)^1");
        assert_eq!(full_decompose(4, 6, 2).unwrap().to_string(), "(2,3)^2");
        assert_eq!(full_decompose(7, 2, 2).unwrap().to_string(), "(1,0)^3 x (2,1)^2");
        assert!(full_decompose(4, 4, 2).is_err());
    }

    #[test]
    fn corrupted_coloring_is_rejected() {
        let d = full_decompose(2, 7, 2).unwrap();
        let bad = d.coloring().with_swapped_colors(Node::Receiver(1), 0, 1);
        let d_bad = d.with_coloring(bad);
        // Same class sizes at the receiver, but edges now cross colors.
        assert!(!validate_coloring(&sym(2, 7, 2), &d_bad));

        let d = full_decompose(3, 5, 2).unwrap();
        let bad = d.coloring().with_swapped_colors(Node::Transmitter(0), 0, 1);
        assert!(!validate_coloring(&sym(3, 5, 2), &d.with_coloring(bad)));
    }

    #[test]
    fn wrong_network_is_rejected() {
        let d = full_decompose(2, 7, 2).unwrap();
        assert!(!validate_coloring(&sym(2, 7, 3), &d));
        assert!(!validate_coloring(&sym(3, 7, 2), &d));
    }

    #[test]
    fn gap_one_guarantee() {
        for m in 0..=12u32 {
            for n in 0..=12u32 {
                if m == n {
                    continue;
                }
                for l in [2, 3] {
                    let d = full_decompose(m, n, l).unwrap();
                    assert!(validate_coloring(&sym(m, n, l), &d));
                    assert_eq!(d.total(), (m, n));
                    assert!(d.components().iter().all(|&(a, b)| a.abs_diff(b) == 1));
                    let g = m.abs_diff(n);
                    let (lo, r, a) = (m.min(n), m.min(n) / g, m.min(n) % g);
                    let _ = lo;
                    let count = |x: u32| d.components().iter().filter(|c| c.0.min(c.1) == x).count() as u32;
                    if a > 0 {
                        assert_eq!(count(r + 1), a);
                    }
                    assert_eq!(count(r), g - a);
                }
            }
        }
    }

    #[test]
    fn coloring_rows_cover_every_level() {
        let d = full_decompose(2, 7, 2).unwrap();
        let rows = d.coloring_rows();
        assert_eq!(rows.len(), 4 * 7);
        assert_eq!(rows[0], (Node::Transmitter(0), 1, 0, 1));
        assert_eq!(rows[5], (Node::Transmitter(0), 6, 0, 2));
    }
}
