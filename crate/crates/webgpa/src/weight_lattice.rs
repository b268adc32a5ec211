//! The order-1 building: the sl_n weight lattice as an edge-labeled graph.
//!
//! Vertices are integer vectors modulo the all-ones line, normalized so the
//! minimum coordinate is 0. An edge v -> v + e_A exists for every subset
//! A of coordinates other than the empty set and all of X, labeled |A|.
//! Triangles through a vertex correspond exactly to the triple family 𝒯
//! used for the group-theoretic presentation, which the tests pin down.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::BuildingGraph;

/// A subset of {0, .., n-1} as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subset(pub u32);

impl Subset {
    pub fn empty() -> Self {
        Subset(0)
    }

    pub fn full(n: usize) -> Self {
        Subset((1u32 << n) - 1)
    }

    pub fn from_indices(idx: &[usize]) -> Self {
        Subset(idx.iter().fold(0, |m, &i| m | (1 << i)))
    }

    pub fn size(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn complement(self, n: usize) -> Self {
        Subset(!self.0 & Self::full(n).0)
    }

    pub fn union(self, other: Self) -> Self {
        Subset(self.0 | other.0)
    }

    pub fn intersect(self, other: Self) -> Self {
        Subset(self.0 & other.0)
    }

    pub fn disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn contains(self, other: Self) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn indices(self, n: usize) -> Vec<usize> {
        (0..n).filter(|&i| self.0 & (1 << i) != 0).collect()
    }

    /// All size-k subsets of this set, ascending by bitmask.
    pub fn subsets_of_size(self, n: usize, k: usize) -> Vec<Subset> {
        let mut out = Vec::new();
        for mask in 0..=self.0 {
            let s = Subset(mask);
            if self.contains(s) && s.size() == k && mask <= Subset::full(n).0 {
                out.push(s);
            }
        }
        out
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for i in 0..32 {
            if self.0 & (1 << i) != 0 {
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{}", i + 1)?;
                first = false;
            }
        }
        write!(f, "}}")
    }
}

/// Is (a, b, c) in the disjoint-cover family T1?
pub fn in_t1(a: Subset, b: Subset, c: Subset, n: usize) -> bool {
    a.disjoint(b)
        && a.disjoint(c)
        && b.disjoint(c)
        && a.union(b).union(c) == Subset::full(n)
}

/// Is (a, b, c) in T2, the image of T1 under reversal-with-complements?
pub fn in_t2(a: Subset, b: Subset, c: Subset, n: usize) -> bool {
    in_t1(c.complement(n), b.complement(n), a.complement(n), n)
}

/// Membership in the full triple family 𝒯 = T1 ∪ T2.
pub fn in_t(a: Subset, b: Subset, c: Subset, n: usize) -> bool {
    in_t1(a, b, c, n) || in_t2(a, b, c, n)
}

/// A weight-lattice vertex: an integer vector with minimum coordinate 0,
/// standing for its class modulo the all-ones vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WlVertex(Vec<i64>);

impl WlVertex {
    /// Normalize an arbitrary representative.
    pub fn new(coords: Vec<i64>) -> Self {
        let min = coords.iter().copied().min().expect("vertex needs at least one coordinate");
        WlVertex(coords.into_iter().map(|c| c - min).collect())
    }

    pub fn origin(n: usize) -> Self {
        WlVertex(vec![0; n])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// The vertex shifted by +1 on each coordinate of `a`.
    pub fn step(&self, a: Subset) -> WlVertex {
        let moved = self
            .0
            .iter()
            .enumerate()
            .map(|(i, &c)| c + i64::from(a.0 & (1 << i) != 0))
            .collect();
        WlVertex::new(moved)
    }

    /// Translation by an arbitrary integer vector (a graph automorphism).
    pub fn translate(&self, t: &[i64]) -> WlVertex {
        WlVertex::new(self.0.iter().zip(t).map(|(&c, &d)| c + d).collect())
    }
}

impl fmt::Display for WlVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The weight-lattice building graph for sl_n.
#[derive(Debug)]
pub struct WeightLattice {
    n: usize,
    neighbor_cache: RwLock<HashMap<(WlVertex, usize), Vec<WlVertex>>>,
}

impl WeightLattice {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 || n > 30 {
            return Err(Error::invalid(format!("weight lattice rank must be in 2..=30, got {n}")));
        }
        Ok(WeightLattice { n, neighbor_cache: RwLock::new(HashMap::new()) })
    }

    /// Neighbors together with the subset that reaches them.
    pub fn neighbors_with_subsets(&self, v: &WlVertex, m: usize) -> Vec<(WlVertex, Subset)> {
        let full = Subset::full(self.n);
        full.subsets_of_size(self.n, m)
            .into_iter()
            .map(|a| (v.step(a), a))
            .collect()
    }

    /// The subset carrying the edge x -> y, if the edge exists.
    pub fn edge_subset(&self, x: &WlVertex, y: &WlVertex) -> Option<Subset> {
        let diff: Vec<i64> = y.coords().iter().zip(x.coords()).map(|(a, b)| a - b).collect();
        let min = *diff.iter().min().unwrap();
        let normalized: Vec<i64> = diff.iter().map(|d| d - min).collect();
        if normalized.iter().any(|&d| d != 0 && d != 1) {
            return None;
        }
        let a = Subset::from_indices(
            &normalized
                .iter()
                .enumerate()
                .filter(|(_, &d)| d == 1)
                .map(|(i, _)| i)
                .collect::<Vec<_>>(),
        );
        if a == Subset::empty() || a == Subset::full(self.n) {
            None
        } else {
            Some(a)
        }
    }
}

impl BuildingGraph for WeightLattice {
    type V = WlVertex;

    fn rank(&self) -> usize {
        self.n
    }

    fn order(&self) -> u64 {
        1
    }

    fn type_of(&self, v: &WlVertex) -> usize {
        let s: i64 = v.coords().iter().sum();
        let n = self.n as i64;
        ((-s).rem_euclid(n)) as usize
    }

    fn neighbors(&self, v: &WlVertex, m: usize) -> Result<Vec<WlVertex>> {
        if m == 0 || m >= self.n {
            return Err(Error::invalid(format!("edge label {m} outside 1..={}", self.n - 1)));
        }
        if let Some(hit) = self.neighbor_cache.read().unwrap().get(&(v.clone(), m)) {
            return Ok(hit.clone());
        }
        let list: Vec<WlVertex> =
            self.neighbors_with_subsets(v, m).into_iter().map(|(y, _)| y).collect();
        self.neighbor_cache
            .write()
            .unwrap()
            .entry((v.clone(), m))
            .or_insert_with(|| list.clone());
        Ok(list)
    }

    fn edge_label(&self, x: &WlVertex, y: &WlVertex) -> Result<Option<usize>> {
        if x.coords().len() != self.n || y.coords().len() != self.n {
            return Err(Error::invalid("vertex dimension does not match the lattice rank"));
        }
        Ok(self.edge_subset(x, y).map(|a| a.size()))
    }

    fn split_targets(&self, x: &WlVertex, z: &WlVertex, j: usize) -> Result<Vec<WlVertex>> {
        let Some(a) = self.edge_subset(x, z) else {
            return Err(Error::invalid("split_targets: x and z are not adjacent"));
        };
        if j == 0 || j >= a.size() {
            return Err(Error::invalid(format!(
                "split_targets: need 1 <= j < {}, got {j}",
                a.size()
            )));
        }
        Ok(a.subsets_of_size(self.n, j).into_iter().map(|b| x.step(b)).collect())
    }
}
