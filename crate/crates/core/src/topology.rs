//! Ring digraphs and their Laplacians.
//!
//! Vertices are 1-based in the public API. An arc `(i, k)` means "agent `i`
//! observes agent `k`": it places `−1` at row `i`, column `k` of the
//! Laplacian.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: BTreeSet<(usize, usize)>,
}

impl Digraph {
    /// Builds a simple digraph on vertices `1..=n`. Rejects self-loops,
    /// duplicate arcs and out-of-range indices.
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::TooSmall { what: "vertex count", got: 0, min: 1, note: "" });
        }
        let mut set = BTreeSet::new();
        for (i, k) in arcs {
            if i == 0 || k == 0 || i > n || k > n {
                return Err(Error::InvalidDigraph(format!(
                    "arc ({i}, {k}) out of range 1..={n}"
                )));
            }
            if i == k {
                return Err(Error::InvalidDigraph(format!("self-loop at vertex {i}")));
            }
            if !set.insert((i, k)) {
                return Err(Error::InvalidDigraph(format!("duplicate arc ({i}, {k})")));
            }
        }
        Ok(Self { n, arcs: set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &BTreeSet<(usize, usize)> {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn contains(&self, i: usize, k: usize) -> bool {
        self.arcs.contains(&(i, k))
    }

    /// Vertices observed by `i`.
    pub fn observed(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.arcs.range((i, 0)..(i + 1, 0)).map(|&(_, k)| k)
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.observed(i).count()
    }
}

/// Wraps an index into `1..=n`, treating `0` as `n` and `n + 1` as `1`.
fn ring(i: usize, n: usize) -> usize {
    (i + n - 1) % n + 1
}

fn check_ring_size(n: usize, what: &'static str) -> Result<()> {
    if n < 3 {
        return Err(Error::TooSmall { what, got: n, min: 3, note: "" });
    }
    Ok(())
}

/// The alternating ring on `n = 2m` vertices: odd agents observe both ring
/// neighbours, even agents observe only their predecessor.
pub fn build_alternating_ring(m: usize) -> Result<Digraph> {
    if m < 3 {
        return Err(Error::TooSmall {
            what: "alternating ring half-size m",
            got: m,
            min: 3,
            note: " (m = 1 admits no such graph and m = 2 has a purely real spectrum)",
        });
    }
    let n = 2 * m;
    let arcs = (1..=n).flat_map(|i| {
        let prev = (i, ring(i - 1, n));
        let next = (i % 2 == 1).then(|| (i, ring(i + 1, n)));
        std::iter::once(prev).chain(next)
    });
    Digraph::new(n, arcs)
}

/// Cyclic pursuit: agent `i` observes `i − 1`, agent 1 observes `n`.
pub fn build_cyclic_pursuit(n: usize) -> Result<Digraph> {
    check_ring_size(n, "cyclic pursuit size n")?;
    Digraph::new(n, (1..=n).map(|i| (i, ring(i - 1, n))))
}

/// Two-directional ring: agent `i` observes `i − 1` and `i + 1`.
pub fn build_bidirectional_ring(n: usize) -> Result<Digraph> {
    check_ring_size(n, "bidirectional ring size n")?;
    Digraph::new(
        n,
        (1..=n).flat_map(|i| [(i, ring(i - 1, n)), (i, ring(i + 1, n))]),
    )
}

/// Dense Laplacian `L = D − adjacency`, with `D` the out-degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix {
    entries: DMatrix<f64>,
}

impl LaplacianMatrix {
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Entry at 1-based `(i, k)`.
    pub fn entry(&self, i: usize, k: usize) -> f64 {
        self.entries[(i - 1, k - 1)]
    }

    /// Row `i` (1-based) as a vector.
    pub fn row(&self, i: usize) -> Vec<f64> {
        self.entries.row(i - 1).iter().copied().collect()
    }

    /// Nonzero off-diagonal entries per row, 0-based, for sparse products.
    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        (0..self.n())
            .map(|i| {
                (0..self.n())
                    .filter(|&k| k != i && self.entries[(i, k)] != 0.0)
                    .collect()
            })
            .collect()
    }

    /// `n` on the first line, then one comma-separated row per line.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", self.n());
        for i in 0..self.n() {
            let row: Vec<String> = self
                .entries
                .row(i)
                .iter()
                .map(|v| format!("{}", *v as i64))
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn laplacian(g: &Digraph) -> LaplacianMatrix {
    let n = g.n();
    let mut entries = DMatrix::zeros(n, n);
    for &(i, k) in g.arcs() {
        entries[(i - 1, k - 1)] = -1.0;
        entries[(i - 1, i - 1)] += 1.0;
    }
    LaplacianMatrix { entries }
}

/// True iff some vertex is reachable from every other vertex following arc
/// directions.
pub fn has_spanning_converging_tree(g: &Digraph) -> bool {
    let n = g.n();
    // reverse[k] lists every i with an arc (i, k).
    let mut reverse = vec![Vec::new(); n + 1];
    for &(i, k) in g.arcs() {
        reverse[k].push(i);
    }
    (1..=n).any(|root| {
        let mut seen = vec![false; n + 1];
        seen[root] = true;
        let mut count = 1;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &u in &reverse[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count == n
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Alternating,
    Cyclic,
    Bidirectional,
}

impl Topology {
    pub const ALL: [Topology; 3] = [Topology::Alternating, Topology::Cyclic, Topology::Bidirectional];

    pub fn name(self) -> &'static str {
        match self {
            Topology::Alternating => "alternating",
            Topology::Cyclic => "cyclic",
            Topology::Bidirectional => "bidirectional",
        }
    }

    /// Builds the digraph on `n` agents. The alternating ring needs an even
    /// `n = 2m` with `m ≥ 3`.
    pub fn build(self, n: usize) -> Result<Digraph> {
        match self {
            Topology::Alternating => {
                if !n.is_multiple_of(2) {
                    return Err(Error::InvalidParameter(format!(
                        "alternating ring needs an even agent count, got {n}"
                    )));
                }
                build_alternating_ring(n / 2)
            }
            Topology::Cyclic => build_cyclic_pursuit(n),
            Topology::Bidirectional => build_bidirectional_ring(n),
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alternating" => Ok(Topology::Alternating),
            "cyclic" => Ok(Topology::Cyclic),
            "bidirectional" => Ok(Topology::Bidirectional),
            other => Err(Error::InvalidParameter(format!("unknown topology '{other}'"))),
        }
    }
}

/// A validated topology instance: the digraph is built and confirmed to
/// contain a spanning converging tree, so its Laplacian has a simple zero
/// eigenvalue.
#[derive(Debug, Clone)]
pub struct Network {
    topology: Topology,
    digraph: Digraph,
}

impl Network {
    pub fn new(topology: Topology, n: usize) -> Result<Self> {
        let digraph = topology.build(n)?;
        if !has_spanning_converging_tree(&digraph) {
            return Err(Error::InvalidDigraph(format!(
                "{topology} ring on {n} vertices has no spanning converging tree"
            )));
        }
        Ok(Self { topology, digraph })
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn n(&self) -> usize {
        self.digraph.n()
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    pub fn laplacian(&self) -> LaplacianMatrix {
        laplacian(&self.digraph)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_ring_m3() {
        let g = build_alternating_ring(3).unwrap();
        let want: BTreeSet<_> = [(1, 2), (1, 6), (2, 1), (3, 2), (3, 4), (4, 3), (5, 4), (5, 6), (6, 5)]
            .into_iter()
            .collect();
        assert_eq!(g.n(), 6);
        assert_eq!(g.arcs(), &want);
        let l = laplacian(&g);
        assert_eq!(l.row(2), vec![-1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(l.row(1), vec![2.0, -1.0, 0.0, 0.0, 0.0, -1.0]);
    }

    #[test]
    fn alternating_ring_rejects_small_m() {
        for m in 0..3 {
            let err = build_alternating_ring(m).unwrap_err();
            assert!(err.to_string().contains("m = 2"), "{err}");
            assert!(err.is_usage());
        }
    }

    #[test]
    fn cyclic_pursuit() {
        let g = build_cyclic_pursuit(3).unwrap();
        assert_eq!(g.arcs().iter().copied().collect::<Vec<_>>(), vec![(1, 3), (2, 1), (3, 2)]);
        assert_eq!(laplacian(&build_cyclic_pursuit(4).unwrap()).row(1), vec![1.0, 0.0, 0.0, -1.0]);
        assert!(build_cyclic_pursuit(2).is_err());
        assert!(has_spanning_converging_tree(&build_cyclic_pursuit(5).unwrap()));
    }

    #[test]
    fn bidirectional_ring() {
        let g = build_bidirectional_ring(3).unwrap();
        assert_eq!(g.arc_count(), 6);
        for i in 1..=3 {
            for k in 1..=3 {
                assert_eq!(g.contains(i, k), i != k);
            }
        }
        assert_eq!(laplacian(&build_bidirectional_ring(4).unwrap()).row(1), vec![2.0, -1.0, 0.0, -1.0]);
        let l = laplacian(&build_bidirectional_ring(5).unwrap());
        assert_eq!(l.matrix(), &l.matrix().transpose());
        assert!(build_bidirectional_ring(2).is_err());
    }

    #[test]
    fn empty_digraph_has_zero_laplacian() {
        let g = Digraph::new(3, []).unwrap();
        assert_eq!(laplacian(&g).matrix(), &DMatrix::zeros(3, 3));
        assert!(!has_spanning_converging_tree(&g));
    }

    #[test]
    fn digraph_validation() {
        assert!(Digraph::new(3, [(1, 1)]).is_err());
        assert!(Digraph::new(3, [(1, 4)]).is_err());
        assert!(Digraph::new(3, [(0, 1)]).is_err());
        assert!(Digraph::new(3, [(1, 2), (1, 2)]).is_err());
        assert!(Digraph::new(0, []).is_err());
    }

    #[test]
    fn disjoint_cycles_have_no_converging_tree() {
        let g = Digraph::new(6, [(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4)]).unwrap();
        assert!(!has_spanning_converging_tree(&g));
        // A single arc into the other cycle is enough.
        let g = Digraph::new(6, [(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4), (1, 4)]).unwrap();
        assert!(has_spanning_converging_tree(&g));
    }

    #[test]
    fn alternating_pattern_for_many_m() {
        for m in 3..=64 {
            let g = build_alternating_ring(m).unwrap();
            let n = 2 * m;
            assert_eq!(g.arc_count(), 3 * m);
            assert!(has_spanning_converging_tree(&g));
            let l = laplacian(&g);
            for i in 1..=n {
                assert_eq!(l.row(i).iter().sum::<f64>(), 0.0);
                let odd = i % 2 == 1;
                assert_eq!(g.out_degree(i), if odd { 2 } else { 1 });
                for k in 1..=n {
                    let want = if i == k {
                        if odd { 2.0 } else { 1.0 }
                    } else if k == ring(i - 1, n) || (odd && k == ring(i + 1, n)) {
                        -1.0
                    } else {
                        0.0
                    };
                    assert_eq!(l.entry(i, k), want, "m={m} ({i},{k})");
                }
            }
        }
    }

    #[test]
    fn arc_counts_and_trees() {
        for n in 3..=20 {
            let c = build_cyclic_pursuit(n).unwrap();
            let b = build_bidirectional_ring(n).unwrap();
            assert_eq!(c.arc_count(), n);
            assert_eq!(b.arc_count(), 2 * n);
            assert!((1..=n).all(|i| c.out_degree(i) == 1));
            assert!(has_spanning_converging_tree(&c));
            assert!(has_spanning_converging_tree(&b));
        }
    }

    #[test]
    fn network_validates_sizes() {
        assert!(Network::new(Topology::Alternating, 7).is_err());
        assert!(Network::new(Topology::Alternating, 4).is_err());
        assert_eq!(Network::new(Topology::Alternating, 50).unwrap().n(), 50);
        assert_eq!("cyclic".parse::<Topology>().unwrap(), Topology::Cyclic);
        assert!("ring".parse::<Topology>().is_err());
    }

    #[test]
    fn csv_layout() {
        let csv = laplacian(&build_cyclic_pursuit(3).unwrap()).to_csv();
        assert_eq!(csv, "3\n1,0,-1\n-1,1,0\n0,-1,1\n");
    }
}
