//! Brute-force ground truth: lattice points of dilated order and chain
//! polytopes, interior points, and comparability graphs.

use std::collections::VecDeque;

use serde::Serialize;

use crate::bitset::ElemSet;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::poset::Poset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Polytope {
    Order,
    Chain,
}

/// Maximal chains as bitsets, listed without using any path-weight DP.
fn chain_sets(p: &Poset) -> Vec<ElemSet> {
    p.maximal_chains()
        .into_iter()
        .map(|c| c.into_iter().collect())
        .collect()
}

/// Assigns values in index order, keeping every chain's partial sum within
/// `[.., hi]` given that unassigned entries are at least `lo`.
struct ChainBox<'a> {
    n: usize,
    lo: i64,
    hi_value: i64,
    chain_cap: i64,
    chains: &'a [ElemSet],
    budget: &'a Budget,
}

impl ChainBox<'_> {
    fn run(&self, visit: &mut dyn FnMut(&[i64])) -> Result<()> {
        let mut vals = vec![0i64; self.n];
        let mut sums = vec![0i64; self.chains.len()];
        let mut left: Vec<i64> = self.chains.iter().map(|c| c.len() as i64).collect();
        self.rec(0, &mut vals, &mut sums, &mut left, visit)
    }

    fn rec(
        &self,
        i: usize,
        vals: &mut Vec<i64>,
        sums: &mut Vec<i64>,
        left: &mut Vec<i64>,
        visit: &mut dyn FnMut(&[i64]),
    ) -> Result<()> {
        self.budget.spend(1, "lattice point enumeration")?;
        if i == self.n {
            visit(vals);
            return Ok(());
        }
        let mine: Vec<usize> = (0..self.chains.len()).filter(|&c| self.chains[c].contains(i)).collect();
        let mut hi = self.hi_value;
        for &c in &mine {
            // this entry plus the rest at their minimum must fit
            hi = hi.min(self.chain_cap - sums[c] - self.lo * (left[c] - 1));
        }
        for v in self.lo..=hi {
            vals[i] = v;
            for &c in &mine {
                sums[c] += v;
                left[c] -= 1;
            }
            let r = self.rec(i + 1, vals, sums, left, visit);
            for &c in &mine {
                sums[c] -= v;
                left[c] += 1;
            }
            r?;
        }
        Ok(())
    }
}

fn order_points(p: &Poset, n: i64, budget: &Budget, visit: &mut dyn FnMut(&[i64])) -> Result<()> {
    let order = p.topo_order().to_vec();
    let mut vals = vec![0i64; p.len()];
    order_rec(p, &order, 0, n, &mut vals, budget, visit)
}

fn order_rec(
    p: &Poset,
    order: &[usize],
    k: usize,
    n: i64,
    vals: &mut Vec<i64>,
    budget: &Budget,
    visit: &mut dyn FnMut(&[i64]),
) -> Result<()> {
    budget.spend(1, "lattice point enumeration")?;
    if k == order.len() {
        visit(vals);
        return Ok(());
    }
    let z = order[k];
    // x < y forces f(x) >= f(y); lower covers are already assigned
    let hi = p.lower_covers(z).iter().map(|w| vals[w]).min().unwrap_or(n);
    for v in 0..=hi {
        vals[z] = v;
        order_rec(p, order, k + 1, n, vals, budget, visit)?;
    }
    Ok(())
}

pub fn for_each_lattice_point(
    p: &Poset,
    polytope: Polytope,
    n: i64,
    budget: &Budget,
    visit: &mut dyn FnMut(&[i64]),
) -> Result<()> {
    if n < 0 {
        return Err(Error::ParamOutOfRange(format!("dilation must be >= 0, got {n}")));
    }
    match polytope {
        Polytope::Order => order_points(p, n, budget, visit),
        Polytope::Chain => {
            let chains = chain_sets(p);
            ChainBox {
                n: p.len(),
                lo: 0,
                hi_value: n,
                chain_cap: n,
                chains: &chains,
                budget,
            }
            .run(visit)
        }
    }
}

pub fn lattice_points(p: &Poset, polytope: Polytope, n: i64, budget: &Budget) -> Result<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    for_each_lattice_point(p, polytope, n, budget, &mut |v| out.push(v.to_vec()))?;
    Ok(out)
}

pub fn count_lattice_points(p: &Poset, polytope: Polytope, n: i64, budget: &Budget) -> Result<u64> {
    let mut count = 0u64;
    for_each_lattice_point(p, polytope, n, budget, &mut |_| count += 1)?;
    Ok(count)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertReport {
    pub order: Vec<u64>,
    pub chain: Vec<u64>,
    pub equal: bool,
}

pub fn hilbert_compare(p: &Poset, nmax: i64, budget: &Budget) -> Result<HilbertReport> {
    let mut order = Vec::new();
    let mut chain = Vec::new();
    for n in 0..=nmax {
        order.push(count_lattice_points(p, Polytope::Order, n, budget)?);
        chain.push(count_lattice_points(p, Polytope::Chain, n, budget)?);
    }
    let equal = order == chain;
    Ok(HilbertReport { order, chain, equal })
}

/// Integer points `f > 0` with every maximal-chain sum `< n`.
pub fn interior_points(p: &Poset, n: i64, budget: &Budget) -> Result<Vec<Vec<i64>>> {
    if n < 1 {
        return Err(Error::ParamOutOfRange(format!("dilation must be >= 1, got {n}")));
    }
    let chains = chain_sets(p);
    let mut out = Vec::new();
    ChainBox {
        n: p.len(),
        lo: 1,
        hi_value: n - 1,
        chain_cap: n - 1,
        chains: &chains,
        budget,
    }
    .run(&mut |v| out.push(v.to_vec()))?;
    Ok(out)
}

/// Undirected simple graph on at most 64 vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub adj: Vec<ElemSet>,
}

pub const CHORD_CHECK_MAX_VERTICES: usize = 12;

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Graph {
        let mut adj = vec![ElemSet::EMPTY; n];
        for &(a, b) in edges {
            if a != b {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        Graph { adj }
    }

    pub fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges)
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|a| self.adj[a].iter().filter(move |&b| b > a).map(move |b| (a, b)))
            .collect()
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }
}

pub fn comparability_graph(p: &Poset) -> Graph {
    Graph {
        adj: (0..p.len()).map(|i| p.comparable_set(i)).collect(),
    }
}

/// All stable sets, the empty set included.
pub fn stable_sets(g: &Graph) -> Vec<ElemSet> {
    let n = g.len();
    let mut out = Vec::new();
    let mut stack = vec![(0usize, ElemSet::EMPTY, ElemSet::full(n))];
    while let Some((from, cur, allowed)) = stack.pop() {
        out.push(cur);
        for i in allowed.iter().filter(|&i| i >= from) {
            let next = allowed.difference(g.adj[i]).difference(ElemSet::full(i + 1));
            stack.push((i + 1, cur.with(i), next));
        }
    }
    out.sort_unstable();
    out
}

/// Whether every odd closed walk has a triangular chord, i.e. an edge
/// between walk vertices two steps apart.
///
/// A chordless odd closed walk is an odd closed walk in the digraph whose
/// nodes are arcs `(a, b)` and whose moves `(a, b) -> (b, c)` require `c == a`
/// or `ac` not an edge. Each strongly connected piece is checked for an odd
/// cycle by BFS parity.
pub fn odd_cycle_chord_check(g: &Graph) -> Result<bool> {
    let n = g.len();
    if n > CHORD_CHECK_MAX_VERTICES {
        return Err(Error::GraphTooLarge(n, CHORD_CHECK_MAX_VERTICES));
    }
    let mut arcs = Vec::new();
    let mut id = vec![vec![usize::MAX; n]; n];
    for a in 0..n {
        for b in g.adj[a].iter() {
            id[a][b] = arcs.len();
            arcs.push((a, b));
        }
    }
    let m = arcs.len();
    let succ: Vec<Vec<usize>> = arcs
        .iter()
        .map(|&(a, b)| {
            g.adj[b]
                .iter()
                .filter(|&c| c == a || !g.has_edge(a, c))
                .map(|c| id[b][c])
                .collect()
        })
        .collect();
    let mut pred = vec![Vec::new(); m];
    for (u, s) in succ.iter().enumerate() {
        for &v in s {
            pred[v].push(u);
        }
    }
    let comp = strongly_connected(&succ, &pred);
    let mut parity = vec![u8::MAX; m];
    for root in 0..m {
        if parity[root] != u8::MAX {
            continue;
        }
        parity[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in &succ[u] {
                if comp[v] != comp[u] {
                    continue;
                }
                let want = parity[u] ^ 1;
                if parity[v] == u8::MAX {
                    parity[v] = want;
                    queue.push_back(v);
                } else if parity[v] != want {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Kosaraju; returns a component id per node.
fn strongly_connected(succ: &[Vec<usize>], pred: &[Vec<usize>]) -> Vec<usize> {
    let m = succ.len();
    let mut seen = vec![false; m];
    let mut order = Vec::with_capacity(m);
    for s in 0..m {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![(s, 0usize)];
        while let Some((u, i)) = stack.pop() {
            if i < succ[u].len() {
                stack.push((u, i + 1));
                let v = succ[u][i];
                if !seen[v] {
                    seen[v] = true;
                    stack.push((v, 0));
                }
            } else {
                order.push(u);
            }
        }
    }
    let mut comp = vec![usize::MAX; m];
    let mut next = 0;
    for &s in order.iter().rev() {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = next;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &v in &pred[u] {
                if comp[v] == usize::MAX {
                    comp[v] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    comp
}
