//! Finite posets with dense indices, their extensions by -inf and +inf and
//! quasi-distances.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::ElemSet;
use crate::error::{Error, Result};

/// Default bound on the number of elements accepted by [`Poset::new`].
pub const DEFAULT_MAX_ELEMENTS: usize = 16;
/// Bitsets are a single `u64`; no bound can exceed this.
pub const HARD_MAX_ELEMENTS: usize = 64;

const UNREACHABLE: i64 = i64::MIN;

/// An element of `P` extended by `-inf` and `+inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtElem {
    Bottom,
    Elem(usize),
    Top,
}

pub type Chain = Vec<usize>;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

#[derive(Clone)]
pub struct Poset {
    names: Vec<String>,
    index: HashMap<String, usize>,
    upper: Vec<ElemSet>,
    lower: Vec<ElemSet>,
    above: Vec<ElemSet>,
    below: Vec<ElemSet>,
    topo: Vec<usize>,
    minimal: ElemSet,
    maximal: ElemSet,
    redundant: Vec<(usize, usize)>,
    // rows and columns indexed by ext index: elements, then -inf, then +inf
    longest: Vec<Vec<i64>>,
    shortest: Vec<Vec<i64>>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("elements", &self.names)
            .field("covers", &self.cover_names())
            .finish()
    }
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.upper == other.upper
    }
}

impl Eq for Poset {}

impl Poset {
    pub fn new<S: AsRef<str>, T: AsRef<str>, U: AsRef<str>>(
        elements: &[S],
        covers: &[(T, U)],
    ) -> Result<Poset> {
        Self::with_limit(elements, covers, DEFAULT_MAX_ELEMENTS)
    }

    pub fn with_limit<S: AsRef<str>, T: AsRef<str>, U: AsRef<str>>(
        elements: &[S],
        covers: &[(T, U)],
        limit: usize,
    ) -> Result<Poset> {
        let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateElement(name.clone()));
            }
        }
        let mut pairs = Vec::with_capacity(covers.len());
        for (a, b) in covers {
            let lookup = |s: &str| {
                index
                    .get(s)
                    .copied()
                    .ok_or_else(|| Error::UnknownElement(s.to_string()))
            };
            pairs.push((lookup(a.as_ref())?, lookup(b.as_ref())?));
        }
        Self::build(names, index, &pairs, limit)
    }

    /// Builds a poset on anonymous elements `e0, e1, ...`.
    pub fn from_indices(n: usize, covers: &[(usize, usize)]) -> Result<Poset> {
        let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
        let index = names.iter().cloned().zip(0..).collect();
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(Error::UnknownElement(format!("e{}", a.max(b))));
            }
        }
        Self::build(names, index, covers, HARD_MAX_ELEMENTS)
    }

    pub fn from_json_str(s: &str, limit: usize) -> Result<Poset> {
        let raw: PosetJson = serde_json::from_str(s)?;
        Self::from_json(&raw, limit)
    }

    pub fn from_json(raw: &PosetJson, limit: usize) -> Result<Poset> {
        Self::with_limit(&raw.elements, &raw.covers, limit)
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            elements: self.names.clone(),
            covers: self.cover_names(),
        }
    }

    fn build(
        names: Vec<String>,
        index: HashMap<String, usize>,
        pairs: &[(usize, usize)],
        limit: usize,
    ) -> Result<Poset> {
        let n = names.len();
        if n == 0 {
            return Err(Error::EmptyPoset);
        }
        let limit = limit.min(HARD_MAX_ELEMENTS);
        if n > limit {
            return Err(Error::TooManyElements { found: n, limit });
        }

        let mut succ = vec![ElemSet::EMPTY; n];
        let mut pred = vec![ElemSet::EMPTY; n];
        for &(a, b) in pairs {
            if a == b {
                return Err(Error::Cycle(names[a].clone()));
            }
            succ[a].insert(b);
            pred[b].insert(a);
        }

        // Kahn, always taking the smallest available index.
        let mut indeg: Vec<usize> = pred.iter().map(|s| s.len()).collect();
        let mut ready: ElemSet = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = ready.first() {
            ready.remove(v);
            topo.push(v);
            for w in succ[v].iter() {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.insert(w);
                }
            }
        }
        if topo.len() < n {
            let stuck = (0..n).find(|&i| indeg[i] > 0).unwrap();
            return Err(Error::Cycle(names[stuck].clone()));
        }

        let mut below = vec![ElemSet::EMPTY; n];
        for &v in &topo {
            let mut b = ElemSet::EMPTY;
            for u in pred[v].iter() {
                b = b.union(below[u]).with(u);
            }
            below[v] = b;
        }
        let mut above = vec![ElemSet::EMPTY; n];
        for &v in topo.iter().rev() {
            let mut a = ElemSet::EMPTY;
            for w in succ[v].iter() {
                a = a.union(above[w]).with(w);
            }
            above[v] = a;
        }

        // a < b is a cover iff nothing lies strictly between.
        let mut upper = vec![ElemSet::EMPTY; n];
        let mut lower = vec![ElemSet::EMPTY; n];
        let mut redundant = Vec::new();
        for a in 0..n {
            for b in above[a].iter() {
                if above[a].intersects(below[b]) {
                    if succ[a].contains(b) {
                        redundant.push((a, b));
                    }
                } else {
                    upper[a].insert(b);
                    lower[b].insert(a);
                }
            }
        }
        redundant.sort_unstable();
        for &(a, b) in &redundant {
            log::warn!(
                "dropping redundant cover pair ({}, {}): implied by transitivity",
                names[a],
                names[b]
            );
        }

        let minimal = (0..n).filter(|&i| below[i].is_empty()).collect();
        let maximal = (0..n).filter(|&i| above[i].is_empty()).collect();

        let mut p = Poset {
            names,
            index,
            upper,
            lower,
            above,
            below,
            topo,
            minimal,
            maximal,
            redundant,
            longest: Vec::new(),
            shortest: Vec::new(),
        };
        p.longest = p.path_table(true);
        p.shortest = p.path_table(false);
        Ok(p)
    }

    /// All-pairs longest or shortest cover-path lengths in `P^±`.
    fn path_table(&self, longest: bool) -> Vec<Vec<i64>> {
        let n = self.len();
        let order: Vec<usize> = std::iter::once(n)
            .chain(self.topo.iter().copied())
            .chain(std::iter::once(n + 1))
            .collect();
        let mut table = vec![vec![UNREACHABLE; n + 2]; n + 2];
        for (pos, &src) in order.iter().enumerate() {
            let row = &mut table[src];
            row[src] = 0;
            for &v in &order[pos..] {
                if row[v] == UNREACHABLE {
                    continue;
                }
                let here = row[v];
                for w in self.ext_upper(v) {
                    let cand = here + 1;
                    let cur = row[w];
                    if cur == UNREACHABLE || (longest && cand > cur) || (!longest && cand < cur) {
                        row[w] = cand;
                    }
                }
            }
        }
        table
    }

    fn ext_upper(&self, v: usize) -> Vec<usize> {
        let n = self.len();
        if v == n {
            self.minimal.to_vec()
        } else if v == n + 1 {
            Vec::new()
        } else if self.maximal.contains(v) {
            vec![n + 1]
        } else {
            self.upper[v].to_vec()
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn ext_name(&self, x: ExtElem) -> String {
        match x {
            ExtElem::Bottom => "-inf".to_string(),
            ExtElem::Top => "+inf".to_string(),
            ExtElem::Elem(i) => self.names[i].clone(),
        }
    }

    pub fn all(&self) -> ElemSet {
        ElemSet::full(self.len())
    }

    #[inline]
    pub fn upper_covers(&self, i: usize) -> ElemSet {
        self.upper[i]
    }

    #[inline]
    pub fn lower_covers(&self, i: usize) -> ElemSet {
        self.lower[i]
    }

    /// Elements strictly above `i`.
    #[inline]
    pub fn above(&self, i: usize) -> ElemSet {
        self.above[i]
    }

    /// Elements strictly below `i`.
    #[inline]
    pub fn below(&self, i: usize) -> ElemSet {
        self.below[i]
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.above[a].contains(b)
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        a == b || self.lt(a, b)
    }

    #[inline]
    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.lt(b, a)
    }

    /// Elements comparable to `i`, excluding `i`.
    #[inline]
    pub fn comparable_set(&self, i: usize) -> ElemSet {
        self.above[i].union(self.below[i])
    }

    pub fn minimal(&self) -> ElemSet {
        self.minimal
    }

    pub fn maximal(&self) -> ElemSet {
        self.maximal
    }

    /// A topological order, smallest index first among ties.
    pub fn topo_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn covers(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|a| self.upper[a].iter().map(move |b| (a, b)))
            .collect()
    }

    fn cover_names(&self) -> Vec<(String, String)> {
        self.covers()
            .into_iter()
            .map(|(a, b)| (self.names[a].clone(), self.names[b].clone()))
            .collect()
    }

    /// Input pairs that were implied by others and dropped.
    pub fn redundant_covers(&self) -> &[(usize, usize)] {
        &self.redundant
    }

    pub fn is_antichain(&self, s: ElemSet) -> bool {
        s.iter().all(|i| !self.comparable_set(i).intersects(s))
    }

    pub fn is_chain(&self, s: ElemSet) -> bool {
        s.iter().all(|i| s.without_comparable(self, i).is_empty())
    }

    // --- extended order ---

    #[inline]
    pub fn ext_index(&self, x: ExtElem) -> usize {
        match x {
            ExtElem::Elem(i) => i,
            ExtElem::Bottom => self.len(),
            ExtElem::Top => self.len() + 1,
        }
    }

    pub fn ext_lt(&self, x: ExtElem, y: ExtElem) -> bool {
        match (x, y) {
            (ExtElem::Bottom, ExtElem::Bottom) | (ExtElem::Top, _) | (_, ExtElem::Bottom) => false,
            (ExtElem::Bottom, _) | (_, ExtElem::Top) => true,
            (ExtElem::Elem(a), ExtElem::Elem(b)) => self.lt(a, b),
        }
    }

    pub fn ext_leq(&self, x: ExtElem, y: ExtElem) -> bool {
        x == y || self.ext_lt(x, y)
    }

    /// The quasi-distance, `None` when `x` is not below `y`.
    #[inline]
    pub fn qd(&self, n: i64, x: ExtElem, y: ExtElem) -> Option<i64> {
        let (a, b) = (self.ext_index(x), self.ext_index(y));
        let l = self.longest[a][b];
        if l == UNREACHABLE {
            return None;
        }
        Some(match n.signum() {
            1 => n * l,
            -1 => n * self.shortest[a][b],
            _ => 0,
        })
    }

    pub fn qdist(&self, n: i64, x: ExtElem, y: ExtElem) -> Result<i64> {
        self.qd(n, x, y)
            .ok_or_else(|| Error::NotComparable(self.ext_name(x), self.ext_name(y)))
    }

    /// Longest and shortest cover-path lengths from `x` to `y`.
    pub fn path_lengths(&self, x: ExtElem, y: ExtElem) -> Option<(i64, i64)> {
        let (a, b) = (self.ext_index(x), self.ext_index(y));
        let l = self.longest[a][b];
        (l != UNREACHABLE).then(|| (l, self.shortest[a][b]))
    }

    // --- chains and antichains ---

    /// Every maximal chain, in lexicographic order of index sequences.
    pub fn maximal_chains(&self) -> Vec<Chain> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        for m in self.minimal.iter() {
            cur.push(m);
            self.extend_up(&mut cur, &mut out);
            cur.pop();
        }
        out
    }

    fn extend_up(&self, cur: &mut Vec<usize>, out: &mut Vec<Chain>) {
        let last = *cur.last().unwrap();
        if self.maximal.contains(last) {
            out.push(cur.clone());
            return;
        }
        for w in self.upper[last].iter() {
            cur.push(w);
            self.extend_up(cur, out);
            cur.pop();
        }
    }

    /// Every antichain including the empty one, ordered by inclusion-first DFS.
    pub fn antichains(&self) -> Vec<ElemSet> {
        let mut out = Vec::new();
        self.antichain_dfs(0, ElemSet::EMPTY, self.all(), &mut out);
        out
    }

    fn antichain_dfs(&self, from: usize, cur: ElemSet, allowed: ElemSet, out: &mut Vec<ElemSet>) {
        out.push(cur);
        for i in allowed.iter().filter(|&i| i >= from) {
            let next_allowed = allowed.difference(self.comparable_set(i)).difference(ElemSet::full(i + 1));
            self.antichain_dfs(i + 1, cur.with(i), next_allowed, out);
        }
    }

    /// All saturated chains from `x` to `y` in `P^±`, endpoints included.
    pub fn saturated_chains_between(&self, x: ExtElem, y: ExtElem) -> Result<Vec<Vec<ExtElem>>> {
        if !self.ext_leq(x, y) {
            return Err(Error::NotComparable(self.ext_name(x), self.ext_name(y)));
        }
        let target = self.ext_index(y);
        let mut out = Vec::new();
        let mut cur = vec![self.ext_index(x)];
        self.saturated_dfs(target, &mut cur, &mut out);
        Ok(out
            .into_iter()
            .map(|c| c.into_iter().map(|v| self.ext_from_index(v)).collect())
            .collect())
    }

    fn saturated_dfs(&self, target: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *cur.last().unwrap();
        if last == target {
            out.push(cur.clone());
            return;
        }
        for w in self.ext_upper(last) {
            if self.longest[w][target] != UNREACHABLE {
                cur.push(w);
                self.saturated_dfs(target, cur, out);
                cur.pop();
            }
        }
    }

    pub fn ext_from_index(&self, v: usize) -> ExtElem {
        let n = self.len();
        if v == n {
            ExtElem::Bottom
        } else if v == n + 1 {
            ExtElem::Top
        } else {
            ExtElem::Elem(v)
        }
    }

    /// Ext-level upper covers, for callers walking `P^±`.
    pub fn ext_upper_covers(&self, x: ExtElem) -> Vec<ExtElem> {
        self.ext_upper(self.ext_index(x))
            .into_iter()
            .map(|v| self.ext_from_index(v))
            .collect()
    }

    pub fn set_names(&self, s: ElemSet) -> Vec<String> {
        s.iter().map(|i| self.names[i].clone()).collect()
    }
}

impl ElemSet {
    fn without_comparable(self, p: &Poset, i: usize) -> ElemSet {
        self.difference(p.comparable_set(i)).difference(ElemSet::singleton(i))
    }
}
