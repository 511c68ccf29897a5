//! Integer weight maps on `P ∪ {-inf}` and their chain statistics.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::bitset::ElemSet;
use crate::error::{Error, Result};
use crate::poset::{Chain, Poset};

/// `values[i]` is the weight of element `i`; `deg` is the weight of `-inf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightMap {
    pub deg: i64,
    pub values: Vec<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct WeightMapJson {
    pub deg: i64,
    pub values: IndexMap<String, i64>,
}

/// Up and down path maxima of a weight map, computed by one pass each way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathWeights {
    pub up: Vec<i64>,
    pub strict_up: Vec<i64>,
    pub down: Vec<i64>,
    pub strict_down: Vec<i64>,
    /// Maximum chain sum over maximal chains.
    pub max: i64,
}

impl PathWeights {
    pub fn compute(p: &Poset, values: &[i64]) -> PathWeights {
        let n = p.len();
        let mut up = vec![0; n];
        let mut strict_up = vec![0; n];
        for &z in p.topo_order().iter().rev() {
            strict_up[z] = p.upper_covers(z).iter().map(|w| up[w]).max().unwrap_or(0);
            up[z] = values[z] + strict_up[z];
        }
        let mut down = vec![0; n];
        let mut strict_down = vec![0; n];
        for &z in p.topo_order() {
            strict_down[z] = p.lower_covers(z).iter().map(|w| down[w]).max().unwrap_or(0);
            down[z] = values[z] + strict_down[z];
        }
        let max = p.minimal().iter().map(|z| up[z]).max().unwrap_or(0);
        PathWeights {
            up,
            strict_up,
            down,
            strict_down,
            max,
        }
    }

    /// Max weight of a maximal chain through `z`.
    pub fn through(&self, z: usize) -> i64 {
        self.up[z] + self.strict_down[z]
    }
}

impl WeightMap {
    pub fn new(deg: i64, values: Vec<i64>) -> WeightMap {
        WeightMap { deg, values }
    }

    /// The map equal to `c` on `P` with the given degree.
    pub fn constant(p: &Poset, c: i64, deg: i64) -> WeightMap {
        WeightMap::new(deg, vec![c; p.len()])
    }

    pub fn from_named(p: &Poset, deg: i64, named: &[(&str, i64)], default: i64) -> Result<WeightMap> {
        let mut values = vec![default; p.len()];
        for &(name, v) in named {
            values[p.index_of(name)?] = v;
        }
        Ok(WeightMap::new(deg, values))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> i64 {
        self.values[i]
    }

    pub fn chain_sum(&self, b: ElemSet) -> i64 {
        b.iter().map(|i| self.values[i]).sum()
    }

    pub fn path_weights(&self, p: &Poset) -> PathWeights {
        PathWeights::compute(p, &self.values)
    }

    pub fn up_weight(&self, p: &Poset, z: usize) -> i64 {
        self.path_weights(p).up[z]
    }

    pub fn strict_up_weight(&self, p: &Poset, z: usize) -> i64 {
        self.path_weights(p).strict_up[z]
    }

    pub fn down_weight(&self, p: &Poset, z: usize) -> i64 {
        self.path_weights(p).down[z]
    }

    pub fn strict_down_weight(&self, p: &Poset, z: usize) -> i64 {
        self.path_weights(p).strict_down[z]
    }

    pub fn max_chain_weight(&self, p: &Poset) -> i64 {
        self.path_weights(p).max
    }

    pub fn min_value(&self) -> i64 {
        self.values.iter().copied().min().unwrap_or(i64::MAX)
    }

    /// Membership in `S^(n)`.
    pub fn in_s_n(&self, p: &Poset, n: i64) -> bool {
        self.min_value() >= n && self.deg >= self.max_chain_weight(p) + n
    }

    /// Maximal chains whose weight is exactly `m`.
    pub fn level_chains(&self, p: &Poset, m: i64) -> Vec<Chain> {
        let pw = self.path_weights(p);
        if m == pw.max {
            return tight_chains(p, &pw);
        }
        if m > pw.max {
            return Vec::new();
        }
        p.maximal_chains()
            .into_iter()
            .filter(|c| c.iter().map(|&i| self.values[i]).sum::<i64>() == m)
            .collect()
    }

    pub fn add(&self, other: &WeightMap) -> WeightMap {
        WeightMap::new(
            self.deg + other.deg,
            self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn sub(&self, other: &WeightMap) -> WeightMap {
        WeightMap::new(
            self.deg - other.deg,
            self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        )
    }

    /// The characteristic map of `a ∪ {-inf}`.
    pub fn indicator(p: &Poset, a: ElemSet) -> WeightMap {
        WeightMap::new(1, (0..p.len()).map(|i| a.contains(i) as i64).collect())
    }

    pub fn to_json(&self, p: &Poset) -> WeightMapJson {
        WeightMapJson {
            deg: self.deg,
            values: (0..p.len()).map(|i| (p.name(i).to_string(), self.values[i])).collect(),
        }
    }

    pub fn from_json(p: &Poset, raw: &WeightMapJson) -> Result<WeightMap> {
        let mut values = vec![None; p.len()];
        for (name, &v) in &raw.values {
            values[p.index_of(name)?] = Some(v);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::BadWeightMap(format!("missing value for `{}`", p.name(i)))))
            .collect::<Result<Vec<_>>>()?;
        Ok(WeightMap::new(raw.deg, values))
    }

    pub fn display(&self, p: &Poset) -> String {
        let body: Vec<String> = (0..p.len())
            .map(|i| format!("{}:{}", p.name(i), self.values[i]))
            .collect();
        format!("({}, -inf:{})", body.join(", "), self.deg)
    }
}

/// Maximal chains of weight `pw.max`, walking only edges that keep the
/// chain on a maximum-weight path.
pub fn tight_chains(p: &Poset, pw: &PathWeights) -> Vec<Chain> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    for z in p.minimal().iter().filter(|&z| pw.up[z] == pw.max) {
        cur.push(z);
        tight_dfs(p, pw, &mut cur, &mut out);
        cur.pop();
    }
    out
}

fn tight_dfs(p: &Poset, pw: &PathWeights, cur: &mut Vec<usize>, out: &mut Vec<Chain>) {
    let z = *cur.last().unwrap();
    if p.maximal().contains(z) {
        out.push(cur.clone());
        return;
    }
    for w in p.upper_covers(z).iter().filter(|&w| pw.up[w] == pw.strict_up[z]) {
        cur.push(w);
        tight_dfs(p, pw, cur, out);
        cur.pop();
    }
}
