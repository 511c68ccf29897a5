//! Zigzag sequences `y0 > x1 < y1 > ... > xt`, their q-values and the
//! exhaustive search for reduced ones.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::ElemSet;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::poset::{ExtElem, Poset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Epsilon {
    Plus,
    Minus,
}

impl Epsilon {
    pub const BOTH: [Epsilon; 2] = [Epsilon::Plus, Epsilon::Minus];

    #[inline]
    pub fn value(self) -> i64 {
        match self {
            Epsilon::Plus => 1,
            Epsilon::Minus => -1,
        }
    }

    pub fn from_i64(v: i64) -> Result<Epsilon> {
        match v {
            1 => Ok(Epsilon::Plus),
            -1 => Ok(Epsilon::Minus),
            _ => Err(Error::ParamOutOfRange(format!("epsilon must be 1 or -1, got {v}"))),
        }
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.value())
    }
}

impl Serialize for Epsilon {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.value())
    }
}

impl<'de> Deserialize<'de> for Epsilon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Epsilon::from_i64(v).map_err(serde::de::Error::custom)
    }
}

/// Which non-comparability clause a sequence must satisfy: `N` forbids
/// `y_i >= x_j`, `NPrime` only `y_i > x_j`, both for `i <= j - 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    N,
    NPrime,
}

impl Condition {
    pub fn label(self) -> &'static str {
        match self {
            Condition::N => "N",
            Condition::NPrime => "N'",
        }
    }
}

/// `ys = (y0, .., y_{t-1})`, `xs = (x1, .., x_t)`; `x0 = -inf`, `y_t = +inf`
/// are implicit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ZigzagSequence {
    pub ys: Vec<usize>,
    pub xs: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SequenceJson {
    pub ys: Vec<String>,
    pub xs: Vec<String>,
}

impl ZigzagSequence {
    pub fn empty() -> ZigzagSequence {
        ZigzagSequence::default()
    }

    pub fn new(ys: Vec<usize>, xs: Vec<usize>) -> Result<ZigzagSequence> {
        if ys.len() != xs.len() {
            return Err(Error::ParamOutOfRange(format!(
                "sequence has {} y's but {} x's",
                ys.len(),
                xs.len()
            )));
        }
        Ok(ZigzagSequence { ys, xs })
    }

    pub fn from_names(p: &Poset, flat: &[&str]) -> Result<ZigzagSequence> {
        if flat.len() % 2 != 0 {
            return Err(Error::ParamOutOfRange("sequence must have even length".into()));
        }
        let idx = flat.iter().map(|s| p.index_of(s)).collect::<Result<Vec<_>>>()?;
        ZigzagSequence::new(
            idx.iter().step_by(2).copied().collect(),
            idx.iter().skip(1).step_by(2).copied().collect(),
        )
    }

    #[inline]
    pub fn t(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// `x_i` for `0 <= i <= t`.
    #[inline]
    pub fn x(&self, i: usize) -> ExtElem {
        if i == 0 {
            ExtElem::Bottom
        } else {
            ExtElem::Elem(self.xs[i - 1])
        }
    }

    /// `y_i` for `0 <= i <= t`.
    #[inline]
    pub fn y(&self, i: usize) -> ExtElem {
        if i == self.t() {
            ExtElem::Top
        } else {
            ExtElem::Elem(self.ys[i])
        }
    }

    /// `y0, x1, y1, .., x_t` as one list; defines the canonical order.
    pub fn flat(&self) -> Vec<usize> {
        self.ys
            .iter()
            .zip(&self.xs)
            .flat_map(|(&y, &x)| [y, x])
            .collect()
    }

    pub fn display(&self, p: &Poset) -> String {
        if self.is_empty() {
            return "(empty)".to_string();
        }
        let mut s = String::new();
        for (k, (&y, &x)) in self.ys.iter().zip(&self.xs).enumerate() {
            if k > 0 {
                s.push_str(" < ");
            }
            s.push_str(p.name(y));
            s.push_str(" > ");
            s.push_str(p.name(x));
        }
        s
    }

    pub fn to_json(&self, p: &Poset) -> SequenceJson {
        SequenceJson {
            ys: self.ys.iter().map(|&i| p.name(i).to_string()).collect(),
            xs: self.xs.iter().map(|&i| p.name(i).to_string()).collect(),
        }
    }

    pub fn from_json(p: &Poset, raw: &SequenceJson) -> Result<ZigzagSequence> {
        let f = |names: &[String]| names.iter().map(|s| p.index_of(s)).collect::<Result<Vec<_>>>();
        ZigzagSequence::new(f(&raw.ys)?, f(&raw.xs)?)
    }

    fn check_indices(&self, p: &Poset) -> Result<()> {
        match self.ys.iter().chain(&self.xs).find(|&&i| i >= p.len()) {
            Some(i) => Err(Error::UnknownElement(format!("#{i}"))),
            None => Ok(()),
        }
    }
}

pub fn check_condition(p: &Poset, seq: &ZigzagSequence, cond: Condition) -> Result<bool> {
    seq.check_indices(p)?;
    let t = seq.t();
    for k in 0..t {
        if !p.lt(seq.xs[k], seq.ys[k]) {
            return Ok(false);
        }
        if k + 1 < t && !p.lt(seq.xs[k], seq.ys[k + 1]) {
            return Ok(false);
        }
    }
    for j in 2..=t {
        let xj = seq.xs[j - 1];
        for &yi in &seq.ys[..=j - 2] {
            let bad = match cond {
                Condition::N => p.leq(xj, yi),
                Condition::NPrime => p.lt(xj, yi),
            };
            if bad {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `qd(x_l, y_l)` and `qd(x_{l+1}, y_l)` along the sequence.
fn q_terms(p: &Poset, e: i64, seq: &ZigzagSequence) -> Option<(Vec<i64>, Vec<i64>)> {
    let t = seq.t();
    let a = (0..=t)
        .map(|l| p.qd(e, seq.x(l), seq.y(l)))
        .collect::<Option<Vec<_>>>()?;
    let b = (0..t)
        .map(|l| p.qd(e, seq.x(l + 1), seq.y(l)))
        .collect::<Option<Vec<_>>>()?;
    Some((a, b))
}

pub fn q_value(p: &Poset, eps: Epsilon, seq: &ZigzagSequence) -> Result<i64> {
    seq.check_indices(p)?;
    let (a, b) = q_terms(p, eps.value(), seq).ok_or_else(|| {
        Error::NotComparable(
            "sequence".into(),
            "does not alternate".into(),
        )
    })?;
    Ok(a.iter().sum::<i64>() - b.iter().sum::<i64>())
}

/// `q(x_i, y_i, .., x_j, y_j)` for all `i <= j` from the prefix sums.
struct Partial {
    sa: Vec<i64>,
    sb: Vec<i64>,
}

impl Partial {
    fn new(a: &[i64], b: &[i64]) -> Partial {
        let mut sa = vec![0];
        for v in a {
            sa.push(sa.last().unwrap() + v);
        }
        let mut sb = vec![0];
        for v in b {
            sb.push(sb.last().unwrap() + v);
        }
        Partial { sa, sb }
    }

    #[inline]
    fn q(&self, i: usize, j: usize) -> i64 {
        (self.sa[j + 1] - self.sa[i]) - (self.sb[j] - self.sb[i])
    }
}

/// `q(x_i, y_i, .., x_j, y_j)` for one stretch of the sequence.
pub fn segment_q(p: &Poset, eps: Epsilon, seq: &ZigzagSequence, i: usize, j: usize) -> Option<i64> {
    if i > j || j > seq.t() {
        return None;
    }
    let (a, b) = q_terms(p, eps.value(), seq)?;
    Some(Partial::new(&a, &b).q(i, j))
}

/// First pair `(i, j)` violating reducedness, if any.
pub fn first_unreduced_pair(p: &Poset, eps: Epsilon, seq: &ZigzagSequence) -> Option<(usize, usize)> {
    let e = eps.value();
    let (a, b) = q_terms(p, e, seq)?;
    let part = Partial::new(&a, &b);
    let t = seq.t();
    for j in 1..=t {
        for i in 0..j {
            if let Some(d) = p.qd(e, seq.x(i), seq.y(j)) {
                if seq.x(i) != seq.y(j) && d >= part.q(i, j) {
                    return Some((i, j));
                }
            }
        }
    }
    None
}

pub fn is_reduced(p: &Poset, eps: Epsilon, seq: &ZigzagSequence) -> bool {
    if seq.check_indices(p).is_err() || q_terms(p, eps.value(), seq).is_none() {
        return false;
    }
    first_unreduced_pair(p, eps, seq).is_none()
}

/// A sequence with its q-value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoredSequence {
    pub seq: ZigzagSequence,
    pub q: i64,
}

struct Search<'a> {
    p: &'a Poset,
    e: i64,
    cond: Condition,
    reduced_only: bool,
    budget: &'a Budget,
}

struct State {
    ys: Vec<usize>,
    xs: Vec<usize>,
    // a[l] = qd(x_l, y_l) for l < ys.len(); b[l] = qd(x_{l+1}, y_l)
    sa: Vec<i64>,
    sb: Vec<i64>,
    used_y: ElemSet,
    used_x: ElemSet,
}

impl State {
    fn x(&self, i: usize) -> ExtElem {
        if i == 0 {
            ExtElem::Bottom
        } else {
            ExtElem::Elem(self.xs[i - 1])
        }
    }

    fn q(&self, i: usize, j: usize, a_j: i64) -> i64 {
        (self.sa[j] - self.sa[i] + a_j) - (self.sb[j] - self.sb[i])
    }
}

impl Search<'_> {
    /// Whether appending `y` as `y_k` (k = ys.len()) keeps every pair
    /// `(i, k)` reduced. Returns `qd(x_k, y)`.
    fn y_ok(&self, st: &State, y: ExtElem) -> Option<i64> {
        let k = st.ys.len();
        let a_k = self.p.qd(self.e, st.x(k), y)?;
        if self.reduced_only {
            for i in 0..k {
                let xi = st.x(i);
                if xi != y && self.p.ext_lt(xi, y) {
                    let d = self.p.qd(self.e, xi, y).unwrap();
                    if d >= st.q(i, k, a_k) {
                        return None;
                    }
                }
            }
        }
        Some(a_k)
    }

    fn need_y(&self, st: &mut State, out: &mut Vec<ScoredSequence>) -> Result<()> {
        self.budget.spend(1, "sequence enumeration")?;
        let k = st.ys.len();
        if let Some(a_k) = self.y_ok(st, ExtElem::Top) {
            out.push(ScoredSequence {
                seq: ZigzagSequence {
                    ys: st.ys.clone(),
                    xs: st.xs.clone(),
                },
                q: st.q(0, k, a_k),
            });
        }
        let candidates = match k {
            0 => self.p.all(),
            _ => self.p.above(st.xs[k - 1]),
        }
        .difference(st.used_y);
        for y in candidates.iter() {
            self.push_y(st, y, out)?;
        }
        Ok(())
    }

    fn push_y(&self, st: &mut State, y: usize, out: &mut Vec<ScoredSequence>) -> Result<()> {
        let Some(a_k) = self.y_ok(st, ExtElem::Elem(y)) else {
            return Ok(());
        };
        let k = st.ys.len();
        // x_{k+1} < y_k, unused, and not below (or equal to, for N) any y_i, i <= k-1
        let mut forbid = st.used_x;
        for &yi in &st.ys[..k] {
            forbid = forbid.union(self.p.below(yi));
            if self.cond == Condition::N {
                forbid.insert(yi);
            }
        }
        let xs = self.p.below(y).difference(forbid);
        if xs.is_empty() {
            return Ok(());
        }
        st.ys.push(y);
        st.used_y.insert(y);
        st.sa.push(st.sa[k] + a_k);
        for x in xs.iter() {
            let b = self.p.qd(self.e, ExtElem::Elem(x), ExtElem::Elem(y)).unwrap();
            st.xs.push(x);
            st.used_x.insert(x);
            st.sb.push(st.sb[k] + b);
            let r = self.need_y(st, out);
            st.sb.pop();
            st.used_x.remove(x);
            st.xs.pop();
            r?;
        }
        st.sa.pop();
        st.used_y.remove(y);
        st.ys.pop();
        Ok(())
    }
}

fn fresh_state() -> State {
    State {
        ys: Vec::new(),
        xs: Vec::new(),
        sa: vec![0],
        sb: vec![0],
        used_y: ElemSet::EMPTY,
        used_x: ElemSet::EMPTY,
    }
}

/// All sequences satisfying `cond` (only the reduced ones if `reduced_only`),
/// in canonical order, with their q-values.
pub fn enumerate_sequences(
    p: &Poset,
    eps: Epsilon,
    cond: Condition,
    reduced_only: bool,
    budget: &Budget,
) -> Result<Vec<ScoredSequence>> {
    let search = Search {
        p,
        e: eps.value(),
        cond,
        reduced_only,
        budget,
    };
    budget.spend(1, "sequence enumeration")?;
    let mut out = Vec::new();
    let st = fresh_state();
    if let Some(a0) = search.y_ok(&st, ExtElem::Top) {
        out.push(ScoredSequence {
            seq: ZigzagSequence::empty(),
            q: a0,
        });
    }
    let parts: Vec<Result<Vec<ScoredSequence>>> = (0..p.len())
        .into_par_iter()
        .map(|y0| {
            let mut st = fresh_state();
            let mut part = Vec::new();
            search.push_y(&mut st, y0, &mut part)?;
            Ok(part)
        })
        .collect();
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

pub fn enumerate_reduced(p: &Poset, eps: Epsilon, cond: Condition) -> Vec<ZigzagSequence> {
    enumerate_sequences(p, eps, cond, true, &Budget::unlimited())
        .expect("unlimited budget")
        .into_iter()
        .map(|s| s.seq)
        .collect()
}

/// Largest q-value of a reduced sequence, and one sequence attaining it
/// (the first in canonical order).
pub fn dmax_with_witness(
    p: &Poset,
    eps: Epsilon,
    cond: Condition,
    budget: &Budget,
) -> Result<ScoredSequence> {
    let all = enumerate_sequences(p, eps, cond, true, budget)?;
    let best = all.iter().map(|s| s.q).max().expect("empty sequence is always reduced");
    Ok(all.into_iter().find(|s| s.q == best).unwrap())
}

pub fn dmax(p: &Poset, eps: Epsilon, cond: Condition) -> i64 {
    dmax_with_witness(p, eps, cond, &Budget::unlimited())
        .expect("unlimited budget")
        .q
}

/// Repeatedly splices out the first unreduced pair `(i, j)`, replacing the
/// stretch `x_i .. y_j` by the single step `x_i < y_j`.
pub fn reduce(p: &Poset, eps: Epsilon, seq: &ZigzagSequence) -> Result<ZigzagSequence> {
    if !check_condition(p, seq, Condition::NPrime)? {
        return Err(Error::NotReduced(format!(
            "{} does not satisfy condition N'",
            seq.display(p)
        )));
    }
    let mut cur = seq.clone();
    while let Some((i, j)) = first_unreduced_pair(p, eps, &cur) {
        cur = splice(&cur, i, j);
    }
    Ok(cur)
}

/// Keeps `y_0 .. y_{i-1}` and `x_1 .. x_i`, then continues at `y_j`.
pub fn splice(seq: &ZigzagSequence, i: usize, j: usize) -> ZigzagSequence {
    let mut ys: Vec<usize> = seq.ys[..i].to_vec();
    let mut xs: Vec<usize> = seq.xs[..i].to_vec();
    ys.extend_from_slice(&seq.ys[j.min(seq.ys.len())..]);
    xs.extend_from_slice(&seq.xs[j..]);
    ZigzagSequence { ys, xs }
}
