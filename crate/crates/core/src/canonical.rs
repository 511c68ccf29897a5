//! Generator tests for monomials of the (anti)canonical ideal and the
//! degree spectrum of its generators.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::bitset::ElemSet;
use crate::budget::Budget;
use crate::construct::build_generator;
use crate::error::{Error, Result};
use crate::oracle::{lattice_points, Polytope};
use crate::poset::{Chain, ExtElem, Poset, HARD_MAX_ELEMENTS};
use crate::sequences::{check_condition, dmax_with_witness, is_reduced, Condition, Epsilon, ZigzagSequence};
use crate::weights::{tight_chains, PathWeights, WeightMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Antichain,
    Decomposition,
    Sequence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// An antichain blocking every tight chain; the monomial is not a generator.
    Blocking(ElemSet),
    /// A reduced sequence with its chains; the monomial is a generator.
    Sequence { seq: ZigzagSequence, chains: Vec<Chain> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorVerdict {
    pub is_generator: bool,
    pub method: Method,
    pub witness: Option<Witness>,
}

impl GeneratorVerdict {
    pub fn to_json(&self, p: &Poset) -> Value {
        let method = match self.method {
            Method::Antichain => "antichain",
            Method::Decomposition => "decomposition",
            Method::Sequence => "sequence",
        };
        let witness = match &self.witness {
            None => Value::Null,
            Some(Witness::Blocking(a)) => json!({ "antichain": p.set_names(*a) }),
            Some(Witness::Sequence { seq, chains }) => json!({
                "sequence": seq.to_json(p),
                "chains": chains.iter().map(|c| p.set_names(c.iter().copied().collect())).collect::<Vec<_>>(),
            }),
        };
        json!({ "is_generator": self.is_generator, "method": method, "witness": witness })
    }
}

fn ensure_in_ideal(p: &Poset, eps: Epsilon, xi: &WeightMap) -> Result<PathWeights> {
    if xi.len() != p.len() {
        return Err(Error::BadWeightMap(format!(
            "map has {} entries, poset has {}",
            xi.len(),
            p.len()
        )));
    }
    let pw = xi.path_weights(p);
    if xi.min_value() < eps.value() || xi.deg < pw.max + eps.value() {
        return Err(Error::NotInIdeal(eps.value()));
    }
    Ok(pw)
}

/// Tight chains `C` with `sum = deg - eps`, as bitsets.
fn tight_sets(p: &Poset, eps: Epsilon, xi: &WeightMap, pw: &PathWeights) -> Vec<ElemSet> {
    if pw.max != xi.deg - eps.value() {
        return Vec::new();
    }
    tight_chains(p, pw)
        .into_iter()
        .map(|c| c.into_iter().collect())
        .collect()
}

/// Searches for an antichain inside `{xi > eps}` meeting every tight chain.
pub fn is_generator_antichain(p: &Poset, eps: Epsilon, xi: &WeightMap) -> Result<GeneratorVerdict> {
    let pw = ensure_in_ideal(p, eps, xi)?;
    let tight = tight_sets(p, eps, xi, &pw);
    let heavy: ElemSet = (0..p.len()).filter(|&i| xi.values[i] > eps.value()).collect();
    let blocking = hitting_antichain(p, &tight, heavy, ElemSet::EMPTY, ElemSet::EMPTY);
    Ok(GeneratorVerdict {
        is_generator: blocking.is_none(),
        method: Method::Antichain,
        witness: blocking.map(Witness::Blocking),
    })
}

fn hitting_antichain(p: &Poset, chains: &[ElemSet], heavy: ElemSet, chosen: ElemSet, blocked: ElemSet) -> Option<ElemSet> {
    let Some(open) = chains.iter().find(|c| !c.intersects(chosen)) else {
        return Some(chosen);
    };
    for a in open.intersection(heavy).difference(blocked).iter() {
        let next_blocked = blocked.union(p.comparable_set(a)).with(a);
        if let Some(found) = hitting_antichain(p, chains, heavy, chosen.with(a), next_blocked) {
            return Some(found);
        }
    }
    None
}

/// Tries every degree-one lattice point `xi1` of the chain polytope and
/// tests whether `xi - xi1` stays in the ideal.
pub fn is_generator_decomposition(p: &Poset, eps: Epsilon, xi: &WeightMap) -> Result<GeneratorVerdict> {
    ensure_in_ideal(p, eps, xi)?;
    let units = lattice_points(p, Polytope::Chain, 1, &Budget::unlimited())?;
    for u in units {
        let xi1 = WeightMap::new(1, u);
        if xi.sub(&xi1).in_s_n(p, eps.value()) {
            let a = (0..p.len()).filter(|&i| xi1.values[i] == 1).collect();
            return Ok(GeneratorVerdict {
                is_generator: false,
                method: Method::Decomposition,
                witness: Some(Witness::Blocking(a)),
            });
        }
    }
    Ok(GeneratorVerdict {
        is_generator: true,
        method: Method::Decomposition,
        witness: None,
    })
}

#[derive(Clone, Copy)]
struct YSource {
    stage: usize,
    x: Option<usize>,
    chain: usize,
}

/// Grows the sets `Y0 ⊆ Y1 ⊆ ..` and `X1 ⊆ X2 ⊆ ..`; a tight chain avoiding
/// the maximal elements of `Y` yields a reduced sequence by walking the
/// recorded stages back down.
pub fn generator_witness_sequence(p: &Poset, eps: Epsilon, xi: &WeightMap) -> Result<GeneratorVerdict> {
    let pw = ensure_in_ideal(p, eps, xi)?;
    let e = eps.value();
    let tight = tight_chains_checked(p, eps, xi, &pw);
    let verdict = |is_generator, witness| GeneratorVerdict {
        is_generator,
        method: Method::Sequence,
        witness,
    };
    if tight.is_empty() {
        return Ok(verdict(false, Some(Witness::Blocking(ElemSet::EMPTY))));
    }
    if let Some(c) = tight.iter().find(|c| c.iter().all(|&z| xi.values[z] == e)) {
        return Ok(verdict(
            true,
            Some(Witness::Sequence {
                seq: ZigzagSequence::empty(),
                chains: vec![c.clone()],
            }),
        ));
    }

    let n = p.len();
    let heavy = |z: usize| xi.values[z] > e;
    let mut y_src: Vec<Option<YSource>> = vec![None; n];
    let mut x_stage: Vec<Option<(usize, usize)>> = vec![None; n];
    for (ci, c) in tight.iter().enumerate() {
        let y = *c.iter().find(|&&z| heavy(z)).unwrap();
        if y_src[y].is_none() {
            y_src[y] = Some(YSource { stage: 0, x: None, chain: ci });
        }
    }
    let mut stage = 0;
    loop {
        stage += 1;
        let mut grew = false;
        // X_stage: everything below some y of an earlier stage
        for y in 0..n {
            let Some(src) = y_src[y] else { continue };
            if src.stage != stage - 1 {
                continue;
            }
            for x in p.below(y).iter() {
                if x_stage[x].is_none() {
                    x_stage[x] = Some((stage, y));
                    grew = true;
                }
            }
        }
        // Y_stage adds the first heavy element above each new x on each tight chain
        for (ci, c) in tight.iter().enumerate() {
            for (pos, &x) in c.iter().enumerate() {
                if x_stage[x].map(|(s, _)| s) != Some(stage) {
                    continue;
                }
                if let Some(&y) = c[pos + 1..].iter().find(|&&z| heavy(z)) {
                    if y_src[y].is_none() {
                        y_src[y] = Some(YSource {
                            stage,
                            x: Some(x),
                            chain: ci,
                        });
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }

    let y_set: ElemSet = (0..n).filter(|&y| y_src[y].is_some()).collect();
    let top: ElemSet = y_set.iter().filter(|&y| !p.above(y).intersects(y_set)).collect();
    let Some(avoid) = tight.iter().position(|c| !c.iter().any(|&z| top.contains(z))) else {
        return Ok(verdict(false, Some(Witness::Blocking(top))));
    };

    let c = &tight[avoid];
    let xt = *c.iter().rev().find(|&&z| heavy(z)).unwrap();
    let (t, _) = x_stage[xt].ok_or_else(|| {
        Error::ConstructionInvariantViolated("last heavy element of an avoiding chain is not in X".into())
    })?;
    let mut ys = vec![0; t];
    let mut xs = vec![0; t];
    let mut chains = vec![Vec::new(); t + 1];
    xs[t - 1] = xt;
    chains[t] = c.clone();
    let mut x = xt;
    for k in (0..t).rev() {
        let (_, y) = x_stage[x].unwrap();
        ys[k] = y;
        let src = y_src[y].unwrap();
        chains[k] = tight[src.chain].clone();
        if k > 0 {
            x = src.x.ok_or_else(|| {
                Error::ConstructionInvariantViolated("stage-0 element reached before x1".into())
            })?;
            xs[k - 1] = x;
        }
    }
    let seq = ZigzagSequence { ys, xs };
    if !check_condition(p, &seq, Condition::NPrime)? || !is_reduced(p, eps, &seq) {
        return Err(Error::ConstructionInvariantViolated(format!(
            "closure produced {} which is not reduced with condition N'",
            seq.display(p)
        )));
    }
    Ok(verdict(true, Some(Witness::Sequence { seq, chains })))
}

fn tight_chains_checked(p: &Poset, eps: Epsilon, xi: &WeightMap, pw: &PathWeights) -> Vec<Chain> {
    if pw.max != xi.deg - eps.value() {
        return Vec::new();
    }
    tight_chains(p, pw)
}

pub fn is_generator(p: &Poset, eps: Epsilon, xi: &WeightMap) -> Result<bool> {
    Ok(is_generator_antichain(p, eps, xi)?.is_generator)
}

pub fn min_degree(p: &Poset, eps: Epsilon) -> i64 {
    p.qd(eps.value(), ExtElem::Bottom, ExtElem::Top).unwrap()
}

/// Lowers the degree by one, decrementing `-inf` and the last heavy element
/// of every tight chain.
pub fn degree_decrement(p: &Poset, eps: Epsilon, xi: &WeightMap) -> Result<WeightMap> {
    let d0 = min_degree(p, eps);
    ensure_in_ideal(p, eps, xi)?;
    if xi.deg == d0 {
        return Err(Error::AtMinimalDegree(d0));
    }
    if !is_generator(p, eps, xi)? {
        return Err(Error::NotGenerator);
    }
    let e = eps.value();
    let pw = xi.path_weights(p);
    let mut out = xi.clone();
    out.deg -= 1;
    let mut hit = ElemSet::EMPTY;
    for c in tight_chains_checked(p, eps, xi, &pw) {
        if let Some(&z) = c.iter().rev().find(|&&z| xi.values[z] > e) {
            hit.insert(z);
        }
    }
    for z in hit.iter() {
        out.values[z] -= 1;
    }
    if !out.in_s_n(p, e) || !is_generator(p, eps, &out)? {
        return Err(Error::ConstructionInvariantViolated(
            "decremented map is not a generator".into(),
        ));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumMethod {
    Formula,
    BruteForce,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSpectrum {
    pub eps: Epsilon,
    pub d0: i64,
    pub dmax: i64,
    pub degrees: Vec<i64>,
    pub witnesses: BTreeMap<i64, WeightMap>,
}

impl DegreeSpectrum {
    pub fn is_interval(&self) -> bool {
        self.degrees == (self.d0..=self.dmax).collect::<Vec<_>>()
    }

    pub fn to_json(&self, p: &Poset) -> Value {
        json!({
            "eps": self.eps.value(),
            "d0": self.d0,
            "dmax": self.dmax,
            "degrees": self.degrees,
            "witnesses": self.witnesses.iter()
                .map(|(d, w)| (d.to_string(), serde_json::to_value(w.to_json(p)).unwrap()))
                .collect::<serde_json::Map<_, _>>(),
        })
    }
}

pub fn degree_spectrum(p: &Poset, eps: Epsilon, method: SpectrumMethod, budget: &Budget) -> Result<DegreeSpectrum> {
    let d0 = min_degree(p, eps);
    let top = dmax_with_witness(p, eps, Condition::NPrime, budget)?;
    match method {
        SpectrumMethod::Formula => {
            let mut witnesses = BTreeMap::new();
            let mut xi = build_generator(p, eps, &top.seq)?;
            if xi.deg != top.q {
                return Err(Error::ConstructionInvariantViolated(
                    "constructed generator has the wrong degree".into(),
                ));
            }
            loop {
                witnesses.insert(xi.deg, xi.clone());
                if xi.deg == d0 {
                    break;
                }
                xi = degree_decrement(p, eps, &xi)?;
            }
            Ok(DegreeSpectrum {
                eps,
                d0,
                dmax: top.q,
                degrees: (d0..=top.q).collect(),
                witnesses,
            })
        }
        SpectrumMethod::BruteForce => {
            let comp = Compressed::new(p);
            let degs: Vec<i64> = (d0 - 1..=top.q + 1).collect();
            let found: Vec<Result<Option<WeightMap>>> = degs
                .par_iter()
                .map(|&d| {
                    let sentinel = d < d0 || d > top.q;
                    comp.find_generator(eps, d, sentinel, budget)
                })
                .collect();
            let mut witnesses = BTreeMap::new();
            let mut degrees = Vec::new();
            for (d, r) in degs.into_iter().zip(found) {
                if let Some(w) = r? {
                    degrees.push(d);
                    witnesses.insert(d, comp.expand(eps, &w));
                }
            }
            Ok(DegreeSpectrum {
                eps,
                d0,
                dmax: top.q,
                degrees,
                witnesses,
            })
        }
    }
}

/// `p` with every run of contractible covers (`u`'s only upper cover is `v`
/// and `v`'s only lower cover is `u`) merged into one weighted node. Every
/// maximal chain contains a run entirely or not at all, and the members of a
/// run share all outside comparabilities, so existence questions about
/// ideal members and generators transfer exactly.
pub struct Compressed {
    pub poset: Poset,
    pub mult: Vec<i64>,
    pub members: Vec<Vec<usize>>,
}

impl Compressed {
    pub fn new(p: &Poset) -> Compressed {
        let n = p.len();
        let joined = |u: usize, v: usize| p.upper_covers(u) == ElemSet::singleton(v) && p.lower_covers(v) == ElemSet::singleton(u);
        let starts: Vec<usize> = p
            .topo_order()
            .iter()
            .copied()
            .filter(|&v| !p.lower_covers(v).iter().any(|u| joined(u, v)))
            .collect();
        let mut seg_of = vec![usize::MAX; n];
        let mut members = Vec::new();
        for s in starts {
            let mut run = vec![s];
            let mut cur = s;
            while let Some(v) = p.upper_covers(cur).first().filter(|&v| joined(cur, v)) {
                run.push(v);
                cur = v;
            }
            for &m in &run {
                seg_of[m] = members.len();
            }
            members.push(run);
        }
        let names: Vec<String> = members
            .iter()
            .map(|run| match run.as_slice() {
                [one] => p.name(*one).to_string(),
                [first, .., last] => format!("{}..{}", p.name(*first), p.name(*last)),
                [] => unreachable!(),
            })
            .collect();
        let mut covers = Vec::new();
        for (a, b) in p.covers() {
            if seg_of[a] != seg_of[b] {
                covers.push((names[seg_of[a]].clone(), names[seg_of[b]].clone()));
            }
        }
        let poset = Poset::with_limit(&names, &covers, HARD_MAX_ELEMENTS).expect("compression of a valid poset");
        let mult = members.iter().map(|r| r.len() as i64).collect();
        Compressed { poset, mult, members }
    }

    /// Spread a compressed map back over `P`: the first element of each run
    /// takes the excess, the rest take `eps`.
    pub fn expand(&self, eps: Epsilon, w: &WeightMap) -> WeightMap {
        let n: usize = self.members.iter().map(|r| r.len()).sum();
        let mut values = vec![eps.value(); n];
        for (s, run) in self.members.iter().enumerate() {
            values[run[0]] = w.values[s] - (self.mult[s] - 1) * eps.value();
        }
        WeightMap::new(w.deg, values)
    }

    /// Every compressed member of `S^(eps)` with degree `d`, handed to `visit`.
    pub fn for_each_member(
        &self,
        eps: Epsilon,
        d: i64,
        budget: &Budget,
        visit: &mut dyn FnMut(&[i64]) -> ControlFlow<()>,
    ) -> Result<()> {
        let lo: Vec<i64> = self.mult.iter().map(|k| k * eps.value()).collect();
        box_search(&self.poset, &lo, None, d - eps.value(), budget, visit)
    }

    /// Literal decomposition test on the compressed poset: is there an
    /// antichain `A` with `w - chi_A` still in the ideal?
    fn decomposes(&self, eps: Epsilon, d: i64, w: &[i64], antichains: &[ElemSet]) -> bool {
        let e = eps.value();
        let mut v = w.to_vec();
        antichains.iter().any(|a| {
            if a.iter().any(|s| w[s] - 1 < self.mult[s] * e) {
                return false;
            }
            for s in a.iter() {
                v[s] -= 1;
            }
            let m = PathWeights::compute(&self.poset, &v).max;
            for s in a.iter() {
                v[s] += 1;
            }
            m <= d - 1 - e
        })
    }

    fn find_generator(&self, eps: Epsilon, d: i64, exhaust: bool, budget: &Budget) -> Result<Option<WeightMap>> {
        let antichains = self.poset.antichains();
        let mut found: Option<WeightMap> = None;
        self.for_each_member(eps, d, budget, &mut |w| {
            if !self.decomposes(eps, d, w, &antichains) {
                if found.is_none() {
                    found = Some(WeightMap::new(d, w.to_vec()));
                }
                if !exhaust {
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        })?;
        Ok(found)
    }
}

/// Depth-first enumeration, in topological order, of all `w` with
/// `lo(z) <= w(z) <= entry_cap` and every maximal-chain sum at most `cap`.
/// A partial assignment is kept only if it extends with every remaining
/// entry at its minimum, so no dead branches are explored.
pub fn box_search(
    p: &Poset,
    lo: &[i64],
    entry_cap: Option<i64>,
    cap: i64,
    budget: &Budget,
    visit: &mut dyn FnMut(&[i64]) -> ControlFlow<()>,
) -> Result<()> {
    let n = p.len();
    // largest forced weight strictly above z, with everything at its minimum
    let mut rest_up = vec![0i64; n];
    for &z in p.topo_order().iter().rev() {
        rest_up[z] = p
            .upper_covers(z)
            .iter()
            .map(|w| lo[w] + rest_up[w])
            .max()
            .unwrap_or(0);
    }
    let search = BoxSearch {
        p,
        lo,
        entry_cap: entry_cap.unwrap_or(i64::MAX),
        cap,
        order: p.topo_order(),
        rest_up,
        budget,
    };
    let mut vals = vec![0i64; n];
    let mut down = vec![0i64; n];
    let _ = search.rec(0, &mut vals, &mut down, visit)?;
    Ok(())
}

struct BoxSearch<'a> {
    p: &'a Poset,
    lo: &'a [i64],
    entry_cap: i64,
    cap: i64,
    order: &'a [usize],
    rest_up: Vec<i64>,
    budget: &'a Budget,
}

impl BoxSearch<'_> {
    fn rec(
        &self,
        k: usize,
        vals: &mut Vec<i64>,
        down: &mut Vec<i64>,
        visit: &mut dyn FnMut(&[i64]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>> {
        self.budget.spend(1, "candidate box enumeration")?;
        if k == self.order.len() {
            return Ok(visit(vals));
        }
        let z = self.order[k];
        let below = self.p.lower_covers(z).iter().map(|w| down[w]).max().unwrap_or(0);
        let hi = (self.cap - self.rest_up[z] - below).min(self.entry_cap);
        for v in self.lo[z]..=hi {
            vals[z] = v;
            down[z] = below + v;
            if self.rec(k + 1, vals, down, visit)?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// All members of `S^(eps)` of degree `d`.
pub fn ideal_slice(p: &Poset, eps: Epsilon, d: i64, budget: &Budget) -> Result<Vec<WeightMap>> {
    let lo = vec![eps.value(); p.len()];
    let mut out = Vec::new();
    box_search(p, &lo, None, d - eps.value(), budget, &mut |w| {
        out.push(WeightMap::new(d, w.to_vec()));
        ControlFlow::Continue(())
    })?;
    Ok(out)
}
