//! Invariant checks shared by the acceptance suite and the randomized tests.
//! Each returns the first violation found.

#![allow(dead_code)]

use std::collections::BTreeSet;

use chainlevel::canonical::{
    generator_witness_sequence, ideal_slice, is_generator_antichain, is_generator_decomposition, min_degree,
};
use chainlevel::construct::build_with_trace;
use chainlevel::oracle::{comparability_graph, lattice_points, stable_sets, Polytope};
use chainlevel::sequences::{check_condition, dmax, enumerate_sequences, is_reduced, q_value, reduce};
use chainlevel::symbolic::power_split;
use chainlevel::{Budget, Condition, ElemSet, Epsilon, ExtElem, Poset, WeightMap};
use rand::Rng;

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

pub fn ext_all(p: &Poset) -> Vec<ExtElem> {
    let mut v = vec![ExtElem::Bottom];
    v.extend((0..p.len()).map(ExtElem::Elem));
    v.push(ExtElem::Top);
    v
}

/// Longest and shortest saturated chain lengths by listing the chains.
fn chain_lengths(p: &Poset, x: ExtElem, y: ExtElem) -> (i64, i64) {
    let chains = p.saturated_chains_between(x, y).unwrap();
    let lens: Vec<i64> = chains.iter().map(|c| c.len() as i64 - 1).collect();
    (*lens.iter().max().unwrap(), *lens.iter().min().unwrap())
}

pub fn poset_invariants(p: &Poset) -> Check {
    let ext = ext_all(p);
    for &x in &ext {
        for &y in &ext {
            if !p.ext_leq(x, y) {
                ensure!(p.qd(1, x, y).is_none(), "qd defined for incomparable pair");
                continue;
            }
            let (long, short) = chain_lengths(p, x, y);
            ensure!(p.qd(1, x, y) == Some(long), "qd(1) is not the rank");
            ensure!(p.qd(-1, x, y) == Some(-short), "qd(-1) is not minus the distance");
            for n in [-3, -2, -1, 0, 1, 2, 3] {
                let base = p.qd(n, x, y).unwrap();
                for m in 1..=3 {
                    ensure!(p.qd(m * n, x, y) == Some(m * base), "scaling fails");
                }
                for &z in &ext {
                    if p.ext_leq(x, z) && p.ext_leq(z, y) {
                        let s = p.qd(n, x, z).unwrap() + p.qd(n, z, y).unwrap();
                        ensure!(s <= base, "superadditivity fails for n={n}");
                    }
                }
            }
        }
    }
    for c in p.maximal_chains() {
        let set: ElemSet = c.iter().copied().collect();
        ensure!(p.is_chain(set), "maximal chain is not a chain");
        for w in (0..p.len()).filter(|&w| !set.contains(w)) {
            ensure!(!p.is_chain(set.with(w)), "maximal chain extends by {}", p.name(w));
        }
    }
    let units = lattice_points(p, Polytope::Chain, 1, &Budget::unlimited()).unwrap();
    let as_sets: BTreeSet<u64> = units
        .iter()
        .map(|u| (0..p.len()).filter(|&i| u[i] == 1).collect::<ElemSet>().0)
        .collect();
    let anti: BTreeSet<u64> = p.antichains().iter().map(|a| a.0).collect();
    ensure!(units.iter().all(|u| u.iter().all(|&v| v <= 1)), "unit point with entry > 1");
    ensure!(as_sets == anti, "degree-one chain points differ from antichains");
    let stable: BTreeSet<u64> = stable_sets(&comparability_graph(p)).iter().map(|a| a.0).collect();
    ensure!(stable == anti, "stable sets differ from antichains");
    Ok(())
}

pub fn random_map<R: Rng>(p: &Poset, rng: &mut R, lo: i64, hi: i64) -> WeightMap {
    let values: Vec<i64> = (0..p.len()).map(|_| rng.gen_range(lo..=hi)).collect();
    let m = WeightMap::new(0, values.clone()).max_chain_weight(p);
    WeightMap::new(m + rng.gen_range(-2..=3), values)
}

/// Up weight from `z` by listing saturated chains to `+inf`.
fn up_by_chains(p: &Poset, values: &[i64], z: usize) -> i64 {
    p.saturated_chains_between(ExtElem::Elem(z), ExtElem::Top)
        .unwrap()
        .iter()
        .map(|c| {
            c.iter()
                .map(|w| match w {
                    ExtElem::Elem(i) => values[*i],
                    _ => 0,
                })
                .sum::<i64>()
        })
        .max()
        .unwrap()
}

pub fn weight_invariants(p: &Poset, xi: &WeightMap, other: &WeightMap) -> Check {
    let pw = xi.path_weights(p);
    let m = pw.max;
    let chain_max = p
        .maximal_chains()
        .iter()
        .map(|c| c.iter().map(|&i| xi.values[i]).sum::<i64>())
        .max()
        .unwrap();
    ensure!(m == chain_max, "max chain weight {m} != {chain_max}");
    for z in 0..p.len() {
        ensure!(pw.up[z] == up_by_chains(p, &xi.values, z), "up weight of {} wrong", p.name(z));
        ensure!(pw.strict_up[z] + xi.values[z] + pw.strict_down[z] <= m, "plus inequality fails");
        if !p.maximal().contains(z) {
            let best = p.upper_covers(z).iter().map(|w| pw.up[w]).max().unwrap();
            ensure!(pw.strict_up[z] == best, "strict up is not the cover maximum");
        }
    }
    for x in 0..p.len() {
        for y in p.above(x).iter() {
            let open: Vec<usize> = p.above(x).intersection(p.below(y)).iter().collect();
            let n = open.iter().map(|&w| xi.values[w]).min().unwrap_or(i64::MAX).min(3);
            for n in [n, n - 1] {
                let q = p.qd(n, ExtElem::Elem(x), ExtElem::Elem(y)).unwrap();
                ensure!(pw.down[x] + q - n + pw.up[y] <= m, "through-interval bound fails");
                ensure!(pw.strict_down[y] >= q - n + pw.down[x], "down lower bound fails");
            }
        }
    }
    for c in p.maximal_chains() {
        let b: ElemSet = c.into_iter().collect();
        ensure!(
            xi.add(other).chain_sum(b) == xi.chain_sum(b) + other.chain_sum(b)
                && xi.sub(other).chain_sum(b) == xi.chain_sum(b) - other.chain_sum(b),
            "chain sums are not additive"
        );
    }
    for a in -2..=2 {
        for b in -2..=2 {
            if xi.in_s_n(p, a) && other.in_s_n(p, b) {
                ensure!(xi.add(other).in_s_n(p, a + b), "S^({a}) + S^({b}) not in S^({})", a + b);
            }
        }
    }
    for n in -3..=3 {
        let c = WeightMap::constant(p, n, p.qd(n, ExtElem::Bottom, ExtElem::Top).unwrap());
        ensure!(c.in_s_n(p, n), "constant map not in S^({n})");
    }
    Ok(())
}

/// Floor and ceiling identities of the power split.
pub fn split_identities(p: &Poset, eps: Epsilon, n: i64, xi: &WeightMap) -> Check {
    let (a, b) = power_split(p, eps, n, xi).map_err(|e| e.to_string())?;
    let (pw, pa, pb) = (xi.path_weights(p), a.path_weights(p), b.path_weights(p));
    let ceil = |v: i64| -((-(n - 1) * v).div_euclid(n));
    for z in 0..p.len() {
        ensure!(pa.up[z] == pw.up[z].div_euclid(n), "floor identity fails at {}", p.name(z));
        ensure!(pb.up[z] == ceil(pw.up[z]), "ceiling identity fails at {}", p.name(z));
    }
    ensure!(pa.max == pw.max.div_euclid(n), "max of first part");
    ensure!(pb.max == ceil(pw.max), "max of second part");
    Ok(())
}

pub fn sequence_invariants(p: &Poset, eps: Epsilon) -> Check {
    let b = Budget::unlimited();
    let all = enumerate_sequences(p, eps, Condition::NPrime, false, &b).unwrap();
    for s in &all {
        let seq = &s.seq;
        let t = seq.t();
        for i in 0..t {
            for j in 0..t {
                if i != j && (p.leq(seq.ys[i], seq.ys[j]) || p.leq(seq.xs[i], seq.xs[j])) {
                    ensure!(i < j, "order forced backwards in {}", seq.display(p));
                }
            }
        }
        for k in 0..t {
            for l in 1..=t {
                if p.leq(seq.ys[k], seq.xs[l - 1]) {
                    ensure!(l >= k + 2, "y below x too early in {}", seq.display(p));
                }
            }
        }
        ensure!(q_value(p, eps, seq).unwrap() == s.q, "q value mismatch");
        let r = reduce(p, eps, seq).unwrap();
        ensure!(is_reduced(p, eps, &r), "reduce did not reach a reduced sequence");
        ensure!(check_condition(p, &r, Condition::NPrime).unwrap(), "reduce broke condition N'");
        ensure!(q_value(p, eps, &r).unwrap() >= s.q, "reduce lowered q for {}", seq.display(p));
    }
    let n_seqs = enumerate_sequences(p, eps, Condition::N, false, &b).unwrap();
    for s in &n_seqs {
        ensure!(check_condition(p, &s.seq, Condition::NPrime).unwrap(), "N sequence is not N'");
    }
    ensure!(
        dmax(p, eps, Condition::NPrime) >= dmax(p, eps, Condition::N),
        "dmax under N exceeds N'"
    );
    Ok(())
}

/// Builds from every reduced sequence and checks the result in all three ways.
pub fn construction_invariants(p: &Poset, eps: Epsilon) -> Check {
    let all = enumerate_sequences(p, eps, Condition::NPrime, true, &Budget::unlimited()).unwrap();
    for s in all {
        let tr = build_with_trace(p, eps, &s.seq, true).map_err(|e| format!("{}: {e}", s.seq.display(p)))?;
        ensure!(tr.xi_final.deg == s.q, "degree {} != q {}", tr.xi_final.deg, s.q);
        ensure!(tr.steps.iter().all(|st| st.new >= st.old), "iteration is not monotone");
        let verdicts = three_way(p, eps, &tr.xi_final)?;
        ensure!(verdicts == [true; 3], "built map fails a generator test: {verdicts:?}");
    }
    Ok(())
}

pub fn three_way(p: &Poset, eps: Epsilon, xi: &WeightMap) -> Result<[bool; 3], String> {
    let e = |r: chainlevel::Result<chainlevel::canonical::GeneratorVerdict>| {
        r.map(|v| v.is_generator).map_err(|e| format!("{}: {e}", xi.display(p)))
    };
    Ok([
        e(is_generator_antichain(p, eps, xi))?,
        e(is_generator_decomposition(p, eps, xi))?,
        e(generator_witness_sequence(p, eps, xi))?,
    ])
}

/// Tight-chain splicing and the heavy-element property on every member of
/// the slices from `d0` to `d0 + extra`.
pub fn tight_chain_invariants(p: &Poset, eps: Epsilon, extra: i64) -> Check {
    let e = eps.value();
    let d0 = min_degree(p, eps);
    let b = Budget::unlimited();
    ensure!(ideal_slice(p, eps, d0 - 1, &b).unwrap().is_empty(), "member below minimal degree");
    for d in d0..=d0 + extra {
        for xi in ideal_slice(p, eps, d, &b).unwrap() {
            let tight: Vec<Vec<usize>> = p
                .maximal_chains()
                .into_iter()
                .filter(|c| c.iter().map(|&i| xi.values[i]).sum::<i64>() == d - e)
                .collect();
            let sets: BTreeSet<Vec<usize>> = tight.iter().cloned().collect();
            for c1 in &tight {
                for c2 in &tight {
                    for &z in c1.iter().filter(|z| c2.contains(z)) {
                        let mut s: Vec<usize> = c1.iter().copied().take_while(|&w| w != z).collect();
                        s.push(z);
                        s.extend(c2.iter().copied().skip_while(|&w| w != z).skip(1));
                        ensure!(sets.contains(&s), "spliced chain is not tight");
                    }
                }
                if d > d0 {
                    ensure!(c1.iter().any(|&z| xi.values[z] > e), "tight chain without heavy element");
                }
            }
        }
    }
    Ok(())
}
