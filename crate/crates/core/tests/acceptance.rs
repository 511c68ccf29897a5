//! One line per acceptance criterion; exits nonzero if any fails.

mod support;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use chainlevel::canonical::{degree_spectrum, ideal_slice, min_degree, SpectrumMethod};
use chainlevel::catalog::{self, all_posets_up_to};
use chainlevel::construct::{build_with_trace, mu_tables};
use chainlevel::level::{bounded_q_check, check_implication, is_level, PolytopeKind, Variant};
use chainlevel::oracle::{hilbert_compare, interior_points};
use chainlevel::sequences::dmax;
use chainlevel::symbolic::{naive_constant_split, naive_floor_split, power_split, verify_power_equality};
use chainlevel::{Budget, Condition, Epsilon, Poset, WeightMap, ZigzagSequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn level_example() -> Outcome {
    let (n, m1, m2) = (4i64, 2i64, 2i64);
    let p = catalog::level(4, 2, 2).map_err(err)?;
    check(is_level(&p, PolytopeKind::Order, Variant::Canonical).verdict, || "order side not level".into())?;
    let chain = is_level(&p, PolytopeKind::Chain, Variant::Canonical);
    let w = chain.witness.as_ref().map(|s| s.display(&p));
    check(!chain.verdict && w.as_deref() == Some("d > a1 < a4 > d"), || format!("chain verdict {w:?}"))?;
    let b = Budget::unlimited();
    let want = vec![m1 + m2 + 2, m1 + m2 + n - 1];
    for m in [SpectrumMethod::Formula, SpectrumMethod::BruteForce] {
        let s = degree_spectrum(&p, Epsilon::Plus, m, &b).map_err(err)?;
        check(s.degrees == want, || format!("{m:?} spectrum {:?}", s.degrees))?;
    }
    let xi = WeightMap::from_named(&p, m1 + m2 + n - 1, &[("a1", m1), ("a4", m2), ("d", n - 2)], 1).map_err(err)?;
    let v = support::three_way(&p, Epsilon::Plus, &xi)?;
    check(v == [true; 3], || format!("explicit map verdicts {v:?}"))?;
    Ok("spectrum {6,7}, witness d > a1 < a4 > d".into())
}

fn antican_example() -> Outcome {
    let p = catalog::antican(5).map_err(err)?;
    check(is_level(&p, PolytopeKind::Order, Variant::Anticanonical).verdict, || "order side not level".into())?;
    let chain = is_level(&p, PolytopeKind::Chain, Variant::Anticanonical);
    let w = chain.witness.as_ref().map(|s| s.display(&p));
    check(w.as_deref() == Some("d2 > a1 < a8 > d2"), || format!("witness {w:?}"))?;
    check((chain.d0, chain.dmax) == (-4, 1), || format!("d0, dmax = {}, {}", chain.d0, chain.dmax))?;
    let s = degree_spectrum(&p, Epsilon::Minus, SpectrumMethod::BruteForce, &Budget::unlimited()).map_err(err)?;
    check(s.degrees == (-4..=1).collect::<Vec<_>>(), || format!("brute-force spectrum {:?}", s.degrees))?;
    let xi = WeightMap::from_named(&p, 1, &[("a1", 4), ("a8", 4), ("d2", 4)], -1).map_err(err)?;
    let v = support::three_way(&p, Epsilon::Minus, &xi)?;
    check(v == [true; 3], || format!("explicit map verdicts {v:?}"))?;
    Ok("spectrum [-4, 1]".into())
}

fn snapshots(p: &Poset, seq: &[&str]) -> Result<(chainlevel::construct::MuTables, Vec<Vec<i64>>), String> {
    let seq = ZigzagSequence::from_names(p, seq).map_err(err)?;
    let mu = mu_tables(p, Epsilon::Plus, &seq).map_err(err)?;
    let tr = build_with_trace(p, Epsilon::Plus, &seq, true).map_err(err)?;
    let mut cur = tr.xi0.clone();
    let mut out = vec![cur.clone()];
    for s in &tr.steps {
        cur[s.element] = s.new;
        out.push(cur.clone());
    }
    check(tr.xi_final.values == cur, || "final map differs from last step".into())?;
    Ok((mu, out))
}

fn construction_examples() -> Outcome {
    let p = catalog::grid6();
    let (mu, snaps) = snapshots(&p, &["q1", "p2", "q2", "p3"])?;
    check(mu.d == 6, || format!("d = {}", mu.d))?;
    let named = |p: &Poset, d, pairs: &[(&str, i64)]| WeightMap::from_named(p, d, pairs, 1).unwrap().values;
    let want = vec![
        named(&p, 6, &[("q1", 3), ("q2", 2)]),
        named(&p, 6, &[("q1", 3), ("q2", 2), ("p2", 2)]),
        named(&p, 6, &[("q1", 3), ("q2", 2), ("p2", 2), ("p3", 3)]),
    ];
    check(snaps == want, || format!("d=6 maps {snaps:?}"))?;

    let p = catalog::shared7();
    let (mu, snaps) = snapshots(&p, &["R3", "L1", "L4", "R3"])?;
    check(
        mu.d == 7 && mu.mu_prime == [4, 2, 0] && mu.mu_dprime == [7, 5, 3],
        || format!("mu tables {mu:?}"),
    )?;
    let xi1 = named(&p, 7, &[("R3", 2), ("L4", 2), ("L1", 2)]);
    let want = vec![named(&p, 7, &[("R3", 2), ("L4", 2)]), xi1.clone(), xi1];
    check(snaps == want, || format!("d=7 maps {snaps:?}"))?;
    Ok("mu' = (4,2,0), mu'' = (7,5,3); both figures match".into())
}

fn symbolic_powers(posets: &[Poset]) -> Outcome {
    let b = Budget::unlimited();
    let jobs: Vec<(&Poset, Epsilon, i64)> = posets
        .iter()
        .flat_map(|p| Epsilon::BOTH.into_iter().flat_map(move |e| [(p, e, 2), (p, e, 3)]))
        .collect();
    let reports = jobs
        .par_iter()
        .map(|&(p, eps, n)| verify_power_equality(p, eps, n, 10, 6, &b).map(|r| (eps, n, r)))
        .collect::<chainlevel::Result<Vec<_>>>()
        .map_err(err)?;
    let mut splits = 0;
    let mut sums = 0;
    for (eps, n, r) in reports {
        if let Some(v) = r.violations.first() {
            return Err(format!("eps={eps}, n={n}: {v}"));
        }
        splits += r.split_checked;
        sums += r.sums_checked;
    }
    let c = catalog::chain2();
    let xi = WeightMap::new(8, vec![3, 3]);
    let naive = naive_floor_split(&xi, 2);
    check(!xi.sub(&naive).in_s_n(&c, 1), || "pointwise floor split unexpectedly works".into())?;
    check(power_split(&c, Epsilon::Plus, 2, &xi).is_ok(), || "power split fails on chain".into())?;
    let p1 = catalog::p1();
    let xi = WeightMap::new(6, vec![2, 2, 4]);
    let naive = naive_constant_split(&p1, Epsilon::Plus);
    check(naive == WeightMap::new(3, vec![1, 1, 1]), || format!("constant split {naive:?}"))?;
    check(!xi.sub(&naive).in_s_n(&p1, 1), || "constant split unexpectedly works".into())?;
    check(power_split(&p1, Epsilon::Plus, 2, &xi).is_ok(), || "power split fails on P1".into())?;
    Ok(format!("{splits} splits, {sums} sampled sums, both naive splits fail"))
}

fn generator_agreement(posets: &[Poset]) -> Outcome {
    let b = Budget::unlimited();
    let mut total = 0u64;
    for p in posets {
        for eps in Epsilon::BOTH {
            let d0 = min_degree(p, eps);
            let top = dmax(p, eps, Condition::NPrime);
            for d in d0..=top + 1 {
                for xi in ideal_slice(p, eps, d, &b).map_err(err)? {
                    let v = support::three_way(p, eps, &xi)?;
                    check(v[0] == v[1] && v[1] == v[2], || format!("eps={eps} {}: {v:?}", xi.display(p)))?;
                    total += 1;
                }
            }
        }
    }
    Ok(format!("{total} maps, no disagreement"))
}

fn degree_intervals(posets: &[Poset]) -> Outcome {
    let b = Budget::unlimited();
    for p in posets {
        for eps in Epsilon::BOTH {
            let f = degree_spectrum(p, eps, SpectrumMethod::Formula, &b).map_err(err)?;
            let bf = degree_spectrum(p, eps, SpectrumMethod::BruteForce, &b).map_err(err)?;
            check(f.is_interval() && f.degrees == bf.degrees, || {
                format!("eps={eps}: formula {:?} vs brute force {:?}", f.degrees, bf.degrees)
            })?;
            for w in f.witnesses.values() {
                check(support::three_way(p, eps, w)? == [true; 3], || format!("formula witness {}", w.display(p)))?;
            }
        }
    }
    Ok(format!("{} posets, both signs", posets.len()))
}

fn hilbert(posets: &[Poset]) -> Outcome {
    let b = Budget::unlimited();
    for p in posets {
        let r = hilbert_compare(p, 4, &b).map_err(err)?;
        check(r.equal, || format!("counts {:?} vs {:?}", r.order, r.chain))?;
    }
    Ok(format!("{} posets, n <= 4", posets.len()))
}

fn level_implication(posets: &[Poset]) -> Outcome {
    let b = Budget::unlimited();
    for p in posets {
        let r = check_implication(p);
        check(r.holds, || format!("implication fails: {r:?}"))?;
        for k in PolytopeKind::BOTH {
            for v in Variant::BOTH {
                let lv = is_level(p, k, v).verdict;
                check(lv == bounded_q_check(p, v.eps(), k), || format!("{} {} decisions differ", k.label(), v.label()))?;
            }
        }
        if p.len() <= 5 {
            let s = degree_spectrum(p, Epsilon::Plus, SpectrumMethod::BruteForce, &b).map_err(err)?;
            check(r.chain_canonical == (s.degrees.len() == 1), || "level verdict disagrees with spectrum".into())?;
        }
    }
    Ok(format!("{} posets", posets.len()))
}

fn interior(posets: &[Poset]) -> Outcome {
    let b = Budget::unlimited();
    for p in posets {
        for n in 1..=5 {
            let pts: BTreeSet<Vec<i64>> = interior_points(p, n, &b).map_err(err)?.into_iter().collect();
            let slice: BTreeSet<Vec<i64>> = ideal_slice(p, Epsilon::Plus, n, &b)
                .map_err(err)?
                .into_iter()
                .map(|w| w.values)
                .collect();
            check(pts == slice, || format!("n={n}: {} interior points vs {} slice members", pts.len(), slice.len()))?;
        }
    }
    Ok(format!("{} posets, n <= 5", posets.len()))
}

fn invariants(posets: &[Poset]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for p in posets {
        support::poset_invariants(p)?;
        for _ in 0..8 {
            let a = support::random_map(p, &mut rng, -2, 4);
            let c = support::random_map(p, &mut rng, -2, 4);
            support::weight_invariants(p, &a, &c)?;
        }
        for eps in Epsilon::BOTH {
            support::sequence_invariants(p, eps)?;
            support::construction_invariants(p, eps)?;
            support::tight_chain_invariants(p, eps, 2)?;
            for n in [2, 3] {
                let lo = n * eps.value();
                for _ in 0..8 {
                    let mut xi = support::random_map(p, &mut rng, lo, lo + 5);
                    xi.deg = xi.max_chain_weight(p) + lo + rng.gen_range(0..4);
                    support::split_identities(p, eps, n, &xi)?;
                }
            }
        }
    }
    Ok(format!("{} posets", posets.len()))
}

fn main() -> ExitCode {
    let small = all_posets_up_to(5);
    let medium = all_posets_up_to(6);
    let criteria: Vec<(&str, Duration, Box<dyn Fn() -> Outcome>)> = vec![
        ("level example", Duration::from_secs(10), Box::new(level_example)),
        ("anticanonical level example", Duration::from_secs(60), Box::new(antican_example)),
        ("worked constructions", Duration::from_secs(1), Box::new(construction_examples)),
        ("symbolic powers", Duration::from_secs(300), Box::new(|| symbolic_powers(&small))),
        ("three-way generator agreement", Duration::from_secs(600), Box::new(|| generator_agreement(&small))),
        ("degree interval", Duration::from_secs(600), Box::new(|| degree_intervals(&small))),
        ("Hilbert equality", Duration::from_secs(300), Box::new(|| hilbert(&medium))),
        ("level implication", Duration::from_secs(600), Box::new(|| level_implication(&medium))),
        ("interior points", Duration::from_secs(600), Box::new(|| interior(&small))),
        ("property invariants", Duration::from_secs(600), Box::new(|| invariants(&small))),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > *limit => Err(format!("{detail}, but took {took:.1?} (limit {limit:?})")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}; {took:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({why}; {took:.2?})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
