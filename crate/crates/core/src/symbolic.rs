//! Splitting members of `S^(n eps)` into `n` members of `S^(eps)`, and the
//! degree-one splitting of the Ehrhart ring.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::budget::Budget;
use crate::canonical::box_search;
use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::sequences::Epsilon;
use crate::weights::WeightMap;

/// `xi1(w) = floor(up(w) / n) - floor(strict_up(w) / n)` off the maximal
/// elements, `floor(xi(w) / n)` on them and at `-inf`; `xi2 = xi - xi1`.
pub fn power_split(p: &Poset, eps: Epsilon, n: i64, xi: &WeightMap) -> Result<(WeightMap, WeightMap)> {
    if n < 2 {
        return Err(Error::ParamOutOfRange(format!("power must be >= 2, got {n}")));
    }
    let e = eps.value();
    if !xi.in_s_n(p, n * e) {
        return Err(Error::NotInPower(n * e));
    }
    let xi1 = floor_part(p, n, xi);
    let xi2 = xi.sub(&xi1);
    if !xi1.in_s_n(p, e) || !xi2.in_s_n(p, (n - 1) * e) {
        return Err(Error::ConstructionInvariantViolated(format!(
            "split of {} leaves S^({e}) + S^({})",
            xi.display(p),
            (n - 1) * e
        )));
    }
    Ok((xi1, xi2))
}

fn floor_part(p: &Poset, n: i64, xi: &WeightMap) -> WeightMap {
    let pw = xi.path_weights(p);
    let values = (0..p.len())
        .map(|w| {
            if p.maximal().contains(w) {
                xi.values[w].div_euclid(n)
            } else {
                pw.up[w].div_euclid(n) - pw.strict_up[w].div_euclid(n)
            }
        })
        .collect();
    WeightMap::new(xi.deg.div_euclid(n), values)
}

/// Writes `xi` as a sum of `n` members of `S^(eps)` by splitting off one
/// piece at a time.
pub fn split_into(p: &Poset, eps: Epsilon, n: i64, xi: &WeightMap) -> Result<Vec<WeightMap>> {
    if n < 1 {
        return Err(Error::ParamOutOfRange(format!("power must be >= 1, got {n}")));
    }
    let mut pieces = Vec::with_capacity(n as usize);
    let mut rest = xi.clone();
    for k in (2..=n).rev() {
        let (a, b) = power_split(p, eps, k, &rest)?;
        pieces.push(a);
        rest = b;
    }
    if !rest.in_s_n(p, eps.value()) {
        return Err(Error::NotInPower(eps.value()));
    }
    pieces.push(rest);
    Ok(pieces)
}

/// Degrees of the pieces produced by `split_into` for a map of degree `deg`.
pub fn split_degrees(n: i64, deg: i64) -> Vec<i64> {
    let mut out = Vec::with_capacity(n as usize);
    let mut rest = deg;
    for k in (2..=n).rev() {
        let d = rest.div_euclid(k);
        out.push(d);
        rest -= d;
    }
    out.push(rest);
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PowerReport {
    pub eps: i64,
    pub n: i64,
    /// Members of `S^(n eps)` split, keyed by degree.
    pub per_degree: BTreeMap<i64, u64>,
    pub split_checked: u64,
    pub sums_checked: u64,
    pub violations: Vec<String>,
}

impl PowerReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub const DEFAULT_SUM_SAMPLES: usize = 64;

/// Splits every member of `S^(n eps)` with entries in `[n eps, entry_cap]`
/// and degree at most `degree_cap`, then samples sums of `n` members of
/// `S^(eps)` and checks they land in `S^(n eps)`.
pub fn verify_power_equality(
    p: &Poset,
    eps: Epsilon,
    n: i64,
    degree_cap: i64,
    entry_cap: i64,
    budget: &Budget,
) -> Result<PowerReport> {
    if n < 2 {
        return Err(Error::ParamOutOfRange(format!("power must be >= 2, got {n}")));
    }
    let e = eps.value();
    let mut report = PowerReport {
        eps: e,
        n,
        ..PowerReport::default()
    };
    let lo = vec![n * e; p.len()];
    let mut failure: Option<Error> = None;
    box_search(p, &lo, Some(entry_cap), degree_cap - n * e, budget, &mut |vals| {
        let base = WeightMap::new(0, vals.to_vec());
        let m = base.max_chain_weight(p);
        // piece values do not depend on the degree, so split once and then
        // follow only the degrees
        let lowest = WeightMap::new(m + n * e, vals.to_vec());
        let pieces = match split_into(p, eps, n, &lowest) {
            Ok(pieces) => pieces,
            Err(err) => {
                report.violations.push(format!("{}: {err}", lowest.display(p)));
                return ControlFlow::Continue(());
            }
        };
        let maxima: Vec<i64> = pieces.iter().map(|q| q.max_chain_weight(p)).collect();
        let total = pieces.iter().skip(1).fold(pieces[0].clone(), |acc, q| acc.add(q));
        if total.values != vals || pieces.iter().any(|q| q.min_value() < e) {
            report.violations.push(format!("split of {} is wrong", lowest.display(p)));
        }
        for deg in m + n * e..=degree_cap {
            if let Err(err) = budget.spend(1, "power verification") {
                failure = Some(err);
                return ControlFlow::Break(());
            }
            let degs = split_degrees(n, deg);
            if degs.iter().zip(&maxima).any(|(d, mx)| *d < mx + e) {
                let xi = WeightMap::new(deg, vals.to_vec());
                report.violations.push(format!("split of {} leaves S^({e})", xi.display(p)));
            }
            *report.per_degree.entry(deg).or_default() += 1;
            report.split_checked += 1;
        }
        ControlFlow::Continue(())
    })?;
    if let Some(err) = failure {
        return Err(err);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ (p.len() as u64) << 8 ^ n as u64);
    let top = (entry_cap / n).max(e);
    for _ in 0..DEFAULT_SUM_SAMPLES {
        budget.spend(1, "power verification")?;
        let parts: Vec<WeightMap> = (0..n)
            .map(|_| {
                let values: Vec<i64> = (0..p.len()).map(|_| rng.gen_range(e.min(top)..=top.max(e))).collect();
                let m = WeightMap::new(0, values.clone()).max_chain_weight(p);
                WeightMap::new(m + e + rng.gen_range(0..=2), values)
            })
            .collect();
        let total = parts.iter().skip(1).fold(parts[0].clone(), |acc, q| acc.add(q));
        if !total.in_s_n(p, n * e) {
            report.violations.push(format!("sum {} is not in S^({})", total.display(p), n * e));
        }
        report.sums_checked += 1;
    }
    Ok(report)
}

/// Splits off `chi_A + chi_{-inf}` where `A` is the set of maximal elements of
/// the support of `xi`.
pub fn standard_grading_split(p: &Poset, xi: &WeightMap) -> Result<(WeightMap, WeightMap)> {
    if !xi.in_s_n(p, 0) {
        return Err(Error::NotInRing);
    }
    if xi.deg < 2 {
        return Err(Error::DegreeTooSmall(xi.deg));
    }
    let support = (0..p.len()).filter(|&i| xi.values[i] > 0).collect::<crate::bitset::ElemSet>();
    let top = support
        .iter()
        .filter(|&i| !p.above(i).intersects(support))
        .collect();
    let xi1 = WeightMap::indicator(p, top);
    let xi2 = xi.sub(&xi1);
    if !xi1.in_s_n(p, 0) || !xi2.in_s_n(p, 0) {
        return Err(Error::ConstructionInvariantViolated(
            "degree-one split left the ring".into(),
        ));
    }
    Ok((xi1, xi2))
}

/// The pointwise floor `xi / n`, degree included.
pub fn naive_floor_split(xi: &WeightMap, n: i64) -> WeightMap {
    WeightMap::new(
        xi.deg.div_euclid(n),
        xi.values.iter().map(|v| v.div_euclid(n)).collect(),
    )
}

/// The constant `eps` map of minimal degree.
pub fn naive_constant_split(p: &Poset, eps: Epsilon) -> WeightMap {
    WeightMap::constant(p, eps.value(), crate::canonical::min_degree(p, eps))
}
