//! Building a generator of the (anti)canonical ideal from a reduced
//! Condition N' sequence.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poset::{Chain, ExtElem, Poset};
use crate::sequences::{check_condition, first_unreduced_pair, Condition, Epsilon, ZigzagSequence};
use crate::weights::{PathWeights, WeightMap};

/// `mu_prime[i]` belongs to `y_i` and `mu_dprime[i]` to `x_i`, by position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuTables {
    pub d: i64,
    pub mu_prime: Vec<i64>,
    pub mu_dprime: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub k: usize,
    pub element: usize,
    pub old: i64,
    pub new: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionTrace {
    pub eps: Epsilon,
    pub seq: ZigzagSequence,
    pub mu: MuTables,
    pub xi0: Vec<i64>,
    pub steps: Vec<Step>,
    pub xi_final: WeightMap,
    /// One tight chain per sequence position.
    pub chains: Vec<Chain>,
}

impl ConstructionTrace {
    pub fn to_json(&self, p: &Poset) -> Value {
        let named = |v: &[i64]| -> Value {
            Value::Object(
                (0..p.len())
                    .map(|i| (p.name(i).to_string(), json!(v[i])))
                    .collect(),
            )
        };
        json!({
            "eps": self.eps.value(),
            "sequence": self.seq.to_json(p),
            "d": self.mu.d,
            "mu_prime": self.mu.mu_prime,
            "mu_dprime": self.mu.mu_dprime,
            "xi0": named(&self.xi0),
            "steps": self.steps.iter().map(|s| json!({
                "k": s.k,
                "element": p.name(s.element),
                "old": s.old,
                "new": s.new,
            })).collect::<Vec<_>>(),
            "xi": self.xi_final.to_json(p),
            "chains": self.chains.iter().map(|c| p.set_names(c.iter().copied().collect())).collect::<Vec<_>>(),
        })
    }
}

fn invariant(msg: String) -> Error {
    Error::ConstructionInvariantViolated(msg)
}

fn qd(p: &Poset, e: i64, x: ExtElem, y: ExtElem) -> Result<i64> {
    p.qd(e, x, y)
        .ok_or_else(|| Error::NotReduced(format!("{} is not below {}", p.ext_name(x), p.ext_name(y))))
}

pub fn ensure_reduced(p: &Poset, eps: Epsilon, seq: &ZigzagSequence) -> Result<()> {
    if !check_condition(p, seq, Condition::NPrime)? {
        return Err(Error::NotReduced(format!("{} fails condition N'", seq.display(p))));
    }
    if let Some((i, j)) = first_unreduced_pair(p, eps, seq) {
        return Err(Error::NotReduced(format!(
            "{}: pair (x{i}, y{j}) admits a shortcut",
            seq.display(p)
        )));
    }
    Ok(())
}

pub fn mu_tables(p: &Poset, eps: Epsilon, seq: &ZigzagSequence) -> Result<MuTables> {
    ensure_reduced(p, eps, seq)?;
    let e = eps.value();
    let t = seq.t();
    let a: Vec<i64> = (0..=t).map(|l| qd(p, e, seq.x(l), seq.y(l))).collect::<Result<_>>()?;
    let b: Vec<i64> = (0..t).map(|l| qd(p, e, seq.x(l + 1), seq.y(l))).collect::<Result<_>>()?;

    let mut mu_dprime = vec![0; t + 1];
    let mut mu_prime = vec![0; t + 1];
    mu_dprime[t] = a[t];
    for i in (0..t).rev() {
        mu_prime[i] = mu_dprime[i + 1] - b[i];
        mu_dprime[i] = mu_prime[i] + a[i];
    }
    let mu = MuTables {
        d: mu_dprime[0],
        mu_prime,
        mu_dprime,
    };

    for i in 0..=t {
        if mu.mu_dprime[i] != mu.mu_prime[i] + a[i] {
            return Err(invariant(format!("mu''(x{i}) != mu'(y{i}) + qd(x{i}, y{i})")));
        }
    }
    for i in 0..t {
        for j in i + 1..=t {
            if p.ext_lt(seq.x(i), seq.y(j))
                && qd(p, e, seq.x(i), seq.y(j))? >= mu.mu_dprime[i] - mu.mu_prime[j]
            {
                return Err(Error::NotReduced(format!("gap fails at (x{i}, y{j})")));
            }
        }
    }
    Ok(mu)
}

pub fn xi0(p: &Poset, eps: Epsilon, seq: &ZigzagSequence, mu: &MuTables) -> Result<Vec<i64>> {
    let e = eps.value();
    let t = seq.t();
    if t == 0 {
        return Err(Error::ParamOutOfRange("xi0 needs a nonempty sequence".into()));
    }
    let mut values = vec![e; p.len()];
    for i in 0..t {
        let z = seq.ys[i];
        let z_ext = ExtElem::Elem(z);
        let best = (0..=t)
            .filter(|&j| p.ext_lt(z_ext, seq.y(j)))
            .map(|j| mu.mu_prime[j] + p.qd(e, z_ext, seq.y(j)).unwrap())
            .max()
            .expect("+inf lies above every element");
        values[z] = mu.mu_prime[i] - best + e;
    }
    check_xi0(p, eps, seq, mu, &values)?;
    Ok(values)
}

fn check_xi0(p: &Poset, eps: Epsilon, seq: &ZigzagSequence, mu: &MuTables, values: &[i64]) -> Result<()> {
    let e = eps.value();
    let t = seq.t();
    let pw = PathWeights::compute(p, values);
    for z in 0..p.len() {
        if values[z] < e {
            return Err(invariant(format!("xi0({}) < eps", p.name(z))));
        }
        if !seq.ys.contains(&z) && values[z] != e {
            return Err(invariant(format!("xi0({}) != eps off the y's", p.name(z))));
        }
    }
    for i in 0..t {
        if pw.up[seq.ys[i]] != mu.mu_prime[i] {
            return Err(invariant(format!("xi0 up-weight at y{i} differs from mu'")));
        }
    }
    if pw.max > mu.d - e {
        return Err(invariant("xi0 has a chain above d - eps".into()));
    }
    if p.qd(e, ExtElem::Bottom, seq.y(0)).unwrap() + pw.up[seq.ys[0]] != mu.d {
        return Err(invariant("xi0 misses the degree at y0".into()));
    }
    Ok(())
}

/// (H1)-(H5) for `xi_k`.
pub fn check_hypotheses(
    p: &Poset,
    eps: Epsilon,
    seq: &ZigzagSequence,
    mu: &MuTables,
    k: usize,
    values: &[i64],
) -> Result<()> {
    let e = eps.value();
    let t = seq.t();
    let d = mu.d;
    let pw = PathWeights::compute(p, values);
    for z in 0..p.len() {
        if values[z] < e {
            return Err(invariant(format!("(H1) fails at {} after step {k}", p.name(z))));
        }
        let allowed = seq.ys.contains(&z) || seq.xs[..k].contains(&z);
        if !allowed && values[z] != e {
            return Err(invariant(format!("(H2) fails at {} after step {k}", p.name(z))));
        }
    }
    for i in 0..t {
        if pw.up[seq.ys[i]] != mu.mu_prime[i] {
            return Err(invariant(format!("(H3) fails at y{i} after step {k}")));
        }
    }
    if pw.max > d - e {
        return Err(invariant(format!("(H4) fails after step {k}")));
    }
    for i in 0..=k {
        let down = if i == 0 { 0 } else { pw.down[seq.xs[i - 1]] };
        let up = if i == t { 0 } else { pw.up[seq.ys[i]] };
        if down + p.qd(e, seq.x(i), seq.y(i)).unwrap() + up != d {
            return Err(invariant(format!("(H5) fails at x{i} after step {k}")));
        }
    }
    Ok(())
}

pub fn xi_step(p: &Poset, eps: Epsilon, k: usize, xik: &[i64], seq: &ZigzagSequence, d: i64) -> Vec<i64> {
    let x = seq.xs[k];
    let pw = PathWeights::compute(p, xik);
    let mut next = xik.to_vec();
    next[x] = d - eps.value() - pw.strict_down[x] - pw.strict_up[x];
    next
}

pub fn build_generator(p: &Poset, eps: Epsilon, seq: &ZigzagSequence) -> Result<WeightMap> {
    build_with_trace(p, eps, seq, true).map(|t| t.xi_final)
}

/// Runs the construction; `verify` asserts every intermediate hypothesis.
pub fn build_with_trace(p: &Poset, eps: Epsilon, seq: &ZigzagSequence, verify: bool) -> Result<ConstructionTrace> {
    let e = eps.value();
    let mu = mu_tables(p, eps, seq)?;
    let t = seq.t();
    if t == 0 {
        let xi = WeightMap::constant(p, e, mu.d);
        let chain = geodesic(p, e, ExtElem::Bottom, ExtElem::Top, &xi.values)
            .ok_or_else(|| invariant("no geodesic maximal chain".into()))?;
        return Ok(ConstructionTrace {
            eps,
            seq: seq.clone(),
            mu,
            xi0: xi.values.clone(),
            steps: Vec::new(),
            xi_final: xi,
            chains: vec![chain],
        });
    }

    let x0 = xi0(p, eps, seq, &mu)?;
    if verify {
        check_hypotheses(p, eps, seq, &mu, 0, &x0)?;
    }
    let mut cur = x0.clone();
    let mut steps = Vec::with_capacity(t);
    for k in 0..t {
        let next = xi_step(p, eps, k, &cur, seq, mu.d);
        let x = seq.xs[k];
        if next[x] < cur[x] {
            return Err(invariant(format!("step {k} decreased {}", p.name(x))));
        }
        steps.push(Step {
            k,
            element: x,
            old: cur[x],
            new: next[x],
        });
        cur = next;
        if verify && k + 1 < t {
            check_hypotheses(p, eps, seq, &mu, k + 1, &cur)?;
        }
    }
    if verify {
        check_final(p, eps, seq, &mu, &cur)?;
    }
    let xi_final = WeightMap::new(mu.d, cur);
    if !xi_final.in_s_n(p, e) {
        return Err(invariant("result is not in S^(eps)".into()));
    }
    let chains = witness_chains(p, eps, seq, &xi_final)?;
    Ok(ConstructionTrace {
        eps,
        seq: seq.clone(),
        mu,
        xi0: x0,
        steps,
        xi_final,
        chains,
    })
}

/// After the last step, (H1)-(H4) still hold and (H5) holds for all i <= t.
fn check_final(p: &Poset, eps: Epsilon, seq: &ZigzagSequence, mu: &MuTables, values: &[i64]) -> Result<()> {
    let t = seq.t();
    let e = eps.value();
    let pw = PathWeights::compute(p, values);
    if values.iter().any(|&v| v < e) || pw.max > mu.d - e {
        return Err(invariant("final map violates (H1) or (H4)".into()));
    }
    for i in 0..t {
        if pw.up[seq.ys[i]] != mu.mu_prime[i] {
            return Err(invariant(format!("final up-weight at y{i} differs from mu'")));
        }
    }
    for i in 0..=t {
        let down = if i == 0 { 0 } else { pw.down[seq.xs[i - 1]] };
        let up = if i == t { 0 } else { pw.up[seq.ys[i]] };
        if down + p.qd(e, seq.x(i), seq.y(i)).unwrap() + up != mu.d {
            return Err(invariant(format!("final (H5) fails at x{i}")));
        }
    }
    Ok(())
}

/// A saturated path `x -> y` of quasi-length `qd(e, x, y)` whose interior
/// carries weight `e` only; returned as the interior plus endpoints in `P`.
fn geodesic(p: &Poset, e: i64, x: ExtElem, y: ExtElem, values: &[i64]) -> Option<Vec<usize>> {
    let (longest, shortest) = p.path_lengths(x, y)?;
    let len = if e > 0 { longest } else { shortest };
    let mut path = vec![x];
    if geodesic_dfs(p, e, y, len, values, &mut path) {
        Some(
            path.into_iter()
                .filter_map(|v| match v {
                    ExtElem::Elem(i) => Some(i),
                    _ => None,
                })
                .collect(),
        )
    } else {
        None
    }
}

fn geodesic_dfs(p: &Poset, e: i64, y: ExtElem, left: i64, values: &[i64], path: &mut Vec<ExtElem>) -> bool {
    let v = *path.last().unwrap();
    if left == 0 {
        return v == y;
    }
    for w in p.ext_upper_covers(v) {
        let ok = if w == y {
            left == 1
        } else {
            match w {
                ExtElem::Elem(i) => {
                    values[i] == e
                        && p.path_lengths(w, y).is_some_and(|(l, s)| s < left && left - 1 <= l)
                }
                _ => false,
            }
        };
        if ok {
            path.push(w);
            if geodesic_dfs(p, e, y, left - 1, values, path) {
                return true;
            }
            path.pop();
        }
    }
    false
}

/// Maximum-weight saturated path from a minimal element up to `x`, inclusive.
fn best_down(p: &Poset, pw: &PathWeights, x: usize) -> Vec<usize> {
    let mut out = vec![x];
    let mut z = x;
    while let Some(w) = p.lower_covers(z).iter().find(|&w| pw.down[w] == pw.strict_down[z]) {
        out.push(w);
        z = w;
    }
    out.reverse();
    out
}

/// Maximum-weight saturated path from `y` up to a maximal element, inclusive.
fn best_up(p: &Poset, pw: &PathWeights, y: usize) -> Vec<usize> {
    let mut out = vec![y];
    let mut z = y;
    while let Some(w) = p.upper_covers(z).iter().find(|&w| pw.up[w] == pw.strict_up[z]) {
        out.push(w);
        z = w;
    }
    out
}

/// Chains `C_0 .. C_t` through the sequence, each tight at `d - eps`, with
/// weight `eps` strictly between `x_i` and `y_i`.
pub fn witness_chains(p: &Poset, eps: Epsilon, seq: &ZigzagSequence, xi: &WeightMap) -> Result<Vec<Chain>> {
    let e = eps.value();
    let pw = xi.path_weights(p);
    let t = seq.t();
    let mut chains = Vec::with_capacity(t + 1);
    for i in 0..=t {
        let (x, y) = (seq.x(i), seq.y(i));
        let mid = geodesic(p, e, x, y, &xi.values)
            .ok_or_else(|| invariant(format!("no eps-weighted geodesic from x{i} to y{i}")))?;
        let mut chain = match x {
            ExtElem::Elem(xe) => best_down(p, &pw, xe),
            _ => Vec::new(),
        };
        chain.extend(mid.into_iter().filter(|v| ExtElem::Elem(*v) != x));
        if let ExtElem::Elem(ye) = y {
            chain.pop();
            chain.extend(best_up(p, &pw, ye));
        }
        let sum: i64 = chain.iter().map(|&c| xi.values[c]).sum();
        let set = chain.iter().copied().collect();
        let maximal = p.is_chain(set)
            && chain.len() == set.len()
            && p.minimal().contains(chain[0])
            && p.maximal().contains(*chain.last().unwrap())
            && chain.windows(2).all(|w| p.upper_covers(w[0]).contains(w[1]));
        if !maximal || sum != xi.deg - e {
            return Err(invariant(format!("witness chain C{i} is not a tight maximal chain")));
        }
        chains.push(chain);
    }
    Ok(chains)
}
