//! Named posets used throughout the tests and the CLI, plus exhaustive
//! enumeration of small posets up to isomorphism.

use std::collections::BTreeSet;

use crate::bitset::ElemSet;
use crate::error::{Error, Result};
use crate::poset::{Poset, HARD_MAX_ELEMENTS};

pub const NAMES: [&str; 6] = ["level", "antican", "grid6", "shared7", "chain2", "p1"];

fn build(names: &[String], covers: &[(String, String)]) -> Result<Poset> {
    Poset::with_limit(names, covers, HARD_MAX_ELEMENTS)
}

fn run(prefix: &str, k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("{prefix}{i}")).collect()
}

fn chain_covers(names: &[String]) -> Vec<(String, String)> {
    names.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect()
}

fn pair(a: &str, b: &str) -> (String, String) {
    (a.to_string(), b.to_string())
}

/// `a1 < .. < an`, `b1 < .. < b_m1 < d < c1 < .. < c_m2`, `a1 < d < an`.
pub fn level(n: usize, m1: usize, m2: usize) -> Result<Poset> {
    if n < 4 || m1 + 2 < n || m2 + 2 < n {
        return Err(Error::ParamOutOfRange(format!(
            "level needs n >= 4 and m1, m2 >= n - 2, got n={n}, m1={m1}, m2={m2}"
        )));
    }
    let a = run("a", n);
    let b = run("b", m1);
    let c = run("c", m2);
    let mut names = a.clone();
    names.extend(b.iter().cloned());
    names.extend(c.iter().cloned());
    names.push("d".into());
    let mut covers = chain_covers(&a);
    let mut right = b.clone();
    right.push("d".into());
    right.extend(c.iter().cloned());
    covers.extend(chain_covers(&right));
    covers.push(pair("a1", "d"));
    covers.push(pair("d", &a[n - 1]));
    build(&names, &covers)
}

/// `a1 < .. < a_{n+3}`, `d1 < d2 < d3`, `a1 < b1 < .. < bn < d2 < c1 < .. < cn < a_{n+3}`.
pub fn antican(n: usize) -> Result<Poset> {
    if n < 1 {
        return Err(Error::ParamOutOfRange("antican needs n >= 1".into()));
    }
    let a = run("a", n + 3);
    let b = run("b", n);
    let c = run("c", n);
    let d = run("d", 3);
    let mut names = a.clone();
    names.extend(b.iter().cloned());
    names.extend(c.iter().cloned());
    names.extend(d.iter().cloned());
    let mut covers = chain_covers(&a);
    covers.extend(chain_covers(&d));
    let mut side = vec!["a1".to_string()];
    side.extend(b.iter().cloned());
    side.push("d2".into());
    side.extend(c.iter().cloned());
    side.push(a[n + 2].clone());
    covers.extend(chain_covers(&side));
    build(&names, &covers)
}

/// Three columns `p_i < m_i < q_i` with `p2 < q1` and `p3 < q2`.
pub fn grid6() -> Poset {
    let mut names = Vec::new();
    let mut covers = Vec::new();
    for i in 1..=3 {
        let col = vec![format!("p{i}"), format!("m{i}"), format!("q{i}")];
        covers.extend(chain_covers(&col));
        names.extend(col);
    }
    covers.push(pair("p2", "q1"));
    covers.push(pair("p3", "q2"));
    build(&names, &covers).expect("fixed poset")
}

/// `L1 < .. < L4` and `R1 < .. < R5` with `L1 < R3 < L4`.
pub fn shared7() -> Poset {
    let l = run("L", 4);
    let r = run("R", 5);
    let mut names = l.clone();
    names.extend(r.iter().cloned());
    let mut covers = chain_covers(&l);
    covers.extend(chain_covers(&r));
    covers.push(pair("L1", "R3"));
    covers.push(pair("R3", "L4"));
    build(&names, &covers).expect("fixed poset")
}

pub fn chain2() -> Poset {
    Poset::new(&["x", "y"], &[("x", "y")]).expect("fixed poset")
}

/// `x1 < x2` next to an isolated `y`.
pub fn p1() -> Poset {
    Poset::new(&["x1", "x2", "y"], &[("x1", "x2")]).expect("fixed poset")
}

/// A stretch `x1 < y1 > x2 < y2 > x3 < y3` with the shortcut `x1 < y3` and a
/// detour `x2 < m < y1`, preceded by `y0 > x1` and closed by `y3 > x4`.
/// The sequence is `y0, x1, y1, x2, y2, x3, y3, x4`.
pub fn shortcut_fixture() -> Poset {
    Poset::new(
        &["y0", "x1", "y1", "x2", "m", "y2", "x3", "y3", "x4"],
        &[
            ("x1", "y0"),
            ("x1", "y1"),
            ("x1", "y3"),
            ("x2", "m"),
            ("m", "y1"),
            ("x2", "y2"),
            ("x3", "y2"),
            ("x3", "y3"),
            ("x4", "y3"),
        ],
    )
    .expect("fixed poset")
}

/// The square `x1, x2 < y1, y2` after `y0 > x1`, closed by `y2 > x3`.
/// The sequence is `y0, x1, y1, x2, y2, x3`.
pub fn square_fixture() -> Poset {
    Poset::new(
        &["y0", "x1", "y1", "x2", "y2", "x3"],
        &[
            ("x1", "y0"),
            ("x1", "y1"),
            ("x1", "y2"),
            ("x2", "y1"),
            ("x2", "y2"),
            ("x3", "y2"),
        ],
    )
    .expect("fixed poset")
}

pub fn by_name(name: &str, n: Option<usize>, m1: Option<usize>, m2: Option<usize>) -> Result<Poset> {
    match name {
        "level" => {
            let n = n.unwrap_or(4);
            let k = n.saturating_sub(2);
            level(n, m1.unwrap_or(k), m2.unwrap_or(k))
        }
        "antican" => antican(n.unwrap_or(5)),
        "grid6" => Ok(grid6()),
        "shared7" => Ok(shared7()),
        "chain2" => Ok(chain2()),
        "p1" => Ok(p1()),
        other => Err(Error::ParamOutOfRange(format!(
            "unknown example `{other}`; expected one of {}",
            NAMES.join(", ")
        ))),
    }
}

/// `rel[i]` is the set of elements strictly above `i`.
type Relation = Vec<ElemSet>;

fn relation_code(rel: &Relation, perm: &[usize]) -> u64 {
    let n = rel.len();
    let mut inv = vec![0; n];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    let mut code = 0u64;
    for (new, &old) in perm.iter().enumerate() {
        for j in rel[old].iter() {
            code |= 1 << (new * n + inv[j]);
        }
    }
    code
}

fn canonical_code(rel: &Relation) -> u64 {
    let n = rel.len();
    let mut best = u64::MAX;
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p| best = best.min(relation_code(rel, p)));
    best
}

fn permute(perm: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == perm.len() {
        f(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, f);
        perm.swap(k, i);
    }
}

fn decode(code: u64, n: usize) -> Relation {
    (0..n)
        .map(|i| (0..n).filter(|&j| code >> (i * n + j) & 1 == 1).collect())
        .collect()
}

/// One representative of every isomorphism class of `n`-element posets,
/// ordered by canonical code. Elements are named `e0 ..`.
pub fn all_posets(n: usize) -> Vec<Poset> {
    assert!(n <= 7, "exhaustive enumeration is limited to 7 elements");
    if n == 0 {
        return Vec::new();
    }
    let mut classes: BTreeSet<u64> = BTreeSet::new();
    classes.insert(0);
    for k in 1..=n {
        let mut next = BTreeSet::new();
        for &code in &classes {
            let rel = decode(code, k - 1);
            // the new element k-1 is maximal; its down-set is any order ideal
            for mask in 0u64..(1 << (k - 1)) {
                let down = ElemSet(mask);
                if down.iter().any(|i| !rel_below(&rel, i).is_subset(down)) {
                    continue;
                }
                let mut r = rel.clone();
                r.push(ElemSet::EMPTY);
                for i in down.iter() {
                    r[i].insert(k - 1);
                }
                next.insert(canonical_code(&r));
            }
        }
        classes = next;
    }
    classes
        .into_iter()
        .map(|code| {
            let rel = decode(code, n);
            let mut pairs = Vec::new();
            for (i, up) in rel.iter().enumerate() {
                for j in up.iter() {
                    pairs.push((i, j));
                }
            }
            Poset::from_indices(n, &pairs).expect("transitively closed acyclic relation")
        })
        .collect()
}

fn rel_below(rel: &Relation, i: usize) -> ElemSet {
    (0..rel.len()).filter(|&j| rel[j].contains(i)).collect()
}

/// All posets with at most `n` elements, smallest first.
pub fn all_posets_up_to(n: usize) -> Vec<Poset> {
    (1..=n).flat_map(all_posets).collect()
}
