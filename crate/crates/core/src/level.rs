//! Level and anticanonical-level verdicts for the chain and order polytopes.

use serde::Serialize;
use serde_json::{json, Value};

use crate::budget::Budget;
use crate::canonical::min_degree;
use crate::error::Result;
use crate::poset::{ExtElem, Poset};
use crate::sequences::{enumerate_sequences, Condition, Epsilon, ScoredSequence, ZigzagSequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PolytopeKind {
    Chain,
    Order,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Canonical,
    Anticanonical,
}

impl PolytopeKind {
    pub const BOTH: [PolytopeKind; 2] = [PolytopeKind::Chain, PolytopeKind::Order];

    pub fn condition(self) -> Condition {
        match self {
            PolytopeKind::Chain => Condition::NPrime,
            PolytopeKind::Order => Condition::N,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PolytopeKind::Chain => "chain",
            PolytopeKind::Order => "order",
        }
    }
}

impl Variant {
    pub const BOTH: [Variant; 2] = [Variant::Canonical, Variant::Anticanonical];

    pub fn eps(self) -> Epsilon {
        match self {
            Variant::Canonical => Epsilon::Plus,
            Variant::Anticanonical => Epsilon::Minus,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Variant::Canonical => "canonical",
            Variant::Anticanonical => "anticanonical",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelReport {
    pub polytope: PolytopeKind,
    pub variant: Variant,
    pub verdict: bool,
    pub witness: Option<ZigzagSequence>,
    pub d0: i64,
    pub dmax: i64,
}

impl LevelReport {
    /// `chain canonical: LEVEL` or `chain canonical: NOT LEVEL (witness: ..)`.
    pub fn line(&self, p: &Poset) -> String {
        let head = format!("{} {}", self.polytope.label(), self.variant.label());
        match &self.witness {
            None => format!("{head}: LEVEL"),
            Some(w) => format!("{head}: NOT LEVEL (witness: {})", w.display(p)),
        }
    }

    pub fn to_json(&self, p: &Poset) -> Value {
        json!({
            "polytope": self.polytope,
            "variant": self.variant,
            "verdict": self.verdict,
            "witness": self.witness.as_ref().map(|w| w.to_json(p)),
            "d0": self.d0,
            "dmax": self.dmax,
        })
    }
}

/// Shortest first, then lexicographic by element index.
fn preferred(a: &ScoredSequence, b: &ScoredSequence) -> std::cmp::Ordering {
    a.seq.t().cmp(&b.seq.t()).then_with(|| a.seq.flat().cmp(&b.seq.flat()))
}

pub fn is_level_with(p: &Poset, polytope: PolytopeKind, variant: Variant, budget: &Budget) -> Result<LevelReport> {
    let eps = variant.eps();
    let all = enumerate_sequences(p, eps, polytope.condition(), true, budget)?;
    let dmax = all.iter().map(|s| s.q).max().unwrap_or(min_degree(p, eps));
    let witness = all
        .iter()
        .filter(|s| !s.seq.is_empty())
        .min_by(|a, b| preferred(a, b))
        .map(|s| s.seq.clone());
    Ok(LevelReport {
        polytope,
        variant,
        verdict: witness.is_none(),
        witness,
        d0: min_degree(p, eps),
        dmax,
    })
}

pub fn is_level(p: &Poset, polytope: PolytopeKind, variant: Variant) -> LevelReport {
    is_level_with(p, polytope, variant, &Budget::unlimited()).expect("unlimited budget")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImplicationReport {
    pub chain_canonical: bool,
    pub order_canonical: bool,
    pub chain_anticanonical: bool,
    pub order_anticanonical: bool,
    pub holds: bool,
}

pub fn check_implication_with(p: &Poset, budget: &Budget) -> Result<ImplicationReport> {
    let v = |k, var| is_level_with(p, k, var, budget).map(|r| r.verdict);
    let cc = v(PolytopeKind::Chain, Variant::Canonical)?;
    let oc = v(PolytopeKind::Order, Variant::Canonical)?;
    let ca = v(PolytopeKind::Chain, Variant::Anticanonical)?;
    let oa = v(PolytopeKind::Order, Variant::Anticanonical)?;
    Ok(ImplicationReport {
        chain_canonical: cc,
        order_canonical: oc,
        chain_anticanonical: ca,
        order_anticanonical: oa,
        holds: (!cc || oc) && (!ca || oa),
    })
}

pub fn check_implication(p: &Poset) -> ImplicationReport {
    check_implication_with(p, &Budget::unlimited()).expect("unlimited budget")
}

/// Whether no sequence satisfying the condition, reduced or not, beats
/// `qd(eps, -inf, +inf)`.
pub fn bounded_q_check_with(p: &Poset, eps: Epsilon, polytope: PolytopeKind, budget: &Budget) -> Result<bool> {
    let bound = p.qd(eps.value(), ExtElem::Bottom, ExtElem::Top).unwrap();
    let all = enumerate_sequences(p, eps, polytope.condition(), false, budget)?;
    Ok(all.iter().all(|s| s.q <= bound))
}

pub fn bounded_q_check(p: &Poset, eps: Epsilon, polytope: PolytopeKind) -> bool {
    bounded_q_check_with(p, eps, polytope, &Budget::unlimited()).expect("unlimited budget")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_chain_is_level_everywhere() {
        let p = Poset::new(&["x", "y"], &[("x", "y")]).unwrap();
        for k in PolytopeKind::BOTH {
            for v in Variant::BOTH {
                let r = is_level(&p, k, v);
                assert!(r.verdict);
                assert_eq!(r.line(&p), format!("{} {}: LEVEL", k.label(), v.label()));
                assert!(bounded_q_check(&p, v.eps(), k));
            }
        }
        assert!(check_implication(&p).holds);
    }
}
