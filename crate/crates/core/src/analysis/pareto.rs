use serde::{Deserialize, Serialize};

use crate::model::{BidProfile, Rational};
use crate::sortcut::Outcome;

/// Why an outcome is not Pareto-optimal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParetoWitness {
    /// Supply minus units sold (negative if oversold).
    Unsold(Rational),
    /// `lower` holds units while `higher`, who values them more, still has
    /// usable budget. Instance indices.
    Slack { higher: usize, lower: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParetoReport {
    pub is_pareto: bool,
    pub witness: Option<ParetoWitness>,
}

impl ParetoReport {
    fn verdict(witness: Option<ParetoWitness>) -> Self {
        ParetoReport { is_pareto: witness.is_none(), witness }
    }
}

fn check(profile: &BidProfile<'_>, outcome: &Outcome, has_slack: impl Fn(usize, usize) -> bool) -> ParetoReport {
    let unsold = profile.supply() - outcome.units_sold();
    if !unsold.is_zero() {
        return ParetoReport::verdict(Some(ParetoWitness::Unsold(unsold)));
    }
    let stated = profile.stated();
    for (lower, units) in outcome.units.iter().enumerate() {
        if !units.is_positive() {
            continue;
        }
        for (higher, bid) in stated.iter().enumerate() {
            if bid.value > stated[lower].value && has_slack(higher, lower) {
                return ParetoReport::verdict(Some(ParetoWitness::Slack { higher, lower }));
            }
        }
    }
    ParetoReport::verdict(None)
}

/// Divisible Pareto-optimality: everything is sold and a bidder may hold
/// units only if every higher-valued bidder spent her whole budget.
pub fn is_pareto_divisible(profile: &BidProfile<'_>, outcome: &Outcome) -> ParetoReport {
    check(profile, outcome, |higher, _| outcome.payments[higher] != profile.bid(higher).budget)
}

/// Indivisible Pareto-optimality: everything is sold and no higher-valued
/// bidder could still afford a unit at the value of an allocated bidder.
pub fn is_pareto_indivisible(profile: &BidProfile<'_>, outcome: &Outcome) -> ParetoReport {
    check(profile, outcome, |higher, lower| {
        let left = &profile.bid(higher).budget - &outcome.payments[higher];
        left >= profile.bid(lower).value
    })
}
