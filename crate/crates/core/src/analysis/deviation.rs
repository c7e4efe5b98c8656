//! Grid search over unilateral deviations.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::clock::clearing_price;
use crate::error::{Error, Result};
use crate::model::{Bid, BidProfile, Rational};
use crate::sortcut::allocate_divisible;

/// Expected utility under hard budgets. `NegInf` sorts below every number.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Utility {
    NegInf,
    Finite(Rational),
}

impl Utility {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Utility::NegInf => None,
            Utility::Finite(u) => Some(u),
        }
    }

    /// `self - base`, or `NegInf` if either side is infinite.
    pub fn minus(&self, base: &Utility) -> Utility {
        match (self, base) {
            (Utility::Finite(a), Utility::Finite(b)) => Utility::Finite(a - b),
            _ => Utility::NegInf,
        }
    }
}

impl fmt::Display for Utility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Utility::NegInf => f.write_str("-inf"),
            Utility::Finite(u) => write!(f, "{u}"),
        }
    }
}

/// How a stated bid departs from the true one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeviationClass {
    Truthful,
    /// Budget above the true budget, any value.
    BudgetOver,
    /// Budget below the true budget, value not above the true value.
    BudgetUnder,
    /// True budget, value below the true value.
    ValueUnder,
    /// Value above the true value, budget not above the true budget.
    ValueOver,
}

impl DeviationClass {
    pub fn of(truth: &Bid, stated: &Bid) -> Self {
        match (stated.budget.cmp(&truth.budget), stated.value.cmp(&truth.value)) {
            (Ordering::Greater, _) => DeviationClass::BudgetOver,
            (_, Ordering::Greater) => DeviationClass::ValueOver,
            (Ordering::Less, _) => DeviationClass::BudgetUnder,
            (Ordering::Equal, Ordering::Less) => DeviationClass::ValueUnder,
            (Ordering::Equal, Ordering::Equal) => DeviationClass::Truthful,
        }
    }

    /// The classes that should never be profitable against truth.
    pub fn is_dominated(self) -> bool {
        matches!(self, DeviationClass::BudgetOver | DeviationClass::BudgetUnder | DeviationClass::ValueUnder)
    }
}

impl fmt::Display for DeviationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeviationClass::Truthful => "truthful",
            DeviationClass::BudgetOver => "budget-over",
            DeviationClass::BudgetUnder => "budget-under",
            DeviationClass::ValueUnder => "value-under",
            DeviationClass::ValueOver => "value-over",
        })
    }
}

/// The best deviation found for one bidder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub bidder: usize,
    pub best_deviation: Bid,
    /// Utility at the bidder's current stated bid.
    pub utility_baseline: Utility,
    pub utility_best: Utility,
    pub gain: Utility,
    pub deviation_class: DeviationClass,
}

impl DeviationReport {
    pub fn is_profitable(&self) -> bool {
        self.utility_best > self.utility_baseline
    }
}

/// Candidate stated values and budgets for one bidder.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeviationGrid {
    pub values: Vec<Rational>,
    pub budgets: Vec<Rational>,
}

impl DeviationGrid {
    /// Values around the bidder's own, the opponents' and the clearing
    /// price, and budgets `t/16` of the true budget for `t = 0..=24`.
    ///
    /// The value grid is topped up with evenly spaced points in
    /// `(dummy, 2 * max value]` until it has at least `size` entries.
    pub fn around(profile: &BidProfile<'_>, bidder: usize, step: &Rational, size: usize) -> Result<Self> {
        let instance = profile.instance();
        let truth = &instance.bidders[bidder];
        let floor = &instance.dummy_value;
        let v_star = clearing_price(&BidProfile::truthful(instance))?.clearing_price;
        let mut values = vec![truth.value.clone(), profile.bid(bidder).value.clone()];
        values.push(&v_star - step);
        values.push(v_star.clone());
        values.push(&v_star + step);
        for (j, bid) in profile.stated().iter().enumerate() {
            if j == bidder || j == instance.dummy_index() {
                continue;
            }
            values.push(&bid.value - step);
            values.push(bid.value.clone());
            values.push(&bid.value + step);
        }
        let max = instance.real_bidders().iter().map(|b| b.value.clone()).max().unwrap_or_else(Rational::one);
        let top = &max + &max;
        values.retain(|v| v > floor);
        values.sort();
        values.dedup();
        let mut t = 1;
        while values.len() < size {
            let v = floor + (&top - floor) * Rational::new(t, size as i128);
            if let Err(at) = values.binary_search(&v) {
                values.insert(at, v);
            }
            t += 1;
            if t > size as i128 {
                break;
            }
        }

        let mut budgets: Vec<Rational> = (0..=24).map(|t| &truth.budget * Rational::new(t, 16)).collect();
        budgets.push(profile.bid(bidder).budget.clone());
        budgets.sort();
        budgets.dedup();
        Ok(DeviationGrid { values, budgets })
    }

    pub fn len(&self) -> usize {
        self.values.len() * self.budgets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Expected utility of `bidder` (true value and budget) at `profile`.
pub fn utility(profile: &BidProfile<'_>, bidder: usize) -> Result<Utility> {
    let truth = &profile.instance().bidders[bidder];
    let out = allocate_divisible(profile)?;
    let paid = &out.payments[bidder];
    if profile.bid(bidder).budget > truth.budget && paid.is_positive() {
        return Ok(Utility::NegInf);
    }
    Ok(Utility::Finite(&out.units[bidder] * &truth.value - paid))
}

struct Search {
    baseline: Utility,
    /// Best finding per class, in first-found order on ties.
    best: Vec<(DeviationClass, Bid, Utility)>,
}

fn search(profile: &BidProfile<'_>, bidder: usize, grid: &DeviationGrid) -> Result<Search> {
    let n = profile.len();
    if bidder >= n || bidder == profile.instance().dummy_index() {
        return Err(Error::BidderIndex { index: bidder, len: n - 1 });
    }
    let truth = Bid::from(&profile.instance().bidders[bidder]);
    let baseline = utility(profile, bidder)?;
    let mut best: Vec<(DeviationClass, Bid, Utility)> = Vec::new();
    for v in &grid.values {
        for b in &grid.budgets {
            let bid = Bid::new(v.clone(), b.clone());
            let class = DeviationClass::of(&truth, &bid);
            let u = utility(&profile.with_bid(bidder, bid.clone()), bidder)?;
            match best.iter_mut().find(|(c, _, _)| *c == class) {
                Some(slot) if u > slot.2 => *slot = (class, bid, u),
                Some(_) => {}
                None => best.push((class, bid, u)),
            }
        }
    }
    Ok(Search { baseline, best })
}

fn report(bidder: usize, baseline: &Utility, (class, bid, u): (DeviationClass, Bid, Utility)) -> DeviationReport {
    DeviationReport {
        bidder,
        best_deviation: bid,
        utility_baseline: baseline.clone(),
        gain: u.minus(baseline),
        utility_best: u,
        deviation_class: class,
    }
}

/// The most profitable grid deviation of `bidder` with everyone else held
/// at `profile`. Gains are measured against the bidder's current stated bid.
pub fn best_deviation(profile: &BidProfile<'_>, bidder: usize, grid: &DeviationGrid) -> Result<DeviationReport> {
    let s = search(profile, bidder, grid)?;
    let mut top: Option<(DeviationClass, Bid, Utility)> = None;
    for entry in s.best {
        if top.as_ref().is_none_or(|t| entry.2 > t.2) {
            top = Some(entry);
        }
    }
    let top = top.unwrap_or_else(|| {
        let current = profile.bid(bidder).clone();
        let class = DeviationClass::of(&Bid::from(&profile.instance().bidders[bidder]), &current);
        (class, current, s.baseline.clone())
    });
    Ok(report(bidder, &s.baseline, top))
}

/// The best grid deviation of each class, ordered by class.
pub fn best_deviation_by_class(
    profile: &BidProfile<'_>,
    bidder: usize,
    grid: &DeviationGrid,
) -> Result<Vec<DeviationReport>> {
    let s = search(profile, bidder, grid)?;
    let mut out: Vec<_> = s.best.into_iter().map(|e| report(bidder, &s.baseline, e)).collect();
    out.sort_by_key(|r| r.deviation_class);
    Ok(out)
}

/// Outcome of an equilibrium check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub is_equilibrium: bool,
    /// The profitable deviation with the largest gain, if any.
    pub worst: Option<DeviationReport>,
}

/// Checks that no real bidder gains by moving to a point of her grid.
pub fn is_equilibrium(
    profile: &BidProfile<'_>,
    grid_for: impl Fn(usize) -> Result<DeviationGrid>,
) -> Result<EquilibriumReport> {
    let dummy = profile.instance().dummy_index();
    let mut worst: Option<DeviationReport> = None;
    for bidder in (0..profile.len()).filter(|&i| i != dummy) {
        let rep = best_deviation(profile, bidder, &grid_for(bidder)?)?;
        if rep.is_profitable() && worst.as_ref().is_none_or(|w| rep.gain > w.gain) {
            worst = Some(rep);
        }
    }
    Ok(EquilibriumReport { is_equilibrium: worst.is_none(), worst })
}
