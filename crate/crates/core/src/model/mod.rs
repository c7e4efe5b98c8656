//! Domain types shared by every mechanism: bidders, instances, stated bid
//! profiles and the ranked market view the mechanisms operate on.

mod market;
pub mod rational;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use market::{Market, RankedBid};
pub use rational::{q, ParseRationalError, Rational};

/// Identifier reserved for the dummy bidder appended by normalization.
pub const DUMMY_ID: &str = "dummy";

/// A bidder with a per-unit value and a hard total budget.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bidder {
    pub id: String,
    pub value: Rational,
    pub budget: Rational,
}

impl Bidder {
    pub fn new(id: impl Into<String>, value: Rational, budget: Rational) -> Self {
        Bidder { id: id.into(), value, budget }
    }

    pub fn is_dummy(&self) -> bool {
        self.id == DUMMY_ID
    }
}

/// An auction instance: `supply` units and the bidders competing for them.
///
/// A normalized instance lists real bidders by value (descending), then
/// budget (descending), then id (ascending), and ends with the dummy bidder
/// whose value is `dummy_value` and whose budget is `supply * dummy_value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub supply: Rational,
    pub dummy_value: Rational,
    pub bidders: Vec<Bidder>,
}

impl Instance {
    /// Builds and normalizes an instance from real bidders.
    pub fn new(supply: Rational, dummy_value: Rational, bidders: Vec<Bidder>) -> Result<Self> {
        Instance { supply, dummy_value, bidders }.normalize()
    }

    /// Sorts bidders, (re)appends the dummy and checks the model constraints.
    pub fn normalize(&self) -> Result<Self> {
        if !self.supply.is_positive() {
            return Err(Error::NonPositiveSupply(self.supply.clone()));
        }
        if !self.dummy_value.is_positive() {
            return Err(Error::NonPositiveDummy(self.dummy_value.clone()));
        }
        // A dummy left over from an earlier normalization is rebuilt below.
        let mut real: Vec<Bidder> = self
            .bidders
            .iter()
            .filter(|b| !(b.is_dummy() && b.value == self.dummy_value))
            .cloned()
            .collect();
        if let Some(b) = real.iter().find(|b| b.is_dummy()) {
            return Err(Error::ReservedId(b.id.clone()));
        }
        if real.is_empty() {
            return Err(Error::EmptyBidders);
        }
        let mut seen = HashSet::new();
        for b in &real {
            if !seen.insert(b.id.as_str()) {
                return Err(Error::DuplicateId(b.id.clone()));
            }
            if !b.value.is_positive() {
                return Err(Error::NonPositiveValue { id: b.id.clone(), value: b.value.clone() });
            }
            if b.budget.is_negative() {
                return Err(Error::NegativeBudget { id: b.id.clone(), budget: b.budget.clone() });
            }
        }
        real.sort_by(|a, b| {
            b.value
                .cmp(&a.value)
                .then_with(|| b.budget.cmp(&a.budget))
                .then_with(|| a.id.cmp(&b.id))
        });
        let min_value = real.last().map(|b| b.value.clone()).unwrap_or_default();
        if self.dummy_value >= min_value {
            return Err(Error::DummyTooLarge { dummy: self.dummy_value.clone(), min_value });
        }
        let money: Rational = real.iter().map(|b| &b.budget).sum();
        let needed = &self.supply * &self.dummy_value;
        if money < needed {
            return Err(Error::InsufficientMoney { money, needed });
        }
        real.push(Bidder::new(DUMMY_ID, self.dummy_value.clone(), needed));
        Ok(Instance { supply: self.supply.clone(), dummy_value: self.dummy_value.clone(), bidders: real })
    }

    pub fn is_normalized(&self) -> bool {
        self.normalize().map(|n| &n == self).unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.bidders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bidders.is_empty()
    }

    /// Index of the dummy bidder (always last once normalized).
    pub fn dummy_index(&self) -> usize {
        self.bidders.len() - 1
    }

    /// Bidders other than the dummy.
    pub fn real_bidders(&self) -> &[Bidder] {
        &self.bidders[..self.dummy_index()]
    }

    /// Total budget `B` including the dummy.
    pub fn total_budget(&self) -> Rational {
        self.bidders.iter().map(|b| &b.budget).sum()
    }

    /// `prefix[j]` is the summed budget of the first `j` bidders.
    pub fn prefix_budgets(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.bidders.len() + 1);
        let mut acc = Rational::zero();
        out.push(acc.clone());
        for b in &self.bidders {
            acc += &b.budget;
            out.push(acc.clone());
        }
        out
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.bidders.iter().position(|b| b.id == id)
    }
}

/// A stated (announced) per-unit value and budget.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bid {
    pub value: Rational,
    pub budget: Rational,
}

impl Bid {
    pub fn new(value: Rational, budget: Rational) -> Self {
        Bid { value, budget }
    }
}

impl From<&Bidder> for Bid {
    fn from(b: &Bidder) -> Self {
        Bid::new(b.value.clone(), b.budget.clone())
    }
}

/// A constraint violated by a stated profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    NonPositiveValue { bidder: usize },
    NegativeBudget { bidder: usize },
    BelowDummyValue { bidder: usize },
    DummyNotTruthful,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonPositiveValue { bidder } => write!(f, "bidder {bidder}: non-positive value"),
            Violation::NegativeBudget { bidder } => write!(f, "bidder {bidder}: negative budget"),
            Violation::BelowDummyValue { bidder } => {
                write!(f, "bidder {bidder}: value below the dummy value")
            }
            Violation::DummyNotTruthful => write!(f, "dummy must be truthful"),
        }
    }
}

/// Stated bids aligned with the bidders of a normalized instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BidProfile<'a> {
    instance: &'a Instance,
    stated: Vec<Bid>,
}

impl<'a> BidProfile<'a> {
    pub fn new(instance: &'a Instance, stated: Vec<Bid>) -> Result<Self> {
        if !instance.is_normalized() {
            return Err(Error::Unnormalized);
        }
        if stated.len() != instance.len() {
            return Err(Error::ProfileLength { expected: instance.len(), got: stated.len() });
        }
        Ok(BidProfile { instance, stated })
    }

    /// Everyone announces their true value and budget.
    pub fn truthful(instance: &'a Instance) -> Self {
        BidProfile { instance, stated: instance.bidders.iter().map(Bid::from).collect() }
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    pub fn stated(&self) -> &[Bid] {
        &self.stated
    }

    pub fn bid(&self, bidder: usize) -> &Bid {
        &self.stated[bidder]
    }

    pub fn supply(&self) -> &Rational {
        &self.instance.supply
    }

    pub fn len(&self) -> usize {
        self.stated.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stated.is_empty()
    }

    /// The same profile with one bidder's announcement replaced.
    pub fn with_bid(&self, bidder: usize, bid: Bid) -> Self {
        let mut stated = self.stated.clone();
        stated[bidder] = bid;
        BidProfile { instance: self.instance, stated }
    }

    pub fn is_truthful(&self, bidder: usize) -> bool {
        self.stated[bidder] == Bid::from(&self.instance.bidders[bidder])
    }

    /// All constraint violations of the stated bids; empty when valid.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let dummy = self.instance.dummy_index();
        for (i, bid) in self.stated.iter().enumerate() {
            if i == dummy {
                if *bid != Bid::from(&self.instance.bidders[dummy]) {
                    out.push(Violation::DummyNotTruthful);
                }
                continue;
            }
            if !bid.value.is_positive() {
                out.push(Violation::NonPositiveValue { bidder: i });
            } else if bid.value < self.instance.dummy_value {
                out.push(Violation::BelowDummyValue { bidder: i });
            }
            if bid.budget.is_negative() {
                out.push(Violation::NegativeBudget { bidder: i });
            }
        }
        out
    }

    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }

    /// Ranks the stated bids for the mechanisms.
    pub fn market(&self) -> Result<Market> {
        self.validate().map_err(Error::InvalidProfile)?;
        Ok(Market::from_profile(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i128) -> Rational {
        Rational::integer(n)
    }

    fn example1() -> Instance {
        Instance::new(
            r(19),
            q(1, 100),
            vec![
                Bidder::new("1", r(10), r(55)),
                Bidder::new("2", r(9), r(60)),
                Bidder::new("3", r(7), r(40)),
                Bidder::new("4", r(6), r(30)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn example1_keeps_order_and_appends_dummy() {
        let inst = example1();
        let ids: Vec<_> = inst.bidders.iter().map(|b| b.id.as_str()).collect();
        assert_eq!(ids, ["1", "2", "3", "4", DUMMY_ID]);
        assert_eq!(inst.bidders[4].budget, q(19, 100));
        assert_eq!(inst.total_budget(), r(185) + q(19, 100));
    }

    #[test]
    fn single_bidder_dummy() {
        let inst = Instance::new(r(2), q(1, 100), vec![Bidder::new("a", r(5), r(10))]).unwrap();
        let pairs: Vec<_> = inst.bidders.iter().map(|b| (b.value.clone(), b.budget.clone())).collect();
        assert_eq!(pairs, vec![(r(5), r(10)), (q(1, 100), q(2, 100))]);
    }

    #[test]
    fn equal_values_larger_budget_first() {
        for order in [["x", "y"], ["y", "x"]] {
            let bidders = order
                .iter()
                .map(|id| Bidder::new(*id, r(7), if *id == "x" { r(3) } else { r(9) }))
                .collect();
            let inst = Instance::new(r(1), q(1, 100), bidders).unwrap();
            assert_eq!(inst.bidders[0].budget, r(9));
            assert_eq!(inst.bidders[1].budget, r(3));
        }
    }

    #[test]
    fn rejections() {
        let one = |v: Rational, b: Rational| vec![Bidder::new("a", v, b)];
        assert_eq!(Instance::new(r(1), q(1, 100), vec![]), Err(Error::EmptyBidders));
        assert!(matches!(Instance::new(r(1), r(5), one(r(5), r(10))), Err(Error::DummyTooLarge { .. })));
        assert!(matches!(
            Instance::new(r(100), q(1, 2), one(r(5), r(10))),
            Err(Error::InsufficientMoney { .. })
        ));
        assert!(matches!(Instance::new(r(1), q(1, 100), one(r(0), r(1))), Err(Error::NonPositiveValue { .. })));
        assert!(matches!(Instance::new(r(1), q(1, 100), one(r(1), r(-1))), Err(Error::NegativeBudget { .. })));
        assert!(matches!(
            Instance::new(r(1), q(1, 100), vec![Bidder::new(DUMMY_ID, r(3), r(3))]),
            Err(Error::ReservedId(_))
        ));
    }

    #[test]
    fn zero_budget_bidders_are_kept() {
        let inst = Instance::new(
            r(1),
            q(1, 100),
            vec![Bidder::new("a", r(5), r(0)), Bidder::new("b", r(3), r(4))],
        )
        .unwrap();
        assert_eq!(inst.len(), 3);
        assert_eq!(inst.bidders[0].budget, r(0));
    }

    #[test]
    fn validate_reports_violations() {
        let inst = example1();
        assert_eq!(BidProfile::truthful(&inst).validate(), Ok(()));
        let p = BidProfile::truthful(&inst).with_bid(1, Bid::new(r(9), r(-1)));
        assert_eq!(p.violations(), vec![Violation::NegativeBudget { bidder: 1 }]);
        assert_eq!(p.violations()[0].to_string(), "bidder 1: negative budget");
        let p = BidProfile::truthful(&inst).with_bid(4, Bid::new(q(1, 50), q(19, 100)));
        assert_eq!(p.violations(), vec![Violation::DummyNotTruthful]);
        assert_eq!(p.violations()[0].to_string(), "dummy must be truthful");
        let p = BidProfile::truthful(&inst).with_bid(0, Bid::new(r(0), r(1)));
        assert_eq!(p.violations(), vec![Violation::NonPositiveValue { bidder: 0 }]);
        assert!(p.market().is_err());
    }

    fn arb_bidders() -> impl Strategy<Value = Vec<Bidder>> {
        prop::collection::vec((1i128..=8, 0i128..=20), 1..7).prop_map(|vs| {
            vs.into_iter()
                .enumerate()
                .map(|(i, (v, b))| Bidder::new(format!("b{i}"), r(v), r(b)))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn normalize_idempotent_and_permutation(mut bidders in arb_bidders(), seed in any::<u64>()) {
            prop_assume!(bidders.iter().any(|b| b.budget.is_positive()));
            let inst = match Instance::new(r(1), q(1, 100), bidders.clone()) {
                Ok(i) => i,
                Err(_) => return Ok(()),
            };
            prop_assert_eq!(inst.normalize().unwrap(), inst.clone());
            prop_assert!(inst.is_normalized());

            // Input order does not matter.
            let k = bidders.len();
            bidders.rotate_left((seed as usize) % k);
            prop_assert_eq!(Instance::new(r(1), q(1, 100), bidders.clone()).unwrap(), inst.clone());

            let mut before: Vec<_> = bidders.iter().map(|b| (b.value.clone(), b.budget.clone())).collect();
            let mut after: Vec<_> = inst.real_bidders().iter().map(|b| (b.value.clone(), b.budget.clone())).collect();
            before.sort();
            after.sort();
            prop_assert_eq!(before, after);

            let prefix = inst.prefix_budgets();
            prop_assert!(prefix.windows(2).all(|w| w[0] <= w[1]));
            prop_assert_eq!(prefix.last().unwrap(), &inst.total_budget());
        }
    }
}
