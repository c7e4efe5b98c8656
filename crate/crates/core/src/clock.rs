//! Ascending price (clock) auction.
//!
//! At price `p` every bidder with value at least `p` demands `b_i / p` units.
//! The clearing price `v*` is the highest price at which demand reaches the
//! supply. Bidders above `v*` spend their whole budget; among bidders valued
//! exactly `v*` units are filled in ranked order and the first one that does
//! not fit takes the remainder.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{BidProfile, Market, Rational};
use crate::sortcut::{Mode, Outcome};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClockResult {
    /// The market clearing price `v*`.
    pub clearing_price: Rational,
    /// Ranked position of the lowest-value winner.
    pub marginal: usize,
    /// Instance index of the lowest-value winner.
    pub marginal_bidder: usize,
    /// Whether the marginal bidder keeps part of her budget.
    pub partial: bool,
    pub outcome: Outcome,
    /// Revenue `R* = m * v*`.
    pub r_star: Rational,
}

/// Clears the ascending price auction on the stated bids.
pub fn clearing_price(profile: &BidProfile<'_>) -> Result<ClockResult> {
    Ok(clear_clock(&profile.market()?))
}

/// The ascending price auction allocation.
pub fn apa_allocate(profile: &BidProfile<'_>) -> Result<Outcome> {
    Ok(clearing_price(profile)?.outcome)
}

pub(crate) fn clear_clock(market: &Market) -> ClockResult {
    let m = market.supply();
    let ranked = market.ranked();
    let n = ranked.len();
    let mut first = 0;
    while first < n {
        let v = &ranked[first].value;
        let mut last = first;
        while last + 1 < n && &ranked[last + 1].value == v {
            last += 1;
        }
        let total = market.prefix(last + 1);
        let next = ranked.get(last + 1).map_or_else(Rational::zero, |r| r.value.clone());
        if total > &(m * v) {
            return jump(market, first, v.clone());
        }
        if total > &(m * &next) {
            let price = total / m;
            return settle(market, price, last, false, None);
        }
        first = last + 1;
    }
    unreachable!("the dummy bidder's tier always clears")
}

/// Demand jumps past the supply at price `v`, the value of the tier that
/// starts at ranked position `first`.
fn jump(market: &Market, first: usize, v: Rational) -> ClockResult {
    let mut left = market.supply() - market.prefix(first) / &v;
    if left.is_zero() {
        // The tiers above filled the supply exactly at this price.
        return settle(market, v, first - 1, false, None);
    }
    let mut pos = first;
    loop {
        let full = &market.at(pos).budget / &v;
        if full >= left {
            let partial = full > left;
            return settle(market, v, pos, partial, Some(left));
        }
        left -= full;
        pos += 1;
    }
}

/// Everyone ranked before `marginal` spends her budget at `price`; the
/// marginal bidder buys `marginal_units` if given, else spends her budget.
fn settle(market: &Market, price: Rational, marginal: usize, partial: bool, marginal_units: Option<Rational>) -> ClockResult {
    let mut outcome = Outcome::empty(Mode::Divisible, market.len());
    let at_dummy = &price == market.dummy_value();
    for (pos, r) in market.ranked().iter().enumerate().take(marginal + 1) {
        let units = match (&marginal_units, pos == marginal) {
            (Some(u), true) => u.clone(),
            _ => &r.budget / &price,
        };
        let paid = &units * &price;
        if at_dummy {
            outcome.dummy_tier_payments[r.bidder] = paid.clone();
        }
        outcome.units[r.bidder] = units;
        outcome.payments[r.bidder] = paid;
    }
    let r_star = market.supply() * &price;
    outcome.revenue = r_star.clone();
    debug_assert_eq!(&outcome.units_sold(), market.supply());
    debug_assert_eq!(outcome.payments.iter().sum::<Rational>(), r_star);
    ClockResult {
        clearing_price: price,
        marginal,
        marginal_bidder: market.at(marginal).bidder,
        partial,
        outcome,
        r_star,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{example1, one_bidder, r, two_bidders};
    use crate::model::{q, Bidder, Instance};

    #[test]
    fn example1_jumps_at_seven() {
        let inst = example1();
        let res = clearing_price(&BidProfile::truthful(&inst)).unwrap();
        assert_eq!((res.clearing_price.clone(), res.r_star.clone()), (r(7), r(133)));
        assert_eq!(res.marginal_bidder, 2);
        assert!(res.partial);
        assert_eq!(res.outcome.units[..4], [q(55, 7), q(60, 7), q(18, 7), r(0)]);
        assert_eq!(res.outcome.payments[..4], [r(55), r(60), r(18), r(0)]);
    }

    #[test]
    fn two_bidder_examples() {
        let res = clearing_price(&BidProfile::truthful(&two_bidders(20))).unwrap();
        assert_eq!((res.clearing_price, res.r_star), (r(3), r(15)));
        let res = clearing_price(&BidProfile::truthful(&two_bidders(2))).unwrap();
        assert_eq!((res.clearing_price, res.r_star), (r(1), r(5)));
        assert!(!res.partial);
    }

    #[test]
    fn single_bidder_interior() {
        let inst = one_bidder();
        let res = clearing_price(&BidProfile::truthful(&inst)).unwrap();
        assert_eq!(res.clearing_price, r(5));
        assert_eq!(res.outcome.units[0], r(2));
        assert_eq!(res.outcome.payments[0], r(10));
        assert_eq!(res.r_star, r(10));
    }

    #[test]
    fn huge_supply_falls_to_dummy_tier() {
        // Real money exactly covers the supply at the dummy price.
        let inst = Instance::new(r(1500), q(1, 100), vec![Bidder::new("a", r(5), r(10)), Bidder::new("b", r(3), r(5))]).unwrap();
        let res = clearing_price(&BidProfile::truthful(&inst)).unwrap();
        assert_eq!(res.clearing_price, q(1, 100));
        assert_eq!(res.outcome.payments[0], r(10));
        assert_eq!(res.outcome.payments[1], r(5));
        assert_eq!(res.outcome.revenue_excluding_dummy_tier(), r(0));
        assert_eq!(res.r_star, r(15));
        assert_eq!(res.marginal_bidder, 1);
        assert!(!res.partial);
    }

    #[test]
    fn tied_values_fill_in_order() {
        let inst = Instance::new(
            r(4),
            q(1, 100),
            vec![Bidder::new("a", r(5), r(10)), Bidder::new("b", r(5), r(10)), Bidder::new("c", r(5), r(10))],
        )
        .unwrap();
        let res = clearing_price(&BidProfile::truthful(&inst)).unwrap();
        assert_eq!(res.clearing_price, r(5));
        assert_eq!(res.outcome.units[..3], [r(2), r(2), r(0)]);
        assert_eq!(res.marginal, 1);
        assert!(!res.partial);
    }
}
