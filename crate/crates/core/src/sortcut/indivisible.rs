//! Sort-Cut for whole units.
//!
//! Each ladder rung offers `floor(capacity / price)` whole units. A buyer
//! takes full rungs while she can afford them; the first rung she can only
//! partly afford ends her walk after buying what she can. Buyers are served
//! in ranked order and every purchase is capped by the supply still left.
//! The number of units sold is a step function of the cut `x`; the clearing
//! point is the smallest candidate breakpoint at which all units are sold.

use crate::error::{Error, Result};
use crate::model::{BidProfile, Market, Rational};

use super::{CutPoint, Mode, Outcome};

struct Purchase {
    units: Rational,
    paid: Rational,
    paid_at_dummy_price: Rational,
}

/// Whole-unit walk over `(price, money capacity)` rungs and the dummy tail.
fn walk<'a>(
    rungs: impl Iterator<Item = (&'a Rational, &'a Rational)>,
    dummy_price: &Rational,
    money: &Rational,
    supply_left: &Rational,
) -> Purchase {
    let mut p = Purchase { units: Rational::zero(), paid: Rational::zero(), paid_at_dummy_price: Rational::zero() };
    let mut money = money.clone();
    let buy = |p: &mut Purchase, money: &mut Rational, count: Rational, price: &Rational| {
        let cost = &count * price;
        *money -= &cost;
        if price == dummy_price {
            p.paid_at_dummy_price += &cost;
        }
        p.paid += cost;
        p.units += count;
    };
    for (price, capacity) in rungs {
        let room = supply_left - &p.units;
        if !room.is_positive() {
            return p;
        }
        let offered = (capacity / price).floor();
        let affordable = (&money / price).floor();
        if affordable >= offered {
            buy(&mut p, &mut money, offered.clone().min(room.clone()), price);
            if offered > room {
                return p;
            }
        } else {
            buy(&mut p, &mut money, affordable.min(room), price);
            return p;
        }
    }
    let room = supply_left - &p.units;
    if room.is_positive() {
        let affordable = (&money / dummy_price).floor();
        buy(&mut p, &mut money, affordable.min(room), dummy_price);
    }
    p
}

/// Whole-unit allocation for a cut at `x`, indexed by instance bidder.
fn allocation_at(market: &Market, x: &Rational) -> Outcome {
    let cut = CutPoint::at(market, x.clone());
    let k = cut.boundary;
    let mut out = Outcome::empty(Mode::Indivisible, market.len());
    let ranked = market.ranked();
    let head = &ranked[k];
    let mut left = market.supply().clone();
    for (pos, r) in ranked.iter().enumerate().take(k + 1) {
        let purchase = if pos < k {
            let first = std::iter::once((&head.value, &cut.residual));
            let rest = ranked[k + 1..].iter().map(|b| (&b.value, &b.budget));
            walk(first.chain(rest), market.dummy_value(), &r.budget, &left)
        } else {
            let rest = ranked[k + 1..].iter().map(|b| (&b.value, &b.budget));
            walk(rest, market.dummy_value(), &(x - market.prefix(k)), &left)
        };
        left -= &purchase.units;
        out.revenue += &purchase.paid;
        out.units[r.bidder] = purchase.units;
        out.payments[r.bidder] = purchase.paid;
        out.dummy_tier_payments[r.bidder] = purchase.paid_at_dummy_price;
    }
    out.cut = Some(cut);
    out
}

/// The cut points at which the whole-unit allocation can change, ascending.
fn candidates(market: &Market) -> Vec<Rational> {
    let m = market.supply();
    let n = market.len();
    let ranked = market.ranked();
    let mut out = vec![market.total_budget().clone()];
    for k in 0..n {
        let (start, end) = (market.prefix(k), market.prefix(k + 1));
        if start == end {
            continue;
        }
        out.push(start.clone());
        // The boundary rung shrinks by one unit each time x passes end - t*v_k.
        let v = &ranked[k].value;
        let mut x = end - v;
        while &x > start {
            out.push(x.clone());
            x -= v;
        }
        // The boundary bidder affords one more unit along her own ladder.
        let budget = &ranked[k].budget;
        let mut cost = Rational::zero();
        let mut units = Rational::zero();
        let rungs = ranked[k + 1..].iter().map(|b| (&b.value, (&b.budget / &b.value).floor()));
        let tail = std::iter::repeat((market.dummy_value(), m.clone()));
        'rungs: for (price, count) in rungs.chain(tail) {
            let mut t = Rational::zero();
            while t < count {
                if &units >= m {
                    break 'rungs;
                }
                cost += price;
                if &cost >= budget {
                    break 'rungs;
                }
                out.push(start + &cost);
                t += Rational::one();
                units += Rational::one();
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Whole-unit allocation at a given cut, for inspecting trial points.
pub fn indivisible_allocation_at(profile: &BidProfile<'_>, x: &Rational) -> Result<Outcome> {
    let market = profile.market()?;
    if x.is_negative() || x > market.total_budget() {
        return Err(Error::CutOutOfRange { x: x.clone(), total: market.total_budget().clone() });
    }
    Ok(allocation_at(&market, x))
}

/// Indivisible Sort-Cut. The supply must be a positive integer.
pub fn allocate_indivisible(profile: &BidProfile<'_>) -> Result<Outcome> {
    let market = profile.market()?;
    let m = market.supply();
    if !m.is_integer() || !m.is_positive() {
        return Err(Error::NonIntegerSupply(m.clone()));
    }
    let points = candidates(&market);
    let mut previous: Option<(Rational, Outcome)> = None;
    for x in &points {
        let out = allocation_at(&market, x);
        if &out.units_sold() == m {
            return Ok(out);
        }
        previous = Some((x.clone(), out));
    }
    let (x_low, low) = previous.expect("candidate list always contains B");
    let top = market.total_budget().clone();
    let high = allocation_at(&market, &top);
    Err(Error::NoIndivisibleClearing {
        x_low,
        x_high: top,
        units_low: low.units_sold(),
        units_high: high.units_sold(),
        allocation_low: low.units,
        allocation_high: high.units,
    })
}
