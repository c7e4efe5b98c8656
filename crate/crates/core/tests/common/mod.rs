#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sortcut_core::{q, Bid, BidProfile, Bidder, Instance, Rational};

pub fn r(n: i128) -> Rational {
    Rational::integer(n)
}

pub fn eps() -> Rational {
    q(1, 100)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Values 10, 9, 7, 6 with budgets 55, 60, 40, 30 and 19 units.
pub fn example1() -> Instance {
    Instance::new(
        r(19),
        eps(),
        vec![
            Bidder::new("1", r(10), r(55)),
            Bidder::new("2", r(9), r(60)),
            Bidder::new("3", r(7), r(40)),
            Bidder::new("4", r(6), r(30)),
        ],
    )
    .unwrap()
}

/// `1..=max_n` bidders with integer values and budgets in `1..=50` and an
/// integer supply in `1..=20`.
pub fn random_instance(rng: &mut impl Rng, max_n: usize) -> Instance {
    let n = rng.random_range(1..=max_n);
    let bidders = (0..n)
        .map(|i| Bidder::new(format!("b{i}"), r(rng.random_range(1..=50)), r(rng.random_range(1..=50))))
        .collect();
    Instance::new(r(rng.random_range(1..=20)), eps(), bidders).unwrap()
}

/// Like `random_instance` but values may be halves and the supply any
/// multiple of 1/4, exercising non-integer breakpoints.
pub fn random_fractional_instance(rng: &mut impl Rng, max_n: usize) -> Instance {
    let n = rng.random_range(1..=max_n);
    let bidders = (0..n)
        .map(|i| Bidder::new(format!("b{i}"), q(rng.random_range(2..=100), 2), r(rng.random_range(1..=50))))
        .collect();
    Instance::new(q(rng.random_range(1..=80), 4), eps(), bidders).unwrap()
}

/// Stated values redrawn for every real bidder, budgets kept.
pub fn random_opponents<'a>(rng: &mut impl Rng, instance: &'a Instance) -> BidProfile<'a> {
    let dummy = instance.dummy_index();
    let stated = instance
        .bidders
        .iter()
        .enumerate()
        .map(|(i, b)| {
            if i == dummy {
                Bid::from(b)
            } else {
                Bid::new(r(rng.random_range(1..=50)), b.budget.clone())
            }
        })
        .collect();
    BidProfile::new(instance, stated).unwrap()
}

/// Demand at cut `x`, computed by walking the ladders exactly as the
/// mechanism is described: rank bids, find the boundary, let every winner
/// spend her budget along her own copy of the ladder.
pub fn oracle_demand(profile: &BidProfile<'_>, x: &Rational) -> Rational {
    let inst = profile.instance();
    let dummy = inst.dummy_index();
    let mut order: Vec<usize> = (0..inst.len()).filter(|&i| i != dummy).collect();
    order.sort_by(|&a, &b| {
        let (ba, bb) = (profile.bid(a), profile.bid(b));
        bb.value
            .cmp(&ba.value)
            .then(bb.budget.cmp(&ba.budget))
            .then(inst.bidders[a].id.cmp(&inst.bidders[b].id))
    });
    order.push(dummy);
    let bids: Vec<&Bid> = order.iter().map(|&i| profile.bid(i)).collect();
    let mut k = 0;
    let mut before = Rational::zero();
    for (j, b) in bids.iter().enumerate() {
        if &before <= x {
            k = j;
        }
        before += &b.budget;
    }
    let s_before: Rational = bids[..k].iter().map(|b| b.budget.clone()).sum();
    let s_k = &s_before + &bids[k].budget;
    let residual = &s_k - x;

    let walk = |money: &Rational, tiers: &[(Rational, Rational)]| {
        let mut left = money.clone();
        let mut units = Rational::zero();
        for (price, cap) in tiers {
            let take = left.clone().min(cap.clone());
            units += &take / price;
            left -= take;
        }
        units + &left / &inst.dummy_value
    };
    let lower: Vec<(Rational, Rational)> = bids[k + 1..].iter().map(|b| (b.value.clone(), b.budget.clone())).collect();
    let mut winner_tiers = vec![(bids[k].value.clone(), residual)];
    winner_tiers.extend(lower.iter().cloned());

    let mut total = walk(&(x - &s_before), &lower);
    for b in &bids[..k] {
        total += walk(&b.budget, &winner_tiers);
    }
    total
}

/// Bisects the oracle demand on `[0, B]` until the bracket `lo < x <= hi`
/// with `D(lo) < m <= D(hi)` is narrower than `2^-64`.
pub fn oracle_bracket(profile: &BidProfile<'_>) -> (Rational, Rational) {
    let m = profile.supply().clone();
    let mut lo = Rational::zero();
    let mut hi: Rational = profile.stated().iter().map(|b| b.budget.clone()).sum();
    let width = Rational::pow2_neg(64);
    while &hi - &lo >= width {
        let mid = (&lo + &hi) / r(2);
        if oracle_demand(profile, &mid) >= m {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// Proptest strategy: up to `max_n` bidders with integer values and budgets
/// in `1..=50` and an integer supply in `1..=20`.
pub fn arb_instance(max_n: usize) -> impl proptest::strategy::Strategy<Value = Instance> {
    use proptest::prelude::*;
    (1i128..=20, proptest::collection::vec((1i128..=50, 1i128..=50), 1..=max_n)).prop_map(|(m, bids)| {
        let bidders = bids.into_iter().enumerate().map(|(i, (v, b))| Bidder::new(format!("b{i}"), r(v), r(b))).collect();
        Instance::new(r(m), eps(), bidders).unwrap()
    })
}
