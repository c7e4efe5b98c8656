use serde::{Deserialize, Serialize};

use crate::clock::clearing_price;
use crate::error::Result;
use crate::model::{BidProfile, Instance, Rational};
use crate::sortcut::allocate_divisible;

/// Sort-Cut revenue against the ascending price auction benchmark.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RevenueGap {
    /// Sort-Cut revenue on truthful bids.
    pub revenue: Rational,
    /// Ascending price auction revenue `R*`.
    pub r_star: Rational,
    /// Largest budget among the Sort-Cut winners, boundary included.
    pub b_max: Rational,
}

impl RevenueGap {
    /// `R* - b_max <= R`.
    pub fn lower_bound_holds(&self) -> bool {
        &self.r_star - &self.b_max <= self.revenue
    }

    /// `R <= R*`.
    pub fn upper_bound_holds(&self) -> bool {
        self.revenue <= self.r_star
    }
}

pub fn revenue_gap(instance: &Instance) -> Result<RevenueGap> {
    let profile = BidProfile::truthful(instance);
    let out = allocate_divisible(&profile)?;
    let clock = clearing_price(&profile)?;
    let market = profile.market()?;
    let k = out.cut.as_ref().map_or(0, |c| c.boundary);
    let b_max = market.ranked()[..=k].iter().map(|r| r.budget.clone()).max().unwrap_or_else(Rational::zero);
    Ok(RevenueGap { revenue: out.revenue, r_star: clock.r_star, b_max })
}
