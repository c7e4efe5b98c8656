use super::{BidProfile, Rational};

/// One stated bid in ranked position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedBid {
    /// Index of the bidder in the instance.
    pub bidder: usize,
    pub value: Rational,
    pub budget: Rational,
}

/// Stated bids ranked by value, the order every mechanism works in.
///
/// Real bidders are ordered by stated value (descending), stated budget
/// (descending) and id; the dummy is always last. Positions are 0-based.
#[derive(Clone, Debug)]
pub struct Market {
    supply: Rational,
    dummy_value: Rational,
    ranked: Vec<RankedBid>,
    prefix: Vec<Rational>,
    position: Vec<usize>,
}

impl Market {
    pub(crate) fn from_profile(profile: &BidProfile<'_>) -> Self {
        let instance = profile.instance();
        let dummy = instance.dummy_index();
        let mut ranked: Vec<RankedBid> = profile
            .stated()
            .iter()
            .enumerate()
            .map(|(bidder, bid)| RankedBid { bidder, value: bid.value.clone(), budget: bid.budget.clone() })
            .collect();
        ranked.sort_by(|a, b| {
            (a.bidder == dummy)
                .cmp(&(b.bidder == dummy))
                .then_with(|| b.value.cmp(&a.value))
                .then_with(|| b.budget.cmp(&a.budget))
                .then_with(|| instance.bidders[a.bidder].id.cmp(&instance.bidders[b.bidder].id))
        });
        let mut prefix = Vec::with_capacity(ranked.len() + 1);
        let mut acc = Rational::zero();
        prefix.push(acc.clone());
        for r in &ranked {
            acc += &r.budget;
            prefix.push(acc.clone());
        }
        let mut position = vec![0; ranked.len()];
        for (pos, r) in ranked.iter().enumerate() {
            position[r.bidder] = pos;
        }
        Market { supply: instance.supply.clone(), dummy_value: instance.dummy_value.clone(), ranked, prefix, position }
    }

    pub fn supply(&self) -> &Rational {
        &self.supply
    }

    pub fn dummy_value(&self) -> &Rational {
        &self.dummy_value
    }

    pub fn len(&self) -> usize {
        self.ranked.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranked.is_empty()
    }

    pub fn ranked(&self) -> &[RankedBid] {
        &self.ranked
    }

    pub fn at(&self, pos: usize) -> &RankedBid {
        &self.ranked[pos]
    }

    /// Summed stated budget of the first `j` ranked bidders.
    pub fn prefix(&self, j: usize) -> &Rational {
        &self.prefix[j]
    }

    pub fn total_budget(&self) -> &Rational {
        &self.prefix[self.ranked.len()]
    }

    /// Ranked position of an instance bidder.
    pub fn position_of(&self, bidder: usize) -> usize {
        self.position[bidder]
    }

    /// Boundary position for a cut point: the largest `k` whose preceding
    /// budgets sum to at most `x`.
    pub fn boundary_at(&self, x: &Rational) -> usize {
        // prefix is nondecreasing; count prefix[0..n] entries <= x.
        let n = self.ranked.len();
        let count = self.prefix[..n].partition_point(|s| s <= x);
        count.max(1) - 1
    }
}
