//! Greedy Bidding in the repeated Sort-Cut auction.
//!
//! Bidders move one at a time in round-robin order, each adjusting only her
//! stated value by a fixed step. Budgets are always stated truthfully.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{Bid, BidProfile, Instance, Rational};
use crate::sortcut::{allocate_divisible, Outcome};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynamicsConfig {
    /// Bid change per activation.
    pub step: Rational,
    /// Upper bound on the number of activations.
    pub max_rounds: u64,
    /// Record a snapshot every this many activations (0 records none).
    pub record_every: u64,
}

impl DynamicsConfig {
    pub fn new(step: Rational, max_rounds: u64) -> Self {
        assert!(step.is_positive(), "dynamics step must be positive");
        assert!(max_rounds >= 1, "max_rounds must be at least 1");
        DynamicsConfig { step, max_rounds, record_every: 0 }
    }
}

/// Which Greedy Bidding rule fired.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Move {
    Lower,
    Raise,
    Hold,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snapshot {
    pub activation: u64,
    pub stated: Vec<Bid>,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynamicsTrace {
    pub snapshots: Vec<Snapshot>,
    pub converged: bool,
    /// Activations performed.
    pub rounds_used: u64,
    pub final_stated: Vec<Bid>,
    pub final_outcome: Outcome,
}

fn overpays(outcome: &Outcome, bidder: usize, value: &Rational) -> bool {
    let y = &outcome.units[bidder];
    y.is_positive() && outcome.payments[bidder] > y * value
}

/// Holds units and pays at least her value for them on average.
fn gains_nothing(outcome: &Outcome, bidder: usize, value: &Rational) -> bool {
    let y = &outcome.units[bidder];
    y.is_positive() && outcome.payments[bidder] >= y * value
}

/// One Greedy Bidding activation of `bidder`; returns the rule applied and
/// her new stated bid.
///
/// 1. Paying more per unit than her value: lower the bid by one step, never
///    below the dummy value.
/// 2. Budget left over: raise the bid by one step, unless she already holds
///    units while bidding at least her value, or the raised bid would have
///    her pay at least her value per unit.
/// 3. Otherwise hold.
pub fn greedy_step(profile: &BidProfile<'_>, bidder: usize, step: &Rational) -> Result<(Move, Bid)> {
    let truth = &profile.instance().bidders[bidder];
    let current = profile.bid(bidder).clone();
    let outcome = allocate_divisible(profile)?;
    if overpays(&outcome, bidder, &truth.value) {
        let floor = &profile.instance().dummy_value;
        let lowered = (&current.value - step).max(floor.clone());
        if lowered == current.value {
            return Ok((Move::Hold, current));
        }
        return Ok((Move::Lower, Bid::new(lowered, current.budget)));
    }
    if outcome.payments[bidder] < current.budget {
        if outcome.units[bidder].is_positive() && current.value >= truth.value {
            return Ok((Move::Hold, current));
        }
        let raised = Bid::new(&current.value + step, current.budget.clone());
        let next = allocate_divisible(&profile.with_bid(bidder, raised.clone()))?;
        if gains_nothing(&next, bidder, &truth.value) {
            return Ok((Move::Hold, current));
        }
        return Ok((Move::Raise, raised));
    }
    Ok((Move::Hold, current))
}

/// Runs Greedy Bidding from `initial` (truthful if `None`) until a full
/// round passes without a bid change or `max_rounds` activations are used.
pub fn run_dynamics(instance: &Instance, config: &DynamicsConfig, initial: Option<Vec<Bid>>) -> Result<DynamicsTrace> {
    let mut profile = match initial {
        Some(stated) => BidProfile::new(instance, stated)?,
        None => BidProfile::truthful(instance),
    };
    let players: Vec<usize> = (0..instance.len()).filter(|&i| i != instance.dummy_index()).collect();
    let mut snapshots = Vec::new();
    let mut quiet = 0;
    let mut activations = 0;
    let mut converged = false;
    'run: loop {
        for &bidder in &players {
            if activations >= config.max_rounds {
                break 'run;
            }
            let (mv, bid) = greedy_step(&profile, bidder, &config.step)?;
            activations += 1;
            if mv == Move::Hold {
                quiet += 1;
            } else {
                quiet = 0;
                profile = profile.with_bid(bidder, bid);
            }
            if config.record_every > 0 && activations % config.record_every == 0 {
                snapshots.push(Snapshot {
                    activation: activations,
                    stated: profile.stated().to_vec(),
                    outcome: allocate_divisible(&profile)?,
                });
            }
            if quiet >= players.len() {
                converged = true;
                break 'run;
            }
        }
    }
    Ok(DynamicsTrace {
        snapshots,
        converged,
        rounds_used: activations,
        final_outcome: allocate_divisible(&profile)?,
        final_stated: profile.stated().to_vec(),
    })
}
