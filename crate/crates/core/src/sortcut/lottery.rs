//! Budget lottery: charge the full stated budget with probability `p / b`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::{BidProfile, Rational};

use super::Outcome;

/// Realized payments of one lottery draw, indexed like the instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeDraw {
    pub seed: u64,
    pub realized: Vec<Rational>,
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(*b)).wrapping_mul(0x0100_0000_01b3))
}

/// Exact Bernoulli trial with success probability `p` in `[0, 1]`: compare a
/// uniform bit stream against the binary expansion of `p`.
fn bernoulli(rng: &mut impl Rng, p: &Rational) -> bool {
    if !p.is_positive() {
        return false;
    }
    let one = Rational::one();
    if p >= &one {
        return true;
    }
    let mut frac = p.clone();
    loop {
        frac = &frac + &frac;
        let bit = frac >= one;
        if bit {
            frac -= &one;
        }
        let draw: bool = rng.random();
        if draw != bit {
            return bit;
        }
        if frac.is_zero() {
            return false;
        }
    }
}

/// Draws each bidder's realized payment: her stated budget with probability
/// `p_i / b_i`, else zero. Each bidder uses her own stream keyed by `seed`
/// and her id, so draws do not depend on evaluation order.
///
/// # Panics
///
/// If some payment exceeds the stated budget, which no allocation in this
/// crate produces.
pub fn charge_lottery(outcome: &Outcome, profile: &BidProfile<'_>, seed: u64) -> ChargeDraw {
    let instance = profile.instance();
    let realized = outcome
        .payments
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let budget = &profile.bid(i).budget;
            assert!(p <= budget, "payment {p} exceeds stated budget {budget} of bidder {i}");
            if !p.is_positive() {
                return Rational::zero();
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(fnv1a(instance.bidders[i].id.as_bytes()));
            if bernoulli(&mut rng, &(p / budget)) {
                budget.clone()
            } else {
                Rational::zero()
            }
        })
        .collect();
    ChargeDraw { seed, realized }
}
