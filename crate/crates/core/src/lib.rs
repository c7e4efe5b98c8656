//! Budget-constrained multi-unit auctions: the Sort-Cut mechanism, the
//! ascending price auction benchmark, property checkers and Greedy Bidding
//! dynamics, all in exact rational arithmetic.
//!
//! ```
//! use sortcut_core::{allocate_divisible, clearing_price, q, BidProfile, Bidder, Instance};
//!
//! # fn main() -> sortcut_core::Result<()> {
//! let inst = Instance::new(
//!     q(19, 1),
//!     q(1, 100),
//!     vec![
//!         Bidder::new("1", q(10, 1), q(55, 1)),
//!         Bidder::new("2", q(9, 1), q(60, 1)),
//!         Bidder::new("3", q(7, 1), q(40, 1)),
//!         Bidder::new("4", q(6, 1), q(30, 1)),
//!     ],
//! )?;
//! let truthful = BidProfile::truthful(&inst);
//! assert_eq!(allocate_divisible(&truthful)?.revenue, q(1108, 9));
//! let clock = clearing_price(&truthful)?;
//! assert_eq!((clock.clearing_price, clock.r_star), (q(7, 1), q(133, 1)));
//! # Ok(())
//! # }
//! ```

#![allow(clippy::result_large_err)]

pub mod analysis;
pub mod clock;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod sortcut;

#[cfg(test)]
mod fixtures;

pub use clock::{apa_allocate, clearing_price, ClockResult};
pub use error::{Error, Result};
pub use model::{q, Bid, BidProfile, Bidder, Instance, Rational, Violation};
pub use sortcut::{allocate_divisible, allocate_indivisible, charge_lottery, clear, Outcome};
