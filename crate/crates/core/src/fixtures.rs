//! Instances shared by unit tests.

use crate::model::{q, Bidder, Instance, Rational};

pub(crate) fn r(n: i128) -> Rational {
    Rational::integer(n)
}

/// Values 10, 9, 7, 6 with budgets 55, 60, 40, 30 and 19 units.
pub(crate) fn example1() -> Instance {
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

/// One bidder (v = 5, b = 10) and two units.
pub(crate) fn one_bidder() -> Instance {
    Instance::new(r(2), q(1, 100), vec![Bidder::new("a", r(5), r(10))]).unwrap()
}

pub(crate) fn two_bidders(b1: i128) -> Instance {
    Instance::new(
        r(5),
        q(1, 100),
        vec![Bidder::new("1", r(3), r(b1)), Bidder::new("2", r(2), r(3))],
    )
    .unwrap()
}
