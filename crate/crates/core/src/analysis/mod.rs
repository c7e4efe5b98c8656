//! Property checkers: Pareto-optimality, the revenue benchmark and
//! unilateral deviation search.

mod deviation;
mod pareto;
mod revenue;

pub use deviation::{
    best_deviation, best_deviation_by_class, is_equilibrium, utility, DeviationClass, DeviationGrid,
    DeviationReport, EquilibriumReport, Utility,
};
pub use pareto::{is_pareto_divisible, is_pareto_indivisible, ParetoReport, ParetoWitness};
pub use revenue::{revenue_gap, RevenueGap};
