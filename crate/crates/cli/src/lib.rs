//! Command-line front end for the sortcut engine.

#![allow(clippy::result_large_err)]

pub mod error;
pub mod instance_file;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use sortcut_core::analysis::{best_deviation_by_class, is_pareto_divisible, is_pareto_indivisible, revenue_gap, DeviationGrid};
use sortcut_core::dynamics::{run_dynamics, DynamicsConfig};
use sortcut_core::{allocate_divisible, allocate_indivisible, charge_lottery, clearing_price, Bid, Error, Rational};

pub use error::CliError;
pub use instance_file::{parse_instance, parse_instance_str, write_instance, InstanceFile};
pub use report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Divisible Sort-Cut clearing.
    Solve,
    /// Sort-Cut with whole units.
    SolveIndivisible,
    /// Ascending price (clock) auction.
    Apa,
    /// Pareto optimality of the Sort-Cut outcome.
    CheckPareto,
    /// Revenue against the clock auction benchmark.
    CheckRevenue,
    /// Grid search for profitable unilateral deviations.
    CheckTruthful,
    /// Repeated Greedy Bidding.
    Dynamics,
    /// Draw realized budget charges.
    Lottery,
}

impl Command {
    fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

#[derive(Debug, Parser)]
#[command(name = "sortcut", version, about = "Budget-constrained multi-unit auctions")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Instance file in the `.auction` format.
    pub instance: PathBuf,
    /// Lottery seed.
    #[arg(long, env = "SORTCUT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Bid step for dynamics and deviation grids.
    #[arg(long, default_value = "1/100")]
    pub delta: Rational,
    /// Activation limit for dynamics.
    #[arg(long, default_value_t = 100_000)]
    pub max_rounds: u64,
    /// Minimum number of values and budgets per deviation grid.
    #[arg(long, default_value_t = 25)]
    pub grid_size: usize,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
}

/// Result of one invocation: exit code and what to print.
#[derive(Debug)]
pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<Report>,
}

impl Run {
    fn input_error(message: String) -> Self {
        Run { code: 2, stdout: String::new(), stderr: message, report: None }
    }
}

/// Parses `argv` (program name first) and runs the command.
///
/// Exit codes: 0 when every verdict holds, 1 when one fails, 2 on input
/// errors.
pub fn run_command<I, T>(argv: I) -> Run
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Run { code, stdout: text, stderr: String::new(), report: None }
            } else {
                Run::input_error(text)
            };
        }
    };
    match execute(&cli) {
        Ok(report) => Run {
            code: if report.all_hold() { 0 } else { 1 },
            stdout: if cli.json { report.to_json() + "\n" } else { report.to_text() },
            stderr: String::new(),
            report: Some(report),
        },
        Err(e) => Run::input_error(format!("error: {e}\n")),
    }
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    if !cli.delta.is_positive() {
        return Err(CliError::Invalid { line: None, message: format!("--delta must be positive, got {}", cli.delta) });
    }
    if cli.max_rounds == 0 {
        return Err(CliError::Invalid { line: None, message: "--max-rounds must be at least 1".into() });
    }
    let file = parse_instance(&cli.instance)?;
    let inst = &file.instance;
    let profile = file.profile();
    let mut report = Report::new(&cli.command.name(), &file);
    match cli.command {
        Command::Solve => {
            report = report.with_outcome(inst, &allocate_divisible(&profile)?);
        }
        Command::SolveIndivisible => match allocate_indivisible(&profile) {
            Ok(out) => report = report.with_outcome(inst, &out),
            Err(e @ Error::NoIndivisibleClearing { .. }) => report.verdict("whole-unit clearing exists", false, Some(e.to_string())),
            Err(e) => return Err(e.into()),
        },
        Command::Apa => {
            let res = clearing_price(&profile)?;
            report = report.with_outcome(inst, &res.outcome);
            report.v_star = Some((&res.clearing_price).into());
            report.r_star = Some((&res.r_star).into());
        }
        Command::CheckPareto => {
            let out = allocate_divisible(&profile)?;
            let rep = is_pareto_divisible(&profile, &out);
            report = report.with_outcome(inst, &out);
            report.verdict("divisible outcome is Pareto optimal", rep.is_pareto, rep.witness.map(|w| format!("{w:?}")));
            if inst.supply.is_integer() {
                if let Ok(whole) = allocate_indivisible(&profile) {
                    let rep = is_pareto_indivisible(&profile, &whole);
                    report.verdict("whole-unit outcome is Pareto optimal", rep.is_pareto, rep.witness.map(|w| format!("{w:?}")));
                }
            }
        }
        Command::CheckRevenue => {
            let gap = revenue_gap(inst)?;
            report.revenue = Some((&gap.revenue).into());
            report.r_star = Some((&gap.r_star).into());
            report.b_max = Some((&gap.b_max).into());
            let witness = format!("R = {}, R* = {}, b_max = {}", gap.revenue, gap.r_star, gap.b_max);
            report.verdict("R* - b_max <= R", gap.lower_bound_holds(), (!gap.lower_bound_holds()).then(|| witness.clone()));
            report.verdict("R <= R*", gap.upper_bound_holds(), (!gap.upper_bound_holds()).then_some(witness));
        }
        Command::CheckTruthful => {
            for bidder in 0..inst.dummy_index() {
                let truthful = profile.with_bid(bidder, Bid::from(&inst.bidders[bidder]));
                let grid = DeviationGrid::around(&truthful, bidder, &cli.delta, cli.grid_size)?;
                let id = &inst.bidders[bidder].id;
                for rep in best_deviation_by_class(&truthful, bidder, &grid)? {
                    if !rep.deviation_class.is_dominated() {
                        continue;
                    }
                    let witness = rep.is_profitable().then(|| {
                        format!(
                            "bidding ({}, {}) gains {} over truth",
                            rep.best_deviation.value, rep.best_deviation.budget, rep.gain
                        )
                    });
                    report.verdict(format!("bidder {id}: no profitable {} deviation", rep.deviation_class), !rep.is_profitable(), witness);
                }
            }
        }
        Command::Dynamics => {
            let config = DynamicsConfig::new(cli.delta.clone(), cli.max_rounds);
            let initial = file.has_overrides().then(|| file.stated.clone());
            let trace = run_dynamics(inst, &config, initial)?;
            report = report.with_outcome(inst, &trace.final_outcome);
            let clock = clearing_price(&sortcut_core::BidProfile::truthful(inst))?;
            report.v_star = Some((&clock.clearing_price).into());
            report.r_star = Some((&clock.r_star).into());
            let final_file = InstanceFile { instance: inst.clone(), stated: trace.final_stated.clone() };
            report.dynamics = Some(report::DynamicsSummary {
                step: (&cli.delta).into(),
                converged: trace.converged,
                activations: trace.rounds_used,
                final_bids: report::InstanceEcho::new(&final_file).bidders,
            });
            let witness = (!trace.converged).then(|| format!("no quiet round within {} activations", trace.rounds_used));
            report.verdict("dynamics converged", trace.converged, witness);
        }
        Command::Lottery => {
            let out = allocate_divisible(&profile)?;
            let draw = charge_lottery(&out, &profile, cli.seed);
            report = report.with_outcome(inst, &out);
            report.seed = Some(cli.seed);
            for (line, paid) in report.bidders.iter_mut().zip(&draw.realized) {
                line.realized_payment = Some(paid.into());
            }
            let over = draw.realized.iter().enumerate().find(|(i, paid)| *paid > &profile.bid(*i).budget);
            report.verdict(
                "no charge exceeds the stated budget",
                over.is_none(),
                over.map(|(i, paid)| format!("bidder {} charged {paid}", inst.bidders[i].id)),
            );
        }
    }
    Ok(report)
}
