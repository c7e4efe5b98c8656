//! Machine-readable results. Every rational carries its exact value and a
//! six-place decimal; the exact value is authoritative.

use std::fmt::{self, Write};

use serde::{Deserialize, Serialize};
use sortcut_core::sortcut::CutPoint;
use sortcut_core::{Instance, Outcome, Rational};

use crate::instance_file::InstanceFile;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Num {
    pub exact: Rational,
    pub decimal: String,
}

impl From<&Rational> for Num {
    fn from(r: &Rational) -> Self {
        Num { exact: r.clone(), decimal: r.to_decimal(6) }
    }
}

impl From<Rational> for Num {
    fn from(r: Rational) -> Self {
        Num::from(&r)
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact.is_integer() {
            write!(f, "{}", self.exact)
        } else {
            write!(f, "{} (~{})", self.exact, self.decimal)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BidderEcho {
    pub id: String,
    pub value: Num,
    pub budget: Num,
    pub stated_value: Num,
    pub stated_budget: Num,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceEcho {
    pub supply: Num,
    pub dummy_value: Num,
    pub bidders: Vec<BidderEcho>,
}

impl InstanceEcho {
    pub fn new(file: &InstanceFile) -> Self {
        let inst = &file.instance;
        InstanceEcho {
            supply: (&inst.supply).into(),
            dummy_value: (&inst.dummy_value).into(),
            bidders: inst
                .real_bidders()
                .iter()
                .zip(&file.stated)
                .map(|(b, s)| BidderEcho {
                    id: b.id.clone(),
                    value: (&b.value).into(),
                    budget: (&b.budget).into(),
                    stated_value: (&s.value).into(),
                    stated_budget: (&s.budget).into(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutEcho {
    pub x: Num,
    /// 1-based rank of the boundary bidder.
    pub k: usize,
    pub boundary_id: String,
    /// Money the boundary bidder keeps unspent.
    pub residual: Num,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BidderLine {
    pub id: String,
    pub units: Num,
    pub payment: Num,
    pub payment_excluding_dummy_tier: Num,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realized_payment: Option<Num>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynamicsSummary {
    pub step: Num,
    pub converged: bool,
    pub activations: u64,
    pub final_bids: Vec<BidderEcho>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub instance: InstanceEcho,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cut: Option<CutEcho>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bidders: Vec<BidderLine>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub revenue: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub revenue_excluding_dummy_tier: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_star: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_star: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_max: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<DynamicsSummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn new(command: &str, file: &InstanceFile) -> Self {
        Report {
            command: command.to_string(),
            instance: InstanceEcho::new(file),
            mode: None,
            seed: None,
            cut: None,
            bidders: Vec::new(),
            revenue: None,
            revenue_excluding_dummy_tier: None,
            v_star: None,
            r_star: None,
            b_max: None,
            dynamics: None,
            verdicts: Vec::new(),
        }
    }

    /// Fills mode, cut, per-bidder lines and revenue from an outcome.
    pub fn with_outcome(mut self, instance: &Instance, outcome: &Outcome) -> Self {
        self.mode = Some(format!("{:?}", outcome.mode).to_lowercase());
        self.cut = outcome.cut.as_ref().map(|c| cut_echo(instance, c));
        self.bidders = instance
            .bidders
            .iter()
            .enumerate()
            .map(|(i, b)| BidderLine {
                id: b.id.clone(),
                units: (&outcome.units[i]).into(),
                payment: (&outcome.payments[i]).into(),
                payment_excluding_dummy_tier: outcome.payment_excluding_dummy_tier(i).into(),
                realized_payment: None,
            })
            .collect();
        self.revenue = Some((&outcome.revenue).into());
        self.revenue_excluding_dummy_tier = Some(outcome.revenue_excluding_dummy_tier().into());
        self
    }

    pub fn verdict(&mut self, name: impl Into<String>, holds: bool, witness: Option<String>) {
        self.verdicts.push(Verdict { name: name.into(), holds, witness });
    }

    pub fn all_hold(&self) -> bool {
        self.verdicts.iter().all(|v| v.holds)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// Plain-text rendering for terminals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let inst = &self.instance;
        let _ = writeln!(out, "{}: {} bidders, supply {}, dummy value {}", self.command, inst.bidders.len(), inst.supply, inst.dummy_value);
        if let Some(mode) = &self.mode {
            let _ = writeln!(out, "mode: {mode}");
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed: {seed}");
        }
        if let Some(c) = &self.cut {
            let _ = writeln!(out, "cut: x = {}, k = {} (bidder {}), residual b'_k = {}", c.x, c.k, c.boundary_id, c.residual);
        }
        if let Some(d) = &self.dynamics {
            let _ = writeln!(out, "dynamics: step {}, {} activations, converged: {}", d.step, d.activations, d.converged);
            for b in &d.final_bids {
                let _ = writeln!(out, "  {}: bids {} (true value {})", b.id, b.stated_value, b.value);
            }
        }
        for b in self.bidders.iter().filter(|b| !b.units.exact.is_zero() || !b.payment.exact.is_zero()) {
            let _ = write!(out, "  {}: units {}, payment {}", b.id, b.units, b.payment);
            if b.payment_excluding_dummy_tier != b.payment {
                let _ = write!(out, " ({} excluding the dummy tier)", b.payment_excluding_dummy_tier);
            }
            if let Some(r) = &b.realized_payment {
                let _ = write!(out, ", charged {r}");
            }
            out.push('\n');
        }
        let fields = [
            ("revenue", &self.revenue),
            ("revenue excluding dummy tier", &self.revenue_excluding_dummy_tier),
            ("v*", &self.v_star),
            ("R*", &self.r_star),
            ("b_max", &self.b_max),
        ];
        for (name, value) in fields {
            if let Some(v) = value {
                let _ = writeln!(out, "{name}: {v}");
            }
        }
        for v in &self.verdicts {
            let _ = write!(out, "[{}] {}", if v.holds { "ok" } else { "FAILED" }, v.name);
            if let Some(w) = &v.witness {
                let _ = write!(out, ": {w}");
            }
            out.push('\n');
        }
        out
    }
}

fn cut_echo(instance: &Instance, cut: &CutPoint) -> CutEcho {
    CutEcho {
        x: (&cut.x).into(),
        k: cut.k(),
        boundary_id: instance.bidders[cut.bidder].id.clone(),
        residual: (&cut.residual).into(),
    }
}
