//! The `.auction` instance format.
//!
//! ```toml
//! supply = 19
//! dummy_value = "1/100"
//!
//! [[bidder]]
//! id = "1"
//! value = 10
//! budget = 55
//! stated = { value = "19/2", budget = 55 }
//! ```
//!
//! Rationals are integers or `"p/q"` strings. `stated` is optional and
//! overrides the announced bid of that bidder.

use std::fmt;
use std::ops::Range;
use std::path::Path;

use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;
use sortcut_core::model::DUMMY_ID;
use sortcut_core::{Bid, BidProfile, Bidder, Instance, Rational};
use toml::Spanned;

use crate::error::CliError;

/// A rational or id literal before conversion, integer or string.
#[derive(Clone, Debug)]
struct Literal(String);

impl<'de> Deserialize<'de> for Literal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct LiteralVisitor;

        impl Visitor<'_> for LiteralVisitor {
            type Value = Literal;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a \"p/q\" string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Literal, E> {
                Ok(Literal(v.to_string()))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Literal, E> {
                Ok(Literal(v.to_string()))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Literal, E> {
                Ok(Literal(v.to_string()))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Literal, E> {
                Err(E::custom(format!("float {v} is not exact; write it as \"p/q\"")))
            }
        }

        deserializer.deserialize_any(LiteralVisitor)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    supply: Spanned<Literal>,
    dummy_value: Spanned<Literal>,
    #[serde(default, rename = "bidder")]
    bidders: Vec<RawBidder>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBidder {
    id: Spanned<Literal>,
    value: Spanned<Literal>,
    budget: Spanned<Literal>,
    stated: Option<RawStated>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStated {
    value: Spanned<Literal>,
    budget: Spanned<Literal>,
}

/// A parsed instance with the stated bids aligned to its bidders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub instance: Instance,
    pub stated: Vec<Bid>,
}

impl InstanceFile {
    pub fn profile(&self) -> BidProfile<'_> {
        BidProfile::new(&self.instance, self.stated.clone()).expect("stated bids are aligned at parse time")
    }

    /// Whether any bidder announces something other than her true bid.
    pub fn has_overrides(&self) -> bool {
        self.instance.bidders.iter().zip(&self.stated).any(|(b, s)| &Bid::from(b) != s)
    }
}

struct Source<'a> {
    text: &'a str,
}

impl Source<'_> {
    fn line(&self, span: &Range<usize>) -> usize {
        self.text[..span.start.min(self.text.len())].matches('\n').count() + 1
    }

    fn rational(&self, lit: &Spanned<Literal>, field: &str) -> Result<Rational, CliError> {
        lit.get_ref().0.parse().map_err(|e| CliError::Parse {
            line: self.line(&lit.span()),
            message: format!("{field}: {e}"),
        })
    }
}

pub fn parse_instance(path: &Path) -> Result<InstanceFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    parse_instance_str(&text)
}

pub fn parse_instance_str(text: &str) -> Result<InstanceFile, CliError> {
    let src = Source { text };
    let raw: RawFile = toml::from_str(text).map_err(|e| CliError::Parse {
        line: e.span().map_or(1, |s| src.line(&s)),
        message: e.message().to_string(),
    })?;
    let supply = src.rational(&raw.supply, "supply")?;
    let dummy_value = src.rational(&raw.dummy_value, "dummy_value")?;
    let mut bidders = Vec::with_capacity(raw.bidders.len());
    let mut lines = Vec::with_capacity(raw.bidders.len());
    for b in &raw.bidders {
        let id = b.id.get_ref().0.clone();
        if id == DUMMY_ID {
            return Err(CliError::Parse { line: src.line(&b.id.span()), message: format!("bidder id `{id}` is reserved") });
        }
        bidders.push(Bidder::new(id.clone(), src.rational(&b.value, "value")?, src.rational(&b.budget, "budget")?));
        lines.push((id, src.line(&b.id.span())));
    }
    let instance = Instance::new(supply, dummy_value, bidders).map_err(|e| {
        let message = e.to_string();
        let line = lines.iter().find(|(id, _)| message.contains(&format!("`{id}`"))).map(|(_, l)| *l);
        CliError::Invalid { line, message }
    })?;
    let mut stated: Vec<Bid> = instance.bidders.iter().map(Bid::from).collect();
    for b in &raw.bidders {
        if let Some(s) = &b.stated {
            let idx = instance.index_of(&b.id.get_ref().0).expect("bidder survives normalization");
            stated[idx] = Bid::new(src.rational(&s.value, "stated value")?, src.rational(&s.budget, "stated budget")?);
        }
    }
    let file = InstanceFile { instance, stated };
    if let Err(violations) = file.profile().validate() {
        use sortcut_core::Violation::*;
        let (bidder, what) = match violations[0] {
            NonPositiveValue { bidder } => (bidder, "stated value must be positive"),
            BelowDummyValue { bidder } => (bidder, "stated value is below the dummy value"),
            NegativeBudget { bidder } => (bidder, "stated budget is negative"),
            DummyNotTruthful => unreachable!("the dummy never takes overrides"),
        };
        let id = &file.instance.bidders[bidder].id;
        let line = lines.iter().find(|(l, _)| l == id).map(|(_, l)| *l);
        return Err(CliError::Invalid { line, message: format!("bidder `{id}`: {what}") });
    }
    Ok(file)
}

fn quoted(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

fn literal(r: &Rational) -> String {
    if r.to_i128().is_some_and(|v| i64::try_from(v).is_ok()) {
        r.to_string()
    } else {
        quoted(&r.to_string())
    }
}

/// Renders an instance back to the `.auction` format. Parsing the result
/// gives the same instance and stated bids.
pub fn write_instance(file: &InstanceFile) -> String {
    let inst = &file.instance;
    let mut out = format!("supply = {}\ndummy_value = {}\n", literal(&inst.supply), literal(&inst.dummy_value));
    for (b, s) in inst.real_bidders().iter().zip(&file.stated) {
        out.push_str(&format!(
            "\n[[bidder]]\nid = {}\nvalue = {}\nbudget = {}\n",
            quoted(&b.id),
            literal(&b.value),
            literal(&b.budget)
        ));
        if s != &Bid::from(b) {
            out.push_str(&format!("stated = {{ value = {}, budget = {} }}\n", literal(&s.value), literal(&s.budget)));
        }
    }
    out
}
