//! Upper bounds on (restricted) successive minima and lattice point counts.
//!
//! Every evaluator returns a [`BoundBreakdown`]: a certified enclosure of the
//! bound together with the intermediate quantities used to compute it.

mod classic;
mod full;
mod lower;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::arith::{fmt_rational, Enclosure, Rational};

pub use classic::{bhw_upper, henze_upper, minkowski_first, siegel_bound, vdc_lower};
pub use full::{
    cor_full_higher, cor_one_full_higher, full_rank_inputs, improved_constant, thm_full_bound, thm_full_from,
    torus_volume_lower_bound, FullRankInputs,
};
pub use lower::{
    cor_higher_lower_bound, cor_higher_lower_from, fukshansky_bound, gaudron_bound, lower_rank_inputs, plank_bound,
    thm_lower_bound, thm_lower_from, LowerRankInputs,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundName {
    MinkowskiFirst,
    Siegel,
    Fukshansky,
    Gaudron,
    AvoidLowerRank,
    AvoidLowerRankHigher,
    Plank,
    AvoidFullRank,
    AvoidFullRankImproved,
    AvoidFullRankHigher,
    AvoidSingleFullRankHigher,
    VanDerCorput,
    BetkeHenkWills,
    Henze,
}

impl BoundName {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::MinkowskiFirst => "minkowski_first",
            BoundName::Siegel => "siegel",
            BoundName::Fukshansky => "fukshansky",
            BoundName::Gaudron => "gaudron",
            BoundName::AvoidLowerRank => "avoid_lower_rank",
            BoundName::AvoidLowerRankHigher => "avoid_lower_rank_higher",
            BoundName::Plank => "plank",
            BoundName::AvoidFullRank => "avoid_full_rank",
            BoundName::AvoidFullRankImproved => "avoid_full_rank_improved",
            BoundName::AvoidFullRankHigher => "avoid_full_rank_higher",
            BoundName::AvoidSingleFullRankHigher => "avoid_single_full_rank_higher",
            BoundName::VanDerCorput => "van_der_corput",
            BoundName::BetkeHenkWills => "betke_henk_wills",
            BoundName::Henze => "henze",
        }
    }
}

impl std::fmt::Display for BoundName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A named intermediate value of a bound computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Quantity {
    Exact(Rational),
    Interval(Enclosure),
    Integer(BigInt),
    List(Vec<Rational>),
    Flag(bool),
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Quantity::Exact(x) => s.serialize_str(&fmt_rational(x)),
            Quantity::Interval(e) => e.serialize(s),
            Quantity::Integer(i) => s.serialize_str(&i.to_string()),
            Quantity::List(xs) => {
                let mut seq = s.serialize_seq(Some(xs.len()))?;
                for x in xs {
                    seq.serialize_element(&fmt_rational(x))?;
                }
                seq.end()
            }
            Quantity::Flag(b) => s.serialize_bool(*b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundBreakdown {
    #[serde(rename = "bound")]
    pub name: BoundName,
    #[serde(rename = "final")]
    pub value: Enclosure,
    pub intermediates: BTreeMap<String, Quantity>,
}

impl BoundBreakdown {
    pub(crate) fn new(name: BoundName, value: Enclosure) -> Self {
        Self { name, value, intermediates: BTreeMap::new() }
    }

    pub(crate) fn with(mut self, key: &str, q: Quantity) -> Self {
        self.intermediates.insert(key.to_string(), q);
        self
    }

    pub fn hi(&self) -> &Rational {
        self.value.hi()
    }

    pub fn lo(&self) -> &Rational {
        self.value.lo()
    }

    pub fn get(&self, key: &str) -> Option<&Quantity> {
        self.intermediates.get(key)
    }

    /// The intermediate `key` if it is an exact rational.
    pub fn exact(&self, key: &str) -> Option<&Rational> {
        match self.intermediates.get(key) {
            Some(Quantity::Exact(x)) => Some(x),
            _ => None,
        }
    }

    /// Whether `value` does not exceed the bound; exact comparison against the upper end.
    pub fn dominates(&self, value: &Rational) -> bool {
        value <= self.value.hi()
    }
}
