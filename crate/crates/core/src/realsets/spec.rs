//! JSON descriptions of sets:
//! `{"kind":"intervals","data":[[lo,hi],...]}` and
//! `{"kind":"cantor","alpha":{"rule":"geometric","c":..,"q":..},"max_stage":n}`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::realsets::cantor::{AlphaRule, CantorSet};
use crate::realsets::interval_set::IntervalSet;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", bound = "T: Real")]
pub enum SetSpec<T> {
    Intervals {
        data: Vec<[T; 2]>,
    },
    Cantor {
        alpha: AlphaRule<T>,
        max_stage: usize,
    },
}

/// A set built from its JSON description.
#[derive(Clone, Debug)]
pub enum BuiltSet<T> {
    Intervals(IntervalSet<T>),
    Cantor(CantorSet<T>),
}

impl<T: Real> SetSpec<T> {
    pub fn parse(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn build(&self) -> Result<BuiltSet<T>> {
        match self {
            SetSpec::Intervals { data } => Ok(BuiltSet::Intervals(IntervalSet::new(
                data.iter().map(|[lo, hi]| (*lo, *hi)),
            )?)),
            SetSpec::Cantor { alpha, max_stage } => {
                Ok(BuiltSet::Cantor(CantorSet::new(alpha.clone(), *max_stage)?))
            }
        }
    }
}

impl<T: Real> From<&IntervalSet<T>> for SetSpec<T> {
    fn from(set: &IntervalSet<T>) -> Self {
        SetSpec::Intervals {
            data: set.intervals().iter().map(|iv| [iv.lo, iv.hi]).collect(),
        }
    }
}

impl<T: Real> From<&CantorSet<T>> for SetSpec<T> {
    fn from(set: &CantorSet<T>) -> Self {
        SetSpec::Cantor {
            alpha: set.alpha().clone(),
            max_stage: set.max_stage(),
        }
    }
}
