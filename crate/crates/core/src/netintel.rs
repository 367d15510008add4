//! Intelligibility of fully connected, trained feed-forward networks,
//! estimated from architecture metadata alone.
//!
//! Each hidden layer contributes one weight and one bias tensor, plus one of
//! each for the output layer, so `N_E = 2 (N_h + 1)` and
//! `I = 1 - 2 (N_h + 1) / N_O`.

use num_rational::Ratio;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intelligibility::Counts;

pub const DEFAULT_ASYMPTOTIC_RATIO: u64 = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetError {
    #[error("invalid network spec: {0}")]
    InvalidSpec(String),
}

/// Network file: `{"name", "hidden_layers", "io_variable_count", "notes"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSpec {
    pub name: String,
    pub hidden_layers: u64,
    pub io_variable_count: u64,
    #[serde(default)]
    pub notes: String,
}

impl NetworkSpec {
    pub fn new(name: impl Into<String>, hidden_layers: u64, io_variable_count: u64) -> Self {
        NetworkSpec {
            name: name.into(),
            hidden_layers,
            io_variable_count,
            notes: String::new(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, NetError> {
        let spec: NetworkSpec =
            serde_json::from_str(text).map_err(|e| NetError::InvalidSpec(e.to_string()))?;
        spec.check()?;
        Ok(spec)
    }

    pub fn check(&self) -> Result<(), NetError> {
        if self.hidden_layers < 1 {
            return Err(NetError::InvalidSpec(format!(
                "`{}` needs at least one hidden layer",
                self.name
            )));
        }
        if self.io_variable_count < 1 {
            return Err(NetError::InvalidSpec(format!(
                "`{}` needs at least one input/output variable",
                self.name
            )));
        }
        Ok(())
    }

    pub fn counts(&self) -> Result<Counts, NetError> {
        Ok(Counts::new(
            nn_empirical_constants(self)?,
            self.io_variable_count,
        ))
    }
}

/// `2 (N_h + 1)`; at least 4 for any valid spec.
pub fn nn_empirical_constants(spec: &NetworkSpec) -> Result<u64, NetError> {
    spec.check()?;
    spec.hidden_layers
        .checked_add(1)
        .and_then(|n| n.checked_mul(2))
        .ok_or_else(|| NetError::InvalidSpec("hidden layer count overflows".into()))
}

pub fn nn_score(spec: &NetworkSpec) -> Result<Ratio<i64>, NetError> {
    let n_e = nn_empirical_constants(spec)?;
    let n_e = i64::try_from(n_e).map_err(|_| NetError::InvalidSpec("too many layers".into()))?;
    let n_o = i64::try_from(spec.io_variable_count)
        .map_err(|_| NetError::InvalidSpec("too many variables".into()))?;
    Ok(Ratio::one() - Ratio::new(n_e, n_o))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AsymptoticScore {
    /// `-N_h`.
    pub value: i64,
    /// Whether `N_h >= ratio * N_O`.
    pub applicable: bool,
    pub exact: Ratio<i64>,
}

/// Large-depth approximation `I ≈ -N_h`, flagged applicable once
/// `N_h >= ratio * N_O`.
pub fn nn_asymptotic_score(spec: &NetworkSpec, ratio: u64) -> Result<AsymptoticScore, NetError> {
    let exact = nn_score(spec)?;
    let threshold = spec.io_variable_count.saturating_mul(ratio);
    Ok(AsymptoticScore {
        value: -(spec.hidden_layers as i64),
        applicable: spec.hidden_layers >= threshold,
        exact,
    })
}
