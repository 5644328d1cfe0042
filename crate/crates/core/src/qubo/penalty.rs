use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One family of penalty terms, each scaled by its own multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintFamily {
    OneEdge,
    Adjacency,
    Required,
    Turn,
    Hierarchy,
    Collision,
    Capacity,
    Pairing,
}

impl ConstraintFamily {
    pub const ALL: [ConstraintFamily; 8] = [
        ConstraintFamily::OneEdge,
        ConstraintFamily::Adjacency,
        ConstraintFamily::Required,
        ConstraintFamily::Turn,
        ConstraintFamily::Hierarchy,
        ConstraintFamily::Collision,
        ConstraintFamily::Capacity,
        ConstraintFamily::Pairing,
    ];

    /// Hard families must evaluate to zero on every legal assignment. Turn
    /// bonuses are extra route weight rather than a legality condition.
    pub fn is_hard(self) -> bool {
        self != ConstraintFamily::Turn
    }

    /// Name used by the `--p-<family>` command-line flags.
    pub fn flag_name(self) -> &'static str {
        match self {
            ConstraintFamily::OneEdge => "one-edge",
            ConstraintFamily::Adjacency => "adjacency",
            ConstraintFamily::Required => "required",
            ConstraintFamily::Turn => "turn",
            ConstraintFamily::Hierarchy => "hierarchy",
            ConstraintFamily::Collision => "collision",
            ConstraintFamily::Capacity => "capacity",
            ConstraintFamily::Pairing => "pairing",
        }
    }
}

impl fmt::Display for ConstraintFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.flag_name())
    }
}

/// Positive multiplier per constraint family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltyConfig<S> {
    pub p_one_edge: S,
    pub p_adjacency: S,
    pub p_required: S,
    pub p_turn: S,
    pub p_hierarchy: S,
    pub p_collision: S,
    pub p_capacity: S,
    pub p_pairing: S,
}

impl<S: Scalar> PenaltyConfig<S> {
    /// Every hard family at `p`; turn bonuses at face value.
    pub fn uniform(p: S) -> Self {
        Self {
            p_one_edge: p,
            p_adjacency: p,
            p_required: p,
            p_turn: S::one(),
            p_hierarchy: p,
            p_collision: p,
            p_capacity: p,
            p_pairing: p,
        }
    }

    /// Five times the largest edge weight (at least one), with unit turn scale.
    pub fn default_for_max_weight(max_weight: S) -> Self {
        let five = S::from_usize_lossy(5);
        let base = if max_weight > S::zero() { max_weight } else { S::one() };
        Self::uniform(five * base)
    }

    pub fn get(&self, family: ConstraintFamily) -> S {
        match family {
            ConstraintFamily::OneEdge => self.p_one_edge,
            ConstraintFamily::Adjacency => self.p_adjacency,
            ConstraintFamily::Required => self.p_required,
            ConstraintFamily::Turn => self.p_turn,
            ConstraintFamily::Hierarchy => self.p_hierarchy,
            ConstraintFamily::Collision => self.p_collision,
            ConstraintFamily::Capacity => self.p_capacity,
            ConstraintFamily::Pairing => self.p_pairing,
        }
    }

    pub fn set(&mut self, family: ConstraintFamily, value: S) {
        let slot = match family {
            ConstraintFamily::OneEdge => &mut self.p_one_edge,
            ConstraintFamily::Adjacency => &mut self.p_adjacency,
            ConstraintFamily::Required => &mut self.p_required,
            ConstraintFamily::Turn => &mut self.p_turn,
            ConstraintFamily::Hierarchy => &mut self.p_hierarchy,
            ConstraintFamily::Collision => &mut self.p_collision,
            ConstraintFamily::Capacity => &mut self.p_capacity,
            ConstraintFamily::Pairing => &mut self.p_pairing,
        };
        *slot = value;
    }

    pub fn validate(&self) -> Result<()> {
        for f in ConstraintFamily::ALL {
            let p = self.get(f);
            if !(p > S::zero()) || !p.is_finite_value() {
                return Err(Error::InvalidSpec(format!("penalty for {f} must be positive, got {p}")));
            }
        }
        Ok(())
    }
}
