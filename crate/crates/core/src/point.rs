use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One of the nine phase-space coordinates `t, x1..x4, p1..p4`.
///
/// The payload of `X` and `P` is the 0-based component index (`0..4`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    T,
    X(u8),
    P(u8),
}

const NAMES: [&str; 9] = ["t", "x1", "x2", "x3", "x4", "p1", "p2", "p3", "p4"];

impl Var {
    pub const COUNT: usize = 9;

    pub const ALL: [Var; 9] = [
        Var::T,
        Var::X(0),
        Var::X(1),
        Var::X(2),
        Var::X(3),
        Var::P(0),
        Var::P(1),
        Var::P(2),
        Var::P(3),
    ];

    pub fn x(i: usize) -> Var {
        assert!(i < 4, "x index out of range: {i}");
        Var::X(i as u8)
    }

    pub fn p(i: usize) -> Var {
        assert!(i < 4, "p index out of range: {i}");
        Var::P(i as u8)
    }

    /// Position in the canonical ordering `t, x1..x4, p1..p4`.
    pub fn index(self) -> usize {
        match self {
            Var::T => 0,
            Var::X(i) => 1 + i as usize,
            Var::P(i) => 5 + i as usize,
        }
    }

    pub fn from_index(i: usize) -> Option<Var> {
        Var::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        NAMES[self.index()]
    }

    pub fn from_name(name: &str) -> Option<Var> {
        NAMES.iter().position(|n| *n == name).map(|i| Var::ALL[i])
    }

    pub fn is_momentum(self) -> bool {
        matches!(self, Var::P(_))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PointError {
    #[error("coordinate {var} is not finite")]
    NonFinite { var: &'static str },
    #[error("momentum {var} = {value} is outside the positive orthant")]
    NotAdmissible { var: &'static str, value: f64 },
}

/// A point `(t, x¹..x⁴, p₁..p₄)` of the momentum phase space.
///
/// Only the positive orthant `pᵢ > 0` is admissible, so `p₁p₂p₃p₄ > 0` always.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    t: f64,
    x: [f64; 4],
    p: [f64; 4],
}

impl PhasePoint {
    pub fn new(t: f64, x: [f64; 4], p: [f64; 4]) -> Result<Self, PointError> {
        let pt = PhasePoint { t, x, p };
        let coords = pt.coords();
        for (v, c) in Var::ALL.iter().zip(coords) {
            if !c.is_finite() {
                return Err(PointError::NonFinite { var: v.name() });
            }
        }
        for (i, &pi) in p.iter().enumerate() {
            if pi <= 0.0 {
                return Err(PointError::NotAdmissible {
                    var: Var::p(i).name(),
                    value: pi,
                });
            }
        }
        Ok(pt)
    }

    /// Unit momenta, `t = 0`, `x = 0`.
    pub fn unit() -> Self {
        PhasePoint {
            t: 0.0,
            x: [0.0; 4],
            p: [1.0; 4],
        }
    }

    pub fn from_coords(c: [f64; 9]) -> Result<Self, PointError> {
        PhasePoint::new(c[0], [c[1], c[2], c[3], c[4]], [c[5], c[6], c[7], c[8]])
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn x(&self) -> [f64; 4] {
        self.x
    }

    pub fn p(&self) -> [f64; 4] {
        self.p
    }

    /// `𝒫¹¹¹¹ = p₁p₂p₃p₄`.
    pub fn momentum_product(&self) -> f64 {
        self.p.iter().product()
    }

    pub fn coords(&self) -> [f64; 9] {
        let mut c = [0.0; 9];
        c[0] = self.t;
        c[1..5].copy_from_slice(&self.x);
        c[5..9].copy_from_slice(&self.p);
        c
    }

    pub fn coord(&self, v: Var) -> f64 {
        self.coords()[v.index()]
    }
}

impl fmt::Display for PhasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "t={}, x=[{}, {}, {}, {}], p=[{}, {}, {}, {}]",
            self.t, self.x[0], self.x[1], self.x[2], self.x[3], self.p[0], self.p[1], self.p[2], self.p[3]
        )
    }
}
