use djet_core::bm4::{Bm4Input, Bm4Model};
use djet_core::geometry::GeometryInput;
use djet_core::{Expression, PhasePoint};
use serde::Serialize;

use crate::CliError;

/// The user's model: σ and h11 as text, optionally a Hamiltonian that
/// replaces the generic pipeline's `H*`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelSpec {
    pub sigma: String,
    pub h11: String,
    pub hamiltonian: Option<String>,
    pub einstein_constant: f64,
}

impl ModelSpec {
    pub fn new(sigma: &str, h11: &str) -> Self {
        ModelSpec { sigma: sigma.to_string(), h11: h11.to_string(), hamiltonian: None, einstein_constant: 1.0 }
    }

    pub fn with_hamiltonian(mut self, h: &str) -> Self {
        self.hamiltonian = Some(h.to_string());
        self
    }

    pub(crate) fn build(&self) -> Result<Built, CliError> {
        let parse = |what, text: &str| Expression::parse(text).map_err(|source| CliError::Parse { what, source });
        let sigma = parse("sigma", &self.sigma)?;
        let h11 = parse("h11", &self.h11)?;
        let bm4 = Bm4Input::new(sigma.clone(), h11.clone()).with_einstein_constant(self.einstein_constant);
        let model = Bm4Model::new(bm4.clone())?;
        let generic = match &self.hamiltonian {
            Some(h) => GeometryInput::new(parse("hamiltonian", h)?, h11.clone())?
                .with_sigma(sigma.clone())?
                .with_einstein_constant(self.einstein_constant),
            None => bm4.to_geometry_input()?,
        };
        Ok(Built { sigma, h11, model, generic })
    }
}

pub(crate) struct Built {
    pub sigma: Expression,
    pub h11: Expression,
    pub model: Bm4Model,
    pub generic: GeometryInput,
}

impl Built {
    /// `h11(t) > 0` and every input finite at `pt`.
    pub fn admissible(&self, pt: &PhasePoint) -> bool {
        let h11 = self.h11.evaluate_at(pt);
        let sigma = self.sigma.evaluate_at(pt);
        let h = self.generic.hamiltonian.evaluate_at(pt);
        matches!((h11, sigma, h), (Ok(a), Ok(b), Ok(c)) if a > 0.0 && a.is_finite() && b.is_finite() && c.is_finite())
    }
}
