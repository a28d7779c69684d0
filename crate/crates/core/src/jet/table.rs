use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use super::{Jet, Monomial, Truncation};
use crate::expr::{ExprError, Expression};
use crate::point::{PhasePoint, Var};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JetError {
    #[error("multi-index {0} exceeds the supported orders (t ≤ 2, each x ≤ 2, momenta ≤ 4 in total)")]
    OutOfBounds(MultiIndex),
    #[error("field is not real at the point: {0}")]
    Domain(#[from] ExprError),
    #[error("non-finite derivative {0}")]
    NonFinite(MultiIndex),
}

/// Differentiation orders per variable. Mixed partials commute, so a
/// multi-index is already canonical under reordering of the variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Monomial);

impl MultiIndex {
    pub const MAX_T: u8 = 2;
    pub const MAX_X: u8 = 2;
    pub const MAX_MOMENTUM: u8 = 4;

    pub fn new(orders: Monomial) -> Result<MultiIndex, JetError> {
        let m = MultiIndex(orders);
        let mom: u8 = orders[5..].iter().sum();
        if orders[0] > Self::MAX_T || orders[1..5].iter().any(|&k| k > Self::MAX_X) || mom > Self::MAX_MOMENTUM {
            return Err(JetError::OutOfBounds(m));
        }
        Ok(m)
    }

    /// The index of `∂/∂v₁ ∂/∂v₂ ...`, in any order.
    pub fn of(vars: &[Var]) -> Result<MultiIndex, JetError> {
        let mut m = [0u8; 9];
        for v in vars {
            m[v.index()] = m[v.index()].saturating_add(1);
        }
        MultiIndex::new(m)
    }

    pub fn zero() -> MultiIndex {
        MultiIndex([0; 9])
    }

    pub fn orders(&self) -> &Monomial {
        &self.0
    }

    pub fn order(&self, v: Var) -> u8 {
        self.0[v.index()]
    }

    pub fn total_order(&self) -> u8 {
        self.0.iter().sum()
    }

    pub fn momentum_order(&self) -> u8 {
        self.0[5..].iter().sum()
    }

    /// Every multi-index within the bounds whose total order is at most `max_total`.
    pub fn all_up_to(max_total: u8) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let t = Truncation::total(max_total);
        let layout = super::Layout::get(t);
        for i in 0..layout.len() {
            if let Ok(m) = MultiIndex::new(*layout.monomial(i)) {
                out.push(m);
            }
        }
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.total_order() == 0 {
            return f.write_str("f");
        }
        f.write_str("∂")?;
        for v in Var::ALL {
            match self.order(v) {
                0 => {}
                1 => write!(f, "[{v}]")?,
                k => write!(f, "[{v}^{k}]")?,
            }
        }
        Ok(())
    }
}

/// Mixed partial derivatives of one field at one point.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct JetTable {
    entries: BTreeMap<MultiIndex, f64>,
}

impl JetTable {
    pub fn get(&self, idx: &MultiIndex) -> Option<f64> {
        self.entries.get(idx).copied()
    }

    pub fn value(&self) -> f64 {
        self.entries[&MultiIndex::zero()]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &f64)> {
        self.entries.iter()
    }
}

fn truncation_for(wanted: &[MultiIndex]) -> Truncation {
    let mut per_var = [0u8; 9];
    let mut total = 0;
    let mut momentum = 0;
    for m in wanted {
        for (cap, &k) in per_var.iter_mut().zip(m.orders()) {
            *cap = (*cap).max(k);
        }
        total = total.max(m.total_order());
        momentum = momentum.max(m.momentum_order());
    }
    Truncation::new(total, per_var, momentum)
}

fn table_from(jet: &Jet, wanted: &[MultiIndex]) -> Result<JetTable, JetError> {
    let mut entries = BTreeMap::new();
    entries.insert(MultiIndex::zero(), jet.value());
    for m in wanted {
        let v = jet.partial(m.orders()).expect("truncation covers every wanted index");
        if !v.is_finite() {
            return Err(JetError::NonFinite(*m));
        }
        entries.insert(*m, v);
    }
    Ok(JetTable { entries })
}

/// Evaluates the requested mixed partials of `field` at `pt` by truncated
/// Taylor arithmetic.
pub fn jet_evaluate(field: &Expression, pt: &PhasePoint, wanted: &[MultiIndex]) -> Result<JetTable, JetError> {
    let trunc = truncation_for(wanted);
    let jet = field.eval_scalar(&Jet::seed(trunc, &pt.coords()))?;
    table_from(&jet, wanted)
}

type CacheKey = (String, [u64; 9], Truncation);

/// [`jet_evaluate`] with jets memoised per (field, point, truncation).
#[derive(Default)]
pub struct JetEngine {
    cache: Mutex<HashMap<CacheKey, Arc<Jet>>>,
}

impl JetEngine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn jet(&self, field: &Expression, pt: &PhasePoint, trunc: Truncation) -> Result<Arc<Jet>, JetError> {
        let key = (field.to_string(), pt.coords().map(f64::to_bits), trunc);
        if let Some(j) = self.cache.lock().expect("jet cache poisoned").get(&key) {
            return Ok(j.clone());
        }
        let jet = Arc::new(field.eval_scalar(&Jet::seed(trunc, &pt.coords()))?);
        self.cache.lock().expect("jet cache poisoned").insert(key, jet.clone());
        Ok(jet)
    }

    pub fn evaluate(&self, field: &Expression, pt: &PhasePoint, wanted: &[MultiIndex]) -> Result<JetTable, JetError> {
        let jet = self.jet(field, pt, truncation_for(wanted))?;
        table_from(&jet, wanted)
    }

    pub fn cached(&self) -> usize {
        self.cache.lock().expect("jet cache poisoned").len()
    }
}
