//! Central finite differences with one Richardson step.
//!
//! Each differentiated variable gets the second-order central stencil for its
//! order; the tensor product of those stencils has an error expansion in even
//! powers of the step, so combining steps `h` and `h/2` as
//! `(4·D(h/2) − D(h))/3` leaves an `O(h⁴)` truncation error. Round-off grows
//! like `ε·|f| / hⁿ` for total order `n`, which in binary64 would swamp the
//! fourth derivatives of large fields; hence the double-double evaluation.

use thiserror::Error;

use super::dd::Dd;
use super::table::MultiIndex;
use crate::expr::{ExprError, Expression};
use crate::point::{PhasePoint, Var};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FdError {
    #[error("step underflow in {0}")]
    StepUnderflow(Var),
    #[error("non-finite intermediate value")]
    NonFinite,
    #[error("{var} = {value} is within {margin} of the p = 0 boundary")]
    TooCloseToBoundary { var: Var, value: f64, margin: f64 },
    #[error("total order {0} exceeds 4")]
    OrderTooHigh(u8),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Smallest momentum the oracle is allowed to touch.
pub const MOMENTUM_FLOOR: f64 = 0.05;

// Second-order central stencils, offsets -2..=2.
const STENCILS: [[f64; 5]; 5] = [
    [0.0, 0.0, 1.0, 0.0, 0.0],
    [0.0, -0.5, 0.0, 0.5, 0.0],
    [0.0, 1.0, -2.0, 1.0, 0.0],
    [-0.5, 1.0, 0.0, -1.0, 0.5],
    [1.0, -4.0, 6.0, -4.0, 1.0],
];

/// Base step `ε^{1/(n+2)}·max(1,|c|)` for total order `n` at coordinate `c`.
pub fn base_step(order: u8, c: f64) -> f64 {
    f64::EPSILON.powf(1.0 / (f64::from(order) + 2.0)) * c.abs().max(1.0)
}

/// Estimates `∂^idx field` at `pt`.
///
/// The field is evaluated in double-double precision so the stencil's
/// round-off stays negligible next to its `O(h⁴)` truncation error, even for
/// fourth derivatives of fields much larger than one.
pub fn finite_difference(field: &Expression, pt: &PhasePoint, idx: &MultiIndex) -> Result<f64, FdError> {
    let order = idx.total_order();
    if order > 4 {
        return Err(FdError::OrderTooHigh(order));
    }
    let coords = pt.coords();
    let mut active = Vec::new();
    for v in Var::ALL {
        let k = idx.order(v);
        if k == 0 {
            continue;
        }
        let c = coords[v.index()];
        let h = base_step(order, c);
        if h == 0.0 || c + 0.5 * h == c {
            return Err(FdError::StepUnderflow(v));
        }
        if v.is_momentum() && c - 10.0 * h < MOMENTUM_FLOOR {
            return Err(FdError::TooCloseToBoundary { var: v, value: c, margin: 10.0 * h });
        }
        active.push(Axis { var: v.index(), order: k as usize, step: h });
    }
    let base: [Dd; 9] = coords.map(Dd::from_f64);
    let coarse = stencil(field, &base, &active, 1.0)?;
    let fine = stencil(field, &base, &active, 0.5)?;
    let out = fine.scale(4.0).sub(&coarse).scale(1.0 / 3.0).to_f64();
    if !out.is_finite() {
        return Err(FdError::NonFinite);
    }
    Ok(out)
}

struct Axis {
    var: usize,
    order: usize,
    step: f64,
}

/// Tensor-product stencil, one axis at a time, so that a field independent of
/// an axis gives exactly zero along it.
fn stencil(field: &Expression, at: &[Dd; 9], axes: &[Axis], scale: f64) -> Result<Dd, FdError> {
    let Some((axis, rest)) = axes.split_first() else {
        let f = field.eval_scalar(at)?;
        if !f.to_f64().is_finite() {
            return Err(FdError::NonFinite);
        }
        return Ok(f);
    };
    let h = axis.step * scale;
    let centre = at[axis.var].to_f64();
    let mut values = [Dd::ZERO; 5];
    for (slot, w) in STENCILS[axis.order].iter().enumerate() {
        if *w == 0.0 {
            continue;
        }
        let mut x = *at;
        // offsets are power-of-two multiples of h, so the shifted coordinate is exact
        x[axis.var] = Dd::exact_sum(centre, (slot as f64 - 2.0) * h);
        values[slot] = stencil(field, &x, rest, scale)?;
    }
    // symmetric pairs first: a constant along this axis cancels exactly
    let w = &STENCILS[axis.order];
    let outer = values[0].scale(w[0]).add(&values[4].scale(w[4]));
    let inner = values[1].scale(w[1]).add(&values[3].scale(w[3]));
    let sum = outer.add(&inner).add(&values[2].scale(w[2]));
    Ok(sum.scale(1.0 / h.powi(axis.order as i32)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(text: &str, pt: &PhasePoint, vars: &[Var]) -> f64 {
        let f = Expression::parse(text).unwrap();
        finite_difference(&f, pt, &MultiIndex::of(vars).unwrap()).unwrap()
    }

    #[test]
    fn square_has_second_derivative_two() {
        let pt = PhasePoint::new(0.0, [0.7, 0.0, 0.0, 0.0], [1.0; 4]).unwrap();
        assert!((fd("x1^2", &pt, &[Var::x(0), Var::x(0)]) - 2.0).abs() < 1e-7);
    }

    #[test]
    fn exponential_in_time() {
        assert!((fd("exp(t)", &PhasePoint::unit(), &[Var::T]) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn root_product_curvature() {
        let v = fd("(p1*p2*p3*p4)^(1/2)", &PhasePoint::unit(), &[Var::p(0), Var::p(0)]);
        assert!((v + 0.25).abs() < 1e-6);
    }

    #[test]
    fn order_zero_is_the_value() {
        let pt = PhasePoint::new(0.0, [0.0; 4], [2.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(fd("p1^3", &pt, &[]), 8.0);
    }

    #[test]
    fn refuses_points_near_the_boundary() {
        let f = Expression::parse("p1^5").unwrap();
        let pt = PhasePoint::new(0.0, [0.0; 4], [0.06, 1.0, 1.0, 1.0]).unwrap();
        let idx = MultiIndex::of(&[Var::p(0); 4]).unwrap();
        assert!(matches!(
            finite_difference(&f, &pt, &idx),
            Err(FdError::TooCloseToBoundary { .. })
        ));
    }
}
