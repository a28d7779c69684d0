//! Truncated multivariate Taylor arithmetic over the nine phase-space
//! variables, plus the derivative tables and finite-difference oracle built
//! on it.
//!
//! A [`Jet`] stores normalised Taylor coefficients `c_α = ∂^α f / α!` for every
//! multi-index `α` in a downward-closed [`Truncation`] set. Products are
//! truncated to the set, so any composition of jets yields the exact mixed
//! partials of the composite up to the truncation.

mod dd;
mod fd;
mod layout;
mod table;

use std::sync::Arc;

use crate::point::Var;
use crate::scalar::Scalar;

pub use fd::{finite_difference, FdError};
pub use layout::{Monomial, Truncation};
pub use table::{jet_evaluate, JetEngine, JetError, JetTable, MultiIndex};

use layout::Layout;

#[derive(Clone, Debug)]
pub struct Jet {
    layout: Arc<Layout>,
    coeffs: Vec<f64>,
}

impl Jet {
    pub fn constant(trunc: Truncation, c: f64) -> Jet {
        let layout = Layout::get(trunc);
        let mut coeffs = vec![0.0; layout.len()];
        coeffs[0] = c;
        Jet { layout, coeffs }
    }

    /// The coordinate function `v` expanded around `value`.
    pub fn variable(trunc: Truncation, v: Var, value: f64) -> Jet {
        let mut j = Jet::constant(trunc, value);
        let mut e = [0u8; 9];
        e[v.index()] = 1;
        if let Some(i) = j.layout.index_of(&e) {
            j.coeffs[i] = 1.0;
        }
        j
    }

    /// All nine coordinates of `coords` seeded as independent variables.
    pub fn seed(trunc: Truncation, coords: &[f64; 9]) -> [Jet; 9] {
        std::array::from_fn(|i| Jet::variable(trunc, Var::ALL[i], coords[i]))
    }

    pub fn truncation(&self) -> Truncation {
        self.layout.trunc
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Taylor coefficient `∂^α f / α!`, if `α` lies in the truncation.
    pub fn coefficient(&self, alpha: &Monomial) -> Option<f64> {
        self.layout.index_of(alpha).map(|i| self.coeffs[i])
    }

    /// The mixed partial `∂^α f` at the expansion point.
    pub fn partial(&self, alpha: &Monomial) -> Option<f64> {
        let fact: f64 = alpha.iter().map(|&k| factorial(k)).product();
        self.coefficient(alpha).map(|c| c * fact)
    }

    /// `∂f/∂v` as a jet one order lower.
    ///
    /// # Panics
    ///
    /// If the truncation carries no derivative in `v`.
    pub fn d(&self, v: Var) -> Jet {
        let (layout, map) = self.layout.derivative(v);
        let vi = v.index();
        let coeffs = map
            .iter()
            .enumerate()
            .map(|(beta, &src)| (layout.monomial(beta)[vi] as f64 + 1.0) * self.coeffs[src as usize])
            .collect();
        Jet { layout, coeffs }
    }

    pub fn restrict(&self, trunc: Truncation) -> Jet {
        if trunc == self.layout.trunc {
            return self.clone();
        }
        let target = Layout::get(trunc);
        let coeffs = self.layout.restriction(&target).iter().map(|&i| self.coeffs[i as usize]).collect();
        Jet { layout: target, coeffs }
    }

    fn aligned(&self, other: &Jet) -> (Jet, Jet) {
        let t = self.layout.trunc.intersect(&other.layout.trunc);
        (self.restrict(t), other.restrict(t))
    }

    fn zip(&self, other: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        if Arc::ptr_eq(&self.layout, &other.layout) {
            let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(*a, *b)).collect();
            return Jet { layout: self.layout.clone(), coeffs };
        }
        let (a, b) = self.aligned(other);
        a.zip(&b, f)
    }

    fn product(&self, other: &Jet) -> Jet {
        if !Arc::ptr_eq(&self.layout, &other.layout) {
            let (a, b) = self.aligned(other);
            return a.product(&b);
        }
        let mut out = vec![0.0; self.coeffs.len()];
        for &(c, a, b) in self.layout.products() {
            out[c as usize] += self.coeffs[a as usize] * other.coeffs[b as usize];
        }
        Jet { layout: self.layout.clone(), coeffs: out }
    }

    /// `Σₙ dₙ (f − f₀)ⁿ`, for a univariate function with Taylor coefficients
    /// `dₙ` at `f₀`.
    fn compose(&self, d: &[f64]) -> Jet {
        let mut tail = self.clone();
        tail.coeffs[0] = 0.0;
        let n = self.layout.max_degree().min(d.len() - 1);
        let mut acc = Jet { layout: self.layout.clone(), coeffs: vec![0.0; self.coeffs.len()] };
        acc.coeffs[0] = d[n];
        for k in (0..n).rev() {
            acc = acc.product(&tail);
            acc.coeffs[0] += d[k];
        }
        acc
    }

    fn series_len(&self) -> usize {
        self.layout.max_degree() + 1
    }

    pub fn recip(&self) -> Jet {
        self.powf(-1.0)
    }
}

fn factorial(k: u8) -> f64 {
    (1..=k as u32).map(f64::from).product()
}

impl Scalar for Jet {
    fn value(&self) -> f64 {
        self.coeffs[0]
    }

    fn lift(&self, c: f64) -> Self {
        Jet::constant(self.layout.trunc, c)
    }

    fn has_derivatives(&self) -> bool {
        self.coeffs.len() > 1
    }

    fn add(&self, rhs: &Self) -> Self {
        self.zip(rhs, |a, b| a + b)
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.zip(rhs, |a, b| a - b)
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.product(rhs)
    }

    fn div(&self, rhs: &Self) -> Self {
        self.product(&rhs.recip())
    }

    fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    fn scale(&self, c: f64) -> Self {
        Jet { layout: self.layout.clone(), coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    fn exp(&self) -> Self {
        let e = self.value().exp();
        let mut d = Vec::with_capacity(self.series_len());
        let mut f = 1.0;
        for n in 0..self.series_len() {
            if n > 0 {
                f *= n as f64;
            }
            d.push(e / f);
        }
        self.compose(&d)
    }

    fn ln(&self) -> Self {
        let x = self.value();
        let d: Vec<f64> = (0..self.series_len())
            .map(|n| match n {
                0 => x.ln(),
                n => {
                    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
                    sign / (n as f64 * x.powi(n as i32))
                }
            })
            .collect();
        self.compose(&d)
    }

    fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    fn sin(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose(&trig_series([s, c, -s, -c], self.series_len()))
    }

    fn cos(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose(&trig_series([c, -s, -c, s], self.series_len()))
    }

    fn powf(&self, c: f64) -> Self {
        let x = self.value();
        let integer = c.fract() == 0.0;
        let mut d = Vec::with_capacity(self.series_len());
        let mut binom = 1.0;
        for n in 0..self.series_len() {
            if n > 0 {
                binom *= (c - (n as f64 - 1.0)) / n as f64;
            }
            let e = c - n as f64;
            let term = if binom == 0.0 {
                0.0
            } else if integer {
                binom * x.powi(e as i32)
            } else {
                binom * x.powf(e)
            };
            d.push(term);
        }
        self.compose(&d)
    }
}

fn trig_series(cycle: [f64; 4], len: usize) -> Vec<f64> {
    let mut f = 1.0;
    (0..len)
        .map(|n| {
            if n > 0 {
                f *= n as f64;
            }
            cycle[n % 4] / f
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expression;
    use crate::point::PhasePoint;

    fn mono(pairs: &[(Var, u8)]) -> Monomial {
        let mut m = [0u8; 9];
        for (v, k) in pairs {
            m[v.index()] += k;
        }
        m
    }

    #[test]
    fn product_rule_on_two_variables() {
        let t = Truncation::total(3);
        let x = Jet::variable(t, Var::x(0), 2.0);
        let y = Jet::variable(t, Var::x(1), 3.0);
        let f = x.mul(&x).mul(&y);
        assert_eq!(f.value(), 12.0);
        assert_eq!(f.partial(&mono(&[(Var::x(0), 1)])), Some(12.0));
        assert_eq!(f.partial(&mono(&[(Var::x(0), 2)])), Some(6.0));
        assert_eq!(f.partial(&mono(&[(Var::x(0), 2), (Var::x(1), 1)])), Some(2.0));
        assert_eq!(f.partial(&mono(&[(Var::x(0), 3)])), Some(0.0));
    }

    #[test]
    fn elementary_functions_match_closed_forms() {
        let t = Truncation::total(4);
        let x = Jet::variable(t, Var::T, 0.3);
        let d4 = mono(&[(Var::T, 4)]);
        let d3 = mono(&[(Var::T, 3)]);
        let close = |a: f64, b: f64| (a - b).abs() < 1e-11 * b.abs().max(1.0);
        assert!(close(x.exp().partial(&d4).unwrap(), 0.3f64.exp()));
        assert!(close(x.sin().partial(&d3).unwrap(), -(0.3f64.cos())));
        assert!(close(x.cos().partial(&d3).unwrap(), 0.3f64.sin()));
        // d⁴/dx⁴ log x = -6/x⁴
        assert!(close(x.ln().partial(&d4).unwrap(), -6.0 / 0.3f64.powi(4)));
        // d³/dx³ x^{1/2} = (3/8) x^{-5/2}
        assert!(close(x.sqrt().partial(&d3).unwrap(), 0.375 * 0.3f64.powf(-2.5)));
        // d²/dx² 1/x = 2/x³
        let d2 = mono(&[(Var::T, 2)]);
        assert!(close(x.recip().partial(&d2).unwrap(), 2.0 / 0.027));
        // integer powers of negative bases
        let y = Jet::variable(t, Var::T, -2.0);
        assert!(close(y.powf(3.0).partial(&d2).unwrap(), -12.0));
        assert_eq!(y.powf(2.0).partial(&d3), Some(0.0));
    }

    #[test]
    fn derivative_lowers_the_order() {
        let t = Truncation::total(3);
        let e = Expression::parse("x1^2*p1 + exp(t)*p2^2").unwrap();
        let pt = PhasePoint::new(0.1, [0.5, 0.0, 0.0, 0.0], [1.5, 2.0, 1.0, 1.0]).unwrap();
        let j = e.eval_scalar(&Jet::seed(t, &pt.coords())).unwrap();
        let dp1 = j.d(Var::p(0));
        assert_eq!(dp1.truncation(), Truncation::total(2));
        // ∂/∂p1 = x1², ∂²/∂x1∂p1 = 2 x1
        assert_eq!(dp1.value(), 0.25);
        assert_eq!(dp1.partial(&mono(&[(Var::x(0), 1)])), Some(1.0));
        let dtt = j.d(Var::T).d(Var::p(1));
        assert!((dtt.value() - 4.0 * 0.1f64.exp()).abs() < 1e-14);
    }

    #[test]
    fn mixed_truncations_meet_in_the_intersection() {
        let a = Jet::variable(Truncation::total(3), Var::x(0), 1.0);
        let b = Jet::variable(Truncation::total(1), Var::x(0), 2.0);
        let c = a.mul(&b);
        assert_eq!(c.truncation(), Truncation::total(1));
        assert_eq!(c.partial(&mono(&[(Var::x(0), 1)])), Some(3.0));
    }
}
