//! Number types the expression evaluator can run over.
//!
//! `f64` gives plain values; [`Jet`](crate::jet::Jet) gives truncated Taylor
//! expansions, so the same evaluator yields every mixed partial at once.

pub trait Scalar: Clone {
    /// The order-zero value.
    fn value(&self) -> f64;
    /// A constant living in the same algebra as `self`.
    fn lift(&self, c: f64) -> Self;
    /// Whether `self` carries derivative information beyond its value.
    fn has_derivatives(&self) -> bool;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: f64) -> Self;

    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn powf(&self, c: f64) -> Self;
}

impl Scalar for f64 {
    fn value(&self) -> f64 {
        *self
    }
    fn lift(&self, c: f64) -> Self {
        c
    }
    fn has_derivatives(&self) -> bool {
        false
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: f64) -> Self {
        self * c
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn powf(&self, c: f64) -> Self {
        if c.fract() == 0.0 && c.abs() <= i32::MAX as f64 {
            self.powi(c as i32)
        } else {
            f64::powf(*self, c)
        }
    }
}
