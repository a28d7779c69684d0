//! Fixed-size arrays of jets and the few operations the pipeline needs on
//! them.

use crate::jet::Jet;
use crate::objects::{Mat4, Tensor3, Tensor4, Vec4};
use crate::point::Var;
use crate::scalar::Scalar;

pub(crate) type JVec = [Jet; 4];
pub(crate) type JMat = [[Jet; 4]; 4];
pub(crate) type JT3 = [[[Jet; 4]; 4]; 4];
pub(crate) type JT4 = [[[[Jet; 4]; 4]; 4]; 4];

pub(crate) fn vec4(f: impl Fn(usize) -> Jet) -> JVec {
    std::array::from_fn(f)
}

pub(crate) fn mat(f: impl Fn(usize, usize) -> Jet) -> JMat {
    std::array::from_fn(|i| std::array::from_fn(|j| f(i, j)))
}

pub(crate) fn t3(f: impl Fn(usize, usize, usize) -> Jet) -> JT3 {
    std::array::from_fn(|i| std::array::from_fn(|j| std::array::from_fn(|k| f(i, j, k))))
}

pub(crate) fn t4(f: impl Fn(usize, usize, usize, usize) -> Jet) -> JT4 {
    std::array::from_fn(|l| t3(|i, j, k| f(l, i, j, k)))
}

/// Sum of four terms; jets have no truncation-neutral zero, so the first term
/// seeds the fold.
pub(crate) fn sum4(f: impl Fn(usize) -> Jet) -> Jet {
    (1..4).fold(f(0), |acc, r| acc.add(&f(r)))
}

pub(crate) fn sum16(f: impl Fn(usize, usize) -> Jet) -> Jet {
    sum4(|a| sum4(|b| f(a, b)))
}

pub(crate) fn values_vec(v: &JVec) -> Vec4 {
    std::array::from_fn(|i| v[i].value())
}

pub(crate) fn values_mat(m: &JMat) -> Mat4 {
    std::array::from_fn(|i| values_vec(&m[i]))
}

pub(crate) fn values_t3(t: &JT3) -> Tensor3 {
    std::array::from_fn(|i| values_mat(&t[i]))
}

pub(crate) fn values_t4(t: &JT4) -> Tensor4 {
    std::array::from_fn(|i| values_t3(&t[i]))
}

/// Derivatives along the adapted frame of a nonlinear connection.
pub(crate) struct Frame<'a> {
    pub n1: &'a JVec,
    pub n2: &'a JMat,
}

impl Frame<'_> {
    /// `δf/δt = ∂f/∂t − N₁(r) ∂f/∂p_r`
    pub fn dt(&self, f: &Jet) -> Jet {
        f.d(Var::T).sub(&sum4(|r| self.n1[r].mul(&f.d(Var::p(r)))))
    }

    /// `δf/δx^i = ∂f/∂x^i − N₂(r)i ∂f/∂p_r`
    pub fn dx(&self, f: &Jet, i: usize) -> Jet {
        f.d(Var::x(i)).sub(&sum4(|r| self.n2[r][i].mul(&f.d(Var::p(r)))))
    }
}

pub(crate) fn dp(f: &Jet, k: usize) -> Jet {
    f.d(Var::p(k))
}
