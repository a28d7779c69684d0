//! The generic pipeline: every object is assembled from its defining formula,
//! with all derivatives taken from truncated Taylor jets of the Hamiltonian.
//!
//! The Hamiltonian is expanded once to total order five at the point. Each
//! stage consumes jets and produces jets one order lower where it
//! differentiates, ending at order zero for the conservation laws:
//!
//! | stage                                  | jet order |
//! |----------------------------------------|-----------|
//! | `H*`                                   | 5         |
//! | metric `g*^{ij}`, `g*_{ij}`            | 3         |
//! | `N₂`, `H`, `C`, `A`                    | 2         |
//! | torsion, curvatures, Ricci, Einstein   | 1         |
//! | conservation laws                      | 0         |

mod tensor;

use nalgebra::Matrix4;
use thiserror::Error;

use crate::expr::{ExprError, Expression, Func};
use crate::jet::{Jet, JetError, Truncation};
use crate::objects::{
    CartanAtPoint, ConservationLaws, CurvatureAtPoint, FieldBlocksAtPoint, GeometryBundle, Mat4, MetricAtPoint,
    NonlinearConnectionAtPoint, RicciAtPoint, Tensor4, TorsionAtPoint,
};
use crate::point::{PhasePoint, Var};
use crate::scalar::Scalar;

use tensor::*;

/// Largest accepted condition number of the momentum Hessian.
pub const MAX_CONDITION: f64 = 1e12;
/// Largest accepted relative skew part of a metric block before averaging.
pub const MAX_SKEW: f64 = 1e-10;

const HAMILTONIAN_ORDER: u8 = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("h11 = {value} at t = {t} is not positive")]
    NonpositiveH11 { t: f64, value: f64 },
    #[error("momentum Hessian is singular (condition number {condition:e})")]
    SingularHessian { condition: f64 },
    #[error("metric block has skew part {skew:e}")]
    SkewMetric { skew: f64 },
    #[error("{what} may only depend on {allowed}, found {found}")]
    ForeignVariable { what: &'static str, allowed: &'static str, found: Var },
    #[error("Einstein constant must be finite and non-zero")]
    EinsteinConstant,
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

impl From<JetError> for GeometryError {
    fn from(e: JetError) -> Self {
        match e {
            JetError::Domain(e) => GeometryError::Expr(e),
            JetError::NonFinite(_) => GeometryError::NonFinite("jet"),
            JetError::OutOfBounds(_) => GeometryError::NonFinite("jet bounds"),
        }
    }
}

/// A Hamiltonian with its time metric.
#[derive(Clone, Debug, PartialEq)]
pub struct GeometryInput {
    pub hamiltonian: Expression,
    pub h11: Expression,
    /// Conformal factor, when the Hamiltonian is the deformed Berwald–Moór one.
    /// Only the conservation-law right-hand sides use it.
    pub sigma: Option<Expression>,
    pub einstein_constant: f64,
}

impl GeometryInput {
    pub fn new(hamiltonian: Expression, h11: Expression) -> Result<Self, GeometryError> {
        only_depends_on(&h11, "h11", "t", |v| v == Var::T)?;
        Ok(GeometryInput { hamiltonian, h11, sigma: None, einstein_constant: 1.0 })
    }

    /// `H* = 4 e^{−2σ} h11 (p1 p2 p3 p4)^{1/2}`.
    pub fn berwald_moor(sigma: Expression, h11: Expression) -> Result<Self, GeometryError> {
        only_depends_on(&sigma, "sigma", "x1..x4", |v| matches!(v, Var::X(_)))?;
        let momenta = (1..4).fold(Expression::var(Var::p(0)), |acc, i| Expression::mul(acc, Expression::var(Var::p(i))));
        let conformal = Expression::func(Func::Exp, Expression::mul(Expression::num(-2.0), sigma.clone()));
        let hamiltonian = Expression::mul(
            Expression::mul(Expression::mul(Expression::num(4.0), conformal), h11.clone()),
            Expression::pow(momenta, Expression::num(0.5)),
        );
        let mut input = GeometryInput::new(hamiltonian, h11)?;
        input.sigma = Some(sigma);
        Ok(input)
    }

    pub fn with_einstein_constant(mut self, k: f64) -> Self {
        self.einstein_constant = k;
        self
    }

    pub fn with_sigma(mut self, sigma: Expression) -> Result<Self, GeometryError> {
        only_depends_on(&sigma, "sigma", "x1..x4", |v| matches!(v, Var::X(_)))?;
        self.sigma = Some(sigma);
        Ok(self)
    }
}

fn only_depends_on(
    e: &Expression,
    what: &'static str,
    allowed: &'static str,
    ok: impl Fn(Var) -> bool,
) -> Result<(), GeometryError> {
    match e.variables().into_iter().find(|v| !ok(*v)) {
        Some(found) => Err(GeometryError::ForeignVariable { what, allowed, found }),
        None => Ok(()),
    }
}

/// `𝗄¹₁₁ = h¹¹/2 · dh11/dt`.
pub fn christoffel_h(input: &GeometryInput, t: f64) -> Result<f64, GeometryError> {
    let mut coords = [1.0; 9];
    coords[Var::T.index()] = t;
    let h = input.h11.eval_scalar(&Jet::seed(Truncation::total(1), &coords))?;
    if !(h.value() > 0.0) {
        return Err(GeometryError::NonpositiveH11 { t, value: h.value() });
    }
    Ok(0.5 * h.d(Var::T).value() / h.value())
}

/// A frame direction for [`adapted_derivative`]; indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `δ/δt`
    Time,
    /// `δ/δx^i`
    Space(usize),
    /// `∂/∂p_i`
    Momentum(usize),
}

/// Derivative of `field` at `pt` along a frame vector of the nonlinear
/// connection `n`.
pub fn adapted_derivative(
    field: &Expression,
    pt: &PhasePoint,
    n: &NonlinearConnectionAtPoint,
    direction: Direction,
) -> Result<f64, GeometryError> {
    let f = field.eval_scalar(&Jet::seed(Truncation::total(1), &pt.coords()))?;
    let dp = |r: usize| f.d(Var::p(r)).value();
    let out = match direction {
        Direction::Time => f.d(Var::T).value() - (0..4).map(|r| n.n1[r] * dp(r)).sum::<f64>(),
        Direction::Space(i) => f.d(Var::x(i)).value() - (0..4).map(|r| n.n2[r][i] * dp(r)).sum::<f64>(),
        Direction::Momentum(i) => dp(i),
    };
    Ok(out)
}

/// Every object of the generic pipeline at one point, held as jets.
pub struct LocalGeometry {
    pt: PhasePoint,
    h11: Jet,
    h_up: Jet,
    ginv: JMat,
    g: JMat,
    k: Jet,
    n1: JVec,
    n2: JMat,
    a: JMat,
    h: JT3,
    c: JT3,
    r1: JT3,
    covariant_c: JT4,
    deflection: JT3,
    r: JT4,
    p: JT4,
    s: JT4,
    ricci: JMat,
    s_trace: JMat,
    sc: Jet,
    t11: Jet,
    t_x: JMat,
    t_p: JMat,
    e: JMat,
    t_mixed: JMat,
    em: JMat,
    conservation: Option<ConservationLaws>,
}

impl LocalGeometry {
    pub fn new(input: &GeometryInput, pt: &PhasePoint) -> Result<Self, GeometryError> {
        let kappa = input.einstein_constant;
        if !kappa.is_finite() || kappa == 0.0 {
            return Err(GeometryError::EinsteinConstant);
        }
        let seed = Jet::seed(Truncation::total(HAMILTONIAN_ORDER), &pt.coords());
        let h11 = input.h11.eval_scalar(&seed)?;
        if !(h11.value() > 0.0) {
            return Err(GeometryError::NonpositiveH11 { t: pt.t(), value: h11.value() });
        }
        let h_up = h11.recip();
        let hs = input.hamiltonian.eval_scalar(&seed)?;
        let pvar: JVec = vec4(|i| seed[Var::p(i).index()].clone());

        // metric d-tensor and its inverse
        let half_h_up = h_up.scale(0.5);
        let hp: JVec = vec4(|i| dp(&hs, i));
        let ginv = mat(|i, j| half_h_up.mul(&dp(&hp[i], j)));
        let ginv = symmetrised(&ginv)?;
        let g = symmetrised(&inverse(&ginv)?)?;

        // nonlinear connection
        let k = half_h_up.mul(&h11.d(Var::T));
        let n1 = vec4(|i| k.mul(&pvar[i]));
        let hx: JVec = vec4(|i| hs.d(Var::x(i)));
        let quarter_h_up = h_up.scale(0.25);
        let n2 = mat(|i, j| {
            let transport = sum4(|m| {
                g[i][j].d(Var::x(m)).mul(&hp[m]).sub(&dp(&g[i][j], m).mul(&hx[m]))
            });
            let mixed = sum4(|m| g[i][m].mul(&dp(&hx[j], m)).add(&g[j][m].mul(&dp(&hx[i], m))));
            quarter_h_up.mul(&transport.add(&mixed))
        });

        let frame = Frame { n1: &n1, n2: &n2 };

        // Cartan connection
        let dt_g = mat(|i, j| frame.dt(&g[i][j]));
        let a = mat(|i, j| sum4(|l| ginv[i][l].mul(&dt_g[l][j])).scale(0.5));
        let dx_g = t3(|i, j, k| frame.dx(&g[i][j], k));
        let h = t3(|i, j, k| {
            sum4(|r| ginv[i][r].mul(&dx_g[j][r][k].add(&dx_g[k][r][j]).sub(&dx_g[j][k][r]))).scale(0.5)
        });
        let dp_ginv = t3(|j, r, k| dp(&ginv[j][r], k));
        let c = t3(|i, j, k| sum4(|r| g[i][r].mul(&dp_ginv[j][r][k])).scale(-0.5));

        // torsion
        let dx_n2 = t3(|r, i, j| frame.dx(&n2[r][i], j));
        let r1 = t3(|r, i, j| dx_n2[r][i][j].sub(&dx_n2[r][j][i]));

        // curvature
        let dx_h = t4(|l, i, j, k| frame.dx(&h[l][i][j], k));
        let r = t4(|l, i, j, k| {
            let hh = sum4(|m| h[m][i][j].mul(&h[l][m][k]).sub(&h[m][i][k].mul(&h[l][m][j])));
            let cr = sum4(|m| c[i][l][m].mul(&r1[m][j][k]));
            dx_h[l][i][j][k].sub(&dx_h[l][i][k][j]).add(&hh).add(&cr)
        });
        let covariant_c = t4(|l, i, j, k| {
            let conn = sum4(|m| {
                c[i][m][k].mul(&h[l][m][j]).sub(&c[m][l][k].mul(&h[m][i][j])).add(&c[i][l][m].mul(&h[k][m][j]))
            });
            frame.dx(&c[i][l][k], j).add(&conn)
        });
        let deflection = t3(|r, j, k| dp(&n2[r][j], k).add(&h[k][r][j]));
        let p = t4(|l, i, j, k| {
            let cp = sum4(|m| c[i][l][m].mul(&deflection[m][j][k]));
            dp(&h[l][i][j], k).sub(&covariant_c[l][i][j][k]).add(&cp)
        });
        let s = t4(|l, i, j, k| {
            let cc = sum4(|m| c[i][m][j].mul(&c[m][l][k]).sub(&c[i][m][k].mul(&c[m][l][j])));
            dp(&c[i][l][j], k).sub(&dp(&c[i][l][k], j)).add(&cc)
        });

        // Ricci tensors and scalar curvature
        let ricci = mat(|i, j| sum4(|m| r[m][i][j][m].clone()));
        let s_trace = mat(|i, j| sum4(|m| s[i][m][j][m].clone()));
        let sc = sum16(|i, j| ginv[i][j].mul(&ricci[i][j]))
            .sub(&h_up.mul(&sum16(|i, j| g[i][j].mul(&s_trace[i][j]))));

        // Einstein-like blocks
        let half_sc = sc.scale(0.5);
        let inv_kappa = 1.0 / kappa;
        let t11 = half_sc.mul(&h11).scale(-inv_kappa);
        let t_x = mat(|i, j| ricci[i][j].sub(&half_sc.mul(&g[i][j])).scale(inv_kappa));
        let t_p = mat(|i, j| s_trace[i][j].add(&half_sc.mul(&h11).mul(&ginv[i][j])).scale(-inv_kappa));
        let e = mat(|m, i| sum4(|r| ginv[m][r].mul(&t_x[r][i])));
        let t_mixed = mat(|m, i| h_up.mul(&sum4(|r| g[m][r].mul(&t_p[r][i]))));

        let em = mat(|i, j| {
            let nn = sum4(|r| ginv[j][r].mul(&n2[r][i]).sub(&ginv[i][r].mul(&n2[r][j])));
            let hh = sum16(|r, m| ginv[j][r].mul(&h[m][r][i]).sub(&ginv[i][r].mul(&h[m][r][j])).mul(&pvar[m]));
            half_h_up.mul(&nn.add(&hh))
        });

        let conservation = match &input.sigma {
            Some(sigma) => {
                let t_time = h_up.mul(&t11);
                let time_lhs = frame.dt(&t_time).value();
                let divergence: [f64; 4] = std::array::from_fn(|i| (0..4).map(|m| frame.dx(&e[m][i], m).value()).sum());
                let space_lhs = std::array::from_fn(|i| {
                    let mut v = divergence[i];
                    for r in 0..4 {
                        for m in 0..4 {
                            v += e[r][i].value() * h[m][r][m].value() - e[m][r].value() * h[r][i][m].value();
                        }
                    }
                    v
                });
                let momentum_lhs = std::array::from_fn(|i| {
                    let mut v: f64 = (0..4).map(|m| dp(&t_mixed[m][i], m).value()).sum();
                    for r in 0..4 {
                        for m in 0..4 {
                            v += t_mixed[m][r].value() * c[r][i][m].value() - t_mixed[r][i].value() * c[m][r][m].value();
                        }
                    }
                    v
                });
                let rhs = ConformalRhs::new(sigma, pt, kappa)?;
                let e_val = values_mat(&e);
                let space_rhs = std::array::from_fn(|i| {
                    let mut v = divergence[i] - 4.0 * e_val[i][i] * rhs.grad[i];
                    for m in 0..4 {
                        v += 4.0 * e_val[m][i] * rhs.grad[m];
                    }
                    v
                });
                Some(ConservationLaws {
                    time_lhs,
                    time_rhs: 0.0,
                    space_lhs,
                    space_rhs,
                    momentum_lhs,
                    momentum_rhs: rhs.momentum,
                })
            }
            None => None,
        };

        Ok(LocalGeometry {
            pt: *pt,
            h11,
            h_up,
            ginv,
            g,
            k,
            n1,
            n2,
            a,
            h,
            c,
            r1,
            covariant_c,
            deflection,
            r,
            p,
            s,
            ricci,
            s_trace,
            sc,
            t11,
            t_x,
            t_p,
            e,
            t_mixed,
            em,
            conservation,
        })
    }

    pub fn point(&self) -> &PhasePoint {
        &self.pt
    }

    pub fn metric(&self) -> MetricAtPoint {
        MetricAtPoint { upper: values_mat(&self.ginv), lower: values_mat(&self.g) }
    }

    pub fn nonlinear_connection(&self) -> NonlinearConnectionAtPoint {
        NonlinearConnectionAtPoint {
            n1: values_vec(&self.n1),
            n2: values_mat(&self.n2),
            christoffel_h: self.k.value(),
        }
    }

    pub fn cartan(&self) -> CartanAtPoint {
        CartanAtPoint { a: values_mat(&self.a), h: values_t3(&self.h), c: values_t3(&self.c) }
    }

    pub fn torsions(&self) -> TorsionAtPoint {
        TorsionAtPoint { r1: values_t3(&self.r1), p: values_t3(&self.c) }
    }

    /// `C_{i|j}^{l(k)}`, stored as `[l][i][j][k]`.
    pub fn covariant_c(&self) -> Tensor4 {
        values_t4(&self.covariant_c)
    }

    pub fn curvatures(&self) -> CurvatureAtPoint {
        CurvatureAtPoint {
            r: values_t4(&self.r),
            p: values_t4(&self.p),
            s: values_t4(&self.s),
            covariant_c: self.covariant_c(),
            deflection: values_t3(&self.deflection),
        }
    }

    pub fn ricci_and_scalar(&self) -> RicciAtPoint {
        RicciAtPoint {
            r: values_mat(&self.ricci),
            s: values_mat(&self.s_trace),
            scalar: self.sc.value(),
            sigma11: None,
        }
    }

    pub fn field_blocks(&self) -> FieldBlocksAtPoint {
        let h11 = self.h11.value();
        let sc = self.sc.value();
        let metric_x = values_mat(&self.g);
        let metric_p: Mat4 = values_mat(&self.ginv).map(|row| row.map(|v| h11 * v));
        let ricci = values_mat(&self.ricci);
        let s_trace = values_mat(&self.s_trace);
        let einstein_x = std::array::from_fn(|i| std::array::from_fn(|j| ricci[i][j] - 0.5 * sc * metric_x[i][j]));
        let einstein_p = std::array::from_fn(|i| std::array::from_fn(|j| -s_trace[i][j] - 0.5 * sc * metric_p[i][j]));
        FieldBlocksAtPoint {
            metric_h11: h11,
            metric_x,
            metric_p,
            einstein_11: -0.5 * sc * h11,
            einstein_x,
            einstein_p,
            t11: self.t11.value(),
            t_x: values_mat(&self.t_x),
            t_p: values_mat(&self.t_p),
            zero_blocks: [[[0.0; 4]; 4]; 6],
            t_mixed_time: self.h_up.value() * self.t11.value(),
            e: values_mat(&self.e),
            t_mixed: values_mat(&self.t_mixed),
            conservation: self.conservation.clone(),
            em: values_mat(&self.em),
        }
    }

    pub fn bundle(&self) -> GeometryBundle {
        GeometryBundle {
            metric: self.metric(),
            connection: self.nonlinear_connection(),
            cartan: self.cartan(),
            torsion: self.torsions(),
            curvature: self.curvatures(),
            ricci: self.ricci_and_scalar(),
            fields: self.field_blocks(),
        }
    }
}

/// The σ-dependent right-hand sides of the space and momentum laws.
struct ConformalRhs {
    grad: [f64; 4],
    momentum: [f64; 4],
}

impl ConformalRhs {
    fn new(sigma: &Expression, pt: &PhasePoint, kappa: f64) -> Result<Self, GeometryError> {
        let s = sigma.eval_scalar(&Jet::seed(Truncation::total(2), &pt.coords()))?;
        let grad = std::array::from_fn(|i| s.d(Var::x(i)).value());
        let hess: Mat4 = std::array::from_fn(|i| std::array::from_fn(|j| s.d(Var::x(i)).d(Var::x(j)).value()));
        let p = pt.p();
        let mut sigma11 = 0.0;
        for i in 0..4 {
            for j in i + 1..4 {
                sigma11 += hess[i][j] / (p[i] * p[j]);
            }
        }
        let factor = (-2.0 * s.value()).exp() * pt.momentum_product().sqrt() / kappa;
        let momentum = std::array::from_fn(|i| {
            let d: f64 = (0..4).filter(|&j| j != i).map(|j| -hess[i][j] / (p[i] * p[i] * p[j])).sum();
            factor * (sigma11 / p[i] + 2.0 * d)
        });
        Ok(ConformalRhs { grad, momentum })
    }
}

fn symmetrised(m: &JMat) -> Result<JMat, GeometryError> {
    let v = values_mat(m);
    let scale = v.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs())).max(f64::MIN_POSITIVE);
    let mut skew: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if !v[i][j].is_finite() {
                return Err(GeometryError::NonFinite("metric"));
            }
            skew = skew.max((v[i][j] - v[j][i]).abs() / scale);
        }
    }
    if skew > MAX_SKEW {
        return Err(GeometryError::SkewMetric { skew });
    }
    Ok(mat(|i, j| m[i][j].add(&m[j][i]).scale(0.5)))
}

/// Inverse of a matrix of jets.
///
/// With `G = G₀ + Ĝ`, where `G₀` holds the values and `Ĝ` is nilpotent,
/// `G⁻¹ = Σₙ (−G₀⁻¹Ĝ)ⁿ G₀⁻¹`, which terminates at the jet degree. Each
/// derivative of the result is therefore the chain of `−G⁻¹(∂G)G⁻¹` terms.
fn inverse(m: &JMat) -> Result<JMat, GeometryError> {
    let v = values_mat(m);
    let g0 = Matrix4::from_fn(|i, j| v[i][j]);
    let sv = g0.singular_values();
    let condition = sv.max() / sv.min();
    if !(condition <= MAX_CONDITION) {
        return Err(GeometryError::SingularHessian { condition });
    }
    let inv0 = g0.try_inverse().ok_or(GeometryError::SingularHessian { condition })?;
    let trunc = m[0][0].truncation();
    let degree = trunc.total_order();
    let constant = |c: f64| Jet::constant(trunc, c);
    let minus_inv0 = mat(|i, j| constant(-inv0[(i, j)]));
    let nilpotent = mat(|i, j| m[i][j].sub(&constant(v[i][j])));
    let step = mat_mul(&minus_inv0, &nilpotent);
    let mut term = mat(|i, j| constant(inv0[(i, j)]));
    let mut acc = term.clone();
    for _ in 0..degree {
        term = mat_mul(&step, &term);
        acc = mat(|i, j| acc[i][j].add(&term[i][j]));
    }
    Ok(acc)
}

fn mat_mul(a: &JMat, b: &JMat) -> JMat {
    mat(|i, j| sum4(|k| a[i][k].mul(&b[k][j])))
}

/// Full generic evaluation at one point.
pub fn evaluate_bundle(input: &GeometryInput, pt: &PhasePoint) -> Result<GeometryBundle, GeometryError> {
    Ok(LocalGeometry::new(input, pt)?.bundle())
}

pub fn fundamental_metric(input: &GeometryInput, pt: &PhasePoint) -> Result<MetricAtPoint, GeometryError> {
    Ok(LocalGeometry::new(input, pt)?.metric())
}

pub fn nonlinear_connection(input: &GeometryInput, pt: &PhasePoint) -> Result<NonlinearConnectionAtPoint, GeometryError> {
    Ok(LocalGeometry::new(input, pt)?.nonlinear_connection())
}

pub fn cartan_connection(input: &GeometryInput, pt: &PhasePoint) -> Result<CartanAtPoint, GeometryError> {
    Ok(LocalGeometry::new(input, pt)?.cartan())
}

pub fn torsions(input: &GeometryInput, pt: &PhasePoint) -> Result<TorsionAtPoint, GeometryError> {
    Ok(LocalGeometry::new(input, pt)?.torsions())
}

pub fn covariant_c(input: &GeometryInput, pt: &PhasePoint) -> Result<Tensor4, GeometryError> {
    Ok(LocalGeometry::new(input, pt)?.covariant_c())
}

pub fn curvatures(input: &GeometryInput, pt: &PhasePoint) -> Result<CurvatureAtPoint, GeometryError> {
    Ok(LocalGeometry::new(input, pt)?.curvatures())
}

pub fn ricci_and_scalar(input: &GeometryInput, pt: &PhasePoint) -> Result<RicciAtPoint, GeometryError> {
    Ok(LocalGeometry::new(input, pt)?.ricci_and_scalar())
}

pub fn field_blocks(input: &GeometryInput, pt: &PhasePoint) -> Result<FieldBlocksAtPoint, GeometryError> {
    Ok(LocalGeometry::new(input, pt)?.field_blocks())
}
