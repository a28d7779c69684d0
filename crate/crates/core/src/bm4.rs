//! Closed forms for the conformally deformed quartic Berwald–Moór Hamiltonian
//!
//! `H = 2 e^{−σ(x)} √h11(t) (p1 p2 p3 p4)^{1/4}`, `H* = H²`.
//!
//! Nothing here differentiates the Hamiltonian. The derivatives `σ_i`, `σ_ij`
//! and `h11'` are exact symbolic derivatives; every tensor is then direct
//! arithmetic. The Einstein-block formulas are generic over [`Scalar`] so the
//! conservation laws can differentiate them with jets.

use thiserror::Error;

use crate::expr::{ExprError, Expression};
use crate::geometry::{GeometryError, GeometryInput};
use crate::jet::{Jet, Truncation};
use crate::objects::*;
use crate::point::{PhasePoint, Var};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Bm4Error {
    #[error("h11 = {value} at t = {t} is not positive")]
    NonpositiveH11 { t: f64, value: f64 },
    #[error("{what} may only depend on {allowed}, found {found}")]
    ForeignVariable { what: &'static str, allowed: &'static str, found: Var },
    #[error("Einstein constant must be finite and non-zero")]
    EinsteinConstant,
    #[error(transparent)]
    Expr(#[from] ExprError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bm4Input {
    pub sigma: Expression,
    pub h11: Expression,
    pub einstein_constant: f64,
}

impl Bm4Input {
    pub fn new(sigma: Expression, h11: Expression) -> Self {
        Bm4Input { sigma, h11, einstein_constant: 1.0 }
    }

    pub fn with_einstein_constant(mut self, k: f64) -> Self {
        self.einstein_constant = k;
        self
    }

    /// The same metric as an input to the generic pipeline.
    pub fn to_geometry_input(&self) -> Result<GeometryInput, GeometryError> {
        Ok(GeometryInput::berwald_moor(self.sigma.clone(), self.h11.clone())?
            .with_einstein_constant(self.einstein_constant))
    }
}

/// `σ`, `σ_i = ∂σ/∂x^i` and `σ_ij = ∂²σ/∂x^i∂x^j` at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaJet<S> {
    pub value: S,
    pub first: [S; 4],
    pub second: [[S; 4]; 4],
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HamiltonianValue {
    pub h: f64,
    pub hstar: f64,
    /// `𝒫¹¹¹¹ = p1 p2 p3 p4`
    pub p1111: f64,
}

/// `𝖢_i^{jk}` from the piecewise table.
pub fn c_table(i: usize, j: usize, k: usize) -> f64 {
    match (i == j, i == k, j == k) {
        (true, true, _) => 3.0 / 8.0,
        (false, false, false) => 1.0 / 8.0,
        _ => -1.0 / 8.0,
    }
}

/// `𝖢_i^{jk} = (1 − 2δ^{jk} − 2δ_ij − 2δ_ik + 8δ_ij δ_ik) / 8`.
pub fn c_formula(i: usize, j: usize, k: usize) -> f64 {
    (1.0 - 2.0 * delta(j, k) - 2.0 * delta(i, j) - 2.0 * delta(i, k) + 8.0 * delta(i, j) * delta(i, k)) / 8.0
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// The two indices of `{0,1,2,3} \ {i,j}`, ascending.
pub fn complement(i: usize, j: usize) -> [usize; 2] {
    let mut rest = (0..4).filter(|&m| m != i && m != j);
    [rest.next().unwrap(), rest.next().unwrap()]
}

/// The closed-form model with its symbolic σ and h11 derivatives.
#[derive(Clone, Debug)]
pub struct Bm4Model {
    input: Bm4Input,
    sigma_d: [Expression; 4],
    sigma_dd: [[Expression; 4]; 4],
    h11_d: Expression,
}

impl Bm4Model {
    pub fn new(input: Bm4Input) -> Result<Self, Bm4Error> {
        let k = input.einstein_constant;
        if !k.is_finite() || k == 0.0 {
            return Err(Bm4Error::EinsteinConstant);
        }
        if let Some(found) = input.sigma.variables().into_iter().find(|v| !matches!(v, Var::X(_))) {
            return Err(Bm4Error::ForeignVariable { what: "sigma", allowed: "x1..x4", found });
        }
        if let Some(found) = input.h11.variables().into_iter().find(|v| *v != Var::T) {
            return Err(Bm4Error::ForeignVariable { what: "h11", allowed: "t", found });
        }
        let sigma_d: [Expression; 4] = std::array::from_fn(|i| input.sigma.differentiate(Var::x(i)));
        let sigma_dd = std::array::from_fn(|i| std::array::from_fn(|j| sigma_d[i].differentiate(Var::x(j))));
        let h11_d = input.h11.differentiate(Var::T);
        Ok(Bm4Model { input, sigma_d, sigma_dd, h11_d })
    }

    pub fn input(&self) -> &Bm4Input {
        &self.input
    }

    /// True when σ has no x-dependence, a limit the model accepts but the
    /// derivation does not cover.
    pub fn constant_sigma(&self) -> bool {
        self.input.sigma.variables().is_empty()
    }

    pub fn sigma_jet(&self, pt: &PhasePoint) -> Result<SigmaJet<f64>, Bm4Error> {
        self.sigma_jet_over(&pt.coords())
    }

    fn sigma_jet_over<S: Scalar>(&self, vars: &[S; 9]) -> Result<SigmaJet<S>, Bm4Error> {
        let value = self.input.sigma.eval_scalar(vars)?;
        let mut first = Vec::with_capacity(4);
        for e in &self.sigma_d {
            first.push(e.eval_scalar(vars)?);
        }
        let mut second = Vec::with_capacity(16);
        for row in &self.sigma_dd {
            for e in row {
                second.push(e.eval_scalar(vars)?);
            }
        }
        Ok(SigmaJet {
            value,
            first: std::array::from_fn(|i| first[i].clone()),
            second: std::array::from_fn(|i| std::array::from_fn(|j| second[4 * i + j].clone())),
        })
    }

    fn env<S: Scalar>(&self, vars: &[S; 9], t: f64) -> Result<Env<S>, Bm4Error> {
        let h11 = self.input.h11.eval_scalar(vars)?;
        if !(h11.value() > 0.0) {
            return Err(Bm4Error::NonpositiveH11 { t, value: h11.value() });
        }
        let h11_d = self.h11_d.eval_scalar(vars)?;
        let sigma = self.sigma_jet_over(vars)?;
        let p: [S; 4] = std::array::from_fn(|i| vars[Var::p(i).index()].clone());
        let product = p[0].mul(&p[1]).mul(&p[2]).mul(&p[3]);
        let two_sigma = sigma.value.scale(2.0);
        Ok(Env {
            e2s: two_sigma.exp(),
            em2s: two_sigma.neg().exp(),
            sqrt_p: product.sqrt(),
            h_up: h11.recip_scalar(),
            h11,
            h11_d,
            p,
            sigma,
            kappa: self.input.einstein_constant,
        })
    }

    fn env_at(&self, pt: &PhasePoint) -> Result<Env<f64>, Bm4Error> {
        self.env(&pt.coords(), pt.t())
    }

    pub fn hamiltonian_value(&self, pt: &PhasePoint) -> Result<HamiltonianValue, Bm4Error> {
        let sigma = self.input.sigma.evaluate_at(pt)?;
        let h11 = self.input.h11.evaluate_at(pt)?;
        if !(h11 > 0.0) {
            return Err(Bm4Error::NonpositiveH11 { t: pt.t(), value: h11 });
        }
        let p1111 = pt.momentum_product();
        let h = 2.0 * (-sigma).exp() * h11.sqrt() * p1111.powf(0.25);
        Ok(HamiltonianValue { h, hstar: h * h, p1111 })
    }

    pub fn metric_upper(&self, pt: &PhasePoint) -> Result<Mat4, Bm4Error> {
        let env = self.env_at(pt)?;
        Ok(std::array::from_fn(|i| std::array::from_fn(|j| env.ginv(i, j))))
    }

    pub fn metric_lower(&self, pt: &PhasePoint) -> Result<Mat4, Bm4Error> {
        let env = self.env_at(pt)?;
        Ok(std::array::from_fn(|i| std::array::from_fn(|j| env.g(i, j))))
    }

    pub fn metric(&self, pt: &PhasePoint) -> Result<MetricAtPoint, Bm4Error> {
        Ok(MetricAtPoint { upper: self.metric_upper(pt)?, lower: self.metric_lower(pt)? })
    }

    pub fn nonlinear_connection_cf(&self, pt: &PhasePoint) -> Result<NonlinearConnectionAtPoint, Bm4Error> {
        let env = self.env_at(pt)?;
        let k = env.christoffel();
        let p = pt.p();
        Ok(NonlinearConnectionAtPoint {
            n1: p.map(|pi| k * pi),
            n2: std::array::from_fn(|i| std::array::from_fn(|j| -4.0 * env.sigma.first[i] * p[i] * delta(i, j))),
            christoffel_h: k,
        })
    }

    pub fn cartan_cf(&self, pt: &PhasePoint) -> Result<CartanAtPoint, Bm4Error> {
        let env = self.env_at(pt)?;
        Ok(CartanAtPoint {
            a: [[0.0; 4]; 4],
            h: std::array::from_fn(|i| {
                std::array::from_fn(|j| std::array::from_fn(|k| 4.0 * delta(i, j) * delta(i, k) * env.sigma.first[i]))
            }),
            c: cartan_c(&pt.p()),
        })
    }

    pub fn torsions_cf(&self, pt: &PhasePoint) -> Result<TorsionAtPoint, Bm4Error> {
        let env = self.env_at(pt)?;
        let p = pt.p();
        let s2 = &env.sigma.second;
        Ok(TorsionAtPoint {
            r1: std::array::from_fn(|r| {
                std::array::from_fn(|i| {
                    std::array::from_fn(|j| -4.0 * s2[i][j] * (p[i] * delta(i, r) - p[j] * delta(j, r)))
                })
            }),
            p: cartan_c(&p),
        })
    }

    /// `C_{i|j}^{l(k)}` as the adapted x-derivative of `C` plus its three
    /// connection terms, stored `[l][i][j][k]`.
    pub fn covariant_c_cf(&self, pt: &PhasePoint) -> Result<Tensor4, Bm4Error> {
        let env = self.env_at(pt)?;
        let s1 = &env.sigma.first;
        let c = cartan_c(&pt.p());
        let h = |i: usize, j: usize, k: usize| 4.0 * delta(i, j) * delta(i, k) * s1[i];
        Ok(std::array::from_fn(|l| {
            std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    std::array::from_fn(|k| {
                        // p_j ∂/∂p_j of p_i/(p_l p_k) is the same tensor times δ_ij − δ_lj − δ_kj
                        let frame = 4.0 * s1[j] * c[i][l][k] * (delta(i, j) - delta(l, j) - delta(k, j));
                        let conn: f64 = (0..4)
                            .map(|r| c[i][r][k] * h(l, r, j) - c[r][l][k] * h(r, i, j) + c[i][l][r] * h(k, r, j))
                            .sum();
                        frame + conn
                    })
                })
            })
        }))
    }

    pub fn curvatures_cf(&self, pt: &PhasePoint) -> Result<CurvatureAtPoint, Bm4Error> {
        let env = self.env_at(pt)?;
        let p = pt.p();
        let s1 = &env.sigma.first;
        let s2 = &env.sigma.second;
        let c = cartan_c(&p);
        let covariant_c = self.covariant_c_cf(pt)?;
        let deflection: Tensor3 = std::array::from_fn(|r| {
            std::array::from_fn(|j| {
                std::array::from_fn(|k| -4.0 * s1[r] * delta(r, j) * delta(r, k) + 4.0 * delta(k, r) * delta(k, j) * s1[k])
            })
        });
        let mut r = ZERO4;
        let mut pc = ZERO4;
        let mut s = ZERO4;
        for l in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    for k in 0..4 {
                        r[l][i][j][k] = 4.0 * delta(i, l) * (delta(l, j) * s2[l][k] - delta(l, k) * s2[l][j])
                            - 4.0 * s2[j][k] * (p[j] * c[i][l][j] - p[k] * c[i][l][k]);
                        let cp: f64 = (0..4).map(|m| c[i][l][m] * deflection[m][j][k]).sum();
                        pc[l][i][j][k] = -covariant_c[l][i][j][k] + cp;
                        let cc: f64 = (0..4).map(|m| c[i][m][j] * c[m][l][k] - c[i][m][k] * c[m][l][j]).sum();
                        s[l][i][j][k] = c[i][l][j] * (delta(i, k) - delta(l, k) - delta(j, k)) / p[k]
                            - c[i][l][k] * (delta(i, j) - delta(l, j) - delta(k, j)) / p[j]
                            + cc;
                    }
                }
            }
        }
        Ok(CurvatureAtPoint { r, p: pc, s, covariant_c, deflection })
    }

    pub fn ricci_cf(&self, pt: &PhasePoint) -> Result<RicciAtPoint, Bm4Error> {
        let env = self.env_at(pt)?;
        Ok(RicciAtPoint {
            r: std::array::from_fn(|i| std::array::from_fn(|j| env.ricci(i, j))),
            s: std::array::from_fn(|i| std::array::from_fn(|j| env.s_trace(i, j))),
            scalar: env.scalar(),
            sigma11: Some(env.sigma11()),
        })
    }

    pub fn einstein_cf(&self, pt: &PhasePoint) -> Result<FieldBlocksAtPoint, Bm4Error> {
        let env = self.env_at(pt)?;
        let kappa = env.kappa;
        let h11 = env.h11;
        let x_factor = env.minus_half_sc();
        let p_factor = h11 * x_factor;
        let metric_x: Mat4 = std::array::from_fn(|i| std::array::from_fn(|j| env.g(i, j)));
        let ginv: Mat4 = std::array::from_fn(|i| std::array::from_fn(|j| env.ginv(i, j)));
        let einstein_x: Mat4 =
            std::array::from_fn(|i| std::array::from_fn(|j| env.ricci(i, j) + x_factor * metric_x[i][j]));
        let einstein_p: Mat4 =
            std::array::from_fn(|i| std::array::from_fn(|j| -env.s_trace(i, j) + p_factor * ginv[i][j]));
        Ok(FieldBlocksAtPoint {
            metric_h11: h11,
            metric_x,
            metric_p: ginv.map(|row| row.map(|v| h11 * v)),
            einstein_11: p_factor,
            einstein_x,
            einstein_p,
            t11: p_factor / kappa,
            t_x: einstein_x.map(|row| row.map(|v| v / kappa)),
            t_p: einstein_p.map(|row| row.map(|v| v / kappa)),
            zero_blocks: [[[0.0; 4]; 4]; 6],
            t_mixed_time: env.t_time(),
            e: std::array::from_fn(|m| std::array::from_fn(|i| env.e(m, i))),
            t_mixed: std::array::from_fn(|m| std::array::from_fn(|i| env.t_mixed(m, i))),
            conservation: Some(self.conservation_cf(pt)?),
            em: self.em_cf(pt)?,
        })
    }

    /// Both sides of the three conservation-like laws, with the frame
    /// derivatives of the closed-form components taken by jets.
    pub fn conservation_cf(&self, pt: &PhasePoint) -> Result<ConservationLaws, Bm4Error> {
        let seed = Jet::seed(Truncation::total(1), &pt.coords());
        let jets = self.env(&seed, pt.t())?;
        let vals = self.env_at(pt)?;
        let p = pt.p();
        let s1 = vals.sigma.first;
        let k = vals.christoffel();
        // δ/δt = ∂/∂t − 𝗄 p_r ∂/∂p_r, δ/δx^i = ∂/∂x^i + 4σ_i p_i ∂/∂p_i
        let dt = |f: &Jet| f.d(Var::T).value() - (0..4).map(|r| k * p[r] * f.d(Var::p(r)).value()).sum::<f64>();
        let dx = |f: &Jet, i: usize| f.d(Var::x(i)).value() + 4.0 * s1[i] * p[i] * f.d(Var::p(i)).value();

        let time_lhs = dt(&jets.t_time());

        let e: Mat4 = std::array::from_fn(|m| std::array::from_fn(|i| vals.e(m, i)));
        let divergence: [f64; 4] = std::array::from_fn(|i| (0..4).map(|m| dx(&jets.e(m, i), m)).sum());
        let h = |i: usize, j: usize, k: usize| 4.0 * delta(i, j) * delta(i, k) * s1[i];
        let space_lhs = std::array::from_fn(|i| {
            let mut v = divergence[i];
            for r in 0..4 {
                for m in 0..4 {
                    v += e[r][i] * h(m, r, m) - e[m][r] * h(r, i, m);
                }
            }
            v
        });
        let space_rhs = std::array::from_fn(|i| {
            divergence[i] + (0..4).map(|m| 4.0 * e[m][i] * s1[m]).sum::<f64>() - 4.0 * e[i][i] * s1[i]
        });

        let c = cartan_c(&p);
        let tm: Mat4 = std::array::from_fn(|m| std::array::from_fn(|i| vals.t_mixed(m, i)));
        let momentum_lhs = std::array::from_fn(|i| {
            let mut v: f64 = (0..4).map(|m| jets.t_mixed(m, i).d(Var::p(m)).value()).sum();
            for r in 0..4 {
                for m in 0..4 {
                    v += tm[m][r] * c[r][i][m] - tm[r][i] * c[m][r][m];
                }
            }
            v
        });
        let s2 = &vals.sigma.second;
        let sigma11 = vals.sigma11();
        let factor = vals.em2s * vals.sqrt_p / vals.kappa;
        let momentum_rhs = std::array::from_fn(|i| {
            let d: f64 = (0..4).filter(|&j| j != i).map(|j| -s2[i][j] / (p[i] * p[i] * p[j])).sum();
            factor * (sigma11 / p[i] + 2.0 * d)
        });
        Ok(ConservationLaws { time_lhs, time_rhs: 0.0, space_lhs, space_rhs, momentum_lhs, momentum_rhs })
    }

    /// The momentum electromagnetic components vanish identically.
    pub fn em_cf(&self, pt: &PhasePoint) -> Result<Mat4, Bm4Error> {
        self.env_at(pt)?;
        Ok([[0.0; 4]; 4])
    }

    pub fn bundle(&self, pt: &PhasePoint) -> Result<GeometryBundle, Bm4Error> {
        Ok(GeometryBundle {
            metric: self.metric(pt)?,
            connection: self.nonlinear_connection_cf(pt)?,
            cartan: self.cartan_cf(pt)?,
            torsion: self.torsions_cf(pt)?,
            curvature: self.curvatures_cf(pt)?,
            ricci: self.ricci_cf(pt)?,
            fields: self.einstein_cf(pt)?,
        })
    }
}

/// `C_i^{j(k)} = 𝖢_i^{jk} p_i / (p_j p_k)`, stored `[i][j][k]`.
pub fn cartan_c(p: &[f64; 4]) -> Tensor3 {
    std::array::from_fn(|i| std::array::from_fn(|j| std::array::from_fn(|k| c_table(i, j, k) * p[i] / (p[j] * p[k]))))
}

/// Closed-form ingredients shared by every formula, over any scalar type.
struct Env<S> {
    e2s: S,
    em2s: S,
    sqrt_p: S,
    h11: S,
    h11_d: S,
    h_up: S,
    p: [S; 4],
    sigma: SigmaJet<S>,
    kappa: f64,
}

trait RecipScalar: Scalar {
    fn recip_scalar(&self) -> Self {
        self.lift(1.0).div(self)
    }
}

impl<S: Scalar> RecipScalar for S {}

impl<S: Scalar> Env<S> {
    fn christoffel(&self) -> S {
        self.h_up.mul(&self.h11_d).scale(0.5)
    }

    /// `e^{−2σ}(1 − 2δ^{ij})/2 · 𝒫^{1/2}/(p_i p_j)`
    fn ginv(&self, i: usize, j: usize) -> S {
        let pp = self.p[i].mul(&self.p[j]);
        self.em2s.mul(&self.sqrt_p).div(&pp).scale((1.0 - 2.0 * delta(i, j)) / 2.0)
    }

    /// `e^{2σ}(1 − 2δ_ij)/2 · p_i p_j/𝒫^{1/2}`
    fn g(&self, i: usize, j: usize) -> S {
        let pp = self.p[i].mul(&self.p[j]);
        self.e2s.mul(&pp).div(&self.sqrt_p).scale((1.0 - 2.0 * delta(i, j)) / 2.0)
    }

    fn ricci(&self, i: usize, j: usize) -> S {
        if i == j {
            return self.p[0].lift(0.0);
        }
        let s2 = &self.sigma.second;
        let [k, l] = complement(i, j);
        s2[i][j]
            .scale(-2.0)
            .sub(&self.p[i].div(&self.p[k]).mul(&s2[j][k]))
            .sub(&self.p[i].div(&self.p[l]).mul(&s2[j][l]))
    }

    /// `S^{(i)(j)} = −(4δ^{ij} − 1)/(8 p_i p_j)`
    fn s_trace(&self, i: usize, j: usize) -> S {
        self.p[i].mul(&self.p[j]).recip_scalar().scale(-(4.0 * delta(i, j) - 1.0) / 8.0)
    }

    fn sigma11(&self) -> S {
        let s2 = &self.sigma.second;
        let mut terms = Vec::with_capacity(6);
        for i in 0..4 {
            for j in i + 1..4 {
                terms.push(s2[i][j].div(&self.p[i].mul(&self.p[j])));
            }
        }
        terms.iter().skip(1).fold(terms[0].clone(), |a, b| a.add(b))
    }

    /// `−Sc/2 = 2e^{−2σ}𝒫^{1/2}Σ₁₁ + (3/4)h¹¹e^{2σ}𝒫^{−1/2}`
    fn minus_half_sc(&self) -> S {
        let curved = self.em2s.mul(&self.sqrt_p).mul(&self.sigma11()).scale(2.0);
        let flat = self.h_up.mul(&self.e2s).div(&self.sqrt_p).scale(0.75);
        curved.add(&flat)
    }

    fn scalar(&self) -> S {
        self.minus_half_sc().scale(-2.0)
    }

    /// `𝕋¹₁ = h¹¹ 𝕋₁₁`
    fn t_time(&self) -> S {
        self.minus_half_sc().scale(1.0 / self.kappa)
    }

    /// `𝖤^m_i = 𝒦⁻¹[g*^{mr} R_ri + δ^m_i (−Sc/2)]`
    fn e(&self, m: usize, i: usize) -> S {
        let mut acc = self.ginv(m, 0).mul(&self.ricci(0, i));
        for r in 1..4 {
            acc = acc.add(&self.ginv(m, r).mul(&self.ricci(r, i)));
        }
        if m == i {
            acc = acc.add(&self.minus_half_sc());
        }
        acc.scale(1.0 / self.kappa)
    }

    /// `𝕋^{(1)(i)}_{(m)(1)}`
    fn t_mixed(&self, m: usize, i: usize) -> S {
        let flat = self.h_up.mul(&self.e2s).div(&self.sqrt_p);
        let mut v = flat.mul(&self.p[m]).div(&self.p[i]).scale(1.0 / (8.0 * self.kappa));
        if m == i {
            let curved = self.em2s.mul(&self.sqrt_p).mul(&self.sigma11()).scale(2.0);
            v = v.add(&flat.scale(0.25).add(&curved).scale(1.0 / self.kappa));
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(sigma: &str, h11: &str) -> Bm4Model {
        Bm4Model::new(Bm4Input::new(sigma.parse().unwrap(), h11.parse().unwrap())).unwrap()
    }

    fn at(p: [f64; 4]) -> PhasePoint {
        PhasePoint::new(0.0, [0.0; 4], p).unwrap()
    }

    #[test]
    fn c_table_matches_the_algebraic_formula() {
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    assert_eq!(c_table(i, j, k), c_formula(i, j, k), "({i},{j},{k})");
                }
            }
        }
    }

    #[test]
    fn hamiltonian_values() {
        let m = model("0", "1");
        let v = m.hamiltonian_value(&PhasePoint::unit()).unwrap();
        assert_eq!((v.h, v.hstar, v.p1111), (2.0, 4.0, 1.0));
        let v = m.hamiltonian_value(&at([1.0, 4.0, 1.0, 4.0])).unwrap();
        assert_eq!((v.h, v.hstar, v.p1111), (4.0, 16.0, 16.0));
    }

    #[test]
    fn metric_examples() {
        let m = model("0", "1");
        let up = m.metric_upper(&at([1.0, 2.0, 3.0, 4.0])).unwrap();
        assert!((up[0][0] + 24f64.sqrt() / 2.0).abs() < 1e-15);
        let low = m.metric_lower(&at([1.0, 2.0, 3.0, 4.0])).unwrap();
        assert!((low[0][1] - 1.0 / 24f64.sqrt()).abs() < 1e-15);
        let low = model("x1", "1").metric_lower(&PhasePoint::new(0.0, [1.0, 0.0, 0.0, 0.0], [1.0; 4]).unwrap()).unwrap();
        assert!((low[0][1] - 0.5 * 2f64.exp()).abs() < 1e-14);
        assert!((low[0][0] + 0.5 * 2f64.exp()).abs() < 1e-14);
    }

    #[test]
    fn cartan_example() {
        let c = model("x1", "1").cartan_cf(&at([1.0, 2.0, 4.0, 1.0])).unwrap().c;
        assert_eq!(c[0][1][2], 1.0 / 64.0);
    }

    #[test]
    fn torsion_example() {
        let r1 = model("x1*x2", "1").torsions_cf(&PhasePoint::unit()).unwrap().r1;
        assert_eq!((r1[0][0][1], r1[1][0][1], r1[2][0][1]), (-4.0, 4.0, 0.0));
    }

    #[test]
    fn ricci_and_scalar_examples() {
        let r = model("x1*x2", "1").ricci_cf(&PhasePoint::unit()).unwrap();
        assert_eq!(r.r[0][1], -2.0);
        assert_eq!(r.r[2][0], -1.0);
        // σ₂₃ = σ₂₄ = 0, so the second row only sees σ₁₂ through R₂₁
        assert_eq!(r.r[0][2], 0.0);
        assert_eq!(r.sigma11, Some(1.0));
        assert_eq!(r.scalar, -5.5);
        let flat = model("0", "1").ricci_cf(&PhasePoint::unit()).unwrap();
        assert_eq!(flat.scalar, -1.5);
        assert_eq!(flat.s[0][0], -3.0 / 8.0);
        assert_eq!(flat.s[0][1], 1.0 / 8.0);
    }

    #[test]
    fn einstein_examples() {
        let f = model("0", "1").einstein_cf(&PhasePoint::unit()).unwrap();
        assert_eq!(f.t11, 0.75);
        let f = model("x1*x2", "1").einstein_cf(&PhasePoint::unit()).unwrap();
        assert_eq!(f.conservation.unwrap().momentum_rhs[0], -1.0);
    }

    #[test]
    fn ricci_matches_the_permutation_sum() {
        let m = model("x1*x2 + sin(x3)*x4 + x2^2*x4", "1");
        let pt = PhasePoint::new(0.2, [0.3, -0.4, 0.7, 0.1], [0.5, 1.5, 2.0, 3.0]).unwrap();
        let r = m.ricci_cf(&pt).unwrap().r;
        let s2 = m.sigma_jet(&pt).unwrap().second;
        let p = pt.p();
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    continue;
                }
                let [k, l] = complement(i, j);
                let expected = -2.0 * s2[i][j] - (p[i] / p[k]) * s2[j][k] - (p[i] / p[l]) * s2[j][l];
                assert_eq!(r[i][j], expected);
            }
        }
    }
}
