//! Identity checks on a single [`GeometryBundle`].
//!
//! Each check returns its worst absolute residual at the point.

use djet_core::objects::{inverse_defect, GeometryBundle};

use crate::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Identity {
    /// `‖g*^{ij} g*_{jk} − δ‖∞`
    MetricInverse,
    /// `C_i^{j(k)} = C_i^{k(j)}`
    CartanSymmetry,
    /// `Σ_m C_i^{j(m)} p_m = 0`
    CartanMomentumContraction,
    /// `Σ_m C_m^{j(m)} = 0`
    CartanTrace,
    /// `Σ_m C_{i|m}^{j(m)} = 0`
    CovariantTrace,
    /// `R(r)ij`, `R^l_ijk` and `S_i^{l(j)(k)}` in their last pair.
    Antisymmetry,
    VanishingA,
    VanishingDeflection,
    VanishingEm,
    VanishingRicciDiagonal,
    ConservationTime,
    ConservationSpace,
    ConservationMomentum,
}

impl Identity {
    pub const ALL: [Identity; 13] = [
        Identity::MetricInverse,
        Identity::CartanSymmetry,
        Identity::CartanMomentumContraction,
        Identity::CartanTrace,
        Identity::CovariantTrace,
        Identity::Antisymmetry,
        Identity::VanishingA,
        Identity::VanishingDeflection,
        Identity::VanishingEm,
        Identity::VanishingRicciDiagonal,
        Identity::ConservationTime,
        Identity::ConservationSpace,
        Identity::ConservationMomentum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::MetricInverse => "metric_inverse",
            Identity::CartanSymmetry => "cartan_c_symmetry",
            Identity::CartanMomentumContraction => "cartan_c_p_contraction",
            Identity::CartanTrace => "cartan_c_trace",
            Identity::CovariantTrace => "cartan_c_covariant_trace",
            Identity::Antisymmetry => "antisymmetry",
            Identity::VanishingA => "vanishing_a",
            Identity::VanishingDeflection => "vanishing_deflection",
            Identity::VanishingEm => "vanishing_em",
            Identity::VanishingRicciDiagonal => "vanishing_ricci_diagonal",
            Identity::ConservationTime => "conservation_time",
            Identity::ConservationSpace => "conservation_space",
            Identity::ConservationMomentum => "conservation_momentum",
        }
    }

    pub fn tolerance(self, tol: &Tolerances) -> f64 {
        match self {
            Identity::MetricInverse => tol.metric_inverse,
            Identity::CartanSymmetry | Identity::CartanMomentumContraction | Identity::CartanTrace => {
                tol.cartan_identities
            }
            Identity::CovariantTrace => tol.covariant_trace,
            Identity::Antisymmetry => 0.0,
            Identity::VanishingA
            | Identity::VanishingDeflection
            | Identity::VanishingEm
            | Identity::VanishingRicciDiagonal => tol.vanishing,
            Identity::ConservationTime | Identity::ConservationSpace | Identity::ConservationMomentum => {
                tol.conservation
            }
        }
    }

    /// Worst residual at `pt`, or `None` when the bundle lacks the inputs
    /// (conservation laws need σ).
    pub fn residual(self, b: &GeometryBundle, p: &[f64; 4]) -> Option<f64> {
        let c = &b.cartan.c;
        let max = |it: &mut dyn Iterator<Item = f64>| it.map(f64::abs).fold(0.0, f64::max);
        let r = match self {
            Identity::MetricInverse => inverse_defect(&b.metric.upper, &b.metric.lower),
            Identity::CartanSymmetry => max(&mut idx3().map(|(i, j, k)| c[i][j][k] - c[i][k][j])),
            Identity::CartanMomentumContraction => {
                max(&mut idx2().map(|(i, j)| (0..4).map(|m| c[i][j][m] * p[m]).sum()))
            }
            Identity::CartanTrace => max(&mut (0..4).map(|j| (0..4).map(|m| c[m][j][m]).sum())),
            Identity::CovariantTrace => {
                let cov = &b.curvature.covariant_c;
                max(&mut idx2().map(|(i, j)| (0..4).map(|m| cov[j][i][m][m]).sum()))
            }
            Identity::Antisymmetry => {
                let r1 = &b.torsion.r1;
                let (r, s) = (&b.curvature.r, &b.curvature.s);
                let three = idx3().map(|(a, i, j)| r1[a][i][j] + r1[a][j][i]);
                let four = idx3().flat_map(|(l, i, j)| {
                    (0..4).flat_map(move |k| [r[l][i][j][k] + r[l][i][k][j], s[l][i][j][k] + s[l][i][k][j]])
                });
                max(&mut three.chain(four))
            }
            Identity::VanishingA => max(&mut b.cartan.a.iter().flatten().copied()),
            Identity::VanishingDeflection => max(&mut b.curvature.deflection.iter().flatten().flatten().copied()),
            Identity::VanishingEm => max(&mut b.fields.em.iter().flatten().copied()),
            Identity::VanishingRicciDiagonal => max(&mut (0..4).map(|i| b.ricci.r[i][i])),
            Identity::ConservationTime => b.fields.conservation.as_ref()?.residuals()[0],
            Identity::ConservationSpace => b.fields.conservation.as_ref()?.residuals()[1],
            Identity::ConservationMomentum => b.fields.conservation.as_ref()?.residuals()[2],
        };
        Some(r)
    }
}

fn idx2() -> impl Iterator<Item = (usize, usize)> {
    (0..4).flat_map(|i| (0..4).map(move |j| (i, j)))
}

fn idx3() -> impl Iterator<Item = (usize, usize, usize)> {
    idx2().flat_map(|(i, j)| (0..4).map(move |k| (i, j, k)))
}
