//! Plain value types for the geometric objects at a single phase point.
//!
//! Storage is 0-based. Index layouts follow the field docs; [`Components`]
//! flattens every object into named scalar entries with 1-based labels, which
//! is what the comparison driver and the CLI print.

use serde::{Deserialize, Serialize};

pub type Vec4 = [f64; 4];
pub type Mat4 = [[f64; 4]; 4];
pub type Tensor3 = [[[f64; 4]; 4]; 4];
pub type Tensor4 = [[[[f64; 4]; 4]; 4]; 4];

pub const ZERO3: Tensor3 = [[[0.0; 4]; 4]; 4];
pub const ZERO4: Tensor4 = [[[[0.0; 4]; 4]; 4]; 4];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricAtPoint {
    /// `g*^{ij}`
    pub upper: Mat4,
    /// `g*_{ij}`
    pub lower: Mat4,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonlinearConnectionAtPoint {
    /// `N₁(i)`, one per momentum.
    pub n1: Vec4,
    /// `n2[i][j] = N₂(i)j`
    pub n2: Mat4,
    /// Christoffel symbol of the time metric.
    pub christoffel_h: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CartanAtPoint {
    /// `a[i][j] = A^i_j1`
    pub a: Mat4,
    /// `h[i][j][k] = H^i_jk`
    pub h: Tensor3,
    /// `c[i][j][k] = C_i^{j(k)}`
    pub c: Tensor3,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorsionAtPoint {
    /// `r1[r][i][j] = R(r)ij`
    pub r1: Tensor3,
    /// `p[i][r][j] = P_i^{r(j)}`, which equals the vertical Cartan block.
    pub p: Tensor3,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureAtPoint {
    /// `r[l][i][j][k] = R^l_ijk`
    pub r: Tensor4,
    /// `p[l][i][j][k] = P^l_ij(k)`
    pub p: Tensor4,
    /// `s[l][i][j][k] = S_i^{l(j)(k)}`
    pub s: Tensor4,
    /// `covariant_c[l][i][j][k] = C_{i|j}^{l(k)}`
    pub covariant_c: Tensor4,
    /// `deflection[r][j][k] = P(r)j^(k)`
    pub deflection: Tensor3,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RicciAtPoint {
    /// `R_ij`, not symmetrised.
    pub r: Mat4,
    /// `S^{(i)(j)}`
    pub s: Mat4,
    pub scalar: f64,
    /// `Σ₁₁`, known only to the closed-form model.
    pub sigma11: Option<f64>,
}

/// Left minus right side of each conservation-like law.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConservationLaws {
    pub time_lhs: f64,
    pub time_rhs: f64,
    pub space_lhs: Vec4,
    pub space_rhs: Vec4,
    pub momentum_lhs: Vec4,
    pub momentum_rhs: Vec4,
}

impl ConservationLaws {
    /// Largest residual of each law: time, space, momentum.
    pub fn residuals(&self) -> [f64; 3] {
        let worst = |l: &Vec4, r: &Vec4| l.iter().zip(r).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        [
            (self.time_lhs - self.time_rhs).abs(),
            worst(&self.space_lhs, &self.space_rhs),
            worst(&self.momentum_lhs, &self.momentum_rhs),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldBlocksAtPoint {
    /// Total metric blocks: `h11`, `g*_ij`, `h11 g*^{ij}`.
    pub metric_h11: f64,
    pub metric_x: Mat4,
    pub metric_p: Mat4,
    /// Einstein left-hand sides per block.
    pub einstein_11: f64,
    pub einstein_x: Mat4,
    pub einstein_p: Mat4,
    /// Stress-energy components `𝕋₁₁`, `𝕋_ij`, `𝕋^{(i)(j)}`.
    pub t11: f64,
    pub t_x: Mat4,
    pub t_p: Mat4,
    /// The six mixed blocks, in the order `1i, i1, (i)1, 1(i), i(j), (i)j`.
    pub zero_blocks: [Mat4; 6],
    /// `𝕋¹₁`
    pub t_mixed_time: f64,
    /// `e[m][i] = 𝖤^m_i`
    pub e: Mat4,
    /// `t_mixed[m][i] = 𝕋^{(1)(i)}_{(m)(1)}`
    pub t_mixed: Mat4,
    pub conservation: Option<ConservationLaws>,
    /// `em[i][j] = F(1)j^{(i)}`
    pub em: Mat4,
}

/// Everything at one point, as produced by either pipeline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometryBundle {
    pub metric: MetricAtPoint,
    pub connection: NonlinearConnectionAtPoint,
    pub cartan: CartanAtPoint,
    pub torsion: TorsionAtPoint,
    pub curvature: CurvatureAtPoint,
    pub ricci: RicciAtPoint,
    pub fields: FieldBlocksAtPoint,
}

/// A named scalar entry of a geometric object.
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    /// Object family, e.g. `"ginv"` or `"curvature_r"`.
    pub object: &'static str,
    /// 1-based indices.
    pub index: Vec<usize>,
    pub value: f64,
}

impl Component {
    pub fn label(&self) -> String {
        if self.index.is_empty() {
            return self.object.to_string();
        }
        let idx: Vec<String> = self.index.iter().map(|i| i.to_string()).collect();
        format!("{}[{}]", self.object, idx.join(","))
    }
}

pub trait Components {
    fn components(&self, out: &mut Vec<Component>);

    fn component_list(&self) -> Vec<Component> {
        let mut out = Vec::new();
        self.components(&mut out);
        out
    }
}

fn push0(out: &mut Vec<Component>, object: &'static str, v: f64) {
    out.push(Component { object, index: Vec::new(), value: v });
}

fn push1(out: &mut Vec<Component>, object: &'static str, v: &Vec4) {
    for (i, x) in v.iter().enumerate() {
        out.push(Component { object, index: vec![i + 1], value: *x });
    }
}

fn push2(out: &mut Vec<Component>, object: &'static str, m: &Mat4) {
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            out.push(Component { object, index: vec![i + 1, j + 1], value: *x });
        }
    }
}

fn push3(out: &mut Vec<Component>, object: &'static str, t: &Tensor3) {
    for (i, m) in t.iter().enumerate() {
        for (j, row) in m.iter().enumerate() {
            for (k, x) in row.iter().enumerate() {
                out.push(Component { object, index: vec![i + 1, j + 1, k + 1], value: *x });
            }
        }
    }
}

fn push4(out: &mut Vec<Component>, object: &'static str, t: &Tensor4) {
    for (l, t3) in t.iter().enumerate() {
        for (i, m) in t3.iter().enumerate() {
            for (j, row) in m.iter().enumerate() {
                for (k, x) in row.iter().enumerate() {
                    out.push(Component { object, index: vec![l + 1, i + 1, j + 1, k + 1], value: *x });
                }
            }
        }
    }
}

impl Components for MetricAtPoint {
    fn components(&self, out: &mut Vec<Component>) {
        push2(out, "ginv", &self.upper);
        push2(out, "g", &self.lower);
    }
}

impl Components for NonlinearConnectionAtPoint {
    fn components(&self, out: &mut Vec<Component>) {
        push1(out, "n1", &self.n1);
        push2(out, "n2", &self.n2);
        push0(out, "christoffel_h", self.christoffel_h);
    }
}

impl Components for CartanAtPoint {
    fn components(&self, out: &mut Vec<Component>) {
        push2(out, "cartan_a", &self.a);
        push3(out, "cartan_h", &self.h);
        push3(out, "cartan_c", &self.c);
    }
}

impl Components for TorsionAtPoint {
    fn components(&self, out: &mut Vec<Component>) {
        push3(out, "torsion_r1", &self.r1);
        push3(out, "torsion_p", &self.p);
    }
}

impl Components for CurvatureAtPoint {
    fn components(&self, out: &mut Vec<Component>) {
        push4(out, "curvature_r", &self.r);
        push4(out, "curvature_p", &self.p);
        push4(out, "curvature_s", &self.s);
        push4(out, "covariant_c", &self.covariant_c);
        push3(out, "deflection", &self.deflection);
    }
}

impl Components for RicciAtPoint {
    fn components(&self, out: &mut Vec<Component>) {
        push2(out, "ricci_r", &self.r);
        push2(out, "ricci_s", &self.s);
        push0(out, "sc", self.scalar);
    }
}

impl Components for FieldBlocksAtPoint {
    fn components(&self, out: &mut Vec<Component>) {
        push0(out, "einstein_11", self.einstein_11);
        push2(out, "einstein_x", &self.einstein_x);
        push2(out, "einstein_p", &self.einstein_p);
        push0(out, "t11", self.t11);
        push2(out, "t_x", &self.t_x);
        push2(out, "t_p", &self.t_p);
        const ZERO_NAMES: [&str; 6] = ["t_1i", "t_i1", "t_(i)1", "t_1(i)", "t_i(j)", "t_(i)j"];
        for (name, block) in ZERO_NAMES.iter().zip(&self.zero_blocks) {
            push2(out, name, block);
        }
        push0(out, "t_mixed_time", self.t_mixed_time);
        push2(out, "e_mixed", &self.e);
        push2(out, "t_mixed", &self.t_mixed);
        push2(out, "em", &self.em);
    }
}

impl Components for GeometryBundle {
    fn components(&self, out: &mut Vec<Component>) {
        self.metric.components(out);
        self.connection.components(out);
        self.cartan.components(out);
        self.torsion.components(out);
        self.curvature.components(out);
        self.ricci.components(out);
        self.fields.components(out);
    }
}

pub fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| a[i][k] * b[k][j]).sum()))
}

/// `max |a·b − I|` over all entries.
pub fn inverse_defect(a: &Mat4, b: &Mat4) -> f64 {
    let m = mat_mul(a, b);
    let mut worst: f64 = 0.0;
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let id = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((x - id).abs());
        }
    }
    worst
}
