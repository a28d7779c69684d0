use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::point::Var;

/// Exponents of `t, x1..x4, p1..p4`.
pub type Monomial = [u8; 9];

/// A downward-closed set of multi-indices: total degree at most `total`,
/// degree in each variable at most `per_var[v]`, and total momentum degree at
/// most `momentum`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Truncation {
    total: u8,
    per_var: [u8; 9],
    momentum: u8,
}

impl Truncation {
    pub fn total(order: u8) -> Truncation {
        Truncation { total: order, per_var: [order; 9], momentum: order }
    }

    pub fn new(total: u8, per_var: [u8; 9], momentum: u8) -> Truncation {
        let mut t = Truncation { total, per_var, momentum };
        t.normalise();
        t
    }

    fn normalise(&mut self) {
        self.momentum = self.momentum.min(self.total);
        for (i, k) in self.per_var.iter_mut().enumerate() {
            *k = (*k).min(self.total);
            if i >= 5 {
                *k = (*k).min(self.momentum);
            }
        }
    }

    pub fn total_order(&self) -> u8 {
        self.total
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        let total: u32 = m.iter().map(|&k| k as u32).sum();
        let mom: u32 = m[5..].iter().map(|&k| k as u32).sum();
        total <= self.total as u32
            && mom <= self.momentum as u32
            && m.iter().zip(&self.per_var).all(|(k, cap)| k <= cap)
    }

    pub fn intersect(&self, o: &Truncation) -> Truncation {
        let mut per_var = [0u8; 9];
        for (i, p) in per_var.iter_mut().enumerate() {
            *p = self.per_var[i].min(o.per_var[i]);
        }
        Truncation::new(self.total.min(o.total), per_var, self.momentum.min(o.momentum))
    }

    /// The set `{α : α + e_v ∈ self}`, or `None` if `v` has no room.
    pub fn derive(&self, v: Var) -> Option<Truncation> {
        let i = v.index();
        if self.per_var[i] == 0 {
            return None;
        }
        let mut per_var = self.per_var;
        per_var[i] -= 1;
        let momentum = if v.is_momentum() { self.momentum - 1 } else { self.momentum };
        Some(Truncation::new(self.total - 1, per_var, momentum))
    }

    fn is_total(&self) -> bool {
        *self == Truncation::total(self.total)
    }
}

pub(crate) struct Layout {
    pub(crate) trunc: Truncation,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, u32>,
    // (target, left, right) with monomial[left] + monomial[right] = monomial[target]
    products: Vec<(u32, u32, u32)>,
    max_degree: usize,
    derivatives: [OnceLock<(Arc<Layout>, Vec<u32>)>; 9],
}

impl std::fmt::Debug for Layout {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Layout").field("trunc", &self.trunc).field("len", &self.monomials.len()).finish()
    }
}

fn cache() -> &'static RwLock<HashMap<Truncation, Arc<Layout>>> {
    static CACHE: OnceLock<RwLock<HashMap<Truncation, Arc<Layout>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl Layout {
    pub(crate) fn get(trunc: Truncation) -> Arc<Layout> {
        if let Some(l) = cache().read().expect("layout cache poisoned").get(&trunc) {
            return l.clone();
        }
        let built = Arc::new(Layout::build(trunc));
        let mut w = cache().write().expect("layout cache poisoned");
        w.entry(trunc).or_insert(built).clone()
    }

    fn build(trunc: Truncation) -> Layout {
        // Graded order: by total degree, then lexicographically descending in
        // (t, x1, ..., p4). Total-degree truncations are then prefixes of each
        // other.
        let mut monomials = Vec::new();
        for deg in 0..=trunc.total {
            let mut m = [0u8; 9];
            push_degree(&mut monomials, &mut m, 0, deg, &trunc);
        }
        let index: HashMap<Monomial, u32> =
            monomials.iter().enumerate().map(|(i, m)| (*m, i as u32)).collect();
        let mut products = Vec::new();
        for (c, m) in monomials.iter().enumerate() {
            let mut a = [0u8; 9];
            sub_boxes(m, &mut a, 0, &mut |a| {
                let mut b = [0u8; 9];
                for i in 0..9 {
                    b[i] = m[i] - a[i];
                }
                products.push((c as u32, index[a], index[&b]));
            });
        }
        let max_degree =
            monomials.iter().map(|m| m.iter().map(|&k| k as usize).sum::<usize>()).max().unwrap_or(0);
        Layout {
            trunc,
            monomials,
            index,
            products,
            max_degree,
            derivatives: Default::default(),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.monomials.len()
    }

    pub(crate) fn monomial(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }

    pub(crate) fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).map(|&i| i as usize)
    }

    pub(crate) fn products(&self) -> &[(u32, u32, u32)] {
        &self.products
    }

    pub(crate) fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Layout of `∂/∂v` and, for each of its monomials `β`, the index of
    /// `β + e_v` here.
    pub(crate) fn derivative(&self, v: Var) -> (Arc<Layout>, &[u32]) {
        let (l, map) = self.derivatives[v.index()].get_or_init(|| {
            let t = self
                .trunc
                .derive(v)
                .unwrap_or_else(|| panic!("jet with truncation {:?} has no derivative in {v}", self.trunc));
            let target = Layout::get(t);
            let map = target
                .monomials
                .iter()
                .map(|m| {
                    let mut up = *m;
                    up[v.index()] += 1;
                    self.index[&up]
                })
                .collect();
            (target, map)
        });
        (l.clone(), map)
    }

    /// Index here of each monomial of `target`, which must be a subset.
    pub(crate) fn restriction(&self, target: &Layout) -> Vec<u32> {
        if self.trunc.is_total() && target.trunc.is_total() && target.trunc.total <= self.trunc.total {
            return (0..target.len() as u32).collect();
        }
        target.monomials.iter().map(|m| self.index[m]).collect()
    }
}

fn push_degree(out: &mut Vec<Monomial>, m: &mut Monomial, var: usize, left: u8, t: &Truncation) {
    if var == 8 {
        m[8] = left;
        if t.contains(m) {
            out.push(*m);
        }
        m[8] = 0;
        return;
    }
    for k in (0..=left).rev() {
        m[var] = k;
        push_degree(out, m, var + 1, left - k, t);
    }
    m[var] = 0;
}

fn sub_boxes(m: &Monomial, a: &mut Monomial, var: usize, f: &mut impl FnMut(&Monomial)) {
    if var == 9 {
        f(a);
        return;
    }
    for k in 0..=m[var] {
        a[var] = k;
        sub_boxes(m, a, var + 1, f);
    }
    a[var] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn total_degree_sizes() {
        for k in 0..=4u8 {
            let l = Layout::get(Truncation::total(k));
            assert_eq!(l.len(), binom(9 + k as usize, k as usize));
            // pairs (a, b) with |a| + |b| <= k over 9 variables
            assert_eq!(l.products().len(), binom(18 + k as usize, k as usize));
            assert_eq!(l.monomial(0), &[0u8; 9]);
        }
    }

    #[test]
    fn total_truncations_are_prefixes() {
        let big = Layout::get(Truncation::total(4));
        let small = Layout::get(Truncation::total(2));
        for i in 0..small.len() {
            assert_eq!(small.monomial(i), big.monomial(i));
        }
    }

    #[test]
    fn mixed_caps() {
        let mut per_var = [0u8; 9];
        per_var[0] = 2;
        per_var[5] = 4;
        per_var[6] = 4;
        let t = Truncation::new(6, per_var, 4);
        let l = Layout::get(t);
        // t-degree 0..=2 times p1,p2 monomials of total degree <= 4 (15 of them)
        assert_eq!(l.len(), 3 * 15);
        let d = t.derive(Var::p(0)).unwrap();
        assert!(d.contains(&[2, 0, 0, 0, 0, 3, 0, 0, 0]));
        assert!(!d.contains(&[2, 0, 0, 0, 0, 4, 0, 0, 0]));
        assert!(t.derive(Var::x(0)).is_none());
    }
}
