//! Double-double arithmetic for the finite-difference oracle.
//!
//! A value is an unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`, giving
//! about 106 significant bits. Only the finite-difference stencils use it, so
//! that their round-off (`ε·|f|/hⁿ`) stays far below the truncation error.

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

const LN2: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.319_046_813_846_299_6e-17 };
const FRAC_PI_2: Dd = Dd { hi: std::f64::consts::FRAC_PI_2, lo: 6.123_233_995_736_766e-17 };

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub(crate) const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub(crate) fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// `a + b` without rounding.
    pub(crate) fn exact_sum(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_sum(a, b);
        Dd { hi, lo }
    }

    pub(crate) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn renorm(hi: f64, lo: f64) -> Dd {
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }

    fn add_dd(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        Dd::renorm(s, e + f)
    }

    fn mul_dd(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        Dd::renorm(p, e + (self.hi * o.lo + self.lo * o.hi))
    }

    fn mul_f64(self, c: f64) -> Dd {
        let (p, e) = two_prod(self.hi, c);
        Dd::renorm(p, e + self.lo * c)
    }

    fn div_dd(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.add_dd(o.mul_f64(-q1));
        let q2 = r.hi / o.hi;
        let r = r.add_dd(o.mul_f64(-q2));
        let q3 = r.hi / o.hi;
        Dd::renorm(q1, q2).add_dd(Dd::from_f64(q3))
    }

    fn neg_dd(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    fn ldexp(self, k: i32) -> Dd {
        let f = 2f64.powi(k);
        Dd { hi: self.hi * f, lo: self.lo * f }
    }

    fn exp_dd(self) -> Dd {
        if self.hi > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        // x = k ln2 + r, then e^r = (e^{r/2¹⁰})^{2¹⁰}
        let k = (self.hi / LN2.hi).round();
        let r = self.add_dd(LN2.mul_f64(-k)).ldexp(-10);
        let mut term = Dd::from_f64(1.0);
        let mut sum = Dd::from_f64(1.0);
        for n in 1..=14 {
            term = term.mul_dd(r).div_dd(Dd::from_f64(n as f64));
            sum = sum.add_dd(term);
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        for _ in 0..10 {
            sum = sum.mul_dd(sum);
        }
        sum.ldexp(k as i32)
    }

    fn ln_dd(self) -> Dd {
        // one Newton step on e^y = x from the binary64 logarithm
        let y = Dd::from_f64(self.hi.ln());
        y.add_dd(self.mul_dd(y.neg_dd().exp_dd())).add_dd(Dd::from_f64(-1.0))
    }

    fn sqrt_dd(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::from_f64(self.hi.sqrt());
        }
        let s = self.hi.sqrt();
        let (p, e) = two_prod(s, s);
        let resid = self.add_dd(Dd { hi: -p, lo: -e });
        Dd::from_f64(s).add_dd(Dd::from_f64(resid.hi / (2.0 * s)))
    }

    /// `(sin r, cos r)` by Taylor series, for `|r| ≤ π/4`.
    fn sin_cos_reduced(r: Dd) -> (Dd, Dd) {
        let r2 = r.mul_dd(r);
        let mut term = r;
        let mut sin = r;
        let mut n = 1.0;
        while term.hi.abs() > 1e-36 {
            term = term.mul_dd(r2).div_dd(Dd::from_f64(-(n + 1.0) * (n + 2.0)));
            sin = sin.add_dd(term);
            n += 2.0;
        }
        let mut term = Dd::from_f64(1.0);
        let mut cos = term;
        let mut n = 0.0;
        while term.hi.abs() > 1e-36 {
            term = term.mul_dd(r2).div_dd(Dd::from_f64(-(n + 1.0) * (n + 2.0)));
            cos = cos.add_dd(term);
            n += 2.0;
        }
        (sin, cos)
    }

    fn sin_cos(self) -> (Dd, Dd) {
        let k = (self.hi / FRAC_PI_2.hi).round();
        let r = self.add_dd(FRAC_PI_2.mul_f64(-k));
        let (s, c) = Dd::sin_cos_reduced(r);
        match (k as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, s.neg_dd()),
            2 => (s.neg_dd(), c.neg_dd()),
            _ => (c.neg_dd(), s),
        }
    }

    fn powi(self, n: i64) -> Dd {
        let mut base = if n < 0 { Dd::from_f64(1.0).div_dd(self) } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Dd::from_f64(1.0);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_dd(base);
            }
            base = base.mul_dd(base);
            e >>= 1;
        }
        acc
    }
}

impl Scalar for Dd {
    fn value(&self) -> f64 {
        self.to_f64()
    }
    fn lift(&self, c: f64) -> Self {
        Dd::from_f64(c)
    }
    fn has_derivatives(&self) -> bool {
        false
    }
    fn add(&self, rhs: &Self) -> Self {
        self.add_dd(*rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add_dd(rhs.neg_dd())
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.mul_dd(*rhs)
    }
    fn div(&self, rhs: &Self) -> Self {
        self.div_dd(*rhs)
    }
    fn neg(&self) -> Self {
        self.neg_dd()
    }
    fn scale(&self, c: f64) -> Self {
        self.mul_f64(c)
    }
    fn exp(&self) -> Self {
        self.exp_dd()
    }
    fn ln(&self) -> Self {
        self.ln_dd()
    }
    fn sqrt(&self) -> Self {
        self.sqrt_dd()
    }
    fn sin(&self) -> Self {
        self.sin_cos().0
    }
    fn cos(&self) -> Self {
        self.sin_cos().1
    }
    fn powf(&self, c: f64) -> Self {
        if c.fract() == 0.0 && c.abs() < 1024.0 {
            self.powi(c as i64)
        } else {
            self.ln_dd().mul_f64(c).exp_dd()
        }
    }
}
