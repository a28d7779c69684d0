//! Exact symbolic partial derivatives.
//!
//! Simplification is limited to constant folding and eliding `x*0`, `x*1`,
//! `x+0`, `x-0`, `x/1`, `x^1`, `x^0`; correctness is checked by evaluation.

use super::{BinOp, Expression, Func, Node};
use crate::point::Var;

impl Expression {
    pub fn differentiate(&self, v: Var) -> Expression {
        match self.node() {
            Node::Num(_) => zero(),
            Node::Var(w) => Expression::num(if *w == v { 1.0 } else { 0.0 }),
            Node::Neg(a) => neg(a.differentiate(v)),
            Node::Func(f, a) => {
                let da = a.differentiate(v);
                if is_zero(&da) {
                    return zero();
                }
                let outer = match f {
                    Func::Exp => self.clone(),
                    Func::Log => div(one(), a.clone()),
                    Func::Sqrt => div(one(), mul(Expression::num(2.0), self.clone())),
                    Func::Sin => Expression::func(Func::Cos, a.clone()),
                    Func::Cos => neg(Expression::func(Func::Sin, a.clone())),
                };
                mul(outer, da)
            }
            Node::Binary(op, a, b) => {
                let da = a.differentiate(v);
                let db = b.differentiate(v);
                match op {
                    BinOp::Add => add(da, db),
                    BinOp::Sub => sub(da, db),
                    BinOp::Mul => add(mul(da, b.clone()), mul(a.clone(), db)),
                    BinOp::Div => sub(
                        div(da, b.clone()),
                        div(mul(a.clone(), db), pow(b.clone(), Expression::num(2.0))),
                    ),
                    BinOp::Pow if b.is_constant() => {
                        if is_zero(&da) {
                            return zero();
                        }
                        let reduced = sub(b.clone(), one());
                        mul(mul(b.clone(), pow(a.clone(), reduced)), da)
                    }
                    BinOp::Pow => {
                        // d(a^b) = a^b (b' log a + b a'/a)
                        let log_a = Expression::func(Func::Log, a.clone());
                        let inner = add(mul(db, log_a), div(mul(b.clone(), da), a.clone()));
                        mul(self.clone(), inner)
                    }
                }
            }
        }
    }

    /// Repeated partial differentiation, in the order given.
    pub fn differentiate_many(&self, vars: &[Var]) -> Expression {
        vars.iter().fold(self.clone(), |e, v| e.differentiate(*v))
    }
}

fn zero() -> Expression {
    Expression::num(0.0)
}

fn one() -> Expression {
    Expression::num(1.0)
}

fn is_zero(e: &Expression) -> bool {
    e.as_num() == Some(0.0)
}

fn is_one(e: &Expression) -> bool {
    e.as_num() == Some(1.0)
}

fn neg(a: Expression) -> Expression {
    match a.node() {
        Node::Num(x) => Expression::num(-x),
        Node::Neg(inner) => inner.clone(),
        _ => Expression::neg(a),
    }
}

fn add(a: Expression, b: Expression) -> Expression {
    match (a.as_num(), b.as_num()) {
        (Some(x), Some(y)) => Expression::num(x + y),
        (Some(x), _) if x == 0.0 => b,
        (_, Some(y)) if y == 0.0 => a,
        _ => Expression::add(a, b),
    }
}

fn sub(a: Expression, b: Expression) -> Expression {
    match (a.as_num(), b.as_num()) {
        (Some(x), Some(y)) => Expression::num(x - y),
        (Some(x), _) if x == 0.0 => neg(b),
        (_, Some(y)) if y == 0.0 => a,
        _ => Expression::sub(a, b),
    }
}

fn mul(a: Expression, b: Expression) -> Expression {
    match (a.as_num(), b.as_num()) {
        (Some(x), Some(y)) => Expression::num(x * y),
        _ if is_zero(&a) || is_zero(&b) => zero(),
        _ if is_one(&a) => b,
        _ if is_one(&b) => a,
        _ => Expression::mul(a, b),
    }
}

fn div(a: Expression, b: Expression) -> Expression {
    match (a.as_num(), b.as_num()) {
        (Some(x), Some(y)) if y != 0.0 => Expression::num(x / y),
        _ if is_zero(&a) => zero(),
        _ if is_one(&b) => a,
        _ => Expression::div(a, b),
    }
}

fn pow(a: Expression, b: Expression) -> Expression {
    // Fold constant exponents so `b - 1` stays a literal.
    let b = match b.as_num() {
        Some(_) => b,
        None if b.is_constant() => match b.evaluate(&super::Binding::new()) {
            Ok(c) => Expression::num(c),
            Err(_) => b,
        },
        None => b,
    };
    match b.as_num() {
        Some(y) if y == 1.0 => a,
        Some(y) if y == 0.0 => one(),
        _ => Expression::pow(a, b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Binding;
    use crate::point::PhasePoint;

    fn parse(s: &str) -> Expression {
        Expression::parse(s).unwrap()
    }

    #[test]
    fn simple_derivatives() {
        assert_eq!(parse("x1*x2").differentiate(Var::x(0)).to_string(), "x2");
        assert_eq!(parse("exp(t)").differentiate(Var::T).to_string(), "exp(t)");
        assert_eq!(parse("x3 + 4").differentiate(Var::x(0)).to_string(), "0");
    }

    #[test]
    fn root_of_momentum_product() {
        let e = parse("(p1*p2*p3*p4)^(1/2)");
        let d = e.differentiate(Var::p(0));
        let v = d.evaluate_at(&PhasePoint::unit()).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
        let d4 = e.differentiate_many(&[Var::p(0), Var::p(1), Var::p(2), Var::p(3)]);
        let v = d4.evaluate_at(&PhasePoint::unit()).unwrap();
        assert!((v - 1.0 / 16.0).abs() < 1e-14);
    }

    #[test]
    fn variable_exponent() {
        // d/dt t^t = t^t (log t + 1)
        let d = parse("t^t").differentiate(Var::T);
        let b = Binding::new().set(Var::T, 2.0);
        let v = d.evaluate(&b).unwrap();
        assert!((v - 4.0 * (2f64.ln() + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn functions() {
        let b = Binding::new().set(Var::x(0), 0.7);
        let cases = [
            ("sin(x1)", 0.7f64.cos()),
            ("cos(x1)", -0.7f64.sin()),
            ("log(x1)", 1.0 / 0.7),
            ("sqrt(x1)", 0.5 / 0.7f64.sqrt()),
            ("1/x1", -1.0 / 0.49),
        ];
        for (text, want) in cases {
            let got = parse(text).differentiate(Var::x(0)).evaluate(&b).unwrap();
            assert!((got - want).abs() < 1e-12, "{text}: {got} vs {want}");
        }
    }
}
