use super::{BinOp, ExprError, Expression, Func, Node};
use crate::point::{PhasePoint, Var};
use crate::scalar::Scalar;

/// Values for some or all of the nine phase-space variables.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Binding {
    values: [Option<f64>; 9],
}

impl Binding {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(mut self, v: Var, value: f64) -> Self {
        self.values[v.index()] = Some(value);
        self
    }

    pub fn get(&self, v: Var) -> Option<f64> {
        self.values[v.index()]
    }
}

impl From<&PhasePoint> for Binding {
    fn from(pt: &PhasePoint) -> Self {
        Binding {
            values: pt.coords().map(Some),
        }
    }
}

impl Expression {
    /// Plain `f64` evaluation. Every referenced variable must be bound.
    pub fn evaluate(&self, b: &Binding) -> Result<f64, ExprError> {
        for v in self.variables() {
            if b.get(v).is_none() {
                return Err(ExprError::Unbound(v));
            }
        }
        let vars = Var::ALL.map(|v| b.get(v).unwrap_or(0.0));
        self.eval_scalar(&vars)
    }

    pub fn evaluate_at(&self, pt: &PhasePoint) -> Result<f64, ExprError> {
        self.eval_scalar(&pt.coords())
    }

    /// Evaluates over any [`Scalar`]; `vars` is indexed by [`Var::index`].
    ///
    /// Domain checks look at order-zero values: `log` needs a positive
    /// argument, `sqrt` a non-negative one (positive when derivatives are
    /// carried), division a non-zero denominator, and a power with a
    /// non-positive base needs an integer constant exponent.
    pub fn eval_scalar<S: Scalar>(&self, vars: &[S; 9]) -> Result<S, ExprError> {
        match self.node() {
            Node::Num(c) => Ok(vars[0].lift(*c)),
            Node::Var(v) => Ok(vars[v.index()].clone()),
            Node::Neg(a) => Ok(a.eval_scalar(vars)?.neg()),
            Node::Func(f, a) => {
                let u = a.eval_scalar(vars)?;
                let x = u.value();
                let out = match f {
                    Func::Exp => u.exp(),
                    Func::Log => {
                        if x <= 0.0 || x.is_nan() {
                            return Err(ExprError::Domain(format!("log of {x}")));
                        }
                        u.ln()
                    }
                    Func::Sqrt => {
                        if x < 0.0 || (x == 0.0 && u.has_derivatives()) || x.is_nan() {
                            return Err(ExprError::Domain(format!("sqrt of {x}")));
                        }
                        u.sqrt()
                    }
                    Func::Sin => u.sin(),
                    Func::Cos => u.cos(),
                };
                Ok(out)
            }
            Node::Binary(op, a, b) => {
                if *op == BinOp::Pow && b.is_constant() {
                    let base = a.eval_scalar(vars)?;
                    let c = b.evaluate(&Binding::new())?;
                    return pow_const(&base, c);
                }
                let x = a.eval_scalar(vars)?;
                let y = b.eval_scalar(vars)?;
                match op {
                    BinOp::Add => Ok(x.add(&y)),
                    BinOp::Sub => Ok(x.sub(&y)),
                    BinOp::Mul => Ok(x.mul(&y)),
                    BinOp::Div => {
                        if y.value() == 0.0 {
                            return Err(ExprError::DivisionByZero);
                        }
                        Ok(x.div(&y))
                    }
                    BinOp::Pow => {
                        if x.value() <= 0.0 {
                            return Err(ExprError::Domain(format!(
                                "power with base {} and a variable exponent",
                                x.value()
                            )));
                        }
                        Ok(y.mul(&x.ln()).exp())
                    }
                }
            }
        }
    }
}

fn pow_const<S: Scalar>(base: &S, c: f64) -> Result<S, ExprError> {
    let x = base.value();
    let integer = c.fract() == 0.0;
    if x < 0.0 && !integer {
        return Err(ExprError::Domain(format!("{x}^{c} is not real")));
    }
    if x == 0.0 {
        if c < 0.0 {
            return Err(ExprError::DivisionByZero);
        }
        if !integer && base.has_derivatives() {
            return Err(ExprError::Domain(format!("0^{c} is not differentiable")));
        }
    }
    Ok(base.powf(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(text: &str, b: &Binding) -> Result<f64, ExprError> {
        Expression::parse(text).unwrap().evaluate(b)
    }

    #[test]
    fn evaluates_simple_fields() {
        let b = Binding::new().set(Var::x(0), 2.0).set(Var::x(1), 3.0);
        assert_eq!(eval("x1^2*x2", &b).unwrap(), 12.0);
        assert_eq!(eval("exp(0)", &Binding::new()).unwrap(), 1.0);
        let b = Binding::new()
            .set(Var::p(0), 1.0)
            .set(Var::p(1), 4.0)
            .set(Var::p(2), 1.0)
            .set(Var::p(3), 1.0);
        assert_eq!(eval("(p1*p2*p3*p4)^(1/2)", &b).unwrap(), 2.0);
    }

    #[test]
    fn domain_errors() {
        let b = Binding::new().set(Var::T, -1.0);
        assert!(matches!(eval("log(t)", &b), Err(ExprError::Domain(_))));
        assert!(matches!(eval("sqrt(t)", &b), Err(ExprError::Domain(_))));
        assert!(matches!(eval("1/(t+1)", &b), Err(ExprError::DivisionByZero)));
        assert!(matches!(eval("t^0.5", &b), Err(ExprError::Domain(_))));
        assert!(matches!(eval("t^t", &b), Err(ExprError::Domain(_))));
        assert_eq!(eval("t^3", &b).unwrap(), -1.0);
        assert_eq!(eval("t^(-2)", &b).unwrap(), 1.0);
    }

    #[test]
    fn unbound_variable() {
        assert_eq!(
            eval("x1 + x2", &Binding::new().set(Var::x(0), 1.0)),
            Err(ExprError::Unbound(Var::x(1)))
        );
    }
}
