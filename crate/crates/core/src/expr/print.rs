use std::fmt;

use super::{BinOp, Expression, Node};

// Binding strength of each node as the parser sees it.
fn precedence(e: &Expression) -> u8 {
    match e.node() {
        Node::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
        Node::Neg(_) => 2,
        Node::Binary(BinOp::Mul | BinOp::Div, ..) => 3,
        Node::Binary(BinOp::Pow, ..) => 4,
        Node::Num(v) if *v < 0.0 || v.is_sign_negative() => 2,
        Node::Num(_) | Node::Var(_) | Node::Func(..) => 5,
    }
}

fn child(f: &mut fmt::Formatter<'_>, e: &Expression, min: u8) -> fmt::Result {
    if precedence(e) < min {
        f.write_str("(")?;
        write_expr(f, e)?;
        f.write_str(")")
    } else {
        write_expr(f, e)
    }
}

pub(super) fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expression) -> fmt::Result {
    match e.node() {
        Node::Num(v) => write!(f, "{v}"),
        Node::Var(v) => f.write_str(v.name()),
        Node::Neg(a) => {
            f.write_str("-")?;
            child(f, a, 2)
        }
        Node::Func(func, a) => {
            write!(f, "{}(", func.name())?;
            write_expr(f, a)?;
            f.write_str(")")
        }
        Node::Binary(op, a, b) => {
            let (lmin, rmin) = match op {
                BinOp::Add | BinOp::Sub => (1, 2),
                BinOp::Mul | BinOp::Div => (3, 4),
                BinOp::Pow => (5, 4),
            };
            child(f, a, lmin)?;
            match op {
                BinOp::Add | BinOp::Sub => write!(f, " {} ", op.symbol())?,
                _ => write!(f, "{}", op.symbol())?,
            }
            child(f, b, rmin)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Func;
    use crate::point::Var;
    use proptest::prelude::*;

    fn arb_expr() -> impl Strategy<Value = Expression> {
        let leaf = prop_oneof![
            (0u32..1000).prop_map(|n| Expression::num(n as f64 / 8.0)),
            (0usize..9).prop_map(|i| Expression::var(Var::ALL[i])),
        ];
        leaf.prop_recursive(5, 48, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Expression::neg),
                (0usize..5, inner.clone()).prop_map(|(f, a)| Expression::func(Func::ALL[f], a)),
                (0usize..5, inner.clone(), inner).prop_map(|(op, a, b)| {
                    let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow][op];
                    Expression::binary(op, a, b)
                }),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(e in arb_expr()) {
            let text = e.to_string();
            let back = Expression::parse(&text).unwrap();
            prop_assert_eq!(back, e, "{}", text);
        }
    }

    #[test]
    fn prints_minimal_parentheses() {
        let e = Expression::parse("-(2*(x1 + x2))").unwrap();
        assert_eq!(e.to_string(), "-2*(x1 + x2)");
        let e = Expression::parse("(-2)*x1").unwrap();
        assert_eq!(e.to_string(), "(-2)*x1");
        let e = Expression::parse("(p1*p2*p3*p4)^(1/2)").unwrap();
        assert_eq!(e.to_string(), "(p1*p2*p3*p4)^(1/2)");
        let e = Expression::parse("(t^2)^3").unwrap();
        assert_eq!(e.to_string(), "(t^2)^3");
        let e = Expression::parse("x1 - (x2 - x3)").unwrap();
        assert_eq!(e.to_string(), "x1 - (x2 - x3)");
    }
}
