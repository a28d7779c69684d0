use super::{BinOp, ExprError, Expression, Func};
use crate::point::Var;

pub(super) fn parse(text: &str) -> Result<Expression, ExprError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.expected(&["operator", "end of input"]));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expected(&self, what: &[&str]) -> ExprError {
        ExprError::Syntax {
            offset: self.pos,
            expected: what.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expr(&mut self) -> Result<Expression, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => BinOp::Add,
                Some(b'-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expression::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expression, ExprError> {
        if self.eat(b'-') {
            return Ok(Expression::neg(self.term()?));
        }
        self.product()
    }

    fn product(&mut self) -> Result<Expression, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinOp::Mul,
                Some(b'/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.operand()?;
            lhs = Expression::binary(op, lhs, rhs);
        }
    }

    fn operand(&mut self) -> Result<Expression, ExprError> {
        if self.eat(b'-') {
            return Ok(Expression::neg(self.operand()?));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expression, ExprError> {
        let base = self.primary()?;
        if self.eat(b'^') {
            let exp = self.exponent()?;
            return Ok(Expression::pow(base, exp));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Expression, ExprError> {
        if self.eat(b'-') {
            return Ok(Expression::neg(self.exponent()?));
        }
        self.factor()
    }

    fn primary(&mut self) -> Result<Expression, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.expected(&["')'"]));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            _ => Err(self.expected(&["number", "identifier", "'('"])),
        }
    }

    fn number(&mut self) -> Result<Expression, ExprError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            self.pos = start;
            return Err(self.expected(&["number"]));
        }
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
            self.pos += 1;
            if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            if digits(self) == 0 {
                return Err(self.expected(&["exponent digits"]));
            }
        }
        // The slice is ASCII by construction.
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii number");
        let value: f64 = text.parse().map_err(|_| ExprError::Syntax {
            offset: start,
            expected: vec!["number".into()],
        })?;
        Ok(Expression::num(value))
    }

    fn identifier(&mut self) -> Result<Expression, ExprError> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
        if let Some(f) = Func::from_name(name) {
            if !self.eat(b'(') {
                return Err(self.expected(&["'('"]));
            }
            let arg = self.expr()?;
            if !self.eat(b')') {
                return Err(self.expected(&["')'"]));
            }
            return Ok(Expression::func(f, arg));
        }
        match Var::from_name(name) {
            Some(v) => Ok(Expression::var(v)),
            None => Err(ExprError::UnknownIdentifier {
                name: name.to_string(),
                offset: start,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Node;

    fn v(name: &str) -> Expression {
        Expression::var(Var::from_name(name).unwrap())
    }

    #[test]
    fn product_of_two_variables() {
        assert_eq!(parse("x1*x2").unwrap(), Expression::mul(v("x1"), v("x2")));
    }

    #[test]
    fn leading_minus_negates_the_product() {
        let expected = Expression::func(
            Func::Exp,
            Expression::neg(Expression::mul(
                Expression::num(2.0),
                Expression::add(v("x1"), v("x2")),
            )),
        );
        assert_eq!(parse("exp(-2*(x1+x2))").unwrap(), expected);
        assert_eq!(
            parse("-x1^2").unwrap(),
            Expression::neg(Expression::pow(v("x1"), Expression::num(2.0)))
        );
    }

    #[test]
    fn malformed_operator_reports_offset() {
        match parse("2*^x1") {
            Err(ExprError::Syntax { offset, expected }) => {
                assert_eq!(offset, 2);
                assert!(!expected.is_empty());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn power_is_right_associative() {
        let e = parse("t^2^3").unwrap();
        assert_eq!(
            e,
            Expression::pow(
                v("t"),
                Expression::pow(Expression::num(2.0), Expression::num(3.0))
            )
        );
        let e = parse("p1^-1").unwrap();
        assert_eq!(e, Expression::pow(v("p1"), Expression::neg(Expression::num(1.0))));
    }

    #[test]
    fn subtraction_is_left_associative() {
        let e = parse("x1 - x2 - x3").unwrap();
        assert_eq!(e, Expression::sub(Expression::sub(v("x1"), v("x2")), v("x3")));
    }

    #[test]
    fn numbers_with_exponents() {
        assert_eq!(parse("1.5e-3").unwrap().as_num(), Some(1.5e-3));
        assert_eq!(parse(".25").unwrap().as_num(), Some(0.25));
        assert_eq!(parse("2E+2").unwrap().as_num(), Some(200.0));
        assert!(matches!(parse("1e"), Err(ExprError::Syntax { .. })));
    }

    #[test]
    fn unknown_identifiers_and_bad_calls() {
        assert!(matches!(
            parse("y1 + 1"),
            Err(ExprError::UnknownIdentifier { offset: 0, .. })
        ));
        assert!(matches!(
            parse("2 + tan(x1)"),
            Err(ExprError::UnknownIdentifier { offset: 4, .. })
        ));
        assert!(matches!(parse("exp x1"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse("(x1"), Err(ExprError::Syntax { offset: 3, .. })));
        assert!(matches!(parse(""), Err(ExprError::Syntax { offset: 0, .. })));
        assert!(matches!(parse("x1 x2"), Err(ExprError::Syntax { offset: 3, .. })));
    }

    #[test]
    fn whitespace_is_ignored() {
        assert_eq!(parse(" sin ( t ) ").unwrap(), parse("sin(t)").unwrap());
        assert!(matches!(parse("sin(t)").unwrap().node(), Node::Func(Func::Sin, _)));
    }
}
