//! Recursive-descent parser for component expressions.
//!
//! Grammar (binding tightness increases downward; `+ -` bind loosest, unary
//! minus binds tightest, so `-x^2` is `(-x)^2`):
//!
//! ```text
//! expr   := term  (('+' | '-') term)*
//! term   := power (('*' | '/') power)*
//! power  := unary ('^' int)*            // int := '-'? digits
//! unary  := '-' unary | atom
//! atom   := number | 'i' | name '(' expr ')' | name | '(' expr ')'
//! number := digits ('.' digits)? (('e'|'E') ('+'|'-')? digits)?
//! name   := alpha (alnum | '_')*
//! ```
//!
//! `+ - * /` are left-associative. Offsets in errors are byte offsets into
//! the source string. Constant subtrees are folded by the AST constructors,
//! so `3*i` parses to the single constant `3i` and the printed form of any
//! constant re-parses to the identical tree.
//!
//! Nesting depth is capped so that adversarial inputs (e.g. ten thousand
//! opening parentheses) fail cleanly instead of exhausting the stack.

use super::{Expr, Func};
use crate::error::Error;
use crate::Result;

/// Maximum structural nesting depth accepted by the parser.
pub const MAX_DEPTH: usize = 512;

/// Parse `src` into an [`Expr`], resolving identifiers against `coords`.
pub fn parse(src: &str, coords: &[String]) -> Result<Expr> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        coords,
    };
    let e = p.parse_expr(0)?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err(p.pos, "unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    coords: &'a [String],
}

impl<'a> Parser<'a> {
    fn err(&self, offset: usize, message: impl Into<String>) -> Error {
        Error::Syntax {
            offset,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(&b) = self.src.get(self.pos) {
            if b == b' ' || b == b'\t' || b == b'\n' || b == b'\r' {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse_expr(&mut self, depth: usize) -> Result<Expr> {
        if depth > MAX_DEPTH {
            return Err(self.err(self.pos, "expression nesting too deep"));
        }
        let mut lhs = self.parse_term(depth)?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.parse_term(depth)?;
                    lhs = Expr::add(lhs, rhs);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.parse_term(depth)?;
                    lhs = Expr::sub(lhs, rhs);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_term(&mut self, depth: usize) -> Result<Expr> {
        let mut lhs = self.parse_power(depth)?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.parse_power(depth)?;
                    lhs = Expr::mul(lhs, rhs);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.parse_power(depth)?;
                    lhs = Expr::div(lhs, rhs);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_power(&mut self, depth: usize) -> Result<Expr> {
        let mut base = self.parse_unary(depth)?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.parse_int_exponent()?;
            base = Expr::pow_int(base, k);
        }
        Ok(base)
    }

    fn parse_unary(&mut self, depth: usize) -> Result<Expr> {
        if depth > MAX_DEPTH {
            return Err(self.err(self.pos, "expression nesting too deep"));
        }
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let inner = self.parse_unary(depth + 1)?;
            return Ok(Expr::neg(inner));
        }
        self.parse_atom(depth)
    }

    fn parse_atom(&mut self, depth: usize) -> Result<Expr> {
        match self.peek() {
            None => Err(self.err(self.pos, "expected expression, found end of input")),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_expr(depth + 1)?;
                if self.peek() == Some(b')') {
                    self.pos += 1;
                    Ok(inner)
                } else {
                    Err(self.err(self.pos, "expected `)`"))
                }
            }
            Some(b) if b.is_ascii_digit() => self.parse_number(),
            Some(b) if b.is_ascii_alphabetic() => self.parse_identifier(depth),
            Some(b) => Err(self.err(
                self.pos,
                format!("expected expression, found `{}`", b as char),
            )),
        }
    }

    fn parse_int_exponent(&mut self) -> Result<i32> {
        self.skip_ws();
        let start = self.pos;
        let negative = if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let digits_start = self.pos;
        while matches!(self.src.get(self.pos), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.err(start, "expected integer exponent after `^`"));
        }
        let text = std::str::from_utf8(&self.src[digits_start..self.pos]).expect("ascii digits");
        let magnitude: i64 = text
            .parse()
            .map_err(|_| self.err(start, "integer exponent out of range"))?;
        let signed = if negative { -magnitude } else { magnitude };
        i32::try_from(signed).map_err(|_| self.err(start, "integer exponent out of range"))
    }

    fn parse_number(&mut self) -> Result<Expr> {
        let start = self.pos;
        while matches!(self.src.get(self.pos), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            let frac_start = self.pos;
            while matches!(self.src.get(self.pos), Some(b) if b.is_ascii_digit()) {
                self.pos += 1;
            }
            if self.pos == frac_start {
                return Err(self.err(self.pos, "expected digits after decimal point"));
            }
        }
        if matches!(self.src.get(self.pos), Some(&b'e') | Some(&b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(&b'+') | Some(&b'-')) {
                self.pos += 1;
            }
            let exp_start = self.pos;
            while matches!(self.src.get(self.pos), Some(b) if b.is_ascii_digit()) {
                self.pos += 1;
            }
            if self.pos == exp_start {
                // Not an exponent after all; give the suffix back (it may be
                // an identifier boundary, which the caller will reject).
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii number");
        let value: f64 = text
            .parse()
            .map_err(|_| self.err(start, format!("invalid number `{text}`")))?;
        if !value.is_finite() {
            return Err(self.err(start, format!("number `{text}` overflows")));
        }
        Ok(Expr::real(value))
    }

    fn parse_identifier(&mut self, depth: usize) -> Result<Expr> {
        let start = self.pos;
        while matches!(self.src.get(self.pos), Some(b) if b.is_ascii_alphanumeric() || *b == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");

        if self.peek() == Some(b'(') {
            let node: fn(Expr) -> Expr = if name == "re" {
                Expr::re_of
            } else if name == "im" {
                Expr::im_of
            } else if let Some(f) = Func::by_name(name) {
                move_func(f)
            } else {
                return Err(Error::UnknownIdentifier {
                    name: name.to_string(),
                    offset: start,
                });
            };
            self.pos += 1; // consume '('
            let arg = self.parse_expr(depth + 1)?;
            if self.peek() == Some(b')') {
                self.pos += 1;
                return Ok(node(arg));
            }
            return Err(self.err(self.pos, "expected `)`"));
        }

        if name == "i" {
            return Ok(Expr::i());
        }
        if let Some(j) = self.coords.iter().position(|c| c == name) {
            return Ok(Expr::Var(j));
        }
        Err(Error::UnknownIdentifier {
            name: name.to_string(),
            offset: start,
        })
    }
}

/// Build a constructor closure for a fixed function tag (kept out of the
/// match above so every arm has the same `fn(Expr) -> Expr` type).
fn move_func(f: Func) -> fn(Expr) -> Expr {
    match f {
        Func::Sqrt => |a| Expr::func(Func::Sqrt, a),
        Func::Exp => |a| Expr::func(Func::Exp, a),
        Func::Log => |a| Expr::func(Func::Log, a),
        Func::Sin => |a| Expr::func(Func::Sin, a),
        Func::Cos => |a| Expr::func(Func::Cos, a),
        Func::Sinh => |a| Expr::func(Func::Sinh, a),
        Func::Cosh => |a| Expr::func(Func::Cosh, a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn coords(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_polynomial_with_precedence() {
        let cs = coords(&["x1", "x2"]);
        let e = parse("x1^2 + 2*x2", &cs).unwrap();
        assert_eq!(
            e,
            Expr::Add(
                Box::new(Expr::PowInt(Box::new(Expr::Var(0)), 2)),
                Box::new(Expr::Mul(
                    Box::new(Expr::real(2.0)),
                    Box::new(Expr::Var(1))
                )),
            )
        );
    }

    #[test]
    fn unary_minus_binds_tighter_than_power() {
        let cs = coords(&["x1"]);
        let e = parse("-x1^2", &cs).unwrap();
        assert_eq!(
            e,
            Expr::PowInt(Box::new(Expr::Neg(Box::new(Expr::Var(0)))), 2)
        );
    }

    #[test]
    fn rational_metric_component_parses() {
        let cs = coords(&["z1"]);
        let e = parse("1 + z1^2/(1 - z1*z1)", &cs).unwrap();
        let expected = Expr::Add(
            Box::new(Expr::real(1.0)),
            Box::new(Expr::Div(
                Box::new(Expr::PowInt(Box::new(Expr::Var(0)), 2)),
                Box::new(Expr::Sub(
                    Box::new(Expr::real(1.0)),
                    Box::new(Expr::Mul(Box::new(Expr::Var(0)), Box::new(Expr::Var(0)))),
                )),
            )),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn complex_constants_fold() {
        let cs = coords(&[]);
        assert_eq!(
            parse("(2 + 3*i)", &cs).unwrap(),
            Expr::Const(Complex64::new(2.0, 3.0))
        );
        assert_eq!(
            parse("3*i", &cs).unwrap(),
            Expr::Const(Complex64::new(0.0, 3.0))
        );
        assert_eq!(
            parse("-i", &cs).unwrap(),
            Expr::Const(Complex64::new(0.0, -1.0))
        );
    }

    #[test]
    fn error_offsets_point_at_the_problem() {
        let cs = coords(&["x1"]);
        match parse("x1 + * 2", &cs) {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match parse("x1 + y3", &cs) {
            Err(Error::UnknownIdentifier { name, offset }) => {
                assert_eq!(name, "y3");
                assert_eq!(offset, 5);
            }
            other => panic!("expected unknown identifier, got {other:?}"),
        }
    }

    #[test]
    fn negative_and_chained_exponents() {
        let cs = coords(&["x1"]);
        assert_eq!(
            parse("x1^-2", &cs).unwrap(),
            Expr::PowInt(Box::new(Expr::Var(0)), -2)
        );
        assert_eq!(
            parse("x1^2^3", &cs).unwrap(),
            Expr::PowInt(Box::new(Expr::PowInt(Box::new(Expr::Var(0)), 2)), 3)
        );
    }

    #[test]
    fn deep_nesting_errors_instead_of_overflowing() {
        let cs = coords(&["x1"]);
        let src = format!("{}x1{}", "(".repeat(5000), ")".repeat(5000));
        match parse(&src, &cs) {
            Err(Error::Syntax { message, .. }) => {
                assert!(message.contains("too deep"), "message: {message}")
            }
            other => panic!("expected depth error, got {other:?}"),
        }
    }

    #[test]
    fn trailing_garbage_rejected() {
        let cs = coords(&["x1"]);
        assert!(matches!(
            parse("x1 x1", &cs),
            Err(Error::Syntax { offset: 3, .. })
        ));
    }
}
