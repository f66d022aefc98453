//! Recursive-descent parsers for the textual forms.
//!
//! Series expressions follow the grammar
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ('^' rational)?
//! atom   := rational | 'e' | 'i' | '(' expr ')' | 'sqrt(' expr ')'
//! ```
//!
//! where `e` denotes the positive infinitesimal. Scalar strings (used as
//! coefficients in JSON) use the decimal-free forms "p/q",
//! "p/q + r/s*sqrt(d)" and "... + (...)*i".

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::scalar::{ExactScalar, Rational};
use crate::series::{SeriesCtx, ValSeries};

/// Parses a series expression against a precision context.
pub fn parse_expr(text: &str, ctx: &SeriesCtx) -> Result<ValSeries> {
    let mut p = Cursor::new(text);
    let v = expr(&mut p, ctx)?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.err("end of input or an operator"));
    }
    Ok(v)
}

/// Parses a scalar in its decimal-free textual form.
pub fn parse_scalar(text: &str) -> Result<ExactScalar> {
    let mut p = Cursor::new(text);
    let v = scalar_sum(&mut p)?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.err("end of input or '+'/'-'"));
    }
    Ok(v)
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            src: text.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, expected: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            expected: expected.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8, what: &str) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.err(what))
        }
    }

    /// Consumes a keyword and requires a non-alphanumeric boundary after it.
    fn eat_word(&mut self, w: &str) -> bool {
        self.skip_ws();
        let bytes = w.as_bytes();
        if self.src.len() - self.pos < bytes.len() {
            return false;
        }
        if &self.src[self.pos..self.pos + bytes.len()] != bytes {
            return false;
        }
        if let Some(&next) = self.src.get(self.pos + bytes.len()) {
            if next.is_ascii_alphanumeric() {
                return false;
            }
        }
        self.pos += bytes.len();
        true
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("a number"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().expect("digit run parses"))
    }

    /// `['-'] digits ['/' digits]`. The fraction bar binds tightly (no
    /// whitespace), so a spaced `/` stays available as division.
    fn rational(&mut self) -> Result<Rational> {
        let neg = self.eat(b'-');
        let num = self.digits()?;
        let tight_slash = self.src.get(self.pos) == Some(&b'/')
            && self
                .src
                .get(self.pos + 1)
                .is_some_and(|c| c.is_ascii_digit());
        let den = if tight_slash {
            self.pos += 1;
            let d = self.digits()?;
            if d == BigInt::from(0) {
                return Err(Error::DivisionByZero);
            }
            d
        } else {
            BigInt::one()
        };
        let q = Rational::new(num, den);
        Ok(if neg { -q } else { q })
    }

    /// Exponent position: a rational, optionally parenthesised.
    fn exponent(&mut self) -> Result<Rational> {
        if self.eat(b'(') {
            let q = self.rational()?;
            self.expect(b')', "')'")?;
            Ok(q)
        } else {
            self.rational()
        }
    }
}

fn expr(p: &mut Cursor, ctx: &SeriesCtx) -> Result<ValSeries> {
    let mut acc = if p.peek() == Some(b'-') {
        p.pos += 1;
        -&term(p, ctx)?
    } else {
        term(p, ctx)?
    };
    loop {
        match p.peek() {
            Some(b'+') => {
                p.pos += 1;
                acc = &acc + &term(p, ctx)?;
            }
            Some(b'-') => {
                p.pos += 1;
                acc = &acc - &term(p, ctx)?;
            }
            _ => return Ok(acc),
        }
    }
}

fn term(p: &mut Cursor, ctx: &SeriesCtx) -> Result<ValSeries> {
    let mut acc = factor(p, ctx)?;
    loop {
        match p.peek() {
            Some(b'*') => {
                p.pos += 1;
                acc = &acc * &factor(p, ctx)?;
            }
            Some(b'/') => {
                p.pos += 1;
                acc = acc.div(&factor(p, ctx)?)?;
            }
            _ => return Ok(acc),
        }
    }
}

fn factor(p: &mut Cursor, ctx: &SeriesCtx) -> Result<ValSeries> {
    let base = atom(p, ctx)?;
    if p.peek() == Some(b'^') {
        p.pos += 1;
        let q = p.exponent()?;
        return base.pow_rational(&q);
    }
    Ok(base)
}

fn atom(p: &mut Cursor, ctx: &SeriesCtx) -> Result<ValSeries> {
    match p.peek() {
        Some(b'(') => {
            p.pos += 1;
            let v = expr(p, ctx)?;
            p.expect(b')', "')'")?;
            Ok(v)
        }
        Some(c) if c.is_ascii_digit() => {
            let q = p.rational()?;
            Ok(ValSeries::from_rational(q, ctx))
        }
        Some(b's') if p.eat_word("sqrt") => {
            p.expect(b'(', "'('")?;
            let v = expr(p, ctx)?;
            p.expect(b')', "')'")?;
            v.sqrt()
        }
        Some(b'e') if p.eat_word("e") => Ok(ValSeries::eps(ctx)),
        Some(b'i') if p.eat_word("i") => Ok(ValSeries::constant(ExactScalar::i(), ctx)),
        _ => Err(p.err("a number, 'e', 'i', '(', or 'sqrt('")),
    }
}

fn scalar_sum(p: &mut Cursor) -> Result<ExactScalar> {
    let mut acc = ExactScalar::zero();
    let mut first = true;
    loop {
        let neg = match p.peek() {
            Some(b'-') => {
                p.pos += 1;
                true
            }
            Some(b'+') if !first => {
                p.pos += 1;
                false
            }
            None if !first => return Ok(acc),
            Some(b')') if !first => return Ok(acc),
            _ if first => false,
            _ => return Err(p.err("'+', '-', or end")),
        };
        let t = scalar_term(p)?;
        acc = if neg {
            acc.checked_sub(&t)?
        } else {
            acc.checked_add(&t)?
        };
        first = false;
        match p.peek() {
            Some(b'+') | Some(b'-') => continue,
            Some(b')') | None => return Ok(acc),
            _ => return Err(p.err("'+', '-', or end")),
        }
    }
}

fn scalar_term(p: &mut Cursor) -> Result<ExactScalar> {
    match p.peek() {
        Some(b'(') => {
            p.pos += 1;
            let inner = scalar_sum(p)?;
            p.expect(b')', "')'")?;
            p.expect(b'*', "'*'")?;
            if !p.eat_word("i") {
                return Err(p.err("'i'"));
            }
            inner.checked_mul(&ExactScalar::i())
        }
        Some(b's') if p.eat_word("sqrt") => scalar_sqrt(p, Rational::one()),
        Some(b'i') if p.eat_word("i") => Ok(ExactScalar::i()),
        Some(c) if c.is_ascii_digit() => {
            let q = p.rational()?;
            if p.peek() == Some(b'*') {
                p.pos += 1;
                if p.eat_word("sqrt") {
                    return scalar_sqrt(p, q);
                }
                if p.eat_word("i") {
                    return ExactScalar::from_rational(q).checked_mul(&ExactScalar::i());
                }
                return Err(p.err("'sqrt(' or 'i'"));
            }
            Ok(ExactScalar::from_rational(q))
        }
        _ => Err(p.err("a number, 'i', '(', or 'sqrt('")),
    }
}

fn scalar_sqrt(p: &mut Cursor, coeff: Rational) -> Result<ExactScalar> {
    p.expect(b'(', "'('")?;
    let d = p.digits()?;
    p.expect(b')', "')'")?;
    let d = d
        .to_u64()
        .ok_or_else(|| Error::Unsupported("radicand too large".into()))?;
    ExactScalar::from_rational(coeff).checked_mul(&ExactScalar::sqrt_radicand(d)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn ctx() -> SeriesCtx {
        SeriesCtx::default()
    }

    #[test]
    fn direct_reading() {
        let v = parse_expr("1 + 2*e^(1/2) - e", &ctx()).unwrap();
        let terms: Vec<_> = v.terms().map(|(e, c)| (e, c.clone())).collect();
        assert_eq!(
            terms,
            vec![
                (rat_int(0), ExactScalar::one()),
                (rat(1, 2), ExactScalar::from_int(2)),
                (rat_int(1), ExactScalar::from_int(-1)),
            ]
        );
    }

    #[test]
    fn geometric_expansion() {
        let v = parse_expr("(1+e)^(-1)", &ctx()).unwrap();
        let x = parse_expr("1+e", &ctx()).unwrap();
        assert!((&v * &x).is_equiv(&ValSeries::one(&ctx())));
    }

    #[test]
    fn syntax_error_position() {
        match parse_expr("1 + + e", &ctx()) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn sqrt_of_two_forwards_extension_error() {
        match parse_expr("sqrt(2)", &ctx()) {
            Err(Error::ExtensionRequired(d)) => assert_eq!(d, BigInt::from(2)),
            other => panic!("expected extension error, got {other:?}"),
        }
    }

    #[test]
    fn division_and_powers() {
        let v = parse_expr("e^2 / e", &ctx()).unwrap();
        assert!(v.is_equiv(&ValSeries::eps(&ctx())));
        let w = parse_expr("(1 - e)^2", &ctx()).unwrap();
        let expect = parse_expr("1 - 2*e + e^2", &ctx()).unwrap();
        assert!(w.is_equiv(&expect));
    }

    #[test]
    fn imaginary_atom() {
        let v = parse_expr("(1 - 2/3*i)*e^2", &ctx()).unwrap();
        let c = v.coeff_at(&rat_int(2));
        assert_eq!(
            c,
            ExactScalar::with_parts(rat_int(1), rat_int(0), rat(-2, 3), rat_int(0), None)
                .unwrap()
        );
    }

    #[test]
    fn print_parse_roundtrip() {
        for text in [
            "1 + 2*e^(1/2) - e",
            "-e + e^2",
            "1/3",
            "0",
            "e^(-2) + 1",
            "(1 - 2/3*i)*e^2 + e^3",
        ] {
            let v = parse_expr(text, &ctx()).unwrap();
            let reparsed = parse_expr(&v.to_string(), &ctx()).unwrap();
            assert_eq!(v, reparsed, "roundtrip failed for {text}");
        }
    }

    #[test]
    fn scalar_roundtrip() {
        for text in [
            "3",
            "-1/2",
            "1/2 + 3/4*sqrt(5)",
            "1 - 2/3*i",
            "(1/2 - 1*sqrt(2))*i",
            "1/2 + 3/4*sqrt(5) + (1 - 1/2*sqrt(5))*i",
        ] {
            let s = parse_scalar(text).unwrap();
            let reparsed = parse_scalar(&s.to_string()).unwrap();
            assert_eq!(s, reparsed, "roundtrip failed for {text}");
        }
    }

    #[test]
    fn scalar_mixed_radicands_error() {
        assert!(matches!(
            parse_scalar("sqrt(2) + sqrt(5)"),
            Err(Error::IncompatibleExtension(2, 5))
        ));
    }
}
