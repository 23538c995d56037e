//! Scalar expressions for `--a` and `--c`.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('+' | '-') unary | power
//! power := atom ('^' unary)?
//! atom  := number 'i'? | 'i' | 'sqrt' '(' expr ')' | '(' expr ')'
//! ```
//!
//! So `1+sqrt(2)`, `1-1/sqrt(2)`, `1+4^(1/4)/sqrt(3)`, `0.5-2i` and `3` all
//! parse. Evaluation is in complex binary64.

use eqlf_core::Complex64;

pub fn parse(text: &str) -> Result<Complex64, String> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err("empty scalar expression".into());
    }
    let mut p = Parser { chars, pos: 0 };
    let value = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(format!(
            "unexpected '{}' at position {} in \"{text}\"",
            p.chars[p.pos], p.pos
        ));
    }
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(format!("\"{text}\" does not evaluate to a finite number"));
    }
    Ok(Complex64::new(value.re, if value.im == 0.0 { 0.0 } else { value.im }))
}

/// Parses a real scalar; a non-zero imaginary part is an error.
pub fn parse_real(text: &str) -> Result<f64, String> {
    let z = parse(text)?;
    if z.im != 0.0 {
        return Err(format!("\"{text}\" is not real"));
    }
    Ok(z.re)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), String> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(match self.peek() {
                Some(found) => format!("expected '{c}' at position {}, found '{found}'", self.pos),
                None => format!("expected '{c}' at end of expression"),
            })
        }
    }

    fn expr(&mut self) -> Result<Complex64, String> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc += self.term()?;
            } else if self.eat('-') {
                acc -= self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Complex64, String> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc *= self.unary()?;
            } else if self.eat('/') {
                let rhs = self.unary()?;
                if rhs == Complex64::new(0.0, 0.0) {
                    return Err("division by zero".into());
                }
                acc = div(acc, rhs);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Complex64, String> {
        if self.eat('-') {
            Ok(-self.unary()?)
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Complex64, String> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let exp = self.unary()?;
        if base.im == 0.0 && exp.im == 0.0 && base.re >= 0.0 {
            Ok(Complex64::new(base.re.powf(exp.re), 0.0))
        } else {
            Ok(base.powc(exp))
        }
    }

    fn atom(&mut self) -> Result<Complex64, String> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some('i') => {
                self.pos += 1;
                Ok(Complex64::new(0.0, 1.0))
            }
            Some('s') => {
                for c in "sqrt".chars() {
                    self.expect(c)?;
                }
                self.expect('(')?;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(sqrt(v))
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
                    self.pos += 1;
                }
                if matches!(self.peek(), Some('e' | 'E')) {
                    self.pos += 1;
                    if matches!(self.peek(), Some('+' | '-')) {
                        self.pos += 1;
                    }
                    while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        self.pos += 1;
                    }
                }
                let lit: String = self.chars[start..self.pos].iter().collect();
                let x: f64 = lit.parse().map_err(|_| format!("bad number \"{lit}\""))?;
                if self.eat('i') {
                    Ok(Complex64::new(0.0, x))
                } else {
                    Ok(Complex64::new(x, 0.0))
                }
            }
            Some(c) => Err(format!("unexpected '{c}' at position {}", self.pos)),
            None => Err("expression ends too early".into()),
        }
    }
}

// Real operands stay on the real f64 path so `1+sqrt(2)` is bit-identical
// to `1.0 + 2f64.sqrt()`.
fn sqrt(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re >= 0.0 {
        Complex64::new(z.re.sqrt(), 0.0)
    } else if z.im == 0.0 {
        // Negation leaves -0.0 behind; take the principal root regardless.
        Complex64::new(0.0, (-z.re).sqrt())
    } else {
        z.sqrt()
    }
}

fn div(a: Complex64, b: Complex64) -> Complex64 {
    if a.im == 0.0 && b.im == 0.0 {
        Complex64::new(a.re / b.re, 0.0)
    } else {
        a / b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn canonical_scalars_are_exact() {
        assert_eq!(parse("1+sqrt(2)").unwrap(), c(1.0 + 2f64.sqrt(), 0.0));
        assert_eq!(parse("1 - sqrt(2)").unwrap(), c(1.0 - 2f64.sqrt(), 0.0));
        assert_eq!(parse("1-1/sqrt(2)").unwrap(), c(1.0 - 1.0 / 2f64.sqrt(), 0.0));
        assert_eq!(parse("2.5").unwrap(), c(2.5, 0.0));
        assert_eq!(parse("1e-3").unwrap(), c(1e-3, 0.0));
        assert_eq!(parse("3*sqrt(5)+1").unwrap(), c(3.0 * 5f64.sqrt() + 1.0, 0.0));
    }

    #[test]
    fn complex_forms() {
        assert_eq!(parse("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse("2i").unwrap(), c(0.0, 2.0));
        assert_eq!(parse("1-2i").unwrap(), c(1.0, -2.0));
        assert_eq!(parse("(1+i)*(1-i)").unwrap(), c(2.0, 0.0));
        assert_eq!(parse("sqrt(-4)").unwrap(), c(0.0, 2.0));
        assert_eq!(parse("-(3)").unwrap(), c(-3.0, 0.0));
    }

    #[test]
    fn precedence_and_powers() {
        assert_eq!(parse("1+2*3").unwrap(), c(7.0, 0.0));
        assert_eq!(parse("(1+2)*3").unwrap(), c(9.0, 0.0));
        assert_eq!(parse("8/2/2").unwrap(), c(2.0, 0.0));
        assert_eq!(parse("16^(1/4)").unwrap(), c(2.0, 0.0));
        assert_eq!(parse("-2^2").unwrap(), c(-4.0, 0.0));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1+", "sqr(2)", "(1", "1)", "2x", "1..2", "1/0", "abc"] {
            assert!(parse(bad).is_err(), "{bad:?}");
        }
        assert!(parse_real("1+i").is_err());
        assert_eq!(parse_real("2").unwrap(), 2.0);
    }
}
