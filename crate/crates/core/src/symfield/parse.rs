//! Small infix parser for rational expressions such as `f1 + a0/f0`.
//!
//! Identifiers must be registered, except `u<digits>` which are registered
//! as atoms on first use. `alpha<j>` is accepted as a synonym for `a<j>`.

use num_bigint::BigInt;

use super::{FieldError, Rf, VarRegistry};

pub fn parse_rf(src: &str, reg: &VarRegistry) -> Result<Rf, FieldError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        reg,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    reg: &'a VarRegistry,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> FieldError {
        FieldError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

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

    fn expr(&mut self) -> Result<Rf, FieldError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Rf, FieldError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary()?;
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.unary()?;
                acc = acc.try_div(&d).map_err(|_| FieldError::Parse {
                    pos: at,
                    msg: "division by zero".into(),
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Rf, FieldError> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Rf, FieldError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let neg = self.eat(b'-');
        let at = self.pos;
        let e = self.integer()?;
        let e: i64 = i64::try_from(e)
            .ok()
            .filter(|e| *e <= u32::MAX as i64)
            .ok_or_else(|| self.err("exponent too large"))?;
        base.pow(if neg { -e } else { e })
            .map_err(|_| FieldError::Parse {
                pos: at,
                msg: "zero raised to a negative power".into(),
            })
    }

    fn integer(&mut self) -> Result<BigInt, FieldError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn atom(&mut self) -> Result<Rf, FieldError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Rf::constant(self.integer()?)),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                self.ident(name, start)
            }
            _ => Err(self.err("expected expression")),
        }
    }

    fn ident(&self, name: &str, start: usize) -> Result<Rf, FieldError> {
        let canonical = match name.strip_prefix("alpha") {
            Some(rest) if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) => {
                format!("a{rest}")
            }
            _ => name.to_string(),
        };
        if let Some(v) = self.reg.lookup(&canonical) {
            return Ok(Rf::var(v));
        }
        let is_atom = canonical
            .strip_prefix('u')
            .is_some_and(|r| !r.is_empty() && r.bytes().all(|b| b.is_ascii_digit()));
        if is_atom {
            return Ok(Rf::var(self.reg.atom(&canonical)?));
        }
        Err(FieldError::Parse {
            pos: start,
            msg: format!("unknown variable '{name}'"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_matches_construction() {
        let reg = VarRegistry::with_rank(3);
        let a0 = Rf::var(reg.alpha(0).unwrap());
        let f0 = Rf::var(reg.f(0).unwrap());
        let f1 = Rf::var(reg.f(1).unwrap());
        let e = parse_rf("f1 + alpha0/f0", &reg).unwrap();
        assert!(e.rf_eq(&(&f1 + &(&a0 / &f0))));
        let e = parse_rf("-(f0 - a0)^2 * f0^-1", &reg).unwrap();
        let d = &f0 - &a0;
        assert!(e.rf_eq(&(-(&(&d * &d) / &f0))));
        let e = parse_rf("3/4 - 2*3", &reg).unwrap();
        assert_eq!(e.constant_value().unwrap().to_string(), "-21/4");
    }

    #[test]
    fn registers_u_atoms() {
        let reg = VarRegistry::with_rank(2);
        parse_rf("u01*a0", &reg).unwrap();
        assert!(reg.lookup("u01").is_some());
        assert!(matches!(
            parse_rf("g0 + 1", &reg),
            Err(FieldError::Parse { pos: 0, .. })
        ));
        assert!(parse_rf("(f0", &reg).is_err());
        assert!(parse_rf("f0 f1", &reg).is_err());
        assert!(parse_rf("1/(f0-f0)", &reg).is_err());
    }
}
