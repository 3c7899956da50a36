use num::{BigInt, Zero};

use crate::error::{Result, WorkbenchError};
use crate::polyalg::{Monomial, Polynomial, Q};

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Lexer<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err(&self, message: &str, offset: usize) -> WorkbenchError {
        WorkbenchError::Parse { message: message.into(), offset }
    }

    fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (start != self.pos).then(|| std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().unwrap())
    }

    fn ident(&mut self) -> Option<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphabetic() || self.s[self.pos] == b'_') {
            self.pos += 1;
            while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                self.pos += 1;
            }
            Some((std::str::from_utf8(&self.s[start..self.pos]).unwrap().to_string(), start))
        } else {
            None
        }
    }
}

/// Parses `expr := term (('+'|'-') term)*`, `term := coeff ('*' factor)* | factor ('*' factor)*`,
/// `factor := var ('^' nat)?`, `coeff := int | int '/' posint`, with an optional leading sign.
pub fn parse_polynomial(text: &str, vars: &[String]) -> Result<Polynomial> {
    let n = vars.len();
    let mut lx = Lexer { s: text.as_bytes(), pos: 0 };
    if lx.peek().is_none() {
        return Err(lx.err("empty input", lx.pos));
    }
    let mut total = Polynomial::zero(n);
    let mut sign = match lx.peek() {
        Some(b'-') => {
            lx.pos += 1;
            -1
        }
        Some(b'+') => {
            lx.pos += 1;
            1
        }
        _ => 1,
    };
    loop {
        let term = parse_term(&mut lx, vars)?;
        total = if sign > 0 { &total + &term } else { &total - &term };
        match lx.peek() {
            None => break,
            Some(b'+') => sign = 1,
            Some(b'-') => sign = -1,
            Some(_) => return Err(lx.err("expected `+`, `-` or `*`", lx.pos)),
        }
        lx.pos += 1;
    }
    Ok(total)
}

fn parse_term(lx: &mut Lexer<'_>, vars: &[String]) -> Result<Polynomial> {
    let n = vars.len();
    let mut coeff = Q::from_integer(1.into());
    let mut exps = vec![0u32; n];
    let at = {
        lx.skip_ws();
        lx.pos
    };
    let mut need_factor = true;
    if let Some(num) = lx.integer() {
        coeff = Q::from_integer(num);
        if lx.peek() == Some(b'/') {
            lx.pos += 1;
            let den_at = {
                lx.skip_ws();
                lx.pos
            };
            let den = lx.integer().ok_or_else(|| lx.err("malformed rational", den_at))?;
            if den.is_zero() {
                return Err(lx.err("malformed rational: zero denominator", den_at));
            }
            coeff /= Q::from_integer(den);
        }
        need_factor = false;
    }
    loop {
        if need_factor {
            let (name, start) = match lx.ident() {
                Some(v) => v,
                None if lx.peek().is_none() => return Err(lx.err("unexpected end of input", lx.pos)),
                None => return Err(lx.err("expected a variable or coefficient", lx.pos.max(at))),
            };
            let i =
                vars.iter().position(|v| *v == name).ok_or(WorkbenchError::UnknownVariable { name, offset: start })?;
            let mut e = 1u32;
            if lx.peek() == Some(b'^') {
                lx.pos += 1;
                let e_at = lx.pos;
                let v = lx.integer().ok_or_else(|| lx.err("expected an exponent", e_at))?;
                e = u32::try_from(v).map_err(|_| lx.err("exponent too large", e_at))?;
            }
            exps[i] += e;
        }
        if lx.peek() == Some(b'*') {
            lx.pos += 1;
            need_factor = true;
        } else {
            break;
        }
    }
    Ok(Polynomial::monomial(Monomial::from_exponents(exps), coeff))
}

/// Comma-separated polynomials, commas at the top level.
pub fn parse_polynomial_list(text: &str, vars: &[String]) -> Result<Vec<Polynomial>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split(',') {
        out.push(parse_polynomial(part, vars).map_err(|e| shift(e, offset))?);
        offset += part.len() + 1;
    }
    Ok(out)
}

fn shift(e: WorkbenchError, by: usize) -> WorkbenchError {
    match e {
        WorkbenchError::Parse { message, offset } => WorkbenchError::Parse { message, offset: offset + by },
        WorkbenchError::UnknownVariable { name, offset } => {
            WorkbenchError::UnknownVariable { name, offset: offset + by }
        }
        e => e,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn spec_grammar() {
        let xy = names(&["x", "y"]);
        let p = parse_polynomial("x^2*y - 3/4", &xy).unwrap();
        assert_eq!(p.display(&xy), "x^2*y - 3/4");
        let uw = names(&["u", "w"]);
        assert_eq!(parse_polynomial("u*w - 1", &uw).unwrap().display(&uw), "u*w - 1");
        assert_eq!(parse_polynomial(" -2 * x + 0", &xy).unwrap().display(&xy), "-2*x");
        assert_eq!(parse_polynomial("x*x*y^0", &xy).unwrap().display(&xy), "x^2");
    }

    #[test]
    fn errors_carry_offsets() {
        let x = names(&["x"]);
        assert_eq!(
            parse_polynomial("x + q", &x).unwrap_err(),
            WorkbenchError::UnknownVariable { name: "q".into(), offset: 4 }
        );
        assert!(matches!(parse_polynomial("3/", &x), Err(WorkbenchError::Parse { offset: 2, .. })));
        assert!(matches!(parse_polynomial("3/0*x", &x), Err(WorkbenchError::Parse { offset: 2, .. })));
        assert!(matches!(parse_polynomial("   ", &x), Err(WorkbenchError::Parse { .. })));
        assert!(matches!(parse_polynomial("x +", &x), Err(WorkbenchError::Parse { offset: 3, .. })));
        let list = parse_polynomial_list("x, x - z", &x).unwrap_err();
        assert_eq!(list, WorkbenchError::UnknownVariable { name: "z".into(), offset: 7 });
    }
}
