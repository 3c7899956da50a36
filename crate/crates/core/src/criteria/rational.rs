//! Univariate rational functions over ℚ in the variable `t`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{One, Zero};

use crate::error::{Result, WorkbenchError};
use crate::polyalg::{fmt_rational, Polynomial, Q};

/// Dense univariate polynomial, coefficients ascending, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct UPoly(Vec<Q>);

impl UPoly {
    fn trimmed(mut v: Vec<Q>) -> Self {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        UPoly(v)
    }

    fn constant(c: Q) -> Self {
        UPoly::trimmed(vec![c])
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &Q {
        self.0.last().unwrap()
    }

    fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        let z = Q::zero();
        UPoly::trimmed((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect())
    }

    fn neg(&self) -> UPoly {
        UPoly(self.0.iter().map(|c| -c.clone()).collect())
    }

    fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly(Vec::new());
        }
        let mut v = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UPoly::trimmed(v)
    }

    fn scale(&self, c: &Q) -> UPoly {
        UPoly::trimmed(self.0.iter().map(|a| a * c).collect())
    }

    fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        let mut q = vec![Q::zero(); self.0.len().saturating_sub(d.degree())];
        let inv = d.lead().recip();
        while r.len() >= d.0.len() && !r.is_empty() {
            let shift = r.len() - d.0.len();
            let c = r.last().unwrap() * &inv;
            for (i, b) in d.0.iter().enumerate() {
                r[shift + i] -= &c * b;
            }
            q[shift] = c;
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        (UPoly::trimmed(q), UPoly::trimmed(r))
    }

    fn monic_gcd(a: &UPoly, b: &UPoly) -> UPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            let inv = a.lead().recip();
            a.scale(&inv)
        }
    }

    /// Order of vanishing at `t = 0`.
    fn ord(&self) -> usize {
        self.0.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }
}

/// An element of `ℚ(t)` in canonical form: monic denominator, coprime parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: UPoly,
    den: UPoly,
}

impl RationalFunction {
    fn canonical(num: UPoly, den: UPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(WorkbenchError::Parse { message: "zero denominator".into(), offset: 0 });
        }
        if num.is_zero() {
            return Ok(RationalFunction::zero());
        }
        let g = UPoly::monic_gcd(&num, &den);
        let (num, den) = (num.divrem(&g).0, den.divrem(&g).0);
        let inv = den.lead().recip();
        Ok(RationalFunction { num: num.scale(&inv), den: den.scale(&inv) })
    }

    /// `num / den` with coefficients ascending in `t`.
    pub fn new(num: Vec<Q>, den: Vec<Q>) -> Result<Self> {
        RationalFunction::canonical(UPoly::trimmed(num), UPoly::trimmed(den))
    }

    pub fn zero() -> Self {
        RationalFunction { num: UPoly(Vec::new()), den: UPoly(vec![Q::one()]) }
    }

    pub fn one() -> Self {
        RationalFunction::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        RationalFunction { num: UPoly::constant(c), den: UPoly(vec![Q::one()]) }
    }

    pub fn t() -> Self {
        RationalFunction { num: UPoly(vec![Q::zero(), Q::one()]), den: UPoly(vec![Q::one()]) }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numerator(&self) -> &[Q] {
        &self.num.0
    }

    pub fn denominator(&self) -> &[Q] {
        &self.den.0
    }

    /// `ord_t(num) − ord_t(den)`; `None` stands for `+∞` at zero.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.num.ord() as i64 - self.den.ord() as i64)
        }
    }

    /// Whether the element lies in `ℚ[t]_(t)`.
    pub fn is_integral(&self) -> bool {
        self.valuation().is_none_or(|v| v >= 0)
    }

    /// Residue at `t = 0` of an integral element.
    pub fn residue(&self) -> Option<Q> {
        if !self.is_integral() {
            return None;
        }
        Some(self.num.eval(&Q::zero()) / self.den.eval(&Q::zero()))
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            RationalFunction::canonical(self.den.clone(), self.num.clone()).ok()
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(RationalFunction::one(), |acc, _| &acc * self)
    }

    /// Evaluates a polynomial at the given images of its variables.
    pub fn evaluate(f: &Polynomial, images: &[RationalFunction]) -> RationalFunction {
        assert_eq!(f.nvars(), images.len(), "ambient mismatch");
        let mut total = RationalFunction::zero();
        for (m, c) in f.terms() {
            let mut term = RationalFunction::constant(c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    term = &term * &images[i].pow(e);
                }
            }
            total = &total + &term;
        }
        total
    }

    /// Parses `+ - * / ^`, parentheses, rationals and `t`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser { s: text.as_bytes(), pos: 0 };
        let r = p.expr()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.err("unexpected character"));
        }
        Ok(r)
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        RationalFunction::zero()
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, o: &RationalFunction) -> RationalFunction {
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        RationalFunction::canonical(num, self.den.mul(&o.den)).unwrap()
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, o: &RationalFunction) -> RationalFunction {
        self + &-o
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, o: &RationalFunction) -> RationalFunction {
        RationalFunction::canonical(self.num.mul(&o.num), self.den.mul(&o.den)).unwrap()
    }
}

impl Div for &RationalFunction {
    type Output = Option<RationalFunction>;
    fn div(self, o: &RationalFunction) -> Option<RationalFunction> {
        o.inverse().map(|inv| self * &inv)
    }
}

fn fmt_upoly(p: &UPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, c) in p.0.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = *c < Q::zero();
        let a = if neg { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => "t".into(),
            _ => format!("t^{i}"),
        };
        if mono.is_empty() {
            out.push_str(&fmt_rational(&a));
        } else if a.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{}*{}", fmt_rational(&a), mono));
        }
    }
    out
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = fmt_upoly(&self.num);
        if self.den.degree() == 0 {
            return write!(f, "{num}");
        }
        let wrap = |s: String, p: &UPoly| {
            if p.0.iter().filter(|c| !c.is_zero()).count() > 1 || s.contains('/') {
                format!("({s})")
            } else {
                s
            }
        };
        write!(f, "{}/{}", wrap(num, &self.num), wrap(fmt_upoly(&self.den), &self.den))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, message: &str) -> WorkbenchError {
        WorkbenchError::Parse { message: message.into(), offset: self.pos }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -&self.term()?
            }
            _ => self.term()?,
        };
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.power()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let at = self.pos;
            let rhs = self.power()?;
            acc = if c == b'*' {
                &acc * &rhs
            } else {
                (&acc / &rhs).ok_or(WorkbenchError::Parse { message: "division by zero".into(), offset: at })?
            };
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.natural()?;
            let e = u32::try_from(e).map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn natural(&mut self) -> Result<num::BigInt> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().unwrap())
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let r = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(r)
            }
            Some(b't') => {
                self.pos += 1;
                Ok(RationalFunction::t())
            }
            Some(c) if c.is_ascii_digit() => Ok(RationalFunction::constant(Q::from_integer(self.natural()?))),
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.power()?)
            }
            None => Err(self.err("unexpected end of input")),
            Some(_) => Err(self.err("unexpected character")),
        }
    }
}
