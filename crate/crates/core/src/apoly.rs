//! The coefficient ring A = F_q[T].
//!
//! Polynomials are dense coefficient vectors (index = degree) over F_q with
//! no trailing zeros. The zero polynomial has degree `None`, which orders
//! strictly below every real degree.
//!
//! Text format (reports and CLI input): ascending dense terms such as
//! `2+0*T+1*T^2`. A coefficient is an integer reduced mod p, or `{k}` for the
//! F_q element with index `k` (needed only when q is not prime). The parser
//! also accepts sparse input in any order, with `-`, implicit coefficients and
//! whitespace: `T^3 - T`, `2*T^2+1`, `{4}T + 1`.

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::{Base, FieldCtx, FqElem, Gf, LElem};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct APoly {
    c: Vec<FqElem>,
}

impl std::fmt::Debug for APoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let idx: Vec<u32> = self.c.iter().map(|e| e.index()).collect();
        write!(f, "APoly{idx:?}")
    }
}

impl Ord for APoly {
    /// Degree first, then coefficients from the top down in element order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.c
            .len()
            .cmp(&other.c.len())
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}

impl PartialOrd for APoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl APoly {
    pub fn zero() -> Self {
        APoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        APoly { c: vec![FqElem::ONE] }
    }

    /// The variable T.
    pub fn x() -> Self {
        APoly { c: vec![FqElem::ZERO, FqElem::ONE] }
    }

    pub fn constant(a: FqElem) -> Self {
        Self::from_coeffs(vec![a])
    }

    pub fn monomial(a: FqElem, k: usize) -> Self {
        let mut c = vec![FqElem::ZERO; k + 1];
        c[k] = a;
        Self::from_coeffs(c)
    }

    pub fn from_coeffs(mut c: Vec<FqElem>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        APoly { c }
    }

    /// Integer coefficients reduced mod p, constant first.
    pub fn from_ints(c: &[i64], f: &Gf<Base>) -> Self {
        Self::from_coeffs(c.iter().map(|&v| f.from_int(v)).collect())
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.c.get(i).copied().unwrap_or(FqElem::ZERO)
    }

    /// `None` encodes deg(0) = −∞.
    pub fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with −1 standing in for −∞; handy for arithmetic comparisons.
    pub fn deg_i(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lead(&self) -> FqElem {
        self.c.last().copied().unwrap_or(FqElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == FqElem::ONE
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == FqElem::ONE
    }

    pub fn add(&self, o: &Self, f: &Gf<Base>) -> Self {
        let (long, short) = if self.c.len() >= o.c.len() { (self, o) } else { (o, self) };
        let mut c = long.c.clone();
        for (i, &b) in short.c.iter().enumerate() {
            c[i] = f.add(c[i], b);
        }
        Self::from_coeffs(c)
    }

    pub fn neg(&self, f: &Gf<Base>) -> Self {
        APoly { c: self.c.iter().map(|&a| f.neg(a)).collect() }
    }

    pub fn sub(&self, o: &Self, f: &Gf<Base>) -> Self {
        self.add(&o.neg(f), f)
    }

    pub fn scale(&self, a: FqElem, f: &Gf<Base>) -> Self {
        if a.is_zero() {
            return Self::zero();
        }
        APoly { c: self.c.iter().map(|&x| f.mul(a, x)).collect() }
    }

    pub fn mul(&self, o: &Self, f: &Gf<Base>) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![FqElem::ZERO; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Self::from_coeffs(c)
    }

    pub fn pow(&self, mut e: u64, f: &Gf<Base>) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, f);
            }
        }
        acc
    }

    /// Euclidean division: `self = quot · b + rem` with `deg rem < deg b`.
    pub fn divrem(&self, b: &Self, f: &Gf<Base>) -> Result<(Self, Self)> {
        let db = b.deg().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(b.lead())?;
        let mut r = self.c.clone();
        if r.len() <= db {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![FqElem::ZERO; r.len() - db];
        for top in (db..r.len()).rev() {
            let coef = f.mul(r[top], lead_inv);
            if coef.is_zero() {
                continue;
            }
            q[top - db] = coef;
            for (k, &bk) in b.c.iter().enumerate() {
                let t = top - db + k;
                r[t] = f.sub(r[t], f.mul(coef, bk));
            }
        }
        r.truncate(db);
        Ok((Self::from_coeffs(q), Self::from_coeffs(r)))
    }

    pub fn rem(&self, b: &Self, f: &Gf<Base>) -> Result<Self> {
        Ok(self.divrem(b, f)?.1)
    }

    /// Whether `self` divides `b`. Zero divides only zero.
    pub fn divides(&self, b: &Self, f: &Gf<Base>) -> bool {
        if self.is_zero() {
            return b.is_zero();
        }
        b.rem(self, f).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Exact quotient; panics in debug builds if the division leaves a remainder.
    pub fn div_exact(&self, b: &Self, f: &Gf<Base>) -> Result<Self> {
        let (q, r) = self.divrem(b, f)?;
        debug_assert!(r.is_zero(), "inexact division");
        Ok(q)
    }

    pub fn monic(&self, f: &Gf<Base>) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.scale(f.inv(self.lead())?, f))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Self, f: &Gf<Base>) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f).expect("nonzero divisor");
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic(f).expect("nonzero")
        }
    }

    /// `self^e mod m`.
    pub fn powmod(&self, mut e: u64, m: &Self, f: &Gf<Base>) -> Result<Self> {
        let mut base = self.rem(m, f)?;
        let mut acc = Self::one().rem(m, f)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f).rem(m, f)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, f).rem(m, f)?;
            }
        }
        Ok(acc)
    }

    /// Irreducibility over F_q: no factor shares a root with `T^(q^k) - T`
    /// for `k ≤ deg/2`.
    pub fn is_irreducible(&self, f: &Gf<Base>) -> Result<bool> {
        let d = self.deg().ok_or(Error::ZeroPolynomial)?;
        if d == 0 {
            return Ok(false);
        }
        let q = f.size() as u64;
        let x = Self::x();
        let mut h = x.rem(self, f)?;
        for _ in 1..=d / 2 {
            h = h.powmod(q, self, f)?;
            if !h.sub(&x, f).gcd(self, f).is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All `q^deg` monic polynomials of degree `deg`, ordered by the lower
    /// coefficients read as a base-q number with the constant least significant.
    pub fn enumerate_monic(deg: usize, f: &Gf<Base>) -> impl Iterator<Item = APoly> + '_ {
        let q = f.size() as u64;
        let count = q.pow(deg as u32);
        (0..count).map(move |mut k| {
            let mut c = Vec::with_capacity(deg + 1);
            for _ in 0..deg {
                c.push(f.elem((k % q) as u32));
                k /= q;
            }
            c.push(FqElem::ONE);
            APoly { c }
        })
    }

    pub fn monic_irreducibles(deg: usize, f: &Gf<Base>) -> impl Iterator<Item = APoly> + '_ {
        Self::enumerate_monic(deg, f).filter(move |a| a.is_irreducible(f).unwrap_or(false))
    }

    /// The monic irreducible of degree `deg` whose coefficient tuple
    /// `(c_0, c_1, …, c_{deg-1})` is lexicographically least, `c_0` compared first.
    pub fn lex_least_irreducible(deg: usize, f: &Gf<Base>) -> Result<Self> {
        if deg == 0 {
            return Err(Error::InvalidParameter("irreducible of degree 0".into()));
        }
        let q = f.size() as u64;
        for mut k in 0..q.pow(deg as u32) {
            let mut c = vec![FqElem::ZERO; deg + 1];
            for i in (0..deg).rev() {
                c[i] = f.elem((k % q) as u32);
                k /= q;
            }
            c[deg] = FqElem::ONE;
            let a = APoly { c };
            if a.is_irreducible(f)? {
                return Ok(a);
            }
        }
        unreachable!("irreducibles exist in every degree")
    }

    /// Monic irreducible factors with multiplicities, by trial division,
    /// sorted by the polynomial order. The unit part is dropped.
    pub fn factor(&self, f: &Gf<Base>) -> Result<Vec<(APoly, u32)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut rest = self.monic(f)?;
        let mut out = Vec::new();
        let mut k = 1;
        while rest.deg().unwrap_or(0) >= 2 * k {
            for ell in Self::monic_irreducibles(k, f) {
                let mut e = 0;
                loop {
                    let (quo, r) = rest.divrem(&ell, f)?;
                    if !r.is_zero() {
                        break;
                    }
                    rest = quo;
                    e += 1;
                }
                if e > 0 {
                    out.push((ell, e));
                }
            }
            k += 1;
        }
        if rest.deg().unwrap_or(0) >= 1 {
            match out.iter_mut().find(|(p, _)| *p == rest) {
                Some(entry) => entry.1 += 1,
                None => out.push((rest, 1)),
            }
        }
        out.sort();
        Ok(out)
    }

    /// Every monic `l` with `l² | self`, in polynomial order.
    pub fn square_divisors(&self, f: &Gf<Base>) -> Result<Vec<APoly>> {
        let fac = self.factor(f)?;
        let mut divs = vec![APoly::one()];
        for (p, e) in fac {
            let mut next = Vec::new();
            for d in &divs {
                let mut cur = d.clone();
                for _ in 0..=e / 2 {
                    next.push(cur.clone());
                    cur = cur.mul(&p, f);
                }
            }
            divs = next;
        }
        divs.sort();
        Ok(divs)
    }

    /// Every monic divisor, in polynomial order.
    pub fn monic_divisors(&self, f: &Gf<Base>) -> Result<Vec<APoly>> {
        let fac = self.factor(f)?;
        let mut divs = vec![APoly::one()];
        for (p, e) in fac {
            let mut next = Vec::new();
            for d in &divs {
                let mut cur = d.clone();
                for _ in 0..=e {
                    next.push(cur.clone());
                    cur = cur.mul(&p, f);
                }
            }
            divs = next;
        }
        divs.sort();
        Ok(divs)
    }

    pub fn is_squarefree(&self, f: &Gf<Base>) -> Result<bool> {
        Ok(self.factor(f)?.iter().all(|&(_, e)| e == 1))
    }

    /// Horner evaluation at a point of F_q.
    pub fn eval(&self, x: FqElem, f: &Gf<Base>) -> FqElem {
        self.c.iter().rev().fold(FqElem::ZERO, |acc, &a| f.add(f.mul(acc, x), a))
    }

    /// Horner evaluation at a point of L, coefficients embedded via F_q ⊂ L.
    pub fn eval_l(&self, x: LElem, ctx: &FieldCtx) -> LElem {
        let l = ctx.l();
        self.c.iter().rev().fold(LElem::ZERO, |acc, &a| l.add(l.mul(acc, x), ctx.embed(a)))
    }

    /// Substitution `self(x)` for a polynomial `x`.
    pub fn compose(&self, x: &APoly, f: &Gf<Base>) -> APoly {
        self.c
            .iter()
            .rev()
            .fold(APoly::zero(), |acc, &a| acc.mul(x, f).add(&APoly::constant(a), f))
    }

    /// Dense ascending text form, e.g. `2+0*T+1*T^2`.
    pub fn to_text(&self, f: &Gf<Base>) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let prime = f.size() == f.characteristic();
        let mut s = String::new();
        for (i, a) in self.c.iter().enumerate() {
            if i > 0 {
                s.push('+');
            }
            if prime {
                let _ = write!(s, "{}", a.index());
            } else {
                let _ = write!(s, "{{{}}}", a.index());
            }
            match i {
                0 => {}
                1 => s.push_str("*T"),
                _ => {
                    let _ = write!(s, "*T^{i}");
                }
            }
        }
        s
    }

    pub fn parse(text: &str, f: &Gf<Base>) -> Result<Self> {
        Parser { s: text.as_bytes(), pos: 0, f }.parse()
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    f: &'a Gf<Base>,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at byte {}", self.pos))
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

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("expected a number"))
    }

    fn parse(mut self) -> Result<APoly> {
        let f = self.f;
        let mut acc = APoly::zero();
        let mut first = true;
        loop {
            let mut negative = false;
            match self.peek() {
                None if first => return Err(self.err("empty polynomial")),
                None => break,
                Some(b'+') if !first => self.pos += 1,
                Some(b'-') => {
                    self.pos += 1;
                    negative = true;
                }
                Some(_) if first => {}
                Some(_) => return Err(self.err("expected '+' or '-'")),
            }
            first = false;
            let mut coef = None;
            match self.peek() {
                Some(b'{') => {
                    self.pos += 1;
                    let k = self.number()?;
                    if k >= f.size() as u64 {
                        return Err(self.err("field element index out of range"));
                    }
                    if self.peek() != Some(b'}') {
                        return Err(self.err("expected '}'"));
                    }
                    self.pos += 1;
                    coef = Some(f.elem(k as u32));
                }
                Some(c) if c.is_ascii_digit() => {
                    let v = self.number()?;
                    coef = Some(f.from_int((v % f.characteristic() as u64) as i64));
                }
                _ => {}
            }
            if coef.is_some() && self.peek() == Some(b'*') {
                self.pos += 1;
                if !matches!(self.peek(), Some(b'T' | b't')) {
                    return Err(self.err("expected 'T' after '*'"));
                }
            }
            let mut power = 0;
            if matches!(self.peek(), Some(b'T' | b't')) {
                self.pos += 1;
                power = 1;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    power = self.number()? as usize;
                }
            } else if coef.is_none() {
                return Err(self.err("expected a term"));
            }
            let mut c = coef.unwrap_or(FqElem::ONE);
            if negative {
                c = f.neg(c);
            }
            acc = acc.add(&APoly::monomial(c, power), f);
        }
        Ok(acc)
    }
}
