//! Finite fields F_p ⊂ F_q = F_p[x]/(f) ⊂ L = F_q[y]/(g).
//!
//! Every level is a table-driven field whose elements are indices in
//! `0..size`. The index of an element is its coefficient vector over the
//! next-lower field read as a base-`sub_size` number with the constant
//! coefficient least significant; recursively, an index is the base-p
//! digit string of all F_p coordinates. Consequences that the rest of the
//! crate relies on:
//!
//! * index order is the element order used for enumeration and for every
//!   "lexicographically least" choice on elements (higher-degree
//!   coefficients are compared first, the constant coefficient last);
//! * F_q sits inside L as the indices `0..q` and F_p inside F_q as `0..p`;
//! * addition is digit-wise addition mod p at every level.

use std::fmt;
use std::marker::PhantomData;

use serde::{Serialize, Serializer};

use crate::apoly::APoly;
use crate::error::{Error, Result};

/// Default bound on `q^n` for exhaustive work.
pub const DEFAULT_CAP: u64 = 4096;

/// Level marker for F_q (also used for F_p, which is F_q with s = 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Base {}

/// Level marker for L = F_{q^n}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ext {}

/// A field element tagged with its tower level. Elements of different levels
/// do not mix without an explicit [`FieldCtx::embed`].
pub struct Elem<M>(u32, PhantomData<M>);

// Manual impls: derives would demand the same traits of the marker `M`.
impl<M> Clone for Elem<M> {
    fn clone(&self) -> Self {
        *self
    }
}
impl<M> Copy for Elem<M> {}
impl<M> PartialEq for Elem<M> {
    fn eq(&self, o: &Self) -> bool {
        self.0 == o.0
    }
}
impl<M> Eq for Elem<M> {}
impl<M> PartialOrd for Elem<M> {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl<M> Ord for Elem<M> {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.0.cmp(&o.0)
    }
}
impl<M> std::hash::Hash for Elem<M> {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.0.hash(h)
    }
}

pub type FqElem = Elem<Base>;
pub type LElem = Elem<Ext>;

impl<M> Elem<M> {
    pub const ZERO: Self = Elem(0, PhantomData);
    pub const ONE: Self = Elem(1, PhantomData);

    /// Position of the element in the canonical enumeration order.
    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub(crate) fn from_index(i: u32) -> Self {
        Elem(i, PhantomData)
    }
}

impl<M> fmt::Debug for Elem<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl<M> fmt::Display for Elem<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<M> Serialize for Elem<M> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u32(self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^s`.
pub fn prime_power(q: u64) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let mut p = 2;
    while q % p != 0 {
        p += 1;
    }
    let (mut r, mut s) = (q, 0);
    while r % p == 0 {
        r /= p;
        s += 1;
    }
    if r != 1 {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p as u32, s))
}

// Tables for digit-wise addition are kept only for small fields.
const ADD_TABLE_MAX: u32 = 256;

/// A finite field as a set of multiplication/addition tables.
#[derive(Clone)]
pub struct Gf<M> {
    p: u32,
    size: u32,
    sub_size: u32,
    degree: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u16>>,
    _level: PhantomData<M>,
}

impl<M> fmt::Debug for Gf<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Gf")
            .field("p", &self.p)
            .field("size", &self.size)
            .field("degree", &self.degree)
            .finish()
    }
}

fn digit_add(p: u32, mut a: u32, mut b: u32) -> u32 {
    if p == 2 {
        return a ^ b;
    }
    let (mut r, mut place) = (0, 1);
    while a | b != 0 {
        r += ((a % p + b % p) % p) * place;
        place *= p;
        a /= p;
        b /= p;
    }
    r
}

fn digit_neg(p: u32, mut a: u32) -> u32 {
    let (mut r, mut place) = (0, 1);
    while a != 0 {
        r += ((p - a % p) % p) * place;
        place *= p;
        a /= p;
    }
    r
}

impl<M> Gf<M> {
    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NonPrime(p as u64));
        }
        Ok(Self::build(p, p, 1, |a, b| ((a as u64 * b as u64) % p as u64) as u32))
    }

    /// `base[y] / (modulus)`; the modulus must be monic and irreducible over `base`.
    pub fn extension(base: &Gf<Base>, modulus: &APoly) -> Result<Self> {
        let deg = modulus.deg().ok_or(Error::ZeroPolynomial)?;
        if deg == 0 || !modulus.is_monic() || !modulus.is_irreducible(base)? {
            return Err(Error::ReducibleModulus);
        }
        let b = base.size;
        let modc: Vec<u32> = modulus.coeffs().iter().map(|c| c.index()).collect();
        let mul = |x: u32, y: u32| -> u32 {
            let xs = base.raw_digits(x, deg);
            let ys = base.raw_digits(y, deg);
            let mut prod = vec![0u32; 2 * deg - 1];
            for (i, &xi) in xs.iter().enumerate() {
                if xi == 0 {
                    continue;
                }
                for (j, &yj) in ys.iter().enumerate() {
                    prod[i + j] = base.add_raw(prod[i + j], base.mul_raw(xi, yj));
                }
            }
            for top in (deg..prod.len()).rev() {
                let lead = prod[top];
                if lead == 0 {
                    continue;
                }
                for (k, &mk) in modc.iter().enumerate().take(deg) {
                    let t = top - deg + k;
                    prod[t] = base.add_raw(prod[t], base.neg_raw(base.mul_raw(lead, mk)));
                }
                prod[top] = 0;
            }
            prod[..deg].iter().rev().fold(0, |acc, &c| acc * b + c)
        };
        Ok(Self::build(base.p, b, deg as u32, mul))
    }

    fn build(p: u32, sub_size: u32, degree: u32, mul: impl Fn(u32, u32) -> u32) -> Self {
        let size = sub_size.pow(degree);
        let order = (size - 1) as usize;
        let mut exp = vec![0u32; 2 * order.max(1)];
        let mut found = false;
        for w in 1..size {
            let mut x = 1;
            let mut k = 0;
            loop {
                exp[k] = x;
                x = mul(x, w);
                k += 1;
                if x == 1 || k > order {
                    break;
                }
            }
            if k == order && x == 1 {
                found = true;
                break;
            }
        }
        assert!(found, "no primitive element; modulus reducible");
        for k in order..2 * order {
            exp[k] = exp[k - order];
        }
        let mut log = vec![0u32; size as usize];
        for (k, &e) in exp.iter().take(order).enumerate() {
            log[e as usize] = k as u32;
        }
        let neg = (0..size).map(|a| digit_neg(p, a)).collect();
        let add = (size <= ADD_TABLE_MAX).then(|| {
            let mut t = Vec::with_capacity((size * size) as usize);
            for a in 0..size {
                for b in 0..size {
                    t.push(digit_add(p, a, b) as u16);
                }
            }
            t
        });
        Gf { p, size, sub_size, degree, exp, log, neg, add, _level: PhantomData }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// Size of the field one level down (p for a prime field).
    pub fn sub_size(&self) -> u32 {
        self.sub_size
    }

    /// Degree over the field one level down.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    fn add_raw(&self, a: u32, b: u32) -> u32 {
        match &self.add {
            Some(t) => t[(a * self.size + b) as usize] as u32,
            None => digit_add(self.p, a, b),
        }
    }

    #[inline]
    fn neg_raw(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    fn raw_digits(&self, mut x: u32, len: usize) -> Vec<u32> {
        let mut v = Vec::with_capacity(len);
        for _ in 0..len {
            v.push(x % self.size);
            x /= self.size;
        }
        v
    }

    pub fn elem(&self, index: u32) -> Elem<M> {
        assert!(index < self.size, "index {index} out of range for field of size {}", self.size);
        Elem::from_index(index)
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Elem<M>> + '_ {
        (0..self.size).map(Elem::from_index)
    }

    /// Image of an integer under Z → F_p ⊂ this field.
    pub fn from_int(&self, v: i64) -> Elem<M> {
        Elem::from_index(v.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: Elem<M>, b: Elem<M>) -> Elem<M> {
        Elem::from_index(self.add_raw(a.0, b.0))
    }

    #[inline]
    pub fn neg(&self, a: Elem<M>) -> Elem<M> {
        Elem::from_index(self.neg_raw(a.0))
    }

    #[inline]
    pub fn sub(&self, a: Elem<M>, b: Elem<M>) -> Elem<M> {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem<M>, b: Elem<M>) -> Elem<M> {
        Elem::from_index(self.mul_raw(a.0, b.0))
    }

    pub fn inv(&self, a: Elem<M>) -> Result<Elem<M>> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let order = self.size - 1;
        Ok(Elem::from_index(self.exp[((order - self.log[a.0 as usize]) % order) as usize]))
    }

    pub fn div(&self, a: Elem<M>, b: Elem<M>) -> Result<Elem<M>> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Square-and-multiply; `0^0 = 1`.
    pub fn pow(&self, a: Elem<M>, mut e: u64) -> Elem<M> {
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Discrete log with respect to the table generator; `None` for zero.
    #[inline]
    pub fn log(&self, a: Elem<M>) -> Option<u32> {
        (a.0 != 0).then(|| self.log[a.0 as usize])
    }

    /// `generator^k` for the table generator.
    #[inline]
    pub fn exp(&self, k: u64) -> Elem<M> {
        Elem::from_index(self.exp[(k % (self.size as u64 - 1)) as usize])
    }

    /// Whether `a` is a square (zero counts as a square).
    pub fn is_square(&self, a: Elem<M>) -> bool {
        match self.log(a) {
            None => true,
            Some(_) if self.p == 2 => true,
            Some(l) => l % 2 == 0,
        }
    }

    /// Coordinates over the next-lower field, constant coefficient first.
    pub fn coeffs(&self, a: Elem<M>) -> Vec<u32> {
        let mut x = a.0;
        let mut v = Vec::with_capacity(self.degree as usize);
        for _ in 0..self.degree {
            v.push(x % self.sub_size);
            x /= self.sub_size;
        }
        v
    }

    /// Inverse of [`Gf::coeffs`].
    pub fn from_coeffs(&self, c: &[u32]) -> Elem<M> {
        assert!(c.len() <= self.degree as usize && c.iter().all(|&x| x < self.sub_size));
        Elem::from_index(c.iter().rev().fold(0, |acc, &x| acc * self.sub_size + x))
    }
}

/// The tower F_p ⊂ F_q ⊂ L with lexicographically least moduli.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u32,
    s: u32,
    q: u32,
    n: u32,
    fp: Gf<Base>,
    fq: Gf<Base>,
    l: Gf<Ext>,
    base_modulus: APoly,
    ext_modulus: APoly,
    // q^i mod (q^n - 1) for i in 0..n
    qpow: Vec<u64>,
}

/// `make_ctx` with the default cap.
pub fn make_ctx(p: u32, s: u32, n: u32) -> Result<FieldCtx> {
    FieldCtx::new(p, s, n, DEFAULT_CAP)
}

impl FieldCtx {
    pub fn new(p: u32, s: u32, n: u32, cap: u64) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NonPrime(p as u64));
        }
        if s == 0 || n == 0 {
            return Err(Error::InvalidParameter("s and n must be positive".into()));
        }
        let q = (p as u64).checked_pow(s);
        let size = q.and_then(|q| q.checked_pow(n));
        match size {
            Some(sz) if sz <= cap && sz <= u32::MAX as u64 / 2 => {}
            _ => return Err(Error::CapExceeded { size: size.unwrap_or(u64::MAX), cap }),
        }
        let q = q.unwrap() as u32;
        let fp = Gf::<Base>::prime(p)?;
        let base_modulus = APoly::lex_least_irreducible(s as usize, &fp)?;
        let fq = Gf::<Base>::extension(&fp, &base_modulus)?;
        let ext_modulus = APoly::lex_least_irreducible(n as usize, &fq)?;
        let l = Gf::<Ext>::extension(&fq, &ext_modulus)?;
        let order = l.size() as u64 - 1;
        let qpow = (0..n).map(|i| if order == 0 { 0 } else { (q as u64).pow(i) % order }).collect();
        Ok(FieldCtx { p, s, q, n, fp, fq, l, base_modulus, ext_modulus, qpow })
    }

    /// Context for `q = p^s` given directly.
    pub fn for_q(q: u64, n: u32, cap: u64) -> Result<Self> {
        let (p, s) = prime_power(q)?;
        Self::new(p, s, n, cap)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn s(&self) -> u32 {
        self.s
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    /// `q^n`, the number of elements of L.
    pub fn l_size(&self) -> u32 {
        self.l.size()
    }
    pub fn fp(&self) -> &Gf<Base> {
        &self.fp
    }
    pub fn fq(&self) -> &Gf<Base> {
        &self.fq
    }
    pub fn l(&self) -> &Gf<Ext> {
        &self.l
    }
    pub fn base_modulus(&self) -> &APoly {
        &self.base_modulus
    }
    pub fn ext_modulus(&self) -> &APoly {
        &self.ext_modulus
    }

    /// Every element of L in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = LElem> + '_ {
        self.l.elements()
    }

    #[inline]
    pub fn embed(&self, a: FqElem) -> LElem {
        Elem::from_index(a.index())
    }

    /// The element as a member of F_q, if it lies there.
    #[inline]
    pub fn restrict(&self, a: LElem) -> Option<FqElem> {
        (a.index() < self.q).then(|| Elem::from_index(a.index()))
    }

    /// `x^q`.
    #[inline]
    pub fn frobenius_q(&self, x: LElem) -> LElem {
        self.frobenius_pow(x, 1)
    }

    /// `x^(q^i)`.
    #[inline]
    pub fn frobenius_pow(&self, x: LElem, i: usize) -> LElem {
        match self.l.log(x) {
            None => x,
            Some(lg) => self.l.exp(lg as u64 * self.qpow[i % self.n as usize]),
        }
    }

    /// `a · x` for `a ∈ F_q`, `x ∈ L`.
    #[inline]
    pub fn scale(&self, a: FqElem, x: LElem) -> LElem {
        self.l.mul(self.embed(a), x)
    }

    /// Coordinates of `x` in the F_q-basis `1, y, …, y^(n-1)` of L.
    pub fn fq_coords(&self, x: LElem) -> Vec<FqElem> {
        self.l.coeffs(x).into_iter().map(Elem::from_index).collect()
    }

    pub fn from_fq_coords(&self, c: &[FqElem]) -> LElem {
        let raw: Vec<u32> = c.iter().map(|e| e.index()).collect();
        self.l.from_coeffs(&raw)
    }

    /// Minimal polynomial of `theta` over F_q: the product of `T - theta^(q^i)`
    /// over the distinct Galois conjugates.
    pub fn min_poly_over_fq(&self, theta: LElem) -> APoly {
        let l = &self.l;
        let mut conj = vec![theta];
        loop {
            let next = self.frobenius_q(*conj.last().unwrap());
            if next == theta {
                break;
            }
            conj.push(next);
        }
        // coefficients in L, constant first
        let mut poly = vec![LElem::ONE];
        for &r in &conj {
            let mut next = vec![LElem::ZERO; poly.len() + 1];
            for (i, &c) in poly.iter().enumerate() {
                next[i + 1] = l.add(next[i + 1], c);
                next[i] = l.sub(next[i], l.mul(c, r));
            }
            poly = next;
        }
        let coeffs = poly
            .into_iter()
            .map(|c| self.restrict(c).expect("minimal polynomial has coefficients in F_q"))
            .collect();
        APoly::from_coeffs(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(9).unwrap(), (3, 2));
        assert_eq!(prime_power(7).unwrap(), (7, 1));
        assert!(prime_power(12).is_err());
        assert!(prime_power(1).is_err());
    }

    #[test]
    fn trivial_tower() {
        let ctx = make_ctx(3, 1, 1).unwrap();
        assert_eq!(ctx.ext_modulus(), &APoly::x());
        assert_eq!(ctx.l_size(), 3);
        let elems: Vec<u32> = ctx.elements().map(|e| e.index()).collect();
        assert_eq!(elems, vec![0, 1, 2]);
    }

    #[test]
    fn f9_modulus_is_t2_plus_1() {
        let ctx = make_ctx(3, 1, 2).unwrap();
        let fq = ctx.fq();
        let expected = APoly::from_coeffs(vec![fq.from_int(1), fq.from_int(0), fq.from_int(1)]);
        assert_eq!(ctx.ext_modulus(), &expected);
    }

    #[test]
    fn f9_modulus_matches_exhaustive_scan() {
        // scan the nine monic quadratics over F_3 by root search, low-to-high lex order
        let mut first = None;
        'outer: for c0 in 0..3i64 {
            for c1 in 0..3i64 {
                if (0..3).all(|t| (t * t + c1 * t + c0) % 3 != 0) {
                    first = Some((c0, c1));
                    break 'outer;
                }
            }
        }
        assert_eq!(first, Some((1, 0)));
    }

    #[test]
    fn rejects_composite_and_cap() {
        assert_eq!(make_ctx(4, 1, 1).unwrap_err(), Error::NonPrime(4));
        assert!(matches!(make_ctx(7, 1, 5), Err(Error::CapExceeded { .. })));
        assert!(FieldCtx::new(7, 1, 5, 20_000).is_ok());
    }

    #[test]
    fn small_arithmetic() {
        let ctx = make_ctx(3, 1, 1).unwrap();
        let f = ctx.l();
        assert_eq!(f.add(f.elem(1), f.elem(2)), f.elem(0));
        assert_eq!(f.inv(f.elem(0)), Err(Error::DivisionByZero));
    }

    #[test]
    fn f9_units_have_order_dividing_8() {
        let ctx = make_ctx(3, 1, 2).unwrap();
        let l = ctx.l();
        for x in l.elements().skip(1) {
            assert_eq!(l.pow(x, 8), LElem::ONE);
            assert_eq!(l.mul(x, l.inv(x).unwrap()), LElem::ONE);
        }
    }

    #[test]
    fn frobenius_fixes_base_and_is_additive() {
        let ctx = make_ctx(3, 1, 2).unwrap();
        let l = ctx.l();
        for a in ctx.fq().elements() {
            assert_eq!(ctx.frobenius_q(ctx.embed(a)), ctx.embed(a));
        }
        for x in l.elements() {
            assert_eq!(ctx.frobenius_q(x), l.pow(x, 3));
            for y in l.elements() {
                assert_eq!(
                    ctx.frobenius_q(l.add(x, y)),
                    l.add(ctx.frobenius_q(x), ctx.frobenius_q(y))
                );
            }
        }
    }

    #[test]
    fn frobenius_has_order_n_on_towers() {
        for (p, s, n) in [(2, 2, 3), (3, 2, 2), (5, 1, 3), (2, 1, 6)] {
            let ctx = make_ctx(p, s, n).unwrap();
            for x in ctx.elements() {
                let mut y = x;
                for _ in 0..n {
                    y = ctx.frobenius_q(y);
                }
                assert_eq!(y, x);
            }
        }
    }

    #[test]
    fn tower_counts() {
        let ctx = make_ctx(2, 2, 3).unwrap();
        assert_eq!(ctx.q(), 4);
        assert_eq!(ctx.l_size(), 64);
        assert_eq!(ctx.elements().count(), 64);
        assert!(ctx.base_modulus().is_irreducible(ctx.fp()).unwrap());
        assert!(ctx.ext_modulus().is_irreducible(ctx.fq()).unwrap());
    }

    #[test]
    fn min_poly_examples() {
        let ctx = make_ctx(3, 1, 2).unwrap();
        let fq = ctx.fq();
        assert_eq!(ctx.min_poly_over_fq(LElem::ZERO), APoly::x());
        let t_minus_1 = APoly::from_coeffs(vec![fq.from_int(-1), fq.from_int(1)]);
        assert_eq!(ctx.min_poly_over_fq(LElem::ONE), t_minus_1);
        // y itself generates F_9 over F_3
        let y = ctx.l().elem(3);
        let mp = ctx.min_poly_over_fq(y);
        assert_eq!(mp.deg(), Some(2));
        assert!(mp.is_irreducible(fq).unwrap());
        assert_eq!(mp.eval_l(y, &ctx), LElem::ZERO);
    }

    #[test]
    fn min_poly_degree_divides_n() {
        for (p, s, n) in [(3, 1, 3), (2, 1, 4), (2, 2, 2), (5, 1, 2)] {
            let ctx = make_ctx(p, s, n).unwrap();
            for x in ctx.elements() {
                let mp = ctx.min_poly_over_fq(x);
                let d = mp.deg().unwrap() as u32;
                assert_eq!(n % d, 0);
                assert_eq!(mp.eval_l(x, &ctx), LElem::ZERO);
            }
        }
    }
}
