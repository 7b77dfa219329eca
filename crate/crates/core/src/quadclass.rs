//! Class numbers of orders in imaginary quadratic extensions of F_q(T), q odd.
//!
//! Conventions:
//!
//! * `D` is imaginary when ∞ does not split in `F_q(T)(√D)`: `deg D` odd, or
//!   even with a non-square leading coefficient. Nonsquare constants count
//!   (the constant field extension).
//! * The order of discriminant `D = f²·D₀` is `A[√D] = A + f·O_K`.
//! * Curve points at infinity for `y² = D₀(T)`: one when `deg D₀` is odd,
//!   `1 + χ(lc D₀)` (so 0 or 2) when it is even.
//! * `h(O_K) = L_K(1) · deg(∞)`: the divisor class number times 2 when ∞ is
//!   inert, and 1 for the constant field extension.
//! * The conductor formula divides by the unit index `[O_K* : O_f*]`, which is
//!   `q + 1` for a non-maximal order in the constant field extension and 1
//!   otherwise.

use serde::Serialize;

use crate::apoly::APoly;
use crate::error::{Error, Result};
use crate::field::{Base, FieldCtx, FqElem, Gf};

/// `D = conductor² · fundamental`, `fundamental` squarefree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImagDisc {
    pub d: APoly,
    pub fundamental: APoly,
    pub conductor: APoly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Zeta,
    ConductorFormula,
    BruteForce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassNumberResult {
    pub h: u64,
    pub method: Method,
}

fn require_odd(f: &Gf<Base>) -> Result<()> {
    if f.characteristic() == 2 {
        Err(Error::EvenCharacteristicUnsupported)
    } else {
        Ok(())
    }
}

pub fn is_imaginary(d: &APoly, f: &Gf<Base>) -> Result<bool> {
    require_odd(f)?;
    let deg = d.deg().ok_or(Error::ZeroPolynomial)?;
    Ok(deg % 2 == 1 || !f.is_square(d.lead()))
}

pub fn split_disc(d: &APoly, f: &Gf<Base>) -> Result<ImagDisc> {
    if !is_imaginary(d, f)? {
        return Err(Error::NotImaginary);
    }
    let mut conductor = APoly::one();
    for (ell, e) in d.factor(f)? {
        conductor = conductor.mul(&ell.pow((e / 2) as u64, f), f);
    }
    let fundamental = d.div_exact(&conductor.mul(&conductor, f), f)?;
    Ok(ImagDisc { d: d.clone(), fundamental, conductor })
}

/// `χ_{D₀}(ℓ)` for a monic irreducible `ℓ`: 0 if `ℓ | D₀`, otherwise ±1 by
/// Euler's criterion in `A/ℓ`.
pub fn kronecker(d0: &APoly, ell: &APoly, f: &Gf<Base>) -> Result<i64> {
    let r = d0.rem(ell, f)?;
    if r.is_zero() {
        return Ok(0);
    }
    let size = (f.size() as u64).pow(ell.deg().unwrap() as u32);
    let e = r.powmod((size - 1) / 2, ell, f)?;
    Ok(if e.is_one() { 1 } else { -1 })
}

/// `#C(F_{q^k})` for the completed curve `y² = d0(T)`.
pub fn count_points(d0: &APoly, ctx: &FieldCtx, k: u32) -> Result<u64> {
    let ext = FieldCtx::new(ctx.p(), ctx.s(), k, u64::MAX)?;
    let l = ext.l();
    let mut affine = 0u64;
    for t in ext.elements() {
        let v = d0.eval_l(t, &ext);
        affine += if v.is_zero() {
            1
        } else if l.is_square(v) {
            2
        } else {
            0
        };
    }
    let deg = d0.deg().ok_or(Error::ZeroPolynomial)?;
    let infinity = if deg % 2 == 1 {
        1
    } else if l.is_square(ext.embed(d0.lead())) {
        2
    } else {
        0
    };
    Ok(affine + infinity)
}

/// Coefficients `a_0 = 1, a_1, …, a_{2g}` of the zeta numerator of
/// `y² = d0(T)` for squarefree `d0` of degree ≥ 1.
pub fn l_polynomial(d0: &APoly, ctx: &FieldCtx) -> Result<Vec<i64>> {
    let deg = d0.deg().ok_or(Error::ZeroPolynomial)?;
    let genus = deg.saturating_sub(1) / 2;
    let q = ctx.q() as i64;
    // power sums of the reciprocal roots
    let mut power_sums = vec![0i64; genus + 1];
    for k in 1..=genus {
        let n_k = count_points(d0, ctx, k as u32)? as i64;
        power_sums[k] = q.pow(k as u32) + 1 - n_k;
    }
    let mut e = vec![0i64; genus + 1];
    e[0] = 1;
    for k in 1..=genus {
        let mut acc = 0i64;
        for i in 1..=k {
            let term = e[k - i] * power_sums[i];
            acc += if i % 2 == 1 { term } else { -term };
        }
        if acc % k as i64 != 0 {
            return Err(Error::NonIntegerResult);
        }
        e[k] = acc / k as i64;
    }
    let mut a = vec![0i64; 2 * genus + 1];
    for j in 0..=genus {
        a[j] = if j % 2 == 0 { e[j] } else { -e[j] };
    }
    for j in 0..genus {
        a[2 * genus - j] = q.pow((genus - j) as u32) * a[j];
    }
    Ok(a)
}

pub fn class_number_fundamental(d0: &APoly, ctx: &FieldCtx) -> Result<ClassNumberResult> {
    let f = ctx.fq();
    if !is_imaginary(d0, f)? {
        return Err(Error::NotImaginary);
    }
    if !d0.is_squarefree(f)? {
        return Err(Error::NotSquarefree);
    }
    let deg = d0.deg().unwrap();
    let h = if deg == 0 {
        1
    } else {
        let l1: i64 = l_polynomial(d0, ctx)?.iter().sum();
        let infinity_degree = if deg % 2 == 1 { 1 } else { 2 };
        (l1 * infinity_degree) as u64
    };
    Ok(ClassNumberResult { h, method: Method::Zeta })
}

/// `h(A + f·O_K)` from `h(O_K)` by the conductor formula.
pub fn class_number(d: &APoly, ctx: &FieldCtx) -> Result<ClassNumberResult> {
    let f = ctx.fq();
    let disc = split_disc(d, f)?;
    let base = class_number_fundamental(&disc.fundamental, ctx)?;
    if disc.conductor.is_one() {
        return Ok(base);
    }
    let q = ctx.q() as u64;
    let mut num = base.h;
    for (ell, e) in disc.conductor.factor(f)? {
        let norm = q.pow(ell.deg().unwrap() as u32);
        let chi = kronecker(&disc.fundamental, &ell, f)?;
        num *= norm.pow(e - 1);
        num = (num as i64 * (norm as i64 - chi)) as u64;
    }
    let unit_index = if disc.fundamental.deg() == Some(0) { q + 1 } else { 1 };
    if num % unit_index != 0 {
        return Err(Error::NonIntegerResult);
    }
    Ok(ClassNumberResult { h: num / unit_index, method: Method::ConductorFormula })
}

/// `H(D) = Σ_{l² | D} h(D/l²)` as `(l, h(D/l²))` terms.
pub fn hurwitz_terms(d: &APoly, ctx: &FieldCtx) -> Result<Vec<(APoly, u64)>> {
    let f = ctx.fq();
    if !is_imaginary(d, f)? {
        return Err(Error::NotImaginary);
    }
    d.square_divisors(f)?
        .into_iter()
        .map(|l| {
            let quotient = d.div_exact(&l.mul(&l, f), f)?;
            Ok((l, class_number(&quotient, ctx)?.h))
        })
        .collect()
}

pub fn hurwitz(d: &APoly, ctx: &FieldCtx) -> Result<u64> {
    Ok(hurwitz_terms(d, ctx)?.iter().map(|t| t.1).sum())
}

/// Largest degree for which the brute-force oracle is attempted.
pub const BRUTE_FORCE_MAX_DEG: usize = 5;

/// Ideal-class count by direct enumeration, independent of the zeta route.
///
/// Every class of invertible ideals of `A[√D]` contains a primitive ideal
/// `[a, b + √D]` with `a` monic, `deg b < deg a ≤ deg D / 2` and
/// `a | b² − D`. Two such ideals `I, J` are equivalent exactly when `I·J̄` is
/// principal, which is decided by searching the lattice `I·J̄` for an element
/// whose norm equals `N(I)·N(J)` up to a unit; for imaginary `D` the norm form
/// has no cancellation, so the search space is finite.
pub fn brute_force_class_number(d: &APoly, ctx: &FieldCtx) -> Result<ClassNumberResult> {
    let f = ctx.fq();
    if !is_imaginary(d, f)? {
        return Err(Error::NotImaginary);
    }
    let deg_d = d.deg().unwrap();
    if deg_d > BRUTE_FORCE_MAX_DEG {
        return Err(Error::CapExceeded { size: deg_d as u64, cap: BRUTE_FORCE_MAX_DEG as u64 });
    }
    let mut ideals = Vec::new();
    for deg_a in 0..=deg_d / 2 {
        for a in APoly::enumerate_monic(deg_a, f) {
            for b in polys_below(deg_a, f) {
                let (c, r) = b.mul(&b, f).sub(d, f).divrem(&a, f)?;
                if r.is_zero() && a.gcd(&b, f).gcd(&c, f).is_one() {
                    ideals.push((a.clone(), b));
                }
            }
        }
    }
    let mut reps: Vec<(APoly, APoly)> = Vec::new();
    for ideal in ideals {
        if !reps.iter().any(|r| equivalent(&ideal, r, d, f)) {
            reps.push(ideal);
        }
    }
    Ok(ClassNumberResult { h: reps.len() as u64, method: Method::BruteForce })
}

/// All polynomials of degree `< k`, zero included.
fn polys_below(k: usize, f: &Gf<Base>) -> impl Iterator<Item = APoly> + '_ {
    let q = f.size() as u64;
    (0..q.pow(k as u32)).map(move |mut idx| {
        let mut c = Vec::with_capacity(k);
        for _ in 0..k {
            c.push(f.elem((idx % q) as u32));
            idx /= q;
        }
        APoly::from_coeffs(c)
    })
}

// Elements are pairs (x, y) standing for x + y√D.
type Vec2 = (APoly, APoly);

fn equivalent(i: &Vec2, j: &Vec2, d: &APoly, f: &Gf<Base>) -> bool {
    let (a1, b1) = i;
    let (a2, b2) = j;
    let gens: Vec<Vec2> = vec![
        (a1.mul(a2, f), APoly::zero()),
        (a1.mul(b2, f).neg(f), a1.clone()),
        (a2.mul(b1, f), a2.clone()),
        (d.sub(&b1.mul(b2, f), f), b1.sub(b2, f)),
    ];
    let norm = a1.mul(a2, f);
    is_principal(gens, &norm, d, f)
}

/// Hermite basis `{(e, 0), (h, g)}` of the A-lattice spanned by `gens`.
fn hermite(mut rows: Vec<Vec2>, f: &Gf<Base>) -> (APoly, APoly, APoly) {
    loop {
        let pivot = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.1.is_zero())
            .min_by_key(|(_, r)| r.1.deg())
            .map(|(k, _)| k)
            .expect("lattice has full rank");
        let (px, py) = rows[pivot].clone();
        let mut done = true;
        for (k, row) in rows.iter_mut().enumerate() {
            if k == pivot || row.1.is_zero() {
                continue;
            }
            let (quo, rem) = row.1.divrem(&py, f).expect("nonzero pivot");
            *row = (row.0.sub(&quo.mul(&px, f), f), rem);
            done &= row.1.is_zero();
        }
        if done {
            let e = rows
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != pivot)
                .fold(APoly::zero(), |acc, (_, r)| acc.gcd(&r.0, f));
            let lead_inv = f.inv(py.lead()).expect("nonzero");
            let g = py.scale(lead_inv, f);
            let h = px.scale(lead_inv, f).rem(&e, f).expect("full rank");
            return (e, h, g);
        }
    }
}

fn is_principal(gens: Vec<Vec2>, norm: &APoly, d: &APoly, f: &Gf<Base>) -> bool {
    let (e, h, g) = hermite(gens, f);
    let deg_n = norm.deg().unwrap() as i64;
    let deg_d = d.deg().unwrap() as i64;
    let x_max = deg_n / 2;
    let y_max = (deg_n - deg_d).div_euclid(2);
    let t_max = y_max - g.deg_i();
    let t_range: Box<dyn Iterator<Item = APoly>> = if t_max < 0 {
        Box::new(std::iter::once(APoly::zero()))
    } else {
        Box::new(polys_below(t_max as usize + 1, f))
    };
    for t in t_range {
        let y = t.mul(&g, f);
        let x0 = t.mul(&h, f).rem(&e, f).expect("nonzero");
        let s_max = x_max - e.deg_i();
        let s_range: Box<dyn Iterator<Item = APoly>> = if s_max < 0 {
            Box::new(std::iter::once(APoly::zero()))
        } else {
            Box::new(polys_below(s_max as usize + 1, f))
        };
        for s in s_range {
            let x = x0.add(&s.mul(&e, f), f);
            if x.deg_i() > x_max || (x.is_zero() && y.is_zero()) {
                continue;
            }
            let nm = x.mul(&x, f).sub(&d.mul(&y.mul(&y, f), f), f);
            if nm.monic(f).is_ok_and(|m| &m == norm) {
                return true;
            }
        }
    }
    false
}

/// Imaginary discriminants of degree exactly `deg`, all leading coefficients.
pub fn imaginary_discriminants(deg: usize, f: &Gf<Base>) -> Vec<APoly> {
    let units: Vec<FqElem> = f.elements().skip(1).collect();
    let mut out = Vec::new();
    for m in APoly::enumerate_monic(deg, f) {
        for &u in &units {
            let d = m.scale(u, f);
            if is_imaginary(&d, f).unwrap_or(false) {
                out.push(d);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_ctx;

    fn ctx3() -> FieldCtx {
        make_ctx(3, 1, 1).unwrap()
    }

    fn p(c: &[i64], ctx: &FieldCtx) -> APoly {
        APoly::from_ints(c, ctx.fq())
    }

    #[test]
    fn imaginary_examples() {
        let ctx = ctx3();
        let f = ctx.fq();
        assert!(is_imaginary(&p(&[0, 0, 0, 1], &ctx), f).unwrap());
        assert!(!is_imaginary(&p(&[0, 0, 1], &ctx), f).unwrap());
        assert!(is_imaginary(&p(&[1, 0, 2], &ctx), f).unwrap());
        let even = make_ctx(2, 1, 1).unwrap();
        assert_eq!(
            is_imaginary(&APoly::x(), even.fq()),
            Err(Error::EvenCharacteristicUnsupported)
        );
    }

    #[test]
    fn fundamental_examples() {
        let ctx = ctx3();
        assert_eq!(class_number_fundamental(&APoly::x(), &ctx).unwrap().h, 1);
        // y² = T³ − T over F_3: t = 0, 1, 2 give y = 0, plus one point at ∞
        let d = p(&[0, -1, 0, 1], &ctx);
        assert_eq!(count_points(&d, &ctx, 1).unwrap(), 4);
        assert_eq!(class_number_fundamental(&d, &ctx).unwrap().h, 4);
        assert_eq!(
            class_number_fundamental(&p(&[0, 0, 0, 1], &ctx), &ctx),
            Err(Error::NotSquarefree)
        );
        assert_eq!(class_number_fundamental(&p(&[0, 0, 1], &ctx), &ctx), Err(Error::NotImaginary));
    }

    #[test]
    fn conductor_examples() {
        let ctx = ctx3();
        let t3 = p(&[0, 0, 0, 1], &ctx);
        let r = class_number(&t3, &ctx).unwrap();
        assert_eq!(r, ClassNumberResult { h: 3, method: Method::ConductorFormula });
        assert_eq!(brute_force_class_number(&t3, &ctx).unwrap().h, 3);
        assert_eq!(class_number(&APoly::x(), &ctx).unwrap().method, Method::Zeta);
    }

    #[test]
    fn hurwitz_examples() {
        let ctx = ctx3();
        let t3 = p(&[0, 0, 0, 1], &ctx);
        let terms = hurwitz_terms(&t3, &ctx).unwrap();
        assert_eq!(terms, vec![(APoly::one(), 3), (APoly::x(), 1)]);
        assert_eq!(hurwitz(&t3, &ctx).unwrap(), 4);
        let d = p(&[0, -1, 0, 1], &ctx);
        assert_eq!(hurwitz(&d, &ctx).unwrap(), 4);
        assert_eq!(hurwitz(&p(&[0, 0, 1], &ctx), &ctx), Err(Error::NotImaginary));
    }

    #[test]
    fn brute_force_small() {
        let ctx = ctx3();
        assert_eq!(brute_force_class_number(&APoly::x(), &ctx).unwrap().h, 1);
        let d = p(&[1, 0, 2], &ctx);
        assert_eq!(brute_force_class_number(&d, &ctx).unwrap().h, 2);
        assert_eq!(class_number(&d, &ctx).unwrap().h, 2);
    }

    #[test]
    fn constant_field_extension_orders() {
        // D = 2T² over F_3: order of conductor T in F_9[T]
        let ctx = ctx3();
        let d = p(&[0, 0, 2], &ctx);
        assert_eq!(brute_force_class_number(&d, &ctx).unwrap().h, 1);
        assert_eq!(class_number(&d, &ctx).unwrap().h, 1);
        assert_eq!(class_number(&p(&[2], &ctx), &ctx).unwrap().h, 1);
    }

    #[test]
    fn brute_force_agrees_on_degree_3_fundamentals() {
        let ctx = ctx3();
        let f = ctx.fq();
        for d in imaginary_discriminants(3, f) {
            if d.is_squarefree(f).unwrap() {
                assert_eq!(
                    class_number_fundamental(&d, &ctx).unwrap().h,
                    brute_force_class_number(&d, &ctx).unwrap().h,
                    "{}",
                    d.to_text(f)
                );
            }
        }
    }

    #[test]
    fn reciprocal_roots_have_weil_magnitude() {
        for (pp, deg) in [(3, 3), (3, 4), (5, 3), (3, 5), (3, 6)] {
            let ctx = make_ctx(pp, 1, 1).unwrap();
            let f = ctx.fq();
            let q = pp as f64;
            for d in imaginary_discriminants(deg, f).into_iter().step_by(7) {
                if !d.is_squarefree(f).unwrap() {
                    continue;
                }
                let a = l_polynomial(&d, &ctx).unwrap();
                match a.len() {
                    3 => assert!((a[1] * a[1]) as f64 <= 4.0 * q, "{a:?}"),
                    5 => {
                        // real Weil polynomial x² + a1 x + (a2 − 2q), roots in [−2√q, 2√q]
                        let (b, c) = (a[1] as f64, a[2] as f64 - 2.0 * q);
                        let disc = b * b - 4.0 * c;
                        assert!(disc >= -1e-9, "{a:?}");
                        for r in [(-b + disc.sqrt()) / 2.0, (-b - disc.sqrt()) / 2.0] {
                            assert!(r.abs() <= 2.0 * q.sqrt() + 1e-9, "{a:?}");
                        }
                        assert_eq!(a[3], pp as i64 * a[1]);
                    }
                    _ => unreachable!(),
                }
            }
        }
    }
}
