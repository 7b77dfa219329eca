//! The twisted polynomial ring L{τ}, τλ = λ^q τ.
//!
//! Coefficients are stored on the left: `c[i]` is the coefficient of τ^i.

use crate::field::{FieldCtx, LElem};
use crate::linalg::FqMatrix;

#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct OrePoly {
    c: Vec<LElem>,
}

impl OrePoly {
    pub fn zero() -> Self {
        OrePoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        OrePoly { c: vec![LElem::ONE] }
    }

    pub fn constant(a: LElem) -> Self {
        Self::from_coeffs(vec![a])
    }

    pub fn tau() -> Self {
        Self::tau_pow(1)
    }

    pub fn tau_pow(k: usize) -> Self {
        let mut c = vec![LElem::ZERO; k + 1];
        c[k] = LElem::ONE;
        OrePoly { c }
    }

    pub fn from_coeffs(mut c: Vec<LElem>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        OrePoly { c }
    }

    pub fn coeffs(&self) -> &[LElem] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> LElem {
        self.c.get(i).copied().unwrap_or(LElem::ZERO)
    }

    /// τ-degree; `None` for zero.
    pub fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn add(&self, o: &Self, ctx: &FieldCtx) -> Self {
        let l = ctx.l();
        let (long, short) = if self.c.len() >= o.c.len() { (self, o) } else { (o, self) };
        let mut c = long.c.clone();
        for (i, &b) in short.c.iter().enumerate() {
            c[i] = l.add(c[i], b);
        }
        Self::from_coeffs(c)
    }

    pub fn neg(&self, ctx: &FieldCtx) -> Self {
        OrePoly { c: self.c.iter().map(|&a| ctx.l().neg(a)).collect() }
    }

    pub fn sub(&self, o: &Self, ctx: &FieldCtx) -> Self {
        self.add(&o.neg(ctx), ctx)
    }

    /// Left scalar multiple `a · self`.
    pub fn scale_left(&self, a: LElem, ctx: &FieldCtx) -> Self {
        let l = ctx.l();
        Self::from_coeffs(self.c.iter().map(|&x| l.mul(a, x)).collect())
    }

    /// `(a τ^i)(b τ^j) = a · b^(q^i) τ^(i+j)`, extended bilinearly.
    pub fn mul(&self, o: &Self, ctx: &FieldCtx) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let l = ctx.l();
        let mut c = vec![LElem::ZERO; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                let twisted = ctx.frobenius_pow(b, i);
                c[i + j] = l.add(c[i + j], l.mul(a, twisted));
            }
        }
        Self::from_coeffs(c)
    }

    /// `u(x) = Σ a_i x^(q^i)`.
    pub fn apply(&self, x: LElem, ctx: &FieldCtx) -> LElem {
        let l = ctx.l();
        self.c
            .iter()
            .enumerate()
            .fold(LElem::ZERO, |acc, (i, &a)| l.add(acc, l.mul(a, ctx.frobenius_pow(x, i))))
    }

    /// Matrix of `x ↦ u(x)` in the F_q-basis `1, y, …, y^(n-1)` of L; column
    /// `j` holds the image of the `j`-th basis vector.
    pub fn matrix_over_fq(&self, ctx: &FieldCtx) -> FqMatrix {
        let n = ctx.n() as usize;
        let mut m = FqMatrix::zeros(n, n);
        let q = ctx.q();
        let mut basis = 1u32;
        for j in 0..n {
            let img = self.apply(ctx.l().elem(basis), ctx);
            for (i, c) in ctx.fq_coords(img).into_iter().enumerate() {
                m.set(i, j, c);
            }
            basis *= q;
        }
        m
    }

    /// Debug text `a0 + a1*t + a2*t^2`, coefficients as element indices.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.c
            .iter()
            .enumerate()
            .map(|(i, a)| match i {
                0 => format!("{a}"),
                1 => format!("{a}*t"),
                _ => format!("{a}*t^{i}"),
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_ctx;
    use proptest::prelude::*;

    fn ctx9() -> FieldCtx {
        make_ctx(3, 1, 2).unwrap()
    }

    fn from_idx(c: &[u32], ctx: &FieldCtx) -> OrePoly {
        OrePoly::from_coeffs(c.iter().map(|&i| ctx.l().elem(i)).collect())
    }

    #[test]
    fn commutation_rule() {
        let ctx = ctx9();
        for lam in ctx.elements() {
            let lhs = OrePoly::tau().mul(&OrePoly::constant(lam), &ctx);
            let rhs = OrePoly::constant(ctx.frobenius_q(lam)).mul(&OrePoly::tau(), &ctx);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn one_is_identity() {
        let ctx = ctx9();
        let u = from_idx(&[3, 5, 0, 7], &ctx);
        assert_eq!(u.mul(&OrePoly::one(), &ctx), u);
        assert_eq!(OrePoly::one().mul(&u, &ctx), u);
    }

    #[test]
    fn apply_basics() {
        let ctx = ctx9();
        let u = from_idx(&[4, 2, 8], &ctx);
        assert_eq!(u.apply(LElem::ZERO, &ctx), LElem::ZERO);
        for x in ctx.elements() {
            assert_eq!(OrePoly::tau().apply(x, &ctx), ctx.frobenius_q(x));
            assert_eq!(OrePoly::tau_pow(2).apply(x, &ctx), x);
        }
    }

    #[test]
    fn apply_is_fq_linear() {
        let ctx = make_ctx(3, 1, 3).unwrap();
        let l = ctx.l();
        let u = from_idx(&[5, 11, 0, 26], &ctx);
        for x in ctx.elements() {
            for y in ctx.elements().step_by(5) {
                for a in ctx.fq().elements() {
                    for b in ctx.fq().elements() {
                        let lhs = u.apply(l.add(ctx.scale(a, x), ctx.scale(b, y)), &ctx);
                        let rhs = l.add(ctx.scale(a, u.apply(x, &ctx)), ctx.scale(b, u.apply(y, &ctx)));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn matrix_examples() {
        let ctx = ctx9();
        assert_eq!(OrePoly::one().matrix_over_fq(&ctx), FqMatrix::identity(2));
        let t = OrePoly::tau().matrix_over_fq(&ctx);
        assert_eq!(t.mul(&t, ctx.fq()), FqMatrix::identity(2));
        let u = from_idx(&[1, 2], &ctx);
        let v = from_idx(&[7, 0, 3], &ctx);
        assert_eq!(
            u.add(&v, &ctx).matrix_over_fq(&ctx),
            u.matrix_over_fq(&ctx).add(&v.matrix_over_fq(&ctx), ctx.fq())
        );
    }

    fn arb_ore(size: u32, max_deg: usize) -> impl Strategy<Value = Vec<u32>> {
        proptest::collection::vec(0..size, 0..=max_deg + 1)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn associativity(a in arb_ore(9, 3), b in arb_ore(9, 3), c in arb_ore(9, 3)) {
            let ctx = ctx9();
            let (a, b, c) = (from_idx(&a, &ctx), from_idx(&b, &ctx), from_idx(&c, &ctx));
            prop_assert_eq!(a.mul(&b, &ctx).mul(&c, &ctx), a.mul(&b.mul(&c, &ctx), &ctx));
            prop_assert_eq!(a.mul(&b.add(&c, &ctx), &ctx), a.mul(&b, &ctx).add(&a.mul(&c, &ctx), &ctx));
        }

        #[test]
        fn apply_composes(a in arb_ore(9, 3), b in arb_ore(9, 3)) {
            let ctx = ctx9();
            let (a, b) = (from_idx(&a, &ctx), from_idx(&b, &ctx));
            let ab = a.mul(&b, &ctx);
            for x in ctx.elements() {
                prop_assert_eq!(ab.apply(x, &ctx), a.apply(b.apply(x, &ctx), &ctx));
            }
        }

        #[test]
        fn matrix_is_multiplicative(a in arb_ore(27, 3), b in arb_ore(27, 3)) {
            let ctx = make_ctx(3, 1, 3).unwrap();
            let (a, b) = (from_idx(&a, &ctx), from_idx(&b, &ctx));
            prop_assert_eq!(
                a.mul(&b, &ctx).matrix_over_fq(&ctx),
                a.matrix_over_fq(&ctx).mul(&b.matrix_over_fq(&ctx), ctx.fq())
            );
        }
    }
}
