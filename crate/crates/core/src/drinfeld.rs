//! Rank-2 Drinfeld modules `Φ_T = θ + gτ + Δτ²` over L.

use serde::Serialize;

use crate::apoly::APoly;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FqElem, LElem};
use crate::linalg::{solve, FqMatrix, Solution};
use crate::ore::OrePoly;

/// The structure map γ: A → L, fixed by `θ = γ(T)`.
#[derive(Debug, Clone)]
pub struct GammaCtx {
    ctx: FieldCtx,
    theta: LElem,
    p: APoly,
    d: u32,
    m: u32,
    p_pow_m: APoly,
}

impl GammaCtx {
    /// `P` is the lex-least monic irreducible of degree `d`, `θ` its least root in L.
    pub fn new(ctx: FieldCtx, d: u32) -> Result<Self> {
        if d == 0 || ctx.n() % d != 0 {
            return Err(Error::InvalidParameter(format!("d = {d} must divide n = {}", ctx.n())));
        }
        let p = APoly::lex_least_irreducible(d as usize, ctx.fq())?;
        let theta = ctx
            .elements()
            .find(|&x| p.eval_l(x, &ctx).is_zero())
            .expect("an irreducible of degree dividing n splits in L");
        Self::with_theta(ctx, theta)
    }

    pub fn with_theta(ctx: FieldCtx, theta: LElem) -> Result<Self> {
        let p = ctx.min_poly_over_fq(theta);
        let d = p.deg().expect("minimal polynomial is nonzero") as u32;
        let m = ctx.n() / d;
        let p_pow_m = p.pow(m as u64, ctx.fq());
        Ok(GammaCtx { ctx, theta, p, d, m, p_pow_m })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn theta(&self) -> LElem {
        self.theta
    }
    /// The A-characteristic P = ker γ.
    pub fn characteristic(&self) -> &APoly {
        &self.p
    }
    pub fn d(&self) -> u32 {
        self.d
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    /// `P^m`.
    pub fn p_pow_m(&self) -> &APoly {
        &self.p_pow_m
    }

    pub fn module(&self, g: LElem, delta: LElem) -> Result<DrinfeldModule<'_>> {
        DrinfeldModule::new(self, g, delta)
    }
}

/// Invariant factors `i1 | i2` with `L^Φ ≅ A/(i1) ⊕ A/(i2)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuleShape {
    pub i1: APoly,
    pub i2: APoly,
}

impl ModuleShape {
    pub fn is_cyclic(&self) -> bool {
        self.i1.is_one()
    }
}

/// `P_Φ(X) = X² − cX + μP^m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharPoly {
    pub c: APoly,
    pub mu: FqElem,
}

impl CharPoly {
    /// `P_Φ(1) = 1 − c + μP^m`.
    pub fn at_one(&self, gamma: &GammaCtx) -> APoly {
        let f = gamma.ctx.fq();
        APoly::one().sub(&self.c, f).add(&gamma.p_pow_m.scale(self.mu, f), f)
    }
}

/// `disc(A[F]) = c² − 4μP^m`.
pub fn frobenius_disc(cp: &CharPoly, gamma: &GammaCtx) -> APoly {
    let f = gamma.ctx.fq();
    let four_mu = f.mul(f.from_int(4), cp.mu);
    cp.c.mul(&cp.c, f).sub(&gamma.p_pow_m.scale(four_mu, f), f)
}

/// Twist orbit of `(g, Δ)` under `c ∈ L*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TwistOrbit {
    /// Lexicographically least `(g, Δ)` in the orbit.
    pub rep: (LElem, LElem),
    pub size: u32,
    /// `#Aut_L(Φ)`, the stabilizer order in L*.
    pub automorphisms: u32,
}

#[derive(Debug, Clone, Copy)]
pub struct DrinfeldModule<'a> {
    gamma: &'a GammaCtx,
    g: LElem,
    delta: LElem,
}

impl<'a> DrinfeldModule<'a> {
    pub fn new(gamma: &'a GammaCtx, g: LElem, delta: LElem) -> Result<Self> {
        if delta.is_zero() {
            return Err(Error::InvalidParameter("delta must be nonzero for rank 2".into()));
        }
        Ok(DrinfeldModule { gamma, g, delta })
    }

    pub fn g(&self) -> LElem {
        self.g
    }
    pub fn delta(&self) -> LElem {
        self.delta
    }
    pub fn gamma(&self) -> &'a GammaCtx {
        self.gamma
    }

    pub fn phi_t(&self) -> OrePoly {
        OrePoly::from_coeffs(vec![self.gamma.theta, self.g, self.delta])
    }

    /// `Φ_a` by Horner's rule in L{τ}.
    pub fn phi_image(&self, a: &APoly) -> OrePoly {
        let ctx = &self.gamma.ctx;
        let phi_t = self.phi_t();
        a.coeffs().iter().rev().fold(OrePoly::zero(), |acc, &c| {
            acc.mul(&phi_t, ctx).add(&OrePoly::constant(ctx.embed(c)), ctx)
        })
    }

    /// Matrix of `Φ_T` acting on L as an F_q-space.
    pub fn action_matrix(&self) -> FqMatrix {
        self.phi_t().matrix_over_fq(&self.gamma.ctx)
    }

    /// Invariant factors of L with T acting through `Φ_T`.
    pub fn module_shape(&self) -> Result<ModuleShape> {
        let f = self.gamma.ctx.fq();
        let diag = self.action_matrix().characteristic_matrix(f).smith_diagonal(f);
        let mut nontrivial: Vec<APoly> = diag.into_iter().filter(|d| !d.is_one()).collect();
        if nontrivial.len() > 2 {
            return Err(Error::TooManyFactors(nontrivial.len()));
        }
        let i2 = nontrivial.pop().unwrap_or_else(APoly::one);
        let i1 = nontrivial.pop().unwrap_or_else(APoly::one);
        Ok(ModuleShape { i1, i2 })
    }

    /// The pair `(c, μ)` with `F² − Φ_c F + μΦ_{P^m} = 0`, `F = τ^n`.
    ///
    /// Writing `c = Σ c_j T^j` with `deg c ≤ n`, the relation is F_q-linear in
    /// `(c_0, …, c_n, μ)` once every L-coefficient is expanded over F_q. When
    /// the joint system is degenerate (supersingular modules with `F ∈ Φ(A)`),
    /// each `μ ∈ F_q*` is tried separately and the unique pair with zero
    /// discriminant, i.e. `P_Φ = (X − a)²`, is kept.
    pub fn frobenius_charpoly(&self) -> Result<CharPoly> {
        let gamma = self.gamma;
        let ctx = &gamma.ctx;
        let f = ctx.fq();
        let n = ctx.n() as usize;
        let top = 3 * n;
        let phi_t = self.phi_t();
        let frob = OrePoly::tau_pow(n);
        let mut columns = Vec::with_capacity(n + 1);
        let mut power = OrePoly::one();
        for _ in 0..=n {
            columns.push(power.mul(&frob, ctx));
            power = power.mul(&phi_t, ctx);
        }
        let phi_pm = self.phi_image(&gamma.p_pow_m);
        let rhs_poly = OrePoly::tau_pow(2 * n);

        let rows = (top + 1) * n;
        let expand = |u: &OrePoly, out: &mut Vec<FqElem>| {
            for k in 0..=top {
                out.extend(ctx.fq_coords(u.coeff(k)));
            }
        };
        let mut rhs = Vec::with_capacity(rows);
        expand(&rhs_poly, &mut rhs);
        let mut col_data: Vec<Vec<FqElem>> = columns
            .iter()
            .map(|u| {
                let mut v = Vec::with_capacity(rows);
                expand(u, &mut v);
                v
            })
            .collect();
        let mut mu_col = Vec::with_capacity(rows);
        expand(&phi_pm.neg(ctx), &mut mu_col);
        col_data.push(mu_col);

        let build = |cols: &[Vec<FqElem>]| {
            let mut a = FqMatrix::zeros(rows, cols.len());
            for (j, col) in cols.iter().enumerate() {
                for (i, &v) in col.iter().enumerate() {
                    a.set(i, j, v);
                }
            }
            a
        };

        match solve(&build(&col_data), &rhs, f) {
            Solution::Unique(x) => {
                let mu = x[n + 1];
                if mu.is_zero() {
                    return Err(Error::NoSolution);
                }
                Ok(CharPoly { c: APoly::from_coeffs(x[..=n].to_vec()), mu })
            }
            Solution::None => Err(Error::NoSolution),
            Solution::Multiple => {
                let c_cols = build(&col_data[..=n]);
                let mut found = Vec::new();
                for mu in f.elements().skip(1) {
                    let b: Vec<FqElem> = rhs
                        .iter()
                        .zip(&col_data[n + 1])
                        .map(|(&r, &m)| f.sub(r, f.mul(mu, m)))
                        .collect();
                    if let Solution::Unique(x) = solve(&c_cols, &b, f) {
                        found.push(CharPoly { c: APoly::from_coeffs(x), mu });
                    }
                }
                let mut square: Vec<CharPoly> =
                    found.into_iter().filter(|cp| frobenius_disc(cp, gamma).is_zero()).collect();
                match square.len() {
                    0 => Err(Error::NoSolution),
                    1 => Ok(square.pop().unwrap()),
                    _ => Err(Error::MultipleSolutions),
                }
            }
        }
    }

    /// Height one: the τ^d coefficient of `Φ_P` is nonzero.
    pub fn is_ordinary(&self) -> bool {
        let phi_p = self.phi_image(&self.gamma.p);
        !phi_p.coeff(self.gamma.d as usize).is_zero()
    }

    /// Orbit of `(g, Δ)` under `(g, Δ) ↦ (c^(q−1) g, c^(q²−1) Δ)`.
    ///
    /// The action factors through `w = c^(q−1)`, which ranges over the
    /// subgroup of index `q − 1` in L*, acting by `(w g, w^(q+1) Δ)`.
    pub fn twist_orbit(&self) -> TwistOrbit {
        let ctx = &self.gamma.ctx;
        let l = ctx.l();
        let q = ctx.q() as u64;
        let order = l.size() as u64 - 1;
        let h = order / (q - 1);
        let log_g = l.log(self.g).map(u64::from);
        let log_d = l.log(self.delta).expect("delta nonzero") as u64;
        let mut best = (self.g, self.delta);
        let mut stab = 0u32;
        for k in 0..h {
            let shift = k * (q - 1);
            let g = log_g.map_or(LElem::ZERO, |lg| l.exp(lg + shift));
            let d = l.exp(log_d + shift * (q + 1));
            if (g, d) < best {
                best = (g, d);
            }
            if g == self.g && d == self.delta {
                stab += 1;
            }
        }
        let size = (h / stab as u64) as u32;
        TwistOrbit { rep: best, size, automorphisms: (q - 1) as u32 * stab }
    }

    pub fn twist_orbit_representative(&self) -> DrinfeldModule<'a> {
        let (g, delta) = self.twist_orbit().rep;
        DrinfeldModule { gamma: self.gamma, g, delta }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_ctx;
    use proptest::prelude::*;

    fn gamma_with_theta(p: u32, n: u32, theta: u32) -> GammaCtx {
        let ctx = make_ctx(p, 1, n).unwrap();
        let t = ctx.l().elem(theta);
        GammaCtx::with_theta(ctx, t).unwrap()
    }

    #[test]
    fn gamma_selection() {
        let g = GammaCtx::new(make_ctx(3, 1, 2).unwrap(), 2).unwrap();
        assert_eq!((g.d(), g.m()), (2, 1));
        assert!(g.characteristic().eval_l(g.theta(), g.ctx()).is_zero());
        let g = GammaCtx::new(make_ctx(3, 1, 2).unwrap(), 1).unwrap();
        assert_eq!(g.characteristic(), &APoly::x());
        assert_eq!(g.theta(), LElem::ZERO);
        assert!(GammaCtx::new(make_ctx(3, 1, 3).unwrap(), 2).is_err());
    }

    #[test]
    fn zero_delta_rejected() {
        let g = gamma_with_theta(3, 1, 1);
        assert!(g.module(LElem::ONE, LElem::ZERO).is_err());
    }

    #[test]
    fn phi_image_basics() {
        let gamma = gamma_with_theta(3, 2, 4);
        let ctx = gamma.ctx();
        let m = gamma.module(ctx.l().elem(5), ctx.l().elem(7)).unwrap();
        let two = ctx.fq().from_int(2);
        assert_eq!(m.phi_image(&APoly::constant(two)), OrePoly::constant(ctx.embed(two)));
        assert_eq!(m.phi_image(&APoly::x()), m.phi_t());
        let a = APoly::from_ints(&[1, 2, 1], ctx.fq());
        let img = m.phi_image(&a);
        assert_eq!(img.deg(), Some(4));
        assert_eq!(img.coeff(0), a.eval_l(gamma.theta(), ctx));
    }

    #[test]
    fn shape_n1_and_small_example() {
        // Φ_T(x) = x + x^3 + x^9 = 3x = 0 on F_3
        let gamma = gamma_with_theta(3, 1, 1);
        let m = gamma.module(LElem::ONE, LElem::ONE).unwrap();
        for x in gamma.ctx().elements() {
            assert!(m.phi_t().apply(x, gamma.ctx()).is_zero());
        }
        let shape = m.module_shape().unwrap();
        assert_eq!(shape, ModuleShape { i1: APoly::one(), i2: APoly::x() });
        for g in gamma.ctx().elements() {
            for d in gamma.ctx().elements().skip(1) {
                let s = gamma.module(g, d).unwrap().module_shape().unwrap();
                assert!(s.is_cyclic());
                assert_eq!(s.i2.deg(), Some(1));
            }
        }
    }

    #[test]
    fn charpoly_small_example() {
        let gamma = gamma_with_theta(3, 1, 1);
        let f = gamma.ctx().fq();
        let m = gamma.module(LElem::ONE, LElem::ONE).unwrap();
        let cp = m.frobenius_charpoly().unwrap();
        assert_eq!(cp, CharPoly { c: APoly::from_ints(&[2], f), mu: f.from_int(2) });
        // hand expansion: c² − 4μ(T−1) = 4 − 8T + 8 = 12 − 8T ≡ T (mod 3)
        assert_eq!(frobenius_disc(&cp, &gamma), APoly::x());
    }

    #[test]
    fn ordinary_for_d1_iff_g_nonzero() {
        let gamma = gamma_with_theta(3, 1, 1);
        let ss = gamma.module(LElem::ZERO, LElem::ONE).unwrap();
        assert!(!ss.is_ordinary());
        let gamma = gamma_with_theta(5, 2, 2);
        for g in gamma.ctx().elements() {
            for d in gamma.ctx().elements().skip(1).step_by(3) {
                let m = gamma.module(g, d).unwrap();
                let phi_p = m.phi_image(gamma.characteristic());
                assert_eq!(phi_p, OrePoly::from_coeffs(vec![LElem::ZERO, g, d]));
                assert_eq!(m.is_ordinary(), !g.is_zero());
            }
        }
    }

    #[test]
    fn charpoly_kills_frobenius_and_matches_shape() {
        for (p, n, d) in [(3, 2, 1), (3, 2, 2), (3, 3, 1), (3, 3, 3), (2, 3, 1), (5, 2, 2)] {
            let gamma = GammaCtx::new(make_ctx(p, 1, n).unwrap(), d).unwrap();
            let ctx = gamma.ctx();
            let f = ctx.fq();
            for g in ctx.elements() {
                for delta in ctx.elements().skip(1) {
                    let m = gamma.module(g, delta).unwrap();
                    let cp = m.frobenius_charpoly().unwrap();
                    let frob = OrePoly::tau_pow(n as usize);
                    let lhs = frob
                        .mul(&frob, ctx)
                        .sub(&m.phi_image(&cp.c).mul(&frob, ctx), ctx)
                        .add(&m.phi_image(&gamma.p_pow_m().scale(cp.mu, f)), ctx);
                    assert!(lhs.is_zero());
                    assert!(2 * cp.c.deg_i() <= n as i64);
                    let shape = m.module_shape().unwrap();
                    assert_eq!(cp.at_one(&gamma).monic(f).unwrap(), shape.i1.mul(&shape.i2, f));
                    assert_eq!(m.is_ordinary(), !gamma.characteristic().divides(&cp.c, f));
                }
            }
        }
    }

    #[test]
    fn twist_orbit_sizes_divide_group_order() {
        let gamma = GammaCtx::new(make_ctx(3, 1, 2).unwrap(), 1).unwrap();
        let ctx = gamma.ctx();
        let mut reps = std::collections::BTreeSet::new();
        let mut total = 0u32;
        for g in ctx.elements() {
            for d in ctx.elements().skip(1) {
                let o = gamma.module(g, d).unwrap().twist_orbit();
                assert_eq!((ctx.l_size() - 1) % o.size, 0);
                assert_eq!(o.size * o.automorphisms, ctx.l_size() - 1);
                if reps.insert(o.rep) {
                    total += o.size;
                }
            }
        }
        assert_eq!(total, 9 * 8);
        assert_eq!(reps.len(), 24);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn phi_is_a_ring_homomorphism(
            a in proptest::collection::vec(0i64..3, 0..4),
            b in proptest::collection::vec(0i64..3, 0..4),
            g in 0u32..27, d in 1u32..27,
        ) {
            let gamma = GammaCtx::new(make_ctx(3, 1, 3).unwrap(), 3).unwrap();
            let ctx = gamma.ctx();
            let f = ctx.fq();
            let m = gamma.module(ctx.l().elem(g), ctx.l().elem(d)).unwrap();
            let (a, b) = (APoly::from_ints(&a, f), APoly::from_ints(&b, f));
            prop_assert_eq!(m.phi_image(&a.mul(&b, f)), m.phi_image(&a).mul(&m.phi_image(&b), ctx));
            prop_assert_eq!(m.phi_image(&a.add(&b, f)), m.phi_image(&a).add(&m.phi_image(&b), ctx));
        }
    }
}
