//! Exhaustive census of rank-2 Drinfeld modules for a fixed γ, aggregation
//! into isomorphism and isogeny classes, cyclicity statistics and an audit of
//! the closed-form counting claims.
//!
//! Modules are enumerated as `(g, Δ)` with `g` outer and `Δ ≠ 0` inner, both
//! in element order. Per-module work may run in parallel; aggregation always
//! consumes records in enumeration order so reports are byte-stable.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::apoly::APoly;
use crate::drinfeld::{frobenius_disc, CharPoly, GammaCtx, ModuleShape, TwistOrbit};
use crate::error::{Error, Result};
use crate::field::LElem;
use crate::par;
use crate::quadclass;

pub const SCHEMA_VERSION: u32 = 1;

/// Exact rational statistic, serialized as `"num/den"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Frac(pub Ratio<i64>);

impl Frac {
    pub fn new(num: i64, den: i64) -> Self {
        Frac(Ratio::new(num, den))
    }
    pub fn int(v: i64) -> Self {
        Frac(Ratio::from_integer(v))
    }
    pub fn one() -> Self {
        Self::int(1)
    }
    pub fn is_one(&self) -> bool {
        self.0 == Ratio::from_integer(1)
    }
    pub fn to_f64(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }
}

impl std::fmt::Display for Frac {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Serialize for Frac {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl std::ops::Add for Frac {
    type Output = Frac;
    fn add(self, o: Frac) -> Frac {
        Frac(self.0 + o.0)
    }
}

impl std::ops::Sub for Frac {
    type Output = Frac;
    fn sub(self, o: Frac) -> Frac {
        Frac(self.0 - o.0)
    }
}

#[derive(Debug, Clone, Default)]
pub struct CensusOptions {
    /// Worker count; `None` uses every core, `Some(1)` runs sequentially.
    pub jobs: Option<usize>,
}

/// Everything computed for one module `(g, Δ)`.
#[derive(Debug, Clone)]
pub struct ModuleRecord {
    pub g: LElem,
    pub delta: LElem,
    pub orbit: TwistOrbit,
    pub ordinary: bool,
    pub shape: ModuleShape,
    pub charpoly: CharPoly,
}

/// Key of an isogeny class: the Frobenius characteristic polynomial.
pub type IsogenyClassKey = CharPoly;

#[derive(Debug, Clone, Serialize)]
pub struct Parameters {
    pub p: u32,
    pub s: u32,
    pub q: u32,
    pub n: u32,
    pub d: u32,
    pub m: u32,
    pub characteristic: String,
    pub theta: LElem,
    pub base_modulus: String,
    pub ext_modulus: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Totals {
    pub modules: u64,
    pub iso_classes: u64,
    pub supersingular_iso_classes: u64,
    pub ordinary_iso_classes: u64,
    pub cyclic_iso_classes: u64,
    pub noncyclic_iso_classes: u64,
    pub ordinary_isogeny_classes: u64,
    /// `(c, μ)` with `deg c ≤ md/2`, `μ ≠ 0` and `P ∤ c`.
    pub admissible_pairs: u64,
    pub isogeny_all_cyclic: u64,
    pub isogeny_any_noncyclic: u64,
    pub isogeny_any_cyclic: u64,
    pub isogeny_all_noncyclic: u64,
}

/// Cyclicity ratios. `c0`/`n0` use the all-members rule; the any-member
/// reading is kept alongside.
#[derive(Debug, Clone, Serialize)]
pub struct Statistics {
    pub c: Frac,
    pub n: Frac,
    pub c0: Frac,
    pub n0: Frac,
    pub c0_any_member: Frac,
    pub n0_all_members: Frac,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShapeCount {
    pub i1: String,
    pub i2: String,
    pub count: u64,
    /// `H(disc / i1²)` when defined.
    pub hurwitz_smaller: Option<u64>,
    /// `H(disc / i2²)` when defined.
    pub hurwitz_larger: Option<u64>,
    /// Number of iso classes whose smaller factor is a multiple of this `i1`.
    pub cumulative: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct IsogenyClassRecord {
    pub c: String,
    pub mu: u32,
    /// Number of L-isomorphism classes in the isogeny class.
    pub weight: u64,
    /// `Σ (q − 1) / #Aut`.
    pub weighted: Frac,
    pub automorphism_orders: Vec<u32>,
    pub disc: String,
    pub hurwitz: Option<u64>,
    pub p_at_one: String,
    pub shapes: Vec<ShapeCount>,
    pub predicted_i1: Vec<String>,
    pub observed_i1: Vec<String>,
    pub all_cyclic: bool,
    pub any_cyclic: bool,
    /// Every non-cyclic shape has `i1 | c − 2` and `i1² | P_Φ(1)`.
    pub divisibility_smaller: bool,
    /// The same with `i2` in place of `i1`.
    pub divisibility_larger: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Match,
    Mismatch,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct Claim {
    pub id: String,
    pub statement: String,
    pub claimed_value: Option<String>,
    pub empirical_value: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    pub schema_version: u32,
    pub parameters: Parameters,
    /// `"computed"` or `"skipped (even q)"`.
    pub class_numbers: String,
    pub totals: Totals,
    pub statistics: Statistics,
    pub isogeny_classes: Vec<IsogenyClassRecord>,
    pub claims: Vec<Claim>,
}

fn invariant(g: LElem, delta: LElem, what: impl Into<String>) -> Error {
    Error::Invariant { g: g.index(), delta: delta.index(), what: what.into() }
}

/// Computes one module's record and checks the per-module identities.
pub fn evaluate_module(gamma: &GammaCtx, g: LElem, delta: LElem) -> Result<ModuleRecord> {
    let ctx = gamma.ctx();
    let f = ctx.fq();
    let module = gamma.module(g, delta)?;
    let wrap = |e: Error| invariant(g, delta, e.to_string());
    let shape = module.module_shape().map_err(wrap)?;
    let charpoly = module.frobenius_charpoly().map_err(wrap)?;
    let ordinary = module.is_ordinary();
    let n = ctx.n() as i64;
    if shape.i1.deg_i() + shape.i2.deg_i() != n {
        return Err(invariant(g, delta, "deg i1 + deg i2 != n"));
    }
    if charpoly.at_one(gamma).monic(f).map_err(wrap)? != shape.i1.mul(&shape.i2, f) {
        return Err(invariant(g, delta, "monic(P(1)) != i1*i2"));
    }
    if 2 * charpoly.c.deg_i() > n {
        return Err(invariant(g, delta, "deg c > md/2"));
    }
    if ordinary == gamma.characteristic().divides(&charpoly.c, f) {
        return Err(invariant(g, delta, "height criterion disagrees with P | c"));
    }
    Ok(ModuleRecord { g, delta, orbit: module.twist_orbit(), ordinary, shape, charpoly })
}

/// Every module record in enumeration order.
pub fn enumerate_modules(gamma: &GammaCtx, opts: &CensusOptions) -> Result<Vec<ModuleRecord>> {
    let l = gamma.ctx().l();
    let size = l.size() as usize;
    let total = size * (size - 1);
    par::map_indexed(total, opts.jobs, |k| {
        let g = l.elem((k / (size - 1)) as u32);
        let delta = l.elem((k % (size - 1) + 1) as u32);
        evaluate_module(gamma, g, delta)
    })
    .into_iter()
    .collect()
}

struct OrbitAgg {
    first: (LElem, LElem),
    size: u32,
    automorphisms: u32,
    members: u32,
    ordinary: bool,
    shape: ModuleShape,
    charpoly: CharPoly,
}

struct HurwitzMemo<'a> {
    gamma: &'a GammaCtx,
    h: BTreeMap<APoly, u64>,
}

impl HurwitzMemo<'_> {
    fn class_number(&mut self, d: &APoly) -> Result<u64> {
        if let Some(&h) = self.h.get(d) {
            return Ok(h);
        }
        let h = quadclass::class_number(d, self.gamma.ctx())?.h;
        self.h.insert(d.clone(), h);
        Ok(h)
    }

    fn hurwitz(&mut self, d: &APoly) -> Result<u64> {
        let f = self.gamma.ctx().fq();
        let mut total = 0;
        for l in d.square_divisors(f)? {
            total += self.class_number(&d.div_exact(&l.mul(&l, f), f)?)?;
        }
        Ok(total)
    }

    /// `H(d / x²)` if `x² | d`.
    fn hurwitz_quotient(&mut self, d: &APoly, x: &APoly) -> Result<Option<u64>> {
        let f = self.gamma.ctx().fq();
        let sq = x.mul(x, f);
        if !sq.divides(d, f) {
            return Ok(None);
        }
        self.hurwitz(&d.div_exact(&sq, f)?).map(Some)
    }
}

pub fn run_census(gamma: &GammaCtx, opts: &CensusOptions) -> Result<CensusReport> {
    let records = enumerate_modules(gamma, opts)?;
    aggregate(gamma, &records)
}

/// Builds the report from records in enumeration order.
pub fn aggregate(gamma: &GammaCtx, records: &[ModuleRecord]) -> Result<CensusReport> {
    let ctx = gamma.ctx();
    let f = ctx.fq();
    let q = ctx.q() as i64;
    let size = ctx.l_size() as u64;

    let mut orbits: BTreeMap<(LElem, LElem), OrbitAgg> = BTreeMap::new();
    for rec in records {
        let agg = orbits.entry(rec.orbit.rep).or_insert_with(|| OrbitAgg {
            first: (rec.g, rec.delta),
            size: rec.orbit.size,
            automorphisms: rec.orbit.automorphisms,
            members: 0,
            ordinary: rec.ordinary,
            shape: rec.shape.clone(),
            charpoly: rec.charpoly.clone(),
        });
        agg.members += 1;
        if agg.size != rec.orbit.size
            || agg.ordinary != rec.ordinary
            || agg.shape != rec.shape
            || agg.charpoly != rec.charpoly
        {
            return Err(invariant(rec.g, rec.delta, "not twist invariant"));
        }
    }
    let mut size_sum = 0u64;
    for agg in orbits.values() {
        if agg.members != agg.size {
            return Err(invariant(agg.first.0, agg.first.1, "orbit size mismatch"));
        }
        size_sum += agg.size as u64;
    }
    if size_sum != records.len() as u64 || size_sum != size * (size - 1) {
        return Err(Error::Invariant { g: 0, delta: 0, what: "orbit sizes do not partition".into() });
    }

    let ordinary: Vec<&OrbitAgg> = orbits.values().filter(|o| o.ordinary).collect();
    let ordinary_iso = ordinary.len() as u64;
    if ordinary_iso == 0 {
        return Err(Error::Invariant { g: 0, delta: 0, what: "no ordinary modules".into() });
    }
    let cyclic_iso = ordinary.iter().filter(|o| o.shape.is_cyclic()).count() as u64;

    let mut classes: BTreeMap<&CharPoly, Vec<&OrbitAgg>> = BTreeMap::new();
    for o in &ordinary {
        classes.entry(&o.charpoly).or_default().push(o);
    }

    let odd = ctx.p() != 2;
    let mut memo = HurwitzMemo { gamma, h: BTreeMap::new() };
    let mut class_records = Vec::with_capacity(classes.len());
    for (cp, members) in &classes {
        class_records.push(class_record(gamma, cp, members, odd, &mut memo)?);
    }

    let n_classes = class_records.len() as i64;
    let all_cyclic = class_records.iter().filter(|c| c.all_cyclic).count() as i64;
    let any_cyclic = class_records.iter().filter(|c| c.any_cyclic).count() as i64;
    let totals = Totals {
        modules: records.len() as u64,
        iso_classes: orbits.len() as u64,
        supersingular_iso_classes: orbits.len() as u64 - ordinary_iso,
        ordinary_iso_classes: ordinary_iso,
        cyclic_iso_classes: cyclic_iso,
        noncyclic_iso_classes: ordinary_iso - cyclic_iso,
        ordinary_isogeny_classes: n_classes as u64,
        admissible_pairs: admissible_pairs(gamma),
        isogeny_all_cyclic: all_cyclic as u64,
        isogeny_any_noncyclic: (n_classes - all_cyclic) as u64,
        isogeny_any_cyclic: any_cyclic as u64,
        isogeny_all_noncyclic: (n_classes - any_cyclic) as u64,
    };
    let oi = ordinary_iso as i64;
    let statistics = Statistics {
        c: Frac::new(cyclic_iso as i64, oi),
        n: Frac::new(oi - cyclic_iso as i64, oi),
        c0: Frac::new(all_cyclic, n_classes),
        n0: Frac::new(n_classes - all_cyclic, n_classes),
        c0_any_member: Frac::new(any_cyclic, n_classes),
        n0_all_members: Frac::new(n_classes - any_cyclic, n_classes),
    };
    let parameters = Parameters {
        p: ctx.p(),
        s: ctx.s(),
        q: q as u32,
        n: ctx.n(),
        d: gamma.d(),
        m: gamma.m(),
        characteristic: gamma.characteristic().to_text(f),
        theta: gamma.theta(),
        base_modulus: ctx.base_modulus().to_text(ctx.fp()),
        ext_modulus: ctx.ext_modulus().to_text(f),
    };
    let mut report = CensusReport {
        schema_version: SCHEMA_VERSION,
        parameters,
        class_numbers: if odd { "computed".into() } else { "skipped (even q)".into() },
        totals,
        statistics,
        isogeny_classes: class_records,
        claims: Vec::new(),
    };
    report.claims = verify_claims(&report);
    Ok(report)
}

fn class_record(
    gamma: &GammaCtx,
    cp: &CharPoly,
    members: &[&OrbitAgg],
    odd: bool,
    memo: &mut HurwitzMemo<'_>,
) -> Result<IsogenyClassRecord> {
    let f = gamma.ctx().fq();
    let q = gamma.ctx().q() as i64;
    let disc = frobenius_disc(cp, gamma);
    let (g0, d0) = members[0].first;
    if disc.is_zero() && odd {
        return Err(invariant(g0, d0, "ordinary module with zero discriminant"));
    }
    let p1 = cp.at_one(gamma).monic(f)?;
    let c_minus_2 = cp.c.sub(&APoly::from_ints(&[2], f), f);

    let mut histogram: BTreeMap<&ModuleShape, u64> = BTreeMap::new();
    for m in members {
        *histogram.entry(&m.shape).or_default() += 1;
    }
    let observed: BTreeSet<&APoly> = histogram.keys().map(|s| &s.i1).collect();
    let gcd = c_minus_2.gcd(&p1, f);
    let predicted: Vec<APoly> = gcd
        .monic_divisors(f)?
        .into_iter()
        .filter(|i| i.mul(i, f).divides(&p1, f))
        .collect();

    let mut shapes = Vec::with_capacity(histogram.len());
    for (shape, &count) in &histogram {
        let (hs, hl) = if odd {
            (memo.hurwitz_quotient(&disc, &shape.i1)?, memo.hurwitz_quotient(&disc, &shape.i2)?)
        } else {
            (None, None)
        };
        let cumulative = histogram
            .iter()
            .filter(|(s, _)| shape.i1.divides(&s.i1, f))
            .map(|(_, &c)| c)
            .sum();
        shapes.push(ShapeCount {
            i1: shape.i1.to_text(f),
            i2: shape.i2.to_text(f),
            count,
            hurwitz_smaller: hs,
            hurwitz_larger: hl,
            cumulative,
        });
    }
    let divides_both = |x: &APoly| x.divides(&c_minus_2, f) && x.mul(x, f).divides(&p1, f);
    let noncyclic = || histogram.keys().filter(|s| !s.is_cyclic());
    let weighted = members
        .iter()
        .fold(Frac::int(0), |acc, m| acc + Frac::new(q - 1, m.automorphisms as i64));
    Ok(IsogenyClassRecord {
        c: cp.c.to_text(f),
        mu: cp.mu.index(),
        weight: members.len() as u64,
        weighted,
        automorphism_orders: members
            .iter()
            .map(|m| m.automorphisms)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect(),
        disc: disc.to_text(f),
        hurwitz: if odd { Some(memo.hurwitz(&disc)?) } else { None },
        p_at_one: p1.to_text(f),
        shapes,
        predicted_i1: predicted.iter().map(|p| p.to_text(f)).collect(),
        observed_i1: observed.iter().map(|p| p.to_text(f)).collect(),
        all_cyclic: histogram.keys().all(|s| s.is_cyclic()),
        any_cyclic: histogram.keys().any(|s| s.is_cyclic()),
        divisibility_smaller: noncyclic().all(|s| divides_both(&s.i1)),
        divisibility_larger: noncyclic().all(|s| divides_both(&s.i2)),
    })
}

/// Pairs `(c, μ)` with `deg c ≤ ⌊md/2⌋`, `μ ∈ F_q*`, `P ∤ c`.
fn admissible_pairs(gamma: &GammaCtx) -> u64 {
    let f = gamma.ctx().fq();
    let q = f.size() as u64;
    let bound = gamma.ctx().n() as usize / 2;
    let mut count = 0;
    for k in 0..q.pow(bound as u32 + 1) {
        let mut idx = k;
        let coeffs = (0..=bound)
            .map(|_| {
                let e = f.elem((idx % q) as u32);
                idx /= q;
                e
            })
            .collect();
        let c = APoly::from_coeffs(coeffs);
        if !gamma.characteristic().divides(&c, f) {
            count += 1;
        }
    }
    count * (q - 1)
}

fn qpow(q: i64, e: i64) -> Frac {
    if e >= 0 {
        Frac::int(q.pow(e as u32))
    } else {
        Frac::new(1, q.pow((-e) as u32))
    }
}

/// Closed-form count of L-isomorphism classes of rank-2 modules.
pub fn iso_class_formula(q: i64, n: u32) -> i64 {
    if n % 2 == 1 {
        (q - 1) * q.pow(n)
    } else {
        q.pow(n + 1) - q.pow(n) + q * q - q
    }
}

/// Closed-form count of supersingular L-isomorphism classes, `q^gcd(2,n) − 1`.
pub fn supersingular_formula(q: i64, n: u32) -> i64 {
    q.pow(if n % 2 == 0 { 2 } else { 1 }) - 1
}

/// Closed-form count of ordinary isogeny classes; brackets read as floor.
pub fn isogeny_class_formula(q: i64, d: u32, m: u32) -> Frac {
    let (d, m) = (d as i64, m as i64);
    let q1 = Frac::int(q - 1);
    let times = |a: Frac, b: Frac| Frac(a.0 * b.0);
    if m % 2 == 1 && d % 2 == 1 {
        let inner = qpow(q, (m * d).div_euclid(2) + 1) - qpow(q, ((m - 2) * d).div_euclid(2) + 1)
            + Frac::one();
        times(q1, inner)
    } else {
        let inner = times(Frac::new(q - 1, 2), qpow(q, m * d / 2)) - qpow(q, (m - 2) * d / 2)
            + Frac::one();
        times(q1, inner)
    }
}

/// Closed-form C₀ for the two small non-trivial cases, with the isogeny-class
/// denominator each form uses.
pub fn closed_form_c0(q: i64, d: u32, m: u32) -> Option<(Frac, i64)> {
    let base = q * (q - 1);
    if base <= 2 {
        return None;
    }
    match (d, m) {
        (2, 1) => Some((Frac::new(base - 5, base - 2), base - 2)),
        (1, 2) => Some((Frac::new(base - 4, base - 2), base - 2)),
        _ => None,
    }
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Match
    } else {
        Verdict::Mismatch
    }
}

/// Evaluates every closed-form claim against the census. Verdicts never feed
/// back into the statistics.
pub fn verify_claims(r: &CensusReport) -> Vec<Claim> {
    let p = &r.parameters;
    let t = &r.totals;
    let st = &r.statistics;
    let q = p.q as i64;
    let mut out = Vec::new();
    let mut push = |id: &str, statement: &str, claimed: Option<String>, emp: String, v: Verdict, note: Option<String>| {
        out.push(Claim {
            id: id.into(),
            statement: statement.into(),
            claimed_value: claimed,
            empirical_value: emp,
            verdict: v,
            note,
        })
    };

    let iso = iso_class_formula(q, p.n);
    push(
        "iso-class-count",
        "#L-iso classes = (q-1)q^n (n odd), q^(n+1)-q^n+q^2-q (n even)",
        Some(iso.to_string()),
        t.iso_classes.to_string(),
        verdict(iso == t.iso_classes as i64),
        None,
    );
    let ss = supersingular_formula(q, p.n);
    push(
        "supersingular-count",
        "#supersingular L-iso classes = q^gcd(2,n) - 1",
        Some(ss.to_string()),
        t.supersingular_iso_classes.to_string(),
        verdict(ss == t.supersingular_iso_classes as i64),
        None,
    );
    let iso_formula = isogeny_class_formula(q, p.d, p.m);
    push(
        "isogeny-class-count",
        "#ordinary isogeny classes closed form (bracket=floor)",
        Some(iso_formula.to_string()),
        t.ordinary_isogeny_classes.to_string(),
        verdict(iso_formula == Frac::int(t.ordinary_isogeny_classes as i64)),
        Some(format!("admissible (c, mu) pairs: {}", t.admissible_pairs)),
    );
    push(
        "isogeny-class-count-admissible",
        "closed form vs admissible (c, mu) pairs (bracket=floor)",
        Some(iso_formula.to_string()),
        t.admissible_pairs.to_string(),
        verdict(iso_formula == Frac::int(t.admissible_pairs as i64)),
        None,
    );
    if p.n == 2 {
        let v = q * q * q - q * q - q + 1;
        push(
            "ordinary-iso-count",
            "#ordinary L-iso classes = q^3 - q^2 - q + 1 (n = 2)",
            Some(v.to_string()),
            t.ordinary_iso_classes.to_string(),
            verdict(v == t.ordinary_iso_classes as i64),
            None,
        );
    }
    if let Some((c0, denom)) = closed_form_c0(q, p.d, p.m) {
        push(
            "isogeny-class-denominator",
            "#ordinary isogeny classes = q(q-1) - 2",
            Some(denom.to_string()),
            t.ordinary_isogeny_classes.to_string(),
            verdict(denom == t.ordinary_isogeny_classes as i64),
            Some(format!("closed form (bracket=floor) gives {iso_formula}")),
        );
        let statement = if p.d == 2 {
            "C0 = (q(q-1)-5)/(q(q-1)-2)"
        } else {
            "C0 = ((q-1)q-4)/((q-1)q-2)"
        };
        push("closed-form-c0", statement, Some(c0.to_string()), st.c0.to_string(), verdict(c0 == st.c0), None);
    }
    push(
        "ratio-complements",
        "C + N = 1 and C0 + N0 = 1",
        Some("1/1, 1/1".into()),
        format!("{}, {}", st.c + st.n, st.c0 + st.n0),
        verdict((st.c + st.n).is_one() && (st.c0 + st.n0).is_one()),
        None,
    );
    let trivial = p.d == 1 && p.m == 1;
    let all_one = st.c.is_one() && st.c0.is_one();
    push(
        "cyclic-iff-trivial",
        "C = C0 = 1 exactly when d = m = 1",
        Some(if trivial { "C = C0 = 1" } else { "C < 1 or C0 < 1" }.into()),
        format!("C = {}, C0 = {}", st.c, st.c0),
        verdict(trivial == all_one),
        None,
    );

    let classes = &r.isogeny_classes;
    let n_cls = classes.len();
    let aut_ok = classes.iter().filter(|c| c.automorphism_orders == [p.q - 1]).count();
    push(
        "automorphisms",
        "#Aut_L = q - 1 for every ordinary module (all weights 1)",
        Some((p.q - 1).to_string()),
        format!("{aut_ok}/{n_cls} classes"),
        verdict(aut_ok == n_cls),
        None,
    );
    let weight_ok = classes.iter().filter(|c| c.weighted == Frac::int(c.weight as i64)).count();
    push(
        "weight-is-iso-count",
        "W(F) as a sum of weights equals the number of L-iso classes in the class",
        None,
        format!("{weight_ok}/{n_cls} classes"),
        verdict(weight_ok == n_cls),
        None,
    );
    let odd = p.p != 2;
    let skipped = |id: &str, statement: &str, out: &mut Vec<Claim>| {
        out.push(Claim {
            id: id.into(),
            statement: statement.into(),
            claimed_value: None,
            empirical_value: "-".into(),
            verdict: Verdict::Skipped,
            note: Some("skipped (even q)".into()),
        })
    };
    let w_eq_h = "W(F) = H(disc(A[F])) for every ordinary isogeny class";
    let sc_small = "n(P, i) = H(disc / i1^2) for every observed shape (i = smaller factor)";
    let sc_large = "n(P, i) = H(disc / i2^2) for every observed shape (i = larger factor)";
    let sc_cum = "#{shapes with i1 | i1'} = H(disc / i1^2) for every observed shape";
    if odd {
        let ok = classes.iter().filter(|c| c.hurwitz == Some(c.weight)).count();
        push("weight-equals-hurwitz", w_eq_h, None, format!("{ok}/{n_cls} classes"), verdict(ok == n_cls), None);
        let shapes: Vec<&ShapeCount> = classes.iter().flat_map(|c| &c.shapes).collect();
        let ns = shapes.len();
        let ok = shapes.iter().filter(|s| s.hurwitz_smaller == Some(s.count)).count();
        push("shape-count-hurwitz-smaller", sc_small, None, format!("{ok}/{ns} shapes"), verdict(ok == ns), None);
        let ok = shapes.iter().filter(|s| s.hurwitz_larger == Some(s.count)).count();
        push("shape-count-hurwitz-larger", sc_large, None, format!("{ok}/{ns} shapes"), verdict(ok == ns), None);
        let ok = shapes.iter().filter(|s| s.hurwitz_smaller == Some(s.cumulative)).count();
        push("shape-count-cumulative", sc_cum, None, format!("{ok}/{ns} shapes"), verdict(ok == ns), None);
    } else {
        skipped("weight-equals-hurwitz", w_eq_h, &mut out);
        skipped("shape-count-hurwitz-smaller", sc_small, &mut out);
        skipped("shape-count-hurwitz-larger", sc_large, &mut out);
        skipped("shape-count-cumulative", sc_cum, &mut out);
    }
    let mut push = |id: &str, statement: &str, ok: usize| {
        out.push(Claim {
            id: id.into(),
            statement: statement.into(),
            claimed_value: None,
            empirical_value: format!("{ok}/{n_cls} classes"),
            verdict: verdict(ok == n_cls),
            note: None,
        })
    };
    push(
        "divisibility-smaller",
        "non-cyclic => i1 | c - 2 and i1^2 | P(1)",
        classes.iter().filter(|c| c.divisibility_smaller).count(),
    );
    push(
        "divisibility-larger",
        "non-cyclic => i2 | c - 2 and i2^2 | P(1)",
        classes.iter().filter(|c| c.divisibility_larger).count(),
    );
    push(
        "shape-realization",
        "each isogeny class realizes exactly the i1 with i1 | c - 2, i1^2 | P(1) (one class per shape)",
        classes.iter().filter(|c| c.predicted_i1 == c.observed_i1).count(),
    );
    out
}

/// One row of the limit-trend table.
#[derive(Debug, Clone, Serialize)]
pub struct TrendRow {
    pub q: u32,
    pub c: Frac,
    pub c0: Frac,
    pub one_minus_c: Frac,
    pub one_minus_c0: Frac,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trend {
    pub d: u32,
    pub m: u32,
    pub rows: Vec<TrendRow>,
    pub one_minus_c_strictly_decreasing: bool,
    pub one_minus_c0_strictly_decreasing: bool,
}

/// Tabulates C and C₀ against q for a fixed `(d, m)`. No verdict is drawn.
pub fn cyclicity_trend(reports: &[CensusReport]) -> Result<Trend> {
    let first = reports.first().ok_or_else(|| Error::InvalidParameter("no reports".into()))?;
    let (d, m) = (first.parameters.d, first.parameters.m);
    if reports.iter().any(|r| (r.parameters.d, r.parameters.m) != (d, m)) {
        return Err(Error::MixedParameters);
    }
    let mut rows: Vec<TrendRow> = reports
        .iter()
        .map(|r| TrendRow {
            q: r.parameters.q,
            c: r.statistics.c,
            c0: r.statistics.c0,
            one_minus_c: Frac::one() - r.statistics.c,
            one_minus_c0: Frac::one() - r.statistics.c0,
        })
        .collect();
    rows.sort_by_key(|r| r.q);
    let dec = |key: fn(&TrendRow) -> Frac| rows.windows(2).all(|w| key(&w[1]) < key(&w[0]));
    Ok(Trend {
        d,
        m,
        one_minus_c_strictly_decreasing: dec(|r| r.one_minus_c),
        one_minus_c0_strictly_decreasing: dec(|r| r.one_minus_c0),
        rows,
    })
}

pub fn to_json(report: &CensusReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub const CSV_HEADER: &str = "kind,q,n,d,m,c,mu,weight,disc,hurwitz,p_at_one,shapes,all_cyclic,any_cyclic,\
iso_classes,ordinary_iso_classes,ordinary_isogeny_classes,C,C0,N,N0";

/// One row per isogeny class followed by one summary row.
pub fn to_csv(report: &CensusReport) -> String {
    let p = &report.parameters;
    let head = format!("{},{},{},{}", p.q, p.n, p.d, p.m);
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for c in &report.isogeny_classes {
        let shapes: Vec<String> = c
            .shapes
            .iter()
            .map(|sh| format!("{}|{}:{}", sh.i1, sh.i2, sh.count))
            .collect();
        let h = c.hurwitz.map_or(String::new(), |h| h.to_string());
        s.push_str(&format!(
            "class,{head},{},{},{},{},{h},{},{},{},{},,,,,,,\n",
            c.c,
            c.mu,
            c.weight,
            c.disc,
            c.p_at_one,
            shapes.join(";"),
            c.all_cyclic,
            c.any_cyclic
        ));
    }
    let t = &report.totals;
    let st = &report.statistics;
    s.push_str(&format!(
        "summary,{head},,,,,,,,,,{},{},{},{},{},{},{}\n",
        t.iso_classes, t.ordinary_iso_classes, t.ordinary_isogeny_classes, st.c, st.c0, st.n, st.n0
    ));
    s
}

/// `(q, n, d)` for every `q`, `n` with `q^n ≤ max` and every `d | n`.
pub fn grid_cases(qs: &[u64], ns: &[u32], max: u64) -> Vec<(u64, u32, u32)> {
    let mut out = Vec::new();
    for &q in qs {
        for &n in ns {
            if q.checked_pow(n).is_some_and(|s| s <= max) {
                out.extend((1..=n).filter(|d| n % d == 0).map(|d| (q, n, d)));
            }
        }
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Claim verdicts of several reports as one CSV table.
pub fn claims_table(reports: &[CensusReport]) -> String {
    let mut s = String::from("q,n,d,m,claim,claimed_value,empirical_value,verdict,note\n");
    for r in reports {
        let p = &r.parameters;
        for c in &r.claims {
            let verdict = match c.verdict {
                Verdict::Match => "match",
                Verdict::Mismatch => "mismatch",
                Verdict::Skipped => "skipped",
            };
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{verdict},{}\n",
                p.q,
                p.n,
                p.d,
                p.m,
                c.id,
                csv_field(c.claimed_value.as_deref().unwrap_or("")),
                csv_field(&c.empirical_value),
                csv_field(c.note.as_deref().unwrap_or(""))
            ));
        }
    }
    s
}
