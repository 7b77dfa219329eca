use drinfeld_census::census::{run_census, supersingular_formula, CensusOptions};
use drinfeld_census::drinfeld::GammaCtx;
use drinfeld_census::field::make_ctx;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Supersingular L-isomorphism classes when `L = A/P` and every supersingular
/// j-invariant of a prime of degree `d` is rational over `A/P`. Each `j ≠ 0`
/// carries `q − 1` classes; `j = 0` (supersingular only for odd `d`) carries
/// `gcd(q² − 1, q^d − 1)`. Without the rationality assumption this is an
/// upper bound.
fn prime_field_count(q: i64, d: u32) -> i64 {
    let qd = q.pow(d);
    if d % 2 == 0 {
        (qd - 1) / (q * q - 1) * (q - 1)
    } else {
        let nonzero = q * (q.pow(d - 1) - 1) / (q * q - 1);
        nonzero * (q - 1) + gcd(q * q - 1, qd - 1)
    }
}

#[test]
fn supersingular_count_when_l_is_the_residue_field() {
    for (p, d) in [(3, 1), (3, 2), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2), (2, 2), (2, 3), (2, 4)] {
        let gamma = GammaCtx::new(make_ctx(p, 1, d).unwrap(), d).unwrap();
        let r = run_census(&gamma, &CensusOptions::default()).unwrap();
        let got = r.totals.supersingular_iso_classes as i64;
        let bound = prime_field_count(p as i64, d);
        // For d ≤ 2 there is at most one j ≠ 0, so it is fixed by Galois.
        if d <= 2 {
            assert_eq!(got, bound, "q={p} d={d}");
        } else {
            assert!(got <= bound && got > 0, "q={p} d={d}: {got} > {bound}");
        }
    }
}

#[test]
fn supersingular_count_for_linear_characteristic() {
    for (p, n) in [(2, 2), (2, 3), (3, 2), (3, 4), (5, 2), (2, 4)] {
        let gamma = GammaCtx::new(make_ctx(p, 1, n).unwrap(), 1).unwrap();
        let r = run_census(&gamma, &CensusOptions::default()).unwrap();
        assert_eq!(r.totals.supersingular_iso_classes as i64, supersingular_formula(p as i64, n));
    }
}
