use coprime::arith::*;
use num_traits::ToPrimitive;
use proptest::prelude::*;

// Independent float products over primes up to 10^7 (numpy sieve, fsum of log1p).
const F_2: f64 = 0.322634098717175;
const G_2_2: f64 = 0.189299702784135;
const TWIN_PRIME: f64 = 0.660161815846869573927812110014;
const INV_ZETA_2: f64 = 0.6079271018540267;
const INV_ZETA_3: f64 = 0.8319073725807075;

#[test]
fn line_white_contains_inverse_zeta() {
    let f = line_white_prob(1, 10_000).unwrap();
    assert!(f.contains_f64(INV_ZETA_2), "{f}");
    let coarse = line_white_prob(1, 2).unwrap();
    assert!(coarse.contains_f64(INV_ZETA_2));
    assert!(coarse.contains_interval(&f));
}

#[test]
fn line_white_at_two() {
    let f = line_white_prob(2, 10_000).unwrap();
    assert!(f.contains_f64(F_2), "{f}");
    assert!(f.width().to_f64().unwrap() < 1e-4);
}

#[test]
fn pair_line_values() {
    assert_eq!(pair_line_prob(3, 5, 100).unwrap(), Interval::zero());
    assert!(pair_line_prob(4, 3, 100).is_err());
    let g = pair_line_prob(2, 2, 10_000).unwrap();
    assert!(g.contains_f64(G_2_2), "{g}");
    let f = line_white_prob(2, 10_000).unwrap();
    assert!(g.hi <= f.hi);
}

#[test]
fn twin_prime_enclosures() {
    let c = twin_prime_constant(1_000_000).unwrap();
    assert!(c.contains_f64(TWIN_PRIME), "{c}");
    assert!(c.width().to_f64().unwrap() < 1e-5);
    let coarse = twin_prime_constant(3).unwrap();
    assert!(coarse.contains_interval(&c));
    assert!(twin_prime_constant(2).is_err());
}

#[test]
fn zeta_inverse_values() {
    let z2 = zeta_inverse(2, 10_000).unwrap();
    assert!(z2.contains_f64(INV_ZETA_2));
    assert!(z2.width().to_f64().unwrap() < 1e-4);
    let z3 = zeta_inverse(3, 10_000).unwrap();
    assert!(z3.contains_f64(INV_ZETA_3));
    assert!(zeta_inverse(2, 100).unwrap().contains_interval(&z2));
    let big = zeta_inverse(2, 100_000).unwrap();
    assert_eq!(Rounding::for_cut(100_000), Rounding::Outward256);
    assert!(z2.contains_interval(&big));
}

#[test]
fn theta_identity_exhaustive() {
    for d in (2..=10_000).step_by(2) {
        assert!(theta_divisor_identity_check(d).unwrap(), "d = {d}");
    }
}

#[test]
fn weighted_phi_sum_approaches_inverse_twin_prime() {
    let c = twin_prime_constant(1_000_000).unwrap();
    let mut prev: Option<Interval> = None;
    for n in [1_000u64, 10_000, 100_000, 1_000_000] {
        let s = phi_partial_sum(n, true).unwrap().mul(&c);
        assert!(s.hi <= rat(1, 1), "N = {n}: {s}");
        if let Some(p) = &prev {
            assert!(s.lo > p.hi, "not increasing at N = {n}");
        }
        prev = Some(s);
    }
    assert!(prev.unwrap().lo > rat(99, 100));
}

#[test]
fn unweighted_phi_sum_grows_logarithmically() {
    let mut fitted = 0.0f64;
    for n in [1_000u64, 10_000, 100_000] {
        let s = phi_partial_sum(n, false).unwrap().hi_f64();
        fitted = fitted.max(s / (n as f64).ln());
    }
    println!("fitted constant c in sum phi(k) <= c log N: {fitted:.4}");
    assert!(fitted < 2.0);
}

#[test]
fn pair_ratio_tracks_twin_prime_theta() {
    let c = twin_prime_constant(1_000_000).unwrap().mid_f64();
    let mut fitted = 0.0f64;
    for x in [100u64, 1_000, 10_000] {
        for d in (2..=20).step_by(2) {
            let r = pair_ratio(d, x, 10_000).unwrap();
            let naive = pair_line_prob(d, x, 10_000)
                .unwrap()
                .div(&line_white_prob(x, 10_000).unwrap().mul(&line_white_prob(x, 10_000).unwrap()))
                .unwrap();
            assert!(naive.contains_interval(&r));
            let target = 2.0 * c * theta(d).unwrap().to_f64().unwrap();
            fitted = fitted.max((r.mid_f64() - target).abs() * x as f64);
            if x == 10_000 {
                assert!((r.mid_f64() / target - 1.0).abs() < 0.01, "d = {d}");
            }
        }
    }
    println!("fitted constant c in |g/f^2 - 2 C theta| <= c/x: {fitted:.4}");
}

#[test]
fn diag_term_bounded_by_log() {
    for x in 2..=10_000u64 {
        if x > 200 && x % 97 != 0 && x != 10_000 {
            continue;
        }
        let f = line_white_prob(x, 2).unwrap();
        let lhs = 1.0 / f.lo_f64();
        let rhs = 12.0 * (x as f64).ln();
        assert!(lhs <= rhs, "x = {x}: 1/f = {lhs}, 12 log x = {rhs}");
    }
}

#[test]
fn second_moment_small_and_trend() {
    let r = second_moment_bound(2, 2, 10_000).unwrap();
    assert!(r.r_upper >= rat(0, 1));
    assert!(second_moment_bound(5, 4, 100).is_err());
    let mut prev = None;
    for n in [64u64, 128, 256, 512] {
        let rep = second_moment_bound(n, n, 10_000).unwrap();
        println!("{}", rep.csv_row());
        if let Some(p) = prev {
            assert!(rep.r_upper <= p, "r_upper increased at n = {n}");
        }
        prev = Some(rep.r_upper);
    }
}

#[test]
fn second_moment_csv_shape() {
    let rep = second_moment_bound(8, 8, 100).unwrap();
    let row = rep.csv_row();
    assert_eq!(row.split(',').count(), MOMENT_CSV_HEADER.split(',').count());
    assert!(row.starts_with("8,8,100,"));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn truncated_f_strictly_decreasing(x in 1u64..300, q in 1u64..400) {
        let p = 2 * x + q;
        let a = line_white_truncated(x, p);
        let b = line_white_truncated(x + 1, p);
        prop_assert!(b.hi < a.lo);
    }

    #[test]
    fn pair_between_zero_and_line(d in 1u64..40, extra in 0u64..40, p in 2u64..300) {
        let x = d + extra;
        let g = pair_line_truncated(d, x, p);
        let f = line_white_truncated(x, p);
        prop_assert!(g.lo >= rat(0, 1));
        prop_assert!(g.hi <= f.hi);
        if d % 2 == 1 {
            prop_assert!(g.hi == rat(0, 1));
        }
    }

    #[test]
    fn enclosures_nest(x in 1u64..50, p in 2u64..200, q in 1u64..200) {
        let a = line_white_prob(x, p).unwrap();
        let b = line_white_prob(x, p + q).unwrap();
        prop_assert!(a.contains_interval(&b));
        let za = zeta_inverse(2, p).unwrap();
        let zb = zeta_inverse(2, p + q).unwrap();
        prop_assert!(za.contains_interval(&zb));
    }
}
