use coprime::arith::{least_prime_factor, primes_up_to, zeta_inverse_truncated};
use coprime::colouring::*;
use coprime::lattice::{standard_spec, LatticeKind};
use coprime::Error;
use num_traits::ToPrimitive;
use proptest::prelude::*;

/// ∏_{p ≤ 997} (1 − p⁻²), from an independent Python evaluation.
const TRUNC_PRODUCT_997: f64 = 0.608004307306125;

fn z(d: usize) -> coprime::lattice::LatticeSpec {
    standard_spec(&LatticeKind::Hypercubic(d)).unwrap()
}

fn gcd_all(v: &[i64]) -> u64 {
    v.iter().fold(0u64, |g, x| num_integer::gcd(g, x.unsigned_abs()))
}

#[test]
fn truncated_product_matches_python_oracle() {
    let t = zeta_inverse_truncated(2, 997);
    assert!(t.contains_f64(TRUNC_PRODUCT_997), "{t}");
}

#[test]
fn p2_config_picks_one_class_of_four() {
    let l = z(2);
    for seed in 0..20 {
        let c = sample_coset_config(&l, 2, seed).unwrap();
        assert_eq!(c.reps.len(), 1);
        let (p, r) = &c.reps[0];
        assert_eq!(*p, 2);
        assert!(r.iter().all(|&x| (0..2).contains(&x)));
        let w = Window::cube(2, 0, 1).unwrap();
        let col = colour_window(&c, &w).unwrap();
        assert_eq!(col.white_count(), 3);
        assert_eq!(col.colour_at(r), Some(false));
    }
}

#[test]
fn sampling_is_deterministic_and_covers_all_primes() {
    let l = z(3);
    let a = sample_coset_config(&l, 97, 42).unwrap();
    let b = sample_coset_config(&l, 97, 42).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, sample_coset_config(&l, 97, 43).unwrap());
    let primes: Vec<u64> = primes_up_to(97).unwrap().iter().collect();
    assert_eq!(a.reps.iter().map(|r| r.0).collect::<Vec<_>>(), primes);
    for (p, r) in &a.reps {
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|&x| x >= 0 && x < *p as i64));
    }
    assert!(matches!(sample_coset_config(&l, 1, 0), Err(Error::Domain(_))));
}

#[test]
fn p5_representative_is_uniform() {
    let l = z(2);
    let mut counts = [0u64; 25];
    let n = 100_000u64;
    for seed in 0..n {
        let c = sample_coset_config(&l, 5, seed).unwrap();
        let r = c.rep(5).unwrap();
        counts[(r[0] + 5 * r[1]) as usize] += 1;
    }
    let e = n as f64 / 25.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
    // 0.999 quantile of chi-square with 24 degrees of freedom.
    assert!(chi2 < 51.1786, "chi2 = {chi2}");
}

#[test]
fn explicit_small_window() {
    let l = z(2);
    let mut c = sample_coset_config(&l, 2, 0).unwrap();
    c.reps[0].1 = vec![0, 0];
    let col = colour_window(&c, &Window::cube(2, 0, 1).unwrap()).unwrap();
    assert_eq!(col.colour_at(&[0, 0]), Some(false));
    for v in [[0, 1], [1, 0], [1, 1]] {
        assert_eq!(col.colour_at(&v), Some(true));
    }
}

#[test]
fn colour_window_matches_direct_membership() {
    for (kind, lo, hi) in [
        (LatticeKind::Hypercubic(2), -7, 12),
        (LatticeKind::Hypercubic(3), -3, 5),
        (LatticeKind::Triangular, -5, 9),
        (LatticeKind::D(3), -3, 4),
        (LatticeKind::E8, -1, 1),
    ] {
        let l = standard_spec(&kind).unwrap();
        let cfg = sample_coset_config(&l, 11, 9).unwrap();
        let w = Window::cube(l.dim, lo, hi).unwrap();
        let col = colour_window(&cfg, &w).unwrap();
        assert_eq!(col.len() as u64, l.count_in_box(&vec![lo; l.dim], &vec![hi; l.dim]));
        for i in 0..col.len() {
            let v = col.point(i);
            assert!(l.contains(&v));
            let c = l.coefficients(&v).unwrap();
            let black = cfg
                .reps
                .iter()
                .any(|(p, r)| c.iter().zip(r).all(|(x, y)| x.rem_euclid(*p as i64) == *y));
            assert_eq!(col.is_white(i), !black, "{kind} at {v:?}");
            assert_eq!(col.index_of(&v), Some(i));
        }
    }
}

#[test]
fn b2_blocks_never_fully_white() {
    for d in 2..=4 {
        let l = z(d);
        let side = [0, 0, 60, 14, 7][d];
        for seed in 0..10 {
            let cfg = sample_coset_config(&l, 97, seed).unwrap();
            let col = colour_window(&cfg, &Window::cube(d, -3, side - 4).unwrap()).unwrap();
            assert_eq!(count_white_blocks(&col).unwrap(), 0);
        }
    }
    let all = Colouring::all_white(Window::cube(2, 0, 2).unwrap(), Provenance::Synthetic);
    assert_eq!(count_white_blocks(&all).unwrap(), 4);
}

#[test]
fn white_density_2000_square() {
    let l = z(2);
    let w = Window::cube(2, 0, 1999).unwrap();
    let fr: Vec<f64> = (0..20)
        .map(|s| {
            let col = colour_window(&sample_coset_config(&l, 997, 1000 + s).unwrap(), &w).unwrap();
            assert_eq!(count_white_blocks(&col).unwrap(), 0);
            col.white_fraction()
        })
        .collect();
    let n = fr.len() as f64;
    let mean = fr.iter().sum::<f64>() / n;
    let sd = (fr.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let se = sd / n.sqrt();
    assert!((mean - TRUNC_PRODUCT_997).abs() <= 3.0 * se, "mean {mean} se {se}");
}

#[test]
fn oracle_examples() {
    let l = z(2);
    let w = Window::cube(2, -2, 8).unwrap();
    let o = oracle_from_origin(&l, &[0, 0], &w).unwrap();
    assert_eq!(o.colour_at(&[2, 3]), Some(true));
    assert_eq!(o.colour_at(&[4, 6]), Some(false));
    assert_eq!(o.colour_at(&[0, 0]), Some(false));
    assert_eq!(o.colour_at(&[0, 1]), Some(true));
    assert_eq!(o.colour_at(&[0, 2]), Some(false));
    let e8 = standard_spec(&LatticeKind::E8).unwrap();
    let w8 = Window::cube(8, 0, 1).unwrap();
    assert!(matches!(oracle_from_origin(&e8, &[0; 8], &w8), Err(Error::Unsupported(_))));
}

#[test]
fn oracle_coupling_disagreements_are_large_prime_gcds() {
    let l = z(2);
    let x = [1_234_567i64, -2_345_678];
    let w = Window::cube(2, 0, 499).unwrap();
    let cfg = config_from_base_point(&l, 997, &x).unwrap();
    let col = colour_window(&cfg, &w).unwrap();
    let ora = oracle_from_origin(&l, &x, &w).unwrap();
    let mut disagree = 0;
    let mut expected = 0;
    for i in 0..col.len() {
        let v = col.point(i);
        let g = gcd_all(&[v[0] - x[0], v[1] - x[1]]);
        let in_set = g > 1 && least_prime_factor(g).unwrap() > 997;
        expected += in_set as usize;
        let d = col.is_white(i) != ora.is_white(i);
        disagree += d as usize;
        assert_eq!(d, in_set, "at {v:?}");
        if d {
            assert!(col.is_white(i) && !ora.is_white(i));
        }
    }
    assert_eq!(disagree, expected);
    assert!(expected > 0, "window should contain large-prime gcds");
}

#[test]
fn truncation_bound_examples() {
    let w = Window::cube(2, 0, 99).unwrap();
    let b = truncation_error_bound(&w, 997, 2).unwrap().to_f64().unwrap();
    assert!((b - 10_000.0 / 997.0).abs() < 1e-12 && b > 10.0);
    assert!(truncation_error_bound(&w, 1_000_000, 2).unwrap().to_f64().unwrap() <= 1e-2);
    let mut last = f64::INFINITY;
    for p in [2, 3, 97, 997, 10_007] {
        let b = truncation_error_bound(&w, p, 2).unwrap().to_f64().unwrap();
        assert!(b < last);
        last = b;
    }
    assert!(truncation_error_bound(&w, 997, 1).is_err());
}

#[test]
fn infer_contains_true_residues() {
    let l = z(2);
    let w = Window::cube(2, 0, 499).unwrap();
    let mut singleton = 0;
    let seeds = 40;
    for seed in 0..seeds {
        let cfg = sample_coset_config(&l, 97, seed).unwrap();
        let col = colour_window(&cfg, &w).unwrap();
        let inf = infer_cosets(&col, 13).unwrap();
        assert!(inf.warning.is_none());
        assert_eq!(inf.candidates.iter().map(|c| c.0).collect::<Vec<_>>(), vec![2, 3, 5, 7, 11, 13]);
        for (p, cands) in &inf.candidates {
            assert!(cands.contains(&cfg.rep(*p).unwrap().to_vec()), "p = {p}");
        }
        singleton += (inf.candidates[0].1.len() == 1) as usize;
    }
    assert_eq!(singleton, seeds as usize);
    let cfg = sample_coset_config(&l, 5, 1).unwrap();
    let col = colour_window(&cfg, &w).unwrap();
    assert!(infer_cosets(&col, 7).unwrap().warning.is_some());
}

#[test]
fn infer_on_all_white_is_empty() {
    let c = Colouring::all_white(Window::cube(2, 0, 29).unwrap(), Provenance::Synthetic);
    let inf = infer_cosets(&c, 13).unwrap();
    assert!(inf.candidates.iter().all(|(_, v)| v.is_empty()));
    assert!(inf.warning.is_none());
}

#[test]
fn config_round_trip_and_rejections() {
    for kind in [LatticeKind::Hypercubic(2), LatticeKind::D(4), LatticeKind::Triangular] {
        let l = standard_spec(&kind).unwrap();
        let c = sample_coset_config(&l, 101, 5).unwrap();
        let text = save_config(&c);
        assert!(text.starts_with(&format!("coprime-config v1 lattice={} P=101 seed=5 rng=", l.id())));
        assert_eq!(load_config(&text).unwrap(), c);
    }
    let c = sample_coset_config(&z(2), 7, 5).unwrap();
    let text = save_config(&c);
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    lines[4] = "7 7 0".into();
    let out_of_range = lines.join("\n");
    match load_config(&out_of_range) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
        other => panic!("{other:?}"),
    }
    lines[4] = "7 0".into();
    assert!(matches!(load_config(&lines.join("\n")), Err(Error::Parse { line: 5, .. })));
    lines.truncate(4);
    assert!(matches!(load_config(&lines.join("\n")), Err(Error::Parse { .. })));
    assert!(matches!(load_config("nonsense\n"), Err(Error::Parse { line: 1, .. })));
    let skipped = text.replace("\n3 ", "\n4 ");
    assert!(matches!(load_config(&skipped), Err(Error::Parse { line: 3, .. })));
}

#[test]
fn pgm_round_trip_and_golden() {
    let l = z(2);
    let mut c = sample_coset_config(&l, 2, 0).unwrap();
    c.reps[0].1 = vec![0, 0];
    c.rng_id = "chacha8-sha256-v1".into();
    let col = colour_window(&c, &Window::new(vec![0, 0], vec![3, 2]).unwrap()).unwrap();
    let bytes = save_colouring(&col).unwrap();
    let mut golden = b"P5\n# origin=0,0\n# extents=3,2\n# provenance=config lattice=z2 P=2 seed=0 rng=chacha8-sha256-v1\n3 2\n255\n".to_vec();
    golden.extend([0, 255, 0, 255, 255, 255]);
    assert_eq!(bytes, golden);
    assert_eq!(load_colouring(&bytes).unwrap(), col);

    for seed in 0..5 {
        let cfg = sample_coset_config(&z(3), 31, seed).unwrap();
        let col = colour_window(&cfg, &Window::new(vec![-4, 2, 7], vec![9, 5, 3]).unwrap()).unwrap();
        let back = load_colouring(&save_colouring(&col).unwrap()).unwrap();
        assert_eq!(back, col);
    }
    let ora = oracle_from_origin(&l, &[3, -1], &Window::cube(2, 0, 9).unwrap()).unwrap();
    assert_eq!(load_colouring(&save_colouring(&ora).unwrap()).unwrap(), ora);

    let mut broken = golden.clone();
    *broken.last_mut().unwrap() = 17;
    assert!(matches!(load_colouring(&broken), Err(Error::Parse { .. })));
    assert!(matches!(load_colouring(&golden[..golden.len() - 1]), Err(Error::Parse { .. })));
    assert!(matches!(load_colouring(b"P6\n"), Err(Error::Parse { line: 1, .. })));
}

#[test]
fn stats_csv_shape() {
    let col = Colouring::from_fn(Window::cube(2, 0, 3).unwrap(), |v| v[0] != 0);
    let csv = colouring_stats_csv(&col);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "key,value");
    assert!(lines.contains(&"points,16"));
    assert!(lines.contains(&"white,12"));
    assert!(lines.contains(&"white_fraction,0.75"));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn window_translation_matches_shifted_reps(seed in any::<u64>(), dx in -50i64..50, dy in -50i64..50) {
        let l = z(2);
        let cfg = sample_coset_config(&l, 29, seed).unwrap();
        let mut shifted = cfg.clone();
        for (p, r) in &mut shifted.reps {
            r[0] = (r[0] + dx).rem_euclid(*p as i64);
            r[1] = (r[1] + dy).rem_euclid(*p as i64);
        }
        let w = Window::new(vec![-3, 4], vec![17, 11]).unwrap();
        let w2 = Window::new(vec![-3 + dx, 4 + dy], vec![17, 11]).unwrap();
        let a = colour_window(&cfg, &w).unwrap();
        let b = colour_window(&shifted, &w2).unwrap();
        prop_assert!(a.bits().eq(b.bits()));
    }

    #[test]
    fn sublattice_bits_survive_reindexing(seed in any::<u64>()) {
        let l = standard_spec(&LatticeKind::D(3)).unwrap();
        let cfg = sample_coset_config(&l, 13, seed).unwrap();
        let col = colour_window(&cfg, &Window::cube(3, -2, 3).unwrap()).unwrap();
        for i in 0..col.len() {
            prop_assert_eq!(col.colour_at(&col.point(i)), Some(col.is_white(i)));
        }
        prop_assert_eq!(col.colour_at(&[1, 0, 0]), None);
    }
}
