use super::*;
use core_matrix::QueryOracle;

fn defaults() -> LinfConstants {
    LinfConstants::default()
}

fn tiny(n: usize, bound: f64, entries: &[f64]) -> SymmetricMatrix {
    SymmetricMatrix::from_triangle(n, bound, entries.to_vec()).unwrap()
}

/// Dense block of -1 off-diagonal entries on the first s indices, zero
/// diagonal. Its bottom eigenvalue is -(s-1).
fn corner_block(n: usize, s: usize) -> SymmetricMatrix {
    SymmetricMatrix::from_fn(n, 1.0, |i, j| {
        if i != j && i < s && j < s {
            -1.0
        } else {
            0.0
        }
    })
    .unwrap()
}

#[test]
fn schedule_parameter_validation() {
    let c = defaults();
    assert!(matches!(
        build_schedule(64, 0.0, 0.25, &c),
        Err(TesterError::BadEps)
    ));
    assert!(matches!(
        build_schedule(64, 1.0, 0.25, &c),
        Err(TesterError::BadEps)
    ));
    assert!(matches!(
        build_schedule(64, 0.1, 0.0, &c),
        Err(TesterError::BadDelta)
    ));
    assert!(matches!(
        build_schedule(64, 0.1, 1.0, &c),
        Err(TesterError::BadDelta)
    ));
    assert!(matches!(
        build_schedule(1, 0.1, 0.25, &c),
        Err(TesterError::TooSmall)
    ));
}

#[test]
fn schedule_scale_grid() {
    let c = defaults();
    // eps = 1/4: the single power of two 1/8 in (1/16, 1/4), then the top
    // scale 1/4; scales run cheapest submatrix first
    let s = build_schedule(1 << 20, 0.25, 0.25, &c).unwrap();
    assert_eq!(s.scales.len(), 2);
    assert!((s.scales[0].alpha - 0.125).abs() < 1e-15);
    assert!((s.scales[1].alpha - 0.25).abs() < 1e-15);
    // eps = 0.1: alphas 1/64, 1/32, 1/16, 0.1 (1/128 < 0.01 is out)
    let s = build_schedule(1 << 20, 0.1, 0.25, &c).unwrap();
    let alphas: Vec<f64> = s.scales.iter().map(|sc| sc.alpha).collect();
    assert_eq!(alphas.len(), 4);
    assert!((alphas[0] - 0.015625).abs() < 1e-15);
    assert!((alphas[1] - 0.03125).abs() < 1e-15);
    assert!((alphas[2] - 0.0625).abs() < 1e-15);
    assert!((alphas[3] - 0.1).abs() < 1e-15);
    let ks: Vec<usize> = s.scales.iter().map(|sc| sc.k).collect();
    let rs: Vec<usize> = s.scales.iter().map(|sc| sc.reps).collect();
    assert_eq!(ks, vec![15, 29, 58, 93]);
    assert_eq!(rs, vec![523, 131, 33, 13]);
    assert_eq!(s.planned_cost(), 233_031);
    assert_eq!(s.total_query_budget, 233_031);
}

#[test]
fn schedule_budget_within_cap() {
    let c = defaults();
    let cap = |eps: f64, cc: f64| cc / (eps * eps) * (1.0 / eps).log2().powi(3);
    // the headline parameter point stays under the tight cap
    let s = build_schedule(1 << 20, 0.1, 0.25, &c).unwrap();
    assert!((s.planned_cost() as f64) <= cap(0.1, 64.0));
    // a wider grid stays under a slightly looser constant
    for eps in [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.5] {
        let s = build_schedule(1 << 22, eps, 0.25, &c).unwrap();
        assert!(
            (s.planned_cost() as f64) <= cap(eps, 96.0),
            "eps={} cost={} cap={}",
            eps,
            s.planned_cost(),
            cap(eps, 96.0)
        );
    }
}

#[test]
fn schedule_full_read_clamp() {
    let c = defaults();
    // n=10, eps=0.1: 1/eps^2 = 100 >= 55 pairs, so read everything once
    let s = build_schedule(10, 0.1, 0.25, &c).unwrap();
    assert_eq!(s.scales.len(), 1);
    assert_eq!(s.scales[0].k, 10);
    assert_eq!(s.scales[0].reps, 1);
    assert_eq!(s.total_query_budget, 55);
}

#[test]
fn identity_is_psd_under_both_testers() {
    let m = SymmetricMatrix::identity(64);
    let mut o = QueryOracle::new(&m);
    assert!(linf_test(&mut o, 0.2, 0.25, 7).unwrap().is_psd());
    let mut o = QueryOracle::new(&m);
    assert!(warmup_linf_test(&mut o, 0.2, 7).unwrap().is_psd());
}

#[test]
fn two_by_two_boundary_cases() {
    // [[1,-1],[-1,1]] is PSD (lambda_min = 0): never flagged
    let psd = tiny(2, 1.0, &[1.0, -1.0, 1.0]);
    let mut o = QueryOracle::new(&psd);
    assert!(linf_test(&mut o, 0.3, 0.25, 1).unwrap().is_psd());
    // [[1,-1],[-1,0]] has lambda_min = (1-sqrt(5))/2 < 0: the full-read
    // clamp guarantees detection
    let neg = tiny(2, 1.0, &[1.0, -1.0, 0.0]);
    let mut o = QueryOracle::new(&neg);
    let v = linf_test(&mut o, 0.3, 0.25, 1).unwrap();
    let cert = v.certificate().expect("should be flagged");
    let expect = (1.0 - 5.0f64.sqrt()) / 2.0;
    assert!((cert.quadratic_value - expect).abs() < 1e-9);
    assert!(verify_certificate(&neg, cert));
}

#[test]
fn concentrated_block_detected() {
    let m = corner_block(256, 64);
    let mut o = QueryOracle::new(&m);
    let v = linf_test(&mut o, 0.2, 0.25, 3).unwrap();
    let cert = v.certificate().expect("dense negative block missed");
    assert!(cert.quadratic_value < 0.0);
    assert!(verify_certificate(&m, cert));
    assert!(o.query_count() <= 256 * 257 / 2);
    // warm-up tester finds it too
    let mut o = QueryOracle::new(&m);
    let v = warmup_linf_test(&mut o, 0.2, 3).unwrap();
    assert!(verify_certificate(&m, v.certificate().unwrap()));
}

#[test]
fn query_count_respects_budget() {
    let m = SymmetricMatrix::identity(300);
    for seed in 0..5 {
        let c = defaults();
        let s = build_schedule(300, 0.25, 0.25, &c).unwrap();
        let mut o = QueryOracle::new(&m);
        linf_test_scheduled(&mut o, &s, seed).unwrap();
        assert!(o.query_count() <= s.total_query_budget);
    }
}

#[test]
fn sampling_is_monotone_coupled() {
    // lowering the inclusion probability only removes indices
    for seed in 0..4 {
        for (si, rep) in [(0usize, 0usize), (1, 5), (2, 17)] {
            let big = sample_indices(seed, si, rep, 500, 0.3);
            let small = sample_indices(seed, si, rep, 500, 0.1);
            assert!(small.iter().all(|i| big.contains(i)));
        }
    }
}

#[test]
fn sampling_is_deterministic_per_key() {
    let a = sample_indices(9, 2, 13, 400, 0.2);
    let b = sample_indices(9, 2, 13, 400, 0.2);
    assert_eq!(a, b);
    let c = sample_indices(9, 2, 14, 400, 0.2);
    assert_ne!(a, c);
}

#[test]
fn verify_rejects_tampered_certificates() {
    let neg = tiny(2, 1.0, &[1.0, -1.0, 0.0]);
    let mut o = QueryOracle::new(&neg);
    let v = linf_test(&mut o, 0.3, 0.25, 1).unwrap();
    let cert = v.certificate().unwrap().clone();
    assert!(verify_certificate(&neg, &cert));
    // claim a more negative value than the witness achieves
    let mut worse = cert.clone();
    worse.quadratic_value -= 1.0;
    assert!(!verify_certificate(&neg, &worse));
    // non-unit witness
    let mut scaled = cert.clone();
    for w in &mut scaled.witness {
        *w *= 2.0;
    }
    assert!(!verify_certificate(&neg, &scaled));
    // witness length mismatch
    let mut short = cert.clone();
    short.witness.pop();
    assert!(!verify_certificate(&neg, &short));
    // certificate from the wrong matrix
    let psd = SymmetricMatrix::identity(2);
    assert!(!verify_certificate(&psd, &cert));
}

#[test]
fn near_zero_negativity_is_not_flagged() {
    // lambda_min barely below zero, inside the decision band: stays Psd
    let eps_small = 1e-13;
    let m = tiny(2, 1.0, &[eps_small, eps_small, 0.0]);
    let mut o = QueryOracle::new(&m);
    assert!(linf_test(&mut o, 0.3, 0.25, 1).unwrap().is_psd());
}

#[test]
fn constants_roundtrip_serde() {
    let c = defaults();
    let json = serde_json::to_string(&c).unwrap();
    let back: LinfConstants = serde_json::from_str(&json).unwrap();
    assert_eq!(c, back);
}
