use super::*;
use core_matrix::QueryOracle;

fn diag(vals: &[f64]) -> SymmetricMatrix {
    let bound = vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    SymmetricMatrix::from_fn(vals.len(), bound, |i, j| if i == j { vals[i] } else { 0.0 })
        .unwrap()
}

fn cycle(n: usize) -> SymmetricMatrix {
    SymmetricMatrix::from_fn(n, 1.0, |i, j| {
        let d = (i + n - j) % n;
        if d == 1 || d == n - 1 {
            1.0
        } else {
            0.0
        }
    })
    .unwrap()
}

fn rand_sym(n: usize, seed: u64) -> SymmetricMatrix {
    let mut rng = trial_rng(seed, 0);
    SymmetricMatrix::from_fn(n, 1.0, |_, _| rng.gen_range(-1.0..1.0)).unwrap()
}

#[test]
fn psd_distance_cases() {
    assert!((psd_distance_frobenius_sq(&diag(&[1.0, -2.0])).unwrap() - 4.0).abs() < 1e-12);
    assert!(psd_distance_frobenius_sq(&SymmetricMatrix::identity(5)).unwrap() < 1e-12);
    let neg_i = diag(&[-1.0; 6]);
    assert!((psd_distance_frobenius_sq(&neg_i).unwrap() - 6.0).abs() < 1e-10);
}

#[test]
fn project_psd_cases() {
    let m = diag(&[1.0, -2.0]);
    let p = project_psd(&m).unwrap();
    assert!((p.get(0, 0) - 1.0).abs() < 1e-10);
    assert!(p.get(1, 1).abs() < 1e-10);
    assert!(p.get(1, 0).abs() < 1e-10);
    // distance identity
    let diff_sq: f64 = {
        let mut s = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                s += (m.get(i, j) - p.get(i, j)).powi(2);
            }
        }
        s
    };
    assert!((diff_sq - 4.0).abs() < 1e-8);
    // PSD input is a fixed point
    let psd = diag(&[0.5, 2.0]);
    let q = project_psd(&psd).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            assert!((q.get(i, j) - psd.get(i, j)).abs() < 1e-9);
        }
    }
}

#[test]
fn projection_identity_random() {
    for seed in 0..5 {
        let m = rand_sym(16, seed);
        let p = project_psd(&m).unwrap();
        let mut diff_sq = 0.0;
        for i in 0..16 {
            for j in 0..16 {
                diff_sq += (m.get(i, j) - p.get(i, j)).powi(2);
            }
        }
        let d = psd_distance_frobenius_sq(&m).unwrap();
        assert!((diff_sq - d).abs() <= 1e-8 * m.frobenius_sq());
    }
}

#[test]
fn tail_mass_cases() {
    assert!((tail_mass_sym(&SymmetricMatrix::identity(3), 1).unwrap() - 2.0).abs() < 1e-10);
    let ones = Mat::from_fn(3, 3, |_, _| 1.0);
    assert!(tail_mass(&ones, 1).unwrap().abs() < 1e-9);
    // C5 singular values: (2, phi, phi, phi-1, phi-1) with phi = golden ratio
    let tm = tail_mass_sym(&cycle(5), 2).unwrap();
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    let expect = phi * phi + 2.0 * (phi - 1.0) * (phi - 1.0);
    assert!((tm - expect).abs() < 1e-8, "{} vs {}", tm, expect);
}

#[test]
fn schatten_kyfan_cases() {
    assert!((schatten(&Mat::identity(4), 1.0).unwrap() - 4.0).abs() < 1e-9);
    let d = diag(&[3.0, 2.0, 1.0]);
    assert!((kyfan(&d.to_mat(), 2, 1.0).unwrap() - 5.0).abs() < 1e-9);
    let c8 = cycle(8).to_mat();
    let expect = 4.0 * (std::f64::consts::PI / 8.0).cos() / (std::f64::consts::PI / 8.0).sin();
    assert!((schatten(&c8, 1.0).unwrap() - expect).abs() < 1e-8);
    // kyfan over everything equals schatten
    let m = rand_sym(10, 3).to_mat();
    assert!((kyfan(&m, 10, 1.0).unwrap() - schatten(&m, 1.0).unwrap()).abs() < 1e-9);
}

#[test]
fn topheavy_cases() {
    let id = SymmetricMatrix::identity(3);
    for t in 1..=3 {
        assert!(topheavy_violation(&id, t, 1e-9).unwrap().is_none());
    }
    // one-sidedness: -I passes the top-heavy test even though it is not PSD
    let neg = diag(&[-1.0; 4]);
    assert!(topheavy_violation(&neg, 1, 1e-9).unwrap().is_none());
    // trace zero with mass in the tail fails
    let x = SymmetricMatrix::from_triangle(2, 1.0, vec![0.0, 1.0, 0.0]).unwrap();
    let w = topheavy_violation(&x, 1, 1e-9).unwrap().unwrap();
    assert!((w.tail - 1.0).abs() < 1e-9);
    assert!(w.bound.abs() < 1e-12);
    assert!(topheavy_violation(&id, 0, 1e-9).is_err());
}

#[test]
fn schatten_trace_cases() {
    let x = SymmetricMatrix::from_triangle(2, 1.0, vec![0.0, 1.0, 0.0]).unwrap();
    let w = schatten1_trace_violation(&x, 1e-9).unwrap().unwrap();
    assert!((w.schatten1 - 2.0).abs() < 1e-9);
    assert!(schatten1_trace_violation(&SymmetricMatrix::identity(3), 1e-9)
        .unwrap()
        .is_none());
    assert!(schatten1_trace_violation(&diag(&[1.0, -1.0]), 1e-9)
        .unwrap()
        .is_some());
}

#[test]
fn row_col_contribution_cases() {
    let m = rand_sym(8, 11);
    let mut y = vec![0.0; 8];
    y[0] = 1.0;
    for z in row_col_contributions(&m, &y) {
        assert!(z.abs() < 1e-12);
    }
    // sum identity: sum z_i = 2 (y' M y - sum m_ii y_i^2)
    let y: Vec<f64> = (0..8).map(|i| ((i * 7 + 3) % 5) as f64 - 2.0).collect();
    let z = row_col_contributions(&m, &y);
    let sum_z: f64 = z.iter().sum();
    let diag_term: f64 = (0..8).map(|i| m.get(i, i) * y[i] * y[i]).sum();
    let expect = 2.0 * (m.quadratic_form(&y) - diag_term);
    assert!((sum_z - expect).abs() < 1e-9);
}

#[test]
fn bottom_eigenvector_contributions_nonpositive() {
    for seed in 0..5 {
        let m = rand_sym(12, 100 + seed);
        let dec = eigh(&m).unwrap();
        let x = dec.eigenvector(0);
        for z in row_col_contributions(&m, &x) {
            assert!(z <= 1e-9, "contribution {} positive", z);
        }
    }
}

#[test]
fn frobenius_estimator_cases() {
    // zero matrix estimates zero
    let z = SymmetricMatrix::zeros(16);
    let mut o = QueryOracle::new(&z);
    let est = estimate_frobenius_sq(&mut o, 4, 1).unwrap();
    assert_eq!(est.estimate, 0.0);
    // all-ones: estimate is (n s / k)^2 for sample size s
    let ones = SymmetricMatrix::from_fn(16, 1.0, |_, _| 1.0).unwrap();
    let mut o = QueryOracle::new(&ones);
    let est = estimate_frobenius_sq(&mut o, 8, 2).unwrap();
    let s = est.sample_size as f64;
    let expect = (16.0 * s / 8.0).powi(2);
    assert!((est.estimate - expect).abs() < 1e-9);
    assert!(estimate_frobenius_sq(&mut QueryOracle::new(&z), 0, 0).is_err());
    assert!(estimate_frobenius_sq(&mut QueryOracle::new(&z), 17, 0).is_err());
}

#[test]
fn column_sampling_cases() {
    let id = Mat::identity(2);
    let c = sample_columns_spectral(&id, 1, 5);
    assert_eq!((c.rows(), c.cols()), (2, 1));
    let norm_sq: f64 = c.data().iter().map(|v| v * v).sum();
    assert!((norm_sq - 2.0).abs() < 1e-12);
    // column norms scale by sqrt(n/t) exactly
    let m = Mat::from_fn(3, 3, |i, j| (i + j) as f64);
    let t = 2;
    let c = sample_columns_spectral(&m, t, 9);
    let col_norm = |mm: &Mat, j: usize| -> f64 {
        (0..mm.rows()).map(|i| mm.get(i, j).powi(2)).sum::<f64>()
    };
    let orig: Vec<f64> = (0..3).map(|j| col_norm(&m, j)).collect();
    for j in 0..t {
        let nj = col_norm(&c, j) / (3.0 / t as f64);
        assert!(orig.iter().any(|o| (o - nj).abs() < 1e-9));
    }
}

#[test]
fn sandwich_cases() {
    let zero = Mat::zeros(3, 3);
    assert!(check_spectral_sandwich(&zero, &Mat::zeros(3, 2), 0.1, 1).unwrap());
    // m = I2, C = sqrt(2) e_j column: upper side (2+..)I - CC' stays PSD at eps=1, k=1
    let id = Mat::identity(2);
    let c = Mat::from_vec(2, 1, vec![2.0f64.sqrt(), 0.0]);
    assert!(check_spectral_sandwich(&id, &c, 1.0, 1).unwrap());
    // wildly oversized C violates the upper side
    let big = Mat::from_vec(2, 2, vec![10.0, 0.0, 0.0, 10.0]);
    assert!(!check_spectral_sandwich(&id, &big, 0.1, 2).unwrap());
}

#[test]
fn spectral_summary_consistency() {
    let m = rand_sym(10, 42);
    let s = spectral_summary(&m).unwrap();
    assert!(s.negative_mass >= 0.0);
    assert!(s.spectral_psd_distance.powi(2) <= s.negative_mass + 1e-9);
    assert!((s.trace - m.trace()).abs() < 1e-12);
}
