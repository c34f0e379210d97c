use super::*;
use eig_solver::eigenvalues_sym;

#[test]
fn random_psd_shape_and_spectrum() {
    for d in [4usize, 64] {
        let inst = gen_random_psd(256, d, 7).unwrap();
        assert_eq!(inst.label, Label::Psd);
        let m = &inst.matrix;
        for i in 0..m.n() {
            assert_eq!(m.get(i, i), 1.0);
            for j in 0..i {
                assert!(m.get(i, j).abs() <= 1.0);
            }
        }
        let ev = eigenvalues_sym(m).unwrap();
        assert!(ev[0] >= -1e-9);
    }
}

#[test]
fn random_psd_rank_one_case() {
    let inst = gen_random_psd(32, 1, 5).unwrap();
    let ev = eigenvalues_sym(&inst.matrix).unwrap();
    assert!((ev[31] - 32.0).abs() < 1e-8);
    for &l in &ev[..31] {
        assert!(l.abs() < 1e-8);
    }
}

#[test]
fn concentrated_instance_depth() {
    let inst = gen_linf_concentrated(1000, 0.1, 0.1, 2).unwrap();
    match inst.label {
        Label::FarLinf(e) => assert!(e >= 0.025, "certified depth {} too shallow", e),
        _ => panic!("wrong label"),
    }
    // alpha = eps^2 puts raw -1 entries in the strip
    let inst = gen_linf_concentrated(400, 0.1, 0.01, 2).unwrap();
    let has_minus_one = (0..400).any(|i| (0..i).any(|j| inst.matrix.get(i, j) == -1.0));
    assert!(has_minus_one);
    // out-of-range alpha rejected
    assert!(gen_linf_concentrated(400, 0.1, 0.005, 2).is_err());
    assert!(gen_linf_concentrated(400, 0.1, 0.2, 2).is_err());
}

#[test]
fn concentrated_closed_form_matches_solver() {
    let inst = gen_linf_concentrated(200, 0.2, 0.1, 9).unwrap();
    let ev = eigenvalues_sym(&inst.matrix).unwrap();
    let e = match inst.label {
        Label::FarLinf(e) => e,
        _ => panic!("wrong label"),
    };
    assert!((ev[0] + e * 200.0).abs() < 1e-8);
}

#[test]
fn linf_lb_pair_shape() {
    let (yes, no) = gen_linf_lb_pair(500, 0.1, 4).unwrap();
    assert_eq!(yes.label, Label::Psd);
    let t = (2.0_f64 * 0.01 * 500.0).round() as usize;
    let nonzero = {
        let mut c = 0usize;
        for i in 0..500 {
            for j in 0..500 {
                if no.matrix.get(i, j) != 0.0 {
                    c += 1;
                }
            }
        }
        c
    };
    assert_eq!(nonzero, 2 * t * (500 - t) + t * t);
    match no.label {
        Label::FarLinf(e) => {
            let ev = eigenvalues_sym(&no.matrix).unwrap();
            assert!((ev[0] + e * 500.0).abs() < 1e-8);
        }
        _ => panic!("wrong label"),
    }
    // band too thin to exist
    assert!(gen_linf_lb_pair(20, 0.05, 4).is_err());
}

#[test]
fn wigner_guard_and_measured_label() {
    assert!(gen_wigner(8, 0).is_err());
    let inst = gen_wigner(128, 3).unwrap();
    match inst.label {
        Label::FarL2(e) => assert!((0.02..0.6).contains(&e), "measured {}", e),
        _ => panic!("wrong label"),
    }
    for i in 0..128 {
        assert_eq!(inst.matrix.get(i, i), 1.0);
    }
}

#[test]
fn cycle_spectra() {
    let ev = eigenvalues_sym(&cycle_adjacency(3).unwrap()).unwrap();
    assert!((ev[0] + 1.0).abs() < 1e-10);
    assert!((ev[1] + 1.0).abs() < 1e-10);
    assert!((ev[2] - 2.0).abs() < 1e-10);
    let ev = eigenvalues_sym(&cycles_adjacency(4, 5).unwrap()).unwrap();
    assert!((ev[0] + 2.0).abs() < 1e-10);
    // every row of a cycle sums to 2
    let c = cycle_adjacency(9).unwrap();
    for i in 0..9 {
        let s: f64 = (0..9).map(|j| c.get(i, j)).sum();
        assert_eq!(s, 2.0);
    }
    assert!(cycle_adjacency(2).is_err());
}

#[test]
fn kron_cases() {
    let id4 = kron(&Mat::identity(2), &Mat::identity(2));
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(id4.get(i, j), if i == j { 1.0 } else { 0.0 });
        }
    }
    let d = Mat::from_vec(2, 2, vec![2.0, 0.0, 0.0, -1.0]);
    let ones = Mat::from_fn(2, 2, |_, _| 1.0);
    let k = kron(&d, &ones);
    let sym = SymmetricMatrix::from_fn(4, 2.0, |i, j| k.get(i, j)).unwrap();
    let ev = eigenvalues_sym(&sym).unwrap();
    assert!((ev[0] + 2.0).abs() < 1e-10);
    assert!(ev[1].abs() < 1e-10);
    assert!(ev[2].abs() < 1e-10);
    assert!((ev[3] - 4.0).abs() < 1e-10);
    assert_eq!(kron(&Mat::zeros(2, 3), &Mat::zeros(4, 5)).rows(), 8);
    assert_eq!(kron(&Mat::zeros(2, 3), &Mat::zeros(4, 5)).cols(), 15);
}

#[test]
fn l2_pair_closed_forms() {
    let lambda = -2.0 * (8.0 * std::f64::consts::PI / 9.0).cos();
    assert!((lambda - 1.8793852416).abs() < 1e-9);
    assert!((l2_no_block_min_eigenvalue(4) + 0.0603074).abs() < 1e-6);
    let (yes, no) = gen_l2_lb_pair_with_d0(360, 4, 4, 11).unwrap();
    // m = 360 / (9*4) = 10; NO blocks reach (lambda-2)/2 * m
    let ev_yes = eigenvalues_sym(&yes.matrix).unwrap();
    assert!(ev_yes[0] >= -1e-10);
    let ev_no = eigenvalues_sym(&no.matrix).unwrap();
    let expect = l2_no_block_min_eigenvalue(4) * 10.0;
    assert!((ev_no[0] - expect).abs() < 1e-8, "{} vs {}", ev_no[0], expect);
    // matched seeds share the layout: diagonals agree entrywise
    for i in 0..360 {
        assert_eq!(yes.matrix.get(i, i), no.matrix.get(i, i));
    }
    // and entries differ only inside blocks: a difference at (i,j) means
    // both i and j carry block mass on the diagonal
    for i in 0..360 {
        for j in 0..i {
            if yes.matrix.get(i, j) != no.matrix.get(i, j) {
                assert!(yes.matrix.get(i, i) != 0.0 && yes.matrix.get(j, j) != 0.0);
            }
        }
    }
    match no.label {
        Label::FarL2(e) => {
            let mass: f64 = ev_no.iter().filter(|&&l| l < 0.0).map(|l| l * l).sum();
            assert!((e * 360.0 * 360.0 - mass).abs() < 1e-6);
        }
        _ => panic!("wrong label"),
    }
    assert!(gen_l2_lb_pair_with_d0(10, 4, 4, 0).is_err());
}

#[test]
fn schatten_pair_matches_cotangent_formula() {
    // k=2, d=8, block width 16, m=1 at n=32
    let pair = gen_schatten_lb_pair(32, 2, 6).unwrap();
    let pi = std::f64::consts::PI;
    let cot = |x: f64| x.cos() / x.sin();
    let expect_high = 2.0 * 4.0 * cot(pi / 16.0);
    let expect_low = 2.0 * 8.0 * cot(pi / 8.0);
    assert!((pair.high_value - expect_high).abs() < 1e-7);
    assert!((pair.low_value - expect_low).abs() < 1e-7);
    assert!(pair.high_value > pair.low_value);
    assert!(gen_schatten_lb_pair(32, 1, 0).is_err());
}

#[test]
fn kyfan_pair_exact_top_values() {
    // s=2: d0=3, d=7; n=28 gives m=2, so the high side is exactly s*m = 4
    let pair = gen_kyfan_lb_pair(28, 2, 8).unwrap();
    assert!((pair.high_value - 4.0).abs() < 1e-8);
    assert!(pair.low_value < pair.high_value);
}

#[test]
fn rowones_rates() {
    let n = 400;
    let pair = gen_rowones_pair(n, 0.1, 12).unwrap();
    let sigma = |p: f64| (n as f64 * p * (1.0 - p)).sqrt();
    let p1 = 0.7;
    let p2 = 0.3;
    assert!((pair.high_one_rows as f64 - p1 * n as f64).abs() <= 3.0 * sigma(p1));
    assert!((pair.low_one_rows as f64 - p2 * n as f64).abs() <= 3.0 * sigma(p2));
    assert_eq!(pair.high_frobenius_sq, (pair.high_one_rows * n) as f64);
    assert!(gen_rowones_pair(n, 0.3, 0).is_err());
}
