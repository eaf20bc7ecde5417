use mflow::flow::*;
use mflow::linalg::{eigenvalues, SpectralFunction, SpectralMatrix};
use mflow::Beta;
use proptest::prelude::*;

fn wigner(n: usize, beta: Beta, frame: Frame) -> FlowSpec<f64> {
    let mut spec = FlowSpec::new(
        SpectralFunction::Constant(0.5),
        SpectralFunction::Constant(1.0),
        SpectralFunction::zero(),
        beta,
        vec![0.0; n],
        0.01,
        vec![0.0, 0.5, 1.0],
    );
    spec.frame = frame;
    spec
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn moment(spectrum: &[f64], k: i32) -> f64 {
    spectrum.iter().map(|x| x.powi(k)).sum::<f64>() / spectrum.len() as f64
}

#[test]
fn noise_entries_have_variance_dt_over_n() {
    let (n, dt) = (40, 0.01);
    for beta in [Beta::Real, Beta::Complex] {
        let mut rng = stream(3, 0);
        let (mut re2, mut im2, mut count) = (0.0, 0.0, 0.0);
        for _ in 0..20 {
            let w = sample_noise::<f64>(n, beta, dt, &mut rng);
            for i in 0..n {
                for j in 0..n {
                    let z = w.dw.get(i, j);
                    re2 += z.re * z.re;
                    im2 += z.im * z.im;
                    count += 1.0;
                }
            }
        }
        let target = dt / n as f64;
        assert!(
            (re2 / count / target - 1.0).abs() < 0.05,
            "{beta:?} real part {}",
            re2 / count
        );
        match beta {
            Beta::Real => assert_eq!(im2, 0.0),
            Beta::Complex => assert!(
                (im2 / count / target - 1.0).abs() < 0.05,
                "imaginary part {}",
                im2 / count
            ),
        }
    }
}

#[test]
fn euler_step_with_deterministic_increment() {
    // dW = s I makes the update X + 2 g h s I + b(X) dt / n
    let lambda = [-1.0f64, 0.25, 2.0];
    let (g, h, s, dt) = (0.7, 1.3, 0.05, 0.1);
    for beta in [Beta::Real, Beta::Complex] {
        let spec = FlowSpec::new(
            SpectralFunction::Constant(g),
            SpectralFunction::Constant(h),
            SpectralFunction::poly(&[0.5, 0.0, -1.0]),
            beta,
            lambda.to_vec(),
            dt,
            vec![0.0, dt],
        );
        let noise = NoiseIncrement {
            n: 3,
            beta,
            dw: SpectralMatrix::identity(beta, 3).scale(s),
        };
        let out = euler_step(&SpectralMatrix::from_diag(beta, &lambda), &spec, &noise).unwrap();
        assert_eq!(out.clamped, 0);
        let got = eigenvalues(&out.matrix).unwrap();
        for (x, y) in lambda.iter().zip(got) {
            let want = x + 2.0 * g * h * s + (0.5 - x * x) * dt / 3.0;
            assert!((y - want).abs() < 1e-13, "{y} vs {want}");
        }
    }
}

#[test]
fn euler_step_rejects_field_mismatch() {
    let spec = wigner(2, Beta::Real, Frame::Auto);
    let noise = sample_noise::<f64>(2, Beta::Complex, 0.01, &mut stream(1, 0));
    let x = SpectralMatrix::from_diag(Beta::Real, &[0.0, 1.0]);
    assert!(euler_step(&x, &spec, &noise).is_err());
}

#[test]
fn frames_agree_in_law() {
    // With β = 2 the mean of m2 equals t exactly for every n and dt.
    let (n, reps) = (12, 400);
    let mut means = Vec::new();
    for frame in [Frame::Eigen, Frame::Matrix] {
        let paths = simulate_ensemble(&wigner(n, Beta::Complex, frame), reps, 17).unwrap();
        let m2: Vec<f64> = paths.iter().map(|p| moment(&p.spectra[2], 2)).collect();
        let m4: Vec<f64> = paths.iter().map(|p| moment(&p.spectra[2], 4)).collect();
        let (mean2, se2) = mean_and_se(&m2);
        assert!((mean2 - 1.0).abs() < 4.0 * se2, "{frame:?} m2 {mean2} +- {se2}");
        means.push((mean_and_se(&m4), frame));
    }
    let ((a, sa), _) = means[0];
    let ((b, sb), _) = means[1];
    assert!((a - b).abs() < 4.0 * (sa * sa + sb * sb).sqrt(), "m4 {a} vs {b}");
}

#[test]
fn ensemble_replicas_use_their_own_streams() {
    let spec = wigner(6, Beta::Real, Frame::Eigen);
    let paths = simulate_ensemble(&spec, 4, 9).unwrap();
    assert_eq!(paths, simulate_ensemble(&spec, 4, 9).unwrap());
    for (r, p) in paths.iter().enumerate() {
        assert_eq!(*p, simulate_path_with(&spec, &mut stream(9, r as u64)).unwrap());
    }
    assert_ne!(paths[0].spectra, paths[1].spectra);
}

#[test]
fn spectra_are_sorted_at_every_record() {
    let spec = wigner(10, Beta::Complex, Frame::Auto);
    let path = simulate_path(&spec, 4).unwrap();
    assert_eq!(path.spectra.len(), 3);
    for s in &path.spectra {
        assert!(s.windows(2).all(|w| w[0] <= w[1]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn relabeling_the_start_changes_nothing(
        start in proptest::collection::vec(-1.0f64..1.0, 2..8),
        shift in 0usize..8,
        seed in 0u64..1000,
    ) {
        let mut rotated = start.clone();
        let len = rotated.len();
        rotated.rotate_left(shift % len);
        let make = |s: Vec<f64>| {
            let mut spec = FlowSpec::new(
                SpectralFunction::Constant(0.5),
                SpectralFunction::Constant(1.0),
                SpectralFunction::poly(&[0.0, -1.0]),
                Beta::Real,
                s,
                0.02,
                vec![0.0, 0.2],
            );
            spec.frame = Frame::Eigen;
            spec
        };
        let a = simulate_path(&make(start), seed).unwrap();
        let b = simulate_path(&make(rotated), seed).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn frozen_noise_keeps_a_fixed_point(
        start in proptest::collection::vec(0.1f64..1.0, 1..6),
        beta in prop_oneof![Just(Beta::Real), Just(Beta::Complex)],
    ) {
        // g = 0 and b = 0 leave every spectrum fixed
        let spec = FlowSpec::new(
            SpectralFunction::zero(),
            SpectralFunction::Constant(1.0),
            SpectralFunction::zero(),
            beta,
            start.clone(),
            0.05,
            vec![0.0, 0.5],
        );
        let path = simulate_path(&spec, 1).unwrap();
        let mut sorted = start;
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (x, y) in sorted.iter().zip(&path.spectra[1]) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }
}
