use std::f64::consts::PI;

use lab::background::{manufactured, manufactured_potential};
use lab::snapshot;
use lab::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn sup_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn grid_sizes_and_preconditions() {
    assert_eq!(Grid::new(1, 32).unwrap().len(), 1024);
    assert_eq!(Grid::new(2, 12).unwrap().len(), 20736);
    assert_eq!(Grid::new(2, 3).unwrap_err(), GridError::Points(3));
    assert_eq!(Grid::new(1, 2).unwrap_err(), GridError::Points(2));
    assert!(Grid::new(1, 256).is_ok());
}

#[test]
fn constant_has_zero_derivatives() {
    let g = Grid::new(2, 6).unwrap();
    let s = Spectral::new(g);
    let c = ScalarField::constant(g, 3.5);
    for i in 1..=2 {
        assert!(s.partial_real(&c, Dir::z(i)).sup_norm() < 1e-14);
        assert!(s.partial_real(&c, Dir::zbar(i)).sup_norm() < 1e-14);
    }
}

#[test]
fn dz_of_a_plane_wave() {
    let g = Grid::new(1, 16).unwrap();
    let s = Spectral::new(g);
    let f = ComplexField {
        grid: g,
        values: (0..g.len()).map(|i| Complex64::from_polar(1.0, 2.0 * PI * g.coords(i)[0])).collect(),
    };
    // ½(∂_x − √−1 ∂_y) e^{2π√−1 x} = π√−1 e^{2π√−1 x}
    let expect: Vec<Complex64> = f.values.iter().map(|v| Complex64::new(0.0, PI) * v).collect();
    assert!(sup_diff(&s.partial(&f, Dir::z(1)).values, &expect) < 1e-12);
}

#[test]
fn dzbar_of_a_real_field_is_the_conjugate() {
    let g = Grid::new(2, 8).unwrap();
    let s = Spectral::new(g);
    // includes content at the Nyquist wavenumber
    let f = g.sample(|x| (2.0 * PI * x[0]).sin() * (2.0 * PI * 2.0 * x[3]).cos() + (8.0 * PI * x[1]).cos());
    for i in 1..=2 {
        let dz = s.partial_real(&f, Dir::z(i));
        let dzb = s.partial_real(&f, Dir::zbar(i));
        assert!(sup_diff(&dz.conj().values, &dzb.values) < 1e-12);
    }
}

#[test]
fn hessian_of_a_real_field_is_hermitian() {
    let g = Grid::new(2, 8).unwrap();
    let s = Spectral::new(g);
    let f = g.sample(|x| (2.0 * PI * (x[0] + 2.0 * x[3])).sin() + (8.0 * PI * x[2]).cos());
    let h = s.complex_hessian(&f);
    assert!(sup_diff(&h[0][1].values, &h[1][0].conj().values) < 1e-12);
    assert!(h[0][0].values.iter().all(|v| v.im.abs() < 1e-12));
}

fn trig_field(g: Grid, coeffs: &[(i64, i64, i64, i64, f64)]) -> ScalarField {
    g.sample(|x| {
        coeffs
            .iter()
            .map(|&(a, b, c, d, w)| {
                w * (2.0 * PI * (a as f64 * x[0] + b as f64 * x[1] + c as f64 * x[2] + d as f64 * x[3])).cos()
            })
            .sum()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fft_round_trip(values in prop::collection::vec(-1e3f64..1e3, 6usize.pow(4))) {
        let g = Grid::new(2, 6).unwrap();
        let s = Spectral::new(g);
        let f = ScalarField { grid: g, values };
        let back = s.inverse(s.forward(&f.to_complex()));
        let scale = f.sup_norm().max(1e-300);
        for (a, b) in f.values.iter().zip(&back.values) {
            prop_assert!((a - b.re).abs() / scale <= 1e-12);
            prop_assert!(b.im.abs() / scale <= 1e-12);
        }
    }

    #[test]
    fn partials_commute_across_axes(
        coeffs in prop::collection::vec((-3i64..=3, -3i64..=3, -3i64..=3, -3i64..=3, -1.0f64..1.0), 1..6),
        a in 0usize..4,
        b in 0usize..4,
    ) {
        let g = Grid::new(2, 8).unwrap();
        let s = Spectral::new(g);
        let f = trig_field(g, &coeffs).to_complex();
        let ab = s.partial(&s.partial(&f, Dir::x(a)), Dir::x(b));
        let ba = s.partial(&s.partial(&f, Dir::x(b)), Dir::x(a));
        prop_assert!(sup_diff(&ab.values, &ba.values) <= 1e-12 * (1.0 + ab.sup_norm()));
    }

    #[test]
    fn background_is_normalized(amplitude in 0.0f64..3.0, seed in any::<u64>(), kind in 0usize..3, dim in 1usize..=2) {
        let g = Grid::new(dim, 8).unwrap();
        let fam = match kind {
            0 => Family::Zero,
            1 => Family::SingleMode { amplitude },
            _ => Family::RandomBand { amplitude, max_mode: 2, seed },
        };
        let bg = make_background(g, fam).unwrap();
        let err = (bg.exp_f().mean() - 1.0).abs();
        prop_assert!(err <= 1e-13, "{}", err);
    }

    #[test]
    fn doubling_the_grid_keeps_band_limited_integrals(
        coeffs in prop::collection::vec((-2i64..=2, -2i64..=2, -2i64..=2, -2i64..=2, -1.0f64..1.0), 1..6),
    ) {
        let coarse = trig_field(Grid::new(2, 6).unwrap(), &coeffs);
        let fine = trig_field(Grid::new(2, 12).unwrap(), &coeffs);
        let a = integrate(&coarse, Weight::Omega);
        let b = integrate(&fine, Weight::Omega);
        prop_assert!((a - b).abs() <= 1e-12);
    }
}

#[test]
fn zero_family_gives_zero_forcing() {
    let g = Grid::new(2, 8).unwrap();
    let bg = make_background(g, Family::Zero).unwrap();
    assert!(bg.f.values.iter().all(|&v| v == 0.0));
    assert_eq!(integrate(&bg.exp_f(), Weight::Omega), g.volume());
}

#[test]
fn single_mode_shift_is_log_bessel_i0() {
    // mean of e^{A sin 2πx} over a period is I₀(A); the grid mean agrees to
    // roundoff since the aliasing error is of size I_N(A)
    let a: f64 = 0.5;
    let series: f64 = (0..30)
        .map(|k| (a / 2.0).powi(2 * k) / (1..=k).map(|j| j as f64).product::<f64>().powi(2))
        .sum();
    let frozen = 1.0634833707413236;
    assert!((series - frozen).abs() < 1e-15);
    let g = Grid::new(2, 16).unwrap();
    let bg = make_background(g, Family::SingleMode { amplitude: a }).unwrap();
    for i in 0..g.len() {
        let x = g.coords(i);
        let expect = a * (2.0 * PI * x[0]).sin() - frozen.ln();
        let err = (bg.f.values[i] - expect).abs();
        assert!(err < 1e-13, "{err}");
    }
}

#[test]
fn random_band_is_seed_deterministic() {
    let g = Grid::new(2, 8).unwrap();
    let fam = |seed| Family::RandomBand {
        amplitude: 0.7,
        max_mode: 2,
        seed,
    };
    let a = make_background(g, fam(11)).unwrap();
    let b = make_background(g, fam(11)).unwrap();
    let c = make_background(g, fam(12)).unwrap();
    assert_eq!(a.f.values, b.f.values);
    assert_ne!(a.f.values, c.f.values);
    // the unshifted field has sup norm equal to the amplitude
    assert!(a.f.max() - a.f.min() <= 2.0 * 0.7 + 1e-12);
}

#[test]
fn underflowing_forcing_is_rejected() {
    let g = Grid::new(1, 8).unwrap();
    assert!(make_background(g, Family::SingleMode { amplitude: 1e4 }).is_err());
    assert!(make_background(g, Family::SingleMode { amplitude: f64::NAN }).is_err());
}

#[test]
fn integrals_over_the_torus() {
    let g = Grid::new(2, 8).unwrap();
    assert_eq!(integrate(&ScalarField::constant(g, 1.0), Weight::Omega), 4.0);
    let s = g.sample(|x| (2.0 * PI * x[0]).sin());
    assert!(integrate(&s, Weight::Omega).abs() < 1e-12);
    let bg = make_background(g, Family::SingleMode { amplitude: 0.9 }).unwrap();
    assert!((integrate(&bg.exp_f(), Weight::Omega) - 4.0).abs() < 1e-12);
    let g1 = Grid::new(1, 8).unwrap();
    assert_eq!(integrate(&ScalarField::constant(g1, 1.0), Weight::Omega), 2.0);
}

#[test]
fn manufactured_forcing_integrates_to_the_volume() {
    let g = Grid::new(2, 8).unwrap();
    let s = Spectral::new(g);
    let bg = manufactured(&s, &manufactured_potential(g, 0.3)).unwrap();
    assert!((bg.exp_f().mean() - 1.0).abs() < 1e-13);
    // the ω̃-volume equals the ω-volume for a cohomologous metric
    let m = MetricField::from_potential(&s, &manufactured_potential(g, 0.3));
    let one = ScalarField::constant(g, 1.0);
    assert!((integrate(&one, Weight::OmegaTilde(&m)) - 4.0).abs() < 1e-12);
}

#[test]
fn transforms_do_not_depend_on_thread_count() {
    let g = Grid::new(2, 8).unwrap();
    let f = make_background(
        g,
        Family::RandomBand {
            amplitude: 1.0,
            max_mode: 2,
            seed: 5,
        },
    )
    .unwrap()
    .f;
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| Spectral::new(g).complex_hessian(&f)[0][1].clone())
    };
    assert_eq!(run(1).values, run(4).values);
}

#[test]
fn snapshot_round_trip() {
    let g = Grid::new(2, 4).unwrap();
    let f = g.sample(|x| x[0] + 10.0 * x[3]);
    let mut buf = Vec::new();
    snapshot::write_real(&mut buf, &f).unwrap();
    assert_eq!(&buf[..8], b"TLSNAP01");
    assert_eq!(u32::from_le_bytes(buf[8..12].try_into().unwrap()), 2);
    assert_eq!(u32::from_le_bytes(buf[12..16].try_into().unwrap()), 4);
    assert_eq!(u32::from_le_bytes(buf[16..20].try_into().unwrap()), 0);
    assert_eq!(f64::from_le_bytes(buf[20 + 8..28 + 8].try_into().unwrap()), f.values[1]);
    assert_eq!(snapshot::read_real(&mut buf.as_slice()).unwrap(), f);
}
