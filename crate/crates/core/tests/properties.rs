use num_complex::Complex64;
use proptest::prelude::*;

use cbsv::initial_data::random_solenoidal;
use cbsv::io::{decode_snapshot, encode_snapshot};
use cbsv::littlewood_paley::{hybrid_norm, phi, pow2};
use cbsv::mild::{omega_weights, WeightSpec};
use cbsv::semigroup::apply_semigroup;
use cbsv::spectral::{leray_project, nonlinear_term, FlowParams, Grid, SpectralField};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `-P∇·(u⊗u)` by direct summation over triads inside the 2/3 zone.
fn brute_force_nonlinear(u: &SpectralField) -> Vec<[Complex64; 3]> {
    let grid = *u.grid();
    let zone: Vec<_> = grid.modes().filter(|m| grid.in_dealiased_zone(m.wave)).collect();
    let mut out = Vec::new();
    for m in &zone {
        let mut acc = [Complex64::new(0.0, 0.0); 3];
        if !m.is_zero() {
            for p in &zone {
                let q = [m.wave[0] - p.wave[0], m.wave[1] - p.wave[1], m.wave[2] - p.wave[2]];
                if !grid.in_dealiased_zone(q) {
                    continue;
                }
                for i in 0..3 {
                    for j in 0..3 {
                        acc[i] -= I * m.k[j] * u.coeff(j, p.wave) * u.coeff(i, q);
                    }
                }
            }
            let k2 = m.norm_sq();
            let kd: Complex64 = (0..3).map(|j| m.k[j] * acc[j]).sum();
            for i in 0..3 {
                acc[i] -= m.k[i] * kd / k2;
            }
        }
        out.push(acc);
    }
    out
}

#[test]
fn nonlinear_term_matches_triad_sum() {
    let grid = Grid::standard(8).unwrap();
    let u = random_solenoidal(3, -1.0, (0, 1), &grid).unwrap();
    let n = nonlinear_term(&u).unwrap();
    let oracle = brute_force_nonlinear(&u);
    let zone: Vec<_> = grid.modes().filter(|m| grid.in_dealiased_zone(m.wave)).collect();
    let scale = oracle.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    for (m, o) in zone.iter().zip(&oracle) {
        for c in 0..3 {
            assert!((n.coeff(c, m.wave) - o[c]).norm() < 1e-13 * scale, "{:?}", m.wave);
        }
    }
    for m in grid.modes().filter(|m| !grid.in_dealiased_zone(m.wave)) {
        assert!((0..3).all(|c| n.coeff(c, m.wave) == Complex64::new(0.0, 0.0)));
    }
}

fn field(seed: u64) -> SpectralField {
    random_solenoidal(seed, -11.0 / 6.0, (0, 2), &Grid::standard(16).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn partition_sums_to_one(r in 1e-3f64..1e3) {
        let s: f64 = (-20..=20).map(|j| phi(r / pow2(j))).sum();
        prop_assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn leray_is_idempotent_projection(vals in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 120)) {
        let g = Grid::standard(8).unwrap();
        let mut u = SpectralField::zeros(g, 3);
        for (i, m) in g.modes().filter(|m| !g.is_nyquist(m.wave)).take(40).enumerate() {
            for c in 0..3 {
                let (re, im) = vals[3 * i + c];
                u.set_real_mode(c, m.wave, Complex64::new(re, im));
            }
        }
        let p = leray_project(&u).unwrap();
        prop_assert!(p.max_divergence() < 1e-13);
        let pp = leray_project(&p).unwrap();
        prop_assert!(pp.max_abs_diff(&p).unwrap() < 1e-15);
        prop_assert!(p.l2_norm() <= u.l2_norm() * (1.0 + 1e-14));
    }

    #[test]
    fn semigroup_composes_and_dissipates(seed in 0u64..1000, t1 in 0.0f64..0.5, t2 in 0.0f64..0.5, omega in 0.0f64..10.0) {
        let params = FlowParams::new(1.0, omega, 0.05).unwrap();
        let u = field(seed);
        let a = apply_semigroup(&apply_semigroup(&u, t1, &params).unwrap(), t2, &params).unwrap();
        let b = apply_semigroup(&u, t1 + t2, &params).unwrap();
        prop_assert!(a.max_abs_diff(&b).unwrap() <= 1e-12 * u.max_abs());
        prop_assert!(b.l2_norm() <= u.l2_norm());
        prop_assert!(b.max_divergence() <= 1e-12 * u.max_abs());
    }

    #[test]
    fn hybrid_norm_is_homogeneous(seed in 0u64..1000, a in -10.0f64..10.0, p in 2.0f64..4.0) {
        let u = field(seed);
        let h = hybrid_norm(&u, 0.5, 3.0 / p - 1.0, p, 1.0).unwrap();
        let ha = hybrid_norm(&u.scaled(a), 0.5, 3.0 / p - 1.0, p, 1.0).unwrap();
        prop_assert!((ha - a.abs() * h).abs() <= 1e-12 * h.max(1e-300) * a.abs().max(1.0));
    }

    #[test]
    fn snapshot_round_trip(seed in 0u64..1000, t in 0.0f64..10.0) {
        let u = field(seed).with_time(t);
        let params = FlowParams::new(0.5, 2.0, 0.1).unwrap();
        let s = decode_snapshot(&encode_snapshot(&u, &params)).unwrap();
        prop_assert_eq!(&s.field, &u);
        prop_assert_eq!(s.field.time.to_bits(), t.to_bits());
    }

    #[test]
    fn omega_weights_bounds(j in -20i32..40, log_t in -12.0f64..4.0, c in 0.1f64..10.0) {
        let spec = WeightSpec::new(c, 10f64.powf(log_t)).unwrap();
        let (e, o) = omega_weights(j, &spec);
        let (_, o_next) = omega_weights(j + 1, &spec);
        prop_assert!(e <= o && o <= 1.0);
        prop_assert!(o_next <= pow2(1).sqrt() * o);
        prop_assert!(o <= 2.0 * o_next);
    }
}
