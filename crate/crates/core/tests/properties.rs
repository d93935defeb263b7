use std::f64::consts::LN_2;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use yaglom_core::bounds::{
    lattice_rate, lattice_rate_ln, region_residual, sample_grid, shannon_rate, tau_window,
    TangentLine,
};
use yaglom_core::constructor::{lee_bch, to_spherical, ExtField, Metric};
use yaglom_core::counting::{saddle_solve, WeightEnumerator};
use yaglom_core::euclid::{min_sq_distance, Constellation, Word};

proptest! {
    #[test]
    fn shannon_dominates_lattice(rho in 1e-9f64..(4.0 - 1e-9)) {
        let rs = shannon_rate(rho).unwrap();
        let rl = lattice_rate(rho).unwrap();
        prop_assert!(rs >= rl);
        prop_assert!(((rs - rl) + 0.5 * (1.0 - rho / 4.0).log2()).abs() <= 1e-12);
    }

    #[test]
    fn tangent_touches_and_stays_below(rho0 in 1e-6f64..0.999, lambda in 0.5f64..1.0) {
        let line = TangentLine::at(rho0, lambda).unwrap();
        let x0 = rho0.ln();
        let on_curve = lambda * lattice_rate_ln(x0);
        prop_assert!((line.value_at_ln(x0) - on_curve).abs() <= 1e-12 * on_curve.abs().max(1.0));
        for x in [x0 - LN_2, x0 + LN_2] {
            prop_assert!(line.value_at_ln(x) <= lambda * lattice_rate_ln(x) + 1e-12);
        }
    }

    #[test]
    fn saddle_exponent_bounded_and_increasing(q in 2u32..12, frac in 0.05f64..0.9) {
        let f = WeightEnumerator::for_alphabet(q).unwrap();
        let lambda = frac * f.mean_weight();
        let a = saddle_solve(&f, lambda).unwrap();
        let b = saddle_solve(&f, lambda * 1.05).unwrap();
        prop_assert!(a.mu > 0.0 && a.mu < 1.0);
        prop_assert!(a.exponent <= f64::from(q).log2() + 1e-12);
        prop_assert!(b.exponent >= a.exponent);
    }

    #[test]
    fn field_inverse(k in 1usize..4, seed in any::<u64>()) {
        use rand::Rng;
        let f = ExtField::new(7, k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let order = f.order().unwrap();
        let a = f.from_index(rng.gen_range(1..order));
        prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
    }
}

#[test]
fn region_and_tau_window_agree() {
    let lambda = 0.98;
    for x in sample_grid(-1000.0, -1.0, 200) {
        for y in sample_grid(1.0, 500.0, 200) {
            let f = region_residual(x, y, lambda).unwrap();
            let (lo, hi) = tau_window(x, y, lambda).unwrap();
            if f.abs() > 1e-9 {
                assert_eq!(lo <= hi, f <= 0.0, "x={x} y={y} F={f} window=[{lo}, {hi}]");
            }
        }
    }
}

#[test]
fn lee_floors_within_guard() {
    for p in [5u32, 7, 11, 13] {
        for t in 1..=p.div_ceil(2) {
            let Ok(code) = lee_bch(p, t) else { continue };
            if code.size().is_none_or(|s| s > 1_000_000) {
                continue;
            }
            let lee = code.min_weight_exhaustive(Metric::Lee).unwrap();
            let euc = code.min_weight_exhaustive(Metric::Euclidean).unwrap();
            assert!(lee >= 2 * u64::from(t), "p={p} t={t}: Lee {lee}");
            assert!(euc >= 2 * u64::from(t), "p={p} t={t}: Euclidean {euc}");
        }
    }
}

#[test]
fn bch_linearity() {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (p, t) in [(5u32, 2u32), (7, 2), (11, 4)] {
        let code = lee_bch(p, t).unwrap();
        for _ in 0..100 {
            let a: Vec<u32> = (0..code.dimension()).map(|_| rng.gen_range(0..p)).collect();
            let b: Vec<u32> = (0..code.dimension()).map(|_| rng.gen_range(0..p)).collect();
            let sum: Vec<u32> = a.iter().zip(&b).map(|(x, y)| (x + y) % p).collect();
            let ea = code.encode(&a).unwrap();
            let eb = code.encode(&b).unwrap();
            let expected: Vec<u32> = ea
                .residues()
                .iter()
                .zip(eb.residues())
                .map(|(x, y)| (x + y) % p)
                .collect();
            assert_eq!(code.encode(&sum).unwrap().residues(), &expected[..]);
        }
    }
}

#[test]
fn spherical_normalization() {
    let code = lee_bch(7, 2).unwrap();
    let c = Constellation::new(7).unwrap();
    let mut words = Vec::new();
    for m in 0..7u32.pow(4) {
        let msg: Vec<u32> = (0..4).map(|i| (m / 7u32.pow(i)) % 7).collect();
        words.push(code.encode(&msg).unwrap());
    }
    let sph = to_spherical(&c, &words, code.metric_floor()).unwrap();
    for p in &sph.points {
        assert!((p.norm_sq().sqrt() - 1.0).abs() < 1e-9);
    }
    let rho = sph.rho.unwrap();
    assert!((rho - min_sq_distance(&sph.points).unwrap()).abs() < 1e-9);
    assert!(rho >= sph.guaranteed_rho - 1e-9);
    assert_eq!(sph.dimension(), 7);
    assert!(words.contains(&Word::zero(6)));
}
