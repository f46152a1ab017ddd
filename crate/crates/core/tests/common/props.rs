//! Property checks over random designs, each driven by one seed.

use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use smnuc::baselines::{smp_coefficients, SmpConfig, SmpMode};
use smnuc::channel::ChannelRealization;
use smnuc::constellation::{
    build_signal_set, expand_quadrant, min_euclidean_distance, quadrant_labeling, read_design,
    square_qam_labeling, write_design, Design, Labeling, PreScaling, QuadrantParams, POWER_TOL,
};
use smnuc::detection::{maxlog_llrs, ml_detect};
use smnuc::optimizer::{project_feasible, ParticleLayout};
use smnuc::Complex64;

/// Runs `test` on 64 cases of `strategy` drawn from a runner seeded by `seed`.
fn check_seeded<S: Strategy>(
    seed: u64,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases: 64,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::from_seed(RngAlgorithm::ChaCha, &bytes),
    );
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn order() -> impl Strategy<Value = usize> {
    prop_oneof![Just(4usize), Just(16), Just(64)]
}

fn antennas() -> impl Strategy<Value = usize> {
    prop_oneof![Just(1usize), Just(2), Just(4), Just(8)]
}

fn coord() -> impl Strategy<Value = f64> {
    prop_oneof![-2.0..-0.01f64, 0.01..2.0f64]
}

fn complex() -> impl Strategy<Value = Complex64> {
    (coord(), coord()).prop_map(|(re, im)| Complex64::new(re, im))
}

/// Random raw particle position for a random `(M, N_t)`.
fn position() -> impl Strategy<Value = (ParticleLayout, Vec<f64>)> {
    (order(), antennas()).prop_flat_map(|(m, n_t)| {
        let layout = ParticleLayout::new(m, n_t).unwrap();
        (Just(layout), vec(coord(), layout.dims()))
    })
}

fn assert_feasible(set: &smnuc::constellation::SmSignalSet) -> Result<(), TestCaseError> {
    let c = set.constellation();
    let sym = c.symbols().iter().map(|s| s.norm_sqr()).sum::<f64>() / c.order() as f64;
    let pre = set.pre_scaling().coefficients();
    let alpha = pre.iter().map(|a| a.norm_sqr()).sum::<f64>() / pre.len() as f64;
    let joint = set.points().iter().map(|p| p.norm_sqr()).sum::<f64>() / set.len() as f64;
    prop_assert!((sym - 1.0).abs() < POWER_TOL, "symbol power {sym}");
    prop_assert!((alpha - 1.0).abs() < POWER_TOL, "pre-scaling power {alpha}");
    prop_assert!((joint - 1.0).abs() < POWER_TOL, "joint power {joint}");
    Ok(())
}

pub type Property = fn(u64) -> Result<(), String>;

pub const ALL: &[(&str, Property)] = &[
    ("labelings_round_trip", labelings_round_trip),
    (
        "expansion_and_extraction_are_inverse",
        expansion_and_extraction_are_inverse,
    ),
    (
        "projection_is_feasible_and_idempotent",
        projection_is_feasible_and_idempotent,
    ),
    (
        "emitted_designs_satisfy_power_constraints",
        emitted_designs_satisfy_power_constraints,
    ),
    (
        "designs_serialize_bit_exactly",
        designs_serialize_bit_exactly,
    ),
    (
        "distance_ignores_a_common_prescaling_rotation",
        distance_ignores_a_common_prescaling_rotation,
    ),
    (
        "maxlog_hard_decisions_agree_with_ml",
        maxlog_hard_decisions_agree_with_ml,
    ),
    (
        "perfect_csi_prescaling_aligns_received_phases",
        perfect_csi_prescaling_aligns_received_phases,
    ),
];

pub fn labelings_round_trip(seed: u64) -> Result<(), String> {
    check_seeded(seed, order(), |m| {
        let side = (m as f64).sqrt() as usize;
        for l in [
            quadrant_labeling(m).unwrap(),
            square_qam_labeling(side).unwrap(),
        ] {
            for i in 0..m {
                prop_assert_eq!(l.index(l.label(i)), i);
            }
            for w in 0..m as u32 {
                prop_assert_eq!(l.label(l.index(w)), w);
            }
        }
        Ok(())
    })?;
    check_seeded(
        seed,
        Just((0u32..64).collect::<Vec<_>>()).prop_shuffle(),
        |perm| {
            let l = Labeling::new(perm.clone()).unwrap();
            for (i, &w) in perm.iter().enumerate() {
                prop_assert_eq!(l.label(i), w);
                prop_assert_eq!(l.index(w), i);
            }
            Ok(())
        },
    )?;
    Ok(())
}

pub fn expansion_and_extraction_are_inverse(seed: u64) -> Result<(), String> {
    let params = order().prop_flat_map(|m| vec(complex(), m / 4));
    check_seeded(seed, params, |free| {
        let c = expand_quadrant(&QuadrantParams { free_points: free }).unwrap();
        prop_assert!(c.is_quadrant_symmetric(1e-12));
        let p = c.quadrant_params().unwrap();
        let again = expand_quadrant(&p).unwrap();
        for (a, b) in c.symbols().iter().zip(again.symbols()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
        prop_assert_eq!(c.labeling(), again.labeling());
        Ok(())
    })?;
    Ok(())
}

pub fn projection_is_feasible_and_idempotent(seed: u64) -> Result<(), String> {
    check_seeded(seed, position(), |(layout, raw)| {
        let x = project_feasible(&layout, &raw).unwrap();
        let twice = project_feasible(&layout, &x).unwrap();
        for (a, b) in x.iter().zip(&twice) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        assert_feasible(&layout.signal_set(&x).unwrap())
    })?;
    Ok(())
}

pub fn emitted_designs_satisfy_power_constraints(seed: u64) -> Result<(), String> {
    check_seeded(seed, position(), |(layout, raw)| {
        let set = layout.signal_set(&raw).unwrap();
        prop_assert!(set.constellation().is_quadrant_symmetric(1e-12));
        assert_feasible(&set)
    })?;
    Ok(())
}

pub fn designs_serialize_bit_exactly(seed: u64) -> Result<(), String> {
    check_seeded(seed, position(), |(layout, raw)| {
        let set = layout.signal_set(&raw).unwrap();
        let design = Design {
            constellation: set.constellation().clone(),
            pre_scaling: set.pre_scaling().clone(),
        };
        let text = write_design(&design);
        let back = read_design(&text).unwrap();
        for (a, b) in design
            .constellation
            .symbols()
            .iter()
            .zip(back.constellation.symbols())
        {
            prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
            prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
        prop_assert_eq!(&design, &back);
        prop_assert_eq!(write_design(&back), text);
        Ok(())
    })?;
    Ok(())
}

pub fn distance_ignores_a_common_prescaling_rotation(seed: u64) -> Result<(), String> {
    let case = (position(), 0.0..std::f64::consts::TAU, vec(complex(), 8));
    check_seeded(seed, case, |((layout, raw), phi, gains)| {
        let set = layout.signal_set(&raw).unwrap();
        let rot = Complex64::from_polar(1.0, phi);
        let rotated = PreScaling::new(
            set.pre_scaling()
                .coefficients()
                .iter()
                .map(|a| a * rot)
                .collect(),
        )
        .unwrap();
        let other = build_signal_set(set.constellation(), &rotated, layout.n_t).unwrap();
        let ch = ChannelRealization::new(gains[..layout.n_t].to_vec(), 0.1).unwrap();
        let a = min_euclidean_distance(&set, &ch).unwrap();
        let b = min_euclidean_distance(&other, &ch).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0), "{a} vs {b}");
        Ok(())
    })?;
    Ok(())
}

pub fn maxlog_hard_decisions_agree_with_ml(seed: u64) -> Result<(), String> {
    let case = (
        position(),
        vec(complex(), 8),
        complex(),
        0usize..512,
        0.01..1.0f64,
    );
    check_seeded(seed, case, |((layout, raw), gains, noise, j, n0)| {
        let set = layout.signal_set(&raw).unwrap();
        let ch = ChannelRealization::new(gains[..layout.n_t].to_vec(), n0).unwrap();
        let j = j % set.len();
        let y = ch.gains()[set.antenna_of(j)] * set.point(j) + noise * n0.sqrt();
        let ml = ml_detect(y, &set, &ch).unwrap();
        let llr = maxlog_llrs(y, &set, &ch, n0).unwrap();
        prop_assert_eq!(set.labeling().index(llr.hard_label()), ml);
        Ok(())
    })?;
    Ok(())
}

pub fn perfect_csi_prescaling_aligns_received_phases(seed: u64) -> Result<(), String> {
    let case = (order(), antennas(), vec(complex(), 8));
    check_seeded(seed, case, |(m, n_t, gains)| {
        let cfg = SmpConfig::new(SmpMode::PerfectCsi, m, n_t);
        let ch = ChannelRealization::new(gains[..n_t].to_vec(), 0.1).unwrap();
        let pre = smp_coefficients(&cfg, Some(&ch)).unwrap();
        for (k, (a, h)) in pre.coefficients().iter().zip(ch.gains()).enumerate() {
            let want = Complex64::from_polar(h.norm(), cfg.theta[k]);
            prop_assert!((h * a - want).norm() < 1e-12);
        }
        Ok(())
    })?;
    Ok(())
}
