mod common;

use common::{brute_force_ml, SEEDS};
use rand::Rng;
use smnuc::channel::{draw_rayleigh, receive, SnrPoint};
use smnuc::constellation::{
    build_signal_set, make_apsk_initial, make_initial_prescaling, square_qam, PreScaling,
};
use smnuc::detection::{maxlog_llrs, ml_detect};
use smnuc::rng::stream_rng;

#[test]
fn ml_matches_exhaustive_search_and_maxlog_hard_decisions() {
    let sets = [
        build_signal_set(
            &make_apsk_initial(16).unwrap(),
            &make_initial_prescaling(16, 4).unwrap(),
            4,
        )
        .unwrap(),
        build_signal_set(&square_qam(4).unwrap(), &PreScaling::unit(2), 2).unwrap(),
        build_signal_set(
            &make_apsk_initial(64).unwrap(),
            &make_initial_prescaling(64, 2).unwrap(),
            2,
        )
        .unwrap(),
    ];
    for seed in SEEDS {
        let mut rng = stream_rng(seed, 7);
        for set in &sets {
            for t in 0..10_000 {
                let snr = SnrPoint::db(rng.random_range(-5.0..30.0));
                let ch = draw_rayleigh(set.n_t(), snr, &mut rng);
                let j = rng.random_range(0..set.len());
                let y = receive(set, j, &ch, Some(&mut rng)).unwrap();
                let ml = ml_detect(y, set, &ch).unwrap();
                assert_eq!(
                    ml,
                    brute_force_ml(y, set, ch.gains()),
                    "seed {seed} trial {t}"
                );
                let llr = maxlog_llrs(y, set, &ch, ch.noise_var()).unwrap();
                assert_eq!(
                    set.labeling().index(llr.hard_label()),
                    ml,
                    "seed {seed} trial {t}"
                );
            }
        }
    }
}

#[test]
fn noiseless_reception_is_detected_exactly() {
    let set = build_signal_set(
        &make_apsk_initial(16).unwrap(),
        &make_initial_prescaling(16, 4).unwrap(),
        4,
    )
    .unwrap();
    let mut rng = stream_rng(SEEDS[2], 0);
    for _ in 0..200 {
        let ch = draw_rayleigh(4, SnrPoint::db(20.0), &mut rng);
        for j in 0..set.len() {
            let y = receive::<smnuc::rng::SimRng>(&set, j, &ch, None).unwrap();
            assert_eq!(ml_detect(y, &set, &ch).unwrap(), j);
        }
    }
}

#[test]
fn llr_magnitude_scales_inversely_with_noise() {
    let set = build_signal_set(&square_qam(16).unwrap(), &PreScaling::unit(2), 2).unwrap();
    let mut rng = stream_rng(SEEDS[0], 3);
    let ch = draw_rayleigh(2, SnrPoint::db(10.0), &mut rng);
    let y = receive(&set, 5, &ch, Some(&mut rng)).unwrap();
    let a = maxlog_llrs(y, &set, &ch, 0.1).unwrap();
    let b = maxlog_llrs(y, &set, &ch, 0.2).unwrap();
    for (x, z) in a.llrs.iter().zip(&b.llrs) {
        assert!((x - 2.0 * z).abs() <= 1e-9 * x.abs().max(1.0));
    }
}
