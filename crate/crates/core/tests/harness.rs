mod common;

use common::{uncoded_qpsk_bler, SEEDS};
use smnuc::baselines::SmpMode;
use smnuc::channel::SnrPoint;
use smnuc::constellation::{build_signal_set, square_qam, PreScaling};
use smnuc::fec::{mcs_entry, FecConfig, DEFAULT_CODEWORD_BITS};
use smnuc::harness::{
    compare_schemes, export_results, parse_bler_csv, simulate_bler, write_bler_csv, BlerRow,
    FadingModel, RunManifest, Scheme, StopRule,
};
use smnuc::optimizer::{find_waterfall_snr_for, SearchConfig};

const QPSK_BITS: usize = 64;

fn qpsk_scheme() -> Scheme {
    Scheme::fixed(
        "qpsk",
        build_signal_set(&square_qam(4).unwrap(), &PreScaling::unit(1), 1).unwrap(),
    )
}

fn awgn_search(low_db: f64, min_errors: u64, seed: u64) -> SearchConfig {
    SearchConfig {
        low_db,
        high_db: low_db + 15.0,
        stop: StopRule {
            min_errors,
            max_blocks: 1_000_000,
        },
        fading: FadingModel::Awgn,
        seed,
        ..SearchConfig::default()
    }
}

#[test]
fn uncoded_qpsk_waterfall_matches_closed_form() {
    let fec = FecConfig::uncoded(QPSK_BITS, 1).build().unwrap();
    for (snr_db, seed) in [(6.0, SEEDS[0]), (8.0, SEEDS[1]), (10.0, SEEDS[2])] {
        let target = uncoded_qpsk_bler(QPSK_BITS, snr_db) * 1.02;
        let found = find_waterfall_snr_for(
            &qpsk_scheme(),
            &fec,
            target,
            &awgn_search(0.0, 20_000, seed),
        )
        .unwrap();
        assert!(
            (found.snr_db - snr_db).abs() <= 0.1 + 1e-9,
            "target {target}: {} dB vs {snr_db} dB",
            found.snr_db
        );
    }
}

#[test]
fn uncoded_bler_matches_closed_form_pointwise() {
    let fec = FecConfig::uncoded(QPSK_BITS, 1).build().unwrap();
    for snr_db in [4.0, 7.0, 9.0] {
        let stop = StopRule {
            min_errors: 2_000,
            max_blocks: 400_000,
        };
        let row = simulate_bler(
            &qpsk_scheme(),
            &fec,
            SnrPoint::db(snr_db),
            FadingModel::Awgn,
            stop,
            3,
        )
        .unwrap();
        let p = uncoded_qpsk_bler(QPSK_BITS, snr_db);
        assert!(
            row.ci_low <= p && p <= row.ci_high,
            "{snr_db} dB: {row:?} vs {p}"
        );
    }
}

#[test]
fn raising_the_target_never_raises_the_threshold() {
    let fec = FecConfig::uncoded(QPSK_BITS, 1).build().unwrap();
    let mut last = f64::INFINITY;
    for target in [0.02, 0.05, 0.1, 0.3, 0.6] {
        let found =
            find_waterfall_snr_for(&qpsk_scheme(), &fec, target, &awgn_search(0.0, 300, 4))
                .unwrap();
        assert!(
            found.snr_db <= last,
            "target {target}: {} after {last}",
            found.snr_db
        );
        last = found.snr_db;
    }
}

#[test]
fn coded_bler_limits() {
    let entry = mcs_entry(13, 2).unwrap();
    let fec = FecConfig::ldpc_for_mcs(&entry, DEFAULT_CODEWORD_BITS, 1)
        .unwrap()
        .build()
        .unwrap();
    let sm = Scheme::conventional(entry.order, 2).unwrap();
    let stop = StopRule {
        min_errors: 20,
        max_blocks: 20,
    };
    let high = simulate_bler(
        &sm,
        &fec,
        SnrPoint::db(60.0),
        FadingModel::PerSymbol,
        stop,
        1,
    )
    .unwrap();
    assert_eq!(high.block_errors, 0);
    let low = simulate_bler(
        &sm,
        &fec,
        SnrPoint::db(-40.0),
        FadingModel::PerSymbol,
        stop,
        1,
    )
    .unwrap();
    assert_eq!(low.bler, 1.0);
}

#[test]
fn perfect_csi_prescaling_never_loses_to_plain_sm() {
    let entry = mcs_entry(13, 4).unwrap();
    let fec = FecConfig::ldpc_for_mcs(&entry, DEFAULT_CODEWORD_BITS, 1)
        .unwrap()
        .build()
        .unwrap();
    let sm = Scheme::conventional(entry.order, 4).unwrap();
    let csi = Scheme::smp(entry.order, 4, SmpMode::PerfectCsi).unwrap();
    let stop = StopRule {
        min_errors: 1_000,
        max_blocks: 200,
    };
    for db in [12.0, 14.0] {
        let a =
            simulate_bler(&sm, &fec, SnrPoint::db(db), FadingModel::PerSymbol, stop, 2).unwrap();
        let b = simulate_bler(
            &csi,
            &fec,
            SnrPoint::db(db),
            FadingModel::PerSymbol,
            stop,
            2,
        )
        .unwrap();
        assert!(
            b.block_errors <= a.block_errors,
            "{db} dB: sm {a:?} smp-csi {b:?}"
        );
    }
}

#[test]
fn bler_is_reproducible_and_falls_with_snr() {
    let fec = FecConfig::uncoded(QPSK_BITS, 1).build().unwrap();
    let stop = StopRule {
        min_errors: 200,
        max_blocks: 50_000,
    };
    let run = |db: f64| {
        simulate_bler(
            &qpsk_scheme(),
            &fec,
            SnrPoint::db(db),
            FadingModel::PerSymbol,
            stop,
            8,
        )
        .unwrap()
    };
    assert_eq!(run(10.0), run(10.0));
    let rows: Vec<BlerRow> = (0..6).map(|i| run(5.0 + 3.0 * i as f64)).collect();
    for w in rows.windows(2) {
        assert!(w[1].ci_low <= w[0].ci_high, "{:?} then {:?}", w[0], w[1]);
        assert!(w[1].bler <= w[0].bler);
    }
}

#[test]
fn comparison_reports_gains_against_the_reference() {
    let fec = FecConfig::uncoded(QPSK_BITS, 1).build().unwrap();
    let reference = Scheme {
        id: "sm".into(),
        ..qpsk_scheme()
    };
    // identical alphabets give identical thresholds under shared random numbers
    let table = compare_schemes(
        None,
        &[reference, qpsk_scheme()],
        "sm",
        &fec,
        0.1,
        &awgn_search(0.0, 200, 5),
    )
    .unwrap();
    assert_eq!(table.row("sm").unwrap().gain_db, 0.0);
    assert_eq!(table.row("qpsk").unwrap().gain_db, 0.0);
    assert_eq!(table.rows.len(), 2);
}

#[test]
fn exported_results_round_trip() {
    let rows = vec![
        BlerRow::new("sm", Some(16), 4, 12.3, 1000, 17),
        BlerRow::new("proposed", Some(16), 4, 11.0, 20_000, 0),
    ];
    let text = write_bler_csv(&rows);
    assert_eq!(parse_bler_csv(&text).unwrap(), rows);

    let dir = std::env::temp_dir().join(format!("smnuc-export-{}", std::process::id()));
    let mut manifest = RunManifest::new("bler");
    manifest.set("seed", 7).set("n_t", 4);
    let written = export_results(&rows, &manifest, &dir).unwrap();
    assert!(written.iter().all(|p| p.exists()));
    let csv = std::fs::read_to_string(dir.join("bler.csv")).unwrap();
    assert_eq!(parse_bler_csv(&csv).unwrap(), rows);
    let back = RunManifest::from_text(&std::fs::read_to_string(dir.join("manifest.txt")).unwrap())
        .unwrap();
    assert_eq!(back.get("seed"), Some("7"));
    assert_eq!(back.config_hash(), manifest.config_hash());
    std::fs::remove_dir_all(&dir).unwrap();
}
