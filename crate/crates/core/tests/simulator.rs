use std::path::PathBuf;

use sccc::analysis::row_patterns;
use sccc::puncturing::{PatternFile, Permutation, ScccConfig};
use sccc::simulator::{
    bpsk_awgn, frame_rng, run_monte_carlo, sccc_iterative_decode, sccc_iterative_decode_traced,
    siso_decode, DecoderConfig, GaussianSource, SisoKind, StopRule,
};
use sccc::trellis::TrellisCode;
use sccc::Exec;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn rsc() -> TrellisCode {
    TrellisCode::new(&"1,5/7".parse().unwrap()).unwrap()
}

/// Rate-2/3 member with 40 of 300 inner parity bits kept.
fn rate_two_thirds() -> ScccConfig {
    let p_o = PatternFile::read(data("outer_po1.pat"))
        .unwrap()
        .to_pattern()
        .unwrap();
    let parity = PatternFile::read(data("parity_ladder_n300.pat"))
        .unwrap()
        .into_ladder()
        .unwrap();
    let sys = PatternFile::read(data("systematic_ladder_po1.pat"))
        .unwrap()
        .into_ladder()
        .unwrap();
    let (p_prime, p_i_p) = row_patterns(&parity, &sys, &p_o, 40, 260).unwrap();
    ScccConfig::new(
        rsc(),
        p_o,
        rsc(),
        200,
        p_prime,
        Permutation::random(300, 1),
        p_i_p,
    )
    .unwrap()
}

#[test]
fn golden_llr_stream() {
    let bits = [0u8, 1, 1, 0, 1, 0, 0, 1];
    let mut g = GaussianSource::new(frame_rng(2024, 0, 0));
    let llr = bpsk_awgn(&bits, &[true; 8], 2.0, 2.0 / 3.0, &mut g).unwrap();
    let golden = [
        5.023648575405825,
        -2.4754638308451202,
        1.467116382651454,
        4.134441853300629,
        -4.368101392259577,
        7.660904736447527,
        5.666718325396182,
        -3.7761127489318063,
    ];
    for (a, b) in llr.iter().zip(golden) {
        assert!((a - b).abs() <= 1e-12 * b.abs(), "{a} vs {b}");
    }
}

#[test]
fn single_section_map_by_hand() {
    // One unterminated section from state 0: input 0 emits 00, input 1 emits 11.
    let (la, l0, l1) = (0.4, -1.1, 2.3);
    let out = siso_decode(&rsc(), 1, false, &[la], &[l0, l1], SisoKind::LogMap, 1e9).unwrap();
    let p0 = (0.5 * (la + l0 + l1) as f64).exp();
    let p1 = (-0.5 * (la + l0 + l1) as f64).exp();
    let map = (p0 / p1).ln();
    assert!((out.input_posterior[0] - map).abs() < 1e-12);
    assert!((out.input_extrinsic[0] - (l0 + l1)).abs() < 1e-12);
    assert!((out.output_extrinsic[0] - (la + l1)).abs() < 1e-12);
}

#[test]
fn all_zero_frame_at_high_snr() {
    let cfg = rate_two_thirds();
    let frame = cfg.encode(&vec![0; cfg.info_bits()]).unwrap();
    let mut g = GaussianSource::new(frame_rng(3, 0, 0));
    let rate = 2.0 / 3.0;
    let llr = bpsk_awgn(&frame.inner_mother, cfg.transmit_mask(), 12.0, rate, &mut g).unwrap();
    let out = sccc_iterative_decode(&cfg, &llr, &DecoderConfig::default()).unwrap();
    assert!(out.info.iter().all(|&b| b == 0));
    assert_eq!(out.extrinsic_magnitude.len(), 10);
}

#[test]
fn noiseless_point_reports_exact_zero() {
    let cfg = rate_two_thirds();
    let stop = StopRule {
        min_frame_errors: 1,
        max_frames: 100,
    };
    let r = run_monte_carlo(
        &cfg,
        &DecoderConfig::default(),
        &[f64::INFINITY],
        &stop,
        4,
        Exec::Parallel,
    )
    .unwrap();
    let p = &r.points[0];
    assert_eq!((p.frames, p.frame_errors, p.bit_errors), (100, 0, 0));
    assert!(p.zero_errors);
    assert_eq!(r.rate, "2/3");
}

#[test]
fn reports_are_reproducible_across_schedules() {
    let cfg = rate_two_thirds();
    let stop = StopRule {
        min_frame_errors: 20,
        max_frames: 300,
    };
    let dec = DecoderConfig {
        iterations: 4,
        ..Default::default()
    };
    let grid = [1.0, 2.0];
    let a = run_monte_carlo(&cfg, &dec, &grid, &stop, 11, Exec::Parallel).unwrap();
    let b = run_monte_carlo(&cfg, &dec, &grid, &stop, 11, Exec::Sequential).unwrap();
    let c = run_monte_carlo(&cfg, &dec, &grid, &stop, 12, Exec::Parallel).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    let mut csv_a = Vec::new();
    let mut csv_b = Vec::new();
    a.write_csv(&mut csv_a).unwrap();
    b.write_csv(&mut csv_b).unwrap();
    assert_eq!(csv_a, csv_b);
    for p in &a.points {
        assert!(p.frames % 64 == 0 || p.frames == stop.max_frames);
        assert!(p.fer >= p.ber - 1e-15);
        assert!(p.ci_low <= p.fer && p.fer <= p.ci_high);
    }
}

#[test]
fn ten_iterations_beat_one() {
    let cfg = rate_two_thirds();
    let dec = DecoderConfig::default();
    let rate = 2.0 / 3.0;
    let frames = 1000;
    let counts = Exec::Parallel.map(frames, |f| {
        let mut rng = frame_rng(99, 0, f as u64);
        let info: Vec<u8> = (0..cfg.info_bits())
            .map(|_| u8::from(rand::Rng::random::<bool>(&mut rng)))
            .collect();
        let frame = cfg.encode(&info).unwrap();
        let mut g = GaussianSource::new(rng);
        let llr = bpsk_awgn(&frame.inner_mother, cfg.transmit_mask(), 2.5, rate, &mut g).unwrap();
        let mut errs = [0usize; 2];
        sccc_iterative_decode_traced(&cfg, &llr, &dec, |it, d| {
            let e = d.iter().zip(&info).filter(|(a, b)| a != b).count();
            match it {
                1 => errs[0] = e,
                10 => errs[1] = e,
                _ => {}
            }
        })
        .unwrap();
        errs
    });
    let first: usize = counts.iter().map(|c| c[0]).sum();
    let last: usize = counts.iter().map(|c| c[1]).sum();
    assert!(first > 0, "operating point too clean to be informative");
    assert!(
        last <= first,
        "iteration 10: {last} errors, iteration 1: {first}"
    );
}
