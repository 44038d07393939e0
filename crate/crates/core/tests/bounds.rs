use std::path::PathBuf;

use num_traits::Zero;
use proptest::prelude::*;

use sccc::analysis::{analyze, row_patterns, RowAnalysis};
use sccc::bounds::{cumulative_spectrum, union_bound_bit, union_bound_frame, ComposeMode, Kernel};
use sccc::enumerator::Caps;
use sccc::puncturing::{PatternFile, PuncturePattern};
use sccc::trellis::TrellisCode;
use sccc::{Exec, Rational64};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn rsc() -> TrellisCode {
    TrellisCode::new(&"1,5/7".parse().unwrap()).unwrap()
}

fn row(kept_parity: usize) -> RowAnalysis {
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
    let (pp, pip) = row_patterns(&parity, &sys, &p_o, kept_parity, 300 - kept_parity).unwrap();
    analyze(
        &rsc(),
        &p_o,
        &rsc(),
        200,
        &pp,
        &pip,
        &Caps::default(),
        4,
        ComposeMode::ExactBinomial,
    )
    .unwrap()
}

fn grid() -> Vec<f64> {
    (0..=16).map(|i| 4.0 + 0.25 * i as f64).collect()
}

#[test]
fn curves_are_ordered_and_decreasing() {
    let r = row(40);
    let rate = Rational64::new(2, 3);
    let g = grid();
    for kernel in [Kernel::Exponential, Kernel::Erfc] {
        let pf = union_bound_frame(&r.spectrum, rate, &g, kernel, Exec::Parallel).unwrap();
        let pb = union_bound_bit(&r.spectrum, rate, &g, kernel, Exec::Parallel).unwrap();
        for w in pf.points.windows(2) {
            assert!(
                w[1].1 < w[0].1,
                "{kernel}: frame bound rises at {} dB",
                w[1].0
            );
        }
        for (f, b) in pf.points.iter().zip(&pb.points) {
            assert!(f.1 >= b.1, "{kernel}: P_b > P_f at {} dB", f.0);
        }
    }
    let e =
        union_bound_frame(&r.spectrum, rate, &g, Kernel::Exponential, Exec::Sequential).unwrap();
    let q = union_bound_frame(&r.spectrum, rate, &g, Kernel::Erfc, Exec::Sequential).unwrap();
    for (a, b) in e.points.iter().zip(&q.points) {
        assert!(b.1 <= a.1);
    }
}

#[test]
fn grid_evaluation_is_schedule_independent() {
    let r = row(80);
    let rate = Rational64::new(2, 3);
    let g = grid();
    let a = union_bound_frame(&r.spectrum, rate, &g, Kernel::Exponential, Exec::Parallel).unwrap();
    let b =
        union_bound_frame(&r.spectrum, rate, &g, Kernel::Exponential, Exec::Sequential).unwrap();
    assert_eq!(a, b);
}

#[test]
fn floor_slope_follows_minimum_weight() {
    // At high SNR the frame bound decays like exp(-h_m R Eb/N0).
    let r = row(100);
    let rate = Rational64::new(2, 3);
    let pts = [20.0, 21.0];
    let pf = union_bound_frame(
        &r.spectrum,
        rate,
        &pts,
        Kernel::Exponential,
        Exec::Sequential,
    )
    .unwrap();
    let (x0, x1) = (10f64.powf(2.0), 10f64.powf(2.1));
    let slope = (pf.points[0].1.ln() - pf.points[1].1.ln()) / ((x1 - x0) * 2.0 / 3.0);
    assert!(
        (slope - r.h_m as f64).abs() < 1e-6,
        "slope {slope}, h_m {}",
        r.h_m
    );
}

#[test]
fn cumulative_spectrum_is_nondecreasing() {
    let r = row(60);
    let cum = cumulative_spectrum(&r.spectrum).unwrap();
    let mut prev = num_rational::BigRational::zero();
    for v in cum.values() {
        assert!(*v >= prev);
        prev = v.clone();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn toy_bounds_are_monotone(parity_bits in 0u32..(1 << 12), db in 0.0f64..8.0) {
        let k = 8;
        let p_o = PuncturePattern::none(2 * k);
        let n = 2 * k;
        let p_prime = PuncturePattern::none(n);
        let p_i_p = PuncturePattern::from_deleted(n, (0..12).filter(|i| parity_bits >> i & 1 == 1)).unwrap();
        let r = analyze(&rsc(), &p_o, &rsc(), k, &p_prime, &p_i_p, &Caps::default(), 4, ComposeMode::ExactBinomial);
        prop_assume!(r.is_ok());
        let r = r.unwrap();
        let rate = Rational64::new(k as i64, (n + p_i_p.num_kept()) as i64);
        let pts = [db, db + 0.5];
        let pf = union_bound_frame(&r.spectrum, rate, &pts, Kernel::Erfc, Exec::Sequential).unwrap();
        let pb = union_bound_bit(&r.spectrum, rate, &pts, Kernel::Erfc, Exec::Sequential).unwrap();
        prop_assert!(pf.points[1].1 < pf.points[0].1);
        prop_assert!(pf.points[0].1 >= pb.points[0].1);
    }
}
