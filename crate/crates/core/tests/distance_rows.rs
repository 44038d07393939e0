use std::path::PathBuf;

use sccc::analysis::{analyze, row_patterns, RowAnalysis};
use sccc::bounds::ComposeMode;
use sccc::enumerator::Caps;
use sccc::puncturing::PatternFile;
use sccc::trellis::TrellisCode;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn rows(outer_file: &str, ladder_file: &str) -> Vec<RowAnalysis> {
    let rsc = TrellisCode::new(&"1,5/7".parse().unwrap()).unwrap();
    let p_o = PatternFile::read(data(outer_file))
        .unwrap()
        .to_pattern()
        .unwrap();
    let parity = PatternFile::read(data("parity_ladder_n300.pat"))
        .unwrap()
        .into_ladder()
        .unwrap();
    let sys = PatternFile::read(data(ladder_file))
        .unwrap()
        .into_ladder()
        .unwrap();
    [20, 40, 60, 80, 100]
        .into_iter()
        .map(|rp| {
            let (pp, pip) = row_patterns(&parity, &sys, &p_o, rp, 300 - rp).unwrap();
            analyze(
                &rsc,
                &p_o,
                &rsc,
                200,
                &pp,
                &pip,
                &Caps::default(),
                4,
                ComposeMode::ExactBinomial,
            )
            .unwrap()
        })
        .collect()
}

fn check(rows: &[RowAnalysis], d_at: [usize; 5], h_m: [usize; 5], n_hm: [f64; 5], d_f: usize) {
    for (i, r) in rows.iter().enumerate() {
        let p = r.parameters();
        assert_eq!(p.h_m3, Some(0), "row {i}");
        assert_eq!(p.d_odprime_at_dfoprime, d_at[i], "row {i}");
        assert_eq!(p.h_alpha_m, h_m[i], "row {i}");
        assert_eq!(p.h_m, h_m[i], "row {i}");
        assert!(
            (p.n_hm - n_hm[i]).abs() <= 0.05 * n_hm[i],
            "row {i}: {}",
            p.n_hm
        );
        assert_eq!(p.d_f_o_prime, d_f);
        assert_eq!(p.alpha_m, -2);
        let profile = r.asymptotic.profile.as_ref().unwrap();
        assert_eq!(profile.alpha_m, p.alpha_m, "row {i}");
        assert_eq!(profile.h_alpha_m, p.h_alpha_m, "row {i}");
    }
}

#[test]
fn rate_two_thirds_family_po1() {
    let r = rows("outer_po1.pat", "systematic_ladder_po1.pat");
    check(
        &r,
        [3, 2, 2, 2, 1],
        [3, 2, 2, 2, 1],
        [3.60e-1, 4.81e-3, 7.12e-3, 5.28e-3, 1.40e-4],
        3,
    );
}

#[test]
fn rate_two_thirds_family_po2() {
    let r = rows("outer_po2.pat", "systematic_ladder_po2.pat");
    check(
        &r,
        [3, 2, 2, 2, 2],
        [3, 2, 2, 2, 2],
        [3.32e-1, 5.24e-3, 4.12e-3, 1.98e-3, 8.47e-4],
        4,
    );
}
