//! Parallel against sequential execution of the three data-parallel loops:
//! Monte Carlo frames, optimizer candidates and bound grid points.
//!
//! Run with: cargo bench -p sccc-core

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use sccc::bounds::{compose_uniform, union_bound_frame, ComposeMode, Kernel};
use sccc::enumerator::{inner_joint_enumerator, outer_joint_enumerator, Caps};
use sccc::optimizer::optimize_parity_ladder;
use sccc::puncturing::{Permutation, PuncturePattern, ScccConfig};
use sccc::simulator::{run_monte_carlo, DecoderConfig, StopRule};
use sccc::trellis::TrellisCode;
use sccc::{Exec, Rational64};

const MODES: [(&str, Exec); 2] = [
    ("parallel", Exec::Parallel),
    ("sequential", Exec::Sequential),
];

fn rsc() -> TrellisCode {
    TrellisCode::new(&"1,5/7".parse().unwrap()).unwrap()
}

fn rate_two_thirds(k: usize) -> ScccConfig {
    let p_o = PuncturePattern::periodic(&[true, true, true, false], 2 * k).unwrap();
    let n = p_o.num_kept();
    let p_prime = PuncturePattern::from_deleted(n, (0..n).filter(|i| i % 8 == 3)).unwrap();
    let p_i_p = PuncturePattern::from_deleted(n, (0..n).filter(|i| i % 8 != 0)).unwrap();
    ScccConfig::new(
        rsc(),
        p_o,
        rsc(),
        k,
        p_prime,
        Permutation::random(n, 1),
        p_i_p,
    )
    .unwrap()
}

fn monte_carlo(c: &mut Criterion) {
    let cfg = rate_two_thirds(200);
    let stop = StopRule {
        min_frame_errors: u64::MAX,
        max_frames: 128,
    };
    let mut g = c.benchmark_group("monte_carlo_128_frames");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                run_monte_carlo(&cfg, &DecoderConfig::default(), &[3.0], &stop, 1, exec).unwrap()
            })
        });
    }
    g.finish();
}

fn optimizer(c: &mut Criterion) {
    let mut g = c.benchmark_group("parity_ladder_n300_20_steps");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| optimize_parity_ladder(&rsc(), 300, 4, black_box(20), exec).unwrap())
        });
    }
    g.finish();
}

fn bound_grid(c: &mut Criterion) {
    let cfg = rate_two_thirds(200);
    let outer = outer_joint_enumerator(
        cfg.outer(),
        cfg.p_o(),
        cfg.p_prime(),
        cfg.k(),
        &Caps::default(),
    )
    .unwrap();
    let inner =
        inner_joint_enumerator(cfg.inner(), cfg.p_i_p(), cfg.n(), &Caps::default()).unwrap();
    let spec = compose_uniform(&outer, &inner, ComposeMode::ExactBinomial).unwrap();
    let grid: Vec<f64> = (0..2000).map(|i| i as f64 * 0.005).collect();
    let mut g = c.benchmark_group("bound_grid_2000_points");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                union_bound_frame(&spec, Rational64::new(2, 3), &grid, Kernel::Erfc, exec).unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, monte_carlo, optimizer, bound_grid);
criterion_main!(benches);
