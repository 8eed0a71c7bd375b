use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use rfemu_core::controlpath::{DelayController, DelayMode, FifoGeometry};
use rfemu_core::datapath::{fdc_apply, AdderTree, FdcTaps};
use rfemu_core::harness::{compile_scene, matched_filter, reference_chirp, run_emulation, widen, RunOptions, ASIC4};
use rfemu_core::scenario::Scene;
use rfemu_core::{quantize_f16, ComplexSample};

fn sample(k: usize) -> ComplexSample {
    let t = k as f64 * 0.013;
    ComplexSample::new(quantize_f16(0.7 * t.cos()), quantize_f16(0.7 * t.sin()))
}

fn kernels(c: &mut Criterion) {
    let taps = FdcTaps::from_mu(0.37);
    let window = [sample(0), sample(1), sample(2), sample(3)];
    c.bench_function("fdc_apply", |b| b.iter(|| fdc_apply(black_box(&window), black_box(&taps))));

    let inputs: Vec<ComplexSample> = (0..16).map(sample).collect();
    let gains = vec![quantize_f16(0.05); 16];
    let mut tree = AdderTree::default();
    c.bench_function("adder_tree_16", |b| b.iter(|| tree.sum(black_box(&inputs), black_box(&gains))));

    let geometry = FifoGeometry { banks: 8, bank_depth: 512, rtr_depth: 256 };
    let delays: Vec<u32> = (0..32).map(|k| 600 + 7 * k).collect();
    c.bench_function("controller_1k_cycles_32_outputs", |b| {
        b.iter_batched(
            || DelayController::new(geometry, &delays, DelayMode::Strict).unwrap(),
            |mut ctl| {
                let mut out = vec![ComplexSample::ZERO; delays.len()];
                for k in 0..1024 {
                    ctl.cycle(sample(k), &mut out);
                }
                out
            },
            BatchSize::SmallInput,
        )
    });

    let chirp = widen(&reference_chirp(512));
    let captured: Vec<_> = (0..16384).map(|k| sample(k).to_c64()).collect();
    c.bench_function("matched_filter_16k_x_512", |b| b.iter(|| matched_filter(black_box(&captured), black_box(&chirp))));

    let scene = Scene::from_toml_str(include_str!("../../../scenes/direct_path.toml")).unwrap();
    let scps: Vec<_> = compile_scene(&scene, &ASIC4, DelayMode::Strict, 1).unwrap().into_iter().map(|f| f.scp).collect();
    let mut group = c.benchmark_group("emulation");
    group.sample_size(10);
    group.bench_function("direct_path_8k_cycles", |b| {
        b.iter(|| run_emulation(&scene, &ASIC4, &scps, 8192, &RunOptions::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, kernels);
criterion_main!(benches);
