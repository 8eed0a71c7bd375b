use rfemu_core::controlpath::DelayMode;
use rfemu_core::harness::*;
use rfemu_core::scenario::{NodeRole, Scene, SceneObject, Waveform};
use rfemu_core::harness::HarnessError;
use rfemu_core::SPEED_OF_LIGHT;

fn tx_rx(distance: f64, fs: f64, len: u64) -> Scene {
    let mut s = Scene::minimal(fs, len);
    s.waveform = Waveform::PulseTrain { pri: 32768, chirp_len: 512 };
    s.objects = vec![
        SceneObject::at(0, NodeRole::Transmitter, [0.0; 3]),
        SceneObject::at(1, NodeRole::Receiver, [distance, 0.0, 0.0]),
    ];
    s
}

fn run(scene: &Scene, preset: &Preset, cycles: u64) -> EmulationRun {
    let solved = compile_scene(scene, preset, DelayMode::Strict, scenarios_needed(scene, cycles)).unwrap();
    let scps: Vec<_> = solved.iter().map(|s| s.scp.clone()).collect();
    run_emulation(scene, preset, &scps, cycles, &RunOptions::default()).unwrap()
}

#[test]
fn direct_path_peak_lands_at_the_programmed_delay() {
    let scene = tx_rx(3000.0, ASIC4.sample_rate, 4096);
    let r = run(&scene, &ASIC4, 8192);
    let cap = widen(r.capture(1).unwrap());
    let mf = matched_filter(&cap, &widen(&reference_chirp(512)));
    let peaks = detect_peaks(&mf, DEFAULT_THRESHOLD, DEFAULT_MIN_SEPARATION);
    let want = 3000.0 * ASIC4.sample_rate / SPEED_OF_LIGHT;
    assert_eq!(peaks.len(), 1, "{peaks:?}");
    assert!((peaks[0].position - want).abs() < 0.25, "{} vs {want}", peaks[0].position);
}

#[test]
fn dut_tracks_the_reference_model() {
    let scene = tx_rx(3000.0, ASIC4.sample_rate, 4096);
    let cycles = 8192;
    let solved = compile_scene(&scene, &ASIC4, DelayMode::Strict, 2).unwrap();
    let r = run(&scene, &ASIC4, cycles);
    let g = run_golden(&scene, &solved, ASIC4.sample_rate, cycles as usize).unwrap();
    let cmp = compare_to_golden(r.capture(1).unwrap(), g[1].as_ref().unwrap(), 0);
    println!("{cmp:?}");
    assert!(cmp.rms_rel_error < 5e-2);
}

#[test]
fn all_gains_zero_gives_silence() {
    let mut scene = tx_rx(3000.0, ASIC4.sample_rate, 4096);
    scene.objects[0].antenna.g_t = rfemu_core::golden::AngularTable::constant(0.0);
    let r = run(&scene, &ASIC4, 6000);
    assert!(r.capture(1).unwrap().iter().all(|s| s.is_zero()));
}

fn peaks_of(samples: &[num_complex::Complex64], threshold: f64) -> Vec<Peak> {
    detect_peaks(&matched_filter(samples, &widen(&reference_chirp(512))), threshold, DEFAULT_MIN_SEPARATION)
}

#[test]
fn multi_bounce_peak_appears_where_the_reference_predicts() {
    let fs = ASIC4.sample_rate;
    let mut scene = Scene::minimal(fs, 32768);
    scene.objects = vec![
        SceneObject::at(0, NodeRole::Transmitter, [0.0; 3]),
        SceneObject::at(1, NodeRole::Passive, [1000.0, 0.0, 0.0]),
        SceneObject::at(2, NodeRole::Passive, [0.0, 3500.0, 0.0]),
        SceneObject::at(3, NodeRole::Receiver, [0.0, 1750.0, 0.0]),
    ];
    let cycles = 16_500;
    let solved = compile_scene(&scene, &ASIC4, DelayMode::Strict, 1).unwrap();
    let run = run(&scene, &ASIC4, cycles);
    let golden = run_golden(&scene, &solved, fs, cycles as usize).unwrap();
    let dut = peaks_of(&widen(run.capture(3).unwrap()), 0.1);
    let gold = peaks_of(golden[3].as_ref().unwrap(), 0.1);
    assert_eq!(dut.len(), gold.len(), "{dut:?} vs {gold:?}");
    for (a, b) in dut.iter().zip(&gold) {
        assert!((a.position - b.position).abs() <= 1.0);
    }
    // Tx -> object 1 -> object 2 -> Rx.
    let bounce = (1000.0 + 1000f64.hypot(3500.0) + 1750.0) * fs / SPEED_OF_LIGHT;
    assert!(dut.iter().any(|p| (p.position - bounce).abs() < 1.0), "no peak near {bounce}: {dut:?}");
    assert!(dut.len() >= 4);
}

#[test]
fn fractional_delay_tracks_a_slow_object() {
    // One transmitter and one receiver 596.012 m away moving at 0.1 m/s;
    // frames are spread so that the whole track spans about one sample.
    let fs = SIM2G5.sample_rate;
    let pri = 8192u64;
    let frames = 24usize;
    let track = |fractional: bool| -> f64 {
        let mut scene = tx_rx(596.012, fs, pri);
        scene.fractional_delay = fractional;
        scene.frame_interval_s = 0.05;
        scene.waveform = Waveform::PulseTrain { pri, chirp_len: 512 };
        scene.objects[1].velocity = [0.1, 0.0, 0.0];
        let cycles = frames as u64 * pri;
        let r = run(&scene, &SIM2G5, cycles);
        let corr = matched_filter(&widen(r.capture(1).unwrap()), &widen(&reference_chirp(512)));
        let mut sq = 0.0;
        for j in 0..frames {
            let start = j * pri as usize;
            let peaks = detect_peaks(&corr[start..start + pri as usize], DEFAULT_THRESHOLD, DEFAULT_MIN_SEPARATION);
            assert_eq!(peaks.len(), 1);
            let est = peaks[0].position * SPEED_OF_LIGHT / fs;
            let truth = 596.012 + 0.1 * 0.05 * j as f64;
            sq += (est - truth).powi(2);
        }
        sq / frames as f64
    };
    let (with, without) = (track(true), track(false));
    assert!(with < without, "MSE with FDC {with} vs without {without}");
}

#[test]
fn identical_packets_make_boundaries_invisible() {
    let scene = tx_rx(2000.0, ASIC4.sample_rate, 1024);
    let solved = compile_scene(&scene, &ASIC4, DelayMode::Strict, 1).unwrap();
    let one = vec![solved[0].scp.clone(); 8];
    let mut long_scene = scene.clone();
    long_scene.scenario_length = 8192;
    let a = run_emulation(&scene, &ASIC4, &one, 8192, &RunOptions::default()).unwrap();
    let b = run_emulation(&long_scene, &ASIC4, &one[..1], 8192, &RunOptions::default()).unwrap();
    assert_eq!(a.captures, b.captures);
}

#[test]
fn gain_change_applies_from_the_boundary() {
    let fs = ASIC4.sample_rate;
    let len = 4096u64;
    let mut scene = tx_rx(2200.0, fs, len);
    scene.waveform = Waveform::PulseTrain { pri: 2048, chirp_len: 512 };
    let solved = compile_scene(&scene, &ASIC4, DelayMode::Strict, 2).unwrap();
    let mut scps: Vec<_> = solved.iter().map(|s| s.scp.clone()).collect();
    scps[1].links[0].g_t = rfemu_core::quantize_f16(0.0);
    let r = run_emulation(&scene, &ASIC4, &scps, 2 * len, &RunOptions::default()).unwrap();
    let cap = r.capture(1).unwrap();
    // Emissions from cycle `len` on are silent; they arrive one cycle later.
    assert!(cap[len as usize + 1..].iter().all(|s| s.is_zero()));
    assert!(!cap[len as usize - 16..=len as usize].iter().all(|s| s.is_zero()));
}

#[test]
fn missing_packets_and_topology_mismatch_are_reported() {
    let scene = tx_rx(2000.0, ASIC4.sample_rate, 1000);
    let solved = compile_scene(&scene, &ASIC4, DelayMode::Strict, 1).unwrap();
    let scps = vec![solved[0].scp.clone()];
    let err = run_emulation(&scene, &ASIC4, &scps, 1500, &RunOptions::default()).unwrap_err();
    assert!(matches!(err, rfemu_core::Error::Harness(HarnessError::MissingScps { have: 1, need: 2, .. })));
    let mut bad = scps.clone();
    bad[0].links[0].dst = 7;
    let err = run_emulation(&scene, &ASIC4, &bad, 500, &RunOptions::default()).unwrap_err();
    assert!(matches!(err, rfemu_core::Error::Harness(HarnessError::TopologyMismatch { scenario: 0, .. })));
}

#[test]
fn lenient_mode_suppresses_too_close_links() {
    let scene = tx_rx(500.0, ASIC4.sample_rate, 4096);
    assert!(compile_scene(&scene, &ASIC4, DelayMode::Strict, 1).is_err());
    let solved = compile_scene(&scene, &ASIC4, DelayMode::Lenient, 1).unwrap();
    let scps = vec![solved[0].scp.clone()];
    let opts = RunOptions { mode: DelayMode::Lenient, threads: 1 };
    let r = run_emulation(&scene, &ASIC4, &scps, 3000, &opts).unwrap();
    assert!(r.capture(1).unwrap().iter().all(|s| s.is_zero()));
    assert_eq!(r.total_instrumentation().suppressed_outputs, 1);
}
