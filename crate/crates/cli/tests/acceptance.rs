//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero
//! if any criterion fails. Tolerances and time limits are fixed below.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use cdbs_core::circuit::{self, depth, interferometer, sparsity, OpticalCircuit, PostselectionSpec, TwoModeGate};
use cdbs_core::fock::{
    circuit_distribution, occupancy_support, output_distribution, FockState, FockVector, SimConfig,
};
use cdbs_core::klm::{
    compile_depth4, compile_naive, cz_on_zero_rails, knill_cz, teleport_mode, verify_program, GateBlock,
    KNILL_SUCCESS, TELEPORT_SUCCESS,
};
use cdbs_core::qubit::{parse_program, simulate, GraphProgram, QubitCircuit, TwoQubitGate};
use cdbs_core::random::{haar_mat4, random_depth2_optical, random_depth2_qubits, random_graph_program, random_layered_circuit, random_state};
use cdbs_core::shallow::{
    exact_depth2_optical, exact_depth2_qubits, simulate_depth2_optical, simulate_depth2_qubits, ShallowConfig,
};
use cdbs_core::{Error, C64};

const TOL_KNILL_RATE: f64 = 1e-9;
const TOL_FIDELITY: f64 = 1e-9;
const TOL_TVD: f64 = 1e-9;
const TOL_OUTCOME: f64 = 1e-9;
const TOL_HOM: f64 = 1e-12;
const CHI_SQUARE_ALPHA: f64 = 0.001;
const CHI_SQUARE_SHOTS: usize = 100_000;
const MIN_EXPECTED: f64 = 5.0;

type Criterion = (&'static str, Duration, fn() -> Verdict);

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

fn corpus(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(rel)
}

fn corpus_programs() -> Vec<(String, GraphProgram)> {
    let mut out: Vec<(String, GraphProgram)> = fs::read_dir(corpus("programs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "graph"))
        .map(|p| {
            let g = parse_program(&fs::read_to_string(&p).unwrap()).unwrap();
            (p.file_stem().unwrap().to_string_lossy().into_owned(), g)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn corpus_circuits() -> Vec<(String, OpticalCircuit)> {
    let mut out: Vec<(String, OpticalCircuit)> = fs::read_dir(corpus("circuits"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "circuit"))
        .map(|p| {
            let c = circuit::parse(&fs::read_to_string(&p).unwrap()).unwrap();
            (p.file_name().unwrap().to_string_lossy().into_owned(), c)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Runs `block` embedded at `mode_map` on a superposition input and returns
/// the heralded (unnormalized) vector on the remaining modes.
fn heralded(block: &GateBlock, modes: usize, mode_map: &[usize], input: FockVector) -> FockVector {
    let mut c = OpticalCircuit::new(FockState::vacuum(modes));
    let slots: Vec<usize> = (0..block.layers.len()).collect();
    block.instantiate(&mut c, mode_map, &slots);
    let mut v = input;
    v.evolve(&c.layers, 1_000_000).unwrap();
    v.project(&c.postselection)
}

fn fidelity(a: &[C64], b: &[C64]) -> f64 {
    let na: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let nb: f64 = b.iter().map(|z| z.norm_sqr()).sum();
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C64>().norm_sqr() / (na * nb)
}

fn chi_square_passes<K: Ord + Clone>(samples: &[K], expected: &[(K, f64)]) -> (bool, f64, f64) {
    let shots = samples.len() as f64;
    let mut observed: BTreeMap<K, usize> = BTreeMap::new();
    for s in samples {
        *observed.entry(s.clone()).or_default() += 1;
    }
    let mut bins = Vec::new();
    let mut pool = (0.0, 0.0);
    let mut seen = 0usize;
    let mut impossible = 0usize;
    for (k, p) in expected {
        let o = observed.get(k).copied().unwrap_or(0);
        seen += o;
        let e = p * shots;
        if *p == 0.0 {
            impossible += o;
        } else if e < MIN_EXPECTED {
            pool.0 += o as f64;
            pool.1 += e;
        } else {
            bins.push((o as f64, e));
        }
    }
    impossible += samples.len() - seen;
    if pool.1 > 0.0 {
        if pool.1 >= MIN_EXPECTED || bins.is_empty() {
            bins.push(pool);
        } else if let Some(b) = bins.iter_mut().min_by(|a, b| a.1.total_cmp(&b.1)) {
            b.0 += pool.0;
            b.1 += pool.1;
        }
    }
    let stat: f64 = bins.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = bins.len().saturating_sub(1);
    let critical = if dof == 0 {
        f64::INFINITY
    } else {
        ChiSquared::new(dof as f64).unwrap().inverse_cdf(1.0 - CHI_SQUARE_ALPHA)
    };
    (impossible == 0 && stat <= critical, stat, critical)
}

fn knill_contract() -> Verdict {
    let block = knill_cz();
    let mut worst_rate = 0.0f64;
    let mut diag = Vec::new();
    let mut leak = 0.0f64;
    for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let input = FockVector::basis_state(FockState::new(vec![a, 1, 1, b]));
        let h = heralded(&block, 4, &[0, 1, 2, 3], input);
        let rate = h.norm_sqr();
        worst_rate = worst_rate.max((rate - KNILL_SUCCESS).abs());
        let amp = h.amplitude(&FockState::new(vec![a, b]));
        leak = leak.max(rate - amp.norm_sqr());
        diag.push(amp / KNILL_SUCCESS.sqrt());
    }
    // Process fidelity |Tr(CZ† M)|² / 16 of the heralded operator.
    let overlap: C64 = diag.iter().zip([1.0, 1.0, 1.0, -1.0]).map(|(d, s)| d * s).sum();
    let f = overlap.norm_sqr() / 16.0;
    verdict(
        worst_rate <= TOL_KNILL_RATE && f >= 1.0 - TOL_FIDELITY && leak <= TOL_KNILL_RATE,
        format!("max |p - 2/27| = {worst_rate:.2e}, off-diagonal mass {leak:.2e}, fidelity to CZ 1 - {:.2e}", 1.0 - f),
    )
}

/// Two dual-rail qubits on rails (0, 1) and (4, 5); ancillas on 2 and 3.
fn zero_rail_cz() -> Verdict {
    let block = cz_on_zero_rails();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut states: Vec<Vec<C64>> = (0..4)
        .map(|i| (0..4).map(|j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();
    states.extend((0..10).map(|_| random_state(4, &mut rng)));
    let rail = |x: usize, y: usize| FockState::new(vec![1 - x as u32, x as u32, 1, 1, 1 - y as u32, y as u32]);
    let logical = |x: usize, y: usize| FockState::new(vec![1 - x as u32, x as u32, 1 - y as u32, y as u32]);
    let mut worst_f = 1.0f64;
    let mut worst_rate = 0.0f64;
    for psi in &states {
        let terms = (0..4).map(|i| (rail(i >> 1, i & 1), psi[i]));
        let h = heralded(&block, 6, &[0, 2, 3, 4], FockVector::from_terms(6, terms).unwrap());
        worst_rate = worst_rate.max((h.norm_sqr() - KNILL_SUCCESS).abs());
        let out: Vec<C64> = (0..4).map(|i| h.amplitude(&logical(i >> 1, i & 1))).collect();
        let want: Vec<C64> = psi.iter().enumerate().map(|(i, &z)| if i == 3 { -z } else { z }).collect();
        worst_f = worst_f.min(fidelity(&out, &want));
    }
    verdict(
        worst_f >= 1.0 - TOL_FIDELITY,
        format!("14 inputs, min fidelity 1 - {:.2e}, max |p - 2/27| = {worst_rate:.2e}", 1.0 - worst_f),
    )
}

/// Dual-rail qubit on (0, 1); rail 1 is teleported to mode 3 via mode 2.
fn mode_teleportation() -> Verdict {
    let block = teleport_mode();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_f = 1.0f64;
    let mut worst_rate = 0.0f64;
    for _ in 0..20 {
        let psi = random_state(2, &mut rng);
        let input = FockVector::from_terms(
            4,
            [
                (FockState::new(vec![1, 0, 1, 0]), psi[0]),
                (FockState::new(vec![0, 1, 1, 0]), psi[1]),
            ],
        )
        .unwrap();
        let h = heralded(&block, 4, &[1, 2, 3], input);
        worst_rate = worst_rate.max((h.norm_sqr() - TELEPORT_SUCCESS).abs());
        let out = [
            h.amplitude(&FockState::new(vec![1, 0])),
            h.amplitude(&FockState::new(vec![0, 1])),
        ];
        worst_f = worst_f.min(fidelity(&out, &psi));
    }
    verdict(
        worst_f >= 1.0 - TOL_FIDELITY,
        format!("20 states, min fidelity 1 - {:.2e}, max |p - 1/4| = {worst_rate:.2e}", 1.0 - worst_f),
    )
}

fn depth_counts() -> Verdict {
    let mut checked = Vec::new();
    let mut ok = true;
    for (name, g) in corpus_programs() {
        if g.nonempty_layers() != 3 {
            continue;
        }
        let naive = compile_naive(&g).unwrap();
        let d4 = compile_depth4(&g).unwrap();
        let good = naive.depth == 8 && d4.depth == 4 && depth(&naive.circuit) == 8 && depth(&d4.circuit) == 4;
        ok &= good;
        checked.push(format!("{name} {}/{}", naive.depth, d4.depth));
    }
    verdict(
        ok && !checked.is_empty(),
        format!("naive8/depth4 depths: {}", checked.join(", ")),
    )
}

fn compiler_equivalence() -> Verdict {
    let mut programs: Vec<(String, GraphProgram)> = corpus_programs()
        .into_iter()
        .filter(|(_, g)| g.vertices <= 3 && g.edges.len() <= 2)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..20 {
        let n = rng.random_range(1..=3);
        let mut g = random_graph_program(n, rng.random_range(1..=n), true, &mut rng);
        g.edges.truncate(2);
        programs.push((format!("random{i}"), g));
    }
    let mut worst = 0.0f64;
    let mut checked = 0;
    let mut failures = Vec::new();
    for (name, g) in &programs {
        let report = verify_program(g, &SimConfig::default());
        if matches!(report.outcomes[0].result, Err(Error::InfeasiblePostselection(_))) {
            continue;
        }
        checked += 1;
        worst = worst.max(report.max_tvd()).max(report.max_leakage());
        if !report.passed() {
            failures.push(name.clone());
        }
    }
    verdict(
        failures.is_empty() && checked >= 5 && worst < TOL_TVD,
        format!("{checked} programs, max pairwise TVD {worst:.2e}, failures: {failures:?}"),
    )
}

fn random_register(mut c: OpticalCircuit, rng: &mut ChaCha8Rng) -> OpticalCircuit {
    let mut modes: Vec<usize> = (0..c.modes).collect();
    modes.shuffle(rng);
    let post = rng.random_range(0..=modes.len() / 2);
    let mut spec = PostselectionSpec::new();
    for &m in &modes[..post] {
        spec.require(m, rng.random_range(0..=1));
    }
    let mut outputs = modes[post..].to_vec();
    outputs.sort();
    c.postselection = spec;
    c.output_modes = outputs;
    c
}

fn optical_exactness() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let config = ShallowConfig::default();
    let mut worst = 0.0f64;
    let mut chi = Vec::new();
    let mut ok = true;
    let mut done = 0;
    while done < 100 {
        let modes = rng.random_range(2..=8);
        let photons = rng.random_range(1..=modes.min(4));
        let mut c = random_depth2_optical(modes, photons, &mut rng);
        if done % 2 == 1 {
            c = random_register(c, &mut rng);
        }
        let Ok(brute) = circuit_distribution(&c, &SimConfig::default()) else { continue };
        let fast = exact_depth2_optical(&c, &config).unwrap();
        let diff = fast.max_abs_diff(&brute);
        worst = worst.max(diff);
        ok &= diff <= TOL_OUTCOME;
        if done < 10 {
            let batch = simulate_depth2_optical(&c, CHI_SQUARE_SHOTS, 600 + done as u64, &config).unwrap();
            let expected: Vec<(FockState, f64)> = brute.iter().map(|(s, p)| (s.clone(), p)).collect();
            let (pass, stat, crit) = chi_square_passes(&batch.outcomes, &expected);
            ok &= pass;
            chi.push(format!("{stat:.1}/{crit:.1}"));
        }
        done += 1;
    }
    verdict(
        ok,
        format!("100 circuits, max |Δp| {worst:.2e}; chi-square stat/critical: {}", chi.join(" ")),
    )
}

fn qubit_exactness() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let config = ShallowConfig::default();
    let mut worst = 0.0f64;
    let mut chi = Vec::new();
    let mut ok = true;
    let mut done = 0;
    while done < 100 {
        let n = rng.random_range(2..=10);
        let mut c: QubitCircuit = random_depth2_qubits(n, &mut rng);
        if done % 2 == 1 {
            let mut qs: Vec<usize> = (0..n).collect();
            qs.shuffle(&mut rng);
            let post = rng.random_range(0..n);
            c.postselect = qs[..post].iter().map(|&q| (q, rng.random_range(0..=1))).collect();
            c.outputs = qs[post..].to_vec();
        }
        let Ok(oracle) = simulate(&c) else { continue };
        let fast = exact_depth2_qubits(&c, &config).unwrap();
        let diff = fast.max_abs_diff(&oracle);
        worst = worst.max(diff);
        ok &= diff <= TOL_OUTCOME;
        if done < 10 {
            let batch = simulate_depth2_qubits(&c, CHI_SQUARE_SHOTS, 700 + done as u64, &config).unwrap();
            let expected: Vec<(Vec<u8>, f64)> = oracle.iter().collect();
            let (pass, stat, crit) = chi_square_passes(&batch.outcomes, &expected);
            ok &= pass;
            chi.push(format!("{stat:.1}/{crit:.1}"));
        }
        done += 1;
    }
    verdict(
        ok,
        format!("100 circuits, max |Δp| {worst:.2e}; chi-square stat/critical: {}", chi.join(" ")),
    )
}

fn structural_invariants() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_sparsity = Vec::new();
    let mut ok = true;
    for d in 1..=4usize {
        let mut worst = 0;
        for _ in 0..200 {
            let modes = rng.random_range(2..=24);
            let c = random_layered_circuit(modes, d, FockState::vacuum(modes), &mut rng);
            worst = worst.max(sparsity(&interferometer(&c), circuit::DEFAULT_SPARSITY_THRESHOLD));
        }
        ok &= worst <= 1 << d;
        worst_sparsity.push(format!("d={d}: {worst}<={}", 1 << d));
    }
    let mut occupancy_checked = 0;
    for (name, c) in corpus_circuits() {
        if c.input.max_occupation() > 1 {
            continue;
        }
        for k in 0..=c.layers.len() {
            let occ = occupancy_support(&c, k).unwrap();
            if occ as u64 > 1u64 << k {
                ok = false;
                worst_sparsity.push(format!("{name} after {k}: {occ}"));
            }
        }
        occupancy_checked += 1;
    }
    verdict(
        ok && occupancy_checked > 0,
        format!("max sparsity {}; occupancy checked on {occupancy_checked} corpus circuits", worst_sparsity.join(", ")),
    )
}

fn cli_backend(circuit: &Path) -> Option<String> {
    let out = Command::new(env!("CARGO_BIN_EXE_cdbs"))
        .args(["sample", circuit.to_str().unwrap(), "--shots", "10"])
        .output()
        .ok()?;
    let err = String::from_utf8(out.stderr).ok()?;
    let line = err.lines().find(|l| l.starts_with("routing: "))?;
    line.split_whitespace().nth(1).map(str::to_string)
}

fn depth_boundary() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let config = ShallowConfig::default();
    let mut rejected = 0;
    for _ in 0..100 {
        let modes = rng.random_range(2..=8);
        let c = random_layered_circuit(modes, 3, FockState::single_photons(modes, &[0]), &mut rng);
        if matches!(exact_depth2_optical(&c, &config), Err(Error::UnsupportedDepth { depth: 3, .. }))
            && matches!(simulate_depth2_optical(&c, 1, 0, &config), Err(Error::UnsupportedDepth { depth: 3, .. }))
        {
            rejected += 1;
        }
        let mut q = random_depth2_qubits(4, &mut rng);
        q.layers.push(vec![TwoQubitGate::new(1, 2, haar_mat4(&mut rng))]);
        if matches!(exact_depth2_qubits(&q, &config), Err(Error::UnsupportedDepth { depth: 3, .. })) {
            rejected += 1;
        }
    }

    let dir = tempfile::tempdir().unwrap();
    let mut routed = 0;
    let mut misrouted = Vec::new();
    for d in 0..=5 {
        let modes = 6;
        let c = random_layered_circuit(modes, d, FockState::single_photons(modes, &[0, 2, 4]), &mut rng);
        let path = dir.path().join(format!("d{d}.circuit"));
        fs::write(&path, circuit::serialize(&c)).unwrap();
        let want = if d <= 2 { "shallow" } else { "exact" };
        match cli_backend(&path) {
            Some(b) if b == want => routed += 1,
            other => misrouted.push(format!("depth {d}: {other:?}")),
        }
    }
    verdict(
        rejected == 200 && misrouted.is_empty(),
        format!("{rejected}/200 depth-3 circuits rejected; CLI routed {routed}/6 depths correctly {misrouted:?}"),
    )
}

fn hong_ou_mandel() -> Verdict {
    let mut c = OpticalCircuit::new(FockState::new(vec![1, 1]));
    c.add_gate(0, TwoModeGate::balanced(0, 1));
    let d = output_distribution(&c).unwrap();
    let p11 = d.probability(&FockState::new(vec![1, 1]));
    let p20 = d.probability(&FockState::new(vec![2, 0]));
    let p02 = d.probability(&FockState::new(vec![0, 2]));
    verdict(
        p11.abs() <= TOL_HOM && (p20 - 0.5).abs() <= TOL_HOM && (p02 - 0.5).abs() <= TOL_HOM,
        format!("P(11) = {p11:.2e}, P(20) = {p20:.15}, P(02) = {p02:.15}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Knill CZ contract", Duration::from_secs(1), knill_contract),
        ("Mode-reuse CZ on zero rails", Duration::from_secs(5), zero_rail_cz),
        ("Mode teleportation", Duration::from_secs(5), mode_teleportation),
        ("Depth counts", Duration::from_secs(1), depth_counts),
        ("Compiler equivalence", Duration::from_secs(600), compiler_equivalence),
        ("Depth-2 optical simulator exactness", Duration::from_secs(120), optical_exactness),
        ("Depth-2 qubit simulator exactness", Duration::from_secs(120), qubit_exactness),
        ("Structural invariants", Duration::from_secs(60), structural_invariants),
        ("Depth boundary", Duration::from_secs(1), depth_boundary),
        ("Hong-Ou-Mandel", Duration::from_secs(1), hong_ou_mandel),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        let elapsed = start.elapsed();
        let pass = v.passed && elapsed <= *limit;
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {} [{:.3}s, limit {}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            v.detail,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
