//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

mod common;

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qiopa::channels::{
    entanglement_entropy, estimation_fidelity, fidelity_from_ratio, fidelity_from_ratio_exact,
    optimal_cloning_fidelity, postselected_cloning_fidelity, postselected_unot_fidelity, rho1_series, rho2_series,
    unot_from_ratio, unot_from_ratio_exact,
};
use qiopa::detection::{simulate_cloning_run, simulate_unot_run, DetectorModel, ExperimentConfig, Measurement};
use qiopa::dynamics::{
    coherent_gain, evolution_oracle, evolve_qubit, first_order_output, nm_clone_state, nm_clone_weights, spdc_output,
};
use qiopa::fock::{inner, von_neumann_entropy};
use qiopa::universality::{
    bloch_fidelity_scan, degenerate_gain_proxy, fidelity_spread, hamiltonian_invariance, random_qubit, Su2Element,
};
use qiopa::wigner::{
    characteristic_closed_form, characteristic_oracle, wigner_closed_form, wigner_reference_state, ChiPoint,
    PhasePoint,
};
use qiopa::{AmplifierParams, OccupationKet, PolarizationQubit, SpatialMode, StateVector};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn lib<T>(r: qiopa::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn three_qubits() -> [(&'static str, PolarizationQubit); 3] {
    [("H", PolarizationQubit::h()), ("D", PolarizationQubit::d()), ("L", PolarizationQubit::l())]
}

fn cloning_fidelity() -> Check {
    let p = lib(AmplifierParams::universal(0.11))?;
    let mut worst: f64 = 0.0;
    for (name, q) in three_qubits() {
        let r = lib(postselected_cloning_fidelity(&lib(first_order_output(&q, &p))?, &q))?;
        let d = (r.f - 5.0 / 6.0).abs();
        ensure(d < 1e-12, format!("{name}: F = {}", r.f))?;
        worst = worst.max(d);
    }
    Ok(format!("max |F - 5/6| = {worst:.1e}"))
}

fn unot_fidelity() -> Check {
    let p = lib(AmplifierParams::universal(0.11))?;
    let mut worst: f64 = 0.0;
    for (name, q) in three_qubits() {
        let r = lib(postselected_unot_fidelity(&lib(first_order_output(&q, &p))?, &q))?;
        let d = (r.f_star - 2.0 / 3.0).abs();
        ensure(d < 1e-12, format!("{name}: F* = {}", r.f_star))?;
        worst = worst.max(d);
    }
    Ok(format!("max |F* - 2/3| = {worst:.1e}"))
}

fn ratio_formulas() -> Check {
    ensure(lib(fidelity_from_ratio(2.0))? == 5.0 / 6.0, "F(2)")?;
    ensure(lib(unot_from_ratio(2.0))? == 2.0 / 3.0, "F*(2)")?;
    ensure(fidelity_from_ratio_exact(Ratio::from_integer(2)) == Ratio::new(5, 6), "exact F(2)")?;
    ensure(unot_from_ratio_exact(Ratio::from_integer(2)) == Ratio::new(2, 3), "exact F*(2)")?;
    ensure(lib(optimal_cloning_fidelity(1, 2))? == Ratio::new(5, 6), "optimal 1->2")?;
    ensure(lib(estimation_fidelity(1))? == Ratio::new(2, 3), "estimation N=1")?;
    Ok("5/6 and 2/3 exact".into())
}

fn series_vs_trace() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let qubits: Vec<_> = (0..20).map(|_| random_qubit(&mut rng)).collect();
    let cutoff = 13;
    let n_max = (cutoff - 1) / 2;
    let mut worst: f64 = 0.0;
    for g in [0.05, 0.11, 0.3] {
        let p = lib(AmplifierParams::universal(g))?;
        for q in &qubits {
            let state = lib(evolve_qubit(q, &p, cutoff))?;
            let d1 = lib(rho1_series(q, &p, n_max))?.frobenius_distance(&state.partial_trace(SpatialMode::K1));
            let d2 = lib(rho2_series(q, &p, n_max))?.frobenius_distance(&state.partial_trace(SpatialMode::K2));
            worst = worst.max(d1).max(d2);
        }
    }
    ensure(worst < 1e-10, format!("distance {worst:e}"))?;
    Ok(format!("max Frobenius distance {worst:.1e}"))
}

fn series_vs_exponential() -> Check {
    let mut worst: f64 = 0.0;
    let qubits = [PolarizationQubit::h(), PolarizationQubit::d(), PolarizationQubit::from_bloch(1.1, -0.4)];
    for g in [0.05, 0.11, 0.3] {
        for phi in [0.0, 1.1] {
            let p = lib(AmplifierParams::new(g, phi))?;
            for q in &qubits {
                let input = StateVector::basis(OccupationKet::new(1, 0, 0, 0), 8)
                    .map(|s| s.rotate_polarization(SpatialMode::K1, &q.frame()));
                let oracle = lib(evolution_oracle(&lib(input)?, &p, 8))?;
                worst = worst.max(lib(evolve_qubit(q, &p, 8))?.max_amplitude_distance(&oracle));
            }
            let vac = lib(evolution_oracle(&StateVector::vacuum(8), &p, 8))?;
            worst = worst.max(lib(spdc_output(&p, 8))?.max_amplitude_distance(&vac));
        }
    }
    ensure(worst < 1e-8, format!("amplitude distance {worst:e}"))?;
    Ok(format!("max amplitude distance {worst:.1e}"))
}

fn nm_structure() -> Check {
    for m in 1..=10u32 {
        for n in 1..=m {
            let s: Ratio<u64> = lib(nm_clone_weights(n, m))?.iter().sum();
            ensure(s == Ratio::from_integer(1), format!("N={n} M={m}: sum {s}"))?;
        }
    }
    let p = lib(AmplifierParams::universal(0.4))?;
    let out = lib(evolve_qubit(&PolarizationQubit::h(), &p, 11))?;
    let mut worst: f64 = 0.0;
    for m in 1..=5u32 {
        let sector = out.sector(m, m - 1);
        let target = lib(nm_clone_state(1, m))?;
        let overlap = inner(&target, &sector).norm() / sector.norm_sqr().sqrt();
        worst = worst.max((overlap - 1.0).abs());
    }
    ensure(worst < 1e-10, format!("overlap deviation {worst:e}"))?;
    Ok(format!("weights sum to 1; max |overlap - 1| = {worst:.1e}"))
}

fn universality() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        worst = worst.max(lib(hamiltonian_invariance(&Su2Element::random(&mut rng), 0.0, 4))?.residual);
    }
    ensure(worst < 1e-10, format!("residual at 0: {worst:e}"))?;
    let mut best: f64 = 0.0;
    for _ in 0..20 {
        best = best.max(lib(hamiltonian_invariance(&Su2Element::random(&mut rng), FRAC_PI_2, 4))?.relative());
    }
    ensure(best > 1e-2, format!("relative residual at pi/2: {best:e}"))?;
    let spread = fidelity_spread(&lib(bloch_fidelity_scan(&lib(AmplifierParams::universal(0.11))?, 40, 5))?)
        .ok_or("empty scan")?;
    ensure(spread < 1e-10, format!("Bloch spread {spread:e}"))?;
    Ok(format!("residual {worst:.1e}; pi/2 relative {best:.2}; spread {spread:.1e}"))
}

fn degenerate() -> Check {
    let p = lib(AmplifierParams::universal(0.11))?;
    let h = lib(degenerate_gain_proxy(&PolarizationQubit::h(), &p, 16))?.gain_proxy;
    let d = lib(degenerate_gain_proxy(&PolarizationQubit::d(), &p, 16))?.gain_proxy;
    let rel = (d - h).abs() / h.abs().max(d.abs());
    ensure(rel > 0.05, format!("relative difference {rel}"))?;
    Ok(format!("H {h:.6} vs D {d:.6} ({:.0}% apart)", 100.0 * rel))
}

fn small_c64(rng: &mut ChaCha8Rng, r: f64) -> C64 {
    C64::new(rng.random_range(-r..r), rng.random_range(-r..r))
}

fn wigner_checks() -> Check {
    let origin = PhasePoint::from_real(&[0.0; 8]);
    let target = -16.0 / PI.powi(4);
    for (g, phi) in [(0.0, 0.0), (0.11, 0.0), (0.5, 1.3), (1.2, -2.0), (2.5, PI)] {
        let w = wigner_closed_form(&origin, &lib(AmplifierParams::new(g, phi))?);
        ensure((w - target).abs() < 1e-12, format!("W(0) = {w} at g={g}"))?;
    }
    let p = lib(AmplifierParams::universal(0.11))?;
    let state = lib(wigner_reference_state(&p, 12))?;
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let (mut chi_err, mut w_err): (f64, f64) = (0.0, 0.0);
    for _ in 0..10 {
        let pt = ChiPoint::new(small_c64(&mut rng, 0.4), small_c64(&mut rng, 0.4), small_c64(&mut rng, 0.4), small_c64(&mut rng, 0.4));
        let oracle = characteristic_oracle(&state, &pt).value;
        chi_err = chi_err.max((oracle - characteristic_closed_form(&pt, &p)).norm());
        let x = PhasePoint::new(small_c64(&mut rng, 0.3), small_c64(&mut rng, 0.3), small_c64(&mut rng, 0.3), small_c64(&mut rng, 0.3));
        let parity = common::displaced_parity_wigner(&state, &x, 12);
        w_err = w_err.max((parity - wigner_closed_form(&x, &p)).abs());
    }
    ensure(chi_err < 2e-3, format!("chi error {chi_err:e}"))?;
    ensure(w_err < 2e-3, format!("W error {w_err:e}"))?;
    Ok(format!("W(0) exact; chi error {chi_err:.1e}; W vs displaced parity {w_err:.1e}"))
}

fn entropy_symmetry() -> Check {
    let p = lib(AmplifierParams::universal(0.11))?;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    let mut states = vec![lib(spdc_output(&p, 14))?];
    for _ in 0..20 {
        states.push(lib(evolve_qubit(&random_qubit(&mut rng), &p, 15))?);
    }
    for s in &states {
        let s1 = lib(von_neumann_entropy(&s.partial_trace(SpatialMode::K1)))?;
        let s2 = lib(von_neumann_entropy(&s.partial_trace(SpatialMode::K2)))?;
        worst = worst.max((s1 - s2).abs());
        lib(entanglement_entropy(s))?;
    }
    ensure(worst < 1e-9, format!("entropy gap {worst:e}"))?;
    Ok(format!("max |S1 - S2| = {worst:.1e}"))
}

fn monte_carlo() -> Check {
    let cfg = ExperimentConfig::new(PolarizationQubit::h(), lib(AmplifierParams::universal(0.11))?, 1_000_000, 2024);
    let ideal = DetectorModel::ideal();
    let real = DetectorModel::uniform(0.55);
    let c1 = lib(simulate_cloning_run(&cfg, &ideal))?;
    let u1 = lib(simulate_unot_run(&cfg, &ideal))?;
    ensure((c1.ratio - 2.0).abs() < 0.05, format!("R = {}", c1.ratio))?;
    ensure((u1.ratio - 2.0).abs() < 0.05, format!("R* = {}", u1.ratio))?;
    ensure((c1.fidelity - 5.0 / 6.0).abs() < 0.01, format!("F = {}", c1.fidelity))?;
    ensure((u1.fidelity - 2.0 / 3.0).abs() < 0.01, format!("F* = {}", u1.fidelity))?;
    let c2 = lib(simulate_cloning_run(&cfg, &real))?;
    let u2 = lib(simulate_unot_run(&cfg, &real))?;
    for (m, a, b) in [(Measurement::Clone, c1, c2), (Measurement::Unot, u1, u2)] {
        let se = a.ratio_se.hypot(b.ratio_se);
        ensure((a.ratio - b.ratio).abs() < 3.0 * se, format!("{m:?}: {} vs {} (se {se})", a.ratio, b.ratio))?;
        let shift = (common::expected_ratio(m, 0.11, 1.0, &ideal) - common::expected_ratio(m, 0.11, 1.0, &real)).abs();
        ensure(shift < b.ratio_se, format!("{m:?}: expectation shift {shift}"))?;
    }
    Ok(format!(
        "R = {:.3}+-{:.3}, R* = {:.3}+-{:.3}; qe 0.55: R = {:.3}+-{:.3}, R* = {:.3}+-{:.3}",
        c1.ratio, c1.ratio_se, u1.ratio, u1.ratio_se, c2.ratio, c2.ratio_se, u2.ratio, u2.ratio_se
    ))
}

fn coherent_universality() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst: f64 = 0.0;
    for g in [0.11, 0.8, 2.0] {
        let p = lib(AmplifierParams::universal(g))?;
        let reference = coherent_gain(C64::new(2.0, 0.0), C64::new(0.0, 0.0), &p);
        let base = reference[2] + reference[3];
        for _ in 0..20 {
            let q = random_qubit(&mut rng);
            let n = coherent_gain(q.alpha * 2.0, q.beta * 2.0, &p);
            worst = worst.max(((n[2] + n[3]) - base).abs() / base);
        }
    }
    ensure(worst < 1e-12, format!("relative variation {worst:e}"))?;
    Ok(format!("max relative k2 variation {worst:.1e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Check, Duration); 12] = [
        ("1 cloning fidelity 5/6", cloning_fidelity, Duration::from_secs(1)),
        ("2 U-NOT fidelity 2/3", unot_fidelity, Duration::from_secs(1)),
        ("3 ratio formulas", ratio_formulas, Duration::from_secs(1)),
        ("4 series vs partial trace", series_vs_trace, Duration::from_secs(30)),
        ("5 series vs matrix exponential", series_vs_exponential, Duration::from_secs(120)),
        ("6 N->M cloner structure", nm_structure, Duration::from_secs(10)),
        ("7 universality dichotomy", universality, Duration::from_secs(60)),
        ("8 collinear amplifier not universal", degenerate, Duration::from_secs(60)),
        ("9 Wigner function", wigner_checks, Duration::from_secs(120)),
        ("10 entropy symmetry", entropy_symmetry, Duration::from_secs(60)),
        ("11 Monte-Carlo coincidences", monte_carlo, Duration::from_secs(120)),
        ("12 coherent injection", coherent_universality, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(msg) if elapsed > limit => Err(format!("{msg}; took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match result {
            Ok(msg) => println!("PASS  {name:<40} {msg} [{elapsed:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {name:<40} {msg} [{elapsed:.2?}]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
