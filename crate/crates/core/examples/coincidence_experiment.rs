//! Monte-Carlo coincidence experiment: one cloning run, one flipping run and
//! a short mirror scan with realistic detectors.
use qiopa::detection::{simulate_cloning_run, simulate_unot_run, z_scan, DetectorModel, ExperimentConfig, Measurement};
use qiopa::{AmplifierParams, PolarizationQubit};

fn main() -> qiopa::Result<()> {
    let cfg = ExperimentConfig::new(PolarizationQubit::l(), AmplifierParams::universal(0.11)?, 1_000_000, 17);
    let det = DetectorModel::uniform(0.55);

    let c = simulate_cloning_run(&cfg, &det)?;
    println!("clone: {} / {}  R = {:.3} +- {:.3}  F = {:.4} +- {:.4}", c.signal, c.noise, c.ratio, c.ratio_se, c.fidelity, c.fidelity_se);
    let u = simulate_unot_run(&cfg, &det)?;
    println!("U-NOT: {} / {}  R* = {:.3} +- {:.3}  F* = {:.4} +- {:.4}", u.signal, u.noise, u.ratio, u.ratio_se, u.fidelity, u.fidelity_se);

    let mut short = cfg;
    short.trials = 100_000;
    let zs: Vec<f64> = (0..13).map(|i| -3.0 + 0.5 * i as f64).collect();
    for row in z_scan(&short, &det, Measurement::Unot, &zs)? {
        println!("z = {:+.1}  signal {:6}  noise {:6}", row.z, row.signal, row.noise);
    }
    Ok(())
}
