//! SU(2) covariance of the amplifier: Hamiltonian residuals, Bloch-sphere
//! fidelity spread, and the collinear amplifier for contrast.
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qiopa::universality::{
    bloch_fidelity_scan, degenerate_universality_scan, fidelity_spread, hamiltonian_invariance, Su2Element,
};
use qiopa::AmplifierParams;

fn main() -> qiopa::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for phi in [0.0, std::f64::consts::FRAC_PI_2] {
        let worst = (0..5)
            .map(|_| hamiltonian_invariance(&Su2Element::random(&mut rng), phi, 4).map(|r| r.relative()))
            .collect::<qiopa::Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        println!("phi = {phi:.4}: worst relative residual {worst:.3e}");
    }

    let params = AmplifierParams::universal(0.11)?;
    let scan = bloch_fidelity_scan(&params, 50, 9)?;
    println!("Bloch scan: {} qubits, F spread {:.3e}", scan.len(), fidelity_spread(&scan).unwrap_or(f64::NAN));

    for s in degenerate_universality_scan(&params, 2, 9)? {
        println!("collinear gain for {}: {:.6}", s.qubit, s.gain_proxy);
    }
    Ok(())
}
