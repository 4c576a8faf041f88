//! Amplify a diagonal qubit and look at the largest output amplitudes, the
//! truncation leakage and the entanglement between k1 and k2.
use qiopa::channels::entanglement_entropy;
use qiopa::dynamics::{evolve_qubit, spdc_output};
use qiopa::{AmplifierParams, PolarizationQubit};

fn main() -> qiopa::Result<()> {
    let params = AmplifierParams::universal(0.3)?;
    let state = evolve_qubit(&PolarizationQubit::d(), &params, 14)?;
    println!("kets: {}  leakage: {:.3e}", state.len(), state.leakage());

    let mut amps: Vec<_> = state.iter().collect();
    amps.sort_by(|a, b| b.1.norm().total_cmp(&a.1.norm()));
    for (ket, a) in amps.iter().take(8) {
        println!("{ket}  {:+.6} {:+.6}i", a.re, a.im);
    }

    let spdc = spdc_output(&params, 30)?;
    println!("entropy (injected) = {:.6}", entanglement_entropy(&evolve_qubit(&PolarizationQubit::d(), &params, 30)?)?);
    println!("entropy (SPDC)     = {:.6}", entanglement_entropy(&spdc)?);
    Ok(())
}
