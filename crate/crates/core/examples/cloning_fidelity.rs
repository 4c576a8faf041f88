//! Coincidence-sector fidelities for a few qubits, compared with the ratio
//! formulas and the optimal-cloner bound.
use qiopa::channels::{
    fidelity_from_ratio, optimal_cloning_fidelity, postselected_cloning_fidelity, postselected_unot_fidelity,
    unconditioned_fidelities, unot_from_ratio,
};
use qiopa::dynamics::{evolve_qubit, first_order_output};
use qiopa::{AmplifierParams, PolarizationQubit};

fn main() -> qiopa::Result<()> {
    let params = AmplifierParams::universal(0.11)?;
    for (name, q) in [("H", PolarizationQubit::h()), ("D", PolarizationQubit::d()), ("L", PolarizationQubit::l())] {
        let first = first_order_output(&q, &params)?;
        let c = postselected_cloning_fidelity(&first, &q)?;
        let u = postselected_unot_fidelity(&first, &q)?;
        println!("{name}: F = {:.12}  F* = {:.12}  R = {:.6}  R* = {:.6}", c.f, u.f_star, c.r, u.r_star);

        let full = evolve_qubit(&q, &params, 11)?;
        let un = unconditioned_fidelities(&full, &q);
        println!("   unconditioned: cloning {:.6}  flipping {:.6}", un.cloning, un.unot);
    }
    println!("F(R=2) = {}  F*(R*=2) = {}", fidelity_from_ratio(2.0)?, unot_from_ratio(2.0)?);
    println!("optimal 1->2 = {}", optimal_cloning_fidelity(1, 2)?);
    Ok(())
}
