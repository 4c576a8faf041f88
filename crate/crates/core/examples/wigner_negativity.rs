//! Wigner function of the amplified qubit: origin value, a negativity scan
//! and a spot check against the characteristic-function oracle.
use num_complex::Complex64 as C64;
use qiopa::wigner::{
    characteristic_closed_form, characteristic_oracle, negativity_scan, wigner_closed_form, wigner_reference_state,
    ChiPoint, GridSpec, PhasePoint, PlaneSpec,
};
use qiopa::AmplifierParams;

fn main() -> qiopa::Result<()> {
    let params = AmplifierParams::universal(0.11)?;
    let origin = PhasePoint::from_real(&[0.0; 8]);
    println!("W(0) = {:.12}  (-16/pi^4 = {:.12})", wigner_closed_form(&origin, &params), -16.0 / std::f64::consts::PI.powi(4));

    let plane = PlaneSpec { axis1: "alpha1.re".parse()?, axis2: "beta1.re".parse()?, base: origin };
    let grid = GridSpec::new(-2.0, 2.0, 121)?;
    let scan = negativity_scan(&plane, &grid, &grid, &params)?;
    println!("min W = {:.6}  negative fraction = {:.4}", scan.min_w, scan.negative_fraction);

    let state = wigner_reference_state(&params, 14)?;
    let pt = ChiPoint::new(C64::new(0.2, -0.1), C64::new(0.05, 0.3), C64::new(-0.15, 0.0), C64::new(0.1, 0.1));
    let oracle = characteristic_oracle(&state, &pt);
    println!("chi closed = {:.9}  oracle = {:.9}", characteristic_closed_form(&pt, &params), oracle.value.re);
    Ok(())
}
