//! Coherent light injected on k1: the k2 output intensity does not depend on
//! the input polarization.
use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64 as C64;
use qiopa::dynamics::coherent_gain;
use qiopa::AmplifierParams;

fn main() -> qiopa::Result<()> {
    let params = AmplifierParams::universal(1.2)?;
    let amplitude = 3.0;
    for (name, theta, phi) in [("H", 0.0f64, 0.0f64), ("V", PI, 0.0), ("D", FRAC_PI_2, 0.0), ("L", FRAC_PI_2, FRAC_PI_2), ("x", 0.7, 2.1)] {
        let ah = C64::new(amplitude * (theta / 2.0).cos(), 0.0);
        let av = C64::from_polar(amplitude * (theta / 2.0).sin(), phi);
        let n = coherent_gain(ah, av, &params);
        println!("{name}: k1 = {:.6}  k2 = {:.6}", n[0] + n[1], n[2] + n[3]);
    }
    Ok(())
}
