//! SU(2) polarization rotations and the universality of the amplifier.

use std::io::Write;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{postselected_cloning_fidelity, FidelityReport};
use crate::dynamics::{degenerate_evolve, degenerate_evolve_state, evolve_qubit};
use crate::error::{Error, Result};
use crate::fock::{Mode, OccupationKet, Polarization, SpatialMode, StateVector};
use crate::params::{AmplifierParams, PolarizationQubit};
use crate::table::sig12;

/// Largest truncated basis for which dense Hamiltonians are built.
pub const MAX_DENSE_KETS: usize = 4000;

/// Unit-determinant matrix [[ϑ, ζ], [−ζ*, ϑ*]] with |ϑ|² + |ζ|² = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Su2Element {
    pub theta: C64,
    pub zeta: C64,
}

impl Su2Element {
    pub fn new(theta: C64, zeta: C64) -> Result<Self> {
        let n = theta.norm_sqr() + zeta.norm_sqr();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArguments(format!(
                "|theta|^2 + |zeta|^2 must be 1, got {n}"
            )));
        }
        Ok(Self { theta, zeta })
    }

    pub fn identity() -> Self {
        Self {
            theta: C64::new(1.0, 0.0),
            zeta: C64::new(0.0, 0.0),
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            theta: self.theta.conj(),
            zeta: -self.zeta,
        }
    }

    pub fn matrix(&self) -> [[C64; 2]; 2] {
        [
            [self.theta, self.zeta],
            [-self.zeta.conj(), self.theta.conj()],
        ]
    }

    /// Haar-random element: a uniformly distributed point on the 3-sphere.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let x: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        Self {
            theta: C64::new(x[0] / n, x[1] / n),
            zeta: C64::new(x[2] / n, x[3] / n),
        }
    }
}

/// Matrix action of `r` on the amplitudes (α̃, β̃).
pub fn rotate_qubit(qubit: &PolarizationQubit, r: &Su2Element) -> PolarizationQubit {
    let m = r.matrix();
    PolarizationQubit {
        alpha: m[0][0] * qubit.alpha + m[0][1] * qubit.beta,
        beta: m[1][0] * qubit.alpha + m[1][1] * qubit.beta,
    }
}

/// Applies `r` to the polarization of both spatial modes of a state.
pub fn rotate_state(state: &StateVector, r: &Su2Element) -> StateVector {
    let m = r.matrix();
    state
        .rotate_polarization(SpatialMode::K1, &m)
        .rotate_polarization(SpatialMode::K2, &m)
}

fn full_basis(cutoff: u32) -> Result<Vec<OccupationKet>> {
    let mut kets = Vec::new();
    for a in 0..=cutoff {
        for b in 0..=cutoff - a {
            for c in 0..=cutoff - a - b {
                for d in 0..=cutoff - a - b - c {
                    kets.push(OccupationKet::new(a, b, c, d));
                }
            }
        }
        if kets.len() > MAX_DENSE_KETS {
            break;
        }
    }
    if kets.len() > MAX_DENSE_KETS {
        return Err(Error::ResourceLimit(format!(
            "cutoff {cutoff} needs more than {MAX_DENSE_KETS} basis kets"
        )));
    }
    kets.sort();
    Ok(kets)
}

fn annihilators(kets: &[OccupationKet]) -> [DMatrix<C64>; 4] {
    let dim = kets.len();
    Mode::ALL.map(|mode| {
        let mut m = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
        for (col, k) in kets.iter().enumerate() {
            let n = k.get(mode);
            if n > 0 {
                let row = kets.binary_search(&k.with(mode, n - 1)).expect("lower ket in basis");
                m[(row, col)] = C64::new((n as f64).sqrt(), 0.0);
            }
        }
        m
    })
}

/// i[Â − e^{iΦ}Â′] + h.c. for the given pair operators.
fn interaction(a: &DMatrix<C64>, a_prime: &DMatrix<C64>, phi: f64) -> DMatrix<C64> {
    let x = (a - a_prime * C64::from_polar(1.0, phi)) * C64::i();
    &x + x.adjoint()
}

fn largest_magnitude_eigenvalue(h: &DMatrix<C64>) -> f64 {
    SymmetricEigen::new(h.clone())
        .eigenvalues
        .iter()
        .fold(0.0, |m, v| m.max(v.abs()))
}

/// Operator-norm invariance residual and the norm of the unrotated
/// interaction, on the basis of at most `cutoff` total photons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceResidual {
    pub residual: f64,
    pub hamiltonian_norm: f64,
}

impl InvarianceResidual {
    pub fn relative(&self) -> f64 {
        self.residual / self.hamiltonian_norm
    }
}

/// ‖Ĥ_R − Ĥ‖, with Ĥ_R built from mode operators rotated by `r` on both
/// spatial modes: (â_R1, â′_R1) = R(â₁ₕ, â₁ᵥ) and (â′_R2, â_R2) = R(â₂ₕ, â₂ᵥ).
pub fn hamiltonian_invariance(r: &Su2Element, phi: f64, cutoff: u32) -> Result<InvarianceResidual> {
    let kets = full_basis(cutoff)?;
    let [a1h, a1v, a2h, a2v] = annihilators(&kets);
    let m = r.matrix();
    let a_r1 = &a1h * m[0][0] + &a1v * m[0][1];
    let ap_r1 = &a1h * m[1][0] + &a1v * m[1][1];
    let ap_r2 = &a2h * m[0][0] + &a2v * m[0][1];
    let a_r2 = &a2h * m[1][0] + &a2v * m[1][1];
    let h = interaction(&(&a1h * &a2v), &(&a1v * &a2h), phi);
    let h_r = interaction(&(a_r1 * a_r2), &(ap_r1 * ap_r2), phi);
    Ok(InvarianceResidual {
        residual: largest_magnitude_eigenvalue(&(h_r - &h)),
        hamiltonian_norm: largest_magnitude_eigenvalue(&h),
    })
}

/// Largest singular value of Ĥ_R − Ĥ on the truncated basis.
pub fn hamiltonian_invariance_residual(r: &Su2Element, phi: f64, cutoff: u32) -> Result<f64> {
    Ok(hamiltonian_invariance(r, phi, cutoff)?.residual)
}

/// H, (H+V)/√2 and (H+iV)/√2: the three injected states always scanned first.
pub fn reference_qubits() -> [PolarizationQubit; 3] {
    [
        PolarizationQubit::h(),
        PolarizationQubit::d(),
        PolarizationQubit::l(),
    ]
}

/// Haar-distributed qubit from two uniform angles.
pub fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> PolarizationQubit {
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    PolarizationQubit::from_bloch((1.0 - 2.0 * u).acos(), 2.0 * std::f64::consts::PI * v)
}

fn scan_qubits(samples: usize, seed: u64, head: &[PolarizationQubit]) -> Vec<PolarizationQubit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    head.iter()
        .copied()
        .chain((0..samples).map(|_| random_qubit(&mut rng)))
        .collect()
}

/// Postselected fidelities for one qubit; `None` marks an empty sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochSample {
    pub qubit: PolarizationQubit,
    pub report: Option<FidelityReport>,
}

/// Fidelities over the three reference qubits followed by `samples` seeded
/// Haar-random ones.
pub fn bloch_fidelity_scan(params: &AmplifierParams, samples: usize, seed: u64) -> Result<Vec<BlochSample>> {
    let qubits = scan_qubits(samples, seed, &reference_qubits());
    qubits
        .par_iter()
        .map(|q| {
            let state = evolve_qubit(q, params, 3)?;
            match postselected_cloning_fidelity(&state, q) {
                Ok(report) => Ok(BlochSample {
                    qubit: *q,
                    report: Some(report),
                }),
                Err(Error::EmptySector { .. }) => Ok(BlochSample {
                    qubit: *q,
                    report: None,
                }),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// max − min of F over the non-empty samples.
pub fn fidelity_spread(samples: &[BlochSample]) -> Option<f64> {
    let fs: Vec<f64> = samples.iter().filter_map(|s| s.report.map(|r| r.f)).collect();
    if fs.is_empty() {
        return None;
    }
    let max = fs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = fs.iter().copied().fold(f64::INFINITY, f64::min);
    Some(max - min)
}

pub fn write_bloch_csv<W: Write>(samples: &[BlochSample], mut out: W) -> std::io::Result<()> {
    writeln!(out, "qubit_alpha_re,qubit_alpha_im,qubit_beta_re,qubit_beta_im,F,F_star")?;
    for s in samples {
        let (f, fs) = match s.report {
            Some(r) => (sig12(r.f), sig12(r.f_star)),
            None => ("empty".to_string(), "empty".to_string()),
        };
        writeln!(
            out,
            "{},{},{},{},{f},{fs}",
            sig12(s.qubit.alpha.re),
            sig12(s.qubit.alpha.im),
            sig12(s.qubit.beta.re),
            sig12(s.qubit.beta.im)
        )?;
    }
    Ok(())
}

/// Stimulated gain of the collinear amplifier for one qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegenerateSample {
    pub qubit: PolarizationQubit,
    pub gain_proxy: f64,
    pub leakage: f64,
}

/// ⟨n̂_ψ⟩ − 1 − ⟨n̂_ψ⟩_vac: photons added to the injected polarization beyond the
/// injected one and the spontaneous background.
pub fn degenerate_gain_proxy(
    qubit: &PolarizationQubit,
    params: &AmplifierParams,
    cutoff: u32,
) -> Result<DegenerateSample> {
    let out = degenerate_evolve(qubit, params, cutoff)?;
    let vac = degenerate_evolve_state(&StateVector::vacuum(cutoff), params, cutoff)?;
    let n = out.partial_trace(SpatialMode::K1).number_expectation(qubit, Polarization::Aligned);
    let n0 = vac.partial_trace(SpatialMode::K1).number_expectation(qubit, Polarization::Aligned);
    Ok(DegenerateSample {
        qubit: *qubit,
        gain_proxy: n - 1.0 - n0,
        leakage: out.leakage().max(vac.leakage()),
    })
}

/// Gain proxy over (1,0), (0,1), (1,1)/√2 and `samples` seeded random qubits.
pub fn degenerate_universality_scan(
    params: &AmplifierParams,
    samples: usize,
    seed: u64,
) -> Result<Vec<DegenerateSample>> {
    let head = [PolarizationQubit::h(), PolarizationQubit::v(), PolarizationQubit::d()];
    scan_qubits(samples, seed, &head)
        .par_iter()
        .map(|q| degenerate_gain_proxy(q, params, 16))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotate_qubit_examples() {
        let q = PolarizationQubit::from_bloch(0.8, 1.7);
        assert_eq!(rotate_qubit(&q, &Su2Element::identity()), q);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let r = Su2Element::new(C64::new(s, 0.0), C64::new(s, 0.0)).unwrap();
        let h = rotate_qubit(&PolarizationQubit::h(), &r);
        assert!((h.alpha - C64::new(s, 0.0)).norm() < 1e-15);
        assert!((h.beta - C64::new(-s, 0.0)).norm() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = Su2Element::random(&mut rng);
        let back = rotate_qubit(&rotate_qubit(&q, &r), &r.inverse());
        assert!((back.alpha - q.alpha).norm() < 1e-14 && (back.beta - q.beta).norm() < 1e-14);
    }

    #[test]
    fn residual_vanishes_at_zero_phase() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..5 {
            let r = Su2Element::random(&mut rng);
            assert!(hamiltonian_invariance_residual(&r, 0.0, 4).unwrap() < 1e-10);
        }
    }

    #[test]
    fn residual_identity_is_exactly_zero() {
        for &phi in &[0.0, 0.9, std::f64::consts::FRAC_PI_2] {
            assert_eq!(hamiltonian_invariance_residual(&Su2Element::identity(), phi, 4).unwrap(), 0.0);
        }
    }

    #[test]
    fn residual_large_off_zero_phase() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let r = Su2Element::new(C64::new(s, 0.0), C64::new(s, 0.0)).unwrap();
        let res = hamiltonian_invariance(&r, std::f64::consts::FRAC_PI_2, 6).unwrap();
        assert!(res.relative() > 0.1, "{}", res.relative());
        let edge = hamiltonian_invariance(&r, std::f64::consts::FRAC_PI_2, 4).unwrap();
        assert!((res.relative() / edge.relative() - 1.0).abs() < 0.1);
    }

    #[test]
    fn dense_guard() {
        assert!(matches!(
            hamiltonian_invariance_residual(&Su2Element::identity(), 0.0, 20),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn bloch_scan_is_flat() {
        let p = AmplifierParams::universal(0.11).unwrap();
        let scan = bloch_fidelity_scan(&p, 20, 7).unwrap();
        assert_eq!(scan.len(), 23);
        assert_eq!(scan[0].qubit, PolarizationQubit::h());
        assert!(fidelity_spread(&scan).unwrap() < 1e-10);
        assert!((scan[5].report.unwrap().f - 5.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn bloch_scan_marks_empty_sector() {
        let p = AmplifierParams::universal(0.0).unwrap();
        let scan = bloch_fidelity_scan(&p, 3, 1).unwrap();
        assert!(scan.iter().all(|s| s.report.is_none()));
        let mut buf = Vec::new();
        write_bloch_csv(&scan, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().lines().nth(1).unwrap().ends_with("empty,empty"));
    }

    #[test]
    fn degenerate_gain_depends_on_qubit() {
        let p = AmplifierParams::universal(0.11).unwrap();
        let s2 = p.sinh().powi(2);
        let scan = degenerate_universality_scan(&p, 4, 3).unwrap();
        assert!((scan[0].gain_proxy - scan[1].gain_proxy).abs() < 1e-12);
        assert!((scan[0].gain_proxy - s2).abs() < 1e-12);
        assert!((scan[2].gain_proxy - 2.0 * s2).abs() < 1e-12);
        let zero = degenerate_universality_scan(&AmplifierParams::universal(0.0).unwrap(), 2, 3).unwrap();
        assert!(zero.iter().all(|s| s.gain_proxy.abs() < 1e-15));
    }
}
