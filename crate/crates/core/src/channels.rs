//! Cloning (k1) and anticloning (k2) channels: reduced states and fidelities.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, Polarization, SpatialMode, StateVector};
use crate::params::{AmplifierParams, PolarizationQubit};

/// Below this postselected weight the coincidence sector is treated as empty.
pub const MIN_SECTOR_WEIGHT: f64 = 1e-14;

/// Fidelities measured on the coincidence sector (2 photons on k1, 1 on k2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "F_star")]
    pub f_star: f64,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "R_star")]
    pub r_star: f64,
    pub leakage: f64,
    pub sector_weight: f64,
}

type Entries = BTreeMap<((u32, u32), (u32, u32)), C64>;

fn to_density(entries: Entries) -> Result<DensityMatrix> {
    let mut basis: Vec<(u32, u32)> = entries.keys().flat_map(|(a, b)| [*a, *b]).collect();
    basis.sort_by_key(|&(h, v)| (h + v, h, v));
    basis.dedup();
    let pos = |p: (u32, u32)| basis.iter().position(|&q| q == p).expect("label in basis");
    let mut m = DMatrix::from_element(basis.len(), basis.len(), C64::new(0.0, 0.0));
    for ((a, b), z) in &entries {
        m[(pos(*a), pos(*b))] += *z;
    }
    let trace: f64 = (0..basis.len()).map(|i| m[(i, i)].re).sum();
    DensityMatrix::new(basis, m, (1.0 - trace).max(0.0))
}

fn add_block(
    entries: &mut Entries,
    labels: [Option<(u32, u32)>; 2],
    block: [[C64; 2]; 2],
    weight: f64,
) {
    for r in 0..2 {
        for c in 0..2 {
            if let (Some(a), Some(b)) = (labels[r], labels[c]) {
                let z = block[r][c] * weight;
                if z != C64::new(0.0, 0.0) {
                    *entries.entry((a, b)).or_insert(C64::new(0.0, 0.0)) += z;
                }
            }
        }
    }
}

fn pair(h: i64, v: i64) -> Option<(u32, u32)> {
    (h >= 0 && v >= 0).then_some((h as u32, v as u32))
}

/// Cloning-channel reduced state as a sum of 2×2 blocks over pair orders
/// n ≤ `n_max`, on the k1 pairs {|i, n−i+1⟩, |i+1, n−i⟩}.
pub fn rho1_series(
    qubit: &PolarizationQubit,
    params: &AmplifierParams,
    n_max: u32,
) -> Result<DensityMatrix> {
    let (a, b) = (qubit.alpha, qubit.beta);
    let pre = params.cosh().powi(-6);
    let gamma2 = params.gamma().powi(2);
    let mut entries = Entries::new();
    for n in 0..=n_max as i64 {
        let weight = pre * gamma2.powi(n as i32);
        for i in 0..=n {
            let root = (((i + 1) * (n - i + 1)) as f64).sqrt();
            let block = [
                [C64::new(b.norm_sqr() * (n - i + 1) as f64, 0.0), a.conj() * b * root],
                [a * b.conj() * root, C64::new(a.norm_sqr() * (i + 1) as f64, 0.0)],
            ];
            add_block(&mut entries, [pair(i, n - i + 1), pair(i + 1, n - i)], block, weight);
        }
    }
    to_density(entries)
}

/// Anticloning-channel reduced state on the k2 pairs
/// {|n−i, i⟩, |n−i+1, i−1⟩}, i = 0..=n+1. The intrinsic phase enters only
/// through the off-diagonal factors ε*, ε.
pub fn rho2_series(
    qubit: &PolarizationQubit,
    params: &AmplifierParams,
    n_max: u32,
) -> Result<DensityMatrix> {
    let (a, b) = (qubit.alpha, qubit.beta);
    let eps = params.epsilon();
    let pre = params.cosh().powi(-6);
    let gamma2 = params.gamma().powi(2);
    let mut entries = Entries::new();
    for n in 0..=n_max as i64 {
        let weight = pre * gamma2.powi(n as i32);
        for i in 0..=n + 1 {
            let root = (((n - i + 1) * i) as f64).sqrt();
            let block = [
                [
                    C64::new(b.norm_sqr() * (n - i + 1) as f64, 0.0),
                    eps.conj() * a.conj() * b * root,
                ],
                [eps * a * b.conj() * root, C64::new(a.norm_sqr() * i as f64, 0.0)],
            ];
            add_block(&mut entries, [pair(n - i, i), pair(n - i + 1, i - 1)], block, weight);
        }
    }
    to_density(entries)
}

/// Rotates both spatial modes so the qubit becomes H and its antipode V.
fn to_qubit_frame(state: &StateVector, qubit: &PolarizationQubit) -> StateVector {
    let m = qubit.frame();
    let inv = [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]];
    state
        .rotate_polarization(SpatialMode::K1, &inv)
        .rotate_polarization(SpatialMode::K2, &inv)
}

fn ratio_of(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        f64::INFINITY
    }
}

fn postselected_report(state: &StateVector, qubit: &PolarizationQubit) -> Result<FidelityReport> {
    let sector = state.sector(2, 1);
    let weight = sector.norm_sqr();
    if !(weight >= MIN_SECTOR_WEIGHT) {
        return Err(Error::EmptySector { weight });
    }
    let normalized = sector.scaled(C64::new(weight.sqrt().recip(), 0.0));
    let rho1 = normalized.partial_trace(SpatialMode::K1);
    let rho2 = normalized.partial_trace(SpatialMode::K2);
    let f = rho1.number_expectation(qubit, Polarization::Aligned) / rho1.total_number();
    let f_star = rho2.number_expectation(qubit, Polarization::Orthogonal) / rho2.total_number();

    let aligned = to_qubit_frame(&normalized, qubit);
    let mut k1 = [0.0; 3];
    let mut k2 = [0.0; 2];
    for (ket, amp) in aligned.iter() {
        let p = amp.norm_sqr();
        match ket.spatial(SpatialMode::K1) {
            (2, 0) => k1[0] += p,
            (1, 1) => k1[1] += p,
            _ => k1[2] += p,
        }
        match ket.spatial(SpatialMode::K2) {
            (0, 1) => k2[0] += p,
            _ => k2[1] += p,
        }
    }
    Ok(FidelityReport {
        f,
        f_star,
        r: ratio_of(k1[0], k1[1]),
        r_star: ratio_of(k2[0], k2[1]),
        leakage: state.leakage(),
        sector_weight: weight,
    })
}

/// Cloning fidelity Tr(ρ₁n̂_π)/Tr(ρ₁n̂) on the renormalized coincidence
/// sector, with R the ratio of |ΨΨ⟩ to symmetric |{Ψ,Ψ⊥}⟩ weight on k1.
pub fn postselected_cloning_fidelity(
    state: &StateVector,
    qubit: &PolarizationQubit,
) -> Result<FidelityReport> {
    postselected_report(state, qubit)
}

/// Flipping fidelity Tr(ρ₂n̂_⊥)/Tr(ρ₂n̂) on the coincidence sector, with R*
/// the ratio of Ψ⊥ to Ψ weight on k2.
pub fn postselected_unot_fidelity(
    state: &StateVector,
    qubit: &PolarizationQubit,
) -> Result<FidelityReport> {
    postselected_report(state, qubit)
}

/// Tr-ratio fidelities of the whole (unconditioned) output. These differ from
/// the coincidence-sector values at finite gain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnconditionedFidelity {
    pub cloning: f64,
    pub unot: f64,
}

pub fn unconditioned_fidelities(
    state: &StateVector,
    qubit: &PolarizationQubit,
) -> UnconditionedFidelity {
    let rho1 = state.partial_trace(SpatialMode::K1);
    let rho2 = state.partial_trace(SpatialMode::K2);
    UnconditionedFidelity {
        cloning: rho1.number_expectation(qubit, Polarization::Aligned) / rho1.total_number(),
        unot: rho2.number_expectation(qubit, Polarization::Orthogonal) / rho2.total_number(),
    }
}

fn check_ratio(r: f64) -> Result<()> {
    if !(r >= 0.0) {
        return Err(Error::InvalidArguments(format!("ratio must be non-negative, got {r}")));
    }
    Ok(())
}

/// F = (2R+1)/(2R+2).
pub fn fidelity_from_ratio(r: f64) -> Result<f64> {
    check_ratio(r)?;
    if r.is_infinite() {
        return Ok(1.0);
    }
    Ok((2.0 * r + 1.0) / (2.0 * r + 2.0))
}

/// F* = R*/(R*+1).
pub fn unot_from_ratio(r_star: f64) -> Result<f64> {
    check_ratio(r_star)?;
    if r_star.is_infinite() {
        return Ok(1.0);
    }
    Ok(r_star / (r_star + 1.0))
}

pub fn fidelity_from_ratio_exact(r: Ratio<u64>) -> Ratio<u64> {
    (r * 2 + 1) / (r * 2 + 2)
}

pub fn unot_from_ratio_exact(r_star: Ratio<u64>) -> Ratio<u64> {
    r_star / (r_star + 1)
}

/// Optimal N→M universal cloning fidelity (NM+M+N)/(MN+2M).
pub fn optimal_cloning_fidelity(n: u64, m: u64) -> Result<Ratio<u64>> {
    if n < 1 || m < n {
        return Err(Error::InvalidArguments(format!(
            "need 1 <= N <= M, got N = {n}, M = {m}"
        )));
    }
    Ok(Ratio::new(n * m + m + n, m * n + 2 * m))
}

/// Optimal state-estimation fidelity (N+1)/(N+2) from N copies.
pub fn estimation_fidelity(n: u64) -> Result<Ratio<u64>> {
    if n < 1 {
        return Err(Error::InvalidArguments("need N >= 1".into()));
    }
    Ok(Ratio::new(n + 1, n + 2))
}

/// Entropy of entanglement S(ρ₁) of a pure k1|k2 state, checked against S(ρ₂).
pub fn entanglement_entropy(state: &StateVector) -> Result<f64> {
    if state.leakage() >= 1e-6 {
        return Err(Error::InvalidArguments(format!(
            "state is not pure within tolerance (leakage {:e})",
            state.leakage()
        )));
    }
    let s1 = state.partial_trace(SpatialMode::K1).von_neumann_entropy()?;
    let s2 = state.partial_trace(SpatialMode::K2).von_neumann_entropy()?;
    if (s1 - s2).abs() >= 1e-9 {
        return Err(Error::InternalConsistency(format!(
            "reduced entropies differ: {s1} vs {s2}"
        )));
    }
    Ok(s1)
}
