//! Amplifier output states.
//!
//! The two non-degenerate amplifiers act as U = U_A U_A′ with
//! U_A = exp(−g(Â† − Â)), Â = â₁ₕâ₂ᵥ and U_A′ = exp(g(e^{−iΦ}Â′† − e^{iΦ}Â′)),
//! Â′ = â₁ᵥâ₂ₕ. The series constructors below are closed forms of that
//! evolution; [`evolution_oracle`] exponentiates the generator directly and is
//! used to check them.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use num_rational::Ratio;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{Mode, OccupationKet, StateVector};
use crate::params::{AmplifierParams, PolarizationQubit};

/// Largest total number of kets the dense oracle will exponentiate.
pub const ORACLE_MAX_KETS: usize = 4000;

/// Extra photons carried by the oracle beyond the requested cutoff so that
/// truncation of the exponential does not reach the retained kets.
pub const ORACLE_PADDING: u32 = 24;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn check_cutoff(cutoff: u32) -> Result<()> {
    if cutoff < 2 {
        return Err(Error::InvalidArguments(format!(
            "cutoff must be at least 2, got {cutoff}"
        )));
    }
    Ok(())
}

/// The two amplified macrostates |Ψ^α⟩ and |Ψ^β⟩ reached from |1,0,0,0⟩ and
/// |0,1,0,0⟩, truncated at `cutoff` total photons.
pub fn macrostates(params: &AmplifierParams, cutoff: u32) -> Result<(StateVector, StateVector)> {
    check_cutoff(cutoff)?;
    let pre = params.cosh().powi(-3);
    let gamma = params.gamma();
    let eps = params.epsilon();
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    let max_order = (cutoff - 1) / 2;
    for n in 0..=max_order {
        let weight = pre * (-gamma).powi(n as i32);
        for j in 0..=n {
            let i = n - j;
            let base = eps.powu(j) * weight;
            alpha.push((
                OccupationKet::new(i + 1, j, j, i),
                base * ((i + 1) as f64).sqrt(),
            ));
            beta.push((
                OccupationKet::new(i, j + 1, j, i),
                base * ((j + 1) as f64).sqrt(),
            ));
        }
    }
    Ok((
        StateVector::from_amplitudes(cutoff, alpha)?.with_leakage_from_norm(),
        StateVector::from_amplitudes(cutoff, beta)?.with_leakage_from_norm(),
    ))
}

/// Output for a single-photon qubit injected on k1: α̃|Ψ^α⟩ + β̃|Ψ^β⟩.
pub fn evolve_qubit(
    qubit: &PolarizationQubit,
    params: &AmplifierParams,
    cutoff: u32,
) -> Result<StateVector> {
    let (a, b) = macrostates(params, cutoff)?;
    Ok(a.scaled(qubit.alpha)
        .add_scaled(qubit.beta, &b)
        .with_leakage_from_norm())
}

/// Vacuum-injected output: the product of the two two-mode squeezed vacua.
pub fn spdc_output(params: &AmplifierParams, cutoff: u32) -> Result<StateVector> {
    let pre = params.cosh().powi(-2);
    let gamma = params.gamma();
    let eps = params.epsilon();
    let mut terms = Vec::new();
    for n in 0..=cutoff / 2 {
        for j in 0..=n {
            let i = n - j;
            terms.push((
                OccupationKet::new(i, j, j, i),
                eps.powu(j) * pre * (-gamma).powi(n as i32),
            ));
        }
    }
    Ok(StateVector::from_amplitudes(cutoff, terms)?.with_leakage_from_norm())
}

/// First-order output |1,0,0,0⟩ − Γ(√2|2,0,0,1⟩ − |1,1,1,0⟩) for qubit H,
/// carried to other qubits by rotating both spatial modes. Not normalized.
pub fn first_order_output(
    qubit: &PolarizationQubit,
    params: &AmplifierParams,
) -> Result<StateVector> {
    if params.phase != 0.0 {
        return Err(Error::Unsupported(
            "the first-order form is only covariant at zero intrinsic phase".into(),
        ));
    }
    let g = params.gamma();
    let h = StateVector::from_amplitudes(
        3,
        [
            (OccupationKet::new(1, 0, 0, 0), c(1.0)),
            (OccupationKet::new(2, 0, 0, 1), c(-g * 2f64.sqrt())),
            (OccupationKet::new(1, 1, 1, 0), c(g)),
        ],
    )?;
    let frame = qubit.frame();
    Ok(h.rotate_polarization(crate::fock::SpatialMode::K1, &frame)
        .rotate_polarization(crate::fock::SpatialMode::K2, &frame))
}

/// Exact squared coefficients P_N^M(m)² = C(M−m, N)/C(M+1, N+1), m = 0..=M−N.
pub fn nm_clone_weights(n: u32, m: u32) -> Result<Vec<Ratio<u64>>> {
    if n < 1 || m < n {
        return Err(Error::InvalidArguments(format!(
            "need 1 <= N <= M, got N = {n}, M = {m}"
        )));
    }
    let denom = binomial_u64(m as u64 + 1, n as u64 + 1);
    Ok((0..=m - n)
        .map(|k| Ratio::new(binomial_u64((m - k) as u64, n as u64), denom))
        .collect())
}

fn binomial_u64(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Optimal N→M cloning state Σ_m (−1)^m P_N^M(m) |M−m, m, m, M−N−m⟩.
pub fn nm_clone_state(n: u32, m: u32) -> Result<StateVector> {
    let weights = nm_clone_weights(n, m)?;
    let terms = weights.iter().enumerate().map(|(k, w)| {
        let k = k as u32;
        let p = (*w.numer() as f64 / *w.denom() as f64).sqrt();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        (OccupationKet::new(m - k, k, k, m - n - k), c(sign * p))
    });
    StateVector::from_amplitudes(2 * m - n, terms)
}

/// Bogoliubov matrices of the A pair, [[C, S], [S, C]], and of the A′ pair,
/// [[C, S̃], [S̃*, C]] with S̃ = εS.
pub fn bogoliubov_coefficients(params: &AmplifierParams) -> ([[C64; 2]; 2], [[C64; 2]; 2]) {
    let (ch, sh) = (c(params.cosh()), c(params.sinh()));
    let st = params.sinh_tilde();
    ([[ch, sh], [sh, ch]], [[ch, st], [st.conj(), ch]])
}

/// Mean photon numbers on (1h, 1v, 2h, 2v) after amplifying a coherent field
/// (α_h, α_v) on k1 with vacuum on k2.
///
/// Each output annihilator is u·â + v·b̂† for its Bogoliubov pair, so for a
/// coherent input ⟨n̂⟩ = |u α + v β*|² + |v|² with β the partner's amplitude.
pub fn coherent_gain(alpha_h: C64, alpha_v: C64, params: &AmplifierParams) -> [f64; 4] {
    let (a, ap) = bogoliubov_coefficients(params);
    let out = |u: C64, v: C64, own: C64, partner: C64| (u * own + v * partner.conj()).norm_sqr() + v.norm_sqr();
    let zero = C64::new(0.0, 0.0);
    [
        out(a[0][0], a[0][1], alpha_h, zero),
        out(ap[0][0], ap[0][1], alpha_v, zero),
        out(ap[1][1], ap[1][0], zero, alpha_v),
        out(a[1][1], a[1][0], zero, alpha_h),
    ]
}

/// A bilinear pair term of a generator G = Σ (κ Â_p† − κ* Â_p), Â_p = â_{m1} â_{m2}.
#[derive(Debug, Clone, Copy)]
struct PairTerm {
    m1: Mode,
    m2: Mode,
    kappa: C64,
}

fn amplifier_terms(params: &AmplifierParams) -> [PairTerm; 2] {
    [
        PairTerm {
            m1: Mode::H1,
            m2: Mode::V2,
            kappa: c(-params.gain),
        },
        PairTerm {
            m1: Mode::V1,
            m2: Mode::H2,
            kappa: C64::from_polar(params.gain, -params.phase),
        },
    ]
}

/// The ket with as many pairs as possible removed for every term.
fn pair_floor(ket: &OccupationKet, terms: &[PairTerm]) -> OccupationKet {
    let mut k = *ket;
    for t in terms {
        let m = k.get(t.m1).min(k.get(t.m2));
        k = k.with(t.m1, k.get(t.m1) - m).with(t.m2, k.get(t.m2) - m);
    }
    k
}

fn block_kets(floor: OccupationKet, terms: &[PairTerm], working: u32) -> Vec<OccupationKet> {
    let mut kets = vec![floor];
    for t in terms {
        let mut next = Vec::new();
        for k in &kets {
            let mut q = *k;
            while q.total() <= working {
                next.push(q);
                q = q.with(t.m1, q.get(t.m1) + 1).with(t.m2, q.get(t.m2) + 1);
            }
        }
        kets = next;
    }
    kets.sort();
    kets
}

/// Applies exp(G) to `input` by exponentiating G densely on each block of
/// kets connected by the pair terms.
fn pair_exponential(
    input: &StateVector,
    terms: &[PairTerm],
    cutoff: u32,
) -> Result<StateVector> {
    let working = cutoff.max(input.cutoff()) + ORACLE_PADDING;
    let mut blocks: BTreeMap<OccupationKet, Vec<(OccupationKet, C64)>> = BTreeMap::new();
    for (k, &a) in input.iter() {
        blocks.entry(pair_floor(k, terms)).or_default().push((*k, a));
    }
    let layouts: Vec<(Vec<OccupationKet>, Vec<(OccupationKet, C64)>)> = blocks
        .into_iter()
        .map(|(floor, members)| (block_kets(floor, terms, working), members))
        .collect();
    let total: usize = layouts.iter().map(|(k, _)| k.len()).sum();
    if total > ORACLE_MAX_KETS {
        return Err(Error::ResourceLimit(format!(
            "oracle basis needs {total} kets (limit {ORACLE_MAX_KETS})"
        )));
    }
    let results: Vec<Vec<(OccupationKet, C64)>> = layouts
        .par_iter()
        .map(|(kets, members)| {
            let dim = kets.len();
            let index = |k: &OccupationKet| kets.binary_search(k).ok();
            let mut gen = DMatrix::from_element(dim, dim, c(0.0));
            for (col, k) in kets.iter().enumerate() {
                for t in terms {
                    let (n1, n2) = (k.get(t.m1), k.get(t.m2));
                    let up = k.with(t.m1, n1 + 1).with(t.m2, n2 + 1);
                    if let Some(row) = index(&up) {
                        gen[(row, col)] += t.kappa * (((n1 + 1) * (n2 + 1)) as f64).sqrt();
                    }
                    if n1 > 0 && n2 > 0 {
                        let down = k.with(t.m1, n1 - 1).with(t.m2, n2 - 1);
                        if let Some(row) = index(&down) {
                            gen[(row, col)] -= t.kappa.conj() * ((n1 * n2) as f64).sqrt();
                        }
                    }
                }
            }
            let mut v = DVector::from_element(dim, c(0.0));
            for (k, a) in members {
                v[index(k).expect("input ket inside its block")] += *a;
            }
            let out = gen.exp() * v;
            kets.iter().copied().zip(out.iter().copied()).collect()
        })
        .collect();
    let mut state = StateVector::zero(cutoff);
    state.set_leakage(input.leakage());
    for block in results {
        for (k, a) in block {
            state.accumulate(k, a);
        }
    }
    state.prune();
    Ok(state)
}

/// Brute-force evolution: dense matrix exponential of the four-mode
/// generator, applied to an arbitrary input and cropped to `cutoff`.
pub fn evolution_oracle(
    input: &StateVector,
    params: &AmplifierParams,
    cutoff: u32,
) -> Result<StateVector> {
    pair_exponential(input, &amplifier_terms(params), cutoff)
}

/// Collinear two-mode amplifier U = exp(g(Â − Â†)), Â = â∥â⊥, with the qubit
/// injected on {∥, ⊥}. The two modes are stored as 1h (∥) and 1v (⊥).
pub fn degenerate_evolve(
    qubit: &PolarizationQubit,
    params: &AmplifierParams,
    cutoff: u32,
) -> Result<StateVector> {
    check_cutoff(cutoff)?;
    let input = StateVector::from_amplitudes(
        cutoff,
        [
            (OccupationKet::new(1, 0, 0, 0), qubit.alpha),
            (OccupationKet::new(0, 1, 0, 0), qubit.beta),
        ],
    )?;
    degenerate_evolve_state(&input, params, cutoff)
}

/// Collinear amplifier applied to an arbitrary state of the modes 1h, 1v.
pub fn degenerate_evolve_state(
    input: &StateVector,
    params: &AmplifierParams,
    cutoff: u32,
) -> Result<StateVector> {
    let term = PairTerm {
        m1: Mode::H1,
        m2: Mode::V1,
        kappa: c(-params.gain),
    };
    pair_exponential(input, &[term], cutoff)
}
