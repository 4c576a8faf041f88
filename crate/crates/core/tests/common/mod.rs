#![allow(dead_code)]

use qiopa::detection::{DetectorModel, Measurement};

// Detector slots: a, b, b*, d2, d2*, trigger.
const TRIGGER: usize = 5;

struct PhotonKind {
    count: u32,
    // (detector slot, routing probability)
    routes: Vec<(usize, f64)>,
}

fn qe(det: &DetectorModel, slot: usize) -> f64 {
    let q = &det.qe;
    [q.a, q.b, q.b_star, q.k2, q.k2_star, q.trigger][slot]
}

fn none_click(set: &[usize], kinds: &[PhotonKind], det: &DetectorModel) -> f64 {
    let mut p = (1.0 - det.dark_prob).powi(set.len() as i32);
    if set.contains(&TRIGGER) {
        p *= 1.0 - det.qe.trigger;
    }
    for k in kinds {
        let hit: f64 = k
            .routes
            .iter()
            .filter(|(d, _)| set.contains(d))
            .map(|(d, r)| r * qe(det, *d))
            .sum();
        p *= (1.0 - hit).powi(k.count as i32);
    }
    p
}

fn all_click(set: &[usize], kinds: &[PhotonKind], det: &DetectorModel) -> f64 {
    let n = set.len();
    (0..1u32 << n)
        .map(|mask| {
            let sub: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| set[i]).collect();
            let sign = if sub.len() % 2 == 0 { 1.0 } else { -1.0 };
            sign * none_click(&sub, kinds, det)
        })
        .sum()
}

fn kinds(m: Measurement, k1_psi: u32, k1_perp: u32, k2_psi: u32, k2_perp: u32, t: f64) -> Vec<PhotonKind> {
    match m {
        Measurement::Clone => vec![
            PhotonKind { count: k1_psi, routes: vec![(0, t), (1, 1.0 - t)] },
            PhotonKind { count: k1_perp, routes: vec![(2, 1.0 - t)] },
            PhotonKind { count: k2_psi + k2_perp, routes: vec![(3, 1.0)] },
        ],
        Measurement::Unot => vec![
            PhotonKind { count: k1_psi + k1_perp, routes: vec![(0, t), (1, 1.0 - t)] },
            PhotonKind { count: k2_perp, routes: vec![(3, 1.0)] },
            PhotonKind { count: k2_psi, routes: vec![(4, 1.0)] },
        ],
    }
}

/// Exact per-trial probabilities of the signal and noise coincidences at
/// Φ = 0, from the closed-form pair-order weights.
pub fn coincidence_probabilities(m: Measurement, gain: f64, overlap: f64, det: &DetectorModel) -> (f64, f64) {
    let (c, gamma) = (gain.cosh(), gain.tanh());
    let e1 = 1.0 - c.powi(-6);
    let e0 = 1.0 - c.powi(-4);
    let w1 = overlap * e1 / (overlap * e1 + (1.0 - overlap) * e0);
    let (signal_set, noise_set): (&[usize], &[usize]) = match m {
        Measurement::Clone => (&[3, TRIGGER, 0, 1], &[3, TRIGGER, 0, 2]),
        Measurement::Unot => (&[3, TRIGGER, 0, 1], &[4, TRIGGER, 0, 1]),
    };
    let (mut ps, mut pn) = (0.0, 0.0);
    for order in 1..60u32 {
        for i in 0..=order {
            let j = order - i;
            let g2 = gamma.powi(2 * order as i32);
            // injected: |i+1, j, j, i⟩ with weight (i+1) Γ^{2n} / C⁶; background: SPDC + ψ photon
            let inj = c.powi(-6) * g2 * (i + 1) as f64 / e1;
            let bg = c.powi(-4) * g2 / e0;
            let weight = w1 * inj + (1.0 - w1) * bg;
            let ks = kinds(m, i + 1, j, j, i, det.beamsplitter_ratio);
            ps += weight * all_click(signal_set, &ks, det);
            pn += weight * all_click(noise_set, &ks, det);
        }
    }
    (ps, pn)
}

/// Expected estimator value (ratio of expected counts with efficiency correction).
pub fn expected_ratio(m: Measurement, gain: f64, overlap: f64, det: &DetectorModel) -> f64 {
    let (ps, pn) = coincidence_probabilities(m, gain, overlap, det);
    match m {
        Measurement::Clone => ps / pn * det.qe.b_star / (2.0 * det.qe.b),
        Measurement::Unot => ps / pn * det.qe.k2_star / det.qe.k2,
    }
}

use num_complex::Complex64 as C64;
use qiopa::wigner::PhasePoint;
use qiopa::StateVector;

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// ⟨k|D(α)|n⟩ from the normal-ordered double sum.
pub fn displacement_series(k: u32, n: u32, alpha: C64) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for j in 0..=k.min(n) {
        s += alpha.powu(k - j) * (-alpha.conj()).powu(n - j)
            / (factorial(j) * factorial(k - j) * factorial(n - j));
    }
    s * (-alpha.norm_sqr() / 2.0).exp() * (factorial(k) * factorial(n)).sqrt()
}

/// W as (2/π)⁴ times the displaced parity, with the phase-space coordinates
/// α₁, β₁, β₂, α₂ displacing modes 1h, 1v, 2h, 2v. `k_max` truncates the
/// displaced state per mode.
pub fn displaced_parity_wigner(state: &StateVector, point: &PhasePoint, k_max: u32) -> f64 {
    let gamma = [point.alpha1, point.beta1, point.beta2, point.alpha2];
    let n_max = state.cutoff();
    let tables: Vec<Vec<Vec<C64>>> = gamma
        .iter()
        .map(|g| {
            (0..=k_max)
                .map(|k| (0..=n_max).map(|n| displacement_series(k, n, -g)).collect())
                .collect()
        })
        .collect();
    let kets: Vec<([u32; 4], C64)> = state.iter().map(|(k, a)| (k.counts(), *a)).collect();
    let mut parity = 0.0;
    let r = 0..=k_max;
    for k0 in r.clone() {
        for k1 in r.clone() {
            for k2 in r.clone() {
                for k3 in r.clone() {
                    let ks = [k0, k1, k2, k3];
                    let mut amp = C64::new(0.0, 0.0);
                    for (n, a) in &kets {
                        let mut t = *a;
                        for m in 0..4 {
                            t *= tables[m][ks[m] as usize][n[m] as usize];
                        }
                        amp += t;
                    }
                    let sign = if (k0 + k1 + k2 + k3) % 2 == 0 { 1.0 } else { -1.0 };
                    parity += sign * amp.norm_sqr();
                }
            }
        }
    }
    (2.0 / std::f64::consts::PI).powi(4) * parity
}
