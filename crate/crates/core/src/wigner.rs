//! Wigner function of the amplified field.
//!
//! Phase-space coordinates α₁, α₂ belong to the A amplifier (modes 1h, 2v)
//! and β₁, β₂ to the A′ amplifier (modes 1v, 2h). The closed form is
//!
//!   W = −W̄_A W̄_A′ [1 − |e^{iΦ}Δ_A + Δ_A′|²],
//!
//! with W̄ = 4π⁻² exp(−|γ₊|² − |γ₋|²) and Δ = 2^{−1/2}(γ₊ − iγ₋). It is
//! normalized to one and equals the standard (2/π)⁴ displaced-parity Wigner
//! function of [`wigner_reference_state`]. Its value at the origin is
//! −16/π⁴: the negativity of a field that carries a single injected photon.

use std::f64::consts::PI;
use std::io::Write;
use std::str::FromStr;

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::evolve_qubit;
use crate::error::{Error, Result};
use crate::fock::{Mode, OccupationKet, StateVector};
use crate::params::{AmplifierParams, PolarizationQubit};
use crate::table::sig12;

/// Largest grid a negativity scan will evaluate.
pub const MAX_GRID_POINTS: usize = 1_000_000;

/// A point {α₁, α₂, β₁, β₂} of the eight-dimensional phase space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhasePoint {
    pub alpha1: C64,
    pub alpha2: C64,
    pub beta1: C64,
    pub beta2: C64,
}

/// Squeezed variables of one amplifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Squeezed {
    pub plus: C64,
    pub minus: C64,
}

impl Squeezed {
    /// γ₊ = (x₁ + x₂*)e^{−g}, γ₋ = i(x₁ − x₂*)e^{g}.
    pub fn new(x1: C64, x2: C64, gain: f64) -> Self {
        Self {
            plus: (x1 + x2.conj()) * (-gain).exp(),
            minus: C64::i() * (x1 - x2.conj()) * gain.exp(),
        }
    }

    /// Δ = 2^{−1/2}(γ₊ − iγ₋).
    pub fn delta(&self) -> C64 {
        (self.plus - C64::i() * self.minus) * std::f64::consts::FRAC_1_SQRT_2
    }

    /// W̄ = 4π⁻² exp(−|γ₊|² − |γ₋|²).
    pub fn envelope(&self) -> f64 {
        4.0 / (PI * PI) * (-(self.plus.norm_sqr() + self.minus.norm_sqr())).exp()
    }
}

impl PhasePoint {
    pub fn new(alpha1: C64, alpha2: C64, beta1: C64, beta2: C64) -> Self {
        Self {
            alpha1,
            alpha2,
            beta1,
            beta2,
        }
    }

    pub fn squeezed_a(&self, gain: f64) -> Squeezed {
        Squeezed::new(self.alpha1, self.alpha2, gain)
    }

    pub fn squeezed_a_prime(&self, gain: f64) -> Squeezed {
        Squeezed::new(self.beta1, self.beta2, gain)
    }

    pub fn get(&self, c: Coordinate) -> C64 {
        match c {
            Coordinate::Alpha1 => self.alpha1,
            Coordinate::Alpha2 => self.alpha2,
            Coordinate::Beta1 => self.beta1,
            Coordinate::Beta2 => self.beta2,
        }
    }

    pub fn set(&mut self, c: Coordinate, value: C64) {
        match c {
            Coordinate::Alpha1 => self.alpha1 = value,
            Coordinate::Alpha2 => self.alpha2 = value,
            Coordinate::Beta1 => self.beta1 = value,
            Coordinate::Beta2 => self.beta2 = value,
        }
    }

    /// Real coordinates (Re α₁, Im α₁, Re α₂, …, Im β₂).
    pub fn to_real(&self) -> [f64; 8] {
        let c = [self.alpha1, self.alpha2, self.beta1, self.beta2];
        std::array::from_fn(|i| if i % 2 == 0 { c[i / 2].re } else { c[i / 2].im })
    }

    pub fn from_real(x: &[f64; 8]) -> Self {
        let c = |k: usize| C64::new(x[2 * k], x[2 * k + 1]);
        Self::new(c(0), c(1), c(2), c(3))
    }

    /// The field mode each coordinate refers to.
    pub fn mode_of(c: Coordinate) -> Mode {
        match c {
            Coordinate::Alpha1 => Mode::H1,
            Coordinate::Alpha2 => Mode::V2,
            Coordinate::Beta1 => Mode::V1,
            Coordinate::Beta2 => Mode::H2,
        }
    }
}

/// One of the four complex phase-space coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coordinate {
    Alpha1,
    Alpha2,
    Beta1,
    Beta2,
}

impl FromStr for Coordinate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "alpha1" | "a1" => Ok(Coordinate::Alpha1),
            "alpha2" | "a2" => Ok(Coordinate::Alpha2),
            "beta1" | "b1" => Ok(Coordinate::Beta1),
            "beta2" | "b2" => Ok(Coordinate::Beta2),
            _ => Err(Error::InvalidArguments(format!(
                "unknown coordinate `{s}` (expected alpha1, alpha2, beta1, beta2)"
            ))),
        }
    }
}

/// Closed-form Wigner function at `point`.
pub fn wigner_closed_form(point: &PhasePoint, params: &AmplifierParams) -> f64 {
    let a = point.squeezed_a(params.gain);
    let ap = point.squeezed_a_prime(params.gain);
    let z = C64::from_polar(1.0, params.phase) * a.delta() + ap.delta();
    let w = -C64::new(a.envelope() * ap.envelope(), 0.0) * (C64::new(1.0, 0.0) - z * z.conj());
    debug_assert!(w.im.abs() < 1e-14);
    w.re
}

/// Gaussian data of the closed form: W(x) = (16/π⁴) e^{−xᵀQx} ((u₁·x)² + (u₂·x)² − 1).
struct GaussianForm {
    q_inv: SMatrix<f64, 8, 8>,
    det_q: f64,
    u: [SVector<f64, 8>; 2],
}

impl GaussianForm {
    fn new(params: &AmplifierParams) -> Self {
        let quad = |x: &[f64; 8]| {
            let p = PhasePoint::from_real(x);
            let (a, ap) = (p.squeezed_a(params.gain), p.squeezed_a_prime(params.gain));
            a.plus.norm_sqr() + a.minus.norm_sqr() + ap.plus.norm_sqr() + ap.minus.norm_sqr()
        };
        let lin = |x: &[f64; 8]| {
            let p = PhasePoint::from_real(x);
            C64::from_polar(1.0, params.phase) * p.squeezed_a(params.gain).delta()
                + p.squeezed_a_prime(params.gain).delta()
        };
        let unit = |i: usize| {
            let mut e = [0.0; 8];
            e[i] = 1.0;
            e
        };
        let mut q = SMatrix::<f64, 8, 8>::zeros();
        for i in 0..8 {
            q[(i, i)] = quad(&unit(i));
        }
        for i in 0..8 {
            for j in 0..i {
                let mut e = unit(i);
                e[j] = 1.0;
                let v = 0.5 * (quad(&e) - q[(i, i)] - q[(j, j)]);
                q[(i, j)] = v;
                q[(j, i)] = v;
            }
        }
        let u = [
            SVector::<f64, 8>::from_fn(|i, _| lin(&unit(i)).re),
            SVector::<f64, 8>::from_fn(|i, _| lin(&unit(i)).im),
        ];
        Self {
            q_inv: q.try_inverse().expect("positive-definite quadratic form"),
            det_q: q.determinant(),
            u,
        }
    }

    /// ∫ W(x) e^{ik·x} d⁸x, optionally dropping the interference factor.
    fn transform(&self, k: &SVector<f64, 8>, envelope_only: bool) -> f64 {
        let gauss = 16.0 / self.det_q.sqrt() * (-(k.transpose() * self.q_inv * k)[(0, 0)] / 4.0).exp();
        if envelope_only {
            return gauss;
        }
        let moment: f64 = self
            .u
            .iter()
            .map(|u| {
                let a = (u.transpose() * self.q_inv * u)[(0, 0)];
                let b = (u.transpose() * self.q_inv * k)[(0, 0)];
                a / 2.0 - b * b / 4.0
            })
            .sum();
        gauss * (moment - 1.0)
    }
}

/// Arguments (η₁, η₂, ξ₁, ξ₂) of the characteristic function.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ChiPoint {
    pub eta1: C64,
    pub eta2: C64,
    pub xi1: C64,
    pub xi2: C64,
}

impl ChiPoint {
    pub fn new(eta1: C64, eta2: C64, xi1: C64, xi2: C64) -> Self {
        Self { eta1, eta2, xi1, xi2 }
    }

    /// Wave vector k with Σ(ηα* − η*α) = i k·x in real coordinates.
    fn wave_vector(&self) -> SVector<f64, 8> {
        let c = [self.eta1, self.eta2, self.xi1, self.xi2];
        SVector::<f64, 8>::from_fn(|i, _| {
            let z = c[i / 2];
            if i % 2 == 0 {
                2.0 * z.im
            } else {
                -2.0 * z.re
            }
        })
    }

    fn max_norm(&self) -> f64 {
        [self.eta1, self.eta2, self.xi1, self.xi2]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Characteristic function χ(η, ξ) = ∫ W e^{Σ(ηα* − η*α) + (ξβ* − ξ*β)} of
/// the closed form, evaluated analytically.
pub fn characteristic_closed_form(point: &ChiPoint, params: &AmplifierParams) -> f64 {
    GaussianForm::new(params).transform(&point.wave_vector(), false)
}

/// Characteristic function of the envelope W̄_A W̄_A′ alone: the vacuum-injected
/// (spontaneous) output in the reference frame.
pub fn squeezed_vacuum_characteristic(point: &ChiPoint, params: &AmplifierParams) -> f64 {
    GaussianForm::new(params).transform(&point.wave_vector(), true)
}

/// Matrix element ⟨m|D(α)|n⟩ from the associated Laguerre polynomial.
pub fn displacement_element(m: u32, n: u32, alpha: C64) -> C64 {
    let x = alpha.norm_sqr();
    let gauss = (-x / 2.0).exp();
    let (lo, hi, z) = if m >= n { (n, m, alpha) } else { (m, n, -alpha.conj()) };
    let d = hi - lo;
    let ratio = (0.5 * (crate::fock::ln_factorial(lo) - crate::fock::ln_factorial(hi))).exp();
    ratio * z.powu(d) * gauss * laguerre(lo, d as f64, x)
}

fn laguerre(n: u32, a: f64, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 + a - x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + a - x) * cur - (k + a) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Numerical characteristic value with a flag for arguments outside the
/// window where truncation of the state is negligible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicValue {
    pub value: C64,
    pub accuracy_warning: bool,
}

/// ⟨Ψ|D(η₁)D(η₂)D(ξ₁)D(ξ₂)|Ψ⟩ on the truncated state, with η₁, η₂, ξ₁, ξ₂
/// displacing modes 1h, 2v, 1v, 2h.
pub fn characteristic_oracle(state: &StateVector, point: &ChiPoint) -> CharacteristicValue {
    let args = [
        (Mode::H1, point.eta1),
        (Mode::V2, point.eta2),
        (Mode::V1, point.xi1),
        (Mode::H2, point.xi2),
    ];
    let kets: Vec<(OccupationKet, C64)> = state.iter().map(|(k, a)| (*k, *a)).collect();
    let mut value = C64::new(0.0, 0.0);
    for (bra, b) in &kets {
        for (ket, k) in &kets {
            let mut elem = b.conj() * k;
            for (mode, z) in args {
                elem *= displacement_element(bra.get(mode), ket.get(mode), z);
            }
            value += elem;
        }
    }
    CharacteristicValue {
        value,
        accuracy_warning: state.leakage() >= 1e-6 || point.max_norm() > 2.0,
    }
}

/// Applies the phase frame in which the closed form is a standard Wigner
/// function: e^{iπ n̂₂ᵥ} e^{iΦ n̂₂ₕ}.
pub fn to_reference_frame(state: &StateVector, params: &AmplifierParams) -> StateVector {
    state
        .phase_shift(Mode::V2, PI)
        .phase_shift(Mode::H2, params.phase)
}

/// The output state whose Wigner function is the closed form: the qubit
/// (|H⟩ + e^{iΦ}|V⟩)/√2 amplified and moved to the reference frame.
pub fn wigner_reference_state(params: &AmplifierParams, cutoff: u32) -> Result<StateVector> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let qubit = PolarizationQubit::new(C64::new(s, 0.0), C64::from_polar(s, params.phase))?;
    Ok(to_reference_frame(&evolve_qubit(&qubit, params, cutoff)?, params))
}

/// One scanned direction: a complex coordinate moved along a unit direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub coordinate: Coordinate,
    pub direction: C64,
}

/// Parses `alpha1.re`, `beta2.im`, or a bare coordinate (real direction).
impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, part) = s.split_once('.').unwrap_or((s, "re"));
        let direction = match part {
            "re" => C64::new(1.0, 0.0),
            "im" => C64::new(0.0, 1.0),
            _ => {
                return Err(Error::InvalidArguments(format!(
                    "axis `{s}` must end in .re or .im"
                )))
            }
        };
        Ok(Axis {
            coordinate: name.parse()?,
            direction,
        })
    }
}

/// A two-dimensional slice: two axes through a pinned base point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneSpec {
    pub axis1: Axis,
    pub axis2: Axis,
    pub base: PhasePoint,
}

/// Uniform grid on one axis: `points` values from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn new(min: f64, max: f64, points: usize) -> Result<Self> {
        if points == 0 || !(min <= max) || !min.is_finite() || !max.is_finite() {
            return Err(Error::InvalidArguments(format!(
                "invalid grid {min}..{max} with {points} points"
            )));
        }
        Ok(Self { min, max, points })
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.points == 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.points - 1) as f64
        }
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub coord1: C64,
    pub coord2: C64,
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NegativityScan {
    pub min_w: f64,
    pub negative_fraction: f64,
    pub rows: Vec<ScanRow>,
}

/// Evaluates the closed form on a 2-plane and summarizes its negativity.
pub fn negativity_scan(
    plane: &PlaneSpec,
    grid1: &GridSpec,
    grid2: &GridSpec,
    params: &AmplifierParams,
) -> Result<NegativityScan> {
    let total = grid1.points.checked_mul(grid2.points).unwrap_or(usize::MAX);
    if total > MAX_GRID_POINTS {
        return Err(Error::ResourceLimit(format!(
            "grid has {total} points (limit {MAX_GRID_POINTS})"
        )));
    }
    let rows: Vec<ScanRow> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / grid2.points, idx % grid2.points);
            let mut p = plane.base;
            let c1 = p.get(plane.axis1.coordinate) + plane.axis1.direction * grid1.value(i);
            p.set(plane.axis1.coordinate, c1);
            let c2 = p.get(plane.axis2.coordinate) + plane.axis2.direction * grid2.value(j);
            p.set(plane.axis2.coordinate, c2);
            ScanRow {
                coord1: p.get(plane.axis1.coordinate),
                coord2: p.get(plane.axis2.coordinate),
                w: wigner_closed_form(&p, params),
            }
        })
        .collect();
    let min_w = rows.iter().map(|r| r.w).fold(f64::INFINITY, f64::min);
    let negative = rows.iter().filter(|r| r.w < 0.0).count();
    Ok(NegativityScan {
        min_w,
        negative_fraction: negative as f64 / total as f64,
        rows,
    })
}

impl NegativityScan {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "coord1_re,coord1_im,coord2_re,coord2_im,W")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{}",
                sig12(r.coord1.re),
                sig12(r.coord1.im),
                sig12(r.coord2.re),
                sig12(r.coord2.im),
                sig12(r.w)
            )?;
        }
        Ok(())
    }
}
