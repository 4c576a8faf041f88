//! Amplifier parameters and polarization qubits.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-12;

/// Gain and intrinsic phase of the two coupled parametric amplifiers.
///
/// `gain` is the dimensionless interaction strength g = χt. The derived
/// hyperbolic quantities follow from it: C = cosh g, S = sinh g, Γ = S/C.
/// The intrinsic phase Φ enters through ε = −e^{−iΦ}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplifierParams {
    pub gain: f64,
    pub phase: f64,
}

impl AmplifierParams {
    pub fn new(gain: f64, phase: f64) -> Result<Self> {
        if !gain.is_finite() || gain < 0.0 {
            return Err(Error::InvalidArguments(format!(
                "gain must be finite and non-negative, got {gain}"
            )));
        }
        if !phase.is_finite() {
            return Err(Error::InvalidArguments("phase must be finite".into()));
        }
        Ok(Self { gain, phase })
    }

    /// Universal configuration: Φ = 0.
    pub fn universal(gain: f64) -> Result<Self> {
        Self::new(gain, 0.0)
    }

    pub fn cosh(&self) -> f64 {
        self.gain.cosh()
    }

    pub fn sinh(&self) -> f64 {
        self.gain.sinh()
    }

    /// Γ = tanh g.
    pub fn gamma(&self) -> f64 {
        self.gain.tanh()
    }

    /// ε = −e^{−iΦ}.
    pub fn epsilon(&self) -> C64 {
        -C64::from_polar(1.0, -self.phase)
    }

    /// S̃ = εS, the off-diagonal Bogoliubov entry of the A′ amplifier.
    pub fn sinh_tilde(&self) -> C64 {
        self.epsilon() * self.sinh()
    }
}

/// A single-photon polarization qubit α̃|H⟩ + β̃|V⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarizationQubit {
    pub alpha: C64,
    pub beta: C64,
}

impl PolarizationQubit {
    /// Builds a qubit, rejecting amplitudes that are not normalized within 1e-12.
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArguments(format!(
                "qubit amplitudes must satisfy |a|^2 + |b|^2 = 1, got {norm}"
            )));
        }
        Ok(Self { alpha, beta })
    }

    /// Normalizes arbitrary (non-zero) amplitudes.
    pub fn normalized(alpha: C64, beta: C64) -> Result<Self> {
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidArguments("qubit amplitudes vanish".into()));
        }
        Ok(Self {
            alpha: alpha / norm,
            beta: beta / norm,
        })
    }

    pub fn h() -> Self {
        Self {
            alpha: C64::new(1.0, 0.0),
            beta: C64::new(0.0, 0.0),
        }
    }

    pub fn v() -> Self {
        Self {
            alpha: C64::new(0.0, 0.0),
            beta: C64::new(1.0, 0.0),
        }
    }

    /// (|H⟩ + |V⟩)/√2.
    pub fn d() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            alpha: C64::new(s, 0.0),
            beta: C64::new(s, 0.0),
        }
    }

    /// (|H⟩ + i|V⟩)/√2.
    pub fn l() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            alpha: C64::new(s, 0.0),
            beta: C64::new(0.0, s),
        }
    }

    /// Bloch-sphere parameterization cos(θ/2)|H⟩ + e^{iφ} sin(θ/2)|V⟩.
    pub fn from_bloch(theta: f64, phi: f64) -> Self {
        Self {
            alpha: C64::new((theta / 2.0).cos(), 0.0),
            beta: C64::from_polar((theta / 2.0).sin(), phi),
        }
    }

    /// The antipodal qubit (−β̃*, α̃*).
    pub fn orthogonal(&self) -> Self {
        Self {
            alpha: -self.beta.conj(),
            beta: self.alpha.conj(),
        }
    }

    pub fn overlap(&self, other: &Self) -> C64 {
        self.alpha.conj() * other.alpha + self.beta.conj() * other.beta
    }

    /// The SU(2) matrix whose first column is this qubit and second column its
    /// antipode. It maps |H⟩ to the qubit and |V⟩ to the orthogonal qubit.
    pub fn frame(&self) -> [[C64; 2]; 2] {
        let o = self.orthogonal();
        [[self.alpha, o.alpha], [self.beta, o.beta]]
    }
}

impl fmt::Display for PolarizationQubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}{:+}i, {}{:+}i)",
            self.alpha.re, self.alpha.im, self.beta.re, self.beta.im
        )
    }
}

/// Parses either a preset name (`H`, `V`, `D`, `L`) or four comma-separated
/// reals `a_re,a_im,b_re,b_im`. Unnormalized amplitudes are rejected.
impl FromStr for PolarizationQubit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "H" | "h" => return Ok(Self::h()),
            "V" | "v" => return Ok(Self::v()),
            "D" | "d" => return Ok(Self::d()),
            "L" | "l" => return Ok(Self::l()),
            _ => {}
        }
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidArguments(format!("cannot parse qubit `{s}`: {e}")))?;
        if parts.len() != 4 {
            return Err(Error::InvalidArguments(format!(
                "qubit `{s}` must be a preset or four numbers a_re,a_im,b_re,b_im"
            )));
        }
        Self::new(C64::new(parts[0], parts[1]), C64::new(parts[2], parts[3]))
    }
}
