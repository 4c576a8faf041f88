//! Sparse four-mode Fock space.
//!
//! Modes are ordered globally as (1h, 1v, 2h, 2v): horizontal and vertical
//! polarization on the cloning spatial mode k1, then on the anticloning
//! spatial mode k2. Amplifier A couples (1h, 2v); amplifier A′ couples (1v, 2h).
//!
//! States are truncated at a maximum total photon number. Any norm that is
//! discarded by truncation or by pruning of negligible amplitudes is
//! accumulated in [`StateVector::leakage`] rather than renormalized away.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::PolarizationQubit;

/// Default maximum total photon number retained in a state.
pub const DEFAULT_CUTOFF: u32 = 12;

/// Amplitudes smaller than this are dropped after each operator application.
pub const PRUNE_THRESHOLD: f64 = 1e-15;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// One of the four field modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    H1,
    V1,
    H2,
    V2,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::H1, Mode::V1, Mode::H2, Mode::V2];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Mode::H1 => "1h",
            Mode::V1 => "1v",
            Mode::H2 => "2h",
            Mode::V2 => "2v",
        }
    }

    pub fn spatial(self) -> SpatialMode {
        match self {
            Mode::H1 | Mode::V1 => SpatialMode::K1,
            Mode::H2 | Mode::V2 => SpatialMode::K2,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidMode(s.to_string()))
    }
}

/// Spatial output mode: k1 (cloning channel) or k2 (anticloning channel).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpatialMode {
    K1,
    K2,
}

impl SpatialMode {
    /// The (horizontal, vertical) polarization modes of this spatial mode.
    pub fn modes(self) -> (Mode, Mode) {
        match self {
            SpatialMode::K1 => (Mode::H1, Mode::V1),
            SpatialMode::K2 => (Mode::H2, Mode::V2),
        }
    }

    pub fn other(self) -> Self {
        match self {
            SpatialMode::K1 => SpatialMode::K2,
            SpatialMode::K2 => SpatialMode::K1,
        }
    }
}

/// Photon numbers on the modes (1h, 1v, 2h, 2v).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OccupationKet([u32; 4]);

impl OccupationKet {
    pub const VACUUM: OccupationKet = OccupationKet([0; 4]);

    pub fn new(n1h: u32, n1v: u32, n2h: u32, n2v: u32) -> Self {
        Self([n1h, n1v, n2h, n2v])
    }

    pub fn from_spatial(k1: (u32, u32), k2: (u32, u32)) -> Self {
        Self([k1.0, k1.1, k2.0, k2.1])
    }

    pub fn counts(&self) -> [u32; 4] {
        self.0
    }

    pub fn get(&self, mode: Mode) -> u32 {
        self.0[mode.index()]
    }

    pub fn with(mut self, mode: Mode, n: u32) -> Self {
        self.0[mode.index()] = n;
        self
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// (horizontal, vertical) photon numbers on one spatial mode.
    pub fn spatial(&self, k: SpatialMode) -> (u32, u32) {
        let (h, v) = k.modes();
        (self.get(h), self.get(v))
    }

    pub fn spatial_total(&self, k: SpatialMode) -> u32 {
        let (h, v) = self.spatial(k);
        h + v
    }

    fn with_spatial(mut self, k: SpatialMode, pair: (u32, u32)) -> Self {
        let (h, v) = k.modes();
        self.0[h.index()] = pair.0;
        self.0[v.index()] = pair.1;
        self
    }
}

impl Ord for OccupationKet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for OccupationKet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OccupationKet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "|{a},{b},{c},{d}⟩")
    }
}

/// A truncated superposition over four-mode occupation kets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "StateDoc", try_from = "StateDoc")]
pub struct StateVector {
    amplitudes: BTreeMap<OccupationKet, C64>,
    cutoff: u32,
    leakage: f64,
}

impl StateVector {
    /// The zero vector.
    pub fn zero(cutoff: u32) -> Self {
        Self {
            amplitudes: BTreeMap::new(),
            cutoff,
            leakage: 0.0,
        }
    }

    pub fn vacuum(cutoff: u32) -> Self {
        Self::basis(OccupationKet::VACUUM, cutoff).expect("vacuum always fits")
    }

    pub fn basis(ket: OccupationKet, cutoff: u32) -> Result<Self> {
        Self::from_amplitudes(cutoff, [(ket, C64::new(1.0, 0.0))])
    }

    /// Builds a state from explicit amplitudes; repeated kets are summed.
    pub fn from_amplitudes<I>(cutoff: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (OccupationKet, C64)>,
    {
        let mut state = Self::zero(cutoff);
        for (ket, amp) in terms {
            if ket.total() > cutoff {
                return Err(Error::InvalidArguments(format!(
                    "{ket} exceeds the cutoff of {cutoff} photons"
                )));
            }
            *state.amplitudes.entry(ket).or_insert(ZERO) += amp;
        }
        state.prune();
        Ok(state)
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// Norm² discarded by truncation and pruning.
    pub fn leakage(&self) -> f64 {
        self.leakage
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitude(&self, ket: &OccupationKet) -> C64 {
        self.amplitudes.get(ket).copied().unwrap_or(ZERO)
    }

    /// Kets in ascending (total photon number, occupation) order.
    pub fn iter(&self) -> impl Iterator<Item = (&OccupationKet, &C64)> {
        self.amplitudes.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// Sets the leakage to the norm² missing from a state that is known to be
    /// normalized before truncation.
    pub(crate) fn with_leakage_from_norm(mut self) -> Self {
        self.leakage = (1.0 - self.norm_sqr()).max(0.0);
        self
    }

    pub(crate) fn set_leakage(&mut self, leakage: f64) {
        self.leakage = leakage;
    }

    /// Adds `amp` to `ket`, diverting it to the leakage if it lies past the cutoff.
    pub(crate) fn accumulate(&mut self, ket: OccupationKet, amp: C64) {
        if ket.total() > self.cutoff {
            self.leakage += amp.norm_sqr();
        } else {
            *self.amplitudes.entry(ket).or_insert(ZERO) += amp;
        }
    }

    pub(crate) fn prune(&mut self) {
        let mut dropped = 0.0;
        self.amplitudes.retain(|_, a| {
            let keep = a.norm() >= PRUNE_THRESHOLD;
            if !keep {
                dropped += a.norm_sqr();
            }
            keep
        });
        self.leakage += dropped;
    }

    fn map_kets<F>(&self, mut f: F) -> Self
    where
        F: FnMut(&OccupationKet, C64, &mut Self),
    {
        let mut out = Self {
            amplitudes: BTreeMap::new(),
            cutoff: self.cutoff,
            leakage: self.leakage,
        };
        for (ket, &amp) in &self.amplitudes {
            f(ket, amp, &mut out);
        }
        out.prune();
        out
    }

    /// Applies the creation operator â† of `mode`.
    pub fn create(&self, mode: Mode) -> Self {
        self.map_kets(|ket, amp, out| {
            let n = ket.get(mode);
            out.accumulate(ket.with(mode, n + 1), amp * ((n + 1) as f64).sqrt());
        })
    }

    /// Applies the annihilation operator â of `mode`.
    pub fn annihilate(&self, mode: Mode) -> Self {
        self.map_kets(|ket, amp, out| {
            let n = ket.get(mode);
            if n > 0 {
                out.accumulate(ket.with(mode, n - 1), amp * (n as f64).sqrt());
            }
        })
    }

    /// Multiplies every amplitude by `factor`.
    pub fn scaled(&self, factor: C64) -> Self {
        let mut out = self.map_kets(|ket, amp, out| out.accumulate(*ket, amp * factor));
        out.leakage = self.leakage * factor.norm_sqr();
        out
    }

    /// Linear combination `self + factor * other`; leakages are added.
    pub fn add_scaled(&self, factor: C64, other: &Self) -> Self {
        let mut out = self.clone();
        out.cutoff = self.cutoff.max(other.cutoff);
        for (ket, &amp) in &other.amplitudes {
            out.accumulate(*ket, amp * factor);
        }
        out.leakage += other.leakage * factor.norm_sqr();
        out.prune();
        out
    }

    /// Applies e^{iθn̂} to one mode.
    pub fn phase_shift(&self, mode: Mode, theta: f64) -> Self {
        self.map_kets(|ket, amp, out| {
            out.accumulate(*ket, amp * C64::from_polar(1.0, theta * ket.get(mode) as f64));
        })
    }

    /// Keeps only the kets selected by `keep`. The discarded weight is not
    /// added to the leakage: projection is a conditioning, not a truncation.
    pub fn project<F>(&self, mut keep: F) -> Self
    where
        F: FnMut(&OccupationKet) -> bool,
    {
        let mut out = self.clone();
        out.amplitudes.retain(|k, _| keep(k));
        out
    }

    /// Restricts to kets with exactly `n1` photons on k1 and `n2` on k2.
    pub fn sector(&self, n1: u32, n2: u32) -> Self {
        self.project(|k| {
            k.spatial_total(SpatialMode::K1) == n1 && k.spatial_total(SpatialMode::K2) == n2
        })
    }

    /// Re-expresses the state after a polarization transformation on one
    /// spatial mode, given as the 2×2 matrix acting on (H, V) amplitudes:
    /// â_h† ↦ m₀₀ â_h† + m₁₀ â_v† and â_v† ↦ m₀₁ â_h† + m₁₁ â_v†.
    /// Total photon number per spatial mode is conserved.
    pub fn rotate_polarization(&self, k: SpatialMode, m: &[[C64; 2]; 2]) -> Self {
        self.map_kets(|ket, amp, out| {
            let (nh, nv) = ket.spatial(k);
            let total = nh + nv;
            for p in 0..=nh {
                let a = binomial(nh, p) * m[0][0].powu(p) * m[1][0].powu(nh - p);
                for q in 0..=nv {
                    let b = binomial(nv, q) * m[0][1].powu(q) * m[1][1].powu(nv - q);
                    let h = p + q;
                    let v = total - h;
                    let norm = (0.5
                        * (ln_factorial(h) + ln_factorial(v)
                            - ln_factorial(nh)
                            - ln_factorial(nv)))
                        .exp();
                    out.accumulate(ket.with_spatial(k, (h, v)), amp * a * b * norm);
                }
            }
        })
    }

    /// Largest per-ket amplitude difference over the union of both supports.
    pub fn max_amplitude_distance(&self, other: &Self) -> f64 {
        self.amplitudes
            .keys()
            .chain(other.amplitudes.keys())
            .map(|k| (self.amplitude(k) - other.amplitude(k)).norm())
            .fold(0.0, f64::max)
    }

    /// Reduced density matrix over the polarization modes of `keep`.
    /// Its trace equals the stored norm².
    pub fn partial_trace(&self, keep: SpatialMode) -> DensityMatrix {
        let traced = keep.other();
        let mut groups: BTreeMap<(u32, u32), Vec<((u32, u32), C64)>> = BTreeMap::new();
        for (ket, &amp) in &self.amplitudes {
            groups
                .entry(ket.spatial(traced))
                .or_default()
                .push((ket.spatial(keep), amp));
        }
        let mut basis: Vec<(u32, u32)> = self.amplitudes.keys().map(|k| k.spatial(keep)).collect();
        sort_pairs(&mut basis);
        basis.dedup();
        let dim = basis.len();
        let mut entries = DMatrix::from_element(dim, dim, ZERO);
        for members in groups.values() {
            for &(a, amp_a) in members {
                let i = pair_index(&basis, a);
                for &(b, amp_b) in members {
                    let j = pair_index(&basis, b);
                    entries[(i, j)] += amp_a * amp_b.conj();
                }
            }
        }
        DensityMatrix {
            basis,
            entries,
            leakage: self.leakage,
        }
    }
}

/// ⟨a|b⟩, conjugate-linear in `a`.
pub fn inner(a: &StateVector, b: &StateVector) -> C64 {
    let (small, large, conj_small) = if a.len() <= b.len() { (a, b, true) } else { (b, a, false) };
    small
        .amplitudes
        .iter()
        .filter_map(|(k, &x)| large.amplitudes.get(k).map(|&y| if conj_small { x.conj() * y } else { y.conj() * x }))
        .sum()
}

fn sort_pairs(pairs: &mut [(u32, u32)]) {
    pairs.sort_by_key(|&(h, v)| (h + v, h, v));
}

fn pair_index(basis: &[(u32, u32)], pair: (u32, u32)) -> usize {
    basis
        .binary_search_by_key(&(pair.0 + pair.1, pair.0, pair.1), |&(h, v)| (h + v, h, v))
        .expect("pair present in basis")
}

pub(crate) fn ln_factorial(n: u32) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Which polarization a photon-number expectation refers to, relative to a qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    /// The mode aligned with the qubit, π.
    Aligned,
    /// The orthogonal mode, π⊥.
    Orthogonal,
}

/// Reduced state of one spatial mode, over (horizontal, vertical) occupation pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "DensityDoc", try_from = "DensityDoc")]
pub struct DensityMatrix {
    basis: Vec<(u32, u32)>,
    entries: DMatrix<C64>,
    leakage: f64,
}

impl DensityMatrix {
    /// Validates shape, Hermiticity and trace, then builds the matrix.
    /// Basis labels may be given in any order and are sorted internally.
    pub fn new(basis: Vec<(u32, u32)>, entries: DMatrix<C64>, leakage: f64) -> Result<Self> {
        let dim = basis.len();
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Error::InvalidArguments(format!(
                "density matrix is {}x{} but basis has {dim} labels",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by_key(|&i| (basis[i].0 + basis[i].1, basis[i].0, basis[i].1));
        let sorted: Vec<(u32, u32)> = order.iter().map(|&i| basis[i]).collect();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArguments("duplicate basis labels".into()));
        }
        let entries = DMatrix::from_fn(dim, dim, |i, j| entries[(order[i], order[j])]);
        let scale = entries.iter().map(|z| z.norm()).fold(1.0, f64::max);
        for i in 0..dim {
            for j in 0..=i {
                if (entries[(i, j)] - entries[(j, i)].conj()).norm() > 1e-12 * scale {
                    return Err(Error::NotAState("density matrix is not Hermitian".into()));
                }
            }
        }
        let rho = Self {
            basis: sorted,
            entries,
            leakage,
        };
        if rho.trace() > 1.0 + 1e-9 {
            return Err(Error::NotAState(format!("trace {} exceeds one", rho.trace())));
        }
        Ok(rho)
    }

    /// Diagonal matrix on the given labels.
    pub fn diagonal(entries: &[((u32, u32), f64)]) -> Result<Self> {
        let dim = entries.len();
        let mut m = DMatrix::from_element(dim, dim, ZERO);
        for (i, &(_, p)) in entries.iter().enumerate() {
            m[(i, i)] = C64::new(p, 0.0);
        }
        Self::new(entries.iter().map(|e| e.0).collect(), m, 0.0)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[(u32, u32)] {
        &self.basis
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn leakage(&self) -> f64 {
        self.leakage
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).sum()
    }

    /// ⟨a|ρ|b⟩ for occupation pairs `a`, `b`; zero outside the basis.
    pub fn element(&self, a: (u32, u32), b: (u32, u32)) -> C64 {
        match (self.position(a), self.position(b)) {
            (Some(i), Some(j)) => self.entries[(i, j)],
            _ => ZERO,
        }
    }

    fn position(&self, pair: (u32, u32)) -> Option<usize> {
        self.basis
            .binary_search_by_key(&(pair.0 + pair.1, pair.0, pair.1), |&(h, v)| (h + v, h, v))
            .ok()
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        if self.dim() == 0 {
            return Vec::new();
        }
        let mut ev: Vec<f64> = SymmetricEigen::new(self.entries.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    /// Frobenius norm of the difference, aligning the two bases by label.
    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        let mut labels: Vec<(u32, u32)> = self.basis.iter().chain(&other.basis).copied().collect();
        sort_pairs(&mut labels);
        labels.dedup();
        let mut sum = 0.0;
        for &a in &labels {
            for &b in &labels {
                sum += (self.element(a, b) - other.element(a, b)).norm_sqr();
            }
        }
        sum.sqrt()
    }

    /// Von Neumann entropy −Tr ρ log₂ ρ in bits.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        let ev = self.eigenvalues();
        if let Some(&min) = ev.last() {
            if min < -1e-8 {
                return Err(Error::NotAState(format!("negative eigenvalue {min:e}")));
            }
        }
        let s: f64 = ev
            .iter()
            .filter(|&&l| l > 1e-14)
            .map(|&l| -l * l.log2())
            .sum();
        Ok(s.max(0.0))
    }

    /// Expectation of the photon number in the polarization mode aligned with
    /// (or orthogonal to) `qubit`.
    pub fn number_expectation(&self, qubit: &PolarizationQubit, which: Polarization) -> f64 {
        let q = match which {
            Polarization::Aligned => *qubit,
            Polarization::Orthogonal => qubit.orthogonal(),
        };
        // n_q = |α|² n_h + |β|² n_v + αβ* a_h†a_v + α*β a_v†a_h
        let mut total = ZERO;
        for (k, &(h, v)) in self.basis.iter().enumerate() {
            let diag = q.alpha.norm_sqr() * h as f64 + q.beta.norm_sqr() * v as f64;
            total += self.entries[(k, k)] * diag;
            if v > 0 {
                if let Some(l) = self.position((h + 1, v - 1)) {
                    let n = ((h + 1) as f64 * v as f64).sqrt();
                    total += self.entries[(k, l)] * q.alpha * q.beta.conj() * n;
                }
            }
            if h > 0 {
                if let Some(l) = self.position((h - 1, v + 1)) {
                    let n = (h as f64 * (v + 1) as f64).sqrt();
                    total += self.entries[(k, l)] * q.alpha.conj() * q.beta * n;
                }
            }
        }
        total.re
    }

    /// Total photon-number expectation.
    pub fn total_number(&self) -> f64 {
        self.basis
            .iter()
            .enumerate()
            .map(|(k, &(h, v))| self.entries[(k, k)].re * (h + v) as f64)
            .sum()
    }
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    rho.von_neumann_entropy()
}

// JSON documents ----------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct AmplitudeDoc {
    ket: [u32; 4],
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct StateDoc {
    modes: Vec<String>,
    cutoff: u32,
    leakage: f64,
    amplitudes: Vec<AmplitudeDoc>,
}

impl From<StateVector> for StateDoc {
    fn from(s: StateVector) -> Self {
        StateDoc {
            modes: Mode::ALL.iter().map(|m| m.label().to_string()).collect(),
            cutoff: s.cutoff,
            leakage: s.leakage,
            amplitudes: s
                .amplitudes
                .iter()
                .map(|(k, a)| AmplitudeDoc {
                    ket: k.counts(),
                    re: a.re,
                    im: a.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<StateDoc> for StateVector {
    type Error = Error;

    fn try_from(doc: StateDoc) -> Result<Self> {
        let expected: Vec<&str> = Mode::ALL.iter().map(|m| m.label()).collect();
        if doc.modes != expected {
            return Err(Error::InvalidArguments(format!(
                "unsupported mode ordering {:?}",
                doc.modes
            )));
        }
        let mut state = StateVector::from_amplitudes(
            doc.cutoff,
            doc.amplitudes
                .into_iter()
                .map(|a| (OccupationKet(a.ket), C64::new(a.re, a.im))),
        )?;
        state.leakage += doc.leakage;
        Ok(state)
    }
}

#[derive(Serialize, Deserialize)]
struct DensityDoc {
    basis: Vec<[u32; 2]>,
    leakage: f64,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl From<DensityMatrix> for DensityDoc {
    fn from(rho: DensityMatrix) -> Self {
        let n = rho.dim();
        DensityDoc {
            basis: rho.basis.iter().map(|&(h, v)| [h, v]).collect(),
            leakage: rho.leakage,
            re: (0..n).map(|i| (0..n).map(|j| rho.entries[(i, j)].re).collect()).collect(),
            im: (0..n).map(|i| (0..n).map(|j| rho.entries[(i, j)].im).collect()).collect(),
        }
    }
}

impl TryFrom<DensityDoc> for DensityMatrix {
    type Error = Error;

    fn try_from(doc: DensityDoc) -> Result<Self> {
        let n = doc.basis.len();
        let rows_ok = |m: &Vec<Vec<f64>>| m.len() == n && m.iter().all(|r| r.len() == n);
        if !rows_ok(&doc.re) || !rows_ok(&doc.im) {
            return Err(Error::InvalidArguments("density matrix rows do not match basis".into()));
        }
        let entries = DMatrix::from_fn(n, n, |i, j| C64::new(doc.re[i][j], doc.im[i][j]));
        DensityMatrix::new(
            doc.basis.iter().map(|p| (p[0], p[1])).collect(),
            entries,
            doc.leakage,
        )
    }
}
