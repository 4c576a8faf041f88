//! Monte-Carlo model of the four-fold coincidence measurement.
//!
//! A trial is one amplification event: the output of a pulse that emitted at
//! least one photon pair. With probability proportional to p·e₁ the pulse
//! overlapped the injected photon and the output is drawn from the injected
//! evolution; otherwise (weight (1−p)·e₀) it is spontaneous emission plus the
//! injected photon travelling unamplified. Here p is the injection overlap and
//! e₁, e₀ the probabilities of at least one pair in each case.
//!
//! Photon numbers are drawn in the frame of the injected qubit, so every
//! photon is either ψ or ψ⊥. The k1 photons are split by a beamsplitter into
//! arms a and b; detectors click when any incident photon is detected
//! (independent Bernoulli efficiencies) or on a dark count.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dynamics::{evolution_oracle, evolve_qubit, spdc_output};
use crate::error::{Error, Result};
use crate::fock::{OccupationKet, SpatialMode, StateVector};
use crate::params::{AmplifierParams, PolarizationQubit};
use crate::table::sig12;

/// Photon-number cutoff of the states photon counts are sampled from.
pub const SAMPLING_CUTOFF: u32 = 9;

/// Quantum efficiency of each detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorEfficiencies {
    /// Arm a of k1, behind the ψ analyzer.
    pub a: f64,
    /// Arm b of k1, ψ output.
    pub b: f64,
    /// Arm b of k1, ψ⊥ output.
    pub b_star: f64,
    /// k2, ψ⊥ output (all of k2 when cloning is measured).
    pub k2: f64,
    /// k2, ψ output.
    pub k2_star: f64,
    /// Trigger heralding the injected photon.
    pub trigger: f64,
}

impl DetectorEfficiencies {
    pub fn uniform(qe: f64) -> Self {
        Self {
            a: qe,
            b: qe,
            b_star: qe,
            k2: qe,
            k2_star: qe,
            trigger: qe,
        }
    }

    fn all(&self) -> [f64; 6] {
        [self.a, self.b, self.b_star, self.k2, self.k2_star, self.trigger]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorModel {
    pub qe: DetectorEfficiencies,
    /// Dark-count probability per detector per coincidence window.
    #[serde(default)]
    pub dark_prob: f64,
    /// Fraction of k1 photons sent to arm a.
    #[serde(default = "half")]
    pub beamsplitter_ratio: f64,
}

fn half() -> f64 {
    0.5
}

impl DetectorModel {
    pub fn ideal() -> Self {
        Self::uniform(1.0)
    }

    pub fn uniform(qe: f64) -> Self {
        Self {
            qe: DetectorEfficiencies::uniform(qe),
            dark_prob: 0.0,
            beamsplitter_ratio: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let probs = self
            .qe
            .all()
            .into_iter()
            .chain([self.dark_prob, self.beamsplitter_ratio]);
        for p in probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArguments(format!(
                    "detector probability {p} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}

mod qubit_text {
    use super::*;

    pub fn serialize<S: Serializer>(q: &PolarizationQubit, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{},{},{},{}", q.alpha.re, q.alpha.im, q.beta.re, q.beta.im))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<PolarizationQubit, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// One experimental run. The qubit is written as a preset (`H`, `V`, `D`,
/// `L`) or as `a_re,a_im,b_re,b_im`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(with = "qubit_text")]
    pub qubit: PolarizationQubit,
    pub params: AmplifierParams,
    pub trials: u64,
    pub seed: u64,
    #[serde(default)]
    pub z_offset: f64,
    #[serde(default = "one")]
    pub z_sigma: f64,
    /// Relative weight of pulses injected with two photons instead of one.
    #[serde(default)]
    pub double_injection: f64,
}

fn one() -> f64 {
    1.0
}

impl ExperimentConfig {
    pub fn new(qubit: PolarizationQubit, params: AmplifierParams, trials: u64, seed: u64) -> Self {
        Self {
            qubit,
            params,
            trials,
            seed,
            z_offset: 0.0,
            z_sigma: 1.0,
            double_injection: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        AmplifierParams::new(self.params.gain, self.params.phase)?;
        PolarizationQubit::new(self.qubit.alpha, self.qubit.beta)?;
        if !(self.z_sigma > 0.0) || !self.z_offset.is_finite() {
            return Err(Error::InvalidArguments("z_sigma must be positive and z_offset finite".into()));
        }
        if !(0.0..=1.0).contains(&self.double_injection) {
            return Err(Error::InvalidArguments("double_injection must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Gaussian pump/injection overlap exp(−z²/2σ²).
pub fn injection_overlap(z_offset: f64, z_sigma: f64) -> Result<f64> {
    if !(z_sigma > 0.0) {
        return Err(Error::InvalidArguments(format!("z_sigma must be positive, got {z_sigma}")));
    }
    Ok((-z_offset * z_offset / (2.0 * z_sigma * z_sigma)).exp())
}

/// Which half of the experiment is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measurement {
    /// k1 analyzed, k2 unanalyzed: [D2,DT,Da,Db] vs [D2,DT,Da,Db*].
    Clone,
    /// k1 unanalyzed, k2 analyzed: [D2,DT,Da,Db] vs [D2*,DT,Da,Db].
    Unot,
}

/// Photon numbers of one trial in the qubit frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PhotonCounts {
    pub k1_psi: u32,
    pub k1_perp: u32,
    pub k2_psi: u32,
    pub k2_perp: u32,
}

impl PhotonCounts {
    fn from_ket(k: &OccupationKet) -> Self {
        let [a, b, c, d] = k.counts();
        Self {
            k1_psi: a,
            k1_perp: b,
            k2_psi: c,
            k2_perp: d,
        }
    }
}

/// Distribution of photon counts conditioned on at least one emitted pair.
#[derive(Debug, Clone)]
pub struct PairSampler {
    outcomes: Vec<PhotonCounts>,
    cumulative: Vec<f64>,
    /// Probability of at least one pair before conditioning.
    pub emission_probability: f64,
    pub leakage: f64,
}

impl PairSampler {
    fn from_state(state: &StateVector, extra_k1_psi: u32) -> Self {
        let mut outcomes = Vec::new();
        let mut cumulative = Vec::new();
        let mut acc = 0.0;
        for (k, a) in state.iter() {
            if k.spatial_total(SpatialMode::K2) == 0 {
                continue;
            }
            acc += a.norm_sqr();
            let mut c = PhotonCounts::from_ket(k);
            c.k1_psi += extra_k1_psi;
            outcomes.push(c);
            cumulative.push(acc);
        }
        Self {
            outcomes,
            cumulative,
            emission_probability: acc,
            leakage: state.leakage(),
        }
    }

    pub fn outcomes(&self) -> impl Iterator<Item = (PhotonCounts, f64)> + '_ {
        let mut prev = 0.0;
        self.outcomes.iter().zip(&self.cumulative).map(move |(o, &c)| {
            let p = (c - prev) / self.emission_probability;
            prev = c;
            (*o, p)
        })
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> PhotonCounts {
        let u = rng.random::<f64>() * self.emission_probability;
        let i = self.cumulative.partition_point(|&c| c <= u).min(self.outcomes.len() - 1);
        self.outcomes[i]
    }
}

fn to_frame(state: &StateVector, qubit: &PolarizationQubit) -> StateVector {
    let m = qubit.frame();
    let inv = [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]];
    state
        .rotate_polarization(SpatialMode::K1, &inv)
        .rotate_polarization(SpatialMode::K2, &inv)
}

/// The mixture a trial is drawn from.
#[derive(Debug, Clone)]
pub struct TrialSource {
    pub branches: Vec<(f64, PairSampler)>,
}

impl TrialSource {
    pub fn new(config: &ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let p = injection_overlap(config.z_offset, config.z_sigma)?;
        let q = &config.qubit;
        let injected = PairSampler::from_state(
            &to_frame(&evolve_qubit(q, &config.params, SAMPLING_CUTOFF)?, q),
            0,
        );
        let background = PairSampler::from_state(
            &to_frame(&spdc_output(&config.params, SAMPLING_CUTOFF)?, q),
            1,
        );
        let mut branches = vec![
            (p * (1.0 - config.double_injection) * injected.emission_probability, injected),
            ((1.0 - p) * background.emission_probability, background),
        ];
        if config.double_injection > 0.0 {
            let pair_in = StateVector::basis(OccupationKet::new(2, 0, 0, 0), SAMPLING_CUTOFF + 1)?
                .rotate_polarization(SpatialMode::K1, &q.frame());
            let out = evolution_oracle(&pair_in, &config.params, SAMPLING_CUTOFF + 1)?;
            let double = PairSampler::from_state(&to_frame(&out, q), 0);
            branches.push((p * config.double_injection * double.emission_probability, double));
        }
        let total: f64 = branches.iter().map(|b| b.0).sum();
        branches.retain(|b| b.0 > 0.0);
        if !(total > 0.0) {
            return Err(Error::InsufficientStatistics { signal: 0, noise: 0 });
        }
        for b in &mut branches {
            b.0 /= total;
        }
        Ok(Self { branches })
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> PhotonCounts {
        let mut u: f64 = rng.random();
        for (w, s) in &self.branches {
            if u < *w {
                return s.sample(rng);
            }
            u -= w;
        }
        self.branches.last().expect("non-empty mixture").1.sample(rng)
    }

    pub fn leakage(&self) -> f64 {
        self.branches.iter().map(|(w, s)| w * s.leakage).sum()
    }
}

#[derive(Default)]
struct Clicks {
    a: bool,
    b: bool,
    b_star: bool,
    k2: bool,
    k2_star: bool,
    trigger: bool,
}

fn detect<R: Rng + ?Sized>(rng: &mut R, photons: u32, qe: f64) -> bool {
    (0..photons).any(|_| rng.random::<f64>() < qe)
}

/// Routes one trial's photons to the detectors of `measurement`.
fn detect_trial<R: Rng + ?Sized>(
    rng: &mut R,
    c: PhotonCounts,
    det: &DetectorModel,
    measurement: Measurement,
) -> Clicks {
    let t = det.beamsplitter_ratio;
    let qe = &det.qe;
    let mut split = |n: u32| {
        let to_a = (0..n).filter(|_| rng.random::<f64>() < t).count() as u32;
        (to_a, n - to_a)
    };
    let (psi_a, psi_b) = split(c.k1_psi);
    let (perp_a, perp_b) = split(c.k1_perp);
    let mut k = Clicks::default();
    match measurement {
        Measurement::Clone => {
            k.a = detect(rng, psi_a, qe.a);
            k.b = detect(rng, psi_b, qe.b);
            k.b_star = detect(rng, perp_b, qe.b_star);
            k.k2 = detect(rng, c.k2_psi + c.k2_perp, qe.k2);
        }
        Measurement::Unot => {
            k.a = detect(rng, psi_a + perp_a, qe.a);
            k.b = detect(rng, psi_b + perp_b, qe.b);
            k.k2 = detect(rng, c.k2_perp, qe.k2);
            k.k2_star = detect(rng, c.k2_psi, qe.k2_star);
        }
    }
    k.trigger = rng.random::<f64>() < qe.trigger;
    if det.dark_prob > 0.0 {
        for flag in [&mut k.a, &mut k.b, &mut k.b_star, &mut k.k2, &mut k.k2_star, &mut k.trigger] {
            *flag |= rng.random::<f64>() < det.dark_prob;
        }
    }
    k
}

/// Raw counts and estimates from one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub measurement: Measurement,
    pub trials: u64,
    pub signal: u64,
    pub noise: u64,
    /// R̂ for cloning runs, R̂* for flipping runs.
    pub ratio: f64,
    pub ratio_se: f64,
    /// F̂ for cloning runs, F̂* for flipping runs.
    pub fidelity: f64,
    pub fidelity_se: f64,
    pub injection_overlap: f64,
    pub leakage: f64,
}

/// Signal and noise coincidence counts for `trials` trials.
pub fn count_coincidences(
    config: &ExperimentConfig,
    detectors: &DetectorModel,
    measurement: Measurement,
) -> Result<(u64, u64, TrialSource)> {
    detectors.validate()?;
    let source = TrialSource::new(config)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (mut signal, mut noise) = (0u64, 0u64);
    for _ in 0..config.trials {
        let photons = source.sample(&mut rng);
        let k = detect_trial(&mut rng, photons, detectors, measurement);
        if !(k.trigger && k.a) {
            continue;
        }
        match measurement {
            Measurement::Clone if k.k2 => {
                signal += (k.b) as u64;
                noise += (k.b_star) as u64;
            }
            Measurement::Unot if k.b => {
                signal += (k.k2) as u64;
                noise += (k.k2_star) as u64;
            }
            _ => {}
        }
    }
    Ok((signal, noise, source))
}

fn run(config: &ExperimentConfig, detectors: &DetectorModel, measurement: Measurement) -> Result<RunReport> {
    let (signal, noise, source) = count_coincidences(config, detectors, measurement)?;
    if signal == 0 || noise == 0 {
        return Err(Error::InsufficientStatistics { signal, noise });
    }
    let qe = &detectors.qe;
    let (scale, fid, dfid): (f64, fn(f64) -> f64, fn(f64) -> f64) = match measurement {
        // A |ψψ⟩ pair reaches (a, b) twice as often as |ψψ⊥⟩ reaches (a, b*).
        Measurement::Clone => (
            qe.b_star / (2.0 * qe.b),
            |r| (2.0 * r + 1.0) / (2.0 * r + 2.0),
            |r| 1.0 / (2.0 * (r + 1.0).powi(2)),
        ),
        Measurement::Unot => (qe.k2_star / qe.k2, |r| r / (r + 1.0), |r| 1.0 / (r + 1.0).powi(2)),
    };
    let ratio = scale * signal as f64 / noise as f64;
    let n = config.trials as f64;
    let (ps, pn) = (signal as f64 / n, noise as f64 / n);
    let ratio_se = ratio * ((1.0 - ps) / signal as f64 + (1.0 - pn) / noise as f64).sqrt();
    Ok(RunReport {
        measurement,
        trials: config.trials,
        signal,
        noise,
        ratio,
        ratio_se,
        fidelity: fid(ratio),
        fidelity_se: dfid(ratio) * ratio_se,
        injection_overlap: injection_overlap(config.z_offset, config.z_sigma)?,
        leakage: source.leakage(),
    })
}

/// Cloning run: R̂ from [D2,DT,Da,Db] against [D2,DT,Da,Db*], F̂ = (2R̂+1)/(2R̂+2).
pub fn simulate_cloning_run(config: &ExperimentConfig, detectors: &DetectorModel) -> Result<RunReport> {
    run(config, detectors, Measurement::Clone)
}

/// Flipping run: R̂* from [D2,DT,Da,Db] against [D2*,DT,Da,Db], F̂* = R̂*/(R̂*+1).
pub fn simulate_unot_run(config: &ExperimentConfig, detectors: &DetectorModel) -> Result<RunReport> {
    run(config, detectors, Measurement::Unot)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZScanRow {
    pub z: f64,
    pub signal: u64,
    pub noise: u64,
    /// `None` when the noise count is zero.
    pub ratio: Option<f64>,
}

/// One run per mirror position; point i uses seed `config.seed ^ i`.
pub fn z_scan(
    config: &ExperimentConfig,
    detectors: &DetectorModel,
    measurement: Measurement,
    z_grid: &[f64],
) -> Result<Vec<ZScanRow>> {
    if z_grid.is_empty() {
        return Err(Error::InvalidArguments("z grid is empty".into()));
    }
    z_grid
        .par_iter()
        .enumerate()
        .map(|(i, &z)| {
            let mut c = *config;
            c.z_offset = z;
            c.seed = config.seed ^ i as u64;
            match run(&c, detectors, measurement) {
                Ok(r) => Ok(ZScanRow {
                    z,
                    signal: r.signal,
                    noise: r.noise,
                    ratio: Some(r.ratio),
                }),
                Err(Error::InsufficientStatistics { signal, noise }) => Ok(ZScanRow {
                    z,
                    signal,
                    noise,
                    ratio: None,
                }),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// Writes the scan with `#` header lines carrying the configuration.
pub fn write_z_scan_csv<W: Write>(
    rows: &[ZScanRow],
    config: &ExperimentConfig,
    detectors: &DetectorModel,
    measurement: Measurement,
    mut out: W,
) -> std::io::Result<()> {
    let cfg = serde_json::to_string(config).map_err(std::io::Error::other)?;
    let det = serde_json::to_string(detectors).map_err(std::io::Error::other)?;
    writeln!(out, "# config: {cfg}")?;
    writeln!(out, "# detectors: {det}")?;
    writeln!(out, "# measurement: {measurement:?}; seed {} (point i uses seed ^ i)", config.seed)?;
    writeln!(out, "z,counts_signal,counts_noise,R")?;
    for r in rows {
        let ratio = r.ratio.map_or("nan".to_string(), sig12);
        writeln!(out, "{},{},{},{ratio}", sig12(r.z), r.signal, r.noise)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(trials: u64) -> ExperimentConfig {
        ExperimentConfig::new(
            PolarizationQubit::h(),
            AmplifierParams::universal(0.11).unwrap(),
            trials,
            42,
        )
    }

    #[test]
    fn overlap_envelope() {
        assert_eq!(injection_overlap(0.0, 2.0).unwrap(), 1.0);
        assert!((injection_overlap(2.0, 2.0).unwrap() - (-0.5f64).exp()).abs() < 1e-15);
        assert!(injection_overlap(1e3, 1.0).unwrap() < 1e-300);
        assert!(injection_overlap(0.0, 0.0).is_err());
    }

    #[test]
    fn sampler_is_conditioned_on_emission() {
        let src = TrialSource::new(&config(1)).unwrap();
        assert_eq!(src.branches.len(), 1);
        let s = &src.branches[0].1;
        let p = AmplifierParams::universal(0.11).unwrap();
        assert!((s.emission_probability + s.leakage - (1.0 - p.cosh().powi(-6))).abs() < 1e-12, "{} {}", s.emission_probability, s.leakage);
        let total: f64 = s.outcomes().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(s.outcomes().all(|(c, _)| c.k2_psi + c.k2_perp >= 1));
    }

    #[test]
    fn ideal_cloning_run() {
        let r = simulate_cloning_run(&config(200_000), &DetectorModel::ideal()).unwrap();
        assert!((r.ratio - 2.0).abs() < 0.1, "{r:?}");
        assert!((r.fidelity - 5.0 / 6.0).abs() < 0.02);
    }

    #[test]
    fn ideal_unot_run() {
        let r = simulate_unot_run(&config(200_000), &DetectorModel::ideal()).unwrap();
        assert!((r.ratio - 2.0).abs() < 0.1, "{r:?}");
    }

    #[test]
    fn background_only_ratio_is_one() {
        let mut c = config(200_000);
        c.z_offset = 50.0;
        let r = simulate_cloning_run(&c, &DetectorModel::ideal()).unwrap();
        assert!((r.ratio - 1.0).abs() < 0.06, "{r:?}");
    }

    #[test]
    fn insufficient_statistics() {
        assert!(matches!(
            simulate_cloning_run(&config(0), &DetectorModel::ideal()),
            Err(Error::InsufficientStatistics { signal: 0, noise: 0 })
        ));
        assert!(matches!(
            simulate_unot_run(&config(1000), &DetectorModel::uniform(0.0)),
            Err(Error::InsufficientStatistics { .. })
        ));
    }

    #[test]
    fn runs_are_reproducible() {
        let d = DetectorModel::uniform(0.55);
        let a = simulate_unot_run(&config(20_000), &d).unwrap();
        let b = simulate_unot_run(&config(20_000), &d).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn z_scan_shape() {
        let grid: Vec<f64> = (0..9).map(|i| -2.0 + 0.5 * i as f64).collect();
        let rows = z_scan(&config(20_000), &DetectorModel::ideal(), Measurement::Unot, &grid).unwrap();
        assert_eq!(rows.len(), 9);
        let peak = rows.iter().max_by_key(|r| r.signal).unwrap();
        assert!(peak.z.abs() <= 0.5);
        let again = z_scan(&config(20_000), &DetectorModel::ideal(), Measurement::Unot, &grid).unwrap();
        assert_eq!(rows, again);
        let mut buf = Vec::new();
        write_z_scan_csv(&rows, &config(20_000), &DetectorModel::ideal(), Measurement::Unot, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# config: "));
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 10);
        assert!(z_scan(&config(10), &DetectorModel::ideal(), Measurement::Unot, &[]).is_err());
    }

    #[test]
    fn config_json() {
        let text = r#"{"qubit":"D","params":{"gain":0.11,"phase":0.0},"trials":10,"seed":1}"#;
        let c: ExperimentConfig = serde_json::from_str(text).unwrap();
        assert_eq!(c.qubit, PolarizationQubit::d());
        assert_eq!(c.z_sigma, 1.0);
        let back: ExperimentConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert!((back.qubit.alpha - c.qubit.alpha).norm() < 1e-15);
        let bad = r#"{"qubit":"2,0,0,0","params":{"gain":0.11,"phase":0.0},"trials":10,"seed":1}"#;
        assert!(serde_json::from_str::<ExperimentConfig>(bad).is_err());
    }

    #[test]
    fn double_injection_knob() {
        let mut c = config(10);
        c.double_injection = 0.01;
        let src = TrialSource::new(&c).unwrap();
        assert_eq!(src.branches.len(), 2);
        let two = &src.branches[1].1;
        assert!(two.outcomes().all(|(o, _)| o.k1_psi + o.k1_perp >= 3));
    }
}
