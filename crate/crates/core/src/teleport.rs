//! Teleportation of a Bloch qubit over the channel `α|00⟩ + β|11⟩`.
//!
//! The protocol is a typestate pipeline over three qubits ordered
//! (C, A, B): C is the input, A and B share the channel.
//!
//! ```text
//! Composed --measure--> Measured --send--> Message --correct--> Corrected
//! ```
//!
//! Measuring C and A in the Bell basis projects B onto
//! `(⟨φᵢ|_CA ⊗ I_B)|ψ⟩_CAB`; the squared norm of that vector is the Born
//! probability of outcome `i`. The two classical bits select the receiver's
//! correction.
//!
//! Monte Carlo runs draw from ChaCha20 streams. The root seed is expanded
//! with `ChaCha20Rng::seed_from_u64(seed)` and shot batch `b` of grid point
//! `p` runs on stream `(p << 32) | b`; every batch holds
//! [`SHOTS_PER_BATCH`] shots except the last. Results depend only on
//! `(seed, point, shots)`, never on how batches are spread across threads.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{tensor_vec, ComplexMatrix, StateVector, C64, ZERO};
use crate::qubit::{bell_basis, bloch_state, channel_state, pauli, BlochQubit, EntangledChannel, Pauli};
use crate::tol;

pub const SHOTS_PER_BATCH: u64 = 1 << 16;

/// Result of the Bell measurement on (C, A).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellOutcome {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] =
        [BellOutcome::PhiPlus, BellOutcome::PhiMinus, BellOutcome::PsiPlus, BellOutcome::PsiMinus];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    /// Two-bit classical message: 00 ↔ φ⁺, 01 ↔ φ⁻, 10 ↔ ψ⁺, 11 ↔ ψ⁻.
    pub fn bits(self) -> u8 {
        self as u8
    }

    pub fn from_bits(bits: u8) -> Option<Self> {
        Self::from_index(bits as usize)
    }

    pub fn bits_str(self) -> &'static str {
        ["00", "01", "10", "11"][self.index()]
    }

    pub fn name(self) -> &'static str {
        ["phi_plus", "phi_minus", "psi_plus", "psi_minus"][self.index()]
    }

    pub fn bell_vector(self) -> StateVector {
        bell_basis().vectors()[self.index()].clone()
    }
}

impl fmt::Display for BellOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for BellOutcome {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

/// Receiver's choice of unitary per measurement outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorrectionMap {
    /// φ⁺ → I, φ⁻ → σz, ψ⁺ → σx, ψ⁻ → iσy. Undoes every branch exactly on a
    /// maximal channel.
    #[default]
    Standard,
    /// φ⁺ → I, φ⁻ → σx, ψ⁺ → iσy, ψ⁻ → σz. A mismatched assignment kept for
    /// reproducing its (lower, φ-dependent) fidelity.
    ZetaListing,
}

impl CorrectionMap {
    pub fn operator(self, outcome: BellOutcome) -> ComplexMatrix {
        use BellOutcome::*;
        let which = match (self, outcome) {
            (_, PhiPlus) => return pauli(Pauli::I),
            (CorrectionMap::Standard, PhiMinus) => Pauli::Z,
            (CorrectionMap::Standard, PsiPlus) => Pauli::X,
            (CorrectionMap::Standard, PsiMinus) => return i_sigma_y(),
            (CorrectionMap::ZetaListing, PhiMinus) => Pauli::X,
            (CorrectionMap::ZetaListing, PsiPlus) => return i_sigma_y(),
            (CorrectionMap::ZetaListing, PsiMinus) => Pauli::Z,
        };
        pauli(which)
    }
}

fn i_sigma_y() -> ComplexMatrix {
    pauli(Pauli::Y).scale(C64::new(0.0, 1.0))
}

/// Correction for `outcome` under [`CorrectionMap::Standard`].
pub fn correction_operator(outcome: BellOutcome) -> ComplexMatrix {
    CorrectionMap::Standard.operator(outcome)
}

/// `|ψ⟩_C ⊗ (α|00⟩ + β|11⟩)_AB` as an 8-vector ordered C, A, B.
pub fn compose_initial(input: &BlochQubit, channel: &EntangledChannel) -> StateVector {
    tensor_vec(&bloch_state(input), &channel_state(channel)).expect("2 x 4 = 8 is supported")
}

/// Stage 1: the joint three-qubit state before measurement.
#[derive(Debug, Clone)]
pub struct Composed {
    state: StateVector,
}

impl Composed {
    pub fn new(input: &BlochQubit, channel: &EntangledChannel) -> Self {
        Self { state: compose_initial(input, channel) }
    }

    /// Any normalized (C, A, B) state.
    pub fn from_state(state: StateVector) -> Result<Self> {
        if state.dim() != 8 {
            return Err(Error::Shape(format!("expected a three-qubit state, got dimension {}", state.dim())));
        }
        Ok(Self { state })
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    /// `(⟨φᵢ|_CA ⊗ I_B)|ψ⟩`, unnormalized.
    fn project(&self, outcome: BellOutcome) -> [C64; 2] {
        let bell = outcome.bell_vector();
        let psi = self.state.amplitudes();
        let mut out = [ZERO; 2];
        for (ca, w) in bell.amplitudes().iter().enumerate() {
            for (b, slot) in out.iter_mut().enumerate() {
                *slot += w.conj() * psi[ca * 2 + b];
            }
        }
        out
    }

    /// Born probabilities `⟨ψ|(|φᵢ⟩⟨φᵢ| ⊗ I)|ψ⟩` for the four outcomes.
    pub fn born_probabilities(&self) -> [f64; 4] {
        BellOutcome::ALL.map(|o| self.project(o).iter().map(|z| z.norm_sqr()).sum())
    }

    /// Conditions the state on `outcome`.
    pub fn measure(&self, outcome: BellOutcome) -> Result<Measured> {
        let raw = self.project(outcome);
        let probability: f64 = raw.iter().map(|z| z.norm_sqr()).sum();
        if probability < tol::NORM {
            return Err(Error::DegenerateBranch { outcome: outcome.name(), probability });
        }
        let receiver = StateVector::normalized(raw.to_vec())?;
        Ok(Measured { outcome, probability, receiver })
    }
}

/// Stage 2: the Bell measurement has happened; B holds the collapsed state.
#[derive(Debug, Clone)]
pub struct Measured {
    pub outcome: BellOutcome,
    pub probability: f64,
    /// Normalized receiver state before correction.
    pub receiver: StateVector,
}

impl Measured {
    pub fn send(self) -> Message {
        Message { bits: self.outcome.bits(), receiver: self.receiver }
    }
}

/// Stage 3: the sender's two bits are in flight; the receiver only knows
/// the bits, not the outcome label.
#[derive(Debug, Clone)]
pub struct Message {
    pub bits: u8,
    receiver: StateVector,
}

impl Message {
    pub fn correct(self, map: CorrectionMap) -> Corrected {
        let outcome = BellOutcome::from_bits(self.bits).expect("bits come from a BellOutcome");
        let state = map.operator(outcome).apply(&self.receiver).expect("unitary on a qubit");
        Corrected { bits: self.bits, state }
    }
}

/// Stage 4: the receiver's corrected qubit.
#[derive(Debug, Clone)]
pub struct Corrected {
    pub bits: u8,
    pub state: StateVector,
}

/// Closed-form outcome probabilities:
/// `P(φ±) = ½(α²cos²(θ/2) + β²sin²(θ/2))`, `P(ψ±) = ½(α²sin²(θ/2) + β²cos²(θ/2))`.
pub fn branch_probabilities(input: &BlochQubit, channel: &EntangledChannel) -> [f64; 4] {
    let (s, c) = (input.theta() / 2.0).sin_cos();
    let (a2, b2) = (channel.alpha().powi(2), channel.beta().powi(2));
    let phi = 0.5 * (a2 * c * c + b2 * s * s);
    let psi = 0.5 * (a2 * s * s + b2 * c * c);
    [phi, phi, psi, psi]
}

/// Outcome probabilities by projecting the composed state.
pub fn born_probabilities(input: &BlochQubit, channel: &EntangledChannel) -> [f64; 4] {
    Composed::new(input, channel).born_probabilities()
}

/// Normalized receiver state for `outcome`, before correction.
pub fn collapse_branch(input: &BlochQubit, channel: &EntangledChannel, outcome: BellOutcome) -> Result<StateVector> {
    Ok(Composed::new(input, channel).measure(outcome)?.receiver)
}

pub fn corrected_output(input: &BlochQubit, channel: &EntangledChannel, outcome: BellOutcome) -> Result<StateVector> {
    corrected_output_with(input, channel, outcome, CorrectionMap::Standard)
}

pub fn corrected_output_with(
    input: &BlochQubit,
    channel: &EntangledChannel,
    outcome: BellOutcome,
    map: CorrectionMap,
) -> Result<StateVector> {
    let measured = Composed::new(input, channel).measure(outcome)?;
    Ok(measured.send().correct(map).state)
}

/// `Σᵢ Pᵢ |⟨ψ_C|ζᵢ⟩|²` evaluated by running every branch of the protocol.
pub fn average_fidelity(input: &BlochQubit, channel: &EntangledChannel) -> f64 {
    Teleporter::new(*input, *channel, CorrectionMap::Standard).average_fidelity()
}

pub fn average_fidelity_with(input: &BlochQubit, channel: &EntangledChannel, map: CorrectionMap) -> f64 {
    Teleporter::new(*input, *channel, map).average_fidelity()
}

/// `cos⁴(θ/2) + sin⁴(θ/2) + αβ sin²θ`.
pub fn closed_form_fidelity(input: &BlochQubit, channel: &EntangledChannel) -> f64 {
    let (s, c) = (input.theta() / 2.0).sin_cos();
    let st = input.theta().sin();
    c.powi(4) + s.powi(4) + channel.alpha() * channel.beta() * st * st
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchResult {
    pub outcome: BellOutcome,
    pub bits: &'static str,
    pub probability: f64,
    /// Norm of the unnormalized receiver vector, `√probability`.
    pub branch_norm: f64,
    pub receiver_state_raw: Option<StateVector>,
    pub receiver_state_corrected: Option<StateVector>,
    /// `|⟨ψ_C|ζᵢ⟩|²`; absent for a zero-probability branch.
    pub fidelity: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TeleportTranscript {
    pub input: BlochQubit,
    pub channel: EntangledChannel,
    pub correction: CorrectionMap,
    pub branches: Vec<BranchResult>,
    pub average_fidelity: f64,
    pub closed_form_fidelity: f64,
}

impl TeleportTranscript {
    pub fn per_branch_fidelity(&self) -> [Option<f64>; 4] {
        std::array::from_fn(|i| self.branches[i].fidelity)
    }

    pub fn probability_sum(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum()
    }
}

/// One sampled protocol run.
#[derive(Debug, Clone, Serialize)]
pub struct ShotRecord {
    pub outcome: BellOutcome,
    pub message_bits: u8,
    pub corrected_state: StateVector,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub shots: u64,
    pub seed: u64,
    pub mean: f64,
    pub stderr: f64,
    /// Outcome histogram in φ⁺, φ⁻, ψ⁺, ψ⁻ order.
    pub counts: [u64; 4],
}

/// RNG for shot batch `batch` of grid point `point` under root `seed`.
pub fn shot_stream(seed: u64, point: u32, batch: u32) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream((u64::from(point) << 32) | u64::from(batch));
    rng
}

/// All four branches of one (input, channel, correction) configuration,
/// evaluated once and reused for sampling.
#[derive(Debug, Clone)]
pub struct Teleporter {
    input: BlochQubit,
    channel: EntangledChannel,
    map: CorrectionMap,
    probabilities: [f64; 4],
    branches: Vec<BranchResult>,
}

impl Teleporter {
    pub fn new(input: BlochQubit, channel: EntangledChannel, map: CorrectionMap) -> Self {
        let composed = Composed::new(&input, &channel);
        let target = bloch_state(&input);
        let probabilities = composed.born_probabilities();
        let branches = BellOutcome::ALL
            .iter()
            .map(|&outcome| match composed.measure(outcome) {
                Ok(measured) => {
                    let probability = measured.probability;
                    let raw = measured.receiver.clone();
                    let corrected = measured.send().correct(map).state;
                    let fidelity = target.overlap(&corrected).expect("qubits").powi(2).min(1.0);
                    BranchResult {
                        outcome,
                        bits: outcome.bits_str(),
                        probability,
                        branch_norm: probability.sqrt(),
                        receiver_state_raw: Some(raw),
                        receiver_state_corrected: Some(corrected),
                        fidelity: Some(fidelity),
                    }
                }
                Err(_) => BranchResult {
                    outcome,
                    bits: outcome.bits_str(),
                    probability: probabilities[outcome.index()],
                    branch_norm: probabilities[outcome.index()].sqrt(),
                    receiver_state_raw: None,
                    receiver_state_corrected: None,
                    fidelity: None,
                },
            })
            .collect();
        Self { input, channel, map, probabilities, branches }
    }

    pub fn input(&self) -> &BlochQubit {
        &self.input
    }

    pub fn channel(&self) -> &EntangledChannel {
        &self.channel
    }

    pub fn correction(&self) -> CorrectionMap {
        self.map
    }

    pub fn probabilities(&self) -> [f64; 4] {
        self.probabilities
    }

    pub fn branch(&self, outcome: BellOutcome) -> &BranchResult {
        &self.branches[outcome.index()]
    }

    /// Zero-probability branches contribute nothing.
    pub fn average_fidelity(&self) -> f64 {
        self.branches.iter().map(|b| b.fidelity.map_or(0.0, |f| b.probability * f)).sum::<f64>().clamp(0.0, 1.0)
    }

    pub fn transcript(&self) -> TeleportTranscript {
        TeleportTranscript {
            input: self.input,
            channel: self.channel,
            correction: self.map,
            branches: self.branches.clone(),
            average_fidelity: self.average_fidelity(),
            closed_form_fidelity: closed_form_fidelity(&self.input, &self.channel),
        }
    }

    /// Draws a Bell outcome with the Born probabilities. Zero-probability
    /// outcomes are never returned.
    pub fn sample_outcome<R: Rng + ?Sized>(&self, rng: &mut R) -> BellOutcome {
        let u: f64 = rng.random::<f64>() * self.probabilities.iter().sum::<f64>();
        let mut acc = 0.0;
        let mut last = BellOutcome::PhiPlus;
        for o in BellOutcome::ALL {
            let p = self.probabilities[o.index()];
            if self.branches[o.index()].fidelity.is_none() {
                continue;
            }
            last = o;
            acc += p;
            if u < acc {
                return o;
            }
        }
        last
    }

    pub fn run_shot<R: Rng + ?Sized>(&self, rng: &mut R) -> ShotRecord {
        let outcome = self.sample_outcome(rng);
        let corrected = self.branches[outcome.index()]
            .receiver_state_corrected
            .clone()
            .expect("sampled branches are non-degenerate");
        ShotRecord { outcome, message_bits: outcome.bits(), corrected_state: corrected }
    }

    pub fn shot_fidelity(&self, outcome: BellOutcome) -> f64 {
        self.branches[outcome.index()].fidelity.unwrap_or(0.0)
    }

    /// Outcome histogram over `shots` draws, batched per the module's
    /// stream-splitting rule.
    pub fn sample_counts(&self, shots: u64, seed: u64, point: u32) -> [u64; 4] {
        let batches = shots.div_ceil(SHOTS_PER_BATCH);
        (0..batches)
            .into_par_iter()
            .map(|b| {
                let n = SHOTS_PER_BATCH.min(shots - b * SHOTS_PER_BATCH);
                let mut rng = shot_stream(seed, point, b as u32);
                let mut counts = [0u64; 4];
                for _ in 0..n {
                    counts[self.sample_outcome(&mut rng).index()] += 1;
                }
                counts
            })
            .reduce(|| [0; 4], |a, b| std::array::from_fn(|i| a[i] + b[i]))
    }

    /// Mean and standard error of the per-shot fidelity `|⟨ψ_C|ζ⟩|²`.
    /// Each shot's fidelity is determined by its outcome, so the sample
    /// statistics follow exactly from the outcome histogram.
    pub fn monte_carlo(&self, shots: u64, seed: u64, point: u32) -> Result<MonteCarloEstimate> {
        if shots == 0 {
            return Err(Error::Domain { parameter: "shots", value: 0.0, bound: "must be >= 1" });
        }
        if shots.div_ceil(SHOTS_PER_BATCH) > u64::from(u32::MAX) {
            return Err(Error::Domain { parameter: "shots", value: shots as f64, bound: "too many shots" });
        }
        let counts = self.sample_counts(shots, seed, point);
        let n = shots as f64;
        let mean = BellOutcome::ALL.iter().map(|&o| counts[o.index()] as f64 * self.shot_fidelity(o)).sum::<f64>() / n;
        let stderr = if shots > 1 {
            let ss: f64 = BellOutcome::ALL
                .iter()
                .map(|&o| counts[o.index()] as f64 * (self.shot_fidelity(o) - mean).powi(2))
                .sum();
            (ss / (n - 1.0)).sqrt() / n.sqrt()
        } else {
            0.0
        };
        Ok(MonteCarloEstimate { shots, seed, mean, stderr, counts })
    }
}

/// One protocol run with the standard correction.
pub fn run_shot<R: Rng + ?Sized>(input: &BlochQubit, channel: &EntangledChannel, rng: &mut R) -> ShotRecord {
    Teleporter::new(*input, *channel, CorrectionMap::Standard).run_shot(rng)
}

pub fn monte_carlo_fidelity(
    input: &BlochQubit,
    channel: &EntangledChannel,
    shots: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    Teleporter::new(*input, *channel, CorrectionMap::Standard).monte_carlo(shots, seed, 0)
}
