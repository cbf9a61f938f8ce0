//! Conditional spin preparation, the spin-controlled CNOT, the multi-photon
//! entangler, and the spin-assisted Bell-state analyzer.
//!
//! Register layout: photon `k` (from 1) owns `Polarization(k)` and
//! `Path(k)`; the spin is `Spin(0)`. Photons meet the spin one at a time.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::cavity::{CavityWiring, InteractionModel};
use crate::error::{Error, Result};
use crate::measurement::{record_distribution, Distribution, OutcomeRecord, PhotonOutcome};
use crate::optics::{ComponentOp, Element, Pipeline};
use crate::qstate::{fidelity, Basis, OperatorMatrix, RegisterKey, RegisterKind, RegisterLabel, StateVector};
use crate::scalar::{c_one, c_real, c_zero, cis, Amp, Real};

pub const SPIN_ID: usize = 0;
const SPIN: RegisterKey = (RegisterKind::Spin, SPIN_ID);

fn pol_key(k: usize) -> RegisterKey {
    (RegisterKind::Polarization, k)
}

fn path_key(k: usize) -> RegisterKey {
    (RegisterKind::Path, k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [BellState::PsiPlus, BellState::PsiMinus, BellState::PhiPlus, BellState::PhiMinus];

    pub fn name(self) -> &'static str {
        match self {
            BellState::PhiPlus => "phi+",
            BellState::PhiMinus => "phi-",
            BellState::PsiPlus => "psi+",
            BellState::PsiMinus => "psi-",
        }
    }

    /// `φ± = (RR ± LL)/√2`, `ψ± = (RL ± LR)/√2` on polarization registers
    /// of photons 1 and 2.
    pub fn state<T: Real>(self) -> StateVector<T> {
        let h = T::frac_1_sqrt_2();
        let z = T::zero();
        let a = match self {
            BellState::PhiPlus => [h, z, z, h],
            BellState::PhiMinus => [h, z, z, -h],
            BellState::PsiPlus => [z, h, h, z],
            BellState::PsiMinus => [z, h, -h, z],
        };
        StateVector::new(
            vec![RegisterLabel::polarization(1), RegisterLabel::polarization(2)],
            a.iter().map(|&x| c_real(x)).collect(),
        )
        .expect("bell state layout")
    }
}

impl fmt::Display for BellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BellState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phi+" => Ok(BellState::PhiPlus),
            "phi-" => Ok(BellState::PhiMinus),
            "psi+" => Ok(BellState::PsiPlus),
            "psi-" => Ok(BellState::PsiMinus),
            _ => Err(Error::InvalidInput(format!("unknown Bell state '{s}'"))),
        }
    }
}

/// Outcome of a protocol run, post-selected on the photons reaching their
/// detectors.
#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolResult<T: Real> {
    /// Normalized post-selected state.
    pub output_state: StateVector<T>,
    pub success_probability: T,
    /// Overlap fidelity with the ideal target.
    pub fidelity: T,
}

fn single_register<T: Real>(s: &StateVector<T>, kind: RegisterKind, what: &str) -> Result<[Amp<T>; 2]> {
    match s.registers() {
        [r] if r.kind() == kind => {
            let basis = Basis::native(kind).expect("two-level kind");
            let native = if Basis::of_register(r) == Some(basis) { s.clone() } else { s.change_basis(r.key(), basis)? };
            Ok([native.amplitudes()[0], native.amplitudes()[1]])
        }
        _ => Err(Error::InvalidInput(format!("{what} must be a single {kind:?} register"))),
    }
}

fn qubit<T: Real>(reg: RegisterLabel, a: [Amp<T>; 2]) -> StateVector<T> {
    StateVector::single(reg, a.to_vec()).expect("qubit layout")
}

fn port_ket<T: Real>(id: usize, ports: &[&str], at: &str) -> Result<StateVector<T>> {
    StateVector::basis_state(vec![RegisterLabel::path(id, ports)?], &[at])
}

/// Polarization qubit `α|R⟩ + β|L⟩` for photon 1.
pub fn photon_qubit<T: Real>(alpha: Amp<T>, beta: Amp<T>) -> StateVector<T> {
    qubit(RegisterLabel::polarization(1), [alpha, beta])
}

/// Spin qubit `γ|Up⟩ + δ|Down⟩`.
pub fn spin_qubit<T: Real>(gamma: Amp<T>, delta: Amp<T>) -> StateVector<T> {
    qubit(RegisterLabel::spin(SPIN_ID), [gamma, delta])
}

/// `|+⟩ = (|Up⟩ + |Down⟩)/√2`.
pub fn spin_plus<T: Real>() -> StateVector<T> {
    let h = c_real(T::frac_1_sqrt_2());
    spin_qubit(h, h)
}

// ---------------------------------------------------------------- CNOT

/// Modes of the CNOT circuit: input `A`, arms `B` (L) and `C` (R), output
/// `D`, plus one loss mode per cavity side for non-ideal models.
pub fn cnot_ports<T: Real>(model: &InteractionModel<T>) -> Vec<&'static str> {
    let mut p = vec!["A", "B", "C", "D"];
    if !model.is_ideal() {
        p.extend(["LossB", "LossC"]);
    }
    p
}

/// c-PBS split, π phase on arm C, cavity fed from both arms, π phase, c-PBS
/// merge.
pub fn cnot_pipeline<T: Real>(model: &InteractionModel<T>) -> Pipeline<T> {
    let mut wiring = CavityWiring::retro("B", "C");
    if !model.is_ideal() {
        wiring = wiring.with_losses(Some("LossB"), Some("LossC"));
    }
    let cpbs = ComponentOp::cpbs("A", "D", "C", "B");
    Pipeline::new(
        vec![
            cpbs.clone().into(),
            ComponentOp::phase("C", T::PI()).into(),
            Element::Cavity(wiring),
            ComponentOp::phase("C", T::PI()).into(),
            cpbs.into(),
        ],
        *model,
    )
}

/// `γ|↑⟩(α|R⟩ + β|L⟩) + δ|↓⟩(α|L⟩ + β|R⟩)` over `[Polarization(1), Spin]`.
pub fn cnot_target<T: Real>(photon: [Amp<T>; 2], spin: [Amp<T>; 2]) -> StateVector<T> {
    let [a, b] = photon;
    let [g, d] = spin;
    StateVector::new(
        vec![RegisterLabel::polarization(1), RegisterLabel::spin(SPIN_ID)],
        vec![g * a, d * b, g * b, d * a],
    )
    .expect("cnot layout")
}

/// Full pre-detection state of the CNOT circuit for photon 1 entering at `A`.
pub fn cnot_raw<T: Real>(
    photon: &StateVector<T>,
    spin: &StateVector<T>,
    model: &InteractionModel<T>,
) -> Result<StateVector<T>> {
    let p = single_register(photon, RegisterKind::Polarization, "cnot photon")?;
    let s = single_register(spin, RegisterKind::Spin, "cnot spin")?;
    let ports = cnot_ports(model);
    let input = qubit(RegisterLabel::polarization(1), p)
        .tensor(&port_ket(1, &ports, "A")?)?
        .tensor(&qubit(RegisterLabel::spin(SPIN_ID), s))?;
    cnot_pipeline(model).run(&input, 1, SPIN_ID)
}

/// Runs the CNOT circuit and post-selects the photon in output port `D`.
pub fn cnot<T: Real>(
    photon: &StateVector<T>,
    spin: &StateVector<T>,
    model: &InteractionModel<T>,
) -> Result<ProtocolResult<T>> {
    let raw = cnot_raw(photon, spin, model)?;
    let p = single_register(photon, RegisterKind::Polarization, "cnot photon")?;
    let s = single_register(spin, RegisterKind::Spin, "cnot spin")?;
    let norm_in = photon.norm_sqr() * spin.norm_sqr();
    let (at_d, prob) = raw.condition(&[(path_key(1), "D")])?;
    finish(at_d, prob / norm_in, &cnot_target(p, s))
}

fn finish<T: Real>(state: StateVector<T>, prob: T, target: &StateVector<T>) -> Result<ProtocolResult<T>> {
    let fid = fidelity(&state, target)?;
    let output_state = state.normalized().unwrap_or(state);
    Ok(ProtocolResult { output_state, success_probability: prob, fidelity: fid })
}

/// Gate induced on `[Polarization, Spin]` by the CNOT circuit, restricted
/// to photons leaving through `D`. Unitary for the ideal model.
pub fn cnot_gate_matrix<T: Real>(model: &InteractionModel<T>) -> Result<OperatorMatrix<T>> {
    let mut cols = Vec::new();
    for k in 0..4 {
        let mut p = [c_zero(); 2];
        let mut s = [c_zero(); 2];
        p[k / 2] = c_one();
        s[k % 2] = c_one();
        let raw = cnot_raw(&photon_qubit(p[0], p[1]), &spin_qubit(s[0], s[1]), model)?;
        let (at_d, _) = raw.condition(&[(path_key(1), "D")])?;
        cols.push(at_d.amplitudes().to_vec());
    }
    OperatorMatrix::from_columns(vec![RegisterLabel::polarization(1), RegisterLabel::spin(SPIN_ID)], &cols)
}

// ------------------------------------------------------------ entangler

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StreamOptions<T: Real> {
    /// Spin phase `φ` accumulated between consecutive photons: the spin
    /// picks up `e^{iφ}` on `|Down⟩` before every photon after the first.
    pub spin_phase: T,
}

impl<T: Real> Default for StreamOptions<T> {
    fn default() -> Self {
        Self { spin_phase: T::zero() }
    }
}

/// `γ|↑⟩ ⊗ₖ(αₖR + βₖL) + δ|↓⟩ ⊗ₖ(αₖL + βₖR)` over `[Pol(1..N), Spin]`.
pub fn stream_target<T: Real>(photons: &[[Amp<T>; 2]], spin: [Amp<T>; 2]) -> Result<StateVector<T>> {
    let mut up = StateVector::single(RegisterLabel::spin(SPIN_ID), vec![spin[0], c_zero()])?;
    let mut down = StateVector::single(RegisterLabel::spin(SPIN_ID), vec![c_zero(), spin[1]])?;
    for (k, [a, b]) in photons.iter().enumerate().rev() {
        let reg = RegisterLabel::polarization(k + 1);
        up = qubit(reg.clone(), [*a, *b]).tensor(&up)?;
        down = qubit(reg, [*b, *a]).tensor(&down)?;
    }
    up.add(&down)
}

fn dephase<T: Real>(s: &StateVector<T>, phi: T) -> Result<StateVector<T>> {
    if phi == T::zero() {
        return Ok(s.clone());
    }
    let reg = s.register(SPIN).cloned().ok_or_else(|| Error::MissingRegister("spin".into()))?;
    let op = OperatorMatrix::new(vec![reg], vec![c_one(), c_zero(), c_zero(), cis(phi)])?;
    s.apply(&op)
}

/// Sends the photons one after another through the CNOT circuit. Each
/// photon is post-selected on port `D` as it leaves, so the returned state
/// lives on `[Polarization(1..N), Spin]`.
pub fn entangle_stream<T: Real>(
    photons: &[StateVector<T>],
    spin: &StateVector<T>,
    model: &InteractionModel<T>,
    opts: &StreamOptions<T>,
) -> Result<ProtocolResult<T>> {
    if photons.is_empty() {
        return Err(Error::InvalidInput("photon stream is empty".into()));
    }
    let amps: Vec<[Amp<T>; 2]> = photons
        .iter()
        .map(|p| single_register(p, RegisterKind::Polarization, "stream photon"))
        .collect::<Result<_>>()?;
    let s = single_register(spin, RegisterKind::Spin, "stream spin")?;
    let pipe = cnot_pipeline(model);
    let ports = cnot_ports(model);

    let mut state = qubit(RegisterLabel::spin(SPIN_ID), s);
    let mut success = T::one();
    for (k, a) in amps.iter().enumerate() {
        let id = k + 1;
        if k > 0 {
            state = dephase(&state, opts.spin_phase)?;
        }
        let photon = qubit(RegisterLabel::polarization(id), *a).tensor(&port_ket(id, &ports, "A")?)?;
        let before = state.norm_sqr() * photon.norm_sqr();
        state = photon.tensor(&state)?;
        state = pipe.run(&state, id, SPIN_ID)?;
        let (kept, p) = state.condition(&[(path_key(id), "D")])?;
        if before > T::zero() {
            success = success * p / before;
        }
        state = kept;
    }
    let order: Vec<RegisterKey> = (1..=amps.len()).map(pol_key).chain(std::iter::once(SPIN)).collect();
    let state = state.reordered(&order)?;
    finish(state, success, &stream_target(&amps, s)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpinOutcome {
    Plus,
    Minus,
}

impl SpinOutcome {
    pub fn label(self) -> &'static str {
        match self {
            SpinOutcome::Plus => "Plus",
            SpinOutcome::Minus => "Minus",
        }
    }
}

impl fmt::Display for SpinOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpinOutcome::Plus => "+",
            SpinOutcome::Minus => "-",
        })
    }
}

/// `(|R⟩^⊗n ± |L⟩^⊗n)/√2` over `[Pol(1..n)]`.
pub fn ghz_target<T: Real>(n: usize, outcome: SpinOutcome) -> Result<StateVector<T>> {
    let regs: Vec<RegisterLabel> = (1..=n).map(RegisterLabel::polarization).collect();
    let mut amps = vec![c_zero(); 1 << n];
    let h = T::frac_1_sqrt_2();
    amps[0] = c_real(h);
    amps[(1 << n) - 1] = c_real(match outcome {
        SpinOutcome::Plus => h,
        SpinOutcome::Minus => -h,
    });
    StateVector::new(regs, amps)
}

/// Largest stream length accepted by [`ghz`].
pub const GHZ_MAX_PHOTONS: usize = 16;

/// Entangles `n` R-polarized photons with a spin in `|+⟩`, then measures
/// the spin in the `±` basis. Returns, per spin outcome, its probability
/// (given all photons detected) and the photonic result.
pub fn ghz<T: Real>(
    n: usize,
    model: &InteractionModel<T>,
    opts: &StreamOptions<T>,
) -> Result<BTreeMap<SpinOutcome, (T, ProtocolResult<T>)>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("GHZ needs at least 2 photons, got {n}")));
    }
    if n > GHZ_MAX_PHOTONS {
        return Err(Error::InvalidInput(format!("GHZ supports at most {GHZ_MAX_PHOTONS} photons, got {n}")));
    }
    let photons = vec![photon_qubit(c_one(), c_zero()); n];
    let stream = entangle_stream(&photons, &spin_plus(), model, opts)?;
    let rotated = stream.output_state.change_basis(SPIN, Basis::PlusMinus)?;
    let mut out = BTreeMap::new();
    for outcome in [SpinOutcome::Plus, SpinOutcome::Minus] {
        let (photonic, p) = rotated.condition(&[(SPIN, outcome.label())])?;
        let result = finish(photonic, stream.success_probability, &ghz_target(n, outcome)?)?;
        out.insert(outcome, (p, result));
    }
    Ok(out)
}

// ----------------------------------------------------- spin preparation

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Detection {
    /// Photon found flipped (`L`) back in the input mode.
    Reflected,
    /// Photon found unflipped (`R`) behind the cavity.
    Transmitted,
}

pub fn spin_prep_ports<T: Real>(model: &InteractionModel<T>) -> Vec<&'static str> {
    let mut p = vec!["A", "T"];
    if !model.is_ideal() {
        p.push("LossA");
    }
    p
}

fn spin_prep_wiring<T: Real>(model: &InteractionModel<T>) -> CavityWiring {
    let w = CavityWiring::single_input("A", "A", "T");
    if model.is_ideal() {
        w
    } else {
        w.with_losses(Some("LossA"), None)
    }
}

/// State after an `R` photon from below meets the spin, over
/// `[Polarization(1), Path(1), Spin]`. Ideal: `γ|L,A,↑⟩ − δ|R,T,↓⟩`.
pub fn spin_prep_state<T: Real>(spin: &StateVector<T>, model: &InteractionModel<T>) -> Result<StateVector<T>> {
    let s = single_register(spin, RegisterKind::Spin, "spin")?;
    let ports = spin_prep_ports(model);
    let input = photon_qubit(c_one(), c_zero())
        .tensor(&port_ket(1, &ports, "A")?)?
        .tensor(&qubit(RegisterLabel::spin(SPIN_ID), s))?;
    crate::cavity::lossy_scatter(&input, model, 1, SPIN_ID, &spin_prep_wiring(model))
}

/// Heralded spin preparation: per detection, the normalized spin state and
/// its probability.
pub fn conditional_spin_prep<T: Real>(
    spin: &StateVector<T>,
    model: &InteractionModel<T>,
) -> Result<BTreeMap<Detection, (StateVector<T>, T)>> {
    let s = spin_prep_state(spin, model)?;
    let mut out = BTreeMap::new();
    for (d, pol, port) in [(Detection::Reflected, "L", "A"), (Detection::Transmitted, "R", "T")] {
        let (post, p) = s.condition(&[(pol_key(1), pol), (path_key(1), port)])?;
        out.insert(d, (post.normalized().unwrap_or(post), p));
    }
    Ok(out)
}

// ------------------------------------------------------------------ BSA

/// Modes of the analyzer: input `A`, reflected arm `Rf` (split off by the
/// circulator), transmitted arm `T`, beamsplitter outputs `C` and `D`.
pub fn bsa_ports<T: Real>(model: &InteractionModel<T>) -> Vec<&'static str> {
    let mut p = vec!["A", "Rf", "T", "C", "D"];
    if !model.is_ideal() {
        p.push("LossA");
    }
    p
}

/// Cavity fed from below on `A`, mirror on the transmitted arm, 50/50
/// beamsplitter combining `T` and `Rf` onto `C` and `D`.
pub fn bsa_pipeline<T: Real>(model: &InteractionModel<T>) -> Pipeline<T> {
    let mut wiring = CavityWiring::single_input("A", "Rf", "T");
    if !model.is_ideal() {
        wiring = wiring.with_losses(Some("LossA"), None);
    }
    Pipeline::new(
        vec![Element::Cavity(wiring), ComponentOp::mirror("T").into(), ComponentOp::bs50("T", "Rf", "C", "D").into()],
        *model,
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct BsaResult<T: Real> {
    /// State after both photons, over `[Pol(1), Path(1), Pol(2), Path(2), Spin]`.
    pub state: StateVector<T>,
    /// Joint outcomes: photons in H/V and port, spin in ±.
    pub outcomes: Distribution<OutcomeRecord, T>,
    /// Probability that both photons are detected.
    pub success_probability: T,
    /// Bell-state identification, conditioned on success.
    pub posterior: Distribution<BellState, T>,
}

/// Two-photon input as `[Pol(1), Pol(2)]`, normalized to unit norm.
fn two_photon_input<T: Real>(s: &StateVector<T>) -> Result<StateVector<T>> {
    let ok = s.registers().len() == 2 && s.register(pol_key(1)).is_some() && s.register(pol_key(2)).is_some();
    if !ok {
        return Err(Error::InvalidInput("analyzer input must be polarization registers of photons 1 and 2".into()));
    }
    let mut s = s.reordered(&[pol_key(1), pol_key(2)])?;
    for k in [1, 2] {
        if Basis::of_register(s.register(pol_key(k)).expect("present")) != Some(Basis::RL) {
            s = s.change_basis(pol_key(k), Basis::RL)?;
        }
    }
    s.normalized().ok_or_else(|| Error::InvalidInput("analyzer input has zero norm".into()))
}

/// State after both photons pass the analyzer with the spin in `|+⟩`.
pub fn bsa_raw<T: Real>(two_photon: &StateVector<T>, model: &InteractionModel<T>) -> Result<StateVector<T>> {
    let input = two_photon_input(two_photon)?;
    let ports = bsa_ports(model);
    let full = input
        .tensor(&port_ket(1, &ports, "A")?)?
        .tensor(&port_ket(2, &ports, "A")?)?
        .tensor(&spin_plus())?
        .reordered(&[pol_key(1), path_key(1), pol_key(2), path_key(2), SPIN])?;
    let pipe = bsa_pipeline(model);
    let once = pipe.run(&full, 1, SPIN_ID)?;
    pipe.run(&once, 2, SPIN_ID)
}

pub fn bsa<T: Real>(two_photon: &StateVector<T>, model: &InteractionModel<T>) -> Result<BsaResult<T>> {
    let state = bsa_raw(two_photon, model)?;
    let outcomes = record_distribution(&state, &[1, 2], Basis::HV, SPIN_ID, Basis::PlusMinus)?;
    let detected = outcomes.filter(|r| !r.any_lost());
    let success_probability = detected.total();
    let mut posterior = Distribution::new();
    for (rec, p) in detected.iter() {
        if let Some(b) = classify_outcome(rec) {
            posterior.add(b, p);
        }
    }
    let posterior = posterior.normalized().unwrap_or_default();
    Ok(BsaResult { state, outcomes, success_probability, posterior })
}

/// Bell state signalled by a detection record; `None` if a photon was lost
/// or the record is not a two-photon H/V, ± readout.
pub fn classify_outcome(rec: &OutcomeRecord) -> Option<BellState> {
    let [PhotonOutcome::Detected { port: p1, pol: s1 }, PhotonOutcome::Detected { port: p2, pol: s2 }] =
        rec.photons.as_slice()
    else {
        return None;
    };
    let hv = |p: &str| p == "H" || p == "V";
    if !hv(s1) || !hv(s2) {
        return None;
    }
    let plus = match rec.spin.as_str() {
        "Plus" => true,
        "Minus" => false,
        _ => return None,
    };
    use BellState::*;
    Some(match (p1 == p2, s1 == s2, plus) {
        (true, true, true) => PsiPlus,
        (true, true, false) => PhiMinus,
        (true, false, true) => PsiMinus,
        (true, false, false) => PhiPlus,
        (false, true, false) => PsiMinus,
        (false, true, true) => PhiPlus,
        (false, false, false) => PsiPlus,
        (false, false, true) => PhiMinus,
    })
}
