//! Cavity scattering: complex reflection/transmission coefficients of a
//! dipole-loaded cavity, the transmission-contrast figure of merit, and the
//! spin-selective scattering operator acting on one photon and the spin.
//!
//! Direction bookkeeping: a photon on the `below` side travels up (+z) into
//! the cavity, one on the `above` side travels down. With polarization
//! labeled by handedness relative to propagation, `R` from below and `L`
//! from above carry photon spin `s_z = +1` and couple to spin `Up`; `L` from
//! below and `R` from above carry `s_z = −1` and couple to spin `Down`.
//! Coupled photons are reflected with the handedness flipped; uncoupled
//! photons are transmitted with a factor −1.

use std::fmt;

use crate::error::{Error, Result};
use crate::qstate::{OperatorMatrix, RegisterKey, RegisterKind, RegisterLabel, StateVector};
use crate::scalar::{c, c_one, c_real, c_zero, Amp, Real};

/// Physical inputs of the weak-field cavity response. Rates in rad/s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CavityParams<T: Real> {
    /// Detuning between photon and dipole transition.
    pub delta_omega: T,
    /// Detuning between cavity mode and dipole transition.
    pub delta: T,
    /// Coupling to the input/output ports; must be positive.
    pub kappa: T,
    /// Vacuum Rabi coupling.
    pub g: T,
}

impl<T: Real> CavityParams<T> {
    pub fn new(delta_omega: T, delta: T, kappa: T, g: T) -> Result<Self> {
        let p = Self { delta_omega, delta, kappa, g };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let all = [self.delta_omega, self.delta, self.kappa, self.g];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidCavityParams("parameters must be finite".into()));
        }
        if self.kappa <= T::zero() {
            return Err(Error::InvalidCavityParams(format!("kappa must be > 0, got {}", self.kappa)));
        }
        if self.g < T::zero() {
            return Err(Error::InvalidCavityParams(format!("g must be >= 0, got {}", self.g)));
        }
        Ok(())
    }

    /// Dipole decay rate into the cavity mode, `Γ = 2g²/κ`.
    pub fn gamma(&self) -> T {
        T::lit(2.0) * self.g * self.g / self.kappa
    }
}

/// The dimensionless detuning parameter ξ, or its divergent limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Xi<T: Real> {
    Finite(Amp<T>),
    /// `Δω → 0` with `Γ > 0`: the coupled cavity reflects perfectly.
    Infinite,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScatterCoefficients<T: Real> {
    pub r: Amp<T>,
    pub t: Amp<T>,
    pub xi: Xi<T>,
}

impl<T: Real> ScatterCoefficients<T> {
    /// `r = iξ/(1+iξ)`, `t = −1/(1+iξ)`.
    pub fn from_xi(xi: Amp<T>) -> Self {
        let i = c(T::zero(), T::one());
        let denom = c_one::<T>() + i * xi;
        Self { r: i * xi / denom, t: -c_one::<T>() / denom, xi: Xi::Finite(xi) }
    }

    pub fn reflectance(&self) -> T {
        self.r.norm_sqr()
    }

    pub fn transmittance(&self) -> T {
        self.t.norm_sqr()
    }
}

/// Reflection and transmission amplitudes of the dipole-loaded cavity.
///
/// `ξ = (Δω + δ)/κ − Γ/(2Δω)`. At `Δω = 0` the second term is only defined
/// as a limit: for `Γ > 0` the result is flagged [`Xi::Infinite`] with
/// `(r, t) = (1, 0)`; for `Γ = 0` the term is absent.
pub fn scatter_coefficients<T: Real>(p: &CavityParams<T>) -> Result<ScatterCoefficients<T>> {
    p.validate()?;
    let gamma = p.gamma();
    if p.delta_omega == T::zero() {
        if gamma > T::zero() {
            return Ok(ScatterCoefficients { r: c_one(), t: c_zero(), xi: Xi::Infinite });
        }
        return Ok(ScatterCoefficients::from_xi(c_real(p.delta / p.kappa)));
    }
    let xi = (p.delta_omega + p.delta) / p.kappa - gamma / (T::lit(2.0) * p.delta_omega);
    Ok(ScatterCoefficients::from_xi(c_real(xi)))
}

/// Propagation loss coefficients of a micropillar, in 1/cm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossCoefficients<T: Real> {
    /// Escape through the output mirror.
    pub alpha_m: T,
    pub alpha_scat: T,
    pub alpha_rad: T,
}

/// `(Q/Q0)² = (α_m / (α_m + α_scat + α_rad))²`.
pub fn quality_ratio_from_losses<T: Real>(alpha_m: T, alpha_scat: T, alpha_rad: T) -> Result<T> {
    let all = [alpha_m, alpha_scat, alpha_rad];
    if all.iter().any(|a| !a.is_finite() || *a < T::zero()) {
        return Err(Error::InvalidContrastParams("loss coefficients must be finite and >= 0".into()));
    }
    if alpha_m == T::zero() {
        return Err(Error::InvalidContrastParams("alpha_m must be > 0".into()));
    }
    let ratio = alpha_m / (alpha_m + alpha_scat + alpha_rad);
    Ok(ratio * ratio)
}

/// Inputs of the transmission-contrast model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContrastParams<T: Real> {
    q_ratio_sq: T,
    purcell: T,
    losses: Option<LossCoefficients<T>>,
}

impl<T: Real> ContrastParams<T> {
    pub fn new(q_ratio_sq: T, purcell: T) -> Result<Self> {
        if !q_ratio_sq.is_finite() || q_ratio_sq < T::zero() || q_ratio_sq > T::one() {
            return Err(Error::InvalidContrastParams(format!("(Q/Q0)^2 must lie in [0, 1], got {q_ratio_sq}")));
        }
        if purcell.is_nan() || purcell < T::zero() {
            return Err(Error::InvalidContrastParams(format!("Purcell factor must be >= 0, got {purcell}")));
        }
        Ok(Self { q_ratio_sq, purcell, losses: None })
    }

    pub fn from_losses(losses: LossCoefficients<T>, purcell: T) -> Result<Self> {
        let q = quality_ratio_from_losses(losses.alpha_m, losses.alpha_scat, losses.alpha_rad)?;
        Ok(Self { losses: Some(losses), ..Self::new(q, purcell)? })
    }

    pub fn q_ratio_sq(&self) -> T {
        self.q_ratio_sq
    }

    pub fn purcell(&self) -> T {
        self.purcell
    }

    pub fn losses(&self) -> Option<&LossCoefficients<T>> {
        self.losses.as_ref()
    }

    /// Transmission of the uncoupled cavity, `(Q/Q0)²`.
    pub fn t_max(&self) -> T {
        self.q_ratio_sq
    }

    /// Transmission of the coupled cavity, `T_max / (1 + F_P)²`.
    pub fn t_min(&self) -> T {
        if self.purcell.is_infinite() {
            return T::zero();
        }
        let s = T::one() / (T::one() + self.purcell);
        self.q_ratio_sq * s * s
    }
}

/// `Δ = T_max − T_min = (Q/Q0)² · [1 − (1/(1+F_P))²]`.
pub fn transmission_contrast<T: Real>(c: &ContrastParams<T>) -> T {
    c.t_max() - c.t_min()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelMode {
    Ideal,
    Lossy,
}

/// Amplitude magnitudes of the two scattering branches.
///
/// Phases are fixed: coupled reflection `+|r|`, coupled transmission
/// `+i|t|`, uncoupled transmission `−|t|`, uncoupled reflection `+i|r|`.
/// The `i` on the secondary channels keeps the two-sided scattering block a
/// contraction. Whatever is missing from `|r|² + |t|²` is routed to the
/// side's loss port.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InteractionModel<T: Real> {
    mode: ModelMode,
    coupled_reflect: T,
    coupled_transmit: T,
    uncoupled_transmit: T,
    uncoupled_reflect: T,
}

pub(crate) struct Branch<T: Real> {
    pub reflect: Amp<T>,
    pub transmit: Amp<T>,
    pub loss: T,
}

impl<T: Real> Default for InteractionModel<T> {
    fn default() -> Self {
        Self::ideal()
    }
}

impl<T: Real> InteractionModel<T> {
    pub fn ideal() -> Self {
        Self {
            mode: ModelMode::Ideal,
            coupled_reflect: T::one(),
            coupled_transmit: T::zero(),
            uncoupled_transmit: T::one(),
            uncoupled_reflect: T::zero(),
        }
    }

    pub fn lossy(coupled_reflect: T, coupled_transmit: T, uncoupled_transmit: T, uncoupled_reflect: T) -> Result<Self> {
        let m =
            Self { mode: ModelMode::Lossy, coupled_reflect, coupled_transmit, uncoupled_transmit, uncoupled_reflect };
        m.validate()?;
        Ok(m)
    }

    /// Amplitude model for given contrast inputs: uncoupled transmission
    /// `√T_max`, coupled transmission `√T_min`, coupled reflection
    /// `√(1 − T_min − L)` with leak `L = 1 − T_max` on both branches, and no
    /// uncoupled reflection.
    pub fn from_contrast(cp: &ContrastParams<T>) -> Self {
        let leak = T::one() - cp.t_max();
        let reflect = (T::one() - cp.t_min() - leak).max(T::zero()).sqrt();
        Self {
            mode: ModelMode::Lossy,
            coupled_reflect: reflect,
            coupled_transmit: cp.t_min().sqrt(),
            uncoupled_transmit: cp.t_max().sqrt(),
            uncoupled_reflect: T::zero(),
        }
    }

    /// Moves from `self` (λ = 0) to `target` (λ = 1) by mixing intensities:
    /// each squared amplitude is linear in λ, so every branch's survival
    /// probability changes linearly and stays within `[0, 1]`.
    pub fn interpolate(&self, target: &Self, lambda: T) -> Result<Self> {
        if !(T::zero()..=T::one()).contains(&lambda) {
            return Err(Error::InvalidModel(format!("interpolation parameter {lambda} outside [0, 1]")));
        }
        if lambda == T::zero() {
            return Ok(*self);
        }
        let mix = |a: T, b: T| (a * a + lambda * (b * b - a * a)).max(T::zero()).sqrt();
        Self::lossy(
            mix(self.coupled_reflect, target.coupled_reflect),
            mix(self.coupled_transmit, target.coupled_transmit),
            mix(self.uncoupled_transmit, target.uncoupled_transmit),
            mix(self.uncoupled_reflect, target.uncoupled_reflect),
        )
    }

    pub fn validate(&self) -> Result<()> {
        let amps = [self.coupled_reflect, self.coupled_transmit, self.uncoupled_transmit, self.uncoupled_reflect];
        if amps.iter().any(|a| !a.is_finite() || *a < T::zero() || *a > T::one()) {
            return Err(Error::InvalidModel("amplitudes must lie in [0, 1]".into()));
        }
        let slack = T::lit(1e-12);
        for (name, r, t) in [
            ("coupled", self.coupled_reflect, self.coupled_transmit),
            ("uncoupled", self.uncoupled_reflect, self.uncoupled_transmit),
        ] {
            if r * r + t * t > T::one() + slack {
                return Err(Error::InvalidModel(format!("{name} branch has reflect^2 + transmit^2 > 1")));
            }
        }
        if self.mode == ModelMode::Ideal && *self != Self::ideal() {
            return Err(Error::InvalidModel("ideal mode requires amplitudes (1, 0, 1, 0)".into()));
        }
        Ok(())
    }

    pub fn mode(&self) -> ModelMode {
        self.mode
    }

    pub fn is_ideal(&self) -> bool {
        self.mode == ModelMode::Ideal
    }

    pub fn coupled_reflect(&self) -> T {
        self.coupled_reflect
    }

    pub fn coupled_transmit(&self) -> T {
        self.coupled_transmit
    }

    pub fn uncoupled_transmit(&self) -> T {
        self.uncoupled_transmit
    }

    pub fn uncoupled_reflect(&self) -> T {
        self.uncoupled_reflect
    }

    /// Probability that a photon on the given branch is not lost.
    pub fn survival(&self, coupled: bool) -> T {
        let (r, t) = if coupled {
            (self.coupled_reflect, self.coupled_transmit)
        } else {
            (self.uncoupled_reflect, self.uncoupled_transmit)
        };
        r * r + t * t
    }

    pub(crate) fn branch(&self, coupled: bool) -> Branch<T> {
        let loss = (T::one() - self.survival(coupled)).max(T::zero()).sqrt();
        if coupled {
            Branch { reflect: c_real(self.coupled_reflect), transmit: c(T::zero(), self.coupled_transmit), loss }
        } else {
            Branch { reflect: c(T::zero(), self.uncoupled_reflect), transmit: c_real(-self.uncoupled_transmit), loss }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Below,
    Above,
}

impl Side {
    fn other(self) -> Side {
        match self {
            Side::Below => Side::Above,
            Side::Above => Side::Below,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Below => "below",
            Side::Above => "above",
        })
    }
}

/// Ports on one side of the cavity. `input` is the mode that feeds the
/// cavity from this side (if any), `output` receives photons leaving on this
/// side (reflected from this side or transmitted from the other), `loss`
/// receives photons lost while entering from this side.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CavitySide {
    pub input: Option<String>,
    pub output: String,
    pub loss: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CavityWiring {
    pub below: CavitySide,
    pub above: CavitySide,
}

impl CavityWiring {
    /// Both sides fed; reflected light returns along the arm it came from.
    pub fn retro(below: &str, above: &str) -> Self {
        let side = |p: &str| CavitySide { input: Some(p.into()), output: p.into(), loss: None };
        Self { below: side(below), above: side(above) }
    }

    /// Photon enters from below on `input`; the reflected photon is
    /// separated onto `reflect` (circulator), the transmitted one leaves
    /// above on `transmit`.
    pub fn single_input(input: &str, reflect: &str, transmit: &str) -> Self {
        Self {
            below: CavitySide { input: Some(input.into()), output: reflect.into(), loss: None },
            above: CavitySide { input: None, output: transmit.into(), loss: None },
        }
    }

    pub fn with_losses(mut self, below: Option<&str>, above: Option<&str>) -> Self {
        self.below.loss = below.map(Into::into);
        self.above.loss = above.map(Into::into);
        self
    }

    pub fn side(&self, side: Side) -> &CavitySide {
        match side {
            Side::Below => &self.below,
            Side::Above => &self.above,
        }
    }

    pub fn validate(&self, path: &RegisterLabel) -> Result<()> {
        let mut named: Vec<&str> = Vec::new();
        for s in [&self.below, &self.above] {
            named.extend(s.input.as_deref());
            named.push(&s.output);
            named.extend(s.loss.as_deref());
        }
        if let Some(p) = named.iter().find(|p| path.index_of(p).is_none()) {
            return Err(Error::UnknownPort((*p).to_owned()));
        }
        if self.below.output == self.above.output {
            return Err(Error::PortCollision(format!("both sides output on '{}'", self.below.output)));
        }
        if let (Some(a), Some(b)) = (&self.below.input, &self.above.input) {
            if a == b {
                return Err(Error::PortCollision(format!("both sides fed from '{a}'")));
            }
        }
        for side in [Side::Below, Side::Above] {
            let here = self.side(side);
            let there = self.side(side.other());
            if let Some(inp) = &here.input {
                if *inp == there.output {
                    return Err(Error::PortCollision(format!(
                        "'{inp}' is the {side} input and the {} output",
                        side.other()
                    )));
                }
            }
        }
        let losses: Vec<&str> =
            [&self.below.loss, &self.above.loss].into_iter().flatten().map(String::as_str).collect();
        if losses.len() == 2 && losses[0] == losses[1] {
            return Err(Error::PortCollision(format!("both sides lose into '{}'", losses[0])));
        }
        for l in &losses {
            let clashes = [&self.below, &self.above].iter().any(|s| s.input.as_deref() == Some(*l) || s.output == *l);
            if clashes {
                return Err(Error::PortCollision(format!("loss port '{l}' is also a signal port")));
            }
        }
        Ok(())
    }
}

/// Photon spin `s_z` of a polarization entering from `side`.
fn photon_spin_up(side: Side, pol: usize) -> bool {
    matches!((side, pol), (Side::Below, 0) | (Side::Above, 1))
}

/// Scattering operator on `(polarization, path, spin)` of one photon.
///
/// Basis states of paths not named by the wiring are left untouched. On the
/// named paths, input states are mapped as described in the module docs and
/// the remaining states are completed to a unitary by Gram–Schmidt in basis
/// order, so the operator is unitary for every valid model.
pub fn scatter_operator<T: Real>(
    pol: &RegisterLabel,
    path: &RegisterLabel,
    spin: &RegisterLabel,
    wiring: &CavityWiring,
    model: &InteractionModel<T>,
) -> Result<OperatorMatrix<T>> {
    model.validate()?;
    wiring.validate(path)?;
    if pol.kind() != RegisterKind::Polarization || pol.basis() != ["R", "L"] {
        return Err(Error::IncompatibleBasis { register: pol.to_string(), target: "RL".into() });
    }
    if spin.kind() != RegisterKind::Spin || spin.basis() != ["Up", "Down"] {
        return Err(Error::IncompatibleBasis { register: spin.to_string(), target: "UpDown".into() });
    }
    let np = path.dim();
    let dim = 2 * np * 2;
    let at = |p: usize, q: usize, s: usize| (p * np + q) * 2 + s;
    let port = |name: &str| path.index_of(name).expect("validated port");

    let mut involved: Vec<usize> = Vec::new();
    for side in [&wiring.below, &wiring.above] {
        for name in side.input.iter().chain(std::iter::once(&side.output)).chain(side.loss.iter()) {
            let q = port(name);
            if !involved.contains(&q) {
                involved.push(q);
            }
        }
    }

    let mut columns: Vec<Option<Vec<Amp<T>>>> = vec![None; dim];
    for side in [Side::Below, Side::Above] {
        let here = wiring.side(side);
        let Some(input) = &here.input else { continue };
        let q_in = port(input);
        let q_refl = port(&here.output);
        let q_trans = port(&wiring.side(side.other()).output);
        for p in 0..2 {
            for s in 0..2 {
                let coupled = photon_spin_up(side, p) == (s == 0);
                let br = model.branch(coupled);
                let mut col = vec![c_zero(); dim];
                col[at(1 - p, q_refl, s)] += br.reflect;
                col[at(p, q_trans, s)] += br.transmit;
                if br.loss > T::zero() {
                    let loss = here.loss.as_deref().ok_or_else(|| {
                        Error::InvalidModel(format!("lossy model needs a loss port on the {side} side"))
                    })?;
                    col[at(p, port(loss), s)] += c_real(br.loss);
                }
                columns[at(p, q_in, s)] = Some(col);
            }
        }
    }

    // Gram–Schmidt completion inside the span of the involved paths.
    let mut involved_states: Vec<usize> = Vec::new();
    for p in 0..2 {
        for &q in &involved {
            for s in 0..2 {
                involved_states.push(at(p, q, s));
            }
        }
    }
    involved_states.sort_unstable();
    let mut frame: Vec<Vec<Amp<T>>> = columns.iter().flatten().cloned().collect();
    let leftover: Vec<usize> = involved_states.iter().copied().filter(|&k| columns[k].is_none()).collect();
    let mut completion = Vec::with_capacity(leftover.len());
    let threshold = T::lit(1e-6);
    for &k in &involved_states {
        if completion.len() == leftover.len() {
            break;
        }
        let mut v = vec![c_zero::<T>(); dim];
        v[k] = c_one();
        for q in &frame {
            let ov = q[k].conj();
            if ov != c_zero() {
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= ov * y;
                }
            }
        }
        let n = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        if n > threshold {
            let v: Vec<Amp<T>> = v.into_iter().map(|z| z / c_real(n)).collect();
            frame.push(v.clone());
            completion.push(v);
        }
    }
    if completion.len() != leftover.len() {
        return Err(Error::InvalidModel("scattering columns are not orthonormal".into()));
    }
    for (k, v) in leftover.into_iter().zip(completion) {
        columns[k] = Some(v);
    }

    let columns: Vec<Vec<Amp<T>>> = columns
        .into_iter()
        .enumerate()
        .map(|(k, col)| {
            col.unwrap_or_else(|| {
                let mut e = vec![c_zero(); dim];
                e[k] = c_one();
                e
            })
        })
        .collect();
    OperatorMatrix::from_columns(vec![pol.clone(), path.clone(), spin.clone()], &columns)
}

fn photon_registers<T: Real>(s: &StateVector<T>, photon: usize, spin: usize) -> Result<[RegisterLabel; 3]> {
    let get = |key: RegisterKey| {
        s.register(key).cloned().ok_or_else(|| Error::MissingRegister(format!("{:?}[{}]", key.0, key.1)))
    };
    Ok([
        get((RegisterKind::Polarization, photon))?,
        get((RegisterKind::Path, photon))?,
        get((RegisterKind::Spin, spin))?,
    ])
}

/// Scatters `photon` off the cavity holding `spin` under `model`.
pub fn lossy_scatter<T: Real>(
    s: &StateVector<T>,
    model: &InteractionModel<T>,
    photon: usize,
    spin: usize,
    wiring: &CavityWiring,
) -> Result<StateVector<T>> {
    let [pol, path, sp] = photon_registers(s, photon, spin)?;
    s.apply(&scatter_operator(&pol, &path, &sp, wiring, model)?)
}

/// Ideal spin-selective scattering (perfect reflection/transmission).
pub fn ideal_scatter<T: Real>(
    s: &StateVector<T>,
    photon: usize,
    spin: usize,
    wiring: &CavityWiring,
) -> Result<StateVector<T>> {
    lossy_scatter(s, &InteractionModel::ideal(), photon, spin, wiring)
}
