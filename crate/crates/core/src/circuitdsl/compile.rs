use super::ast::*;
use super::validate::cavity_wiring;
use crate::cavity::InteractionModel;
use crate::error::{Error, Result};
use crate::measurement::{enumerate, Distribution, Outcome};
use crate::optics::{ComponentOp, Element, Pipeline};
use crate::protocols::{BellState, SPIN_ID};
use crate::qstate::{Basis, RegisterKey, RegisterKind, RegisterLabel, StateVector};
use crate::scalar::{c, c_one, c_zero, Amp, Real};

/// An executable circuit: the per-photon pipeline, the initial state and
/// the measurement plan.
#[derive(Clone, Debug, PartialEq)]
pub struct CompiledCircuit<T: Real> {
    ports: Vec<String>,
    pipeline: Pipeline<T>,
    photons: Vec<usize>,
    initial: StateVector<T>,
    measurements: Vec<(RegisterKey, Option<Basis>)>,
}

fn angle<T: Real>(a: &Angle) -> T {
    match *a {
        Angle::Radians(x) => T::lit(x),
        Angle::Pi { num, den } => T::PI() * T::lit(num as f64) / T::lit(den as f64),
    }
}

fn lit<T: Real>(z: &ComplexLit) -> Amp<T> {
    c(T::lit(z.re), T::lit(z.im))
}

fn port(p: &PortRef) -> &str {
    p.as_ref().map(|i| i.name.as_str()).unwrap_or("_")
}

fn named_qubit<T: Real>(name: &str) -> Result<[Amp<T>; 2]> {
    let h = T::frac_1_sqrt_2();
    Ok(match name {
        "R" | "Up" => [c_one(), c_zero()],
        "L" | "Down" => [c_zero(), c_one()],
        "H" | "Plus" => [c(h, T::zero()), c(h, T::zero())],
        "V" => [c(T::zero(), -h), c(T::zero(), h)],
        "Minus" => [c(h, T::zero()), c(-h, T::zero())],
        other => return Err(Error::InvalidInput(format!("unknown state '{other}'"))),
    })
}

fn qubit_state<T: Real>(reg: RegisterLabel, s: &StateExpr) -> Result<StateVector<T>> {
    let amps = match s {
        StateExpr::Named(id) => named_qubit(&id.name)?,
        StateExpr::Amps { first, second, .. } => [lit(first), lit(second)],
    };
    StateVector::single(reg, amps.to_vec())?
        .normalized()
        .ok_or_else(|| Error::InvalidInput("zero-norm input state".into()))
}

fn element<T: Real>(c: &ComponentDecl) -> Result<Element<T>> {
    let (i, o) = (&c.inputs, &c.outputs);
    Ok(match &c.kind {
        ComponentKind::Cpbs => ComponentOp::cpbs(port(&i[0]), port(&i[1]), port(&o[0]), port(&o[1])).into(),
        ComponentKind::Bs => ComponentOp::bs50(port(&i[0]), port(&i[1]), port(&o[0]), port(&o[1])).into(),
        ComponentKind::Hwp { theta } => ComponentOp::hwp(port(&i[0]), angle(theta)).into(),
        ComponentKind::Mirror => ComponentOp::mirror(port(&i[0])).into(),
        ComponentKind::Phase { phi } => ComponentOp::phase(port(&i[0]), angle(phi)).into(),
        ComponentKind::Cavity => Element::Cavity(
            cavity_wiring(c)
                .ok_or_else(|| Error::InvalidComponent(format!("cavity '{}' lacks outputs", c.name.name)))?,
        ),
    })
}

/// Builds the executable circuit from a validated AST, with the ideal
/// cavity model.
pub fn compile<T: Real>(ast: &CircuitAst) -> Result<CompiledCircuit<T>> {
    let ports: Vec<String> = ast.modes.iter().map(|m| m.name.clone()).collect();
    let elements = ast
        .sequence
        .iter()
        .map(|name| {
            let decl = ast
                .component(&name.name)
                .ok_or_else(|| Error::InvalidComponent(format!("unknown component '{}'", name.name)))?;
            element(decl)
        })
        .collect::<Result<Vec<_>>>()?;
    let pipeline = Pipeline::new(elements, InteractionModel::ideal());

    let path = |id: usize, at: &str| -> Result<StateVector<T>> {
        StateVector::basis_state(vec![RegisterLabel::path(id, &ports)?], &[at])
    };
    let mut factors: Vec<StateVector<T>> = Vec::new();
    let mut photons = Vec::new();
    let mut has_spin = false;
    for input in &ast.inputs {
        match input {
            InputDecl::Photon { id, port, state, .. } => {
                factors.push(qubit_state(RegisterLabel::polarization(*id), state)?.tensor(&path(*id, &port.name)?)?);
                photons.push(*id);
            }
            InputDecl::Pair { ids: (a, b), port, state, .. } => {
                let name = match state {
                    StateExpr::Named(id) => id.name.parse::<BellState>()?,
                    StateExpr::Amps { .. } => {
                        return Err(Error::InvalidInput("two-photon input must name a Bell state".into()))
                    }
                };
                let bell = name.state::<T>();
                let pair = StateVector::new(
                    vec![RegisterLabel::polarization(*a), RegisterLabel::polarization(*b)],
                    bell.amplitudes().to_vec(),
                )?;
                factors.push(pair.tensor(&path(*a, &port.name)?)?.tensor(&path(*b, &port.name)?)?);
                photons.extend([*a, *b]);
            }
            InputDecl::Spin { state, .. } => {
                factors.push(qubit_state(RegisterLabel::spin(SPIN_ID), state)?);
                has_spin = true;
            }
        }
    }
    photons.sort_unstable();
    let mut initial = factors
        .split_first()
        .ok_or_else(|| Error::InvalidInput("circuit has no inputs".into()))
        .and_then(|(first, rest)| rest.iter().try_fold(first.clone(), |acc, f| acc.tensor(f)))?;
    let mut order: Vec<RegisterKey> =
        photons.iter().flat_map(|&k| [(RegisterKind::Polarization, k), (RegisterKind::Path, k)]).collect();
    if has_spin {
        order.push((RegisterKind::Spin, SPIN_ID));
    }
    initial = initial.reordered(&order)?;

    let mut measurements = Vec::new();
    for m in &ast.measurements {
        match m {
            MeasureDecl::Photon { id, basis, .. } => {
                let b: Basis = basis.name.parse()?;
                measurements.push(((RegisterKind::Polarization, *id), Some(b)));
                measurements.push(((RegisterKind::Path, *id), None));
            }
            MeasureDecl::Spin { basis, .. } => {
                measurements.push(((RegisterKind::Spin, SPIN_ID), Some(basis.name.parse()?)));
            }
        }
    }
    if measurements.is_empty() {
        measurements = order.iter().map(|&k| (k, None)).collect();
    }
    Ok(CompiledCircuit { ports, pipeline, photons, initial, measurements })
}

impl<T: Real> CompiledCircuit<T> {
    pub fn ports(&self) -> &[String] {
        &self.ports
    }

    pub fn pipeline(&self) -> &Pipeline<T> {
        &self.pipeline
    }

    pub fn photons(&self) -> &[usize] {
        &self.photons
    }

    pub fn initial_state(&self) -> &StateVector<T> {
        &self.initial
    }

    pub fn measurement_plan(&self) -> &[(RegisterKey, Option<Basis>)] {
        &self.measurements
    }

    /// Same circuit under another cavity model.
    pub fn with_model(&self, model: InteractionModel<T>) -> Self {
        Self { pipeline: self.pipeline.with_model(model), ..self.clone() }
    }

    /// Sends every photon through the pipeline, in photon order, starting
    /// from `state` (which must use this circuit's register layout).
    pub fn run_from(&self, state: &StateVector<T>) -> Result<StateVector<T>> {
        self.photons.iter().try_fold(state.clone(), |s, &k| self.pipeline.run(&s, k, SPIN_ID))
    }

    pub fn run(&self) -> Result<StateVector<T>> {
        self.run_from(&self.initial)
    }

    /// Outcome probabilities of the circuit's measurement plan on `state`.
    /// Each photon contributes its polarization then its port.
    pub fn measure(&self, state: &StateVector<T>) -> Result<Distribution<Outcome, T>> {
        enumerate(state, &self.measurements)
    }
}
