//! Passive optical components and their composition with cavity passes into
//! per-photon pipelines.
//!
//! Two-port components (`Cpbs`, `Bs50`) are reciprocal: the forward map
//! from `inputs` to `outputs` is a 2x2-mode scattering matrix `S`, and light
//! travelling back from `outputs` to `inputs` sees `Sᵀ`. The full operator
//! on the involved modes is `[[0, Sᵀ], [S, 0]]`.

use crate::cavity::{scatter_operator, CavityWiring, InteractionModel};
use crate::error::{Error, Result};
use crate::qstate::{OperatorMatrix, RegisterKind, RegisterLabel, StateVector};
use crate::scalar::{c, c_one, c_real, c_zero, cis, Amp, Real};

#[derive(Clone, Debug, PartialEq)]
pub enum ComponentOp<T: Real> {
    /// Circular-basis polarizing beamsplitter. From `inputs[0]`, R goes to
    /// `outputs[0]` and L to `outputs[1]`; from `inputs[1]`, L goes to
    /// `outputs[0]` and R to `outputs[1]`. No phase is added.
    Cpbs { inputs: [String; 2], outputs: [String; 2] },
    /// Symmetric 50/50 beamsplitter: `a → (c + i d)/√2`, `b → (i c + d)/√2`.
    /// Polarization is unchanged on both outputs.
    Bs50 { inputs: [String; 2], outputs: [String; 2] },
    /// Half-wave plate at angle `theta`: `R → e^{2iθ} L`, `L → e^{−2iθ} R`.
    Hwp { path: String, theta: T },
    /// Mirror reflection, swapping R and L.
    Mirror { path: String },
    /// Multiplies the amplitude on `path` by `e^{iφ}`.
    PhaseShift { path: String, phi: T },
}

fn pair(a: &str, b: &str) -> [String; 2] {
    [a.to_owned(), b.to_owned()]
}

impl<T: Real> ComponentOp<T> {
    pub fn cpbs(in_a: &str, in_b: &str, r_out: &str, l_out: &str) -> Self {
        Self::Cpbs { inputs: pair(in_a, in_b), outputs: pair(r_out, l_out) }
    }

    pub fn bs50(in_a: &str, in_b: &str, out_c: &str, out_d: &str) -> Self {
        Self::Bs50 { inputs: pair(in_a, in_b), outputs: pair(out_c, out_d) }
    }

    pub fn hwp(path: &str, theta: T) -> Self {
        Self::Hwp { path: path.to_owned(), theta }
    }

    pub fn mirror(path: &str) -> Self {
        Self::Mirror { path: path.to_owned() }
    }

    pub fn phase(path: &str, phi: T) -> Self {
        Self::PhaseShift { path: path.to_owned(), phi }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Cpbs { .. } => "cpbs",
            Self::Bs50 { .. } => "bs",
            Self::Hwp { .. } => "hwp",
            Self::Mirror { .. } => "mirror",
            Self::PhaseShift { .. } => "phase",
        }
    }

    pub fn ports(&self) -> Vec<&str> {
        match self {
            Self::Cpbs { inputs, outputs } | Self::Bs50 { inputs, outputs } => {
                inputs.iter().chain(outputs).map(String::as_str).collect()
            }
            Self::Hwp { path, .. } | Self::Mirror { path } | Self::PhaseShift { path, .. } => vec![path],
        }
    }

    /// Operator on `(polarization, path)` of one photon.
    pub fn matrix(&self, pol: &RegisterLabel, path: &RegisterLabel) -> Result<OperatorMatrix<T>> {
        check_pol(pol)?;
        if path.kind() != RegisterKind::Path {
            return Err(Error::InvalidRegister(format!("{path} is not a path register")));
        }
        let np = path.dim();
        let at = |p: usize, q: usize| p * np + q;
        let port = |name: &str| path.index_checked(name).map_err(|_| Error::UnknownPort(name.to_owned()));
        let dim = 2 * np;
        let domain = vec![pol.clone(), path.clone()];

        match self {
            Self::Cpbs { inputs, outputs } | Self::Bs50 { inputs, outputs } => {
                let ins = [port(&inputs[0])?, port(&inputs[1])?];
                let outs = [port(&outputs[0])?, port(&outputs[1])?];
                let mut seen = ins.to_vec();
                seen.extend(outs);
                for (k, q) in seen.iter().enumerate() {
                    if seen[..k].contains(q) {
                        return Err(Error::PortCollision(format!(
                            "{} uses port '{}' twice",
                            self.kind_name(),
                            path.basis()[*q]
                        )));
                    }
                }
                // forward[(p_in, i)] = list of ((p_out, j), amp)
                let h = c_real(T::frac_1_sqrt_2());
                let ih = c(T::zero(), T::frac_1_sqrt_2());
                let forward = |p: usize, i: usize| -> Vec<((usize, usize), Amp<T>)> {
                    match self {
                        Self::Cpbs { .. } => {
                            // inputs[0]: R→0, L→1; inputs[1]: L→0, R→1
                            let j = if (i == 0) == (p == 0) { 0 } else { 1 };
                            vec![((p, j), c_one())]
                        }
                        _ => {
                            if i == 0 {
                                vec![((p, 0), h), ((p, 1), ih)]
                            } else {
                                vec![((p, 0), ih), ((p, 1), h)]
                            }
                        }
                    }
                };
                let mut m = vec![c_zero::<T>(); dim * dim];
                for q in 0..np {
                    if !seen.contains(&q) {
                        for p in 0..2 {
                            m[at(p, q) * dim + at(p, q)] = c_one();
                        }
                    }
                }
                for p in 0..2 {
                    for i in 0..2 {
                        for ((po, j), a) in forward(p, i) {
                            let (src, dst) = (at(p, ins[i]), at(po, outs[j]));
                            m[dst * dim + src] += a;
                            m[src * dim + dst] += a;
                        }
                    }
                }
                OperatorMatrix::new(domain, m)
            }
            Self::Hwp { path: name, theta } => {
                let q = port(name)?;
                let two = T::lit(2.0) * *theta;
                let e = cis(two);
                OperatorMatrix::from_fn(domain, |row, col| {
                    let (pr, qr, pc, qc) = (row / np, row % np, col / np, col % np);
                    if qc != q {
                        return if row == col { c_one() } else { c_zero() };
                    }
                    match (pc, pr, qr == q) {
                        (0, 1, true) => e,
                        (1, 0, true) => e.conj(),
                        _ => c_zero(),
                    }
                })
            }
            Self::Mirror { path: name } => {
                let q = port(name)?;
                OperatorMatrix::from_fn(domain, |row, col| {
                    let (pr, qr, pc, qc) = (row / np, row % np, col / np, col % np);
                    let hit = if qc == q { qr == q && pr != pc } else { row == col };
                    if hit {
                        c_one()
                    } else {
                        c_zero()
                    }
                })
            }
            Self::PhaseShift { path: name, phi } => {
                let q = port(name)?;
                let e = cis(*phi);
                OperatorMatrix::from_fn(domain, |row, col| match (row == col, col % np == q) {
                    (true, true) => e,
                    (true, false) => c_one(),
                    _ => c_zero(),
                })
            }
        }
    }

    /// Applies the component to photon `photon` of `s`.
    pub fn apply(&self, s: &StateVector<T>, photon: usize) -> Result<StateVector<T>> {
        let (pol, path) = photon_registers(s, photon)?;
        s.apply(&self.matrix(&pol, &path)?)
    }
}

fn check_pol(pol: &RegisterLabel) -> Result<()> {
    if pol.kind() != RegisterKind::Polarization || pol.basis() != ["R", "L"] {
        return Err(Error::IncompatibleBasis { register: pol.to_string(), target: "RL".into() });
    }
    Ok(())
}

fn photon_registers<T: Real>(s: &StateVector<T>, photon: usize) -> Result<(RegisterLabel, RegisterLabel)> {
    let get = |kind: RegisterKind| {
        s.register((kind, photon)).cloned().ok_or_else(|| Error::MissingRegister(format!("{kind:?}[{photon}]")))
    };
    Ok((get(RegisterKind::Polarization)?, get(RegisterKind::Path)?))
}

pub fn apply_cpbs<T: Real>(
    s: &StateVector<T>,
    photon: usize,
    inputs: [&str; 2],
    outputs: [&str; 2],
) -> Result<StateVector<T>> {
    ComponentOp::cpbs(inputs[0], inputs[1], outputs[0], outputs[1]).apply(s, photon)
}

pub fn apply_bs<T: Real>(
    s: &StateVector<T>,
    photon: usize,
    in_a: &str,
    in_b: &str,
    out_c: &str,
    out_d: &str,
) -> Result<StateVector<T>> {
    ComponentOp::bs50(in_a, in_b, out_c, out_d).apply(s, photon)
}

pub fn apply_mirror<T: Real>(s: &StateVector<T>, photon: usize, path: &str) -> Result<StateVector<T>> {
    ComponentOp::mirror(path).apply(s, photon)
}

pub fn apply_phase<T: Real>(s: &StateVector<T>, photon: usize, path: &str, phi: T) -> Result<StateVector<T>> {
    ComponentOp::phase(path, phi).apply(s, photon)
}

pub fn apply_hwp<T: Real>(s: &StateVector<T>, photon: usize, path: &str, theta: T) -> Result<StateVector<T>> {
    ComponentOp::hwp(path, theta).apply(s, photon)
}

/// Applies operators left to right.
pub fn compose<T: Real>(ops: &[OperatorMatrix<T>], s: &StateVector<T>) -> Result<StateVector<T>> {
    ops.iter().try_fold(s.clone(), |acc, op| acc.apply(op))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Element<T: Real> {
    Optic(ComponentOp<T>),
    Cavity(CavityWiring),
}

impl<T: Real> From<ComponentOp<T>> for Element<T> {
    fn from(op: ComponentOp<T>) -> Self {
        Element::Optic(op)
    }
}

/// The path of a single photon through optics and the cavity.
#[derive(Clone, Debug, PartialEq)]
pub struct Pipeline<T: Real> {
    elements: Vec<Element<T>>,
    model: InteractionModel<T>,
}

impl<T: Real> Pipeline<T> {
    pub fn new(elements: Vec<Element<T>>, model: InteractionModel<T>) -> Self {
        Self { elements, model }
    }

    pub fn elements(&self) -> &[Element<T>] {
        &self.elements
    }

    pub fn model(&self) -> &InteractionModel<T> {
        &self.model
    }

    pub fn with_model(&self, model: InteractionModel<T>) -> Self {
        Self { elements: self.elements.clone(), model }
    }

    pub fn has_cavity(&self) -> bool {
        self.elements.iter().any(|e| matches!(e, Element::Cavity(_)))
    }

    fn element_matrix(
        &self,
        e: &Element<T>,
        pol: &RegisterLabel,
        path: &RegisterLabel,
        spin: Option<&RegisterLabel>,
    ) -> Result<OperatorMatrix<T>> {
        match e {
            Element::Optic(op) => op.matrix(pol, path),
            Element::Cavity(w) => {
                let spin = spin.ok_or_else(|| Error::MissingRegister("spin register for cavity pass".into()))?;
                scatter_operator(pol, path, spin, w, &self.model)
            }
        }
    }

    /// Sends photon `photon` through every element in order.
    pub fn run(&self, s: &StateVector<T>, photon: usize, spin: usize) -> Result<StateVector<T>> {
        let (pol, path) = photon_registers(s, photon)?;
        let sp = s.register((RegisterKind::Spin, spin)).cloned();
        let mut out = s.clone();
        for e in &self.elements {
            out = out.apply(&self.element_matrix(e, &pol, &path, sp.as_ref())?)?;
        }
        Ok(out)
    }

    /// Product of all element operators on `(pol, path, spin)`, or on
    /// `(pol, path)` when `spin` is `None` and the pipeline has no cavity.
    pub fn matrix(
        &self,
        pol: &RegisterLabel,
        path: &RegisterLabel,
        spin: Option<&RegisterLabel>,
    ) -> Result<OperatorMatrix<T>> {
        let mut domain = vec![pol.clone(), path.clone()];
        domain.extend(spin.cloned());
        let mut acc = OperatorMatrix::identity(domain.clone())?;
        for e in &self.elements {
            let m = self.element_matrix(e, pol, path, spin)?.extend_to(domain.clone())?;
            acc = m.matmul(&acc)?;
        }
        Ok(acc)
    }
}
