use std::collections::{BTreeMap, BTreeSet};

use super::ast::*;
use super::{ErrorKind, ParseError};
use crate::cavity::{CavitySide, CavityWiring};
use crate::qstate::RegisterLabel;

fn sem<T>(pos: Pos, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::new(pos, ErrorKind::Semantic, msg))
}

pub(crate) const PHOTON_STATES: [&str; 4] = ["R", "L", "H", "V"];
pub(crate) const SPIN_STATES: [&str; 4] = ["Up", "Down", "Plus", "Minus"];
pub(crate) const BELL_STATES: [&str; 4] = ["phi+", "phi-", "psi+", "psi-"];

fn port_name(p: &PortRef) -> Option<&str> {
    p.as_ref().map(|i| i.name.as_str())
}

/// Cavity wiring described by a declaration (ports already checked).
pub(crate) fn cavity_wiring(c: &ComponentDecl) -> Option<CavityWiring> {
    let side = |k: usize| {
        Some(CavitySide {
            input: port_name(&c.inputs[k]).map(Into::into),
            output: port_name(&c.outputs[k])?.to_owned(),
            loss: c.loss.as_ref().and_then(|l| port_name(&l[k])).map(Into::into),
        })
    };
    Some(CavityWiring { below: side(0)?, above: side(1)? })
}

fn check_component(c: &ComponentDecl, modes: &BTreeSet<&str>) -> Result<(), ParseError> {
    let kind = c.kind.name();
    for p in c.inputs.iter().chain(&c.outputs).chain(c.loss.iter().flatten()).flatten() {
        if !modes.contains(p.name.as_str()) {
            return sem(p.pos, format!("unknown port '{}'", p.name));
        }
    }
    let arity = |list: &[PortRef], n: usize, what: &str| {
        if list.len() != n {
            sem(c.name.pos, format!("{kind} '{}' needs {n} {what} port(s), got {}", c.name.name, list.len()))
        } else {
            Ok(())
        }
    };
    let no_blank = |list: &[PortRef]| match list.iter().position(Option::is_none) {
        Some(_) => sem(c.name.pos, format!("{kind} '{}' cannot leave a port empty", c.name.name)),
        None => Ok(()),
    };
    match c.kind {
        ComponentKind::Cavity => {
            arity(&c.inputs, 2, "input")?;
            arity(&c.outputs, 2, "output")?;
            no_blank(&c.outputs)?;
            if let Some(l) = &c.loss {
                arity(l, 2, "loss")?;
            }
            if c.inputs.iter().all(Option::is_none) {
                return sem(c.name.pos, format!("cavity '{}' has no input", c.name.name));
            }
            let ports: Vec<&str> = modes.iter().copied().collect();
            let path = RegisterLabel::path(1, &ports).expect("modes are unique");
            let wiring = cavity_wiring(c).expect("outputs present");
            if let Err(e) = wiring.validate(&path) {
                return sem(c.name.pos, format!("cavity '{}': {e}", c.name.name));
            }
        }
        _ => {
            if c.loss.is_some() {
                return sem(c.name.pos, format!("{kind} '{}' has no loss ports", c.name.name));
            }
            let n = match c.kind {
                ComponentKind::Cpbs | ComponentKind::Bs => 2,
                _ => 1,
            };
            arity(&c.inputs, n, "input")?;
            arity(&c.outputs, n, "output")?;
            no_blank(&c.inputs)?;
            no_blank(&c.outputs)?;
            let names: Vec<&Ident> = c.inputs.iter().chain(&c.outputs).flatten().collect();
            if n == 1 {
                if names[0].name != names[1].name {
                    return sem(
                        names[1].pos,
                        format!("{kind} '{}' acts on one mode: in and out must match", c.name.name),
                    );
                }
            } else {
                for (k, p) in names.iter().enumerate() {
                    if names[..k].iter().any(|q| q.name == p.name) {
                        return sem(p.pos, format!("port '{}' used twice by {kind} '{}'", p.name, c.name.name));
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_state(state: &StateExpr, allowed: &[&str], what: &str) -> Result<(), ParseError> {
    match state {
        StateExpr::Named(id) if !allowed.contains(&id.name.as_str()) => {
            sem(id.pos, format!("'{}' is not a {what} state (expected one of {})", id.name, allowed.join(", ")))
        }
        StateExpr::Amps { first: a, second: b, pos } => {
            let n = a.re * a.re + a.im * a.im + b.re * b.re + b.im * b.im;
            if !(n > 0.0 && n.is_finite()) {
                return sem(*pos, format!("{what} amplitudes must be finite and not both zero"));
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

pub(crate) fn validate(ast: &CircuitAst) -> Result<(), ParseError> {
    let mut modes = BTreeSet::new();
    for m in &ast.modes {
        if !modes.insert(m.name.as_str()) {
            return sem(m.pos, format!("duplicate port '{}'", m.name));
        }
    }
    if modes.is_empty() {
        return sem(Pos::new(1, 1), "no modes declared");
    }

    let mut names = BTreeMap::new();
    for c in &ast.components {
        if names.insert(c.name.name.as_str(), c).is_some() {
            return sem(c.name.pos, format!("duplicate component '{}'", c.name.name));
        }
        check_component(c, &modes)?;
    }
    let mut used = BTreeSet::new();
    for s in &ast.sequence {
        if !names.contains_key(s.name.as_str()) {
            return sem(s.pos, format!("unknown component '{}'", s.name));
        }
        used.insert(s.name.as_str());
    }
    if let Some(c) = ast.components.iter().find(|c| !used.contains(c.name.name.as_str())) {
        return sem(c.name.pos, format!("component '{}' is never used in the sequence", c.name.name));
    }

    let mut photons = BTreeSet::new();
    let mut spin = None;
    let mut wired: BTreeSet<&str> = ast
        .components
        .iter()
        .flat_map(|c| c.inputs.iter().chain(&c.outputs).chain(c.loss.iter().flatten()))
        .flatten()
        .map(|i| i.name.as_str())
        .collect();
    for input in &ast.inputs {
        let (ids, port) = match input {
            InputDecl::Photon { id, port, state, .. } => {
                check_state(state, &PHOTON_STATES, "photon")?;
                (vec![*id], port)
            }
            InputDecl::Pair { ids, port, state, .. } => {
                match state {
                    StateExpr::Named(_) => check_state(state, &BELL_STATES, "two-photon")?,
                    StateExpr::Amps { pos, .. } => return sem(*pos, "two-photon input must name a Bell state"),
                }
                (vec![ids.0, ids.1], port)
            }
            InputDecl::Spin { state, pos } => {
                check_state(state, &SPIN_STATES, "spin")?;
                if spin.replace(*pos).is_some() {
                    return sem(*pos, "spin input given twice");
                }
                continue;
            }
        };
        if !modes.contains(port.name.as_str()) {
            return sem(port.pos, format!("unknown port '{}'", port.name));
        }
        wired.insert(port.name.as_str());
        for id in ids {
            let pos = match input {
                InputDecl::Photon { pos, .. } | InputDecl::Pair { pos, .. } => *pos,
                InputDecl::Spin { pos, .. } => *pos,
            };
            if id == 0 {
                return sem(pos, "photons are numbered from 1");
            }
            if !photons.insert(id) {
                return sem(pos, format!("photon {id} given twice"));
            }
        }
    }
    if photons.is_empty() {
        return sem(Pos::new(1, 1), "no photon input");
    }
    if let Some(m) = ast.modes.iter().find(|m| !wired.contains(m.name.as_str())) {
        return sem(m.pos, format!("port '{}' is not connected", m.name));
    }
    let has_cavity = ast.components.iter().any(|c| c.kind == ComponentKind::Cavity);
    if has_cavity && spin.is_none() {
        return sem(Pos::new(1, 1), "circuit has a cavity but no spin input");
    }

    let mut measured = BTreeSet::new();
    for m in &ast.measurements {
        match m {
            MeasureDecl::Photon { id, basis, pos } => {
                if !photons.contains(id) {
                    return sem(*pos, format!("photon {id} has no input"));
                }
                if !["RL", "HV"].contains(&basis.name.as_str()) {
                    return sem(basis.pos, format!("'{}' is not a photon basis (RL, HV)", basis.name));
                }
                if !measured.insert(Some(*id)) {
                    return sem(*pos, format!("photon {id} measured twice"));
                }
            }
            MeasureDecl::Spin { basis, pos } => {
                if spin.is_none() {
                    return sem(*pos, "spin measured but never prepared");
                }
                if !["UpDown", "PlusMinus"].contains(&basis.name.as_str()) {
                    return sem(basis.pos, format!("'{}' is not a spin basis (UpDown, PlusMinus)", basis.name));
                }
                if !measured.insert(None) {
                    return sem(*pos, "spin measured twice");
                }
            }
        }
    }
    Ok(())
}
