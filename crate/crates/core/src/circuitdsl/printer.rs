use std::fmt::Write;

use super::ast::*;

fn angle(a: &Angle) -> String {
    match *a {
        Angle::Radians(x) => format!("{x}"),
        Angle::Pi { num, den } => {
            let mut s = String::new();
            if num < 0 {
                s.push('-');
            }
            if num.unsigned_abs() != 1 {
                let _ = write!(s, "{}*", num.unsigned_abs());
            }
            s.push_str("pi");
            if den != 1 {
                let _ = write!(s, "/{den}");
            }
            s
        }
    }
}

fn complex(z: &ComplexLit) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im > 0.0 {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}-{}i", z.re, -z.im)
    }
}

fn ports(list: &[PortRef]) -> String {
    let names: Vec<&str> = list.iter().map(|p| p.as_ref().map_or("_", |i| i.name.as_str())).collect();
    format!("[{}]", names.join(", "))
}

fn state(s: &StateExpr) -> String {
    match s {
        StateExpr::Named(id) => id.name.clone(),
        StateExpr::Amps { first, second, .. } => format!("({}, {})", complex(first), complex(second)),
    }
}

fn join(ids: &[Ident]) -> String {
    ids.iter().map(|i| i.name.as_str()).collect::<Vec<_>>().join(" ")
}

/// Canonical text for `ast`: modes, components, sequence, inputs, then
/// measurements, one statement per line.
pub fn pretty_print(ast: &CircuitAst) -> String {
    let mut out = String::new();
    if !ast.modes.is_empty() {
        let _ = writeln!(out, "modes {}", join(&ast.modes));
    }
    for c in &ast.components {
        let kind = match &c.kind {
            ComponentKind::Hwp { theta } => format!("hwp(theta={})", angle(theta)),
            ComponentKind::Phase { phi } => format!("phase(phi={})", angle(phi)),
            k => k.name().to_owned(),
        };
        let _ = write!(out, "component {} {kind} in={} out={}", c.name.name, ports(&c.inputs), ports(&c.outputs));
        if let Some(l) = &c.loss {
            let _ = write!(out, " loss={}", ports(l));
        }
        out.push('\n');
    }
    if !ast.sequence.is_empty() {
        let _ = writeln!(out, "sequence {}", join(&ast.sequence));
    }
    for i in &ast.inputs {
        let _ = match i {
            InputDecl::Photon { id, port, state: s, .. } => {
                writeln!(out, "input photon {id} port={} state={}", port.name, state(s))
            }
            InputDecl::Pair { ids, port, state: s, .. } => {
                writeln!(out, "input photons {} {} port={} state={}", ids.0, ids.1, port.name, state(s))
            }
            InputDecl::Spin { state: s, .. } => writeln!(out, "input spin state={}", state(s)),
        };
    }
    for m in &ast.measurements {
        let _ = match m {
            MeasureDecl::Photon { id, basis, .. } => writeln!(out, "measure photon {id} basis={}", basis.name),
            MeasureDecl::Spin { basis, .. } => writeln!(out, "measure spin basis={}", basis.name),
        };
    }
    out
}
