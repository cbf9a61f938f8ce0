use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::cavity::{ContrastParams, InteractionModel};
use crate::protocols::{self, BellState};
use crate::qstate::phase_distance;

#[test]
fn cnot_fixture_shape() {
    let ast = parse(fixtures::CNOT).unwrap();
    assert_eq!(ast.count_kind("cpbs"), 1);
    assert_eq!(ast.count_kind("cavity"), 1);
    assert_eq!(ast.count_kind("phase"), 1);
    assert_eq!(ast.component("shift").unwrap().kind, ComponentKind::Phase { phi: Angle::Pi { num: 1, den: 1 } });
    assert_eq!(ast.modes.len(), 4);
}

#[test]
fn empty_input_is_a_syntax_error_at_origin() {
    for src in ["", "\n\n", "# only a comment\n"] {
        let e = parse(src).unwrap_err();
        assert_eq!((e.line, e.column, e.kind), (1, 1, ErrorKind::Syntax), "{src:?}");
    }
}

#[test]
fn duplicate_mode_names_the_port() {
    let src = fixtures::CNOT.replace("modes A B C D", "modes A B C D B");
    let e = parse(&src).unwrap_err();
    assert_eq!(e.kind, ErrorKind::Semantic);
    assert!(e.message.contains("'B'"), "{}", e.message);
    assert_eq!((e.line, e.column), (2, 15));
}

#[test]
fn crlf_and_lf_agree() {
    let crlf = fixtures::BSA.replace('\n', "\r\n");
    assert_eq!(parse(&crlf).unwrap(), parse(fixtures::BSA).unwrap());
}

#[test]
fn fixtures_round_trip() {
    for src in [fixtures::CNOT, fixtures::CNOT_LOSSY, fixtures::BSA] {
        let ast = parse(src).unwrap();
        let printed = pretty_print(&ast);
        assert_eq!(parse(&printed).unwrap(), ast);
        assert_eq!(pretty_print(&parse(&printed).unwrap()), printed);
    }
}

#[test]
fn angles_and_amplitudes() {
    let src = "modes A\ncomponent w hwp(theta=-3*pi/8) in=[A] out=[A]\ncomponent p phase(phi=0.25) in=[A] out=[A]\n\
               sequence w p\ninput photon 1 port=A state=(0.6, -0.8i)\n";
    let ast = parse(src).unwrap();
    assert_eq!(ast.component("w").unwrap().kind, ComponentKind::Hwp { theta: Angle::Pi { num: -3, den: 8 } });
    assert!((Angle::Pi { num: -3, den: 8 }.radians() + 3.0 * std::f64::consts::PI / 8.0).abs() < 1e-15);
    let printed = pretty_print(&ast);
    assert!(printed.contains("hwp(theta=-3*pi/8)"), "{printed}");
    assert!(printed.contains("state=(0.6, -0.8i)"), "{printed}");
    assert_eq!(parse(&printed).unwrap(), ast);
}

#[test]
fn semantic_errors() {
    let cases = [
        ("modes A B\ncomponent m mirror in=[A] out=[A]\nsequence m\ninput photon 1 port=A state=R\n", "not connected"),
        ("modes A\ncomponent m mirror in=[A] out=[A]\ninput photon 1 port=A state=R\n", "never used"),
        ("modes A\ncomponent m mirror in=[Z] out=[Z]\nsequence m\ninput photon 1 port=A state=R\n", "unknown port"),
        ("modes A\nsequence q\ninput photon 1 port=A state=R\n", "unknown component"),
        ("modes A\ninput photon 1 port=A state=Up\n", "not a photon state"),
        ("modes A B\ncomponent q cavity in=[A, _] out=[A, B]\nsequence q\ninput photon 1 port=A state=R\n", "no spin input"),
        ("modes A B\ncomponent q cavity in=[A, _] out=[B, B]\nsequence q\ninput photon 1 port=A state=R\ninput spin state=Up\n", "collision"),
        ("modes A\ninput photon 1 port=A state=R\nmeasure photon 2 basis=HV\n", "no input"),
    ];
    for (src, needle) in cases {
        let e = parse(src).unwrap_err();
        assert_eq!(e.kind, ErrorKind::Semantic, "{src}");
        assert!(e.message.contains(needle), "{src}: {}", e.message);
    }
}

#[test]
fn compile_is_deterministic() {
    let a = load::<f64>(fixtures::BSA).unwrap();
    let b = load::<f64>(fixtures::BSA).unwrap();
    assert_eq!(a, b);
}

#[test]
fn cnot_fixture_matches_builtin() {
    let circuit = load::<f64>(fixtures::CNOT).unwrap();
    let out = circuit.run().unwrap();
    let builtin = protocols::cnot_raw(
        &protocols::photon_qubit(crate::scalar::c_one(), crate::scalar::c_zero()),
        &protocols::spin_plus(),
        &InteractionModel::ideal(),
    )
    .unwrap();
    assert!(phase_distance(&out, &builtin).unwrap() < 1e-12);
}

#[test]
fn lossy_fixture_needs_loss_ports() {
    let model = InteractionModel::from_contrast(&ContrastParams::new(0.8, 6.0).unwrap());
    let plain = load::<f64>(fixtures::CNOT).unwrap().with_model(model);
    assert!(plain.run().is_err());
    let lossy = load::<f64>(fixtures::CNOT_LOSSY).unwrap().with_model(model);
    let out = lossy.run().unwrap();
    assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
}

#[test]
fn bsa_fixture_matches_builtin() {
    let circuit = load::<f64>(fixtures::BSA).unwrap();
    let out = circuit.run().unwrap();
    let builtin = protocols::bsa_raw(&BellState::PsiPlus.state(), &InteractionModel::ideal()).unwrap();
    assert!(phase_distance(&out, &builtin).unwrap() < 1e-12);
    let d = circuit.measure(&out).unwrap();
    assert_eq!(d.support(1e-12).len(), 8);
}

#[test]
fn linear_optics_only_circuit_is_unitary() {
    let src = "modes A B C D\ncomponent s bs in=[A, B] out=[C, D]\ncomponent p phase(phi=pi/3) in=[C] out=[C]\n\
               sequence s p s\ninput photon 1 port=A state=H\n";
    let circuit = load::<f64>(src).unwrap();
    let ast = parse(src).unwrap();
    let c = circuit.initial_state().registers();
    let m = circuit.pipeline().matrix(&c[0], &c[1], None).unwrap();
    assert!(m.unitarity_defect() < 1e-12);
    assert_eq!(ast.count_kind("cavity"), 0);
}

fn random_angle(rng: &mut ChaCha8Rng) -> Angle {
    if rng.gen_bool(0.5) {
        Angle::Radians(rng.gen_range(-10.0..10.0))
    } else {
        Angle::Pi { num: rng.gen_range(-8..=8), den: rng.gen_range(1..=8) }
    }
}

fn random_complex(rng: &mut ChaCha8Rng) -> ComplexLit {
    match rng.gen_range(0..3) {
        0 => ComplexLit { re: rng.gen_range(-1.0..1.0), im: 0.0 },
        1 => ComplexLit { re: 0.0, im: rng.gen_range(-1.0..1.0) },
        _ => ComplexLit { re: rng.gen_range(-1.0..1.0), im: rng.gen_range(-1.0..1.0) },
    }
}

fn random_state(rng: &mut ChaCha8Rng, names: &[&str]) -> StateExpr {
    if rng.gen_bool(0.5) {
        StateExpr::Named(Ident::new(*names.choose(rng).unwrap()))
    } else {
        StateExpr::Amps { first: random_complex(rng), second: ComplexLit { re: 0.5, im: 0.25 }, pos: Pos::default() }
    }
}

fn some(name: &str) -> PortRef {
    Some(Ident::new(name))
}

fn random_ast(rng: &mut ChaCha8Rng) -> CircuitAst {
    let n = rng.gen_range(2..=7);
    let modes: Vec<String> = (0..n).map(|k| format!("P{k}")).collect();
    let mut ast = CircuitAst { modes: modes.iter().map(Ident::new).collect(), ..Default::default() };
    let mut has_cavity = false;
    for k in 0..rng.gen_range(0..=5) {
        let mut pick = modes.clone();
        pick.shuffle(rng);
        let name = Ident::new(format!("c{k}"));
        let one = |kind| ComponentDecl {
            name: name.clone(),
            kind,
            inputs: vec![some(&pick[0])],
            outputs: vec![some(&pick[0])],
            loss: None,
        };
        let decl = match rng.gen_range(0..6) {
            0 | 1 if n >= 4 => ComponentDecl {
                name: name.clone(),
                kind: if rng.gen_bool(0.5) { ComponentKind::Cpbs } else { ComponentKind::Bs },
                inputs: vec![some(&pick[0]), some(&pick[1])],
                outputs: vec![some(&pick[2]), some(&pick[3])],
                loss: None,
            },
            2 => one(ComponentKind::Hwp { theta: random_angle(rng) }),
            3 => one(ComponentKind::Phase { phi: random_angle(rng) }),
            4 if n >= 3 => {
                has_cavity = true;
                let (inputs, outputs) = if rng.gen_bool(0.5) {
                    (vec![some(&pick[0]), some(&pick[1])], vec![some(&pick[0]), some(&pick[1])])
                } else {
                    (vec![some(&pick[0]), None], vec![some(&pick[1]), some(&pick[2])])
                };
                let loss = (n >= 5 && rng.gen_bool(0.5)).then(|| vec![some(&pick[3]), some(&pick[4])]);
                ComponentDecl { name: name.clone(), kind: ComponentKind::Cavity, inputs, outputs, loss }
            }
            _ => one(ComponentKind::Mirror),
        };
        ast.components.push(decl);
    }
    let start = modes[rng.gen_range(0..n)].clone();
    let mut wired: Vec<String> = ast
        .components
        .iter()
        .flat_map(|c| c.inputs.iter().chain(&c.outputs).chain(c.loss.iter().flatten()))
        .flatten()
        .map(|i| i.name.clone())
        .collect();
    wired.push(start.clone());
    for (k, m) in modes.iter().enumerate() {
        if !wired.contains(m) {
            ast.components.push(ComponentDecl {
                name: Ident::new(format!("fill{k}")),
                kind: ComponentKind::Mirror,
                inputs: vec![some(m)],
                outputs: vec![some(m)],
                loss: None,
            });
        }
    }
    let mut seq: Vec<Ident> = ast.components.iter().map(|c| c.name.clone()).collect();
    if !seq.is_empty() {
        for _ in 0..rng.gen_range(0..3) {
            let again = seq[rng.gen_range(0..seq.len())].clone();
            seq.push(again);
        }
    }
    seq.shuffle(rng);
    ast.sequence = seq;

    ast.inputs.push(InputDecl::Photon {
        id: 1,
        port: Ident::new(start.clone()),
        state: random_state(rng, &["R", "L", "H", "V"]),
        pos: Pos::default(),
    });
    let pair = rng.gen_bool(0.4);
    if pair {
        ast.inputs.push(InputDecl::Pair {
            ids: (2, 3),
            port: Ident::new(start),
            state: StateExpr::Named(Ident::new(*["phi+", "phi-", "psi+", "psi-"].choose(rng).unwrap())),
            pos: Pos::default(),
        });
    }
    let spin = has_cavity || rng.gen_bool(0.5);
    if spin {
        ast.inputs
            .push(InputDecl::Spin { state: random_state(rng, &["Up", "Down", "Plus", "Minus"]), pos: Pos::default() });
    }
    let ids: Vec<usize> = if pair { vec![1, 2, 3] } else { vec![1] };
    for id in ids {
        if rng.gen_bool(0.6) {
            let basis = Ident::new(if rng.gen_bool(0.5) { "RL" } else { "HV" });
            ast.measurements.push(MeasureDecl::Photon { id, basis, pos: Pos::default() });
        }
    }
    if spin && rng.gen_bool(0.6) {
        let basis = Ident::new(if rng.gen_bool(0.5) { "UpDown" } else { "PlusMinus" });
        ast.measurements.push(MeasureDecl::Spin { basis, pos: Pos::default() });
    }
    ast
}

#[test]
fn random_asts_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let ast = random_ast(&mut rng);
        let printed = pretty_print(&ast);
        let back = parse(&printed).unwrap_or_else(|e| panic!("{e}\n{printed}"));
        assert_eq!(back, ast, "{printed}");
        assert_eq!(pretty_print(&back), printed);
    }
}
