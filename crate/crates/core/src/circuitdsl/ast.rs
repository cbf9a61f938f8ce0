use std::f64::consts::PI;
use std::fmt;

/// Source position (1-based). Ignored by equality so that ASTs compare
/// structurally.
#[derive(Clone, Copy, Debug, Default, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    pub fn new(line: usize, column: usize) -> Self {
        Self { line, column }
    }
}

impl PartialEq for Pos {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ident {
    pub name: String,
    pub pos: Pos,
}

impl Ident {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), pos: Pos::default() }
    }
}

/// An angle, either plain radians or a rational multiple of π.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Angle {
    Radians(f64),
    /// `num·π/den`
    Pi {
        num: i64,
        den: u64,
    },
}

impl Angle {
    pub fn radians(&self) -> f64 {
        match *self {
            Angle::Radians(x) => x,
            Angle::Pi { num, den } => num as f64 * PI / den as f64,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ComponentKind {
    Cpbs,
    Bs,
    Hwp { theta: Angle },
    Mirror,
    Phase { phi: Angle },
    Cavity,
}

impl ComponentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ComponentKind::Cpbs => "cpbs",
            ComponentKind::Bs => "bs",
            ComponentKind::Hwp { .. } => "hwp",
            ComponentKind::Mirror => "mirror",
            ComponentKind::Phase { .. } => "phase",
            ComponentKind::Cavity => "cavity",
        }
    }
}

/// `None` stands for `_` (no port).
pub type PortRef = Option<Ident>;

#[derive(Clone, Debug, PartialEq)]
pub struct ComponentDecl {
    pub name: Ident,
    pub kind: ComponentKind,
    pub inputs: Vec<PortRef>,
    pub outputs: Vec<PortRef>,
    pub loss: Option<Vec<PortRef>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexLit {
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StateExpr {
    /// A basis-state name such as `R`, `H`, `Up`, `Plus`, or a Bell state
    /// such as `phi+`.
    Named(Ident),
    /// Amplitudes in the native basis (R/L or Up/Down).
    Amps { first: ComplexLit, second: ComplexLit, pos: Pos },
}

#[derive(Clone, Debug, PartialEq)]
pub enum InputDecl {
    Photon { id: usize, port: Ident, state: StateExpr, pos: Pos },
    Pair { ids: (usize, usize), port: Ident, state: StateExpr, pos: Pos },
    Spin { state: StateExpr, pos: Pos },
}

#[derive(Clone, Debug, PartialEq)]
pub enum MeasureDecl {
    Photon { id: usize, basis: Ident, pos: Pos },
    Spin { basis: Ident, pos: Pos },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CircuitAst {
    pub modes: Vec<Ident>,
    pub components: Vec<ComponentDecl>,
    pub sequence: Vec<Ident>,
    pub inputs: Vec<InputDecl>,
    pub measurements: Vec<MeasureDecl>,
}

impl CircuitAst {
    pub fn component(&self, name: &str) -> Option<&ComponentDecl> {
        self.components.iter().find(|c| c.name.name == name)
    }

    pub fn count_kind(&self, kind: &str) -> usize {
        self.components.iter().filter(|c| c.kind.name() == kind).count()
    }
}
