use std::fmt;

use crate::error::{Error, Result};

/// Physical degree of freedom a register describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RegisterKind {
    Polarization,
    Path,
    Spin,
    LossFlag,
}

/// Prefix that marks a path basis state as a loss mode.
pub const LOSS_PREFIX: &str = "Loss";

/// A labeled tensor factor: kind, owner id (photon index or spin index)
/// and the ordered names of its basis states.
///
/// Two labels address the same register when kind and id agree; the basis
/// list then has to agree as well for any operation combining them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RegisterLabel {
    kind: RegisterKind,
    id: usize,
    basis: Vec<String>,
}

/// Identity of a register, independent of its basis names.
pub type RegisterKey = (RegisterKind, usize);

impl RegisterLabel {
    pub fn new<S: AsRef<str>>(kind: RegisterKind, id: usize, basis: &[S]) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::InvalidRegister(format!("{kind:?}[{id}] has an empty basis")));
        }
        let basis: Vec<String> = basis.iter().map(|s| s.as_ref().to_owned()).collect();
        for (i, name) in basis.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::InvalidRegister(format!("{kind:?}[{id}] has an empty basis name")));
            }
            if basis[..i].contains(name) {
                return Err(Error::InvalidRegister(format!("{kind:?}[{id}] repeats basis name '{name}'")));
            }
        }
        Ok(Self { kind, id, basis })
    }

    /// Photon polarization in the circular basis `[R, L]`.
    pub fn polarization(id: usize) -> Self {
        Self { kind: RegisterKind::Polarization, id, basis: vec!["R".into(), "L".into()] }
    }

    /// Spatial mode of a photon over the given port names.
    pub fn path<S: AsRef<str>>(id: usize, ports: &[S]) -> Result<Self> {
        Self::new(RegisterKind::Path, id, ports)
    }

    /// Electron spin in the `[Up, Down]` basis.
    pub fn spin(id: usize) -> Self {
        Self { kind: RegisterKind::Spin, id, basis: vec!["Up".into(), "Down".into()] }
    }

    pub fn loss_flag(id: usize) -> Self {
        Self { kind: RegisterKind::LossFlag, id, basis: vec!["Alive".into(), "Lost".into()] }
    }

    pub fn kind(&self) -> RegisterKind {
        self.kind
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn key(&self) -> RegisterKey {
        (self.kind, self.id)
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == name)
    }

    pub fn index_checked(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownBasisState { register: self.to_string(), name: name.to_owned() })
    }

    pub fn same_register(&self, other: &RegisterLabel) -> bool {
        self.key() == other.key()
    }

    /// Same register with the basis names replaced (dimension must match).
    pub fn with_basis<S: AsRef<str>>(&self, basis: &[S]) -> Result<Self> {
        if basis.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: basis.len() });
        }
        Self::new(self.kind, self.id, basis)
    }

    /// True for path names reserved for lost photons.
    pub fn is_loss_port(name: &str) -> bool {
        name.starts_with(LOSS_PREFIX)
    }
}

impl fmt::Display for RegisterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            RegisterKind::Polarization => "pol",
            RegisterKind::Path => "path",
            RegisterKind::Spin => "spin",
            RegisterKind::LossFlag => "loss",
        };
        write!(f, "{tag}[{}]", self.id)
    }
}
