//! Measurement bases for two-level registers.
//!
//! Polarization: `H = (R + L)/√2`, `V = −i(R − L)/√2`.
//! Spin: `|±⟩ = (|Up⟩ ± |Down⟩)/√2`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qstate::register::{RegisterKind, RegisterLabel};
use crate::scalar::{c, c_one, c_zero, Amp, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basis {
    RL,
    HV,
    UpDown,
    PlusMinus,
}

impl Basis {
    pub fn names(self) -> [&'static str; 2] {
        match self {
            Basis::RL => ["R", "L"],
            Basis::HV => ["H", "V"],
            Basis::UpDown => ["Up", "Down"],
            Basis::PlusMinus => ["Plus", "Minus"],
        }
    }

    pub fn kind(self) -> RegisterKind {
        match self {
            Basis::RL | Basis::HV => RegisterKind::Polarization,
            Basis::UpDown | Basis::PlusMinus => RegisterKind::Spin,
        }
    }

    /// The native (computational) basis for a register kind.
    pub fn native(kind: RegisterKind) -> Option<Basis> {
        match kind {
            RegisterKind::Polarization => Some(Basis::RL),
            RegisterKind::Spin => Some(Basis::UpDown),
            _ => None,
        }
    }

    /// Recognizes the basis a register's labels currently name.
    pub fn of_register(reg: &RegisterLabel) -> Option<Basis> {
        [Basis::RL, Basis::HV, Basis::UpDown, Basis::PlusMinus]
            .into_iter()
            .find(|b| b.kind() == reg.kind() && reg.basis() == b.names())
    }

    /// Columns are the basis vectors expressed in the native basis:
    /// `m[row][col] = ⟨native_row | basis_col⟩`.
    pub(crate) fn vectors<T: Real>(self) -> [[Amp<T>; 2]; 2] {
        let h = T::frac_1_sqrt_2();
        match self {
            Basis::RL | Basis::UpDown => [[c_one(), c_zero()], [c_zero(), c_one()]],
            Basis::HV => [[c(h, T::zero()), c(T::zero(), -h)], [c(h, T::zero()), c(T::zero(), h)]],
            Basis::PlusMinus => [[c(h, T::zero()), c(h, T::zero())], [c(h, T::zero()), c(-h, T::zero())]],
        }
    }

    /// Matrix taking amplitudes in `from` to amplitudes in `to`: `B_to† · B_from`.
    pub(crate) fn transition<T: Real>(from: Basis, to: Basis) -> [[Amp<T>; 2]; 2] {
        let f = from.vectors::<T>();
        let t = to.vectors::<T>();
        let mut out = [[c_zero(); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (col, cell) in row.iter_mut().enumerate() {
                *cell = (0..2).fold(c_zero(), |acc, k| acc + t[k][r].conj() * f[k][col]);
            }
        }
        out
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::RL => "RL",
            Basis::HV => "HV",
            Basis::UpDown => "UpDown",
            Basis::PlusMinus => "PlusMinus",
        })
    }
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "RL" => Ok(Basis::RL),
            "HV" => Ok(Basis::HV),
            "UpDown" => Ok(Basis::UpDown),
            "PlusMinus" => Ok(Basis::PlusMinus),
            other => Err(Error::IncompatibleBasis { register: "-".into(), target: other.into() }),
        }
    }
}
