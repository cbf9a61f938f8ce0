use crate::error::{Error, Result};
use crate::qstate::basis::Basis;
use crate::qstate::operator::OperatorMatrix;
use crate::qstate::register::{RegisterKey, RegisterLabel};
use crate::scalar::{c_one, c_real, c_zero, is_finite, Amp, Real};

/// Dense amplitude vector over a labeled tensor-product basis.
///
/// Amplitudes are indexed row-major in register order: the last register
/// varies fastest. Values are immutable; every operation returns a new
/// state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T: Real> {
    registers: Vec<RegisterLabel>,
    amps: Vec<Amp<T>>,
}

fn strides_of(registers: &[RegisterLabel]) -> Vec<usize> {
    let mut strides = vec![1; registers.len()];
    for k in (0..registers.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * registers[k + 1].dim();
    }
    strides
}

impl<T: Real> StateVector<T> {
    pub fn new(registers: Vec<RegisterLabel>, amps: Vec<Amp<T>>) -> Result<Self> {
        for (i, r) in registers.iter().enumerate() {
            if registers[..i].iter().any(|o| o.same_register(r)) {
                return Err(Error::OverlappingRegister(r.to_string()));
            }
        }
        let dim: usize = registers.iter().map(RegisterLabel::dim).product();
        if amps.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: amps.len() });
        }
        if let Some(i) = amps.iter().position(|z| !is_finite(z)) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { registers, amps })
    }

    pub fn zero(registers: Vec<RegisterLabel>) -> Result<Self> {
        let dim = registers.iter().map(RegisterLabel::dim).product();
        Self::new(registers, vec![c_zero(); dim])
    }

    /// The product basis state named by one label per register.
    pub fn basis_state<S: AsRef<str>>(registers: Vec<RegisterLabel>, labels: &[S]) -> Result<Self> {
        if labels.len() != registers.len() {
            return Err(Error::DimensionMismatch { expected: registers.len(), got: labels.len() });
        }
        let mut s = Self::zero(registers)?;
        let idx = s.index_of(labels)?;
        s.amps[idx] = c_one();
        Ok(s)
    }

    /// Single-register state from its amplitudes.
    pub fn single(register: RegisterLabel, amps: Vec<Amp<T>>) -> Result<Self> {
        Self::new(vec![register], amps)
    }

    pub fn registers(&self) -> &[RegisterLabel] {
        &self.registers
    }

    pub fn amplitudes(&self) -> &[Amp<T>] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// Unit-norm copy; `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        if n == T::zero() {
            return None;
        }
        Some(self.scaled(c_real(T::one() / n)))
    }

    pub fn scaled(&self, factor: Amp<T>) -> Self {
        Self { registers: self.registers.clone(), amps: self.amps.iter().map(|z| z * factor).collect() }
    }

    /// Amplitude-wise sum of two states on identical registers.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_registers(other)?;
        let amps = self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect();
        Ok(Self { registers: self.registers.clone(), amps })
    }

    pub fn position(&self, key: RegisterKey) -> Option<usize> {
        self.registers.iter().position(|r| r.key() == key)
    }

    pub fn register(&self, key: RegisterKey) -> Option<&RegisterLabel> {
        self.registers.iter().find(|r| r.key() == key)
    }

    fn position_checked(&self, key: RegisterKey) -> Result<usize> {
        self.position(key).ok_or_else(|| Error::MissingRegister(format!("{:?}[{}]", key.0, key.1)))
    }

    pub fn strides(&self) -> Vec<usize> {
        strides_of(&self.registers)
    }

    /// Flat index of the basis state named by one label per register.
    pub fn index_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<usize> {
        if labels.len() != self.registers.len() {
            return Err(Error::DimensionMismatch { expected: self.registers.len(), got: labels.len() });
        }
        let strides = self.strides();
        let mut idx = 0;
        for ((reg, label), stride) in self.registers.iter().zip(labels).zip(strides) {
            idx += reg.index_checked(label.as_ref())? * stride;
        }
        Ok(idx)
    }

    /// Per-register basis indices of a flat index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.registers.len()];
        for k in (0..self.registers.len()).rev() {
            let d = self.registers[k].dim();
            out[k] = index % d;
            index /= d;
        }
        out
    }

    pub fn labels(&self, index: usize) -> Vec<&str> {
        self.digits(index).into_iter().zip(&self.registers).map(|(d, r)| r.basis()[d].as_str()).collect()
    }

    pub fn amplitude<S: AsRef<str>>(&self, labels: &[S]) -> Result<Amp<T>> {
        Ok(self.amps[self.index_of(labels)?])
    }

    fn check_same_registers(&self, other: &Self) -> Result<()> {
        if self.registers != other.registers {
            return Err(Error::RegisterMismatch(format!(
                "[{}] vs [{}]",
                list(&self.registers),
                list(&other.registers)
            )));
        }
        Ok(())
    }

    /// Tensor product `self ⊗ other`; registers are concatenated.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if let Some(r) = self.registers.iter().find(|r| other.registers.iter().any(|o| o.same_register(r))) {
            return Err(Error::OverlappingRegister(r.to_string()));
        }
        let mut registers = self.registers.clone();
        registers.extend(other.registers.iter().cloned());
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Ok(Self { registers, amps })
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Amp<T>> {
        self.check_same_registers(other)?;
        Ok(self.amps.iter().zip(&other.amps).fold(c_zero(), |acc, (a, b)| acc + a.conj() * b))
    }

    /// Applies `op` to the registers it names, identity on the rest.
    pub fn apply(&self, op: &OperatorMatrix<T>) -> Result<Self> {
        let strides = self.strides();
        let mut pos = Vec::with_capacity(op.domain().len());
        for reg in op.domain() {
            let p = self.position_checked(reg.key())?;
            if self.registers[p] != *reg {
                return Err(Error::RegisterMismatch(format!(
                    "operator expects {reg} with basis {:?}, state has {:?}",
                    reg.basis(),
                    self.registers[p].basis()
                )));
            }
            pos.push(p);
        }
        let sub_dim = op.dim();
        let offsets: Vec<usize> = (0..sub_dim)
            .map(|mut j| {
                let mut off = 0;
                for (k, reg) in op.domain().iter().enumerate().rev() {
                    off += (j % reg.dim()) * strides[pos[k]];
                    j /= reg.dim();
                }
                off
            })
            .collect();
        let touched = |i: usize| pos.iter().any(|&p| !(i / strides[p]).is_multiple_of(self.registers[p].dim()));

        let mut out = vec![c_zero(); self.dim()];
        let mut gathered = vec![c_zero(); sub_dim];
        for base in (0..self.dim()).filter(|&i| !touched(i)) {
            for (g, off) in gathered.iter_mut().zip(&offsets) {
                *g = self.amps[base + off];
            }
            if gathered.iter().all(|z| *z == c_zero()) {
                continue;
            }
            for (r, off) in offsets.iter().enumerate() {
                let mut acc = c_zero();
                for (cidx, g) in gathered.iter().enumerate() {
                    acc += op.get(r, cidx) * g;
                }
                out[base + off] = acc;
            }
        }
        Ok(Self { registers: self.registers.clone(), amps: out })
    }

    /// Projects register `key` onto basis state `outcome`. Returns the
    /// unnormalized projected state and its squared norm.
    pub fn project(&self, key: RegisterKey, outcome: &str) -> Result<(Self, T)> {
        let p = self.position_checked(key)?;
        let want = self.registers[p].index_checked(outcome)?;
        let stride = self.strides()[p];
        let d = self.registers[p].dim();
        let amps: Vec<Amp<T>> =
            self.amps.iter().enumerate().map(|(i, z)| if (i / stride) % d == want { *z } else { c_zero() }).collect();
        let s = Self { registers: self.registers.clone(), amps };
        let prob = s.norm_sqr();
        Ok((s, prob))
    }

    /// Zeroes every component whose label on register `key` fails `keep`.
    pub fn filter_basis(&self, key: RegisterKey, keep: impl Fn(&str) -> bool) -> Result<Self> {
        let p = self.position_checked(key)?;
        let reg = &self.registers[p];
        let mask: Vec<bool> = reg.basis().iter().map(|n| keep(n)).collect();
        let stride = self.strides()[p];
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, z)| if mask[(i / stride) % reg.dim()] { *z } else { c_zero() })
            .collect();
        Ok(Self { registers: self.registers.clone(), amps })
    }

    /// Contracts the given registers with basis states and drops them:
    /// returns `(⟨labels| ⊗ 1) |self⟩` over the remaining registers and its squared norm.
    pub fn condition(&self, fixed: &[(RegisterKey, &str)]) -> Result<(Self, T)> {
        let mut want = vec![None; self.registers.len()];
        for (key, label) in fixed {
            let p = self.position_checked(*key)?;
            want[p] = Some(self.registers[p].index_checked(label)?);
        }
        let registers: Vec<RegisterLabel> =
            self.registers.iter().zip(&want).filter(|(_, w)| w.is_none()).map(|(r, _)| r.clone()).collect();
        let amps: Vec<Amp<T>> = (0..self.dim())
            .filter(|&i| self.digits(i).iter().zip(&want).all(|(d, w)| w.is_none_or(|w| w == *d)))
            .map(|i| self.amps[i])
            .collect();
        let s = Self { registers, amps };
        let prob = s.norm_sqr();
        Ok((s, prob))
    }

    /// Rewrites register `key` in `target` basis. The register's basis names
    /// change to the target's; amplitudes are `⟨target_k|ψ⟩`.
    pub fn change_basis(&self, key: RegisterKey, target: Basis) -> Result<Self> {
        let p = self.position_checked(key)?;
        let reg = &self.registers[p];
        let incompatible = || Error::IncompatibleBasis { register: reg.to_string(), target: target.to_string() };
        if target.kind() != reg.kind() {
            return Err(incompatible());
        }
        let current = Basis::of_register(reg).ok_or_else(incompatible)?;
        let m = Basis::transition::<T>(current, target);
        let op = OperatorMatrix::new(vec![reg.clone()], vec![m[0][0], m[0][1], m[1][0], m[1][1]])?;
        let mut out = self.apply(&op)?;
        out.registers[p] = reg.with_basis(&target.names())?;
        Ok(out)
    }

    /// Same state with registers permuted into `order` (which must list every register once).
    pub fn reordered(&self, order: &[RegisterKey]) -> Result<Self> {
        if order.len() != self.registers.len() {
            return Err(Error::RegisterMismatch("reorder must list every register".into()));
        }
        let perm: Vec<usize> = order.iter().map(|k| self.position_checked(*k)).collect::<Result<_>>()?;
        let registers: Vec<RegisterLabel> = perm.iter().map(|&p| self.registers[p].clone()).collect();
        let new_strides = strides_of(&registers);
        let mut amps = vec![c_zero(); self.dim()];
        for (i, z) in self.amps.iter().enumerate() {
            let digits = self.digits(i);
            let j: usize = perm.iter().zip(&new_strides).map(|(&p, s)| digits[p] * s).sum();
            amps[j] = *z;
        }
        Self::new(registers, amps)
    }

    /// Renames the id of register `key`.
    pub fn with_register_id(&self, key: RegisterKey, id: usize) -> Result<Self> {
        let p = self.position_checked(key)?;
        let mut registers = self.registers.clone();
        registers[p] = RegisterLabel::new(key.0, id, registers[p].basis())?;
        Self::new(registers, self.amps.clone())
    }
}

/// Overlap fidelity `|⟨a|b⟩|² / (‖a‖²‖b‖²)`, zero if either state vanishes.
pub fn fidelity<T: Real>(a: &StateVector<T>, b: &StateVector<T>) -> Result<T> {
    let ov = a.inner(b)?.norm_sqr();
    let n = a.norm_sqr() * b.norm_sqr();
    Ok(if n == T::zero() { T::zero() } else { ov / n })
}

/// Largest amplitude deviation between `a` and `b` after removing the
/// best global phase, i.e. `max_k |e^{iθ} a_k − b_k|` with `θ = arg⟨a|b⟩`.
pub fn phase_distance<T: Real>(a: &StateVector<T>, b: &StateVector<T>) -> Result<T> {
    let ov = a.inner(b)?;
    let phase = if ov.norm() == T::zero() { c_one() } else { ov / c_real(ov.norm()) };
    Ok(a.amps.iter().zip(&b.amps).fold(T::zero(), |acc, (x, y)| acc.max((x * phase - y).norm())))
}

fn list(regs: &[RegisterLabel]) -> String {
    regs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}
