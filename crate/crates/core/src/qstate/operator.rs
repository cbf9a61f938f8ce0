use crate::error::{Error, Result};
use crate::qstate::register::RegisterLabel;
use crate::qstate::state::StateVector;
use crate::scalar::{c_one, c_zero, is_finite, Amp, Real};

/// Dense square complex matrix acting on the product space of `domain`.
///
/// Entries are row-major; row and column indices follow the same
/// row-major layout over the domain registers as [`StateVector`].
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix<T: Real> {
    domain: Vec<RegisterLabel>,
    entries: Vec<Amp<T>>,
}

fn product_dim(domain: &[RegisterLabel]) -> usize {
    domain.iter().map(RegisterLabel::dim).product()
}

fn check_domain(domain: &[RegisterLabel]) -> Result<()> {
    for (i, r) in domain.iter().enumerate() {
        if domain[..i].iter().any(|o| o.same_register(r)) {
            return Err(Error::OverlappingRegister(r.to_string()));
        }
    }
    Ok(())
}

impl<T: Real> OperatorMatrix<T> {
    pub fn new(domain: Vec<RegisterLabel>, entries: Vec<Amp<T>>) -> Result<Self> {
        check_domain(&domain)?;
        let dim = product_dim(&domain);
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: entries.len() });
        }
        if let Some(i) = entries.iter().position(|z| !is_finite(z)) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { domain, entries })
    }

    pub fn from_fn(domain: Vec<RegisterLabel>, f: impl Fn(usize, usize) -> Amp<T>) -> Result<Self> {
        let dim = product_dim(&domain);
        let entries = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Self::new(domain, entries)
    }

    pub fn identity(domain: Vec<RegisterLabel>) -> Result<Self> {
        Self::from_fn(domain, |r, c| if r == c { c_one() } else { c_zero() })
    }

    /// Builds the operator column by column from its action on each domain basis state.
    pub fn from_columns(domain: Vec<RegisterLabel>, columns: &[Vec<Amp<T>>]) -> Result<Self> {
        let dim = product_dim(&domain);
        if columns.len() != dim || columns.iter().any(|c| c.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: columns.len() });
        }
        Self::from_fn(domain, |r, c| columns[c][r])
    }

    pub fn domain(&self) -> &[RegisterLabel] {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        product_dim(&self.domain)
    }

    pub fn entries(&self) -> &[Amp<T>] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Amp<T> {
        self.entries[row * self.dim() + col]
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim();
        let entries = (0..d * d).map(|k| self.entries[(k % d) * d + k / d].conj()).collect();
        Self { domain: self.domain.clone(), entries }
    }

    /// Matrix product `self · rhs`, i.e. `rhs` acts first.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.domain != rhs.domain {
            return Err(Error::RegisterMismatch("operator domains differ".into()));
        }
        let d = self.dim();
        let mut entries = vec![c_zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a == c_zero() {
                    continue;
                }
                for j in 0..d {
                    entries[i * d + j] += a * rhs.entries[k * d + j];
                }
            }
        }
        Ok(Self { domain: self.domain.clone(), entries })
    }

    /// Largest entry-wise deviation of `U·U†` from the identity.
    pub fn unitarity_defect(&self) -> T {
        let d = self.dim();
        let mut worst = T::zero();
        for i in 0..d {
            for j in 0..d {
                let mut acc = c_zero::<T>();
                for k in 0..d {
                    acc += self.entries[i * d + k] * self.entries[j * d + k].conj();
                }
                if i == j {
                    acc -= c_one();
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Same operator on a larger domain (identity on the added registers).
    /// `domain` must contain every register of `self.domain`.
    pub fn extend_to(&self, domain: Vec<RegisterLabel>) -> Result<Self> {
        let dim = product_dim(&domain);
        let mut columns = Vec::with_capacity(dim);
        for col in 0..dim {
            let mut amps = vec![c_zero(); dim];
            amps[col] = c_one();
            let basis = StateVector::new(domain.clone(), amps)?;
            columns.push(basis.apply(self)?.amplitudes().to_vec());
        }
        Self::from_columns(domain, &columns)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn rejects_non_square() {
        let dom = vec![RegisterLabel::polarization(1)];
        assert!(OperatorMatrix::<f64>::new(dom, vec![c_one(); 3]).is_err());
    }

    #[test]
    fn adjoint_of_product() {
        let dom = vec![RegisterLabel::polarization(1)];
        let a =
            OperatorMatrix::<f64>::new(dom.clone(), vec![c(1.0, 2.0), c(0.0, 1.0), c(3.0, 0.0), c(-1.0, 1.0)]).unwrap();
        let b = OperatorMatrix::<f64>::new(dom, vec![c(0.5, 0.0), c(1.0, -1.0), c(2.0, 2.0), c(0.0, 0.0)]).unwrap();
        let lhs = a.matmul(&b).unwrap().adjoint();
        let rhs = b.adjoint().matmul(&a.adjoint()).unwrap();
        for (x, y) in lhs.entries().iter().zip(rhs.entries()) {
            assert!((x - y).norm() < 1e-12);
        }
    }
}
