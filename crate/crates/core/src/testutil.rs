//! Random states and unitaries for unit tests.

use rand::Rng;

use crate::qstate::{OperatorMatrix, RegisterLabel, StateVector};
use crate::scalar::{c, c_zero, Amp};

pub(crate) fn random_amps<R: Rng>(rng: &mut R, n: usize) -> Vec<Amp<f64>> {
    (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

/// Normalized random state.
pub(crate) fn random_state<R: Rng>(rng: &mut R, registers: Vec<RegisterLabel>) -> StateVector<f64> {
    let n = registers.iter().map(RegisterLabel::dim).product();
    StateVector::new(registers, random_amps(rng, n)).unwrap().normalized().unwrap()
}

/// Unitary from Gram–Schmidt orthonormalization of a random complex matrix.
pub(crate) fn random_unitary<R: Rng>(rng: &mut R, domain: Vec<RegisterLabel>) -> OperatorMatrix<f64> {
    let d: usize = domain.iter().map(RegisterLabel::dim).product();
    let mut cols: Vec<Vec<Amp<f64>>> = Vec::new();
    while cols.len() < d {
        let mut v = random_amps(rng, d);
        for q in &cols {
            let ov = q.iter().zip(&v).fold(c_zero::<f64>(), |acc, (a, b)| acc + a.conj() * b);
            for (x, y) in v.iter_mut().zip(q) {
                *x -= ov * y;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-6 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    OperatorMatrix::from_columns(domain, &cols).unwrap()
}
