//! Reference implementation used by the integration tests.
//!
//! Everything here is built from plain dense matrices over explicit index
//! layouts, without going through the library's operators. Local photon
//! spaces are `(pol, path)` with index `pol * P + path`; the cavity acts on
//! `(pol, path, spin)` with index `(pol * P + path) * 2 + spin`.
//! Polarization 0 = R, 1 = L; spin 0 = Up, 1 = Down.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub const R: usize = 0;
pub const L: usize = 1;
pub const UP: usize = 0;
pub const DOWN: usize = 1;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Random normalized vector of length `n`.
pub fn random_vec(rng: &mut impl Rng, n: usize) -> Vec<C> {
    loop {
        let v: Vec<C> = (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

pub fn random_qubit(rng: &mut impl Rng) -> [C; 2] {
    let v = random_vec(rng, 2);
    [v[0], v[1]]
}

pub fn max_diff(a: &[C], b: &[C]) -> f64 {
    assert_eq!(a.len(), b.len(), "length mismatch");
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn norm_sqr(v: &[C]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Distance after removing the best global phase.
pub fn phase_diff(a: &[C], b: &[C]) -> f64 {
    let ov: C = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let ph = if ov.norm() > 0.0 { ov / ov.norm() } else { c(1.0, 0.0) };
    let a2: Vec<C> = a.iter().map(|x| x * ph).collect();
    max_diff(&a2, b)
}

pub fn kron(a: &[C], b: &[C]) -> Vec<C> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

pub fn basis(n: usize, k: usize) -> Vec<C> {
    let mut v = vec![c(0.0, 0.0); n];
    v[k] = c(1.0, 0.0);
    v
}

#[derive(Clone, Debug)]
pub struct Mat {
    pub n: usize,
    pub a: Vec<C>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Self { n, a: vec![c(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for k in 0..n {
            m.a[k * n + k] = c(1.0, 0.0);
        }
        m
    }

    pub fn get(&self, r: usize, col: usize) -> C {
        self.a[r * self.n + col]
    }

    pub fn set(&mut self, r: usize, col: usize, v: C) {
        self.a[r * self.n + col] = v;
    }

    /// Replaces column `col` by `v`.
    pub fn set_col(&mut self, col: usize, v: &[C]) {
        for (r, x) in v.iter().enumerate() {
            self.set(r, col, *x);
        }
    }

    /// `self * rhs`
    pub fn mul(&self, rhs: &Mat) -> Mat {
        let n = self.n;
        let mut out = Mat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.get(i, k);
                if x.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.a[i * n + j] += x * rhs.a[k * n + j];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[C]) -> Vec<C> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    pub fn adjoint(&self) -> Mat {
        let mut m = Mat::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(j, i, self.get(i, j).conj());
            }
        }
        m
    }

    pub fn max_diff(&self, other: &Mat) -> f64 {
        max_diff(&self.a, &other.a)
    }
}

/// Embeds `local`, acting on factors `targets` (in that order) of a space
/// with factor dimensions `dims`, as a dense matrix on the whole space.
pub fn embed(local: &Mat, dims: &[usize], targets: &[usize]) -> Mat {
    let total: usize = dims.iter().product();
    let digits = |mut k: usize| {
        let mut d = vec![0; dims.len()];
        for i in (0..dims.len()).rev() {
            d[i] = k % dims[i];
            k /= dims[i];
        }
        d
    };
    let index = |d: &[usize]| d.iter().zip(dims).fold(0, |acc, (x, n)| acc * n + x);
    let local_index = |d: &[usize]| targets.iter().fold(0, |acc, &t| acc * dims[t] + d[t]);
    let mut m = Mat::zeros(total);
    for col in 0..total {
        let d = digits(col);
        let lc = local_index(&d);
        for lr in 0..local.n {
            let v = local.get(lr, lc);
            if v.norm_sqr() == 0.0 {
                continue;
            }
            let mut rd = d.clone();
            let mut rest = lr;
            for &t in targets.iter().rev() {
                rd[t] = rest % dims[t];
                rest /= dims[t];
            }
            m.set(index(&rd), col, v);
        }
    }
    m
}

fn pp(np: usize, p: usize, q: usize) -> usize {
    p * np + q
}

/// Reciprocal pairing: `a` and `b` exchange amplitude `amp` both ways.
fn link(m: &mut Mat, a: usize, b: usize, amp: C) {
    m.set(b, a, m.get(b, a) + amp);
    m.set(a, b, m.get(a, b) + amp);
}

fn clear_cols(m: &mut Mat, np: usize, ports: &[usize]) {
    for &q in ports {
        for p in 0..2 {
            let k = pp(np, p, q);
            m.set(k, k, c(0.0, 0.0));
        }
    }
}

/// c-PBS: R from `a` and L from `b` leave on `r_out`; L from `a` and R from
/// `b` leave on `l_out`.
pub fn cpbs(np: usize, a: usize, b: usize, r_out: usize, l_out: usize) -> Mat {
    let mut m = Mat::identity(2 * np);
    clear_cols(&mut m, np, &[a, b, r_out, l_out]);
    let one = c(1.0, 0.0);
    link(&mut m, pp(np, R, a), pp(np, R, r_out), one);
    link(&mut m, pp(np, L, a), pp(np, L, l_out), one);
    link(&mut m, pp(np, L, b), pp(np, L, r_out), one);
    link(&mut m, pp(np, R, b), pp(np, R, l_out), one);
    m
}

/// 50/50 beamsplitter, `a → (c + i d)/√2`, `b → (i c + d)/√2`.
pub fn bs(np: usize, a: usize, b: usize, oc: usize, od: usize) -> Mat {
    let mut m = Mat::identity(2 * np);
    clear_cols(&mut m, np, &[a, b, oc, od]);
    let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let ih = c(0.0, std::f64::consts::FRAC_1_SQRT_2);
    for p in 0..2 {
        link(&mut m, pp(np, p, a), pp(np, p, oc), h);
        link(&mut m, pp(np, p, a), pp(np, p, od), ih);
        link(&mut m, pp(np, p, b), pp(np, p, oc), ih);
        link(&mut m, pp(np, p, b), pp(np, p, od), h);
    }
    m
}

/// Mirror: swaps R and L on path `q`.
pub fn mirror(np: usize, q: usize) -> Mat {
    let mut m = Mat::identity(2 * np);
    clear_cols(&mut m, np, &[q]);
    link(&mut m, pp(np, R, q), pp(np, L, q), c(1.0, 0.0));
    m
}

pub fn phase(np: usize, q: usize, phi: f64) -> Mat {
    let mut m = Mat::identity(2 * np);
    for p in 0..2 {
        let k = pp(np, p, q);
        m.set(k, k, C::from_polar(1.0, phi));
    }
    m
}

/// Cavity amplitudes: coupled reflect/transmit, uncoupled reflect/transmit.
#[derive(Clone, Copy, Debug)]
pub struct Amps {
    pub cr: f64,
    pub ct: f64,
    pub ur: f64,
    pub ut: f64,
}

pub const IDEAL: Amps = Amps { cr: 1.0, ct: 0.0, ur: 0.0, ut: 1.0 };

/// One side of the cavity: where photons come in, where the reflected part
/// leaves, and where lost amplitude goes.
#[derive(Clone, Copy, Debug)]
pub struct Port {
    pub input: Option<usize>,
    pub output: usize,
    pub loss: Option<usize>,
}

/// Cavity on `(pol, path, spin)`. Only columns of the fed inputs are set;
/// every other basis state is left as identity.
///
/// A photon has `s_z = +1` when it is R going up (fed from below) or L going
/// down (fed from above). `s_z = +1` couples to Up, `s_z = −1` to Down.
/// Coupled: reflected with R↔L, amplitude `cr`; transmitted `i·ct`.
/// Uncoupled: reflected with R↔L, amplitude `i·ur`; transmitted `−ut`.
pub fn cavity(np: usize, below: Port, above: Port, m: Amps) -> Mat {
    let dim = 4 * np;
    let at = |p: usize, q: usize, s: usize| (p * np + q) * 2 + s;
    let mut out = Mat::identity(dim);
    for (from_below, here, there) in [(true, below, above), (false, above, below)] {
        let Some(q_in) = here.input else { continue };
        for p in 0..2 {
            for s in 0..2 {
                let sz_plus = (p == R) == from_below;
                let coupled = sz_plus == (s == UP);
                let (refl, trans) = if coupled { (c(m.cr, 0.0), c(0.0, m.ct)) } else { (c(0.0, m.ur), c(-m.ut, 0.0)) };
                let (rr, tt) = if coupled { (m.cr, m.ct) } else { (m.ur, m.ut) };
                let lost = (1.0 - rr * rr - tt * tt).max(0.0).sqrt();
                let mut col = vec![c(0.0, 0.0); dim];
                col[at(1 - p, here.output, s)] += refl;
                col[at(p, there.output, s)] += trans;
                if lost > 0.0 {
                    col[at(p, here.loss.expect("loss port"), s)] += c(lost, 0.0);
                }
                out.set_col(at(p, q_in, s), &col);
            }
        }
    }
    out
}

/// Amplitudes obtained from `T_max = q` and Purcell factor `fp`.
pub fn contrast_amps(q: f64, fp: f64) -> Amps {
    let t_min = q / ((1.0 + fp) * (1.0 + fp));
    Amps { cr: (q - t_min).sqrt(), ct: t_min.sqrt(), ur: 0.0, ut: q.sqrt() }
}

// ------------------------------------------------------ protocol oracles

/// CNOT circuit for one photon: paths `A B C D [LossB LossC]`.
/// Returns the dense operator on `(pol, path, spin)`.
pub fn cnot_operator(m: Amps, lossy: bool) -> (Mat, usize) {
    let np = if lossy { 6 } else { 4 };
    let (a, b, cc, d) = (0, 1, 2, 3);
    let dims = [2, np, 2];
    let on_photon = |x: &Mat| embed(x, &dims, &[0, 1]);
    let split = on_photon(&cpbs(np, a, d, cc, b));
    let shift = on_photon(&phase(np, cc, std::f64::consts::PI));
    let loss = |k: usize| if lossy { Some(k) } else { None };
    let cav = cavity(
        np,
        Port { input: Some(b), output: b, loss: loss(4) },
        Port { input: Some(cc), output: cc, loss: loss(5) },
        m,
    );
    let total = split.mul(&shift).mul(&cav).mul(&shift).mul(&split);
    (total, np)
}

/// Analyzer for one photon: paths `A Rf T C D [LossA]`, on
/// `(pol, path, spin)`.
pub fn bsa_operator(m: Amps, lossy: bool) -> (Mat, usize) {
    let np = if lossy { 6 } else { 5 };
    let (a, rf, t, oc, od) = (0, 1, 2, 3, 4);
    let dims = [2, np, 2];
    let cav = cavity(
        np,
        Port { input: Some(a), output: rf, loss: if lossy { Some(5) } else { None } },
        Port { input: None, output: t, loss: None },
        m,
    );
    let mir = embed(&mirror(np, t), &dims, &[0, 1]);
    let split = embed(&bs(np, t, rf, oc, od), &dims, &[0, 1]);
    (split.mul(&mir).mul(&cav), np)
}

/// Spin preparation: paths `A T [LossA]`, cavity fed from below on `A`,
/// reflected light back into `A`.
pub fn spin_prep_operator(m: Amps, lossy: bool) -> (Mat, usize) {
    let np = if lossy { 3 } else { 2 };
    let cav = cavity(
        np,
        Port { input: Some(0), output: 0, loss: if lossy { Some(2) } else { None } },
        Port { input: None, output: 1, loss: None },
        m,
    );
    (cav, np)
}

/// Two photons sharing one spin on `(pol1, path1, pol2, path2, spin)`;
/// `single` acts on `(pol, path, spin)` of one photon.
pub fn two_photon_operator(single: &Mat, np: usize) -> Mat {
    let dims = [2, np, 2, np, 2];
    let first = embed(single, &dims, &[0, 1, 4]);
    let second = embed(single, &dims, &[2, 3, 4]);
    second.mul(&first)
}

/// `(1/√2){|+⟩[(α₁α₂+β₁β₂)φ⁺ + (α₁β₂+β₁α₂)ψ⁺] + |−⟩[(α₁α₂−β₁β₂)φ⁻ + (α₁β₂−β₁α₂)ψ⁻]}`
/// over `(pol1, pol2, spin)`.
pub fn two_photon_entangled(p1: [C; 2], p2: [C; 2]) -> Vec<C> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let [a1, b1] = p1;
    let [a2, b2] = p2;
    let plus = [c(h, 0.0), c(h, 0.0)];
    let minus = [c(h, 0.0), c(-h, 0.0)];
    let bell = |rr: f64, rl: f64, lr: f64, ll: f64| [c(h * rr, 0.0), c(h * rl, 0.0), c(h * lr, 0.0), c(h * ll, 0.0)];
    let phi_p = bell(1.0, 0.0, 0.0, 1.0);
    let phi_m = bell(1.0, 0.0, 0.0, -1.0);
    let psi_p = bell(0.0, 1.0, 1.0, 0.0);
    let psi_m = bell(0.0, 1.0, -1.0, 0.0);
    let mut out = vec![c(0.0, 0.0); 8];
    let terms = [
        (a1 * a2 + b1 * b2, phi_p, plus),
        (a1 * b2 + b1 * a2, psi_p, plus),
        (a1 * a2 - b1 * b2, phi_m, minus),
        (a1 * b2 - b1 * a2, psi_m, minus),
    ];
    for (coef, photons, spin) in terms {
        let v = kron(&photons, &spin);
        for (o, x) in out.iter_mut().zip(v) {
            *o += coef * x * h;
        }
    }
    out
}

// ---------------------------------------------------------- DSL corpus

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn qc_files(dir: &Path) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap_or_else(|e| panic!("reading {}: {e}", dir.display()))
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "qc"))
        .collect();
    files.sort();
    files
}

/// Expected error annotation `# expect: LINE:COL Kind` on the first line.
pub fn expectation(src: &str) -> (usize, usize, String) {
    let first = src.lines().next().unwrap_or("").trim_end_matches('\r');
    let rest = first.strip_prefix("# expect:").expect("annotation line").trim();
    let (pos, kind) = rest.split_once(' ').expect("position and kind");
    let (l, col) = pos.split_once(':').expect("line:col");
    (l.parse().expect("line"), col.parse().expect("column"), kind.trim().to_owned())
}
