//! Born-rule outcome enumeration, seeded sampling and distribution
//! comparison.
//!
//! Sampling is reproducible: each draw takes one `u64` from a ChaCha20
//! generator seeded with `seed_from_u64(seed)`, maps it to a uniform in
//! `[0, 1)` as `(x >> 11) · 2⁻⁵³`, and inverts the cumulative distribution
//! over outcomes in ascending key order. Shard `k` of a sharded run uses the
//! seed `splitmix64(seed ^ splitmix64(k + 1))`.

use std::collections::BTreeMap;
use std::fmt;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::qstate::{Basis, RegisterKey, RegisterKind, RegisterLabel, StateVector};
use crate::scalar::Real;

/// Identifies the sampling algorithm in report metadata.
pub const SAMPLER_ID: &str = "chacha20/inverse-cdf/v1";

/// Probability table keyed by outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution<K: Ord, T: Real> {
    entries: BTreeMap<K, T>,
}

impl<K: Ord, T: Real> Default for Distribution<K, T> {
    fn default() -> Self {
        Self { entries: BTreeMap::new() }
    }
}

impl<K: Ord + Clone, T: Real> Distribution<K, T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `p` to the probability of `k`.
    pub fn add(&mut self, k: K, p: T) {
        let e = self.entries.entry(k).or_insert_with(T::zero);
        *e += p;
    }

    pub fn get(&self, k: &K) -> T {
        self.entries.get(k).copied().unwrap_or_else(T::zero)
    }

    pub fn total(&self) -> T {
        self.entries.values().fold(T::zero(), |a, &p| a + p)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, T)> {
        self.entries.iter().map(|(k, &p)| (k, p))
    }

    /// Outcomes with probability above `tol`.
    pub fn support(&self, tol: T) -> Vec<&K> {
        self.entries.iter().filter(|(_, &p)| p > tol).map(|(k, _)| k).collect()
    }

    /// Copy with entries at or below `tol` removed.
    pub fn pruned(&self, tol: T) -> Self {
        Self { entries: self.entries.iter().filter(|(_, &p)| p > tol).map(|(k, &p)| (k.clone(), p)).collect() }
    }

    /// Rescaled to total probability 1. `None` for an empty or null table.
    pub fn normalized(&self) -> Option<Self> {
        let t = self.total();
        if t <= T::zero() {
            return None;
        }
        Some(Self { entries: self.entries.iter().map(|(k, &p)| (k.clone(), p / t)).collect() })
    }

    /// Pushes probabilities through `f`, merging outcomes that collide.
    pub fn map_keys<K2: Ord + Clone>(&self, f: impl Fn(&K) -> K2) -> Distribution<K2, T> {
        let mut out = Distribution::new();
        for (k, &p) in &self.entries {
            out.add(f(k), p);
        }
        out
    }

    pub fn filter(&self, keep: impl Fn(&K) -> bool) -> Self {
        Self { entries: self.entries.iter().filter(|(k, _)| keep(k)).map(|(k, &p)| (k.clone(), p)).collect() }
    }

    /// Empirical frequencies of `counts`.
    pub fn from_counts(counts: &BTreeMap<K, u64>) -> Self {
        let n: u64 = counts.values().sum();
        let mut d = Self::new();
        if n == 0 {
            return d;
        }
        for (k, &c) in counts {
            d.add(k.clone(), T::lit(c as f64 / n as f64));
        }
        d
    }
}

impl<K: Ord, T: Real> FromIterator<(K, T)> for Distribution<K, T> {
    fn from_iter<I: IntoIterator<Item = (K, T)>>(iter: I) -> Self {
        let mut entries = BTreeMap::new();
        for (k, p) in iter {
            let e = entries.entry(k).or_insert_with(T::zero);
            *e += p;
        }
        Self { entries }
    }
}

/// ½ Σ |p − q| over the union of outcomes.
pub fn total_variation<K: Ord + Clone, T: Real>(a: &Distribution<K, T>, b: &Distribution<K, T>) -> T {
    let mut sum = T::zero();
    for (k, p) in a.iter() {
        sum += (p - b.get(k)).abs();
    }
    for (k, q) in b.iter() {
        if !a.entries.contains_key(k) {
            sum += q.abs();
        }
    }
    sum / T::lit(2.0)
}

/// Labels of the measured registers, in the order they were requested.
pub type Outcome = Vec<String>;

/// Sample counts per outcome.
pub type Counts<K> = BTreeMap<K, u64>;

/// Exact outcome probabilities for measuring the listed registers, each in
/// the given basis (`None` keeps the register's current labels). Registers
/// not listed are summed over.
pub fn enumerate<T: Real>(
    s: &StateVector<T>,
    bases: &[(RegisterKey, Option<Basis>)],
) -> Result<Distribution<Outcome, T>> {
    let mut rotated = s.clone();
    for (key, basis) in bases {
        if let Some(b) = basis {
            rotated = rotated.change_basis(*key, *b)?;
        }
    }
    let positions: Vec<usize> = bases
        .iter()
        .map(|(key, _)| rotated.position(*key).ok_or_else(|| Error::MissingRegister(format!("{:?}[{}]", key.0, key.1))))
        .collect::<Result<_>>()?;
    let mut d = Distribution::new();
    for (i, z) in rotated.amplitudes().iter().enumerate() {
        let p = z.norm_sqr();
        if p == T::zero() {
            continue;
        }
        let digits = rotated.digits(i);
        let key: Outcome = positions.iter().map(|&q| rotated.registers()[q].basis()[digits[q]].clone()).collect();
        d.add(key, p);
    }
    Ok(d)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PhotonOutcome {
    Detected { port: String, pol: String },
    Lost,
}

impl fmt::Display for PhotonOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhotonOutcome::Detected { port, pol } => write!(f, "{pol}@{port}"),
            PhotonOutcome::Lost => f.write_str("lost"),
        }
    }
}

/// One joint detection event: where each photon was seen, and the spin
/// readout.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OutcomeRecord {
    pub photons: Vec<PhotonOutcome>,
    pub spin: String,
}

impl OutcomeRecord {
    pub fn any_lost(&self) -> bool {
        self.photons.contains(&PhotonOutcome::Lost)
    }
}

impl fmt::Display for OutcomeRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.photons {
            write!(f, "{p} ")?;
        }
        f.write_str(&self.spin)
    }
}

/// Distribution over [`OutcomeRecord`]s: every listed photon's path and
/// polarization (in `pol_basis`) plus the spin (in `spin_basis`). Paths whose
/// name starts with `Loss` are reported as [`PhotonOutcome::Lost`].
pub fn record_distribution<T: Real>(
    s: &StateVector<T>,
    photons: &[usize],
    pol_basis: Basis,
    spin: usize,
    spin_basis: Basis,
) -> Result<Distribution<OutcomeRecord, T>> {
    let mut bases = Vec::new();
    for &k in photons {
        bases.push(((RegisterKind::Polarization, k), Some(pol_basis)));
        bases.push(((RegisterKind::Path, k), None));
    }
    bases.push(((RegisterKind::Spin, spin), Some(spin_basis)));
    let d = enumerate(s, &bases)?;
    Ok(d.map_keys(|o| {
        let photons = o[..o.len() - 1]
            .chunks(2)
            .map(|pp| {
                if RegisterLabel::is_loss_port(&pp[1]) {
                    PhotonOutcome::Lost
                } else {
                    PhotonOutcome::Detected { port: pp[1].clone(), pol: pp[0].clone() }
                }
            })
            .collect();
        OutcomeRecord { photons, spin: o[o.len() - 1].clone() }
    }))
}

/// SplitMix64 finalizer, used to derive shard seeds.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn shard_seed(seed: u64, shard: u64) -> u64 {
    splitmix64(seed ^ splitmix64(shard.wrapping_add(1)))
}

/// Draws `n` outcomes from `d` (renormalized to its total).
pub fn sample_distribution<K: Ord + Clone, T: Real>(d: &Distribution<K, T>, n: u64, seed: u64) -> Counts<K> {
    let mut counts = Counts::new();
    let keys: Vec<&K> = d.entries.keys().collect();
    let mut cdf = Vec::with_capacity(keys.len());
    let mut acc = 0.0f64;
    for p in d.entries.values() {
        acc += p.to_f64().unwrap_or(0.0).max(0.0);
        cdf.push(acc);
    }
    if n == 0 || acc <= 0.0 {
        return counts;
    }
    // Clamp to the last outcome with positive weight.
    let last = d.entries.values().rposition(|p| p.to_f64().unwrap_or(0.0) > 0.0).unwrap_or(0);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut hits = vec![0u64; keys.len()];
    for _ in 0..n {
        let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        let target = u * acc;
        let i = cdf.partition_point(|&c| c <= target).min(last);
        hits[i] += 1;
    }
    for (k, h) in keys.into_iter().zip(hits) {
        if h > 0 {
            counts.insert(k.clone(), h);
        }
    }
    counts
}

/// Splits `n` draws over `shards` independently seeded workers (threads)
/// and sums the counts. The result depends only on `(d, n, seed, shards)`.
pub fn sample_sharded<K, T>(d: &Distribution<K, T>, n: u64, seed: u64, shards: u64) -> Counts<K>
where
    K: Ord + Clone + Send + Sync,
    T: Real,
{
    let shards = shards.max(1);
    let parts: Vec<Counts<K>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..shards)
            .map(|k| {
                let m = n / shards + u64::from(k < n % shards);
                scope.spawn(move || sample_distribution(d, m, shard_seed(seed, k)))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sampling shard panicked")).collect()
    });
    let mut total = Counts::new();
    for part in parts {
        for (k, c) in part {
            *total.entry(k).or_insert(0) += c;
        }
    }
    total
}

/// Samples `n` measurement outcomes of `s`.
pub fn sample<T: Real>(
    s: &StateVector<T>,
    bases: &[(RegisterKey, Option<Basis>)],
    n: u64,
    seed: u64,
) -> Result<Counts<Outcome>> {
    Ok(sample_distribution(&enumerate(s, bases)?, n, seed))
}
