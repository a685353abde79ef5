use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Residuals `y`, one entry per epoch.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalDataset {
    residuals: Vec<f64>,
}

impl SignalDataset {
    pub fn new(residuals: Vec<f64>) -> Result<Self> {
        if residuals.is_empty() {
            return Err(Error::domain("dataset has no residuals"));
        }
        if let Some(i) = residuals.iter().position(|y| !y.is_finite()) {
            return Err(Error::domain(format!("residual {i} is not finite")));
        }
        Ok(Self { residuals })
    }

    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn len(&self) -> usize {
        self.residuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residuals.is_empty()
    }

    /// Splits at `mid` into two nonempty halves.
    pub fn split_at(&self, mid: usize) -> Result<(SignalDataset, SignalDataset)> {
        if mid == 0 || mid >= self.len() {
            return Err(Error::usage(format!(
                "split point {mid} must leave both halves nonempty (n = {})",
                self.len()
            )));
        }
        let (a, b) = self.residuals.split_at(mid);
        Ok((SignalDataset::new(a.to_vec())?, SignalDataset::new(b.to_vec())?))
    }

    pub fn concat(parts: &[SignalDataset]) -> Result<SignalDataset> {
        SignalDataset::new(parts.iter().flat_map(|p| p.residuals.iter().copied()).collect())
    }
}

/// Data a model is scored against: residual vectors for null/signal models,
/// a single scalar for location/point-prediction models.
#[derive(Debug, Clone, PartialEq)]
pub enum Observation {
    Vector(SignalDataset),
    Scalar(f64),
}

impl Observation {
    pub fn scalar(y: f64) -> Result<Self> {
        if !y.is_finite() {
            return Err(Error::domain(format!("observation {y} is not finite")));
        }
        Ok(Observation::Scalar(y))
    }

    pub fn vector(residuals: Vec<f64>) -> Result<Self> {
        Ok(Observation::Vector(SignalDataset::new(residuals)?))
    }

    pub fn len(&self) -> usize {
        match self {
            Observation::Vector(d) => d.len(),
            Observation::Scalar(_) => 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn values(&self) -> &[f64] {
        match self {
            Observation::Vector(d) => d.residuals(),
            Observation::Scalar(y) => std::slice::from_ref(y),
        }
    }

    fn tag(&self) -> u8 {
        match self {
            Observation::Vector(_) => b'v',
            Observation::Scalar(_) => b's',
        }
    }
}

impl From<SignalDataset> for Observation {
    fn from(d: SignalDataset) -> Self {
        Observation::Vector(d)
    }
}

/// Content hash of the data an evidence value was computed on.
///
/// A sequence of vector batches hashes like their concatenation, so
/// sequential and all-at-once evidence carry the same fingerprint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DataFingerprint(u64);

impl DataFingerprint {
    pub fn of(data: &Observation) -> Self {
        Self::of_batches(std::slice::from_ref(data))
    }

    pub fn of_batches(batches: &[Observation]) -> Self {
        let mut hasher = Sha256::new();
        if let Some(first) = batches.first() {
            hasher.update([first.tag()]);
        }
        for batch in batches {
            for y in batch.values() {
                hasher.update(y.to_bits().to_le_bytes());
            }
        }
        let digest = hasher.finalize();
        let mut head = [0u8; 8];
        head.copy_from_slice(&digest[..8]);
        DataFingerprint(u64::from_le_bytes(head))
    }

    pub fn value(&self) -> u64 {
        self.0
    }
}
