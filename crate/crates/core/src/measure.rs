use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finitely many point masses: strictly increasing atoms with positive masses.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    atoms: Vec<f64>,
    masses: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        if atoms.len() != masses.len() {
            return Err(Error::InvalidArgument(format!(
                "{} atoms but {} masses",
                atoms.len(),
                masses.len()
            )));
        }
        if atoms.iter().chain(&masses).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite atom or mass".into()));
        }
        if masses.iter().any(|&w| w <= 0.0) {
            return Err(Error::InvalidArgument("masses must be positive".into()));
        }
        if atoms.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("atoms must be strictly increasing".into()));
        }
        Ok(DiscreteMeasure { atoms, masses })
    }

    /// Sorts `(atom, mass)` pairs and merges exact duplicates.
    pub fn from_pairs(mut pairs: Vec<(f64, f64)>) -> Result<Self> {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut atoms: Vec<f64> = Vec::with_capacity(pairs.len());
        let mut masses: Vec<f64> = Vec::with_capacity(pairs.len());
        for (t, w) in pairs {
            if atoms.last() == Some(&t) {
                *masses.last_mut().unwrap() += w;
            } else {
                atoms.push(t);
                masses.push(w);
            }
        }
        DiscreteMeasure::new(atoms, masses)
    }

    pub fn empty() -> Self {
        DiscreteMeasure::default()
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.atoms.iter().copied().zip(self.masses.iter().copied())
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// Union of two measures.
    pub fn merge(&self, other: &DiscreteMeasure) -> Result<DiscreteMeasure> {
        DiscreteMeasure::from_pairs(self.iter().chain(other.iter()).collect())
    }

    /// The part of the measure with atoms in `[lo, hi]`.
    pub fn restrict(&self, lo: f64, hi: f64) -> DiscreteMeasure {
        let (atoms, masses) = self.iter().filter(|&(t, _)| t >= lo && t <= hi).unzip();
        DiscreteMeasure { atoms, masses }
    }
}

/// Serializes non-finite floats as strings (`"inf"`, `"-inf"`, `"NaN"`)
/// so that JSON output stays lossless.
pub mod lossless_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_str(&x.to_string())
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}
