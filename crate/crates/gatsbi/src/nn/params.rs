//! Named parameter storage shared by all learned modules.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index into a [`ParamStore`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamId(usize);

impl ParamId {
    pub fn new(index: usize) -> Self {
        Self(index)
    }

    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamStore {
    names: Vec<String>,
    values: Vec<Array2<f64>>,
}

impl ParamStore {
    pub fn new() -> Self {
        Self {
            names: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn add(&mut self, name: impl Into<String>, value: Array2<f64>) -> ParamId {
        self.names.push(name.into());
        self.values.push(value);
        ParamId(self.values.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, id: ParamId) -> &Array2<f64> {
        &self.values[id.0]
    }

    pub fn get_mut(&mut self, id: ParamId) -> &mut Array2<f64> {
        &mut self.values[id.0]
    }

    pub fn name(&self, id: ParamId) -> &str {
        &self.names[id.0]
    }

    pub fn ids(&self) -> impl Iterator<Item = ParamId> + '_ {
        (0..self.values.len()).map(ParamId)
    }

    pub fn n_scalars(&self) -> usize {
        self.values.iter().map(|v| v.len()).sum()
    }

    /// Stable content hash of all parameter bytes; used to assert that
    /// evaluation never mutates a checkpoint.
    pub fn content_hash(&self) -> u64 {
        // FNV-1a over the raw bit patterns.
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        let mut mix = |byte: u8| {
            hash ^= byte as u64;
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        };
        for (name, value) in self.names.iter().zip(&self.values) {
            for b in name.as_bytes() {
                mix(*b);
            }
            for x in value.iter() {
                for b in x.to_bits().to_le_bytes() {
                    mix(b);
                }
            }
        }
        hash
    }

    pub fn to_serializable(&self) -> SerializableParams {
        SerializableParams {
            entries: self
                .names
                .iter()
                .zip(&self.values)
                .map(|(name, value)| SerializableParam {
                    name: name.clone(),
                    rows: value.nrows(),
                    cols: value.ncols(),
                    data: value.iter().copied().collect(),
                })
                .collect(),
        }
    }

    pub fn from_serializable(ser: &SerializableParams) -> Result<Self> {
        let mut store = ParamStore::new();
        for entry in &ser.entries {
            if entry.data.len() != entry.rows * entry.cols {
                return Err(Error::Shape(format!(
                    "parameter {}: {} values for {}x{}",
                    entry.name,
                    entry.data.len(),
                    entry.rows,
                    entry.cols
                )));
            }
            let arr = Array2::from_shape_vec((entry.rows, entry.cols), entry.data.clone())
                .map_err(|e| Error::Shape(e.to_string()))?;
            store.add(entry.name.clone(), arr);
        }
        Ok(store)
    }
}

impl Default for ParamStore {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SerializableParam {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SerializableParams {
    pub entries: Vec<SerializableParam>,
}
