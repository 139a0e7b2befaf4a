use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Dense 64-bit matrix used for every weight, activation and gradient.
pub type Tensor2 = DMatrix<f64>;

/// Serializes a matrix as an array of rows.
pub(crate) mod nested {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::Tensor2;

    pub fn serialize<S: Serializer>(m: &Tensor2, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Tensor2, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        from_rows(rows).map_err(D::Error::custom)
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Tensor2, String> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err("ragged matrix rows".into());
        }
        if rows.iter().flatten().any(|x| !x.is_finite()) {
            return Err("non-finite matrix entry".into());
        }
        Ok(Tensor2::from_row_iterator(r, c, rows.into_iter().flatten()))
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(m: &Option<Tensor2>, s: S) -> Result<S::Ok, S::Error> {
            match m {
                Some(m) => super::serialize(m, s),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Tensor2>, D::Error> {
            Option::<Vec<Vec<f64>>>::deserialize(d)?
                .map(|rows| from_rows(rows).map_err(D::Error::custom))
                .transpose()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerParams {
    #[serde(with = "nested")]
    pub weight: Tensor2,
    /// GAT only: column vector `[a_self; a_neighbor]` of length `2 * d_out`.
    #[serde(with = "nested::option", default)]
    pub attention: Option<Tensor2>,
}

/// Every trainable tensor of an autoencoder. Gradients and optimizer moments
/// share this layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaeParams {
    pub layer1: LayerParams,
    pub layer2: LayerParams,
    #[serde(with = "nested")]
    pub relation: Tensor2,
}

impl GaeParams {
    pub fn zeros_like(&self) -> GaeParams {
        let zero = |m: &Tensor2| Tensor2::zeros(m.nrows(), m.ncols());
        let layer = |l: &LayerParams| LayerParams {
            weight: zero(&l.weight),
            attention: l.attention.as_ref().map(zero),
        };
        GaeParams {
            layer1: layer(&self.layer1),
            layer2: layer(&self.layer2),
            relation: zero(&self.relation),
        }
    }

    /// Tensors in a fixed order: layer-1 weight, layer-1 attention, layer-2
    /// weight, layer-2 attention, relation.
    pub fn tensors(&self) -> Vec<&Tensor2> {
        let mut out = vec![&self.layer1.weight];
        out.extend(self.layer1.attention.as_ref());
        out.push(&self.layer2.weight);
        out.extend(self.layer2.attention.as_ref());
        out.push(&self.relation);
        out
    }

    pub fn tensors_mut(&mut self) -> Vec<&mut Tensor2> {
        let mut out = vec![&mut self.layer1.weight];
        out.extend(self.layer1.attention.as_mut());
        out.push(&mut self.layer2.weight);
        out.extend(self.layer2.attention.as_mut());
        out.push(&mut self.relation);
        out
    }

    pub fn tensor_names(&self) -> Vec<&'static str> {
        let mut out = vec!["layer1.weight"];
        if self.layer1.attention.is_some() {
            out.push("layer1.attention");
        }
        out.push("layer2.weight");
        if self.layer2.attention.is_some() {
            out.push("layer2.attention");
        }
        out.push("relation");
        out
    }

    pub fn add_assign(&mut self, other: &GaeParams) {
        for (a, b) in self.tensors_mut().into_iter().zip(other.tensors()) {
            *a += b;
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for t in self.tensors_mut() {
            *t *= factor;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.tensors().iter().all(|t| t.iter().all(|x| x.is_finite()))
    }
}
