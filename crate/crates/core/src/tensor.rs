//! Small exact tensors over two-dimensional factors.
//!
//! Index order is row-major: the last slot varies fastest. Basis index 0 is
//! the `x` vector of a factor and 1 is the `y` vector.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    field: Field,
    shape: Vec<usize>,
    labels: Vec<usize>,
    data: Vec<Scalar>,
}

impl Tensor {
    /// Zero tensor whose slot `k` represents the factor `labels[k]`.
    pub fn zeros(field: &Field, shape: &[usize], labels: &[usize]) -> Result<Tensor> {
        if shape.len() != labels.len() {
            return Err(Error::DimensionMismatch { op: "tensor labels", left: shape.len(), right: labels.len() });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Invalid(format!("repeated slot label {l}")));
            }
        }
        let n = shape.iter().product();
        Ok(Tensor {
            field: field.clone(),
            shape: shape.to_vec(),
            labels: labels.to_vec(),
            data: vec![field.zero(); n],
        })
    }

    pub fn from_vec(field: &Field, shape: &[usize], labels: &[usize], data: Vec<Scalar>) -> Result<Tensor> {
        let mut t = Tensor::zeros(field, shape, labels)?;
        if data.len() != t.data.len() {
            return Err(Error::DimensionMismatch { op: "tensor entries", left: t.data.len(), right: data.len() });
        }
        if let Some(x) = data.iter().find(|x| !field.contains(x)) {
            return Err(Error::InvalidField(format!("entry {x} is not in {field}")));
        }
        t.data = data;
        Ok(t)
    }

    /// Pure tensor `v_0 ⊗ v_1 ⊗ …` of vectors of length 2.
    pub fn pure(field: &Field, vectors: &[[Scalar; 2]]) -> Tensor {
        let shape = vec![2; vectors.len()];
        let labels: Vec<usize> = (0..vectors.len()).collect();
        let mut t = Tensor::zeros(field, &shape, &labels).expect("distinct labels");
        for flat in 0..t.data.len() {
            let idx = t.unflatten(flat);
            let v = idx.iter().enumerate().fold(field.one(), |acc, (k, &i)| acc * &vectors[k][i]);
            t.data[flat] = v;
        }
        t
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn arity(&self) -> usize {
        self.shape.len()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    fn flatten(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.shape).fold(0, |acc, (&i, &n)| acc * n + i)
    }

    fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.shape.len()];
        for k in (0..self.shape.len()).rev() {
            idx[k] = flat % self.shape[k];
            flat /= self.shape[k];
        }
        idx
    }

    pub fn get(&self, idx: &[usize]) -> &Scalar {
        &self.data[self.flatten(idx)]
    }

    pub fn set(&mut self, idx: &[usize], x: Scalar) {
        let f = self.flatten(idx);
        self.data[f] = x;
    }

    /// Pair slot `slot` with a linear functional given by its values on the basis.
    pub fn contract(&self, slot: usize, functional: &[Scalar]) -> Result<Tensor> {
        if slot >= self.arity() {
            return Err(Error::SlotOutOfRange { slot, arity: self.arity() });
        }
        if functional.len() != self.shape[slot] {
            return Err(Error::DimensionMismatch { op: "contract", left: self.shape[slot], right: functional.len() });
        }
        let mut shape = self.shape.clone();
        shape.remove(slot);
        let mut labels = self.labels.clone();
        labels.remove(slot);
        let mut out = Tensor::zeros(&self.field, &shape, &labels)?;
        for flat in 0..self.data.len() {
            let x = &self.data[flat];
            if x.is_zero() {
                continue;
            }
            let mut idx = self.unflatten(flat);
            let i = idx.remove(slot);
            let pos = out.flatten(&idx);
            out.data[pos] = &out.data[pos] + &(x * &functional[i]);
        }
        Ok(out)
    }

    /// Apply a linear map (given as a matrix acting on column vectors) to one slot.
    pub fn transform_slot(&self, slot: usize, g: &Matrix) -> Result<Tensor> {
        if slot >= self.arity() {
            return Err(Error::SlotOutOfRange { slot, arity: self.arity() });
        }
        if g.cols() != self.shape[slot] || g.rows() != self.shape[slot] {
            return Err(Error::DimensionMismatch { op: "transform_slot", left: self.shape[slot], right: g.cols() });
        }
        let mut out = Tensor::zeros(&self.field, &self.shape, &self.labels)?;
        for flat in 0..self.data.len() {
            let x = &self.data[flat];
            if x.is_zero() {
                continue;
            }
            let mut idx = self.unflatten(flat);
            let j = idx[slot];
            for i in 0..g.rows() {
                idx[slot] = i;
                let pos = out.flatten(&idx);
                out.data[pos] = &out.data[pos] + &(g.get(i, j) * x);
            }
        }
        Ok(out)
    }

    /// Flatten into a matrix: the slots in `row_slots` index rows, the rest index columns.
    pub fn unfold(&self, row_slots: &[usize]) -> Result<Matrix> {
        if let Some(&s) = row_slots.iter().find(|&&s| s >= self.arity()) {
            return Err(Error::SlotOutOfRange { slot: s, arity: self.arity() });
        }
        let col_slots: Vec<usize> = (0..self.arity()).filter(|s| !row_slots.contains(s)).collect();
        let nr: usize = row_slots.iter().map(|&s| self.shape[s]).product();
        let nc: usize = col_slots.iter().map(|&s| self.shape[s]).product();
        let mut m = Matrix::zeros(&self.field, nr, nc);
        for flat in 0..self.data.len() {
            let idx = self.unflatten(flat);
            let r = row_slots.iter().fold(0, |acc, &s| acc * self.shape[s] + idx[s]);
            let c = col_slots.iter().fold(0, |acc, &s| acc * self.shape[s] + idx[s]);
            m.set(r, c, self.data[flat].clone());
        }
        Ok(m)
    }

    pub fn scale(&self, c: &Scalar) -> Tensor {
        let mut t = self.clone();
        t.data = t.data.iter().map(|x| x * c).collect();
        t
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        if self.shape != other.shape {
            return Err(Error::DimensionMismatch { op: "tensor add", left: self.data.len(), right: other.data.len() });
        }
        let mut t = self.clone();
        t.data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(t)
    }

    pub fn reduce_mod(&self, p: u64) -> Result<Tensor> {
        let data = self.data.iter().map(|x| x.reduce_mod(p)).collect::<Result<Vec<_>>>()?;
        Tensor::from_vec(&Field::prime(p)?, &self.shape, &self.labels, data)
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for flat in 0..self.data.len() {
            let x = &self.data[flat];
            if x.is_zero() {
                continue;
            }
            let idx = self.unflatten(flat);
            let word: String = idx
                .iter()
                .zip(&self.labels)
                .map(|(&i, l)| format!("{}{}", if i == 0 { 'x' } else { 'y' }, l))
                .collect();
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({x}){word}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
