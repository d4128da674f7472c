use std::io::{Read, Write};

use crate::error::{bad_shape, Error, Result};

/// Element type used by the binary tensor format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DType {
    F32,
    F64,
}

impl DType {
    fn tag(self) -> &'static [u8; 3] {
        match self {
            DType::F32 => b"f32",
            DType::F64 => b"f64",
        }
    }
}

/// Dense row-major tensor. Values are held as `f64`; tensors produced in an
/// `f32` storage mode only contain `f32`-representable values.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    shape: Vec<usize>,
    data: Vec<f64>,
}

impl Tensor {
    pub fn new(shape: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        let len: usize = shape.iter().product();
        if len != data.len() {
            return Err(bad_shape(format!(
                "shape {shape:?} holds {len} values, got {}",
                data.len()
            )));
        }
        Ok(Self { shape, data })
    }

    pub fn zeros(shape: Vec<usize>) -> Self {
        let len = shape.iter().product();
        Self {
            shape,
            data: vec![0.0; len],
        }
    }

    pub fn vector(data: Vec<f64>) -> Self {
        Self {
            shape: vec![data.len()],
            data,
        }
    }

    pub fn matrix(rows: &[Vec<f64>]) -> Result<Self> {
        let w = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != w) {
            return Err(bad_shape("ragged rows"));
        }
        Self::new(vec![rows.len(), w], rows.concat())
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            shape: self.shape.clone(),
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `rank`-dimensional check with a readable error.
    pub(crate) fn expect_rank(&self, rank: usize, what: &str) -> Result<()> {
        if self.shape.len() != rank {
            return Err(bad_shape(format!(
                "{what} must be rank {rank}, got shape {:?}",
                self.shape
            )));
        }
        Ok(())
    }

    /// Header: `u32` rank, `u32` per dimension, 3-byte dtype tag (`f32` or
    /// `f64`), then little-endian values.
    pub fn write_binary<W: Write>(&self, mut w: W, dtype: DType) -> Result<()> {
        w.write_all(&(self.shape.len() as u32).to_le_bytes())?;
        for &d in &self.shape {
            let d = u32::try_from(d).map_err(|_| bad_shape("dimension exceeds u32"))?;
            w.write_all(&d.to_le_bytes())?;
        }
        w.write_all(dtype.tag())?;
        for &v in &self.data {
            match dtype {
                DType::F32 => w.write_all(&(v as f32).to_le_bytes())?,
                DType::F64 => w.write_all(&v.to_le_bytes())?,
            }
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<(Self, DType)> {
        let mut word = [0u8; 4];
        r.read_exact(&mut word)?;
        let rank = u32::from_le_bytes(word) as usize;
        let mut shape = Vec::with_capacity(rank);
        for _ in 0..rank {
            r.read_exact(&mut word)?;
            shape.push(u32::from_le_bytes(word) as usize);
        }
        let mut tag = [0u8; 3];
        r.read_exact(&mut tag)?;
        let dtype = match &tag {
            b"f32" => DType::F32,
            b"f64" => DType::F64,
            _ => return Err(Error::Parse("unknown tensor dtype tag".into())),
        };
        let len: usize = shape.iter().product();
        let mut data = Vec::with_capacity(len);
        for _ in 0..len {
            match dtype {
                DType::F32 => {
                    let mut b = [0u8; 4];
                    r.read_exact(&mut b)?;
                    data.push(f32::from_le_bytes(b) as f64);
                }
                DType::F64 => {
                    let mut b = [0u8; 8];
                    r.read_exact(&mut b)?;
                    data.push(f64::from_le_bytes(b));
                }
            }
        }
        Ok((Self { shape, data }, dtype))
    }

    /// One line per innermost row.
    pub fn to_csv(&self) -> String {
        let w = self.shape.last().copied().unwrap_or(1).max(1);
        self.data
            .chunks(w)
            .map(|row| {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
                cells.join(",") + "\n"
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn shape_mismatch() {
        assert!(Tensor::new(vec![2, 3], vec![0.0; 5]).is_err());
        assert!(Tensor::matrix(&[vec![1.0], vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn binary_header_layout() {
        let t = Tensor::new(vec![1, 2], vec![1.5, -2.0]).unwrap();
        let mut buf = Vec::new();
        t.write_binary(&mut buf, DType::F32).unwrap();
        assert_eq!(&buf[..4], &2u32.to_le_bytes());
        assert_eq!(&buf[12..15], b"f32");
        assert_eq!(buf.len(), 4 + 8 + 3 + 8);
        assert_eq!(t.to_csv(), "1.5,-2.0\n");
    }

    proptest! {
        #[test]
        fn binary_round_trip(shape in prop::collection::vec(1usize..4, 1..4), seed in any::<u64>()) {
            let len: usize = shape.iter().product();
            let data: Vec<f64> = (0..len).map(|i| ((seed ^ i as u64) % 1000) as f64 / 7.0).collect();
            let t = Tensor::new(shape, data).unwrap();
            let mut buf = Vec::new();
            t.write_binary(&mut buf, DType::F64).unwrap();
            let (back, dtype) = Tensor::read_binary(buf.as_slice()).unwrap();
            prop_assert_eq!(dtype, DType::F64);
            prop_assert_eq!(&back, &t);

            let mut buf = Vec::new();
            t.write_binary(&mut buf, DType::F32).unwrap();
            let (back, _) = Tensor::read_binary(buf.as_slice()).unwrap();
            prop_assert_eq!(back, t.map(|v| v as f32 as f64));
        }
    }
}
