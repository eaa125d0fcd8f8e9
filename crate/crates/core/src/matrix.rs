//! Square non-negative integer matrices, viewed as adjacency matrices of multigraphs.

use std::fmt;
use std::ops::Deref;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::json::BigIntNumber;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        if rows.iter().flatten().any(Signed::is_negative) {
            return Err(Error::NegativeEntry);
        }
        Ok(Self { rows })
    }

    pub fn from_rows<R: AsRef<[u64]>>(rows: &[R]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            rows: vec![vec![BigInt::zero(); n]; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.rows[i][i] = BigInt::one();
        }
        m
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.rows[i][j] = v;
    }

    /// Column indices of the non-zero entries of row `i`.
    pub fn support(&self, i: usize) -> Vec<usize> {
        self.rows[i]
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, _)| j)
            .collect()
    }

    pub fn is_zero_one(&self) -> bool {
        self.rows
            .iter()
            .flatten()
            .all(|v| v.is_zero() || v.is_one())
    }

    /// First entry greater than one, if any.
    pub fn first_multi_edge(&self) -> Option<(usize, usize, &BigInt)> {
        self.entries().find(|(_, _, v)| *v > &BigInt::one())
    }

    /// Non-zero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.rows.iter().enumerate().flat_map(|(i, r)| {
            r.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(move |(j, v)| (i, j, v))
        })
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n()).map(|i| &self.rows[i][i]).sum()
    }

    /// `self · rhs`, skipping zero entries of `self`.
    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        let n = self.n();
        let mut out = vec![vec![BigInt::zero(); n]; n];
        for (i, k, a) in self.entries() {
            let src = &rhs.rows[k];
            let dst = &mut out[i];
            for j in 0..n {
                if !src[j].is_zero() {
                    dst[j] += a * &src[j];
                }
            }
        }
        IntMatrix { rows: out }
    }

    pub fn pow(&self, k: u32) -> IntMatrix {
        let mut acc = IntMatrix::identity(self.n());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Whether every vertex reaches every other along a path of positive length.
    pub fn is_irreducible(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return false;
        }
        let adj: Vec<Vec<usize>> = (0..n).map(|i| self.support(i)).collect();
        (0..n).all(|s| {
            let mut seen = vec![false; n];
            let mut stack = adj[s].clone();
            while let Some(v) = stack.pop() {
                if !seen[v] {
                    seen[v] = true;
                    stack.extend(adj[v].iter().copied());
                }
            }
            seen.iter().all(|&b| b)
        })
    }

    /// Whether the graph has a closed walk, i.e. the matrix is not nilpotent.
    pub fn has_cycle(&self) -> bool {
        let n = self.n();
        // Kahn's algorithm: a cycle exists iff the topological sort stalls.
        let mut indeg = vec![0usize; n];
        for (_, j, _) in self.entries() {
            indeg[j] += 1;
        }
        let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut removed = 0;
        while let Some(v) = queue.pop() {
            removed += 1;
            for j in self.support(v) {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    queue.push(j);
                }
            }
        }
        removed < n
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for (j, v) in r.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    #[serde(default)]
    n: Option<usize>,
    rows: Vec<Vec<BigIntNumber>>,
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            n: Some(self.n()),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().cloned().map(BigIntNumber).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        // Accepts {"n":2,"rows":[…]} or a bare array of rows.
        let value = serde_json::Value::deserialize(d)?;
        let raw = if value.is_array() {
            MatrixJson {
                n: None,
                rows: serde_json::from_value(value).map_err(D::Error::custom)?,
            }
        } else {
            serde_json::from_value(value).map_err(D::Error::custom)?
        };
        if raw.n.is_some_and(|n| n != raw.rows.len()) {
            return Err(D::Error::custom("\"n\" does not match the number of rows"));
        }
        let rows = raw
            .rows
            .into_iter()
            .map(|r| r.into_iter().map(|v| v.0).collect())
            .collect();
        IntMatrix::new(rows).map_err(D::Error::custom)
    }
}

/// An [`IntMatrix`] whose entries are all 0 or 1.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ZeroOneMatrix(IntMatrix);

impl ZeroOneMatrix {
    pub fn new(m: IntMatrix) -> Result<Self> {
        if let Some((row, col, v)) = m.first_multi_edge() {
            return Err(Error::InvalidArgument(format!(
                "entry {v} at ({row}, {col}) is not 0 or 1"
            )));
        }
        Ok(Self(m))
    }

    pub fn from_bools(rows: &[Vec<bool>]) -> Self {
        let m = IntMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&b| BigInt::from(b as u8)).collect())
                .collect(),
        )
        .expect("boolean rows form a square non-negative matrix");
        Self(m)
    }

    pub fn as_int(&self) -> &IntMatrix {
        &self.0
    }

    pub fn into_int(self) -> IntMatrix {
        self.0
    }
}

impl Deref for ZeroOneMatrix {
    type Target = IntMatrix;
    fn deref(&self) -> &IntMatrix {
        &self.0
    }
}

impl fmt::Debug for ZeroOneMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZeroOneMatrix({})", self.0)
    }
}

impl fmt::Display for ZeroOneMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl<'de> Deserialize<'de> for ZeroOneMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        ZeroOneMatrix::new(IntMatrix::deserialize(d)?).map_err(D::Error::custom)
    }
}
