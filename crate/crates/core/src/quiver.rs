//! Quivers, dimension vectors and the bilinear forms on them.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use smallvec::SmallVec;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub src: usize,
    pub tgt: usize,
}

/// A finite quiver. Parallel arrows and loops are allowed. Vertex order is
/// the order of declaration and fixes the component order of dimension
/// vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Builds a quiver from vertex names and `(source, target)` name pairs.
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S)]) -> Result<Self> {
        let vertices: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(Error::InvalidArgument(format!("duplicate vertex {v:?}")));
            }
        }
        let index = |name: &str| {
            vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::UnknownVertex(name.to_string()))
        };
        let arrows = arrows
            .iter()
            .map(|(s, t)| {
                Ok(Arrow {
                    src: index(s.as_ref())?,
                    tgt: index(t.as_ref())?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Quiver { vertices, arrows })
    }

    /// Linearly oriented type A: `1 → 2 → … → n`.
    pub fn linear(n: usize) -> Self {
        let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let arrows = (0..n.saturating_sub(1))
            .map(|i| Arrow { src: i, tgt: i + 1 })
            .collect();
        Quiver { vertices, arrows }
    }

    /// One vertex with one loop.
    pub fn jordan() -> Self {
        Quiver {
            vertices: alloc::vec!["1".to_string()],
            arrows: alloc::vec![Arrow { src: 0, tgt: 0 }],
        }
    }

    /// Two vertices, two parallel arrows `1 ⇉ 2`.
    pub fn kronecker() -> Self {
        Quiver {
            vertices: alloc::vec!["1".to_string(), "2".to_string()],
            arrows: alloc::vec![Arrow { src: 0, tgt: 1 }, Arrow { src: 0, tgt: 1 }],
        }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn has_loop(&self, vertex: usize) -> bool {
        self.arrows.iter().any(|a| a.src == vertex && a.tgt == vertex)
    }

    pub fn loop_count(&self, vertex: usize) -> usize {
        self.arrows
            .iter()
            .filter(|a| a.src == vertex && a.tgt == vertex)
            .count()
    }

    /// Number of arrows `i → j` plus arrows `j → i`.
    pub fn edges_between(&self, i: usize, j: usize) -> usize {
        self.arrows
            .iter()
            .filter(|a| (a.src == i && a.tgt == j) || (a.src == j && a.tgt == i))
            .count()
    }

    fn check(&self, d: &DimVector) -> Result<()> {
        if d.len() == self.vertices.len() {
            Ok(())
        } else {
            Err(Error::QuiverMismatch)
        }
    }

    /// Euler–Ringel form `Σ_i α_i β_i − Σ_h α_{s(h)} β_{t(h)}`.
    pub fn euler_form(&self, a: &DimVector, b: &DimVector) -> Result<i64> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.euler_unchecked(a, b))
    }

    pub(crate) fn euler_unchecked(&self, a: &DimVector, b: &DimVector) -> i64 {
        let diag: i64 = a.iter().zip(b.iter()).map(|(&x, &y)| x as i64 * y as i64).sum();
        let off: i64 = self
            .arrows
            .iter()
            .map(|h| a[h.src] as i64 * b[h.tgt] as i64)
            .sum();
        diag - off
    }

    /// `{α, β} = Σ_i α_i β_i + Σ_h α_{s(h)} β_{t(h)}`.
    pub fn twist_form(&self, a: &DimVector, b: &DimVector) -> Result<i64> {
        self.check(a)?;
        self.check(b)?;
        let diag: i64 = a.iter().zip(b.iter()).map(|(&x, &y)| x as i64 * y as i64).sum();
        let off: i64 = self
            .arrows
            .iter()
            .map(|h| a[h.src] as i64 * b[h.tgt] as i64)
            .sum();
        Ok(diag + off)
    }

    /// `(dim E_α, dim G_α)`.
    pub fn space_dims(&self, a: &DimVector) -> Result<(u64, u64)> {
        self.check(a)?;
        let e = self
            .arrows
            .iter()
            .map(|h| a[h.src] as u64 * a[h.tgt] as u64)
            .sum();
        let g = a.iter().map(|&x| x as u64 * x as u64).sum();
        Ok((e, g))
    }

    /// `dim D(α, β) = Σ_h α_{s(h)} β_{t(h)}`.
    pub fn gluing_dim(&self, a: &DimVector, b: &DimVector) -> u64 {
        self.arrows
            .iter()
            .map(|h| a[h.src] as u64 * b[h.tgt] as u64)
            .sum()
    }

    pub fn zero_dims(&self) -> DimVector {
        DimVector::zero(self.vertices.len())
    }

    pub fn simple_dims(&self, vertex: usize) -> DimVector {
        let mut d = self.zero_dims();
        d.0[vertex] = 1;
        d
    }

    /// All dimension vectors with total dimension at most `limit`, ordered
    /// by total and then lexicographically.
    pub fn dims_up_to_total(&self, limit: u32) -> Vec<DimVector> {
        let n = self.vertices.len();
        let mut out = Vec::new();
        for total in 0..=limit {
            let mut cur = DimVector::zero(n);
            compositions(n, total, 0, &mut cur, &mut out);
        }
        out
    }
}

fn compositions(n: usize, remaining: u32, pos: usize, cur: &mut DimVector, out: &mut Vec<DimVector>) {
    if n == 0 {
        if remaining == 0 {
            out.push(cur.clone());
        }
        return;
    }
    if pos == n - 1 {
        cur.0[pos] = remaining;
        out.push(cur.clone());
        cur.0[pos] = 0;
        return;
    }
    for k in (0..=remaining).rev() {
        cur.0[pos] = k;
        compositions(n, remaining - k, pos + 1, cur, out);
    }
    cur.0[pos] = 0;
}

/// Per-vertex dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DimVector(SmallVec<[u32; 6]>);

impl DimVector {
    pub fn new(comps: &[u32]) -> Self {
        DimVector(SmallVec::from_slice(comps))
    }

    pub fn zero(n: usize) -> Self {
        DimVector(SmallVec::from_elem(0, n))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn iter(&self) -> core::slice::Iter<'_, u32> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn checked_add(&self, other: &DimVector) -> Result<DimVector> {
        if self.len() != other.len() {
            return Err(Error::QuiverMismatch);
        }
        Ok(DimVector(
            self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect(),
        ))
    }

    /// Componentwise difference, `None` if some component would go negative.
    pub fn checked_sub(&self, other: &DimVector) -> Option<DimVector> {
        if self.len() != other.len() {
            return None;
        }
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<SmallVec<_>>>()
            .map(DimVector)
    }

    /// `Σ_i α_i β_i`.
    pub fn dot(&self, other: &DimVector) -> u64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(&a, &b)| a as u64 * b as u64)
            .sum()
    }

    pub fn le(&self, other: &DimVector) -> bool {
        self.len() == other.len() && self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// Every `β ≤ self` componentwise, in lexicographic order.
    pub fn sub_vectors(&self) -> Vec<DimVector> {
        let mut out = alloc::vec![DimVector::zero(self.len())];
        for (pos, &bound) in self.0.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * (bound as usize + 1));
            for v in &out {
                for k in 0..=bound {
                    let mut w = v.clone();
                    w.0[pos] = k;
                    next.push(w);
                }
            }
            out = next;
        }
        out
    }
}

impl core::ops::Index<usize> for DimVector {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for DimVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Err(Error::InvalidArgument("empty dimension vector".into()));
        }
        s.split(',')
            .map(|c| {
                c.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidArgument(format!("bad dimension component {c:?}")))
            })
            .collect::<Result<SmallVec<_>>>()
            .map(DimVector)
    }
}
