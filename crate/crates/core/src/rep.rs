//! Representations of a quiver over a finite field: the point spaces
//! `E_α`, Hom/Ext, isomorphism testing, orbit censuses, Frobenius twists
//! and (absolute) indecomposability.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::census::divisors;
use crate::error::{Error, Result};
use crate::gf::{FieldSpec, GaloisField};
use crate::linalg::Matrix;
use crate::quiver::{DimVector, Quiver};

/// Enumeration limits. Exceeding one is an error, never a silent truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guards {
    /// Maximum number of points of `E_α` an enumeration may visit.
    pub max_points: u64,
    /// Maximum number of elements of a Hom space (or gluing space, or
    /// subspace family) a scan may visit.
    pub max_hom: u64,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            max_points: 10_000_000,
            max_hom: 1_000_000,
        }
    }
}

/// A point of `E_α`: one `α_{t(h)} × α_{s(h)}` matrix per arrow `h`.
#[derive(Clone)]
pub struct Representation {
    quiver: Arc<Quiver>,
    field: Arc<GaloisField>,
    dims: DimVector,
    maps: Vec<Matrix>,
}

impl PartialEq for Representation {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims
            && self.maps == other.maps
            && self.field.spec() == other.field.spec()
            && self.quiver == other.quiver
    }
}

impl Eq for Representation {}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rep[{}]{{", self.dims)?;
        for (k, m) in self.maps.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            f.write_str("(")?;
            for r in 0..m.rows() {
                if r > 0 {
                    f.write_str(" | ")?;
                }
                for c in 0..m.cols() {
                    if c > 0 {
                        f.write_str(" ")?;
                    }
                    f.write_str(&self.field.format_element(m.get(r, c)))?;
                }
            }
            f.write_str(")")?;
        }
        f.write_str("}")
    }
}

impl Representation {
    pub fn new(
        quiver: Arc<Quiver>,
        field: Arc<GaloisField>,
        dims: DimVector,
        maps: Vec<Matrix>,
    ) -> Result<Self> {
        if dims.len() != quiver.num_vertices() {
            return Err(Error::QuiverMismatch);
        }
        if maps.len() != quiver.arrows().len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} arrow matrices, got {}",
                quiver.arrows().len(),
                maps.len()
            )));
        }
        for (h, m) in quiver.arrows().iter().zip(&maps) {
            if m.rows() != dims[h.tgt] as usize || m.cols() != dims[h.src] as usize {
                return Err(Error::DimensionMismatch);
            }
            if m.data().iter().any(|&x| x >= field.order()) {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(Representation {
            quiver,
            field,
            dims,
            maps,
        })
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    /// Entries in point order: arrows in declaration order, each row-major.
    pub fn entries(&self) -> Vec<u32> {
        self.maps.iter().flat_map(|m| m.data().iter().copied()).collect()
    }

    /// The same matrices read in a larger field through `embedding`.
    pub fn base_change(&self, larger: &Arc<GaloisField>, embedding: &[u32]) -> Representation {
        Representation {
            quiver: self.quiver.clone(),
            field: larger.clone(),
            dims: self.dims.clone(),
            maps: self
                .maps
                .iter()
                .map(|m| m.map_entries(|x| embedding[x as usize]))
                .collect(),
        }
    }
}

/// Stable key for an isomorphism class: the dimension vector and the index
/// of the enumeration-order-minimal point of the orbit. Rendered `"α:index"`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassId {
    pub dims: DimVector,
    pub point: u64,
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.dims, self.point)
    }
}

impl FromStr for ClassId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (dims, point) = s
            .trim()
            .trim_start_matches('[')
            .trim_end_matches(']')
            .rsplit_once(':')
            .ok_or_else(|| Error::UnknownClass(s.to_string()))?;
        Ok(ClassId {
            dims: dims.parse()?,
            point: point
                .parse()
                .map_err(|_| Error::UnknownClass(s.to_string()))?,
        })
    }
}

/// One isomorphism class found by an orbit census.
#[derive(Clone, Debug)]
pub struct IsoClass {
    pub id: ClassId,
    pub representative: Representation,
    pub orbit_size: u64,
    /// `a_X = |Aut X| = |G_α| / orbit_size`.
    pub aut_count: u128,
    /// Hom-dimensions to the probe list (every representation of each
    /// simple dimension vector `e_i`), followed by `dim End`.
    pub hom_fingerprint: Vec<u32>,
}

/// Basis of `Hom(M, N)`; each element is one `β_i × α_i` matrix per vertex.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub source: DimVector,
    pub target: DimVector,
    pub basis: Vec<Vec<Matrix>>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Index layout of `E_α`: entries of all arrow matrices, first entry most
/// significant in base `Q`.
#[derive(Clone, Debug)]
pub struct PointSpace {
    dims: DimVector,
    order: u64,
    offsets: Vec<usize>,
    entries: usize,
    count: u128,
}

impl PointSpace {
    pub fn new(quiver: &Quiver, order: u32, dims: &DimVector) -> Self {
        let mut offsets = Vec::with_capacity(quiver.arrows().len());
        let mut entries = 0usize;
        for h in quiver.arrows() {
            offsets.push(entries);
            entries += dims[h.src] as usize * dims[h.tgt] as usize;
        }
        let count = (order as u128)
            .checked_pow(entries as u32)
            .unwrap_or(u128::MAX);
        PointSpace {
            dims: dims.clone(),
            order: order as u64,
            offsets,
            entries,
            count,
        }
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn count(&self) -> u128 {
        self.count
    }

    pub fn entry_count(&self) -> usize {
        self.entries
    }

    pub fn decode_into(&self, mut index: u64, out: &mut [u32]) {
        for slot in out.iter_mut().rev() {
            *slot = (index % self.order) as u32;
            index /= self.order;
        }
    }

    pub fn encode(&self, entries: &[u32]) -> u64 {
        entries
            .iter()
            .fold(0u64, |acc, &x| acc * self.order + x as u64)
    }
}

/// All isomorphism classes of `E_α`, with a point → class table.
#[derive(Clone, Debug)]
pub struct OrbitCensus {
    pub dims: DimVector,
    pub group_order: u128,
    pub classes: Vec<IsoClass>,
    space: PointSpace,
    class_of_point: Vec<u32>,
}

impl OrbitCensus {
    pub fn point_count(&self) -> u128 {
        self.space.count
    }

    /// Ordinal (position in `classes`) of the class containing a point.
    pub fn class_of_index(&self, index: u64) -> usize {
        self.class_of_point[index as usize] as usize
    }

    pub fn class_of_entries(&self, entries: &[u32]) -> usize {
        self.class_of_index(self.space.encode(entries))
    }

    pub fn classify(&self, rep: &Representation) -> Result<usize> {
        if rep.dims != self.dims {
            return Err(Error::DimensionMismatch);
        }
        Ok(self.class_of_entries(&rep.entries()))
    }

    pub fn ordinal(&self, id: &ClassId) -> Option<usize> {
        if id.dims != self.dims {
            return None;
        }
        self.classes
            .binary_search_by(|c| c.id.point.cmp(&id.point))
            .ok()
    }

    pub fn space(&self) -> &PointSpace {
        &self.space
    }
}

#[derive(Clone, Copy, Debug)]
enum Generator {
    Scale(usize),
    Transvect(usize),
    Swap(usize),
    Cycle(usize),
}

/// Representations of one quiver over GF(q^s), where `q = p^e` is the base
/// field and `s` the extension degree of the working field.
#[derive(Clone, Debug)]
pub struct RepCategory {
    quiver: Arc<Quiver>,
    field: Arc<GaloisField>,
    base_degree: u32,
    guards: Guards,
}

impl RepCategory {
    pub fn new(quiver: Quiver, p: u64, e: u32, s: u32, guards: Guards) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidArgument("s must be at least 1".into()));
        }
        let spec = FieldSpec::new(p, e * s)?;
        Ok(RepCategory {
            quiver: Arc::new(quiver),
            field: Arc::new(GaloisField::new(spec)),
            base_degree: e,
            guards,
        })
    }

    pub fn from_parts(
        quiver: Arc<Quiver>,
        field: Arc<GaloisField>,
        base_degree: u32,
        guards: Guards,
    ) -> Result<Self> {
        if base_degree == 0 || !field.degree().is_multiple_of(base_degree) {
            return Err(Error::InvalidArgument(format!(
                "base degree {base_degree} does not divide the field degree {}",
                field.degree()
            )));
        }
        Ok(RepCategory {
            quiver,
            field,
            base_degree,
            guards,
        })
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn guards(&self) -> Guards {
        self.guards
    }

    /// Size of the base field, `q = p^e`.
    pub fn q(&self) -> u64 {
        (self.field.characteristic() as u64).pow(self.base_degree)
    }

    /// Size of the working field, `Q = q^s`.
    pub fn field_order(&self) -> u64 {
        self.field.order() as u64
    }

    pub fn base_degree(&self) -> u32 {
        self.base_degree
    }

    pub fn extension_degree(&self) -> u32 {
        self.field.degree() / self.base_degree
    }

    fn check_rep(&self, m: &Representation) -> Result<()> {
        if *m.quiver != *self.quiver {
            return Err(Error::QuiverMismatch);
        }
        if m.field.spec() != self.field.spec() {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    fn check_dims(&self, dims: &DimVector) -> Result<()> {
        if dims.len() == self.quiver.num_vertices() {
            Ok(())
        } else {
            Err(Error::QuiverMismatch)
        }
    }

    pub fn point_space(&self, dims: &DimVector) -> Result<PointSpace> {
        self.check_dims(dims)?;
        Ok(PointSpace::new(&self.quiver, self.field.order(), dims))
    }

    fn guarded_space(&self, dims: &DimVector) -> Result<PointSpace> {
        let space = self.point_space(dims)?;
        if space.count > self.guards.max_points as u128 {
            return Err(Error::SizeGuardExceeded {
                what: "points of E_alpha",
                required: space.count,
                limit: self.guards.max_points,
            });
        }
        Ok(space)
    }

    pub fn rep_from_entries(&self, dims: &DimVector, entries: &[u32]) -> Result<Representation> {
        self.check_dims(dims)?;
        let mut maps = Vec::with_capacity(self.quiver.arrows().len());
        let mut pos = 0;
        for h in self.quiver.arrows() {
            let (r, c) = (dims[h.tgt] as usize, dims[h.src] as usize);
            let chunk = entries
                .get(pos..pos + r * c)
                .ok_or(Error::DimensionMismatch)?;
            maps.push(Matrix::from_vec(r, c, chunk.to_vec()));
            pos += r * c;
        }
        if pos != entries.len() {
            return Err(Error::DimensionMismatch);
        }
        Representation::new(self.quiver.clone(), self.field.clone(), dims.clone(), maps)
    }

    pub fn rep_from_maps(&self, dims: &DimVector, maps: Vec<Matrix>) -> Result<Representation> {
        self.check_dims(dims)?;
        Representation::new(self.quiver.clone(), self.field.clone(), dims.clone(), maps)
    }

    pub fn rep_at_index(&self, space: &PointSpace, index: u64) -> Representation {
        let mut entries = vec![0u32; space.entries];
        space.decode_into(index, &mut entries);
        self.rep_from_entries(&space.dims, &entries)
            .expect("point space layout matches the quiver")
    }

    pub fn zero_rep(&self, dims: &DimVector) -> Result<Representation> {
        let space = self.point_space(dims)?;
        Ok(self.rep_at_index(&space, 0))
    }

    /// The simple representation at a loop-free vertex.
    pub fn simple(&self, vertex: usize) -> Result<Representation> {
        if vertex >= self.quiver.num_vertices() {
            return Err(Error::UnknownVertex(vertex.to_string()));
        }
        if self.quiver.has_loop(vertex) {
            return Err(Error::LoopVertex(self.quiver.vertices()[vertex].clone()));
        }
        self.zero_rep(&self.quiver.simple_dims(vertex))
    }

    /// Every point of `E_α` in enumeration order.
    pub fn enumerate_reps(
        &self,
        dims: &DimVector,
    ) -> Result<impl Iterator<Item = Representation> + '_> {
        let space = self.guarded_space(dims)?;
        let count = space.count as u64;
        Ok((0..count).map(move |i| self.rep_at_index(&space, i)))
    }

    pub fn direct_sum(&self, m: &Representation, n: &Representation) -> Result<Representation> {
        self.check_rep(m)?;
        self.check_rep(n)?;
        let dims = m.dims.checked_add(&n.dims)?;
        let maps = self
            .quiver
            .arrows()
            .iter()
            .zip(m.maps.iter().zip(&n.maps))
            .map(|(h, (a, b))| {
                let (rt, cs) = (dims[h.tgt] as usize, dims[h.src] as usize);
                let mut out = Matrix::zeros(rt, cs);
                for r in 0..a.rows() {
                    for c in 0..a.cols() {
                        out.set(r, c, a.get(r, c));
                    }
                }
                for r in 0..b.rows() {
                    for c in 0..b.cols() {
                        out.set(a.rows() + r, a.cols() + c, b.get(r, c));
                    }
                }
                out
            })
            .collect();
        self.rep_from_maps(&dims, maps)
    }

    /// `|G_α(F_Q)| = Π_i Π_{j<α_i} (Q^{α_i} − Q^j)`.
    pub fn group_order(&self, dims: &DimVector) -> Result<u128> {
        let q = self.field_order() as u128;
        let mut total: u128 = 1;
        for &n in dims.iter() {
            let qn = q.checked_pow(n).ok_or(Error::Overflow("group order"))?;
            for j in 0..n {
                let factor = qn - q.pow(j);
                total = total
                    .checked_mul(factor)
                    .ok_or(Error::Overflow("group order"))?;
            }
        }
        Ok(total)
    }

    /// Linear map `⊕_i Hom(k^{α_i}, k^{β_i}) → D(α, β)` whose kernel is
    /// `Hom(M, N)` and whose cokernel is `Ext¹(M, N)`.
    fn hom_system(&self, m: &Representation, n: &Representation) -> (Matrix, Vec<usize>) {
        let a = &m.dims;
        let b = &n.dims;
        let nv = self.quiver.num_vertices();
        let mut var_offset = Vec::with_capacity(nv);
        let mut nvars = 0usize;
        for i in 0..nv {
            var_offset.push(nvars);
            nvars += a[i] as usize * b[i] as usize;
        }
        let rows: usize = self
            .quiver
            .arrows()
            .iter()
            .map(|h| b[h.tgt] as usize * a[h.src] as usize)
            .sum();
        let mut sys = Matrix::zeros(rows, nvars);
        let f = &*self.field;
        let mut row = 0usize;
        for (k, h) in self.quiver.arrows().iter().enumerate() {
            let (s, t) = (h.src, h.tgt);
            let x = &m.maps[k];
            let y = &n.maps[k];
            let (as_, at) = (a[s] as usize, a[t] as usize);
            let (bs, bt) = (b[s] as usize, b[t] as usize);
            for r in 0..bt {
                for c in 0..as_ {
                    // (f_t x_h)[r, c] = Σ_k f_t[r, k] x_h[k, c]
                    for kk in 0..at {
                        let coef = x.get(kk, c);
                        if coef != 0 {
                            let var = var_offset[t] + r * at + kk;
                            let cur = sys.get(row, var);
                            sys.set(row, var, f.add(cur, coef));
                        }
                    }
                    // −(y_h f_s)[r, c] = −Σ_k y_h[r, k] f_s[k, c]
                    for kk in 0..bs {
                        let coef = y.get(r, kk);
                        if coef != 0 {
                            let var = var_offset[s] + kk * as_ + c;
                            let cur = sys.get(row, var);
                            sys.set(row, var, f.sub(cur, coef));
                        }
                    }
                    row += 1;
                }
            }
        }
        (sys, var_offset)
    }

    pub fn hom_space(&self, m: &Representation, n: &Representation) -> Result<HomSpace> {
        self.check_rep(m)?;
        self.check_rep(n)?;
        let (sys, offsets) = self.hom_system(m, n);
        let basis = sys
            .nullspace(&self.field)
            .into_iter()
            .map(|v| {
                (0..self.quiver.num_vertices())
                    .map(|i| {
                        let (rows, cols) = (n.dims[i] as usize, m.dims[i] as usize);
                        let start = offsets[i];
                        Matrix::from_vec(rows, cols, v[start..start + rows * cols].to_vec())
                    })
                    .collect()
            })
            .collect();
        Ok(HomSpace {
            source: m.dims.clone(),
            target: n.dims.clone(),
            basis,
        })
    }

    pub fn hom_dim(&self, m: &Representation, n: &Representation) -> Result<usize> {
        self.check_rep(m)?;
        self.check_rep(n)?;
        let (sys, _) = self.hom_system(m, n);
        Ok(sys.cols() - sys.rank(&self.field))
    }

    /// `dim Ext¹(M, N) = dim Hom(M, N) − ⟨dim M, dim N⟩`.
    pub fn ext_dim(&self, m: &Representation, n: &Representation) -> Result<usize> {
        let hom = self.hom_dim(m, n)? as i64;
        let euler = self.quiver.euler_unchecked(&m.dims, &n.dims);
        Ok((hom - euler) as usize)
    }

    /// `dim Ext¹(M, N)` as the cokernel dimension of the defining linear map.
    pub fn ext_dim_via_cokernel(&self, m: &Representation, n: &Representation) -> Result<usize> {
        self.check_rep(m)?;
        self.check_rep(n)?;
        let (sys, _) = self.hom_system(m, n);
        Ok(sys.rows() - sys.rank(&self.field))
    }

    fn scan_guard(&self, dim: usize, what: &'static str) -> Result<u64> {
        let count = (self.field_order() as u128)
            .checked_pow(dim as u32)
            .unwrap_or(u128::MAX);
        if count > self.guards.max_hom as u128 {
            return Err(Error::SizeGuardExceeded {
                what,
                required: count,
                limit: self.guards.max_hom,
            });
        }
        Ok(count as u64)
    }

    /// Calls `visit` on every element of the span of `basis` (coefficient
    /// vectors in enumeration order) until it returns `true`.
    fn scan_span(
        &self,
        basis: &[Vec<Matrix>],
        what: &'static str,
        mut visit: impl FnMut(&[Matrix]) -> bool,
    ) -> Result<bool> {
        let count = self.scan_guard(basis.len(), what)?;
        let f = &*self.field;
        let q = self.field_order();
        let mut coeffs = vec![0u32; basis.len()];
        let template: Vec<Matrix> = match basis.first() {
            Some(b) => b.iter().map(|m| Matrix::zeros(m.rows(), m.cols())).collect(),
            None => return Ok(false),
        };
        for idx in 0..count {
            let mut rest = idx;
            for slot in coeffs.iter_mut().rev() {
                *slot = (rest % q) as u32;
                rest /= q;
            }
            let mut elem = template.clone();
            for (c, b) in coeffs.iter().zip(basis) {
                if *c == 0 {
                    continue;
                }
                for (acc, m) in elem.iter_mut().zip(b) {
                    *acc = acc.add(&m.scale(*c, f), f);
                }
            }
            if visit(&elem) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Whether some vertexwise-invertible element of `Hom(M, N)` exists.
    pub fn is_isomorphic(&self, m: &Representation, n: &Representation) -> Result<bool> {
        self.check_rep(m)?;
        self.check_rep(n)?;
        if m.dims != n.dims {
            return Ok(false);
        }
        if m.maps == n.maps {
            return Ok(true);
        }
        let hom = self.hom_space(m, n)?;
        if hom.dim() != self.hom_dim(m, m)? || hom.dim() != self.hom_dim(n, n)? {
            return Ok(false);
        }
        let f = &*self.field;
        self.scan_span(&hom.basis, "Hom(M,N) scan", |elem| {
            elem.iter().all(|g| g.is_invertible(f))
        })
    }

    /// `M^{[q^r]}`: every entry raised to the `q^r`-th power.
    pub fn frobenius_twist(&self, m: &Representation, r: u32) -> Representation {
        let times = self.base_degree * r;
        let f = &*self.field;
        Representation {
            quiver: m.quiver.clone(),
            field: m.field.clone(),
            dims: m.dims.clone(),
            maps: m
                .maps
                .iter()
                .map(|x| x.map_entries(|v| f.frobenius(v, times)))
                .collect(),
        }
    }

    /// Smallest `r ≥ 1` with `M ≅ M^{[q^r]}`; always a divisor of `s`.
    pub fn minimal_field_of_definition(&self, m: &Representation) -> Result<u32> {
        self.check_rep(m)?;
        let s = self.extension_degree();
        for r in divisors(s as u64) {
            let r = r as u32;
            if r == s || self.is_isomorphic(m, &self.frobenius_twist(m, r))? {
                return Ok(r);
            }
        }
        Ok(s)
    }

    /// `End(M)` has no idempotents besides `0` and `1` (and `M ≠ 0`).
    pub fn is_indecomposable(&self, m: &Representation) -> Result<bool> {
        self.check_rep(m)?;
        if m.dims.is_zero() {
            return Ok(false);
        }
        let end = self.hom_space(m, m)?;
        if end.dim() == 1 {
            return Ok(true);
        }
        let f = &*self.field;
        let found = self.scan_span(&end.basis, "End(M) idempotent scan", |elem| {
            let mut zero = true;
            let mut ident = true;
            for g in elem {
                if !g.is_zero() {
                    zero = false;
                }
                if *g != Matrix::identity(g.rows()) {
                    ident = false;
                }
            }
            if zero || ident {
                return false;
            }
            elem.iter().all(|g| g.mul(g, f) == *g)
        })?;
        Ok(!found)
    }

    /// Indecomposable after base change to every extension of degree
    /// `t ≤ dim End(M)`.
    pub fn is_absolutely_indecomposable(&self, m: &Representation) -> Result<bool> {
        if !self.is_indecomposable(m)? {
            return Ok(false);
        }
        let d = self.hom_dim(m, m)? as u32;
        for t in 2..=d {
            let spec = FieldSpec::new(
                self.field.characteristic() as u64,
                self.field.degree() * t,
            )?;
            let larger = Arc::new(GaloisField::new(spec));
            let embedding = self.field.embedding_into(&larger)?;
            let big = RepCategory {
                quiver: self.quiver.clone(),
                field: larger.clone(),
                base_degree: self.base_degree,
                guards: self.guards,
            };
            if !big.is_indecomposable(&m.base_change(&larger, &embedding))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn generators(&self, dims: &DimVector) -> Vec<Generator> {
        let mut gens = Vec::new();
        for (i, &n) in dims.iter().enumerate() {
            if n >= 1 && self.field_order() > 2 {
                gens.push(Generator::Scale(i));
            }
            if n >= 2 {
                gens.push(Generator::Transvect(i));
                gens.push(Generator::Swap(i));
            }
            if n >= 3 {
                gens.push(Generator::Cycle(i));
            }
        }
        gens
    }

    /// `buf ← g · buf` for a generator `g` of `G_α` acting by
    /// `x_h ↦ g_{t(h)} x_h g_{s(h)}^{-1}`.
    fn apply_generator(
        &self,
        gen: Generator,
        dims: &DimVector,
        offsets: &[usize],
        omega: (u32, u32),
        buf: &mut [u32],
        scratch: &mut Vec<u32>,
    ) {
        let f = &*self.field;
        let (vertex, n) = match gen {
            Generator::Scale(v) | Generator::Transvect(v) | Generator::Swap(v) | Generator::Cycle(v) => {
                (v, dims[v] as usize)
            }
        };
        for (k, h) in self.quiver.arrows().iter().enumerate() {
            let rows = dims[h.tgt] as usize;
            let cols = dims[h.src] as usize;
            let base = offsets[k];
            let m = &mut buf[base..base + rows * cols];
            if h.tgt == vertex {
                // left multiplication: row operations
                match gen {
                    Generator::Scale(_) => {
                        for c in 0..cols {
                            m[c] = f.mul(m[c], omega.0);
                        }
                    }
                    Generator::Transvect(_) => {
                        for c in 0..cols {
                            m[c] = f.add(m[c], m[cols + c]);
                        }
                    }
                    Generator::Swap(_) => {
                        for c in 0..cols {
                            m.swap(c, cols + c);
                        }
                    }
                    Generator::Cycle(_) => {
                        scratch.clear();
                        scratch.extend_from_slice(m);
                        for r in 0..n {
                            let src = (r + n - 1) % n;
                            m[r * cols..(r + 1) * cols]
                                .copy_from_slice(&scratch[src * cols..(src + 1) * cols]);
                        }
                    }
                }
            }
            if h.src == vertex {
                // right multiplication by the inverse: column operations
                match gen {
                    Generator::Scale(_) => {
                        for r in 0..rows {
                            m[r * cols] = f.mul(m[r * cols], omega.1);
                        }
                    }
                    Generator::Transvect(_) => {
                        for r in 0..rows {
                            m[r * cols + 1] = f.sub(m[r * cols + 1], m[r * cols]);
                        }
                    }
                    Generator::Swap(_) => {
                        for r in 0..rows {
                            m.swap(r * cols, r * cols + 1);
                        }
                    }
                    Generator::Cycle(_) => {
                        scratch.clear();
                        scratch.extend_from_slice(m);
                        for r in 0..rows {
                            for c in 0..n {
                                m[r * cols + c] = scratch[r * cols + (c + n - 1) % n];
                            }
                        }
                    }
                }
            }
        }
    }

    /// Partitions `E_α` into `G_α`-orbits.
    ///
    /// Points are scanned in enumeration order; the first unvisited point
    /// opens a new class (so it is the orbit's minimal point) and its orbit
    /// is closed under a generating set of `G_α`.
    pub fn orbit_census(&self, dims: &DimVector) -> Result<OrbitCensus> {
        let space = self.guarded_space(dims)?;
        let group_order = self.group_order(dims)?;
        let count = space.count as u64;
        let gens = self.generators(dims);
        let omega = self.field.primitive_element();
        let omega_inv = self.field.inv(omega)?;

        let mut class_of_point = vec![u32::MAX; count as usize];
        let mut reps: Vec<(u64, u64)> = Vec::new();
        let mut stack: Vec<u64> = Vec::new();
        let mut cur = vec![0u32; space.entries];
        let mut buf = vec![0u32; space.entries];
        let mut scratch = Vec::new();
        for start in 0..count {
            if class_of_point[start as usize] != u32::MAX {
                continue;
            }
            let class = reps.len() as u32;
            class_of_point[start as usize] = class;
            stack.push(start);
            let mut size = 0u64;
            while let Some(idx) = stack.pop() {
                size += 1;
                space.decode_into(idx, &mut cur);
                for &g in &gens {
                    buf.copy_from_slice(&cur);
                    self.apply_generator(g, dims, &space.offsets, (omega, omega_inv), &mut buf, &mut scratch);
                    let j = space.encode(&buf);
                    let slot = &mut class_of_point[j as usize];
                    if *slot == u32::MAX {
                        *slot = class;
                        stack.push(j);
                    }
                }
            }
            reps.push((start, size));
        }

        let probes = self.probes()?;
        let mut classes = Vec::with_capacity(reps.len());
        for (point, size) in reps {
            let representative = self.rep_at_index(&space, point);
            if group_order % size as u128 != 0 {
                return Err(Error::InvalidArgument(format!(
                    "orbit size {size} does not divide |G| = {group_order}"
                )));
            }
            let mut hom_fingerprint = Vec::with_capacity(probes.len() + 1);
            for probe in &probes {
                hom_fingerprint.push(self.hom_dim(&representative, probe)? as u32);
            }
            hom_fingerprint.push(self.hom_dim(&representative, &representative)? as u32);
            classes.push(IsoClass {
                id: ClassId {
                    dims: dims.clone(),
                    point,
                },
                representative,
                orbit_size: size,
                aut_count: group_order / size as u128,
                hom_fingerprint,
            });
        }
        Ok(OrbitCensus {
            dims: dims.clone(),
            group_order,
            classes,
            space,
            class_of_point,
        })
    }

    /// Every representation of each simple dimension vector `e_i`.
    fn probes(&self) -> Result<Vec<Representation>> {
        let mut out = Vec::new();
        for i in 0..self.quiver.num_vertices() {
            let dims = self.quiver.simple_dims(i);
            let space = self.point_space(&dims)?;
            if space.count > self.guards.max_points as u128 {
                continue;
            }
            for idx in 0..space.count as u64 {
                out.push(self.rep_at_index(&space, idx));
            }
        }
        Ok(out)
    }

    /// Human-oriented description of a class for reports.
    pub fn describe(&self, class: &IsoClass) -> String {
        format!("{:?}", class.representative)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat(q: Quiver, p: u64, e: u32, s: u32) -> RepCategory {
        RepCategory::new(q, p, e, s, Guards::default()).unwrap()
    }

    fn dv(c: &[u32]) -> DimVector {
        DimVector::new(c)
    }

    #[test]
    fn enumeration_counts() {
        let a2 = cat(Quiver::linear(2), 2, 1, 1);
        assert_eq!(a2.enumerate_reps(&dv(&[1, 1])).unwrap().count(), 2);
        let kr = cat(Quiver::kronecker(), 2, 1, 1);
        assert_eq!(kr.enumerate_reps(&dv(&[1, 1])).unwrap().count(), 4);
        let j = cat(Quiver::jordan(), 2, 1, 1);
        let reps: Vec<_> = j.enumerate_reps(&dv(&[2])).unwrap().collect();
        assert_eq!(reps.len(), 16);
        assert!(reps[0].maps()[0].is_zero());
        // last point is all ones
        assert!(reps[15].maps()[0].data().iter().all(|&x| x == 1));
    }

    #[test]
    fn enumeration_guard_reports_count() {
        let guards = Guards {
            max_points: 100,
            max_hom: 100,
        };
        let j = RepCategory::new(Quiver::jordan(), 2, 1, 1, guards).unwrap();
        match j.enumerate_reps(&dv(&[3])) {
            Err(Error::SizeGuardExceeded { required, .. }) => assert_eq!(required, 512),
            _ => panic!("expected guard error"),
        };
    }

    fn a2_modules(c: &RepCategory) -> (Representation, Representation, Representation) {
        let s1 = c.simple(0).unwrap();
        let s2 = c.simple(1).unwrap();
        let p1 = c
            .rep_from_maps(&dv(&[1, 1]), vec![Matrix::from_vec(1, 1, vec![1])])
            .unwrap();
        (s1, s2, p1)
    }

    #[test]
    fn hom_examples() {
        let c = cat(Quiver::linear(2), 2, 1, 1);
        let (s1, _s2, p1) = a2_modules(&c);
        assert_eq!(c.hom_space(&s1, &p1).unwrap().dim(), 0);
        assert_eq!(c.hom_space(&p1, &s1).unwrap().dim(), 1);
        assert!(c.hom_dim(&p1, &p1).unwrap() >= 1);
    }

    #[test]
    fn hom_basis_elements_are_module_maps() {
        let c = cat(Quiver::kronecker(), 3, 1, 1);
        let reps: Vec<_> = c.enumerate_reps(&dv(&[1, 2])).unwrap().step_by(37).collect();
        let f = c.field().clone();
        for m in &reps {
            for n in &reps {
                for g in c.hom_space(m, n).unwrap().basis {
                    for (k, h) in c.quiver().arrows().iter().enumerate() {
                        let lhs = g[h.tgt].mul(&m.maps()[k], &f);
                        let rhs = n.maps()[k].mul(&g[h.src], &f);
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn ext_examples() {
        let c = cat(Quiver::linear(2), 2, 1, 1);
        let (s1, s2, p1) = a2_modules(&c);
        assert_eq!(c.ext_dim(&s1, &s2).unwrap(), 1);
        assert_eq!(c.ext_dim(&s2, &s1).unwrap(), 0);
        assert_eq!(c.ext_dim(&p1, &p1).unwrap(), 0);
        assert_eq!(c.ext_dim_via_cokernel(&s1, &s2).unwrap(), 1);
    }

    #[test]
    fn iso_examples() {
        let c2 = cat(Quiver::linear(2), 2, 1, 1);
        let (s1, s2, p1) = a2_modules(&c2);
        assert!(c2.is_isomorphic(&p1, &p1.clone()).unwrap());
        let sum = c2.direct_sum(&s1, &s2).unwrap();
        assert!(!c2.is_isomorphic(&p1, &sum).unwrap());

        let c3 = cat(Quiver::linear(2), 3, 1, 1);
        let x1 = c3.rep_from_maps(&dv(&[1, 1]), vec![Matrix::from_vec(1, 1, vec![1])]).unwrap();
        let x2 = c3.rep_from_maps(&dv(&[1, 1]), vec![Matrix::from_vec(1, 1, vec![2])]).unwrap();
        assert!(c3.is_isomorphic(&x1, &x2).unwrap());
    }

    #[test]
    fn census_examples() {
        let a2 = cat(Quiver::linear(2), 2, 1, 1);
        let census = a2.orbit_census(&dv(&[1, 1])).unwrap();
        assert_eq!(census.classes.len(), 2);
        for class in &census.classes {
            assert_eq!(class.orbit_size, 1);
            assert_eq!(class.aut_count, 1);
        }
        assert_eq!(census.classes[0].id.to_string(), "1,1:0");

        let kr = cat(Quiver::kronecker(), 2, 1, 1);
        assert_eq!(kr.orbit_census(&dv(&[1, 1])).unwrap().classes.len(), 4);

        let j = cat(Quiver::jordan(), 3, 1, 1);
        let census = j.orbit_census(&dv(&[1])).unwrap();
        assert_eq!(census.classes.len(), 3);
        assert!(census.classes.iter().all(|c| c.aut_count == 2));
    }

    #[test]
    fn zero_dimension_census() {
        let a2 = cat(Quiver::linear(2), 2, 1, 1);
        let census = a2.orbit_census(&dv(&[0, 0])).unwrap();
        assert_eq!(census.classes.len(), 1);
        assert_eq!(census.classes[0].aut_count, 1);
        assert_eq!(census.classes[0].orbit_size, 1);
    }

    #[test]
    fn census_matches_isomorphism_test() {
        // Brute-force partition by pairwise iso testing must agree with the
        // orbit census.
        for (q, p, dims) in [
            (Quiver::jordan(), 2u64, dv(&[2])),
            (Quiver::kronecker(), 2, dv(&[1, 2])),
            (Quiver::linear(3), 3, dv(&[1, 1, 1])),
        ] {
            let c = cat(q, p, 1, 1);
            let census = c.orbit_census(&dims).unwrap();
            let reps: Vec<_> = c.enumerate_reps(&dims).unwrap().collect();
            for (i, m) in reps.iter().enumerate() {
                let class = census.class_of_index(i as u64);
                let rep = &census.classes[class].representative;
                assert!(c.is_isomorphic(m, rep).unwrap());
                for other in census.classes.iter().filter(|k| k.id != census.classes[class].id) {
                    assert!(!c.is_isomorphic(m, &other.representative).unwrap());
                }
            }
        }
    }

    #[test]
    fn twist_examples() {
        let c = cat(Quiver::jordan(), 2, 1, 2);
        let t = c.rep_from_maps(&dv(&[1]), vec![Matrix::from_vec(1, 1, vec![2])]).unwrap();
        let twisted = c.frobenius_twist(&t, 1);
        assert_eq!(twisted.maps()[0].get(0, 0), 3);
        assert_eq!(c.frobenius_twist(&twisted, 1), t);
        assert_eq!(c.frobenius_twist(&t, 2), t);

        let prime = cat(Quiver::jordan(), 2, 1, 1);
        let one = prime.rep_from_maps(&dv(&[1]), vec![Matrix::from_vec(1, 1, vec![1])]).unwrap();
        assert_eq!(prime.frobenius_twist(&one, 1), one);
    }

    #[test]
    fn minimal_field_examples() {
        let c = cat(Quiver::jordan(), 2, 1, 2);
        let t = c.rep_from_maps(&dv(&[1]), vec![Matrix::from_vec(1, 1, vec![2])]).unwrap();
        assert_eq!(c.minimal_field_of_definition(&t).unwrap(), 2);
        let one = c.rep_from_maps(&dv(&[1]), vec![Matrix::from_vec(1, 1, vec![1])]).unwrap();
        assert_eq!(c.minimal_field_of_definition(&one).unwrap(), 1);
        let a2 = cat(Quiver::linear(2), 2, 1, 2);
        let p1 = a2.rep_from_maps(&dv(&[1, 1]), vec![Matrix::from_vec(1, 1, vec![2])]).unwrap();
        assert_eq!(a2.minimal_field_of_definition(&p1).unwrap(), 1);
    }

    #[test]
    fn indecomposable_examples() {
        let c = cat(Quiver::linear(2), 2, 1, 1);
        let (s1, s2, p1) = a2_modules(&c);
        assert!(c.is_indecomposable(&p1).unwrap());
        assert!(!c.is_indecomposable(&c.direct_sum(&s1, &s2).unwrap()).unwrap());
        assert!(c.is_absolutely_indecomposable(&p1).unwrap());

        let j = cat(Quiver::jordan(), 2, 1, 1);
        let nilpotent = j.rep_from_maps(&dv(&[2]), vec![Matrix::from_vec(2, 2, vec![0, 1, 0, 0])]).unwrap();
        assert!(j.is_indecomposable(&nilpotent).unwrap());
        assert!(j.is_absolutely_indecomposable(&nilpotent).unwrap());
        // companion matrix of t^2 + t + 1
        let companion = j.rep_from_maps(&dv(&[2]), vec![Matrix::from_vec(2, 2, vec![0, 1, 1, 1])]).unwrap();
        assert!(j.is_indecomposable(&companion).unwrap());
        assert!(!j.is_absolutely_indecomposable(&companion).unwrap());
    }

    #[test]
    fn class_id_round_trip() {
        let id: ClassId = "1,1:3".parse().unwrap();
        assert_eq!(id.dims, dv(&[1, 1]));
        assert_eq!(id.point, 3);
        assert_eq!(id.to_string(), "1,1:3");
        assert_eq!("[2:0]".parse::<ClassId>().unwrap().to_string(), "2:0");
        assert!("junk".parse::<ClassId>().is_err());
    }
}
