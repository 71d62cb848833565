//! Checkers for the identities satisfied by the Hall algebra. Each returns
//! both sides exactly, so a failing report can be inspected term by term.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::coef::HallCoef;
use crate::error::{Error, Result};
use crate::hall::{AntipodeConvention, HallAlgebra, HallElement, TensorElement, Twist};
use crate::memo::MemoMap;
use crate::quiver::DimVector;
use crate::rep::ClassId;

/// One side of an identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Side {
    Coef(HallCoef),
    Element(HallElement),
    Tensor(TensorElement),
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Coef(c) => write!(f, "{c}"),
            Side::Element(e) => write!(f, "{e}"),
            Side::Tensor(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub identity: String,
    pub inputs: Vec<String>,
    pub lhs: Side,
    pub rhs: Side,
    pub equal: bool,
    /// Filled in by callers that time the check.
    pub elapsed: Duration,
    /// Set when a failure points at a convention rather than a bug.
    pub diagnostic: Option<String>,
    /// Advisory reports never count as identity violations.
    pub advisory: bool,
}

impl IdentityReport {
    fn new(identity: &str, inputs: Vec<String>, lhs: Side, rhs: Side) -> Self {
        let equal = lhs == rhs;
        IdentityReport {
            identity: identity.to_string(),
            inputs,
            lhs,
            rhs,
            equal,
            elapsed: Duration::ZERO,
            diagnostic: None,
            advisory: false,
        }
    }

    /// Counts as a violation: unequal and not advisory.
    pub fn is_violation(&self) -> bool {
        !self.equal && !self.advisory
    }
}

fn label(id: &ClassId) -> String {
    if id.dims.is_zero() {
        "[0]".to_string()
    } else {
        format!("[{id}]")
    }
}

fn labels(ids: &[&ClassId]) -> Vec<String> {
    ids.iter().map(|i| label(i)).collect()
}

fn big(n: u128) -> BigInt {
    BigInt::from(n)
}

fn q_power(q: u64, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(q));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base, (-e) as usize).recip()
    }
}

type Splittings = Arc<Vec<(ClassId, ClassId, u64)>>;

/// Memo tables shared across many Green-formula checks.
pub struct GreenCache {
    splittings: MemoMap<ClassId, Splittings>,
    crossings: MemoMap<(ClassId, ClassId), Arc<BTreeMap<(ClassId, ClassId), BigInt>>>,
    exponents: MemoMap<(ClassId, ClassId), i64>,
}

impl Default for GreenCache {
    fn default() -> Self {
        Self::new()
    }
}

impl GreenCache {
    pub fn new() -> Self {
        GreenCache {
            splittings: MemoMap::new(),
            crossings: MemoMap::new(),
            exponents: MemoMap::new(),
        }
    }

    /// All `(L/W, W, count)` over every subdimension.
    fn splittings(&self, h: &HallAlgebra, m: &ClassId) -> Result<Splittings> {
        if let Some(s) = self.splittings.get(m) {
            return Ok(s);
        }
        let mut out = Vec::new();
        for beta in m.dims.sub_vectors() {
            for ((x, y), c) in h.filtration_counts(m, &beta)?.iter() {
                out.push((x.clone(), y.clone(), *c));
            }
        }
        Ok(self.splittings.insert(m.clone(), Arc::new(out)))
    }

    /// `P(M, N; X, Z) = Σ_Y F^M_{XY} F^N_{YZ} a_Y`.
    fn crossing(
        &self,
        h: &HallAlgebra,
        m: &ClassId,
        n: &ClassId,
    ) -> Result<Arc<BTreeMap<(ClassId, ClassId), BigInt>>> {
        let key = (m.clone(), n.clone());
        if let Some(t) = self.crossings.get(&key) {
            return Ok(t);
        }
        let sm = self.splittings(h, m)?;
        let sn = self.splittings(h, n)?;
        let mut by_top: BTreeMap<&ClassId, Vec<(&ClassId, u64)>> = BTreeMap::new();
        for (y, z, c) in sn.iter() {
            by_top.entry(y).or_default().push((z, *c));
        }
        let mut out: BTreeMap<(ClassId, ClassId), BigInt> = BTreeMap::new();
        for (x, y, c1) in sm.iter() {
            if let Some(list) = by_top.get(y) {
                let a_y = h.aut(y)?;
                for (z, c2) in list {
                    let v = big(*c1 as u128) * big(*c2 as u128) * big(a_y);
                    *out.entry((x.clone(), (*z).clone())).or_insert_with(BigInt::zero) += v;
                }
            }
        }
        Ok(self.crossings.insert(key, Arc::new(out)))
    }

    /// `dim Ext¹(X, Z) − dim Hom(X, Z)` from the linear algebra of the
    /// representatives.
    fn exponent(&self, h: &HallAlgebra, x: &ClassId, z: &ClassId) -> Result<i64> {
        let key = (x.clone(), z.clone());
        if let Some(e) = self.exponents.get(&key) {
            return Ok(e);
        }
        let cat = h.category();
        let xr = h.class(x)?.representative;
        let zr = h.class(z)?.representative;
        let e = cat.ext_dim_via_cokernel(&xr, &zr)? as i64 - cat.hom_dim(&xr, &zr)? as i64;
        Ok(self.exponents.insert(key, e))
    }
}

/// Green's formula for `(M1, M2, N1, N2)`:
/// `a_{M1}a_{M2}a_{N1}a_{N2} Σ_L F^L_{M1N1} F^L_{M2N2} / a_L =
/// Σ_{X,Y1,Y2,Z} |Ext¹(X,Z)|/|Hom(X,Z)| F^{M1}_{XY1} F^{M2}_{XY2}
/// F^{N1}_{Y2Z} F^{N2}_{Y1Z} a_X a_{Y1} a_{Y2} a_Z`.
pub fn check_green_formula(
    h: &HallAlgebra,
    cache: &GreenCache,
    m1: &ClassId,
    m2: &ClassId,
    n1: &ClassId,
    n2: &ClassId,
) -> Result<IdentityReport> {
    let q = h.q();
    let p1 = h.product_counts(m1, n1)?;
    let p2 = h.product_counts(m2, n2)?;
    let mut lhs = BigRational::zero();
    for (l, f1) in p1.iter() {
        if let Some(f2) = p2.get(l) {
            lhs += BigRational::new(big(*f1 as u128) * big(*f2 as u128), big(h.aut(l)?));
        }
    }
    lhs *= BigRational::from_integer(big(h.aut(m1)?) * big(h.aut(m2)?) * big(h.aut(n1)?) * big(h.aut(n2)?));

    let c1 = cache.crossing(h, m1, n2)?;
    let c2 = cache.crossing(h, m2, n1)?;
    let mut rhs = BigRational::zero();
    for ((x, z), v1) in c1.iter() {
        if let Some(v2) = c2.get(&(x.clone(), z.clone())) {
            let weight = big(h.aut(x)?) * big(h.aut(z)?) * v1 * v2;
            rhs += q_power(q, cache.exponent(h, x, z)?) * BigRational::from_integer(weight);
        }
    }
    Ok(IdentityReport::new(
        "green",
        labels(&[m1, m2, n1, n2]),
        Side::Coef(HallCoef::from_rational(lhs, q)),
        Side::Coef(HallCoef::from_rational(rhs, q)),
    ))
}

/// `F^L_{MN} a_M a_N` (submodule counting) against `h_L^{MN} a_L` with `h`
/// from counting gluings.
pub fn check_riedtmann_peng(h: &HallAlgebra, m: &ClassId, n: &ClassId, l: &ClassId) -> Result<IdentityReport> {
    let q = h.q();
    let f = h.hall_number(m, n, l)?;
    let lhs = HallCoef::from_big(big(f as u128) * big(h.aut(m)?) * big(h.aut(n)?), q);
    let rhs = &h.h_number_direct(l, m, n)? * &h.int(h.aut(l)?);
    Ok(IdentityReport::new(
        "riedtmann-peng",
        labels(&[m, n, l]),
        Side::Coef(lhs),
        Side::Coef(rhs),
    ))
}

fn direct_coproduct(h: &HallAlgebra, l: &ClassId) -> Result<Vec<(ClassId, ClassId, HallCoef)>> {
    let mut out = Vec::new();
    for beta in l.dims.sub_vectors() {
        let alpha = l.dims.checked_sub(&beta).expect("sub vector");
        for x in h.classes(&alpha)? {
            for y in h.classes(&beta)? {
                let c = h.h_number_direct(l, &x, &y)?;
                if !c.is_zero() {
                    out.push((x.clone(), y, c));
                }
            }
        }
    }
    Ok(out)
}

fn restrict(t: &TensorElement, u: &DimVector, v: &DimVector) -> TensorElement {
    let mut out = TensorElement::zero(t.q(), 2);
    for (k, c) in t.terms() {
        if k[0].dims == *u && k[1].dims == *v {
            out.add_term(k.clone(), c);
        }
    }
    out
}

/// The `(u, v)` block of `δ([M] * [N])` against
/// `Σ q^{−⟨dim X, dim Z⟩} F^{M'}_{X Y2} F^{N'}_{Y1 Z} h_M^{X Y1} h_N^{Y2 Z}`,
/// the right side built from gluing counts.
pub fn check_bialgebra(
    h: &HallAlgebra,
    m: &ClassId,
    n: &ClassId,
    u: &DimVector,
    v: &DimVector,
) -> Result<IdentityReport> {
    let q = h.q();
    if m.dims.checked_add(&n.dims)? != u.checked_add(v)? {
        return Err(Error::DimensionMismatch);
    }
    let prod = h.multiply(&h.basis(m), &h.basis(n), Twist::Untwisted)?;
    let lhs = restrict(&h.comultiply(&prod, Twist::Untwisted)?, u, v);

    let mut rhs = TensorElement::zero(q, 2);
    let dm = direct_coproduct(h, m)?;
    let dn = direct_coproduct(h, n)?;
    for (x, y1, hm) in &dm {
        for (y2, z, hn) in &dn {
            if x.dims.checked_add(&y2.dims)? != *u || y1.dims.checked_add(&z.dims)? != *v {
                continue;
            }
            let twist = HallCoef::from_rational(q_power(q, -h.euler(&x.dims, &z.dims)), q);
            let coef = &(hm * hn) * &twist;
            let left = h.product_counts(x, y2)?;
            let right = h.product_counts(y1, z)?;
            for (mp, f1) in left.iter() {
                for (np, f2) in right.iter() {
                    let c = &coef * &h.int(*f1 as u128 * *f2 as u128);
                    rhs.add_term(vec![mp.clone(), np.clone()], &c);
                }
            }
        }
    }
    let mut inputs = labels(&[m, n]);
    inputs.push(format!("({u})"));
    inputs.push(format!("({v})"));
    Ok(IdentityReport::new("bialgebra", inputs, Side::Tensor(lhs), Side::Tensor(rhs)))
}

/// Product in `ℋ ⊗ ℋ` with `(a⊗b)(c⊗d) = q^{−⟨dim a, dim d⟩} ac ⊗ bd`.
pub fn tensor_multiply(h: &HallAlgebra, x: &TensorElement, y: &TensorElement) -> Result<TensorElement> {
    let q = h.q();
    let mut out = TensorElement::zero(q, 2);
    for (k1, c1) in x.terms() {
        for (k2, c2) in y.terms() {
            let twist = HallCoef::from_rational(q_power(q, -h.euler(&k1[0].dims, &k2[1].dims)), q);
            let coef = &(c1 * c2) * &twist;
            let left = h.product_counts(&k1[0], &k2[0])?;
            let right = h.product_counts(&k1[1], &k2[1])?;
            for (a, f1) in left.iter() {
                for (b, f2) in right.iter() {
                    out.add_term(vec![a.clone(), b.clone()], &(&coef * &h.int(*f1 as u128 * *f2 as u128)));
                }
            }
        }
    }
    Ok(out)
}

/// `δ([M] * [N]) = δ([M]) δ([N])` in the twisted tensor algebra.
pub fn check_green_theorem(h: &HallAlgebra, m: &ClassId, n: &ClassId) -> Result<IdentityReport> {
    let prod = h.multiply(&h.basis(m), &h.basis(n), Twist::Untwisted)?;
    let lhs = h.comultiply(&prod, Twist::Untwisted)?;
    let rhs = tensor_multiply(
        h,
        &h.comultiply(&h.basis(m), Twist::Untwisted)?,
        &h.comultiply(&h.basis(n), Twist::Untwisted)?,
    )?;
    Ok(IdentityReport::new("green-theorem", labels(&[m, n]), Side::Tensor(lhs), Side::Tensor(rhs)))
}

/// `(a, b * c) = (δ(a), b ⊗ c)`.
pub fn check_adjointness(h: &HallAlgebra, a: &ClassId, b: &ClassId, c: &ClassId) -> Result<IdentityReport> {
    let ea = h.basis(a);
    let lhs = h.hopf_pairing(&ea, &h.multiply(&h.basis(b), &h.basis(c), Twist::Untwisted)?)?;
    let rhs = h.tensor_pairing(
        &h.comultiply(&ea, Twist::Untwisted)?,
        &h.tensor(&h.basis(b), &h.basis(c)),
    )?;
    Ok(IdentityReport::new("adjoint", labels(&[a, b, c]), Side::Coef(lhs), Side::Coef(rhs)))
}

/// `(δ ⊗ 1)δ([M]) = (1 ⊗ δ)δ([M])`.
pub fn check_coassociativity(h: &HallAlgebra, m: &ClassId, twist: Twist) -> Result<IdentityReport> {
    let d = h.comultiply(&h.basis(m), twist)?;
    let lhs = h.comultiply_leg(&d, 0, twist)?;
    let rhs = h.comultiply_leg(&d, 1, twist)?;
    let name = if twist.is_twisted() { "coassociativity-twisted" } else { "coassociativity" };
    Ok(IdentityReport::new(name, labels(&[m]), Side::Tensor(lhs), Side::Tensor(rhs)))
}

/// `m(σ ⊗ 1)δ([M])` (left) or `m(1 ⊗ σ)δ([M])` (right) against `δ_{M,0}[0]`.
pub fn check_antipode_axiom(
    h: &HallAlgebra,
    m: &ClassId,
    twist: Twist,
    conv: AntipodeConvention,
    right: bool,
) -> Result<IdentityReport> {
    let q = h.q();
    let mut lhs = HallElement::zero(q);
    for (key, c) in h.comultiply(&h.basis(m), twist)?.terms() {
        let (a, b) = if right {
            (h.basis(&key[0]), h.antipode(&h.basis(&key[1]), twist, conv)?)
        } else {
            (h.antipode(&h.basis(&key[0]), twist, conv)?, h.basis(&key[1]))
        };
        lhs = lhs.add(&h.multiply(&a, &b, twist)?.scale(c));
    }
    let rhs = if m.dims.is_zero() { h.unit() } else { HallElement::zero(q) };
    let name = match (twist.is_twisted(), right) {
        (false, false) => "antipode-left",
        (false, true) => "antipode-right",
        (true, false) => "antipode-twisted-left",
        (true, true) => "antipode-twisted-right",
    };
    let mut report = IdentityReport::new(name, labels(&[m]), Side::Element(lhs), Side::Element(rhs));
    if !report.equal && twist.is_twisted() {
        report.diagnostic = Some(format!(
            "ConventionMismatch: antipode exponent convention {conv:?} fails the antipode axiom"
        ));
    }
    Ok(report)
}

/// `σ^t(x·y) = σ^t(y)·σ^t(x)` on basis elements. Advisory.
pub fn check_antipode_antimultiplicative(
    h: &HallAlgebra,
    m: &ClassId,
    n: &ClassId,
    conv: AntipodeConvention,
) -> Result<IdentityReport> {
    let t = Twist::Twisted;
    let (x, y) = (h.basis(m), h.basis(n));
    let lhs = h.antipode(&h.multiply(&x, &y, t)?, t, conv)?;
    let rhs = h.multiply(&h.antipode(&y, t, conv)?, &h.antipode(&x, t, conv)?, t)?;
    let mut report =
        IdentityReport::new("antipode-antimultiplicative", labels(&[m, n]), Side::Element(lhs), Side::Element(rhs));
    report.advisory = true;
    if !report.equal {
        report.diagnostic = Some("ConventionMismatch: holds only up to the braiding twist".to_string());
    }
    Ok(report)
}

/// `δ^t σ^t([M]) = (σ^t ⊗ σ^t) δ^{t,op}([M])`. Advisory.
pub fn check_antipode_anticomultiplicative(
    h: &HallAlgebra,
    m: &ClassId,
    conv: AntipodeConvention,
) -> Result<IdentityReport> {
    let t = Twist::Twisted;
    let q = h.q();
    let lhs = h.comultiply(&h.antipode(&h.basis(m), t, conv)?, t)?;
    let mut rhs = TensorElement::zero(q, 2);
    for (key, c) in h.comultiply(&h.basis(m), t)?.terms() {
        let a = h.antipode(&h.basis(&key[1]), t, conv)?;
        let b = h.antipode(&h.basis(&key[0]), t, conv)?;
        rhs = rhs.add(&h.tensor(&a, &b.scale(c)));
    }
    let mut report =
        IdentityReport::new("antipode-anticomultiplicative", labels(&[m]), Side::Tensor(lhs), Side::Tensor(rhs));
    report.advisory = true;
    if !report.equal {
        report.diagnostic = Some("ConventionMismatch: holds only up to the braiding twist".to_string());
    }
    Ok(report)
}

/// `Σ_{k=0}^{n} (−1)^k [n; k]_v [S_i]^{n−k}·[S_j]·[S_i]^k = 0` in the
/// twisted algebra, `n = 1 + #edges between i and j`.
pub fn check_serre(h: &HallAlgebra, i: usize, j: usize) -> Result<IdentityReport> {
    let quiver = h.category().quiver().clone();
    if i == j {
        return Err(Error::InvalidArgument("Serre relation needs i ≠ j".into()));
    }
    for v in [i, j] {
        if v >= quiver.num_vertices() {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        if quiver.has_loop(v) {
            return Err(Error::LoopVertex(quiver.vertices()[v].clone()));
        }
    }
    let n = 1 + quiver.edges_between(i, j) as u32;
    let si = h.basis(&h.simple_class(i)?);
    let sj = h.basis(&h.simple_class(j)?);
    let t = Twist::Twisted;
    let mut powers = vec![h.unit()];
    for k in 1..=n as usize {
        powers.push(h.multiply(&powers[k - 1], &si, t)?);
    }
    let mut sum = HallElement::zero(h.q());
    for k in 0..=n {
        let term = h.multiply(&h.multiply(&powers[(n - k) as usize], &sj, t)?, &powers[k as usize], t)?;
        let mut c = h.v_binomial(n, k);
        if k % 2 == 1 {
            c = -c;
        }
        sum = sum.add(&term.scale(&c));
    }
    let inputs = vec![quiver.vertices()[i].clone(), quiver.vertices()[j].clone()];
    Ok(IdentityReport::new(
        "serre",
        inputs,
        Side::Element(sum),
        Side::Element(HallElement::zero(h.q())),
    ))
}

/// For `f = [S_{i1}] * ⋯ * [S_{im}]` (distinct vertices): `δ̃(f)`, whose
/// coefficients are raw gluing counts `|D(α,β)_L|`, against `δ(f)` from
/// Hall numbers and automorphism counts.
pub fn check_coincide(h: &HallAlgebra, vertices: &[usize]) -> Result<IdentityReport> {
    for (k, v) in vertices.iter().enumerate() {
        if vertices[..k].contains(v) {
            return Err(Error::InvalidArgument("vertices must be pairwise distinct".into()));
        }
    }
    let q = h.q();
    let mut gens = Vec::new();
    for &v in vertices {
        gens.push(h.basis(&h.simple_class(v)?));
    }
    let f = h.multiply_many(&gens, Twist::Untwisted)?;
    let rhs = h.comultiply(&f, Twist::Untwisted)?;
    let mut lhs = TensorElement::zero(q, 2);
    for (l, c) in f.terms() {
        for beta in l.dims.sub_vectors() {
            let alpha = l.dims.checked_sub(&beta).expect("sub vector");
            for m in h.classes(&alpha)? {
                for n in h.classes(&beta)? {
                    let d = h.direct_ext_count(&m, &n, l)?;
                    if d != 0 {
                        lhs.add_term(vec![m.clone(), n.clone()], &(c * &h.int(d as u128)));
                    }
                }
            }
        }
    }
    let quiver = h.category().quiver();
    let inputs = vertices.iter().map(|&v| quiver.vertices()[v].clone()).collect();
    Ok(IdentityReport::new("coincide", inputs, Side::Tensor(lhs), Side::Tensor(rhs)))
}

/// Dimension vectors with total at most `limit`, in canonical order.
pub fn dims_up_to(h: &HallAlgebra, limit: u32) -> Vec<DimVector> {
    h.category().quiver().dims_up_to_total(limit)
}

/// All `(M, N)` with `dim M + dim N = γ`, in canonical order.
pub fn pairs_of_total(h: &HallAlgebra, gamma: &DimVector) -> Result<Vec<(ClassId, ClassId)>> {
    let mut out = Vec::new();
    for beta in gamma.sub_vectors() {
        let alpha = gamma.checked_sub(&beta).expect("sub vector");
        for m in h.classes(&alpha)? {
            for n in h.classes(&beta)? {
                out.push((m.clone(), n));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Every `(M1, M2, N1, N2)` with `dim M1 + dim N1 = dim M2 + dim N2` of
/// total at most `limit`.
pub fn green_inputs(h: &HallAlgebra, limit: u32) -> Result<Vec<[ClassId; 4]>> {
    let mut out = Vec::new();
    for gamma in dims_up_to(h, limit) {
        let pairs = pairs_of_total(h, &gamma)?;
        for (m1, n1) in &pairs {
            for (m2, n2) in &pairs {
                out.push([m1.clone(), m2.clone(), n1.clone(), n2.clone()]);
            }
        }
    }
    Ok(out)
}

/// Every `(M, N, L)` with `dim M + dim N = dim L` of total at most `limit`.
pub fn triple_inputs(h: &HallAlgebra, limit: u32) -> Result<Vec<[ClassId; 3]>> {
    let mut out = Vec::new();
    for gamma in dims_up_to(h, limit) {
        let pairs = pairs_of_total(h, &gamma)?;
        for l in h.classes(&gamma)? {
            for (m, n) in &pairs {
                out.push([m.clone(), n.clone(), l.clone()]);
            }
        }
    }
    Ok(out)
}

/// Every class of total dimension at most `limit`.
pub fn class_inputs(h: &HallAlgebra, limit: u32) -> Result<Vec<ClassId>> {
    let mut out = Vec::new();
    for gamma in dims_up_to(h, limit) {
        out.extend(h.classes(&gamma)?);
    }
    Ok(out)
}

/// Every `(M, N, u, v)` with `dim M + dim N = u + v = γ` for the given `γ`s.
pub fn bialgebra_inputs(
    h: &HallAlgebra,
    totals: &[DimVector],
) -> Result<Vec<(ClassId, ClassId, DimVector, DimVector)>> {
    let mut out = Vec::new();
    for gamma in totals {
        let pairs = pairs_of_total(h, gamma)?;
        for (m, n) in &pairs {
            for v in gamma.sub_vectors() {
                let u = gamma.checked_sub(&v).expect("sub vector");
                out.push((m.clone(), n.clone(), u, v));
            }
        }
    }
    Ok(out)
}

/// Exact value of `(q−1)^2 (q+1) / q`, the Green formula anchor.
pub fn green_anchor_value(q: u64) -> HallCoef {
    let qi = q as i128;
    HallCoef::ratio((qi - 1) * (qi - 1) * (qi + 1), qi, q)
}

/// Whether every non-advisory report in a batch holds.
pub fn all_hold(reports: &[IdentityReport]) -> bool {
    reports.iter().all(|r| !r.is_violation())
}
