//! Finite fields GF(p^e).
//!
//! Elements are stored as `u32` indices whose base-`p` digits are the
//! coefficients of the polynomial representative, constant term first:
//! index `c0 + c1·p + … + c_{e-1}·p^{e-1}` stands for `c0 + c1·t + …`.
//! Index order is the global enumeration order (zero first, then
//! lexicographic with the highest-degree coefficient most significant).
//!
//! Multiplication goes through discrete log / antilog tables built from the
//! smallest primitive element, so every field up to the size guard costs
//! `O(q)` memory.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Default bound on the field order `p^e`.
pub const DEFAULT_FIELD_GUARD: u64 = 1 << 20;

const ADD_TABLE_LIMIT: u32 = 256;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Canonical description of GF(p^e): characteristic, degree and the
/// defining polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    /// Monic modulus, constant coefficient first; length `e + 1`.
    modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        Self::with_guard(p, e, DEFAULT_FIELD_GUARD)
    }

    /// Builds GF(p^e) with the lexicographically smallest monic irreducible
    /// modulus of degree `e`.
    pub fn with_guard(p: u64, e: u32, guard: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
        }
        let order = (p as u128).checked_pow(e).unwrap_or(u128::MAX);
        if order > guard as u128 || order > u32::MAX as u128 {
            return Err(Error::SizeGuardExceeded {
                what: "field order",
                required: order,
                limit: guard,
            });
        }
        let p = p as u32;
        let modulus = smallest_irreducible(p, e);
        Ok(FieldSpec { p, e, modulus })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.p.pow(self.e)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {}", self.p, self.e, format_poly(&self.modulus))
    }
}

fn format_poly(coeffs: &[u32]) -> String {
    let mut terms = Vec::new();
    for (deg, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let term = match (deg, c) {
            (0, c) => format!("{c}"),
            (1, 1) => String::from("t"),
            (1, c) => format!("{c}t"),
            (d, 1) => format!("t^{d}"),
            (d, c) => format!("{c}t^{d}"),
        };
        terms.push(term);
    }
    if terms.is_empty() {
        String::from("0")
    } else {
        terms.join("+")
    }
}

// Dense polynomial helpers over Z/p, constant coefficient first.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let mut b = b.to_vec();
    poly_trim(&mut b);
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let factor = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &bc) in b.iter().enumerate() {
            let sub = (factor as u64 * bc as u64 % p as u64) as u32;
            let slot = &mut r[shift + i];
            *slot = (*slot + p - sub) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    // p is prime and small, Fermat is plenty.
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    result as u32
}

fn digits(mut n: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for slot in out.iter_mut() {
        *slot = (n % p as u64) as u32;
        n /= p as u64;
    }
    out
}

/// Exhaustive irreducibility test: no monic factor of degree `1..=deg/2`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for n in 0..count {
            let mut factor = digits(n, p, d);
            factor.push(1);
            if poly_rem(poly, &factor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    if e == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(e);
    for n in 0..count {
        let mut poly = digits(n, p, e as usize);
        poly.push(1);
        if is_irreducible(&poly, p) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// GF(p^e) with its arithmetic tables.
#[derive(Clone)]
pub struct GaloisField {
    spec: FieldSpec,
    order: u32,
    /// `exp[k] = g^k`, stored twice over so sums of two logs index directly.
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Vec<u32>,
    neg_table: Vec<u32>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaloisField").field("spec", &self.spec).finish()
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for GaloisField {}

impl GaloisField {
    pub fn new(spec: FieldSpec) -> Self {
        let order = spec.order();
        let p = spec.p;
        let e = spec.e as usize;

        let slow_mul = |a: u32, b: u32| -> u32 {
            let da = digits(a as u64, p, e);
            let db = digits(b as u64, p, e);
            let mut prod = vec![0u32; 2 * e];
            for (i, &x) in da.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
                }
            }
            let r = poly_rem(&prod, &spec.modulus, p);
            r.iter().rev().fold(0u32, |acc, &c| acc * p + c)
        };
        let slow_pow = |a: u32, mut n: u64| -> u32 {
            let mut result = 1u32;
            let mut base = a;
            while n > 0 {
                if n & 1 == 1 {
                    result = slow_mul(result, base);
                }
                base = slow_mul(base, base);
                n >>= 1;
            }
            result
        };

        let group = (order - 1) as u64;
        let factors = prime_factors(group);
        let generator = (1..order)
            .find(|&g| factors.iter().all(|&r| slow_pow(g, group / r) != 1))
            .expect("multiplicative group of a finite field is cyclic");

        let mut exp = vec![0u32; 2 * group as usize];
        let mut log = vec![0u32; order as usize];
        let mut acc = 1u32;
        for k in 0..group as usize {
            exp[k] = acc;
            exp[k + group as usize] = acc;
            log[acc as usize] = k as u32;
            acc = slow_mul(acc, generator);
        }

        let digit_add = |a: u32, b: u32| -> u32 {
            let (mut a, mut b) = (a, b);
            let mut out = 0u32;
            let mut place = 1u32;
            for _ in 0..e {
                out += ((a % p + b % p) % p) * place;
                a /= p;
                b /= p;
                place *= p;
            }
            out
        };
        let add_table = if e > 1 && order <= ADD_TABLE_LIMIT {
            let mut t = vec![0u32; (order * order) as usize];
            for a in 0..order {
                for b in 0..order {
                    t[(a * order + b) as usize] = digit_add(a, b);
                }
            }
            t
        } else {
            Vec::new()
        };
        let neg_table = (0..order)
            .map(|a| {
                let d = digits(a as u64, p, e);
                d.iter()
                    .rev()
                    .fold(0u32, |acc, &c| acc * p + (p - c) % p)
            })
            .collect();

        GaloisField {
            spec,
            order,
            exp,
            log,
            add_table,
            neg_table,
        }
    }

    /// Convenience: `GaloisField::new(FieldSpec::new(p, e)?)`.
    pub fn make(p: u64, e: u32) -> Result<Self> {
        Ok(GaloisField::new(FieldSpec::new(p, e)?))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn characteristic(&self) -> u32 {
        self.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.spec.e
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.spec.e == 1 {
            let s = a + b;
            if s >= self.order {
                s - self.order
            } else {
                s
            }
        } else if !self.add_table.is_empty() {
            self.add_table[(a * self.order + b) as usize]
        } else {
            let p = self.spec.p;
            let (mut a, mut b) = (a, b);
            let mut out = 0u32;
            let mut place = 1u32;
            while a > 0 || b > 0 {
                out += ((a % p + b % p) % p) * place;
                a /= p;
                b /= p;
                place *= p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg_table[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let group = self.order - 1;
        Ok(self.exp[((group - self.log[a as usize]) % group) as usize])
    }

    pub fn pow(&self, a: u32, n: u64) -> u32 {
        if n == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let group = (self.order - 1) as u64;
        let k = (self.log[a as usize] as u64 * (n % group)) % group;
        self.exp[k as usize]
    }

    /// `x ↦ x^(p^times)`.
    pub fn frobenius(&self, a: u32, times: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        let group = (self.order - 1) as u64;
        let mut power = 1u64 % group.max(1);
        for _ in 0..times {
            power = power * self.spec.p as u64 % group.max(1);
        }
        let k = (self.log[a as usize] as u64 * power) % group.max(1);
        self.exp[k as usize]
    }

    /// Smallest primitive element (index order).
    pub fn primitive_element(&self) -> u32 {
        if self.order == 2 {
            1
        } else {
            self.exp[1]
        }
    }

    pub fn coeffs(&self, a: u32) -> Vec<u32> {
        digits(a as u64, self.spec.p, self.spec.e as usize)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<u32> {
        if coeffs.len() > self.spec.e as usize || coeffs.iter().any(|&c| c >= self.spec.p) {
            return Err(Error::InvalidArgument(format!(
                "coefficients {coeffs:?} do not describe an element of {}",
                self.spec
            )));
        }
        Ok(coeffs.iter().rev().fold(0u32, |acc, &c| acc * self.spec.p + c))
    }

    pub fn format_element(&self, a: u32) -> String {
        if self.spec.e == 1 {
            format!("{a}")
        } else {
            format_poly(&self.coeffs(a))
        }
    }

    /// A field embedding `self → larger`, as a lookup table over element
    /// indices. `t` is sent to the smallest root of the modulus in `larger`.
    pub fn embedding_into(&self, larger: &GaloisField) -> Result<Vec<u32>> {
        if self.spec.p != larger.spec.p || !larger.spec.e.is_multiple_of(self.spec.e) {
            return Err(Error::FieldMismatch);
        }
        let modulus = &self.spec.modulus;
        let root = (0..larger.order)
            .find(|&r| {
                let value = modulus
                    .iter()
                    .rev()
                    .fold(0u32, |acc, &c| larger.add(larger.mul(acc, r), c));
                value == 0
            })
            .ok_or(Error::FieldMismatch)?;
        let table = (0..self.order)
            .map(|a| {
                self.coeffs(a)
                    .iter()
                    .rev()
                    .fold(0u32, |acc, &c| larger.add(larger.mul(acc, root), c))
            })
            .collect();
        Ok(table)
    }
}

/// A field element bundled with its field, for the checked public API.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<GaloisField>,
    value: u32,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format_element(self.value))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format_element(self.value))
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.field.spec == other.field.spec
    }
}

impl Eq for FieldElement {}

impl FieldElement {
    pub fn new(field: Arc<GaloisField>, value: u32) -> Result<Self> {
        if value >= field.order {
            return Err(Error::InvalidArgument(format!(
                "index {value} out of range for {}",
                field.spec
            )));
        }
        Ok(FieldElement { field, value })
    }

    pub fn from_coeffs(field: Arc<GaloisField>, coeffs: &[u32]) -> Result<Self> {
        let value = field.from_coeffs(coeffs)?;
        Ok(FieldElement { field, value })
    }

    pub fn zero(field: Arc<GaloisField>) -> Self {
        FieldElement { field, value: 0 }
    }

    pub fn one(field: Arc<GaloisField>) -> Self {
        FieldElement { field, value: 1 }
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field.spec == other.field.spec {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn with(&self, value: u32) -> Self {
        FieldElement {
            field: self.field.clone(),
            value,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.with(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> Self {
        self.with(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.with(self.field.inv(self.value)?))
    }

    pub fn frobenius(&self, times: u32) -> Self {
        self.with(self.field.frobenius(self.value, times))
    }
}

/// All elements of the field in the global enumeration order.
pub fn enumerate_field(field: &Arc<GaloisField>) -> Vec<FieldElement> {
    (0..field.order)
        .map(|value| FieldElement {
            field: field.clone(),
            value,
        })
        .collect()
}
