//! Counting representations over `F_{q^s}`: iso classes, indecomposables,
//! absolutely indecomposables, Frobenius orbits and classes with a given
//! minimal field of definition, plus exact polynomial interpolation.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::memo::MemoMap;
use crate::quiver::{DimVector, Quiver};
use crate::rep::{Guards, OrbitCensus, RepCategory};

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The Möbius function.
pub fn mobius(mut n: u64) -> i64 {
    if n == 0 {
        return 0;
    }
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// One line of counts for `(Q, α, q, s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRow {
    pub quiver: String,
    pub alpha: DimVector,
    pub q: u64,
    pub s: u32,
    /// Isomorphism classes over `F_{q^s}`.
    pub m: u64,
    /// Indecomposable classes.
    pub i: u64,
    /// Absolutely indecomposable classes.
    pub a: u64,
    /// Frobenius orbits on classes, by cycle counting.
    pub mf_direct: u64,
    /// Frobenius orbits from the divisor-sum formula.
    pub mf_formula: u64,
    /// Classes whose minimal field of definition is `F_{q^s}` (Möbius sum).
    pub m_min: u64,
}

impl CensusRow {
    pub fn agree(&self) -> bool {
        self.mf_direct == self.mf_formula
    }
}

/// Counts for one quiver over `F_q`, `q = p^e`, with every working field
/// `F_{q^s}` cached.
pub struct KacCounter {
    quiver: Arc<Quiver>,
    name: String,
    p: u64,
    e: u32,
    guards: Guards,
    censuses: MemoMap<(DimVector, u32), Arc<OrbitCensus>>,
}

impl KacCounter {
    pub fn new(quiver: Quiver, name: &str, p: u64, e: u32, guards: Guards) -> Result<Self> {
        crate::gf::FieldSpec::new(p, e)?;
        Ok(KacCounter {
            quiver: Arc::new(quiver),
            name: name.into(),
            p,
            e,
            guards,
            censuses: MemoMap::new(),
        })
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.e)
    }

    pub fn category(&self, s: u32) -> Result<RepCategory> {
        RepCategory::new((*self.quiver).clone(), self.p, self.e, s, self.guards)
    }

    pub fn census(&self, alpha: &DimVector, s: u32) -> Result<Arc<OrbitCensus>> {
        let key = (alpha.clone(), s);
        if let Some(c) = self.censuses.get(&key) {
            return Ok(c);
        }
        let c = Arc::new(self.category(s)?.orbit_census(alpha)?);
        Ok(self.censuses.insert(key, c))
    }

    /// `M(α, q^s)`.
    pub fn count_m(&self, alpha: &DimVector, s: u32) -> Result<u64> {
        Ok(self.census(alpha, s)?.classes.len() as u64)
    }

    /// `(M, I, A)` over `F_{q^s}`.
    pub fn count_mia(&self, alpha: &DimVector, s: u32) -> Result<(u64, u64, u64)> {
        let cat = self.category(s)?;
        let census = self.census(alpha, s)?;
        let (mut i, mut a) = (0, 0);
        for class in &census.classes {
            if cat.is_indecomposable(&class.representative)? {
                i += 1;
                if cat.is_absolutely_indecomposable(&class.representative)? {
                    a += 1;
                }
            }
        }
        Ok((census.classes.len() as u64, i, a))
    }

    /// Cycles of `[M] ↦ [M^{[q]}]` on the classes over `F_{q^s}`.
    pub fn count_mf_direct(&self, alpha: &DimVector, s: u32) -> Result<u64> {
        let cat = self.category(s)?;
        let census = self.census(alpha, s)?;
        let perm: Vec<usize> = census
            .classes
            .iter()
            .map(|c| census.classify(&cat.frobenius_twist(&c.representative, 1)))
            .collect::<Result<_>>()?;
        let mut seen = vec![false; perm.len()];
        let mut cycles = 0;
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = perm[k];
            }
        }
        Ok(cycles)
    }

    /// `M^min(α, q^s) = Σ_{r|s} μ(s/r) M(α, q^r)`.
    pub fn count_mmin(&self, alpha: &DimVector, s: u32) -> Result<u64> {
        let mut total: i128 = 0;
        for r in divisors(s as u64) {
            let mu = mobius(s as u64 / r) as i128;
            if mu != 0 {
                total += mu * self.count_m(alpha, r as u32)? as i128;
            }
        }
        u64::try_from(total).map_err(|_| Error::NonIntegerResult(format!("{total}")))
    }

    /// Classes over `F_{q^s}` whose minimal field of definition is `F_{q^s}`,
    /// found one by one.
    pub fn count_mmin_direct(&self, alpha: &DimVector, s: u32) -> Result<u64> {
        let cat = self.category(s)?;
        let census = self.census(alpha, s)?;
        let mut n = 0;
        for class in &census.classes {
            if cat.minimal_field_of_definition(&class.representative)? == s {
                n += 1;
            }
        }
        Ok(n)
    }

    /// `Σ_{r|s} (1/r) Σ_{t|r} μ(r/t) M(α, q^t)`, required to be an integer.
    pub fn count_mf_formula(&self, alpha: &DimVector, s: u32) -> Result<u64> {
        let mut total = BigRational::zero();
        for r in divisors(s as u64) {
            let mut inner: i128 = 0;
            for t in divisors(r) {
                let mu = mobius(r / t) as i128;
                if mu != 0 {
                    inner += mu * self.count_m(alpha, t as u32)? as i128;
                }
            }
            total += BigRational::new(BigInt::from(inner), BigInt::from(r));
        }
        if !total.is_integer() || total.is_negative() {
            return Err(Error::NonIntegerResult(format!("{total}")));
        }
        u64::try_from(total.to_integer()).map_err(|_| Error::Overflow("orbit count"))
    }

    pub fn row(&self, alpha: &DimVector, s: u32) -> Result<CensusRow> {
        let (m, i, a) = self.count_mia(alpha, s)?;
        Ok(CensusRow {
            quiver: self.name.clone(),
            alpha: alpha.clone(),
            q: self.q(),
            s,
            m,
            i,
            a,
            mf_direct: self.count_mf_direct(alpha, s)?,
            mf_formula: self.count_mf_formula(alpha, s)?,
            m_min: self.count_mmin(alpha, s)?,
        })
    }
}

/// Polynomial with rational coefficients, constant term first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn has_nonnegative_integer_coeffs(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.is_integer() && !c.is_negative())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => f.write_str("q")?,
                _ => write!(f, "q^{k}")?,
            }
        }
        Ok(())
    }
}

/// Result of interpolating samples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialFit {
    pub polynomial: Polynomial,
    /// Number of samples used for interpolation.
    pub used: usize,
    /// Samples beyond those used, checked against the polynomial.
    pub held_out: usize,
    /// Every held-out sample lies exactly on the polynomial.
    pub exact: bool,
}

/// Lagrange interpolation through the first `degree_bound + 1` samples;
/// the rest are held out and checked exactly.
pub fn fit_polynomial(samples: &[(u64, u64)], degree_bound: usize) -> Result<PolynomialFit> {
    let needed = degree_bound + 1;
    // fewer samples than the bound is fine when they cannot pin a higher degree
    let used = needed.min(samples.len());
    if used == 0 {
        return Err(Error::InsufficientSamples { needed: 1, got: 0 });
    }
    let pts: Vec<(BigRational, BigRational)> = samples
        .iter()
        .map(|&(x, y)| {
            (
                BigRational::from_integer(BigInt::from(x)),
                BigRational::from_integer(BigInt::from(y)),
            )
        })
        .collect();
    for i in 0..pts.len() {
        for j in 0..i {
            if pts[i].0 == pts[j].0 {
                return Err(Error::InvalidArgument(format!("repeated sample point {}", samples[i].0)));
            }
        }
    }
    let mut coeffs = vec![BigRational::zero(); used];
    for i in 0..used {
        // basis polynomial ℓ_i(x) = Π_{j≠i} (x − x_j)/(x_i − x_j)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in 0..used {
            if i == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * &pts[j].0;
            }
            basis = next;
            denom *= &pts[i].0 - &pts[j].0;
        }
        let scale = &pts[i].1 / denom;
        for (k, b) in basis.iter().enumerate() {
            coeffs[k] += b * &scale;
        }
    }
    let polynomial = Polynomial::new(coeffs);
    let exact = pts[used..]
        .iter()
        .all(|(x, y)| polynomial.eval(x) == *y);
    Ok(PolynomialFit {
        polynomial,
        used,
        held_out: pts.len() - used,
        exact,
    })
}

/// Same as [`fit_polynomial`] but insisting on `degree_bound + 1` samples.
pub fn fit_polynomial_strict(samples: &[(u64, u64)], degree_bound: usize) -> Result<PolynomialFit> {
    if samples.len() < degree_bound + 1 {
        return Err(Error::InsufficientSamples {
            needed: degree_bound + 1,
            got: samples.len(),
        });
    }
    fit_polynomial(samples, degree_bound)
}

/// Rows grouped by `(α, s)` in canonical order.
pub fn census_rows(counter: &KacCounter, dims: &[DimVector], extensions: &[u32]) -> Result<Vec<CensusRow>> {
    let mut rows = BTreeMap::new();
    for alpha in dims {
        for &s in extensions {
            rows.insert((alpha.clone(), s), counter.row(alpha, s)?);
        }
    }
    Ok(rows.into_values().collect())
}
