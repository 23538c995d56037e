//! Arithmetic in GF(p^k) using a polynomial basis.
//!
//! Elements are dense coefficient vectors `c_0 + c_1 x + ... + c_{k-1} x^{k-1}`
//! reduced modulo a monic irreducible polynomial of degree `k`. The modulus
//! picked by [`FieldSpec::new`] is the least monic irreducible polynomial
//! when coefficient vectors are read as base-`p` integers with `c_0` as the
//! least significant digit. The same encoding orders field elements, see
//! [`FieldElement::index`].

use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{k} does not fit below 2^63")]
    Overflow { p: u64, k: usize },
    #[error("no monic irreducible polynomial of degree {k} over GF({p}) was found")]
    NoIrreducible { p: u64, k: usize },
    #[error("modulus {0:?} is not a monic irreducible polynomial")]
    BadModulus(Vec<u64>),
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("invalid element: {0}")]
    BadElement(String),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
}

pub type Result<T> = std::result::Result<T, FieldError>;

/// Parameters of GF(p^k): characteristic, degree and reduction modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u64,
    k: usize,
    /// Coefficients low to high, length `k + 1`, leading coefficient 1.
    modulus: Vec<u64>,
    order: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut f = 3u64;
    while f.saturating_mul(f) <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

/// Splits `q` into `(p, k)` with `q = p^k`, `p` prime. `None` if `q` is not
/// a prime power.
pub fn prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|f| q.is_multiple_of(*f))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    add_mod(a, p - b, p)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime, so a^(p-2) is the inverse.
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Remainder of `a` divided by `b` over GF(p). Both low-to-high; `b` non-zero.
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let lead_inv = inv_mod(*b.last().expect("non-zero divisor"), p);
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let factor = mul_mod(*r.last().unwrap(), lead_inv, p);
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = sub_mod(r[shift + i], mul_mod(factor, bc, p), p);
        }
        r = trim(r);
    }
    r
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-`p`
/// digits of `n`.
fn monic_from_index(mut n: u64, deg: usize, p: u64) -> Vec<u64> {
    let mut v = Vec::with_capacity(deg + 1);
    for _ in 0..deg {
        v.push(n % p);
        n /= p;
    }
    v.push(1);
    v
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for n in 0..count {
            let divisor = monic_from_index(n, d, p);
            if poly_rem(poly, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// GF(p^k) with the lexicographically least monic irreducible modulus.
    pub fn new(p: u64, k: usize) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let order = checked_order(p, k)?;
        if k == 1 {
            return Ok(Arc::new(Self {
                p,
                k,
                modulus: vec![0, 1],
                order,
            }));
        }
        let modulus = (0..order)
            .map(|n| monic_from_index(n, k, p))
            .find(|m| is_irreducible(m, p))
            .ok_or(FieldError::NoIrreducible { p, k })?;
        Ok(Arc::new(Self { p, k, modulus, order }))
    }

    /// GF(p^k) with an explicit modulus (low-to-high coefficients, monic).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let k = modulus.len().saturating_sub(1);
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let order = checked_order(p, k)?;
        let well_formed = modulus.last() == Some(&1) && modulus.iter().all(|&c| c < p);
        if !well_formed || !is_irreducible(&modulus, p) {
            return Err(FieldError::BadModulus(modulus));
        }
        Ok(Arc::new(Self { p, k, modulus, order }))
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Number of elements, `p^k`.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement {
            field: Arc::clone(self),
            coeffs: vec![0; self.k],
        }
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        let mut e = self.zero();
        e.coeffs[0] = 1;
        e
    }

    /// Element with the given polynomial-basis coefficients (low to high).
    pub fn element(self: &Arc<Self>, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() != self.k {
            return Err(FieldError::BadElement(format!(
                "expected {} coefficients, got {}",
                self.k,
                coeffs.len()
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(FieldError::BadElement(format!(
                "coefficient {c} is not a residue mod {}",
                self.p
            )));
        }
        Ok(FieldElement {
            field: Arc::clone(self),
            coeffs: coeffs.to_vec(),
        })
    }

    /// Element whose coefficients are the base-`p` digits of `n`, `c_0` first.
    pub fn from_index(self: &Arc<Self>, n: u64) -> Result<FieldElement> {
        if n >= self.order {
            return Err(FieldError::BadElement(format!(
                "index {n} out of range for field of order {}",
                self.order
            )));
        }
        let mut coeffs = Vec::with_capacity(self.k);
        let mut rest = n;
        for _ in 0..self.k {
            coeffs.push(rest % self.p);
            rest /= self.p;
        }
        Ok(FieldElement {
            field: Arc::clone(self),
            coeffs,
        })
    }

    /// All elements in index order.
    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order).map(move |n| self.from_index(n).expect("index in range"))
    }

    /// Product of two coefficient vectors reduced modulo the field modulus.
    fn mul_coeffs(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        if self.k == 1 {
            return vec![mul_mod(a[0], b[0], self.p)];
        }
        poly_mul_reduce(a, b, &self.modulus, self.p)
    }
}

/// Schoolbook product of two length-`k` vectors reduced by a monic modulus
/// of degree `k`.
fn poly_mul_reduce(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let k = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * k - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = add_mod(prod[i + j], mul_mod(ai, bj, p), p);
        }
    }
    // x^k = -(m_0 + ... + m_{k-1} x^{k-1})
    for top in (k..2 * k - 1).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        for (i, &m) in modulus[..k].iter().enumerate() {
            let idx = top - k + i;
            prod[idx] = sub_mod(prod[idx], mul_mod(c, m, p), p);
        }
    }
    prod.truncate(k);
    prod
}

fn checked_order(p: u64, k: usize) -> Result<u64> {
    u32::try_from(k)
        .ok()
        .and_then(|k32| p.checked_pow(k32))
        .filter(|&q| q < 1 << 63)
        .ok_or(FieldError::Overflow { p, k })
}

/// Element of GF(p^k) in polynomial-basis representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Arc<FieldSpec>,
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Base-`p` integer encoding, inverse of [`FieldSpec::from_index`].
    pub fn index(&self) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * self.field.p + c)
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::MixedFields)
        }
    }

    fn with_coeffs(&self, coeffs: Vec<u64>) -> Self {
        Self {
            field: Arc::clone(&self.field),
            coeffs,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let p = self.field.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| add_mod(a, b, p))
            .collect();
        Ok(self.with_coeffs(coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let p = self.field.p;
        self.with_coeffs(self.coeffs.iter().map(|&c| sub_mod(0, c, p)).collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.with_coeffs(self.field.mul_coeffs(&self.coeffs, &other.coeffs)))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.coeffs.clone();
        let mut acc = self.field.one().coeffs;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.field.mul_coeffs(&acc, &base);
            }
            base = self.field.mul_coeffs(&base, &base);
            e >>= 1;
        }
        self.with_coeffs(acc)
    }

    /// Frobenius map `a -> a^p`.
    pub fn frobenius(&self) -> Self {
        self.pow(self.field.p)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.pow(self.field.order - 2))
    }

    /// Absolute trace `Σ_{i<k} a^(p^i)`, returned as a residue mod `p`.
    pub fn trace(&self) -> u64 {
        let p = self.field.p;
        let mut acc = self.field.zero();
        let mut conj = self.clone();
        for _ in 0..self.field.k {
            acc = acc.add(&conj).expect("same field");
            conj = conj.frobenius();
        }
        debug_assert!(
            acc.coeffs[1..].iter().all(|&c| c == 0),
            "trace must land in the prime field"
        );
        acc.coeffs[0] % p
    }
}
