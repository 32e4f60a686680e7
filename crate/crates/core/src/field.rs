//! Exact arithmetic in finite fields `F_q`, `q = p^k <= 2^16`.
//!
//! An element is stored as its integer code: the base-`p` digits of the code
//! are the coefficients of the polynomial representative, lowest degree
//! first. The defining modulus is the lexicographically smallest monic
//! irreducible polynomial of degree `k`, so codes are stable across runs.

use std::fmt;

use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

/// Fields up to this order get full multiplication tables at construction.
pub const TABLE_LIMIT: u32 = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{k} exceeds {MAX_ORDER}")]
    TooLarge { p: u32, k: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    MixedFields,
    #[error("code {code} is not an element of F_{q}")]
    OutOfRange { code: u32, q: u32 },
}

/// An element of some `F_q`, identified by its code in `[0, q)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(pub u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn code(self) -> u16 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite field `F_{p^k}` together with its canonical modulus and, for
/// small orders, precomputed arithmetic tables.
#[derive(Clone)]
pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    pow_p: Vec<u32>,
    mul: Option<Vec<u16>>,
    add: Option<Vec<u16>>,
    inv: Vec<u16>,
    /// Exponent and logarithm tables for fields too large for a full
    /// multiplication table.
    logs: Option<(Vec<u16>, Vec<u16>)>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for Field {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// Builds `F_{p^k}` with the canonical modulus.
    pub fn new(p: u32, k: u32) -> Result<Field, FieldError> {
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let q = (p as u64)
            .checked_pow(k)
            .filter(|&q| q <= MAX_ORDER as u64)
            .ok_or(FieldError::TooLarge { p, k })? as u32;
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p, k)
        };
        let mut pow_p = Vec::with_capacity(k as usize + 1);
        let mut acc = 1u32;
        for _ in 0..=k {
            pow_p.push(acc);
            acc = acc.saturating_mul(p);
        }
        let mut field = Field {
            p,
            k,
            q,
            modulus,
            pow_p,
            mul: None,
            add: None,
            inv: Vec::new(),
            logs: None,
        };
        field.build_tables();
        Ok(field)
    }

    /// Shorthand for prime fields.
    pub fn prime(p: u32) -> Result<Field, FieldError> {
        Field::new(p, 1)
    }

    /// Builds the field of order `q`, which must be a prime power.
    pub fn of_order(q: u32) -> Result<Field, FieldError> {
        if q < 2 {
            return Err(FieldError::NotPrime(q));
        }
        let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
        let mut k = 0;
        let mut rest = q;
        while rest.is_multiple_of(p) {
            rest /= p;
            k += 1;
        }
        if rest != 1 {
            return Err(FieldError::NotPrime(q));
        }
        Field::new(p, k)
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        // Discrete logarithms to a primitive element, found with the slow
        // arithmetic; the full tables are then filled from them.
        let g = self.primitive_slow();
        let mut exp = vec![0u16; q - 1];
        let mut log = vec![0u16; q];
        let mut x = 1u32;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x as u16;
            log[x as usize] = i as u16;
            x = self.mul_slow(x, g);
        }
        let n = q - 1;
        let mut inv = vec![0u16; q];
        for a in 1..q {
            inv[a] = exp[(n - log[a] as usize) % n];
        }
        self.inv = inv;
        if self.q <= TABLE_LIMIT {
            let mut mul = vec![0u16; q * q];
            for a in 1..q {
                let la = log[a] as usize;
                for b in 1..q {
                    mul[a * q + b] = exp[(la + log[b] as usize) % n];
                }
            }
            self.mul = Some(mul);
            if self.k > 1 {
                let mut add = vec![0u16; q * q];
                for a in 0..q {
                    for b in 0..q {
                        add[a * q + b] = self.add_slow(a as u32, b as u32) as u16;
                    }
                }
                self.add = Some(add);
            }
        } else {
            self.logs = Some((exp, log));
        }
    }

    fn primitive_slow(&self) -> u32 {
        let n = self.q - 1;
        let primes: Vec<u32> = (2..=n).filter(|&d| n.is_multiple_of(d) && is_prime(d)).collect();
        (1..self.q)
            .find(|&a| primes.iter().all(|&r| self.pow_slow(a, n / r) != 1))
            .expect("multiplicative group of a finite field is cyclic")
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    /// Monic modulus, low degree first. For prime fields this is `x`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The multiplication table, row-major `q x q`, when the field has one.
    pub fn mul_table(&self) -> Option<&[u16]> {
        self.mul.as_deref()
    }

    pub fn element(&self, code: u32) -> Result<FieldElement, FieldError> {
        if code < self.q {
            Ok(FieldElement(code as u16))
        } else {
            Err(FieldError::OutOfRange { code, q: self.q })
        }
    }

    /// The image of the integer `n` under `Z -> F_p -> F_q`.
    #[inline]
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u16)
    }

    /// All elements in increasing code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(|c| FieldElement(c as u16))
    }

    pub fn all_elements(&self) -> Vec<FieldElement> {
        self.elements().collect()
    }

    /// Base-p digits of a code (polynomial coefficients, low degree first).
    pub fn digits(&self, a: FieldElement) -> Vec<u32> {
        let mut v = a.0 as u32;
        (0..self.k)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> FieldElement {
        let code = digits
            .iter()
            .take(self.k as usize)
            .zip(&self.pow_p)
            .map(|(d, w)| (d % self.p) * w)
            .sum::<u32>();
        FieldElement(code as u16)
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for i in 0..self.k as usize {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * self.pow_p[i];
            a /= self.p;
            b /= self.p;
        }
        out
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        if self.k == 1 {
            return ((a as u64 * b as u64) % p) as u32;
        }
        let k = self.k as usize;
        let da = self.digits(FieldElement(a as u16));
        let db = self.digits(FieldElement(b as u16));
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // Reduce with the monic modulus from the top down.
        for deg in (k..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (i, &m) in self.modulus[..k].iter().enumerate() {
                let idx = deg - k + i;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
        }
        prod[..k]
            .iter()
            .zip(&self.pow_p)
            .map(|(&d, &w)| d as u32 * w)
            .sum()
    }

    fn pow_slow(&self, a: u32, mut e: u32) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.k == 1 {
            let s = a.0 as u32 + b.0 as u32;
            return FieldElement(if s >= self.p { s - self.p } else { s } as u16);
        }
        match &self.add {
            Some(t) => FieldElement(t[a.0 as usize * self.q as usize + b.0 as usize]),
            None => FieldElement(self.add_slow(a.0 as u32, b.0 as u32) as u16),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.k == 1 {
            return if a.0 == 0 {
                a
            } else {
                FieldElement((self.p - a.0 as u32) as u16)
            };
        }
        let mut v = a.0 as u32;
        let mut out = 0;
        for i in 0..self.k as usize {
            let d = v % self.p;
            v /= self.p;
            out += ((self.p - d) % self.p) * self.pow_p[i];
        }
        FieldElement(out as u16)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if let Some(t) = &self.mul {
            return FieldElement(t[a.0 as usize * self.q as usize + b.0 as usize]);
        }
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let (exp, log) = self.logs.as_ref().expect("log tables exist without a mul table");
        let n = exp.len();
        FieldElement(exp[(log[a.0 as usize] as usize + log[b.0 as usize] as usize) % n])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(FieldElement(self.inv[a.0 as usize]))
        }
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: FieldElement) -> Option<u32> {
        if a.is_zero() {
            return None;
        }
        let mut x = a;
        let mut n = 1;
        while x != FieldElement::ONE {
            x = self.mul(x, a);
            n += 1;
        }
        Some(n)
    }

    /// The smallest-code element of order `q - 1`.
    pub fn primitive_element(&self) -> FieldElement {
        let n = self.q - 1;
        let primes: Vec<u32> = (2..=n).filter(|&d| n.is_multiple_of(d) && is_prime(d)).collect();
        self.elements()
            .skip(1)
            .find(|&a| primes.iter().all(|&r| self.pow(a, (n / r) as u64) != FieldElement::ONE))
            .expect("multiplicative group of a finite field is cyclic")
    }

    /// Binds an element to this field for checked arithmetic.
    pub fn bind(&self, a: FieldElement) -> Result<Fq<'_>, FieldError> {
        if (a.0 as u32) < self.q {
            Ok(Fq { field: self, value: a })
        } else {
            Err(FieldError::OutOfRange { code: a.0 as u32, q: self.q })
        }
    }
}

/// An element paired with its field, for arithmetic that must reject
/// operands from different fields.
#[derive(Clone, Copy, Debug)]
pub struct Fq<'a> {
    field: &'a Field,
    value: FieldElement,
}

impl<'a> Fq<'a> {
    pub fn value(self) -> FieldElement {
        self.value
    }

    fn same(self, other: Fq<'a>) -> Result<&'a Field, FieldError> {
        if std::ptr::eq(self.field, other.field) || self.field == other.field {
            Ok(self.field)
        } else {
            Err(FieldError::MixedFields)
        }
    }

    pub fn add(self, other: Fq<'a>) -> Result<Fq<'a>, FieldError> {
        let f = self.same(other)?;
        Ok(Fq { field: f, value: f.add(self.value, other.value) })
    }

    pub fn sub(self, other: Fq<'a>) -> Result<Fq<'a>, FieldError> {
        let f = self.same(other)?;
        Ok(Fq { field: f, value: f.sub(self.value, other.value) })
    }

    pub fn mul(self, other: Fq<'a>) -> Result<Fq<'a>, FieldError> {
        let f = self.same(other)?;
        Ok(Fq { field: f, value: f.mul(self.value, other.value) })
    }

    pub fn div(self, other: Fq<'a>) -> Result<Fq<'a>, FieldError> {
        let f = self.same(other)?;
        Ok(Fq { field: f, value: f.div(self.value, other.value)? })
    }
}

/// Polynomials over F_p as coefficient vectors, low degree first, trimmed.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let top = *r.last().unwrap();
        if top != 0 {
            let c = (top as u64 * lead_inv as u64 % p as u64) as u32;
            let shift = r.len() - 1 - db;
            for (i, &bi) in b.iter().enumerate() {
                let idx = shift + i;
                r[idx] = ((r[idx] as u64 + (p - c) as u64 * bi as u64) % p as u64) as u32;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    for fd in 1..=deg / 2 {
        let count = (p as u64).pow(fd as u32);
        for idx in 0..count {
            let mut factor = Vec::with_capacity(fd + 1);
            let mut v = idx;
            for _ in 0..fd {
                factor.push((v % p as u64) as u32);
                v /= p as u64;
            }
            factor.push(1);
            if poly_rem(poly, &factor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree `k`,
/// comparing coefficient tuples from the constant term up.
fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    let total = (p as u64).pow(k);
    for idx in 0..total {
        // The constant term is the most significant digit of `idx`.
        let mut coeffs = vec![0u32; k as usize + 1];
        let mut v = idx;
        for i in (0..k as usize).rev() {
            coeffs[i] = (v % p as u64) as u32;
            v /= p as u64;
        }
        coeffs[k as usize] = 1;
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Maps each element of `small` to its image in `big` under a fixed field
/// embedding, sending the class of `x` to the smallest-code root of the
/// modulus of `small`. Returns `None` when `small` does not embed.
pub fn embedding(small: &Field, big: &Field) -> Option<Vec<FieldElement>> {
    if small.p != big.p || !big.k.is_multiple_of(small.k) {
        return None;
    }
    if small.k == 1 {
        return Some(small.elements().map(|a| FieldElement(a.0)).collect());
    }
    let m = small.modulus();
    let root = big.elements().find(|&r| {
        let mut acc = FieldElement::ZERO;
        for &c in m.iter().rev() {
            acc = big.add(big.mul(acc, r), big.from_int(c as i64));
        }
        acc.is_zero()
    })?;
    let powers: Vec<FieldElement> = (0..small.k).map(|i| big.pow(root, i as u64)).collect();
    Some(
        small
            .elements()
            .map(|a| {
                small
                    .digits(a)
                    .iter()
                    .zip(&powers)
                    .fold(FieldElement::ZERO, |acc, (&d, &r)| {
                        big.add(acc, big.mul(big.from_int(d as i64), r))
                    })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_examples() {
        assert_eq!(Field::new(2, 1).unwrap().q(), 2);
        assert_eq!(Field::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(Field::new(53, 1).unwrap().q(), 53);
        assert_eq!(Field::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(Field::new(2, 16).unwrap().q(), 65536);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Field::new(4, 1), Err(FieldError::NotPrime(4)));
        assert_eq!(Field::new(2, 0), Err(FieldError::ZeroDegree));
        assert_eq!(Field::new(2, 17), Err(FieldError::TooLarge { p: 2, k: 17 }));
        assert_eq!(Field::new(257, 2), Err(FieldError::TooLarge { p: 257, k: 2 }));
        assert!(Field::of_order(6).is_err());
        assert_eq!(Field::of_order(9).unwrap().k(), 2);
    }

    #[test]
    fn arithmetic_examples() {
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.mul(FieldElement(3), FieldElement(5)), FieldElement(1));
        let f4 = Field::new(2, 2).unwrap();
        let g = FieldElement(2);
        assert_eq!(f4.mul(g, g), FieldElement(3));
        assert_eq!(f4.inv(FieldElement::ZERO), Err(FieldError::DivisionByZero));
        assert_eq!(f7.div(FieldElement(1), FieldElement(0)), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn all_elements_ordered() {
        let codes = |q| Field::of_order(q).unwrap().all_elements();
        assert_eq!(codes(2), vec![FieldElement(0), FieldElement(1)]);
        assert_eq!(codes(3).len(), 3);
        assert_eq!(
            codes(4),
            (0..4).map(FieldElement).collect::<Vec<_>>()
        );
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = Field::prime(5).unwrap();
        let b = Field::prime(7).unwrap();
        let x = a.bind(FieldElement(2)).unwrap();
        let y = b.bind(FieldElement(2)).unwrap();
        assert_eq!(x.add(y).unwrap_err(), FieldError::MixedFields);
        assert!(a.bind(FieldElement(5)).is_err());
        let z = a.bind(FieldElement(3)).unwrap();
        assert_eq!(x.mul(z).unwrap().value(), FieldElement(1));
    }

    #[test]
    fn axioms_exhaustive_small() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = Field::of_order(q).unwrap();
            let els = f.all_elements();
            for &a in &els {
                assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn axioms_random_large() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (p, k) in [(53, 1), (2, 8), (3, 5), (5, 3), (2, 13), (251, 2), (2, 16), (65521, 1)] {
            let f = Field::new(p, k).unwrap();
            for _ in 0..10_000 {
                let mut r = || FieldElement(rng.random_range(0..f.q()) as u16);
                let (a, b, c) = (r(), r(), r());
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                assert_eq!(f.sub(f.add(a, b), b), a);
                if !b.is_zero() {
                    assert_eq!(f.mul(f.div(a, b).unwrap(), b), a);
                }
            }
        }
    }

    #[test]
    fn frobenius_fixes_everything() {
        for q in [2, 3, 4, 5, 8, 9, 16, 25, 27, 32, 49, 53, 64, 81, 121, 125, 128, 243, 256] {
            let f = Field::of_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.pow(a, q as u64), a, "q={q} a={a}");
            }
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16, 27, 32, 53, 64, 81, 128, 243, 256] {
            let f = Field::of_order(q).unwrap();
            let g = f.primitive_element();
            assert_eq!(f.order(g), Some(q - 1));
            assert!(f.elements().any(|a| f.order(a) == Some(q - 1)));
        }
    }

    #[test]
    fn canonical_modulus_is_smallest() {
        // Tuples compare from the constant term, so x^3 + x^2 + 1 = (1,0,1,1)
        // precedes x^3 + x + 1 = (1,1,0,1).
        assert_eq!(Field::new(2, 3).unwrap().modulus(), &[1, 0, 1, 1]);
        assert_eq!(Field::new(2, 4).unwrap().modulus(), &[1, 0, 0, 1, 1]);
        assert_eq!(Field::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        for (p, k) in [(2, 5), (3, 3), (5, 2), (7, 2)] {
            let m = Field::new(p, k).unwrap().modulus().to_vec();
            assert!(is_irreducible(&m, p));
        }
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let small = Field::new(2, 2).unwrap();
        let big = Field::new(2, 4).unwrap();
        let e = embedding(&small, &big).unwrap();
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(e[small.mul(a, b).0 as usize], big.mul(e[a.0 as usize], e[b.0 as usize]));
                assert_eq!(e[small.add(a, b).0 as usize], big.add(e[a.0 as usize], e[b.0 as usize]));
            }
        }
        assert!(embedding(&small, &Field::new(2, 3).unwrap()).is_none());
    }
}
