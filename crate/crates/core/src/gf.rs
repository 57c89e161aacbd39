//! Small finite fields `F_q`, `q = p^a`.
//!
//! A field is described by its characteristic, degree and a monic
//! irreducible modulus `f` over `F_p`; elements are residues modulo `f`
//! written in the power basis `1, z, ..., z^(a-1)`. Internally an element is
//! the integer `c_0 + c_1 p + ... + c_(a-1) p^(a-1)`, which keeps hot loops
//! (series multiplication in the tower oracle) free of allocation.
//! Multiplication goes through discrete log / antilog tables built once per
//! field.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order. Every table is `O(q)`.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

/// Raw element encoding; only meaningful together with its [`Field`].
pub type Raw = u32;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factors of `n`, ascending, without multiplicity.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
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

/// Returns `(p, a)` when `q = p^a` with `p` prime and `a >= 1`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0];
    let mut a = 0;
    let mut n = q;
    while n > 1 {
        n /= p;
        a += 1;
    }
    Some((p, a))
}

/// Multiplicative order of `p` modulo `m` (`gcd(p, m) = 1`, `m >= 1`).
pub fn multiplicative_order_mod(p: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let base = p % m;
    let mut acc = base;
    let mut k = 1;
    while acc != 1 {
        acc = acc * base % m;
        k += 1;
        assert!(k <= m, "{p} is not a unit modulo {m}");
    }
    k
}

// Polynomials over F_p as coefficient vectors, low degree first. Used only
// while constructing a field.

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    // b monic of degree >= 1
    let db = b.len() - 1;
    let mut r = a.to_vec();
    for i in (db..r.len()).rev() {
        let lead = r[i] % p;
        if lead == 0 {
            continue;
        }
        let shift = i - db;
        for (k, &bc) in b.iter().enumerate() {
            r[shift + k] = (r[shift + k] + p - lead * bc % p) % p;
        }
    }
    r.truncate(db);
    r
}

fn digits(mut n: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = n % p;
        n /= p;
    }
    out
}

/// Irreducibility by exhaustive search for monic factors of degree `<= deg/2`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut g = digits(low, p, d);
            g.push(1);
            let r = poly_rem(f, &g, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible polynomial of degree `a` over `F_p`, ordering
/// candidates by the integer `f(p)` (equivalently, lexicographically on the
/// coefficient sequence read from the top degree down).
fn smallest_irreducible(p: u64, a: u32) -> Vec<u64> {
    let count = p.pow(a);
    for low in 0..count {
        let mut f = digits(low, p, a as usize);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

/// Description of `F_q`; shared behind an [`Arc`] by every element.
pub struct FieldDescriptor {
    p: u32,
    a: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: Raw,
    // exp has length 2(q-1) so that exp[log x + log y] needs no reduction
    exp: Vec<Raw>,
    log: Vec<u32>,
}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldDescriptor")
            .field("p", &self.p)
            .field("a", &self.a)
            .field("modulus", &self.modulus)
            .finish()
    }
}

/// Cheaply clonable handle to a [`FieldDescriptor`].
#[derive(Clone)]
pub struct Field(Arc<FieldDescriptor>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.0.p, self.0.a)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        // the modulus is a deterministic function of (p, a)
        self.0.p == other.0.p && self.0.a == other.0.a
    }
}
impl Eq for Field {}

impl std::ops::Deref for Field {
    type Target = FieldDescriptor;
    fn deref(&self) -> &FieldDescriptor {
        &self.0
    }
}

impl Field {
    /// Builds `F_(p^a)` with the smallest monic irreducible modulus.
    pub fn new(p: u64, a: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if a < 1 {
            return Err(Error::ZeroDegree);
        }
        let too_large = Error::FieldTooLarge {
            p,
            a,
            max: MAX_FIELD_ORDER,
        };
        let q = p.checked_pow(a).ok_or(too_large.clone())?;
        if q > MAX_FIELD_ORDER {
            return Err(too_large);
        }
        let modulus = smallest_irreducible(p, a);
        let slow = SlowArith {
            p,
            a: a as usize,
            modulus: &modulus,
        };

        let group = q - 1;
        let factors = prime_factors(group);
        let generator = (1..q)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| slow.pow(g, group / r) != 1 || group == 1)
            })
            .expect("F_q^* is cyclic");

        let n = group as usize;
        let mut exp = vec![0 as Raw; 2 * n];
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u64;
        for k in 0..n {
            exp[k] = cur as Raw;
            exp[k + n] = cur as Raw;
            log[cur as usize] = k as u32;
            cur = slow.mul(cur, generator);
        }
        debug_assert_eq!(cur, 1);

        Ok(Field(Arc::new(FieldDescriptor {
            p: p as u32,
            a,
            q: q as u32,
            modulus: modulus.iter().map(|&c| c as u32).collect(),
            generator: generator as Raw,
            exp,
            log,
        })))
    }

    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Field> {
        Field::new(p, 1)
    }

    pub fn element(&self, raw: Raw) -> FieldElement {
        assert!(raw < self.q, "raw value {raw} out of range for F_{}", self.q);
        FieldElement {
            field: self.clone(),
            raw,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        self.element(self.raw_from_int(n))
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        Ok(self.element(self.raw_from_coeffs(coeffs)?))
    }

    /// All elements in increasing raw order (zero first).
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |r| self.element(r))
    }

    /// The subfield `F_(p^d)` as the set of `x` with `x^(p^d) = x`.
    pub fn subfield_elements(&self, d: u32) -> Vec<FieldElement> {
        (0..self.q)
            .filter(|&r| self.frobenius_pow(r, d) == r)
            .map(|r| self.element(r))
            .collect()
    }

    /// A deterministic element of multiplicative order exactly `m`: the
    /// `(q-1)/m`-th power of the smallest generator.
    pub fn root_of_unity(&self, m: u64) -> Result<FieldElement> {
        let group = (self.q - 1) as u64;
        if m == 0 || !group.is_multiple_of(m) {
            return Err(Error::NoRootOfUnity {
                m,
                group_order: group,
            });
        }
        Ok(self.element(self.raw_pow(self.generator, group / m)))
    }

    pub fn generator(&self) -> FieldElement {
        self.element(self.generator)
    }
}

impl FieldDescriptor {
    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.a
    }

    pub fn order(&self) -> u64 {
        self.q as u64
    }

    /// Monic modulus coefficients, low degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn raw_from_int(&self, n: i64) -> Raw {
        n.rem_euclid(self.p as i64) as Raw
    }

    pub fn raw_from_coeffs(&self, coeffs: &[u32]) -> Result<Raw> {
        if coeffs.len() > self.a as usize {
            return Err(Error::InvalidElement(format!(
                "{} coordinates given for a degree-{} field",
                coeffs.len(),
                self.a
            )));
        }
        let mut raw = 0u64;
        for &c in coeffs.iter().rev() {
            if c >= self.p {
                return Err(Error::InvalidElement(format!(
                    "coordinate {c} is not reduced modulo {}",
                    self.p
                )));
            }
            raw = raw * self.p as u64 + c as u64;
        }
        Ok(raw as Raw)
    }

    /// Power-basis coordinates of a raw element (length `a`).
    pub fn raw_coeffs(&self, mut raw: Raw) -> Vec<u32> {
        let mut out = vec![0; self.a as usize];
        for c in out.iter_mut() {
            *c = raw % self.p;
            raw /= self.p;
        }
        out
    }

    #[inline]
    pub fn add(&self, x: Raw, y: Raw) -> Raw {
        if self.p == 2 {
            return x ^ y;
        }
        if self.a == 1 {
            let s = x + y;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut x, mut y) = (x, y);
        let mut out = 0;
        let mut place = 1;
        while x > 0 || y > 0 {
            let d = (x % self.p + y % self.p) % self.p;
            out += d * place;
            place *= self.p;
            x /= self.p;
            y /= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, x: Raw) -> Raw {
        if self.p == 2 || x == 0 {
            return x;
        }
        if self.a == 1 {
            return self.p - x;
        }
        let mut x = x;
        let mut out = 0;
        let mut place = 1;
        while x > 0 {
            let d = x % self.p;
            out += ((self.p - d) % self.p) * place;
            place *= self.p;
            x /= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, x: Raw, y: Raw) -> Raw {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Raw, y: Raw) -> Raw {
        if x == 0 || y == 0 {
            return 0;
        }
        self.exp[(self.log[x as usize] + self.log[y as usize]) as usize]
    }

    pub fn inv(&self, x: Raw) -> Result<Raw> {
        if x == 0 {
            return Err(Error::DivisionByZero { q: self.q as u64 });
        }
        let n = self.q - 1;
        Ok(self.exp[((n - self.log[x as usize]) % n) as usize])
    }

    pub fn div(&self, x: Raw, y: Raw) -> Result<Raw> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn raw_pow(&self, x: Raw, e: u64) -> Raw {
        if e == 0 {
            return 1;
        }
        if x == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        self.exp[((self.log[x as usize] as u64 * (e % n)) % n) as usize]
    }

    /// `x^n` for a signed exponent; `x` must be nonzero when `n < 0`.
    pub fn raw_powi(&self, x: Raw, n: i64) -> Result<Raw> {
        if n >= 0 {
            Ok(self.raw_pow(x, n as u64))
        } else {
            Ok(self.raw_pow(self.inv(x)?, n.unsigned_abs()))
        }
    }

    /// `x -> x^(p^k)`.
    pub fn frobenius_pow(&self, x: Raw, k: u32) -> Raw {
        let mut e = 1u64;
        for _ in 0..(k % self.a) {
            e *= self.p as u64;
        }
        self.raw_pow(x, e)
    }

    /// The unique `y` with `y^(p^k) = x`, computed as `x^(p^(a - k mod a))`.
    pub fn pth_root_pow(&self, x: Raw, k: u32) -> Raw {
        let k = k % self.a;
        self.frobenius_pow(x, (self.a - k) % self.a)
    }

    /// Smallest `d >= 1` with `x^(p^d) = x`.
    pub fn raw_degree_over_prime(&self, x: Raw) -> u32 {
        let mut y = x;
        for d in 1..=self.a {
            y = self.raw_pow(y, self.p as u64);
            if y == x {
                return d;
            }
        }
        unreachable!("x^q = x in F_q")
    }

    /// Multiplicative order of a nonzero element.
    pub fn raw_order(&self, x: Raw) -> Result<u64> {
        if x == 0 {
            return Err(Error::DivisionByZero { q: self.q as u64 });
        }
        let n = (self.q - 1) as u64;
        Ok(n / num_integer::gcd(self.log[x as usize] as u64, n))
    }
}

/// Polynomial arithmetic modulo the field modulus, used only to build the
/// log tables.
struct SlowArith<'a> {
    p: u64,
    a: usize,
    modulus: &'a [u64],
}

impl SlowArith<'_> {
    fn mul(&self, x: u64, y: u64) -> u64 {
        let xd = digits(x, self.p, self.a);
        let yd = digits(y, self.p, self.a);
        let mut prod = vec![0u64; 2 * self.a];
        for (i, &xi) in xd.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in yd.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi * yj) % self.p;
            }
        }
        let r = poly_rem(&prod, self.modulus, self.p);
        r.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn pow(&self, x: u64, mut e: u64) -> u64 {
        let mut base = x;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

/// An element of a finite field together with its field.
///
/// Arithmetic operators panic when the operands belong to different fields;
/// inputs crossing an API boundary are checked with [`FieldElement::same_field`].
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    raw: Raw,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.a == 1 {
            return write!(f, "{}", self.raw);
        }
        let coeffs = self.coeffs();
        let terms: Vec<String> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "z".to_string(),
                (1, c) => format!("{c}z"),
                (i, 1) => format!("z^{i}"),
                (i, c) => format!("{c}z^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn raw(&self) -> Raw {
        self.raw
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.raw_coeffs(self.raw)
    }

    pub fn is_zero(&self) -> bool {
        self.raw == 0
    }

    pub fn is_one(&self) -> bool {
        self.raw == 1
    }

    pub fn same_field(&self, other: &FieldElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field.order(),
                right: other.field.order(),
            })
        }
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.field.element(self.field.inv(self.raw)?))
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.field.element(self.field.raw_pow(self.raw, e))
    }

    pub fn powi(&self, e: i64) -> Result<FieldElement> {
        Ok(self.field.element(self.field.raw_powi(self.raw, e)?))
    }

    /// `x -> x^p`.
    pub fn frobenius(&self) -> FieldElement {
        self.field.element(self.field.frobenius_pow(self.raw, 1))
    }

    /// The unique `p`-th root.
    pub fn frobenius_inverse(&self) -> FieldElement {
        self.field.element(self.field.pth_root_pow(self.raw, 1))
    }

    /// The unique `p^k`-th root.
    pub fn pth_root_pow(&self, k: u32) -> FieldElement {
        self.field.element(self.field.pth_root_pow(self.raw, k))
    }

    /// `[F_p(x) : F_p]`.
    pub fn degree_over_prime(&self) -> u32 {
        self.field.raw_degree_over_prime(self.raw)
    }

    pub fn multiplicative_order(&self) -> Result<u64> {
        self.field.raw_order(self.raw)
    }

    pub fn to_json(&self) -> ElementJson {
        ElementJson {
            p: self.field.characteristic(),
            a: self.field.degree(),
            coeffs: self.coeffs(),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                assert!(self.field == rhs.field, "field mismatch");
                let f: fn(&FieldDescriptor, Raw, Raw) -> Raw = $body;
                self.field.element(f(&self.field, self.raw, rhs.raw))
            }
        }
        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, |f, x, y| f.add(x, y));
binop!(Sub, sub, |f, x, y| f.sub(x, y));
binop!(Mul, mul, |f, x, y| f.mul(x, y));
binop!(Div, div, |f, x, y| f.div(x, y).expect("division by zero"));

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.field.element(self.field.neg(self.raw))
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// Wire form `{"p": int, "a": int, "coeffs": [int]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub p: u64,
    pub a: u32,
    pub coeffs: Vec<u32>,
}

impl ElementJson {
    /// Interprets the element inside `field`, which must be exactly `F_(p^a)`.
    pub fn to_element(&self, field: &Field) -> Result<FieldElement> {
        if self.p != field.characteristic() || self.a != field.degree() {
            return Err(Error::InvalidElement(format!(
                "element of F_{}^{} used in F_{}^{}",
                self.p,
                self.a,
                field.characteristic(),
                field.degree()
            )));
        }
        field.from_coeffs(&self.coeffs)
    }
}

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}
