//! Laurent polynomials `sum c_l x^l` (finitely many terms, `l` in `Z`) over a
//! finite field.
//!
//! Poles at the branch point are negative powers of `x`. The module also
//! provides the decomposition `r = sum_t (r_t)^(p^t)` with every exponent of
//! every `r_t` prime to `p`, and the prime-to-`p` degree read off from it.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement, Raw};

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    field: Field,
    // never stores a zero coefficient
    terms: BTreeMap<i64, Raw>,
}

impl LaurentPoly {
    pub fn zero(field: &Field) -> Self {
        LaurentPoly {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: &FieldElement) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: &FieldElement, exponent: i64) -> Self {
        let mut out = Self::zero(c.field());
        out.add_raw_term(exponent, c.raw());
        out
    }

    /// `x^exponent` with coefficient one.
    pub fn x_pow(field: &Field, exponent: i64) -> Self {
        Self::monomial(&field.one(), exponent)
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I>(field: &Field, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, FieldElement)>,
    {
        let mut out = Self::zero(field);
        for (e, c) in terms {
            if c.field() != field {
                return Err(Error::FieldMismatch {
                    left: field.order(),
                    right: c.field().order(),
                });
            }
            out.add_raw_term(e, c.raw());
        }
        Ok(out)
    }

    pub(crate) fn from_raw_terms<I>(field: &Field, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, Raw)>,
    {
        let mut out = Self::zero(field);
        for (e, c) in terms {
            out.add_raw_term(e, c);
        }
        out
    }

    pub(crate) fn add_raw_term(&mut self, exponent: i64, c: Raw) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(exponent).or_insert(0);
        *slot = self.field.add(*slot, c);
        if *slot == 0 {
            self.terms.remove(&exponent);
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exponent: i64) -> FieldElement {
        self.field
            .element(self.terms.get(&exponent).copied().unwrap_or(0))
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, FieldElement)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, self.field.element(c)))
    }

    pub(crate) fn raw_terms(&self) -> &BTreeMap<i64, Raw> {
        &self.terms
    }

    pub fn exponents(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms.keys().copied()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Order of the pole at `x = 0` (zero when there is none).
    pub fn pole_order(&self) -> i64 {
        self.min_exponent().map_or(0, |e| (-e).max(0))
    }

    /// Drops every term with exponent `>= 0`.
    pub fn polar_part(&self) -> Self {
        LaurentPoly {
            field: self.field.clone(),
            terms: self.terms.range(..0).map(|(&e, &c)| (e, c)).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        assert!(c.field() == &self.field, "field mismatch");
        Self::from_raw_terms(
            &self.field,
            self.terms.iter().map(|(&e, &v)| (e, self.field.mul(v, c.raw()))),
        )
    }

    /// `r(x)^(p^k)`: every coefficient raised to `p^k`, every exponent
    /// multiplied by `p^k`.
    pub fn frobenius_pow(&self, k: u32) -> Self {
        let factor = (self.field.characteristic() as i64).pow(k);
        Self::from_raw_terms(
            &self.field,
            self.terms
                .iter()
                .map(|(&e, &c)| (e * factor, self.field.frobenius_pow(c, k))),
        )
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(&self.field.one());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    /// Splits `r` into `(t, r_t)` with `r = sum_t (r_t)^(p^t)` and every
    /// exponent of every `r_t` prime to `p`. A monomial `c x^l` with
    /// `l = p^t l0`, `p` not dividing `l0`, lands in `r_t` as
    /// `c^(p^-t) x^l0`; constants go to `t = 0`. Output is sorted by `t`.
    pub fn p_power_decompose(&self) -> Result<Vec<(u32, LaurentPoly)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("p-power decomposition"));
        }
        let p = self.field.characteristic() as i64;
        let mut parts: BTreeMap<u32, LaurentPoly> = BTreeMap::new();
        for (&e, &c) in &self.terms {
            let (mut t, mut l0) = (0u32, e);
            while l0 != 0 && l0 % p == 0 {
                l0 /= p;
                t += 1;
            }
            let root = self.field.pth_root_pow(c, t);
            parts
                .entry(t)
                .or_insert_with(|| LaurentPoly::zero(&self.field))
                .add_raw_term(l0, root);
        }
        Ok(parts.into_iter().collect())
    }

    /// Inverse of [`p_power_decompose`](Self::p_power_decompose).
    pub fn recompose(field: &Field, parts: &[(u32, LaurentPoly)]) -> LaurentPoly {
        parts.iter().fold(LaurentPoly::zero(field), |acc, (t, r)| {
            &acc + &r.frobenius_pow(*t)
        })
    }

    /// The largest pole order among the `r_t` of the `p`-power
    /// decomposition, i.e. minus the smallest exponent occurring in any
    /// `r_t`. Positive for inputs with a pole, zero for a nonzero constant,
    /// negative when every term has positive exponent.
    pub fn prime_to_p_degree(&self) -> Result<i64> {
        let parts = self.p_power_decompose()?;
        let lowest = parts
            .iter()
            .filter_map(|(_, r)| r.min_exponent())
            .min()
            .expect("nonzero input has a nonzero part");
        Ok(-lowest)
    }

    pub fn to_json(&self) -> LaurentJson {
        LaurentJson {
            terms: self
                .terms
                .iter()
                .map(|(&e, &c)| (e, self.field.raw_coeffs(c)))
                .collect(),
        }
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(e, c)| {
                let coeff = if c.is_one() && e != 0 {
                    String::new()
                } else if self.field.degree() > 1 && e != 0 {
                    format!("({c})*")
                } else if e != 0 {
                    format!("{c}*")
                } else {
                    c.to_string()
                };
                match e {
                    0 => coeff,
                    1 => format!("{coeff}x"),
                    e => format!("{coeff}x^{e}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert!(self.field == rhs.field, "field mismatch");
        let mut out = self.clone();
        for (&e, &c) in &rhs.terms {
            out.add_raw_term(e, c);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::from_raw_terms(
            &self.field,
            self.terms.iter().map(|(&e, &c)| (e, self.field.neg(c))),
        )
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert!(self.field == rhs.field, "field mismatch");
        let mut out = LaurentPoly::zero(&self.field);
        for (&e1, &c1) in &self.terms {
            for (&e2, &c2) in &rhs.terms {
                out.add_raw_term(e1 + e2, self.field.mul(c1, c2));
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

/// Wire form `{"terms": [[exponent, coeffs], ...]}`, exponents ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentJson {
    pub terms: Vec<(i64, Vec<u32>)>,
}

impl LaurentJson {
    pub fn to_poly(&self, field: &Field) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero(field);
        for (e, coeffs) in &self.terms {
            out.add_raw_term(*e, field.raw_from_coeffs(coeffs)?);
        }
        Ok(out)
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}
