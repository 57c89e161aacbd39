//! Truncated Laurent series `Σ c_e s^e + O(s^prec)` over a finite field.
//!
//! Every series carries its absolute precision `prec`: coefficients of
//! `s^e` with `e < prec` are exact and nothing is known beyond. Operations
//! compute the precision of their result from the inputs, so a value that
//! looks zero below its precision is reported as undetermined rather than
//! zero.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{Field, Raw};

/// Precision used for exactly known series such as `1` or `s`.
pub const EXACT: i64 = i64::MAX / 8;

#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    field: Field,
    /// Exponent of `coeffs[0]`. Normalized so that `coeffs[0] != 0`.
    offset: i64,
    coeffs: Vec<Raw>,
    prec: i64,
}

impl TruncatedSeries {
    pub fn zero(field: &Field, prec: i64) -> Self {
        TruncatedSeries {
            field: field.clone(),
            offset: 0,
            coeffs: Vec::new(),
            prec,
        }
    }

    pub fn monomial(field: &Field, c: Raw, exponent: i64, prec: i64) -> Self {
        Self::from_coeffs(field, exponent, vec![c], prec)
    }

    pub fn constant(field: &Field, c: Raw, prec: i64) -> Self {
        Self::monomial(field, c, 0, prec)
    }

    /// The series `s` itself, known exactly.
    pub fn variable(field: &Field) -> Self {
        Self::monomial(field, 1, 1, EXACT)
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field, 1, EXACT)
    }

    pub fn from_coeffs(field: &Field, offset: i64, coeffs: Vec<Raw>, prec: i64) -> Self {
        let mut s = TruncatedSeries {
            field: field.clone(),
            offset,
            coeffs,
            prec,
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if self.prec >= EXACT / 2 {
            self.prec = EXACT;
        }
        let keep = (self.prec - self.offset).clamp(0, self.coeffs.len() as i64) as usize;
        self.coeffs.truncate(keep);
        let lead = self.coeffs.iter().position(|&c| c != 0);
        match lead {
            None => {
                self.coeffs.clear();
                self.offset = 0;
            }
            Some(k) => {
                self.coeffs.drain(..k);
                self.offset += k as i64;
                while self.coeffs.last() == Some(&0) {
                    self.coeffs.pop();
                }
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Valuation, if some coefficient below the precision is nonzero.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.offset)
        }
    }

    /// Lower bound for the valuation: the valuation, or the precision when
    /// nothing nonzero is known.
    fn valuation_bound(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }

    pub fn leading_coeff(&self) -> Option<Raw> {
        self.coeffs.first().copied()
    }

    /// Coefficient of `s^e`; `None` beyond the precision.
    pub fn coeff(&self, e: i64) -> Option<Raw> {
        if e >= self.prec {
            return None;
        }
        let k = e - self.offset;
        if self.coeffs.is_empty() || k < 0 || k >= self.coeffs.len() as i64 {
            Some(0)
        } else {
            Some(self.coeffs[k as usize])
        }
    }

    /// Nonzero terms below the precision, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Raw)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(k, &c)| (self.offset + k as i64, c))
    }

    /// Forgets everything at and beyond `s^cap`.
    pub fn truncate(mut self, cap: i64) -> Self {
        if cap < self.prec {
            self.prec = cap;
            self.normalize();
        }
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let f = &self.field;
        let prec = self.prec.min(other.prec);
        let lo = match (self.valuation(), other.valuation()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => return Self::zero(f, prec),
        };
        let hi = (self.offset + self.coeffs.len() as i64)
            .max(other.offset + other.coeffs.len() as i64)
            .min(prec);
        if hi <= lo {
            return Self::zero(f, prec);
        }
        let mut out = vec![0; (hi - lo) as usize];
        for (e, c) in self.terms() {
            if e < hi {
                out[(e - lo) as usize] = c;
            }
        }
        for (e, c) in other.terms() {
            if e < hi {
                let slot = &mut out[(e - lo) as usize];
                let c = if negate { f.neg(c) } else { c };
                *slot = f.add(*slot, c);
            }
        }
        Self::from_coeffs(f, lo, out, prec)
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        let coeffs = self.coeffs.iter().map(|&c| f.neg(c)).collect();
        Self::from_coeffs(f, self.offset, coeffs, self.prec)
    }

    pub fn scale(&self, c: Raw) -> Self {
        let f = &self.field;
        if c == 0 {
            return Self::zero(f, EXACT);
        }
        let coeffs = self.coeffs.iter().map(|&x| f.mul(x, c)).collect();
        Self::from_coeffs(f, self.offset, coeffs, self.prec)
    }

    /// Multiplication by `s^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self::from_coeffs(
            &self.field,
            self.offset + k,
            self.coeffs.clone(),
            self.prec.saturating_add(k).min(EXACT),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        let prec = self
            .valuation_bound()
            .saturating_add(other.prec)
            .min(other.valuation_bound().saturating_add(self.prec))
            .min(EXACT);
        let (Some(va), Some(vb)) = (self.valuation(), other.valuation()) else {
            return Self::zero(f, prec);
        };
        let lo = va + vb;
        let room = (prec - lo).max(0) as usize;
        let len = room.min(self.coeffs.len() + other.coeffs.len() - 1);
        let mut out = vec![0 as Raw; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 || i >= len {
                continue;
            }
            let upto = other.coeffs.len().min(len - i);
            for (j, &b) in other.coeffs[..upto].iter().enumerate() {
                if b != 0 {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        Self::from_coeffs(f, lo, out, prec)
    }

    /// Multiplicative inverse. A single-term series inverts exactly; any
    /// other series needs a finite precision.
    pub fn inverse(&self) -> Result<Self> {
        let f = &self.field;
        let Some(v) = self.valuation() else {
            return Err(Error::PrecisionExhausted {
                precision: self.prec.max(0) as usize,
                what: "inverting a series with undetermined leading term".into(),
            });
        };
        let inv0 = f.inv(self.coeffs[0])?;
        if self.coeffs.len() == 1 {
            let prec = if self.prec >= EXACT {
                EXACT
            } else {
                self.prec - 2 * v
            };
            return Ok(Self::monomial(f, inv0, -v, prec));
        }
        if self.prec >= EXACT {
            return Err(Error::Unsupported(
                "inverse of an exact multi-term series needs a precision".into(),
            ));
        }
        let n = (self.prec - v) as usize;
        let a = &self.coeffs;
        let mut b = vec![0 as Raw; n];
        b[0] = inv0;
        let neg_inv0 = f.neg(inv0);
        for k in 1..n {
            let mut acc = 0;
            for i in 1..=k.min(a.len() - 1) {
                if a[i] != 0 && b[k - i] != 0 {
                    acc = f.add(acc, f.mul(a[i], b[k - i]));
                }
            }
            b[k] = f.mul(acc, neg_inv0);
        }
        Ok(Self::from_coeffs(f, -v, b, self.prec - 2 * v))
    }

    /// Integer power; negative exponents go through [`Self::inverse`].
    pub fn powi(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one(&self.field);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }

    /// Substitutes `y` (of positive valuation) for the variable: returns
    /// `self(y)`, truncated at `cap`.
    pub fn compose(&self, y: &Self, cap: i64) -> Result<Self> {
        let f = &self.field;
        let vy = match y.valuation() {
            Some(v) if v >= 1 => v,
            _ => {
                return Err(Error::Unsupported(
                    "composition needs a series of positive valuation".into(),
                ))
            }
        };
        // O(s^prec) in self becomes O(y^prec) = O(s^(vy·prec))
        let target = if self.prec >= EXACT {
            cap
        } else {
            self.prec.saturating_mul(vy).min(cap)
        };
        let mut total = Self::zero(f, EXACT);
        let mut polar_terms = self.terms().filter(|&(e, _)| e < 0).peekable();
        if polar_terms.peek().is_some() {
            let mut polar: Vec<(i64, Raw)> = polar_terms.collect();
            polar.sort_by_key(|&(e, _)| -e);
            let depth = -polar.last().map_or(0, |&(e, _)| e);
            // y^-k needs y to absolute precision cap + (k + 1)·vy
            let needed = cap.saturating_add(depth.saturating_add(1).saturating_mul(vy));
            let yinv = y.clone().truncate(needed).inverse()?;
            let mut power = Self::one(f);
            let mut k = 0i64;
            for (e, c) in polar {
                while k < -e {
                    power = power.mul(&yinv).truncate(cap);
                    k += 1;
                }
                total = total.add(&power.scale(c));
            }
        }
        let top = self
            .terms()
            .filter(|&(e, _)| e >= 0 && e.saturating_mul(vy) < target)
            .map(|(e, _)| e)
            .max();
        if let Some(top) = top {
            let mut acc = Self::zero(f, EXACT);
            for e in (0..=top).rev() {
                acc = acc.mul(y).truncate(cap);
                let c = self.coeff(e).unwrap_or(0);
                if c != 0 {
                    acc = acc.add(&Self::constant(f, c, EXACT));
                }
            }
            total = total.add(&acc);
        }
        Ok(total.truncate(target))
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*s^{e}", self.field.element(c))?;
        }
        if first {
            write!(f, "0")?;
        }
        if self.prec < EXACT {
            write!(f, " + O(s^{})", self.prec)?;
        }
        Ok(())
    }
}
