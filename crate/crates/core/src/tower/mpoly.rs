//! Polynomials in the tower variables `x, v_1, ..., v_n`, Laurent in `x`.
//!
//! Variable 0 is `x`; variable `k` is the `k`-th Artin–Schreier variable.
//! Coefficients are raw elements of a field passed to each operation.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use crate::error::Result;
use crate::gf::{FieldDescriptor, Raw};

use super::series::TruncatedSeries;

pub type Exps = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Exps, Raw>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Raw) -> Self {
        Self::monomial(nvars, c, vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, 1, e)
    }

    pub fn monomial(nvars: usize, c: Raw, exps: Exps) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(exps, c);
        }
        MPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, Raw)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    /// Adds `c·x^e` in place.
    pub fn add_term(&mut self, f: &FieldDescriptor, exps: Exps, c: Raw) {
        if c == 0 {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                let sum = f.add(*slot.get(), c);
                if sum == 0 {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    /// Variables with a nonzero exponent somewhere.
    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.keys().any(|e| e[i] != 0))
            .collect()
    }

    /// Terms `(exponent, coeff)` if only variable `i` occurs.
    pub fn univariate(&self, i: usize) -> Option<Vec<(i64, Raw)>> {
        let only_i = self
            .terms
            .keys()
            .all(|e| e.iter().enumerate().all(|(k, &x)| k == i || x == 0));
        only_i.then(|| self.terms.iter().map(|(e, &c)| (e[i], c)).collect())
    }

    pub fn add(&self, other: &Self, f: &FieldDescriptor) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(f, e.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self, f: &FieldDescriptor) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(f, e.clone(), f.neg(c));
        }
        out
    }

    pub fn scale(&self, c: Raw, f: &FieldDescriptor) -> Self {
        if c == 0 {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, &x)| (e.clone(), f.mul(x, c))).collect(),
        }
    }

    pub fn mul(&self, other: &Self, f: &FieldDescriptor) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                let e: Exps = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(f, e, f.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, n: u32, f: &FieldDescriptor) -> Self {
        let mut acc = Self::constant(self.nvars, 1);
        for _ in 0..n {
            acc = acc.mul(self, f);
        }
        acc
    }

    /// Replaces `x` by `x_scale·x` and `v_k` by `images[k-1]`.
    pub fn substitute(&self, x_scale: Raw, images: &[MPoly], f: &FieldDescriptor) -> Self {
        let mut cache: HashMap<(usize, i64), MPoly> = HashMap::new();
        let mut out = Self::zero(self.nvars);
        for (e, c) in self.terms() {
            let scale = f.raw_powi(x_scale, e[0]).expect("x scale is nonzero");
            let mut x_part = vec![0; self.nvars];
            x_part[0] = e[0];
            let mut term = Self::monomial(self.nvars, f.mul(c, scale), x_part);
            for (k, &ek) in e.iter().enumerate().skip(1) {
                if ek == 0 {
                    continue;
                }
                let power = cache
                    .entry((k, ek))
                    .or_insert_with(|| images[k - 1].pow(ek as u32, f))
                    .clone();
                term = term.mul(&power, f);
            }
            out = out.add(&term, f);
        }
        out
    }

    /// Normal form modulo `v_k^p = v_k + rhs[k-1]`: every `v_k` degree
    /// below `p`. `rhs[k-1]` may only involve `x` and `v_j`, `j < k`, so
    /// reducing from the top variable down terminates.
    pub fn reduce(&self, rhs: &[MPoly], p: u64, f: &FieldDescriptor) -> Self {
        let p = p as i64;
        let mut cur = self.clone();
        for k in (1..self.nvars).rev() {
            loop {
                let high: Vec<(Exps, Raw)> = cur
                    .terms
                    .iter()
                    .filter(|(e, _)| e[k] >= p)
                    .map(|(e, &c)| (e.clone(), c))
                    .collect();
                if high.is_empty() {
                    break;
                }
                for (e, c) in high {
                    cur.terms.remove(&e);
                    let mut base = e.clone();
                    base[k] -= p;
                    let mut lin = base.clone();
                    lin[k] += 1;
                    cur.add_term(f, lin, c);
                    let mono = Self::monomial(self.nvars, c, base);
                    cur = cur.add(&mono.mul(&rhs[k - 1], f), f);
                }
            }
        }
        cur
    }

    /// Evaluates at series values of the variables, truncating the result
    /// at `cap`. Factors are not truncated: a pole factor multiplied in
    /// later would otherwise eat into the precision.
    pub fn eval_series(&self, vals: &[TruncatedSeries], cap: i64) -> Result<TruncatedSeries> {
        let field = vals[0].field().clone();
        let mut cache: HashMap<(usize, i64), TruncatedSeries> = HashMap::new();
        let mut total = TruncatedSeries::zero(&field, super::series::EXACT);
        for (e, c) in self.terms() {
            let mut term = TruncatedSeries::constant(&field, c, super::series::EXACT);
            for (k, &ek) in e.iter().enumerate() {
                if ek == 0 {
                    continue;
                }
                let power = match cache.get(&(k, ek)) {
                    Some(s) => s.clone(),
                    None => {
                        let s = vals[k].powi(ek)?;
                        cache.insert((k, ek), s.clone());
                        s
                    }
                };
                term = term.mul(&power);
            }
            total = total.add(&term);
        }
        Ok(total.truncate(cap))
    }
}
