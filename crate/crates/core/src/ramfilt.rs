//! Ramification filtrations given by break data.
//!
//! A filtration of an inertia group `I = P ⋊ Z/m` is stored as a list of
//! breaks `(jump, order)`: the subgroup at the jump has `order` elements, and
//! that order holds on the half-open interval ending at the jump. Between
//! 0 and the first jump the group is `P`, after the last jump it is trivial.
//! So the lower filtration of the quaternion germ, with
//! `|I_0| = |I_1| = 8`, `|I_2| = |I_3| = 2`, `|I_4| = 1`, is
//! `[(1, 8), (3, 2)]`.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::prime_power;
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Numbering {
    Lower,
    Upper,
}

/// Group-theoretic promise attached to a filtration for validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Structure {
    General,
    Abelian,
    Cyclic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Break {
    pub jump: Rational,
    pub order: u64,
}

impl Break {
    pub fn new(jump: Rational, order: u64) -> Self {
        Break { jump, order }
    }
}

/// One failed constraint. `code` is stable and machine readable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub code: &'static str,
    pub message: String,
}

fn violation(code: &'static str, message: impl Into<String>) -> Violation {
    Violation {
        code,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamFiltration {
    total_order: u64,
    tame: u64,
    numbering: Numbering,
    breaks: Vec<Break>,
}

impl RamFiltration {
    /// Stores the data as given. Structural checks happen in
    /// [`RamFiltration::validate`]; every computation validates first.
    pub fn new(total_order: u64, tame: u64, numbering: Numbering, breaks: Vec<Break>) -> Self {
        RamFiltration {
            total_order,
            tame,
            numbering,
            breaks,
        }
    }

    /// Lower filtration from integer jumps with orders.
    pub fn lower(total_order: u64, tame: u64, breaks: &[(i64, u64)]) -> Self {
        Self::new(
            total_order,
            tame,
            Numbering::Lower,
            breaks.iter().map(|&(j, o)| Break::new(int(j), o)).collect(),
        )
    }

    pub fn upper(total_order: u64, tame: u64, breaks: &[(Rational, u64)]) -> Self {
        Self::new(
            total_order,
            tame,
            Numbering::Upper,
            breaks.iter().map(|&(j, o)| Break::new(j, o)).collect(),
        )
    }

    /// Filtration of a cyclic `Z/p^n` (times `Z/m`) from its jumps, one
    /// per step, ascending.
    pub fn cyclic(p: u64, tame: u64, numbering: Numbering, jumps: &[Rational]) -> Self {
        let n = jumps.len() as u32;
        let breaks = jumps
            .iter()
            .enumerate()
            .map(|(i, &j)| Break::new(j, p.pow(n - i as u32)))
            .collect();
        Self::new(p.pow(n) * tame, tame, numbering, breaks)
    }

    pub fn total_order(&self) -> u64 {
        self.total_order
    }

    pub fn tame(&self) -> u64 {
        self.tame
    }

    pub fn numbering(&self) -> Numbering {
        self.numbering
    }

    pub fn breaks(&self) -> &[Break] {
        &self.breaks
    }

    /// Order of the wild part `P`.
    pub fn wild_order(&self) -> u64 {
        self.total_order.checked_div(self.tame).unwrap_or(0)
    }

    /// The characteristic, read off from `|P|`. `None` for tame groups.
    pub fn characteristic(&self) -> Option<u64> {
        prime_power(self.wild_order()).map(|(p, _)| p)
    }

    /// Order of the group just above break `k`.
    fn order_after(&self, k: usize) -> u64 {
        self.breaks.get(k + 1).map_or(1, |b| b.order)
    }

    /// Jumps repeated by multiplicity: a break whose quotient has order
    /// `p^l` contributes `l` copies.
    pub fn jumps_with_multiplicity(&self) -> Result<Vec<Rational>> {
        self.ensure_valid()?;
        let mut out = Vec::new();
        for (k, b) in self.breaks.iter().enumerate() {
            let l = prime_power(b.order / self.order_after(k)).map_or(0, |(_, l)| l);
            out.extend(std::iter::repeat_n(b.jump, l as usize));
        }
        Ok(out)
    }

    /// Distinct jumps.
    pub fn jumps(&self) -> Vec<Rational> {
        self.breaks.iter().map(|b| b.jump).collect()
    }

    /// Order of the group at parameter `t` in this filtration's numbering.
    pub fn order_at(&self, t: Rational) -> u64 {
        if t <= Rational::zero() {
            return self.total_order;
        }
        self.breaks
            .iter()
            .find(|b| t <= b.jump)
            .map_or(1, |b| b.order)
    }

    /// Reports every violated constraint. General structure checks:
    /// positive orders, `m | |I|`, `|P|` a prime power prime to `m`,
    /// ascending positive jumps, first order `|P|`, strictly decreasing
    /// orders with `p`-power quotients, lower jumps integral and prime to
    /// `p`. Abelian adds integral upper jumps. Cyclic adds quotients of
    /// order `p` and the jump rule for cyclic groups.
    pub fn validate(&self, structure: Structure) -> Vec<Violation> {
        let mut out = self.structural_violations();
        if !out.is_empty() {
            return out;
        }
        let Some(p) = self.characteristic() else {
            return out;
        };
        let (lower, upper) = match self.numbering {
            Numbering::Lower => (self.clone(), self.convert(Numbering::Upper)),
            Numbering::Upper => (self.convert(Numbering::Lower), self.clone()),
        };
        for b in &lower.breaks {
            if !b.jump.is_integer() {
                out.push(violation(
                    "lower-jump-not-integer",
                    format!("lower jump {} is not an integer", b.jump),
                ));
            } else if b.jump.to_integer() % p as i64 == 0 {
                out.push(violation(
                    "p-divides-lower-jump",
                    format!("p = {p} divides lower jump {}", b.jump),
                ));
            }
        }
        if structure != Structure::General {
            for b in &upper.breaks {
                if !b.jump.is_integer() {
                    out.push(violation(
                        "upper-jump-not-integer",
                        format!("upper jump {} of an abelian group is not an integer", b.jump),
                    ));
                }
            }
        }
        if structure == Structure::Cyclic {
            for (k, b) in self.breaks.iter().enumerate() {
                if b.order / self.order_after(k) != p {
                    out.push(violation(
                        "cyclic-quotient",
                        format!("quotient at jump {} has order {} != p", b.jump, b.order / self.order_after(k)),
                    ));
                }
            }
            out.extend(schmid_violations(p, &upper.jumps()));
        }
        out
    }

    fn structural_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.total_order == 0 || self.tame == 0 || !self.total_order.is_multiple_of(self.tame) {
            out.push(violation(
                "tame-divides-total",
                format!("tame part {} must divide total order {}", self.tame, self.total_order),
            ));
            return out;
        }
        let wild = self.wild_order();
        if wild == 1 {
            if !self.breaks.is_empty() {
                out.push(violation("tame-with-breaks", "a tame group has no wild breaks"));
            }
            return out;
        }
        let Some((p, _)) = prime_power(wild) else {
            out.push(violation(
                "wild-not-prime-power",
                format!("|P| = {wild} is not a prime power"),
            ));
            return out;
        };
        if self.tame.is_multiple_of(p) {
            out.push(violation(
                "p-divides-tame",
                format!("p = {p} divides the tame part {}", self.tame),
            ));
        }
        if self.breaks.is_empty() {
            out.push(violation("missing-breaks", "a wild group needs at least one break"));
            return out;
        }
        if self.breaks[0].order != wild {
            out.push(violation(
                "first-order",
                format!("first break has order {}, expected |P| = {wild}", self.breaks[0].order),
            ));
        }
        let mut prev: Option<Rational> = None;
        for (k, b) in self.breaks.iter().enumerate() {
            if !b.jump.is_positive() {
                out.push(violation("nonpositive-jump", format!("jump {} is not positive", b.jump)));
            }
            if let Some(pj) = prev {
                if b.jump <= pj {
                    out.push(violation(
                        "jumps-not-ascending",
                        format!("jump {} does not exceed {pj}", b.jump),
                    ));
                }
            }
            prev = Some(b.jump);
            let next = self.order_after(k);
            if b.order <= next || b.order % next != 0 {
                out.push(violation(
                    "orders-not-decreasing",
                    format!("order {} at jump {} does not strictly contain {next}", b.order, b.jump),
                ));
            } else if !matches!(prime_power(b.order / next), Some((q, _)) if q == p) {
                out.push(violation(
                    "quotient-not-p-power",
                    format!("quotient of order {} at jump {} is not a power of {p}", b.order / next, b.jump),
                ));
            }
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.structural_violations();
        if let Some(first) = v.first() {
            return Err(Error::InvalidFiltration(first.message.clone()));
        }
        Ok(())
    }

    fn ensure_numbering(&self, n: Numbering) -> Result<()> {
        if self.numbering != n {
            return Err(Error::InvalidFiltration(format!(
                "expected {n:?} numbering, got {:?}",
                self.numbering
            )));
        }
        Ok(())
    }

    /// Integrates the step function `weight(order at t)` from 0 to `x`.
    fn integrate(&self, x: Rational, weight: impl Fn(u64) -> Rational) -> Rational {
        let mut acc = Rational::zero();
        let mut left = Rational::zero();
        for b in &self.breaks {
            if x <= b.jump {
                return acc + (x - left) * weight(b.order);
            }
            acc += (b.jump - left) * weight(b.order);
            left = b.jump;
        }
        acc + (x - left) * weight(1)
    }

    /// Inverse of [`Self::integrate`] for a positive weight.
    fn integrate_inverse(&self, y: Rational, weight: impl Fn(u64) -> Rational) -> Rational {
        let mut acc = Rational::zero();
        let mut left = Rational::zero();
        for b in &self.breaks {
            let w = weight(b.order);
            let next = acc + (b.jump - left) * w;
            if y <= next {
                return left + (y - acc) / w;
            }
            acc = next;
            left = b.jump;
        }
        left + (y - acc) / weight(1)
    }

    fn lower_weight(&self) -> impl Fn(u64) -> Rational {
        let total = self.total_order as i64;
        move |order| Rational::new(order as i64, total)
    }

    /// `phi(x) = ∫_0^x |I_t| / |I_0| dt` on a lower filtration.
    pub fn herbrand_phi(&self, x: Rational) -> Result<Rational> {
        self.ensure_numbering(Numbering::Lower)?;
        self.ensure_valid()?;
        if x.is_negative() {
            return Err(Error::NegativeArgument(x.to_string()));
        }
        Ok(self.integrate(x, self.lower_weight()))
    }

    /// Inverse of [`Self::herbrand_phi`].
    pub fn herbrand_psi(&self, c: Rational) -> Result<Rational> {
        self.ensure_numbering(Numbering::Lower)?;
        self.ensure_valid()?;
        if c.is_negative() {
            return Err(Error::NegativeArgument(c.to_string()));
        }
        Ok(self.integrate_inverse(c, self.lower_weight()))
    }

    /// Same breaks in the other numbering; assumes structural validity.
    fn convert(&self, target: Numbering) -> RamFiltration {
        let total = self.total_order as i64;
        let breaks = match (self.numbering, target) {
            (a, b) if a == b => self.breaks.clone(),
            (Numbering::Lower, _) => self
                .breaks
                .iter()
                .map(|b| Break::new(self.integrate(b.jump, self.lower_weight()), b.order))
                .collect(),
            (Numbering::Upper, _) => self
                .breaks
                .iter()
                .map(|b| {
                    let w = |order: u64| Rational::new(total, order as i64);
                    Break::new(self.integrate(b.jump, w), b.order)
                })
                .collect(),
        };
        RamFiltration::new(self.total_order, self.tame, target, breaks)
    }

    pub fn lower_to_upper(&self) -> Result<RamFiltration> {
        self.ensure_numbering(Numbering::Lower)?;
        self.ensure_valid()?;
        Ok(self.convert(Numbering::Upper))
    }

    pub fn upper_to_lower(&self) -> Result<RamFiltration> {
        self.ensure_numbering(Numbering::Upper)?;
        self.ensure_valid()?;
        Ok(self.convert(Numbering::Lower))
    }

    /// Quotient by the smallest nontrivial subgroup of the filtration.
    /// The remaining breaks keep their jumps in either numbering.
    pub fn quotient_by_last(&self) -> Result<RamFiltration> {
        self.ensure_valid()?;
        let Some(last) = self.breaks.last() else {
            return Err(Error::InvalidFiltration("no wild subgroup to divide by".into()));
        };
        let h = last.order;
        let breaks = self.breaks[..self.breaks.len() - 1]
            .iter()
            .map(|b| Break::new(b.jump, b.order / h))
            .collect();
        Ok(RamFiltration::new(self.total_order / h, self.tame, self.numbering, breaks))
    }

    pub fn to_json(&self) -> FiltrationJson {
        FiltrationJson {
            total_order: self.total_order,
            tame: self.tame,
            numbering: self.numbering,
            breaks: self
                .breaks
                .iter()
                .map(|b| (*b.jump.numer(), *b.jump.denom(), b.order))
                .collect(),
        }
    }
}

/// The jump rule for `Z/p^n`: the first upper jump is a positive integer
/// prime to `p`, and each next one is either `p` times the previous one or
/// larger than that and prime to `p`.
pub fn schmid_violations(p: u64, upper_jumps: &[Rational]) -> Vec<Violation> {
    let p = p as i64;
    let mut out = Vec::new();
    if upper_jumps.iter().any(|j| !j.is_integer() || !j.is_positive()) {
        out.push(violation(
            "schmid",
            "upper jumps of a cyclic group must be positive integers",
        ));
        return out;
    }
    let js: Vec<i64> = upper_jumps.iter().map(|j| j.to_integer()).collect();
    if let Some(&first) = js.first() {
        if first % p == 0 {
            out.push(violation("schmid", format!("p = {p} divides the first jump {first}")));
        }
    }
    for w in js.windows(2) {
        let (a, b) = (w[0], w[1]);
        let ok = b == p * a || (b > p * a && b % p != 0);
        if !ok {
            out.push(violation(
                "schmid",
                format!("jump {b} after {a}: need {b} = {}, or {b} > {} and p = {p} not dividing {b}", p * a, p * a),
            ));
        }
    }
    out
}

/// Wire form `{"total_order", "tame", "numbering", "breaks": [[num, den, order], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationJson {
    pub total_order: u64,
    #[serde(default = "one")]
    pub tame: u64,
    pub numbering: Numbering,
    pub breaks: Vec<(i64, i64, u64)>,
}

fn one() -> u64 {
    1
}

impl FiltrationJson {
    pub fn to_filtration(&self) -> Result<RamFiltration> {
        let mut breaks = Vec::with_capacity(self.breaks.len());
        for &(n, d, order) in &self.breaks {
            if d == 0 {
                return Err(Error::InvalidFiltration(format!("jump {n}/0")));
            }
            breaks.push(Break::new(Rational::new(n, d), order));
        }
        Ok(RamFiltration::new(self.total_order, self.tame, self.numbering, breaks))
    }
}

/// One irreducible piece `A_i / A_{i+1}` of a reduced filtration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReducedPiece {
    pub q: u64,
    #[serde(with = "crate::rational::pair")]
    pub sigma: Rational,
    #[serde(default = "one")]
    pub s_iota: u64,
}

/// Size and action integer of one piece, as supplied to [`reduce`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PieceSpec {
    pub q: u64,
    pub s_iota: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReducedFiltration {
    #[serde(default = "one")]
    pub tame: u64,
    pub pieces: Vec<ReducedPiece>,
}

impl ReducedFiltration {
    pub fn new(tame: u64, pieces: Vec<ReducedPiece>) -> Result<Self> {
        let r = ReducedFiltration { tame, pieces };
        r.validate()?;
        Ok(r)
    }

    /// Pieces are nontrivial powers of one prime `p` not dividing the tame
    /// part, jumps are positive and weakly ascending, `1 <= s_iota <= m`.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidFiltration(msg));
        if self.tame == 0 {
            return bad("tame part must be positive".into());
        }
        let mut p0 = None;
        let mut prev: Option<Rational> = None;
        for piece in &self.pieces {
            let Some((p, _)) = prime_power(piece.q) else {
                return bad(format!("piece size {} is not a prime power", piece.q));
            };
            if *p0.get_or_insert(p) != p {
                return bad("piece sizes are powers of different primes".into());
            }
            if self.tame.is_multiple_of(p) {
                return bad(format!("p = {p} divides the tame part {}", self.tame));
            }
            if !piece.sigma.is_positive() {
                return bad(format!("jump {} is not positive", piece.sigma));
            }
            if prev.is_some_and(|s| piece.sigma < s) {
                return bad("jumps are not ascending".into());
            }
            prev = Some(piece.sigma);
            if piece.s_iota < 1 || piece.s_iota > self.tame {
                return bad(format!(
                    "s_iota = {} outside [1, {}]",
                    piece.s_iota, self.tame
                ));
            }
        }
        Ok(())
    }

    pub fn characteristic(&self) -> Option<u64> {
        self.pieces
            .first()
            .and_then(|piece| prime_power(piece.q))
            .map(|(p, _)| p)
    }

    /// `|P| = ∏ q_i`.
    pub fn wild_order(&self) -> u64 {
        self.pieces.iter().map(|piece| piece.q).product()
    }
}

/// Refines an upper filtration into irreducible pieces. `specs[k]` lists
/// the pieces of the quotient at break `k`; their sizes must multiply to
/// the quotient order. Each jump is repeated once per piece.
pub fn reduce(upper: &RamFiltration, specs: &[Vec<PieceSpec>]) -> Result<ReducedFiltration> {
    upper.ensure_numbering(Numbering::Upper)?;
    upper.ensure_valid()?;
    if specs.len() != upper.breaks.len() {
        return Err(Error::InvalidFiltration(format!(
            "{} piece lists for {} breaks",
            specs.len(),
            upper.breaks.len()
        )));
    }
    let mut pieces = Vec::new();
    for (k, (b, spec)) in upper.breaks.iter().zip(specs).enumerate() {
        let quotient = b.order / upper.order_after(k);
        let product: u64 = spec.iter().map(|s| s.q).product();
        if spec.is_empty() || product != quotient {
            return Err(Error::InvalidFiltration(format!(
                "pieces at jump {} multiply to {product}, quotient has order {quotient}",
                b.jump
            )));
        }
        pieces.extend(spec.iter().map(|s| ReducedPiece {
            q: s.q,
            sigma: b.jump,
            s_iota: s.s_iota,
        }));
    }
    ReducedFiltration::new(upper.tame, pieces)
}

/// [`reduce`] for a wild group (`m = 1`, so every `s_iota` is 1).
pub fn reduce_sizes(upper: &RamFiltration, sizes: &[Vec<u64>]) -> Result<ReducedFiltration> {
    if upper.tame != 1 {
        return Err(Error::InvalidFiltration(
            "s_iota must be supplied per piece when m > 1".into(),
        ));
    }
    let specs: Vec<Vec<PieceSpec>> = sizes
        .iter()
        .map(|v| v.iter().map(|&q| PieceSpec { q, s_iota: 1 }).collect())
        .collect();
    reduce(upper, &specs)
}

/// `s_iota` of the last reduced piece from the lower filtration: the
/// unique `s` in `[1, m]` with `s·|P̄| ≡ j_e (mod m)`, where `j_e` is the
/// last lower jump and `|P̄| = |P| / q_r`. `|P̄|` is a power of `p`, hence
/// invertible mod `m`.
pub fn last_piece_s_iota(lower: &RamFiltration, last_q: u64) -> Result<u64> {
    lower.ensure_numbering(Numbering::Lower)?;
    lower.ensure_valid()?;
    let m = lower.tame as i64;
    let last = lower
        .breaks
        .last()
        .ok_or_else(|| Error::InvalidFiltration("no wild jump".into()))?;
    if !last.jump.is_integer() {
        return Err(Error::InvalidFiltration(format!(
            "lower jump {} is not an integer",
            last.jump
        )));
    }
    let wild = lower.wild_order();
    if last_q == 0 || !wild.is_multiple_of(last_q) {
        return Err(Error::InvalidFiltration(format!(
            "piece size {last_q} does not divide |P| = {wild}"
        )));
    }
    let pbar = ((wild / last_q) as i64).rem_euclid(m);
    let je = last.jump.to_integer().rem_euclid(m);
    let ext = pbar.extended_gcd(&m);
    if !ext.gcd.is_one() {
        return Err(Error::InvalidFiltration("p divides the tame part".into()));
    }
    let s = (je * ext.x).rem_euclid(m);
    Ok(if s == 0 { m as u64 } else { s as u64 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn d8() -> RamFiltration {
        RamFiltration::lower(8, 1, &[(1, 8), (3, 2)])
    }

    #[test]
    fn d8_herbrand() {
        let f = d8();
        assert_eq!(f.herbrand_phi(int(1)).unwrap(), int(1));
        assert_eq!(f.herbrand_phi(int(3)).unwrap(), r(3, 2));
        assert_eq!(f.herbrand_psi(r(3, 2)).unwrap(), int(3));
        assert_eq!(f.herbrand_phi(int(5)).unwrap(), r(3, 2) + r(2, 8));
        assert_eq!(f.herbrand_psi(r(1, 2)).unwrap(), r(1, 2));
        assert!(matches!(f.herbrand_phi(int(-1)), Err(Error::NegativeArgument(_))));
        assert_eq!(f.jumps_with_multiplicity().unwrap(), vec![int(1), int(1), int(3)]);
        assert_eq!(f.order_at(int(2)), 2);
        assert_eq!(f.order_at(int(4)), 1);
    }

    #[test]
    fn d8_upper() {
        let up = d8().lower_to_upper().unwrap();
        assert_eq!(up.jumps(), vec![int(1), r(3, 2)]);
        assert_eq!(up.breaks()[0].order, 8);
        assert_eq!(up.upper_to_lower().unwrap(), d8());
        assert!(d8().validate(Structure::General).is_empty());
        // 3/2 is not integral, so the germ group is not abelian
        assert_eq!(d8().validate(Structure::Abelian)[0].code, "upper-jump-not-integer");
    }

    #[test]
    fn tame_single_break() {
        // A ⋊ mu_m with conductor s: phi(s) = s/m
        for (p, m, s) in [(2u64, 3u64, 5i64), (3, 2, 7), (5, 4, 3)] {
            let f = RamFiltration::lower(p * m, m, &[(s, p)]);
            assert!(f.validate(Structure::General).is_empty());
            assert_eq!(f.herbrand_phi(int(s)).unwrap(), r(s, m as i64));
        }
    }

    #[test]
    fn cyclic_z4() {
        let f = RamFiltration::lower(4, 1, &[(1, 4), (3, 2)]);
        let up = f.lower_to_upper().unwrap();
        assert_eq!(up.jumps(), vec![int(1), int(2)]);
        assert!(f.validate(Structure::Cyclic).is_empty());
    }

    #[test]
    fn single_jump_upper_equals_lower() {
        for j in [1i64, 3, 7] {
            let f = RamFiltration::lower(2, 1, &[(j, 2)]);
            assert_eq!(f.lower_to_upper().unwrap().jumps(), vec![int(j)]);
        }
    }

    #[test]
    fn violations() {
        let f = RamFiltration::lower(2, 1, &[(2, 2)]);
        assert_eq!(f.validate(Structure::General)[0].code, "p-divides-lower-jump");
        let f = RamFiltration::lower(8, 1, &[(1, 8), (3, 3)]);
        assert!(!f.validate(Structure::General).is_empty());
        let f = RamFiltration::lower(6, 1, &[(1, 6)]);
        assert_eq!(f.validate(Structure::General)[0].code, "wild-not-prime-power");
        let f = RamFiltration::lower(4, 1, &[(3, 4), (1, 2)]);
        assert!(f.validate(Structure::General).iter().any(|v| v.code == "jumps-not-ascending"));
        assert!(f.herbrand_phi(int(1)).is_err());
    }

    #[test]
    fn schmid_rule() {
        assert!(schmid_violations(2, &[int(1), int(5)]).is_empty());
        assert_eq!(schmid_violations(2, &[int(1), int(4)]).len(), 1);
        assert!(schmid_violations(2, &[int(1), int(2), int(4)]).is_empty());
        assert!(schmid_violations(3, &[int(1), int(3), int(9)]).is_empty());
        assert_eq!(schmid_violations(3, &[int(3)]).len(), 1);
        let up = RamFiltration::cyclic(2, 1, Numbering::Upper, &[int(1), int(5)]);
        assert!(up.validate(Structure::Cyclic).is_empty());
        let up = RamFiltration::cyclic(2, 1, Numbering::Upper, &[int(1), int(4)]);
        assert_eq!(up.validate(Structure::Cyclic)[0].code, "schmid");
    }

    #[test]
    fn tame_only() {
        let f = RamFiltration::lower(3, 3, &[]);
        assert!(f.validate(Structure::Cyclic).is_empty());
        assert_eq!(f.herbrand_phi(int(3)).unwrap(), int(1));
        assert_eq!(f.lower_to_upper().unwrap().breaks(), &[]);
        let f = RamFiltration::lower(1, 1, &[]);
        assert_eq!(f.herbrand_phi(int(3)).unwrap(), int(3));
    }

    #[test]
    fn quaternion_reduction() {
        let up = d8().lower_to_upper().unwrap();
        let red = reduce_sizes(&up, &[vec![2, 2], vec![2]]).unwrap();
        let got: Vec<(u64, Rational)> = red.pieces.iter().map(|p| (p.q, p.sigma)).collect();
        assert_eq!(got, vec![(2, int(1)), (2, int(1)), (2, r(3, 2))]);
        assert!(reduce_sizes(&up, &[vec![2], vec![2]]).is_err());
        assert!(reduce_sizes(&up, &[vec![4], vec![2]]).is_ok());
    }

    #[test]
    fn irreducible_reduction_is_identity() {
        let up = RamFiltration::lower(4, 1, &[(1, 4), (3, 2)]).lower_to_upper().unwrap();
        let red = reduce_sizes(&up, &[vec![2], vec![2]]).unwrap();
        let sig: Vec<Rational> = red.pieces.iter().map(|p| p.sigma).collect();
        assert_eq!(sig, up.jumps());
    }

    #[test]
    fn ordinary_reduction() {
        // p = 2, m = 3, e = 4, c = 2: jump 1/3 split into two pieces of size 4
        let lower = RamFiltration::lower(48, 3, &[(1, 16)]);
        let up = lower.lower_to_upper().unwrap();
        assert_eq!(up.jumps(), vec![r(1, 3)]);
        let spec = vec![PieceSpec { q: 4, s_iota: 1 }; 2];
        let red = reduce(&up, &[spec]).unwrap();
        assert_eq!(red.pieces.len(), 2);
        assert_eq!(red.wild_order(), 16);
        assert_eq!(last_piece_s_iota(&lower, 4).unwrap(), 1);
    }

    #[test]
    fn s_iota_helper_single_piece() {
        // A ⋊ mu_m with one piece: s_iota is the conductor mod m
        let lower = RamFiltration::lower(2 * 5, 5, &[(7, 2)]);
        assert_eq!(last_piece_s_iota(&lower, 2).unwrap(), 2);
        let lower = RamFiltration::lower(3 * 4, 4, &[(5, 3)]);
        assert_eq!(last_piece_s_iota(&lower, 3).unwrap(), 1);
    }

    #[test]
    fn reduced_validation() {
        let piece = |q, sigma, s_iota| ReducedPiece { q, sigma, s_iota };
        assert!(ReducedFiltration::new(1, vec![piece(2, int(1), 1), piece(3, int(2), 1)]).is_err());
        assert!(ReducedFiltration::new(2, vec![piece(2, int(1), 1)]).is_err());
        assert!(ReducedFiltration::new(1, vec![piece(2, int(2), 1), piece(2, int(1), 1)]).is_err());
        assert!(ReducedFiltration::new(3, vec![piece(2, int(1), 4)]).is_err());
        assert!(ReducedFiltration::new(3, vec![piece(4, r(1, 3), 1)]).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let up = d8().lower_to_upper().unwrap();
        let s = serde_json::to_string(&up.to_json()).unwrap();
        assert_eq!(
            s,
            r#"{"total_order":8,"tame":1,"numbering":"upper","breaks":[[1,1,8],[3,2,2]]}"#
        );
        let back: FiltrationJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back.to_filtration().unwrap(), up);
    }
}
