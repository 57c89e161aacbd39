//! Artin–Schreier covers `v^q - v = r(x)` of the germ at `x = 0`.
//!
//! Adding `d^q - d` to `r` does not change the cover, so every cover has a
//! standard form: only negative exponents, none divisible by `q`. The
//! coefficient field is finite, hence perfect, so the `q`-th roots needed to
//! reach the standard form always exist in it.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{prime_power, ElementJson, Field, FieldElement};
use crate::laurent::{LaurentJson, LaurentPoly};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsCover {
    q: u64,
    r: LaurentPoly,
    m: u64,
    z: Option<FieldElement>,
}

impl AsCover {
    /// Validates the datum: `q = p^a` with `p` the characteristic of the
    /// coefficient field and `F_q` contained in it; `p` does not divide `m`;
    /// the scalar `z` is required when `m > 1` and must then be a nonzero
    /// element of `F_q` with `[F_p(z):F_p] = a`.
    pub fn new(q: u64, r: LaurentPoly, m: u64, z: Option<FieldElement>) -> Result<Self> {
        let field = r.field().clone();
        let p = field.characteristic();
        let a = match prime_power(q) {
            Some((qp, a)) if qp == p => a,
            _ => {
                return Err(Error::InvalidCover(format!(
                    "q = {q} is not a power of the characteristic {p}"
                )))
            }
        };
        if !field.degree().is_multiple_of(a) {
            return Err(Error::InvalidCover(format!(
                "F_{q} is not contained in the coefficient field F_{}",
                field.order()
            )));
        }
        if m == 0 || m.is_multiple_of(p) {
            return Err(Error::InvalidCover(format!(
                "tame degree m = {m} must be positive and prime to p = {p}"
            )));
        }
        match (&z, m) {
            (None, 1) => {}
            (None, _) => {
                return Err(Error::InvalidCover(
                    "the action scalar z is required when m > 1".into(),
                ))
            }
            (Some(z), _) => {
                if z.field() != &field {
                    return Err(Error::FieldMismatch {
                        left: field.order(),
                        right: z.field().order(),
                    });
                }
                if z.is_zero() || z.pow(q) != *z {
                    return Err(Error::InvalidCover(format!("z = {z} is not in F_{q}^*")));
                }
                let degree = z.degree_over_prime();
                if degree != a {
                    return Err(Error::ReducibleAction { degree, a });
                }
            }
        }
        Ok(AsCover { q, r, m, z })
    }

    /// A cover with trivial tame part (`m = 1`).
    pub fn wild(q: u64, r: LaurentPoly) -> Result<Self> {
        Self::new(q, r, 1, None)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn r(&self) -> &LaurentPoly {
        &self.r
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn z(&self) -> Option<&FieldElement> {
        self.z.as_ref()
    }

    pub fn field(&self) -> &Field {
        self.r.field()
    }

    pub fn standard_form(&self) -> LaurentPoly {
        standard_form(&self.r, self.q)
    }

    pub fn conductor(&self) -> Result<u64> {
        conductor(&self.r, self.q)
    }

    /// Connectedness, decided by whether the standard form vanishes.
    /// Only degree-`p` covers are supported.
    pub fn is_connected(&self) -> Result<bool> {
        let p = self.field().characteristic();
        if self.q != p {
            return Err(Error::Unsupported(format!(
                "connectedness is implemented for q = p only (q = {})",
                self.q
            )));
        }
        Ok(!self.standard_form().is_zero())
    }

    pub fn to_json(&self) -> CoverJson {
        CoverJson {
            q: self.q,
            m: self.m,
            z: self.z.as_ref().map(FieldElement::to_json),
            r: self.r.to_json(),
            field: Some(FieldJson {
                p: self.field().characteristic(),
                a: self.field().degree(),
            }),
        }
    }
}

/// Reduces `r` to standard form for `v^q - v = r`: drop exponents `>= 0`,
/// then replace `c x^(-q l)` by `c^(1/q) x^(-l)` until no exponent is
/// divisible by `q`. Pole orders strictly drop at each replacement, so the
/// loop terminates.
pub fn standard_form(r: &LaurentPoly, q: u64) -> LaurentPoly {
    let field = r.field();
    let a = prime_power(q).map(|(_, a)| a).expect("q is a prime power");
    let q = q as i64;
    let mut out = r.polar_part();
    loop {
        let hit = out
            .raw_terms()
            .iter()
            .find(|(&e, _)| e % q == 0)
            .map(|(&e, &c)| (e, c));
        let Some((e, c)) = hit else { break };
        let mut next = LaurentPoly::from_raw_terms(
            field,
            out.raw_terms()
                .iter()
                .filter(|(&k, _)| k != e)
                .map(|(&k, &v)| (k, v)),
        );
        next.add_raw_term(e / q, field.pth_root_pow(c, a));
        out = next;
    }
    out
}

/// Conductor of `v^q - v = r`: the prime-to-`p` degree of the standard form.
pub fn conductor(r: &LaurentPoly, q: u64) -> Result<u64> {
    let sf = standard_form(r, q);
    if sf.is_zero() {
        return Err(Error::Disconnected);
    }
    let s = sf.prime_to_p_degree()?;
    let p = r.field().characteristic() as i64;
    if s < 1 || s % p == 0 {
        return Err(Error::Inconsistent(format!(
            "conductor {s} violates s >= 1, p does not divide s"
        )));
    }
    Ok(s as u64)
}

/// Elements of `F_q^*` inside the coefficient field, in increasing raw order.
pub fn scalars(field: &Field, q: u64) -> Vec<FieldElement> {
    let a = prime_power(q).map(|(_, a)| a).expect("q is a prime power");
    field
        .subfield_elements(a)
        .into_iter()
        .filter(|x| !x.is_zero())
        .collect()
}

/// Decides whether two covers with the same `q` are isomorphic as
/// `A`-covers, i.e. whether the standard forms differ by a scalar in
/// `F_q^*`. Returns the smallest such scalar.
pub fn is_isomorphic(c1: &AsCover, c2: &AsCover) -> Result<Option<FieldElement>> {
    if c1.q != c2.q {
        return Err(Error::InvalidCover(format!(
            "covers of different degree ({} and {})",
            c1.q, c2.q
        )));
    }
    if c1.field() != c2.field() {
        return Err(Error::FieldMismatch {
            left: c1.field().order(),
            right: c2.field().order(),
        });
    }
    let s1 = c1.standard_form();
    let s2 = c2.standard_form();
    Ok(scalars(c1.field(), c1.q)
        .into_iter()
        .find(|zeta| s1.scale(zeta) == s2))
}

/// The integer attached to `A ⋊ mu_m` by the action scalar `z`, with the
/// derived checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SIota {
    /// The unique `s` in `[1, m]` with `zeta_m^s = z`.
    pub value: u64,
    /// Multiplicative order of `z`.
    pub order_of_z: u64,
    /// `gcd(m, s)`, the order of the kernel of the action.
    pub kernel_order: u64,
    /// `gcd(m, s) = m / ord(z)`.
    pub kernel_check: bool,
    /// `[F_p(z):F_p]`, equal to `a` for an irreducible action.
    pub degree: u32,
}

/// Computes `s_iota` for `z = zeta_m^s`, where `zeta_m` is the field's
/// deterministic primitive `m`-th root of unity, so `mu_m` must lie in the
/// field of `z`.
pub fn s_iota(q: u64, m: u64, z: &FieldElement) -> Result<SIota> {
    let field = z.field();
    let p = field.characteristic();
    let a = match prime_power(q) {
        Some((qp, a)) if qp == p => a,
        _ => {
            return Err(Error::InvalidCover(format!(
                "q = {q} is not a power of {p}"
            )))
        }
    };
    if m == 0 || m.is_multiple_of(p) {
        return Err(Error::InvalidCover(format!("p = {p} divides m = {m}")));
    }
    let order_of_z = z.multiplicative_order()?;
    if !m.is_multiple_of(order_of_z) {
        return Err(Error::InvalidCover(format!(
            "ord(z) = {order_of_z} does not divide m = {m}"
        )));
    }
    let zeta = field.root_of_unity(m)?;
    let mut power = field.one();
    let mut value = None;
    for s in 1..=m {
        power = &power * &zeta;
        if power == *z {
            value = Some(s);
            break;
        }
    }
    let value = value.expect("z lies in the cyclic group generated by zeta_m");
    let degree = z.degree_over_prime();
    if degree != a {
        return Err(Error::ReducibleAction { degree, a });
    }
    let kernel_order = m.gcd(&value);
    Ok(SIota {
        value,
        order_of_z,
        kernel_order,
        kernel_check: kernel_order == m / order_of_z,
        degree,
    })
}

/// Equivariance under `x -> zeta_m x`: every term of `r` has pole order
/// congruent to `s_iota` modulo `m` (a term `c x^e` has pole order `-e`).
/// Returns false also when standard-form reduction would leave that
/// congruence class, which only happens for data whose `z` is not a valid
/// irreducible action.
pub fn check_equivariance(cover: &AsCover, s_iota: u64) -> bool {
    let m = cover.m as i64;
    if m == 1 {
        return true;
    }
    let s = s_iota as i64;
    let in_class = |r: &LaurentPoly| r.exponents().all(|e| (-e - s).rem_euclid(m) == 0);
    in_class(cover.r()) && in_class(&cover.standard_form())
}

/// Modifies the cover `y^q - y = r_phi` to `y^q - y = r_phi + r_alpha` and
/// reports whether the modification is equiramified, i.e. whether the
/// conductor of `v^q - v = r_alpha` is at most `m * sigma`. A trivial
/// `r_alpha` (zero standard form) counts as conductor zero.
pub fn modify_cover(
    r_phi: &LaurentPoly,
    r_alpha: &LaurentPoly,
    q: u64,
    m: u64,
    sigma: Rational,
) -> Result<(LaurentPoly, bool)> {
    if r_phi.field() != r_alpha.field() {
        return Err(Error::FieldMismatch {
            left: r_phi.field().order(),
            right: r_alpha.field().order(),
        });
    }
    let s = match conductor(r_alpha, q) {
        Ok(s) => s as i64,
        Err(Error::Disconnected) => 0,
        Err(e) => return Err(e),
    };
    let bound = sigma * Rational::from_integer(m as i64);
    Ok((r_phi + r_alpha, Rational::from_integer(s) <= bound))
}

/// Wire form of a coefficient field: `{"p": int, "a": int}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub p: u64,
    pub a: u32,
}

impl FieldJson {
    pub fn to_field(&self) -> Result<Field> {
        Field::new(self.p, self.a)
    }
}

/// Wire form `{"q": int, "m": int, "z": element?, "r": laurent, "field"?}`.
/// Without `field` the coefficient field is `F_q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverJson {
    pub q: u64,
    #[serde(default = "one")]
    pub m: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<ElementJson>,
    pub r: LaurentJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldJson>,
}

fn one() -> u64 {
    1
}

impl CoverJson {
    pub fn to_cover(&self) -> Result<AsCover> {
        let field = match self.field {
            Some(f) => f.to_field()?,
            None => {
                let (p, a) = prime_power(self.q).ok_or_else(|| {
                    Error::InvalidCover(format!("q = {} is not a prime power", self.q))
                })?;
                Field::new(p, a)?
            }
        };
        let r = self.r.to_poly(&field)?;
        let z = self.z.as_ref().map(|z| z.to_element(&field)).transpose()?;
        AsCover::new(self.q, r, self.m, z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(field: &Field, e: i64) -> LaurentPoly {
        LaurentPoly::x_pow(field, e)
    }

    #[test]
    fn standard_form_examples() {
        let f2 = Field::prime(2).unwrap();
        let r = x(&f2, -3);
        assert_eq!(standard_form(&r, 2), r);
        let r = &(&x(&f2, -3) + &x(&f2, 2)) + &x(&f2, 4);
        assert_eq!(standard_form(&r, 2), x(&f2, -3));
        assert_eq!(standard_form(&x(&f2, -2), 2), x(&f2, -1));
        // x^-2 + x^-1 is a coboundary plus zero
        assert!(standard_form(&(&x(&f2, -2) + &x(&f2, -1)), 2).is_zero());
    }

    #[test]
    fn standard_form_keeps_p_divisible_exponents_when_q_larger() {
        let f4 = Field::new(2, 2).unwrap();
        let r = x(&f4, -2);
        assert_eq!(standard_form(&r, 4), r);
        assert_eq!(conductor(&r, 4).unwrap(), 1);
        // x^-8 = (x^-2)^4
        assert_eq!(standard_form(&x(&f4, -8), 4), x(&f4, -2));
        let c = f4.generator();
        let sf = standard_form(&LaurentPoly::monomial(&c, -12), 4);
        assert_eq!(sf, LaurentPoly::monomial(&c.pth_root_pow(2), -3));
    }

    #[test]
    fn conductor_examples() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(conductor(&x(&f2, -3), 2).unwrap(), 3);
        assert_eq!(conductor(&x(&f2, 2), 2).unwrap_err(), Error::Disconnected);
        for p in [2u64, 5, 7] {
            let f = Field::prime(p).unwrap();
            let r = &x(&f, -2) + &x(&f, -3 * (p * p) as i64);
            assert_eq!(conductor(&r, p).unwrap(), 3);
        }
        let f3 = Field::prime(3).unwrap();
        let r = &x(&f3, -2) + &x(&f3, -27);
        assert_eq!(standard_form(&r, 3), &x(&f3, -2) + &x(&f3, -1));
        assert_eq!(conductor(&r, 3).unwrap(), 2);
    }

    #[test]
    fn isomorphism_examples() {
        let f4 = Field::new(2, 2).unwrap();
        let r1 = &x(&f4, -3) + &x(&f4, -1);
        let c1 = AsCover::wild(4, r1.clone()).unwrap();
        assert_eq!(is_isomorphic(&c1, &c1).unwrap(), Some(f4.one()));
        let z3 = f4.root_of_unity(3).unwrap();
        let c2 = AsCover::wild(4, r1.scale(&z3)).unwrap();
        assert_eq!(is_isomorphic(&c1, &c2).unwrap(), Some(z3));

        let f2 = Field::prime(2).unwrap();
        let a = AsCover::wild(2, x(&f2, -1)).unwrap();
        let b = AsCover::wild(2, x(&f2, -3)).unwrap();
        assert_eq!(is_isomorphic(&a, &b).unwrap(), None);
    }

    #[test]
    fn s_iota_examples() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(s_iota(2, 1, &f2.one()).unwrap().value, 1);

        let f3 = Field::prime(3).unwrap();
        let s = s_iota(3, 2, &f3.from_int(-1)).unwrap();
        assert_eq!(s.value, 1);
        assert_eq!(s.kernel_order, 1);
        assert!(s.kernel_check);
        assert_eq!(s.degree, 1);

        // z = 1 with m = 2: trivial action, kernel is all of mu_2
        let s = s_iota(3, 2, &f3.one()).unwrap();
        assert_eq!((s.value, s.kernel_order), (2, 2));
        assert!(s.kernel_check);
    }

    #[test]
    fn s_iota_errors() {
        let f4 = Field::new(2, 2).unwrap();
        let z3 = f4.root_of_unity(3).unwrap();
        // z3 generates F_4, so it is not an irreducible scalar for q = 2
        assert_eq!(
            s_iota(2, 3, &z3).unwrap_err(),
            Error::ReducibleAction { degree: 2, a: 1 }
        );
        assert!(s_iota(4, 3, &z3).is_ok());
        let f5 = Field::prime(5).unwrap();
        // ord(2) = 4 does not divide 2
        assert!(matches!(
            s_iota(5, 2, &f5.from_int(2)).unwrap_err(),
            Error::InvalidCover(_)
        ));
    }

    #[test]
    fn equivariance_examples() {
        let f3 = Field::prime(3).unwrap();
        let z = f3.from_int(-1);
        let good = AsCover::new(3, &x(&f3, -1) + &x(&f3, -5), 2, Some(z.clone())).unwrap();
        assert!(check_equivariance(&good, 1));
        let bad = AsCover::new(3, &x(&f3, -1) + &x(&f3, -2), 2, Some(z)).unwrap();
        assert!(!check_equivariance(&bad, 1));
        let f2 = Field::prime(2).unwrap();
        let trivial = AsCover::wild(2, &x(&f2, -1) + &x(&f2, -2)).unwrap();
        assert!(check_equivariance(&trivial, 1));
    }

    #[test]
    fn connectedness() {
        let f2 = Field::prime(2).unwrap();
        assert!(!AsCover::wild(2, LaurentPoly::zero(&f2)).unwrap().is_connected().unwrap());
        for a1 in [0i64, 1] {
            let r = LaurentPoly::monomial(&f2.from_int(a1 + 1), -1);
            assert_eq!(AsCover::wild(2, r).unwrap().is_connected().unwrap(), a1 != 1);
        }
        let f4 = Field::new(2, 2).unwrap();
        assert!(matches!(
            AsCover::wild(4, x(&f4, -1)).unwrap().is_connected().unwrap_err(),
            Error::Unsupported(_)
        ));
    }

    #[test]
    fn modification_and_equiramified_flag() {
        let f2 = Field::prime(2).unwrap();
        let phi = x(&f2, -3);
        let zero = LaurentPoly::zero(&f2);
        let (r, eq) = modify_cover(&phi, &zero, 2, 1, Rational::from_integer(3)).unwrap();
        assert_eq!(r, phi);
        assert!(eq);
        let (r, eq) = modify_cover(&phi, &x(&f2, -1), 2, 1, Rational::from_integer(3)).unwrap();
        assert_eq!(r, &phi + &x(&f2, -1));
        assert!(eq);
        let (_, eq) = modify_cover(&phi, &x(&f2, -5), 2, 1, Rational::new(3, 2)).unwrap();
        assert!(!eq);
    }

    #[test]
    fn cover_validation() {
        let f2 = Field::prime(2).unwrap();
        assert!(AsCover::new(4, x(&f2, -1), 1, None).is_err());
        assert!(AsCover::new(2, x(&f2, -1), 2, None).is_err());
        let f3 = Field::prime(3).unwrap();
        assert!(AsCover::new(3, x(&f3, -1), 2, None).is_err());
        assert!(AsCover::new(3, x(&f3, -1), 2, Some(f3.zero())).is_err());
    }

    #[test]
    fn cover_json_defaults_to_f_q() {
        let doc = r#"{"q": 4, "r": {"terms": [[-3, [0, 1]]]}}"#;
        let cover = serde_json::from_str::<CoverJson>(doc).unwrap().to_cover().unwrap();
        assert_eq!(cover.field().order(), 4);
        assert_eq!(cover.m(), 1);
        assert_eq!(cover.conductor().unwrap(), 3);
        let back = cover.to_json();
        assert_eq!(back.to_cover().unwrap(), cover);
    }
}
