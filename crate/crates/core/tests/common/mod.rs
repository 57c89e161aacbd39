//! Property checks shared by the proptest suite and the acceptance run.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use ramify_core::ascover::{self, AsCover};
use ramify_core::gf::{Field, FieldElement};
use ramify_core::laurent::LaurentPoly;
use ramify_core::ramfilt::RamFiltration;
use ramify_core::rational::Rational;
use ramify_core::tower::lower_filtration_from_step_jumps;
use ramify_core::Error;

/// `(p, a)` pairs for the coefficient field `F_q`, `q = p^a`.
pub const FIELDS: [(u64, u32); 6] = [(2, 1), (2, 2), (2, 4), (3, 1), (3, 2), (5, 1)];

pub type Terms = Vec<(i64, u32)>;

#[derive(Debug, Clone)]
pub struct CoverCase {
    pub p: u64,
    pub a: u32,
    pub terms: Terms,
}

impl CoverCase {
    pub fn field(&self) -> Field {
        Field::new(self.p, self.a).unwrap()
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.a)
    }
}

pub fn poly(field: &Field, terms: &[(i64, u32)]) -> LaurentPoly {
    let q = field.order() as u32;
    LaurentPoly::from_terms(field, terms.iter().map(|&(e, c)| (e, field.element(c % q)))).unwrap()
}

fn terms(max_pole: i64) -> impl Strategy<Value = Terms> {
    prop::collection::vec((-max_pole..=2i64, any::<u32>()), 0..7)
}

pub fn cover_case() -> impl Strategy<Value = CoverCase> {
    (0..FIELDS.len(), terms(40)).prop_map(|(i, terms)| CoverCase {
        p: FIELDS[i].0,
        a: FIELDS[i].1,
        terms,
    })
}

fn conductor_or_zero(r: &LaurentPoly, q: u64) -> Result<u64, TestCaseError> {
    match ascover::conductor(r, q) {
        Ok(s) => Ok(s),
        Err(Error::Disconnected) => Ok(0),
        Err(e) => Err(TestCaseError::fail(e.to_string())),
    }
}

/// Standard form is idempotent and leaves only poles of order prime to `q`.
pub fn standard_form_idempotent(case: &CoverCase) -> Result<(), TestCaseError> {
    let f = case.field();
    let q = case.q();
    let sf = ascover::standard_form(&poly(&f, &case.terms), q);
    prop_assert_eq!(ascover::standard_form(&sf, q), sf.clone());
    for e in sf.exponents() {
        prop_assert!(e < 0);
        prop_assert!((-e) % q as i64 != 0);
    }
    Ok(())
}

/// `r` and `r + g^q - g` have the same conductor and isomorphic covers.
pub fn wp_invariance(case: &CoverCase, g_terms: &Terms) -> Result<(), TestCaseError> {
    let f = case.field();
    let q = case.q();
    let r = poly(&f, &case.terms);
    let g = poly(&f, g_terms);
    let h = r.clone() + g.pow(q as u32) - g;
    prop_assert_eq!(conductor_or_zero(&r, q)?, conductor_or_zero(&h, q)?);
    let c1 = AsCover::wild(q, r).unwrap();
    let c2 = AsCover::wild(q, h).unwrap();
    prop_assert_eq!(ascover::is_isomorphic(&c1, &c2).unwrap(), Some(f.one()));
    Ok(())
}

/// Reflexivity, symmetry and transitivity of `is_isomorphic`, on a chain
/// of rescaled and modified covers plus one unrelated cover.
pub fn isomorphism_laws(
    case: &CoverCase,
    other: &Terms,
    g_terms: &Terms,
    k1: u32,
    k2: u32,
) -> Result<(), TestCaseError> {
    let f = case.field();
    let q = case.q();
    let units = ascover::scalars(&f, q);
    let z1 = &units[k1 as usize % units.len()];
    let z2 = &units[k2 as usize % units.len()];
    let g = poly(&f, g_terms);
    let r1 = poly(&f, &case.terms);
    let r2 = r1.scale(z1) + g.pow(q as u32) - g;
    let r3 = r2.scale(z2);
    let covers: Vec<AsCover> = [r1, r2, r3, poly(&f, other)]
        .into_iter()
        .map(|r| AsCover::wild(q, r).unwrap())
        .collect();
    let iso = |i: usize, j: usize| ascover::is_isomorphic(&covers[i], &covers[j]).unwrap();
    for i in 0..covers.len() {
        prop_assert!(iso(i, i).is_some());
        for j in 0..covers.len() {
            prop_assert_eq!(iso(i, j).is_some(), iso(j, i).is_some());
            for k in 0..covers.len() {
                if iso(i, j).is_some() && iso(j, k).is_some() {
                    prop_assert!(iso(i, k).is_some());
                }
            }
        }
    }
    prop_assert!(iso(0, 1).is_some() && iso(1, 2).is_some());
    Ok(())
}

#[derive(Debug, Clone)]
pub struct FiltrationCase {
    pub p: u64,
    pub m: u64,
    pub step_jumps: Vec<i64>,
}

impl FiltrationCase {
    pub fn lower(&self) -> RamFiltration {
        lower_filtration_from_step_jumps(self.p, self.m, &self.step_jumps).unwrap()
    }
}

/// Lower filtrations of towers of degree-`p` steps with jumps prime to `p`.
pub fn filtration_case() -> impl Strategy<Value = FiltrationCase> {
    let shapes = prop_oneof![Just((2u64, 1u64)), Just((2, 3)), Just((3, 1)), Just((3, 2)), Just((5, 4))];
    (shapes, prop::collection::vec(1..30i64, 1..4)).prop_map(|((p, m), raw)| {
        let step_jumps = raw
            .into_iter()
            .map(|j| if j % p as i64 == 0 { j + 1 } else { j })
            .collect();
        FiltrationCase { p, m, step_jumps }
    })
}

pub fn rational_point() -> impl Strategy<Value = Rational> {
    (0..400i64, 1..13i64).prop_map(|(n, d)| Rational::new(n, d))
}

/// `psi(phi(x)) = x` and `phi(psi(x)) = x`.
pub fn herbrand_inversion(case: &FiltrationCase, x: Rational) -> Result<(), TestCaseError> {
    let f = case.lower();
    prop_assert_eq!(f.herbrand_psi(f.herbrand_phi(x).unwrap()).unwrap(), x);
    prop_assert_eq!(f.herbrand_phi(f.herbrand_psi(x).unwrap()).unwrap(), x);
    Ok(())
}

/// Lower to upper and back is the identity.
pub fn lower_upper_round_trip(case: &FiltrationCase) -> Result<(), TestCaseError> {
    let f = case.lower();
    let upper = f.lower_to_upper().unwrap();
    prop_assert_eq!(upper.upper_to_lower().unwrap(), f);
    Ok(())
}

#[derive(Debug, Clone)]
pub struct EquivariantCase {
    pub p: u64,
    pub a: u32,
    pub m: u64,
    pub s: u64,
    pub terms: Terms,
}

/// `(p, a, m)` with `m | p^a - 1`, `m > 1`.
const EQUIVARIANT_SHAPES: [(u64, u32, u64); 8] = [
    (3, 1, 2),
    (5, 1, 2),
    (5, 1, 4),
    (7, 1, 3),
    (7, 1, 6),
    (2, 2, 3),
    (2, 4, 5),
    (2, 4, 15),
];

/// Covers whose poles all lie in one class `s` mod `m`, with `z = zeta_m^s`
/// generating `F_q`.
pub fn equivariant_case() -> impl Strategy<Value = EquivariantCase> {
    (0..EQUIVARIANT_SHAPES.len(), any::<u64>(), prop::collection::vec((0..8i64, 1..u32::MAX), 1..6))
        .prop_map(|(i, s_raw, raw)| {
            let (p, a, m) = EQUIVARIANT_SHAPES[i];
            let q = p.pow(a);
            let zeta = Field::new(p, a).unwrap().root_of_unity(m).unwrap();
            // walk to the first admissible class
            let s = (0..m)
                .map(|k| (s_raw + k) % m + 1)
                .find(|&s| zeta.pow(s).degree_over_prime() == a)
                .unwrap();
            let terms = raw
                .into_iter()
                .map(|(k, c)| (-(s as i64 + k * m as i64), c % (q as u32 - 1) + 1))
                .collect();
            EquivariantCase { p, a, m, s, terms }
        })
}

/// The conductor of an equivariant cover is congruent to `s_iota` mod `m`.
pub fn conductor_congruence(case: &EquivariantCase) -> Result<(), TestCaseError> {
    let f = Field::new(case.p, case.a).unwrap();
    let q = case.p.pow(case.a);
    let z = f.root_of_unity(case.m).unwrap().pow(case.s);
    let info = ascover::s_iota(q, case.m, &z).unwrap();
    prop_assert_eq!(info.value, case.s);
    let r = poly(&f, &case.terms);
    let cover = AsCover::new(q, r, case.m, Some(z)).unwrap();
    prop_assert!(ascover::check_equivariance(&cover, info.value));
    match cover.conductor() {
        Ok(c) => prop_assert_eq!(c % case.m, info.value % case.m),
        Err(Error::Disconnected) => {}
        Err(e) => return Err(TestCaseError::fail(e.to_string())),
    }
    Ok(())
}

/// The congruence up to Frobenius: `conductor ≡ p^k·s_iota (mod m)` for
/// some `0 <= k < a`. When the leading pole of the standard form is
/// divisible by `p` but not by `q`, the jump character is a Frobenius
/// twist of `z` and `k > 0` can occur.
pub fn conductor_frobenius_class(case: &EquivariantCase) -> Result<(), TestCaseError> {
    let f = Field::new(case.p, case.a).unwrap();
    let q = case.p.pow(case.a);
    let z = f.root_of_unity(case.m).unwrap().pow(case.s);
    let cover = AsCover::new(q, poly(&f, &case.terms), case.m, Some(z)).unwrap();
    match cover.conductor() {
        Ok(c) => {
            let classes: Vec<u64> = (0..case.a)
                .map(|k| case.p.pow(k) * case.s % case.m)
                .collect();
            prop_assert!(classes.contains(&(c % case.m)), "conductor {} not in {:?}", c, classes);
        }
        Err(Error::Disconnected) => {}
        Err(e) => return Err(TestCaseError::fail(e.to_string())),
    }
    Ok(())
}

/// Runs a property for a fixed number of cases with a deterministic seed.
pub fn run<S, F>(cases: u32, strategy: S, test: F) -> Result<(), String>
where
    S: Strategy,
    F: Fn(S::Value) -> Result<(), TestCaseError>,
{
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(
        config,
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

pub fn element(field: &Field, raw: u32) -> FieldElement {
    field.element(raw % field.order() as u32)
}
