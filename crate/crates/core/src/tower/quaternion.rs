//! The three-step quaternion family in characteristic 2:
//! `v^2 - v = (1 + a1) u`, `w^2 + w = v + a2 u`, `y^2 - y = w^3 + a3 u`
//! with `u = 1/x`.

use serde::Serialize;

use crate::ascover::{self, AsCover};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};
use crate::laurent::LaurentPoly;
use crate::moduli::dim_bounds;
use crate::par::Execution;
use crate::ramfilt::reduce_sizes;
use crate::rational::Rational;

use super::analytic::lower_filtration_from_step_jumps;
use super::invariants::genus_rh;
use super::mpoly::MPoly;
use super::spec::{GeneratorAction, TowerSpec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Step {
    V,
    W,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub a1: FieldElement,
    pub a2: FieldElement,
    pub a3: FieldElement,
    pub connected: bool,
    /// First step whose equation becomes trivial.
    pub disconnected_at: Option<Step>,
    pub genus: Option<u64>,
    pub top_jump: Option<u64>,
    pub c1: Option<FieldElement>,
    pub c2: Option<FieldElement>,
    pub c3: Option<FieldElement>,
    pub c4: Option<FieldElement>,
    /// Coefficients of `w1^5` and `w1^3` in the standard form of the top
    /// equation.
    pub leading: Option<(FieldElement, FieldElement)>,
}

/// Normalizes each step to standard form and reads off connectedness,
/// the top jump and the genus.
pub fn evaluate_quaternion_fiber(
    a1: &FieldElement,
    a2: &FieldElement,
    a3: &FieldElement,
) -> Result<FiberReport> {
    let field = a1.field().clone();
    if field.characteristic() != 2 {
        return Err(Error::Unsupported("the quaternion family lives in characteristic 2".into()));
    }
    a1.same_field(a2)?;
    a1.same_field(a3)?;
    let one = field.one();
    let mut report = FiberReport {
        a1: a1.clone(),
        a2: a2.clone(),
        a3: a3.clone(),
        connected: false,
        disconnected_at: None,
        genus: None,
        top_jump: None,
        c1: None,
        c2: None,
        c3: None,
        c4: None,
        leading: None,
    };

    // V: v^2 - v = (1 + a1)/x
    let e1 = a1 + &one;
    let r_v = LaurentPoly::monomial(&e1, -1);
    if ascover::standard_form(&r_v, 2).is_zero() {
        report.disconnected_at = Some(Step::V);
        return Ok(report);
    }

    // W over V, in the uniformizer 1/v: u = (v^2 - v)/(1 + a1)
    let ratio = a2 / &e1;
    let c1 = ratio.frobenius_inverse();
    let c2 = &one + &c1 + &c1 * &c1;
    let v_inv = |e: i64, c: &FieldElement| LaurentPoly::monomial(c, -e);
    let r_w = v_inv(1, &one) + v_inv(2, &ratio) + v_inv(1, &ratio);
    let sf_w = ascover::standard_form(&r_w, 2);
    report.c1 = Some(c1.clone());
    report.c2 = Some(c2.clone());
    if sf_w.is_zero() {
        report.disconnected_at = Some(Step::W);
        return Ok(report);
    }
    if sf_w != LaurentPoly::monomial(&c2, -1) {
        return Err(Error::Inconsistent(format!(
            "standard form of the W step is {sf_w:?}, expected c2/v"
        )));
    }

    // Y over W1, in X = w1 with 1/w1 a uniformizer:
    // v = (X^2 + X)/c2, w = c3 X^2 + c4 X, u = (v^2 + v)/(1 + a1)
    let c3 = &c1 / &c2;
    let c4 = &one + &c3;
    let x = LaurentPoly::x_pow(&field, -1);
    let v = (x.pow(2) + x.clone()).scale(&c2.inv()?);
    let u = (v.pow(2) + v).scale(&e1.inv()?);
    let w = x.pow(2).scale(&c3) + x.scale(&c4);
    let r_y = w.pow(3) + u.scale(a3);
    let sf_y = ascover::standard_form(&r_y, 2);
    let jump = ascover::conductor(&r_y, 2)?;
    let filtration = lower_filtration_from_step_jumps(2, 1, &[1, 1, jump as i64])?;
    report.connected = true;
    report.genus = Some(genus_rh(8, &filtration)?);
    report.top_jump = Some(jump);
    report.leading = Some((sf_y.coeff(-5), sf_y.coeff(-3)));
    report.c3 = Some(c3);
    report.c4 = Some(c4);
    Ok(report)
}

/// The family member as a tower with its two quaternion generators.
/// Needs a primitive cube root of unity in the field.
pub fn quaternion_tower(
    field: &Field,
    a1: &FieldElement,
    a2: &FieldElement,
    a3: &FieldElement,
) -> Result<(TowerSpec, Vec<GeneratorAction>)> {
    if field.characteristic() != 2 {
        return Err(Error::Unsupported("the quaternion family lives in characteristic 2".into()));
    }
    let f = &**field;
    let zeta = field.root_of_unity(3)?.raw();
    let n = 4;
    let u_term = |c: &FieldElement| MPoly::monomial(n, c.raw(), vec![-1, 0, 0, 0]);
    let one = field.one();
    let v_rhs = u_term(&(a1 + &one));
    let w_rhs = MPoly::var(n, 1).add(&u_term(a2), f);
    let y_rhs = MPoly::var(n, 2).pow(3, f).add(&u_term(a3), f);
    let spec = TowerSpec::new(
        field,
        1,
        vec![("v".into(), v_rhs), ("w".into(), w_rhs), ("y".into(), y_rhs)],
    )?;

    let zero = MPoly::zero(n);
    let c = |k: u32| MPoly::constant(n, k);
    let w = MPoly::var(n, 2);
    let mu = GeneratorAction {
        name: "mu".into(),
        x_scale: 1,
        images: vec![
            (1, zero.clone()),
            (1, c(1)),
            (1, w.add(&c(zeta), f)),
        ],
    };
    let tau = GeneratorAction {
        name: "tau".into(),
        x_scale: 1,
        images: vec![
            (1, c(1)),
            (1, c(zeta)),
            (1, w.scale(f.add(zeta, 1), f).add(&c(zeta), f)),
        ],
    };
    Ok((spec, vec![mu, tau]))
}

/// All fibers `(a1, a2, a3)` with `a1, a2` in the field and `a3` from the
/// given list, in row-major order.
pub fn sweep(field: &Field, a3s: &[FieldElement], exec: Execution) -> Result<Vec<FiberReport>> {
    let mut triples = Vec::new();
    for a1 in field.elements() {
        for a2 in field.elements() {
            for a3 in a3s {
                triples.push((a1.clone(), a2.clone(), a3.clone()));
            }
        }
    }
    exec.map(&triples, |(a1, a2, a3)| evaluate_quaternion_fiber(a1, a2, a3))
        .into_iter()
        .collect()
}

/// The `a2 = 0` family: the first step deformed by `a1·u`, the central
/// quotient by `a3·u`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub fibers: usize,
    /// Distinct top jumps seen across the family.
    pub top_jumps: Vec<u64>,
    /// Both deformation terms have conductor within `m·sigma` (sigma = 1
    /// for the first step, 3/2 for the last upper jump).
    pub equiramified: bool,
    /// No two fibers have isomorphic first steps and isomorphic central
    /// deformation covers.
    pub pairwise_non_isomorphic: bool,
    pub bounds: (u64, u64),
}

pub fn equiramified_family(field: &Field, exec: Execution) -> Result<FamilyReport> {
    let zero = field.zero();
    let one = field.one();
    let params: Vec<(FieldElement, FieldElement)> = field
        .elements()
        .filter(|a1| !a1.is_one())
        .flat_map(|a1| field.elements().map(move |a3| (a1.clone(), a3)))
        .collect();
    let reports = exec
        .map(&params, |(a1, a3)| evaluate_quaternion_fiber(a1, &zero, a3))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut top_jumps: Vec<u64> = reports.iter().filter_map(|r| r.top_jump).collect();
    top_jumps.sort_unstable();
    top_jumps.dedup();

    let u = |c: &FieldElement| LaurentPoly::monomial(c, -1);
    let mut equiramified = reports.iter().all(|r| r.connected);
    let mut steps = Vec::with_capacity(params.len());
    for (a1, a3) in &params {
        let (_, eq_v) = ascover::modify_cover(&u(&one), &u(a1), 2, 1, Rational::from_integer(1))?;
        let (_, eq_y) = ascover::modify_cover(&u(&one), &u(a3), 2, 1, Rational::new(3, 2))?;
        equiramified &= eq_v && eq_y;
        steps.push((
            AsCover::wild(2, u(&(a1 + &one)))?,
            AsCover::wild(2, u(a3))?,
        ));
    }
    let mut pairwise_non_isomorphic = true;
    for i in 0..steps.len() {
        for j in i + 1..steps.len() {
            let same_v = ascover::is_isomorphic(&steps[i].0, &steps[j].0)?.is_some();
            let same_a = ascover::is_isomorphic(&steps[i].1, &steps[j].1)?.is_some();
            pairwise_non_isomorphic &= !(same_v && same_a);
        }
    }

    let upper = lower_filtration_from_step_jumps(2, 1, &[1, 1, 3])?.lower_to_upper()?;
    let dims = dim_bounds(&reduce_sizes(&upper, &[vec![2, 2], vec![2]])?)?;
    Ok(FamilyReport {
        fibers: params.len(),
        top_jumps,
        equiramified,
        pairwise_non_isomorphic,
        bounds: (dims.lower_bound, dims.upper_bound),
    })
}

/// Pairs `(a1, a2)` whose top-equation leading coefficients change with
/// `a3` within the sweep.
pub fn a3_dependence(reports: &[FiberReport]) -> Vec<(FieldElement, FieldElement)> {
    let mut out: Vec<(FieldElement, FieldElement)> = Vec::new();
    for r in reports {
        let differs = reports.iter().any(|s| {
            s.a1 == r.a1 && s.a2 == r.a2 && (s.leading != r.leading || s.top_jump != r.top_jump)
        });
        if differs && !out.iter().any(|(a1, a2)| *a1 == r.a1 && *a2 == r.a2) {
            out.push((r.a1.clone(), r.a2.clone()));
        }
    }
    out
}
