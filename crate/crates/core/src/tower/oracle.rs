//! Lower ramification jumps from valuations of `g(pi) - pi`.
//!
//! The oracle expands every tower variable as a truncated Laurent series in
//! a uniformizer of the top field, built one step at a time. At a step
//! `v^p - v = R` with `R` of pole order `J` in the current uniformizer `t`:
//!
//! * while `p | J`, replace `v` by `v + d` with `d = -c^(1/p) t^(-J/p)`,
//!   which removes the leading term `c t^(-J)` of `R`;
//! * take the least `alpha >= 0` with `alpha·p ≡ 1 (mod J)` and
//!   `beta = (alpha·p - 1)/J`, so `s = t^alpha · v^beta` has valuation 1;
//! * writing `t = s^p W^beta` and `v = s^(-J) W^(-alpha)` with a unit `W`,
//!   the step equation becomes
//!   `W·G(s^p W^beta) = 1 - s^((p-1)J) W^(alpha(p-1))`, `G = t^J R`,
//!   which is solved by fixed-point iteration, gaining at least one
//!   coefficient per round.
//!
//! All earlier series are then re-expanded in `s`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, Raw};
use crate::ramfilt::RamFiltration;

use super::series::{TruncatedSeries, EXACT};
use super::spec::{Automorphism, GeneratorAction, TowerSpec};

/// Working precision used when the caller does not choose one.
pub const DEFAULT_PRECISION: usize = 48;

/// Retries double the precision up to this bound.
pub const MAX_PRECISION: usize = 1024;

/// How the uniformizer of one level is built from the previous one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniformizerStep {
    pub var: String,
    /// Pole order of the reduced right-hand side: the lower jump of this
    /// degree-`p` step.
    pub conductor: i64,
    pub alpha: i64,
    pub beta: i64,
    /// Terms `(e, d)` of the shift `v -> v + sum d·t^e`.
    pub shift: Vec<(i64, FieldElement)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub filtration: RamFiltration,
    pub steps: Vec<UniformizerStep>,
    /// `i(g) = val(g(pi) - pi)` for each group element, identity first
    /// (`None`).
    pub valuations: Vec<Option<i64>>,
    /// Working precision of the successful run.
    pub precision: usize,
    /// Smallest absolute precision among the differences `g(pi) - pi`.
    pub valid_precision: i64,
}

struct Level {
    /// `(alpha, beta)` and the shift as raw terms.
    alpha: i64,
    beta: i64,
    shift: Vec<(i64, Raw)>,
}

/// Lower filtration of the tower's Galois group, from the closure of the
/// generators. Retries with doubled precision when a valuation is not
/// determined.
pub fn oracle_lower_jumps(
    spec: &TowerSpec,
    generators: &[GeneratorAction],
    precision: usize,
) -> Result<OracleReport> {
    let group = spec.group(generators)?;
    let mut prec = precision.max(8);
    loop {
        match oracle_with_group(spec, &group, prec) {
            Err(Error::PrecisionExhausted { .. }) if prec < MAX_PRECISION => {
                prec = (prec * 2).min(MAX_PRECISION);
            }
            other => return other,
        }
    }
}

/// One run at a fixed precision over an already enumerated group.
pub fn oracle_with_group(
    spec: &TowerSpec,
    group: &[Automorphism],
    precision: usize,
) -> Result<OracleReport> {
    let field = spec.field();
    let f = &**field;
    let p = spec.p() as i64;
    let cap = precision as i64;
    let exhausted = |what: String| Error::PrecisionExhausted { precision, what };

    // Series of x, v_1, ... in the current uniformizer, and of the earlier
    // uniformizers t_0, t_1, ...
    let mut vars = vec![TruncatedSeries::variable(field)];
    let mut ts: Vec<TruncatedSeries> = Vec::new();
    let mut levels = Vec::new();
    let mut steps = Vec::new();

    for (k, rhs) in spec.rhs().iter().enumerate() {
        let name = &spec.names()[k];
        let mut r = rhs.eval_series(&vars, cap)?;
        let mut shift: Vec<(i64, Raw)> = Vec::new();
        let j = loop {
            let Some(v) = r.valuation() else {
                if r.precision() > 0 {
                    return Err(Error::NotTotallyRamified {
                        step: name.clone(),
                        reason: "right-hand side has no pole".into(),
                    });
                }
                return Err(exhausted(format!("pole order of the equation of {name}")));
            };
            if v >= 0 {
                return Err(Error::NotTotallyRamified {
                    step: name.clone(),
                    reason: format!("reduced right-hand side has valuation {v} >= 0"),
                });
            }
            let j = -v;
            if j % p != 0 {
                break j;
            }
            let c = r.leading_coeff().expect("nonzero");
            let d = f.neg(f.pth_root_pow(c, 1));
            let e = -j / p;
            // R + d^p t^(-J) - d t^e, and d^p = -c
            let dp = TruncatedSeries::monomial(field, f.raw_pow(d, p as u64), -j, EXACT);
            let lin = TruncatedSeries::monomial(field, d, e, EXACT);
            r = r.add(&dp).sub(&lin);
            shift.push((e, d));
        };
        let alpha = (0..j).find(|a| (a * p) % j == 1 % j).expect("p is prime to j");
        let beta = (alpha * p - 1) / j;
        let g = r.shift(j);
        let w = solve_unit(&g, p, j, alpha, beta, cap, precision)?;

        let s_p = TruncatedSeries::monomial(field, 1, p, EXACT);
        let t_old = s_p.mul(&w.powi(beta)?).truncate(cap);
        let v_prime = TruncatedSeries::monomial(field, 1, -j, EXACT).mul(&w.powi(-alpha)?);
        let v = v_prime.sub(&eval_shift(&shift, &t_old, cap)?).truncate(cap);

        vars = vars
            .iter()
            .map(|x| x.compose(&t_old, cap))
            .collect::<Result<Vec<_>>>()?;
        ts = ts
            .iter()
            .map(|x| x.compose(&t_old, cap))
            .collect::<Result<Vec<_>>>()?;
        ts.push(t_old);
        vars.push(v);

        steps.push(UniformizerStep {
            var: name.clone(),
            conductor: j,
            alpha,
            beta,
            shift: shift.iter().map(|&(e, d)| (e, field.element(d))).collect(),
        });
        levels.push(Level { alpha, beta, shift });
    }

    let pi = TruncatedSeries::variable(field);
    let mut valuations = Vec::with_capacity(group.len());
    let mut valid = EXACT;
    for g in group {
        if *g == spec.identity() {
            valuations.push(None);
            continue;
        }
        let image = image_of_uniformizer(spec, g, &vars, &levels, cap)?;
        let diff = image.sub(&pi);
        valid = valid.min(diff.precision());
        match diff.valuation() {
            Some(v) => valuations.push(Some(v)),
            None => {
                return Err(exhausted(
                    "valuation of g(pi) - pi for a nontrivial element".into(),
                ))
            }
        }
    }

    let filtration = filtration_from_valuations(spec, &valuations)?;
    Ok(OracleReport {
        filtration,
        steps,
        valuations,
        precision,
        valid_precision: valid,
    })
}

/// Solves `W·G(s^p W^beta) + s^((p-1)J) W^(alpha(p-1)) = 1` for a unit `W`.
fn solve_unit(
    g: &TruncatedSeries,
    p: i64,
    j: i64,
    alpha: i64,
    beta: i64,
    cap: i64,
    precision: usize,
) -> Result<TruncatedSeries> {
    let field = g.field();
    let g0 = g.coeff(0).filter(|&c| c != 0).ok_or_else(|| Error::PrecisionExhausted {
        precision,
        what: "leading coefficient of a step equation".into(),
    })?;
    let one = TruncatedSeries::one(field);
    let s_p = TruncatedSeries::monomial(field, 1, p, EXACT);
    let tail = TruncatedSeries::monomial(field, 1, (p - 1) * j, EXACT);
    let mut w = TruncatedSeries::constant(field, field.inv(g0)?, 1);
    loop {
        let arg = s_p.mul(&w.powi(beta)?).truncate(cap + p);
        let gw = g.compose(&arg, cap)?;
        let rhs = one.sub(&tail.mul(&w.powi(alpha * (p - 1))?));
        let next = rhs.mul(&gw.inverse()?).truncate(cap);
        if next.precision() <= w.precision() {
            return Ok(w);
        }
        w = next;
        if w.precision() >= cap {
            return Ok(w);
        }
    }
}

fn eval_shift(shift: &[(i64, Raw)], t: &TruncatedSeries, cap: i64) -> Result<TruncatedSeries> {
    let field = t.field();
    let mut total = TruncatedSeries::zero(field, EXACT);
    for &(e, d) in shift {
        total = total.add(&t.powi(e)?.scale(d));
    }
    Ok(total.truncate(cap))
}

/// `g(t_n)` as a series in `t_n`, following the uniformizer recipe.
fn image_of_uniformizer(
    spec: &TowerSpec,
    g: &Automorphism,
    vars: &[TruncatedSeries],
    levels: &[Level],
    cap: i64,
) -> Result<TruncatedSeries> {
    let mut gt = vars[0].scale(g.x_scale);
    for (k, level) in levels.iter().enumerate() {
        let gv = g.images[k].eval_series(vars, cap)?;
        let shifted = gv.add(&eval_shift(&level.shift, &gt, cap)?);
        gt = gt.powi(level.alpha)?.mul(&shifted.powi(level.beta)?).truncate(cap);
    }
    let _ = spec;
    Ok(gt)
}

/// `|I_c| = #{g : i(g) >= c + 1}`; breaks at the distinct positive values
/// of `i(g) - 1`.
fn filtration_from_valuations(
    spec: &TowerSpec,
    valuations: &[Option<i64>],
) -> Result<RamFiltration> {
    let mut jumps: Vec<i64> = valuations
        .iter()
        .flatten()
        .map(|i| i - 1)
        .filter(|&j| j >= 1)
        .collect();
    jumps.sort_unstable();
    jumps.dedup();
    let breaks: Vec<(i64, u64)> = jumps
        .iter()
        .map(|&j| {
            let count = valuations
                .iter()
                .filter(|v| v.is_none_or(|i| i > j))
                .count();
            (j, count as u64)
        })
        .collect();
    let filtration = RamFiltration::lower(spec.total_order(), spec.m(), &breaks);
    let violations = filtration.validate(crate::ramfilt::Structure::General);
    if let Some(v) = violations.first() {
        return Err(Error::Inconsistent(format!(
            "oracle produced an invalid filtration: {}",
            v.message
        )));
    }
    Ok(filtration)
}
