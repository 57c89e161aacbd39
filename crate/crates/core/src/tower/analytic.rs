//! Lower jumps read off the equations, without series expansions.
//!
//! Step `k` has a computable conductor when its right-hand side is a
//! Laurent polynomial in one known uniformizer inverse: `x` for the first
//! step, or `v_{k-1}` when the previous right-hand side has a simple pole
//! (then `1/v_{k-1}` is a uniformizer one level up). Other towers get
//! `None`.

use crate::ascover;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::ramfilt::{Numbering, RamFiltration};
use crate::rational::{int, Rational};

use super::spec::TowerSpec;

/// Conductor of every step over the previous level, in that level's
/// valuation, or `None` if some step is outside the supported shapes.
pub fn analytic_step_conductors(spec: &TowerSpec) -> Result<Option<Vec<i64>>> {
    let field = spec.field();
    let p = spec.p();
    let mut out = Vec::with_capacity(spec.n_steps());
    // pole order of the previous step's equation in its own uniformizer
    let mut prev_pole: Option<i64> = None;
    for (k, rhs) in spec.rhs().iter().enumerate() {
        let (var, flip) = if k == 0 {
            (0, 1)
        } else {
            if prev_pole != Some(1) {
                return Ok(None);
            }
            (k, -1)
        };
        let Some(terms) = rhs.univariate(var) else {
            return Ok(None);
        };
        // in the uniformizer pi = 1/v_{k-1}, v_{k-1}^e = pi^(-e)
        let poly = LaurentPoly::from_raw_terms(field, terms.iter().map(|&(e, c)| (flip * e, c)));
        prev_pole = Some(poly.pole_order());
        match ascover::conductor(&poly, p) {
            Ok(j) => out.push(j as i64),
            Err(Error::Disconnected) => {
                return Err(Error::NotTotallyRamified {
                    step: spec.names()[k].clone(),
                    reason: "equation is trivial after reduction".into(),
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Some(out))
}

/// Lower filtration of a tower of degree-`p` steps with the given step
/// jumps over a tame base of degree `m`.
///
/// The quotient `Gal(L_k / L_{k-1})` stops at lower index
/// `psi_{L_n/L_k}(J_k)` of the whole group, and `|G_t|` is `p` to the
/// number of steps still alive at `t`.
pub fn lower_filtration_from_step_jumps(p: u64, m: u64, jumps: &[i64]) -> Result<RamFiltration> {
    let n = jumps.len();
    let mut breakpoints: Vec<Rational> = Vec::with_capacity(n);
    for k in 0..n {
        let mut b = int(jumps[k]);
        for &j in &jumps[k + 1..] {
            b = RamFiltration::cyclic(p, 1, Numbering::Lower, &[int(j)]).herbrand_psi(b)?;
        }
        breakpoints.push(b);
    }
    let mut distinct = breakpoints.clone();
    distinct.sort();
    distinct.dedup();
    let mut breaks = Vec::with_capacity(distinct.len());
    for b in distinct {
        if !b.is_integer() {
            return Err(Error::Inconsistent(format!("lower breakpoint {b} is not an integer")));
        }
        let alive = breakpoints.iter().filter(|&&x| x >= b).count() as u32;
        breaks.push((b.to_integer(), p.pow(alive)));
    }
    let total = m * p.pow(n as u32);
    let filtration = RamFiltration::lower(total, m, &breaks);
    filtration.ensure_valid()?;
    Ok(filtration)
}

/// Analytic lower filtration, when every step conductor is computable.
pub fn analytic_lower_jumps(spec: &TowerSpec) -> Result<Option<RamFiltration>> {
    match analytic_step_conductors(spec)? {
        Some(jumps) => lower_filtration_from_step_jumps(spec.p(), spec.m(), &jumps).map(Some),
        None => Ok(None),
    }
}
