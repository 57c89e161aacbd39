//! Dimension counts for equiramified deformations.

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{is_prime, multiplicative_order_mod, prime_power};
use crate::par::Execution;
use crate::ramfilt::{schmid_violations, ReducedFiltration, ReducedPiece};
use crate::rational::{int, Rational};

/// Ranges longer than this are split across threads under
/// [`Execution::Parallel`].
const PARALLEL_THRESHOLD: u64 = 1 << 14;

/// `n(A ⋊ mu_m, sigma) = #{l >= 1 : q ∤ l, l/gcd(l, q) <= m·sigma, l ≡ s_iota (mod m)}`.
pub fn n_count(q: u64, m: u64, s_iota: u64, sigma: Rational) -> Result<u64> {
    n_count_with(Execution::Sequential, q, m, s_iota, sigma)
}

pub fn n_count_with(exec: Execution, q: u64, m: u64, s_iota: u64, sigma: Rational) -> Result<u64> {
    let Some((p, _)) = prime_power(q) else {
        return Err(Error::InvalidDatum(format!("q = {q} is not a prime power")));
    };
    if m == 0 || m.is_multiple_of(p) {
        return Err(Error::InvalidDatum(format!("m = {m} must be positive and prime to p = {p}")));
    }
    if s_iota < 1 || s_iota > m {
        return Err(Error::InvalidDatum(format!("s_iota = {s_iota} outside [1, {m}]")));
    }
    if !sigma.is_positive() {
        return Err(Error::InvalidDatum(format!("sigma = {sigma} is not positive")));
    }
    // q ∤ l gives gcd(l, q) <= q/p, so l <= (q/p)·m·sigma.
    let bound = (sigma * int((q / p * m) as i64)).floor().to_integer();
    let bound = bound
        .to_u64()
        .ok_or_else(|| Error::InvalidDatum("enumeration bound overflows".into()))?;
    let limit = sigma * int(m as i64);
    let (num, den) = (*limit.numer() as u128, *limit.denom() as u128);
    let counted = |l: u64| -> u64 {
        if l.is_multiple_of(q) || l % m != s_iota % m {
            return 0;
        }
        let g = l.gcd(&q) as u128;
        // l/g <= num/den
        u64::from(l as u128 * den <= g * num)
    };
    let exec = if bound < PARALLEL_THRESHOLD {
        Execution::Sequential
    } else {
        exec
    };
    Ok(exec.sum_range(1..bound + 1, counted))
}

/// `sum over jumps of (sigma - floor(sigma/p))` for an abelian group given
/// by the upper jumps of its cyclic factors.
pub fn dim_abelian(p: u64, cyclic_factors: &[Vec<i64>]) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut total = 0u64;
    for factor in cyclic_factors {
        let jumps: Vec<Rational> = factor.iter().map(|&j| int(j)).collect();
        if let Some(v) = schmid_violations(p, &jumps).first() {
            return Err(Error::InvalidDatum(format!("factor {factor:?}: {}", v.message)));
        }
        total += factor
            .iter()
            .map(|&s| (s - Integer::div_floor(&s, &(p as i64))) as u64)
            .sum::<u64>();
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactDimension {
    pub value: u64,
    pub rule: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub n_list: Vec<u64>,
    pub lower_bound: u64,
    pub upper_bound: u64,
    pub exact: Option<ExactDimension>,
}

impl DimensionReport {
    /// Attaches an exact value, which must lie within the bounds.
    pub fn with_exact(mut self, value: u64, rule: &'static str) -> Result<Self> {
        if value < self.lower_bound || value > self.upper_bound {
            return Err(Error::Inconsistent(format!(
                "{rule} value {value} outside [{}, {}]",
                self.lower_bound, self.upper_bound
            )));
        }
        self.exact = Some(ExactDimension { value, rule });
        Ok(self)
    }
}

/// Bounds `n_r <= d <= sum n_i` from a reduced filtration. For `m = 1` and
/// pieces of size `p` the counts are checked against
/// `floor(sigma) - floor(sigma/p)`.
pub fn dim_bounds(reduced: &ReducedFiltration) -> Result<DimensionReport> {
    dim_bounds_with(Execution::Sequential, reduced)
}

pub fn dim_bounds_with(exec: Execution, reduced: &ReducedFiltration) -> Result<DimensionReport> {
    reduced.validate()?;
    let m = reduced.tame;
    let counts: Vec<Result<u64>> = exec.map(&reduced.pieces, |piece| {
        n_count_with(exec, piece.q, m, piece.s_iota, piece.sigma)
    });
    let n_list = counts.into_iter().collect::<Result<Vec<u64>>>()?;
    if m == 1 {
        for (piece, &n) in reduced.pieces.iter().zip(&n_list) {
            if prime_power(piece.q).is_some_and(|(_, a)| a == 1) {
                let p = int(piece.q as i64);
                let closed = piece.sigma.floor() - (piece.sigma / p).floor();
                if closed != int(n as i64) {
                    return Err(Error::Inconsistent(format!(
                        "count {n} for sigma = {} disagrees with floor formula {closed}",
                        piece.sigma
                    )));
                }
            }
        }
    }
    Ok(DimensionReport {
        lower_bound: n_list.last().copied().unwrap_or(0),
        upper_bound: n_list.iter().sum(),
        n_list,
        exact: None,
    })
}

/// `sum n(P_i ⋊ mu_m, sigma_i)`, exact when the quotients are irreducible
/// and the group is `(Z/p)^e ⋊ Z/m`.
pub fn dim_reducible(pieces: &[ReducedPiece], m: u64) -> Result<u64> {
    pieces
        .iter()
        .map(|piece| n_count(piece.q, m, piece.s_iota, piece.sigma))
        .sum()
}

/// `e / c` with `c` the multiplicative order of `p` mod `m`, i.e. the
/// degree of `F_p(zeta_m)`.
pub fn dim_ordinary(p: u64, e: u64, m: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 || m.is_multiple_of(p) {
        return Err(Error::InvalidDatum(format!("m = {m} must be positive and prime to p = {p}")));
    }
    let c = multiplicative_order_mod(p, m);
    if !e.is_multiple_of(c) {
        return Err(Error::Inconsistent(format!(
            "ordinary datum needs c = {c} to divide e = {e}"
        )));
    }
    Ok(e / c)
}

/// Reduced pieces of the ordinary datum: `e/c` pieces of size `p^c`, all
/// with jump `1/m` and `s_iota = 1`.
pub fn ordinary_pieces(p: u64, e: u64, m: u64) -> Result<Vec<ReducedPiece>> {
    let r = dim_ordinary(p, e, m)?;
    let c = multiplicative_order_mod(p, m) as u32;
    Ok((0..r)
        .map(|_| ReducedPiece {
            q: p.pow(c),
            sigma: Rational::new(1, m as i64),
            s_iota: 1,
        })
        .collect())
}
