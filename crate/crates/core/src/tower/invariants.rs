//! Genus and p-rank of a cover of the projective line.

use crate::error::{Error, Result};
use crate::ramfilt::{Numbering, RamFiltration};

/// Deuring–Shafarevich in the form used by [`p_rank_ds`].
pub const DS_VARIANT: &str =
    "gamma_Y - 1 = |P| (gamma_X - 1) + sum over branch points of (|P| / |P_x|) (|P_x| - 1)";

/// Genus of a Galois cover of the line totally ramified over one point,
/// from `2g - 2 = -2|I| + sum_{i >= 0} (|I_i| - 1)`.
pub fn genus_rh(total_order: u64, lower: &RamFiltration) -> Result<u64> {
    if lower.numbering() != Numbering::Lower {
        return Err(Error::InvalidFiltration(
            "genus needs the lower numbering".into(),
        ));
    }
    if lower.total_order() != total_order {
        return Err(Error::Inconsistent(format!(
            "group order {total_order} differs from the filtration's {}",
            lower.total_order()
        )));
    }
    lower.ensure_valid()?;
    let mut different = total_order as i64 - 1;
    let mut prev = 0i64;
    for b in lower.breaks() {
        if !b.jump.is_integer() {
            return Err(Error::Inconsistent(format!("lower jump {} is not an integer", b.jump)));
        }
        let j = b.jump.to_integer();
        different += (j - prev) * (b.order as i64 - 1);
        prev = j;
    }
    let two_g = different - 2 * total_order as i64 + 2;
    if two_g < 0 || two_g % 2 != 0 {
        return Err(Error::Inconsistent(format!(
            "Riemann-Hurwitz gives 2g = {two_g}"
        )));
    }
    Ok((two_g / 2) as u64)
}

/// p-rank of a `P`-cover, `P` a p-group, of a curve with p-rank
/// `base_p_rank`. `branch_orders` lists `|P_x|` per branch point.
pub fn p_rank_ds(p_part_order: u64, base_p_rank: u64, branch_orders: &[u64]) -> Result<u64> {
    let order = p_part_order as i64;
    let mut rhs = order * (base_p_rank as i64 - 1);
    for &px in branch_orders {
        if px == 0 || !p_part_order.is_multiple_of(px) {
            return Err(Error::Inconsistent(format!(
                "inertia order {px} does not divide {p_part_order}"
            )));
        }
        rhs += (p_part_order / px) as i64 * (px as i64 - 1);
    }
    let gamma = rhs + 1;
    if gamma < 0 {
        return Err(Error::Inconsistent(format!("p-rank would be {gamma}")));
    }
    Ok(gamma as u64)
}
