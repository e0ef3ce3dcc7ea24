//! Point counts by enumerating every affine pair.

use crate::error::Result;
use crate::weierstrass::{reduce_coefficients, WeierstrassModel};

/// #E_ns(F_p) by testing all p^2 pairs and both partial derivatives.
pub fn brute_force_count(model: &WeierstrassModel, p: u64) -> Result<u64> {
    let [a1, a2, a3, a4, a6] = reduce_coefficients(model, p)?.map(|v| v as i128);
    let p = p as i128;
    let mut n = 1;
    for x in 0..p {
        for y in 0..p {
            let f = y * y + a1 * x * y + a3 * y - x * x * x - a2 * x * x - a4 * x - a6;
            if f.rem_euclid(p) != 0 {
                continue;
            }
            let fx = (a1 * y - 3 * x * x - 2 * a2 * x - a4).rem_euclid(p);
            let fy = (2 * y + a1 * x + a3).rem_euclid(p);
            if fx != 0 || fy != 0 {
                n += 1;
            }
        }
    }
    Ok(n)
}
