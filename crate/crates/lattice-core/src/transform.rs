//! The mutually inverse subset-lattice transforms.
//!
//! `mobius_transform` maps masked outputs to Harsanyi dividends,
//! `zeta_transform` maps dividends back to masked outputs:
//!
//! ```text
//! I(S) = sum_{T subset of S} (-1)^{|S|-|T|} v(T)      (Moebius)
//! v(T) = sum_{S subset of T} I(S)                     (zeta)
//! ```
//!
//! Both run in O(n * 2^n) by one in-place pass per variable. The literal
//! O(3^n) inclusion-exclusion sum is kept as `mobius_brute`, the
//! verification oracle.

use crate::error::{LatticeError, Result};
use crate::mask::BRUTE_MAX_VARS;
use crate::table::{InteractionVector, MaskedOutputTable};

/// One butterfly pass per variable bit. For each pair (m without j,
/// m with j) the closure updates the with-j element from the without-j
/// element. `xs.len()` must be a power of two.
fn lattice_pass(xs: &mut [f64], step: impl Fn(f64, &mut f64)) {
    let len = xs.len();
    debug_assert!(len.is_power_of_two());
    let mut bit = 1;
    while bit < len {
        for block in xs.chunks_exact_mut(bit * 2) {
            let (lo, hi) = block.split_at_mut(bit);
            for (l, h) in lo.iter().zip(hi.iter_mut()) {
                step(*l, h);
            }
        }
        bit <<= 1;
    }
}

/// Harsanyi dividends of a masked-output table, via the fast in-place
/// Moebius transform over the subset lattice.
pub fn mobius_transform(table: &MaskedOutputTable) -> Result<InteractionVector> {
    let mut xs = table.values().to_vec();
    lattice_pass(&mut xs, |l, h| *h -= l);
    InteractionVector::new(table.n(), xs)
}

/// Literal inclusion-exclusion evaluation of every dividend, O(3^n).
/// Verification oracle only; capped at n <= 16.
pub fn mobius_brute(table: &MaskedOutputTable) -> Result<InteractionVector> {
    let n = table.n();
    if n > BRUTE_MAX_VARS {
        return Err(LatticeError::BruteForceCap(n));
    }
    let values = table.values();
    let mut dividends = vec![0.0; values.len()];
    for s in 0..values.len() {
        let s_ones = (s as u32).count_ones();
        let mut acc = 0.0;
        // Enumerate T over all submasks of S, including the empty set.
        let mut t = s;
        loop {
            let sign = if (s_ones - (t as u32).count_ones()) % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            acc += sign * values[t];
            if t == 0 {
                break;
            }
            t = (t - 1) & s;
        }
        dividends[s] = acc;
    }
    InteractionVector::new(n, dividends)
}

/// Masked outputs reconstructed from dividends: `v(T) = sum_{S ⊆ T} I(S)`.
/// Exact inverse of [`mobius_transform`] up to accumulation rounding.
pub fn zeta_transform(iv: &InteractionVector) -> Result<MaskedOutputTable> {
    let mut xs = iv.dividends().to_vec();
    lattice_pass(&mut xs, |l, h| *h += l);
    MaskedOutputTable::new(iv.n(), xs)
}
