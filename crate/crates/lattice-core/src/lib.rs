//! Exact computation over the subset lattice of input variables:
//! Harsanyi dividends via the fast Moebius transform, the inverse zeta
//! transform, salient-interaction selection, sparsity reports, and
//! per-order strength profiles.
//!
//! Dividends decompose a model's masked outputs into per-subset AND
//! effects: `v(x_T) = sum over S ⊆ T of I(S|x)` holds exactly for every
//! mask `T`, so the dividends are the unique additive account of what
//! each coalition of variables contributes.
//!
//! Subsets are little-endian bitmasks (variable `j` is bit `j`) and
//! double as array indices. The variable count is capped at 24, which a
//! caller must treat as a memory budget: every operation allocates 2^n
//! doubles.

pub mod error;
pub mod io;
pub mod mask;
pub mod order;
pub mod salient;
pub mod table;
pub mod transform;

pub use error::{LatticeError, Result};
pub use mask::{validate_var_count, SubsetMask, BRUTE_MAX_VARS, MAX_VARS};
pub use order::{order_strength, OrderProfile};
pub use salient::{
    reconstruct_salient, select_salient, sparsity_report, SalientSet, SparsityReport,
    DEFAULT_TAU_RATIO,
};
pub use table::{InteractionVector, MaskedOutputTable};
pub use transform::{mobius_brute, mobius_transform, zeta_transform};
