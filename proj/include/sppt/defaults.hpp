#pragma once

// Tolerance conventions, shared across the library.
//
// Validation thresholds (hermiticity, PSD, rank) are relative to the matrix
// max-norm; verdict thresholds apply to residuals that are already
// normalized by the natural scale of the quantity they measure.

namespace sppt::defaults {

// density-matrix validation: |min eig| and hermiticity, relative to max-norm
inline constexpr double validation_tol = 1e-9;

// SPPT/SSPPT verdicts, representability, decomposition checks (normalized residuals)
inline constexpr double verdict_tol = 1e-8;

// pseudo-inverse singular value cutoff, relative to sigma_max
inline constexpr double pinv_cutoff = 1e-10;

// Cholesky pivot threshold, relative to the largest initial diagonal entry
inline constexpr double pivot_rel = 1e-12;

// numeric rank cutoff, relative to sigma_max
inline constexpr double rank_tol = 1e-9;

// eigenvalue gap below which a cluster is treated as degenerate
inline constexpr double degeneracy_gap = 1e-8;

// strict positive-definiteness margin (min eig must exceed +this)
inline constexpr double pd_margin = 1e-10;

// decomposition rows with norm below this are dropped
inline constexpr double row_drop = 1e-12;

// default seed for randomized-but-reproducible internals
inline constexpr unsigned long long internal_seed = 0x5eedULL;

} // namespace sppt::defaults
