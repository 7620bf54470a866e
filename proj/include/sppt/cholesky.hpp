#pragma once

#include <vector>

#include "sppt/core.hpp"

namespace sppt {

// Factor of a PSD matrix rho = X^dag X with the layered block structure: for a
// profile (N_1, ..., N_d, N_0), X is indexed by full tuples alpha, beta over
// the first d dimensions, in N_0 x N_0 blocks, and
//
//   X[alpha, beta] = S^1_{alpha,j_1} S^2_{alpha,j_2} ... S^d_{alpha,j_d} X_alpha
//
// with S^p_{alpha,i_p} = 1 and S^p_{alpha,j_p} = 0 for j_p < i_p (canonical
// factors; generator-built factors may carry explicit diagonal S data).
struct StructuredFactor {
  DimensionProfile profile; // includes the carrier as the last entry
  Matrix X;                 // full factor, rho = X^dag X

  // diag_blocks[a]: X_alpha for the a-th tuple (lexicographic).
  std::vector<Matrix> diag_blocks;
  // smats[a][p][j]: S^{p+1}_{alpha, j+1}, each carrier x carrier.
  std::vector<std::vector<std::vector<Matrix>>> smats;

  bool canonical = false;     // produced by extract_structured_factor
  bool representable = true;  // all structure residuals within tolerance
  double max_block_residual = 0.0;      // worst ||predicted - actual||_F / ||X||_F
  double intermediate_offdiag = 0.0;    // block-diagonality defect of level-n S maps

  int levels() const { return profile.levels(); }
  int carrier() const { return profile.carrier_dim(); }
  int blocks() const { return profile.block_count(); }

  const Matrix& smat(int alpha, int p, int j) const { return smats[alpha][p][j]; }
  // prod_p S^p_{alpha, beta_p} for a full 0-based tuple beta.
  Matrix product_for(int alpha, const std::vector<int>& beta) const;
};

// Entrywise upper-triangular Cholesky factor of a PSD matrix, rho = X^dag X.
// Rows whose pivot falls below pivot_rel * max(diag) are zeroed; the input
// must be hermitian with min eigenvalue >= -tol * max_norm * n.
Matrix block_cholesky(const DensityMatrix& rho, double tol = defaults::validation_tol);

// Reads the layered structure off a factor X: diagonal blocks become X_alpha,
// single-axis neighbor blocks give minimum-norm S matrices, and every block of
// X is compared against the assembled prediction. Never throws on structure
// mismatch; the residuals and the representable flag carry the verdict.
StructuredFactor extract_structured_factor(const Matrix& X,
                                           const DimensionProfile& profile,
                                           double tol = defaults::verdict_tol);

// Builds X from explicit block data. smats must be complete grids (including
// diagonal and below-diagonal entries); the result's X is the assembled matrix.
StructuredFactor assemble_structured_factor(
    const DimensionProfile& profile, std::vector<Matrix> diag_blocks,
    std::vector<std::vector<std::vector<Matrix>>> smats);

// block_cholesky + extract_structured_factor.
StructuredFactor canonical_factor(const DensityMatrix& rho,
                                  double tol = defaults::verdict_tol);

// 2 x d view: X = [[X1, S X1], [0, X2]], rho = [[A, B], [B^dag, D]].
struct TwoByDBlocks {
  int d = 0;
  Matrix X1, S, X2;
  Matrix A, B, D;
  bool representable = true;
  double block_residual = 0.0; // ||S X1 - X12||_F / ||X||_F
  double sppt_residual = 0.0;  // ||X1^dag [S, S^dag] X1||_F, normalized
};

TwoByDBlocks two_by_d_blocks(const DensityMatrix& rho,
                             double tol = defaults::verdict_tol);
// Generator-side: quadrants recomputed from the given blocks.
TwoByDBlocks two_by_d_blocks_from(const Matrix& X1, const Matrix& S,
                                  const Matrix& X2,
                                  double tol = defaults::verdict_tol);

// Normalized SPPT residual of 2 x d blocks: X1^dag (S S^dag - S^dag S) X1 = 0.
double two_by_d_sppt_residual(const Matrix& X1, const Matrix& S);

} // namespace sppt
