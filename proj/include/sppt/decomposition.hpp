#pragma once

#include <cstdint>
#include <stdexcept>

#include "sppt/conditions.hpp"

namespace sppt {

// One unitary diagonalizing a family of commuting normal matrices.
struct SpectralBundle {
  Matrix u;
  std::vector<Vector> diagonals; // diag(u^dag M u), input order
  double offdiag_residual = 0.0; // worst remaining off-diagonal mass, normalized
};

// Eigendecomposes a random combination of the hermitian and anti-hermitian
// parts, recursing inside eigenvalue clusters closer than the degeneracy gap.
// Throws when the inputs fail the commuting-normal precondition.
SpectralBundle simultaneous_diagonalize(const std::vector<Matrix>& mats,
                                        double tol = defaults::verdict_tol,
                                        std::uint64_t seed = defaults::internal_seed);

struct SeparableTerm {
  double weight = 0.0;
  std::vector<Vector> factors; // one unit vector per profile entry
};

struct SeparableDecomposition {
  DimensionProfile profile;
  std::vector<SeparableTerm> terms;
  double product_residual = 0.0; // worst row-to-product mismatch

  Matrix reconstruction() const; // sum of weight * |x><x|
  double weight_sum() const;
};

struct NotSspptError : std::runtime_error {
  std::string witness; // violated commutator
  NotSspptError(const std::string& msg, std::string w)
      : std::runtime_error(msg), witness(std::move(w)) {}
};

// Rotates each diagonal block by the unitary diagonalizing its S family and
// reads the rows of the rotated factor as weighted product vectors.
SeparableDecomposition separable_decomposition_ssppt(
    const StructuredFactor& f, double tol = defaults::verdict_tol,
    std::uint64_t seed = defaults::internal_seed);

// 2x2xN route: diagonalizes {S1,T1} jointly and S2, T2 separately. Accepts
// exactly the same states as the generic path (the per-block families agree);
// kept as an independent cross-check.
SeparableDecomposition separable_decomposition_22n(
    const StructuredFactor& f, double tol = defaults::verdict_tol,
    std::uint64_t seed = defaults::internal_seed);

struct DecompositionReport {
  double frobenius_residual = 0.0;
  double weight_sum_error = 0.0;
  double max_factor_norm_error = 0.0;
  double min_weight = 0.0;
  bool ok = false;
};

DecompositionReport verify_decomposition(const SeparableDecomposition& dec,
                                         const DensityMatrix& rho,
                                         double tol = defaults::verdict_tol);

struct ProductFactorization {
  bool product = false;
  std::vector<Vector> factors; // unit, first nonzero entry real positive
  double worst_ratio = 0.0;    // max sigma_2/sigma_1 over the cuts
};

// Sequential rank-1 splitting across each subsystem cut.
ProductFactorization product_vector_factorize(
    const Vector& v, const DimensionProfile& profile,
    double tol = defaults::verdict_tol);

} // namespace sppt
