#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sppt/defaults.hpp"

namespace sppt {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Subsystem dimensions N_1 x ... x N_d. Structured-factor operations treat
// the last entry as the carrier dimension N_0.
struct DimensionProfile {
  std::vector<int> dims;

  DimensionProfile() = default;
  DimensionProfile(std::initializer_list<int> d) : dims(d) {}
  explicit DimensionProfile(std::vector<int> d) : dims(std::move(d)) {}

  int count() const { return static_cast<int>(dims.size()); }
  int total_dim() const;
  int carrier_dim() const { return dims.back(); }
  int block_count() const; // product of all dims except the carrier
  int levels() const { return count() - 1; }
  void validate() const; // throws std::invalid_argument
  bool operator==(const DimensionProfile&) const = default;
  std::string to_string() const; // "2x2x3"
};

// 1-based subsystem indices (i_1, ..., i_d), lexicographic order.
struct MultiIndex {
  std::vector<int> entries;
};

// Row-major linearization, 1-based on both sides:
//   n = sum_k (i_k - 1) * prod_{l>k} N_l  + 1
int linear_index(const DimensionProfile& profile, const MultiIndex& idx);
MultiIndex inverse_linear_index(const DimensionProfile& profile, int n);

// 0-based tuple enumeration over a dimension list, lexicographic.
struct IndexSpace {
  std::vector<int> dims;
  explicit IndexSpace(std::vector<int> d) : dims(std::move(d)) {}
  int size() const;
  std::vector<int> tuple(int rank) const;
  int rank(const std::vector<int>& t) const;
};

struct DensityMatrix {
  Matrix entries;
  DimensionProfile profile;
  bool normalized = true; // trace expected to be 1

  int dim() const { return static_cast<int>(entries.rows()); }
  double trace_real() const { return entries.trace().real(); }
  double max_norm() const;
  double hermiticity_residual() const; // ||M - M^dag||_F
  double min_eigenvalue() const;
  // Throws std::invalid_argument on shape mismatch, non-hermiticity,
  // negative eigenvalues beyond tol*max_norm, or trace far from 1 when
  // the normalized flag is set.
  void validate(double tol = defaults::validation_tol) const;
};

// Partial transpose over the listed subsystems (1-based ids). Pure entry
// permutation; exact. An empty list is the identity.
Matrix partial_transpose(const Matrix& m, const DimensionProfile& profile,
                         const std::vector<int>& subsystems);
DensityMatrix partial_transpose(const DensityMatrix& rho,
                                const std::vector<int>& subsystems);

// Gamma_k = transpose over subsystems {1, ..., k}.
Matrix gamma_transpose(const Matrix& m, const DimensionProfile& profile, int k);

struct PptReport {
  bool ppt = true;
  double min_eigenvalue = 0.0;       // most negative over all tested subsets
  std::vector<int> worst_subset;     // subset achieving it
  std::vector<std::pair<std::vector<int>, double>> subset_eigenvalues;
};

// Checks every inequivalent partial transpose (representatives: nonempty
// subsets not containing the last subsystem, 2^(d-1)-1 of them; complements
// give globally transposed matrices with identical spectra).
PptReport is_ppt(const DensityMatrix& rho, double tol = defaults::validation_tol);

inline Matrix commutator_unchecked(const Matrix& a, const Matrix& b) { return a * b - b * a; }
Matrix commutator(const Matrix& a, const Matrix& b); // shape-checked

int numeric_rank(const Matrix& m, double tol = defaults::rank_tol);

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron_vec(const Vector& a, const Vector& b);

// Moore-Penrose pseudo-inverse; singular values <= cutoff*sigma_max dropped.
Matrix pseudo_inverse(const Matrix& m, double cutoff = defaults::pinv_cutoff);

// Hermitian-part eigenvalues, ascending.
Eigen::VectorXd hermitian_eigenvalues(const Matrix& m);

} // namespace sppt
