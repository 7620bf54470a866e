#include "sppt/core.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace sppt {

int DimensionProfile::total_dim() const {
  int n = 1;
  for (int d : dims) n *= d;
  return n;
}

int DimensionProfile::block_count() const {
  int n = 1;
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) n *= dims[k];
  return n;
}

void DimensionProfile::validate() const {
  if (dims.empty()) throw std::invalid_argument("dimension profile is empty");
  for (int d : dims)
    if (d < 1) throw std::invalid_argument("dimension profile entries must be >= 1");
}

std::string DimensionProfile::to_string() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (k) os << 'x';
    os << dims[k];
  }
  return os.str();
}

int linear_index(const DimensionProfile& profile, const MultiIndex& idx) {
  profile.validate();
  if (idx.entries.size() != profile.dims.size())
    throw std::invalid_argument("multi-index length does not match profile");
  int n = 0;
  for (std::size_t k = 0; k < profile.dims.size(); ++k) {
    const int i = idx.entries[k];
    if (i < 1 || i > profile.dims[k])
      throw std::invalid_argument("multi-index entry out of range");
    n = n * profile.dims[k] + (i - 1);
  }
  return n + 1;
}

MultiIndex inverse_linear_index(const DimensionProfile& profile, int n) {
  profile.validate();
  const int total = profile.total_dim();
  if (n < 1 || n > total) throw std::invalid_argument("linear index out of range");
  int r = n - 1;
  MultiIndex idx;
  idx.entries.resize(profile.dims.size());
  for (int k = static_cast<int>(profile.dims.size()) - 1; k >= 0; --k) {
    idx.entries[k] = r % profile.dims[k] + 1;
    r /= profile.dims[k];
  }
  return idx;
}

int IndexSpace::size() const {
  int n = 1;
  for (int d : dims) n *= d;
  return n;
}

std::vector<int> IndexSpace::tuple(int rank) const {
  std::vector<int> t(dims.size());
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    t[k] = rank % dims[k];
    rank /= dims[k];
  }
  return t;
}

int IndexSpace::rank(const std::vector<int>& t) const {
  int r = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) r = r * dims[k] + t[k];
  return r;
}

double DensityMatrix::max_norm() const {
  return entries.size() ? entries.cwiseAbs().maxCoeff() : 0.0;
}

double DensityMatrix::hermiticity_residual() const {
  return (entries - entries.adjoint()).norm();
}

double DensityMatrix::min_eigenvalue() const {
  if (entries.rows() == 0) return 0.0;
  Matrix h = 0.5 * (entries + entries.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void DensityMatrix::validate(double tol) const {
  profile.validate();
  const int n = profile.total_dim();
  if (entries.rows() != n || entries.cols() != n)
    throw std::invalid_argument("matrix size does not match dimension profile " +
                                profile.to_string());
  const double scale = std::max(1.0, max_norm());
  if (hermiticity_residual() > tol * scale * n)
    throw std::invalid_argument("matrix is not hermitian");
  if (min_eigenvalue() < -tol * scale * n)
    throw std::invalid_argument("matrix has a negative eigenvalue");
  if (normalized && std::abs(entries.trace() - Complex(1.0)) > 1e-6)
    throw std::invalid_argument("matrix trace is not 1 but the state is flagged normalized");
}

Matrix partial_transpose(const Matrix& m, const DimensionProfile& profile,
                         const std::vector<int>& subsystems) {
  profile.validate();
  const int n = profile.total_dim();
  if (m.rows() != n || m.cols() != n)
    throw std::invalid_argument("partial_transpose: matrix does not match profile");
  std::vector<char> flip(profile.dims.size(), 0);
  for (int s : subsystems) {
    if (s < 1 || s > profile.count())
      throw std::invalid_argument("partial_transpose: subsystem id out of range");
    flip[s - 1] = 1;
  }
  IndexSpace space(profile.dims);
  Matrix out(n, n);
  for (int r = 0; r < n; ++r) {
    std::vector<int> a = space.tuple(r);
    for (int c = 0; c < n; ++c) {
      std::vector<int> b = space.tuple(c);
      std::vector<int> ar = a, br = b;
      for (std::size_t k = 0; k < flip.size(); ++k)
        if (flip[k]) std::swap(ar[k], br[k]);
      out(r, c) = m(space.rank(ar), space.rank(br));
    }
  }
  return out;
}

DensityMatrix partial_transpose(const DensityMatrix& rho,
                                const std::vector<int>& subsystems) {
  DensityMatrix out = rho;
  out.entries = partial_transpose(rho.entries, rho.profile, subsystems);
  return out;
}

Matrix gamma_transpose(const Matrix& m, const DimensionProfile& profile, int k) {
  if (k < 0 || k > profile.count())
    throw std::invalid_argument("gamma_transpose: level out of range");
  std::vector<int> subs(k);
  for (int i = 0; i < k; ++i) subs[i] = i + 1;
  return partial_transpose(m, profile, subs);
}

PptReport is_ppt(const DensityMatrix& rho, double tol) {
  rho.profile.validate();
  const int d = rho.profile.count();
  PptReport report;
  report.min_eigenvalue = rho.min_eigenvalue();
  const double scale = std::max(1.0, rho.max_norm());
  const int reps = d >= 1 ? (1 << (d - 1)) : 1; // subsets of {1..d-1}
  for (int mask = 1; mask < reps; ++mask) {
    std::vector<int> subset;
    for (int k = 0; k < d - 1; ++k)
      if (mask & (1 << k)) subset.push_back(k + 1);
    Matrix pt = partial_transpose(rho.entries, rho.profile, subset);
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (pt + pt.adjoint()),
                                             Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    report.subset_eigenvalues.emplace_back(subset, lo);
    if (lo < report.min_eigenvalue || report.worst_subset.empty()) {
      report.min_eigenvalue = lo;
      report.worst_subset = subset;
    }
  }
  report.ppt = report.min_eigenvalue >= -tol * scale * rho.dim();
  return report;
}

Matrix commutator(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw std::invalid_argument("commutator: operands must be square and same size");
  return commutator_unchecked(a, b);
}

int numeric_rank(const Matrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  const double cut = tol * sv(0);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector kron_vec(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Matrix pseudo_inverse(const Matrix& m, double cutoff) {
  if (m.size() == 0) return m.adjoint();
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (smax > 0.0 && sv(i) > cutoff * smax) inv(i) = 1.0 / sv(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

} // namespace sppt
