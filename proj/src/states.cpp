#include "sppt/states.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "sppt/decomposition.hpp"

namespace sppt {

const char* const rng_algorithm_id = "mt19937_64/box-muller/qr-haar v1";

namespace {

constexpr const char* kRngAlgorithm = "mt19937_64/box-muller/qr-haar v1";

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  double uniform() { return ((eng() >> 11) + 0.5) * 0x1p-53; }
  double sym() { return 2.0 * uniform() - 1.0; }
  double gauss() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  Complex cgauss() { return Complex(gauss(), gauss()) * M_SQRT1_2; }
  Matrix gauss_matrix(int r, int c) {
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = cgauss();
    return m;
  }
  Matrix haar(int n) {
    Matrix g = gauss_matrix(n, n);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
      Complex d = r(j, j);
      double a = std::abs(d);
      q.col(j) *= a > 0.0 ? d / a : Complex(1.0, 0.0);
    }
    return q;
  }
  Matrix psd(int n) {
    Matrix g = gauss_matrix(n, n);
    Matrix a = g.adjoint() * g;
    return a / a.trace().real();
  }
};

// Identity on the block's own coordinate, zero elsewhere.
std::vector<std::vector<std::vector<Matrix>>> canonical_grids(
    const DimensionProfile& profile) {
  const int blocks = profile.block_count();
  const int levels = profile.levels();
  const int n0 = profile.carrier_dim();
  std::vector<int> head(profile.dims.begin(), profile.dims.end() - 1);
  IndexSpace space(head);
  std::vector<std::vector<std::vector<Matrix>>> grids(blocks);
  for (int a = 0; a < blocks; ++a) {
    auto tuple = space.tuple(a);
    grids[a].resize(levels);
    for (int p = 0; p < levels; ++p) {
      grids[a][p].assign(head[p], Matrix::Zero(n0, n0));
      grids[a][p][tuple[p]] = Matrix::Identity(n0, n0);
    }
  }
  return grids;
}

DensityMatrix state_from_factor(const StructuredFactor& f) {
  DensityMatrix rho;
  rho.profile = f.profile;
  Matrix gram = f.X.adjoint() * f.X;
  double tr = gram.trace().real();
  if (tr <= 0.0) throw std::invalid_argument("factor has zero Gram trace");
  rho.entries = gram / tr;
  rho.normalized = true;
  return rho;
}

void check_commuting_normal(const std::vector<Matrix>& mats, double tol) {
  for (size_t i = 0; i < mats.size(); ++i) {
    for (size_t j = i; j < mats.size(); ++j) {
      double scale =
          std::max(1.0, mats[i].norm() * mats[j].norm());
      double c1 = commutator_unchecked(mats[i], mats[j]).norm() / scale;
      double c2 =
          commutator_unchecked(mats[i], Matrix(mats[j].adjoint())).norm() /
          scale;
      if (c1 > tol || c2 > tol)
        throw std::invalid_argument(
            "matrices are not mutually commuting normal (residual " +
            std::to_string(std::max(c1, c2)) + ")");
    }
  }
}

Matrix psd_sqrt(const Matrix& d, double tol) {
  Matrix h = 0.5 * (d + d.adjoint());
  if ((d - h).norm() > tol * std::max(1.0, d.norm()))
    throw std::invalid_argument("matrix is not hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  Vector root(es.eigenvalues().size());
  for (int i = 0; i < root.size(); ++i) {
    double ev = es.eigenvalues()(i);
    if (ev < -tol * scale)
      throw std::invalid_argument("matrix is not positive semidefinite");
    root(i) = std::sqrt(std::max(0.0, ev));
  }
  return es.eigenvectors() * root.asDiagonal() *
         es.eigenvectors().adjoint();
}

} // namespace

Matrix haar_unitary(int n, std::uint64_t seed) {
  Rng rng(seed);
  return rng.haar(n);
}

Matrix random_psd(int n, std::uint64_t seed) {
  Rng rng(seed);
  return rng.psd(n);
}

std::vector<Matrix> random_commuting_normal_family(int n, int count,
                                                   std::uint64_t seed) {
  Rng rng(seed);
  Matrix u = rng.haar(n);
  std::vector<Matrix> out;
  for (int k = 0; k < count; ++k) {
    Vector lam(n);
    for (int i = 0; i < n; ++i) lam(i) = rng.cgauss();
    out.push_back(u * lam.asDiagonal() * u.adjoint());
  }
  return out;
}

GeneratedState ha_state(double b) {
  if (!(b > 0.0 && b < 1.0))
    throw std::invalid_argument("parameter must lie strictly inside (0,1)");
  const double beta1 = std::sqrt((1.0 - b) / (2.0 * b));
  const double beta2 = std::sqrt((1.0 + b) / (2.0 * b));

  Matrix x1 = Matrix::Zero(5, 5);
  for (int i = 0; i < 4; ++i) x1(i, i) = 1.0;
  Matrix s = Matrix::Zero(5, 5);
  s(0, 1) = 1.0;
  s(0, 4) = beta1;
  s(1, 2) = 1.0;
  s(2, 3) = 1.0;
  s(3, 4) = beta2;
  s(4, 0) = beta2;
  s(4, 3) = beta1;

  DimensionProfile profile{{2, 5}};
  auto grids = canonical_grids(profile);
  grids[0][0][1] = s;
  StructuredFactor f = assemble_structured_factor(
      profile, {x1, Matrix::Zero(5, 5)}, grids);

  GeneratedState out;
  out.rho = state_from_factor(f);
  out.ground_truth.family = "ha";
  out.ground_truth.params["b"] = b;
  out.ground_truth.ppt = true;
  out.ground_truth.sppt = true;
  out.ground_truth.ssppt = false;
  out.ground_truth.separable = false;
  out.ground_truth.factor = std::move(f);
  out.ground_truth.has_factor = true;
  return out;
}

GeneratedState yuzhao_counterexample() {
  Vector v(8);
  v.setZero();
  v(0) = 1.0;
  v(6) = 1.0;
  GeneratedState out;
  out.rho.profile = DimensionProfile{{2, 2, 2}};
  out.rho.entries = (v * v.adjoint()) / v.squaredNorm();
  out.rho.normalized = true;
  out.ground_truth.family = "yuzhao";
  out.ground_truth.ppt = false;
  out.ground_truth.legacy_ssppt = true;
  out.ground_truth.separable = false;
  return out;
}

GeneratedState cq_state(const DimensionProfile& profile,
                        const std::vector<double>& weights,
                        const std::vector<Matrix>& blocks) {
  profile.validate();
  const int count = profile.block_count();
  const int n0 = profile.carrier_dim();
  if (static_cast<int>(weights.size()) != count ||
      static_cast<int>(blocks.size()) != count)
    throw std::invalid_argument("need one weight and one block per basis label");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("weights must sum to one");

  std::vector<Matrix> diag(count);
  for (int i = 0; i < count; ++i) {
    if (blocks[i].rows() != n0 || blocks[i].cols() != n0)
      throw std::invalid_argument("block dimension mismatch");
    if (std::abs(blocks[i].trace().real() - 1.0) > 1e-9)
      throw std::invalid_argument("blocks must have unit trace");
    DensityMatrix carrier;
    carrier.entries = weights[i] * blocks[i];
    carrier.profile = DimensionProfile{{n0}};
    diag[i] = block_cholesky(carrier); // also validates hermitian PSD
  }
  StructuredFactor f =
      assemble_structured_factor(profile, diag, canonical_grids(profile));

  GeneratedState out;
  out.rho = state_from_factor(f);
  out.ground_truth.family = "cq";
  out.ground_truth.ppt = true;
  out.ground_truth.sppt = true;
  out.ground_truth.ssppt = true;
  out.ground_truth.separable = true;
  out.ground_truth.factor = std::move(f);
  out.ground_truth.has_factor = true;
  return out;
}

GeneratedState random_cq(const DimensionProfile& profile, std::uint64_t seed) {
  profile.validate();
  Rng rng(seed);
  const int count = profile.block_count();
  const int n0 = profile.carrier_dim();
  std::vector<double> weights(count);
  double sum = 0.0;
  for (int i = 0; i < count; ++i) {
    weights[i] = rng.uniform() + 0.05;
    sum += weights[i];
  }
  for (double& w : weights) w /= sum;
  std::vector<Matrix> blocks(count);
  for (int i = 0; i < count; ++i) blocks[i] = rng.psd(n0);
  GeneratedState out = cq_state(profile, weights, blocks);
  out.ground_truth.family = "random-cq";
  out.ground_truth.algorithm = kRngAlgorithm;
  out.ground_truth.seed = seed;
  out.ground_truth.seeded = true;
  return out;
}

GeneratedState canonical_22n(const Matrix& b, const Matrix& c,
                             const Matrix& d) {
  const int n = static_cast<int>(d.rows());
  if (b.rows() != n || b.cols() != n || c.rows() != n || c.cols() != n ||
      d.cols() != n)
    throw std::invalid_argument("operator dimensions disagree");
  check_commuting_normal({b, c}, defaults::verdict_tol);
  Matrix root = psd_sqrt(d, defaults::validation_tol);

  DimensionProfile profile{{2, 2, n}};
  auto grids = canonical_grids(profile);
  grids[0][0][1] = c; // first-subsystem coupling
  grids[0][1][1] = b; // second-subsystem coupling
  std::vector<Matrix> diag = {root, Matrix::Zero(n, n), Matrix::Zero(n, n),
                              Matrix::Zero(n, n)};
  StructuredFactor f = assemble_structured_factor(profile, diag, grids);

  GeneratedState out;
  out.rho = state_from_factor(f);
  out.ground_truth.family = "canonical-22n";
  out.ground_truth.ppt = true;
  out.ground_truth.sppt = true;
  out.ground_truth.ssppt = true;
  out.ground_truth.separable = true;
  out.ground_truth.factor = std::move(f);
  out.ground_truth.has_factor = true;
  return out;
}

GeneratedState canonical_multipartite(
    const DimensionProfile& profile,
    const std::vector<std::vector<Matrix>>& families) {
  profile.validate();
  const int levels = profile.levels();
  const int n0 = profile.carrier_dim();
  if (static_cast<int>(families.size()) != levels)
    throw std::invalid_argument("need one family per leading subsystem");
  std::vector<Matrix> all;
  for (int p = 0; p < levels; ++p) {
    if (static_cast<int>(families[p].size()) != profile.dims[p])
      throw std::invalid_argument("family size must match the subsystem dimension");
    for (const Matrix& m : families[p]) {
      if (m.rows() != n0 || m.cols() != n0)
        throw std::invalid_argument("family member dimension mismatch");
      all.push_back(m);
    }
    if ((families[p][0] - Matrix::Identity(n0, n0)).norm() >
        defaults::verdict_tol * std::sqrt(static_cast<double>(n0)))
      throw std::invalid_argument("first member of each family must be the identity");
  }
  check_commuting_normal(all, defaults::verdict_tol);

  auto grids = canonical_grids(profile);
  for (int p = 0; p < levels; ++p)
    for (int j = 0; j < profile.dims[p]; ++j) grids[0][p][j] = families[p][j];
  std::vector<Matrix> diag(profile.block_count(), Matrix::Zero(n0, n0));
  diag[0] = Matrix::Identity(n0, n0);
  StructuredFactor f = assemble_structured_factor(profile, diag, grids);

  GeneratedState out;
  out.rho = state_from_factor(f);
  out.ground_truth.family = "canonical-multipartite";
  out.ground_truth.ppt = true;
  out.ground_truth.sppt = true;
  out.ground_truth.ssppt = true;
  out.ground_truth.separable = true;
  out.ground_truth.factor = std::move(f);
  out.ground_truth.has_factor = true;
  return out;
}

StructuredFactor pure_product_sppt_factor(const std::vector<Vector>& factors) {
  if (factors.size() < 2)
    throw std::invalid_argument("need at least two subsystem factors");
  DimensionProfile profile;
  for (const Vector& f : factors)
    profile.dims.push_back(static_cast<int>(f.size()));
  profile.validate();
  const int levels = profile.levels();
  const int n0 = profile.carrier_dim();

  // the Gram rows carry the conjugate of the state vector
  Vector w0 = factors.back().conjugate();
  Matrix x0 = Matrix::Zero(n0, n0);
  x0.row(0) = w0.transpose();

  auto grids = canonical_grids(profile);
  const int blocks = profile.block_count();
  for (int a = 0; a < blocks; ++a)
    for (int p = 0; p < levels; ++p)
      for (int j = 0; j < profile.dims[p]; ++j)
        grids[a][p][j] = Matrix::Zero(n0, n0);
  for (int p = 0; p < levels; ++p)
    for (int j = 0; j < profile.dims[p]; ++j)
      grids[0][p][j](0, 0) = std::conj(factors[p](j));

  std::vector<Matrix> diag(blocks, Matrix::Zero(n0, n0));
  diag[0] = x0;
  return assemble_structured_factor(profile, diag, grids);
}

GeneratedState pure_state(const Vector& v, const DimensionProfile& profile) {
  profile.validate();
  if (v.size() != profile.total_dim())
    throw std::invalid_argument("vector length does not match the profile");
  double n = v.norm();
  if (n <= 0.0) throw std::invalid_argument("zero vector");
  Vector vn = v / n;

  GeneratedState out;
  out.rho.profile = profile;
  out.rho.entries = vn * vn.adjoint();
  out.rho.normalized = true;
  out.ground_truth.family = "pure";

  auto fac = product_vector_factorize(vn, profile, defaults::verdict_tol);
  out.ground_truth.ppt = fac.product;
  out.ground_truth.separable = fac.product;
  if (fac.product) {
    out.ground_truth.sppt = true;
    out.ground_truth.ssppt = true;
    out.ground_truth.factor = pure_product_sppt_factor(fac.factors);
    out.ground_truth.has_factor = true;
  }
  return out;
}

GeneratedState bell_state() {
  Vector v(4);
  v.setZero();
  v(0) = M_SQRT1_2;
  v(3) = M_SQRT1_2;
  GeneratedState out = pure_state(v, DimensionProfile{{2, 2}});
  out.ground_truth.family = "bell";
  return out;
}

GeneratedState ghz_state() {
  Vector v(8);
  v.setZero();
  v(0) = M_SQRT1_2;
  v(7) = M_SQRT1_2;
  GeneratedState out = pure_state(v, DimensionProfile{{2, 2, 2}});
  out.ground_truth.family = "ghz";
  return out;
}

GeneratedState maximally_mixed(const DimensionProfile& profile) {
  profile.validate();
  const int n = profile.total_dim();
  GeneratedState out;
  out.rho.profile = profile;
  out.rho.entries = Matrix::Identity(n, n) / static_cast<double>(n);
  out.rho.normalized = true;
  out.ground_truth.family = "maximally-mixed";
  out.ground_truth.ppt = true;
  out.ground_truth.sppt = true;
  out.ground_truth.ssppt = true;
  out.ground_truth.separable = true;
  return out;
}

GeneratedState random_ssppt(const DimensionProfile& profile,
                            std::uint64_t seed) {
  profile.validate();
  Rng rng(seed);
  const int blocks = profile.block_count();
  const int levels = profile.levels();
  const int n0 = profile.carrier_dim();
  std::vector<int> head(profile.dims.begin(), profile.dims.end() - 1);
  IndexSpace space(head);

  auto grids = canonical_grids(profile);
  std::vector<Matrix> diag(blocks);
  for (int a = 0; a < blocks; ++a) {
    Matrix u = rng.haar(n0);
    auto tuple = space.tuple(a);
    for (int p = 0; p < levels; ++p) {
      for (int j = tuple[p] + 1; j < head[p]; ++j) {
        Vector lam(n0);
        for (int i = 0; i < n0; ++i) lam(i) = rng.cgauss();
        grids[a][p][j] = u * lam.asDiagonal() * u.adjoint();
      }
    }
    Matrix x = Matrix::Zero(n0, n0);
    for (int i = 0; i < n0; ++i) {
      x(i, i) = std::abs(rng.gauss()) + 0.2; // strictly positive pivots
      for (int j = i + 1; j < n0; ++j) x(i, j) = 0.3 * rng.cgauss();
    }
    diag[a] = x;
  }
  StructuredFactor f = assemble_structured_factor(profile, diag, grids);
  double scale = f.X.norm();
  for (Matrix& x : diag) x /= scale;
  f = assemble_structured_factor(profile, diag, grids);

  GeneratedState out;
  out.rho.profile = profile;
  out.rho.entries = f.X.adjoint() * f.X;
  out.rho.normalized = true;
  out.ground_truth.family = "random-ssppt";
  out.ground_truth.algorithm = kRngAlgorithm;
  out.ground_truth.seed = seed;
  out.ground_truth.seeded = true;
  out.ground_truth.ppt = true;
  out.ground_truth.sppt = true;
  out.ground_truth.ssppt = true;
  out.ground_truth.separable = true;
  out.ground_truth.factor = std::move(f);
  out.ground_truth.has_factor = true;
  return out;
}

GeneratedState random_ssppt_masked(const DimensionProfile& profile,
                                   const std::vector<int>& mask,
                                   std::uint64_t seed) {
  profile.validate();
  const int blocks = profile.block_count();
  if (static_cast<int>(mask.size()) != blocks)
    throw std::invalid_argument("mask length must equal the block count");
  int live = 0;
  for (int m : mask) live += (m != 0);
  if (live == 0) throw std::invalid_argument("mask disables every block");

  Rng rng(seed);
  const int levels = profile.levels();
  const int n0 = profile.carrier_dim();
  std::vector<int> head(profile.dims.begin(), profile.dims.end() - 1);
  IndexSpace space(head);

  auto grids = canonical_grids(profile);
  std::vector<Matrix> diag(blocks);
  for (int a = 0; a < blocks; ++a) {
    Matrix u = rng.haar(n0);
    auto tuple = space.tuple(a);
    for (int p = 0; p < levels; ++p) {
      for (int j = tuple[p] + 1; j < head[p]; ++j) {
        Vector lam(n0);
        for (int i = 0; i < n0; ++i) lam(i) = rng.cgauss();
        grids[a][p][j] = u * lam.asDiagonal() * u.adjoint();
      }
    }
    Matrix x = Matrix::Zero(n0, n0);
    for (int i = 0; i < n0; ++i) {
      x(i, i) = std::abs(rng.gauss()) + 0.2;
      for (int j = i + 1; j < n0; ++j) x(i, j) = 0.3 * rng.cgauss();
    }
    diag[a] = mask[a] ? x : Matrix::Zero(n0, n0);
  }
  StructuredFactor f = assemble_structured_factor(profile, diag, grids);
  double scale = f.X.norm();
  for (Matrix& x : diag) x /= scale;
  f = assemble_structured_factor(profile, diag, grids);

  GeneratedState out;
  out.rho.profile = profile;
  out.rho.entries = f.X.adjoint() * f.X;
  out.rho.normalized = true;
  out.ground_truth.family = "random-ssppt-masked";
  out.ground_truth.algorithm = kRngAlgorithm;
  out.ground_truth.seed = seed;
  out.ground_truth.seeded = true;
  out.ground_truth.ppt = true;
  out.ground_truth.sppt = true;
  out.ground_truth.ssppt = true;
  out.ground_truth.separable = true;
  out.ground_truth.factor = std::move(f);
  out.ground_truth.has_factor = true;
  double bits = 0.0;
  for (int a = 0; a < blocks; ++a)
    if (mask[a]) bits += std::ldexp(1.0, a);
  out.ground_truth.params["mask"] = bits;
  out.ground_truth.params["rank"] = static_cast<double>(live * n0);
  return out;
}

GeneratedState random_sppt_2xd(int d, const std::string& flavor,
                               std::uint64_t seed) {
  if (d < 3) throw std::invalid_argument("need carrier dimension at least 3");
  Rng rng(seed);
  Matrix x1, x2, s;
  GroundTruth gt;
  gt.family = "random-sppt-2xd";
  gt.algorithm = kRngAlgorithm;
  gt.seed = seed;
  gt.seeded = true;
  gt.params["d"] = static_cast<double>(d);

  if (flavor == "normal") {
    // normal coupling, rank-deficient first block sharing its support
    Matrix u = rng.haar(d - 1);
    Vector lam(d - 1);
    for (int i = 0; i < d - 1; ++i) lam(i) = rng.cgauss();
    s = Matrix::Zero(d, d);
    s.topLeftCorner(d - 1, d - 1) = u * lam.asDiagonal() * u.adjoint();
    Eigen::JacobiSVD<Matrix> svd(s);
    s *= 1.7 / svd.singularValues()(0);
    x1 = Matrix::Zero(d, d);
    for (int i = 0; i < d - 1; ++i) x1(i, i) = 0.4 + rng.uniform();
    x2 = 0.4 * rng.gauss_matrix(d, d);
    gt.expected_criterion = "normal";
    gt.sppt = true;
    gt.ssppt = true; // a normal coupling satisfies the commutator test outright
  } else if (flavor == "contractive") {
    // a non-normal corner whose commutator lives outside the first block
    s = Matrix::Zero(d, d);
    s(0, 1) = 1.0;
    Matrix u = rng.haar(d - 2);
    Vector lam(d - 2);
    for (int i = 0; i < d - 2; ++i) lam(i) = rng.cgauss();
    s.bottomRightCorner(d - 2, d - 2) = u * lam.asDiagonal() * u.adjoint();
    Eigen::JacobiSVD<Matrix> svd(s);
    s *= 0.9 / svd.singularValues()(0);
    x1 = Matrix::Zero(d, d);
    for (int i = 2; i < d; ++i) x1(i, i) = 0.4 + rng.uniform();
    x2 = 0.4 * rng.gauss_matrix(d, d);
    gt.expected_criterion = "contractive";
    gt.sppt = true;
  } else if (flavor == "a_gt_d") {
    // generic coupling breaks the transpose-factor equation, so only the
    // quadrant comparison fires; X2 absorbs the commutator excess to keep
    // every partial transpose positive, and S shrinks until A - D gains a
    // real margin
    x1 = Matrix::Identity(d, d) + 0.3 * rng.gauss_matrix(d, d);
    s = 0.35 * rng.gauss_matrix(d, d);
    const Matrix a = x1.adjoint() * x1;
    Eigen::SelfAdjointEigenSolver<Matrix> ea(a, Eigen::EigenvaluesOnly);
    const double amin = ea.eigenvalues()(0);
    for (int tries = 0; tries < 60; ++tries) {
      Matrix h =
          x1.adjoint() * (s * s.adjoint() - s.adjoint() * s) * x1;
      Eigen::SelfAdjointEigenSolver<Matrix> eh(h);
      Matrix excess = eh.eigenvectors() *
                      eh.eigenvalues().cwiseMax(0.0).asDiagonal() *
                      eh.eigenvectors().adjoint();
      Matrix p = excess + 0.1 * amin * Matrix::Identity(d, d);
      x2 = psd_sqrt(p, defaults::validation_tol);
      Matrix dd = x1.adjoint() * s.adjoint() * s * x1 + p;
      Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(a - dd),
                                               Eigen::EigenvaluesOnly);
      if (es.eigenvalues()(0) > 0.25 * amin) break;
      s *= 0.5;
    }
    gt.expected_criterion = "a-minus-d-pd";
    gt.sppt = false;
    gt.ppt = true;
  } else {
    throw std::invalid_argument("unknown flavor: " + flavor);
  }
  gt.separable = true;

  Matrix x = Matrix::Zero(2 * d, 2 * d);
  x.topLeftCorner(d, d) = x1;
  x.topRightCorner(d, d) = s * x1;
  x.bottomRightCorner(d, d) = x2;
  Matrix gram = x.adjoint() * x;

  GeneratedState out;
  out.rho.profile = DimensionProfile{{2, d}};
  out.rho.entries = gram / gram.trace().real();
  out.rho.normalized = true;
  out.ground_truth = std::move(gt);
  return out;
}

} // namespace sppt
