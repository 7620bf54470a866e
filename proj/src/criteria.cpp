#include "sppt/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "sppt/conditions.hpp"
#include "sppt/decomposition.hpp"

namespace sppt {
namespace {

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

Vector unit(const Vector& v) {
  double n = v.norm();
  return n > 0.0 ? Vector(v / n) : v;
}

// Orthonormal basis of the column space, singular values above rank_tol.
Matrix column_space(const Matrix& m) {
  if (m.size() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  double cut = defaults::rank_tol * (sv.size() ? sv(0) : 0.0);
  int r = 0;
  while (r < sv.size() && sv(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

double projection_defect(const Matrix& q, const Vector& v) {
  // q has orthonormal columns
  Vector res = v - q * (q.adjoint() * v);
  return res.norm();
}

double min_hermitian_eigenvalue(const Matrix& m) {
  Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// ---- product vector search -------------------------------------------------

// Complement pencil of a subspace V of C^2 (x) C^d: columns of C span the
// orthogonal complement, and (1,t)(x)y lies in V iff (A + tB)y = 0.
struct RangePencil {
  int d = 0;
  int m = 0; // complement dimension
  Matrix a, b;
};

RangePencil make_pencil(const std::vector<Vector>& basis) {
  if (basis.empty()) throw std::invalid_argument("empty basis");
  const int total = static_cast<int>(basis[0].size());
  if (total % 2 != 0 || total == 0)
    throw std::invalid_argument("basis vectors are not 2 x d shaped");
  const int d = total / 2;
  Matrix bm(total, static_cast<int>(basis.size()));
  for (int j = 0; j < bm.cols(); ++j) {
    if (basis[j].size() != total)
      throw std::invalid_argument("basis vectors have mixed lengths");
    bm.col(j) = basis[j];
  }
  Eigen::JacobiSVD<Matrix> svd(bm, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  double cut = defaults::rank_tol * (sv.size() ? sv(0) : 0.0);
  int rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  if (rank < bm.cols())
    throw std::invalid_argument("basis is not linearly independent");
  RangePencil p;
  p.d = d;
  p.m = total - rank;
  Matrix cadj = svd.matrixU().rightCols(p.m).adjoint(); // m x 2d
  p.a = cadj.leftCols(d);
  p.b = cadj.rightCols(d);
  return p;
}

Vector smallest_right_singular_vector(const Matrix& m, double* sigma_min) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int k = static_cast<int>(m.cols()) - 1;
  if (sigma_min) {
    *sigma_min = (sv.size() && sv.size() == m.cols()) ? sv(sv.size() - 1) : 0.0;
  }
  return svd.matrixV().col(k);
}

// Membership residual of (1,t)(x)y against the pencil, y unit.
double pencil_residual(const RangePencil& p, const Complex& t, const Vector& y) {
  if (p.m == 0) return 0.0;
  double xn = std::sqrt(1.0 + std::norm(t));
  return ((p.a + t * p.b) * y).norm() / xn;
}

Complex refine_parameter(const RangePencil& p, Complex t, Vector& y) {
  for (int it = 0; it < 40; ++it) {
    double sig = 0.0;
    y = smallest_right_singular_vector(p.a + t * p.b, &sig);
    Vector av = p.a * y;
    Vector bv = p.b * y;
    double bn = bv.squaredNorm();
    if (bn < 1e-300) break;
    Complex tn = -bv.dot(av) / bn; // minimizes ||Ay + tBy||
    if (std::abs(tn - t) <= 1e-15 * std::max(1.0, std::abs(tn))) {
      t = tn;
      break;
    }
    t = tn;
  }
  y = smallest_right_singular_vector(p.a + t * p.b, nullptr);
  return t;
}

std::vector<Complex> det_poly_coeffs(const RangePencil& p, std::uint64_t seed,
                                     double* sample_scale) {
  const int np = p.d + 1;
  std::mt19937_64 eng(seed);
  auto su = [&eng]() {
    double u = ((eng() >> 11) + 0.5) * 0x1p-53;
    return 2.0 * u - 1.0;
  };
  Matrix g(p.d, p.m);
  for (int i = 0; i < p.d; ++i)
    for (int j = 0; j < p.m; ++j) g(i, j) = Complex(su(), su());
  Matrix vand(np, np);
  Vector rhs(np);
  double scale = 0.0;
  for (int k = 0; k < np; ++k) {
    Complex t = std::polar(1.0, 2.0 * M_PI * k / np);
    rhs(k) = Matrix(g * (p.a + t * p.b)).determinant();
    scale = std::max(scale, std::abs(rhs(k)));
    Complex pw = 1.0;
    for (int j = 0; j < np; ++j) {
      vand(k, j) = pw;
      pw *= t;
    }
  }
  if (sample_scale) *sample_scale = scale;
  Vector c = vand.colPivHouseholderQr().solve(rhs);
  return std::vector<Complex>(c.data(), c.data() + c.size());
}

std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs) {
  double maxc = 0.0;
  for (const auto& c : coeffs) maxc = std::max(maxc, std::abs(c));
  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg > 0 && std::abs(coeffs[deg]) <= 1e-10 * maxc) --deg;
  std::vector<Complex> roots;
  if (deg == 0) return roots;
  Matrix comp = Matrix::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -coeffs[i] / coeffs[deg];
  Eigen::ComplexEigenSolver<Matrix> es(comp);
  for (int i = 0; i < deg; ++i) roots.push_back(es.eigenvalues()(i));
  return roots;
}

Vector hit_vector(const ProductVectorHit& h) {
  return unit(kron_vec(h.x, h.y));
}

// det(G1 (A + tB) G2) for random compressions to the given size; degree <=
// size, sampled on roots of unity like the full determinant polynomial.
std::vector<Complex> compressed_det_coeffs(const RangePencil& p, int size,
                                           std::uint64_t seed,
                                           double* sample_scale) {
  const int np = size + 1;
  std::mt19937_64 eng(seed);
  auto su = [&eng]() {
    double u = ((eng() >> 11) + 0.5) * 0x1p-53;
    return 2.0 * u - 1.0;
  };
  Matrix g1(size, p.m), g2(p.d, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < p.m; ++j) g1(i, j) = Complex(su(), su());
  for (int i = 0; i < p.d; ++i)
    for (int j = 0; j < size; ++j) g2(i, j) = Complex(su(), su());
  Matrix vand(np, np);
  Vector rhs(np);
  double scale = 0.0;
  for (int k = 0; k < np; ++k) {
    Complex t = std::polar(1.0, 2.0 * M_PI * k / np);
    rhs(k) = Matrix(g1 * (p.a + t * p.b) * g2).determinant();
    scale = std::max(scale, std::abs(rhs(k)));
    Complex pw = 1.0;
    for (int j = 0; j < np; ++j) {
      vand(k, j) = pw;
      pw *= t;
    }
  }
  if (sample_scale) *sample_scale = scale;
  Vector c = vand.colPivHouseholderQr().solve(rhs);
  return std::vector<Complex>(c.data(), c.data() + c.size());
}

// Minimal-degree polynomial solution Y(t) = sum_k y_k t^k of
// (A + tB) Y(t) = 0. Coefficient conditions: A y_0 = 0, A y_k + B y_{k-1} = 0,
// B y_eps = 0, stacked into one kernel problem per candidate degree.
// chain_count reports how many independent chains live at the minimal degree.
std::vector<Vector> pencil_kernel_chain(const RangePencil& p,
                                        int* chain_count) {
  if (chain_count) *chain_count = 0;
  if (p.m == 0) return {};
  double scale = std::max(1.0, std::max(p.a.norm(), p.b.norm()));
  for (int eps = 0; eps < p.d; ++eps) {
    const int rows = p.m * (eps + 2);
    const int cols = p.d * (eps + 1);
    Matrix k = Matrix::Zero(rows, cols);
    for (int i = 0; i <= eps; ++i) {
      k.block(p.m * i, p.d * i, p.m, p.d) = p.a;
      k.block(p.m * (i + 1), p.d * i, p.m, p.d) = p.b;
    }
    Eigen::JacobiSVD<Matrix> svd(k, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double cut = 1e-10 * std::max(scale, sv.size() ? sv(0) : 0.0);
    int rank = 0;
    while (rank < sv.size() && sv(rank) > cut) ++rank;
    int nullity = cols - rank;
    if (nullity == 0) continue;
    if (chain_count) *chain_count = nullity;
    Vector flat = svd.matrixV().col(cols - 1);
    std::vector<Vector> chain(eps + 1);
    for (int i = 0; i <= eps; ++i) chain[i] = flat.segment(p.d * i, p.d);
    return chain;
  }
  return {};
}

std::vector<Complex> poly_mul(const std::vector<Complex>& a,
                              const std::vector<Complex>& b) {
  std::vector<Complex> out(a.size() + b.size() - 1, Complex(0.0, 0.0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

double poly_scale(const std::vector<Complex>& a) {
  double m = 0.0;
  for (const auto& c : a) m = std::max(m, std::abs(c));
  return m;
}

} // namespace

std::string to_string(Conclusion c) {
  switch (c) {
    case Conclusion::separable: return "separable";
    case Conclusion::entangled: return "entangled";
    default: return "undetermined";
  }
}

ProductVectorSearch product_vectors_in_range_2xd(
    const std::vector<Vector>& basis, double tol) {
  RangePencil p = make_pencil(basis);
  ProductVectorSearch out;
  if (p.m < p.d) {
    out.continuum = true;
    out.note = "complement dimension " + std::to_string(p.m) +
               " below " + std::to_string(p.d) +
               ", every parameter admits a solution";
    return out;
  }

  double pencil_scale = std::max(1.0, std::max(p.a.norm(), p.b.norm()));
  std::vector<Complex> candidates;
  bool nonzero_poly = false;
  for (std::uint64_t attempt = 0; attempt < 3; ++attempt) {
    double scale = 0.0;
    auto coeffs =
        det_poly_coeffs(p, 0x9e3779b97f4a7c15ull + attempt, &scale);
    if (scale <= 1e-13 * std::pow(pencil_scale, p.d)) continue;
    nonzero_poly = true;
    candidates = polynomial_roots(coeffs);
    break;
  }
  if (!nonzero_poly) {
    out.continuum = true;
    out.note = "determinant polynomial vanishes identically";
    return out;
  }

  for (const Complex& root : candidates) {
    Vector y;
    Complex t = refine_parameter(p, root, y);
    double res = pencil_residual(p, t, y);
    if (res > tol) continue;
    ProductVectorHit h;
    h.t = t;
    h.x = Vector(2);
    h.x << 1.0, t;
    h.x = unit(h.x);
    h.y = unit(y);
    h.membership_residual = res;
    out.hits.push_back(std::move(h));
  }

  {
    double sig = 0.0;
    Vector y = smallest_right_singular_vector(p.b, &sig);
    double res = (p.b * y).norm();
    if (res <= tol * std::max(1.0, p.b.norm())) {
      ProductVectorHit h;
      h.at_infinity = true;
      h.x = Vector(2);
      h.x << 0.0, 1.0;
      h.y = unit(y);
      h.membership_residual = res;
      out.hits.push_back(std::move(h));
    }
  }

  // deduplicate by overlap of the full product vectors, keep the better residual
  std::vector<ProductVectorHit> kept;
  for (auto& h : out.hits) {
    Vector v = hit_vector(h);
    bool dup = false;
    for (auto& k : kept) {
      if (std::abs(hit_vector(k).dot(v)) >= 1.0 - 1e-8) {
        dup = true;
        if (h.membership_residual < k.membership_residual) k = h;
        break;
      }
    }
    if (!dup) kept.push_back(h);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& l, const auto& r) {
    if (l.at_infinity != r.at_infinity) return r.at_infinity;
    if (l.t.real() != r.t.real()) return l.t.real() < r.t.real();
    return l.t.imag() < r.t.imag();
  });
  out.hits = std::move(kept);
  return out;
}

std::vector<CriterionResult> criterion_battery_2xd(const TwoByDBlocks& blk,
                                                   double tol) {
  std::vector<CriterionResult> out;
  const bool gate = blk.representable && blk.sppt_residual <= tol;
  std::string gate_note =
      !blk.representable
          ? "blocks are not structure-representable (residual " +
                sci(blk.block_residual) + ")"
          : "transpose-factor equation residual " + sci(blk.sppt_residual) +
                " exceeds tolerance";

  auto push = [&out](CriterionResult r) { out.push_back(std::move(r)); };
  auto push_gated = [&](CriterionResult r) {
    if (!gate) {
      r.conclusion = Conclusion::undetermined;
      r.evidence = "precondition not met: " + gate_note;
      r.values.clear();
    }
    out.push_back(std::move(r));
  };

  {
    CriterionResult r;
    r.criterion_id = "small-dimension";
    r.values = {static_cast<double>(blk.d)};
    if (blk.d <= 4) {
      r.conclusion = Conclusion::separable;
      r.evidence = "d = " + std::to_string(blk.d) + " <= 4";
    } else {
      r.evidence = "d = " + std::to_string(blk.d) + " > 4";
    }
    push_gated(std::move(r));
  }
  {
    CriterionResult r;
    r.criterion_id = "full-rank-x1";
    int rk = numeric_rank(blk.X1);
    r.values = {static_cast<double>(rk)};
    if (rk == blk.d) {
      r.conclusion = Conclusion::separable;
      r.evidence = "rank X1 = " + std::to_string(rk) + " = d";
    } else {
      r.evidence = "rank X1 = " + std::to_string(rk) + " < d";
    }
    push_gated(std::move(r));
  }
  {
    CriterionResult r;
    r.criterion_id = "contractive";
    double smax = 0.0;
    if (blk.S.size() > 0) {
      Eigen::JacobiSVD<Matrix> svd(blk.S);
      smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    }
    r.values = {smax};
    if (smax <= 1.0 + tol) {
      r.conclusion = Conclusion::separable;
      r.evidence = "largest singular value of S is " + sci(smax);
    } else {
      r.evidence = "largest singular value of S is " + sci(smax) + " > 1";
    }
    push_gated(std::move(r));
  }
  {
    CriterionResult r;
    r.criterion_id = "normal";
    double res = commutator_unchecked(blk.S, Matrix(blk.S.adjoint())).norm() /
                 std::max(1.0, blk.S.norm() * blk.S.norm());
    r.values = {res};
    if (res <= tol) {
      r.conclusion = Conclusion::separable;
      r.evidence = "[S, S*] residual " + sci(res);
    } else {
      r.evidence = "[S, S*] residual " + sci(res) + " exceeds tolerance";
    }
    push_gated(std::move(r));
  }
  {
    CriterionResult r;
    r.criterion_id = "range-inclusion";
    Matrix q = column_space(blk.X1);
    Matrix rs = blk.S - q * (q.adjoint() * blk.S);
    Matrix rsd = Matrix(blk.S.adjoint()) - q * (q.adjoint() * blk.S.adjoint());
    double sres = rs.norm() / std::max(1.0, blk.S.norm());
    double sdres = rsd.norm() / std::max(1.0, blk.S.norm());
    r.values = {sres, sdres};
    double best = std::min(sres, sdres);
    if (best <= tol) {
      r.conclusion = Conclusion::separable;
      r.evidence = std::string("range of ") +
                   (sres <= sdres ? "S" : "S*") +
                   " lies inside the range of X1 (defect " + sci(best) + ")";
    } else {
      r.evidence = "range defects " + sci(sres) + " and " + sci(sdres);
    }
    push_gated(std::move(r));
  }
  {
    // premised on positivity of the swapped-block matrix (the partial
    // transpose in block form); with A - D positive definite that premise
    // is exactly what lets the quadrant comparison conclude
    CriterionResult r;
    r.criterion_id = "a-minus-d-pd";
    Matrix swapped(2 * blk.d, 2 * blk.d);
    swapped.topLeftCorner(blk.d, blk.d) = blk.A;
    swapped.topRightCorner(blk.d, blk.d) = blk.B.adjoint();
    swapped.bottomLeftCorner(blk.d, blk.d) = blk.B;
    swapped.bottomRightCorner(blk.d, blk.d) = blk.D;
    double pev = min_hermitian_eigenvalue(swapped);
    if (pev < -tol) {
      r.evidence =
          "precondition not met: a partial transpose has eigenvalue " +
          sci(pev);
      push(std::move(r));
    } else {
      double ev = min_hermitian_eigenvalue(blk.A - blk.D);
      r.values = {ev};
      if (ev > defaults::pd_margin) {
        r.conclusion = Conclusion::separable;
        r.evidence = "A - D positive definite, min eigenvalue " + sci(ev);
      } else {
        r.evidence = "min eigenvalue of A - D is " + sci(ev);
      }
      push(std::move(r));
    }
  }
  {
    // splits rho into a Toeplitz summand and a diagonal remainder; sound
    // only when the Toeplitz summand is itself positive, so that part is
    // verified alongside the contraction gap
    CriterionResult r;
    r.criterion_id = "relaxed-contraction";
    if (!blk.representable) {
      r.evidence = "precondition not met: " + gate_note;
    } else {
      Matrix c = blk.X1.adjoint() * blk.S.adjoint() * blk.S * blk.X1;
      Matrix b = blk.X1.adjoint() * blk.S * blk.X1;
      Matrix toeplitz(2 * blk.d, 2 * blk.d);
      toeplitz.topLeftCorner(blk.d, blk.d) = c;
      toeplitz.topRightCorner(blk.d, blk.d) = b;
      toeplitz.bottomLeftCorner(blk.d, blk.d) = b.adjoint();
      toeplitz.bottomRightCorner(blk.d, blk.d) = c;
      double tev = min_hermitian_eigenvalue(toeplitz);
      if (tev < -tol * std::max(1.0, toeplitz.norm())) {
        r.evidence =
            "precondition not met: the Toeplitz summand has eigenvalue " +
            sci(tev);
      } else {
        Matrix m = Matrix(blk.X1.adjoint() * blk.X1) - c;
        double ev = min_hermitian_eigenvalue(m);
        r.values = {ev};
        if (ev > defaults::pd_margin) {
          r.conclusion = Conclusion::separable;
          r.evidence = "X1*X1 - X1*S*SX1 positive definite, min eigenvalue " +
                       sci(ev);
        } else {
          r.evidence = "min eigenvalue of X1*X1 - X1*S*SX1 is " + sci(ev);
        }
      }
    }
    push(std::move(r));
  }
  return out;
}

CriterionResult is_edge_state(const DensityMatrix& sigma, double tol) {
  if (sigma.profile.count() != 2 || sigma.profile.dims[0] != 2)
    throw std::invalid_argument("edge test needs a 2 x d profile");
  const int n = sigma.dim();

  Matrix h = 0.5 * (sigma.entries + sigma.entries.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  double emax = es.eigenvalues().cwiseAbs().maxCoeff();
  double cut = defaults::rank_tol * std::max(1.0, emax);
  std::vector<Vector> range_basis;
  for (int i = 0; i < n; ++i)
    if (es.eigenvalues()(i) > cut) range_basis.push_back(es.eigenvectors().col(i));

  CriterionResult r;
  r.criterion_id = "edge-state";
  if (range_basis.empty()) {
    r.evidence = "state has empty numerical range";
    return r;
  }

  Matrix st = partial_transpose(h, sigma.profile, {1});
  Matrix qt = column_space(st);

  auto compatible = [&](const Vector& x, const Vector& y, double* defect) {
    Vector z = unit(kron_vec(Vector(x.conjugate()), y));
    double dd = projection_defect(qt, z);
    if (defect) *defect = dd;
    return dd <= tol;
  };

  ProductVectorSearch search = product_vectors_in_range_2xd(range_basis, tol);

  if (!search.continuum) {
    double best_defect = -1.0;
    for (const auto& hit : search.hits) {
      double dd = 0.0;
      if (compatible(hit.x, hit.y, &dd)) {
        r.conclusion = Conclusion::undetermined;
        r.evidence = "not edge: product vector in the range with partner in "
                     "the transposed range (defects " +
                     sci(hit.membership_residual) + ", " + sci(dd) + ")";
        r.values = {hit.membership_residual, dd};
        r.witness = {hit.x, hit.y};
        return r;
      }
      r.values.push_back(dd);
      if (best_defect < 0.0 || dd < best_defect) best_defect = dd;
    }
    r.conclusion = Conclusion::entangled;
    if (search.hits.empty()) {
      r.evidence = "edge: the range contains no product vector";
    } else {
      r.evidence = "edge: " + std::to_string(search.hits.size()) +
                   " product vectors in the range, none compatible with the "
                   "transposed range (best defect " + sci(best_defect) + ")";
    }
    return r;
  }

  // continuum of product vectors: the family is a polynomial kernel chain
  // Y(t) of the singular pencil. Compatibility with the transposed range
  // pins the conjugate parameter, so candidates are roots of the cross
  // products P_i Q_j - P_j Q_i plus the kernel-jump locus.
  RangePencil p = make_pencil(range_basis);
  int chains = 0;
  std::vector<Vector> chain = pencil_kernel_chain(p, &chains);
  if (!chain.empty() && chains == 1) {
    if (qt.cols() == n) {
      Vector y0 = chain[0];
      for (const Complex probe : {Complex(0.0, 0.0), Complex(1.0, 0.0)}) {
        Vector yv = Vector::Zero(p.d);
        Complex pw = 1.0;
        for (const Vector& c : chain) {
          yv += pw * c;
          pw *= probe;
        }
        if (yv.norm() < 1e-8) continue;
        Vector x(2);
        x << 1.0, probe;
        r.conclusion = Conclusion::undetermined;
        r.evidence = "not edge: the transposed range is the whole space";
        r.witness = {unit(x), unit(yv)};
        return r;
      }
    }
    std::vector<Vector> tbasis;
    for (int j = 0; j < qt.cols(); ++j) tbasis.push_back(qt.col(j));
    RangePencil pt = make_pencil(tbasis);

    // P(t) = At Y(t), Q(t) = Bt Y(t); membership needs P + conj(t) Q = 0
    std::vector<Vector> pc(chain.size()), qc(chain.size());
    for (size_t k = 0; k < chain.size(); ++k) {
      pc[k] = pt.a * chain[k];
      qc[k] = pt.b * chain[k];
    }
    auto entry_poly = [](const std::vector<Vector>& coeffs, int i) {
      std::vector<Complex> out(coeffs.size());
      for (size_t k = 0; k < coeffs.size(); ++k) out[k] = coeffs[k](i);
      return out;
    };
    std::vector<Complex> best_r;
    double best_norm = 0.0, mp = 0.0, mq = 0.0;
    for (int i = 0; i < pt.m; ++i) {
      mp = std::max(mp, poly_scale(entry_poly(pc, i)));
      mq = std::max(mq, poly_scale(entry_poly(qc, i)));
      for (int j = i + 1; j < pt.m; ++j) {
        std::vector<Complex> pi = entry_poly(pc, i), pj = entry_poly(pc, j);
        std::vector<Complex> qi = entry_poly(qc, i), qj = entry_poly(qc, j);
        std::vector<Complex> rij = poly_mul(pi, qj);
        std::vector<Complex> rji = poly_mul(pj, qi);
        for (size_t k = 0; k < rij.size(); ++k) rij[k] -= rji[k];
        double nr = poly_scale(rij);
        if (nr > best_norm) {
          best_norm = nr;
          best_r = std::move(rij);
        }
      }
    }
    double pt_scale = std::max(1.0, std::max(pt.a.norm(), pt.b.norm()));
    bool degenerate = false;
    std::vector<Complex> candidates;
    if (best_norm <= 1e-9 * pt_scale * pt_scale) {
      if (std::max(mp, mq) <= 1e-9 * pt_scale) {
        // the whole family lies in the transposed range for every parameter
        Vector x(2);
        x << 1.0, 0.0;
        r.conclusion = Conclusion::undetermined;
        r.evidence = "not edge: the product-vector family lies in the "
                     "transposed range for every parameter";
        r.witness = {x, unit(chain[0])};
        return r;
      }
      degenerate = true; // conjugate parameter unpinned, fall to the grid
    } else {
      candidates = polynomial_roots(best_r);
      for (std::uint64_t attempt = 0; attempt < 3 && p.d > 1; ++attempt) {
        double scale = 0.0;
        auto qq = compressed_det_coeffs(p, p.d - 1,
                                        0x51ab5ce5d1ce5eedull + attempt,
                                        &scale);
        if (scale <= 1e-13) continue;
        for (const Complex& root : polynomial_roots(qq))
          candidates.push_back(root);
        break;
      }
    }

    if (!degenerate) {
      // joint membership at each candidate: stack both pencil conditions
      auto joint_residual = [&](const Complex& t, Vector* y) {
        Matrix st(p.m + pt.m, p.d);
        st.topRows(p.m) = p.a + t * p.b;
        st.bottomRows(pt.m) = pt.a + std::conj(t) * pt.b;
        double sig = 0.0;
        Vector v = smallest_right_singular_vector(st, &sig);
        if (y) *y = v;
        return sig / std::sqrt(1.0 + std::norm(t));
      };
      double best_res = -1.0;
      for (Complex t : candidates) {
        // local descent, the companion roots carry limited precision
        double res = joint_residual(t, nullptr);
        double h = 1e-4 * std::max(1.0, std::abs(t));
        for (int it = 0; it < 24; ++it) {
          bool moved = false;
          for (const Complex step : {Complex(h, 0.0), Complex(-h, 0.0),
                                     Complex(0.0, h), Complex(0.0, -h)}) {
            double cand = joint_residual(t + step, nullptr);
            if (cand < res) {
              res = cand;
              t += step;
              moved = true;
            }
          }
          if (!moved) h *= 0.5;
          if (h < 1e-14 * std::max(1.0, std::abs(t))) break;
        }
        Vector y;
        res = joint_residual(t, &y);
        if (best_res < 0.0 || res < best_res) best_res = res;
        if (res <= tol) {
          Vector x(2);
          x << 1.0, t;
          x = unit(x);
          double dd = 0.0;
          compatible(x, unit(y), &dd);
          r.conclusion = Conclusion::undetermined;
          r.evidence = "not edge: the product-vector family meets the "
                       "transposed range (joint residual " + sci(res) + ")";
          r.values = {res, dd};
          r.witness = {x, unit(y)};
          return r;
        }
      }
      {
        // the family member at infinity
        Matrix st(p.m + pt.m, p.d);
        st.topRows(p.m) = p.b;
        st.bottomRows(pt.m) = pt.b;
        double sig = 0.0;
        Vector y = smallest_right_singular_vector(st, &sig);
        if (best_res < 0.0 || sig < best_res) best_res = sig;
        if (sig <= tol) {
          Vector x(2);
          x << 0.0, 1.0;
          double dd = 0.0;
          compatible(x, unit(y), &dd);
          r.conclusion = Conclusion::undetermined;
          r.evidence = "not edge: the product-vector family meets the "
                       "transposed range at infinity";
          r.values = {sig, dd};
          r.witness = {x, unit(y)};
          return r;
        }
      }
      r.conclusion = Conclusion::entangled;
      r.evidence = "edge: the range carries a product-vector family (kernel "
                   "chain of degree " + std::to_string(chain.size() - 1) +
                   "); none of the " + std::to_string(candidates.size()) +
                   " compatibility candidates lies in the transposed range "
                   "(best joint residual " + sci(best_res) + ")";
      return r;
    }
  }

  // multi-parameter or degenerate family: probe a parameter grid
  const double grid[] = {0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0};
  for (double re : grid) {
    for (double im : grid) {
      Complex t(re, im);
      Vector y;
      if (p.m == 0) {
        y = Vector::Zero(p.d);
        y(0) = 1.0;
      } else {
        y = smallest_right_singular_vector(p.a + t * p.b, nullptr);
      }
      if (pencil_residual(p, t, y) > tol) continue;
      Vector x(2);
      x << 1.0, t;
      x = unit(x);
      double dd = 0.0;
      if (compatible(x, unit(y), &dd)) {
        r.conclusion = Conclusion::undetermined;
        r.evidence = "not edge: compatible product vector on the probe grid "
                     "(defect " + sci(dd) + ")";
        r.values = {dd};
        r.witness = {x, unit(y)};
        return r;
      }
    }
  }
  if (p.m > 0) {
    Vector y = smallest_right_singular_vector(p.b, nullptr);
    if ((p.b * y).norm() <= tol * std::max(1.0, p.b.norm())) {
      Vector x(2);
      x << 0.0, 1.0;
      double dd = 0.0;
      if (compatible(x, unit(y), &dd)) {
        r.conclusion = Conclusion::undetermined;
        r.evidence = "not edge: compatible product vector at infinity";
        r.values = {dd};
        r.witness = {x, unit(y)};
        return r;
      }
    }
  }
  r.conclusion = Conclusion::undetermined;
  r.evidence = "range carries a continuum of product vectors; probe grid "
               "found no compatible pair, edge status unresolved";
  return r;
}

CriterionResult classify_2x5_sppt(const TwoByDBlocks& blk, double tol) {
  if (blk.d != 5)
    throw std::invalid_argument("classification needs a 2 x 5 profile");

  CriterionResult r;
  r.criterion_id = "classify-2x5";
  if (!blk.representable || blk.sppt_residual > tol) {
    r.evidence = "precondition not met: transpose-factor equation residual " +
                 sci(blk.sppt_residual) + ", block residual " +
                 sci(blk.block_residual);
    return r;
  }

  int r1 = numeric_rank(blk.X1);
  r.values = {static_cast<double>(r1)};
  if (r1 == 5) {
    r.conclusion = Conclusion::separable;
    r.evidence = "X1 has full rank 5";
    return r;
  }
  if (r1 <= 3) {
    r.conclusion = Conclusion::separable;
    r.evidence = "rank X1 = " + std::to_string(r1) +
                 ", the state acts on a 2 x 3 subspace";
    return r;
  }

  // rank X1 = 4: examine sigma = W*W with W = (X1 | S X1)
  Matrix w(blk.d, 2 * blk.d);
  w.leftCols(blk.d) = blk.X1;
  w.rightCols(blk.d) = blk.S * blk.X1;
  DensityMatrix sigma;
  sigma.entries = w.adjoint() * w;
  sigma.profile = DimensionProfile{{2, blk.d}};
  sigma.normalized = false;

  int rs = numeric_rank(sigma.entries);
  int rst = numeric_rank(partial_transpose(sigma.entries, sigma.profile, {1}));
  r.values.push_back(static_cast<double>(rs));
  r.values.push_back(static_cast<double>(rst));
  if (!(rs == 5 && rst == 5)) {
    r.conclusion = Conclusion::separable;
    r.evidence = "rank X1 = 4 with birank (" + std::to_string(rs) + ", " +
                 std::to_string(rst) + ") of the reduced part";
    return r;
  }

  CriterionResult edge = is_edge_state(sigma, tol);
  if (edge.conclusion == Conclusion::entangled) {
    r.conclusion = Conclusion::undetermined;
    r.evidence = "exceptional case: rank X1 = 4, reduced part has birank "
                 "(5, 5) and is an edge state";
    return r;
  }
  if (!edge.witness.empty()) {
    r.conclusion = Conclusion::separable;
    r.evidence = "rank X1 = 4, birank (5, 5), reduced part is not edge";
    r.witness = edge.witness;
    return r;
  }
  r.conclusion = Conclusion::undetermined;
  r.evidence = "rank X1 = 4, birank (5, 5), edge status unresolved: " +
               edge.evidence;
  return r;
}

CriterionResult classify_2x5_sppt(const DensityMatrix& rho, double tol) {
  if (rho.profile.count() != 2 || rho.profile.dims[0] != 2 ||
      rho.profile.dims[1] != 5)
    throw std::invalid_argument("classification needs a 2 x 5 profile");
  return classify_2x5_sppt(two_by_d_blocks(rho, tol), tol);
}

namespace {

// Search a strip of X rows, each row split as (first block | second block)
// of a 2 x dim2 space, for a product vector in the conjugated row span.
// Returns true and fills (x2, y2) on success.
bool strip_product_vector(const Matrix& left, const Matrix& right, double tol,
                          Vector* x2, Vector* y2, double* residual) {
  const int rows = static_cast<int>(left.rows());
  const int dim2 = static_cast<int>(left.cols());
  Matrix stacked(rows, 2 * dim2);
  stacked.leftCols(dim2) = left;
  stacked.rightCols(dim2) = right;
  Matrix span = column_space(stacked.conjugate().transpose()); // conj row span
  if (span.cols() == 0) return false;
  std::vector<Vector> basis;
  for (int j = 0; j < span.cols(); ++j) basis.push_back(span.col(j));
  ProductVectorSearch search = product_vectors_in_range_2xd(basis, tol);
  if (search.continuum) {
    // any parameter works; take t = 0
    RangePencil p = make_pencil(basis);
    Vector y = smallest_right_singular_vector(p.a, nullptr);
    if (pencil_residual(p, Complex(0.0, 0.0), y) > tol) return false;
    *x2 = Vector(2);
    *x2 << 1.0, 0.0;
    *y2 = unit(y);
    *residual = pencil_residual(p, Complex(0.0, 0.0), y);
    return true;
  }
  if (search.hits.empty()) return false;
  const auto& h = search.hits.front();
  *x2 = h.x;
  *y2 = h.y;
  *residual = h.membership_residual;
  return true;
}

CriterionResult rank4_222(const DensityMatrix& rho, const StructuredFactor& f,
                          double tol) {
  CriterionResult r;
  r.criterion_id = "rank4-2x2x2";
  const int n0 = f.carrier();
  IndexSpace space({2, 2});
  const Matrix& y12 = f.diag_blocks[space.rank({0, 1})];
  const Matrix& y21 = f.diag_blocks[space.rank({1, 0})];
  const Matrix& y22 = f.diag_blocks[space.rank({1, 1})];
  const Matrix& s2 = f.smat(space.rank({0, 1}), 0, 1);
  const Matrix& t2 = f.smat(space.rank({1, 0}), 1, 1);
  double scale = std::max(1.0, f.X.norm());
  double block_cut = defaults::rank_tol * scale;

  Matrix qr = column_space(rho.entries);
  Vector e2(2);
  e2 << 0.0, 1.0;

  auto finish = [&](const Vector& a, const Vector& b, const Vector& c,
                    const std::string& how) {
    Vector v = unit(kron_vec(kron_vec(a, b), c));
    double defect = projection_defect(qr, v);
    if (defect > tol) return false;
    r.conclusion = Conclusion::separable;
    r.evidence = how + "; range membership defect " + sci(defect);
    r.values.push_back(defect);
    r.witness = {unit(a), unit(b), unit(c)};
    return true;
  };

  if (y22.norm() > block_cut) {
    int best = 0;
    for (int i = 1; i < n0; ++i)
      if (y22.row(i).norm() > y22.row(best).norm()) best = i;
    Vector y = y22.row(best).conjugate().transpose();
    if (finish(e2, e2, unit(y), "product row in the last diagonal block"))
      return r;
  }
  if (y21.norm() > block_cut) {
    Vector x2, yc;
    double res = 0.0;
    // the search runs on the conjugated row span, so hits live in the range
    if (strip_product_vector(y21, Matrix(t2 * y21), tol, &x2, &yc, &res)) {
      if (finish(e2, x2, yc, "product vector in the (2,*) strip row span"))
        return r;
    }
  }
  if (y12.norm() > block_cut) {
    Vector x1, yc;
    double res = 0.0;
    if (strip_product_vector(y12, Matrix(s2 * y12), tol, &x1, &yc, &res)) {
      if (finish(x1, e2, yc, "product vector in the (*,2) strip row span"))
        return r;
    }
  }
  r.conclusion = Conclusion::undetermined;
  r.evidence = "no product vector located in the off-corner strips";
  return r;
}

CriterionResult rank4_33(const DensityMatrix& rho, const StructuredFactor& f,
                         double tol) {
  CriterionResult r;
  r.criterion_id = "rank4-3x3";
  const Matrix& x1 = f.diag_blocks[0];
  const Matrix& x2 = f.diag_blocks[1];
  const Matrix& x3 = f.diag_blocks[2];
  const Matrix& s23 = f.smat(1, 0, 2);
  double scale = std::max(1.0, f.X.norm());
  double block_cut = defaults::rank_tol * scale;
  Matrix qr = column_space(rho.entries);

  auto finish = [&](const Vector& a, const Vector& b, const std::string& how) {
    Vector v = unit(kron_vec(a, b));
    double defect = projection_defect(qr, v);
    if (defect > tol) return false;
    r.conclusion = Conclusion::separable;
    r.evidence = how + "; range membership defect " + sci(defect);
    r.values.push_back(defect);
    r.witness = {unit(a), unit(b)};
    return true;
  };

  if (x3.norm() > block_cut) {
    int best = 0;
    for (int i = 1; i < x3.rows(); ++i)
      if (x3.row(i).norm() > x3.row(best).norm()) best = i;
    Vector e3(3);
    e3 << 0.0, 0.0, 1.0;
    Vector y = x3.row(best).conjugate().transpose();
    if (finish(e3, unit(y), "product row in the last diagonal block")) return r;
  }

  int r1 = numeric_rank(x1);
  int r2 = numeric_rank(x2);
  r.values = {static_cast<double>(r1), static_cast<double>(r2)};
  if (r2 == 0) {
    r.conclusion = Conclusion::undetermined;
    r.evidence = "degenerate block layout outside the rank-4 case analysis";
    return r;
  }
  if (r1 == 3 && r2 == 1) {
    r.conclusion = Conclusion::separable;
    r.evidence = "rank X1 = 3 with a rank-1 middle strip; separability "
                 "follows from the case analysis, no constructive witness";
    return r;
  }
  Vector xa, yc;
  double res = 0.0;
  if (strip_product_vector(x2, Matrix(s23 * x2), tol, &xa, &yc, &res)) {
    Vector a(3);
    a << 0.0, xa(0), xa(1);
    if (finish(a, yc, "product vector in the middle strip row span")) return r;
  }
  r.conclusion = Conclusion::undetermined;
  r.evidence = "no product vector located in the middle strip";
  return r;
}

} // namespace

CriterionResult rank4_analysis(const DensityMatrix& rho, double tol) {
  int rank = numeric_rank(rho.entries);
  if (rank > 4)
    throw std::invalid_argument("rank " + std::to_string(rank) +
                                " exceeds the rank-4 analysis domain");

  CriterionResult r;
  r.criterion_id = "rank4";
  r.values = {static_cast<double>(rank)};

  PptReport ppt = is_ppt(rho);
  if (!ppt.ppt) {
    r.evidence = "precondition not met: a partial transpose has eigenvalue " +
                 sci(ppt.min_eigenvalue);
    return r;
  }

  if (rank <= 1) {
    Matrix h = 0.5 * (rho.entries + rho.entries.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Vector v = es.eigenvectors().col(rho.dim() - 1);
    auto fac = product_vector_factorize(v, rho.profile, tol);
    if (fac.product) {
      r.conclusion = Conclusion::separable;
      r.evidence = "pure product state (worst split ratio " +
                   sci(fac.worst_ratio) + ")";
      r.witness = fac.factors;
    } else {
      r.evidence = "pure state failed to factor (worst split ratio " +
                   sci(fac.worst_ratio) + ")";
    }
    return r;
  }

  if (rank <= 3) {
    r.conclusion = Conclusion::separable;
    r.evidence = "rank " + std::to_string(rank) +
                 " with positive partial transposes; separable by the "
                 "low-rank classification";
    return r;
  }

  StructuredFactor f = canonical_factor(rho, tol);
  SpptVerdict gate = sppt_multipartite(f, tol);
  if (!gate.holds) {
    r.evidence = "precondition not met: transpose-factor equations fail (" +
                 gate.witness + " residual " + sci(gate.max_residual) + ")";
    return r;
  }

  const auto& dims = rho.profile.dims;
  if (dims == std::vector<int>{2, 2, 2}) {
    CriterionResult inner = rank4_222(rho, f, tol);
    inner.values.insert(inner.values.begin(), r.values.begin(), r.values.end());
    return inner;
  }
  if (dims == std::vector<int>{3, 3}) {
    CriterionResult inner = rank4_33(rho, f, tol);
    inner.values.insert(inner.values.begin(), r.values.begin(), r.values.end());
    return inner;
  }

  r.conclusion = Conclusion::separable;
  r.evidence = "rank 4 on the " + rho.profile.to_string() +
               " profile; separable by the imported classification";
  return r;
}

} // namespace sppt
