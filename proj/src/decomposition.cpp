#include "sppt/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace sppt {

namespace {

double unit_uniform(std::mt19937_64& eng) {
  return ((eng() >> 11) + 0.5) * 0x1.0p-53;
}

double sym_uniform(std::mt19937_64& eng) { return 2.0 * unit_uniform(eng) - 1.0; }

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

bool scalar_family(const std::vector<Matrix>& mats) {
  for (const Matrix& a : mats) {
    const int m = static_cast<int>(a.rows());
    const Complex mean = a.trace() / static_cast<double>(m);
    if ((a - mean * Matrix::Identity(m, m)).norm() > 1e-12 * std::max(1.0, a.norm()))
      return false;
  }
  return true;
}

// columns of `basis` span an invariant subspace; returns a rotated basis in
// which every compressed matrix is (near) diagonal
Matrix refine_basis(const std::vector<Matrix>& mats, const Matrix& basis,
                    std::mt19937_64& eng) {
  const int m = static_cast<int>(basis.cols());
  if (m == 1) return basis;

  std::vector<Matrix> comp;
  comp.reserve(mats.size());
  for (const Matrix& mat : mats) comp.push_back(basis.adjoint() * mat * basis);
  if (scalar_family(comp)) return basis;

  Matrix last_v = Matrix::Identity(m, m);
  for (int attempt = 0; attempt < 8; ++attempt) {
    Matrix h = Matrix::Zero(m, m);
    for (const Matrix& a : comp) {
      const double c = sym_uniform(eng);
      const double d = sym_uniform(eng);
      h += c * 0.5 * (a + a.adjoint());
      h += d * Complex(0.0, -0.5) * (a - a.adjoint());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const Eigen::VectorXd w = es.eigenvalues();
    last_v = es.eigenvectors();
    const double gap =
        defaults::degeneracy_gap * std::max(1.0, w(m - 1) - w(0));

    std::vector<int> cuts{0};
    for (int k = 1; k < m; ++k)
      if (w(k) - w(k - 1) > gap) cuts.push_back(k);
    cuts.push_back(m);
    if (cuts.size() <= 2) continue; // no split, redraw coefficients

    Matrix out(basis.rows(), m);
    int col = 0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const int width = cuts[c + 1] - cuts[c];
      const Matrix sub =
          refine_basis(mats, basis * last_v.middleCols(cuts[c], width), eng);
      out.middleCols(col, width) = sub;
      col += width;
    }
    return out;
  }
  return basis * last_v; // best effort; residual is reported upstream
}

} // namespace

SpectralBundle simultaneous_diagonalize(const std::vector<Matrix>& mats,
                                        double tol, std::uint64_t seed) {
  if (mats.empty())
    throw std::invalid_argument("simultaneous_diagonalize: empty family");
  const int n = static_cast<int>(mats[0].rows());
  for (const Matrix& m : mats)
    if (m.rows() != n || m.cols() != n)
      throw std::invalid_argument("simultaneous_diagonalize: sizes differ");

  for (std::size_t i = 0; i < mats.size(); ++i)
    for (std::size_t j = i; j < mats.size(); ++j) {
      const double scale = std::max(1.0, mats[i].norm() * mats[j].norm());
      const double c1 = commutator_unchecked(mats[i], mats[j]).norm() / scale;
      const double c2 =
          commutator_unchecked(mats[i], Matrix(mats[j].adjoint())).norm() / scale;
      const double worst = std::max(c1, c2);
      if (worst > tol)
        throw std::invalid_argument(
            "simultaneous_diagonalize: inputs " + std::to_string(i) + " and " +
            std::to_string(j) + " fail to commute (residual " + sci(worst) + ")");
    }

  std::mt19937_64 eng(seed);
  SpectralBundle bundle;
  bundle.u = refine_basis(mats, Matrix::Identity(n, n), eng);
  bundle.diagonals.reserve(mats.size());
  for (const Matrix& m : mats) {
    const Matrix rot = bundle.u.adjoint() * m * bundle.u;
    bundle.diagonals.push_back(rot.diagonal());
    const Matrix off = rot - Matrix(rot.diagonal().asDiagonal());
    bundle.offdiag_residual = std::max(
        bundle.offdiag_residual, off.norm() / std::max(1.0, m.norm()));
  }
  return bundle;
}

Matrix SeparableDecomposition::reconstruction() const {
  const int n = profile.total_dim();
  Matrix m = Matrix::Zero(n, n);
  for (const SeparableTerm& t : terms) {
    Vector x = t.factors.at(0);
    for (std::size_t k = 1; k < t.factors.size(); ++k) x = kron_vec(x, t.factors[k]);
    m += t.weight * (x * x.adjoint());
  }
  return m;
}

double SeparableDecomposition::weight_sum() const {
  double s = 0.0;
  for (const SeparableTerm& t : terms) s += t.weight;
  return s;
}

namespace {

Vector term_factor(const Vector& raw) {
  Vector f = raw.conjugate();
  f /= f.norm();
  for (int i = 0; i < f.size(); ++i)
    if (std::abs(f(i)) > 1e-12) {
      f *= std::conj(f(i)) / std::abs(f(i));
      break;
    }
  return f;
}

// Shared back end: rotate each diagonal block by its unitary, read rows of
// the rotated factor as product vectors with per-level weights given by the
// diagonals of the rotated S maps.
SeparableDecomposition rows_to_terms(const StructuredFactor& f,
                                     const std::vector<Matrix>& unitaries,
                                     double tol) {
  const int d = f.levels();
  const int n0 = f.carrier();
  const std::vector<int> pre(f.profile.dims.begin(), f.profile.dims.end() - 1);
  IndexSpace full(pre);
  const int nb = full.size();

  SeparableDecomposition dec;
  dec.profile = f.profile;

  for (int a = 0; a < nb; ++a) {
    const Matrix& u = unitaries[a];
    std::vector<std::vector<Vector>> lambda(d);
    for (int p = 0; p < d; ++p) {
      lambda[p].resize(pre[p]);
      for (int j = 0; j < pre[p]; ++j)
        lambda[p][j] = (u.adjoint() * f.smat(a, p, j) * u).diagonal();
    }
    std::vector<Matrix> strip(nb);
    for (int b = 0; b < nb; ++b)
      strip[b] = u.adjoint() * f.product_for(a, full.tuple(b)) * f.diag_blocks[a];
    const Matrix carrier_rows = u.adjoint() * f.diag_blocks[a];

    for (int i0 = 0; i0 < n0; ++i0) {
      Vector row(nb * n0);
      for (int b = 0; b < nb; ++b)
        row.segment(b * n0, n0) = strip[b].row(i0).transpose();
      const double rn = row.norm();
      if (rn <= defaults::row_drop) continue;

      std::vector<Vector> raw;
      raw.reserve(d + 1);
      for (int p = 0; p < d; ++p) {
        Vector y(pre[p]);
        for (int j = 0; j < pre[p]; ++j) y(j) = lambda[p][j](i0);
        raw.push_back(std::move(y));
      }
      raw.push_back(carrier_rows.row(i0).transpose());

      Vector pred = raw[0];
      for (std::size_t k = 1; k < raw.size(); ++k) pred = kron_vec(pred, raw[k]);
      const double res = (pred - row).norm() / rn;
      if (res > tol)
        throw std::runtime_error(
            "separable decomposition: block " + std::to_string(a + 1) + " row " +
            std::to_string(i0 + 1) + " is not a product vector (residual " +
            sci(res) + ")");
      dec.product_residual = std::max(dec.product_residual, res);

      SeparableTerm term;
      term.weight = rn * rn;
      for (const Vector& piece : raw) term.factors.push_back(term_factor(piece));
      dec.terms.push_back(std::move(term));
    }
  }
  return dec;
}

void require_decomposable(const SpptVerdict& v) {
  if (v.indeterminate)
    throw NotSspptError("decomposition requires a structure-representable factor: " +
                            v.note,
                        "structure");
  if (!v.holds)
    throw NotSspptError("factor is not SSPPT: commutator " + v.witness +
                            " has residual " + sci(v.max_residual),
                        v.witness);
}

std::vector<Matrix> whole_grid_family(const StructuredFactor& f, int a) {
  std::vector<Matrix> fam;
  for (int p = 0; p < f.levels(); ++p)
    for (int j = 0; j < f.profile.dims[p]; ++j) fam.push_back(f.smat(a, p, j));
  return fam;
}

} // namespace

SeparableDecomposition separable_decomposition_ssppt(const StructuredFactor& f,
                                                     double tol,
                                                     std::uint64_t seed) {
  require_decomposable(ssppt_multipartite(f, tol));
  const int nb = f.blocks();
  std::vector<Matrix> unitaries(nb);
  for (int a = 0; a < nb; ++a)
    unitaries[a] =
        simultaneous_diagonalize(whole_grid_family(f, a), tol, seed + a).u;
  return rows_to_terms(f, unitaries, tol);
}

SeparableDecomposition separable_decomposition_22n(const StructuredFactor& f,
                                                   double tol,
                                                   std::uint64_t seed) {
  require_decomposable(ssppt_22n(f, tol));
  const int n0 = f.carrier();
  // block ranks over (2,2): (1,1)=0, (1,2)=1, (2,1)=2, (2,2)=3
  std::vector<Matrix> unitaries(4, Matrix::Identity(n0, n0));
  unitaries[0] =
      simultaneous_diagonalize({f.smat(0, 0, 1), f.smat(0, 1, 1)}, tol, seed).u;
  unitaries[1] = simultaneous_diagonalize({f.smat(1, 0, 1)}, tol, seed + 1).u;
  unitaries[2] = simultaneous_diagonalize({f.smat(2, 1, 1)}, tol, seed + 2).u;
  return rows_to_terms(f, unitaries, tol);
}

DecompositionReport verify_decomposition(const SeparableDecomposition& dec,
                                         const DensityMatrix& rho, double tol) {
  if (!(dec.profile == rho.profile))
    throw std::invalid_argument("verify_decomposition: profile mismatch");
  DecompositionReport rep;
  const Matrix rec = dec.reconstruction();
  rep.frobenius_residual =
      (rec - rho.entries).norm() / std::max(1.0, rho.entries.norm());
  rep.weight_sum_error = std::abs(dec.weight_sum() - rho.trace_real());
  rep.min_weight = 0.0;
  for (std::size_t i = 0; i < dec.terms.size(); ++i) {
    const SeparableTerm& t = dec.terms[i];
    if (i == 0 || t.weight < rep.min_weight) rep.min_weight = t.weight;
    for (const Vector& f : t.factors)
      rep.max_factor_norm_error =
          std::max(rep.max_factor_norm_error, std::abs(f.norm() - 1.0));
  }
  const double scale = std::max(1.0, std::abs(rho.trace_real()));
  rep.ok = rep.frobenius_residual <= tol && rep.min_weight >= 0.0 &&
           rep.weight_sum_error <= 1e-10 * scale &&
           rep.max_factor_norm_error <= tol;
  return rep;
}

ProductFactorization product_vector_factorize(const Vector& v,
                                              const DimensionProfile& profile,
                                              double tol) {
  profile.validate();
  if (v.size() != profile.total_dim())
    throw std::invalid_argument("product_vector_factorize: length mismatch");
  ProductFactorization out;
  if (v.norm() <= defaults::row_drop) {
    out.worst_ratio = 1.0;
    return out;
  }
  Vector tail = v;
  for (int k = 0; k + 1 < profile.count(); ++k) {
    const int nk = profile.dims[k];
    const int rest = static_cast<int>(tail.size()) / nk;
    Matrix m(nk, rest);
    for (int i = 0; i < nk; ++i)
      m.row(i) = tail.segment(i * rest, rest).transpose();
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sig = svd.singularValues();
    const double ratio =
        sig.size() > 1 ? sig(1) / std::max(sig(0), 1e-300) : 0.0;
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    out.factors.push_back(term_factor(Vector(svd.matrixU().col(0).conjugate())));
    tail = sig(0) * svd.matrixV().col(0).conjugate();
  }
  out.factors.push_back(term_factor(Vector(tail.conjugate())));
  out.product = out.worst_ratio <= tol;
  return out;
}

} // namespace sppt
