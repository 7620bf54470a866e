#include "sppt/cholesky.hpp"

#include <cmath>
#include <stdexcept>

namespace sppt {

Matrix StructuredFactor::product_for(int alpha, const std::vector<int>& beta) const {
  const int n0 = carrier();
  Matrix p = Matrix::Identity(n0, n0);
  for (int lev = 0; lev < levels(); ++lev) p = p * smats[alpha][lev][beta[lev]];
  return p;
}

Matrix block_cholesky(const DensityMatrix& rho, double tol) {
  rho.profile.validate();
  const int n = rho.dim();
  if (rho.entries.cols() != n || n != rho.profile.total_dim())
    throw std::invalid_argument("block_cholesky: matrix does not match profile");
  const double scale = std::max(1.0, rho.max_norm());
  if (rho.hermiticity_residual() > tol * scale * n)
    throw std::invalid_argument("block_cholesky: matrix is not hermitian");
  if (rho.min_eigenvalue() < -tol * scale * n)
    throw std::invalid_argument("block_cholesky: matrix is not positive semidefinite");

  const Matrix h = 0.5 * (rho.entries + rho.entries.adjoint());
  double max_diag = 0.0;
  for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, h(i, i).real());
  const double pivot_floor = defaults::pivot_rel * max_diag;

  Matrix x = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double pivot = h(i, i).real();
    if (i > 0) pivot -= x.col(i).head(i).squaredNorm();
    if (pivot <= pivot_floor) continue; // singular direction: row stays zero
    const double xii = std::sqrt(pivot);
    x(i, i) = xii;
    for (int j = i + 1; j < n; ++j) {
      Complex s = h(i, j);
      if (i > 0) s -= x.col(i).head(i).dot(x.col(j).head(i));
      x(i, j) = s / xii;
    }
  }
  return x;
}

namespace {

// least-squares S with S * a = b, minimum norm over the unconstrained part
Matrix solve_smat(const Matrix& a, const Matrix& b) {
  return b * pseudo_inverse(a);
}

} // namespace

StructuredFactor extract_structured_factor(const Matrix& X,
                                           const DimensionProfile& profile,
                                           double tol) {
  profile.validate();
  if (profile.count() < 2)
    throw std::invalid_argument("extract_structured_factor: profile needs a carrier");
  const int n = profile.total_dim();
  if (X.rows() != n || X.cols() != n)
    throw std::invalid_argument("extract_structured_factor: factor does not match profile");

  StructuredFactor f;
  f.profile = profile;
  f.X = X;
  f.canonical = true;

  const int d = profile.levels();
  const int n0 = profile.carrier_dim();
  std::vector<int> prefix(profile.dims.begin(), profile.dims.end() - 1);
  IndexSpace space(prefix);
  const int nb = space.size();
  const double scale = std::max(1.0, X.norm());

  f.diag_blocks.resize(nb);
  f.smats.resize(nb);
  for (int a = 0; a < nb; ++a) {
    const std::vector<int> alpha = space.tuple(a);
    const int r = a * n0;
    f.diag_blocks[a] = X.block(r, r, n0, n0);
    f.smats[a].resize(d);
    for (int p = 0; p < d; ++p) {
      f.smats[a][p].resize(prefix[p]);
      for (int j = 0; j < prefix[p]; ++j) {
        if (j == alpha[p]) {
          f.smats[a][p][j] = Matrix::Identity(n0, n0);
        } else if (j < alpha[p]) {
          f.smats[a][p][j] = Matrix::Zero(n0, n0);
        } else {
          std::vector<int> beta = alpha;
          beta[p] = j;
          const int c = space.rank(beta) * n0;
          f.smats[a][p][j] = solve_smat(f.diag_blocks[a], X.block(r, c, n0, n0));
        }
      }
    }
  }

  // every block must match the assembled prediction
  double worst = 0.0;
  for (int a = 0; a < nb; ++a) {
    const int r = a * n0;
    for (int b = 0; b < nb; ++b) {
      const std::vector<int> beta = space.tuple(b);
      const Matrix pred = f.product_for(a, beta) * f.diag_blocks[a];
      const double res = (pred - X.block(r, b * n0, n0, n0)).norm() / scale;
      worst = std::max(worst, res);
    }
  }
  f.max_block_residual = worst;
  f.representable = worst <= tol;

  // block-diagonality defect of the level-n maps (trivial at the leaf level)
  double offdiag = 0.0;
  for (int lev = 0; lev + 1 < d; ++lev) {
    std::vector<int> head(prefix.begin(), prefix.begin() + lev + 1);
    IndexSpace heads(head);
    int tail_dim = n0;
    for (std::size_t k = lev + 1; k < prefix.size(); ++k) tail_dim *= prefix[k];
    const int sub = tail_dim / prefix[lev + 1];
    for (int hr = 0; hr < heads.size(); ++hr) {
      const std::vector<int> an = heads.tuple(hr);
      const Matrix diag = X.block(hr * tail_dim, hr * tail_dim, tail_dim, tail_dim);
      for (int j = an[lev] + 1; j < prefix[lev]; ++j) {
        std::vector<int> bn = an;
        bn[lev] = j;
        const Matrix blk = X.block(hr * tail_dim, heads.rank(bn) * tail_dim,
                                   tail_dim, tail_dim);
        Matrix sbig = solve_smat(diag, blk);
        for (int u = 0; u < prefix[lev + 1]; ++u)
          for (int v = 0; v < prefix[lev + 1]; ++v)
            if (u != v)
              offdiag = std::max(offdiag,
                                 sbig.block(u * sub, v * sub, sub, sub).norm() / scale);
      }
    }
  }
  f.intermediate_offdiag = offdiag;
  return f;
}

StructuredFactor assemble_structured_factor(
    const DimensionProfile& profile, std::vector<Matrix> diag_blocks,
    std::vector<std::vector<std::vector<Matrix>>> smats) {
  profile.validate();
  if (profile.count() < 2)
    throw std::invalid_argument("assemble_structured_factor: profile needs a carrier");
  const int d = profile.levels();
  const int n0 = profile.carrier_dim();
  std::vector<int> prefix(profile.dims.begin(), profile.dims.end() - 1);
  IndexSpace space(prefix);
  const int nb = space.size();
  if (static_cast<int>(diag_blocks.size()) != nb ||
      static_cast<int>(smats.size()) != nb)
    throw std::invalid_argument("assemble_structured_factor: block data does not match profile");
  for (int a = 0; a < nb; ++a) {
    if (diag_blocks[a].rows() != n0 || diag_blocks[a].cols() != n0)
      throw std::invalid_argument("assemble_structured_factor: bad carrier block size");
    if (static_cast<int>(smats[a].size()) != d)
      throw std::invalid_argument("assemble_structured_factor: smat grid incomplete");
    for (int p = 0; p < d; ++p)
      if (static_cast<int>(smats[a][p].size()) != prefix[p])
        throw std::invalid_argument("assemble_structured_factor: smat grid incomplete");
  }

  StructuredFactor f;
  f.profile = profile;
  f.diag_blocks = std::move(diag_blocks);
  f.smats = std::move(smats);
  f.canonical = false;
  f.representable = true;
  f.max_block_residual = 0.0;

  const int n = profile.total_dim();
  f.X = Matrix::Zero(n, n);
  for (int a = 0; a < nb; ++a)
    for (int b = 0; b < nb; ++b) {
      const std::vector<int> beta = space.tuple(b);
      f.X.block(a * n0, b * n0, n0, n0) = f.product_for(a, beta) * f.diag_blocks[a];
    }
  return f;
}

StructuredFactor canonical_factor(const DensityMatrix& rho, double tol) {
  return extract_structured_factor(block_cholesky(rho), rho.profile, tol);
}

double two_by_d_sppt_residual(const Matrix& X1, const Matrix& S) {
  const Matrix e = X1.adjoint() * (S * S.adjoint() - S.adjoint() * S) * X1;
  const double sn = std::max(1.0, S.norm());
  const double denom = std::max(1.0, X1.squaredNorm() * sn * sn);
  return e.norm() / denom;
}

TwoByDBlocks two_by_d_blocks(const DensityMatrix& rho, double tol) {
  if (rho.profile.count() != 2 || rho.profile.dims[0] != 2)
    throw std::invalid_argument("two_by_d_blocks: profile must be 2 x d");
  const int d = rho.profile.dims[1];
  const Matrix X = block_cholesky(rho, tol);

  TwoByDBlocks blk;
  blk.d = d;
  blk.X1 = X.block(0, 0, d, d);
  blk.X2 = X.block(d, d, d, d);
  const Matrix X12 = X.block(0, d, d, d);
  blk.S = X12 * pseudo_inverse(blk.X1);
  blk.block_residual = (blk.S * blk.X1 - X12).norm() / std::max(1.0, X.norm());
  blk.representable = blk.block_residual <= tol;
  blk.A = rho.entries.block(0, 0, d, d);
  blk.B = rho.entries.block(0, d, d, d);
  blk.D = rho.entries.block(d, d, d, d);
  blk.sppt_residual = two_by_d_sppt_residual(blk.X1, blk.S);
  return blk;
}

TwoByDBlocks two_by_d_blocks_from(const Matrix& X1, const Matrix& S,
                                  const Matrix& X2, double tol) {
  const int d = static_cast<int>(X1.rows());
  if (X1.cols() != d || S.rows() != d || S.cols() != d || X2.rows() != d ||
      X2.cols() != d)
    throw std::invalid_argument("two_by_d_blocks_from: blocks must be square d x d");
  TwoByDBlocks blk;
  blk.d = d;
  blk.X1 = X1;
  blk.S = S;
  blk.X2 = X2;
  blk.A = X1.adjoint() * X1;
  blk.B = X1.adjoint() * S * X1;
  blk.D = X1.adjoint() * S.adjoint() * S * X1 + X2.adjoint() * X2;
  blk.block_residual = 0.0;
  blk.representable = true;
  blk.sppt_residual = two_by_d_sppt_residual(X1, S);
  (void)tol;
  return blk;
}

} // namespace sppt
