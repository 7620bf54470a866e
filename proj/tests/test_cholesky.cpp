#include "doctest.h"

#include <cmath>

#include "sppt/cholesky.hpp"
#include "sppt/states.hpp"

using namespace sppt;

namespace {

DensityMatrix psd_density(const DimensionProfile& profile, std::uint64_t seed) {
  DensityMatrix rho;
  rho.profile = profile;
  rho.entries = random_psd(profile.total_dim(), seed);
  return rho;
}

} // namespace

TEST_CASE("block cholesky reproduces the matrix and is upper triangular") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    DensityMatrix rho = psd_density(DimensionProfile{{2, 3}}, seed);
    Matrix x = block_cholesky(rho);
    CHECK((x.adjoint() * x - rho.entries).norm() <= 1e-12);
    for (int i = 0; i < x.rows(); ++i)
      for (int j = 0; j < i; ++j) CHECK(std::abs(x(i, j)) == 0.0);
  }
}

TEST_CASE("block cholesky zeroes rank-deficient rows") {
  // rank-1 projector onto (1,0,0,1)/sqrt(2): only one live pivot row
  GeneratedState bell = bell_state();
  Matrix x = block_cholesky(bell.rho);
  CHECK((x.adjoint() * x - bell.rho.entries).norm() <= 1e-12);
  int live = 0;
  for (int i = 0; i < x.rows(); ++i)
    if (x.row(i).norm() > 0.0) ++live;
  CHECK(live == 1);
}

TEST_CASE("extract and assemble round trip a generated factor") {
  GeneratedState st = random_ssppt(DimensionProfile{{2, 2, 3}}, 11);
  StructuredFactor f = canonical_factor(st.rho);
  CHECK(f.canonical);
  CHECK(f.representable);
  CHECK(f.max_block_residual <= 1e-10);

  StructuredFactor g = assemble_structured_factor(f.profile, f.diag_blocks, f.smats);
  CHECK((g.X - f.X).norm() <= 1e-12 * std::max(1.0, f.X.norm()));
  CHECK((g.X.adjoint() * g.X - st.rho.entries).norm() <= 1e-10);
}

TEST_CASE("canonical factor carries identity pivots and zeros below") {
  GeneratedState st = random_ssppt(DimensionProfile{{2, 2, 2}}, 4);
  StructuredFactor f = canonical_factor(st.rho);
  REQUIRE(f.representable);
  IndexSpace space(std::vector<int>(f.profile.dims.begin(),
                                    f.profile.dims.end() - 1));
  const int n0 = f.carrier();
  for (int a = 0; a < f.blocks(); ++a) {
    std::vector<int> t = space.tuple(a);
    for (int p = 0; p < f.levels(); ++p) {
      CHECK((f.smat(a, p, t[p]) - Matrix::Identity(n0, n0)).norm() <= 1e-12);
      for (int j = 0; j < t[p]; ++j) CHECK(f.smat(a, p, j).norm() == 0.0);
    }
  }
}

TEST_CASE("product_for multiplies the level maps for a tuple") {
  GeneratedState st = random_ssppt(DimensionProfile{{2, 2, 2}}, 9);
  StructuredFactor f = canonical_factor(st.rho);
  REQUIRE(f.representable);
  IndexSpace space({2, 2});
  const int n0 = f.carrier();
  for (int a = 0; a < f.blocks(); ++a) {
    for (int b = 0; b < f.blocks(); ++b) {
      std::vector<int> beta = space.tuple(b);
      Matrix prod = Matrix::Identity(n0, n0);
      for (int p = 0; p < f.levels(); ++p) prod = prod * f.smat(a, p, beta[p]);
      CHECK((f.product_for(a, beta) - prod).norm() <= 1e-13);
    }
  }
}

TEST_CASE("structured blocks rebuild the factor rows") {
  GeneratedState st = random_ssppt(DimensionProfile{{2, 3}}, 6);
  StructuredFactor f = canonical_factor(st.rho);
  REQUIRE(f.representable);
  IndexSpace space({2});
  const int n0 = f.carrier();
  for (int a = 0; a < f.blocks(); ++a) {
    for (int b = 0; b < f.blocks(); ++b) {
      Matrix predicted = f.product_for(a, space.tuple(b)) * f.diag_blocks[a];
      Matrix actual = f.X.block(a * n0, b * n0, n0, n0);
      CHECK((predicted - actual).norm() <= 1e-9 * std::max(1.0, f.X.norm()));
    }
  }
}

TEST_CASE("generic states are not structure representable") {
  // a random PSD matrix has no reason to satisfy the layered block relations
  DensityMatrix rho = psd_density(DimensionProfile{{2, 2, 2}}, 123);
  StructuredFactor f = canonical_factor(rho);
  CHECK_FALSE(f.representable);
  CHECK(f.max_block_residual > 1e-4);
}

TEST_CASE("two by d blocks split a structured state") {
  GeneratedState st = random_ssppt(DimensionProfile{{2, 4}}, 31);
  TwoByDBlocks blk = two_by_d_blocks(st.rho);
  REQUIRE(blk.representable);
  CHECK(blk.d == 4);
  CHECK(blk.sppt_residual <= 1e-8);

  // quadrants match the density matrix
  CHECK((blk.A - st.rho.entries.topLeftCorner(4, 4)).norm() <= 1e-12);
  CHECK((blk.B - st.rho.entries.topRightCorner(4, 4)).norm() <= 1e-12);
  CHECK((blk.D - st.rho.entries.bottomRightCorner(4, 4)).norm() <= 1e-12);

  // A = X1^dag X1, B = X1^dag S X1
  CHECK((blk.X1.adjoint() * blk.X1 - blk.A).norm() <= 1e-10);
  CHECK((blk.X1.adjoint() * blk.S * blk.X1 - blk.B).norm() <= 1e-10);
}

TEST_CASE("two by d blocks from generator data match the assembled state") {
  Matrix x1 = haar_unitary(3, 5) * Matrix::Identity(3, 3) * 0.7;
  Matrix u = haar_unitary(3, 8);
  Vector d(3);
  d << Complex(0.3, 0.1), Complex(-0.2, 0.4), Complex(0.5, 0.0);
  Matrix s = u * d.asDiagonal() * u.adjoint(); // normal, so [S, S^dag] = 0
  Matrix x2 = 0.4 * haar_unitary(3, 13);
  TwoByDBlocks blk = two_by_d_blocks_from(x1, s, x2);
  CHECK(blk.representable);
  CHECK(blk.sppt_residual <= 1e-12);
  CHECK(two_by_d_sppt_residual(x1, s) <= 1e-12);

  // a non-normal S with invertible X1 leaves a visible commutator
  Matrix bad = Matrix::Zero(3, 3);
  bad(0, 1) = Complex(1.0, 0.0);
  CHECK(two_by_d_sppt_residual(x1, s + bad) > 1e-3);
}

TEST_CASE("cholesky rejects non-psd input") {
  DensityMatrix rho;
  rho.profile = DimensionProfile{{2, 2}};
  rho.entries = Matrix::Identity(4, 4) / 4.0;
  rho.entries(3, 3) = -0.25;
  CHECK_THROWS_AS(block_cholesky(rho), std::invalid_argument);
}
