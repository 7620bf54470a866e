#include "doctest.h"

#include <cmath>

#include "sppt/decomposition.hpp"
#include "sppt/states.hpp"

using namespace sppt;

TEST_CASE("simultaneous diagonalization handles degenerate spectra") {
  auto family = random_commuting_normal_family(4, 3, 91);
  SpectralBundle b = simultaneous_diagonalize(family);
  CHECK(b.offdiag_residual <= 1e-10);
  for (std::size_t i = 0; i < family.size(); ++i) {
    Matrix rebuilt = b.u * b.diagonals[i].asDiagonal() * b.u.adjoint();
    CHECK((rebuilt - family[i]).norm() <= 1e-9 * std::max(1.0, family[i].norm()));
  }

  // identity plus a scalar multiple: fully degenerate directions
  std::vector<Matrix> flat = {Matrix::Identity(3, 3), 2.0 * Matrix::Identity(3, 3)};
  SpectralBundle fb = simultaneous_diagonalize(flat);
  CHECK(fb.offdiag_residual <= 1e-12);

  // non-commuting input is rejected
  Matrix a = Matrix::Zero(2, 2), c = Matrix::Zero(2, 2);
  a(0, 1) = 1.0;
  c(1, 0) = 1.0;
  CHECK_THROWS(simultaneous_diagonalize({a + a.adjoint(), c * Complex(0, 1) - c.adjoint() * Complex(0, 1)}));
}

TEST_CASE("decomposition reconstructs random structured states") {
  const std::vector<DimensionProfile> profiles = {
      DimensionProfile{{2, 2}}, DimensionProfile{{2, 3}},
      DimensionProfile{{2, 2, 2}}, DimensionProfile{{3, 3, 2}}};
  std::uint64_t seed = 300;
  for (const auto& p : profiles) {
    GeneratedState st = random_ssppt(p, seed++);
    StructuredFactor f = canonical_factor(st.rho);
    REQUIRE(f.representable);
    SeparableDecomposition dec = separable_decomposition_ssppt(f);
    DecompositionReport rep = verify_decomposition(dec, st.rho);
    CHECK(rep.ok);
    CHECK(rep.frobenius_residual <= 1e-8);
    CHECK(rep.weight_sum_error <= 1e-8);
    CHECK(rep.min_weight >= 0.0);
    CHECK(dec.weight_sum() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK((dec.reconstruction() - st.rho.entries).norm() <= 1e-8);
    for (const auto& term : dec.terms) {
      REQUIRE(static_cast<int>(term.factors.size()) == p.count());
      for (int k = 0; k < p.count(); ++k) {
        CHECK(term.factors[k].size() == p.dims[k]);
        CHECK(term.factors[k].norm() == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("classical quantum states decompose") {
  GeneratedState st = random_cq(DimensionProfile{{3, 2}}, 17);
  StructuredFactor f = canonical_factor(st.rho);
  REQUIRE(f.representable);
  SeparableDecomposition dec = separable_decomposition_ssppt(f);
  DecompositionReport rep = verify_decomposition(dec, st.rho);
  CHECK(rep.ok);
  CHECK(rep.frobenius_residual <= 1e-9);
}

TEST_CASE("the 22n route agrees with the generic route") {
  for (std::uint64_t seed : {401ull, 402ull, 403ull}) {
    GeneratedState st = random_ssppt(DimensionProfile{{2, 2, 3}}, seed);
    StructuredFactor f = canonical_factor(st.rho);
    REQUIRE(f.representable);

    SeparableDecomposition generic = separable_decomposition_ssppt(f);
    SeparableDecomposition special = separable_decomposition_22n(f);
    CHECK(verify_decomposition(generic, st.rho).ok);
    CHECK(verify_decomposition(special, st.rho).ok);
    CHECK((generic.reconstruction() - special.reconstruction()).norm() <= 1e-8);
  }
}

TEST_CASE("non ssppt factors are rejected with a witness") {
  GeneratedState st = ha_state(0.5);
  REQUIRE(st.ground_truth.has_factor);
  try {
    separable_decomposition_ssppt(st.ground_truth.factor);
    FAIL("expected NotSspptError");
  } catch (const NotSspptError& e) {
    CHECK_FALSE(e.witness.empty());
  }
}

TEST_CASE("pure product states decompose to a single term") {
  // |0> x |+> x |1> with a phase
  Vector a(2), b(2), c(3);
  a << 1.0, 0.0;
  b << Complex(1 / std::sqrt(2.0), 0), Complex(0, 1 / std::sqrt(2.0));
  c << 0.0, 1.0, 0.0;
  Vector v = kron_vec(kron_vec(a, b), c);
  GeneratedState st = pure_state(v, DimensionProfile{{2, 2, 3}});
  REQUIRE(st.ground_truth.has_factor);
  SeparableDecomposition dec = separable_decomposition_ssppt(st.ground_truth.factor);
  DecompositionReport rep = verify_decomposition(dec, st.rho);
  CHECK(rep.ok);
  int live = 0;
  for (const auto& term : dec.terms)
    if (term.weight > 1e-12) ++live;
  CHECK(live == 1);
}

TEST_CASE("product vector factorization recovers tensor factors") {
  Vector a(2), b(3);
  a << Complex(0.6, 0.0), Complex(0.0, 0.8);
  b << Complex(0.0, 1.0), Complex(1.0, 0.0), Complex(1.0, 1.0);
  b /= b.norm();
  Vector v = kron_vec(a, b);
  ProductFactorization pf = product_vector_factorize(v, DimensionProfile{{2, 3}});
  REQUIRE(pf.product);
  REQUIRE(pf.factors.size() == 2);
  // factors are unit with positive leading phase; compare projectors
  Vector rebuilt = kron_vec(pf.factors[0], pf.factors[1]);
  Vector unit = v / v.norm();
  Complex overlap = rebuilt.dot(unit);
  CHECK(std::abs(std::abs(overlap) - 1.0) <= 1e-10);
  CHECK(pf.worst_ratio <= 1e-10);

  // an entangled vector is flagged
  Vector w(4);
  w << 1.0, 0.0, 0.0, 1.0;
  ProductFactorization pw = product_vector_factorize(w, DimensionProfile{{2, 2}});
  CHECK_FALSE(pw.product);
  CHECK(pw.worst_ratio > 0.5);
}

TEST_CASE("masked states decompose with their reduced rank") {
  GeneratedState st = random_ssppt_masked(DimensionProfile{{2, 2, 2}}, {1, 0, 1, 1}, 88);
  CHECK(numeric_rank(st.rho.entries) == 6);
  StructuredFactor f = canonical_factor(st.rho);
  REQUIRE(f.representable);
  SeparableDecomposition dec = separable_decomposition_ssppt(f);
  CHECK(verify_decomposition(dec, st.rho).ok);
}
