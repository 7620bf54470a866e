#include "doctest.h"

#include "sppt/conditions.hpp"
#include "sppt/decomposition.hpp"
#include "sppt/states.hpp"

using namespace sppt;

namespace {

void check_ground_truth(const GeneratedState& st) {
  INFO("family ", st.ground_truth.family);
  CHECK_NOTHROW(st.rho.validate());
  const GroundTruth& gt = st.ground_truth;

  if (gt.ppt.has_value()) CHECK(is_ppt(st.rho).ppt == *gt.ppt);

  StructuredFactor f = gt.has_factor ? gt.factor : canonical_factor(st.rho);
  if (gt.sppt.has_value() && *gt.sppt) CHECK(sppt_multipartite(f).holds);
  if (gt.ssppt.has_value()) {
    SpptVerdict v = ssppt_multipartite(f);
    if (*gt.ssppt)
      CHECK(v.holds);
    else
      CHECK_FALSE(v.holds);
  }
  if (gt.legacy_ssppt.has_value())
    CHECK(ssppt_yuzhao(canonical_factor(st.rho)).holds == *gt.legacy_ssppt);
  if (gt.ssppt.value_or(false)) {
    // supplied factors are unnormalized Gram forms, scale before decomposing
    StructuredFactor scaled = f;
    double s = scaled.X.norm();
    scaled.X /= s;
    for (Matrix& d : scaled.diag_blocks) d /= s;
    SeparableDecomposition dec = separable_decomposition_ssppt(scaled);
    CHECK(verify_decomposition(dec, st.rho).ok);
  }
}

} // namespace

TEST_CASE("generator families match their declared verdicts") {
  check_ground_truth(ha_state(0.5));
  check_ground_truth(ha_state(0.25));
  check_ground_truth(yuzhao_counterexample());
  check_ground_truth(bell_state());
  check_ground_truth(ghz_state());
  check_ground_truth(maximally_mixed(DimensionProfile{{2, 3}}));
  check_ground_truth(random_cq(DimensionProfile{{2, 2, 2}}, 7));
  check_ground_truth(random_ssppt(DimensionProfile{{2, 3}}, 8));
  check_ground_truth(random_ssppt(DimensionProfile{{2, 2, 2, 2}}, 9));
  check_ground_truth(random_ssppt_masked(DimensionProfile{{2, 2, 2}}, {0, 1, 1, 0}, 10));
  check_ground_truth(random_sppt_2xd(4, "contractive", 11));
  check_ground_truth(random_sppt_2xd(4, "normal", 12));
  check_ground_truth(random_sppt_2xd(4, "a_gt_d", 13));

  auto family = random_commuting_normal_family(3, 2, 14);
  check_ground_truth(canonical_22n(family[0], family[1], random_psd(3, 15)));
}

TEST_CASE("bell and ghz break ppt while staying legacy friendly") {
  CHECK_FALSE(bell_state().ground_truth.ppt.value());
  CHECK_FALSE(ghz_state().ground_truth.ppt.value());
  CHECK_FALSE(is_ppt(bell_state().rho).ppt);
  CHECK_FALSE(is_ppt(ghz_state().rho).ppt);
}

TEST_CASE("seeded generators are bit reproducible") {
  GeneratedState a = random_ssppt(DimensionProfile{{2, 2, 3}}, 42);
  GeneratedState b = random_ssppt(DimensionProfile{{2, 2, 3}}, 42);
  CHECK((a.rho.entries - b.rho.entries).cwiseAbs().maxCoeff() == 0.0);

  GeneratedState c = random_ssppt(DimensionProfile{{2, 2, 3}}, 43);
  CHECK((a.rho.entries - c.rho.entries).cwiseAbs().maxCoeff() > 0.0);

  GeneratedState d1 = random_sppt_2xd(5, "contractive", 9);
  GeneratedState d2 = random_sppt_2xd(5, "contractive", 9);
  CHECK((d1.rho.entries - d2.rho.entries).cwiseAbs().maxCoeff() == 0.0);

  GeneratedState e1 = random_cq(DimensionProfile{{3, 2}}, 77);
  GeneratedState e2 = random_cq(DimensionProfile{{3, 2}}, 77);
  CHECK((e1.rho.entries - e2.rho.entries).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("generated states carry their construction data") {
  GeneratedState st = random_ssppt(DimensionProfile{{2, 3}}, 21);
  const GroundTruth& gt = st.ground_truth;
  CHECK(gt.family == "random-ssppt");
  CHECK(gt.seeded);
  CHECK(gt.seed == 21);
  CHECK(gt.algorithm == rng_algorithm_id);
  REQUIRE(gt.has_factor);

  // the attached factor reproduces the state
  Matrix gram = gt.factor.X.adjoint() * gt.factor.X;
  CHECK((gram / gram.trace().real() - st.rho.entries).norm() <= 1e-12);
}

TEST_CASE("masked generator zeroes whole blocks") {
  DimensionProfile profile{{2, 2, 2}};
  GeneratedState st = random_ssppt_masked(profile, {1, 0, 1, 0}, 33);
  CHECK(st.ground_truth.params.at("rank") == 4.0);
  CHECK(numeric_rank(st.rho.entries) == 4);
  REQUIRE(st.ground_truth.has_factor);
  const StructuredFactor& f = st.ground_truth.factor;
  CHECK(f.diag_blocks[1].norm() == 0.0);
  CHECK(f.diag_blocks[3].norm() == 0.0);
  CHECK(f.diag_blocks[0].norm() > 0.0);
  CHECK(f.diag_blocks[2].norm() > 0.0);

  CHECK_THROWS_AS(random_ssppt_masked(profile, {0, 0, 0, 0}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(random_ssppt_masked(profile, {1, 0}, 1),
                  std::invalid_argument);
}

TEST_CASE("canonical families assemble commuting normal structures") {
  // one pool: members must commute across levels, not just within them
  DimensionProfile profile{{2, 2, 2}};
  auto pool = random_commuting_normal_family(2, 2, 50);
  std::vector<std::vector<Matrix>> families = {
      {Matrix::Identity(2, 2), pool[0]}, {Matrix::Identity(2, 2), pool[1]}};
  GeneratedState st = canonical_multipartite(profile, families);
  CHECK_NOTHROW(st.rho.validate());
  StructuredFactor f = canonical_factor(st.rho);
  REQUIRE(f.representable);
  CHECK(ssppt_multipartite(f).holds);
}

TEST_CASE("pure states label themselves by factorability") {
  GeneratedState prod = pure_state(
      kron_vec(Vector::Unit(2, 0), Vector::Unit(3, 1)), DimensionProfile{{2, 3}});
  CHECK(prod.ground_truth.separable.value());
  CHECK(prod.ground_truth.ssppt.value());
  CHECK(prod.ground_truth.has_factor);

  Vector ent(4);
  ent << 1.0, 0.0, 0.0, 1.0;
  GeneratedState bell = pure_state(ent, DimensionProfile{{2, 2}});
  CHECK_FALSE(bell.ground_truth.separable.value());
  CHECK_FALSE(bell.ground_truth.has_factor);
}

TEST_CASE("cq states validate their inputs") {
  DimensionProfile profile{{2, 2}};
  std::vector<Matrix> blocks = {Matrix::Identity(2, 2) / 2.0,
                                Matrix::Identity(2, 2) / 2.0};
  CHECK_THROWS_AS(cq_state(profile, {0.7, 0.7}, blocks), std::invalid_argument);
  CHECK_THROWS_AS(cq_state(profile, {0.5}, blocks), std::invalid_argument);
  CHECK_THROWS_AS(cq_state(profile, {1.2, -0.2}, blocks), std::invalid_argument);
  GeneratedState ok = cq_state(profile, {0.3, 0.7}, blocks);
  CHECK(ok.ground_truth.ssppt.value());
}
