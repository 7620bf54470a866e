#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "sppt/io.hpp"

using namespace sppt;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name)
      : path("io_test_" + name + ".json") {}
  ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("matrix json round trip is exact") {
  Matrix m = haar_unitary(4, 5) * Complex(0.37, -1.25);
  Json j = matrix_to_json(m);
  Matrix back = matrix_from_json(j);
  REQUIRE(back.rows() == m.rows());
  REQUIRE(back.cols() == m.cols());
  CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);

  Vector v = m.col(2);
  Vector vb = vector_from_json(vector_to_json(v));
  CHECK((vb - v).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("state json round trip preserves entries and profile") {
  GeneratedState st = random_ssppt(DimensionProfile{{2, 2, 3}}, 1001);
  Json meta;
  meta["note"] = "round trip";
  Json j = state_to_json(st.rho, meta);
  DensityMatrix back = state_from_json(j);
  CHECK(back.profile == st.rho.profile);
  CHECK(back.normalized == st.rho.normalized);
  CHECK((back.entries - st.rho.entries).cwiseAbs().maxCoeff() == 0.0);
  CHECK(j["meta"]["note"] == "round trip");
}

TEST_CASE("factor json round trip carries the whole structure") {
  GeneratedState st = random_ssppt(DimensionProfile{{2, 2, 2}}, 1002);
  StructuredFactor f = canonical_factor(st.rho);
  REQUIRE(f.representable);
  StructuredFactor back = factor_from_json(factor_to_json(f));
  CHECK(back.profile == f.profile);
  // the parsed factor is reassembled from its blocks, so X agrees up to
  // the extraction residual rather than bit for bit
  CHECK((back.X - f.X).norm() <= 1e-9 * std::max(1.0, f.X.norm()));
  REQUIRE(back.diag_blocks.size() == f.diag_blocks.size());
  for (size_t a = 0; a < f.diag_blocks.size(); ++a)
    CHECK((back.diag_blocks[a] - f.diag_blocks[a]).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(back.smats.size() == f.smats.size());
  for (size_t a = 0; a < f.smats.size(); ++a)
    for (size_t p = 0; p < f.smats[a].size(); ++p)
      for (size_t k = 0; k < f.smats[a][p].size(); ++k)
        CHECK((back.smats[a][p][k] - f.smats[a][p][k]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ground truth serialization keeps verdicts and params") {
  GeneratedState st = random_sppt_2xd(4, "contractive", 7);
  Json j = ground_truth_to_json(st.ground_truth);
  CHECK(j["family"] == "random-sppt-2xd");
  CHECK(j["seed"] == 7);
  CHECK(j["algorithm"] == rng_algorithm_id);
  CHECK(j["expected"]["sppt"] == true);
  CHECK(j["expected"]["separable"] == true);
  CHECK(j["expected"].contains("ssppt") == false);
  CHECK(j["expected_criterion"] == "contractive");
  CHECK(j["params"]["d"] == 4.0);
}

TEST_CASE("file io writes and reads back identical documents") {
  TempFile tmp("doc");
  Json j;
  j["alpha"] = 1;
  j["beta"] = {1, 2, 3};
  j["gamma"]["delta"] = "tail";
  write_json_file(tmp.path, j);
  Json back = read_json_file(tmp.path);
  CHECK(back == j);

  CHECK_THROWS_AS(read_json_file("does_not_exist_anywhere.json"),
                  std::runtime_error);

  TempFile bad("bad");
  std::ofstream(bad.path) << "{ not json";
  CHECK_THROWS_AS(read_json_file(bad.path), std::runtime_error);
}

TEST_CASE("state parsing distinguishes malformed from mismatched input") {
  GeneratedState st = random_ssppt(DimensionProfile{{2, 2}}, 3);
  Json j = state_to_json(st.rho);

  Json wrong = j;
  wrong["dims"] = {2, 3}; // 16 entries cannot fill a 6x6 matrix
  CHECK_THROWS_AS(state_from_json(wrong), std::invalid_argument);

  Json missing = j;
  missing.erase("matrix");
  CHECK_THROWS(state_from_json(missing));
}

TEST_CASE("digest is stable and sensitive") {
  std::string a = "structured factor";
  std::string b = "structured factoR";
  CHECK(digest_hex(a) == digest_hex(a));
  CHECK(digest_hex(a) != digest_hex(b));
  CHECK(digest_hex(a).size() == 16);
  // pinned fnv-1a reference value for the empty string
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
}

TEST_CASE("decomposition serialization reports the verification numbers") {
  GeneratedState st = random_ssppt(DimensionProfile{{2, 3}}, 77);
  StructuredFactor f = canonical_factor(st.rho);
  SeparableDecomposition dec = separable_decomposition_ssppt(f);
  DecompositionReport rep = verify_decomposition(dec, st.rho);
  REQUIRE(rep.ok);
  Json j = decomposition_to_json(dec, rep);
  CHECK(j["dims"].is_array());
  CHECK(j["terms"].size() == dec.terms.size());
  CHECK(j["ok"] == true);
  CHECK(j["reconstruction_residual"].get<double>() == rep.frobenius_residual);
  CHECK(j["weight_sum_error"].get<double>() == rep.weight_sum_error);
  // serialized reports re-parse identically
  CHECK(Json::parse(j.dump()) == j);
}
