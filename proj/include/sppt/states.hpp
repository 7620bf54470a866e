#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sppt/cholesky.hpp"

namespace sppt {

// Expected verdicts and the construction data of a generated state; enough to
// re-derive the state deterministically.
struct GroundTruth {
  std::string family;
  std::string algorithm; // random number pipeline id, empty when unseeded
  std::uint64_t seed = 0;
  bool seeded = false;
  std::optional<bool> ppt;
  std::optional<bool> sppt;
  std::optional<bool> ssppt;
  std::optional<bool> separable;
  std::optional<bool> legacy_ssppt;
  std::string expected_criterion; // battery winner, when one is designed in
  bool has_factor = false;
  StructuredFactor factor;  // construction factor (unnormalized Gram form)
  std::map<std::string, double> params;
};

struct GeneratedState {
  DensityMatrix rho;
  GroundTruth ground_truth;
};

// 2 x 5 family with X1 = diag(1,1,1,1,0) and the fixed real coupling matrix
// built from beta1 = sqrt((1-b)/2b), beta2 = sqrt((1+b)/2b).
GeneratedState ha_state(double b);

// Rank-1 state v = (1,0,0,0,0,0,1,0) on 2x2x2: passes the flattened
// triangular test yet is not PPT.
GeneratedState yuzhao_counterexample();

// Block-diagonal classical-quantum state: weights over the leading
// subsystems, one carrier block each.
GeneratedState cq_state(const DimensionProfile& profile,
                        const std::vector<double>& weights,
                        const std::vector<Matrix>& blocks);
GeneratedState random_cq(const DimensionProfile& profile, std::uint64_t seed);

// rho = sqrtD (1 B C CB)-structured state on 2x2xN; B, C normal and commuting.
GeneratedState canonical_22n(const Matrix& b, const Matrix& c, const Matrix& d);

// rho = T*T with T the block-row product of d families of mutually commuting
// normal matrices, first member of each family the identity.
GeneratedState canonical_multipartite(const DimensionProfile& profile,
                                      const std::vector<std::vector<Matrix>>& families);

GeneratedState pure_state(const Vector& v, const DimensionProfile& profile);

// Explicit triangular factor of a pure product state: rank-one diagonal
// coupling matrices carrying the factor amplitudes.
StructuredFactor pure_product_sppt_factor(const std::vector<Vector>& factors);

GeneratedState bell_state();
GeneratedState ghz_state();
GeneratedState maximally_mixed(const DimensionProfile& profile);

// Triangular-by-construction state: per block a shared random unitary and
// random diagonals, so all coupling matrices commute and are normal.
GeneratedState random_ssppt(const DimensionProfile& profile, std::uint64_t seed);

// Same construction with whole diagonal blocks switched off. mask[a] == 0
// zeroes block a (its entire row strip vanishes), so the rank is the carrier
// dimension times the number of live blocks and the factor stays triangular.
GeneratedState random_ssppt_masked(const DimensionProfile& profile,
                                   const std::vector<int>& mask,
                                   std::uint64_t seed);

// 2 x d states aimed at one battery criterion: flavor is one of
// "contractive", "normal", "a_gt_d".
GeneratedState random_sppt_2xd(int d, const std::string& flavor,
                               std::uint64_t seed);

// Deterministic random building blocks shared with the tests.
extern const char* const rng_algorithm_id;
Matrix haar_unitary(int n, std::uint64_t seed);
Matrix random_psd(int n, std::uint64_t seed); // trace 1
std::vector<Matrix> random_commuting_normal_family(int n, int count,
                                                   std::uint64_t seed);

} // namespace sppt
