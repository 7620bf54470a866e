#pragma once

#include <string>
#include <vector>

#include "sppt/cholesky.hpp"

namespace sppt {

enum class Conclusion { separable, entangled, undetermined };
std::string to_string(Conclusion c);

struct CriterionResult {
  std::string criterion_id;
  Conclusion conclusion = Conclusion::undetermined;
  std::string evidence;
  std::vector<double> values;
  std::vector<Vector> witness; // per-subsystem factors when a product vector backs the call
};

// Sufficient separability conditions for a 2 x d state given its blocks, in a
// fixed order; each entry reports separable or undetermined. Criteria premised
// on the transpose-factor equation are reported undetermined when the blocks
// fail it; the A > D and relaxed-contraction criteria carry no such premise.
std::vector<CriterionResult> criterion_battery_2xd(
    const TwoByDBlocks& blocks, double tol = defaults::verdict_tol);

struct ProductVectorHit {
  Complex t{0.0, 0.0};       // x = (1, t), or (0, 1) at infinity
  bool at_infinity = false;
  Vector x;                  // length 2, unit
  Vector y;                  // length d, unit
  double membership_residual = 0.0;
};

struct ProductVectorSearch {
  std::vector<ProductVectorHit> hits;
  bool continuum = false; // rank deficiency at every parameter value
  std::string note;
};

// All product vectors x (x) y inside the span of the given independent basis
// of C^2 (x) C^d: roots of the determinant polynomial of the complement
// pencil A + tB, refined and residual-filtered.
ProductVectorSearch product_vectors_in_range_2xd(
    const std::vector<Vector>& basis, double tol = defaults::verdict_tol);

// Edge: no product vector |x,y> in the range with |conj(x),y> in the range of
// the partial transpose. Edge implies entangled; a compatible pair yields
// undetermined with the pair attached as witness.
CriterionResult is_edge_state(const DensityMatrix& sigma,
                              double tol = defaults::verdict_tol);

// Decision tree for 2 x 5 states passing the transpose-factor equation;
// never concludes entangled, the leftover bucket is the exceptional case.
// The blocks overload classifies relative to the given factor.
CriterionResult classify_2x5_sppt(const TwoByDBlocks& blocks,
                                  double tol = defaults::verdict_tol);
CriterionResult classify_2x5_sppt(const DensityMatrix& rho,
                                  double tol = defaults::verdict_tol);

// States of rank <= 4: constructive product-vector analysis for the (2,2,2)
// and (3,3) profiles, imported classification results otherwise.
CriterionResult rank4_analysis(const DensityMatrix& rho,
                               double tol = defaults::verdict_tol);

} // namespace sppt
