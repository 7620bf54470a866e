#pragma once

#include "sppt/cholesky.hpp"

#include <string>
#include <vector>

namespace sppt {

struct EquationResidual {
  std::string label;
  double residual = 0.0;
};

// holds <=> representable factor and max_residual <= tol
struct SpptVerdict {
  std::string definition_id;
  bool holds = false;
  bool indeterminate = false;
  double max_residual = 0.0;
  int equation_count = 0;
  std::string witness;
  std::string note;
  std::vector<EquationResidual> equations;
};

SpptVerdict sppt_bipartite(const StructuredFactor& f, double tol = defaults::verdict_tol);
SpptVerdict ssppt_bipartite(const StructuredFactor& f, double tol = defaults::verdict_tol);

// profile (2,2,N)
SpptVerdict sppt_22n(const StructuredFactor& f, double tol = defaults::verdict_tol);
SpptVerdict ssppt_22n(const StructuredFactor& f, double tol = defaults::verdict_tol);

// profile (N1,N2,N0)
SpptVerdict sppt_tripartite(const StructuredFactor& f, double tol = defaults::verdict_tol);
SpptVerdict ssppt_tripartite(const StructuredFactor& f, double tol = defaults::verdict_tol);

// any profile; specializes to the bipartite/tripartite tests at depth 1/2
SpptVerdict sppt_multipartite(const StructuredFactor& f, double tol = defaults::verdict_tol);
SpptVerdict ssppt_multipartite(const StructuredFactor& f, double tol = defaults::verdict_tol);

// old flat-block definition: prefix levels merged into a single index
SpptVerdict sppt_yuzhao(const StructuredFactor& f, double tol = defaults::verdict_tol);
SpptVerdict ssppt_yuzhao(const StructuredFactor& f, double tol = defaults::verdict_tol);

// residual of the conjugate-factor Gram identity for the partial transpose
// over the first `levels` subsystems; agrees with the equation residuals
double gram_transpose_residual(const StructuredFactor& f, int levels);

} // namespace sppt
