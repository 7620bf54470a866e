#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sppt/conditions.hpp"
#include "sppt/criteria.hpp"
#include "sppt/decomposition.hpp"
#include "sppt/io.hpp"

namespace sppt {

struct ClassificationOptions {
  double tol = 1e-8;
  std::uint64_t seed = defaults::internal_seed;
  bool legacy = false; // also run the flattened triangular tests
};

struct DecompositionSummary {
  bool attempted = false;
  bool produced = false;
  std::string note;
  int term_count = 0;
  DecompositionReport report;
  SeparableDecomposition decomposition;
};

struct ClassificationReport {
  std::string input_digest;
  DimensionProfile profile;
  double tol = 0.0;
  std::uint64_t seed = 0;

  bool valid = false;
  std::string validity_note;
  double hermiticity_residual = 0.0;
  double min_eigenvalue = 0.0;
  double trace = 0.0;

  bool has_ppt = false;
  PptReport ppt;

  bool has_factor = false;
  bool factor_representable = false;
  double factor_block_residual = 0.0;
  double factor_intermediate_offdiag = 0.0;
  std::string factor_note;

  // verdicts on the canonical factor, then on a supplied factor when present
  std::vector<SpptVerdict> verdicts;
  std::vector<std::string> verdict_sources; // "canonical" or "supplied", by index

  DecompositionSummary decomposition;

  bool has_battery = false;
  std::vector<CriterionResult> battery;
  double battery_sppt_residual = 0.0;
  std::string battery_source; // "canonical" or "supplied", like the verdicts

  bool has_classification = false;
  CriterionResult classification; // 2x5 decision tree

  bool has_rank4 = false;
  CriterionResult rank4;

  double elapsed_seconds = 0.0; // text report only, never serialized
};

ClassificationReport classify_state(const DensityMatrix& rho,
                                    const ClassificationOptions& opts = {},
                                    const StructuredFactor* supplied = nullptr);

std::string render_text(const ClassificationReport& report);
Json render_json(const ClassificationReport& report); // deterministic: no timing

} // namespace sppt
