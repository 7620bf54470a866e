#include "sppt/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sppt {
namespace {

Json complex_pair(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex pair_to_complex(const Json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::runtime_error("expected a [re, im] pair");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

} // namespace

Json matrix_to_json(const Matrix& m) {
  Json data = Json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) data.push_back(complex_pair(m(i, j)));
  Json out;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  out["data"] = std::move(data);
  return out;
}

Matrix matrix_from_json(const Json& j) {
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  const Json& data = j.at("data");
  if (!data.is_array() || static_cast<int>(data.size()) != rows * cols)
    throw std::runtime_error("matrix data length mismatch");
  Matrix m(rows, cols);
  int k = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = pair_to_complex(data[k++]);
  return m;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(complex_pair(v(i)));
  return out;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw std::runtime_error("expected a vector array");
  Vector v(static_cast<int>(j.size()));
  for (int i = 0; i < v.size(); ++i) v(i) = pair_to_complex(j[i]);
  return v;
}

Json state_to_json(const DensityMatrix& rho, const Json& meta) {
  Json out;
  out["dims"] = rho.profile.dims;
  Json data = Json::array();
  for (int i = 0; i < rho.entries.rows(); ++i)
    for (int j = 0; j < rho.entries.cols(); ++j)
      data.push_back(complex_pair(rho.entries(i, j)));
  out["matrix"] = std::move(data);
  out["normalized"] = rho.normalized;
  out["meta"] = meta;
  return out;
}

DensityMatrix state_from_json(const Json& j) {
  DensityMatrix rho;
  if (!j.contains("dims") || !j.at("dims").is_array())
    throw std::runtime_error("state file lacks a dims array");
  rho.profile.dims = j.at("dims").get<std::vector<int>>();
  rho.profile.validate();
  const int n = rho.profile.total_dim();
  const Json& data = j.at("matrix");
  if (!data.is_array() || static_cast<int>(data.size()) != n * n)
    throw std::invalid_argument("matrix length does not match dims");
  rho.entries = Matrix(n, n);
  int k = 0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) rho.entries(r, c) = pair_to_complex(data[k++]);
  rho.normalized = j.value("normalized", false);
  return rho;
}

Json factor_to_json(const StructuredFactor& f) {
  Json out;
  out["dims"] = f.profile.dims;
  Json diag = Json::array();
  for (const Matrix& m : f.diag_blocks) diag.push_back(matrix_to_json(m));
  out["diag_blocks"] = std::move(diag);
  Json grids = Json::array();
  for (const auto& per_block : f.smats) {
    Json levels = Json::array();
    for (const auto& grid : per_block) {
      Json row = Json::array();
      for (const Matrix& m : grid) row.push_back(matrix_to_json(m));
      levels.push_back(std::move(row));
    }
    grids.push_back(std::move(levels));
  }
  out["smats"] = std::move(grids);
  return out;
}

StructuredFactor factor_from_json(const Json& j) {
  DimensionProfile profile;
  profile.dims = j.at("dims").get<std::vector<int>>();
  profile.validate();
  std::vector<Matrix> diag;
  for (const Json& m : j.at("diag_blocks")) diag.push_back(matrix_from_json(m));
  std::vector<std::vector<std::vector<Matrix>>> smats;
  for (const Json& per_block : j.at("smats")) {
    std::vector<std::vector<Matrix>> levels;
    for (const Json& grid : per_block) {
      std::vector<Matrix> row;
      for (const Json& m : grid) row.push_back(matrix_from_json(m));
      levels.push_back(std::move(row));
    }
    smats.push_back(std::move(levels));
  }
  return assemble_structured_factor(profile, diag, smats);
}

Json ground_truth_to_json(const GroundTruth& gt) {
  Json out;
  out["family"] = gt.family;
  if (gt.seeded) {
    out["seed"] = gt.seed;
    out["algorithm"] = gt.algorithm;
  }
  Json expected = Json::object();
  auto put = [&expected](const char* key, const std::optional<bool>& v) {
    if (v.has_value()) expected[key] = *v;
  };
  put("ppt", gt.ppt);
  put("sppt", gt.sppt);
  put("ssppt", gt.ssppt);
  put("separable", gt.separable);
  put("legacy_ssppt", gt.legacy_ssppt);
  out["expected"] = std::move(expected);
  if (!gt.expected_criterion.empty())
    out["expected_criterion"] = gt.expected_criterion;
  if (!gt.params.empty()) out["params"] = gt.params;
  if (gt.has_factor) out["factor"] = factor_to_json(gt.factor);
  return out;
}

Json decomposition_to_json(const SeparableDecomposition& dec,
                           const DecompositionReport& report) {
  Json out;
  out["dims"] = dec.profile.dims;
  out["term_count"] = dec.terms.size();
  out["product_residual"] = dec.product_residual;
  out["reconstruction_residual"] = report.frobenius_residual;
  out["weight_sum_error"] = report.weight_sum_error;
  out["ok"] = report.ok;
  Json terms = Json::array();
  for (const auto& t : dec.terms) {
    Json jt;
    jt["weight"] = t.weight;
    Json factors = Json::array();
    for (const Vector& f : t.factors) factors.push_back(vector_to_json(f));
    jt["factors"] = std::move(factors);
    terms.push_back(std::move(jt));
  }
  out["terms"] = std::move(terms);
  return out;
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw std::runtime_error("cannot parse " + path + ": " + e.what());
  }
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string digest_hex(const std::string& bytes) {
  std::uint64_t h = fnv1a64(bytes);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

} // namespace sppt
