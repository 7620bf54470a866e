#include <chrono>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sppt/pipeline.hpp"

namespace {

using namespace sppt;

DimensionProfile parse_dims(const std::string& text) {
  DimensionProfile profile;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) profile.dims.push_back(std::stoi(tok));
  profile.validate();
  return profile;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stoi(tok));
  return out;
}

// 0 on success; 3 unreadable/unparsable, 4 dims inconsistent with the matrix
int load_state(const std::string& path, DensityMatrix& rho, Json& meta) {
  Json j;
  try {
    j = read_json_file(path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  try {
    rho = state_from_json(j);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  if (j.contains("meta") && j.at("meta").is_object()) meta = j.at("meta");
  return 0;
}

std::string sidecar_path(const std::string& out) {
  const std::string ext = ".json";
  if (out.size() > ext.size() &&
      out.compare(out.size() - ext.size(), ext.size(), ext) == 0)
    return out.substr(0, out.size() - ext.size()) + ".meta.json";
  return out + ".meta.json";
}

GeneratedState make_state(const std::string& name, double b,
                          const std::string& dims_text, int d,
                          const std::string& flavor,
                          const std::string& mask_text, std::uint64_t seed) {
  if (name == "ha") return ha_state(b);
  if (name == "yuzhao") return yuzhao_counterexample();
  if (name == "bell") return bell_state();
  if (name == "ghz") return ghz_state();
  if (name == "maximally-mixed") return maximally_mixed(parse_dims(dims_text));
  if (name == "random-ssppt") return random_ssppt(parse_dims(dims_text), seed);
  if (name == "random-ssppt-masked") {
    DimensionProfile profile = parse_dims(dims_text);
    std::vector<int> mask = parse_ints(mask_text);
    if (mask.empty())
      throw std::invalid_argument("--mask is required for this family");
    return random_ssppt_masked(profile, mask, seed);
  }
  if (name == "random-cq") return random_cq(parse_dims(dims_text), seed);
  if (name == "random-sppt-2xd") return random_sppt_2xd(d, flavor, seed);
  if (name == "pure-product") {
    DimensionProfile profile = parse_dims(dims_text);
    Vector v;
    for (int p = 0; p < profile.count(); ++p) {
      Vector f = haar_unitary(profile.dims[p], seed + 101 * p).col(0);
      v = (p == 0) ? f : Vector(kron_vec(v, f));
    }
    GeneratedState out = pure_state(v, profile);
    out.ground_truth.family = "pure-product";
    out.ground_truth.algorithm = rng_algorithm_id;
    out.ground_truth.seed = seed;
    out.ground_truth.seeded = true;
    return out;
  }
  if (name == "canonical-22n") {
    DimensionProfile profile = parse_dims(dims_text);
    if (profile.count() != 3 || profile.dims[0] != 2 || profile.dims[1] != 2)
      throw std::invalid_argument("this family needs dims 2,2,N");
    const int n = profile.carrier_dim();
    std::vector<Matrix> pair = random_commuting_normal_family(n, 2, seed);
    Matrix dmat = random_psd(n, seed ^ 0xd00dfeedULL);
    GeneratedState out = canonical_22n(pair[0], pair[1], dmat);
    out.ground_truth.algorithm = rng_algorithm_id;
    out.ground_truth.seed = seed;
    out.ground_truth.seeded = true;
    return out;
  }
  if (name == "canonical-multipartite") {
    DimensionProfile profile = parse_dims(dims_text);
    const int n0 = profile.carrier_dim();
    int extra = 0;
    for (int p = 0; p < profile.levels(); ++p) extra += profile.dims[p] - 1;
    std::vector<Matrix> pool = random_commuting_normal_family(n0, extra, seed);
    std::vector<std::vector<Matrix>> families(profile.levels());
    int next = 0;
    for (int p = 0; p < profile.levels(); ++p) {
      families[p].push_back(Matrix::Identity(n0, n0));
      for (int j = 1; j < profile.dims[p]; ++j)
        families[p].push_back(pool[next++]);
    }
    GeneratedState out = canonical_multipartite(profile, families);
    out.ground_truth.algorithm = rng_algorithm_id;
    out.ground_truth.seed = seed;
    out.ground_truth.seeded = true;
    return out;
  }
  throw std::invalid_argument("unknown generator: " + name);
}

int run_classify(const std::string& input, double tol, bool legacy,
                 const std::string& json_path, std::uint64_t seed) {
  DensityMatrix rho;
  Json meta = Json::object();
  if (int rc = load_state(input, rho, meta)) return rc;

  StructuredFactor supplied;
  bool has_supplied = false;
  if (meta.contains("factor")) {
    try {
      supplied = factor_from_json(meta.at("factor"));
      has_supplied = true;
    } catch (const std::exception& e) {
      std::cerr << "warning: embedded factor ignored: " << e.what() << "\n";
    }
  }

  ClassificationOptions opts;
  opts.tol = tol;
  opts.legacy = legacy;
  opts.seed = seed;
  auto t0 = std::chrono::steady_clock::now();
  ClassificationReport rep =
      classify_state(rho, opts, has_supplied ? &supplied : nullptr);
  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::cout << render_text(rep);
  if (!json_path.empty()) write_json_file(json_path, render_json(rep));
  return rep.valid ? 0 : 2;
}

int run_generate(const std::string& name, const std::string& output, double b,
                 const std::string& dims_text, int d, const std::string& flavor,
                 const std::string& mask_text, std::uint64_t seed) {
  GeneratedState st;
  try {
    st = make_state(name, b, dims_text, d, flavor, mask_text, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  Json meta = ground_truth_to_json(st.ground_truth);
  Json state = state_to_json(st.rho, meta);
  write_json_file(output, state);

  Json sidecar;
  sidecar["source"] = name;
  sidecar["digest"] = digest_hex(state.dump());
  sidecar["ground_truth"] = meta;
  write_json_file(sidecar_path(output), sidecar);
  std::cout << "wrote " << output << "  (" << st.rho.profile.to_string()
            << ", digest " << sidecar["digest"].get<std::string>() << ")\n";
  return 0;
}

int run_decompose(const std::string& input, const std::string& output,
                  double tol, std::uint64_t seed) {
  DensityMatrix rho;
  Json meta = Json::object();
  if (int rc = load_state(input, rho, meta)) return rc;
  try {
    rho.validate(defaults::validation_tol);
  } catch (const std::exception& e) {
    std::cerr << "error: not a valid density matrix: " << e.what() << "\n";
    return 2;
  }
  if (!rho.normalized) rho.entries /= rho.entries.trace().real();

  StructuredFactor factor = canonical_factor(rho, tol);
  SpptVerdict gate = ssppt_multipartite(factor, tol);
  if (!gate.holds) {
    std::cerr << "error: state is not SSPPT";
    if (!gate.witness.empty())
      std::cerr << ", commutator " << gate.witness << " fails (residual "
                << gate.max_residual << ")";
    std::cerr << "\n";
    return 5;
  }

  SeparableDecomposition dec = separable_decomposition_ssppt(factor, tol, seed);
  DecompositionReport report = verify_decomposition(dec, rho, tol);
  write_json_file(output, decomposition_to_json(dec, report));
  std::cout << "wrote " << output << "  (" << dec.terms.size()
            << " terms, reconstruction residual " << report.frobenius_residual
            << ")\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"SPPT/SSPPT classifier for multipartite density matrices"};
  app.require_subcommand(1);

  std::string input, output, json_path;
  std::string name, dims_text = "2,2", flavor = "normal", mask_text;
  double tol = 1e-8, b = 0.5;
  int d = 3;
  std::uint64_t seed = defaults::internal_seed;

  CLI::App* classify = app.add_subcommand("classify", "classify a state file");
  classify->add_option("input", input, "state JSON file")->required();
  classify->add_option("--tol", tol, "verdict tolerance");
  classify->add_flag("--legacy", "also run the flattened triangular tests");
  classify->add_option("--json", json_path, "write the machine report here");
  classify->add_option("--seed", seed, "seed for randomized subroutines");

  CLI::App* generate = app.add_subcommand("generate", "write a named state file");
  generate->add_option("name", name, "family name")->required();
  generate->add_option("output", output, "output state file")->required();
  generate->add_option("--b", b, "ha family parameter in (0,1)");
  generate->add_option("--dims", dims_text, "comma-separated dimensions");
  generate->add_option("--d", d, "carrier dimension for the 2xd family");
  generate->add_option("--flavor", flavor,
                       "2xd flavor: contractive, normal, a_gt_d");
  generate->add_option("--mask", mask_text, "comma-separated 0/1 block mask");
  generate->add_option("--seed", seed, "generator seed");

  CLI::App* decompose = app.add_subcommand("decompose", "emit a separable decomposition");
  decompose->add_option("input", input, "state JSON file")->required();
  decompose->add_option("output", output, "decomposition JSON file")->required();
  decompose->add_option("--tol", tol, "verdict tolerance");
  decompose->add_option("--seed", seed, "seed for randomized subroutines");

  CLI11_PARSE(app, argc, argv);

  try {
    if (classify->parsed())
      return run_classify(input, tol, classify->count("--legacy") > 0,
                          json_path, seed);
    if (generate->parsed())
      return run_generate(name, output, b, dims_text, d, flavor, mask_text,
                          seed);
    if (decompose->parsed()) return run_decompose(input, output, tol, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
