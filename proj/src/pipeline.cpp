#include "sppt/pipeline.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace sppt {
namespace {

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

std::string yesno(bool b) { return b ? "yes" : "no"; }

std::string join_ints(const std::vector<int>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ",";
    os << v[i];
  }
  return os.str();
}

Json verdict_to_json(const SpptVerdict& v) {
  Json out;
  out["definition"] = v.definition_id;
  out["holds"] = v.holds;
  out["indeterminate"] = v.indeterminate;
  out["max_residual"] = v.max_residual;
  out["equation_count"] = v.equation_count;
  if (!v.witness.empty()) out["witness"] = v.witness;
  if (!v.note.empty()) out["note"] = v.note;
  Json eqs = Json::array();
  for (const auto& e : v.equations) {
    Json je;
    je["label"] = e.label;
    je["residual"] = e.residual;
    eqs.push_back(std::move(je));
  }
  out["equations"] = std::move(eqs);
  return out;
}

Json criterion_to_json(const CriterionResult& c) {
  Json out;
  out["criterion"] = c.criterion_id;
  out["conclusion"] = to_string(c.conclusion);
  out["evidence"] = c.evidence;
  if (!c.values.empty()) out["values"] = c.values;
  if (!c.witness.empty()) {
    Json w = Json::array();
    for (const Vector& f : c.witness) w.push_back(vector_to_json(f));
    out["witness"] = std::move(w);
  }
  return out;
}

void run_verdicts(ClassificationReport& rep, const StructuredFactor& f,
                  const std::string& source, double tol, bool legacy) {
  const auto& dims = f.profile.dims;
  auto add = [&rep, &source](SpptVerdict v) {
    rep.verdicts.push_back(std::move(v));
    rep.verdict_sources.push_back(source);
  };
  if (f.profile.count() == 2) {
    add(sppt_bipartite(f, tol));
    add(ssppt_bipartite(f, tol));
  }
  if (f.profile.count() == 3 && dims[0] == 2 && dims[1] == 2) {
    add(sppt_22n(f, tol));
    add(ssppt_22n(f, tol));
  }
  if (f.profile.count() == 3) {
    add(sppt_tripartite(f, tol));
    add(ssppt_tripartite(f, tol));
  }
  if (f.profile.count() >= 3) {
    add(sppt_multipartite(f, tol));
    add(ssppt_multipartite(f, tol));
  }
  if (legacy && f.profile.count() >= 3) {
    add(sppt_yuzhao(f, tol));
    add(ssppt_yuzhao(f, tol));
  }
}

const SpptVerdict* find_verdict(const ClassificationReport& rep,
                                const std::string& id,
                                const std::string& source) {
  for (size_t i = 0; i < rep.verdicts.size(); ++i)
    if (rep.verdicts[i].definition_id == id && rep.verdict_sources[i] == source)
      return &rep.verdicts[i];
  return nullptr;
}

// the decomposition gate: the strongest commutator verdict for the profile
const SpptVerdict* ssppt_gate(const ClassificationReport& rep,
                              const DimensionProfile& profile,
                              const std::string& source) {
  if (profile.count() == 2) {
    const SpptVerdict* v = find_verdict(rep, "ssppt-bipartite", source);
    if (v) return v;
  }
  return find_verdict(rep, "ssppt-multipartite", source);
}

} // namespace

ClassificationReport classify_state(const DensityMatrix& rho,
                                    const ClassificationOptions& opts,
                                    const StructuredFactor* supplied) {
  ClassificationReport rep;
  rep.profile = rho.profile;
  rep.tol = opts.tol;
  rep.seed = opts.seed;
  rep.input_digest = digest_hex(state_to_json(rho).dump());

  DensityMatrix work = rho;
  rep.trace = work.trace_real();
  rep.hermiticity_residual = work.hermiticity_residual();
  rep.min_eigenvalue = work.min_eigenvalue();
  if (!work.normalized) {
    if (rep.trace <= 0.0) {
      rep.validity_note = "trace is not positive";
      return rep;
    }
    work.entries /= rep.trace;
    work.normalized = true;
  }
  try {
    work.validate(defaults::validation_tol);
    rep.valid = true;
  } catch (const std::invalid_argument& e) {
    rep.validity_note = e.what();
    return rep;
  }

  rep.ppt = is_ppt(work);
  rep.has_ppt = true;

  StructuredFactor canon;
  try {
    canon = canonical_factor(work, opts.tol);
    rep.has_factor = true;
    rep.factor_representable = canon.representable;
    rep.factor_block_residual = canon.max_block_residual;
    rep.factor_intermediate_offdiag = canon.intermediate_offdiag;
  } catch (const std::exception& e) {
    rep.factor_note = e.what();
  }

  if (rep.has_factor)
    run_verdicts(rep, canon, "canonical", opts.tol, opts.legacy);
  if (supplied) {
    if (supplied->profile == rho.profile) {
      run_verdicts(rep, *supplied, "supplied", opts.tol, opts.legacy);
    } else {
      rep.factor_note += (rep.factor_note.empty() ? "" : "; ");
      rep.factor_note += "supplied factor profile mismatch, ignored";
    }
  }

  // decompose from the canonical factor, falling back to a supplied one
  const SpptVerdict* canon_gate =
      rep.has_factor ? ssppt_gate(rep, rho.profile, "canonical") : nullptr;
  const SpptVerdict* supplied_gate =
      supplied ? ssppt_gate(rep, rho.profile, "supplied") : nullptr;
  const StructuredFactor* dec_source = nullptr;
  std::string dec_origin;
  if (canon_gate && canon_gate->holds) {
    dec_source = &canon;
    dec_origin = "canonical";
  } else if (supplied_gate && supplied_gate->holds) {
    dec_source = supplied;
    dec_origin = "supplied";
  }
  if (dec_source) {
    rep.decomposition.attempted = true;
    try {
      rep.decomposition.decomposition =
          separable_decomposition_ssppt(*dec_source, opts.tol, opts.seed);
      rep.decomposition.produced = true;
      rep.decomposition.term_count =
          static_cast<int>(rep.decomposition.decomposition.terms.size());
      rep.decomposition.report = verify_decomposition(
          rep.decomposition.decomposition, work, opts.tol);
      rep.decomposition.note = "from the " + dec_origin + " factor";
    } catch (const std::exception& e) {
      rep.decomposition.note = e.what();
    }
  } else if (rep.has_factor) {
    const SpptVerdict* g = canon_gate ? canon_gate : supplied_gate;
    rep.decomposition.note =
        g && !g->indeterminate && !g->witness.empty()
            ? "not attempted: commutator " + g->witness + " fails"
            : "not attempted: factor is not structure-representable";
  }

  if (rho.profile.count() == 2 && rho.profile.dims[0] == 2) {
    TwoByDBlocks blocks = two_by_d_blocks(work, opts.tol);
    rep.battery_source = "canonical";
    // the battery is factor-relative; prefer a supplied factor whose
    // transpose-factor equation holds when the extracted one fails it
    if ((!blocks.representable || blocks.sppt_residual > opts.tol) &&
        supplied && supplied->profile == rho.profile &&
        !supplied->diag_blocks.empty()) {
      double scale = supplied->X.norm();
      if (scale > 0.0) {
        TwoByDBlocks alt = two_by_d_blocks_from(
            supplied->diag_blocks[0] / scale, supplied->smat(0, 0, 1),
            supplied->diag_blocks[1] / scale, opts.tol);
        if (alt.representable && alt.sppt_residual <= opts.tol) {
          blocks = alt;
          rep.battery_source = "supplied";
        }
      }
    }
    rep.battery_sppt_residual = blocks.sppt_residual;
    rep.battery = criterion_battery_2xd(blocks, opts.tol);
    rep.has_battery = true;
    if (rho.profile.dims[1] == 5) {
      rep.classification = classify_2x5_sppt(blocks, opts.tol);
      rep.has_classification = true;
    }
  }

  if (numeric_rank(work.entries) <= 4) {
    rep.rank4 = rank4_analysis(work, opts.tol);
    rep.has_rank4 = true;
  }
  return rep;
}

std::string render_text(const ClassificationReport& rep) {
  std::ostringstream os;
  os << "state " << rep.profile.to_string() << "  digest " << rep.input_digest
     << "  tol " << sci(rep.tol) << "\n";
  os << "  trace " << rep.trace << "  hermiticity residual "
     << sci(rep.hermiticity_residual) << "  min eigenvalue "
     << sci(rep.min_eigenvalue) << "\n";
  if (!rep.valid) {
    os << "  NOT a valid density matrix: " << rep.validity_note << "\n";
    return os.str();
  }
  if (rep.has_ppt) {
    os << "ppt: " << yesno(rep.ppt.ppt) << "  (min eigenvalue "
       << sci(rep.ppt.min_eigenvalue);
    if (!rep.ppt.ppt) os << " on subset {" << join_ints(rep.ppt.worst_subset) << "}";
    os << ")\n";
  }
  if (rep.has_factor) {
    os << "factor: representable " << yesno(rep.factor_representable)
       << "  block residual " << sci(rep.factor_block_residual)
       << "  off-structure mass " << sci(rep.factor_intermediate_offdiag)
       << "\n";
  }
  if (!rep.factor_note.empty()) os << "factor note: " << rep.factor_note << "\n";
  for (size_t i = 0; i < rep.verdicts.size(); ++i) {
    const auto& v = rep.verdicts[i];
    os << "  [" << rep.verdict_sources[i] << "] " << v.definition_id << ": ";
    if (v.indeterminate)
      os << "indeterminate";
    else
      os << (v.holds ? "holds" : "fails");
    os << "  (max residual " << sci(v.max_residual) << " over "
       << v.equation_count << " equations";
    if (!v.witness.empty()) os << ", worst " << v.witness;
    os << ")";
    if (!v.note.empty()) os << "  " << v.note;
    os << "\n";
  }
  if (rep.decomposition.attempted) {
    os << "decomposition: ";
    if (rep.decomposition.produced) {
      os << rep.decomposition.term_count << " product terms, reconstruction "
         << sci(rep.decomposition.report.frobenius_residual) << ", verified "
         << yesno(rep.decomposition.report.ok);
    } else {
      os << "failed: " << rep.decomposition.note;
    }
    os << "\n";
    if (rep.decomposition.produced && !rep.decomposition.note.empty())
      os << "  " << rep.decomposition.note << "\n";
  } else if (!rep.decomposition.note.empty()) {
    os << "decomposition " << rep.decomposition.note << "\n";
  }
  if (rep.has_battery) {
    os << "criteria battery [" << rep.battery_source << ", blocks residual "
       << sci(rep.battery_sppt_residual) << "]:\n";
    for (const auto& c : rep.battery)
      os << "  " << c.criterion_id << ": " << to_string(c.conclusion) << "  "
         << c.evidence << "\n";
  }
  if (rep.has_classification) {
    os << "2x5 classification: " << to_string(rep.classification.conclusion)
       << "  " << rep.classification.evidence << "\n";
  }
  if (rep.has_rank4) {
    os << "low-rank analysis [" << rep.rank4.criterion_id
       << "]: " << to_string(rep.rank4.conclusion) << "  "
       << rep.rank4.evidence << "\n";
  }
  if (rep.elapsed_seconds > 0.0)
    os << "elapsed " << rep.elapsed_seconds << " s\n";
  return os.str();
}

Json render_json(const ClassificationReport& rep) {
  Json out;
  out["digest"] = rep.input_digest;
  out["dims"] = rep.profile.dims;
  out["tol"] = rep.tol;
  out["seed"] = rep.seed;
  out["valid"] = rep.valid;
  Json validity;
  validity["trace"] = rep.trace;
  validity["hermiticity_residual"] = rep.hermiticity_residual;
  validity["min_eigenvalue"] = rep.min_eigenvalue;
  if (!rep.validity_note.empty()) validity["note"] = rep.validity_note;
  out["validity"] = std::move(validity);
  if (rep.has_ppt) {
    Json ppt;
    ppt["ppt"] = rep.ppt.ppt;
    ppt["min_eigenvalue"] = rep.ppt.min_eigenvalue;
    ppt["worst_subset"] = rep.ppt.worst_subset;
    Json subsets = Json::array();
    for (const auto& kv : rep.ppt.subset_eigenvalues) {
      Json js;
      js["subset"] = kv.first;
      js["min_eigenvalue"] = kv.second;
      subsets.push_back(std::move(js));
    }
    ppt["subsets"] = std::move(subsets);
    out["ppt"] = std::move(ppt);
  }
  if (rep.has_factor) {
    Json f;
    f["representable"] = rep.factor_representable;
    f["block_residual"] = rep.factor_block_residual;
    f["intermediate_offdiag"] = rep.factor_intermediate_offdiag;
    if (!rep.factor_note.empty()) f["note"] = rep.factor_note;
    out["factor"] = std::move(f);
  } else if (!rep.factor_note.empty()) {
    out["factor"] = Json{{"note", rep.factor_note}};
  }
  Json verdicts = Json::array();
  for (size_t i = 0; i < rep.verdicts.size(); ++i) {
    Json v = verdict_to_json(rep.verdicts[i]);
    v["source"] = rep.verdict_sources[i];
    verdicts.push_back(std::move(v));
  }
  out["verdicts"] = std::move(verdicts);
  if (rep.decomposition.attempted || !rep.decomposition.note.empty()) {
    Json d;
    d["attempted"] = rep.decomposition.attempted;
    d["produced"] = rep.decomposition.produced;
    if (rep.decomposition.produced) {
      d["terms"] = rep.decomposition.term_count;
      d["reconstruction_residual"] =
          rep.decomposition.report.frobenius_residual;
      d["weight_sum_error"] = rep.decomposition.report.weight_sum_error;
      d["verified"] = rep.decomposition.report.ok;
    }
    if (!rep.decomposition.note.empty()) d["note"] = rep.decomposition.note;
    out["decomposition"] = std::move(d);
  }
  if (rep.has_battery) {
    Json b = Json::array();
    for (const auto& c : rep.battery) b.push_back(criterion_to_json(c));
    out["battery"] = std::move(b);
    out["battery_source"] = rep.battery_source;
    out["battery_blocks_residual"] = rep.battery_sppt_residual;
  }
  if (rep.has_classification)
    out["classification_2x5"] = criterion_to_json(rep.classification);
  if (rep.has_rank4) out["rank4"] = criterion_to_json(rep.rank4);
  return out;
}

} // namespace sppt
