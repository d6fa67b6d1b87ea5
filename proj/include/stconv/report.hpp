#pragma once

#include "json.hpp"

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stconv/classify.hpp"
#include "stconv/density.hpp"
#include "stconv/stanalysis.hpp"
#include "stconv/theorems.hpp"

namespace stconv {

/// Reports keep insertion order so serialized output is byte-stable.
using Json = nlohmann::ordered_json;

inline Json checkpoints_json(const DensityProfile& p) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < p.size(); ++i)
    rows.push_back({{"checkpoint", p.checkpoints[i]}, {"count", p.counts[i]}, {"ratio", p.ratio(i)}});
  return rows;
}

inline Json optional_json(const std::optional<std::uint64_t>& v) { return v ? Json(*v) : Json(nullptr); }

inline Json density_verdict_json(const DensityVerdict& v) {
  return Json{{"target", v.target.describe()},
              {"tolerance", v.tolerance},
              {"decision", to_string(v.decision)},
              {"horizon", v.horizon()},
              {"final_ratio", v.profile.final_ratio()},
              {"witness", optional_json(v.witness)},
              {"checkpoints", checkpoints_json(v.profile)}};
}

/// {kind, decision, horizon, epsilon_grid, per_epsilon, witness} plus the
/// kind-specific fields (limit, bound, anchors).
inline Json verdict_json(const StVerdict& v) {
  Json j;
  j["kind"] = to_string(v.kind);
  j["sequence"] = v.sequence;
  j["decision"] = to_string(v.decision);
  j["horizon"] = v.horizon;
  j["tolerance"] = v.tolerance;
  j["epsilon_grid"] = v.epsilon_grid;
  switch (v.kind) {
    case VerdictKind::convergence: j["limit"] = v.limit ? Json(v.limit->describe()) : Json(nullptr); break;
    case VerdictKind::bounded:
      j["bound"] = v.bound;
      j["probes_tried"] = v.probes_tried;
      break;
    case VerdictKind::cauchy: j["anchors"] = v.anchors; break;
    case VerdictKind::norm_bounded:
    case VerdictKind::norm_null: j["observed_max"] = v.bound; break;
  }
  Json rows = Json::array();
  std::optional<std::uint64_t> witness;
  for (std::size_t i = 0; i < v.per_epsilon.size(); ++i) {
    const auto& d = v.per_epsilon[i];
    rows.push_back({{"epsilon", v.epsilon_grid.at(i)},
                    {"final_ratio", d.profile.final_ratio()},
                    {"decision", to_string(d.decision)},
                    {"witness", optional_json(d.witness)}});
    if (!witness && d.decision == Decision::refuted) witness = d.witness;
  }
  j["per_epsilon"] = rows;
  j["witness"] = optional_json(witness);
  return j;
}

/// Rows (epsilon, checkpoint, count, ratio), one per checkpoint per epsilon.
inline std::string verdict_csv(const StVerdict& v) {
  std::ostringstream out;
  out << "epsilon,checkpoint,count,ratio\n";
  for (std::size_t i = 0; i < v.per_epsilon.size(); ++i) {
    const auto& p = v.per_epsilon[i].profile;
    for (std::size_t c = 0; c < p.size(); ++c)
      out << format_number(v.epsilon_grid.at(i)) << "," << p.checkpoints[c] << "," << p.counts[c] << ","
          << format_number(p.ratio(c)) << "\n";
  }
  return out.str();
}

inline std::string profile_csv(const DensityProfile& p) {
  std::ostringstream out;
  out << "checkpoint,count,ratio\n";
  for (std::size_t c = 0; c < p.size(); ++c)
    out << p.checkpoints[c] << "," << p.counts[c] << "," << format_number(p.ratio(c)) << "\n";
  return out.str();
}

inline Json evaluation_json(const Evaluation& e, bool full) {
  Json j;
  j["sequence"] = e.sequence;
  if (full) {
    j["hypothesis"] = verdict_json(e.hypothesis);
    j["conclusion"] = e.conclusion ? verdict_json(*e.conclusion) : Json(nullptr);
  } else {
    j["hypothesis"] = to_string(e.hypothesis.decision);
    j["conclusion"] = e.conclusion ? Json(to_string(e.conclusion_decision)) : Json(nullptr);
    if (e.conclusion && e.conclusion->kind == VerdictKind::bounded && e.conclusion_decision == Decision::confirmed)
      j["bound"] = e.conclusion->bound;
  }
  j["conclusion_decision"] = to_string(e.conclusion_decision);
  return j;
}

inline Json classification_json(const ClassificationReport& r) {
  Json j;
  j["operator"] = r.op;
  j["property"] = to_string(r.property);
  j["outcome"] = to_string(r.outcome);
  j["corpus_version"] = r.corpus_version;
  j["corpus_size"] = r.corpus_size;
  j["horizon"] = r.horizon;
  j["tolerance"] = r.tolerance;
  j["epsilon_grid"] = r.epsilon_grid;
  j["instances"] = r.instances;
  j["bound"] = r.bound ? Json(*r.bound) : Json(nullptr);
  Json evals = Json::array();
  for (const auto& e : r.evaluations) evals.push_back(evaluation_json(e, false));
  j["evaluations"] = evals;
  Json wit = Json::array();
  for (const auto& e : r.witnesses) wit.push_back(evaluation_json(e, true));
  j["witnesses"] = wit;
  return j;
}

inline std::string classification_csv(const ClassificationReport& r) {
  std::ostringstream out;
  out << "sequence,hypothesis,conclusion\n";
  for (const auto& e : r.evaluations)
    out << '"' << e.sequence << "\"," << to_string(e.hypothesis.decision) << ","
        << (e.conclusion ? to_string(e.conclusion_decision) : "") << "\n";
  return out.str();
}

inline Json theorem_json(const TheoremCheckResult& r) {
  Json j;
  j["id"] = r.id;
  j["status"] = r.status();
  j["minimum"] = r.minimum;
  j["instances"] = r.instances;
  j["passes"] = r.passes;
  Json fails = Json::array();
  for (const auto& f : r.failures) {
    Json w = Json::array();
    for (const auto& e : f.witnesses) w.push_back(evaluation_json(e, true));
    fails.push_back({{"instance", f.instance}, {"reason", f.reason}, {"witnesses", w}});
  }
  j["failures"] = fails;
  j["notes"] = r.notes;
  return j;
}

inline std::string suite_csv(const std::vector<TheoremCheckResult>& results) {
  std::ostringstream out;
  out << "id,status,instances,passes,minimum\n";
  for (const auto& r : results)
    out << r.id << "," << r.status() << "," << r.instances << "," << r.passes << "," << r.minimum << "\n";
  return out.str();
}

}  // namespace stconv
