#pragma once

// JSON and CSV artifact formats shared by the CLI and tests. All emitters
// go through nlohmann::json with two-space indentation and object keys in
// sorted order, so equal inputs serialize to equal bytes.

#include <map>
#include <string>
#include <vector>

#include "relieve/dataset.hpp"
#include "relieve/errors.hpp"
#include "relieve/eval.hpp"
#include "relieve/manifest.hpp"
#include "relieve/redundancy.hpp"
#include "relieve/synth.hpp"

#include <json.hpp>

namespace relieve {

inline std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline nlohmann::json parse_json(const std::string& text, const std::string& what) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError(what + ": invalid JSON");
  return j;
}

inline nlohmann::json truth_to_json(const GroundTruth& t) {
  nlohmann::json j;
  j["relevant"] = t.relevant;
  j["irrelevant"] = t.irrelevant;
  return j;
}

inline GroundTruth truth_from_json(const nlohmann::json& j) {
  GroundTruth t;
  t.relevant = j.at("relevant").get<std::vector<std::string>>();
  t.irrelevant = j.at("irrelevant").get<std::vector<std::string>>();
  return t;
}

inline nlohmann::json weights_to_json(const FeatureWeights& w, const RunManifest& manifest) {
  nlohmann::json j;
  j["algorithm"] = w.algorithm;
  j["params"] = w.params;
  j["feature_order"] = w.order;
  j["weights"] = nlohmann::json::object();
  for (const auto& [name, value] : w.weights) j["weights"][name] = value;
  j["manifest"] = to_json(manifest);
  return j;
}

inline FeatureWeights weights_from_json(const nlohmann::json& j) {
  FeatureWeights w;
  w.algorithm = j.at("algorithm").get<std::string>();
  if (j.contains("params")) w.params = j.at("params").get<std::map<std::string, std::string>>();
  w.order = j.at("feature_order").get<std::vector<std::string>>();
  for (const auto& [name, value] : j.at("weights").items()) w.weights[name] = value.get<double>();
  for (const auto& name : w.order)
    if (!w.weights.count(name)) throw ParseError("weights file: missing weight for " + name);
  return w;
}

inline nlohmann::json criteria_to_json(const CriteriaReport& r) {
  nlohmann::json j;
  j["separability"] = r.separability;
  j["usability"] = r.usability;
  j["minimality"] = r.minimality;
  j["completeness"] = r.completeness;
  j["ordering"] = r.ordering;
  return j;
}

inline nlohmann::json redundancy_to_json(const RedundancyResult& r) {
  nlohmann::json j;
  j["feature"] = r.feature;
  j["level"] = r.level;
  j["best_subset"] = r.best_subset;
  j["evaluated_subsets"] = r.evaluated_subsets;
  return j;
}

// Schema sidecar: flat JSON object, feature name -> "nominal" | "linear".
inline SchemaHints schema_hints_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("schema sidecar: expected a JSON object");
  SchemaHints hints;
  for (const auto& [name, kind] : j.items()) {
    const std::string k = kind.get<std::string>();
    if (k == "nominal")
      hints[name] = FeatureKind::kNominal;
    else if (k == "linear")
      hints[name] = FeatureKind::kLinear;
    else
      throw ParseError("schema sidecar: kind for " + name + " must be nominal or linear");
  }
  return hints;
}

inline nlohmann::json schema_hints_to_json(const Dataset& d) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& fs : d.schema)
    j[fs.name] = fs.kind == FeatureKind::kNominal ? "nominal" : "linear";
  return j;
}

inline std::string curve_to_csv(const CvCurve& curve) {
  std::string out = "n_features,accuracy\n";
  for (const auto& pt : curve.points) {
    out += std::to_string(pt.n_features);
    out += ',';
    out += detail::format_number(pt.accuracy);
    out += '\n';
  }
  return out;
}

}  // namespace relieve
