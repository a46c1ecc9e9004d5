// relieve: feature-weighting workbench.
//
// Subcommands: gen (synthetic datasets with ground truth), weigh (feature
// weights by any of the seventeen algorithms), eval (weights vs. ground
// truth), knn-curve (cross-validated 1-NN accuracy over weight-ranked
// feature prefixes), redundancy (exhaustive redundancy level).
//
// Exit codes: 0 ok, 2 usage or parse problem, 3 I/O failure, 4 internal.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relieve/dataset.hpp"
#include "relieve/errors.hpp"
#include "relieve/eval.hpp"
#include "relieve/filters.hpp"
#include "relieve/io.hpp"
#include "relieve/manifest.hpp"
#include "relieve/probstats.hpp"
#include "relieve/redundancy.hpp"
#include "relieve/relief.hpp"
#include "relieve/relief_double.hpp"
#include "relieve/synth.hpp"
#include "relieve/version.hpp"

namespace fs = std::filesystem;

namespace {

bool g_quiet = false;

void note(const std::string& line) {
  if (!g_quiet) std::cerr << line << "\n";
}

std::string file_stem(const std::string& path) { return fs::path(path).stem().string(); }

fs::path sidecar(const fs::path& primary, const char* ext) {
  fs::path p = primary;
  p.replace_extension(ext);
  return p;
}

// Input datasets must exist up front (pointing at a missing file is a usage
// mistake, not an I/O failure). A schema sidecar next to the file, if any,
// pins nominal/linear kinds.
struct LoadedData {
  relieve::Dataset data;
  std::string hash;
};

LoadedData load_dataset(const std::string& path) {
  if (!fs::exists(path)) throw relieve::UsageError("data file not found: " + path);
  const std::string text = relieve::read_file(path);
  relieve::SchemaHints hints;
  const fs::path schema_path = sidecar(fs::path(path), ".schema.json");
  if (fs::exists(schema_path)) {
    hints = relieve::schema_hints_from_json(
        relieve::parse_json(relieve::read_file(schema_path), schema_path.string()));
  }
  LoadedData out{relieve::parse_csv(text, hints, file_stem(path)), relieve::fnv1a64_hex(text)};
  return out;
}

nlohmann::json load_json_file(const std::string& path, const char* what) {
  if (!fs::exists(path)) throw relieve::UsageError(std::string(what) + " file not found: " + path);
  return relieve::parse_json(relieve::read_file(path), what);
}

void emit_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  relieve::write_file_atomic(out_path, text);
  note("wrote " + out_path);
}

// gen writes four files next to -o: data CSV, ground truth, schema kinds,
// and the run manifest. The manifest hash covers the CSV bytes.
void write_generated(const relieve::SynthResult& r, const std::string& out_path,
                     relieve::RunManifest manifest) {
  if (out_path.empty()) throw relieve::UsageError("gen: -o/--out is required");
  const fs::path primary(out_path);
  const std::string csv = relieve::to_csv(r.data);
  manifest.dataset_hash = relieve::fnv1a64_hex(csv);
  relieve::write_file_atomic(primary, csv);
  relieve::write_file_atomic(sidecar(primary, ".truth.json"),
                             relieve::dump_json(relieve::truth_to_json(r.truth)));
  relieve::write_file_atomic(sidecar(primary, ".schema.json"),
                             relieve::dump_json(relieve::schema_hints_to_json(r.data)));
  relieve::write_file_atomic(sidecar(primary, ".manifest.json"),
                             relieve::dump_json(relieve::to_json(manifest)));
  note("wrote " + out_path + " (" + std::to_string(r.data.n_rows()) + " rows, " +
       std::to_string(r.data.n_features()) + " features)");
}

std::map<std::string, std::string> base_params(std::uint64_t seed) {
  return {{"seed", std::to_string(seed)}};
}

// ---- weigh ----------------------------------------------------------------

struct WeighArgs {
  std::string data_path;
  std::string algorithm;
  std::string out_path;
  std::size_t k = 10;
  std::string m = "all";
  std::uint64_t seed = 0;
  std::string t = "auto";
  bool auto_t = false;
  std::string missing = "basic";
  bool laplace = false;
  int bins = 10;
  std::string positive_value;
  bool vdm_classic = false;
};

std::size_t parse_m(const std::string& m) {
  if (m == "all") return 0;
  std::size_t value = 0;
  const auto* begin = m.data();
  const auto* end = m.data() + m.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || value == 0)
    throw relieve::UsageError("weigh: --m must be 'all' or a positive integer");
  return value;
}

relieve::DiffMetric parse_metric(const WeighArgs& a) {
  relieve::DiffMetric metric;
  if (a.missing == "basic")
    metric.missing = relieve::MissingDiff::kBasic;
  else if (a.missing == "conditional")
    metric.missing = relieve::MissingDiff::kConditional;
  else
    throw relieve::UsageError("weigh: --missing must be basic or conditional");
  metric.laplace = a.laplace;
  return metric;
}

const std::map<std::string, relieve::FilterMeasure>& filter_names() {
  static const std::map<std::string, relieve::FilterMeasure> names = {
      {"ccf", relieve::FilterMeasure::kCcf},
      {"gini", relieve::FilterMeasure::kGiniGain},
      {"ig", relieve::FilterMeasure::kInfoGain},
      {"gr", relieve::FilterMeasure::kGainRatio},
      {"entdist", relieve::FilterMeasure::kEntropyDist},
      {"mantaras", relieve::FilterMeasure::kMantarasDist},
      {"diffdist", relieve::FilterMeasure::kDistDiff},
      {"kl", relieve::FilterMeasure::kKlDiff},
      {"chi2", relieve::FilterMeasure::kChi2},
  };
  return names;
}

// Features with several values get per-value or per-class sub-scores; the
// reported weight is a scalar summary (max class posterior for pcf, mean
// over occurring values for vdm) so every algorithm emits one number per
// feature and reports stay comparable.
relieve::FeatureWeights weigh_filters(const relieve::Dataset& d, const WeighArgs& a) {
  relieve::FeatureWeights w;
  w.algorithm = a.algorithm;
  w.params["bins"] = std::to_string(a.bins);
  for (const auto& fs : d.schema) w.order.push_back(fs.name);

  for (std::size_t f = 0; f < d.n_features(); ++f) {
    const std::string& name = d.schema[f].name;
    if (a.algorithm == "pcf") {
      if (!a.positive_value.empty()) w.params["positive_value"] = a.positive_value;
      double best = 0.0;
      for (const auto& [_, p] : relieve::pcf_weights(d, f, a.positive_value))
        best = std::max(best, p);
      w.weights[name] = best;
    } else if (a.algorithm == "vdm") {
      w.params["variant"] = a.vdm_classic ? "classic" : "ratio";
      const relieve::Dataset* src = &d;
      relieve::Dataset binned;
      if (d.schema[f].kind == relieve::FeatureKind::kLinear) {
        binned = relieve::discretize(d, f, a.bins);
        src = &binned;
      }
      const auto per_value = relieve::vdm_weights(*src, f, a.vdm_classic);
      double sum = 0.0;
      for (const auto& [_, v] : per_value) sum += v;
      w.weights[name] = per_value.empty() ? 0.0 : sum / static_cast<double>(per_value.size());
    } else if (a.algorithm == "ccf") {
      if (!a.positive_value.empty()) w.params["positive_value"] = a.positive_value;
      const relieve::Dataset* src = &d;
      relieve::Dataset binned;
      if (d.schema[f].kind == relieve::FeatureKind::kLinear) {
        binned = relieve::discretize(d, f, a.bins);
        src = &binned;
      }
      const bool binary = src->schema[f].values.size() == 2;
      w.weights[name] =
          relieve::ccf_weight(*src, f, binary ? a.positive_value : std::string{}).weight;
    } else {
      w.weights[name] = relieve::filter_weight(d, f, filter_names().at(a.algorithm), a.bins);
    }
  }
  return w;
}

relieve::FeatureWeights run_weigh(const relieve::Dataset& d, const WeighArgs& a) {
  if (filter_names().count(a.algorithm) || a.algorithm == "pcf" || a.algorithm == "vdm")
    return weigh_filters(d, a);

  relieve::ReliefConfig cfg;
  cfg.m = parse_m(a.m);
  cfg.k = a.k;
  cfg.seed = a.seed;
  cfg.metric = parse_metric(a);

  if (a.algorithm == "relief") {
    cfg.variant = relieve::ReliefVariant::kOriginal;
    return relieve::run_relief(d, cfg);
  }
  if (a.algorithm == "relieved") {
    cfg.variant = relieve::ReliefVariant::kRelieved;
    return relieve::run_relief(d, cfg);
  }
  if (a.algorithm == "relieff") {
    cfg.variant = relieve::ReliefVariant::kRelieff;
    return relieve::run_relief(d, cfg);
  }
  if (a.algorithm == "myopic") {
    cfg.variant = relieve::ReliefVariant::kMyopic;
    return relieve::run_relief(d, cfg);
  }

  if (a.algorithm == "drelieff" || a.algorithm == "pdrelieff") {
    relieve::ProgressiveSchedule sched;
    if (a.t == "auto" || a.auto_t) {
      sched.automatic = true;
    } else {
      sched.automatic = false;
      try {
        sched.T = std::stod(a.t);
      } catch (const std::exception&) {
        throw relieve::UsageError("weigh: --t must be 'auto' or a positive number");
      }
      if (!(sched.T > 0.0))
        throw relieve::UsageError("weigh: --t must be 'auto' or a positive number");
    }
    const auto variant = a.algorithm == "drelieff" ? relieve::DoubleVariant::kWeighted
                                                   : relieve::DoubleVariant::kProgressive;
    return relieve::run_double_relief(d, cfg, variant, sched);
  }

  throw relieve::UsageError("weigh: unknown algorithm " + a.algorithm);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"feature-weighting workbench"};
  app.set_version_flag("--version", std::string(relieve::kToolName) + " " + relieve::kToolVersion);
  app.add_flag("--quiet", g_quiet, "suppress status lines on stderr");
  app.require_subcommand(1);
  app.fallthrough();

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "generate a synthetic dataset with ground truth");
  gen->require_subcommand(1);
  gen->fallthrough();

  struct GenArgs {
    std::string out;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    int p = 2;
    int important = 1;
    int random = 0;
    int irrelevant = 17;
    double noise = -1.0;  // sentinel: per-family default
    int which = 1;
    bool exhaustive = false;
  };
  auto gen_args = std::make_shared<GenArgs>();

  auto add_gen_common = [&](CLI::App* sub, bool with_n) {
    sub->add_option("-o,--out", gen_args->out, "output CSV path (sidecars written next to it)");
    sub->add_option("--seed", gen_args->seed, "RNG seed");
    if (with_n) sub->add_option("--n", gen_args->n, "instance count");
    sub->fallthrough();
  };

  auto* gen_modulo = gen->add_subcommand("modulo", "class = sum of first I features mod p");
  add_gen_common(gen_modulo, true);
  gen_modulo->add_option("--p", gen_args->p, "modulus and value count per feature");
  gen_modulo->add_option("--important", gen_args->important, "number of class-defining features");
  gen_modulo->add_option("--random", gen_args->random, "number of pure-noise features");
  gen_modulo->callback([gen_args] {
    if (gen_args->n == 0) throw relieve::UsageError("gen modulo: --n is required");
    const auto r = relieve::gen_modulo(gen_args->p, gen_args->important, gen_args->random,
                                       gen_args->n, gen_args->seed);
    relieve::RunManifest m{"gen modulo", base_params(gen_args->seed), "", gen_args->seed};
    m.params["p"] = std::to_string(gen_args->p);
    m.params["important"] = std::to_string(gen_args->important);
    m.params["random"] = std::to_string(gen_args->random);
    m.params["n"] = std::to_string(gen_args->n);
    write_generated(r, gen_args->out, std::move(m));
  });

  auto* gen_corral = gen->add_subcommand("corral", "(A0 and A1) or (B0 and B1), one correlated "
                                                   "and one irrelevant feature");
  add_gen_common(gen_corral, true);
  auto* corral_ex = gen_corral->add_flag("--exhaustive", gen_args->exhaustive,
                                         "emit the canonical 64-row configuration table");
  gen_corral->get_option("--n")->excludes(corral_ex);
  gen_corral->callback([gen_args] {
    relieve::SynthResult r;
    relieve::RunManifest m{"gen corral", base_params(gen_args->seed), "", gen_args->seed};
    if (gen_args->exhaustive) {
      r = relieve::gen_corral_exhaustive();
      m.params["exhaustive"] = "true";
      m.params.erase("seed");
    } else {
      if (gen_args->n == 0)
        throw relieve::UsageError("gen corral: --n or --exhaustive is required");
      r = relieve::gen_corral(gen_args->n, gen_args->seed);
      m.params["n"] = std::to_string(gen_args->n);
    }
    write_generated(r, gen_args->out, std::move(m));
  });

  auto* gen_led = gen->add_subcommand("led", "seven-segment digit display with segment noise");
  add_gen_common(gen_led, true);
  gen_led->add_option("--irrelevant", gen_args->irrelevant,
                      "extra uniform binary features: 0 or 17");
  gen_led->add_option("--noise", gen_args->noise, "per-segment flip probability (default 0.10)");
  gen_led->callback([gen_args] {
    if (gen_args->n == 0) throw relieve::UsageError("gen led: --n is required");
    const double noise = gen_args->noise < 0 ? 0.10 : gen_args->noise;
    const auto r = relieve::gen_led(gen_args->n, gen_args->irrelevant, noise, gen_args->seed);
    relieve::RunManifest m{"gen led", base_params(gen_args->seed), "", gen_args->seed};
    m.params["irrelevant"] = std::to_string(gen_args->irrelevant);
    m.params["noise"] = relieve::detail::format_number(noise);
    m.params["n"] = std::to_string(gen_args->n);
    write_generated(r, gen_args->out, std::move(m));
  });

  auto* gen_monk = gen->add_subcommand("monk", "six-attribute Monk problems 1 and 3");
  add_gen_common(gen_monk, true);
  gen_monk->add_option("--which", gen_args->which, "problem number: 1 or 3")->required();
  gen_monk->add_option("--noise", gen_args->noise,
                       "class-flip probability (default 0 for Monk-1, 0.05 for Monk-3)");
  auto* monk_ex = gen_monk->add_flag("--exhaustive", gen_args->exhaustive,
                                     "emit all 432 attribute configurations");
  gen_monk->get_option("--n")->excludes(monk_ex);
  gen_monk->callback([gen_args] {
    const double noise =
        gen_args->noise < 0 ? (gen_args->which == 3 ? 0.05 : 0.0) : gen_args->noise;
    relieve::SynthResult r;
    relieve::RunManifest m{"gen monk", base_params(gen_args->seed), "", gen_args->seed};
    m.params["which"] = std::to_string(gen_args->which);
    m.params["noise"] = relieve::detail::format_number(noise);
    if (gen_args->exhaustive) {
      r = relieve::gen_monk_exhaustive(gen_args->which, noise, gen_args->seed);
      m.params["exhaustive"] = "true";
    } else {
      if (gen_args->n == 0)
        throw relieve::UsageError("gen monk: --n or --exhaustive is required");
      r = relieve::gen_monk(gen_args->which, gen_args->n, noise, gen_args->seed);
      m.params["n"] = std::to_string(gen_args->n);
    }
    write_generated(r, gen_args->out, std::move(m));
  });

  // ---- weigh ----
  auto weigh_args = std::make_shared<WeighArgs>();
  auto* weigh = app.add_subcommand("weigh", "compute feature weights");
  weigh->fallthrough();
  weigh->add_option("--data", weigh_args->data_path, "input dataset CSV")->required();
  weigh->add_option("--algorithm", weigh_args->algorithm,
                    "one of: pcf ccf vdm gini ig gr entdist mantaras diffdist kl chi2 "
                    "relief relieved relieff myopic drelieff pdrelieff")
      ->required();
  weigh->add_option("-o,--out", weigh_args->out_path, "output JSON path (default stdout)");
  weigh->add_option("--k", weigh_args->k, "neighbors per class (relief family)");
  weigh->add_option("--m", weigh_args->m, "iterations: 'all' or a positive integer");
  weigh->add_option("--seed", weigh_args->seed, "RNG seed for instance sampling");
  auto* t_opt = weigh->add_option("--t", weigh_args->t,
                                  "progressive schedule steepness: 'auto' or a number >= 1");
  weigh->add_flag("--auto-T", weigh_args->auto_t, "use the automatic schedule 2/ln(m)")
      ->excludes(t_opt);
  weigh->add_option("--missing", weigh_args->missing,
                    "missing-value handling: basic or conditional");
  weigh->add_flag("--laplace", weigh_args->laplace,
                  "Laplace-correct the conditional probabilities of the missing-value model");
  weigh->add_option("--bins", weigh_args->bins, "discretization bins for linear features")
      ->check(CLI::Range(2, 1000));
  weigh->add_option("--positive-value", weigh_args->positive_value,
                    "designated positive value for pcf/ccf (default: first value)");
  weigh->add_flag("--vdm-classic", weigh_args->vdm_classic,
                  "score values by squared class posteriors instead of the ratio form");
  weigh->callback([weigh_args] {
    const LoadedData in = load_dataset(weigh_args->data_path);
    const relieve::FeatureWeights w = run_weigh(in.data, *weigh_args);
    relieve::RunManifest m{"weigh", {}, in.hash, weigh_args->seed};
    m.params = w.params;
    m.params["algorithm"] = weigh_args->algorithm;
    m.params["data"] = fs::path(weigh_args->data_path).filename().string();
    emit_text(relieve::dump_json(relieve::weights_to_json(w, m)), weigh_args->out_path);
  });

  // ---- eval ----
  struct EvalArgs {
    std::string weights_path, truth_path, out_path;
    std::uint64_t seed = 0;
  };
  auto eval_args = std::make_shared<EvalArgs>();
  auto* eval = app.add_subcommand("eval", "score weights against ground truth");
  eval->fallthrough();
  eval->add_option("--weights", eval_args->weights_path, "weights JSON from `weigh`")->required();
  eval->add_option("--truth", eval_args->truth_path, "ground-truth JSON from `gen`")->required();
  eval->add_option("-o,--out", eval_args->out_path, "output JSON path (default stdout)");
  eval->add_option("--seed", eval_args->seed)->group("");  // accepted for uniformity; unused
  eval->callback([eval_args] {
    const auto wj = load_json_file(eval_args->weights_path, "weights");
    const auto tj = load_json_file(eval_args->truth_path, "truth");
    const relieve::FeatureWeights w = relieve::weights_from_json(wj);
    const relieve::GroundTruth truth = relieve::truth_from_json(tj);
    const relieve::CriteriaReport report = relieve::criteria(w, truth);
    relieve::RunManifest m{"eval", {}, "", 0};
    if (wj.contains("manifest") && wj["manifest"].contains("dataset_hash"))
      m.dataset_hash = wj["manifest"]["dataset_hash"].get<std::string>();
    m.params["weights"] = fs::path(eval_args->weights_path).filename().string();
    m.params["truth"] = fs::path(eval_args->truth_path).filename().string();
    m.params["algorithm"] = w.algorithm;
    nlohmann::json out = relieve::criteria_to_json(report);
    out["manifest"] = relieve::to_json(m);
    emit_text(relieve::dump_json(out), eval_args->out_path);
  });

  // ---- knn-curve ----
  struct CurveArgs {
    std::string data_path, weights_path, out_path;
    int folds = 5;
    std::uint64_t seed = 0;
  };
  auto curve_args = std::make_shared<CurveArgs>();
  auto* curve = app.add_subcommand("knn-curve",
                                   "1-NN cross-validated accuracy over top-n feature subsets");
  curve->fallthrough();
  curve->add_option("--data", curve_args->data_path, "input dataset CSV")->required();
  curve->add_option("--weights", curve_args->weights_path, "weights JSON from `weigh`")
      ->required();
  curve->add_option("--folds", curve_args->folds, "cross-validation folds")
      ->check(CLI::Range(2, 1000));
  curve->add_option("--seed", curve_args->seed, "fold-assignment seed");
  curve->add_option("-o,--out", curve_args->out_path, "output CSV path (default stdout)");
  curve->callback([curve_args] {
    const LoadedData in = load_dataset(curve_args->data_path);
    const relieve::FeatureWeights w =
        relieve::weights_from_json(load_json_file(curve_args->weights_path, "weights"));
    const relieve::CvCurve result =
        relieve::cv_curve(in.data, w, curve_args->folds, curve_args->seed);
    const std::string csv = relieve::curve_to_csv(result);
    emit_text(csv, curve_args->out_path);
    if (!curve_args->out_path.empty()) {
      relieve::RunManifest m{"knn-curve", {}, in.hash, curve_args->seed};
      m.params["folds"] = std::to_string(curve_args->folds);
      m.params["seed"] = std::to_string(curve_args->seed);
      m.params["weights"] = fs::path(curve_args->weights_path).filename().string();
      m.params["data"] = fs::path(curve_args->data_path).filename().string();
      m.params["stratified"] = result.stratified ? "true" : "false";
      relieve::write_file_atomic(sidecar(fs::path(curve_args->out_path), ".manifest.json"),
                                 relieve::dump_json(relieve::to_json(m)));
    }
  });

  // ---- redundancy ----
  struct RedArgs {
    std::string data_path, feature, universe, out_path;
    std::size_t cap = 15;
    bool force = false;
    bool worst_case = false;
    std::uint64_t seed = 0;
  };
  auto red_args = std::make_shared<RedArgs>();
  auto* red = app.add_subcommand("redundancy", "exhaustive redundancy level of one feature");
  red->fallthrough();
  red->add_option("--data", red_args->data_path, "input dataset CSV")->required();
  red->add_option("--feature", red_args->feature, "feature to score")->required();
  red->add_option("--universe", red_args->universe,
                  "comma-separated variable names (default: all features plus the class)");
  red->add_option("--cap", red_args->cap, "refuse universes larger than this without --force");
  red->add_flag("--force", red_args->force, "evaluate past the cap");
  red->add_flag("--worst-case", red_args->worst_case,
                "optimize the subset term with max instead of min");
  red->add_option("-o,--out", red_args->out_path, "output JSON path (default stdout)");
  red->add_option("--seed", red_args->seed)->group("");  // accepted for uniformity; unused
  red->callback([red_args] {
    const LoadedData in = load_dataset(red_args->data_path);
    std::vector<std::string> universe;
    if (!red_args->universe.empty())
      for (const auto& name : relieve::detail::split_fields(red_args->universe))
        universe.push_back(std::string(relieve::detail::trim(name)));
    relieve::RedundancyOptions opt;
    opt.cap = red_args->cap;
    opt.force = red_args->force;
    opt.worst_case = red_args->worst_case;
    const relieve::RedundancyResult result =
        relieve::redundancy_level(in.data, red_args->feature, universe, opt);
    relieve::RunManifest m{"redundancy", {}, in.hash, 0};
    m.params["feature"] = red_args->feature;
    m.params["universe"] = red_args->universe;
    m.params["cap"] = std::to_string(red_args->cap);
    m.params["force"] = red_args->force ? "true" : "false";
    m.params["worst_case"] = red_args->worst_case ? "true" : "false";
    m.params["data"] = fs::path(red_args->data_path).filename().string();
    nlohmann::json out = relieve::redundancy_to_json(result);
    out["manifest"] = relieve::to_json(m);
    emit_text(relieve::dump_json(out), red_args->out_path);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const relieve::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const relieve::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const relieve::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
