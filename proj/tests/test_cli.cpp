// End-to-end checks of the command-line tool: each test shells out to the
// built binary (path injected by the build as RELIEVE_CLI_PATH) inside a
// per-process scratch directory and inspects exit codes, stdout, stderr,
// and the files written.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "relieve/eval.hpp"
#include "relieve/io.hpp"
#include "relieve/manifest.hpp"
#include "relieve/relief.hpp"
#include "relieve/synth.hpp"

#include "oracles.hpp"

namespace fs = std::filesystem;

namespace relieve {
namespace {

const fs::path& scratch_dir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("relieve-cli-" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::string& args) {
  static int seq = 0;
  const fs::path out_file = scratch_dir() / ("stdout." + std::to_string(seq));
  const fs::path err_file = scratch_dir() / ("stderr." + std::to_string(seq));
  ++seq;
  const std::string cmd = std::string("\"") + RELIEVE_CLI_PATH + "\" " + args + " > \"" +
                          out_file.string() + "\" 2> \"" + err_file.string() + "\"";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out_file);
  r.err = read_file(err_file);
  return r;
}

fs::path unique_path(const std::string& name) {
  static int seq = 0;
  return scratch_dir() / (std::to_string(seq++) + "-" + name);
}

Dataset load_with_sidecar(const fs::path& csv_path) {
  fs::path schema_path = csv_path;
  schema_path.replace_extension(".schema.json");
  SchemaHints hints;
  if (fs::exists(schema_path))
    hints = schema_hints_from_json(parse_json(read_file(schema_path), "schema"));
  return parse_csv(read_file(csv_path), hints);
}

nlohmann::json json_file(const fs::path& p) { return parse_json(read_file(p), p.string()); }

TEST(CliGen, ModuloWritesDataAndSidecars) {
  const fs::path csv = unique_path("mod.csv");
  const auto r = run_cli("gen modulo --p 3 --important 2 --random 2 --n 30 --seed 7 -o " +
                         csv.string());
  ASSERT_EQ(r.code, 0) << r.err;

  const auto expected = gen_modulo(3, 2, 2, 30, 7);
  EXPECT_EQ(read_file(csv), to_csv(expected.data));

  fs::path truth_path = csv, schema_path = csv, manifest_path = csv;
  truth_path.replace_extension(".truth.json");
  schema_path.replace_extension(".schema.json");
  manifest_path.replace_extension(".manifest.json");

  const auto truth = truth_from_json(json_file(truth_path));
  EXPECT_EQ(truth.relevant, (std::vector<std::string>{"I1", "I2"}));
  EXPECT_EQ(truth.irrelevant, (std::vector<std::string>{"R1", "R2"}));

  const auto schema = json_file(schema_path);
  EXPECT_EQ(schema.at("I1").get<std::string>(), "nominal");

  const auto manifest = manifest_from_json(json_file(manifest_path));
  EXPECT_EQ(manifest.command, "gen modulo");
  EXPECT_EQ(manifest.params.at("n"), "30");
  EXPECT_EQ(manifest.params.at("seed"), "7");
  EXPECT_EQ(manifest.dataset_hash, fnv1a64_hex(read_file(csv)));
}

TEST(CliGen, CorralExhaustiveIsSeedless) {
  const fs::path csv = unique_path("corral.csv");
  const auto r = run_cli("gen corral --exhaustive -o " + csv.string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_file(csv), to_csv(gen_corral_exhaustive().data));

  fs::path manifest_path = csv;
  manifest_path.replace_extension(".manifest.json");
  const auto manifest = manifest_from_json(json_file(manifest_path));
  EXPECT_EQ(manifest.params.at("exhaustive"), "true");
  EXPECT_EQ(manifest.params.count("seed"), 0u);
}

TEST(CliGen, LedMatchesTheLibrary) {
  const fs::path csv = unique_path("led.csv");
  const auto r = run_cli("gen led --n 40 --irrelevant 17 --noise 0.1 --seed 3 -o " + csv.string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_file(csv), to_csv(gen_led(40, 17, 0.1, 3).data));
  EXPECT_EQ(load_with_sidecar(csv).n_features(), 24u);
}

TEST(CliGen, MonkTwoIsRefusedByName) {
  const fs::path csv = unique_path("monk2.csv");
  const auto r = run_cli("gen monk --which 2 --n 10 -o " + csv.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("Monk-2"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(csv));
}

TEST(CliWeigh, ReliefFamilyMatchesTheLibrary) {
  // modulo with p=3 has three-valued columns, so the schema sidecar is the
  // only thing keeping them nominal; an exact weight match proves the CLI
  // consumed it
  const fs::path csv = unique_path("mod.csv");
  ASSERT_EQ(run_cli("gen modulo --p 3 --important 2 --random 2 --n 60 --seed 4 -o " +
                    csv.string()).code, 0);

  const fs::path wout = unique_path("w.json");
  const auto r = run_cli("weigh --data " + csv.string() +
                         " --algorithm relieff --k 3 --m 25 --seed 5 -o " + wout.string());
  ASSERT_EQ(r.code, 0) << r.err;

  const auto wj = json_file(wout);
  EXPECT_EQ(wj.at("algorithm").get<std::string>(), "relieff");
  EXPECT_EQ(wj.at("params").at("k").get<std::string>(), "3");

  ReliefConfig cfg;
  cfg.variant = ReliefVariant::kRelieff;
  cfg.k = 3;
  cfg.m = 25;
  cfg.seed = 5;
  const auto expected = run_relief(gen_modulo(3, 2, 2, 60, 4).data, cfg);
  const auto got = weights_from_json(wj);
  ASSERT_EQ(got.order, expected.order);
  for (const auto& name : expected.order)
    EXPECT_DOUBLE_EQ(got.weights.at(name), expected.weights.at(name)) << name;
}

TEST(CliWeigh, RerunsAreByteIdentical) {
  const fs::path csv = unique_path("mod.csv");
  ASSERT_EQ(run_cli("gen modulo --p 2 --important 2 --random 3 --n 80 --seed 9 -o " +
                    csv.string()).code, 0);
  const fs::path w1 = unique_path("w1.json");
  const fs::path w2 = unique_path("w2.json");
  const std::string args = "weigh --data " + csv.string() +
                           " --algorithm pdrelieff --auto-T --k 2 --m 20 --seed 1 -o ";
  ASSERT_EQ(run_cli(args + w1.string()).code, 0);
  ASSERT_EQ(run_cli(args + w2.string()).code, 0);
  EXPECT_EQ(read_file(w1), read_file(w2));
  const auto wj = json_file(w1);
  EXPECT_EQ(wj.at("algorithm").get<std::string>(), "pdrelieff");
  EXPECT_EQ(wj.at("params").at("T").get<std::string>(), "auto");
}

TEST(CliWeigh, KlFormTracksInformationGain) {
  const fs::path csv = unique_path("corral.csv");
  ASSERT_EQ(run_cli("gen corral --exhaustive -o " + csv.string()).code, 0);
  const fs::path wkl = unique_path("kl.json");
  const fs::path wig = unique_path("ig.json");
  ASSERT_EQ(run_cli("weigh --data " + csv.string() + " --algorithm kl -o " + wkl.string()).code,
            0);
  ASSERT_EQ(run_cli("weigh --data " + csv.string() + " --algorithm ig -o " + wig.string()).code,
            0);
  const auto a = weights_from_json(json_file(wkl));
  const auto b = weights_from_json(json_file(wig));
  ASSERT_EQ(a.order, b.order);
  for (const auto& name : a.order)
    EXPECT_NEAR(a.weights.at(name), b.weights.at(name), 1e-10) << name;
}

TEST(CliWeigh, EveryAlgorithmProducesAFullWeightVector) {
  const fs::path csv = unique_path("corral.csv");
  ASSERT_EQ(run_cli("gen corral --n 40 --seed 2 -o " + csv.string()).code, 0);
  const std::vector<std::string> algorithms = {
      "pcf",      "ccf",      "vdm",     "gini",   "ig",       "gr",
      "entdist",  "mantaras", "diffdist", "kl",    "chi2",     "relief",
      "relieved", "relieff",  "myopic",  "drelieff", "pdrelieff"};
  for (const auto& algo : algorithms) {
    const fs::path wout = unique_path(algo + ".json");
    const auto r = run_cli("weigh --data " + csv.string() + " --algorithm " + algo +
                           " --k 2 --m 10 -o " + wout.string());
    ASSERT_EQ(r.code, 0) << algo << ": " << r.err;
    const auto w = weights_from_json(json_file(wout));
    EXPECT_EQ(w.order.size(), 6u) << algo;
    EXPECT_EQ(w.algorithm, algo);
  }
}

TEST(CliEval, PipelineScoresGeneratedTruth) {
  const fs::path csv = unique_path("mod.csv");
  ASSERT_EQ(run_cli("gen modulo --p 2 --important 2 --random 2 --n 200 --seed 1 -o " +
                    csv.string()).code, 0);
  const fs::path wout = unique_path("w.json");
  ASSERT_EQ(run_cli("weigh --data " + csv.string() + " --algorithm relieved --k 5 -o " +
                    wout.string()).code, 0);

  fs::path truth_path = csv;
  truth_path.replace_extension(".truth.json");
  const fs::path eout = unique_path("eval.json");
  const auto r = run_cli("eval --weights " + wout.string() + " --truth " + truth_path.string() +
                         " -o " + eout.string());
  ASSERT_EQ(r.code, 0) << r.err;

  ReliefConfig cfg;
  cfg.variant = ReliefVariant::kRelieved;
  cfg.k = 5;
  const auto expected =
      criteria(run_relief(gen_modulo(2, 2, 2, 200, 1).data, cfg), GroundTruth{{"I1", "I2"},
                                                                              {"R1", "R2"}});
  const auto ej = json_file(eout);
  EXPECT_DOUBLE_EQ(ej.at("separability").get<double>(), expected.separability);
  EXPECT_DOUBLE_EQ(ej.at("usability").get<double>(), expected.usability);
  EXPECT_DOUBLE_EQ(ej.at("minimality").get<double>(), expected.minimality);
  EXPECT_DOUBLE_EQ(ej.at("completeness").get<double>(), expected.completeness);
  EXPECT_EQ(ej.at("ordering").get<std::vector<std::string>>(), expected.ordering);
  EXPECT_EQ(ej.at("manifest").at("params").at("algorithm").get<std::string>(), "relieved");

  // without -o the same report goes to stdout
  const auto piped = run_cli("eval --weights " + wout.string() + " --truth " +
                             truth_path.string());
  ASSERT_EQ(piped.code, 0);
  const auto pj = parse_json(piped.out, "stdout");
  EXPECT_DOUBLE_EQ(pj.at("separability").get<double>(), expected.separability);
}

TEST(CliCurve, WritesCsvAndManifest) {
  const fs::path csv = unique_path("mod.csv");
  ASSERT_EQ(run_cli("gen modulo --p 2 --important 2 --random 2 --n 60 --seed 6 -o " +
                    csv.string()).code, 0);
  const fs::path wout = unique_path("w.json");
  ASSERT_EQ(run_cli("weigh --data " + csv.string() + " --algorithm relieff --k 3 -o " +
                    wout.string()).code, 0);

  const fs::path cout_path = unique_path("curve.csv");
  const auto r = run_cli("knn-curve --data " + csv.string() + " --weights " + wout.string() +
                         " --folds 4 --seed 9 -o " + cout_path.string());
  ASSERT_EQ(r.code, 0) << r.err;

  ReliefConfig cfg;
  cfg.variant = ReliefVariant::kRelieff;
  cfg.k = 3;
  const auto data = gen_modulo(2, 2, 2, 60, 6).data;
  const auto expected = curve_to_csv(cv_curve(data, run_relief(data, cfg), 4, 9));
  EXPECT_EQ(read_file(cout_path), expected);

  fs::path manifest_path = cout_path;
  manifest_path.replace_extension(".manifest.json");
  const auto manifest = manifest_from_json(json_file(manifest_path));
  EXPECT_EQ(manifest.command, "knn-curve");
  EXPECT_EQ(manifest.params.at("folds"), "4");
  EXPECT_TRUE(manifest.params.at("stratified") == "true" ||
              manifest.params.at("stratified") == "false");
}

TEST(CliRedundancy, HandReferenceLevel) {
  const Dataset t2 = oracle::table2();
  const fs::path csv = unique_path("t2.csv");
  write_file_atomic(csv, to_csv(t2));
  fs::path schema_path = csv;
  schema_path.replace_extension(".schema.json");
  write_file_atomic(schema_path, dump_json(schema_hints_to_json(t2)));

  const fs::path out = unique_path("red.json");
  const auto r = run_cli("redundancy --data " + csv.string() + " --feature f_r -o " +
                         out.string());
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rj = json_file(out);
  EXPECT_EQ(rj.at("feature").get<std::string>(), "f_r");
  EXPECT_DOUBLE_EQ(rj.at("level").get<double>(), 1.0);
  EXPECT_EQ(rj.at("best_subset").get<std::vector<std::string>>(),
            (std::vector<std::string>{"C"}));

  const auto worst = run_cli("redundancy --data " + csv.string() +
                             " --feature f_r --worst-case");
  ASSERT_EQ(worst.code, 0);
  EXPECT_EQ(parse_json(worst.out, "stdout").at("evaluated_subsets").get<std::int64_t>(), 7);

  const auto capped = run_cli("redundancy --data " + csv.string() + " --feature f_r --cap 2");
  EXPECT_EQ(capped.code, 2);
  EXPECT_NE(capped.err.find("force"), std::string::npos) << capped.err;
  EXPECT_EQ(run_cli("redundancy --data " + csv.string() + " --feature f_r --cap 2 --force").code,
            0);
}

TEST(CliErrors, ExitCodeDiscipline) {
  EXPECT_EQ(run_cli("--help").code, 0);
  const auto version = run_cli("--version");
  EXPECT_EQ(version.code, 0);
  EXPECT_NE(version.out.find("relieve"), std::string::npos);

  EXPECT_EQ(run_cli("").code, 2);             // a subcommand is required
  EXPECT_EQ(run_cli("frobnicate").code, 2);   // unknown subcommand
  EXPECT_EQ(run_cli("gen modulo -o x.csv").code, 2);  // --n missing

  const auto missing = run_cli("weigh --data /no/such/file.csv --algorithm ig");
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("not found"), std::string::npos);

  const fs::path bad_csv = unique_path("bad.csv");
  write_file_atomic(bad_csv, "only_one_column\n1\n2\n");
  EXPECT_EQ(run_cli("weigh --data " + bad_csv.string() + " --algorithm ig").code, 2);

  const fs::path good = unique_path("good.csv");
  write_file_atomic(good, "x,class\n0,a\n1,b\n0,a\n1,b\n");
  const auto unknown = run_cli("weigh --data " + good.string() + " --algorithm wizardry");
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("unknown algorithm"), std::string::npos);

  // output path whose parent is a regular file: the write fails, not the math
  const fs::path blocker = unique_path("blocker");
  write_file_atomic(blocker, "in the way\n");
  EXPECT_EQ(run_cli("weigh --data " + good.string() + " --algorithm ig -o " +
                    (blocker / "w.json").string()).code, 3);
}

TEST(CliQuiet, SuppressesStatusLines) {
  const fs::path a = unique_path("a.csv");
  const auto loud = run_cli("gen corral --exhaustive -o " + a.string());
  ASSERT_EQ(loud.code, 0);
  EXPECT_NE(loud.err.find("wrote"), std::string::npos);

  const fs::path b = unique_path("b.csv");
  const auto quiet = run_cli("--quiet gen corral --exhaustive -o " + b.string());
  ASSERT_EQ(quiet.code, 0);
  EXPECT_TRUE(quiet.err.empty()) << quiet.err;
}

}  // namespace
}  // namespace relieve
