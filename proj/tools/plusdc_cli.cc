// Copyright 2026 The PlusDC Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// plusdc command-line tool. Links only the C API.
//
// Exit codes: 0 success, 1 other failure, 2 MLE does not exist,
// 3 fit did not converge, 64 usage or data error.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "plusdc/plusdc.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitNonexistent = 2;
constexpr int kExitNonconverged = 3;
constexpr int kExitUsage = 64;

struct CliError {
  int exit_code;
  std::string message;
};

int ExitCodeFor(plusdc_status status) {
  switch (status) {
    case PLUSDC_ERR_INPUT:
    case PLUSDC_ERR_IO:
    case PLUSDC_ERR_DOMAIN:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

void Check(plusdc_status status) {
  if (status != PLUSDC_OK) {
    throw CliError{ExitCodeFor(status), plusdc_last_error()};
  }
}

std::string TakeString(char* s) {
  std::string out(s);
  plusdc_string_free(s);
  return out;
}

struct Deleter {
  void operator()(plusdc_dataset* p) const { plusdc_dataset_free(p); }
  void operator()(plusdc_graph* p) const { plusdc_graph_free(p); }
  void operator()(plusdc_params* p) const { plusdc_params_free(p); }
  void operator()(plusdc_fit_result* p) const { plusdc_fit_result_free(p); }
};
using Dataset = std::unique_ptr<plusdc_dataset, Deleter>;
using Graph = std::unique_ptr<plusdc_graph, Deleter>;
using Params = std::unique_ptr<plusdc_params, Deleter>;
using FitResult = std::unique_ptr<plusdc_fit_result, Deleter>;

Dataset LoadDataset(const std::string& path, int num_objects,
                    bool require_outcomes) {
  plusdc_dataset* data = nullptr;
  Check(plusdc_dataset_read_csv(path.c_str(), num_objects,
                                require_outcomes ? 1 : 0, &data));
  return Dataset(data);
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError{kExitUsage, "cannot write '" + path + "'"};
  out << text;
}

std::string Sha256(const std::string& path) {
  char* hex = nullptr;
  Check(plusdc_file_sha256(path.c_str(), &hex));
  return TakeString(hex);
}

std::string UtcNow() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

// Seed from --seed, else PLUSDC_SEED, else 0.
struct SeedOption {
  std::optional<std::uint64_t> flag;

  std::pair<std::uint64_t, std::string> Resolve() const {
    if (flag) return {*flag, "flag"};
    if (const char* env = std::getenv("PLUSDC_SEED"); env && *env) {
      try {
        std::size_t used = 0;
        const unsigned long long value = std::stoull(env, &used);
        if (used == std::string(env).size() && env[0] != '-') {
          return {value, "env"};
        }
      } catch (const std::exception&) {
      }
      throw CliError{kExitUsage, std::string("PLUSDC_SEED is not a "
                                             "non-negative integer: ") +
                                     env};
    }
    return {0, "default"};
  }
};

// Provenance record written next to every output artifact.
class Manifest {
 public:
  Manifest(std::string command, int argc, char** argv)
      : command_(std::move(command)),
        start_(std::chrono::steady_clock::now()),
        started_at_(UtcNow()) {
    for (int i = 0; i < argc; ++i) argv_.push_back(argv[i]);
  }

  void Seed(const std::string& name, std::uint64_t value,
            const std::string& source) {
    seeds_[name] = {{"value", value}, {"source", source}};
  }
  void Input(const std::string& path) {
    inputs_.push_back({{"path", path}, {"sha256", Sha256(path)}});
  }
  void Output(const std::string& path) { outputs_.push_back(path); }
  void Set(const std::string& key, json value) {
    extra_[key] = std::move(value);
  }

  void Write(const std::string& path) const {
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start_)
                               .count();
    json outputs = json::array();
    for (const auto& o : outputs_) {
      outputs.push_back({{"path", o}, {"sha256", Sha256(o)}});
    }
    json j = {{"command", command_},
              {"argv", argv_},
              {"seeds", seeds_},
              {"inputs", inputs_},
              {"outputs", outputs},
              {"version", plusdc_version()},
              {"started_at", started_at_},
              {"wall_time_seconds", seconds}};
    if (!extra_.empty()) j["details"] = extra_;
    WriteText(path, j.dump(2) + "\n");
  }

 private:
  std::string command_;
  std::vector<std::string> argv_;
  json seeds_ = json::object();
  json inputs_ = json::array();
  std::vector<std::string> outputs_;
  json extra_ = json::object();
  std::chrono::steady_clock::time_point start_;
  std::string started_at_;
};

std::string ManifestPathFor(const std::string& output) {
  return output + ".manifest.json";
}

// Shared fit flags.
struct FitFlags {
  std::optional<double> epsilon;
  std::optional<int> max_outer;
  std::optional<double> step_size;
  std::string existence = "divergence";

  void Register(CLI::App* app) {
    app->add_option("--epsilon", epsilon,
                    "Outer tolerance on the normalized likelihood gain");
    app->add_option("--max-outer", max_outer, "Maximum outer iterations");
    app->add_option("--step-size", step_size, "Newton step size in (0, 1]");
    app->add_option("--existence", existence, "MLE existence check")
        ->check(CLI::IsMember({"off", "divergence", "lp"}));
  }

  json ToJson() const {
    json j = {{"existence", existence}};
    if (epsilon) j["epsilon"] = *epsilon;
    if (max_outer) j["max_outer"] = *max_outer;
    if (step_size) j["step_size"] = *step_size;
    return j;
  }
};

std::vector<double> ParseDoubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CliError{kExitUsage, "not a number list: '" + text + "'"};
    }
  }
  return out;
}

// "1,2,4;1,3,4" -> [[1,2,4],[1,3,4]]. Empty groups are kept.
json ParseIntGroups(const std::string& text) {
  json groups = json::array();
  std::stringstream outer(text);
  std::string group;
  while (std::getline(outer, group, ';')) {
    json ids = json::array();
    std::stringstream inner(group);
    std::string item;
    while (std::getline(inner, item, ',')) {
      if (item.empty()) continue;
      try {
        std::size_t used = 0;
        ids.push_back(std::stoi(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw CliError{kExitUsage, "not an integer list: '" + text + "'"};
      }
    }
    groups.push_back(ids);
  }
  if (!text.empty() && text.back() == ';') groups.push_back(json::array());
  return groups;
}

void EmitReport(const std::string& report, const std::string& out,
                Manifest* manifest) {
  if (out.empty()) {
    std::cout << report << '\n';
    return;
  }
  WriteText(out, report + "\n");
  manifest->Output(out);
  manifest->Write(ManifestPathFor(out));
}

void EnsureDirectory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw CliError{kExitUsage, "cannot create '" + dir + "'"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plackett-Luce ranking with dynamic covariates"};
  app.set_version_flag("--version", std::string(plusdc_version()));
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads,
                 "Worker threads (0 = all hardware threads)")
      ->check(CLI::NonNegativeNumber);

  // fit
  auto* fit =
      app.add_subcommand("fit", "Estimate (u, v) by maximum likelihood");
  std::string fit_data, fit_out, fit_trace;
  std::optional<int> fit_d;
  int fit_n = 0;
  FitFlags fit_flags;
  fit->add_option("--data", fit_data, "Comparisons CSV")->required();
  fit->add_option("--d", fit_d, "Expected number of covariate columns");
  fit->add_option("--n", fit_n, "Number of objects (default: largest id)");
  fit->add_option("--out", fit_out, "Output params JSON")->required();
  fit->add_option("--trace", fit_trace, "Per-iteration likelihood CSV");
  fit_flags.Register(fit);

  // predict
  auto* predict =
      app.add_subcommand("predict", "Outcome probabilities from fitted params");
  std::string pred_params, pred_data, pred_out;
  bool pred_ranking = false;
  predict->add_option("--params", pred_params, "Params JSON")->required();
  predict->add_option("--data", pred_data, "Comparisons CSV")->required();
  predict->add_option("--out", pred_out, "Output probabilities CSV")
      ->required();
  predict->add_flag("--ranking", pred_ranking,
                    "Also report the probability of each observed ranking");

  // check
  auto* check = app.add_subcommand(
      "check", "Identifiability, curl and topology diagnostics");
  std::string check_data, check_out, check_triangles;
  bool check_lp = false, check_no_cheeger = false;
  std::optional<double> check_lambda;
  check->add_option("--data", check_data, "Comparisons CSV")->required();
  check->add_flag("--lp", check_lp, "Run the exact MLE-existence LP");
  check->add_flag("--no-cheeger", check_no_cheeger, "Skip the Cheeger search");
  check->add_option("--lambda", check_lambda,
                    "Weak-admissibility level for the diameter");
  check->add_option("--triangles", check_triangles,
                    "Curl matrix for given triangles, e.g. 1,2,4;1,3,4");
  check->add_option("--out", check_out, "Write the JSON report here");

  // graph-stats
  auto* stats = app.add_subcommand("graph-stats", "Hypergraph summary");
  std::string stats_graph, stats_data, stats_out;
  bool stats_no_cheeger = false;
  std::optional<double> stats_lambda;
  auto* stats_graph_opt =
      stats->add_option("--graph", stats_graph, "Graph CSV");
  stats->add_option("--data", stats_data, "Comparisons CSV")
      ->excludes(stats_graph_opt);
  stats->add_flag("--no-cheeger", stats_no_cheeger, "Skip the Cheeger search");
  stats->add_option("--lambda", stats_lambda,
                    "Weak-admissibility level for the diameter");
  stats->add_option("--out", stats_out, "Write the JSON report here");

  // simulate-graph
  auto* simg = app.add_subcommand("simulate-graph", "Draw a random hypergraph");
  std::string simg_model, simg_out, simg_probs, simg_blocks, simg_within;
  int simg_n = 0, simg_edge_size = 2;
  std::optional<std::int64_t> simg_edges;
  double simg_cross = 0.0;
  SeedOption simg_seed;
  simg->add_option("--model", simg_model, "nurhm6, hsbm2, nurhm or hsbm")
      ->required()
      ->check(CLI::IsMember({"nurhm6", "hsbm2", "nurhm", "hsbm"}));
  simg->add_option("--n", simg_n, "Number of vertices")->required();
  simg->add_option("--num-edges", simg_edges,
                   "Edge count for nurhm6/hsbm2 (default: experiment rule)");
  simg->add_option("--edge-probability", simg_probs,
                   "nurhm: inclusion probabilities for sizes 2, 3, ...");
  simg->add_option("--edge-size", simg_edge_size, "hsbm: edge size");
  simg->add_option("--block-sizes", simg_blocks, "hsbm: block sizes");
  simg->add_option("--within", simg_within, "hsbm: within-block probabilities");
  simg->add_option("--cross", simg_cross, "hsbm: crossing probability");
  simg->add_option("--seed", simg_seed.flag, "Seed (default: $PLUSDC_SEED)");
  simg->add_option("--out", simg_out, "Output graph CSV")->required();

  // simulate-data
  auto* simd =
      app.add_subcommand("simulate-data", "Draw covariates and outcomes");
  std::string simd_graph, simd_out, simd_truth, simd_vstar;
  std::optional<int> simd_d;
  double simd_width = 0.5;
  SeedOption simd_seed;
  simd->add_option("--graph", simd_graph, "Graph CSV")->required();
  simd->add_option("--d", simd_d, "Number of covariates (default 3)");
  simd->add_option("--v-star", simd_vstar, "True v, comma separated");
  simd->add_option("--u-half-width", simd_width,
                   "u* ~ Uniform[-w, w], then centered");
  simd->add_option("--seed", simd_seed.flag, "Seed (default: $PLUSDC_SEED)");
  simd->add_option("--out", simd_out, "Output comparisons CSV")->required();
  simd->add_option("--truth", simd_truth, "Write the true params JSON here");

  // experiment consistency
  auto* experiment = app.add_subcommand("experiment", "Simulation studies");
  experiment->require_subcommand(1);
  auto* consistency = experiment->add_subcommand(
      "consistency", "Estimation error as n grows");
  std::string cons_design = "nurhm6", cons_n, cons_out, cons_vstar;
  int cons_reps = 20;
  SeedOption cons_seed;
  FitFlags cons_fit;
  consistency->add_option("--design", cons_design, "nurhm6 or hsbm2")
      ->check(CLI::IsMember({"nurhm6", "hsbm2"}));
  consistency->add_option("--n", cons_n, "Comma-separated n values")
      ->required();
  consistency->add_option("--reps", cons_reps, "Replicates per n")
      ->check(CLI::PositiveNumber);
  consistency->add_option("--v-star", cons_vstar,
                          "True v (default 1,-0.5,0)");
  consistency->add_option("--seed", cons_seed.flag,
                          "Seed (default: $PLUSDC_SEED)");
  consistency->add_option("--out", cons_out, "Output directory")->required();
  cons_fit.Register(consistency);

  // cv
  auto* cv = app.add_subcommand("cv", "k-fold cross-entropy");
  std::string cv_data, cv_modes = "top1,top3,full", cv_out;
  int cv_k = 10;
  bool cv_no_pl = false;
  SeedOption cv_seed;
  FitFlags cv_fit;
  cv->add_option("--data", cv_data, "Comparisons CSV")->required();
  cv->add_option("--k", cv_k, "Number of folds");
  cv->add_option("--modes", cv_modes, "Subset of top1,top3,full");
  cv->add_flag("--no-pl", cv_no_pl, "Skip the covariate-free baseline");
  cv->add_option("--seed", cv_seed.flag, "Seed (default: $PLUSDC_SEED)");
  cv->add_option("--out", cv_out, "Output directory")->required();
  cv_fit.Register(cv);

  // select
  auto* select =
      app.add_subcommand("select", "Covariate subsets ranked by BIC");
  std::string sel_data, sel_subsets = "all", sel_out;
  FitFlags sel_fit;
  select->add_option("--data", sel_data, "Comparisons CSV")->required();
  select->add_option("--subsets", sel_subsets,
                     "'all' or groups like '1,2;3;' (empty group = PL)");
  select->add_option("--out", sel_out, "Output directory")->required();
  sel_fit.Register(select);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (fit->parsed()) {
      Manifest manifest("fit", argc, argv);
      manifest.Input(fit_data);
      Dataset data = LoadDataset(fit_data, fit_n, true);
      int n = 0, d = 0, num = 0;
      Check(plusdc_dataset_shape(data.get(), &n, &d, &num));
      if (fit_d && *fit_d != d) {
        throw CliError{kExitUsage, "--d " + std::to_string(*fit_d) +
                                       " but the data has " +
                                       std::to_string(d) +
                                       " covariate columns"};
      }
      plusdc_fit_result* raw = nullptr;
      Check(plusdc_fit(data.get(), fit_flags.ToJson().dump().c_str(), &raw));
      FitResult result(raw);
      char* text = nullptr;
      Check(plusdc_fit_result_json(result.get(), &text));
      WriteText(fit_out, TakeString(text) + "\n");
      manifest.Output(fit_out);
      if (!fit_trace.empty()) {
        Check(plusdc_fit_result_write_trace(result.get(), fit_trace.c_str()));
        manifest.Output(fit_trace);
      }
      int converged = 0;
      plusdc_existence existence = PLUSDC_UNDETERMINED;
      Check(plusdc_fit_result_status(result.get(), &converged, &existence));
      manifest.Write(ManifestPathFor(fit_out));
      if (existence == PLUSDC_NONEXISTENT) {
        std::cerr << "plusdc: the MLE does not exist for this data\n";
        return kExitNonexistent;
      }
      if (!converged) {
        std::cerr << "plusdc: the fit did not converge\n";
        return kExitNonconverged;
      }
      return kExitOk;
    }

    if (predict->parsed()) {
      Manifest manifest("predict", argc, argv);
      manifest.Input(pred_params);
      manifest.Input(pred_data);
      plusdc_params* raw = nullptr;
      Check(plusdc_params_read_json(pred_params.c_str(), &raw));
      Params params(raw);
      int n = 0;
      Check(plusdc_params_shape(params.get(), &n, nullptr));
      Dataset data = LoadDataset(pred_data, n, false);
      Check(plusdc_predict(params.get(), data.get(), pred_ranking ? 1 : 0,
                           pred_out.c_str()));
      manifest.Output(pred_out);
      manifest.Write(ManifestPathFor(pred_out));
      return kExitOk;
    }

    if (check->parsed()) {
      Manifest manifest("check", argc, argv);
      manifest.Input(check_data);
      Dataset data = LoadDataset(check_data, 0, false);
      json options = {{"lp", check_lp}, {"cheeger", !check_no_cheeger}};
      if (check_lambda) options["lambda"] = *check_lambda;
      if (!check_triangles.empty()) {
        options["triangles"] = ParseIntGroups(check_triangles);
      }
      char* report = nullptr;
      Check(plusdc_check(data.get(), options.dump().c_str(), &report));
      EmitReport(TakeString(report), check_out, &manifest);
      return kExitOk;
    }

    if (stats->parsed()) {
      Manifest manifest("graph-stats", argc, argv);
      plusdc_graph* raw = nullptr;
      if (!stats_graph.empty()) {
        manifest.Input(stats_graph);
        Check(plusdc_graph_read_csv(stats_graph.c_str(), 0, &raw));
      } else if (!stats_data.empty()) {
        manifest.Input(stats_data);
        Dataset data = LoadDataset(stats_data, 0, false);
        Check(plusdc_graph_from_dataset(data.get(), &raw));
      } else {
        throw CliError{kExitUsage, "graph-stats needs --graph or --data"};
      }
      Graph graph(raw);
      json options = {{"cheeger", !stats_no_cheeger}};
      if (stats_lambda) options["lambda"] = *stats_lambda;
      char* report = nullptr;
      Check(plusdc_graph_stats(graph.get(), options.dump().c_str(), &report));
      EmitReport(TakeString(report), stats_out, &manifest);
      return kExitOk;
    }

    if (simg->parsed()) {
      Manifest manifest("simulate-graph", argc, argv);
      const auto [seed, source] = simg_seed.Resolve();
      manifest.Seed("seed", seed, source);
      json spec = {{"model", simg_model}, {"n", simg_n}, {"seed", seed}};
      if (simg_model == "nurhm6" || simg_model == "hsbm2") {
        if (simg_edges) spec["num_edges"] = *simg_edges;
      } else if (simg_model == "nurhm") {
        spec["edge_probability"] = ParseDoubles(simg_probs);
      } else {
        spec["edge_size"] = simg_edge_size;
        json blocks = json::array();
        for (double b : ParseDoubles(simg_blocks)) {
          blocks.push_back(static_cast<int>(b));
        }
        spec["block_sizes"] = blocks;
        spec["within_probability"] = ParseDoubles(simg_within);
        spec["cross_probability"] = simg_cross;
      }
      plusdc_graph* raw = nullptr;
      char* meta = nullptr;
      Check(plusdc_graph_simulate(spec.dump().c_str(), &raw, &meta));
      Graph graph(raw);
      const std::string meta_text = TakeString(meta);
      Check(plusdc_graph_write_csv(graph.get(), simg_out.c_str()));
      const std::string meta_path = simg_out + ".meta.json";
      WriteText(meta_path, meta_text + "\n");
      manifest.Output(simg_out);
      manifest.Output(meta_path);
      manifest.Write(ManifestPathFor(simg_out));
      return kExitOk;
    }

    if (simd->parsed()) {
      Manifest manifest("simulate-data", argc, argv);
      manifest.Input(simd_graph);
      const auto [seed, source] = simd_seed.Resolve();
      manifest.Seed("seed", seed, source);
      plusdc_graph* raw_graph = nullptr;
      Check(plusdc_graph_read_csv(simd_graph.c_str(), 0, &raw_graph));
      Graph graph(raw_graph);
      json options = {{"seed", seed}, {"u_half_width", simd_width}};
      if (simd_d) options["d"] = *simd_d;
      if (!simd_vstar.empty()) options["v_star"] = ParseDoubles(simd_vstar);
      plusdc_dataset* raw_data = nullptr;
      plusdc_params* raw_truth = nullptr;
      Check(plusdc_simulate_data(graph.get(), options.dump().c_str(),
                                 &raw_data, &raw_truth));
      Dataset data(raw_data);
      Params truth(raw_truth);
      Check(plusdc_dataset_write_csv(data.get(), simd_out.c_str()));
      manifest.Output(simd_out);
      if (!simd_truth.empty()) {
        const json meta = {{"kind", "truth"}, {"seed", seed}};
        Check(plusdc_params_write_json(truth.get(), meta.dump().c_str(),
                                       simd_truth.c_str()));
        manifest.Output(simd_truth);
      }
      manifest.Write(ManifestPathFor(simd_out));
      return kExitOk;
    }

    if (consistency->parsed()) {
      Manifest manifest("experiment consistency", argc, argv);
      const auto [seed, source] = cons_seed.Resolve();
      manifest.Seed("seed", seed, source);
      json n_list = json::array();
      for (double n : ParseDoubles(cons_n))
        n_list.push_back(static_cast<int>(n));
      json spec = {{"design", cons_design}, {"n", n_list},
                   {"reps", cons_reps},     {"seed", seed},
                   {"threads", threads},    {"fit", cons_fit.ToJson()}};
      if (!cons_vstar.empty()) spec["v_star"] = ParseDoubles(cons_vstar);
      EnsureDirectory(cons_out);
      const std::string rows = cons_out + "/consistency.csv";
      const std::string summary_path = cons_out + "/consistency_summary.json";
      char* summary = nullptr;
      Check(plusdc_experiment_consistency(spec.dump().c_str(), rows.c_str(),
                                          &summary));
      const std::string text = TakeString(summary);
      WriteText(summary_path, text + "\n");
      std::cout << text << '\n';
      manifest.Set("threads", threads);
      manifest.Output(rows);
      manifest.Output(summary_path);
      manifest.Write(cons_out + "/manifest.json");
      return kExitOk;
    }

    if (cv->parsed()) {
      Manifest manifest("cv", argc, argv);
      manifest.Input(cv_data);
      const auto [seed, source] = cv_seed.Resolve();
      manifest.Seed("seed", seed, source);
      Dataset data = LoadDataset(cv_data, 0, true);
      json modes = json::array();
      std::stringstream stream(cv_modes);
      std::string mode;
      while (std::getline(stream, mode, ',')) modes.push_back(mode);
      const json spec = {{"k", cv_k},           {"modes", modes},
                         {"seed", seed},        {"include_pl", !cv_no_pl},
                         {"threads", threads},  {"fit", cv_fit.ToJson()}};
      EnsureDirectory(cv_out);
      const std::string rows = cv_out + "/cv.csv";
      const std::string summary_path = cv_out + "/cv_summary.json";
      char* summary = nullptr;
      Check(plusdc_cv(data.get(), spec.dump().c_str(), rows.c_str(),
                      &summary));
      const std::string text = TakeString(summary);
      WriteText(summary_path, text + "\n");
      std::cout << text << '\n';
      manifest.Output(rows);
      manifest.Output(summary_path);
      manifest.Write(cv_out + "/manifest.json");
      return kExitOk;
    }

    if (select->parsed()) {
      Manifest manifest("select", argc, argv);
      manifest.Input(sel_data);
      Dataset data = LoadDataset(sel_data, 0, true);
      json spec = {{"threads", threads}, {"fit", sel_fit.ToJson()}};
      spec["subsets"] =
          sel_subsets == "all" ? json("all") : ParseIntGroups(sel_subsets);
      EnsureDirectory(sel_out);
      const std::string rows = sel_out + "/select.csv";
      const std::string summary_path = sel_out + "/select_summary.json";
      char* summary = nullptr;
      Check(plusdc_select(data.get(), spec.dump().c_str(), rows.c_str(),
                          &summary));
      const std::string text = TakeString(summary);
      WriteText(summary_path, text + "\n");
      std::cout << text << '\n';
      manifest.Output(rows);
      manifest.Output(summary_path);
      manifest.Write(sel_out + "/manifest.json");
      return kExitOk;
    }
  } catch (const CliError& e) {
    std::cerr << "plusdc: " << e.message << '\n';
    return e.exit_code;
  } catch (const json::exception& e) {
    std::cerr << "plusdc: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
