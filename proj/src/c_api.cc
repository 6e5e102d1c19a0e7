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

#include "plusdc/plusdc.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <initializer_list>
#include <map>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "core/design.h"
#include "core/error.h"
#include "core/estimate.h"
#include "core/experiments.h"
#include "core/hypergraph.h"
#include "core/io.h"
#include "core/model.h"
#include "core/randgraph.h"
#include "core/rng.h"

struct plusdc_graph {
  plusdc::Hypergraph graph;
};
struct plusdc_dataset {
  plusdc::Dataset data;
};
struct plusdc_params {
  plusdc::Params theta;
};
struct plusdc_fit_result {
  plusdc::FitResult fit;
  int num_objects = 0;
  int num_covariates = 0;
  nlohmann::json config;
};

namespace {

using nlohmann::json;
using plusdc::ErrorCode;
using plusdc::Require;

thread_local std::string last_error;

template <typename F>
plusdc_status Guard(F&& body) {
  last_error.clear();
  try {
    body();
    return PLUSDC_OK;
  } catch (const plusdc::Error& e) {
    last_error = e.what();
    return static_cast<plusdc_status>(e.code());
  } catch (const json::exception& e) {
    last_error = std::string("invalid JSON option: ") + e.what();
    return PLUSDC_ERR_INPUT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return PLUSDC_ERR_CAPABILITY;
  } catch (const std::exception& e) {
    last_error = e.what();
    return PLUSDC_ERR_INTERNAL;
  }
}

void NotNull(const void* p, const char* name) {
  Require(p != nullptr, ErrorCode::kInput, std::string(name) + " is NULL");
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json ParseOptions(const char* text, std::initializer_list<const char*> keys) {
  if (text == nullptr || *text == '\0') return json::object();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    plusdc::Fail(ErrorCode::kInput, std::string("options: ") + e.what());
  }
  Require(j.is_object(), ErrorCode::kInput, "options must be a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || item.key() == key;
    Require(known, ErrorCode::kInput, "unknown option '" + item.key() + "'");
  }
  return j;
}

std::uint64_t SeedOf(const json& j) {
  if (!j.contains("seed")) return 0;
  Require(j["seed"].is_number_unsigned() || j["seed"].is_number_integer(),
          ErrorCode::kInput, "seed must be a non-negative integer");
  Require(!j["seed"].is_number_integer() || j["seed"].get<std::int64_t>() >= 0,
          ErrorCode::kInput, "seed must be a non-negative integer");
  return j["seed"].get<std::uint64_t>();
}

json VectorJson(const Eigen::VectorXd& x) {
  return std::vector<double>(x.data(), x.data() + x.size());
}

json MatrixJson(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Eigen::VectorXd row = m.row(i).transpose();
    rows.push_back(VectorJson(row));
  }
  return rows;
}

json MaskJson(std::uint64_t mask) {
  json out = json::array();
  for (int k = 0; k < 64; ++k) {
    if (mask & (std::uint64_t{1} << k)) out.push_back(k + 1);
  }
  return out;
}

plusdc::FitConfig ParseFitConfig(const json& j) {
  Require(j.is_object(), ErrorCode::kInput, "fit config must be an object");
  for (const auto& item : j.items()) {
    static const char* kKeys[] = {"epsilon",     "max_outer",   "inner_u_tol",
                                  "inner_u_max", "inner_v_tol", "inner_v_max",
                                  "step_size",   "existence"};
    bool known = false;
    for (const char* key : kKeys) known = known || item.key() == key;
    Require(known, ErrorCode::kInput,
            "unknown fit option '" + item.key() + "'");
  }
  plusdc::FitConfig c;
  c.epsilon = j.value("epsilon", c.epsilon);
  c.max_outer = j.value("max_outer", c.max_outer);
  c.inner_u_tol = j.value("inner_u_tol", c.inner_u_tol);
  c.inner_u_max = j.value("inner_u_max", c.inner_u_max);
  c.inner_v_tol = j.value("inner_v_tol", c.inner_v_tol);
  c.inner_v_max = j.value("inner_v_max", c.inner_v_max);
  c.step_size = j.value("step_size", c.step_size);
  if (j.contains("existence")) {
    const auto check =
        plusdc::ParseExistenceCheck(j["existence"].get<std::string>());
    Require(check.has_value(), ErrorCode::kInput,
            "existence must be off, divergence or lp");
    c.existence_check = *check;
  }
  plusdc::ValidateFitConfig(c);
  return c;
}

json FitConfigJson(const plusdc::FitConfig& c) {
  return {{"epsilon", c.epsilon},
          {"max_outer", c.max_outer},
          {"inner_u_tol", c.inner_u_tol},
          {"inner_u_max", c.inner_u_max},
          {"inner_v_tol", c.inner_v_tol},
          {"inner_v_max", c.inner_v_max},
          {"step_size", c.step_size},
          {"existence", plusdc::ExistenceCheckName(c.existence_check)}};
}

json ExistenceJson(const plusdc::ExistenceReport& r) {
  json out = {{"status", plusdc::ExistenceName(r.status)},
              {"reason", r.reason},
              {"witness", nullptr}};
  if (r.witness) out["witness"] = VectorJson(*r.witness);
  return out;
}

// Cheeger and diameter under their enumeration caps; null with a reason when
// a cap is exceeded.
void AddTopology(const plusdc::Hypergraph& g, const json& options,
                 json* report) {
  json& r = *report;
  r["cheeger"] = nullptr;
  r["cheeger_reason"] = "not requested";
  if (options.value("cheeger", true)) {
    if (g.num_vertices() > plusdc::kCheegerVertexCap) {
      r["cheeger_reason"] = "n = " + std::to_string(g.num_vertices()) +
                            " exceeds the exhaustive cap of " +
                            std::to_string(plusdc::kCheegerVertexCap);
    } else {
      const auto c = plusdc::CheegerConstant(g);
      r["cheeger"] = {{"value", c.value}, {"set", MaskJson(c.argmin_mask)}};
      r["cheeger_reason"] = "";
    }
  }
  r["diameter"] = nullptr;
  r["diameter_reason"] = "not requested";
  if (options.contains("lambda") && !options["lambda"].is_null()) {
    const double lambda = options["lambda"].get<double>();
    r["lambda"] = lambda;
    if (g.num_vertices() > plusdc::kDiameterVertexCap) {
      r["diameter_reason"] = "n = " + std::to_string(g.num_vertices()) +
                             " exceeds the exhaustive cap of " +
                             std::to_string(plusdc::kDiameterVertexCap);
    } else {
      const auto d = plusdc::WeaklyAdmissibleDiameter(g, lambda);
      json chain = json::array();
      for (auto mask : d.chain) chain.push_back(MaskJson(mask));
      r["diameter"] = d.length;
      r["diameter_chain"] = chain;
      r["diameter_reason"] = "";
    }
  }
}

json CurlJson(const plusdc::CurlReport& c) {
  json triangles = json::array();
  for (const auto& t : c.triangles) {
    triangles.push_back(
        {t.vertices[0] + 1, t.vertices[1] + 1, t.vertices[2] + 1});
  }
  return {{"passes", c.passes},         {"reason", c.reason},
          {"num_triangles", c.num_triangles}, {"curl_rank", c.curl_rank},
          {"triangles", triangles},     {"t_matrix", MatrixJson(c.t_matrix)},
          {"det", c.det}};
}

void WriteText(const char* path, const std::string& text) {
  NotNull(path, "path");
  plusdc::WriteFile(path, text);
}

std::string Csv(double x) { return plusdc::FormatDouble(x); }

}  // namespace

extern "C" {

const char* plusdc_version(void) { return PLUSDC_VERSION; }

const char* plusdc_last_error(void) { return last_error.c_str(); }

void plusdc_string_free(char* s) { std::free(s); }

plusdc_status plusdc_file_sha256(const char* path, char** hex) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(hex, "hex");
    std::ifstream in(path, std::ios::binary);
    Require(in.good(), ErrorCode::kIo, std::string("cannot open '") + path +
                                           "'");
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    Require(ctx != nullptr, ErrorCode::kInternal, "EVP_MD_CTX_new failed");
    bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1;
    std::vector<char> buffer(1 << 16);
    while (ok && in) {
      in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
      if (in.gcount() > 0) {
        ok = EVP_DigestUpdate(ctx, buffer.data(),
                              static_cast<std::size_t>(in.gcount())) == 1;
      }
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    ok = ok && EVP_DigestFinal_ex(ctx, digest, &length) == 1;
    EVP_MD_CTX_free(ctx);
    Require(ok, ErrorCode::kInternal, "SHA-256 computation failed");
    static const char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < length; ++i) {
      out += kHex[digest[i] >> 4];
      out += kHex[digest[i] & 15];
    }
    *hex = CopyString(out);
  });
}

plusdc_status plusdc_dataset_read_csv(const char* path, int num_objects,
                                      int require_outcomes,
                                      plusdc_dataset** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    Require(num_objects >= 0, ErrorCode::kInput, "num_objects must be >= 0");
    plusdc::ReadOptions options;
    options.num_objects = num_objects;
    options.require_outcomes = require_outcomes != 0;
    auto data = plusdc::ReadComparisonsCsvFile(path, options);
    plusdc::ValidateDataset(data, options.require_outcomes);
    *out = new plusdc_dataset{std::move(data)};
  });
}

plusdc_status plusdc_dataset_write_csv(const plusdc_dataset* data,
                                       const char* path) {
  return Guard([&] {
    NotNull(data, "data");
    std::ostringstream out;
    plusdc::WriteComparisonsCsv(data->data, out);
    WriteText(path, out.str());
  });
}

plusdc_status plusdc_dataset_shape(const plusdc_dataset* data,
                                   int* num_objects, int* num_covariates,
                                   int* num_comparisons) {
  return Guard([&] {
    NotNull(data, "data");
    if (num_objects) *num_objects = data->data.num_objects;
    if (num_covariates) *num_covariates = data->data.num_covariates;
    if (num_comparisons) *num_comparisons = data->data.size();
  });
}

void plusdc_dataset_free(plusdc_dataset* data) { delete data; }

plusdc_status plusdc_simulate_data(const plusdc_graph* graph,
                                   const char* options_json,
                                   plusdc_dataset** out,
                                   plusdc_params** truth) {
  return Guard([&] {
    NotNull(graph, "graph");
    NotNull(out, "out");
    const json o =
        ParseOptions(options_json, {"d", "v_star", "u_half_width", "seed"});
    plusdc::SimulationSpec spec;
    if (o.contains("v_star")) {
      const auto v = o["v_star"].get<std::vector<double>>();
      spec.v_star = Eigen::Map<const Eigen::VectorXd>(
          v.data(), static_cast<Eigen::Index>(v.size()));
      spec.num_covariates = static_cast<int>(v.size());
      Require(o.value("d", spec.num_covariates) == spec.num_covariates,
              ErrorCode::kInput, "d does not match the length of v_star");
    } else {
      spec.num_covariates = o.value("d", 3);
      Require(spec.num_covariates >= 0, ErrorCode::kInput, "d must be >= 0");
      spec.v_star = Eigen::VectorXd::Zero(spec.num_covariates);
      const double defaults[] = {1.0, -0.5, 0.0};
      for (int j = 0; j < std::min(spec.num_covariates, 3); ++j) {
        spec.v_star[j] = defaults[j];
      }
    }
    spec.u_half_width = o.value("u_half_width", spec.u_half_width);
    Require(spec.u_half_width >= 0.0, ErrorCode::kInput,
            "u_half_width must be >= 0");
    plusdc::Philox rng(SeedOf(o), 1);
    auto simulated = plusdc::SimulateData(graph->graph, spec, rng);
    *out = new plusdc_dataset{std::move(simulated.data)};
    if (truth) *truth = new plusdc_params{std::move(simulated.truth)};
  });
}

plusdc_status plusdc_graph_read_csv(const char* path, int num_vertices,
                                    plusdc_graph** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    *out = new plusdc_graph{plusdc::ReadGraphCsvFile(path, num_vertices)};
  });
}

plusdc_status plusdc_graph_from_dataset(const plusdc_dataset* data,
                                        plusdc_graph** out) {
  return Guard([&] {
    NotNull(data, "data");
    NotNull(out, "out");
    *out = new plusdc_graph{plusdc::GraphOf(data->data)};
  });
}

plusdc_status plusdc_graph_write_csv(const plusdc_graph* graph,
                                     const char* path) {
  return Guard([&] {
    NotNull(graph, "graph");
    std::ostringstream out;
    plusdc::WriteGraphCsv(graph->graph, out);
    WriteText(path, out.str());
  });
}

plusdc_status plusdc_graph_stats(const plusdc_graph* graph,
                                 const char* options_json,
                                 char** report_json) {
  return Guard([&] {
    NotNull(graph, "graph");
    NotNull(report_json, "report_json");
    const json o = ParseOptions(options_json, {"cheeger", "lambda"});
    const auto& g = graph->graph;
    const auto degrees = g.Degrees();
    std::map<int, int> sizes;
    for (const auto& e : g.edges()) ++sizes[static_cast<int>(e.size())];
    json histogram = json::object();
    for (auto [m, count] : sizes) histogram[std::to_string(m)] = count;
    int isolated = 0;
    for (int deg : degrees) isolated += deg == 0;
    json r = {
        {"num_vertices", g.num_vertices()},
        {"num_edges", g.num_edges()},
        {"max_edge_size", g.max_edge_size()},
        {"total_incidence", g.total_incidence()},
        {"edge_size_histogram", histogram},
        {"degree_min", *std::min_element(degrees.begin(), degrees.end())},
        {"degree_max", *std::max_element(degrees.begin(), degrees.end())},
        {"degree_mean", static_cast<double>(g.total_incidence()) /
                            g.num_vertices()},
        {"isolated_vertices", isolated},
        {"connected", g.IsConnected()},
    };
    AddTopology(g, o, &r);
    *report_json = CopyString(r.dump(2));
  });
}

plusdc_status plusdc_graph_simulate(const char* spec_json, plusdc_graph** out,
                                    char** meta_json) {
  return Guard([&] {
    NotNull(out, "out");
    const json o = ParseOptions(
        spec_json, {"model", "n", "num_edges", "seed", "edge_probability",
                    "edge_size", "block_sizes", "within_probability",
                    "cross_probability"});
    Require(o.contains("model") && o.contains("n"), ErrorCode::kInput,
            "graph spec needs 'model' and 'n'");
    const std::string model = o["model"].get<std::string>();
    const int n = o["n"].get<int>();
    const std::uint64_t seed = SeedOf(o);
    json meta = {{"model", model},
                 {"n", n},
                 {"seed", seed},
                 {"generator", plusdc::Philox::kName}};
    plusdc::Hypergraph graph;
    if (const auto kind = plusdc::ParseDesignKind(model)) {
      Require(n >= 2, ErrorCode::kInput, "n must be >= 2");
      const std::int64_t target =
          o.contains("num_edges") ? o["num_edges"].get<std::int64_t>()
                                  : plusdc::ExperimentEdgeCount(*kind, n);
      plusdc::Philox rng(seed, 0);
      graph = plusdc::SampleExperimentDesign(*kind, n, target, rng);
      meta["num_edges_target"] = target;
      if (*kind == plusdc::DesignKind::kHsbm2) {
        meta["community_weights"] = plusdc::Hsbm2CommunityWeights(n);
        meta["log_base"] = "natural";
      }
    } else if (model == "nurhm") {
      plusdc::NurhmSpec spec;
      spec.num_vertices = n;
      spec.edge_probability =
          o.at("edge_probability").get<std::vector<double>>();
      spec.seed = seed;
      graph = plusdc::SampleNurhm(spec);
      meta["edge_probability"] = spec.edge_probability;
      const auto orders = plusdc::ExpectedEdgeOrders(spec);
      meta["xi_minus"] = orders.xi_minus;
      meta["xi_plus"] = orders.xi_plus;
    } else if (model == "hsbm") {
      plusdc::HsbmSpec spec;
      spec.num_vertices = n;
      spec.edge_size = o.value("edge_size", 2);
      spec.block_sizes = o.at("block_sizes").get<std::vector<int>>();
      spec.within_probability =
          o.at("within_probability").get<std::vector<double>>();
      spec.cross_probability = o.value("cross_probability", 0.0);
      spec.seed = seed;
      graph = plusdc::SampleHsbm(spec);
      meta["edge_size"] = spec.edge_size;
      meta["block_sizes"] = spec.block_sizes;
      meta["within_probability"] = spec.within_probability;
      meta["cross_probability"] = spec.cross_probability;
      meta["zeta_minus"] = plusdc::ZetaMinus(spec);
    } else {
      plusdc::Fail(ErrorCode::kInput,
                   "unknown graph model '" + model +
                       "' (nurhm6, hsbm2, nurhm, hsbm)");
    }
    meta["num_edges"] = graph.num_edges();
    auto handle =
        std::make_unique<plusdc_graph>(plusdc_graph{std::move(graph)});
    if (meta_json) *meta_json = CopyString(meta.dump(2));
    *out = handle.release();
  });
}

void plusdc_graph_free(plusdc_graph* graph) { delete graph; }

plusdc_status plusdc_params_read_json(const char* path, plusdc_params** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    json j;
    try {
      j = json::parse(plusdc::ReadFile(path));
    } catch (const json::parse_error& e) {
      plusdc::Fail(ErrorCode::kInput, std::string(path) + ": " + e.what());
    }
    *out = new plusdc_params{plusdc::ParamsFromJson(j)};
  });
}

plusdc_status plusdc_params_write_json(const plusdc_params* params,
                                       const char* meta_json,
                                       const char* path) {
  return Guard([&] {
    NotNull(params, "params");
    json meta = json::object();
    if (meta_json != nullptr && *meta_json != '\0')
      meta = json::parse(meta_json);
    WriteText(path, plusdc::ParamsToJson(params->theta, meta).dump(2) + "\n");
  });
}

plusdc_status plusdc_params_shape(const plusdc_params* params,
                                  int* num_objects, int* num_covariates) {
  return Guard([&] {
    NotNull(params, "params");
    if (num_objects) *num_objects = static_cast<int>(params->theta.u.size());
    if (num_covariates) {
      *num_covariates = static_cast<int>(params->theta.v.size());
    }
  });
}

void plusdc_params_free(plusdc_params* params) { delete params; }

plusdc_status plusdc_fit(const plusdc_dataset* data, const char* config_json,
                         plusdc_fit_result** out) {
  return Guard([&] {
    NotNull(data, "data");
    NotNull(out, "out");
    json j = json::object();
    if (config_json != nullptr && *config_json != '\0') {
      j = json::parse(config_json);
    }
    const auto config = ParseFitConfig(j);
    auto result = std::make_unique<plusdc_fit_result>();
    result->fit = plusdc::Fit(data->data, config);
    result->num_objects = data->data.num_objects;
    result->num_covariates = data->data.num_covariates;
    result->config = FitConfigJson(config);
    *out = result.release();
  });
}

plusdc_status plusdc_fit_result_status(const plusdc_fit_result* result,
                                       int* converged,
                                       plusdc_existence* existence) {
  return Guard([&] {
    NotNull(result, "result");
    if (converged) *converged = result->fit.converged ? 1 : 0;
    if (existence) {
      switch (result->fit.existence.status) {
        case plusdc::Existence::kExists:
          *existence = PLUSDC_EXISTS;
          break;
        case plusdc::Existence::kNonexistent:
          *existence = PLUSDC_NONEXISTENT;
          break;
        case plusdc::Existence::kUndetermined:
          *existence = PLUSDC_UNDETERMINED;
          break;
      }
    }
  });
}

plusdc_status plusdc_fit_result_json(const plusdc_fit_result* result,
                                     char** out) {
  return Guard([&] {
    NotNull(result, "result");
    NotNull(out, "out");
    const auto& f = result->fit;
    const double loglik =
        f.loglik_trace.empty() ? std::nan("") : f.loglik_trace.back();
    const auto ic = plusdc::AicBic(loglik, result->num_objects,
                                   result->num_covariates, f.num_comparisons);
    json meta = {{"converged", f.converged},
                 {"existence", ExistenceJson(f.existence)},
                 {"outer_iters", f.outer_iters},
                 {"mm_steps", f.mm_steps},
                 {"newton_steps", f.newton_steps},
                 {"step_halvings", f.step_halvings},
                 {"monotone", f.monotone},
                 {"gradient_norm", f.gradient_norm},
                 {"loglik_norm", loglik},
                 {"aic_norm", ic.aic_norm},
                 {"bic_norm", ic.bic_norm},
                 {"num_params", ic.num_params},
                 {"num_objects", result->num_objects},
                 {"num_covariates", result->num_covariates},
                 {"num_comparisons", f.num_comparisons},
                 {"config", result->config}};
    *out = CopyString(plusdc::ParamsToJson(f.theta, meta).dump(2));
  });
}

plusdc_status plusdc_fit_result_write_trace(const plusdc_fit_result* result,
                                            const char* path) {
  return Guard([&] {
    NotNull(result, "result");
    std::ostringstream out;
    out << "iteration,loglik_norm\n";
    const auto& trace = result->fit.loglik_trace;
    for (std::size_t t = 0; t < trace.size(); ++t) {
      out << t << ',' << Csv(trace[t]) << '\n';
    }
    WriteText(path, out.str());
  });
}

plusdc_status plusdc_fit_result_params(const plusdc_fit_result* result,
                                       plusdc_params** out) {
  return Guard([&] {
    NotNull(result, "result");
    NotNull(out, "out");
    *out = new plusdc_params{result->fit.theta};
  });
}

void plusdc_fit_result_free(plusdc_fit_result* result) { delete result; }

plusdc_status plusdc_predict(const plusdc_params* params,
                             const plusdc_dataset* data, int with_ranking,
                             const char* path) {
  return Guard([&] {
    NotNull(params, "params");
    NotNull(data, "data");
    const auto& theta = params->theta;
    const auto& d = data->data;
    Require(d.num_objects <= theta.u.size(), ErrorCode::kInput,
            "object id " + std::to_string(d.num_objects) +
                " is not in the fitted model (n = " +
                std::to_string(theta.u.size()) + ")");
    Require(d.num_covariates == theta.v.size(), ErrorCode::kInput,
            "data has " + std::to_string(d.num_covariates) +
                " covariates but the model has " +
                std::to_string(theta.v.size()));
    std::ostringstream out;
    out << "comparison_id,object_id,win_prob";
    if (with_ranking) out << ",ranking_prob";
    out << '\n';
    for (int i = 0; i < d.size(); ++i) {
      const auto& c = d.comparisons[i];
      std::string ranking_prob;
      if (with_ranking && c.observed()) {
        ranking_prob = Csv(plusdc::OutcomeProb(theta, c, c.ranking));
      }
      for (int t = 0; t < c.size(); ++t) {
        const int prefix[] = {t};
        out << i + 1 << ',' << c.edge[t] + 1 << ','
            << Csv(plusdc::TopKProb(theta, c, prefix));
        if (with_ranking) out << ',' << ranking_prob;
        out << '\n';
      }
    }
    WriteText(path, out.str());
  });
}

plusdc_status plusdc_check(const plusdc_dataset* data,
                           const char* options_json, char** report_json) {
  return Guard([&] {
    NotNull(data, "data");
    NotNull(report_json, "report_json");
    const json o =
        ParseOptions(options_json, {"lp", "cheeger", "lambda", "triangles"});
    const auto& d = data->data;
    const auto graph = plusdc::GraphOf(d);
    const auto dm = plusdc::Assemble(d);
    const auto id = plusdc::IdentifiabilityCheck(dm);
    json r = {{"num_objects", d.num_objects},
              {"num_covariates", d.num_covariates},
              {"num_comparisons", d.size()},
              {"num_pairs", dm.num_pairs()},
              {"connected", graph.IsConnected()},
              {"identifiable", id.identifiable},
              {"rank", id.rank},
              {"rank_exact", id.rank_exact},
              {"full_rank", d.num_objects + d.num_covariates - 1},
              {"sigma_max", id.sigma_max},
              {"rank_threshold", id.threshold},
              {"witness", nullptr}};
    if (id.witness) r["witness"] = VectorJson(*id.witness);

    const auto curl = plusdc::CurlSufficientCheck(dm, graph);
    r["curl_pass"] = curl.passes;
    r["curl"] = CurlJson(curl);
    if (o.contains("triangles")) {
      std::vector<plusdc::Triangle> triangles;
      for (const auto& t : o["triangles"]) {
        const auto v = t.get<std::vector<int>>();
        Require(v.size() == 3, ErrorCode::kInput,
                "each triangle needs three object ids");
        triangles.push_back({{v[0] - 1, v[1] - 1, v[2] - 1}});
      }
      r["curl_requested"] = CurlJson(plusdc::CurlForTriangles(dm, triangles));
    }

    const auto diag = plusdc::ComputeConsistencyDiagnostics(dm);
    r["sigma_min_K"] = diag.sigma_min_k;
    r["incoherence_cos"] = diag.incoherence_cos;

    r["existence"] = nullptr;
    if (o.value("lp", false)) {
      r["existence"] = ExistenceJson(plusdc::CheckMleExistence(d));
    }
    AddTopology(graph, o, &r);
    *report_json = CopyString(r.dump(2));
  });
}

plusdc_status plusdc_experiment_consistency(const char* spec_json,
                                            const char* rows_path,
                                            char** summary_json) {
  return Guard([&] {
    NotNull(summary_json, "summary_json");
    const json o = ParseOptions(
        spec_json, {"design", "n", "reps", "v_star", "seed", "threads", "fit"});
    plusdc::ConsistencySpec spec;
    const std::string design = o.value("design", std::string("nurhm6"));
    const auto kind = plusdc::ParseDesignKind(design);
    Require(kind.has_value(), ErrorCode::kInput,
            "design must be nurhm6 or hsbm2");
    spec.design = *kind;
    spec.n_list = o.at("n").get<std::vector<int>>();
    spec.reps = o.value("reps", 20);
    if (o.contains("v_star")) {
      const auto v = o["v_star"].get<std::vector<double>>();
      spec.v_star = Eigen::Map<const Eigen::VectorXd>(
          v.data(), static_cast<Eigen::Index>(v.size()));
    }
    spec.seed = SeedOf(o);
    spec.threads = o.value("threads", 0);
    if (o.contains("fit")) spec.fit = ParseFitConfig(o["fit"]);
    const auto report = plusdc::RunConsistency(spec);

    std::ostringstream rows;
    rows << "design,n,rep,num_edges,ok,status,err_u_inf,err_v_inf,"
            "outer_iters,seconds\n";
    for (const auto& row : report.rows) {
      std::string status = row.status;
      for (char& ch : status) {
        if (ch == ',' || ch == '\n') ch = ' ';
      }
      rows << design << ',' << row.n << ',' << row.rep << ','
           << row.num_edges << ',' << (row.ok ? 1 : 0) << ',' << status
           << ',' << Csv(row.err_u_inf) << ',' << Csv(row.err_v_inf) << ','
           << row.outer_iters << ',' << Csv(row.seconds) << '\n';
    }
    if (rows_path != nullptr) WriteText(rows_path, rows.str());

    json summary = json::array();
    for (const auto& s : report.summary) {
      summary.push_back({{"n", s.n},
                         {"num_edges", s.num_edges},
                         {"ok", s.ok},
                         {"failed", s.failed},
                         {"mean_err_u_inf", s.mean_err_u},
                         {"sd_err_u_inf", s.sd_err_u},
                         {"mean_err_v_inf", s.mean_err_v},
                         {"sd_err_v_inf", s.sd_err_v}});
    }
    const json out = {{"experiment", "consistency"},
                      {"design", design},
                      {"reps", spec.reps},
                      {"seed", spec.seed},
                      {"generator", plusdc::Philox::kName},
                      {"v_star", VectorJson(spec.v_star)},
                      {"sd", "sample"},
                      {"fit", FitConfigJson(spec.fit)},
                      {"summary", summary}};
    *summary_json = CopyString(out.dump(2));
  });
}

plusdc_status plusdc_cv(const plusdc_dataset* data, const char* spec_json,
                        const char* rows_path, char** summary_json) {
  return Guard([&] {
    NotNull(data, "data");
    NotNull(summary_json, "summary_json");
    const json o = ParseOptions(
        spec_json, {"k", "modes", "seed", "include_pl", "threads", "fit"});
    plusdc::CvSpec spec;
    spec.k = o.value("k", spec.k);
    if (o.contains("modes")) {
      spec.modes.clear();
      for (const auto& name : o["modes"].get<std::vector<std::string>>()) {
        const auto mode = plusdc::ParseCvMode(name);
        Require(mode.has_value(), ErrorCode::kInput,
                "unknown CV mode '" + name + "' (top1, top3, full)");
        spec.modes.push_back(*mode);
      }
    }
    spec.seed = SeedOf(o);
    spec.include_pl = o.value("include_pl", true);
    spec.threads = o.value("threads", 0);
    if (o.contains("fit")) spec.fit = ParseFitConfig(o["fit"]);
    const auto report = plusdc::RunKfoldCv(data->data, spec);

    std::ostringstream rows;
    rows << "model,fold,mode,cross_entropy,num_test,existence\n";
    std::map<std::pair<std::string, std::string>, std::vector<double>> groups;
    for (const auto& row : report.rows) {
      rows << row.model << ',' << row.fold + 1 << ',' << row.mode << ','
           << Csv(row.cross_entropy) << ',' << row.num_test << ','
           << row.existence << '\n';
      groups[{row.model, row.mode}].push_back(row.cross_entropy);
    }
    if (rows_path != nullptr) WriteText(rows_path, rows.str());

    json means = json::array();
    for (const auto& [key, values] : groups) {
      double sum = 0.0;
      for (double x : values) sum += x;
      means.push_back({{"model", key.first},
                       {"mode", key.second},
                       {"mean_cross_entropy", sum / values.size()},
                       {"folds", values.size()}});
    }
    json fold_sizes = json::array();
    for (const auto& f : report.folds) fold_sizes.push_back(f.size());
    const json out = {{"experiment", "cv"},
                      {"k", spec.k},
                      {"seed", spec.seed},
                      {"generator", plusdc::Philox::kName},
                      {"attempts", report.attempts},
                      {"fold_sizes", fold_sizes},
                      {"cold_start_comparisons", 0},
                      {"fit", FitConfigJson(spec.fit)},
                      {"summary", means}};
    *summary_json = CopyString(out.dump(2));
  });
}

plusdc_status plusdc_select(const plusdc_dataset* data, const char* spec_json,
                            const char* rows_path, char** summary_json) {
  return Guard([&] {
    NotNull(data, "data");
    NotNull(summary_json, "summary_json");
    const json o = ParseOptions(spec_json, {"subsets", "threads", "fit"});
    const int d = data->data.num_covariates;
    std::vector<std::vector<int>> subsets;
    if (!o.contains("subsets") ||
        (o["subsets"].is_string() && o["subsets"] == "all")) {
      subsets = plusdc::AllSubsets(d);
    } else {
      for (const auto& s : o["subsets"]) {
        std::vector<int> subset;
        for (int j : s.get<std::vector<int>>()) {
          Require(j >= 1 && j <= d, ErrorCode::kInput,
                  "covariate index " + std::to_string(j) + " outside 1.." +
                      std::to_string(d));
          subset.push_back(j - 1);
        }
        subsets.push_back(std::move(subset));
      }
    }
    plusdc::FitConfig fit;
    if (o.contains("fit")) fit = ParseFitConfig(o["fit"]);
    const auto table =
        plusdc::ModelSelection(data->data, subsets, fit, o.value("threads", 0));

    std::ostringstream rows;
    rows << "rank,subset,loglik_norm,aic_norm,bic_norm,num_params,existence,"
            "converged,ranked\n";
    json entries = json::array();
    for (const auto& row : table) {
      std::string label;
      json subset = json::array();
      for (std::size_t t = 0; t < row.subset.size(); ++t) {
        if (t > 0) label += ';';
        label += std::to_string(row.subset[t] + 1);
        subset.push_back(row.subset[t] + 1);
      }
      rows << (row.ranked ? std::to_string(row.rank) : "") << ',' << label
           << ',' << Csv(row.criteria.loglik_norm) << ','
           << Csv(row.criteria.aic_norm) << ',' << Csv(row.criteria.bic_norm)
           << ',' << row.criteria.num_params << ',' << row.existence << ','
           << (row.converged ? 1 : 0) << ',' << (row.ranked ? 1 : 0) << '\n';
      entries.push_back(
          {{"rank", row.ranked ? json(row.rank) : json(nullptr)},
           {"subset", subset},
           {"loglik_norm", row.criteria.loglik_norm},
           {"aic_norm", row.criteria.aic_norm},
           {"bic_norm", row.criteria.bic_norm},
           {"num_params", row.criteria.num_params},
           {"existence", row.existence},
           {"converged", row.converged}});
    }
    if (rows_path != nullptr) WriteText(rows_path, rows.str());
    const json out = {{"experiment", "select"},
                      {"fit", FitConfigJson(fit)},
                      {"rows", entries}};
    *summary_json = CopyString(out.dump(2));
  });
}

}  // extern "C"
