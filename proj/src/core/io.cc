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

#include "core/io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include "core/error.h"

namespace plusdc {
namespace {

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  for (auto& f : fields) {
    const auto begin = f.find_first_not_of(" \t");
    const auto end = f.find_last_not_of(" \t");
    f = begin == std::string::npos ? "" : f.substr(begin, end - begin + 1);
  }
  return fields;
}

std::string RowError(int row, const std::string& message) {
  return "row " + std::to_string(row) + ": " + message;
}

long ParseInt(const std::string& text, int row, const std::string& column) {
  long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  Require(!text.empty() && ec == std::errc() && ptr == end, ErrorCode::kInput,
          RowError(row, column + " must be an integer, got '" + text + "'"));
  return value;
}

double ParseDouble(const std::string& text, int row,
                   const std::string& column) {
  Require(!text.empty(), ErrorCode::kInput,
          RowError(row, column + " is empty"));
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  Require(used == text.size() && std::isfinite(value), ErrorCode::kInput,
          RowError(row, column + " must be a finite number, got '" + text +
                            "'"));
  return value;
}

// Reads the next non-empty line, stripping a trailing CR.
bool NextLine(std::istream& in, std::string* line, int* row) {
  while (std::getline(in, *line)) {
    ++*row;
    if (!line->empty() && line->back() == '\r') line->pop_back();
    if (!line->empty()) return true;
  }
  return false;
}

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path);
  Require(in.good(), ErrorCode::kIo, "cannot open '" + path + "'");
  return in;
}

}  // namespace

std::string FormatDouble(double x) {
  std::ostringstream out;
  out << std::setprecision(17) << x;
  return out.str();
}

Dataset ReadComparisonsCsv(std::istream& in, const ReadOptions& options) {
  std::string line;
  int row = 0;
  Require(NextLine(in, &line, &row), ErrorCode::kInput,
          "comparisons file is empty (header required)");
  const auto header = SplitCsvLine(line);
  Require(header.size() >= 3 && header[0] == "comparison_id" &&
              header[1] == "rank" && header[2] == "object_id",
          ErrorCode::kInput,
          RowError(row, "header must start with comparison_id,rank,object_id"));
  const int d = static_cast<int>(header.size()) - 3;
  for (int j = 0; j < d; ++j) {
    Require(header[3 + j] == "x" + std::to_string(j + 1), ErrorCode::kInput,
            RowError(row, "covariate column " + std::to_string(j + 1) +
                              " must be named x" + std::to_string(j + 1)));
  }

  struct Pending {
    std::vector<int> objects;
    std::vector<long> ranks;
    std::vector<std::vector<double>> covariates;
    std::vector<int> rows;
    std::string id;
  };
  std::vector<Pending> groups;
  std::unordered_map<std::string, int> index;
  int max_id = 0;
  while (NextLine(in, &line, &row)) {
    const auto fields = SplitCsvLine(line);
    Require(static_cast<int>(fields.size()) == 3 + d, ErrorCode::kInput,
            RowError(row, "expected " + std::to_string(3 + d) +
                              " columns, found " +
                              std::to_string(fields.size())));
    Require(!fields[0].empty(), ErrorCode::kInput,
            RowError(row, "comparison_id is empty"));
    auto [it, inserted] =
        index.emplace(fields[0], static_cast<int>(groups.size()));
    if (inserted) groups.push_back({});
    Pending& g = groups[it->second];
    g.id = fields[0];
    const long object = ParseInt(fields[2], row, "object_id");
    Require(object >= 1, ErrorCode::kInput,
            RowError(row, "object_id must be >= 1"));
    Require(options.num_objects == 0 || object <= options.num_objects,
            ErrorCode::kInput,
            RowError(row, "object_id " + std::to_string(object) +
                              " exceeds n = " +
                              std::to_string(options.num_objects)));
    max_id = std::max(max_id, static_cast<int>(object));
    g.objects.push_back(static_cast<int>(object) - 1);
    g.ranks.push_back(fields[1].empty() ? 0
                                        : ParseInt(fields[1], row, "rank"));
    std::vector<double> x(d);
    for (int j = 0; j < d; ++j) {
      x[j] = ParseDouble(fields[3 + j], row, "x" + std::to_string(j + 1));
    }
    g.covariates.push_back(std::move(x));
    g.rows.push_back(row);
  }

  Dataset data;
  data.num_objects = options.num_objects > 0 ? options.num_objects : max_id;
  data.num_covariates = d;
  Require(!groups.empty(), ErrorCode::kInput, "no comparisons in file");
  for (const auto& g : groups) {
    const int m = static_cast<int>(g.objects.size());
    const std::string where = "comparison '" + g.id + "'";
    Require(m >= 2, ErrorCode::kInput,
            RowError(g.rows[0], where + " has a single object"));
    const bool observed = g.ranks[0] != 0;
    Comparison c;
    c.edge = g.objects;
    c.covariates.resize(m, d);
    std::vector<int> position(m, -1);
    for (int t = 0; t < m; ++t) {
      for (int j = 0; j < d; ++j) c.covariates(t, j) = g.covariates[t][j];
      for (int s = 0; s < t; ++s) {
        Require(g.objects[s] != g.objects[t], ErrorCode::kInput,
                RowError(g.rows[t], where + " repeats object " +
                                        std::to_string(g.objects[t] + 1)));
      }
      Require((g.ranks[t] != 0) == observed, ErrorCode::kInput,
              RowError(g.rows[t], where + " mixes blank and filled ranks"));
      if (!observed) continue;
      const long r = g.ranks[t];
      Require(r >= 1 && r <= m, ErrorCode::kInput,
              RowError(g.rows[t], where + " rank " + std::to_string(r) +
                                      " outside 1.." + std::to_string(m)));
      Require(position[r - 1] < 0, ErrorCode::kInput,
              RowError(g.rows[t], where + " has duplicate rank " +
                                      std::to_string(r) +
                                      " (ties are not supported)"));
      position[r - 1] = t;
    }
    if (observed) c.ranking = position;
    Require(!options.require_outcomes || observed, ErrorCode::kInput,
            RowError(g.rows[0], where + " has no ranks"));
    CanonicalizeComparison(&c);
    data.comparisons.push_back(std::move(c));
  }
  return data;
}

Dataset ReadComparisonsCsvFile(const std::string& path,
                               const ReadOptions& options) {
  auto in = OpenInput(path);
  try {
    return ReadComparisonsCsv(in, options);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

void WriteComparisonsCsv(const Dataset& data, std::ostream& out) {
  out << "comparison_id,rank,object_id";
  for (int j = 0; j < data.num_covariates; ++j) out << ",x" << j + 1;
  out << '\n';
  for (int i = 0; i < data.size(); ++i) {
    const auto& c = data.comparisons[i];
    std::vector<int> rank(c.size(), 0);
    for (std::size_t r = 0; r < c.ranking.size(); ++r) {
      rank[c.ranking[r]] = static_cast<int>(r) + 1;
    }
    for (int t = 0; t < c.size(); ++t) {
      out << i + 1 << ',';
      if (c.observed()) out << rank[t];
      out << ',' << c.edge[t] + 1;
      for (int j = 0; j < data.num_covariates; ++j) {
        out << ',' << FormatDouble(c.covariates(t, j));
      }
      out << '\n';
    }
  }
}

Hypergraph ReadGraphCsv(std::istream& in, int num_vertices) {
  std::string line;
  int row = 0;
  Require(NextLine(in, &line, &row), ErrorCode::kInput,
          "graph file is empty (header required)");
  const auto header = SplitCsvLine(line);
  Require(header.size() == 2 && header[0] == "comparison_id" &&
              header[1] == "object_id",
          ErrorCode::kInput,
          RowError(row, "header must be comparison_id,object_id"));
  std::vector<std::vector<int>> edges;
  std::unordered_map<std::string, int> index;
  int max_id = 0;
  while (NextLine(in, &line, &row)) {
    const auto fields = SplitCsvLine(line);
    Require(fields.size() == 2, ErrorCode::kInput,
            RowError(row, "expected 2 columns"));
    const long object = ParseInt(fields[1], row, "object_id");
    Require(object >= 1, ErrorCode::kInput,
            RowError(row, "object_id must be >= 1"));
    auto [it, inserted] =
        index.emplace(fields[0], static_cast<int>(edges.size()));
    if (inserted) edges.emplace_back();
    edges[it->second].push_back(static_cast<int>(object) - 1);
    max_id = std::max(max_id, static_cast<int>(object));
  }
  return Hypergraph(num_vertices > 0 ? num_vertices : std::max(max_id, 1),
                    std::move(edges));
}

Hypergraph ReadGraphCsvFile(const std::string& path, int num_vertices) {
  auto in = OpenInput(path);
  try {
    return ReadGraphCsv(in, num_vertices);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

void WriteGraphCsv(const Hypergraph& graph, std::ostream& out) {
  out << "comparison_id,object_id\n";
  for (int i = 0; i < graph.num_edges(); ++i) {
    for (int v : graph.edge(i)) out << i + 1 << ',' << v + 1 << '\n';
  }
}

nlohmann::json ParamsToJson(const Params& theta, const nlohmann::json& meta) {
  nlohmann::json j;
  j["u"] = std::vector<double>(theta.u.data(), theta.u.data() + theta.u.size());
  j["v"] = std::vector<double>(theta.v.data(), theta.v.data() + theta.v.size());
  j["meta"] = meta.is_null() ? nlohmann::json::object() : meta;
  return j;
}

Params ParamsFromJson(const nlohmann::json& j) {
  Require(j.is_object() && j.contains("u") && j["u"].is_array() &&
              j.contains("v") && j["v"].is_array(),
          ErrorCode::kInput, "params JSON needs arrays 'u' and 'v'");
  Params theta;
  try {
    const auto u = j["u"].get<std::vector<double>>();
    const auto v = j["v"].get<std::vector<double>>();
    theta.u = Eigen::Map<const Eigen::VectorXd>(
        u.data(), static_cast<Eigen::Index>(u.size()));
    theta.v = Eigen::Map<const Eigen::VectorXd>(
        v.data(), static_cast<Eigen::Index>(v.size()));
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kInput, std::string("params JSON: ") + e.what());
  }
  Require(theta.u.size() >= 1, ErrorCode::kInput, "params JSON has empty u");
  return theta;
}

std::string ReadFile(const std::string& path) {
  auto in = OpenInput(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  Require(out.good(), ErrorCode::kIo, "cannot write '" + path + "'");
  out << contents;
  Require(out.good(), ErrorCode::kIo, "write to '" + path + "' failed");
}

}  // namespace plusdc
