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

// File formats. Object ids are 1-based in every file.
//
//   comparisons CSV  comparison_id,rank,object_id,x1..xd
//   graph CSV        comparison_id,object_id
//   params JSON      {"u": [...], "v": [...], "meta": {...}}
//
// Rows sharing a comparison_id form one comparison, in order of first
// appearance. A blank rank column marks an unobserved comparison.

#ifndef PLUSDC_CORE_IO_H_
#define PLUSDC_CORE_IO_H_

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "core/hypergraph.h"
#include "core/model.h"

namespace plusdc {

struct ReadOptions {
  // 0 infers n as the largest object id.
  int num_objects = 0;
  bool require_outcomes = false;
};

Dataset ReadComparisonsCsv(std::istream& in, const ReadOptions& options = {});
Dataset ReadComparisonsCsvFile(const std::string& path,
                               const ReadOptions& options = {});
void WriteComparisonsCsv(const Dataset& data, std::ostream& out);

Hypergraph ReadGraphCsv(std::istream& in, int num_vertices = 0);
Hypergraph ReadGraphCsvFile(const std::string& path, int num_vertices = 0);
void WriteGraphCsv(const Hypergraph& graph, std::ostream& out);

nlohmann::json ParamsToJson(const Params& theta, const nlohmann::json& meta);
Params ParamsFromJson(const nlohmann::json& j);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);

// Full-precision decimal rendering used in every CSV.
std::string FormatDouble(double x);

}  // namespace plusdc

#endif  // PLUSDC_CORE_IO_H_
