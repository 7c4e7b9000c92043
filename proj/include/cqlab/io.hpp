// Copyright 2026 The cqlab Authors.
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

// File formats: channel files, matrices in [re, im] syntax and run records.

#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cqlab/channel.hpp"

namespace cqlab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

// Row-major [[[re, im], ...], ...].
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& what = "matrix");

struct ChannelFile {
  CqChannel channel;
  // Per-input costs, present for every input or for none.
  std::optional<std::vector<double>> costs;
  std::optional<double> budget;

  // Costs with the budget; the override replaces the file's budget.
  std::optional<CostSpec> cost_spec(std::optional<double> budget_override = std::nullopt) const;
};

ChannelFile channel_file_from_json(const Json& j);
Json channel_file_to_json(const ChannelFile& f);
ChannelFile load_channel_file(const std::filesystem::path& path);
void save_channel_file(const ChannelFile& f, const std::filesystem::path& path);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const Json& j, const std::filesystem::path& path);

struct RunRecord {
  std::string command;
  Json params = Json::object();
  std::uint64_t seed = 0;
  std::string version = kVersion;
  double wall_time = 0.0;
  Json outputs = Json::object();

  Json to_json() const;
  static RunRecord from_json(const Json& j);
};

}  // namespace cqlab
