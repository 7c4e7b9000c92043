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

#include "cqlab/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace cqlab {

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw InputError(what + ": expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Matrix m(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows)
      throw InputError(what + ": row " + std::to_string(i) + " has the wrong length");
    for (Eigen::Index k = 0; k < rows; ++k) {
      const Json& e = row[static_cast<std::size_t>(k)];
      if (e.is_number()) {
        m(i, k) = Complex(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(i, k) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        throw InputError(what + ": entry (" + std::to_string(i) + "," + std::to_string(k) +
                         ") is not a number or [re, im] pair");
      }
    }
  }
  return m;
}

std::optional<CostSpec> ChannelFile::cost_spec(std::optional<double> budget_override) const {
  const auto gamma = budget_override ? budget_override : budget;
  if (!gamma) return std::nullopt;
  if (!costs) throw InputError("a budget needs a cost on every input");
  CostSpec spec;
  for (int x = 0; x < channel.size(); ++x)
    spec.cost.emplace_back(channel.label(x), (*costs)[static_cast<std::size_t>(x)]);
  spec.budget = *gamma;
  return spec;
}

ChannelFile channel_file_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("channel file: expected an object");
  if (!j.contains("inputs") || !j["inputs"].is_array() || j["inputs"].empty())
    throw InputError("channel file: missing or empty \"inputs\"");
  std::optional<Eigen::Index> dim;
  if (j.contains("dim")) {
    if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1)
      throw InputError("channel file: \"dim\" must be a positive integer");
    dim = static_cast<Eigen::Index>(j["dim"].get<long long>());
  }
  std::vector<CqChannel::Input> inputs;
  std::vector<double> costs;
  std::set<std::string> seen;
  std::size_t with_cost = 0;
  for (const auto& in : j["inputs"]) {
    if (!in.is_object() || !in.contains("label") || !in["label"].is_string())
      throw InputError("channel file: every input needs a string \"label\"");
    const auto label = in["label"].get<std::string>();
    if (!seen.insert(label).second) throw InputError("channel file: duplicate label \"" + label + "\"");
    if (!in.contains("state")) throw InputError("channel file: input \"" + label + "\" has no state");
    Matrix m = matrix_from_json(in["state"], "state of \"" + label + "\"");
    if (dim && m.rows() != *dim)
      throw InputError("channel file: state of \"" + label + "\" is not " + std::to_string(*dim) + "x" +
                       std::to_string(*dim));
    inputs.push_back({label, DensityMatrix(std::move(m))});
    if (in.contains("cost")) {
      if (!in["cost"].is_number()) throw InputError("channel file: cost of \"" + label + "\" is not a number");
      costs.push_back(in["cost"].get<double>());
      ++with_cost;
    } else {
      costs.push_back(0.0);
    }
  }
  if (with_cost != 0 && with_cost != inputs.size())
    throw InputError("channel file: costs must be given for all inputs or none");
  ChannelFile f{CqChannel(std::move(inputs)), std::nullopt, std::nullopt};
  if (with_cost) f.costs = std::move(costs);
  if (j.contains("budget")) {
    if (!j["budget"].is_number()) throw InputError("channel file: \"budget\" is not a number");
    f.budget = j["budget"].get<double>();
    if (!f.costs) throw InputError("channel file: \"budget\" given without costs");
  }
  return f;
}

Json channel_file_to_json(const ChannelFile& f) {
  Json j;
  j["dim"] = f.channel.dim();
  Json inputs = Json::array();
  for (int x = 0; x < f.channel.size(); ++x) {
    Json in;
    in["label"] = f.channel.label(x);
    in["state"] = matrix_to_json(f.channel.state(x));
    if (f.costs) in["cost"] = (*f.costs)[static_cast<std::size_t>(x)];
    inputs.push_back(std::move(in));
  }
  j["inputs"] = std::move(inputs);
  if (f.budget) j["budget"] = *f.budget;
  return j;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_json_file(const Json& j, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

ChannelFile load_channel_file(const std::filesystem::path& path) {
  return channel_file_from_json(read_json_file(path));
}

void save_channel_file(const ChannelFile& f, const std::filesystem::path& path) {
  write_json_file(channel_file_to_json(f), path);
}

Json RunRecord::to_json() const {
  Json j;
  j["command"] = command;
  j["params"] = params;
  j["seed"] = seed;
  j["version"] = version;
  j["wall_time"] = wall_time;
  j["outputs"] = outputs;
  return j;
}

RunRecord RunRecord::from_json(const Json& j) {
  for (const char* key : {"command", "params", "seed", "version", "outputs"})
    if (!j.contains(key)) throw InputError(std::string("run record: missing \"") + key + "\"");
  RunRecord r;
  r.command = j["command"].get<std::string>();
  r.params = j["params"];
  r.seed = j["seed"].get<std::uint64_t>();
  r.version = j["version"].get<std::string>();
  r.wall_time = j.value("wall_time", 0.0);
  r.outputs = j["outputs"];
  return r;
}

}  // namespace cqlab
