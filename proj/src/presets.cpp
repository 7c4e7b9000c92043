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

#include "cqlab/presets.hpp"

#include <cmath>
#include <numbers>

namespace cqlab {
namespace {

Matrix pure(const Vector& v) {
  const Eigen::VectorXcd c = v.cast<Complex>();
  return c * c.adjoint();
}

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

Preset build(std::string name, std::string description, std::vector<Matrix> states, double capacity) {
  std::vector<CqChannel::Input> inputs;
  for (std::size_t k = 0; k < states.size(); ++k)
    inputs.push_back({std::to_string(k), DensityMatrix(std::move(states[k]))});
  return {std::move(name), std::move(description), ChannelFile{CqChannel(std::move(inputs)), std::nullopt, std::nullopt},
          capacity};
}

double parse_param(const std::string& spec, std::size_t colon) {
  const std::string text = spec.substr(colon + 1);
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw InputError("");
    return v;
  } catch (const std::exception&) {
    throw InputError("preset \"" + spec + "\": parameter is not a number");
  }
}

}  // namespace

double binary_entropy(double p) {
  auto term = [](double q) { return q > 0.0 ? -q * std::log(q) : 0.0; };
  return term(p) + term(1.0 - p);
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"orthogonal-pure", "identical-states", "bsc", "two-pure-overlap",
                                                 "trine"};
  return names;
}

Preset orthogonal_pure() {
  return build("orthogonal-pure", "|0><0| and |1><1|; capacity ln 2", {diag2(1, 0), diag2(0, 1)}, std::log(2.0));
}

Preset identical_states() {
  return build("identical-states", "two inputs sharing diag(0.7, 0.3); capacity 0", {diag2(0.7, 0.3), diag2(0.7, 0.3)},
               0.0);
}

Preset bsc(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("bsc: crossover must lie in [0, 1]");
  return build("bsc", "diagonal binary symmetric channel; capacity ln 2 - H2(p)", {diag2(1 - p, p), diag2(p, 1 - p)},
               std::log(2.0) - binary_entropy(p));
}

Preset two_pure_overlap(double theta) {
  Vector a(2), b(2);
  a << 1.0, 0.0;
  b << std::sin(theta), std::cos(theta);
  return build("two-pure-overlap", "pure states with overlap sin(theta); capacity H2((1 + sin theta)/2)",
               {pure(a), pure(b)}, binary_entropy((1.0 + std::abs(std::sin(theta))) / 2.0));
}

Preset trine() {
  std::vector<Matrix> states;
  for (int k = 0; k < 3; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / 3.0;
    Vector v(2);
    v << std::cos(angle), std::sin(angle);
    states.push_back(pure(v));
  }
  return build("trine", "three real pure states at 120 degrees; capacity ln 2", std::move(states), std::log(2.0));
}

Preset make_preset(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const bool has = colon != std::string::npos;
  if (name == "orthogonal-pure" && !has) return orthogonal_pure();
  if (name == "identical-states" && !has) return identical_states();
  if (name == "trine" && !has) return trine();
  if (name == "bsc") return bsc(has ? parse_param(spec, colon) : 0.1);
  if (name == "two-pure-overlap") return two_pure_overlap(has ? parse_param(spec, colon) : std::numbers::pi / 6.0);
  throw InputError("unknown preset \"" + spec + "\"");
}

}  // namespace cqlab
