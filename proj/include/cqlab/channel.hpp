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

// Classical-quantum channels, finite input distributions, additive costs
// and the type-class machinery used to evaluate i.i.d. extensions.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cqlab/operator.hpp"

namespace cqlab {

using BigInt = boost::multiprecision::cpp_int;
// An input sequence x^n as indices into CqChannel::inputs().
using Sequence = std::vector<int>;

// A validated state: Hermitian, PSD and unit trace.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix m, const Tolerances& tol = {});

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  operator const Matrix&() const { return m_; }

 private:
  Matrix m_;
};

class CqChannel {
 public:
  struct Input {
    std::string label;
    DensityMatrix state;
  };

  CqChannel(std::vector<Input> inputs);

  Eigen::Index dim() const { return dim_; }
  int size() const { return static_cast<int>(inputs_.size()); }
  const std::vector<Input>& inputs() const { return inputs_; }
  const Matrix& state(int index) const { return inputs_.at(static_cast<std::size_t>(index)).state.matrix(); }
  const std::string& label(int index) const { return inputs_.at(static_cast<std::size_t>(index)).label; }
  // Throws InputError for unknown labels.
  int index_of(const std::string& label) const;
  std::vector<std::string> labels() const;

  Sequence to_indices(std::span<const std::string> labels) const;
  // Channel restricted to the given inputs, in the given order.
  CqChannel subchannel(std::span<const int> indices) const;

 private:
  Eigen::Index dim_ = 0;
  std::vector<Input> inputs_;
};

// A probability vector over labels with finite support.
class FiniteDistribution {
 public:
  FiniteDistribution() = default;
  FiniteDistribution(std::vector<std::pair<std::string, double>> weights);

  static FiniteDistribution uniform(const std::vector<std::string>& labels);
  static FiniteDistribution point_mass(const std::string& label);
  // From a weight vector aligned with the channel's inputs.
  static FiniteDistribution over(const CqChannel& channel, const Vector& weights);

  const std::vector<std::pair<std::string, double>>& entries() const { return weights_; }
  double weight(const std::string& label) const;
  // Labels with positive weight.
  std::vector<std::string> support() const;

  // Weights aligned with channel inputs; throws InputError if the support is
  // not inside the channel's labels.
  Vector aligned(const CqChannel& channel) const;

 private:
  std::vector<std::pair<std::string, double>> weights_;
};

// Per-symbol cost c(x) and per-symbol budget gamma.
struct CostSpec {
  std::vector<std::pair<std::string, double>> cost;
  double budget = 0.0;

  double cost_of(const std::string& label) const;
  Vector aligned(const CqChannel& channel) const;
};

struct TypeClass {
  // Symbol counts aligned with `symbols` (channel input indices).
  std::vector<int> symbols;
  std::vector<int> counts;
  BigInt multiplicity;
  // Sorted representative sequence of channel indices.
  Sequence representative;
  // P^n mass of a single sequence in the class.
  double sequence_probability = 0.0;

  // Mass of the whole class, multiplicity * sequence_probability.
  double probability() const;
};

BigInt multinomial(std::span<const int> counts);

// W_P = sum_x P(x) W_x.
DensityMatrix output_average(const FiniteDistribution& p, const CqChannel& w);

// W_{x_1} ⊗ ... ⊗ W_{x_n}.
Matrix sequence_state(const CqChannel& w, std::span<const int> sequence, const Limits& limits = {});
Matrix sequence_state(const CqChannel& w, std::span<const std::string> labels, const Limits& limits = {});

// d^n, or ResourceError when it exceeds limits.max_dim.
Eigen::Index tensor_dim(Eigen::Index d, int n, const Limits& limits = {});

std::vector<TypeClass> enumerate_type_classes(const FiniteDistribution& p, const CqChannel& w, int n,
                                              const Limits& limits = {});

// Calls visit(sequence, P^n(sequence)) for every sequence over supp(P).
void for_each_sequence(const FiniteDistribution& p, const CqChannel& w, int n,
                       const std::function<void(const Sequence&, double)>& visit,
                       const Limits& limits = {});

// Accepts x^n iff sum_i c(x_i) <= n * gamma. Costs that are rationals with a
// common denominator up to 10^6 are compared in exact integer arithmetic,
// otherwise with relative tolerance 1e-12.
class BudgetPredicate {
 public:
  BudgetPredicate(const CqChannel& w, const CostSpec& cost, int n);

  bool operator()(std::span<const int> sequence) const;
  bool exact() const { return scale_ > 0; }
  // Integer-scaled costs when exact(), indexed by channel input.
  const std::vector<std::int64_t>& scaled_costs() const { return scaled_costs_; }
  std::int64_t scaled_budget() const { return scaled_budget_; }
  int n() const { return n_; }

 private:
  int n_;
  Vector costs_;
  double budget_;
  std::int64_t scale_ = 0;
  std::vector<std::int64_t> scaled_costs_;
  std::int64_t scaled_budget_ = 0;
};

BudgetPredicate restrict_channel(const CqChannel& w, int n, const CostSpec& cost);

// The block pair R = ⊕ P(x) W_x, S = ⊕ P(x) sigma over supp(P), so that the
// information spectrum of (P, W) relative to sigma is the divergence spectrum
// of (R, S).
std::pair<Matrix, Matrix> block_pair(const FiniteDistribution& p, const CqChannel& w, const Matrix& sigma);

}  // namespace cqlab
