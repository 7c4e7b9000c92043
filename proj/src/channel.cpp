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

#include "cqlab/channel.hpp"

#include <cmath>
#include <set>

namespace cqlab {

DensityMatrix::DensityMatrix(Matrix m, const Tolerances& tol) : m_(std::move(m)) {
  require_hermitian(m_, tol, "density matrix");
  m_ = hermitian_part(m_);
  const double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > tol.trace)
    throw InputError("density matrix: trace " + std::to_string(tr) + " is not 1");
  const auto sd = spectral_decompose(m_, tol);
  require_psd(sd, tol, "density matrix");
}

CqChannel::CqChannel(std::vector<Input> inputs) : inputs_(std::move(inputs)) {
  if (inputs_.empty()) throw InputError("channel: at least one input required");
  dim_ = inputs_.front().state.dim();
  std::set<std::string> seen;
  for (const auto& in : inputs_) {
    if (in.state.dim() != dim_) throw InputError("channel: input '" + in.label + "' has mismatched dimension");
    if (!seen.insert(in.label).second) throw InputError("channel: duplicate label '" + in.label + "'");
  }
}

int CqChannel::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < inputs_.size(); ++i)
    if (inputs_[i].label == label) return static_cast<int>(i);
  throw InputError("unknown channel label '" + label + "'");
}

std::vector<std::string> CqChannel::labels() const {
  std::vector<std::string> out;
  out.reserve(inputs_.size());
  for (const auto& in : inputs_) out.push_back(in.label);
  return out;
}

Sequence CqChannel::to_indices(std::span<const std::string> labels) const {
  Sequence s;
  s.reserve(labels.size());
  for (const auto& l : labels) s.push_back(index_of(l));
  return s;
}

CqChannel CqChannel::subchannel(std::span<const int> indices) const {
  std::vector<Input> in;
  for (int i : indices) in.push_back(inputs_.at(static_cast<std::size_t>(i)));
  return CqChannel(std::move(in));
}

FiniteDistribution::FiniteDistribution(std::vector<std::pair<std::string, double>> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) throw InputError("distribution: empty");
  std::set<std::string> seen;
  double total = 0.0;
  for (const auto& [label, w] : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("distribution: negative or non-finite weight for '" + label + "'");
    if (!seen.insert(label).second) throw InputError("distribution: duplicate label '" + label + "'");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InputError("distribution: weights sum to " + std::to_string(total));
}

FiniteDistribution FiniteDistribution::uniform(const std::vector<std::string>& labels) {
  std::vector<std::pair<std::string, double>> w;
  for (const auto& l : labels) w.emplace_back(l, 1.0 / static_cast<double>(labels.size()));
  return FiniteDistribution(std::move(w));
}

FiniteDistribution FiniteDistribution::point_mass(const std::string& label) {
  return FiniteDistribution({{label, 1.0}});
}

FiniteDistribution FiniteDistribution::over(const CqChannel& channel, const Vector& weights) {
  if (weights.size() != channel.size()) throw InputError("distribution: weight vector length mismatch");
  std::vector<std::pair<std::string, double>> w;
  const double total = weights.sum();
  for (int i = 0; i < channel.size(); ++i) w.emplace_back(channel.label(i), weights(i) / total);
  return FiniteDistribution(std::move(w));
}

double FiniteDistribution::weight(const std::string& label) const {
  for (const auto& [l, w] : weights_)
    if (l == label) return w;
  return 0.0;
}

std::vector<std::string> FiniteDistribution::support() const {
  std::vector<std::string> out;
  for (const auto& [l, w] : weights_)
    if (w > 0.0) out.push_back(l);
  return out;
}

Vector FiniteDistribution::aligned(const CqChannel& channel) const {
  Vector v = Vector::Zero(channel.size());
  for (const auto& [l, w] : weights_) {
    if (w <= 0.0) continue;
    v(channel.index_of(l)) = w;
  }
  return v;
}

double CostSpec::cost_of(const std::string& label) const {
  for (const auto& [l, c] : cost)
    if (l == label) return c;
  throw InputError("cost: no cost defined for label '" + label + "'");
}

Vector CostSpec::aligned(const CqChannel& channel) const {
  Vector v(channel.size());
  for (int i = 0; i < channel.size(); ++i) v(i) = cost_of(channel.label(i));
  return v;
}

double TypeClass::probability() const {
  return static_cast<double>(multiplicity) * sequence_probability;
}

BigInt multinomial(std::span<const int> counts) {
  BigInt result = 1;
  int total = 0;
  for (int c : counts) {
    // result *= C(total + c, c), built one factor at a time so every
    // intermediate division is exact.
    for (int j = 1; j <= c; ++j) {
      result *= (total + j);
      result /= j;
    }
    total += c;
  }
  return result;
}

DensityMatrix output_average(const FiniteDistribution& p, const CqChannel& w) {
  const Vector weights = p.aligned(w);
  Matrix avg = Matrix::Zero(w.dim(), w.dim());
  for (int i = 0; i < w.size(); ++i)
    if (weights(i) > 0.0) avg += weights(i) * w.state(i);
  return DensityMatrix(std::move(avg));
}

Eigen::Index tensor_dim(Eigen::Index d, int n, const Limits& limits) {
  double total = 1.0;
  for (int k = 0; k < n; ++k) total *= static_cast<double>(d);
  if (total > static_cast<double>(limits.max_dim))
    throw ResourceError("tensor dimension " + std::to_string(d) + "^" + std::to_string(n) +
                        " exceeds bound " + std::to_string(limits.max_dim));
  return static_cast<Eigen::Index>(total);
}

Matrix sequence_state(const CqChannel& w, std::span<const int> sequence, const Limits& limits) {
  tensor_dim(w.dim(), static_cast<int>(sequence.size()), limits);
  Matrix out = Matrix::Identity(1, 1);
  for (int x : sequence) out = kron(out, w.state(x));
  return out;
}

Matrix sequence_state(const CqChannel& w, std::span<const std::string> labels, const Limits& limits) {
  const Sequence s = w.to_indices(labels);
  return sequence_state(w, s, limits);
}

namespace {

// Support symbols of P as channel indices, with their probabilities.
std::pair<std::vector<int>, std::vector<double>> support_symbols(const FiniteDistribution& p,
                                                                 const CqChannel& w) {
  const Vector weights = p.aligned(w);
  std::vector<int> symbols;
  std::vector<double> probs;
  for (int i = 0; i < w.size(); ++i)
    if (weights(i) > 0.0) {
      symbols.push_back(i);
      probs.push_back(weights(i));
    }
  return {symbols, probs};
}

double binomial_double(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

void compositions(int remaining, std::size_t slot, std::vector<int>& counts,
                  const std::function<void(const std::vector<int>&)>& emit) {
  if (slot + 1 == counts.size()) {
    counts[slot] = remaining;
    emit(counts);
    return;
  }
  // Descending first count gives the lexicographically largest class first;
  // the order is fixed so reductions over classes are bit-stable.
  for (int c = remaining; c >= 0; --c) {
    counts[slot] = c;
    compositions(remaining - c, slot + 1, counts, emit);
  }
}

}  // namespace

std::vector<TypeClass> enumerate_type_classes(const FiniteDistribution& p, const CqChannel& w, int n,
                                              const Limits& limits) {
  if (n < 0) throw InputError("type classes: negative blocklength");
  const auto [symbols, probs] = support_symbols(p, w);
  const int k = static_cast<int>(symbols.size());
  if (binomial_double(n + k - 1, k - 1) > static_cast<double>(limits.max_type_classes))
    throw ResourceError("type classes: count exceeds bound");

  std::vector<TypeClass> out;
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  compositions(n, 0, counts, [&](const std::vector<int>& c) {
    TypeClass tc;
    tc.symbols = symbols;
    tc.counts = c;
    tc.multiplicity = multinomial(c);
    double logp = 0.0;
    for (int j = 0; j < k; ++j) {
      for (int r = 0; r < c[static_cast<std::size_t>(j)]; ++r) tc.representative.push_back(symbols[static_cast<std::size_t>(j)]);
      logp += c[static_cast<std::size_t>(j)] * std::log(probs[static_cast<std::size_t>(j)]);
    }
    tc.sequence_probability = std::exp(logp);
    out.push_back(std::move(tc));
  });
  return out;
}

void for_each_sequence(const FiniteDistribution& p, const CqChannel& w, int n,
                       const std::function<void(const Sequence&, double)>& visit, const Limits& limits) {
  const auto [symbols, probs] = support_symbols(p, w);
  const std::size_t k = symbols.size();
  double total = 1.0;
  for (int r = 0; r < n; ++r) total *= static_cast<double>(k);
  if (total > static_cast<double>(limits.max_sequences)) throw ResourceError("sequence enumeration exceeds bound");

  std::vector<std::size_t> digits(static_cast<std::size_t>(n), 0);
  Sequence seq(static_cast<std::size_t>(n));
  while (true) {
    double prob = 1.0;
    for (int r = 0; r < n; ++r) {
      seq[static_cast<std::size_t>(r)] = symbols[digits[static_cast<std::size_t>(r)]];
      prob *= probs[digits[static_cast<std::size_t>(r)]];
    }
    visit(seq, prob);
    int pos = n - 1;
    while (pos >= 0 && ++digits[static_cast<std::size_t>(pos)] == k) digits[static_cast<std::size_t>(pos--)] = 0;
    if (pos < 0) break;
  }
}

namespace {

// Smallest denominator q <= 10^6 making every value an integer multiple of
// 1/q (to 1e-12), or 0.
std::int64_t common_scale(const std::vector<double>& values) {
  for (std::int64_t q = 1; q <= 1000000; q = (q < 1000 ? q + 1 : q * 10)) {
    bool ok = true;
    for (double v : values) {
      const double s = v * static_cast<double>(q);
      if (std::abs(s) > 4e15 || std::abs(s - std::round(s)) > 1e-12 * std::max(1.0, std::abs(s))) {
        ok = false;
        break;
      }
    }
    if (ok) return q;
  }
  return 0;
}

}  // namespace

BudgetPredicate::BudgetPredicate(const CqChannel& w, const CostSpec& cost, int n)
    : n_(n), costs_(cost.aligned(w)), budget_(cost.budget) {
  std::vector<double> values(costs_.data(), costs_.data() + costs_.size());
  values.push_back(budget_);
  scale_ = common_scale(values);
  if (scale_ > 0) {
    for (Eigen::Index i = 0; i < costs_.size(); ++i)
      scaled_costs_.push_back(static_cast<std::int64_t>(std::llround(costs_(i) * static_cast<double>(scale_))));
    scaled_budget_ = static_cast<std::int64_t>(std::llround(budget_ * static_cast<double>(scale_))) * n_;
  }
}

bool BudgetPredicate::operator()(std::span<const int> sequence) const {
  if (scale_ > 0) {
    std::int64_t total = 0;
    for (int x : sequence) total += scaled_costs_.at(static_cast<std::size_t>(x));
    return total <= scaled_budget_;
  }
  double total = 0.0;
  for (int x : sequence) total += costs_(x);
  const double limit = static_cast<double>(n_) * budget_;
  return total <= limit + 1e-12 * std::max(1.0, std::abs(limit));
}

BudgetPredicate restrict_channel(const CqChannel& w, int n, const CostSpec& cost) {
  return BudgetPredicate(w, cost, n);
}

std::pair<Matrix, Matrix> block_pair(const FiniteDistribution& p, const CqChannel& w, const Matrix& sigma) {
  const auto [symbols, probs] = support_symbols(p, w);
  std::vector<Matrix> r, s;
  for (std::size_t j = 0; j < symbols.size(); ++j) {
    r.push_back(probs[j] * w.state(symbols[j]));
    s.push_back(probs[j] * sigma);
  }
  return {direct_sum<double>(r), direct_sum<double>(s)};
}

}  // namespace cqlab
