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

#include "cqlab/coding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "cqlab/parallel.hpp"
#include "cqlab/rng.hpp"
#include "cqlab/spectrum.hpp"

namespace cqlab {
namespace {

void check_codebook_memory(Eigen::Index dim, int codebook_size, const Limits& limits) {
  const double entries = static_cast<double>(codebook_size) * static_cast<double>(dim) * static_cast<double>(dim);
  if (entries > static_cast<double>(limits.max_dim) * static_cast<double>(limits.max_dim) * 4.0)
    throw ResourceError("codebook of " + std::to_string(codebook_size) + " decoder operators of dimension " +
                        std::to_string(dim) + " exceeds the memory bound");
}

// Draws x^n from P^n by inverse CDF on the channel-aligned weights.
Sequence sample_sequence(const Vector& weights, int n, CounterRng& rng) {
  Sequence s(static_cast<std::size_t>(n));
  for (auto& x : s) {
    const double u = rng.uniform();
    double acc = 0.0;
    int pick = -1;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
      if (weights(i) <= 0.0) continue;
      acc += weights(i);
      pick = static_cast<int>(i);
      if (u < acc) break;
    }
    x = pick;
  }
  return s;
}

// Spectral projections keyed by sequence, shared across trials.
class ProjectionCache {
 public:
  using Maker = std::function<Matrix(const Sequence&)>;
  explicit ProjectionCache(Maker make) : make_(std::move(make)) {}

  Matrix get(const Sequence& s) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (auto it = cache_.find(s); it != cache_.end()) return it->second;
    }
    Matrix m = make_(s);
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.emplace(s, std::move(m)).first->second;
  }

 private:
  Maker make_;
  std::mutex mu_;
  std::map<Sequence, Matrix> cache_;
};

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double standard_error_of(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace

void Code::validate(const Tolerances& tol) const {
  if (encoder.size() != decoder.size()) throw InputError("code: encoder and decoder sizes differ");
  if (decoder.empty()) return;
  const Eigen::Index d = decoder.front().rows();
  Matrix total = Matrix::Zero(d, d);
  for (const auto& y : decoder) {
    if (y.rows() != d || y.cols() != d) throw InputError("code: decoder dimension mismatch");
    const auto sd = spectral_decompose(y, tol);
    if (sd.eigenvalues(0) < -1e-9) throw InputError("code: decoder operator not PSD");
    total += y;
  }
  const auto sd = spectral_decompose(Matrix(total - Matrix::Identity(d, d)), tol);
  if (sd.eigenvalues(d - 1) > 1e-9) throw InputError("code: decoder operators sum above identity");
}

double average_error(const Code& code, const CqChannel& w, const Limits& limits) {
  if (code.encoder.size() != code.decoder.size() || code.encoder.empty())
    throw InputError("average_error: encoder and decoder sizes differ or are empty");
  double success = 0.0;
  for (std::size_t i = 0; i < code.encoder.size(); ++i) {
    const Matrix x = sequence_state(w, code.encoder[i], limits);
    if (x.rows() != code.decoder[i].rows()) throw InputError("average_error: decoder dimension mismatch");
    success += trace_product(x, code.decoder[i]);
  }
  return 1.0 - success / static_cast<double>(code.size());
}

std::vector<Matrix> srm_decoder(std::span<const Matrix> pieces, const Tolerances& tol) {
  if (pieces.empty()) return {};
  const Eigen::Index d = pieces.front().rows();
  Matrix total = Matrix::Zero(d, d);
  for (const auto& p : pieces) {
    if (p.rows() != d) throw InputError("srm_decoder: pieces differ in dimension");
    total += p;
  }
  const Matrix root = inv_sqrt(total, tol);
  std::vector<Matrix> out;
  out.reserve(pieces.size());
  for (const auto& p : pieces) out.push_back(hermitian_part(root * p * root));
  return out;
}

std::vector<Matrix> lemma3_pieces(std::span<const Sequence> encoder, const FiniteDistribution& p, const CqChannel& w,
                                  int n, double a, const Limits& limits, const Tolerances& tol) {
  tensor_dim(w.dim(), n, limits);
  const Matrix reference = kron_power(output_average(p, w).matrix(), n);
  const double scale = std::exp(n * a);
  std::vector<Matrix> out;
  for (const auto& s : encoder) {
    const Matrix x = sequence_state(w, s, limits);
    out.push_back(spectral_projection(Matrix(x - scale * reference), Comparator::Greater, 0.0, tol));
  }
  return out;
}

double lemma3_chain_rhs(std::span<const Sequence> encoder, std::span<const Matrix> pieces, const CqChannel& w,
                        double c, const Limits& limits) {
  const std::size_t n_codes = encoder.size();
  if (pieces.size() != n_codes || n_codes == 0) throw InputError("lemma3_chain_rhs: size mismatch");
  const double first = 1.0 + c, second = 2.0 + c + 1.0 / c;
  double total = 0.0;
  for (std::size_t i = 0; i < n_codes; ++i) {
    const Matrix x = sequence_state(w, encoder[i], limits);
    double term = first * (1.0 - trace_product(x, pieces[i]));
    for (std::size_t j = 0; j < n_codes; ++j)
      if (j != i) term += second * trace_product(x, pieces[j]);
    total += term;
  }
  return total / static_cast<double>(n_codes);
}

DirectBound direct_bound_rhs(double tail, int n, double a, int codebook_size, std::optional<double> c) {
  DirectBound r;
  r.tail = tail;
  r.collision = std::exp(-n * a) * codebook_size;
  const double A = r.tail, B = r.collision;
  r.optimal_c = (A + B > 0.0 && B > 0.0) ? std::sqrt(B / (A + B)) : 1.0;
  r.optimal = A + 2.0 * B + 2.0 * std::sqrt(B * (A + B));
  r.c = c.value_or(r.optimal_c);
  if (!(r.c > 0.0)) throw InputError("direct_bound_rhs: c must be positive");
  r.fixed_c = (1.0 + r.c) * A + (2.0 + r.c + 1.0 / r.c) * B;
  return r;
}

HswDecoder hsw_decoder(std::span<const Sequence> encoder, const FiniteDistribution& p, const CqChannel& w, int n,
                       double b, double c, const Limits& limits, const Tolerances& tol) {
  tensor_dim(w.dim(), n, limits);
  HswDecoder out;
  // Both operators are tensor products, so their spectral projections come
  // from the factors' eigenbases.
  const auto wp = spectral_decompose(output_average(p, w).matrix(), tol);
  std::vector<const SpectralDecomposition<double>*> factors(static_cast<std::size_t>(n), &wp);
  const auto big = kron_decomposition<double>(factors);
  out.tau = spectral_projection(big, Comparator::Less, std::exp(-n * b), tol);

  std::vector<SpectralDecomposition<double>> states;
  for (int x = 0; x < w.size(); ++x) states.push_back(spectral_decompose(w.state(x), tol));
  std::vector<Matrix> pieces;
  for (const auto& s : encoder) {
    std::vector<const SpectralDecomposition<double>*> fs;
    for (int x : s) fs.push_back(&states[static_cast<std::size_t>(x)]);
    const auto sd = kron_decomposition<double>(fs);
    out.nu.push_back(spectral_projection(sd, Comparator::Greater, std::exp(-n * c), tol));
    pieces.push_back(hermitian_part(out.tau * out.nu.back() * out.tau));
  }
  out.decoder = srm_decoder(pieces, tol);
  return out;
}

HswCodeBounds hsw_code_bounds(std::span<const Sequence> encoder, const HswDecoder& dec, const CqChannel& w,
                              const Limits& limits) {
  const std::size_t n_codes = encoder.size();
  HswCodeBounds r;
  std::vector<Matrix> sandwiches;
  for (const auto& nu : dec.nu) sandwiches.push_back(dec.tau * nu * dec.tau);
  for (std::size_t i = 0; i < n_codes; ++i) {
    const Matrix x = sequence_state(w, encoder[i], limits);
    const double off_tau = 1.0 - trace_product(x, dec.tau);
    const double off_nu = 1.0 - trace_product(x, dec.nu[i]);
    double cross = 0.0;
    for (std::size_t j = 0; j < n_codes; ++j)
      if (j != i) cross += trace_product(x, sandwiches[j]);
    r.error += 1.0 - trace_product(x, dec.decoder[i]);
    r.rhs_311 += 3.0 * off_tau + off_nu + cross;
    r.rhs_424 += 4.0 * off_tau + 2.0 * off_nu + 4.0 * cross;
  }
  const double nn = static_cast<double>(n_codes);
  r.error /= nn;
  r.rhs_311 /= nn;
  r.rhs_424 /= nn;
  return r;
}

double hsw_random_bound(const FiniteDistribution& p, const CqChannel& w, int n, double b, double c,
                        int codebook_size, const Limits& limits) {
  TailOptions opts;
  opts.limits = limits;
  return 3.0 * entropy_tail(p, w, n, b, TailKind::EntropyOutput, opts) +
         entropy_tail(p, w, n, c, TailKind::EntropyConditional, opts) + std::exp(-n * (b - c)) * codebook_size;
}

double budget_mass(const FiniteDistribution& p, const CqChannel& w, const CostSpec& cost, int n,
                   const Limits& limits) {
  const BudgetPredicate accept(w, cost, n);
  const Vector weights = p.aligned(w);
  if (accept.exact()) {
    std::map<std::int64_t, double> dist{{0, 1.0}};
    for (int step = 0; step < n; ++step) {
      std::map<std::int64_t, double> next;
      for (const auto& [sum, prob] : dist)
        for (int x = 0; x < w.size(); ++x)
          if (weights(x) > 0.0) next[sum + accept.scaled_costs()[static_cast<std::size_t>(x)]] += prob * weights(x);
      dist = std::move(next);
    }
    double mass = 0.0;
    for (const auto& [sum, prob] : dist)
      if (sum <= accept.scaled_budget()) mass += prob;
    return mass;
  }
  double mass = 0.0;
  for (const auto& tc : enumerate_type_classes(p, w, n, limits))
    if (accept(tc.representative)) mass += tc.probability();
  return mass;
}

RandomCodingReport random_coding_experiment(const CqChannel& w, const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw InputError("random_coding_experiment: trials must be >= 1");
  if (cfg.codebook_size < 1) throw InputError("random_coding_experiment: codebook size must be >= 1");
  if (cfg.cost && cfg.decoder != DecoderKind::Lemma3)
    throw InputError("random_coding_experiment: budget-conditioned sampling supports the lemma3 decoder only");
  const Eigen::Index dim = tensor_dim(w.dim(), cfg.n, cfg.limits);
  check_codebook_memory(dim, cfg.codebook_size, cfg.limits);

  RandomCodingReport rep;
  rep.trials = cfg.trials;
  rep.seed = cfg.seed;
  const Vector weights = cfg.p.aligned(w);

  std::optional<BudgetPredicate> accept;
  if (cfg.cost) {
    accept.emplace(w, *cfg.cost, cfg.n);
    rep.budget_mass_exact = budget_mass(cfg.p, w, *cfg.cost, cfg.n, cfg.limits);
    if (rep.budget_mass_exact <= 0.0) throw InputError("random_coding_experiment: budget admits no sequence");
  }

  const Matrix reference = kron_power(output_average(cfg.p, w).matrix(), cfg.n);
  const double scale = std::exp(cfg.n * cfg.a);
  ProjectionCache pieces([&](const Sequence& s) {
    const Matrix x = sequence_state(w, s, cfg.limits);
    return spectral_projection(Matrix(x - scale * reference), Comparator::Greater, 0.0, cfg.tol);
  });

  rep.errors.assign(static_cast<std::size_t>(cfg.trials), 0.0);
  std::vector<std::uint64_t> attempts(static_cast<std::size_t>(cfg.trials), 0);
  std::vector<char> within(static_cast<std::size_t>(cfg.trials), 1);
  std::vector<Code> codes(cfg.keep_codes ? static_cast<std::size_t>(cfg.trials) : 0);

  parallel_for(static_cast<std::size_t>(cfg.trials), cfg.threads, [&](std::size_t t) {
    CounterRng rng(cfg.seed, t);
    Code code;
    for (int i = 0; i < cfg.codebook_size; ++i) {
      Sequence s;
      while (true) {
        s = sample_sequence(weights, cfg.n, rng);
        ++attempts[t];
        if (!accept || (*accept)(s)) break;
        if (attempts[t] > 100000000ULL) throw ResourceError("rejection sampling did not terminate");
      }
      if (accept && !(*accept)(s)) within[t] = 0;
      code.encoder.push_back(std::move(s));
    }
    if (cfg.decoder == DecoderKind::Lemma3) {
      std::vector<Matrix> pi;
      for (const auto& s : code.encoder) pi.push_back(pieces.get(s));
      code.decoder = srm_decoder(pi, cfg.tol);
    } else {
      code.decoder = hsw_decoder(code.encoder, cfg.p, w, cfg.n, cfg.b, cfg.c, cfg.limits, cfg.tol).decoder;
    }
    rep.errors[t] = average_error(code, w, cfg.limits);
    if (cfg.keep_codes) codes[t] = std::move(code);
  });

  rep.mean = mean_of(rep.errors);
  rep.min = *std::min_element(rep.errors.begin(), rep.errors.end());
  rep.standard_error = standard_error_of(rep.errors, rep.mean);
  for (std::size_t t = 0; t < attempts.size(); ++t) {
    rep.attempts += attempts[t];
    if (!within[t]) rep.all_codewords_within_budget = false;
  }
  rep.accepted = static_cast<std::uint64_t>(cfg.trials) * static_cast<std::uint64_t>(cfg.codebook_size);
  if (cfg.cost) {
    rep.budget_mass_estimate = static_cast<double>(rep.accepted) / static_cast<double>(rep.attempts);
    rep.budget_mass_stderr = std::sqrt(rep.budget_mass_estimate * (1.0 - rep.budget_mass_estimate) /
                                       static_cast<double>(rep.attempts));
  }

  TailOptions topts;
  topts.limits = cfg.limits;
  topts.tol = cfg.tol;
  const double tail = info_tail(cfg.p, w, cfg.n, cfg.a, Comparator::LessEqual, topts);
  rep.direct = direct_bound_rhs(tail, cfg.n, cfg.a, cfg.codebook_size, cfg.bound_c);
  if (cfg.decoder == DecoderKind::Lemma3) {
    rep.bound_rhs = cfg.bound_c ? rep.direct.fixed_c : rep.direct.optimal;
    // Conditioning on the budget inflates both terms by at most 1/K_n.
    if (cfg.cost) rep.bound_rhs /= rep.budget_mass_exact;
  } else {
    rep.hsw_bound = hsw_random_bound(cfg.p, w, cfg.n, cfg.b, cfg.c, cfg.codebook_size, cfg.limits);
    rep.bound_rhs = rep.hsw_bound;
  }
  rep.witness_below_bound = rep.min <= rep.bound_rhs + 1e-9;
  rep.mean_within_bound = rep.mean <= rep.bound_rhs + 3.0 * rep.standard_error + 1e-12;
  rep.codes = std::move(codes);
  return rep;
}

ConverseReport converse_check(const Code& code, const CqChannel& w, const Matrix& sigma, double a,
                              const Limits& limits, const Tolerances& tol) {
  ConverseReport r;
  r.error = average_error(code, w, limits);
  const double scale = std::exp(a * code.blocklength());
  std::map<Sequence, double> seen;
  double total = 0.0;
  for (const auto& s : code.encoder) {
    auto it = seen.find(s);
    if (it == seen.end()) {
      const Matrix x = sequence_state(w, s, limits);
      if (x.rows() != sigma.rows()) throw InputError("converse_check: sigma dimension mismatch");
      const Matrix proj = spectral_projection(Matrix(x - scale * sigma), Comparator::LessEqual, 0.0, tol);
      it = seen.emplace(s, trace_product(x, proj)).first;
    }
    total += it->second;
  }
  const double nn = static_cast<double>(code.size());
  r.rhs = total / nn - scale / nn;
  r.slack = r.error - r.rhs;
  r.holds = r.slack >= -1e-9;
  return r;
}

TestFamily natural_test_family(const FiniteDistribution& p, const CqChannel& w, int n, double a,
                               const Limits& limits, const Tolerances& tol) {
  tensor_dim(w.dim(), n, limits);
  auto reference = std::make_shared<Matrix>(kron_power(output_average(p, w).matrix(), n));
  const double scale = std::exp(n * a);
  auto cache = std::make_shared<ProjectionCache>([=, &w](const Sequence& s) {
    const Matrix x = sequence_state(w, s, limits);
    return spectral_projection(Matrix(x - scale * *reference), Comparator::Greater, 0.0, tol);
  });
  return [cache](const Sequence& s) { return cache->get(s); };
}

SteinReport stein_code_bound(const FiniteDistribution& p, const CqChannel& w, int n, const TestFamily& tests,
                             int codebook_size, int trials, std::uint64_t seed, const Limits& limits,
                             const Tolerances& tol) {
  if (trials < 1 || codebook_size < 1) throw InputError("stein_code_bound: trials and codebook size must be >= 1");
  SteinReport r;
  const Matrix reference = kron_power(output_average(p, w).matrix(), n);
  double hit = 0.0;
  for_each_sequence(
      p, w, n,
      [&](const Sequence& s, double prob) {
        const Matrix t = tests(s);
        hit += prob * trace_product(sequence_state(w, s, limits), t);
        r.false_alarm += prob * trace_product(reference, t);
      },
      limits);
  r.miss = 1.0 - hit;
  r.rhs = 2.0 * r.miss + 4.0 * codebook_size * r.false_alarm;

  const Vector weights = p.aligned(w);
  r.trials = trials;
  for (int t = 0; t < trials; ++t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    Code code;
    std::vector<Matrix> pieces;
    for (int i = 0; i < codebook_size; ++i) {
      code.encoder.push_back(sample_sequence(weights, n, rng));
      pieces.push_back(tests(code.encoder.back()));
    }
    code.decoder = srm_decoder(pieces, tol);
    r.errors.push_back(average_error(code, w, limits));
  }
  r.mean = mean_of(r.errors);
  r.standard_error = standard_error_of(r.errors, r.mean);
  r.holds = r.mean <= r.rhs + 3.0 * r.standard_error + 1e-12;
  return r;
}

}  // namespace cqlab
