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

// Codes for classical-quantum channels: square-root-measurement decoders,
// exact average error, random-coding experiments against the analytic
// achievability bounds, and the converse check that every code must pass.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cqlab/channel.hpp"

namespace cqlab {

struct Code {
  std::vector<Sequence> encoder;
  std::vector<Matrix> decoder;

  int size() const { return static_cast<int>(encoder.size()); }
  int blocklength() const { return encoder.empty() ? 0 : static_cast<int>(encoder.front().size()); }
  // Each Y_i PSD and sum_i Y_i <= I, both to 1e-9. Throws InputError.
  void validate(const Tolerances& tol = {}) const;
};

// (1/N) sum_i (1 − Tr[W_{φ(i)} Y_i]).
double average_error(const Code& code, const CqChannel& w, const Limits& limits = {});

// Y_i = S^{-1/2} π_i S^{-1/2}, S = sum_j π_j (generalized inverse root).
std::vector<Matrix> srm_decoder(std::span<const Matrix> pieces, const Tolerances& tol = {});

// π_i = {W_{φ(i)} − e^{na} W_P^{⊗n} > 0}.
std::vector<Matrix> lemma3_pieces(std::span<const Sequence> encoder, const FiniteDistribution& p,
                                  const CqChannel& w, int n, double a, const Limits& limits = {},
                                  const Tolerances& tol = {});

// (1/N) sum_i Tr[W_{φ(i)} ((1+c)(I − π_i) + (2+c+1/c) sum_{j≠i} π_j)], the
// codeword-wise upper bound on the error of the SRM code built from π.
double lemma3_chain_rhs(std::span<const Sequence> encoder, std::span<const Matrix> pieces, const CqChannel& w,
                        double c, const Limits& limits = {});

struct DirectBound {
  // A = sum_x P^n(x) Tr[W_x {W_x − e^{na} W_P^{⊗n} <= 0}], B = e^{-na} N.
  double tail = 0.0;
  double collision = 0.0;
  double c = 1.0;
  // (1+c) A + (2+c+1/c) B at the requested c.
  double fixed_c = 0.0;
  // A + 2B + 2 sqrt(B(A+B)), attained at c = sqrt(B/(A+B)).
  double optimal = 0.0;
  double optimal_c = 1.0;

  bool vacuous() const { return optimal > 1.0; }
  double reported() const { return optimal > 1.0 ? 1.0 : optimal; }
};

// c = nullopt evaluates the fixed-c bound at the optimal c.
DirectBound direct_bound_rhs(double tail, int n, double a, int codebook_size, std::optional<double> c = std::nullopt);

// τ = {W_P^{⊗n} < e^{-nb}}, ν_i = {W_{φ(i)} > e^{-nc}}, decoder = SRM of τ ν_i τ.
struct HswDecoder {
  Matrix tau;
  std::vector<Matrix> nu;
  std::vector<Matrix> decoder;
};

HswDecoder hsw_decoder(std::span<const Sequence> encoder, const FiniteDistribution& p, const CqChannel& w, int n,
                       double b, double c, const Limits& limits = {}, const Tolerances& tol = {});

// Exact error of an HSW code next to the codeword-wise bounds with
// coefficients (3,1,1) and (4,2,4) on
// Tr[W_i(I−τ)], Tr[W_i(I−ν_i)], sum_{j≠i} Tr[W_i τ ν_j τ].
struct HswCodeBounds {
  double error = 0.0;
  double rhs_311 = 0.0;
  double rhs_424 = 0.0;
};
HswCodeBounds hsw_code_bounds(std::span<const Sequence> encoder, const HswDecoder& dec, const CqChannel& w,
                              const Limits& limits = {});

// 3 Tr[W_P^{⊗n}{W_P^{⊗n} >= e^{-nb}}] + sum P^n Tr[W_x{W_x <= e^{-nc}}] + e^{-n(b−c)} N.
double hsw_random_bound(const FiniteDistribution& p, const CqChannel& w, int n, double b, double c,
                        int codebook_size, const Limits& limits = {});

// K_n = P^n{x : sum c(x_i) <= nγ}; dynamic programming over integer cost
// sums when the costs are rational, type-class enumeration otherwise.
double budget_mass(const FiniteDistribution& p, const CqChannel& w, const CostSpec& cost, int n,
                   const Limits& limits = {});

enum class DecoderKind { Lemma3, Hsw };

struct ExperimentConfig {
  FiniteDistribution p;
  int n = 1;
  int codebook_size = 2;
  double a = 0.0;
  int trials = 100;
  std::uint64_t seed = 0;
  DecoderKind decoder = DecoderKind::Lemma3;
  // HSW thresholds.
  double b = 0.0;
  double c = 0.0;
  // c for the lemma3 bound; nullopt uses the optimal c.
  std::optional<double> bound_c;
  // Codewords drawn from P^n conditioned on the budget (rejection sampling).
  std::optional<CostSpec> cost;
  unsigned threads = 1;
  bool keep_codes = false;
  Limits limits{};
  Tolerances tol{};
};

struct RandomCodingReport {
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> errors;
  double mean = 0.0;
  double min = 0.0;
  double standard_error = 0.0;
  // Analytic bound on the expected error for this configuration.
  double bound_rhs = 0.0;
  DirectBound direct;
  double hsw_bound = 0.0;
  // min over trials <= bound_rhs + 1e-9 (meaningful when bound_rhs <= 1).
  bool witness_below_bound = false;
  // mean <= bound_rhs + 3 standard errors.
  bool mean_within_bound = false;

  // Budget-conditioned sampling.
  double budget_mass_exact = 1.0;
  double budget_mass_estimate = 1.0;
  double budget_mass_stderr = 0.0;
  std::uint64_t attempts = 0;
  std::uint64_t accepted = 0;
  bool all_codewords_within_budget = true;

  std::vector<Code> codes;
};

RandomCodingReport random_coding_experiment(const CqChannel& w, const ExperimentConfig& config);

struct ConverseReport {
  double error = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool holds = false;
};

// P_e >= sum_x P^n(x) Tr[W_x {W_x − e^{na} σ <= 0}] − e^{na}/N with P^n the
// empirical distribution of the codewords; holds for every code.
ConverseReport converse_check(const Code& code, const CqChannel& w, const Matrix& sigma, double a,
                              const Limits& limits = {}, const Tolerances& tol = {});

using TestFamily = std::function<Matrix(const Sequence&)>;

// T_x = {W_x − e^{na} W_P^{⊗n} > 0}.
TestFamily natural_test_family(const FiniteDistribution& p, const CqChannel& w, int n, double a,
                               const Limits& limits = {}, const Tolerances& tol = {});

struct SteinReport {
  // 2(1 − Tr[R^{⊗n} T]) + 4 N Tr[S^{⊗n} T]
  double rhs = 0.0;
  double miss = 0.0;
  double false_alarm = 0.0;
  int trials = 0;
  std::vector<double> errors;
  double mean = 0.0;
  double standard_error = 0.0;
  bool holds = false;
};

// Random coding with the SRM decoder built from T_{φ(i)}, against the bound
// obtained from the operator inequality at c = 1.
SteinReport stein_code_bound(const FiniteDistribution& p, const CqChannel& w, int n, const TestFamily& tests,
                             int codebook_size, int trials, std::uint64_t seed, const Limits& limits = {},
                             const Tolerances& tol = {});

}  // namespace cqlab
