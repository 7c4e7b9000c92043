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

// Relative entropy, Holevo quantity and the capacity optimizations, with
// the error-exponent functions psi(s) and phi_bar(a).
//
// Entropic values are in nats. A relative entropy with ρ not supported in
// σ is +infinity (std::numeric_limits<double>::infinity()), which propagates
// through max/min and sums with positive weights.

#pragma once

#include <optional>
#include <vector>

#include "cqlab/channel.hpp"

namespace cqlab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

double von_neumann_entropy(const Matrix& rho, const Tolerances& tol = {});

// D(ρ‖σ) = Tr ρ(log ρ − log σ), evaluated on the supports.
double relative_entropy(const Matrix& rho, const Matrix& sigma, const Tolerances& tol = {});

// log Tr[ρ^{1+s} σ^{-s}] with σ^{-s} on the support of σ. Zero at s = 0;
// +infinity for s > 0 when supp ρ is not inside supp σ.
double log_trace_power_ratio(const Matrix& rho, const Matrix& sigma, double s, const Tolerances& tol = {});

// I(P,W) = sum_x P(x) D(W_x‖W_P).
double holevo_information(const FiniteDistribution& p, const CqChannel& w, const Tolerances& tol = {});
// H(W_P) − sum_x P(x) H(W_x); agrees with holevo_information.
double holevo_information_entropy_form(const FiniteDistribution& p, const CqChannel& w,
                                       const Tolerances& tol = {});

// J(P,σ,W) = sum_x P(x) D(W_x‖σ).
double j_divergence(const FiniteDistribution& p, const Matrix& sigma, const CqChannel& w,
                    const Tolerances& tol = {});

// sup_x D(W_x‖σ).
double max_divergence(const CqChannel& w, const Matrix& sigma, const Tolerances& tol = {});

struct SolverOptions {
  double tol = 1e-7;
  int max_iter = 100000;
  Tolerances tolerances{};
};

struct CapacityResult {
  double value = 0.0;
  FiniteDistribution optimizer;
  Matrix center;
  // Certified upper bound minus value.
  double duality_gap = kInfinity;
  int iterations = 0;
  bool converged = false;

  bool constrained = false;
  double expected_cost = 0.0;
  double multiplier = 0.0;
  // multiplier * (budget − expected_cost)
  double slackness = 0.0;
  bool constraint_active = false;
};

// sup_P I(P,W) by the multiplicative update P(x) ← P(x) exp D(W_x‖W_P) from
// the uniform distribution, stopped once max_x D(W_x‖W_P) − I(P,W) <= tol.
// On non-convergence the best iterate is returned with converged = false.
CapacityResult holevo_capacity(const CqChannel& w, const SolverOptions& opts = {});

struct MinMaxCenter {
  double radius = 0.0;
  Matrix center;
  int argmax_input = 0;
};

// min_σ sup_x D(W_x‖σ), attained at σ* = W_{P*}.
MinMaxCenter minmax_center(const CqChannel& w, const SolverOptions& opts = {});

// sup{ I(P,W) : E_P[c] <= γ } via Lagrangian bisection on the multiplier.
// Throws InputError when no input satisfies c(x) <= γ.
CapacityResult cost_capacity(const CqChannel& w, const CostSpec& cost, const SolverOptions& opts = {});

// Maximizer of a linear functional sum_x P(x) g(x) over distributions with
// support size at most two satisfying the budget.
struct PairOptimum {
  double value = -kInfinity;
  int first = 0;
  int second = 0;
  // weight on `first`
  double lambda = 1.0;
};

// Without a cost this is max_x g(x). Throws InputError when infeasible.
PairOptimum sup_over_budget(const Vector& g, const std::optional<Vector>& costs, double budget);

// psi(s) = sup_{P: E_P c <= γ} sum_x P(x) log Tr[W_x^{1+s} σ^{-s}].
PairOptimum psi_exponent(const CqChannel& w, const Matrix& sigma, const std::optional<CostSpec>& cost, double s,
                         const Tolerances& tol = {});

// sup_{P: E_P c <= γ} J(P,σ,W), the s -> 0 slope of psi.
PairOptimum sup_j_divergence(const CqChannel& w, const Matrix& sigma, const std::optional<CostSpec>& cost,
                             const Tolerances& tol = {});

// t ↦ −a t − log sum_i λ_i Tr[ρ_i σ^{t/2} ρ_i^{-t} σ^{t/2}], σ = W_P.
class PhiBarObjective {
 public:
  PhiBarObjective(const FiniteDistribution& p, const CqChannel& w, const Tolerances& tol = {});

  // log sum_i λ_i Tr[ρ_i σ^{t/2} ρ_i^{-t} σ^{t/2}]; exactly 0 at t = 0.
  double log_trace(double t) const;
  double operator()(double a, double t) const { return -a * t - log_trace(t); }
  // k * dim H, the size of the block pair.
  int dimension() const { return dimension_; }

 private:
  std::vector<double> weights_;
  std::vector<SpectralDecomposition<double>> states_;
  SpectralDecomposition<double> sigma_;
  Tolerances tol_;
  int dimension_ = 0;
};

struct PhiBar {
  double value = 0.0;
  double t_star = 0.0;
  int dimension = 0;
};

// max over t in [0,1], by a 101-point scan refined with golden-section search.
PhiBar phi_bar(double a, const FiniteDistribution& p, const CqChannel& w, const Tolerances& tol = {});

struct ExponentReport {
  enum class Kind { PhiBar, Psi };
  Kind kind = Kind::PhiBar;
  // a values for PhiBar, s values for Psi.
  std::vector<double> grid;
  std::vector<double> values;
  // t* for PhiBar; lambda of the optimal pair for Psi.
  std::vector<double> argmax;
  int dimension = 0;
};

ExponentReport phi_bar_curve(const std::vector<double>& a_grid, const FiniteDistribution& p, const CqChannel& w,
                             const Tolerances& tol = {});
ExponentReport psi_curve(const std::vector<double>& s_grid, const CqChannel& w, const Matrix& sigma,
                         const std::optional<CostSpec>& cost, const Tolerances& tol = {});

// min(1, 6 (n+1)^d e^{-n φ}).
double sp_code_bound(int n, int d, double phi);

}  // namespace cqlab
