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

// Randomized and adversarial checks of the operator inequalities, with
// counterexample shrinking and witness files.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cqlab/channel.hpp"
#include "cqlab/io.hpp"
#include "cqlab/rng.hpp"

namespace cqlab {

enum class InequalityId { KeyInequality, NeymanPearson, OgawaNagaoka, TauNu, CrossTerm };

std::string to_string(InequalityId id);
InequalityId inequality_from_string(const std::string& name);
const std::vector<InequalityId>& all_inequalities();
// Margin below which an instance counts as a failure.
double failure_threshold(InequalityId id);

// I − (S+T)^{-1/2} S (S+T)^{-1/2} <= (1+c)(I−S) + (2+c+1/c) T.
// Returns the minimum eigenvalue of RHS − LHS. fault != 1 multiplies both
// right-hand coefficients (negative control only).
double check_key_inequality(const Matrix& s, const Matrix& t, double c, double fault = 1.0,
                            const Tolerances& tol = {});

// Tr[A{A>0}] − Tr[AT].
double check_neyman_pearson(const Matrix& a, const Matrix& t, const Tolerances& tol = {});

// c^{-s} Tr[ρ^{1+s} σ^{-s}] − Tr[ρ{ρ − cσ > 0}]; +inf when supp ρ ⊄ supp σ and s > 0.
double check_ogawa_nagaoka(const Matrix& rho, const Matrix& sigma, double c, double s, const Tolerances& tol = {});

// Tr[ρτντ] − Tr[ρν] + 2 Tr[ρ(I−τ)], for projections ν, τ with [ρ, ν] = 0.
double check_tau_nu(const Matrix& rho, const Matrix& nu, const Matrix& tau, const Tolerances& tol = {});

// e^{-n(b−c)} − Tr[W_P^{⊗n} τ ν τ], τ = {W_P^{⊗n} < e^{-nb}}, ν = {W_{x^n} > e^{-nc}}.
double check_cross_term(const FiniteDistribution& p, const CqChannel& w, int n, double b, double c,
                        const Sequence& x, const Limits& limits = {}, const Tolerances& tol = {});

enum class OperandKind { Density, Contraction, Psd, Projection, Hermitian, Unitary };

std::string to_string(OperandKind kind);
OperandKind operand_kind_from_string(const std::string& name);

// Single draws. Densities are normalized Gram matrices of complex Gaussian
// matrices (rank = dim unless given); contractions and projections use Haar
// eigenbases.
Matrix sample_density(Eigen::Index dim, CounterRng& rng, std::optional<Eigen::Index> rank = std::nullopt);
Matrix sample_unitary(Eigen::Index dim, CounterRng& rng);
Matrix sample_contraction(Eigen::Index dim, CounterRng& rng);
Matrix sample_psd(Eigen::Index dim, CounterRng& rng);
Matrix sample_projection(Eigen::Index dim, CounterRng& rng, std::optional<Eigen::Index> rank = std::nullopt);
Matrix sample_hermitian(Eigen::Index dim, CounterRng& rng);
double sample_log_uniform(double lo, double hi, CounterRng& rng);
Matrix sample_operand(OperandKind kind, Eigen::Index dim, CounterRng& rng);

// Deterministic stream of operands: element k is drawn from stream (seed, k).
class InstanceStream {
 public:
  InstanceStream(OperandKind kind, Eigen::Index dim, std::size_t count, std::uint64_t seed);

  std::size_t size() const { return count_; }
  Matrix at(std::size_t index) const;
  std::optional<Matrix> next();

 private:
  OperandKind kind_;
  Eigen::Index dim_;
  std::size_t count_;
  std::uint64_t seed_;
  std::size_t cursor_ = 0;
};

struct Operand {
  std::string name;
  OperandKind kind;
  Matrix value;
  // Held fixed by the shrinker (ν is tied to ρ's eigenbasis).
  bool frozen = false;
};

struct InequalityInstance {
  InequalityId id = InequalityId::KeyInequality;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  bool adversarial = false;
  std::vector<Operand> operands;
  std::vector<std::pair<std::string, double>> scalars;
  // Cross-term instances: the codeword x^n.
  Sequence sequence;
  double margin = 0.0;

  const Matrix& op(const std::string& name) const;
  double scalar(const std::string& name) const;
};

// Instance `index` of the random (or adversarial) family for `id`.
InequalityInstance make_instance(InequalityId id, Eigen::Index dim, std::uint64_t seed, std::uint64_t index,
                                 bool adversarial);

// Recomputes the margin. fault applies to the key inequality only.
double evaluate(const InequalityInstance& inst, double fault = 1.0, const Tolerances& tol = {});

// Moves operands toward zero or identity and lowers the dimension while the
// instance still fails.
InequalityInstance shrink(const InequalityInstance& failing, double fault = 1.0, const Tolerances& tol = {},
                          int max_steps = 200);

Json instance_to_json(const InequalityInstance& inst);
InequalityInstance instance_from_json(const Json& j);
std::filesystem::path write_witness(const InequalityInstance& inst, const std::filesystem::path& dir);
InequalityInstance read_witness(const std::filesystem::path& path);

struct SuiteConfig {
  std::vector<InequalityId> ids = all_inequalities();
  std::size_t count = 10000;
  std::size_t adversarial_count = 100;
  std::vector<Eigen::Index> dims = {2, 3, 4, 5, 6, 7, 8};
  std::uint64_t seed = 0;
  unsigned threads = 1;
  // Negative control: scales the key inequality's right-hand side.
  double fault = 1.0;
  std::optional<std::filesystem::path> witness_dir;
  std::size_t max_witnesses = 5;
};

struct InequalityStats {
  InequalityId id = InequalityId::KeyInequality;
  std::size_t instances = 0;
  std::size_t adversarial = 0;
  double min_margin = 0.0;
  std::uint64_t argmin_index = 0;
  bool argmin_adversarial = false;
  std::size_t failures = 0;
  std::vector<std::filesystem::path> witnesses;

  bool passed() const { return failures == 0; }
};

struct SuiteReport {
  std::vector<InequalityStats> stats;
  bool passed() const;
};

SuiteReport run_suite(const SuiteConfig& config);

}  // namespace cqlab
