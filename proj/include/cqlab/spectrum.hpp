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

// Finite-blocklength information-spectrum tails.
//
// Every function here evaluates a tail probability at one blocklength n and
// one threshold; none of them returns a limit. Sweeps collect tails on a
// grid and summarize them by a bracket that is explicitly a finite-n
// statement.

#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "cqlab/capacity.hpp"
#include "cqlab/channel.hpp"

namespace cqlab {

enum class TailKind {
  // sum_x P^n(x) Tr[W_x {W_x − e^{na} W_P^{⊗n} > 0}]
  Info,
  // Tr[ρ^{⊗n} {ρ^{⊗n} − e^{na} σ^{⊗n} > 0}]
  Divergence,
  // Tr[W_P^{⊗n} {W_P^{⊗n} >= e^{-nb}}]
  EntropyOutput,
  // sum_x P^n(x) Tr[W_x {W_x <= e^{-nc}}]
  EntropyConditional,
};

std::string to_string(TailKind kind);
TailKind tail_kind_from_string(const std::string& name);
// EntropyOutput tails grow with the threshold; all others shrink.
bool tail_increasing(TailKind kind);

struct TailOptions {
  // Evaluate one representative per type class (lossless by permutation
  // symmetry); false enumerates every sequence with full tensor matrices.
  bool use_type_classes = true;
  Limits limits{};
  Tolerances tol{};
};

double info_tail(const FiniteDistribution& p, const CqChannel& w, int n, double a,
                 Comparator cmp = Comparator::Greater, const TailOptions& opts = {});

double divergence_tail(const Matrix& rho, const Matrix& sigma, int n, double a, const TailOptions& opts = {});

// which is EntropyOutput (threshold b) or EntropyConditional (threshold c).
double entropy_tail(const FiniteDistribution& p, const CqChannel& w, int n, double threshold, TailKind which,
                    const TailOptions& opts = {});

// Per-class quantities of the info tail at threshold a, for checks that need
// more than the weighted sum.
struct InfoTailTerm {
  Sequence representative;
  // P^n mass of the whole class.
  double mass = 0.0;
  // Tr[W_x π] and Tr[W_P^{⊗n} π], π = {W_x − e^{na} W_P^{⊗n} > 0}.
  double alpha = 0.0;
  double beta = 0.0;
};
std::vector<InfoTailTerm> info_tail_terms(const FiniteDistribution& p, const CqChannel& w, int n, double a,
                                          const TailOptions& opts = {});

struct TailBound {
  double bound = 1.0;
  double exact = 0.0;
};

// exp[−n(a s − log Tr[ρ^{1+s} σ^{-s}])] next to the exact divergence tail.
TailBound ogawa_nagaoka_tail_bound(const Matrix& rho, const Matrix& sigma, int n, double a, double s,
                                   const TailOptions& opts = {});

struct SpectrumPoint {
  TailKind kind = TailKind::Info;
  int n = 0;
  double threshold = 0.0;
  double tail = 0.0;
};

// Summary of the tail at the largest n of a sweep. For shrinking tails
// lower = largest threshold with tail > 1 − ε and upper = smallest threshold
// with tail < ε; growing tails swap the roles.
struct Bracket {
  int n = 0;
  double epsilon = 0.05;
  bool has_lower = false;
  bool has_upper = false;
  double lower = 0.0;
  double upper = 0.0;
  static constexpr const char* kLabel = "finite-n bracket - not the limit";
};

struct SweepCurve {
  TailKind kind = TailKind::Info;
  std::vector<int> ns;
  std::vector<double> thresholds;
  // Row-major over (n, threshold).
  std::vector<SpectrumPoint> points;
  std::map<std::string, std::string> metadata;
  Bracket bracket;

  double tail(std::size_t n_index, std::size_t threshold_index) const {
    return points.at(n_index * thresholds.size() + threshold_index).tail;
  }
};

using TailFunction = std::function<double(int n, double threshold)>;

TailFunction info_tail_function(const FiniteDistribution& p, const CqChannel& w, const TailOptions& opts = {});
TailFunction divergence_tail_function(const Matrix& rho, const Matrix& sigma, const TailOptions& opts = {});
TailFunction entropy_tail_function(const FiniteDistribution& p, const CqChannel& w, TailKind which,
                                   const TailOptions& opts = {});

// Thresholds are sorted ascending before evaluation.
SweepCurve sweep(TailKind kind, const TailFunction& tail, std::vector<int> ns, std::vector<double> thresholds,
                 double epsilon = 0.05);

Bracket bracket_at(const SweepCurve& curve, std::size_t n_index, double epsilon);

// Header kind,n,threshold,tail; 17 significant digits.
void write_sweep_csv(std::ostream& out, const SweepCurve& curve);

}  // namespace cqlab
