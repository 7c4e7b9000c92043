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

#include <gtest/gtest.h>

#include <sstream>

#include "cqlab/inequalities.hpp"
#include "cqlab/presets.hpp"
#include "cqlab/spectrum.hpp"
#include "oracles.hpp"

namespace cqlab {
namespace {

Matrix diag(std::initializer_list<double> v) {
  Vector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) d(k++) = x;
  return d.cast<Complex>().asDiagonal();
}

CqChannel channel_of(std::vector<Matrix> states) {
  std::vector<CqChannel::Input> in;
  for (std::size_t k = 0; k < states.size(); ++k) in.push_back({std::to_string(k), DensityMatrix(states[k])});
  return CqChannel(std::move(in));
}

CqChannel random_channel(int k, Eigen::Index d, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  std::vector<Matrix> states;
  for (int x = 0; x < k; ++x) states.push_back(sample_density(d, rng));
  return channel_of(std::move(states));
}

TailOptions naive() {
  TailOptions o;
  o.use_type_classes = false;
  return o;
}

TEST(InfoTail, VeryNegativeThresholdGivesOne) {
  const auto w = random_channel(3, 2, 1);
  const auto p = FiniteDistribution::uniform(w.labels());
  EXPECT_NEAR(info_tail(p, w, 1, -50.0), 1.0, 1e-12);
}

TEST(InfoTail, IdenticalStatesPositiveThresholdGivesZero) {
  const auto w = identical_states().file.channel;
  const auto p = FiniteDistribution::uniform(w.labels());
  for (int n = 1; n <= 4; ++n) EXPECT_NEAR(info_tail(p, w, n, 0.1), 0.0, 1e-15);
}

TEST(InfoTail, CommutingMatchesClassicalEnumeration) {
  const std::vector<oracle::Vec> q = {{0.85, 0.15}, {0.25, 0.75}};
  const oracle::Vec pv = {0.4, 0.6};
  const auto w = channel_of({diag({0.85, 0.15}), diag({0.25, 0.75})});
  const FiniteDistribution p({{"0", 0.4}, {"1", 0.6}});
  const double info = holevo_information(p, w);
  for (double a : {info, info - 0.1, info + 0.05, 0.0}) {
    const double ref = oracle::classical_info_tail(pv, q, 3, a);
    EXPECT_NEAR(info_tail(p, w, 3, a), ref, 1e-12) << "a " << a;
    EXPECT_NEAR(info_tail(p, w, 3, a, Comparator::Greater, naive()), ref, 1e-12);
  }
}

TEST(InfoTail, TypeClassPathMatchesNaive) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto w = random_channel(2, 2, 10 + seed);
    const FiniteDistribution p({{"0", 0.3}, {"1", 0.7}});
    for (int n = 1; n <= 4; ++n)
      for (double a : {-0.2, 0.0, 0.1, 0.3})
        EXPECT_NEAR(info_tail(p, w, n, a), info_tail(p, w, n, a, Comparator::Greater, naive()), 1e-10);
  }
}

TEST(InfoTail, BridgeToBlockPairDivergence) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto w = random_channel(2, 2, 20 + seed);
    const FiniteDistribution p({{"0", 0.45}, {"1", 0.55}});
    const auto [r, s] = block_pair(p, w, output_average(p, w).matrix());
    for (int n = 1; n <= 3; ++n)
      for (double a : {0.0, 0.15, 0.4}) EXPECT_NEAR(info_tail(p, w, n, a), divergence_tail(r, s, n, a), 1e-10);
  }
}

TEST(InfoTail, MonotoneAndBounded) {
  const auto w = random_channel(3, 2, 2);
  const auto p = FiniteDistribution::uniform(w.labels());
  for (int n = 1; n <= 4; ++n) {
    double prev = 1.0 + 1e-9;
    for (double a = -0.5; a <= 1.0; a += 0.05) {
      const double t = info_tail(p, w, n, a);
      EXPECT_GE(t, -1e-12);
      EXPECT_LE(t, prev + 1e-12);
      prev = t;
    }
  }
}

TEST(InfoTail, LemmaFiveRelations) {
  const auto w = random_channel(2, 2, 3);
  const auto p = FiniteDistribution::uniform(w.labels());
  const Matrix wp = output_average(p, w).matrix();
  for (int n = 1; n <= 4; ++n) {
    for (double a : {0.0, 0.1, 0.25, 0.5}) {
      for (const auto& term : info_tail_terms(p, w, n, a)) {
        EXPECT_LE(term.beta, std::exp(-n * a) * term.alpha + 1e-12);
        EXPECT_LE(std::exp(-n * a) * term.alpha, std::exp(-n * a) + 1e-12);
        double d = 0.0;
        for (int x : term.representative) d += relative_entropy(w.state(x), wp);
        EXPECT_GE(d / n, -std::log(2.0) / n + a * term.alpha - 1e-10);
      }
    }
  }
}

TEST(InfoTail, StrongConverseTrend) {
  const auto w = random_channel(2, 2, 4);
  const auto p = FiniteDistribution::uniform(w.labels());
  const double a = max_divergence(w, output_average(p, w).matrix()) + 0.3;
  double prev = 1.0;
  for (int n = 1; n <= 10; ++n) {
    const double t = info_tail(p, w, n, a);
    EXPECT_LE(t, prev + 1e-12) << "n " << n;
    prev = t;
  }
  EXPECT_LT(prev, 0.05);
}

TEST(DivergenceTail, Examples) {
  CounterRng rng(5, 0);
  const Matrix rho = sample_density(2, rng);
  EXPECT_NEAR(divergence_tail(rho, rho, 3, 0.1), 0.0, 1e-15);
  EXPECT_NEAR(divergence_tail(rho, rho, 3, -0.1), 1.0, 1e-12);
  const oracle::Vec r = {0.7, 0.2, 0.1}, s = {0.3, 0.3, 0.4};
  for (double a : {0.0, 0.2, 0.5})
    EXPECT_NEAR(divergence_tail(diag({0.7, 0.2, 0.1}), diag({0.3, 0.3, 0.4}), 4, a),
                oracle::classical_divergence_tail(r, s, 4, a), 1e-12);
}

TEST(DivergenceTail, DimensionBound) {
  CounterRng rng(6, 0);
  const Matrix rho = sample_density(2, rng);
  EXPECT_THROW(divergence_tail(rho, rho, 13, 0.0), ResourceError);
}

TEST(EntropyTail, Examples) {
  const auto pure = channel_of({diag({1, 0})});
  const auto point = FiniteDistribution::point_mass("0");
  for (int n = 1; n <= 5; ++n) EXPECT_NEAR(entropy_tail(point, pure, n, 0.2, TailKind::EntropyOutput), 1.0, 1e-12);
  const auto mixed = orthogonal_pure().file.channel;
  const auto uniform = FiniteDistribution::uniform(mixed.labels());
  for (int n = 1; n <= 5; ++n) {
    EXPECT_NEAR(entropy_tail(uniform, mixed, n, std::log(2.0) - 0.01, TailKind::EntropyOutput), 0.0, 1e-12);
    EXPECT_NEAR(entropy_tail(uniform, mixed, n, std::log(2.0), TailKind::EntropyOutput), 1.0, 1e-12);
  }
}

TEST(EntropyTail, DiagonalMatchesClassical) {
  const auto w = channel_of({diag({0.9, 0.1}), diag({0.2, 0.8})});
  const FiniteDistribution p({{"0", 0.5}, {"1", 0.5}});
  const int n = 3;
  const double b = 0.6, c = 0.5;
  // Output distribution (0.55, 0.45): Pr[prod q(y_i) >= e^{-nb}].
  double out = 0.0, cond = 0.0;
  const oracle::Vec q = {0.55, 0.45};
  const std::vector<oracle::Vec> rows = {{0.9, 0.1}, {0.2, 0.8}};
  for (int y = 0; y < 8; ++y) {
    double prob = 1.0;
    for (int k = 0; k < n; ++k) prob *= q[static_cast<std::size_t>((y >> k) & 1)];
    if (prob >= std::exp(-n * b)) out += prob;
  }
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) {
      double px = 1.0, wy = 1.0;
      for (int k = 0; k < n; ++k) {
        px *= 0.5;
        wy *= rows[static_cast<std::size_t>((x >> k) & 1)][static_cast<std::size_t>((y >> k) & 1)];
      }
      if (wy <= std::exp(-n * c)) cond += px * wy;
    }
  EXPECT_NEAR(entropy_tail(p, w, n, b, TailKind::EntropyOutput), out, 1e-12);
  EXPECT_NEAR(entropy_tail(p, w, n, c, TailKind::EntropyConditional), cond, 1e-12);
  EXPECT_NEAR(entropy_tail(p, w, n, c, TailKind::EntropyConditional, naive()), cond, 1e-12);
}

TEST(EntropyTail, LawOfLargeNumbersTrend) {
  const auto w = random_channel(2, 2, 7);
  const auto p = FiniteDistribution::uniform(w.labels());
  const double h = von_neumann_entropy(output_average(p, w).matrix());
  const double first = entropy_tail(p, w, 2, h - 0.15, TailKind::EntropyOutput);
  const double last = entropy_tail(p, w, 10, h - 0.15, TailKind::EntropyOutput);
  EXPECT_LE(last, first);
}

TEST(OgawaNagaokaTailBound, Examples) {
  CounterRng rng(8, 0);
  const Matrix rho = sample_density(2, rng), sigma = sample_density(2, rng);
  EXPECT_NEAR(ogawa_nagaoka_tail_bound(rho, sigma, 4, 0.3, 0.0).bound, 1.0, 1e-15);
  const auto same = ogawa_nagaoka_tail_bound(rho, rho, 4, 0.2, 1.0);
  EXPECT_NEAR(same.bound, std::exp(-0.8), 1e-12);
  EXPECT_NEAR(same.exact, 0.0, 1e-15);
  for (int n = 1; n <= 8; ++n)
    for (double a = -0.5; a <= 1.5; a += 0.25) {
      const auto b = ogawa_nagaoka_tail_bound(rho, sigma, n, a, 0.5);
      EXPECT_GE(b.bound, b.exact - 1e-12);
    }
}

TEST(Sweep, IdenticalStatesBracketCollapses) {
  const auto w = identical_states().file.channel;
  const auto p = FiniteDistribution::uniform(w.labels());
  const auto curve = sweep(TailKind::Info, info_tail_function(p, w), {1, 2, 3}, {0.2, -0.2, -0.1, 0.0, 0.1});
  EXPECT_EQ(curve.thresholds.front(), -0.2);
  ASSERT_TRUE(curve.bracket.has_lower);
  ASSERT_TRUE(curve.bracket.has_upper);
  EXPECT_DOUBLE_EQ(curve.bracket.lower, -0.1);
  EXPECT_DOUBLE_EQ(curve.bracket.upper, 0.0);
  EXPECT_EQ(curve.points.size(), 15u);
}

TEST(Sweep, QubitPairBracketContainsDivergence) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    CounterRng rng(30 + seed, 0);
    const Matrix rho = sample_density(2, rng), sigma = 0.5 * sample_density(2, rng) + 0.25 * Matrix::Identity(2, 2);
    const double d = relative_entropy(rho, sigma);
    std::vector<double> grid;
    for (int k = 0; k <= 60; ++k) grid.push_back(d - 1.5 + k * 0.05);
    const auto curve = sweep(TailKind::Divergence, divergence_tail_function(rho, sigma), {8}, grid, 0.05);
    if (curve.bracket.has_lower) EXPECT_LE(curve.bracket.lower, d);
    if (curve.bracket.has_upper) EXPECT_GE(curve.bracket.upper, d);
  }
}

TEST(Sweep, MonotoneGridAndCsv) {
  const auto w = random_channel(2, 2, 9);
  const auto p = FiniteDistribution::uniform(w.labels());
  const auto out = sweep(TailKind::EntropyOutput, entropy_tail_function(p, w, TailKind::EntropyOutput), {2, 4},
                         {0.1, 0.3, 0.5, 0.7, 0.9});
  for (std::size_t i = 0; i < out.ns.size(); ++i)
    for (std::size_t j = 1; j < out.thresholds.size(); ++j) EXPECT_GE(out.tail(i, j), out.tail(i, j - 1) - 1e-12);
  std::ostringstream csv;
  write_sweep_csv(csv, out);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "kind,n,threshold,tail");
  std::getline(in, line);
  EXPECT_EQ(line.rfind("entropy-output,2,0.10000000000000001,", 0), 0u);
  EXPECT_EQ(std::string(Bracket::kLabel), "finite-n bracket - not the limit");
}

TEST(TailKind, Names) {
  for (auto k : {TailKind::Info, TailKind::Divergence, TailKind::EntropyOutput, TailKind::EntropyConditional})
    EXPECT_EQ(tail_kind_from_string(to_string(k)), k);
  EXPECT_THROW(tail_kind_from_string("bogus"), InputError);
}

}  // namespace
}  // namespace cqlab
