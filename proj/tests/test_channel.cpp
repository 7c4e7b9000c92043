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

#include <map>

#include "cqlab/channel.hpp"
#include "cqlab/inequalities.hpp"

namespace cqlab {
namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

CqChannel orthogonal() { return CqChannel({{"0", DensityMatrix(diag2(1, 0))}, {"1", DensityMatrix(diag2(0, 1))}}); }

CqChannel random_channel(int k, Eigen::Index d, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  std::vector<CqChannel::Input> in;
  for (int x = 0; x < k; ++x) in.push_back({"x" + std::to_string(x), DensityMatrix(sample_density(d, rng))});
  return CqChannel(std::move(in));
}

TEST(DensityMatrix, Invariants) {
  EXPECT_NO_THROW(DensityMatrix(diag2(0.5, 0.5)));
  EXPECT_THROW(DensityMatrix(diag2(0.6, 0.5)), InputError);
  EXPECT_THROW(DensityMatrix(diag2(1.5, -0.5)), InputError);
  EXPECT_NO_THROW(DensityMatrix(diag2(1.0 + 5e-11, -5e-11)));
}

TEST(CqChannel, Invariants) {
  EXPECT_THROW(CqChannel({}), InputError);
  EXPECT_THROW(CqChannel({{"a", DensityMatrix(diag2(1, 0))}, {"a", DensityMatrix(diag2(0, 1))}}), InputError);
  EXPECT_THROW(CqChannel({{"a", DensityMatrix(diag2(1, 0))}, {"b", DensityMatrix(Matrix::Identity(3, 3) / 3.0)}}),
               InputError);
  const auto w = orthogonal();
  EXPECT_EQ(w.index_of("1"), 1);
  EXPECT_THROW(w.index_of("2"), InputError);
  const std::vector<int> pick = {1};
  EXPECT_EQ(w.subchannel(pick).label(0), "1");
}

TEST(FiniteDistribution, Invariants) {
  EXPECT_THROW(FiniteDistribution({{"a", 0.5}, {"b", 0.4}}), InputError);
  EXPECT_THROW(FiniteDistribution({{"a", 1.5}, {"b", -0.5}}), InputError);
  EXPECT_NO_THROW(FiniteDistribution({{"a", 0.5}, {"b", 0.5 + 1e-13}}));
  const FiniteDistribution p({{"a", 1.0}, {"b", 0.0}});
  EXPECT_EQ(p.support(), std::vector<std::string>{"a"});
  EXPECT_THROW(FiniteDistribution({{"z", 1.0}}).aligned(orthogonal()), InputError);
}

TEST(OutputAverage, Examples) {
  const auto w = orthogonal();
  EXPECT_LT((output_average(FiniteDistribution::point_mass("1"), w).matrix() - w.state(1)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((output_average(FiniteDistribution::uniform(w.labels()), w).matrix() - diag2(0.5, 0.5)).cwiseAbs().maxCoeff(),
            1e-15);
  EXPECT_LT((output_average(FiniteDistribution({{"0", 0.3}, {"1", 0.7}}), w).matrix() - diag2(0.3, 0.7))
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
}

TEST(OutputAverage, Affine) {
  const auto w = random_channel(3, 3, 5);
  const FiniteDistribution p({{"x0", 0.2}, {"x1", 0.3}, {"x2", 0.5}}), q({{"x0", 0.6}, {"x1", 0.4}, {"x2", 0.0}});
  const double alpha = 0.35;
  const FiniteDistribution mix({{"x0", alpha * 0.2 + (1 - alpha) * 0.6},
                                {"x1", alpha * 0.3 + (1 - alpha) * 0.4},
                                {"x2", alpha * 0.5}});
  const Matrix lhs = output_average(mix, w).matrix();
  const Matrix rhs = alpha * output_average(p, w).matrix() + (1 - alpha) * output_average(q, w).matrix();
  EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SequenceState, Examples) {
  const auto w = orthogonal();
  const Sequence one = {1};
  EXPECT_LT((sequence_state(w, one) - w.state(1)).cwiseAbs().maxCoeff(), 1e-15);
  const Sequence twice = {0, 0};
  const Matrix pp = sequence_state(w, twice);
  EXPECT_EQ(pp.rows(), 4);
  const auto sd = spectral_decompose(pp);
  EXPECT_NEAR(sd.eigenvalues(3), 1.0, 1e-12);
  EXPECT_NEAR(sd.eigenvalues(2), 0.0, 1e-12);
  const auto r = random_channel(2, 2, 6);
  const Sequence three = {0, 1, 1};
  EXPECT_NEAR(sequence_state(r, three).trace().real(), 1.0, 1e-12);
  const std::vector<std::string> labels = {"x1", "x0"};
  EXPECT_LT((sequence_state(r, labels) - kron(r.state(1), r.state(0))).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SequenceState, DimensionBound) {
  const auto w = orthogonal();
  const Sequence long_seq(13, 0);
  EXPECT_THROW(sequence_state(w, long_seq), ResourceError);
  EXPECT_EQ(tensor_dim(2, 12), 4096);
  Limits small;
  small.max_dim = 8;
  EXPECT_THROW(tensor_dim(2, 4, small), ResourceError);
}

TEST(TypeClasses, SingleSymbol) {
  const auto w = orthogonal();
  const auto classes = enumerate_type_classes(FiniteDistribution::point_mass("0"), w, 7);
  ASSERT_EQ(classes.size(), 1u);
  EXPECT_EQ(classes[0].multiplicity, BigInt(1));
}

TEST(TypeClasses, BinaryPairs) {
  const auto w = orthogonal();
  const auto classes = enumerate_type_classes(FiniteDistribution::uniform(w.labels()), w, 2);
  ASSERT_EQ(classes.size(), 3u);
  std::multiset<BigInt> mult;
  for (const auto& c : classes) mult.insert(c.multiplicity);
  EXPECT_EQ(mult, (std::multiset<BigInt>{1, 1, 2}));
}

TEST(TypeClasses, TernaryMatchesBruteForce) {
  const auto w = random_channel(3, 2, 7);
  const FiniteDistribution p({{"x0", 0.2}, {"x1", 0.3}, {"x2", 0.5}});
  const auto classes = enumerate_type_classes(p, w, 4);
  ASSERT_EQ(classes.size(), 15u);
  std::map<std::vector<int>, int> brute;
  for (int code = 0; code < 81; ++code) {
    std::vector<int> counts(3, 0);
    for (int k = 0, c = code; k < 4; ++k, c /= 3) ++counts[static_cast<std::size_t>(c % 3)];
    ++brute[counts];
  }
  BigInt total = 0;
  double mass = 0.0;
  for (const auto& c : classes) {
    std::vector<int> counts(3, 0);
    for (std::size_t k = 0; k < c.symbols.size(); ++k) counts[static_cast<std::size_t>(c.symbols[k])] = c.counts[k];
    EXPECT_EQ(c.multiplicity, BigInt(brute.at(counts)));
    total += c.multiplicity;
    mass += c.probability();
  }
  EXPECT_EQ(total, BigInt(81));
  EXPECT_NEAR(mass, 1.0, 1e-12);
}

TEST(TypeClasses, ExactMultinomialsAtLargeN) {
  const std::vector<int> counts = {16, 16, 16, 16};
  // 64! / (16!)^4
  EXPECT_EQ(multinomial(counts), BigInt("662122768410971464603908403461821400"));
  EXPECT_EQ(multinomial(std::vector<int>{64, 0}), BigInt(1));
}

TEST(TypeClasses, SymmetricFunctionalMatchesNaive) {
  for (int k = 1; k <= 3; ++k) {
    const auto w = random_channel(k, 2, 8 + static_cast<std::uint64_t>(k));
    std::vector<std::pair<std::string, double>> weights;
    for (int x = 0; x < k; ++x) weights.emplace_back(w.label(x), (x + 1.0) / (k * (k + 1) / 2.0));
    const FiniteDistribution p(weights);
    for (int n = 1; n <= 4; ++n) {
      // A symmetric functional: sum_x P^n(x) Tr[W_x^2].
      double by_class = 0.0, naive = 0.0;
      for (const auto& c : enumerate_type_classes(p, w, n)) {
        const Matrix s = sequence_state(w, c.representative);
        by_class += c.probability() * (s * s).trace().real();
      }
      for_each_sequence(p, w, n, [&](const Sequence& x, double prob) {
        const Matrix s = sequence_state(w, x);
        naive += prob * (s * s).trace().real();
      });
      EXPECT_NEAR(by_class, naive, 1e-10);
    }
  }
}

TEST(TypeClasses, CountBound) {
  const auto w = random_channel(3, 2, 9);
  Limits small;
  small.max_type_classes = 10;
  EXPECT_THROW(enumerate_type_classes(FiniteDistribution::uniform(w.labels()), w, 4, small), ResourceError);
}

TEST(RestrictChannel, Examples) {
  const auto w = orthogonal();
  CostSpec cost{{{"0", 0.0}, {"1", 1.0}}, 1.0};
  auto all = restrict_channel(w, 3, cost);
  for (int code = 0; code < 8; ++code) {
    const Sequence s = {code & 1, (code >> 1) & 1, (code >> 2) & 1};
    EXPECT_TRUE(all(s));
  }
  CostSpec above{{{"0", 0.5}, {"1", 1.0}}, 0.4};
  auto none = restrict_channel(w, 2, above);
  for (int code = 0; code < 4; ++code) EXPECT_FALSE(none(Sequence{code & 1, (code >> 1) & 1}));
  cost.budget = 0.5;
  auto half = restrict_channel(w, 2, cost);
  EXPECT_TRUE(half.exact());
  EXPECT_TRUE(half(Sequence{0, 0}));
  EXPECT_TRUE(half(Sequence{0, 1}));
  EXPECT_TRUE(half(Sequence{1, 0}));
  EXPECT_FALSE(half(Sequence{1, 1}));
}

TEST(RestrictChannel, ExactRationalBoundary) {
  const auto w = orthogonal();
  // Boundary sums compare in scaled integers.
  CostSpec cost{{{"0", 0.1}, {"1", 0.2}}, 0.2};
  auto pred = restrict_channel(w, 3, cost);
  EXPECT_TRUE(pred.exact());
  EXPECT_TRUE(pred(Sequence{1, 1, 1}));
  EXPECT_TRUE(pred(Sequence{0, 1, 1}));
  CostSpec irr{{{"0", std::sqrt(2.0)}, {"1", 0.0}}, std::sqrt(2.0) / 2.0};
  auto p2 = restrict_channel(w, 2, irr);
  EXPECT_FALSE(p2.exact());
  EXPECT_TRUE(p2(Sequence{0, 1}));
  EXPECT_FALSE(p2(Sequence{0, 0}));
}

TEST(BlockPair, Structure) {
  const auto w = random_channel(2, 2, 10);
  const FiniteDistribution p({{"x0", 0.25}, {"x1", 0.75}});
  const Matrix sigma = output_average(p, w).matrix();
  const auto [r, s] = block_pair(p, w, sigma);
  EXPECT_EQ(r.rows(), 4);
  EXPECT_NEAR(r.trace().real(), 1.0, 1e-12);
  EXPECT_NEAR(s.trace().real(), 1.0, 1e-12);
  EXPECT_LT((r.topLeftCorner(2, 2) - 0.25 * w.state(0)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((s.bottomRightCorner(2, 2) - 0.75 * sigma).cwiseAbs().maxCoeff(), 1e-15);
}

}  // namespace
}  // namespace cqlab
