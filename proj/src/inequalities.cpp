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

#include "cqlab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cqlab/capacity.hpp"
#include "cqlab/parallel.hpp"

namespace cqlab {
namespace {

using Index = Eigen::Index;

Matrix gaussian(Index rows, Index cols, CounterRng& rng) {
  Matrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = Complex(rng.normal(), rng.normal()) * std::sqrt(0.5);
  return g;
}

Matrix with_spectrum(const Matrix& u, const Vector& eig) {
  return hermitian_part(Matrix(u * eig.cast<Complex>().asDiagonal() * u.adjoint()));
}

void require_projection(const Matrix& p, const char* what) {
  require_hermitian(p, {}, what);
  if ((p * p - p).cwiseAbs().maxCoeff() > 1e-9) throw InputError(std::string(what) + ": not a projection");
}

void require_contraction(const SpectralDecomposition<double>& sd, const char* what) {
  if (sd.eigenvalues(0) < -1e-10 || sd.eigenvalues(sd.dim() - 1) > 1.0 + 1e-10)
    throw InputError(std::string(what) + ": spectrum not inside [0, 1]");
}

Matrix projection_with_columns(const Matrix& u, const std::vector<Index>& cols) {
  const Index d = u.rows();
  Matrix p = Matrix::Zero(d, d);
  for (Index c : cols) p += u.col(c) * u.col(c).adjoint();
  return hermitian_part(p);
}

double pick(std::initializer_list<double> values, std::uint64_t k) {
  return *(values.begin() + static_cast<std::ptrdiff_t>(k % values.size()));
}

// Puts an operand back into its class after a shrinking move.
Matrix repair(OperandKind kind, const Matrix& m) {
  const Index d = m.rows();
  const auto sd = spectral_decompose(hermitian_part(m));
  switch (kind) {
    case OperandKind::Density: {
      Matrix r = apply_spectral(sd, [](double l) { return std::max(l, 0.0); });
      const double tr = r.trace().real();
      return tr > 1e-300 ? Matrix(r / tr) : Matrix(Matrix::Identity(d, d) / static_cast<double>(d));
    }
    case OperandKind::Contraction:
      return apply_spectral(sd, [](double l) { return std::clamp(l, 0.0, 1.0); });
    case OperandKind::Psd:
      return apply_spectral(sd, [](double l) { return std::max(l, 0.0); });
    case OperandKind::Projection:
      return apply_spectral(sd, [](double l) { return l >= 0.5 ? 1.0 : 0.0; });
    case OperandKind::Hermitian:
    case OperandKind::Unitary:
      return hermitian_part(m);
  }
  return m;
}

std::vector<Matrix> shrink_targets(OperandKind kind, Index d) {
  const Matrix zero = Matrix::Zero(d, d), id = Matrix::Identity(d, d);
  switch (kind) {
    case OperandKind::Density:
      return {Matrix(id / static_cast<double>(d))};
    case OperandKind::Contraction:
    case OperandKind::Projection:
      return {zero, id};
    case OperandKind::Psd:
    case OperandKind::Hermitian:
      return {zero};
    case OperandKind::Unitary:
      return {id};
  }
  return {};
}

CqChannel qubit_channel(const Matrix& w0, const Matrix& w1) {
  return CqChannel({{"0", DensityMatrix(w0)}, {"1", DensityMatrix(w1)}});
}

FiniteDistribution binary_distribution(double p0) {
  return FiniteDistribution({{"0", p0}, {"1", 1.0 - p0}});
}

}  // namespace

std::string to_string(InequalityId id) {
  switch (id) {
    case InequalityId::KeyInequality:
      return "lemma2";
    case InequalityId::NeymanPearson:
      return "neyman-pearson";
    case InequalityId::OgawaNagaoka:
      return "ogawa-nagaoka";
    case InequalityId::TauNu:
      return "tau-nu";
    case InequalityId::CrossTerm:
      return "cross-term";
  }
  return "unknown";
}

InequalityId inequality_from_string(const std::string& name) {
  for (auto id : all_inequalities())
    if (to_string(id) == name) return id;
  throw InputError("unknown inequality \"" + name + "\"");
}

const std::vector<InequalityId>& all_inequalities() {
  static const std::vector<InequalityId> ids = {InequalityId::KeyInequality, InequalityId::NeymanPearson,
                                                InequalityId::OgawaNagaoka, InequalityId::TauNu,
                                                InequalityId::CrossTerm};
  return ids;
}

double failure_threshold(InequalityId id) {
  switch (id) {
    case InequalityId::KeyInequality:
      return -1e-8;
    case InequalityId::CrossTerm:
      return -1e-12;
    default:
      return -1e-9;
  }
}

double check_key_inequality(const Matrix& s, const Matrix& t, double c, double fault, const Tolerances& tol) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InputError("check_key_inequality: c must be positive and finite");
  if (s.rows() != t.rows()) throw InputError("check_key_inequality: S and T differ in dimension");
  require_contraction(spectral_decompose(s, tol), "check_key_inequality: S");
  require_psd(spectral_decompose(t, tol), tol, "check_key_inequality: T");
  const Index d = s.rows();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix root = inv_sqrt(Matrix(s + t), tol);
  const Matrix lhs = id - hermitian_part(Matrix(root * s * root));
  const Matrix rhs = fault * ((1.0 + c) * (id - s) + (2.0 + c + 1.0 / c) * t);
  return spectral_decompose(hermitian_part(Matrix(rhs - lhs)), tol).eigenvalues(0);
}

double check_neyman_pearson(const Matrix& a, const Matrix& t, const Tolerances& tol) {
  if (a.rows() != t.rows()) throw InputError("check_neyman_pearson: A and T differ in dimension");
  const auto sd = spectral_decompose(a, tol);
  require_contraction(spectral_decompose(t, tol), "check_neyman_pearson: T");
  return selected_eigenvalue_sum(sd, Comparator::Greater, 0.0, tol) - trace_product(a, t);
}

double check_ogawa_nagaoka(const Matrix& rho, const Matrix& sigma, double c, double s, const Tolerances& tol) {
  if (!(c > 0.0)) throw InputError("check_ogawa_nagaoka: c must be positive");
  if (!(s >= 0.0 && s <= 1.0)) throw InputError("check_ogawa_nagaoka: s must lie in [0, 1]");
  DensityMatrix r(rho, tol), g(sigma, tol);
  if (r.dim() != g.dim()) throw InputError("check_ogawa_nagaoka: states differ in dimension");
  const Matrix proj = spectral_projection(Matrix(rho - c * sigma), Comparator::Greater, 0.0, tol);
  const double lhs = trace_product(rho, proj);
  const double log_ratio = log_trace_power_ratio(rho, sigma, s, tol);
  if (std::isinf(log_ratio)) return kInfinity;
  return std::exp(log_ratio - s * std::log(c)) - lhs;
}

double check_tau_nu(const Matrix& rho, const Matrix& nu, const Matrix& tau, const Tolerances& tol) {
  DensityMatrix r(rho, tol);
  if (nu.rows() != rho.rows() || tau.rows() != rho.rows())
    throw InputError("check_tau_nu: operands differ in dimension");
  require_projection(nu, "check_tau_nu: nu");
  require_projection(tau, "check_tau_nu: tau");
  if ((rho * nu - nu * rho).cwiseAbs().maxCoeff() > 1e-9) throw InputError("check_tau_nu: rho and nu do not commute");
  const Index d = rho.rows();
  const double lhs = trace_product(rho, hermitian_part(Matrix(tau * nu * tau)));
  const double rhs = trace_product(rho, nu) - 2.0 * trace_product(rho, Matrix(Matrix::Identity(d, d) - tau));
  return lhs - rhs;
}

double check_cross_term(const FiniteDistribution& p, const CqChannel& w, int n, double b, double c,
                        const Sequence& x, const Limits& limits, const Tolerances& tol) {
  if (static_cast<int>(x.size()) != n) throw InputError("check_cross_term: sequence length differs from n");
  tensor_dim(w.dim(), n, limits);
  const auto wp = spectral_decompose(output_average(p, w).matrix(), tol);
  std::vector<const SpectralDecomposition<double>*> factors(static_cast<std::size_t>(n), &wp);
  const auto big = kron_decomposition<double>(factors);
  const Matrix tau = spectral_projection(big, Comparator::Less, std::exp(-n * b), tol);

  std::vector<SpectralDecomposition<double>> states;
  for (int k = 0; k < w.size(); ++k) states.push_back(spectral_decompose(w.state(k), tol));
  std::vector<const SpectralDecomposition<double>*> fs;
  for (int k : x) fs.push_back(&states.at(static_cast<std::size_t>(k)));
  const Matrix nu = spectral_projection(kron_decomposition<double>(fs), Comparator::Greater, std::exp(-n * c), tol);

  const Matrix wpn = apply_spectral(big, [](double l) { return l; });
  const double lhs = trace_product(wpn, hermitian_part(Matrix(tau * nu * tau)));
  return std::exp(-n * (b - c)) - lhs;
}

std::string to_string(OperandKind kind) {
  switch (kind) {
    case OperandKind::Density:
      return "density";
    case OperandKind::Contraction:
      return "contraction";
    case OperandKind::Psd:
      return "psd";
    case OperandKind::Projection:
      return "projection";
    case OperandKind::Hermitian:
      return "hermitian";
    case OperandKind::Unitary:
      return "unitary";
  }
  return "unknown";
}

OperandKind operand_kind_from_string(const std::string& name) {
  for (auto k : {OperandKind::Density, OperandKind::Contraction, OperandKind::Psd, OperandKind::Projection,
                 OperandKind::Hermitian, OperandKind::Unitary})
    if (to_string(k) == name) return k;
  throw InputError("unknown operand kind \"" + name + "\"");
}

Matrix sample_density(Index dim, CounterRng& rng, std::optional<Index> rank) {
  const Index r = rank.value_or(dim);
  if (r < 1 || r > dim) throw InputError("sample_density: rank out of range");
  const Matrix g = gaussian(dim, r, rng);
  Matrix rho = hermitian_part(Matrix(g * g.adjoint()));
  return rho / rho.trace().real();
}

Matrix sample_unitary(Index dim, CounterRng& rng) {
  const Matrix g = gaussian(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (Index k = 0; k < dim; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

Matrix sample_contraction(Index dim, CounterRng& rng) {
  const Matrix u = sample_unitary(dim, rng);
  Vector eig(dim);
  for (Index k = 0; k < dim; ++k) eig(k) = rng.uniform();
  return with_spectrum(u, eig);
}

Matrix sample_psd(Index dim, CounterRng& rng) {
  const Matrix g = gaussian(dim, dim, rng);
  const double scale = sample_log_uniform(1e-2, 1e2, rng) / static_cast<double>(dim);
  return hermitian_part(Matrix(scale * g * g.adjoint()));
}

Matrix sample_projection(Index dim, CounterRng& rng, std::optional<Index> rank) {
  const Index r = rank.value_or(static_cast<Index>(rng() % static_cast<std::uint64_t>(dim + 1)));
  if (r < 0 || r > dim) throw InputError("sample_projection: rank out of range");
  const Matrix u = sample_unitary(dim, rng);
  std::vector<Index> cols;
  for (Index k = 0; k < r; ++k) cols.push_back(k);
  return projection_with_columns(u, cols);
}

Matrix sample_hermitian(Index dim, CounterRng& rng) {
  return hermitian_part(gaussian(dim, dim, rng));
}

double sample_log_uniform(double lo, double hi, CounterRng& rng) {
  return std::exp(std::log(lo) + rng.uniform() * (std::log(hi) - std::log(lo)));
}

Matrix sample_operand(OperandKind kind, Index dim, CounterRng& rng) {
  if (dim < 1) throw InputError("sample_operand: dimension must be >= 1");
  switch (kind) {
    case OperandKind::Density:
      return sample_density(dim, rng);
    case OperandKind::Contraction:
      return sample_contraction(dim, rng);
    case OperandKind::Psd:
      return sample_psd(dim, rng);
    case OperandKind::Projection:
      return sample_projection(dim, rng);
    case OperandKind::Hermitian:
      return sample_hermitian(dim, rng);
    case OperandKind::Unitary:
      return sample_unitary(dim, rng);
  }
  return {};
}

InstanceStream::InstanceStream(OperandKind kind, Index dim, std::size_t count, std::uint64_t seed)
    : kind_(kind), dim_(dim), count_(count), seed_(seed) {
  if (dim < 1) throw InputError("InstanceStream: dimension must be >= 1");
}

Matrix InstanceStream::at(std::size_t index) const {
  if (index >= count_) throw InputError("InstanceStream: index out of range");
  CounterRng rng(seed_, index);
  return sample_operand(kind_, dim_, rng);
}

std::optional<Matrix> InstanceStream::next() {
  if (cursor_ >= count_) return std::nullopt;
  return at(cursor_++);
}

const Matrix& InequalityInstance::op(const std::string& name) const {
  for (const auto& o : operands)
    if (o.name == name) return o.value;
  throw InputError("instance has no operand \"" + name + "\"");
}

double InequalityInstance::scalar(const std::string& name) const {
  for (const auto& [k, v] : scalars)
    if (k == name) return v;
  throw InputError("instance has no scalar \"" + name + "\"");
}

InequalityInstance make_instance(InequalityId id, Index dim, std::uint64_t seed, std::uint64_t index,
                                 bool adversarial) {
  InequalityInstance inst;
  inst.id = id;
  inst.seed = seed;
  inst.index = index;
  inst.adversarial = adversarial;
  // Adversarial draws use a disjoint family of streams.
  CounterRng rng(seed ^ (adversarial ? 0x5bd1e995ULL : 0ULL), index * 8 + static_cast<std::uint64_t>(id));
  const Index d = dim;
  const Matrix id_d = Matrix::Identity(d, d);
  const std::uint64_t mode = index;
  auto add = [&](std::string name, OperandKind kind, Matrix value, bool frozen = false) {
    inst.operands.push_back({std::move(name), kind, std::move(value), frozen});
  };

  switch (id) {
    case InequalityId::KeyInequality: {
      double c = sample_log_uniform(1e-3, 1e3, rng);
      Matrix s = sample_contraction(d, rng), t = sample_psd(d, rng);
      if (adversarial) {
        c = pick({1e-3, 1.0, 1e3}, mode / 7);
        const Matrix u = sample_unitary(d, rng);
        switch (mode % 7) {
          case 0:
            s = id_d;
            t = Matrix::Zero(d, d);
            break;
          case 1:
            s = sample_projection(d, rng);
            t = 1e-6 * sample_psd(d, rng);
            break;
          case 2: {
            const Matrix p = sample_projection(d, rng, std::max<Index>(1, d / 2));
            s = hermitian_part(Matrix(p * sample_contraction(d, rng) * p));
            const Matrix v = gaussian(d, 1, rng);
            t = hermitian_part(Matrix(v * v.adjoint()));
            break;
          }
          case 3: {
            Vector eig(d);
            for (Index k = 0; k < d; ++k) eig(k) = 0.5 + 1e-10 * static_cast<double>(k);
            s = with_spectrum(u, eig);
            break;
          }
          case 4:
            s = Matrix::Zero(d, d);
            break;
          case 5:
            t = Matrix::Zero(d, d);
            break;
          case 6: {
            s = sample_projection(d, rng);
            const Matrix q = id_d - s;
            t = hermitian_part(Matrix(q * sample_psd(d, rng) * q));
            break;
          }
        }
      }
      add("S", OperandKind::Contraction, s);
      add("T", OperandKind::Psd, t);
      inst.scalars = {{"c", c}};
      break;
    }
    case InequalityId::NeymanPearson: {
      Matrix a = sample_hermitian(d, rng), t = sample_contraction(d, rng);
      if (adversarial) {
        switch (mode % 6) {
          case 0:
            t = spectral_projection(a, Comparator::Greater, 0.0);
            break;
          case 1:
            t = id_d;
            break;
          case 2: {
            const Matrix p = sample_projection(d, rng, std::max<Index>(1, d / 2));
            a = hermitian_part(Matrix(p * a * p));
            break;
          }
          case 3: {
            Vector eig(d);
            for (Index k = 0; k < d; ++k) eig(k) = (k % 2 ? 1e-13 : -1e-13) * static_cast<double>(k + 1);
            eig(0) = 1.0;
            a = with_spectrum(sample_unitary(d, rng), eig);
            t = spectral_projection(a, Comparator::GreaterEqual, 0.0);
            break;
          }
          case 4:
            a = Matrix::Zero(d, d);
            break;
          case 5:
            t = sample_projection(d, rng);
            break;
        }
      }
      add("A", OperandKind::Hermitian, a);
      add("T", OperandKind::Contraction, t);
      break;
    }
    case InequalityId::OgawaNagaoka: {
      Matrix rho = sample_density(d, rng), sigma = sample_density(d, rng);
      double c = sample_log_uniform(1e-2, 1e2, rng), s = rng.uniform();
      if (adversarial) {
        c = pick({1e-3, 1.0, 1e3}, mode / 6);
        s = pick({0.0, 0.5, 1.0}, mode / 18);
        switch (mode % 6) {
          case 0:
            rho = sigma;
            break;
          case 1:
            rho = sample_density(d, rng, 1);
            break;
          case 2: {
            sigma = sample_density(d, rng, std::max<Index>(1, d / 2));
            const Matrix p = support_projection(sigma);
            rho = repair(OperandKind::Density, Matrix(p * rho * p));
            break;
          }
          case 3:
            sigma = sample_density(d, rng, std::max<Index>(1, d - 1));
            break;
          case 4: {
            Vector eig(d);
            for (Index k = 0; k < d; ++k) eig(k) = (1.0 + 1e-10 * static_cast<double>(k)) / static_cast<double>(d);
            eig /= eig.sum();
            rho = with_spectrum(sample_unitary(d, rng), eig);
            sigma = id_d / static_cast<double>(d);
            break;
          }
          case 5:
            s = pick({0.0, 1.0}, mode / 6);
            break;
        }
      }
      add("rho", OperandKind::Density, rho);
      add("sigma", OperandKind::Density, sigma);
      inst.scalars = {{"c", c}, {"s", s}};
      break;
    }
    case InequalityId::TauNu: {
      Matrix rho = sample_density(d, rng);
      if (adversarial && mode % 6 == 3) rho = sample_density(d, rng, 1);
      const auto sd = spectral_decompose(rho);
      std::vector<Index> cols;
      for (Index k = 0; k < d; ++k)
        if (rng.uniform() < 0.5) cols.push_back(k);
      Matrix nu = projection_with_columns(sd.eigenvectors, cols);
      Matrix tau = sample_projection(d, rng);
      if (adversarial) {
        switch (mode % 6) {
          case 0:
            tau = id_d;
            break;
          case 1:
            nu = Matrix::Zero(d, d);
            break;
          case 2:
            nu = id_d;
            break;
          case 4:
            tau = id_d - nu;
            break;
          case 5:
            tau = nu;
            break;
          default:
            break;
        }
      }
      add("rho", OperandKind::Density, rho, true);
      add("nu", OperandKind::Projection, nu, true);
      add("tau", OperandKind::Projection, tau);
      break;
    }
    case InequalityId::CrossTerm: {
      Matrix w0 = sample_density(2, rng), w1 = sample_density(2, rng);
      double p0 = rng.uniform();
      int n = 1 + static_cast<int>(rng() % 6);
      double b = 0.05 + 1.5 * rng.uniform(), c = 0.05 + 1.5 * rng.uniform();
      if (adversarial) {
        switch (mode % 6) {
          case 0:
            c = b + 0.1;
            break;
          case 1:
            b = 20.0;
            break;
          case 2:
            w0 = sample_density(2, rng, 1);
            w1 = sample_density(2, rng, 1);
            break;
          case 3:
            p0 = 1.0;
            break;
          case 4:
            c = b;
            break;
          case 5:
            w0 = w1 = Matrix::Identity(2, 2) / 2.0;
            b = c = std::log(2.0);
            break;
        }
      }
      add("W0", OperandKind::Density, w0);
      add("W1", OperandKind::Density, w1);
      inst.scalars = {{"p0", p0}, {"n", static_cast<double>(n)}, {"b", b}, {"c", c}};
      for (int k = 0; k < n; ++k) inst.sequence.push_back(static_cast<int>(rng() % 2));
      break;
    }
  }
  return inst;
}

double evaluate(const InequalityInstance& inst, double fault, const Tolerances& tol) {
  switch (inst.id) {
    case InequalityId::KeyInequality:
      return check_key_inequality(inst.op("S"), inst.op("T"), inst.scalar("c"), fault, tol);
    case InequalityId::NeymanPearson:
      return check_neyman_pearson(inst.op("A"), inst.op("T"), tol);
    case InequalityId::OgawaNagaoka:
      return check_ogawa_nagaoka(inst.op("rho"), inst.op("sigma"), inst.scalar("c"), inst.scalar("s"), tol);
    case InequalityId::TauNu:
      return check_tau_nu(inst.op("rho"), inst.op("nu"), inst.op("tau"), tol);
    case InequalityId::CrossTerm: {
      const int n = static_cast<int>(inst.scalar("n"));
      return check_cross_term(binary_distribution(inst.scalar("p0")), qubit_channel(inst.op("W0"), inst.op("W1")), n,
                              inst.scalar("b"), inst.scalar("c"), inst.sequence, {}, tol);
    }
  }
  return 0.0;
}

InequalityInstance shrink(const InequalityInstance& failing, double fault, const Tolerances& tol, int max_steps) {
  const double threshold = failure_threshold(failing.id);
  auto fails = [&](const InequalityInstance& c, double& margin) {
    try {
      margin = evaluate(c, fault, tol);
      return margin < threshold;
    } catch (const Error&) {
      return false;
    }
  };
  InequalityInstance best = failing;
  double margin = 0.0;
  if (!fails(best, margin)) return best;
  best.margin = margin;

  for (int step = 0; step < max_steps; ++step) {
    std::vector<InequalityInstance> moves;
    const bool any_frozen =
        std::any_of(best.operands.begin(), best.operands.end(), [](const Operand& o) { return o.frozen; });
    if (best.id == InequalityId::CrossTerm) {
      if (best.sequence.size() > 1) {
        auto m = best;
        m.sequence.pop_back();
        for (auto& [k, v] : m.scalars)
          if (k == "n") v -= 1.0;
        moves.push_back(std::move(m));
      }
    } else if (!any_frozen && !best.operands.empty() && best.operands.front().value.rows() > 1) {
      auto m = best;
      const Index d = m.operands.front().value.rows() - 1;
      for (auto& o : m.operands) o.value = repair(o.kind, Matrix(o.value.topLeftCorner(d, d)));
      moves.push_back(std::move(m));
    }
    for (std::size_t k = 0; k < best.operands.size(); ++k) {
      const auto& o = best.operands[k];
      if (o.frozen) continue;
      for (const auto& target : shrink_targets(o.kind, o.value.rows())) {
        if ((o.value - target).cwiseAbs().maxCoeff() < 1e-15) continue;
        auto whole = best;
        whole.operands[k].value = target;
        moves.push_back(std::move(whole));
        auto half = best;
        half.operands[k].value = repair(o.kind, Matrix(0.5 * (o.value + target)));
        moves.push_back(std::move(half));
      }
    }
    bool moved = false;
    for (auto& m : moves) {
      double mm = 0.0;
      if (fails(m, mm)) {
        m.margin = mm;
        best = std::move(m);
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return best;
}

Json instance_to_json(const InequalityInstance& inst) {
  Json j;
  j["inequality"] = to_string(inst.id);
  j["seed"] = inst.seed;
  j["index"] = inst.index;
  j["adversarial"] = inst.adversarial;
  j["margin"] = inst.margin;
  Json ops = Json::array();
  for (const auto& o : inst.operands) {
    Json e;
    e["name"] = o.name;
    e["kind"] = to_string(o.kind);
    e["frozen"] = o.frozen;
    e["value"] = matrix_to_json(o.value);
    ops.push_back(std::move(e));
  }
  j["operands"] = std::move(ops);
  Json sc = Json::object();
  for (const auto& [k, v] : inst.scalars) sc[k] = v;
  j["scalars"] = std::move(sc);
  j["sequence"] = inst.sequence;
  return j;
}

InequalityInstance instance_from_json(const Json& j) {
  InequalityInstance inst;
  try {
    inst.id = inequality_from_string(j.at("inequality").get<std::string>());
    inst.seed = j.at("seed").get<std::uint64_t>();
    inst.index = j.at("index").get<std::uint64_t>();
    inst.adversarial = j.value("adversarial", false);
    inst.margin = j.value("margin", 0.0);
    for (const auto& e : j.at("operands"))
      inst.operands.push_back({e.at("name").get<std::string>(), operand_kind_from_string(e.at("kind").get<std::string>()),
                               matrix_from_json(e.at("value"), e.at("name").get<std::string>()),
                               e.value("frozen", false)});
    for (const auto& [k, v] : j.at("scalars").items()) inst.scalars.emplace_back(k, v.get<double>());
    if (j.contains("sequence")) inst.sequence = j["sequence"].get<Sequence>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("witness: ") + e.what());
  }
  return inst;
}

std::filesystem::path write_witness(const InequalityInstance& inst, const std::filesystem::path& dir) {
  const auto path = dir / (to_string(inst.id) + "-seed" + std::to_string(inst.seed) + (inst.adversarial ? "-a" : "-r") +
                           std::to_string(inst.index) + ".json");
  write_json_file(instance_to_json(inst), path);
  return path;
}

InequalityInstance read_witness(const std::filesystem::path& path) {
  return instance_from_json(read_json_file(path));
}

bool SuiteReport::passed() const {
  return std::all_of(stats.begin(), stats.end(), [](const InequalityStats& s) { return s.passed(); });
}

SuiteReport run_suite(const SuiteConfig& cfg) {
  if (cfg.dims.empty()) throw InputError("run_suite: no dimensions given");
  for (auto d : cfg.dims)
    if (d < 1) throw InputError("run_suite: dimensions must be >= 1");
  SuiteReport report;
  const std::size_t total = cfg.count + cfg.adversarial_count;
  for (auto id : cfg.ids) {
    InequalityStats st;
    st.id = id;
    st.instances = cfg.count;
    st.adversarial = cfg.adversarial_count;
    std::vector<double> margins(total, 0.0);
    auto instance_at = [&](std::size_t i) {
      const bool adv = i >= cfg.count;
      const std::uint64_t index = adv ? i - cfg.count : i;
      const Index dim = cfg.dims[static_cast<std::size_t>(index % cfg.dims.size())];
      return make_instance(id, dim, cfg.seed, index, adv);
    };
    parallel_for(total, cfg.threads, [&](std::size_t i) { margins[i] = evaluate(instance_at(i), cfg.fault); });

    st.min_margin = total ? kInfinity : 0.0;
    const double threshold = failure_threshold(id);
    std::vector<std::size_t> failed;
    for (std::size_t i = 0; i < total; ++i) {
      if (margins[i] < st.min_margin) {
        st.min_margin = margins[i];
        st.argmin_adversarial = i >= cfg.count;
        st.argmin_index = st.argmin_adversarial ? i - cfg.count : i;
      }
      if (margins[i] < threshold) failed.push_back(i);
    }
    st.failures = failed.size();
    if (cfg.witness_dir) {
      for (std::size_t k = 0; k < failed.size() && k < cfg.max_witnesses; ++k) {
        auto inst = shrink(instance_at(failed[k]), cfg.fault);
        st.witnesses.push_back(write_witness(inst, *cfg.witness_dir));
      }
    }
    report.stats.push_back(std::move(st));
  }
  return report;
}

}  // namespace cqlab
