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

#include "cqlab/capacity.hpp"

#include <algorithm>
#include <cmath>

namespace cqlab {
namespace {

// Diagonal of V^* A V, real part.
Vector diagonal_in_basis(const Matrix& a, const Matrix& v) {
  const Matrix av = a * v;
  Vector out(v.cols());
  for (Eigen::Index k = 0; k < v.cols(); ++k) out(k) = v.col(k).dot(av.col(k)).real();
  return out;
}

double entropy_term(const SpectralDecomposition<double>& sd, const Tolerances& tol) {
  const double cut = sd.cutoff(tol);
  double s = 0.0;
  for (Eigen::Index k = 0; k < sd.dim(); ++k) {
    const double l = sd.eigenvalues(k);
    if (l > cut) s += l * std::log(l);
  }
  return s;
}

// Tr ρ log σ on supp σ, or -infinity (as a flag) when ρ leaks off supp σ.
double cross_log_term(const Matrix& rho, const SpectralDecomposition<double>& sigma, const Tolerances& tol) {
  const double cut = sigma.cutoff(tol);
  const Vector diag = diagonal_in_basis(rho, sigma.eigenvectors);
  double leak = 0.0, s = 0.0;
  for (Eigen::Index k = 0; k < sigma.dim(); ++k) {
    if (sigma.eigenvalues(k) > cut)
      s += diag(k) * std::log(sigma.eigenvalues(k));
    else
      leak += diag(k);
  }
  if (leak > tol.psd) return -kInfinity;
  return s;
}

// Multiplicative-update engine shared by the unconstrained and Lagrangian
// problems.
class UpdateEngine {
 public:
  UpdateEngine(const CqChannel& w, const Tolerances& tol) : w_(w), tol_(tol) {
    for (int x = 0; x < w.size(); ++x) neg_entropy_.push_back(entropy_term(spectral_decompose(w.state(x), tol), tol));
  }

  // D(W_x‖W_P) for every input, and W_P.
  Vector divergences(const Vector& p, Matrix* average = nullptr) const {
    Matrix wp = Matrix::Zero(w_.dim(), w_.dim());
    for (int x = 0; x < w_.size(); ++x)
      if (p(x) > 0.0) wp += p(x) * w_.state(x);
    const auto sd = spectral_decompose(wp, tol_);
    Vector d(w_.size());
    for (int x = 0; x < w_.size(); ++x) {
      const double cross = cross_log_term(w_.state(x), sd, tol_);
      d(x) = std::isinf(cross) ? kInfinity : neg_entropy_[static_cast<std::size_t>(x)] - cross;
    }
    if (average) *average = hermitian_part(wp);
    return d;
  }

 private:
  const CqChannel& w_;
  Tolerances tol_;
  std::vector<double> neg_entropy_;
};

struct UpdateRun {
  Vector p;
  Vector divergences;
  Matrix average;
  double information = 0.0;
  // max_x (D_x − μ c_x) − sum_x P(x)(D_x − μ c_x)
  double lagrangian_gap = kInfinity;
  int iterations = 0;
  bool converged = false;
};

double weighted_sum(const Vector& p, const Vector& v) {
  double s = 0.0;
  for (Eigen::Index x = 0; x < p.size(); ++x)
    if (p(x) > 0.0) s += p(x) * v(x);
  return s;
}

UpdateRun run_updates(const UpdateEngine& engine, const Vector& costs, double mu, const SolverOptions& opts,
                      Vector p) {
  UpdateRun best;
  const Eigen::Index k = p.size();
  for (int it = 0; it <= opts.max_iter; ++it) {
    Matrix avg;
    const Vector d = engine.divergences(p, &avg);
    const Vector score = d - mu * costs;
    const double info = weighted_sum(p, d);
    const double gap = score.maxCoeff() - weighted_sum(p, score);
    if (it == 0 || gap < best.lagrangian_gap) {
      best = {p, d, avg, info, gap, it, false};
    }
    best.iterations = it;
    if (gap <= opts.tol) {
      best = {p, d, avg, info, gap, it, true};
      return best;
    }
    if (it == opts.max_iter) break;
    double top = -kInfinity;
    for (Eigen::Index x = 0; x < k; ++x)
      if (std::isfinite(score(x))) top = std::max(top, score(x));
    Vector next(k);
    for (Eigen::Index x = 0; x < k; ++x) {
      // An input off the current support gets its weight restored.
      next(x) = std::isfinite(score(x)) ? p(x) * std::exp(score(x) - top) : 1.0 / static_cast<double>(k);
      next(x) = std::max(next(x), 1e-300);
    }
    p = next / next.sum();
  }
  return best;
}

CapacityResult to_result(const CqChannel& w, const UpdateRun& run) {
  CapacityResult r;
  r.value = run.information;
  r.optimizer = FiniteDistribution::over(w, run.p);
  r.center = run.average;
  r.duality_gap = run.divergences.maxCoeff() - run.information;
  r.iterations = run.iterations;
  r.converged = run.converged;
  return r;
}

}  // namespace

double von_neumann_entropy(const Matrix& rho, const Tolerances& tol) {
  return -entropy_term(spectral_decompose(rho, tol), tol);
}

double relative_entropy(const Matrix& rho, const Matrix& sigma, const Tolerances& tol) {
  const auto sr = spectral_decompose(rho, tol);
  const auto ss = spectral_decompose(sigma, tol);
  require_psd(sr, tol, "relative_entropy");
  require_psd(ss, tol, "relative_entropy");
  const double cross = cross_log_term(rho, ss, tol);
  if (std::isinf(cross)) return kInfinity;
  return entropy_term(sr, tol) - cross;
}

double log_trace_power_ratio(const Matrix& rho, const Matrix& sigma, double s, const Tolerances& tol) {
  if (s == 0.0) return 0.0;
  const auto sr = spectral_decompose(rho, tol);
  const auto ss = spectral_decompose(sigma, tol);
  const double cut_r = sr.cutoff(tol), cut_s = ss.cutoff(tol);
  // |<u_j|v_k>|^2 weights the pair of eigenvalues.
  const Eigen::MatrixXd overlap = (sr.eigenvectors.adjoint() * ss.eigenvectors).cwiseAbs2();
  double total = 0.0, leak = 0.0;
  for (Eigen::Index j = 0; j < sr.dim(); ++j) {
    const double lr = sr.eigenvalues(j);
    if (lr <= cut_r) continue;
    for (Eigen::Index k = 0; k < ss.dim(); ++k) {
      const double ls = ss.eigenvalues(k);
      if (ls > cut_s)
        total += std::pow(lr, 1.0 + s) * std::pow(ls, -s) * overlap(j, k);
      else
        leak += lr * overlap(j, k);
    }
  }
  if (leak > tol.psd) return kInfinity;
  return std::log(total);
}

double holevo_information(const FiniteDistribution& p, const CqChannel& w, const Tolerances& tol) {
  const Matrix wp = output_average(p, w).matrix();
  const Vector weights = p.aligned(w);
  double s = 0.0;
  for (int x = 0; x < w.size(); ++x)
    if (weights(x) > 0.0) s += weights(x) * relative_entropy(w.state(x), wp, tol);
  return s;
}

double holevo_information_entropy_form(const FiniteDistribution& p, const CqChannel& w, const Tolerances& tol) {
  const Vector weights = p.aligned(w);
  double s = von_neumann_entropy(output_average(p, w).matrix(), tol);
  for (int x = 0; x < w.size(); ++x)
    if (weights(x) > 0.0) s -= weights(x) * von_neumann_entropy(w.state(x), tol);
  return s;
}

double j_divergence(const FiniteDistribution& p, const Matrix& sigma, const CqChannel& w, const Tolerances& tol) {
  const Vector weights = p.aligned(w);
  double s = 0.0;
  for (int x = 0; x < w.size(); ++x)
    if (weights(x) > 0.0) s += weights(x) * relative_entropy(w.state(x), sigma, tol);
  return s;
}

double max_divergence(const CqChannel& w, const Matrix& sigma, const Tolerances& tol) {
  double m = -kInfinity;
  for (int x = 0; x < w.size(); ++x) m = std::max(m, relative_entropy(w.state(x), sigma, tol));
  return m;
}

CapacityResult holevo_capacity(const CqChannel& w, const SolverOptions& opts) {
  if (!(opts.tol > 0.0)) throw InputError("holevo_capacity: tol must be positive");
  const UpdateEngine engine(w, opts.tolerances);
  const Vector start = Vector::Constant(w.size(), 1.0 / w.size());
  const UpdateRun run = run_updates(engine, Vector::Zero(w.size()), 0.0, opts, start);
  return to_result(w, run);
}

MinMaxCenter minmax_center(const CqChannel& w, const SolverOptions& opts) {
  const CapacityResult cap = holevo_capacity(w, opts);
  MinMaxCenter out;
  out.center = cap.center;
  out.radius = -kInfinity;
  for (int x = 0; x < w.size(); ++x) {
    const double d = relative_entropy(w.state(x), cap.center, opts.tolerances);
    if (d > out.radius) {
      out.radius = d;
      out.argmax_input = x;
    }
  }
  return out;
}

namespace {

double expected(const Vector& p, const Vector& c) { return weighted_sum(p, c); }

// Certified gap of a feasible P for the constrained problem using the
// Lagrangian bound C(γ) <= max_x (D(W_x‖W_P) − μ c_x) + μ γ.
double constrained_gap(const Vector& d, const Vector& p, const Vector& c, double mu, double budget) {
  const Vector score = d - mu * c;
  return score.maxCoeff() + mu * budget - weighted_sum(p, d);
}

}  // namespace

CapacityResult cost_capacity(const CqChannel& w, const CostSpec& cost, const SolverOptions& opts) {
  const Vector c = cost.aligned(w);
  const double gamma = cost.budget;
  const double cmin = c.minCoeff(), cmax = c.maxCoeff();
  const double eps = 1e-12 * std::max(1.0, std::abs(gamma));
  if (cmin > gamma + eps) throw InputError("cost_capacity: infeasible budget (every input costs more than gamma)");

  const UpdateEngine engine(w, opts.tolerances);
  const Vector uniform = Vector::Constant(w.size(), 1.0 / w.size());
  auto finish = [&](CapacityResult r, const Vector& p, double mu, bool active) {
    r.constrained = true;
    r.expected_cost = expected(p, c);
    r.multiplier = mu;
    r.slackness = mu * (gamma - r.expected_cost);
    r.constraint_active = active;
    return r;
  };

  const UpdateRun free_run = run_updates(engine, c, 0.0, opts, uniform);
  if (gamma >= cmax || expected(free_run.p, c) <= gamma + eps) {
    CapacityResult r = to_result(w, free_run);
    return finish(r, free_run.p, 0.0, false);
  }

  if (gamma <= cmin + eps) {
    // Only the cheapest inputs may be used.
    std::vector<int> cheapest;
    for (int x = 0; x < w.size(); ++x)
      if (c(x) <= cmin + eps) cheapest.push_back(x);
    const CqChannel sub = w.subchannel(cheapest);
    const CapacityResult inner = holevo_capacity(sub, opts);
    Vector p = Vector::Zero(w.size());
    const Vector q = inner.optimizer.aligned(sub);
    for (std::size_t j = 0; j < cheapest.size(); ++j) p(cheapest[j]) = q(static_cast<Eigen::Index>(j));
    Matrix avg;
    const Vector d = engine.divergences(p, &avg);
    CapacityResult r;
    r.value = weighted_sum(p, d);
    r.optimizer = FiniteDistribution::over(w, p);
    r.center = avg;
    r.iterations = inner.iterations;
    r.converged = inner.converged;
    // Inputs costing more than γ carry no weight, so the certificate is the
    // sub-channel's own gap.
    r.duality_gap = inner.duality_gap;
    return finish(r, p, 0.0, true);
  }

  // E_{P_μ}[c] decreases in μ; bracket the multiplier where it crosses γ.
  const double initial_gap = engine.divergences(uniform).maxCoeff() - weighted_sum(uniform, engine.divergences(uniform));
  double mu_hi = std::max(initial_gap, 1e-3) / std::max(cmax - cmin, 1e-12);
  SolverOptions inner = opts;
  inner.tol = opts.tol * 0.1;
  UpdateRun hi = run_updates(engine, c, mu_hi, inner, uniform);
  int total_iterations = hi.iterations;
  for (int k = 0; k < 200 && expected(hi.p, c) > gamma; ++k) {
    mu_hi *= 2.0;
    hi = run_updates(engine, c, mu_hi, inner, uniform);
    total_iterations += hi.iterations;
  }
  double mu_lo = 0.0;
  UpdateRun lo = free_run;
  for (int k = 0; k < 200; ++k) {
    const double g_hi = constrained_gap(hi.divergences, hi.p, c, mu_hi, gamma);
    if (g_hi <= opts.tol || mu_hi - mu_lo <= 1e-14 * mu_hi) break;
    const double mu = 0.5 * (mu_lo + mu_hi);
    UpdateRun mid = run_updates(engine, c, mu, inner, uniform);
    total_iterations += mid.iterations;
    if (expected(mid.p, c) > gamma) {
      mu_lo = mu;
      lo = std::move(mid);
    } else {
      mu_hi = mu;
      hi = std::move(mid);
    }
  }

  // At a jump of E_{P_μ}[c] both bracket ends maximize the same Lagrangian,
  // and so does the mixture that meets the budget exactly.
  Vector best_p = hi.p;
  double best_mu = mu_hi;
  Vector best_d = hi.divergences;
  Matrix best_avg = hi.average;
  double best_gap = constrained_gap(hi.divergences, hi.p, c, mu_hi, gamma);
  const double e_lo = expected(lo.p, c), e_hi = expected(hi.p, c);
  if (e_lo > e_hi) {
    const double theta = (gamma - e_hi) / (e_lo - e_hi);
    Vector mix = theta * lo.p + (1.0 - theta) * hi.p;
    mix /= mix.sum();
    if (expected(mix, c) <= gamma + eps) {
      Matrix avg;
      const Vector d = engine.divergences(mix, &avg);
      const double g = constrained_gap(d, mix, c, mu_hi, gamma);
      if (g < best_gap) {
        best_p = mix;
        best_d = d;
        best_avg = avg;
        best_gap = g;
      }
    }
  }

  CapacityResult r;
  r.value = weighted_sum(best_p, best_d);
  r.optimizer = FiniteDistribution::over(w, best_p);
  r.center = best_avg;
  r.duality_gap = best_gap;
  r.iterations = total_iterations;
  r.converged = best_gap <= opts.tol;
  return finish(r, best_p, best_mu, true);
}

PairOptimum sup_over_budget(const Vector& g, const std::optional<Vector>& costs, double budget) {
  const Eigen::Index k = g.size();
  PairOptimum best;
  bool feasible = false;
  auto consider = [&](int i, int j, double lambda) {
    double v;
    if (lambda >= 1.0)
      v = g(i);
    else if (lambda <= 0.0)
      v = g(j);
    else
      v = lambda * g(i) + (1.0 - lambda) * g(j);
    if (!feasible || v > best.value) best = {v, i, j, std::clamp(lambda, 0.0, 1.0)};
    feasible = true;
  };
  if (!costs) {
    for (int i = 0; i < k; ++i) consider(i, i, 1.0);
    return best;
  }
  const Vector& c = *costs;
  const double eps = 1e-12 * std::max(1.0, std::abs(budget));
  for (int i = 0; i < k; ++i) {
    if (c(i) <= budget + eps) consider(i, i, 1.0);
    for (int j = i + 1; j < k; ++j) {
      // λ is the weight on i: λ (c_i − c_j) <= γ − c_j.
      const double d = c(i) - c(j), r = budget - c(j);
      double lo, hi;
      if (d == 0.0) {
        if (r < -eps) continue;
        lo = 0.0;
        hi = 1.0;
      } else if (d > 0.0) {
        if (r < -eps) continue;
        lo = 0.0;
        hi = std::min(1.0, std::max(0.0, r / d));
      } else {
        if (c(i) > budget + eps) continue;
        lo = std::max(0.0, std::min(1.0, r / d));
        hi = 1.0;
      }
      consider(i, j, lo);
      consider(i, j, hi);
    }
  }
  if (!feasible) throw InputError("no input distribution satisfies the budget");
  return best;
}

PairOptimum psi_exponent(const CqChannel& w, const Matrix& sigma, const std::optional<CostSpec>& cost, double s,
                         const Tolerances& tol) {
  if (s < 0.0 || s > 1.0) throw InputError("psi_exponent: s must lie in [0,1]");
  Vector g(w.size());
  for (int x = 0; x < w.size(); ++x) g(x) = log_trace_power_ratio(w.state(x), sigma, s, tol);
  std::optional<Vector> c;
  if (cost) c = cost->aligned(w);
  return sup_over_budget(g, c, cost ? cost->budget : 0.0);
}

PairOptimum sup_j_divergence(const CqChannel& w, const Matrix& sigma, const std::optional<CostSpec>& cost,
                             const Tolerances& tol) {
  Vector g(w.size());
  for (int x = 0; x < w.size(); ++x) g(x) = relative_entropy(w.state(x), sigma, tol);
  std::optional<Vector> c;
  if (cost) c = cost->aligned(w);
  return sup_over_budget(g, c, cost ? cost->budget : 0.0);
}

PhiBarObjective::PhiBarObjective(const FiniteDistribution& p, const CqChannel& w, const Tolerances& tol)
    : tol_(tol) {
  const Vector weights = p.aligned(w);
  int k = 0;
  for (int x = 0; x < w.size(); ++x) {
    if (weights(x) <= 0.0) continue;
    weights_.push_back(weights(x));
    states_.push_back(spectral_decompose(w.state(x), tol));
    ++k;
  }
  sigma_ = spectral_decompose(output_average(p, w).matrix(), tol);
  dimension_ = k * static_cast<int>(w.dim());
}

double PhiBarObjective::log_trace(double t) const {
  if (t == 0.0) return 0.0;
  const double cut_s = sigma_.cutoff(tol_);
  const Matrix half = apply_spectral(sigma_, [&](double l) { return l > cut_s ? std::pow(l, 0.5 * t) : 0.0; });
  double total = 0.0;
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const auto& sd = states_[i];
    const double cut = sd.cutoff(tol_);
    const Matrix rho = apply_spectral(sd, [&](double l) { return l > cut ? l : 0.0; });
    const Matrix inv = apply_spectral(sd, [&](double l) { return l > cut ? std::pow(l, -t) : 0.0; });
    const Matrix sandwich = half * inv * half;
    total += weights_[i] * trace_product(rho, sandwich);
  }
  return std::log(total);
}

PhiBar phi_bar(double a, const FiniteDistribution& p, const CqChannel& w, const Tolerances& tol) {
  const PhiBarObjective f(p, w, tol);
  constexpr int kScan = 100;
  PhiBar best{0.0, 0.0, f.dimension()};
  int best_k = 0;
  for (int k = 0; k <= kScan; ++k) {
    const double t = static_cast<double>(k) / kScan;
    const double v = f(a, t);
    if (v > best.value) {
      best.value = v;
      best.t_star = t;
      best_k = k;
    }
  }
  // Golden-section refinement around the best scan point.
  double lo = std::max(0, best_k - 1) / static_cast<double>(kScan);
  double hi = std::min(kScan, best_k + 1) / static_cast<double>(kScan);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
  double f1 = f(a, x1), f2 = f(a, x2);
  for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = f(a, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = f(a, x1);
    }
  }
  for (auto [t, v] : {std::pair{x1, f1}, std::pair{x2, f2}})
    if (v > best.value) {
      best.value = v;
      best.t_star = t;
    }
  return best;
}

ExponentReport phi_bar_curve(const std::vector<double>& a_grid, const FiniteDistribution& p, const CqChannel& w,
                             const Tolerances& tol) {
  ExponentReport r;
  r.kind = ExponentReport::Kind::PhiBar;
  for (double a : a_grid) {
    const PhiBar v = phi_bar(a, p, w, tol);
    r.grid.push_back(a);
    r.values.push_back(v.value);
    r.argmax.push_back(v.t_star);
    r.dimension = v.dimension;
  }
  return r;
}

ExponentReport psi_curve(const std::vector<double>& s_grid, const CqChannel& w, const Matrix& sigma,
                         const std::optional<CostSpec>& cost, const Tolerances& tol) {
  ExponentReport r;
  r.kind = ExponentReport::Kind::Psi;
  r.dimension = static_cast<int>(w.dim());
  for (double s : s_grid) {
    const PairOptimum v = psi_exponent(w, sigma, cost, s, tol);
    r.grid.push_back(s);
    r.values.push_back(v.value);
    r.argmax.push_back(v.lambda);
  }
  return r;
}

double sp_code_bound(int n, int d, double phi) {
  if (n < 0) throw InputError("sp_code_bound: negative blocklength");
  const double log_bound = std::log(6.0) + d * std::log1p(static_cast<double>(n)) - n * phi;
  return std::min(1.0, std::exp(log_bound));
}

}  // namespace cqlab
