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

#include "cqlab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace cqlab {
namespace {

// Tr[X E] where E is the spectral projection of `sd` selected by (cmp, t).
double trace_on_selection(const Matrix& x, const SpectralDecomposition<double>& sd, Comparator cmp, double t,
                          const Tolerances& tol) {
  const double band = tol.zero_band;
  double s = 0.0;
  for (Eigen::Index k = 0; k < sd.dim(); ++k) {
    if (!passes(sd.eigenvalues(k), cmp, t, band)) continue;
    const auto v = sd.eigenvectors.col(k);
    s += v.dot(x * v).real();
  }
  return s;
}

// The tail integrand for one sequence: Tr[W_x {W_x − e^{na} M cmp 0}].
double sequence_tail(const Matrix& x, const Matrix& reference, double scale, Comparator cmp, const Tolerances& tol) {
  const Matrix diff = x - scale * reference;
  const auto sd = spectral_decompose(diff, tol);
  return trace_on_selection(x, sd, cmp, 0.0, tol);
}

// Ascending eigenvalues of a tensor product from its factors' spectra.
std::vector<double> product_spectrum(const std::vector<const Vector*>& factors) {
  std::vector<double> values{1.0};
  for (const auto* f : factors) {
    std::vector<double> next;
    next.reserve(values.size() * static_cast<std::size_t>(f->size()));
    for (double v : values)
      for (Eigen::Index j = 0; j < f->size(); ++j) next.push_back(v * (*f)(j));
    values = std::move(next);
  }
  return values;
}

}  // namespace

std::string to_string(TailKind kind) {
  switch (kind) {
    case TailKind::Info:
      return "info";
    case TailKind::Divergence:
      return "divergence";
    case TailKind::EntropyOutput:
      return "entropy-output";
    case TailKind::EntropyConditional:
      return "entropy-conditional";
  }
  return "unknown";
}

TailKind tail_kind_from_string(const std::string& name) {
  for (TailKind k : {TailKind::Info, TailKind::Divergence, TailKind::EntropyOutput, TailKind::EntropyConditional})
    if (to_string(k) == name) return k;
  throw InputError("unknown tail kind '" + name + "'");
}

bool tail_increasing(TailKind kind) { return kind == TailKind::EntropyOutput; }

double info_tail(const FiniteDistribution& p, const CqChannel& w, int n, double a, Comparator cmp,
                 const TailOptions& opts) {
  tensor_dim(w.dim(), n, opts.limits);
  const Matrix wp = output_average(p, w).matrix();
  const Matrix reference = kron_power(wp, n);
  const double scale = std::exp(n * a);
  double total = 0.0;
  if (opts.use_type_classes) {
    for (const auto& tc : enumerate_type_classes(p, w, n, opts.limits)) {
      const Matrix x = sequence_state(w, tc.representative, opts.limits);
      total += tc.probability() * sequence_tail(x, reference, scale, cmp, opts.tol);
    }
  } else {
    for_each_sequence(
        p, w, n,
        [&](const Sequence& s, double prob) {
          const Matrix x = sequence_state(w, s, opts.limits);
          total += prob * sequence_tail(x, reference, scale, cmp, opts.tol);
        },
        opts.limits);
  }
  return total;
}

std::vector<InfoTailTerm> info_tail_terms(const FiniteDistribution& p, const CqChannel& w, int n, double a,
                                          const TailOptions& opts) {
  tensor_dim(w.dim(), n, opts.limits);
  const Matrix reference = kron_power(output_average(p, w).matrix(), n);
  const double scale = std::exp(n * a);
  std::vector<InfoTailTerm> out;
  for (const auto& tc : enumerate_type_classes(p, w, n, opts.limits)) {
    const Matrix x = sequence_state(w, tc.representative, opts.limits);
    const auto sd = spectral_decompose(Matrix(x - scale * reference), opts.tol);
    InfoTailTerm term;
    term.representative = tc.representative;
    term.mass = tc.probability();
    term.alpha = trace_on_selection(x, sd, Comparator::Greater, 0.0, opts.tol);
    term.beta = trace_on_selection(reference, sd, Comparator::Greater, 0.0, opts.tol);
    out.push_back(std::move(term));
  }
  return out;
}

double divergence_tail(const Matrix& rho, const Matrix& sigma, int n, double a, const TailOptions& opts) {
  if (rho.rows() != sigma.rows()) throw InputError("divergence_tail: dimension mismatch");
  tensor_dim(rho.rows(), n, opts.limits);
  const Matrix r = kron_power(rho, n);
  const Matrix s = kron_power(sigma, n);
  return sequence_tail(r, s, std::exp(n * a), Comparator::Greater, opts.tol);
}

double entropy_tail(const FiniteDistribution& p, const CqChannel& w, int n, double threshold, TailKind which,
                    const TailOptions& opts) {
  if (which != TailKind::EntropyOutput && which != TailKind::EntropyConditional)
    throw InputError("entropy_tail: kind must be entropy-output or entropy-conditional");
  const double level = std::exp(-n * threshold);
  const double band = opts.tol.zero_band;
  tensor_dim(w.dim(), n, opts.limits);

  if (which == TailKind::EntropyOutput) {
    const Matrix wp = output_average(p, w).matrix();
    if (!opts.use_type_classes) {
      const auto sd = spectral_decompose(Matrix(kron_power(wp, n)), opts.tol);
      return selected_eigenvalue_sum(sd, Comparator::GreaterEqual, level, opts.tol);
    }
    const Vector spec = spectral_decompose(wp, opts.tol).eigenvalues;
    std::vector<const Vector*> factors(static_cast<std::size_t>(n), &spec);
    double total = 0.0;
    for (double l : product_spectrum(factors))
      if (passes(l, Comparator::GreaterEqual, level, band)) total += l;
    return total;
  }

  double total = 0.0;
  if (!opts.use_type_classes) {
    for_each_sequence(
        p, w, n,
        [&](const Sequence& s, double prob) {
          const auto sd = spectral_decompose(Matrix(sequence_state(w, s, opts.limits)), opts.tol);
          total += prob * selected_eigenvalue_sum(sd, Comparator::LessEqual, level, opts.tol);
        },
        opts.limits);
    return total;
  }
  std::vector<Vector> spectra;
  for (int x = 0; x < w.size(); ++x) spectra.push_back(spectral_decompose(w.state(x), opts.tol).eigenvalues);
  for (const auto& tc : enumerate_type_classes(p, w, n, opts.limits)) {
    std::vector<const Vector*> factors;
    for (int x : tc.representative) factors.push_back(&spectra[static_cast<std::size_t>(x)]);
    double part = 0.0;
    for (double l : product_spectrum(factors))
      if (passes(l, Comparator::LessEqual, level, band)) part += l;
    total += tc.probability() * part;
  }
  return total;
}

TailBound ogawa_nagaoka_tail_bound(const Matrix& rho, const Matrix& sigma, int n, double a, double s,
                                   const TailOptions& opts) {
  if (s < 0.0 || s > 1.0) throw InputError("ogawa_nagaoka_tail_bound: s must lie in [0,1]");
  TailBound out;
  const double lt = log_trace_power_ratio(rho, sigma, s, opts.tol);
  out.bound = std::isinf(lt) ? kInfinity : std::exp(-n * (a * s - lt));
  out.exact = divergence_tail(rho, sigma, n, a, opts);
  return out;
}

TailFunction info_tail_function(const FiniteDistribution& p, const CqChannel& w, const TailOptions& opts) {
  return [p, w, opts](int n, double a) { return info_tail(p, w, n, a, Comparator::Greater, opts); };
}

TailFunction divergence_tail_function(const Matrix& rho, const Matrix& sigma, const TailOptions& opts) {
  return [rho, sigma, opts](int n, double a) { return divergence_tail(rho, sigma, n, a, opts); };
}

TailFunction entropy_tail_function(const FiniteDistribution& p, const CqChannel& w, TailKind which,
                                   const TailOptions& opts) {
  return [p, w, which, opts](int n, double t) { return entropy_tail(p, w, n, t, which, opts); };
}

Bracket bracket_at(const SweepCurve& curve, std::size_t n_index, double epsilon) {
  Bracket b;
  b.n = curve.ns.at(n_index);
  b.epsilon = epsilon;
  const bool increasing = tail_increasing(curve.kind);
  for (std::size_t j = 0; j < curve.thresholds.size(); ++j) {
    const double t = curve.thresholds[j];
    const double v = curve.tail(n_index, j);
    const bool low_side = increasing ? v < epsilon : v > 1.0 - epsilon;
    const bool high_side = increasing ? v > 1.0 - epsilon : v < epsilon;
    if (low_side) {
      b.has_lower = true;
      b.lower = t;
    }
    if (high_side && !b.has_upper) {
      b.has_upper = true;
      b.upper = t;
    }
  }
  return b;
}

SweepCurve sweep(TailKind kind, const TailFunction& tail, std::vector<int> ns, std::vector<double> thresholds,
                 double epsilon) {
  if (ns.empty() || thresholds.empty()) throw InputError("sweep: empty grid");
  std::sort(thresholds.begin(), thresholds.end());
  SweepCurve c;
  c.kind = kind;
  c.ns = std::move(ns);
  c.thresholds = std::move(thresholds);
  for (int n : c.ns)
    for (double t : c.thresholds) c.points.push_back({kind, n, t, tail(n, t)});
  const auto top = static_cast<std::size_t>(std::max_element(c.ns.begin(), c.ns.end()) - c.ns.begin());
  c.bracket = bracket_at(c, top, epsilon);
  c.metadata["kind"] = to_string(kind);
  return c;
}

void write_sweep_csv(std::ostream& out, const SweepCurve& curve) {
  out << "kind,n,threshold,tail\n";
  char buf[64];
  for (const auto& p : curve.points) {
    out << to_string(p.kind) << ',' << p.n << ',';
    std::snprintf(buf, sizeof buf, "%.17g", p.threshold);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", p.tail);
    out << buf << '\n';
  }
}

}  // namespace cqlab
