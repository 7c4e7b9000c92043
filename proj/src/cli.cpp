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

#include "cqlab/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>

#include "cqlab/capacity.hpp"
#include "cqlab/coding.hpp"
#include "cqlab/inequalities.hpp"
#include "cqlab/parallel.hpp"
#include "cqlab/presets.hpp"
#include "cqlab/spectrum.hpp"

namespace cqlab::cli {
namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw InputError(what + ": \"" + s + "\" is not a number");
}

int to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw InputError(what + ": \"" + s + "\" is not an integer");
}

// "lo:hi" (inclusive) or "a,b,c".
std::vector<int> parse_int_range(const std::string& text, const std::string& what) {
  std::vector<int> out;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 2) throw InputError(what + ": expected lo:hi");
    const int lo = to_int(parts[0], what), hi = to_int(parts[1], what);
    if (hi < lo) throw InputError(what + ": empty range");
    for (int k = lo; k <= hi; ++k) out.push_back(k);
  } else {
    for (const auto& p : split(text, ',')) out.push_back(to_int(p, what));
  }
  if (out.empty()) throw InputError(what + ": empty range");
  return out;
}

// "lo:hi:count" (inclusive, evenly spaced), "a,b,c" or a single value.
std::vector<double> parse_real_range(const std::string& text, const std::string& what) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw InputError(what + ": expected lo:hi:count");
    const double lo = to_double(parts[0], what), hi = to_double(parts[1], what);
    const int count = to_int(parts[2], what);
    if (count < 1) throw InputError(what + ": count must be >= 1");
    for (int k = 0; k < count; ++k)
      out.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1));
  } else {
    for (const auto& p : split(text, ',')) out.push_back(to_double(p, what));
  }
  if (out.empty()) throw InputError(what + ": empty range");
  return out;
}

// "uniform" or "label:weight,label:weight".
Json parse_distribution(const std::string& text) {
  if (text.empty() || text == "uniform") return "uniform";
  if (text == "optimal") return "optimal";
  Json j = Json::object();
  for (const auto& item : split(text, ',')) {
    const auto pos = item.rfind(':');
    if (pos == std::string::npos) throw InputError("--dist: expected label:weight, got \"" + item + "\"");
    j[item.substr(0, pos)] = to_double(item.substr(pos + 1), "--dist");
  }
  return j;
}

FiniteDistribution resolve_distribution(const Json& j, const ChannelFile& f) {
  if (j.is_string() && j.get<std::string>() == "uniform") return FiniteDistribution::uniform(f.channel.labels());
  if (j.is_string() && j.get<std::string>() == "optimal") {
    const auto cost = f.cost_spec();
    return cost ? cost_capacity(f.channel, *cost).optimizer : holevo_capacity(f.channel).optimizer;
  }
  std::vector<std::pair<std::string, double>> w;
  for (const auto& [k, v] : j.items()) w.emplace_back(k, v.get<double>());
  FiniteDistribution p(std::move(w));
  p.aligned(f.channel);
  return p;
}

Json distribution_json(const FiniteDistribution& p) {
  Json j = Json::object();
  for (const auto& [k, v] : p.entries()) j[k] = v;
  return j;
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> json_optional(const Json& params, const char* key) {
  if (!params.contains(key) || params[key].is_null()) return std::nullopt;
  return params[key].get<double>();
}

std::string fmt(double v, int precision = 10) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

std::string distribution_text(const FiniteDistribution& p) {
  std::string s;
  for (const auto& [k, v] : p.entries()) s += (s.empty() ? "" : "  ") + k + ": " + fmt(v);
  return s;
}

ChannelFile channel_of(const Json& params) {
  auto f = channel_file_from_json(params.at("channel"));
  if (auto gamma = json_optional(params, "budget")) {
    if (!f.costs) throw InputError("--budget needs a channel with per-input costs");
    f.budget = *gamma;
  }
  return f;
}

Execution capacity_command(const Json& params, std::ostream& info) {
  const auto f = channel_of(params);
  SolverOptions opts;
  opts.tol = params.at("tol").get<double>();
  opts.max_iter = params.at("max_iter").get<int>();
  const auto cost = f.cost_spec();
  const CapacityResult r = cost ? cost_capacity(f.channel, *cost, opts) : holevo_capacity(f.channel, opts);

  Execution ex;
  auto& o = ex.outputs;
  o["capacity_nats"] = r.value;
  o["capacity_bits"] = r.value / std::numbers::ln2;
  o["optimizer"] = distribution_json(r.optimizer);
  o["center"] = matrix_to_json(r.center);
  o["duality_gap"] = r.duality_gap;
  o["iterations"] = r.iterations;
  o["converged"] = r.converged;
  info << "capacity      " << fmt(r.value, 15) << " nats  (" << fmt(r.value / std::numbers::ln2, 15) << " bits)\n";
  info << "optimizer     " << distribution_text(r.optimizer) << "\n";
  info << "duality gap   " << fmt(r.duality_gap, 3) << "  (" << r.iterations << " iterations"
       << (r.converged ? "" : ", not converged") << ")\n";
  info << "center       ";
  for (Eigen::Index i = 0; i < r.center.rows(); ++i) {
    info << (i ? "             " : " ") << "[";
    for (Eigen::Index k = 0; k < r.center.cols(); ++k)
      info << (k ? ", " : "") << fmt(r.center(i, k).real(), 6)
           << (r.center(i, k).imag() != 0.0 ? (r.center(i, k).imag() > 0 ? "+" : "") + fmt(r.center(i, k).imag(), 6) + "i"
                                            : std::string());
    info << "]\n";
  }
  if (cost) {
    o["budget"] = cost->budget;
    o["expected_cost"] = r.expected_cost;
    o["multiplier"] = r.multiplier;
    o["slackness"] = r.slackness;
    o["constraint_active"] = r.constraint_active;
    info << "budget        " << fmt(cost->budget) << "  expected cost " << fmt(r.expected_cost) << "  constraint "
         << (r.constraint_active ? "active" : "inactive") << "  multiplier " << fmt(r.multiplier) << "\n";
  }
  return ex;
}

std::vector<TailKind> sweep_kinds(const std::string& kind) {
  if (kind == "entropy") return {TailKind::EntropyOutput, TailKind::EntropyConditional};
  return {tail_kind_from_string(kind)};
}

Execution sweep_command(const Json& params, std::ostream& info, std::ostream& data) {
  const auto f = channel_of(params);
  const auto p = resolve_distribution(params.at("dist"), f);
  const auto ns = params.at("ns").get<std::vector<int>>();
  const auto thresholds = params.at("thresholds").get<std::vector<double>>();
  const double eps = params.at("epsilon").get<double>();
  TailOptions opts;
  opts.use_type_classes = !params.at("naive").get<bool>();

  Execution ex;
  Json points = Json::array(), brackets = Json::array();
  std::ostringstream csv;
  bool header = true;
  for (TailKind kind : sweep_kinds(params.at("kind").get<std::string>())) {
    TailFunction fn;
    if (kind == TailKind::Info) {
      fn = info_tail_function(p, f.channel, opts);
    } else if (kind == TailKind::Divergence) {
      Matrix rho, sigma;
      if (params.contains("states") && !params["states"].is_null()) {
        const auto labels = params["states"].get<std::vector<std::string>>();
        rho = f.channel.state(f.channel.index_of(labels.at(0)));
        sigma = f.channel.state(f.channel.index_of(labels.at(1)));
      } else {
        std::tie(rho, sigma) = block_pair(p, f.channel, output_average(p, f.channel).matrix());
      }
      fn = divergence_tail_function(rho, sigma, opts);
    } else {
      fn = entropy_tail_function(p, f.channel, kind, opts);
    }
    const SweepCurve curve = sweep(kind, fn, ns, thresholds, eps);
    std::ostringstream one;
    write_sweep_csv(one, curve);
    std::string text = one.str();
    if (!header) text = text.substr(text.find('\n') + 1);
    header = false;
    csv << text;
    for (const auto& pt : curve.points) points.push_back(Json::array({to_string(pt.kind), pt.n, pt.threshold, pt.tail}));
    const auto& b = curve.bracket;
    Json bj;
    bj["kind"] = to_string(kind);
    bj["n"] = b.n;
    bj["epsilon"] = b.epsilon;
    bj["lower"] = b.has_lower ? Json(b.lower) : Json(nullptr);
    bj["upper"] = b.has_upper ? Json(b.upper) : Json(nullptr);
    bj["label"] = Bracket::kLabel;
    brackets.push_back(bj);
    info << to_string(kind) << " at n=" << b.n << " (eps " << fmt(b.epsilon) << "): lower "
         << (b.has_lower ? fmt(b.lower) : "none") << ", upper " << (b.has_upper ? fmt(b.upper) : "none") << "  ["
         << Bracket::kLabel << "]\n";
  }
  const auto csv_path = params.value("csv", std::string());
  if (csv_path.empty()) {
    data << csv.str();
  } else {
    std::ofstream file(csv_path);
    if (!file) throw InputError("cannot write " + csv_path);
    file << csv.str();
  }
  ex.outputs["points"] = std::move(points);
  ex.outputs["brackets"] = std::move(brackets);
  return ex;
}

Execution simulate_command(const Json& params, std::ostream& info) {
  const auto f = channel_of(params);
  ExperimentConfig cfg;
  cfg.p = resolve_distribution(params.at("dist"), f);
  cfg.n = params.at("n").get<int>();
  cfg.codebook_size = params.at("N").get<int>();
  cfg.a = params.at("a").get<double>();
  cfg.trials = params.at("trials").get<int>();
  cfg.seed = params.at("seed").get<std::uint64_t>();
  const auto decoder = params.at("decoder").get<std::string>();
  if (decoder == "lemma3") {
    cfg.decoder = DecoderKind::Lemma3;
  } else if (decoder == "hsw") {
    cfg.decoder = DecoderKind::Hsw;
  } else {
    throw InputError("--decoder must be lemma3 or hsw");
  }
  const auto b = json_optional(params, "b"), c = json_optional(params, "c");
  if (cfg.decoder == DecoderKind::Hsw && (!b || !c)) throw InputError("the hsw decoder needs --b and --c");
  cfg.b = b.value_or(0.0);
  cfg.c = c.value_or(0.0);
  cfg.bound_c = json_optional(params, "bound_c");
  cfg.cost = f.cost_spec();
  cfg.threads = params.at("threads").get<unsigned>();
  const RandomCodingReport r = random_coding_experiment(f.channel, cfg);

  Execution ex;
  auto& o = ex.outputs;
  o["errors"] = r.errors;
  o["mean"] = r.mean;
  o["min"] = r.min;
  o["standard_error"] = r.standard_error;
  o["bound_rhs"] = r.bound_rhs;
  o["mean_within_bound"] = r.mean_within_bound;
  o["witness_below_bound"] = r.witness_below_bound;

  Json bounds = Json::object();
  const DirectBound fixed = direct_bound_rhs(r.direct.tail, cfg.n, cfg.a, cfg.codebook_size, cfg.bound_c.value_or(1.0));
  bounds["lemma3"] = {{"c", fixed.c}, {"value", fixed.fixed_c}};
  bounds["lemma3_optimal_c"] = {{"c", r.direct.optimal_c}, {"value", r.direct.optimal}};
  if (b && c)
    bounds["hsw"] = hsw_random_bound(cfg.p, f.channel, cfg.n, *b, *c, cfg.codebook_size, cfg.limits);
  const double rate = std::log(static_cast<double>(cfg.codebook_size)) / cfg.n;
  const PhiBar phi = phi_bar(rate, cfg.p, f.channel);
  bounds["sp_exponent"] = {{"rate", rate},
                           {"phi_bar", phi.value},
                           {"value", sp_code_bound(cfg.n, phi.dimension, phi.value)}};
  o["bounds"] = bounds;
  if (cfg.cost) {
    o["budget_mass_exact"] = r.budget_mass_exact;
    o["budget_mass_estimate"] = r.budget_mass_estimate;
    o["budget_mass_stderr"] = r.budget_mass_stderr;
    o["attempts"] = r.attempts;
    o["accepted"] = r.accepted;
    o["all_codewords_within_budget"] = r.all_codewords_within_budget;
  }
  ex.failed = !r.mean_within_bound || !r.all_codewords_within_budget;

  info << "trials        " << r.trials << " (seed " << r.seed << ")\n";
  info << "mean error    " << fmt(r.mean) << " +/- " << fmt(r.standard_error, 3) << "  min " << fmt(r.min) << "\n";
  info << "bound         " << fmt(r.bound_rhs) << "  mean within 3 s.e.: " << (r.mean_within_bound ? "yes" : "no")
       << "\n";
  info << "bound table\n";
  info << "  lemma3 (c=" << fmt(fixed.c, 4) << ")        " << fmt(fixed.fixed_c) << "\n";
  info << "  lemma3 (optimal c=" << fmt(r.direct.optimal_c, 4) << ") " << fmt(r.direct.optimal)
       << (r.direct.vacuous() ? "  (vacuous)" : "") << "\n";
  if (bounds.contains("hsw")) info << "  hsw                  " << fmt(bounds["hsw"].get<double>()) << "\n";
  info << "  sp exponent          " << fmt(bounds["sp_exponent"]["value"].get<double>()) << "  (phi_bar "
       << fmt(phi.value) << " at rate " << fmt(rate) << ")\n";
  if (cfg.cost)
    info << "budget mass   exact " << fmt(r.budget_mass_exact) << "  estimate " << fmt(r.budget_mass_estimate) << " +/- "
         << fmt(r.budget_mass_stderr, 3) << "  all codewords within budget: "
         << (r.all_codewords_within_budget ? "yes" : "no") << "\n";
  const auto csv_path = params.value("csv", std::string());
  if (!csv_path.empty()) {
    std::ofstream file(csv_path);
    if (!file) throw InputError("cannot write " + csv_path);
    file << "trial,error\n";
    char buf[64];
    for (std::size_t t = 0; t < r.errors.size(); ++t) {
      std::snprintf(buf, sizeof buf, "%.17g", r.errors[t]);
      file << t << ',' << buf << '\n';
    }
  }
  return ex;
}

Execution exponent_command(const Json& params, std::ostream& info, std::ostream& data) {
  const auto f = channel_of(params);
  const auto mode = params.at("mode").get<std::string>();
  const auto grid = params.at("grid").get<std::vector<double>>();
  Execution ex;
  std::ostringstream csv;
  csv << std::setprecision(17);
  if (mode == "phi") {
    const auto p = resolve_distribution(params.at("dist"), f);
    const auto rep = phi_bar_curve(grid, p, f.channel);
    csv << "a,phi_bar,t_star\n";
    for (std::size_t k = 0; k < rep.grid.size(); ++k)
      csv << rep.grid[k] << ',' << rep.values[k] << ',' << rep.argmax[k] << '\n';
    ex.outputs["kind"] = "phi_bar";
    ex.outputs["a"] = rep.grid;
    ex.outputs["values"] = rep.values;
    ex.outputs["t_star"] = rep.argmax;
    ex.outputs["dimension"] = rep.dimension;
    info << "phi_bar over " << rep.grid.size() << " values of a, holevo information "
         << fmt(holevo_information(p, f.channel)) << " nats\n";
  } else if (mode == "psi") {
    const auto cost = f.cost_spec();
    const auto sigma_spec = params.at("sigma").get<std::string>();
    Matrix sigma;
    if (sigma_spec == "auto") {
      sigma = cost ? cost_capacity(f.channel, *cost).center : holevo_capacity(f.channel).center;
    } else {
      sigma = f.channel.state(f.channel.index_of(sigma_spec));
    }
    const auto rep = psi_curve(grid, f.channel, sigma, cost);
    const auto slope = sup_j_divergence(f.channel, sigma, cost);
    csv << "s,psi,lambda\n";
    for (std::size_t k = 0; k < rep.grid.size(); ++k)
      csv << rep.grid[k] << ',' << rep.values[k] << ',' << rep.argmax[k] << '\n';
    ex.outputs["kind"] = "psi";
    ex.outputs["s"] = rep.grid;
    ex.outputs["values"] = rep.values;
    ex.outputs["lambda"] = rep.argmax;
    ex.outputs["sigma"] = matrix_to_json(sigma);
    ex.outputs["sup_j"] = slope.value;
    info << "psi over " << rep.grid.size() << " values of s, slope at 0 (sup J) " << fmt(slope.value) << " nats\n";
  } else {
    throw InputError("exponent: give --a-range or --s-range");
  }
  const auto csv_path = params.value("csv", std::string());
  if (csv_path.empty()) {
    data << csv.str();
  } else {
    std::ofstream file(csv_path);
    if (!file) throw InputError("cannot write " + csv_path);
    file << csv.str();
  }
  return ex;
}

Execution verify_command(const Json& params, std::ostream& info) {
  SuiteConfig cfg;
  const auto suite = params.at("suite").get<std::string>();
  cfg.ids = suite == "all" ? all_inequalities() : std::vector<InequalityId>{inequality_from_string(suite)};
  cfg.count = params.at("count").get<std::size_t>();
  cfg.adversarial_count = params.at("adversarial").get<std::size_t>();
  cfg.dims.clear();
  for (int d : params.at("dims").get<std::vector<int>>()) cfg.dims.push_back(d);
  cfg.seed = params.at("seed").get<std::uint64_t>();
  cfg.threads = params.at("threads").get<unsigned>();
  cfg.fault = params.at("fault").get<double>();
  cfg.witness_dir = params.at("witness_dir").get<std::string>();
  const SuiteReport rep = run_suite(cfg);

  Execution ex;
  Json stats = Json::array();
  if (cfg.count + cfg.adversarial_count == 0) info << "warning: no instances requested; passing vacuously\n";
  for (const auto& s : rep.stats) {
    Json j;
    j["inequality"] = to_string(s.id);
    j["instances"] = s.instances;
    j["adversarial"] = s.adversarial;
    j["min_margin"] = s.min_margin;
    j["failures"] = s.failures;
    Json w = Json::array();
    for (const auto& p : s.witnesses) w.push_back(p.string());
    j["witnesses"] = w;
    stats.push_back(j);
    info << std::left << std::setw(16) << to_string(s.id) << std::right << std::setw(7) << s.instances << " random + "
         << s.adversarial << " adversarial  min margin " << fmt(s.min_margin, 4) << "  "
         << (s.passed() ? "PASS" : "FAIL (" + std::to_string(s.failures) + " failures)") << "\n";
    for (const auto& p : s.witnesses) info << "  witness " << p.string() << "\n";
  }
  ex.outputs["passed"] = rep.passed();
  ex.outputs["suites"] = stats;
  ex.failed = !rep.passed();
  return ex;
}

struct Common {
  std::string channel;
  std::string preset;
  std::string report;
  std::optional<double> budget;
};

void add_channel_options(CLI::App* cmd, Common& c) {
  cmd->add_option("channel", c.channel, "channel file (JSON)");
  cmd->add_option("--preset", c.preset, "bundled channel: orthogonal-pure, identical-states, bsc[:p], "
                                        "two-pure-overlap[:theta], trine");
  cmd->add_option("--report", c.report, "write the run record to this file");
}

Json load_channel_json(const Common& c) {
  if (!c.channel.empty() && !c.preset.empty()) throw InputError("give a channel file or --preset, not both");
  if (!c.preset.empty()) return channel_file_to_json(make_preset(c.preset).file);
  if (c.channel.empty()) throw InputError("a channel file or --preset is required");
  return channel_file_to_json(load_channel_file(c.channel));
}

int exit_for(const Execution& ex) { return ex.failed ? kVerificationFailed : kOk; }

}  // namespace

Execution execute(const std::string& command, const Json& params, std::ostream& info, std::ostream& data) {
  if (command == "capacity") return capacity_command(params, info);
  if (command == "sweep") return sweep_command(params, info, data);
  if (command == "simulate") return simulate_command(params, info);
  if (command == "exponent") return exponent_command(params, info, data);
  if (command == "verify") return verify_command(params, info);
  throw InputError("unknown command \"" + command + "\"");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cqlab: finite-blocklength laboratory for classical-quantum channels", "cqlab"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 0;
  std::uint64_t seed = 0;
  app.add_option("--threads", threads, "worker cap (default: CQLAB_THREADS or 1)");
  app.add_option("--seed", seed, "random seed");
  app.set_version_flag("--version", kVersion);

  Common common;

  auto* cap = app.add_subcommand("capacity", "Holevo capacity, optionally under a cost budget");
  add_channel_options(cap, common);
  double tol = 1e-7;
  int max_iter = 100000;
  cap->add_option("--tol", tol, "duality-gap tolerance (nats)");
  cap->add_option("--max-iter", max_iter, "iteration cap");
  cap->add_option("--budget", common.budget, "per-symbol cost budget");

  auto* sw = app.add_subcommand("sweep", "information-spectrum tails over a grid of n and thresholds");
  add_channel_options(sw, common);
  std::string kind = "info", n_range = "1:4", a_range, dist = "uniform", csv;
  std::vector<std::string> states;
  double epsilon = 0.05;
  bool naive = false;
  sw->add_option("--kind", kind, "info, divergence, entropy, entropy-output or entropy-conditional");
  sw->add_option("--n-range", n_range, "lo:hi or a,b,c");
  sw->add_option("--a-range", a_range, "lo:hi:count or a,b,c")->required();
  sw->add_option("--dist", dist, "uniform, optimal or label:weight,...");
  sw->add_option("--states", states, "input labels of rho and sigma for --kind divergence")->expected(2);
  sw->add_option("--epsilon", epsilon, "bracket level");
  sw->add_flag("--naive", naive, "enumerate every sequence instead of type classes");
  sw->add_option("--csv", csv, "write the CSV here instead of stdout");

  auto* sim = app.add_subcommand("simulate", "random-coding experiment against the analytic bounds");
  add_channel_options(sim, common);
  int n = 1, codebook = 2, trials = 200;
  double a = 0.0;
  std::optional<double> b, c, bound_c;
  std::string decoder = "lemma3", sim_dist = "uniform";
  sim->add_option("--n", n, "blocklength")->required();
  sim->add_option("--N", codebook, "codebook size")->required();
  sim->add_option("--a", a, "threshold a")->required();
  sim->add_option("--trials", trials, "number of random codes");
  sim->add_option("--decoder", decoder, "lemma3 or hsw");
  sim->add_option("--b", b, "hsw threshold b");
  sim->add_option("--c", c, "hsw threshold c");
  sim->add_option("--bound-c", bound_c, "evaluate the lemma3 bound at this c (default: optimal)");
  sim->add_option("--budget", common.budget, "per-symbol cost budget");
  sim->add_option("--dist", sim_dist, "uniform, optimal or label:weight,...");
  std::string sim_csv;
  sim->add_option("--csv", sim_csv, "write per-trial errors to this file");

  auto* ver = app.add_subcommand("verify", "randomized and adversarial operator-inequality suites");
  std::string suite = "all", dims = "2:8", witness_dir = "witnesses", ver_report;
  std::size_t count = 10000;
  long long adversarial = -1;
  double fault = 1.0;
  ver->add_option("--suite", suite, "all, lemma2, neyman-pearson, ogawa-nagaoka, tau-nu or cross-term");
  ver->add_option("--count", count, "random instances per inequality");
  ver->add_option("--adversarial", adversarial, "adversarial instances per inequality (default 100, 0 with --count 0)");
  ver->add_option("--dims", dims, "dimensions, lo:hi or a,b,c");
  ver->add_option("--witness-dir", witness_dir, "directory for failing instances");
  ver->add_option("--inject-fault", fault, "test mode: scale the key inequality's right-hand side");
  ver->add_option("--report", ver_report, "write the run record to this file");

  auto* ex = app.add_subcommand("exponent", "phi_bar(a) or psi(s) on a grid, as CSV");
  add_channel_options(ex, common);
  std::string ex_a, ex_s, ex_dist = "uniform", sigma = "auto", ex_csv;
  ex->add_option("--a-range", ex_a, "grid of a for phi_bar");
  ex->add_option("--s-range", ex_s, "grid of s for psi");
  ex->add_option("--dist", ex_dist, "input distribution for phi_bar");
  ex->add_option("--budget", common.budget, "per-symbol cost budget for psi");
  ex->add_option("--sigma", sigma, "auto (capacity center) or an input label");
  ex->add_option("--csv", ex_csv, "write the CSV here instead of stdout");

  auto* pre = app.add_subcommand("preset", "print a bundled channel file");
  std::string preset_name, preset_out;
  bool list = false;
  pre->add_option("name", preset_name, "preset name, optionally name:param");
  pre->add_option("-o,--output", preset_out, "write to this file");
  pre->add_flag("--list", list, "list presets");

  auto* rep = app.add_subcommand("replay", "re-run a run record and compare outputs bit for bit");
  std::string record_path;
  rep->add_option("record", record_path, "run record")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const unsigned worker_cap = threads ? threads : default_threads();
  try {
    if (pre->parsed()) {
      if (list || preset_name.empty()) {
        for (const auto& name : preset_names()) {
          const auto p = make_preset(name);
          out << std::left << std::setw(18) << name << p.description << "\n";
        }
        return kOk;
      }
      const auto text = channel_file_to_json(make_preset(preset_name).file).dump(2);
      if (preset_out.empty()) {
        out << text << "\n";
      } else {
        write_json_file(channel_file_to_json(make_preset(preset_name).file), preset_out);
      }
      return kOk;
    }

    if (rep->parsed()) {
      const RunRecord stored = RunRecord::from_json(read_json_file(record_path));
      std::ostringstream sink_info, sink_data;
      Json params = stored.params;
      if (params.contains("csv")) params["csv"] = "";
      const Execution again = execute(stored.command, params, sink_info, sink_data);
      if (again.outputs.dump() == stored.outputs.dump()) {
        out << "replay identical: " << stored.command << " (seed " << stored.seed << ")\n";
        return kOk;
      }
      const Json patch = Json::diff(stored.outputs, again.outputs);
      err << "replay differs: " << patch.size() << " changed field(s)";
      if (!patch.empty()) err << ", first at " << patch[0].value("path", std::string("?"));
      err << "\n";
      return kVerificationFailed;
    }

    std::string command;
    Json params;
    std::string report_path = common.report;
    bool csv_to_stdout = false;
    if (cap->parsed()) {
      command = "capacity";
      params["channel"] = load_channel_json(common);
      params["budget"] = optional_json(common.budget);
      params["tol"] = tol;
      params["max_iter"] = max_iter;
    } else if (sw->parsed()) {
      command = "sweep";
      params["channel"] = load_channel_json(common);
      params["kind"] = kind;
      params["ns"] = parse_int_range(n_range, "--n-range");
      params["thresholds"] = parse_real_range(a_range, "--a-range");
      params["dist"] = parse_distribution(dist);
      params["states"] = states.empty() ? Json(nullptr) : Json(states);
      params["epsilon"] = epsilon;
      params["naive"] = naive;
      params["csv"] = csv;
      sweep_kinds(kind);
      csv_to_stdout = csv.empty();
    } else if (sim->parsed()) {
      command = "simulate";
      params["channel"] = load_channel_json(common);
      params["budget"] = optional_json(common.budget);
      params["dist"] = parse_distribution(sim_dist);
      params["n"] = n;
      params["N"] = codebook;
      params["a"] = a;
      params["trials"] = trials;
      params["seed"] = seed;
      params["decoder"] = decoder;
      params["b"] = optional_json(b);
      params["c"] = optional_json(c);
      params["bound_c"] = optional_json(bound_c);
      params["threads"] = worker_cap;
      params["csv"] = sim_csv;
    } else if (ver->parsed()) {
      command = "verify";
      report_path = ver_report;
      params["suite"] = suite;
      params["count"] = count;
      params["adversarial"] = adversarial >= 0 ? static_cast<std::size_t>(adversarial) : (count == 0 ? 0 : 100);
      params["dims"] = parse_int_range(dims, "--dims");
      params["seed"] = seed;
      params["threads"] = worker_cap;
      params["fault"] = fault;
      params["witness_dir"] = witness_dir;
    } else if (ex->parsed()) {
      command = "exponent";
      params["channel"] = load_channel_json(common);
      params["budget"] = optional_json(common.budget);
      if (!ex_a.empty() == !ex_s.empty()) throw InputError("exponent: give exactly one of --a-range and --s-range");
      params["mode"] = ex_a.empty() ? "psi" : "phi";
      params["grid"] = ex_a.empty() ? parse_real_range(ex_s, "--s-range") : parse_real_range(ex_a, "--a-range");
      params["dist"] = parse_distribution(ex_dist);
      params["sigma"] = sigma;
      params["csv"] = ex_csv;
      csv_to_stdout = ex_csv.empty();
    }

    const auto start = std::chrono::steady_clock::now();
    const Execution result = execute(command, params, csv_to_stdout ? err : out, out);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!report_path.empty()) {
      RunRecord record;
      record.command = command;
      record.params = params;
      record.seed = seed;
      record.wall_time = wall;
      record.outputs = result.outputs;
      write_json_file(record.to_json(), report_path);
    }
    return exit_for(result);
  } catch (const ResourceError& e) {
    err << "resource bound exceeded: " << e.what() << "\n";
    return kResource;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace cqlab::cli
