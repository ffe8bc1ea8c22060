// simplygen: exact tables, sampling, predictions and verification suites for
// simply generated trees and balls-in-boxes.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "simplygen/report.hpp"
#include "simplygen/sampling.hpp"
#include "simplygen/verify.hpp"
#include "simplygen/weight_file.hpp"

using namespace simplygen;
using nlohmann::json;

namespace {

struct Family {
  std::string name;
  std::string weights;
  std::string beta, p, a, d, alpha;

  bool given() const { return !name.empty() || !weights.empty(); }

  WeightFile load() const {
    if (!weights.empty()) {
      if (!name.empty()) throw Error(ErrorCode::invalid_argument, "give --family or --weights, not both");
      return load_weight_file(weights);
    }
    if (name.empty()) throw Error(ErrorCode::invalid_argument, "needs --family or --weights");
    std::string raw;
    if (name == "powerlaw") raw = beta;
    else if (name == "geometric") raw = p;
    else if (name == "poisson") raw = a;
    else if (name == "dary") raw = d;
    else if (name == "factorial_pow") raw = alpha;
    std::optional<Param> param;
    if (!raw.empty()) param = Param::parse(raw);
    return WeightFile{WeightSpec::builtin(name, param), std::nullopt};
  }

  void attach(CLI::App* app) {
    app->add_option("--family", name, "builtin weight family");
    app->add_option("--weights", weights, "weight file ('rho = ...' header, then 'k w_k' lines)");
    app->add_option("--beta", beta, "powerlaw exponent");
    app->add_option("--p", p, "geometric parameter");
    app->add_option("--a", a, "poisson parameter");
    app->add_option("--d", d, "dary arity");
    app->add_option("--alpha", alpha, "factorial_pow exponent");
  }
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string num_short(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

long long resolve_m(std::optional<long long> m, std::optional<double> lambda, long long n, long long fallback) {
  if (m) return *m;
  if (lambda) return static_cast<long long>(std::llround(*lambda * static_cast<double>(n)));
  return fallback;
}

// ---- analyze

struct AnalyzeArgs {
  Family fam;
  std::optional<double> lambda;
  int cutoff = 20;
  std::string format = "text";
};

int cmd_analyze(const AnalyzeArgs& a) {
  const auto wf = a.fam.load();
  const WeightSpec& spec = wf.spec;
  const double lambda = a.lambda.value_or(1.0);
  const auto law = canonical_law(spec, lambda);
  std::optional<Classification> cls;
  std::string case_note;
  try {
    cls = classify(spec);
  } catch (const Error& e) {
    case_note = e.what();
  }
  std::vector<double> pis;
  const long long top = spec.finite_support() ? std::min<long long>(spec.omega(), a.cutoff) : a.cutoff;
  for (long long k = 0; k <= top; ++k) pis.push_back(law.pi(k));

  if (a.format == "json") {
    json j{{"family", std::string(family_name(spec.family()))},
           {"lambda", lambda},
           {"rho", finite_or_null(spec.rho())},
           {"span", spec.span()},
           {"tau", finite_or_null(law.tau)},
           {"phi_tau", finite_or_null(law.phi_tau)},
           {"mu", finite_or_null(law.mu)},
           {"nu", finite_or_null(law.nu)},
           {"sigma2", finite_or_null(law.sigma2)},
           {"rho_z", finite_or_null(law.rho_z)},
           {"regime", std::string(to_string(law.regime))},
           {"pi", pis}};
    if (std::isinf(spec.rho())) j["rho"] = "inf";
    if (std::isinf(law.nu)) j["nu"] = "inf";
    if (std::isinf(law.sigma2)) j["sigma2"] = "inf";
    if (cls) j["case"] = cls->label();
    else j["case_note"] = case_note;
    std::cout << j.dump() << "\n";
    return 0;
  }
  std::printf("family   %s\n", std::string(family_name(spec.family())).c_str());
  std::printf("lambda   %s\n", num_short(lambda).c_str());
  std::printf("rho      %s\n", num_short(spec.rho()).c_str());
  std::printf("span     %lld\n", static_cast<long long>(spec.span()));
  std::printf("tau      %s\n", num_short(law.tau).c_str());
  std::printf("Phi(tau) %s\n", num_short(law.phi_tau).c_str());
  std::printf("mu       %s\n", num_short(law.mu).c_str());
  std::printf("nu       %s\n", num_short(law.nu).c_str());
  std::printf("sigma2   %s\n", num_short(law.sigma2).c_str());
  std::printf("rho_Z    %s\n", num_short(law.rho_z).c_str());
  std::printf("regime   %s\n", std::string(to_string(law.regime)).c_str());
  if (cls) std::printf("case     %s\n", cls->label().c_str());
  else std::printf("case     n/a (%s)\n", case_note.c_str());
  std::printf("%6s %s\n", "k", "pi_k");
  for (std::size_t k = 0; k < pis.size(); ++k) std::printf("%6zu %.10g\n", k, pis[k]);
  return 0;
}

// ---- ztable

struct ZtableArgs {
  Family fam;
  std::optional<long long> zn, m, n, m_max, n_max;
  bool log_mode = false;
};

struct ZCell {
  std::string exact;
  double log_value = -kInf;
};

std::string z_text(const ZCell& c) {
  if (!c.exact.empty()) return c.exact;
  if (c.log_value == -kInf) return "0";
  if (c.log_value > 700.0) return "";
  return num(std::exp(c.log_value));
}

ZCell cell_of(const TableValue& v) {
  ZCell c;
  c.log_value = v.log_value;
  if (v.exact) c.exact = to_string(*v.exact);
  return c;
}

int cmd_ztable(const ZtableArgs& a) {
  const auto wf = a.fam.load();
  const WeightSpec& spec = wf.spec;
  const TableMode mode = (!a.log_mode && spec.has_exact_weights()) ? TableMode::rational : TableMode::log;
  auto note = [](const ZCell& c) { return c.log_value == -kInf ? std::string("infeasible") : std::string(); };
  if (a.zn) {
    if (*a.zn < 1) throw Error(ErrorCode::invalid_argument, "--zn needs N >= 1");
    require_tree_mode(spec);
    const auto table = build_table(spec, *a.zn - 1, *a.zn, mode);
    std::cout << "n,z,log_z,note\n";
    for (long long n = 1; n <= *a.zn; ++n) {
      const ZCell c = cell_of(z_tree(table, n));
      std::cout << n << "," << csv_field(z_text(c)) << "," << num(c.log_value) << "," << csv_field(note(c)) << "\n";
    }
    return 0;
  }
  if (a.m && a.n && !a.m_max && !a.n_max) {
    ZCell c;
    if (mode == TableMode::rational && (*a.m + 1) * (*a.n + 1) <= 250000) {
      c = cell_of(build_table(spec, *a.m, *a.n, mode).z(*a.m, *a.n));
    } else {
      c.log_value = *a.n == 0 ? (*a.m == 0 ? 0.0 : -kInf) : log_z_single(spec, *a.m, *a.n);
    }
    std::cout << "m,n,z,log_z,note\n"
              << *a.m << "," << *a.n << "," << csv_field(z_text(c)) << "," << num(c.log_value) << ","
              << csv_field(note(c)) << "\n";
    return 0;
  }
  const long long m_max = a.m_max.value_or(a.m.value_or(10));
  const long long n_max = a.n_max.value_or(a.n.value_or(10));
  const auto table = build_table(spec, m_max, n_max, mode);
  std::cout << "m,n,z,log_z,note\n";
  for (long long n = 0; n <= n_max; ++n) {
    for (long long m = 0; m <= m_max; ++m) {
      const ZCell c = cell_of(table.z(m, n));
      std::cout << m << "," << n << "," << csv_field(z_text(c)) << "," << num(c.log_value) << "," << csv_field(note(c))
                << "\n";
    }
  }
  return 0;
}

// ---- sample

struct SampleArgs {
  Family fam;
  std::optional<long long> m, n;
  std::optional<double> lambda;
  std::optional<std::uint64_t> seed;
  std::size_t count = 1;
  unsigned workers = 1;
  std::string strategy = "auto";
  std::size_t radius = 2;
  bool full = false;
};

constexpr std::size_t kInlineLimit = 1000;

std::vector<long long> top3(std::vector<long long> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  v.resize(std::min<std::size_t>(v.size(), 3));
  return v;
}

template <class Fn>
void emit_replicates(const SampleArgs& a, Fn draw) {
  const auto lines = run_replicates(*a.seed, 0, a.count, a.workers, [&](Rng& rng, std::size_t i) {
    json j = draw(rng);
    j["replicate"] = i;
    return j.dump();
  });
  for (const auto& line : lines) std::cout << line << "\n";
}

int cmd_sample_tree(const SampleArgs& a) {
  const auto wf = a.fam.load();
  if (!a.n) throw Error(ErrorCode::invalid_argument, "sample tree needs --n");
  const TreeSampler sampler(wf.spec, *a.n, parse_strategy(a.strategy));
  const std::string strategy(to_string(sampler.strategy()));
  emit_replicates(a, [&](Rng& rng) {
    const OrderedTree t = sampler.sample(rng);
    const TreeStats s = stats(t);
    json j{{"n", t.size()},
           {"strategy", strategy},
           {"root_degree", s.root_degree},
           {"height", s.height},
           {"width", s.width},
           {"largest", {s.largest(1), s.largest(2), s.largest(3)}},
           {"degree_counts", s.degree_counts}};
    if (a.full || t.size() <= kInlineLimit) j["degrees"] = format_degrees(t.degrees());
    return j;
  });
  return 0;
}

int cmd_sample_alloc(const SampleArgs& a) {
  const auto wf = a.fam.load();
  if (!a.n) throw Error(ErrorCode::invalid_argument, "sample alloc needs --n");
  if (!a.m && !a.lambda) throw Error(ErrorCode::invalid_argument, "sample alloc needs --m or --lambda");
  const long long m = resolve_m(a.m, a.lambda, *a.n, 0);
  const AllocSampler sampler(wf.spec, m, *a.n, parse_strategy(a.strategy));
  const std::string strategy(to_string(sampler.strategy()));
  emit_replicates(a, [&](Rng& rng) {
    const Allocation al = sampler.sample(rng);
    std::vector<long long> y(al.y.begin(), al.y.end());
    json j{{"m", al.m}, {"n", y.size()}, {"strategy", strategy}, {"largest", top3(y)}, {"counts", al.counts()}};
    if (a.full || y.size() <= kInlineLimit) j["y"] = y;
    return j;
  });
  return 0;
}

int cmd_sample_forest(const SampleArgs& a) {
  const auto wf = a.fam.load();
  if (!a.n) throw Error(ErrorCode::invalid_argument, "sample forest needs --n (number of trees)");
  if (!a.m && !a.lambda) throw Error(ErrorCode::invalid_argument, "sample forest needs --m or --lambda");
  const long long m = resolve_m(a.m, a.lambda, *a.n, 0);
  const ForestSampler sampler(wf.spec, m, *a.n, parse_strategy(a.strategy));
  emit_replicates(a, [&](Rng& rng) {
    const auto trees = sampler.sample(rng);
    std::vector<long long> sizes;
    sizes.reserve(trees.size());
    long long total = 0;
    for (const auto& t : trees) {
      sizes.push_back(static_cast<long long>(t.size()));
      total += static_cast<long long>(t.size());
    }
    json j{{"m", total}, {"n", sizes.size()}, {"largest", top3(sizes)}};
    if (a.full || sizes.size() <= kInlineLimit) j["sizes"] = sizes;
    if (a.full) {
      std::vector<std::string> shapes;
      for (const auto& t : trees) shapes.push_back(format_degrees(t.degrees()));
      j["trees"] = shapes;
    }
    return j;
  });
  return 0;
}

int cmd_sample_kesten(const SampleArgs& a) {
  const auto wf = a.fam.load();
  require_tree_mode(wf.spec);
  const auto ks = KestenSpec::from_law(canonical_law(wf.spec, 1.0));
  emit_replicates(a, [&](Rng& rng) {
    const BallSample b = sample_kesten_ball(ks, a.radius, rng);
    json j{{"radius", a.radius},
           {"size", b.tree.size()},
           {"exploded", b.exploded},
           {"budget_exceeded", b.budget_exceeded},
           {"ball", format_degrees(b.tree.degrees())}};
    if (b.exploded) j["explosion_depth"] = b.explosion_depth;
    return j;
  });
  return 0;
}

// ---- predict

struct PredictArgs {
  Family fam;
  std::optional<long long> m, n;
  std::optional<double> lambda;
  std::string mode = "tree";
  std::string kind = "rooted";
  std::string format = "text";
};

void print_prediction(const Prediction& p, const std::string& format) {
  if (format == "json") {
    std::cout << prediction_json(p).dump() << "\n";
    return;
  }
  std::cout << p.quantity << " [" << p.tag << "]\n";
  if (p.declined) {
    std::cout << "  declined: " << p.reason << "\n";
    return;
  }
  for (const auto& c : p.conditions) std::cout << "  condition: " << c << "\n";
  for (const auto& [k, v] : p.values) std::printf("  %-26s %s\n", k.c_str(), num_short(v).c_str());
  for (const auto& [k, why] : p.skipped) std::cout << "  skipped " << k << ": " << why << "\n";
  for (const auto& [name, pmf] : p.laws) {
    std::cout << "  law " << name << ":";
    for (std::size_t k = 0; k < pmf.p.size() && k < 10; ++k) std::cout << " " << num_short(pmf.p[k]);
    std::cout << (pmf.p.size() > 10 ? " ...\n" : "\n");
  }
  if (p.cdf) {
    const long long lo = cdf_quantile(p.cdf, 0.01, 0, 1LL << 40);
    const long long hi = std::max(lo, cdf_quantile(p.cdf, 0.99, lo, 1LL << 40));
    std::cout << "  P(" << p.cdf_of << " <= k):\n";
    const long long step = std::max<long long>(1, (hi - lo) / 20);
    for (long long k = lo; k <= hi; k += step) std::printf("    %8lld %.6f\n", k, p.cdf(k));
  }
}

// (m, n) for a finite-size prediction: tree mode forces m = n - 1.
std::pair<long long, long long> sizes_for(const PredictArgs& a, bool tree) {
  if (!a.n) throw Error(ErrorCode::invalid_argument, "needs --n");
  const long long n = *a.n;
  if (tree) return {n - 1, n};
  if (!a.m && !a.lambda) throw Error(ErrorCode::invalid_argument, "alloc mode needs --m or --lambda");
  return {resolve_m(a.m, a.lambda, n, 0), n};
}

int cmd_predict(const std::string& what, const PredictArgs& a) {
  if (what == "forest") {
    const ForestKind kind = parse_forest_kind(a.kind);
    if (!a.lambda) throw Error(ErrorCode::invalid_argument, "predict forest needs --lambda");
    if (!a.n) throw Error(ErrorCode::invalid_argument, "predict forest needs --n");
    WeightSpec spec = kind == ForestKind::unrooted ? WeightSpec::unrooted_forest() : WeightSpec::inv_factorial();
    if (kind == ForestKind::general) spec = a.fam.load().spec;
    print_prediction(predict_forest_max(kind, spec, *a.lambda, *a.n), a.format);
    return 0;
  }
  const auto wf = a.fam.load();
  const WeightSpec& spec = wf.spec;
  if (a.mode != "tree" && a.mode != "alloc") throw Error(ErrorCode::invalid_argument, "--mode must be tree or alloc");
  const bool tree = a.mode == "tree" && !(wf.mode && *wf.mode == FileMode::alloc);
  if (tree) require_tree_mode(spec);
  if (what == "degrees") {
    double lambda = 1.0;
    if (!tree) {
      if (a.lambda) lambda = *a.lambda;
      else if (a.m && a.n) lambda = static_cast<double>(*a.m) / static_cast<double>(*a.n);
      else throw Error(ErrorCode::invalid_argument, "alloc mode needs --lambda or --m and --n");
    }
    print_prediction(predict_degree_law(canonical_law(spec, lambda), tree), a.format);
    return 0;
  }
  if (what == "zn") {
    if (tree) {
      print_prediction(predict_tree_partition(spec, a.n.value_or(1000)), a.format);
    } else {
      const auto [m, n] = sizes_for(a, false);
      print_prediction(predict_partition(spec, m, n), a.format);
    }
    return 0;
  }
  const auto [m, n] = sizes_for(a, tree);
  const auto law = canonical_law(spec, static_cast<double>(m) / static_cast<double>(n));
  if (what == "maxdeg") print_prediction(predict_max_degree(law, n, m), a.format);
  else if (what == "condensation") print_prediction(predict_condensation(law, n, m), a.format);
  else throw Error(ErrorCode::invalid_argument, "unknown prediction '" + what + "'");
  return 0;
}

// ---- verify

struct VerifyArgs {
  std::string suite;
  std::string budget = "full";
  long long n_max = 7;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::string format = "text";
};

int cmd_verify(const VerifyArgs& a) {
  VerifyOptions o;
  o.budget = parse_budget(a.budget);
  o.n_max = a.n_max;
  if (a.seed) o.seed = *a.seed;
  o.workers = a.workers;
  std::vector<SuiteResult> results;
  if (a.suite == "all") {
    for (const auto& s : suites()) results.push_back(s.run(o));
  } else {
    results.push_back(run_suite(a.suite, o));
  }
  bool all = true;
  json out = json::array();
  for (const auto& r : results) {
    all = all && r.pass();
    if (a.format == "json") {
      json checks = json::array();
      for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
      out.push_back({{"suite", r.name}, {"criterion", r.criterion}, {"pass", r.pass()}, {"seconds", r.seconds},
                     {"checks", checks}});
      continue;
    }
    std::printf("%s %s (criterion %d, %.2f s)\n", r.pass() ? "PASS" : "FAIL", r.name.c_str(), r.criterion, r.seconds);
    for (const auto& c : r.checks) {
      std::printf("  %s %s", c.pass ? "ok  " : "FAIL", c.name.c_str());
      if (!c.detail.empty()) std::printf(" | %s", c.detail.c_str());
      std::printf("\n");
    }
  }
  if (a.format == "json") std::cout << out.dump(2) << "\n";
  return all ? 0 : 1;
}

// Appends `--key value` for config entries the command line leaves unset.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") path = args[i + 1];
  }
  for (const auto& s : args) {
    if (s.rfind("--config=", 0) == 0) path = s.substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::invalid_argument, "cannot open config '" + path + "'");
  for (const auto& [key, value] : parse_config(in, path)) {
    const std::string flag = "--" + key;
    bool present = false;
    for (const auto& s : args) present = present || s == flag || s.rfind(flag + "=", 0) == 0;
    if (present) continue;
    if (value == "true") {
      args.push_back(flag);
    } else if (value != "false") {
      args.push_back(flag);
      args.push_back(value);
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simply generated trees and balls-in-boxes"};
  app.require_subcommand(1);
  std::string config;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config, "key = value file supplying defaults for unset flags");
  };

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "tau, Phi(tau), mu, nu, sigma^2, rho_Z, case and pi_k");
  an.fam.attach(analyze);
  analyze->add_option("--lambda", an.lambda, "target mean m/n (default 1)");
  analyze->add_option("--cutoff", an.cutoff, "largest k in the pi_k table");
  analyze->add_option("--format", an.format)->check(CLI::IsMember({"text", "json"}));
  add_config(analyze);

  ZtableArgs zt;
  auto* ztable = app.add_subcommand("ztable", "partition functions as CSV");
  zt.fam.attach(ztable);
  ztable->add_option("--zn", zt.zn, "tree partition functions Z_1..Z_N");
  ztable->add_option("--m", zt.m);
  ztable->add_option("--n", zt.n);
  ztable->add_option("--m-max", zt.m_max);
  ztable->add_option("--n-max", zt.n_max);
  ztable->add_flag("--log", zt.log_mode, "log mode even when the weights are rational");
  add_config(ztable);

  SampleArgs sa;
  sa.workers = default_workers();
  auto* sample = app.add_subcommand("sample", "exact samples as JSON lines, one per replicate");
  sample->require_subcommand(1);
  auto sample_sub = [&](const char* name, const char* help) {
    auto* s = sample->add_subcommand(name, help);
    sa.fam.attach(s);
    s->add_option("--seed", sa.seed, "RNG seed; replicate i uses stream i")->required();
    s->add_option("--count", sa.count, "number of replicates");
    s->add_option("--workers", sa.workers, "worker threads (default SIMPLYGEN_WORKERS or 1)");
    s->add_option("--strategy", sa.strategy)->check(CLI::IsMember({"exact", "rejection", "auto"}));
    s->add_flag("--full", sa.full, "always print whole sequences");
    add_config(s);
    return s;
  };
  auto* s_tree = sample_sub("tree", "simply generated trees of size n");
  s_tree->add_option("--n", sa.n);
  auto* s_alloc = sample_sub("alloc", "balls-in-boxes allocations of m balls in n boxes");
  s_alloc->add_option("--m", sa.m);
  s_alloc->add_option("--n", sa.n);
  s_alloc->add_option("--lambda", sa.lambda, "m = round(lambda n) when --m is absent");
  auto* s_forest = sample_sub("forest", "forests of n trees with m nodes");
  s_forest->add_option("--m", sa.m);
  s_forest->add_option("--n", sa.n);
  s_forest->add_option("--lambda", sa.lambda, "m = round(lambda n) when --m is absent");
  auto* s_kesten = sample_sub("kesten", "left balls of the limit tree");
  s_kesten->add_option("--radius", sa.radius);

  PredictArgs pa;
  auto* predict = app.add_subcommand("predict", "asymptotic predictions");
  predict->require_subcommand(1);
  std::string predict_what;
  for (const char* what : {"degrees", "maxdeg", "condensation", "zn", "forest"}) {
    auto* s = predict->add_subcommand(what);
    pa.fam.attach(s);
    s->add_option("--n", pa.n);
    s->add_option("--m", pa.m);
    s->add_option("--lambda", pa.lambda);
    s->add_option("--mode", pa.mode)->check(CLI::IsMember({"tree", "alloc"}));
    s->add_option("--format", pa.format)->check(CLI::IsMember({"text", "json"}));
    if (std::string(what) == "forest") s->add_option("--kind", pa.kind)->check(CLI::IsMember({"rooted", "general", "unrooted"}));
    add_config(s);
    s->callback([&predict_what, what] { predict_what = what; });
  }

  VerifyArgs va;
  va.workers = default_workers();
  auto* verify = app.add_subcommand("verify", "run an acceptance suite (or 'all'); exit 0 iff it passes");
  verify->add_option("suite", va.suite)->required();
  verify->add_option("--budget", va.budget)->check(CLI::IsMember({"fast", "full"}));
  verify->add_option("--n-max", va.n_max, "enumeration bound for the cycle-lemma suite");
  verify->add_option("--seed", va.seed);
  verify->add_option("--workers", va.workers);
  verify->add_option("--format", va.format)->check(CLI::IsMember({"text", "json"}));
  add_config(verify);

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = merge_config(std::move(args));
    std::reverse(args.begin(), args.end());
    try {
      app.parse(args);
    } catch (const CLI::ParseError& e) {
      return app.exit(e);
    }
    if (analyze->parsed()) return cmd_analyze(an);
    if (ztable->parsed()) return cmd_ztable(zt);
    if (s_tree->parsed()) return cmd_sample_tree(sa);
    if (s_alloc->parsed()) return cmd_sample_alloc(sa);
    if (s_forest->parsed()) return cmd_sample_forest(sa);
    if (s_kesten->parsed()) return cmd_sample_kesten(sa);
    if (predict->parsed()) return cmd_predict(predict_what, pa);
    if (verify->parsed()) return cmd_verify(va);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
