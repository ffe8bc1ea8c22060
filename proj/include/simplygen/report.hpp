#pragma once

#include <algorithm>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "simplygen/metrics.hpp"
#include "simplygen/predict.hpp"
#include "simplygen/summary.hpp"

namespace simplygen {

struct ReportRow {
  std::string quantity;
  double empirical = 0.0;
  double predicted = 0.0;
  std::string metric;  // "abs", "d_K", "d_TV", "d_K*", "z"
  double distance = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Report {
  std::string quantity;
  std::string tag;
  bool declined = false;
  std::string reason;
  std::vector<ReportRow> rows;

  bool pass() const {
    if (declined) return false;
    for (const auto& r : rows) {
      if (!r.pass) return false;
    }
    return true;
  }

  void add(std::string quantity_, double emp, double pred, std::string metric, double dist, double tol) {
    rows.push_back({std::move(quantity_), emp, pred, std::move(metric), dist, tol, dist < tol});
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["quantity"] = quantity;
    j["tag"] = tag;
    j["declined"] = declined;
    if (declined) j["reason"] = reason;
    j["pass"] = pass();
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
      j["rows"].push_back({{"quantity", r.quantity},
                           {"empirical", r.empirical},
                           {"predicted", r.predicted},
                           {"metric", r.metric},
                           {"distance", r.distance},
                           {"tolerance", r.tolerance},
                           {"pass", r.pass}});
    }
    return j;
  }

  std::string to_text() const {
    std::ostringstream out;
    out << quantity << " [" << tag << "]";
    if (declined) {
      out << " declined: " << reason << "\n";
      return out.str();
    }
    out << (pass() ? " PASS" : " FAIL") << "\n";
    std::size_t w = 8;
    for (const auto& r : rows) w = std::max(w, r.quantity.size());
    char buf[256];
    std::snprintf(buf, sizeof buf, "  %-*s %14s %14s %6s %12s %10s %s\n", static_cast<int>(w), "quantity", "empirical",
                  "predicted", "metric", "distance", "tolerance", "ok");
    out << buf;
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "  %-*s %14.6g %14.6g %6s %12.4g %10.4g %s\n", static_cast<int>(w),
                    r.quantity.c_str(), r.empirical, r.predicted, r.metric.c_str(), r.distance, r.tolerance,
                    r.pass ? "yes" : "NO");
      out << buf;
    }
    return out.str();
  }
};

// Smallest k in [lo, hi] with cdf(k) >= u, by bisection; hi when none.
inline long long cdf_quantile(const std::function<double(long long)>& cdf, double u, long long lo, long long hi) {
  while (lo < hi) {
    const long long mid = lo + (hi - lo) / 2;
    if (cdf(mid) >= u) hi = mid;
    else lo = mid + 1;
  }
  return lo;
}

// Prediction as JSON. The cdf is tabulated between its 1e-4 and 1 - 1e-4
// quantiles, thinned to about `points` entries.
inline nlohmann::json prediction_json(const Prediction& p, std::size_t points = 200) {
  nlohmann::json j{{"quantity", p.quantity}, {"tag", p.tag}, {"declined", p.declined}};
  if (p.declined) {
    j["reason"] = p.reason;
    return j;
  }
  j["conditions"] = p.conditions;
  nlohmann::json values = nlohmann::json::object();
  for (const auto& [k, v] : p.values) values[k] = v;
  j["values"] = values;
  nlohmann::json skipped = nlohmann::json::object();
  for (const auto& [k, why] : p.skipped) skipped[k] = why;
  j["skipped"] = skipped;
  if (!p.laws.empty()) {
    nlohmann::json laws = nlohmann::json::object();
    for (const auto& [name, pmf] : p.laws) {
      std::vector<double> head;
      for (std::size_t k = 0; k < pmf.p.size() && (k < 6 || pmf.p[k] >= 1e-12); ++k) head.push_back(pmf.p[k]);
      laws[name] = {{"p", head}, {"infinity", pmf.infinity}};
    }
    j["laws"] = laws;
  }
  if (!p.shapes.empty()) {
    nlohmann::json shapes = nlohmann::json::object();
    for (const auto& [shape, prob] : p.shapes) shapes[format_degrees(shape)] = prob;
    j["shapes"] = shapes;
  }
  if (p.cdf) {
    const long long cap = 1LL << 40;
    const long long lo = cdf_quantile(p.cdf, 1e-4, 0, cap);
    const long long hi = std::max(lo, cdf_quantile(p.cdf, 1.0 - 1e-4, lo, cap));
    const long long step = std::max<long long>(1, (hi - lo) / static_cast<long long>(std::max<std::size_t>(points, 1)));
    nlohmann::json table = nlohmann::json::array();
    for (long long k = lo; k <= hi; k += step) table.push_back({k, p.cdf(k)});
    j["cdf_of"] = p.cdf_of;
    j["cdf"] = table;
  }
  return j;
}

inline std::string shape_name(const DegreeSeq& d) { return "fringe(" + format_degrees(d) + ")"; }

// Compares pooled empirical counts against a prediction; `tol` bounds each
// absolute frequency error and each distance.
inline Report compare(const EmpiricalSummary& s, const Prediction& p, double tol = 0.01) {
  Report r;
  r.quantity = p.quantity;
  r.tag = p.tag;
  if (p.declined) {
    r.declined = true;
    r.reason = p.reason;
    return r;
  }
  if (s.replicates == 0) {
    r.declined = true;
    r.reason = "no replicates";
    return r;
  }
  if (p.quantity == "degree-law") {
    const Pmf& pi = p.laws.at("degree");
    for (std::size_t k = 0; k < pi.p.size() && (k < 6 || pi.p[k] >= 1e-3); ++k) {
      const double e = s.degree_frequency(k);
      r.add("N_" + std::to_string(k) + "/n", e, pi.p[k], "abs", std::abs(e - pi.p[k]), tol);
    }
    r.add("degree histogram", 0.0, 0.0, "d_TV", dist_tv(s.degree_pmf(), pi), tol);
    if (!s.root_degrees.empty() && p.laws.count("root")) {
      r.add("root degree", 0.0, 0.0, "d_K*", dist_kolmogorov_mod(s.root_pmf(), p.laws.at("root")), tol);
    }
    if (!s.fringe.empty()) {
      for (const auto& [shape, prob] : p.shapes) {
        if (shape.size() > s.fringe_max) continue;
        const double e = s.fringe_frequency(shape);
        r.add(shape_name(shape), e, prob, "abs", std::abs(e - prob), tol);
      }
    }
    return r;
  }
  if (p.quantity == "max-degree" || p.quantity == "condensation" || p.quantity == "forest-max") {
    const std::size_t j = p.cdf_of == "Y_(2)" ? 2 : 1;
    if (s.largest.size() < j || s.order_stat(j).empty()) {
      r.declined = true;
      r.reason = "summary lacks " + p.cdf_of;
      return r;
    }
    const auto& y = s.order_stat(j);
    r.add(p.cdf_of + " law", 0.0, 0.0, "d_K", dist_kolmogorov_cdf(y, p.cdf), tol);
    const double nn = static_cast<double>(s.n);
    auto mean_of = [](const std::vector<long long>& v) {
      double t = 0.0;
      for (auto x : v) t += static_cast<double>(x);
      return t / static_cast<double>(v.size());
    };
    if (p.has("condensate_fraction")) {
      const double e = mean_of(s.order_stat(1)) / nn;
      r.add("Y_(1)/n", e, p.value("condensate_fraction"), "abs", std::abs(e - p.value("condensate_fraction")), tol);
    }
    if (p.has("giant_fraction")) {
      const double e = mean_of(s.order_stat(1)) / nn;
      r.add("Y_(1)/n", e, p.value("giant_fraction"), "abs", std::abs(e - p.value("giant_fraction")), tol);
    }
    return r;
  }
  r.declined = true;
  r.reason = "no empirical counterpart for '" + p.quantity + "'";
  return r;
}

}  // namespace simplygen
