#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef SIMPLYGEN_CLI
#error "SIMPLYGEN_CLI must name the command-line binary"
#endif

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using nlohmann::json;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args, bool merge_stderr = false) {
  std::string cmd = std::string("\"") + SIMPLYGEN_CLI + "\" " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<json> json_lines(const std::string& s) {
  std::vector<json> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(json::parse(line));
  }
  return out;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / ("simplygen_cli_" + std::to_string(::getpid()) + "_" + name);
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_CASE("ztable examples") {
  const auto u = run("ztable --family uniform --zn 5");
  REQUIRE(u.status == 0);
  CHECK(lines(u.out).back().rfind("5,14,", 0) == 0);

  const auto b = run("ztable --family inv_factorial --zn 4");
  REQUIRE(b.status == 0);
  CHECK(lines(b.out).back().rfind("4,8/3,", 0) == 0);

  const auto f = run("ztable --family binary_full --zn 4");
  REQUIRE(f.status == 0);
  CHECK_THAT(lines(f.out).back(), ContainsSubstring("infeasible"));

  const auto one = run("ztable --family uniform --m 2 --n 3");
  REQUIRE(one.status == 0);
  CHECK(lines(one.out).back().rfind("2,3,6,", 0) == 0);

  const auto lg = run("ztable --family uniform --zn 30 --log");
  REQUIRE(lg.status == 0);
  const auto last = lines(lg.out).back();
  // log C_29 = log(1002242216651368)
  const double logz = std::stod(last.substr(last.find(',', 3) + 1));
  CHECK_THAT(logz, WithinRel(std::log(1002242216651368.0), 1e-12));
}

TEST_CASE("analyze reports the canonical quantities") {
  const auto r = run("analyze --family uniform --format json");
  REQUIRE(r.status == 0);
  const auto j = json::parse(r.out);
  CHECK_THAT(j["tau"].get<double>(), WithinAbs(0.5, 1e-12));
  CHECK_THAT(j["rho_z"].get<double>(), WithinAbs(0.25, 1e-12));
  CHECK_THAT(j["sigma2"].get<double>(), WithinAbs(2.0, 1e-9));
  CHECK_THAT(j["pi"][0].get<double>(), WithinAbs(0.5, 1e-12));

  const auto f = run("analyze --family factorial --format json");
  REQUIRE(f.status == 0);
  CHECK_THAT(json::parse(f.out)["case"].get<std::string>(), ContainsSubstring("III"));

  CHECK(run("analyze --family uniform").status == 0);
}

TEST_CASE("sampling is reproducible") {
  const std::string args = "sample tree --family motzkin --n 200 --count 6 --seed 42";
  const auto a = run(args + " --workers 1");
  const auto b = run(args + " --workers 3");
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(run(args + " --workers 1").out == a.out);
  CHECK(run("sample tree --family motzkin --n 200 --count 6 --seed 43").out != a.out);

  const auto rows = json_lines(a.out);
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i]["replicate"] == i);
    CHECK(rows[i]["n"] == 200);
    long long nodes = 0, edges = 0;
    const auto& c = rows[i]["degree_counts"];
    for (std::size_t k = 0; k < c.size(); ++k) {
      nodes += c[k].get<long long>();
      edges += static_cast<long long>(k) * c[k].get<long long>();
    }
    CHECK(nodes == 200);
    CHECK(edges == 199);
  }
}

TEST_CASE("allocation and forest samples") {
  const auto z = json_lines(run("sample alloc --family uniform --m 0 --n 3 --seed 1").out);
  REQUIRE(z.size() == 1);
  CHECK(z[0]["y"] == json::array({0, 0, 0}));

  const auto a = json_lines(run("sample alloc --family poisson --a 1 --m 30 --n 10 --count 5 --seed 7").out);
  REQUIRE(a.size() == 5);
  for (const auto& row : a) {
    long long s = 0;
    for (const auto& v : row["y"]) s += v.get<long long>();
    CHECK(s == 30);
  }

  const auto f = json_lines(run("sample forest --family inv_factorial --m 10 --n 3 --count 4 --seed 3").out);
  REQUIRE(f.size() == 4);
  for (const auto& row : f) {
    long long s = 0;
    for (const auto& v : row["sizes"]) s += v.get<long long>();
    CHECK(s == 10);
    CHECK(row["sizes"].size() == 3);
  }

  const auto k = json_lines(run("sample kesten --family uniform --radius 3 --count 3 --seed 5").out);
  CHECK(k.size() == 3);

  CHECK(run("sample forest --family rooted_forest --m 10 --n 3 --seed 3").status == 2);
}

TEST_CASE("predictions") {
  const auto r = run("predict maxdeg --family uniform --n 100000 --format json");
  REQUIRE(r.status == 0);
  const auto j = json::parse(r.out);
  CHECK(j["tag"] == "poisson-max");
  // tree mode: lambda = (n-1)/n and q = tau = lambda / (1 + lambda)
  const double lambda = 99999.0 / 100000.0;
  CHECK_THAT(j["values"]["q"].get<double>(), WithinRel(lambda / (1 + lambda), 1e-9));

  const auto z = json::parse(run("predict zn --family uniform --n 1000 --format json").out);
  CHECK_THAT(z["values"]["zn_ratio"].get<double>(), WithinRel(4.0, 1e-9));

  const auto rooted = json::parse(run("predict forest --kind rooted --lambda 2 --n 10000 --format json").out);
  CHECK_THAT(rooted["values"]["q"].get<double>(), WithinRel(0.5 * std::exp(0.5), 1e-9));

  // nu = (zeta(3/2) - zeta(5/2)) / zeta(5/2) = 0.94737; m = nu n has infinite variance
  const auto open = json::parse(run("predict maxdeg --family powerlaw --beta 2.5 --n 10000 --mode alloc --m 9474 --format json").out);
  CHECK(open["declined"] == true);
  CHECK(open["tag"] == "regime-open");

  const auto crit = run("predict forest --kind unrooted --lambda 2 --n 1000 --format json");
  CHECK(crit.status == 0);
  CHECK(json::parse(crit.out)["declined"] == true);

  CHECK(run("predict degrees --family uniform").status == 0);
}

TEST_CASE("weight and config files") {
  const auto w = temp_file("w.txt", "# Catalan weights\nrho = 1\n0 1\n1 1\n2 1\n3 1\n4 1\n5 1\n");
  const auto r = run("ztable --weights " + w.string() + " --zn 5");
  REQUIRE(r.status == 0);
  CHECK(lines(r.out).back().rfind("5,14,", 0) == 0);

  const auto bad = temp_file("bad.txt", "rho = 1\n0 x\n");
  const auto e = run("ztable --weights " + bad.string() + " --zn 3", true);
  CHECK(e.status == 2);
  CHECK_THAT(e.out, ContainsSubstring("error"));

  const auto cfg = temp_file("c.cfg", "family = motzkin\nn = 50\ncount = 3\nseed = 11\n");
  const auto c = run("sample tree --config " + cfg.string());
  REQUIRE(c.status == 0);
  CHECK(c.out == run("sample tree --family motzkin --n 50 --count 3 --seed 11").out);
  // the command line wins over the file
  const auto c2 = run("sample tree --config " + cfg.string() + " --seed 12");
  CHECK(c2.out == run("sample tree --family motzkin --n 50 --count 3 --seed 12").out);

  for (const auto& p : {w, bad, cfg}) std::filesystem::remove(p);
}

TEST_CASE("exit codes") {
  CHECK(run("verify tz-identity --budget fast").status == 0);
  CHECK(run("verify tz-identity --budget fast --format json").status == 0);
  const auto unknown = run("analyze --family bogus", true);
  CHECK(unknown.status == 2);
  CHECK_THAT(unknown.out, ContainsSubstring("bogus"));
  CHECK(run("sample tree --family uniform --n 5").status != 0);
  CHECK(run("verify no-such-suite").status != 0);
  CHECK(run("sample tree --family binary_full --n 4 --seed 1").status == 2);
  CHECK(run("").status != 0);
}
