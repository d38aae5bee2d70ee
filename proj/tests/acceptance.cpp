// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "oracles.hpp"
#include "reference_values.hpp"
#include "rtail/asymptotics.hpp"
#include "rtail/exact.hpp"
#include "rtail/series.hpp"

using namespace rtail;
namespace fs = std::filesystem;
namespace ref = rtail::testing::ref;

namespace {

const std::string kData = RTAIL_TEST_DATA;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

fs::path workdir() {
  static fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("rtail_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string out(const std::string& name) { return (workdir() / name).string(); }

int run_cli(const std::string& args) {
  std::string cmd = std::string(RTAIL_CLI) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Columns of a numeric CSV keyed by header name.
struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  double at(std::size_t row, const std::string& col) const {
    auto it = std::find(header.begin(), header.end(), col);
    return rows.at(row).at(static_cast<std::size_t>(it - header.begin()));
  }
};

Csv read_csv(const std::string& path) {
  Csv csv;
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) csv.header.push_back(cell);
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream rs(line);
    for (std::string cell; std::getline(rs, cell, ',');) row.push_back(std::strtod(cell.c_str(), nullptr));
    csv.rows.push_back(row);
  }
  return csv;
}

bool close_rel(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::fabs(b); }

/// |r - 1| strictly shrinking along the window.
bool improving(const std::vector<double>& r) {
  for (std::size_t i = 1; i < r.size(); ++i)
    if (std::fabs(r[i] - 1.0) >= std::fabs(r[i - 1] - 1.0)) return false;
  return true;
}

std::string list(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ",") + num(x);
  return s;
}

ModelParams e1() {
  return ModelParams(1.0, 1.0, BatchDist::deterministic(1), ServiceDist::lomax(0.75, 2.5));
}

const std::vector<std::size_t> kWindow = {1024, 2048, 4096};

// ---------------------------------------------------------------------------

Verdict constants_suite() {
  Verdict v;
  constexpr double inf = std::numeric_limits<double>::infinity();
  struct Cfg {
    const char* name;
    ModelParams p;
    testing::RawModel raw;
  } cfgs[] = {
      {"E1", e1(), {1.0, 1.0, 0.5, 1.0, {std::pow(0.75, 2.5), 2.5}, {0.0, inf}}},
      {"Case2",
       ModelParams(0.2, 1.0, BatchDist::pareto_tail(2.0, 1.8), ServiceDist::exponential(1.0)),
       {0.2, 1.0, 1.0, std::pow(2.0, 1.8) * testing::hurwitz_zeta(1.8, 2.0), {0.0, inf},
        {std::pow(2.0, 1.8), 1.8}}},
      {"Case3",
       ModelParams(0.5, 1.0, BatchDist::pareto_tail(1.0, 2.5), ServiceDist::lomax(0.75, 2.5)),
       {0.5, 1.0, 0.5, testing::hurwitz_zeta(2.5, 1.0), {std::pow(0.75, 2.5), 2.5}, {1.0, 2.5}}},
  };
  double worst = 0.0;
  double worst_identity = 0.0;
  for (const auto& c : cfgs) {
    auto rep = asymptotic_report(c.p);
    auto b = testing::constants_by_tail_algebra(c.raw);
    const std::pair<double, double> pairs[] = {
        {rep.c_K, b.c_K},   {rep.c_K_circ, b.c_K_circ}, {rep.c_D0, b.c_D0},
        {rep.c_D1, b.c_D1}, {rep.psi, b.psi},           {rep.refined_coefficient, b.refined}};
    for (auto [x, y] : pairs) worst = std::max(worst, std::fabs(x - y) / std::fabs(y));
    double id = (1.0 - 1.0 / rep.regime.a) * rep.c_K * rep.psi;
    worst_identity = std::max(worst_identity, std::fabs(rep.c_D0 - id) / id);
  }
  v.require(worst <= 1e-12, "second path differs by " + num(worst));
  v.require(worst_identity <= 1e-14, "c_D0 identity off by " + num(worst_identity));
  v.note("max rel diff " + num(worst) + ", identity " + num(worst_identity));
  return v;
}

Verdict series_oracles() {
  Verdict v;
  auto as_vec = [](const TruncSeries& s) { return std::vector<double>(s.coeffs().begin(), s.coeffs().end()); };
  double cp = 0.0;
  for (double rate : {0.5, 4.0, 20.0}) {
    for (auto x : {BatchDist::geometric(0.4), BatchDist::pareto_tail(1.0, 1.5)}) {
      auto batch = batch_pmf_series(x, 64);
      auto got = compound_poisson(rate, batch);
      auto want = testing::compound_poisson_bruteforce(rate, as_vec(batch));
      for (std::size_t j = 0; j <= 64; ++j) cp = std::max(cp, std::fabs(got[j] - want[j]));
    }
  }
  std::vector<double> s(49, 0.0);
  for (std::size_t j = 1; j < s.size(); ++j) s[j] = 1.3 / std::pow(double(j), 2.5);
  double c = 0.0;
  for (double x : s) c += x;
  auto e = exp_shifted(TruncSeries::from_coeffs(s), c);
  auto t = testing::exp_taylor(s, c);
  double ex = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) ex = std::max(ex, std::fabs(e[j] - t[j]));

  double eq = 0.0;
  for (double p : {0.1, 0.5, 0.95}) {
    std::vector<double> q(301);
    for (std::size_t j = 0; j <= 300; ++j) q[j] = (1 - p) * std::pow(p, double(j));
    auto g = TruncSeries::from_pmf(q, std::pow(p, 301.0));
    auto de = equilibrium_transform(g, p / (1 - p));
    for (std::size_t j = 0; j <= 300; ++j) eq = std::max(eq, std::fabs(de[j] - q[j]));
  }
  v.require(cp <= 1e-12, "compound_poisson " + num(cp));
  v.require(ex <= 1e-12, "exp_shifted " + num(ex));
  v.require(eq <= 1e-14, "equilibrium self-map " + num(eq));
  v.note("compound " + num(cp) + ", exp " + num(ex) + ", equilibrium " + num(eq));
  return v;
}

Verdict degenerate_poisson() {
  Verdict v;
  double err = 0.0;
  for (double psi : {0.3, 1.0, 4.5}) {
    auto d0 = d0_from_k(TruncSeries::point_mass(0, 1024), psi);
    double w = std::exp(-psi);
    for (std::size_t j = 0; j <= 1024; ++j) {
      err = std::max(err, std::fabs(d0[j] - w));
      w *= psi / double(j + 1);
    }
  }
  v.require(err <= 1e-12, "sup error " + num(err));
  v.note("sup error " + num(err));
  return v;
}

/// Simulated tail column vs an exact tail, within k half-widths for j <= j_max.
void sim_agrees(Verdict& v, const Csv& csv, const TruncSeries& exact, std::size_t j_max, double k) {
  double worst = 0.0;
  for (std::size_t j = 0; j <= j_max; ++j) {
    double m = csv.at(j, "L_tail");
    double hw = csv.at(j, "L_tail_hw");
    double z = std::fabs(m - exact.tail(j)) / hw;
    worst = std::max(worst, z);
    if (!(z <= k)) v.require(false, "j=" + std::to_string(j) + " off by " + num(z) + " half-widths");
  }
  v.note("max |sim-exact|/hw " + num(worst));
}

Verdict mm1_oracle() {
  Verdict v;
  ModelParams m(0.7, 1e6, BatchDist::deterministic(1), ServiceDist::exponential(1.0));
  auto l_mu = l_mu_series(m, 1024);
  double worst = 0.0;
  for (std::size_t j = 0; j <= 20; ++j) {
    double closed = std::pow(0.7, double(j + 1));
    worst = std::max(worst, std::fabs(l_mu.tail(j) / closed - 1.0));
  }
  v.require(worst <= 1e-3, "exact rel error " + num(worst));
  v.note("exact rel error " + num(worst));
  int rc = run_cli("sim --config " + kData + "/mm1.ini --out " + out("mm1_a.csv"));
  v.require(rc == 0, "sim exit " + std::to_string(rc));
  if (rc == 0) sim_agrees(v, read_csv(out("mm1_a.csv")), l_mu, 20, 3.0);
  return v;
}

struct E1Run {
  ExactDistributions ex;
  AsymptoticReport rep;
};

const E1Run& e1_run() {
  static E1Run r{compute_exact(e1(), 16384), asymptotic_report(e1())};
  return r;
}

Verdict orbit_tail_k() {
  Verdict v;
  const auto& r = e1_run();
  const double L = r.rep.regime.L;
  double slope = std::log(r.ex.k.tail(4096) / r.ex.k.tail(1024)) / std::log(4.0);
  std::vector<double> ratio;
  for (auto j : kWindow) ratio.push_back(r.ex.k.tail(j) / (r.rep.c_K * L * std::pow(double(j), -1.5)));
  v.require(std::fabs(slope + 1.5) <= 0.1, "slope " + num(slope));
  v.require(ratio.back() >= 0.8 && ratio.back() <= 1.2, "ratio out of band");
  v.require(improving(ratio), "ratio not improving");
  v.note("slope " + num(slope) + ", ratios " + list(ratio));
  return v;
}

Verdict idle_orbit_tail() {
  Verdict v;
  const auto& r = e1_run();
  const double L = r.rep.regime.L;
  std::vector<double> ratio;
  for (auto j : kWindow) ratio.push_back(r.ex.d0.tail(j) / (r.rep.c_D0 * L * std::pow(double(j), -2.5)));
  double predicted = 1.6 * 0.487139 * std::pow(1000.0, -2.5);
  double at1000 = r.ex.d0.tail(1000);
  v.require(ratio.back() >= 0.7 && ratio.back() <= 1.3, "ratio out of band");
  v.require(improving(ratio), "ratio not improving");
  v.require(close_rel(at1000, predicted, 0.3), "P{D0>1000} far from prediction");
  v.note("ratios " + list(ratio) + ", P{D0>1000} " + num(at1000) + " vs " + num(predicted));
  return v;
}

Verdict refined_equivalence() {
  Verdict v;
  const auto& r = e1_run();
  auto curve = refined_difference_curve(e1());
  v.require(close_rel(curve.c, 3.6, 1e-12), "coefficient " + num(curve.c));
  std::vector<double> eq, diff;
  for (auto j : kWindow) {
    eq.push_back(r.ex.l_mu.tail(j) / r.ex.l_inf.tail(j));
    diff.push_back((r.ex.l_mu.tail(j) - r.ex.l_inf.tail(j)) / curve(double(j)));
  }
  bool decreasing = true;
  for (std::size_t j = kWindow.front(); j < kWindow.back(); ++j)
    if (!(r.ex.l_inf[j + 1] < r.ex.l_inf[j])) decreasing = false;
  v.require(eq.back() >= 0.95 && eq.back() <= 1.05, "equivalence ratio out of band");
  v.require(diff.back() >= 0.7 && diff.back() <= 1.3, "difference ratio out of band");
  v.require(improving(diff), "difference not improving");
  v.require(decreasing, "P{L_inf=j} not decreasing on the window");
  v.note("L_mu/L_inf " + list(eq) + ", difference " + list(diff) +
         (decreasing ? ", pmf decreasing" : ""));
  return v;
}

Verdict cross_engine() {
  Verdict v;
  int rc = run_cli("sim --config " + kData + "/e1_long.ini --out " + out("e1_a.csv"));
  v.require(rc == 0, "sim exit " + std::to_string(rc));
  if (rc != 0) return v;
  sim_agrees(v, read_csv(out("e1_a.csv")), e1_run().ex.l_mu, 20, 3.0);
  auto meta = nlohmann::json::parse(slurp(out("e1_a.csv.json")));
  double busy = meta.at("busy_fraction").get<double>();
  v.require(std::fabs(busy - 0.5) <= 0.005, "busy fraction " + num(busy));
  v.note("busy " + num(busy));
  return v;
}

Verdict second_order() {
  Verdict v;
  const std::size_t n = 16384;
  const std::size_t t = 2000;
  auto x1 = BatchDist::pareto_tail(1.0, 1.5);
  auto x2 = BatchDist::pareto_tail(1.0, 2.5);
  auto sum = mul(batch_pmf_series(x1, n), batch_pmf_series(x2, n));
  double numerator = sum.tail(t) - x1.tail(static_cast<long>(t));
  double denominator = 1.5 * x2.chi1() * x1.tail(static_cast<long>(t)) / double(t) +
                       x2.tail(static_cast<long>(t));
  double ratio = numerator / denominator;
  v.require(ratio >= 0.9 && ratio <= 1.1, "ratio " + num(ratio));
  v.require(close_rel(ratio, ref::second_order_ratio_t2000, 1e-6), "differs from reference");
  v.note("ratio " + num(ratio) + " (reference " + num(ref::second_order_ratio_t2000) + ")");
  return v;
}

Verdict determinism() {
  Verdict v;
  const std::string e1 = kData + "/e1.ini";
  struct Cmd {
    std::string args;
    std::string file;
  };
  std::vector<Cmd> cmds = {
      {"exact --config " + e1 + " --out ", "exact.csv"},
      {"asym --config " + e1 + " --out ", "asym.csv"},
      {"compare --config " + e1 + " --sim-csv " + out("e1_a.csv") + " --out ", "compare.json"},
      {"check-lemma61 --f1 paretotail:theta=1,d=1.5 --f2 paretotail:theta=1,d=2.5 "
       "--t 500,1000,2000 --out ",
       "lemma.csv"},
  };
  for (const auto& c : cmds) {
    run_cli(c.args + out("a_" + c.file));
    run_cli(c.args + out("b_" + c.file));
  }
  cmds.push_back({"", "mm1.csv"});
  cmds.push_back({"", "e1.csv"});
  run_cli("sim --config " + kData + "/mm1.ini --out " + out("mm1_b.csv"));
  run_cli("sim --config " + kData + "/e1_long.ini --out " + out("e1_b.csv"));
  int compared = 0;
  for (const auto& c : cmds) {
    std::string a = c.args.empty() ? out(c.file.substr(0, c.file.size() - 4) + "_a.csv")
                                   : out("a_" + c.file);
    std::string b = c.args.empty() ? out(c.file.substr(0, c.file.size() - 4) + "_b.csv")
                                   : out("b_" + c.file);
    for (const std::string suffix : {"", ".json"}) {
      if (!fs::exists(a + suffix)) continue;
      std::string x = slurp(a + suffix);
      v.require(!x.empty() && x == slurp(b + suffix), c.file + suffix + " differs");
      ++compared;
    }
  }
  v.require(compared == 11, "only " + std::to_string(compared) + " outputs compared");
  v.note(std::to_string(compared) + " outputs identical");
  return v;
}

}  // namespace

int main() {
  struct Item {
    int id;
    const char* name;
    double budget_s;
    std::function<Verdict()> run;
  } items[] = {
      {1, "constants suite", 1.0, constants_suite},
      {2, "series oracles", 10.0, series_oracles},
      {3, "degenerate Poisson orbit", 1.0, degenerate_poisson},
      {4, "M/M/1 closed form", 120.0, mm1_oracle},
      {5, "orbit tail K at desk scale", 300.0, orbit_tail_k},
      {6, "idle orbit tail D0 at desk scale", 300.0, idle_orbit_tail},
      {7, "refined equivalence", 300.0, refined_equivalence},
      {8, "cross-engine consistency", 300.0, cross_engine},
      {9, "second-order convolution ratio", 120.0, second_order},
      {10, "determinism", 300.0, determinism},
  };
  int failures = 0;
  for (auto& item : items) {
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = item.run();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.require(secs <= item.budget_s, "over time budget");
    if (!v.pass) ++failures;
    std::printf("%s %2d %-34s %7.2fs  %s\n", v.pass ? "PASS" : "FAIL", item.id, item.name, secs,
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::error_code ec;
  fs::remove_all(workdir(), ec);
  return failures == 0 ? 0 : 1;
}
