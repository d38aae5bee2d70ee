#include "rtail_cli/commands.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "rtail/asymptotics.hpp"
#include "rtail/exact.hpp"
#include "rtail/series.hpp"
#include "rtail/simulate.hpp"
#include "rtail_cli/svg.hpp"

namespace rtail::cli {

namespace {

using json = nlohmann::json;

/// Comparisons are skipped where the deficit exceeds 10% of the tail.
constexpr double kDeficitGuard = 10.0;
constexpr double kTrendSlack = 1e-9;

std::string dump(const json& j) { return j.dump(2) + "\n"; }

fs::path sidecar(const fs::path& out) { return fs::path(out.string() + ".json"); }

json nullable(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

bool use_color() {
  return std::getenv("NO_COLOR") == nullptr && isatty(fileno(stdout)) != 0;
}

void status_line(bool pass, const std::string& what) {
  const char* word = pass ? "PASS" : "FAIL";
  if (use_color()) {
    std::cout << (pass ? "\033[32m" : "\033[31m") << word << "\033[0m " << what << '\n';
  } else {
    std::cout << word << ' ' << what << '\n';
  }
}

struct Named {
  const char* name;
  const TruncSeries* series;
};

std::vector<Named> exact_columns(const ExactDistributions& ex) {
  return {{"k_star", &ex.k_star}, {"k_circ", &ex.k_circ}, {"k", &ex.k},   {"d0", &ex.d0},
          {"d1", &ex.d1},         {"linf", &ex.l_inf},    {"lmu", &ex.l_mu}};
}

// ---------------------------------------------------------------------------
// compare helpers
// ---------------------------------------------------------------------------

struct Row {
  std::size_t j;
  double value;
  bool skipped;
};

struct Check {
  std::string name;
  std::string description;
  double lo;
  double hi;
  /// true: every usable row must be in band; false: only the last one.
  bool whole_window;
  std::vector<Row> rows;
};

bool tail_usable(const TruncSeries& s, std::size_t j) {
  return s.tail(j) >= kDeficitGuard * s.mass_deficit() && s.tail(j) > 0.0;
}

json evaluate(const Check& c, bool& pass_out) {
  json j;
  j["description"] = c.description;
  j["band"] = {c.lo, c.hi};
  j["rule"] = c.whole_window ? "every usable j in band, improving trend"
                             : "last usable j in band, improving trend";
  json rows = json::array();
  const Row* first = nullptr;
  const Row* last = nullptr;
  bool in_band = true;
  for (const Row& r : c.rows) {
    rows.push_back({{"j", r.j}, {"value", nullable(r.value)}, {"skipped", r.skipped}});
    if (r.skipped) continue;
    if (!first) first = &r;
    last = &r;
    if (c.whole_window && !(r.value >= c.lo && r.value <= c.hi)) in_band = false;
  }
  j["rows"] = rows;
  bool pass = false;
  if (last) {
    if (!c.whole_window) in_band = last->value >= c.lo && last->value <= c.hi;
    const double d_first = std::abs(first->value - 1.0);
    const double d_last = std::abs(last->value - 1.0);
    const bool improving = d_last <= d_first + kTrendSlack;
    j["final"] = nullable(last->value);
    j["trend"] = improving ? "improving" : "worsening";
    pass = in_band && improving;
  } else {
    j["final"] = nullptr;
    j["trend"] = "no usable rows";
  }
  j["pass"] = pass;
  pass_out = pass;
  return j;
}

std::vector<std::size_t> doubling_window(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> out;
  for (std::size_t j = lo; j < hi; j *= 2) out.push_back(j);
  out.push_back(hi);
  return out;
}

struct SimTable {
  bool retrial = false;
  std::map<std::size_t, std::pair<double, double>> tail;  // j -> (mean, half-width)
};

SimTable read_sim_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read simulation CSV " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty simulation CSV " + path.string());
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  auto col = [&](const std::string& name) -> std::ptrdiff_t {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : it - header.begin();
  };
  const auto cj = col("j"), ct = col("L_tail"), ch = col("L_tail_hw");
  if (cj < 0 || ct < 0 || ch < 0) {
    throw ConfigError("simulation CSV " + path.string() + " lacks j, L_tail or L_tail_hw");
  }
  SimTable table;
  table.retrial = col("D0_tail") >= 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != header.size()) throw ConfigError("ragged row in " + path.string());
    const auto j = static_cast<std::size_t>(std::stoull(cells[cj]));
    table.tail[j] = {std::strtod(cells[ct].c_str(), nullptr), std::strtod(cells[ch].c_str(), nullptr)};
  }
  return table;
}

}  // namespace

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::size_t> log_grid(std::size_t lo, std::size_t hi, std::size_t points) {
  lo = std::max<std::size_t>(lo, 1);
  hi = std::max(hi, lo);
  std::vector<std::size_t> out;
  if (points < 2 || lo == hi) return {hi};
  const double a = std::log(static_cast<double>(lo));
  const double b = std::log(static_cast<double>(hi));
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    const auto j = static_cast<std::size_t>(std::llround(std::exp(a + t * (b - a))));
    const std::size_t clamped = std::clamp(j, lo, hi);
    if (out.empty() || clamped > out.back()) out.push_back(clamped);
  }
  if (out.back() != hi) out.push_back(hi);
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  const fs::path tmp = fs::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << content;
    if (!out) throw ConfigError("write failed for " + path.string());
  }
  fs::rename(tmp, path);
}

int cmd_exact(const RunConfig& config, const fs::path& out) {
  const ModelParams params = build_model(config);
  const ExactDistributions ex = compute_exact(params, config.trunc);
  const auto cols = exact_columns(ex);

  std::vector<std::vector<double>> tails;
  for (const auto& c : cols) tails.push_back(c.series->tails());

  std::string csv = "j";
  for (const auto& c : cols) csv += std::string(",") + c.name + "_pmf," + c.name + "_tail";
  csv += '\n';
  for (std::size_t j = 0; j <= config.trunc; ++j) {
    csv += std::to_string(j);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      csv += ',' + fmt((*cols[i].series)[j]) + ',' + fmt(tails[i][j]);
    }
    csv += '\n';
  }

  json meta;
  meta["command"] = "exact";
  meta["config"] = to_json(config);
  meta["rho"] = ex.rho;
  meta["psi"] = ex.psi;
  meta["trunc"] = config.trunc;
  for (const auto& c : cols) {
    meta["series"][c.name]["deficit"] = c.series->mass_deficit();
    meta["series"][c.name]["truncated_mean"] = c.series->mean();
  }
  write_file(out, csv);
  write_file(sidecar(out), dump(meta));
  return kOk;
}

int cmd_asym(const RunConfig& config, const fs::path& out, const AsymOptions& opts) {
  const ModelParams params = build_model(config);
  const AsymptoticReport rep = asymptotic_report(params);
  const Regime& r = rep.regime;
  const std::size_t hi = opts.j_max == 0 ? config.trunc : opts.j_max;
  if (opts.j_min < 1 || opts.j_min > hi) throw ConfigError("--j-min must satisfy 1 <= j-min <= j-max");
  const auto grid = log_grid(opts.j_min, hi, opts.points);

  std::vector<const NamedCurve*> columns;
  json absent = json::object();
  auto add = [&](const NamedCurve& c) {
    for (const auto* seen : columns) {
      if (seen->name == c.name) return;
    }
    if (c.curve) {
      columns.push_back(&c);
    } else {
      absent[c.name] = c.absent_reason;
    }
  };
  for (const auto& c : rep.headline) add(c);
  for (const auto& c : rep.intermediate) add(c);

  std::string csv = "j";
  for (const auto* c : columns) csv += ',' + c->name;
  csv += '\n';
  for (std::size_t j : grid) {
    csv += std::to_string(j);
    for (const auto* c : columns) csv += ',' + fmt((*c->curve)(static_cast<double>(j)));
    csv += '\n';
  }

  const std::string branch = to_string(r.case_id);
  auto constant = [&](double v) { return json{{"value", v}, {"branch", branch}}; };
  json j;
  j["command"] = "asym";
  j["config"] = to_json(config);
  j["case_id"] = branch;
  j["a"] = r.a;
  j["d_service"] = nullable(r.d_service);
  j["d_batch"] = nullable(r.d_batch);
  j["L"] = r.L;
  j["c_X"] = r.c_X;
  j["rho"] = rep.rho;
  j["psi"] = rep.psi;
  j["chi1"] = rep.chi1;
  j["beta1"] = rep.beta1;
  j["c_K"] = constant(rep.c_K);
  j["c_K_star"] = constant(rep.c_K_star);
  j["c_K_circ"] = constant(rep.c_K_circ);
  j["c_D0"] = constant(rep.c_D0);
  j["c_D0_identity"] = rep.c_D0_identity;
  j["c_D1"] = constant(rep.c_D1);
  j["refined_coefficient"] = rep.refined_coefficient;
  for (const auto* c : columns) {
    j["curves"][c->name] = {{"c", c->curve->c}, {"e", c->curve->e}, {"L", c->curve->L}};
  }
  j["absent"] = absent;
  write_file(out, csv);
  write_file(sidecar(out), dump(j));
  return kOk;
}

int cmd_sim(const RunConfig& config, const fs::path& out) {
  const ModelParams params = build_model(config);
  const SimEstimate est = replicate(params, config.sim, config.sim_mode);
  const bool retrial = config.sim_mode == SimMode::retrial;

  std::string csv = retrial ? "j,L_tail,L_tail_hw,D0_tail,D0_tail_hw,D1_tail,D1_tail_hw,L_pmf,upcrossings,reliable\n"
                            : "j,L_tail,L_tail_hw,L_pmf,upcrossings,reliable\n";
  for (std::size_t j = 0; j <= config.sim.j_max; ++j) {
    csv += std::to_string(j) + ',' + fmt(est.tail_L.mean[j]) + ',' + fmt(est.tail_L.half_width[j]);
    if (retrial) {
      csv += ',' + fmt(est.tail_D0.mean[j]) + ',' + fmt(est.tail_D0.half_width[j]) + ',' +
             fmt(est.tail_D1.mean[j]) + ',' + fmt(est.tail_D1.half_width[j]);
    }
    csv += ',' + fmt(est.pmf_L[j]) + ',' + std::to_string(est.upcrossings[j]) + ',' +
           (est.reliable[j] ? "1" : "0") + '\n';
  }

  json j;
  j["command"] = "sim";
  j["config"] = to_json(config);
  j["mode"] = to_string(config.sim_mode);
  j["rho"] = params.rho();
  j["busy_fraction"] = est.busy_fraction;
  j["busy_half_width"] = nullable(est.busy_half_width);
  j["events"] = est.events;
  j["replications"] = json::array();
  for (std::size_t r = 0; r < est.replications.size(); ++r) {
    const auto& rep = est.replications[r];
    j["replications"].push_back({{"index", r},
                                 {"seed", rep.seed},
                                 {"events", rep.events},
                                 {"busy_fraction", rep.busy_fraction}});
  }
  write_file(out, csv);
  write_file(sidecar(out), dump(j));
  return kOk;
}

int cmd_compare(const RunConfig& config, const fs::path& out, const CompareOptions& opts) {
  const ModelParams params = build_model(config);
  const AsymptoticReport rep = asymptotic_report(params);
  const ExactDistributions ex = compute_exact(params, config.trunc);
  const Regime& r = rep.regime;
  const CompareSettings& cs = config.compare;
  const auto window = doubling_window(cs.j_min, cs.j_max);

  auto curve_of = [&](const std::string& name) {
    for (const auto& c : rep.headline) {
      if (c.name == name) return *c.curve;
    }
    throw NumericalError("missing curve " + name);
  };

  std::vector<Check> checks;
  checks.push_back({"ratio_mu_inf", "P{L_mu > j} / P{L_inf > j}", 1.0 - cs.ratio_tol,
                    1.0 + cs.ratio_tol, false, {}});
  checks.push_back({"refined_difference",
                    "(P{L_mu > j} - P{L_inf > j}) / refined difference curve",
                    1.0 - cs.refined_tol, 1.0 + cs.refined_tol, true, {}});
  const std::vector<std::pair<std::string, const TruncSeries*>> curve_checks = {
      {"K", &ex.k}, {"D0", &ex.d0}, {"D1", &ex.d1}, {"L_inf", &ex.l_inf}};
  for (const auto& [name, series] : curve_checks) {
    checks.push_back({"curve_" + name, "P{" + name + " > j} / asymptotic curve",
                      1.0 - cs.curve_tol, 1.0 + cs.curve_tol, false, {}});
  }

  const TailCurve refined = curve_of("L_mu_minus_L_inf");
  for (std::size_t j : window) {
    const double lmu = ex.l_mu.tail(j);
    const double linf = ex.l_inf.tail(j);
    const bool usable = tail_usable(ex.l_mu, j) && tail_usable(ex.l_inf, j);
    const auto jd = static_cast<double>(j);
    checks[0].rows.push_back({j, lmu / linf, !usable});
    checks[1].rows.push_back({j, (lmu - linf) / refined(jd), !usable});
    for (std::size_t i = 0; i < curve_checks.size(); ++i) {
      const auto& [name, series] = curve_checks[i];
      checks[2 + i].rows.push_back(
          {j, series->tail(j) / curve_of(name)(jd), !tail_usable(*series, j)});
    }
  }

  json report;
  report["command"] = "compare";
  report["config"] = to_json(config);
  report["case_id"] = to_string(r.case_id);
  report["a"] = r.a;
  report["L"] = r.L;
  report["rho"] = rep.rho;
  report["psi"] = rep.psi;
  report["refined_coefficient"] = rep.refined_coefficient;
  report["window"] = window;
  bool all_pass = true;
  for (const Check& c : checks) {
    bool pass = false;
    report["checks"][c.name] = evaluate(c, pass);
    status_line(pass, c.name + " final=" + fmt(report["checks"][c.name]["final"].is_null()
                                                   ? std::nan("")
                                                   : report["checks"][c.name]["final"].get<double>()));
    all_pass = all_pass && pass;
  }

  // The refined difference assumes P{L_inf = j} is eventually decreasing.
  bool decreasing = true;
  std::size_t first_violation = 0;
  for (std::size_t j = cs.j_min; j < cs.j_max; ++j) {
    if (ex.l_inf[j + 1] > ex.l_inf[j]) {
      decreasing = false;
      first_violation = j;
      break;
    }
  }
  report["premise"]["l_inf_pmf_decreasing_on_window"] = decreasing;
  if (!decreasing) {
    report["premise"]["first_increase_at"] = first_violation;
    std::cout << "warning: P{L_inf = j} increases at j = " << first_violation << '\n';
  }

  if (opts.sim_csv) {
    const SimTable sim = read_sim_csv(*opts.sim_csv);
    const TruncSeries& target = sim.retrial ? ex.l_mu : ex.l_inf;
    json rows = json::array();
    bool pass = true;
    double worst = 0.0;
    for (const auto& [j, est] : sim.tail) {
      if (j > cs.sim_j_max || j > config.trunc) continue;
      const double exact = target.tail(j);
      const auto [mean, hw] = est;
      const bool ok = std::isfinite(hw) && std::abs(mean - exact) <= 3.0 * hw;
      const double z = hw > 0.0 ? (mean - exact) / hw : std::nan("");
      if (std::isfinite(z)) worst = std::max(worst, std::abs(z));
      pass = pass && ok;
      rows.push_back({{"j", j}, {"sim", mean}, {"half_width", nullable(hw)}, {"exact", exact},
                      {"delta_over_half_width", nullable(z)}, {"within_3_half_widths", ok}});
    }
    if (rows.empty()) pass = false;
    json s;
    s["target"] = sim.retrial ? "l_mu" : "l_inf";
    s["rows"] = rows;
    s["max_abs_delta_over_half_width"] = worst;
    s["pass"] = pass;
    report["checks"]["simulation"] = s;
    status_line(pass, "simulation max|delta|/hw=" + fmt(worst));
    all_pass = all_pass && pass;
  }
  report["pass"] = all_pass;

  if (opts.svg) {
    const auto grid = log_grid(1, std::max<std::size_t>(config.trunc / 2, 100), 160);
    std::vector<double> xs(grid.begin(), grid.end());
    auto exact_line = [&](const std::string& label, const std::string& color, const TruncSeries& s) {
      PlotSeries p{label, color, xs, {}, false};
      for (std::size_t j : grid) p.y.push_back(tail_usable(s, j) ? s.tail(j) : 0.0);
      return p;
    };
    auto curve_line = [&](const std::string& label, const std::string& color, const TailCurve& c) {
      PlotSeries p{label, color, xs, {}, true};
      for (double x : xs) p.y.push_back(c(x));
      return p;
    };
    PlotSeries diff{"L_mu - L_inf", "#9467bd", xs, {}, false};
    for (std::size_t j : grid) {
      const bool ok = tail_usable(ex.l_mu, j) && tail_usable(ex.l_inf, j);
      diff.y.push_back(ok ? ex.l_mu.tail(j) - ex.l_inf.tail(j) : 0.0);
    }
    const std::vector<PlotSeries> series = {
        exact_line("P{L_mu > j}", "#1f77b4", ex.l_mu),
        exact_line("P{L_inf > j}", "#17becf", ex.l_inf),
        curve_line("L_inf asymptote", "#17becf", curve_of("L_inf")),
        exact_line("P{D0 > j}", "#d62728", ex.d0),
        curve_line("D0 asymptote", "#d62728", curve_of("D0")),
        exact_line("P{D1 > j}", "#2ca02c", ex.d1),
        curve_line("D1 asymptote", "#2ca02c", curve_of("D1")),
        diff,
        curve_line("refined asymptote", "#9467bd", refined),
    };
    write_file(*opts.svg, loglog_svg("Exact tails and asymptotes (" + to_string(r.case_id) + ")", series));
  }

  write_file(out, dump(report));
  status_line(all_pass, "compare");
  return all_pass ? kOk : kCompareFail;
}

int cmd_check_lemma61(const Lemma61Options& opts, const fs::path& out) {
  const BatchSpec s1 = parse_batch_spec(opts.f1);
  const BatchSpec s2 = parse_batch_spec(opts.f2);
  if (s1.kind != "paretotail" || s2.kind != "paretotail") {
    throw ConfigError("check-lemma61 needs paretotail laws for --f1 and --f2");
  }
  if (std::abs(s1.d - (s2.d - 1.0)) >= 1e-9) {
    throw ConfigError("mismatched indices: --f1 d must equal --f2 d minus 1 (got " + fmt(s1.d) +
                      " and " + fmt(s2.d) + ")");
  }
  if (opts.t.empty()) throw ConfigError("--t needs at least one value");
  for (std::size_t t : opts.t) {
    if (t < 1 || t > opts.trunc) throw ConfigError("every --t value must lie in [1, --trunc]");
  }
  const BatchDist x1 = build_batch(s1);
  const BatchDist x2 = build_batch(s2);
  const double d = s2.d;
  const double mu2 = x2.chi1();
  const TruncSeries sum = mul(batch_pmf_series(x1, opts.trunc), batch_pmf_series(x2, opts.trunc));

  std::string csv = "t,sum_tail,f1_tail,f2_tail,numerator,denominator,ratio\n";
  for (std::size_t t : opts.t) {
    const auto tl = static_cast<long>(t);
    long double numerator = 0.0L;
    for (long k = 1; k <= tl; ++k) numerator += x1.pmf(k) * x2.tail(tl - k);
    const double f1 = x1.tail(tl);
    const double f2 = x2.tail(tl);
    const double denominator = (d - 1.0) * mu2 * f1 / static_cast<double>(t) + f2;
    const auto num = static_cast<double>(numerator);
    csv += std::to_string(t) + ',' + fmt(sum.tail(t)) + ',' + fmt(f1) + ',' + fmt(f2) + ',' +
           fmt(num) + ',' + fmt(denominator) + ',' + fmt(num / denominator) + '\n';
  }

  json j;
  j["command"] = "check-lemma61";
  j["f1"] = {{"theta", s1.theta}, {"d", s1.d}, {"c1", x1.tail_constant()}};
  j["f2"] = {{"theta", s2.theta}, {"d", s2.d}, {"c2", x2.tail_constant()}};
  j["d"] = d;
  j["mu_f2"] = mu2;
  j["trunc"] = opts.trunc;
  j["t"] = opts.t;
  write_file(out, csv);
  write_file(sidecar(out), dump(j));
  return kOk;
}

}  // namespace rtail::cli
