#include "rtail_cli/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace rtail::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

double to_double(std::string_view v, const std::string& where) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    fail(where, "expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

template <class Int>
Int to_integer(std::string_view v, const std::string& where) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    fail(where, "expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

using Setter = std::function<void(RunConfig&, std::string_view, const std::string&)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"model.lambda", [](RunConfig& c, std::string_view v, const std::string& w) { c.lambda = to_double(v, w); }},
      {"model.mu", [](RunConfig& c, std::string_view v, const std::string& w) { c.mu = to_double(v, w); }},
      {"model.batch.kind", [](RunConfig& c, std::string_view v, const std::string&) { c.batch.kind = v; }},
      {"model.batch.m", [](RunConfig& c, std::string_view v, const std::string& w) { c.batch.m = to_integer<long>(v, w); }},
      {"model.batch.p", [](RunConfig& c, std::string_view v, const std::string& w) { c.batch.p = to_double(v, w); }},
      {"model.batch.theta", [](RunConfig& c, std::string_view v, const std::string& w) { c.batch.theta = to_double(v, w); }},
      {"model.batch.d", [](RunConfig& c, std::string_view v, const std::string& w) { c.batch.d = to_double(v, w); }},
      {"model.service.kind", [](RunConfig& c, std::string_view v, const std::string&) { c.service.kind = v; }},
      {"model.service.rate", [](RunConfig& c, std::string_view v, const std::string& w) { c.service.rate = to_double(v, w); }},
      {"model.service.sigma", [](RunConfig& c, std::string_view v, const std::string& w) { c.service.sigma = to_double(v, w); }},
      {"model.service.d", [](RunConfig& c, std::string_view v, const std::string& w) { c.service.d = to_double(v, w); }},
      {"model.service.x_m", [](RunConfig& c, std::string_view v, const std::string& w) { c.service.x_m = to_double(v, w); }},
      {"exact.trunc", [](RunConfig& c, std::string_view v, const std::string& w) { c.trunc = to_integer<std::size_t>(v, w); }},
      {"sim.horizon", [](RunConfig& c, std::string_view v, const std::string& w) { c.sim.horizon = to_double(v, w); }},
      {"sim.warmup", [](RunConfig& c, std::string_view v, const std::string& w) { c.sim.warmup = to_double(v, w); }},
      {"sim.replications", [](RunConfig& c, std::string_view v, const std::string& w) { c.sim.replications = to_integer<int>(v, w); }},
      {"sim.base_seed", [](RunConfig& c, std::string_view v, const std::string& w) { c.sim.base_seed = to_integer<std::uint64_t>(v, w); }},
      {"sim.j_max", [](RunConfig& c, std::string_view v, const std::string& w) { c.sim.j_max = to_integer<std::size_t>(v, w); }},
      {"sim.mode", [](RunConfig& c, std::string_view v, const std::string& w) {
         if (v == "retrial") c.sim_mode = SimMode::retrial;
         else if (v == "standard") c.sim_mode = SimMode::standard;
         else fail(w, "sim.mode must be retrial or standard");
       }},
      {"compare.j_min", [](RunConfig& c, std::string_view v, const std::string& w) { c.compare.j_min = to_integer<std::size_t>(v, w); }},
      {"compare.j_max", [](RunConfig& c, std::string_view v, const std::string& w) { c.compare.j_max = to_integer<std::size_t>(v, w); }},
      {"compare.ratio_tol", [](RunConfig& c, std::string_view v, const std::string& w) { c.compare.ratio_tol = to_double(v, w); }},
      {"compare.refined_tol", [](RunConfig& c, std::string_view v, const std::string& w) { c.compare.refined_tol = to_double(v, w); }},
      {"compare.curve_tol", [](RunConfig& c, std::string_view v, const std::string& w) { c.compare.curve_tol = to_double(v, w); }},
      {"compare.sim_j_max", [](RunConfig& c, std::string_view v, const std::string& w) { c.compare.sim_j_max = to_integer<std::size_t>(v, w); }},
  };
  return table;
}

const std::map<std::string, std::set<std::string>, std::less<>> kBatchParams = {
    {"deterministic", {"m"}}, {"geometric", {"p"}}, {"paretotail", {"theta", "d"}}};
const std::map<std::string, std::set<std::string>, std::less<>> kServiceParams = {
    {"exponential", {"rate"}}, {"lomax", {"sigma", "d"}}, {"pareto", {"x_m", "d"}}};

/// Checks that the parameters given for a law match its kind exactly.
void check_law(const std::string& source, const std::string& prefix, const std::string& kind,
               const std::map<std::string, std::set<std::string>, std::less<>>& table,
               const std::set<std::string>& given) {
  const std::string kind_key = prefix + ".kind";
  if (kind.empty()) fail(source, "missing key " + kind_key);
  const auto it = table.find(kind);
  if (it == table.end()) fail(source, kind_key + ": unknown law '" + kind + "'");
  for (const auto& p : given) {
    if (!it->second.count(p)) fail(source, prefix + "." + p + " is not a parameter of " + kind);
  }
  for (const auto& p : it->second) {
    if (!given.count(p)) fail(source, "missing key " + prefix + "." + p + " for " + kind);
  }
}

}  // namespace

RunConfig parse_config(std::string_view text, const std::string& source) {
  RunConfig config;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    const std::string where = source + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(where, "expected 'section.key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto setter = setters().find(key);
    if (setter == setters().end()) fail(where, "unknown key '" + key + "'");
    if (!seen.insert(key).second) fail(where, "duplicate key '" + key + "'");
    if (value.empty()) fail(where, "empty value for '" + key + "'");
    setter->second(config, value, where);
  }

  for (const char* key : {"model.lambda", "model.mu"}) {
    if (!seen.count(key)) fail(source, std::string("missing key ") + key);
  }
  auto params_of = [&](const std::string& prefix) {
    std::set<std::string> out;
    for (const auto& k : seen) {
      if (k.rfind(prefix + ".", 0) == 0 && k != prefix + ".kind") out.insert(k.substr(prefix.size() + 1));
    }
    return out;
  };
  check_law(source, "model.batch", config.batch.kind, kBatchParams, params_of("model.batch"));
  check_law(source, "model.service", config.service.kind, kServiceParams, params_of("model.service"));

  if (config.trunc < 1) fail(source, "exact.trunc must be >= 1");
  if (config.sim.replications < 1) fail(source, "sim.replications must be >= 1");
  if (config.compare.j_min < 1 || config.compare.j_min > config.compare.j_max) {
    fail(source, "compare.j_min must satisfy 1 <= j_min <= j_max");
  }
  if (config.compare.j_max > config.trunc) fail(source, "compare.j_max exceeds exact.trunc");
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

BatchDist build_batch(const BatchSpec& spec) {
  if (spec.kind == "deterministic") return BatchDist::deterministic(spec.m);
  if (spec.kind == "geometric") return BatchDist::geometric(spec.p);
  if (spec.kind == "paretotail") return BatchDist::pareto_tail(spec.theta, spec.d);
  throw ConfigError("unknown batch law '" + spec.kind + "'");
}

ModelParams build_model(const RunConfig& c) {
  ServiceDist service = [&] {
    if (c.service.kind == "exponential") return ServiceDist::exponential(c.service.rate);
    if (c.service.kind == "lomax") return ServiceDist::lomax(c.service.sigma, c.service.d);
    if (c.service.kind == "pareto") return ServiceDist::pareto(c.service.x_m, c.service.d);
    throw ConfigError("unknown service law '" + c.service.kind + "'");
  }();
  return ModelParams(c.lambda, c.mu, build_batch(c.batch), std::move(service));
}

BatchSpec parse_batch_spec(std::string_view text) {
  const std::string where = "law '" + std::string(text) + "'";
  const auto colon = text.find(':');
  BatchSpec spec;
  spec.kind = std::string(trim(text.substr(0, colon)));
  std::set<std::string> given;
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = trim(rest.substr(0, comma));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) fail(where, "expected name=value");
      const std::string name(trim(item.substr(0, eq)));
      const std::string_view value = trim(item.substr(eq + 1));
      if (!given.insert(name).second) fail(where, "duplicate parameter " + name);
      if (name == "m") spec.m = to_integer<long>(value, where);
      else if (name == "p") spec.p = to_double(value, where);
      else if (name == "theta") spec.theta = to_double(value, where);
      else if (name == "d") spec.d = to_double(value, where);
      else fail(where, "unknown parameter " + name);
    }
  }
  check_law(where, "law", spec.kind, kBatchParams, given);
  return spec;
}

std::string to_string(SimMode mode) {
  return mode == SimMode::retrial ? "retrial" : "standard";
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["model"]["lambda"] = c.lambda;
  j["model"]["mu"] = c.mu;
  auto& b = j["model"]["batch"];
  b["kind"] = c.batch.kind;
  if (c.batch.kind == "deterministic") b["m"] = c.batch.m;
  if (c.batch.kind == "geometric") b["p"] = c.batch.p;
  if (c.batch.kind == "paretotail") {
    b["theta"] = c.batch.theta;
    b["d"] = c.batch.d;
  }
  auto& s = j["model"]["service"];
  s["kind"] = c.service.kind;
  if (c.service.kind == "exponential") s["rate"] = c.service.rate;
  if (c.service.kind == "lomax") {
    s["sigma"] = c.service.sigma;
    s["d"] = c.service.d;
  }
  if (c.service.kind == "pareto") {
    s["x_m"] = c.service.x_m;
    s["d"] = c.service.d;
  }
  j["exact"]["trunc"] = c.trunc;
  j["sim"]["horizon"] = c.sim.horizon;
  j["sim"]["warmup"] = c.sim.warmup < 0.0 ? 0.05 * c.sim.horizon : c.sim.warmup;
  j["sim"]["replications"] = c.sim.replications;
  j["sim"]["base_seed"] = c.sim.base_seed;
  j["sim"]["j_max"] = c.sim.j_max;
  j["sim"]["mode"] = to_string(c.sim_mode);
  j["compare"]["j_min"] = c.compare.j_min;
  j["compare"]["j_max"] = c.compare.j_max;
  j["compare"]["ratio_tol"] = c.compare.ratio_tol;
  j["compare"]["refined_tol"] = c.compare.refined_tol;
  j["compare"]["curve_tol"] = c.compare.curve_tol;
  j["compare"]["sim_j_max"] = c.compare.sim_j_max;
  return j;
}

}  // namespace rtail::cli
