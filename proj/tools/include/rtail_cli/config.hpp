#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "rtail/error.hpp"
#include "rtail/model.hpp"
#include "rtail/simulate.hpp"

namespace rtail::cli {

/// Malformed config file or command line (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct BatchSpec {
  std::string kind;  // deterministic | geometric | paretotail
  long m = 1;
  double p = 0.0;
  double theta = 0.0;
  double d = 0.0;
};

struct ServiceSpec {
  std::string kind;  // exponential | lomax | pareto
  double rate = 0.0;
  double sigma = 0.0;
  double d = 0.0;
  double x_m = 0.0;
};

struct CompareSettings {
  std::size_t j_min = 256;
  std::size_t j_max = 1024;
  double ratio_tol = 0.05;
  double refined_tol = 0.3;
  double curve_tol = 0.3;
  std::size_t sim_j_max = 20;
};

struct RunConfig {
  double lambda = 0.0;
  double mu = 0.0;
  BatchSpec batch;
  ServiceSpec service;
  std::size_t trunc = 8192;
  SimConfig sim;
  SimMode sim_mode = SimMode::retrial;
  CompareSettings compare;
};

/// Flat `section.key = value` lines; `#` or `;` starts a comment line.
/// Unknown keys, duplicates, parameters of another law and missing
/// model keys are all ConfigErrors.
RunConfig parse_config(std::string_view text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Throws DomainError for out-of-range parameters.
ModelParams build_model(const RunConfig& config);
BatchDist build_batch(const BatchSpec& spec);

/// "paretotail:theta=2,d=2.5" style inline law.
BatchSpec parse_batch_spec(std::string_view text);

/// Every setting, defaults included.
nlohmann::json to_json(const RunConfig& config);

std::string to_string(SimMode mode);

}  // namespace rtail::cli
