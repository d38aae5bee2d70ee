#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rtail_cli/config.hpp"

namespace rtail::cli {

namespace fs = std::filesystem;

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kConfig = 2,
  kStability = 3,
  kNumerical = 4,
  kUnsupported = 5,
  kCompareFail = 6,
};

/// CSV with j and pmf/tail columns for the seven exact series; JSON sidecar
/// at `<out>.json`.
int cmd_exact(const RunConfig& config, const fs::path& out);

struct AsymOptions {
  std::size_t j_min = 1;
  /// 0 means exact.trunc.
  std::size_t j_max = 0;
  std::size_t points = 64;
};
int cmd_asym(const RunConfig& config, const fs::path& out, const AsymOptions& opts);

int cmd_sim(const RunConfig& config, const fs::path& out);

struct CompareOptions {
  std::optional<fs::path> svg;
  std::optional<fs::path> sim_csv;
};
/// Returns kCompareFail when any check fails.
int cmd_compare(const RunConfig& config, const fs::path& out, const CompareOptions& opts);

struct Lemma61Options {
  std::string f1;
  std::string f2;
  std::vector<std::size_t> t;
  std::size_t trunc = 16384;
};
int cmd_check_lemma61(const Lemma61Options& opts, const fs::path& out);

/// 17 significant digits; "nan"/"inf" spelled out.
std::string fmt(double x);

/// Rounded log-spaced integers in [lo, hi], deduplicated, hi included.
std::vector<std::size_t> log_grid(std::size_t lo, std::size_t hi, std::size_t points);

/// Writes through a temporary file so readers never see a partial result.
void write_file(const fs::path& path, const std::string& content);

}  // namespace rtail::cli
