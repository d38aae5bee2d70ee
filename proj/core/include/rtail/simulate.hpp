#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rtail/model.hpp"

namespace rtail {

enum class SimMode { retrial, standard };

struct SimConfig {
  double horizon = 1e6;
  /// Negative means 5% of the horizon.
  double warmup = -1.0;
  int replications = 1;
  std::uint64_t base_seed = 1;
  /// Tails are reported for j = 0..j_max; larger levels share a top bucket.
  std::size_t j_max = 64;
};

/// Seed of replication r: splitmix64 applied to base_seed + (r + 1) * golden.
std::uint64_t derive_stream_seed(std::uint64_t base_seed, std::uint64_t r);

/// One replication. Time fractions are over [warmup, horizon].
struct ReplicationResult {
  std::uint64_t seed = 0;
  std::uint64_t events = 0;
  double busy_fraction = 0.0;
  /// P{L = j}, j = 0..j_max, and P{L > j_max}.
  std::vector<double> pmf_L;
  double over_L = 0.0;
  /// Retrial mode only: time fractions of (idle, orbit n) and (busy, orbit n),
  /// n = 0..j_max + 1 with the last entry holding n > j_max.
  std::vector<double> idle;
  std::vector<double> busy;
  /// Upcrossings of level j by L.
  std::vector<std::uint64_t> upcrossings;
  std::vector<double> tail_L;
  std::vector<double> tail_D0;
  std::vector<double> tail_D1;
};

/// Mean across replications with 95% normal half-widths (NaN when R = 1).
struct SeriesEstimate {
  std::vector<double> mean;
  std::vector<double> half_width;
};

struct SimEstimate {
  SimMode mode = SimMode::retrial;
  SimConfig config;
  double busy_fraction = 0.0;
  double busy_half_width = 0.0;
  std::vector<double> pmf_L;
  /// P{L > j}: L_mu in retrial mode, L_inf in standard mode.
  SeriesEstimate tail_L;
  /// Orbit tails given idle (D0) and busy (D1); empty in standard mode.
  SeriesEstimate tail_D0;
  SeriesEstimate tail_D1;
  std::vector<std::uint64_t> upcrossings;
  /// At least 100 upcrossings over all replications.
  std::vector<bool> reliable;
  std::uint64_t events = 0;
  std::vector<ReplicationResult> replications;
};

ReplicationResult run_replication(const ModelParams& params, const SimConfig& config,
                                  SimMode mode, std::uint64_t r);

/// Runs every replication (in parallel) and aggregates in index order.
SimEstimate replicate(const ModelParams& params, const SimConfig& config, SimMode mode);

SimEstimate simulate_retrial(const ModelParams& params, const SimConfig& config);
SimEstimate simulate_standard(const ModelParams& params, const SimConfig& config);

}  // namespace rtail
