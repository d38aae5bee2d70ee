#include "rtail/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "rtail/error.hpp"

namespace rtail {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kReliableUpcrossings = 100;

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : gen_(seed) {}
  /// Uniform on (0, 1), never 0 or 1.
  double uniform() { return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53; }
  double exponential(double rate) { return -std::log(uniform()) / rate; }

 private:
  std::mt19937_64 gen_;
};

double resolved_warmup(const SimConfig& c) {
  return c.warmup < 0.0 ? 0.05 * c.horizon : c.warmup;
}

void validate(const ModelParams& params, const SimConfig& c) {
  params.require_stable();
  const double warmup = resolved_warmup(c);
  if (!(c.horizon > warmup) || !std::isfinite(c.horizon)) {
    throw DomainError("simulation horizon must exceed the warmup");
  }
  if (c.replications < 1) throw DomainError("replications must be >= 1");
}

/// Time-weighted occupancy of (server state, orbit or queue level).
class Occupancy {
 public:
  Occupancy(std::size_t j_max, double warmup)
      : j_max_(j_max), warmup_(warmup), idle_(j_max + 2, 0.0), busy_(j_max + 2, 0.0),
        up_(j_max + 1, 0) {}

  /// State (busy, n) held over [from, to).
  void hold(bool busy, std::size_t n, double from, double to) {
    from = std::max(from, warmup_);
    if (!(to > from)) return;
    auto& h = busy ? busy_ : idle_;
    h[std::min(n, j_max_ + 1)] += to - from;
  }

  void level_change(std::size_t before, std::size_t after, double at) {
    if (at < warmup_ || after <= before) return;
    const std::size_t hi = std::min(after, j_max_ + 1);
    for (std::size_t j = before; j < hi; ++j) ++up_[j];
  }

  const std::vector<double>& idle() const { return idle_; }
  const std::vector<double>& busy() const { return busy_; }
  const std::vector<std::uint64_t>& upcrossings() const { return up_; }

 private:
  std::size_t j_max_;
  double warmup_;
  std::vector<double> idle_;
  std::vector<double> busy_;
  std::vector<std::uint64_t> up_;
};

std::vector<double> suffix_tails(const std::vector<double>& pmf, double over,
                                 std::size_t j_max) {
  std::vector<double> tail(j_max + 1, 0.0);
  long double acc = over;
  for (std::size_t j = pmf.size(); j-- > 0;) {
    if (j <= j_max) tail[j] = static_cast<double>(acc);
    acc += pmf[j];
  }
  return tail;
}

void run_retrial(const ModelParams& params, const SimConfig& c, Stream& rng,
                 Occupancy& occ, std::uint64_t& events) {
  const double lambda = params.lambda();
  const double mu = params.mu();
  const BatchDist& batch = params.batch();
  const ServiceDist& service = params.service();
  double t = 0.0;
  std::size_t n = 0;
  bool busy = false;
  double done = 0.0;
  while (t < c.horizon) {
    if (!busy) {
      const double total = lambda + static_cast<double>(n) * mu;
      const double next = std::min(t + rng.exponential(total), c.horizon);
      occ.hold(false, n, t, next);
      t = next;
      if (t >= c.horizon) break;
      ++events;
      if (rng.uniform() * total < lambda) {
        const auto x = static_cast<std::size_t>(batch.sample(rng.uniform()));
        occ.level_change(n, n + x, t);
        n += x - 1;
      } else {
        --n;
      }
      busy = true;
      done = t + service.sample_from_survival(rng.uniform());
    } else {
      const double arrival = t + rng.exponential(lambda);
      const double next = std::min({arrival, done, c.horizon});
      occ.hold(true, n, t, next);
      t = next;
      if (t >= c.horizon) break;
      ++events;
      if (arrival < done) {
        const auto x = static_cast<std::size_t>(batch.sample(rng.uniform()));
        occ.level_change(n + 1, n + 1 + x, t);
        n += x;
      } else {
        busy = false;
      }
    }
  }
}

void run_standard(const ModelParams& params, const SimConfig& c, Stream& rng,
                  Occupancy& occ, std::uint64_t& events) {
  const double lambda = params.lambda();
  const BatchDist& batch = params.batch();
  const ServiceDist& service = params.service();
  double t = 0.0;
  std::size_t n = 0;
  double done = std::numeric_limits<double>::infinity();
  double arrival = rng.exponential(lambda);
  while (t < c.horizon) {
    const double next = std::min({arrival, done, c.horizon});
    // Occupancy is indexed by the number in system; the busy flag is n > 0.
    occ.hold(n > 0, n, t, next);
    t = next;
    if (t >= c.horizon) break;
    ++events;
    if (arrival <= done) {
      const auto x = static_cast<std::size_t>(batch.sample(rng.uniform()));
      occ.level_change(n, n + x, t);
      if (n == 0) done = t + service.sample_from_survival(rng.uniform());
      n += x;
      arrival = t + rng.exponential(lambda);
    } else {
      --n;
      done = n > 0 ? t + service.sample_from_survival(rng.uniform())
                   : std::numeric_limits<double>::infinity();
    }
  }
}

SeriesEstimate summarize(const std::vector<ReplicationResult>& reps,
                         std::vector<double> ReplicationResult::*field) {
  SeriesEstimate s;
  if (reps.empty()) return s;
  const std::size_t len = (reps.front().*field).size();
  const auto r = static_cast<double>(reps.size());
  s.mean.assign(len, 0.0);
  s.half_width.assign(len, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t j = 0; j < len; ++j) {
    double sum = 0.0;
    for (const auto& rep : reps) sum += (rep.*field)[j];
    const double mean = sum / r;
    s.mean[j] = mean;
    if (reps.size() > 1) {
      double ss = 0.0;
      for (const auto& rep : reps) ss += ((rep.*field)[j] - mean) * ((rep.*field)[j] - mean);
      s.half_width[j] = 1.96 * std::sqrt(ss / (r - 1.0)) / std::sqrt(r);
    }
  }
  return s;
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t base_seed, std::uint64_t r) {
  return splitmix64(base_seed + (r + 1) * kGolden);
}

ReplicationResult run_replication(const ModelParams& params, const SimConfig& config,
                                  SimMode mode, std::uint64_t r) {
  validate(params, config);
  const double warmup = resolved_warmup(config);
  const std::size_t jm = config.j_max;
  ReplicationResult out;
  out.seed = derive_stream_seed(config.base_seed, r);
  Stream rng(out.seed);
  Occupancy occ(jm, warmup);
  if (mode == SimMode::retrial) {
    run_retrial(params, config, rng, occ, out.events);
  } else {
    run_standard(params, config, rng, occ, out.events);
  }

  const double span = config.horizon - warmup;
  std::vector<double> idle = occ.idle();
  std::vector<double> busy = occ.busy();
  for (double& v : idle) v /= span;
  for (double& v : busy) v /= span;
  out.upcrossings = occ.upcrossings();
  out.upcrossings.resize(jm + 1);

  long double busy_total = 0.0L;
  long double idle_total = 0.0L;
  for (double v : busy) busy_total += v;
  for (double v : idle) idle_total += v;
  out.busy_fraction = static_cast<double>(busy_total);

  out.pmf_L.assign(jm + 1, 0.0);
  if (mode == SimMode::retrial) {
    // L = orbit + server. Buckets idle[jm + 1], busy[jm], busy[jm + 1] lie above jm.
    for (std::size_t j = 0; j <= jm; ++j) {
      out.pmf_L[j] = idle[j] + (j > 0 ? busy[j - 1] : 0.0);
    }
    out.over_L = idle[jm + 1] + busy[jm] + busy[jm + 1];
    std::vector<double> d0(jm + 1), d1(jm + 1);
    for (std::size_t j = 0; j <= jm; ++j) {
      d0[j] = idle_total > 0 ? idle[j] / static_cast<double>(idle_total) : 0.0;
      d1[j] = busy_total > 0 ? busy[j] / static_cast<double>(busy_total) : 0.0;
    }
    out.tail_D0 = suffix_tails(d0, idle_total > 0 ? idle[jm + 1] / static_cast<double>(idle_total) : 0.0, jm);
    out.tail_D1 = suffix_tails(d1, busy_total > 0 ? busy[jm + 1] / static_cast<double>(busy_total) : 0.0, jm);
    out.idle = std::move(idle);
    out.busy = std::move(busy);
  } else {
    for (std::size_t j = 0; j <= jm; ++j) out.pmf_L[j] = idle[j] + busy[j];
    out.over_L = idle[jm + 1] + busy[jm + 1];
  }
  out.tail_L = suffix_tails(out.pmf_L, out.over_L, jm);
  return out;
}

SimEstimate replicate(const ModelParams& params, const SimConfig& config, SimMode mode) {
  validate(params, config);
  const auto reps = static_cast<std::size_t>(config.replications);
  std::vector<ReplicationResult> results(reps);
  std::vector<std::exception_ptr> errors(reps);

  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, reps);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t r = w; r < reps; r += workers) {
        try {
          results[r] = run_replication(params, config, mode, r);
        } catch (...) {
          errors[r] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SimEstimate est;
  est.mode = mode;
  est.config = config;
  est.config.warmup = resolved_warmup(config);
  const auto r = static_cast<double>(reps);
  double sum = 0.0;
  for (const auto& rep : results) sum += rep.busy_fraction;
  est.busy_fraction = sum / r;
  est.busy_half_width = std::numeric_limits<double>::quiet_NaN();
  if (reps > 1) {
    double ss = 0.0;
    for (const auto& rep : results) {
      ss += (rep.busy_fraction - est.busy_fraction) * (rep.busy_fraction - est.busy_fraction);
    }
    est.busy_half_width = 1.96 * std::sqrt(ss / (r - 1.0)) / std::sqrt(r);
  }
  est.pmf_L = summarize(results, &ReplicationResult::pmf_L).mean;
  est.tail_L = summarize(results, &ReplicationResult::tail_L);
  if (mode == SimMode::retrial) {
    est.tail_D0 = summarize(results, &ReplicationResult::tail_D0);
    est.tail_D1 = summarize(results, &ReplicationResult::tail_D1);
  }
  est.upcrossings.assign(config.j_max + 1, 0);
  for (const auto& rep : results) {
    est.events += rep.events;
    for (std::size_t j = 0; j <= config.j_max; ++j) est.upcrossings[j] += rep.upcrossings[j];
  }
  est.reliable.resize(config.j_max + 1);
  for (std::size_t j = 0; j <= config.j_max; ++j) {
    est.reliable[j] = est.upcrossings[j] >= kReliableUpcrossings;
  }
  est.replications = std::move(results);
  return est;
}

SimEstimate simulate_retrial(const ModelParams& params, const SimConfig& config) {
  return replicate(params, config, SimMode::retrial);
}

SimEstimate simulate_standard(const ModelParams& params, const SimConfig& config) {
  return replicate(params, config, SimMode::standard);
}

}  // namespace rtail
