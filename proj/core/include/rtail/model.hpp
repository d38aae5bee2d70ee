#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <variant>

#include "rtail/trunc_series.hpp"

namespace rtail {

/// Tail index of a light-tailed law (the c = 0 convention applies).
inline constexpr double kLightTail = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Batch-size laws on {1, 2, ...}
// ---------------------------------------------------------------------------

struct Deterministic {
  long m;
};

/// P{X = k} = (1 - p) p^{k-1}, k >= 1.
struct Geometric {
  double p;
};

/// P{X > j} = (theta / (theta + j))^d for j >= 0.
struct ParetoTail {
  double theta;
  double d;
};

class BatchDist {
 public:
  using Law = std::variant<Deterministic, Geometric, ParetoTail>;

  static BatchDist deterministic(long m);
  static BatchDist geometric(double p);
  static BatchDist pareto_tail(double theta, double d);

  const Law& law() const { return law_; }

  /// P{X = j}; zero for j < 1.
  double pmf(long j) const;
  /// P{X > j} for j >= 0.
  double tail(long j) const;
  double chi1() const { return chi1_; }
  /// d_X, or kLightTail.
  double tail_index() const;
  /// c_X in P{X > j} ~ c_X j^{-d_X}; 0 for light laws.
  double tail_constant() const;
  /// Inverse-CDF sample from u in (0, 1).
  long sample(double u) const;
  std::string describe() const;

 private:
  explicit BatchDist(Law law);
  Law law_;
  double chi1_ = 1.0;
};

// ---------------------------------------------------------------------------
// Service-time laws on (0, inf)
// ---------------------------------------------------------------------------

struct Exponential {
  double rate;
};

/// P{B > x} = (1 + x / sigma)^{-d}.
struct Lomax {
  double sigma;
  double d;
};

/// P{B > x} = (x_m / x)^d for x >= x_m.
struct Pareto {
  double x_m;
  double d;
};

/// Which law is mixed over: B itself or its equilibrium law B^(e) with
/// survival beta1^{-1} int_x^inf P{B > t} dt.
enum class ServiceView { service, equilibrium };

class ServiceDist {
 public:
  using Law = std::variant<Exponential, Lomax, Pareto>;

  static ServiceDist exponential(double rate);
  static ServiceDist lomax(double sigma, double d);
  static ServiceDist pareto(double x_m, double d);

  const Law& law() const { return law_; }

  /// beta_1.
  double mean() const;
  double survival(double x) const;
  double density(double x) const;
  double survival(double x, ServiceView view) const;
  double density(double x, ServiceView view) const;
  /// d_B, or kLightTail.
  double tail_index() const;
  /// Constant slowly varying part: P{B > x} ~ L x^{-d_B}; 0 when light.
  double slowly_varying_constant() const;
  /// Natural scale of the law (sigma, x_m or 1/rate).
  double scale() const;
  /// Point where the density is not smooth (x_m for Pareto), else 0.
  double kink() const;

  /// Inverse CDF at u in (0, 1).
  double sample(double u) const;
  /// Same quantile written in terms of v = 1 - u; keeps precision when the
  /// caller draws the survival uniform directly.
  double sample_from_survival(double v) const;
  std::string describe() const;

 private:
  explicit ServiceDist(Law law);
  Law law_;
};

/// LST beta(s) = E exp(-s B). Closed form for Exponential, adaptive
/// Gauss-Legendre otherwise (absolute error well below 1e-10).
double service_lst(const ServiceDist& service, double s);

// ---------------------------------------------------------------------------
// Full model
// ---------------------------------------------------------------------------

class ModelParams {
 public:
  /// Throws DomainError unless lambda > 0 and mu > 0. Stability is checked
  /// by consumers through require_stable().
  ModelParams(double lambda, double mu, BatchDist batch, ServiceDist service);

  double lambda() const { return lambda_; }
  double mu() const { return mu_; }
  const BatchDist& batch() const { return batch_; }
  const ServiceDist& service() const { return service_; }

  double chi1() const { return batch_.chi1(); }
  double beta1() const { return service_.mean(); }
  double rho() const { return lambda_ * beta1() * chi1(); }
  bool is_stable() const { return rho() < 1.0; }
  /// Throws StabilityError when rho >= 1.
  void require_stable() const;
  /// lambda (rho + chi1 - 1) / (mu (1 - rho)); requires stability.
  double psi() const;

 private:
  double lambda_;
  double mu_;
  BatchDist batch_;
  ServiceDist service_;
};

/// rho = lambda beta_1 chi_1.
inline double rho(const ModelParams& params) { return params.rho(); }

/// Batch pmf as a series: coefficient j is P{X = j}; deficit P{X > N}.
TruncSeries batch_pmf_series(const BatchDist& batch, std::size_t trunc);

/// Weights p_k = int exp(-lambda x) (lambda x)^k / k! dB(x) (or dB^(e)) for
/// k <= k_max, i.e. the pmf of the number of batches arriving in a service
/// (equilibrium service) time. The deficit is P{N_B > k_max}.
TruncSeries mixed_poisson_weights(const ModelParams& params, ServiceView which,
                                  std::size_t k_max);

}  // namespace rtail
