#include "rtail/model.hpp"

#include <cmath>
#include <sstream>

#include "rtail/detail/mixing.hpp"
#include "rtail/error.hpp"
#include "rtail/gauss_legendre.hpp"

namespace rtail {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr long kChi1Cutoff = 1'000'000;
constexpr double kMaxBatchSample = 9.0e15;

void require_unit_open(double u, const char* what) {
  if (!(u > 0.0 && u < 1.0)) {
    std::ostringstream msg;
    msg << what << ": u = " << u << " outside (0, 1)";
    throw DomainError(msg.str());
  }
}

/// sum_{j>=0} (theta / (theta + j))^d: direct sum below the cutoff plus an
/// Euler-Maclaurin remainder whose leading term is the Karamata integral.
double pareto_tail_chi1(double theta, double d) {
  long double head = 0.0L;
  for (long j = kChi1Cutoff - 1; j >= 0; --j) {
    head += std::pow(theta / (theta + static_cast<double>(j)), d);
  }
  const double x = theta + static_cast<double>(kChi1Cutoff);
  const double scale = std::pow(theta, d);
  const double remainder =
      scale * (std::pow(x, 1.0 - d) / (d - 1.0) + 0.5 * std::pow(x, -d) +
               d * std::pow(x, -d - 1.0) / 12.0 -
               d * (d + 1.0) * (d + 2.0) * std::pow(x, -d - 3.0) / 720.0);
  return static_cast<double>(head + remainder);
}

}  // namespace

// ---------------------------------------------------------------------------
// BatchDist
// ---------------------------------------------------------------------------

BatchDist::BatchDist(Law law) : law_(law) {
  chi1_ = std::visit(
      Overloaded{
          [](const Deterministic& x) { return static_cast<double>(x.m); },
          [](const Geometric& x) { return 1.0 / (1.0 - x.p); },
          [](const ParetoTail& x) { return pareto_tail_chi1(x.theta, x.d); },
      },
      law_);
}

BatchDist BatchDist::deterministic(long m) {
  if (m < 1) throw DomainError("deterministic batch size must be >= 1");
  return BatchDist(Deterministic{m});
}

BatchDist BatchDist::geometric(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("geometric batch parameter p must lie in (0, 1)");
  }
  return BatchDist(Geometric{p});
}

BatchDist BatchDist::pareto_tail(double theta, double d) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw DomainError("paretotail batch theta must be positive");
  }
  if (!(d > 1.0) || !std::isfinite(d)) {
    throw DomainError("paretotail batch index d must exceed 1 (finite mean)");
  }
  return BatchDist(ParetoTail{theta, d});
}

double BatchDist::tail(long j) const {
  if (j < 0) return 1.0;
  return std::visit(
      Overloaded{
          [j](const Deterministic& x) { return j < x.m ? 1.0 : 0.0; },
          [j](const Geometric& x) { return std::pow(x.p, static_cast<double>(j)); },
          [j](const ParetoTail& x) {
            return std::pow(x.theta / (x.theta + static_cast<double>(j)), x.d);
          },
      },
      law_);
}

double BatchDist::pmf(long j) const {
  if (j < 1) return 0.0;
  return std::visit(
      Overloaded{
          [j](const Deterministic& x) { return j == x.m ? 1.0 : 0.0; },
          [j](const Geometric& x) {
            return (1.0 - x.p) * std::pow(x.p, static_cast<double>(j - 1));
          },
          [this, j](const ParetoTail& x) {
            // tail(j-1) - tail(j) without cancellation.
            const double ratio = -1.0 / (x.theta + static_cast<double>(j));
            return tail(j - 1) * -std::expm1(x.d * std::log1p(ratio));
          },
      },
      law_);
}

double BatchDist::tail_index() const {
  if (const auto* x = std::get_if<ParetoTail>(&law_)) return x->d;
  return kLightTail;
}

double BatchDist::tail_constant() const {
  if (const auto* x = std::get_if<ParetoTail>(&law_)) return std::pow(x->theta, x->d);
  return 0.0;
}

long BatchDist::sample(double u) const {
  require_unit_open(u, "sample_batch");
  return std::visit(
      Overloaded{
          [](const Deterministic& x) { return x.m; },
          [u](const Geometric& x) {
            const double k = std::floor(std::log(u) / std::log(x.p));
            return 1 + static_cast<long>(std::min(k, kMaxBatchSample));
          },
          [u](const ParetoTail& x) {
            const double k = std::floor(x.theta * std::expm1(-std::log(u) / x.d));
            return 1 + static_cast<long>(std::min(k, kMaxBatchSample));
          },
      },
      law_);
}

std::string BatchDist::describe() const {
  std::ostringstream out;
  out.precision(17);
  std::visit(Overloaded{
                 [&](const Deterministic& x) { out << "deterministic(m=" << x.m << ")"; },
                 [&](const Geometric& x) { out << "geometric(p=" << x.p << ")"; },
                 [&](const ParetoTail& x) {
                   out << "paretotail(theta=" << x.theta << ", d=" << x.d << ")";
                 },
             },
             law_);
  return out.str();
}

// ---------------------------------------------------------------------------
// ServiceDist
// ---------------------------------------------------------------------------

ServiceDist::ServiceDist(Law law) : law_(law) {}

ServiceDist ServiceDist::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw DomainError("exponential service rate must be positive");
  }
  return ServiceDist(Exponential{rate});
}

ServiceDist ServiceDist::lomax(double sigma, double d) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("lomax service sigma must be positive");
  }
  if (!(d > 1.0) || !std::isfinite(d)) {
    throw DomainError("lomax service index d must exceed 1 (finite mean)");
  }
  return ServiceDist(Lomax{sigma, d});
}

ServiceDist ServiceDist::pareto(double x_m, double d) {
  if (!(x_m > 0.0) || !std::isfinite(x_m)) {
    throw DomainError("pareto service x_m must be positive");
  }
  if (!(d > 1.0) || !std::isfinite(d)) {
    throw DomainError("pareto service index d must exceed 1 (finite mean)");
  }
  return ServiceDist(Pareto{x_m, d});
}

double ServiceDist::mean() const {
  return std::visit(Overloaded{
                        [](const Exponential& s) { return 1.0 / s.rate; },
                        [](const Lomax& s) { return s.sigma / (s.d - 1.0); },
                        [](const Pareto& s) { return s.x_m * s.d / (s.d - 1.0); },
                    },
                    law_);
}

double ServiceDist::survival(double x) const {
  if (x <= 0.0) return 1.0;
  return std::visit(
      Overloaded{
          [x](const Exponential& s) { return std::exp(-s.rate * x); },
          [x](const Lomax& s) { return std::pow(1.0 + x / s.sigma, -s.d); },
          [x](const Pareto& s) { return x < s.x_m ? 1.0 : std::pow(s.x_m / x, s.d); },
      },
      law_);
}

double ServiceDist::density(double x) const {
  if (x < 0.0) return 0.0;
  return std::visit(
      Overloaded{
          [x](const Exponential& s) { return s.rate * std::exp(-s.rate * x); },
          [x](const Lomax& s) {
            return s.d / s.sigma * std::pow(1.0 + x / s.sigma, -s.d - 1.0);
          },
          [x](const Pareto& s) {
            return x < s.x_m ? 0.0 : s.d / s.x_m * std::pow(s.x_m / x, s.d + 1.0);
          },
      },
      law_);
}

double ServiceDist::survival(double x, ServiceView view) const {
  if (view == ServiceView::service) return survival(x);
  if (x <= 0.0) return 1.0;
  return std::visit(
      Overloaded{
          [x](const Exponential& s) { return std::exp(-s.rate * x); },
          [x](const Lomax& s) { return std::pow(1.0 + x / s.sigma, 1.0 - s.d); },
          [x, this](const Pareto& s) {
            if (x < s.x_m) return (mean() - x) / mean();
            return std::pow(s.x_m / x, s.d - 1.0) / s.d;
          },
      },
      law_);
}

double ServiceDist::density(double x, ServiceView view) const {
  if (view == ServiceView::service) return density(x);
  if (x < 0.0) return 0.0;
  return survival(x) / mean();
}

double ServiceDist::tail_index() const {
  return std::visit(Overloaded{
                        [](const Exponential&) { return kLightTail; },
                        [](const Lomax& s) { return s.d; },
                        [](const Pareto& s) { return s.d; },
                    },
                    law_);
}

double ServiceDist::slowly_varying_constant() const {
  return std::visit(Overloaded{
                        [](const Exponential&) { return 0.0; },
                        [](const Lomax& s) { return std::pow(s.sigma, s.d); },
                        [](const Pareto& s) { return std::pow(s.x_m, s.d); },
                    },
                    law_);
}

double ServiceDist::scale() const {
  return std::visit(Overloaded{
                        [](const Exponential& s) { return 1.0 / s.rate; },
                        [](const Lomax& s) { return s.sigma; },
                        [](const Pareto& s) { return s.x_m; },
                    },
                    law_);
}

double ServiceDist::kink() const {
  if (const auto* s = std::get_if<Pareto>(&law_)) return s->x_m;
  return 0.0;
}

double ServiceDist::sample(double u) const {
  require_unit_open(u, "sample_service");
  const double neg_log_survival = -std::log1p(-u);
  return std::visit(
      Overloaded{
          [=](const Exponential& s) { return neg_log_survival / s.rate; },
          [=](const Lomax& s) { return s.sigma * std::expm1(neg_log_survival / s.d); },
          [=](const Pareto& s) { return s.x_m * std::exp(neg_log_survival / s.d); },
      },
      law_);
}

double ServiceDist::sample_from_survival(double v) const {
  require_unit_open(v, "sample_service");
  const double neg_log_survival = -std::log(v);
  return std::visit(
      Overloaded{
          [=](const Exponential& s) { return neg_log_survival / s.rate; },
          [=](const Lomax& s) { return s.sigma * std::expm1(neg_log_survival / s.d); },
          [=](const Pareto& s) { return s.x_m * std::exp(neg_log_survival / s.d); },
      },
      law_);
}

std::string ServiceDist::describe() const {
  std::ostringstream out;
  out.precision(17);
  std::visit(Overloaded{
                 [&](const Exponential& s) { out << "exponential(rate=" << s.rate << ")"; },
                 [&](const Lomax& s) {
                   out << "lomax(sigma=" << s.sigma << ", d=" << s.d << ")";
                 },
                 [&](const Pareto& s) {
                   out << "pareto(x_m=" << s.x_m << ", d=" << s.d << ")";
                 },
             },
             law_);
  return out.str();
}

double service_lst(const ServiceDist& service, double s) {
  if (!(s >= 0.0)) throw DomainError("service_lst: s must be nonnegative");
  if (s == 0.0) return 1.0;
  if (const auto* e = std::get_if<Exponential>(&service.law())) {
    return e->rate / (e->rate + s);
  }
  constexpr double kRemainder = 1e-17;
  auto integrand = [&](double x) { return std::exp(-s * x) * service.density(x); };
  const double start = service.kink();
  const double scale = service.scale();
  long double total = 0.0L;
  double lo = start;
  double hi = start > 0.0 ? 2.0 * start : scale;
  // Dyadic pieces out to where exp(-s x) P{B > x} bounds the remainder.
  for (int piece = 0; piece < 2000; ++piece) {
    total += integrate_adaptive(integrand, lo, hi, 1e-13, 1e-19);
    if (std::exp(-s * hi) * service.survival(hi) < kRemainder) {
      return static_cast<double>(total);
    }
    lo = hi;
    hi *= 2.0;
  }
  throw NumericalError("service_lst: remainder did not fall below tolerance");
}

// ---------------------------------------------------------------------------
// ModelParams
// ---------------------------------------------------------------------------

ModelParams::ModelParams(double lambda, double mu, BatchDist batch,
                         ServiceDist service)
    : lambda_(lambda), mu_(mu), batch_(std::move(batch)), service_(std::move(service)) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("arrival rate lambda must be positive");
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw DomainError("retrial rate mu must be positive");
  }
}

void ModelParams::require_stable() const {
  if (!is_stable()) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "unstable model: rho = " << rho() << " >= 1";
    throw StabilityError(msg.str());
  }
}

double ModelParams::psi() const {
  require_stable();
  const double r = rho();
  return lambda_ * (r + chi1() - 1.0) / (mu_ * (1.0 - r));
}

TruncSeries batch_pmf_series(const BatchDist& batch, std::size_t trunc) {
  std::vector<double> coeffs(trunc + 1, 0.0);
  for (std::size_t j = 1; j <= trunc; ++j) coeffs[j] = batch.pmf(static_cast<long>(j));
  return TruncSeries::from_pmf(std::move(coeffs), batch.tail(static_cast<long>(trunc)));
}

TruncSeries mixed_poisson_weights(const ModelParams& params, ServiceView which,
                                  std::size_t k_max) {
  return detail::mix_over_service(
      params.service(), which, params.lambda(), k_max,
      [](double t, double weight, std::vector<double>& acc) {
        detail::accumulate_poisson(t, weight, acc);
      },
      "mixed_poisson_weights");
}

}  // namespace rtail
