#include "rtail/detail/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "rtail/error.hpp"
#include "rtail/gauss_legendre.hpp"

namespace rtail::detail {

namespace {

constexpr std::size_t kOrder = 16;
constexpr double kMaxPanelWidth = 2.0;
constexpr double kLightTailCut = 1e-30;
constexpr double kPoissonFloor = 1e-40;
constexpr double kRelTol = 1e-10;
constexpr double kAbsFloor = 1e-25;
constexpr int kMaxLevel = 7;

struct Panel {
  double lo;
  double hi;
};

double light_tail_cut(const ServiceDist& service) {
  if (const auto* e = std::get_if<Exponential>(&service.law())) {
    return -std::log(kLightTailCut) / e->rate;
  }
  return std::numeric_limits<double>::infinity();
}

std::vector<Panel> base_panels(double u_start, double u_scale, double u_max) {
  std::vector<Panel> panels;
  if (!(u_max > u_start)) return panels;
  const double us = std::clamp(u_scale, u_start, u_max);
  if (us > u_start) {
    const auto n = std::max<std::size_t>(
        4, static_cast<std::size_t>(std::ceil((us - u_start) / kMaxPanelWidth)));
    const double h = (us - u_start) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      panels.push_back({u_start + h * static_cast<double>(i),
                        i + 1 == n ? us : u_start + h * static_cast<double>(i + 1)});
    }
  }
  // Geometric grading away from the scale point, then uniform panels.
  double pos = us;
  double width = std::max(0.5 * (us > 0.0 ? us : 1.0), 1e-6);
  while (pos < u_max && width < kMaxPanelWidth) {
    const double next = std::min(pos + width, u_max);
    panels.push_back({pos, next});
    pos = next;
    width *= 2.0;
  }
  if (pos < u_max) {
    const auto n = static_cast<std::size_t>(std::ceil((u_max - pos) / kMaxPanelWidth));
    const double h = (u_max - pos) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      panels.push_back({pos + h * static_cast<double>(i),
                        i + 1 == n ? u_max : pos + h * static_cast<double>(i + 1)});
    }
  }
  return panels;
}

}  // namespace

double poisson_pmf(std::size_t k, double t) {
  if (t <= 0.0) return k == 0 ? 1.0 : 0.0;
  return boost::math::gamma_p_derivative(static_cast<double>(k) + 1.0, t);
}

void accumulate_poisson(double t, double weight, std::vector<double>& acc,
                        std::size_t stride) {
  if (acc.empty() || weight == 0.0) return;
  const std::size_t trunc = acc.size() - 1;
  const std::size_t kmax = trunc / stride;
  if (t <= 0.0) {
    acc[0] += weight;
    return;
  }
  const auto mode = std::min<std::size_t>(static_cast<std::size_t>(t), kmax);
  const double p_mode = poisson_pmf(mode, t);
  acc[mode * stride] += weight * p_mode;
  double p = p_mode;
  for (std::size_t k = mode + 1; k <= kmax; ++k) {
    p *= t / static_cast<double>(k);
    if (p < kPoissonFloor) break;
    acc[k * stride] += weight * p;
  }
  p = p_mode;
  for (std::size_t k = mode; k-- > 0;) {
    p *= static_cast<double>(k + 1) / t;
    if (p < kPoissonFloor) break;
    acc[k * stride] += weight * p;
  }
}

MixingRule build_mixing_rule(const ServiceDist& service, ServiceView view,
                             double lambda, std::size_t trunc, int level) {
  const double n = static_cast<double>(trunc);
  const double t_cut = n + 12.0 * std::sqrt(n) + 40.0;
  const double x_max = std::min(t_cut / lambda, light_tail_cut(service));
  const double u_max = std::sqrt(lambda * x_max);
  const double u_scale = std::sqrt(lambda * std::max(service.scale(), service.kink()));
  // The Pareto density itself vanishes below x_m; its equilibrium law does not.
  const double u_start =
      (view == ServiceView::service && service.kink() > 0.0)
          ? std::sqrt(lambda * service.kink())
          : 0.0;

  MixingRule rule;
  rule.omitted_mass = service.survival(x_max, view);
  const auto& gl = gauss_legendre(kOrder);
  const std::size_t splits = std::size_t{1} << level;
  for (const Panel& base : base_panels(u_start, u_scale, u_max)) {
    const double h = (base.hi - base.lo) / static_cast<double>(splits);
    for (std::size_t s = 0; s < splits; ++s) {
      const double lo = base.lo + h * static_cast<double>(s);
      const double mid = lo + 0.5 * h;
      for (std::size_t i = 0; i < kOrder; ++i) {
        const double u = mid + 0.5 * h * gl.nodes[i];
        const double t = u * u;
        // dt = 2u du; density of lambda B at t is f(t / lambda) / lambda.
        const double w = 0.5 * h * gl.weights[i] * 2.0 * u *
                         service.density(t / lambda, view) / lambda;
        if (w > 0.0) rule.nodes.push_back({t, w});
      }
    }
  }
  return rule;
}

TruncSeries mix_over_service(const ServiceDist& service, ServiceView view,
                             double lambda, std::size_t trunc,
                             const NodeKernel& kernel, const char* what) {
  auto evaluate = [&](int level) {
    std::vector<double> acc(trunc + 1, 0.0);
    const MixingRule rule = build_mixing_rule(service, view, lambda, trunc, level);
    for (const MixingNode& node : rule.nodes) kernel(node.t, node.weight, acc);
    return acc;
  };

  std::vector<double> previous = evaluate(0);
  double worst = 0.0;
  std::size_t worst_index = 0;
  for (int level = 1; level <= kMaxLevel; ++level) {
    std::vector<double> current = evaluate(level);
    worst = 0.0;
    bool converged = true;
    for (std::size_t j = 0; j <= trunc; ++j) {
      const double diff = std::abs(current[j] - previous[j]);
      const double allowed = kRelTol * std::abs(current[j]) + kAbsFloor;
      if (diff > allowed) {
        converged = false;
        const double rel = diff / std::max(std::abs(current[j]), kAbsFloor);
        if (rel > worst) {
          worst = rel;
          worst_index = j;
        }
      }
    }
    if (converged) return TruncSeries::from_pmf(std::move(current));
    previous = std::move(current);
  }
  std::ostringstream msg;
  msg << what << ": mixing quadrature did not converge after " << kMaxLevel
      << " refinements (worst relative change " << worst << " at index "
      << worst_index << ", truncation " << trunc << ")";
  throw NumericalError(msg.str());
}

}  // namespace rtail::detail
