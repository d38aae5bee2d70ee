#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "rtail/model.hpp"
#include "rtail/trunc_series.hpp"

namespace rtail::detail {

/// One quadrature node of the mixing integral over the service law, in the
/// Poisson-rate variable t = lambda x. `weight` is a probability weight.
struct MixingNode {
  double t;
  double weight;
};

struct MixingRule {
  std::vector<MixingNode> nodes;
  /// Probability of lambda B beyond the last panel; that mass lands beyond
  /// the truncation and shows up only in the deficit.
  double omitted_mass = 0.0;
};

/// Panels in u = sqrt(t): a Poisson(t) kernel has standard deviation about
/// 1/2 in u regardless of t, so a uniform grid resolves every mode at once.
/// Each refinement level bisects all base panels.
MixingRule build_mixing_rule(const ServiceDist& service, ServiceView view,
                             double lambda, std::size_t trunc, int level);

/// Adds weight * pmf(t) into acc for the pmf of the per-node law.
using NodeKernel =
    std::function<void(double t, double weight, std::vector<double>& acc)>;

/// int kernel(lambda x) d(view of B)(x), refined by panel doubling until each
/// coefficient changes by less than 1e-10 relative. Throws NumericalError
/// (naming `what`) otherwise.
TruncSeries mix_over_service(const ServiceDist& service, ServiceView view,
                             double lambda, std::size_t trunc,
                             const NodeKernel& kernel, const char* what);

/// weight * Poisson(t) pmf into acc[k * stride] for k * stride <= trunc.
void accumulate_poisson(double t, double weight, std::vector<double>& acc,
                        std::size_t stride = 1);

/// Poisson(t) pmf at k with full relative precision.
double poisson_pmf(std::size_t k, double t);

}  // namespace rtail::detail
