#pragma once

#include <cstddef>

#include "rtail/model.hpp"
#include "rtail/trunc_series.hpp"

namespace rtail {

/// Cauchy product truncated at N. Both operands must share N; pmf * pmf is a
/// pmf whose deficit is recomputed as 1 - sum.
TruncSeries mul(const TruncSeries& a, const TruncSeries& b);

/// z^k * A(z), truncated. Mass pushed past N is added to a pmf's deficit.
TruncSeries shift_up(const TruncSeries& a, std::size_t k);

/// c * A(z) as a general series.
TruncSeries scale(const TruncSeries& a, double c);

/// (1 - s) / (1 - s T(z)): pmf of a Geometric(s)-length sum of T's.
TruncSeries reciprocal_complement(const TruncSeries& t, double s);

/// exp(S(z) - c) for S with zero constant term and nonnegative coefficients.
/// General kind; a pmf exactly when c = S(1).
TruncSeries exp_shifted(const TruncSeries& s, double c);

/// A(z) = int_z^1 K(u) du, i.e. a_0 = sum k_j / (j + 1), a_j = -k_{j-1} / j.
TruncSeries integral_to_one(const TruncSeries& k);

/// Discrete equilibrium law q_de(n) = P{N > n} / mean.
TruncSeries equilibrium_transform(const TruncSeries& q, double mean);

/// g_n with g_0 = q and g_{m+1}(j) = sum_{i > j} g_m(i). The first step uses
/// the pmf deficit; later steps sum within the truncation only.
TruncSeries tail_sequence(const TruncSeries& q, int n);

struct FactorialMoment {
  double value;
  /// True when mass beyond N was not seen (value is then a lower bound).
  bool truncated;
};

/// sum_k k (k - 1) ... (k - n + 1) q_k.
FactorialMoment factorial_moment(const TruncSeries& q, int n);

/// exp(rate (X(z) - 1)) for a batch pmf with no mass at 0.
TruncSeries compound_poisson(double rate, const TruncSeries& batch_pmf);

/// P(X(z)) = sum_k p_k X(z)^k for a pmf p and a pmf X with X(0) = 0.
TruncSeries compose(const TruncSeries& outer, const TruncSeries& inner);

/// beta(lambda - lambda X(z)) for the service view, beta^(e)(...) for the
/// equilibrium view: the number of customers arriving during B (resp. B^(e)).
TruncSeries compound_over_service(const ModelParams& params, ServiceView which,
                                  std::size_t trunc);

}  // namespace rtail
