#include "rtail/series.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "rtail/detail/mixing.hpp"
#include "rtail/error.hpp"

namespace rtail {

namespace {

// Above this the recurrence runs on a rescaled copy to dodge underflow of e^-c.
constexpr double kDirectExpLimit = 700.0;
constexpr double kRescaleAbove = 1e280;
constexpr double kRescaleBy = 1e-280;

void require_same_trunc(const TruncSeries& a, const TruncSeries& b, const char* what) {
  if (a.trunc() != b.trunc()) {
    std::ostringstream msg;
    msg << what << ": truncation mismatch (" << a.trunc() << " vs " << b.trunc() << ")";
    throw DomainError(msg.str());
  }
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    double* dst = out.data() + i;
    const double* src = b.data();
    const std::size_t len = n - i;
    for (std::size_t j = 0; j < len; ++j) dst[j] += ai * src[j];
  }
  return out;
}

/// e_0 = exp(-c), e_n = (1/n) sum_{m=1..n} m s_m e_{n-m}.
std::vector<double> exp_recurrence(std::span<const double> s, double c) {
  const std::size_t n = s.size();
  std::vector<double> ms(n);
  for (std::size_t m = 0; m < n; ++m) ms[m] = static_cast<double>(m) * s[m];
  std::vector<double> e(n, 0.0);
  if (n == 0) return e;

  const bool direct = c <= kDirectExpLimit;
  e[0] = direct ? std::exp(-c) : 1.0;
  double log_scale = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t m = 1; m <= k; ++m) acc += ms[m] * e[k - m];
    e[k] = acc / static_cast<double>(k);
    if (!direct && e[k] > kRescaleAbove) {
      for (std::size_t i = 0; i <= k; ++i) e[i] *= kRescaleBy;
      log_scale -= std::log(kRescaleBy);
    }
  }
  if (!direct) {
    const double factor = std::exp(log_scale - c);
    for (double& v : e) v *= factor;
  }
  return e;
}

/// Index m if the series is a unit point mass there.
std::optional<std::size_t> point_mass_at(const TruncSeries& x) {
  if (!x.is_pmf() || x.mass_deficit() != 0.0) return std::nullopt;
  std::optional<std::size_t> at;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] == 0.0) continue;
    if (x[j] != 1.0 || at) return std::nullopt;
    at = j;
  }
  return at;
}

TruncSeries wrap(std::vector<double> coeffs, bool as_pmf) {
  return as_pmf ? TruncSeries::from_pmf(std::move(coeffs))
                : TruncSeries::from_coeffs(std::move(coeffs));
}

}  // namespace

TruncSeries mul(const TruncSeries& a, const TruncSeries& b) {
  require_same_trunc(a, b, "mul");
  return wrap(convolve(a.coeffs(), b.coeffs()), a.is_pmf() && b.is_pmf());
}

TruncSeries shift_up(const TruncSeries& a, std::size_t k) {
  std::vector<double> out(a.size(), 0.0);
  for (std::size_t j = 0; j + k < a.size(); ++j) out[j + k] = a[j];
  return wrap(std::move(out), a.is_pmf());
}

TruncSeries scale(const TruncSeries& a, double c) {
  std::vector<double> out(a.coeffs().begin(), a.coeffs().end());
  for (double& v : out) v *= c;
  return TruncSeries::from_coeffs(std::move(out));
}

TruncSeries reciprocal_complement(const TruncSeries& t, double s) {
  if (!t.is_pmf()) throw DomainError("reciprocal_complement: input must be a pmf");
  if (!(s < 1.0)) {
    std::ostringstream msg;
    msg << "reciprocal_complement: scale " << s << " >= 1";
    throw StabilityError(msg.str());
  }
  if (!(s >= 0.0)) throw DomainError("reciprocal_complement: scale must be >= 0");
  const std::size_t n = t.size();
  std::vector<double> r(n, 0.0);
  if (n == 0) return TruncSeries::from_pmf(std::move(r));
  const double denom = 1.0 - s * t[0];
  const double factor = s / denom;
  r[0] = (1.0 - s) / denom;
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t m = 1; m <= k; ++m) acc += t[m] * r[k - m];
    r[k] = factor * acc;
  }
  return TruncSeries::from_pmf(std::move(r));
}

TruncSeries exp_shifted(const TruncSeries& s, double c) {
  if (s.empty()) return s;
  if (s[0] != 0.0) throw DomainError("exp_shifted: constant term must be zero");
  for (std::size_t m = 1; m < s.size(); ++m) {
    if (s[m] < 0.0) {
      std::ostringstream msg;
      msg << "exp_shifted: coefficient " << m << " is negative";
      throw DomainError(msg.str());
    }
  }
  return TruncSeries::from_coeffs(exp_recurrence(s.coeffs(), c));
}

TruncSeries integral_to_one(const TruncSeries& k) {
  const std::size_t n = k.size();
  std::vector<double> a(n, 0.0);
  if (n == 0) return TruncSeries::from_coeffs(std::move(a));
  long double a0 = 0.0L;
  for (std::size_t j = 0; j < n; ++j) a0 += k[j] / static_cast<long double>(j + 1);
  a[0] = static_cast<double>(a0);
  for (std::size_t j = 1; j < n; ++j) a[j] = -k[j - 1] / static_cast<double>(j);
  return TruncSeries::from_coeffs(std::move(a));
}

TruncSeries equilibrium_transform(const TruncSeries& q, double mean) {
  if (!(mean > 0.0)) throw DomainError("equilibrium_transform: mean must be positive");
  std::vector<double> out = q.tails();
  for (double& v : out) v /= mean;
  return TruncSeries::from_pmf(std::move(out));
}

TruncSeries tail_sequence(const TruncSeries& q, int n) {
  if (n < 0) throw DomainError("tail_sequence: n must be >= 0");
  if (n == 0) return q;
  std::vector<double> g = q.tails();
  for (int step = 1; step < n; ++step) {
    long double acc = 0.0L;
    for (std::size_t j = g.size(); j-- > 0;) {
      const double here = g[j];
      g[j] = static_cast<double>(acc);
      acc += here;
    }
  }
  return TruncSeries::from_coeffs(std::move(g));
}

FactorialMoment factorial_moment(const TruncSeries& q, int n) {
  if (n < 0) throw DomainError("factorial_moment: n must be >= 0");
  long double total = 0.0L;
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (static_cast<long>(k) < n) continue;
    long double falling = 1.0L;
    for (int i = 0; i < n; ++i) falling *= static_cast<long double>(k - i);
    total += falling * q[k];
  }
  return {static_cast<double>(total), q.is_pmf() && q.mass_deficit() > 0.0};
}

TruncSeries compound_poisson(double rate, const TruncSeries& batch_pmf) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw DomainError("compound_poisson: rate must be finite and >= 0");
  }
  if (!batch_pmf.is_pmf()) throw DomainError("compound_poisson: batch law must be a pmf");
  if (batch_pmf.empty()) return batch_pmf;
  if (batch_pmf[0] != 0.0) {
    throw DomainError("compound_poisson: batch law has mass at 0");
  }
  const std::size_t trunc = batch_pmf.trunc();
  if (rate == 0.0) return TruncSeries::point_mass(0, trunc);
  if (const auto m = point_mass_at(batch_pmf)) {
    std::vector<double> acc(trunc + 1, 0.0);
    detail::accumulate_poisson(rate, 1.0, acc, *m);
    return TruncSeries::from_pmf(std::move(acc));
  }
  std::vector<double> s(batch_pmf.coeffs().begin(), batch_pmf.coeffs().end());
  for (double& v : s) v *= rate;
  return TruncSeries::from_pmf(exp_recurrence(s, rate));
}

TruncSeries compose(const TruncSeries& outer, const TruncSeries& inner) {
  require_same_trunc(outer, inner, "compose");
  if (!outer.is_pmf() || !inner.is_pmf()) {
    throw DomainError("compose: both series must be pmfs");
  }
  if (inner.empty()) return inner;
  if (inner[0] != 0.0) throw DomainError("compose: inner law has mass at 0");
  const std::size_t n = inner.size();

  if (const auto m = point_mass_at(inner)) {
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 0; k * *m < n; ++k) out[k * *m] = outer[k];
    return TruncSeries::from_pmf(std::move(out));
  }

  // Paterson-Stockmeyer: blocks of width w in the powers X^0..X^{w-1}, then
  // Horner in Y = X^w. Every term is nonnegative, so nothing cancels.
  const auto w = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  std::vector<std::vector<double>> powers(w + 1);
  powers[0].assign(n, 0.0);
  powers[0][0] = 1.0;
  powers[1].assign(inner.coeffs().begin(), inner.coeffs().end());
  for (std::size_t r = 2; r <= w; ++r) powers[r] = convolve(powers[r - 1], powers[1]);

  auto block = [&](std::size_t b) {
    std::vector<double> c(n, 0.0);
    for (std::size_t r = 0; r < w; ++r) {
      const std::size_t k = b * w + r;
      if (k >= n) break;
      const double pk = outer[k];
      if (pk == 0.0) continue;
      // X^r vanishes below index r.
      for (std::size_t j = r; j < n; ++j) c[j] += pk * powers[r][j];
    }
    return c;
  };

  const std::size_t blocks = (n + w - 1) / w;
  std::vector<double> acc = block(blocks - 1);
  for (std::size_t b = blocks - 1; b-- > 0;) {
    acc = convolve(acc, powers[w]);
    const std::vector<double> c = block(b);
    for (std::size_t j = 0; j < n; ++j) acc[j] += c[j];
  }
  return TruncSeries::from_pmf(std::move(acc));
}

TruncSeries compound_over_service(const ModelParams& params, ServiceView which,
                                  std::size_t trunc) {
  const TruncSeries counts = mixed_poisson_weights(params, which, trunc);
  return compose(counts, batch_pmf_series(params.batch(), trunc));
}

}  // namespace rtail
