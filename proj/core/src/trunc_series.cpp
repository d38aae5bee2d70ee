#include "rtail/trunc_series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rtail/error.hpp"

namespace rtail {

namespace {

constexpr double kNegativeClamp = -1e-12;
constexpr double kExcessMass = 1e-9;

long double clamp_and_sum(std::vector<double>& coeffs) {
  long double total = 0.0L;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    double& c = coeffs[j];
    if (!std::isfinite(c)) {
      std::ostringstream msg;
      msg << "pmf coefficient " << j << " is not finite";
      throw NumericalError(msg.str());
    }
    if (c < 0.0) {
      if (c < kNegativeClamp) {
        std::ostringstream msg;
        msg << "pmf coefficient " << j << " = " << c
            << " is negative beyond round-off";
        throw NumericalError(msg.str());
      }
      c = 0.0;
    }
    total += c;
  }
  if (total > 1.0L + kExcessMass) {
    std::ostringstream msg;
    msg << "pmf mass " << static_cast<double>(total) << " exceeds 1";
    throw NumericalError(msg.str());
  }
  return total;
}

}  // namespace

TruncSeries TruncSeries::zeros(std::size_t trunc, SeriesKind kind) {
  TruncSeries s;
  s.coeffs_.assign(trunc + 1, 0.0);
  s.kind_ = kind;
  s.deficit_ = kind == SeriesKind::pmf ? 1.0 : 0.0;
  return s;
}

TruncSeries TruncSeries::point_mass(std::size_t at, std::size_t trunc) {
  TruncSeries s;
  s.coeffs_.assign(trunc + 1, 0.0);
  s.kind_ = SeriesKind::pmf;
  if (at <= trunc) {
    s.coeffs_[at] = 1.0;
    s.deficit_ = 0.0;
  } else {
    s.deficit_ = 1.0;
  }
  return s;
}

TruncSeries TruncSeries::from_pmf(std::vector<double> coeffs) {
  TruncSeries s;
  const long double total = clamp_and_sum(coeffs);
  s.coeffs_ = std::move(coeffs);
  s.kind_ = SeriesKind::pmf;
  s.deficit_ = std::max(0.0, static_cast<double>(1.0L - total));
  return s;
}

TruncSeries TruncSeries::from_pmf(std::vector<double> coeffs, double deficit) {
  TruncSeries s;
  const long double total = clamp_and_sum(coeffs);
  if (!(deficit >= 0.0) ||
      std::abs(static_cast<double>(1.0L - total) - deficit) > kExcessMass) {
    std::ostringstream msg;
    msg << "declared deficit " << deficit << " inconsistent with 1 - sum = "
        << static_cast<double>(1.0L - total);
    throw NumericalError(msg.str());
  }
  s.coeffs_ = std::move(coeffs);
  s.kind_ = SeriesKind::pmf;
  s.deficit_ = deficit;
  return s;
}

TruncSeries TruncSeries::from_coeffs(std::vector<double> coeffs) {
  TruncSeries s;
  s.coeffs_ = std::move(coeffs);
  s.kind_ = SeriesKind::general;
  return s;
}

double TruncSeries::sum() const {
  long double total = 0.0L;
  for (double c : coeffs_) total += c;
  return static_cast<double>(total);
}

double TruncSeries::mean() const {
  long double total = 0.0L;
  for (std::size_t j = 1; j < coeffs_.size(); ++j) {
    total += static_cast<long double>(j) * coeffs_[j];
  }
  return static_cast<double>(total);
}

std::vector<double> TruncSeries::tails() const {
  std::vector<double> out(coeffs_.size(), 0.0);
  long double acc = is_pmf() ? deficit_ : 0.0L;
  for (std::size_t j = coeffs_.size(); j-- > 0;) {
    out[j] = static_cast<double>(acc);
    acc += coeffs_[j];
  }
  return out;
}

double TruncSeries::tail(std::size_t j) const {
  long double acc = is_pmf() ? deficit_ : 0.0L;
  for (std::size_t k = coeffs_.size(); k-- > j + 1;) acc += coeffs_[k];
  return static_cast<double>(acc);
}

double TruncSeries::evaluate(double z) const {
  long double acc = 0.0L;
  for (std::size_t j = coeffs_.size(); j-- > 0;) acc = acc * z + coeffs_[j];
  return static_cast<double>(acc);
}

}  // namespace rtail
