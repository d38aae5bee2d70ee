#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rtail {

enum class SeriesKind { pmf, general };

/// Truncated power series sum_{j=0..N} c_j z^j.
///
/// A pmf-kind series holds P{N = j} for j <= N. Its mass_deficit is the
/// probability beyond the truncation, 1 - sum(coeffs), and is carried through
/// every operation so tails near N stay honest.
class TruncSeries {
 public:
  TruncSeries() = default;

  static TruncSeries zeros(std::size_t trunc,
                           SeriesKind kind = SeriesKind::general);
  static TruncSeries point_mass(std::size_t at, std::size_t trunc);

  /// Validates a pmf: negatives >= -1e-12 are clamped to 0 (larger ones throw
  /// NumericalError), the sum must not exceed 1 + 1e-9. The deficit is
  /// 1 - sum accumulated in extended precision.
  static TruncSeries from_pmf(std::vector<double> coeffs);

  /// As above, with the mass beyond N supplied by the caller (known in
  /// closed form). It must agree with 1 - sum to 1e-9.
  static TruncSeries from_pmf(std::vector<double> coeffs, double deficit);

  static TruncSeries from_coeffs(std::vector<double> coeffs);

  std::size_t trunc() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  std::size_t size() const { return coeffs_.size(); }
  bool empty() const { return coeffs_.empty(); }
  double operator[](std::size_t j) const { return coeffs_[j]; }
  std::span<const double> coeffs() const { return coeffs_; }
  SeriesKind kind() const { return kind_; }
  bool is_pmf() const { return kind_ == SeriesKind::pmf; }
  double mass_deficit() const { return deficit_; }

  double sum() const;
  /// sum_j j c_j over the stored coefficients (a lower bound of the true
  /// mean when the deficit is positive).
  double mean() const;
  /// P{N > j} for a pmf (includes the deficit); plain suffix sum otherwise.
  double tail(std::size_t j) const;
  std::vector<double> tails() const;
  double evaluate(double z) const;

 private:
  std::vector<double> coeffs_;
  SeriesKind kind_ = SeriesKind::general;
  double deficit_ = 0.0;
};

}  // namespace rtail
