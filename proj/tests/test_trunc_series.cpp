#include "doctest.h"

#include <cmath>

#include "rtail/error.hpp"
#include "rtail/trunc_series.hpp"

using rtail::TruncSeries;

TEST_CASE("pmf deficit is the missing mass") {
  auto s = TruncSeries::from_pmf({0.5, 0.25, 0.125});
  CHECK(s.is_pmf());
  CHECK(s.trunc() == 2);
  CHECK(s.mass_deficit() == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(s.tail(0) == doctest::Approx(0.5));
  CHECK(s.tail(2) == doctest::Approx(0.125));
  CHECK(s.mean() == doctest::Approx(0.5));
  CHECK(s.evaluate(0.5) == doctest::Approx(0.5 + 0.125 + 0.03125));
}

TEST_CASE("tails of a pmf include the deficit") {
  auto s = TruncSeries::from_pmf({0.1, 0.2, 0.3}, 0.4);
  auto t = s.tails();
  REQUIRE(t.size() == 3);
  CHECK(t[0] == doctest::Approx(0.9));
  CHECK(t[1] == doctest::Approx(0.7));
  CHECK(t[2] == doctest::Approx(0.4));
}

TEST_CASE("general series tails are plain suffix sums") {
  auto s = TruncSeries::from_coeffs({1.0, -2.0, 3.0});
  CHECK_FALSE(s.is_pmf());
  CHECK(s.tail(0) == doctest::Approx(1.0));
  CHECK(s.tail(1) == doctest::Approx(3.0));
  CHECK(s.sum() == doctest::Approx(2.0));
}

TEST_CASE("pmf validation") {
  CHECK_NOTHROW(TruncSeries::from_pmf({0.5, -1e-13, 0.5}));
  CHECK(TruncSeries::from_pmf({0.5, -1e-13, 0.5})[1] == 0.0);
  CHECK_THROWS_AS(TruncSeries::from_pmf({0.5, -1e-6, 0.5}), rtail::NumericalError);
  CHECK_THROWS_AS(TruncSeries::from_pmf({0.7, 0.7}), rtail::Error);
  CHECK_THROWS_AS(TruncSeries::from_pmf({0.5, 0.25}, 0.5), rtail::Error);
}

TEST_CASE("point mass and zeros") {
  auto p = TruncSeries::point_mass(3, 8);
  CHECK(p.trunc() == 8);
  CHECK(p[3] == 1.0);
  CHECK(p.mass_deficit() == 0.0);
  CHECK(p.tail(2) == 1.0);
  CHECK(p.tail(3) == 0.0);
  auto z = TruncSeries::zeros(4);
  CHECK(z.size() == 5);
  CHECK(z.sum() == 0.0);
}
