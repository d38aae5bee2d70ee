#include "doctest.h"

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "reference_values.hpp"
#include "rtail/error.hpp"
#include "rtail/model.hpp"

using namespace rtail;
namespace ref = rtail::testing::ref;

namespace {

bool close_rel(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::fabs(b);
}

ModelParams e1() {
  return ModelParams(1.0, 1.0, BatchDist::deterministic(1), ServiceDist::lomax(0.75, 2.5));
}

}  // namespace

TEST_CASE("batch means") {
  CHECK(BatchDist::deterministic(3).chi1() == 3.0);
  CHECK(BatchDist::geometric(0.3).chi1() == doctest::Approx(1.0 / 0.7).epsilon(1e-15));

  double z1 = BatchDist::pareto_tail(2.0, 1.8).chi1();
  CHECK(close_rel(z1, ref::chi1_paretotail_2_18, 1e-13));
  CHECK(close_rel(z1, std::pow(2.0, 1.8) * testing::hurwitz_zeta(1.8, 2.0), 1e-13));

  double z2 = BatchDist::pareto_tail(1.0, 2.5).chi1();
  CHECK(close_rel(z2, ref::chi1_paretotail_1_25, 1e-13));
  CHECK(close_rel(z2, testing::hurwitz_zeta(2.5, 1.0), 1e-13));
}

TEST_CASE("pareto-tail pmf and tail agree") {
  auto x = BatchDist::pareto_tail(1.5, 2.2);
  CHECK(x.tail(0) == 1.0);
  CHECK(x.pmf(0) == 0.0);
  for (long j : {1L, 2L, 10L, 100L, 1000L, 100000L})
    CHECK(close_rel(x.pmf(j), x.tail(j - 1) - x.tail(j), 1e-9));
  double acc = 0.0;
  for (long j = 1; j <= 20; ++j) acc += x.pmf(j);
  CHECK(close_rel(1.0 - acc, x.tail(20), 1e-12));
  CHECK(x.tail_index() == 2.2);
  CHECK(x.tail_constant() == doctest::Approx(std::pow(1.5, 2.2)));
  CHECK(BatchDist::geometric(0.5).tail_index() == kLightTail);
  CHECK(BatchDist::geometric(0.5).tail_constant() == 0.0);
}

TEST_CASE("batch sampling inverts the cdf") {
  for (auto x : {BatchDist::geometric(0.6), BatchDist::pareto_tail(1.0, 1.5),
                 BatchDist::deterministic(4)}) {
    const int n = 200000;
    std::map<long, int> counts;
    for (int i = 0; i < n; ++i) ++counts[x.sample((i + 0.5) / n)];
    for (long k = 1; k <= 12; ++k)
      CHECK(std::fabs(counts[k] / double(n) - x.pmf(k)) <= 2.0 / n);
  }
}

TEST_CASE("batch parameter domain") {
  CHECK_THROWS_AS(BatchDist::deterministic(0), DomainError);
  CHECK_THROWS_AS(BatchDist::geometric(1.0), DomainError);
  CHECK_THROWS_AS(BatchDist::geometric(-0.1), DomainError);
  CHECK_THROWS_AS(BatchDist::pareto_tail(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(BatchDist::pareto_tail(0.0, 2.0), DomainError);
}

TEST_CASE("service laws") {
  auto lomax = ServiceDist::lomax(0.75, 2.5);
  CHECK(lomax.mean() == doctest::Approx(0.5));
  CHECK(lomax.tail_index() == 2.5);
  CHECK(lomax.slowly_varying_constant() == doctest::Approx(std::pow(0.75, 2.5)));
  CHECK(lomax.survival(1.0, ServiceView::equilibrium) ==
        doctest::Approx(std::pow(1.0 + 1.0 / 0.75, -1.5)));

  auto pareto = ServiceDist::pareto(0.4, 2.2);
  CHECK(pareto.mean() == doctest::Approx(0.4 * 2.2 / 1.2));
  CHECK(pareto.survival(0.3) == 1.0);
  CHECK(pareto.kink() == 0.4);
  CHECK(pareto.slowly_varying_constant() == doctest::Approx(std::pow(0.4, 2.2)));

  auto ex = ServiceDist::exponential(2.0);
  CHECK(ex.mean() == 0.5);
  CHECK(ex.tail_index() == kLightTail);
  CHECK(ex.slowly_varying_constant() == 0.0);

  for (const auto& b : {lomax, pareto, ex}) {
    for (double x : {0.5, 1.0, 3.0, 40.0}) {
      double h = 1e-5 * x;
      double deriv = (b.survival(x - h) - b.survival(x + h)) / (2 * h);
      CHECK(close_rel(b.density(x), deriv, 1e-6));
      double he = (b.survival(x - h, ServiceView::equilibrium) -
                   b.survival(x + h, ServiceView::equilibrium)) / (2 * h);
      CHECK(close_rel(b.density(x, ServiceView::equilibrium), he, 1e-6));
    }
    for (double u : {1e-9, 0.1, 0.5, 0.9, 1 - 1e-9}) {
      CHECK(close_rel(b.survival(b.sample(u)), 1.0 - u, 1e-9));
      CHECK(close_rel(b.survival(b.sample_from_survival(u)), u, 1e-12));
    }
  }
}

TEST_CASE("service transforms") {
  auto lomax = ServiceDist::lomax(0.75, 2.5);
  CHECK(std::fabs(service_lst(lomax, 1.0) - ref::lst_lomax_s1) < 1e-12);
  CHECK(std::fabs(service_lst(lomax, 0.05) - ref::lst_lomax_s005) < 1e-12);
  CHECK(std::fabs(service_lst(ServiceDist::pareto(0.4, 2.2), 1.0) - ref::lst_pareto_s1) < 1e-12);
  CHECK(service_lst(ServiceDist::exponential(2.0), 1.0) == doctest::Approx(2.0 / 3.0));
  CHECK(service_lst(lomax, 0.0) == 1.0);
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(ModelParams(0.0, 1.0, BatchDist::deterministic(1), ServiceDist::exponential(1)),
                  DomainError);
  CHECK_THROWS_AS(ModelParams(1.0, -1.0, BatchDist::deterministic(1), ServiceDist::exponential(1)),
                  DomainError);
  ModelParams unstable(2.0, 1.0, BatchDist::deterministic(1), ServiceDist::lomax(0.75, 2.5));
  CHECK_FALSE(unstable.is_stable());
  CHECK_THROWS_AS(unstable.require_stable(), StabilityError);
  CHECK_THROWS_AS(unstable.psi(), StabilityError);

  auto m = e1();
  CHECK(m.rho() == doctest::Approx(0.5));
  CHECK(m.psi() == doctest::Approx(1.0));
}

TEST_CASE("batch pmf series") {
  auto s = batch_pmf_series(BatchDist::pareto_tail(2.0, 1.8), 256);
  CHECK(s[0] == 0.0);
  CHECK(close_rel(s.mass_deficit(), BatchDist::pareto_tail(2.0, 1.8).tail(256), 1e-12));
  CHECK(std::fabs(s.sum() + s.mass_deficit() - 1.0) < 1e-12);
}

TEST_CASE("mixed Poisson weights") {
  auto p = mixed_poisson_weights(e1(), ServiceView::service, 2048);
  for (const auto& w : ref::e1_service_weights) CHECK(close_rel(p[w.k], w.p, 1e-9));
  auto q = mixed_poisson_weights(e1(), ServiceView::equilibrium, 2048);
  for (const auto& w : ref::e1_equilibrium_weights) CHECK(close_rel(q[w.k], w.p, 1e-9));
  CHECK(std::fabs(p.sum() + p.mass_deficit() - 1.0) < 1e-12);
  CHECK(p.mean() == doctest::Approx(0.5).epsilon(1e-3));
}
