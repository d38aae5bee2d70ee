#include "rtail/asymptotics.hpp"

#include <cmath>

#include "rtail/error.hpp"

namespace rtail {

namespace {

constexpr double kCaseTolerance = 1e-9;

struct Terms {
  double lambda, mu, rho, chi1, beta1, a, c_X;
  /// (lambda chi1)^a when the service drives the tail (Cases 1, 3), else 0.
  double service_part;
  /// c_X when the batch drives the tail (Cases 2, 3), else 0.
  double batch_part;
};

Terms terms(const ModelParams& params, const Regime& r) {
  params.require_stable();
  Terms t{};
  t.lambda = params.lambda();
  t.mu = params.mu();
  t.rho = params.rho();
  t.chi1 = params.chi1();
  t.beta1 = params.beta1();
  t.a = r.a;
  t.c_X = r.c_X;
  t.service_part = r.case_id == CaseId::case2 ? 0.0 : std::pow(t.lambda * t.chi1, t.a);
  t.batch_part = r.case_id == CaseId::case1 ? 0.0 : t.c_X;
  return t;
}

NamedCurve present(std::string name, double c, double e, double L) {
  return {std::move(name), TailCurve{c, e, L}, {}};
}

NamedCurve absent(std::string name, std::string why) {
  return {std::move(name), std::nullopt, std::move(why)};
}

}  // namespace

std::string to_string(CaseId id) {
  switch (id) {
    case CaseId::case1: return "Case1";
    case CaseId::case2: return "Case2";
    case CaseId::case3: return "Case3";
  }
  return "unknown";
}

double TailCurve::operator()(double j) const { return c * std::pow(j, -e) * L; }

Regime classify(const ModelParams& params) {
  Regime r;
  r.d_service = params.service().tail_index();
  r.d_batch = params.batch().tail_index();
  r.L_service = params.service().slowly_varying_constant();
  r.L_batch = params.batch().tail_constant();
  const bool service_heavy = std::isfinite(r.d_service);
  const bool batch_heavy = std::isfinite(r.d_batch);
  if (!service_heavy && !batch_heavy) {
    throw UnsupportedModelError(
        "both service and batch laws are light-tailed; no regularly varying tail to "
        "analyse");
  }
  if (service_heavy && r.d_service <= 1.0) throw DomainError("service tail index <= 1");
  if (batch_heavy && r.d_batch <= 1.0) throw DomainError("batch tail index <= 1");

  if (service_heavy && batch_heavy && std::abs(r.d_service - r.d_batch) < kCaseTolerance) {
    r.case_id = CaseId::case3;
    r.a = r.d_service;
    r.L = r.L_service;
    r.c_X = r.L_batch / r.L_service;
  } else if (r.d_batch > r.d_service) {
    r.case_id = CaseId::case1;
    r.a = r.d_service;
    r.L = r.L_service;
    r.c_X = 0.0;
  } else {
    r.case_id = CaseId::case2;
    r.a = r.d_batch;
    r.L = 1.0;
    r.c_X = r.L_batch;
  }
  return r;
}

double psi(const ModelParams& params) { return params.psi(); }

double c_K(const ModelParams& params, const Regime& regime) {
  const Terms t = terms(params, regime);
  return (t.service_part * t.chi1 + t.batch_part) /
         ((t.a - 1.0) * (1.0 - t.rho) * (t.rho + t.chi1 - 1.0));
}

double c_K_star(const ModelParams& params, const Regime& regime) {
  const Terms t = terms(params, regime);
  return (t.service_part + (1.0 + t.lambda * t.beta1) * t.batch_part) /
         ((t.a - 1.0) * (t.rho + t.chi1 - 1.0));
}

double c_K_circ(const ModelParams& params, const Regime& regime) {
  const Terms t = terms(params, regime);
  return (t.service_part + t.lambda * t.beta1 * t.batch_part) /
         ((t.a - 1.0) * (1.0 - t.rho));
}

double c_D0(const ModelParams& params, const Regime& regime) {
  const Terms t = terms(params, regime);
  const double service = regime.case_id == CaseId::case2
                             ? 0.0
                             : std::pow(t.lambda * t.chi1, t.a + 1.0);
  return (service + t.lambda * t.batch_part) /
         (t.a * t.mu * (1.0 - t.rho) * (1.0 - t.rho));
}

double c_D1(const ModelParams& params, const Regime& regime) {
  const Terms t = terms(params, regime);
  return (t.service_part + t.lambda * t.beta1 * t.batch_part) /
         ((t.a - 1.0) * (1.0 - t.rho) * t.rho);
}

TailCurve refined_difference_curve(const ModelParams& params) {
  const Regime r = classify(params);
  const double c = (r.a - 1.0) * params.psi() * c_K_circ(params, r) + c_D0(params, r);
  return {c, r.a, r.L};
}

std::vector<NamedCurve> intermediate_curves(const ModelParams& params,
                                            const Regime& regime) {
  const Terms t = terms(params, regime);
  const double lam = t.lambda;
  const double a = t.a;
  const double L = regime.L;
  const double lx = lam * t.chi1;
  const double mean_x0 = t.rho + t.chi1 - 1.0;
  std::vector<NamedCurve> out;

  // N_B and N_Be follow the service law alone, with its own constant.
  if (std::isfinite(regime.d_service)) {
    const double d = regime.d_service;
    const double Ls = regime.L_service;
    out.push_back(present("N_B", std::pow(lam, d), d, Ls));
    out.push_back(present("N_Be", std::pow(lam, d - 1.0) / ((d - 1.0) * t.beta1),
                          d - 1.0, Ls));
  } else {
    out.push_back(absent("N_B", "service law is light-tailed"));
    out.push_back(absent("N_Be", "service law is light-tailed"));
  }

  switch (regime.case_id) {
    case CaseId::case1:
      out.push_back(present("N_BX", std::pow(lx, a), a, L));
      out.push_back(present("N_BXX0", std::pow(lx, a), a, L));
      out.push_back(present("N_BeXXde", std::pow(lx, a - 1.0) / ((a - 1.0) * t.beta1),
                            a - 1.0, L));
      out.push_back(present("K_star", std::pow(lx, a) / ((a - 1.0) * mean_x0), a - 1.0, L));
      out.push_back(present("K_circ", std::pow(lx, a) / ((a - 1.0) * (1.0 - t.rho)),
                            a - 1.0, L));
      break;
    case CaseId::case2: {
      const double cx = t.c_X;
      const double lb = lam * t.beta1;
      out.push_back(present("N_BX", lb * cx, a, L));
      out.push_back(present("N_BXX0", (1.0 + lb) * cx, a, L));
      out.push_back(present("N_BeXXde", cx / (t.chi1 * (a - 1.0)), a - 1.0, L));
      out.push_back(present("K_star", (1.0 + lb) * cx / ((a - 1.0) * mean_x0), a - 1.0, L));
      out.push_back(present("K_circ", lb * cx / ((1.0 - t.rho) * (a - 1.0)), a - 1.0, L));
      break;
    }
    case CaseId::case3: {
      const double cx = t.c_X;
      const double lb = lam * t.beta1;
      const double la = std::pow(lx, a);
      out.push_back(present("N_BX", la + lb * cx, a, L));
      out.push_back(present("N_BXX0", la + (1.0 + lb) * cx, a, L));
      out.push_back(present("N_BeXXde", (la + lb * cx) / ((a - 1.0) * t.rho), a - 1.0, L));
      out.push_back(present("K_star", (la + (1.0 + lb) * cx) / ((a - 1.0) * mean_x0),
                            a - 1.0, L));
      out.push_back(present("K_circ", (la + lb * cx) / ((a - 1.0) * (1.0 - t.rho)),
                            a - 1.0, L));
      break;
    }
  }
  return out;
}

AsymptoticReport asymptotic_report(const ModelParams& params) {
  params.require_stable();
  AsymptoticReport rep;
  rep.rho = params.rho();
  rep.psi = params.psi();
  rep.chi1 = params.chi1();
  rep.beta1 = params.beta1();
  rep.regime = classify(params);
  const Regime& r = rep.regime;
  rep.c_K = c_K(params, r);
  rep.c_K_star = c_K_star(params, r);
  rep.c_K_circ = c_K_circ(params, r);
  rep.c_D0 = c_D0(params, r);
  rep.c_D0_identity = (1.0 - 1.0 / r.a) * rep.c_K * rep.psi;
  rep.c_D1 = c_D1(params, r);
  rep.refined_coefficient = (r.a - 1.0) * rep.psi * rep.c_K_circ + rep.c_D0;

  const double a = r.a;
  rep.headline = {
      present("K", rep.c_K, a - 1.0, r.L),
      present("K_circ", rep.c_K_circ, a - 1.0, r.L),
      present("K_star", rep.c_K_star, a - 1.0, r.L),
      present("D0", rep.c_D0, a, r.L),
      present("D1", rep.c_D1, a - 1.0, r.L),
      present("L_inf", rep.c_K_circ, a - 1.0, r.L),
      present("L_mu_minus_L_inf", rep.refined_coefficient, a, r.L),
  };
  rep.intermediate = intermediate_curves(params, r);
  return rep;
}

}  // namespace rtail
