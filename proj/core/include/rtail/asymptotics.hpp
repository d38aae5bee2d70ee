#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rtail/model.hpp"

namespace rtail {

/// Case1: d_X > d_B (batch lighter), Case2: d_X < d_B, Case3: d_X = d_B.
enum class CaseId { case1, case2, case3 };

std::string to_string(CaseId id);

struct Regime {
  CaseId case_id = CaseId::case1;
  /// min(d_B, d_X).
  double a = 0.0;
  double d_service = kLightTail;
  double d_batch = kLightTail;
  /// The constant slowly varying part every curve is written against.
  double L = 1.0;
  double L_service = 0.0;
  double L_batch = 0.0;
  /// Batch tail constant relative to L, so P{X > j} ~ c_X j^{-d_X} L.
  double c_X = 0.0;
};

/// c j^{-e} L.
struct TailCurve {
  double c = 0.0;
  double e = 0.0;
  double L = 1.0;
  double operator()(double j) const;
};

/// A curve that may be undefined in the active regime.
struct NamedCurve {
  std::string name;
  std::optional<TailCurve> curve;
  std::string absent_reason;
};

struct AsymptoticReport {
  double rho = 0.0;
  double psi = 0.0;
  double chi1 = 0.0;
  double beta1 = 0.0;
  Regime regime;
  double c_K = 0.0;
  double c_K_star = 0.0;
  double c_K_circ = 0.0;
  double c_D0 = 0.0;
  /// (1 - 1/a) c_K psi, evaluated separately from the branch display.
  double c_D0_identity = 0.0;
  double c_D1 = 0.0;
  double refined_coefficient = 0.0;
  /// K, K_circ, K_star, D0, D1, L_inf, L_mu - L_inf.
  std::vector<NamedCurve> headline;
  /// N_B, N_Be, N_BX, N_BXX0, N_BeXXde, K_star, K_circ.
  std::vector<NamedCurve> intermediate;
};

/// Throws UnsupportedModelError when both laws are light-tailed.
Regime classify(const ModelParams& params);

double psi(const ModelParams& params);
double c_K(const ModelParams& params, const Regime& regime);
double c_K_star(const ModelParams& params, const Regime& regime);
double c_K_circ(const ModelParams& params, const Regime& regime);
double c_D0(const ModelParams& params, const Regime& regime);
double c_D1(const ModelParams& params, const Regime& regime);

/// [(a - 1) psi c_K_circ + c_D0] j^{-a} L: P{L_mu > j} - P{L_inf > j}.
TailCurve refined_difference_curve(const ModelParams& params);

std::vector<NamedCurve> intermediate_curves(const ModelParams& params,
                                            const Regime& regime);

/// Requires stability.
AsymptoticReport asymptotic_report(const ModelParams& params);

}  // namespace rtail
