#pragma once

#include <cstddef>

#include "rtail/model.hpp"
#include "rtail/trunc_series.hpp"

namespace rtail {

/// Series shared by every exact distribution, computed once per (params, N).
struct ExactInputs {
  double rho = 0.0;
  double psi = 0.0;
  double chi1 = 0.0;
  /// X, X_0 = X - 1 and the discrete equilibrium law X^(de).
  TruncSeries batch;
  TruncSeries batch_minus_one;
  TruncSeries batch_de;
  /// Customers arriving during B, and during B^(e).
  TruncSeries n_bx;
  TruncSeries n_bex;
  /// N_{B_X} + X_0, mean rho + chi1 - 1.
  TruncSeries n_bxx0;
  /// N_{B^(e)_X} + X^(de): the summand of the geometric compound K_circ.
  TruncSeries t;
};

/// Throws StabilityError when rho >= 1.
ExactInputs exact_inputs(const ModelParams& params, std::size_t trunc);

struct ExactDistributions {
  double rho = 0.0;
  double psi = 0.0;
  TruncSeries k_star;
  TruncSeries k_circ;
  TruncSeries k;
  TruncSeries d0;
  TruncSeries d1;
  TruncSeries l_inf;
  TruncSeries l_mu;
};

TruncSeries k_star_series(const ExactInputs& in);
TruncSeries k_circ_series(const ExactInputs& in);
/// exp(-psi int_z^1 K(u) du) as a pmf.
TruncSeries d0_from_k(const TruncSeries& k, double psi);

TruncSeries k_star_series(const ModelParams& params, std::size_t trunc);
TruncSeries k_circ_series(const ModelParams& params, std::size_t trunc);
TruncSeries d0_series(const ModelParams& params, std::size_t trunc);
TruncSeries l_inf_series(const ModelParams& params, std::size_t trunc);
TruncSeries l_mu_series(const ModelParams& params, std::size_t trunc);
TruncSeries d1_series(const ModelParams& params, std::size_t trunc);

/// Orbit-size weights split by server state: p0(n) = P{idle, N_orb = n},
/// p1(n) = P{busy, N_orb = n}. General-kind series with masses 1 - rho, rho.
struct JointOrbitServer {
  TruncSeries p0;
  TruncSeries p1;
};
JointOrbitServer joint_orbit_server(const ExactDistributions& exact);
JointOrbitServer joint_orbit_server(const ModelParams& params, std::size_t trunc);

ExactDistributions compute_exact(const ModelParams& params, std::size_t trunc);

}  // namespace rtail
