#include "rtail/exact.hpp"

#include <algorithm>
#include <cmath>

#include "rtail/series.hpp"

namespace rtail {

ExactInputs exact_inputs(const ModelParams& params, std::size_t trunc) {
  params.require_stable();
  ExactInputs in;
  in.rho = params.rho();
  in.psi = params.psi();
  in.chi1 = params.chi1();

  const BatchDist& x = params.batch();
  in.batch = batch_pmf_series(x, trunc);
  std::vector<double> x0(trunc + 1);
  for (std::size_t j = 0; j <= trunc; ++j) x0[j] = x.pmf(static_cast<long>(j) + 1);
  in.batch_minus_one = TruncSeries::from_pmf(std::move(x0), x.tail(static_cast<long>(trunc) + 1));
  in.batch_de = equilibrium_transform(in.batch, in.chi1);

  in.n_bx = compound_over_service(params, ServiceView::service, trunc);
  in.n_bex = compound_over_service(params, ServiceView::equilibrium, trunc);
  in.n_bxx0 = mul(in.n_bx, in.batch_minus_one);
  in.t = mul(in.n_bex, in.batch_de);
  return in;
}

TruncSeries k_star_series(const ExactInputs& in) {
  return equilibrium_transform(in.n_bxx0, in.rho + in.chi1 - 1.0);
}

TruncSeries k_circ_series(const ExactInputs& in) {
  return reciprocal_complement(in.t, in.rho);
}

namespace {

/// sum_{j > N} k_j / (j + 1), extrapolated from the deficit with the local
/// tail index of k: for P{K > j} ~ C j^-alpha it is tail(N) alpha / ((alpha + 1) N).
double a0_beyond_truncation(const TruncSeries& k) {
  if (!k.is_pmf() || k.mass_deficit() <= 0.0 || k.trunc() < 2) return 0.0;
  const std::size_t n = k.trunc();
  const double far = k.tail(n);
  const double near = k.tail(n / 2);
  double alpha = 1.0;
  if (near > far && far > 0.0) {
    alpha = std::log(near / far) / std::log(static_cast<double>(n) / static_cast<double>(n / 2));
  }
  alpha = std::clamp(alpha, 0.05, 50.0);
  return far * alpha / ((alpha + 1.0) * static_cast<double>(n + 1));
}

}  // namespace

TruncSeries d0_from_k(const TruncSeries& k, double psi) {
  const TruncSeries a = integral_to_one(k);
  std::vector<double> s(a.size(), 0.0);
  for (std::size_t j = 1; j < a.size(); ++j) s[j] = -psi * a[j];
  const TruncSeries e = exp_shifted(TruncSeries::from_coeffs(std::move(s)),
                                    psi * (a[0] + a0_beyond_truncation(k)));
  return TruncSeries::from_pmf(std::vector<double>(e.coeffs().begin(), e.coeffs().end()));
}

TruncSeries k_star_series(const ModelParams& params, std::size_t trunc) {
  return k_star_series(exact_inputs(params, trunc));
}

TruncSeries k_circ_series(const ModelParams& params, std::size_t trunc) {
  return k_circ_series(exact_inputs(params, trunc));
}

TruncSeries d0_series(const ModelParams& params, std::size_t trunc) {
  const ExactInputs in = exact_inputs(params, trunc);
  return d0_from_k(mul(k_star_series(in), k_circ_series(in)), in.psi);
}

TruncSeries l_inf_series(const ModelParams& params, std::size_t trunc) {
  const ExactInputs in = exact_inputs(params, trunc);
  return mul(in.n_bx, k_circ_series(in));
}

TruncSeries l_mu_series(const ModelParams& params, std::size_t trunc) {
  return compute_exact(params, trunc).l_mu;
}

TruncSeries d1_series(const ModelParams& params, std::size_t trunc) {
  return compute_exact(params, trunc).d1;
}

JointOrbitServer joint_orbit_server(const ExactDistributions& exact) {
  return {scale(exact.d0, 1.0 - exact.rho), scale(exact.d1, exact.rho)};
}

JointOrbitServer joint_orbit_server(const ModelParams& params, std::size_t trunc) {
  return joint_orbit_server(compute_exact(params, trunc));
}

ExactDistributions compute_exact(const ModelParams& params, std::size_t trunc) {
  const ExactInputs in = exact_inputs(params, trunc);
  ExactDistributions out;
  out.rho = in.rho;
  out.psi = in.psi;
  out.k_star = k_star_series(in);
  out.k_circ = k_circ_series(in);
  out.k = mul(out.k_star, out.k_circ);
  out.d0 = d0_from_k(out.k, in.psi);
  out.l_inf = mul(in.n_bx, out.k_circ);
  out.l_mu = mul(out.l_inf, out.d0);
  out.d1 = mul(mul(in.t, out.k_circ), out.d0);
  return out;
}

}  // namespace rtail
