#pragma once

#include <cmath>
#include <numbers>

#include "dtc/errors.hpp"
#include "dtc/frames.hpp"

namespace dtc {

struct FluxEstimate {
  double lambda_alpha = 0.0;
  double lambda_beta = 0.0;
  double magnitude = 0.0;
  double angle = 0.0;  // rad, (-pi, pi]
  int sector = 1;
};

struct EstimatorState {
  FluxEstimate flux;
  double torque_estimate = 0.0;
  double rs = 0.7334;  // resistance the estimator believes
};

inline double magnitude(double lambda_alpha, double lambda_beta) {
  return std::sqrt(lambda_alpha * lambda_alpha + lambda_beta * lambda_beta);
}

/// Electromagnetic torque from stator flux and stator current.
inline double torque(const AlphaBeta& lambda, const AlphaBeta& i, int pole_pairs) {
  return 1.5 * pole_pairs * (lambda.alpha * i.beta - lambda.beta * i.alpha);
}

/// Sector k in 1..6 spans [-30 + 60(k-1), 30 + 60(k-1)) degrees; lower edge
/// inclusive. Sector 1 is centered on the alpha axis.
inline int sector(double lambda_alpha, double lambda_beta) {
  if (lambda_alpha == 0.0 && lambda_beta == 0.0) {
    throw DegenerateFluxError("flux vector is zero; sector undefined");
  }
  constexpr double kSixth = std::numbers::pi / 3.0;
  const double theta = std::atan2(lambda_beta, lambda_alpha);
  const int k = static_cast<int>(std::floor((theta + kSixth / 2.0) / kSixth));
  return (k % 6 + 6) % 6 + 1;
}

namespace detail {
inline void refresh(FluxEstimate& f) {
  f.magnitude = magnitude(f.lambda_alpha, f.lambda_beta);
  if (f.magnitude > 0.0) {
    f.angle = std::atan2(f.lambda_beta, f.lambda_alpha);
    if (f.angle == -std::numbers::pi) f.angle = std::numbers::pi;
    f.sector = sector(f.lambda_alpha, f.lambda_beta);
  } else {
    // Unmagnetized: keep the previous angle and sector.
  }
}
}  // namespace detail

/// Seeds the estimator with a known flux vector.
inline EstimatorState with_flux(EstimatorState e, const AlphaBeta& lambda) {
  e.flux.lambda_alpha = lambda.alpha;
  e.flux.lambda_beta = lambda.beta;
  detail::refresh(e.flux);
  return e;
}

/// One forward-Euler step of the voltage-model flux integral
///   lambda += (v - rs i) dt.
/// No drift compensation.
inline EstimatorState update_flux(EstimatorState e, const AlphaBeta& v,
                                  const AlphaBeta& i, double dt) {
  if (!(dt > 0.0)) throw ConfigError("estimator: dt must be > 0");
  e.flux.lambda_alpha += (v.alpha - e.rs * i.alpha) * dt;
  e.flux.lambda_beta += (v.beta - e.rs * i.beta) * dt;
  detail::refresh(e.flux);
  return e;
}

inline EstimatorState update_torque(EstimatorState e, const AlphaBeta& i,
                                    int pole_pairs) {
  e.torque_estimate = torque({e.flux.lambda_alpha, e.flux.lambda_beta, 0.0}, i,
                             pole_pairs);
  return e;
}

}  // namespace dtc
