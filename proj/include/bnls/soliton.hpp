// Ground-state / soliton profiles of the delta-potential problem and the
// perturbation bump family used by the test and CLI drivers.
#pragma once

#include <cmath>

#include "bnls/grid.hpp"
#include "bnls/types.hpp"

namespace bnls {

// Nonlinear ground state v_lambda(x) = lambda sech(lambda |x| + atanh(q/lambda)).
inline double ground_state(double x, double lambda, double q) {
  return lambda / std::cosh(lambda * std::abs(x) + std::atanh(q / lambda));
}

// One-soliton profile eta_lambda(x) = lambda sech(lambda x + atanh(q/lambda)),
// the Backlund extension of v_lambda|_{x>=0}.
inline double soliton_profile(double x, double lambda, double q) {
  return lambda / std::cosh(lambda * x + std::atanh(q / lambda));
}

inline SampledField sample_ground_state(const SpatialGrid& g, double lambda, double q) {
  return SampledField::sample(g, [&](double x) { return Complex{ground_state(x, lambda, q), 0.0}; });
}

inline SampledField sample_soliton(const SpatialGrid& g, double lambda, double q) {
  return SampledField::sample(g, [&](double x) { return Complex{soliton_profile(x, lambda, q), 0.0}; });
}

// Even perturbation family w(x) = amplitude * exp(-(x/sigma)^2) * cos(omega x).
struct BumpParams {
  double amplitude = 1.0;
  double sigma = 1.0;
  double omega = 0.0;
};

inline double bump(double x, const BumpParams& p) {
  const double s = x / p.sigma;
  return p.amplitude * std::exp(-s * s) * std::cos(p.omega * x);
}

inline SampledField sample_perturbed_ground_state(const SpatialGrid& g, double lambda,
                                                  double q, double eps, const BumpParams& p) {
  return SampledField::sample(g, [&](double x) {
    return Complex{ground_state(x, lambda, q) + eps * bump(x, p), 0.0};
  });
}

}  // namespace bnls
