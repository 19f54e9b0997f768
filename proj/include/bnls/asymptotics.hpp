// Long-time evaluators: the stationary-point quantities nu(z0), k1, k2 from
// the localized parabolic-cylinder RHP, the endpoint phases l_j and
// delta-hat_j, and the explicit leading-order solution formulas for one and
// two imaginary zeros, in both the soliton window |x| <= M and the matching
// region |x| >= 1/M. Also the small-q intermediate-time formulas and the
// perturbed-zero estimates.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "bnls/errors.hpp"
#include "bnls/grid.hpp"
#include "bnls/quadrature.hpp"
#include "bnls/soliton.hpp"
#include "bnls/special.hpp"
#include "bnls/types.hpp"

namespace bnls {

struct LocalK {
  double z0 = 0.0;
  double nu = 0.0;
  Complex k1{0.0, 0.0};
  Complex k2{0.0, 0.0};
  Complex alpha0{1.0, 0.0};
};

namespace detail {

// Returns P = int_{-inf}^{z0} [L(s) - L(z0) chi0(s)(s-z0+1)]/(s-z0) ds, the
// chi^0-regularized history integral; the chi^0 subtraction over (z0-1, z0)
// makes the integrand bounded at s = z0. For decaying L one has
// int log(z0-s) dL(s) = -P.
inline double arg_history_integral(const SpectralGrid& g, const RVec& L, double z0) {
  const double h = g.spacing();
  double Lz0;
  {
    CVec tmp(L.size());
    for (std::size_t i = 0; i < L.size(); ++i) tmp[i] = L[i];
    Lz0 = interp_linear(g, tmp, z0).real();
  }
  RVec f;
  RVec xs;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double s = g.z[i];
    if (s > z0 + 0.25 * h) break;
    const double d = s - z0;
    double val;
    if (std::abs(d) < 0.5 * h) {
      // limit L'(z0) - L(z0)
      const std::size_t j = (i == 0) ? 1 : (i + 1 == g.size() ? g.size() - 2 : i);
      val = (L[j + 1] - L[j - 1]) / (2.0 * h) - Lz0;
    } else if (d > -1.0) {
      val = (L[i] - Lz0 * (d + 1.0)) / d;
    } else {
      val = L[i] / d;
    }
    f.push_back(val);
    xs.push_back(s);
  }
  if (f.size() < 2) return 0.0;
  return trapezoid(f, h);
}

}  // namespace detail

// k1 = beta(z0) e^{i[x^2/(2t) + nu log t]}, |beta(z0)|^2 = nu(z0),
// arg beta(z0) = pi/4 + J/pi + arg r(z0) - arg Gamma(i nu); k2 = -nu/k1.
inline LocalK local_k(const SpectralGrid& grid, const CVec& r, double x, double t) {
  LocalK out;
  out.z0 = std::abs(x) / t;
  const Complex r_z0 = interp_linear(grid, r, out.z0);
  out.nu = std::log1p(std::norm(r_z0)) / kTwoPi;
  if (std::abs(r_z0) == 0.0 || out.nu == 0.0) return out;  // k1 = k2 = 0

  RVec L(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) L[i] = std::log1p(std::norm(r[i]));
  const double P = detail::arg_history_integral(grid, L, out.z0);
  // beta(z0,z0) - i nu = P / (2 pi i), purely imaginary for real P
  const double J_over_pi = -P / kPi;  // = (1/pi) int log(z0-s) dlog(1+|r|^2)

  const double arg_beta = 0.25 * kPi + J_over_pi + std::arg(r_z0) -
                          std::arg(gamma_complex(Complex{0.0, out.nu}));
  const double phase = x * x / (2.0 * t) + out.nu * std::log(t);
  out.k1 = std::sqrt(out.nu) * std::exp(I * (arg_beta + phase));
  out.k2 = -out.nu / out.k1;
  out.alpha0 = std::exp(I * (x * x / (4.0 * t) + 0.5 * out.nu * std::log(t)) +
                        Complex{0.0, -P / kTwoPi});
  return out;
}

// l_j = (1/pi) int_0^inf s/(s^2+mu^2) log(1+|r|^2) ds on the grid.
inline double l_j_integral(const SpectralGrid& grid, const CVec& r, double mu) {
  RVec f;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = grid.z[i];
    if (s < -0.25 * grid.spacing()) continue;
    f.push_back(s / (s * s + mu * mu) * std::log1p(std::norm(r[i])));
  }
  return trapezoid(f, grid.spacing()) / kPi;
}

// delta-hat_j = exp[(1/2pi i) int_0^{z0} log(1+|r|^2)/(s - i mu) ds].
inline Complex delta_hat_j(const SpectralGrid& grid, const CVec& r, double mu, double z0) {
  if (z0 <= 0.0) return Complex{1.0, 0.0};
  const int n = 64;
  const double h = z0 / n;
  CVec f(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double s = h * i;
    const Complex rs = interp_linear(grid, r, s);
    f[i] = std::log1p(std::norm(rs)) / (s - Complex{0.0, mu});
  }
  return std::exp(trapezoid(f, h) / (Complex{0.0, kTwoPi}));
}

// rho_j = -arg gamma_j; the positive square-root factors in the norming
// normal forms do not move the argument.
inline RVec rho_from_gammas(const ScatteringData& d) {
  RVec out;
  for (const auto& g : d.gammas) out.push_back(-std::arg(g));
  return out;
}

struct AsymptoticState {
  double x = 0.0;
  double t = 0.0;
  double z0 = 0.0;
  double nu = 0.0;
  RVec l;
  CVec delta_hat;
  Complex k1{0.0, 0.0}, k2{0.0, 0.0};
  Complex p1{0.0, 0.0}, p2{0.0, 0.0}, p3{0.0, 0.0}, p4{0.0, 0.0};
  CVec upsilon;        // upsilon_j (one zero) or upsilon-hat_j (two zeros)
  CVec upsilon_x;      // decayed versions at |x|
  Complex s0{0.0, 0.0}, s{0.0, 0.0}, s1{0.0, 0.0}, s2{0.0, 0.0};
};

struct TheoremEvalOptions {
  double region_M = 4.0;
  double kappa = 0.2;
};

struct TheoremEvalResult {
  Complex u_leading{0.0, 0.0};
  double error_scale = 0.0;
  AsymptoticState state;
  const char* regime = "";
};

namespace detail {

inline AsymptoticState build_state(const ScatteringData& d, const RVec& rho, double x,
                                   double t) {
  AsymptoticState st;
  st.x = x;
  st.t = t;
  // k1, k2 belong to the pole-stripped RHP: the Blaschke factors leave |r|
  // unchanged but rotate arg r(z0) by 2 atan(mu_k/z0) per zero
  CVec rf = d.r;
  for (std::size_t i = 0; i < rf.size(); ++i) {
    const Complex z{d.grid.z[i], 0.0};
    for (double mu : d.zeros)
      rf[i] *= (z + Complex{0.0, mu}) / (z - Complex{0.0, mu});
  }
  const LocalK lk = local_k(d.grid, rf, x, t);
  st.z0 = lk.z0;
  st.nu = lk.nu;
  st.k1 = lk.k1;
  st.k2 = lk.k2;
  const std::size_t n = d.zeros.size();
  const bool two = n == 2;
  const double rt = std::sqrt(t);
  for (std::size_t j = 0; j < n; ++j) {
    const double mu = d.zeros[j];
    st.l.push_back(l_j_integral(d.grid, d.r, mu));
    st.delta_hat.push_back(delta_hat_j(d.grid, d.r, mu, st.z0));
    // one zero: upsilon_j with sqrt((mu-q)/(mu+q)); two zeros: hat version
    const double root = two ? std::sqrt((mu + d.q) / (mu - d.q))
                            : std::sqrt((mu - d.q) / (mu + d.q));
    const Complex ph = std::exp(I * (0.5 * mu * mu * t + rho[j] + st.l[j]));
    const Complex ups = -root * ph * st.delta_hat[j] * st.delta_hat[j];
    st.upsilon.push_back(ups);
    st.upsilon_x.push_back(ups * std::exp(-mu * std::abs(x)));
  }
  const Complex z1{0.0, d.zeros[0]};
  st.p1 = I * st.k1 / (rt * (st.z0 - z1));
  st.p2 = -I * st.k2 / (rt * (st.z0 - z1));
  if (two) {
    const Complex z2{0.0, d.zeros[1]};
    st.p3 = I * st.k1 / (rt * (st.z0 - z2));
    st.p4 = -I * st.k2 / (rt * (st.z0 - z2));
  }
  return st;
}

}  // namespace detail

// Leading term of the |x| <= M formula.
inline Complex theorem_main_small_x(const ScatteringData& d, const RVec& rho,
                                    const AsymptoticState& st) {
  const double mu1 = d.zeros[0];
  const Complex ph = std::exp(I * (0.5 * mu1 * mu1 * st.t + rho[0] + st.l[0]));
  if (d.zeros.size() == 1) return ph * ground_state(st.x, mu1, d.q);
  const double mu2 = d.zeros[1];
  const double ax = std::abs(st.x);
  const Complex sol = ph * mu1 / std::cosh(mu1 * ax - std::atanh(d.q / mu1));
  const Complex u1x = st.upsilon_x[0];
  const Complex u2x = st.upsilon_x[1];
  const Complex s0 = -2.0 * mu1 / (mu1 - mu2) * (u1x - u2x) / (std::norm(u1x) + 1.0);
  const Complex num = (u2x - s0) * (1.0 + u1x * std::conj(s0));
  const double den = std::norm(u2x - s0) + std::norm(1.0 + u1x * std::conj(s0));
  return sol - 2.0 * mu2 * num / den;
}

// Leading term of the |x| >= 1/M formula (valid for all x).
inline Complex theorem_main_large_x(const ScatteringData& d, const AsymptoticState& st) {
  const double mu1 = d.zeros[0];
  const Complex u1x = st.upsilon_x[0];
  const Complex num1 = (u1x + st.p1) * (std::conj(st.p2) * std::conj(u1x) + 1.0);
  const double den1 = std::norm(u1x + st.p1) + std::norm(st.p2 * u1x + 1.0);
  Complex u = -st.k1 / std::sqrt(st.t) - 2.0 * mu1 * num1 / den1;
  if (d.zeros.size() == 2) {
    const double mu2 = d.zeros[1];
    const Complex u2x = st.upsilon_x[1];
    const Complex s = 2.0 * mu1 / (mu1 - mu2) *
                      ((st.p2 * u1x + 1.0) * (u2x + st.p3) - (u1x + st.p1) * (st.p4 * u2x + 1.0)) /
                      (std::norm(u1x + st.p1) + std::norm(st.p2 * u1x + 1.0));
    const Complex s1 = u2x + st.p3 - (std::conj(st.p2) * std::conj(u1x) + 1.0) * s;
    const Complex s2 = st.p4 * u2x + 1.0 + (std::conj(u1x) + std::conj(st.p1)) * s;
    u -= 2.0 * mu2 * s1 * std::conj(s2) / (std::norm(s1) + std::norm(s2));
  }
  return u;
}

// Theorem evaluator with region dispatch: the |x| <= M display inside
// |x| < 1/M, the matching-region display elsewhere (it holds for all x).
inline TheoremEvalResult theorem_main_eval(const ScatteringData& d, const RVec& rho, double x,
                                           double t, const TheoremEvalOptions& opt = {}) {
  const std::size_t n = d.zeros.size();
  if (n < 1 || n > 2) throw UnsupportedSpectrum("theorem_main_eval needs 1 or 2 zeros");
  if (rho.size() != n) throw ConfigError("theorem_main_eval: rho size mismatch");
  TheoremEvalResult out;
  out.state = detail::build_state(d, rho, x, t);
  // s-quantities recorded in the state for reporting
  if (n == 2) {
    const double mu1 = d.zeros[0], mu2 = d.zeros[1];
    const Complex u1x = out.state.upsilon_x[0], u2x = out.state.upsilon_x[1];
    out.state.s0 = -2.0 * mu1 / (mu1 - mu2) * (u1x - u2x) / (std::norm(u1x) + 1.0);
    out.state.s = 2.0 * mu1 / (mu1 - mu2) *
                  ((out.state.p2 * u1x + 1.0) * (u2x + out.state.p3) -
                   (u1x + out.state.p1) * (out.state.p4 * u2x + 1.0)) /
                  (std::norm(u1x + out.state.p1) + std::norm(out.state.p2 * u1x + 1.0));
    out.state.s1 = u2x + out.state.p3 -
                   (std::conj(out.state.p2) * std::conj(u1x) + 1.0) * out.state.s;
    out.state.s2 = out.state.p4 * u2x + 1.0 +
                   (std::conj(u1x) + std::conj(out.state.p1)) * out.state.s;
  }
  double rsup = 0.0;
  for (const auto& v : d.r) rsup = std::max(rsup, std::abs(v));
  out.error_scale = rsup * std::pow(std::abs(d.q), -0.5) *
                    std::pow(t, -(0.5 + opt.kappa));
  if (std::abs(x) < 1.0 / opt.region_M) {
    out.u_leading = theorem_main_small_x(d, rho, out.state);
    out.regime = "soliton-window";
  } else {
    out.u_leading = theorem_main_large_x(d, out.state);
    out.regime = std::abs(x) <= opt.region_M ? "overlap" : "matching-region";
  }
  return out;
}

// K(z) of the small-q theorem for a real even perturbation given on x >= 0.
inline std::function<double(double)> k_transform(const SampledField& w_plus, double mu0) {
  return [w_plus, mu0](double z) -> double {
    const SpatialGrid& g = w_plus.grid;
    CVec f(g.n_points);
    for (int i = 0; i < g.n_points; ++i) {
      const double s = g.x(i);
      const Complex zz{z, 0.0};
      const Complex num = zz * zz - 2.0 * I * zz * mu0 * std::tanh(mu0 * s) - mu0 * mu0;
      f[i] = std::exp(-I * s * z) * w_plus.values[i].real() * num / (z * z + mu0 * mu0);
    }
    return -trapezoid(f, g.h()).real();
  };
}

struct SmallQEvalOptions {
  double region_M = 4.0;
  double soliton_time_factor = 2.0;  // pure-soliton branch for t >= factor/q^2
};

// Theorem-1.2 evaluator: the dispersive correction of the stationary soliton
// for t << q^-2 and the relaxed soliton beyond.
inline Complex theorem_small_q_eval(double w0, double w1, const std::function<double(double)>& K,
                                    double mu1, double q, double x, double t,
                                    const SmallQEvalOptions& opt = {}) {
  (void)w1;  // enters only through the caller's mu_1 = mu_0 + q w_1
  const double ax = std::abs(x);
  const Complex sol_phase = std::exp(I * 0.5 * mu1 * mu1 * t);
  if (t * q * q >= opt.soliton_time_factor)
    return sol_phase * ground_state(x, mu1, q);

  if (ax < 1.0 / opt.region_M) {
    const double Omega = -x * x / (2.0 * t) + 0.5 * mu1 * mu1 * t + 0.25 * kPi;
    const double sech = 1.0 / std::cosh(mu1 * ax);
    const double tanh = std::tanh(mu1 * ax);
    const Complex corr = q * w0 * std::sqrt(2.0 / (kPi * t)) *
                         (std::exp(I * Omega) * sech * sech -
                          std::exp(-I * Omega) * tanh * tanh);
    return sol_phase * (Complex{ground_state(x, mu1, q), 0.0} - corr);
  }
  const double z0 = ax / t;
  const Complex z0m{z0, -mu1};
  const Complex E0 = fresnel_E0();
  const Complex p1 = -(q / std::sqrt(t)) * K(z0) * E0 * std::exp(I * 0.5 * t * z0 * z0) /
                     (kPi * I * z0m);
  const Complex p2 = -(q / std::sqrt(t)) * K(z0) * std::conj(E0) *
                     std::exp(-I * 0.5 * t * z0 * z0) / (kPi * I * z0m);
  const Complex ups1 = -std::sqrt((mu1 - q) / (mu1 + q)) * sol_phase;
  const Complex u1x = ups1 * std::exp(-mu1 * ax);
  const Complex num = (u1x + p1) * (std::conj(p2) * std::conj(u1x) + 1.0);
  const double den = std::norm(u1x + p1) + std::norm(p2 * u1x + 1.0);
  return I * z0m * p1 - 2.0 * mu1 * num / den;
}

struct MuPerturbation {
  double mu1_est = 0.0;
  double mu2_est = 0.0;   // meaningful for q < 0 (two-zero case)
  double mu1_order = 0.0; // stated error order eps*q + eps^2
  double mu2_order = 0.0; // stated error order eps^2 q
};

// First-order perturbed zeros: mu_1 ~ mu_0 + eps w_1 with
// w_1 = int_R Re w(x) v_{mu_0}(x) dx and mu_2 ~ -q.
inline MuPerturbation mu_perturbation(const SampledField& w_plus, double mu0, double q,
                                      double eps) {
  const SpatialGrid& g = w_plus.grid;
  RVec f(g.n_points);
  for (int i = 0; i < g.n_points; ++i)
    f[i] = w_plus.values[i].real() * ground_state(g.x(i), mu0, q);
  const double w1 = 2.0 * trapezoid(f, g.h());
  MuPerturbation out;
  out.mu1_est = mu0 + eps * w1;
  out.mu2_est = -q;
  out.mu1_order = std::abs(eps * q) + eps * eps;
  out.mu2_order = eps * eps * std::abs(q);
  return out;
}

}  // namespace bnls
