// Reconstruction of u(x,t) from scattering data: exact reflectionless solves
// by iterated Darboux dressing of the vacuum, the small-reflection Born
// approximation of the pole-free RHP, pole re-dressing, and the end-to-end
// solution procedure for the even delta-potential IVP.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "bnls/backlund.hpp"
#include "bnls/darboux.hpp"
#include "bnls/errors.hpp"
#include "bnls/grid.hpp"
#include "bnls/parallel.hpp"
#include "bnls/quadrature.hpp"
#include "bnls/special.hpp"
#include "bnls/spectral_data.hpp"
#include "bnls/types.hpp"

namespace bnls {

inline double theta_phase(double x, double t, double s) { return x * s - 0.5 * t * s * s; }

struct OscOptions {
  double filon_threshold = 10.0;  // switch to stationary-point form beyond this t
};

// int g(s) e^{i(xs - t s^2/2)} ds over the grid. Plain trapezoid for small t;
// for large t the phase is factored through the stationary point z0 = x/t and
// each cell is integrated exactly against the quadratic phase with g linear
// (Fresnel-type antiderivatives), which keeps the cost O(N) at any t.
inline Complex oscillatory_integral(const SpectralGrid& g, const CVec& f, double x, double t,
                                    const OscOptions& opt = {}) {
  if (f.size() != g.size()) throw FormatError("oscillatory_integral: size mismatch");
  const std::size_t N = g.size();
  if (std::abs(t) <= opt.filon_threshold) {
    CVec w(N);
    for (std::size_t i = 0; i < N; ++i)
      w[i] = f[i] * std::exp(I * theta_phase(x, t, g.z[i]));
    return trapezoid(w, g.spacing());
  }
  const double z0 = x / t;
  const double rt = std::sqrt(t);
  auto Etail = [&](double s) { return fresnel_Eplus0(rt * (s - z0)) / rt; };
  auto Ephase = [&](double s) {
    const double d = s - z0;
    return std::exp(-I * 0.5 * t * d * d);
  };
  Complex sum{0.0, 0.0};
  const double h = g.spacing();
  Complex E_lo = Etail(g.z[0]);
  Complex P_lo = Ephase(g.z[0]);
  for (std::size_t i = 0; i + 1 < N; ++i) {
    const Complex E_hi = Etail(g.z[i + 1]);
    const Complex P_hi = Ephase(g.z[i + 1]);
    const Complex slope = (f[i + 1] - f[i]) / h;
    const Complex a0 = f[i] - slope * (g.z[i] - z0);
    sum += a0 * (E_lo - E_hi) + slope * (P_hi - P_lo) / (-I * t);
    E_lo = E_hi;
    P_lo = P_hi;
  }
  return sum * std::exp(I * 0.5 * t * z0 * z0);
}

struct BornResult {
  Complex u;
  std::function<Mat2(Complex)> m_at;  // z off the real axis
  bool regime_warning = false;        // ||r||_inf above the small-data bound
};

// Pole-free Born reconstruction: u(x,t) = (1/2pi) int r(s) e^{i theta} ds and
// m(x,t,z) = I + (1/2pi i) int [[0, r e^{i theta}],[conj r e^{-i theta},0]]/(s-z) ds.
inline BornResult born_reconstruct(const ScatteringData& data, double x, double t,
                                   const OscOptions& opt = {}) {
  BornResult out;
  out.regime_warning = data.r_sup() > 0.2;
  out.u = oscillatory_integral(data.grid, data.r, x, t, opt) / kTwoPi;
  const SpectralGrid grid = data.grid;
  const CVec r = data.r;
  out.m_at = [grid, r, x, t, opt](Complex z) -> Mat2 {
    CVec g1(r.size()), g2(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      g1[i] = r[i] / (grid.z[i] - z);
      g2[i] = r[i] / (grid.z[i] - std::conj(z));
    }
    const Complex J1 = oscillatory_integral(grid, g1, x, t, opt);
    const Complex J2 = std::conj(oscillatory_integral(grid, g2, x, t, opt));
    const Complex c = 1.0 / (Complex{0.0, kTwoPi});
    return {Complex{1.0, 0.0}, c * J1, c * J2, Complex{1.0, 0.0}};
  };
  return out;
}

struct ReflectionlessConfig {
  RVec mus;     // descending
  CVec gammas;  // norming constants at t = 0
};

struct ReflectionlessSolution {
  Complex u;
  std::function<Mat2(Complex)> m_eval;
};

// Exact reflectionless solution by an iterated Darboux chain on the vacuum.
// Couplings per step are c~_k = gamma_k(t) / a_k'(z_k) with a_k the partial
// Blaschke product over the poles inserted so far.
inline ReflectionlessSolution solve_reflectionless(const ReflectionlessConfig& cfg, double x,
                                                   double t) {
  const std::size_t n = cfg.mus.size();
  if (cfg.gammas.size() != n)
    throw SingularLinearSystem("reflectionless config: gamma/zero count mismatch");
  for (std::size_t k = 0; k < n; ++k) {
    if (!(cfg.mus[k] > 0.0)) throw SingularLinearSystem("mu_k must be positive");
    if (std::abs(cfg.gammas[k]) == 0.0) throw SingularLinearSystem("gamma_k must be nonzero");
    for (std::size_t j = k + 1; j < n; ++j)
      if (std::abs(cfg.mus[k] - cfg.mus[j]) < 1e-12)
        throw SingularLinearSystem("repeated pole in reflectionless config");
  }
  RVec mus = cfg.mus;
  CVec gammas = cfg.gammas;
  // process in decreasing Im
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mus[a] > mus[b]; });

  PsiPointEval psi = psi_vacuum();
  Complex u{0.0, 0.0};
  std::vector<Complex> inserted;
  for (std::size_t idx = 0; idx < n; ++idx) {
    const double mu = mus[order[idx]];
    const Complex zk{0.0, mu};
    const Complex gamma_t = gammas[order[idx]] * std::exp(-I * 0.5 * mu * mu * t);
    // a'(z_k) of the partial product including z_k
    Complex ap = 1.0 / (zk - std::conj(zk));
    for (const auto& zj : inserted) ap *= (zk - zj) / (zk - std::conj(zj));
    const Complex c_tilde = gamma_t / ap;
    const Mat2 base = psi(x, zk);
    const Vec2 b1 = base.col(0) - (c_tilde / (zk - std::conj(zk))) * base.col(1);
    u += I * (zk - std::conj(zk)) * ratio_functional(b1);
    psi = darboux_dressed_psi(psi, DarbouxStep{zk, c_tilde});
    inserted.push_back(zk);
  }
  ReflectionlessSolution out;
  out.u = u;
  out.m_eval = [psi, x](Complex z) -> Mat2 {
    const Mat2 p = psi(x, z);
    const Complex ph = std::exp(-I * x * z * 0.5);
    return Mat2::from_cols(p.col(0) * ph, p.col(1) * (1.0 / ph));
  };
  return out;
}

struct ReconstructOptions {
  OscOptions osc;
  double born_warn_threshold = 0.2;
};

struct ReconstructResult {
  Complex u;
  bool regime_warning = false;
};

// Full reconstruction at one (x,t): strip poles from r, Born-solve the
// pole-free RHP, then re-dress the poles with the Darboux chain
//   b_1 = m_f(z_1) e^{i x z_1 sigma} (1, -c_1(t)/(z_1 - conj z_1))^T,
//   b_2 = bhat_1 muhat bhat_1^{-1} m_f(z_2) e^{i x z_2 sigma} muhat^{-1} (...)^T,
//   u = u_f + sum_k i(z_k - conj z_k) F(b_k).
inline ReconstructResult reconstruct(const ScatteringData& data, double x, double t,
                                     const ReconstructOptions& opt = {}) {
  const std::size_t n = data.zeros.size();
  if (n > 2) throw UnsupportedSpectrum("reconstruct supports at most two zeros");
  if (data.gammas.size() != n)
    throw FormatError("reconstruct: zero/norming-constant count mismatch");

  // pole-free reflection r_f = r prod (z - conj z_k)/(z - z_k)
  ScatteringData pf = data;
  for (std::size_t i = 0; i < pf.grid.size(); ++i) {
    Complex m{1.0, 0.0};
    const Complex z{pf.grid.z[i], 0.0};
    for (double mu : data.zeros) m *= (z + Complex{0.0, mu}) / (z - Complex{0.0, mu});
    pf.r[i] = data.r[i] * m;
  }
  pf.zeros.clear();
  pf.gammas.clear();

  const BornResult born = born_reconstruct(pf, x, t, opt.osc);
  ReconstructResult out;
  out.regime_warning = born.regime_warning;
  Complex u = born.u;
  if (n == 0) {
    out.u = u;
    return out;
  }

  const Complex z1{0.0, data.zeros[0]};
  const Complex lz1 = l_transform(pf, z1);
  const Complex gamma1_t =
      data.gammas[0] * std::exp(-I * 0.5 * data.zeros[0] * data.zeros[0] * t);

  auto phase_cols = [&](const Mat2& m, Complex z) -> Mat2 {
    const Complex ph = std::exp(I * x * z * 0.5);
    return Mat2::from_cols(m.col(0) * ph, m.col(1) * (1.0 / ph));
  };

  // a_1(z) = (z - z_1)/(z - conj z_1) e^{-l(z)}; c_1 = gamma_1(t)/a_1'(z_1)
  const Complex a1p = std::exp(-lz1) / (z1 - std::conj(z1));
  const Complex c1 = gamma1_t / a1p;
  const Mat2 mf1 = phase_cols(born.m_at(z1), z1);
  const Vec2 b1 = mf1.col(0) - (c1 / (z1 - std::conj(z1))) * mf1.col(1);
  u += I * (z1 - std::conj(z1)) * ratio_functional(b1);

  if (n == 2) {
    const Complex z2{0.0, data.zeros[1]};
    const Complex lz2 = l_transform(pf, z2);
    const Complex gamma2_t =
        data.gammas[1] * std::exp(-I * 0.5 * data.zeros[1] * data.zeros[1] * t);
    // a(z) = (z - z_2)/(z - conj z_2) a_1(z); a'(z_2) = a_1(z_2)/(z_2 - conj z_2)
    const Complex a1_at_z2 = (z2 - z1) / (z2 - std::conj(z1)) * std::exp(-lz2);
    const Complex ap2 = a1_at_z2 / (z2 - std::conj(z2));
    const Complex c2 = gamma2_t / ap2;
    const Mat2 bhat1 = Mat2::from_cols(b1, symplectic_partner(b1));
    const Mat2 muhat = Mat2::diag(z2 - z1, z2 - std::conj(z1));
    const Mat2 psi1_at_z2 =
        bhat1 * muhat * bhat1.inverse() * phase_cols(born.m_at(z2), z2) * muhat.inverse();
    const Vec2 b2 = psi1_at_z2.col(0) - (c2 / (z2 - std::conj(z2))) * psi1_at_z2.col(1);
    u += I * (z2 - std::conj(z2)) * ratio_functional(b2);
  }
  out.u = u;
  return out;
}

struct SolveIvpOptions {
  ExtensionOptions extension;
  ReconstructOptions reconstruct;
  SpectralGrid spectral_grid = SpectralGrid::symmetric(8.0, 160);
  double even_tol = 1e-10;
  int nthreads = 0;
};

struct SolveIvpResult {
  std::vector<SampledField> snapshots;
  ExtensionSpectrum spectrum;
  SampledField extension;  // Backlund extension of u0|_{x>=0}
  bool regime_warning = false;
};

// Solution procedure for the even delta-potential IVP: extend the half-line
// restriction, compute its scattering data once, evolve and reconstruct at
// every requested time, and reflect evenly.
inline SolveIvpResult solve_ivp(const SampledField& u0, double q, const RVec& times,
                                const SolveIvpOptions& opt = {}) {
  if (evenness_defect(u0) > opt.even_tol)
    throw NotEven("solve_ivp: initial data is not even");
  const SampledField u_plus = restrict_to_positive(u0);

  SolveIvpResult out;
  out.extension = backlund_extend(u_plus, q, opt.extension.jost);
  out.spectrum = extension_scattering(u_plus, q, opt.spectral_grid, opt.extension);

  const int n_half = u_plus.grid.n_points;
  const int i0 = u0.grid.zero_index();
  bool warn = false;
  for (double t : times) {
    SampledField snap(u0.grid);
    CVec half(n_half);
    std::vector<char> warns(n_half, 0);
    parallel_for(
        static_cast<std::size_t>(n_half),
        [&](std::size_t i) {
          const double x = u_plus.grid.x(static_cast<int>(i));
          const ReconstructResult rr = reconstruct(out.spectrum.base, x, t, opt.reconstruct);
          half[i] = rr.u;
          warns[i] = rr.regime_warning ? 1 : 0;
        },
        opt.nthreads);
    for (int i = 0; i < n_half; ++i) {
      snap.values[i0 + i] = half[i];
      snap.values[i0 - i] = half[i];
      if (warns[i]) warn = true;
    }
    out.snapshots.push_back(std::move(snap));
  }
  out.regime_warning = warn;
  return out;
}

}  // namespace bnls
