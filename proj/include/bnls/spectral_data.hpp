// Closed-form scattering data of the Backlund extension from half-line Jost
// boundary values (A,B)(z) = g(0,z), plus the time evolution of scattering
// data and symmetry diagnostics.
//
//   beta = q   if (q>0 and B(iq)=0) or (q<0 and A(-iq)!=0)
//        = -q  otherwise,
//   a(z) = [(z-iq) A(z) conj(A(-conj z)) - (z+iq) B(z) conj(B(-conj z))]/(z-i beta),
//   b(z) = [(z+iq) A(-z) B(z) + (z-iq) A(z) B(-z)]/(z+i beta),  z real,
//   gamma(z_k) = (z_k-i beta)/(z_k+iq) * A(z_k)/conj(B(-conj z_k))   if A(z_k)!=0
//              = (z_k-i beta)/(z_k-iq) * B(z_k)/conj(A(-conj z_k))   otherwise.
// When beta = |q| the apparent pole of a(z) at z = i beta is removable and the
// rearranged expressions are used instead.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "bnls/errors.hpp"
#include "bnls/grid.hpp"
#include "bnls/parallel.hpp"
#include "bnls/quadrature.hpp"
#include "bnls/types.hpp"
#include "bnls/zs.hpp"

namespace bnls {

struct ExtensionSpectrum {
  ScatteringData base;
  CVec A, B;             // half-line Jost boundary values on base.grid
  AEvaluator a_of;       // a(z) for Im z >= 0, closed form
  bool branch_ambiguous = false;   // |B(iq)| (or |A(-iq)|) below the flag level
  bool degenerate_dichotomy = false;  // |mu_2 - |q|| below the warning level
  bool unstable_norming = false;   // both gamma denominators tiny at some zero
};

struct ExtensionOptions {
  JostOptions jost;
  ZeroScanOptions zeros;
  double a_min = 1e-6;             // real-axis zero guard for r
  double branch_exact_eps = 1e-8;  // treat B(iq) (A(-iq)) as exactly zero below
  double branch_flag_eps = 1e-5;   // flag near-degenerate branch below
  double gamma_branch_eps = 1e-8;  // A(z_k) != 0 branch threshold
  double mu_max = 0.0;             // 0 -> automatic from the data
  int nthreads = 0;
  int winding_decimate = 4;        // coarser potential for the winding stage
};

namespace detail {

struct ABPair {
  Complex A, Ambar;  // A(z), conj(A(-conj z))
  Complex B, Bmbar;
};

inline ABPair ab_pair(const SampledField& u_plus, Complex z, const JostOptions& opt) {
  ABPair p;
  const Vec2 g1 = halfline_AB(u_plus, z, opt);
  p.A = g1.a;
  p.B = g1.b;
  const Complex zm = -std::conj(z);
  if (std::abs(zm - z) < 1e-15 * (1.0 + std::abs(z))) {
    p.Ambar = std::conj(p.A);
    p.Bmbar = std::conj(p.B);
  } else {
    const Vec2 g2 = halfline_AB(u_plus, zm, opt);
    p.Ambar = std::conj(g2.a);
    p.Bmbar = std::conj(g2.b);
  }
  return p;
}

// a(z) from an (A,B) pair; uses the rearranged removable form when beta = |q|.
inline Complex a_from_AB(const ABPair& p, Complex z, double q, double beta) {
  const Complex iq{0.0, q};
  if (beta == std::abs(q) && q != 0.0) {
    if (q > 0.0)  // B(iq) = 0 branch
      return p.A * p.Ambar - (z + iq) / (z - iq) * p.B * p.Bmbar;
    return (z - iq) / (z + iq) * p.A * p.Ambar - p.B * p.Bmbar;
  }
  return ((z - iq) * p.A * p.Ambar - (z + iq) * p.B * p.Bmbar) / (z - Complex{0.0, beta});
}

inline SampledField decimate(const SampledField& u, int stride) {
  if (stride <= 1) return u;
  const int n = (u.grid.n_points - 1) / stride + 1;
  SpatialGrid g(u.grid.x_min, u.grid.x(static_cast<int>((n - 1) * stride)), n);
  CVec v(n);
  for (int i = 0; i < n; ++i) v[i] = u.values[i * stride];
  return {g, std::move(v)};
}

// a-evaluator with the removable point z = i beta handled: when beta = |q|
// the raw quotient is 0/0 there, so values within eps of it are replaced by
// the symmetric 4-point average of nearby regular evaluations. The RK4
// substep count scales with |z| h so the e^{-izx} kernel stays resolved on
// large winding contours.
inline AEvaluator make_a_evaluator(SampledField u_plus, double q, double beta,
                                   JostOptions jopt) {
  const double h = u_plus.grid.h();
  return [u_plus, q, beta, jopt, h](Complex z) -> Complex {
    JostOptions jz = jopt;
    jz.refine = std::max(jopt.refine, static_cast<int>(std::abs(z) * h / 0.4) + 1);
    auto eval = [&](Complex zz) {
      return a_from_AB(ab_pair(u_plus, zz, jz), zz, q, beta);
    };
    if (beta == std::abs(q) && q != 0.0) {
      const Complex zb{0.0, beta};
      if (std::abs(z - zb) < 1e-6) {
        const double d = 1e-3;
        return 0.25 * (eval(z + d) + eval(z - d) + eval(z + I * d) + eval(z - I * d));
      }
    }
    return eval(z);
  };
}

}  // namespace detail

inline ExtensionSpectrum extension_scattering(const SampledField& u_plus, double q,
                                              const SpectralGrid& grid,
                                              const ExtensionOptions& opt = {}) {
  if (u_plus.grid.zero_index() != 0)
    throw FormatError("extension_scattering: first node must be x = 0");
  if (q == 0.0) throw ConfigError("extension_scattering: q must be nonzero");

  ExtensionSpectrum out;
  out.base.grid = grid;
  out.base.q = q;

  // branch value at z = i|q|
  double beta;
  {
    const Complex ziq{0.0, std::abs(q)};
    const Vec2 g = halfline_AB(u_plus, ziq, opt.jost);
    const Complex probe = q > 0.0 ? g.b : g.a;
    const double mag = std::abs(probe);
    if (mag <= opt.branch_exact_eps) {
      beta = q > 0.0 ? q : -q;  // B(iq)=0 -> beta=q; A(-iq)=0 -> beta=-q
    } else {
      beta = q > 0.0 ? -q : q;  // generic branch
      if (mag < opt.branch_flag_eps) out.branch_ambiguous = true;
    }
  }
  out.base.beta = beta;

  // (A,B) samples over the real grid
  const std::size_t N = grid.size();
  out.A.resize(N);
  out.B.resize(N);
  parallel_for(
      N,
      [&](std::size_t i) {
        const Vec2 g = halfline_AB(u_plus, Complex{grid.z[i], 0.0}, opt.jost);
        out.A[i] = g.a;
        out.B[i] = g.b;
      },
      opt.nthreads);

  // a and b on the real grid from the sampled pairs, r = conj(b)/conj(a)
  out.base.r.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    const std::size_t im = grid.mirror(i);
    detail::ABPair p{out.A[i], std::conj(out.A[im]), out.B[i], std::conj(out.B[im])};
    const Complex z{grid.z[i], 0.0};
    const Complex a = detail::a_from_AB(p, z, q, beta);
    if (std::abs(a) < opt.a_min)
      throw RealAxisZero("extension a(z) vanishes near z = " + fmt_double(grid.z[i]));
    const Complex b = ((z + Complex{0.0, q}) * out.A[im] * out.B[i] +
                       (z - Complex{0.0, q}) * out.A[i] * out.B[im]) /
                      (z + Complex{0.0, beta});
    out.base.r[i] = std::conj(b) / std::conj(a);
  }

  // evaluator for Im z >= 0 (two half-line solves per call)
  const JostOptions jopt = opt.jost;
  out.a_of = detail::make_a_evaluator(u_plus, q, beta, jopt);

  // zeros on the positive imaginary axis
  double mu_max = opt.mu_max;
  if (mu_max <= 0.0) {
    // trace bound: sum of mu_k <= 1/2 int |u^e|^2 ~ int_0^inf |u_plus|^2
    RVec absu2(u_plus.values.size());
    for (std::size_t i = 0; i < absu2.size(); ++i) absu2[i] = std::norm(u_plus.values[i]);
    const double mass = trapezoid(absu2, u_plus.grid.h());
    mu_max = 2.0 * std::max(mass, std::abs(q)) + 1.0;
  }
  const SampledField u_coarse = detail::decimate(u_plus, opt.winding_decimate);
  AEvaluator a_coarse = detail::make_a_evaluator(u_coarse, q, beta, jopt);
  ZeroScanOptions zopt = opt.zeros;
  zopt.nthreads = opt.nthreads;
  const std::vector<ImagZero> zs = find_imaginary_zeros(out.a_of, mu_max, zopt, a_coarse);

  for (const auto& zk : zs) {
    out.base.zeros.push_back(zk.mu);
    if (std::abs(zk.mu - std::abs(q)) < zopt.dichotomy_eps) out.degenerate_dichotomy = true;
    const Complex z{0.0, zk.mu};
    const detail::ABPair p = detail::ab_pair(u_plus, z, opt.jost);
    const Complex num1 = (z - Complex{0.0, beta}) / (z + Complex{0.0, q});
    const Complex num2 = (z - Complex{0.0, beta}) / (z - Complex{0.0, q});
    const bool a_ok = std::abs(p.A) > opt.gamma_branch_eps && std::abs(p.Bmbar) > opt.gamma_branch_eps;
    const bool b_ok = std::abs(p.B) > opt.gamma_branch_eps && std::abs(p.Ambar) > opt.gamma_branch_eps;
    Complex gamma;
    if (a_ok && b_ok) {
      const Complex g1 = num1 * p.A / p.Bmbar;
      const Complex g2 = num2 * p.B / p.Ambar;
      gamma = std::abs(g1 - g2) < 1e-6 * (1.0 + std::abs(g1)) ? 0.5 * (g1 + g2) : g1;
    } else if (a_ok) {
      gamma = num1 * p.A / p.Bmbar;
    } else if (b_ok) {
      gamma = num2 * p.B / p.Ambar;
    } else {
      out.unstable_norming = true;
      gamma = num1 * p.A / p.Bmbar;
    }
    out.base.gammas.push_back(gamma);
  }
  return out;
}

// r(z,t) = r(z) e^{-i z^2 t/2}; zeros fixed; gamma_k(t) = gamma_k e^{i z_k^2 t/2}.
inline ScatteringData evolve_data(const ScatteringData& d, double t) {
  if (d.gammas.size() != d.zeros.size())
    throw FormatError("evolve_data: zero/norming-constant count mismatch");
  ScatteringData out = d;
  for (std::size_t i = 0; i < d.grid.size(); ++i) {
    const double z = d.grid.z[i];
    out.r[i] = d.r[i] * std::exp(-I * 0.5 * z * z * t);
  }
  for (std::size_t k = 0; k < d.zeros.size(); ++k)
    out.gammas[k] = d.gammas[k] * std::exp(-I * 0.5 * d.zeros[k] * d.zeros[k] * t);
  return out;
}

// l(z) = (1/2pi i) int log(1+|r|^2)/(s-z) ds for Im z > 0. The density is a
// log of a near-unit quantity, so the tail guard is relative to it and looser
// than the raw-field default; l only enters through exp(-l).
inline Complex l_transform(const ScatteringData& d, Complex z,
                           double tail_rel_threshold = 1e-4) {
  CVec L(d.grid.size());
  for (std::size_t i = 0; i < L.size(); ++i) L[i] = std::log1p(std::norm(d.r[i]));
  CauchyOptions opt;
  opt.tail_rel_threshold = tail_rel_threshold;
  opt.tail_abs_floor = 1e-12;
  return cauchy_integral(d.grid, L, z, opt);
}

// a(z) rebuilt from (r, zeros) by the Blaschke product x exp(-l(z)) formula.
// For real z the (+)-boundary value of l is used.
inline Complex a_reconstructed(const ScatteringData& d, Complex z) {
  Complex blaschke{1.0, 0.0};
  for (double mu : d.zeros) blaschke *= (z - Complex{0.0, mu}) / (z + Complex{0.0, mu});
  Complex l;
  if (std::abs(z.imag()) < 1e-12) {
    RVec L(d.grid.size());
    for (std::size_t i = 0; i < L.size(); ++i) L[i] = std::log1p(std::norm(d.r[i]));
    l = cauchy_boundary_plus(d.grid, L, z.real());
  } else {
    l = l_transform(d, z);
  }
  return blaschke * std::exp(-l);
}

struct SymmetryDeviations {
  double a_sym = 0.0;
  double b_sym = 0.0;
  double gamma_sym = 0.0;
};

// Sup-norm deviations of the q-symmetry identities
//   conj(a(-conj z)) = a(z),  b(-z) = b(z)(z+i beta)/(z-i beta),
//   |gamma(i mu_k)|^2 = (mu_k - beta)/(mu_k + beta),
// with a from the reconstruction formula and b = a conj(r).
inline SymmetryDeviations symmetry_report(const ScatteringData& d) {
  SymmetryDeviations dev;
  const std::size_t N = d.grid.size();
  CVec a(N, Complex{1.0, 0.0}), b(N, Complex{0.0, 0.0});
  // endpoint nodes are excluded: the boundary Cauchy transform needs an
  // interior point, and r vanishes there anyway
  for (std::size_t i = 1; i + 1 < N; ++i) {
    a[i] = a_reconstructed(d, Complex{d.grid.z[i], 0.0});
    b[i] = a[i] * std::conj(d.r[i]);
  }
  for (std::size_t i = 1; i + 1 < N; ++i) {
    const std::size_t im = d.grid.mirror(i);
    dev.a_sym = std::max(dev.a_sym, std::abs(std::conj(a[im]) - a[i]));
    const Complex z{d.grid.z[i], 0.0};
    const Complex rhs = b[i] * (z + Complex{0.0, d.beta}) / (z - Complex{0.0, d.beta});
    dev.b_sym = std::max(dev.b_sym, std::abs(b[im] - rhs));
  }
  for (std::size_t k = 0; k < d.zeros.size(); ++k) {
    const double rhs = (d.zeros[k] - d.beta) / (d.zeros[k] + d.beta);
    dev.gamma_sym = std::max(dev.gamma_sym, std::abs(std::norm(d.gammas[k]) - rhs));
  }
  return dev;
}

}  // namespace bnls
