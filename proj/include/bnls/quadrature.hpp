// Composite trapezoid quadrature on uniform grids, the off-axis Cauchy
// transform (1/2pi i) int f(s)/(s-z) ds and its (+)-boundary value on the
// axis via principal value + half residue.
#pragma once

#include <cmath>
#include <cstdlib>

#include "bnls/errors.hpp"
#include "bnls/grid.hpp"
#include "bnls/types.hpp"

namespace bnls {

inline constexpr double kTwoPi = 6.283185307179586476925;
inline constexpr double kPi = 3.141592653589793238463;

template <typename T>
inline T trapezoid(const std::vector<T>& f, double h) {
  if (f.size() < 2) return T{};
  T s = (f.front() + f.back()) * 0.5;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * h;
}

inline double max_abs(const CVec& f) {
  double m = 0.0;
  for (const auto& v : f) m = std::max(m, std::abs(v));
  return m;
}

struct CauchyOptions {
  double tail_rel_threshold = 1e-8;  // endpoint magnitude guard, relative
  double tail_abs_floor = 0.0;       // endpoints below this never trip the guard
  double axis_eps = 1e-12;           // |Im z| below this counts as on-axis
};

// (1/2pi i) int_grid f(s)/(s-z) ds for z off the real axis. The integrand is
// treated as compactly supported on the grid; a loud guard replaces decay
// assumptions.
inline Complex cauchy_integral(const SpectralGrid& g, const CVec& f, Complex z,
                               const CauchyOptions& opt = {}) {
  if (f.size() != g.size()) throw FormatError("cauchy_integral: size mismatch");
  if (std::abs(z.imag()) < opt.axis_eps)
    throw NonRealGrid("cauchy_integral: z too close to the real axis");
  const double scale = max_abs(f);
  if (scale > 0.0) {
    const double tail = std::max(std::abs(f.front()), std::abs(f.back()));
    if (tail > opt.tail_rel_threshold * scale && tail > opt.tail_abs_floor)
      throw TailTooLarge("cauchy_integral: integrand does not vanish at grid ends");
  }
  CVec g2(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) g2[i] = f[i] / (g.z[i] - z);
  return trapezoid(g2, g.spacing()) / (Complex{0.0, kTwoPi});
}

// Boundary value from the upper half plane of the Cauchy transform of a
// real-valued density L at a real point zr inside the grid:
//   l+(zr) = (1/2pi i) PV int L(s)/(s-zr) ds + L(zr)/2.
// The PV is regularized by subtracting L(zr) and adding the closed-form
// PV of the constant over the finite interval.
inline Complex cauchy_boundary_plus(const SpectralGrid& g, const RVec& L, double zr) {
  if (L.size() != g.size()) throw FormatError("cauchy_boundary_plus: size mismatch");
  const double a = g.z.front();
  const double b = g.z.back();
  if (!(zr > a && zr < b)) throw FormatError("cauchy_boundary_plus: point outside grid");
  const double h = g.spacing();
  double Lz;
  {
    // linear interpolation of the real density
    CVec tmp(L.size());
    for (std::size_t i = 0; i < L.size(); ++i) tmp[i] = L[i];
    Lz = interp_linear(g, tmp, zr).real();
  }
  RVec reg(L.size());
  for (std::size_t i = 0; i < L.size(); ++i) {
    const double d = g.z[i] - zr;
    if (std::abs(d) < 0.5 * h) {
      // removable point: slope of L by central difference
      const std::size_t j = (i == 0) ? 1 : (i + 1 == L.size() ? L.size() - 2 : i);
      reg[i] = (L[j + 1] - L[j - 1]) / (2.0 * h);
    } else {
      reg[i] = (L[i] - Lz) / d;
    }
  }
  const double pv = trapezoid(reg, h) + Lz * std::log((b - zr) / (zr - a));
  return Complex{pv, 0.0} / Complex{0.0, kTwoPi} + Complex{0.5 * Lz, 0.0};
}

}  // namespace bnls
