// Domain types: uniform spatial grids, sampled complex fields, symmetric
// spectral grids and scattering data records.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "bnls/errors.hpp"
#include "bnls/types.hpp"

namespace bnls {

struct SpatialGrid {
  double x_min = 0.0;
  double x_max = 1.0;
  int n_points = 2;

  SpatialGrid() = default;
  SpatialGrid(double a, double b, int n) : x_min(a), x_max(b), n_points(n) {
    if (!(x_min < x_max) || n_points < 2)
      throw FormatError("invalid spatial grid");
  }

  double h() const { return (x_max - x_min) / (n_points - 1); }
  double x(int i) const { return x_min + h() * i; }

  // Index of the node at x = 0, or -1 if 0 is not a node (to 1e-12 of h).
  int zero_index() const {
    const double t = -x_min / h();
    const int i = static_cast<int>(std::lround(t));
    if (i < 0 || i >= n_points) return -1;
    return std::abs(t - i) < 1e-9 ? i : -1;
  }

  bool operator==(const SpatialGrid& o) const {
    return x_min == o.x_min && x_max == o.x_max && n_points == o.n_points;
  }
};

// Uniform symmetric grid [-L, L] with 2*n_half+1 nodes; node n_half sits at 0.
inline SpatialGrid symmetric_grid(double half_width, int n_half) {
  SpatialGrid g;
  g.x_min = -half_width;
  g.x_max = half_width;
  g.n_points = 2 * n_half + 1;
  return g;
}

// Half-line grid [0, L] with n nodes; first node at 0.
inline SpatialGrid half_line_grid(double length, int n) {
  SpatialGrid g;
  g.x_min = 0.0;
  g.x_max = length;
  g.n_points = n;
  return g;
}

struct SampledField {
  SpatialGrid grid;
  CVec values;

  SampledField() = default;
  SampledField(const SpatialGrid& g, CVec v) : grid(g), values(std::move(v)) {}
  explicit SampledField(const SpatialGrid& g) : grid(g), values(g.n_points, Complex{0.0}) {}

  static SampledField sample(const SpatialGrid& g, const std::function<Complex(double)>& f) {
    SampledField out(g);
    for (int i = 0; i < g.n_points; ++i) out.values[i] = f(g.x(i));
    return out;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
  }

  bool all_finite() const {
    for (const auto& v : values)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }
};

// Restriction of a field on a symmetric grid to x >= 0 (node at 0 included).
inline SampledField restrict_to_positive(const SampledField& u) {
  const int i0 = u.grid.zero_index();
  if (i0 < 0) throw FormatError("grid does not contain x = 0 as a node");
  SpatialGrid g = half_line_grid(u.grid.x_max, u.grid.n_points - i0);
  CVec v(u.values.begin() + i0, u.values.end());
  return {g, std::move(v)};
}

inline double evenness_defect(const SampledField& u) {
  const int i0 = u.grid.zero_index();
  if (i0 < 0) throw FormatError("grid does not contain x = 0 as a node");
  double d = 0.0;
  for (int k = 0; i0 - k >= 0 && i0 + k < u.grid.n_points; ++k)
    d = std::max(d, std::abs(u.values[i0 + k] - u.values[i0 - k]));
  return d;
}

// Real spectral grid, strictly increasing and exactly symmetric about 0.
struct SpectralGrid {
  RVec z;

  SpectralGrid() = default;
  explicit SpectralGrid(RVec zs) : z(std::move(zs)) {}

  // 2*n_half+1 nodes on [-z_max, z_max] with 0 included; the negative half is
  // the bitwise negation of the positive half.
  static SpectralGrid symmetric(double z_max, int n_half) {
    RVec zs(2 * n_half + 1);
    const double dz = z_max / n_half;
    zs[n_half] = 0.0;
    for (int k = 1; k <= n_half; ++k) {
      const double v = dz * k;
      zs[n_half + k] = v;
      zs[n_half - k] = -v;
    }
    return SpectralGrid{std::move(zs)};
  }

  std::size_t size() const { return z.size(); }
  double spacing() const { return z.size() > 1 ? z[1] - z[0] : 0.0; }

  // Index such that z[mirror(i)] == -z[i]; exact for grids built symmetric.
  std::size_t mirror(std::size_t i) const { return z.size() - 1 - i; }

  double symmetry_defect() const {
    double d = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) d = std::max(d, std::abs(z[i] + z[mirror(i)]));
    return d;
  }
};

// Linear interpolation of samples f on grid g at point s (clamped to range).
inline Complex interp_linear(const SpectralGrid& g, const CVec& f, double s) {
  const auto& z = g.z;
  if (s <= z.front()) return f.front();
  if (s >= z.back()) return f.back();
  const auto it = std::upper_bound(z.begin(), z.end(), s);
  const std::size_t j = static_cast<std::size_t>(it - z.begin());
  const double w = (s - z[j - 1]) / (z[j] - z[j - 1]);
  return f[j - 1] * (1.0 - w) + f[j] * w;
}

// Reflection/discrete data of a potential: r(z) samples on a symmetric grid,
// imaginary-axis zeros z_k = i mu_k (mu_1 > mu_2 > ...), norming constants
// gamma_k, the Backlund tail sign beta and the delta strength q.
struct ScatteringData {
  SpectralGrid grid;
  CVec r;
  RVec zeros;    // mu_k, descending
  CVec gammas;   // gamma(i mu_k)
  double beta = 0.0;
  double q = 0.0;

  Complex r_at(double s) const { return interp_linear(grid, r, s); }

  double r_sup() const {
    double m = 0.0;
    for (const auto& v : r) m = std::max(m, std::abs(v));
    return m;
  }
};

}  // namespace bnls
