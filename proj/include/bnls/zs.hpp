// Direct scattering for the ZS-AKNS system psi_x = (i z sigma + Q) psi,
// sigma = sigma_3/2, Q = [[0,u],[-conj(u),0]].
//
// The Jost columns are integrated in phase-factored form, which keeps every
// kernel bounded for Im z >= 0:
//   m1p = psi_1^+ e^{-ixz/2}:  m' = [[0,u],[-conj(u),-iz]] m,  m(+inf) = e1
//   m2m = psi_2^- e^{+ixz/2}:  m' = [[iz,u],[-conj(u),0]]  m,  m(-inf) = e2
// Then a(z) = det(psi_1^+, psi_2^-) = m1p_1 m2m_2 - m1p_2 m2m_1 at any common
// node, and for real z, b(z) = det(psi_1^-, psi_1^+) = <psi_2^-, psi_1^+>
// evaluated at x = 0 via the sigma_2 symmetry.
#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "bnls/errors.hpp"
#include "bnls/grid.hpp"
#include "bnls/parallel.hpp"
#include "bnls/quadrature.hpp"
#include "bnls/types.hpp"

namespace bnls {

struct JostOptions {
  int refine = 2;                 // internal RK4 substeps per grid cell
  double tail_rel_threshold = 1e-8;
  double stiffness_cap = 700.0;   // Im z * domain width guard
};

namespace detail {

// Cubic Lagrange interpolation of grid samples at x = grid.x(i) + s*h with
// s in [0,1]; falls back to linear in the first/last cell.
class FieldInterp {
 public:
  explicit FieldInterp(const SampledField& u) : u_(&u) {}

  Complex at_cell(int i, double s) const {
    const CVec& v = u_->values;
    const int n = static_cast<int>(v.size());
    if (s <= 0.0) return v[i];
    if (s >= 1.0) return v[i + 1];
    if (n < 4) return v[i] * (1.0 - s) + v[i + 1] * s;
    // 4-point Lagrange stencil, shifted one-sided at the boundary cells
    const int j = std::max(0, std::min(i - 1, n - 4));
    const double t = s + (i - j);
    const double w0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
    const double w1 = t * (t - 2.0) * (t - 3.0) / 2.0;
    const double w2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
    const double w3 = t * (t - 1.0) * (t - 2.0) / 6.0;
    return v[j] * w0 + v[j + 1] * w1 + v[j + 2] * w2 + v[j + 3] * w3;
  }

 private:
  const SampledField* u_;
};

// One RK4 step of m' = A(x) m. The cell-fraction step s_step is signed and
// the physical step is s_step * h; the rhs is sampled at cell fractions.
template <typename SysFn>
inline Vec2 rk4_step(const SysFn& rhs, const Vec2& m, int cell, double s0, double s_step,
                     double h) {
  const double dx = s_step * h;
  const Vec2 k1 = rhs(cell, s0, m);
  const Vec2 k2 = rhs(cell, s0 + 0.5 * s_step, m + k1 * (0.5 * dx));
  const Vec2 k3 = rhs(cell, s0 + 0.5 * s_step, m + k2 * (0.5 * dx));
  const Vec2 k4 = rhs(cell, s0 + s_step, m + k3 * dx);
  return m + (k1 + (k2 + k3) * 2.0 + k4) * (dx / 6.0);
}

}  // namespace detail

// psi_1^+ column in factored form on the whole grid (index i -> node i).
// Integrates from x_max down to x_min. For a half-line grid starting at 0
// the value at node 0 is g(0,z) = (A(z), B(z)).
inline std::vector<Vec2> jost_m1p_trajectory(const SampledField& u, Complex z,
                                             const JostOptions& opt = {}) {
  const SpatialGrid& g = u.grid;
  const double h = g.h();
  if (z.imag() < -1e-12)
    throw StiffnessError("jost m1p requires Im z >= 0");
  if (z.imag() * 0.5 * (g.x_max - g.x_min) > opt.stiffness_cap)
    throw StiffnessError("Im z too large for the domain half-width");
  const double scale = u.max_abs();
  if (scale > 0.0 && std::abs(u.values.back()) > opt.tail_rel_threshold * scale)
    throw TailTooLarge("potential does not vanish at the +inf end");
  detail::FieldInterp interp(u);
  const Complex miz = -I * z;
  auto rhs = [&](int cell, double s, const Vec2& m) -> Vec2 {
    const Complex uu = interp.at_cell(cell, s);
    return {uu * m.b, -std::conj(uu) * m.a + miz * m.b};
  };
  std::vector<Vec2> out(g.n_points);
  Vec2 m{1.0, 0.0};
  out[g.n_points - 1] = m;
  const double ds = 1.0 / opt.refine;
  for (int i = g.n_points - 2; i >= 0; --i) {
    for (int k = opt.refine - 1; k >= 0; --k)
      m = detail::rk4_step(rhs, m, i, (k + 1) * ds, -ds, h);
    out[i] = m;
  }
  return out;
}

// psi_2^- column in factored form; integrates from x_min upward.
inline std::vector<Vec2> jost_m2m_trajectory(const SampledField& u, Complex z,
                                             const JostOptions& opt = {}) {
  const SpatialGrid& g = u.grid;
  const double h = g.h();
  if (z.imag() < -1e-12)
    throw StiffnessError("jost m2m requires Im z >= 0");
  if (z.imag() * 0.5 * (g.x_max - g.x_min) > opt.stiffness_cap)
    throw StiffnessError("Im z too large for the domain half-width");
  {
    const double scale = u.max_abs();
    if (scale > 0.0 && std::abs(u.values.front()) > opt.tail_rel_threshold * scale)
      throw TailTooLarge("potential does not vanish at the -inf end");
  }
  detail::FieldInterp interp(u);
  const Complex iz = I * z;
  auto rhs = [&](int cell, double s, const Vec2& m) -> Vec2 {
    const Complex uu = interp.at_cell(cell, s);
    return {iz * m.a + uu * m.b, -std::conj(uu) * m.a};
  };
  std::vector<Vec2> out(g.n_points);
  Vec2 m{0.0, 1.0};
  out[0] = m;
  const double ds = 1.0 / opt.refine;
  for (int i = 0; i + 1 < g.n_points; ++i) {
    for (int k = 0; k < opt.refine; ++k)
      m = detail::rk4_step(rhs, m, i, k * ds, ds, h);
    out[i + 1] = m;
  }
  return out;
}

struct JostValue {
  Complex z;
  Vec2 m1_plus;   // m1p at the evaluation node
  Vec2 m2_minus;  // m2m at the evaluation node
  Complex a;
  Complex b;          // only meaningful for real z
  bool b_valid = false;
};

inline Complex det_a(const Vec2& m1p, const Vec2& m2m) {
  return m1p.a * m2m.b - m1p.b * m2m.a;
}

// Full-line Jost data at x0 (default 0). For real z also returns b(z).
inline JostValue jost_solve(const SampledField& u, Complex z, double x0 = 0.0,
                            const JostOptions& opt = {}) {
  const auto m1 = jost_m1p_trajectory(u, z, opt);
  const auto m2 = jost_m2m_trajectory(u, z, opt);
  const double h = u.grid.h();
  int i0 = static_cast<int>(std::lround((x0 - u.grid.x_min) / h));
  i0 = std::max(0, std::min(u.grid.n_points - 1, i0));
  JostValue out;
  out.z = z;
  out.m1_plus = m1[i0];
  out.m2_minus = m2[i0];
  out.a = det_a(m1[i0], m2[i0]);
  if (std::abs(z.imag()) < 1e-12) {
    // b = det(psi_1^-, psi_1^+) at x=0; psi_1^- = J conj(psi_2^-) for real z
    const int iz = u.grid.zero_index() >= 0 ? u.grid.zero_index() : i0;
    out.b = std::conj(m2[iz].a) * m1[iz].a + std::conj(m2[iz].b) * m1[iz].b;
    out.b_valid = true;
  }
  return out;
}

// Half-line boundary values (A,B) = g(0,z) for u given on [0, x_max].
inline Vec2 halfline_AB(const SampledField& u_plus, Complex z, const JostOptions& opt = {}) {
  return jost_m1p_trajectory(u_plus, z, opt).front();
}

struct ScanOptions {
  JostOptions jost;
  double a_min = 1e-6;
  int nthreads = 0;
};

// Reflection coefficient r = conj(b)/conj(a) on the spectral grid.
inline ScatteringData scan_spectrum(const SampledField& u, const SpectralGrid& grid,
                                    const ScanOptions& opt = {}) {
  ScatteringData d;
  d.grid = grid;
  d.r.resize(grid.size());
  std::vector<double> amag(grid.size());
  parallel_for(
      grid.size(),
      [&](std::size_t i) {
        const JostValue jv = jost_solve(u, Complex{grid.z[i], 0.0}, 0.0, opt.jost);
        amag[i] = std::abs(jv.a);
        d.r[i] = std::conj(jv.b) / std::conj(jv.a);
      },
      opt.nthreads);
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (amag[i] < opt.a_min)
      throw RealAxisZero("a(z) vanishes on the real axis near z = " + fmt_double(grid.z[i]));
  return d;
}

struct ImagZero {
  double mu;
  Complex a_prime;
};

struct ZeroScanOptions {
  int scan_points = 2048;
  double secant_tol = 1e-10;
  double deriv_tol = 1e-8;
  double dichotomy_eps = 1e-4;  // |mu_2 - |q|| closer than this is flagged
  // winding-number validation contour [-Z,Z] x [delta,Z], Z = contour_factor*mu_max
  double contour_factor = 10.0;
  double contour_delta = 1e-3;
  int contour_points = 8192;
  bool validate_winding = true;
  int nthreads = 0;
};

using AEvaluator = std::function<Complex(Complex)>;

namespace detail {

// Net change of arg f/2pi along a polyline of sample values.
inline double winding_of_samples(const CVec& vals) {
  double total = 0.0;
  for (std::size_t i = 1; i < vals.size(); ++i) {
    const Complex q = vals[i] / vals[i - 1];
    total += std::arg(q);
  }
  return total / kTwoPi;
}

}  // namespace detail

inline int winding_number(const AEvaluator& a_fn, double mu_max, const ZeroScanOptions& opt) {
  const double Z = opt.contour_factor * mu_max;
  const double d = opt.contour_delta;
  // distribute nodes over four edges proportionally to length
  const double len_b = 2.0 * Z, len_s = Z - d;
  const double total = len_b * 2.0 + len_s * 2.0;
  const int nb = std::max(16, static_cast<int>(opt.contour_points * len_b / total));
  const int ns = std::max(8, static_cast<int>(opt.contour_points * len_s / total));
  std::vector<Complex> pts;
  pts.reserve(2 * nb + 2 * ns + 1);
  for (int i = 0; i <= nb; ++i) pts.emplace_back(-Z + len_b * i / nb, d);
  for (int i = 1; i <= ns; ++i) pts.emplace_back(Z, d + len_s * i / ns);
  for (int i = 1; i <= nb; ++i) pts.emplace_back(Z - len_b * i / nb, Z);
  for (int i = 1; i <= ns; ++i) pts.emplace_back(-Z, Z - len_s * i / ns);
  pts.back() = pts.front();  // close the loop exactly
  CVec vals(pts.size());
  parallel_for(
      pts.size(), [&](std::size_t i) { vals[i] = a_fn(pts[i]); }, opt.nthreads);
  const double w = detail::winding_of_samples(vals);
  return static_cast<int>(std::lround(w));
}

// Locate the zeros of a(z) on the positive imaginary axis. For the data class
// treated here a(i mu) is real up to numerical noise, so sign changes of the
// real part are scanned and refined by secant iteration; the count is checked
// against the argument principle on a large rectangle.
inline std::vector<ImagZero> find_imaginary_zeros(const AEvaluator& a_fn, double mu_max,
                                                  const ZeroScanOptions& opt = {},
                                                  const AEvaluator& a_fn_coarse = {}) {
  const int n = opt.scan_points;
  std::vector<Complex> vals(n + 1);
  parallel_for(
      n, [&](std::size_t j) { vals[j + 1] = a_fn(Complex{0.0, mu_max * (double(j) + 1.0) / n}); },
      opt.nthreads);
  vals[0] = vals[1];  // mu -> 0+ endpoint, only used for sign continuity

  std::vector<double> roots;
  for (int j = 1; j < n; ++j) {
    const double f0 = vals[j].real(), f1 = vals[j + 1].real();
    if (f0 == 0.0) {
      roots.push_back(mu_max * j / n);
      continue;
    }
    if (f0 * f1 < 0.0) {
      // secant refinement on Re a(i mu)
      double m0 = mu_max * static_cast<double>(j) / n;
      double m1 = mu_max * static_cast<double>(j + 1) / n;
      double g0 = f0, g1 = f1;
      for (int it = 0; it < 60; ++it) {
        const double m2 = m1 - g1 * (m1 - m0) / (g1 - g0);
        if (!std::isfinite(m2)) break;
        m0 = m1;
        g0 = g1;
        m1 = std::min(std::max(m2, 0.0), mu_max);
        g1 = a_fn(Complex{0.0, m1}).real();
        if (std::abs(m1 - m0) < opt.secant_tol * (1.0 + m1)) break;
      }
      roots.push_back(m1);
    }
  }

  std::vector<ImagZero> out;
  for (double mu : roots) {
    const double dz = 1e-5 * std::max(1.0, mu);
    const Complex ap =
        (a_fn(Complex{dz, mu}) - a_fn(Complex{-dz, mu})) / Complex{2.0 * dz, 0.0};
    if (std::abs(ap) < opt.deriv_tol)
      throw DerivativeVanishes("a'(i mu) ~ 0 at mu = " + fmt_double(mu));
    out.push_back({mu, ap});
  }
  std::sort(out.begin(), out.end(), [](const ImagZero& a, const ImagZero& b) { return a.mu > b.mu; });

  if (opt.validate_winding) {
    const AEvaluator& wfn = a_fn_coarse ? a_fn_coarse : a_fn;
    const int w = winding_number(wfn, mu_max, opt);
    if (w != static_cast<int>(out.size()))
      throw CountMismatch("axis scan found " + std::to_string(out.size()) +
                          " zeros but winding number is " + std::to_string(w));
  }
  return out;
}

}  // namespace bnls
