// Darboux transformations that insert or remove one simple pole pair
// (xi, conj xi) in the scattering configuration.
//
// Adding (xi, c~): with mu(z) = diag(z-xi, z-conj xi) and the frame
//   b1(x) = psi(x,xi) (1, -c~/(xi-conj xi))^T,   b2 = J conj(b1),
// the dressed eigenfunction is psi~ = b mu b^{-1} psi mu^{-1} and
//   u~ = u + i(xi - conj xi) F(b1).
// Removing xi from a configuration whose eigenfunction is psi~: the frame is
// rebuilt from the bound-state column h(x) = psi~_2(x, xi) as
//   B = (J conj h, h),  psi = B mu^{-1} B^{-1} psi~ mu,
//   u = u~ + i(xi - conj xi) F(h).
// Reflection data transform as r -> r (z-xi)/(z-conj xi) on insertion and the
// reciprocal on removal; pre-existing norming constants are unchanged.
#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "bnls/errors.hpp"
#include "bnls/grid.hpp"
#include "bnls/types.hpp"
#include "bnls/zs.hpp"

namespace bnls {

struct DarbouxStep {
  Complex xi;       // Im xi > 0
  Complex c_tilde;  // nonzero coupling
};

// Eigenfunction evaluator: full 2x2 Beals-Coifman solution psi(x,z) at one x.
using PsiPointEval = std::function<Mat2(double x, Complex z)>;

inline PsiPointEval psi_vacuum() {
  return [](double x, Complex z) -> Mat2 {
    const Complex p = std::exp(I * x * z * 0.5);
    return Mat2::diag(p, 1.0 / p);
  };
}

// Beals-Coifman solution of a decaying potential for Im z > 0, assembled from
// the analytically continued ZS-AKNS columns: psi = (psi_1^+ / a, psi_2^-).
// Trajectories are cached per spectral point, so sweeping x at a fixed pole
// costs two ODE passes total.
inline PsiPointEval psi_from_potential(const SampledField& u, const JostOptions& opt = {}) {
  struct Cache {
    std::map<std::pair<double, double>, std::pair<std::vector<Vec2>, std::vector<Vec2>>> t;
  };
  auto cache = std::make_shared<Cache>();
  return [u, opt, cache](double x, Complex z) -> Mat2 {
    const auto key = std::make_pair(z.real(), z.imag());
    auto it = cache->t.find(key);
    if (it == cache->t.end()) {
      it = cache->t
               .emplace(key, std::make_pair(jost_m1p_trajectory(u, z, opt),
                                            jost_m2m_trajectory(u, z, opt)))
               .first;
    }
    const auto& m1 = it->second.first;
    const auto& m2 = it->second.second;
    const double h = u.grid.h();
    int i = static_cast<int>(std::lround((x - u.grid.x_min) / h));
    i = std::max(0, std::min(u.grid.n_points - 1, i));
    const Complex a = det_a(m1[i], m2[i]);
    const Complex ph = std::exp(I * u.grid.x(i) * z * 0.5);
    const Vec2 c1{m1[i].a * ph / a, m1[i].b * ph / a};
    const Vec2 c2{m2[i].a / ph, m2[i].b / ph};
    return Mat2::from_cols(c1, c2);
  };
}

namespace detail {

inline Mat2 frame_from_first_column(const Vec2& b1) {
  return Mat2::from_cols(b1, symplectic_partner(b1));
}

inline Mat2 mu_matrix(Complex z, Complex xi) {
  return Mat2::diag(z - xi, z - std::conj(xi));
}

// Evaluation at or next to a first-order pole of `core`: the symmetric
// 4-point average cancels the odd pole part and the z^2, z^3 Taylor terms,
// returning the regular part to O(delta^4). The singular column of a dressed
// solution therefore comes back as its finite regular part.
template <typename Core>
inline Mat2 pole_safe_eval(const Core& core, double x, Complex z, Complex xi,
                           double scale) {
  const double eps = 1e-6 * scale;
  const double d = std::min(std::abs(z - xi), std::abs(z - std::conj(xi)));
  if (d >= eps) return core(x, z);
  const double delta = 1e-3 * scale;
  const Mat2 s = core(x, z + delta) + core(x, z - delta) + core(x, z + I * delta) +
                 core(x, z - I * delta);
  return s * 0.25;
}

}  // namespace detail

// Dressed eigenfunction evaluator after adding (xi, c~).
inline PsiPointEval darboux_dressed_psi(const PsiPointEval& psi, const DarbouxStep& step) {
  const Complex xi = step.xi;
  auto core = [psi, step](double x, Complex z) -> Mat2 {
    const Mat2 base_at_xi = psi(x, step.xi);
    const Vec2 b1 = base_at_xi.col(0) - (step.c_tilde / (step.xi - std::conj(step.xi))) *
                                            base_at_xi.col(1);
    const Mat2 B = detail::frame_from_first_column(b1);
    if (B.det().real() <= 0.0)
      throw SingularFrame("darboux frame not positive at x = " + fmt_double(x));
    const Mat2 mu = detail::mu_matrix(z, step.xi);
    return B * mu * B.inverse() * psi(x, z) * mu.inverse();
  };
  const double scale = 1.0 + std::abs(xi);
  return [core, xi, scale](double x, Complex z) -> Mat2 {
    return detail::pole_safe_eval(core, x, z, xi, scale);
  };
}

// Bound state of the potential at its eigenvalue xi, evaluated stably: the
// decaying Jost column integrated from +inf is used for x >= 0 and the one
// from -inf for x < 0. The two rays differ by the norming constant, an
// x-independent scalar, and every consumer here is invariant under per-x
// complex rescaling of the column.
inline std::function<Vec2(double)> bound_state_on_grid(const SampledField& u, Complex xi,
                                                       const JostOptions& opt = {}) {
  const auto m1 = jost_m1p_trajectory(u, xi, opt);
  const auto m2 = jost_m2m_trajectory(u, xi, opt);
  const SpatialGrid g = u.grid;
  return [m1, m2, g, xi](double x) -> Vec2 {
    int i = static_cast<int>(std::lround((x - g.x_min) / g.h()));
    i = std::max(0, std::min(g.n_points - 1, i));
    const double xs = g.x(i);
    if (xs >= 0.0) {
      const Complex ph = std::exp(I * xs * xi * 0.5);
      return {m1[i].a * ph, m1[i].b * ph};
    }
    const Complex ph = std::exp(-I * xs * xi * 0.5);
    return {m2[i].a * ph, m2[i].b * ph};
  };
}

// Eigenfunction evaluator after removing the pole at xi. The frame columns
// are defined up to per-column scalars, so J conj(h) serves as the first
// column and the gluing scalar of the stable bound state drops out of
// B mu^{-1} B^{-1}.
inline PsiPointEval darboux_stripped_psi(const PsiPointEval& psi_tilde,
                                         const std::function<Vec2(double)>& bound_state,
                                         Complex xi) {
  auto core = [psi_tilde, bound_state, xi](double x, Complex z) -> Mat2 {
    const Vec2 h = bound_state(x);
    if (h.norm2() <= 0.0) throw SingularFrame("bound-state column vanished");
    const Mat2 B = Mat2::from_cols(symplectic_partner(h), h);
    const Mat2 mu = detail::mu_matrix(z, xi);
    return B * mu.inverse() * B.inverse() * psi_tilde(x, z) * mu;
  };
  const double scale = 1.0 + std::abs(xi);
  return [core, xi, scale](double x, Complex z) -> Mat2 {
    return detail::pole_safe_eval(core, x, z, xi, scale);
  };
}

struct SpectrumUpdate {
  std::vector<Complex> poles;  // current poles in C+, descending Im
};

struct DarbouxFieldResult {
  SampledField u_tilde;
  PsiPointEval psi_tilde;
  SpectrumUpdate spectrum;
};

// Add a pole pair to a potential sampled on a grid. psi must be the
// eigenfunction evaluator of u (vacuum or psi_from_potential).
inline DarbouxFieldResult darboux_add(const PsiPointEval& psi, const SampledField& u,
                                      const DarbouxStep& step,
                                      const SpectrumUpdate& spectrum = {}) {
  if (step.xi.imag() <= 0.0) throw PoleCollision("darboux_add: Im xi must be positive");
  if (std::abs(step.c_tilde) == 0.0) throw ConfigError("darboux_add: c~ must be nonzero");
  for (const auto& p : spectrum.poles)
    if (std::abs(p - step.xi) < 1e-8)
      throw PoleCollision("darboux_add: xi collides with an existing pole");

  DarbouxFieldResult out;
  out.u_tilde = SampledField(u.grid);
  const Complex jump = I * (step.xi - std::conj(step.xi));
  for (int i = 0; i < u.grid.n_points; ++i) {
    const double x = u.grid.x(i);
    const Mat2 base = psi(x, step.xi);
    const Vec2 b1 =
        base.col(0) - (step.c_tilde / (step.xi - std::conj(step.xi))) * base.col(1);
    if (b1.norm2() <= 0.0) throw SingularFrame("darboux_add: zero frame column");
    out.u_tilde.values[i] = u.values[i] + jump * ratio_functional(b1);
  }
  out.psi_tilde = darboux_dressed_psi(psi, step);
  out.spectrum = spectrum;
  out.spectrum.poles.push_back(step.xi);
  return out;
}

// Remove the pole at xi. psi_tilde must be the eigenfunction evaluator of u;
// the bound-state column itself is recomputed from u by stable Volterra
// integration (reading it off psi_tilde at the pole is exact algebra but
// loses all digits in the spatial tails).
inline DarbouxFieldResult darboux_remove(const PsiPointEval& psi_tilde, const SampledField& u,
                                         Complex xi, const SpectrumUpdate& spectrum = {},
                                         const JostOptions& jost = {}) {
  if (!spectrum.poles.empty()) {
    bool found = false;
    for (const auto& p : spectrum.poles)
      if (std::abs(p - xi) < 1e-8) found = true;
    if (!found) throw NotAPole("darboux_remove: xi is not a pole of the configuration");
  }
  const auto h_of = bound_state_on_grid(u, xi, jost);
  DarbouxFieldResult out;
  out.u_tilde = SampledField(u.grid);
  const Complex jump = I * (xi - std::conj(xi));
  for (int i = 0; i < u.grid.n_points; ++i) {
    const Vec2 h = h_of(u.grid.x(i));
    if (h.norm2() <= 0.0) throw SingularFrame("darboux_remove: bound state vanished");
    out.u_tilde.values[i] = u.values[i] + jump * ratio_functional(h);
  }
  out.psi_tilde = darboux_stripped_psi(psi_tilde, h_of, xi);
  out.spectrum = spectrum;
  auto& ps = out.spectrum.poles;
  for (std::size_t k = 0; k < ps.size(); ++k)
    if (std::abs(ps[k] - xi) < 1e-8) {
      ps.erase(ps.begin() + k);
      break;
    }
  return out;
}

// Reflection samples after insertion/removal of xi.
inline CVec reflect_after_add(const SpectralGrid& g, const CVec& r, Complex xi) {
  CVec out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Complex z{g.z[i], 0.0};
    out[i] = r[i] * (z - xi) / (z - std::conj(xi));
  }
  return out;
}

inline CVec reflect_after_remove(const SpectralGrid& g, const CVec& r, Complex xi) {
  CVec out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Complex z{g.z[i], 0.0};
    out[i] = r[i] * (z - std::conj(xi)) / (z - xi);
  }
  return out;
}

}  // namespace bnls
