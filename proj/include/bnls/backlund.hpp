// Backlund transformation B_q and the Backlund extension of half-line data.
//
// The P-matrix ODE P_x = (Q - i[sigma,P])P - PQ, P(0) = -iq sigma_3 is
// linearized through xi(x) = Psi_1^0(x, iq), the solution of the scattering
// system at z = iq with xi(0) = e1:
//   xi_1' = -(q/2) xi_1 + u xi_2,   xi_2' = -conj(u) xi_1 + (q/2) xi_2,
// and  B_q u = u - 2q F(xi),  P = phi P0 phi^{-1},  phi = (xi, J conj xi).
// xi is renormalized to unit length after every step; F and P depend only on
// the ray of xi, so the transform is unchanged while overflow is impossible.
#pragma once

#include <cmath>
#include <vector>

#include "bnls/errors.hpp"
#include "bnls/grid.hpp"
#include "bnls/types.hpp"
#include "bnls/zs.hpp"

namespace bnls {

struct PMatrixTrace {
  SpatialGrid grid;
  std::vector<Vec2> xi;    // renormalized xi at each node
  std::vector<Mat2> P;     // P(x) at each node
  double beta_plus = 0.0;
  double beta_minus = 0.0;
  double log_growth_plus = 0.0;   // log ||xi(x_max)|| accumulated
  double log_growth_minus = 0.0;  // log ||xi(x_min)|| accumulated
  bool near_degenerate_beta = false;
};

struct BacklundResult {
  SampledField u_tilde;
  PMatrixTrace trace;
};

namespace detail {

inline Mat2 p_matrix_from_xi(const Vec2& xi, double q) {
  const double n = xi.norm2();
  const double d = std::norm(xi.a) - std::norm(xi.b);
  const Complex od = 2.0 * xi.a * std::conj(xi.b);
  const Complex s = Complex{0.0, -q} / n;
  return {s * d, s * od, s * std::conj(od), s * (-d)};
}

}  // namespace detail

// B_q on whatever grid u lives on; the grid must contain x = 0 as a node.
inline BacklundResult backlund_transform(const SampledField& u, double q,
                                         const JostOptions& opt = {}) {
  if (!u.all_finite()) throw FormatError("backlund_transform: non-finite input");
  PMatrixTrace tr;
  tr.grid = u.grid;
  tr.xi.assign(u.grid.n_points, Vec2{});
  tr.P.assign(u.grid.n_points, Mat2{});
  SampledField ut(u.grid);

  if (q == 0.0) {
    // P == 0 and the transform is the identity
    for (int i = 0; i < u.grid.n_points; ++i) {
      tr.xi[i] = Vec2{1.0, 0.0};
      ut.values[i] = u.values[i];
    }
    tr.beta_plus = tr.beta_minus = 0.0;
    return {ut, tr};
  }

  const int i0 = u.grid.zero_index();
  if (i0 < 0) throw FormatError("backlund_transform: grid must contain x = 0");

  detail::FieldInterp interp(u);
  auto rhs = [&](int cell, double s, const Vec2& m) -> Vec2 {
    const Complex uu = interp.at_cell(cell, s);
    return {-0.5 * q * m.a + uu * m.b, -std::conj(uu) * m.a + 0.5 * q * m.b};
  };
  const double h = u.grid.h();
  const double ds = 1.0 / opt.refine;

  auto emit = [&](int i, const Vec2& xi) {
    tr.xi[i] = xi;
    tr.P[i] = detail::p_matrix_from_xi(xi, q);
    ut.values[i] = u.values[i] - 2.0 * q * ratio_functional(xi);
  };

  Vec2 xi{1.0, 0.0};
  emit(i0, xi);
  double log_norm = 0.0;
  for (int i = i0; i + 1 < u.grid.n_points; ++i) {
    for (int k = 0; k < opt.refine; ++k)
      xi = detail::rk4_step(rhs, xi, i, k * ds, ds, h);
    const double nn = xi.norm();
    if (nn < 1e-300) throw ZeroVector("xi underflow during Backlund integration");
    log_norm += std::log(nn);
    xi = xi * (1.0 / nn);
    emit(i + 1, xi);
  }
  tr.log_growth_plus = log_norm;
  {
    const double ra = std::abs(tr.xi.back().a), rb = std::abs(tr.xi.back().b);
    tr.beta_plus = (rb < ra) ? q : -q;
    if (rb > 0.5 * ra && rb < 2.0 * ra) tr.near_degenerate_beta = true;
  }

  xi = Vec2{1.0, 0.0};
  log_norm = 0.0;
  for (int i = i0; i > 0; --i) {
    for (int k = 0; k < opt.refine; ++k)
      xi = detail::rk4_step(rhs, xi, i - 1, 1.0 - k * ds, -ds, h);
    const double nn = xi.norm();
    if (nn < 1e-300) throw ZeroVector("xi underflow during Backlund integration");
    log_norm += std::log(nn);
    xi = xi * (1.0 / nn);
    emit(i - 1, xi);
  }
  tr.log_growth_minus = log_norm;
  {
    const double ra = std::abs(tr.xi.front().a), rb = std::abs(tr.xi.front().b);
    tr.beta_minus = (rb < ra) ? q : -q;
    if (rb > 0.5 * ra && rb < 2.0 * ra) tr.near_degenerate_beta = true;
  }
  return {ut, tr};
}

// Reversal (R u)(x) = u(-x) on a symmetric grid.
inline SampledField reverse_field(const SampledField& u) {
  SampledField out(u.grid);
  const int n = u.grid.n_points;
  if (std::abs(u.grid.x_min + u.grid.x_max) > 1e-12 * (std::abs(u.grid.x_max) + 1.0))
    throw FormatError("reverse_field: grid not symmetric about 0");
  for (int i = 0; i < n; ++i) out.values[i] = u.values[n - 1 - i];
  return out;
}

// Backlund extension of half-line data u_plus on [0, x_max] to [-x_max, x_max]:
// u^e = u_plus on x >= 0 and (B_q^+ u_plus)(-x) on x < 0.
inline SampledField backlund_extend(const SampledField& u_plus, double q,
                                    const JostOptions& opt = {}) {
  if (u_plus.grid.zero_index() != 0)
    throw FormatError("backlund_extend: first node must be x = 0");
  const BacklundResult br = backlund_transform(u_plus, q, opt);
  const int n = u_plus.grid.n_points;
  SpatialGrid g = symmetric_grid(u_plus.grid.x_max, n - 1);
  SampledField out(g);
  for (int i = 0; i < n; ++i) {
    out.values[(n - 1) + i] = u_plus.values[i];
    out.values[(n - 1) - i] = br.u_tilde.values[i];
  }
  return out;
}

struct QSymmetryReport {
  double sup_deviation = 0.0;
  double beta = 0.0;
  bool beta_consistent = true;
};

// || u - R B_q u ||_sup and the common tail sign beta.
inline QSymmetryReport check_q_symmetry(const SampledField& u, double q,
                                        const JostOptions& opt = {}) {
  const BacklundResult br = backlund_transform(u, q, opt);
  const SampledField rbu = reverse_field(br.u_tilde);
  QSymmetryReport rep;
  for (int i = 0; i < u.grid.n_points; ++i)
    rep.sup_deviation = std::max(rep.sup_deviation, std::abs(u.values[i] - rbu.values[i]));
  rep.beta = br.trace.beta_plus;
  rep.beta_consistent = (br.trace.beta_plus == br.trace.beta_minus);
  return rep;
}

}  // namespace bnls
