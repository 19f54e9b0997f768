// Direct solver for i u_t + (1/2) u_xx + q delta_0 u + |u|^2 u = 0 with even
// data: Strang splitting of the pointwise cubic phase rotation around a
// Crank-Nicolson step for the linear part. The delta is encoded exactly in
// the x = 0 stencil through the even-solution jump condition
// u_x(0+) + q u(0) = 0, i.e. u_xx(0) ~ (2 u_1 - (2 - 2 q h) u_0)/h^2.
// The scheme works on the half grid [0, x_max] with Dirichlet truncation at
// x_max and mirrors snapshots onto the symmetric grid, so even symmetry is
// exact by construction.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "bnls/errors.hpp"
#include "bnls/grid.hpp"
#include "bnls/quadrature.hpp"
#include "bnls/types.hpp"

namespace bnls {

struct SimConfig {
  SpatialGrid grid;       // symmetric, with 0 as a node
  double dt = 1e-3;
  double t_end = 1.0;
  double q = 0.0;
  double blowup_factor = 10.0;
  double tail_guard = 1e-5;
};

namespace detail {

// Tridiagonal Thomas solve with constant off-diagonals except the first row,
// which carries the doubled coupling of the even reflection.
class HalfLineCrankNicolson {
 public:
  HalfLineCrankNicolson(int m, double h, double dt, double q)
      : m_(m), alpha_(I * dt / (4.0 * h * h)), q_(q), h_(h) {
    c_prime_.resize(m_);
    d_work_.resize(m_);
  }

  // advance interior unknowns u[0..m-1] (u[m] = 0 Dirichlet) by one dt
  void step(CVec& u) const {
    const Complex a = alpha_;
    // rhs = (I + i dt/4 L) u
    CVec rhs(m_);
    {
      const Complex diag0 = 1.0 - a * (2.0 - 2.0 * q_ * h_);
      rhs[0] = diag0 * u[0] + 2.0 * a * u[1];
      for (int j = 1; j < m_; ++j) {
        const Complex up = (j + 1 < m_) ? u[j + 1] : Complex{0.0, 0.0};
        rhs[j] = (1.0 - 2.0 * a) * u[j] + a * (u[j - 1] + up);
      }
    }
    // solve (I - i dt/4 L) u+ = rhs
    const Complex b0 = 1.0 + a * (2.0 - 2.0 * q_ * h_);
    const Complex bj = 1.0 + 2.0 * a;
    const Complex off = -a;
    c_prime_[0] = (-2.0 * a) / b0;
    d_work_[0] = rhs[0] / b0;
    for (int j = 1; j < m_; ++j) {
      const Complex denom = bj - off * c_prime_[j - 1];
      c_prime_[j] = off / denom;
      d_work_[j] = (rhs[j] - off * d_work_[j - 1]) / denom;
    }
    u[m_ - 1] = d_work_[m_ - 1];
    for (int j = m_ - 2; j >= 0; --j) u[j] = d_work_[j] - c_prime_[j] * u[j + 1];
  }

 private:
  int m_;
  Complex alpha_;
  double q_;
  double h_;
  mutable CVec c_prime_;
  mutable CVec d_work_;
};

}  // namespace detail

// Evolve even initial data; returns snapshots on the full symmetric grid at
// the requested times (rounded to whole steps).
inline std::vector<SampledField> simulate(const SampledField& u0, const SimConfig& cfg,
                                          const RVec& snapshot_times) {
  if (!(cfg.dt > 0.0)) throw ConfigError("simulate: dt must be positive");
  if (cfg.dt > u0.grid.h() + 1e-15)
    throw ConfigError("simulate: dt must not exceed the grid spacing");
  if (evenness_defect(u0) > 1e-10) throw NotEven("simulate: initial data is not even");
  const int i0 = u0.grid.zero_index();
  if (i0 < 0) throw FormatError("simulate: grid must contain x = 0");

  const int m = u0.grid.n_points - i0 - 1;  // unknowns u[0..m-1], Dirichlet at the end
  const double h = u0.grid.h();
  CVec u(m);
  for (int j = 0; j < m; ++j) u[j] = u0.values[i0 + j];
  const double sup0 = u0.max_abs();
  {
    const double tail = std::abs(u0.values.back());
    if (tail > cfg.tail_guard)
      throw TailContamination("simulate: initial data touches the boundary");
  }

  detail::HalfLineCrankNicolson cn(m, h, cfg.dt, cfg.q);
  auto half_kick = [&](double dt) {
    for (auto& v : u) v *= std::exp(I * std::norm(v) * dt * 0.5);
  };

  std::vector<SampledField> out;
  std::size_t next_snap = 0;
  RVec times = snapshot_times;
  std::sort(times.begin(), times.end());

  auto emit = [&]() {
    SampledField snap(u0.grid);
    for (int j = 0; j < m; ++j) {
      snap.values[i0 + j] = u[j];
      snap.values[i0 - j] = u[j];
    }
    snap.values[u0.grid.n_points - 1] = Complex{0.0, 0.0};
    snap.values[0] = Complex{0.0, 0.0};
    out.push_back(std::move(snap));
  };

  const long n_steps = std::lround(cfg.t_end / cfg.dt);
  double t = 0.0;
  while (next_snap < times.size() && times[next_snap] <= 1e-12) {
    emit();
    ++next_snap;
  }
  for (long s = 0; s < n_steps; ++s) {
    half_kick(cfg.dt);
    cn.step(u);
    half_kick(cfg.dt);
    t = (s + 1) * cfg.dt;

    double sup = 0.0;
    for (const auto& v : u) sup = std::max(sup, std::abs(v));
    if (sup > cfg.blowup_factor * sup0)
      throw BlowUp("simulate: amplitude exceeded the collapse guard at t = " + fmt_double(t));
    if (std::abs(u[m - 1]) > cfg.tail_guard)
      throw TailContamination("simulate: radiation reached the boundary at t = " + fmt_double(t));

    while (next_snap < times.size() && times[next_snap] <= t + 0.5 * cfg.dt) {
      emit();
      ++next_snap;
    }
  }
  while (next_snap < times.size()) {
    emit();
    ++next_snap;
  }
  return out;
}

struct ConservedQuantities {
  double mass = 0.0;    // int_0^inf |u|^2
  double energy = 0.0;  // int_0^inf (|u_x|^2 - |u|^4) - q |u(0)|^2
};

// 4th-order first derivative on a uniform grid (one-sided at the ends).
inline CVec derivative4(const CVec& f, double h) {
  const int n = static_cast<int>(f.size());
  if (n < 5) throw FormatError("derivative4 needs at least 5 nodes");
  CVec d(n);
  for (int i = 0; i < n; ++i) {
    if (i >= 2 && i + 2 < n) {
      d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    } else if (i < 2) {
      d[i] = (-25.0 * f[i] + 48.0 * f[i + 1] - 36.0 * f[i + 2] + 16.0 * f[i + 3] -
              3.0 * f[i + 4]) /
             (12.0 * h);
    } else {
      d[i] = (25.0 * f[i] - 48.0 * f[i - 1] + 36.0 * f[i - 2] - 16.0 * f[i - 3] +
              3.0 * f[i - 4]) /
             (12.0 * h);
    }
  }
  return d;
}

inline ConservedQuantities conserved_quantities(const SampledField& u, double q) {
  const int i0 = u.grid.zero_index();
  if (i0 < 0) throw FormatError("conserved_quantities: grid must contain x = 0");
  const int n = u.grid.n_points - i0;
  CVec half(u.values.begin() + i0, u.values.end());
  const double h = u.grid.h();
  RVec m2(n), e(n);
  const CVec du = derivative4(half, h);
  for (int i = 0; i < n; ++i) {
    m2[i] = std::norm(half[i]);
    e[i] = std::norm(du[i]) - m2[i] * m2[i];
  }
  ConservedQuantities out;
  out.mass = trapezoid(m2, h);
  out.energy = trapezoid(e, h) - q * std::norm(half[0]);
  return out;
}

}  // namespace bnls
