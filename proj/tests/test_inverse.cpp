#include <catch_amalgamated.hpp>

#include "bnls/asymptotics.hpp"
#include "bnls/inverse.hpp"
#include "bnls/nlse.hpp"
#include "bnls/soliton.hpp"

using namespace bnls;

namespace {

ScatteringData soliton_data(double mu, double q, double z_max = 6.0, int n_half = 240) {
  ScatteringData d;
  d.grid = SpectralGrid::symmetric(z_max, n_half);
  d.r.assign(d.grid.size(), Complex{0.0, 0.0});
  d.zeros = {mu};
  d.gammas = {Complex{std::sqrt((mu + q) / (mu - q)), 0.0}};
  d.beta = -q;
  d.q = q;
  return d;
}

}  // namespace

TEST_CASE("oscillatory integral: gaussian moments at small and large t") {
  const SpectralGrid g = SpectralGrid::symmetric(10.0, 2000);
  CVec f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    f[i] = std::exp(-g.z[i] * g.z[i]);
  // t = 0, x = 0: plain integral sqrt(pi)
  REQUIRE(std::abs(oscillatory_integral(g, f, 0.0, 0.0) - std::sqrt(kPi)) < 1e-10);
  // closed form at any (x,t): int e^{-s^2} e^{i(xs - t s^2/2)} ds
  //   = sqrt(pi/(1 + i t/2)) exp(-x^2/(4 (1 + i t/2)))
  for (double t : {5.0, 40.0, 300.0}) {
    for (double x : {0.0, 1.0, 7.0}) {
      const Complex w{1.0, 0.5 * t};
      const Complex exact = std::sqrt(kPi / w) * std::exp(-x * x / (4.0 * w));
      const Complex num = oscillatory_integral(g, f, x, t);
      REQUIRE(std::abs(num - exact) < 5e-6);
    }
  }
}

TEST_CASE("empty reflectionless configuration is the vacuum") {
  const ReflectionlessSolution sol = solve_reflectionless({}, 0.7, 3.0);
  REQUIRE(std::abs(sol.u) == 0.0);
  const Mat2 m = sol.m_eval(Complex{0.3, 0.9});
  REQUIRE(std::abs(m.m11 - 1.0) < 1e-14);
  REQUIRE(std::abs(m.m12) < 1e-14);
}

TEST_CASE("one-pole reflectionless solve is the stationary soliton") {
  const double q = 0.25;
  ReflectionlessConfig cfg;
  cfg.mus = {1.0};
  cfg.gammas = {Complex{std::sqrt(5.0 / 3.0), 0.0}};
  for (double t : {0.0, 1.0, 7.3}) {
    for (double x : {0.0, -1.2, 2.5}) {
      const ReflectionlessSolution sol = solve_reflectionless(cfg, x, t);
      const Complex expected =
          std::exp(I * 0.5 * t) * soliton_profile(x, 1.0, q);
      REQUIRE(std::abs(sol.u - expected) < 1e-12);
    }
  }
  const ReflectionlessSolution at0 = solve_reflectionless(cfg, 0.0, 0.0);
  REQUIRE(std::abs(std::abs(at0.u) - 0.96824583655185426) < 1e-12);
  // det m = 1 at sampled spectral points
  for (Complex z : {Complex{0.4, 0.7}, Complex{-1.0, 0.2}, Complex{0.0, 2.0}})
    REQUIRE(std::abs(at0.m_eval(z).det() - 1.0) < 1e-12);
}

TEST_CASE("two-pole mass obeys the trace formula") {
  ReflectionlessConfig cfg;
  cfg.mus = {1.0, 0.3};
  cfg.gammas = {Complex{1.1, 0.4}, Complex{0.8, -0.2}};
  const SpatialGrid g = symmetric_grid(80.0, 4000);
  for (double t : {0.0, 10.0}) {
    RVec m2(g.n_points);
    for (int i = 0; i < g.n_points; ++i) {
      const ReflectionlessSolution sol = solve_reflectionless(cfg, g.x(i), t);
      m2[i] = std::norm(sol.u);
    }
    // trace identity mu_1 + mu_2 = (1/2) int |u|^2 with r = 0
    const double mass = trapezoid(m2, g.h());
    REQUIRE(std::abs(mass - 2.0 * (1.0 + 0.3)) < 1e-4);
  }
}

TEST_CASE("reflectionless config validation") {
  ReflectionlessConfig bad;
  bad.mus = {1.0, 1.0};
  bad.gammas = {Complex{1.0, 0.0}, Complex{1.0, 0.0}};
  REQUIRE_THROWS_AS(solve_reflectionless(bad, 0.0, 0.0), SingularLinearSystem);
  bad.mus = {1.0};
  bad.gammas = {Complex{0.0, 0.0}};
  REQUIRE_THROWS_AS(solve_reflectionless(bad, 0.0, 0.0), SingularLinearSystem);
}

TEST_CASE("born reconstruction of a gaussian reflection") {
  const double eps = 0.01;
  ScatteringData d;
  d.grid = SpectralGrid::symmetric(8.0, 1600);
  d.r.resize(d.grid.size());
  for (std::size_t i = 0; i < d.grid.size(); ++i)
    d.r[i] = eps * std::exp(-d.grid.z[i] * d.grid.z[i]);
  d.q = 0.1;

  // r = 0 gives u = 0 and m = I
  {
    ScatteringData z = d;
    z.r.assign(z.grid.size(), Complex{0.0, 0.0});
    const BornResult br = born_reconstruct(z, 0.3, 2.0);
    REQUIRE(std::abs(br.u) == 0.0);
    REQUIRE(std::abs(br.m_at(Complex{0.0, 1.0}).m12) == 0.0);
  }
  // x = 0, t = 0: u = eps sqrt(pi)/(2 pi)
  {
    const BornResult br = born_reconstruct(d, 0.0, 0.0);
    REQUIRE(std::abs(br.u - eps * 0.28209479177387814) < 1e-8);
    REQUIRE_FALSE(br.regime_warning);
  }
  // t = 100: stationary-phase magnitude |r(z0)|/sqrt(2 pi t) within 15%
  {
    const BornResult br = born_reconstruct(d, 0.0, 100.0);
    const LocalK lk = local_k(d.grid, d.r, 0.0, 100.0);
    const double predicted = std::abs(lk.k1) / std::sqrt(100.0);
    REQUIRE(std::abs(std::abs(br.u) - predicted) < 0.15 * predicted);
  }
  // ||r|| above the small-data regime flags a warning
  {
    ScatteringData big = d;
    for (auto& v : big.r) v *= 30.0;
    const BornResult br = born_reconstruct(big, 0.0, 1.0);
    REQUIRE(br.regime_warning);
  }
}

TEST_CASE("reconstruct: exact soliton data gives the stationary profile") {
  const double q = 0.25;
  const ScatteringData d = soliton_data(1.0, q);
  for (double t : {0.0, 2.0, 15.0}) {
    for (double x : {0.0, 1.0, -2.3}) {
      const ReconstructResult rr = reconstruct(d, x, t);
      const Complex expected = std::exp(I * 0.5 * t) * soliton_profile(x, 1.0, q);
      REQUIRE(std::abs(rr.u - expected) < 1e-10);
    }
  }
}

TEST_CASE("reconstruct matches solve_reflectionless for pole-only data") {
  const ScatteringData d = soliton_data(0.8, -0.15);
  ReflectionlessConfig cfg;
  cfg.mus = d.zeros;
  cfg.gammas = d.gammas;
  for (double t : {0.0, 3.0}) {
    for (double x : {-1.0, 0.4, 2.2}) {
      const ReconstructResult rr = reconstruct(d, x, t);
      const ReflectionlessSolution rs = solve_reflectionless(cfg, x, t);
      REQUIRE(std::abs(rr.u - rs.u) < 1e-10);
    }
  }
}

TEST_CASE("reconstruct rejects more than two zeros") {
  ScatteringData d = soliton_data(1.0, 0.2);
  d.zeros = {1.0, 0.6, 0.3};
  d.gammas.assign(3, Complex{1.0, 0.0});
  REQUIRE_THROWS_AS(reconstruct(d, 0.0, 1.0), UnsupportedSpectrum);
}

TEST_CASE("solve_ivp: stationary ground state and trivial data") {
  const double q = 0.25;
  const SpatialGrid g = symmetric_grid(20.0, 640);
  {
    const SampledField u0 = sample_ground_state(g, 1.0, q);
    SolveIvpOptions opt;
    opt.spectral_grid = SpectralGrid::symmetric(6.0, 120);
    opt.extension.zeros.scan_points = 600;
    opt.extension.zeros.contour_points = 1200;
    opt.extension.zeros.contour_factor = 6.0;
    const SolveIvpResult res = solve_ivp(u0, q, {1.0}, opt);
    const int i0 = g.zero_index();
    REQUIRE(std::abs(std::abs(res.snapshots[0].values[i0]) - 0.96824583655185426) < 1e-4);
    // profile is stationary in modulus
    for (int i = 0; i < g.n_points; i += 41)
      REQUIRE(std::abs(std::abs(res.snapshots[0].values[i]) -
                       ground_state(g.x(i), 1.0, q)) < 1e-4);
    // even symmetry exact by construction
    for (int k = 0; k < 200; ++k)
      REQUIRE(res.snapshots[0].values[i0 + k] == res.snapshots[0].values[i0 - k]);
    // Robin condition u_x(0+) + q u(0) = 0 within O(h)
    const double h = g.h();
    Complex d1{0.0, 0.0};
    const double c[5] = {-25.0, 48.0, -36.0, 16.0, -3.0};
    for (int k = 0; k < 5; ++k) d1 += c[k] * res.snapshots[0].values[i0 + k];
    d1 = d1 / (12.0 * h);
    REQUIRE(std::abs(d1 + q * res.snapshots[0].values[i0]) < 10.0 * h);
  }
  {
    const SampledField zero(g);
    SolveIvpOptions opt;
    opt.spectral_grid = SpectralGrid::symmetric(4.0, 40);
    const SolveIvpResult res = solve_ivp(zero, q, {0.5}, opt);
    REQUIRE(res.snapshots[0].max_abs() < 1e-12);
  }
  {
    const SampledField odd = SampledField::sample(
        g, [](double x) { return Complex{x * std::exp(-x * x), 0.0}; });
    REQUIRE_THROWS_AS(solve_ivp(odd, q, {1.0}, {}), NotEven);
  }
}
