#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "bnls/grid.hpp"
#include "bnls/io.hpp"
#include "bnls/quadrature.hpp"
#include "bnls/soliton.hpp"

using namespace bnls;

namespace {

// Brute-force oracle: same truncated-domain trapezoid at k-times resolution.
Complex cauchy_bruteforce(double z_max, std::size_t n_half, Complex z,
                          const std::function<Complex(double)>& f) {
  const SpectralGrid g = SpectralGrid::symmetric(z_max, n_half);
  CVec w(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) w[i] = f(g.z[i]) / (g.z[i] - z);
  return trapezoid(w, g.spacing()) / Complex{0.0, kTwoPi};
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("spectral grid is exactly symmetric") {
  const SpectralGrid g = SpectralGrid::symmetric(7.0, 111);
  REQUIRE(g.symmetry_defect() == 0.0);
  REQUIRE(g.z[g.mirror(3)] == -g.z[3]);
  REQUIRE(g.size() == 223);
}

TEST_CASE("cauchy integral: zero integrand") {
  const SpectralGrid g = SpectralGrid::symmetric(10.0, 200);
  const CVec f(g.size(), Complex{0.0, 0.0});
  REQUIRE(std::abs(cauchy_integral(g, f, Complex{0.3, 1.7})) == 0.0);
}

TEST_CASE("cauchy integral: lorentzian against refined oracle and residue value") {
  auto f = [](double s) { return Complex{1.0 / (s * s + 1.0), 0.0}; };
  const double z_max = 50.0;
  const std::size_t n_half = 4096;
  const SpectralGrid g = SpectralGrid::symmetric(z_max, n_half);
  CVec fs(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) fs[i] = f(g.z[i]);

  CauchyOptions opt;
  opt.tail_rel_threshold = 1e-3;  // 1/(2500) endpoint, relative to max 1
  const Complex z{0.0, 2.0};
  const Complex mine = cauchy_integral(g, fs, z, opt);
  const Complex oracle = cauchy_bruteforce(z_max, 10 * n_half, z, f);
  REQUIRE(std::abs(mine - oracle) <= 1e-8);
  // closed form (residue calculus): 1/6 up to domain truncation
  REQUIRE(std::abs(mine - Complex{1.0 / 6.0, 0.0}) < 2e-4);
}

TEST_CASE("cauchy integral: conjugate reflection symmetry for real even density") {
  const SpectralGrid g = SpectralGrid::symmetric(30.0, 2000);
  CVec fs(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    fs[i] = Complex{std::exp(-g.z[i] * g.z[i]), 0.0};
  const double y = 0.8;
  const Complex up = cauchy_integral(g, fs, Complex{0.0, y});
  const Complex dn = cauchy_integral(g, fs, Complex{0.0, -y});
  REQUIRE(std::abs(std::conj(up) + dn) < 1e-12);
}

TEST_CASE("cauchy integral guards") {
  const SpectralGrid g = SpectralGrid::symmetric(5.0, 100);
  CVec fs(g.size(), Complex{1.0, 0.0});  // constant: tails do not vanish
  REQUIRE_THROWS_AS(cauchy_integral(g, fs, Complex{0.0, 1.0}), TailTooLarge);
  CVec ok(g.size(), Complex{0.0, 0.0});
  REQUIRE_THROWS_AS(cauchy_integral(g, ok, Complex{1.0, 0.0}), NonRealGrid);
}

TEST_CASE("quadrature convergence: halving h scales the error by ~4") {
  auto f = [](double s) { return Complex{1.0 / (s * s + 1.0), 0.0}; };
  const Complex z{0.0, 2.0};
  const double z_max = 50.0;
  const Complex ref = cauchy_bruteforce(z_max, 1 << 17, z, f);
  const double e1 = std::abs(cauchy_bruteforce(z_max, 1 << 9, z, f) - ref);
  const double e2 = std::abs(cauchy_bruteforce(z_max, 1 << 10, z, f) - ref);
  const double e3 = std::abs(cauchy_bruteforce(z_max, 1 << 11, z, f) - ref);
  REQUIRE(e1 / e2 > 3.0);
  REQUIRE(e1 / e2 < 5.0);
  REQUIRE(e2 / e3 > 3.0);
  REQUIRE(e2 / e3 < 5.0);
}

TEST_CASE("cauchy boundary value matches the Lorentzian closed form") {
  // L(s) = 1/(1+s^2): residue calculus gives
  //   l+(zr) = 1/(2i(i - zr)) + 1/(1 + zr^2).
  const SpectralGrid g = SpectralGrid::symmetric(50.0, 20000);
  RVec L(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) L[i] = 1.0 / (1.0 + g.z[i] * g.z[i]);
  for (double zr : {0.7, 0.0, -1.3}) {
    const Complex bd = cauchy_boundary_plus(g, L, zr);
    const Complex exact = 1.0 / (2.0 * I * (I - zr)) + 1.0 / (1.0 + zr * zr);
    REQUIRE(std::abs(bd - exact) < 1e-4);
  }
}

TEST_CASE("field serialization round trip is the identity") {
  const SpatialGrid grid = symmetric_grid(20.0, 1024);
  const SampledField u = sample_ground_state(grid, 1.0, 0.25);
  const std::string path = temp_path("bnls_field_rt.csv");
  save_field(u, path);
  const SampledField v = load_field(path);
  REQUIRE(v.grid.n_points == u.grid.n_points);
  REQUIRE(v.grid.x_min == u.grid.x_min);
  REQUIRE(v.grid.x_max == u.grid.x_max);
  for (int i = 0; i < u.grid.n_points; ++i) REQUIRE(v.values[i] == u.values[i]);
  std::remove(path.c_str());
}

TEST_CASE("malformed field rows are rejected") {
  const std::string path = temp_path("bnls_field_bad.csv");
  {
    std::ofstream os(path);
    os << "# x,re,im\n0.0,1.0\n1.0,2.0\n";
  }
  REQUIRE_THROWS_AS(load_field(path), FormatError);
  {
    std::ofstream os(path);
    os << "# x,re,im\n0.0,nan,0.0\n1.0,2.0,0.0\n";
  }
  REQUIRE_THROWS_AS(load_field(path), FormatError);
  std::remove(path.c_str());
}

TEST_CASE("scattering data json sidecar round trip") {
  ScatteringData d;
  d.grid = SpectralGrid::symmetric(4.0, 16);
  d.r.assign(d.grid.size(), Complex{0.0, 0.0});
  d.r[5] = Complex{0.125, -0.25};
  d.zeros = {1.0, 0.25};
  d.gammas = {Complex{1.2909944487358056, 0.0}, Complex{0.0, 2.0}};
  d.beta = 0.25;
  d.q = -0.25;
  const std::string jp = temp_path("bnls_sd.json");
  const std::string rp = temp_path("bnls_sd_r.csv");
  save_scattering_data(d, jp, rp);
  const ScatteringData e = load_scattering_data(jp);
  REQUIRE(e.q == d.q);
  REQUIRE(e.beta == d.beta);
  REQUIRE(e.zeros == d.zeros);
  REQUIRE(e.gammas[1] == d.gammas[1]);
  REQUIRE(e.r[5] == d.r[5]);
  std::remove(jp.c_str());
  std::remove(rp.c_str());
}
