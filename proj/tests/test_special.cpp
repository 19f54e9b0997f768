#include <catch_amalgamated.hpp>

#include "bnls/special.hpp"

using namespace bnls;

TEST_CASE("complex gamma: real values and reflection") {
  REQUIRE(std::abs(gamma_complex(Complex{5.0, 0.0}) - 24.0) < 1e-10);
  REQUIRE(std::abs(gamma_complex(Complex{0.5, 0.0}) - std::sqrt(kPi)) < 1e-12);
  // |Gamma(i nu)|^2 = pi / (nu sinh(pi nu)), checked against the Lanczos value
  const double nu = 0.1;
  const Complex g = gamma_complex(Complex{0.0, nu});
  const double identity = kPi / (nu * std::sinh(kPi * nu));
  REQUIRE(std::abs(std::norm(g) - identity) / identity < 1e-10);
}

TEST_CASE("parabolic cylinder: a = 0 closed form") {
  // D_0(eta) = exp(-eta^2/4)
  REQUIRE(std::abs(parabolic_cylinder(0.0, Complex{1.0, 0.0}).real() - 0.77880078307140487) <
          1e-12);
  for (double x : {-4.0, -1.0, 0.5, 3.0, 5.9}) {
    const Complex d = parabolic_cylinder(0.0, Complex{x, 0.0});
    REQUIRE(std::abs(d - std::exp(Complex{-x * x / 4.0, 0.0})) < 1e-12);
  }
}

TEST_CASE("parabolic cylinder: D_{-1}(0) = sqrt(pi/2)") {
  const Complex d = parabolic_cylinder(Complex{-1.0, 0.0}, Complex{0.0, 0.0});
  REQUIRE(std::abs(d - std::sqrt(kPi / 2.0)) < 1e-12);
}

TEST_CASE("parabolic cylinder: recurrence D_{a+1} - eta D_a + a D_{a-1} = 0") {
  const Complex a{0.0, 0.3};
  const Complex eta{2.0, 0.0};
  const Complex lhs = parabolic_cylinder(a + 1.0, eta) - eta * parabolic_cylinder(a, eta) +
                      a * parabolic_cylinder(a - 1.0, eta);
  REQUIRE(std::abs(lhs) < 1e-9);

  // a 10-point (a, eta) sample inside the series region
  for (int k = 0; k < 10; ++k) {
    const Complex ak{0.1 * k - 0.4, 0.05 * k};
    const Complex ek{0.5 + 0.4 * k, 0.3 * (k % 3)};
    const Complex res = parabolic_cylinder(ak + 1.0, ek) - ek * parabolic_cylinder(ak, ek) +
                        ak * parabolic_cylinder(ak - 1.0, ek);
    REQUIRE(std::abs(res) < 1e-9);
  }
}

TEST_CASE("parabolic cylinder: series and asymptotic expansion meet at |eta| = 6") {
  PcfOptions series_side;
  series_side.series_radius = 6.5;  // force the series at |eta| = 6
  PcfOptions asym_side;
  asym_side.series_radius = 5.5;  // force the expansion at |eta| = 6
  const Complex a{0.0, -0.11};    // order of the size met in practice: a = -i nu
  for (double arg : {0.0, 0.5 * kPi, -0.5 * kPi}) {
    const Complex eta = 6.0 * std::exp(I * arg);
    const Complex s = parabolic_cylinder(a, eta, series_side);
    const Complex q = parabolic_cylinder(a, eta, asym_side);
    REQUIRE(std::abs(s - q) <= 1e-6 * (1.0 + std::abs(s)));
  }
}

TEST_CASE("parabolic cylinder: envelope guard") {
  REQUIRE_THROWS_AS(parabolic_cylinder(Complex{6.0, 0.0}, Complex{1.0, 0.0}), OutOfEnvelope);
  REQUIRE_THROWS_AS(parabolic_cylinder(Complex{0.0, 0.0}, Complex{60.0, 0.0}), OutOfEnvelope);
}

TEST_CASE("fresnel integrals: E0 and consistency across representations") {
  const Complex E0 = fresnel_E0();
  REQUIRE(std::abs(E0 - Complex{std::sqrt(kPi), -std::sqrt(kPi)}) < 1e-14);

  // F via direct fine Simpson as oracle at mixed magnitudes
  for (double z : {0.5, 2.0, 3.2, 5.0, 9.7, 13.5, 20.0}) {
    const int n = 200000;
    const double h = z / n;
    Complex acc{0.0, 0.0};
    auto f = [](double s) { return std::exp(-I * 0.5 * s * s); };
    for (int i = 0; i < n; ++i)
      acc += (h / 6.0) * (f(i * h) + 4.0 * f((i + 0.5) * h) + f((i + 1) * h));
    REQUIRE(std::abs(fresnel_F(z) - acc) < 1e-8);
    REQUIRE(std::abs(fresnel_F(-z) + acc) < 1e-8);
  }

  // splitting identity
  for (double z : {-3.0, 0.0, 1.5, 8.0}) {
    REQUIRE(std::abs(fresnel_Eplus0(z) + fresnel_Eminus0(z) - E0) < 1e-12);
  }
}
