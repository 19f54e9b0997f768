// Special functions: complex gamma (Lanczos), parabolic cylinder D_a(eta)
// by Kummer series inside |eta| <= 6 and the three-sector large-eta
// expansion outside, and the Fresnel-type half-line integrals
//   Eplus0(z)  = int_z^inf  e^{-i s^2/2} ds,
//   Eminus0(z) = int_-inf^z e^{-i s^2/2} ds,
// via series / cumulative table / asymptotic tail.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "bnls/errors.hpp"
#include "bnls/quadrature.hpp"
#include "bnls/types.hpp"

namespace bnls {

// ---------------------------------------------------------------------------
// Complex gamma, Lanczos g = 7, n = 9 (double precision).
// ---------------------------------------------------------------------------
inline Complex gamma_complex(Complex z) {
  static const double c[9] = {
      0.99999999999980993,  676.5203681218851,   -1259.1392167224028,
      771.32342877765313,   -176.61502916214059, 12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) {
    // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return kPi / (std::sin(kPi * z) * gamma_complex(1.0 - z));
  }
  z -= 1.0;
  Complex x = c[0];
  for (int i = 1; i < 9; ++i) x += c[i] / (z + static_cast<double>(i));
  const Complex t = z + 7.5;
  return std::sqrt(kTwoPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

// ---------------------------------------------------------------------------
// Kummer's M(a,b,x) by plain series; adequate for |x| <= 20 here.
// ---------------------------------------------------------------------------
inline Complex kummer_m(Complex a, Complex b, Complex x) {
  Complex term{1.0, 0.0};
  Complex sum{1.0, 0.0};
  for (int n = 0; n < 400; ++n) {
    term *= (a + static_cast<double>(n)) / (b + static_cast<double>(n)) * x /
            (static_cast<double>(n) + 1.0);
    sum += term;
    if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum)) && n > 4) break;
  }
  return sum;
}

struct PcfOptions {
  double series_radius = 6.0;
  double a_max = 5.0;
  double eta_max = 50.0;
};

namespace detail {

// Descending factorial product a(a-1)...(a-2n+1) built incrementally in the
// dominant asymptotic series S1 and ascending (a+1)...(a+2n) in S2; both are
// truncated at their smallest term.
inline Complex pcf_series_main(Complex a, Complex eta) {
  const Complex ieta2 = 1.0 / (eta * eta);
  Complex term{1.0, 0.0};
  Complex sum{1.0, 0.0};
  double last = 1.0;
  for (int n = 1; n <= 14; ++n) {
    const Complex f1 = a - static_cast<double>(2 * n - 2);
    const Complex f2 = a - static_cast<double>(2 * n - 1);
    term *= -f1 * f2 * ieta2 / (2.0 * n);
    const double m = std::abs(term);
    if (m > last) break;  // smallest-term truncation
    sum += term;
    last = m;
    if (m < 1e-18) break;
  }
  return sum;
}

inline Complex pcf_series_recessive(Complex a, Complex eta) {
  const Complex ieta2 = 1.0 / (eta * eta);
  Complex term{1.0, 0.0};
  Complex sum{1.0, 0.0};
  double last = 1.0;
  for (int n = 1; n <= 14; ++n) {
    const Complex f1 = a + static_cast<double>(2 * n - 1);
    const Complex f2 = a + static_cast<double>(2 * n);
    term *= f1 * f2 * ieta2 / (2.0 * n);
    const double m = std::abs(term);
    if (m > last) break;
    sum += term;
    last = m;
    if (m < 1e-18) break;
  }
  return sum;
}

}  // namespace detail

// Parabolic cylinder function D_a(eta) for complex order and argument.
inline Complex parabolic_cylinder(Complex a, Complex eta, const PcfOptions& opt = {}) {
  if (std::abs(a) > opt.a_max || std::abs(eta) > opt.eta_max)
    throw OutOfEnvelope("parabolic_cylinder: |a| or |eta| outside envelope");
  const double r = std::abs(eta);
  if (r <= opt.series_radius) {
    const Complex x = eta * eta * 0.5;
    const Complex m1 = kummer_m(-a * 0.5, Complex{0.5, 0.0}, x);
    const Complex m2 = kummer_m((1.0 - a) * 0.5, Complex{1.5, 0.0}, x);
    const Complex pre = std::pow(Complex{2.0, 0.0}, a * 0.5) * std::sqrt(kPi) *
                        std::exp(-eta * eta * 0.25);
    return pre * (m1 / gamma_complex((1.0 - a) * 0.5) -
                  std::sqrt(2.0) * eta * m2 / gamma_complex(-a * 0.5));
  }
  const double arg = std::arg(eta);
  const Complex main = std::pow(eta, a) * std::exp(-eta * eta * 0.25) *
                       detail::pcf_series_main(a, eta);
  if (std::abs(arg) <= 0.5 * kPi) return main;
  // recessive term carries e^{+- a pi i} depending on the half plane
  const Complex phase = std::exp((arg > 0.0 ? 1.0 : -1.0) * a * kPi * I);
  const Complex rec = std::sqrt(kTwoPi) / gamma_complex(-a) * phase *
                      std::pow(eta, -a - 1.0) * std::exp(eta * eta * 0.25) *
                      detail::pcf_series_recessive(a, eta);
  return main - rec;
}

// ---------------------------------------------------------------------------
// F(z) = int_0^z e^{-i s^2/2} ds for real z (odd in z), assembled from a
// Maclaurin series (|z| <= 3.5), a cumulative Simpson table (3.5 < |z| < 14)
// and the integration-by-parts tail beyond. E0 = sqrt(2 pi) e^{-i pi/4}.
// ---------------------------------------------------------------------------
inline Complex fresnel_E0() { return std::sqrt(kTwoPi) * std::exp(-I * kPi * 0.25); }

namespace detail {

inline Complex fresnel_series(double z) {
  // F(z) = sum_k (-i/2)^k z^{2k+1} / (k! (2k+1))
  const Complex w = -I * 0.5 * z * z;
  Complex term{z, 0.0};
  Complex sum{z, 0.0};
  for (int k = 1; k <= 80; ++k) {
    term *= w / static_cast<double>(k);
    const Complex add = term / static_cast<double>(2 * k + 1);
    sum += add;
    if (std::abs(add) < 1e-18 * (1.0 + std::abs(sum))) break;
  }
  return sum;
}

inline Complex fresnel_tail(double z) {
  // int_z^inf e^{-i s^2/2} ds = e^{-i z^2/2} sum_k (-1)^k (2k-1)!!/(i^{k+1} z^{2k+1}),
  // built by the recursion coef_{k+1} = coef_k (2k+1) i / z^2.
  Complex sum{0.0, 0.0};
  Complex coef = 1.0 / (I * z);
  for (int k = 0; k <= 8; ++k) {
    sum += coef;
    coef *= static_cast<double>(2 * k + 1) * I / (z * z);
    if (std::abs(coef) < 1e-16) break;
  }
  return std::exp(-I * 0.5 * z * z) * sum;
}

struct FresnelTable {
  static constexpr double z_lo = 3.0;
  static constexpr double z_hi = 14.0;
  static constexpr int n_per_unit = 2048;
  std::vector<Complex> F;  // F(z_lo + j*h)
  double h;

  FresnelTable() {
    const int n = static_cast<int>((z_hi - z_lo) * n_per_unit);
    h = (z_hi - z_lo) / n;
    F.resize(n + 1);
    F[0] = fresnel_series(z_lo);
    // cumulative Simpson on half-steps
    auto f = [](double s) { return std::exp(-I * 0.5 * s * s); };
    for (int j = 0; j < n; ++j) {
      const double s0 = z_lo + j * h;
      F[j + 1] = F[j] + (h / 6.0) * (f(s0) + 4.0 * f(s0 + 0.5 * h) + f(s0 + h));
    }
  }

  Complex eval(double z) const {
    const double t = (z - z_lo) / h;
    int j = static_cast<int>(t);
    if (j < 1) j = 1;
    if (j > static_cast<int>(F.size()) - 3) j = static_cast<int>(F.size()) - 3;
    const double u = t - j;
    // 4-point Lagrange interpolation
    const Complex fm1 = F[j - 1], f0 = F[j], f1 = F[j + 1], f2 = F[j + 2];
    const double c_m1 = -u * (u - 1.0) * (u - 2.0) / 6.0;
    const double c_0 = (u * u - 1.0) * (u - 2.0) / 2.0;
    const double c_1 = -u * (u + 1.0) * (u - 2.0) / 2.0;
    const double c_2 = u * (u * u - 1.0) / 6.0;
    return fm1 * c_m1 + f0 * c_0 + f1 * c_1 + f2 * c_2;
  }
};

inline const FresnelTable& fresnel_table() {
  static FresnelTable t;
  return t;
}

}  // namespace detail

inline Complex fresnel_F(double z) {
  const double az = std::abs(z);
  Complex v;
  if (az <= 3.0) {
    v = detail::fresnel_series(az);
  } else if (az < 14.0) {
    v = detail::fresnel_table().eval(az);
  } else {
    v = 0.5 * fresnel_E0() - detail::fresnel_tail(az);
  }
  return z >= 0.0 ? v : -v;
}

// int_z^inf e^{-i s^2/2} ds
inline Complex fresnel_Eplus0(double z) { return 0.5 * fresnel_E0() - fresnel_F(z); }
// int_-inf^z e^{-i s^2/2} ds
inline Complex fresnel_Eminus0(double z) { return 0.5 * fresnel_E0() + fresnel_F(z); }

}  // namespace bnls
