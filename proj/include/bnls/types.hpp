// Small complex linear-algebra kit shared by all headers: 2-vectors and
// 2x2 matrices over std::complex<double>, plus a few free helpers.
#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <vector>

namespace bnls {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;
using RVec = std::vector<double>;

inline constexpr Complex I{0.0, 1.0};

struct Vec2 {
  Complex a{0.0, 0.0};
  Complex b{0.0, 0.0};

  Vec2() = default;
  Vec2(Complex a_, Complex b_) : a(a_), b(b_) {}

  Vec2 operator+(const Vec2& o) const { return {a + o.a, b + o.b}; }
  Vec2 operator-(const Vec2& o) const { return {a - o.a, b - o.b}; }
  Vec2 operator*(Complex s) const { return {a * s, b * s}; }
  Vec2& operator+=(const Vec2& o) {
    a += o.a;
    b += o.b;
    return *this;
  }
  double norm2() const { return std::norm(a) + std::norm(b); }
  double norm() const { return std::sqrt(norm2()); }
};

inline Vec2 operator*(Complex s, const Vec2& v) { return v * s; }

struct Mat2 {
  // Row-major entries m[row][col].
  Complex m11{0.0}, m12{0.0}, m21{0.0}, m22{0.0};

  Mat2() = default;
  Mat2(Complex a, Complex b, Complex c, Complex d) : m11(a), m12(b), m21(c), m22(d) {}

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 diag(Complex d1, Complex d2) { return {d1, 0.0, 0.0, d2}; }
  static Mat2 from_cols(const Vec2& c1, const Vec2& c2) {
    return {c1.a, c2.a, c1.b, c2.b};
  }

  Vec2 col(int j) const { return j == 0 ? Vec2{m11, m21} : Vec2{m12, m22}; }

  Complex det() const { return m11 * m22 - m12 * m21; }

  Mat2 inverse() const {
    const Complex d = det();
    return {m22 / d, -m12 / d, -m21 / d, m11 / d};
  }

  Mat2 operator*(const Mat2& o) const {
    return {m11 * o.m11 + m12 * o.m21, m11 * o.m12 + m12 * o.m22,
            m21 * o.m11 + m22 * o.m21, m21 * o.m12 + m22 * o.m22};
  }
  Vec2 operator*(const Vec2& v) const {
    return {m11 * v.a + m12 * v.b, m21 * v.a + m22 * v.b};
  }
  Mat2 operator*(Complex s) const { return {m11 * s, m12 * s, m21 * s, m22 * s}; }
  Mat2 operator+(const Mat2& o) const {
    return {m11 + o.m11, m12 + o.m12, m21 + o.m21, m22 + o.m22};
  }
  Mat2 operator-(const Mat2& o) const {
    return {m11 - o.m11, m12 - o.m12, m21 - o.m21, m22 - o.m22};
  }

  double max_abs() const {
    return std::max(std::max(std::abs(m11), std::abs(m12)),
                    std::max(std::abs(m21), std::abs(m22)));
  }
};

// Ratio functional F(b) = b1 conj(b2) / (|b1|^2 + |b2|^2); invariant under
// complex rescaling of b, which is what makes projective integration exact.
inline Complex ratio_functional(const Vec2& v) {
  const double n = v.norm2();
  return v.a * std::conj(v.b) / n;
}

// J conj(v) with J = [[0,-1],[1,0]]; maps a ZS solution column at z to one
// at conj(z) and completes a frame column to a det>0 frame.
inline Vec2 symplectic_partner(const Vec2& v) {
  return {-std::conj(v.b), std::conj(v.a)};
}

}  // namespace bnls
