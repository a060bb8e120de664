#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace wkspin {

using Complex = std::complex<double>;

/// Dense complex 2x2 matrix, row major: a[0]=a11 a[1]=a12 a[2]=a21 a[3]=a22.
struct Mat2 {
  std::array<Complex, 4> a{};

  static Mat2 zero() { return {}; }
  static Mat2 identity() {
    Mat2 m;
    m.a[0] = 1.0;
    m.a[3] = 1.0;
    return m;
  }

  Complex& operator()(int i, int j) { return a[2 * i + j]; }
  const Complex& operator()(int i, int j) const { return a[2 * i + j]; }
};

inline Mat2 operator+(const Mat2& x, const Mat2& y) {
  Mat2 r;
  for (int i = 0; i < 4; ++i) r.a[i] = x.a[i] + y.a[i];
  return r;
}

inline Mat2 operator-(const Mat2& x, const Mat2& y) {
  Mat2 r;
  for (int i = 0; i < 4; ++i) r.a[i] = x.a[i] - y.a[i];
  return r;
}

inline Mat2 operator*(Complex s, const Mat2& x) {
  Mat2 r;
  for (int i = 0; i < 4; ++i) r.a[i] = s * x.a[i];
  return r;
}

inline Mat2 operator*(double s, const Mat2& x) { return Complex(s, 0.0) * x; }

inline Mat2 operator*(const Mat2& x, const Mat2& y) {
  Mat2 r;
  r.a[0] = x.a[0] * y.a[0] + x.a[1] * y.a[2];
  r.a[1] = x.a[0] * y.a[1] + x.a[1] * y.a[3];
  r.a[2] = x.a[2] * y.a[0] + x.a[3] * y.a[2];
  r.a[3] = x.a[2] * y.a[1] + x.a[3] * y.a[3];
  return r;
}

inline Mat2 adjoint(const Mat2& x) {
  Mat2 r;
  r.a[0] = std::conj(x.a[0]);
  r.a[1] = std::conj(x.a[2]);
  r.a[2] = std::conj(x.a[1]);
  r.a[3] = std::conj(x.a[3]);
  return r;
}

inline Mat2 commutator(const Mat2& x, const Mat2& y) { return x * y - y * x; }

inline double max_abs(const Mat2& x) {
  double m = 0.0;
  for (const auto& z : x.a) m = std::max(m, std::abs(z));
  return m;
}

/// max-entry magnitude of x - x^dagger (0 for Hermitian), of x + x^dagger (0 for anti-Hermitian)
inline double anti_hermitian_defect(const Mat2& x) { return max_abs(x + adjoint(x)); }

/// Two-component complex spinor.
struct Spinor {
  Complex z1{}, z2{};

  double norm_sq() const { return std::norm(z1) + std::norm(z2); }
  double norm() const { return std::sqrt(norm_sq()); }
};

inline Spinor operator*(const Mat2& m, const Spinor& s) {
  return {m.a[0] * s.z1 + m.a[1] * s.z2, m.a[2] * s.z1 + m.a[3] * s.z2};
}

inline Spinor operator*(Complex c, const Spinor& s) { return {c * s.z1, c * s.z2}; }
inline Spinor operator*(double c, const Spinor& s) { return {c * s.z1, c * s.z2}; }
inline Spinor operator+(const Spinor& x, const Spinor& y) { return {x.z1 + y.z1, x.z2 + y.z2}; }
inline Spinor operator-(const Spinor& x, const Spinor& y) { return {x.z1 - y.z1, x.z2 - y.z2}; }

/// Hermitian inner product, conjugate-linear in the second slot.
inline Complex hermitian_pair(const Spinor& phi, const Spinor& psi) {
  return phi.z1 * std::conj(psi.z1) + phi.z2 * std::conj(psi.z2);
}

/// Ascending eigenvalues of a Hermitian 2x2 matrix, with orthonormal eigenvectors.
struct HermitianEigen {
  std::array<double, 2> values;
  std::array<Spinor, 2> vectors;
};

HermitianEigen eigen_hermitian(const Mat2& h);

}  // namespace wkspin
