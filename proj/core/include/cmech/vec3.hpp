#pragma once

#include <array>
#include <algorithm>
#include <cmath>
#include <utility>

namespace cmech {

/// Plain 3-vector over an arbitrary scalar (double, or Dual for
/// forward-mode differentiation).
template <typename T>
struct BasicVec3 {
  T x{}, y{}, z{};

  constexpr BasicVec3() = default;
  constexpr BasicVec3(T x_, T y_, T z_) : x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {}

  BasicVec3& operator+=(const BasicVec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  BasicVec3& operator-=(const BasicVec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  BasicVec3& operator*=(const T& s) { x *= s; y *= s; z *= s; return *this; }

  friend BasicVec3 operator+(BasicVec3 a, const BasicVec3& b) { return a += b; }
  friend BasicVec3 operator-(BasicVec3 a, const BasicVec3& b) { return a -= b; }
  friend BasicVec3 operator-(const BasicVec3& a) { return {-a.x, -a.y, -a.z}; }
  friend BasicVec3 operator*(BasicVec3 a, const T& s) { return a *= s; }
  friend BasicVec3 operator*(const T& s, BasicVec3 a) { return a *= s; }
  friend BasicVec3 operator/(const BasicVec3& a, const T& s) { return {a.x / s, a.y / s, a.z / s}; }

  friend bool operator==(const BasicVec3&, const BasicVec3&) = default;
};

using Vec3 = BasicVec3<double>;

template <typename T>
T dot(const BasicVec3<T>& a, const BasicVec3<T>& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <typename T>
BasicVec3<T> cross(const BasicVec3<T>& a, const BasicVec3<T>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

template <typename T>
T norm(const BasicVec3<T>& a) {
  using std::sqrt;
  return sqrt(dot(a, a));
}

template <typename T>
BasicVec3<T> normalized(const BasicVec3<T>& a) {
  return a / norm(a);
}

inline bool is_finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

inline double max_abs(const Vec3& v) {
  return std::max({std::abs(v.x), std::abs(v.y), std::abs(v.z)});
}

/// Row-major 3x3 matrix; used for rigid rotations.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  double operator()(int r, int c) const { return m[static_cast<std::size_t>(3 * r + c)]; }
  double& operator()(int r, int c) { return m[static_cast<std::size_t>(3 * r + c)]; }

  friend Vec3 operator*(const Mat3& a, const Vec3& v) {
    return {a(0, 0) * v.x + a(0, 1) * v.y + a(0, 2) * v.z,
            a(1, 0) * v.x + a(1, 1) * v.y + a(1, 2) * v.z,
            a(2, 0) * v.x + a(2, 1) * v.y + a(2, 2) * v.z};
  }

  friend Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
        r(i, j) = s;
      }
    return r;
  }
};

/// Right-handed rotation by `angle` about the (not necessarily unit) `axis`.
inline Mat3 rotation_about(const Vec3& axis, double angle) {
  const Vec3 u = normalized(axis);
  const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  Mat3 r;
  r(0, 0) = c + u.x * u.x * t;
  r(0, 1) = u.x * u.y * t - u.z * s;
  r(0, 2) = u.x * u.z * t + u.y * s;
  r(1, 0) = u.y * u.x * t + u.z * s;
  r(1, 1) = c + u.y * u.y * t;
  r(1, 2) = u.y * u.z * t - u.x * s;
  r(2, 0) = u.z * u.x * t - u.y * s;
  r(2, 1) = u.z * u.y * t + u.x * s;
  r(2, 2) = c + u.z * u.z * t;
  return r;
}

}  // namespace cmech
