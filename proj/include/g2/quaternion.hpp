#pragma once

#include <cmath>
#include <ostream>

#include <Eigen/Core>

namespace g2 {

struct Quaternion {
  double w = 0.0, x = 0.0, y = 0.0, z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}

  static constexpr Quaternion one() { return {1, 0, 0, 0}; }
  static constexpr Quaternion i() { return {0, 1, 0, 0}; }
  static constexpr Quaternion j() { return {0, 0, 1, 0}; }
  static constexpr Quaternion k() { return {0, 0, 0, 1}; }
  // Imaginary quaternion a1 i + a2 j + a3 k.
  static Quaternion pure(const Eigen::Vector3d& a) { return {0, a[0], a[1], a[2]}; }
  static Quaternion from_vec(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }

  Eigen::Vector4d vec() const { return {w, x, y, z}; }
  Eigen::Vector3d imag() const { return {x, y, z}; }
  double real() const { return w; }

  Quaternion conj() const { return {w, -x, -y, -z}; }
  double norm2() const { return w * w + x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm2()); }
  Quaternion inverse() const;
  Quaternion normalized() const;
  Quaternion im_part() const { return {0, x, y, z}; }

  Quaternion& operator+=(const Quaternion& o);
  Quaternion& operator-=(const Quaternion& o);
  Quaternion& operator*=(double s);
  Quaternion operator-() const { return {-w, -x, -y, -z}; }
  bool operator==(const Quaternion&) const = default;
};

Quaternion quat_mul(const Quaternion& p, const Quaternion& q);
inline Quaternion operator*(const Quaternion& p, const Quaternion& q) { return quat_mul(p, q); }
inline Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
inline Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
inline Quaternion operator*(double s, Quaternion a) { return a *= s; }
inline Quaternion operator*(Quaternion a, double s) { return a *= s; }
inline double dot(const Quaternion& a, const Quaternion& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}
inline double distance(const Quaternion& a, const Quaternion& b) { return (a - b).norm(); }

// exp of a quaternion (the usual case is a purely imaginary argument).
Quaternion quat_exp(const Quaternion& a);

// 4x4 real matrices of y -> p y and y -> y p in the basis (1, i, j, k).
Eigen::Matrix4d left_matrix(const Quaternion& p);
Eigen::Matrix4d right_matrix(const Quaternion& p);

std::ostream& operator<<(std::ostream& os, const Quaternion& q);

}  // namespace g2
